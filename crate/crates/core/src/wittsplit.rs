//! The splitting `W_{re}(k) / V_e W_r(k) ≅ ∏ W_{h(m')}(k)` over the integers
//! `1 ≤ m' ≤ re` prime to `p`, together with an enumeration oracle that
//! computes the quotient directly from Witt vector addition over `F_p`.

use crate::exactalg::GroupStructure;
use crate::numtheory::{is_prime, log_exact, split_prime_power};
use crate::witt::{IndexedFpWitt, TruncationSet};
use crate::{Error, Result};

/// Default cap on `p^{re}` for [`brute_force_quotient`].
pub const DEFAULT_ENUM_BOUND: u128 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitParams {
    pub p: u64,
    pub r: u64,
    pub e: u64,
    /// `e = p^u · e'` with `p ∤ e'`.
    pub u: u32,
    pub e_prime: u64,
}

impl SplitParams {
    pub fn new(p: u64, r: u64, e: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if r == 0 || e == 0 {
            return Err(Error::InvalidParameter(format!(
                "r and e must be positive (r={r}, e={e})"
            )));
        }
        let (u, e_prime) = split_prime_power(p, e);
        Ok(Self { p, r, e, u, e_prime })
    }

    pub fn re(&self) -> u64 {
        self.r * self.e
    }

    /// The weights `1 ≤ m' ≤ re` with `p ∤ m'` indexing the factors.
    pub fn weight_classes(&self) -> impl Iterator<Item = u64> + '_ {
        (1..=self.re()).filter(move |m| m % self.p != 0)
    }
}

/// The unique `s ≥ 1` with `p^{s−1} d ≤ r < p^s d`, or 0 when `d > r`.
pub fn s_function(p: u64, r: u64, d: u64) -> u32 {
    assert!(p >= 2 && d >= 1);
    if d > r {
        return 0;
    }
    let (r, mut bound) = (r as u128, d as u128 * p as u128);
    let mut s = 1;
    while bound <= r {
        bound *= p as u128;
        s += 1;
    }
    s
}

/// `h(p, r, e, m')`: `s(p, re, m')` if `e' ∤ m'`, else `min(u, s(p, re, m'))`.
pub fn h_function(params: &SplitParams, m_prime: u64) -> Result<u32> {
    if m_prime == 0 || m_prime % params.p == 0 {
        return Err(Error::InvalidParameter(format!(
            "weight class {m_prime} must be positive and prime to {}",
            params.p
        )));
    }
    let s = s_function(params.p, params.re(), m_prime);
    Ok(if m_prime % params.e_prime != 0 {
        s
    } else {
        s.min(params.u)
    })
}

/// `∏ W_h(F_p)` as invariant factors `p^h`, zero exponents omitted.
pub fn predicted_quotient(params: &SplitParams) -> GroupStructure {
    GroupStructure::from_exponents(
        params.p,
        params
            .weight_classes()
            .map(|m| h_function(params, m).expect("m' prime to p")),
    )
}

/// Structure of `W_{re}(F_p) / V_e W_r(F_p)` by enumeration.
///
/// Every element of `W_{re}(F_p)` is enumerated and multiplication by `p` is
/// tabulated with Witt vector arithmetic; the quotient structure is read off
/// from the number of elements `a` with `p^k a ∈ V_e W_r(F_p)`.
pub fn brute_force_quotient(params: &SplitParams, bound: u128) -> Result<GroupStructure> {
    let p = params.p;
    let n = params.re();
    let size = (p as u128)
        .checked_pow(u32::try_from(n).unwrap_or(u32::MAX))
        .unwrap_or(u128::MAX);
    if size > bound {
        return Err(Error::BoundExceeded { size, bound });
    }
    let size = size as u64;
    let mut group = IndexedFpWitt::new(TruncationSet::big(n), p)?;

    let mut in_image = vec![false; size as usize];
    let mut image_size = 0u64;
    let small_size = p.pow(params.r as u32);
    for idx in 0..small_size {
        let j = verschiebung_index(p, params.e, params.r, idx);
        if !in_image[j as usize] {
            in_image[j as usize] = true;
            image_size += 1;
        }
    }
    if image_size != small_size {
        return Err(Error::IdentityFailure(format!(
            "V_{} is not injective: image has {image_size} elements",
            params.e
        )));
    }
    if image_size == size {
        return Ok(GroupStructure::trivial(p));
    }

    // times_p[idx] = index of p·a
    let mut times_p = vec![0u64; size as usize];
    for idx in 0..size {
        times_p[idx as usize] = group.scale(idx, p as i64)?;
    }

    // killed[k] = #{a : p^k a ∈ image}
    let mut killed: Vec<u64> = Vec::new();
    let mut current: Vec<u64> = (0..size).collect();
    loop {
        let count = current.iter().filter(|&&i| in_image[i as usize]).count() as u64;
        killed.push(count);
        if count == size {
            break;
        }
        if killed.len() > 128 {
            return Err(Error::IdentityFailure("quotient is not a p-group".into()));
        }
        for c in current.iter_mut() {
            *c = times_p[*c as usize];
        }
    }

    // In the quotient, #{x : p^k x = 0} = killed[k] / |image|; the number of
    // cyclic factors of exponent ≥ k is log_p of the ratio of successive counts.
    let mut at_least = Vec::new();
    for k in 1..killed.len() {
        let ratio = killed[k] / killed[k - 1];
        if ratio * killed[k - 1] != killed[k] {
            return Err(Error::IdentityFailure("non-integral count ratio".into()));
        }
        at_least.push(log_exact(p, ratio).ok_or_else(|| {
            Error::IdentityFailure(format!("count ratio {ratio} is not a power of {p}"))
        })?);
    }
    let mut exponents = Vec::new();
    for (i, &c) in at_least.iter().enumerate() {
        let next = at_least.get(i + 1).copied().unwrap_or(0);
        if next > c {
            return Err(Error::IdentityFailure("inconsistent order counts".into()));
        }
        exponents.extend(std::iter::repeat(i as u32 + 1).take((c - next) as usize));
    }
    Ok(GroupStructure::from_exponents(p, exponents))
}

/// Index of `V_e b` in `W_{re}(F_p)` for `b ∈ W_r(F_p)` with index `idx`:
/// coordinate `j` of `b` moves to coordinate `ej`.
fn verschiebung_index(p: u64, e: u64, r: u64, mut idx: u64) -> u64 {
    let mut out = 0u64;
    for j in 1..=r {
        let digit = idx % p;
        idx /= p;
        out += digit * p.pow((e * j - 1) as u32);
    }
    out
}
