//! Assembly of `TC_{2r−1}` of the truncated polynomial algebra relative to
//! `(x)` from per-weight-class equalizers of `φ` and `can`.
//!
//! For a weight class `m'` prime to `p`, the group in degree `2r−1` is the
//! kernel of `φ − can : ∏_v TC⁻(p^v m') → ∏_v TP(p^v m')`. Each factor is
//! cyclic with length from [`closed_form`]; `can` is reduction and `φ` is an
//! isomorphism in the Frobenius range and divisible by `p` outside it.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cycbar::d_function;
use crate::exactalg::{kernel_invariants, GroupStructure, IntMatrix};
use crate::ssengine::closed_form;
use crate::wittsplit::{
    brute_force_quotient, predicted_quotient, s_function, SplitParams,
};
use crate::{Error, Result};

/// Shape of `φ_v : Z/p^{c_{v−1}} → Z/p^{t_v}`: `unit · p^{p_power}` applied
/// to the canonical generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PhiShape {
    pub unit: u64,
    pub p_power: u32,
    pub in_frobenius_range: bool,
}

/// Finite truncation `v = 0..=V` of the equalizer for one weight class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualizerModel {
    pub p: u64,
    pub m_prime: u64,
    /// `c_v`: length of `TC⁻_{2r−1}` of weight `p^v m'`.
    pub source_lengths: Vec<u32>,
    /// `t_v`: length of `TP_{2r−1}` of weight `p^v m'`.
    pub target_lengths: Vec<u32>,
    /// `phi[v]` maps index `v−1` to index `v`; `phi[0]` is `None`.
    pub phi: Vec<Option<PhiShape>>,
}

/// Source of units for `φ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Units {
    One,
    Random(u64),
}

/// Default truncation level `s + u + 2`.
pub fn default_levels(params: &SplitParams, m_prime: u64) -> u32 {
    s_function(params.p, params.re(), m_prime) + params.u + 2
}

/// Whether `φ` out of weight `m` is an isomorphism in degree `2R+1`.
fn in_frobenius_range(e: u64, m: u64, big_r: i64) -> bool {
    let d = d_function(e, m) as i64;
    if m % e != 0 {
        big_r >= d
    } else {
        big_r > d
    }
}

fn pow_checked(p: u64, k: u32) -> Result<u64> {
    p.checked_pow(k)
        .ok_or_else(|| Error::InvalidParameter(format!("{p}^{k} overflows")))
}

impl EqualizerModel {
    /// Model for degree `2r−1` and weight class `m'` with indices `0..=levels`.
    pub fn build(params: &SplitParams, m_prime: u64, levels: u32, units: Units) -> Result<Self> {
        let (p, e) = (params.p, params.e);
        if m_prime == 0 || m_prime % p == 0 {
            return Err(Error::InvalidParameter(format!(
                "weight class {m_prime} must be positive and prime to {p}"
            )));
        }
        let big_r = params.r as i64 - 1;
        let mut rng = match units {
            Units::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            Units::One => None,
        };
        let mut source_lengths = Vec::new();
        let mut target_lengths = Vec::new();
        let mut phi = Vec::new();
        let mut weight = m_prime;
        for v in 0..=levels {
            if v > 0 {
                weight = weight
                    .checked_mul(p)
                    .ok_or_else(|| Error::InvalidParameter("weight overflows".into()))?;
            }
            let tower = closed_form(p, e, weight, big_r);
            source_lengths.push(tower.tcminus_length);
            target_lengths.push(tower.tp_length);
            if v == 0 {
                phi.push(None);
                continue;
            }
            let unit = match &mut rng {
                Some(rng) => rng.gen_range(1..p),
                None => 1,
            };
            let (c_prev, t) = (source_lengths[v as usize - 1], tower.tp_length);
            let in_range = in_frobenius_range(e, weight / p, big_r);
            let p_power = if in_range {
                if c_prev != t {
                    return Err(Error::IdentityFailure(format!(
                        "φ into index {v} of weight class {m_prime} should be an isomorphism \
                         but has lengths {c_prev} → {t}"
                    )));
                }
                0
            } else {
                t.saturating_sub(c_prev).max(1)
            };
            phi.push(Some(PhiShape {
                unit,
                p_power,
                in_frobenius_range: in_range,
            }));
        }
        Ok(Self {
            p,
            m_prime,
            source_lengths,
            target_lengths,
            phi,
        })
    }

    /// Relations of `φ − can`: rows are target indices, columns are source
    /// indices.
    pub fn relation_matrix(&self) -> IntMatrix {
        let n = self.source_lengths.len();
        let p = BigInt::from(self.p);
        IntMatrix::from_fn(n, n, |v, j| {
            if j == v {
                BigInt::from(-1)
            } else if j + 1 == v {
                let shape = self.phi[v].expect("φ into every positive index");
                BigInt::from(shape.unit) * num_traits::pow(p.clone(), shape.p_power as usize)
            } else {
                BigInt::from(0)
            }
        })
    }

    pub fn kernel(&self) -> Result<GroupStructure> {
        let source: Vec<u64> = self
            .source_lengths
            .iter()
            .map(|&c| pow_checked(self.p, c))
            .collect::<Result<_>>()?;
        let target: Vec<u64> = self
            .target_lengths
            .iter()
            .map(|&t| pow_checked(self.p, t))
            .collect::<Result<_>>()?;
        kernel_invariants(self.p, &self.relation_matrix(), &source, &target)
    }
}

/// Length from the case analysis on `m'`: `s` if `e' ∤ m'`, `s` if `e' | m'`
/// and `s < u`, `u` if `u ≤ s`, with `s = s(p, re, m')`.
pub fn case_analysis_length(params: &SplitParams, m_prime: u64) -> u32 {
    let s = s_function(params.p, params.re(), m_prime);
    if m_prime % params.e_prime != 0 || s < params.u {
        s
    } else {
        params.u
    }
}

/// The group of weight class `m'` in degree `2r−1`, computed as the kernel of
/// the equalizer model and checked against the case analysis.
pub fn tc_weight_group(p: u64, e: u64, r: u64, m_prime: u64) -> Result<GroupStructure> {
    let params = SplitParams::new(p, r, e)?;
    tc_weight_group_with(&params, m_prime, default_levels(&params, m_prime), Units::One)
}

/// [`tc_weight_group`] with an explicit truncation level and choice of units.
pub fn tc_weight_group_with(
    params: &SplitParams,
    m_prime: u64,
    levels: u32,
    units: Units,
) -> Result<GroupStructure> {
    let kernel = EqualizerModel::build(params, m_prime, levels, units)?.kernel()?;
    let expected = GroupStructure::cyclic(params.p, case_analysis_length(params, m_prime));
    if kernel != expected {
        return Err(Error::RouteDisagreement(format!(
            "weight class {m_prime} (p={}, e={}, r={}): equalizer kernel {kernel}, case analysis {expected}",
            params.p, params.e, params.r
        )));
    }
    Ok(kernel)
}

/// `TC_{2r−1}(k[x]/(x^e), (x))` for `k = F_{p^f}`: the product over weight
/// classes, every factor repeated `f` times.
pub fn tc_groups(p: u64, e: u64, r: u64, f: u32) -> Result<GroupStructure> {
    if f == 0 {
        return Err(Error::InvalidParameter("residue degree must be positive".into()));
    }
    let params = SplitParams::new(p, r, e)?;
    let mut total = GroupStructure::trivial(p);
    for m_prime in params.weight_classes() {
        let g = tc_weight_group_with(&params, m_prime, default_levels(&params, m_prime), Units::One)?;
        total = total.product(&g);
    }
    Ok(total.scaled(f))
}

/// The relative group in degree `n ≥ 1`; trivial in even degrees.
pub fn tc_group_in_degree(p: u64, e: u64, n: u64, f: u32) -> Result<GroupStructure> {
    if n == 0 {
        return Err(Error::InvalidParameter("degree must be positive".into()));
    }
    if n % 2 == 0 {
        SplitParams::new(p, 1, e.max(1))?;
        return Ok(GroupStructure::trivial(p).scaled(f));
    }
    tc_groups(p, e, n.div_ceil(2), f)
}

/// `K_{2r−1}(k[x]/(x^e), (x))`, identified with the relative `TC` group.
pub fn k_groups(p: u64, e: u64, r: u64, f: u32) -> Result<GroupStructure> {
    tc_groups(p, e, r, f)
}

/// Outcome of comparing enumeration, the closed-form product and the
/// equalizer assembly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    pub p: u64,
    pub e: u64,
    pub r: u64,
    /// `None` when `p^{re}` exceeds the enumeration bound.
    pub brute_force: Option<GroupStructure>,
    pub predicted: GroupStructure,
    pub assembled: std::result::Result<GroupStructure, Error>,
    pub passed: bool,
}

impl CrossCheck {
    pub fn note(&self) -> String {
        let a = match &self.brute_force {
            Some(g) => g.to_string(),
            None => "skipped (above enumeration bound)".to_string(),
        };
        let c = match &self.assembled {
            Ok(g) => g.to_string(),
            Err(err) => format!("error: {err}"),
        };
        format!(
            "p={} e={} r={}: A={a} B={} C={c} {}",
            self.p,
            self.e,
            self.r,
            self.predicted,
            if self.passed { "ok" } else { "MISMATCH" }
        )
    }
}

pub fn cross_check(p: u64, e: u64, r: u64, bound: u128) -> Result<CrossCheck> {
    let params = SplitParams::new(p, r, e)?;
    let brute_force = match brute_force_quotient(&params, bound) {
        Ok(g) => Some(g),
        Err(Error::BoundExceeded { .. }) => None,
        Err(err) => return Err(err),
    };
    let predicted = predicted_quotient(&params);
    let assembled = tc_groups(p, e, r, 1);
    let passed = assembled.as_ref().is_ok_and(|c| {
        *c == predicted && brute_force.as_ref().map_or(true, |a| *a == predicted)
    });
    Ok(CrossCheck {
        p,
        e,
        r,
        brute_force,
        predicted,
        assembled,
        passed,
    })
}
