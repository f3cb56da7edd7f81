//! Witt vectors on finite truncation sets over the integers and over `F_p`.
//!
//! Ring operations are carried out through the ghost map
//! `w_n = Σ_{d | n} d · a_d^{n/d}` followed by the inverse recursion
//! `a_n = (w_n − Σ_{d | n, d < n} d · a_d^{n/d}) / n`, which is integral for
//! sums, products, Frobenius images and integer multiples of integral vectors.
//! Vectors over `F_p` are lifted to `{0, …, p−1}`, operated on over the
//! integers and reduced coordinatewise.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::numtheory::is_prime;
use crate::{Error, Result};

/// A finite set of positive integers closed under taking divisors.
#[derive(Clone)]
pub struct TruncationSet(Arc<TruncInner>);

struct TruncInner {
    elements: Vec<u64>,
    index: HashMap<u64, usize>,
    /// For each position, the positions and values of the divisors in the set
    /// (including the element itself, which comes last).
    divisors: Vec<Vec<(usize, u64)>>,
}

impl TruncationSet {
    /// `{1, …, n}`, the truncation set of the big Witt vectors `W_n`.
    pub fn big(n: u64) -> Self {
        Self::build((1..=n).collect())
    }

    /// `{1, p, …, p^{s−1}}`, the truncation set of the p-typical `W_s`.
    pub fn p_typical(p: u64, s: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut elems = Vec::with_capacity(s as usize);
        let mut q = 1u64;
        for i in 0..s {
            elems.push(q);
            if i + 1 < s {
                q = q.checked_mul(p).ok_or_else(|| {
                    Error::InvalidTruncation(format!("p^{} overflows", s - 1))
                })?;
            }
        }
        Ok(Self::build(elems))
    }

    /// Arbitrary division-closed set.
    pub(crate) fn from_elements(mut elements: Vec<u64>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if elements.first() == Some(&0) {
            return Err(Error::InvalidTruncation("0 is not allowed".into()));
        }
        for &n in &elements {
            for d in 1..n {
                if n % d == 0 && elements.binary_search(&d).is_err() {
                    return Err(Error::InvalidTruncation(format!(
                        "{d} divides {n} but is missing"
                    )));
                }
            }
        }
        Ok(Self::build(elements))
    }

    fn build(elements: Vec<u64>) -> Self {
        let index: HashMap<u64, usize> =
            elements.iter().enumerate().map(|(i, &n)| (n, i)).collect();
        let divisors = elements
            .iter()
            .map(|&n| {
                elements
                    .iter()
                    .enumerate()
                    .filter(|&(_, &d)| d <= n && n % d == 0)
                    .map(|(j, &d)| (j, d))
                    .collect()
            })
            .collect();
        Self(Arc::new(TruncInner {
            elements,
            index,
            divisors,
        }))
    }

    pub fn elements(&self) -> &[u64] {
        &self.0.elements
    }

    pub fn len(&self) -> usize {
        self.0.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.elements.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.0.index.contains_key(&n)
    }

    pub fn position(&self, n: u64) -> Option<usize> {
        self.0.index.get(&n).copied()
    }

    /// `S/d = {n : dn ∈ S}`.
    pub fn quotient(&self, d: u64) -> Self {
        assert!(d >= 1);
        Self::from_elements(
            self.elements()
                .iter()
                .filter(|&&n| n % d == 0)
                .map(|&n| n / d)
                .collect(),
        )
        .expect("quotient of a division-closed set is division-closed")
    }

    pub fn is_subset_of(&self, other: &TruncationSet) -> bool {
        self.elements().iter().all(|&n| other.contains(n))
    }
}

impl PartialEq for TruncationSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.elements == other.0.elements
    }
}

impl Eq for TruncationSet {}

impl fmt::Debug for TruncationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.elements)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum CoeffRing {
    Integers,
    Fp(u64),
}

impl CoeffRing {
    pub fn fp(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(CoeffRing::Fp(p))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct WittVector {
    trunc: TruncationSet,
    ring: CoeffRing,
    coords: Vec<BigInt>,
}

impl fmt::Debug for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(|x| x.to_string()).collect();
        write!(f, "W{:?}{:?}({})", self.trunc, self.ring, c.join(","))
    }
}

// Integer arithmetic for the ghost recursion. The i128 path is tried first and
// falls back to BigInt on overflow.
enum Fail {
    Overflow,
    Inexact(u64),
}

trait GhostInt: Sized + Clone {
    fn from_u64(n: u64) -> Self;
    fn from_i64(n: i64) -> Self;
    fn add(&self, o: &Self) -> Result<Self, Fail>;
    fn sub(&self, o: &Self) -> Result<Self, Fail>;
    fn mul(&self, o: &Self) -> Result<Self, Fail>;
    fn pow(&self, e: u64) -> Result<Self, Fail>;
    fn div_exact(&self, n: u64) -> Result<Self, Fail>;
}

impl GhostInt for i128 {
    fn from_u64(n: u64) -> Self {
        n as i128
    }
    fn from_i64(n: i64) -> Self {
        n as i128
    }
    fn add(&self, o: &Self) -> Result<Self, Fail> {
        self.checked_add(*o).ok_or(Fail::Overflow)
    }
    fn sub(&self, o: &Self) -> Result<Self, Fail> {
        self.checked_sub(*o).ok_or(Fail::Overflow)
    }
    fn mul(&self, o: &Self) -> Result<Self, Fail> {
        self.checked_mul(*o).ok_or(Fail::Overflow)
    }
    fn pow(&self, e: u64) -> Result<Self, Fail> {
        let e = u32::try_from(e).map_err(|_| Fail::Overflow)?;
        self.checked_pow(e).ok_or(Fail::Overflow)
    }
    fn div_exact(&self, n: u64) -> Result<Self, Fail> {
        let n = n as i128;
        if self % n != 0 {
            return Err(Fail::Inexact(n as u64));
        }
        Ok(self / n)
    }
}

impl GhostInt for BigInt {
    fn from_u64(n: u64) -> Self {
        BigInt::from(n)
    }
    fn from_i64(n: i64) -> Self {
        BigInt::from(n)
    }
    fn add(&self, o: &Self) -> Result<Self, Fail> {
        Ok(self + o)
    }
    fn sub(&self, o: &Self) -> Result<Self, Fail> {
        Ok(self - o)
    }
    fn mul(&self, o: &Self) -> Result<Self, Fail> {
        Ok(self * o)
    }
    fn pow(&self, e: u64) -> Result<Self, Fail> {
        let e = u32::try_from(e).map_err(|_| Fail::Overflow)?;
        Ok(num_traits::Pow::pow(self, e))
    }
    fn div_exact(&self, n: u64) -> Result<Self, Fail> {
        let (q, r) = self.div_rem(&BigInt::from(n));
        if !r.is_zero() {
            return Err(Fail::Inexact(n));
        }
        Ok(q)
    }
}

fn ghost_generic<T: GhostInt>(trunc: &TruncationSet, coords: &[T]) -> Result<Vec<T>, Fail> {
    let elems = trunc.elements();
    let mut out = Vec::with_capacity(elems.len());
    for (i, &n) in elems.iter().enumerate() {
        let mut acc = T::from_u64(0);
        for &(j, d) in &trunc.0.divisors[i] {
            let term = T::from_u64(d).mul(&coords[j].pow(n / d)?)?;
            acc = acc.add(&term)?;
        }
        out.push(acc);
    }
    Ok(out)
}

fn inverse_ghost_generic<T: GhostInt>(trunc: &TruncationSet, ghost: &[T]) -> Result<Vec<T>, Fail> {
    let elems = trunc.elements();
    let mut coords: Vec<T> = Vec::with_capacity(elems.len());
    for (i, &n) in elems.iter().enumerate() {
        let mut rest = ghost[i].clone();
        for &(j, d) in &trunc.0.divisors[i] {
            if d == n {
                continue;
            }
            let term = T::from_u64(d).mul(&coords[j].pow(n / d)?)?;
            rest = rest.sub(&term)?;
        }
        coords.push(rest.div_exact(n).map_err(|_| Fail::Inexact(n))?);
    }
    Ok(coords)
}

fn to_i128(v: &[BigInt]) -> Option<Vec<i128>> {
    v.iter().map(ToPrimitive::to_i128).collect()
}

/// Componentwise operation on ghost vectors.
enum GhostOp<'a> {
    Add,
    Sub,
    Mul,
    Scale(i64),
    /// Component `i` of the result is component `positions[i]` of the input.
    Select(&'a [usize]),
}

impl GhostOp<'_> {
    fn apply<T: GhostInt>(&self, g: &[Vec<T>]) -> Result<Vec<T>, Fail> {
        match self {
            GhostOp::Add => g[0].iter().zip(&g[1]).map(|(a, b)| a.add(b)).collect(),
            GhostOp::Sub => g[0].iter().zip(&g[1]).map(|(a, b)| a.sub(b)).collect(),
            GhostOp::Mul => g[0].iter().zip(&g[1]).map(|(a, b)| a.mul(b)).collect(),
            GhostOp::Scale(k) => {
                let k = T::from_i64(*k);
                g[0].iter().map(|a| a.mul(&k)).collect()
            }
            GhostOp::Select(pos) => Ok(pos.iter().map(|&i| g[0][i].clone()).collect()),
        }
    }
}

fn run_ghost_op<T: GhostInt>(
    target: &TruncationSet,
    inputs: &[(&TruncationSet, Vec<T>)],
    op: &GhostOp,
) -> Result<Vec<T>, Fail> {
    let ghosts = inputs
        .iter()
        .map(|(t, c)| ghost_generic(t, c))
        .collect::<Result<Vec<_>, Fail>>()?;
    inverse_ghost_generic(target, &op.apply(&ghosts)?)
}

/// Applies `op` to the ghost vectors of the integer lifts and inverts the
/// ghost map on `target`.
fn through_ghost(
    target: &TruncationSet,
    inputs: &[(&TruncationSet, &[BigInt])],
    op: GhostOp,
) -> Result<Vec<BigInt>> {
    let small: Option<Vec<(&TruncationSet, Vec<i128>)>> = inputs
        .iter()
        .map(|(t, c)| to_i128(c).map(|c| (*t, c)))
        .collect();
    if let Some(small) = small {
        match run_ghost_op(target, &small, &op) {
            Ok(c) => return Ok(c.into_iter().map(BigInt::from).collect()),
            Err(Fail::Inexact(n)) => return Err(Error::InexactGhost { n }),
            Err(Fail::Overflow) => {}
        }
    }
    let big: Vec<(&TruncationSet, Vec<BigInt>)> =
        inputs.iter().map(|(t, c)| (*t, c.to_vec())).collect();
    run_ghost_op(target, &big, &op).map_err(|e| match e {
        Fail::Inexact(n) => Error::InexactGhost { n },
        Fail::Overflow => Error::InvalidParameter("exponent overflow in ghost map".into()),
    })
}

impl WittVector {
    pub fn new(trunc: TruncationSet, ring: CoeffRing, coords: Vec<BigInt>) -> Result<Self> {
        if coords.len() != trunc.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for truncation set of size {}",
                coords.len(),
                trunc.len()
            )));
        }
        if let CoeffRing::Fp(p) = ring {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
        }
        let mut v = Self { trunc, ring, coords };
        v.reduce();
        Ok(v)
    }

    pub fn from_i64s(trunc: TruncationSet, ring: CoeffRing, coords: &[i64]) -> Result<Self> {
        Self::new(trunc, ring, coords.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(trunc: TruncationSet, ring: CoeffRing) -> Self {
        let n = trunc.len();
        Self {
            trunc,
            ring,
            coords: vec![BigInt::zero(); n],
        }
    }

    /// Multiplicative unit: `a_1 = 1`, all other coordinates zero.
    pub fn one(trunc: TruncationSet, ring: CoeffRing) -> Self {
        let mut v = Self::zero(trunc, ring);
        if let Some(i) = v.trunc.position(1) {
            v.coords[i] = BigInt::one();
        }
        v
    }

    /// Inverts the ghost map over the integers.
    pub fn from_ghost(trunc: TruncationSet, ghost: &[BigInt]) -> Result<Self> {
        if ghost.len() != trunc.len() {
            return Err(Error::DimensionMismatch("ghost vector length".into()));
        }
        let coords = inverse_ghost_generic(&trunc, ghost).map_err(|e| match e {
            Fail::Inexact(n) => Error::InexactGhost { n },
            Fail::Overflow => Error::InvalidParameter("overflow".into()),
        })?;
        Ok(Self {
            trunc,
            ring: CoeffRing::Integers,
            coords,
        })
    }

    fn reduce(&mut self) {
        if let CoeffRing::Fp(p) = self.ring {
            let p = BigInt::from(p);
            for c in &mut self.coords {
                *c = c.mod_floor(&p);
            }
        }
    }

    pub fn truncation(&self) -> &TruncationSet {
        &self.trunc
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn coord(&self, n: u64) -> Result<&BigInt> {
        self.trunc
            .position(n)
            .map(|i| &self.coords[i])
            .ok_or(Error::NotInTruncation { n })
    }

    /// Ghost component `w_n`; integer coefficients only.
    pub fn ghost(&self, n: u64) -> Result<BigInt> {
        let i = self.trunc.position(n).ok_or(Error::NotInTruncation { n })?;
        self.require_integers()?;
        let mut acc = BigInt::zero();
        for &(j, d) in &self.trunc.0.divisors[i] {
            acc += BigInt::from(d) * num_traits::Pow::pow(&self.coords[j], (n / d) as u32);
        }
        Ok(acc)
    }

    /// All ghost components in truncation-set order; integer coefficients only.
    pub fn ghost_vector(&self) -> Result<Vec<BigInt>> {
        self.require_integers()?;
        self.trunc.elements().iter().map(|&n| self.ghost(n)).collect()
    }

    fn require_integers(&self) -> Result<()> {
        match self.ring {
            CoeffRing::Integers => Ok(()),
            CoeffRing::Fp(_) => Err(Error::InvalidParameter(
                "ghost components need integer coefficients".into(),
            )),
        }
    }

    fn check_compatible(&self, other: &WittVector) -> Result<()> {
        if self.trunc != other.trunc {
            return Err(Error::Mismatch(format!(
                "truncation sets {:?} and {:?}",
                self.trunc, other.trunc
            )));
        }
        if self.ring != other.ring {
            return Err(Error::Mismatch(format!(
                "coefficient rings {:?} and {:?}",
                self.ring, other.ring
            )));
        }
        Ok(())
    }

    fn binary(&self, other: &WittVector, op: GhostOp) -> Result<WittVector> {
        self.check_compatible(other)?;
        let coords = through_ghost(
            &self.trunc,
            &[(&self.trunc, &self.coords), (&other.trunc, &other.coords)],
            op,
        )?;
        WittVector::new(self.trunc.clone(), self.ring, coords)
    }

    pub fn add(&self, other: &WittVector) -> Result<WittVector> {
        self.binary(other, GhostOp::Add)
    }

    pub fn sub(&self, other: &WittVector) -> Result<WittVector> {
        self.binary(other, GhostOp::Sub)
    }

    pub fn mul(&self, other: &WittVector) -> Result<WittVector> {
        self.binary(other, GhostOp::Mul)
    }

    pub fn neg(&self) -> Result<WittVector> {
        self.scale(-1)
    }

    /// The integer multiple `k · a` in the additive group.
    pub fn scale(&self, k: i64) -> Result<WittVector> {
        let coords = through_ghost(&self.trunc, &[(&self.trunc, &self.coords)], GhostOp::Scale(k))?;
        WittVector::new(self.trunc.clone(), self.ring, coords)
    }

    /// `V_e`: `(V_e a)_n = a_{n/e}` if `e | n`, else 0. The target must satisfy
    /// `target / e = S`.
    pub fn verschiebung(&self, e: u64, target: &TruncationSet) -> Result<WittVector> {
        if e == 0 {
            return Err(Error::InvalidParameter("V_0 is undefined".into()));
        }
        if target.quotient(e) != self.trunc {
            return Err(Error::InvalidTruncation(format!(
                "{:?} / {e} is not {:?}",
                target, self.trunc
            )));
        }
        let coords = target
            .elements()
            .iter()
            .map(|&n| {
                if n % e == 0 {
                    self.coords[self.trunc.position(n / e).expect("checked above")].clone()
                } else {
                    BigInt::zero()
                }
            })
            .collect();
        WittVector::new(target.clone(), self.ring, coords)
    }

    /// `F_d`, characterized by `w_n(F_d a) = w_{dn}(a)` on `S/d`.
    pub fn frobenius(&self, d: u64) -> Result<WittVector> {
        if d == 0 {
            return Err(Error::InvalidParameter("F_0 is undefined".into()));
        }
        let target = self.trunc.quotient(d);
        if target.is_empty() {
            return Err(Error::InvalidTruncation(format!(
                "{:?} / {d} is empty",
                self.trunc
            )));
        }
        let positions: Vec<usize> = target
            .elements()
            .iter()
            .map(|&n| self.trunc.position(d * n).expect("dn in S"))
            .collect();
        let coords = through_ghost(
            &target,
            &[(&self.trunc, &self.coords)],
            GhostOp::Select(&positions),
        )?;
        WittVector::new(target, self.ring, coords)
    }

    /// Restriction to a division-closed subset.
    pub fn restrict(&self, target: &TruncationSet) -> Result<WittVector> {
        if !target.is_subset_of(&self.trunc) {
            return Err(Error::InvalidTruncation(format!(
                "{:?} is not contained in {:?}",
                target, self.trunc
            )));
        }
        let coords = target
            .elements()
            .iter()
            .map(|&n| self.coords[self.trunc.position(n).expect("subset")].clone())
            .collect();
        WittVector::new(target.clone(), self.ring, coords)
    }

    /// Coordinatewise reduction of an integral vector mod `p`.
    pub fn reduce_mod(&self, p: u64) -> Result<WittVector> {
        self.require_integers()?;
        WittVector::new(self.trunc.clone(), CoeffRing::fp(p)?, self.coords.clone())
    }

    /// The same coordinates viewed over the integers (lift to `{0, …, p−1}`).
    pub fn lift(&self) -> WittVector {
        WittVector {
            trunc: self.trunc.clone(),
            ring: CoeffRing::Integers,
            coords: self.coords.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Encodes an `F_p` vector as `Σ a_{n_i} p^i` over the truncation order.
    pub fn fp_index(&self) -> Option<u64> {
        let CoeffRing::Fp(p) = self.ring else {
            return None;
        };
        let mut idx = 0u64;
        for c in self.coords.iter().rev() {
            idx = idx.checked_mul(p)?.checked_add(c.to_u64()?)?;
        }
        Some(idx)
    }

    /// Inverse of [`WittVector::fp_index`].
    pub fn from_fp_index(trunc: TruncationSet, p: u64, mut idx: u64) -> Result<Self> {
        let ring = CoeffRing::fp(p)?;
        let mut coords = Vec::with_capacity(trunc.len());
        for _ in 0..trunc.len() {
            coords.push(BigInt::from(idx % p));
            idx /= p;
        }
        if idx != 0 {
            return Err(Error::InvalidParameter("index out of range".into()));
        }
        Ok(Self { trunc, ring, coords })
    }

    pub fn has_negative_coords(&self) -> bool {
        self.coords.iter().any(Signed::is_negative)
    }
}

/// Arithmetic on `W_S(F_p)` with elements encoded as [`WittVector::fp_index`]
/// values, for enumerating whole groups without per-element allocation.
pub struct IndexedFpWitt {
    trunc: TruncationSet,
    p: u64,
    x: Vec<i128>,
    y: Vec<i128>,
}

impl IndexedFpWitt {
    pub fn new(trunc: TruncationSet, p: u64) -> Result<Self> {
        CoeffRing::fp(p)?;
        let n = trunc.len();
        Ok(Self {
            trunc,
            p,
            x: vec![0; n],
            y: vec![0; n],
        })
    }

    pub fn truncation(&self) -> &TruncationSet {
        &self.trunc
    }

    /// `p^{|S|}`, if it fits in a `u64`.
    pub fn size(&self) -> Option<u64> {
        self.p.checked_pow(u32::try_from(self.trunc.len()).ok()?)
    }

    fn decode(p: u64, mut idx: u64, out: &mut [i128]) {
        for c in out.iter_mut() {
            *c = (idx % p) as i128;
            idx /= p;
        }
    }

    fn encode(p: u64, coords: &[i128]) -> u64 {
        coords
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * p + c.rem_euclid(p as i128) as u64)
    }

    /// Ghost components in place.
    fn ghost_in_place(trunc: &TruncationSet, v: &mut [i128]) -> Option<()> {
        let elems = trunc.elements();
        // process from the top so lower coordinates are still available
        for i in (0..elems.len()).rev() {
            let n = elems[i];
            let mut acc: i128 = 0;
            for &(j, d) in &trunc.0.divisors[i] {
                let term = (d as i128).checked_mul(v[j].checked_pow(u32::try_from(n / d).ok()?)?)?;
                acc = acc.checked_add(term)?;
            }
            v[i] = acc;
        }
        Some(())
    }

    fn inverse_in_place(trunc: &TruncationSet, v: &mut [i128]) -> Option<()> {
        let elems = trunc.elements();
        for i in 0..elems.len() {
            let n = elems[i];
            let mut rest = v[i];
            for &(j, d) in &trunc.0.divisors[i] {
                if d == n {
                    continue;
                }
                let term = (d as i128).checked_mul(v[j].checked_pow(u32::try_from(n / d).ok()?)?)?;
                rest = rest.checked_sub(term)?;
            }
            if rest % n as i128 != 0 {
                return None;
            }
            v[i] = rest / n as i128;
        }
        Some(())
    }

    fn slow(&self, a: u64, b: u64, op: GhostOp) -> Result<u64> {
        let x = WittVector::from_fp_index(self.trunc.clone(), self.p, a)?;
        let out = match op {
            GhostOp::Add => x.add(&WittVector::from_fp_index(self.trunc.clone(), self.p, b)?)?,
            GhostOp::Scale(k) => x.scale(k)?,
            _ => unreachable!("only addition and scaling are indexed"),
        };
        Ok(out.fp_index().expect("F_p vector"))
    }

    pub fn add(&mut self, a: u64, b: u64) -> Result<u64> {
        let p = self.p;
        Self::decode(p, a, &mut self.x);
        Self::decode(p, b, &mut self.y);
        let ok = Self::ghost_in_place(&self.trunc, &mut self.x)
            .and_then(|_| Self::ghost_in_place(&self.trunc, &mut self.y))
            .and_then(|_| {
                for (x, y) in self.x.iter_mut().zip(&self.y) {
                    *x = x.checked_add(*y)?;
                }
                Self::inverse_in_place(&self.trunc, &mut self.x)
            });
        match ok {
            Some(()) => Ok(Self::encode(p, &self.x)),
            None => self.slow(a, b, GhostOp::Add),
        }
    }

    /// `k · a`.
    pub fn scale(&mut self, a: u64, k: i64) -> Result<u64> {
        let p = self.p;
        Self::decode(p, a, &mut self.x);
        let ok = Self::ghost_in_place(&self.trunc, &mut self.x).and_then(|_| {
            for x in self.x.iter_mut() {
                *x = x.checked_mul(k as i128)?;
            }
            Self::inverse_in_place(&self.trunc, &mut self.x)
        });
        match ok {
            Some(()) => Ok(Self::encode(p, &self.x)),
            None => self.slow(a, 0, GhostOp::Scale(k)),
        }
    }
}

/// The `I_d` component `W_r → W_s`: `F_d` followed by restriction to the
/// p-typical set `{1, p, …, p^{s−1}}`.
pub fn i_component(a: &WittVector, p: u64, d: u64, s: u32) -> Result<WittVector> {
    let target = TruncationSet::p_typical(p, s)?;
    a.frobenius(d)?.restrict(&target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn big(n: u64) -> TruncationSet {
        TruncationSet::big(n)
    }

    fn int(t: &TruncationSet, c: &[i64]) -> WittVector {
        WittVector::from_i64s(t.clone(), CoeffRing::Integers, c).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn ghost_examples() {
        let t = big(2);
        assert_eq!(int(&t, &[1, 1]).ghost_vector().unwrap(), ints(&[1, 3]));
        assert_eq!(int(&t, &[0, 1]).ghost_vector().unwrap(), ints(&[0, 2]));
        let one = WittVector::one(big(4), CoeffRing::Integers);
        assert_eq!(one.ghost_vector().unwrap(), ints(&[1, 1, 1, 1]));
        assert_eq!(int(&t, &[1, 1]).ghost(3), Err(Error::NotInTruncation { n: 3 }));
    }

    #[test]
    fn addition_examples() {
        let t = big(2);
        let a = int(&t, &[1, 0]);
        assert_eq!(a.add(&a).unwrap().coords(), ints(&[2, -1]).as_slice());
        let f = WittVector::from_i64s(t, CoeffRing::Fp(2), &[1, 0]).unwrap();
        assert_eq!(f.add(&f).unwrap().coords(), ints(&[0, 1]).as_slice());
    }

    #[test]
    fn universal_polynomials_length_two() {
        // S_2 = a2 + b2 - a1 b1 and P_2 = a1^2 b2 + a2 b1^2 + 2 a2 b2 (p = 2)
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = big(2);
        for _ in 0..50 {
            let (a1, a2, b1, b2) = (
                rng.gen_range(-9..10),
                rng.gen_range(-9..10),
                rng.gen_range(-9..10),
                rng.gen_range(-9..10),
            );
            let a = int(&t, &[a1, a2]);
            let b = int(&t, &[b1, b2]);
            assert_eq!(a.add(&b).unwrap().coords(), ints(&[a1 + b1, a2 + b2 - a1 * b1]).as_slice());
            assert_eq!(
                a.mul(&b).unwrap().coords(),
                ints(&[a1 * b1, a1 * a1 * b2 + a2 * b1 * b1 + 2 * a2 * b2]).as_slice()
            );
        }
    }

    #[test]
    fn unit_is_identity() {
        let t = big(6);
        let a = int(&t, &[3, -1, 4, 1, -5, 9]);
        let one = WittVector::one(t, CoeffRing::Integers);
        assert_eq!(a.mul(&one).unwrap(), a);
    }

    #[test]
    fn verschiebung_examples() {
        let v = int(&big(1), &[7]).verschiebung(2, &big(2)).unwrap();
        assert_eq!(v.coords(), ints(&[0, 7]).as_slice());
        assert!(int(&big(2), &[1, 1]).verschiebung(2, &big(6)).is_err());

        // image of V_2: W_2(F_2) -> W_4(F_2) has four elements
        let mut image = std::collections::HashSet::new();
        for idx in 0..4 {
            let a = WittVector::from_fp_index(big(2), 2, idx).unwrap();
            image.insert(a.verschiebung(2, &big(4)).unwrap().fp_index().unwrap());
        }
        assert_eq!(image.len(), 4);
    }

    #[test]
    fn frobenius_examples() {
        let one = WittVector::one(big(4), CoeffRing::Integers);
        assert_eq!(one.frobenius(2).unwrap(), WittVector::one(big(2), CoeffRing::Integers));
        // F_2 V_2 (a) = 2a on W_1
        let a = int(&big(1), &[5]);
        let fv = a.verschiebung(2, &big(2)).unwrap().frobenius(2).unwrap();
        assert_eq!(fv.coords(), ints(&[10]).as_slice());
        // F_3 of (0,0,1) on {1,2,3}: ghost_3 = 3
        let b = int(&big(3), &[0, 0, 1]);
        assert_eq!(b.frobenius(3).unwrap().coords(), ints(&[3]).as_slice());
        assert!(b.frobenius(4).is_err());
    }

    #[test]
    fn restriction() {
        let a = int(&big(3), &[1, 2, 3]);
        assert_eq!(a.restrict(&big(1)).unwrap().coords(), ints(&[1]).as_slice());
        assert_eq!(a.restrict(&big(3)).unwrap(), a);
        assert!(TruncationSet::from_elements(vec![1, 4]).is_err());
        assert!(a.restrict(&big(4)).is_err());
    }

    #[test]
    fn mismatched_operands() {
        let a = int(&big(2), &[1, 1]);
        let b = int(&big(3), &[1, 1, 1]);
        assert!(matches!(a.add(&b), Err(Error::Mismatch(_))));
        let c = WittVector::from_i64s(big(2), CoeffRing::Fp(3), &[1, 1]).unwrap();
        assert!(matches!(a.add(&c), Err(Error::Mismatch(_))));
    }

    #[test]
    fn inexact_inverse_ghost() {
        // ghost (0, 1) has no integral preimage on {1, 2}
        assert_eq!(
            WittVector::from_ghost(big(2), &ints(&[0, 1])),
            Err(Error::InexactGhost { n: 2 })
        );
    }

    #[test]
    fn big_path_matches_fast_path() {
        // coordinates large enough to overflow i128 ghosts
        let t = big(8);
        let a = int(&t, &[1_000_000, 3, -7, 2, 0, 1, 5, -2]);
        let b = int(&t, &[999_999, -4, 1, 0, 2, 3, -1, 8]);
        let s = a.add(&b).unwrap();
        let ga = a.ghost_vector().unwrap();
        let gb = b.ghost_vector().unwrap();
        let gs = s.ghost_vector().unwrap();
        for i in 0..8 {
            assert_eq!(gs[i], &ga[i] + &gb[i]);
        }
    }

    #[test]
    fn fp_cardinality() {
        for (p, n) in [(2u64, 4u64), (3, 3), (5, 2)] {
            let t = big(n);
            let mut seen = std::collections::HashSet::new();
            for idx in 0..p.pow(n as u32) {
                let a = WittVector::from_fp_index(t.clone(), p, idx).unwrap();
                assert_eq!(a.fp_index(), Some(idx));
                seen.insert(a.coords().to_vec());
            }
            assert_eq!(seen.len() as u64, p.pow(n as u32));
        }
    }

    #[test]
    fn indexed_matches_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, n) in [(2u64, 8u64), (3, 5), (5, 3), (251, 2)] {
            let t = big(n);
            let mut fast = IndexedFpWitt::new(t.clone(), p).unwrap();
            let size = fast.size().unwrap();
            for _ in 0..50 {
                let (a, b) = (rng.gen_range(0..size), rng.gen_range(0..size));
                let x = WittVector::from_fp_index(t.clone(), p, a).unwrap();
                let y = WittVector::from_fp_index(t.clone(), p, b).unwrap();
                assert_eq!(fast.add(a, b).unwrap(), x.add(&y).unwrap().fp_index().unwrap());
                assert_eq!(fast.scale(a, p as i64).unwrap(), x.scale(p as i64).unwrap().fp_index().unwrap());
            }
        }
    }
}
