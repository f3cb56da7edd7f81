use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::numtheory::{is_prime, log_exact};
use crate::{Error, Result};

/// A finite abelian p-group `Z/p^{h_1} x ... x Z/p^{h_k}` with
/// `h_1 <= ... <= h_k`, all `h_i >= 1`.
///
/// Exponents are stored, not the prime powers. `residue_degree` records the
/// degree `f` of the residue field `F_{p^f}` the group was computed for; the
/// exponent list already carries the `f`-fold repetition.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroupStructure {
    prime: u64,
    exponents: Vec<u32>,
    residue_degree: u32,
}

impl GroupStructure {
    pub fn trivial(prime: u64) -> Self {
        Self {
            prime,
            exponents: Vec::new(),
            residue_degree: 1,
        }
    }

    /// Zero exponents are dropped; the rest are sorted.
    pub fn from_exponents(prime: u64, exponents: impl IntoIterator<Item = u32>) -> Self {
        let mut exponents: Vec<u32> = exponents.into_iter().filter(|&h| h > 0).collect();
        exponents.sort_unstable();
        Self {
            prime,
            exponents,
            residue_degree: 1,
        }
    }

    pub fn cyclic(prime: u64, exponent: u32) -> Self {
        Self::from_exponents(prime, [exponent])
    }

    /// Parses invariant factors (e.g. a Smith normal form diagonal). Unit
    /// factors are dropped; every other factor must be a power of `prime`.
    pub fn from_invariant_factors(prime: u64, factors: &[BigInt]) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        let mut exps = Vec::new();
        for f in factors {
            if f.is_one() {
                continue;
            }
            let n = f.to_u64().ok_or_else(|| {
                Error::InvalidParameter(format!("invariant factor {f} out of range"))
            })?;
            let h = log_exact(prime, n).ok_or(Error::NotPrimePower { modulus: n, p: prime })?;
            exps.push(h);
        }
        Ok(Self::from_exponents(prime, exps))
    }

    /// Each factor repeated `f` times: the group for residue field `F_{p^f}`.
    pub fn scaled(&self, f: u32) -> Self {
        assert!(f >= 1);
        let mut exps = Vec::with_capacity(self.exponents.len() * f as usize);
        for &h in &self.exponents {
            exps.extend(std::iter::repeat(h).take(f as usize));
        }
        let mut g = Self::from_exponents(self.prime, exps);
        g.residue_degree = self.residue_degree * f;
        g
    }

    /// Direct product with another group over the same prime.
    pub fn product(&self, other: &GroupStructure) -> Self {
        assert_eq!(self.prime, other.prime);
        let mut g = Self::from_exponents(
            self.prime,
            self.exponents.iter().chain(&other.exponents).copied(),
        );
        g.residue_degree = self.residue_degree;
        g
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn residue_degree(&self) -> u32 {
        self.residue_degree
    }

    pub fn is_trivial(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Factors as prime powers `p^h`, ascending.
    pub fn factors(&self) -> Vec<BigInt> {
        self.exponents
            .iter()
            .map(|&h| num_traits::pow(BigInt::from(self.prime), h as usize))
            .collect()
    }

    /// `log_p` of the group order.
    pub fn length(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn order(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.prime), self.length() as usize)
    }

    /// Number of elements killed by `p^k`, as `log_p`.
    pub fn log_count_killed_by(&self, k: u32) -> u32 {
        self.exponents.iter().map(|&h| h.min(k)).sum()
    }
}

impl fmt::Display for GroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.factors().iter().map(|x| format!("Z/{x}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_and_display() {
        let g = GroupStructure::from_exponents(2, [3, 0, 1]);
        assert_eq!(g.exponents(), &[1, 3]);
        assert_eq!(g.to_string(), "Z/2 + Z/8");
        assert_eq!(g.order(), BigInt::from(16));
        assert_eq!(GroupStructure::trivial(5).to_string(), "0");
    }

    #[test]
    fn residue_scaling() {
        let g = GroupStructure::from_exponents(3, [1, 2]).scaled(2);
        assert_eq!(g.exponents(), &[1, 1, 2, 2]);
        assert_eq!(g.residue_degree(), 2);
    }

    #[test]
    fn parse_factors() {
        let g = GroupStructure::from_invariant_factors(
            2,
            &[BigInt::from(1), BigInt::from(2), BigInt::from(8)],
        )
        .unwrap();
        assert_eq!(g.exponents(), &[1, 3]);
        assert!(GroupStructure::from_invariant_factors(2, &[BigInt::from(6)]).is_err());
    }
}
