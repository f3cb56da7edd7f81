use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{smith_normal_form, GroupStructure, IntMatrix};
use crate::numtheory::{is_prime, log_exact};
use crate::{Error, Result};

/// Integer kernel of `m`, one generator per column of the result.
fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let free: Vec<usize> = (rank..m.cols()).collect();
    snf.v.select_cols(&free)
}

/// Invariant factors (all `> 1`, ascending by divisibility) of the kernel of
/// the homomorphism `⊕_j Z/a_j -> ⊕_i Z/b_i` given by `relations` (rows are
/// indexed by the target, columns by the source).
pub fn kernel_invariant_factors(
    relations: &IntMatrix,
    source_moduli: &[u64],
    target_moduli: &[u64],
) -> Result<Vec<BigInt>> {
    let (t, n) = (relations.rows(), relations.cols());
    if source_moduli.len() != n || target_moduli.len() != t {
        return Err(Error::DimensionMismatch(format!(
            "relations {}x{} vs {} target and {} source moduli",
            t,
            n,
            target_moduli.len(),
            source_moduli.len()
        )));
    }
    if source_moduli.iter().chain(target_moduli).any(|&m| m == 0) {
        return Err(Error::InvalidParameter("moduli must be positive".into()));
    }
    for i in 0..t {
        let b = BigInt::from(target_moduli[i]);
        for j in 0..n {
            let image = relations.get(i, j) * BigInt::from(source_moduli[j]);
            if !image.is_multiple_of(&b) {
                return Err(Error::IllDefinedMap(format!(
                    "entry ({i},{j}) times {} is not divisible by {}",
                    source_moduli[j], target_moduli[i]
                )));
            }
        }
    }
    if n == 0 {
        return Ok(Vec::new());
    }

    // L = {x in Z^n : relations * x in ⊕ b_i Z}
    let lifted = relations.hstack(&IntMatrix::diagonal(target_moduli))?;
    let lattice = integer_kernel(&lifted).top_rows(n);
    let k = lattice.cols();
    if k == 0 {
        return Ok(Vec::new());
    }

    // kernel = L / (⊕ a_j Z) = Z^k / {c : lattice * c in ⊕ a_j Z}
    let with_source = lattice.hstack(&IntMatrix::diagonal(source_moduli))?;
    let relations_of_quotient = integer_kernel(&with_source).top_rows(k);
    let snf = smith_normal_form(&relations_of_quotient);
    let diag = snf.invariant_factors();
    if diag.len() != k {
        return Err(Error::IdentityFailure("kernel has infinite part".into()));
    }
    Ok(diag.into_iter().filter(|d| !d.is_one() && !d.is_zero()).collect())
}

/// Kernel of a homomorphism between finite products of cyclic p-groups.
pub fn kernel_invariants(
    p: u64,
    relations: &IntMatrix,
    source_moduli: &[u64],
    target_moduli: &[u64],
) -> Result<GroupStructure> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    for &m in source_moduli.iter().chain(target_moduli) {
        if log_exact(p, m).is_none() {
            return Err(Error::NotPrimePower { modulus: m, p });
        }
    }
    let factors = kernel_invariant_factors(relations, source_moduli, target_moduli)?;
    GroupStructure::from_invariant_factors(p, &factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mat(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn identity_and_zero() {
        let g = kernel_invariants(2, &mat(&[vec![1]]), &[4], &[4]).unwrap();
        assert!(g.is_trivial());
        let g = kernel_invariants(2, &mat(&[vec![0]]), &[4], &[4]).unwrap();
        assert_eq!(g.exponents(), &[2]);
    }

    #[test]
    fn reduction_map() {
        // Z/4 -> Z/2, elements 0 and 2 map to zero.
        let g = kernel_invariants(2, &mat(&[vec![1]]), &[4], &[2]).unwrap();
        assert_eq!(g.exponents(), &[1]);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            kernel_invariants(2, &mat(&[vec![1, 0]]), &[4], &[4]),
            Err(Error::DimensionMismatch(_))
        ));
        // 1 -> 1 from Z/2 to Z/4 is not a homomorphism
        assert!(matches!(
            kernel_invariants(2, &mat(&[vec![1]]), &[2], &[4]),
            Err(Error::IllDefinedMap(_))
        ));
        assert!(matches!(
            kernel_invariants(2, &mat(&[vec![1]]), &[6], &[2]),
            Err(Error::NotPrimePower { .. })
        ));
    }

    /// Enumerate the kernel and read off its structure from the counts of
    /// elements killed by p^k.
    fn brute_force(p: u64, m: &[Vec<i64>], a: &[u64], b: &[u64]) -> Vec<u32> {
        let n = a.len();
        let total: u64 = a.iter().product();
        let mut kernel = Vec::new();
        for mut idx in 0..total {
            let mut x = vec![0i64; n];
            for j in 0..n {
                x[j] = (idx % a[j]) as i64;
                idx /= a[j];
            }
            let in_kernel = (0..b.len()).all(|i| {
                let s: i64 = (0..n).map(|j| m[i][j] * x[j]).sum();
                s.rem_euclid(b[i] as i64) == 0
            });
            if in_kernel {
                kernel.push(x);
            }
        }
        let killed = |k: u32| -> u64 {
            let pk = (p as i64).pow(k);
            kernel
                .iter()
                .filter(|x| x.iter().zip(a).all(|(&xi, &aj)| (xi * pk).rem_euclid(aj as i64) == 0))
                .count() as u64
        };
        let mut exps = Vec::new();
        let mut prev = 1u64;
        let mut k = 1;
        while prev < kernel.len() as u64 {
            let c = killed(k);
            let ratio = c / prev;
            let count_ge_k = log_exact(p, ratio).unwrap();
            exps.push(count_ge_k);
            prev = c;
            k += 1;
        }
        // exps[k-1] = number of factors with exponent >= k
        let mut out = Vec::new();
        for (i, &c) in exps.iter().enumerate() {
            let next = exps.get(i + 1).copied().unwrap_or(0);
            for _ in 0..(c - next) {
                out.push(i as u32 + 1);
            }
        }
        out.sort_unstable();
        out
    }

    #[test]
    fn agrees_with_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let p = [2u64, 3, 5][rng.gen_range(0..3)];
            let max_exp = match p {
                2 => 4,
                3 => 2,
                _ => 1,
            };
            let n = rng.gen_range(1..=3);
            let t = rng.gen_range(0..=3);
            let a: Vec<u64> = (0..n).map(|_| p.pow(rng.gen_range(0..=max_exp))).collect();
            let b: Vec<u64> = (0..t).map(|_| p.pow(rng.gen_range(0..=max_exp))).collect();
            if a.iter().product::<u64>() > 1 << 12 {
                continue;
            }
            // entry (i,j) must be a multiple of b_i / gcd(a_j, b_i)
            let m: Vec<Vec<i64>> = (0..t)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let step = b[i] / num_integer::gcd(a[j], b[i]);
                            (step * rng.gen_range(0..b[i].max(1))) as i64
                                * if rng.gen_bool(0.5) { 1 } else { -1 }
                        })
                        .collect()
                })
                .collect();
            let rel = IntMatrix::from_fn(t, n, |i, j| BigInt::from(m[i][j]));
            let got = kernel_invariants(p, &rel, &a, &b).unwrap();
            assert_eq!(got.exponents(), brute_force(p, &m, &a, &b).as_slice(), "{m:?} {a:?} {b:?}");
        }
    }
}
