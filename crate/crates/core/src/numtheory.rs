//! Small integer helpers shared across modules.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns `(v, rest)` with `n = p^v * rest` and `p ∤ rest`. `n` must be nonzero.
pub fn split_prime_power(p: u64, n: u64) -> (u32, u64) {
    assert!(n > 0 && p > 1);
    let mut v = 0;
    let mut rest = n;
    while rest % p == 0 {
        rest /= p;
        v += 1;
    }
    (v, rest)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// Exponent `h` with `p^h = n`, if `n` is a power of `p`.
pub fn log_exact(p: u64, n: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let (h, rest) = split_prime_power(p, n);
    (rest == 1).then_some(h)
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime(k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert!(!is_prime(1));
        assert!(!is_prime(4));
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(split_prime_power(2, 24), (3, 3));
        assert_eq!(split_prime_power(3, 7), (0, 7));
        assert_eq!(log_exact(3, 27), Some(3));
        assert_eq!(log_exact(3, 1), Some(0));
        assert_eq!(log_exact(2, 6), None);
    }
}
