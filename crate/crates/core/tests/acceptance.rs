//! Acceptance criteria, one test per criterion. Each prints a single
//! `PASS`/`FAIL` line before asserting.

use std::time::{Duration, Instant};

use kpoly::cycbar::{generate_complex, reduced_homology, small_complex_hh};
use kpoly::numtheory::{is_prime, primes_up_to};
use kpoly::ssengine::{build_e2_from_homology, run_to_einfty, standard_patterns, Mode};
use kpoly::tcassemble::{cross_check, default_levels, tc_group_in_degree, tc_weight_group_with, Units};
use kpoly::witt::i_component;
use kpoly::wittsplit::{brute_force_quotient, h_function, predicted_quotient, DEFAULT_ENUM_BOUND};
use kpoly::{CoeffRing, SplitParams, TruncationSet, WittVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: &str, what: &str, failures: &[String], elapsed: Duration, limit: Option<Duration>) {
    let slow = limit.is_some_and(|l| elapsed > l);
    let ok = failures.is_empty() && !slow;
    println!(
        "{} {id}: {what} ({} failures, {:.1}s{})",
        if ok { "PASS" } else { "FAIL" },
        failures.len(),
        elapsed.as_secs_f64(),
        limit.map_or(String::new(), |l| format!(" / limit {}s", l.as_secs()))
    );
    for f in failures.iter().take(10) {
        println!("    {f}");
    }
    assert!(ok, "{id} failed");
}

fn v_p(p: u64, mut n: u64) -> u32 {
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Nonzero homology of the weight-m piece: ranks one in 2d, 2d+1 (e∤m), in
/// 2d+1, 2d+2 (e|m, p|e), nothing otherwise.
fn expected_homology(p: u64, e: u32, m: u32) -> Vec<(usize, usize)> {
    let d = ((m - 1) / e) as usize;
    if m % e != 0 {
        vec![(2 * d, 1), (2 * d + 1, 1)]
    } else if e as u64 % p == 0 {
        vec![(2 * d + 1, 1), (2 * d + 2, 1)]
    } else {
        vec![]
    }
}

#[test]
fn ac1_homology_grid() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for p in [2, 3, 5] {
        for e in 2..=6 {
            for m in 1..=10 {
                let h = reduced_homology(&generate_complex(e, m, p).unwrap()).unwrap();
                let expected = expected_homology(p, e, m);
                if h.nonzero() != expected {
                    failures.push(format!("p={p} e={e} m={m}: bar {:?}, expected {expected:?}", h.nonzero()));
                }
                let small = small_complex_hh(e, m, p);
                if small != expected {
                    failures.push(format!("p={p} e={e} m={m}: small complex {small:?}, expected {expected:?}"));
                }
            }
        }
    }
    report(
        "ac1",
        "homology ranks for p in {2,3,5}, e in 2..=6, m in 1..=10",
        &failures,
        start.elapsed(),
        Some(Duration::from_secs(60)),
    );
}

#[test]
fn ac2_connes_scalar() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for p in [2u64, 3, 5] {
        for e in 2..=6u32 {
            for m in 1..=10u32 {
                let c = generate_complex(e, m, p).unwrap().with_connes().unwrap();
                let h = reduced_homology(&c).unwrap();
                let got = h.connes_scalar();
                let ok = if m % e != 0 {
                    let plus = m as u64 % p;
                    let minus = (p - plus) % p;
                    got == Some(plus) || got == Some(minus)
                } else if e as u64 % p == 0 {
                    got == Some(0)
                } else {
                    // no homology, nothing to compare
                    got.is_none() && h.nonzero().is_empty()
                };
                if !ok {
                    failures.push(format!("p={p} e={e} m={m}: induced B = {got:?}"));
                }
            }
        }
    }
    report("ac2", "induced Connes operator is ±m mod p, or 0 when e | m", &failures, start.elapsed(), None);
}

fn random_vector(rng: &mut ChaCha8Rng, t: &TruncationSet) -> WittVector {
    let c: Vec<i64> = (0..t.len()).map(|_| rng.gen_range(-9..=9)).collect();
    WittVector::from_i64s(t.clone(), CoeffRing::Integers, &c).unwrap()
}

/// `w_n = Σ_{d | n} d a_d^{n/d}` on `{1..len}`, evaluated directly.
fn ghost(a: &WittVector) -> Vec<num_bigint::BigInt> {
    let n = a.coords().len() as u64;
    (1..=n)
        .map(|k| {
            (1..=k)
                .filter(|d| k % d == 0)
                .map(|d| num_bigint::BigInt::from(d) * num_traits::pow(a.coords()[d as usize - 1].clone(), (k / d) as usize))
                .sum()
        })
        .collect()
}

#[test]
fn ac3_witt_identities() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let w8 = TruncationSet::big(8);

    for i in 0..250 {
        let (a, b) = (random_vector(&mut rng, &w8), random_vector(&mut rng, &w8));
        let (ga, gb) = (ghost(&a), ghost(&b));
        let sum = ghost(&a.add(&b).unwrap());
        let prod = ghost(&a.mul(&b).unwrap());
        for k in 0..8 {
            if sum[k] != &ga[k] + &gb[k] || prod[k] != &ga[k] * &gb[k] {
                failures.push(format!("pair {i}: ghost component {} not a ring map", k + 1));
                break;
            }
        }
    }

    for d in 1..=4u64 {
        let small = TruncationSet::big(8 / d);
        for _ in 0..30 {
            let a = random_vector(&mut rng, &small);
            let fv = a.verschiebung(d, &w8).unwrap().frobenius(d).unwrap();
            let expected: Vec<_> = ghost(&a).iter().map(|x| x * d).collect();
            if ghost(&fv) != expected {
                failures.push(format!("F_{d} V_{d} ≠ {d} on {a:?}"));
            }
        }
    }

    // I_{m'} ∘ V_e = e' V_{p^u} ∘ I_d for m' = e' d, compared on ghost components
    let mut squares = 0;
    while squares < 150 {
        let p = [2u64, 3, 5][rng.gen_range(0..3)];
        let r = rng.gen_range(1..=4u64);
        let e = rng.gen_range(2..=6u64);
        let (u, e_prime) = (v_p(p, e), e / p.pow(v_p(p, e)));
        let a = random_vector(&mut rng, &TruncationSet::big(r));
        let va = a.verschiebung(e, &TruncationSet::big(r * e)).unwrap();
        for m_prime in (1..=r * e).filter(|m| m % p != 0 && m % e_prime == 0) {
            let d = m_prime / e_prime;
            let s = (0..).take_while(|&k| p.pow(k) * m_prime <= r * e).count() as u32;
            let lhs = i_component(&va, p, m_prime, s).unwrap();
            let target = TruncationSet::p_typical(p, s).unwrap();
            let rhs = if d > r {
                WittVector::zero(target, CoeffRing::Integers)
            } else {
                let s_d = (0..).take_while(|&k| p.pow(k) * d <= r).count() as u32;
                i_component(&a, p, d, s_d)
                    .unwrap()
                    .verschiebung(p.pow(u), &target)
                    .unwrap()
                    .scale(e_prime as i64)
                    .unwrap()
            };
            if lhs.ghost_vector().unwrap() != rhs.ghost_vector().unwrap() {
                failures.push(format!("square fails for p={p} r={r} e={e} m'={m_prime} a={a:?}"));
            }
            squares += 1;
        }
    }
    report(
        "ac3",
        "ghost ring map on 250 pairs in W_8(Z), F_d V_d = d for d <= 4, 150 I/V squares",
        &failures,
        start.elapsed(),
        None,
    );
}

#[test]
fn ac4_order_identity() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for p in [2, 3, 5, 7] {
        for e in 1..=8 {
            for r in 1..=10 {
                let params = SplitParams::new(p, r, e).unwrap();
                let total: u64 = params.weight_classes().map(|m| h_function(&params, m).unwrap() as u64).sum();
                if total != r * (e - 1) {
                    failures.push(format!("p={p} e={e} r={r}: Σh = {total}"));
                }
            }
        }
    }
    report("ac4", "Σ h = r(e-1) for p <= 7, e <= 8, r <= 10", &failures, start.elapsed(), None);
}

#[test]
fn ac5_brute_force_quotients() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut cases = 0;
    for p in primes_up_to(1 << 16) {
        for n in 1u32.. {
            if (p as u128).pow(n) > DEFAULT_ENUM_BOUND {
                break;
            }
            for e in (1..=n as u64).filter(|e| n as u64 % e == 0) {
                let r = n as u64 / e;
                let params = SplitParams::new(p, r, e).unwrap();
                let brute = brute_force_quotient(&params, DEFAULT_ENUM_BOUND).unwrap();
                let predicted = predicted_quotient(&params);
                if brute != predicted {
                    failures.push(format!("p={p} r={r} e={e}: enumerated {brute}, predicted {predicted}"));
                }
                cases += 1;
            }
        }
    }
    let spot = |p, r, e| brute_force_quotient(&SplitParams::new(p, r, e).unwrap(), DEFAULT_ENUM_BOUND).unwrap();
    let two = num_bigint::BigInt::from(2);
    if spot(2, 2, 2).factors() != vec![two.clone(), two.clone()] {
        failures.push("(2,2,2) is not [2,2]".into());
    }
    if spot(2, 2, 3).factors() != vec![two, 8.into()] {
        failures.push("(2,2,3) is not [2,8]".into());
    }
    report(
        "ac5",
        &format!("enumerated W_re(F_p)/V_e W_r(F_p) matches prediction on all {cases} triples with p^(re) <= 2^16"),
        &failures,
        start.elapsed(),
        Some(Duration::from_secs(120)),
    );
}

/// Survivor count of the closed forms in total degree `n`.
fn expected_survivors(p: u64, e: u64, m: u64, n: i64, mode: Mode) -> u64 {
    if n.rem_euclid(2) == 0 {
        return 0;
    }
    let k = (n - 1).div_euclid(2);
    let v = v_p(p, m) as u64;
    let u = v_p(p, e) as u64;
    if m % e != 0 {
        let d = ((m - 1) / e) as i64;
        match mode {
            Mode::Tate => v,
            Mode::Hfp => v + (k >= d) as u64,
        }
    } else {
        u
    }
}

#[test]
fn ac6_spectral_sequence_survivors() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for p in [2u64, 3] {
        for e in [2u32, 3, 4, 6] {
            for m in 1..=12u32 {
                let h = reduced_homology(&generate_complex(e, m, p).unwrap().with_connes().unwrap()).unwrap();
                for mode in [Mode::Tate, Mode::Hfp] {
                    let page = build_e2_from_homology(&h, mode).unwrap();
                    let patterns = standard_patterns(&page, h.connes_scalar().unwrap_or(0), rng.gen_range(1..p));
                    let run = run_to_einfty(&page, &patterns, -10..=10).unwrap();
                    for n in -10..=10 {
                        let expected = expected_survivors(p, e as u64, m as u64, n, mode);
                        if run.survivor_count(n) != Some(expected) {
                            failures.push(format!(
                                "p={p} e={e} m={m} {mode} degree {n}: {:?}, expected {expected}",
                                run.survivor_count(n)
                            ));
                        }
                    }
                }
            }
        }
    }
    report(
        "ac6",
        "E-infinity survivors in degrees -10..=10, tate and hfp, p in {2,3}, e in {2,3,4,6}, m <= 12",
        &failures,
        start.elapsed(),
        None,
    );
}

#[test]
fn ac7_equalizer_robustness() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for p in [2u64, 3, 5] {
        for e in [2u64, 3, 4, 6] {
            for r in 1..=6 {
                let params = SplitParams::new(p, r, e).unwrap();
                for m in params.weight_classes() {
                    let base = default_levels(&params, m);
                    let reference = tc_weight_group_with(&params, m, base, Units::One).unwrap();
                    for seed in 0..20 {
                        let g = tc_weight_group_with(&params, m, base, Units::Random(1000 + seed)).unwrap();
                        if g != reference {
                            failures.push(format!("p={p} e={e} r={r} m'={m} seed {seed}: {g} vs {reference}"));
                        }
                    }
                    for levels in base..=base + 4 {
                        let g = tc_weight_group_with(&params, m, levels, Units::One).unwrap();
                        if g != reference {
                            failures.push(format!("p={p} e={e} r={r} m'={m} V={levels}: {g} vs {reference}"));
                        }
                    }
                }
            }
        }
    }
    report(
        "ac7",
        "equalizer kernels unchanged under 20 random unit choices and V in s+u+2..=s+u+6",
        &failures,
        start.elapsed(),
        None,
    );
}

#[test]
fn ac8_three_routes() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut skipped = 0;
    for p in [2u64, 3] {
        assert!(is_prime(p));
        for e in [2u64, 3, 4, 6] {
            for r in 1..=6 {
                let c = cross_check(p, e, r, DEFAULT_ENUM_BOUND).unwrap();
                skipped += c.brute_force.is_none() as usize;
                if !c.passed {
                    failures.push(c.note());
                }
                if c.predicted.length() as u64 != r * (e - 1) {
                    failures.push(format!("p={p} e={e} r={r}: order p^{}", c.predicted.length()));
                }
                let even = tc_group_in_degree(p, e, 2 * r, 1).unwrap();
                if !even.is_trivial() {
                    failures.push(format!("p={p} e={e} degree {}: {even}", 2 * r));
                }
            }
        }
    }
    report(
        "ac8",
        &format!("routes A = B = C for p in {{2,3}}, e in {{2,3,4,6}}, r in 1..=6 (A skipped {skipped} times), even degrees trivial"),
        &failures,
        start.elapsed(),
        Some(Duration::from_secs(300)),
    );
}
