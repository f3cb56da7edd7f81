//! Named verification suites, each a sweep over a parameter grid comparing
//! independently computed answers.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cycbar::{self, predicted_homology, small_complex_hh};
use crate::numtheory::{primes_up_to, split_prime_power};
use crate::ssengine::{self, closed_form, Mode};
use crate::tcassemble::{cross_check, default_levels, tc_group_in_degree, tc_weight_group_with, Units};
use crate::witt::{i_component, CoeffRing, TruncationSet, WittVector};
use crate::wittsplit::{
    brute_force_quotient, h_function, predicted_quotient, s_function, SplitParams, DEFAULT_ENUM_BOUND,
};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Witt,
    Order,
    Wittsplit,
    Homology,
    Connes,
    Ss,
    Equalizer,
    Routes,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Witt,
        Suite::Order,
        Suite::Wittsplit,
        Suite::Homology,
        Suite::Connes,
        Suite::Ss,
        Suite::Equalizer,
        Suite::Routes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Witt => "witt",
            Suite::Order => "order",
            Suite::Wittsplit => "wittsplit",
            Suite::Homology => "homology",
            Suite::Connes => "connes",
            Suite::Ss => "ss",
            Suite::Equalizer => "equalizer",
            Suite::Routes => "routes",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite {s:?}")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Grid overrides; `None` means the suite's default grid.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub enum_bound: u128,
    pub primes: Option<Vec<u64>>,
    pub exponents: Option<Vec<u64>>,
    pub rmax: Option<u64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            enum_bound: DEFAULT_ENUM_BOUND,
            primes: None,
            exponents: None,
            rmax: None,
        }
    }
}

impl VerifyConfig {
    fn primes(&self, default: &[u64]) -> Vec<u64> {
        self.primes.clone().unwrap_or_else(|| default.to_vec())
    }

    fn exponents(&self, default: &[u64]) -> Vec<u64> {
        self.exponents.clone().unwrap_or_else(|| default.to_vec())
    }

    fn rmax(&self, default: u64) -> u64 {
        self.rmax.unwrap_or(default)
    }
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub suite: Suite,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: {} checks, {} failures",
            if self.passed() { "PASS" } else { "FAIL" },
            self.suite,
            self.checked,
            self.failures.len()
        )?;
        for msg in self.failures.iter().take(10) {
            write!(f, "\n  {msg}")?;
        }
        Ok(())
    }
}

struct Tally {
    checked: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Self {
            checked: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(msg());
        }
    }

    /// Records an error as a failure, otherwise hands the value on.
    fn ok<T>(&mut self, r: Result<T>, ctx: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(err) => {
                self.checked += 1;
                self.failures.push(format!("{}: {err}", ctx()));
                None
            }
        }
    }

    fn finish(self, suite: Suite) -> CheckResult {
        CheckResult {
            suite,
            checked: self.checked,
            failures: self.failures,
        }
    }
}

pub fn run_suite(suite: Suite, config: &VerifyConfig) -> CheckResult {
    let mut t = Tally::new();
    match suite {
        Suite::Witt => witt_suite(config, &mut t),
        Suite::Order => order_suite(config, &mut t),
        Suite::Wittsplit => wittsplit_suite(config, &mut t),
        Suite::Homology => homology_suite(config, &mut t),
        Suite::Connes => connes_suite(config, &mut t),
        Suite::Ss => ss_suite(config, &mut t),
        Suite::Equalizer => equalizer_suite(config, &mut t),
        Suite::Routes => routes_suite(config, &mut t),
    }
    t.finish(suite)
}

pub fn run_all(config: &VerifyConfig) -> Vec<CheckResult> {
    Suite::ALL.iter().map(|&s| run_suite(s, config)).collect()
}

fn random_int_vector(rng: &mut ChaCha8Rng, trunc: &TruncationSet) -> WittVector {
    let coords: Vec<i64> = (0..trunc.len()).map(|_| rng.gen_range(-5..=5)).collect();
    WittVector::from_i64s(trunc.clone(), CoeffRing::Integers, &coords).expect("matching length")
}

fn witt_suite(config: &VerifyConfig, t: &mut Tally) {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let w8 = TruncationSet::big(8);

    for _ in 0..200 {
        let (a, b) = (random_int_vector(&mut rng, &w8), random_int_vector(&mut rng, &w8));
        let ga = a.ghost_vector().expect("integers");
        let gb = b.ghost_vector().expect("integers");
        let (Some(sum), Some(prod)) = (
            t.ok(a.add(&b), || format!("{a:?} + {b:?}")),
            t.ok(a.mul(&b), || format!("{a:?} * {b:?}")),
        ) else {
            continue;
        };
        let gs = sum.ghost_vector().expect("integers");
        let gp = prod.ghost_vector().expect("integers");
        t.check(gs.iter().zip(ga.iter().zip(&gb)).all(|(s, (x, y))| *s == x + y), || {
            format!("ghost not additive on {a:?}, {b:?}")
        });
        t.check(gp.iter().zip(ga.iter().zip(&gb)).all(|(s, (x, y))| *s == x * y), || {
            format!("ghost not multiplicative on {a:?}, {b:?}")
        });
    }

    for d in 1..=4u64 {
        let small = w8.quotient(d);
        for _ in 0..25 {
            let a = random_int_vector(&mut rng, &small);
            let fv = a.verschiebung(d, &w8).and_then(|v| v.frobenius(d));
            if let Some(fv) = t.ok(fv, || format!("F_{d} V_{d} on {a:?}")) {
                t.check(Some(&fv) == a.scale(d as i64).ok().as_ref(), || {
                    format!("F_{d} V_{d} a ≠ {d} a for {a:?}")
                });
            }
        }
    }

    // I_{m'} V_e = e' V_{p^u} I_d with m' = e' d
    let mut squares = 0;
    while squares < 120 {
        let p = [2u64, 3, 5][rng.gen_range(0..3)];
        let r = rng.gen_range(1..=4u64);
        let e = rng.gen_range(1..=6u64);
        let (u, e_prime) = split_prime_power(p, e);
        let a = random_int_vector(&mut rng, &TruncationSet::big(r));
        let big = TruncationSet::big(r * e);
        let Some(va) = t.ok(a.verschiebung(e, &big), || format!("V_{e} on {a:?}")) else {
            continue;
        };
        for m_prime in (1..=r * e).filter(|m| m % p != 0 && m % e_prime == 0) {
            let d = m_prime / e_prime;
            let s = s_function(p, r * e, m_prime);
            let lhs = i_component(&va, p, m_prime, s);
            let rhs = TruncationSet::p_typical(p, s).and_then(|target| {
                if d > r {
                    // I_d lands in W_0 = 0
                    return Ok(WittVector::zero(target, CoeffRing::Integers));
                }
                let x = i_component(&a, p, d, s_function(p, r, d))?;
                x.verschiebung(p.pow(u), &target)?.scale(e_prime as i64)
            });
            let ctx = || format!("square p={p} r={r} e={e} m'={m_prime} on {a:?}");
            if let (Some(l), Some(rh)) = (t.ok(lhs, ctx), t.ok(rhs, ctx)) {
                t.check(l == rh, || format!("{}: {l:?} ≠ {rh:?}", ctx()));
            }
            squares += 1;
        }
    }
}

fn order_suite(config: &VerifyConfig, t: &mut Tally) {
    for p in config.primes(&[2, 3, 5, 7]) {
        for e in config.exponents(&(1..=8).collect::<Vec<_>>()) {
            for r in 1..=config.rmax(10) {
                let Some(params) = t.ok(SplitParams::new(p, r, e), || format!("p={p} e={e} r={r}")) else {
                    continue;
                };
                let total: Option<u64> = params
                    .weight_classes()
                    .map(|m| h_function(&params, m).ok().map(u64::from))
                    .sum();
                t.check(total == Some(r * (e - 1)), || {
                    format!("p={p} e={e} r={r}: Σh = {total:?}, expected {}", r * (e - 1))
                });
            }
        }
    }
}

/// All `(p, r, e)` with `p^{re} ≤ bound`, restricted to the configured
/// primes and exponents when given.
fn enumerable_triples(config: &VerifyConfig) -> Vec<(u64, u64, u64)> {
    let bound = config.enum_bound;
    let max_p = u64::try_from(bound.min(u64::MAX as u128)).unwrap_or(u64::MAX).min(1 << 24);
    let primes = config.primes.clone().unwrap_or_else(|| primes_up_to(max_p));
    let mut out = Vec::new();
    for p in primes {
        let mut n = 1u64;
        while (p as u128).checked_pow(n as u32).is_some_and(|size| size <= bound) {
            for e in (1..=n).filter(|e| n % e == 0) {
                if config.exponents.as_ref().map_or(true, |es| es.contains(&e)) {
                    let r = n / e;
                    if config.rmax.map_or(true, |rmax| r <= rmax) {
                        out.push((p, r, e));
                    }
                }
            }
            n += 1;
        }
    }
    out
}

fn wittsplit_suite(config: &VerifyConfig, t: &mut Tally) {
    for (p, r, e) in enumerable_triples(config) {
        let ctx = || format!("p={p} r={r} e={e}");
        let Some(params) = t.ok(SplitParams::new(p, r, e), ctx) else {
            continue;
        };
        if let Some(brute) = t.ok(brute_force_quotient(&params, config.enum_bound), ctx) {
            let predicted = predicted_quotient(&params);
            t.check(brute == predicted, || format!("{}: enumerated {brute}, predicted {predicted}", ctx()));
        }
    }
}

fn homology_grid(config: &VerifyConfig) -> Vec<(u64, u32, u32)> {
    let mut out = Vec::new();
    for p in config.primes(&[2, 3, 5]) {
        for e in config.exponents(&[2, 3, 4, 5, 6]) {
            for m in 1..=10 {
                out.push((p, e as u32, m));
            }
        }
    }
    out
}

fn homology_report(p: u64, e: u32, m: u32) -> Result<cycbar::HomologyReport> {
    cycbar::reduced_homology(&cycbar::generate_complex(e, m, p)?.with_connes()?)
}

fn homology_suite(config: &VerifyConfig, t: &mut Tally) {
    for (p, e, m) in homology_grid(config) {
        let ctx = || format!("p={p} e={e} m={m}");
        if let Some(h) = t.ok(homology_report(p, e, m), ctx) {
            let predicted = predicted_homology(e, m, p);
            let small = small_complex_hh(e, m, p);
            t.check(h.nonzero() == predicted && small == predicted, || {
                format!("{}: bar {:?}, small complex {small:?}, predicted {predicted:?}", ctx(), h.nonzero())
            });
        }
    }
}

fn connes_suite(config: &VerifyConfig, t: &mut Tally) {
    for (p, e, m) in homology_grid(config) {
        let ctx = || format!("p={p} e={e} m={m}");
        let Some(h) = t.ok(homology_report(p, e, m), ctx) else {
            continue;
        };
        let scalar = h.connes_scalar();
        if m % e != 0 {
            let mm = m as u64 % p;
            t.check(scalar == Some(mm) || scalar == Some((p - mm) % p), || {
                format!("{}: induced B = {scalar:?}, expected ±{mm}", ctx())
            });
        } else if e as u64 % p == 0 {
            t.check(scalar == Some(0), || format!("{}: induced B = {scalar:?}, expected 0", ctx()));
        } else {
            t.check(h.nonzero().is_empty(), || format!("{}: expected zero homology", ctx()));
        }
    }
}

fn ss_suite(config: &VerifyConfig, t: &mut Tally) {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for p in config.primes(&[2, 3]) {
        for e in config.exponents(&[2, 3, 4, 6]) {
            for m in 1..=12u32 {
                let ctx = || format!("p={p} e={e} m={m}");
                let Some(h) = t.ok(homology_report(p, e as u32, m), ctx) else {
                    continue;
                };
                for mode in [Mode::Tate, Mode::Hfp] {
                    let Some(page) = t.ok(ssengine::build_e2_from_homology(&h, mode), ctx) else {
                        continue;
                    };
                    let unit = rng.gen_range(1..p);
                    let patterns = ssengine::standard_patterns(&page, h.connes_scalar().unwrap_or(0), unit);
                    let Some(run) = t.ok(ssengine::run_to_einfty(&page, &patterns, -10..=10), ctx) else {
                        continue;
                    };
                    for n in -10..=10i64 {
                        let expected = if n.rem_euclid(2) == 1 {
                            closed_form(p, e, m as u64, (n - 1).div_euclid(2)).length(mode) as u64
                        } else {
                            0
                        };
                        let got = run.survivor_count(n);
                        t.check(got == Some(expected), || {
                            format!("{} {mode} degree {n}: {got:?} survivors, expected {expected}", ctx())
                        });
                    }
                }
            }
        }
    }
}

fn equalizer_suite(config: &VerifyConfig, t: &mut Tally) {
    for p in config.primes(&[2, 3]) {
        for e in config.exponents(&[2, 3, 4, 6]) {
            for r in 1..=config.rmax(6) {
                let Some(params) = t.ok(SplitParams::new(p, r, e), || format!("p={p} e={e} r={r}")) else {
                    continue;
                };
                for m in params.weight_classes() {
                    let ctx = || format!("p={p} e={e} r={r} m'={m}");
                    let base = default_levels(&params, m);
                    let Some(reference) = t.ok(tc_weight_group_with(&params, m, base, Units::One), ctx) else {
                        continue;
                    };
                    for k in 0..20 {
                        let seed = config.seed.wrapping_add(k);
                        if let Some(g) = t.ok(tc_weight_group_with(&params, m, base, Units::Random(seed)), ctx) {
                            t.check(g == reference, || format!("{}: seed {seed} gives {g}, expected {reference}", ctx()));
                        }
                    }
                    for levels in base + 1..=base + 4 {
                        if let Some(g) = t.ok(tc_weight_group_with(&params, m, levels, Units::One), ctx) {
                            t.check(g == reference, || format!("{}: V={levels} gives {g}, expected {reference}", ctx()));
                        }
                    }
                }
            }
        }
    }
}

fn routes_suite(config: &VerifyConfig, t: &mut Tally) {
    for p in config.primes(&[2, 3]) {
        for e in config.exponents(&[2, 3, 4, 6]) {
            for r in 1..=config.rmax(6) {
                let ctx = || format!("p={p} e={e} r={r}");
                if let Some(c) = t.ok(cross_check(p, e, r, config.enum_bound), ctx) {
                    t.check(c.passed, || c.note());
                }
                if let Some(g) = t.ok(tc_group_in_degree(p, e, 2 * r, 1), ctx) {
                    t.check(g.is_trivial(), || format!("{}: degree {} gives {g}", ctx(), 2 * r));
                }
            }
        }
    }
}
