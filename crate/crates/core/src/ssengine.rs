//! Bigraded spectral-sequence pages for the Tate and homotopy fixed point
//! computations of a single weight piece.
//!
//! The `E²` page is `F_p[t^{±1}, x]` (or `F_p[t, x]` in hfp mode) tensored with
//! the two homology generators of the weight piece. Classes are tracked per
//! generator and total degree as sets of x-powers, so infinitely many classes
//! are handled through finitely many intervals.

use std::fmt::{self, Write as _};
use std::ops::RangeInclusive;
use std::str::FromStr;

use crate::cycbar::{self, d_function, HomologyReport};
use crate::exactalg::GroupStructure;
use crate::numtheory::split_prime_power;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Tate,
    Hfp,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tate" => Ok(Mode::Tate),
            "hfp" => Ok(Mode::Hfp),
            _ => Err(Error::InvalidParameter(format!("unknown mode {s:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Tate => "tate",
            Mode::Hfp => "hfp",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenKind {
    Y,
    Z,
    W,
}

impl GenKind {
    pub fn symbol(self) -> char {
        match self {
            GenKind::Y => 'y',
            GenKind::Z => 'z',
            GenKind::W => 'w',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Generator {
    pub kind: GenKind,
    /// Vertical degree; the horizontal degree of a generator is 0.
    pub vertical: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedPage {
    pub mode: Mode,
    pub p: u64,
    pub e: u64,
    pub m: u64,
    pub generators: Vec<Generator>,
}

impl BigradedPage {
    pub fn generator(&self, kind: GenKind) -> Option<&Generator> {
        self.generators.iter().find(|g| g.kind == kind)
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Bidegree of `t^b x^a g`.
    pub fn bidegree(&self, b: i64, a: u64, g: &Generator) -> (i64, i64) {
        (-2 * b, g.vertical + 2 * a as i64)
    }

    /// Smallest x-power of a class on `g` in total degree `n`, or `None` when
    /// the parity is wrong.
    fn min_x_power(&self, g: &Generator, n: i64) -> Option<u64> {
        let diff = n - g.vertical;
        if diff.rem_euclid(2) != 0 {
            return None;
        }
        // a − b = diff/2 and b ≥ 0 in hfp mode
        Some(match self.mode {
            Mode::Tate => 0,
            Mode::Hfp => (diff / 2).max(0) as u64,
        })
    }

    fn t_power(&self, g: &Generator, n: i64, a: u64) -> i64 {
        a as i64 - (n - g.vertical) / 2
    }
}

/// `d^ρ(t^b x^a g_s) = unit · t^{b+β} x^{a+α} g_t` for all `b`, `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DifferentialPattern {
    pub page: u32,
    pub source: GenKind,
    pub target: GenKind,
    pub t_power: i64,
    pub x_power: u64,
    /// Residue mod p; zero means the differential vanishes.
    pub unit: u64,
}

impl DifferentialPattern {
    /// Checks the bidegree shift `(−ρ, ρ−1)` against the generators of `page`.
    pub fn check(&self, page: &BigradedPage) -> Result<()> {
        let (Some(s), Some(t)) = (page.generator(self.source), page.generator(self.target)) else {
            return Err(Error::BidegreeMismatch(format!(
                "{self} refers to a generator missing from the page"
            )));
        };
        let rho = self.page as i64;
        let ds = -2 * self.t_power;
        let dt = t.vertical + 2 * self.x_power as i64 - s.vertical;
        if (ds, dt) != (-rho, rho - 1) {
            return Err(Error::BidegreeMismatch(format!(
                "{self} shifts by ({ds},{dt}), expected ({},{})",
                -rho,
                rho - 1
            )));
        }
        Ok(())
    }

    fn is_zero(&self, p: u64) -> bool {
        self.unit % p == 0
    }
}

impl fmt::Display for DifferentialPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "d^{}({}) = {}·t^{} x^{} {}",
            self.page,
            self.source.symbol(),
            self.unit,
            self.t_power,
            self.x_power,
            self.target.symbol()
        )
    }
}

/// `E²` page from the homology of the weight piece.
pub fn build_e2_from_homology(h: &HomologyReport, mode: Mode) -> Result<BigradedPage> {
    let (e, m, p) = (h.e as u64, h.m as u64, h.p);
    let nonzero = h.nonzero();
    let generators = match nonzero.as_slice() {
        [] => Vec::new(),
        [(lo, 1), (hi, 1)] if *hi == lo + 1 => {
            let (a, b) = if lo % 2 == 0 {
                (GenKind::Y, GenKind::Z)
            } else {
                (GenKind::Z, GenKind::W)
            };
            vec![
                Generator { kind: a, vertical: *lo as i64 },
                Generator { kind: b, vertical: *hi as i64 },
            ]
        }
        other => {
            return Err(Error::Mismatch(format!(
                "homology of weight {m} (e={e}, p={p}) has unexpected shape {other:?}"
            )))
        }
    };
    Ok(BigradedPage {
        mode,
        p,
        e,
        m,
        generators,
    })
}

/// `E²` page for `(e, m, p)`, computing homology through the normalized
/// complex.
pub fn build_e2(e: u32, m: u32, p: u64, mode: Mode) -> Result<BigradedPage> {
    let c = cycbar::generate_complex(e, m, p)?;
    build_e2_from_homology(&cycbar::reduced_homology(&c)?, mode)
}

/// `d²(t^b x^a y) = c · t^{b+1} x^a z` with `c` the Connes scalar. Empty when
/// the page has no `y` or the scalar vanishes mod p.
pub fn d2_from_connes(page: &BigradedPage, connes_scalar: u64) -> Vec<DifferentialPattern> {
    if page.generator(GenKind::Y).is_none() || connes_scalar % page.p == 0 {
        return Vec::new();
    }
    vec![DifferentialPattern {
        page: 2,
        source: GenKind::Y,
        target: GenKind::Z,
        t_power: 1,
        x_power: 0,
        unit: connes_scalar % page.p,
    }]
}

/// The higher pattern used when `d²` vanishes: `d^{2v+2}(y) ≐ t(tx)^v z` for
/// `e ∤ m` with `v = v_p(m)`, and `d^{2u}(w) ≐ (tx)^u z` for `e | m` with
/// `u = v_p(e)`.
pub fn higher_pattern(page: &BigradedPage, unit: u64) -> Option<DifferentialPattern> {
    if page.generator(GenKind::Y).is_some() {
        let v = split_prime_power(page.p, page.m).0 as u64;
        Some(DifferentialPattern {
            page: 2 * v as u32 + 2,
            source: GenKind::Y,
            target: GenKind::Z,
            t_power: v as i64 + 1,
            x_power: v,
            unit,
        })
    } else if page.generator(GenKind::W).is_some() {
        let u = split_prime_power(page.p, page.e).0 as u64;
        Some(DifferentialPattern {
            page: 2 * u as u32,
            source: GenKind::W,
            target: GenKind::Z,
            t_power: u as i64,
            x_power: u,
            unit,
        })
    } else {
        None
    }
}

/// `d²` from Connes' operator, followed by the higher pattern when `d²`
/// vanishes.
pub fn standard_patterns(page: &BigradedPage, connes_scalar: u64, unit: u64) -> Vec<DifferentialPattern> {
    let d2 = d2_from_connes(page, connes_scalar);
    if !d2.is_empty() {
        return d2;
    }
    higher_pattern(page, unit).into_iter().collect()
}

/// Finite union of half-open intervals of x-powers; `u64::MAX` as an end
/// means unbounded.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntervalSet(Vec<(u64, u64)>);

const INF: u64 = u64::MAX;

impl IntervalSet {
    pub fn from_start(start: u64) -> Self {
        IntervalSet(vec![(start, INF)])
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, a: u64) -> bool {
        self.0.iter().any(|&(s, e)| s <= a && a < e)
    }

    /// Number of elements, `None` when unbounded.
    pub fn count(&self) -> Option<u64> {
        self.0
            .iter()
            .try_fold(0u64, |acc, &(s, e)| (e != INF).then(|| acc + (e - s)))
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (s1, e1) = self.0[i];
            let (s2, e2) = other.0[j];
            let (s, e) = (s1.max(s2), e1.min(e2));
            if s < e {
                out.push((s, e));
            }
            if e1 < e2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet(out)
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        for &(mut s, e) in &self.0 {
            for &(s2, e2) in &other.0 {
                if e2 <= s || s2 >= e {
                    continue;
                }
                if s2 > s {
                    out.push((s, s2));
                }
                s = e2;
                if s >= e {
                    break;
                }
            }
            if s < e {
                out.push((s, e));
            }
        }
        IntervalSet(out)
    }

    /// `{a + k : a ∈ self}`.
    pub fn shift_up(&self, k: u64) -> Self {
        IntervalSet(
            self.0
                .iter()
                .map(|&(s, e)| (s + k, if e == INF { INF } else { e + k }))
                .collect(),
        )
    }

    /// `{a ≥ 0 : a + k ∈ self}`.
    pub fn shift_down(&self, k: u64) -> Self {
        IntervalSet(
            self.0
                .iter()
                .filter(|&&(_, e)| e > k)
                .map(|&(s, e)| (s.saturating_sub(k), if e == INF { INF } else { e - k }))
                .collect(),
        )
    }
}

/// Alive x-powers for every generator in each degree of a window.
#[derive(Clone, Debug)]
struct Stage {
    lo: i64,
    /// `alive[g][n - lo]`
    alive: Vec<Vec<IntervalSet>>,
}

impl Stage {
    fn get(&self, g: usize, n: i64) -> Option<&IntervalSet> {
        usize::try_from(n - self.lo).ok().and_then(|i| self.alive[g].get(i))
    }
}

/// Result of running a page to `E^∞` over a window of total degrees.
#[derive(Clone, Debug)]
pub struct EInfinity {
    pub page: BigradedPage,
    pub patterns: Vec<DifferentialPattern>,
    pub window: RangeInclusive<i64>,
    /// Stage 0 is `E²`; stage `k` is after the first `k` patterns.
    stages: Vec<Stage>,
}

/// Applies `patterns` in order of their page and returns the surviving
/// classes over `window`.
pub fn run_to_einfty(
    page: &BigradedPage,
    patterns: &[DifferentialPattern],
    window: RangeInclusive<i64>,
) -> Result<EInfinity> {
    let mut patterns = patterns.to_vec();
    patterns.sort_by_key(|d| d.page);
    for d in &patterns {
        d.check(page)?;
    }
    let margin = patterns.len() as i64 + 1;
    let (lo, hi) = (window.start() - margin, window.end() + margin);
    let width = (hi - lo + 1) as usize;

    let initial = Stage {
        lo,
        alive: page
            .generators
            .iter()
            .map(|g| {
                (lo..=hi)
                    .map(|n| {
                        page.min_x_power(g, n)
                            .map(IntervalSet::from_start)
                            .unwrap_or_default()
                    })
                    .collect()
            })
            .collect(),
    };
    let mut stages = vec![initial];
    for d in &patterns {
        let prev = stages.last().unwrap();
        let mut next = prev.clone();
        if !d.is_zero(page.p) {
            let si = page.generators.iter().position(|g| g.kind == d.source).unwrap();
            let ti = page.generators.iter().position(|g| g.kind == d.target).unwrap();
            for k in 1..width {
                let sources = &prev.alive[si][k];
                let targets = &prev.alive[ti][k - 1];
                let hit = sources.intersect(&targets.shift_down(d.x_power));
                if hit.is_empty() {
                    continue;
                }
                next.alive[si][k] = next.alive[si][k].difference(&hit);
                next.alive[ti][k - 1] = next.alive[ti][k - 1].difference(&hit.shift_up(d.x_power));
            }
        }
        stages.push(next);
    }

    Ok(EInfinity {
        page: page.clone(),
        patterns,
        window,
        stages,
    })
}

impl EInfinity {
    fn last(&self) -> &Stage {
        self.stages.last().unwrap()
    }

    /// Number of surviving classes in total degree `n`; `None` when infinite
    /// or outside the window.
    pub fn survivor_count(&self, n: i64) -> Option<u64> {
        if !self.window.contains(&n) {
            return None;
        }
        (0..self.page.generators.len()).try_fold(0, |acc, g| {
            self.last().get(g, n).and_then(IntervalSet::count).map(|c| acc + c)
        })
    }

    /// Surviving classes in degree `n` as `(b, a, generator)`, if finitely many.
    pub fn survivors(&self, n: i64) -> Option<Vec<(i64, u64, GenKind)>> {
        self.survivor_count(n)?;
        let mut out = Vec::new();
        for (gi, g) in self.page.generators.iter().enumerate() {
            let set = self.last().get(gi, n)?;
            for &(s, e) in &set.0 {
                for a in s..e {
                    out.push((self.page.t_power(g, n, a), a, g.kind));
                }
            }
        }
        Some(out)
    }

    /// Group in an odd degree from the survivor count, resolving the extension
    /// as a single cyclic group.
    pub fn group(&self, n: i64) -> Option<GroupStructure> {
        self.survivor_count(n)
            .map(|c| GroupStructure::cyclic(self.page.p, c as u32))
    }

    /// Which pattern removes the class `t^b x^a g` in degree `n`, if any.
    fn fate(&self, gi: usize, n: i64, a: u64) -> Option<String> {
        let g = &self.page.generators[gi];
        for (k, d) in self.patterns.iter().enumerate() {
            let before = self.stages[k].get(gi, n)?;
            let after = self.stages[k + 1].get(gi, n)?;
            if before.contains(a) && !after.contains(a) {
                let b = self.page.t_power(g, n, a);
                let (sb, sa, tb, ta) = if d.source == g.kind {
                    (b, a, b + d.t_power, a + d.x_power)
                } else {
                    (b - d.t_power, a - d.x_power, b, a)
                };
                return Some(format!(
                    "d^{}(t^{sb} x^{sa} {}) = t^{tb} x^{ta} {}",
                    d.page,
                    d.source.symbol(),
                    d.target.symbol()
                ));
            }
        }
        None
    }

    /// Page dump: one line per class, x-powers listed up to the largest kill
    /// threshold plus two.
    pub fn dump(&self) -> String {
        let cap = self.patterns.iter().map(|d| d.x_power).max().unwrap_or(0) + 2;
        let mut out = String::new();
        for n in self.window.clone() {
            for (gi, g) in self.page.generators.iter().enumerate() {
                let Some(start) = self.page.min_x_power(g, n) else {
                    continue;
                };
                for a in start..=start + cap {
                    let b = self.page.t_power(g, n, a);
                    let status = match self.fate(gi, n, a) {
                        Some(s) => format!("killed-by: {s}"),
                        None => "survives".to_string(),
                    };
                    let _ = writeln!(out, "{n}: t^{b} x^{a} {} {status}", g.kind.symbol());
                }
            }
        }
        out
    }
}

/// Closed-form lengths of the cyclic groups in odd total degree `2r+1`, for
/// the weight piece `m = p^v m'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerGroup {
    pub p: u64,
    pub e: u64,
    pub m: u64,
    pub v: u32,
    pub m_prime: u64,
    pub r: i64,
    pub tp_length: u32,
    pub tcminus_length: u32,
}

impl TowerGroup {
    pub fn length(&self, mode: Mode) -> u32 {
        match mode {
            Mode::Tate => self.tp_length,
            Mode::Hfp => self.tcminus_length,
        }
    }

    pub fn group(&self, mode: Mode) -> GroupStructure {
        GroupStructure::cyclic(self.p, self.length(mode))
    }
}

pub fn closed_form(p: u64, e: u64, m: u64, r: i64) -> TowerGroup {
    let (v, m_prime) = split_prime_power(p, m);
    let u = split_prime_power(p, e).0;
    let (tp_length, tcminus_length) = if m % e != 0 {
        let d = d_function(e, m) as i64;
        (v, if r >= d { v + 1 } else { v })
    } else if u > 0 {
        (u, u)
    } else {
        (0, 0)
    };
    TowerGroup {
        p,
        e,
        m,
        v,
        m_prime,
        r,
        tp_length,
        tcminus_length,
    }
}

/// Builds the page, applies the standard patterns with the Connes scalar from
/// the homology computation and unit 1 for higher patterns, and runs to
/// `E^∞` over `window`.
pub fn run_weight(e: u32, m: u32, p: u64, mode: Mode, window: RangeInclusive<i64>) -> Result<EInfinity> {
    let c = cycbar::generate_complex(e, m, p)?.with_connes()?;
    let h = cycbar::reduced_homology(&c)?;
    let page = build_e2_from_homology(&h, mode)?;
    let patterns = standard_patterns(&page, h.connes_scalar().unwrap_or(0), 1);
    run_to_einfty(&page, &patterns, window)
}
