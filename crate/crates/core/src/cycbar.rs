//! Weight-graded pieces of the cyclic bar construction of the pointed monoid
//! `Π_e = {0, 1, x, …, x^{e−1}}` with `x^e = 0`.
//!
//! The weight-`m` piece is modelled by its normalized chain complex over `F_p`:
//! in degree `n` the basis consists of the words `(x^{π_0}, …, x^{π_n})` with
//! `Σ π_i = m`, `0 ≤ π_0 ≤ e−1` and `1 ≤ π_i ≤ e−1` for `i ≥ 1`. Faces that
//! multiply into `x^e` hit the basepoint and are dropped.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use crate::exactalg::{fp_homology, FpMatrix};
use crate::numtheory::is_prime;
use crate::{Error, Result};

/// A word `(x^{π_0}, …, x^{π_n})` in the cyclic bar construction, stored as its
/// exponents. The monoid unit is exponent 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CyclicWord(pub Vec<u32>);

impl CyclicWord {
    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn weight(&self) -> u64 {
        self.0.iter().map(|&x| x as u64).sum()
    }

    /// No unit in positions `1..=n`.
    pub fn is_nondegenerate(&self) -> bool {
        self.0[1..].iter().all(|&x| x >= 1)
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&k| match k {
                0 => "1".to_string(),
                1 => "x".to_string(),
                k => format!("x^{k}"),
            })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `d(e, m) = ⌊(m − 1)/e⌋`, for `m ≥ 1`.
pub fn d_function(e: u64, m: u64) -> u64 {
    assert!(e >= 1 && m >= 1);
    (m - 1) / e
}

/// Normalized chain complex of the weight-`m` piece over `F_p`, optionally
/// carrying Connes' operator.
#[derive(Clone, Debug)]
pub struct NormalizedComplex {
    e: u32,
    m: u32,
    p: u64,
    /// Degrees `0..=m+1`; degree `m+1` is always empty.
    bases: Vec<Vec<CyclicWord>>,
    index: Vec<HashMap<CyclicWord, usize>>,
    /// `boundaries[n]: C_n → C_{n−1}` (`boundaries[0]` has no rows).
    boundaries: Vec<FpMatrix>,
    /// `connes[n]: C_n → C_{n+1}` for `n in 0..=m`.
    connes: Option<Vec<FpMatrix>>,
}

fn enumerate_words(e: u32, m: u32, n: usize) -> Vec<CyclicWord> {
    fn fill(e: u32, remaining: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<CyclicWord>) {
        if slots == 0 {
            if remaining == 0 {
                out.push(CyclicWord(cur.clone()));
            }
            return;
        }
        // each remaining slot needs at least 1 and at most e−1
        let lo = 1.max(remaining.saturating_sub((slots as u32 - 1) * (e - 1)));
        let hi = (e - 1).min(remaining.saturating_sub(slots as u32 - 1));
        for k in lo..=hi {
            cur.push(k);
            fill(e, remaining - k, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for first in 0..e.min(m + 1) {
        let mut cur = vec![first];
        fill(e, m - first, n, &mut cur, &mut out);
    }
    out
}

/// Number of nondegenerate weight-`m` words of degree `n`.
pub fn basis_size(e: u32, m: u32, n: usize) -> usize {
    enumerate_words(e, m, n).len()
}

/// Builds the normalized complex of the weight-`m` piece (boundary only).
pub fn generate_complex(e: u32, m: u32, p: u64) -> Result<NormalizedComplex> {
    if e < 2 || m < 1 {
        return Err(Error::InvalidParameter(format!(
            "need e >= 2 and m >= 1 (e={e}, m={m})"
        )));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let top = m as usize + 1;
    let bases: Vec<Vec<CyclicWord>> = (0..=top)
        .map(|n| if n == top { Vec::new() } else { enumerate_words(e, m, n) })
        .collect();
    let index: Vec<HashMap<CyclicWord, usize>> = bases
        .iter()
        .map(|b| b.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect())
        .collect();

    let mut boundaries = Vec::with_capacity(top + 1);
    boundaries.push(FpMatrix::zeros(p, 0, bases[0].len()));
    for n in 1..=top {
        let mut d = FpMatrix::zeros(p, bases[n - 1].len(), bases[n].len());
        for (col, word) in bases[n].iter().enumerate() {
            for i in 0..=n {
                if let Some(face) = face(word, i, e) {
                    if let Some(&row) = index[n - 1].get(&face) {
                        d.add_to(row, col, if i % 2 == 0 { 1 } else { -1 });
                    }
                }
            }
        }
        boundaries.push(d);
    }

    Ok(NormalizedComplex {
        e,
        m,
        p,
        bases,
        index,
        boundaries,
        connes: None,
    })
}

/// `d_i` on a word; `None` when the product hits the basepoint or the face is
/// degenerate.
fn face(word: &CyclicWord, i: usize, e: u32) -> Option<CyclicWord> {
    let w = &word.0;
    let n = w.len() - 1;
    let mut out = Vec::with_capacity(n);
    if i < n {
        out.extend_from_slice(&w[..i]);
        out.push(w[i] + w[i + 1]);
        out.extend_from_slice(&w[i + 2..]);
    } else {
        out.push(w[n] + w[0]);
        out.extend_from_slice(&w[1..n]);
    }
    if out.iter().any(|&k| k >= e) {
        return None;
    }
    let f = CyclicWord(out);
    f.is_nondegenerate().then_some(f)
}

/// Terms `(sign, word)` of `B(a_0 ∧ … ∧ a_n) = Σ_i (−1)^{ni} (1 ∧ a_i ∧ … ∧ a_n ∧ a_0 ∧ … ∧ a_{i−1})`,
/// degenerate terms dropped.
fn connes_terms(word: &CyclicWord) -> Vec<(i64, CyclicWord)> {
    let w = &word.0;
    let n = w.len() - 1;
    (0..=n)
        .filter_map(|i| {
            let mut out = Vec::with_capacity(n + 2);
            out.push(0);
            out.extend_from_slice(&w[i..]);
            out.extend_from_slice(&w[..i]);
            let t = CyclicWord(out);
            t.is_nondegenerate()
                .then_some((if (n * i) % 2 == 0 { 1 } else { -1 }, t))
        })
        .collect()
}

impl NormalizedComplex {
    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn weight(&self) -> u32 {
        self.m
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Highest degree with a (possibly empty) basis, `m + 1`.
    pub fn top_degree(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn basis(&self, n: usize) -> &[CyclicWord] {
        self.bases.get(n).map_or(&[], Vec::as_slice)
    }

    pub fn dim(&self, n: usize) -> usize {
        self.basis(n).len()
    }

    pub fn boundary(&self, n: usize) -> &FpMatrix {
        &self.boundaries[n]
    }

    pub fn connes(&self, n: usize) -> Option<&FpMatrix> {
        self.connes.as_ref().and_then(|c| c.get(n))
    }

    /// Adds the matrices of Connes' operator and checks `B² = 0` and
    /// `∂B + B∂ = 0`, together with `∂² = 0`.
    pub fn with_connes(mut self) -> Result<Self> {
        let top = self.top_degree();
        let mut connes = Vec::with_capacity(top);
        for n in 0..top {
            let mut b = FpMatrix::zeros(self.p, self.dim(n + 1), self.dim(n));
            for (col, word) in self.bases[n].iter().enumerate() {
                for (sign, t) in connes_terms(word) {
                    let row = *self.index[n + 1].get(&t).ok_or_else(|| {
                        Error::IdentityFailure(format!("B term {t} missing from basis"))
                    })?;
                    b.add_to(row, col, sign);
                }
            }
            connes.push(b);
        }
        self.connes = Some(connes);
        self.check_identities()?;
        Ok(self)
    }

    /// `∂∂ = 0`, and when Connes' operator is present, `BB = 0` and
    /// `∂B + B∂ = 0`.
    pub fn check_identities(&self) -> Result<()> {
        let top = self.top_degree();
        for n in 1..top {
            if !self.boundaries[n].mul(&self.boundaries[n + 1])?.is_zero() {
                return Err(Error::IdentityFailure(format!("∂∂ ≠ 0 in degree {}", n + 1)));
            }
        }
        let Some(connes) = &self.connes else {
            return Ok(());
        };
        for n in 0..top.saturating_sub(1) {
            if !connes[n + 1].mul(&connes[n])?.is_zero() {
                return Err(Error::IdentityFailure(format!("BB ≠ 0 on degree {n}")));
            }
        }
        for n in 0..top {
            // on C_n: ∂_{n+1} B_n + B_{n−1} ∂_n
            let db = self.boundaries[n + 1].mul(&connes[n])?;
            let sum = if n == 0 {
                db
            } else {
                db.add(&connes[n - 1].mul(&self.boundaries[n])?)?
            };
            if !sum.is_zero() {
                return Err(Error::IdentityFailure(format!("∂B + B∂ ≠ 0 on degree {n}")));
            }
        }
        Ok(())
    }

    /// Plain-text listing: basis words, then one line `deg src dst value` per
    /// nonzero entry of each boundary and Connes matrix.
    pub fn to_listing(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# e={} m={} p={}", self.e, self.m, self.p);
        for (n, basis) in self.bases.iter().enumerate() {
            for (i, w) in basis.iter().enumerate() {
                let _ = writeln!(out, "basis {n} {i} {w}");
            }
        }
        let _ = writeln!(out, "# boundary");
        for (n, d) in self.boundaries.iter().enumerate() {
            write_entries(&mut out, n, d);
        }
        if let Some(connes) = &self.connes {
            let _ = writeln!(out, "# connes");
            for (n, b) in connes.iter().enumerate() {
                write_entries(&mut out, n, b);
            }
        }
        out
    }
}

fn write_entries(out: &mut String, deg: usize, m: &FpMatrix) {
    for src in 0..m.cols() {
        for dst in 0..m.rows() {
            let v = m.get(dst, src);
            if v != 0 {
                let _ = writeln!(out, "{deg} {src} {dst} {v}");
            }
        }
    }
}

/// Incremental row echelon basis over `F_p` where every stored vector carries
/// a tag recording its expression in tracked generators.
struct TaggedEchelon {
    p: u64,
    tags: usize,
    rows: Vec<(usize, Vec<u64>, Vec<u64>)>, // pivot, vector (pivot entry 1), tag
}

impl TaggedEchelon {
    fn new(p: u64, tags: usize) -> Self {
        Self {
            p,
            tags,
            rows: Vec::new(),
        }
    }

    /// Reduces `v` against the stored rows; returns the remainder and the
    /// tag of the subtracted combination.
    fn reduce(&self, v: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let p = self.p;
        let mut v = v.to_vec();
        let mut tag = vec![0u64; self.tags];
        for (pivot, row, rtag) in &self.rows {
            let c = v[*pivot];
            if c == 0 {
                continue;
            }
            for (x, &r) in v.iter_mut().zip(row) {
                *x = (*x + p - c * r % p) % p;
            }
            for (t, &r) in tag.iter_mut().zip(rtag) {
                *t = (*t + c * r) % p;
            }
        }
        (v, tag)
    }

    /// Inserts `v` with tag `tag`; returns false if `v` is already in the span.
    fn insert(&mut self, v: &[u64], tag: Vec<u64>) -> bool {
        let p = self.p;
        let (mut rem, sub) = self.reduce(v);
        let Some(pivot) = rem.iter().position(|&x| x != 0) else {
            return false;
        };
        // rem = v − Σ c_k row_k, so tag(rem) = tag − sub
        let mut t: Vec<u64> = tag.iter().zip(&sub).map(|(&a, &b)| (a + p - b) % p).collect();
        let inv = pow_mod(rem[pivot], p - 2, p);
        for x in rem.iter_mut() {
            *x = *x * inv % p;
        }
        for x in t.iter_mut() {
            *x = *x * inv % p;
        }
        // keep earlier rows reduced at the new pivot so later reductions stay valid
        for (_, row, rtag) in self.rows.iter_mut() {
            let c = row[pivot];
            if c == 0 {
                continue;
            }
            for (x, &r) in row.iter_mut().zip(&rem) {
                *x = (*x + p - c * r % p) % p;
            }
            for (x, &r) in rtag.iter_mut().zip(&t) {
                *x = (*x + p - c * r % p) % p;
            }
        }
        self.rows.push((pivot, rem, t));
        true
    }
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    acc
}

/// Connes' operator on homology, `H_n → H_{n+1}`, in the chosen generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedConnes {
    pub source_degree: usize,
    /// `rank(H_{n+1}) × rank(H_n)`.
    pub matrix: FpMatrix,
}

impl InducedConnes {
    /// The scalar when both homology groups have rank one.
    pub fn scalar(&self) -> Option<u64> {
        (self.matrix.rows() == 1 && self.matrix.cols() == 1).then(|| self.matrix.get(0, 0))
    }
}

#[derive(Clone, Debug)]
pub struct HomologyReport {
    pub e: u32,
    pub m: u32,
    pub p: u64,
    /// Rank of the reduced homology in each degree `0..=m+1`.
    pub ranks: Vec<usize>,
    /// Cycle representatives of a basis of homology, per degree. A
    /// one-dimensional group is generated by the cycle on which
    /// [`comparison_coefficient`] takes the value 1, so that Connes' operator
    /// acts on generators by `±m`.
    pub generators: Vec<Vec<Vec<u64>>>,
    /// Connes' operator from the lowest nonzero degree to the next one, when
    /// both are nonzero and the complex carries Connes' operator.
    pub connes: Option<InducedConnes>,
}

impl HomologyReport {
    /// `(degree, rank)` for the nonzero degrees.
    pub fn nonzero(&self) -> Vec<(usize, usize)> {
        self.ranks
            .iter()
            .enumerate()
            .filter(|&(_, &r)| r > 0)
            .map(|(n, &r)| (n, r))
            .collect()
    }

    pub fn connes_scalar(&self) -> Option<u64> {
        self.connes.as_ref().and_then(InducedConnes::scalar)
    }
}

/// Homology ranks over `F_p` with chosen generators, and the induced Connes
/// map when available.
pub fn reduced_homology(c: &NormalizedComplex) -> Result<HomologyReport> {
    let p = c.p;
    let top = c.top_degree();
    let mut ranks = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let inn = if n < top {
            c.boundaries[n + 1].clone()
        } else {
            FpMatrix::zeros(p, c.dim(n), 0)
        };
        ranks.push(fp_homology(&c.boundaries[n], &inn)?);
    }

    let mut generators = vec![Vec::new(); top + 1];
    for n in 0..=top {
        if ranks[n] > 0 {
            generators[n] = homology_generators(c, n);
            debug_assert_eq!(generators[n].len(), ranks[n]);
            if ranks[n] == 1 {
                normalize_generator(c, n, &mut generators[n][0]);
            }
        }
    }

    let connes = match (&c.connes, ranks.iter().position(|&r| r > 0)) {
        (Some(b), Some(n)) if n < top && ranks[n + 1] > 0 => {
            let mut echelon = TaggedEchelon::new(p, ranks[n + 1]);
            if n + 2 <= top {
                let d = &c.boundaries[n + 2];
                for col in 0..d.cols() {
                    echelon.insert(&d.column(col), vec![0; ranks[n + 1]]);
                }
            }
            for (k, z) in generators[n + 1].iter().enumerate() {
                let mut tag = vec![0; ranks[n + 1]];
                tag[k] = 1;
                echelon.insert(z, tag);
            }
            let mut matrix = FpMatrix::zeros(p, ranks[n + 1], ranks[n]);
            for (j, y) in generators[n].iter().enumerate() {
                let image = b[n].apply(y);
                let (rem, tag) = echelon.reduce(&image);
                if rem.iter().any(|&x| x != 0) {
                    return Err(Error::IdentityFailure(format!(
                        "B of a cycle in degree {n} is not a cycle"
                    )));
                }
                for (i, &t) in tag.iter().enumerate() {
                    matrix.set(i, j, t as i64);
                }
            }
            Some(InducedConnes {
                source_degree: n,
                matrix,
            })
        }
        _ => None,
    };

    Ok(HomologyReport {
        e: c.e,
        m: c.m,
        p,
        ranks,
        generators,
        connes,
    })
}

/// Cycles in degree `n` whose classes form a basis of `H_n`: the reduced
/// nullspace basis of `∂_n`, scanned in order, keeping the vectors that are
/// independent of the boundaries and of the ones already kept.
fn homology_generators(c: &NormalizedComplex, n: usize) -> Vec<Vec<u64>> {
    let p = c.p;
    let mut echelon = TaggedEchelon::new(p, 0);
    if n < c.top_degree() {
        let d = &c.boundaries[n + 1];
        for col in 0..d.cols() {
            echelon.insert(&d.column(col), Vec::new());
        }
    }
    let mut cycles = c.boundaries[n].nullspace();
    cycles.sort();
    let mut out = Vec::new();
    for z in cycles {
        if echelon.insert(&z, Vec::new()) {
            out.push(z);
        }
    }
    out
}

/// Component of the comparison map from the normalized complex to the small
/// complex: `∏_l [π_{2l−1} + π_{2l} ≥ e]` over the pairs in positions
/// `1..=2k`, times the last exponent `π_n` in odd degree `n = 2k+1`.
pub fn comparison_coefficient(word: &CyclicWord, e: u32) -> u64 {
    let w = &word.0;
    let n = w.len() - 1;
    let wraps = (1..=n / 2).all(|l| w[2 * l - 1] + w[2 * l] >= e);
    match (wraps, n % 2) {
        (false, _) => 0,
        (true, 0) => 1,
        (true, _) => w[n] as u64,
    }
}

/// Scales a one-dimensional homology generator so the comparison coefficient
/// is 1, when that coefficient is a cocycle not vanishing on it.
fn normalize_generator(c: &NormalizedComplex, n: usize, z: &mut [u64]) {
    let p = c.p;
    let f: Vec<u64> = c.basis(n).iter().map(|w| comparison_coefficient(w, c.e) % p).collect();
    if n < c.top_degree() {
        let d = &c.boundaries[n + 1];
        let is_cocycle = (0..d.cols()).all(|j| {
            (0..d.rows()).fold(0, |acc, i| (acc + f[i] * d.get(i, j)) % p) == 0
        });
        if !is_cocycle {
            return;
        }
    }
    let value = f.iter().zip(z.iter()).fold(0, |acc, (&a, &b)| (acc + a * b) % p);
    if value == 0 {
        return;
    }
    let inv = pow_mod(value, p - 2, p);
    for x in z.iter_mut() {
        *x = *x * inv % p;
    }
}

/// Homology of the weight-`m` part of the small complex
/// `0 ← A ←0− A ←f'− A ←0− A ←f'− …` for `A = F_p[x]/(x^e)`, `f' = e x^{e−1}`.
///
/// Degree `2j` is spanned by `x^{m−je}` and degree `2j+1` by `x^{m−je−1}` when
/// the exponent lies in `0..e`. Returns the nonzero `(degree, rank)` pairs.
pub fn small_complex_hh(e: u32, m: u32, p: u64) -> Vec<(usize, usize)> {
    let (e, m) = (e as i64, m as i64);
    let slot = |n: i64| -> bool {
        let j = n / 2;
        let exp = if n % 2 == 0 { m - j * e } else { m - j * e - 1 };
        (0..e).contains(&exp)
    };
    // rank of the map out of degree n (to n−1): nonzero only for even n ≥ 2
    // where it is multiplication by e·x^{e−1}
    let unit = (e as u64) % p != 0;
    let out_rank = |n: i64| -> usize {
        (n >= 2 && n % 2 == 0 && slot(n) && slot(n - 1) && unit) as usize
    };
    let top = 2 * (m / e.max(1)) + 3;
    (0..=top)
        .filter_map(|n| {
            if !slot(n) {
                return None;
            }
            let rank = 1 - out_rank(n) - out_rank(n + 1);
            (rank > 0).then_some((n as usize, rank))
        })
        .collect()
}

/// Reduced homology of the weight-`m` piece with `F_p` coefficients as given
/// by the closed form: rank one in degrees `2d, 2d+1` if `e ∤ m`; rank one in
/// degrees `2d+1, 2d+2` if `e | m` and `p | e`; zero if `e | m`, `p ∤ e`.
pub fn predicted_homology(e: u32, m: u32, p: u64) -> Vec<(usize, usize)> {
    let d = d_function(e as u64, m as u64) as usize;
    if m % e != 0 {
        vec![(2 * d, 1), (2 * d + 1, 1)]
    } else if e as u64 % p == 0 {
        vec![(2 * d + 1, 1), (2 * d + 2, 1)]
    } else {
        Vec::new()
    }
}
