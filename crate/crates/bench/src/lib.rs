//! Fixtures shared by the benchmarks.

use kpoly::cycbar::{self, NormalizedComplex};
use kpoly::IntMatrix;
use kpoly::SplitParams;
use num_bigint::BigInt;

/// Deterministic dense integer matrix with small entries.
pub fn int_matrix(rows: usize, cols: usize) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |i, j| {
        BigInt::from(((i * 7 + j * 13 + i * j) % 11) as i64 - 5)
    })
}

/// Normalized complex of a weight piece with Connes' operator attached.
pub fn complex(e: u32, m: u32, p: u64) -> NormalizedComplex {
    cycbar::generate_complex(e, m, p)
        .and_then(|c| c.with_connes())
        .expect("valid parameters")
}

pub fn split_params(p: u64, r: u64, e: u64) -> SplitParams {
    SplitParams::new(p, r, e).expect("valid parameters")
}
