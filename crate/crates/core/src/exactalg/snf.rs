use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Smith normal form `D = U * M * V` with `U`, `V` unimodular.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries, `d_1 | d_2 | ...`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.d
            .diagonal_entries()
            .into_iter()
            .filter(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Computes the Smith normal form of `m`.
///
/// Pivots are chosen as the entry of smallest absolute value in the remaining
/// block, ties going to the lowest row and then the lowest column, so the
/// transforms are reproducible.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = smallest_entry(&d, t..rows, t..cols) else {
            break;
        };
        move_pivot(&mut d, &mut u, &mut v, t, pi, pj);

        loop {
            let pivot = d.get(t, t).clone();
            for i in t + 1..rows {
                let q = d.get(i, t).div_floor(&pivot);
                if !q.is_zero() {
                    let q = -q;
                    d.add_row_multiple(i, t, &q);
                    u.add_row_multiple(i, t, &q);
                }
            }
            for j in t + 1..cols {
                let q = d.get(t, j).div_floor(&pivot);
                if !q.is_zero() {
                    let q = -q;
                    d.add_col_multiple(j, t, &q);
                    v.add_col_multiple(j, t, &q);
                }
            }

            // Remainders left in the pivot row/column are strictly smaller than
            // the pivot; bring the smallest one up and repeat.
            let in_col = smallest_entry(&d, t + 1..rows, t..t + 1);
            let in_row = smallest_entry(&d, t..t + 1, t + 1..cols);
            let next = match (in_col, in_row) {
                (Some(a), Some(b)) => {
                    if d.get(b.0, b.1).abs() < d.get(a.0, a.1).abs() {
                        Some(b)
                    } else {
                        Some(a)
                    }
                }
                (a, b) => a.or(b),
            };
            if let Some((pi, pj)) = next {
                move_pivot(&mut d, &mut u, &mut v, t, pi, pj);
                continue;
            }

            // Row and column are clear; enforce divisibility of the rest.
            let pivot = d.get(t, t).clone();
            let offending = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d.get(i, j).is_multiple_of(&pivot)));
            match offending {
                Some(i) => {
                    let one = BigInt::from(1);
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }

        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }

    SmithForm { d, u, v }
}

fn smallest_entry(
    m: &IntMatrix,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in rows {
        for j in cols.clone() {
            let a = m.get(i, j);
            if a.is_zero() {
                continue;
            }
            let abs = a.abs();
            if best.as_ref().map_or(true, |(_, _, b)| abs < *b) {
                best = Some((i, j, abs));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

fn move_pivot(
    d: &mut IntMatrix,
    u: &mut IntMatrix,
    v: &mut IntMatrix,
    t: usize,
    i: usize,
    j: usize,
) {
    d.swap_rows(t, i);
    u.swap_rows(t, i);
    d.swap_cols(t, j);
    v.swap_cols(t, j);
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn det_cofactor(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 1 {
            return m[0][0];
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det_cofactor(&minor)
            })
            .sum()
    }

    fn check(m: &IntMatrix, s: &SmithForm) {
        assert_eq!(s.u.mul(m).unwrap().mul(&s.v).unwrap(), s.d);
        assert!(s.d.is_diagonal());
        let diag = s.d.diagonal_entries();
        for w in diag.windows(2) {
            if !w[0].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]), "{:?}", diag);
            } else {
                assert!(w[1].is_zero());
            }
        }
        assert!(diag.iter().all(|x| !x.is_negative()));
    }

    #[test]
    fn two_by_two_diag() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]).unwrap();
        let s = smith_normal_form(&m);
        check(&m, &s);
        assert_eq!(s.d.diagonal_entries(), vec![BigInt::from(1), BigInt::from(6)]);
        // |det| is preserved: cofactor expansion of the input gives 6.
        assert_eq!(det_cofactor(&[vec![2, 0], vec![0, 3]]).abs(), 6);
    }

    #[test]
    fn zero_and_unit() {
        let z = IntMatrix::zeros(2, 3);
        let s = smith_normal_form(&z);
        check(&z, &s);
        assert!(s.d.is_zero());
        let one = IntMatrix::from_rows(&[vec![1]]).unwrap();
        assert_eq!(smith_normal_form(&one).d, one);
    }

    #[test]
    fn transforms_are_unimodular() {
        let rows = vec![vec![4, 6, 2], vec![3, -9, 12], vec![5, 7, 1]];
        let m = IntMatrix::from_rows(&rows).unwrap();
        let s = smith_normal_form(&m);
        check(&m, &s);
        let to_vec = |x: &IntMatrix| -> Vec<Vec<i64>> {
            (0..x.rows())
                .map(|i| x.row(i).iter().map(|v| i64::try_from(v).unwrap()).collect())
                .collect()
        };
        assert_eq!(det_cofactor(&to_vec(&s.u)).abs(), 1);
        assert_eq!(det_cofactor(&to_vec(&s.v)).abs(), 1);
        let prod: BigInt = s.d.diagonal_entries().iter().product();
        assert_eq!(prod, BigInt::from(det_cofactor(&rows).abs()));
    }

    proptest! {
        #[test]
        fn snf_identity(rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(-20i64..20, 16)) {
            let m = IntMatrix::from_fn(rows, cols, |i, j| BigInt::from(seed[i * 4 + j]));
            let s = smith_normal_form(&m);
            check(&m, &s);
        }
    }
}
