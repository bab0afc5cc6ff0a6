//! Smith normal form over `Z` with exact big integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// `D = U·M·V` with `D` diagonal, nonnegative, and `d_1 | d_2 | …`.
#[derive(Debug, Clone)]
pub struct IntSnf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl IntSnf {
    /// The nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.d.len().min(self.d.first().map_or(0, Vec::len));
        (0..k)
            .map(|i| self.d[i][i].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn matmul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner, "dimension mismatch");
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(BigInt::zero(), |acc, (x, brow)| acc + x * &brow[j])
                })
                .collect()
        })
        .collect()
}

pub fn from_i64(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

fn row_sub(m: &mut IntMatrix, dst: usize, src: usize, f: &BigInt) {
    if f.is_zero() {
        return;
    }
    let src_row = m[src].clone();
    for (d, s) in m[dst].iter_mut().zip(&src_row) {
        *d -= f * s;
    }
}

fn col_sub(m: &mut IntMatrix, dst: usize, src: usize, f: &BigInt) {
    if f.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let s = row[src].clone();
        row[dst] -= f * s;
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

pub fn snf_integer(m: &IntMatrix) -> IntSnf {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    for t in 0..rows.min(cols) {
        // bring the smallest nonzero entry of the trailing block to (t, t)
        let Some((pi, pj)) = min_abs_entry(&a, t..rows, t..cols) else {
            break;
        };
        a.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut a, t, pj);
        swap_cols(&mut v, t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                let f = a[i][t].div_floor(&a[t][t]);
                row_sub(&mut a, i, t, &f);
                row_sub(&mut u, i, t, &f);
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let f = a[t][j].div_floor(&a[t][t]);
                col_sub(&mut a, j, t, &f);
                col_sub(&mut v, j, t, &f);
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // a smaller remainder now sits in row t or column t
                let (pi, pj) = cross_min(&a, t, rows, cols);
                a.swap(t, pi);
                u.swap(t, pi);
                swap_cols(&mut a, t, pj);
                swap_cols(&mut v, t, pj);
                continue;
            }
            // divisibility condition on the trailing block
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    let one = -BigInt::one();
                    row_sub(&mut a, t, i, &one);
                    row_sub(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }
    IntSnf { u, d: a, v }
}

fn min_abs_entry(
    a: &IntMatrix,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if a[i][j].is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn cross_min(a: &IntMatrix, t: usize, rows: usize, cols: usize) -> (usize, usize) {
    let mut best = (t, t);
    let cands = (t..rows).map(|i| (i, t)).chain((t + 1..cols).map(|j| (t, j)));
    for (i, j) in cands {
        if !a[i][j].is_zero() && a[i][j].abs() < a[best.0][best.1].abs() {
            best = (i, j);
        }
    }
    best
}
