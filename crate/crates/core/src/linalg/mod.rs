//! Linear algebra over `Z/p^m` and over `Z`.
//!
//! `Z/p^m` is a local principal ideal ring: every nonzero residue is
//! `unit · p^k` with `k < m`, so Smith normal form only needs pivoting on
//! minimal valuation and never grows entries.

pub mod integer;
pub mod sparse;

use serde::{Deserialize, Serialize};

use crate::arith::{inv_mod, is_prime};
use crate::error::{Error, Result};

/// The coefficient ring `Z/p^m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Zpm {
    p: u64,
    m: u32,
    q: u64,
}

impl Zpm {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParams(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(Error::InvalidParams("exponent m must be at least 1".into()));
        }
        let q = p
            .checked_pow(m)
            .filter(|&q| q < (1 << 31))
            .ok_or_else(|| Error::InvalidParams(format!("{p}^{m} is too large")))?;
        Ok(Self { p, m, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// The modulus `p^m`.
    pub fn modulus(&self) -> u64 {
        self.q
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.q
    }

    pub fn reduce(&self, a: i64) -> u64 {
        a.rem_euclid(self.q as i64) as u64
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        crate::arith::pow_mod(a, e, self.q)
    }

    /// `v_p(a)`, with `v_p(0) = m`.
    pub fn valuation(&self, mut a: u64) -> u32 {
        if a == 0 {
            return self.m;
        }
        let mut v = 0;
        while a % self.p == 0 {
            a /= self.p;
            v += 1;
        }
        v
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        inv_mod(a, self.q)
    }

    pub fn is_unit(&self, a: u64) -> bool {
        a % self.p != 0
    }

    /// `p^k` as a residue (zero when `k >= m`).
    pub fn p_pow(&self, k: u32) -> u64 {
        if k >= self.m {
            0
        } else {
            self.p.pow(k)
        }
    }

    /// Writes `a = u · p^k` and returns `(u^{-1}, k)`; `a` must be nonzero.
    fn split(&self, a: u64) -> (u64, u32) {
        let k = self.valuation(a);
        let unit = a / self.p.pow(k);
        (self.inv(unit).expect("unit part"), k)
    }
}

/// Dense row-major matrix with entries in `[0, p^m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u64>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<u64>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged matrix");
            for (i, &x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, other: &Matrix, ring: &Zpm) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = ring.add(out.data[idx], ring.mul(a, other.get(k, j)));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64], ring: &Zpm) -> Vec<u64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| ring.add(acc, ring.mul(a, b)))
            })
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "row count mismatch");
        let mut out = Matrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            out.data[i * out.cols..i * out.cols + self.cols].copy_from_slice(self.row(i));
            out.data[i * out.cols + self.cols..(i + 1) * out.cols].copy_from_slice(other.row(i));
        }
        out
    }

    pub fn scaled(&self, c: u64, ring: &Zpm) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| ring.mul(x, c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn scale_row(&mut self, i: usize, c: u64, ring: &Zpm) {
        for x in &mut self.data[i * self.cols..(i + 1) * self.cols] {
            *x = ring.mul(*x, c);
        }
    }

    /// `row[dst] -= f · row[src]`, restricted to columns `from..`.
    fn row_axpy(&mut self, dst: usize, src: usize, f: u64, from: usize, ring: &Zpm) {
        let cols = self.cols;
        for j in from..cols {
            let s = self.data[src * cols + j];
            if s != 0 {
                let d = &mut self.data[dst * cols + j];
                *d = ring.sub(*d, ring.mul(f, s));
            }
        }
    }

    /// `col[dst] -= f · col[src]`.
    fn col_axpy(&mut self, dst: usize, src: usize, f: u64, ring: &Zpm) {
        for i in 0..self.rows {
            let s = self.data[i * self.cols + src];
            if s != 0 {
                let d = &mut self.data[i * self.cols + dst];
                *d = ring.sub(*d, ring.mul(f, s));
            }
        }
    }
}

/// Smith normal form `D = U·M·V` over `Z/p^m`.
#[derive(Debug, Clone)]
pub struct Snf {
    pub u: Matrix,
    pub v: Matrix,
    /// Valuations `k_0 ≤ k_1 ≤ …` of the nonzero diagonal entries `p^{k_t}`.
    pub pivots: Vec<u32>,
    rows: usize,
    cols: usize,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// The diagonal matrix `D`.
    pub fn diagonal(&self, ring: &Zpm) -> Matrix {
        let mut d = Matrix::zeros(self.rows, self.cols);
        for (t, &k) in self.pivots.iter().enumerate() {
            d.set(t, t, ring.p_pow(k));
        }
        d
    }

    /// Diagonal entries as residues, zeros included, length `min(rows, cols)`.
    pub fn diagonal_entries(&self, ring: &Zpm) -> Vec<u64> {
        (0..self.rows.min(self.cols))
            .map(|t| self.pivots.get(t).map_or(0, |&k| ring.p_pow(k)))
            .collect()
    }
}

/// Which side transforms to accumulate during elimination.
struct Tracking<'a> {
    u: Option<&'a mut Matrix>,
    v: Option<&'a mut Matrix>,
    rhs: Option<&'a mut Matrix>,
}

/// In-place local Smith elimination. Returns pivot valuations.
fn eliminate(a: &mut Matrix, ring: &Zpm, mut tr: Tracking<'_>) -> Vec<u32> {
    let (r, c) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    for t in 0..r.min(c) {
        // minimal valuation in the trailing block
        let mut best: Option<(usize, usize, u32)> = None;
        'search: for i in t..r {
            for j in t..c {
                let x = a.get(i, j);
                if x == 0 {
                    continue;
                }
                let v = ring.valuation(x);
                if best.is_none_or(|(_, _, bv)| v < bv) {
                    best = Some((i, j, v));
                    if v == 0 {
                        break 'search;
                    }
                }
            }
        }
        let Some((pi, pj, k)) = best else { break };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        if let Some(u) = tr.u.as_deref_mut() {
            u.swap_rows(t, pi);
        }
        if let Some(rhs) = tr.rhs.as_deref_mut() {
            rhs.swap_rows(t, pi);
        }
        if let Some(v) = tr.v.as_deref_mut() {
            v.swap_cols(t, pj);
        }
        let (uinv, _) = ring.split(a.get(t, t));
        a.scale_row(t, uinv, ring);
        if let Some(u) = tr.u.as_deref_mut() {
            u.scale_row(t, uinv, ring);
        }
        if let Some(rhs) = tr.rhs.as_deref_mut() {
            rhs.scale_row(t, uinv, ring);
        }
        let pk = ring.p.pow(k);
        for i in t + 1..r {
            let x = a.get(i, t);
            if x == 0 {
                continue;
            }
            let f = x / pk;
            a.row_axpy(i, t, f, t, ring);
            if let Some(u) = tr.u.as_deref_mut() {
                u.row_axpy(i, t, f, 0, ring);
            }
            if let Some(rhs) = tr.rhs.as_deref_mut() {
                rhs.row_axpy(i, t, f, 0, ring);
            }
        }
        for j in t + 1..c {
            let x = a.get(t, j);
            if x == 0 {
                continue;
            }
            let f = x / pk;
            a.set(t, j, 0);
            if let Some(v) = tr.v.as_deref_mut() {
                v.col_axpy(j, t, f, ring);
            }
        }
        pivots.push(k);
    }
    pivots
}

/// Full Smith normal form with both transforms.
pub fn snf(m: &Matrix, ring: &Zpm) -> Snf {
    let mut a = m.clone();
    let mut u = Matrix::identity(m.rows);
    let mut v = Matrix::identity(m.cols);
    let pivots = eliminate(
        &mut a,
        ring,
        Tracking {
            u: Some(&mut u),
            v: Some(&mut v),
            rhs: None,
        },
    );
    Snf {
        u,
        v,
        pivots,
        rows: m.rows,
        cols: m.cols,
    }
}

/// Invariant factors only, as pivot valuations.
pub fn snf_valuations(m: &Matrix, ring: &Zpm) -> Vec<u32> {
    let mut a = m.clone();
    eliminate(
        &mut a,
        ring,
        Tracking {
            u: None,
            v: None,
            rhs: None,
        },
    )
}

/// `log_p` of the order of the submodule spanned by the columns.
pub fn span_log_order(gens: &Matrix, ring: &Zpm) -> u32 {
    snf_valuations(gens, ring)
        .into_iter()
        .map(|k| ring.m - k)
        .sum()
}

/// Generators (as columns) of the kernel `{x : M x = 0}`.
pub fn kernel(m: &Matrix, ring: &Zpm) -> Matrix {
    let mut a = m.clone();
    let mut v = Matrix::identity(m.cols);
    let pivots = eliminate(
        &mut a,
        ring,
        Tracking {
            u: None,
            v: Some(&mut v),
            rhs: None,
        },
    );
    let mut gens = Vec::new();
    for t in 0..m.cols {
        let scale = match pivots.get(t) {
            Some(&0) => continue,
            Some(&k) => ring.p_pow(ring.m - k),
            None => 1,
        };
        gens.push(v.col(t).iter().map(|&x| ring.mul(x, scale)).collect());
    }
    Matrix::from_cols(&gens, m.cols)
}

/// A coordinate of the class of `b` in `coker M ≅ ⊕ Z/p^{k_t}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CokernelCoord {
    pub index: usize,
    pub value: u64,
    /// Order of the cyclic summand.
    pub order: u64,
}

#[derive(Debug, Clone)]
pub enum Solution {
    Solved(Vec<u64>),
    /// Nonzero coordinates of the right-hand side in the cokernel basis.
    Obstructed(Vec<CokernelCoord>),
}

/// Solves `M x = b`.
pub fn solve(m: &Matrix, b: &[u64], ring: &Zpm) -> Solution {
    assert_eq!(b.len(), m.rows, "right-hand side length");
    let mut a = m.clone();
    let mut v = Matrix::identity(m.cols);
    let mut rhs = Matrix::from_cols(&[b.to_vec()], m.rows);
    let pivots = eliminate(
        &mut a,
        ring,
        Tracking {
            u: None,
            v: Some(&mut v),
            rhs: Some(&mut rhs),
        },
    );
    let mut z = vec![0u64; m.cols];
    let mut obstruction = Vec::new();
    for t in 0..m.rows {
        let y = rhs.get(t, 0);
        match pivots.get(t) {
            Some(&k) => {
                let pk = ring.p.pow(k);
                if y % pk != 0 {
                    obstruction.push(CokernelCoord {
                        index: t,
                        value: y % pk,
                        order: pk,
                    });
                } else {
                    z[t] = y / pk;
                }
            }
            None if y != 0 => obstruction.push(CokernelCoord {
                index: t,
                value: y,
                order: ring.q,
            }),
            None => {}
        }
    }
    if obstruction.is_empty() {
        Solution::Solved(v.mul_vec(&z, ring))
    } else {
        Solution::Obstructed(obstruction)
    }
}

/// Invariant factors `[p^{e_1}, …]` (ascending) of `K / I` for submodules
/// `I ⊆ K ⊆ (Z/p^m)^n` given by generating columns.
pub fn quotient_invariants(k_gens: &Matrix, i_gens: &Matrix, ring: &Zpm) -> Vec<u64> {
    assert_eq!(k_gens.rows, i_gens.rows, "ambient dimension mismatch");
    let log_i = span_log_order(i_gens, ring);
    // a_j = log_p |p^j H|
    let a: Vec<u32> = (0..=ring.m)
        .map(|j| {
            let scaled = k_gens.scaled(ring.p_pow(j), ring);
            span_log_order(&scaled.hcat(i_gens), ring) - log_i
        })
        .collect();
    let mut out = Vec::new();
    for j in (0..ring.m as usize).rev() {
        // summands of order at least p^{j+1}, minus those of order at least p^{j+2}
        let at_least = a[j] - a[j + 1];
        let above = if j + 1 < ring.m as usize {
            a[j + 1] - a[j + 2]
        } else {
            0
        };
        for _ in 0..(at_least - above) {
            out.push(ring.p.pow(j as u32 + 1));
        }
    }
    out.sort_unstable();
    out
}

/// Reduces an integer matrix row into residues.
pub fn reduce_row(row: &[i64], ring: &Zpm) -> Vec<u64> {
    row.iter().map(|&x| ring.reduce(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring(p: u64, m: u32) -> Zpm {
        Zpm::new(p, m).unwrap()
    }

    fn check_snf(mat: &Matrix, r: &Zpm) {
        let s = snf(mat, r);
        let d = s.u.mul(mat, r).mul(&s.v, r);
        assert_eq!(d, s.diagonal(r));
        assert!(s.pivots.windows(2).all(|w| w[0] <= w[1]));
        // U, V invertible: their SNF has all unit pivots
        assert!(snf_valuations(&s.u, r).iter().all(|&k| k == 0));
        assert_eq!(snf_valuations(&s.u, r).len(), mat.rows());
        assert_eq!(snf_valuations(&s.v, r).len(), mat.cols());
    }

    #[test]
    fn diagonal_is_fixed() {
        let r = ring(3, 2);
        let m = Matrix::from_rows(&[vec![1, 0], vec![0, 3]], 2);
        let s = snf(&m, &r);
        assert_eq!(s.diagonal(&r), m);
        check_snf(&m, &r);
    }

    #[test]
    fn zero_matrix() {
        let r = ring(5, 1);
        let m = Matrix::zeros(3, 2);
        let s = snf(&m, &r);
        assert_eq!(s.rank(), 0);
        assert!(s.diagonal(&r).is_zero());
    }

    #[test]
    fn solve_and_obstruct() {
        let r = ring(3, 2);
        let m = Matrix::from_rows(&[vec![3, 0], vec![0, 1]], 2);
        match solve(&m, &[6, 4], &r) {
            Solution::Solved(x) => assert_eq!(m.mul_vec(&x, &r), vec![6, 4]),
            Solution::Obstructed(_) => panic!("solvable"),
        }
        match solve(&m, &[1, 0], &r) {
            Solution::Obstructed(c) => {
                assert_eq!(c.len(), 1);
                assert_eq!(c[0].order, 3);
            }
            Solution::Solved(_) => panic!("1 is not a multiple of 3"),
        }
    }

    #[test]
    fn quotient_structure() {
        // K = (Z/9)^2, I = span(3 e_1) -> Z/3 ⊕ Z/9
        let r = ring(3, 2);
        let k = Matrix::identity(2);
        let i = Matrix::from_cols(&[vec![3, 0]], 2);
        assert_eq!(quotient_invariants(&k, &i, &r), vec![3, 9]);
        let k2 = Matrix::from_cols(&[vec![3, 0]], 2);
        assert_eq!(quotient_invariants(&k2, &i, &r), Vec::<u64>::new());
    }

    fn mat_strategy(p: u64, m: u32) -> impl Strategy<Value = Matrix> {
        let q = p.pow(m);
        (1usize..6, 1usize..6).prop_flat_map(move |(rows, cols)| {
            proptest::collection::vec(0..q, rows * cols).prop_map(move |data| Matrix {
                rows,
                cols,
                data,
            })
        })
    }

    proptest! {
        #[test]
        fn snf_identity_holds(mat in mat_strategy(2, 3)) {
            check_snf(&mat, &ring(2, 3));
        }

        #[test]
        fn snf_identity_holds_odd(mat in mat_strategy(5, 2)) {
            check_snf(&mat, &ring(5, 2));
        }

        #[test]
        fn kernel_is_annihilated(mat in mat_strategy(3, 2)) {
            let r = ring(3, 2);
            let k = kernel(&mat, &r);
            prop_assert!(mat.mul(&k, &r).is_zero());
            // |ker| · |im| = |domain|
            let log_ker = span_log_order(&k, &r);
            let log_im = span_log_order(&mat, &r);
            prop_assert_eq!(log_ker + log_im, 2 * mat.cols() as u32);
        }
    }
}
