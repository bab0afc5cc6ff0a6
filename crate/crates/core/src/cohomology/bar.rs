//! Cohomology from normalized inhomogeneous cochains, by explicit linear
//! algebra on the coboundary matrices. Serves as an independent check on the
//! cyclic complex and as the backend of the coboundary solver.

use crate::error::{Error, Result};
use crate::linalg::sparse::SparseKernel;
use crate::linalg::{Matrix, Zpm};

use super::cochain::Cochain;
use super::group::FiniteGroup;
use super::module::GModule;
use super::{subquotient, ModuleStructure};

/// Default bound on the number of equations `(|G|-1)^{i+1} · rank`.
pub const DEFAULT_BRUTE_CEILING: usize = 1 << 22;

/// Coordinates on normalized cochains: tuples of non-identity elements,
/// each carrying `rank` module coordinates.
pub(crate) struct BarComplex<'a> {
    pub group: &'a FiniteGroup,
    pub module: &'a GModule,
    nonid: Vec<usize>,
    pos: Vec<Option<usize>>,
}

impl<'a> BarComplex<'a> {
    pub fn new(group: &'a FiniteGroup, module: &'a GModule) -> Self {
        let e = group.identity();
        let nonid: Vec<usize> = (0..group.order()).filter(|&g| g != e).collect();
        let mut pos = vec![None; group.order()];
        for (i, &g) in nonid.iter().enumerate() {
            pos[g] = Some(i);
        }
        Self {
            group,
            module,
            nonid,
            pos,
        }
    }

    pub fn ring(&self) -> &Zpm {
        self.module.ring()
    }

    pub fn tuples(&self, k: usize) -> usize {
        self.nonid.len().pow(k as u32)
    }

    /// Dimension of normalized `C^k` as a free module over `Z/p^m`.
    pub fn dim(&self, k: usize) -> usize {
        self.tuples(k) * self.module.rank()
    }

    /// Exponents of every coordinate of normalized `C^k`.
    pub fn exps(&self, k: usize) -> Vec<u32> {
        let e = self.module.exps();
        (0..self.tuples(k)).flat_map(|_| e.iter().copied()).collect()
    }

    fn tuple_index(&self, t: &[usize]) -> Option<usize> {
        let base = self.nonid.len();
        t.iter()
            .try_fold(0, |acc, &g| self.pos[g].map(|p| acc * base + p))
    }

    fn tuple_at(&self, k: usize, mut idx: usize, out: &mut Vec<usize>) {
        let base = self.nonid.len();
        out.clear();
        out.resize(k, 0);
        for slot in out.iter_mut().rev() {
            *slot = self.nonid[idx % base];
            idx /= base;
        }
    }

    /// Row `(s, j)` of the coboundary `C^k → C^{k+1}`, unscaled.
    fn d_row(&self, s: &[usize], j: usize, out: &mut Vec<(usize, u64)>) {
        let ring = self.ring();
        let r = self.module.rank();
        let k = s.len() - 1;
        out.clear();
        // the negated textbook differential
        if let Some(t) = self.tuple_index(&s[1..]) {
            let a = self.module.action(s[0]);
            for jj in 0..r {
                let v = a.get(j, jj);
                if v != 0 {
                    out.push((t * r + jj, ring.neg(v)));
                }
            }
        }
        let mut merged = Vec::with_capacity(k);
        for i in 0..k {
            merged.clear();
            merged.extend_from_slice(&s[..i]);
            merged.push(self.group.mul(s[i], s[i + 1]));
            merged.extend_from_slice(&s[i + 2..]);
            if let Some(t) = self.tuple_index(&merged) {
                out.push((t * r + j, if i % 2 == 0 { 1 } else { ring.neg(1) }));
            }
        }
        if let Some(t) = self.tuple_index(&s[..k]) {
            out.push((t * r + j, if k % 2 == 0 { 1 } else { ring.neg(1) }));
        }
    }

    /// Visits every row of `ι∘d` on `C^k → C^{k+1}`.
    pub fn for_each_iota_row(&self, k: usize, mut f: impl FnMut(usize, &[(usize, u64)])) {
        let ring = *self.ring();
        let r = self.module.rank();
        let mut s = Vec::new();
        let mut row = Vec::new();
        for t in 0..self.tuples(k + 1) {
            self.tuple_at(k + 1, t, &mut s);
            for j in 0..r {
                self.d_row(&s, j, &mut row);
                let c = self.module.iota_scale(j);
                for e in row.iter_mut() {
                    e.1 = ring.mul(e.1, c);
                }
                f(t * r + j, &row);
            }
        }
    }

    /// Generators of `ker(ι∘d)` on `C^k`.
    pub fn cocycle_lift_gens(&self, k: usize) -> Matrix {
        let dim = self.dim(k);
        let mut sk = SparseKernel::new(dim, *self.ring());
        self.for_each_iota_row(k, |_, row| sk.add_row(row));
        Matrix::from_cols(&sk.finish(), dim)
    }

    /// The coboundary `C^k → C^{k+1}` as a dense matrix (unscaled).
    pub fn d_dense(&self, k: usize) -> Matrix {
        let r = self.module.rank();
        let mut m = Matrix::zeros(self.dim(k + 1), self.dim(k));
        let mut s = Vec::new();
        let mut row = Vec::new();
        let ring = *self.ring();
        for t in 0..self.tuples(k + 1) {
            self.tuple_at(k + 1, t, &mut s);
            for j in 0..r {
                self.d_row(&s, j, &mut row);
                for &(c, v) in &row {
                    let i = t * r + j;
                    m.set(i, c, ring.add(m.get(i, c), v));
                }
            }
        }
        m
    }

    /// Normalized coordinates of a cochain (values at non-identity tuples).
    pub fn flatten(&self, c: &Cochain) -> Vec<u64> {
        let k = c.degree();
        let n = self.group.order();
        let mut out = Vec::with_capacity(self.dim(k));
        let mut s = Vec::new();
        for t in 0..self.tuples(k) {
            self.tuple_at(k, t, &mut s);
            out.extend_from_slice(c.at(n, &s));
        }
        out
    }

    /// The normalized cochain with the given coordinates.
    pub fn unflatten(&self, k: usize, v: &[u64]) -> Cochain {
        let r = self.module.rank();
        Cochain::from_fn(self.group, self.module, k, |args| match self.tuple_index(args) {
            Some(t) => v[t * r..(t + 1) * r].to_vec(),
            None => self.module.zero(),
        })
    }
}

/// `H^degree(G, A)` for `degree ≤ 2` from normalized cochains.
pub fn brute_cohomology(
    group: &FiniteGroup,
    module: &GModule,
    degree: usize,
    ceiling: usize,
) -> Result<ModuleStructure> {
    if degree > 2 {
        return Err(Error::Unsupported(format!("brute-force cohomology in degree {degree}")));
    }
    let bar = BarComplex::new(group, module);
    let size = bar.dim(degree + 1) as u128;
    if size > ceiling as u128 {
        return Err(Error::SizeCeiling {
            size,
            ceiling: ceiling as u128,
        });
    }
    let ring = module.ring();
    if module.rank() == 0 {
        return Ok(ModuleStructure::zero(ring.p()));
    }
    let k = bar.cocycle_lift_gens(degree);
    let prev = (degree > 0).then(|| bar.d_dense(degree - 1));
    Ok(subquotient(ring, k, prev, &bar.exps(degree)))
}
