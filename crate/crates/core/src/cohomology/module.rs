//! Finite modules `⊕_j Z/p^{e_j}` over a finite group.
//!
//! A module is stored in canonical form: coordinate `j` lives in
//! `Z/p^{e_j}` with `1 ≤ e_j ≤ m`, and each group element acts by an integer
//! matrix read modulo `p^m`. Presentations with relations are reduced to
//! this form by Smith normal form.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Zpm};

use super::group::FiniteGroup;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GModule {
    ring: Zpm,
    exps: Vec<u32>,
    /// One action matrix per group element.
    action: Vec<Matrix>,
    /// Tate weight `k` when the module is `Z/p^m(k)`.
    weight: Option<i64>,
}

impl GModule {
    /// `Z/p^m(k)`: rank one, `g` acting by `χ(g)^k`.
    pub fn twist(group: &FiniteGroup, ring: Zpm, k: i64) -> Result<Self> {
        let ch = group
            .character()
            .ok_or_else(|| Error::InvalidModule(format!("{} carries no character", group.name())))?;
        let q = ring.modulus();
        if ch.modulus % q != 0 {
            return Err(Error::ModuleMismatch(format!(
                "character modulus {} is not divisible by {q}",
                ch.modulus
            )));
        }
        let e = k.rem_euclid(crate::arith::totient(q) as i64) as u64;
        let action = ch
            .values
            .iter()
            .map(|&c| Matrix::from_rows(&[vec![ring.pow(c % q, e)]], 1))
            .collect();
        Ok(Self {
            ring,
            exps: vec![ring.m()],
            action,
            weight: Some(k),
        })
    }

    /// `⊕ Z/p^{e_j}` with trivial action.
    pub fn trivial(group: &FiniteGroup, ring: Zpm, exps: Vec<u32>) -> Result<Self> {
        if exps.iter().any(|&e| e == 0 || e > ring.m()) {
            return Err(Error::InvalidModule("summand exponents must lie in 1..=m".into()));
        }
        let r = exps.len();
        Ok(Self {
            ring,
            exps,
            action: vec![Matrix::identity(r); group.order()],
            weight: None,
        })
    }

    /// Builds a module from a presentation: `rank` free generators over
    /// `Z/p^m`, relations given as columns of `relations`, and the action of
    /// some group elements (which must generate the group).
    pub fn from_presentation(
        group: &FiniteGroup,
        ring: Zpm,
        rank: usize,
        relations: &Matrix,
        generators: &[(usize, Matrix)],
    ) -> Result<Self> {
        if relations.rows() != rank {
            return Err(Error::InvalidModule("relation matrix has the wrong height".into()));
        }
        for (g, a) in generators {
            if *g >= group.order() || a.rows() != rank || a.cols() != rank {
                return Err(Error::InvalidModule("malformed action matrix".into()));
            }
        }
        // full action on the free module by closure over words in the generators
        let n = group.order();
        let mut free_action: Vec<Option<Matrix>> = vec![None; n];
        free_action[group.identity()] = Some(Matrix::identity(rank));
        let mut frontier = vec![group.identity()];
        while let Some(x) = frontier.pop() {
            let ax = free_action[x].clone().expect("visited");
            for (g, a) in generators {
                let y = group.mul(*g, x);
                let ay = a.mul(&ax, &ring);
                match &free_action[y] {
                    None => {
                        free_action[y] = Some(ay);
                        frontier.push(y);
                    }
                    Some(prev) => {
                        if !congruent_mod_relations(prev, &ay, relations, &ring) {
                            return Err(Error::InvalidModule(format!(
                                "action is not compatible with the group law at {}",
                                group.label(y)
                            )));
                        }
                    }
                }
            }
        }
        let free_action: Vec<Matrix> = free_action
            .into_iter()
            .map(|a| a.ok_or_else(|| Error::InvalidModule("generators do not generate the group".into())))
            .collect::<Result<_>>()?;
        canonical_form(ring, rank, relations, &free_action)
    }

    /// A module given directly in canonical coordinates.
    pub fn from_canonical(
        group: &FiniteGroup,
        ring: Zpm,
        exps: Vec<u32>,
        action: Vec<Matrix>,
    ) -> Result<Self> {
        let r = exps.len();
        if action.len() != group.order() || action.iter().any(|a| a.rows() != r || a.cols() != r) {
            return Err(Error::InvalidModule("one r x r matrix per element expected".into()));
        }
        let m = Self {
            ring,
            exps,
            action,
            weight: None,
        };
        m.validate(group)?;
        Ok(m)
    }

    fn validate(&self, group: &FiniteGroup) -> Result<()> {
        let r = self.rank();
        let p = self.ring.p();
        for a in &self.action {
            for j in 0..r {
                for k in 0..r {
                    // Z/p^{e_k} → Z/p^{e_j} must be well defined
                    let v = self.ring.mul(a.get(j, k), self.ring.p_pow(self.exps[k]));
                    if v % p.pow(self.exps[j]) != 0 {
                        return Err(Error::InvalidModule("action does not respect orders".into()));
                    }
                }
            }
        }
        let basis: Vec<Vec<u64>> = (0..r)
            .map(|j| (0..r).map(|i| u64::from(i == j)).collect())
            .collect();
        for v in &basis {
            if &self.act(group.identity(), v) != v {
                return Err(Error::InvalidModule("identity acts nontrivially".into()));
            }
        }
        for a in 0..group.order() {
            for b in 0..group.order() {
                for v in &basis {
                    if self.act(group.mul(a, b), v) != self.act(a, &self.act(b, v)) {
                        return Err(Error::InvalidModule(format!(
                            "action is not a homomorphism at ({}, {})",
                            group.label(a),
                            group.label(b)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &Zpm {
        &self.ring
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn rank(&self) -> usize {
        self.exps.len()
    }

    pub fn weight(&self) -> Option<i64> {
        self.weight
    }

    /// `log_p |A|`.
    pub fn log_order(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn order(&self) -> u128 {
        (self.ring.p() as u128).pow(self.log_order())
    }

    /// Lifted action matrix of `g`.
    pub fn action(&self, g: usize) -> &Matrix {
        &self.action[g]
    }

    /// Reduces a lifted vector into canonical coordinates.
    pub fn normalize(&self, v: &[u64]) -> Vec<u64> {
        v.iter()
            .zip(&self.exps)
            .map(|(&x, &e)| x % self.ring.p().pow(e))
            .collect()
    }

    pub fn act(&self, g: usize, v: &[u64]) -> Vec<u64> {
        self.normalize(&self.action[g].mul_vec(v, &self.ring))
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.normalize(&a.iter().zip(b).map(|(&x, &y)| self.ring.add(x, y)).collect::<Vec<_>>())
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.normalize(&a.iter().zip(b).map(|(&x, &y)| self.ring.sub(x, y)).collect::<Vec<_>>())
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.rank()]
    }

    /// All elements, for enumeration on small modules.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for &e in &self.exps {
            let q = self.ring.p().pow(e);
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..q).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    /// `ι`: row scaling embedding coordinate `j` into `Z/p^m` by `p^{m - e_j}`.
    pub(crate) fn iota_scale(&self, j: usize) -> u64 {
        self.ring.p_pow(self.ring.m() - self.exps[j])
    }
}

fn congruent_mod_relations(a: &Matrix, b: &Matrix, relations: &Matrix, ring: &Zpm) -> bool {
    let rank = a.rows();
    let rel_log = linalg::span_log_order(relations, ring);
    (0..rank).all(|j| {
        let diff: Vec<u64> = (0..rank).map(|i| ring.sub(a.get(i, j), b.get(i, j))).collect();
        let with = relations.hcat(&Matrix::from_cols(&[diff], rank));
        linalg::span_log_order(&with, ring) == rel_log
    })
}

fn canonical_form(ring: Zpm, rank: usize, relations: &Matrix, free_action: &[Matrix]) -> Result<GModule> {
    let s = linalg::snf(relations, &ring);
    let u = s.u;
    let u_inv = invert(&u, &ring).expect("U is invertible");
    let mut keep = Vec::new();
    let mut exps = Vec::new();
    for t in 0..rank {
        let e = match s.pivots.get(t) {
            Some(&k) => k,
            None => ring.m(),
        };
        if e > 0 {
            keep.push(t);
            exps.push(e);
        }
    }
    let mut action = Vec::with_capacity(free_action.len());
    for a in free_action {
        let conj = u.mul(a, &ring).mul(&u_inv, &ring);
        // relations must be preserved: conj maps p^{e_t} e_t into the relation span
        for t in 0..rank {
            let et = s.pivots.get(t).copied().unwrap_or(ring.m());
            for j in 0..rank {
                let ej = s.pivots.get(j).copied().unwrap_or(ring.m());
                let v = ring.mul(conj.get(j, t), ring.p_pow(et));
                if v % ring.p().pow(ej) != 0 {
                    return Err(Error::InvalidModule("action does not preserve the relations".into()));
                }
            }
        }
        let mut m = Matrix::zeros(keep.len(), keep.len());
        for (a_new, &i) in keep.iter().enumerate() {
            for (b_new, &j) in keep.iter().enumerate() {
                m.set(a_new, b_new, conj.get(i, j));
            }
        }
        action.push(m);
    }
    Ok(GModule {
        ring,
        exps,
        action,
        weight: None,
    })
}

/// Inverse of a square matrix over `Z/p^m`, if it exists.
pub fn invert(a: &Matrix, ring: &Zpm) -> Option<Matrix> {
    let n = a.rows();
    let mut m = a.hcat(&Matrix::identity(n));
    let w = 2 * n;
    for c in 0..n {
        let piv = (c..n).find(|&i| ring.is_unit(m.get(i, c)))?;
        if piv != c {
            for j in 0..w {
                let (x, y) = (m.get(c, j), m.get(piv, j));
                m.set(c, j, y);
                m.set(piv, j, x);
            }
        }
        let inv = ring.inv(m.get(c, c))?;
        for j in 0..w {
            m.set(c, j, ring.mul(m.get(c, j), inv));
        }
        for i in 0..n {
            if i == c {
                continue;
            }
            let f = m.get(i, c);
            if f == 0 {
                continue;
            }
            for j in 0..w {
                let v = ring.sub(m.get(i, j), ring.mul(f, m.get(c, j)));
                m.set(i, j, v);
            }
        }
    }
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, m.get(i, n + j));
        }
    }
    Some(out)
}
