//! Inhomogeneous cochains `G^k → A`, their coboundaries, and the cup product
//! of two 1-cochains.
//!
//! Coboundaries follow the sign convention
//! `(dβ)(σ) = β - σβ` and `(dα)(σ, τ) = α(στ) - σα(τ) - α(σ)`, i.e. the
//! negative of the usual textbook differential in every degree.

use serde::Serialize;

use crate::error::{Error, Result};

use super::group::FiniteGroup;
use super::module::GModule;

/// A function `G^k → A`, stored as a full table. The tuple `(g_1, …, g_k)`
/// sits at index `Σ g_i |G|^{k-i}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cochain {
    degree: usize,
    values: Vec<Vec<u64>>,
}

impl Cochain {
    pub fn zero(group: &FiniteGroup, module: &GModule, degree: usize) -> Self {
        Self {
            degree,
            values: vec![module.zero(); group.order().pow(degree as u32)],
        }
    }

    pub fn from_fn(
        group: &FiniteGroup,
        module: &GModule,
        degree: usize,
        mut f: impl FnMut(&[usize]) -> Vec<u64>,
    ) -> Self {
        let n = group.order();
        let len = n.pow(degree as u32);
        let mut tuple = vec![0usize; degree];
        let values = (0..len)
            .map(|idx| {
                let mut x = idx;
                for slot in tuple.iter_mut().rev() {
                    *slot = x % n;
                    x /= n;
                }
                module.normalize(&f(&tuple))
            })
            .collect();
        Self { degree, values }
    }

    /// Builds a cochain from raw table values, checking shape.
    pub fn from_values(
        group: &FiniteGroup,
        module: &GModule,
        degree: usize,
        values: Vec<Vec<u64>>,
    ) -> Result<Self> {
        if values.len() != group.order().pow(degree as u32)
            || values.iter().any(|v| v.len() != module.rank())
        {
            return Err(Error::ModuleMismatch(format!(
                "a degree-{degree} cochain needs {} values of rank {}",
                group.order().pow(degree as u32),
                module.rank()
            )));
        }
        Ok(Self {
            degree,
            values: values.iter().map(|v| module.normalize(v)).collect(),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[Vec<u64>] {
        &self.values
    }

    pub fn index(n: usize, args: &[usize]) -> usize {
        args.iter().fold(0, |acc, &g| acc * n + g)
    }

    pub fn at(&self, n: usize, args: &[usize]) -> &[u64] {
        debug_assert_eq!(args.len(), self.degree);
        &self.values[Self::index(n, args)]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.iter().all(|&x| x == 0))
    }

    /// Zero whenever some argument is the identity.
    pub fn is_normalized(&self, group: &FiniteGroup) -> bool {
        let n = group.order();
        let e = group.identity();
        self.values.iter().enumerate().all(|(idx, v)| {
            let mut x = idx;
            let mut has_e = false;
            for _ in 0..self.degree {
                has_e |= x % n == e;
                x /= n;
            }
            !has_e || v.iter().all(|&c| c == 0)
        })
    }

    fn check(&self, group: &FiniteGroup, module: &GModule) -> Result<()> {
        if self.values.len() != group.order().pow(self.degree as u32)
            || self.values.iter().any(|v| v.len() != module.rank())
        {
            return Err(Error::ModuleMismatch("cochain does not match group and module".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Cochain, module: &GModule) -> Cochain {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        Cochain {
            degree: self.degree,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| module.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Cochain, module: &GModule) -> Cochain {
        assert_eq!(self.degree, other.degree, "degree mismatch");
        Cochain {
            degree: self.degree,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| module.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: u64, module: &GModule) -> Cochain {
        let r = module.ring();
        Cochain {
            degree: self.degree,
            values: self
                .values
                .iter()
                .map(|v| module.normalize(&v.iter().map(|&x| r.mul(x, c)).collect::<Vec<_>>()))
                .collect(),
        }
    }
}

/// The coboundary `d f`, for `deg f ≤ 2`.
pub fn coboundary(group: &FiniteGroup, module: &GModule, f: &Cochain) -> Result<Cochain> {
    f.check(group, module)?;
    let k = f.degree;
    if k > 2 {
        return Err(Error::Unsupported(format!("coboundary in degree {k}")));
    }
    let n = group.order();
    Ok(Cochain::from_fn(group, module, k + 1, |g| {
        // textbook differential, negated at the end
        let mut acc = module.act(g[0], f.at(n, &g[1..]));
        let mut merged = Vec::with_capacity(k);
        for i in 0..k {
            merged.clear();
            merged.extend_from_slice(&g[..i]);
            merged.push(group.mul(g[i], g[i + 1]));
            merged.extend_from_slice(&g[i + 2..]);
            let term = f.at(n, &merged);
            acc = if i % 2 == 0 {
                module.sub(&acc, term)
            } else {
                module.add(&acc, term)
            };
        }
        let last = f.at(n, &g[..k]);
        acc = if k % 2 == 0 {
            module.sub(&acc, last)
        } else {
            module.add(&acc, last)
        };
        module.sub(&module.zero(), &acc)
    }))
}

pub fn is_cocycle(group: &FiniteGroup, module: &GModule, f: &Cochain) -> Result<bool> {
    Ok(coboundary(group, module, f)?.is_zero())
}

/// `(φ ∪ ψ)(σ, τ) = φ(σ) · σψ(τ)` for `Z/p^m(1)`-valued 1-cochains, valued
/// in `Z/p^m(2)`. Returns the target module with the product.
pub fn cup_11(
    group: &FiniteGroup,
    module_phi: &GModule,
    phi: &Cochain,
    module_psi: &GModule,
    psi: &Cochain,
) -> Result<(GModule, Cochain)> {
    for (m, c) in [(module_phi, phi), (module_psi, psi)] {
        if m.weight() != Some(1) || c.degree != 1 {
            return Err(Error::ModuleMismatch(
                "cup product needs 1-cochains with Z/p^m(1) coefficients".into(),
            ));
        }
        c.check(group, m)?;
    }
    if module_phi.ring() != module_psi.ring() {
        return Err(Error::ModuleMismatch("coefficient rings differ".into()));
    }
    let ring = *module_phi.ring();
    let target = GModule::twist(group, ring, 2)?;
    let n = group.order();
    let cup = Cochain::from_fn(group, &target, 2, |g| {
        let moved = module_psi.act(g[0], psi.at(n, &[g[1]]));
        vec![ring.mul(phi.at(n, &[g[0]])[0], moved[0])]
    });
    Ok((target, cup))
}
