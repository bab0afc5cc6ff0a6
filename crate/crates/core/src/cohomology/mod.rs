//! Cohomology of finite groups with coefficients in finite `Z/p^m`-modules.

pub mod bar;
pub mod cochain;
pub mod cyclic;
pub mod group;
pub mod module;
pub mod schema;
pub mod solve;

use std::fmt;

use serde::Serialize;

use crate::linalg::{self, Matrix, Zpm};

pub use bar::{brute_cohomology, DEFAULT_BRUTE_CEILING};
pub use cochain::{coboundary, cup_11, is_cocycle, Cochain};
pub use cyclic::cyclic_cohomology;
pub use group::{Character, FiniteGroup};
pub use module::GModule;
pub use solve::{solve_coboundary_eq, CosetInfo, Obstruction, SolveOutcome};

/// A finite abelian `p`-group `⊕ Z/p^{e_i}`, listed by ascending invariant factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuleStructure {
    pub p: u64,
    pub invariants: Vec<u64>,
}

impl ModuleStructure {
    pub fn zero(p: u64) -> Self {
        Self {
            p,
            invariants: Vec::new(),
        }
    }

    pub fn order(&self) -> u128 {
        self.invariants.iter().map(|&d| d as u128).product()
    }

    pub fn log_order(&self) -> u32 {
        self.invariants
            .iter()
            .map(|&d| crate::arith::val_u64(d, self.p))
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.invariants.is_empty()
    }
}

impl fmt::Display for ModuleStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariants.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.invariants.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `H = K / I` where `K = ker(ι∘F)` on a source space with exponents
/// `src_exps` and target exponents `dst_exps`, and `I` is spanned by
/// `prev` plus `ker π` on the source.
pub(crate) fn subquotient(
    ring: &Zpm,
    k_gens: Matrix,
    prev: Option<Matrix>,
    src_exps: &[u32],
) -> ModuleStructure {
    let dim = k_gens.rows();
    let mut i_cols: Vec<Vec<u64>> = Vec::new();
    if let Some(prev) = prev {
        i_cols.extend((0..prev.cols()).map(|j| prev.col(j)));
    }
    for (j, &e) in src_exps.iter().enumerate() {
        if e < ring.m() {
            let mut v = vec![0; dim];
            v[j] = ring.p_pow(e);
            i_cols.push(v);
        }
    }
    let i_gens = Matrix::from_cols(&i_cols, dim);
    ModuleStructure {
        p: ring.p(),
        invariants: linalg::quotient_invariants(&k_gens, &i_gens, ring),
    }
}
