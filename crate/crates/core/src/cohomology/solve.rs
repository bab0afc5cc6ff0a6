//! Solving `dα = c` for a 2-cocycle `c`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::sparse::SparseKernel;
use crate::linalg::{self, CokernelCoord, Matrix, Solution};

use super::bar::BarComplex;
use super::cochain::{coboundary, Cochain};
use super::group::FiniteGroup;
use super::module::GModule;

/// Default bound on the size of the dense system used to extract
/// obstruction coordinates.
pub const DEFAULT_DENSE_CEILING: usize = 1 << 24;

/// The class of a 2-cocycle that is not a coboundary.
#[derive(Debug, Clone, Serialize)]
pub struct Obstruction {
    pub cocycle: Cochain,
    /// Nonzero coordinates of the cocycle in the cokernel of `d` on
    /// normalized cochains.
    pub coords: Vec<CokernelCoord>,
}

/// Describes the full solution set `α + Z¹`, where `Z¹ ⊇ B¹ = {dβ}`.
#[derive(Debug, Clone, Serialize)]
pub struct CosetInfo {
    /// `log_p |B¹|`; `|B¹| = |A| / |H⁰|`.
    pub log_coboundaries: u32,
    /// `log_p |Z¹|`, the log-size of the full solution set.
    pub log_cocycles: u32,
    /// `log_p |H¹|`. The solutions form a single `B¹`-coset iff this is 0.
    pub log_h1: u32,
    /// `dβ` for the standard generators `β` of `A`.
    pub coboundary_generators: Vec<Cochain>,
    /// Generators of `Z¹` (1-cocycles).
    pub cocycle_generators: Vec<Cochain>,
}

#[derive(Debug, Clone, Serialize)]
pub enum SolveOutcome {
    Solved { alpha: Cochain, coset: CosetInfo },
    Obstructed(Obstruction),
}

/// Finds a normalized `α` with `dα = c`, or the obstruction class of `c`.
pub fn solve_coboundary_eq(group: &FiniteGroup, module: &GModule, c: &Cochain) -> Result<SolveOutcome> {
    if c.degree() != 2 {
        return Err(Error::NotCocycle { degree: 2 });
    }
    if !coboundary(group, module, c)?.is_zero() {
        return Err(Error::NotCocycle { degree: 2 });
    }
    if !c.is_normalized(group) {
        // a 2-cocycle is cohomologous to a normalized one; we only treat the
        // normalized case so that α can be taken normalized
        return Err(Error::Unsupported("non-normalized 2-cocycles".into()));
    }
    let ring = *module.ring();
    let bar = BarComplex::new(group, module);
    let n1 = bar.dim(1);
    let rhs: Vec<u64> = {
        let flat = bar.flatten(c);
        let r = module.rank();
        flat.iter()
            .enumerate()
            .map(|(i, &v)| ring.mul(v, module.iota_scale(i % r)))
            .collect()
    };
    // kernel of [ι d | ι c]; a generator with unit last entry gives a solution
    let mut sk = SparseKernel::new(n1 + 1, ring);
    let mut buf = Vec::new();
    bar.for_each_iota_row(1, |i, row| {
        buf.clear();
        buf.extend_from_slice(row);
        if rhs[i] != 0 {
            buf.push((n1, rhs[i]));
        }
        sk.add_row(&buf);
    });
    let gens = sk.finish();
    let found = gens.iter().find(|g| ring.is_unit(g[n1]));
    let Some(g) = found else {
        return obstruction(&bar, c, &rhs).map(SolveOutcome::Obstructed);
    };
    let scale = ring.neg(ring.inv(g[n1]).expect("unit"));
    let x: Vec<u64> = g[..n1].iter().map(|&v| ring.mul(v, scale)).collect();
    let alpha = bar.unflatten(1, &x);
    if coboundary(group, module, &alpha)? != *c {
        unreachable!("solver produced a non-solution");
    }
    Ok(SolveOutcome::Solved {
        alpha,
        coset: coset_info(&bar)?,
    })
}

fn obstruction(bar: &BarComplex, c: &Cochain, rhs: &[u64]) -> Result<Obstruction> {
    let ring = bar.ring();
    let rows = bar.dim(2);
    let size = rows as u128 * bar.dim(1) as u128;
    if size > DEFAULT_DENSE_CEILING as u128 {
        return Err(Error::SizeCeiling {
            size,
            ceiling: DEFAULT_DENSE_CEILING as u128,
        });
    }
    let mut m = Matrix::zeros(rows, bar.dim(1));
    bar.for_each_iota_row(1, |i, row| {
        for &(col, v) in row {
            m.set(i, col, ring.add(m.get(i, col), v));
        }
    });
    match linalg::solve(&m, rhs, ring) {
        Solution::Obstructed(coords) => Ok(Obstruction {
            cocycle: c.clone(),
            coords,
        }),
        Solution::Solved(_) => unreachable!("sparse and dense solvers disagree"),
    }
}

fn coset_info(bar: &BarComplex) -> Result<CosetInfo> {
    let ring = bar.ring();
    let n1 = bar.dim(1);
    let exps1 = bar.exps(1);
    let kernel_pi_cols = |dim: usize, exps: &[u32]| -> Vec<Vec<u64>> {
        exps.iter()
            .enumerate()
            .filter(|(_, &e)| e < ring.m())
            .map(|(j, &e)| {
                let mut v = vec![0; dim];
                v[j] = ring.p_pow(e);
                v
            })
            .collect()
    };
    let log_ker_pi: u32 = exps1.iter().map(|&e| ring.m() - e).sum();
    let ker_pi = kernel_pi_cols(n1, &exps1);

    let z_lift = bar.cocycle_lift_gens(1);
    let log_cocycles = linalg::span_log_order(&z_lift, ring) - log_ker_pi;

    let d0 = bar.d_dense(0);
    let mut b_cols: Vec<Vec<u64>> = (0..d0.cols()).map(|j| d0.col(j)).collect();
    b_cols.extend(ker_pi.iter().cloned());
    let log_coboundaries = linalg::span_log_order(&Matrix::from_cols(&b_cols, n1), ring) - log_ker_pi;

    let coboundary_generators = (0..d0.cols())
        .map(|j| bar.unflatten(1, &d0.col(j)))
        .collect();
    let cocycle_generators = (0..z_lift.cols())
        .map(|j| bar.unflatten(1, &z_lift.col(j)))
        .filter(|c| !c.is_zero())
        .collect();
    Ok(CosetInfo {
        log_coboundaries,
        log_cocycles,
        log_h1: log_cocycles - log_coboundaries,
        coboundary_generators,
        cocycle_generators,
    })
}
