//! The Heisenberg group `Z/p^m(1)² ⋉ Z/p^m(2)`, the set-theoretic section
//! `Σ`, and lifting pairs of Kummer-type 1-cocycles to Heisenberg-valued
//! cocycles.
//!
//! Group law: `(x, y, z)(x', y', z') = (x + x', y + y', z + z' + x y')`.
//! With it, the defect of `Σ(κ_x, κ_y)` is exactly `κ_x ∪ κ_y`, and if
//! `dα = κ_x ∪ κ_y` then `σ ↦ (0, 0, α(σ)) · Σ(κ_x, κ_y)(σ)` is a cocycle.

use std::fmt;

use serde::Serialize;

use crate::cohomology::{
    coboundary, cup_11, solve_coboundary_eq, Cochain, CosetInfo, FiniteGroup, GModule, Obstruction, SolveOutcome,
};
use crate::error::{Error, Result};
use crate::linalg::Zpm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct HeisenbergElt {
    pub x: u64,
    pub y: u64,
    pub z: u64,
}

impl HeisenbergElt {
    pub const IDENTITY: Self = Self { x: 0, y: 0, z: 0 };

    pub fn new(x: u64, y: u64, z: u64, ring: &Zpm) -> Self {
        let q = ring.modulus();
        Self {
            x: x % q,
            y: y % q,
            z: z % q,
        }
    }

    pub fn central(z: u64, ring: &Zpm) -> Self {
        Self::new(0, 0, z, ring)
    }

    pub fn is_central(&self) -> bool {
        self.x == 0 && self.y == 0
    }
}

impl fmt::Display for HeisenbergElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

pub fn heis_mul(g: &HeisenbergElt, h: &HeisenbergElt, ring: &Zpm) -> HeisenbergElt {
    HeisenbergElt {
        x: ring.add(g.x, h.x),
        y: ring.add(g.y, h.y),
        z: ring.add(ring.add(g.z, h.z), ring.mul(g.x, h.y)),
    }
}

pub fn heis_inv(g: &HeisenbergElt, ring: &Zpm) -> HeisenbergElt {
    HeisenbergElt {
        x: ring.neg(g.x),
        y: ring.neg(g.y),
        z: ring.add(ring.neg(g.z), ring.mul(g.x, g.y)),
    }
}

/// `(x, y, z) ↦ (χx, χy, χ²z)`.
pub fn heis_act(chi: u64, g: &HeisenbergElt, ring: &Zpm) -> Result<HeisenbergElt> {
    if !ring.is_unit(chi) {
        return Err(Error::InvalidParams(format!("{chi} is not a unit mod {}", ring.modulus())));
    }
    Ok(act_unchecked(chi, g, ring))
}

fn act_unchecked(chi: u64, g: &HeisenbergElt, ring: &Zpm) -> HeisenbergElt {
    let chi = chi % ring.modulus();
    HeisenbergElt {
        x: ring.mul(chi, g.x),
        y: ring.mul(chi, g.y),
        z: ring.mul(ring.mul(chi, chi), g.z),
    }
}

/// A function `G → H`, indexed by group element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeisCochain {
    ring: Zpm,
    values: Vec<HeisenbergElt>,
}

impl HeisCochain {
    pub fn values(&self) -> &[HeisenbergElt] {
        &self.values
    }

    pub fn ring(&self) -> &Zpm {
        &self.ring
    }

    /// The pair `(x, y)` of abelianized components.
    pub fn abelianize(&self, group: &FiniteGroup, module: &GModule) -> (Cochain, Cochain) {
        let x = Cochain::from_fn(group, module, 1, |g| vec![self.values[g[0]].x]);
        let y = Cochain::from_fn(group, module, 1, |g| vec![self.values[g[0]].y]);
        (x, y)
    }

    /// Pairs of (element label, triple).
    pub fn labeled(&self, group: &FiniteGroup) -> Vec<(String, [u64; 3])> {
        self.values
            .iter()
            .enumerate()
            .map(|(g, h)| (group.label(g).to_string(), [h.x, h.y, h.z]))
            .collect()
    }
}

fn chi(group: &FiniteGroup, g: usize) -> Result<u64> {
    group
        .chi(g)
        .ok_or_else(|| Error::InvalidModule(format!("{} carries no character", group.name())))
}

fn check_weight_one(group: &FiniteGroup, module: &GModule, cs: &[&Cochain]) -> Result<()> {
    if module.weight() != Some(1) {
        return Err(Error::ModuleMismatch("Kummer cochains take values in Z/p^m(1)".into()));
    }
    for c in cs {
        if c.degree() != 1 || c.values().len() != group.order() {
            return Err(Error::ModuleMismatch("expected 1-cochains on the group".into()));
        }
    }
    Ok(())
}

/// `σ ↦ (κ_x(σ), κ_y(σ), 0)`.
pub fn sigma_lift(group: &FiniteGroup, module: &GModule, kx: &Cochain, ky: &Cochain) -> Result<HeisCochain> {
    check_weight_one(group, module, &[kx, ky])?;
    let ring = *module.ring();
    let n = group.order();
    Ok(HeisCochain {
        ring,
        values: (0..n)
            .map(|g| HeisenbergElt::new(kx.at(n, &[g])[0], ky.at(n, &[g])[0], 0, &ring))
            .collect(),
    })
}

/// `c(σ, τ)` with `κ(σ) · σκ(τ) = c(σ, τ) · κ(στ)`, valued in `Z/p^m(2)`.
pub fn defect(group: &FiniteGroup, kappa: &HeisCochain) -> Result<(GModule, Cochain)> {
    let ring = kappa.ring;
    let target = GModule::twist(group, ring, 2)?;
    let n = group.order();
    let mut values = Vec::with_capacity(n * n);
    for s in 0..n {
        let c = chi(group, s)?;
        for t in 0..n {
            let lhs = heis_mul(&kappa.values[s], &act_unchecked(c, &kappa.values[t], &ring), &ring);
            let q = heis_mul(&heis_inv(&kappa.values[group.mul(s, t)], &ring), &lhs, &ring);
            if !q.is_central() {
                return Err(Error::DefectNotCentral);
            }
            values.push(vec![q.z]);
        }
    }
    let c = Cochain::from_values(group, &target, 2, values)?;
    Ok((target, c))
}

/// Whether `κ(στ) = κ(σ) · σκ(τ)` for all `σ, τ`.
pub fn is_cocycle_nonab(group: &FiniteGroup, kappa: &HeisCochain) -> Result<bool> {
    let ring = kappa.ring;
    let n = group.order();
    for s in 0..n {
        let c = chi(group, s)?;
        for t in 0..n {
            let rhs = heis_mul(&kappa.values[s], &act_unchecked(c, &kappa.values[t], &ring), &ring);
            if kappa.values[group.mul(s, t)] != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `σ ↦ (0, 0, a(σ)) · κ(σ)`.
pub fn central_twist(kappa: &HeisCochain, a: &Cochain) -> HeisCochain {
    let ring = kappa.ring;
    HeisCochain {
        ring,
        values: kappa
            .values
            .iter()
            .zip(a.values())
            .map(|(k, v)| heis_mul(&HeisenbergElt::central(v[0], &ring), k, &ring))
            .collect(),
    }
}

/// If `λ₂(σ) = h⁻¹ λ₁(σ) σ(h)` for a central `h = (0, 0, b)`, returns `b`.
pub fn central_conjugator(group: &FiniteGroup, l1: &HeisCochain, l2: &HeisCochain) -> Result<Option<u64>> {
    let ring = l1.ring;
    'b: for b in 0..ring.modulus() {
        let h = HeisenbergElt::central(b, &ring);
        let h_inv = heis_inv(&h, &ring);
        for s in 0..group.order() {
            let moved = act_unchecked(chi(group, s)?, &h, &ring);
            let conj = heis_mul(&heis_mul(&h_inv, &l1.values[s], &ring), &moved, &ring);
            if conj != l2.values[s] {
                continue 'b;
            }
        }
        return Ok(Some(b));
    }
    Ok(None)
}

#[derive(Debug, Clone)]
pub enum LiftOutcome {
    Lifted {
        cocycle: HeisCochain,
        /// The solution of `dα = κ_x ∪ κ_y` used for the lift.
        alpha: Cochain,
        coset: CosetInfo,
    },
    Obstructed(Obstruction),
}

/// Lifts a pair of 1-cocycles to a Heisenberg-valued cocycle, or reports
/// the obstruction class of `κ_x ∪ κ_y`.
pub fn lift_pair(group: &FiniteGroup, module: &GModule, kx: &Cochain, ky: &Cochain) -> Result<LiftOutcome> {
    check_weight_one(group, module, &[kx, ky])?;
    for k in [kx, ky] {
        if !coboundary(group, module, k)?.is_zero() {
            return Err(Error::NotCocycle { degree: 1 });
        }
    }
    let (target, cup) = cup_11(group, module, kx, module, ky)?;
    match solve_coboundary_eq(group, &target, &cup)? {
        SolveOutcome::Obstructed(o) => Ok(LiftOutcome::Obstructed(o)),
        SolveOutcome::Solved { alpha, coset } => {
            let lift = central_twist(&sigma_lift(group, module, kx, ky)?, &alpha);
            if !is_cocycle_nonab(group, &lift)? {
                unreachable!("lift of a solved pair is not a cocycle");
            }
            Ok(LiftOutcome::Lifted {
                cocycle: lift,
                alpha,
                coset,
            })
        }
    }
}

/// The two translation coordinates `κ_x(b, a) = b₁`, `κ_y(b, a) = b₂` on a
/// Kummer model `(Z/p^m)² ⋊ (Z/p^m)^*`.
pub fn kummer_pair(group: &FiniteGroup, module: &GModule) -> Result<(Cochain, Cochain)> {
    if (0..group.order()).any(|g| group.translation(g).map_or(true, |b| b.len() != 2)) {
        return Err(Error::InvalidGroup("expected a Kummer model with two translation coordinates".into()));
    }
    let coord = |i: usize| {
        move |g: &[usize]| vec![group.translation(g[0]).expect("checked")[i]]
    };
    Ok((
        Cochain::from_fn(group, module, 1, coord(0)),
        Cochain::from_fn(group, module, 1, coord(1)),
    ))
}
