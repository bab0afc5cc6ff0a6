//! Cohomology of a cyclic group from the periodic complex
//! `A --(σ-1)--> A --N--> A --(σ-1)--> …`.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

use super::group::FiniteGroup;
use super::module::GModule;
use super::{subquotient, ModuleStructure};

/// `H^degree(G, A)` for cyclic `G` generated by `generator` (the group's
/// designated generator when `None`).
pub fn cyclic_cohomology(
    group: &FiniteGroup,
    module: &GModule,
    generator: Option<usize>,
    degree: usize,
) -> Result<ModuleStructure> {
    let sigma = match generator {
        Some(s) => s,
        None => group.default_generator()?,
    };
    if sigma >= group.order() || !group.is_generator(sigma) {
        return Err(Error::NotCyclic);
    }
    let ring = module.ring();
    let r = module.rank();
    if r == 0 {
        return Ok(ModuleStructure::zero(ring.p()));
    }
    let mut s = module.action(sigma).clone();
    for j in 0..r {
        s.set(j, j, ring.sub(s.get(j, j), 1));
    }
    let mut norm = Matrix::zeros(r, r);
    for g in 0..group.order() {
        let a = module.action(g);
        for i in 0..r {
            for j in 0..r {
                norm.set(i, j, ring.add(norm.get(i, j), a.get(i, j)));
            }
        }
    }
    let (map, prev) = match degree {
        0 => (&s, None),
        d if d % 2 == 1 => (&norm, Some(s.clone())),
        _ => (&s, Some(norm.clone())),
    };
    let mut iota_map = map.clone();
    for i in 0..r {
        let c = module.iota_scale(i);
        for j in 0..r {
            iota_map.set(i, j, ring.mul(iota_map.get(i, j), c));
        }
    }
    let k = linalg::kernel(&iota_map, ring);
    Ok(subquotient(ring, k, prev, module.exps()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Zpm;

    #[test]
    fn c2_trivial_on_z3() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let m = GModule::trivial(&g, Zpm::new(3, 1).unwrap(), vec![1]).unwrap();
        let h: Vec<Vec<u64>> = (0..3)
            .map(|i| cyclic_cohomology(&g, &m, None, i).unwrap().invariants)
            .collect();
        assert_eq!(h, vec![vec![3], vec![], vec![]]);
    }

    #[test]
    fn units_mod_5_on_twist_two() {
        let g = FiniteGroup::units_mod(5, 1, 1).unwrap();
        let m = GModule::twist(&g, Zpm::new(5, 1).unwrap(), 2).unwrap();
        for i in 0..3 {
            assert!(cyclic_cohomology(&g, &m, None, i).unwrap().is_zero());
        }
    }

    #[test]
    fn one_plus_five_in_units_mod_25() {
        let g = FiniteGroup::one_plus_p(5, 2, 2).unwrap();
        let m = GModule::twist(&g, Zpm::new(5, 2).unwrap(), 2).unwrap();
        assert_eq!(cyclic_cohomology(&g, &m, None, 0).unwrap().order(), 5);
    }

    #[test]
    fn rejects_non_generator() {
        let g = FiniteGroup::cyclic(4).unwrap();
        let m = GModule::trivial(&g, Zpm::new(3, 1).unwrap(), vec![1]).unwrap();
        assert!(matches!(
            cyclic_cohomology(&g, &m, Some(2), 1),
            Err(Error::NotCyclic)
        ));
    }
}
