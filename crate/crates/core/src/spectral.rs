//! `E₂`-terms `H^i((Z/p^n)^*, H^j(G_{T,n}, Z/p^m(2)))` at finite level.
//!
//! Row `j = 0` uses the trivial action of `G_{T,n}` on `Z/p^m(2)`. For
//! `j = 1` the coefficient module is modeled on the unit side as
//! `E / Q(ζ)^{*p^n}` with `α` acting by `a ↦ α^{-1}(a)^{α^{-1}}`; it is
//! presented by generators `ζ`, `ξ_a`, and one generator per prime above `T`.

use serde::Serialize;

use crate::arith::exp_p_mod;
use crate::cohomology::{cyclic_cohomology, FiniteGroup, GModule, ModuleStructure};
use crate::cyclotomic::{CycElt, CycParams};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Zpm};
use crate::regular::require_regular;
use crate::units::{express_in_generators, twisted_act, unit_rank_mod_p, xi_class, AuxPrimeCtx, Convention, CycClass};
use crate::valuation::{
    primes_above_set, prime_generator_search, val_vector_class, GeneratorSearch, PrimeAbove, ValuationVector,
};

/// `H^deg((Z/p^n)^*, Z/p^m(2))`.
pub fn e2_row0(p: u64, n: u32, m: u32, deg: usize) -> Result<ModuleStructure> {
    if deg > 3 {
        return Err(Error::Unsupported(format!("row-0 term in degree {deg}")));
    }
    let g = FiniteGroup::units_mod(p, n, m)?;
    let module = GModule::twist(&g, Zpm::new(p, m)?, 2)?;
    cyclic_cohomology(&g, &module, None, deg)
}

#[derive(Debug, Clone, Serialize)]
pub struct OnePlusPReport {
    pub structure: ModuleStructure,
    /// Every generator tried, with its answer.
    pub by_generator: Vec<(u64, ModuleStructure)>,
    pub generator_independent: bool,
    pub bounded_by_p: bool,
}

/// `H^deg(1 + (p), Z/p^n(2))`, computed with the generators `1 + p` and
/// `e^p mod p^n`.
pub fn one_plus_p_cohomology(p: u64, n: u32, deg: usize) -> Result<OnePlusPReport> {
    if deg > 2 {
        return Err(Error::Unsupported(format!("1+(p) cohomology in degree {deg}")));
    }
    if n < 2 {
        return Err(Error::InvalidParams("1+(p) is trivial for n = 1".into()));
    }
    let g = FiniteGroup::one_plus_p(p, n, n)?;
    let module = GModule::twist(&g, Zpm::new(p, n)?, 2)?;
    let mut by_generator = Vec::new();
    for gen in [1 + p, exp_p_mod(p, n)] {
        let idx = g
            .index_of(&gen.to_string())
            .ok_or_else(|| Error::InvalidGroup(format!("{gen} is not in 1+(p)")))?;
        by_generator.push((gen, cyclic_cohomology(&g, &module, Some(idx), deg)?));
    }
    let structure = by_generator[0].1.clone();
    Ok(OnePlusPReport {
        generator_independent: by_generator.iter().all(|(_, s)| *s == structure),
        bounded_by_p: structure.order() <= p as u128,
        structure,
        by_generator,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Layer {
    RootOfUnity,
    Unit,
    Prime,
}

#[derive(Debug, Clone, Serialize)]
pub struct PresentationGenerator {
    pub label: String,
    pub layer: Layer,
    pub class: CycClass,
    /// For prime-layer generators: the prime and the power `h` it generates.
    pub prime: Option<(PrimeAbove, u32)>,
    pub valuations: ValuationVector,
}

#[derive(Debug, Clone, Serialize)]
pub struct PresentationChecks {
    /// The `ζ`, `ξ_a` have zero valuation vector.
    pub units_map_to_zero: bool,
    /// The prime-layer valuation vectors span `(Z/p^n)^{T̃}`.
    pub primes_surject: bool,
    /// The generators are independent modulo `p`-th powers.
    pub independent: bool,
    /// On valuation vectors the action is the `⋆`-action.
    pub star_equivariant: bool,
}

impl PresentationChecks {
    pub fn all(&self) -> bool {
        self.units_map_to_zero && self.primes_surject && self.independent && self.star_equivariant
    }
}

/// `E / Q(ζ)^{*p^n}` as a module over `Z/p^n` with the action of a
/// generator `g` of `(Z/p^n)^*`.
#[derive(Debug, Clone, Serialize)]
pub struct UnitModulePresentation {
    pub p: u64,
    pub n: u32,
    pub t: Vec<u64>,
    pub generators: Vec<PresentationGenerator>,
    /// Relation vectors (columns); the generators are free over `Z/p^n`.
    pub relations: Vec<Vec<u64>>,
    pub group_generator: u64,
    /// Column `j` expresses `g ∘ (generator j)` in the generators.
    pub action: Vec<Vec<u64>>,
    pub checks: PresentationChecks,
}

#[derive(Debug, Clone, Copy)]
pub struct E11Options {
    pub seed: u64,
    pub confidence: usize,
    pub aux_primes: usize,
    pub search_bound: i64,
    pub precision_ceiling: u32,
}

impl Default for E11Options {
    fn default() -> Self {
        Self {
            seed: 0,
            confidence: crate::units::DEFAULT_CONFIDENCE,
            aux_primes: crate::units::DEFAULT_AUX_PRIMES,
            search_bound: 3,
            precision_ceiling: crate::valuation::DEFAULT_PRECISION_CEILING,
        }
    }
}

/// Builds the presentation. `prime_gens`, if given, supplies one element per
/// prime above `T` (in the order of [`primes_above_set`]); otherwise each is
/// found by [`prime_generator_search`].
pub fn e11_assemble(
    p: u64,
    n: u32,
    t: &[u64],
    prime_gens: Option<&[CycElt]>,
    opts: &E11Options,
) -> Result<UnitModulePresentation> {
    require_regular(p)?;
    if !t.contains(&p) {
        return Err(Error::InvalidParams(format!("T must contain p = {p}")));
    }
    let params = CycParams::new(p, n)?;
    let mut t_sorted = t.to_vec();
    t_sorted.sort_unstable();
    t_sorted.dedup();
    let primes = primes_above_set(&params, &t_sorted)?;
    let ceiling = opts.precision_ceiling;
    let mut generators = Vec::new();
    let mut push = |label: String, layer, class: CycClass, prime| -> Result<()> {
        let valuations = val_vector_class(&class, &t_sorted, ceiling)?;
        generators.push(PresentationGenerator {
            label,
            layer,
            class,
            prime,
            valuations,
        });
        Ok(())
    };
    push("zeta".into(), Layer::RootOfUnity, CycClass::from_elt(CycElt::zeta(params))?, None)?;
    for a in params.units_mod_sign() {
        if a.is_identity() {
            continue;
        }
        push(format!("xi_{}", a.value()), Layer::Unit, xi_class(&params, &a), None)?;
    }
    if let Some(given) = prime_gens {
        if given.len() != primes.len() {
            return Err(Error::InvalidParams(format!(
                "{} prime generators supplied for {} primes",
                given.len(),
                primes.len()
            )));
        }
    }
    for (i, prime) in primes.iter().enumerate() {
        let (u, h) = match prime_gens {
            Some(given) => {
                let u = given[i].clone();
                let h = crate::valuation::val_at(&u, prime, ceiling)?;
                (u, h)
            }
            None => match prime_generator_search(prime, opts.search_bound, ceiling)? {
                GeneratorSearch::Found { u, h } => (u, h),
                GeneratorSearch::NotFound => {
                    return Err(Error::GeneratorNotFound {
                        prime: prime.to_string(),
                        bound: opts.search_bound,
                    })
                }
            },
        };
        push(format!("u[{prime}]"), Layer::Prime, CycClass::from_elt(u)?, Some((prime.clone(), h)))?;
    }
    let ring = Zpm::new(p, n)?;
    let k = generators.len();
    let classes: Vec<CycClass> = generators.iter().map(|g| g.class.clone()).collect();
    let ctx = AuxPrimeCtx::new(&params, opts.aux_primes, opts.seed);

    let rank = unit_rank_mod_p(&classes, &ctx, 2 * opts.confidence)?;
    let independent = rank.rank == k;

    let gen_value = crate::arith::smallest_primitive_root(params.pn())
        .ok_or_else(|| Error::InvalidParams("(Z/p^n)^* is not cyclic".into()))?;
    let g = params.galois(gen_value as i64)?;
    let mut action = Vec::with_capacity(k);
    for c in &classes {
        let moved = twisted_act(&g, c, Convention::Inverse);
        action.push(express_in_generators(&moved, &classes, &ctx, opts.confidence)?);
    }

    let units_map_to_zero = generators
        .iter()
        .filter(|g| g.layer != Layer::Prime)
        .all(|g| g.valuations.is_zero());
    let prime_vals: Vec<Vec<u64>> = generators
        .iter()
        .filter(|g| g.layer == Layer::Prime)
        .map(|g| g.valuations.values())
        .collect();
    let primes_surject = linalg::span_log_order(&Matrix::from_cols(&prime_vals, primes.len()), &ring)
        == n * primes.len() as u32;
    let mut star_equivariant = true;
    for (j, gen) in generators.iter().enumerate() {
        let expected = gen.valuations.star(&g)?.values();
        let mut got = vec![0u64; primes.len()];
        for (i, other) in generators.iter().enumerate() {
            for (slot, v) in got.iter_mut().zip(other.valuations.values()) {
                *slot = ring.add(*slot, ring.mul(action[j][i], v));
            }
        }
        star_equivariant &= got == expected;
    }
    Ok(UnitModulePresentation {
        p,
        n,
        t: t_sorted,
        generators,
        relations: Vec::new(),
        group_generator: gen_value,
        action,
        checks: PresentationChecks {
            units_map_to_zero,
            primes_surject,
            independent,
            star_equivariant,
        },
    })
}

impl UnitModulePresentation {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// The group `(Z/p^n)^*` and the presented module over it.
    pub fn module(&self) -> Result<(FiniteGroup, GModule)> {
        let group = FiniteGroup::units_mod(self.p, self.n, self.n)?;
        let ring = Zpm::new(self.p, self.n)?;
        let k = self.rank();
        let g = group
            .index_of(&self.group_generator.to_string())
            .ok_or_else(|| Error::InvalidGroup("generator missing from the group".into()))?;
        let a = Matrix::from_cols(&self.action, k);
        let rel = Matrix::from_cols(&self.relations, k);
        let module = GModule::from_presentation(&group, ring, k, &rel, &[(g, a)])?;
        Ok((group, module))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct E11Report {
    pub h0: ModuleStructure,
    pub h1: ModuleStructure,
    pub h2: ModuleStructure,
}

/// `H^0, H^1, H^2((Z/p^n)^*, presented module)`.
pub fn e11_compute(pres: &UnitModulePresentation) -> Result<E11Report> {
    let (group, module) = pres.module()?;
    let h = |i| cyclic_cohomology(&group, &module, None, i);
    Ok(E11Report {
        h0: h(0)?,
        h1: h(1)?,
        h2: h(2)?,
    })
}
