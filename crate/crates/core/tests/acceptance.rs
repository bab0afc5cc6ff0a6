//! Acceptance gate: one PASS/FAIL line per criterion.

mod common;

use std::time::{Duration, Instant};

use common::{nonab_cocycle, solvable_by_propagation, v_int};
use cyclocohom::cohomology::*;
use cyclocohom::cyclotomic::{CycElt, CycParams};
use cyclocohom::heisenberg::{kummer_pair, lift_pair, LiftOutcome};
use cyclocohom::linalg::{span_log_order, Matrix, Zpm};
use cyclocohom::regular::is_regular;
use cyclocohom::units::*;
use cyclocohom::valuation::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_260_101;
/// Auxiliary primes per power-residue test.
const MIN_AUX_PRIMES: usize = 20;
const LIMIT_XI: Duration = Duration::from_secs(60);
const LIMIT_CONGRUENCES: Duration = Duration::from_secs(300);
const LIMIT_SOLVER: Duration = Duration::from_secs(120);
const RANDOM_CYCLIC_INSTANCES: usize = 36;
const MAX_CYCLIC_ORDER: usize = 12;
const MAX_MODULE_SIZE: u128 = 125;
const VALUATION_SAMPLES: usize = 50;
const NORM_SAMPLES: usize = 100;
const CEIL: u32 = DEFAULT_PRECISION_CEILING;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn random_elt(params: CycParams, rng: &mut ChaCha8Rng, bound: i64) -> CycElt {
    loop {
        let c: Vec<i64> = (0..params.degree()).map(|_| rng.gen_range(-bound..=bound)).collect();
        let x = CycElt::from_i64s(params, &c);
        if !x.is_zero() {
            return x;
        }
    }
}

fn xi_identities() -> Verdict {
    let start = Instant::now();
    let mut bad = 0usize;
    let mut checked = 0usize;
    for p in [5u64, 7, 11] {
        for n in [1u32, 2] {
            let params = CycParams::new(p, n).unwrap();
            let units = params.units();
            let xis: Vec<CycElt> = units.iter().map(|a| xi(&params, a)).collect();
            let at = |a: u64| units.binary_search_by_key(&a, |u| u.value()).unwrap();
            bad += usize::from(!xis[at(1)].is_one());
            for (i, a) in units.iter().enumerate() {
                let minus = at(params.pn() - a.value());
                bad += usize::from(xis[minus] != -xis[i].clone());
                for (j, beta) in units.iter().enumerate() {
                    // β(ξ_a) ξ_β = ξ_{βa}
                    let lhs = &xis[i].galois_apply(beta) * &xis[j];
                    bad += usize::from(lhs != xis[at(beta.compose(a).value())]);
                    checked += 1;
                }
            }
        }
    }
    let t = start.elapsed();
    verdict(bad == 0 && t < LIMIT_XI, format!("{checked} Galois relations, {bad} mismatches, {t:.1?}"))
}

fn twisted_congruences() -> Verdict {
    let start = Instant::now();
    let mut failures = 0usize;
    let mut tests = 0usize;
    for p in [5u64, 7] {
        for n in [1u32, 2] {
            let params = CycParams::new(p, n).unwrap();
            let ctx = AuxPrimeCtx::new(&params, DEFAULT_AUX_PRIMES, SEED);
            let units = params.units();
            let classes: Vec<CycClass> = units.iter().map(|a| xi_class(&params, a)).collect();
            let at = |a: u64| units.binary_search_by_key(&a, |u| u.value()).unwrap();
            let power = |c: &CycClass| match is_pn_power(c, &ctx, MIN_AUX_PRIMES).unwrap() {
                PowerTest::Power { tested } => tested >= MIN_AUX_PRIMES,
                PowerTest::NotPower { .. } => false,
            };
            for (j, beta) in units.iter().enumerate() {
                let b = beta.value() as i64;
                for (i, a) in units.iter().enumerate() {
                    let lhs = twisted_act(beta, &classes[i], Convention::Direct);
                    let rhs = classes[at(beta.compose(a).value())].pow(b).mul(&classes[j].pow(-b));
                    failures += usize::from(!power(&lhs.quotient(&rhs)));
                    tests += 1;
                }
                let minus = at(params.pn() - beta.value());
                failures += usize::from(!power(&classes[j].quotient(&classes[minus])));
                tests += 1;
            }
        }
    }
    let t = start.elapsed();
    verdict(
        failures == 0 && t < LIMIT_CONGRUENCES,
        format!("{tests} quotients, {failures} not p^n-th powers, ≥{MIN_AUX_PRIMES} aux primes each, {t:.1?}"),
    )
}

fn unit_rank() -> Verdict {
    let mut out = Vec::new();
    let mut pass = true;
    for (p, n) in [(5u64, 1u32), (7, 1), (11, 1), (5, 2)] {
        let params = CycParams::new(p, n).unwrap();
        let ctx = AuxPrimeCtx::new(&params, 4 * DEFAULT_AUX_PRIMES, SEED);
        let reps = params.units_mod_sign();
        let gens: Vec<CycClass> = reps.iter().map(|a| xi_class(&params, a)).collect();
        let r = unit_rank_mod_p(&gens, &ctx, 2 * MIN_AUX_PRIMES).unwrap();
        pass &= r.rank == reps.len() - 1;
        out.push(format!("p={p} n={n}: {}/{}", r.rank, reps.len() - 1));
    }
    verdict(pass, out.join(", "))
}

fn one_plus_p_bound() -> Verdict {
    let mut pass = true;
    let mut out = Vec::new();
    for (p, n) in [(5u64, 2u32), (5, 3), (7, 2), (7, 3)] {
        let g = FiniteGroup::one_plus_p(p, n, n).unwrap();
        let m = GModule::twist(&g, Zpm::new(p, n).unwrap(), 2).unwrap();
        let mut orders = Vec::new();
        for i in 0..3 {
            let c = cyclic_cohomology(&g, &m, None, i).unwrap();
            let b = brute_cohomology(&g, &m, i, DEFAULT_BRUTE_CEILING).unwrap();
            pass &= c == b && c.order() <= p as u128;
            orders.push(c.order().to_string());
        }
        out.push(format!("p={p} n={n}: |H^i| = {}", orders.join("/")));
    }
    verdict(pass, out.join(", "))
}

fn random_cyclic_module(rng: &mut ChaCha8Rng) -> (FiniteGroup, GModule) {
    loop {
        let n = rng.gen_range(1..=MAX_CYCLIC_ORDER);
        let p = [2u64, 3, 5][rng.gen_range(0..3)];
        let m = rng.gen_range(1..=3u32);
        let pm = p.pow(m);
        let ring = Zpm::new(p, m).unwrap();
        let g = FiniteGroup::cyclic(n).unwrap();
        if rng.gen_bool(0.5) {
            // rank one, the generator acting by a unit u with u^n = 1
            let units: Vec<u64> = (1..pm)
                .filter(|&u| u % p != 0 && (0..n).fold(1u64, |a, _| a * u % pm) == 1)
                .collect();
            let u = units[rng.gen_range(0..units.len())];
            let values = (0..n).map(|j| (0..j).fold(1u64, |a, _| a * u % pm)).collect();
            let g = g.with_character(Character { modulus: pm, values }).unwrap();
            let module = GModule::twist(&g, ring, rng.gen_range(0..4)).unwrap();
            return (g, module);
        }
        let rank = rng.gen_range(1..=3usize);
        let exps = (0..rank).map(|_| rng.gen_range(1..=m)).collect();
        let module = GModule::trivial(&g, ring, exps).unwrap();
        if module.order() <= MAX_MODULE_SIZE {
            return (g, module);
        }
    }
}

fn oracle_equivalence() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut agree = 0usize;
    let mut total = 0usize;
    while total < RANDOM_CYCLIC_INSTANCES {
        let (g, m) = random_cyclic_module(&mut rng);
        let same = (0..3).all(|i| {
            cyclic_cohomology(&g, &m, None, i).unwrap() == brute_cohomology(&g, &m, i, DEFAULT_BRUTE_CEILING).unwrap()
        });
        agree += usize::from(same);
        total += 1;
    }
    verdict(agree == total, format!("{agree}/{total} instances agree in degrees 0..=2"))
}

fn enumerate_normalized_1_cochains(g: &FiniteGroup, m: &GModule) -> Vec<Cochain> {
    let n = g.order();
    let q = m.ring().modulus();
    let e = g.identity();
    let free: Vec<usize> = (0..n).filter(|&s| s != e).collect();
    (0..q.pow(free.len() as u32))
        .map(|code| {
            let mut values = vec![vec![0u64]; n];
            let mut t = code;
            for &s in &free {
                values[s] = vec![t % q];
                t /= q;
            }
            Cochain::from_values(g, m, 1, values).unwrap()
        })
        .collect()
}

fn coboundary_solver() -> Verdict {
    let start = Instant::now();
    let mut notes = Vec::new();

    // (a) zero target on the Kummer model, coset enumerated
    let g = FiniteGroup::kummer(3, 1, 2).unwrap();
    let mut a_ok = true;
    for k in [1i64, 2] {
        let mk = GModule::twist(&g, Zpm::new(3, 1).unwrap(), k).unwrap();
        let SolveOutcome::Solved { alpha, coset } = solve_coboundary_eq(&g, &mk, &Cochain::zero(&g, &mk, 2)).unwrap()
        else {
            a_ok = false;
            continue;
        };
        let mut elems: Vec<Vec<Vec<u64>>> = mk
            .elements()
            .into_iter()
            .map(|b| {
                let b = Cochain::from_values(&g, &mk, 0, vec![b]).unwrap();
                alpha.add(&coboundary(&g, &mk, &b).unwrap(), &mk).values().to_vec()
            })
            .collect();
        elems.sort();
        elems.dedup();
        let fixed = mk
            .elements()
            .iter()
            .filter(|v| (0..g.order()).all(|s| mk.act(s, v) == **v))
            .count() as u128;
        let expect = mk.order() / fixed;
        notes.push(format!("(a) twist {k}: coset {} = |A|/|H⁰| = {expect}", elems.len()));
        a_ok &= elems.len() as u128 == expect && 3u128.pow(coset.log_coboundaries) == expect;
    }

    // (b) carry cocycle of Z/p² on C_p, against all p^{p-1} normalized 1-cochains
    let mut b_ok = true;
    for p in [3usize, 5] {
        let cp = FiniteGroup::cyclic(p).unwrap();
        let z = GModule::trivial(&cp, Zpm::new(p as u64, 1).unwrap(), vec![1]).unwrap();
        let carry = Cochain::from_fn(&cp, &z, 2, |a| vec![u64::from(a[0] + a[1] >= p)]);
        let brute_solvable = enumerate_normalized_1_cochains(&cp, &z)
            .iter()
            .any(|a| coboundary(&cp, &z, a).unwrap() == carry);
        let solver = match solve_coboundary_eq(&cp, &z, &carry).unwrap() {
            SolveOutcome::Obstructed(o) => !o.coords.is_empty(),
            SolveOutcome::Solved { .. } => false,
        };
        b_ok &= solver && !brute_solvable;
    }
    notes.push(format!("(b) carry cocycle obstructed for p=3,5: {b_ok}"));

    // (c) every pair of translation combinations on the Kummer model
    let m1 = GModule::twist(&g, Zpm::new(3, 1).unwrap(), 1).unwrap();
    let (kx, ky) = kummer_pair(&g, &m1).unwrap();
    let gen = |b: [u64; 2], a: u64| {
        (0..g.order())
            .find(|&s| g.translation(s).unwrap() == b && g.chi(s) == Some(a))
            .unwrap()
    };
    let gens = [gen([1, 0], 1), gen([0, 1], 1), gen([0, 0], 2)];
    let (mut lifted, mut c_ok) = (0usize, true);
    for code in 0..81u64 {
        let [a, b, c, d] = [code % 3, code / 3 % 3, code / 9 % 3, code / 27];
        let phi = kx.scale(a, &m1).add(&ky.scale(b, &m1), &m1);
        let psi = kx.scale(c, &m1).add(&ky.scale(d, &m1), &m1);
        let cup = |s: usize, t: usize| phi.values()[s][0] * g.chi(s).unwrap() % 3 * psi.values()[t][0] % 3;
        let oracle = solvable_by_propagation(&g, &gens, &cup, 3).is_some();
        match lift_pair(&g, &m1, &phi, &psi).unwrap() {
            LiftOutcome::Lifted { cocycle, .. } => {
                let triples: Vec<[u64; 3]> = cocycle.values().iter().map(|h| [h.x, h.y, h.z]).collect();
                c_ok &= oracle
                    && nonab_cocycle(&g, &triples, 3)
                    && cyclocohom::heisenberg::is_cocycle_nonab(&g, &cocycle).unwrap()
                    && cocycle.abelianize(&g, &m1) == (phi, psi);
                lifted += 1;
            }
            LiftOutcome::Obstructed(_) => c_ok &= !oracle,
        }
    }
    notes.push(format!("(c) {lifted}/81 pairs lift, all verified: {c_ok}"));
    let t = start.elapsed();
    notes.push(format!("{t:.1?}"));
    verdict(a_ok && b_ok && c_ok && t < LIMIT_SOLVER, notes.join("; "))
}

fn valuation_equivariance() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let params = CycParams::new(5, 1).unwrap();
    let t = [11u64];
    let primes = primes_above(&params, 11).unwrap();
    let mut bad = 0usize;
    for _ in 0..VALUATION_SAMPLES {
        let x = random_elt(params, &mut rng, 10);
        let class = CycClass::from_elt(x.clone()).unwrap();
        let v = val_vector(&x, &t, CEIL).unwrap();
        for alpha in params.units() {
            let ax = x.galois_apply(&alpha);
            for pr in &primes {
                let image = galois_on_prime(&alpha, pr).unwrap();
                bad += usize::from(val_at(&ax, &image, CEIL).unwrap() != val_at(&x, pr, CEIL).unwrap());
            }
            let moved = twisted_act(&alpha, &class, Convention::Inverse);
            bad += usize::from(val_vector_class(&moved, &t, CEIL).unwrap() != v.star(&alpha).unwrap());
        }
    }
    verdict(bad == 0, format!("{VALUATION_SAMPLES} elements × 4 automorphisms, {bad} mismatches"))
}

fn snake_surjectivity() -> Verdict {
    let mut pass = true;
    let mut out = Vec::new();
    for (p, t) in [(3u64, vec![3u64]), (3, vec![3, 7]), (5, vec![5]), (5, vec![5, 11])] {
        let params = CycParams::new(p, 1).unwrap();
        let tt = primes_above_set(&params, &t).unwrap();
        let mut cols = Vec::new();
        let mut found = true;
        for pr in &tt {
            match prime_generator_search(pr, 3, CEIL).unwrap() {
                GeneratorSearch::Found { u, .. } => cols.push(val_vector(&u, &t, CEIL).unwrap().values()),
                GeneratorSearch::NotFound => found = false,
            }
        }
        let ring = Zpm::new(p, 1).unwrap();
        let spans = found && span_log_order(&Matrix::from_cols(&cols, tt.len()), &ring) == tt.len() as u32;
        let mut units = vec![CycClass::from_elt(CycElt::zeta(params)).unwrap()];
        units.extend(params.units().iter().map(|a| xi_class(&params, a)));
        let zero = units
            .iter()
            .all(|c| val_vector_class(c, &t, CEIL).unwrap().is_zero());
        pass &= found && spans && zero;
        out.push(format!("p={p} T={t:?}: {} primes, surjective {spans}, units to 0 {zero}", tt.len()));
    }
    verdict(pass, out.join("; "))
}

fn norm_sum() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let mut bad = 0usize;
    let mut done = 0usize;
    while done < NORM_SAMPLES {
        let (p, n) = [(3u64, 1u32), (5, 1), (7, 1), (3, 2), (5, 2)][rng.gen_range(0..5)];
        let q = [2u64, 3, 7, 11, 13, 19, 29, 31, 41][rng.gen_range(0..9)];
        if q == p {
            continue;
        }
        let params = CycParams::new(p, n).unwrap();
        let x = random_elt(params, &mut rng, 6);
        let lhs: u32 = primes_above(&params, q)
            .unwrap()
            .iter()
            .map(|pr| pr.f() as u32 * val_at(&x, pr, CEIL).unwrap())
            .sum();
        bad += usize::from(lhs != v_int(&x.abs_norm(), q));
        done += 1;
    }
    verdict(bad == 0, format!("{NORM_SAMPLES} pairs, {bad} mismatches"))
}

fn regularity() -> Verdict {
    let regular = [3u64, 5, 7, 11, 13].iter().all(|&p| is_regular(p).unwrap().regular);
    let r37 = is_regular(37).unwrap();
    let ok = regular && !r37.regular && r37.indices == [32];
    verdict(ok, format!("3,5,7,11,13 regular: {regular}; 37 indices {:?}", r37.indices))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("xi identities", xi_identities),
        ("twisted-action congruences", twisted_congruences),
        ("unit rank", unit_rank),
        ("1+(p) cohomology bound", one_plus_p_bound),
        ("cyclic vs bar-resolution engines", oracle_equivalence),
        ("coboundary solver", coboundary_solver),
        ("valuation equivariance", valuation_equivariance),
        ("prime generators surject", snake_surjectivity),
        ("norm-sum formula", norm_sum),
        ("regularity", regularity),
    ];
    let mut all = true;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let v = f();
        all &= v.pass;
        println!("{} {:>2} {name}: {}", if v.pass { "PASS" } else { "FAIL" }, i + 1, v.detail);
    }
    if !all {
        std::process::exit(1);
    }
}
