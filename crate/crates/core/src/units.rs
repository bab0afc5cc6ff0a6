//! Cyclotomic units `ξ_a`, classes modulo `p^n`-th powers, and the twisted
//! Galois actions on them.
//!
//! Classes are kept as formal products and compared through power-residue
//! symbols at auxiliary degree-one primes `ℓ ≡ 1 mod p^n`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{inv_mod, is_prime, mul_mod, pow_mod};
use crate::cyclotomic::{CycElt, CycParams, GaloisElt};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Solution, Zpm};

/// Number of auxiliary primes a power test must pass by default.
pub const DEFAULT_CONFIDENCE: usize = 20;

/// Number of auxiliary primes collected by default.
pub const DEFAULT_AUX_PRIMES: usize = 96;

/// `ξ_a = ζ^{(1-a)/2} (1 - ζ^a)/(1 - ζ)`, with `(1 - a)/2` read mod `p^n`.
pub fn xi(params: &CycParams, a: &GaloisElt) -> CycElt {
    let av = a.value();
    let shift = params.half_one_minus(av) as usize;
    let pn = params.pn() as usize;
    // (1 - ζ^a)/(1 - ζ) = 1 + ζ + … + ζ^{a-1} for 1 ≤ a < p^n
    let mut wide = vec![0i64; pn];
    for i in 0..av as usize {
        wide[(i + shift) % pn] += 1;
    }
    CycElt::from_i64s(*params, &wide)
}

/// The exact identity `σ_β(ξ_a) · ξ_β = ξ_{βa}`, equivalent to
/// `σ_β(ξ_a) = ξ_{βa} ξ_β^{-1}` because `ξ_β` is a unit.
pub fn verify_xi_galois(params: &CycParams, beta: &GaloisElt, a: &GaloisElt) -> bool {
    let lhs = &xi(params, a).galois_apply(beta) * &xi(params, beta);
    lhs == xi(params, &beta.compose(a))
}

/// A formal product `∏ b_i^{e_i}` read modulo `p^n`-th powers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycClass {
    params: CycParams,
    factors: Vec<(CycElt, i64)>,
}

impl CycClass {
    pub fn one(params: CycParams) -> Self {
        Self {
            params,
            factors: Vec::new(),
        }
    }

    pub fn from_elt(x: CycElt) -> Result<Self> {
        Self::from_factors(*x.params(), vec![(x, 1)])
    }

    pub fn from_factors(params: CycParams, factors: Vec<(CycElt, i64)>) -> Result<Self> {
        for (b, _) in &factors {
            if b.params() != &params {
                return Err(Error::ParamMismatch(format!(
                    "base over {} in a class over {params}",
                    b.params()
                )));
            }
            if b.is_zero() {
                return Err(Error::ZeroInput);
            }
        }
        Ok(Self { params, factors })
    }

    pub fn params(&self) -> &CycParams {
        &self.params
    }

    pub fn factors(&self) -> &[(CycElt, i64)] {
        &self.factors
    }

    pub fn mul(&self, other: &CycClass) -> CycClass {
        assert_eq!(self.params, other.params, "classes over different rings");
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        CycClass {
            params: self.params,
            factors,
        }
    }

    pub fn pow(&self, k: i64) -> CycClass {
        let pn = self.params.pn() as i64;
        CycClass {
            params: self.params,
            factors: self
                .factors
                .iter()
                .map(|(b, e)| (b.clone(), (e * k).rem_euclid(pn)))
                .collect(),
        }
    }

    pub fn inverse(&self) -> CycClass {
        self.pow(-1)
    }

    pub fn quotient(&self, other: &CycClass) -> CycClass {
        self.mul(&other.inverse())
    }

    /// Image in `F_ℓ^*`, or `None` if some base vanishes at this prime.
    fn residue(&self, aux: &AuxPrime) -> Option<u64> {
        let mut acc = 1u64;
        for (b, e) in &self.factors {
            let r = b.eval_mod(aux.root, aux.ell);
            if r == 0 {
                return None;
            }
            let e = e.rem_euclid(aux.ell as i64 - 1) as u64;
            acc = mul_mod(acc, pow_mod(r, e, aux.ell), aux.ell);
        }
        Some(acc)
    }
}

impl Serialize for CycClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.factors.iter())
    }
}

/// The class of `ξ_a`.
pub fn xi_class(params: &CycParams, a: &GaloisElt) -> CycClass {
    CycClass {
        params: *params,
        factors: vec![(xi(params, a), 1)],
    }
}

/// A degree-one prime `λ = (ℓ, ζ - root)` with `ℓ ≡ 1 mod p^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxPrime {
    pub ell: u64,
    /// A primitive `p^n`-th root of unity mod `ℓ`, the image of `ζ`.
    pub root: u64,
}

impl AuxPrime {
    /// Discrete log in `Z/p^k` of the `p^k`-th power residue symbol of a
    /// nonzero residue, relative to `root^{p^{n-k}}`.
    fn kummer_log(&self, res: u64, params: &CycParams, k: u32) -> u64 {
        let p = params.p();
        let pk = p.pow(k);
        let w = pow_mod(res, (self.ell - 1) / pk, self.ell);
        let h = pow_mod(self.root, p.pow(params.n() - k), self.ell);
        let h_inv = inv_mod(h, self.ell).expect("unit");
        let gamma = pow_mod(h, p.pow(k - 1), self.ell);
        let mut j = 0u64;
        let mut ppow = 1u64;
        for i in 0..k {
            let shifted = mul_mod(w, pow_mod(h_inv, j, self.ell), self.ell);
            let t = pow_mod(shifted, p.pow(k - 1 - i), self.ell);
            let mut g = 1u64;
            let d = (0..p)
                .find(|_| {
                    let hit = g == t;
                    g = mul_mod(g, gamma, self.ell);
                    hit
                })
                .expect("residue lies in the p^k-torsion");
            j += d * ppow;
            ppow *= p;
        }
        j
    }
}

/// Auxiliary primes with seeded choices of `ζ mod ℓ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxPrimeCtx {
    params: CycParams,
    primes: Vec<AuxPrime>,
    seed: u64,
}

impl AuxPrimeCtx {
    /// The `count` smallest primes `ℓ ≡ 1 mod p^n`.
    pub fn new(params: &CycParams, count: usize, seed: u64) -> Self {
        let pn = params.pn();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut primes = Vec::with_capacity(count);
        let mut ell = 1 + pn;
        while primes.len() < count {
            if is_prime(ell) {
                let cofactor = (ell - 1) / pn;
                let root = loop {
                    let g = rng.gen_range(2..ell);
                    let r = pow_mod(g, cofactor, ell);
                    if pow_mod(r, pn / params.p(), ell) != 1 {
                        break r;
                    }
                };
                primes.push(AuxPrime { ell, root });
            }
            ell += pn;
        }
        Self {
            params: *params,
            primes,
            seed,
        }
    }

    pub fn with_defaults(params: &CycParams, seed: u64) -> Self {
        Self::new(params, DEFAULT_AUX_PRIMES, seed)
    }

    pub fn params(&self) -> &CycParams {
        &self.params
    }

    pub fn primes(&self) -> &[AuxPrime] {
        &self.primes
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Outcome of a power test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PowerTest {
    /// Passed at `tested` admissible primes.
    Power { tested: usize },
    /// Certainly not a `p^n`-th power; its residue at `ℓ` is not one.
    NotPower { witness: AuxPrime },
}

impl PowerTest {
    pub fn is_power(&self) -> bool {
        matches!(self, PowerTest::Power { .. })
    }
}

fn check_ctx(c: &CycClass, ctx: &AuxPrimeCtx) -> Result<()> {
    if c.params != ctx.params {
        return Err(Error::ParamMismatch(format!(
            "class over {} tested with primes for {}",
            c.params, ctx.params
        )));
    }
    Ok(())
}

fn power_test_from(
    c: &CycClass,
    ctx: &AuxPrimeCtx,
    start: usize,
    confidence: usize,
) -> Result<PowerTest> {
    check_ctx(c, ctx)?;
    let pn = ctx.params.pn();
    let mut tested = 0;
    for aux in &ctx.primes[start.min(ctx.primes.len())..] {
        let Some(res) = c.residue(aux) else { continue };
        if pow_mod(res, (aux.ell - 1) / pn, aux.ell) != 1 {
            return Ok(PowerTest::NotPower { witness: *aux });
        }
        tested += 1;
        if tested == confidence {
            return Ok(PowerTest::Power { tested });
        }
    }
    Err(Error::NoAuxPrimes {
        needed: confidence,
        found: tested,
    })
}

/// Tests whether `c` is a `p^n`-th power using `confidence` admissible
/// primes. A negative answer is certain.
pub fn is_pn_power(c: &CycClass, ctx: &AuxPrimeCtx, confidence: usize) -> Result<PowerTest> {
    power_test_from(c, ctx, 0, confidence)
}

/// Which of the two Galois twists to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// `a ↦ β^{-1}(a)^{β^{-1}}`.
    Inverse,
    /// `a ↦ β(a)^β`.
    Direct,
}

pub fn twisted_act(beta: &GaloisElt, c: &CycClass, convention: Convention) -> CycClass {
    let g = match convention {
        Convention::Direct => *beta,
        Convention::Inverse => beta.inverse(),
    };
    let pn = c.params.pn() as i64;
    CycClass {
        params: c.params,
        factors: c
            .factors
            .iter()
            .map(|(b, e)| (b.galois_apply(&g), (e * g.value() as i64).rem_euclid(pn)))
            .collect(),
    }
}

/// Incremental row echelon basis over `F_p`.
struct FpEchelon {
    p: u64,
    rows: Vec<(usize, Vec<u64>)>,
}

impl FpEchelon {
    fn insert(&mut self, mut v: Vec<u64>) -> bool {
        let p = self.p;
        for (lead, row) in &self.rows {
            let f = v[*lead];
            if f != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = (*x + p - f * r % p) % p;
                }
            }
        }
        let Some(lead) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(v[lead], p).expect("field");
        for x in v.iter_mut() {
            *x = *x * inv % p;
        }
        for (_, row) in self.rows.iter_mut() {
            let f = row[lead];
            if f != 0 {
                for (x, &r) in row.iter_mut().zip(&v) {
                    *x = (*x + p - f * r % p) % p;
                }
            }
        }
        self.rows.push((lead, v));
        true
    }
}

/// Rank result with the number of auxiliary primes consulted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub rank: usize,
    pub primes_used: usize,
}

/// `F_p`-rank of the span of `gens` in `E/E^p`, read off from `p`-th power
/// residue symbols. Stops once the rank is full or has not grown over
/// `window` consecutive admissible primes.
pub fn unit_rank_mod_p(gens: &[CycClass], ctx: &AuxPrimeCtx, window: usize) -> Result<RankReport> {
    for g in gens {
        check_ctx(g, ctx)?;
    }
    if gens.is_empty() {
        return Ok(RankReport {
            rank: 0,
            primes_used: 0,
        });
    }
    let p = ctx.params.p();
    let mut ech = FpEchelon {
        p,
        rows: Vec::new(),
    };
    let mut used = 0;
    let mut quiet = 0;
    for aux in &ctx.primes {
        let Some(res) = gens.iter().map(|g| g.residue(aux)).collect::<Option<Vec<_>>>() else {
            continue;
        };
        used += 1;
        let row = res
            .iter()
            .map(|&r| aux.kummer_log(r, &ctx.params, 1))
            .collect();
        if ech.insert(row) {
            quiet = 0;
        } else {
            quiet += 1;
        }
        if ech.rows.len() == gens.len() || quiet >= window {
            return Ok(RankReport {
                rank: ech.rows.len(),
                primes_used: used,
            });
        }
    }
    Err(Error::RankUnstable { used })
}

/// Finds `e` with `target ≡ ∏ gens_i^{e_i}` modulo `p^n`-th powers.
///
/// The exponents come from solving the linear system of `p^n`-th power
/// residue symbols over `Z/p^n`; the answer is then certified by a power
/// test on auxiliary primes not used in the solve. The generators must be
/// independent modulo `p^n`-th powers.
pub fn express_in_generators(
    target: &CycClass,
    gens: &[CycClass],
    ctx: &AuxPrimeCtx,
    confidence: usize,
) -> Result<Vec<u64>> {
    check_ctx(target, ctx)?;
    let params = ctx.params;
    let ring = Zpm::new(params.p(), params.n())?;
    let k = gens.len();
    let unresolved = || Error::ActionExpression {
        element: format!("{target:?}"),
    };
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let mut rhs: Vec<u64> = Vec::new();
    for (idx, aux) in ctx.primes.iter().enumerate() {
        let Some(t) = target.residue(aux) else { continue };
        let Some(g) = gens.iter().map(|g| g.residue(aux)).collect::<Option<Vec<_>>>() else {
            continue;
        };
        rows.push(
            g.iter()
                .map(|&r| aux.kummer_log(r, &params, params.n()))
                .collect(),
        );
        rhs.push(aux.kummer_log(t, &params, params.n()));
        if rows.len() < k.max(1) {
            continue;
        }
        let mat = Matrix::from_rows(&rows, k);
        let piv = linalg::snf_valuations(&mat, &ring);
        if piv.len() < k || piv.iter().any(|&v| v > 0) {
            continue;
        }
        let Solution::Solved(e) = linalg::solve(&mat, &rhs, &ring) else {
            return Err(unresolved());
        };
        let mut q = target.clone();
        for (g, &ei) in gens.iter().zip(&e) {
            q = q.mul(&g.pow(-(ei as i64)));
        }
        return match power_test_from(&q, ctx, idx + 1, confidence)? {
            PowerTest::Power { .. } => Ok(e),
            PowerTest::NotPower { .. } => Err(unresolved()),
        };
    }
    Err(unresolved())
}
