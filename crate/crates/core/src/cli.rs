//! Command-line front end. Every report is
//! `{"input", "result", "checks": [{name, pass}], "timing_ms"}`.
//!
//! Exit status: 0 when every check passes, 1 when some check fails, 2 on
//! flag errors, 3 on computation errors.

use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{is_prime, DEFAULT_FACTOR_BOUND};
use crate::cohomology::schema::{CochainSpec, GroupSpec, ModuleSpec};
use crate::cohomology::{
    brute_cohomology, cyclic_cohomology, solve_coboundary_eq, Cochain, CosetInfo, FiniteGroup, GModule,
    SolveOutcome, DEFAULT_BRUTE_CEILING,
};
use crate::cyclotomic::{CycElt, CycParams};
use crate::error::Error;
use crate::heisenberg::{is_cocycle_nonab, kummer_pair, lift_pair, LiftOutcome};
use crate::linalg::Zpm;
use crate::regular::{bernoulli_numbers, is_regular};
use crate::spectral::{e11_assemble, e11_compute, e2_row0, one_plus_p_cohomology, E11Options};
use crate::units::{
    is_pn_power, twisted_act, unit_rank_mod_p, verify_xi_galois, xi, xi_class, AuxPrimeCtx, Convention, CycClass,
    DEFAULT_AUX_PRIMES, DEFAULT_CONFIDENCE,
};
use crate::valuation::{
    galois_on_prime, is_in_e, pi_val, prime_generator_search, primes_above, primes_above_set, val_vector,
    val_vector_class, GeneratorSearch, DEFAULT_PRECISION_CEILING,
};

/// Environment variable overriding the default valuation precision ceiling.
pub const PRECISION_ENV: &str = "CYCLOCOHOM_PRECISION_CEILING";

#[derive(Debug, Parser)]
#[command(name = "cyclocohom", version, about = "Cyclotomic units, valuations and finite group cohomology")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Ceiling on the q-adic precision used by valuations.
    #[arg(long, global = true)]
    pub precision_ceiling: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cyclotomic ring arithmetic and cyclotomic units.
    #[command(subcommand)]
    Units(UnitsCmd),
    /// Primes above T, valuations, and prime generators.
    #[command(subcommand)]
    Valuation(ValuationCmd),
    /// Cohomology of a finite group.
    Cohomology(CohomologyArgs),
    /// Solve the coboundary equation dα = c.
    #[command(subcommand)]
    Coboundary(CoboundaryCmd),
    /// Lift a pair of 1-cocycles to a Heisenberg-valued cocycle.
    Lift(LiftArgs),
    /// E₂-terms of the spectral sequence.
    #[command(subcommand)]
    Spectral(SpectralCmd),
    /// Regularity of a prime.
    RegularCheck(RegularArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FieldArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub n: u32,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AuxArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_CONFIDENCE)]
    pub confidence: usize,
    #[arg(long, default_value_t = DEFAULT_AUX_PRIMES)]
    pub aux_primes: usize,
}

#[derive(Debug, Subcommand)]
pub enum UnitsCmd {
    /// Verify the ξ-identities, congruences and the unit rank.
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        aux: AuxArgs,
    },
    /// Ring operations on power-basis coefficient lists.
    Arith {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
        #[arg(long)]
        beta: Option<i64>,
    },
    /// Test whether x^e is a p^n-th power.
    PowerTest {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value_t = 1)]
        exp: i64,
        #[command(flatten)]
        aux: AuxArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum ValuationCmd {
    /// Primes above q.
    Primes {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        q: u64,
    },
    /// Valuation vector of x at the primes above T, π-valuation, membership in E.
    Vector {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Galois images of the primes above q.
    Galois {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        alpha: i64,
    },
    /// Generator search for every prime above T.
    Generators {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 3)]
        bound: i64,
    },
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GroupArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    /// Exponent of the ambient unit group (defaults to m).
    #[arg(long)]
    pub n: Option<u32>,
    /// Preset (`cyclic:N`, `units`, `one-plus-p`, `kummerK`) or group JSON.
    #[arg(long, default_value = "kummer2")]
    pub group: String,
}

#[derive(Debug, Args)]
pub struct CohomologyArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    /// Preset (`twist:K`, `trivial`, `trivial:e1,e2,…`) or module JSON.
    #[arg(long)]
    pub module: Option<String>,
    /// Degree; all of 0, 1, 2 when omitted.
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long, value_enum, default_value_t = Engine::Both)]
    pub engine: Engine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Cyclic,
    Brute,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum CoboundaryCmd {
    /// Solve dα = c for a 2-cocycle c, given directly or as κ_x ∪ κ_y.
    Solve {
        #[command(flatten)]
        group: GroupArgs,
        /// Module of c (defaults to `twist:2`).
        #[arg(long)]
        module: Option<String>,
        /// Degree-2 cochain JSON.
        #[arg(long)]
        cochain: Option<String>,
        #[command(flatten)]
        pair: PairArgs,
    },
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PairArgs {
    /// κ_x: translation coefficients `a,b` (Kummer models) or 1-cochain JSON.
    #[arg(long)]
    pub kx: Option<String>,
    #[arg(long)]
    pub ky: Option<String>,
}

#[derive(Debug, Args)]
pub struct LiftArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    #[command(flatten)]
    pub pair: PairArgs,
}

#[derive(Debug, Subcommand)]
pub enum SpectralCmd {
    /// H^deg((Z/p^n)^*, Z/p^m(2)).
    Row0 {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        deg: usize,
    },
    /// H^deg(1+(p), Z/p^n(2)).
    OnePlusP {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        deg: usize,
    },
    /// The unit-module presentation and its cohomology.
    E11 {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 3)]
        bound: i64,
        #[command(flatten)]
        aux: AuxArgs,
    },
}

#[derive(Debug, Args)]
pub struct RegularArgs {
    #[arg(long)]
    pub p: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

fn check(name: &str, pass: bool) -> Check {
    Check {
        name: name.into(),
        pass,
    }
}

/// Failure before or during a computation.
#[derive(Debug)]
pub enum Failure {
    Flag(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

type Outcome = std::result::Result<(Value, Vec<Check>), Failure>;

fn flag(msg: impl Into<String>) -> Failure {
    Failure::Flag(msg.into())
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn field(f: &FieldArgs) -> std::result::Result<CycParams, Failure> {
    if f.p == 2 || !is_prime(f.p) {
        return Err(flag(format!("--p must be an odd prime, got {}", f.p)));
    }
    if f.n == 0 {
        return Err(flag("--n must be at least 1"));
    }
    CycParams::new(f.p, f.n).map_err(|e| flag(e.to_string()))
}

fn parse_elt(params: CycParams, s: &str) -> std::result::Result<CycElt, Failure> {
    let coeffs: std::result::Result<Vec<i64>, _> = s
        .trim_matches(|c| c == '[' || c == ']')
        .split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect();
    let coeffs = coeffs.map_err(|_| flag(format!("cannot parse coefficient list {s:?}")))?;
    if coeffs.len() > params.pn() as usize {
        return Err(flag(format!("more than p^n = {} coefficients", params.pn())));
    }
    Ok(CycElt::from_i64s(params, &coeffs))
}

fn check_t(t: &[u64]) -> std::result::Result<(), Failure> {
    if t.is_empty() {
        return Err(flag("--primes must list at least one prime"));
    }
    if let Some(&q) = t.iter().find(|&&q| !is_prime(q)) {
        return Err(flag(format!("--primes entry {q} is not prime")));
    }
    Ok(())
}

fn precision_ceiling(cli: Option<u32>) -> std::result::Result<u32, Failure> {
    if let Some(c) = cli {
        return Ok(c);
    }
    match std::env::var(PRECISION_ENV) {
        Ok(v) => v
            .parse()
            .map_err(|_| flag(format!("{PRECISION_ENV} must be an integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_PRECISION_CEILING),
    }
}

fn aux_ctx(params: &CycParams, aux: &AuxArgs) -> std::result::Result<AuxPrimeCtx, Failure> {
    if aux.confidence == 0 || aux.aux_primes < aux.confidence {
        return Err(flag("need --aux-primes ≥ --confidence ≥ 1"));
    }
    Ok(AuxPrimeCtx::new(params, aux.aux_primes, aux.seed))
}

fn units(cmd: &UnitsCmd) -> Outcome {
    match cmd {
        UnitsCmd::Verify { field: f, aux } => {
            let params = field(f)?;
            let ctx = aux_ctx(&params, aux)?;
            let units = params.units();
            let xi1 = xi(&params, &params.galois(1)?).is_one();
            let xi_minus = units.iter().all(|a| {
                let minus = params.galois(-(a.value() as i64)).expect("unit");
                xi(&params, &minus) == -xi(&params, a)
            });
            let galois = units
                .iter()
                .all(|b| units.iter().all(|a| verify_xi_galois(&params, b, a)));
            let mut congruence = true;
            let mut tests = 0usize;
            for b in &units {
                for a in &units {
                    let lhs = twisted_act(b, &xi_class(&params, a), Convention::Direct);
                    let ba = b.compose(a);
                    let bv = b.value() as i64;
                    let rhs = xi_class(&params, &ba)
                        .pow(bv)
                        .mul(&xi_class(&params, b).pow(-bv));
                    congruence &= is_pn_power(&lhs.quotient(&rhs), &ctx, aux.confidence)?.is_power();
                    tests += 1;
                }
                let minus = params.galois(-(b.value() as i64))?;
                let q = xi_class(&params, b).quotient(&xi_class(&params, &minus));
                congruence &= is_pn_power(&q, &ctx, aux.confidence)?.is_power();
                tests += 1;
            }
            let reps = params.units_mod_sign();
            let gens: Vec<CycClass> = reps.iter().map(|a| xi_class(&params, a)).collect();
            let rank = unit_rank_mod_p(&gens, &ctx, 2 * aux.confidence)?;
            let s = reps.len();
            let result = json!({
                "s": s,
                "rank": rank.rank,
                "rank_primes_used": rank.primes_used,
                "power_tests": tests,
            });
            Ok((
                result,
                vec![
                    check("xi_relation_1", xi1),
                    check("xi_minus_a", xi_minus),
                    check("galois_relation", galois),
                    check("twisted_congruence", congruence),
                    check("rank", rank.rank == s - 1),
                ],
            ))
        }
        UnitsCmd::Arith { field: f, x, y, beta } => {
            let params = field(f)?;
            let x = parse_elt(params, x)?;
            let mut result = json!({ "x": x.to_string(), "norm_x": x.abs_norm().to_string() });
            if let Some(y) = y {
                let y = parse_elt(params, y)?;
                result["y"] = json!(y.to_string());
                result["sum"] = json!((&x + &y).to_string());
                result["difference"] = json!((&x - &y).to_string());
                result["product"] = json!((&x * &y).to_string());
                result["quotient"] = match x.div_exact(&y) {
                    Ok(q) => json!(q.to_string()),
                    Err(Error::NotDivisible) => Value::Null,
                    Err(e) => return Err(e.into()),
                };
            }
            if let Some(b) = beta {
                let g = params.galois(*b).map_err(|e| flag(e.to_string()))?;
                result["galois"] = json!(x.galois_apply(&g).to_string());
            }
            Ok((result, Vec::new()))
        }
        UnitsCmd::PowerTest { field: f, x, exp, aux } => {
            let params = field(f)?;
            let ctx = aux_ctx(&params, aux)?;
            let x = parse_elt(params, x)?;
            let c = CycClass::from_factors(params, vec![(x, *exp)])?;
            let verdict = is_pn_power(&c, &ctx, aux.confidence)?;
            Ok((to_value(&verdict), Vec::new()))
        }
    }
}

fn valuation(cmd: &ValuationCmd, ceiling: u32) -> Outcome {
    match cmd {
        ValuationCmd::Primes { field: f, q } => {
            let params = field(f)?;
            if !is_prime(*q) {
                return Err(flag(format!("--q must be prime, got {q}")));
            }
            let primes = primes_above(&params, *q)?;
            let list: Vec<Value> = primes
                .iter()
                .map(|pr| json!({ "label": pr.to_string(), "prime": to_value(pr), "split_root": pr.split_root() }))
                .collect();
            Ok((json!({ "count": primes.len(), "primes": list }), Vec::new()))
        }
        ValuationCmd::Vector { field: f, primes, x } => {
            let params = field(f)?;
            check_t(primes)?;
            let x = parse_elt(params, x)?;
            if x.is_zero() {
                return Err(Error::ZeroInput.into());
            }
            let v = val_vector(&x, primes, ceiling)?;
            let labeled: Vec<Value> = v
                .entries()
                .iter()
                .map(|(pr, r)| json!([pr.to_string(), r]))
                .collect();
            let result = json!({
                "x": x.to_string(),
                "vector": labeled,
                "pi_valuation": pi_val(&x)?,
                "in_e": is_in_e(&x, primes, DEFAULT_FACTOR_BOUND, ceiling)?,
            });
            Ok((result, Vec::new()))
        }
        ValuationCmd::Galois { field: f, q, alpha } => {
            let params = field(f)?;
            if !is_prime(*q) {
                return Err(flag(format!("--q must be prime, got {q}")));
            }
            let a = params.galois(*alpha).map_err(|e| flag(e.to_string()))?;
            let mut images = Vec::new();
            for pr in primes_above(&params, *q)? {
                images.push(json!([pr.to_string(), galois_on_prime(&a, &pr)?.to_string()]));
            }
            Ok((json!({ "images": images }), Vec::new()))
        }
        ValuationCmd::Generators { field: f, primes, bound } => {
            let params = field(f)?;
            check_t(primes)?;
            let tt = primes_above_set(&params, primes)?;
            let ring = Zpm::new(params.p(), params.n())?;
            let mut found = Vec::new();
            let mut cols = Vec::new();
            let mut all_found = true;
            for pr in &tt {
                match prime_generator_search(pr, *bound, ceiling)? {
                    GeneratorSearch::Found { u, h } => {
                        let v = val_vector(&u, primes, ceiling)?;
                        cols.push(v.values());
                        found.push(json!({ "prime": pr.to_string(), "u": u.to_string(), "h": h }));
                    }
                    GeneratorSearch::NotFound => {
                        all_found = false;
                        found.push(json!({ "prime": pr.to_string(), "u": Value::Null }));
                    }
                }
            }
            let surjective = all_found
                && crate::linalg::span_log_order(&crate::linalg::Matrix::from_cols(&cols, tt.len()), &ring)
                    == params.n() * tt.len() as u32;
            let mut unit_classes = vec![CycClass::from_elt(CycElt::zeta(params))?];
            unit_classes.extend(params.units_mod_sign().iter().map(|a| xi_class(&params, a)));
            let mut units_zero = true;
            for c in &unit_classes {
                units_zero &= val_vector_class(c, primes, ceiling)?.is_zero();
            }
            Ok((
                json!({ "generators": found }),
                vec![
                    check("all_found", all_found),
                    check("surjective", surjective),
                    check("units_map_to_zero", units_zero),
                ],
            ))
        }
    }
}

fn read_json(s: &str) -> std::result::Result<String, Failure> {
    match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| flag(format!("cannot read {path}: {e}"))),
        None => Ok(s.to_string()),
    }
}

fn build_group(g: &GroupArgs) -> std::result::Result<FiniteGroup, Failure> {
    if !is_prime(g.p) {
        return Err(flag(format!("--p must be prime, got {}", g.p)));
    }
    if g.m == 0 {
        return Err(flag("--m must be at least 1"));
    }
    let n = g.n.unwrap_or(g.m);
    if n < g.m {
        return Err(flag("--n must be at least --m"));
    }
    let s = g.group.trim();
    let spec = if s.starts_with('{') || s.starts_with('@') {
        serde_json::from_str::<GroupSpec>(&read_json(s)?).map_err(|e| flag(format!("group JSON: {e}")))?
    } else if let Some(k) = s.strip_prefix("cyclic:") {
        GroupSpec::Cyclic {
            n: k.parse().map_err(|_| flag(format!("bad group preset {s:?}")))?,
        }
    } else if s == "units" {
        GroupSpec::UnitsMod { p: g.p, n, m: g.m }
    } else if s == "one-plus-p" {
        GroupSpec::OnePlusP { p: g.p, n, m: g.m }
    } else if let Some(k) = s.strip_prefix("kummer") {
        GroupSpec::Kummer {
            p: g.p,
            m: g.m,
            k: k.parse().map_err(|_| flag(format!("bad group preset {s:?}")))?,
        }
    } else {
        return Err(flag(format!("unknown group preset {s:?}")));
    };
    Ok(spec.build()?)
}

fn build_module(
    g: &GroupArgs,
    group: &FiniteGroup,
    spec: Option<&str>,
    default_twist: i64,
) -> std::result::Result<GModule, Failure> {
    let spec = match spec.map(str::trim) {
        None => {
            if group.character().is_some() {
                ModuleSpec::Twist { p: g.p, m: g.m, k: default_twist }
            } else {
                ModuleSpec::Trivial { p: g.p, m: g.m, exps: vec![g.m] }
            }
        }
        Some(s) if s.starts_with('{') || s.starts_with('@') => {
            serde_json::from_str(&read_json(s)?).map_err(|e| flag(format!("module JSON: {e}")))?
        }
        Some(s) => {
            if let Some(k) = s.strip_prefix("twist:") {
                ModuleSpec::Twist {
                    p: g.p,
                    m: g.m,
                    k: k.parse().map_err(|_| flag(format!("bad module preset {s:?}")))?,
                }
            } else if s == "trivial" {
                ModuleSpec::Trivial { p: g.p, m: g.m, exps: vec![g.m] }
            } else if let Some(e) = s.strip_prefix("trivial:") {
                let exps: std::result::Result<Vec<u32>, _> = e.split(',').map(|t| t.trim().parse()).collect();
                ModuleSpec::Trivial {
                    p: g.p,
                    m: g.m,
                    exps: exps.map_err(|_| flag(format!("bad module preset {s:?}")))?,
                }
            } else {
                return Err(flag(format!("unknown module preset {s:?}")));
            }
        }
    };
    Ok(spec.build(group)?)
}

fn cohomology(a: &CohomologyArgs) -> Outcome {
    let group = build_group(&a.group)?;
    let module = build_module(&a.group, &group, a.module.as_deref(), 2)?;
    let degrees: Vec<usize> = match a.degree {
        Some(d) if d > 2 && a.engine != Engine::Cyclic => {
            return Err(flag("brute-force cohomology supports degrees 0..=2"))
        }
        Some(d) => vec![d],
        None => vec![0, 1, 2],
    };
    let mut out = Vec::new();
    let mut agree = true;
    for &d in &degrees {
        let cyc = match a.engine {
            Engine::Brute => None,
            _ => Some(cyclic_cohomology(&group, &module, None, d)?),
        };
        let brute = match a.engine {
            Engine::Cyclic => None,
            _ => Some(brute_cohomology(&group, &module, d, DEFAULT_BRUTE_CEILING)?),
        };
        if let (Some(c), Some(b)) = (&cyc, &brute) {
            agree &= c == b;
        }
        let h = cyc.clone().or(brute.clone()).expect("some engine ran");
        out.push(json!({
            "degree": d,
            "structure": h.to_string(),
            "invariants": h.invariants,
            "order": h.order().to_string(),
            "cyclic": cyc.map(|c| c.invariants),
            "brute": brute.map(|b| b.invariants),
        }));
    }
    let mut checks = Vec::new();
    if a.engine == Engine::Both {
        checks.push(check("engines_agree", agree));
    }
    Ok((
        json!({ "group": group.name(), "order": group.order(), "module_rank": module.rank(), "cohomology": out }),
        checks,
    ))
}

fn parse_one_cochain(
    s: &str,
    group: &FiniteGroup,
    module: &GModule,
) -> std::result::Result<Cochain, Failure> {
    let s = s.trim();
    if s.starts_with('{') || s.starts_with('@') {
        let spec: CochainSpec =
            serde_json::from_str(&read_json(s)?).map_err(|e| flag(format!("cochain JSON: {e}")))?;
        if spec.degree != 1 {
            return Err(flag("κ cochains must have degree 1"));
        }
        return Ok(spec.build(group, module)?);
    }
    let coeffs: std::result::Result<Vec<u64>, _> = s.split(',').map(|t| t.trim().parse()).collect();
    let coeffs = coeffs.map_err(|_| flag(format!("cannot parse {s:?}")))?;
    let (kx, ky) = kummer_pair(group, module).map_err(|_| flag("translation coefficients need the kummer2 group"))?;
    if coeffs.len() != 2 {
        return Err(flag("translation coefficients are a pair a,b"));
    }
    Ok(kx.scale(coeffs[0], module).add(&ky.scale(coeffs[1], module), module))
}

fn pair(
    args: &PairArgs,
    group: &FiniteGroup,
    module: &GModule,
    default: (&str, &str),
) -> std::result::Result<(Cochain, Cochain), Failure> {
    let kx = parse_one_cochain(args.kx.as_deref().unwrap_or(default.0), group, module)?;
    let ky = parse_one_cochain(args.ky.as_deref().unwrap_or(default.1), group, module)?;
    Ok((kx, ky))
}

fn coset_json(c: &CosetInfo, p: u64) -> Value {
    json!({
        "coboundaries_log": c.log_coboundaries,
        "cocycles_log": c.log_cocycles,
        "h1_log": c.log_h1,
        "coboundaries_order": (p as u128).pow(c.log_coboundaries).to_string(),
        "solution_set_order": (p as u128).pow(c.log_cocycles).to_string(),
        "coboundary_generators": c.coboundary_generators.len(),
        "cocycle_generators": c.cocycle_generators.len(),
    })
}

fn coboundary_cmd(cmd: &CoboundaryCmd) -> Outcome {
    let CoboundaryCmd::Solve {
        group: ga,
        module,
        cochain,
        pair: pa,
    } = cmd;
    let group = build_group(ga)?;
    let (target, c) = match cochain {
        Some(s) => {
            let target = build_module(ga, &group, module.as_deref(), 2)?;
            let spec: CochainSpec =
                serde_json::from_str(&read_json(s)?).map_err(|e| flag(format!("cochain JSON: {e}")))?;
            if spec.degree != 2 {
                return Err(flag("--cochain must have degree 2"));
            }
            let c = spec.build(&group, &target)?;
            (target, c)
        }
        None => {
            if group.character().is_none() {
                return Err(flag("κ pairs need a group with a character"));
            }
            let m1 = GModule::twist(&group, Zpm::new(ga.p, ga.m)?, 1)?;
            let zero = CochainSpec { degree: 1, entries: Vec::new() };
            let z = serde_json::to_string(&zero).expect("serializable");
            let (kx, ky) = pair(pa, &group, &m1, (&z, &z))?;
            crate::cohomology::cup_11(&group, &m1, &kx, &m1, &ky)?
        }
    };
    match solve_coboundary_eq(&group, &target, &c)? {
        SolveOutcome::Solved { alpha, coset } => {
            let verified = crate::cohomology::coboundary(&group, &target, &alpha)? == c;
            Ok((
                json!({
                    "solvable": true,
                    "alpha": to_value(&CochainSpec::from_cochain(&group, &alpha)),
                    "alpha_is_zero": alpha.is_zero(),
                    "coset": coset_json(&coset, ga.p),
                }),
                vec![check("solution_verified", verified)],
            ))
        }
        SolveOutcome::Obstructed(o) => Ok((
            json!({
                "solvable": false,
                "obstruction": to_value(&o.coords),
            }),
            vec![check("obstruction_nonzero", !o.coords.is_empty())],
        )),
    }
}

fn lift(a: &LiftArgs) -> Outcome {
    let group = build_group(&a.group)?;
    if group.character().is_none() {
        return Err(flag("lifting needs a group with a character"));
    }
    let m1 = GModule::twist(&group, Zpm::new(a.group.p, a.group.m)?, 1)?;
    let (kx, ky) = pair(&a.pair, &group, &m1, ("1,0", "0,1"))?;
    match lift_pair(&group, &m1, &kx, &ky)? {
        LiftOutcome::Lifted { cocycle, coset, .. } => {
            let nonab = is_cocycle_nonab(&group, &cocycle)?;
            let back = cocycle.abelianize(&group, &m1) == (kx, ky);
            let table: Vec<Value> = cocycle
                .labeled(&group)
                .into_iter()
                .map(|(l, t)| json!([l, t]))
                .collect();
            Ok((
                json!({ "liftable": true, "cocycle": table, "coset": coset_json(&coset, a.group.p) }),
                vec![check("nonab_cocycle", nonab), check("abelianizes", back)],
            ))
        }
        LiftOutcome::Obstructed(o) => Ok((
            json!({ "liftable": false, "obstruction": to_value(&o.coords) }),
            vec![check("obstruction_nonzero", !o.coords.is_empty())],
        )),
    }
}

fn spectral(cmd: &SpectralCmd, ceiling: u32) -> Outcome {
    match cmd {
        SpectralCmd::Row0 { field: f, m, deg } => {
            let params = field(f)?;
            let m = m.unwrap_or(params.n());
            if m == 0 || m > params.n() {
                return Err(flag("need 1 ≤ m ≤ n"));
            }
            if *deg > 3 {
                return Err(flag("--deg must be at most 3"));
            }
            let h = e2_row0(params.p(), params.n(), m, *deg)?;
            Ok((
                json!({ "structure": h.to_string(), "invariants": h.invariants, "order": h.order().to_string() }),
                Vec::new(),
            ))
        }
        SpectralCmd::OnePlusP { field: f, deg } => {
            let params = field(f)?;
            if params.n() < 2 {
                return Err(flag("1+(p) needs --n ≥ 2"));
            }
            if *deg > 2 {
                return Err(flag("--deg must be at most 2"));
            }
            let r = one_plus_p_cohomology(params.p(), params.n(), *deg)?;
            let g = FiniteGroup::one_plus_p(params.p(), params.n(), params.n())?;
            let module = GModule::twist(&g, Zpm::new(params.p(), params.n())?, 2)?;
            let brute = brute_cohomology(&g, &module, *deg, DEFAULT_BRUTE_CEILING)?;
            Ok((
                json!({
                    "structure": r.structure.to_string(),
                    "invariants": r.structure.invariants,
                    "order": r.structure.order().to_string(),
                    "generators": r.by_generator.iter().map(|(g, _)| *g).collect::<Vec<_>>(),
                }),
                vec![
                    check("generator_independent", r.generator_independent),
                    check("bounded_by_p", r.bounded_by_p),
                    check("brute_force_agrees", brute == r.structure),
                ],
            ))
        }
        SpectralCmd::E11 {
            field: f,
            m,
            primes,
            bound,
            aux,
        } => {
            let params = field(f)?;
            if m.is_some_and(|m| m != params.n()) {
                return Err(Error::Unsupported("E^{1,1} with m < n".into()).into());
            }
            check_t(primes)?;
            aux_ctx(&params, aux)?;
            let opts = E11Options {
                seed: aux.seed,
                confidence: aux.confidence,
                aux_primes: aux.aux_primes,
                search_bound: *bound,
                precision_ceiling: ceiling,
            };
            let pres = e11_assemble(params.p(), params.n(), primes, None, &opts)?;
            let rep = e11_compute(&pres)?;
            let gens: Vec<Value> = pres
                .generators
                .iter()
                .map(|g| json!({ "label": g.label, "layer": to_value(&g.layer), "class": to_value(&g.class) }))
                .collect();
            let h = |s: &crate::cohomology::ModuleStructure| json!({ "structure": s.to_string(), "invariants": s.invariants });
            Ok((
                json!({
                    "generators": gens,
                    "group_generator": pres.group_generator,
                    "action": pres.action,
                    "relations": pres.relations,
                    "h0": h(&rep.h0),
                    "h1": h(&rep.h1),
                    "h2": h(&rep.h2),
                }),
                vec![
                    check("units_map_to_zero", pres.checks.units_map_to_zero),
                    check("primes_surject", pres.checks.primes_surject),
                    check("independent", pres.checks.independent),
                    check("star_equivariant", pres.checks.star_equivariant),
                ],
            ))
        }
    }
}

fn regular_check(a: &RegularArgs) -> Outcome {
    if a.p == 2 || !is_prime(a.p) {
        return Err(flag(format!("--p must be an odd prime, got {}", a.p)));
    }
    let r = is_regular(a.p)?;
    // Σ_{j ≤ k} C(k+1, j) B_j = 0 for every k up to p - 3
    let top = a.p.saturating_sub(3) as usize;
    let b = bernoulli_numbers(top);
    let recurrence = (1..=top).all(|k| {
        let mut binom = num_bigint::BigInt::from(1);
        let mut acc = num_rational::BigRational::from_integer(0.into());
        for (j, bj) in b.iter().enumerate().take(k + 1) {
            acc += num_rational::BigRational::from_integer(binom.clone()) * bj;
            binom = binom * num_bigint::BigInt::from(k + 1 - j) / num_bigint::BigInt::from(j + 1);
        }
        acc == num_rational::BigRational::from_integer(0.into())
    });
    Ok((to_value(&r), vec![check("recurrence", recurrence)]))
}

fn input_json(args: &[String]) -> Value {
    json!({ "argv": args })
}

fn render_text(report: &Value) -> String {
    let mut out = String::new();
    if let Some(obj) = report["result"].as_object() {
        for (k, v) in obj {
            out.push_str(&format!("{k}: {v}\n"));
        }
    }
    if let Some(err) = report.get("error") {
        out.push_str(&format!("error [{}]: {}\n", err["kind"], err["message"]));
    }
    if let Some(checks) = report["checks"].as_array() {
        for c in checks {
            let mark = if c["pass"].as_bool() == Some(true) { "PASS" } else { "FAIL" };
            out.push_str(&format!("{mark} {}\n", c["name"].as_str().unwrap_or("")));
        }
    }
    out
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit status together with the text written to stdout.
pub fn run(args: &[String]) -> (i32, String) {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return (code, String::new());
        }
    };
    let start = Instant::now();
    let outcome = precision_ceiling(cli.precision_ceiling).and_then(|ceiling| match &cli.command {
        Command::Units(c) => units(c),
        Command::Valuation(c) => valuation(c, ceiling),
        Command::Cohomology(a) => cohomology(a),
        Command::Coboundary(c) => coboundary_cmd(c),
        Command::Lift(a) => lift(a),
        Command::Spectral(c) => spectral(c, ceiling),
        Command::RegularCheck(a) => regular_check(a),
    });
    let timing_ms = start.elapsed().as_secs_f64() * 1e3;
    let input = input_json(&args[1..]);
    let (code, report) = match outcome {
        Ok((result, checks)) => {
            let pass = checks.iter().all(|c| c.pass);
            (
                if pass { 0 } else { 1 },
                json!({ "input": input, "result": result, "checks": to_value(&checks), "timing_ms": timing_ms }),
            )
        }
        Err(Failure::Flag(msg)) => (
            2,
            json!({ "input": input, "error": { "kind": "flag", "message": msg }, "checks": [], "timing_ms": timing_ms }),
        ),
        Err(Failure::Compute(e)) => (
            3,
            json!({ "input": input, "error": { "kind": e.kind(), "message": e.to_string() }, "checks": [], "timing_ms": timing_ms }),
        ),
    };
    let text = match cli.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&report).expect("serializable")),
        Format::Text => render_text(&report),
    };
    (code, text)
}
