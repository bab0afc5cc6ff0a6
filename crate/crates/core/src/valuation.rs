//! Primes of `Z[ζ_{p^n}]` above rational primes, exact valuations, the
//! valuation-vector map and its Galois equivariance.
//!
//! For `q ≠ p` the prime `P = (q, g(ζ))` is read through the embedding
//! `ζ ↦ θ` into the unramified ring `Z_q[t]/(g̃)`, where `θ ≡ t` is the
//! Hensel lift of a root of `Φ`; then `v_P(x)` is the `q`-adic valuation of
//! `x(θ)`. The ramified prime above `p` is handled by repeated division by
//! `π = 1 - ζ`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::arith::{factor_biguint, is_prime, mult_order, reduce_bigint, val_biguint};
use crate::cyclotomic::{CycElt, CycParams, GaloisElt};
use crate::error::{Error, Result};
use crate::fq_poly::{self, Poly};
use crate::units::CycClass;

/// Default ceiling on the working precision `q^K`.
pub const DEFAULT_PRECISION_CEILING: u32 = 1024;

const START_PRECISION: u32 = 8;

/// A prime of `Z[ζ_{p^n}]` above `q`, given by a monic irreducible factor `g`
/// of `Φ_{p^n}` mod `q`. Above `p` the factor is `t - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimeAbove {
    params: CycParams,
    q: u64,
    g: Poly,
}

impl PrimeAbove {
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Coefficients of `g` mod `q`, low degree first.
    pub fn g(&self) -> &[u64] {
        &self.g
    }

    /// Residue degree.
    pub fn f(&self) -> usize {
        self.g.len() - 1
    }

    pub fn is_ramified(&self) -> bool {
        self.q == self.params.p()
    }

    pub fn params(&self) -> &CycParams {
        &self.params
    }

    /// For a split prime, the residue `c` with `ζ ≡ c mod P`.
    pub fn split_root(&self) -> Option<u64> {
        (self.f() == 1).then(|| (self.q - self.g[0]) % self.q)
    }

    fn sort_key(&self) -> (bool, u64, &[u64]) {
        (!self.is_ramified(), self.q, &self.g)
    }
}

impl Ord for PrimeAbove {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for PrimeAbove {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PrimeAbove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ramified() {
            return write!(f, "({}, 1-ζ)", self.q);
        }
        let g: Vec<String> = self.g.iter().map(u64::to_string).collect();
        write!(f, "({}, [{}])", self.q, g.join(","))
    }
}

impl Serialize for PrimeAbove {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PrimeAbove", 3)?;
        st.serialize_field("q", &self.q)?;
        st.serialize_field("g", &self.g)?;
        st.serialize_field("f", &self.f())?;
        st.end()
    }
}

fn phi_mod(params: &CycParams, q: u64) -> Poly {
    params
        .cyclotomic_poly()
        .iter()
        .map(|&c| crate::arith::reduce_i64(c, q))
        .collect()
}

/// All primes above `q`, sorted.
pub fn primes_above(params: &CycParams, q: u64) -> Result<Vec<PrimeAbove>> {
    if !is_prime(q) {
        return Err(Error::InvalidParams(format!("{q} is not prime")));
    }
    if q == params.p() {
        return Ok(vec![PrimeAbove {
            params: *params,
            q,
            g: vec![q - 1, 1],
        }]);
    }
    let f = mult_order(q % params.pn(), params.pn()) as usize;
    let factors = fq_poly::equal_degree_factors(&phi_mod(params, q), f, q, 0);
    let mut out: Vec<PrimeAbove> = factors
        .into_iter()
        .map(|g| PrimeAbove {
            params: *params,
            q,
            g,
        })
        .collect();
    out.sort();
    Ok(out)
}

/// All primes above a set of rational primes, in canonical order.
pub fn primes_above_set(params: &CycParams, t: &[u64]) -> Result<Vec<PrimeAbove>> {
    let mut out = Vec::new();
    for &q in t {
        out.extend(primes_above(params, q)?);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// `Z/q^K [t]/(g̃)` with `g̃` the lift of `g` with coefficients in `[0, q)`.
struct Unramified {
    q: u64,
    modulus: BigInt,
    g: Vec<BigInt>,
    g_mod_q: Poly,
    precision: u32,
}

type WElt = Vec<BigInt>;

impl Unramified {
    fn new(q: u64, g: &[u64], precision: u32) -> Self {
        Self {
            q,
            modulus: BigInt::from(q).pow(precision),
            g: g.iter().map(|&c| BigInt::from(c)).collect(),
            g_mod_q: g.to_vec(),
            precision,
        }
    }

    fn f(&self) -> usize {
        self.g.len() - 1
    }

    fn reduce(&self, mut a: Vec<BigInt>) -> WElt {
        let f = self.f();
        for k in (f..a.len()).rev() {
            let c = std::mem::take(&mut a[k]);
            if c.is_zero() {
                continue;
            }
            for j in 0..f {
                a[k - f + j] -= &c * &self.g[j];
            }
        }
        a.truncate(f);
        a.resize(f, BigInt::zero());
        for c in a.iter_mut() {
            *c = c.mod_floor(&self.modulus);
        }
        a
    }

    fn mul(&self, a: &WElt, b: &WElt) -> WElt {
        let mut out = vec![BigInt::zero(); 2 * self.f()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        self.reduce(out)
    }

    fn sub(&self, a: &WElt, b: &WElt) -> WElt {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).mod_floor(&self.modulus))
            .collect()
    }

    fn constant(&self, c: &BigInt) -> WElt {
        let mut v = vec![BigInt::zero(); self.f()];
        v[0] = c.mod_floor(&self.modulus);
        v
    }

    fn t(&self) -> WElt {
        self.reduce(vec![BigInt::zero(), BigInt::one()])
    }

    fn eval(&self, coeffs: &[BigInt], theta: &WElt) -> WElt {
        let mut acc = vec![BigInt::zero(); self.f()];
        for c in coeffs.iter().rev() {
            acc = self.mul(&acc, theta);
            acc[0] = (&acc[0] + c).mod_floor(&self.modulus);
        }
        acc
    }

    fn newton_steps(&self) -> u32 {
        32 - self.precision.leading_zeros() + 1
    }

    fn inverse(&self, u: &WElt) -> WElt {
        let u_mod_q: Poly = fq_poly::trim(u.iter().map(|c| reduce_bigint(c, self.q)).collect());
        let v0 = fq_poly::inv_mod_poly(&u_mod_q, &self.g_mod_q, self.q).expect("unit in W");
        let mut v: WElt = (0..self.f())
            .map(|i| BigInt::from(*v0.get(i).unwrap_or(&0)))
            .collect();
        let two = self.constant(&BigInt::from(2));
        for _ in 0..self.newton_steps() {
            v = self.mul(&v, &self.sub(&two, &self.mul(u, &v)));
        }
        v
    }

    /// The root `θ ≡ t` of `Φ` to full precision.
    fn root_of(&self, phi: &[BigInt]) -> WElt {
        let dphi: Vec<BigInt> = phi
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        let mut theta = self.t();
        for _ in 0..self.newton_steps() {
            let num = self.eval(phi, &theta);
            let den = self.eval(&dphi, &theta);
            theta = self.sub(&theta, &self.mul(&num, &self.inverse(&den)));
        }
        theta
    }
}

fn valuation_of(w: &WElt, q: u64) -> Option<u32> {
    w.iter()
        .filter(|c| !c.is_zero())
        .map(|c| val_biguint(c.magnitude(), q))
        .min()
}

/// `v_P(x)` for an unramified `P`, raising the precision on demand up to
/// `q^ceiling`.
pub fn val_at(x: &CycElt, prime: &PrimeAbove, ceiling: u32) -> Result<u32> {
    check_params(x, prime)?;
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    if prime.is_ramified() {
        return pi_val(x);
    }
    let phi: Vec<BigInt> = prime
        .params
        .cyclotomic_poly()
        .into_iter()
        .map(BigInt::from)
        .collect();
    let mut k = START_PRECISION.min(ceiling.max(1));
    loop {
        let w = Unramified::new(prime.q, &prime.g, k);
        let theta = w.root_of(&phi);
        if let Some(v) = valuation_of(&w.eval(x.coeffs(), &theta), prime.q) {
            return Ok(v);
        }
        if k >= ceiling {
            return Err(Error::PrecisionCeiling { ceiling });
        }
        k = (2 * k).min(ceiling);
    }
}

fn check_params(x: &CycElt, prime: &PrimeAbove) -> Result<()> {
    if x.params() != &prime.params {
        return Err(Error::ParamMismatch(format!(
            "element of {} at a prime of {}",
            x.params(),
            prime.params
        )));
    }
    Ok(())
}

/// Valuation at the ramified prime `(1 - ζ)`.
pub fn pi_val(x: &CycElt) -> Result<u32> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    let params = *x.params();
    let p = BigInt::from(params.p());
    let phi: Vec<BigInt> = params
        .cyclotomic_poly()
        .into_iter()
        .map(BigInt::from)
        .collect();
    let mut cur: Vec<BigInt> = x.coeffs().to_vec();
    let mut v = 0;
    loop {
        let at_one: BigInt = cur.iter().sum();
        if !at_one.is_multiple_of(&p) {
            return Ok(v);
        }
        // subtract a multiple of Φ so that the polynomial vanishes at 1,
        // then divide by (t - 1)
        let c = at_one / &p;
        let mut y: Vec<BigInt> = phi.clone();
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = cur.get(i).cloned().unwrap_or_default() - &c * &*yi;
        }
        let deg = y.len() - 1;
        let mut z = vec![BigInt::zero(); deg];
        let mut carry = BigInt::zero();
        for i in (0..deg).rev() {
            carry += &y[i + 1];
            z[i] = carry.clone();
        }
        debug_assert!((carry + &y[0]).is_zero());
        // x / (1 - ζ) = -z(ζ)
        cur = z.into_iter().map(|c| -c).collect();
        v += 1;
    }
}

/// A vector indexed by the primes above `T`, in canonical prime order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationVector {
    pn: u64,
    entries: Vec<(PrimeAbove, u64)>,
}

impl ValuationVector {
    pub fn new(pn: u64, entries: Vec<(PrimeAbove, u64)>) -> Self {
        let mut entries: Vec<_> = entries.into_iter().map(|(p, v)| (p, v % pn)).collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        Self { pn, entries }
    }

    pub fn entries(&self) -> &[(PrimeAbove, u64)] {
        &self.entries
    }

    pub fn values(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.1).collect()
    }

    pub fn get(&self, prime: &PrimeAbove) -> Option<u64> {
        self.entries
            .binary_search_by(|e| e.0.cmp(prime))
            .ok()
            .map(|i| self.entries[i].1)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.1 == 0)
    }

    /// `(α ⋆ b)_P = α^{-1} b_{α(P)}`, with `α(P)` the image ideal.
    pub fn star(&self, alpha: &GaloisElt) -> Result<ValuationVector> {
        let inv = alpha.inverse().value();
        let mut out = Vec::with_capacity(self.entries.len());
        for (prime, _) in &self.entries {
            let image = galois_on_prime(alpha, prime)?;
            let b = self.get(&image).ok_or_else(|| {
                Error::InvalidParams(format!("prime {image} outside the index set"))
            })?;
            out.push((prime.clone(), crate::arith::mul_mod(b, inv, self.pn)));
        }
        Ok(ValuationVector::new(self.pn, out))
    }
}

impl Serialize for ValuationVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.entries.iter())
    }
}

/// Valuations at every prime above `T`, reduced mod `p^n`.
pub fn val_vector(x: &CycElt, t: &[u64], ceiling: u32) -> Result<ValuationVector> {
    let params = *x.params();
    let mut entries = Vec::new();
    for prime in primes_above_set(&params, t)? {
        let v = val_at(x, &prime, ceiling)?;
        entries.push((prime, v as u64 % params.pn()));
    }
    Ok(ValuationVector::new(params.pn(), entries))
}

/// Valuation vector of a formal product.
pub fn val_vector_class(c: &CycClass, t: &[u64], ceiling: u32) -> Result<ValuationVector> {
    let params = *c.params();
    let pn = params.pn();
    let primes = primes_above_set(&params, t)?;
    let mut acc = vec![0u64; primes.len()];
    for (b, e) in c.factors() {
        for (slot, prime) in primes.iter().enumerate() {
            let v = val_at(b, prime, ceiling)? as i128 * *e as i128;
            acc[slot] = ((acc[slot] as i128 + v).rem_euclid(pn as i128)) as u64;
        }
    }
    Ok(ValuationVector::new(pn, primes.into_iter().zip(acc).collect()))
}

/// Whether `v(x) ≡ 0 mod p^n` at every prime outside `T`.
pub fn is_in_e(x: &CycElt, t: &[u64], factor_bound: u64, ceiling: u32) -> Result<bool> {
    if x.is_zero() {
        return Err(Error::ZeroInput);
    }
    let params = *x.params();
    let pn = params.pn() as u32;
    let norm = x.abs_norm().magnitude().clone();
    for (ell, _) in factor_biguint(&norm, factor_bound)? {
        if t.contains(&ell) {
            continue;
        }
        for prime in primes_above(&params, ell)? {
            if val_at(x, &prime, ceiling)? % pn != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The image ideal `α(P)`. For a split prime `P_c` this is `P_{c^{α^{-1}}}`.
pub fn galois_on_prime(alpha: &GaloisElt, prime: &PrimeAbove) -> Result<PrimeAbove> {
    if prime.is_ramified() || alpha.is_identity() {
        return Ok(prime.clone());
    }
    let q = prime.q;
    // ζ^α ≡ t in F_q[t]/(g), so ζ ≡ t^{α^{-1}} there
    let e = num_bigint::BigUint::from(alpha.inverse().value());
    let image = fq_poly::powmod(&[0, 1], &e, &prime.g, q);
    primes_above(&prime.params, q)?
        .into_iter()
        .find(|h| fq_poly::is_zero_mod(&compose(&h.g, &image, &prime.g, q), &prime.g, q))
        .ok_or_else(|| Error::InvalidParams(format!("no image for prime {prime}")))
}

/// `h(a)` in `F_q[t]/(g)`.
fn compose(h: &[u64], a: &[u64], g: &[u64], q: u64) -> Poly {
    let mut acc: Poly = Vec::new();
    for &c in h.iter().rev() {
        acc = fq_poly::add(&fq_poly::mulmod(&acc, a, g, q), &[c], q);
    }
    acc
}

/// Result of a bounded generator search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorSearch {
    /// `u` has valuation `h` (prime to `p`) at `P` and nowhere else.
    Found { u: CycElt, h: u32 },
    NotFound,
}

/// Largest power `h` of the prime tried by the search.
const MAX_GENERATOR_POWER: u32 = 4;

/// Searches the coefficient box `[-bound, bound]^φ`, in shells of growing
/// sup-norm, for an element whose divisor is `h·P` with `gcd(h, p) = 1`.
pub fn prime_generator_search(
    prime: &PrimeAbove,
    bound: i64,
    ceiling: u32,
) -> Result<GeneratorSearch> {
    let params = prime.params;
    if prime.is_ramified() {
        return Ok(GeneratorSearch::Found {
            u: CycElt::pi(params),
            h: 1,
        });
    }
    let q = prime.q;
    if prime.f() == params.degree() {
        return Ok(GeneratorSearch::Found {
            u: CycElt::integer(params, q),
            h: 1,
        });
    }
    let d = params.degree();
    let qb = BigInt::from(q);
    for shell in 1..=bound {
        let mut coeffs = vec![-shell; d];
        loop {
            if coeffs.iter().any(|c| c.abs() == shell) {
                if let Some(h) = candidate_power(&coeffs, prime, &qb, ceiling)? {
                    return Ok(GeneratorSearch::Found {
                        u: CycElt::from_i64s(params, &coeffs),
                        h,
                    });
                }
            }
            if !next_in_box(&mut coeffs, shell) {
                break;
            }
        }
    }
    Ok(GeneratorSearch::NotFound)
}

fn next_in_box(c: &mut [i64], shell: i64) -> bool {
    for x in c.iter_mut() {
        if *x < shell {
            *x += 1;
            return true;
        }
        *x = -shell;
    }
    false
}

fn candidate_power(
    coeffs: &[i64],
    prime: &PrimeAbove,
    qb: &BigInt,
    ceiling: u32,
) -> Result<Option<u32>> {
    let q = prime.q;
    let reduced: Poly = fq_poly::trim(
        coeffs
            .iter()
            .map(|&c| crate::arith::reduce_i64(c, q))
            .collect(),
    );
    if !fq_poly::is_zero_mod(&reduced, &prime.g, q) {
        return Ok(None);
    }
    let x = CycElt::from_i64s(prime.params, coeffs);
    let norm = x.abs_norm().abs();
    let f = prime.f() as u32;
    let p = prime.params.p();
    for h in (1..=MAX_GENERATOR_POWER).filter(|h| h % p as u32 != 0) {
        if norm == qb.pow(f * h) {
            return Ok((val_at(&x, prime, ceiling)? == h).then_some(h));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::DEFAULT_FACTOR_BOUND;
    use crate::units::xi;
    use proptest::prelude::*;

    const CEIL: u32 = DEFAULT_PRECISION_CEILING;

    fn params(p: u64, n: u32) -> CycParams {
        CycParams::new(p, n).unwrap()
    }

    fn split_prime(pr: &CycParams, q: u64, c: u64) -> PrimeAbove {
        primes_above(pr, q)
            .unwrap()
            .into_iter()
            .find(|pa| pa.split_root() == Some(c))
            .unwrap()
    }

    #[test]
    fn primes_above_examples() {
        let pr = params(5, 1);
        let ps = primes_above(&pr, 11).unwrap();
        assert_eq!(ps.len(), 4);
        let mut roots: Vec<u64> = ps.iter().map(|p| p.split_root().unwrap()).collect();
        roots.sort();
        assert_eq!(roots, vec![3, 4, 5, 9]);
        let two = primes_above(&pr, 2).unwrap();
        assert_eq!((two.len(), two[0].f()), (1, 4));
        let ps19 = primes_above(&pr, 19).unwrap();
        assert_eq!(ps19.len(), 2);
        assert!(ps19.iter().all(|p| p.f() == 2));
        assert!(primes_above(&pr, 5).unwrap()[0].is_ramified());
    }

    #[test]
    fn valuation_examples() {
        let pr = params(5, 1);
        for prime in primes_above(&pr, 11).unwrap() {
            assert_eq!(val_at(&CycElt::integer(pr, 11), &prime, CEIL).unwrap(), 1);
            assert_eq!(val_at(&CycElt::one(pr), &prime, CEIL).unwrap(), 0);
        }
        let x = CycElt::from_i64s(pr, &[3, -1]);
        let vv = val_vector(&x, &[11], CEIL).unwrap();
        let in_root_order: Vec<u64> = [3, 9, 5, 4]
            .iter()
            .map(|&c| vv.get(&split_prime(&pr, 11, c)).unwrap())
            .collect();
        assert_eq!(in_root_order, vec![2, 0, 0, 0]);
        let u = xi(&pr, &pr.galois(2).unwrap());
        assert!(val_vector(&u, &[11], CEIL).unwrap().is_zero());
        assert_eq!(
            val_at(&CycElt::zero(pr), &split_prime(&pr, 11, 3), CEIL),
            Err(Error::ZeroInput)
        );
    }

    #[test]
    fn precision_ceiling_reported() {
        let pr = params(5, 1);
        let big = CycElt::integer(pr, BigInt::from(11).pow(40));
        let prime = split_prime(&pr, 11, 3);
        assert_eq!(
            val_at(&big, &prime, 16),
            Err(Error::PrecisionCeiling { ceiling: 16 })
        );
        assert_eq!(val_at(&big, &prime, CEIL).unwrap(), 40);
    }

    #[test]
    fn pi_valuation_examples() {
        let pr = params(5, 1);
        assert_eq!(pi_val(&CycElt::pi(pr)).unwrap(), 1);
        assert_eq!(pi_val(&CycElt::integer(pr, 5)).unwrap(), 4);
        assert_eq!(pi_val(&CycElt::zeta(pr)).unwrap(), 0);
        // repeated exact division as an independent oracle
        let p9 = params(3, 2);
        let x = &CycElt::integer(p9, 3) * &CycElt::pi(p9).pow(2);
        let mut cur = x.clone();
        let mut count = 0;
        while let Ok(next) = cur.div_exact(&CycElt::pi(p9)) {
            cur = next;
            count += 1;
        }
        assert_eq!(pi_val(&x).unwrap(), count);
        assert_eq!(count, 8);
    }

    #[test]
    fn membership_in_e() {
        let pr = params(5, 1);
        let u = xi(&pr, &pr.galois(2).unwrap());
        assert!(is_in_e(&u, &[11], DEFAULT_FACTOR_BOUND, CEIL).unwrap());
        assert!(!is_in_e(&CycElt::integer(pr, 2), &[11], DEFAULT_FACTOR_BOUND, CEIL).unwrap());
        assert!(is_in_e(&CycElt::integer(pr, 32), &[11], DEFAULT_FACTOR_BOUND, CEIL).unwrap());
        assert!(!is_in_e(&CycElt::pi(pr), &[11], DEFAULT_FACTOR_BOUND, CEIL).unwrap());
        assert!(is_in_e(&CycElt::pi(pr), &[5], DEFAULT_FACTOR_BOUND, CEIL).unwrap());
    }

    #[test]
    fn galois_on_primes() {
        let pr = params(5, 1);
        let two = pr.galois(2).unwrap();
        let p3 = split_prime(&pr, 11, 3);
        assert_eq!(galois_on_prime(&two, &p3).unwrap(), split_prime(&pr, 11, 5));
        assert_eq!(galois_on_prime(&pr.galois(1).unwrap(), &p3).unwrap(), p3);
        let mut orbit = vec![p3.clone()];
        let mut cur = p3.clone();
        loop {
            cur = galois_on_prime(&two, &cur).unwrap();
            if cur == p3 {
                break;
            }
            orbit.push(cur.clone());
        }
        assert_eq!(orbit.len(), 4);
    }

    #[test]
    fn generator_search_examples() {
        let p5 = params(5, 1);
        let inert = &primes_above(&p5, 2).unwrap()[0];
        assert_eq!(
            prime_generator_search(inert, 2, CEIL).unwrap(),
            GeneratorSearch::Found {
                u: CycElt::integer(p5, 2),
                h: 1
            }
        );
        let p3 = params(3, 1);
        let p4 = split_prime(&p3, 7, 4);
        let u = CycElt::from_i64s(p3, &[3, 1]);
        assert_eq!(u.abs_norm(), BigInt::from(7));
        assert_eq!(val_at(&u, &p4, CEIL).unwrap(), 1);
        match prime_generator_search(&p4, 3, CEIL).unwrap() {
            GeneratorSearch::Found { u, h } => {
                let vv = val_vector(&u, &[7], CEIL).unwrap();
                assert_eq!(vv.get(&p4), Some(h as u64));
                assert_eq!(vv.values().iter().filter(|&&v| v != 0).count(), 1);
            }
            GeneratorSearch::NotFound => panic!("3 + ζ lies in the box"),
        }
        let target = split_prime(&p5, 11, 3);
        match prime_generator_search(&target, 3, CEIL).unwrap() {
            GeneratorSearch::Found { u, h } => {
                assert_eq!(h, 1);
                assert_eq!(u.abs_norm().abs(), BigInt::from(11));
                assert_eq!(val_at(&u, &target, CEIL).unwrap(), 1);
            }
            GeneratorSearch::NotFound => panic!("generator expected in box 3"),
        }
    }

    fn elt(pr: CycParams) -> impl Strategy<Value = CycElt> {
        proptest::collection::vec(-10i64..=10, pr.degree())
            .prop_filter("nonzero", |c| c.iter().any(|&x| x != 0))
            .prop_map(move |c| CycElt::from_i64s(pr, &c))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn norm_sum_formula(x in elt(params(5, 1)), q in prop::sample::select(vec![2u64, 3, 11, 19, 31, 41])) {
            let pr = *x.params();
            let norm = x.abs_norm().magnitude().clone();
            let lhs: u32 = primes_above(&pr, q).unwrap().iter()
                .map(|pa| pa.f() as u32 * val_at(&x, pa, CEIL).unwrap())
                .sum();
            prop_assert_eq!(lhs, val_biguint(&norm, q));
        }

        #[test]
        fn equivariance(x in elt(params(5, 1)), a in 1i64..5) {
            let pr = *x.params();
            let alpha = pr.galois(a).unwrap();
            for prime in primes_above(&pr, 11).unwrap() {
                let image = galois_on_prime(&alpha, &prime).unwrap();
                prop_assert_eq!(
                    val_at(&x.galois_apply(&alpha), &image, CEIL).unwrap(),
                    val_at(&x, &prime, CEIL).unwrap()
                );
            }
        }
    }
}
