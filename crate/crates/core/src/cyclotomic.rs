//! Exact arithmetic in `Z[ζ]` for `ζ` a primitive `p^n`-th root of unity.
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^{φ-1}` with
//! `φ = p^{n-1}(p-1)`, always reduced modulo the cyclotomic polynomial
//! `Φ_{p^n}(x) = Σ_{i<p} x^{i p^{n-1}}`. Since this basis is an integral basis
//! of the ring of integers, equality of elements is equality of coefficient
//! vectors and divisibility is coefficientwise integrality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, inv_mod, is_prime, mul_mod, reduce_i64, units_mod};
use crate::error::{Error, Result};

/// The prime power `p^n` defining the cyclotomic ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycParams {
    p: u64,
    n: u32,
    pn: u64,
    step: usize,
    degree: usize,
}

impl CycParams {
    /// `p` must be an odd prime and `n >= 1`.
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if p == 2 {
            return Err(Error::InvalidParams("p = 2 is not supported".into()));
        }
        if !is_prime(p) {
            return Err(Error::InvalidParams(format!("{p} is not prime")));
        }
        if n == 0 {
            return Err(Error::InvalidParams("level n must be at least 1".into()));
        }
        let pn = p
            .checked_pow(n)
            .filter(|&v| v < (1 << 20))
            .ok_or_else(|| Error::InvalidParams(format!("{p}^{n} is too large")))?;
        let step = (pn / p) as usize;
        Ok(Self {
            p,
            n,
            pn,
            step,
            degree: step * (p as usize - 1),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `p^n`, the order of `ζ`.
    pub fn pn(&self) -> u64 {
        self.pn
    }

    /// `φ(p^n)`, the rank of `Z[ζ]` over `Z`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients of `Φ_{p^n}`, low degree first.
    pub fn cyclotomic_poly(&self) -> Vec<i64> {
        let mut c = vec![0i64; self.degree + 1];
        for i in 0..self.p as usize {
            c[i * self.step] = 1;
        }
        c
    }

    /// Representatives of `(Z/p^n)^*` in increasing order.
    pub fn units(&self) -> Vec<GaloisElt> {
        units_mod(self.pn)
            .into_iter()
            .map(|a| GaloisElt { a, pn: self.pn })
            .collect()
    }

    /// Representatives `1 ≤ a < p^n/2` of `(Z/p^n)^*/⟨-1⟩`.
    pub fn units_mod_sign(&self) -> Vec<GaloisElt> {
        self.units()
            .into_iter()
            .filter(|g| 2 * g.a < self.pn)
            .collect()
    }

    pub fn galois(&self, a: i64) -> Result<GaloisElt> {
        GaloisElt::new(a, self)
    }

    /// The exponent `(1 - a)/2` read in `Z/p^n`.
    pub fn half_one_minus(&self, a: u64) -> u64 {
        let inv2 = inv_mod(2, self.pn).expect("p odd");
        mul_mod((1 + self.pn - a % self.pn) % self.pn, inv2, self.pn)
    }
}

impl fmt::Display for CycParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z[ζ_{}^{}]", self.p, self.n)
    }
}

/// An element `σ_a` of `Gal(Q(ζ)/Q) ≅ (Z/p^n)^*`, acting by `ζ ↦ ζ^a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaloisElt {
    a: u64,
    pn: u64,
}

impl GaloisElt {
    pub fn new(a: i64, params: &CycParams) -> Result<Self> {
        let a = reduce_i64(a, params.pn);
        if gcd(a, params.p) != 1 {
            return Err(Error::InvalidParams(format!(
                "{a} is not a unit modulo {}",
                params.pn
            )));
        }
        Ok(Self { a, pn: params.pn })
    }

    /// Residue in `[1, p^n)`.
    pub fn value(&self) -> u64 {
        self.a
    }

    pub fn modulus(&self) -> u64 {
        self.pn
    }

    pub fn compose(&self, other: &GaloisElt) -> GaloisElt {
        assert_eq!(self.pn, other.pn, "Galois elements of different levels");
        GaloisElt {
            a: mul_mod(self.a, other.a, self.pn),
            pn: self.pn,
        }
    }

    pub fn inverse(&self) -> GaloisElt {
        GaloisElt {
            a: inv_mod(self.a, self.pn).expect("unit"),
            pn: self.pn,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.a == 1
    }
}

/// An element of `Z[ζ_{p^n}]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycElt {
    params: CycParams,
    coeffs: Vec<BigInt>,
}

impl fmt::Debug for CycElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycElt({}: {})", self.params.pn, self)
    }
}

impl fmt::Display for CycElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "ζ")?,
                (1, false) => write!(f, "{mag}ζ")?,
                (_, true) => write!(f, "ζ^{i}")?,
                (_, false) => write!(f, "{mag}ζ^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl CycElt {
    /// Builds `Σ c_i ζ^i` from coefficients of any length, reducing as needed.
    pub fn from_coeffs(params: CycParams, coeffs: Vec<BigInt>) -> Self {
        let pn = params.pn as usize;
        let mut wide = vec![BigInt::zero(); pn];
        for (i, c) in coeffs.into_iter().enumerate() {
            wide[i % pn] += c;
        }
        Self::reduce_wide(params, wide)
    }

    pub fn from_i64s(params: CycParams, coeffs: &[i64]) -> Self {
        Self::from_coeffs(params, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(params: CycParams) -> Self {
        Self {
            params,
            coeffs: vec![BigInt::zero(); params.degree],
        }
    }

    pub fn one(params: CycParams) -> Self {
        Self::integer(params, BigInt::one())
    }

    pub fn integer(params: CycParams, c: impl Into<BigInt>) -> Self {
        let mut e = Self::zero(params);
        e.coeffs[0] = c.into();
        e
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta_pow(params: CycParams, k: i64) -> Self {
        let mut wide = vec![BigInt::zero(); params.pn as usize];
        wide[reduce_i64(k, params.pn) as usize] = BigInt::one();
        Self::reduce_wide(params, wide)
    }

    pub fn zeta(params: CycParams) -> Self {
        Self::zeta_pow(params, 1)
    }

    /// `π = 1 - ζ`, the uniformizer of the prime above `p`.
    pub fn pi(params: CycParams) -> Self {
        Self::from_i64s(params, &[1, -1])
    }

    /// Reduces a vector indexed by exponents `0..p^n` (i.e. an element of
    /// `Z[x]/(x^{p^n} - 1)`) modulo `Φ_{p^n}`.
    fn reduce_wide(params: CycParams, mut wide: Vec<BigInt>) -> Self {
        let (deg, step) = (params.degree, params.step);
        // x^{deg + r} = -Σ_{i<p-1} x^{r + i·step} for r < step
        for r in (0..step).rev() {
            let c = std::mem::take(&mut wide[deg + r]);
            if c.is_zero() {
                continue;
            }
            for i in 0..(params.p as usize - 1) {
                wide[r + i * step] -= &c;
            }
        }
        wide.truncate(deg);
        Self {
            params,
            coeffs: wide,
        }
    }

    pub fn params(&self) -> &CycParams {
        &self.params
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The integer `c` if `self = c`.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coeffs[0])
    }

    fn check(&self, other: &CycElt) -> Result<()> {
        if self.params != other.params {
            return Err(Error::ParamMismatch(format!(
                "{} vs {}",
                self.params, other.params
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &CycElt) -> Result<CycElt> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            params: self.params,
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &CycElt) -> Result<CycElt> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            params: self.params,
            coeffs,
        })
    }

    /// Product reduced modulo `Φ_{p^n}`.
    pub fn checked_mul(&self, other: &CycElt) -> Result<CycElt> {
        self.check(other)?;
        let pn = self.params.pn as usize;
        if let (Some(a), Some(b)) = (small_coeffs(&self.coeffs), small_coeffs(&other.coeffs)) {
            let mut wide = vec![0i128; pn];
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.iter().enumerate() {
                    let k = i + j;
                    let k = if k >= pn { k - pn } else { k };
                    wide[k] += x as i128 * y as i128;
                }
            }
            let wide = wide.into_iter().map(BigInt::from).collect();
            return Ok(Self::reduce_wide(self.params, wide));
        }
        let mut wide = vec![BigInt::zero(); pn];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                wide[(i + j) % pn] += x * y;
            }
        }
        Ok(Self::reduce_wide(self.params, wide))
    }

    pub fn scale(&self, c: &BigInt) -> CycElt {
        Self {
            params: self.params,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> CycElt {
        let mut acc = Self::one(self.params);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The ring automorphism `ζ ↦ ζ^a`.
    pub fn galois_apply(&self, sigma: &GaloisElt) -> CycElt {
        assert_eq!(sigma.pn, self.params.pn, "Galois element of wrong level");
        let pn = self.params.pn;
        let mut wide = vec![BigInt::zero(); pn as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                wide[mul_mod(i as u64, sigma.a, pn) as usize] += c;
            }
        }
        Self::reduce_wide(self.params, wide)
    }

    /// `∏_{a ≠ 1} σ_a(self)`, so that `self · conj_product = N(self)`.
    pub fn conj_product(&self) -> CycElt {
        let mut acc = Self::one(self.params);
        for g in self.params.units().into_iter().skip(1) {
            acc = &acc * &self.galois_apply(&g);
        }
        acc
    }

    /// The absolute norm `N_{Q(ζ)/Q}`, the product of all conjugates.
    pub fn abs_norm(&self) -> BigInt {
        if let Some(c) = self.as_integer() {
            return c.pow(self.params.degree as u32);
        }
        let full = &self.conj_product() * self;
        full.as_integer()
            .cloned()
            .expect("norm of an algebraic integer is rational")
    }

    /// The unique `q` with `q · divisor = self`, if it lies in `Z[ζ]`.
    pub fn div_exact(&self, divisor: &CycElt) -> Result<CycElt> {
        self.check(divisor)?;
        if divisor.is_zero() {
            return Err(Error::DivideByZero);
        }
        let (num, den) = match divisor.as_integer() {
            Some(c) => (self.clone(), c.clone()),
            None => {
                let conj = divisor.conj_product();
                let norm = (&conj * divisor)
                    .as_integer()
                    .cloned()
                    .expect("norm is rational");
                (self * &conj, norm)
            }
        };
        let mut out = Vec::with_capacity(num.coeffs.len());
        for c in &num.coeffs {
            let (q, r) = c.div_rem(&den);
            if !r.is_zero() {
                return Err(Error::NotDivisible);
            }
            out.push(q);
        }
        Ok(Self {
            params: self.params,
            coeffs: out,
        })
    }

    /// The image under `Z[ζ] → F_ℓ`, `ζ ↦ root`.
    pub fn eval_mod(&self, root: u64, ell: u64) -> u64 {
        let mut acc = 0u64;
        for c in self.coeffs.iter().rev() {
            let r = crate::arith::reduce_bigint(c, ell);
            acc = ((acc as u128 * root as u128 + r as u128) % ell as u128) as u64;
        }
        acc
    }

    /// Sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }
}

fn small_coeffs(c: &[BigInt]) -> Option<Vec<i64>> {
    const LIMIT: i64 = 1 << 40;
    c.iter()
        .map(|x| x.to_i64().filter(|v| v.abs() < LIMIT))
        .collect()
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&CycElt> for &CycElt {
            type Output = CycElt;
            fn $method(self, rhs: &CycElt) -> CycElt {
                self.$checked(rhs).expect("cyclotomic parameters must match")
            }
        }
        impl $tr<CycElt> for CycElt {
            type Output = CycElt;
            fn $method(self, rhs: CycElt) -> CycElt {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);

impl Neg for &CycElt {
    type Output = CycElt;
    fn neg(self) -> CycElt {
        CycElt {
            params: self.params,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycElt {
    type Output = CycElt;
    fn neg(self) -> CycElt {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct CycEltRepr {
    p: u64,
    n: u32,
    coeffs: Vec<String>,
}

impl Serialize for CycElt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycEltRepr {
            p: self.params.p,
            n: self.params.n,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycElt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = CycEltRepr::deserialize(d)?;
        let params = CycParams::new(repr.p, repr.n).map_err(D::Error::custom)?;
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(D::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(CycElt::from_coeffs(params, coeffs))
    }
}
