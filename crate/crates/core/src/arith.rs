//! Word-sized modular arithmetic, primality, factoring and unit-group helpers.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    let (a, b) = (a % m, b % m);
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

#[inline]
pub fn neg_mod(a: u64, m: u64) -> u64 {
    if a % m == 0 {
        0
    } else {
        m - a % m
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduces a signed integer into `[0, m)`.
#[inline]
pub fn reduce_i64(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

pub fn reduce_bigint(a: &BigInt, m: u64) -> u64 {
    let r = a.mod_floor(&BigInt::from(m));
    r.to_u64().expect("residue fits in u64")
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Exponent of `p` in `n`; `n` must be nonzero.
pub fn val_u64(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0 && p > 1);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

pub fn val_biguint(n: &BigUint, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let p = BigUint::from(p);
    let mut v = 0;
    let mut n = n.clone();
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &b in &MR_BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Pollard–Brent rho; `n` must be odd and composite.
fn rho_split(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| add_mod(mul_mod(x, x, n), c, n);
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    if n % 2 == 0 {
        out.push(2);
        factor_into(n / 2, out);
        return;
    }
    let d = rho_split(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

/// Complete factorization as sorted `(prime, exponent)` pairs.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    let mut raw = Vec::new();
    let mut m = n;
    for p in [2u64, 3, 5, 7, 11, 13] {
        while m % p == 0 && m > 1 {
            raw.push(p);
            m /= p;
        }
    }
    factor_into(m, &mut raw);
    collect_powers(raw)
}

fn collect_powers(mut raw: Vec<u64>) -> Vec<(u64, u32)> {
    raw.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in raw {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Default bound for the cofactor left after trial division.
pub const DEFAULT_FACTOR_BOUND: u64 = u64::MAX;

const TRIAL_LIMIT: u64 = 1 << 16;

/// Factors a big integer: trial division up to 2^16, then rho on a cofactor
/// that must not exceed `bound`.
pub fn factor_biguint(n: &BigUint, bound: u64) -> Result<Vec<(u64, u32)>> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut m = n.clone();
    let mut raw = Vec::new();
    let mut d = 2u64;
    while d < TRIAL_LIMIT {
        if m.to_u64().is_some_and(|v| v < d.saturating_mul(d)) {
            break;
        }
        let bd = BigUint::from(d);
        loop {
            let (q, r) = m.div_rem(&bd);
            if !r.is_zero() {
                break;
            }
            raw.push(d);
            m = q;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    match m.to_u64() {
        Some(v) if v <= bound => factor_into(v, &mut raw),
        _ => {
            return Err(Error::FactoringFailure {
                value: n.to_string(),
                cofactor: m.to_string(),
                bound: bound.to_string(),
            })
        }
    }
    Ok(collect_powers(raw))
}

/// Multiplicative order of `a` modulo `m` (`gcd(a, m) = 1`).
pub fn mult_order(a: u64, m: u64) -> u64 {
    let phi = totient(m);
    let mut ord = phi;
    for (q, _) in factor_u64(phi) {
        while ord % q == 0 && pow_mod(a, ord / q, m) == 1 {
            ord /= q;
        }
    }
    ord
}

pub fn totient(m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    factor_u64(m)
        .into_iter()
        .fold(1, |acc, (q, e)| acc * (q - 1) * q.pow(e - 1))
}

/// Smallest generator of the cyclic group `(Z/m)^*`, if it is cyclic.
pub fn smallest_primitive_root(m: u64) -> Option<u64> {
    if m <= 2 {
        return Some(m - 1);
    }
    let phi = totient(m);
    (2..m).find(|&g| gcd(g, m) == 1 && mult_order(g, m) == phi)
}

/// The elements of `(Z/m)^*` in increasing order.
pub fn units_mod(m: u64) -> Vec<u64> {
    (1..m).filter(|&a| gcd(a, m) == 1).collect()
}

/// The p-adic exponential `e^p` reduced modulo `p^n` (p odd), a generator of
/// the subgroup `1 + (p)` of `(Z/p^n)^*`.
pub fn exp_p_mod(p: u64, n: u32) -> u64 {
    let modulus = p.pow(n);
    let mut acc = BigInt::zero();
    let mut fact = BigInt::one();
    let mut ppow = BigInt::one();
    let big_mod = BigInt::from(modulus);
    // v_p(p^k / k!) >= k (p-2)/(p-1) grows without bound; terms up to k = 2n + 3 suffice.
    for k in 0..(2 * n as u64 + 4) {
        if k > 0 {
            fact *= k;
            ppow *= p;
        }
        let g = ppow.gcd(&fact);
        let num = &ppow / &g;
        let den = &fact / &g;
        let den_res = reduce_bigint(&den, modulus);
        let inv = inv_mod(den_res, modulus).expect("denominator prime to p");
        acc += (num % &big_mod) * BigInt::from(inv);
    }
    reduce_bigint(&acc, modulus)
}

/// Integer `b^e` as u64, panicking on overflow.
pub fn ipow(b: u64, e: u32) -> u64 {
    b.checked_pow(e).expect("integer power overflow")
}
