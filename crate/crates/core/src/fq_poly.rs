//! Dense univariate polynomials over a prime field F_q, with equal-degree
//! splitting.
//!
//! Coefficients are stored low degree first and kept trimmed, so the zero
//! polynomial is the empty vector.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{add_mod, inv_mod, mul_mod, sub_mod};

pub type Poly = Vec<u64>;

pub fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[u64]) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub fn add(a: &[u64], b: &[u64], q: u64) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| add_mod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), q))
        .collect();
    trim(out)
}

pub fn sub(a: &[u64], b: &[u64], q: u64) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| sub_mod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), q))
        .collect();
    trim(out)
}

pub fn mul(a: &[u64], b: &[u64], q: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, q), q);
        }
    }
    trim(out)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn divrem(a: &[u64], b: &[u64], q: u64) -> (Poly, Poly) {
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = inv_mod(b[db], q).expect("leading coefficient invertible");
    let mut r = a.to_vec();
    if a.len() < b.len() {
        return (Vec::new(), trim(r));
    }
    let mut quo = vec![0u64; a.len() - db];
    for k in (0..quo.len()).rev() {
        let c = mul_mod(r[k + db], lead_inv, q);
        quo[k] = c;
        if c == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            r[k + j] = sub_mod(r[k + j], mul_mod(c, bj, q), q);
        }
    }
    r.truncate(db);
    (trim(quo), trim(r))
}

pub fn rem(a: &[u64], b: &[u64], q: u64) -> Poly {
    divrem(a, b, q).1
}

pub fn monic(a: &[u64], q: u64) -> Poly {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => {
            let inv = inv_mod(lc, q).expect("nonzero leading coefficient");
            a.iter().map(|&c| mul_mod(c, inv, q)).collect()
        }
    }
}

/// Monic gcd.
pub fn gcd(a: &[u64], b: &[u64], q: u64) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, q);
        x = y;
        y = r;
    }
    monic(&x, q)
}

pub fn mulmod(a: &[u64], b: &[u64], f: &[u64], q: u64) -> Poly {
    rem(&mul(a, b, q), f, q)
}

pub fn powmod(a: &[u64], e: &BigUint, f: &[u64], q: u64) -> Poly {
    let mut acc: Poly = vec![1];
    acc = rem(&acc, f, q);
    let base = rem(a, f, q);
    for i in (0..e.bits()).rev() {
        acc = mulmod(&acc, &acc, f, q);
        if e.bit(i) {
            acc = mulmod(&acc, &base, f, q);
        }
    }
    acc
}

/// Inverse of `a` in F_q[x]/(f), if `gcd(a, f) = 1`.
pub fn inv_mod_poly(a: &[u64], f: &[u64], q: u64) -> Option<Poly> {
    let (mut r0, mut r1) = (trim(f.to_vec()), rem(a, f, q));
    let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (quo, r) = divrem(&r0, &r1, q);
        let s = sub(&s0, &mul(&quo, &s1, q), q);
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s);
    }
    if degree(&r0) != Some(0) {
        return None;
    }
    let c = inv_mod(r0[0], q)?;
    Some(rem(&s0.iter().map(|&x| mul_mod(x, c, q)).collect::<Vec<_>>(), f, q))
}

/// Evaluates `a` at `x` in F_q.
pub fn eval(a: &[u64], x: u64, q: u64) -> u64 {
    a.iter()
        .rev()
        .fold(0u64, |acc, &c| add_mod(mul_mod(acc, x, q), c, q))
}

/// Splits a squarefree monic `f` whose irreducible factors all have degree
/// `d` (Cantor–Zassenhaus for odd q, trace splitting for q = 2). The output is
/// the sorted list of monic factors.
pub fn equal_degree_factors(f: &[u64], d: usize, q: u64, seed: u64) -> Vec<Poly> {
    let f = monic(f, q);
    let n = degree(&f).expect("nonzero polynomial");
    assert!(d > 0 && n % d == 0, "degree {n} not a multiple of {d}");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut stack = vec![f];
    while let Some(g) = stack.pop() {
        let dg = degree(&g).unwrap();
        if dg == d {
            out.push(g);
            continue;
        }
        loop {
            let a: Poly = trim((0..dg).map(|_| rng.gen_range(0..q)).collect());
            if a.is_empty() {
                continue;
            }
            let b = splitting_element(&a, d, &g, q);
            let h = gcd(&b, &g, q);
            let dh = degree(&h).unwrap_or(0);
            if dh > 0 && dh < dg {
                let (other, _) = divrem(&g, &h, q);
                stack.push(h);
                stack.push(monic(&other, q));
                break;
            }
        }
    }
    out.sort();
    out
}

fn splitting_element(a: &[u64], d: usize, g: &[u64], q: u64) -> Poly {
    if q == 2 {
        // trace from F_{2^d} to F_2
        let mut t = rem(a, g, q);
        let mut acc = t.clone();
        for _ in 1..d {
            t = mulmod(&t, &t, g, q);
            acc = add(&acc, &t, q);
        }
        acc
    } else {
        let e = (BigUint::from(q).pow(d as u32) - BigUint::one()) >> 1;
        let b = powmod(a, &e, g, q);
        sub(&b, &[1], q)
    }
}

/// Whether `a` is zero in F_q[x]/(f).
pub fn is_zero_mod(a: &[u64], f: &[u64], q: u64) -> bool {
    rem(a, f, q).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi5() -> Poly {
        vec![1, 1, 1, 1, 1]
    }

    #[test]
    fn divrem_reconstructs() {
        let q = 11;
        let a = vec![3, 0, 7, 1, 9, 2];
        let b = vec![5, 1, 4];
        let (quo, r) = divrem(&a, &b, q);
        assert_eq!(add(&mul(&quo, &b, q), &r, q), trim(a));
        assert!(r.len() < b.len());
    }

    #[test]
    fn cyclotomic_splits_mod_11() {
        let fs = equal_degree_factors(&phi5(), 1, 11, 1);
        let roots: Vec<u64> = fs.iter().map(|f| (11 - f[0]) % 11).collect();
        let mut sorted = roots.clone();
        sorted.sort();
        assert_eq!(sorted, vec![3, 4, 5, 9]);
    }

    #[test]
    fn cyclotomic_quadratic_mod_19() {
        let fs = equal_degree_factors(&phi5(), 2, 19, 3);
        assert_eq!(fs.len(), 2);
        assert_eq!(mul(&fs[0], &fs[1], 19), phi5());
    }

    #[test]
    fn characteristic_two_splitting() {
        // Φ_7 = (x^3 + x + 1)(x^3 + x^2 + 1) over F_2
        let phi7 = vec![1; 7];
        let fs = equal_degree_factors(&phi7, 3, 2, 9);
        assert_eq!(fs, vec![vec![1, 0, 1, 1], vec![1, 1, 0, 1]]);
    }

    #[test]
    fn inverse_mod_irreducible() {
        let f = vec![1, 1, 0, 1];
        let a = vec![0, 1, 1];
        let inv = inv_mod_poly(&a, &f, 2).unwrap();
        assert_eq!(mulmod(&a, &inv, &f, 2), vec![1]);
        assert!(inv_mod_poly(&[1, 1], &[1, 0, 1], 2).is_none());
    }

    #[test]
    fn eval_horner() {
        assert_eq!(eval(&phi5(), 3, 11), 0);
        assert_eq!(eval(&phi5(), 2, 11), 31 % 11);
    }
}
