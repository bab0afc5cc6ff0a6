//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use cyclocohom::cohomology::FiniteGroup;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// `v_q(n)` for a nonzero integer.
pub fn v_int(n: &BigInt, q: u64) -> u32 {
    let q = BigInt::from(q);
    let mut n = n.abs();
    let mut v = 0;
    while !n.is_zero() && n.is_multiple_of(&q) {
        n /= &q;
        v += 1;
    }
    v
}

/// `B_0 … B_k` by the Akiyama–Tanigawa algorithm, with `B_1 = -1/2`.
pub fn bernoulli_akiyama_tanigawa(k: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(k + 1);
    let mut a: Vec<BigRational> = Vec::with_capacity(k + 1);
    for m in 0..=k {
        a.push(BigRational::new(1.into(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            let diff = &a[j - 1] - &a[j];
            a[j - 1] = diff * BigRational::from_integer(BigInt::from(j));
        }
        out.push(a[0].clone());
    }
    if k >= 1 {
        out[1] = -out[1].clone();
    }
    out
}

/// Plain Heisenberg law `(x,y,z)(x',y',z') = (x+x', y+y', z+z'+xy')` mod `q`.
pub fn heis(a: [u64; 3], b: [u64; 3], q: u64) -> [u64; 3] {
    [(a[0] + b[0]) % q, (a[1] + b[1]) % q, (a[2] + b[2] + a[0] * b[1]) % q]
}

pub fn heis_twist(chi: u64, a: [u64; 3], q: u64) -> [u64; 3] {
    [chi * a[0] % q, chi * a[1] % q, chi * chi % q * a[2] % q]
}

/// Whether `κ(στ) = κ(σ) · σκ(τ)` for all pairs.
pub fn nonab_cocycle(group: &FiniteGroup, kappa: &[[u64; 3]], q: u64) -> bool {
    let n = group.order();
    (0..n).all(|s| {
        (0..n).all(|t| {
            let chi = group.chi(s).unwrap();
            kappa[group.mul(s, t)] == heis(kappa[s], heis_twist(chi, kappa[t], q), q)
        })
    })
}

/// Decides whether `α(στ) − σα(τ) − α(σ) = c(σ, τ)` has a solution with
/// values in `Z/q(2)`. `α` is fixed by its values on `gens` via
/// `α(sg) = c(s, g) + sα(g) + α(s)`; each choice is propagated by breadth
/// first search and then checked on all pairs.
pub fn solvable_by_propagation(
    group: &FiniteGroup,
    gens: &[usize],
    c: &dyn Fn(usize, usize) -> u64,
    q: u64,
) -> Option<Vec<u64>> {
    let n = group.order();
    let act = |s: usize, v: u64| group.chi(s).unwrap() * group.chi(s).unwrap() % q * v % q;
    let choices = q.pow(gens.len() as u32);
    'choice: for code in 0..choices {
        let mut on_gens = Vec::new();
        let mut t = code;
        for _ in gens {
            on_gens.push(t % q);
            t /= q;
        }
        let mut alpha: Vec<Option<u64>> = vec![None; n];
        alpha[group.identity()] = Some(0);
        let mut queue = std::collections::VecDeque::from([group.identity()]);
        while let Some(g) = queue.pop_front() {
            for (&s, &as_) in gens.iter().zip(&on_gens) {
                let sg = group.mul(s, g);
                let v = (c(s, g) + act(s, alpha[g].unwrap()) + as_) % q;
                match alpha[sg] {
                    None => {
                        alpha[sg] = Some(v);
                        queue.push_back(sg);
                    }
                    Some(w) if w != v => continue 'choice,
                    Some(_) => {}
                }
            }
        }
        let alpha: Vec<u64> = alpha.into_iter().map(|a| a.expect("gens generate")).collect();
        let ok = (0..n).all(|s| {
            (0..n).all(|t| (alpha[group.mul(s, t)] + 2 * q - act(s, alpha[t]) - alpha[s]) % q == c(s, t) % q)
        });
        if ok {
            return Some(alpha);
        }
    }
    None
}
