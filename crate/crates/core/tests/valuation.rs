//! Valuations checked against brute-force residue maps and exact norms.

use cyclocohom::arith::{mult_order, pow_mod};
use cyclocohom::cyclotomic::{CycElt, CycParams};
use cyclocohom::units::{twisted_act, xi_class, CycClass, Convention};
use cyclocohom::valuation::*;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CEIL: u32 = DEFAULT_PRECISION_CEILING;

fn random_elt(params: CycParams, rng: &mut ChaCha8Rng, bound: i64) -> CycElt {
    loop {
        let c: Vec<i64> = (0..params.degree()).map(|_| rng.gen_range(-bound..=bound)).collect();
        let x = CycElt::from_i64s(params, &c);
        if !x.is_zero() {
            return x;
        }
    }
}

fn v_int(n: &BigInt, q: u64) -> u32 {
    let q = BigInt::from(q);
    let mut n = n.abs();
    let mut v = 0;
    while !n.is_zero() && n.is_multiple_of(&q) {
        n /= &q;
        v += 1;
    }
    v
}

/// Evaluates `x` at `t` modulo `m`.
fn eval_mod(x: &CycElt, t: u64, m: u64) -> u64 {
    let mut acc = 0u128;
    let mut pw = 1u128;
    for c in x.coeffs() {
        let c = c.mod_floor(&BigInt::from(m)).to_u64().unwrap() as u128;
        acc = (acc + c * pw) % m as u128;
        pw = pw * t as u128 % m as u128;
    }
    acc as u64
}

/// For a split prime `(q, ζ − r)`: `v_P(x) = max k` with `x(r_k) ≡ 0 mod q^k`,
/// where `r_k ≡ r mod q` is found by exhaustive search among the roots of
/// `t^{p^n} = 1` of exact order `p^n` mod `q^k`.
fn split_valuation_oracle(x: &CycElt, q: u64, r: u64, max_k: u32) -> u32 {
    let pn = x.params().pn();
    let p = x.params().p();
    let mut v = 0;
    for k in 1..=max_k {
        let m = q.pow(k);
        let lift = (0..q.pow(k - 1))
            .map(|j| r + j * q)
            .find(|&t| pow_mod(t, pn, m) == 1 && pow_mod(t, pn / p, m) != 1)
            .expect("root lifts");
        if eval_mod(x, lift, m) != 0 {
            break;
        }
        v = k;
    }
    v
}

#[test]
fn prime_counts_match_root_counts() {
    for (p, n) in [(3u64, 1u32), (5, 1), (7, 1), (3, 2), (5, 2)] {
        let params = CycParams::new(p, n).unwrap();
        let pn = params.pn();
        for q in [2u64, 7, 11, 13, 19, 31, 37, 41, 101] {
            if q == p {
                continue;
            }
            let primes = primes_above(&params, q).unwrap();
            let f = mult_order(q % pn, pn) as usize;
            assert_eq!(primes.len(), params.degree() / f, "p={p} n={n} q={q}");
            assert!(primes.iter().all(|pr| pr.f() == f));
            if f == 1 {
                let mut roots: Vec<u64> = (1..q)
                    .filter(|&t| pow_mod(t, pn, q) == 1 && pow_mod(t, pn / p, q) != 1)
                    .collect();
                let mut got: Vec<u64> = primes.iter().map(|pr| pr.split_root().unwrap()).collect();
                roots.sort_unstable();
                got.sort_unstable();
                assert_eq!(got, roots);
            }
        }
    }
}

#[test]
fn split_valuations_match_residue_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (p, q) in [(5u64, 11u64), (3, 7), (7, 29)] {
        let params = CycParams::new(p, 1).unwrap();
        let primes = primes_above(&params, q).unwrap();
        for _ in 0..40 {
            // bias toward multiples of q-adic primes
            let x = &random_elt(params, &mut rng, 6) * &CycElt::from_i64s(params, &[-(primes[0].split_root().unwrap() as i64), 1]);
            let bound = v_int(&x.abs_norm(), q);
            for pr in &primes {
                let oracle = split_valuation_oracle(&x, q, pr.split_root().unwrap(), bound + 1);
                assert_eq!(val_at(&x, pr, CEIL).unwrap(), oracle, "x={x} P={pr}");
            }
        }
    }
}

#[test]
fn spec_valuation_examples() {
    let params = CycParams::new(5, 1).unwrap();
    let primes = primes_above(&params, 11).unwrap();
    let x = CycElt::from_i64s(params, &[3, -1]);
    let three = primes.iter().find(|pr| pr.split_root() == Some(3)).unwrap();
    assert_eq!(val_at(&x, three, CEIL).unwrap(), 2);
    assert_eq!(primes.iter().map(|pr| val_at(&x, pr, CEIL).unwrap()).sum::<u32>(), 2);
    assert_eq!(pi_val(&CycElt::integer(params, 5)).unwrap(), 4);
    let five = galois_on_prime(&params.galois(2).unwrap(), three).unwrap();
    assert_eq!(five.split_root(), Some(5));
    let p3 = CycParams::new(3, 1).unwrap();
    let p4 = primes_above(&p3, 7).unwrap().into_iter().find(|pr| pr.split_root() == Some(4)).unwrap();
    let u = CycElt::from_i64s(p3, &[3, 1]);
    assert_eq!(val_at(&u, &p4, CEIL).unwrap(), 1);
    assert_eq!(u.abs_norm(), BigInt::from(7));
}

#[test]
fn norm_sum_formula_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..60 {
        let (p, n) = [(3u64, 1u32), (5, 1), (7, 1), (3, 2)][rng.gen_range(0..4)];
        let params = CycParams::new(p, n).unwrap();
        let q = [2u64, 7, 11, 13, 19, 29, 37, 43][rng.gen_range(0..8)];
        if q == p {
            continue;
        }
        let x = random_elt(params, &mut rng, 8);
        let lhs: u32 = primes_above(&params, q)
            .unwrap()
            .iter()
            .map(|pr| pr.f() as u32 * val_at(&x, pr, CEIL).unwrap())
            .sum();
        assert_eq!(lhs, v_int(&x.abs_norm(), q), "x={x} q={q}");
    }
}

#[test]
fn valuation_vectors_are_star_equivariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let params = CycParams::new(5, 1).unwrap();
    let t = [5u64, 11];
    for _ in 0..20 {
        let x = random_elt(params, &mut rng, 10);
        let class = CycClass::from_elt(x.clone()).unwrap();
        let v = val_vector(&x, &t, CEIL).unwrap();
        for alpha in params.units() {
            let moved = twisted_act(&alpha, &class, Convention::Inverse);
            assert_eq!(val_vector_class(&moved, &t, CEIL).unwrap(), v.star(&alpha).unwrap());
        }
    }
}

#[test]
fn units_have_zero_valuation_vectors() {
    let params = CycParams::new(7, 1).unwrap();
    for a in params.units() {
        assert!(val_vector_class(&xi_class(&params, &a), &[7, 29], CEIL).unwrap().is_zero());
    }
    assert!(is_in_e(&CycElt::integer(CycParams::new(5, 1).unwrap(), 32), &[11], u64::MAX, CEIL).unwrap());
    assert!(!is_in_e(&CycElt::integer(CycParams::new(5, 1).unwrap(), 2), &[11], u64::MAX, CEIL).unwrap());
}

#[test]
fn found_generators_have_the_right_divisor() {
    for (p, t) in [(3u64, vec![3u64, 7]), (5, vec![5, 11]), (3, vec![13, 19])] {
        let params = CycParams::new(p, 1).unwrap();
        for pr in primes_above_set(&params, &t).unwrap() {
            let GeneratorSearch::Found { u, h } = prime_generator_search(&pr, 3, CEIL).unwrap() else {
                panic!("no generator for {pr}");
            };
            assert_ne!(h % p as u32, 0);
            let norm = u.abs_norm();
            assert_eq!(v_int(&norm, pr.q()), h * pr.f() as u32);
            if !pr.is_ramified() {
                // no other prime divides the norm
                let rest = norm.abs() / BigInt::from(pr.q()).pow(h * pr.f() as u32);
                assert_eq!(rest, BigInt::from(1), "u={u}");
                for other in primes_above(&params, pr.q()).unwrap() {
                    let expect = if other == pr { h } else { 0 };
                    assert_eq!(val_at(&u, &other, CEIL).unwrap(), expect);
                }
            }
        }
    }
}
