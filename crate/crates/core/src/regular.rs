//! Regularity of a prime via exact Bernoulli numbers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::is_prime;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegularityReport {
    pub p: u64,
    pub regular: bool,
    /// Even `k ≤ p - 3` with `p` dividing the numerator of `B_k`.
    pub indices: Vec<u64>,
}

/// `B_0, …, B_k` from `Σ_{j=0}^{m} C(m+1, j) B_j = 0` (so `B_1 = -1/2`).
pub fn bernoulli_numbers(k: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(k + 1);
    b.push(BigRational::one());
    for m in 1..=k {
        // binomials C(m+1, j) for j = 0..m
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += BigRational::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        // binom is now C(m+1, m) = m + 1
        b.push(-acc / BigRational::from_integer(binom));
    }
    b
}

pub fn is_regular(p: u64) -> Result<RegularityReport> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidParams(format!("regularity needs an odd prime, got {p}")));
    }
    let top = p.saturating_sub(3) as usize;
    let b = bernoulli_numbers(top);
    let pb = BigInt::from(p);
    let indices: Vec<u64> = (2..=top)
        .step_by(2)
        .filter(|&k| (b[k].numer() % &pb).is_zero())
        .map(|k| k as u64)
        .collect();
    Ok(RegularityReport {
        p,
        regular: indices.is_empty(),
        indices,
    })
}

/// Fails with [`Error::IrregularPrime`] unless `p` is regular.
pub fn require_regular(p: u64) -> Result<()> {
    let r = is_regular(p)?;
    if r.regular {
        Ok(())
    } else {
        Err(Error::IrregularPrime { p, indices: r.indices })
    }
}
