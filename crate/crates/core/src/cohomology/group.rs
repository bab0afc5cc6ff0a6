//! Finite groups given by multiplication tables, with an optional character
//! `χ: G → (Z/p^m)^*` through which Tate twists act.

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_prime, mul_mod, smallest_primitive_root, units_mod};
use crate::error::{Error, Result};

/// Values of a character `G → (Z/N)^*`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Character {
    pub modulus: u64,
    pub values: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    labels: Vec<String>,
    table: Vec<u32>,
    identity: usize,
    inverse: Vec<usize>,
    character: Option<Character>,
    generator: Option<usize>,
    /// Translation coordinates `b` of each element of a Kummer model.
    translation: Option<Vec<Vec<u64>>>,
}

/// Ceiling on the order of groups built from explicit laws.
const MAX_ORDER: usize = 1 << 12;

impl FiniteGroup {
    /// Builds a group from a full table, checking the axioms exhaustively.
    pub fn from_table(name: &str, labels: Vec<String>, rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || labels.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidGroup("table must be square and labelled".into()));
        }
        if rows.iter().flatten().any(|&x| x >= n) {
            return Err(Error::InvalidGroup("table entry out of range".into()));
        }
        let g = Self::assemble(name, labels, |i, j| rows[i][j], n)?;
        for a in 0..n {
            for b in 0..n {
                let ab = g.mul(a, b);
                for c in 0..n {
                    if g.mul(ab, c) != g.mul(a, g.mul(b, c)) {
                        return Err(Error::InvalidGroup(format!(
                            "not associative at ({}, {}, {})",
                            g.labels[a], g.labels[b], g.labels[c]
                        )));
                    }
                }
            }
        }
        Ok(g)
    }

    /// Finds identity and inverses; associativity is the caller's concern.
    fn assemble(
        name: &str,
        labels: Vec<String>,
        law: impl Fn(usize, usize) -> usize,
        n: usize,
    ) -> Result<Self> {
        let mut table = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                table[i * n + j] = law(i, j) as u32;
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e * n + x] as usize == x && table[x * n + e] as usize == x))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for x in 0..n {
            let inv = (0..n)
                .find(|&y| table[x * n + y] as usize == identity && table[y * n + x] as usize == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("{} has no inverse", labels[x])))?;
            inverse.push(inv);
        }
        Ok(Self {
            name: name.to_string(),
            labels,
            table,
            identity,
            inverse,
            character: None,
            generator: None,
            translation: None,
        })
    }

    /// `Z/n` written multiplicatively with generator `g`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_ORDER {
            return Err(Error::InvalidGroup(format!("unsupported cyclic order {n}")));
        }
        let labels = (0..n).map(|k| format!("g^{k}")).collect();
        let mut g = Self::assemble(&format!("C{n}"), labels, |i, j| (i + j) % n, n)?;
        g.generator = Some(1 % n);
        Ok(g)
    }

    fn from_residues(name: &str, elems: Vec<u64>, modulus: u64, m_mod: u64) -> Result<Self> {
        let n = elems.len();
        let index = |x: u64| elems.binary_search(&x).expect("closed under products");
        let labels = elems.iter().map(u64::to_string).collect();
        let mut g = Self::assemble(name, labels, |i, j| index(mul_mod(elems[i], elems[j], modulus)), n)?;
        g.character = Some(Character {
            modulus: m_mod,
            values: elems.iter().map(|&a| a % m_mod).collect(),
        });
        Ok(g)
    }

    /// `(Z/p^n)^*` with character `a ↦ a mod p^m`.
    pub fn units_mod(p: u64, n: u32, m: u32) -> Result<Self> {
        let (pn, pm) = prime_powers(p, n, m)?;
        let mut g = Self::from_residues(&format!("(Z/{pn})^*"), units_mod(pn), pn, pm)?;
        g.generator = smallest_primitive_root(pn).and_then(|r| g.index_of(&r.to_string()));
        Ok(g)
    }

    /// The subgroup `1 + (p)` of `(Z/p^n)^*`, with character `a ↦ a mod p^m`.
    pub fn one_plus_p(p: u64, n: u32, m: u32) -> Result<Self> {
        let (pn, pm) = prime_powers(p, n, m)?;
        let elems = (0..pn / p).map(|k| 1 + k * p).collect();
        let mut g = Self::from_residues(&format!("1+({p}) in (Z/{pn})^*"), elems, pn, pm)?;
        g.generator = g.index_of(&(1 + p).to_string());
        Ok(g)
    }

    /// `(Z/p^m)^k ⋊ (Z/p^m)^*` with `(b, a)(b', a') = (b + a b', a a')` and
    /// character `(b, a) ↦ a`.
    pub fn kummer(p: u64, m: u32, k: u32) -> Result<Self> {
        let (pm, _) = prime_powers(p, m, m)?;
        let units = units_mod(pm);
        let nb = pm.checked_pow(k).filter(|&x| x as usize * units.len() <= MAX_ORDER);
        let nb = nb.ok_or_else(|| {
            Error::InvalidGroup(format!("Kummer model too large for p^m = {pm}, k = {k}"))
        })? as usize;
        let nu = units.len();
        let n = nb * nu;
        let digits = |mut b: usize| -> Vec<u64> {
            (0..k)
                .map(|_| {
                    let d = b as u64 % pm;
                    b /= pm as usize;
                    d
                })
                .collect()
        };
        let undigits = |d: &[u64]| -> usize { d.iter().rev().fold(0, |acc, &x| acc * pm as usize + x as usize) };
        let unit_index = |a: u64| units.binary_search(&a).expect("unit");
        let labels = (0..n)
            .map(|i| {
                let (b, a) = (digits(i / nu), units[i % nu]);
                let bs: Vec<String> = b.iter().map(u64::to_string).collect();
                format!("({};{})", bs.join(","), a)
            })
            .collect();
        let law = |i: usize, j: usize| {
            let (b1, a1) = (digits(i / nu), units[i % nu]);
            let (b2, a2) = (digits(j / nu), units[j % nu]);
            let b: Vec<u64> = b1
                .iter()
                .zip(&b2)
                .map(|(&x, &y)| (x + mul_mod(a1, y, pm)) % pm)
                .collect();
            undigits(&b) * nu + unit_index(mul_mod(a1, a2, pm))
        };
        let mut g = Self::assemble(&format!("(Z/{pm})^{k} x| (Z/{pm})^*"), labels, law, n)?;
        g.character = Some(Character {
            modulus: pm,
            values: (0..n).map(|i| units[i % nu]).collect(),
        });
        g.translation = Some((0..n).map(|i| digits(i / nu)).collect());
        Ok(g)
    }

    /// Attaches a character, checking that it is a homomorphism to units.
    pub fn with_character(mut self, ch: Character) -> Result<Self> {
        if ch.values.len() != self.order() {
            return Err(Error::InvalidGroup("character has the wrong length".into()));
        }
        for a in 0..self.order() {
            if gcd(ch.values[a], ch.modulus) != 1 {
                return Err(Error::InvalidGroup("character value is not a unit".into()));
            }
            for b in 0..self.order() {
                if ch.values[self.mul(a, b)] != mul_mod(ch.values[a], ch.values[b], ch.modulus) {
                    return Err(Error::InvalidGroup("character is not multiplicative".into()));
                }
            }
        }
        self.character = Some(ch);
        Ok(self)
    }

    /// The coordinates `b ∈ (Z/p^m)^k` of `(b, a)` in a Kummer model.
    pub fn translation(&self, g: usize) -> Option<&[u64]> {
        self.translation.as_ref().map(|t| t[g].as_slice())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn character(&self) -> Option<&Character> {
        self.character.as_ref()
    }

    /// `χ(a)`, if a character is attached.
    pub fn chi(&self, a: usize) -> Option<u64> {
        self.character.as_ref().map(|c| c.values[a])
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_generator(&self, a: usize) -> bool {
        self.element_order(a) == self.order()
    }

    /// The designated generator of a cyclic group: `g` for `C_n`, the
    /// smallest primitive root for `(Z/p^n)^*`, `1 + p` for `1 + (p)`, and
    /// otherwise the first generating element.
    pub fn default_generator(&self) -> Result<usize> {
        match self.generator {
            Some(g) if self.is_generator(g) => Ok(g),
            _ => (0..self.order())
                .find(|&g| self.is_generator(g))
                .ok_or(Error::NotCyclic),
        }
    }
}

fn prime_powers(p: u64, n: u32, m: u32) -> Result<(u64, u64)> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidParams(format!("p = {p} must be an odd prime")));
    }
    if n == 0 || m == 0 || m > n {
        return Err(Error::InvalidParams(format!(
            "need 1 <= m <= n, got n = {n}, m = {m}"
        )));
    }
    let pn = p
        .checked_pow(n)
        .filter(|&x| x as usize <= 4 * MAX_ORDER)
        .ok_or_else(|| Error::InvalidParams(format!("{p}^{n} is too large")))?;
    Ok((pn, p.pow(m)))
}
