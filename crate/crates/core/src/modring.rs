//! Residue arithmetic in `Z_n`, nontrivial involutions, and the coprime
//! splitting `Z_n -> Z_{n1} (+) Z_{n2}` that sends `1 -> (1, 1)` and
//! `s -> (-1, 1)`.
//!
//! Residues are always kept in the canonical range `[0, n - 1]`, so `-1`
//! is stored as `n - 1`.

use std::fmt;

use crate::error::{Error, Result};

/// The ambient modulus `n >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidModulus(n));
        }
        Ok(Modulus(n))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn reduce(self, a: i64) -> u64 {
        a.rem_euclid(self.0 as i64) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.0 as u128) as u64
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        let a = a % self.0;
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    pub fn is_unit(self, a: u64) -> bool {
        gcd(a % self.0, self.0) == 1
    }

    /// Units of `Z_n` in ascending order.
    pub fn units(self) -> Vec<u64> {
        (1..self.0).filter(|&a| self.is_unit(a)).collect()
    }

    pub fn inverse(self, a: u64) -> Option<u64> {
        let (g, x, _) = ext_gcd((a % self.0) as i128, self.0 as i128);
        (g == 1).then(|| x.rem_euclid(self.0 as i128) as u64)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// `floor(log2(x))` from the bit length; `x` must be positive.
#[inline]
pub fn floor_log2(x: u64) -> u64 {
    assert!(x > 0, "floor_log2 of zero");
    x.ilog2() as u64
}

/// Prime factorisation by trial division, as `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Number of distinct prime factors.
pub fn omega(n: u64) -> usize {
    factorize(n).len()
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Positive divisors of `n` in ascending order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// A non-empty set of nonzero residues used as coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightSet {
    modulus: Modulus,
    weights: Vec<u64>,
}

impl WeightSet {
    /// Reduces every weight modulo `n`, sorts and deduplicates. A weight
    /// that vanishes modulo `n` is rejected.
    pub fn new(modulus: Modulus, weights: impl IntoIterator<Item = i64>) -> Result<Self> {
        let mut ws = Vec::new();
        for w in weights {
            let r = modulus.reduce(w);
            if r == 0 {
                return Err(Error::ZeroWeight {
                    weight: w.unsigned_abs(),
                    modulus: modulus.get(),
                });
            }
            ws.push(r);
        }
        if ws.is_empty() {
            return Err(Error::EmptyWeights);
        }
        ws.sort_unstable();
        ws.dedup();
        Ok(WeightSet {
            modulus,
            weights: ws,
        })
    }

    /// `{1}`: the unweighted problem.
    pub fn one(modulus: Modulus) -> Self {
        WeightSet {
            modulus,
            weights: vec![1],
        }
    }

    /// `{1, -1}`.
    pub fn plus_minus_one(modulus: Modulus) -> Self {
        Self::new(modulus, [1, -1]).expect("1 is nonzero for n >= 2")
    }

    /// `{1, 2, ..., r}`.
    pub fn range(modulus: Modulus, r: u64) -> Result<Self> {
        if r == 0 || r >= modulus.get() {
            return Err(Error::InvalidArgument(format!(
                "range weight bound r={r} must lie in [1, {}]",
                modulus.get() - 1
            )));
        }
        Self::new(modulus, 1..=r as i64)
    }

    /// `{1, s}` for a nontrivial involution `s`.
    pub fn one_and(modulus: Modulus, s: u64) -> Result<Self> {
        check_involution(modulus, s)?;
        Self::new(modulus, [1, s as i64])
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    #[inline]
    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn contains(&self, w: u64) -> bool {
        self.weights.binary_search(&w).is_ok()
    }
}

impl fmt::Display for WeightSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, "}}")
    }
}

/// All `s` in `[2, n - 2]` with `s^2 = 1 (mod n)`, ascending.
pub fn involutions(n: Modulus) -> Vec<u64> {
    let m = n.get();
    (2..m.saturating_sub(1))
        .filter(|&s| n.mul(s, s) == 1)
        .collect()
}

fn check_involution(n: Modulus, s: u64) -> Result<()> {
    let m = n.get();
    if s >= m || s < 2 || s == m - 1 || n.mul(s, s) != 1 {
        return Err(Error::InvalidS { n: m, s });
    }
    Ok(())
}

/// Coprime factorisation `n = n1 * n2` with `s = -1 (mod n1)` and
/// `s = 1 (mod n2)`, both factors at least 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CrtSplit {
    n: u64,
    s: u64,
    n1: u64,
    n2: u64,
    // CRT idempotents: e1 = (1, 0), e2 = (0, 1).
    e1: u64,
    e2: u64,
}

impl CrtSplit {
    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn s(&self) -> u64 {
        self.s
    }
    pub fn n1(&self) -> u64 {
        self.n1
    }
    pub fn n2(&self) -> u64 {
        self.n2
    }
    pub fn modulus(&self) -> Modulus {
        Modulus(self.n)
    }
}

/// Searches every coprime factorisation and keeps those compatible with
/// `s`. Two candidates can only differ by where a lone factor 2 sits
/// (`-1 = 1` modulo 2); the one with even `n1` wins.
pub fn crt_split(n: Modulus, s: u64) -> Result<CrtSplit> {
    check_involution(n, s)?;
    let m = n.get();
    let candidate = divisors(m)
        .into_iter()
        .filter(|&n1| {
            let n2 = m / n1;
            n1 >= 3
                && n2 >= 3
                && gcd(n1, n2) == 1
                && s % n1 == n1 - 1
                && s % n2 == 1
        })
        .max_by_key(|&n1| (n1 % 2 == 0, n1));
    let n1 = candidate.ok_or(Error::NoValidSplit { n: m, s })?;
    let n2 = m / n1;
    let e1 = crt_combine(n, n1, n2, 1, 0);
    let e2 = crt_combine(n, n1, n2, 0, 1);
    Ok(CrtSplit {
        n: m,
        s,
        n1,
        n2,
        e1,
        e2,
    })
}

fn crt_combine(n: Modulus, n1: u64, n2: u64, r1: u64, r2: u64) -> u64 {
    // x = r1 * n2 * (n2^-1 mod n1) + r2 * n1 * (n1^-1 mod n2)
    let inv2 = Modulus(n1).inverse(n2 % n1).unwrap_or(0);
    let inv1 = Modulus(n2).inverse(n1 % n2).unwrap_or(0);
    let a = n.mul(n.mul(r1, n2), inv2);
    let b = n.mul(n.mul(r2, n1), inv1);
    n.add(a, b)
}

/// `a -> (a mod n1, a mod n2)`.
#[inline]
pub fn psi(a: u64, split: &CrtSplit) -> (u64, u64) {
    let a = a % split.n;
    (a % split.n1, a % split.n2)
}

#[inline]
pub fn psi_inv(pair: (u64, u64), split: &CrtSplit) -> u64 {
    let n = split.modulus();
    n.add(
        n.mul(pair.0 % split.n1, split.e1),
        n.mul(pair.1 % split.n2, split.e2),
    )
}

/// `{ a^2 mod n : gcd(a, n) = 1 }`.
pub fn quadratic_residue_weights(n: Modulus) -> Result<WeightSet> {
    if n.get() < 3 {
        return Err(Error::InvalidArgument(format!(
            "quadratic residue weights need n >= 3, got {n}"
        )));
    }
    let squares = n.units().into_iter().map(|u| n.mul(u, u) as i64);
    WeightSet::new(n, squares)
}
