//! Closed-form lower and upper bounds for `D_{1,s}(Z_n)` and `D_{1,s}(Z_n^k)`,
//! and the two explicit zero-sum-free constructions behind the lower bound.
//!
//! All `floor(log2 x)` values come from integer bit lengths.

use crate::error::{Error, Result};
use crate::modring::{floor_log2, psi_inv, CrtSplit};
use crate::zsfree::ZSequence;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BoundsRow {
    pub n: u64,
    pub s: u64,
    pub n1: u64,
    pub n2: u64,
    pub lower: u64,
    pub upper: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MultidimBounds {
    pub n1: u64,
    pub n2: u64,
    pub k: u32,
    /// Value used for `d(Z_{n2}^k)`.
    pub d2k: u64,
    pub lower: u64,
    pub upper: u64,
}

/// `n2 + floor(log2 n1)`.
pub fn lower_bound_powers(split: &CrtSplit) -> u64 {
    split.n2() + floor_log2(split.n1())
}

/// `2 n2`, only when `n2` is odd and `n1 > n2`.
pub fn lower_bound_repeated(split: &CrtSplit) -> Option<u64> {
    (split.n2() % 2 == 1 && split.n1() > split.n2()).then(|| 2 * split.n2())
}

pub fn lower_bound(split: &CrtSplit) -> u64 {
    let a = lower_bound_powers(split);
    lower_bound_repeated(split).map_or(a, |b| a.max(b))
}

fn second_upper(pairs_plus: u64, half: u64, log_plus_one: u64) -> u64 {
    // 2 (d + 1) + floor(half) - 2 floor(half / (log + 1))
    2 * pairs_plus + half - 2 * (half / log_plus_one)
}

pub fn upper_bound(split: &CrtSplit) -> u64 {
    let (n1, n2) = (split.n1(), split.n2());
    let l1 = floor_log2(n1) + 1;
    (n2 * l1).min(second_upper(n2, n1 / 2, l1))
}

/// Bounds on `Z_n^k`. `d2k` overrides the value used for `d(Z_{n2}^k)`;
/// the default `k (n2 - 1)` is exact for `k <= 2` and for prime-power `n2`,
/// and only a lower estimate otherwise.
pub fn multidim_bounds(split: &CrtSplit, k: u32, d2k: Option<u64>) -> Result<MultidimBounds> {
    if k == 0 {
        return Err(Error::InvalidArgument("rank k must be at least 1".into()));
    }
    let (n1, n2) = (split.n1(), split.n2());
    let floor_d = k as u64 * (n2 - 1);
    let d2k = d2k.unwrap_or(floor_d);
    if d2k < floor_d {
        return Err(Error::InvalidArgument(format!(
            "d(Z_{n2}^{k}) is at least {floor_d}, got {d2k}"
        )));
    }
    let n1k = (n1 as u128)
        .checked_pow(k)
        .filter(|&v| v <= u64::MAX as u128)
        .ok_or(Error::Overflow("n1^k"))? as u64;
    // floor(k log2 n1) = floor(log2 n1^k)
    let lk = floor_log2(n1k) + 1;
    let dp1 = d2k.checked_add(1).ok_or(Error::Overflow("d2k + 1"))?;
    let lower = dp1
        .checked_add(k as u64 * floor_log2(n1))
        .ok_or(Error::Overflow("lower bound"))?;
    let first = dp1.checked_mul(lk).ok_or(Error::Overflow("upper bound"))?;
    let half = n1k / 2;
    let second = dp1
        .checked_mul(2)
        .and_then(|v| v.checked_add(half))
        .ok_or(Error::Overflow("upper bound"))?
        - 2 * (half / lk);
    Ok(MultidimBounds {
        n1,
        n2,
        k,
        d2k,
        lower,
        upper: first.min(second),
    })
}

/// `((1,0), (2,0), ..., (2^(L-1),0), (0,1) x (n2 - 1))` with `L = floor(log2 n1)`,
/// pulled back to `Z_n`.
pub fn construct_witness_1(split: &CrtSplit) -> ZSequence {
    let l = floor_log2(split.n1());
    let powers = (0..l).map(|i| psi_inv((1 << i, 0), split));
    let ones = std::iter::repeat_n(psi_inv((0, 1), split), split.n2() as usize - 1);
    ZSequence::cyclic(split.modulus(), powers.chain(ones))
}

/// `(1,1)` repeated `2 n2 - 1` times, i.e. `1` repeated in `Z_n`.
pub fn construct_witness_2(split: &CrtSplit) -> Result<ZSequence> {
    if lower_bound_repeated(split).is_none() {
        return Err(Error::HypothesisNotMet(format!(
            "need n2 odd and n1 > n2, got (n1, n2) = ({}, {})",
            split.n1(),
            split.n2()
        )));
    }
    let one = psi_inv((1, 1), split);
    Ok(ZSequence::cyclic(
        split.modulus(),
        std::iter::repeat_n(one, 2 * split.n2() as usize - 1),
    ))
}

pub fn table_row(split: &CrtSplit) -> BoundsRow {
    BoundsRow {
        n: split.n(),
        s: split.s(),
        n1: split.n1(),
        n2: split.n2(),
        lower: lower_bound(split),
        upper: upper_bound(split),
    }
}

/// One row per `(n, s)` with `n <= n_max` and a valid split, ordered by
/// `(n, s)`.
pub fn table(n_max: u64) -> Vec<BoundsRow> {
    let mut rows = Vec::new();
    for n in 2..=n_max {
        let md = crate::modring::Modulus::new(n).expect("n >= 2");
        for s in crate::modring::involutions(md) {
            if let Ok(split) = crate::modring::crt_split(md, s) {
                rows.push(table_row(&split));
            }
        }
    }
    rows.sort_by_key(|r| (r.n, r.s));
    rows
}
