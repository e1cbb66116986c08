//! Weighted zero-sum detection over finite abelian groups
//! `Z_{m1} (+) ... (+) Z_{mk}`.
//!
//! The group doubles as a ring under coordinatewise multiplication, and a
//! weight is any nonzero ring element acting by multiplication. A scalar
//! weight `a` on `Z_n^k` is the diagonal element `(a, ..., a)`; the pair
//! weights `(1, 1)` and `(-1, 1)` on `Z_{n1} (+) Z_{n2}` are the images of
//! `1` and `s` under the CRT split.
//!
//! Elements are encoded as mixed-radix integers with the first coordinate
//! most significant, so for a cyclic group the code is the residue itself.

use std::fmt;

use crate::error::{Error, Result};
use crate::modring::{CrtSplit, Modulus, WeightSet};

/// Largest group order the bitset engine accepts.
pub const MAX_GROUP_ORDER: u64 = 1 << 16;

/// Largest sequence accepted by [`brute_force_oracle`].
pub const ORACLE_MAX_LEN: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianGroup {
    moduli: Vec<u64>,
    strides: Vec<u64>,
    order: u64,
}

impl AbelianGroup {
    pub fn product(moduli: &[u64]) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::InvalidArgument("group needs at least one factor".into()));
        }
        if let Some(&m) = moduli.iter().find(|&&m| m < 2) {
            return Err(Error::InvalidModulus(m));
        }
        let mut order: u64 = 1;
        for &m in moduli {
            order = order
                .checked_mul(m)
                .filter(|&o| o <= MAX_GROUP_ORDER)
                .ok_or(Error::TooLarge {
                    what: "group order",
                    size: moduli.iter().fold(1u64, |a, &m| a.saturating_mul(m)),
                    limit: MAX_GROUP_ORDER,
                })?;
        }
        let mut strides = vec![1; moduli.len()];
        for i in (0..moduli.len() - 1).rev() {
            strides[i] = strides[i + 1] * moduli[i + 1];
        }
        Ok(AbelianGroup {
            moduli: moduli.to_vec(),
            strides,
            order,
        })
    }

    pub fn cyclic(n: Modulus) -> Result<Self> {
        Self::product(&[n.get()])
    }

    /// `Z_n^k`.
    pub fn power(n: Modulus, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("rank k must be at least 1".into()));
        }
        Self::product(&vec![n.get(); k])
    }

    /// `Z_{n1} (+) Z_{n2}` for a CRT split.
    pub fn split(split: &CrtSplit) -> Self {
        Self::product(&[split.n1(), split.n2()]).expect("split factors are at least 3")
    }

    #[inline]
    pub fn order(&self) -> u64 {
        self.order
    }

    #[inline]
    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    #[inline]
    pub fn is_cyclic(&self) -> bool {
        self.moduli.len() == 1
    }

    pub fn encode(&self, coords: &[u64]) -> u64 {
        assert_eq!(coords.len(), self.moduli.len(), "coordinate count");
        coords
            .iter()
            .zip(&self.moduli)
            .zip(&self.strides)
            .map(|((&c, &m), &st)| (c % m) * st)
            .sum()
    }

    pub fn decode(&self, code: u64) -> Vec<u64> {
        self.moduli
            .iter()
            .zip(&self.strides)
            .map(|(&m, &st)| code / st % m)
            .collect()
    }

    #[inline]
    fn digit(&self, code: u64, i: usize) -> u64 {
        code / self.strides[i] % self.moduli[i]
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.is_cyclic() {
            return (a + b) % self.order;
        }
        (0..self.rank())
            .map(|i| (self.digit(a, i) + self.digit(b, i)) % self.moduli[i] * self.strides[i])
            .sum()
    }

    pub fn neg(&self, a: u64) -> u64 {
        (0..self.rank())
            .map(|i| {
                let m = self.moduli[i];
                (m - self.digit(a, i)) % m * self.strides[i]
            })
            .sum()
    }

    /// Coordinatewise product of two ring elements.
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (0..self.rank())
            .map(|i| {
                let m = self.moduli[i] as u128;
                (self.digit(a, i) as u128 * self.digit(b, i) as u128 % m) as u64
                    * self.strides[i]
            })
            .sum()
    }

    /// The diagonal ring element `(a, ..., a)`.
    pub fn diagonal(&self, a: u64) -> u64 {
        self.encode(&vec![a; self.rank()])
    }

    /// Whether `u` is a unit of the ring.
    pub fn is_unit(&self, u: u64) -> bool {
        (0..self.rank()).all(|i| crate::modring::gcd(self.digit(u, i), self.moduli[i]) == 1)
    }
}

/// A set of ring elements of an [`AbelianGroup`] acting by multiplication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weights {
    group: AbelianGroup,
    codes: Vec<u64>,
    // images[w][x] = codes[w] * x
    images: Vec<Vec<u32>>,
}

impl Weights {
    pub fn new(group: AbelianGroup, codes: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut cs: Vec<u64> = codes.into_iter().collect();
        if cs.is_empty() {
            return Err(Error::EmptyWeights);
        }
        for &c in &cs {
            if c == 0 || c >= group.order() {
                return Err(Error::ZeroWeight {
                    weight: c,
                    modulus: group.order(),
                });
            }
        }
        cs.sort_unstable();
        cs.dedup();
        let images = cs
            .iter()
            .map(|&w| (0..group.order()).map(|x| group.mul(w, x) as u32).collect())
            .collect();
        Ok(Weights {
            group,
            codes: cs,
            images,
        })
    }

    /// Scalar weights on `Z_n^k`, each acting diagonally.
    pub fn scalar(weights: &WeightSet, k: usize) -> Result<Self> {
        let group = AbelianGroup::power(weights.modulus(), k)?;
        let codes: Vec<u64> = weights.weights().iter().map(|&w| group.diagonal(w)).collect();
        Self::new(group, codes)
    }

    /// `{(1, 1), (-1, 1)}` on `Z_{n1} (+) Z_{n2}`: the image of `{1, s}`.
    pub fn split_image(split: &CrtSplit) -> Self {
        let group = AbelianGroup::split(split);
        let one = group.encode(&[1, 1]);
        let minus = group.encode(&[split.n1() - 1, 1]);
        Self::new(group, [one, minus]).expect("nonzero weights")
    }

    #[inline]
    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    /// Weight codes in ascending order.
    #[inline]
    pub fn codes(&self) -> &[u64] {
        &self.codes
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    #[inline]
    pub(crate) fn image(&self, weight_index: usize, x: u64) -> u64 {
        self.images[weight_index][x as usize] as u64
    }
}

impl From<&WeightSet> for Weights {
    fn from(ws: &WeightSet) -> Self {
        Weights::scalar(ws, 1).expect("cyclic group of a valid modulus")
    }
}

/// A finite multiset of group elements, stored sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZSequence {
    group: AbelianGroup,
    elements: Vec<u64>,
}

impl ZSequence {
    pub fn new(group: AbelianGroup, elements: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut els: Vec<u64> = elements.into_iter().collect();
        if let Some(&bad) = els.iter().find(|&&x| x >= group.order()) {
            return Err(Error::InvalidArgument(format!(
                "element code {bad} outside a group of order {}",
                group.order()
            )));
        }
        els.sort_unstable();
        Ok(ZSequence {
            group,
            elements: els,
        })
    }

    /// A sequence over `Z_n`; residues are reduced modulo `n`.
    pub fn cyclic(n: Modulus, residues: impl IntoIterator<Item = u64>) -> Self {
        let group = AbelianGroup::cyclic(n).expect("valid modulus");
        let els = residues.into_iter().map(|r| r % n.get());
        Self::new(group, els).expect("reduced residues")
    }

    /// `Z_n^k` sequence from coordinate vectors.
    pub fn from_vectors(group: AbelianGroup, vectors: &[Vec<u64>]) -> Self {
        let codes: Vec<u64> = vectors.iter().map(|v| group.encode(v)).collect();
        Self::new(group, codes).expect("encoded elements are in range")
    }

    pub(crate) fn from_sorted_unchecked(group: AbelianGroup, elements: Vec<u64>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] <= w[1]));
        ZSequence { group, elements }
    }

    #[inline]
    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    #[inline]
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `self` with one more element.
    pub fn pushed(&self, x: u64) -> Self {
        let mut els = self.elements.clone();
        els.push(x);
        ZSequence::new(self.group.clone(), els).expect("element in range")
    }

    /// `u * S`, re-sorted.
    pub fn scaled(&self, u: u64) -> Self {
        let els = self.elements.iter().map(|&x| self.group.mul(u, x));
        ZSequence::new(self.group.clone(), els).expect("products stay in range")
    }

    /// Largest multiplicity of any element (0 for the empty sequence).
    pub fn max_multiplicity(&self) -> usize {
        self.elements
            .chunk_by(|a, b| a == b)
            .map(<[u64]>::len)
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for ZSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, &x) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if self.group.is_cyclic() {
                write!(f, "{x}")?;
            } else {
                let coords: Vec<String> =
                    self.group.decode(x).iter().map(u64::to_string).collect();
                write!(f, "[{}]", coords.join(" "))?;
            }
        }
        write!(f, ")")
    }
}

/// A subset of the group as a bitset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ReachableSet {
    order: u64,
    words: Vec<u64>,
}

impl ReachableSet {
    pub fn empty(order: u64) -> Self {
        ReachableSet {
            order,
            words: vec![0; words_for(order)],
        }
    }

    fn singleton(order: u64, x: u64) -> Self {
        let mut r = Self::empty(order);
        r.insert(x);
        r
    }

    #[inline]
    pub fn contains(&self, x: u64) -> bool {
        x < self.order && self.words[(x / 64) as usize] >> (x % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: u64) {
        self.words[(x / 64) as usize] |= 1 << (x % 64);
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &ReachableSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &ReachableSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    fn intersect_with(&mut self, other: &ReachableSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                (w != 0).then(|| {
                    let b = w.trailing_zeros() as u64;
                    w &= w - 1;
                    wi as u64 * 64 + b
                })
            })
        })
    }
}

#[inline]
pub(crate) fn words_for(order: u64) -> usize {
    order.div_ceil(64) as usize
}

/// `dst |= src + g` for the group's translation by `g`.
pub(crate) fn or_translated(dst: &mut [u64], src: &[u64], g: u64, group: &AbelianGroup) {
    let n = group.order();
    if group.is_cyclic() {
        or_rotated(dst, src, g % n, n);
        return;
    }
    for (wi, &w) in src.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            let b = w.trailing_zeros() as u64;
            w &= w - 1;
            let y = group.add(wi as u64 * 64 + b, g);
            dst[(y / 64) as usize] |= 1 << (y % 64);
        }
    }
}

/// `dst |= rotl(src, k)` on an `n`-bit cyclic bitset.
#[inline]
pub(crate) fn or_rotated(dst: &mut [u64], src: &[u64], k: u64, n: u64) {
    if n <= 64 {
        let x = src[0];
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let rot = if k == 0 { x } else { (x << k) | (x >> (n - k)) };
        dst[0] |= rot & mask;
        return;
    }
    if k == 0 {
        for (d, s) in dst.iter_mut().zip(src) {
            *d |= s;
        }
        return;
    }
    shl_or(dst, src, k);
    shr_or(dst, src, n - k);
    let tail = n % 64;
    if tail != 0 {
        let last = dst.len() - 1;
        dst[last] &= (1u64 << tail) - 1;
    }
}

fn shl_or(dst: &mut [u64], src: &[u64], k: u64) {
    let ws = (k / 64) as usize;
    let bs = k % 64;
    let len = dst.len();
    for (i, &w) in src.iter().enumerate() {
        if w == 0 || i + ws >= len {
            continue;
        }
        dst[i + ws] |= w << bs;
        if bs > 0 && i + ws + 1 < len {
            dst[i + ws + 1] |= w >> (64 - bs);
        }
    }
}

fn shr_or(dst: &mut [u64], src: &[u64], k: u64) {
    let ws = (k / 64) as usize;
    let bs = k % 64;
    for (i, &w) in src.iter().enumerate() {
        if w == 0 || i < ws {
            continue;
        }
        dst[i - ws] |= w >> bs;
        if bs > 0 && i > ws {
            dst[i - ws - 1] |= w << (64 - bs);
        }
    }
}

/// `dst = src (+) { src + w*x : w in A } (+) { w*x }`, the one-element
/// extension step of the reachable-sum fold.
pub(crate) fn extend_reachable(dst: &mut [u64], src: &[u64], x: u64, weights: &Weights) {
    dst.copy_from_slice(src);
    let group = weights.group();
    // src with the empty sum 0 adjoined
    let with_zero: Vec<u64>;
    let base: &[u64] = if src[0] & 1 == 1 {
        src
    } else {
        let mut v = src.to_vec();
        v[0] |= 1;
        with_zero = v;
        &with_zero
    };
    for wi in 0..weights.len() {
        or_translated(dst, base, weights.image(wi, x), group);
    }
}

fn check_group(seq: &ZSequence, weights: &Weights) {
    assert_eq!(
        seq.group(),
        weights.group(),
        "sequence and weights live in different groups"
    );
}

/// `{ sum eps_i x_{j_i} }` over all non-empty subsequences and weight choices.
pub fn reachable_sums(seq: &ZSequence, weights: &Weights) -> ReachableSet {
    check_group(seq, weights);
    let order = seq.group().order();
    let mut cur = ReachableSet::empty(order);
    let mut next = ReachableSet::empty(order);
    for &x in seq.elements() {
        extend_reachable(&mut next.words, &cur.words, x, weights);
        std::mem::swap(&mut cur, &mut next);
    }
    cur
}

pub fn has_weighted_zero_sum(seq: &ZSequence, weights: &Weights) -> bool {
    reachable_sums(seq, weights).contains(0)
}

/// Witness for a weighted zero sum: `sum weights[i] * S[indices[i]] = 0`.
///
/// Indices are 0-based positions in the sorted sequence; weights are ring
/// element codes (plain residues for a cyclic group).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Certificate {
    pub indices: Vec<usize>,
    pub weights: Vec<u64>,
}

impl Certificate {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn verify(&self, seq: &ZSequence, weights: &Weights) -> bool {
        let g = seq.group();
        !self.indices.is_empty()
            && self.indices.len() == self.weights.len()
            && self.indices.windows(2).all(|w| w[0] < w[1])
            && self.indices.iter().all(|&i| i < seq.len())
            && self
                .weights
                .iter()
                .all(|w| weights.codes().binary_search(w).is_ok())
            && self
                .indices
                .iter()
                .zip(&self.weights)
                .fold(0, |acc, (&i, &w)| g.add(acc, g.mul(w, seq.elements()[i])))
                == 0
    }
}

/// Shortest certificate; ties go to the lexicographically smallest index
/// list, then the smallest weight list.
pub fn extract_certificate(seq: &ZSequence, weights: &Weights) -> Option<Certificate> {
    check_group(seq, weights);
    if !has_weighted_zero_sum(seq, weights) {
        return None;
    }
    let group = seq.group();
    let order = group.order();
    let xs = seq.elements();
    let len = xs.len();

    // layers[c][i]: sums of exactly c weighted elements taken from positions i..len
    let zero = ReachableSet::singleton(order, 0);
    let mut layers: Vec<Vec<ReachableSet>> = vec![vec![zero.clone(); len + 1]];
    let t = loop {
        let c = layers.len();
        let prev = &layers[c - 1];
        let mut layer = vec![ReachableSet::empty(order); len + 1];
        for i in (0..len).rev() {
            let mut acc = layer[i + 1].clone();
            for wi in 0..weights.len() {
                or_translated(&mut acc.words, &prev[i + 1].words, weights.image(wi, xs[i]), group);
            }
            layer[i] = acc;
        }
        let done = layer[0].contains(0);
        layers.push(layer);
        if done {
            break c;
        }
    };

    // index list
    let mut needed = zero.clone();
    let mut indices = Vec::with_capacity(t);
    let mut start = 0;
    for remaining in (0..t).rev() {
        let mut chosen = None;
        for (j, &x) in xs.iter().enumerate().skip(start) {
            let mut next = ReachableSet::empty(order);
            for wi in 0..weights.len() {
                let shift = group.neg(weights.image(wi, x));
                or_translated(&mut next.words, &needed.words, shift, group);
            }
            next.intersect_with(&layers[remaining][j + 1]);
            if !next.is_empty() {
                chosen = Some((j, next));
                break;
            }
        }
        let (j, next) = chosen.expect("layer table guarantees a feasible index");
        indices.push(j);
        needed = next;
        start = j + 1;
    }

    // weight list for the fixed indices: tails[r] = sums over indices[r..]
    let mut tails = vec![zero.clone(); t + 1];
    for r in (0..t).rev() {
        let mut acc = ReachableSet::empty(order);
        for wi in 0..weights.len() {
            or_translated(&mut acc.words, &tails[r + 1].words, weights.image(wi, xs[indices[r]]), group);
        }
        tails[r] = acc;
    }
    let mut target = 0;
    let mut ws = Vec::with_capacity(t);
    for r in 0..t {
        let x = xs[indices[r]];
        let wi = (0..weights.len())
            .find(|&wi| tails[r + 1].contains(group.add(target, group.neg(weights.image(wi, x)))))
            .expect("tail table guarantees a feasible weight");
        target = group.add(target, group.neg(weights.image(wi, x)));
        ws.push(weights.codes()[wi]);
    }
    debug_assert_eq!(target, 0);
    Some(Certificate {
        indices,
        weights: ws,
    })
}

/// Independent check by enumerating every weight-or-skip assignment.
pub fn brute_force_oracle(seq: &ZSequence, weights: &Weights) -> Result<bool> {
    check_group(seq, weights);
    if seq.len() > ORACLE_MAX_LEN {
        return Err(Error::TooLarge {
            what: "brute-force oracle sequence length",
            size: seq.len() as u64,
            limit: ORACLE_MAX_LEN as u64,
        });
    }
    fn go(g: &AbelianGroup, xs: &[u64], ws: &[u64], acc: u64, picked: bool) -> bool {
        match xs.split_first() {
            None => picked && acc == 0,
            Some((&x, rest)) => {
                go(g, rest, ws, acc, picked)
                    || ws
                        .iter()
                        .any(|&w| go(g, rest, ws, g.add(acc, g.mul(w, x)), true))
            }
        }
    }
    Ok(go(seq.group(), seq.elements(), weights.codes(), 0, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modring::{crt_split, psi};

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn ws(n: u64, w: &[i64]) -> Weights {
        Weights::from(&WeightSet::new(m(n), w.iter().copied()).unwrap())
    }

    #[test]
    fn empty_sequence_is_zero_sum_free() {
        let s = ZSequence::cyclic(m(12), []);
        let w = ws(12, &[1, 5]);
        assert!(reachable_sums(&s, &w).is_empty());
        assert!(!has_weighted_zero_sum(&s, &w));
        assert_eq!(extract_certificate(&s, &w), None);
        assert_eq!(brute_force_oracle(&s, &w), Ok(false));
    }

    #[test]
    fn signed_powers_of_two_in_z8() {
        let s = ZSequence::cyclic(m(8), [1, 2, 4]);
        let r = reachable_sums(&s, &ws(8, &[1, 7]));
        assert_eq!(r.iter().collect::<Vec<_>>(), (1..8).collect::<Vec<_>>());
    }

    #[test]
    fn lower_bound_witness_in_z12() {
        // (4, 9, 9, 9) is the pullback of ((1,0), (0,1), (0,1), (0,1)) for split (3, 4)
        let s = ZSequence::cyclic(m(12), [4, 9, 9, 9]);
        let w = ws(12, &[1, 5]);
        let r = reachable_sums(&s, &w);
        assert!(!r.contains(0));
        // frozen from the brute-force enumeration of all 4^4 - 1 choices
        let mut brute = [false; 12];
        for code in 1..81u32 {
            let mut c = code;
            let mut acc = 0;
            for &x in s.elements() {
                match c % 3 {
                    1 => acc += x,
                    2 => acc += 5 * x,
                    _ => {}
                }
                c /= 3;
            }
            brute[(acc % 12) as usize] = true;
        }
        let expected: Vec<u64> = (0..12).filter(|&v| brute[v as usize]).collect();
        assert_eq!(r.iter().collect::<Vec<_>>(), expected);
        assert_eq!(expected, vec![1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11]);
    }

    #[test]
    fn zero_element_forces_zero_sum() {
        for n in 2..20 {
            let s = ZSequence::cyclic(m(n), [0, 1]);
            assert!(has_weighted_zero_sum(&s, &ws(n, &[1])));
        }
    }

    #[test]
    fn unit_repeated_n_minus_one_times_is_free() {
        for n in 2..40u64 {
            for g in m(n).units() {
                let s = ZSequence::cyclic(m(n), vec![g; n as usize - 1]);
                assert!(!has_weighted_zero_sum(&s, &ws(n, &[1])), "n={n} g={g}");
                assert!(has_weighted_zero_sum(&s.pushed(g), &ws(n, &[1])));
            }
        }
    }

    #[test]
    fn certificate_examples() {
        let w = ws(12, &[1, 5]);
        let c = extract_certificate(&ZSequence::cyclic(m(12), [0, 3, 5]), &w).unwrap();
        assert_eq!(c.indices, vec![0]);
        assert_eq!(c.weights, vec![1]);
        assert_eq!(extract_certificate(&ZSequence::cyclic(m(12), [1, 1]), &w), None);

        let s = ZSequence::cyclic(m(12), [2, 10]);
        let c = extract_certificate(&s, &ws(12, &[1, 11])).unwrap();
        assert_eq!(c.indices, vec![0, 1]);
        assert_eq!(c.weights, vec![1, 1]);
        assert!(c.verify(&s, &ws(12, &[1, 11])));
    }

    #[test]
    fn certificate_is_shortest_and_lexicographic() {
        // over Z_12 with A = {1}: 4 + 8 is the only vanishing pair, 1 + 3 + 8 a triple
        let s = ZSequence::cyclic(m(12), [1, 3, 4, 8]);
        let c = extract_certificate(&s, &ws(12, &[1])).unwrap();
        assert_eq!(c.indices, vec![2, 3]);
        // long forced certificate
        let s = ZSequence::cyclic(m(9), vec![1; 9]);
        let c = extract_certificate(&s, &ws(9, &[1])).unwrap();
        assert_eq!(c.indices, (0..9).collect::<Vec<_>>());
    }

    #[test]
    fn oracle_examples() {
        let s = ZSequence::cyclic(m(12), [6]);
        assert_eq!(brute_force_oracle(&s, &ws(12, &[1, 5])), Ok(false));
        let big = ZSequence::cyclic(m(12), vec![1; 17]);
        assert!(matches!(
            brute_force_oracle(&big, &ws(12, &[1])),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn multiword_rotation_matches_per_bit() {
        for n in [65u64, 100, 128, 129, 200] {
            let group = AbelianGroup::cyclic(m(n)).unwrap();
            let mut src = vec![0u64; words_for(n)];
            for x in (0..n).filter(|x| (x * 7 + 3) % 5 < 2) {
                src[(x / 64) as usize] |= 1 << (x % 64);
            }
            for k in [0, 1, 63, 64, 65, n - 1] {
                let mut fast = vec![0u64; src.len()];
                or_rotated(&mut fast, &src, k, n);
                let mut slow = vec![0u64; src.len()];
                for x in 0..n {
                    if src[(x / 64) as usize] >> (x % 64) & 1 == 1 {
                        let y = group.add(x, k);
                        slow[(y / 64) as usize] |= 1 << (y % 64);
                    }
                }
                assert_eq!(fast, slow, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn psi_transport_on_small_moduli() {
        let mut seed = 12345u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for n in 2..=40u64 {
            for s in crate::modring::involutions(m(n)) {
                let Ok(split) = crt_split(m(n), s) else { continue };
                let w = ws(n, &[1, s as i64]);
                let pw = Weights::split_image(&split);
                for _ in 0..40 {
                    let len = (next() % 7) as usize;
                    let els: Vec<u64> = (0..len).map(|_| next() % n).collect();
                    let seq = ZSequence::cyclic(m(n), els.iter().copied());
                    let image: Vec<Vec<u64>> = els
                        .iter()
                        .map(|&a| {
                            let (p, q) = psi(a, &split);
                            vec![p, q]
                        })
                        .collect();
                    let pseq = ZSequence::from_vectors(pw.group().clone(), &image);
                    assert_eq!(
                        has_weighted_zero_sum(&seq, &w),
                        has_weighted_zero_sum(&pseq, &pw),
                        "n={n} s={s} seq={seq}"
                    );
                }
            }
        }
    }

    #[test]
    fn product_group_arithmetic() {
        let g = AbelianGroup::product(&[3, 4]).unwrap();
        assert_eq!(g.order(), 12);
        let a = g.encode(&[2, 3]);
        let b = g.encode(&[2, 2]);
        assert_eq!(g.decode(g.add(a, b)), vec![1, 1]);
        assert_eq!(g.decode(g.neg(a)), vec![1, 1]);
        assert_eq!(g.decode(g.mul(a, b)), vec![1, 2]);
        assert!(AbelianGroup::product(&[1, 4]).is_err());
        assert!(AbelianGroup::power(m(17), 4).is_err());
    }
}
