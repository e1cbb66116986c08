//! The group `G = C_n x|_s C_2 = <x, y | x^2 = 1, y^n = 1, yx = xy^s>`.
//!
//! Elements are written `x^eps y^a` and multiply as
//! `(e1, a1) (e2, a2) = (e1 xor e2, a1 s^e2 + a2)`. The dihedral group is
//! the case `s = n - 1`.
//!
//! Product-one detection works on sets of achievable products stored as
//! `2n`-bit masks, with element `(eps, a)` at bit `eps * n + a`.

use std::collections::BTreeSet;
use std::fmt;

use crate::davenport::{fan_out, SearchBudget, Shared};
use crate::error::{Error, Result};
use crate::modring::{crt_split, divisors, gcd, CrtSplit, Modulus};

/// Largest `n` handled by the bitmask engine (`2n <= 128`).
pub const MAX_DP_N: u64 = 64;

/// Largest sequence accepted by [`has_product_one_subsequence`].
pub const MAX_SUBSET_DP_LEN: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupSpec {
    n: u64,
    s: u64,
}

impl GroupSpec {
    pub fn new(n: u64, s: u64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidModulus(n));
        }
        let md = Modulus::new(n)?;
        if s >= n || md.mul(s, s) != 1 {
            return Err(Error::InvalidS { n, s });
        }
        Ok(GroupSpec { n, s })
    }

    pub fn dihedral(n: u64) -> Result<Self> {
        Self::new(n, n.saturating_sub(1))
    }

    #[inline]
    pub fn n(&self) -> u64 {
        self.n
    }

    #[inline]
    pub fn s(&self) -> u64 {
        self.s
    }

    #[inline]
    pub fn order(&self) -> u64 {
        2 * self.n
    }

    pub fn is_dihedral(&self) -> bool {
        self.s == self.n - 1
    }

    /// The CRT split of `n` for `s`; the dihedral case has none.
    pub fn split(&self) -> Result<CrtSplit> {
        crt_split(Modulus::new(self.n)?, self.s)
    }

    pub fn identity(&self) -> MetaElem {
        MetaElem { eps: 0, a: 0 }
    }

    pub fn mul(&self, g: MetaElem, h: MetaElem) -> MetaElem {
        let n = self.n as u128;
        let a1 = if h.eps == 1 {
            g.a as u128 * self.s as u128 % n
        } else {
            g.a as u128
        };
        MetaElem {
            eps: g.eps ^ h.eps,
            a: ((a1 + h.a as u128) % n) as u64,
        }
    }

    pub fn inv(&self, g: MetaElem) -> MetaElem {
        let n = self.n;
        if g.eps == 0 {
            MetaElem {
                eps: 0,
                a: (n - g.a % n) % n,
            }
        } else {
            // (1, a)^-1 = (1, -a s)
            let as_ = (g.a as u128 * self.s as u128 % n as u128) as u64;
            MetaElem {
                eps: 1,
                a: (n - as_) % n,
            }
        }
    }

    /// The automorphism `y -> y^u` (with `x` fixed) for a unit `u`.
    pub fn scale(&self, u: u64, g: MetaElem) -> MetaElem {
        MetaElem {
            eps: g.eps,
            a: (g.a as u128 * u as u128 % self.n as u128) as u64,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = MetaElem> + '_ {
        (0..self.order()).map(move |c| MetaElem::from_code(c, self.n))
    }

    fn check_dp_size(&self) -> Result<()> {
        if self.n > MAX_DP_N {
            return Err(Error::TooLarge {
                what: "metacyclic n for the product bitmask",
                size: self.n,
                limit: MAX_DP_N,
            });
        }
        Ok(())
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C_{} x|_{} C_2", self.n, self.s)
    }
}

/// `x^eps y^a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MetaElem {
    pub eps: u8,
    pub a: u64,
}

impl MetaElem {
    pub fn y(a: u64) -> Self {
        MetaElem { eps: 0, a }
    }

    pub fn xy(a: u64) -> Self {
        MetaElem { eps: 1, a }
    }

    #[inline]
    pub fn code(self, n: u64) -> u64 {
        self.eps as u64 * n + self.a
    }

    #[inline]
    pub fn from_code(code: u64, n: u64) -> Self {
        MetaElem {
            eps: (code / n) as u8,
            a: code % n,
        }
    }
}

impl fmt::Display for MetaElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.eps {
            0 => write!(f, "y^{}", self.a),
            _ => write!(f, "xy^{}", self.a),
        }
    }
}

pub fn mul(g: MetaElem, h: MetaElem, spec: &GroupSpec) -> MetaElem {
    spec.mul(g, h)
}

/// Self-check of the pairing identity `(a s + b) s = b s + a` and of
/// `xy^b * xy^a = y^(b s + a)`.
pub fn pairing_identity_check(alpha: u64, beta: u64, spec: &GroupSpec) -> bool {
    let n = Modulus::new(spec.n()).expect("n >= 3");
    let s = spec.s();
    let (alpha, beta) = (alpha % n.get(), beta % n.get());
    let lhs = n.mul(n.add(n.mul(alpha, s), beta), s);
    let rhs = n.add(n.mul(beta, s), alpha);
    lhs == rhs && spec.mul(MetaElem::xy(beta), MetaElem::xy(alpha)) == MetaElem::y(rhs)
}

/// A multiset over `G`, sorted by `(eps, a)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GSequence {
    spec: GroupSpec,
    elements: Vec<MetaElem>,
}

impl GSequence {
    pub fn new(spec: GroupSpec, elements: impl IntoIterator<Item = MetaElem>) -> Result<Self> {
        let mut els: Vec<MetaElem> = elements.into_iter().collect();
        for e in &els {
            if e.eps > 1 || e.a >= spec.n() {
                return Err(Error::InvalidArgument(format!("{e} is not an element of {spec}")));
            }
        }
        els.sort_unstable();
        Ok(GSequence {
            spec,
            elements: els,
        })
    }

    fn from_codes(spec: GroupSpec, codes: &[u64]) -> Self {
        let elements = codes
            .iter()
            .map(|&c| MetaElem::from_code(c, spec.n()))
            .collect();
        GSequence { spec, elements }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn elements(&self) -> &[MetaElem] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Image under `y -> y^u`, re-sorted.
    pub fn scaled(&self, u: u64) -> Self {
        let mut els: Vec<MetaElem> = self
            .elements
            .iter()
            .map(|&g| self.spec.scale(u, g))
            .collect();
        els.sort_unstable();
        GSequence {
            spec: self.spec,
            elements: els,
        }
    }

    /// Smallest image under the automorphisms `y -> y^u`.
    pub fn canonical(&self) -> Self {
        Modulus::new(self.spec.n())
            .expect("n >= 3")
            .units()
            .into_iter()
            .map(|u| self.scaled(u))
            .min()
            .expect("1 is a unit")
    }

    pub fn orbit(&self) -> Vec<GSequence> {
        let set: BTreeSet<GSequence> = Modulus::new(self.spec.n())
            .expect("n >= 3")
            .units()
            .into_iter()
            .map(|u| self.scaled(u))
            .collect();
        set.into_iter().collect()
    }
}

impl fmt::Display for GSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for run in self.elements.chunk_by(|a, b| a == b) {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if run.len() == 1 {
                write!(f, "{}", run[0])?;
            } else {
                write!(f, "({})^{}", run[0], run.len())?;
            }
        }
        Ok(())
    }
}

/// `order` lists positions in multiplication order; `positions` is the same
/// set sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderedCertificate {
    pub positions: Vec<usize>,
    pub order: Vec<usize>,
}

impl OrderedCertificate {
    pub fn verify(&self, seq: &GSequence) -> bool {
        let mut sorted = self.order.clone();
        sorted.sort_unstable();
        let spec = seq.spec();
        !self.order.is_empty()
            && sorted == self.positions
            && sorted.windows(2).all(|w| w[0] < w[1])
            && sorted.iter().all(|&p| p < seq.len())
            && self
                .order
                .iter()
                .fold(spec.identity(), |acc, &p| spec.mul(acc, seq.elements()[p]))
                == spec.identity()
    }
}

/// Right-multiplication tables on product bitmasks.
pub(crate) struct MulTable {
    n: u64,
    bytes: usize,
    // lut[(g * bytes + b) * 256 + v]
    lut: Vec<u128>,
}

impl MulTable {
    pub(crate) fn new(spec: &GroupSpec) -> Self {
        let order = spec.order();
        let bytes = order.div_ceil(8) as usize;
        let mut lut = vec![0u128; order as usize * bytes * 256];
        for g in 0..order {
            let ge = MetaElem::from_code(g, spec.n());
            for b in 0..bytes {
                let base = ((g as usize) * bytes + b) * 256;
                let images: Vec<u128> = (0..8)
                    .map(|i| {
                        let h = (b * 8 + i) as u64;
                        if h < order {
                            let p = spec.mul(MetaElem::from_code(h, spec.n()), ge);
                            1u128 << p.code(spec.n())
                        } else {
                            0
                        }
                    })
                    .collect();
                for v in 1..256usize {
                    let low = v & v.wrapping_neg();
                    lut[base + v] = lut[base + (v & (v - 1))] | images[low.trailing_zeros() as usize];
                }
            }
        }
        MulTable {
            n: spec.n(),
            bytes,
            lut,
        }
    }

    /// `{ h g : h in set }`.
    #[inline]
    pub(crate) fn right(&self, set: u128, g: u64) -> u128 {
        let mut out = 0;
        let base = g as usize * self.bytes;
        let mut rest = set;
        let mut b = 0;
        while rest != 0 {
            let v = (rest & 0xff) as usize;
            if v != 0 {
                out |= self.lut[(base + b) * 256 + v];
            }
            rest >>= 8;
            b += 1;
        }
        out
    }

    #[inline]
    fn n(&self) -> u64 {
        self.n
    }
}

/// Subset-product DP over position subsets, visited in increasing size.
/// Returns a shortest product-one subsequence with an ordering, if any.
pub fn has_product_one_subsequence(seq: &GSequence) -> Result<Option<OrderedCertificate>> {
    let spec = *seq.spec();
    spec.check_dp_size()?;
    let len = seq.len();
    if len > MAX_SUBSET_DP_LEN {
        return Err(Error::TooLarge {
            what: "subset-product DP sequence length",
            size: len as u64,
            limit: MAX_SUBSET_DP_LEN as u64,
        });
    }
    let n = spec.n();
    let table = MulTable::new(&spec);
    let codes: Vec<u64> = seq.elements().iter().map(|g| g.code(n)).collect();
    let mut prods = vec![0u128; 1 << len];
    prods[0] = 1;
    for size in 1..=len {
        let mut t: u64 = (1 << size) - 1;
        while t < 1 << len {
            let mut acc = 0;
            let mut bits = t;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                acc |= table.right(prods[(t & !(1 << i)) as usize], codes[i]);
            }
            prods[t as usize] = acc;
            if acc & 1 == 1 {
                return Ok(Some(backtrack(&spec, &codes, &prods, t)));
            }
            // next subset of the same popcount
            let c = t & t.wrapping_neg();
            let r = t + c;
            t = (((r ^ t) >> 2) / c) | r;
        }
    }
    Ok(None)
}

fn backtrack(spec: &GroupSpec, codes: &[u64], prods: &[u128], mut t: u64) -> OrderedCertificate {
    let n = spec.n();
    let mut target = spec.identity();
    let mut rev = Vec::new();
    let positions: Vec<usize> = (0..codes.len()).filter(|&i| t >> i & 1 == 1).collect();
    while t != 0 {
        let i = (0..codes.len())
            .filter(|&i| t >> i & 1 == 1)
            .find(|&i| {
                let prev = spec.mul(target, spec.inv(MetaElem::from_code(codes[i], n)));
                prods[(t & !(1 << i)) as usize] >> prev.code(n) & 1 == 1
            })
            .expect("DP table guarantees a predecessor");
        target = spec.mul(target, spec.inv(MetaElem::from_code(codes[i], n)));
        rev.push(i);
        t &= !(1 << i);
    }
    rev.reverse();
    OrderedCertificate {
        positions,
        order: rev,
    }
}

/// `n - 1` copies of `y^t` with `t` a unit, plus one `xy^r`.
pub fn is_claimed_extremal_form(seq: &GSequence) -> Result<bool> {
    let n = seq.spec().n();
    if seq.len() != n as usize {
        return Err(Error::WrongLength {
            expected: n as usize,
            got: seq.len(),
        });
    }
    let els = seq.elements();
    // sorted: the y^t block comes first and the xy^r last
    let t = els[0];
    Ok(t.eps == 0
        && gcd(t.a, n) == 1
        && els[..els.len() - 1].iter().all(|&g| g == t)
        && els[els.len() - 1].eps == 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub n: u64,
    pub s: u64,
    pub length: usize,
    /// The symmetry used to pick representatives.
    pub reduction: &'static str,
    /// Orbit representatives in the claimed family.
    pub claimed: Vec<GSequence>,
    /// Orbit representatives outside it.
    pub other: Vec<GSequence>,
    /// Number of sequences (not orbits) in each class.
    pub claimed_total: usize,
    pub other_total: usize,
    /// Set when the budget ran out; the lists are then incomplete.
    pub partial: bool,
}

pub const REDUCTION: &str = "y -> y^u for units u of Z_n (x fixed)";

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Exact(usize),
    Longest,
}

/// DFS over product-one-free sorted sequences. Each node keeps `P(c)`, the
/// set of products of sub-multiset `c` in every order, indexed in mixed
/// radix over the distinct elements so far; appending an element only adds
/// the block of sub-multisets that use the new copy.
struct MetaWorker<'a> {
    table: &'a MulTable,
    inverse: Vec<u64>,
    shared: &'a Shared,
    mode: Mode,
    cap: usize,
    // (code, multiplicity)
    distinct: Vec<(u64, usize)>,
    strides: Vec<usize>,
    prods: Vec<u128>,
    // unions[d]: products of all non-empty sub-multisets of the length-d prefix
    unions: Vec<u128>,
    prefix: Vec<u64>,
    best: usize,
    found: Vec<Vec<u64>>,
    digits: Vec<usize>,
}

#[derive(Default)]
struct MetaOutcome {
    best: usize,
    found: Vec<Vec<u64>>,
}

impl<'a> MetaWorker<'a> {
    fn new(spec: &GroupSpec, table: &'a MulTable, shared: &'a Shared, mode: Mode) -> Self {
        let cap = match mode {
            Mode::Exact(l) => l,
            Mode::Longest => 2 * spec.n() as usize,
        };
        let inverse = spec
            .elements()
            .map(|g| spec.inv(g).code(spec.n()))
            .collect();
        MetaWorker {
            table,
            inverse,
            shared,
            mode,
            cap,
            distinct: Vec::new(),
            strides: Vec::new(),
            prods: vec![1],
            unions: vec![0; cap + 1],
            prefix: Vec::with_capacity(cap),
            best: 0,
            found: Vec::new(),
            digits: Vec::new(),
        }
    }

    #[inline]
    fn admissible(&self, depth: usize, g: u64) -> bool {
        // S + g has a product-one subsequence iff g = 1 or g^-1 is a product
        // of some non-empty sub-multiset of S (rotate the ordering so the new
        // copy comes last).
        g != 0 && self.unions[depth] >> self.inverse[g as usize] & 1 == 0
    }

    fn push(&mut self, depth: usize, g: u64) {
        let same = self.distinct.last().is_some_and(|&(c, _)| c == g);
        if same {
            self.distinct.last_mut().expect("non-empty").1 += 1;
        } else {
            self.strides.push(self.prods.len());
            self.distinct.push((g, 1));
        }
        let r = self.distinct.len() - 1;
        let count = self.distinct[r].1;
        let w = self.strides[r];
        let base = count * w;
        debug_assert_eq!(base, self.prods.len());
        self.digits.clear();
        self.digits.resize(r, 0);
        let mut union = self.unions[depth];
        for j in 0..w {
            let idx = base + j;
            let mut acc = self.table.right(self.prods[idx - w], g);
            for i in 0..r {
                if self.digits[i] > 0 {
                    let e = self.distinct[i].0;
                    acc |= self.table.right(self.prods[idx - self.strides[i]], e);
                }
            }
            debug_assert_eq!(acc & 1, 0);
            union |= acc;
            self.prods.push(acc);
            // odometer over the lower digits
            for i in 0..r {
                self.digits[i] += 1;
                if self.digits[i] <= self.distinct[i].1 {
                    break;
                }
                self.digits[i] = 0;
            }
        }
        self.unions[depth + 1] = union;
        self.prefix.push(g);
    }

    fn pop(&mut self) {
        let r = self.distinct.len() - 1;
        let w = self.strides[r];
        let count = self.distinct[r].1;
        self.prods.truncate(count * w);
        if count == 1 {
            self.distinct.pop();
            self.strides.pop();
        } else {
            self.distinct[r].1 -= 1;
        }
        self.prefix.pop();
    }

    fn run_root(mut self, root: u64) -> MetaOutcome {
        if self.cap == 0 || !self.admissible(0, root) {
            return MetaOutcome::default();
        }
        self.push(0, root);
        self.descend(1);
        MetaOutcome {
            best: self.best,
            found: self.found,
        }
    }

    fn record(&mut self, depth: usize) {
        match self.mode {
            Mode::Exact(l) => {
                if depth == l {
                    self.found.push(self.prefix.clone());
                }
            }
            Mode::Longest => {
                if depth > self.best {
                    self.best = depth;
                    self.found.clear();
                    self.shared.raise_best(depth);
                }
                if depth == self.best && depth >= self.shared.best() {
                    self.found.push(self.prefix.clone());
                }
            }
        }
        self.best = self.best.max(depth);
    }

    fn descend(&mut self, depth: usize) -> bool {
        if !self.shared.tick() {
            return false;
        }
        self.record(depth);
        if depth >= self.cap {
            return true;
        }
        let order = 2 * self.table.n();
        let start = *self.prefix.last().expect("non-empty prefix");
        for g in start..order {
            if !self.admissible(depth, g) {
                continue;
            }
            self.push(depth, g);
            let ok = self.descend(depth + 1);
            self.pop();
            if !ok {
                return false;
            }
        }
        true
    }
}

/// First elements that still reach every `y -> y^u` orbit: `y^d` or `xy^d`
/// with `d | n`, and `x` itself.
fn canonical_roots(spec: &GroupSpec) -> Vec<u64> {
    let n = spec.n();
    let ds: Vec<u64> = divisors(n).into_iter().filter(|&d| d < n).collect();
    let mut roots: Vec<u64> = ds.iter().map(|&d| MetaElem::y(d).code(n)).collect();
    roots.push(MetaElem::xy(0).code(n));
    roots.extend(ds.iter().map(|&d| MetaElem::xy(d).code(n)));
    roots
}

struct MetaSearch {
    best: usize,
    found: Vec<Vec<u64>>,
    stopped: bool,
    nodes: u64,
    shared_best: usize,
}

fn run_search(spec: &GroupSpec, mode: Mode, budget: &SearchBudget) -> Result<MetaSearch> {
    spec.check_dp_size()?;
    let table = MulTable::new(spec);
    let shared = Shared::new(budget);
    let roots = canonical_roots(spec);
    let outcomes = fan_out(&roots, budget.parallel_width, |&r| {
        MetaWorker::new(spec, &table, &shared, mode).run_root(r)
    });
    let best = outcomes.iter().map(|o| o.best).max().unwrap_or(0);
    let mut found = Vec::new();
    for o in outcomes {
        if matches!(mode, Mode::Exact(_)) || o.best == best {
            found.extend(o.found);
        }
    }
    Ok(MetaSearch {
        best,
        found,
        stopped: shared.stopped(),
        nodes: shared.nodes(),
        shared_best: shared.best(),
    })
}

/// Enumerates all product-one-free sequences of the given length and splits
/// them into the claimed extremal family and everything else.
pub fn classify_extremal(
    spec: &GroupSpec,
    length: usize,
    budget: &SearchBudget,
) -> Result<Classification> {
    if length as u64 > spec.n() + 1 {
        return Err(Error::InvalidArgument(format!(
            "length {length} exceeds n + 1 = {}",
            spec.n() + 1
        )));
    }
    let found = if length == 0 {
        MetaSearch {
            best: 0,
            found: vec![Vec::new()],
            stopped: false,
            nodes: 0,
            shared_best: 0,
        }
    } else {
        run_search(spec, Mode::Exact(length), budget)?
    };
    let reps: BTreeSet<GSequence> = found
        .found
        .iter()
        .map(|codes| GSequence::from_codes(*spec, codes).canonical())
        .collect();
    let mut out = Classification {
        n: spec.n(),
        s: spec.s(),
        length,
        reduction: REDUCTION,
        claimed: Vec::new(),
        other: Vec::new(),
        claimed_total: 0,
        other_total: 0,
        partial: found.stopped,
    };
    for rep in reps {
        let size = rep.orbit().len();
        if length as u64 == spec.n() && is_claimed_extremal_form(&rep)? {
            out.claimed_total += size;
            out.claimed.push(rep);
        } else {
            out.other_total += size;
            out.other.push(rep);
        }
    }
    Ok(out)
}

/// Longest product-one-free sequence length `d(G)`, with one canonical
/// representative per orbit of longest sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmallDavenport {
    pub value: usize,
    pub witnesses: Vec<GSequence>,
    pub nodes: u64,
}

pub fn small_davenport(spec: &GroupSpec, budget: &SearchBudget) -> Result<SmallDavenport> {
    let res = run_search(spec, Mode::Longest, budget)?;
    if res.stopped {
        return Err(Error::BudgetExceeded {
            lower_bound: res.best.max(res.shared_best),
            nodes: res.nodes,
        });
    }
    let reps: BTreeSet<GSequence> = res
        .found
        .iter()
        .map(|codes| GSequence::from_codes(*spec, codes).canonical())
        .collect();
    Ok(SmallDavenport {
        value: res.best,
        witnesses: reps.into_iter().collect(),
        nodes: res.nodes,
    })
}
