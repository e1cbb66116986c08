//! Exact `D_A(Z_n)` and `D_A(Z_n^k)` by exhaustive search over zero-sum-free
//! sequences.
//!
//! Sequences are grown in nondecreasing element order, so every multiset is
//! visited once, and any extension that creates a weighted zero sum is cut
//! (zero-sum-freeness is hereditary). For cyclic groups the first element is
//! restricted to a divisor of `n`: scaling by a unit maps the element of
//! smallest `gcd(x, n)` to that gcd, and every other element is then at
//! least as large, so each unit-scaling orbit still gets visited.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::bounds;
use crate::error::{Error, Result};
use crate::modring::{crt_split, divisors, involutions, Modulus, WeightSet};
use crate::zsfree::{extend_reachable, words_for, AbelianGroup, Weights, ZSequence};

/// Largest `n^k` accepted by [`exact_davenport_k`].
pub const MAX_POWER_ORDER: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_seconds: f64,
    pub parallel_width: usize,
}

impl SearchBudget {
    pub fn new(max_nodes: u64, max_seconds: f64, parallel_width: usize) -> Result<Self> {
        if max_nodes == 0 || max_seconds.is_nan() || max_seconds <= 0.0 || parallel_width == 0 {
            return Err(Error::InvalidArgument(
                "search budget fields must all be positive".into(),
            ));
        }
        Ok(SearchBudget {
            max_nodes,
            max_seconds,
            parallel_width,
        })
    }

    pub fn with_width(self, parallel_width: usize) -> Self {
        SearchBudget {
            parallel_width: parallel_width.max(1),
            ..self
        }
    }

    pub fn with_seconds(self, max_seconds: f64) -> Self {
        SearchBudget { max_seconds, ..self }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: u64::MAX,
            max_seconds: 60.0,
            parallel_width: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactResult {
    /// `D_A` (or a lower bound when not exhaustive).
    pub constant: usize,
    pub max_zsf_length: usize,
    /// Extremal zero-sum-free sequences, one canonical representative per
    /// unit-scaling orbit, sorted.
    pub witnesses: Vec<ZSequence>,
    pub exhaustive: bool,
    pub nodes: u64,
}

/// How [`enumerate_extremal`] reduces its output.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reduction {
    /// Every sorted sequence.
    None,
    /// One lexicographically smallest representative per orbit under
    /// multiplication by a unit.
    UnitOrbits,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extremal {
    pub reduction: Reduction,
    pub length: usize,
    pub sequences: Vec<ZSequence>,
}

pub(crate) struct Shared {
    nodes: AtomicU64,
    best: AtomicUsize,
    stop: AtomicBool,
    max_nodes: u64,
    deadline: Instant,
}

impl Shared {
    pub(crate) fn new(budget: &SearchBudget) -> Self {
        let secs = budget.max_seconds.clamp(0.0, 1e9);
        Shared {
            nodes: AtomicU64::new(0),
            best: AtomicUsize::new(0),
            stop: AtomicBool::new(false),
            max_nodes: budget.max_nodes,
            deadline: Instant::now() + Duration::from_secs_f64(secs),
        }
    }

    /// Counts one node; false once the budget is spent.
    #[inline]
    pub(crate) fn tick(&self) -> bool {
        if self.stop.load(Ordering::Relaxed) {
            return false;
        }
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.max_nodes || (n.is_multiple_of(4096) && Instant::now() >= self.deadline) {
            self.stop.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    pub(crate) fn raise_best(&self, depth: usize) {
        self.best.fetch_max(depth, Ordering::Relaxed);
    }

    pub(crate) fn best(&self) -> usize {
        self.best.load(Ordering::Relaxed)
    }

    pub(crate) fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed).min(self.max_nodes)
    }

    pub(crate) fn stopped(&self) -> bool {
        self.stop.load(Ordering::Relaxed)
    }
}

/// Runs `f` over `items` on `width` threads, keeping input order.
pub(crate) fn fan_out<T, R, F>(items: &[T], width: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    if width <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(width).build() {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(_) => items.iter().map(f).collect(),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Extremal,
    All,
}

struct Worker<'a> {
    weights: &'a Weights,
    shared: &'a Shared,
    mode: Mode,
    cap: usize,
    words: usize,
    stack: Vec<u64>,
    prefix: Vec<u64>,
    best: usize,
    found: Vec<Vec<u64>>,
    cap_hit: bool,
}

#[derive(Default)]
struct Outcome {
    best: usize,
    found: Vec<Vec<u64>>,
    cap_hit: bool,
}

impl<'a> Worker<'a> {
    fn new(weights: &'a Weights, shared: &'a Shared, mode: Mode, cap: usize) -> Self {
        let words = words_for(weights.group().order());
        Worker {
            weights,
            shared,
            mode,
            cap,
            words,
            stack: vec![0; (cap + 1) * words],
            prefix: Vec::with_capacity(cap),
            best: 0,
            found: Vec::new(),
            cap_hit: false,
        }
    }

    /// True when appending `x` to a prefix with reachable set `reach` keeps
    /// the sequence zero-sum-free.
    #[inline]
    fn admissible(weights: &Weights, reach: &[u64], x: u64) -> bool {
        let group = weights.group();
        (0..weights.len()).all(|wi| {
            let y = group.neg(weights.image(wi, x));
            y != 0 && reach[(y / 64) as usize] >> (y % 64) & 1 == 0
        })
    }

    fn run_root(mut self, root: u64) -> Outcome {
        let w = self.words;
        if self.cap == 0 || !Self::admissible(self.weights, &self.stack[..w], root) {
            return Outcome::default();
        }
        let (lo, hi) = self.stack.split_at_mut(w);
        extend_reachable(&mut hi[..w], lo, root, self.weights);
        self.prefix.push(root);
        self.descend(1);
        Outcome {
            best: self.best,
            found: self.found,
            cap_hit: self.cap_hit,
        }
    }

    fn record(&mut self, depth: usize) {
        match self.mode {
            Mode::All => self.found.push(self.prefix.clone()),
            Mode::Extremal => {
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
            self.cap_hit = true;
            return true;
        }
        let w = self.words;
        let order = self.weights.group().order();
        let start = *self.prefix.last().expect("non-empty prefix");
        for x in start..order {
            let (lo, hi) = self.stack.split_at_mut((depth + 1) * w);
            let reach = &lo[depth * w..];
            if !Self::admissible(self.weights, reach, x) {
                continue;
            }
            extend_reachable(&mut hi[..w], reach, x, self.weights);
            self.prefix.push(x);
            let ok = self.descend(depth + 1);
            self.prefix.pop();
            if !ok {
                return false;
            }
        }
        true
    }
}

struct SearchOutput {
    best: usize,
    found: Vec<Vec<u64>>,
    cap_hit: bool,
    nodes: u64,
}

fn search(
    weights: &Weights,
    cap: usize,
    roots: &[u64],
    mode: Mode,
    budget: &SearchBudget,
) -> Result<SearchOutput> {
    let shared = Shared::new(budget);
    let outcomes = fan_out(roots, budget.parallel_width, |&r| {
        Worker::new(weights, &shared, mode, cap).run_root(r)
    });
    let best = outcomes.iter().map(|o| o.best).max().unwrap_or(0);
    if shared.stopped() {
        return Err(Error::BudgetExceeded {
            lower_bound: best.max(shared.best()) + 1,
            nodes: shared.nodes(),
        });
    }
    let cap_hit = outcomes.iter().any(|o| o.cap_hit);
    let mut found = Vec::new();
    for o in outcomes {
        if mode == Mode::All || o.best == best {
            found.extend(o.found);
        }
    }
    if mode == Mode::Extremal && best == 0 {
        found.push(Vec::new());
    }
    Ok(SearchOutput {
        best,
        found,
        cap_hit,
        nodes: shared.nodes(),
    })
}

/// Scalar units of the group: `u` or `(u, ..., u)` with `u` a unit mod `n`.
fn scalar_units(group: &AbelianGroup) -> Vec<u64> {
    let n = Modulus::new(group.moduli()[0]).expect("valid modulus");
    n.units().into_iter().map(|u| group.diagonal(u)).collect()
}

/// Lexicographically smallest sorted `u * S` over scalar units `u`.
pub fn canonical_orbit_rep(seq: &ZSequence) -> ZSequence {
    scalar_units(seq.group())
        .into_iter()
        .map(|u| seq.scaled(u))
        .min()
        .expect("1 is always a unit")
}

/// The whole unit-scaling orbit of `seq`, sorted and deduplicated.
pub fn unit_orbit(seq: &ZSequence) -> Vec<ZSequence> {
    let set: BTreeSet<ZSequence> = scalar_units(seq.group())
        .into_iter()
        .map(|u| seq.scaled(u))
        .collect();
    set.into_iter().collect()
}

/// Depth cap from the closed-form upper bound when `A = {1, s}` for a split involution `s`.
fn sandwich_cap(weights: &WeightSet) -> Option<usize> {
    let w = weights.weights();
    if w.len() != 2 || w[0] != 1 {
        return None;
    }
    let n = weights.modulus();
    if !involutions(n).contains(&w[1]) {
        return None;
    }
    crt_split(n, w[1])
        .ok()
        .map(|sp| bounds::upper_bound(&sp) as usize)
}

fn result_from(out: SearchOutput, group: &AbelianGroup) -> ExactResult {
    let reps: BTreeSet<ZSequence> = out
        .found
        .into_iter()
        .map(|els| canonical_orbit_rep(&ZSequence::from_sorted_unchecked(group.clone(), els)))
        .collect();
    ExactResult {
        constant: out.best + 1,
        max_zsf_length: out.best,
        witnesses: reps.into_iter().collect(),
        exhaustive: !out.cap_hit,
        nodes: out.nodes,
    }
}

/// Exact `D_A(Z_n)`.
///
/// For `A = {1, s}` with a valid split the search stops at the closed-form
/// upper bound; reaching that depth would refute the bound, and the result
/// then comes back with `exhaustive = false`.
pub fn exact_davenport(weights: &WeightSet, budget: &SearchBudget) -> Result<ExactResult> {
    let n = weights.modulus();
    let ws = Weights::from(weights);
    let cap = sandwich_cap(weights).unwrap_or(n.get() as usize);
    let roots: Vec<u64> = divisors(n.get())
        .into_iter()
        .filter(|&d| d < n.get())
        .collect();
    let out = search(&ws, cap, &roots, Mode::Extremal, budget)?;
    Ok(result_from(out, ws.group()))
}

/// Exact `D_A(Z_n^k)` with `A` acting diagonally.
pub fn exact_davenport_k(
    weights: &WeightSet,
    k: usize,
    budget: &SearchBudget,
) -> Result<ExactResult> {
    let n = weights.modulus().get();
    let order = (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if k == 0 {
        return Err(Error::InvalidArgument("rank k must be at least 1".into()));
    }
    if order > MAX_POWER_ORDER as u128 {
        return Err(Error::TooLarge {
            what: "n^k",
            size: order.min(u64::MAX as u128) as u64,
            limit: MAX_POWER_ORDER,
        });
    }
    if k == 1 {
        return exact_davenport(weights, budget);
    }
    let ws = Weights::scalar(weights, k)?;
    let order = ws.group().order();
    let roots: Vec<u64> = (1..order).collect();
    let out = search(&ws, order as usize, &roots, Mode::Extremal, budget)?;
    Ok(result_from(out, ws.group()))
}

/// All zero-sum-free sequences of maximum length.
pub fn enumerate_extremal(
    weights: &WeightSet,
    budget: &SearchBudget,
    reduction: Reduction,
) -> Result<Extremal> {
    let res = exact_davenport(weights, budget)?;
    if !res.exhaustive {
        return Err(Error::BudgetExceeded {
            lower_bound: res.constant,
            nodes: res.nodes,
        });
    }
    let sequences = match reduction {
        Reduction::UnitOrbits => res.witnesses,
        Reduction::None => {
            let all: BTreeSet<ZSequence> = res.witnesses.iter().flat_map(unit_orbit).collect();
            all.into_iter().collect()
        }
    };
    Ok(Extremal {
        reduction,
        length: res.max_zsf_length,
        sequences,
    })
}

/// Every zero-sum-free sorted sequence of length `1..=max_len`, in
/// DFS order.
pub fn zero_sum_free_sequences(
    weights: &Weights,
    max_len: usize,
    budget: &SearchBudget,
) -> Result<Vec<ZSequence>> {
    let order = weights.group().order();
    let roots: Vec<u64> = (1..order).collect();
    let out = search(weights, max_len, &roots, Mode::All, budget)?;
    Ok(out
        .found
        .into_iter()
        .map(|els| ZSequence::from_sorted_unchecked(weights.group().clone(), els))
        .collect())
}

/// The three numbers compared for one `(n, s)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SandwichReport {
    pub n: u64,
    pub s: u64,
    pub n1: u64,
    pub n2: u64,
    pub lower: u64,
    pub exact: u64,
    pub upper: u64,
}

/// Computes `D_{1,s}(Z_n)` and checks it against both closed-form bounds.
pub fn verify_sandwich(n: Modulus, s: u64, budget: &SearchBudget) -> Result<SandwichReport> {
    let split = crt_split(n, s)?;
    let lower = bounds::lower_bound(&split);
    let upper = bounds::upper_bound(&split);
    let res = exact_davenport(&WeightSet::one_and(n, s)?, budget)?;
    let exact = res.constant as u64;
    if !res.exhaustive || exact < lower || exact > upper {
        return Err(Error::BoundViolation {
            n: n.get(),
            s,
            lower,
            exact,
            upper,
        });
    }
    Ok(SandwichReport {
        n: n.get(),
        s,
        n1: split.n1(),
        n2: split.n2(),
        lower,
        exact,
        upper,
    })
}
