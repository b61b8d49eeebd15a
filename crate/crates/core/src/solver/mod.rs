//! Exact Stanley depth of a set family by interval-partition search.
//!
//! Deciding `sdepth >= k` only needs intervals whose upper bound has size
//! exactly `k`: every member smaller than `k` goes into such an interval and
//! everything else stays trivial. This is an exact cover problem. The search
//! picks the uncovered member below level `k` with the fewest intervals
//! `[b, t]`, `|t| = k`, that could still cover it, branches over those, and
//! prunes with the combinatorial criterion on the residual counts.

mod matching;
mod memo;
pub mod naive;

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use dashmap::DashMap;

use crate::criteria::criterion_holds;
use crate::lattice::{submasks, Antichain, Interval, IntervalPartition, SetFamily};

pub use matching::{hopcroft_karp, lemma_partition, matching_cover};
use memo::FailMemo;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverOptions {
    /// Also run the strong criterion on residual up sets after each placement.
    pub strong_prune: bool,
    /// Maximum number of failed residual states remembered per search.
    pub memo_capacity: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { strong_prune: false, memo_capacity: 1 << 16 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Achievable(IntervalPartition),
    Impossible,
}

impl Decision {
    pub fn is_achievable(&self) -> bool {
        matches!(self, Decision::Achievable(_))
    }

    pub fn witness(&self) -> Option<&IntervalPartition> {
        match self {
            Decision::Achievable(p) => Some(p),
            Decision::Impossible => None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub memo_hits: u64,
    pub criterion_prunes: u64,
}

impl SearchStats {
    fn absorb(&mut self, other: SearchStats) {
        self.nodes += other.nodes;
        self.memo_hits += other.memo_hits;
        self.criterion_prunes += other.criterion_prunes;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SdepthAnswer {
    pub value: usize,
    /// Partition achieving `value` (empty for the empty family).
    pub witness: IntervalPartition,
    pub node_count: u64,
    /// Set when the family was empty and `value = n` is a convention.
    pub empty_convention: bool,
}

#[derive(Debug, Clone, Default)]
pub struct Solver {
    options: SolverOptions,
}

impl Solver {
    pub fn new(options: SolverOptions) -> Self {
        Self { options }
    }

    pub fn options(&self) -> SolverOptions {
        self.options
    }

    /// Decides whether `family` has a partition with every top of size at
    /// least `k`; the witness, if any, uses tops of size exactly `k` for
    /// every member below `k` and trivial intervals elsewhere.
    pub fn decide(&self, family: &SetFamily, k: usize) -> (Decision, SearchStats) {
        let n = family.n();
        if k > n {
            return (Decision::Impossible, SearchStats::default());
        }
        let mut search = Search::new(family, k, self.options);
        let mut stats = SearchStats::default();
        let found = search.run(&mut stats);
        let decision = if found {
            Decision::Achievable(search.witness(family))
        } else {
            Decision::Impossible
        };
        (decision, stats)
    }

    /// Exact Stanley depth: the largest achievable `k`, scanning upward from
    /// the smallest member size until the first impossible level.
    pub fn sdepth(&self, family: &SetFamily) -> SdepthAnswer {
        let n = family.n();
        if family.is_empty() {
            return SdepthAnswer {
                value: n,
                witness: IntervalPartition::new(n, Vec::new()),
                node_count: 0,
                empty_convention: true,
            };
        }
        // each maximal member tops its own interval
        let upper = family.maximal_elements().min_size().unwrap_or(n);
        let lower = family.iter().map(|s| s.cardinality()).min().unwrap_or(0);
        let mut value = lower;
        let mut witness = IntervalPartition::new(n, family.iter().map(Interval::trivial).collect());
        let mut stats = SearchStats::default();
        for k in lower + 1..=upper {
            let (decision, s) = self.decide(family, k);
            stats.absorb(s);
            match decision {
                Decision::Achievable(p) => {
                    value = k;
                    witness = p;
                }
                Decision::Impossible => break,
            }
        }
        SdepthAnswer { value, witness, node_count: stats.nodes, empty_convention: false }
    }
}

/// [`Solver::decide`] with default options.
pub fn decide_sdepth_at_least(family: &SetFamily, k: usize) -> Decision {
    Solver::default().decide(family, k).0
}

/// [`Solver::sdepth`] with default options.
pub fn sdepth(family: &SetFamily) -> SdepthAnswer {
    Solver::default().sdepth(family)
}

/// Stanley depth of `D[facets]`, independent of the ground set size.
pub fn quotient_sdepth(facets: &Antichain) -> usize {
    sdepth(&crate::lattice::down_closure(facets)).value
}

/// Stanley depth of `2^n - D[facets]`.
pub fn ideal_sdepth(facets: &Antichain) -> usize {
    sdepth(&crate::lattice::complement_upset(facets)).value
}

/// Concurrent memo of quotient Stanley depths keyed by canonical form.
#[derive(Debug, Default)]
pub struct SdepthCache {
    map: DashMap<Antichain, usize>,
}

impl SdepthCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// `sdepth(D[facets])`, computed once per isomorphism class.
    pub fn quotient_sdepth(&self, facets: &Antichain) -> usize {
        let key = crate::enumeration::canonical_form(facets)
            .map(|c| c.into_antichain())
            .unwrap_or_else(|_| facets.clone());
        if let Some(v) = self.map.get(&key) {
            return *v;
        }
        let value = quotient_sdepth(&key);
        *self.map.entry(key).or_insert(value)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

struct Search {
    n: usize,
    k: usize,
    options: SolverOptions,
    /// Members of size `i <= k`, ascending.
    levels: Vec<Vec<u32>>,
    /// Members of size `<= k` not yet in a placed interval.
    uncovered: Vec<u64>,
    counts: Vec<i64>,
    placed: Vec<(u32, u32)>,
    memo: FailMemo,
}

impl Search {
    fn new(family: &SetFamily, k: usize, options: SolverOptions) -> Self {
        let n = family.n();
        let mut levels = vec![Vec::new(); k + 1];
        let mut uncovered = vec![0u64; (1usize << n).div_ceil(64)];
        for s in family.iter_bits() {
            let c = s.count_ones() as usize;
            if c <= k {
                levels[c].push(s);
                uncovered[s as usize / 64] |= 1 << (s % 64);
            }
        }
        let counts = levels.iter().map(|l| l.len() as i64).collect();
        Self {
            n,
            k,
            options,
            levels,
            uncovered,
            counts,
            placed: Vec::new(),
            memo: FailMemo::new(options.memo_capacity),
        }
    }

    #[inline]
    fn is_uncovered(&self, s: u32) -> bool {
        self.uncovered[s as usize / 64] >> (s % 64) & 1 == 1
    }

    #[inline]
    fn flip(&mut self, s: u32) {
        self.uncovered[s as usize / 64] ^= 1 << (s % 64);
    }

    /// Intervals `[b, t]` with `|t| = k` that contain `s` and lie entirely in
    /// the uncovered region, stopping once more than `limit` are found.
    fn options_for(&self, s: u32, limit: usize, out: &mut Vec<(u32, u32)>) {
        out.clear();
        for &t in &self.levels[self.k] {
            if t & s != s || !self.is_uncovered(t) {
                continue;
            }
            for b in submasks(s) {
                if self.is_uncovered(b) && self.fits(b, t) {
                    out.push((b, t));
                    if out.len() > limit {
                        return;
                    }
                }
            }
        }
    }

    /// The uncovered set below level `k` with the fewest covering options,
    /// together with those options; `None` once everything is covered.
    fn most_constrained(&self) -> Option<(u32, Vec<(u32, u32)>)> {
        let mut best: Option<(u32, Vec<(u32, u32)>)> = None;
        let mut scratch = Vec::new();
        for i in 0..self.k {
            if self.counts[i] == 0 {
                continue;
            }
            for &s in &self.levels[i] {
                if !self.is_uncovered(s) {
                    continue;
                }
                let limit = best.as_ref().map_or(usize::MAX, |(_, o)| o.len());
                self.options_for(s, limit, &mut scratch);
                if scratch.len() < limit {
                    let done = scratch.len() <= 1;
                    best = Some((s, std::mem::take(&mut scratch)));
                    if done {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn fits(&self, bottom: u32, top: u32) -> bool {
        submasks(top & !bottom).all(|m| self.is_uncovered(bottom | m))
    }

    fn toggle_interval(&mut self, bottom: u32, top: u32, delta: i64) {
        for m in submasks(top & !bottom) {
            let s = bottom | m;
            self.flip(s);
            self.counts[s.count_ones() as usize] += delta;
        }
    }

    fn state_hash(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.uncovered.hash(&mut h);
        h.finish()
    }

    /// Strong criterion on the residual: the uncovered sets above each
    /// uncovered set below `k` must pass the plain criterion.
    fn residual_links_hold(&self) -> bool {
        let full = crate::lattice::ground_mask(self.n);
        let mut counts = [0i64; 32];
        for i in 1..self.k {
            if self.counts[i] == 0 {
                continue;
            }
            for &a in &self.levels[i] {
                if !self.is_uncovered(a) {
                    continue;
                }
                let level = self.k - i;
                counts[..=level].iter_mut().for_each(|c| *c = 0);
                for extra in submasks(full & !a) {
                    let e = extra.count_ones() as usize;
                    if e <= level && self.is_uncovered(a | extra) {
                        counts[e] += 1;
                    }
                }
                if !criterion_holds(&counts, level) {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self, stats: &mut SearchStats) -> bool {
        if !criterion_holds(&self.counts, self.k) {
            stats.criterion_prunes += 1;
            return false;
        }
        self.descend(stats)
    }

    fn descend(&mut self, stats: &mut SearchStats) -> bool {
        stats.nodes += 1;
        let Some((_, options)) = self.most_constrained() else {
            return true;
        };
        if options.is_empty() {
            return false;
        }
        let key = self.state_hash();
        if self.memo.contains(key, &self.uncovered) {
            stats.memo_hits += 1;
            return false;
        }
        for (bottom, top) in options {
            self.toggle_interval(bottom, top, -1);
            let viable = criterion_holds(&self.counts, self.k)
                && (!self.options.strong_prune || self.residual_links_hold());
            if viable {
                self.placed.push((bottom, top));
                if self.descend(stats) {
                    return true;
                }
                self.placed.pop();
            } else {
                stats.criterion_prunes += 1;
            }
            self.toggle_interval(bottom, top, 1);
        }
        self.memo.insert(key, &self.uncovered);
        false
    }

    fn witness(&self, family: &SetFamily) -> IntervalPartition {
        let n = self.n;
        let mut intervals: Vec<Interval> =
            self.placed.iter().map(|&(b, t)| Interval::from_bits_unchecked(b, t, n)).collect();
        let mut in_placed = vec![false; 1 << n];
        for &(b, t) in &self.placed {
            for m in submasks(t & !b) {
                in_placed[(b | m) as usize] = true;
            }
        }
        intervals.extend(
            family
                .iter_bits()
                .filter(|&s| !in_placed[s as usize])
                .map(|s| Interval::from_bits_unchecked(s, s, n)),
        );
        IntervalPartition::new(n, intervals)
    }
}
