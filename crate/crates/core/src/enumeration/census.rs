use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::criteria::strong_cc;
use crate::lattice::{complement_upset, Antichain, IntervalPartition, VertexSet};
use crate::reductions::{bad_degree, splits, SplitMode};
use crate::solver::{ideal_sdepth, SdepthCache, Solver};

use super::canonical::{canonical_form, EdgeSpace};
use super::generate::{enumerate_masks, Strategy};
use super::EnumError;

/// Instances classified per parallel batch; results are consumed in order.
const BATCH: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    BadDegree,
    FailScc,
    /// Smallest vertex the antichain splits over.
    Splits(usize),
    SdepthOk,
    Counterexample,
}

impl Category {
    pub fn label(&self) -> &'static str {
        match self {
            Category::BadDegree => "BadDegree",
            Category::FailScc => "FailSCC",
            Category::Splits(_) => "Splits",
            Category::SdepthOk => "SdepthOK",
            Category::Counterexample => "COUNTEREXAMPLE",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Category::Splits(x) => write!(f, "Splits({x})"),
            other => f.write_str(other.label()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ClassificationRecord {
    pub canon: Antichain,
    pub n: usize,
    pub k: usize,
    pub category: Category,
    /// Partition of `P_I` with every top of size at least `k + 1`.
    pub witness: Option<IntervalPartition>,
    /// Face whose link fails the criterion.
    pub scc_witness: Option<VertexSet>,
    pub elapsed: Duration,
}

/// Runs the filters bad degree, strong criterion, splitting and finally the
/// solver on `P_I` at level `k + 1`, stopping at the first that applies.
#[derive(Debug, Clone)]
pub struct Classifier {
    split_mode: SplitMode,
    cache: Arc<SdepthCache>,
    solver: Solver,
}

impl Classifier {
    pub fn new(split_mode: SplitMode) -> Self {
        Self::with_cache(split_mode, Arc::new(SdepthCache::new()))
    }

    pub fn with_cache(split_mode: SplitMode, cache: Arc<SdepthCache>) -> Self {
        Self { split_mode, cache, solver: Solver::default() }
    }

    pub fn split_mode(&self) -> SplitMode {
        self.split_mode
    }

    pub fn cache(&self) -> &Arc<SdepthCache> {
        &self.cache
    }

    /// Classifies the canonical form of `facets`, so the record (including
    /// the split vertex and witness) is the same for isomorphic inputs.
    /// Inputs too large to canonicalize are classified as given.
    pub fn classify(&self, facets: &Antichain) -> ClassificationRecord {
        match canonical_form(facets) {
            Ok(canon) => self.classify_canonical(canon.as_antichain()),
            Err(_) => self.classify_canonical(facets),
        }
    }

    /// [`Classifier::classify`] for input already in canonical form.
    pub(crate) fn classify_canonical(&self, facets: &Antichain) -> ClassificationRecord {
        let start = Instant::now();
        let n = facets.n();
        let k = facets.min_size().unwrap_or(0);
        let mut witness = None;
        let mut scc_witness = None;
        let category = if bad_degree(facets).bad_degree {
            Category::BadDegree
        } else {
            let scc = strong_cc(facets);
            if !scc.passed() {
                scc_witness = scc.witness;
                Category::FailScc
            } else if let Some(x) = splits(facets, self.split_mode, &self.cache) {
                Category::Splits(x)
            } else {
                let (decision, _) = self.solver.decide(&complement_upset(facets), k + 1);
                match decision.witness() {
                    Some(p) => {
                        witness = Some(p.clone());
                        Category::SdepthOk
                    }
                    None => Category::Counterexample,
                }
            }
        };
        ClassificationRecord { canon: facets.clone(), n, k, category, witness, scc_witness, elapsed: start.elapsed() }
    }
}

impl Default for Classifier {
    fn default() -> Self {
        Self::new(SplitMode::default())
    }
}

/// [`Classifier::classify`] in the default split mode.
pub fn classify(facets: &Antichain) -> ClassificationRecord {
    Classifier::default().classify(facets)
}

/// Refuses shapes outside desk scale: everything up to `n = 6` runs, `n = 7`
/// needs `long_running` for `k` in `{3, 4}`, larger `n` never runs.
pub fn check_scale(n: usize, k: usize, long_running: bool) -> Result<(), EnumError> {
    if k > n || n == 0 {
        return Err(EnumError::InvalidShape { n, k });
    }
    match n {
        1..=6 => Ok(()),
        7 if !(3..=4).contains(&k) || long_running => Ok(()),
        7 => Err(EnumError::NeedsLongRunning { n, k }),
        _ => Err(EnumError::OutOfScale { n, k }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CensusOptions {
    pub split_mode: SplitMode,
    pub long_running: bool,
    pub strategy: Strategy,
    /// Also classify the hypergraph with no edges (always bad degree).
    pub include_empty: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensusReport {
    pub n: usize,
    pub k: usize,
    pub split_mode: SplitMode,
    pub total: u64,
    pub bad_degree: u64,
    pub fail_scc: u64,
    pub splits: u64,
    pub sdepth_ok: u64,
    pub counterexamples: u64,
}

impl CensusReport {
    pub fn new(n: usize, k: usize, split_mode: SplitMode) -> Self {
        Self { n, k, split_mode, total: 0, bad_degree: 0, fail_scc: 0, splits: 0, sdepth_ok: 0, counterexamples: 0 }
    }

    pub fn record(&mut self, category: Category) {
        self.total += 1;
        match category {
            Category::BadDegree => self.bad_degree += 1,
            Category::FailScc => self.fail_scc += 1,
            Category::Splits(_) => self.splits += 1,
            Category::SdepthOk => self.sdepth_ok += 1,
            Category::Counterexample => self.counterexamples += 1,
        }
    }

    pub fn merge(&mut self, other: &CensusReport) {
        self.total += other.total;
        self.bad_degree += other.bad_degree;
        self.fail_scc += other.fail_scc;
        self.splits += other.splits;
        self.sdepth_ok += other.sdepth_ok;
        self.counterexamples += other.counterexamples;
    }

    /// `[total, bad degree, fail SCC, splits, sdepth ok, counterexamples]`.
    pub fn row(&self) -> [u64; 6] {
        [self.total, self.bad_degree, self.fail_scc, self.splits, self.sdepth_ok, self.counterexamples]
    }
}

impl fmt::Display for CensusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} k={} split-mode={} total={} bad-degree={} fail-scc={} splits={} sdepth-ok={} counterexamples={}",
            self.n,
            self.k,
            self.split_mode,
            self.total,
            self.bad_degree,
            self.fail_scc,
            self.splits,
            self.sdepth_ok,
            self.counterexamples
        )
    }
}

/// Classifies every `k`-uniform hypergraph on `[n]` up to isomorphism.
pub fn run_census(n: usize, k: usize, options: &CensusOptions) -> Result<CensusReport, EnumError> {
    run_census_with(n, k, options, |_| {})
}

/// [`run_census`], handing each record to `sink` in enumeration order.
pub fn run_census_with(
    n: usize,
    k: usize,
    options: &CensusOptions,
    mut sink: impl FnMut(&ClassificationRecord),
) -> Result<CensusReport, EnumError> {
    check_scale(n, k, options.long_running)?;
    let masks = enumerate_masks(n, k, options.strategy)?;
    let space = EdgeSpace::get(n, k);
    let classifier = Classifier::new(options.split_mode);
    let mut report = CensusReport::new(n, k, options.split_mode);
    if options.include_empty {
        let r = classifier.classify_canonical(&Antichain::empty(n).expect("n checked"));
        report.record(r.category);
        sink(&r);
    }
    for batch in masks.chunks(BATCH) {
        let records: Vec<ClassificationRecord> =
            batch.par_iter().map(|&x| classifier.classify_canonical(&space.antichain(x))).collect();
        for r in &records {
            report.record(r.category);
            sink(r);
        }
    }
    Ok(report)
}

/// Counts of instances by `(sdepth S/I, sdepth I)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapReport {
    pub n: usize,
    pub k: usize,
    pub total: u64,
    pub cells: BTreeMap<(usize, usize), u64>,
}

impl GapReport {
    pub fn get(&self, quotient: usize, ideal: usize) -> u64 {
        self.cells.get(&(quotient, ideal)).copied().unwrap_or(0)
    }

    /// Every instance has `sdepth S/I < sdepth I`.
    pub fn strictly_below_diagonal(&self) -> bool {
        self.cells.keys().all(|&(q, i)| q < i)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("sdepth_quotient,sdepth_ideal,count\n");
        for (&(q, i), c) in &self.cells {
            out.push_str(&format!("{q},{i},{c}\n"));
        }
        out
    }
}

impl fmt::Display for GapReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={} k={} total={}", self.n, self.k, self.total)?;
        for (&(q, i), c) in &self.cells {
            writeln!(f, "sdepth(S/I)={q} sdepth(I)={i}: {c}")?;
        }
        Ok(())
    }
}

/// Exact Stanley depth of both sides for every `k`-uniform hypergraph on
/// `[n]` up to isomorphism.
pub fn gap_census(n: usize, k: usize, long_running: bool) -> Result<GapReport, EnumError> {
    gap_census_with_cache(n, k, long_running, &SdepthCache::new())
}

/// [`gap_census`] sharing quotient depths with other runs through `cache`.
pub fn gap_census_with_cache(
    n: usize,
    k: usize,
    long_running: bool,
    cache: &SdepthCache,
) -> Result<GapReport, EnumError> {
    check_scale(n, k, long_running)?;
    let masks = enumerate_masks(n, k, Strategy::Auto)?;
    let space = EdgeSpace::get(n, k);
    let cells = masks
        .par_iter()
        .map(|&x| {
            let a = space.antichain(x);
            let mut m = BTreeMap::new();
            m.insert((cache.quotient_sdepth(&a), ideal_sdepth(&a)), 1u64);
            m
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (key, c) in b {
                *a.entry(key).or_insert(0) += c;
            }
            a
        });
    Ok(GapReport { n, k, total: masks.len() as u64, cells })
}
