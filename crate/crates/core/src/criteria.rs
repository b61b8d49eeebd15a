//! Counting criteria that any partition with all tops of size `k` must obey.
//!
//! The combinatorial criterion simulates, level by level, how many sets a
//! size-`k`-topped interval starting at each remaining `i`-set must consume.
//! The strong version applies it to the link of every face.

use thiserror::Error;

use crate::lattice::{down_closure, submasks, Antichain, FVector, LatticeError, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CriteriaError {
    #[error("criterion level {k} exceeds the f-vector's top index {top:?}")]
    LevelTooLarge { k: usize, top: Option<usize> },
    #[error("{face} is not a face of the complex")]
    NotAFace { face: VertexSet },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionResult {
    pub verdict: Verdict,
    /// Residual counts after each absorption round `i = 0, 1, ...`.
    pub residual: Vec<FVector>,
    /// Size whose count first went negative.
    pub fail_index: Option<usize>,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn final_residual(&self) -> Option<&FVector> {
        self.residual.last()
    }
}

/// `C(n, k)` as `i64`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// Runs the combinatorial criterion for tops of size `k` on the counts
/// `f[0..=k]`. Stops at the first round that drives a count negative or
/// leaves nothing to absorb.
pub fn combinatorial_criterion(f: &FVector, k: usize) -> Result<CriterionResult, CriteriaError> {
    if f.top().is_none_or(|t| t < k) {
        return Err(CriteriaError::LevelTooLarge { k, top: f.top() });
    }
    let mut a: Vec<i64> = f.as_slice()[..=k].to_vec();
    let mut residual = Vec::with_capacity(k + 1);
    for i in 0..=k {
        let ai = a[i];
        for j in i..=k {
            a[j] -= ai * binomial(k - i, j - i);
        }
        residual.push(FVector::new(a.clone()));
        if let Some(j) = a.iter().position(|&x| x < 0) {
            return Ok(CriterionResult { verdict: Verdict::Fail, residual, fail_index: Some(j) });
        }
        if a.iter().all(|&x| x == 0) {
            // nothing left to absorb
            break;
        }
    }
    Ok(CriterionResult { verdict: Verdict::Pass, residual, fail_index: None })
}

/// Allocation-free pass/fail version used in search loops.
pub(crate) fn criterion_holds(counts: &[i64], k: usize) -> bool {
    debug_assert!(counts.len() > k && k < 32);
    let mut a = [0i64; 32];
    a[..=k].copy_from_slice(&counts[..=k]);
    for i in 0..=k {
        let ai = a[i];
        if ai < 0 {
            return false;
        }
        if ai == 0 {
            continue;
        }
        for j in i + 1..=k {
            a[j] -= ai * binomial(k - i, j - i);
            if a[j] < 0 {
                return false;
            }
        }
    }
    true
}

/// The link of `face`: facets containing it with `face` removed, on the
/// ground set `[n] - face` renumbered in increasing order.
pub fn link(facets: &Antichain, face: VertexSet) -> Result<Antichain, CriteriaError> {
    if !facets.iter().any(|f| face.is_subset(f)) {
        return Err(CriteriaError::NotAFace { face });
    }
    let keep = face.complement().with_ground(facets.n())?;
    let members: Vec<VertexSet> = facets
        .iter()
        .filter(|f| face.is_subset(*f))
        .map(|f| f.difference(face).compress(keep))
        .collect();
    Ok(Antichain::new(keep.cardinality(), members)?)
}

/// The h-vector of a pure `(d - 1)`-dimensional complex from its f-vector.
pub fn h_vector(f: &FVector, d: usize) -> Vec<i64> {
    (0..=d)
        .map(|j| {
            (0..=j)
                .map(|i| {
                    let sign = if (j - i) % 2 == 0 { 1 } else { -1 };
                    sign * binomial(d - i, j - i) * f.get(i)
                })
                .sum()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccResult {
    pub verdict: Verdict,
    /// Smallest face (canonical order) whose link fails the criterion.
    pub witness: Option<VertexSet>,
    /// Criterion run on the witness's link, or on the whole complex on a pass.
    pub criterion: CriterionResult,
    /// Level `k` the criterion was run at (the minimum facet size).
    pub k: usize,
}

impl SccResult {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Strong combinatorial criterion at `k = ` minimum facet size.
pub fn strong_cc(facets: &Antichain) -> SccResult {
    let k = facets.min_size().unwrap_or(0);
    strong_cc_at(facets, k)
}

/// Strong combinatorial criterion for tops of size `k`: every face `A` of
/// `D[facets]` with `|A| <= k` must have a link passing the criterion at
/// level `k - |A|`.
pub fn strong_cc_at(facets: &Antichain, k: usize) -> SccResult {
    let n = facets.n();
    let down = down_closure(facets);
    let mut faces: Vec<VertexSet> = down.iter().filter(|s| s.cardinality() <= k).collect();
    faces.sort();
    let mut counts = vec![0i64; k + 1];
    for &face in &faces {
        let level = k - face.cardinality();
        counts[..=level].iter_mut().for_each(|c| *c = 0);
        let free = face.complement().bits();
        for extra in submasks(free) {
            let e = extra.count_ones() as usize;
            if e <= level && down.contains_bits(face.bits() | extra) {
                counts[e] += 1;
            }
        }
        if !criterion_holds(&counts, level) {
            let f = FVector::new(counts[..=level].to_vec());
            let criterion = combinatorial_criterion(&f, level).expect("level within counts");
            return SccResult { verdict: Verdict::Fail, witness: Some(face), criterion, k };
        }
    }
    let whole = crate::lattice::f_vector(&down, k);
    let criterion = combinatorial_criterion(&whole, k).expect("top equals k");
    debug_assert!(n >= k || facets.is_empty());
    SccResult { verdict: Verdict::Pass, witness: None, criterion, k }
}
