//! Reductions that shrink a candidate counterexample: purification to the
//! Stanley-depth skeleton, removing unused vertices, deleting a vertex common
//! to every facet, and the vertex-splitting test.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::criteria::strong_cc_at;
use crate::lattice::{submasks, Antichain, LatticeError, VertexSet};
use crate::solver::{quotient_sdepth, SdepthCache};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("cannot purify to size {k}: smallest facet has size {min}")]
    PurifyTooLarge { k: usize, min: usize },
    #[error("vertex {x} is not in every facet")]
    NotCommon { x: usize },
    #[error("vertex {x} is outside the ground set [1, {n}]")]
    VertexOutOfRange { x: usize, n: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub bad_degree: bool,
    /// Smallest vertex lying in no facet.
    pub uncovered_vertex: Option<usize>,
    /// Smallest vertex lying in every facet.
    pub common_vertex: Option<usize>,
    pub pure: bool,
    /// Minimum facet size.
    pub k: usize,
}

/// Checks whether some vertex is in no facet or in every facet.
pub fn bad_degree(facets: &Antichain) -> ReductionReport {
    let n = facets.n();
    let support = facets.support();
    let core = facets.common_core();
    let uncovered_vertex = (1..=n).find(|&v| !support.contains(v));
    let common_vertex = if facets.is_empty() { None } else { core.vertices().next() };
    ReductionReport {
        bad_degree: uncovered_vertex.is_some() || common_vertex.is_some(),
        uncovered_vertex,
        common_vertex,
        pure: facets.is_pure(),
        k: facets.min_size().unwrap_or(0),
    }
}

/// All `k`-subsets of facets: the facets of the `(k-1)`-skeleton.
pub fn purify(facets: &Antichain, k: usize) -> Result<Antichain, ReductionError> {
    let min = facets.min_size().unwrap_or(0);
    if k > min {
        return Err(ReductionError::PurifyTooLarge { k, min });
    }
    let n = facets.n();
    let mut members: Vec<u32> = facets
        .iter()
        .flat_map(|f| submasks(f.bits()).filter(|s| s.count_ones() as usize == k).collect::<Vec<_>>())
        .collect();
    members.sort_unstable();
    members.dedup();
    Ok(Antichain::from_bits(n, members)?)
}

/// [`purify`] at `k = sdepth(D[facets])`.
pub fn purify_auto(facets: &Antichain) -> Result<Antichain, ReductionError> {
    purify(facets, quotient_sdepth(facets))
}

/// Removes `x` from every facet and renumbers the ground set to `[n-1]`.
pub fn delete_common_vertex(facets: &Antichain, x: usize) -> Result<Antichain, ReductionError> {
    let n = facets.n();
    if x == 0 || x > n {
        return Err(ReductionError::VertexOutOfRange { x, n });
    }
    if facets.iter().any(|f| !f.contains(x)) {
        return Err(ReductionError::NotCommon { x });
    }
    let keep = VertexSet::full(n)?.without(x);
    Ok(facets.compress(keep))
}

/// Adds a new vertex `n+1` to every facet.
pub fn cone(facets: &Antichain) -> Result<Antichain, ReductionError> {
    let n = facets.n() + 1;
    let apex = 1u32 << (n - 1);
    Ok(Antichain::from_bits(n, facets.iter().map(|f| f.bits() | apex))?)
}

/// Drops vertices in no facet, renumbering the rest in increasing order.
pub fn restrict_support(facets: &Antichain) -> Antichain {
    facets.compress(facets.support())
}

/// Every facet has size `n - 1`.
pub fn corollary_n1(facets: &Antichain) -> bool {
    let n = facets.n();
    n >= 1 && !facets.is_empty() && facets.iter().all(|f| f.cardinality() == n - 1)
}

/// How the second splitting condition is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SplitMode {
    /// `sdepth(D[A - A_x]) >= sdepth(D[A])`, both computed exactly.
    #[default]
    Exact,
    /// `A - A_x` passes the strong combinatorial criterion at the minimum
    /// facet size of `A`.
    Criterion,
}

impl fmt::Display for SplitMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplitMode::Exact => "exact",
            SplitMode::Criterion => "criterion",
        })
    }
}

impl std::str::FromStr for SplitMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(SplitMode::Exact),
            "criterion" => Ok(SplitMode::Criterion),
            other => Err(format!("unknown split mode `{other}` (expected exact or criterion)")),
        }
    }
}

/// The pieces of a split over `x`: `A_x`, `A'_x` and `A - A_x`.
#[derive(Debug, Clone)]
pub struct SplitParts {
    pub with_x: Vec<VertexSet>,
    pub link_x: Vec<VertexSet>,
    pub rest: Antichain,
}

pub fn split_parts(facets: &Antichain, x: usize) -> SplitParts {
    let n = facets.n();
    let (with_x, rest): (Vec<VertexSet>, Vec<VertexSet>) = facets.iter().partition(|f| f.contains(x));
    let link_x = with_x.iter().map(|f| f.without(x)).collect();
    let rest = Antichain::new(n, rest).expect("subfamily of an antichain");
    SplitParts { with_x, link_x, rest }
}

/// Whether every set of `A'_x` lies inside some facet avoiding `x`.
pub fn split_condition_i(facets: &Antichain, x: usize) -> bool {
    let parts = split_parts(facets, x);
    parts.link_x.iter().all(|s| parts.rest.iter().any(|t| s.is_subset(t)))
}

/// Whether `facets` splits over the 1-based vertex `x`.
pub fn splits_over(facets: &Antichain, x: usize, mode: SplitMode, cache: &SdepthCache) -> bool {
    let parts = split_parts(facets, x);
    if parts.with_x.is_empty() {
        return true;
    }
    if !parts.link_x.iter().all(|s| parts.rest.iter().any(|t| s.is_subset(t))) {
        return false;
    }
    match mode {
        SplitMode::Exact => cache.quotient_sdepth(&parts.rest) >= cache.quotient_sdepth(facets),
        SplitMode::Criterion => {
            let k = facets.min_size().unwrap_or(0);
            strong_cc_at(&parts.rest, k).passed()
        }
    }
}

/// Smallest vertex the antichain splits over.
pub fn splits(facets: &Antichain, mode: SplitMode, cache: &SdepthCache) -> Option<usize> {
    (1..=facets.n()).find(|&x| splits_over(facets, x, mode, cache))
}

/// One step of [`reduce_to_fixpoint`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReductionStep {
    Purify { k: usize },
    RestrictSupport { dropped: Vec<usize> },
    DeleteCommonVertex { x: usize },
}

impl fmt::Display for ReductionStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionStep::Purify { k } => write!(f, "purify to size {k}"),
            ReductionStep::RestrictSupport { dropped } => write!(f, "drop unused vertices {dropped:?}"),
            ReductionStep::DeleteCommonVertex { x } => write!(f, "delete common vertex {x}"),
        }
    }
}

/// Applies purification, support restriction and common-vertex deletion
/// until none changes the antichain.
pub fn reduce_to_fixpoint(facets: &Antichain) -> Result<(Antichain, Vec<(ReductionStep, Antichain)>), ReductionError> {
    let mut current = facets.clone();
    let mut trace = Vec::new();
    loop {
        if current.is_empty() {
            break;
        }
        let k = quotient_sdepth(&current);
        if current.max_size() != Some(k) {
            current = purify(&current, k)?;
            trace.push((ReductionStep::Purify { k }, current.clone()));
            continue;
        }
        let report = bad_degree(&current);
        if report.uncovered_vertex.is_some() {
            let dropped = (1..=current.n()).filter(|&v| !current.support().contains(v)).collect();
            current = restrict_support(&current);
            trace.push((ReductionStep::RestrictSupport { dropped }, current.clone()));
            continue;
        }
        if let Some(x) = report.common_vertex {
            current = delete_common_vertex(&current, x)?;
            trace.push((ReductionStep::DeleteCommonVertex { x }, current.clone()));
            continue;
        }
        break;
    }
    Ok((current, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::ideal_sdepth;

    fn ac(n: usize, lists: &[&[usize]]) -> Antichain {
        Antichain::from_vertex_lists(n, lists).unwrap()
    }

    fn example_5_2() -> Antichain {
        ac(6, &[&[1, 2, 5], &[2, 4, 6], &[1, 2, 3], &[2, 4, 5], &[3, 4, 5], &[2, 3, 5]])
    }

    #[test]
    fn bad_degree_examples() {
        let r = bad_degree(&ac(5, &[&[1, 2, 3], &[1, 2, 4], &[3, 4, 5]]));
        assert!(!r.bad_degree);
        assert_eq!((r.k, r.pure), (3, true));
        let r = bad_degree(&ac(3, &[&[1, 2], &[1, 3]]));
        assert_eq!(r.common_vertex, Some(1));
        assert!(r.bad_degree);
        let r = bad_degree(&ac(4, &[&[1, 2, 3]]));
        assert_eq!(r.uncovered_vertex, Some(4));
        assert!(r.bad_degree);
    }

    #[test]
    fn purify_examples() {
        let a = ac(5, &[&[1, 2, 3], &[4, 5]]);
        assert_eq!(quotient_sdepth(&a), 2);
        assert_eq!(purify_auto(&a).unwrap(), ac(5, &[&[1, 2], &[1, 3], &[2, 3], &[4, 5]]));
        let pure = ac(5, &[&[1, 2, 3], &[1, 4, 5]]);
        assert_eq!(purify(&pure, 3).unwrap(), pure);
        assert_eq!(purify(&ac(4, &[&[1, 2, 3, 4]]), 1).unwrap(), ac(4, &[&[1], &[2], &[3], &[4]]));
        assert!(matches!(purify(&a, 3), Err(ReductionError::PurifyTooLarge { .. })));
    }

    #[test]
    fn delete_common_vertex_examples() {
        assert_eq!(delete_common_vertex(&ac(3, &[&[1, 2], &[1, 3]]), 1).unwrap(), ac(2, &[&[1], &[2]]));
        assert_eq!(
            delete_common_vertex(&ac(4, &[&[1, 2, 3], &[1, 2, 4]]), 1).unwrap(),
            ac(3, &[&[1, 2], &[1, 3]])
        );
        assert_eq!(
            delete_common_vertex(&Antichain::simplex(5).unwrap(), 5).unwrap(),
            Antichain::simplex(4).unwrap()
        );
        assert!(matches!(
            delete_common_vertex(&ac(3, &[&[1, 2], &[2, 3]]), 1),
            Err(ReductionError::NotCommon { x: 1 })
        ));
    }

    #[test]
    fn restrict_support_examples() {
        assert_eq!(restrict_support(&ac(5, &[&[1, 2, 3]])), ac(3, &[&[1, 2, 3]]));
        let spanning = ac(4, &[&[1, 2], &[3, 4]]);
        assert_eq!(restrict_support(&spanning), spanning);
        assert_eq!(restrict_support(&ac(5, &[&[1, 3], &[3, 5]])), ac(3, &[&[1, 2], &[2, 3]]));
    }

    #[test]
    fn corollary_examples() {
        assert!(corollary_n1(&Antichain::all_k_sets(4, 3).unwrap()));
        assert!(!corollary_n1(&ac(5, &[&[1, 2, 3]])));
        for n in 1..6 {
            assert!(!corollary_n1(&Antichain::simplex(n).unwrap()));
        }
    }

    #[test]
    fn example_splits() {
        let cache = SdepthCache::new();
        let a = example_5_2();
        for mode in [SplitMode::Exact, SplitMode::Criterion] {
            assert!(splits_over(&a, 6, mode, &cache));
            assert!(!splits_over(&a, 2, mode, &cache));
            assert!(splits_over(&a, 1, mode, &cache));
            assert!(splits_over(&a, 3, mode, &cache));
            assert_eq!(splits(&a, mode, &cache), Some(1));
        }
        assert!(!split_condition_i(&a, 2));
        assert_eq!(splits(&Antichain::simplex(4).unwrap(), SplitMode::Exact, &cache), None);
    }

    #[test]
    fn cone_shifts_both_depths() {
        let a = ac(4, &[&[1, 2], &[2, 3], &[3, 4]]);
        let coned = cone(&a).unwrap();
        assert_eq!(bad_degree(&coned).common_vertex, Some(5));
        assert_eq!(delete_common_vertex(&coned, 5).unwrap(), a);
        assert_eq!(quotient_sdepth(&coned), quotient_sdepth(&a) + 1);
        assert_eq!(ideal_sdepth(&coned), ideal_sdepth(&a) + 1);
    }

    #[test]
    fn fixpoint_trace() {
        let a = ac(6, &[&[1, 2, 3], &[1, 4, 5]]);
        let (reduced, trace) = reduce_to_fixpoint(&a).unwrap();
        assert!(!trace.is_empty());
        assert!(!bad_degree(&reduced).bad_degree);
        assert!(reduced.is_pure());
    }
}
