//! Stanley depth of arbitrary monomial ideals and quotients through the
//! poset `P^g_{I/J}` of exponent vectors below a bound `g`.

mod n3;

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

pub use n3::{n3_construct, N3Case, N3Construction, N3Step};

/// Largest poset [`grid_sdepth`] will search.
pub const GRID_MAX_POINTS: usize = 5000;

/// Largest box `[0, g]` a poset may be built in.
pub const GRID_MAX_BOX: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("expected {expected} coordinates, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{point} is not below the bound {g}")]
    NotBelowBound { point: Multidegree, g: Multidegree },
    #[error("poset has {points} points; the exact search is limited to {limit}")]
    TooLarge { points: usize, limit: usize },
    #[error("the box below {0} is too large to enumerate")]
    BoxTooLarge(Multidegree),
    #[error("the constructive algorithm needs n = 3, got n = {0}")]
    NotThreeDimensional(usize),
    #[error("no generators given")]
    NoGenerators,
}

/// An exponent vector, ordered componentwise.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multidegree(Vec<u32>);

impl Multidegree {
    pub fn new(coords: Vec<u32>) -> Self {
        Self(coords)
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn ones(n: usize) -> Self {
        Self(vec![1; n])
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn le(&self, other: &Multidegree) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise maximum of nonempty `points`.
    pub fn join_all<'a>(points: impl IntoIterator<Item = &'a Multidegree>) -> Option<Multidegree> {
        points.into_iter().fold(None, |acc: Option<Multidegree>, p| match acc {
            None => Some(p.clone()),
            Some(mut m) => {
                m.0.iter_mut().zip(&p.0).for_each(|(a, &b)| *a = (*a).max(b));
                Some(m)
            }
        })
    }
}

impl From<Vec<u32>> for Multidegree {
    fn from(coords: Vec<u32>) -> Self {
        Self(coords)
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn check_dims(p: &Multidegree, n: usize) -> Result<(), GridError> {
    if p.n() != n {
        return Err(GridError::DimensionMismatch { expected: n, found: p.n() });
    }
    Ok(())
}

/// Number of coordinates in which `c` equals `g`.
pub fn alpha(c: &Multidegree, g: &Multidegree) -> Result<usize, GridError> {
    check_dims(c, g.n())?;
    if !c.le(g) {
        return Err(GridError::NotBelowBound { point: c.clone(), g: g.clone() });
    }
    Ok(alpha_unchecked(c.coords(), g.coords()))
}

fn alpha_unchecked(c: &[u32], g: &[u32]) -> usize {
    c.iter().zip(g).filter(|(a, b)| a == b).count()
}

/// Mixed-radix indexing of the box `[0, g]`.
#[derive(Debug, Clone)]
struct GridBox {
    g: Vec<u32>,
    strides: Vec<usize>,
    size: usize,
}

impl GridBox {
    fn new(g: &Multidegree) -> Result<Self, GridError> {
        let mut strides = Vec::with_capacity(g.n());
        let mut size = 1usize;
        for &x in g.coords() {
            strides.push(size);
            size = size
                .checked_mul(x as usize + 1)
                .filter(|&s| s <= GRID_MAX_BOX)
                .ok_or_else(|| GridError::BoxTooLarge(g.clone()))?;
        }
        Ok(Self { g: g.coords().to_vec(), strides, size })
    }

    fn index(&self, c: &[u32]) -> usize {
        c.iter().zip(&self.strides).map(|(&x, &s)| x as usize * s).sum()
    }

    fn point(&self, mut idx: usize) -> Vec<u32> {
        self.g
            .iter()
            .map(|&x| {
                let r = x as usize + 1;
                let v = idx % r;
                idx /= r;
                v as u32
            })
            .collect()
    }

    /// Every `c` with `lo <= c <= hi`, as box indices.
    fn between(&self, lo: &[u32], hi: &[u32]) -> Vec<usize> {
        let mut out = vec![self.index(lo)];
        for (i, (&a, &b)) in lo.iter().zip(hi).enumerate() {
            let base = out.clone();
            for step in 1..=(b - a) as usize {
                out.extend(base.iter().map(|&x| x + step * self.strides[i]));
            }
        }
        out
    }
}

/// The points `c <= g` lying above some generator of `I` and above no
/// generator of `J`.
#[derive(Debug, Clone)]
pub struct GridPoset {
    g: Multidegree,
    gens_i: Vec<Multidegree>,
    gens_j: Vec<Multidegree>,
    points: Vec<Multidegree>,
    grid: GridBox,
    member: Vec<bool>,
}

/// Builds `P^g_{I/J}`. `J` is assumed to lie inside `I`.
pub fn build_quotient_poset(
    gens_i: &[Multidegree],
    gens_j: &[Multidegree],
    g: &Multidegree,
) -> Result<GridPoset, GridError> {
    let n = g.n();
    for p in gens_i.iter().chain(gens_j) {
        check_dims(p, n)?;
        if !p.le(g) {
            return Err(GridError::NotBelowBound { point: p.clone(), g: g.clone() });
        }
    }
    let grid = GridBox::new(g)?;
    let mut member = vec![false; grid.size];
    let mut points = Vec::new();
    for idx in 0..grid.size {
        let c = Multidegree(grid.point(idx));
        if gens_i.iter().any(|a| a.le(&c)) && !gens_j.iter().any(|b| b.le(&c)) {
            member[idx] = true;
            points.push(c);
        }
    }
    points.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
    Ok(GridPoset { g: g.clone(), gens_i: gens_i.to_vec(), gens_j: gens_j.to_vec(), points, grid, member })
}

/// `P^g_I` for the ideal generated by `gens`.
pub fn ideal_poset(gens: &[Multidegree], g: &Multidegree) -> Result<GridPoset, GridError> {
    build_quotient_poset(gens, &[], g)
}

/// `P^g_{S/I}` for the ideal generated by `gens`.
pub fn quotient_poset(gens: &[Multidegree], g: &Multidegree) -> Result<GridPoset, GridError> {
    build_quotient_poset(&[Multidegree::zero(g.n())], gens, g)
}

/// The bound used when none is given: the componentwise maximum of the
/// generators.
pub fn default_bound(gens: &[Multidegree]) -> Result<Multidegree, GridError> {
    Multidegree::join_all(gens).ok_or(GridError::NoGenerators)
}

impl GridPoset {
    pub fn n(&self) -> usize {
        self.g.n()
    }

    pub fn g(&self) -> &Multidegree {
        &self.g
    }

    pub fn gens_i(&self) -> &[Multidegree] {
        &self.gens_i
    }

    pub fn gens_j(&self) -> &[Multidegree] {
        &self.gens_j
    }

    /// Points in order of total degree, then lexicographically.
    pub fn points(&self) -> &[Multidegree] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, c: &Multidegree) -> bool {
        c.n() == self.n() && c.le(&self.g) && self.member[self.grid.index(c.coords())]
    }

    /// Maximal points.
    pub fn maximal_points(&self) -> Vec<Multidegree> {
        self.points
            .iter()
            .filter(|c| {
                (0..self.n()).all(|i| {
                    let mut up = c.coords().to_vec();
                    up[i] += 1;
                    up[i] > self.g.get(i) || !self.member[self.grid.index(&up)]
                })
            })
            .cloned()
            .collect()
    }
}

/// The interval `{c : lower <= c <= upper}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridInterval {
    pub lower: Multidegree,
    pub upper: Multidegree,
}

impl GridInterval {
    pub fn new(lower: Multidegree, upper: Multidegree) -> Self {
        Self { lower, upper }
    }

    pub fn size(&self) -> u64 {
        self.lower.coords().iter().zip(self.upper.coords()).map(|(&a, &b)| u64::from(b.saturating_sub(a)) + 1).product()
    }
}

impl fmt::Display for GridInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridPartition {
    pub g: Multidegree,
    pub intervals: Vec<GridInterval>,
}

impl GridPartition {
    /// Smallest `alpha` of an upper bound; `None` for the empty partition.
    pub fn sdepth(&self) -> Option<usize> {
        self.intervals.iter().map(|iv| alpha_unchecked(iv.upper.coords(), self.g.coords())).min()
    }

    pub fn total_size(&self) -> u64 {
        self.intervals.iter().map(GridInterval::size).sum()
    }
}

impl fmt::Display for GridPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridViolation {
    #[error("interval {0} is empty or has the wrong dimension")]
    Malformed(GridInterval),
    #[error("{0} lies in two intervals")]
    Overlap(Multidegree),
    #[error("{0} lies in an interval but not in the poset")]
    Escapes(Multidegree),
    #[error("{0} is not covered")]
    Uncovered(Multidegree),
    #[error("partition bound {0} differs from the poset bound")]
    BoundMismatch(Multidegree),
}

/// Checks that `p` covers every point of `poset` exactly once.
pub fn validate_grid_partition(p: &GridPartition, poset: &GridPoset) -> Result<(), GridViolation> {
    if p.g != poset.g {
        return Err(GridViolation::BoundMismatch(p.g.clone()));
    }
    let n = poset.n();
    let mut seen = vec![false; poset.grid.size];
    for iv in &p.intervals {
        if iv.lower.n() != n || iv.upper.n() != n || !iv.lower.le(&iv.upper) || !iv.upper.le(&poset.g) {
            return Err(GridViolation::Malformed(iv.clone()));
        }
        for idx in poset.grid.between(iv.lower.coords(), iv.upper.coords()) {
            let c = || Multidegree(poset.grid.point(idx));
            if !poset.member[idx] {
                return Err(GridViolation::Escapes(c()));
            }
            if std::mem::replace(&mut seen[idx], true) {
                return Err(GridViolation::Overlap(c()));
            }
        }
    }
    match poset.points.iter().find(|c| !seen[poset.grid.index(c.coords())]) {
        Some(c) => Err(GridViolation::Uncovered(c.clone())),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSdepth {
    pub value: usize,
    pub partition: GridPartition,
    /// Set when the poset was empty and `value = n` is a convention.
    pub empty_convention: bool,
}

/// Exact Stanley depth of a grid poset by branch and bound.
pub fn grid_sdepth(p: &GridPoset) -> Result<GridSdepth, GridError> {
    let n = p.n();
    if p.len() > GRID_MAX_POINTS {
        return Err(GridError::TooLarge { points: p.len(), limit: GRID_MAX_POINTS });
    }
    if p.is_empty() {
        let partition = GridPartition { g: p.g.clone(), intervals: Vec::new() };
        return Ok(GridSdepth { value: n, partition, empty_convention: true });
    }
    let trivial = |c: &Multidegree| GridInterval::new(c.clone(), c.clone());
    let mut best = GridPartition { g: p.g.clone(), intervals: p.points.iter().map(trivial).collect() };
    let mut value = best.sdepth().unwrap_or(n);
    let upper = p.maximal_points().iter().map(|c| alpha_unchecked(c.coords(), p.g.coords())).min().unwrap_or(n);
    for k in value + 1..=upper {
        match GridSearch::new(p, k).run() {
            Some(partition) => {
                value = k;
                best = partition;
            }
            None => break,
        }
    }
    Ok(GridSdepth { value, partition: best, empty_convention: false })
}

/// Whether `p` has a partition with every upper bound of `alpha >= k`.
pub fn grid_decide(p: &GridPoset, k: usize) -> Result<Option<GridPartition>, GridError> {
    if p.len() > GRID_MAX_POINTS {
        return Err(GridError::TooLarge { points: p.len(), limit: GRID_MAX_POINTS });
    }
    Ok(GridSearch::new(p, k).run())
}

/// Search state: the first uncovered point with `alpha < k` in degree order
/// must be the bottom of its interval, so only the upper bound is branched
/// on. Points with `alpha >= k` left over become trivial intervals.
struct GridSearch<'a> {
    p: &'a GridPoset,
    k: usize,
    /// Box indices of the points, in degree order.
    order: Vec<usize>,
    alphas: Vec<usize>,
    uncovered: Vec<bool>,
    placed: Vec<(usize, usize)>,
    failed: HashSet<Vec<u64>>,
}

const GRID_MEMO_LIMIT: usize = 1 << 18;

impl<'a> GridSearch<'a> {
    fn new(p: &'a GridPoset, k: usize) -> Self {
        let order: Vec<usize> = p.points.iter().map(|c| p.grid.index(c.coords())).collect();
        let alphas = p.points.iter().map(|c| alpha_unchecked(c.coords(), p.g.coords())).collect();
        Self { p, k, order, alphas, uncovered: p.member.clone(), placed: Vec::new(), failed: HashSet::new() }
    }

    fn run(mut self) -> Option<GridPartition> {
        if !self.descend(0) {
            return None;
        }
        let grid = &self.p.grid;
        let point = |idx: usize| Multidegree(grid.point(idx));
        let mut intervals: Vec<GridInterval> =
            self.placed.iter().map(|&(a, b)| GridInterval::new(point(a), point(b))).collect();
        intervals.extend(self.order.iter().filter(|&&i| self.uncovered[i]).map(|&i| GridInterval::new(point(i), point(i))));
        Some(GridPartition { g: self.p.g.clone(), intervals })
    }

    fn key(&self) -> Vec<u64> {
        let mut words = vec![0u64; self.order.len().div_ceil(64)];
        for (j, &i) in self.order.iter().enumerate() {
            if self.uncovered[i] {
                words[j / 64] |= 1 << (j % 64);
            }
        }
        words
    }

    fn descend(&mut self, from: usize) -> bool {
        let Some(pos) = (from..self.order.len()).find(|&j| self.uncovered[self.order[j]] && self.alphas[j] < self.k)
        else {
            return true;
        };
        let key = self.key();
        if self.failed.contains(&key) {
            return false;
        }
        let grid = &self.p.grid;
        let bottom = self.order[pos];
        let lo = grid.point(bottom);
        let candidates: Vec<(usize, Vec<usize>)> = self.order[pos..]
            .iter()
            .zip(&self.alphas[pos..])
            .filter(|&(_, &a)| a >= self.k)
            .filter_map(|(&top, _)| {
                let hi = grid.point(top);
                if !lo.iter().zip(&hi).all(|(a, b)| a <= b) {
                    return None;
                }
                let cells = grid.between(&lo, &hi);
                cells.iter().all(|&c| self.uncovered[c]).then_some((top, cells))
            })
            .collect();
        for (top, cells) in candidates {
            cells.iter().for_each(|&c| self.uncovered[c] = false);
            self.placed.push((bottom, top));
            if self.descend(pos + 1) {
                return true;
            }
            self.placed.pop();
            cells.iter().for_each(|&c| self.uncovered[c] = true);
        }
        if self.failed.len() < GRID_MEMO_LIMIT {
            self.failed.insert(key);
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(c: &[u32]) -> Multidegree {
        Multidegree::new(c.to_vec())
    }

    #[test]
    fn alpha_examples() {
        let g = md(&[1, 1, 2]);
        assert_eq!(alpha(&g, &g), Ok(3));
        assert_eq!(alpha(&md(&[0, 0, 0]), &md(&[1, 0, 2])), Ok(1));
        assert_eq!(alpha(&md(&[1, 0, 2]), &g), Ok(2));
        assert!(matches!(alpha(&md(&[2, 0, 0]), &g), Err(GridError::NotBelowBound { .. })));
    }

    #[test]
    fn maximal_ideal_of_three() {
        let gens = [md(&[1, 0, 0]), md(&[0, 1, 0]), md(&[0, 0, 1])];
        let p = ideal_poset(&gens, &md(&[1, 1, 1])).unwrap();
        assert_eq!(p.len(), 7);
        let s = grid_sdepth(&p).unwrap();
        assert_eq!(s.value, 2);
        assert_eq!(validate_grid_partition(&s.partition, &p), Ok(()));
    }

    #[test]
    fn single_point_quotient() {
        let p = build_quotient_poset(&[md(&[1])], &[md(&[2])], &md(&[2])).unwrap();
        assert_eq!(p.points(), &[md(&[1])]);
        assert_eq!(grid_sdepth(&p).unwrap().value, 0);
    }

    #[test]
    fn empty_poset_is_flagged() {
        let p = ideal_poset(&[md(&[0, 0])], &md(&[1, 1])).unwrap();
        let q = quotient_poset(&[md(&[0, 0])], &md(&[1, 1])).unwrap();
        assert_eq!(p.len(), 4);
        let s = grid_sdepth(&q).unwrap();
        assert!(s.empty_convention);
        assert_eq!(s.value, 2);
    }

    #[test]
    fn one_maximal_element_with_alpha_two() {
        // P_{S/I} = D[(2,2,0)] inside g = (2,2,2); P_I is one interval
        let g = md(&[2, 2, 2]);
        let gens = [md(&[0, 0, 1])];
        let q = quotient_poset(&gens, &g).unwrap();
        assert_eq!(q.maximal_points(), vec![md(&[2, 2, 0])]);
        let p = ideal_poset(&gens, &g).unwrap();
        let s = grid_sdepth(&p).unwrap();
        assert_eq!(s.value, 3);
        assert_eq!(s.partition.intervals, vec![GridInterval::new(md(&[0, 0, 1]), g.clone())]);
    }

    #[test]
    fn validation_catches_errors() {
        let g = md(&[1, 1]);
        let p = ideal_poset(&[md(&[1, 0]), md(&[0, 1])], &g).unwrap();
        let part = |ivs: Vec<(&[u32], &[u32])>| GridPartition {
            g: g.clone(),
            intervals: ivs.into_iter().map(|(a, b)| GridInterval::new(md(a), md(b))).collect(),
        };
        assert_eq!(validate_grid_partition(&part(vec![(&[1, 0], &[1, 1]), (&[0, 1], &[0, 1])]), &p), Ok(()));
        assert_eq!(
            validate_grid_partition(&part(vec![(&[1, 0], &[1, 1]), (&[0, 1], &[1, 1])]), &p),
            Err(GridViolation::Overlap(md(&[1, 1])))
        );
        assert_eq!(
            validate_grid_partition(&part(vec![(&[0, 0], &[1, 1])]), &p),
            Err(GridViolation::Escapes(md(&[0, 0])))
        );
        assert_eq!(
            validate_grid_partition(&part(vec![(&[1, 0], &[1, 1])]), &p),
            Err(GridViolation::Uncovered(md(&[0, 1])))
        );
    }

    #[test]
    fn rejects_generators_above_bound() {
        assert!(matches!(
            ideal_poset(&[md(&[3, 0])], &md(&[2, 2])),
            Err(GridError::NotBelowBound { .. })
        ));
        assert!(matches!(
            ideal_poset(&[md(&[1, 0, 0])], &md(&[2, 2])),
            Err(GridError::DimensionMismatch { .. })
        ));
    }
}
