//! Subset-lattice primitives.
//!
//! Everything here lives inside the Boolean lattice `2^[n]` for `n <= 16`.
//! A [`VertexSet`] is a bitmask (vertex `i` is bit `i - 1`) and a
//! [`SetFamily`] is a flat membership bitset of length `2^n`, so membership
//! tests and closures are word operations.

use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

/// Largest supported ground set.
pub const MAX_N: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("ground set size {0} exceeds the maximum of {MAX_N}")]
    GroundTooLarge(usize),
    #[error("vertex {vertex} is outside the ground set [1, {n}]")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("bitmask {bits:#b} has bits outside the ground set of size {n}")]
    BitsOutOfRange { bits: u32, n: usize },
    #[error("ground set mismatch: {0} vs {1}")]
    GroundMismatch(usize, usize),
    #[error("{0} and {1} are comparable")]
    Comparable(VertexSet, VertexSet),
    #[error("duplicate member {0}")]
    Duplicate(VertexSet),
    #[error("lower bound {lower} is not contained in upper bound {upper}")]
    NotAnInterval { lower: VertexSet, upper: VertexSet },
    #[error("the lattice 2^0 has no nonempty sets to partition")]
    EmptyGround,
}

pub(crate) fn check_ground(n: usize) -> Result<(), LatticeError> {
    if n > MAX_N {
        Err(LatticeError::GroundTooLarge(n))
    } else {
        Ok(())
    }
}

/// Mask with the lowest `n` bits set.
#[inline]
pub(crate) fn ground_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Packs the bits of `bits` selected by `keep` into the low positions,
/// preserving their relative order.
#[inline]
pub(crate) fn compress_bits(bits: u32, keep: u32) -> u32 {
    let mut out = 0;
    let mut j = 0;
    let mut rest = keep;
    while rest != 0 {
        let low = rest & rest.wrapping_neg();
        if bits & low != 0 {
            out |= 1 << j;
        }
        j += 1;
        rest &= rest - 1;
    }
    out
}

/// Iterates over all submasks of `mask`, including `0` and `mask` itself.
pub(crate) fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

/// A subset of the ground set `[n]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: u32,
    n: u8,
}

impl VertexSet {
    pub fn new(bits: u32, n: usize) -> Result<Self, LatticeError> {
        check_ground(n)?;
        if bits & !ground_mask(n) != 0 {
            return Err(LatticeError::BitsOutOfRange { bits, n });
        }
        Ok(Self { bits, n: n as u8 })
    }

    /// Builds a set from 1-based vertex labels.
    pub fn from_vertices(vertices: &[usize], n: usize) -> Result<Self, LatticeError> {
        check_ground(n)?;
        let mut bits = 0;
        for &v in vertices {
            if v == 0 || v > n {
                return Err(LatticeError::VertexOutOfRange { vertex: v, n });
            }
            bits |= 1 << (v - 1);
        }
        Ok(Self { bits, n: n as u8 })
    }

    pub(crate) fn from_bits_unchecked(bits: u32, n: usize) -> Self {
        debug_assert!(n <= MAX_N && bits & !ground_mask(n) == 0);
        Self { bits, n: n as u8 }
    }

    pub fn empty(n: usize) -> Result<Self, LatticeError> {
        Self::new(0, n)
    }

    pub fn full(n: usize) -> Result<Self, LatticeError> {
        check_ground(n)?;
        Ok(Self { bits: ground_mask(n), n: n as u8 })
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.bits
    }

    #[inline]
    pub fn n(self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn cardinality(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    /// Whether the 1-based vertex `v` belongs to the set.
    pub fn contains(self, v: usize) -> bool {
        v >= 1 && v <= self.n() && self.bits & (1 << (v - 1)) != 0
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_comparable(self, other: VertexSet) -> bool {
        self.is_subset(other) || other.is_subset(self)
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        Self { bits: self.bits | other.bits, n: self.n.max(other.n) }
    }

    pub fn intersection(self, other: VertexSet) -> VertexSet {
        Self { bits: self.bits & other.bits, n: self.n.max(other.n) }
    }

    pub fn difference(self, other: VertexSet) -> VertexSet {
        Self { bits: self.bits & !other.bits, n: self.n }
    }

    pub fn with(self, v: usize) -> Result<VertexSet, LatticeError> {
        if v == 0 || v > self.n() {
            return Err(LatticeError::VertexOutOfRange { vertex: v, n: self.n() });
        }
        Ok(Self { bits: self.bits | 1 << (v - 1), n: self.n })
    }

    pub fn without(self, v: usize) -> VertexSet {
        if v == 0 || v > self.n() {
            return self;
        }
        Self { bits: self.bits & !(1 << (v - 1)), n: self.n }
    }

    pub fn complement(self) -> VertexSet {
        Self { bits: !self.bits & ground_mask(self.n()), n: self.n }
    }

    /// 1-based vertex labels in increasing order.
    pub fn vertices(self) -> impl Iterator<Item = usize> {
        let mut rest = self.bits;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let v = rest.trailing_zeros() as usize + 1;
            rest &= rest - 1;
            Some(v)
        })
    }

    /// Same bits, viewed inside a different ground set.
    pub fn with_ground(self, n: usize) -> Result<VertexSet, LatticeError> {
        Self::new(self.bits, n)
    }

    /// Keeps only the vertices in `keep` and renumbers them `1..=|keep|`
    /// in increasing order.
    pub fn compress(self, keep: VertexSet) -> VertexSet {
        Self {
            bits: compress_bits(self.bits, keep.bits),
            n: keep.cardinality() as u8,
        }
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cardinality()
            .cmp(&other.cardinality())
            .then(self.bits.cmp(&other.bits))
            .then(self.n.cmp(&other.n))
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.vertices().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A family of pairwise incomparable sets, kept in canonical order
/// (cardinality, then numeric bits).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Antichain {
    n: usize,
    members: Vec<VertexSet>,
}

impl Antichain {
    pub fn new(n: usize, members: impl IntoIterator<Item = VertexSet>) -> Result<Self, LatticeError> {
        check_ground(n)?;
        let mut members = members
            .into_iter()
            .map(|m| {
                if m.bits & !ground_mask(n) != 0 {
                    Err(LatticeError::BitsOutOfRange { bits: m.bits, n })
                } else {
                    Ok(VertexSet::from_bits_unchecked(m.bits, n))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        members.sort();
        for w in members.windows(2) {
            if w[0] == w[1] {
                return Err(LatticeError::Duplicate(w[0]));
            }
        }
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                if a.is_subset(*b) {
                    return Err(LatticeError::Comparable(*a, *b));
                }
            }
        }
        Ok(Self { n, members })
    }

    /// Builds an antichain from raw bitmasks.
    pub fn from_bits(n: usize, bits: impl IntoIterator<Item = u32>) -> Result<Self, LatticeError> {
        check_ground(n)?;
        let members = bits
            .into_iter()
            .map(|b| VertexSet::new(b, n))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, members)
    }

    /// Builds an antichain from lists of 1-based vertices.
    pub fn from_vertex_lists(n: usize, lists: &[&[usize]]) -> Result<Self, LatticeError> {
        let members = lists
            .iter()
            .map(|l| VertexSet::from_vertices(l, n))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, members)
    }

    pub fn empty(n: usize) -> Result<Self, LatticeError> {
        Self::new(n, [])
    }

    /// The antichain `{[n]}` whose down set is all of `2^n`.
    pub fn simplex(n: usize) -> Result<Self, LatticeError> {
        Self::new(n, [VertexSet::full(n)?])
    }

    /// All `k`-subsets of `[n]`.
    pub fn all_k_sets(n: usize, k: usize) -> Result<Self, LatticeError> {
        check_ground(n)?;
        let members = (0..1u32 << n)
            .filter(|b| b.count_ones() as usize == k)
            .map(|b| VertexSet::from_bits_unchecked(b, n));
        Self::new(n, members)
    }

    /// Maximal elements of a family.
    pub fn maximal_of(family: &SetFamily) -> Antichain {
        let n = family.n();
        let mut members = Vec::new();
        for s in family.iter_bits() {
            let free = !s & ground_mask(n);
            let maximal = (0..n).all(|i| free & (1 << i) == 0 || !family.contains_bits(s | 1 << i));
            if maximal {
                members.push(VertexSet::from_bits_unchecked(s, n));
            }
        }
        members.sort();
        Self { n, members }
    }

    /// Minimal elements of a family.
    pub fn minimal_of(family: &SetFamily) -> Antichain {
        let n = family.n();
        let mut members = Vec::new();
        for s in family.iter_bits() {
            let minimal = (0..n).all(|i| s & (1 << i) == 0 || !family.contains_bits(s & !(1 << i)));
            if minimal {
                members.push(VertexSet::from_bits_unchecked(s, n));
            }
        }
        members.sort();
        Self { n, members }
    }

    pub(crate) fn from_sorted_unchecked(n: usize, members: Vec<VertexSet>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Self { n, members }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[VertexSet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexSet> + '_ {
        self.members.iter().copied()
    }

    pub fn min_size(&self) -> Option<usize> {
        self.members.first().map(|m| m.cardinality())
    }

    pub fn max_size(&self) -> Option<usize> {
        self.members.last().map(|m| m.cardinality())
    }

    /// The common member size, if all members have the same size.
    pub fn uniform_size(&self) -> Option<usize> {
        match (self.min_size(), self.max_size()) {
            (Some(a), Some(b)) if a == b => Some(a),
            _ => None,
        }
    }

    pub fn is_pure(&self) -> bool {
        self.uniform_size().is_some()
    }

    /// Union of all members.
    pub fn support(&self) -> VertexSet {
        let bits = self.members.iter().fold(0, |acc, m| acc | m.bits);
        VertexSet::from_bits_unchecked(bits, self.n)
    }

    /// Intersection of all members (`[n]` for the empty antichain).
    pub fn common_core(&self) -> VertexSet {
        let bits = self.members.iter().fold(ground_mask(self.n), |acc, m| acc & m.bits);
        VertexSet::from_bits_unchecked(bits, self.n)
    }

    /// Number of members containing the 1-based vertex `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.members.iter().filter(|m| m.contains(v)).count()
    }

    /// Applies the relabeling `v -> perm[v - 1] + 1` (a permutation of
    /// `0..n`) to every member.
    pub fn relabel(&self, perm: &[usize]) -> Antichain {
        assert_eq!(perm.len(), self.n, "permutation length must equal n");
        let mut members: Vec<VertexSet> = self
            .members
            .iter()
            .map(|m| {
                let bits = m.vertices().fold(0, |acc, v| acc | 1 << perm[v - 1]);
                VertexSet::from_bits_unchecked(bits, self.n)
            })
            .collect();
        members.sort();
        Self { n: self.n, members }
    }

    /// Keeps only the vertices in `keep`, renumbered in increasing order.
    /// The caller guarantees the result is still an antichain.
    pub(crate) fn compress(&self, keep: VertexSet) -> Antichain {
        let mut members: Vec<VertexSet> = self.members.iter().map(|m| m.compress(keep)).collect();
        members.sort();
        Self { n: keep.cardinality(), members }
    }
}

impl fmt::Display for Antichain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::format_antichain(self))
    }
}

impl fmt::Debug for Antichain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Antichain(n={}, {})", self.n, self)
    }
}

/// Closure property a [`SetFamily`] is known to have.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    DownSet,
    UpSet,
    General,
}

/// An explicit family of subsets of `[n]`.
#[derive(Clone, PartialEq, Eq)]
pub struct SetFamily {
    n: usize,
    role: Role,
    bits: FixedBitSet,
}

impl SetFamily {
    /// Builds a family from sets; the role is detected from the members.
    pub fn from_sets(n: usize, sets: impl IntoIterator<Item = VertexSet>) -> Result<Self, LatticeError> {
        check_ground(n)?;
        let mut bits = FixedBitSet::with_capacity(1 << n);
        for s in sets {
            if s.bits & !ground_mask(n) != 0 {
                return Err(LatticeError::BitsOutOfRange { bits: s.bits, n });
            }
            bits.insert(s.bits as usize);
        }
        let mut family = Self { n, role: Role::General, bits };
        family.role = family.detect_role();
        Ok(family)
    }

    pub fn empty(n: usize) -> Result<Self, LatticeError> {
        check_ground(n)?;
        Ok(Self { n, role: Role::DownSet, bits: FixedBitSet::with_capacity(1 << n) })
    }

    /// All of `2^n`.
    pub fn full(n: usize) -> Result<Self, LatticeError> {
        check_ground(n)?;
        let mut bits = FixedBitSet::with_capacity(1 << n);
        bits.insert_range(..);
        Ok(Self { n, role: Role::DownSet, bits })
    }

    /// `2^n` without the empty set.
    pub fn nonempty_sets(n: usize) -> Result<Self, LatticeError> {
        let mut f = Self::full(n)?;
        f.bits.set(0, false);
        f.role = Role::UpSet;
        Ok(f)
    }

    pub(crate) fn from_bitset(n: usize, bits: FixedBitSet, role: Role) -> Self {
        debug_assert_eq!(bits.len(), 1 << n);
        Self { n, role, bits }
    }

    fn detect_role(&self) -> Role {
        let down = self.iter_bits().all(|s| {
            let mut rest = s;
            while rest != 0 {
                let low = rest & rest.wrapping_neg();
                if !self.contains_bits(s & !low) {
                    return false;
                }
                rest &= rest - 1;
            }
            true
        });
        if down {
            return Role::DownSet;
        }
        let up = self.iter_bits().all(|s| {
            (0..self.n).all(|i| s & (1 << i) != 0 || self.contains_bits(s | 1 << i))
        });
        if up {
            Role::UpSet
        } else {
            Role::General
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    #[inline]
    pub fn contains(&self, s: VertexSet) -> bool {
        s.bits & !ground_mask(self.n) == 0 && self.bits.contains(s.bits as usize)
    }

    #[inline]
    pub(crate) fn contains_bits(&self, s: u32) -> bool {
        self.bits.contains(s as usize)
    }

    pub(crate) fn bitset(&self) -> &FixedBitSet {
        &self.bits
    }

    /// Members as raw masks, in increasing numeric order.
    pub(crate) fn iter_bits(&self) -> impl Iterator<Item = u32> + '_ {
        self.bits.ones().map(|b| b as u32)
    }

    /// Members in increasing numeric order.
    pub fn iter(&self) -> impl Iterator<Item = VertexSet> + '_ {
        let n = self.n;
        self.iter_bits().map(move |b| VertexSet::from_bits_unchecked(b, n))
    }

    /// Members in canonical order (cardinality, then numeric).
    pub fn sorted_members(&self) -> Vec<VertexSet> {
        let mut v: Vec<VertexSet> = self.iter().collect();
        v.sort();
        v
    }

    /// The sets of `2^n` not in this family.
    pub fn complement(&self) -> SetFamily {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        let role = match self.role {
            Role::DownSet => Role::UpSet,
            Role::UpSet => Role::DownSet,
            Role::General => Role::General,
        };
        Self { n: self.n, role, bits }
    }

    pub fn maximal_elements(&self) -> Antichain {
        Antichain::maximal_of(self)
    }

    pub fn minimal_elements(&self) -> Antichain {
        Antichain::minimal_of(self)
    }
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SetFamily")
            .field("n", &self.n)
            .field("role", &self.role)
            .field("members", &self.sorted_members())
            .finish()
    }
}

/// Face counts by size. Entries may go negative only as criterion residuals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FVector(pub Vec<i64>);

impl FVector {
    pub fn new(counts: Vec<i64>) -> Self {
        Self(counts)
    }

    /// Largest tracked size.
    pub fn top(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn get(&self, i: usize) -> i64 {
        self.0.get(i).copied().unwrap_or(0)
    }
}

impl std::ops::Index<usize> for FVector {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl fmt::Display for FVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

/// The interval `[lower, upper] = {C : lower ⊆ C ⊆ upper}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    lower: VertexSet,
    upper: VertexSet,
}

impl Interval {
    pub fn new(lower: VertexSet, upper: VertexSet) -> Result<Self, LatticeError> {
        if lower.n != upper.n {
            return Err(LatticeError::GroundMismatch(lower.n(), upper.n()));
        }
        if !lower.is_subset(upper) {
            return Err(LatticeError::NotAnInterval { lower, upper });
        }
        Ok(Self { lower, upper })
    }

    pub fn trivial(set: VertexSet) -> Self {
        Self { lower: set, upper: set }
    }

    pub(crate) fn from_bits_unchecked(lower: u32, upper: u32, n: usize) -> Self {
        debug_assert_eq!(lower & !upper, 0);
        Self {
            lower: VertexSet::from_bits_unchecked(lower, n),
            upper: VertexSet::from_bits_unchecked(upper, n),
        }
    }

    pub fn lower(&self) -> VertexSet {
        self.lower
    }

    pub fn upper(&self) -> VertexSet {
        self.upper
    }

    pub fn contains(&self, s: VertexSet) -> bool {
        self.lower.is_subset(s) && s.is_subset(self.upper)
    }

    /// Number of sets in the interval, `2^(|upper| - |lower|)`.
    pub fn size(&self) -> u64 {
        1u64 << (self.upper.cardinality() - self.lower.cardinality())
    }

    pub fn members(&self) -> impl Iterator<Item = VertexSet> + '_ {
        let free = self.upper.bits & !self.lower.bits;
        let base = self.lower.bits;
        let n = self.lower.n();
        submasks(free).map(move |m| VertexSet::from_bits_unchecked(base | m, n))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A list of intervals claimed to partition some family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalPartition {
    n: usize,
    intervals: Vec<Interval>,
    sdepth: Option<usize>,
}

impl IntervalPartition {
    pub fn new(n: usize, intervals: Vec<Interval>) -> Self {
        let sdepth = intervals.iter().map(|iv| iv.upper.cardinality()).min();
        Self { n, intervals, sdepth }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Minimum upper-bound size; `None` for the empty partition.
    pub fn sdepth(&self) -> Option<usize> {
        self.sdepth
    }

    /// Sum of the interval sizes.
    pub fn total_size(&self) -> u64 {
        self.intervals.iter().map(Interval::size).sum()
    }

    /// Intervals with more than one member.
    pub fn nontrivial(&self) -> impl Iterator<Item = &Interval> {
        self.intervals.iter().filter(|iv| iv.lower != iv.upper)
    }
}

impl fmt::Display for IntervalPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}

/// Why a claimed partition is not a partition of the target family.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("{0} is covered by more than one interval")]
    Overlap(VertexSet),
    #[error("{0} lies in an interval but not in the family")]
    Escapes(VertexSet),
    #[error("{0} is not covered by any interval")]
    Uncovered(VertexSet),
    #[error("partition ground set {0} does not match family ground set {1}")]
    GroundMismatch(usize, usize),
}

/// Checks that `p` is a partition of `family` into intervals.
pub fn validate_partition(p: &IntervalPartition, family: &SetFamily) -> Result<(), Violation> {
    let n = family.n();
    if p.n != n {
        return Err(Violation::GroundMismatch(p.n, n));
    }
    let mut covered = FixedBitSet::with_capacity(1 << n);
    for iv in &p.intervals {
        for s in iv.members() {
            if !family.contains(s) {
                return Err(Violation::Escapes(s));
            }
            if covered.put(s.bits as usize) {
                return Err(Violation::Overlap(s));
            }
        }
    }
    if covered != *family.bitset() {
        let missing = family.sorted_members().into_iter().find(|s| !covered.contains(s.bits as usize));
        if let Some(s) = missing {
            return Err(Violation::Uncovered(s));
        }
    }
    Ok(())
}

/// The closed down set `D[facets]`. Empty for the empty antichain.
pub fn down_closure(facets: &Antichain) -> SetFamily {
    let n = facets.n();
    let mut bits = FixedBitSet::with_capacity(1 << n);
    for f in facets.iter() {
        if bits.contains(f.bits as usize) {
            continue;
        }
        for s in submasks(f.bits) {
            bits.insert(s as usize);
        }
    }
    SetFamily::from_bitset(n, bits, Role::DownSet)
}

/// `2^n - D[facets]`, the up set of non-faces.
pub fn complement_upset(facets: &Antichain) -> SetFamily {
    down_closure(facets).complement()
}

/// Face counts of `family` for sizes `0..=top`.
pub fn f_vector(family: &SetFamily, top: usize) -> FVector {
    let mut counts = vec![0i64; top + 1];
    for s in family.iter_bits() {
        let c = s.count_ones() as usize;
        if c <= top {
            counts[c] += 1;
        }
    }
    FVector(counts)
}

/// Partition of `2^n - {∅}` into the intervals `[{k}, [k]]`, `k = n, ..., 1`.
pub fn singleton_partition(n: usize) -> Result<IntervalPartition, LatticeError> {
    if n == 0 {
        return Err(LatticeError::EmptyGround);
    }
    check_ground(n)?;
    let intervals = (1..=n)
        .rev()
        .map(|k| Interval::from_bits_unchecked(1 << (k - 1), ground_mask(k), n))
        .collect();
    Ok(IntervalPartition::new(n, intervals))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ac(n: usize, lists: &[&[usize]]) -> Antichain {
        Antichain::from_vertex_lists(n, lists).unwrap()
    }

    fn vs(n: usize, v: &[usize]) -> VertexSet {
        VertexSet::from_vertices(v, n).unwrap()
    }

    fn binom(n: usize, k: usize) -> i64 {
        (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
    }

    #[test]
    fn vertex_set_rejects_out_of_range() {
        assert!(VertexSet::new(0b1000, 3).is_err());
        assert!(VertexSet::from_vertices(&[4], 3).is_err());
        assert!(VertexSet::from_vertices(&[0], 3).is_err());
        assert!(VertexSet::new(0, 17).is_err());
        assert_eq!(vs(5, &[1, 3, 5]).cardinality(), 3);
    }

    #[test]
    fn canonical_order_is_size_then_bits() {
        let mut v = vec![vs(3, &[1, 2]), vs(3, &[3]), vs(3, &[1]), vs(3, &[])];
        v.sort();
        assert_eq!(v, vec![vs(3, &[]), vs(3, &[1]), vs(3, &[3]), vs(3, &[1, 2])]);
    }

    #[test]
    fn antichain_rejects_comparable_and_duplicates() {
        let err = Antichain::from_vertex_lists(3, &[&[1, 2, 3], &[1, 2]]).unwrap_err();
        assert_eq!(err, LatticeError::Comparable(vs(3, &[1, 2]), vs(3, &[1, 2, 3])));
        let err = Antichain::new(3, [vs(3, &[1]), vs(3, &[1])]).unwrap_err();
        assert_eq!(err, LatticeError::Duplicate(vs(3, &[1])));
    }

    #[test]
    fn down_closure_single_facet() {
        let d = down_closure(&ac(2, &[&[1, 2]]));
        assert_eq!(d.len(), 4);
        assert_eq!(d.role(), Role::DownSet);
    }

    #[test]
    fn down_closure_six_facets() {
        let a = ac(5, &[&[1, 2, 3], &[1, 2, 4], &[1, 2, 5], &[1, 3, 4], &[3, 4, 5], &[2, 3, 4]]);
        assert_eq!(f_vector(&down_closure(&a), 3), FVector(vec![1, 5, 10, 6]));
    }

    #[test]
    fn down_closure_empty() {
        let d = down_closure(&Antichain::empty(4).unwrap());
        assert!(d.is_empty());
        assert_eq!(complement_upset(&Antichain::empty(4).unwrap()).len(), 16);
    }

    #[test]
    fn complement_upset_examples() {
        let singletons = ac(3, &[&[1], &[2], &[3]]);
        let up = complement_upset(&singletons);
        assert_eq!(up.len(), 4);
        assert!(up.iter().all(|s| s.cardinality() >= 2));
        assert_eq!(up.role(), Role::UpSet);

        let s = ac(5, &[&[1, 2, 3], &[1, 2, 4], &[1, 4, 5], &[2, 3, 4]]);
        let two_sets: Vec<_> = complement_upset(&s).iter().filter(|m| m.cardinality() == 2).collect();
        assert_eq!(two_sets, vec![vs(5, &[2, 5]), vs(5, &[3, 5])]);

        assert!(complement_upset(&Antichain::simplex(5).unwrap()).is_empty());
    }

    #[test]
    fn f_vector_regular_hypergraph() {
        // 3-regular 3-uniform hypergraph on [5]
        let h = ac(5, &[&[1, 2, 3], &[1, 2, 4], &[1, 3, 5], &[2, 4, 5], &[3, 4, 5]]);
        assert!((1..=5).all(|v| h.degree(v) == 3));
        assert_eq!(f_vector(&down_closure(&h), 3), FVector(vec![1, 5, 10, 5]));
        assert_eq!(f_vector(&SetFamily::empty(4).unwrap(), 3), FVector(vec![0, 0, 0, 0]));
    }

    #[test]
    fn validate_partition_reports_violations() {
        let full = SetFamily::full(2).unwrap();
        let e = vs(2, &[]);
        let top = vs(2, &[1, 2]);
        let p = IntervalPartition::new(
            2,
            vec![Interval::new(e, top).unwrap(), Interval::new(vs(2, &[2]), top).unwrap()],
        );
        assert!(matches!(validate_partition(&p, &full), Err(Violation::Overlap(_))));

        let p = IntervalPartition::new(2, vec![Interval::new(e, vs(2, &[1])).unwrap()]);
        // {2} is the first missing set in canonical order
        assert_eq!(validate_partition(&p, &full), Err(Violation::Uncovered(vs(2, &[2]))));

        let p = IntervalPartition::new(2, vec![Interval::new(e, top).unwrap()]);
        let nonempty = SetFamily::nonempty_sets(2).unwrap();
        assert_eq!(validate_partition(&p, &nonempty), Err(Violation::Escapes(e)));
    }

    #[test]
    fn validate_partition_ideal_example() {
        let s = ac(5, &[&[1, 2, 3], &[1, 2, 4], &[1, 4, 5], &[2, 3, 4]]);
        let pi = complement_upset(&s);
        let big = [
            Interval::new(vs(5, &[2, 5]), vs(5, &[1, 2, 4, 5])).unwrap(),
            Interval::new(vs(5, &[3, 5]), vs(5, &[1, 3, 4, 5])).unwrap(),
            // the non-faces 134 and 235 also need size-4 tops
            Interval::new(vs(5, &[1, 3, 4]), vs(5, &[1, 2, 3, 4])).unwrap(),
            Interval::new(vs(5, &[2, 3, 5]), vs(5, &[2, 3, 4, 5])).unwrap(),
        ];
        let mut intervals = big.to_vec();
        for m in pi.iter() {
            if !big.iter().any(|iv| iv.contains(m)) {
                intervals.push(Interval::trivial(m));
            }
        }
        let p = IntervalPartition::new(5, intervals);
        assert_eq!(validate_partition(&p, &pi), Ok(()));
        assert!(p.nontrivial().all(|iv| iv.upper().cardinality() >= 4));
        assert!(p.sdepth().unwrap() >= 4);
    }

    #[test]
    fn singleton_partition_small() {
        assert!(singleton_partition(0).is_err());
        let p1 = singleton_partition(1).unwrap();
        assert_eq!(p1.intervals(), &[Interval::new(vs(1, &[1]), vs(1, &[1])).unwrap()]);
        let p2 = singleton_partition(2).unwrap();
        assert_eq!(
            p2.intervals(),
            &[
                Interval::new(vs(2, &[2]), vs(2, &[1, 2])).unwrap(),
                Interval::new(vs(2, &[1]), vs(2, &[1])).unwrap()
            ]
        );
    }

    #[test]
    fn singleton_partition_covers_by_brute_force() {
        for n in 1..=8 {
            let p = singleton_partition(n).unwrap();
            assert_eq!(p.len(), n);
            // every nonempty set lies in exactly one interval
            for s in 1u32..1 << n {
                let s = VertexSet::new(s, n).unwrap();
                assert_eq!(p.intervals().iter().filter(|iv| iv.contains(s)).count(), 1);
            }
            assert!(!p.intervals().iter().any(|iv| iv.contains(VertexSet::empty(n).unwrap())));
            let tops: Vec<_> = p.intervals().iter().map(|iv| iv.upper().cardinality()).collect();
            assert_eq!(tops, (1..=n).rev().collect::<Vec<_>>());
            assert!(p.intervals().iter().all(|iv| iv.lower().cardinality() == 1));
            assert_eq!(validate_partition(&p, &SetFamily::nonempty_sets(n).unwrap()), Ok(()));
        }
    }

    #[test]
    fn maximal_and_minimal_elements() {
        let a = ac(5, &[&[1, 2, 3], &[4, 5]]);
        assert_eq!(down_closure(&a).maximal_elements(), a);
        let up = complement_upset(&a);
        let minimal = up.minimal_elements();
        assert!(minimal.iter().all(|m| m.cardinality() == 2));
        assert_eq!(minimal.len(), 6);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn antichain_strategy() -> impl Strategy<Value = Antichain> {
            (1usize..=6).prop_flat_map(|n| {
                proptest::collection::vec(0u32..(1 << n), 0..8).prop_map(move |sets| {
                    // keep only maximal sets to force an antichain
                    let mut keep: Vec<u32> = Vec::new();
                    for &s in &sets {
                        if sets.iter().any(|&t| t != s && s & !t == 0) || keep.contains(&s) {
                            continue;
                        }
                        keep.push(s);
                    }
                    Antichain::from_bits(n, keep).unwrap()
                })
            })
        }

        proptest! {
            #[test]
            fn down_and_up_partition_the_lattice(a in antichain_strategy()) {
                let d = down_closure(&a);
                let u = complement_upset(&a);
                prop_assert_eq!(d.len() + u.len(), 1 << a.n());
                prop_assert!(d.iter().all(|s| !u.contains(s)));
            }

            #[test]
            fn f_vector_bounded_by_binomials(a in antichain_strategy()) {
                let n = a.n();
                let f = f_vector(&down_closure(&a), n);
                for i in 0..=n {
                    prop_assert!(f[i] <= binom(n, i));
                }
                prop_assert_eq!(f[0] == 1, !a.is_empty());
            }

            #[test]
            fn valid_partitions_have_matching_size(a in antichain_strategy()) {
                // trivial partition of the down set is always valid
                let d = down_closure(&a);
                let p = IntervalPartition::new(a.n(), d.iter().map(Interval::trivial).collect());
                prop_assert_eq!(validate_partition(&p, &d), Ok(()));
                prop_assert_eq!(p.total_size(), d.len() as u64);
            }
        }
    }
}
