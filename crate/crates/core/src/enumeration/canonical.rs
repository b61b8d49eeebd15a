use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::lattice::{Antichain, VertexSet};

use super::EnumError;

/// Largest ground set accepted by [`canonical_form`].
pub const CANON_MAX_N: usize = 8;

/// Largest ground set handled by the precomputed uniform tables.
const FAST_MAX_N: usize = 7;

/// Edge indices are mapped six at a time through lookup tables.
const CHUNK: usize = 6;

/// The lexicographically least relabeling of an antichain.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalAntichain(Antichain);

impl CanonicalAntichain {
    pub fn as_antichain(&self) -> &Antichain {
        &self.0
    }

    pub fn into_antichain(self) -> Antichain {
        self.0
    }
}

impl fmt::Display for CanonicalAntichain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for CanonicalAntichain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

pub(super) fn wrap(canon: Antichain) -> CanonicalAntichain {
    CanonicalAntichain(canon)
}

/// Minimum over all `n!` relabelings of the canonically ordered member list.
pub fn canonical_form(facets: &Antichain) -> Result<CanonicalAntichain, EnumError> {
    let n = facets.n();
    if n > CANON_MAX_N {
        return Err(EnumError::CanonTooLarge(n));
    }
    if let Some(k) = facets.uniform_size() {
        if n <= FAST_MAX_N {
            let space = EdgeSpace::get(n, k);
            let mask = space.mask_of(facets);
            return Ok(CanonicalAntichain(space.antichain(space.canonical(mask))));
        }
    }
    Ok(CanonicalAntichain(generic_canonical(facets)))
}

/// Heap's algorithm over permutations of `0..n`, calling `f` on each.
pub(crate) fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            f(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn apply(perm: &[usize], bits: u32) -> u32 {
    perm.iter().enumerate().filter(|(v, _)| bits >> v & 1 == 1).fold(0, |acc, (_, &w)| acc | 1 << w)
}

fn generic_canonical(facets: &Antichain) -> Antichain {
    let n = facets.n();
    // (cardinality, bits) keys compare like the canonical member order
    let key = |bits: u32| (u64::from(bits.count_ones()) << 32) | u64::from(bits);
    let mut best: Vec<u64> = facets.iter().map(|s| key(s.bits())).collect();
    let mut scratch = Vec::with_capacity(best.len());
    for_each_permutation(n, |perm| {
        scratch.clear();
        scratch.extend(facets.iter().map(|s| key(apply(perm, s.bits()))));
        scratch.sort_unstable();
        if scratch < best {
            best.clone_from(&scratch);
        }
    });
    let members = best.iter().map(|&b| VertexSet::from_bits_unchecked(b as u32, n)).collect();
    Antichain::from_sorted_unchecked(n, members)
}

/// The `k`-subsets of `[n]` indexed in increasing numeric order, with
/// per-permutation lookup tables acting on edge-set bitmasks.
pub(crate) struct EdgeSpace {
    n: usize,
    edges: Vec<u32>,
    index: Vec<u8>,
    chunks: usize,
    perms: usize,
    tables: Vec<u64>,
}

impl EdgeSpace {
    /// Shared tables for `(n, k)`, built on first use.
    pub(crate) fn get(n: usize, k: usize) -> Arc<EdgeSpace> {
        static SPACES: OnceLock<Mutex<HashMap<(usize, usize), Arc<EdgeSpace>>>> = OnceLock::new();
        let spaces = SPACES.get_or_init(Default::default);
        let mut guard = spaces.lock().expect("edge space cache poisoned");
        guard.entry((n, k)).or_insert_with(|| Arc::new(EdgeSpace::build(n, k))).clone()
    }

    fn build(n: usize, k: usize) -> Self {
        assert!(k <= n && n <= FAST_MAX_N);
        let edges: Vec<u32> = (0..1u32 << n).filter(|b| b.count_ones() as usize == k).collect();
        let mut index = vec![u8::MAX; 1 << n];
        for (i, &e) in edges.iter().enumerate() {
            index[e as usize] = i as u8;
        }
        let m = edges.len();
        let chunks = m.div_ceil(CHUNK);
        // permutations moving few points come first: they reject most
        // non-canonical sets early
        let mut order = Vec::new();
        for_each_permutation(n, |perm| order.push(perm.to_vec()));
        order.sort_by_key(|perm| perm.iter().enumerate().filter(|&(i, &v)| i != v).count());
        let perms = order.len();
        let mut tables = Vec::new();
        for perm in &order {
            let image: Vec<u64> = edges.iter().map(|&e| 1u64 << index[apply(perm, e) as usize]).collect();
            for c in 0..chunks {
                for v in 0..1usize << CHUNK {
                    let mut out = 0u64;
                    for b in 0..CHUNK {
                        let i = c * CHUNK + b;
                        if v >> b & 1 == 1 && i < m {
                            out |= image[i];
                        }
                    }
                    tables.push(out);
                }
            }
        }
        Self { n, edges, index, chunks, perms, tables }
    }

    pub(crate) fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    fn map(&self, p: usize, x: u64) -> u64 {
        let base = &self.tables[(p * self.chunks) << CHUNK..((p + 1) * self.chunks) << CHUNK];
        let mut out = 0;
        for c in 0..self.chunks {
            out |= base[c << CHUNK | (x >> (c * CHUNK) & 63) as usize];
        }
        out
    }

    /// Whether no relabeling yields a lexicographically smaller edge list.
    /// In bitmask terms `a < b` iff the lowest bit of `a ^ b` lies in `a`,
    /// i.e. iff `a.reverse_bits() > b.reverse_bits()`.
    ///
    /// Edges are indexed in colex order, so the image of `x` starts with
    /// the images lying inside `{1..j}`, and those depend only on which
    /// vertices were sent to `1..j`. The search assigns images one vertex
    /// at a time and compares each new block of edges with the block of `x`
    /// whose largest vertex is `j`; most branches are decided at once.
    pub(crate) fn is_canonical(&self, x: u64) -> bool {
        if self.edges.len() == 1 {
            return true;
        }
        let mut edges = [0u32; 64];
        let mut len = 0;
        for (i, &e) in self.edges.iter().enumerate() {
            if x >> i & 1 == 1 {
                edges[len] = e;
                len += 1;
            }
        }
        !self.smaller_image(&edges[..len], 0, 0, &mut [0; 32])
    }

    /// Whether some completion of the partial relabeling (`img` on the
    /// vertices in `assigned`, images `0..j`) maps `edges` to a smaller list.
    fn smaller_image(&self, edges: &[u32], j: usize, assigned: u32, img: &mut [u32; 32]) -> bool {
        if j == self.n {
            return false;
        }
        // edges are sorted, so the block with largest vertex j is contiguous
        let target: Vec<u32> = edges.iter().copied().filter(|&e| 31 - e.leading_zeros() == j as u32).collect();
        let mut block = [0u32; 64];
        for v in 0..self.n {
            if assigned >> v & 1 == 1 {
                continue;
            }
            let now = assigned | 1 << v;
            img[v] = 1 << j;
            let mut len = 0;
            for &e in edges {
                if e >> v & 1 == 1 && e & !now == 0 {
                    block[len] = (0..self.n).filter(|&u| e >> u & 1 == 1).fold(0, |acc, u| acc | img[u]);
                    len += 1;
                }
            }
            let block = &mut block[..len];
            block.sort_unstable();
            // a list that runs out first continues with edges beyond j, so
            // it compares as larger
            let order = match block.iter().zip(&target).find(|(a, b)| a != b) {
                Some((a, b)) => a.cmp(b),
                None => target.len().cmp(&block.len()),
            };
            match order {
                std::cmp::Ordering::Less => return true,
                std::cmp::Ordering::Greater => continue,
                std::cmp::Ordering::Equal => {
                    if self.smaller_image(edges, j + 1, now, img) {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// [`EdgeSpace::is_canonical`] by trying every permutation, few-point
    /// movers first. Faster than the search on arbitrary masks, which are
    /// mostly rejected by a transposition; slower on canonical ones.
    pub(crate) fn is_canonical_by_tables(&self, x: u64) -> bool {
        let key = x.reverse_bits();
        (1..self.perms).all(|p| self.map(p, x).reverse_bits() <= key)
    }

    pub(crate) fn canonical(&self, x: u64) -> u64 {
        (0..self.perms).map(|p| self.map(p, x)).max_by_key(|y| y.reverse_bits()).unwrap_or(x)
    }

    pub(crate) fn mask_of(&self, facets: &Antichain) -> u64 {
        facets.iter().fold(0, |acc, s| acc | 1u64 << self.index[s.bits() as usize])
    }

    pub(crate) fn antichain(&self, mask: u64) -> Antichain {
        let members = (0..self.edges.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| VertexSet::from_bits_unchecked(self.edges[i], self.n))
            .collect();
        Antichain::from_sorted_unchecked(self.n, members)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::restrict_support;

    fn ac(n: usize, lists: &[&[usize]]) -> Antichain {
        Antichain::from_vertex_lists(n, lists).unwrap()
    }

    #[test]
    fn backtracking_canonicity_matches_tables() {
        for (n, k) in [(4, 2), (5, 2), (5, 3), (4, 1), (3, 3)] {
            let space = EdgeSpace::get(n, k);
            for x in 1..1u64 << space.edge_count() {
                assert_eq!(space.is_canonical(x), space.is_canonical_by_tables(x), "n={n} k={k} x={x:b}");
            }
        }
        let space = EdgeSpace::get(7, 3);
        let mut x = 0x2545_f491_4f6c_dd1du64;
        for _ in 0..2000 {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            let y = x & ((1 << 35) - 1);
            assert_eq!(space.is_canonical(y), space.is_canonical_by_tables(y));
            assert!(space.is_canonical(space.canonical(y)));
        }
    }

    #[test]
    fn heap_visits_every_permutation_once() {
        let mut seen = std::collections::HashSet::new();
        for_each_permutation(5, |p| assert!(seen.insert(p.to_vec())));
        assert_eq!(seen.len(), 120);
    }

    #[test]
    fn path_on_three_vertices() {
        // 3-vertex relabelings of {12,23}: the least sorted member list is {12,13}
        let a = restrict_support(&ac(5, &[&[1, 3], &[3, 5]]));
        assert_eq!(a, ac(3, &[&[1, 2], &[2, 3]]));
        let mut images = Vec::new();
        for_each_permutation(3, |p| images.push(a.relabel(p)));
        let least = images.into_iter().min().unwrap();
        assert_eq!(least, ac(3, &[&[1, 2], &[1, 3]]));
        assert_eq!(canonical_form(&a).unwrap().into_antichain(), least);
    }

    #[test]
    fn fast_path_matches_generic() {
        let a = ac(6, &[&[1, 2, 5], &[2, 4, 6], &[1, 2, 3], &[2, 4, 5], &[3, 4, 5], &[2, 3, 5]]);
        let fast = canonical_form(&a).unwrap().into_antichain();
        assert_eq!(fast, generic_canonical(&a));
        let b = a.relabel(&[5, 3, 1, 0, 2, 4]);
        assert_eq!(canonical_form(&b).unwrap().into_antichain(), fast);
    }

    #[test]
    fn mixed_sizes_use_generic_path() {
        let a = ac(4, &[&[1, 2, 3], &[4]]);
        let c = canonical_form(&a).unwrap().into_antichain();
        assert_eq!(c, ac(4, &[&[1], &[2, 3, 4]]));
        assert_eq!(canonical_form(&c).unwrap().into_antichain(), c);
    }

    #[test]
    fn rejects_large_ground_sets() {
        let a = ac(9, &[&[1, 9]]);
        assert!(matches!(canonical_form(&a), Err(EnumError::CanonTooLarge(9))));
    }
}
