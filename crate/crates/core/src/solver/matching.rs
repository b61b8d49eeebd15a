use std::collections::VecDeque;

use crate::lattice::{complement_upset, Antichain, Interval, IntervalPartition};

const FREE: usize = usize::MAX;

/// Maximum bipartite matching by Hopcroft–Karp. `adj[u]` lists the right
/// vertices adjacent to left vertex `u`; returns `mate[u]` for each left
/// vertex.
pub fn hopcroft_karp(adj: &[Vec<usize>], right: usize) -> Vec<Option<usize>> {
    let left = adj.len();
    let mut mate_l = vec![FREE; left];
    let mut mate_r = vec![FREE; right];
    let mut dist = vec![0usize; left];
    loop {
        // layer the free left vertices
        let mut queue = VecDeque::new();
        for u in 0..left {
            if mate_l[u] == FREE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut reachable_free = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                match mate_r[v] {
                    FREE => reachable_free = true,
                    w if dist[w] == usize::MAX => {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                    _ => {}
                }
            }
        }
        if !reachable_free {
            break;
        }
        let mut augmented = false;
        for u in 0..left {
            if mate_l[u] == FREE && augment(u, adj, &mut mate_l, &mut mate_r, &mut dist) {
                augmented = true;
            }
        }
        if !augmented {
            break;
        }
    }
    mate_l.into_iter().map(|m| (m != FREE).then_some(m)).collect()
}

fn augment(u: usize, adj: &[Vec<usize>], mate_l: &mut [usize], mate_r: &mut [usize], dist: &mut [usize]) -> bool {
    for &v in &adj[u] {
        let w = mate_r[v];
        if w == FREE || (dist[w] == dist[u] + 1 && augment(w, adj, mate_l, mate_r, dist)) {
            mate_l[u] = v;
            mate_r[v] = u;
            return true;
        }
    }
    dist[u] = usize::MAX;
    false
}

/// The `k`-sets and `(k+1)`-sets of `2^n - D[facets]` with a maximum
/// matching between them.
fn slice_matching(facets: &Antichain, k: usize) -> (Vec<u32>, Vec<u32>, Vec<Option<usize>>) {
    let up = complement_upset(facets);
    let lower: Vec<u32> = up.iter().filter(|s| s.cardinality() == k).map(|s| s.bits()).collect();
    let upper: Vec<u32> = up.iter().filter(|s| s.cardinality() == k + 1).map(|s| s.bits()).collect();
    let adj: Vec<Vec<usize>> = lower
        .iter()
        .map(|&s| upper.iter().enumerate().filter(|(_, &t)| s & !t == 0).map(|(j, _)| j).collect())
        .collect();
    let mate = hopcroft_karp(&adj, upper.len());
    (lower, upper, mate)
}

/// Whether the `k`-sets of `P_I = 2^n - D[facets]` can be matched into its
/// `(k+1)`-sets. Vacuously true when there are no `k`-sets.
pub fn matching_cover(facets: &Antichain, k: usize) -> bool {
    let (_, _, mate) = slice_matching(facets, k);
    mate.iter().all(Option::is_some)
}

/// Partition of `P_I` from a complete matching: an interval `[S, T]` per
/// matched pair and trivial intervals elsewhere. Its Stanley depth exceeds
/// `k` whenever `P_I` has no sets below size `k`.
pub fn lemma_partition(facets: &Antichain, k: usize) -> Option<IntervalPartition> {
    let n = facets.n();
    let (lower, upper, mate) = slice_matching(facets, k);
    let mut used = vec![false; upper.len()];
    let mut intervals = Vec::with_capacity(lower.len());
    for (s, m) in lower.iter().zip(&mate) {
        let j = (*m)?;
        used[j] = true;
        intervals.push(Interval::from_bits_unchecked(*s, upper[j], n));
    }
    for s in complement_upset(facets).iter() {
        let c = s.cardinality();
        let matched = (c == k) || (c == k + 1 && upper.iter().zip(&used).any(|(&t, &u)| u && t == s.bits()));
        if !matched {
            intervals.push(Interval::trivial(s));
        }
    }
    Some(IntervalPartition::new(n, intervals))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::validate_partition;

    #[test]
    fn hopcroft_karp_small() {
        let adj = vec![vec![0, 1], vec![0], vec![1, 2]];
        let mate = hopcroft_karp(&adj, 3);
        assert!(mate.iter().all(Option::is_some));
        let adj = vec![vec![0], vec![0]];
        assert_eq!(hopcroft_karp(&adj, 1).iter().filter(|m| m.is_some()).count(), 1);
    }

    #[test]
    fn all_two_sets_of_five() {
        let facets = Antichain::all_k_sets(5, 2).unwrap();
        assert!(matching_cover(&facets, 2));
        let p = lemma_partition(&facets, 2).unwrap();
        assert_eq!(validate_partition(&p, &complement_upset(&facets)), Ok(()));
        assert!(p.sdepth().unwrap() > 2);
    }

    #[test]
    fn three_edges_on_five() {
        let facets = Antichain::from_vertex_lists(5, &[&[1, 2], &[1, 3], &[4, 5]]).unwrap();
        // 7 non-edges; brute-force check that some injection into 3-sets exists
        let up = complement_upset(&facets);
        let two: Vec<u32> = up.iter().filter(|s| s.cardinality() == 2).map(|s| s.bits()).collect();
        assert_eq!(two.len(), 7);
        assert!(matching_cover(&facets, 2));
        let (lower, upper, mate) = slice_matching(&facets, 2);
        let mut seen = std::collections::HashSet::new();
        for (s, m) in lower.iter().zip(&mate) {
            let t = upper[m.unwrap()];
            assert_eq!(s & !t, 0);
            assert!(seen.insert(t));
        }
    }

    #[test]
    fn empty_left_side_is_vacuous() {
        for n in 1..6 {
            assert!(matching_cover(&Antichain::simplex(n).unwrap(), n - 1));
        }
    }
}
