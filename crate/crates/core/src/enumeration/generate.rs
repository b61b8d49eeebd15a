use rayon::prelude::*;

use super::canonical::{CanonicalAntichain, EdgeSpace};
use super::EnumError;

/// Largest number of candidate edges for which every edge set is tested.
pub const EXHAUSTIVE_MAX_EDGES: usize = 22;

/// Largest ground set [`enumerate`] accepts.
pub const ENUM_MAX_N: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Exhaustive when `C(n,k) <= 22`, orderly growth otherwise.
    #[default]
    Auto,
    /// Test every nonempty edge set for canonicity.
    Exhaustive,
    /// Grow canonical edge sets one edge at a time, keeping an extension
    /// only if it is canonical. Removing the largest edge of a canonical set
    /// leaves a canonical set, so each class is reached exactly once.
    Orderly,
}

fn check_shape(n: usize, k: usize) -> Result<(), EnumError> {
    if k > n {
        return Err(EnumError::InvalidShape { n, k });
    }
    if n > ENUM_MAX_N {
        return Err(EnumError::OutOfScale { n, k });
    }
    Ok(())
}

/// Edge-set bitmasks (over the `k`-subsets of `[n]` in numeric order) of
/// every nonempty `k`-uniform hypergraph up to isomorphism, ordered by edge
/// count and then lexicographically by edge list.
pub fn enumerate_masks(n: usize, k: usize, strategy: Strategy) -> Result<Vec<u64>, EnumError> {
    check_shape(n, k)?;
    let space = EdgeSpace::get(n, k);
    let m = space.edge_count();
    let exhaustive = match strategy {
        Strategy::Auto => m <= EXHAUSTIVE_MAX_EDGES,
        Strategy::Exhaustive => {
            if m > EXHAUSTIVE_MAX_EDGES {
                return Err(EnumError::OutOfScale { n, k });
            }
            true
        }
        Strategy::Orderly => false,
    };
    let mut masks: Vec<u64> = if exhaustive {
        (1..1u64 << m).into_par_iter().filter(|&x| space.is_canonical_by_tables(x)).collect()
    } else {
        (0..m)
            .into_par_iter()
            .flat_map_iter(|e| {
                let mut out = Vec::new();
                let x = 1u64 << e;
                if space.is_canonical(x) {
                    grow(&space, x, e, m, &mut out);
                }
                out
            })
            .collect()
    };
    masks.par_sort_unstable_by_key(|x| (x.count_ones(), std::cmp::Reverse(x.reverse_bits())));
    Ok(masks)
}

fn grow(space: &EdgeSpace, x: u64, last: usize, m: usize, out: &mut Vec<u64>) {
    out.push(x);
    for e in last + 1..m {
        let y = x | 1u64 << e;
        if space.is_canonical(y) {
            grow(space, y, e, m, out);
        }
    }
}

/// Every nonempty `k`-uniform hypergraph on `[n]` up to isomorphism, each
/// exactly once, in the order of [`enumerate_masks`].
pub fn enumerate(n: usize, k: usize) -> Result<Vec<CanonicalAntichain>, EnumError> {
    enumerate_with(n, k, Strategy::Auto)
}

pub fn enumerate_with(n: usize, k: usize, strategy: Strategy) -> Result<Vec<CanonicalAntichain>, EnumError> {
    let masks = enumerate_masks(n, k, strategy)?;
    let space = EdgeSpace::get(n, k);
    Ok(masks.into_iter().map(|x| super::canonical::wrap(space.antichain(x))).collect())
}
