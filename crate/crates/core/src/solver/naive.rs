//! Reference Stanley depth by exhaustive search over every interval
//! partition. Exponential in the family size; only for tiny ground sets.

use thiserror::Error;

use crate::lattice::{Interval, IntervalPartition, SetFamily};

/// Largest ground set the naive oracle accepts.
pub const NAIVE_MAX_N: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("naive search is limited to n <= {NAIVE_MAX_N}, got n = {0}")]
pub struct TooLarge(pub usize);

/// Maximum over all interval partitions of the minimum top size.
pub fn naive_sdepth(family: &SetFamily) -> Result<usize, TooLarge> {
    naive_sdepth_with_witness(family).map(|(v, _)| v)
}

pub fn naive_sdepth_with_witness(family: &SetFamily) -> Result<(usize, IntervalPartition), TooLarge> {
    let n = family.n();
    if n > NAIVE_MAX_N {
        return Err(TooLarge(n));
    }
    let members: Vec<u32> = family.iter_bits().collect();
    if members.is_empty() {
        return Ok((n, IntervalPartition::new(n, Vec::new())));
    }
    // every interval of the family, as a mask over member indices
    let mut intervals: Vec<(u32, usize, u32, u32)> = Vec::new();
    for &lo in &members {
        for &hi in &members {
            if lo & !hi != 0 {
                continue;
            }
            let mask = members
                .iter()
                .enumerate()
                .filter(|(_, &s)| lo & !s == 0 && s & !hi == 0)
                .fold(0u32, |acc, (i, _)| acc | 1 << i);
            let expected = 1u32 << (hi.count_ones() - lo.count_ones());
            if mask.count_ones() == expected {
                intervals.push((mask, hi.count_ones() as usize, lo, hi));
            }
        }
    }
    let full = if members.len() == 32 { u32::MAX } else { (1u32 << members.len()) - 1 };
    let mut best: Vec<Option<(usize, usize)>> = vec![None; full as usize + 1];
    let value = solve(full, &intervals, &mut best);
    // follow the recorded choices to rebuild one optimal partition
    let mut parts = Vec::new();
    let mut state = full;
    while state != 0 {
        let (_, choice) = best[state as usize].expect("solved");
        let (mask, _, lo, hi) = intervals[choice];
        parts.push(Interval::from_bits_unchecked(lo, hi, n));
        state &= !mask;
    }
    Ok((value, IntervalPartition::new(n, parts)))
}

fn solve(state: u32, intervals: &[(u32, usize, u32, u32)], best: &mut [Option<(usize, usize)>]) -> usize {
    if state == 0 {
        return usize::MAX;
    }
    if let Some((v, _)) = best[state as usize] {
        return v;
    }
    let first = state & state.wrapping_neg();
    let mut top = (0, usize::MAX);
    for (i, &(mask, size, _, _)) in intervals.iter().enumerate() {
        if mask & first == 0 || mask & !state != 0 {
            continue;
        }
        let v = size.min(solve(state & !mask, intervals, best));
        if top.1 == usize::MAX || v > top.0 {
            top = (v, i);
        }
    }
    best[state as usize] = Some(top);
    top.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{validate_partition, VertexSet};

    #[test]
    fn small_cases() {
        assert_eq!(naive_sdepth(&SetFamily::full(3).unwrap()), Ok(3));
        assert_eq!(naive_sdepth(&SetFamily::nonempty_sets(3).unwrap()), Ok(2));
        assert_eq!(naive_sdepth(&SetFamily::nonempty_sets(4).unwrap()), Ok(2));
        assert_eq!(naive_sdepth(&SetFamily::full(5).unwrap()), Err(TooLarge(5)));
    }

    #[test]
    fn witness_is_valid() {
        let sets = [0b0011u32, 0b0101, 0b1000, 0b0001, 0b0010, 0b0100, 0].map(|b| VertexSet::new(b, 4).unwrap());
        let f = SetFamily::from_sets(4, sets).unwrap();
        let (v, p) = naive_sdepth_with_witness(&f).unwrap();
        assert_eq!(validate_partition(&p, &f), Ok(()));
        assert_eq!(p.sdepth(), Some(v));
    }
}
