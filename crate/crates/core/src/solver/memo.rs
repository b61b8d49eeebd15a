use std::collections::HashMap;

/// Bounded set of residual states already shown to be dead ends.
///
/// Two generations approximate LRU eviction: hits in the old generation are
/// promoted, and when the young generation fills up the old one is dropped.
pub(super) struct FailMemo {
    capacity: usize,
    young: HashMap<u64, Vec<Box<[u64]>>>,
    young_len: usize,
    old: HashMap<u64, Vec<Box<[u64]>>>,
}

impl FailMemo {
    pub(super) fn new(capacity: usize) -> Self {
        Self { capacity: capacity.max(2), young: HashMap::new(), young_len: 0, old: HashMap::new() }
    }

    pub(super) fn contains(&mut self, hash: u64, state: &[u64]) -> bool {
        if self.young.get(&hash).is_some_and(|b| b.iter().any(|s| **s == *state)) {
            return true;
        }
        let promoted = match self.old.get_mut(&hash) {
            Some(bucket) => bucket.iter().position(|s| **s == *state).map(|i| bucket.swap_remove(i)),
            None => None,
        };
        match promoted {
            Some(s) => {
                self.push(hash, s);
                true
            }
            None => false,
        }
    }

    pub(super) fn insert(&mut self, hash: u64, state: &[u64]) {
        self.push(hash, state.into());
    }

    fn push(&mut self, hash: u64, state: Box<[u64]>) {
        if self.young_len >= self.capacity / 2 {
            self.old = std::mem::take(&mut self.young);
            self.young_len = 0;
        }
        self.young.entry(hash).or_default().push(state);
        self.young_len += 1;
    }

    #[cfg(test)]
    fn len(&self) -> usize {
        self.young_len + self.old.values().map(Vec::len).sum::<usize>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn remembers_and_evicts() {
        let mut m = FailMemo::new(4);
        m.insert(1, &[1]);
        m.insert(1, &[2]);
        assert!(m.contains(1, &[1]));
        assert!(m.contains(1, &[2]));
        assert!(!m.contains(1, &[3]));
        m.insert(5, &[5]);
        m.insert(6, &[6]);
        m.insert(7, &[7]);
        assert!(m.len() <= 4);
        assert!(m.contains(7, &[7]));
        // same hash, different state: no false positives
        assert!(!m.contains(7, &[8]));
    }
}
