use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::hash::{Hash, Hasher};

const SHARDS: usize = 64;

/// Fixed-width little-endian encoding, 8 bytes per entry. Injective for a
/// fixed dimension, which is all dedup needs.
pub fn encode(entries: &[i64]) -> Box<[u8]> {
    entries.iter().flat_map(|x| x.to_le_bytes()).collect()
}

pub fn decode(bytes: &[u8]) -> Vec<i64> {
    bytes.chunks_exact(8).map(|c| i64::from_le_bytes(c.try_into().expect("8 bytes"))).collect()
}

/// Set of encoded matrices split by a hash of the first row, so shards can
/// be filled and merged independently.
#[derive(Clone, Debug)]
pub struct ShardedSet {
    row_bytes: usize,
    shards: Vec<HashSet<Box<[u8]>>>,
}

impl ShardedSet {
    pub fn new(n: usize) -> Self {
        ShardedSet { row_bytes: 8 * n, shards: vec![HashSet::new(); SHARDS] }
    }

    fn shard_of(&self, key: &[u8]) -> usize {
        let mut h = DefaultHasher::new();
        key[..self.row_bytes.min(key.len())].hash(&mut h);
        (h.finish() % SHARDS as u64) as usize
    }

    pub fn insert(&mut self, entries: &[i64]) -> bool {
        let key = encode(entries);
        let s = self.shard_of(&key);
        self.shards[s].insert(key)
    }

    pub fn contains(&self, entries: &[i64]) -> bool {
        let key = encode(entries);
        self.shards[self.shard_of(&key)].contains(&key)
    }

    pub fn len(&self) -> usize {
        self.shards.iter().map(HashSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Shard-wise union.
    pub fn merge(mut self, other: ShardedSet) -> ShardedSet {
        for (mine, theirs) in self.shards.iter_mut().zip(other.shards) {
            if mine.len() < theirs.len() {
                let small = std::mem::replace(mine, theirs);
                mine.extend(small);
            } else {
                mine.extend(theirs);
            }
        }
        self
    }

    pub fn intersection_len(&self, other: &ShardedSet) -> usize {
        self.shards.iter().zip(&other.shards).map(|(a, b)| a.intersection(b).count()).sum()
    }

    pub fn is_subset(&self, other: &ShardedSet) -> bool {
        self.shards.iter().zip(&other.shards).all(|(a, b)| a.is_subset(b))
    }

    /// Decoded entries in sorted order.
    pub fn sorted(&self) -> Vec<Vec<i64>> {
        let mut all: Vec<Vec<i64>> = self.shards.iter().flatten().map(|k| decode(k)).collect();
        all.sort();
        all
    }
}

impl PartialEq for ShardedSet {
    fn eq(&self, other: &Self) -> bool {
        self.row_bytes == other.row_bytes && self.shards == other.shards
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encoding_roundtrip_and_dedup() {
        let m = [-1i64, 4, 0, 0, -1, 2, 0, 0, 1];
        assert_eq!(decode(&encode(&m)), m.to_vec());
        let mut s = ShardedSet::new(3);
        assert!(s.insert(&m));
        assert!(!s.insert(&m));
        assert!(s.contains(&m));
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn merge_is_union_regardless_of_split() {
        let items: Vec<[i64; 4]> = (0..200).map(|i| [i % 7, i % 5, i % 3, i % 11]).collect();
        let mut whole = ShardedSet::new(2);
        for it in &items {
            whole.insert(it);
        }
        let (mut left, mut right) = (ShardedSet::new(2), ShardedSet::new(2));
        for (i, it) in items.iter().enumerate() {
            if i % 3 == 0 { left.insert(it) } else { right.insert(it) };
        }
        let merged = left.merge(right);
        assert_eq!(merged, whole);
        assert!(whole.is_subset(&merged));
        assert_eq!(whole.intersection_len(&merged), whole.len());
    }
}
