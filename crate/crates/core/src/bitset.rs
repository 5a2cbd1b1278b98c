//! Dense bit-vector sets over a fixed universe `0..len`.

use std::fmt;

const WORD: usize = 64;

/// A set of line indices (rows or columns) stored as a dense bit-vector.
///
/// Two sets compare equal only when they share the same universe size.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LineSet {
    len: usize,
    words: Vec<u64>,
}

impl LineSet {
    pub fn new(len: usize) -> Self {
        LineSet {
            len,
            words: vec![0; len.div_ceil(WORD)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::new(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    /// Builds a set from indices; panics if any index is outside the universe.
    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Self {
        let mut s = Self::new(len);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Universe size.
    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "index {i} outside universe of size {}", self.len);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    pub fn remove(&mut self, i: usize) {
        if i < self.len {
            self.words[i / WORD] &= !(1 << (i % WORD));
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersects(&self, other: &LineSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .any(|(a, b)| a & b != 0)
    }

    pub fn is_disjoint(&self, other: &LineSet) -> bool {
        !self.intersects(other)
    }

    pub fn union_with(&mut self, other: &LineSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn last(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(wi, &w)| wi * WORD + (WORD - 1 - w.leading_zeros() as usize))
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + bit)
            })
        })
    }

    /// Removes index `i` and shifts every larger index down by one,
    /// shrinking the universe by one.
    pub fn delete_index(&self, i: usize) -> LineSet {
        LineSet::from_indices(
            self.len - 1,
            self.iter()
                .filter(|&x| x != i)
                .map(|x| if x > i { x - 1 } else { x }),
        )
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for LineSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_iter_and_bounds() {
        let s = LineSet::from_indices(130, [0, 63, 64, 129]);
        assert_eq!(s.to_vec(), vec![0, 63, 64, 129]);
        assert_eq!(s.count(), 4);
        assert_eq!(s.first(), Some(0));
        assert_eq!(s.last(), Some(129));
        assert!(!s.contains(130));
    }

    #[test]
    fn delete_index_compacts() {
        let s = LineSet::from_indices(5, [0, 2, 4]);
        assert_eq!(s.delete_index(2).to_vec(), vec![0, 3]);
        assert_eq!(s.delete_index(1).to_vec(), vec![0, 1, 3]);
        assert_eq!(s.delete_index(1).universe(), 4);
    }

    #[test]
    fn disjointness() {
        let a = LineSet::from_indices(70, [1, 65]);
        let b = LineSet::from_indices(70, [2, 66]);
        let c = LineSet::from_indices(70, [65]);
        assert!(a.is_disjoint(&b));
        assert!(a.intersects(&c));
        assert_eq!(LineSet::new(3).last(), None);
    }
}
