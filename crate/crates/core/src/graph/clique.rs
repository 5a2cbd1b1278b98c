//! Exact maximum clique through a given vertex: Bron-Kerbosch with Tomita
//! pivoting over bitsets, pruned by the size of the best clique so far.

#[derive(Clone, Debug)]
struct Bits {
    words: Vec<u64>,
}

impl Bits {
    fn new(len: usize) -> Self {
        Bits {
            words: vec![0; len.div_ceil(64)],
        }
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    fn and_not(&self, other: &Bits) -> Bits {
        Bits {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & !b).collect(),
        }
    }

    fn and_count(&self, other: &Bits) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn clear(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Adjacency {
    rows: Vec<Bits>,
}

impl Adjacency {
    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(n: usize, edges: I) -> Self {
        let mut rows = vec![Bits::new(n); n];
        for (u, v) in edges {
            rows[u].set(v);
            rows[v].set(u);
        }
        Adjacency { rows }
    }

    /// Size of the largest clique containing `v`.
    pub fn max_clique_containing(&self, v: usize) -> usize {
        let cand = self.rows[v].clone();
        let mut best = 1;
        self.expand(1, cand, Bits::new(self.rows.len()), &mut best);
        best
    }

    fn expand(&self, size: usize, mut cand: Bits, mut excl: Bits, best: &mut usize) {
        *best = (*best).max(size);
        if cand.is_empty() {
            return;
        }
        if size + cand.count() <= *best {
            return;
        }
        let pivot = cand
            .iter()
            .chain(excl.iter())
            .max_by_key(|&u| (cand.and_count(&self.rows[u]), std::cmp::Reverse(u)))
            .expect("candidates are nonempty");
        let branch: Vec<usize> = cand.and_not(&self.rows[pivot]).iter().collect();
        for u in branch {
            self.expand(size + 1, cand.and(&self.rows[u]), excl.and(&self.rows[u]), best);
            cand.clear(u);
            excl.set(u);
            if size + cand.count() <= *best {
                return;
            }
        }
    }
}
