//! Independent reference implementations shared by the integration tests.
//! Nothing here calls into the search engine.

#![allow(dead_code)]

use std::collections::BTreeSet;

/// Every way to cover an `m x n` grid exactly by at most `max_blocks`
/// combinatorial rectangles, summarised as `(blocks, min row count, min
/// column count)`.
///
/// Cells get block labels as a restricted growth string in row-major order;
/// a labelling is kept when each block equals the product of its row and
/// column projections.
pub fn naive_profiles(m: usize, n: usize, max_blocks: usize) -> BTreeSet<(usize, usize, usize)> {
    let cells = m * n;
    let mut labels = vec![0usize; cells];
    let mut out = BTreeSet::new();
    fn rec(
        pos: usize,
        used: usize,
        m: usize,
        n: usize,
        max_blocks: usize,
        labels: &mut [usize],
        out: &mut BTreeSet<(usize, usize, usize)>,
    ) {
        if pos == m * n {
            let mut rows = vec![0u32; used];
            let mut cols = vec![0u32; used];
            let mut size = vec![0u32; used];
            for (c, &b) in labels.iter().enumerate() {
                rows[b] |= 1 << (c / n);
                cols[b] |= 1 << (c % n);
                size[b] += 1;
            }
            let rect = (0..used).all(|b| rows[b].count_ones() * cols[b].count_ones() == size[b]);
            if !rect {
                return;
            }
            let rmin = (0..m)
                .map(|r| rows.iter().filter(|&&mask| mask >> r & 1 == 1).count())
                .min()
                .unwrap();
            let cmin = (0..n)
                .map(|c| cols.iter().filter(|&&mask| mask >> c & 1 == 1).count())
                .min()
                .unwrap();
            out.insert((used, rmin, cmin));
            return;
        }
        let top = (used + 1).min(max_blocks);
        for b in 0..top {
            labels[pos] = b;
            rec(pos + 1, used.max(b + 1), m, n, max_blocks, labels, out);
        }
    }
    rec(0, 0, m, n, max_blocks, &mut labels, &mut out);
    out
}

/// Whether the profiles admit a partition into at most `budget` boxes with
/// every row meeting `k` boxes and every column `l`.
pub fn naive_exists(profiles: &BTreeSet<(usize, usize, usize)>, k: usize, l: usize, budget: usize) -> bool {
    profiles
        .iter()
        .any(|&(b, r, c)| b <= budget && r >= k && c >= l)
}

/// `ceil(sqrt(v))` by linear scan.
pub fn ceil_sqrt_scan(v: u64) -> u64 {
    (0..).find(|s: &u64| s * s >= v).unwrap()
}

/// Largest clique through `v` among `vertices`, by subset enumeration.
pub fn brute_clique(adj: &dyn Fn(usize, usize) -> bool, vertices: usize, v: usize) -> usize {
    assert!(vertices <= 20);
    (0u32..1 << vertices)
        .filter(|s| s >> v & 1 == 1)
        .filter(|s| {
            (0..vertices).all(|a| {
                (a + 1..vertices).all(|b| s >> a & 1 == 0 || s >> b & 1 == 0 || adj(a, b))
            })
        })
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap()
}
