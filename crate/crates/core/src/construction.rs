//! Thin-box constructions meeting the upper bound for every `k, l >= 2`.
//!
//! With `p >= q` the larger and smaller of `k - 1, l - 1`, set
//! `x = ceil(sqrt(p q))`, `m = q + x` rows and `n = p + x` columns. Row `i`
//! holds the horizontally thin box `{i} x B_i`, where `B_i` is the cyclic
//! interval of length `x` starting at `floor(i * sqrt(p / q))` modulo `n`.
//! Column `j` holds the vertically thin box made of the rows whose interval
//! misses `j`. All arithmetic is exact; `sqrt(p / q)` is never formed.

use thiserror::Error;

use crate::bitset::LineSet;
use crate::intmath::{ceil_sqrt, is_square};
use crate::partition::{GridDims, Partition, SubBox};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("piercing targets must be at least 2, got k={k}, l={l}")]
    InvalidParams { k: usize, l: usize },
}

/// Parameters of the construction, normalised so that `p >= q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstructionParams {
    pub k: usize,
    pub l: usize,
    pub p: u64,
    pub q: u64,
    pub x: u64,
    /// Rows of the untransposed grid, `q + x`.
    pub m: usize,
    /// Columns of the untransposed grid, `p + x`.
    pub n: usize,
    /// Set when `l > k`; the output grid is then `n x m`.
    pub transposed: bool,
}

impl ConstructionParams {
    pub fn new(k: usize, l: usize) -> Result<Self, ConstructionError> {
        if k < 2 || l < 2 {
            return Err(ConstructionError::InvalidParams { k, l });
        }
        let transposed = l > k;
        let (big, small) = if transposed { (l, k) } else { (k, l) };
        let p = big as u64 - 1;
        let q = small as u64 - 1;
        let x = ceil_sqrt(p * q);
        Ok(ConstructionParams {
            k,
            l,
            p,
            q,
            x,
            m: (q + x) as usize,
            n: (p + x) as usize,
            transposed,
        })
    }

    /// `floor(i * sqrt(p / q))`, computed as `isqrt(floor(i^2 p / q))`.
    pub fn shift(&self, i: usize) -> usize {
        let i = i as u64;
        (i * i * self.p / self.q).isqrt() as usize
    }

    /// Whether `sqrt(p / q)` is an integer, i.e. `p / q` is a perfect square.
    pub fn integral_ratio(&self) -> bool {
        self.p.is_multiple_of(self.q) && is_square(self.p / self.q)
    }

    /// Columns of the horizontally thin box of row `i`, in cyclic order.
    pub fn row_interval(&self, i: usize) -> Vec<usize> {
        let start = self.shift(i);
        (0..self.x as usize).map(|s| (start + s) % self.n).collect()
    }

    /// Total box count `m + n`.
    pub fn box_count(&self) -> usize {
        self.m + self.n
    }
}

/// Rows `i` whose interval start `floor(i * alpha)` falls in the cyclic
/// window `{j, j-1, ..., j-x+1} mod n`; these are exactly the rows whose
/// horizontal box crosses column `j` (of the untransposed grid).
pub fn thin_cover_indices(params: &ConstructionParams, j: usize) -> Vec<usize> {
    assert!(j < params.n, "column {j} out of range");
    let n = params.n;
    let x = params.x as usize;
    // Offset of `s` behind `j` going backwards around the cycle.
    let behind = |s: usize| (j + n - s % n) % n;
    (0..params.m).filter(|&i| behind(params.shift(i)) < x).collect()
}

fn build(params: &ConstructionParams) -> Partition {
    let dims = GridDims {
        m: params.m,
        n: params.n,
    };
    let mut covered = vec![LineSet::new(params.n); params.m];
    let mut boxes = Vec::with_capacity(params.box_count());
    for (i, row_cov) in covered.iter_mut().enumerate() {
        let cols = LineSet::from_indices(params.n, params.row_interval(i));
        row_cov.union_with(&cols);
        boxes.push(SubBox::new(LineSet::from_indices(params.m, [i]), cols));
    }
    for j in 0..params.n {
        let rows = LineSet::from_indices(params.m, (0..params.m).filter(|&i| !covered[i].contains(j)));
        assert!(!rows.is_empty(), "column {j} fully covered by row intervals");
        boxes.push(SubBox::new(rows, LineSet::from_indices(params.n, [j])));
    }
    Partition::new(dims, boxes).expect("construction boxes are well formed")
}

/// Builds the `(k, l)`-piercing partition with
/// `(k-1) + (l-1) + 2 ceil(sqrt((k-1)(l-1)))` thin boxes.
///
/// Boxes are ordered: all horizontal boxes by row, then all vertical boxes by
/// column (of the untransposed grid). When `l > k` the grid is built for
/// `(l, k)` and transposed, so the exact-`k` guarantee moves to the columns.
pub fn construct(k: usize, l: usize) -> Result<Partition, ConstructionError> {
    let params = ConstructionParams::new(k, l)?;
    let p = build(&params);
    Ok(if params.transposed { p.transposed() } else { p })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::validate_partition;

    #[test]
    fn rejects_small_params() {
        assert_eq!(
            construct(1, 3),
            Err(ConstructionError::InvalidParams { k: 1, l: 3 })
        );
        assert!(construct(2, 1).is_err());
    }

    #[test]
    fn params_seven_four() {
        let c = ConstructionParams::new(7, 4).unwrap();
        assert_eq!((c.p, c.q, c.x, c.m, c.n), (6, 3, 5, 8, 11));
        assert!(!c.transposed);
        assert!(!c.integral_ratio());
        let shifts: Vec<_> = (0..8).map(|i| c.shift(i)).collect();
        // floor(i * sqrt 2)
        assert_eq!(shifts, vec![0, 1, 2, 4, 5, 7, 8, 9]);
        assert_eq!(c.row_interval(0), vec![0, 1, 2, 3, 4]);
        assert_eq!(c.row_interval(5), vec![7, 8, 9, 10, 0]);
    }

    #[test]
    fn two_two_is_four_singletons() {
        let p = construct(2, 2).unwrap();
        assert_eq!(p.dims(), GridDims { m: 2, n: 2 });
        assert!(p.boxes().iter().all(|b| b.area() == 1));
        let prof = validate_partition(&p).unwrap();
        assert_eq!(prof.row_counts, vec![2, 2]);
        assert_eq!(prof.col_counts, vec![2, 2]);
    }

    #[test]
    fn three_three_has_eight_boxes() {
        let p = construct(3, 3).unwrap();
        assert_eq!(p.dims(), GridDims { m: 4, n: 4 });
        assert_eq!(p.len(), 8);
        assert!(validate_partition(&p).unwrap().has_piercing(3, 3));
    }

    #[test]
    fn cover_indices_column_zero() {
        // floor(i sqrt 2) for i < 8 is 0,1,2,4,5,7,8,9; with x = 5 and n = 11
        // the window behind column 0 is {0, 10, 9, 8, 7}.
        let c = ConstructionParams::new(7, 4).unwrap();
        assert_eq!(thin_cover_indices(&c, 0), vec![0, 5, 6, 7]);
        assert!(thin_cover_indices(&c, 10).len() >= 3);
    }

    #[test]
    fn transposed_when_l_exceeds_k() {
        let p = construct(4, 7).unwrap();
        assert_eq!(p.dims(), GridDims { m: 11, n: 8 });
        let prof = validate_partition(&p).unwrap();
        assert!(prof.has_piercing(4, 7));
        assert!(prof.col_counts.iter().all(|&c| c == 7));
    }
}
