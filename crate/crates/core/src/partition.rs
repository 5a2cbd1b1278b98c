//! Discrete boxes, sub-boxes, partitions and their piercing profiles.
//!
//! Rows and columns are 0-based throughout. A [`Partition`] only guarantees
//! the structural invariants of its boxes (nonempty, in bounds); the exact
//! cover property is checked by [`validate_partition`].

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bitset::LineSet;

/// A row or a column of the grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Line {
    Row(usize),
    Col(usize),
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::Row(i) => write!(f, "row {i}"),
            Line::Col(j) => write!(f, "column {j}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("grid dimensions must be positive, got {m}x{n}")]
    EmptyGrid { m: usize, n: usize },
    #[error("box {box_id} has an empty row or column set")]
    EmptyBox { box_id: usize },
    #[error("box {box_id} does not fit the {m}x{n} grid")]
    OutOfBounds { box_id: usize, m: usize, n: usize },
    #[error("cell ({row}, {col}) is not covered by any box")]
    CellUncovered { row: usize, col: usize },
    #[error("cell ({row}, {col}) is covered by boxes {boxes:?}")]
    CellDoubleCovered {
        row: usize,
        col: usize,
        boxes: Vec<usize>,
    },
    #[error("cannot delete the last row")]
    LastRow,
    #[error("cannot delete the last column")]
    LastColumn,
    #[error("{line} is out of range")]
    LineOutOfRange { line: Line },
    #[error("{line} contains fewer than two thin boxes of its orientation")]
    NothingToNormalize { line: Line },
    #[error("{line} contains no thin box")]
    NoThinBoxInLine { line: Line },
    #[error("no injective thin assignment covers {line}")]
    AssignmentConflict { line: Line },
    #[error("assignment is inconsistent with the partition at {line}")]
    InvalidAssignment { line: Line },
}

/// Grid dimensions: `m` rows by `n` columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GridDims {
    pub m: usize,
    pub n: usize,
}

impl GridDims {
    pub fn new(m: usize, n: usize) -> Result<Self, PartitionError> {
        if m == 0 || n == 0 {
            return Err(PartitionError::EmptyGrid { m, n });
        }
        Ok(GridDims { m, n })
    }

    pub fn cells(&self) -> usize {
        self.m * self.n
    }

    pub fn transposed(&self) -> GridDims {
        GridDims {
            m: self.n,
            n: self.m,
        }
    }
}

/// Shape of a sub-box relative to the two axes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoxShape {
    /// Exactly one row, several columns.
    HorizontallyThin,
    /// Exactly one column, several rows.
    VerticallyThin,
    Singleton,
    /// At least two rows and at least two columns.
    Fat,
}

/// A combinatorial rectangle: a set of rows times a set of columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubBox {
    pub rows: LineSet,
    pub cols: LineSet,
}

impl SubBox {
    pub fn new(rows: LineSet, cols: LineSet) -> Self {
        SubBox { rows, cols }
    }

    pub fn from_indices<R, C>(dims: GridDims, rows: R, cols: C) -> Self
    where
        R: IntoIterator<Item = usize>,
        C: IntoIterator<Item = usize>,
    {
        SubBox {
            rows: LineSet::from_indices(dims.m, rows),
            cols: LineSet::from_indices(dims.n, cols),
        }
    }

    /// Number of rows, `a_S`.
    pub fn height(&self) -> usize {
        self.rows.count()
    }

    /// Number of columns, `b_S`.
    pub fn width(&self) -> usize {
        self.cols.count()
    }

    pub fn area(&self) -> usize {
        self.height() * self.width()
    }

    pub fn shape(&self) -> BoxShape {
        match (self.height(), self.width()) {
            (1, 1) => BoxShape::Singleton,
            (1, _) => BoxShape::HorizontallyThin,
            (_, 1) => BoxShape::VerticallyThin,
            _ => BoxShape::Fat,
        }
    }

    /// Contained in a single row (singletons included).
    pub fn is_horizontally_thin(&self) -> bool {
        self.height() == 1
    }

    /// Contained in a single column (singletons included).
    pub fn is_vertically_thin(&self) -> bool {
        self.width() == 1
    }

    pub fn is_fat(&self) -> bool {
        self.shape() == BoxShape::Fat
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.rows.contains(row) && self.cols.contains(col)
    }

    pub fn meets(&self, line: Line) -> bool {
        match line {
            Line::Row(i) => self.rows.contains(i),
            Line::Col(j) => self.cols.contains(j),
        }
    }

    pub fn transposed(&self) -> SubBox {
        SubBox {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
        }
    }
}

/// A family of sub-boxes of an `m x n` grid, in a fixed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    dims: GridDims,
    boxes: Vec<SubBox>,
}

impl Partition {
    /// Checks box structure only; call [`validate_partition`] for the exact cover.
    pub fn new(dims: GridDims, boxes: Vec<SubBox>) -> Result<Self, PartitionError> {
        GridDims::new(dims.m, dims.n)?;
        for (box_id, b) in boxes.iter().enumerate() {
            if b.rows.universe() != dims.m || b.cols.universe() != dims.n {
                return Err(PartitionError::OutOfBounds {
                    box_id,
                    m: dims.m,
                    n: dims.n,
                });
            }
            if b.rows.is_empty() || b.cols.is_empty() {
                return Err(PartitionError::EmptyBox { box_id });
            }
        }
        Ok(Partition { dims, boxes })
    }

    /// The partition of a grid into a single box.
    pub fn single_box(dims: GridDims) -> Self {
        Partition {
            dims,
            boxes: vec![SubBox::new(LineSet::full(dims.m), LineSet::full(dims.n))],
        }
    }

    /// The partition of a grid into `m * n` singleton cells, row-major.
    pub fn singletons(dims: GridDims) -> Self {
        let boxes = (0..dims.m)
            .flat_map(|r| (0..dims.n).map(move |c| SubBox::from_indices(dims, [r], [c])))
            .collect();
        Partition { dims, boxes }
    }

    pub fn dims(&self) -> GridDims {
        self.dims
    }

    pub fn boxes(&self) -> &[SubBox] {
        &self.boxes
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn into_boxes(self) -> Vec<SubBox> {
        self.boxes
    }

    /// Swaps the roles of rows and columns.
    pub fn transposed(&self) -> Partition {
        Partition {
            dims: self.dims.transposed(),
            boxes: self.boxes.iter().map(SubBox::transposed).collect(),
        }
    }

    /// Ids of boxes meeting the given line, in box order.
    pub fn boxes_meeting(&self, line: Line) -> impl Iterator<Item = usize> + '_ {
        self.boxes
            .iter()
            .enumerate()
            .filter(move |(_, b)| b.meets(line))
            .map(|(id, _)| id)
    }

    /// Ids of thin boxes contained in the given line (horizontally thin for a
    /// row, vertically thin for a column).
    pub fn thin_boxes_in(&self, line: Line) -> impl Iterator<Item = usize> + '_ {
        self.boxes
            .iter()
            .enumerate()
            .filter(move |(_, b)| match line {
                Line::Row(i) => b.is_horizontally_thin() && b.rows.contains(i),
                Line::Col(j) => b.is_vertically_thin() && b.cols.contains(j),
            })
            .map(|(id, _)| id)
    }

    /// Boxes as sorted canonical index lists, for order-insensitive comparison.
    pub fn canonical_boxes(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let mut v: Vec<_> = self
            .boxes
            .iter()
            .map(|b| (b.rows.to_vec(), b.cols.to_vec()))
            .collect();
        v.sort();
        v
    }
}

/// Per-line counts of intersected boxes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiercingProfile {
    pub row_counts: Vec<usize>,
    pub col_counts: Vec<usize>,
}

impl PiercingProfile {
    pub fn k_min(&self) -> usize {
        self.row_counts.iter().copied().min().unwrap_or(0)
    }

    pub fn l_min(&self) -> usize {
        self.col_counts.iter().copied().min().unwrap_or(0)
    }

    /// Every row meets at least `k` boxes and every column at least `l`.
    pub fn has_piercing(&self, k: usize, l: usize) -> bool {
        self.k_min() >= k && self.l_min() >= l
    }

    pub fn count(&self, line: Line) -> usize {
        match line {
            Line::Row(i) => self.row_counts[i],
            Line::Col(j) => self.col_counts[j],
        }
    }
}

/// Checks that every cell lies in exactly one box and returns the piercing
/// profile. The first offending cell in row-major order is reported.
pub fn validate_partition(p: &Partition) -> Result<PiercingProfile, PartitionError> {
    let GridDims { m, n } = p.dims;
    let mut cover: Vec<Vec<usize>> = vec![Vec::new(); m * n];
    for (id, b) in p.boxes.iter().enumerate() {
        for r in b.rows.iter() {
            for c in b.cols.iter() {
                cover[r * n + c].push(id);
            }
        }
    }
    for (cell, ids) in cover.into_iter().enumerate() {
        let (row, col) = (cell / n, cell % n);
        match ids.len() {
            1 => {}
            0 => return Err(PartitionError::CellUncovered { row, col }),
            _ => return Err(PartitionError::CellDoubleCovered { row, col, boxes: ids }),
        }
    }
    Ok(piercing_profile(p))
}

/// Counts, without validation, how many boxes meet each line.
pub fn piercing_profile(p: &Partition) -> PiercingProfile {
    let mut row_counts = vec![0; p.dims.m];
    let mut col_counts = vec![0; p.dims.n];
    for b in &p.boxes {
        b.rows.iter().for_each(|r| row_counts[r] += 1);
        b.cols.iter().for_each(|c| col_counts[c] += 1);
    }
    PiercingProfile {
        row_counts,
        col_counts,
    }
}

pub fn classify_boxes(p: &Partition) -> Vec<BoxShape> {
    p.boxes.iter().map(SubBox::shape).collect()
}

/// Removes row `a` from the grid. Boxes left without rows are dropped and
/// the remaining row indices are compacted.
pub fn delete_row(p: &Partition, a: usize) -> Result<Partition, PartitionError> {
    if p.dims.m == 1 {
        return Err(PartitionError::LastRow);
    }
    if a >= p.dims.m {
        return Err(PartitionError::LineOutOfRange { line: Line::Row(a) });
    }
    let dims = GridDims {
        m: p.dims.m - 1,
        n: p.dims.n,
    };
    let boxes = p
        .boxes
        .iter()
        .map(|b| SubBox::new(b.rows.delete_index(a), b.cols.clone()))
        .filter(|b| !b.rows.is_empty())
        .collect();
    Ok(Partition { dims, boxes })
}

/// Column counterpart of [`delete_row`].
pub fn delete_col(p: &Partition, b: usize) -> Result<Partition, PartitionError> {
    if p.dims.n == 1 {
        return Err(PartitionError::LastColumn);
    }
    if b >= p.dims.n {
        return Err(PartitionError::LineOutOfRange { line: Line::Col(b) });
    }
    Ok(delete_row(&p.transposed(), b)?.transposed())
}

/// Rewrites the thin boxes of one line so that all but the first become
/// singletons.
///
/// For each thin box after the first, its largest index is kept as a
/// singleton and the rest of its cells move into the first thin box. Box
/// count, exact cover and every per-line count are preserved.
pub fn normalize_singletons(p: &Partition, line: Line) -> Result<Partition, PartitionError> {
    let in_range = match line {
        Line::Row(i) => i < p.dims.m,
        Line::Col(j) => j < p.dims.n,
    };
    if !in_range {
        return Err(PartitionError::LineOutOfRange { line });
    }
    let thin: Vec<usize> = p.thin_boxes_in(line).collect();
    if thin.len() < 2 {
        return Err(PartitionError::NothingToNormalize { line });
    }
    // Work on the "long" axis of the line: columns for a row, rows for a column.
    let long = |b: &SubBox| -> LineSet {
        match line {
            Line::Row(_) => b.cols.clone(),
            Line::Col(_) => b.rows.clone(),
        }
    };
    let rebuild = |b: &SubBox, set: LineSet| -> SubBox {
        match line {
            Line::Row(_) => SubBox::new(b.rows.clone(), set),
            Line::Col(_) => SubBox::new(set, b.cols.clone()),
        }
    };

    let mut boxes = p.boxes.clone();
    let mut main = long(&boxes[thin[0]]);
    for &id in &thin[1..] {
        let set = long(&boxes[id]);
        let keep = set.last().expect("boxes are nonempty");
        for x in set.iter().filter(|&x| x != keep) {
            main.insert(x);
        }
        let single = LineSet::from_indices(set.universe(), [keep]);
        boxes[id] = rebuild(&boxes[id], single);
    }
    boxes[thin[0]] = rebuild(&boxes[thin[0]], main);
    Ok(Partition {
        dims: p.dims,
        boxes,
    })
}

/// Seeded random partition: starts from all singleton cells and performs up
/// to `merge_steps` merges of two boxes sharing their row set or their column
/// set, chosen uniformly among all mergeable pairs.
pub fn random_partition(dims: GridDims, seed: u64, merge_steps: usize) -> Partition {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut boxes = Partition::singletons(dims).boxes;
    for _ in 0..merge_steps {
        let mut pairs = Vec::new();
        for i in 0..boxes.len() {
            for j in i + 1..boxes.len() {
                if boxes[i].rows == boxes[j].rows || boxes[i].cols == boxes[j].cols {
                    pairs.push((i, j));
                }
            }
        }
        let Some(&(i, j)) = pairs.choose(&mut rng) else {
            break;
        };
        let other = boxes.remove(j);
        boxes[i].rows.union_with(&other.rows);
        boxes[i].cols.union_with(&other.cols);
    }
    Partition { dims, boxes }
}

/// Like [`random_partition`] with a random merge budget in `0..=max_merges`.
pub fn random_partition_any(dims: GridDims, seed: u64, max_merges: usize) -> Partition {
    let steps = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15).gen_range(0..=max_merges);
    random_partition(dims, seed, steps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(m: usize, n: usize) -> GridDims {
        GridDims::new(m, n).unwrap()
    }

    #[test]
    fn single_box_profile() {
        let p = Partition::single_box(dims(3, 5));
        let prof = validate_partition(&p).unwrap();
        assert_eq!(prof.row_counts, vec![1; 3]);
        assert_eq!(prof.col_counts, vec![1; 5]);
        assert_eq!((prof.k_min(), prof.l_min()), (1, 1));
    }

    #[test]
    fn missing_cell_reported() {
        let d = dims(2, 2);
        let p = Partition::new(
            d,
            vec![
                SubBox::from_indices(d, [0], [0, 1]),
                SubBox::from_indices(d, [1], [0]),
            ],
        )
        .unwrap();
        assert_eq!(
            validate_partition(&p),
            Err(PartitionError::CellUncovered { row: 1, col: 1 })
        );
    }

    #[test]
    fn double_cover_reports_first_cell_and_boxes() {
        let d = dims(2, 3);
        let p = Partition::new(
            d,
            vec![
                SubBox::from_indices(d, [0, 1], [0, 1, 2]),
                SubBox::from_indices(d, [1], [1, 2]),
            ],
        )
        .unwrap();
        assert_eq!(
            validate_partition(&p),
            Err(PartitionError::CellDoubleCovered {
                row: 1,
                col: 1,
                boxes: vec![0, 1]
            })
        );
    }

    #[test]
    fn structural_errors() {
        let d = dims(2, 2);
        let empty = SubBox::new(LineSet::new(2), LineSet::full(2));
        assert_eq!(
            Partition::new(d, vec![empty]),
            Err(PartitionError::EmptyBox { box_id: 0 })
        );
        let wrong = SubBox::from_indices(dims(3, 2), [2], [0]);
        assert!(matches!(
            Partition::new(d, vec![wrong]),
            Err(PartitionError::OutOfBounds { box_id: 0, .. })
        ));
        assert!(GridDims::new(0, 3).is_err());
    }

    #[test]
    fn classification() {
        let d = dims(3, 3);
        assert_eq!(SubBox::from_indices(d, [0], [0]).shape(), BoxShape::Singleton);
        assert_eq!(
            SubBox::from_indices(d, [0], [0, 1, 2]).shape(),
            BoxShape::HorizontallyThin
        );
        assert_eq!(
            SubBox::from_indices(d, [0, 2], [1]).shape(),
            BoxShape::VerticallyThin
        );
        assert_eq!(SubBox::from_indices(d, [0, 1], [0, 1]).shape(), BoxShape::Fat);
    }

    #[test]
    fn delete_row_drops_thin_box() {
        let d = dims(3, 2);
        let p = Partition::new(
            d,
            vec![
                SubBox::from_indices(d, [0, 2], [0]),
                SubBox::from_indices(d, [1], [0, 1]),
                SubBox::from_indices(d, [0], [1]),
                SubBox::from_indices(d, [2], [1]),
            ],
        )
        .unwrap();
        let q = delete_row(&p, 1).unwrap();
        assert_eq!(q.len(), 3);
        assert_eq!(q.dims(), dims(2, 2));
        validate_partition(&q).unwrap();
        assert_eq!(q.boxes()[0].rows.to_vec(), vec![0, 1]);
    }

    #[test]
    fn delete_last_line_errors() {
        let p = Partition::single_box(dims(1, 3));
        assert_eq!(delete_row(&p, 0), Err(PartitionError::LastRow));
        let p = Partition::single_box(dims(3, 1));
        assert_eq!(delete_col(&p, 0), Err(PartitionError::LastColumn));
    }

    #[test]
    fn normalize_keeps_largest_index_as_singleton() {
        let d = dims(2, 4);
        let p = Partition::new(
            d,
            vec![
                SubBox::from_indices(d, [0], [0, 1]),
                SubBox::from_indices(d, [0], [2, 3]),
                SubBox::from_indices(d, [1], [0, 1, 2, 3]),
            ],
        )
        .unwrap();
        let before = validate_partition(&p).unwrap();
        let q = normalize_singletons(&p, Line::Row(0)).unwrap();
        assert_eq!(q.boxes()[0].cols.to_vec(), vec![0, 1, 2]);
        assert_eq!(q.boxes()[1].cols.to_vec(), vec![3]);
        assert_eq!(q.len(), p.len());
        assert_eq!(validate_partition(&q).unwrap(), before);
    }

    #[test]
    fn normalize_needs_two_thin_boxes() {
        let d = dims(2, 2);
        let p = Partition::new(
            d,
            vec![
                SubBox::from_indices(d, [0], [0, 1]),
                SubBox::from_indices(d, [1], [0, 1]),
            ],
        )
        .unwrap();
        assert_eq!(
            normalize_singletons(&p, Line::Row(0)),
            Err(PartitionError::NothingToNormalize { line: Line::Row(0) })
        );
    }

    #[test]
    fn random_partition_zero_merges_is_all_singletons() {
        let p = random_partition(dims(3, 4), 7, 0);
        assert_eq!(p.len(), 12);
        assert!(classify_boxes(&p).iter().all(|&s| s == BoxShape::Singleton));
    }

    #[test]
    fn random_partition_counts_merges() {
        for seed in 0..20 {
            let p = random_partition(dims(3, 3), seed, 4);
            validate_partition(&p).unwrap();
            assert_eq!(p.len(), 9 - 4);
            assert_eq!(p, random_partition(dims(3, 3), seed, 4));
        }
        // Merging stops once a single box remains.
        assert_eq!(random_partition(dims(2, 2), 1, 100).len(), 1);
    }
}
