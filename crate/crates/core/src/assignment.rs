//! Thin-box assignments and the double-counting statistics built on them.
//!
//! Every row and every column is associated with a distinct thin box lying
//! in it. A line holding a thin box that is not a singleton takes that box;
//! lines left with only singletons are matched to distinct singletons by
//! augmenting paths. The statistics `x_i`, `y_j`, `t_i` then satisfy two
//! exact double-counting identities, checked before they are returned.

use crate::partition::{validate_partition, Line, Partition, PartitionError, PiercingProfile};

/// Injective map from lines to thin boxes (by box id).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThinAssignment {
    pub row_assign: Vec<usize>,
    pub col_assign: Vec<usize>,
}

impl ThinAssignment {
    pub fn get(&self, line: Line) -> usize {
        match line {
            Line::Row(i) => self.row_assign[i],
            Line::Col(j) => self.col_assign[j],
        }
    }

    /// Number of distinct boxes used; equals `m + n` for a valid assignment.
    pub fn distinct_boxes(&self) -> usize {
        let mut ids: Vec<usize> = self
            .row_assign
            .iter()
            .chain(&self.col_assign)
            .copied()
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    }
}

pub fn thin_assignment(p: &Partition) -> Result<ThinAssignment, PartitionError> {
    validate_partition(p)?;
    let dims = p.dims();
    let lines: Vec<Line> = (0..dims.m)
        .map(Line::Row)
        .chain((0..dims.n).map(Line::Col))
        .collect();

    let mut assigned: Vec<Option<usize>> = vec![None; lines.len()];
    let mut owner: Vec<Option<usize>> = vec![None; p.len()];
    // Candidate singletons for lines that hold no larger thin box.
    let mut candidates: Vec<Vec<usize>> = vec![Vec::new(); lines.len()];

    for (li, &line) in lines.iter().enumerate() {
        let thin: Vec<usize> = p.thin_boxes_in(line).collect();
        if thin.is_empty() {
            return Err(PartitionError::NoThinBoxInLine { line });
        }
        let shapes = p.boxes();
        match thin.iter().find(|&&id| shapes[id].area() > 1) {
            Some(&id) => {
                assigned[li] = Some(id);
                owner[id] = Some(li);
            }
            None => candidates[li] = thin,
        }
    }

    // Kuhn's augmenting paths over the singleton candidates, in line order.
    fn augment(
        li: usize,
        candidates: &[Vec<usize>],
        assigned: &mut [Option<usize>],
        owner: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        for &id in &candidates[li] {
            if seen[id] {
                continue;
            }
            seen[id] = true;
            let free = match owner[id] {
                None => true,
                Some(other) => {
                    !candidates[other].is_empty()
                        && augment(other, candidates, assigned, owner, seen)
                }
            };
            if free {
                owner[id] = Some(li);
                assigned[li] = Some(id);
                return true;
            }
        }
        false
    }

    for li in 0..lines.len() {
        if assigned[li].is_some() {
            continue;
        }
        let mut seen = vec![false; p.len()];
        if !augment(li, &candidates, &mut assigned, &mut owner, &mut seen) {
            return Err(PartitionError::AssignmentConflict { line: lines[li] });
        }
    }

    let all: Vec<usize> = assigned.into_iter().map(|a| a.expect("every line matched")).collect();
    Ok(ThinAssignment {
        row_assign: all[..dims.m].to_vec(),
        col_assign: all[dims.m..].to_vec(),
    })
}

/// Per-line statistics relative to a thin assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiercingStats {
    /// `x[i]`: columns whose assigned box misses row `i`.
    pub x: Vec<usize>,
    /// `y[j]`: rows missed by the box assigned to column `j`.
    pub y: Vec<usize>,
    /// `t[i]`: fat boxes meeting row `i`.
    pub t: Vec<usize>,
}

fn check_assignment(p: &Partition, asg: &ThinAssignment) -> Result<(), PartitionError> {
    let dims = p.dims();
    if asg.row_assign.len() != dims.m {
        return Err(PartitionError::InvalidAssignment { line: Line::Row(dims.m) });
    }
    if asg.col_assign.len() != dims.n {
        return Err(PartitionError::InvalidAssignment { line: Line::Col(dims.n) });
    }
    let mut used = vec![false; p.len()];
    let lines = (0..dims.m).map(Line::Row).chain((0..dims.n).map(Line::Col));
    for line in lines {
        let id = asg.get(line);
        let ok = id < p.len()
            && !used[id]
            && match line {
                Line::Row(i) => {
                    p.boxes()[id].is_horizontally_thin() && p.boxes()[id].rows.contains(i)
                }
                Line::Col(j) => {
                    p.boxes()[id].is_vertically_thin() && p.boxes()[id].cols.contains(j)
                }
            };
        if !ok {
            return Err(PartitionError::InvalidAssignment { line });
        }
        used[id] = true;
    }
    Ok(())
}

/// Computes `x`, `y`, `t` and asserts `sum x = sum y` and
/// `sum t = sum of a_S over fat boxes`.
pub fn piercing_stats(p: &Partition, asg: &ThinAssignment) -> Result<PiercingStats, PartitionError> {
    check_assignment(p, asg)?;
    let dims = p.dims();
    let boxes = p.boxes();

    let x = (0..dims.m)
        .map(|i| {
            asg.col_assign
                .iter()
                .filter(|&&id| !boxes[id].rows.contains(i))
                .count()
        })
        .collect::<Vec<_>>();
    let y = asg
        .col_assign
        .iter()
        .map(|&id| dims.m - boxes[id].height())
        .collect::<Vec<_>>();
    let t = (0..dims.m)
        .map(|i| p.boxes_meeting(Line::Row(i)).filter(|&id| boxes[id].is_fat()).count())
        .collect::<Vec<_>>();

    let fat_heights: usize = boxes.iter().filter(|b| b.is_fat()).map(|b| b.height()).sum();
    assert_eq!(x.iter().sum::<usize>(), y.iter().sum::<usize>(), "sum x != sum y");
    assert_eq!(t.iter().sum::<usize>(), fat_heights, "sum t != fat heights");
    Ok(PiercingStats { x, y, t })
}

/// Lower bound on `y[j]` from the boxes crossing column `j`:
/// `(count_j - 1) + sum over S != R meeting j of (a_S - 1)`, where `R` is
/// the box assigned to `j`.
pub fn column_miss_bound(
    p: &Partition,
    asg: &ThinAssignment,
    profile: &PiercingProfile,
    j: usize,
) -> usize {
    let assigned = asg.col_assign[j];
    let extra: usize = p
        .boxes_meeting(Line::Col(j))
        .filter(|&id| id != assigned)
        .map(|id| p.boxes()[id].height() - 1)
        .sum();
    profile.col_counts[j] - 1 + extra
}

/// Boxes meeting row `i` that are neither its assigned box, fat, nor
/// assigned to some column.
pub fn unassigned_thin_in_row(p: &Partition, asg: &ThinAssignment, i: usize) -> usize {
    p.boxes_meeting(Line::Row(i))
        .filter(|&id| {
            id != asg.row_assign[i] && !p.boxes()[id].is_fat() && !asg.col_assign.contains(&id)
        })
        .count()
}

/// `n - (x_i + k - 1 - t_i)`; nonnegative whenever row `i` meets at least `k`
/// boxes and no unassigned thin boxes beyond its surplus.
pub fn row_width_slack(p: &Partition, stats: &PiercingStats, i: usize, k: usize) -> i64 {
    p.dims().n as i64 - (stats.x[i] as i64 + k as i64 - 1 - stats.t[i] as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{GridDims, SubBox};

    #[test]
    fn fat_single_box_has_no_thin_box() {
        let p = Partition::single_box(GridDims::new(2, 2).unwrap());
        assert_eq!(
            thin_assignment(&p),
            Err(PartitionError::NoThinBoxInLine { line: Line::Row(0) })
        );
    }

    #[test]
    fn singletons_are_matched() {
        let p = Partition::singletons(GridDims::new(2, 2).unwrap());
        let asg = thin_assignment(&p).unwrap();
        assert_eq!(asg.distinct_boxes(), 4);
        let stats = piercing_stats(&p, &asg).unwrap();
        assert_eq!(stats.t, vec![0, 0]);
    }

    #[test]
    fn too_few_thin_boxes_conflict() {
        // Row 0 is one thin box that is also the only thin box of column 0;
        // the remaining lines compete for the same singleton.
        let d = GridDims::new(2, 2).unwrap();
        let p = Partition::new(
            d,
            vec![
                SubBox::from_indices(d, [0], [0, 1]),
                SubBox::from_indices(d, [1], [0, 1]),
            ],
        )
        .unwrap();
        assert_eq!(
            thin_assignment(&p),
            Err(PartitionError::NoThinBoxInLine { line: Line::Col(0) })
        );

        let p = Partition::new(
            d,
            vec![
                SubBox::from_indices(d, [0, 1], [0]),
                SubBox::from_indices(d, [0], [1]),
                SubBox::from_indices(d, [1], [1]),
            ],
        )
        .unwrap();
        // Row 0 and row 1 each need their singleton, leaving column 1 empty-handed.
        assert_eq!(
            thin_assignment(&p),
            Err(PartitionError::AssignmentConflict { line: Line::Col(1) })
        );
    }

    #[test]
    fn rejects_foreign_assignment() {
        let p = Partition::singletons(GridDims::new(2, 2).unwrap());
        let bad = ThinAssignment {
            row_assign: vec![0, 0],
            col_assign: vec![2, 3],
        };
        assert!(matches!(
            piercing_stats(&p, &bad),
            Err(PartitionError::InvalidAssignment { .. })
        ));
    }
}
