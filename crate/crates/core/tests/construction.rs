use std::collections::BTreeSet;

use piercebox::construction::{thin_cover_indices, ConstructionParams};
use piercebox::{construct, piercing_stats, thin_assignment, upper_bound, validate_partition, Line, Partition};

/// `floor(i * sqrt(p / q))` by scanning, independent of the library's isqrt.
fn shift_scan(i: usize, p: usize, q: usize) -> usize {
    (0..).take_while(|&s: &usize| s * s * q <= i * i * p).last().unwrap()
}

#[test]
fn params_for_seven_four() {
    let c = ConstructionParams::new(7, 4).unwrap();
    assert_eq!((c.p, c.q, c.x, c.m, c.n), (6, 3, 5, 8, 11));
    assert!(!c.transposed);
    let shifts: Vec<_> = (0..8).map(|i| c.shift(i)).collect();
    assert_eq!(shifts, vec![0, 1, 2, 4, 5, 7, 8, 9]);
    assert_eq!(c.row_interval(0), vec![0, 1, 2, 3, 4]);
    assert_eq!(c.row_interval(5), vec![7, 8, 9, 10, 0]);
}

#[test]
fn params_invariants() {
    for k in 2..=60 {
        for l in 2..=60 {
            let c = ConstructionParams::new(k, l).unwrap();
            let pq = c.p * c.q;
            assert!(c.x * c.x >= pq && (c.x - 1) * (c.x - 1) < pq);
            assert!(c.p >= c.q);
            assert_eq!(c.transposed, l > k);
            assert_eq!((c.m + c.n) as u64, upper_bound(k, l).unwrap());
            for i in 0..c.m {
                assert_eq!(c.shift(i), shift_scan(i, c.p as usize, c.q as usize));
            }
        }
    }
}

#[test]
fn small_constructions() {
    let p = construct(2, 2).unwrap();
    assert_eq!((p.dims().m, p.dims().n, p.len()), (2, 2, 4));
    assert!(p.boxes().iter().all(|b| b.area() == 1));
    let pr = validate_partition(&p).unwrap();
    assert!(pr.row_counts.iter().chain(&pr.col_counts).all(|&c| c == 2));

    let p = construct(3, 3).unwrap();
    assert_eq!((p.dims().m, p.dims().n, p.len()), (4, 4, 8));
}

#[test]
fn seven_four_structure() {
    let p = construct(7, 4).unwrap();
    assert_eq!((p.dims().m, p.dims().n, p.len()), (8, 11, 19));
    let pr = validate_partition(&p).unwrap();
    assert!(pr.row_counts.iter().all(|&c| c == 7));
    assert!(pr.col_counts.iter().all(|&c| c >= 4));
    for i in 0..8 {
        assert_eq!(p.thin_boxes_in(Line::Row(i)).filter(|&b| p.boxes()[b].is_horizontally_thin()).count(), 1);
    }
    for j in 0..11 {
        assert_eq!(p.thin_boxes_in(Line::Col(j)).filter(|&b| p.boxes()[b].is_vertically_thin()).count(), 1);
    }
    // Row boxes come first, in row order.
    assert_eq!(p.boxes()[5].cols.to_vec(), vec![0, 7, 8, 9, 10]);
}

#[test]
fn thin_cover_matches_window_count() {
    let c = ConstructionParams::new(7, 4).unwrap();
    assert_eq!(thin_cover_indices(&c, 0), vec![0, 5, 6, 7]);
    assert!(thin_cover_indices(&c, 10).len() >= 3);
    for k in 2..=20 {
        for l in 2..=20 {
            let c = ConstructionParams::new(k, l).unwrap();
            let p = construct(k, l).unwrap();
            let pr = validate_partition(&p).unwrap();
            for j in 0..c.n {
                let cover = thin_cover_indices(&c, j);
                // Rows whose interval contains column j, by direct membership.
                let direct: Vec<usize> = (0..c.m).filter(|&i| c.row_interval(i).contains(&j)).collect();
                assert_eq!(cover, direct, "({k},{l}) column {j}");
                assert!(cover.len() as u64 >= c.q);
                if k == l {
                    assert_eq!(cover.len(), k - 1);
                }
                // The column meets its own vertical box plus every row box covering it.
                let counts = if c.transposed { &pr.row_counts } else { &pr.col_counts };
                assert_eq!(counts[j], cover.len() + 1);
            }
        }
    }
}

#[test]
fn perfect_square_ratios_are_exact() {
    for q in 1..=63 {
        for r in [1, 4, 9] {
            let k = r * q + 1;
            if k > 64 {
                continue;
            }
            let l = q + 1;
            let p = construct(k, l).unwrap();
            let pr = validate_partition(&p).unwrap();
            assert!(pr.col_counts.iter().all(|&c| c == l), "({k},{l})");
            assert!(ConstructionParams::new(k, l).unwrap().integral_ratio());
        }
    }
}

#[test]
fn assignment_and_stats_on_constructions() {
    for k in 2..=20 {
        for l in 2..=20 {
            let p = construct(k, l).unwrap();
            let asg = thin_assignment(&p).unwrap();
            let stats = piercing_stats(&p, &asg).unwrap();
            assert!(stats.t.iter().all(|&t| t == 0));
            assert_eq!(stats.x.iter().sum::<usize>(), stats.y.iter().sum::<usize>());
        }
    }
    let p = construct(2, 2).unwrap();
    let stats = piercing_stats(&p, &thin_assignment(&p).unwrap()).unwrap();
    assert_eq!((stats.x, stats.y), (vec![1, 1], vec![1, 1]));
}

fn box_set(p: &Partition) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
    p.canonical_boxes().into_iter().collect()
}

fn shifted(p: &Partition, dr: usize, dc: usize) -> BTreeSet<(Vec<usize>, Vec<usize>)> {
    let (m, n) = (p.dims().m, p.dims().n);
    p.canonical_boxes()
        .into_iter()
        .map(|(rows, cols)| {
            let mut r: Vec<usize> = rows.iter().map(|&i| (i + dr) % m).collect();
            let mut c: Vec<usize> = cols.iter().map(|&j| (j + dc) % n).collect();
            r.sort();
            c.sort();
            (r, c)
        })
        .collect()
}

#[test]
fn transposition_coherence() {
    for k in 2..=15 {
        for l in 2..=15 {
            let a = construct(k, l).unwrap();
            let b = construct(l, k).unwrap();
            if k != l {
                assert_eq!(box_set(&a), box_set(&b.transposed()), "({k},{l})");
            } else {
                // The square case is its own transpose only up to a cyclic
                // relabelling of rows and columns.
                let t = box_set(&a.transposed());
                let m = a.dims().m;
                let hit = (0..m).any(|dr| (0..m).any(|dc| shifted(&a, dr, dc) == t));
                assert!(hit, "({k},{k})");
            }
        }
    }
}
