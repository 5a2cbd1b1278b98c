mod common;

use piercebox::bounds::{
    bounds_table_with, default_cap, refined_lower_bound, table_to_csv, BoundsError, CSV_HEADER,
};
use piercebox::search::{search_min_partition, SearchConfig, SearchStatus};
use piercebox::{bounds_table, construct, geometric_bound, lower_bound, upper_bound, Workers};

/// Refined bound by direct scan over `1 <= m, n <= cap`.
fn refined_scan(k: usize, l: usize, cap: usize) -> u64 {
    let (p, q) = (k - 1, l - 1);
    let best = (1..=cap)
        .flat_map(|m| (1..=cap).map(move |n| (n * q).div_ceil(m) + (m * p).div_ceil(n)))
        .min()
        .unwrap();
    (p + q + best) as u64
}

#[test]
fn closed_form_examples() {
    assert_eq!(lower_bound(2, 2).unwrap(), 4);
    assert_eq!(lower_bound(5, 5).unwrap(), 16);
    assert_eq!(lower_bound(7, 4).unwrap(), 18);
    assert_eq!(upper_bound(7, 4).unwrap(), 19);
    assert_eq!(upper_bound(2, 2).unwrap(), 4);
    assert_eq!((lower_bound(3, 2).unwrap(), upper_bound(3, 2).unwrap()), (6, 7));
    assert_eq!(geometric_bound(3, 3).unwrap(), 8);
    assert_eq!(geometric_bound(3, 2).unwrap(), 6);
    assert_eq!(geometric_bound(2, 2).unwrap(), 4);
    for k in 2..50 {
        assert_eq!(lower_bound(k, k).unwrap(), 4 * k as u64 - 4);
    }
}

#[test]
fn refined_examples() {
    assert_eq!(refined_lower_bound(3, 3, 20).unwrap(), 8);
    assert_eq!(refined_lower_bound(3, 2, 20).unwrap(), 6);
    assert_eq!(refined_lower_bound(2, 2, 20).unwrap(), 4);
    for k in 2..=12 {
        for l in 2..=12 {
            for cap in [1, 2, 5, 20] {
                assert_eq!(refined_lower_bound(k, l, cap).unwrap(), refined_scan(k, l, cap));
            }
            let mut prev = u64::MAX;
            for cap in 1..=30 {
                let r = refined_lower_bound(k, l, cap).unwrap();
                assert!(r <= prev);
                prev = r;
            }
        }
    }
}

#[test]
fn invalid_inputs() {
    assert_eq!(lower_bound(1, 3), Err(BoundsError::InvalidParams { k: 1, l: 3 }));
    assert!(upper_bound(3, 0).is_err());
    assert!(geometric_bound(0, 2).is_err());
    assert_eq!(refined_lower_bound(3, 3, 0), Err(BoundsError::InvalidCap));
}

#[test]
fn upper_bound_is_construction_size() {
    for k in 2..=40 {
        for l in 2..=40 {
            assert_eq!(construct(k, l).unwrap().len() as u64, upper_bound(k, l).unwrap());
        }
    }
}

#[test]
fn table_examples() {
    let t = bounds_table(2..=4, 2..=4, None).unwrap();
    assert_eq!(t.len(), 9);
    assert!(t[0].coincide() && (t[0].k, t[0].l) == (2, 2));
    let r32 = t.iter().find(|r| (r.k, r.l) == (3, 2)).unwrap();
    assert_eq!(r32.gap, 1);
    let diag = bounds_table(2..=40, 2..=40, None).unwrap();
    assert!(diag.iter().filter(|r| r.k == r.l).all(|r| r.coincide()));
    assert!(diag.iter().all(|r| r.refined >= r.lower && r.upper - r.lower <= 1));
}

#[test]
fn csv_is_stable() {
    let t = bounds_table(2..=3, 2..=2, None).unwrap();
    let csv = table_to_csv(&t);
    assert_eq!(
        csv,
        format!("{CSV_HEADER}\n2,2,4,4,4,0,true\n3,2,6,6,7,1,false\n")
    );
    let seq = bounds_table_with(2..=30, 2..=30, None, Workers::SEQUENTIAL).unwrap();
    let par = bounds_table_with(2..=30, 2..=30, None, Workers(4)).unwrap();
    assert_eq!(table_to_csv(&seq), table_to_csv(&par));
}

/// Exhaustive minima never undercut either lower bound.
#[test]
fn search_minima_respect_both_lower_bounds() {
    for (k, l) in [(2, 2), (3, 2), (3, 3), (4, 2), (4, 3), (5, 2)] {
        let r = search_min_partition(&SearchConfig::new(k, l)).unwrap();
        assert_eq!(r.status, SearchStatus::OptimumProven);
        let best = r.best_count.unwrap() as u64;
        assert!(best >= lower_bound(k, l).unwrap());
        assert!(best >= refined_lower_bound(k, l, default_cap(k, l)).unwrap());
    }
}

#[test]
fn lower_bound_matches_scan_oracle() {
    for k in 2..=200usize {
        for l in 2..=200usize {
            let (p, q) = ((k - 1) as u64, (l - 1) as u64);
            assert_eq!(lower_bound(k, l).unwrap(), p + q + common::ceil_sqrt_scan(4 * p * q));
        }
    }
}
