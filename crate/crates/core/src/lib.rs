//! Partitions of two-dimensional discrete boxes `[m] x [n]` into
//! combinatorial rectangles, and the `(k, l)`-piercing property: every row
//! meets at least `k` boxes and every column at least `l`.
//!
//! The crate provides
//! - validation, normalisation and double-counting diagnostics ([`partition`],
//!   [`assignment`]),
//! - the optimal thin-box construction ([`construction`]),
//! - exact closed-form bounds ([`bounds`]),
//! - an exhaustive branch-and-bound search for the true minimum at small
//!   scale ([`search`]),
//! - the reduction to red/blue edge-coloured graphs ([`graph`]),
//! - file formats and pictures ([`format`], [`render`]).
//!
//! Parallel work goes through rayon when the `parallel` feature is enabled
//! (default) and falls back to sequential loops otherwise.

pub mod assignment;
pub mod bitset;
pub mod bounds;
pub mod construction;
pub mod format;
pub mod graph;
mod intmath;
pub mod parallel;
pub mod partition;
pub mod render;
pub mod search;

pub use assignment::{piercing_stats, thin_assignment, PiercingStats, ThinAssignment};
pub use bitset::LineSet;
pub use bounds::{
    bounds_table, geometric_bound, lower_bound, refined_lower_bound, upper_bound, BoundsRow,
};
pub use construction::{construct, thin_cover_indices, ConstructionParams};
pub use format::{parse_partition, serialize_partition};
pub use graph::{box_to_graph, corollary_check, verify_clique_condition, ColoredGraph};
pub use intmath::ceil_sqrt;
pub use parallel::Workers;
pub use partition::{
    classify_boxes, delete_col, delete_row, normalize_singletons, random_partition,
    validate_partition, BoxShape, GridDims, Line, Partition, PartitionError, PiercingProfile,
    SubBox,
};
pub use render::{render_ascii, render_svg, RenderSpec};
pub use search::{
    exists_partition, search_min_partition, verify_theorem, SearchConfig, SearchResult,
    SearchStatus,
};
