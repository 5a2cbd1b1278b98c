//! Red/blue edge-coloured graphs obtained from box partitions.
//!
//! Each box becomes a vertex. Two boxes sharing a row are joined by a red
//! edge, two boxes sharing a column by a blue edge. In a partition no pair
//! shares both (two cells `(r, c1)`, `(r2, c)` with `r` and `c` common would
//! put `(r, c)` in both boxes), so the colour classes are disjoint. The boxes
//! met by one row form a red clique, those met by one column a blue clique,
//! so `(k, l)`-piercing makes every vertex part of a red `k`-clique and a
//! blue `l`-clique.

mod clique;
mod io;

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::bounds::lower_bound;
use crate::parallel::{map_ordered, Workers};
use crate::partition::{validate_partition, Partition, PartitionError};
use clique::Adjacency;

pub use io::{parse_graph, to_dot, to_json, GraphFormatError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Color {
    Red,
    Blue,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge ({0}, {1}) references a missing vertex")]
    MissingVertex(usize, usize),
    #[error("edge ({0}, {1}) is both red and blue")]
    BothColors(usize, usize),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("clique condition fails for k={k}, l={l} at vertices {failing:?}")]
    PreconditionFailed {
        k: usize,
        l: usize,
        failing: Vec<usize>,
    },
    #[error("piercing targets must be at least 2, got k={k}, l={l}")]
    InvalidParams { k: usize, l: usize },
}

/// Simple graph with two disjoint edge classes. Edges are stored as ordered
/// pairs `(u, v)` with `u < v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    vertex_count: usize,
    red: BTreeSet<(usize, usize)>,
    blue: BTreeSet<(usize, usize)>,
}

fn normalize(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

impl ColoredGraph {
    pub fn new<R, B>(vertex_count: usize, red: R, blue: B) -> Result<Self, GraphError>
    where
        R: IntoIterator<Item = (usize, usize)>,
        B: IntoIterator<Item = (usize, usize)>,
    {
        let mut sets = [BTreeSet::new(), BTreeSet::new()];
        for (set, edges) in sets
            .iter_mut()
            .zip([red.into_iter().collect::<Vec<_>>(), blue.into_iter().collect()])
        {
            for (u, v) in edges {
                if u == v {
                    return Err(GraphError::SelfLoop(u));
                }
                if u >= vertex_count || v >= vertex_count {
                    return Err(GraphError::MissingVertex(u, v));
                }
                set.insert(normalize(u, v));
            }
        }
        let [red, blue] = sets;
        if let Some(&(u, v)) = red.intersection(&blue).next() {
            return Err(GraphError::BothColors(u, v));
        }
        Ok(ColoredGraph {
            vertex_count,
            red,
            blue,
        })
    }

    pub fn empty(vertex_count: usize) -> Self {
        ColoredGraph {
            vertex_count,
            red: BTreeSet::new(),
            blue: BTreeSet::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self, color: Color) -> &BTreeSet<(usize, usize)> {
        match color {
            Color::Red => &self.red,
            Color::Blue => &self.blue,
        }
    }

    pub fn has_edge(&self, color: Color, u: usize, v: usize) -> bool {
        self.edges(color).contains(&normalize(u, v))
    }

    fn adjacency(&self, color: Color) -> Adjacency {
        Adjacency::from_edges(self.vertex_count, self.edges(color).iter().copied())
    }
}

/// One vertex per box; red for a shared row, blue for a shared column.
pub fn box_to_graph(p: &Partition) -> Result<ColoredGraph, GraphError> {
    validate_partition(p)?;
    let boxes = p.boxes();
    let mut red = Vec::new();
    let mut blue = Vec::new();
    for u in 0..boxes.len() {
        for v in u + 1..boxes.len() {
            if boxes[u].rows.intersects(&boxes[v].rows) {
                red.push((u, v));
            }
            if boxes[u].cols.intersects(&boxes[v].cols) {
                blue.push((u, v));
            }
        }
    }
    ColoredGraph::new(boxes.len(), red, blue)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexCliques {
    pub vertex: usize,
    /// Size of the largest red clique containing the vertex.
    pub red: usize,
    pub blue: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliqueReport {
    pub k: usize,
    pub l: usize,
    pub pass: bool,
    pub failing: Vec<usize>,
    pub vertices: Vec<VertexCliques>,
}

/// Decides, per vertex, whether it lies in a red clique of size `k` and a
/// blue clique of size `l`, reporting the largest of each.
pub fn verify_clique_condition(g: &ColoredGraph, k: usize, l: usize) -> CliqueReport {
    verify_clique_condition_with(g, k, l, Workers::default())
}

pub fn verify_clique_condition_with(
    g: &ColoredGraph,
    k: usize,
    l: usize,
    workers: Workers,
) -> CliqueReport {
    let red = g.adjacency(Color::Red);
    let blue = g.adjacency(Color::Blue);
    let ids: Vec<usize> = (0..g.vertex_count).collect();
    let vertices = map_ordered(&ids, workers, |&v| {
        let r = red.max_clique_containing(v);
        let b = blue.max_clique_containing(v);
        VertexCliques {
            vertex: v,
            red: r,
            blue: b,
            ok: r >= k && b >= l,
        }
    });
    let failing: Vec<usize> = vertices.iter().filter(|v| !v.ok).map(|v| v.vertex).collect();
    CliqueReport {
        k,
        l,
        pass: failing.is_empty(),
        failing,
        vertices,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryReport {
    pub k: usize,
    pub l: usize,
    pub vertex_count: usize,
    pub lower_bound: usize,
    pub slack: i64,
    pub holds: bool,
}

/// For a graph meeting the clique condition, compares its order with the
/// lower bound on `(k, l)`-piercing partitions.
pub fn corollary_check(g: &ColoredGraph, k: usize, l: usize) -> Result<CorollaryReport, GraphError> {
    let bound = lower_bound(k, l).map_err(|_| GraphError::InvalidParams { k, l })? as usize;
    let report = verify_clique_condition(g, k, l);
    if !report.pass {
        return Err(GraphError::PreconditionFailed {
            k,
            l,
            failing: report.failing,
        });
    }
    let slack = g.vertex_count as i64 - bound as i64;
    Ok(CorollaryReport {
        k,
        l,
        vertex_count: g.vertex_count,
        lower_bound: bound,
        slack,
        holds: slack >= 0,
    })
}
