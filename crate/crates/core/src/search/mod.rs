//! Exact minimum box counts for `(k, l)`-piercing partitions at small scale.
//!
//! [`exists_partition`] decides a single grid and budget. [`search_min_partition`]
//! raises the budget one box at a time and, for each budget, tries every
//! admissible grid. A budget is refuted only once all admissible grids are
//! refuted.
//!
//! Grid dimensions are bounded safely: a row holding no horizontally thin
//! box can be deleted without losing a box or any piercing, and likewise for
//! columns. Hence if some partition with at most `N` boxes exists, one exists
//! in which every row has a horizontally thin box and every column a
//! vertically thin box, so `m <= N` and `n <= N`. The cross-grid search uses
//! that restriction as pruning; [`exists_partition`] does not.
//!
//! Work is split into tasks at the top of the search tree. Tasks may run in
//! parallel, but the reported witness is always the one from the earliest
//! task in depth-first order, and node counts only include tasks up to it,
//! so results do not depend on the worker count.

mod engine;

use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::bitset::LineSet;
use crate::bounds::{lower_bound, upper_bound, BoundsError};
use crate::construction::{construct, ConstructionError};
use crate::parallel::{map_ordered, Workers};
use crate::partition::{validate_partition, GridDims, Partition, SubBox};
use engine::{split_tasks, Flow, Placement, Problem, Searcher, Shared};
use std::sync::atomic::Ordering;

/// Depth at which the search tree is cut into independent tasks.
const SPLIT_DEPTH: usize = 2;

/// Largest grid side and budget the engine supports.
pub const MAX_SIDE: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("piercing targets must be at least 2, got k={k}, l={l}")]
    InvalidParams { k: usize, l: usize },
    #[error("grid {m}x{n} with budget {budget} exceeds the engine limit of {MAX_SIDE}")]
    TooLarge { m: usize, n: usize, budget: usize },
    #[error("time limit exceeded before the search finished")]
    TimedOut,
}

impl From<BoundsError> for SearchError {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::InvalidParams { k, l } => SearchError::InvalidParams { k, l },
            BoundsError::InvalidCap => unreachable!("search never asks for refined bounds"),
        }
    }
}

/// Where the budget sweep starts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StartBound {
    /// `k + l - 1`: a row and a column share at most one box. Every budget
    /// below the optimum is refuted by the search itself.
    Trivial,
    /// The closed-form lower bound; budgets below it are taken as refuted.
    LowerBound,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub k: usize,
    pub l: usize,
    /// Largest budget tried; defaults to the construction size.
    pub max_boxes: Option<usize>,
    /// Cap on both grid sides; defaults to the budget.
    pub max_dim: Option<usize>,
    pub symmetry_breaking: bool,
    /// Heuristic: allow at most one thin box per column (per row when
    /// `l > k`). Results found with it are never reported as optimal.
    pub single_thin_heuristic: bool,
    pub workers: Workers,
    pub time_limit: Option<Duration>,
    pub start: StartBound,
}

impl SearchConfig {
    pub fn new(k: usize, l: usize) -> Self {
        SearchConfig {
            k,
            l,
            max_boxes: None,
            max_dim: None,
            symmetry_breaking: true,
            single_thin_heuristic: false,
            workers: Workers::default(),
            time_limit: Some(Duration::from_secs(600)),
            start: StartBound::Trivial,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    OptimumProven,
    FeasibleFound,
    InfeasibleWithinCaps,
    TimedOut,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DimsVerdict {
    Refuted,
    Found,
    /// Not decided: an earlier grid produced the witness, or time ran out.
    Open,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimsOutcome {
    pub budget: usize,
    pub m: usize,
    pub n: usize,
    pub verdict: DimsVerdict,
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub k: usize,
    pub l: usize,
    pub status: SearchStatus,
    pub best_count: Option<usize>,
    pub witness: Option<Partition>,
    pub nodes_explored: u64,
    pub start: StartBound,
    pub start_budget: usize,
    pub dims_tried: Vec<DimsOutcome>,
}

impl SearchResult {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("result serializes");
        s.push('\n');
        s
    }
}

#[derive(Clone, Copy, Debug)]
struct Flags {
    thin_lines: bool,
    single_thin: bool,
    symmetry: bool,
}

struct BudgetRun {
    /// `(grid index, placements)` of the earliest witness.
    witness: Option<(usize, Vec<Placement>)>,
    verdicts: Vec<(DimsVerdict, u64)>,
    timed_out: bool,
}

fn run_budget(
    k: usize,
    l: usize,
    budget: usize,
    grids: &[GridDims],
    flags: Flags,
    workers: Workers,
    deadline: Option<Instant>,
) -> BudgetRun {
    let problems: Vec<Problem> = grids
        .iter()
        .map(|d| Problem {
            m: d.m,
            n: d.n,
            k: k as u32,
            l: l as u32,
            budget,
            thin_lines: flags.thin_lines,
            single_thin: flags.single_thin,
            symmetry: flags.symmetry,
        })
        .collect();

    let mut split_nodes = Vec::with_capacity(grids.len());
    let mut tasks: Vec<(usize, Vec<Placement>)> = Vec::new();
    for (gi, prob) in problems.iter().enumerate() {
        let (prefixes, nodes) = split_tasks(*prob, SPLIT_DEPTH);
        split_nodes.push(nodes);
        tasks.extend(prefixes.into_iter().map(|pre| (gi, pre)));
    }

    let shared = Shared::new(deadline);
    let indexed: Vec<usize> = (0..tasks.len()).collect();
    let results = map_ordered(&indexed, workers, |&ti| {
        if shared.winner.load(Ordering::Relaxed) < ti || shared.timed_out.load(Ordering::Relaxed) {
            return (Flow::Aborted, 0, None);
        }
        let (gi, prefix) = &tasks[ti];
        let mut s = Searcher::new(problems[*gi], prefix, &shared, ti);
        let flow = s.run();
        let witness = if flow == Flow::Found {
            shared.winner.fetch_min(ti, Ordering::Relaxed);
            Some(s.state.boxes.clone())
        } else {
            None
        };
        (flow, s.nodes, witness)
    });

    let timed_out = shared.timed_out.load(Ordering::Relaxed);
    let winner = results.iter().position(|(f, _, _)| *f == Flow::Found);
    let win_grid = winner.map(|ti| tasks[ti].0);
    let mut verdicts: Vec<(DimsVerdict, u64)> = split_nodes
        .iter()
        .enumerate()
        .map(|(gi, &nodes)| match win_grid {
            Some(wg) if gi > wg => (DimsVerdict::Open, 0),
            _ => (DimsVerdict::Refuted, nodes),
        })
        .collect();
    let last = winner.unwrap_or(tasks.len().saturating_sub(1));
    for (ti, (flow, nodes, _)) in results.iter().enumerate().take(last + 1) {
        let gi = tasks[ti].0;
        verdicts[gi].1 += nodes;
        if *flow == Flow::Aborted {
            verdicts[gi].0 = DimsVerdict::Open;
        }
    }
    if let Some(wg) = win_grid {
        verdicts[wg].0 = DimsVerdict::Found;
    }
    if timed_out && winner.is_none() {
        for v in verdicts.iter_mut() {
            v.0 = DimsVerdict::Open;
        }
    }
    BudgetRun {
        witness: winner.map(|ti| (tasks[ti].0, results[ti].2.clone().expect("winner has witness"))),
        verdicts,
        timed_out: timed_out && winner.is_none(),
    }
}

fn to_partition(dims: GridDims, placements: &[Placement]) -> Partition {
    let set = |mask: u64, len: usize| LineSet::from_indices(len, (0..len).filter(|&i| mask >> i & 1 == 1));
    let boxes = placements
        .iter()
        .map(|&(r, c)| SubBox::new(set(r, dims.m), set(c, dims.n)))
        .collect();
    Partition::new(dims, boxes).expect("search produces well-formed boxes")
}

/// Options for a single-grid decision.
#[derive(Clone, Debug)]
pub struct ExistsConfig {
    pub symmetry_breaking: bool,
    pub workers: Workers,
    pub time_limit: Option<Duration>,
}

impl Default for ExistsConfig {
    fn default() -> Self {
        ExistsConfig {
            symmetry_breaking: true,
            workers: Workers::default(),
            time_limit: None,
        }
    }
}

/// A partition of the `m x n` grid into at most `budget` boxes in which every
/// row meets at least `k` boxes and every column at least `l`, or `None`.
///
/// The witness is the first one in the search's depth-first order and does
/// not depend on the worker count.
pub fn exists_partition(
    m: usize,
    n: usize,
    k: usize,
    l: usize,
    budget: usize,
) -> Result<Option<Partition>, SearchError> {
    exists_partition_with(m, n, k, l, budget, &ExistsConfig::default())
}

pub fn exists_partition_with(
    m: usize,
    n: usize,
    k: usize,
    l: usize,
    budget: usize,
    cfg: &ExistsConfig,
) -> Result<Option<Partition>, SearchError> {
    let dims = GridDims::new(m, n).map_err(|_| SearchError::TooLarge { m, n, budget })?;
    let budget = budget.min(m * n);
    if m > MAX_SIDE || n > MAX_SIDE || budget > MAX_SIDE {
        return Err(SearchError::TooLarge { m, n, budget });
    }
    if budget == 0 {
        return Ok(None);
    }
    let flags = Flags {
        thin_lines: false,
        single_thin: false,
        symmetry: cfg.symmetry_breaking,
    };
    let deadline = cfg.time_limit.map(|t| Instant::now() + t);
    let run = run_budget(k, l, budget, &[dims], flags, cfg.workers, deadline);
    if run.timed_out {
        return Err(SearchError::TimedOut);
    }
    Ok(run.witness.map(|(_, pl)| to_partition(dims, &pl)))
}

/// Grids tried for one budget: `l <= m`, `k <= n`, both at most the budget
/// and the cap, ordered by `m + n` then `m`. For `k = l` only `m <= n`.
fn admissible_grids(k: usize, l: usize, budget: usize, max_dim: usize) -> Vec<GridDims> {
    let side = budget.min(max_dim).min(MAX_SIDE);
    let mut grids: Vec<GridDims> = (l..=side)
        .flat_map(|m| (k..=side).map(move |n| GridDims { m, n }))
        .filter(|d| k != l || d.m <= d.n)
        .collect();
    grids.sort_by_key(|d| (d.m + d.n, d.m));
    grids
}

/// Smallest box count of a `(k, l)`-piercing partition over all grids.
pub fn search_min_partition(cfg: &SearchConfig) -> Result<SearchResult, SearchError> {
    let (k, l) = (cfg.k, cfg.l);
    let lower = lower_bound(k, l)? as usize;
    let upper = upper_bound(k, l)? as usize;
    let start_budget = match cfg.start {
        StartBound::Trivial => k + l - 1,
        StartBound::LowerBound => lower,
    };
    let end = cfg.max_boxes.unwrap_or(upper).min(MAX_SIDE);
    let max_dim = cfg.max_dim.unwrap_or(usize::MAX);
    let flags = Flags {
        thin_lines: true,
        single_thin: cfg.single_thin_heuristic,
        symmetry: cfg.symmetry_breaking,
    };
    let deadline = cfg.time_limit.map(|t| Instant::now() + t);

    let mut result = SearchResult {
        k,
        l,
        status: SearchStatus::InfeasibleWithinCaps,
        best_count: None,
        witness: None,
        nodes_explored: 0,
        start: cfg.start,
        start_budget,
        dims_tried: Vec::new(),
    };
    let mut exhaustive = !cfg.single_thin_heuristic;

    for budget in start_budget..=end {
        let grids = admissible_grids(k, l, budget, max_dim);
        let run = run_budget(k, l, budget, &grids, flags, cfg.workers, deadline);
        for (d, (verdict, nodes)) in grids.iter().zip(&run.verdicts) {
            result.nodes_explored += nodes;
            result.dims_tried.push(DimsOutcome {
                budget,
                m: d.m,
                n: d.n,
                verdict: *verdict,
                nodes: *nodes,
            });
        }
        if run.timed_out {
            result.status = SearchStatus::TimedOut;
            return Ok(result);
        }
        if let Some((gi, placements)) = run.witness {
            let witness = to_partition(grids[gi], &placements);
            result.best_count = Some(witness.len());
            result.witness = Some(witness);
            result.status = if exhaustive {
                SearchStatus::OptimumProven
            } else {
                SearchStatus::FeasibleFound
            };
            return Ok(result);
        }
        if max_dim < budget.min(MAX_SIDE) {
            exhaustive = false;
        }
    }
    Ok(result)
}

/// Options for [`verify_theorem`].
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// The exhaustive search only runs when the construction has at most
    /// this many boxes.
    pub search_max_boxes: usize,
    pub workers: Workers,
    pub time_limit: Option<Duration>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            search_max_boxes: 8,
            workers: Workers::default(),
            time_limit: Some(Duration::from_secs(600)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum SearchClause {
    Skipped {
        reason: String,
    },
    Ran {
        status: SearchStatus,
        best_count: Option<usize>,
        nodes_explored: u64,
        meets_lower_bound: bool,
        matches_construction: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub k: usize,
    pub l: usize,
    pub lower_bound: usize,
    pub upper_bound: usize,
    pub construction_boxes: usize,
    pub construction_valid: bool,
    pub construction_pierces: bool,
    pub construction_matches_upper: bool,
    pub search: SearchClause,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// Checks both halves of the bound for one `(k, l)`: the construction is a
/// valid piercing partition of the stated size, and (when small enough) the
/// exhaustive optimum is at least the lower bound.
pub fn verify_theorem(k: usize, l: usize, opts: &VerifyOptions) -> Result<TheoremReport, VerifyError> {
    let p = construct(k, l)?;
    let lower = lower_bound(k, l).map_err(SearchError::from)? as usize;
    let upper = upper_bound(k, l).map_err(SearchError::from)? as usize;
    let profile = validate_partition(&p).ok();
    let construction_valid = profile.is_some();
    let construction_pierces = profile.is_some_and(|pr| pr.has_piercing(k, l));
    let construction_matches_upper = p.len() == upper;

    let search = if upper > opts.search_max_boxes {
        SearchClause::Skipped {
            reason: format!(
                "construction has {upper} boxes, above the search limit of {}",
                opts.search_max_boxes
            ),
        }
    } else {
        let mut cfg = SearchConfig::new(k, l);
        cfg.workers = opts.workers;
        cfg.time_limit = opts.time_limit;
        let r = search_min_partition(&cfg)?;
        SearchClause::Ran {
            status: r.status,
            best_count: r.best_count,
            nodes_explored: r.nodes_explored,
            meets_lower_bound: r.best_count.is_some_and(|b| b >= lower),
            matches_construction: r.best_count == Some(p.len()),
        }
    };
    let search_ok = match &search {
        SearchClause::Skipped { .. } => true,
        SearchClause::Ran {
            status,
            best_count,
            meets_lower_bound,
            ..
        } => {
            *status == SearchStatus::OptimumProven
                && *meets_lower_bound
                && best_count.is_some_and(|b| b <= p.len())
        }
    };
    Ok(TheoremReport {
        k,
        l,
        lower_bound: lower,
        upper_bound: upper,
        construction_boxes: p.len(),
        construction_valid,
        construction_pierces,
        construction_matches_upper,
        pass: construction_valid && construction_pierces && construction_matches_upper && search_ok,
        search,
    })
}
