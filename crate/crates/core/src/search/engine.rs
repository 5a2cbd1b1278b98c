//! Depth-first exact-cover search over combinatorial rectangles on a fixed
//! grid of at most 64 x 64 cells.
//!
//! The search always branches on the least uncovered cell in row-major
//! order, so every partition is reached by exactly one path. Rows (columns)
//! that belong to exactly the same placed boxes are interchangeable; with
//! symmetry breaking on, a new box may only take a prefix of each such class.

use std::cmp::Reverse;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::time::Instant;

/// A placed box: row mask and column mask.
pub(crate) type Placement = (u64, u64);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Problem {
    pub m: usize,
    pub n: usize,
    pub k: u32,
    pub l: u32,
    pub budget: usize,
    /// Every row must contain a horizontally thin box and every column a
    /// vertically thin one.
    pub thin_lines: bool,
    /// Heuristic: at most one thin box per column (rows when `l > k`).
    pub single_thin: bool,
    pub symmetry: bool,
}

/// Cancellation and time-limit state shared by all tasks of one run.
pub(crate) struct Shared {
    pub deadline: Option<Instant>,
    pub timed_out: AtomicBool,
    /// Smallest task index that has produced a witness.
    pub winner: AtomicUsize,
}

impl Shared {
    pub fn new(deadline: Option<Instant>) -> Self {
        Shared {
            deadline,
            timed_out: AtomicBool::new(false),
            winner: AtomicUsize::new(usize::MAX),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Flow {
    Found,
    Exhausted,
    Aborted,
}

fn bits(mut w: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if w == 0 {
            return None;
        }
        let b = w.trailing_zeros() as usize;
        w &= w - 1;
        Some(b)
    })
}

#[derive(Clone)]
pub(crate) struct State {
    prob: Problem,
    full_cols: u64,
    /// Uncovered columns per row.
    uncov: Vec<u64>,
    /// Uncovered rows per column.
    ucol: Vec<u64>,
    row_cnt: Vec<u32>,
    col_cnt: Vec<u32>,
    /// Membership of each line in the placed boxes, one bit per box.
    row_sig: Vec<u64>,
    col_sig: Vec<u64>,
    row_thin: u64,
    col_thin: u64,
    thin_stack: Vec<(u64, u64)>,
    pub boxes: Vec<Placement>,
}

impl State {
    pub fn new(prob: Problem) -> Self {
        assert!(prob.m <= 64 && prob.n <= 64 && prob.budget <= 64);
        let full_cols = mask(prob.n);
        let full_rows = mask(prob.m);
        State {
            prob,
            full_cols,
            uncov: vec![full_cols; prob.m],
            ucol: vec![full_rows; prob.n],
            row_cnt: vec![0; prob.m],
            col_cnt: vec![0; prob.n],
            row_sig: vec![0; prob.m],
            col_sig: vec![0; prob.n],
            row_thin: 0,
            col_thin: 0,
            thin_stack: Vec::with_capacity(prob.budget),
            boxes: Vec::with_capacity(prob.budget),
        }
    }

    pub fn apply(&mut self, (rows, cols): Placement) {
        let bit = 1u64 << self.boxes.len();
        for r in bits(rows) {
            self.uncov[r] &= !cols;
            self.row_cnt[r] += 1;
            self.row_sig[r] |= bit;
        }
        for c in bits(cols) {
            self.ucol[c] &= !rows;
            self.col_cnt[c] += 1;
            self.col_sig[c] |= bit;
        }
        self.thin_stack.push((self.row_thin, self.col_thin));
        if rows.count_ones() == 1 {
            self.row_thin |= rows;
        }
        if cols.count_ones() == 1 {
            self.col_thin |= cols;
        }
        self.boxes.push((rows, cols));
    }

    pub fn undo(&mut self) {
        let (rows, cols) = self.boxes.pop().expect("undo without placement");
        (self.row_thin, self.col_thin) = self.thin_stack.pop().expect("thin stack in sync");
        let bit = 1u64 << self.boxes.len();
        for r in bits(rows) {
            self.uncov[r] |= cols;
            self.row_cnt[r] -= 1;
            self.row_sig[r] &= !bit;
        }
        for c in bits(cols) {
            self.ucol[c] |= rows;
            self.col_cnt[c] -= 1;
            self.col_sig[c] &= !bit;
        }
    }

    fn first_uncovered(&self) -> Option<(usize, usize)> {
        self.uncov
            .iter()
            .enumerate()
            .find(|(_, &u)| u != 0)
            .map(|(r, &u)| (r, u.trailing_zeros() as usize))
    }

    /// Necessary conditions for the current state to extend to a solution.
    pub fn feasible(&self) -> bool {
        let p = &self.prob;
        let remaining = p.budget - self.boxes.len();
        let mut d_max = 0u32;
        let mut e_max = 0u32;
        let mut rows_at_max = 0u64;
        let mut cols_at_max = 0u64;
        let mut rows_lacking = 0u64;
        let mut cols_lacking = 0u64;

        for r in 0..p.m {
            let u = self.uncov[r].count_ones();
            let need = p.k.saturating_sub(self.row_cnt[r]);
            if u < need {
                return false;
            }
            let lacking = p.thin_lines && self.row_thin >> r & 1 == 0;
            if lacking {
                if u == 0 {
                    return false;
                }
                rows_lacking |= 1 << r;
            }
            let d = need.max((u > 0) as u32);
            if d > d_max {
                d_max = d;
                rows_at_max = 0;
            }
            if d == d_max {
                rows_at_max |= 1 << r;
            }
        }
        for c in 0..p.n {
            let u = self.ucol[c].count_ones();
            let need = p.l.saturating_sub(self.col_cnt[c]);
            if u < need {
                return false;
            }
            let lacking = p.thin_lines && self.col_thin >> c & 1 == 0;
            if lacking {
                if u == 0 {
                    return false;
                }
                cols_lacking |= 1 << c;
            }
            let e = need.max((u > 0) as u32);
            if e > e_max {
                e_max = e;
                cols_at_max = 0;
            }
            if e == e_max {
                cols_at_max |= 1 << c;
            }
        }
        if d_max == 0 {
            return true;
        }
        let remaining = remaining as u32;
        // Row r and column c share at most one future box, and none at all
        // when their common cell is already covered.
        let mut pair = d_max + e_max - 1;
        if bits(rows_at_max).any(|r| !self.uncov[r] & self.full_cols & cols_at_max != 0) {
            pair += 1;
        }
        if pair > remaining {
            return false;
        }
        if p.thin_lines {
            // Lines lacking a thin box need distinct future boxes, except that
            // a singleton may serve a row and a column at once.
            let rl = rows_lacking.count_ones();
            let cl = cols_lacking.count_ones();
            if rl.max(cl) > remaining {
                return false;
            }
            if rl + cl > remaining {
                let matched = self.max_matching(rows_lacking, cols_lacking);
                if rl + cl - matched > remaining {
                    return false;
                }
            }
        }
        true
    }

    /// Maximum matching between the given rows and columns through
    /// uncovered cells.
    fn max_matching(&self, rows: u64, cols: u64) -> u32 {
        fn try_row(
            r: usize,
            st: &State,
            cols: u64,
            seen: &mut u64,
            col_owner: &mut [usize; 64],
        ) -> bool {
            for c in bits(st.uncov[r] & cols & !*seen) {
                *seen |= 1 << c;
                if col_owner[c] == usize::MAX || try_row(col_owner[c], st, cols, seen, col_owner) {
                    col_owner[c] = r;
                    return true;
                }
            }
            false
        }
        let mut col_owner = [usize::MAX; 64];
        let mut matched = 0;
        for r in bits(rows) {
            let mut seen = 0u64;
            if try_row(r, self, cols, &mut seen, &mut col_owner) {
                matched += 1;
            }
        }
        matched
    }

    fn complete(&self) -> bool {
        self.uncov.iter().all(|&u| u == 0)
    }

    /// Checks the heuristic single-thin restriction for a new placement.
    fn single_thin_ok(&self, (rows, cols): Placement) -> bool {
        let p = &self.prob;
        if !p.single_thin {
            return true;
        }
        if p.k >= p.l {
            !(cols.count_ones() == 1 && self.col_thin & cols != 0)
        } else {
            !(rows.count_ones() == 1 && self.row_thin & rows != 0)
        }
    }

    /// Feasible children of this node, in search order.
    pub fn children(&mut self, out: &mut Vec<Placement>) {
        out.clear();
        let Some((a, b)) = self.first_uncovered() else {
            return;
        };
        if self.boxes.len() >= self.prob.budget {
            return;
        }
        let p = self.prob;
        let others = self.ucol[b] & !(1u64 << a) & !mask(a + 1);
        let row_classes = self.classes(others, &self.row_sig);

        let width_cap = |st: &State, r: usize| -> i64 {
            st.uncov[r].count_ones() as i64 - (p.k as i64 - st.row_cnt[r] as i64 - 1).max(0)
        };
        let height_cap = |st: &State, c: usize| -> i64 {
            st.ucol[c].count_ones() as i64 - (p.l as i64 - st.col_cnt[c] as i64 - 1).max(0)
        };

        let mut row_sets = Vec::new();
        prefix_subsets(&row_classes, 0, 0, &mut row_sets);
        for extra in row_sets {
            let rows = extra | 1u64 << a;
            let height = rows.count_ones() as i64;
            let mut common = self.full_cols;
            let mut max_width = i64::MAX;
            for r in bits(rows) {
                common &= self.uncov[r];
                max_width = max_width.min(width_cap(self, r));
            }
            if max_width < 1 || height_cap(self, b) < height {
                continue;
            }
            let avail = bits(common & !(1u64 << b))
                .filter(|&c| height_cap(self, c) >= height)
                .fold(0u64, |acc, c| acc | 1 << c);
            let col_classes = self.classes(avail, &self.col_sig);
            let mut col_sets = Vec::new();
            prefix_subsets(&col_classes, 0, 0, &mut col_sets);
            for extra_c in col_sets {
                let cols = extra_c | 1u64 << b;
                if cols.count_ones() as i64 > max_width {
                    continue;
                }
                out.push((rows, cols));
            }
        }
        out.sort_by_key(|&(r, c)| {
            let (h, w) = (r.count_ones(), c.count_ones());
            (Reverse(h * w), Reverse(h), r, c)
        });
        let mut kept = 0;
        for i in 0..out.len() {
            let cand = out[i];
            if !self.single_thin_ok(cand) {
                continue;
            }
            self.apply(cand);
            let ok = self.feasible();
            self.undo();
            if ok {
                out[kept] = cand;
                kept += 1;
            }
        }
        out.truncate(kept);
    }

    /// Partitions `set` into interchangeability classes by signature.
    fn classes(&self, set: u64, sig: &[u64]) -> Vec<Vec<usize>> {
        if !self.prob.symmetry {
            return bits(set).map(|i| vec![i]).collect();
        }
        let mut classes: Vec<(u64, Vec<usize>)> = Vec::new();
        for i in bits(set) {
            match classes.iter_mut().find(|(s, _)| *s == sig[i]) {
                Some((_, members)) => members.push(i),
                None => classes.push((sig[i], vec![i])),
            }
        }
        classes.into_iter().map(|(_, m)| m).collect()
    }
}

fn mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// All subsets formed by taking a prefix of each class.
fn prefix_subsets(classes: &[Vec<usize>], idx: usize, acc: u64, out: &mut Vec<u64>) {
    if idx == classes.len() {
        out.push(acc);
        return;
    }
    let mut cur = acc;
    prefix_subsets(classes, idx + 1, cur, out);
    for &i in &classes[idx] {
        cur |= 1 << i;
        prefix_subsets(classes, idx + 1, cur, out);
    }
}

/// One depth-first search task rooted at a fixed prefix of placements.
pub(crate) struct Searcher<'a> {
    pub state: State,
    shared: &'a Shared,
    task: usize,
    pub nodes: u64,
    buffers: Vec<Vec<Placement>>,
}

impl<'a> Searcher<'a> {
    pub fn new(prob: Problem, prefix: &[Placement], shared: &'a Shared, task: usize) -> Self {
        let mut state = State::new(prob);
        for &pl in prefix {
            state.apply(pl);
        }
        Searcher {
            state,
            shared,
            task,
            nodes: 0,
            buffers: Vec::new(),
        }
    }

    fn should_stop(&self) -> bool {
        if self.shared.winner.load(Ordering::Relaxed) < self.task {
            return true;
        }
        if self.shared.timed_out.load(Ordering::Relaxed) {
            return true;
        }
        if let Some(deadline) = self.shared.deadline {
            if Instant::now() >= deadline {
                self.shared.timed_out.store(true, Ordering::Relaxed);
                return true;
            }
        }
        false
    }

    /// Runs the search; on `Found` the witness is left in `state.boxes`.
    pub fn run(&mut self) -> Flow {
        if !self.state.feasible() {
            self.nodes += 1;
            return Flow::Exhausted;
        }
        self.dfs(0)
    }

    fn dfs(&mut self, depth: usize) -> Flow {
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) && self.should_stop() {
            return Flow::Aborted;
        }
        if self.state.complete() {
            return Flow::Found;
        }
        if self.buffers.len() <= depth {
            self.buffers.push(Vec::new());
        }
        let mut kids = std::mem::take(&mut self.buffers[depth]);
        self.state.children(&mut kids);
        let mut flow = Flow::Exhausted;
        for &cand in &kids {
            self.state.apply(cand);
            let f = self.dfs(depth + 1);
            if f != Flow::Exhausted {
                flow = f;
                if f == Flow::Aborted {
                    self.state.undo();
                }
                break;
            }
            self.state.undo();
        }
        self.buffers[depth] = kids;
        flow
    }
}

/// Expands the top `depth` levels of the tree into task prefixes, in
/// depth-first order. Returns the prefixes and the nodes visited.
pub(crate) fn split_tasks(prob: Problem, depth: usize) -> (Vec<Vec<Placement>>, u64) {
    fn go(
        state: &mut State,
        depth: usize,
        tasks: &mut Vec<Vec<Placement>>,
        nodes: &mut u64,
    ) {
        if depth == 0 || state.complete() {
            tasks.push(state.boxes.clone());
            return;
        }
        *nodes += 1;
        let mut kids = Vec::new();
        state.children(&mut kids);
        for cand in kids {
            state.apply(cand);
            go(state, depth - 1, tasks, nodes);
            state.undo();
        }
    }
    let mut state = State::new(prob);
    let mut tasks = Vec::new();
    let mut nodes = 0;
    if state.feasible() {
        go(&mut state, depth, &mut tasks, &mut nodes);
    } else {
        nodes = 1;
    }
    (tasks, nodes)
}
