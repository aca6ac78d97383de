//! Backtracking search for linear AONT matrices modulo monomial equivalence.
//!
//! Rows are placed one at a time. Only the lexicographically least member of
//! each monomial orbit is visited, so the tree obeys:
//!
//! * rows strictly increase, reading a row as a base-`q` number with
//!   column 0 most significant;
//! * the first nonzero entry of every row and every column is 1;
//! * columns are nondecreasing, compared top-down.
//!
//! A `t_o × t_i` submatrix on columns `I` is rank deficient exactly when its
//! rows, projected onto `I`, lie in a common hyperplane of `F_q^{t_i}`. For
//! every `I` and every hyperplane we count the placed rows inside it and
//! prune as soon as some count reaches `t_o`. Rows are also kept linearly
//! independent, so a full-depth node is an invertible AONT matrix.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aont::{verify_linear_aont, AontParams};
use crate::bounds::theorem_upper_bound;
use crate::gf::{field_of_order, Fe, Field};
use crate::matrix::Matrix;

/// Largest candidate-row list the search will build.
pub const MAX_CANDIDATES: u64 = 1 << 22;

pub const DEFAULT_CHECK_INTERVAL: u64 = 1 << 16;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("checkpoint error: {0}")]
    Checkpoint(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Exhaustive,
    Randomized,
    Hybrid,
}

impl std::str::FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exhaustive" => Ok(Strategy::Exhaustive),
            "randomized" => Ok(Strategy::Randomized),
            "hybrid" => Ok(Strategy::Hybrid),
            _ => Err(format!("unknown strategy `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn nodes(n: u64) -> Self {
        Budget { max_nodes: Some(n), max_time: None }
    }

    fn is_limited(&self) -> bool {
        self.max_nodes.is_some() || self.max_time.is_some()
    }
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub params: AontParams,
    pub strategy: Strategy,
    pub budget: Budget,
    pub workers: usize,
    pub seed: u64,
    pub checkpoint_path: Option<PathBuf>,
    /// Budget and wall clock are checked every this many nodes.
    pub check_interval: u64,
    /// Minimum time between periodic checkpoint writes.
    pub checkpoint_every: Duration,
    /// Skip runs whose `s` exceeds the closed-form upper bound.
    pub use_bounds: bool,
    /// Randomized restarts allow `restart_base × luby(i)` nodes each.
    pub restart_base: u64,
}

impl SearchConfig {
    pub fn new(params: AontParams, strategy: Strategy) -> Self {
        SearchConfig {
            params,
            strategy,
            budget: Budget::unlimited(),
            workers: 1,
            seed: 0,
            checkpoint_path: None,
            check_interval: DEFAULT_CHECK_INTERVAL,
            checkpoint_every: Duration::from_secs(60),
            use_bounds: true,
            restart_base: 256,
        }
    }

    pub fn exhaustive(params: AontParams) -> Self {
        Self::new(params, Strategy::Exhaustive)
    }

    fn validate(&self) -> Result<(), SearchError> {
        let p = self.params;
        AontParams::new(p.ti, p.to, p.s, p.q).map_err(|e| SearchError::BadParams(e.to_string()))?;
        if self.budget.max_nodes == Some(0) || self.budget.max_time == Some(Duration::ZERO) {
            return Err(SearchError::BadParams("budget must be positive".into()));
        }
        if self.workers == 0 || self.check_interval == 0 || self.restart_base == 0 {
            return Err(SearchError::BadParams("workers, check interval and restart base must be positive".into()));
        }
        if self.strategy != Strategy::Exhaustive && !self.budget.is_limited() {
            return Err(SearchError::BadParams("randomized strategies need a node or time budget".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Found,
    Exhausted,
    BudgetExceeded,
}

/// What an ascending run over `s` established about `S(t_i, t_o, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frontier {
    pub largest_found: Option<usize>,
    pub smallest_impossible: Option<usize>,
    /// Set when `smallest_impossible = largest_found + 1`.
    pub exact: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub params: AontParams,
    pub status: Status,
    /// Present exactly when `status` is `Found`; always verifier-certified.
    pub matrix: Option<Matrix>,
    /// Total over all runs when resumed from a checkpoint.
    pub nodes_explored: u64,
    pub elapsed: Duration,
    /// `Exhausted` without search because `s` exceeds the closed-form bound.
    pub pruned_by_bound: bool,
    pub tasks_total: usize,
    pub tasks_done: usize,
    pub frontier: Option<Frontier>,
}

#[derive(Serialize)]
struct OutcomeJson<'a> {
    params: AontParams,
    status: Status,
    matrix: Option<Vec<Vec<Fe>>>,
    nodes_explored: u64,
    elapsed_secs: f64,
    pruned_by_bound: bool,
    tasks_total: usize,
    tasks_done: usize,
    frontier: &'a Option<Frontier>,
}

impl SearchOutcome {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(OutcomeJson {
            params: self.params,
            status: self.status,
            matrix: self.matrix.as_ref().map(Matrix::to_rows),
            nodes_explored: self.nodes_explored,
            elapsed_secs: self.elapsed.as_secs_f64(),
            pruned_by_bound: self.pruned_by_bound,
            tasks_total: self.tasks_total,
            tasks_done: self.tasks_done,
            frontier: &self.frontier,
        })
        .expect("plain data")
    }
}

/// Immutable description of the search space.
struct Space {
    params: AontParams,
    field: Field,
    s: usize,
    to: u16,
    n_cands: usize,
    /// Words per candidate bitset.
    words: usize,
    /// Row-major digits of every candidate.
    digits: Vec<Fe>,
    /// Bit `s-1-c` set when column `c` is nonzero.
    nz_mask: Vec<u64>,
    /// Bit `s-1-c` set when column `c` holds a value other than 0 or 1.
    big_mask: Vec<u64>,
    /// Bit `s-1-c` set when `v[c] > v[c+1]`.
    desc_mask: Vec<u64>,
    /// Bit `s-1-c` set when `v[c] == v[c+1]`.
    eq_mask: Vec<u64>,
    /// Cells `k·n_hyper + h` (column set `k`, hyperplane `h`) containing
    /// each candidate, flattened with offsets.
    cells: Vec<u32>,
    cell_start: Vec<usize>,
    n_cells: usize,
    /// Candidate bitset of every cell.
    members: Vec<u64>,
}

/// Upper limit on the total size of the cell bitsets, in bits.
const MAX_MEMBER_BITS: u64 = 1 << 31;

fn normalized_vectors(q: u32, len: usize) -> Vec<Vec<Fe>> {
    // all vectors whose first nonzero entry is 1, increasing in code order
    let mut out = Vec::new();
    let total = (q as u64).pow(len as u32);
    for code in 1..total {
        let mut v = vec![0; len];
        let mut c = code;
        for d in v.iter_mut().rev() {
            *d = (c % q as u64) as Fe;
            c /= q as u64;
        }
        if v.iter().find(|&&x| x != 0) == Some(&1) {
            out.push(v);
        }
    }
    out
}

impl Space {
    fn new(params: AontParams) -> Result<Self, SearchError> {
        let AontParams { ti, to, s, q } = params;
        let field = field_of_order(q).map_err(|e| SearchError::BadParams(e.to_string()))?;
        let n = ((q as u64).checked_pow(s as u32).unwrap_or(u64::MAX) - 1) / (q as u64 - 1);
        if n > MAX_CANDIDATES || s > 63 {
            return Err(SearchError::BadParams(format!("{n} candidate rows exceeds the limit of {MAX_CANDIDATES}")));
        }
        let col_sets: Vec<Vec<usize>> = (0..s).combinations(ti).collect();
        let hyper = normalized_vectors(q, ti);
        let n_cells = col_sets.len() * hyper.len();
        if n_cells as u64 * n > MAX_MEMBER_BITS {
            return Err(SearchError::BadParams(format!("{n_cells} cells over {n} candidates is beyond desk scale")));
        }
        // hyperplanes containing each projected vector, indexed by its code
        let n_proj = (q as usize).pow(ti as u32);
        let orth: Vec<Vec<u32>> = (0..n_proj)
            .map(|code| {
                let mut c = code;
                let p: Vec<Fe> = (0..ti)
                    .map(|_| {
                        let d = c % q as usize;
                        c /= q as usize;
                        d as Fe
                    })
                    .collect();
                (0..hyper.len() as u32)
                    .filter(|&h| {
                        hyper[h as usize].iter().zip(&p).fold(0, |acc, (&a, &b)| field.add(acc, field.mul(a, b))) == 0
                    })
                    .collect()
            })
            .collect();

        let cands = normalized_vectors(q, s);
        let words = cands.len().div_ceil(64);
        let bit = |c: usize| 1u64 << (s - 1 - c);
        let mut sp = Space {
            params,
            field,
            s,
            to: to as u16,
            n_cands: cands.len(),
            words,
            digits: Vec::with_capacity(cands.len() * s),
            nz_mask: Vec::with_capacity(cands.len()),
            big_mask: Vec::with_capacity(cands.len()),
            desc_mask: Vec::with_capacity(cands.len()),
            eq_mask: Vec::with_capacity(cands.len()),
            cells: Vec::new(),
            cell_start: vec![0],
            n_cells,
            members: vec![0; n_cells * words],
        };
        for (idx, v) in cands.iter().enumerate() {
            sp.digits.extend_from_slice(v);
            let mask = |pred: &dyn Fn(usize) -> bool| (0..s).filter(|&c| pred(c)).fold(0, |m, c| m | bit(c));
            sp.nz_mask.push(mask(&|c| v[c] != 0));
            sp.big_mask.push(mask(&|c| v[c] > 1));
            sp.desc_mask.push(mask(&|c| c + 1 < s && v[c] > v[c + 1]));
            sp.eq_mask.push(mask(&|c| c + 1 < s && v[c] == v[c + 1]));
            for (k, set) in col_sets.iter().enumerate() {
                let pc = set.iter().rev().fold(0, |acc, &c| acc * q as usize + v[c] as usize);
                for &h in &orth[pc] {
                    let cell = k * hyper.len() + h as usize;
                    sp.cells.push(cell as u32);
                    sp.members[cell * words + idx / 64] |= 1 << (idx % 64);
                }
            }
            sp.cell_start.push(sp.cells.len());
        }
        Ok(sp)
    }

    fn row(&self, idx: usize) -> &[Fe] {
        &self.digits[idx * self.s..(idx + 1) * self.s]
    }

    fn cells_of(&self, idx: usize) -> &[u32] {
        &self.cells[self.cell_start[idx]..self.cell_start[idx + 1]]
    }

    fn member_set(&self, cell: usize) -> &[u64] {
        &self.members[cell * self.words..(cell + 1) * self.words]
    }

    fn all_tied(&self) -> u64 {
        // bits for c in 0..s-1
        if self.s < 2 {
            0
        } else {
            ((1u64 << (self.s - 1)) - 1) << 1
        }
    }

    fn matrix(&self, rows: &[usize]) -> Matrix {
        let data = rows.iter().flat_map(|&r| self.row(r).to_vec()).collect();
        Matrix::from_vec(&self.field, self.s, self.s, data).expect("square")
    }
}

/// Mutable per-worker search state.
struct State<'a> {
    sp: &'a Space,
    rows: Vec<usize>,
    started: Vec<u64>,
    tied: Vec<u64>,
    /// Rows placed in each cell.
    counts: Vec<u16>,
    /// Per level, candidates that would fill some cell to `t_o` rows.
    blocked: Vec<Vec<u64>>,
    /// Echelon basis keyed by pivot column.
    basis: Vec<Option<Vec<Fe>>>,
    pivots: Vec<usize>,
    scratch: Vec<Fe>,
}

impl<'a> State<'a> {
    fn new(sp: &'a Space) -> Self {
        let mut root = vec![0u64; sp.words];
        if sp.to == 1 {
            // every cell is already one row short of t_o
            for cell in 0..sp.n_cells {
                for (b, &m) in root.iter_mut().zip(sp.member_set(cell)) {
                    *b |= m;
                }
            }
        }
        State {
            sp,
            rows: Vec::with_capacity(sp.s),
            started: vec![0],
            tied: vec![sp.all_tied()],
            counts: vec![0; sp.n_cells],
            blocked: vec![root],
            basis: vec![None; sp.s],
            pivots: Vec::with_capacity(sp.s),
            scratch: vec![0; sp.s],
        }
    }

    fn depth(&self) -> usize {
        self.rows.len()
    }

    fn reset(&mut self) {
        while self.depth() > 0 {
            self.pop();
        }
    }

    fn first_child(&self) -> usize {
        self.rows.last().map_or(0, |&r| r + 1)
    }

    fn is_blocked(&self, idx: usize) -> bool {
        self.blocked.last().unwrap()[idx / 64] >> (idx % 64) & 1 == 1
    }

    /// Least unblocked candidate at or after `from`.
    fn next_open(&self, from: usize) -> Option<usize> {
        let b = self.blocked.last().unwrap();
        let mut w = from / 64;
        if w >= b.len() {
            return None;
        }
        let mut open = !b[w] & (!0u64 << (from % 64));
        loop {
            if open != 0 {
                let idx = w * 64 + open.trailing_zeros() as usize;
                return (idx < self.sp.n_cands).then_some(idx);
            }
            w += 1;
            if w == b.len() {
                return None;
            }
            open = !b[w];
        }
    }

    /// Whether at least `need` unblocked candidates lie after `idx`.
    fn enough_after(&self, idx: usize, need: usize) -> bool {
        let b = self.blocked.last().unwrap();
        let n = self.sp.n_cands;
        let mut have = 0;
        let from = idx + 1;
        for w in from / 64..b.len() {
            let mut open = !b[w];
            if w == from / 64 {
                open &= !0u64 << (from % 64);
            }
            if w == b.len() - 1 && !n.is_multiple_of(64) {
                open &= (1u64 << (n % 64)) - 1;
            }
            have += open.count_ones() as usize;
            if have >= need {
                return true;
            }
        }
        need == 0
    }

    /// Places candidate `idx` if every constraint still holds.
    fn try_push(&mut self, idx: usize) -> bool {
        let sp = self.sp;
        let level = self.depth();
        if idx >= sp.n_cands || sp.n_cands - idx < sp.s - level || self.is_blocked(idx) {
            return false;
        }
        let (started, tied) = (*self.started.last().unwrap(), *self.tied.last().unwrap());
        if sp.big_mask[idx] & !started != 0 || sp.desc_mask[idx] & tied != 0 {
            return false;
        }
        let Some(pivot) = self.independent_pivot(idx) else {
            return false;
        };
        let mut next = self.blocked.last().unwrap().clone();
        for &cell in sp.cells_of(idx) {
            let c = &mut self.counts[cell as usize];
            *c += 1;
            if *c + 1 == sp.to {
                for (b, &m) in next.iter_mut().zip(sp.member_set(cell as usize)) {
                    *b |= m;
                }
            }
        }
        self.blocked.push(next);
        if level + 1 < sp.s && !self.enough_after(idx, sp.s - level - 1) {
            self.blocked.pop();
            for &cell in sp.cells_of(idx) {
                self.counts[cell as usize] -= 1;
            }
            return false;
        }
        self.insert_basis(pivot);
        self.rows.push(idx);
        self.started.push(started | sp.nz_mask[idx]);
        self.tied.push(tied & sp.eq_mask[idx]);
        true
    }

    fn pop(&mut self) {
        let idx = self.rows.pop().expect("nonempty");
        self.started.pop();
        self.tied.pop();
        self.blocked.pop();
        for &cell in self.sp.cells_of(idx) {
            self.counts[cell as usize] -= 1;
        }
        let p = self.pivots.pop().expect("basis in step with rows");
        self.basis[p] = None;
    }

    /// Reduces the candidate against the basis into `scratch`; returns the
    /// pivot of the remainder, or `None` when the row is dependent.
    fn independent_pivot(&mut self, idx: usize) -> Option<usize> {
        let f = &self.sp.field;
        self.scratch.copy_from_slice(self.sp.row(idx));
        for p in 0..self.sp.s {
            let x = self.scratch[p];
            if x == 0 {
                continue;
            }
            match &self.basis[p] {
                Some(b) => {
                    for (y, &bv) in self.scratch[p..].iter_mut().zip(&b[p..]) {
                        *y = f.sub(*y, f.mul(x, bv));
                    }
                }
                None => return Some(p),
            }
        }
        None
    }

    fn insert_basis(&mut self, p: usize) {
        let f = &self.sp.field;
        let inv = f.inv_nz(self.scratch[p]);
        let b: Vec<Fe> = self.scratch.iter().map(|&y| f.mul(y, inv)).collect();
        self.basis[p] = Some(b);
        self.pivots.push(p);
    }
}

/// Shared run-time controls.
struct Control {
    found: AtomicBool,
    stop: AtomicBool,
    nodes: AtomicU64,
    start: Instant,
    budget: Budget,
    check_interval: u64,
}

impl Control {
    fn new(budget: Budget, check_interval: u64, base_nodes: u64) -> Self {
        Control {
            found: AtomicBool::new(false),
            stop: AtomicBool::new(false),
            nodes: AtomicU64::new(base_nodes),
            start: Instant::now(),
            budget,
            check_interval,
        }
    }

    fn halted(&self) -> bool {
        self.found.load(Ordering::Relaxed) || self.stop.load(Ordering::Relaxed)
    }

    /// Adds `n` nodes to the global count and evaluates the budget.
    fn flush(&self, n: u64) {
        let total = self.nodes.fetch_add(n, Ordering::Relaxed) + n;
        let over_nodes = self.budget.max_nodes.is_some_and(|m| total >= m);
        let over_time = self.budget.max_time.is_some_and(|t| self.start.elapsed() >= t);
        if over_nodes || over_time {
            self.stop.store(true, Ordering::Relaxed);
        }
    }
}

/// Per-worker node accounting.
struct Meter<'a> {
    ctl: &'a Control,
    pending: u64,
    task_nodes: u64,
}

impl<'a> Meter<'a> {
    fn new(ctl: &'a Control) -> Self {
        Meter { ctl, pending: 0, task_nodes: 0 }
    }

    fn count(&mut self) {
        self.pending += 1;
        self.task_nodes += 1;
        if self.pending >= self.ctl.check_interval {
            self.ctl.flush(self.pending);
            self.pending = 0;
        }
    }

    fn settle(&mut self) {
        if self.pending > 0 {
            self.ctl.nodes.fetch_add(self.pending, Ordering::Relaxed);
            self.pending = 0;
        }
    }
}

enum Flow {
    Continue,
    Found,
    /// Candidate path from the task root to the next untried node.
    Stop(Vec<usize>),
}

/// Depth-first traversal in canonical order. `resume` is a path recorded by
/// an earlier `Stop`: its leading entries are re-placed without counting and
/// its last entry is the first candidate to try.
fn explore(
    st: &mut State,
    meter: &mut Meter,
    resume: Option<&[usize]>,
    collect: &mut Option<&mut Vec<Vec<usize>>>,
) -> Result<Flow, SearchError> {
    if st.depth() == st.sp.s {
        return Ok(match collect {
            Some(out) => {
                out.push(st.rows.clone());
                Flow::Continue
            }
            None => Flow::Found,
        });
    }
    let mut start = st.first_child();
    if let Some(path) = resume.filter(|p| !p.is_empty()) {
        if path[0] < start || path[0] > st.sp.n_cands || (path.len() > 1 && path[0] == st.sp.n_cands) {
            return Err(SearchError::Checkpoint("resume path is out of order".into()));
        }
        if path.len() == 1 {
            start = path[0];
        } else {
            if !st.try_push(path[0]) {
                return Err(SearchError::Checkpoint("resume path violates the constraints".into()));
            }
            match explore(st, meter, Some(&path[1..]), collect)? {
                Flow::Found => return Ok(Flow::Found),
                Flow::Stop(mut rest) => {
                    rest.insert(0, path[0]);
                    st.pop();
                    return Ok(Flow::Stop(rest));
                }
                Flow::Continue => st.pop(),
            }
            start = path[0] + 1;
        }
    }
    let mut cursor = st.next_open(start);
    while let Some(idx) = cursor {
        cursor = st.next_open(idx + 1);
        if meter.ctl.halted() {
            return Ok(Flow::Stop(vec![idx]));
        }
        if !st.try_push(idx) {
            continue;
        }
        meter.count();
        match explore(st, meter, None, collect)? {
            Flow::Found => return Ok(Flow::Found),
            Flow::Stop(mut rest) => {
                rest.insert(0, idx);
                st.pop();
                return Ok(Flow::Stop(rest));
            }
            Flow::Continue => st.pop(),
        }
    }
    Ok(Flow::Continue)
}

/// Subtree roots: every valid placement of the first `min(2, s)` rows.
fn task_prefixes(sp: &Space) -> (Vec<Vec<usize>>, u64) {
    let depth = sp.s.min(2);
    let mut st = State::new(sp);
    let mut out = Vec::new();
    let mut nodes = 0;
    fn rec(st: &mut State, depth: usize, out: &mut Vec<Vec<usize>>, nodes: &mut u64) {
        if st.depth() == depth {
            out.push(st.rows.clone());
            return;
        }
        let mut cursor = st.next_open(st.first_child());
        while let Some(idx) = cursor {
            cursor = st.next_open(idx + 1);
            if st.try_push(idx) {
                *nodes += 1;
                rec(st, depth, out, nodes);
                st.pop();
            }
        }
    }
    rec(&mut st, depth, &mut out, &mut nodes);
    (out, nodes)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskState {
    Pending,
    Partial { path: Vec<usize> },
    Done,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskRecord {
    /// Candidate indices of the prefix rows.
    pub prefix: Vec<usize>,
    pub state: TaskState,
    pub nodes: u64,
}

/// Serialized exhaustive frontier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub params: AontParams,
    pub prefix_nodes: u64,
    pub tasks: Vec<TaskRecord>,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Self, SearchError> {
        let text = fs::read_to_string(path).map_err(|source| SearchError::Io { path: path.into(), source })?;
        serde_json::from_str(&text).map_err(|e| SearchError::Checkpoint(e.to_string()))
    }

    pub fn save(&self, path: &Path) -> Result<(), SearchError> {
        let tmp = path.with_extension("tmp");
        let text = serde_json::to_string(self).expect("plain data");
        let io = |source| SearchError::Io { path: path.into(), source };
        fs::write(&tmp, text).map_err(io)?;
        fs::rename(&tmp, path).map_err(io)
    }

    pub fn nodes(&self) -> u64 {
        self.prefix_nodes + self.tasks.iter().map(|t| t.nodes).sum::<u64>()
    }

    pub fn tasks_done(&self) -> usize {
        self.tasks.iter().filter(|t| t.state == TaskState::Done).count()
    }
}

fn certify(sp: &Space, rows: &[usize]) -> Matrix {
    let m = sp.matrix(rows);
    let report = verify_linear_aont(&m, sp.params.ti, sp.params.to).expect("dimensions match");
    assert!(report.passed(), "search produced a matrix the verifier rejects:\n{}", m.to_text());
    m
}

fn bound_pruned(cfg: &SearchConfig) -> Result<bool, SearchError> {
    let p = cfg.params;
    if !cfg.use_bounds {
        return Ok(false);
    }
    let b = theorem_upper_bound(p.ti, p.to, p.q).map_err(|e| SearchError::BadParams(e.to_string()))?;
    Ok(b.value.is_some_and(|v| (p.s as u64) > v))
}

fn trivial_outcome(cfg: &SearchConfig, status: Status, start: Instant) -> SearchOutcome {
    SearchOutcome {
        params: cfg.params,
        status,
        matrix: None,
        nodes_explored: 0,
        elapsed: start.elapsed(),
        pruned_by_bound: true,
        tasks_total: 0,
        tasks_done: 0,
        frontier: None,
    }
}

/// Runs the configured strategy. Found matrices are certified by the
/// linear verifier before being returned.
pub fn search_linear_aont(cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    cfg.validate()?;
    let start = Instant::now();
    if bound_pruned(cfg)? {
        return Ok(trivial_outcome(cfg, Status::Exhausted, start));
    }
    let sp = Space::new(cfg.params)?;
    match cfg.strategy {
        Strategy::Exhaustive => run_exhaustive(&sp, cfg, cfg.budget, start),
        Strategy::Randomized => run_randomized(&sp, cfg, cfg.budget, start),
        Strategy::Hybrid => {
            let half = Budget {
                max_nodes: cfg.budget.max_nodes.map(|n| (n / 2).max(1)),
                max_time: cfg.budget.max_time.map(|t| t / 2),
            };
            let first = run_randomized(&sp, cfg, half, start)?;
            if first.status == Status::Found {
                return Ok(first);
            }
            let rest = Budget {
                max_nodes: cfg.budget.max_nodes.map(|n| n.saturating_sub(first.nodes_explored).max(1)),
                max_time: cfg.budget.max_time.map(|t| t.saturating_sub(start.elapsed()).max(Duration::from_millis(1))),
            };
            let mut out = run_exhaustive(&sp, cfg, rest, Instant::now())?;
            out.nodes_explored += first.nodes_explored;
            out.elapsed = start.elapsed();
            Ok(out)
        }
    }
}

/// Exhaustive search whose `Exhausted` status certifies nonexistence.
pub fn prove_nonexistence(cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    if cfg.strategy != Strategy::Exhaustive {
        return Err(SearchError::BadParams("nonexistence needs the exhaustive strategy".into()));
    }
    search_linear_aont(cfg)
}

fn fresh_checkpoint(sp: &Space) -> Checkpoint {
    let (prefixes, prefix_nodes) = task_prefixes(sp);
    Checkpoint {
        version: 1,
        params: sp.params,
        prefix_nodes,
        tasks: prefixes.into_iter().map(|prefix| TaskRecord { prefix, state: TaskState::Pending, nodes: 0 }).collect(),
    }
}

fn load_or_fresh(sp: &Space, cfg: &SearchConfig) -> Result<Checkpoint, SearchError> {
    let fresh = fresh_checkpoint(sp);
    let Some(path) = cfg.checkpoint_path.as_deref().filter(|p| p.exists()) else {
        return Ok(fresh);
    };
    let ck = Checkpoint::load(path)?;
    if ck.params != sp.params {
        return Err(SearchError::Checkpoint(format!("checkpoint is for {}, not {}", ck.params, sp.params)));
    }
    let same_prefixes = ck.tasks.len() == fresh.tasks.len()
        && ck.tasks.iter().zip(&fresh.tasks).all(|(a, b)| a.prefix == b.prefix)
        && ck.prefix_nodes == fresh.prefix_nodes;
    if !same_prefixes {
        return Err(SearchError::Checkpoint("task prefixes do not match this search space".into()));
    }
    Ok(ck)
}

/// Snapshot for periodic writes: in-flight tasks are recorded as pending.
fn snapshot(ck: &Checkpoint, running: &[bool]) -> Checkpoint {
    let mut out = ck.clone();
    for (t, &r) in out.tasks.iter_mut().zip(running) {
        if r {
            *t = TaskRecord { prefix: t.prefix.clone(), state: TaskState::Pending, nodes: 0 };
        }
    }
    out
}

struct Shared {
    ck: Checkpoint,
    running: Vec<bool>,
    last_write: Instant,
    found: Option<Vec<usize>>,
    error: Option<SearchError>,
}

fn run_exhaustive(sp: &Space, cfg: &SearchConfig, budget: Budget, start: Instant) -> Result<SearchOutcome, SearchError> {
    let ck = load_or_fresh(sp, cfg)?;
    let todo: Vec<usize> = (0..ck.tasks.len()).filter(|&i| ck.tasks[i].state != TaskState::Done).collect();
    let ctl = Control::new(budget, cfg.check_interval, ck.nodes());
    // a budget already spent by earlier runs stops immediately
    ctl.flush(0);
    let shared = Mutex::new(Shared {
        running: vec![false; ck.tasks.len()],
        ck,
        last_write: Instant::now(),
        found: None,
        error: None,
    });
    let next = AtomicUsize::new(0);

    let worker = || {
        let mut st = State::new(sp);
        loop {
            if ctl.halted() {
                break;
            }
            let k = next.fetch_add(1, Ordering::Relaxed);
            let Some(&ti) = todo.get(k) else { break };
            let (prefix, resume, prior) = {
                let mut sh = shared.lock().unwrap();
                sh.running[ti] = true;
                let t = &sh.ck.tasks[ti];
                let resume = match &t.state {
                    TaskState::Partial { path } => Some(path.clone()),
                    _ => None,
                };
                (t.prefix.clone(), resume, t.nodes)
            };
            st.reset();
            for &r in &prefix {
                assert!(st.try_push(r), "task prefix was generated from the same space");
            }
            let mut meter = Meter::new(&ctl);
            let flow = explore(&mut st, &mut meter, resume.as_deref(), &mut None);
            meter.settle();
            let mut sh = shared.lock().unwrap();
            sh.running[ti] = false;
            let rec = &mut sh.ck.tasks[ti];
            rec.nodes = prior + meter.task_nodes;
            match flow {
                Ok(Flow::Continue) => rec.state = TaskState::Done,
                Ok(Flow::Stop(path)) => rec.state = TaskState::Partial { path },
                Ok(Flow::Found) => {
                    // resume after the found leaf
                    rec.state = if st.rows.len() == prefix.len() {
                        TaskState::Done
                    } else {
                        let mut path = st.rows[prefix.len()..].to_vec();
                        *path.last_mut().unwrap() += 1;
                        TaskState::Partial { path }
                    };
                    if sh.found.is_none() {
                        sh.found = Some(st.rows.clone());
                    }
                    ctl.found.store(true, Ordering::Relaxed);
                }
                Err(e) => {
                    sh.error.get_or_insert(e);
                    ctl.stop.store(true, Ordering::Relaxed);
                }
            }
            if let Some(path) = cfg.checkpoint_path.as_deref() {
                if sh.last_write.elapsed() >= cfg.checkpoint_every {
                    let snap = snapshot(&sh.ck, &sh.running);
                    if let Err(e) = snap.save(path) {
                        sh.error.get_or_insert(e);
                        ctl.stop.store(true, Ordering::Relaxed);
                    }
                    sh.last_write = Instant::now();
                }
            }
        }
    };
    std::thread::scope(|scope| {
        for _ in 0..cfg.workers.min(todo.len().max(1)) {
            scope.spawn(worker);
        }
    });

    let sh = shared.into_inner().unwrap();
    if let Some(e) = sh.error {
        return Err(e);
    }
    if let Some(path) = cfg.checkpoint_path.as_deref() {
        sh.ck.save(path)?;
    }
    let done = sh.ck.tasks_done();
    let status = if sh.found.is_some() {
        Status::Found
    } else if done == sh.ck.tasks.len() {
        Status::Exhausted
    } else {
        Status::BudgetExceeded
    };
    Ok(SearchOutcome {
        params: cfg.params,
        status,
        matrix: sh.found.as_deref().map(|rows| certify(sp, rows)),
        nodes_explored: sh.ck.nodes(),
        elapsed: start.elapsed(),
        pruned_by_bound: false,
        tasks_total: sh.ck.tasks.len(),
        tasks_done: done,
        frontier: None,
    })
}

/// The Luby restart sequence 1, 1, 2, 1, 1, 2, 4, ...
pub fn luby(mut i: u64) -> u64 {
    // 1-based index
    loop {
        let mut k = 1u32;
        while (1u64 << k) - 1 < i {
            k += 1;
        }
        if i == (1u64 << k) - 1 {
            return 1u64 << (k - 1);
        }
        i -= (1u64 << (k - 1)) - 1;
    }
}

enum RandFlow {
    Found,
    Restart,
    Exhausted,
}

fn explore_random(st: &mut State, meter: &mut Meter, rng: &mut ChaCha8Rng, limit: u64) -> RandFlow {
    if st.depth() == st.sp.s {
        return RandFlow::Found;
    }
    let mut order: Vec<usize> = std::iter::successors(st.next_open(st.first_child()), |&i| st.next_open(i + 1)).collect();
    order.shuffle(rng);
    for idx in order {
        if meter.ctl.halted() || meter.task_nodes >= limit {
            return RandFlow::Restart;
        }
        if !st.try_push(idx) {
            continue;
        }
        meter.count();
        match explore_random(st, meter, rng, limit) {
            RandFlow::Exhausted => st.pop(),
            other => return other,
        }
    }
    RandFlow::Exhausted
}

fn run_randomized(sp: &Space, cfg: &SearchConfig, budget: Budget, start: Instant) -> Result<SearchOutcome, SearchError> {
    let ctl = Control::new(budget, cfg.check_interval, 0);
    let found: Mutex<Option<Vec<usize>>> = Mutex::new(None);
    let exhausted = AtomicBool::new(false);
    let worker = |w: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add((w as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)));
        let mut st = State::new(sp);
        let mut meter = Meter::new(&ctl);
        for round in 1.. {
            if ctl.halted() {
                break;
            }
            st.reset();
            meter.task_nodes = 0;
            match explore_random(&mut st, &mut meter, &mut rng, cfg.restart_base.saturating_mul(luby(round))) {
                RandFlow::Found => {
                    found.lock().unwrap().get_or_insert_with(|| st.rows.clone());
                    ctl.found.store(true, Ordering::Relaxed);
                }
                RandFlow::Exhausted => {
                    // the full tree fit inside one restart
                    exhausted.store(true, Ordering::Relaxed);
                    ctl.stop.store(true, Ordering::Relaxed);
                }
                RandFlow::Restart => {}
            }
        }
        meter.settle();
    };
    std::thread::scope(|scope| {
        for w in 0..cfg.workers {
            let worker = &worker;
            scope.spawn(move || worker(w));
        }
    });
    let found = found.into_inner().unwrap();
    let status = match (&found, exhausted.load(Ordering::Relaxed)) {
        (Some(_), _) => Status::Found,
        (None, true) => Status::Exhausted,
        (None, false) => Status::BudgetExceeded,
    };
    Ok(SearchOutcome {
        params: cfg.params,
        status,
        matrix: found.as_deref().map(|rows| certify(sp, rows)),
        nodes_explored: ctl.nodes.load(Ordering::Relaxed),
        elapsed: start.elapsed(),
        pruned_by_bound: false,
        tasks_total: 0,
        tasks_done: 0,
        frontier: None,
    })
}

/// Every canonical solution, in search order, up to `limit`.
pub fn enumerate_canonical(params: AontParams, limit: usize) -> Result<Vec<Matrix>, SearchError> {
    let sp = Space::new(params)?;
    let ctl = Control::new(Budget::unlimited(), u64::MAX, 0);
    let mut meter = Meter::new(&ctl);
    let mut st = State::new(&sp);
    let mut out = Vec::new();
    explore(&mut st, &mut meter, None, &mut Some(&mut out))?;
    Ok(out.iter().take(limit).map(|rows| sp.matrix(rows)).collect())
}

/// Ascends `s` from `t_o` to `s_cap` using `template` for strategy, budget
/// and workers. A found matrix raises the lower end; an exhausted run ends
/// the ascent; a run out of budget leaves the interval open.
pub fn compute_s(ti: usize, to: usize, q: u32, s_cap: usize, template: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    if s_cap < to {
        return Err(SearchError::BadParams(format!("s_cap {s_cap} is below t_o {to}")));
    }
    let start = Instant::now();
    let mut frontier = Frontier { largest_found: None, smallest_impossible: None, exact: None };
    let mut best: Option<SearchOutcome> = None;
    let mut nodes = 0;
    let mut last_status = Status::BudgetExceeded;
    for s in to..=s_cap {
        let params = AontParams::new(ti, to, s, q).map_err(|e| SearchError::BadParams(e.to_string()))?;
        let mut cfg = template.clone();
        cfg.params = params;
        cfg.checkpoint_path = None;
        let out = search_linear_aont(&cfg)?;
        nodes += out.nodes_explored;
        last_status = out.status;
        match out.status {
            Status::Found => {
                frontier.largest_found = Some(s);
                best = Some(out);
            }
            Status::Exhausted => {
                frontier.smallest_impossible = Some(s);
                if frontier.largest_found == Some(s - 1) {
                    frontier.exact = Some(s - 1);
                }
                break;
            }
            Status::BudgetExceeded => break,
        }
    }
    let status = if frontier.exact.is_some() { Status::Exhausted } else { last_status };
    let mut out = best.unwrap_or(SearchOutcome {
        params: AontParams::new(ti, to, to, q).map_err(|e| SearchError::BadParams(e.to_string()))?,
        status,
        matrix: None,
        nodes_explored: 0,
        elapsed: Duration::ZERO,
        pruned_by_bound: false,
        tasks_total: 0,
        tasks_done: 0,
        frontier: None,
    });
    out.status = status;
    out.nodes_explored = nodes;
    out.elapsed = start.elapsed();
    out.frontier = Some(frontier);
    Ok(out)
}
