//! Exact rvc / rvcl by backtracking over canonical surjective colorings.
//!
//! Colors are assigned along a fixed vertex order (descending degree, ties
//! by id). A vertex may take color `c` only if `c <= max_used + 1`, which
//! visits exactly one coloring per orbit of color relabelling.
//!
//! Partial assignments are pruned with two observations:
//!
//! * Giving every unassigned vertex its own fresh color refines every
//!   completion of the partial coloring. Both the rainbow-path property and
//!   code distinctness survive refinement, so if this "optimistic" coloring
//!   already fails, every completion fails too.
//! * For rvcl, twins must receive distinct colors.
//!
//! Once every vertex is assigned the optimistic coloring is the coloring
//! itself, so the pruning checks double as the leaf check.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{lower_bound, Target};
use crate::error::{Error, Result};
use crate::graph::{all_pairs_distances, twin_classes, DistanceMatrix, Graph, Vertex};
use crate::rainbow::{Verifier, VertexColoring};

/// Largest graph the search engine accepts (bitmask width).
pub const MAX_SEARCH_ORDER: usize = 128;

/// Explored-node and wall-clock limits shared by one solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_time: Duration,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_nodes: 100_000_000, max_time: Duration::from_secs(300) }
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub budget: Budget,
    /// 1 runs the deterministic single-threaded search.
    pub workers: usize,
    pub twin_pruning: bool,
    pub partial_pruning: bool,
    /// Refuse graphs above this order unless `force` is set.
    pub size_cap: Option<usize>,
    pub force: bool,
    /// Known valid coloring, reported if the budget runs out.
    pub hint: Option<VertexColoring>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            budget: Budget::default(),
            workers: 1,
            twin_pruning: true,
            partial_pruning: true,
            size_cap: None,
            force: false,
            hint: None,
        }
    }
}

/// Default size caps: rvcl search is far more expensive than rvc.
pub fn default_size_cap(target: Target) -> usize {
    match target {
        Target::Rvc => 32,
        Target::Rvcl => 18,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Found(VertexColoring),
    /// The canonical search space at this k was exhausted.
    Infeasible,
    BudgetExhausted,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub elapsed: Duration,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    /// Witness at `value` and every smaller k refuted by search or bound.
    Proved,
    /// Budget ran out; the witness is a known valid coloring, minimality unproved.
    UpperWitnessOnly,
    /// Budget ran out; only the trivial all-distinct witness is available.
    BudgetExhausted,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub target: Target,
    pub value: u32,
    pub witness: VertexColoring,
    pub status: SolveStatus,
    /// Certified lower end of the bracket (equals `value` when proved).
    pub lower: u32,
    /// Bound rule that seeded the ladder.
    pub lower_bound: u32,
    pub lower_bound_rule: String,
    pub nodes_explored: u64,
    pub elapsed: Duration,
}

/// Searches for a `k`-coloring of `g` satisfying `target`.
pub fn feasible_with_k(g: &Graph, target: Target, k: u32, opts: &SolveOptions) -> Result<(Feasibility, SearchStats)> {
    let dm = all_pairs_distances(g);
    let ctx = Context::new(g, &dm, target, k, opts)?;
    let clock = Clock::new(opts.budget);
    let outcome = ctx.run(opts.workers, &clock);
    let stats = SearchStats { nodes: clock.nodes.load(Ordering::Relaxed), elapsed: clock.start.elapsed() };
    Ok((outcome, stats))
}

/// Least k admitting a coloring for `target`, starting from the bounds
/// module's certified lower bound.
pub fn solve_exact(g: &Graph, target: Target, opts: &SolveOptions) -> Result<SolveResult> {
    if let Some(cap) = opts.size_cap {
        if g.order() > cap && !opts.force {
            return Err(Error::InvalidParameter(format!(
                "graph has {} vertices, above the {target} size cap of {cap}",
                g.order()
            )));
        }
    }
    let dm = all_pairs_distances(g);
    let bounds = lower_bound(g, &dm, target);
    let seed = bounds.lower.max(1);
    let rule = bounds.lower_rule().unwrap_or("trivial").to_string();
    let clock = Clock::new(opts.budget);
    let verifier = Verifier::with_distances(g, dm.clone());

    for k in seed..=g.order() as u32 {
        let ctx = Context::new(g, &dm, target, k, opts)?;
        match ctx.run(opts.workers, &clock) {
            Feasibility::Found(witness) => {
                assert!(witness_valid(&verifier, target, &witness), "search produced an invalid witness");
                return Ok(SolveResult {
                    target,
                    value: k,
                    witness,
                    status: SolveStatus::Proved,
                    lower: k,
                    lower_bound: seed,
                    lower_bound_rule: rule,
                    nodes_explored: clock.nodes.load(Ordering::Relaxed),
                    elapsed: clock.start.elapsed(),
                });
            }
            Feasibility::Infeasible => continue,
            Feasibility::BudgetExhausted => {
                let hint =
                    opts.hint.as_ref().filter(|h| h.len() == g.order() && witness_valid(&verifier, target, h)).cloned();
                let (status, witness) = match hint {
                    Some(h) => (SolveStatus::UpperWitnessOnly, h),
                    None => (SolveStatus::BudgetExhausted, VertexColoring::all_distinct(g.order())),
                };
                return Ok(SolveResult {
                    target,
                    value: witness.k(),
                    witness,
                    status,
                    lower: k,
                    lower_bound: seed,
                    lower_bound_rule: rule,
                    nodes_explored: clock.nodes.load(Ordering::Relaxed),
                    elapsed: clock.start.elapsed(),
                });
            }
        }
    }
    unreachable!("the all-distinct coloring satisfies both targets")
}

fn witness_valid(v: &Verifier<'_>, target: Target, c: &VertexColoring) -> bool {
    match target {
        Target::Rvc => v.check_rainbow(c).map(|f| f.is_none()).unwrap_or(false),
        Target::Rvcl => v.is_locating_rainbow_coloring(c).map(|r| r.is_locating_rainbow()).unwrap_or(false),
    }
}

/// Number of canonical surjective `k`-colorings of `g`'s vertex set as
/// enumerated by the search (no pruning, no property check).
pub fn count_canonical_colorings(g: &Graph, k: u32) -> u64 {
    let dm = all_pairs_distances(g);
    let opts = SolveOptions { twin_pruning: false, partial_pruning: false, ..SolveOptions::default() };
    let ctx = Context::new(g, &dm, Target::Rvc, k, &opts).expect("valid k");
    let mut st = State::new(&ctx);
    let mut count = 0;
    ctx.count(&mut st, 0, &mut count);
    count
}

struct Clock {
    budget: Budget,
    start: Instant,
    nodes: AtomicU64,
    stop: AtomicBool,
    exhausted: AtomicBool,
}

impl Clock {
    fn new(budget: Budget) -> Self {
        Clock {
            budget,
            start: Instant::now(),
            nodes: AtomicU64::new(0),
            stop: AtomicBool::new(false),
            exhausted: AtomicBool::new(false),
        }
    }

    /// Adds `batch` nodes; returns false when the search must stop.
    fn tick(&self, batch: u64) -> bool {
        let total = self.nodes.fetch_add(batch, Ordering::Relaxed) + batch;
        if total > self.budget.max_nodes || self.start.elapsed() > self.budget.max_time {
            self.exhausted.store(true, Ordering::Relaxed);
            self.stop.store(true, Ordering::Relaxed);
        }
        !self.stop.load(Ordering::Relaxed)
    }
}

const TICK: u64 = 1024;

struct Context<'a> {
    g: &'a Graph,
    dm: &'a DistanceMatrix,
    n: usize,
    k: u32,
    target: Target,
    order: Vec<Vertex>,
    adj_mask: Vec<u128>,
    /// For the vertex at each position, its twins placed earlier.
    earlier_twins: Vec<Vec<Vertex>>,
    /// Pairs at distance >= 3 (closer pairs are always rainbow-connected).
    far_pairs: Vec<(Vertex, Vertex)>,
    /// Pairs sorted by the position after which no unassigned vertex
    /// separates them by distance.
    released: Vec<(usize, Vertex, Vertex)>,
    partial_pruning: bool,
}

enum Step {
    Found,
    Exhausted,
    Stopped,
}

impl<'a> Context<'a> {
    fn new(g: &'a Graph, dm: &'a DistanceMatrix, target: Target, k: u32, opts: &SolveOptions) -> Result<Self> {
        let n = g.order();
        if n > MAX_SEARCH_ORDER {
            return Err(Error::InvalidParameter(format!("search supports at most {MAX_SEARCH_ORDER} vertices")));
        }
        if k == 0 || k as usize > n {
            return Err(Error::InvalidParameter(format!("k={k} outside 1..={n}")));
        }
        let mut order: Vec<Vertex> = g.vertices().collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let adj_mask = g.vertices().map(|v| g.neighbors(v).iter().fold(0u128, |m, &w| m | 1 << w)).collect();

        let twin_pruning = opts.twin_pruning && target == Target::Rvcl;
        let mut earlier_twins = vec![Vec::new(); n];
        if twin_pruning {
            for class in twin_classes(g, dm).nontrivial() {
                for &a in class {
                    for &b in class {
                        if pos[b] < pos[a] {
                            earlier_twins[pos[a]].push(b);
                        }
                    }
                }
            }
        }

        let far_pairs =
            (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).filter(|&(a, b)| dm.get(a, b) >= 3).collect();

        let mut released = Vec::new();
        if target == Target::Rvcl {
            for a in 0..n {
                for b in a + 1..n {
                    let rel = g
                        .vertices()
                        .filter(|&y| y != a && y != b && dm.get(a, y) != dm.get(b, y))
                        .map(|y| pos[y])
                        .chain([pos[a], pos[b]])
                        .max()
                        .unwrap();
                    released.push((rel, a, b));
                }
            }
            released.sort_unstable();
        }

        Ok(Context {
            g,
            dm,
            n,
            k,
            target,
            order,
            adj_mask,
            earlier_twins,
            far_pairs,
            released,
            partial_pruning: opts.partial_pruning,
        })
    }

    fn run(&self, workers: usize, clock: &Clock) -> Feasibility {
        clock.stop.store(false, Ordering::Relaxed);
        if workers <= 1 {
            let mut st = State::new(self);
            let step = self.search(&mut st, 0, clock);
            clock.nodes.fetch_add(st.pending, Ordering::Relaxed);
            return match step {
                Step::Found => Feasibility::Found(st.coloring(self.k)),
                Step::Exhausted => Feasibility::Infeasible,
                Step::Stopped => Feasibility::BudgetExhausted,
            };
        }

        // Fan out over canonical prefixes deep enough to keep every worker busy.
        let mut depth = 1;
        let mut prefixes = self.prefixes(depth);
        while prefixes.len() < 4 * workers && depth < self.n {
            depth += 1;
            prefixes = self.prefixes(depth);
        }
        let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool");
        let results: Vec<(Step, Option<VertexColoring>)> = pool.install(|| {
            prefixes
                .par_iter()
                .map(|prefix| {
                    if clock.stop.load(Ordering::Relaxed) {
                        return (Step::Stopped, None);
                    }
                    let mut st = State::new(self);
                    for (t, &c) in prefix.iter().enumerate() {
                        st.assign(self, t, c);
                    }
                    let step = self.search(&mut st, prefix.len(), clock);
                    clock.nodes.fetch_add(st.pending, Ordering::Relaxed);
                    match step {
                        Step::Found => {
                            clock.stop.store(true, Ordering::Relaxed);
                            (Step::Found, Some(st.coloring(self.k)))
                        }
                        other => (other, None),
                    }
                })
                .collect()
        });
        if let Some(c) = results.iter().find_map(|(_, c)| c.clone()) {
            return Feasibility::Found(c);
        }
        if clock.exhausted.load(Ordering::Relaxed) || results.iter().any(|(s, _)| matches!(s, Step::Stopped)) {
            Feasibility::BudgetExhausted
        } else {
            Feasibility::Infeasible
        }
    }

    /// Canonical partial assignments of the first `depth` positions that
    /// survive pruning, in search order.
    fn prefixes(&self, depth: usize) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        let mut st = State::new(self);
        self.collect_prefixes(&mut st, 0, depth, &mut out);
        out
    }

    fn collect_prefixes(&self, st: &mut State, t: usize, depth: usize, out: &mut Vec<Vec<u8>>) {
        if t == depth {
            out.push(self.order[..depth].iter().map(|&v| st.colors[v]).collect());
            return;
        }
        for c in self.choices(st, t) {
            let mark = st.assign(self, t, c);
            if self.partial_ok(st, t) {
                self.collect_prefixes(st, t + 1, depth, out);
            }
            st.undo(self, mark);
        }
    }

    fn choices(&self, st: &State, t: usize) -> Vec<u8> {
        let remaining_after = (self.n - t - 1) as u32;
        let limit = (st.max_used + 1).min(self.k);
        let twins = &self.earlier_twins[t];
        (1..=limit)
            // Every color must still be reachable by the remaining vertices.
            .filter(|&c| remaining_after >= self.k - st.max_used.max(c))
            .filter(|&c| twins.iter().all(|&w| st.colors[w] as u32 != c))
            .map(|c| c as u8)
            .collect()
    }

    fn search(&self, st: &mut State, t: usize, clock: &Clock) -> Step {
        if t == self.n {
            return if self.leaf_ok(st) { Step::Found } else { Step::Exhausted };
        }
        for c in self.choices(st, t) {
            st.pending += 1;
            if st.pending >= TICK {
                let ok = clock.tick(st.pending);
                st.pending = 0;
                if !ok {
                    return Step::Stopped;
                }
            }
            let mark = st.assign(self, t, c);
            if self.partial_ok(st, t) {
                match self.search(st, t + 1, clock) {
                    Step::Found => return Step::Found,
                    Step::Stopped => {
                        st.undo(self, mark);
                        return Step::Stopped;
                    }
                    Step::Exhausted => {}
                }
            }
            st.undo(self, mark);
        }
        Step::Exhausted
    }

    fn count(&self, st: &mut State, t: usize, count: &mut u64) {
        if t == self.n {
            *count += 1;
            return;
        }
        for c in self.choices(st, t) {
            let mark = st.assign(self, t, c);
            self.count(st, t + 1, count);
            st.undo(self, mark);
        }
    }

    fn leaf_ok(&self, st: &mut State) -> bool {
        debug_assert_eq!(st.max_used, self.k);
        if self.partial_pruning {
            // The last partial check ran on the complete coloring.
            return true;
        }
        let c = st.coloring(self.k);
        let v = Verifier::with_distances(self.g, self.dm.clone());
        witness_valid(&v, self.target, &c)
    }

    fn partial_ok(&self, st: &mut State, t: usize) -> bool {
        if !self.partial_pruning {
            return true;
        }
        if self.target == Target::Rvcl && !self.codes_distinct(st, t) {
            return false;
        }
        self.rainbow_possible(st)
    }

    fn codes_distinct(&self, st: &State, t: usize) -> bool {
        let k = self.k as usize;
        for &(rel, a, b) in &self.released {
            if rel > t {
                break;
            }
            if st.colors[a] == st.colors[b] && st.class_dist[a * k..(a + 1) * k] == st.class_dist[b * k..(b + 1) * k] {
                return false;
            }
        }
        true
    }

    fn rainbow_possible(&self, st: &mut State) -> bool {
        for i in 0..self.far_pairs.len() {
            if st.satisfied[i] {
                continue;
            }
            let (a, b) = self.far_pairs[i];
            if self.path(st, a, b, 1 << a, 0, 0, false) {
                st.satisfied[i] = true;
                st.satisfied_log.push(i);
            } else if !self.path(st, a, b, 1 << a, 0, 0, true) {
                return false;
            }
        }
        true
    }

    /// Rainbow path search; with `wild`, unassigned internal vertices are
    /// allowed and treated as carrying fresh colors.
    #[allow(clippy::too_many_arguments)]
    fn path(
        &self,
        st: &State,
        cur: Vertex,
        target: Vertex,
        visited: u128,
        used: u128,
        internals: u32,
        wild: bool,
    ) -> bool {
        if self.adj_mask[cur] >> target & 1 == 1 {
            return true;
        }
        for &w in self.g.neighbors(cur) {
            if visited >> w & 1 == 1 || internals + self.dm.get(w, target) > self.k {
                continue;
            }
            let col = st.colors[w];
            let bit = if col == 0 {
                if !wild {
                    continue;
                }
                0
            } else {
                let bit = 1u128 << col;
                if used & bit != 0 {
                    continue;
                }
                bit
            };
            if self.path(st, w, target, visited | 1 << w, used | bit, internals + 1, wild) {
                return true;
            }
        }
        false
    }
}

struct State {
    colors: Vec<u8>,
    max_used: u32,
    /// `class_dist[v * k + c - 1]`: distance from `v` to the assigned part of class `c`.
    class_dist: Vec<u32>,
    dist_log: Vec<(usize, u32)>,
    satisfied: Vec<bool>,
    satisfied_log: Vec<usize>,
    max_log: Vec<u32>,
    pending: u64,
}

#[derive(Clone, Copy)]
struct Mark {
    dist: usize,
    satisfied: usize,
    vertex: Vertex,
}

impl State {
    fn new(ctx: &Context<'_>) -> Self {
        State {
            colors: vec![0; ctx.n],
            max_used: 0,
            class_dist: vec![u32::MAX; ctx.n * ctx.k as usize],
            dist_log: Vec::new(),
            satisfied: vec![false; ctx.far_pairs.len()],
            satisfied_log: Vec::new(),
            max_log: Vec::new(),
            pending: 0,
        }
    }

    fn assign(&mut self, ctx: &Context<'_>, t: usize, c: u8) -> Mark {
        let v = ctx.order[t];
        let mark = Mark { dist: self.dist_log.len(), satisfied: self.satisfied_log.len(), vertex: v };
        self.colors[v] = c;
        self.max_log.push(self.max_used);
        self.max_used = self.max_used.max(c as u32);
        if ctx.target == Target::Rvcl && ctx.partial_pruning {
            let k = ctx.k as usize;
            let slot = c as usize - 1;
            for (w, &d) in ctx.dm.row(v).iter().enumerate() {
                let idx = w * k + slot;
                if d < self.class_dist[idx] {
                    self.dist_log.push((idx, self.class_dist[idx]));
                    self.class_dist[idx] = d;
                }
            }
        }
        mark
    }

    fn undo(&mut self, _ctx: &Context<'_>, mark: Mark) {
        for (idx, old) in self.dist_log.drain(mark.dist..).rev() {
            self.class_dist[idx] = old;
        }
        for i in self.satisfied_log.drain(mark.satisfied..) {
            self.satisfied[i] = false;
        }
        self.colors[mark.vertex] = 0;
        self.max_used = self.max_log.pop().expect("balanced assign/undo");
    }

    fn coloring(&self, k: u32) -> VertexColoring {
        VertexColoring::new(k, self.colors.iter().map(|&c| c as u32).collect()).expect("complete surjective coloring")
    }
}
