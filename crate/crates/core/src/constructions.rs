//! Family specs, theorem-predicted values and the explicit colorings that
//! realise them.
//!
//! The generators transcribe the published coloring rules as written. They
//! do not check their own output; callers run the verifier and report a
//! failing construction separately from the predicted value (see
//! [`crate::harness`]).
//!
//! Flare naming follows the corona vertex order: flare copy `k` of core
//! edge `j` is `u_{j,j+1}^k` for paths and cycles (`u_{m,1}^k` for the
//! closing cycle edge), and the `j`-th lexicographic edge for `K_m`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{LazyLock, Mutex};

use serde::{Deserialize, Serialize};

use crate::bounds::Target;
use crate::error::{Error, Result};
use crate::graph::{build_complete, build_cycle, build_path, build_tree, cut_vertices, edge_corona, Graph};
use crate::rainbow::VertexColoring;
use crate::solver::{solve_exact, SolveOptions, SolveStatus};

/// The 7-vertex tree used for the tree rvc illustration. It has five cut
/// vertices, which on seven vertices leaves exactly two leaves.
pub const EXAMPLE_TREE_T7: [(usize, usize); 6] = [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoreFamily {
    Path,
    Cycle,
    Complete,
    /// 1-based edge list; `m` is the number of edges plus one.
    Tree(Vec<(usize, usize)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlareFamily {
    Complete,
    General(Graph),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub core: CoreFamily,
    pub m: usize,
    pub flare: FlareFamily,
    pub n: usize,
}

impl FamilySpec {
    pub fn path(m: usize, n: usize) -> Self {
        FamilySpec { core: CoreFamily::Path, m, flare: FlareFamily::Complete, n }
    }

    pub fn cycle(m: usize, n: usize) -> Self {
        FamilySpec { core: CoreFamily::Cycle, m, flare: FlareFamily::Complete, n }
    }

    pub fn complete(m: usize, n: usize) -> Self {
        FamilySpec { core: CoreFamily::Complete, m, flare: FlareFamily::Complete, n }
    }

    pub fn tree(edges: Vec<(usize, usize)>, n: usize) -> Self {
        FamilySpec { m: edges.len() + 1, core: CoreFamily::Tree(edges), flare: FlareFamily::Complete, n }
    }

    pub fn core_graph(&self) -> Result<Graph> {
        match &self.core {
            CoreFamily::Path => build_path(self.m),
            CoreFamily::Cycle => build_cycle(self.m),
            CoreFamily::Complete => build_complete(self.m),
            CoreFamily::Tree(edges) => build_tree(edges),
        }
    }

    pub fn flare_graph(&self) -> Result<Graph> {
        match &self.flare {
            FlareFamily::Complete if self.n == 1 => Graph::from_edges(1, vec![]),
            FlareFamily::Complete => build_complete(self.n),
            FlareFamily::General(h) => Ok(h.clone()),
        }
    }

    pub fn build(&self) -> Result<Graph> {
        edge_corona(&self.core_graph()?, &self.flare_graph()?)
    }

    pub fn family_name(&self) -> &'static str {
        match self.core {
            CoreFamily::Path => "path",
            CoreFamily::Cycle => "cycle",
            CoreFamily::Complete => "complete",
            CoreFamily::Tree(_) => "tree",
        }
    }

    fn flare_is_complete(&self) -> bool {
        match &self.flare {
            FlareFamily::Complete => true,
            FlareFamily::General(h) => h.size() == h.order() * (h.order() - 1) / 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Predicted {
    Exact(u32),
    Bounds { lower: u32, upper: u32 },
}

impl fmt::Display for Predicted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicted::Exact(v) => write!(f, "{v}"),
            Predicted::Bounds { lower, upper } => write!(f, "{lower}..{upper}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictedValue {
    pub target: Target,
    pub value: Predicted,
    pub branch: String,
}

impl PredictedValue {
    fn exact(target: Target, value: usize, branch: &str) -> Self {
        PredictedValue { target, value: Predicted::Exact(value as u32), branch: branch.into() }
    }

    pub fn exact_value(&self) -> Option<u32> {
        match self.value {
            Predicted::Exact(v) => Some(v),
            Predicted::Bounds { .. } => None,
        }
    }
}

pub(crate) fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

type EdgeListKey = (usize, Vec<(usize, usize)>);

static RVC_CACHE: LazyLock<Mutex<BTreeMap<EdgeListKey, u32>>> = LazyLock::new(|| Mutex::new(BTreeMap::new()));

/// Exact rvc of a bare core graph, memoised by edge list.
pub fn cached_rvc(core: &Graph) -> Result<u32> {
    let key = (core.order(), core.edges().to_vec());
    if let Some(&v) = RVC_CACHE.lock().unwrap().get(&key) {
        return Ok(v);
    }
    let res = solve_exact(core, Target::Rvc, &SolveOptions::default())?;
    if res.status != SolveStatus::Proved {
        return Err(Error::InvalidParameter(format!(
            "rvc of the {}-vertex core not proved within budget",
            core.order()
        )));
    }
    RVC_CACHE.lock().unwrap().insert(key, res.value);
    Ok(res.value)
}

/// Value predicted by the theorem covering `spec`, with the branch that fired.
pub fn predict(spec: &FamilySpec, target: Target) -> Result<PredictedValue> {
    let (m, n) = (spec.m, spec.n);
    let unsupported =
        |why: &str| Err(Error::UnsupportedSpec(format!("{} m={m} n={n} {target}: {why}", spec.family_name())));
    if n < 2 {
        return unsupported("flare order must be at least 2");
    }
    match (&spec.core, target) {
        (CoreFamily::Path | CoreFamily::Tree(_), Target::Rvc) => {
            let core = spec.core_graph()?;
            Ok(PredictedValue::exact(target, cached_rvc(&core)? as usize, "rvc(T_m)"))
        }
        (CoreFamily::Path, Target::Rvcl) => {
            if !spec.flare_is_complete() {
                return unsupported("rvcl theorems need a complete flare");
            }
            let rvc = cached_rvc(&spec.core_graph()?)? as usize;
            Ok(PredictedValue::exact(target, rvc.max(n + 2), "max{rvc(P_m),n+2}"))
        }
        (CoreFamily::Tree(_), Target::Rvcl) => {
            if !spec.flare_is_complete() {
                return unsupported("rvcl theorems need a complete flare");
            }
            let rvc = cached_rvc(&spec.core_graph()?)?;
            Ok(PredictedValue {
                target,
                value: Predicted::Bounds { lower: rvc.max(n as u32 + 2), upper: (2 * m + n - 2) as u32 },
                branch: "max{rvc(T_m),n+2}..2m+n-2".into(),
            })
        }
        (CoreFamily::Cycle, Target::Rvc) => {
            if m < 3 {
                return unsupported("cycles need m >= 3");
            }
            Ok(if m == 3 {
                PredictedValue::exact(target, 1, "m=3")
            } else {
                PredictedValue::exact(target, ceil_div(m, 2), "m>=4")
            })
        }
        (CoreFamily::Cycle, Target::Rvcl) => {
            if m < 3 {
                return unsupported("cycles need m >= 3");
            }
            if !spec.flare_is_complete() {
                return unsupported("rvcl theorems need a complete flare");
            }
            Ok(PredictedValue::exact(target, cycle_rvcl_value(m, n), cycle_rvcl_branch(m, n).tag()))
        }
        (CoreFamily::Complete, Target::Rvc) => {
            if m < 3 {
                return unsupported("the complete-core rvc theorem needs m >= 3");
            }
            Ok(PredictedValue::exact(target, ceil_div(m, 3), "ceil(m/3)"))
        }
        (CoreFamily::Complete, Target::Rvcl) => {
            if m < 3 || m > n {
                return unsupported("the complete-core rvcl theorem needs 3 <= m <= n");
            }
            if !spec.flare_is_complete() {
                return unsupported("rvcl theorems need a complete flare");
            }
            let edges = m * (m - 1) / 2;
            Ok(if n + 1 >= edges {
                PredictedValue::exact(target, n + 1, "n>=|E(K_m)|-1")
            } else {
                PredictedValue::exact(target, n + 2, "n<|E(K_m)|-1")
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleRvclBranch {
    /// `m = 3`, or `m >= 4` and `n >= m - 1`.
    NPlusOne,
    /// `m >= 4` and `ceil(m/2) - 1 <= n < m - 1`.
    Middle,
    /// `m >= 5` and `n <= ceil(m/2) - 2`.
    HalfCycle,
}

impl CycleRvclBranch {
    pub fn tag(self) -> &'static str {
        match self {
            CycleRvclBranch::NPlusOne => "n+1",
            CycleRvclBranch::Middle => "max{ceil(m/2)+1,n+2}",
            CycleRvclBranch::HalfCycle => "ceil(m/2)",
        }
    }
}

/// Branch of the cycle rvcl theorem; `m >= 3`, `n >= 2`.
pub fn cycle_rvcl_branch(m: usize, n: usize) -> CycleRvclBranch {
    let h = ceil_div(m, 2);
    if m == 3 || n + 1 >= m {
        CycleRvclBranch::NPlusOne
    } else if n + 1 >= h {
        CycleRvclBranch::Middle
    } else {
        CycleRvclBranch::HalfCycle
    }
}

fn cycle_rvcl_value(m: usize, n: usize) -> usize {
    let h = ceil_div(m, 2);
    match cycle_rvcl_branch(m, n) {
        CycleRvclBranch::NPlusOne => n + 1,
        CycleRvclBranch::Middle => (h + 1).max(n + 2),
        CycleRvclBranch::HalfCycle => h,
    }
}

/// Output of a generator: the palette size the rule declares and the raw
/// color of every corona vertex. The raw colors may leave some of the
/// declared palette unused when a printed rule is defective.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratedColoring {
    pub declared_k: u32,
    pub colors: Vec<u32>,
}

impl GeneratedColoring {
    fn new(declared_k: usize, colors: Vec<u32>) -> Self {
        GeneratedColoring { declared_k: declared_k as u32, colors }
    }

    /// Number of distinct colors actually used.
    pub fn used_colors(&self) -> u32 {
        let mut c = self.colors.clone();
        c.sort_unstable();
        c.dedup();
        c.len() as u32
    }

    /// The coloring with `k = declared_k`; fails if a color is out of the
    /// palette or never used.
    pub fn coloring(&self) -> Result<VertexColoring> {
        VertexColoring::new(self.declared_k, self.colors.clone())
    }
}

/// Corona vertex id of flare copy `copy` (1-based) on core edge `edge` (1-based).
fn flare_id(m: usize, n: usize, edge: usize, copy: usize) -> usize {
    m + (edge - 1) * n + (copy - 1)
}

/// Core colored `1..=m`, flare `j` colored `m+j .. m+j+n-1`.
pub fn color_upper_general(core: &Graph, n: usize) -> Result<GeneratedColoring> {
    if core.size() == 0 || n < 1 {
        return Err(Error::InvalidParameter("need a core with an edge and n >= 1".into()));
    }
    let m = core.order();
    let mut colors: Vec<u32> = (1..=m as u32).collect();
    for j in 1..=core.size() {
        colors.extend((0..n).map(|k| (m + j + k) as u32));
    }
    Ok(GeneratedColoring::new(m + n + core.size() - 1, colors))
}

/// Cut vertices of the tree get distinct colors `1..=c`; everything else is 1.
pub fn color_tree_rvc(core_tree: &Graph, flare: &Graph) -> Result<GeneratedColoring> {
    let m = core_tree.order();
    if m < 2 || core_tree.size() != m - 1 {
        return Err(Error::InvalidTree("core is not a tree on at least two vertices".into()));
    }
    let order = m + core_tree.size() * flare.order();
    let mut colors = vec![1u32; order];
    let cuts = cut_vertices(core_tree);
    for (i, &v) in cuts.iter().enumerate() {
        colors[v] = i as u32 + 1;
    }
    Ok(GeneratedColoring::new(cuts.len().max(1), colors))
}

/// Coloring of `P_m ⋄ K_n` with `max{rvc(P_m), n+2}` colors.
pub fn color_path_rvcl(m: usize, n: usize) -> Result<GeneratedColoring> {
    if m < 2 || n < 2 {
        return Err(Error::UnsupportedSpec(format!("path rvcl coloring needs m >= 2, n >= 2 (got m={m}, n={n})")));
    }
    if m == 2 {
        return Ok(GeneratedColoring::new(n + 2, (1..=(n + 2) as u32).collect()));
    }
    let palette = (cached_rvc(&build_path(m)?)? as usize).max(n + 2);
    let mut colors = vec![0u32; m + (m - 1) * n];
    for i in 1..=m {
        colors[i - 1] = match i {
            1 => 1,
            _ if i == m => (m - 2) as u32,
            _ => (i - 1) as u32,
        };
    }
    for i in 1..m {
        for j in 1..=n {
            colors[flare_id(m, n, i, j)] = if i == 1 { j + 1 } else { (i + j - 2) % palette + 1 } as u32;
        }
    }
    Ok(GeneratedColoring::new(palette, colors))
}

/// Rainbow vertex coloring of `C_m ⋄ H`: core vertex `i` gets
/// `((i-1) mod ceil(m/2)) + 1`, flares get 1; all ones when `m = 3`.
pub fn color_cycle_rvc(m: usize, flare: &Graph) -> Result<GeneratedColoring> {
    if m < 3 {
        return Err(Error::UnsupportedSpec(format!("cycle needs m >= 3, got {m}")));
    }
    let mut colors = vec![1u32; m + m * flare.order()];
    if m == 3 {
        return Ok(GeneratedColoring::new(1, colors));
    }
    let h = ceil_div(m, 2);
    for i in 1..=m {
        colors[i - 1] = ((i - 1) % h + 1) as u32;
    }
    Ok(GeneratedColoring::new(h, colors))
}

type CycleTable = (usize, usize, &'static [u32], &'static [&'static [u32]]);

/// Explicit colorings for the middle branch on small cycles (`m <= 6`), as
/// `(m, n, core colors, flare colors by edge)`. Each is an `(n+2)`-coloring
/// found by exhaustive search and checked by the verifier in the tests.
#[rustfmt::skip]
const SMALL_CYCLE_TABLES: &[CycleTable] = &[
    (4, 2, &[1, 1, 1, 2], &[&[1, 2], &[1, 2], &[2, 3], &[2, 4]]),
    (5, 2, &[1, 1, 1, 2, 3], &[&[1, 2], &[1, 2], &[2, 4], &[1, 2], &[1, 3]]),
    (5, 3, &[1, 1, 1, 2, 3], &[&[1, 2, 3], &[1, 2, 3], &[1, 2, 4], &[1, 2, 5], &[1, 3, 5]]),
    (6, 2, &[1, 1, 1, 2, 3, 4], &[&[1, 2], &[1, 2], &[2, 3], &[1, 3], &[1, 2], &[1, 4]]),
    (6, 3, &[1, 1, 1, 2, 3, 4], &[&[1, 2, 3], &[1, 2, 3], &[1, 2, 5], &[1, 2, 4], &[1, 3, 4], &[1, 2, 3]]),
    (6, 4, &[1, 1, 1, 2, 3, 4], &[&[1, 2, 3, 4], &[1, 2, 3, 4], &[1, 2, 3, 4], &[1, 2, 3, 5], &[1, 2, 3, 4], &[1, 2, 4, 6]]),
];

/// Coloring of `C_m ⋄ K_n` with the cycle rvcl theorem's color count.
pub fn color_cycle_rvcl(m: usize, n: usize) -> Result<GeneratedColoring> {
    if m < 3 || n < 2 {
        return Err(Error::UnsupportedSpec(format!("cycle rvcl coloring needs m >= 3, n >= 2 (got m={m}, n={n})")));
    }
    let h = ceil_div(m, 2);
    let f = m / 2;
    let branch = cycle_rvcl_branch(m, n);
    let palette = cycle_rvcl_value(m, n);
    let mut colors = vec![0u32; m + m * n];

    if branch == CycleRvclBranch::Middle && m <= 6 {
        let (_, _, core, flares) = SMALL_CYCLE_TABLES
            .iter()
            .find(|(tm, tn, _, _)| (*tm, *tn) == (m, n))
            .ok_or_else(|| Error::UnsupportedSpec(format!("no explicit table for C_{m} ⋄ K_{n}")))?;
        colors[..m].copy_from_slice(core);
        for (i, flare) in flares.iter().enumerate() {
            for (k, &c) in flare.iter().enumerate() {
                colors[flare_id(m, n, i + 1, k + 1)] = c;
            }
        }
        return Ok(GeneratedColoring::new(palette, colors));
    }

    let core_mod = match branch {
        CycleRvclBranch::NPlusOne => None,
        _ => Some(h),
    };
    for i in 1..=m {
        colors[i - 1] = match core_mod {
            None => i as u32,
            Some(q) => ((i - 1) % q + 1) as u32,
        };
    }

    let in_range = |x: usize, lo: usize, hi: usize| lo <= x && x <= hi;
    for i in 1..=m {
        for k in 1..=n {
            let s = i + k - 2; // i + (k - 2)
            let c = match branch {
                CycleRvclBranch::NPlusOne => Some(s % (n + 1) + 1),
                CycleRvclBranch::Middle => {
                    // Sub-case (a) n = ceil(m/2) - 1 cycles through ceil(m/2) + 1 colors,
                    // sub-case (b) through n + 2.
                    let (first_mod, second_mod) = if n + 1 == h { (h, h + 1) } else { (n + 1, n + 2) };
                    if (in_range(i, 1, h.saturating_sub(2)) || in_range(i, h, m)) && s < m {
                        Some(s % first_mod + 1)
                    } else if i + 1 == h && s <= m {
                        Some(s % second_mod + 1)
                    } else if in_range(i, f + 1, m) && s >= m {
                        Some(s % m + 1)
                    } else {
                        None
                    }
                }
                CycleRvclBranch::HalfCycle if n % 2 == 1 => {
                    if in_range(i, 1, f.saturating_sub(1)) {
                        Some(s % f + 1)
                    } else if in_range(i, f, m) && i + k - 1 <= m {
                        Some(s % (f + 1) + 1)
                    } else if in_range(i, f + 1, m) && s >= m {
                        Some(s % m + 1)
                    } else {
                        None
                    }
                }
                CycleRvclBranch::HalfCycle => {
                    // The even-n rule's modulus m/2 is read as ceil(m/2), matching the core rule.
                    let half = h;
                    if in_range(i, 1, half) {
                        Some(s % half + 1)
                    } else if in_range(i, half + 1, m) && k < n && i + k - 1 < m {
                        Some((i + k - 1) % half + 1)
                    } else if in_range(i, half + 1, m) && k == n && i + k < m {
                        Some((i + k) % half + 1)
                    } else if in_range(i, half + 1, m) && k < n && i + k > m {
                        Some((i + k - 1) % m + 1)
                    } else if in_range(i, half + 1, m) && k == n && i + k >= m {
                        Some((i + k) % m + 1)
                    } else {
                        None
                    }
                }
            };
            colors[flare_id(m, n, i, k)] = c.ok_or(Error::FormulaCoverage { edge: i, copy: k })? as u32;
        }
    }
    Ok(GeneratedColoring::new(palette, colors))
}

/// Rainbow vertex coloring of `K_m ⋄ H` with `ceil(m/3)` colors.
pub fn color_complete_rvc(m: usize, flare: &Graph) -> Result<GeneratedColoring> {
    if m < 3 {
        return Err(Error::UnsupportedSpec(format!("complete-core rvc coloring needs m >= 3, got {m}")));
    }
    let t = ceil_div(m, 3);
    let edges = m * (m - 1) / 2;
    let mut colors = vec![1u32; m + edges * flare.order()];
    for i in 1..=m {
        colors[i - 1] = if i <= 2 * t { (i - 1) % t + 1 } else { i % (2 * t) } as u32;
    }
    Ok(GeneratedColoring::new(t, colors))
}

/// Locating rainbow coloring of `K_m ⋄ K_n`, `3 <= m <= n`.
///
/// Core vertex `i` gets color `i`. Flares, in edge order, take the first
/// unused `n`-subset of the palette (colex order) that contains both
/// endpoint colors, backtracking when a later flare runs out of sets.
pub fn color_complete_rvcl(m: usize, n: usize) -> Result<GeneratedColoring> {
    if m < 3 || m > n {
        return Err(Error::UnsupportedSpec(format!(
            "complete-core rvcl coloring needs 3 <= m <= n (got m={m}, n={n})"
        )));
    }
    let core = build_complete(m)?;
    let edges = core.size();
    let palette = if n + 1 >= edges { n + 1 } else { n + 2 };
    if palette > 64 {
        return Err(Error::InvalidParameter(format!("palette of {palette} colors is too large")));
    }
    // Bit c-1 stands for color c; numeric order of masks is colex order.
    let subsets: Vec<u64> = subsets_of_size(palette, n);
    let candidates: Vec<Vec<u64>> = core
        .edges()
        .iter()
        .map(|&(a, b)| {
            let need = (1u64 << a) | (1u64 << b);
            subsets.iter().copied().filter(|s| s & need == need).collect()
        })
        .collect();

    let mut chosen = Vec::with_capacity(edges);
    if !pick_sets(&candidates, &mut chosen) {
        return Err(Error::InfeasibleAssignment(format!(
            "no pairwise distinct {n}-sets over {palette} colors cover the edges of K_{m}"
        )));
    }
    let mut colors: Vec<u32> = (1..=m as u32).collect();
    for set in chosen {
        colors.extend((0..palette).filter(|c| set >> c & 1 == 1).map(|c| c as u32 + 1));
    }
    Ok(GeneratedColoring::new(palette, colors))
}

fn subsets_of_size(universe: usize, size: usize) -> Vec<u64> {
    let mut out: Vec<u64> = (0u64..1 << universe).filter(|s| s.count_ones() as usize == size).collect();
    out.sort_unstable();
    out
}

fn pick_sets(candidates: &[Vec<u64>], chosen: &mut Vec<u64>) -> bool {
    let p = chosen.len();
    if p == candidates.len() {
        return true;
    }
    for &s in &candidates[p] {
        if chosen.contains(&s) {
            continue;
        }
        chosen.push(s);
        if pick_sets(candidates, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}
