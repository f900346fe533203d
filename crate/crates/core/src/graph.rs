//! Undirected simple graphs with core/flare provenance labels, the base
//! families (paths, cycles, complete graphs, trees), the edge corona, and
//! the structural queries the rest of the crate needs: hop distances,
//! articulation points and twin classes.
//!
//! Vertex ids are dense `usize` indices. For an edge corona the core
//! vertices come first in index order, followed by the flare copies in
//! `(edge_index, copy_index)` lexicographic order.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertex id, an index into [`Graph::labels`].
pub type Vertex = usize;

/// Provenance of a vertex. Both indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexLabel {
    Core(usize),
    Flare { edge: usize, copy: usize },
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexLabel::Core(i) => write!(f, "core:{i}"),
            VertexLabel::Flare { edge, copy } => write!(f, "flare:{edge}:{copy}"),
        }
    }
}

impl std::str::FromStr for VertexLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad vertex label {s:?}"));
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str| p.parse::<usize>().ok().filter(|&x| x >= 1).ok_or_else(bad);
        match parts.as_slice() {
            ["core", i] => Ok(VertexLabel::Core(num(i)?)),
            ["flare", j, k] => Ok(VertexLabel::Flare { edge: num(j)?, copy: num(k)? }),
            _ => Err(bad()),
        }
    }
}

/// A connected, undirected, simple graph.
///
/// Edges keep the order they were supplied in; edge `j` (1-based) is
/// `edges()[j - 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<VertexLabel>,
    adj: Vec<Vec<Vertex>>,
    matrix: Vec<bool>,
    edges: Vec<(Vertex, Vertex)>,
}

impl Graph {
    /// Builds a graph from labels and an ordered edge list. Rejects loops,
    /// repeated edges, out-of-range endpoints, duplicate labels and
    /// disconnected input.
    pub fn new(labels: Vec<VertexLabel>, edges: Vec<(Vertex, Vertex)>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidParameter("graph has no vertices".into()));
        }
        let mut sorted = labels.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter("duplicate vertex label".into()));
        }
        let mut adj = vec![Vec::new(); n];
        let mut matrix = vec![false; n * n];
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("loop at vertex {u}")));
            }
            if matrix[u * n + v] {
                return Err(Error::InvalidParameter(format!("repeated edge ({u},{v})")));
            }
            matrix[u * n + v] = true;
            matrix[v * n + u] = true;
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let g = Graph { labels, adj, matrix, edges };
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    /// Plain graph on `n` vertices labelled `core:1..n`.
    pub fn from_edges(n: usize, edges: Vec<(Vertex, Vertex)>) -> Result<Self> {
        Graph::new((1..=n).map(VertexLabel::Core).collect(), edges)
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    pub fn label(&self, v: Vertex) -> VertexLabel {
        self.labels[v]
    }

    pub fn vertex_by_label(&self, label: VertexLabel) -> Option<Vertex> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.matrix[u * self.order() + v]
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.order()
    }

    /// Vertices labelled `Core(_)`, in id order.
    pub fn core_vertices(&self) -> Vec<Vertex> {
        self.vertices().filter(|&v| matches!(self.labels[v], VertexLabel::Core(_))).collect()
    }

    /// Vertices of flare copy `edge` (1-based), ordered by copy index.
    pub fn flare_copy(&self, edge: usize) -> Vec<Vertex> {
        let mut vs: Vec<(usize, Vertex)> = self
            .vertices()
            .filter_map(|v| match self.labels[v] {
                VertexLabel::Flare { edge: j, copy } if j == edge => Some((copy, v)),
                _ => None,
            })
            .collect();
        vs.sort_unstable();
        vs.into_iter().map(|(_, v)| v).collect()
    }

    /// Number of distinct flare copies present in the labels.
    pub fn flare_count(&self) -> usize {
        self.labels
            .iter()
            .filter_map(|l| match l {
                VertexLabel::Flare { edge, .. } => Some(*edge),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.order()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.order()
    }
}

/// Path `u_1 .. u_m`; edge `j` joins `u_j` and `u_{j+1}`.
pub fn build_path(m: usize) -> Result<Graph> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("path needs m >= 2, got {m}")));
    }
    Graph::from_edges(m, (0..m - 1).map(|i| (i, i + 1)).collect())
}

/// Cycle `u_1 .. u_m`; edge `j < m` joins `u_j, u_{j+1}` and edge `m` joins `u_m, u_1`.
pub fn build_cycle(m: usize) -> Result<Graph> {
    if m < 3 {
        return Err(Error::InvalidParameter(format!("cycle needs m >= 3, got {m}")));
    }
    let mut edges: Vec<_> = (0..m - 1).map(|i| (i, i + 1)).collect();
    edges.push((m - 1, 0));
    Graph::from_edges(m, edges)
}

/// Complete graph with edges indexed lexicographically on `(i, j)`, `i < j`.
pub fn build_complete(m: usize) -> Result<Graph> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("complete graph needs m >= 2, got {m}")));
    }
    let edges = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    Graph::from_edges(m, edges)
}

/// Tree from 1-based vertex pairs. The vertex set is `1..=edges.len() + 1`.
pub fn build_tree(edge_list: &[(usize, usize)]) -> Result<Graph> {
    if edge_list.is_empty() {
        return Err(Error::InvalidTree("a tree needs at least one edge".into()));
    }
    let m = edge_list.len() + 1;
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut edges = Vec::with_capacity(edge_list.len());
    for &(a, b) in edge_list {
        if a == 0 || b == 0 || a > m || b > m {
            return Err(Error::InvalidTree(format!("vertex out of range 1..={m} in edge ({a},{b})")));
        }
        let (ra, rb) = (find(&mut parent, a - 1), find(&mut parent, b - 1));
        if ra == rb {
            return Err(Error::InvalidTree(format!("edge ({a},{b}) closes a cycle")));
        }
        parent[ra] = rb;
        edges.push((a - 1, b - 1));
    }
    // m - 1 edges without a cycle on m vertices is automatically connected.
    Graph::from_edges(m, edges)
}

/// Edge corona `core ⋄ flare`: one copy of `core` plus one copy of `flare`
/// per core edge, with copy `j` joined completely to both endpoints of
/// core edge `j`.
///
/// Edge order: the core edges, then for each flare `j` the joins to the
/// first endpoint, the joins to the second endpoint, then the copy's own
/// edges.
pub fn edge_corona(core: &Graph, flare: &Graph) -> Result<Graph> {
    if core.size() == 0 {
        return Err(Error::InvalidParameter("edge corona needs a core with at least one edge".into()));
    }
    let m = core.order();
    let n = flare.order();
    let mut labels: Vec<VertexLabel> = (1..=m).map(VertexLabel::Core).collect();
    let mut edges = core.edges().to_vec();
    for (j, &(a, b)) in core.edges().iter().enumerate() {
        let base = labels.len();
        labels.extend((1..=n).map(|k| VertexLabel::Flare { edge: j + 1, copy: k }));
        edges.extend((0..n).map(|k| (a, base + k)));
        edges.extend((0..n).map(|k| (b, base + k)));
        edges.extend(flare.edges().iter().map(|&(x, y)| (base + x, base + y)));
    }
    Graph::new(labels, edges)
}

/// Hop distances between every pair of vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u32>,
}

impl DistanceMatrix {
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: Vertex, v: Vertex) -> u32 {
        self.d[u * self.n + v]
    }

    pub fn row(&self, u: Vertex) -> &[u32] {
        &self.d[u * self.n..(u + 1) * self.n]
    }

    pub fn diameter(&self) -> u32 {
        self.d.iter().copied().max().unwrap_or(0)
    }
}

/// BFS from every vertex.
pub fn all_pairs_distances(g: &Graph) -> DistanceMatrix {
    let n = g.order();
    let mut d = vec![u32::MAX; n * n];
    let mut queue = VecDeque::with_capacity(n);
    for s in 0..n {
        let row = &mut d[s * n..(s + 1) * n];
        row[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if row[w] == u32::MAX {
                    row[w] = row[u] + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    // `Graph` is connected by construction, so every entry is finite.
    debug_assert!(d.iter().all(|&x| x != u32::MAX));
    DistanceMatrix { n, d }
}

pub fn diameter(g: &Graph) -> u32 {
    all_pairs_distances(g).diameter()
}

/// Articulation points in increasing id order.
pub fn cut_vertices(g: &Graph) -> Vec<Vertex> {
    let n = g.order();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut is_cut = vec![false; n];
    let mut timer = 0;

    // Iterative Hopcroft–Tarjan: (vertex, parent, next neighbour index).
    let mut stack: Vec<(Vertex, Option<Vertex>, usize)> = vec![(0, None, 0)];
    disc[0] = 0;
    low[0] = 0;
    timer += 1;
    let mut root_children = 0;
    while let Some(&mut (u, parent, ref mut next)) = stack.last_mut() {
        if *next < g.neighbors(u).len() {
            let w = g.neighbors(u)[*next];
            *next += 1;
            if disc[w] == usize::MAX {
                disc[w] = timer;
                low[w] = timer;
                timer += 1;
                if u == 0 {
                    root_children += 1;
                }
                stack.push((w, Some(u), 0));
            } else if Some(w) != parent {
                low[u] = low[u].min(disc[w]);
            }
        } else {
            stack.pop();
            if let Some(p) = parent {
                low[p] = low[p].min(low[u]);
                if p != 0 && low[u] >= disc[p] {
                    is_cut[p] = true;
                }
            }
        }
    }
    is_cut[0] = root_children > 1;
    (0..n).filter(|&v| is_cut[v]).collect()
}

/// `w` and `z` are twins: adjacent and equidistant from every other vertex.
pub fn are_twins(g: &Graph, dm: &DistanceMatrix, w: Vertex, z: Vertex) -> bool {
    w != z && g.adjacent(w, z) && g.vertices().all(|y| y == w || y == z || dm.get(w, y) == dm.get(z, y))
}

/// Partition of the vertex set into maximal twin classes, singletons
/// included. Classes are listed by smallest member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwinPartition {
    pub classes: Vec<Vec<Vertex>>,
}

impl TwinPartition {
    /// Classes with at least two members.
    pub fn nontrivial(&self) -> impl Iterator<Item = &Vec<Vertex>> {
        self.classes.iter().filter(|c| c.len() > 1)
    }

    pub fn largest(&self) -> usize {
        self.classes.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Twin classes by direct evaluation of the twin predicate on every pair.
pub fn twin_classes(g: &Graph, dm: &DistanceMatrix) -> TwinPartition {
    let n = g.order();
    let mut assigned = vec![false; n];
    let mut classes = Vec::new();
    for v in 0..n {
        if assigned[v] {
            continue;
        }
        assigned[v] = true;
        let mut class = vec![v];
        for (u, done) in assigned.iter_mut().enumerate().skip(v + 1) {
            if !*done && are_twins(g, dm, v, u) {
                *done = true;
                class.push(u);
            }
        }
        classes.push(class);
    }
    TwinPartition { classes }
}
