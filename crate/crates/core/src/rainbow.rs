//! Rainbow vertex paths, rainbow codes and the locating property.
//!
//! A coloring is a *rainbow vertex coloring* when every pair of vertices is
//! joined by a path whose internal vertices carry pairwise distinct colors
//! (endpoint colors are unconstrained). It is *locating* when, in addition,
//! the vectors of distances from each vertex to every color class are
//! pairwise distinct.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{all_pairs_distances, DistanceMatrix, Graph, Vertex};

/// Total, surjective assignment of colors `1..=k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexColoring {
    k: u32,
    colors: Vec<u32>,
}

impl VertexColoring {
    /// Validates that every entry lies in `1..=k` and every color is used.
    pub fn new(k: u32, colors: Vec<u32>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidColoring("k must be positive".into()));
        }
        let mut used = vec![false; k as usize];
        for (v, &c) in colors.iter().enumerate() {
            if c == 0 || c > k {
                return Err(Error::InvalidColoring(format!("vertex {v} has color {c} outside 1..={k}")));
            }
            used[c as usize - 1] = true;
        }
        if let Some(missing) = used.iter().position(|u| !u) {
            return Err(Error::InvalidColoring(format!("color {} is never used", missing + 1)));
        }
        Ok(VertexColoring { k, colors })
    }

    /// Takes `k` to be the largest color present.
    pub fn from_colors(colors: Vec<u32>) -> Result<Self> {
        let k = colors.iter().copied().max().unwrap_or(0);
        VertexColoring::new(k, colors)
    }

    /// Relabels the used colors to `1..=k'` preserving their relative
    /// order, so that any total assignment becomes surjective.
    pub fn canonicalized(raw: &[u32]) -> Self {
        let mut used: Vec<u32> = raw.to_vec();
        used.sort_unstable();
        used.dedup();
        let colors = raw.iter().map(|c| used.binary_search(c).unwrap() as u32 + 1).collect();
        VertexColoring { k: used.len() as u32, colors }
    }

    pub fn uniform(n: usize) -> Self {
        VertexColoring { k: 1, colors: vec![1; n] }
    }

    pub fn all_distinct(n: usize) -> Self {
        VertexColoring { k: n as u32, colors: (1..=n as u32).collect() }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn color(&self, v: Vertex) -> u32 {
        self.colors[v]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    /// The ordered partition `R_1 .. R_k`.
    pub fn classes(&self) -> Vec<Vec<Vertex>> {
        let mut classes = vec![Vec::new(); self.k as usize];
        for (v, &c) in self.colors.iter().enumerate() {
            classes[c as usize - 1].push(v);
        }
        classes
    }

    /// Applies `perm[c - 1]` to every color `c`. `perm` must be a
    /// permutation of `1..=k`.
    pub fn permuted(&self, perm: &[u32]) -> Self {
        VertexColoring { k: self.k, colors: self.colors.iter().map(|&c| perm[c as usize - 1]).collect() }
    }

    fn check_against(&self, g: &Graph) -> Result<()> {
        if self.colors.len() != g.order() {
            return Err(Error::InvalidColoring(format!(
                "coloring covers {} vertices, graph has {}",
                self.colors.len(),
                g.order()
            )));
        }
        Ok(())
    }
}

/// Distances from one vertex to each color class, in color order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RainbowCode(pub Vec<u32>);

/// Pair of vertices that share a rainbow code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeCollision {
    pub pair: (Vertex, Vertex),
    pub code: RainbowCode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub rainbow_ok: bool,
    pub locating_ok: bool,
    pub failing_pair_rainbow: Option<(Vertex, Vertex)>,
    pub failing_pair_locating: Option<CodeCollision>,
    pub codes: Vec<RainbowCode>,
}

impl VerificationReport {
    pub fn is_locating_rainbow(&self) -> bool {
        self.rainbow_ok && self.locating_ok
    }
}

/// Verification against a fixed graph, reusing its distance matrix.
pub struct Verifier<'g> {
    graph: &'g Graph,
    dm: DistanceMatrix,
}

impl<'g> Verifier<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        Verifier { graph, dm: all_pairs_distances(graph) }
    }

    pub fn with_distances(graph: &'g Graph, dm: DistanceMatrix) -> Self {
        Verifier { graph, dm }
    }

    pub fn distances(&self) -> &DistanceMatrix {
        &self.dm
    }

    pub fn rvp_exists(&self, c: &VertexColoring, u: Vertex, v: Vertex) -> Result<bool> {
        c.check_against(self.graph)?;
        if u == v {
            return Err(Error::InvalidParameter(format!("rainbow path endpoints coincide ({u})")));
        }
        Ok(self.rvp_unchecked(c, u, v))
    }

    fn rvp_unchecked(&self, c: &VertexColoring, u: Vertex, v: Vertex) -> bool {
        let n = self.graph.order();
        let mut visited = vec![false; n];
        let mut used = vec![false; c.k() as usize + 1];
        visited[u] = true;
        self.extend(c, u, v, &mut visited, &mut used, 0)
    }

    // Depth-first over simple paths. `internals` counts the internal
    // vertices placed so far; a rainbow path has at most k of them, and
    // reaching `target` from `w` needs at least d(w, target) - 1 more.
    fn extend(
        &self,
        c: &VertexColoring,
        cur: Vertex,
        target: Vertex,
        visited: &mut [bool],
        used: &mut [bool],
        internals: u32,
    ) -> bool {
        if self.graph.adjacent(cur, target) {
            return true;
        }
        for &w in self.graph.neighbors(cur) {
            let col = c.color(w) as usize;
            if visited[w] || used[col] || internals + self.dm.get(w, target) > c.k() {
                continue;
            }
            visited[w] = true;
            used[col] = true;
            let found = self.extend(c, w, target, visited, used, internals + 1);
            visited[w] = false;
            used[col] = false;
            if found {
                return true;
            }
        }
        false
    }

    /// Rainbow half of the report; the first failing pair in
    /// lexicographic order is reported.
    pub fn check_rainbow(&self, c: &VertexColoring) -> Result<Option<(Vertex, Vertex)>> {
        c.check_against(self.graph)?;
        let n = self.graph.order();
        let pairs: Vec<(Vertex, Vertex)> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| self.dm.get(u, v) > 2).collect();
        Ok(pairs.into_par_iter().find_first(|&(u, v)| !self.rvp_unchecked(c, u, v)))
    }

    pub fn rainbow_code(&self, c: &VertexColoring, v: Vertex) -> RainbowCode {
        let mut code = vec![u32::MAX; c.k() as usize];
        for (w, &d) in self.dm.row(v).iter().enumerate() {
            let slot = &mut code[c.color(w) as usize - 1];
            *slot = (*slot).min(d);
        }
        RainbowCode(code)
    }

    pub fn codes(&self, c: &VertexColoring) -> Vec<RainbowCode> {
        self.graph.vertices().map(|v| self.rainbow_code(c, v)).collect()
    }

    /// Lexicographically least pair `(i, j)`, `i < j`, with equal codes.
    pub fn check_locating(&self, c: &VertexColoring) -> Result<(Vec<RainbowCode>, Option<CodeCollision>)> {
        c.check_against(self.graph)?;
        let codes = self.codes(c);
        let mut first_seen: BTreeMap<&RainbowCode, Vec<Vertex>> = BTreeMap::new();
        for (v, code) in codes.iter().enumerate() {
            first_seen.entry(code).or_default().push(v);
        }
        let collision = first_seen
            .values()
            .filter(|vs| vs.len() > 1)
            .map(|vs| (vs[0], vs[1]))
            .min()
            .map(|pair| CodeCollision { pair, code: codes[pair.0].clone() });
        Ok((codes, collision))
    }

    pub fn is_rainbow_vertex_coloring(&self, c: &VertexColoring) -> Result<VerificationReport> {
        let failing = self.check_rainbow(c)?;
        Ok(VerificationReport {
            rainbow_ok: failing.is_none(),
            locating_ok: true,
            failing_pair_rainbow: failing,
            failing_pair_locating: None,
            codes: Vec::new(),
        })
    }

    pub fn is_locating(&self, c: &VertexColoring) -> Result<VerificationReport> {
        let (codes, collision) = self.check_locating(c)?;
        Ok(VerificationReport {
            rainbow_ok: true,
            locating_ok: collision.is_none(),
            failing_pair_rainbow: None,
            failing_pair_locating: collision,
            codes,
        })
    }

    pub fn is_locating_rainbow_coloring(&self, c: &VertexColoring) -> Result<VerificationReport> {
        let failing = self.check_rainbow(c)?;
        let (codes, collision) = self.check_locating(c)?;
        Ok(VerificationReport {
            rainbow_ok: failing.is_none(),
            locating_ok: collision.is_none(),
            failing_pair_rainbow: failing,
            failing_pair_locating: collision,
            codes,
        })
    }
}

pub fn rvp_exists(g: &Graph, c: &VertexColoring, u: Vertex, v: Vertex) -> Result<bool> {
    Verifier::new(g).rvp_exists(c, u, v)
}

pub fn rainbow_code(g: &Graph, c: &VertexColoring, v: Vertex, dm: &DistanceMatrix) -> Result<RainbowCode> {
    c.check_against(g)?;
    if dm.order() != g.order() {
        return Err(Error::InvalidParameter("distance matrix does not match graph".into()));
    }
    Ok(Verifier::with_distances(g, dm.clone()).rainbow_code(c, v))
}

pub fn is_rainbow_vertex_coloring(g: &Graph, c: &VertexColoring) -> Result<VerificationReport> {
    Verifier::new(g).is_rainbow_vertex_coloring(c)
}

pub fn is_locating(g: &Graph, c: &VertexColoring) -> Result<VerificationReport> {
    Verifier::new(g).is_locating(c)
}

pub fn is_locating_rainbow_coloring(g: &Graph, c: &VertexColoring) -> Result<VerificationReport> {
    Verifier::new(g).is_locating_rainbow_coloring(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_complete, build_cycle, build_path, edge_corona, twin_classes};

    fn corona(core: Graph, n: usize) -> Graph {
        edge_corona(&core, &build_complete(n).unwrap()).unwrap()
    }

    #[test]
    fn coloring_validation() {
        assert!(VertexColoring::new(3, vec![1, 2, 2]).is_err());
        assert!(VertexColoring::new(2, vec![1, 3]).is_err());
        assert!(VertexColoring::new(2, vec![0, 1]).is_err());
        let c = VertexColoring::canonicalized(&[5, 2, 5, 9]);
        assert_eq!((c.k(), c.colors()), (3, &[2, 1, 2, 3][..]));
        assert_eq!(c.classes(), vec![vec![1], vec![0, 2], vec![3]]);
        let g = build_path(3).unwrap();
        assert!(is_locating(&g, &VertexColoring::uniform(2)).is_err());
    }

    #[test]
    fn rvp_examples() {
        let p4 = build_path(4).unwrap();
        let c = VertexColoring::new(2, vec![2, 1, 1, 2]).unwrap();
        assert!(rvp_exists(&p4, &c, 0, 1).unwrap());
        assert!(!rvp_exists(&p4, &c, 0, 3).unwrap());
        assert!(matches!(rvp_exists(&p4, &c, 2, 2), Err(Error::InvalidParameter(_))));
        let ok = VertexColoring::new(2, vec![1, 1, 2, 2]).unwrap();
        assert!(rvp_exists(&p4, &ok, 0, 3).unwrap());
    }

    #[test]
    fn rainbow_examples() {
        for m in 2..=5 {
            let k = build_complete(m).unwrap();
            assert!(is_rainbow_vertex_coloring(&k, &VertexColoring::uniform(m)).unwrap().rainbow_ok);
        }
        let p4 = build_path(4).unwrap();
        let r = is_rainbow_vertex_coloring(&p4, &VertexColoring::uniform(4)).unwrap();
        assert_eq!((r.rainbow_ok, r.failing_pair_rainbow), (false, Some((0, 3))));
        let c3 = corona(build_cycle(3).unwrap(), 2);
        assert!(is_rainbow_vertex_coloring(&c3, &VertexColoring::uniform(9)).unwrap().rainbow_ok);
    }

    #[test]
    fn code_examples() {
        let k3 = build_complete(3).unwrap();
        let c = VertexColoring::all_distinct(3);
        let dm = all_pairs_distances(&k3);
        let codes: Vec<_> = (0..3).map(|v| rainbow_code(&k3, &c, v, &dm).unwrap().0).collect();
        assert_eq!(codes, vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);

        let g = corona(build_path(4).unwrap(), 2);
        let c = VertexColoring::canonicalized(&(0..g.order() as u32).map(|v| v % 3).collect::<Vec<_>>());
        let v = Verifier::new(&g);
        for x in g.vertices() {
            let code = v.rainbow_code(&c, x);
            assert_eq!(code.0[c.color(x) as usize - 1], 0);
            assert!(code.0.iter().all(|&e| e <= v.distances().diameter()));
        }
    }

    #[test]
    fn locating_examples() {
        let k2 = build_complete(2).unwrap();
        let r = is_locating(&k2, &VertexColoring::uniform(2)).unwrap();
        assert!(!r.locating_ok);
        assert_eq!(r.failing_pair_locating, Some(CodeCollision { pair: (0, 1), code: RainbowCode(vec![0]) }));

        let g = corona(build_cycle(4).unwrap(), 3);
        assert!(is_locating(&g, &VertexColoring::all_distinct(g.order())).unwrap().locating_ok);

        let k4 = build_complete(4).unwrap();
        assert!(is_locating_rainbow_coloring(&k4, &VertexColoring::all_distinct(4)).unwrap().is_locating_rainbow());

        let c3 = corona(build_cycle(3).unwrap(), 2);
        let r = is_locating_rainbow_coloring(&c3, &VertexColoring::uniform(9)).unwrap();
        assert!(r.rainbow_ok && !r.locating_ok);
        assert!(r.failing_pair_locating.is_some() && r.failing_pair_rainbow.is_none());
    }

    #[test]
    fn same_colored_twins_never_locate() {
        for g in crate::graph::tests::corpus().into_iter().filter(|g| g.order() <= 24) {
            let v = Verifier::new(&g);
            let tp = twin_classes(&g, v.distances());
            for class in tp.nontrivial() {
                let (w, z) = (class[0], class[1]);
                // distinct colors everywhere except the twin pair
                let mut raw: Vec<u32> = (1..=g.order() as u32).collect();
                raw[z] = raw[w];
                let c = VertexColoring::canonicalized(&raw);
                let (_, collision) = v.check_locating(&c).unwrap();
                assert_eq!(collision.map(|x| x.pair), Some((w.min(z), w.max(z))));
            }
        }
    }
}
