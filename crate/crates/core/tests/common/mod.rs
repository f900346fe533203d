//! Brute-force oracles written independently of the library internals.
#![allow(dead_code)]

use std::collections::VecDeque;

use rand::rngs::StdRng;
use rand::Rng;
use rvclab::graph::{build_complete, build_cycle, build_path, edge_corona};
use rvclab::Graph;

pub fn adjacency(g: &Graph) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); g.order()];
    for &(a, b) in g.edges() {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

/// Exhaustive simple-path search: is there a `u`–`v` path whose internal
/// vertices have pairwise distinct colors?
pub fn rvp_oracle(adj: &[Vec<usize>], colors: &[u32], u: usize, v: usize) -> bool {
    fn walk(
        adj: &[Vec<usize>],
        colors: &[u32],
        at: usize,
        v: usize,
        on_path: &mut Vec<bool>,
        internal: &mut Vec<u32>,
    ) -> bool {
        for &w in &adj[at] {
            if w == v {
                let mut seen = internal.clone();
                seen.sort_unstable();
                seen.dedup();
                if seen.len() == internal.len() {
                    return true;
                }
                continue;
            }
            if on_path[w] {
                continue;
            }
            on_path[w] = true;
            internal.push(colors[w]);
            let found = walk(adj, colors, w, v, on_path, internal);
            internal.pop();
            on_path[w] = false;
            if found {
                return true;
            }
        }
        false
    }
    let mut on_path = vec![false; adj.len()];
    on_path[u] = true;
    walk(adj, colors, u, v, &mut on_path, &mut Vec::new())
}

pub fn floyd_warshall(g: &Graph) -> Vec<Vec<u32>> {
    let n = g.order();
    let inf = u32::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(a, b) in g.edges() {
        d[a][b] = 1;
        d[b][a] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

pub fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<u32> {
    let mut d = vec![u32::MAX; adj.len()];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(x) = q.pop_front() {
        for &y in &adj[x] {
            if d[y] == u32::MAX {
                d[y] = d[x] + 1;
                q.push_back(y);
            }
        }
    }
    d
}

/// Rainbow-vertex and locating checks by definition.
pub fn oracle_valid(adj: &[Vec<usize>], colors: &[u32], k: u32, locating: bool) -> bool {
    let n = adj.len();
    for u in 0..n {
        for v in u + 1..n {
            if !rvp_oracle(adj, colors, u, v) {
                return false;
            }
        }
    }
    if !locating {
        return true;
    }
    let dist: Vec<Vec<u32>> = (0..n).map(|s| bfs(adj, s)).collect();
    let codes: Vec<Vec<u32>> = (0..n)
        .map(|v| (1..=k).map(|c| (0..n).filter(|&w| colors[w] == c).map(|w| dist[v][w]).min().unwrap()).collect())
        .collect();
    let mut sorted = codes.clone();
    sorted.sort();
    sorted.dedup();
    sorted.len() == n
}

/// Least `k` admitting a valid surjective coloring, by trying all `k^n` maps.
pub fn brute_force_number(g: &Graph, locating: bool) -> u32 {
    let adj = adjacency(g);
    let n = g.order();
    for k in 1..=n as u32 {
        let mut colors = vec![1u32; n];
        loop {
            let surjective = (1..=k).all(|c| colors.contains(&c));
            if surjective && oracle_valid(&adj, &colors, k, locating) {
                return k;
            }
            let mut i = 0;
            while i < n && colors[i] == k {
                colors[i] = 1;
                i += 1;
            }
            if i == n {
                break;
            }
            colors[i] += 1;
        }
    }
    unreachable!("all-distinct coloring is always valid")
}

/// Stirling numbers of the second kind.
pub fn stirling2(n: u64, k: u64) -> u64 {
    let mut s = vec![vec![0u64; k as usize + 1]; n as usize + 1];
    s[0][0] = 1;
    for i in 1..=n as usize {
        for j in 1..=k as usize {
            s[i][j] = j as u64 * s[i - 1][j] + s[i - 1][j - 1];
        }
    }
    s[n as usize][k as usize]
}

/// Connected graph on `n` vertices: a random tree plus random extra edges.
pub fn random_connected(rng: &mut StdRng, n: usize) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v));
    }
    let extra = rng.gen_range(0..=n);
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let e = (a.min(b), a.max(b));
        if a != b && !edges.iter().any(|&(x, y)| (x.min(y), x.max(y)) == e) {
            edges.push(e);
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Named small cores and flares for corpus sweeps.
pub fn cores() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for m in 2..=6 {
        out.push((format!("P_{m}"), build_path(m).unwrap()));
    }
    for m in 3..=6 {
        out.push((format!("C_{m}"), build_cycle(m).unwrap()));
    }
    for m in 3..=5 {
        out.push((format!("K_{m}"), build_complete(m).unwrap()));
    }
    out
}

pub fn flares() -> Vec<(String, Graph)> {
    vec![
        ("K_1".into(), Graph::from_edges(1, vec![]).unwrap()),
        ("K_2".into(), build_complete(2).unwrap()),
        ("P_3".into(), build_path(3).unwrap()),
        ("K_3".into(), build_complete(3).unwrap()),
    ]
}

pub fn corpus() -> Vec<(String, Graph)> {
    let mut out = cores();
    for (cn, core) in cores() {
        for (fname, flare) in flares() {
            out.push((format!("{cn} ⋄ {fname}"), edge_corona(&core, &flare).unwrap()));
        }
    }
    out
}
