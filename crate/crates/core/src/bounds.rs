//! Lower and upper bounds on rvc and rvcl used to seed and certify the
//! exact solver.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{all_pairs_distances, cut_vertices, twin_classes, DistanceMatrix, Graph, VertexLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Rvc,
    Rvcl,
}

impl std::fmt::Display for Target {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Target::Rvc => "rvc",
            Target::Rvcl => "rvcl",
        })
    }
}

impl std::str::FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rvc" => Ok(Target::Rvc),
            "rvcl" => Ok(Target::Rvcl),
            _ => Err(Error::Parse(format!("unknown target {s:?} (expected rvc or rvcl)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundSide {
    Lower,
    Upper,
}

/// One bound contribution: its value, the rule that produced it and a
/// short statement of that rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Justification {
    pub value: u32,
    pub side: BoundSide,
    pub rule: String,
    pub citation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub target: Target,
    pub lower: u32,
    pub upper: u32,
    pub justifications: Vec<Justification>,
}

impl BoundReport {
    fn new(target: Target, justifications: Vec<Justification>) -> Self {
        let lower = justifications.iter().filter(|j| j.side == BoundSide::Lower).map(|j| j.value).max().unwrap_or(0);
        let upper =
            justifications.iter().filter(|j| j.side == BoundSide::Upper).map(|j| j.value).min().unwrap_or(u32::MAX);
        BoundReport { target, lower, upper, justifications }
    }

    /// Rule tag of the strongest lower bound (first one on ties).
    pub fn lower_rule(&self) -> Option<&str> {
        self.justifications
            .iter()
            .filter(|j| j.side == BoundSide::Lower && j.value == self.lower)
            .map(|j| j.rule.as_str())
            .next()
    }
}

fn lower(value: u32, rule: &str, citation: &str) -> Justification {
    Justification { value, side: BoundSide::Lower, rule: rule.into(), citation: citation.into() }
}

fn upper(value: u32, rule: &str, citation: &str) -> Justification {
    Justification { value, side: BoundSide::Upper, rule: rule.into(), citation: citation.into() }
}

pub fn rvc_lower(g: &Graph) -> BoundReport {
    rvc_lower_with(g, &all_pairs_distances(g))
}

pub fn rvc_lower_with(g: &Graph, dm: &DistanceMatrix) -> BoundReport {
    BoundReport::new(Target::Rvc, rvc_justifications(g, dm))
}

fn rvc_justifications(g: &Graph, dm: &DistanceMatrix) -> Vec<Justification> {
    let cuts = cut_vertices(g).len() as u32;
    let diam = dm.diameter();
    vec![
        lower(cuts, "lemma-cut", "rvc(G) >= number of cut vertices"),
        lower(diam.saturating_sub(1), "diam", "rvc(G) >= diam(G) - 1"),
        upper(g.order() as u32, "order", "all-distinct coloring"),
    ]
}

pub fn rvcl_lower(g: &Graph) -> BoundReport {
    rvcl_lower_with(g, &all_pairs_distances(g))
}

pub fn rvcl_lower_with(g: &Graph, dm: &DistanceMatrix) -> BoundReport {
    let rvc = rvc_lower_with(g, dm);
    let mut js = vec![lower(rvc.lower, "eq1", "rvcl(G) >= rvc(G)")];

    let twins = twin_classes(g, dm);
    js.push(lower(twins.largest() as u32, "lemma-twin", "twins receive distinct colors"));

    // Two disjoint twin classes of the same size t force t + 1 colors.
    let mut sizes: Vec<usize> = twins.classes.iter().map(Vec::len).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    if let Some(t) = sizes.windows(2).find(|w| w[0] == w[1]).map(|w| w[0]) {
        js.push(lower(t as u32 + 1, "lemma-two-classes", "two equal twin classes of size t need t + 1 colors"));
    }

    if let Some(n) = complete_flare_order(g) {
        if g.flare_count() >= 2 {
            js.push(lower(n as u32 + 1, "lemma-n-plus-1", "rvcl(G ⋄ K_n) >= n + 1 for cores with two or more edges"));
        }
        let m = g.core_vertices().len() as u32;
        js.push(upper(
            rvcl_upper_corona(m, n as u32, g.flare_count() as u32).expect("corona parameters"),
            "thm-upper-corona",
            "rvcl(G_m ⋄ K_n) <= m + n + |E(G_m)| - 1",
        ));
    }
    js.push(upper(g.order() as u32, "order", "all-distinct coloring"));
    BoundReport::new(Target::Rvcl, js)
}

/// If `g` is labelled as an edge corona whose flares are all cliques of a
/// common order `n >= 2`, returns `n`.
pub fn complete_flare_order(g: &Graph) -> Option<usize> {
    let flares = g.flare_count();
    if flares == 0 {
        return None;
    }
    let n = g.flare_copy(1).len();
    if n < 2 || g.core_vertices().len() < 2 {
        return None;
    }
    let all_cliques = (1..=flares).all(|j| {
        let copy = g.flare_copy(j);
        copy.len() == n && copy.iter().all(|&a| copy.iter().all(|&b| a == b || g.adjacent(a, b)))
    });
    let labels_dense = g.labels().iter().all(|l| match l {
        VertexLabel::Core(_) => true,
        VertexLabel::Flare { copy, .. } => *copy <= n,
    });
    (all_cliques && labels_dense).then_some(n)
}

/// Closed-form upper bound `m + n + |E(G_m)| - 1` for `G_m ⋄ K_n`.
pub fn rvcl_upper_corona(m: u32, n: u32, core_edges: u32) -> Result<u32> {
    if m < 2 || n < 2 || core_edges < 1 {
        return Err(Error::InvalidParameter(format!(
            "corona upper bound needs m >= 2, n >= 2, |E| >= 1 (got m={m}, n={n}, |E|={core_edges})"
        )));
    }
    Ok(m + n + core_edges - 1)
}

pub fn lower_bound(g: &Graph, dm: &DistanceMatrix, target: Target) -> BoundReport {
    match target {
        Target::Rvc => rvc_lower_with(g, dm),
        Target::Rvcl => rvcl_lower_with(g, dm),
    }
}
