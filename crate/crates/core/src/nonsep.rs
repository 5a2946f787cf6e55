//! Recognition of non-separating planar graphs through their three types:
//! outerplanar graphs, subgraphs of wheels, and subgraphs of elongated prisms.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::families::{elongated_prism, prism_subdivisions, wheel, PrismSubdivision};
use crate::graph::{bit, members, Graph, VertexSet};
use crate::minors::subgraph_embedding;
use crate::planarity::{is_outerplanar, OuterplanarResult, RotationSystem};

/// Extra host vertices allowed by the prism test. Unused subdivision vertices
/// of a host can always be smoothed away, so at most the six triangle
/// vertices are ever unused and this bound is exact.
pub const DEFAULT_PRISM_SLACK: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum NonsepClassification {
    Outerplanar {
        /// Embedding of `g` plus a cone vertex (see [`OuterplanarResult`]).
        cone_embedding: RotationSystem,
    },
    WheelSubgraph {
        hub: usize,
        /// The other vertices in cyclic order; every edge avoiding the hub joins consecutive ones.
        rim: Vec<usize>,
    },
    PrismSubgraph {
        host: PrismSubdivision,
        /// `map[v]` is the host vertex for vertex `v`.
        map: Vec<usize>,
    },
    NotNonseparating,
}

impl NonsepClassification {
    pub fn is_nonseparating(&self) -> bool {
        !matches!(self, NonsepClassification::NotNonseparating)
    }

    pub fn name(&self) -> &'static str {
        match self {
            NonsepClassification::Outerplanar { .. } => "Outerplanar",
            NonsepClassification::WheelSubgraph { .. } => "WheelSubgraph",
            NonsepClassification::PrismSubgraph { .. } => "PrismSubgraph",
            NonsepClassification::NotNonseparating => "NotNonseparating",
        }
    }

    /// Re-checks the certificate. A negative verdict carries no certificate and passes.
    pub fn validate(&self, g: &Graph) -> Result<(), String> {
        match self {
            NonsepClassification::Outerplanar { cone_embedding } => OuterplanarResult::Outerplanar {
                cone_embedding: cone_embedding.clone(),
            }
            .validate(g),
            NonsepClassification::WheelSubgraph { hub, rim } => {
                let n = g.order();
                if *hub >= n || rim.len() + 1 != n {
                    return Err("rim and hub do not cover the vertices".into());
                }
                // rim position i -> wheel vertex i, hub -> n-1
                let mut map = vec![usize::MAX; n];
                map[*hub] = n - 1;
                for (i, &v) in rim.iter().enumerate() {
                    if v >= n || map[v] != usize::MAX {
                        return Err(format!("rim vertex {v} repeated or out of range"));
                    }
                    map[v] = i;
                }
                check_homomorphism(g, &wheel(n).map_err(|e| e.to_string())?, &map)
            }
            NonsepClassification::PrismSubgraph { host, map } => {
                let h = elongated_prism(*host);
                let mut used: VertexSet = 0;
                for &x in map {
                    if x >= h.order() || used & bit(x) != 0 {
                        return Err("prism map is not injective".into());
                    }
                    used |= bit(x);
                }
                check_homomorphism(g, &h, map)
            }
            NonsepClassification::NotNonseparating => Ok(()),
        }
    }
}

fn check_homomorphism(g: &Graph, host: &Graph, map: &[usize]) -> Result<(), String> {
    if map.len() != g.order() {
        return Err("map does not cover the vertices".into());
    }
    match g.edges().find(|&(u, v)| !host.has_edge(map[u], map[v])) {
        Some((u, v)) => Err(format!("edge {u}-{v} is not mapped to a host edge")),
        None => Ok(()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonsepOptions {
    pub prism_slack: usize,
}

impl Default for NonsepOptions {
    fn default() -> Self {
        NonsepOptions {
            prism_slack: DEFAULT_PRISM_SLACK,
        }
    }
}

/// First matching type in the order outerplanar, wheel, prism.
pub fn classify_nonseparating(g: &Graph) -> NonsepClassification {
    classify_with(g, &NonsepOptions::default())
}

pub fn classify_with(g: &Graph, opts: &NonsepOptions) -> NonsepClassification {
    if let OuterplanarResult::Outerplanar { cone_embedding } = is_outerplanar(g) {
        return NonsepClassification::Outerplanar { cone_embedding };
    }
    if let Some((hub, rim)) = wheel_hub(g) {
        return NonsepClassification::WheelSubgraph { hub, rim };
    }
    if let Some((host, map)) = prism_host(g, opts.prism_slack) {
        return NonsepClassification::PrismSubgraph { host, map };
    }
    NonsepClassification::NotNonseparating
}

/// A hub `v` such that `g - v` is a linear forest or a spanning cycle, with a rim order.
fn wheel_hub(g: &Graph) -> Option<(usize, Vec<usize>)> {
    let n = g.order();
    if n < 4 {
        return None;
    }
    (0..n).find_map(|hub| {
        let rest = g.vertex_set() & !bit(hub);
        rim_order(g, rest).map(|rim| (hub, rim))
    })
}

/// Cyclic order of `rest` in which every edge of `g[rest]` joins neighbours.
fn rim_order(g: &Graph, rest: VertexSet) -> Option<Vec<usize>> {
    let deg = |v: usize| (g.neighbors(v) & rest).count_ones();
    if members(rest).any(|v| deg(v) > 2) {
        return None;
    }
    let mut seen: VertexSet = 0;
    let mut order = Vec::new();
    for s in members(rest).filter(|&v| deg(v) <= 1) {
        if seen & bit(s) == 0 {
            walk(g, rest, s, &mut seen, &mut order);
        }
    }
    if seen == rest {
        return Some(order);
    }
    if seen != 0 || rest.count_ones() < 3 {
        // a cycle next to other vertices
        return None;
    }
    walk(g, rest, rest.trailing_zeros() as usize, &mut seen, &mut order);
    (seen == rest).then_some(order)
}

fn walk(g: &Graph, rest: VertexSet, start: usize, seen: &mut VertexSet, order: &mut Vec<usize>) {
    let mut cur = start;
    loop {
        *seen |= bit(cur);
        order.push(cur);
        match members(g.neighbors(cur) & rest & !*seen).next() {
            Some(next) => cur = next,
            None => break,
        }
    }
}

fn prism_host(g: &Graph, slack: usize) -> Option<(PrismSubdivision, Vec<usize>)> {
    let n = g.order();
    if g.max_degree() > 3 {
        return None;
    }
    let hosts: Vec<PrismSubdivision> = (n.max(6)..=n + slack)
        .filter(|&m| m <= crate::graph::MAX_ORDER)
        .flat_map(prism_subdivisions)
        .collect();
    hosts.into_par_iter().find_map_first(|s| {
        let host = elongated_prism(s);
        if host.size() < g.size() {
            return None;
        }
        subgraph_embedding(g, &host).map(|map| (s, map))
    })
}

/// Non-separating, and adding any non-edge makes it separating.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalityResult {
    pub maximal: bool,
    pub classification: NonsepClassification,
    /// A non-edge whose addition keeps the graph non-separating, with the new classification.
    pub counterexample: Option<((usize, usize), NonsepClassification)>,
}

pub fn is_maximal_nonseparating(g: &Graph) -> MaximalityResult {
    let classification = classify_nonseparating(g);
    if !classification.is_nonseparating() {
        return MaximalityResult {
            maximal: false,
            classification,
            counterexample: None,
        };
    }
    let counterexample = g.non_edges().into_par_iter().find_map_first(|(u, v)| {
        let c = classify_nonseparating(&g.add_edge(u, v).expect("non-edge"));
        c.is_nonseparating().then_some(((u, v), c))
    });
    MaximalityResult {
        maximal: counterexample.is_none(),
        classification,
        counterexample,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{complete, cycle, enumerate_max_outerplanar, path_by_edges};
    use crate::planarity::k23;

    #[test]
    fn basic_classes() {
        assert_eq!(classify_nonseparating(&cycle(7).unwrap()).name(), "Outerplanar");
        let w9 = wheel(9).unwrap();
        let c = classify_nonseparating(&w9);
        assert_eq!(c.name(), "WheelSubgraph");
        c.validate(&w9).unwrap();
        let k = k23();
        let c = classify_nonseparating(&k);
        match &c {
            NonsepClassification::WheelSubgraph { hub, .. } => assert_eq!(k.degree(*hub), 2),
            other => panic!("{other:?}"),
        }
        c.validate(&k).unwrap();
        let p = elongated_prism(PrismSubdivision::new(2, 1, 0));
        let c = classify_nonseparating(&p);
        assert_eq!(c.name(), "PrismSubgraph");
        c.validate(&p).unwrap();
        assert!(!classify_nonseparating(&complete(5)).is_nonseparating());
        assert!(!classify_nonseparating(&crate::families::NamedGraph::K33.graph().join(&Graph::new(1))).is_nonseparating());
    }

    #[test]
    fn rim_orders() {
        // two paths plus an isolated vertex
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        assert_eq!(rim_order(&g, g.vertex_set()).unwrap().len(), 6);
        // a spanning cycle
        assert!(rim_order(&cycle(5).unwrap(), 0b11111).is_some());
        // a cycle plus another vertex
        let h = cycle(4).unwrap().disjoint_union(&Graph::new(1));
        assert!(rim_order(&h, h.vertex_set()).is_none());
        assert!(rim_order(&path_by_edges(4), 0b11111).is_some());
    }

    #[test]
    fn maximality() {
        for n in 7..=10 {
            assert!(is_maximal_nonseparating(&wheel(n).unwrap()).maximal, "W{n}");
        }
        assert!(is_maximal_nonseparating(&elongated_prism(PrismSubdivision::new(1, 0, 0))).maximal);
        assert!(!is_maximal_nonseparating(&cycle(8).unwrap()).maximal);
    }

    #[test]
    fn fan_is_the_only_non_maximal_triangulated_polygon() {
        for n in 7..=9 {
            let fans: Vec<_> = enumerate_max_outerplanar(n)
                .unwrap()
                .into_iter()
                .filter(|g| !is_maximal_nonseparating(g).maximal)
                .collect();
            assert_eq!(fans.len(), 1, "n = {n}");
            assert_eq!(fans[0].max_degree(), n - 1);
        }
    }
}
