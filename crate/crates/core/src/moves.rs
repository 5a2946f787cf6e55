//! ∇Y and Y∇ moves and isomorphism-deduplicated closure under them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::{canonical_form, CanonicalForm, MAX_CANON_ORDER};
use crate::error::GraphError;
use crate::graph::{bit, members, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MoveKind {
    /// Triangle replaced by a new degree-3 vertex.
    #[serde(rename = "ty")]
    NablaY,
    /// Degree-3 vertex replaced by a triangle on its neighbours.
    #[serde(rename = "yt")]
    YNabla,
}

impl FromStr for MoveKind {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ty" | "nabla-y" | "delta-y" | "∇y" => Ok(MoveKind::NablaY),
            "yt" | "y-nabla" | "y-delta" | "y∇" => Ok(MoveKind::YNabla),
            other => Err(GraphError::InvalidArgument(format!("unknown move kind {other:?}"))),
        }
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MoveKind::NablaY => "ty",
            MoveKind::YNabla => "yt",
        })
    }
}

/// How Y∇ treats neighbour pairs that are already adjacent.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum YNablaPolicy {
    /// Allowed; the existing edge is kept once.
    #[default]
    Merge,
    /// Rejected: the three neighbours must be pairwise non-adjacent.
    Strict,
}

/// The triangle's edges are removed and a new vertex (index `n`) is joined to its corners.
pub fn nabla_y(g: &Graph, a: usize, b: usize, c: usize) -> Result<Graph, GraphError> {
    for v in [a, b, c] {
        g.check_vertex(v)?;
    }
    for (x, y) in [(a, b), (b, c), (a, c)] {
        if !g.has_edge(x, y) {
            return Err(GraphError::InvalidArgument(format!(
                "{{{a},{b},{c}}} is not a triangle: {x}-{y} missing"
            )));
        }
    }
    let n = g.order();
    if n + 1 > crate::graph::MAX_ORDER {
        return Err(GraphError::TooLarge {
            order: n + 1,
            limit: crate::graph::MAX_ORDER,
        });
    }
    let mut adj = g.adjacency().to_vec();
    adj.push(0);
    for (x, y) in [(a, b), (b, c), (a, c)] {
        adj[x] &= !bit(y);
        adj[y] &= !bit(x);
    }
    for x in [a, b, c] {
        adj[x] |= bit(n);
        adj[n] |= bit(x);
    }
    Ok(Graph::from_adjacency_unchecked(adj))
}

/// Y∇ at a degree-3 vertex with adjacent neighbour pairs merged. Vertex `v` is
/// deleted, so higher indices shift down by one.
pub fn y_nabla(g: &Graph, v: usize) -> Result<Graph, GraphError> {
    y_nabla_with(g, v, YNablaPolicy::Merge).map(|(h, _)| h)
}

/// Y∇ under an explicit policy; also reports whether any neighbour pair was already adjacent.
pub fn y_nabla_with(g: &Graph, v: usize, policy: YNablaPolicy) -> Result<(Graph, bool), GraphError> {
    g.check_vertex(v)?;
    if g.degree(v) != 3 {
        return Err(GraphError::InvalidArgument(format!(
            "Y-nabla needs a degree-3 vertex; vertex {v} has degree {}",
            g.degree(v)
        )));
    }
    let nb: Vec<usize> = members(g.neighbors(v)).collect();
    let pairs = [(nb[0], nb[1]), (nb[1], nb[2]), (nb[0], nb[2])];
    let merged = pairs.iter().any(|&(x, y)| g.has_edge(x, y));
    if merged && policy == YNablaPolicy::Strict {
        return Err(GraphError::InvalidArgument(format!(
            "neighbours of vertex {v} are not pairwise non-adjacent"
        )));
    }
    let mut adj = g.adjacency().to_vec();
    for (x, y) in pairs {
        adj[x] |= bit(y);
        adj[y] |= bit(x);
    }
    let h = Graph::from_adjacency_unchecked(adj).delete_vertex(v)?;
    Ok((h, merged))
}

/// Where a move is applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveSite {
    Triangle([usize; 3]),
    Vertex(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Move {
    pub kind: MoveKind,
    pub site: MoveSite,
}

impl Move {
    pub fn apply(&self, g: &Graph, policy: YNablaPolicy) -> Result<Graph, GraphError> {
        match (self.kind, self.site) {
            (MoveKind::NablaY, MoveSite::Triangle([a, b, c])) => nabla_y(g, a, b, c),
            (MoveKind::YNabla, MoveSite::Vertex(v)) => y_nabla_with(g, v, policy).map(|(h, _)| h),
            _ => Err(GraphError::InvalidArgument(format!(
                "move {} does not apply to site {:?}",
                self.kind, self.site
            ))),
        }
    }
}

/// Ordered moves from a seed graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoveSequence {
    pub moves: Vec<Move>,
}

impl MoveSequence {
    pub fn replay(&self, seed: &Graph, policy: YNablaPolicy) -> Result<Graph, GraphError> {
        self.moves.iter().try_fold(seed.clone(), |g, m| m.apply(&g, policy))
    }

    fn then(&self, m: Move) -> MoveSequence {
        let mut moves = self.moves.clone();
        moves.push(m);
        MoveSequence { moves }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureConfig {
    pub moves: BTreeSet<MoveKind>,
    pub max_order: usize,
    pub policy: YNablaPolicy,
    /// Upper bound on the number of classes before the closure gives up.
    pub max_graphs: usize,
}

impl ClosureConfig {
    pub fn new(moves: &[MoveKind], max_order: usize) -> Self {
        ClosureConfig {
            moves: moves.iter().copied().collect(),
            max_order,
            policy: YNablaPolicy::Merge,
            max_graphs: 100_000,
        }
    }

    pub fn with_policy(mut self, policy: YNablaPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_max_graphs(mut self, max_graphs: usize) -> Self {
        self.max_graphs = max_graphs;
        self
    }
}

/// One isomorphism class of a closure, with a derivation from one of the seeds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureMember {
    pub form: CanonicalForm,
    /// Exactly the graph obtained by replaying `moves` on `seeds[seed]`.
    pub graph: Graph,
    pub seed: usize,
    pub moves: MoveSequence,
}

#[derive(Debug, Clone, Error)]
pub enum ClosureError {
    #[error("closure exceeded {limit} graphs; {} collected so far", partial.len())]
    Overflow { limit: usize, partial: Vec<ClosureMember> },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Every single-move successor of `g` allowed by `config`.
pub fn successors(g: &Graph, config: &ClosureConfig) -> Vec<(Move, Graph)> {
    let mut out = Vec::new();
    if config.moves.contains(&MoveKind::NablaY) && g.order() < config.max_order {
        for (a, b, c) in g.triangles() {
            let m = Move {
                kind: MoveKind::NablaY,
                site: MoveSite::Triangle([a, b, c]),
            };
            let h = nabla_y(g, a, b, c).expect("listed triangle");
            assert_eq!(h.size(), g.size(), "nabla-Y must preserve the edge count");
            out.push((m, h));
        }
    }
    if config.moves.contains(&MoveKind::YNabla) {
        for v in 0..g.order() {
            if g.degree(v) != 3 {
                continue;
            }
            if let Ok((h, merged)) = y_nabla_with(g, v, config.policy) {
                if !merged {
                    assert_eq!(h.size(), g.size(), "Y-nabla must preserve the edge count");
                }
                out.push((
                    Move {
                        kind: MoveKind::YNabla,
                        site: MoveSite::Vertex(v),
                    },
                    h,
                ));
            }
        }
    }
    out
}

/// Least set of isomorphism classes containing `seeds` and closed under the
/// configured moves, restricted to orders `<= max_order`. Sorted by canonical form.
pub fn closure(seeds: &[Graph], config: &ClosureConfig) -> Result<Vec<ClosureMember>, ClosureError> {
    if seeds.is_empty() {
        return Err(GraphError::InvalidArgument("closure needs at least one seed".into()).into());
    }
    if config.max_order > MAX_CANON_ORDER {
        return Err(GraphError::TooLarge {
            order: config.max_order,
            limit: MAX_CANON_ORDER,
        }
        .into());
    }
    let mut seen: BTreeMap<CanonicalForm, ClosureMember> = BTreeMap::new();
    let mut frontier: Vec<CanonicalForm> = Vec::new();
    for (i, s) in seeds.iter().enumerate() {
        if s.order() > config.max_order {
            continue;
        }
        let form = canonical_form(s)?;
        if !seen.contains_key(&form) {
            frontier.push(form.clone());
            seen.insert(
                form.clone(),
                ClosureMember {
                    form,
                    graph: s.clone(),
                    seed: i,
                    moves: MoveSequence::default(),
                },
            );
        }
    }
    while !frontier.is_empty() {
        frontier.sort();
        let expanded: Vec<Vec<(CanonicalForm, ClosureMember)>> = frontier
            .par_iter()
            .map(|form| {
                let parent = &seen[form];
                successors(&parent.graph, config)
                    .into_iter()
                    .map(|(m, h)| {
                        let f = canonical_form(&h).expect("order within canonical limit");
                        let member = ClosureMember {
                            form: f.clone(),
                            graph: h,
                            seed: parent.seed,
                            moves: parent.moves.then(m),
                        };
                        (f, member)
                    })
                    .collect()
            })
            .collect();
        let mut next = Vec::new();
        for (f, member) in expanded.into_iter().flatten() {
            if seen.contains_key(&f) {
                continue;
            }
            if seen.len() >= config.max_graphs {
                return Err(ClosureError::Overflow {
                    limit: config.max_graphs,
                    partial: seen.into_values().collect(),
                });
            }
            next.push(f.clone());
            seen.insert(f, member);
        }
        frontier = next;
    }
    Ok(seen.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::is_isomorphic;
    use crate::families::{complete, named, wheel, NamedGraph};

    #[test]
    fn moves_are_inverse() {
        let k6 = complete(6);
        let h = nabla_y(&k6, 0, 1, 2).unwrap();
        assert_eq!((h.order(), h.size()), (7, 15));
        let back = y_nabla(&h, 6).unwrap();
        assert!(is_isomorphic(&back, &k6).unwrap());
        assert!(nabla_y(&wheel(6).unwrap(), 0, 2, 5).is_err());
    }

    #[test]
    fn y_nabla_examples() {
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(is_isomorphic(&y_nabla(&star, 0).unwrap(), &complete(3)).unwrap());
        // rim vertex 0 of W5: neighbours 1, 3 and the hub; hub edges already present
        let w5 = wheel(5).unwrap();
        let (h, merged) = y_nabla_with(&w5, 0, YNablaPolicy::Merge).unwrap();
        assert!(merged);
        assert_eq!(h.size(), 8 - 3 + 1);
        assert!(is_isomorphic(&h, &complete(4)).unwrap());
        assert!(y_nabla_with(&w5, 0, YNablaPolicy::Strict).is_err());
        assert!(y_nabla(&w5, 4).is_err());
    }

    #[test]
    fn replay_reproduces_members() {
        let cfg = ClosureConfig::new(&[MoveKind::NablaY, MoveKind::YNabla], 10);
        let seeds = [complete(6)];
        let all = closure(&seeds, &cfg).unwrap();
        for m in &all {
            assert_eq!(m.moves.replay(&seeds[m.seed], cfg.policy).unwrap(), m.graph);
        }
    }

    #[test]
    fn petersen_family_has_seven_members() {
        for policy in [YNablaPolicy::Merge, YNablaPolicy::Strict] {
            let cfg = ClosureConfig::new(&[MoveKind::NablaY, MoveKind::YNabla], 10).with_policy(policy);
            let fam = closure(&[complete(6)], &cfg).unwrap();
            assert_eq!(fam.len(), 7, "{policy:?}");
            let p = canonical_form(&named("Petersen").unwrap()).unwrap();
            assert!(fam.iter().any(|m| m.form == p));
            assert!(fam.iter().all(|m| m.graph.size() == 15));
        }
    }

    #[test]
    fn closure_is_idempotent_and_edge_preserving() {
        let cfg = ClosureConfig::new(&[MoveKind::NablaY], 11);
        let once = closure(&[NamedGraph::K7.graph()], &cfg).unwrap();
        assert!(once.iter().all(|m| m.graph.size() == 21));
        let graphs: Vec<Graph> = once.iter().map(|m| m.graph.clone()).collect();
        let twice = closure(&graphs, &cfg).unwrap();
        let a: Vec<_> = once.iter().map(|m| &m.form).collect();
        let b: Vec<_> = twice.iter().map(|m| &m.form).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn overflow_is_reported_with_partial_set() {
        let cfg = ClosureConfig::new(&[MoveKind::NablaY], 12).with_max_graphs(3);
        match closure(&[NamedGraph::K7.graph()], &cfg) {
            Err(ClosureError::Overflow { limit, partial }) => {
                assert_eq!(limit, 3);
                assert_eq!(partial.len(), 3);
            }
            other => panic!("expected overflow, got {other:?}"),
        }
    }
}
