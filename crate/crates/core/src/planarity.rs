//! Planarity, outerplanarity and linear-forest tests with certificates.
//!
//! Planarity is decided block by block with path addition: a cycle is
//! embedded first, and fragments of the rest of the block are added as paths
//! through faces that contain all of their attachment vertices.

use serde::{Deserialize, Serialize};

use crate::families::{complete, empty, NamedGraph};
use crate::graph::{bit, members, Graph, VertexSet};
use crate::minors::{validate_certificate, MinorCertificate};

/// Cyclic neighbour order at every vertex. Faces are traced by following
/// dart `u -> v` with `v -> w`, where `w` comes right after `u` in `rotation[v]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationSystem {
    pub rotation: Vec<Vec<usize>>,
}

impl RotationSystem {
    fn successor(&self, v: usize, u: usize) -> Option<usize> {
        let r = &self.rotation[v];
        let i = r.iter().position(|&x| x == u)?;
        Some(r[(i + 1) % r.len()])
    }

    /// Faces as dart sequences, given by their vertex cycles.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let n = self.rotation.len();
        let mut seen = vec![VertexSet::default(); n];
        let mut faces = Vec::new();
        for u in 0..n {
            for &v in &self.rotation[u] {
                if seen[u] & bit(v) != 0 {
                    continue;
                }
                let mut face = Vec::new();
                let (mut a, mut b) = (u, v);
                while seen[a] & bit(b) == 0 {
                    seen[a] |= bit(b);
                    face.push(a);
                    let c = match self.successor(b, a) {
                        Some(c) => c,
                        None => break,
                    };
                    a = b;
                    b = c;
                }
                faces.push(face);
            }
        }
        faces
    }

    /// Checks that this is a rotation system of `g` and that every connected
    /// component satisfies `v - e + f = 2`.
    pub fn validate(&self, g: &Graph) -> Result<(), String> {
        if self.rotation.len() != g.order() {
            return Err(format!(
                "rotation covers {} vertices, graph has {}",
                self.rotation.len(),
                g.order()
            ));
        }
        for (v, r) in self.rotation.iter().enumerate() {
            let mut s: VertexSet = 0;
            for &u in r {
                if u >= g.order() || s & bit(u) != 0 {
                    return Err(format!("rotation at {v} is not a permutation of its neighbours"));
                }
                s |= bit(u);
            }
            if s != g.neighbors(v) {
                return Err(format!("rotation at {v} is not a permutation of its neighbours"));
            }
        }
        let faces = self.faces();
        for comp in g.components() {
            let vc = comp.count_ones() as i64;
            let ec = members(comp).map(|v| g.degree(v)).sum::<usize>() as i64 / 2;
            let fc = if ec == 0 {
                1
            } else {
                faces.iter().filter(|f| comp & bit(f[0]) != 0).count() as i64
            };
            if vc - ec + fc != 2 {
                return Err(format!(
                    "component with {vc} vertices, {ec} edges and {fc} faces violates Euler's formula"
                ));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PlanarityResult {
    Planar { embedding: RotationSystem },
    /// A K5 or K3,3 minor.
    Nonplanar { obstruction: MinorCertificate },
}

impl PlanarityResult {
    pub fn is_planar(&self) -> bool {
        matches!(self, PlanarityResult::Planar { .. })
    }

    pub fn validate(&self, g: &Graph) -> Result<(), String> {
        match self {
            PlanarityResult::Planar { embedding } => embedding.validate(g),
            PlanarityResult::Nonplanar { obstruction } => {
                let t = &obstruction.target;
                let k5 = NamedGraph::K5.graph();
                let k33 = NamedGraph::K33.graph();
                if *t != k5 && *t != k33 {
                    return Err("obstruction target is neither K5 nor K3,3".into());
                }
                validate_certificate(g, obstruction)
            }
        }
    }
}

/// Decision only, without certificates.
pub fn planar(g: &Graph) -> bool {
    let n = g.order();
    if n >= 3 && g.size() > 3 * n - 6 {
        return false;
    }
    blocks(g).iter().all(|b| embed_block(g, b).is_some())
}

pub fn is_planar(g: &Graph) -> PlanarityResult {
    match embed(g) {
        Some(embedding) => PlanarityResult::Planar { embedding },
        None => PlanarityResult::Nonplanar {
            obstruction: kuratowski(g),
        },
    }
}

/// A planar embedding of `g`, if one exists.
pub fn embed(g: &Graph) -> Option<RotationSystem> {
    let n = g.order();
    if n >= 3 && g.size() > 3 * n - 6 {
        return None;
    }
    let mut rotation = vec![Vec::new(); n];
    for block in blocks(g) {
        let faces = embed_block(g, &block)?;
        for (v, cycle) in block_rotations(&block, &faces) {
            rotation[v].extend(cycle);
        }
    }
    Some(RotationSystem { rotation })
}

/// Edge sets of the biconnected components.
fn blocks(g: &Graph) -> Vec<Vec<(usize, usize)>> {
    struct Dfs<'a> {
        g: &'a Graph,
        disc: Vec<usize>,
        low: Vec<usize>,
        time: usize,
        stack: Vec<(usize, usize)>,
        out: Vec<Vec<(usize, usize)>>,
    }
    impl Dfs<'_> {
        fn visit(&mut self, u: usize, parent: Option<usize>) {
            self.time += 1;
            self.disc[u] = self.time;
            self.low[u] = self.time;
            for v in members(self.g.neighbors(u)) {
                if self.disc[v] == 0 {
                    self.stack.push((u, v));
                    self.visit(v, Some(u));
                    self.low[u] = self.low[u].min(self.low[v]);
                    if self.low[v] >= self.disc[u] {
                        let mut block = Vec::new();
                        while let Some(e) = self.stack.pop() {
                            block.push(e);
                            if e == (u, v) {
                                break;
                            }
                        }
                        self.out.push(block);
                    }
                } else if Some(v) != parent && self.disc[v] < self.disc[u] {
                    self.stack.push((u, v));
                    self.low[u] = self.low[u].min(self.disc[v]);
                }
            }
        }
    }
    let n = g.order();
    let mut dfs = Dfs {
        g,
        disc: vec![0; n],
        low: vec![0; n],
        time: 0,
        stack: Vec::new(),
        out: Vec::new(),
    };
    for v in 0..n {
        if dfs.disc[v] == 0 && g.degree(v) > 0 {
            dfs.visit(v, None);
        }
    }
    dfs.out
}

/// Faces (directed vertex cycles) of a planar embedding of one block, or `None` if it is nonplanar.
fn embed_block(g: &Graph, block: &[(usize, usize)]) -> Option<Vec<Vec<usize>>> {
    if block.len() == 1 {
        let (u, v) = block[0];
        return Some(vec![vec![u, v]]);
    }
    let vb: VertexSet = block.iter().fold(0, |s, &(u, v)| s | bit(u) | bit(v));
    let adj = |v: usize| g.neighbors(v) & vb;

    // initial cycle through the first edge
    let (s, t) = block[0];
    let path = bfs_path(t, bit(s), vb, |v| if v == t { adj(v) & !bit(s) } else { adj(v) })?;
    let mut cycle = vec![s];
    cycle.extend(path.iter().copied().take(path.len() - 1));
    let mut faces = vec![cycle.clone(), cycle.iter().rev().copied().collect()];
    let mut hv: VertexSet = cycle.iter().fold(0, |s, &v| s | bit(v));
    let mut h_adj = vec![VertexSet::default(); g.order()];
    for i in 0..cycle.len() {
        let (a, b) = (cycle[i], cycle[(i + 1) % cycle.len()]);
        h_adj[a] |= bit(b);
        h_adj[b] |= bit(a);
    }
    let mut embedded = cycle.len();

    while embedded < block.len() {
        let face_sets: Vec<VertexSet> = faces.iter().map(|f| f.iter().fold(0, |s, &v| s | bit(v))).collect();
        // fragments: (attachments, inner vertices)
        let mut fragments: Vec<(VertexSet, VertexSet)> = Vec::new();
        for u in members(hv) {
            for v in members(adj(u) & hv & !h_adj[u]) {
                if u < v {
                    fragments.push((bit(u) | bit(v), 0));
                }
            }
        }
        let mut rest = vb & !hv;
        while rest != 0 {
            let c = rest.trailing_zeros() as usize;
            let comp = g.reach(c, vb & !hv);
            rest &= !comp;
            let att = members(comp).fold(0, |s, x| s | (adj(x) & hv));
            fragments.push((att, comp));
        }
        let mut choice: Option<(usize, usize)> = None;
        for (i, &(att, _)) in fragments.iter().enumerate() {
            let admissible: Vec<usize> = (0..faces.len()).filter(|&f| face_sets[f] & att == att).collect();
            match admissible.len() {
                0 => return None,
                1 => {
                    choice = Some((i, admissible[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((i, admissible[0]));
                    }
                }
            }
        }
        let (fi, face_idx) = choice.expect("unembedded edges imply a fragment");
        let (att, inner) = fragments[fi];
        let a1 = att.trailing_zeros() as usize;
        let path = if inner == 0 {
            vec![a1, members(att).nth(1).expect("two attachments")]
        } else {
            let a2 = members(att).find(|&x| x != a1).expect("block fragments have two attachments");
            let start: Vec<usize> = members(adj(a1) & inner).collect();
            let mut best: Option<Vec<usize>> = None;
            for c in start {
                if let Some(p) = bfs_path(c, adj(a2) & inner, inner, adj) {
                    best = Some(p);
                    break;
                }
            }
            let mut p = vec![a1];
            p.extend(best.expect("fragment is connected"));
            p.push(a2);
            p
        };
        let face = faces.swap_remove(face_idx);
        let (f1, f2) = split_face(&face, &path);
        faces.push(f1);
        faces.push(f2);
        for w in path.windows(2) {
            h_adj[w[0]] |= bit(w[1]);
            h_adj[w[1]] |= bit(w[0]);
            hv |= bit(w[0]) | bit(w[1]);
        }
        embedded += path.len() - 1;
    }
    Some(faces)
}

/// Shortest path from `start` to any vertex of `goal`, moving only inside `within`.
fn bfs_path(start: usize, goal: VertexSet, within: VertexSet, adj: impl Fn(usize) -> VertexSet) -> Option<Vec<usize>> {
    let mut prev = [usize::MAX; 64];
    let mut seen = bit(start);
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        if goal & bit(u) != 0 {
            let mut p = vec![u];
            let mut x = u;
            while x != start {
                x = prev[x];
                p.push(x);
            }
            p.reverse();
            return Some(p);
        }
        for v in members(adj(u) & within & !seen) {
            seen |= bit(v);
            prev[v] = u;
            queue.push_back(v);
        }
    }
    None
}

/// Splits a directed face along a path whose two ends lie on it.
fn split_face(face: &[usize], path: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let k = face.len();
    let (u, w) = (path[0], path[path.len() - 1]);
    let i = face.iter().position(|&x| x == u).expect("path starts on face");
    let j = face.iter().position(|&x| x == w).expect("path ends on face");
    let inner = &path[1..path.len() - 1];
    let mut f1 = Vec::new();
    let mut x = i;
    loop {
        f1.push(face[x]);
        if x == j {
            break;
        }
        x = (x + 1) % k;
    }
    f1.extend(inner.iter().rev());
    let mut f2 = Vec::new();
    let mut x = j;
    loop {
        f2.push(face[x]);
        if x == i {
            break;
        }
        x = (x + 1) % k;
    }
    f2.extend(inner.iter());
    (f1, f2)
}

/// Cyclic neighbour order at each vertex of a block, read off its faces.
fn block_rotations(block: &[(usize, usize)], faces: &[Vec<usize>]) -> Vec<(usize, Vec<usize>)> {
    if block.len() == 1 {
        let (u, v) = block[0];
        return vec![(u, vec![v]), (v, vec![u])];
    }
    let mut succ: std::collections::BTreeMap<(usize, usize), usize> = Default::default();
    for f in faces {
        let k = f.len();
        for i in 0..k {
            succ.insert((f[(i + 1) % k], f[i]), f[(i + 2) % k]);
        }
    }
    let mut out = Vec::new();
    let mut verts: Vec<usize> = succ.keys().map(|&(v, _)| v).collect();
    verts.dedup();
    for v in verts {
        let first = succ.range((v, 0)..(v + 1, 0)).next().map(|(&(_, u), _)| u).expect("vertex has darts");
        let mut cyc = vec![first];
        let mut x = succ[&(v, first)];
        while x != first {
            cyc.push(x);
            x = succ[&(v, x)];
        }
        out.push((v, cyc));
    }
    out
}

/// A K5 or K3,3 minor certificate for a nonplanar graph.
pub fn kuratowski(g: &Graph) -> MinorCertificate {
    // reduce to an edge-minimal nonplanar subgraph: a subdivided K5 or K3,3
    let mut h = g.clone();
    for (u, v) in g.edges().collect::<Vec<_>>() {
        h.erase_edge(u, v);
        if planar(&h) {
            h.insert_edge(u, v);
        }
    }
    let branch: Vec<usize> = (0..h.order()).filter(|&v| h.degree(v) >= 3).collect();
    let index = |v: usize| branch.iter().position(|&b| b == v);
    // walk each subdivided path; inner vertices join the branch set of its start
    let mut sets: Vec<VertexSet> = branch.iter().map(|&b| bit(b)).collect();
    let mut links = Vec::new();
    for (i, &b) in branch.iter().enumerate() {
        for first in members(h.neighbors(b)) {
            let (mut prev, mut cur) = (b, first);
            let mut inner: VertexSet = 0;
            while index(cur).is_none() {
                inner |= bit(cur);
                let next = members(h.neighbors(cur) & !bit(prev)).next().expect("degree-2 path vertex");
                prev = cur;
                cur = next;
            }
            let j = index(cur).expect("path ends at a branch vertex");
            if i < j {
                sets[i] |= inner;
                links.push((i, j));
            }
        }
    }
    let mut link_graph = Graph::new(branch.len());
    for (i, j) in links {
        link_graph.insert_edge(i, j);
    }
    let target = if branch.len() == 5 {
        NamedGraph::K5.graph()
    } else {
        NamedGraph::K33.graph()
    };
    // order the branch sets to match the target's labelling
    let order: Vec<usize> = if branch.len() == 5 {
        (0..5).collect()
    } else {
        let a = 0;
        let side_b: Vec<usize> = members(link_graph.neighbors(a)).collect();
        let side_a: Vec<usize> = (0..6).filter(|x| !side_b.contains(x)).collect();
        side_a.into_iter().chain(side_b).collect()
    };
    let ordered: Vec<VertexSet> = order.iter().map(|&i| sets[i]).collect();
    MinorCertificate::from_branch_sets(g, &target, &ordered).expect("edge-minimal nonplanar graph is a Kuratowski subdivision")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum OuterplanarResult {
    /// Embedding of `g` joined with one extra vertex (the last index): every
    /// vertex of `g` lies on the face that held the extra vertex.
    Outerplanar { cone_embedding: RotationSystem },
    /// A K4 or K2,3 minor.
    NotOuterplanar { obstruction: MinorCertificate },
}

impl OuterplanarResult {
    pub fn is_outerplanar(&self) -> bool {
        matches!(self, OuterplanarResult::Outerplanar { .. })
    }

    pub fn validate(&self, g: &Graph) -> Result<(), String> {
        match self {
            OuterplanarResult::Outerplanar { cone_embedding } => cone_embedding.validate(&g.join(&Graph::new(1))),
            OuterplanarResult::NotOuterplanar { obstruction } => {
                let t = &obstruction.target;
                if *t != complete(4) && *t != k23() {
                    return Err("obstruction target is neither K4 nor K2,3".into());
                }
                validate_certificate(g, obstruction)
            }
        }
    }
}

/// `K_{2,3}` with parts `{0,1}` and `{2,3,4}`.
pub fn k23() -> Graph {
    empty(2).join(&empty(3))
}

/// Decision only. The order must be below the graph size limit, since the test adds a vertex.
pub fn outerplanar(g: &Graph) -> bool {
    let n = g.order();
    if n >= 2 && g.size() > 2 * n - 3 {
        return false;
    }
    planar(&g.join(&Graph::new(1)))
}

pub fn is_outerplanar(g: &Graph) -> OuterplanarResult {
    let cone = g.join(&Graph::new(1));
    let apex = g.order();
    match is_planar(&cone) {
        PlanarityResult::Planar { embedding } => OuterplanarResult::Outerplanar {
            cone_embedding: embedding,
        },
        PlanarityResult::Nonplanar { obstruction } => {
            let holder = (0..obstruction.target.order())
                .find(|&i| obstruction.branch_sets[i].contains(&apex))
                .unwrap_or(0);
            let keep: Vec<usize> = (0..obstruction.target.order()).filter(|&i| i != holder).collect();
            let sets: Vec<VertexSet> = keep.iter().map(|&i| obstruction.branch_set(i) & !bit(apex)).collect();
            let target = if obstruction.target.order() == 5 {
                complete(4)
            } else if holder < 3 {
                k23()
            } else {
                // the removed vertex was on the second side: put the surviving
                // two-vertex side first
                let reordered = vec![sets[3], sets[4], sets[0], sets[1], sets[2]];
                return OuterplanarResult::NotOuterplanar {
                    obstruction: MinorCertificate::from_branch_sets(g, &k23(), &reordered).expect("restricted Kuratowski minor"),
                };
            };
            OuterplanarResult::NotOuterplanar {
                obstruction: MinorCertificate::from_branch_sets(g, &target, &sets).expect("restricted Kuratowski minor"),
            }
        }
    }
}

/// Every component is a path (isolated vertices included).
pub fn is_linear_forest(g: &Graph) -> bool {
    g.max_degree() <= 2 && !g.has_cycle()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{cycle, enumerate_max_outerplanar, path_by_edges, wheel};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kuratowski_graphs() {
        for (g, order) in [(complete(5), 5), (NamedGraph::K33.graph(), 6), (NamedGraph::Petersen.graph(), 6)] {
            let r = is_planar(&g);
            assert!(!r.is_planar());
            r.validate(&g).unwrap();
            if let PlanarityResult::Nonplanar { obstruction } = r {
                assert_eq!(obstruction.target.order(), order);
            }
        }
    }

    #[test]
    fn planar_families_embed() {
        let graphs = [
            complete(4),
            wheel(9).unwrap(),
            NamedGraph::TriangularPrism.graph(),
            wheel(7).unwrap().complement(),
            cycle(8).unwrap(),
            path_by_edges(5),
            Graph::new(3),
            // two triangles sharing a cut vertex plus a pendant edge
            Graph::from_edges(7, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4), (4, 5)]).unwrap(),
        ];
        for g in graphs {
            let r = is_planar(&g);
            assert!(r.is_planar(), "{g:?}");
            r.validate(&g).unwrap();
        }
        for g in enumerate_max_outerplanar(7).unwrap() {
            assert!(planar(&g.complement()));
        }
    }

    #[test]
    fn outerplanarity() {
        assert!(is_outerplanar(&cycle(7).unwrap()).is_outerplanar());
        for g in [complete(4), k23(), wheel(6).unwrap(), NamedGraph::K33.graph()] {
            let r = is_outerplanar(&g);
            assert!(!r.is_outerplanar());
            r.validate(&g).unwrap();
        }
        for n in 3..=9 {
            for g in enumerate_max_outerplanar(n).unwrap() {
                let r = is_outerplanar(&g);
                r.validate(&g).unwrap();
                assert!(r.is_outerplanar());
                for (u, v) in g.non_edges() {
                    assert!(!outerplanar(&g.add_edge(u, v).unwrap()));
                }
            }
        }
    }

    #[test]
    fn linear_forests() {
        assert!(is_linear_forest(&path_by_edges(3)));
        assert!(!is_linear_forest(&complete(3)));
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(!is_linear_forest(&star));
        let mop5 = &enumerate_max_outerplanar(5).unwrap()[0];
        assert!(is_linear_forest(&mop5.complement()));
    }

    /// Independent oracle: a graph is planar iff it has no K5 or K3,3 minor.
    /// Minors are found by brute force over branch-set assignments.
    fn has_kuratowski_minor_brute(g: &Graph) -> bool {
        fn assign(g: &Graph, labels: &mut Vec<usize>, v: usize, parts: usize, target: &Graph) -> bool {
            if v == g.order() {
                let sets: Vec<VertexSet> = (1..=parts)
                    .map(|p| (0..g.order()).filter(|&x| labels[x] == p).fold(0, |s, x| s | bit(x)))
                    .collect();
                return sets.iter().all(|&s| s != 0 && g.is_connected_set(s))
                    && target.edges().all(|(a, b)| members(sets[a]).any(|x| g.neighbors(x) & sets[b] != 0));
            }
            for l in 0..=parts {
                labels[v] = l;
                if assign(g, labels, v + 1, parts, target) {
                    return true;
                }
            }
            false
        }
        [complete(5), NamedGraph::K33.graph()].iter().any(|t| {
            let mut labels = vec![0; g.order()];
            assign(g, &mut labels, 0, t.order(), t)
        })
    }

    #[test]
    fn agrees_with_minor_oracle_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..150 {
            let n = rng.gen_range(5..=7);
            let p = rng.gen_range(0.3..0.9);
            let mut g = Graph::new(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        g.insert_edge(u, v);
                    }
                }
            }
            let r = is_planar(&g);
            r.validate(&g).unwrap();
            assert_eq!(r.is_planar(), !has_kuratowski_minor_brute(&g), "{g:?}");
            assert_eq!(planar(&g), r.is_planar());
        }
    }
}
