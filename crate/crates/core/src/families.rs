//! Constructors and up-to-isomorphism enumerators for the graph families in use.
//!
//! Labelling conventions (stable, relied on by replayed certificates):
//!
//! * `wheel(n)`: rim vertices `0..n-1` in cycle order, labelled `v1..v{n-1}`;
//!   the hub is vertex `n-1`, labelled `v{n}`.
//! * `elongated_prism(s1, s2, s3)`: vertices `0..6` are `v1..v6`. The triangles
//!   are `v1 v3 v5` and `v2 v4 v6`; the subdivided paths run `v1 -> v2`,
//!   `v3 -> v4`, `v5 -> v6`. Subdivision vertices follow at indices `6..` and are
//!   lettered `a, b, c, ...` in path order: first along `v1 -> v2`, then
//!   `v3 -> v4`, then `v5 -> v6`.
//! * maximal outerplanar graphs keep their polygon labelling: the outer cycle is
//!   `0, 1, ..., n-1` (labels `v1..vn`), everything else is a chord.
//! * `path_by_edges(2)` is `u - w - v` with the middle vertex `w` at index 1.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, CanonicalForm};
use crate::error::GraphError;
use crate::graph::Graph;

/// Largest order accepted by [`enumerate_max_outerplanar`].
pub const MAX_OUTERPLANAR_ENUM_ORDER: usize = 12;

fn v_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("v{i}")).collect()
}

pub fn empty(n: usize) -> Graph {
    Graph::new(n)
}

pub fn complete(n: usize) -> Graph {
    Graph::new(n).complement()
}

/// Cycle `0 - 1 - ... - (n-1) - 0`. `n = 0` gives the empty graph; 1 and 2 are rejected.
pub fn cycle(n: usize) -> Result<Graph, GraphError> {
    if n == 1 || n == 2 {
        return Err(GraphError::InvalidArgument(format!(
            "a simple cycle needs at least 3 vertices, got {n}"
        )));
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges)
}

/// Path with `k` edges on `k + 1` vertices.
pub fn path_by_edges(k: usize) -> Graph {
    let edges: Vec<_> = (0..k).map(|i| (i, i + 1)).collect();
    let g = Graph::from_edges(k + 1, &edges).expect("path edges are valid");
    if k == 2 {
        g.with_labels(vec!["u", "w", "v"])
    } else {
        g
    }
}

/// Wheel of order `n >= 4`: hub `n - 1` joined to the rim cycle on `0..n-1`.
pub fn wheel(n: usize) -> Result<Graph, GraphError> {
    if n < 4 {
        return Err(GraphError::InvalidArgument(format!(
            "wheel order must be at least 4, got {n}"
        )));
    }
    let rim = cycle(n - 1)?;
    Ok(rim.join(&Graph::new(1)).with_labels(v_labels(n)))
}

/// Subdivision counts for the three non-triangle edges of the triangular prism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrismSubdivision {
    pub s1: usize,
    pub s2: usize,
    pub s3: usize,
}

impl PrismSubdivision {
    pub fn new(s1: usize, s2: usize, s3: usize) -> Self {
        PrismSubdivision { s1, s2, s3 }
    }

    pub fn order(&self) -> usize {
        6 + self.s1 + self.s2 + self.s3
    }

    /// Same class with counts sorted in decreasing order.
    pub fn normalized(&self) -> Self {
        let mut s = [self.s1, self.s2, self.s3];
        s.sort_unstable_by(|a, b| b.cmp(a));
        PrismSubdivision::new(s[0], s[1], s[2])
    }

    /// How many of the three edges carry at least one subdivision vertex.
    pub fn subdivided_edges(&self) -> usize {
        [self.s1, self.s2, self.s3].iter().filter(|&&s| s > 0).count()
    }
}

impl fmt::Display for PrismSubdivision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.s1, self.s2, self.s3)
    }
}

fn letter(i: usize) -> String {
    let mut s = String::new();
    let mut i = i;
    loop {
        s.insert(0, (b'a' + (i % 26) as u8) as char);
        if i < 26 {
            break;
        }
        i = i / 26 - 1;
    }
    s
}

/// Two triangles joined by three internally disjoint paths with `s_i` inner vertices.
pub fn elongated_prism(s: PrismSubdivision) -> Graph {
    let n = s.order();
    let mut g = Graph::new(n);
    let mut labels = v_labels(6);
    for (a, b) in [(0, 2), (2, 4), (0, 4), (1, 3), (3, 5), (1, 5)] {
        g.insert_edge(a, b);
    }
    let mut next = 6;
    for (start, end, count) in [(0, 1, s.s1), (2, 3, s.s2), (4, 5, s.s3)] {
        let mut prev = start;
        for _ in 0..count {
            g.insert_edge(prev, next);
            labels.push(letter(next - 6));
            prev = next;
            next += 1;
        }
        g.insert_edge(prev, end);
    }
    g.with_labels(labels)
}

/// One subdivision class per multiset `{s1, s2, s3}` summing to `n - 6`, in decreasing order.
pub fn prism_subdivisions(n: usize) -> Vec<PrismSubdivision> {
    if n < 6 {
        return Vec::new();
    }
    let extra = n - 6;
    let mut out = Vec::new();
    for s1 in (0..=extra).rev() {
        for s2 in (0..=s1.min(extra - s1)).rev() {
            let s3 = extra - s1 - s2;
            if s3 <= s2 {
                out.push(PrismSubdivision::new(s1, s2, s3));
            }
        }
    }
    out
}

pub fn enumerate_elongated_prisms(n: usize) -> Vec<Graph> {
    prism_subdivisions(n).into_iter().map(elongated_prism).collect()
}

/// Chord list of a polygon triangulation.
pub type Chords = Vec<(usize, usize)>;

/// All triangulations of the convex polygon `0..n`, each as its chord list.
pub fn polygon_triangulations(n: usize) -> Vec<Chords> {
    fn tri(i: usize, j: usize, memo: &mut BTreeMap<(usize, usize), Vec<Chords>>) -> Vec<Chords> {
        if j - i < 2 {
            return vec![Vec::new()];
        }
        if let Some(r) = memo.get(&(i, j)) {
            return r.clone();
        }
        let mut out = Vec::new();
        for k in i + 1..j {
            let left = tri(i, k, memo);
            let right = tri(k, j, memo);
            for l in &left {
                for r in &right {
                    let mut chords = l.clone();
                    chords.extend_from_slice(r);
                    if k > i + 1 {
                        chords.push((i, k));
                    }
                    if j > k + 1 {
                        chords.push((k, j));
                    }
                    out.push(chords);
                }
            }
        }
        memo.insert((i, j), out.clone());
        out
    }
    if n < 3 {
        return Vec::new();
    }
    let mut all = tri(0, n - 1, &mut BTreeMap::new());
    for t in &mut all {
        t.sort_unstable();
    }
    all
}

/// Maximal outerplanar graph on the polygon `0..n` with the given chords.
pub fn max_outerplanar_from_chords(n: usize, chords: &[(usize, usize)]) -> Result<Graph, GraphError> {
    let mut g = cycle(n)?;
    for &(a, b) in chords {
        g = g.add_edge(a, b)?;
    }
    Ok(g.with_labels(v_labels(n)))
}

/// Maximal outerplanar graphs on `n` vertices up to isomorphism, as polygon
/// triangulations. Each class keeps its lexicographically first chord list;
/// the list is sorted by canonical form.
pub fn enumerate_max_outerplanar(n: usize) -> Result<Vec<Graph>, GraphError> {
    Ok(max_outerplanar_classes(n)?
        .into_iter()
        .map(|(_, chords)| max_outerplanar_from_chords(n, &chords).expect("valid triangulation"))
        .collect())
}

/// Canonical form and representative chord list of every maximal outerplanar class.
pub fn max_outerplanar_classes(n: usize) -> Result<Vec<(CanonicalForm, Chords)>, GraphError> {
    if n < 3 {
        return Err(GraphError::InvalidArgument(format!(
            "maximal outerplanar graphs need at least 3 vertices, got {n}"
        )));
    }
    if n > MAX_OUTERPLANAR_ENUM_ORDER {
        return Err(GraphError::TooLarge {
            order: n,
            limit: MAX_OUTERPLANAR_ENUM_ORDER,
        });
    }
    let mut classes: BTreeMap<CanonicalForm, Vec<(usize, usize)>> = BTreeMap::new();
    for chords in polygon_triangulations(n) {
        let g = max_outerplanar_from_chords(n, &chords)?;
        let key = canonical_form(&g)?;
        match classes.get(&key) {
            Some(existing) if *existing <= chords => {}
            _ => {
                classes.insert(key, chords);
            }
        }
    }
    Ok(classes.into_iter().collect())
}

/// Largest order accepted by [`all_graphs`].
pub const MAX_CATALOG_ORDER: usize = 8;

/// Every graph on `n` vertices up to isomorphism, sorted by canonical form.
/// Built by adding a vertex with every possible neighbourhood to each graph on `n - 1` vertices.
pub fn all_graphs(n: usize) -> Result<Vec<Graph>, GraphError> {
    if n > MAX_CATALOG_ORDER {
        return Err(GraphError::TooLarge {
            order: n,
            limit: MAX_CATALOG_ORDER,
        });
    }
    let mut level: BTreeMap<CanonicalForm, Graph> = BTreeMap::new();
    let g0 = Graph::new(0);
    level.insert(canonical_form(&g0)?, g0);
    for m in 1..=n {
        let mut next = BTreeMap::new();
        for g in level.values() {
            for nb in 0..(1u64 << (m - 1)) {
                let mut adj = g.adjacency().to_vec();
                for (v, a) in adj.iter_mut().enumerate() {
                    if nb >> v & 1 == 1 {
                        *a |= 1 << (m - 1);
                    }
                }
                adj.push(nb);
                let h = Graph::from_adjacency_unchecked(adj);
                next.entry(canonical_form(&h)?).or_insert(h);
            }
        }
        level = next;
    }
    Ok(level.into_values().collect())
}

/// Fixed small graphs with frozen labellings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NamedGraph {
    K5,
    K33,
    K6,
    K7,
    /// `K_{3,3,1,1}`: parts `{0,1,2}`, `{3,4,5}`, `{6}`, `{7}`.
    K3311,
    /// Outer 5-cycle `0..5`, inner pentagram on `5..10`, spokes `i - (i+5)`.
    Petersen,
    /// Same labelling as `elongated_prism(0, 0, 0)`.
    TriangularPrism,
}

impl NamedGraph {
    pub const ALL: [NamedGraph; 7] = [
        NamedGraph::K5,
        NamedGraph::K33,
        NamedGraph::K6,
        NamedGraph::K7,
        NamedGraph::K3311,
        NamedGraph::Petersen,
        NamedGraph::TriangularPrism,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            NamedGraph::K5 => "K5",
            NamedGraph::K33 => "K33",
            NamedGraph::K6 => "K6",
            NamedGraph::K7 => "K7",
            NamedGraph::K3311 => "K331_1",
            NamedGraph::Petersen => "Petersen",
            NamedGraph::TriangularPrism => "TriangularPrism",
        }
    }

    pub fn graph(&self) -> Graph {
        match self {
            NamedGraph::K5 => complete(5),
            NamedGraph::K6 => complete(6),
            NamedGraph::K7 => complete(7),
            NamedGraph::K33 => empty(3).join(&empty(3)),
            NamedGraph::K3311 => empty(3).join(&empty(3)).join(&complete(2)),
            NamedGraph::Petersen => {
                let mut edges = Vec::new();
                for i in 0..5 {
                    edges.push((i, (i + 1) % 5));
                    edges.push((5 + i, 5 + (i + 2) % 5));
                    edges.push((i, i + 5));
                }
                Graph::from_edges(10, &edges).expect("Petersen edges are valid")
            }
            NamedGraph::TriangularPrism => elongated_prism(PrismSubdivision::new(0, 0, 0)),
        }
    }
}

impl FromStr for NamedGraph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.to_ascii_lowercase().replace(['_', ',', '{', '}', ' '], "");
        let found = match key.as_str() {
            "k5" => NamedGraph::K5,
            "k33" => NamedGraph::K33,
            "k6" => NamedGraph::K6,
            "k7" => NamedGraph::K7,
            "k3311" => NamedGraph::K3311,
            "petersen" => NamedGraph::Petersen,
            "triangularprism" | "prism" => NamedGraph::TriangularPrism,
            _ => return Err(GraphError::InvalidArgument(format!("unknown named graph {s:?}"))),
        };
        Ok(found)
    }
}

pub fn named(id: &str) -> Result<Graph, GraphError> {
    Ok(id.parse::<NamedGraph>()?.graph())
}

/// Symbolic description of a family instance.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    MaxOuterplanar { order: usize, chords: Vec<(usize, usize)> },
    Wheel { order: usize },
    ElongatedPrism { subdivision: PrismSubdivision },
    Join { left: Box<FamilySpec>, right: Box<FamilySpec> },
    Named { id: NamedGraph },
    Cycle { order: usize },
    Path { edges: usize },
    Complete { order: usize },
    Empty { order: usize },
}

impl FamilySpec {
    pub fn join(left: FamilySpec, right: FamilySpec) -> FamilySpec {
        FamilySpec::Join {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    pub fn order(&self) -> usize {
        match self {
            FamilySpec::MaxOuterplanar { order, .. }
            | FamilySpec::Wheel { order }
            | FamilySpec::Cycle { order }
            | FamilySpec::Complete { order }
            | FamilySpec::Empty { order } => *order,
            FamilySpec::ElongatedPrism { subdivision } => subdivision.order(),
            FamilySpec::Join { left, right } => left.order() + right.order(),
            FamilySpec::Named { id } => id.graph().order(),
            FamilySpec::Path { edges } => edges + 1,
        }
    }

    pub fn build(&self) -> Result<Graph, GraphError> {
        Ok(match self {
            FamilySpec::MaxOuterplanar { order, chords } => max_outerplanar_from_chords(*order, chords)?,
            FamilySpec::Wheel { order } => wheel(*order)?,
            FamilySpec::ElongatedPrism { subdivision } => elongated_prism(*subdivision),
            FamilySpec::Join { left, right } => {
                let (l, r) = (left.build()?, right.build()?);
                if l.order() + r.order() > crate::graph::MAX_ORDER {
                    return Err(GraphError::TooLarge {
                        order: l.order() + r.order(),
                        limit: crate::graph::MAX_ORDER,
                    });
                }
                l.join(&r)
            }
            FamilySpec::Named { id } => id.graph(),
            FamilySpec::Cycle { order } => cycle(*order)?,
            FamilySpec::Path { edges } => path_by_edges(*edges),
            FamilySpec::Complete { order } => complete(*order),
            FamilySpec::Empty { order } => empty(*order),
        })
    }

    /// Short family name used to group report entries.
    pub fn family(&self) -> &'static str {
        match self {
            FamilySpec::MaxOuterplanar { .. } => "maxouterplanar",
            FamilySpec::Wheel { .. } => "wheel",
            FamilySpec::ElongatedPrism { .. } => "eprism",
            FamilySpec::Join { .. } => "join",
            FamilySpec::Named { .. } => "named",
            FamilySpec::Cycle { .. } => "cycle",
            FamilySpec::Path { .. } => "path",
            FamilySpec::Complete { .. } => "complete",
            FamilySpec::Empty { .. } => "empty",
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::MaxOuterplanar { order, chords } => {
                write!(f, "maxouterplanar({order};")?;
                for (i, (a, b)) in chords.iter().enumerate() {
                    write!(f, "{}{}-{}", if i == 0 { "" } else { "," }, a, b)?;
                }
                write!(f, ")")
            }
            FamilySpec::Wheel { order } => write!(f, "W{order}"),
            FamilySpec::ElongatedPrism { subdivision } => write!(f, "eprism{subdivision}"),
            FamilySpec::Join { left, right } => write!(f, "({left} + {right})"),
            FamilySpec::Named { id } => write!(f, "{}", id.id()),
            FamilySpec::Cycle { order } => write!(f, "C{order}"),
            FamilySpec::Path { edges } => write!(f, "P{edges}"),
            FamilySpec::Complete { order } => write!(f, "K{order}"),
            FamilySpec::Empty { order } => write!(f, "E{order}"),
        }
    }
}

/// Every instance of the three maximal non-separating families at order `n`:
/// maximal outerplanar graphs, the wheel, and the elongated prisms.
pub fn maximal_nonseparating(n: usize) -> Result<Vec<FamilySpec>, GraphError> {
    let mut out: Vec<FamilySpec> = max_outerplanar_classes(n)?
        .into_iter()
        .map(|(_, chords)| FamilySpec::MaxOuterplanar { order: n, chords })
        .collect();
    if n >= 4 {
        out.push(FamilySpec::Wheel { order: n });
    }
    out.extend(
        prism_subdivisions(n)
            .into_iter()
            .map(|subdivision| FamilySpec::ElongatedPrism { subdivision }),
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::is_isomorphic;
    use std::collections::BTreeSet;

    #[test]
    fn wheel_shapes() {
        assert!(is_isomorphic(&wheel(4).unwrap(), &complete(4)).unwrap());
        let w10 = wheel(10).unwrap();
        assert_eq!(w10.degree(9), 9);
        assert!((0..9).all(|v| w10.degree(v) == 3));
        assert!(wheel(3).is_err());
        assert_eq!(w10.label(9), "v10");
    }

    #[test]
    fn small_constructors() {
        let p2 = path_by_edges(2);
        assert_eq!((p2.order(), p2.size()), (3, 2));
        assert_eq!(p2.degree(1), 2);
        assert_eq!(complete(7).size(), 21);
        assert!(cycle(2).is_err());
        assert_eq!(cycle(0).unwrap().order(), 0);
    }

    #[test]
    fn named_graph_counts() {
        let k3311 = named("K331_1").unwrap();
        assert_eq!((k3311.order(), k3311.size()), (8, 9 + 1 + 4 * 3));
        let p = named("Petersen").unwrap();
        assert_eq!((p.order(), p.size()), (10, 15));
        assert!((0..10).all(|v| p.degree(v) == 3));
        assert!(p.triangles().is_empty());
        // no 4-cycles either: girth 5
        for (u, v) in p.non_edges() {
            assert!((p.neighbors(u) & p.neighbors(v)).count_ones() <= 1);
        }
        assert!(named("K9").is_err());
    }

    #[test]
    fn prism_enumeration() {
        assert_eq!(prism_subdivisions(10).len(), 4);
        assert_eq!(
            prism_subdivisions(10),
            vec![
                PrismSubdivision::new(4, 0, 0),
                PrismSubdivision::new(3, 1, 0),
                PrismSubdivision::new(2, 2, 0),
                PrismSubdivision::new(2, 1, 1),
            ]
        );
        assert_eq!(prism_subdivisions(7).len(), 1);
        let p = elongated_prism(PrismSubdivision::new(0, 0, 0));
        assert_eq!((p.order(), p.size()), (6, 9));
        let q = elongated_prism(PrismSubdivision::new(2, 1, 1));
        assert_eq!(q.order(), 10);
        assert_eq!(q.labels().unwrap()[6..].join(""), "abcd");
        assert!(q.has_edge(q.vertex_by_label("a").unwrap(), 0));
        assert!(q.has_edge(q.vertex_by_label("b").unwrap(), 1));
        assert!(q.has_edge(q.vertex_by_label("d").unwrap(), 4));
        let classes: BTreeSet<_> = enumerate_elongated_prisms(11)
            .iter()
            .map(|g| canonical_form(g).unwrap())
            .collect();
        assert_eq!(classes.len(), prism_subdivisions(11).len());
    }

    #[test]
    fn triangulation_counts_are_catalan() {
        let catalan = [1, 1, 2, 5, 14, 42, 132, 429, 1430];
        for n in 3..=10 {
            assert_eq!(polygon_triangulations(n).len(), catalan[n - 2], "n = {n}");
        }
    }

    /// Brute-force dedup of the 14 hexagon triangulations by explicit relabelling.
    #[test]
    fn hexagon_classes_by_brute_force() {
        let graphs: Vec<Graph> = polygon_triangulations(6)
            .iter()
            .map(|c| max_outerplanar_from_chords(6, c).unwrap())
            .collect();
        assert_eq!(graphs.len(), 14);
        let mut reps: Vec<Graph> = Vec::new();
        let perms = permutations(6);
        for g in graphs {
            if !reps.iter().any(|r| perms.iter().any(|p| g.permute(p) == *r)) {
                reps.push(g);
            }
        }
        assert_eq!(reps.len(), 3);
        assert_eq!(enumerate_max_outerplanar(6).unwrap().len(), 3);
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn max_outerplanar_counts_and_edges() {
        assert_eq!(enumerate_max_outerplanar(5).unwrap().len(), 1);
        // triangulated polygons up to rotation and reflection
        let known = [(7, 4), (8, 12), (9, 27), (10, 82)];
        for (n, count) in known {
            let all = enumerate_max_outerplanar(n).unwrap();
            assert_eq!(all.len(), count, "n = {n}");
            assert!(all.iter().all(|g| g.size() == 2 * n - 3));
        }
        assert!(enumerate_max_outerplanar(13).is_err());
    }

    #[test]
    fn graph_catalog_counts() {
        let counts: Vec<usize> = (0..=6).map(|n| all_graphs(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 11, 34, 156]);
        assert!(all_graphs(9).is_err());
    }

    #[test]
    fn family_spec_builds() {
        let spec = FamilySpec::join(FamilySpec::Wheel { order: 7 }, FamilySpec::Empty { order: 2 });
        let g = spec.build().unwrap();
        assert_eq!(spec.order(), 9);
        assert_eq!(g.size(), 4 * 9 - 10);
        assert_eq!(spec.to_string(), "(W7 + E2)");
        let all = maximal_nonseparating(10).unwrap();
        assert_eq!(all.len(), 82 + 1 + 4);
        let json = serde_json::to_string(&all[0]).unwrap();
        let back: FamilySpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, all[0]);
    }
}
