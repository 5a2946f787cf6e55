//! Canonical labelling for small graphs.
//!
//! Individualisation-refinement search: colour refinement to an equitable
//! partition, branch on the first non-singleton cell, keep the leaf whose
//! relabelled adjacency matrix is lexicographically largest. Automorphisms
//! found at leaves prune sibling branches (orbit pruning) and let the search
//! jump back to the point where the current path left a known-equivalent one.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::graph::{bit, Graph, VertexSet};
use crate::io::to_graph6;

/// Largest order accepted by [`canonical_form`].
pub const MAX_CANON_ORDER: usize = 16;

/// Canonical encoding of an isomorphism class (graph6 bytes of the canonical relabelling).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm(pub Vec<u8>);

impl CanonicalForm {
    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.0).expect("graph6 is ASCII")
    }
}

impl std::fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Canonical byte string; equal for two graphs iff they are isomorphic.
pub fn canonical_form(g: &Graph) -> Result<CanonicalForm, GraphError> {
    Ok(CanonicalForm(to_graph6(&canonical_graph(g)?).into_bytes()))
}

/// The canonical relabelling of `g` (labels dropped).
pub fn canonical_graph(g: &Graph) -> Result<Graph, GraphError> {
    let perm = canonical_labeling(g)?;
    let mut c = g.permute(&perm);
    c = Graph::from_adjacency_unchecked(c.adjacency().to_vec());
    Ok(c)
}

/// Permutation `perm` with `perm[v]` = canonical position of vertex `v`.
pub fn canonical_labeling(g: &Graph) -> Result<Vec<usize>, GraphError> {
    let n = g.order();
    if n > MAX_CANON_ORDER {
        return Err(GraphError::TooLarge {
            order: n,
            limit: MAX_CANON_ORDER,
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut search = Search {
        g,
        n,
        first: None,
        best: None,
        generators: Vec::new(),
    };
    let root = refine(g, vec![(0..n).collect()]);
    search.descend(root, &mut Vec::new());
    let (_, lab, _) = search.best.expect("search visits at least one leaf");
    let mut perm = vec![0; n];
    for (pos, &v) in lab.iter().enumerate() {
        perm[v] = pos;
    }
    Ok(perm)
}

pub fn is_isomorphic(g: &Graph, h: &Graph) -> Result<bool, GraphError> {
    if g.order() != h.order() || g.size() != h.size() {
        return Ok(false);
    }
    let mut dg = g.degrees();
    let mut dh = h.degrees();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return Ok(false);
    }
    Ok(canonical_form(g)? == canonical_form(h)?)
}

type Cells = Vec<Vec<usize>>;

/// Splits cells by neighbour counts into each cell until the partition is equitable.
/// Sub-cells are ordered by count, so the result depends only on the graph structure.
fn refine(g: &Graph, mut cells: Cells) -> Cells {
    'outer: loop {
        for wi in 0..cells.len() {
            let splitter: VertexSet = cells[wi].iter().fold(0, |a, &v| a | bit(v));
            let mut next: Cells = Vec::with_capacity(cells.len() + 1);
            let mut split = false;
            for cell in &cells {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut groups: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
                for &v in cell {
                    groups
                        .entry((g.neighbors(v) & splitter).count_ones())
                        .or_default()
                        .push(v);
                }
                if groups.len() > 1 {
                    split = true;
                }
                next.extend(groups.into_values());
            }
            if split {
                cells = next;
                continue 'outer;
            }
        }
        return cells;
    }
}

/// Upper-triangle adjacency bits of the graph relabelled by `lab` (position -> vertex).
fn certificate(g: &Graph, lab: &[usize]) -> u128 {
    let n = lab.len();
    let mut c = 0u128;
    for i in 0..n {
        let row = g.neighbors(lab[i]);
        for &w in &lab[i + 1..n] {
            c = (c << 1) | ((row >> w) & 1) as u128;
        }
    }
    c
}

struct Search<'a> {
    g: &'a Graph,
    n: usize,
    /// First leaf: certificate, labelling, individualised path.
    first: Option<(u128, Vec<usize>, Vec<usize>)>,
    best: Option<(u128, Vec<usize>, Vec<usize>)>,
    generators: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Returns `Some(level)` to unwind the recursion up to the node at depth `level`.
    fn descend(&mut self, cells: Cells, path: &mut Vec<usize>) -> Option<usize> {
        if cells.len() == self.n {
            return self.leaf(&cells, path);
        }
        let depth = path.len();
        let target = cells
            .iter()
            .position(|c| c.len() > 1)
            .expect("non-discrete partition has a non-singleton cell");
        let mut candidates = cells[target].clone();
        candidates.sort_unstable();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &candidates {
            if !tried.is_empty() && self.same_orbit_as_tried(path, &tried, v) {
                continue;
            }
            tried.push(v);
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(vec![v]);
            child.push(cells[target].iter().copied().filter(|&w| w != v).collect());
            child.extend_from_slice(&cells[target + 1..]);
            let child = refine(self.g, child);
            path.push(v);
            let jump = self.descend(child, path);
            path.pop();
            if let Some(level) = jump {
                if level < depth {
                    return Some(level);
                }
            }
        }
        None
    }

    fn leaf(&mut self, cells: &Cells, path: &[usize]) -> Option<usize> {
        let lab: Vec<usize> = cells.iter().map(|c| c[0]).collect();
        let cert = certificate(self.g, &lab);
        let (Some(first), Some(best)) = (&self.first, &self.best) else {
            self.first = Some((cert, lab.clone(), path.to_vec()));
            self.best = Some((cert, lab, path.to_vec()));
            return None;
        };
        let equivalent = if cert == first.0 {
            Some((first.1.clone(), first.2.clone()))
        } else if cert == best.0 {
            Some((best.1.clone(), best.2.clone()))
        } else {
            None
        };
        if let Some((other_lab, other_path)) = equivalent {
            self.record_automorphism(&lab, &other_lab);
            return Some(common_prefix(path, &other_path));
        }
        if cert > best.0 {
            self.best = Some((cert, lab, path.to_vec()));
        }
        None
    }

    /// Stores the automorphism mapping `lab[i]` to `other[i]`.
    fn record_automorphism(&mut self, lab: &[usize], other: &[usize]) {
        let mut gamma = vec![0; self.n];
        for (i, &v) in lab.iter().enumerate() {
            gamma[v] = other[i];
        }
        if gamma.iter().enumerate().any(|(i, &j)| i != j) {
            self.generators.push(gamma);
        }
    }

    /// Orbit test under the known automorphisms that fix `path` pointwise.
    fn same_orbit_as_tried(&self, path: &[usize], tried: &[usize], v: usize) -> bool {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut any = false;
        for gamma in &self.generators {
            if path.iter().all(|&p| gamma[p] == p) {
                any = true;
                for (x, &y) in gamma.iter().enumerate() {
                    let (a, b) = (find(&mut parent, x), find(&mut parent, y));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
        if !any {
            return false;
        }
        let rv = find(&mut parent, v);
        tried.iter().any(|&t| find(&mut parent, t) == rv)
    }
}

fn common_prefix(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    g.insert_edge(u, v);
                }
            }
        }
        g
    }

    /// Brute-force isomorphism over all bijections.
    fn brute_isomorphic(g: &Graph, h: &Graph) -> bool {
        fn extend(g: &Graph, h: &Graph, map: &mut Vec<usize>, used: &mut u64) -> bool {
            let i = map.len();
            if i == g.order() {
                return true;
            }
            for j in 0..h.order() {
                if *used & bit(j) != 0 || g.degree(i) != h.degree(j) {
                    continue;
                }
                if (0..i).all(|k| g.has_edge(i, k) == h.has_edge(j, map[k])) {
                    map.push(j);
                    *used |= bit(j);
                    if extend(g, h, map, used) {
                        return true;
                    }
                    *used &= !bit(j);
                    map.pop();
                }
            }
            false
        }
        g.order() == h.order() && g.size() == h.size() && extend(g, h, &mut Vec::new(), &mut 0)
    }

    #[test]
    fn c5_is_self_complementary() {
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert!(is_isomorphic(&c5, &c5.complement()).unwrap());
    }

    #[test]
    fn k33_is_not_complement_of_c6() {
        let k33 = Graph::new(3).join(&Graph::new(3));
        let c6: Vec<_> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        let c6 = Graph::from_edges(6, &c6).unwrap();
        assert!(!brute_isomorphic(&k33, &c6.complement()));
        assert!(!is_isomorphic(&k33, &c6.complement()).unwrap());
    }

    #[test]
    fn stable_under_random_relabelings() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = random_graph(&mut rng, 9, 0.5);
        let c = canonical_form(&g).unwrap();
        let mut perm: Vec<usize> = (0..9).collect();
        for _ in 0..100 {
            perm.shuffle(&mut rng);
            assert_eq!(canonical_form(&g.permute(&perm)).unwrap(), c);
        }
    }

    #[test]
    fn agrees_with_brute_force_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..400 {
            let n = rng.gen_range(1..=7);
            let g = random_graph(&mut rng, n, 0.5);
            let h = if rng.gen_bool(0.5) {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(&mut rng);
                g.permute(&perm)
            } else {
                random_graph(&mut rng, n, 0.5)
            };
            assert_eq!(
                brute_isomorphic(&g, &h),
                is_isomorphic(&g, &h).unwrap(),
                "{g:?} vs {h:?}"
            );
        }
    }

    #[test]
    fn symmetric_graphs_at_the_size_limit() {
        let k16 = Graph::new(16).complement();
        let e16 = Graph::new(16);
        assert_ne!(canonical_form(&k16).unwrap(), canonical_form(&e16).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut rook = Graph::new(16);
        for a in 0..16 {
            for b in a + 1..16 {
                if a / 4 == b / 4 || a % 4 == b % 4 {
                    rook.insert_edge(a, b);
                }
            }
        }
        let c = canonical_form(&rook).unwrap();
        let mut perm: Vec<usize> = (0..16).collect();
        for _ in 0..20 {
            perm.shuffle(&mut rng);
            assert_eq!(canonical_form(&rook.permute(&perm)).unwrap(), c);
        }
    }

    #[test]
    fn too_large_is_an_error() {
        assert!(matches!(
            canonical_form(&Graph::new(17)),
            Err(GraphError::TooLarge { .. })
        ));
    }
}
