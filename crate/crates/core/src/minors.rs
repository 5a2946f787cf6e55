//! Minor containment: certificates, their validation, and the search.
//!
//! The search walks contractions of the host graph. Each state is a partition
//! of the host into connected parts (the quotient graph `Q`); the target is a
//! minor iff it is a subgraph of some reachable `Q`, so every state is checked
//! for a subgraph embedding before contracting further. States are memoised up
//! to isomorphism and pruned once `Q` has fewer edges than the target.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::budget::{Budget, Meter};
use crate::canon::{canonical_form, MAX_CANON_ORDER};
use crate::error::BudgetError;
use crate::families::complete;
use crate::graph::{bit, members, set_of, Graph, VertexSet};

/// Witness that `target` is a minor of some host graph: one connected branch
/// set per target vertex, and one host edge for every target edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorCertificate {
    pub target: Graph,
    pub branch_sets: Vec<Vec<usize>>,
    pub edge_witnesses: Vec<EdgeWitness>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeWitness {
    pub target_edge: (usize, usize),
    pub host_edge: (usize, usize),
}

impl MinorCertificate {
    /// Builds a certificate from branch sets, choosing the smallest witnessing host edge
    /// for each target edge.
    pub fn from_branch_sets(g: &Graph, target: &Graph, branch_sets: &[VertexSet]) -> Result<Self, String> {
        if branch_sets.len() != target.order() {
            return Err(format!(
                "{} branch sets for a target of order {}",
                branch_sets.len(),
                target.order()
            ));
        }
        let mut edge_witnesses = Vec::with_capacity(target.size());
        for (a, b) in target.edges() {
            let found = members(branch_sets[a])
                .filter(|&x| x < g.order())
                .find_map(|x| members(g.neighbors(x) & branch_sets[b]).next().map(|y| (x, y)));
            match found {
                Some(host_edge) => edge_witnesses.push(EdgeWitness {
                    target_edge: (a, b),
                    host_edge,
                }),
                None => return Err(format!("no host edge between branch sets of {a} and {b}")),
            }
        }
        let cert = MinorCertificate {
            target: target.clone(),
            branch_sets: branch_sets.iter().map(|&s| members(s).collect()).collect(),
            edge_witnesses,
        };
        validate_certificate(g, &cert)?;
        Ok(cert)
    }

    pub fn branch_set(&self, h: usize) -> VertexSet {
        set_of(self.branch_sets[h].iter().copied())
    }

    /// Same certificate for a host whose vertices were renamed by `map` (old index -> new index).
    pub fn relabel_host(&self, map: &[usize]) -> MinorCertificate {
        MinorCertificate {
            target: self.target.clone(),
            branch_sets: self
                .branch_sets
                .iter()
                .map(|s| {
                    let mut v: Vec<usize> = s.iter().map(|&x| map[x]).collect();
                    v.sort_unstable();
                    v
                })
                .collect(),
            edge_witnesses: self
                .edge_witnesses
                .iter()
                .map(|w| EdgeWitness {
                    target_edge: w.target_edge,
                    host_edge: (map[w.host_edge.0], map[w.host_edge.1]),
                })
                .collect(),
        }
    }
}

/// Checks a certificate against `g` without trusting whoever produced it.
pub fn validate_certificate(g: &Graph, cert: &MinorCertificate) -> Result<(), String> {
    let h = &cert.target;
    if cert.branch_sets.len() != h.order() {
        return Err(format!(
            "{} branch sets for a target of order {}",
            cert.branch_sets.len(),
            h.order()
        ));
    }
    let mut used: VertexSet = 0;
    let mut sets = Vec::with_capacity(h.order());
    for (i, bs) in cert.branch_sets.iter().enumerate() {
        if bs.is_empty() {
            return Err(format!("branch set {i} is empty"));
        }
        let mut s: VertexSet = 0;
        for &v in bs {
            if v >= g.order() {
                return Err(format!("branch set {i} names vertex {v} outside the host"));
            }
            if s & bit(v) != 0 {
                return Err(format!("branch set {i} lists vertex {v} twice"));
            }
            s |= bit(v);
        }
        if s & used != 0 {
            return Err(format!("branch set {i} overlaps an earlier branch set"));
        }
        if !g.is_connected_set(s) {
            return Err(format!("branch set {i} is not connected"));
        }
        used |= s;
        sets.push(s);
    }
    let mut covered = vec![false; h.order() * h.order()];
    for w in &cert.edge_witnesses {
        let (a, b) = w.target_edge;
        let (x, y) = w.host_edge;
        if a >= h.order() || b >= h.order() || !h.has_edge(a, b) {
            return Err(format!("witness for {a}-{b}, which is not a target edge"));
        }
        if x >= g.order() || y >= g.order() || !g.has_edge(x, y) {
            return Err(format!("witness {x}-{y} is not a host edge"));
        }
        let forward = sets[a] & bit(x) != 0 && sets[b] & bit(y) != 0;
        let backward = sets[a] & bit(y) != 0 && sets[b] & bit(x) != 0;
        if !forward && !backward {
            return Err(format!("host edge {x}-{y} does not join branch sets {a} and {b}"));
        }
        covered[a * h.order() + b] = true;
        covered[b * h.order() + a] = true;
    }
    if let Some((a, b)) = h.edges().find(|&(a, b)| !covered[a * h.order() + b]) {
        return Err(format!("target edge {a}-{b} has no witness"));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum MinorResult {
    Found { certificate: MinorCertificate },
    /// The search was exhaustive.
    NotFound,
    /// The search stopped early; nothing is claimed.
    Inconclusive { reason: String },
}

impl MinorResult {
    pub fn is_found(&self) -> bool {
        matches!(self, MinorResult::Found { .. })
    }

    pub fn certificate(&self) -> Option<&MinorCertificate> {
        match self {
            MinorResult::Found { certificate } => Some(certificate),
            _ => None,
        }
    }
}

pub fn has_minor(g: &Graph, h: &Graph, budget: &Budget) -> MinorResult {
    let mut meter = budget.start();
    match find_minor(g, h, &mut meter) {
        Ok(Some(certificate)) => MinorResult::Found { certificate },
        Ok(None) => MinorResult::NotFound,
        Err(e) => MinorResult::Inconclusive { reason: e.to_string() },
    }
}

/// Like [`has_minor`], drawing on a shared meter so several searches can share one budget.
pub fn find_minor(g: &Graph, h: &Graph, meter: &mut Meter) -> Result<Option<MinorCertificate>, BudgetError> {
    if h.order() > g.order() || h.size() > g.size() {
        return Ok(None);
    }
    let Some((q, parts)) = reduce(g, h) else {
        return Ok(None);
    };
    let mut solver = Solver {
        h,
        matcher: Matcher::new(h),
        failed: HashSet::new(),
        meter,
    };
    match solver.search(&q, &parts)? {
        Some(sets) => {
            let cert = MinorCertificate::from_branch_sets(g, h, &sets).expect("solver produced a valid model");
            Ok(Some(cert))
        }
        None => Ok(None),
    }
}

/// Removes host vertices no model needs and suppresses degree-2 vertices when
/// the target's minimum degree allows it. `None` means the target cannot fit.
fn reduce(g: &Graph, h: &Graph) -> Option<(Graph, Vec<VertexSet>)> {
    let min_deg = (0..h.order()).map(|v| h.degree(v)).min().unwrap_or(0);
    let mut q = g.clone();
    let mut parts: Vec<VertexSet> = (0..g.order()).map(bit).collect();
    loop {
        let deletable = (0..q.order()).find(|&v| {
            let d = q.degree(v);
            (d == 0 && min_deg >= 1) || (d == 1 && min_deg >= 2)
        });
        if let Some(v) = deletable {
            q = q.delete_vertex(v).expect("vertex in range");
            parts.remove(v);
            continue;
        }
        if min_deg >= 3 {
            if let Some(v) = (0..q.order()).find(|&v| q.degree(v) == 2) {
                let x = q.neighbors(v).trailing_zeros() as usize;
                let (a, b) = (v.min(x), v.max(x));
                q = q.contract_edge(a, b).expect("edge exists");
                let merged = parts[a] | parts[b];
                parts[a] = merged;
                parts.remove(b);
                continue;
            }
        }
        break;
    }
    if q.order() < h.order() || q.size() < h.size() {
        return None;
    }
    Some((q, parts))
}

#[derive(Hash, PartialEq, Eq)]
enum StateKey {
    Canonical(crate::canon::CanonicalForm),
    Labelled(Vec<VertexSet>),
}

struct Solver<'a, 'm> {
    h: &'a Graph,
    matcher: Matcher,
    failed: HashSet<StateKey>,
    meter: &'m mut Meter,
}

impl Solver<'_, '_> {
    fn search(&mut self, q: &Graph, parts: &[VertexSet]) -> Result<Option<Vec<VertexSet>>, BudgetError> {
        self.meter.tick()?;
        if q.order() < self.h.order() || q.size() < self.h.size() {
            return Ok(None);
        }
        if let Some(phi) = self.matcher.embed(q) {
            return Ok(Some(phi.iter().map(|&x| parts[x]).collect()));
        }
        if q.order() == self.h.order() {
            return Ok(None);
        }
        let key = if q.order() <= MAX_CANON_ORDER {
            StateKey::Canonical(canonical_form(q).expect("order checked"))
        } else {
            StateKey::Labelled(q.adjacency().to_vec())
        };
        if !self.failed.insert(key) {
            return Ok(None);
        }
        // contractions that keep the most edges first
        let mut options: Vec<(usize, usize, usize)> = q
            .edges()
            .map(|(a, b)| ((q.neighbors(a) & q.neighbors(b)).count_ones() as usize, a, b))
            .collect();
        options.sort_unstable();
        for (common, a, b) in options {
            if q.size() - 1 - common < self.h.size() {
                break;
            }
            let q2 = q.contract_edge(a, b).expect("edge exists");
            let mut parts2 = parts.to_vec();
            parts2[a] |= parts2[b];
            parts2.remove(b);
            if let Some(found) = self.search(&q2, &parts2)? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }
}

/// Injective map `phi` from the vertices of `pattern` into `host` sending
/// edges to edges (`phi[v]` is the image of `v`), if one exists.
pub fn subgraph_embedding(pattern: &Graph, host: &Graph) -> Option<Vec<usize>> {
    Matcher::new(pattern).embed(host)
}

/// Subgraph embedding of a fixed pattern by backtracking over bitsets.
struct Matcher {
    /// Pattern vertices in matching order.
    order: Vec<usize>,
    /// For each position, the earlier positions adjacent to it.
    earlier: Vec<Vec<usize>>,
    degree: Vec<usize>,
    sorted_degrees: Vec<usize>,
    n: usize,
}

impl Matcher {
    fn new(h: &Graph) -> Self {
        let n = h.order();
        let mut order = Vec::with_capacity(n);
        let mut placed: VertexSet = 0;
        while order.len() < n {
            let next = (0..n)
                .filter(|&v| placed & bit(v) == 0)
                .max_by_key(|&v| ((h.neighbors(v) & placed).count_ones(), h.degree(v), std::cmp::Reverse(v)))
                .expect("unplaced vertex");
            placed |= bit(next);
            order.push(next);
        }
        let earlier = (0..n)
            .map(|i| (0..i).filter(|&j| h.has_edge(order[i], order[j])).collect())
            .collect();
        let degree = order.iter().map(|&v| h.degree(v)).collect();
        let mut sorted_degrees = h.degrees();
        sorted_degrees.sort_unstable_by(|a, b| b.cmp(a));
        Matcher {
            order,
            earlier,
            degree,
            sorted_degrees,
            n,
        }
    }

    /// `phi[v]` is the image of pattern vertex `v`.
    fn embed(&self, q: &Graph) -> Option<Vec<usize>> {
        if q.order() < self.n || q.size() < self.sorted_degrees.iter().sum::<usize>() / 2 {
            return None;
        }
        let mut qd = q.degrees();
        qd.sort_unstable_by(|a, b| b.cmp(a));
        if self.sorted_degrees.iter().zip(&qd).any(|(h, q)| h > q) {
            return None;
        }
        let max_deg = self.sorted_degrees.first().copied().unwrap_or(0);
        let mut at_least = vec![0 as VertexSet; max_deg + 1];
        for v in 0..q.order() {
            let d = q.degree(v).min(max_deg);
            for slot in at_least.iter_mut().take(d + 1) {
                *slot |= bit(v);
            }
        }
        let mut image = vec![0usize; self.n];
        if self.extend(q, &at_least, &mut image, 0, 0) {
            let mut phi = vec![0; self.n];
            for (i, &v) in self.order.iter().enumerate() {
                phi[v] = image[i];
            }
            Some(phi)
        } else {
            None
        }
    }

    fn extend(&self, q: &Graph, at_least: &[VertexSet], image: &mut [usize], i: usize, used: VertexSet) -> bool {
        if i == self.n {
            return true;
        }
        let mut cand = at_least[self.degree[i]] & !used;
        for &j in &self.earlier[i] {
            cand &= q.neighbors(image[j]);
        }
        for x in members(cand) {
            image[i] = x;
            if self.extend(q, at_least, image, i + 1, used | bit(x)) {
                return true;
            }
        }
        false
    }
}

/// Largest `k` with a `K_k` minor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hadwiger {
    pub value: usize,
    /// False when a budget stopped the search for `K_{value+1}`; `value` is then a lower bound.
    pub exact: bool,
    pub certificate: MinorCertificate,
}

pub fn hadwiger_number(g: &Graph, budget: &Budget) -> Hadwiger {
    let mut meter = budget.start();
    let mut best = MinorCertificate {
        target: Graph::new(0),
        branch_sets: Vec::new(),
        edge_witnesses: Vec::new(),
    };
    let mut k = 0;
    loop {
        let next = k + 1;
        if next > g.order() || next * (next - 1) / 2 > g.size() {
            return Hadwiger {
                value: k,
                exact: true,
                certificate: best,
            };
        }
        match find_minor(g, &complete(next), &mut meter) {
            Ok(Some(cert)) => {
                best = cert;
                k = next;
            }
            Ok(None) => {
                return Hadwiger {
                    value: k,
                    exact: true,
                    certificate: best,
                }
            }
            Err(_) => {
                return Hadwiger {
                    value: k,
                    exact: false,
                    certificate: best,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::CanonicalForm;
    use crate::families::{all_graphs, cycle, named, wheel};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::{BTreeSet, HashMap};

    /// Every minor of `g` up to isomorphism, by single deletions and contractions.
    fn minor_closure(g: &Graph, memo: &mut HashMap<CanonicalForm, BTreeSet<CanonicalForm>>) -> BTreeSet<CanonicalForm> {
        let key = canonical_form(g).unwrap();
        if let Some(r) = memo.get(&key) {
            return r.clone();
        }
        let mut out = BTreeSet::from([key.clone()]);
        for (u, v) in g.edges().collect::<Vec<_>>() {
            out.extend(minor_closure(&g.remove_edge(u, v).unwrap(), memo));
            out.extend(minor_closure(&g.contract_edge(u, v).unwrap(), memo));
        }
        for v in 0..g.order() {
            out.extend(minor_closure(&g.delete_vertex(v).unwrap(), memo));
        }
        memo.insert(key, out.clone());
        out
    }

    #[test]
    fn agrees_with_naive_oracle_up_to_five_vertices() {
        let catalog: Vec<Graph> = (0..=5).flat_map(|n| all_graphs(n).unwrap()).collect();
        let mut memo = HashMap::new();
        for g in &catalog {
            let minors = minor_closure(g, &mut memo);
            for h in &catalog {
                let r = has_minor(g, h, &Budget::unlimited());
                let expected = minors.contains(&canonical_form(h).unwrap());
                assert_eq!(r.is_found(), expected, "g = {g:?}, h = {h:?}");
                if let Some(c) = r.certificate() {
                    validate_certificate(g, c).unwrap();
                }
            }
        }
    }

    #[test]
    fn small_examples() {
        assert!(has_minor(&complete(7), &complete(6), &Budget::default()).is_found());
        assert!(has_minor(&wheel(8).unwrap(), &complete(4), &Budget::default()).is_found());
        assert_eq!(has_minor(&wheel(8).unwrap(), &complete(5), &Budget::default()), MinorResult::NotFound);
        let p = named("Petersen").unwrap();
        assert!(has_minor(&p, &complete(5), &Budget::default()).is_found());
        assert!(has_minor(&p, &named("K33").unwrap(), &Budget::default()).is_found());
    }

    #[test]
    fn hadwiger_numbers() {
        let h = hadwiger_number(&complete(7), &Budget::default());
        assert_eq!((h.value, h.exact), (7, true));
        let p = named("Petersen").unwrap();
        let h = hadwiger_number(&p, &Budget::default());
        assert_eq!((h.value, h.exact), (5, true));
        validate_certificate(&p, &h.certificate).unwrap();
        // independent check: the oracle sees K5 but not K6 among the Petersen graph's minors
        let minors = minor_closure(&p, &mut HashMap::new());
        assert!(minors.contains(&canonical_form(&complete(5)).unwrap()));
        assert!(!minors.contains(&canonical_form(&complete(6)).unwrap()));
    }

    #[test]
    fn tiny_budget_is_inconclusive_not_negative() {
        let g = wheel(12).unwrap();
        let r = has_minor(&g, &complete(5), &Budget::nodes(3));
        assert!(matches!(r, MinorResult::Inconclusive { .. }), "{r:?}");
    }

    #[test]
    fn dense_random_graphs_have_k6_minors() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.gen_range(6..=10);
            let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            for i in (1..pairs.len()).rev() {
                pairs.swap(i, rng.gen_range(0..=i));
            }
            let g = Graph::from_edges(n, &pairs[..4 * n - 9]).unwrap();
            let r = has_minor(&g, &complete(6), &Budget::default());
            validate_certificate(&g, r.certificate().expect("K6 minor")).unwrap();
        }
    }

    #[test]
    fn validation_catches_bad_certificates() {
        let g = cycle(6).unwrap();
        let k3 = complete(3);
        let good = MinorCertificate::from_branch_sets(&g, &k3, &[0b11, 0b1100, 0b110000]).unwrap();
        assert!(validate_certificate(&g, &good).is_ok());

        let mut overlap = good.clone();
        overlap.branch_sets[1] = vec![1, 2];
        assert!(validate_certificate(&g, &overlap).unwrap_err().contains("overlaps"));

        let mut disconnected = good.clone();
        disconnected.branch_sets[0] = vec![0, 2];
        disconnected.branch_sets[1] = vec![3];
        assert!(validate_certificate(&g, &disconnected).is_err());

        let mut missing = good.clone();
        missing.edge_witnesses.pop();
        assert!(validate_certificate(&g, &missing).unwrap_err().contains("no witness"));

        assert!(MinorCertificate::from_branch_sets(&g, &k3, &[0b1, 0b10, 0b100]).is_err());
    }
}
