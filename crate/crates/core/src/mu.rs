//! Interval bounds on the Colin de Verdière invariant μ from a fixed set of
//! rules, with a trace that can be re-checked step by step.
//!
//! μ is never computed from matrices. Every bound comes from one of:
//! planarity (μ ≤ 3 exactly when planar), linkless embeddability (μ ≤ 4
//! exactly when nIL), vertex addition (+1 at most), coning (+1 exactly when the
//! base has an edge), minor monotonicity seeded by cliques and the K7 and
//! K3,3,1,1 families, isolated-vertex removal, the lower bounds for complements
//! of planar, outerplanar and path-forest graphs, and the external exact values
//! for outerplanar graphs and linear forests.

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::budget::Budget;
use crate::canon::{canonical_form, canonical_labeling, CanonicalForm};
use crate::error::GraphError;
use crate::families::{complete, NamedGraph};
use crate::graph::{bit, members, set_of, Graph, VertexSet};
use crate::minors::{find_minor, validate_certificate, MinorCertificate};
use crate::moves::{closure, ClosureConfig, MoveKind, YNablaPolicy};
use crate::planarity::{embed, is_linear_forest, is_outerplanar, is_planar, k23, OuterplanarResult, PlanarityResult, RotationSystem};
use crate::topology::{is_il_with, ObstructionLibrary};

/// Largest order accepted by [`mu_bounds`].
pub const MAX_MU_ORDER: usize = 13;
/// Largest order accepted by [`check_klv`].
pub const MAX_KLV_ORDER: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuOptions {
    /// Drop the external exact values for outerplanar graphs and linear forests.
    pub paper_rules_only: bool,
    /// Budget for each minor search. Exhaustion only loses a bound.
    pub budget: Budget,
    /// How many nested subgraph steps (deletion, neighbourhood cone, edge cone) may be taken.
    pub depth: usize,
}

impl Default for MuOptions {
    fn default() -> Self {
        MuOptions {
            paper_rules_only: false,
            budget: Budget::default(),
            depth: 2,
        }
    }
}

/// Graph classes with a known μ bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MuClass {
    Edgeless,
    LinearForest,
    Outerplanar,
    Planar,
}

impl MuClass {
    /// Upper bound on μ for members of the class, as used after deleting vertices.
    /// An edgeless remainder counts 1: the base convention of 0 for edgeless
    /// graphs does not survive adding vertices back (μ(K1,3) = 2).
    pub fn bound(self) -> usize {
        match self {
            MuClass::Edgeless => 1,
            MuClass::LinearForest => 1,
            MuClass::Outerplanar => 2,
            MuClass::Planar => 3,
        }
    }

    /// The bound comes from an external characterisation rather than the core rule set.
    pub fn external(self) -> bool {
        self != MuClass::Planar
    }

    pub fn contains(self, g: &Graph) -> bool {
        match self {
            MuClass::Edgeless => g.size() == 0,
            MuClass::LinearForest => is_linear_forest(g),
            MuClass::Outerplanar => crate::planarity::outerplanar(g),
            MuClass::Planar => crate::planarity::planar(g),
        }
    }

    /// Amount subtracted from the order in the complement lower bound.
    fn complement_offset(self) -> Option<usize> {
        match self {
            MuClass::LinearForest => Some(3),
            MuClass::Outerplanar => Some(4),
            MuClass::Planar => Some(5),
            MuClass::Edgeless => None,
        }
    }
}

/// A rule with the vertices it was applied at.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum MuRule {
    /// μ of a graph without edges is 0 (convention).
    Edgeless,
    /// An edge gives a K2 minor, and μ(K2) = 1 (convention).
    EdgePresent,
    /// Every graph on n vertices is a minor of K_n, and μ(K_n) = n - 1.
    OrderBound,
    /// Planar exactly when μ ≤ 3.
    Planar,
    Nonplanar,
    /// Linklessly embeddable exactly when μ ≤ 4.
    Linkless,
    Linked,
    /// Outerplanar exactly when μ ≤ 2 (external).
    Outerplanar,
    NotOuterplanar,
    /// Linear forest exactly when μ ≤ 1 (external).
    LinearForest,
    NotLinearForest,
    /// Deleting `deleted` leaves a graph of a bounded class; each vertex adds at most 1.
    ApexDeletion { deleted: Vec<usize>, class: MuClass },
    /// μ(H + K1) = μ(H) + 1 when H has an edge.
    ConeVertex { vertex: usize },
    /// Isolated vertices do not change μ once some edge exists.
    IsolatedVertices { vertices: Vec<usize> },
    /// A K_k minor gives μ ≥ k - 1.
    CliqueMinor { k: usize },
    /// A minor from the K7 or K3,3,1,1 family (both moves), all of which have μ = 6.
    FamilyMinor { member: String },
    /// The complement is in a class: planar gives n - 5, outerplanar n - 4, a linear forest n - 3.
    Complement { class: MuClass },
    /// An induced subgraph is a minor.
    Subgraph,
    /// `vertex` cones over its neighbourhood.
    NeighbourhoodCone { vertex: usize },
    /// Contracting the edge `uv` gives a cone over the rest.
    EdgeCone { u: usize, v: usize },
}

impl MuRule {
    pub fn id(&self) -> &'static str {
        match self {
            MuRule::Edgeless => "edgeless",
            MuRule::EdgePresent => "edge-present",
            MuRule::OrderBound => "order-bound",
            MuRule::Planar => "planar",
            MuRule::Nonplanar => "nonplanar",
            MuRule::Linkless => "linkless",
            MuRule::Linked => "linked",
            MuRule::Outerplanar => "outerplanar",
            MuRule::NotOuterplanar => "not-outerplanar",
            MuRule::LinearForest => "linear-forest",
            MuRule::NotLinearForest => "not-linear-forest",
            MuRule::ApexDeletion { .. } => "apex-deletion",
            MuRule::ConeVertex { .. } => "cone-vertex",
            MuRule::IsolatedVertices { .. } => "isolated-vertices",
            MuRule::CliqueMinor { .. } => "clique-minor",
            MuRule::FamilyMinor { .. } => "family-minor",
            MuRule::Complement { .. } => "complement",
            MuRule::Subgraph => "subgraph",
            MuRule::NeighbourhoodCone { .. } => "neighbourhood-cone",
            MuRule::EdgeCone { .. } => "edge-cone",
        }
    }

    /// Rests on an external fact rather than the core rule set.
    pub fn external(&self) -> bool {
        match self {
            MuRule::Edgeless
            | MuRule::EdgePresent
            | MuRule::Outerplanar
            | MuRule::NotOuterplanar
            | MuRule::LinearForest
            | MuRule::NotLinearForest => true,
            MuRule::ApexDeletion { class, .. } => class.external(),
            _ => false,
        }
    }
}

/// What a step relies on, in a form that can be checked again.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Premise {
    /// Read off the graph directly.
    Structural,
    Embedding { embedding: RotationSystem },
    Minor { certificate: MinorCertificate },
    /// Established by an exhaustive search; re-checking repeats it.
    Search,
    /// Bounds of the subgraph induced on `vertices`, in that order.
    Subgraph { vertices: Vec<usize>, interval: Box<MuInterval> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuStep {
    pub rule: MuRule,
    pub lo: Option<usize>,
    pub hi: Option<usize>,
    pub external: bool,
    pub premise: Premise,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuInterval {
    pub lo: usize,
    pub hi: usize,
    /// Steps that improved a bound, in the order they were applied.
    pub trace: Vec<MuStep>,
    /// Searches abandoned on budget.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<String>,
}

impl MuInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn uses_external(&self) -> bool {
        self.trace.iter().any(|s| s.external)
    }

    /// Re-checks every step against `g` and that the steps produce `lo` and `hi`.
    pub fn validate(&self, g: &Graph) -> Result<(), String> {
        let mut lo = 0;
        let mut hi = usize::MAX;
        for (i, step) in self.trace.iter().enumerate() {
            validate_step(g, step).map_err(|e| format!("step {i} ({}): {e}", step.rule.id()))?;
            if step.external != step.rule.external() {
                return Err(format!("step {i}: external flag is wrong"));
            }
            if let Some(l) = step.lo {
                lo = lo.max(l);
            }
            if let Some(h) = step.hi {
                hi = hi.min(h);
            }
        }
        if lo != self.lo || hi != self.hi {
            return Err(format!("steps give [{lo}, {hi}], interval says [{}, {}]", self.lo, self.hi));
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MuError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("rules disagree: lower bound {lo} exceeds upper bound {hi}")]
    Inconsistent { lo: usize, hi: usize },
}

/// Graphs of the K7 and K3,3,1,1 families under ∇Y and Y∇ (no merging), all with μ = 6.
struct Families {
    members: Vec<(String, Graph)>,
    forms: HashSet<CanonicalForm>,
}

fn mu6_families() -> &'static Families {
    static F: OnceLock<Families> = OnceLock::new();
    F.get_or_init(|| {
        let config = ClosureConfig::new(&[MoveKind::NablaY, MoveKind::YNabla], 14).with_policy(YNablaPolicy::Strict);
        let mut members = Vec::new();
        for seed in [NamedGraph::K7, NamedGraph::K3311] {
            let mut fam = closure(&[seed.graph()], &config).expect("family closure is small");
            fam.sort_by_key(|m| (m.graph.order(), m.graph.size(), m.form.clone()));
            members.extend(fam.into_iter().enumerate().map(|(i, m)| (format!("{}#{i}", seed.id()), m.graph)));
        }
        members.sort_by_key(|(_, g)| (g.order(), g.size()));
        let forms = members.iter().map(|(_, g)| canonical_form(g).expect("small")).collect();
        Families { members, forms }
    })
}

/// Sizes of the K7 and K3,3,1,1 families used by the family-minor rule.
pub fn family_sizes() -> (usize, usize) {
    let f = mu6_families();
    let k7 = f.members.iter().filter(|(id, _)| id.starts_with(NamedGraph::K7.id())).count();
    (k7, f.members.len() - k7)
}

fn petersen_forms() -> &'static HashSet<CanonicalForm> {
    static F: OnceLock<HashSet<CanonicalForm>> = OnceLock::new();
    F.get_or_init(|| {
        ObstructionLibrary::standard()
            .petersen
            .iter()
            .map(|e| canonical_form(&e.graph).expect("small"))
            .collect()
    })
}

/// The subgraph induced on `vertices`, with vertex `i` standing for `vertices[i]`.
fn induced_in_order(g: &Graph, vertices: &[usize]) -> Result<Graph, String> {
    if vertices.iter().any(|&v| v >= g.order()) || set_of(vertices.iter().copied()).count_ones() as usize != vertices.len() {
        return Err("subgraph vertices repeat or lie outside the graph".into());
    }
    let adj = vertices
        .iter()
        .map(|&v| {
            vertices
                .iter()
                .enumerate()
                .filter(|&(_, &w)| g.has_edge(v, w))
                .fold(0, |acc, (j, _)| acc | bit(j))
        })
        .collect();
    Graph::from_adjacency(adj).map_err(|e| e.to_string())
}

fn expect(cond: bool, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn validate_step(g: &Graph, step: &MuStep) -> Result<(), String> {
    let n = g.order();
    let want = |lo: Option<usize>, hi: Option<usize>| expect(step.lo == lo && step.hi == hi, "bound does not follow from the rule");
    let minor = |targets: &dyn Fn(&Graph) -> bool| match &step.premise {
        Premise::Minor { certificate } => {
            expect(targets(&certificate.target), "minor has the wrong target")?;
            validate_certificate(g, certificate)
        }
        _ => Err("expected a minor certificate".into()),
    };
    let embedding = |h: &Graph| match &step.premise {
        Premise::Embedding { embedding } => embedding.validate(h),
        _ => Err("expected an embedding".into()),
    };
    let subgraph = || match &step.premise {
        Premise::Subgraph { vertices, interval } => {
            let h = induced_in_order(g, vertices)?;
            interval.validate(&h).map_err(|e| format!("in subgraph: {e}"))?;
            Ok((vertices.clone(), h, interval.as_ref()))
        }
        _ => Err("expected a subgraph".to_string()),
    };
    match &step.rule {
        MuRule::Edgeless => {
            expect(g.size() == 0, "graph has an edge")?;
            want(None, Some(0))
        }
        MuRule::EdgePresent => {
            expect(g.size() > 0, "graph has no edge")?;
            want(Some(1), None)
        }
        MuRule::OrderBound => want(None, Some(n.saturating_sub(1))),
        MuRule::Planar => {
            embedding(g)?;
            want(None, Some(3))
        }
        MuRule::Nonplanar => {
            minor(&|t| *t == complete(5) || *t == NamedGraph::K33.graph())?;
            want(Some(4), None)
        }
        MuRule::Outerplanar => {
            embedding(&g.join(&Graph::new(1)))?;
            want(None, Some(2))
        }
        MuRule::NotOuterplanar => {
            minor(&|t| *t == complete(4) || *t == k23())?;
            want(Some(3), None)
        }
        MuRule::LinearForest => {
            expect(is_linear_forest(g), "not a linear forest")?;
            want(None, Some(1))
        }
        MuRule::NotLinearForest => {
            expect(!is_linear_forest(g), "is a linear forest")?;
            want(Some(2), None)
        }
        MuRule::Linked => {
            minor(&|t| canonical_form(t).map(|f| petersen_forms().contains(&f)).unwrap_or(false))?;
            want(Some(5), None)
        }
        MuRule::Linkless => {
            let v = is_il_with(g, ObstructionLibrary::standard(), &Budget::unlimited()).map_err(|e| e.to_string())?;
            expect(!v.il, "graph is intrinsically linked")?;
            want(None, Some(4))
        }
        MuRule::ApexDeletion { deleted, class } => {
            let s = set_of(deleted.iter().copied());
            expect(
                deleted.iter().all(|&v| v < n) && s.count_ones() as usize == deleted.len(),
                "bad deletion set",
            )?;
            let rest = g.delete_vertices(s);
            match class {
                MuClass::Planar => embedding(&rest)?,
                MuClass::Outerplanar => embedding(&rest.join(&Graph::new(1)))?,
                _ => expect(class.contains(&rest), "remainder is not in the class")?,
            }
            want(None, Some(deleted.len() + class.bound()))
        }
        MuRule::ConeVertex { vertex } => {
            let (vertices, h, sub) = subgraph()?;
            expect(*vertex < n && g.degree(*vertex) + 1 == n, "not a cone vertex")?;
            expect(vertices.len() + 1 == n && !vertices.contains(vertex), "subgraph is not the base")?;
            expect(h.size() > 0, "base has no edge")?;
            want(Some(sub.lo + 1), Some(sub.hi + 1))
        }
        MuRule::IsolatedVertices { vertices: iso } => {
            let (vertices, h, sub) = subgraph()?;
            let s = set_of(iso.iter().copied());
            expect(iso.iter().all(|&v| v < n && g.degree(v) == 0), "vertex is not isolated")?;
            expect(
                vertices.len() + iso.len() == n && vertices.iter().all(|v| s & bit(*v) == 0),
                "subgraph is not the rest",
            )?;
            expect(h.size() > 0, "rest has no edge")?;
            want(Some(sub.lo), Some(sub.hi))
        }
        MuRule::CliqueMinor { k } => {
            minor(&|t| *t == complete(*k))?;
            want(Some(k - 1), None)
        }
        MuRule::FamilyMinor { .. } => {
            minor(&|t| canonical_form(t).map(|f| mu6_families().forms.contains(&f)).unwrap_or(false))?;
            want(Some(6), None)
        }
        MuRule::Complement { class } => {
            let c = g.complement();
            match class {
                MuClass::Planar => embedding(&c)?,
                MuClass::Outerplanar => embedding(&c.join(&Graph::new(1)))?,
                _ => expect(class.contains(&c), "complement is not in the class")?,
            }
            let off = class.complement_offset().ok_or("class has no complement bound")?;
            want(Some(n.saturating_sub(off)), None)
        }
        MuRule::Subgraph => {
            let (_, _, sub) = subgraph()?;
            want(Some(sub.lo), None)
        }
        MuRule::NeighbourhoodCone { vertex } => {
            let (vertices, h, sub) = subgraph()?;
            expect(*vertex < n, "vertex outside the graph")?;
            expect(set_of(vertices.iter().copied()) == g.neighbors(*vertex), "subgraph is not the neighbourhood")?;
            expect(h.size() > 0, "neighbourhood has no edge")?;
            want(Some(sub.lo + 1), None)
        }
        MuRule::EdgeCone { u, v } => {
            let (vertices, h, sub) = subgraph()?;
            expect(*u < n && *v < n && g.has_edge(*u, *v), "not an edge")?;
            let pair = bit(*u) | bit(*v);
            expect((g.neighbors(*u) | g.neighbors(*v) | pair) == g.vertex_set(), "edge does not dominate")?;
            expect(set_of(vertices.iter().copied()) == g.vertex_set() & !pair, "subgraph is not the rest")?;
            expect(h.size() > 0, "rest has no edge")?;
            want(Some(sub.lo + 1), None)
        }
    }
}

struct State {
    lo: usize,
    hi: usize,
    trace: Vec<MuStep>,
    skipped: Vec<String>,
}

impl State {
    fn push(&mut self, rule: MuRule, lo: Option<usize>, hi: Option<usize>, premise: Premise) {
        let external = rule.external();
        self.trace.push(MuStep {
            rule,
            lo,
            hi,
            external,
            premise,
        });
    }

    fn lower(&mut self, value: usize, rule: MuRule, premise: Premise) -> bool {
        if value <= self.lo {
            return false;
        }
        self.lo = value;
        self.push(rule, Some(value), None, premise);
        true
    }

    fn upper(&mut self, value: usize, rule: MuRule, premise: Premise) -> bool {
        if value >= self.hi {
            return false;
        }
        self.hi = value;
        self.push(rule, None, Some(value), premise);
        true
    }

    fn open(&self) -> bool {
        self.lo < self.hi
    }
}

struct Engine<'a> {
    opts: &'a MuOptions,
    memo: HashMap<(CanonicalForm, usize), MuInterval>,
}

impl Engine<'_> {
    /// Bounds for the subgraph induced on `keep`, computed on its canonical relabelling.
    fn sub(&mut self, g: &Graph, keep: VertexSet, depth: usize) -> Result<(Vec<usize>, MuInterval), MuError> {
        let (h, old) = g.induced(keep);
        let perm = canonical_labeling(&h)?;
        let c = h.permute(&perm);
        let mut vertices = vec![0; old.len()];
        for (i, &p) in perm.iter().enumerate() {
            vertices[p] = old[i];
        }
        let key = (canonical_form(&c)?, depth);
        if let Some(r) = self.memo.get(&key) {
            return Ok((vertices, r.clone()));
        }
        let r = self.bounds(&c, depth)?;
        self.memo.insert(key, r.clone());
        Ok((vertices, r))
    }

    fn bounds(&mut self, g: &Graph, depth: usize) -> Result<MuInterval, MuError> {
        let n = g.order();
        let m = g.size();
        let mut st = State {
            lo: 0,
            hi: usize::MAX,
            trace: Vec::new(),
            skipped: Vec::new(),
        };
        if m == 0 {
            st.upper(0, MuRule::Edgeless, Premise::Structural);
            return finish(st);
        }
        st.lower(1, MuRule::EdgePresent, Premise::Structural);
        st.upper(n - 1, MuRule::OrderBound, Premise::Structural);

        // exact transfers to a smaller graph
        let iso = g.isolated_vertices();
        let cone = (0..n).find(|&v| g.degree(v) + 1 == n && g.delete_vertices(bit(v)).size() > 0);
        if iso != 0 {
            let (vertices, r) = self.sub(g, g.vertex_set() & !iso, depth)?;
            let (lo, hi) = (r.lo, r.hi);
            let rule = MuRule::IsolatedVertices {
                vertices: members(iso).collect(),
            };
            st.lo = lo;
            st.hi = hi;
            st.push(rule, Some(lo), Some(hi), Premise::Subgraph { vertices, interval: Box::new(r) });
        } else if let Some(v) = cone {
            let (vertices, r) = self.sub(g, g.vertex_set() & !bit(v), depth)?;
            let (lo, hi) = (r.lo + 1, r.hi + 1);
            st.lo = lo;
            st.hi = hi;
            st.push(
                MuRule::ConeVertex { vertex: v },
                Some(lo),
                Some(hi),
                Premise::Subgraph { vertices, interval: Box::new(r) },
            );
        }

        if st.open() {
            self.classes(g, &mut st);
        }
        if st.open() {
            self.complement(g, &mut st);
        }
        let mut searched = Searched::default();
        while st.open() {
            let before = (st.lo, st.hi);
            self.apex(g, &mut st);
            self.linking(g, &mut st, &mut searched);
            self.cliques(g, &mut st, &mut searched);
            self.families(g, &mut st, &mut searched);
            if depth > 0 {
                self.subgraphs(g, &mut st, depth - 1)?;
            }
            if (st.lo, st.hi) == before {
                break;
            }
        }
        finish(st)
    }

    fn classes(&self, g: &Graph, st: &mut State) {
        match is_planar(g) {
            PlanarityResult::Planar { embedding } => {
                st.upper(3, MuRule::Planar, Premise::Embedding { embedding });
            }
            PlanarityResult::Nonplanar { obstruction } => {
                st.lower(4, MuRule::Nonplanar, Premise::Minor { certificate: obstruction });
                return;
            }
        }
        if self.opts.paper_rules_only {
            return;
        }
        match is_outerplanar(g) {
            OuterplanarResult::Outerplanar { cone_embedding } => {
                st.upper(2, MuRule::Outerplanar, Premise::Embedding { embedding: cone_embedding });
            }
            OuterplanarResult::NotOuterplanar { obstruction } => {
                st.lower(3, MuRule::NotOuterplanar, Premise::Minor { certificate: obstruction });
                return;
            }
        }
        if is_linear_forest(g) {
            st.upper(1, MuRule::LinearForest, Premise::Structural);
        } else {
            st.lower(2, MuRule::NotLinearForest, Premise::Structural);
        }
    }

    fn complement(&self, g: &Graph, st: &mut State) {
        let n = g.order();
        let c = g.complement();
        for class in [MuClass::LinearForest, MuClass::Outerplanar, MuClass::Planar] {
            let off = class.complement_offset().expect("bounded class");
            if n <= off || n - off <= st.lo {
                return;
            }
            let premise = match class {
                MuClass::LinearForest if is_linear_forest(&c) => Premise::Structural,
                MuClass::Outerplanar => match is_outerplanar(&c) {
                    OuterplanarResult::Outerplanar { cone_embedding } => Premise::Embedding { embedding: cone_embedding },
                    _ => continue,
                },
                MuClass::Planar => match embed(&c) {
                    Some(embedding) => Premise::Embedding { embedding },
                    None => continue,
                },
                _ => continue,
            };
            st.lower(n - off, MuRule::Complement { class }, premise);
            return;
        }
    }

    /// Smallest deletion set leaving a bounded class, as long as it beats the current upper bound.
    fn apex(&self, g: &Graph, st: &mut State) {
        let n = g.order();
        let classes: Vec<MuClass> = [MuClass::Edgeless, MuClass::LinearForest, MuClass::Outerplanar, MuClass::Planar]
            .into_iter()
            .filter(|c| !(self.opts.paper_rules_only && matches!(c, MuClass::LinearForest | MuClass::Outerplanar)))
            .collect();
        let mut k = 1;
        while k < n && k < st.hi && st.open() {
            let mut best: Option<(usize, Vec<usize>, MuClass)> = None;
            for subset in (0..n).combinations(k) {
                let rest = g.delete_vertices(set_of(subset.iter().copied()));
                let limit = best.as_ref().map_or(st.hi, |b| b.0);
                if let Some(&class) = classes.iter().find(|c| k + c.bound() < limit && c.contains(&rest)) {
                    best = Some((k + class.bound(), subset, class));
                    if class == MuClass::Edgeless {
                        break;
                    }
                }
            }
            if let Some((value, deleted, class)) = best {
                let rest = g.delete_vertices(set_of(deleted.iter().copied()));
                let premise = match class {
                    MuClass::Planar => Premise::Embedding {
                        embedding: embed(&rest).expect("planar remainder"),
                    },
                    MuClass::Outerplanar => Premise::Embedding {
                        embedding: embed(&rest.join(&Graph::new(1))).expect("outerplanar remainder"),
                    },
                    _ => Premise::Structural,
                };
                st.upper(value, MuRule::ApexDeletion { deleted, class }, premise);
            }
            k += 1;
        }
    }

    fn linking(&self, g: &Graph, st: &mut State, searched: &mut Searched) {
        if searched.linking || !(st.lo < 5 && st.hi >= 5) {
            return;
        }
        searched.linking = true;
        match is_il_with(g, ObstructionLibrary::standard(), &self.opts.budget) {
            Ok(v) => match v.witness {
                Some(hit) => {
                    st.lower(5, MuRule::Linked, Premise::Minor { certificate: hit.certificate });
                }
                None => {
                    st.upper(4, MuRule::Linkless, Premise::Search);
                }
            },
            Err(e) => st.skipped.push(format!("Petersen family search: {e}")),
        }
    }

    fn cliques(&self, g: &Graph, st: &mut State, searched: &mut Searched) {
        let n = g.order();
        let mut k = (st.lo + 2).max(searched.clique_from);
        while st.open() && k <= n && k - 1 <= st.hi && g.size() >= k * (k - 1) / 2 && k < searched.clique_missing {
            let mut meter = self.opts.budget.start();
            match find_minor(g, &complete(k), &mut meter) {
                Ok(Some(certificate)) => {
                    st.lower(k - 1, MuRule::CliqueMinor { k }, Premise::Minor { certificate });
                }
                Ok(None) => {
                    searched.clique_missing = k;
                    break;
                }
                Err(e) => {
                    st.skipped.push(format!("K{k} minor search: {e}"));
                    searched.clique_missing = k;
                    break;
                }
            }
            k += 1;
        }
        searched.clique_from = k;
    }

    fn families(&self, g: &Graph, st: &mut State, searched: &mut Searched) {
        if searched.families || !(st.lo < 6 && st.hi >= 6) {
            return;
        }
        searched.families = true;
        for (id, h) in &mu6_families().members {
            if h.order() > g.order() || h.size() > g.size() {
                continue;
            }
            let mut meter = self.opts.budget.start();
            match find_minor(g, h, &mut meter) {
                Ok(Some(certificate)) => {
                    st.lower(6, MuRule::FamilyMinor { member: id.clone() }, Premise::Minor { certificate });
                    return;
                }
                Ok(None) => {}
                Err(e) => st.skipped.push(format!("{id} minor search: {e}")),
            }
        }
    }

    fn subgraphs(&mut self, g: &Graph, st: &mut State, depth: usize) -> Result<(), MuError> {
        let n = g.order();
        let all = g.vertex_set();
        for v in 0..n {
            if !st.open() || n < 3 || n - 2 <= st.lo {
                break;
            }
            let keep = all & !bit(v);
            if g.delete_vertices(bit(v)).size() == 0 {
                continue;
            }
            let (vertices, r) = self.sub(g, keep, depth)?;
            let lo = r.lo;
            st.lower(lo, MuRule::Subgraph, Premise::Subgraph { vertices, interval: Box::new(r) });
        }
        for v in 0..n {
            let nb = g.neighbors(v);
            let size = nb.count_ones() as usize;
            if !st.open() {
                break;
            }
            if size + 1 == n || size <= st.lo || g.induced(nb).0.size() == 0 {
                continue;
            }
            let (vertices, r) = self.sub(g, nb, depth)?;
            let lo = r.lo + 1;
            st.lower(lo, MuRule::NeighbourhoodCone { vertex: v }, Premise::Subgraph { vertices, interval: Box::new(r) });
        }
        let edges: Vec<(usize, usize)> = g.edges().collect();
        for (u, v) in edges {
            if !st.open() || n < 4 || n - 2 <= st.lo {
                break;
            }
            let pair = bit(u) | bit(v);
            if (g.neighbors(u) | g.neighbors(v) | pair) != all || g.delete_vertices(pair).size() == 0 {
                continue;
            }
            let (vertices, r) = self.sub(g, all & !pair, depth)?;
            let lo = r.lo + 1;
            st.lower(lo, MuRule::EdgeCone { u, v }, Premise::Subgraph { vertices, interval: Box::new(r) });
        }
        Ok(())
    }
}

#[derive(Default)]
struct Searched {
    linking: bool,
    families: bool,
    clique_from: usize,
    clique_missing: usize,
}

fn finish(st: State) -> Result<MuInterval, MuError> {
    if st.lo > st.hi {
        return Err(MuError::Inconsistent { lo: st.lo, hi: st.hi });
    }
    Ok(MuInterval {
        lo: st.lo,
        hi: st.hi,
        trace: st.trace,
        skipped: st.skipped,
    })
}

/// Bounds on μ(g) from the rule set, iterated until no bound improves.
pub fn mu_bounds(g: &Graph, opts: &MuOptions) -> Result<MuInterval, MuError> {
    if g.order() > MAX_MU_ORDER {
        return Err(GraphError::TooLarge {
            order: g.order(),
            limit: MAX_MU_ORDER,
        }
        .into());
    }
    let mut engine = Engine {
        opts,
        memo: HashMap::new(),
    };
    engine.bounds(g, opts.depth)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KlvVerdict {
    Holds,
    Fails,
    Inconclusive,
}

/// μ(g) + μ(cg) ≥ n - 2, judged from the two intervals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KlvReport {
    pub verdict: KlvVerdict,
    pub order: usize,
    pub graph: MuInterval,
    pub complement: MuInterval,
}

pub fn check_klv(g: &Graph, opts: &MuOptions) -> Result<KlvReport, MuError> {
    let n = g.order();
    if n > MAX_KLV_ORDER {
        return Err(GraphError::TooLarge {
            order: n,
            limit: MAX_KLV_ORDER,
        }
        .into());
    }
    let graph = mu_bounds(g, opts)?;
    let complement = mu_bounds(&g.complement(), opts)?;
    let target = n.saturating_sub(2);
    let verdict = if graph.lo + complement.lo >= target {
        KlvVerdict::Holds
    } else if graph.hi + complement.hi < target {
        KlvVerdict::Fails
    } else {
        KlvVerdict::Inconclusive
    };
    Ok(KlvReport {
        verdict,
        order: n,
        graph,
        complement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{cycle, empty, maximal_nonseparating, path_by_edges, wheel};

    fn mu(g: &Graph) -> MuInterval {
        let r = mu_bounds(g, &MuOptions::default()).unwrap();
        r.validate(g).unwrap();
        r
    }

    #[test]
    fn small_values() {
        assert_eq!((mu(&complete(7)).lo, mu(&complete(7)).hi), (6, 6));
        let p = mu(&path_by_edges(3));
        assert_eq!((p.lo, p.hi), (1, 1));
        assert!(p.uses_external());
        assert_eq!((mu(&empty(4)).lo, mu(&empty(4)).hi), (0, 0));
        assert_eq!((mu(&Graph::new(1)).lo, mu(&Graph::new(1)).hi), (0, 0));
        let c = mu(&cycle(6).unwrap());
        assert_eq!((c.lo, c.hi), (2, 2));
        let k33 = mu(&NamedGraph::K33.graph());
        assert_eq!((k33.lo, k33.hi), (4, 4));
        let k3311 = mu(&NamedGraph::K3311.graph());
        assert_eq!((k3311.lo, k3311.hi), (6, 6));
        let pet = mu(&NamedGraph::Petersen.graph());
        assert_eq!(pet.lo, 5);
    }

    #[test]
    fn family_sizes_under_strict_moves() {
        assert_eq!(family_sizes(), (20, 58));
    }

    #[test]
    fn paper_rules_only_is_weaker_but_sound() {
        let opts = MuOptions {
            paper_rules_only: true,
            ..MuOptions::default()
        };
        let r = mu_bounds(&path_by_edges(3), &opts).unwrap();
        assert!(r.trace.iter().all(|s| !matches!(
            s.rule,
            MuRule::Outerplanar
                | MuRule::NotOuterplanar
                | MuRule::LinearForest
                | MuRule::NotLinearForest
                | MuRule::ApexDeletion {
                    class: MuClass::Outerplanar | MuClass::LinearForest,
                    ..
                }
        )));
        assert_eq!(r.lo, 1);
        assert!(r.hi >= 1);
    }

    #[test]
    fn family_complements_are_exact() {
        for n in 7..=8 {
            for spec in maximal_nonseparating(n).unwrap() {
                let c = spec.build().unwrap().complement();
                let r = mu(&c);
                assert_eq!((r.lo, r.hi), (n - 4, n - 4), "{spec}");
            }
        }
    }

    #[test]
    fn wheel_complement_drops_the_hub() {
        let c = wheel(8).unwrap().complement();
        let r = mu(&c);
        assert!(matches!(r.trace.iter().find(|s| s.lo.is_some() && s.hi.is_some()).map(|s| &s.rule), Some(MuRule::IsolatedVertices { .. })));
    }

    #[test]
    fn klv_on_cliques_and_cycles() {
        for n in 2..=9 {
            assert_eq!(check_klv(&complete(n), &MuOptions::default()).unwrap().verdict, KlvVerdict::Holds);
        }
        assert_eq!(check_klv(&cycle(9).unwrap(), &MuOptions::default()).unwrap().verdict, KlvVerdict::Holds);
    }

    #[test]
    fn tampered_trace_is_rejected() {
        let g = complete(6);
        let mut r = mu(&g);
        r.lo += 1;
        assert!(r.validate(&g).is_err());
    }
}
