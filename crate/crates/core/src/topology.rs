//! Intrinsic linking (exact) and intrinsic knotting (sufficient conditions on
//! both sides), plus the maximality checks built on them.
//!
//! IK evidence is a minor from the obstruction library, optionally after a few
//! Y∇ reductions. A reduction at `v` keeps three neighbours `a, b, c` of `v`,
//! deletes `v`, and adds the edges `ab, bc, ca`. Applying ∇Y to that new
//! triangle gives back a subgraph of the original graph, so if the reduced
//! graph is IK the original one is too.

use std::collections::HashSet;
use std::sync::OnceLock;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::apex::{apex_number_at_most, ApexCertificate, ApexOptions};
use crate::budget::Budget;
use crate::canon::canonical_form;
use crate::error::{BudgetError, GraphError};
use crate::families::NamedGraph;
use crate::graph::{bit, members, Graph};
use crate::minors::{find_minor, validate_certificate, MinorCertificate};
use crate::moves::{closure, ClosureConfig, MoveKind};

/// Default largest order of ∇Y descendants kept in the IK library.
pub const DEFAULT_LIBRARY_ORDER: usize = 14;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LibraryEntry {
    pub id: String,
    pub graph: Graph,
    /// How the entry was obtained: a seed and its moves, or a user-supplied note.
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionLibrary {
    /// The seven graphs of the Petersen family.
    pub petersen: Vec<LibraryEntry>,
    /// Graphs known to be IK.
    pub ik: Vec<LibraryEntry>,
}

fn family_entries(prefix: &str, seeds: &[(NamedGraph, Graph)], config: &ClosureConfig) -> Vec<LibraryEntry> {
    let graphs: Vec<Graph> = seeds.iter().map(|(_, g)| g.clone()).collect();
    let members = closure(&graphs, config).expect("library closure stays within its budget");
    let mut members: Vec<_> = members.into_iter().collect();
    // smaller graphs first: cheaper searches and simpler certificates
    members.sort_by_key(|m| (m.graph.order(), m.form.clone()));
    members
        .into_iter()
        .enumerate()
        .map(|(i, m)| {
            let moves = m
                .moves
                .moves
                .iter()
                .map(|mv| match mv.site {
                    crate::moves::MoveSite::Triangle([a, b, c]) => format!("{}{{{a},{b},{c}}}", mv.kind),
                    crate::moves::MoveSite::Vertex(v) => format!("{}{{{v}}}", mv.kind),
                })
                .join(" ");
            let seed = seeds[m.seed].0.id();
            LibraryEntry {
                id: format!("{prefix}{i}"),
                graph: m.graph,
                provenance: if moves.is_empty() { seed.to_string() } else { format!("{seed} {moves}") },
            }
        })
        .collect()
}

impl ObstructionLibrary {
    /// Petersen family, and the ∇Y descendants of K7 and K3,3,1,1 up to `max_order` vertices.
    pub fn build(max_order: usize) -> Self {
        let k6 = NamedGraph::K6;
        let petersen = family_entries(
            "PF",
            &[(k6, k6.graph())],
            &ClosureConfig::new(&[MoveKind::NablaY, MoveKind::YNabla], 10),
        );
        let ik = family_entries(
            "IK",
            &[
                (NamedGraph::K7, NamedGraph::K7.graph()),
                (NamedGraph::K3311, NamedGraph::K3311.graph()),
            ],
            &ClosureConfig::new(&[MoveKind::NablaY], max_order),
        );
        ObstructionLibrary { petersen, ik }
    }

    /// Shared library at the default order bound.
    pub fn standard() -> &'static ObstructionLibrary {
        static LIB: OnceLock<ObstructionLibrary> = OnceLock::new();
        LIB.get_or_init(|| ObstructionLibrary::build(DEFAULT_LIBRARY_ORDER))
    }

    /// Adds a graph the caller vouches is IK.
    pub fn add_ik(&mut self, id: impl Into<String>, graph: Graph, provenance: impl Into<String>) {
        self.ik.push(LibraryEntry {
            id: id.into(),
            graph,
            provenance: provenance.into(),
        });
    }

    pub fn entry(&self, id: &str) -> Option<&LibraryEntry> {
        self.petersen.iter().chain(&self.ik).find(|e| e.id == id)
    }
}

/// A library graph found as a minor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LibraryHit {
    pub entry: String,
    pub provenance: String,
    pub certificate: MinorCertificate,
}

fn search_library(g: &Graph, entries: &[LibraryEntry], budget: &Budget) -> Result<Option<LibraryHit>, BudgetError> {
    for e in entries {
        if e.graph.order() > g.order() || e.graph.size() > g.size() {
            continue;
        }
        let mut meter = budget.start();
        if let Some(certificate) = find_minor(g, &e.graph, &mut meter)? {
            return Ok(Some(LibraryHit {
                entry: e.id.clone(),
                provenance: e.provenance.clone(),
                certificate,
            }));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IlVerdict {
    pub il: bool,
    /// Petersen-family minor when `il` holds.
    pub witness: Option<LibraryHit>,
}

/// Exact: `g` is IL iff it has a Petersen-family minor.
pub fn is_il(g: &Graph, budget: &Budget) -> Result<IlVerdict, BudgetError> {
    is_il_with(g, ObstructionLibrary::standard(), budget)
}

pub fn is_il_with(g: &Graph, lib: &ObstructionLibrary, budget: &Budget) -> Result<IlVerdict, BudgetError> {
    // every Petersen-family graph has 15 edges and at least 6 vertices
    if g.size() < 15 || g.order() < 6 {
        return Ok(IlVerdict { il: false, witness: None });
    }
    let witness = search_library(g, &lib.petersen, budget)?;
    Ok(IlVerdict {
        il: witness.is_some(),
        witness,
    })
}

/// One Y∇ reduction: delete `vertex`, join its kept neighbours pairwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    pub vertex: usize,
    pub kept: [usize; 3],
}

impl Reduction {
    pub fn apply(&self, g: &Graph) -> Result<Graph, GraphError> {
        let v = self.vertex;
        g.check_vertex(v)?;
        let mut h = g.clone();
        for &x in &self.kept {
            if x == v || !g.has_edge(v, x) {
                return Err(GraphError::InvalidArgument(format!("{x} is not a neighbour of {v}")));
            }
        }
        let [a, b, c] = self.kept;
        if a == b || b == c || a == c {
            return Err(GraphError::InvalidArgument("kept neighbours must be distinct".into()));
        }
        for (x, y) in [(a, b), (b, c), (a, c)] {
            if !h.has_edge(x, y) {
                h.insert_edge(x, y);
            }
        }
        h.delete_vertex(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IkEvidence {
    /// Applied in order; each step's indices refer to the graph produced by the previous step.
    pub reductions: Vec<Reduction>,
    pub hit: LibraryHit,
}

impl IkEvidence {
    pub fn validate(&self, g: &Graph, lib: &ObstructionLibrary) -> Result<(), String> {
        let mut h = g.clone();
        for r in &self.reductions {
            h = r.apply(&h).map_err(|e| e.to_string())?;
        }
        let entry = lib
            .entry(&self.hit.entry)
            .ok_or_else(|| format!("unknown library entry {}", self.hit.entry))?;
        if lib.petersen.iter().any(|e| e.id == entry.id) {
            return Err("Petersen-family graphs are not IK evidence".into());
        }
        if self.hit.certificate.target != entry.graph {
            return Err("certificate target differs from the library entry".into());
        }
        validate_certificate(&h, &self.hit.certificate)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IkStatus {
    Ik,
    Nik,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IkVerdict {
    pub status: IkStatus,
    pub ik_evidence: Option<IkEvidence>,
    /// Deletion of at most two vertices leaving a planar graph.
    pub nik_evidence: Option<ApexCertificate>,
    /// Strategies tried without success, and why each stopped.
    pub exhausted: Vec<String>,
}

#[derive(Debug, Clone, Error)]
pub enum TopologyError {
    #[error("integrity failure: both an IK certificate ({ik}) and a 2-apex certificate {apex:?} validate")]
    Integrity { ik: String, apex: Vec<usize> },
    #[error(transparent)]
    Budget(#[from] BudgetError),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IkOptions {
    /// Per minor search.
    pub budget: Budget,
    /// Largest number of chained Y∇ reductions tried before giving up.
    pub reduction_depth: usize,
    pub apex: ApexOptions,
}

impl Default for IkOptions {
    fn default() -> Self {
        IkOptions {
            budget: Budget::default(),
            reduction_depth: 2,
            apex: ApexOptions::default(),
        }
    }
}

const MIN_IK_EDGES: usize = 21;

/// IK evidence for `g`, trying the library directly and then up to `depth` reductions.
pub fn find_ik_evidence(
    g: &Graph,
    lib: &ObstructionLibrary,
    depth: usize,
    budget: &Budget,
) -> Result<Option<IkEvidence>, BudgetError> {
    let mut seen = HashSet::new();
    reduce_search(g, lib, depth, budget, &mut seen)
}

fn reduce_search(
    g: &Graph,
    lib: &ObstructionLibrary,
    depth: usize,
    budget: &Budget,
    seen: &mut HashSet<crate::canon::CanonicalForm>,
) -> Result<Option<IkEvidence>, BudgetError> {
    if g.size() < MIN_IK_EDGES {
        return Ok(None);
    }
    if g.order() <= crate::canon::MAX_CANON_ORDER && !seen.insert(canonical_form(g)?) {
        return Ok(None);
    }
    if let Some(hit) = search_library(g, &lib.ik, budget)? {
        return Ok(Some(IkEvidence {
            reductions: Vec::new(),
            hit,
        }));
    }
    if depth == 0 {
        return Ok(None);
    }
    let mut vertices: Vec<usize> = (0..g.order()).filter(|&v| g.degree(v) >= 3).collect();
    // low degree loses the fewest edges
    vertices.sort_by_key(|&v| (g.degree(v), v));
    for v in vertices {
        let nb: Vec<usize> = members(g.neighbors(v)).collect();
        for kept in nb.into_iter().combinations(3) {
            let [a, b, c] = [kept[0], kept[1], kept[2]];
            let added = [(a, b), (b, c), (a, c)].iter().filter(|&&(x, y)| !g.has_edge(x, y)).count();
            if g.size() - g.degree(v) + added < MIN_IK_EDGES {
                continue;
            }
            let step = Reduction { vertex: v, kept: [a, b, c] };
            let h = step.apply(g)?;
            if let Some(mut ev) = reduce_search(&h, lib, depth - 1, budget, seen)? {
                ev.reductions.insert(0, step);
                return Ok(Some(ev));
            }
        }
    }
    Ok(None)
}

/// IK if library evidence is found, nIK if the graph is 2-apex, unknown otherwise.
/// The library is always searched directly; reductions are only tried when no
/// 2-apex certificate exists.
pub fn ik_status(g: &Graph, opts: &IkOptions) -> Result<IkVerdict, TopologyError> {
    ik_status_with(g, ObstructionLibrary::standard(), opts)
}

pub fn ik_status_with(g: &Graph, lib: &ObstructionLibrary, opts: &IkOptions) -> Result<IkVerdict, TopologyError> {
    let mut exhausted = Vec::new();
    let nik_evidence = match apex_number_at_most(g, 2, &opts.apex) {
        Ok(c) => c,
        Err(e) => {
            exhausted.push(format!("apex search: {e}"));
            None
        }
    };
    if nik_evidence.is_none() && exhausted.is_empty() {
        exhausted.push("apex number exceeds 2".into());
    }
    let depth = if nik_evidence.is_some() { 0 } else { opts.reduction_depth };
    let ik_evidence = match find_ik_evidence(g, lib, depth, &opts.budget) {
        Ok(ev) => ev,
        Err(e) => {
            exhausted.push(format!("library search: {e}"));
            None
        }
    };
    if ik_evidence.is_none() {
        exhausted.push(format!("no library minor within {depth} reductions"));
    }
    let status = match (&ik_evidence, &nik_evidence) {
        (Some(ev), Some(apex)) => {
            if ev.validate(g, lib).is_ok() && apex.validate(g).is_ok() {
                return Err(TopologyError::Integrity {
                    ik: ev.hit.entry.clone(),
                    apex: apex.deleted.clone(),
                });
            }
            IkStatus::Unknown
        }
        (Some(_), None) => IkStatus::Ik,
        (None, Some(_)) => IkStatus::Nik,
        (None, None) => IkStatus::Unknown,
    };
    if status != IkStatus::Unknown {
        exhausted.clear();
    }
    Ok(IkVerdict {
        status,
        ik_evidence,
        nik_evidence,
        exhausted,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxNilResult {
    pub maximal: bool,
    /// Set when `g` itself is IL.
    pub base_witness: Option<LibraryHit>,
    /// Petersen-family minor of `g + e` for every non-edge `e` (when `g` is nIL).
    pub per_edge: Vec<((usize, usize), Option<LibraryHit>)>,
}

/// Exact: `g` is nIL and adding any non-edge makes it IL.
pub fn is_max_nil(g: &Graph, budget: &Budget) -> Result<MaxNilResult, BudgetError> {
    let base = is_il(g, budget)?;
    if base.il {
        return Ok(MaxNilResult {
            maximal: false,
            base_witness: base.witness,
            per_edge: Vec::new(),
        });
    }
    let per_edge: Vec<((usize, usize), Option<LibraryHit>)> = g
        .non_edges()
        .into_par_iter()
        .map(|(u, v)| {
            let h = g.add_edge(u, v).expect("non-edge");
            is_il(&h, budget).map(|r| ((u, v), r.witness))
        })
        .collect::<Result<_, _>>()?;
    Ok(MaxNilResult {
        maximal: per_edge.iter().all(|(_, w)| w.is_some()),
        base_witness: None,
        per_edge,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxNikVerdict {
    Certified,
    Refuted,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxNikResult {
    pub verdict: MaxNikVerdict,
    pub base: IkVerdict,
    pub per_edge: Vec<((usize, usize), IkVerdict)>,
}

/// Certified iff `g` is nIK and every `g + e` is IK; refuted iff `g` is IK or
/// some `g + e` is nIK.
pub fn certify_max_nik(g: &Graph, opts: &IkOptions) -> Result<MaxNikResult, TopologyError> {
    let base = ik_status(g, opts)?;
    if base.status == IkStatus::Ik {
        return Ok(MaxNikResult {
            verdict: MaxNikVerdict::Refuted,
            base,
            per_edge: Vec::new(),
        });
    }
    let per_edge: Vec<((usize, usize), IkVerdict)> = g
        .non_edges()
        .into_par_iter()
        .map(|(u, v)| ik_status(&g.add_edge(u, v).expect("non-edge"), opts).map(|r| ((u, v), r)))
        .collect::<Result<_, _>>()?;
    let verdict = if per_edge.iter().any(|(_, r)| r.status == IkStatus::Nik) {
        MaxNikVerdict::Refuted
    } else if base.status == IkStatus::Nik && per_edge.iter().all(|(_, r)| r.status == IkStatus::Ik) {
        MaxNikVerdict::Certified
    } else {
        MaxNikVerdict::Inconclusive
    };
    Ok(MaxNikResult { verdict, base, per_edge })
}

/// Vertices of degree three in `g` whose neighbours are pairwise non-adjacent.
pub fn y_sites(g: &Graph) -> Vec<usize> {
    (0..g.order())
        .filter(|&v| {
            g.degree(v) == 3 && members(g.neighbors(v)).all(|x| g.neighbors(x) & g.neighbors(v) & !bit(x) == 0)
        })
        .collect()
}
