//! Executable replays of the theorems about maximal non-separating planar
//! graphs and their complements, with a versioned JSON report.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::apex::{certify_deletion, is_k_apex, ApexCertificate, ApexOptions};
use crate::budget::Budget;
use crate::error::GraphError;
use crate::families::{
    elongated_prism, max_outerplanar_classes, maximal_nonseparating, FamilySpec, NamedGraph, PrismSubdivision,
};
use crate::graph::{bit, full_set, Graph, VertexSet};
use crate::io::to_graph6;
use crate::minors::{validate_certificate, MinorCertificate};
use crate::mu::{check_klv, mu_bounds, KlvVerdict, MuOptions};
use crate::planarity::planar;
use crate::topology::{
    certify_max_nik, ik_status, is_il, is_max_nil, IkOptions, IkStatus, MaxNikVerdict, ObstructionLibrary,
};

/// Bumped whenever the report layout changes.
pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Thm1,
    Thm2,
    Thm3,
    Sec2,
    Il9,
    Klv,
    Remark45,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Thm1,
        Suite::Thm2,
        Suite::Thm3,
        Suite::Sec2,
        Suite::Il9,
        Suite::Klv,
        Suite::Remark45,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Suite::Thm1 => "thm1",
            Suite::Thm2 => "thm2",
            Suite::Thm3 => "thm3",
            Suite::Sec2 => "sec2",
            Suite::Il9 => "il9",
            Suite::Klv => "klv",
            Suite::Remark45 => "remark45",
        }
    }

    /// Orders covered when none are requested.
    pub fn default_orders(self) -> (usize, usize) {
        match self {
            Suite::Thm1 => (7, 11),
            Suite::Thm2 => (7, 10),
            Suite::Thm3 => (10, 10),
            Suite::Sec2 => (4, 7),
            Suite::Il9 => (7, 9),
            Suite::Klv => (4, 11),
            Suite::Remark45 => (8, 8),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("unknown suite {0:?} (expected one of thm1, thm2, thm3, sec2, il9, klv, remark45)")]
pub struct UnknownSuite(pub String);

impl FromStr for Suite {
    type Err = UnknownSuite;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Verified,
    Refuted,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub instance: FamilySpec,
    pub claim: String,
    pub verdict: Verdict,
    /// An inconclusive verdict fails the suite only for strict entries.
    pub strict: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub certificate: Value,
    /// Omitted in deterministic runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_seconds: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub version: u32,
    pub suite: Suite,
    pub orders: (usize, usize),
    pub entries: Vec<SuiteEntry>,
}

impl SuiteReport {
    pub fn count(&self, verdict: Verdict) -> usize {
        self.entries.iter().filter(|e| e.verdict == verdict).count()
    }

    /// No refuted entry and no inconclusive strict entry.
    pub fn passed(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.verdict == Verdict::Verified || (e.verdict == Verdict::Inconclusive && !e.strict))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let mark = match e.verdict {
                Verdict::Verified => "verified",
                Verdict::Refuted => "REFUTED",
                Verdict::Inconclusive if e.strict => "INCONCLUSIVE",
                Verdict::Inconclusive => "inconclusive (lenient)",
            };
            out.push_str(&format!("{:<24} {} : {}", mark, e.instance, e.claim));
            if let Some(r) = &e.reason {
                out.push_str(&format!(" [{r}]"));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "{} orders {}..={}: {} verified, {} refuted, {} inconclusive: {}\n",
            self.suite,
            self.orders.0,
            self.orders.1,
            self.count(Verdict::Verified),
            self.count(Verdict::Refuted),
            self.count(Verdict::Inconclusive),
            if self.passed() { "PASS" } else { "FAIL" }
        ));
        out
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub orders: Option<(usize, usize)>,
    pub budget: Budget,
    pub deterministic: bool,
    pub seed: u64,
    pub paper_rules_only: bool,
}

impl VerifyOptions {
    fn apex(&self) -> ApexOptions {
        ApexOptions {
            deterministic: self.deterministic,
            ..ApexOptions::default()
        }
    }

    fn ik(&self) -> IkOptions {
        IkOptions {
            budget: self.budget,
            apex: self.apex(),
            ..IkOptions::default()
        }
    }

    fn mu(&self) -> MuOptions {
        MuOptions {
            paper_rules_only: self.paper_rules_only,
            budget: self.budget,
            ..MuOptions::default()
        }
    }
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("order range {0}..={1} is empty")]
    EmptyRange(usize, usize),
}

/// Outcome of one check before timing and strictness are attached.
struct Outcome {
    verdict: Verdict,
    reason: Option<String>,
    certificate: Value,
}

impl Outcome {
    fn verified(certificate: Value) -> Self {
        Outcome {
            verdict: Verdict::Verified,
            reason: None,
            certificate,
        }
    }

    fn refuted(reason: impl Into<String>, certificate: Value) -> Self {
        Outcome {
            verdict: Verdict::Refuted,
            reason: Some(reason.into()),
            certificate,
        }
    }

    fn inconclusive(reason: impl Into<String>, certificate: Value) -> Self {
        Outcome {
            verdict: Verdict::Inconclusive,
            reason: Some(reason.into()),
            certificate,
        }
    }
}

/// A check to run: instance, claim, strictness and the work itself.
struct Task {
    instance: FamilySpec,
    claim: String,
    strict: bool,
    run: Box<dyn Fn() -> Outcome + Send + Sync>,
}

impl Task {
    fn new(instance: FamilySpec, claim: impl Into<String>, strict: bool, run: impl Fn() -> Outcome + Send + Sync + 'static) -> Self {
        Task {
            instance,
            claim: claim.into(),
            strict,
            run: Box::new(run),
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("certificates serialize")
}

fn run_tasks(suite: Suite, orders: (usize, usize), tasks: Vec<Task>, opts: &VerifyOptions) -> SuiteReport {
    let deterministic = opts.deterministic;
    let mut entries: Vec<SuiteEntry> = tasks
        .into_par_iter()
        .map(|t| {
            let start = Instant::now();
            let out = (t.run)();
            SuiteEntry {
                instance: t.instance,
                claim: t.claim,
                verdict: out.verdict,
                strict: t.strict,
                reason: out.reason,
                certificate: out.certificate,
                wall_seconds: (!deterministic).then(|| start.elapsed().as_secs_f64()),
            }
        })
        .collect();
    entries.sort_by(|a, b| (&a.instance, &a.claim).cmp(&(&b.instance, &b.claim)));
    SuiteReport {
        version: REPORT_VERSION,
        suite,
        orders,
        entries,
    }
}

pub fn verify_paper(suite: Suite, opts: &VerifyOptions) -> Result<SuiteReport, VerifyError> {
    let orders = opts.orders.unwrap_or_else(|| suite.default_orders());
    if orders.0 > orders.1 {
        return Err(VerifyError::EmptyRange(orders.0, orders.1));
    }
    let tasks = match suite {
        Suite::Thm1 => thm1_tasks(orders, opts)?,
        Suite::Thm2 => thm2_tasks(orders, opts)?,
        Suite::Thm3 => thm3_tasks(orders, opts)?,
        Suite::Sec2 => sec2_tasks(orders, opts),
        Suite::Il9 => il9_tasks(orders, opts)?,
        Suite::Klv => klv_tasks(orders, opts)?,
        Suite::Remark45 => remark45_tasks(opts),
    };
    Ok(run_tasks(suite, orders, tasks, opts))
}

fn instances(orders: (usize, usize), min: usize) -> Result<Vec<(usize, FamilySpec, Graph)>, GraphError> {
    let mut out = Vec::new();
    for n in orders.0.max(min)..=orders.1 {
        for spec in maximal_nonseparating(n)? {
            let g = spec.build()?;
            out.push((n, spec, g));
        }
    }
    Ok(out)
}

/// Deletion sets named in the proof of the apex bound: ears of a triangulated
/// polygon, rim vertices 7.. of the wheel, and for a prism every choice that
/// avoids one triangle and its three outside neighbours.
pub fn explicit_deletions(spec: &FamilySpec, g: &Graph) -> Vec<Vec<usize>> {
    let n = g.order();
    let k = n.saturating_sub(7);
    match spec {
        FamilySpec::MaxOuterplanar { .. } => {
            let mut alive = g.vertex_set();
            let mut deleted = Vec::new();
            for _ in 0..k {
                let (h, old) = g.induced(alive);
                let ear = (0..h.order()).find(|&v| h.degree(v) == 2).expect("a triangulated polygon has an ear");
                deleted.push(old[ear]);
                alive &= !bit(old[ear]);
            }
            vec![deleted]
        }
        FamilySpec::Wheel { .. } => vec![(6..n.saturating_sub(1)).collect()],
        FamilySpec::ElongatedPrism { .. } => {
            let triangle = [0usize, 2, 4];
            let mut keep: VertexSet = triangle.iter().fold(0, |acc, &v| acc | bit(v));
            for v in triangle {
                keep |= g.neighbors(v) & !keep;
            }
            let others: Vec<usize> = (0..n).filter(|&v| keep & bit(v) == 0).collect();
            others.into_iter().combinations(k).collect()
        }
        _ => Vec::new(),
    }
}

fn thm1_tasks(orders: (usize, usize), opts: &VerifyOptions) -> Result<Vec<Task>, GraphError> {
    let mut tasks = Vec::new();
    for (n, spec, g) in instances(orders, 7)? {
        let c = g.complement();
        let apex = opts.apex();
        let cc = c.clone();
        tasks.push(Task::new(spec.clone(), format!("complement is {}-apex", n - 7), true, move || {
            match is_k_apex(&cc, n - 7, &apex) {
                Ok(Some(cert)) => match cert.validate(&cc) {
                    Ok(()) => Outcome::verified(to_value(&cert)),
                    Err(e) => Outcome::refuted(format!("certificate fails: {e}"), to_value(&cert)),
                },
                Ok(None) => Outcome::refuted(format!("no {}-subset leaves a planar graph", n - 7), Value::Null),
                Err(e) => Outcome::inconclusive(e.to_string(), Value::Null),
            }
        }));
        let sets = explicit_deletions(&spec, &g);
        tasks.push(Task::new(spec, "named deletion sets leave a planar complement", true, move || {
            let certs: Vec<Option<ApexCertificate>> = sets.iter().map(|s| certify_deletion(&c, s)).collect();
            match sets.iter().zip(&certs).find(|(_, cert)| cert.is_none()) {
                Some((s, _)) => Outcome::refuted(format!("deleting {s:?} leaves a nonplanar graph"), to_value(&sets)),
                None if sets.is_empty() => Outcome::inconclusive("no named deletion set", Value::Null),
                None => Outcome::verified(to_value(&certs)),
            }
        }));
    }
    Ok(tasks)
}

fn thm2_tasks(orders: (usize, usize), opts: &VerifyOptions) -> Result<Vec<Task>, GraphError> {
    let mut tasks = Vec::new();
    for (n, spec, g) in instances(orders, 7)? {
        let c = g.complement();
        let mu = opts.mu();
        tasks.push(Task::new(spec, format!("mu(complement) = {}", n - 4), true, move || {
            match mu_bounds(&c, &mu) {
                Ok(r) => {
                    let cert = to_value(&r);
                    if let Err(e) = r.validate(&c) {
                        Outcome::refuted(format!("trace fails: {e}"), cert)
                    } else if r.lo == n - 4 && r.hi == n - 4 {
                        Outcome::verified(cert)
                    } else if r.lo > n - 4 || r.hi < n - 4 {
                        Outcome::refuted(format!("bounds [{}, {}] exclude {}", r.lo, r.hi, n - 4), cert)
                    } else {
                        Outcome::inconclusive(format!("bounds [{}, {}]", r.lo, r.hi), cert)
                    }
                }
                Err(e) => Outcome::refuted(e.to_string(), Value::Null),
            }
        }));
    }
    Ok(tasks)
}

/// The triangulated 10-gon has a 5-chord, and at every 5-chord the two
/// 3-chords bounding the sides meet at the same end, with no 4-chord at
/// either end. This is the only configuration whose argument relies on a
/// graph outside the ∇Y library.
pub fn cousin12_configuration(order: usize, chords: &[(usize, usize)]) -> bool {
    if order != 10 {
        return false;
    }
    let has = |a: usize, b: usize| chords.iter().any(|&(x, y)| (x, y) == (a % 10, b % 10) || (y, x) == (a % 10, b % 10));
    let long: Vec<(usize, usize)> = chords.iter().copied().filter(|&(a, b)| a.abs_diff(b) == 5).collect();
    if long.is_empty() {
        return false;
    }
    long.iter().all(|&(a, b)| {
        // with a = v1 and b = v6, 4-chords at either end would be v1v5, v1v7, v6v2, v6v10
        let four = has(a, a + 4) || has(a, a + 6) || has(b, b + 4) || has(b, b + 6);
        if four {
            return false;
        }
        // 3-chords inside each side, from a or from b
        let side1_a = has(a, a + 3);
        let side2_a = has(a, a + 7);
        let side1_b = has(b, b + 7);
        let side2_b = has(b, b + 3);
        (side1_a && side2_a) || (side1_b && side2_b)
    })
}

/// The four branch-set certificates for the 10-vertex prism complements, one
/// per way of placing the four subdivision vertices.
pub fn prism10_certificates() -> Vec<(PrismSubdivision, &'static str, MinorCertificate)> {
    let k3311 = NamedGraph::K3311.graph();
    // v1..v6 are 0..5; subdivision vertices a, b, c, d are 6..9
    let [v1, v2, v3, v4, v5, v6, a, b, c, d] = [0usize, 1, 2, 3, 4, 5, 6, 7, 8, 9].map(bit);
    let cases = [
        (PrismSubdivision::new(2, 1, 1), "a", [v1, v3, v5, v2, v4, v6, a | c, b | d]),
        (PrismSubdivision::new(2, 2, 0), "b", [v1, v3, c, v2, v4, b, d | v5, a | v6]),
        (PrismSubdivision::new(3, 1, 0), "c", [v1, v3, a | v5, v2, v4, v6, b, c | d]),
        (PrismSubdivision::new(4, 0, 0), "d", [v1, v3, a, v2, v6, d, c | v4, b | v5]),
    ];
    cases
        .into_iter()
        .map(|(s, name, sets)| {
            let cg = elongated_prism(s).complement();
            let cert = MinorCertificate::from_branch_sets(&cg, &k3311, &sets).expect("listed branch sets form a minor");
            (s, name, cert)
        })
        .collect()
}

fn thm3_tasks(orders: (usize, usize), opts: &VerifyOptions) -> Result<Vec<Task>, GraphError> {
    let mut tasks = Vec::new();
    let lenient: Vec<Vec<(usize, usize)>> = max_outerplanar_classes(10)?
        .into_iter()
        .map(|(_, chords)| chords)
        .filter(|ch| cousin12_configuration(10, ch))
        .collect();
    for (_, spec, g) in instances(orders, 7)? {
        let strict = match &spec {
            FamilySpec::Wheel { .. } => false,
            FamilySpec::MaxOuterplanar { chords, .. } => !lenient.contains(chords),
            _ => true,
        };
        let c = g.complement();
        let ik = opts.ik();
        tasks.push(Task::new(spec, "complement is intrinsically knotted", strict, move || {
            match ik_status(&c, &ik) {
                Ok(v) => {
                    let cert = to_value(&v);
                    match v.status {
                        IkStatus::Ik => match v.ik_evidence.as_ref().map(|ev| ev.validate(&c, ObstructionLibrary::standard())) {
                            Some(Ok(())) => Outcome::verified(cert),
                            Some(Err(e)) => Outcome::refuted(format!("evidence fails: {e}"), cert),
                            None => Outcome::refuted("IK without evidence", cert),
                        },
                        IkStatus::Nik => Outcome::refuted("complement is 2-apex", cert),
                        IkStatus::Unknown => Outcome::inconclusive(v.exhausted.join("; "), cert),
                    }
                }
                Err(e) => Outcome::refuted(e.to_string(), Value::Null),
            }
        }));
    }
    if orders.0 <= 10 && 10 <= orders.1 {
        for (s, name, cert) in prism10_certificates() {
            let cg = elongated_prism(s).complement();
            tasks.push(Task::new(
                FamilySpec::ElongatedPrism { subdivision: s },
                format!("listed K3311 branch sets (case {name}) form a minor of the complement"),
                true,
                move || match validate_certificate(&cg, &cert) {
                    Ok(()) => Outcome::verified(to_value(&cert)),
                    Err(e) => Outcome::refuted(e, to_value(&cert)),
                },
            ));
        }
    }
    Ok(tasks)
}

fn sec2_tasks(orders: (usize, usize), opts: &VerifyOptions) -> Vec<Task> {
    let in_range = |n: usize| orders.0 <= n && n <= orders.1;
    let mut tasks = Vec::new();
    let nil = |spec: FamilySpec, budget: Budget| -> Task {
        Task::new(spec.clone(), "maximal linklessly embeddable with 4|V|-10 edges", true, move || {
            let g = spec.build().expect("small family instance");
            let want = 4 * g.order() - 10;
            if g.size() != want {
                return Outcome::refuted(format!("{} edges, expected {want}", g.size()), Value::Null);
            }
            match is_max_nil(&g, &budget) {
                Ok(r) if r.maximal => Outcome::verified(to_value(&r)),
                Ok(r) => Outcome::refuted("not maximal linklessly embeddable", to_value(&r)),
                Err(e) => Outcome::inconclusive(e.to_string(), Value::Null),
            }
        })
    };
    let nik = |spec: FamilySpec, ik: IkOptions| -> Task {
        Task::new(spec.clone(), "maximal knotlessly embeddable with 5|V|-15 edges", true, move || {
            let g = spec.build().expect("small family instance");
            let want = 5 * g.order() - 15;
            if g.size() != want {
                return Outcome::refuted(format!("{} edges, expected {want}", g.size()), Value::Null);
            }
            match certify_max_nik(&g, &ik) {
                Ok(r) => match r.verdict {
                    MaxNikVerdict::Certified => Outcome::verified(to_value(&r)),
                    MaxNikVerdict::Refuted => Outcome::refuted("an IK base or a nIK extension", to_value(&r)),
                    MaxNikVerdict::Inconclusive => Outcome::inconclusive("some extension has no IK evidence", to_value(&r)),
                },
                Err(e) => Outcome::refuted(e.to_string(), Value::Null),
            }
        })
    };
    let mops = |n: usize| -> Vec<FamilySpec> {
        max_outerplanar_classes(n)
            .expect("small order")
            .into_iter()
            .map(|(_, chords)| FamilySpec::MaxOuterplanar { order: n, chords })
            .collect()
    };
    for n in (5..=7).filter(|&n| in_range(n)) {
        tasks.push(nil(FamilySpec::join(FamilySpec::Wheel { order: n }, FamilySpec::Empty { order: 2 }), opts.budget));
    }
    for n in (4..=6).filter(|&n| in_range(n)) {
        for h in mops(n) {
            tasks.push(nil(FamilySpec::join(h, FamilySpec::Complete { order: 2 }), opts.budget));
        }
    }
    for n in (5..=6).filter(|&n| in_range(n)) {
        tasks.push(nik(FamilySpec::join(FamilySpec::Wheel { order: n }, FamilySpec::Path { edges: 2 }), opts.ik()));
    }
    for n in (4..=5).filter(|&n| in_range(n)) {
        for h in mops(n) {
            tasks.push(nik(FamilySpec::join(h, FamilySpec::Complete { order: 3 }), opts.ik()));
        }
    }
    tasks
}

fn il9_tasks(orders: (usize, usize), opts: &VerifyOptions) -> Result<Vec<Task>, GraphError> {
    let mut tasks = Vec::new();
    for (n, spec, g) in instances(orders, 7)? {
        let c = g.complement();
        let budget = opts.budget;
        let expect_il = n >= 9;
        let claim = if expect_il {
            "complement is intrinsically linked"
        } else {
            "complement is linklessly embeddable"
        };
        tasks.push(Task::new(spec, claim, true, move || match is_il(&c, &budget) {
            Ok(v) => {
                let cert = to_value(&v);
                if v.il != expect_il {
                    return Outcome::refuted(if v.il { "Petersen-family minor found" } else { "no Petersen-family minor" }, cert);
                }
                if let Some(hit) = &v.witness {
                    if let Err(e) = validate_certificate(&c, &hit.certificate) {
                        return Outcome::refuted(format!("witness fails: {e}"), cert);
                    }
                }
                if n == 7 && !planar(&c) {
                    return Outcome::refuted("order-7 complement is not planar", cert);
                }
                Outcome::verified(cert)
            }
            Err(e) => Outcome::inconclusive(e.to_string(), Value::Null),
        }));
    }
    Ok(tasks)
}

/// Planar graph on `n` vertices: a random maximal planar graph with some edges dropped.
fn random_planar(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let mut pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    pairs.shuffle(rng);
    let mut g = Graph::new(n);
    for (u, v) in pairs {
        let h = g.add_edge(u, v).expect("fresh pair");
        if planar(&h) {
            g = h;
        }
    }
    let keep: Vec<(usize, usize)> = g.edges().filter(|_| rng.gen_bool(0.75)).collect();
    Graph::from_edges(n, &keep).expect("subset of edges")
}

/// `g` with one extra vertex joined to `nbrs`.
fn add_vertex(g: &Graph, nbrs: VertexSet) -> Graph {
    let n = g.order();
    let mut adj = g.adjacency().to_vec();
    for (v, a) in adj.iter_mut().enumerate() {
        if nbrs & bit(v) != 0 {
            *a |= bit(n);
        }
    }
    adj.push(nbrs);
    Graph::from_adjacency(adj).expect("simple graph")
}

/// Largest order at which every attachment of the two apex vertices is tried.
pub const KLV_EXHAUSTIVE_ORDER: usize = 8;
/// Attachments sampled per base graph above that order.
pub const KLV_SAMPLES: usize = 40;

fn klv_batch(graphs: Vec<Graph>, mu: &MuOptions) -> Outcome {
    let results: Vec<(KlvVerdict, String)> = graphs
        .par_iter()
        .map(|g| {
            let v = check_klv(g, mu).map(|r| r.verdict).unwrap_or(KlvVerdict::Inconclusive);
            (v, to_graph6(g))
        })
        .collect();
    let fails: Vec<&String> = results.iter().filter(|r| r.0 == KlvVerdict::Fails).map(|r| &r.1).collect();
    let open: Vec<&String> = results.iter().filter(|r| r.0 == KlvVerdict::Inconclusive).map(|r| &r.1).collect();
    let cert = json!({
        "graphs": results.len(),
        "holds": results.len() - fails.len() - open.len(),
        "fails": fails,
        "inconclusive": open,
    });
    if !fails.is_empty() {
        Outcome::refuted(format!("{} graphs violate the bound", fails.len()), cert)
    } else if !open.is_empty() {
        Outcome::inconclusive(format!("{} of {} graphs undecided", open.len(), results.len()), cert)
    } else {
        Outcome::verified(cert)
    }
}

fn klv_tasks(orders: (usize, usize), opts: &VerifyOptions) -> Result<Vec<Task>, GraphError> {
    let mut tasks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let lo = orders.0.max(4);
    let hi = orders.1.min(10);
    if lo <= hi {
        let graphs: Vec<Graph> = (0..100)
            .map(|_| {
                let n = rng.gen_range(lo..=hi);
                let base = random_planar(n - 1, &mut rng);
                add_vertex(&base, rng.gen::<u64>() & full_set(n - 1))
            })
            .collect();
        let mu = opts.mu();
        tasks.push(Task::new(
            FamilySpec::Empty { order: 0 },
            "KLV bound for 100 random 1-apex graphs",
            false,
            move || klv_batch(graphs.clone(), &mu),
        ));
    }
    for n in orders.0.max(6)..=orders.1.min(crate::mu::MAX_KLV_ORDER) {
        let m = n - 2;
        for spec in maximal_nonseparating(m)? {
            let h = spec.build()?;
            let attachments: Vec<(VertexSet, VertexSet, bool)> = if n <= KLV_EXHAUSTIVE_ORDER {
                (0..1u64 << m)
                    .flat_map(|a| (0..1u64 << m).flat_map(move |b| [(a, b, false), (a, b, true)]))
                    .collect()
            } else {
                let full = full_set(m);
                let mut v = vec![(0, 0, false), (full, full, true), (full, 0, true)];
                v.extend((0..KLV_SAMPLES).map(|_| (rng.gen::<u64>() & full, rng.gen::<u64>() & full, rng.gen_bool(0.5))));
                v
            };
            let mode = if n <= KLV_EXHAUSTIVE_ORDER { "every" } else { "sampled" };
            let claim = format!("KLV bound with two apex vertices, {mode} attachment ({})", attachments.len());
            let mu = opts.mu();
            tasks.push(Task::new(spec, claim, false, move || {
                let graphs = attachments
                    .iter()
                    .map(|&(a, b, e)| {
                        let g = add_vertex(&h, a);
                        add_vertex(&g, b | if e { bit(m) } else { 0 })
                    })
                    .collect();
                klv_batch(graphs, &mu)
            }));
        }
    }
    Ok(tasks)
}

fn remark45_tasks(opts: &VerifyOptions) -> Vec<Task> {
    let apex = opts.apex();
    vec![Task::new(
        FamilySpec::Cycle { order: 8 },
        "complement has 20 edges and is 2-apex",
        true,
        move || {
            let c = crate::families::cycle(8).expect("C8").complement();
            if c.size() != 20 {
                return Outcome::refuted(format!("{} edges", c.size()), Value::Null);
            }
            match is_k_apex(&c, 2, &apex) {
                Ok(Some(cert)) if cert.validate(&c).is_ok() => Outcome::verified(to_value(&cert)),
                Ok(Some(cert)) => Outcome::refuted("certificate fails", to_value(&cert)),
                Ok(None) => Outcome::refuted("not 2-apex", Value::Null),
                Err(e) => Outcome::inconclusive(e.to_string(), Value::Null),
            }
        },
    )]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.id().parse::<Suite>().unwrap(), s);
        }
        assert!("thm4".parse::<Suite>().is_err());
    }

    #[test]
    fn prism_certificates_validate() {
        for (s, _, cert) in prism10_certificates() {
            validate_certificate(&elongated_prism(s).complement(), &cert).unwrap();
        }
    }

    #[test]
    fn cousin12_polygons() {
        let lenient: Vec<_> = max_outerplanar_classes(10)
            .unwrap()
            .into_iter()
            .filter(|(_, ch)| cousin12_configuration(10, ch))
            .collect();
        // the two quadrilaterals at v1 are triangulated freely: four ways, three up to reflection
        assert_eq!(lenient.len(), 3);
        // v1 = 3: 5-chord 3-8 with 3-chords 3-6 and 3-0, no 4-chords at 3 or 8
        let chords = [(0, 2), (0, 3), (0, 8), (3, 6), (3, 8), (4, 6), (6, 8)];
        assert!(cousin12_configuration(10, &chords));
    }

    #[test]
    fn explicit_deletions_have_the_right_size() {
        for n in 7..=10 {
            for spec in maximal_nonseparating(n).unwrap() {
                let g = spec.build().unwrap();
                let sets = explicit_deletions(&spec, &g);
                assert!(!sets.is_empty(), "{spec}");
                assert!(sets.iter().all(|s| s.len() == n - 7));
            }
        }
    }

    #[test]
    fn remark45_and_report_text() {
        let r = verify_paper(Suite::Remark45, &VerifyOptions::default()).unwrap();
        assert!(r.passed());
        assert!(r.to_text().contains("PASS"));
    }
}
