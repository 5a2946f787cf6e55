//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::collections::{BTreeSet, HashMap};
use std::process::ExitCode;
use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use nonsep_core::budget::Budget;
use nonsep_core::families::{all_graphs, complete, elongated_prism, NamedGraph};
use nonsep_core::minors::{has_minor, validate_certificate, MinorResult};
use nonsep_core::moves::{closure, ClosureConfig, MoveKind};
use nonsep_core::planarity::is_planar;
use nonsep_core::verify::{prism10_certificates, verify_paper, Suite, SuiteReport, Verdict, VerifyOptions};
use nonsep_core::{canonical_form, CanonicalForm, Graph};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Petersen family closure of K6", petersen_family),
        ("complements are (n-7)-apex, n = 7..11", || suite(Suite::Thm1, None)),
        ("mu of complements is n-4, n = 7..10", || suite(Suite::Thm2, None)),
        ("complements are IL at n = 9, not at n = 7", || suite(Suite::Il9, Some((7, 9)))),
        ("IK certificates at n = 10", intrinsic_knotting),
        ("maxnIL and maxnIK joins", || suite(Suite::Sec2, None)),
        ("K8 minus C8 is 2-apex", || suite(Suite::Remark45, None)),
        ("Mader edge bounds force K6 and K7 minors", mader),
        ("minor and planarity oracles", oracles),
        ("KLV inequality on 1-apex and 2-apex graphs", || suite(Suite::Klv, None)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS ({secs:.1}s) {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL ({secs:.1}s) {name}: {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn summary(r: &SuiteReport) -> String {
    let lenient: Vec<String> = r
        .entries
        .iter()
        .filter(|e| e.verdict == Verdict::Inconclusive && !e.strict)
        .map(|e| format!("{} ({})", e.instance, e.claim))
        .collect();
    let mut s = format!(
        "{} verified, {} refuted, {} inconclusive",
        r.count(Verdict::Verified),
        r.count(Verdict::Refuted),
        r.count(Verdict::Inconclusive)
    );
    if !lenient.is_empty() {
        s.push_str(&format!("; permitted inconclusive: {}", lenient.join(", ")));
    }
    s
}

fn suite(s: Suite, orders: Option<(usize, usize)>) -> Outcome {
    let opts = VerifyOptions {
        orders,
        ..VerifyOptions::default()
    };
    let r = verify_paper(s, &opts).map_err(|e| e.to_string())?;
    let text = summary(&r);
    if r.passed() {
        Ok(text)
    } else {
        let bad: Vec<String> = r
            .entries
            .iter()
            .filter(|e| e.verdict == Verdict::Refuted || (e.verdict == Verdict::Inconclusive && e.strict))
            .take(5)
            .map(|e| format!("{} {}: {}", e.instance, e.claim, e.reason.as_deref().unwrap_or("")))
            .collect();
        Err(format!("{text}; first failures: {}", bad.join("; ")))
    }
}

fn petersen_family() -> Outcome {
    let config = ClosureConfig::new(&[MoveKind::NablaY, MoveKind::YNabla], 12);
    let members = closure(&[complete(6)], &config).map_err(|e| e.to_string())?;
    let petersen = canonical_form(&NamedGraph::Petersen.graph()).unwrap();
    let has_petersen = members.iter().any(|m| m.form == petersen);
    if members.len() == 7 && has_petersen {
        Ok("7 classes including the Petersen graph".into())
    } else {
        Err(format!("{} classes, Petersen present: {has_petersen}", members.len()))
    }
}

fn intrinsic_knotting() -> Outcome {
    let suite_line = suite(Suite::Thm3, None)?;
    for (s, case, cert) in prism10_certificates() {
        let g = elongated_prism(s).complement();
        validate_certificate(&g, &cert).map_err(|e| format!("listed certificate {case} on {s}: {e}"))?;
        if cert.target != NamedGraph::K3311.graph() {
            return Err(format!("listed certificate {case} does not target K3311"));
        }
    }
    Ok(format!("{suite_line}; 4 listed K3311 certificates validate"))
}

fn random_with_edges(rng: &mut ChaCha8Rng, n: usize, e: usize) -> Graph {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let edges: Vec<(usize, usize)> = sample(rng, pairs.len(), e).into_iter().map(|i| pairs[i]).collect();
    Graph::from_edges(n, &edges).unwrap()
}

fn mader() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d61646572);
    let mut cases = Vec::new();
    for _ in 0..500 {
        let n = rng.gen_range(6..=10);
        cases.push((6, random_with_edges(&mut rng, n, 4 * n - 9)));
    }
    for _ in 0..500 {
        let n = rng.gen_range(7..=10);
        cases.push((7, random_with_edges(&mut rng, n, 5 * n - 14)));
    }
    let failures: Vec<String> = cases
        .par_iter()
        .filter_map(|(k, g)| match has_minor(g, &complete(*k), &Budget::default()) {
            MinorResult::Found { certificate } => validate_certificate(g, &certificate)
                .err()
                .map(|e| format!("K{k} certificate on {g:?}: {e}")),
            other => Some(format!("no K{k} certificate on {g:?}: {other:?}")),
        })
        .collect();
    if failures.is_empty() {
        Ok("500 K6 and 500 K7 certificates validate".into())
    } else {
        Err(format!("{} failures, first: {}", failures.len(), failures[0]))
    }
}

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

fn oracles() -> Outcome {
    let catalog: Vec<(Graph, CanonicalForm)> = (0..=7)
        .flat_map(|n| all_graphs(n).unwrap())
        .map(|g| {
            let f = canonical_form(&g).unwrap();
            (g, f)
        })
        .collect();
    let mut memo = HashMap::new();
    let minors: Vec<BTreeSet<CanonicalForm>> = catalog.iter().map(|(g, _)| minor_closure(g, &mut memo)).collect();
    let disagreements: Vec<String> = catalog
        .par_iter()
        .zip(minors.par_iter())
        .flat_map_iter(|((g, _), down)| {
            catalog.iter().filter_map(move |(h, hf)| {
                let r = has_minor(g, h, &Budget::unlimited());
                if r.is_found() != down.contains(hf) {
                    return Some(format!("{g:?} vs {h:?}: solver {}", r.is_found()));
                }
                let cert = r.certificate()?;
                validate_certificate(g, cert).err().map(|e| format!("{g:?} vs {h:?}: {e}"))
            })
        })
        .collect();
    let pairs = catalog.len() * catalog.len();
    let k5 = canonical_form(&complete(5)).unwrap();
    let k33 = canonical_form(&NamedGraph::K33.graph()).unwrap();
    let mut planar_checked = 0;
    let mut planar_bad = Vec::new();
    for ((g, _), down) in catalog.iter().zip(&minors).filter(|((g, _), _)| g.order() <= 6) {
        planar_checked += 1;
        let r = is_planar(g);
        let expected = !down.contains(&k5) && !down.contains(&k33);
        if r.is_planar() != expected || r.validate(g).is_err() {
            planar_bad.push(format!("{g:?}"));
        }
    }
    if disagreements.is_empty() && planar_bad.is_empty() {
        Ok(format!(
            "{pairs} minor pairs over {} graphs, {planar_checked} planarity checks, zero disagreements",
            catalog.len()
        ))
    } else {
        Err(format!(
            "{} minor disagreements, {} planarity disagreements; first: {}",
            disagreements.len(),
            planar_bad.len(),
            disagreements.first().or(planar_bad.first()).unwrap()
        ))
    }
}
