//! Exact μ for every graph on at most seven vertices, from forbidden minors
//! found by brute-force deletion and contraction, against `mu_bounds`.

use std::collections::{BTreeSet, HashMap};

use nonsep_core::families::{all_graphs, complete, NamedGraph};
use nonsep_core::mu::{mu_bounds, MuOptions};
use nonsep_core::{canonical_form, CanonicalForm, Graph};

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

fn form(n: usize, edges: &[(usize, usize)]) -> CanonicalForm {
    canonical_form(&Graph::from_edges(n, edges).unwrap()).unwrap()
}

#[test]
fn intervals_contain_the_exact_value() {
    let k = |n| canonical_form(&complete(n)).unwrap();
    let star = form(4, &[(0, 1), (0, 2), (0, 3)]);
    let k23 = form(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]);
    let k33 = canonical_form(&NamedGraph::K33.graph()).unwrap();
    let k331 = canonical_form(&NamedGraph::K33.graph().join(&Graph::new(1))).unwrap();
    // K6 with the triangle 0,1,2 replaced by a vertex of degree 3
    let mut k6y: Vec<(usize, usize)> = complete(6).edges().filter(|&(u, v)| v > 2 || u > 2).collect();
    k6y.extend([(0, 6), (1, 6), (2, 6)]);
    let k6y = form(7, &k6y);
    // forbidden minors for mu <= 1, 2, 3, 4 among graphs of order at most 7
    let levels: [Vec<CanonicalForm>; 4] = [vec![k(3), star], vec![k(4), k23], vec![k(5), k33], vec![k(6), k6y, k331]];

    let mut memo = HashMap::new();
    let (mut total, mut exact) = (0, 0);
    for n in 1..=7 {
        for g in all_graphs(n).unwrap() {
            let down = minor_closure(&g, &mut memo);
            let mu = if g.size() == 0 {
                0
            } else if g.size() == n * (n - 1) / 2 {
                n - 1
            } else {
                // a non-complete graph on seven vertices outside the linkless class has mu = 5
                1 + levels.iter().take_while(|fs| fs.iter().any(|f| down.contains(f))).count()
            };
            let r = mu_bounds(&g, &MuOptions::default()).unwrap();
            assert!(r.lo <= mu && mu <= r.hi, "{g:?}: mu = {mu}, bounds [{}, {}]", r.lo, r.hi);
            let p = mu_bounds(&g, &MuOptions { paper_rules_only: true, ..MuOptions::default() }).unwrap();
            assert!(p.lo <= mu && mu <= p.hi, "{g:?}: mu = {mu}, paper-only bounds [{}, {}]", p.lo, p.hi);
            total += 1;
            exact += usize::from(r.is_exact());
        }
    }
    assert_eq!(total, 1252);
    println!("{exact} of {total} intervals exact");
}
