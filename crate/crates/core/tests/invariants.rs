use proptest::prelude::*;

use nonsep_core::apex::{is_k_apex, ApexOptions};
use nonsep_core::mu::{mu_bounds, MuOptions};
use nonsep_core::nonsep::classify_nonseparating;
use nonsep_core::planarity::is_planar;
use nonsep_core::{canonical_form, Graph};

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |keep| {
            let edges: Vec<(usize, usize)> = pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e).collect();
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

fn graph_and_perm(max_n: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    graph(max_n).prop_flat_map(|g| {
        let n = g.order();
        (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_form_ignores_labelling((g, perm) in graph_and_perm(9)) {
        prop_assert_eq!(canonical_form(&g).unwrap(), canonical_form(&g.permute(&perm)).unwrap());
    }

    #[test]
    fn complement_is_an_involution(g in graph(10)) {
        let c = g.complement();
        prop_assert_eq!(g.size() + c.size(), g.order() * (g.order() - 1) / 2);
        prop_assert_eq!(c.complement(), g);
    }

    #[test]
    fn planarity_certificates_validate(g in graph(9)) {
        let r = is_planar(&g);
        prop_assert!(r.validate(&g).is_ok());
        if r.is_planar() && g.order() >= 3 {
            prop_assert!(g.size() <= 3 * g.order() - 6);
        }
    }

    #[test]
    fn nonseparating_graphs_are_planar(g in graph(8)) {
        let c = classify_nonseparating(&g);
        prop_assert!(c.validate(&g).is_ok());
        if c.is_nonseparating() {
            prop_assert!(is_planar(&g).is_planar());
        }
    }

    #[test]
    fn apex_search_is_monotone(g in graph(8)) {
        let opts = ApexOptions { deterministic: true, ..ApexOptions::default() };
        let mut seen = false;
        for k in 0..=g.order() {
            match is_k_apex(&g, k, &opts).unwrap() {
                Some(cert) => {
                    prop_assert!(cert.validate(&g).is_ok());
                    seen = true;
                }
                None => prop_assert!(!seen, "{k}-apex failed after a smaller k succeeded"),
            }
        }
        prop_assert!(seen);
    }

    #[test]
    fn mu_traces_validate(g in graph(8)) {
        let r = mu_bounds(&g, &MuOptions::default()).unwrap();
        prop_assert!(r.lo <= r.hi);
        prop_assert!(r.validate(&g).is_ok());
        if is_planar(&g).is_planar() {
            prop_assert!(r.hi <= 3);
        } else {
            prop_assert!(r.lo >= 4);
        }
    }

    #[test]
    fn mu_intervals_are_relabelling_invariant((g, perm) in graph_and_perm(8)) {
        let a = mu_bounds(&g, &MuOptions::default()).unwrap();
        let b = mu_bounds(&g.permute(&perm), &MuOptions::default()).unwrap();
        // bounds may differ in strength but the intervals must overlap
        prop_assert!(a.lo <= b.hi && b.lo <= a.hi, "{:?} vs {:?}", (a.lo, a.hi), (b.lo, b.hi));
    }

    #[test]
    fn mu_is_consistent_across_minors(g in graph(8), pick in any::<prop::sample::Index>(), contract in any::<bool>()) {
        let edges: Vec<(usize, usize)> = g.edges().collect();
        if edges.is_empty() {
            return Ok(());
        }
        let (u, v) = edges[pick.index(edges.len())];
        let h = if contract { g.contract_edge(u, v).unwrap() } else { g.remove_edge(u, v).unwrap() };
        let big = mu_bounds(&g, &MuOptions::default()).unwrap();
        let small = mu_bounds(&h, &MuOptions::default()).unwrap();
        // mu is minor-monotone, so no valid pair of intervals can put the minor strictly above
        prop_assert!(small.lo <= big.hi, "minor lo {} above hi {}", small.lo, big.hi);
    }

    #[test]
    fn paper_rules_only_never_contradicts_the_full_rule_set(g in graph(8)) {
        let full = mu_bounds(&g, &MuOptions::default()).unwrap();
        let paper = mu_bounds(&g, &MuOptions { paper_rules_only: true, ..MuOptions::default() }).unwrap();
        prop_assert!(paper.lo <= full.hi && full.lo <= paper.hi);
        prop_assert!(!paper.trace.iter().any(|s| matches!(s.rule.id(), "outerplanar" | "not-outerplanar" | "linear-forest" | "not-linear-forest")));
    }
}
