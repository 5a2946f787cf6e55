//! k-apex decision and apex number, with deletion-set certificates.

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::BudgetError;
use crate::graph::{set_of, Graph};
use crate::planarity::{embed, planar, RotationSystem};

/// A vertex set whose deletion leaves a planar graph, with an embedding of
/// what remains (indexed in increasing order of the kept vertices).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApexCertificate {
    pub deleted: Vec<usize>,
    pub embedding: RotationSystem,
}

impl ApexCertificate {
    pub fn k(&self) -> usize {
        self.deleted.len()
    }

    /// Re-checks the embedding of `g - deleted` from scratch.
    pub fn validate(&self, g: &Graph) -> Result<(), String> {
        if let Some(&v) = self.deleted.iter().find(|&&v| v >= g.order()) {
            return Err(format!("deleted vertex {v} is outside the graph"));
        }
        let s = set_of(self.deleted.iter().copied());
        if s.count_ones() as usize != self.deleted.len() {
            return Err("deleted set lists a vertex twice".into());
        }
        let (rest, _) = g.induced(g.vertex_set() & !s);
        self.embedding.validate(&rest)
    }
}

/// Certificate for deleting exactly `deleted`, if `g - deleted` is planar.
pub fn certify_deletion(g: &Graph, deleted: &[usize]) -> Option<ApexCertificate> {
    let s = set_of(deleted.iter().copied());
    let (rest, _) = g.induced(g.vertex_set() & !s);
    let mut deleted = deleted.to_vec();
    deleted.sort_unstable();
    embed(&rest).map(|embedding| ApexCertificate { deleted, embedding })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApexOptions {
    /// Return the lexicographically least deletion set instead of the first one found.
    pub deterministic: bool,
    /// Largest number of candidate subsets a single `k` may require.
    pub max_subsets: u128,
    /// Largest order `apex_number` accepts.
    pub max_order: usize,
}

impl Default for ApexOptions {
    fn default() -> Self {
        ApexOptions {
            deterministic: false,
            max_subsets: 50_000_000,
            max_order: 14,
        }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Some `k`-subset whose deletion leaves `g` planar, or `None` if every subset fails.
pub fn is_k_apex(g: &Graph, k: usize, opts: &ApexOptions) -> Result<Option<ApexCertificate>, BudgetError> {
    let n = g.order();
    if k >= n {
        return Ok(Some(certify_deletion(g, &(0..n).collect::<Vec<_>>()).expect("empty graph is planar")));
    }
    let count = binomial(n, k);
    if count > opts.max_subsets {
        return Err(BudgetError::Combinatorial {
            count,
            limit: opts.max_subsets,
        });
    }
    let mut by_degree: Vec<usize> = (0..n).collect();
    if !opts.deterministic {
        by_degree.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    }
    let full = g.vertex_set();
    let remaining = n - k;
    let test = |subset: Vec<usize>| -> Option<ApexCertificate> {
        let s = set_of(subset.iter().copied());
        let (rest, _) = g.induced(full & !s);
        if remaining >= 3 && rest.size() > 3 * remaining - 6 {
            return None;
        }
        if !planar(&rest) {
            return None;
        }
        certify_deletion(g, &subset)
    };
    let subsets: Vec<Vec<usize>> = by_degree.iter().copied().combinations(k).collect();
    let found = if opts.deterministic {
        subsets.into_par_iter().find_map_first(test)
    } else {
        subsets.into_par_iter().find_map_any(test)
    };
    Ok(found)
}

/// Smallest `k` such that `g` is `k`-apex, with its certificate.
pub fn apex_number(g: &Graph, opts: &ApexOptions) -> Result<ApexCertificate, BudgetError> {
    if g.order() > opts.max_order {
        return Err(BudgetError::Graph(crate::error::GraphError::TooLarge {
            order: g.order(),
            limit: opts.max_order,
        }));
    }
    apex_number_at_most(g, g.order(), opts).map(|c| c.expect("deleting everything is planar"))
}

/// Apex number if it is at most `limit`; `None` when it exceeds `limit`.
pub fn apex_number_at_most(g: &Graph, limit: usize, opts: &ApexOptions) -> Result<Option<ApexCertificate>, BudgetError> {
    for k in 0..=limit.min(g.order()) {
        if let Some(c) = is_k_apex(g, k, opts)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}
