//! Per-vertex invariants. A vertex-transitive graph gives every vertex the same
//! value, so two or more distinct values certify non-vertex-transitivity.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{char_poly, Graph};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvariantKind {
    /// Exact characteristic polynomial of the neighbourhood subgraph.
    NbhdCharpoly,
    /// Triangles and 4-cliques through the vertex.
    CliqueCounts,
}

impl InvariantKind {
    pub fn name(self) -> &'static str {
        match self {
            InvariantKind::NbhdCharpoly => "nbhd-charpoly",
            InvariantKind::CliqueCounts => "clique-counts",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantDistribution {
    /// Invariant actually used.
    pub invariant: InvariantKind,
    /// True when `NbhdCharpoly` was requested but a neighbourhood exceeded the budget.
    pub fell_back: bool,
    /// Distinct values (rendered) with the number of vertices taking each.
    pub classes: BTreeMap<String, usize>,
}

impl InvariantDistribution {
    pub fn distinct(&self) -> usize {
        self.classes.len()
    }

    /// Class sizes, largest first.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.classes.values().copied().collect();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }
}

fn clique_counts<L>(g: &Graph<L>, v: usize) -> (u64, u64) {
    let nb: Vec<usize> = g.neighbors(v).collect();
    let row_v = g.row(v);
    let mut triangles = 0u64;
    let mut k4 = 0u64;
    let mut common = vec![0u64; g.words()];
    for (a_pos, &a) in nb.iter().enumerate() {
        let row_a = g.row(a);
        for &b in &nb[a_pos + 1..] {
            if !g.adjacent(a, b) {
                continue;
            }
            triangles += 1;
            for (((w, x), y), z) in common.iter_mut().zip(row_v).zip(row_a).zip(g.row(b)) {
                *w = x & y & z;
            }
            // vertices c > b adjacent to v, a, b
            k4 += crate::bits::iter_ones(&common).filter(|&c| c > b).count() as u64;
        }
    }
    (triangles, k4)
}

pub fn vertex_invariant_distribution<L: Sync>(
    g: &Graph<L>,
    kind: InvariantKind,
    spectral_budget: usize,
) -> Result<InvariantDistribution> {
    let max_degree = g.degrees().into_iter().max().unwrap_or(0);
    let (used, fell_back) = match kind {
        InvariantKind::NbhdCharpoly if max_degree > spectral_budget => (InvariantKind::CliqueCounts, true),
        k => (k, false),
    };
    let values: Vec<String> = (0..g.n())
        .into_par_iter()
        .map(|v| -> Result<String> {
            Ok(match used {
                InvariantKind::NbhdCharpoly => {
                    let nb: Vec<usize> = g.neighbors(v).collect();
                    char_poly(&g.induced(&nb), spectral_budget)?.to_string()
                }
                InvariantKind::CliqueCounts => {
                    let (t, k4) = clique_counts(g, v);
                    format!("triangles={t} k4={k4}")
                }
            })
        })
        .collect::<Result<_>>()?;
    let mut classes = BTreeMap::new();
    for v in values {
        *classes.entry(v).or_insert(0) += 1;
    }
    Ok(InvariantDistribution { invariant: used, fell_back, classes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    #[test]
    fn cycle_has_one_value() {
        let c6 = build_graph((0..6).collect(), |&a: &usize, &b: &usize| (a + 1) % 6 == b || (b + 1) % 6 == a).unwrap();
        for kind in [InvariantKind::NbhdCharpoly, InvariantKind::CliqueCounts] {
            let d = vertex_invariant_distribution(&c6, kind, 100).unwrap();
            assert_eq!(d.distinct(), 1);
            assert_eq!(d.class_sizes(), vec![6]);
        }
    }

    #[test]
    fn star_has_two_values() {
        let star = build_graph((0..4).collect(), |&a: &usize, &b: &usize| a == 0 || b == 0).unwrap();
        let d = vertex_invariant_distribution(&star, InvariantKind::NbhdCharpoly, 100).unwrap();
        assert_eq!(d.distinct(), 2);
        assert_eq!(d.class_sizes(), vec![3, 1]);
        assert!(!d.fell_back);
    }

    #[test]
    fn clique_counts_of_k5() {
        let k5 = build_graph((0..5).collect(), |_: &i32, _: &i32| true).unwrap();
        assert_eq!(clique_counts(&k5, 0), (6, 4));
    }

    #[test]
    fn falls_back_above_budget() {
        let k5 = build_graph((0..5).collect(), |_: &i32, _: &i32| true).unwrap();
        let d = vertex_invariant_distribution(&k5, InvariantKind::NbhdCharpoly, 3).unwrap();
        assert!(d.fell_back);
        assert_eq!(d.invariant, InvariantKind::CliqueCounts);
        assert_eq!(d.classes.keys().next().unwrap(), "triangles=6 k4=4");
    }
}
