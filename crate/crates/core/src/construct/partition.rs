use rayon::prelude::*;
use serde::Serialize;

use super::Geometry;
use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::graph::{check_equitable, Equitability, Graph, QuotientMatrix, SwitchingPartition};
use crate::subspace::Polarity;

/// The partition `{C_U ∪ C_σ(U)} ∪ {D}` of the Grassmann graph's vertices.
#[derive(Debug, Clone, Serialize)]
pub struct PolarityPartition {
    pub partition: SwitchingPartition,
    /// `sigma[u]`: index in `Geometry::e_spaces` of `σ(e_spaces[u])`.
    pub sigma: Vec<usize>,
    /// `(u, σu)` with `u <= σu` for each cell, in cell order.
    pub cell_pairs: Vec<(usize, usize)>,
    /// Cell of each vertex; `None` on D.
    pub cell_of: Vec<Option<usize>>,
}

impl PolarityPartition {
    /// Cells with `σ(U) = U`.
    pub fn fixed_cells(&self) -> usize {
        self.cell_pairs.iter().filter(|(u, s)| u == s).count()
    }
}

pub(crate) fn sigma_table(geom: &Geometry, sigma: &Polarity) -> Result<Vec<usize>> {
    if sigma.e() != geom.params.e || sigma.field() != &geom.field {
        return Err(Error::param(format!(
            "polarity on GF({})^{} does not match (q, e) = ({}, {})",
            sigma.field().q(),
            2 * sigma.e(),
            geom.params.q,
            geom.params.e
        )));
    }
    let table: Vec<usize> = geom
        .e_spaces
        .iter()
        .map(|u| {
            let s = sigma.apply(u)?;
            geom.e_spaces
                .binary_search(&s)
                .map_err(|_| Error::Consistency(format!("σ({u:?}) = {s:?} is not an e-subspace of H")))
        })
        .collect::<Result<_>>()?;
    if table.iter().enumerate().any(|(u, &s)| table[s] != u) {
        return Err(Error::Consistency("σ is not an involution on [H, e]".into()));
    }
    Ok(table)
}

pub fn switching_partition(geom: &Geometry, sigma: &Polarity) -> Result<PolarityPartition> {
    let table = sigma_table(geom, sigma)?;
    let mut cell_index = vec![usize::MAX; table.len()];
    let mut cell_pairs = Vec::new();
    for (u, &s) in table.iter().enumerate() {
        if u <= s {
            cell_index[u] = cell_pairs.len();
            cell_index[s] = cell_pairs.len();
            cell_pairs.push((u, s));
        }
    }
    let mut cells = vec![Vec::new(); cell_pairs.len()];
    let mut exempt = Vec::new();
    let mut cell_of = vec![None; geom.blocks.len()];
    for (w, u) in geom.vertex_u.iter().enumerate() {
        match u {
            Some(u) => {
                cells[cell_index[*u]].push(w);
                cell_of[w] = Some(cell_index[*u]);
            }
            None => exempt.push(w),
        }
    }
    Ok(PolarityPartition { partition: SwitchingPartition::new(cells, exempt), sigma: table, cell_pairs, cell_of })
}

/// Comparison of the lifted quotient on 𝒜 with `q m_ij + δ_ij (q^e - 1)`.
#[derive(Debug, Clone, Serialize)]
pub struct LiftedQuotientReport {
    /// Quotient of the supplied partition of `J_q(2e, e)`.
    pub small: QuotientMatrix,
    /// Quotient of the lifted partition on 𝒜, or the violation found.
    pub lifted: Equitability,
    /// First `(i, j, found, expected)` that disagrees.
    pub first_mismatch: Option<(usize, usize, u64, u64)>,
    pub matches: bool,
}

/// `cells` partitions the indices of `Geometry::e_spaces`. Quotient rows are indexed
/// by a vertex's own cell: entry `(i, j)` counts neighbours in cell `j`.
pub fn verify_lifted_quotient(geom: &Geometry, gamma: &Graph<impl Sync>, cells: &[Vec<usize>]) -> Result<LiftedQuotientReport> {
    let e = geom.params.e;
    let q = geom.params.q as u64;
    let meet = geom.point_count(e - 1);
    let bits = &geom.e_space_bits;
    let small_graph = Graph::from_index_fn(geom.e_spaces.clone(), |_, i, j| bits[i].intersection_len(&bits[j]) == meet)?;
    let all: Vec<usize> = (0..small_graph.n()).collect();
    let small = match check_equitable(&small_graph, cells, &all)? {
        Equitability::Equitable(m) => m,
        Equitability::Violation(v) => {
            return Err(Error::Precondition(format!(
                "partition of [H, e] is not equitable: vertex {} has {} neighbours in cell {}, vertex {} has {}",
                v.vertex, v.count, v.target_cell, v.reference_vertex, v.reference_count
            )))
        }
    };
    let mut small_cell = vec![0; geom.e_spaces.len()];
    for (c, cell) in cells.iter().enumerate() {
        for &u in cell {
            small_cell[u] = c;
        }
    }
    let mut lifted_cells = vec![Vec::new(); cells.len()];
    for (w, u) in geom.vertex_u.iter().enumerate() {
        if let Some(u) = u {
            lifted_cells[small_cell[*u]].push(w);
        }
    }
    let (a, _) = geom.a_and_d_indices();
    let lifted = check_equitable(gamma, &lifted_cells, &a)?;
    let extra = q.pow(e as u32) - 1;
    let first_mismatch = match &lifted {
        Equitability::Violation(_) => None,
        Equitability::Equitable(m) => (0..cells.len())
            .flat_map(|i| (0..cells.len()).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, m.get(i, j), q * small.get(i, j) + if i == j { extra } else { 0 }))
            .find(|&(_, _, found, expected)| found != expected),
    };
    let matches = lifted.is_equitable() && first_mismatch.is_none();
    Ok(LiftedQuotientReport { small, lifted, first_mismatch, matches })
}

/// Exhaustive check of an adjacency rule over 𝒜 × D.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleReport {
    pub checked_pairs: u64,
    pub violations: u64,
    /// First `(W1, W2)` (vertex indices) breaking the rule.
    pub first_violation: Option<(usize, usize)>,
    pub passed: bool,
}

fn check_rule<L: Sync>(g: &Graph<L>, geom: &Geometry, target: impl Fn(usize) -> usize + Sync) -> Result<RuleReport> {
    if g.n() != geom.blocks.len() {
        return Err(Error::param(format!("graph has {} vertices, expected {}", g.n(), geom.blocks.len())));
    }
    let (a, d) = geom.a_and_d_indices();
    let rows: Vec<(u64, Option<(usize, usize)>)> = a
        .par_iter()
        .map(|&w1| {
            let t: &BitSet = &geom.e_space_bits[target(geom.vertex_u[w1].expect("w1 in A"))];
            let mut bad = 0;
            let mut first = None;
            for &w2 in &d {
                if g.adjacent(w1, w2) != t.is_subset(&geom.block_bits[w2]) {
                    bad += 1;
                    first.get_or_insert((w1, w2));
                }
            }
            (bad, first)
        })
        .collect();
    let violations = rows.iter().map(|r| r.0).sum();
    let first_violation = rows.iter().find_map(|r| r.1);
    Ok(RuleReport { checked_pairs: (a.len() * d.len()) as u64, violations, first_violation, passed: violations == 0 })
}

/// In the switched graph, `W1 ∈ C_U` is adjacent to `W2 ∈ D` iff `σ(U) ⊆ W2`.
pub fn verify_switched_rule<L: Sync>(switched: &Graph<L>, geom: &Geometry, part: &PolarityPartition) -> Result<RuleReport> {
    check_rule(switched, geom, |u| part.sigma[u])
}

/// In the Grassmann graph, `W1 ∈ C_U` is adjacent to `W2 ∈ D` iff `U ⊆ W2`.
pub fn verify_pre_switch_rule<L: Sync>(gamma: &Graph<L>, geom: &Geometry) -> Result<RuleReport> {
    check_rule(gamma, geom, |u| u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::Parameters;
    use crate::graph::{gm_switch, validate_gm, CellClass};
    use crate::subspace::DEFAULT_ENUMERATION_BUDGET;

    fn geom22() -> Geometry {
        Geometry::new(Parameters::new(2, 2).unwrap(), DEFAULT_ENUMERATION_BUDGET).unwrap()
    }

    #[test]
    fn census_and_cell_sizes() {
        let g = geom22();
        let sigma = Polarity::symplectic(&g.field, 2);
        let p = switching_partition(&g, &sigma).unwrap();
        let sizes: Vec<usize> = p.partition.cells.iter().map(Vec::len).collect();
        assert_eq!(sizes.len(), 25);
        assert_eq!(sizes.iter().filter(|&&s| s == 4).count(), 15);
        assert_eq!(sizes.iter().filter(|&&s| s == 8).count(), 10);
        assert_eq!(p.fixed_cells(), 15);
        assert_eq!(p.partition.exempt.len(), 15);
        assert_eq!(sizes.iter().sum::<usize>() + p.partition.exempt.len(), 155);
        // |C_U| = q^e by direct count
        for u in 0..g.e_spaces.len() {
            assert_eq!(g.vertex_u.iter().filter(|&&x| x == Some(u)).count(), 4);
        }
        // fixed cells are exactly the totally isotropic U
        for &(u, s) in &p.cell_pairs {
            assert_eq!(u == s, sigma.is_totally_isotropic(&g.e_spaces[u]).unwrap());
        }
    }

    #[test]
    fn switching_rules_hold() {
        let g = geom22();
        let sigma = Polarity::symplectic(&g.field, 2);
        let p = switching_partition(&g, &sigma).unwrap();
        let gamma = g.grassmann().unwrap();
        assert!(verify_pre_switch_rule(&gamma, &g).unwrap().passed);
        let report = validate_gm(&gamma, &p.partition).unwrap();
        assert!(report.passed);
        assert!(report.tally.half > 0);
        let switched = gm_switch(&gamma, &p.partition).unwrap();
        let rule = verify_switched_rule(&switched, &g, &p).unwrap();
        assert_eq!((rule.checked_pairs, rule.violations), (140 * 15, 0));
        // the unswitched graph breaks the rule, so the check has teeth
        assert!(!verify_switched_rule(&gamma, &g, &p).unwrap().passed);
        // fixed cells see no half classes
        for (k, row) in report.classes.iter().enumerate() {
            for (c, class) in row.iter().enumerate() {
                let (u, s) = p.cell_pairs[c];
                if u == s {
                    assert_ne!(*class, CellClass::Half, "D vertex {k}");
                }
            }
        }
    }

    #[test]
    fn lifted_quotient_partitions() {
        let g = geom22();
        let gamma = g.grassmann().unwrap();
        let n = g.e_spaces.len();

        let singletons: Vec<Vec<usize>> = (0..n).map(|u| vec![u]).collect();
        let r = verify_lifted_quotient(&g, &gamma, &singletons).unwrap();
        assert!(r.matches);
        assert_eq!(r.lifted.quotient().unwrap().get(0, 0), 3);

        let one = vec![(0..n).collect::<Vec<_>>()];
        let r = verify_lifted_quotient(&g, &gamma, &one).unwrap();
        assert!(r.matches);
        assert_eq!(r.small.get(0, 0), 18);
        assert_eq!(r.lifted.quotient().unwrap().get(0, 0), 2 * 18 + 3);

        let sigma = Polarity::symplectic(&g.field, 2);
        let p = switching_partition(&g, &sigma).unwrap();
        let pairs: Vec<Vec<usize>> =
            p.cell_pairs.iter().map(|&(u, s)| if u == s { vec![u] } else { vec![u, s] }).collect();
        assert!(verify_lifted_quotient(&g, &gamma, &pairs).unwrap().matches);

        let lopsided = vec![vec![0], (1..n).collect()];
        assert!(matches!(verify_lifted_quotient(&g, &gamma, &lopsided), Err(Error::Precondition(_))));
    }
}
