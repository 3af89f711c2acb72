//! Godsil-McKay switching.
//!
//! A partition `{C_1, .., C_t, D}` qualifies when `{C_i}` is equitable on the
//! subgraph induced on `X \ D` and every `x in D` has `0`, `|C_i|/2` or `|C_i|`
//! neighbours in each `C_i`. Switching complements the `x`-`C_i` adjacency for
//! every half pair and leaves all other edges alone.

use serde::{Deserialize, Serialize};

use super::equitable::cell_lookup;
use super::{check_equitable, Equitability, Graph, QuotientMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchingPartition {
    pub cells: Vec<Vec<usize>>,
    pub exempt: Vec<usize>,
    /// Filled in by [`validate_gm`].
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub quotient: Option<QuotientMatrix>,
}

impl SwitchingPartition {
    pub fn new(cells: Vec<Vec<usize>>, exempt: Vec<usize>) -> Self {
        SwitchingPartition { cells, exempt, quotient: None }
    }

    /// Vertices outside `D`, cells concatenated.
    pub fn switched_domain(&self) -> Vec<usize> {
        self.cells.iter().flatten().copied().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellClass {
    Zero,
    Half,
    Full,
    /// Any other count, or half of an odd-size cell.
    Invalid,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GmTally {
    pub zero: u64,
    pub half: u64,
    pub full: u64,
    pub invalid: u64,
}

/// The outcome of [`validate_gm`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GmReport {
    pub equitability: Equitability,
    /// `classes[k][i]`: class of `exempt[k]` against cell `i`.
    #[serde(skip)]
    pub classes: Vec<Vec<CellClass>>,
    pub tally: GmTally,
    /// First offending `(x, cell, neighbour count, cell size)`, if any.
    pub first_invalid: Option<(usize, usize, u64, usize)>,
    pub passed: bool,
}

impl GmReport {
    pub fn summary(&self) -> String {
        let eq = if self.equitability.is_equitable() { "equitable" } else { "not equitable" };
        let mut s = format!(
            "cells {eq}; D-cell pairs: {} zero, {} half, {} full, {} invalid",
            self.tally.zero, self.tally.half, self.tally.full, self.tally.invalid
        );
        if let Some((x, c, cnt, size)) = self.first_invalid {
            s.push_str(&format!("; vertex {x} has {cnt} neighbours in cell {c} of size {size}"));
        }
        s
    }
}

pub fn validate_gm<L>(g: &Graph<L>, p: &SwitchingPartition) -> Result<GmReport> {
    let domain = p.switched_domain();
    let equitability = check_equitable(g, &p.cells, &domain)?;
    let cell_of = cell_lookup(g.n(), &p.cells, &domain)?;
    let mut seen = vec![false; g.n()];
    for &x in &p.exempt {
        if x >= g.n() {
            return Err(Error::param(format!("exempt vertex {x} out of range")));
        }
        if cell_of[x].is_some() || std::mem::replace(&mut seen[x], true) {
            return Err(Error::param(format!("exempt vertex {x} is not in exactly one class")));
        }
    }
    if domain.len() + p.exempt.len() != g.n() {
        return Err(Error::param(format!(
            "partition covers {} of {} vertices",
            domain.len() + p.exempt.len(),
            g.n()
        )));
    }

    let t = p.cells.len();
    let mut tally = GmTally::default();
    let mut first_invalid = None;
    let mut classes = Vec::with_capacity(p.exempt.len());
    let mut counts = vec![0u64; t];
    for &x in &p.exempt {
        counts.iter_mut().for_each(|c| *c = 0);
        for u in g.neighbors(x) {
            if let Some(c) = cell_of[u] {
                counts[c as usize] += 1;
            }
        }
        let row: Vec<CellClass> = counts
            .iter()
            .enumerate()
            .map(|(i, &cnt)| {
                let size = p.cells[i].len() as u64;
                let class = if cnt == 0 {
                    CellClass::Zero
                } else if cnt == size {
                    CellClass::Full
                } else if size.is_multiple_of(2) && 2 * cnt == size {
                    CellClass::Half
                } else {
                    CellClass::Invalid
                };
                match class {
                    CellClass::Zero => tally.zero += 1,
                    CellClass::Half => tally.half += 1,
                    CellClass::Full => tally.full += 1,
                    CellClass::Invalid => {
                        tally.invalid += 1;
                        first_invalid.get_or_insert((x, i, cnt, size as usize));
                    }
                }
                class
            })
            .collect();
        classes.push(row);
    }
    let passed = equitability.is_equitable() && tally.invalid == 0;
    Ok(GmReport { equitability, classes, tally, first_invalid, passed })
}

/// The switched graph. Fails with [`Error::Hypothesis`] when validation does not pass.
pub fn gm_switch<L: Clone>(g: &Graph<L>, p: &SwitchingPartition) -> Result<Graph<L>> {
    let report = validate_gm(g, p)?;
    if !report.passed {
        return Err(Error::Hypothesis(Box::new(report)));
    }
    let mut out = g.clone();
    for (k, &x) in p.exempt.iter().enumerate() {
        for (i, class) in report.classes[k].iter().enumerate() {
            if *class == CellClass::Half {
                for &v in &p.cells[i] {
                    let on = !out.adjacent(x, v);
                    out.set_edge(x, v, on);
                }
            }
        }
    }
    Ok(out)
}

impl SwitchingPartition {
    /// Runs [`validate_gm`] and stores the quotient matrix when the cells are equitable.
    pub fn validate<L>(&mut self, g: &Graph<L>) -> Result<GmReport> {
        let report = validate_gm(g, self)?;
        if let Equitability::Equitable(q) = &report.equitability {
            self.quotient = Some(q.clone());
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn c4() -> Graph<usize> {
        build_graph((0..4).collect(), |&a, &b| (a + 1) % 4 == b || (b + 1) % 4 == a).unwrap()
    }

    #[test]
    fn empty_exempt_passes_vacuously() {
        let g = c4();
        let p = SwitchingPartition::new(vec![vec![0, 1, 2, 3]], vec![]);
        let r = validate_gm(&g, &p).unwrap();
        assert!(r.passed);
        assert_eq!(r.tally, GmTally::default());
        assert_eq!(gm_switch(&g, &p).unwrap(), g);
    }

    #[test]
    fn four_cycle_full_classification() {
        let g = c4();
        let p = SwitchingPartition::new(vec![vec![0, 2]], vec![1, 3]);
        let r = validate_gm(&g, &p).unwrap();
        assert!(r.passed);
        assert_eq!(r.tally, GmTally { zero: 0, half: 0, full: 2, invalid: 0 });
        assert_eq!(gm_switch(&g, &p).unwrap(), g);
    }

    #[test]
    fn half_cells_get_complemented() {
        // path 1 - 0 - 2 plus isolated 3; cell {0, 3} is equitable (both degree 0 inside)
        let g = build_graph((0..4).collect(), |&a: &usize, &b: &usize| a.min(b) == 0 && a.max(b) <= 2).unwrap();
        let p = SwitchingPartition::new(vec![vec![0, 3]], vec![1, 2]);
        let r = validate_gm(&g, &p).unwrap();
        assert_eq!(r.tally.half, 2);
        let s = gm_switch(&g, &p).unwrap();
        assert!(s.adjacent(1, 3) && s.adjacent(2, 3));
        assert!(!s.adjacent(0, 1) && !s.adjacent(0, 2));
        assert_eq!(gm_switch(&s, &p).unwrap(), g);
        let mut p2 = p.clone();
        p2.validate(&g).unwrap();
        assert_eq!(p2.quotient.unwrap().entries, vec![vec![0]]);
    }

    #[test]
    fn odd_cell_half_is_invalid() {
        // x = 3 adjacent to one of the three vertices of an edgeless cell
        let g = build_graph((0..4).collect(), |&a: &usize, &b: &usize| a.min(b) == 0 && a.max(b) == 3).unwrap();
        let p = SwitchingPartition::new(vec![vec![0, 1, 2]], vec![3]);
        let r = validate_gm(&g, &p).unwrap();
        assert!(!r.passed);
        assert_eq!(r.first_invalid, Some((3, 0, 1, 3)));
        assert!(matches!(gm_switch(&g, &p), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn non_equitable_cells_fail() {
        let star = build_graph((0..5).collect(), |&a: &usize, &b: &usize| a == 0 || b == 0).unwrap();
        let p = SwitchingPartition::new(vec![vec![0, 1, 2, 3]], vec![4]);
        let r = validate_gm(&star, &p).unwrap();
        assert!(!r.passed);
        assert!(!r.equitability.is_equitable());
    }

    #[test]
    fn structural_partition_errors() {
        let g = c4();
        assert!(validate_gm(&g, &SwitchingPartition::new(vec![vec![0, 2]], vec![1])).is_err());
        assert!(validate_gm(&g, &SwitchingPartition::new(vec![vec![0, 2]], vec![1, 2, 3])).is_err());
        assert!(validate_gm(&g, &SwitchingPartition::new(vec![vec![0, 2]], vec![1, 3, 9])).is_err());
    }
}
