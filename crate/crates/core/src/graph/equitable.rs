use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

/// `entries[i][j]` = number of neighbours in cell `j` of any vertex of cell `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientMatrix {
    pub entries: Vec<Vec<u64>>,
}

impl QuotientMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i][j]
    }
}

/// Two vertices of the same cell that see different numbers of neighbours in `target_cell`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquitableViolation {
    pub cell: usize,
    pub target_cell: usize,
    pub vertex: usize,
    pub count: u64,
    pub reference_vertex: usize,
    pub reference_count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Equitability {
    Equitable(QuotientMatrix),
    Violation(EquitableViolation),
}

impl Equitability {
    pub fn is_equitable(&self) -> bool {
        matches!(self, Equitability::Equitable(_))
    }

    pub fn quotient(&self) -> Option<&QuotientMatrix> {
        match self {
            Equitability::Equitable(q) => Some(q),
            Equitability::Violation(_) => None,
        }
    }
}

/// Maps each vertex to its cell index, validating that `cells` partition `domain`.
pub(crate) fn cell_lookup(n: usize, cells: &[Vec<usize>], domain: &[usize]) -> Result<Vec<Option<u32>>> {
    let mut in_domain = vec![false; n];
    for &v in domain {
        if v >= n {
            return Err(Error::param(format!("vertex {v} out of range (n = {n})")));
        }
        if std::mem::replace(&mut in_domain[v], true) {
            return Err(Error::param(format!("vertex {v} listed twice in the domain")));
        }
    }
    let mut cell_of = vec![None; n];
    let mut covered = 0;
    for (c, cell) in cells.iter().enumerate() {
        if cell.is_empty() {
            return Err(Error::param(format!("cell {c} is empty")));
        }
        for &v in cell {
            if v >= n || !in_domain[v] {
                return Err(Error::param(format!("cell {c} contains vertex {v} outside the domain")));
            }
            if let Some(prev) = cell_of[v].replace(c as u32) {
                return Err(Error::param(format!("vertex {v} lies in cells {prev} and {c}")));
            }
            covered += 1;
        }
    }
    if covered != domain.len() {
        let missing = domain.iter().find(|&&v| cell_of[v].is_none()).unwrap();
        return Err(Error::param(format!("vertex {missing} of the domain is in no cell")));
    }
    Ok(cell_of)
}

/// Checks that `cells` is an equitable partition of the subgraph induced on `domain`.
pub fn check_equitable<L>(g: &Graph<L>, cells: &[Vec<usize>], domain: &[usize]) -> Result<Equitability> {
    let cell_of = cell_lookup(g.n(), cells, domain)?;
    let t = cells.len();
    let mut entries = vec![vec![0u64; t]; t];
    let mut counts = vec![0u64; t];
    for (c, cell) in cells.iter().enumerate() {
        for (pos, &v) in cell.iter().enumerate() {
            counts.iter_mut().for_each(|x| *x = 0);
            for u in g.neighbors(v) {
                if let Some(cu) = cell_of[u] {
                    counts[cu as usize] += 1;
                }
            }
            if pos == 0 {
                entries[c].copy_from_slice(&counts);
            } else if let Some(j) = (0..t).find(|&j| counts[j] != entries[c][j]) {
                return Ok(Equitability::Violation(EquitableViolation {
                    cell: c,
                    target_cell: j,
                    vertex: v,
                    count: counts[j],
                    reference_vertex: cell[0],
                    reference_count: entries[c][j],
                }));
            }
        }
    }
    Ok(Equitability::Equitable(QuotientMatrix { entries }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn petersen() -> Graph<usize> {
        // outer 5-cycle 0..5, spokes i -- i+5, inner pentagram
        build_graph((0..10).collect(), |&a, &b| {
            let (a, b) = (a.min(b), a.max(b));
            (b < 5 && (b - a == 1 || b - a == 4))
                || (a < 5 && b == a + 5)
                || (a >= 5 && ((b - a) == 2 || (b - a) == 3))
        })
        .unwrap()
    }

    #[test]
    fn singletons_always_equitable() {
        let g = petersen();
        let cells: Vec<Vec<usize>> = (0..10).map(|v| vec![v]).collect();
        let domain: Vec<usize> = (0..10).collect();
        let q = check_equitable(&g, &cells, &domain).unwrap();
        let q = q.quotient().unwrap();
        for i in 0..10 {
            for j in 0..10 {
                assert_eq!(q.get(i, j), g.adjacent(i, j) as u64);
            }
        }
    }

    #[test]
    fn one_cell_of_regular_graph() {
        let g = petersen();
        assert_eq!(g.regular_degree(), Some(3));
        let all: Vec<usize> = (0..10).collect();
        let r = check_equitable(&g, std::slice::from_ref(&all), &all).unwrap();
        assert_eq!(r.quotient().unwrap().entries, vec![vec![3]]);
        // outer/inner split: each outer vertex has 2 outer, 1 inner neighbour
        let cells = vec![(0..5).collect(), (5..10).collect()];
        let r = check_equitable(&g, &cells, &all).unwrap();
        assert_eq!(r.quotient().unwrap().entries, vec![vec![2, 1], vec![1, 2]]);
    }

    #[test]
    fn non_regular_one_cell_fails() {
        let star = build_graph((0..4).collect(), |&a: &usize, &b: &usize| a == 0 || b == 0).unwrap();
        let all: Vec<usize> = (0..4).collect();
        match check_equitable(&star, std::slice::from_ref(&all), &all).unwrap() {
            Equitability::Violation(v) => {
                assert_eq!((v.vertex, v.count, v.reference_vertex, v.reference_count), (1, 1, 0, 3));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn induced_domain_ignores_outside_edges() {
        let star = build_graph((0..4).collect(), |&a: &usize, &b: &usize| a == 0 || b == 0).unwrap();
        let leaves = vec![1, 2, 3];
        let r = check_equitable(&star, std::slice::from_ref(&leaves), &leaves).unwrap();
        assert_eq!(r.quotient().unwrap().entries, vec![vec![0]]);
    }

    #[test]
    fn structural_errors() {
        let g = petersen();
        let domain: Vec<usize> = (0..10).collect();
        assert!(check_equitable(&g, &[vec![0, 1], vec![1, 2]], &[0, 1, 2]).is_err());
        assert!(check_equitable(&g, &[(0..9).collect()], &domain).is_err());
        assert!(check_equitable(&g, &[vec![0, 11]], &[0, 11]).is_err());
        assert!(check_equitable(&g, &[vec![0], vec![]], &[0]).is_err());
    }
}
