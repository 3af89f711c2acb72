use rayon::prelude::*;
use serde::Serialize;

use super::Graph;
use crate::error::{Error, Result};

/// `{b_0, .., b_{d-1}; c_1, .., c_d}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionArray {
    pub diameter: usize,
    pub b: Vec<u64>,
    pub c: Vec<u64>,
}

impl std::fmt::Display for IntersectionArray {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(", ");
        write!(f, "{{{}; {}}}", join(&self.b), join(&self.c))
    }
}

/// First place where the distance partition counts disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegularityViolation {
    pub source: usize,
    pub vertex: usize,
    pub distance: usize,
    /// `"c"`, `"b"`, `"diameter"` or `"connected"`.
    pub parameter: &'static str,
    pub found: u64,
    pub expected: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum DistanceRegularity {
    Regular(IntersectionArray),
    NotRegular(RegularityViolation),
}

impl DistanceRegularity {
    pub fn array(&self) -> Option<&IntersectionArray> {
        match self {
            DistanceRegularity::Regular(a) => Some(a),
            DistanceRegularity::NotRegular(_) => None,
        }
    }
}

/// Per-source `(c_j, b_j)` from one BFS, or the first local inconsistency.
fn sweep(adj: &[Vec<u32>], source: usize) -> std::result::Result<(Vec<u64>, Vec<u64>), RegularityViolation> {
    let n = adj.len();
    let mut dist = vec![u32::MAX; n];
    dist[source] = 0;
    let mut order = vec![source as u32];
    let mut head = 0;
    while head < order.len() {
        let v = order[head] as usize;
        head += 1;
        for &u in &adj[v] {
            if dist[u as usize] == u32::MAX {
                dist[u as usize] = dist[v] + 1;
                order.push(u);
            }
        }
    }
    if order.len() != n {
        return Err(RegularityViolation {
            source,
            vertex: dist.iter().position(|&d| d == u32::MAX).unwrap(),
            distance: usize::MAX,
            parameter: "connected",
            found: order.len() as u64,
            expected: n as u64,
        });
    }
    let d = dist[*order.last().unwrap() as usize] as usize;
    let mut c = vec![u64::MAX; d + 1];
    let mut b = vec![u64::MAX; d + 1];
    for &v in &order {
        let v = v as usize;
        let j = dist[v];
        let (mut cj, mut bj) = (0u64, 0u64);
        for &u in &adj[v] {
            let du = dist[u as usize];
            if du + 1 == j {
                cj += 1;
            } else if du == j + 1 {
                bj += 1;
            }
        }
        let j = j as usize;
        for (slot, val, name) in [(&mut c[j], cj, "c"), (&mut b[j], bj, "b")] {
            if *slot == u64::MAX {
                *slot = val;
            } else if *slot != val {
                return Err(RegularityViolation {
                    source,
                    vertex: v,
                    distance: j,
                    parameter: name,
                    found: val,
                    expected: *slot,
                });
            }
        }
    }
    Ok((c, b))
}

/// BFS from every vertex; the graph is distance-regular iff every source sees the
/// same `c_j` and `b_j` at every distance.
pub fn intersection_array<L: Sync>(g: &Graph<L>) -> Result<DistanceRegularity> {
    if g.n() == 0 {
        return Err(Error::domain("the empty graph has no intersection array"));
    }
    let adj = g.adjacency_lists();
    let first = match sweep(&adj, 0) {
        Ok(r) => r,
        Err(v) if v.parameter == "connected" => {
            return Err(Error::domain(format!("graph is disconnected (vertex {} unreachable from 0)", v.vertex)))
        }
        Err(v) => return Ok(DistanceRegularity::NotRegular(v)),
    };
    let results: Vec<Option<RegularityViolation>> = (1..g.n())
        .into_par_iter()
        .map(|s| match sweep(&adj, s) {
            Err(v) => Some(v),
            Ok((c, b)) => {
                if c.len() != first.0.len() {
                    return Some(RegularityViolation {
                        source: s,
                        vertex: s,
                        distance: 0,
                        parameter: "diameter",
                        found: (c.len() - 1) as u64,
                        expected: (first.0.len() - 1) as u64,
                    });
                }
                (0..c.len()).find_map(|j| {
                    if c[j] != first.0[j] {
                        Some(RegularityViolation { source: s, vertex: s, distance: j, parameter: "c", found: c[j], expected: first.0[j] })
                    } else if b[j] != first.1[j] {
                        Some(RegularityViolation { source: s, vertex: s, distance: j, parameter: "b", found: b[j], expected: first.1[j] })
                    } else {
                        None
                    }
                })
            }
        })
        .collect();
    if let Some(v) = results.into_iter().flatten().next() {
        return Ok(DistanceRegularity::NotRegular(v));
    }
    let (c, b) = first;
    let d = c.len() - 1;
    Ok(DistanceRegularity::Regular(IntersectionArray { diameter: d, b: b[..d].to_vec(), c: c[1..].to_vec() }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    #[test]
    fn complete_graph() {
        let k5 = build_graph((0..5).collect(), |_: &i32, _: &i32| true).unwrap();
        let a = intersection_array(&k5).unwrap();
        assert_eq!(a.array().unwrap(), &IntersectionArray { diameter: 1, b: vec![4], c: vec![1] });
    }

    #[test]
    fn six_cycle() {
        let c6 = build_graph((0..6).collect(), |&a: &usize, &b: &usize| (a + 1) % 6 == b || (b + 1) % 6 == a).unwrap();
        let a = intersection_array(&c6).unwrap();
        let a = a.array().unwrap();
        assert_eq!(a.to_string(), "{2, 1, 1; 1, 1, 2}");
    }

    #[test]
    fn star_is_not_distance_regular() {
        let star = build_graph((0..4).collect(), |&a: &usize, &b: &usize| a == 0 || b == 0).unwrap();
        assert!(matches!(intersection_array(&star).unwrap(), DistanceRegularity::NotRegular(_)));
    }

    #[test]
    fn disconnected_is_a_domain_error() {
        let g = build_graph((0..4).collect(), |&a: &usize, &b: &usize| a / 2 == b / 2).unwrap();
        assert!(matches!(intersection_array(&g), Err(Error::Domain(_))));
    }
}
