use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{maps::phi_blocks, Geometry, Parameters};
use crate::bits::{and_count, BitSet};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::subspace::{gaussian_binomial, q_integer, PointIndex, Polarity};

/// Sorted point indices into the canonical numbering of `[V]`.
pub type Block = Vec<u32>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Geometric,
    PseudoGeometric,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Design {
    pub provenance: Provenance,
    pub params: Option<Parameters>,
    v: usize,
    blocks: Vec<Block>,
}

impl Design {
    /// Sorts each block and the block list; repeated blocks are an error.
    pub fn new(v: usize, blocks: Vec<Block>, provenance: Provenance, params: Option<Parameters>) -> Result<Self> {
        let mut blocks: Vec<Block> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        if let Some(p) = blocks.iter().flatten().find(|&&p| p as usize >= v) {
            return Err(Error::param(format!("point {p} out of range for {v} points")));
        }
        blocks.sort();
        if let Some(w) = blocks.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Consistency(format!("repeated block {:?}", w[0])));
        }
        Ok(Design { provenance, params, v, blocks })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn index_of(&self, block: &[u32]) -> Option<usize> {
        self.blocks.binary_search_by(|b| b.as_slice().cmp(block)).ok()
    }

    /// Copy without block `i`.
    pub fn without_block(&self, i: usize) -> Design {
        let mut d = self.clone();
        d.blocks.remove(i);
        d
    }

    fn bitsets(&self) -> Vec<BitSet> {
        self.blocks
            .iter()
            .map(|b| {
                let mut s = BitSet::new(self.v);
                b.iter().for_each(|&p| s.insert(p as usize));
                s
            })
            .collect()
    }

    pub fn to_json(&self, points: &PointIndex) -> Result<DesignJson> {
        if points.len() != self.v {
            return Err(Error::param(format!("point index has {} points, design has {}", points.len(), self.v)));
        }
        Ok(DesignJson {
            points: (0..self.v).map(|i| points.point(i).basis_row(0).to_vec()).collect(),
            blocks: self.blocks.clone(),
            provenance: self.provenance,
            params: self.params,
        })
    }
}

/// On-disk form: points as normalized vectors, blocks as point indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignJson {
    pub points: Vec<Vec<u8>>,
    pub blocks: Vec<Block>,
    pub provenance: Provenance,
    pub params: Option<Parameters>,
}

/// Points `[V]`, blocks `[W]` for `W ∈ [V, e+1]`.
pub fn pg_design(geom: &Geometry) -> Result<Design> {
    let blocks = geom.blocks.iter().map(|w| geom.points.indices(w)).collect();
    Design::new(geom.points.len(), blocks, Provenance::Geometric, Some(geom.params))
}

/// Blocks `[σ(W∩H)] ∪ [W∖H]` for `W ∈ 𝒜` and `[W]` for `W ∈ [H, e+1]`.
pub fn jt_design(geom: &Geometry, sigma: &Polarity) -> Result<Design> {
    Design::new(geom.points.len(), phi_blocks(geom, sigma)?, Provenance::PseudoGeometric, Some(geom.params))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignParameters {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub b: u64,
}

/// Closed forms: `v = [2e+1]_q`, `k = [e+1]_q`, `λ = [2e-1, e-1]_q`, `b = [2e+1, e+1]_q`.
pub fn expected_design_parameters(p: Parameters) -> DesignParameters {
    let (q, e) = (p.q, p.e as u32);
    DesignParameters {
        v: q_integer(2 * e + 1, q),
        k: q_integer(e + 1, q),
        lambda: gaussian_binomial(2 * e - 1, e - 1, q).to_u64().expect("λ fits in u64"),
        b: gaussian_binomial(2 * e + 1, e + 1, q).to_u64().expect("b fits in u64"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DesignVerdict {
    Design(DesignParameters),
    NonUniform { block: usize, size: usize, expected: usize },
    Unbalanced { pair: (u32, u32), count: u64, expected: u64 },
}

impl DesignVerdict {
    pub fn parameters(&self) -> Option<DesignParameters> {
        match self {
            DesignVerdict::Design(p) => Some(*p),
            _ => None,
        }
    }
}

/// Counts the blocks through every unordered point pair.
pub fn verify_2_design(d: &Design) -> Result<DesignVerdict> {
    let blocks = d.blocks();
    let Some(first) = blocks.first() else {
        return Err(Error::param("design has no blocks"));
    };
    let k = first.len();
    if let Some((i, b)) = blocks.iter().enumerate().find(|(_, b)| b.len() != k) {
        return Ok(DesignVerdict::NonUniform { block: i, size: b.len(), expected: k });
    }
    let v = d.v();
    let mut counts = vec![0u64; v * v];
    for b in blocks {
        for (i, &x) in b.iter().enumerate() {
            for &y in &b[i + 1..] {
                counts[x as usize * v + y as usize] += 1;
            }
        }
    }
    let lambda = if v >= 2 { counts[1] } else { 0 };
    for x in 0..v {
        for y in x + 1..v {
            let c = counts[x * v + y];
            if c != lambda {
                return Ok(DesignVerdict::Unbalanced { pair: (x as u32, y as u32), count: c, expected: lambda });
            }
        }
    }
    Ok(DesignVerdict::Design(DesignParameters { v: v as u64, k: k as u64, lambda, b: blocks.len() as u64 }))
}

/// Multiset of `|B ∩ B'|` over unordered pairs of distinct blocks.
pub fn block_intersection_sizes(d: &Design) -> BTreeMap<usize, u64> {
    let sets = d.bitsets();
    let partial: Vec<BTreeMap<usize, u64>> = (0..sets.len())
        .into_par_iter()
        .map(|i| {
            let mut m = BTreeMap::new();
            for j in i + 1..sets.len() {
                *m.entry(and_count(sets[i].words(), sets[j].words())).or_insert(0) += 1;
            }
            m
        })
        .collect();
    let mut out = BTreeMap::new();
    for m in partial {
        for (s, c) in m {
            *out.entry(s).or_insert(0) += c;
        }
    }
    out
}

/// Blocks as vertices, adjacent when they share exactly `s` points.
pub fn block_graph(d: &Design, s: usize) -> Result<Graph<Block>> {
    let sets = d.bitsets();
    Graph::from_index_fn(d.blocks().to_vec(), |_, i, j| sets[i].intersection_len(&sets[j]) == s)
}

/// Whether the point set is exactly the point set of some subspace.
pub fn is_subspace_point_set(points: &PointIndex, block: &[u32]) -> bool {
    let span = points.span(block);
    q_integer(span.dim() as u32, points.field().q()) as usize == block.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::DEFAULT_ENUMERATION_BUDGET;

    fn geom22() -> Geometry {
        Geometry::new(Parameters::new(2, 2).unwrap(), DEFAULT_ENUMERATION_BUDGET).unwrap()
    }

    #[test]
    fn closed_forms() {
        let p = expected_design_parameters(Parameters::new(2, 2).unwrap());
        assert_eq!(p, DesignParameters { v: 31, k: 7, lambda: 7, b: 155 });
        // λ as the product quotient ∏_{i=e+1}^{2e-1}(q^i-1) / ∏_{i=1}^{e-1}(q^i-1)
        for (q, e) in [(2u64, 2u32), (3, 2), (2, 3), (4, 2), (3, 3)] {
            let num: u64 = (e + 1..2 * e).map(|i| q.pow(i) - 1).product();
            let den: u64 = (1..e).map(|i| q.pow(i) - 1).product();
            let p = expected_design_parameters(Parameters::new(q as u32, e as usize).unwrap());
            assert_eq!(p.lambda, num / den);
        }
    }

    #[test]
    fn both_designs_at_q2_e2() {
        let g = geom22();
        let pg = pg_design(&g).unwrap();
        let jt = jt_design(&g, &Polarity::symplectic(&g.field, 2)).unwrap();
        let expected = expected_design_parameters(g.params);
        for d in [&pg, &jt] {
            assert_eq!(d.blocks().len(), 155);
            assert_eq!(verify_2_design(d).unwrap(), DesignVerdict::Design(expected));
            let sizes = block_intersection_sizes(d);
            assert!(sizes.keys().all(|s| [1, 3].contains(s)), "{sizes:?}");
            assert_eq!(sizes.values().sum::<u64>(), 155 * 154 / 2);
        }
        assert_ne!(pg, jt);
        // every pg block is a subspace, some jt block is not
        assert!(pg.blocks().iter().all(|b| is_subspace_point_set(&g.points, b)));
        assert!(jt.blocks().iter().any(|b| !is_subspace_point_set(&g.points, b)));
    }

    #[test]
    fn mutations_are_caught() {
        let g = geom22();
        let pg = pg_design(&g).unwrap();
        assert!(matches!(verify_2_design(&pg.without_block(0)).unwrap(), DesignVerdict::Unbalanced { .. }));
        let mut blocks = pg.blocks().to_vec();
        blocks[3].pop();
        let bad = Design::new(31, blocks, Provenance::Geometric, None).unwrap();
        assert!(matches!(verify_2_design(&bad).unwrap(), DesignVerdict::NonUniform { .. }));
        let dup = vec![vec![0, 1], vec![1, 0]];
        assert!(matches!(Design::new(3, dup, Provenance::Geometric, None), Err(Error::Consistency(_))));
        assert!(Design::new(3, vec![vec![0, 3]], Provenance::Geometric, None).is_err());
    }

    #[test]
    fn block_graph_basics() {
        let g = geom22();
        let pg = pg_design(&g).unwrap();
        assert_eq!(block_graph(&pg, 8).unwrap().edge_count(), 0);
        let bg = block_graph(&pg, 3).unwrap();
        assert_eq!(bg.regular_degree(), Some(42));
        let json = pg.to_json(&g.points).unwrap();
        assert_eq!(json.points.len(), 31);
        assert_eq!(json.points[0], vec![0, 0, 0, 0, 1]);
    }
}
