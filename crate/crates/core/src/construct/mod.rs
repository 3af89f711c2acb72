//! The concrete objects of the switching construction: Grassmann graphs, the
//! twisted Grassmann graph, the polarity partition, the two designs and the maps
//! between them.
//!
//! Throughout, `V = GF(q)^{2e+1}` and `H` is the hyperplane of vectors whose last
//! coordinate vanishes.

mod designs;
mod maps;
mod partition;

use num_bigint::BigUint;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::gf::{make_field, FieldContext};
use crate::graph::Graph;
use crate::subspace::{
    enumerate_subspaces, gaussian_binomial, hyperplane, in_hyperplane, q_integer, PointIndex, Subspace,
};

pub use designs::{
    block_graph, block_intersection_sizes, expected_design_parameters, is_subspace_point_set, jt_design,
    pg_design, verify_2_design, Block, Design, DesignJson, DesignParameters, DesignVerdict, Provenance,
};
pub use maps::{phi_blocks, phi_map, psi_map};
pub use partition::{
    switching_partition, verify_lifted_quotient, verify_pre_switch_rule, verify_switched_rule, LiftedQuotientReport,
    PolarityPartition, RuleReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Parameters {
    pub q: u32,
    pub e: usize,
}

impl Parameters {
    pub fn new(q: u32, e: usize) -> Result<Self> {
        make_field(q)?;
        if e < 1 {
            return Err(Error::param(format!("e = {e} must be at least 1")));
        }
        Ok(Parameters { q, e })
    }

    /// Dimension of V.
    pub fn n(&self) -> usize {
        2 * self.e + 1
    }

    /// `[2e+1, e+1]_q`.
    pub fn vertex_count(&self) -> BigUint {
        gaussian_binomial(self.n() as u32, self.e as u32 + 1, self.q)
    }

    /// The twisted graph and the certification pipeline need `e >= 2`.
    pub fn require_certifiable(&self) -> Result<()> {
        if self.e < 2 {
            return Err(Error::domain(format!(
                "e = {} is not certifiable: the (e-1)-subspaces of H degenerate to the zero space",
                self.e
            )));
        }
        Ok(())
    }
}

/// Everything about `(q, e)` that does not depend on a polarity, computed once.
#[derive(Debug, Clone)]
pub struct Geometry {
    pub params: Parameters,
    pub field: FieldContext,
    pub points: PointIndex,
    pub hyperplane: Subspace,
    /// `[V, e+1]` in canonical order; these are the vertices of the Grassmann graph.
    pub blocks: Vec<Subspace>,
    pub block_bits: Vec<BitSet>,
    /// `W ⊆ H` for each entry of `blocks`.
    pub in_h: Vec<bool>,
    /// `[H, e]` in canonical order.
    pub e_spaces: Vec<Subspace>,
    pub e_space_bits: Vec<BitSet>,
    /// For `W` in 𝒜, the index of `W ∩ H` in `e_spaces`.
    pub vertex_u: Vec<Option<usize>>,
    pub budget: u64,
}

impl Geometry {
    pub fn new(params: Parameters, budget: u64) -> Result<Self> {
        let field = make_field(params.q)?;
        let n = params.n();
        let e = params.e;
        let points = PointIndex::new(&field, n)?;
        let h = hyperplane(&field, e);
        let blocks = enumerate_subspaces(&field, n, e + 1, budget)?;
        let block_bits: Vec<BitSet> = blocks.iter().map(|w| points.bits(w)).collect();
        let in_h: Vec<bool> = blocks.iter().map(in_hyperplane).collect();
        let e_spaces: Vec<Subspace> = enumerate_subspaces(&field, n, e, budget)?
            .into_iter()
            .filter(in_hyperplane)
            .collect();
        let e_space_bits = e_spaces.iter().map(|u| points.bits(u)).collect();
        let vertex_u = blocks
            .iter()
            .zip(&in_h)
            .map(|(w, &inside)| {
                if inside {
                    return Ok(None);
                }
                let u = w.intersection(&h)?;
                e_spaces
                    .binary_search(&u)
                    .map(Some)
                    .map_err(|_| Error::Consistency(format!("{w:?} ∩ H = {u:?} is not an e-subspace of H")))
            })
            .collect::<Result<_>>()?;
        Ok(Geometry { params, field, points, hyperplane: h, blocks, block_bits, in_h, e_spaces, e_space_bits, vertex_u, budget })
    }

    /// Points `(q^k - 1)/(q - 1)` of a k-space.
    pub fn point_count(&self, k: usize) -> usize {
        q_integer(k as u32, self.params.q) as usize
    }

    /// `J_q(2e+1, e+1)` with vertices in canonical order.
    pub fn grassmann(&self) -> Result<Graph<Subspace>> {
        let meet = self.point_count(self.params.e);
        let bits = &self.block_bits;
        Graph::from_index_fn(self.blocks.clone(), |_, i, j| bits[i].intersection_len(&bits[j]) == meet)
    }

    /// Indices (into `blocks`) of 𝒜 and of `D = [H, e+1]`.
    pub fn a_and_d_indices(&self) -> (Vec<usize>, Vec<usize>) {
        (0..self.blocks.len()).partition(|&i| !self.in_h[i])
    }
}

/// `J_q(n, k)`: k-subspaces of GF(q)^n, adjacent when they meet in a (k-1)-space.
pub fn grassmann(n: usize, k: usize, q: u32, budget: u64) -> Result<Graph<Subspace>> {
    if k == 0 || k >= n {
        return Err(Error::param(format!("J_q({n}, {k}) needs 1 <= k <= n - 1")));
    }
    let field = make_field(q)?;
    let points = PointIndex::new(&field, n)?;
    let verts = enumerate_subspaces(&field, n, k, budget)?;
    let bits: Vec<BitSet> = verts.iter().map(|w| points.bits(w)).collect();
    let meet = q_integer(k as u32 - 1, q) as usize;
    Graph::from_index_fn(verts, |_, i, j| bits[i].intersection_len(&bits[j]) == meet)
}

/// 𝒜, ℬ and D.
#[derive(Debug, Clone)]
pub struct SplitSets {
    /// `(e+1)`-subspaces not contained in H.
    pub a: Vec<Subspace>,
    /// `(e-1)`-subspaces of H.
    pub b: Vec<Subspace>,
    /// `(e+1)`-subspaces of H.
    pub d: Vec<Subspace>,
}

pub fn split_a_b(geom: &Geometry) -> Result<SplitSets> {
    let e = geom.params.e;
    let (ai, di) = geom.a_and_d_indices();
    let b = enumerate_subspaces(&geom.field, geom.params.n(), e - 1, geom.budget)?
        .into_iter()
        .filter(in_hyperplane)
        .collect();
    Ok(SplitSets {
        a: ai.iter().map(|&i| geom.blocks[i].clone()).collect(),
        b,
        d: di.iter().map(|&i| geom.blocks[i].clone()).collect(),
    })
}

/// The twisted Grassmann graph on 𝒜 ∪ ℬ, vertices in canonical order (so the
/// lower-dimensional ℬ comes first).
pub fn twisted_grassmann(geom: &Geometry) -> Result<Graph<Subspace>> {
    geom.params.require_certifiable()?;
    let e = geom.params.e;
    let split = split_a_b(geom)?;
    let mut labels: Vec<Subspace> = split.b.into_iter().chain(split.a).collect();
    labels.sort();
    let bits: Vec<BitSet> = labels.iter().map(|w| geom.points.bits(w)).collect();
    let meet_a = geom.point_count(e);
    let meet_b = geom.point_count(e - 2);
    Graph::from_index_fn(labels, |l, i, j| {
        let (x, y) = (&l[i], &l[j]);
        match (x.dim() == e + 1, y.dim() == e + 1) {
            (true, true) => bits[i].intersection_len(&bits[j]) == meet_a,
            (true, false) => bits[j].is_subset(&bits[i]),
            (false, true) => bits[i].is_subset(&bits[j]),
            (false, false) => bits[i].intersection_len(&bits[j]) == meet_b,
        }
    })
}
