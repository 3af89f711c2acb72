//! Finite simple graphs on labelled vertices with a bit-packed adjacency matrix.

mod charpoly;
mod drg;
mod equitable;
pub mod io;
mod invariant;
mod iso;
mod switching;

use std::collections::HashSet;
use std::hash::Hash;

use rayon::prelude::*;

use crate::bits::{and_count, iter_ones, words_for};
use crate::error::{Error, Result};

pub use charpoly::{char_poly, cospectral, CharPoly, CospectralReport, DEFAULT_SPECTRAL_BUDGET};
pub use drg::{intersection_array, DistanceRegularity, IntersectionArray, RegularityViolation};
pub use equitable::{check_equitable, EquitableViolation, Equitability, QuotientMatrix};
pub use invariant::{vertex_invariant_distribution, InvariantDistribution, InvariantKind};
pub use iso::{check_isomorphism, IsomorphismCheck};
pub use switching::{gm_switch, validate_gm, CellClass, GmReport, GmTally, SwitchingPartition};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph<L> {
    labels: Vec<L>,
    words: usize,
    adj: Vec<u64>,
}

/// Evaluates `adjacent` on every label pair. The predicate must be symmetric and
/// irreflexive; only pairs `i < j` are queried.
pub fn build_graph<L, F>(labels: Vec<L>, adjacent: F) -> Result<Graph<L>>
where
    L: Eq + Hash + Sync,
    F: Fn(&L, &L) -> bool + Sync,
{
    Graph::from_index_fn(labels, |g, i, j| adjacent(&g[i], &g[j]))
}

impl<L> Graph<L> {
    /// Vertices `labels`, edge `{i, j}` (i < j) iff `adjacent(labels, i, j)`.
    pub fn from_index_fn<F>(labels: Vec<L>, adjacent: F) -> Result<Self>
    where
        L: Eq + Hash + Sync,
        F: Fn(&[L], usize, usize) -> bool + Sync,
    {
        let mut seen = HashSet::with_capacity(labels.len());
        if let Some(dup) = labels.iter().position(|l| !seen.insert(l)) {
            return Err(Error::param(format!("duplicate vertex label at index {dup}")));
        }
        drop(seen);
        let n = labels.len();
        let upper: Vec<Vec<u32>> = (0..n)
            .into_par_iter()
            .map(|i| ((i + 1)..n).filter(|&j| adjacent(&labels, i, j)).map(|j| j as u32).collect())
            .collect();
        let mut g = Graph::empty(labels);
        for (i, row) in upper.iter().enumerate() {
            for &j in row {
                g.set_edge(i, j as usize, true);
            }
        }
        Ok(g)
    }

    pub fn empty(labels: Vec<L>) -> Self {
        let n = labels.len();
        let words = words_for(n);
        Graph { labels, words, adj: vec![0; n * words] }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &L {
        &self.labels[i]
    }

    pub fn into_labels(self) -> Vec<L> {
        self.labels
    }

    pub fn with_labels<M>(self, labels: Vec<M>) -> Result<Graph<M>> {
        if labels.len() != self.n() {
            return Err(Error::param(format!("{} labels for {} vertices", labels.len(), self.n())));
        }
        Ok(Graph { labels, words: self.words, adj: self.adj })
    }

    /// Same adjacency with unit labels.
    pub fn unlabeled(&self) -> Graph<()> {
        Graph { labels: vec![(); self.n()], words: self.words, adj: self.adj.clone() }
    }

    #[inline]
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.adj[i * self.words..(i + 1) * self.words]
    }

    pub(crate) fn words(&self) -> usize {
        self.words
    }

    pub(crate) fn set_edge(&mut self, i: usize, j: usize, on: bool) {
        assert_ne!(i, j, "loops are not allowed");
        let w = self.words;
        if on {
            self.adj[i * w + j / 64] |= 1 << (j % 64);
            self.adj[j * w + i / 64] |= 1 << (i % 64);
        } else {
            self.adj[i * w + j / 64] &= !(1 << (j % 64));
            self.adj[j * w + i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        iter_ones(self.row(i))
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|i| self.degree(i)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.degrees().iter().sum::<usize>() / 2
    }

    /// `Some(k)` when every vertex has degree k.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degrees();
        match d.first() {
            None => Some(0),
            Some(&k) => d.iter().all(|&x| x == k).then_some(k),
        }
    }

    pub fn common_neighbors(&self, i: usize, j: usize) -> usize {
        and_count(self.row(i), self.row(j))
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// Subgraph induced on `vertices`, in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph<()> {
        let mut g = Graph::empty(vec![(); vertices.len()]);
        for (a, &u) in vertices.iter().enumerate() {
            for (b, &v) in vertices.iter().enumerate().skip(a + 1) {
                if self.adjacent(u, v) {
                    g.set_edge(a, b, true);
                }
            }
        }
        g
    }

    /// Adjacency lists, cheaper than bit rows for sparse sweeps.
    pub fn adjacency_lists(&self) -> Vec<Vec<u32>> {
        (0..self.n()).map(|i| self.neighbors(i).map(|j| j as u32).collect()).collect()
    }

    pub fn same_adjacency<M>(&self, other: &Graph<M>) -> bool {
        self.n() == other.n() && self.adj == other.adj
    }
}
