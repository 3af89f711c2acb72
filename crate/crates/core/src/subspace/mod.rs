//! Subspaces of GF(q)^n held in canonical reduced row echelon form.
//!
//! Equality, hashing and ordering all go through the RREF basis, so two values
//! compare equal exactly when they span the same space. Ordering is by
//! `(ambient, dim)` and then lexicographic on the basis read row-major.

mod points;
mod polarity;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};
use crate::gf::{rref_in_place, Elem, FieldContext, Matrix};

pub use points::{PointIndex, PointSet};
pub use polarity::{hyperplane, in_hyperplane, Polarity};

/// Default cap on the number of subspaces a single enumeration may produce.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 10_000_000;

#[derive(Clone)]
pub struct Subspace {
    field: FieldContext,
    ambient: usize,
    dim: usize,
    basis: Vec<Elem>,
}

impl Subspace {
    pub fn zero(field: &FieldContext, ambient: usize) -> Self {
        Subspace { field: field.clone(), ambient, dim: 0, basis: Vec::new() }
    }

    pub fn full(field: &FieldContext, ambient: usize) -> Self {
        canonicalize(&Matrix::identity(field, ambient))
    }

    /// Span of the given row vectors.
    pub fn span(field: &FieldContext, ambient: usize, rows: &[Vec<Elem>]) -> Result<Self> {
        Ok(canonicalize(&Matrix::from_rows(field, ambient, rows)?))
    }

    /// Builds from a buffer already known to be in RREF with no zero rows.
    pub(crate) fn from_rref_unchecked(field: &FieldContext, ambient: usize, basis: Vec<Elem>) -> Self {
        debug_assert_eq!(basis.len() % ambient.max(1), 0);
        let dim = if ambient == 0 { 0 } else { basis.len() / ambient };
        Subspace { field: field.clone(), ambient, dim, basis }
    }

    pub fn field(&self) -> &FieldContext {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> Matrix {
        Matrix::from_raw(&self.field, self.dim, self.ambient, self.basis.clone())
    }

    pub fn basis_row(&self, r: usize) -> &[Elem] {
        &self.basis[r * self.ambient..(r + 1) * self.ambient]
    }

    pub fn basis_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.dim).map(|r| self.basis_row(r).to_vec()).collect()
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient || self.field != other.field {
            return Err(Error::param(format!(
                "subspaces live in different spaces: GF({})^{} vs GF({})^{}",
                self.field.q(),
                self.ambient,
                other.field.q(),
                other.ambient
            )));
        }
        Ok(())
    }

    fn stacked_rank(&self, other: &Subspace) -> usize {
        let mut data = self.basis.clone();
        data.extend_from_slice(&other.basis);
        rref_in_place(&self.field, &mut data, self.dim + other.dim, self.ambient).len()
    }

    /// `dim U + dim W - rank [U; W]`.
    pub fn dim_intersection(&self, other: &Subspace) -> Result<usize> {
        self.check_compatible(other)?;
        Ok(self.dim + other.dim - self.stacked_rank(other))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let mut data = self.basis.clone();
        data.extend_from_slice(&other.basis);
        let rows = self.dim + other.dim;
        let rank = rref_in_place(&self.field, &mut data, rows, self.ambient).len();
        data.truncate(rank * self.ambient);
        Ok(Subspace::from_rref_unchecked(&self.field, self.ambient, data))
    }

    /// True iff `other` is a subspace of `self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(other.dim <= self.dim && self.stacked_rank(other) == self.dim)
    }

    /// Zassenhaus: reduce `[U U; W 0]`; rows with a zero left half carry U ∩ W.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let n = self.ambient;
        let width = 2 * n;
        let rows = self.dim + other.dim;
        let mut data = Vec::with_capacity(rows * width);
        for r in 0..self.dim {
            data.extend_from_slice(self.basis_row(r));
            data.extend_from_slice(self.basis_row(r));
        }
        for r in 0..other.dim {
            data.extend_from_slice(other.basis_row(r));
            data.extend(std::iter::repeat_n(0, n));
        }
        let pivots = rref_in_place(&self.field, &mut data, rows, width);
        let mut out = Vec::new();
        for (r, &pc) in pivots.iter().enumerate() {
            if pc >= n {
                out.extend_from_slice(&data[r * width + n..(r + 1) * width]);
            }
        }
        let k = out.len() / n.max(1);
        let pivots = rref_in_place(&self.field, &mut out, k, n);
        out.truncate(pivots.len() * n);
        Ok(Subspace::from_rref_unchecked(&self.field, n, out))
    }

    /// Every nonzero vector of the space, each once per projective point scaled to
    /// lead with 1. These are exactly the canonical generators of the 1-subspaces.
    pub fn normalized_vectors(&self) -> Vec<Vec<Elem>> {
        let f = &self.field;
        let q = f.q() as usize;
        let n = self.ambient;
        let mut out = Vec::new();
        // Leading coefficient 1 on row `lead`, arbitrary on later rows.
        for lead in 0..self.dim {
            let free = self.dim - lead - 1;
            let mut coeffs = vec![0 as Elem; free];
            loop {
                let mut v = self.basis_row(lead).to_vec();
                for (i, &c) in coeffs.iter().enumerate() {
                    if c != 0 {
                        let row = self.basis_row(lead + 1 + i);
                        for j in 0..n {
                            v[j] = f.add(v[j], f.mul(c, row[j]));
                        }
                    }
                }
                out.push(v);
                // odometer increment
                let mut pos = 0;
                while pos < free {
                    coeffs[pos] += 1;
                    if (coeffs[pos] as usize) < q {
                        break;
                    }
                    coeffs[pos] = 0;
                    pos += 1;
                }
                if pos == free {
                    break;
                }
            }
        }
        out
    }
}

/// Canonical subspace spanned by the rows of `vectors`.
pub fn canonicalize(vectors: &Matrix) -> Subspace {
    let n = vectors.cols();
    let mut data = vectors.data().to_vec();
    let rank = rref_in_place(vectors.field(), &mut data, vectors.rows(), n).len();
    data.truncate(rank * n);
    Subspace::from_rref_unchecked(vectors.field(), n, data)
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.field == other.field && self.basis == other.basis
    }
}

impl Eq for Subspace {}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ambient.hash(state);
        self.basis.hash(state);
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.field.q(), self.ambient, self.dim, &self.basis).cmp(&(
            other.field.q(),
            other.ambient,
            other.dim,
            &other.basis,
        ))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for r in 0..self.dim {
            if r > 0 {
                write!(f, ",")?;
            }
            for x in self.basis_row(r) {
                write!(f, "{x:x}")?;
            }
        }
        write!(f, ">")
    }
}

/// Serialized as the list of RREF basis rows.
impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.dim))?;
        for r in 0..self.dim {
            seq.serialize_element(self.basis_row(r))?;
        }
        seq.end()
    }
}

/// `[n choose k]_q`, exact.
pub fn gaussian_binomial(n: u32, k: u32, q: u32) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let q = BigUint::from(q);
    let one = BigUint::one();
    let (mut num, mut den) = (BigUint::one(), BigUint::one());
    for i in 0..k {
        num *= q.pow(n - i) - &one;
        den *= q.pow(i + 1) - &one;
    }
    num / den
}

/// `[k]_q = (q^k - 1)/(q - 1)`, the number of points of a k-space.
pub fn q_integer(k: u32, q: u32) -> u64 {
    (0..k).map(|i| (q as u64).pow(i)).sum()
}

/// Inverse of [`q_integer`] on its image.
pub fn dim_from_point_count(count: usize, q: u32) -> Option<usize> {
    let mut d = 0u32;
    loop {
        let c = q_integer(d, q);
        match c.cmp(&(count as u64)) {
            Ordering::Equal => return Some(d as usize),
            Ordering::Greater => return None,
            Ordering::Less => d += 1,
        }
    }
}

fn check_budget(count: &BigUint, budget: u64) -> Result<u64> {
    match count.to_u64() {
        Some(c) if c <= budget => Ok(c),
        _ => Err(Error::Budget { what: "subspace enumeration", count: count.to_string(), budget }),
    }
}

/// All k-subspaces of GF(q)^n in canonical order.
///
/// Walks each of the C(n, k) pivot patterns and fills the free entries, then sorts.
pub fn enumerate_subspaces(field: &FieldContext, n: usize, k: usize, budget: u64) -> Result<Vec<Subspace>> {
    if k > n {
        return Err(Error::param(format!("cannot take {k}-subspaces of a {n}-space")));
    }
    let total = check_budget(&gaussian_binomial(n as u32, k as u32, field.q()), budget)?;
    let q = field.q() as Elem;
    let mut out = Vec::with_capacity(total as usize);

    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // free slots: (row, col) with col > pivot[row] and col not a pivot
        let free: Vec<usize> = (0..k)
            .flat_map(|r| {
                let pivots = &pivots;
                (pivots[r] + 1..n).filter(move |c| !pivots.contains(c)).map(move |c| r * n + c)
            })
            .collect();
        let mut fill = vec![0 as Elem; free.len()];
        loop {
            let mut basis = vec![0 as Elem; k * n];
            for (r, &pc) in pivots.iter().enumerate() {
                basis[r * n + pc] = 1;
            }
            for (&slot, &v) in free.iter().zip(&fill) {
                basis[slot] = v;
            }
            out.push(Subspace::from_rref_unchecked(field, n, basis));
            let mut pos = 0;
            while pos < fill.len() {
                fill[pos] += 1;
                if fill[pos] < q {
                    break;
                }
                fill[pos] = 0;
                pos += 1;
            }
            if pos == fill.len() {
                break;
            }
        }
        // next k-combination of 0..n
        let Some(i) = (0..k).rev().find(|&i| pivots[i] < n - k + i) else {
            break;
        };
        pivots[i] += 1;
        for j in i + 1..k {
            pivots[j] = pivots[j - 1] + 1;
        }
    }
    if k == 0 {
        out.truncate(1);
    }
    out.sort();
    debug_assert_eq!(out.len() as u64, total);
    Ok(out)
}

/// All 1-subspaces of `w`, sorted.
pub fn projective_points(w: &Subspace) -> PointSet {
    let mut pts: Vec<Subspace> = w
        .normalized_vectors()
        .into_iter()
        .map(|v| Subspace::from_rref_unchecked(w.field(), w.ambient(), v))
        .collect();
    pts.sort();
    PointSet::new(w.ambient(), pts)
}
