use serde::Serialize;

use super::Subspace;
use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::gf::{Elem, FieldContext};

/// A sorted, duplicate-free set of projective points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PointSet {
    ambient: usize,
    points: Vec<Subspace>,
}

impl PointSet {
    pub(crate) fn new(ambient: usize, points: Vec<Subspace>) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
        PointSet { ambient, points }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn points(&self) -> &[Subspace] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Numbers the points of PG(n-1, q) in canonical order so point sets can be
/// handled as index lists and bit sets.
#[derive(Debug, Clone)]
pub struct PointIndex {
    field: FieldContext,
    ambient: usize,
    /// Base-q codes of the normalized generators, first coordinate most significant.
    /// Sorted, so the numbering agrees with the canonical subspace order.
    codes: Vec<u64>,
}

impl PointIndex {
    pub fn new(field: &FieldContext, ambient: usize) -> Result<Self> {
        let bits = (ambient as f64) * (field.q() as f64).log2();
        if bits > 40.0 {
            return Err(Error::Budget {
                what: "projective point table",
                count: format!("{}^{}", field.q(), ambient),
                budget: 1 << 40,
            });
        }
        let full = Subspace::full(field, ambient);
        let mut codes: Vec<u64> = full.normalized_vectors().iter().map(|v| encode(field, v)).collect();
        codes.sort_unstable();
        Ok(PointIndex { field: field.clone(), ambient, codes })
    }

    pub fn field(&self) -> &FieldContext {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn point(&self, index: usize) -> Subspace {
        let v = decode(&self.field, self.ambient, self.codes[index]);
        Subspace::from_rref_unchecked(&self.field, self.ambient, v)
    }

    pub fn points(&self) -> Vec<Subspace> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    /// Index of the point spanned by a normalized (leading entry 1) vector.
    pub fn index_of_normalized(&self, v: &[Elem]) -> usize {
        let code = encode(&self.field, v);
        self.codes.binary_search(&code).expect("normalized vector is a point")
    }

    /// Sorted indices of the points of `w`.
    pub fn indices(&self, w: &Subspace) -> Vec<u32> {
        debug_assert_eq!(w.ambient(), self.ambient);
        let mut idx: Vec<u32> = w
            .normalized_vectors()
            .iter()
            .map(|v| self.index_of_normalized(v) as u32)
            .collect();
        idx.sort_unstable();
        idx
    }

    pub fn bits(&self, w: &Subspace) -> BitSet {
        let mut b = BitSet::new(self.len());
        for v in w.normalized_vectors() {
            b.insert(self.index_of_normalized(&v));
        }
        b
    }

    pub fn bits_from_indices(&self, indices: &[u32]) -> BitSet {
        let mut b = BitSet::new(self.len());
        for &i in indices {
            b.insert(i as usize);
        }
        b
    }

    /// Span of a set of points given by index.
    pub fn span(&self, indices: &[u32]) -> Subspace {
        let rows: Vec<Vec<Elem>> = indices
            .iter()
            .map(|&i| decode(&self.field, self.ambient, self.codes[i as usize]))
            .collect();
        Subspace::span(&self.field, self.ambient, &rows).expect("point rows have ambient length")
    }
}

fn encode(field: &FieldContext, v: &[Elem]) -> u64 {
    let q = field.q() as u64;
    v.iter().fold(0, |acc, &x| acc * q + x as u64)
}

fn decode(field: &FieldContext, n: usize, mut code: u64) -> Vec<Elem> {
    let q = field.q() as u64;
    let mut v = vec![0; n];
    for slot in v.iter_mut().rev() {
        *slot = (code % q) as Elem;
        code /= q;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;
    use crate::subspace::{enumerate_subspaces, projective_points, DEFAULT_ENUMERATION_BUDGET};

    #[test]
    fn numbering_matches_canonical_order() {
        for q in [2, 3, 4] {
            let f = make_field(q).unwrap();
            let idx = PointIndex::new(&f, 4).unwrap();
            let pts = enumerate_subspaces(&f, 4, 1, DEFAULT_ENUMERATION_BUDGET).unwrap();
            assert_eq!(idx.points(), pts);
        }
    }

    #[test]
    fn indices_agree_with_projective_points() {
        let f = make_field(3).unwrap();
        let idx = PointIndex::new(&f, 4).unwrap();
        for w in enumerate_subspaces(&f, 4, 2, DEFAULT_ENUMERATION_BUDGET).unwrap() {
            let via_idx: Vec<Subspace> = idx.indices(&w).iter().map(|&i| idx.point(i as usize)).collect();
            assert_eq!(via_idx, projective_points(&w).points());
            assert_eq!(idx.bits(&w).len(), 4);
            assert_eq!(idx.span(&idx.indices(&w)), w);
        }
    }
}
