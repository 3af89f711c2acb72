//! Polarities of the hyperplane `H = {x in GF(q)^{2e+1} : x_{2e+1} = 0}` given by a
//! nondegenerate alternating form on H.

use super::{canonicalize, Subspace};
use crate::error::{Error, Result};
use crate::gf::{rref, FieldContext, Matrix};

/// The hyperplane spanned by the first `2e` standard basis vectors of GF(q)^{2e+1}.
pub fn hyperplane(field: &FieldContext, e: usize) -> Subspace {
    let n = 2 * e + 1;
    let mut m = Matrix::zeros(field, 2 * e, n);
    for i in 0..2 * e {
        m.set(i, i, 1);
    }
    canonicalize(&m)
}

/// `w` lies in the standard hyperplane iff its last coordinate vanishes on a basis.
pub fn in_hyperplane(w: &Subspace) -> bool {
    let n = w.ambient();
    (0..w.dim()).all(|r| w.basis_row(r)[n - 1] == 0)
}

/// `U -> U^perp` under an alternating form on H. Inclusion-reversing and involutive.
#[derive(Debug, Clone)]
pub struct Polarity {
    e: usize,
    gram: Matrix,
}

impl Polarity {
    /// Gram matrix `[[0, I_e], [-I_e, 0]]`.
    pub fn symplectic(field: &FieldContext, e: usize) -> Self {
        let mut g = Matrix::zeros(field, 2 * e, 2 * e);
        for i in 0..e {
            g.set(i, e + i, 1);
            g.set(e + i, i, field.neg(1));
        }
        Polarity { e, gram: g }
    }

    /// Gram matrix pairing coordinates `2i` and `2i+1`; differs from
    /// [`Polarity::symplectic`] for `e >= 2`.
    pub fn interleaved(field: &FieldContext, e: usize) -> Self {
        let mut g = Matrix::zeros(field, 2 * e, 2 * e);
        for i in 0..e {
            g.set(2 * i, 2 * i + 1, 1);
            g.set(2 * i + 1, 2 * i, field.neg(1));
        }
        Polarity { e, gram: g }
    }

    /// Any nondegenerate alternating Gram matrix on H (size `2e x 2e`).
    pub fn from_gram(gram: Matrix) -> Result<Self> {
        let n = gram.rows();
        if n != gram.cols() || n == 0 || !n.is_multiple_of(2) {
            return Err(Error::param(format!(
                "Gram matrix must be square of even size, got {}x{}",
                gram.rows(),
                gram.cols()
            )));
        }
        let f = gram.field().clone();
        for i in 0..n {
            if gram.get(i, i) != 0 {
                return Err(Error::param(format!("Gram matrix has nonzero diagonal entry at {i}")));
            }
            for j in 0..n {
                if gram.get(i, j) != f.neg(gram.get(j, i)) {
                    return Err(Error::param(format!("Gram matrix is not skew at ({i}, {j})")));
                }
            }
        }
        if rref(&gram).rank != n {
            return Err(Error::param("Gram matrix is degenerate"));
        }
        Ok(Polarity { e: n / 2, gram })
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn field(&self) -> &FieldContext {
        self.gram.field()
    }

    /// The form evaluated on two vectors of H (length 2e or 2e+1; extra coordinates ignored).
    pub fn form(&self, x: &[u8], y: &[u8]) -> u8 {
        let f = self.field();
        let m = 2 * self.e;
        let mut acc = 0;
        for a in 0..m {
            if x[a] == 0 {
                continue;
            }
            for b in 0..m {
                let g = self.gram.get(a, b);
                if g != 0 && y[b] != 0 {
                    acc = f.add(acc, f.mul(x[a], f.mul(g, y[b])));
                }
            }
        }
        acc
    }

    /// `U^perp` inside H, as a subspace of GF(q)^{2e+1}.
    pub fn apply(&self, u: &Subspace) -> Result<Subspace> {
        let m = 2 * self.e;
        let n = m + 1;
        let f = self.field();
        if u.ambient() != n || u.field() != f {
            return Err(Error::param(format!(
                "polarity acts on subspaces of GF({})^{n}, got GF({})^{}",
                f.q(),
                u.field().q(),
                u.ambient()
            )));
        }
        if !in_hyperplane(u) {
            return Err(Error::domain(format!("{u:?} is not contained in the hyperplane H")));
        }
        // Row i is G u_i^T; U^perp is the right kernel of these rows.
        let mut constraints = Matrix::zeros(f, u.dim(), m);
        for i in 0..u.dim() {
            let row = u.basis_row(i);
            for a in 0..m {
                let mut acc = 0;
                for b in 0..m {
                    acc = f.add(acc, f.mul(self.gram.get(a, b), row[b]));
                }
                constraints.set(i, a, acc);
            }
        }
        let r = rref(&constraints);
        let mut kernel = Vec::new();
        for free in (0..m).filter(|c| !r.pivots.contains(c)) {
            let mut v = vec![0; n];
            v[free] = 1;
            for (row, &pc) in r.pivots.iter().enumerate() {
                v[pc] = f.neg(r.matrix.get(row, free));
            }
            kernel.push(v);
        }
        Subspace::span(f, n, &kernel)
    }

    /// `U ⊆ U^perp`.
    pub fn is_totally_isotropic(&self, u: &Subspace) -> Result<bool> {
        self.apply(u)?.contains(u)
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::gf::make_field;
    use crate::subspace::{enumerate_subspaces, DEFAULT_ENUMERATION_BUDGET};

    fn subspaces_of_h(f: &FieldContext, e: usize) -> Vec<Subspace> {
        let n = 2 * e + 1;
        (0..=2 * e)
            .flat_map(|k| enumerate_subspaces(f, n, k, DEFAULT_ENUMERATION_BUDGET).unwrap())
            .filter(in_hyperplane)
            .collect()
    }

    #[test]
    fn e1_q2_gram_and_images() {
        let f = make_field(2).unwrap();
        let s = Polarity::symplectic(&f, 1);
        assert_eq!(s.gram().row(0), &[0, 1]);
        assert_eq!(s.gram().row(1), &[1, 0]);
        // Null-space oracle: perp of <v> is {h : form(h, v) = 0}; in dimension 2 every
        // point is isotropic for an alternating form, so each point is its own perp.
        let points: Vec<_> = enumerate_subspaces(&f, 3, 1, 100).unwrap().into_iter().filter(in_hyperplane).collect();
        assert_eq!(points.len(), 3);
        for p in &points {
            let img = s.apply(p).unwrap();
            let brute: Vec<Vec<u8>> = Subspace::full(&f, 3)
                .normalized_vectors()
                .into_iter()
                .filter(|h| h[2] == 0 && s.form(h, p.basis_row(0)) == 0)
                .collect();
            assert_eq!(img, Subspace::span(&f, 3, &brute).unwrap());
            assert_eq!(&img, p);
        }
        let zero = Subspace::zero(&f, 3);
        assert_eq!(s.apply(&zero).unwrap(), hyperplane(&f, 1));
        assert_eq!(s.apply(&hyperplane(&f, 1)).unwrap(), zero);
    }

    #[test]
    fn extremes_map_to_each_other() {
        let f = make_field(3).unwrap();
        let s = Polarity::symplectic(&f, 2);
        let h = hyperplane(&f, 2);
        assert_eq!(s.apply(&Subspace::zero(&f, 5)).unwrap(), h);
        assert_eq!(s.apply(&h).unwrap().dim(), 0);
    }

    #[test]
    fn totally_isotropic_count_e2_q2() {
        let f = make_field(2).unwrap();
        let s = Polarity::symplectic(&f, 2);
        let es: Vec<_> = enumerate_subspaces(&f, 5, 2, 1000).unwrap().into_iter().filter(in_hyperplane).collect();
        assert_eq!(es.len(), 35);
        // brute force: U ⊆ U^perp iff the form vanishes on all pairs of vectors of U
        let brute = es
            .iter()
            .filter(|u| {
                let vs = u.normalized_vectors();
                vs.iter().all(|x| vs.iter().all(|y| s.form(x, y) == 0))
            })
            .count();
        assert_eq!(brute, (2 + 1) * (4 + 1));
        let fixed = es.iter().filter(|u| s.apply(u).unwrap() == **u).count();
        assert_eq!(fixed, 15);
    }

    #[test]
    fn rejects_subspaces_outside_h() {
        let f = make_field(2).unwrap();
        let s = Polarity::symplectic(&f, 2);
        let p = Subspace::span(&f, 5, &[vec![0, 0, 0, 0, 1]]).unwrap();
        assert!(matches!(s.apply(&p), Err(Error::Domain(_))));
    }

    #[test]
    fn from_gram_validation() {
        let f = make_field(3).unwrap();
        let bad_skew = Matrix::from_rows(&f, 2, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(Polarity::from_gram(bad_skew).is_err());
        let degenerate = Matrix::zeros(&f, 2, 2);
        assert!(Polarity::from_gram(degenerate).is_err());
        let diag = Matrix::from_rows(&f, 2, &[vec![1, 1], vec![2, 0]]).unwrap();
        assert!(Polarity::from_gram(diag).is_err());
        let ok = Matrix::from_rows(&f, 2, &[vec![0, 1], vec![2, 0]]).unwrap();
        assert_eq!(Polarity::from_gram(ok).unwrap().e(), 1);
    }

    /// Involution, dimension complement, inclusion reversal and the lattice
    /// anti-automorphism laws over every subspace of H.
    fn check_axioms(q: u32, e: usize, pair_stride: usize) {
        let f = make_field(q).unwrap();
        let s = Polarity::symplectic(&f, e);
        let all = subspaces_of_h(&f, e);
        let images: Vec<Subspace> = all.iter().map(|u| s.apply(u).unwrap()).collect();
        let distinct: BTreeSet<_> = images.iter().collect();
        assert_eq!(distinct.len(), all.len(), "sigma is a permutation");
        for (u, su) in all.iter().zip(&images) {
            assert_eq!(su.dim(), 2 * e - u.dim());
            assert!(in_hyperplane(su));
            assert_eq!(&s.apply(su).unwrap(), u);
        }
        for (i, u) in all.iter().enumerate() {
            for (j, w) in all.iter().enumerate().skip(i % pair_stride).step_by(pair_stride) {
                if w.contains(u).unwrap() {
                    assert!(images[i].contains(&images[j]).unwrap());
                }
                let meet = u.intersection(w).unwrap();
                let join = u.sum(w).unwrap();
                assert_eq!(s.apply(&meet).unwrap(), images[i].sum(&images[j]).unwrap());
                assert_eq!(s.apply(&join).unwrap(), images[i].intersection(&images[j]).unwrap());
            }
        }
    }

    #[test]
    fn polarity_axioms_exhaustive_q2_e2() {
        check_axioms(2, 2, 1);
    }

    #[test]
    fn polarity_axioms_q3_e2() {
        check_axioms(3, 2, 7);
    }

    #[test]
    fn e_subspace_intersections_preserved() {
        let f = make_field(2).unwrap();
        let s = Polarity::symplectic(&f, 2);
        let es: Vec<_> = enumerate_subspaces(&f, 5, 2, 1000).unwrap().into_iter().filter(in_hyperplane).collect();
        for u in &es {
            for w in &es {
                let su = s.apply(u).unwrap();
                let sw = s.apply(w).unwrap();
                assert_eq!(u.dim_intersection(w).unwrap(), su.dim_intersection(&sw).unwrap());
            }
        }
    }
}
