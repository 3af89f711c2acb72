//! Arithmetic in GF(q) for prime powers q <= 16, and dense matrices over it.
//!
//! Elements are the integers `0..q`. For q = p^m the integer `a = c_0 + c_1 p + ... +
//! c_{m-1} p^{m-1}` stands for the residue class of `c_0 + c_1 x + ... + c_{m-1} x^{m-1}`
//! modulo the field's irreducible polynomial. The modulus for each (p, m) is the monic
//! irreducible of degree m whose coefficient vector, read as the integer
//! `sum c_i p^i`, is smallest.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field order the tables support.
pub const MAX_FIELD_ORDER: u32 = 16;

/// Field element, always `< q`.
pub type Elem = u8;

struct Tables {
    q: u32,
    p: u32,
    m: u32,
    /// Low-to-high coefficients including the leading 1; empty for prime fields.
    modulus: Vec<u32>,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

/// An immutable, cheaply clonable GF(q) context.
#[derive(Clone)]
pub struct FieldContext {
    t: Arc<Tables>,
}

impl fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.t.q)
    }
}

impl PartialEq for FieldContext {
    fn eq(&self, other: &Self) -> bool {
        self.t.q == other.t.q
    }
}

impl Eq for FieldContext {}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Returns `(p, m)` with `q = p^m`, or `None` when q is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut rest, mut m) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1 && is_prime(p)).then_some((p, m))
}

// Polynomials over GF(p) as low-to-high coefficient vectors.

fn poly_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = (1..p).find(|x| x * b[db] % p == 1).expect("nonzero lead");
    while r.len() > db {
        let top = *r.last().unwrap();
        if top != 0 {
            let factor = top * lead_inv % p;
            let shift = r.len() - 1 - db;
            for (i, &c) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p * p - factor * c % p) % p;
            }
        }
        r.pop();
        r = poly_trim(r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn digits(mut a: u32, p: u32, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = a % p;
            a /= p;
            d
        })
        .collect()
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub(crate) fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        for low in 0..p.pow(d as u32) {
            let mut divisor = digits(low, p, d);
            divisor.push(1);
            if poly_rem(poly, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn lowest_irreducible(p: u32, m: u32) -> Vec<u32> {
    (0..p.pow(m))
        .map(|low| {
            let mut poly = digits(low, p, m as usize);
            poly.push(1);
            poly
        })
        .find(|poly| is_irreducible(poly, p))
        .expect("an irreducible polynomial of every degree exists")
}

/// Builds GF(q). Deterministic: the same q always yields the same modulus.
pub fn make_field(q: u32) -> Result<FieldContext> {
    let (p, m) = prime_power(q).ok_or_else(|| Error::param(format!("q = {q} is not a prime power")))?;
    if q > MAX_FIELD_ORDER {
        return Err(Error::param(format!(
            "q = {q} is outside the supported range (prime powers <= {MAX_FIELD_ORDER})"
        )));
    }
    let modulus = if m == 1 { Vec::new() } else { lowest_irreducible(p, m) };
    let qs = q as usize;

    let mut add = vec![0; qs * qs];
    let mut mul = vec![0; qs * qs];
    for a in 0..q {
        let da = digits(a, p, m as usize);
        for b in 0..q {
            let db = digits(b, p, m as usize);
            let sum: u32 = (0..m as usize)
                .rev()
                .fold(0, |acc, i| acc * p + (da[i] + db[i]) % p);
            add[a as usize * qs + b as usize] = sum as Elem;

            let mut prod = vec![0u32; 2 * m as usize];
            for i in 0..m as usize {
                for j in 0..m as usize {
                    prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
                }
            }
            let prod = poly_trim(prod);
            let reduced = if m == 1 || prod.is_empty() {
                prod
            } else {
                poly_rem(&prod, &modulus, p)
            };
            let value = reduced.iter().rev().fold(0, |acc, &c| acc * p + c);
            mul[a as usize * qs + b as usize] = value as Elem;
        }
    }
    let neg = (0..qs)
        .map(|a| (0..qs).find(|&b| add[a * qs + b] == 0).unwrap() as Elem)
        .collect();
    let inv = (0..qs)
        .map(|a| {
            if a == 0 {
                0
            } else {
                (1..qs).find(|&b| mul[a * qs + b] == 1).expect("field inverse") as Elem
            }
        })
        .collect();

    Ok(FieldContext {
        t: Arc::new(Tables { q, p, m, modulus, add, mul, neg, inv }),
    })
}

/// The four elementary operations, for callers that dispatch on an operation name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Neg,
    Inv,
}

impl FieldContext {
    pub fn q(&self) -> u32 {
        self.t.q
    }

    pub fn characteristic(&self) -> u32 {
        self.t.p
    }

    pub fn degree(&self) -> u32 {
        self.t.m
    }

    pub fn modulus(&self) -> &[u32] {
        &self.t.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.t.q as Elem
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.t.add[a as usize * self.t.q as usize + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.t.mul[a as usize * self.t.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.t.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            Err(Error::DivisionByZero(self.t.q))
        } else {
            Ok(self.t.inv[a as usize])
        }
    }

    /// Checked dispatcher over [`FieldOp`]; `b` is required for add/mul only.
    pub fn apply(&self, op: FieldOp, a: Elem, b: Option<Elem>) -> Result<Elem> {
        let check = |x: Elem| {
            if (x as u32) < self.t.q {
                Ok(x)
            } else {
                Err(Error::param(format!("{x} is not an element of GF({})", self.t.q)))
            }
        };
        let a = check(a)?;
        match op {
            FieldOp::Add | FieldOp::Mul => {
                let b = check(b.ok_or_else(|| Error::param("binary operation needs two operands"))?)?;
                Ok(if op == FieldOp::Add { self.add(a, b) } else { self.mul(a, b) })
            }
            FieldOp::Neg => Ok(self.neg(a)),
            FieldOp::Inv => self.inv(a),
        }
    }
}

/// Row-major matrix over a [`FieldContext`].
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldContext,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Output of [`rref`].
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: &FieldContext, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &FieldContext, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(field: &FieldContext, cols: usize, rows: &[Vec<Elem>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::param(format!("row of length {} in a {cols}-column matrix", row.len())));
            }
            if let Some(bad) = row.iter().find(|&&x| x as u32 >= field.q()) {
                return Err(Error::param(format!("{bad} is not an element of GF({})", field.q())));
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix { field: field.clone(), rows: rows.len(), cols, data })
    }

    pub(crate) fn from_raw(field: &FieldContext, rows: usize, cols: usize, data: Vec<Elem>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Matrix { field: field.clone(), rows, cols, data }
    }

    pub fn field(&self) -> &FieldContext {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows || self.field != other.field {
            return Err(Error::param(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, j)));
                }
            }
        }
        Ok(out)
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::param(format!("column mismatch: {} vs {}", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn rank(&self) -> usize {
        rref(self).rank
    }
}

/// Reduced row echelon form: leading ones, zeros above and below each pivot,
/// zero rows last.
pub fn rref(m: &Matrix) -> Rref {
    let mut out = m.clone();
    let pivots = rref_in_place(&m.field, &mut out.data, m.rows, m.cols);
    Rref { rank: pivots.len(), matrix: out, pivots }
}

/// Row-reduces a raw row-major buffer, returning the pivot columns.
pub(crate) fn rref_in_place(f: &FieldContext, data: &mut [Elem], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| data[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                data.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(data[r * cols + c]).expect("pivot is nonzero");
        if inv != 1 {
            for j in c..cols {
                data[r * cols + j] = f.mul(data[r * cols + j], inv);
            }
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = data[i * cols + c];
            if factor == 0 {
                continue;
            }
            let nf = f.neg(factor);
            for j in c..cols {
                let v = data[r * cols + j];
                if v != 0 {
                    data[i * cols + j] = f.add(data[i * cols + j], f.mul(nf, v));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}
