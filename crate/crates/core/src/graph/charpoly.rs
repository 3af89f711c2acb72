//! Exact characteristic polynomials of adjacency matrices.
//!
//! `det(xI - A)` is computed modulo a set of 62-bit primes by Hessenberg reduction
//! and lifted with the Chinese remainder theorem. The number of primes is fixed in
//! advance from a proven bound on the coefficients, so the lift is exact.
//!
//! Bound: with eigenvalues `λ_i`, `|c_{n-k}| <= e_k(|λ|)` and by Maclaurin
//! `e_k(|λ|) <= C(n,k) (Σ|λ_i| / n)^k`, while `Σ|λ_i| <= sqrt(n · tr A²) = sqrt(n · 2m)`.
//! Hence `c_{n-k}^2 <= C(n,k)^2 (2m)^k / n^k`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::Graph;
use crate::error::{Error, Result};

/// Largest vertex count for which exact characteristic polynomials are computed by default.
pub const DEFAULT_SPECTRAL_BUDGET: usize = 2000;

/// `det(xI - A)`; `coeffs[k]` is the coefficient of `x^k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharPoly {
    coeffs: Vec<BigInt>,
}

impl CharPoly {
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        CharPoly { coeffs }
    }

    /// `prod (x - root)^mult`.
    pub fn from_roots(roots: &[(i64, usize)]) -> Self {
        let mut c = vec![BigInt::one()];
        for &(r, m) in roots {
            for _ in 0..m {
                // multiply by (x - r)
                let mut next = vec![BigInt::zero(); c.len() + 1];
                for (k, a) in c.iter().enumerate() {
                    next[k + 1] += a;
                    next[k] -= a * r;
                }
                c = next;
            }
        }
        CharPoly { coeffs: c }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &BigInt {
        &self.coeffs[k]
    }

    /// Splits off integer roots with `|root| <= bound` by repeated synthetic division.
    /// Returns `(root, multiplicity)` in decreasing root order and the residual degree.
    pub fn integer_roots(&self, bound: i64) -> (Vec<(i64, usize)>, usize) {
        let mut p = self.coeffs.clone();
        let mut roots = Vec::new();
        for r in (-bound..=bound).rev() {
            let mut mult = 0;
            while p.len() > 1 {
                match divide_linear(&p, r) {
                    Some(quot) => {
                        p = quot;
                        mult += 1;
                    }
                    None => break,
                }
            }
            if mult > 0 {
                roots.push((r, mult));
            }
        }
        (roots, p.len() - 1)
    }
}

/// Quotient of `p` by `(x - r)` when the remainder vanishes.
fn divide_linear(p: &[BigInt], r: i64) -> Option<Vec<BigInt>> {
    let n = p.len() - 1;
    let mut quot = vec![BigInt::zero(); n];
    let mut carry = BigInt::zero();
    for k in (0..=n).rev() {
        let v = &p[k] + &carry;
        if k == 0 {
            return v.is_zero().then_some(quot);
        }
        carry = &v * r;
        quot[k - 1] = v;
    }
    unreachable!()
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !mag.is_one() || k == 0;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for CharPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

/// Exact characteristic polynomial. Errors with a budget error above `budget` vertices.
pub fn char_poly<L>(g: &Graph<L>, budget: usize) -> Result<CharPoly> {
    let n = g.n();
    if n > budget {
        return Err(Error::Budget { what: "characteristic polynomial", count: n.to_string(), budget: budget as u64 });
    }
    if n == 0 {
        return Ok(CharPoly { coeffs: vec![BigInt::one()] });
    }
    let edges = g.edge_count();
    if edges == 0 {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        return Ok(CharPoly { coeffs });
    }
    let bound_sq = coefficient_bound_squared(n, edges);
    // need M > 2 |c|, i.e. M^2 > 4 bound_sq
    let target = bound_sq * 4u32;
    let mut primes = Vec::new();
    let mut modulus_sq = BigUint::one();
    let mut candidate = (1u64 << 62) - 1;
    while modulus_sq <= target {
        candidate = prev_prime(candidate);
        primes.push(candidate);
        modulus_sq *= BigUint::from(candidate) * BigUint::from(candidate);
        candidate -= 2;
    }

    let adj = g.adjacency_lists();
    let residues: Vec<Vec<u64>> = primes.par_iter().map(|&p| charpoly_mod_p(&adj, p)).collect();

    // Garner-style incremental CRT, then symmetric lift.
    let mut acc: Vec<BigInt> = residues[0].iter().map(|&r| BigInt::from(r)).collect();
    let mut modulus = BigInt::from(primes[0]);
    for (res, &p) in residues.iter().zip(&primes).skip(1) {
        let pb = BigInt::from(p);
        let m_mod_p = (&modulus % &pb).to_u64().unwrap();
        let inv = BigInt::from(mod_inverse(m_mod_p, p));
        for (a, &r) in acc.iter_mut().zip(res) {
            let a_mod_p = a.mod_floor(&pb);
            let delta = (BigInt::from(r) - a_mod_p).mod_floor(&pb) * &inv % &pb;
            *a += &modulus * delta;
        }
        modulus *= pb;
    }
    let half = &modulus >> 1;
    for a in acc.iter_mut() {
        if *a > half {
            *a -= &modulus;
        }
    }
    Ok(CharPoly { coeffs: acc })
}

fn coefficient_bound_squared(n: usize, edges: usize) -> BigUint {
    let s = BigUint::from(2 * edges);
    let nn = BigUint::from(n);
    let mut best = BigUint::one();
    let mut binom = BigUint::one();
    let mut s_pow = BigUint::one();
    let mut n_pow = BigUint::one();
    for k in 0..=n {
        if k > 0 {
            binom = binom * BigUint::from(n - k + 1) / BigUint::from(k);
            s_pow *= &s;
            n_pow *= &nn;
        }
        let num = &binom * &binom * &s_pow;
        let (q, r) = num.div_rem(&n_pow);
        let v = if r.is_zero() { q } else { q + 1u32 };
        if v > best {
            best = v;
        }
    }
    best
}

/// Montgomery arithmetic modulo an odd prime below 2^62.
#[derive(Clone, Copy)]
struct Mont {
    p: u64,
    /// -p^{-1} mod 2^64
    pinv_neg: u64,
    /// 2^128 mod p
    r2: u64,
}

impl Mont {
    fn new(p: u64) -> Self {
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Mont { p, pinv_neg: inv.wrapping_neg(), r2 }
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.pinv_neg);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn to_mont(self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    fn leave_mont(self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = self.to_mont(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }
}

/// Char poly coefficients mod p (plain residues, ascending degree).
fn charpoly_mod_p(adj: &[Vec<u32>], p: u64) -> Vec<u64> {
    let n = adj.len();
    let mt = Mont::new(p);
    let one = mt.to_mont(1);
    let mut a = vec![0u64; n * n];
    for i in 0..n {
        for &j in &adj[i] {
            a[i * n + j as usize] = one;
        }
    }

    // Reduce to upper Hessenberg form by similarity transforms.
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| a[i * n + j] != 0) else {
            continue;
        };
        if piv != j + 1 {
            let (r1, r2) = (piv, j + 1);
            for c in 0..n {
                a.swap(r1 * n + c, r2 * n + c);
            }
            for r in 0..n {
                a.swap(r * n + r1, r * n + r2);
            }
        }
        let pinv = mt.inv(a[(j + 1) * n + j]);
        for i in j + 2..n {
            let t = a[i * n + j];
            if t == 0 {
                continue;
            }
            let t = mt.mul(t, pinv);
            // row_i -= t * row_{j+1}
            let (top, bottom) = a.split_at_mut(i * n);
            let src = &top[(j + 1) * n..(j + 2) * n];
            let dst = &mut bottom[..n];
            for c in j..n {
                if src[c] != 0 {
                    dst[c] = mt.sub(dst[c], mt.mul(t, src[c]));
                }
            }
            // col_{j+1} += t * col_i
            for r in 0..n {
                let v = a[r * n + i];
                if v != 0 {
                    a[r * n + j + 1] = mt.add(a[r * n + j + 1], mt.mul(t, v));
                }
            }
        }
    }

    // p_m(x) = (x - h_mm) p_{m-1} - sum_i (prod subdiag) h_{m-i,m} p_{m-i-1}  (1-based)
    let h = |r: usize, c: usize| a[(r - 1) * n + (c - 1)];
    let mut polys: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    polys.push(vec![one]);
    for m in 1..=n {
        let prev = &polys[m - 1];
        let mut cur = vec![0u64; m + 1];
        let hmm = h(m, m);
        for (k, &c) in prev.iter().enumerate() {
            cur[k + 1] = mt.add(cur[k + 1], c);
            cur[k] = mt.sub(cur[k], mt.mul(hmm, c));
        }
        let mut t = one;
        for i in 1..m {
            t = mt.mul(t, h(m - i + 1, m - i));
            if t == 0 {
                break;
            }
            let coef = mt.mul(t, h(m - i, m));
            if coef == 0 {
                continue;
            }
            for (k, &c) in polys[m - i - 1].iter().enumerate() {
                cur[k] = mt.sub(cur[k], mt.mul(coef, c));
            }
        }
        polys.push(cur);
    }
    polys.pop().unwrap().into_iter().map(|c| mt.leave_mont(c)).collect()
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    let mt = Mont::new(p);
    mt.leave_mont(mt.inv(mt.to_mont(a)))
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &b in &BASES {
        let mut x = powmod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Largest odd prime `<= n`.
fn prev_prime(mut n: u64) -> u64 {
    if n.is_multiple_of(2) {
        n -= 1;
    }
    while !is_prime_u64(n) {
        n -= 2;
    }
    n
}

/// Outcome of [`cospectral`]; a size mismatch is a negative answer, not an error.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CospectralReport {
    pub cospectral: bool,
    pub detail: Option<String>,
}

pub fn cospectral<A, B>(g: &Graph<A>, h: &Graph<B>, budget: usize) -> Result<CospectralReport> {
    if g.n() != h.n() {
        return Ok(CospectralReport {
            cospectral: false,
            detail: Some(format!("vertex counts differ: {} vs {}", g.n(), h.n())),
        });
    }
    let (pg, ph) = (char_poly(g, budget)?, char_poly(h, budget)?);
    if pg == ph {
        return Ok(CospectralReport { cospectral: true, detail: None });
    }
    let k = (0..=pg.degree()).rev().find(|&k| pg.coeff(k) != ph.coeff(k)).unwrap();
    Ok(CospectralReport {
        cospectral: false,
        detail: Some(format!("coefficients of x^{k} differ: {} vs {}", pg.coeff(k), ph.coeff(k))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    /// Faddeev-LeVerrier over exact integers: M_1 = I, c_{n-k} = -tr(A M_k)/k,
    /// M_{k+1} = A M_k + c_{n-k} I. Independent of the modular path.
    fn faddeev_leverrier<L>(g: &Graph<L>) -> CharPoly {
        let n = g.n();
        let a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from(g.adjacent(i, j) as u8)).collect())
            .collect();
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from((i == j) as u8)).collect())
            .collect();
        for k in 1..=n {
            let am: Vec<Vec<BigInt>> = (0..n)
                .map(|i| (0..n).map(|j| (0..n).map(|l| &a[i][l] * &m[l][j]).sum()).collect())
                .collect();
            let tr: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
            let c = -tr / BigInt::from(k);
            coeffs[n - k] = c.clone();
            m = am;
            for i in 0..n {
                m[i][i] += &c;
            }
        }
        CharPoly::from_coeffs(coeffs)
    }

    fn cycle(n: usize) -> Graph<usize> {
        build_graph((0..n).collect(), |&a, &b| (a + 1) % n == b || (b + 1) % n == a).unwrap()
    }

    #[test]
    fn k3_closed_form() {
        let k3 = build_graph(vec![0, 1, 2], |_, _| true).unwrap();
        let p = char_poly(&k3, 10).unwrap();
        assert_eq!(p, CharPoly::from_roots(&[(2, 1), (-1, 2)]));
        assert_eq!(p.to_string(), "x^3 - 3x - 2");
    }

    #[test]
    fn edgeless_is_monomial() {
        let g = build_graph((0..7).collect(), |_, _| false).unwrap();
        let p = char_poly(&g, 10).unwrap();
        assert_eq!(p.to_string(), "x^7");
    }

    #[test]
    fn budget_enforced() {
        let g = cycle(12);
        assert!(matches!(char_poly(&g, 11), Err(Error::Budget { .. })));
    }

    #[test]
    fn matches_faddeev_leverrier_on_small_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for trial in 0..40 {
            let n = 2 + trial % 11;
            let density: f64 = rng.random_range(0.1..0.9);
            let edges: Vec<bool> = (0..n * n).map(|_| rng.random_bool(density)).collect();
            let g = build_graph((0..n).collect(), |&a, &b| {
                let (i, j) = if a < b { (a, b) } else { (b, a) };
                edges[i * n + j]
            })
            .unwrap();
            let p = char_poly(&g, 100).unwrap();
            assert_eq!(p, faddeev_leverrier(&g), "trial {trial}");
            assert!(p.coeff(n - 1).is_zero());
            assert_eq!(p.coeff(n - 2), &BigInt::from(-(g.edge_count() as i64)));
        }
    }

    #[test]
    fn cycles_have_known_spectra() {
        // C6: eigenvalues 2, 1, 1, -1, -1, -2
        let p = char_poly(&cycle(6), 100).unwrap();
        assert_eq!(p, CharPoly::from_roots(&[(2, 1), (1, 2), (-1, 2), (-2, 1)]));
        assert_eq!(p.integer_roots(6), (vec![(2, 1), (1, 2), (-1, 2), (-2, 1)], 0));
        // C5 has irrational eigenvalues: only the root 2 splits off.
        let p5 = char_poly(&cycle(5), 100).unwrap();
        assert_eq!(p5.integer_roots(5), (vec![(2, 1)], 4));
    }

    #[test]
    fn cospectral_reports() {
        let k3 = build_graph(vec![0, 1, 2], |_, _| true).unwrap();
        let p3 = build_graph(vec![0, 1, 2], |&a: &i32, &b: &i32| (a - b).abs() == 1).unwrap();
        assert!(cospectral(&k3, &k3, 10).unwrap().cospectral);
        let r = cospectral(&k3, &p3, 10).unwrap();
        assert!(!r.cospectral && r.detail.is_some());
        let r = cospectral(&k3, &cycle(4), 10).unwrap();
        assert!(!r.cospectral);
        // the classic cospectral pair K_{1,4} and C4 + K1
        let star = build_graph((0..5).collect(), |&a: &usize, &b: &usize| a == 0 || b == 0).unwrap();
        let c4k1 = build_graph((0..5).collect(), |&a: &usize, &b: &usize| {
            a < 4 && b < 4 && ((a + 1) % 4 == b || (b + 1) % 4 == a)
        })
        .unwrap();
        assert!(cospectral(&star, &c4k1, 10).unwrap().cospectral);
    }

    #[test]
    fn primes_are_prime() {
        assert!(is_prime_u64(2305843009213693951)); // 2^61 - 1
        assert!(!is_prime_u64(2305843009213693953));
        let p = prev_prime((1 << 62) - 1);
        assert!(is_prime_u64(p) && p < 1 << 62);
        let m = Mont::new(p);
        let (a, b) = (123456789012345u64, 987654321098765u64);
        assert_eq!(m.leave_mont(m.mul(m.to_mont(a), m.to_mont(b))), mulmod(a, b, p));
        assert_eq!(mulmod(mod_inverse(a, p), a, p), 1);
    }
}
