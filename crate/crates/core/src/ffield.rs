//! Finite fields `F_q`, `q = p^e`, given as `F_p[t] / (f)` with `f` monic
//! irreducible of degree `e`.
//!
//! Elements are encoded as integers `0 <= x < q`: the coefficient of `t^i` is
//! the `i`-th base-`p` digit. The encoding is canonical, so equality and
//! ordering of [`FieldElem`] are those of the integer. All operations go through
//! precomputed tables.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::cyclo::{Coef, CoefRing};
use crate::error::{budget, Error, Result};
use crate::linalg::Mat;
use crate::quiver::DimVector;

/// Largest field order supported by the table-driven arithmetic.
pub const MAX_FIELD_ORDER: u32 = 256;

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(pub u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug)]
pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for Field {}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2u64..).take_while(|d| d * d <= n as u64).all(|d| !(n as u64).is_multiple_of(d))
}

/// Writes `q = p^e` with `p` prime.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

/// Remainder of `a` modulo the monic `m` over `F_p`; coefficients low to high.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, c) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - lead) * c) % p;
            }
        }
        r.pop();
    }
    r
}

fn digits(mut k: u32, p: u32, len: usize) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = k % p;
            k /= p;
            d
        })
        .collect()
}

/// Brute-force irreducibility test: no monic factor of degree `1..=deg/2`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len().saturating_sub(1);
    if deg == 0 || poly[deg] != 1 {
        return false;
    }
    for d in 1..=deg / 2 {
        for k in 0..p.pow(d as u32) {
            let mut factor = digits(k, p, d);
            factor.push(1);
            if poly_rem(poly, &factor, p).iter().all(|c| *c == 0) {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// The field with `q` elements. For `q = p^e`, `e > 1`, the modulus is the
    /// first monic irreducible polynomial in the order of its coefficient
    /// vector read as a base-`p` number (constant term least significant).
    pub fn new(q: u32) -> Result<Self> {
        if q > MAX_FIELD_ORDER {
            return Err(Error::InvalidField(format!("field order above {MAX_FIELD_ORDER} unsupported")));
        }
        let (p, e) = prime_power(q).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        if e == 1 {
            return Field::with_modulus(p, &[0, 1]);
        }
        let modulus = (0..q)
            .map(|k| {
                let mut m = digits(k, p, e as usize);
                m.push(1);
                m
            })
            .find(|m| is_irreducible(m, p))
            .expect("irreducible polynomials exist in every degree");
        Field::with_modulus(p, &modulus)
    }

    /// `modulus` lists the coefficients of a monic polynomial, constant term
    /// first. For prime fields use `[0, 1]`.
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if modulus.iter().any(|c| *c >= p) {
            return Err(Error::InvalidField("modulus coefficients must lie in 0..p".into()));
        }
        if modulus.len() < 2 || modulus.last() != Some(&1) {
            return Err(Error::InvalidField("modulus must be monic of degree at least one".into()));
        }
        let e = (modulus.len() - 1) as u32;
        let q = p
            .checked_pow(e)
            .filter(|q| *q <= MAX_FIELD_ORDER)
            .ok_or_else(|| Error::InvalidField(format!("field order above {MAX_FIELD_ORDER} unsupported")))?;
        if !is_irreducible(modulus, p) {
            return Err(Error::InvalidField(format!("{modulus:?} is not monic irreducible over F_{p}")));
        }
        let n = q as usize;
        let el = |k: u32| digits(k, p, e as usize);
        let enc = |v: &[u32]| v.iter().rev().fold(0u32, |acc, d| acc * p + d);
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        let mut neg = vec![0; n];
        for a in 0..q {
            let da = el(a);
            neg[a as usize] = enc(&da.iter().map(|x| (p - x) % p).collect::<Vec<_>>());
            for b in 0..q {
                let db = el(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * n + b as usize] = enc(&sum);
                let mut prod = vec![0u32; 2 * e as usize - 1];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = poly_rem(&prod, modulus, p);
                r.resize(e as usize, 0);
                mul[a as usize * n + b as usize] = enc(&r);
            }
        }
        let mut inv = vec![0; n];
        for a in 1..q {
            inv[a as usize] = (1..q).find(|b| mul[a as usize * n + *b as usize] == 1).unwrap();
        }
        Ok(Field {
            p,
            e,
            q,
            modulus: modulus.to_vec(),
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(FieldElem)
    }

    pub fn units(&self) -> impl Iterator<Item = FieldElem> {
        (1..self.q).map(FieldElem)
    }

    /// Coefficients of `x` on `1, t, ..., t^{e-1}`.
    pub fn coeffs(&self, x: FieldElem) -> Vec<u32> {
        digits(x.0, self.p, self.e as usize)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<FieldElem> {
        if c.len() != self.e as usize || c.iter().any(|d| *d >= self.p) {
            return Err(Error::Invalid(format!("{c:?} is not an element of F_{}", self.q)));
        }
        Ok(FieldElem(c.iter().rev().fold(0, |acc, d| acc * self.p + d)))
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn elem(&self, index: u32) -> Result<FieldElem> {
        if index < self.q {
            Ok(FieldElem(index))
        } else {
            Err(Error::Invalid(format!("{index} is not an element of F_{}", self.q)))
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.add[(a.0 * self.q + b.0) as usize])
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(self.mul[(a.0 * self.q + b.0) as usize])
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(FieldElem(self.inv[a.0 as usize]))
    }

    pub fn pow(&self, a: FieldElem, mut n: u64) -> FieldElem {
        let mut base = a;
        let mut acc = FieldElem::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// Absolute trace `x + x^p + ... + x^{p^{e-1}}`, as an integer in `0..p`.
    pub fn trace_to_prime(&self, x: FieldElem) -> u32 {
        let mut acc = FieldElem::ZERO;
        let mut y = x;
        for _ in 0..self.e {
            acc = self.add(acc, y);
            y = self.pow(y, self.p as u64);
        }
        debug_assert!(acc.0 < self.p);
        acc.0
    }

    /// The coefficient ring matching this field's characteristic and order.
    pub fn coef_ring(&self) -> CoefRing {
        CoefRing::new(self.p, self.q as u64)
    }

    /// `psi(x) = zeta_p^{Tr(x)}`.
    pub fn additive_character(&self, x: FieldElem) -> Coef {
        self.coef_ring().zeta_pow(self.trace_to_prime(x) as i64)
    }
}

/// `|GL_a(F_q)| = prod_i prod_{k < a_i} (q^{a_i} - q^k)`.
pub fn gl_order(a: &DimVector, q: u32) -> BigUint {
    let q = BigUint::from(q);
    let mut order = BigUint::one();
    for &n in &a.0 {
        let qn = num_traits::pow(q.clone(), n as usize);
        for k in 0..n {
            order *= &qn - num_traits::pow(q.clone(), k as usize);
        }
    }
    order
}

/// Gaussian binomial coefficient `[n choose d]_q`.
pub fn gaussian_binomial(n: u32, d: u32, q: u32) -> BigUint {
    if d > n {
        return BigUint::from(0u32);
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..d {
        num *= num_traits::pow(q.clone(), (n - i) as usize) - BigUint::one();
        den *= num_traits::pow(q.clone(), (i + 1) as usize) - BigUint::one();
    }
    num / den
}

/// A subspace of `F_q^n`, stored as its reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    basis: Mat,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace {
            basis: Mat::zero(0, n),
            pivots: Vec::new(),
        }
    }

    pub fn full(n: usize) -> Self {
        Subspace {
            basis: Mat::identity(n),
            pivots: (0..n).collect(),
        }
    }

    /// Span of the rows of `m`.
    pub fn row_span(field: &Field, m: &Mat) -> Self {
        let (r, pivots) = m.rref(field);
        let basis = r.take_rows(pivots.len());
        Subspace { basis, pivots }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    /// Basis vectors as rows, in reduced row echelon form.
    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Standard coordinates not among the pivots; the matching unit vectors
    /// span a complement.
    pub fn non_pivots(&self) -> Vec<usize> {
        (0..self.ambient_dim()).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Clears the pivot coordinates of `v` using the basis. The result is zero
    /// iff `v` lies in the subspace.
    pub fn reduce(&self, field: &Field, v: &mut [FieldElem]) {
        for (row, &pc) in self.pivots.iter().enumerate() {
            let c = v[pc];
            if c.is_zero() {
                continue;
            }
            for (j, x) in v.iter_mut().enumerate() {
                let b = self.basis.get(row, j);
                if !b.is_zero() {
                    *x = field.sub(*x, field.mul(c, b));
                }
            }
        }
    }

    pub fn contains(&self, field: &Field, v: &[FieldElem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(field, &mut w);
        w.iter().all(|x| x.is_zero())
    }

    /// Coordinates of a vector of the subspace on the echelon basis.
    pub fn coordinates(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        self.pivots.iter().map(|&c| v[c]).collect()
    }
}

/// All `d`-dimensional subspaces of `F_q^n`, each exactly once.
pub fn enumerate_subspaces(field: &Field, n: usize, d: usize) -> Vec<Subspace> {
    let mut out = Vec::new();
    if d > n {
        return out;
    }
    let q = field.order();
    let mut pivots: Vec<usize> = (0..d).collect();
    loop {
        // free slots: row r, column c > pivots[r], c not a pivot
        let free: Vec<(usize, usize)> = (0..d)
            .flat_map(|r| {
                let pivots = &pivots;
                (pivots[r] + 1..n).filter(move |c| !pivots.contains(c)).map(move |c| (r, c))
            })
            .collect();
        let mut counter = vec![0u32; free.len()];
        loop {
            let mut m = Mat::zero(d, n);
            for (r, &pc) in pivots.iter().enumerate() {
                m.set(r, pc, FieldElem::ONE);
            }
            for (&(r, c), &v) in free.iter().zip(&counter) {
                m.set(r, c, FieldElem(v));
            }
            out.push(Subspace {
                basis: m,
                pivots: pivots.clone(),
            });
            // odometer over the free entries
            let mut i = 0;
            while i < counter.len() {
                counter[i] += 1;
                if counter[i] < q {
                    break;
                }
                counter[i] = 0;
                i += 1;
            }
            if i == counter.len() {
                break;
            }
        }
        // next pivot combination
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] < n - d + i {
                pivots[i] += 1;
                for j in i + 1..d {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// An element of `prod_i GL_{a_i}`, with inverses alongside.
#[derive(Clone, Debug)]
pub struct GlElement {
    pub blocks: Vec<Mat>,
    pub inverses: Vec<Mat>,
}

/// All invertible `n x n` matrices, built row by row.
fn invertible_matrices(field: &Field, n: usize) -> Vec<Mat> {
    let q = field.order() as usize;
    let vectors: Vec<Vec<FieldElem>> = (0..q.pow(n as u32))
        .map(|k| digits(k as u32, q as u32, n).into_iter().rev().map(FieldElem).collect())
        .collect();
    let mut partial: Vec<Vec<Vec<FieldElem>>> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for rows in &partial {
            let span = Subspace::row_span(field, &Mat::from_rows(rows, n));
            for v in &vectors {
                if !span.contains(field, v) {
                    let mut r = rows.clone();
                    r.push(v.clone());
                    next.push(r);
                }
            }
        }
        partial = next;
    }
    partial.iter().map(|rows| Mat::from_rows(rows, n)).collect()
}

/// Every element of `prod_i GL_{a_i}(F_q)` exactly once, in a fixed order.
pub fn enumerate_gl(field: &Field, a: &DimVector, limit: u64) -> Result<Vec<GlElement>> {
    let order = gl_order(a, field.order());
    if order > BigUint::from(limit) {
        return Err(budget("general linear group", order, limit));
    }
    let per_vertex: Vec<Vec<(Mat, Mat)>> = a
        .0
        .iter()
        .map(|&n| {
            invertible_matrices(field, n as usize)
                .into_iter()
                .map(|g| {
                    let inv = g.inverse(field).expect("matrix is invertible");
                    (g, inv)
                })
                .collect()
        })
        .collect();
    let mut out = vec![GlElement {
        blocks: Vec::new(),
        inverses: Vec::new(),
    }];
    for choices in per_vertex {
        let mut next = Vec::with_capacity(out.len() * choices.len());
        for g in &out {
            for (m, inv) in &choices {
                let mut h = g.clone();
                h.blocks.push(m.clone());
                h.inverses.push(inv.clone());
                next.push(h);
            }
        }
        out = next;
    }
    Ok(out)
}
