//! Truncated quantum torus series and the integration maps out of the Hall
//! algebra.
//!
//! A series is a finite sum of `c_a x^a` with `a` componentwise below a fixed
//! bound. Anything that would land above the bound is dropped, so products of
//! truncated series are exact in every degree they keep.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use serde::ser::{SerializeMap, SerializeStruct, Serializer};
use serde::Serialize;

use crate::cyclo::{Coef, CoefRing};
use crate::error::{Error, Result};
use crate::ffield::FieldElem;
use crate::hall::{is_equivariant, slice, HallElement};
use crate::quiver::{DimVector, Potential, Quiver, Rational, WeightFunction};
use crate::rep::{RepContext, Representation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QTorusSeries {
    quiver: Quiver,
    ring: CoefRing,
    bound: DimVector,
    terms: BTreeMap<DimVector, Coef>,
}

impl QTorusSeries {
    pub fn zero(quiver: &Quiver, ring: CoefRing, bound: DimVector) -> Self {
        assert_eq!(bound.len(), quiver.num_vertices(), "bound has wrong length");
        QTorusSeries {
            quiver: quiver.clone(),
            ring,
            bound,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(quiver: &Quiver, ring: CoefRing, bound: DimVector) -> Self {
        let mut s = QTorusSeries::zero(quiver, ring, bound);
        s.add_term(DimVector::zero(quiver.num_vertices()), ring.one());
        s
    }

    pub fn monomial(quiver: &Quiver, bound: DimVector, a: DimVector, c: Coef) -> Self {
        let mut s = QTorusSeries::zero(quiver, c.ring(), bound);
        s.add_term(a, c);
        s
    }

    pub fn ring(&self) -> CoefRing {
        self.ring
    }

    pub fn bound(&self) -> &DimVector {
        &self.bound
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    /// Adds `c x^a`; silently ignored when `a` exceeds the bound.
    pub fn add_term(&mut self, a: DimVector, c: Coef) {
        if !a.le(&self.bound) || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&a) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&a);
                }
            }
            None => {
                self.terms.insert(a, c);
            }
        }
    }

    pub fn coefficient(&self, a: &DimVector) -> Coef {
        self.terms.get(a).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DimVector, &Coef)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_compatible(&self, other: &QTorusSeries) {
        assert_eq!(self.ring, other.ring, "series over different rings");
        assert_eq!(self.bound, other.bound, "series with different bounds");
        assert_eq!(self.quiver, other.quiver, "series over different quivers");
    }

    pub fn add(&self, other: &QTorusSeries) -> QTorusSeries {
        self.check_compatible(other);
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &QTorusSeries) -> QTorusSeries {
        self.add(&other.scale(&self.ring.integer(-1)))
    }

    pub fn scale(&self, c: &Coef) -> QTorusSeries {
        let mut out = QTorusSeries::zero(&self.quiver, self.ring, self.bound.clone());
        for (a, v) in &self.terms {
            out.add_term(a.clone(), v * c);
        }
        out
    }

    pub fn div_rational(&self, r: &Rational) -> Result<QTorusSeries> {
        let mut out = QTorusSeries::zero(&self.quiver, self.ring, self.bound.clone());
        for (a, v) in &self.terms {
            out.add_term(a.clone(), v.div_rational(r)?);
        }
        Ok(out)
    }

    /// `x^a * x^b = (-s)^{<a,b>} x^{a+b}`, extended bilinearly.
    pub fn twisted_mul(&self, other: &QTorusSeries) -> QTorusSeries {
        self.check_compatible(other);
        let mut out = QTorusSeries::zero(&self.quiver, self.ring, self.bound.clone());
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let d = a.add(b);
                if !d.le(&self.bound) {
                    continue;
                }
                let twist = self.ring.neg_s_pow(self.quiver.skew_form_unchecked(a, b));
                out.add_term(d, &(x * y) * &twist);
            }
        }
        out
    }
}

impl Serialize for QTorusSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Terms<'a>(&'a BTreeMap<DimVector, Coef>);
        impl Serialize for Terms<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for (a, c) in self.0 {
                    m.serialize_entry(&a.to_string(), c)?;
                }
                m.end()
            }
        }
        let mut st = s.serialize_struct("QTorusSeries", 2)?;
        st.serialize_field("bound", &self.bound)?;
        st.serialize_field("terms", &Terms(&self.terms))?;
        st.end()
    }
}

/// `(-s)^{T(dim M)} / #Aut M`.
fn class_weight(ctx: &RepContext, m: &Representation, ring: CoefRing) -> Result<Coef> {
    let t = ctx.quiver().tits_form(m.dims())?;
    let aut = ctx.aut_order(m)?;
    ring.neg_s_pow(t).div_rational(&Rational::from_integer(BigInt::from(aut)))
}

fn integrate_with(
    ctx: &RepContext,
    f: &HallElement,
    bound: &DimVector,
    factor: impl Fn(&Representation) -> Coef,
) -> Result<QTorusSeries> {
    let ring = ctx.field().coef_ring();
    let mut out = QTorusSeries::zero(ctx.quiver(), ring, bound.clone());
    for (m, c) in f.iter() {
        if !m.dims().le(bound) {
            continue;
        }
        let v = class_weight(ctx, m, ring)?.scale(c);
        out.add_term(m.dims().clone(), &v * &factor(m));
    }
    Ok(out)
}

/// `[M] -> (-s)^{T(dim M)} / #Aut M x^{dim M}`.
pub fn integrate_i(ctx: &RepContext, f: &HallElement, bound: &DimVector) -> Result<QTorusSeries> {
    let one = ctx.field().coef_ring().one();
    integrate_with(ctx, f, bound, |_| one.clone())
}

/// `(I(f) - q I(f_0)) / (1 - q)`, defined for scaling-equivariant `f`.
pub fn integrate_ieq(
    ctx: &RepContext,
    f: &HallElement,
    w: &Potential,
    wt: &WeightFunction,
    bound: &DimVector,
) -> Result<QTorusSeries> {
    if !is_equivariant(ctx, f, wt)? {
        return Err(Error::NotEquivariant);
    }
    let q = ctx.field().coef_ring().q_value();
    let full = integrate_i(ctx, f, bound)?;
    let zero_part = integrate_i(ctx, &slice(ctx, f, FieldElem::ZERO, w), bound)?;
    full.sub(&zero_part.scale(&ctx.field().coef_ring().rational(q.clone())))
        .div_rational(&(Rational::one() - q))
}

/// `[M] -> psi(w(M)) I([M])`.
pub fn integrate_ipsi(ctx: &RepContext, f: &HallElement, w: &Potential, bound: &DimVector) -> Result<QTorusSeries> {
    let field = ctx.field();
    integrate_with(ctx, f, bound, |m| field.additive_character(ctx.potential_trace(m, w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::Field;
    use crate::hall::{hall_product, orbit_sum, tilde_a};
    use crate::linalg::Mat;
    use crate::quiver::StabilityParam;
    use crate::rep::Budget;

    fn ctx(quiver: Quiver, q: u32) -> RepContext {
        RepContext::new(quiver, Field::new(q).unwrap(), Budget::default())
    }

    fn a2(q: u32) -> RepContext {
        ctx(Quiver::new(["1", "2"], [("x", "1", "2")]).unwrap(), q)
    }

    fn jordan(q: u32) -> RepContext {
        ctx(Quiver::new(["1"], [("l", "1", "1")]).unwrap(), q)
    }

    fn d(v: &[u32]) -> DimVector {
        DimVector(v.to_vec())
    }

    fn jordan_class(c: &RepContext, v: u32) -> HallElement {
        let m = Representation::new(c.quiver(), d(&[1]), vec![Mat::from_entries(1, 1, vec![FieldElem(v)])]).unwrap();
        HallElement::class(c, &m).unwrap()
    }

    fn half(n: i64) -> Rational {
        Rational::new(n.into(), 2.into())
    }

    #[test]
    fn twisted_product() {
        let c = a2(2);
        let r = c.field().coef_ring();
        let b = d(&[1, 1]);
        let x10 = QTorusSeries::monomial(c.quiver(), b.clone(), d(&[1, 0]), r.one());
        let x01 = QTorusSeries::monomial(c.quiver(), b.clone(), d(&[0, 1]), r.one());
        assert_eq!(
            x10.twisted_mul(&x01),
            QTorusSeries::monomial(c.quiver(), b.clone(), d(&[1, 1]), r.neg_s_pow(-1))
        );
        assert_eq!(
            x01.twisted_mul(&x10),
            QTorusSeries::monomial(c.quiver(), b.clone(), d(&[1, 1]), r.neg_s_pow(1))
        );
        let one = QTorusSeries::one(c.quiver(), r, b);
        assert_eq!(one.twisted_mul(&x10), x10);
        assert!(x10.twisted_mul(&x10).is_zero());
    }

    #[test]
    fn integration_examples() {
        let c = a2(2);
        let r = c.field().coef_ring();
        let b = d(&[2, 2]);
        let s1 = Representation::zero(c.quiver(), d(&[1, 0]));
        let i = integrate_i(&c, &HallElement::class(&c, &s1).unwrap(), &b).unwrap();
        assert_eq!(i, QTorusSeries::monomial(c.quiver(), b.clone(), d(&[1, 0]), -r.s()));
        assert_eq!(integrate_i(&c, &HallElement::unit(&c), &b).unwrap(), QTorusSeries::one(c.quiver(), r, b.clone()));
        let stable = tilde_a(&c, &d(&[1, 1]), &StabilityParam::from_integers(&[1, 0])).unwrap();
        assert_eq!(
            integrate_i(&c, &stable, &b).unwrap(),
            QTorusSeries::monomial(c.quiver(), b, d(&[1, 1]), -r.s())
        );
    }

    #[test]
    fn jordan_cubic_examples() {
        let c = jordan(3);
        let r = c.field().coef_ring();
        let b = d(&[2]);
        let w = Potential::from_names(c.quiver(), &[(1, "l l l")]).unwrap();
        let wt = WeightFunction(vec![1]);
        let f = jordan_class(&c, 1).add(&jordan_class(&c, 2));
        let x = |v: Coef| QTorusSeries::monomial(c.quiver(), b.clone(), d(&[1]), v);
        assert_eq!(integrate_i(&c, &f, &b).unwrap(), x(r.one()));
        assert_eq!(integrate_ieq(&c, &f, &w, &wt, &b).unwrap(), x(r.rational(half(-1))));
        assert_eq!(integrate_ieq(&c, &jordan_class(&c, 0), &w, &wt, &b).unwrap(), x(r.rational(half(1))));
        assert_eq!(integrate_ipsi(&c, &f, &w, &b).unwrap(), x(r.rational(half(-1))));
        assert_eq!(integrate_ipsi(&c, &jordan_class(&c, 1), &w, &b).unwrap(), x(r.zeta_pow(1).scale(&half(1))));
        assert!(matches!(
            integrate_ieq(&c, &jordan_class(&c, 1), &w, &wt, &b),
            Err(Error::NotEquivariant)
        ));
        // zero potential: every element is its own zero slice
        assert_eq!(
            integrate_ieq(&c, &f, &Potential::zero(), &wt, &b).unwrap(),
            integrate_i(&c, &f, &b).unwrap()
        );
    }

    #[test]
    fn ipsi_is_multiplicative_on_jordan() {
        let c = jordan(3);
        let w = Potential::from_names(c.quiver(), &[(1, "l l l")]).unwrap();
        let b = d(&[2]);
        for u in 0..3 {
            for v in 0..3 {
                let f = jordan_class(&c, u);
                let g = jordan_class(&c, v);
                let lhs = integrate_ipsi(&c, &hall_product(&c, &f, &g).unwrap(), &w, &b).unwrap();
                let rhs = integrate_ipsi(&c, &f, &w, &b)
                    .unwrap()
                    .twisted_mul(&integrate_ipsi(&c, &g, &w, &b).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn slice_identity() {
        // I(f_t) = (I(f) - I(f_0)) / (q - 1) for t != 0
        let c = jordan(3);
        let w = Potential::from_names(c.quiver(), &[(1, "l l l")]).unwrap();
        let wt = WeightFunction(vec![1]);
        let b = d(&[2]);
        let q1 = Rational::from_integer(2.into());
        for m in c.classes(&d(&[1])).unwrap().into_iter().chain(c.classes(&d(&[2])).unwrap()) {
            let f = orbit_sum(&c, &m, &wt).unwrap();
            let full = integrate_i(&c, &f, &b).unwrap();
            let zero = integrate_i(&c, &slice(&c, &f, FieldElem::ZERO, &w), &b).unwrap();
            let expected = full.sub(&zero).div_rational(&q1).unwrap();
            for t in c.field().units() {
                assert_eq!(integrate_i(&c, &slice(&c, &f, t, &w), &b).unwrap(), expected);
            }
        }
    }

    #[test]
    fn json_shape() {
        let c = a2(2);
        let r = c.field().coef_ring();
        let s = QTorusSeries::monomial(c.quiver(), d(&[1, 1]), d(&[1, 0]), -r.s());
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["bound"], serde_json::json!([1, 1]));
        assert_eq!(v["terms"]["1,0"]["s"], serde_json::json!([0, -1]));
    }
}
