//! The Hall algebra of quiver representations over `F_q`.
//!
//! The product follows the convention in which the first factor is the
//! subobject: `[N] * [M] = sum_X F^X_{MN} [X]` where `F^X_{MN}` counts
//! subrepresentations `U <= X` with `U ~ N` and `X/U ~ M`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::error::Result;
use crate::ffield::FieldElem;
use crate::quiver::{slope_unchecked, DimVector, Potential, Rational, StabilityParam, WeightFunction};
use crate::rep::{RepContext, Representation};

/// A finitely supported rational combination of isomorphism classes, keyed by
/// canonical forms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HallElement {
    terms: BTreeMap<Representation, Rational>,
}

impl HallElement {
    pub fn zero() -> Self {
        HallElement::default()
    }

    /// The class of the zero representation.
    pub fn unit(ctx: &RepContext) -> Self {
        let zero = Representation::zero(ctx.quiver(), DimVector::zero(ctx.quiver().num_vertices()));
        let mut f = HallElement::zero();
        f.terms.insert(zero, Rational::one());
        f
    }

    /// `[M]`, stored under the canonical form of `m`.
    pub fn class(ctx: &RepContext, m: &Representation) -> Result<Self> {
        let mut f = HallElement::zero();
        f.add_term(ctx.canonical_form(m)?, Rational::one());
        Ok(f)
    }

    /// Adds `c [m]`; `m` must already be canonical.
    pub fn add_term(&mut self, m: Representation, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn coefficient(&self, m: &Representation) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Representation, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degrees(&self) -> BTreeSet<DimVector> {
        self.terms.keys().map(|m| m.dims().clone()).collect()
    }

    pub fn degree_part(&self, a: &DimVector) -> HallElement {
        self.filter(|m| m.dims() == a)
    }

    pub fn filter(&self, keep: impl Fn(&Representation) -> bool) -> HallElement {
        HallElement {
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn add(&self, other: &HallElement) -> HallElement {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> HallElement {
        if c.is_zero() {
            return HallElement::zero();
        }
        HallElement {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }
}

/// `f * g`, with `f` indexing subobjects and `g` quotients.
pub fn hall_product(ctx: &RepContext, f: &HallElement, g: &HallElement) -> Result<HallElement> {
    hall_product_truncated(ctx, f, g, None)
}

/// `f * g`, keeping only degrees `<= bound` when a bound is given.
pub fn hall_product_truncated(
    ctx: &RepContext,
    f: &HallElement,
    g: &HallElement,
    bound: Option<&DimVector>,
) -> Result<HallElement> {
    let f_degrees = f.degrees();
    let g_degrees = g.degrees();
    let mut targets: BTreeSet<DimVector> = BTreeSet::new();
    for b in &f_degrees {
        for c in &g_degrees {
            let d = b.add(c);
            if bound.is_none_or(|bd| d.le(bd)) {
                targets.insert(d);
            }
        }
    }
    let mut out = HallElement::zero();
    for total in targets {
        let splits: Vec<&DimVector> = f_degrees
            .iter()
            .filter(|b| total.checked_sub(b).is_some_and(|c| g_degrees.contains(&c)))
            .collect();
        for x in ctx.classes(&total)? {
            let mut coefficient = Rational::zero();
            for b in &splits {
                for u in ctx.subrepresentations_of_dim(&x, b) {
                    let sub = ctx.canonical_form(&ctx.restrict(&x, &u)?)?;
                    let a = f.coefficient(&sub);
                    if a.is_zero() {
                        continue;
                    }
                    let quot = ctx.canonical_form(&ctx.quotient_rep(&x, &u)?)?;
                    let c = g.coefficient(&quot);
                    if !c.is_zero() {
                        coefficient += a * c;
                    }
                }
            }
            out.add_term(x, coefficient);
        }
    }
    Ok(out)
}

/// Restriction of `f` to classes with `w(M) = t`.
pub fn slice(ctx: &RepContext, f: &HallElement, t: FieldElem, w: &Potential) -> HallElement {
    f.filter(|m| ctx.potential_trace(m, w) == t)
}

/// Sum of the semistable classes of dimension `a`, each with coefficient one.
/// For `a = 0` this is the unit.
pub fn tilde_a(ctx: &RepContext, a: &DimVector, theta: &StabilityParam) -> Result<HallElement> {
    if a.is_zero() {
        return Ok(HallElement::unit(ctx));
    }
    let mut out = HallElement::zero();
    for m in ctx.classes(a)? {
        if theta.is_constant() || ctx.is_semistable(&m, theta)? {
            out.add_term(m, Rational::one());
        }
    }
    Ok(out)
}

/// Nonzero dimension vectors `<= bound`, grouped by slope, slopes decreasing.
pub fn slopes_within(theta: &StabilityParam, bound: &DimVector) -> Vec<(Rational, Vec<DimVector>)> {
    let mut by_slope: BTreeMap<Rational, Vec<DimVector>> = BTreeMap::new();
    for a in bound.sub_vectors().into_iter().filter(|a| !a.is_zero()) {
        by_slope.entry(slope_unchecked(theta, &a)).or_default().push(a);
    }
    by_slope.into_iter().rev().collect()
}

/// Semistable classes of slope `mu` up to `bound`, plus the unit.
pub fn tilde_a_slope(
    ctx: &RepContext,
    mu: &Rational,
    theta: &StabilityParam,
    bound: &DimVector,
) -> Result<HallElement> {
    let mut out = HallElement::unit(ctx);
    for (nu, dims) in slopes_within(theta, bound) {
        if &nu != mu {
            continue;
        }
        for a in dims {
            out = out.add(&tilde_a(ctx, &a, theta)?);
        }
    }
    Ok(out)
}

/// Ordered product of the slope pieces, highest slope on the left, truncated
/// at `bound`.
pub fn hn_product(ctx: &RepContext, theta: &StabilityParam, bound: &DimVector) -> Result<HallElement> {
    let mut acc = HallElement::unit(ctx);
    for (mu, _) in slopes_within(theta, bound) {
        let factor = tilde_a_slope(ctx, &mu, theta, bound)?;
        acc = hall_product_truncated(ctx, &acc, &factor, Some(bound))?;
    }
    Ok(acc)
}

/// Distinct classes `[tM]`, `t` in `F_q^*`.
pub fn scaling_orbit(ctx: &RepContext, m: &Representation, wt: &WeightFunction) -> Result<Vec<Representation>> {
    let mut out = BTreeSet::new();
    for t in ctx.field().units() {
        out.insert(ctx.canonical_form(&ctx.scale(m, t, wt)?)?);
    }
    Ok(out.into_iter().collect())
}

/// Sum of the distinct classes in the scaling orbit of `m`.
pub fn orbit_sum(ctx: &RepContext, m: &Representation, wt: &WeightFunction) -> Result<HallElement> {
    let mut f = HallElement::zero();
    for c in scaling_orbit(ctx, m, wt)? {
        f.add_term(c, Rational::one());
    }
    Ok(f)
}

/// Coefficients constant along scaling orbits.
pub fn is_equivariant(ctx: &RepContext, f: &HallElement, wt: &WeightFunction) -> Result<bool> {
    for (m, c) in f.iter() {
        for other in scaling_orbit(ctx, m, wt)? {
            if &f.coefficient(&other) != c {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
