//! Donaldson-Thomas type invariants from finite-field point counts.
//!
//! For a dimension vector `a` and stability `theta`,
//! `A_a = (-s)^{T(a)} (S - q S_0) / (1 - q)` where `S` is the stack count of
//! semistable points and `S_0` the same count restricted to `w(M) = 0`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cyclo::{Coef, CoefRing};
use crate::error::Result;
use crate::hall::slopes_within;
use crate::quiver::{is_generic, rational_string, slope_unchecked, DimVector, Potential, Rational, StabilityParam};
use crate::qtorus::QTorusSeries;
use crate::rep::RepContext;

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(r))
}

/// Everything that enters one invariant, so it can be rechecked from the report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DTRecord {
    pub alpha: DimVector,
    pub semistable: u64,
    pub semistable_w0: u64,
    pub gl_order: String,
    #[serde(serialize_with = "ser_rational")]
    pub stack: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub stack_w0: Rational,
    pub tits: i64,
    pub value: Coef,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DTReport {
    pub q: u32,
    pub theta: Vec<String>,
    pub bound: DimVector,
    pub records: Vec<DTRecord>,
}

fn combine(ring: CoefRing, tits: i64, stack: &Rational, stack_w0: &Rational) -> Result<Coef> {
    let q = ring.q_value();
    let numer = stack - &q * stack_w0;
    ring.neg_s_pow(tits).scale(&numer).div_rational(&(Rational::one() - q))
}

pub fn dt_record(ctx: &RepContext, w: &Potential, a: &DimVector, theta: &StabilityParam) -> Result<DTRecord> {
    let ring = ctx.field().coef_ring();
    let tits = ctx.quiver().tits_form(a)?;
    let counts = ctx.point_counts(a, theta, w)?;
    let gl = BigInt::from(counts.gl_order.clone());
    let stack = Rational::new(BigInt::from(counts.semistable), gl.clone());
    let stack_w0 = Rational::new(BigInt::from(counts.semistable_w0), gl);
    let value = if a.is_zero() {
        ring.one()
    } else {
        combine(ring, tits, &stack, &stack_w0)?
    };
    Ok(DTRecord {
        alpha: a.clone(),
        semistable: counts.semistable,
        semistable_w0: counts.semistable_w0,
        gl_order: counts.gl_order.to_string(),
        stack,
        stack_w0,
        tits,
        value,
    })
}

/// `A_a^theta` from raw point counts; `1` for `a = 0`.
pub fn dt_invariant(ctx: &RepContext, w: &Potential, a: &DimVector, theta: &StabilityParam) -> Result<Coef> {
    Ok(dt_record(ctx, w, a, theta)?.value)
}

/// The same invariant summed over isomorphism classes with `1 / #Aut`.
pub fn dt_invariant_via_classes(
    ctx: &RepContext,
    w: &Potential,
    a: &DimVector,
    theta: &StabilityParam,
) -> Result<Coef> {
    let ring = ctx.field().coef_ring();
    if a.is_zero() {
        return Ok(ring.one());
    }
    let mut stack = Rational::zero();
    let mut stack_w0 = Rational::zero();
    for m in ctx.classes(a)? {
        if !theta.is_constant() && !ctx.is_semistable(&m, theta)? {
            continue;
        }
        let inv = Rational::new(BigInt::one(), BigInt::from(ctx.aut_order(&m)?));
        if ctx.potential_trace(&m, w).is_zero() {
            stack_w0 += &inv;
        }
        stack += inv;
    }
    combine(ring, ctx.quiver().tits_form(a)?, &stack, &stack_w0)
}

pub fn dt_report(ctx: &RepContext, w: &Potential, theta: &StabilityParam, bound: &DimVector) -> Result<DTReport> {
    let records = bound
        .sub_vectors()
        .into_iter()
        .filter(|a| !a.is_zero())
        .map(|a| dt_record(ctx, w, &a, theta))
        .collect::<Result<Vec<_>>>()?;
    Ok(DTReport {
        q: ctx.q(),
        theta: theta.to_strings(),
        bound: bound.clone(),
        records,
    })
}

/// `sum A_a x^a` over nonzero `a <= bound` of slope `mu`.
pub fn dt_series(
    ctx: &RepContext,
    w: &Potential,
    mu: &Rational,
    theta: &StabilityParam,
    bound: &DimVector,
) -> Result<QTorusSeries> {
    let mut out = QTorusSeries::zero(ctx.quiver(), ctx.field().coef_ring(), bound.clone());
    for a in bound.sub_vectors() {
        if !a.is_zero() && &slope_unchecked(theta, &a) == mu {
            out.add_term(a.clone(), dt_invariant(ctx, w, &a, theta)?);
        }
    }
    Ok(out)
}

/// `1 + sum_a A_a^0 x^a` up to the bound.
pub fn full_series(ctx: &RepContext, w: &Potential, bound: &DimVector) -> Result<QTorusSeries> {
    let theta = StabilityParam::zero(ctx.quiver().num_vertices());
    let mut out = QTorusSeries::zero(ctx.quiver(), ctx.field().coef_ring(), bound.clone());
    for a in bound.sub_vectors() {
        out.add_term(a.clone(), dt_invariant(ctx, w, &a, &theta)?);
    }
    Ok(out)
}

/// Ordered tuples of nonzero vectors summing to `a` whose proper prefix sums
/// all have slope strictly above that of `a`.
pub fn admissible_tuples(a: &DimVector, theta: &StabilityParam) -> Vec<Vec<DimVector>> {
    fn extend(
        a: &DimVector,
        theta: &StabilityParam,
        mu: &Rational,
        prefix: &DimVector,
        tuple: &mut Vec<DimVector>,
        out: &mut Vec<Vec<DimVector>>,
    ) {
        let rest = a.checked_sub(prefix).expect("prefix stays below target");
        for b in rest.sub_vectors() {
            if b.is_zero() {
                continue;
            }
            let next = prefix.add(&b);
            tuple.push(b);
            if &next == a {
                out.push(tuple.clone());
            } else if &slope_unchecked(theta, &next) > mu {
                extend(a, theta, mu, &next, tuple, out);
            }
            tuple.pop();
        }
    }
    let mut out = Vec::new();
    if a.is_zero() {
        return out;
    }
    let mu = slope_unchecked(theta, a);
    extend(a, theta, &mu, &DimVector::zero(a.len()), &mut Vec::new(), &mut out);
    out
}

/// `A_a^theta` assembled from the `theta = 0` invariants over admissible tuples.
pub fn wall_crossing_solve(ctx: &RepContext, w: &Potential, a: &DimVector, theta: &StabilityParam) -> Result<Coef> {
    let ring = ctx.field().coef_ring();
    if a.is_zero() {
        return Ok(ring.one());
    }
    let zero = StabilityParam::zero(a.len());
    let mut base: BTreeMap<DimVector, Coef> = BTreeMap::new();
    let mut total = ring.zero();
    for tuple in admissible_tuples(a, theta) {
        let mut term = if tuple.len() % 2 == 1 { ring.one() } else { ring.integer(-1) };
        let mut twist = 0;
        for (i, x) in tuple.iter().enumerate() {
            for y in &tuple[i + 1..] {
                twist += ctx.quiver().skew_form_unchecked(x, y);
            }
            if !base.contains_key(x) {
                base.insert(x.clone(), dt_invariant(ctx, w, x, &zero)?);
            }
            term = &term * &base[x];
        }
        total = &total + &(&term * &ring.neg_s_pow(twist));
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HnDegree {
    pub alpha: DimVector,
    pub full: Coef,
    pub product: Coef,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HnReport {
    pub pass: bool,
    pub slopes: Vec<String>,
    pub degrees: Vec<HnDegree>,
}

/// Compares the `theta = 0` series with the slope-ordered product of
/// `1 + A_mu^theta`, highest slope first, in every degree up to the bound.
pub fn hn_check(ctx: &RepContext, w: &Potential, theta: &StabilityParam, bound: &DimVector) -> Result<HnReport> {
    let full = full_series(ctx, w, bound)?;
    let ring = ctx.field().coef_ring();
    let mut product = QTorusSeries::one(ctx.quiver(), ring, bound.clone());
    let mut slopes = Vec::new();
    for (mu, _) in slopes_within(theta, bound) {
        let factor = QTorusSeries::one(ctx.quiver(), ring, bound.clone()).add(&dt_series(ctx, w, &mu, theta, bound)?);
        product = product.twisted_mul(&factor);
        slopes.push(rational_string(&mu));
    }
    let degrees: Vec<HnDegree> = bound
        .sub_vectors()
        .into_iter()
        .map(|a| {
            let lhs = full.coefficient(&a);
            let rhs = product.coefficient(&a);
            HnDegree {
                equal: lhs == rhs,
                alpha: a,
                full: lhs,
                product: rhs,
            }
        })
        .collect();
    Ok(HnReport {
        pass: degrees.iter().all(|d| d.equal),
        slopes,
        degrees,
    })
}

/// When `theta` is `a`-generic, every semistable point of dimension `a` is stable.
pub fn generic_points_are_stable(ctx: &RepContext, a: &DimVector, theta: &StabilityParam) -> Result<bool> {
    if a.is_zero() || !is_generic(theta, a)? {
        return Ok(true);
    }
    for m in ctx.points(a)? {
        if ctx.is_semistable(&m, theta)? && !ctx.is_stable(&m, theta)? {
            return Ok(false);
        }
    }
    Ok(true)
}
