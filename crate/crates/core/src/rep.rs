//! Representations of a quiver over a finite field: enumeration of the
//! representation space, subrepresentations and quotients, isomorphism classes,
//! automorphism groups, stability, point counts and Hall numbers.
//!
//! All computations go through a [`RepContext`], which fixes the quiver, the
//! field and the enumeration budgets, and memoizes group elements and orbit
//! tables per dimension vector.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::error::{budget, Error, Result};
use crate::ffield::{enumerate_gl, enumerate_subspaces, gl_order, Field, FieldElem, GlElement, Subspace};
use crate::linalg::Mat;
use crate::quiver::{
    cyclic_derivative_by_id, slope_unchecked, DimVector, Path, Potential, Quiver, Rational, StabilityParam,
    WeightFunction,
};

/// Hard caps on brute-force enumeration. Exceeding one is an error, never a
/// silent truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest number of points of a representation space to enumerate.
    pub max_points: u64,
    /// Largest group `prod_i GL_{a_i}(F_q)` to enumerate.
    pub max_group: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_points: 1 << 22,
            max_group: 1 << 20,
        }
    }
}

/// A point of `R(Q, a)`: one matrix per arrow, with `dim target` rows and
/// `dim source` columns.
///
/// The derived order compares dimension vectors first and then the matrix
/// entries arrow by arrow in row-major order, which is the lexicographic
/// order used for canonical forms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Representation {
    dims: DimVector,
    maps: Vec<Mat>,
}

impl Representation {
    pub fn new(quiver: &Quiver, dims: DimVector, maps: Vec<Mat>) -> Result<Self> {
        if dims.len() != quiver.num_vertices() {
            return Err(Error::DimensionMismatch {
                expected: quiver.num_vertices(),
                found: dims.len(),
            });
        }
        if maps.len() != quiver.num_arrows() {
            return Err(Error::DimensionMismatch {
                expected: quiver.num_arrows(),
                found: maps.len(),
            });
        }
        for (arrow, m) in quiver.arrows().iter().zip(&maps) {
            let shape = (dims.0[arrow.target] as usize, dims.0[arrow.source] as usize);
            if (m.rows(), m.cols()) != shape {
                return Err(Error::Invalid(format!(
                    "matrix for `{}` is {}x{}, expected {}x{}",
                    arrow.name,
                    m.rows(),
                    m.cols(),
                    shape.0,
                    shape.1
                )));
            }
        }
        Ok(Representation { dims, maps })
    }

    pub fn zero(quiver: &Quiver, dims: DimVector) -> Self {
        let maps = quiver
            .arrows()
            .iter()
            .map(|a| Mat::zero(dims.0[a.target] as usize, dims.0[a.source] as usize))
            .collect();
        Representation { dims, maps }
    }

    pub fn dims(&self) -> &DimVector {
        &self.dims
    }

    pub fn maps(&self) -> &[Mat] {
        &self.maps
    }

    pub fn map(&self, arrow: usize) -> &Mat {
        &self.maps[arrow]
    }

    /// The composite along `path` (traversal order), from the start vertex to
    /// the end vertex.
    pub fn eval_path(&self, quiver: &Quiver, field: &Field, path: &[usize]) -> Mat {
        let start = quiver.arrow(path[0]).source;
        let mut acc = Mat::identity(self.dims.0[start] as usize);
        for &a in path {
            acc = self.maps[a].mul(field, &acc);
        }
        acc
    }
}

/// A subrepresentation, as one subspace per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubRep {
    pub spaces: Vec<Subspace>,
}

impl SubRep {
    pub fn dims(&self) -> DimVector {
        DimVector(self.spaces.iter().map(|s| s.dim() as u32).collect())
    }
}

/// Isomorphism classes of `R(Q, a)`, found by sweeping the point indices.
#[derive(Debug)]
pub struct OrbitTable {
    /// Class number of every point, indexed by point index.
    class_of: Vec<u32>,
    /// Per class: index of the smallest point and orbit size.
    classes: Vec<(u64, u64)>,
}

impl OrbitTable {
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn orbit_sizes(&self) -> impl Iterator<Item = u64> + '_ {
        self.classes.iter().map(|c| c.1)
    }
}

/// Raw point counts of semistable representations of one dimension vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointCounts {
    pub semistable: u64,
    /// Semistable points with vanishing potential trace.
    pub semistable_w0: u64,
    pub gl_order: BigUint,
}

pub struct RepContext {
    quiver: Quiver,
    field: Field,
    budget: Budget,
    gl_cache: Mutex<HashMap<DimVector, Arc<Vec<GlElement>>>>,
    orbit_cache: Mutex<HashMap<DimVector, Arc<OrbitTable>>>,
    subspace_cache: Mutex<HashMap<(usize, usize), Arc<Vec<Subspace>>>>,
}

impl RepContext {
    pub fn new(quiver: Quiver, field: Field, budget: Budget) -> Self {
        RepContext {
            quiver,
            field,
            budget,
            gl_cache: Mutex::default(),
            orbit_cache: Mutex::default(),
            subspace_cache: Mutex::default(),
        }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    /// Number of matrix entries of a point of `R(Q, a)`.
    pub fn space_dim(&self, a: &DimVector) -> u64 {
        self.quiver
            .arrows()
            .iter()
            .map(|x| a.0[x.source] as u64 * a.0[x.target] as u64)
            .sum()
    }

    fn check_dims(&self, a: &DimVector) -> Result<()> {
        if a.len() != self.quiver.num_vertices() {
            return Err(Error::DimensionMismatch {
                expected: self.quiver.num_vertices(),
                found: a.len(),
            });
        }
        Ok(())
    }

    /// `q^{dim R(Q, a)}`, checked against the point budget.
    pub fn num_points(&self, a: &DimVector) -> Result<u64> {
        self.check_dims(a)?;
        let d = self.space_dim(a);
        let n = BigUint::from(self.q()).pow(d as u32);
        match n.to_u64() {
            Some(n) if n <= self.budget.max_points => Ok(n),
            _ => Err(budget("representation space", n, self.budget.max_points)),
        }
    }

    /// The point with the given index; the first matrix entry is the most
    /// significant base-`q` digit.
    pub fn point(&self, a: &DimVector, mut index: u64) -> Representation {
        let q = self.q() as u64;
        let d = self.space_dim(a) as usize;
        let mut entries = vec![FieldElem::ZERO; d];
        for slot in entries.iter_mut().rev() {
            *slot = FieldElem((index % q) as u32);
            index /= q;
        }
        let mut offset = 0;
        let maps = self
            .quiver
            .arrows()
            .iter()
            .map(|x| {
                let (r, c) = (a.0[x.target] as usize, a.0[x.source] as usize);
                let m = Mat::from_entries(r, c, entries[offset..offset + r * c].to_vec());
                offset += r * c;
                m
            })
            .collect();
        Representation { dims: a.clone(), maps }
    }

    pub fn index_of(&self, m: &Representation) -> u64 {
        let q = self.q() as u64;
        m.maps
            .iter()
            .flat_map(|x| x.entries())
            .fold(0u64, |acc, e| acc * q + e.0 as u64)
    }

    /// Every point of `R(Q, a)(F_q)` exactly once.
    pub fn points(&self, a: &DimVector) -> Result<impl Iterator<Item = Representation> + '_> {
        let n = self.num_points(a)?;
        let a = a.clone();
        Ok((0..n).map(move |i| self.point(&a, i)))
    }

    /// `w(M) = sum_u (a_u mod p) tr(M_u)`.
    pub fn potential_trace(&self, m: &Representation, w: &Potential) -> FieldElem {
        let f = &self.field;
        w.terms().fold(FieldElem::ZERO, |acc, (c, cycle)| {
            let t = m.eval_path(&self.quiver, f, cycle).trace(f);
            f.add(acc, f.mul(f.from_int(c), t))
        })
    }

    /// `(tM)_a = t^{wt(a)} M_a`.
    pub fn scale(&self, m: &Representation, t: FieldElem, wt: &WeightFunction) -> Result<Representation> {
        if t.is_zero() {
            return Err(Error::Invalid("scaling by zero".into()));
        }
        let f = &self.field;
        let maps = m
            .maps
            .iter()
            .enumerate()
            .map(|(a, x)| x.scale(f, f.pow(t, wt.of(a))))
            .collect();
        Ok(Representation {
            dims: m.dims.clone(),
            maps,
        })
    }

    /// True iff every cyclic derivative of `w` evaluates to zero on `m`.
    pub fn is_jacobian(&self, m: &Representation, w: &Potential) -> bool {
        let f = &self.field;
        (0..self.quiver.num_arrows()).all(|a| {
            let arrow = self.quiver.arrow(a);
            let rows = m.dims.0[arrow.source] as usize;
            let cols = m.dims.0[arrow.target] as usize;
            let total = cyclic_derivative_by_id(w, a)
                .into_iter()
                .fold(Mat::zero(rows, cols), |acc, (path, c)| {
                    let value = if path.is_empty() {
                        Mat::identity(rows)
                    } else {
                        m.eval_path(&self.quiver, f, &path)
                    };
                    acc.add(f, &value.scale(f, f.from_int(c)))
                });
            total.is_zero()
        })
    }

    fn subspaces(&self, n: usize, d: usize) -> Arc<Vec<Subspace>> {
        let mut cache = self.subspace_cache.lock().unwrap();
        cache
            .entry((n, d))
            .or_insert_with(|| Arc::new(enumerate_subspaces(&self.field, n, d)))
            .clone()
    }

    fn maps_into(&self, m: &Representation, arrow: usize, src: &Subspace, dst: &Subspace) -> bool {
        let x = &m.maps[arrow];
        (0..src.dim()).all(|r| dst.contains(&self.field, &x.apply(&self.field, src.basis().row(r))))
    }

    /// Backtracking search over subspace tuples of dimension `b`; `visit`
    /// returns `false` to stop early. Returns whether the search completed.
    fn search_subreps(&self, m: &Representation, b: &DimVector, visit: &mut dyn FnMut(&SubRep) -> bool) -> bool {
        let n = self.quiver.num_vertices();
        let choices: Vec<Arc<Vec<Subspace>>> =
            (0..n).map(|i| self.subspaces(m.dims.0[i] as usize, b.0[i] as usize)).collect();
        // arrows checked once both endpoints are chosen
        let mut ready: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (id, x) in self.quiver.arrows().iter().enumerate() {
            ready[x.source.max(x.target)].push(id);
        }
        let mut chosen: Vec<Subspace> = Vec::with_capacity(n);
        fn go(
            ctx: &RepContext,
            m: &Representation,
            choices: &[Arc<Vec<Subspace>>],
            ready: &[Vec<usize>],
            chosen: &mut Vec<Subspace>,
            visit: &mut dyn FnMut(&SubRep) -> bool,
        ) -> bool {
            let i = chosen.len();
            if i == choices.len() {
                return visit(&SubRep { spaces: chosen.clone() });
            }
            for u in choices[i].iter() {
                chosen.push(u.clone());
                let closed = ready[i].iter().all(|&a| {
                    let x = ctx.quiver.arrow(a);
                    ctx.maps_into(m, a, &chosen[x.source], &chosen[x.target])
                });
                let keep_going = !closed || go(ctx, m, choices, ready, chosen, visit);
                chosen.pop();
                if !keep_going {
                    return false;
                }
            }
            true
        }
        go(self, m, &choices, &ready, &mut chosen, visit)
    }

    /// All subrepresentations of `x` with dimension vector `b`.
    pub fn subrepresentations_of_dim(&self, x: &Representation, b: &DimVector) -> Vec<SubRep> {
        let mut out = Vec::new();
        if !b.le(&x.dims) {
            return out;
        }
        self.search_subreps(x, b, &mut |u| {
            out.push(u.clone());
            true
        });
        out
    }

    /// All subrepresentations of `x`, including `0` and `x`.
    pub fn subrepresentations(&self, x: &Representation) -> Vec<SubRep> {
        x.dims
            .sub_vectors()
            .iter()
            .flat_map(|b| self.subrepresentations_of_dim(x, b))
            .collect()
    }

    pub fn has_subrep_of_dim(&self, x: &Representation, b: &DimVector) -> bool {
        if !b.le(&x.dims) {
            return false;
        }
        !self.search_subreps(x, b, &mut |_| false)
    }

    fn check_closed(&self, x: &Representation, u: &SubRep) -> Result<()> {
        if u.spaces.len() != self.quiver.num_vertices()
            || u.spaces.iter().zip(&x.dims.0).any(|(s, n)| s.ambient_dim() != *n as usize)
        {
            return Err(Error::Invalid("subspace tuple does not match the representation".into()));
        }
        for (a, arrow) in self.quiver.arrows().iter().enumerate() {
            if !self.maps_into(x, a, &u.spaces[arrow.source], &u.spaces[arrow.target]) {
                return Err(Error::NotClosed(arrow.name.clone()));
            }
        }
        Ok(())
    }

    /// The subrepresentation `u` as a representation, on its echelon bases.
    pub fn restrict(&self, x: &Representation, u: &SubRep) -> Result<Representation> {
        self.check_closed(x, u)?;
        let f = &self.field;
        let maps = self
            .quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, arrow)| {
                let (src, dst) = (&u.spaces[arrow.source], &u.spaces[arrow.target]);
                let mut m = Mat::zero(dst.dim(), src.dim());
                for c in 0..src.dim() {
                    let image = x.maps[a].apply(f, src.basis().row(c));
                    for (r, v) in dst.coordinates(&image).into_iter().enumerate() {
                        m.set(r, c, v);
                    }
                }
                m
            })
            .collect();
        Ok(Representation { dims: u.dims(), maps })
    }

    /// `x / u`, on the coordinates complementary to the echelon pivots.
    pub fn quotient_rep(&self, x: &Representation, u: &SubRep) -> Result<Representation> {
        self.check_closed(x, u)?;
        let f = &self.field;
        let complements: Vec<Vec<usize>> = u.spaces.iter().map(|s| s.non_pivots()).collect();
        let dims = DimVector(complements.iter().map(|c| c.len() as u32).collect());
        let maps = self
            .quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, arrow)| {
                let (src, dst) = (&complements[arrow.source], &complements[arrow.target]);
                let mut m = Mat::zero(dst.len(), src.len());
                for (c, &j) in src.iter().enumerate() {
                    let mut v = x.maps[a].column(j);
                    u.spaces[arrow.target].reduce(f, &mut v);
                    for (r, &i) in dst.iter().enumerate() {
                        m.set(r, c, v[i]);
                    }
                }
                m
            })
            .collect();
        Ok(Representation { dims, maps })
    }

    pub fn gl(&self, a: &DimVector) -> Result<Arc<Vec<GlElement>>> {
        if let Some(g) = self.gl_cache.lock().unwrap().get(a) {
            return Ok(g.clone());
        }
        let g = Arc::new(enumerate_gl(&self.field, a, self.budget.max_group)?);
        self.gl_cache.lock().unwrap().insert(a.clone(), g.clone());
        Ok(g)
    }

    /// `(g M)_x = g_{t(x)} M_x g_{s(x)}^{-1}`.
    pub fn act(&self, g: &GlElement, m: &Representation) -> Representation {
        let f = &self.field;
        let maps = self
            .quiver
            .arrows()
            .iter()
            .zip(&m.maps)
            .map(|(x, mx)| g.blocks[x.target].mul(f, mx).mul(f, &g.inverses[x.source]))
            .collect();
        Representation {
            dims: m.dims.clone(),
            maps,
        }
    }

    /// Orbit decomposition of `R(Q, a)`, memoized per dimension vector.
    pub fn orbit_table(&self, a: &DimVector) -> Result<Arc<OrbitTable>> {
        if let Some(t) = self.orbit_cache.lock().unwrap().get(a) {
            return Ok(t.clone());
        }
        let n = self.num_points(a)?;
        let group = self.gl(a)?;
        const UNSET: u32 = u32::MAX;
        let mut class_of = vec![UNSET; n as usize];
        let mut classes = Vec::new();
        for idx in 0..n {
            if class_of[idx as usize] != UNSET {
                continue;
            }
            // every smaller index is already classified, so idx is the orbit minimum
            let id = classes.len() as u32;
            let m = self.point(a, idx);
            let mut size = 0u64;
            for g in group.iter() {
                let j = self.index_of(&self.act(g, &m)) as usize;
                if class_of[j] == UNSET {
                    class_of[j] = id;
                    size += 1;
                }
            }
            classes.push((idx, size));
        }
        let table = Arc::new(OrbitTable { class_of, classes });
        self.orbit_cache.lock().unwrap().insert(a.clone(), table.clone());
        Ok(table)
    }

    /// The lexicographically smallest element of the orbit of `m`.
    pub fn canonical_form(&self, m: &Representation) -> Result<Representation> {
        let table = self.orbit_table(&m.dims)?;
        let class = table.class_of[self.index_of(m) as usize];
        Ok(self.point(&m.dims, table.classes[class as usize].0))
    }

    pub fn is_isomorphic(&self, m: &Representation, n: &Representation) -> Result<bool> {
        if m.dims != n.dims {
            return Ok(false);
        }
        Ok(self.canonical_form(m)? == self.canonical_form(n)?)
    }

    /// Canonical representatives of all isomorphism classes of dimension `a`.
    pub fn classes(&self, a: &DimVector) -> Result<Vec<Representation>> {
        let table = self.orbit_table(a)?;
        Ok(table.classes.iter().map(|(idx, _)| self.point(a, *idx)).collect())
    }

    /// `#Aut M`, by counting the stabilizer in `prod GL_{a_i}`.
    pub fn aut_order(&self, m: &Representation) -> Result<u64> {
        let group = self.gl(&m.dims)?;
        Ok(group.iter().filter(|g| self.act(g, m) == *m).count() as u64)
    }

    fn destabilizing(&self, m: &Representation, theta: &StabilityParam, strict: bool) -> Result<bool> {
        if theta.len() != self.quiver.num_vertices() {
            return Err(Error::DimensionMismatch {
                expected: self.quiver.num_vertices(),
                found: theta.len(),
            });
        }
        if m.dims.is_zero() {
            return Err(Error::ZeroDimension);
        }
        let mu = slope_unchecked(theta, &m.dims);
        Ok(m.dims
            .sub_vectors()
            .iter()
            .filter(|b| !b.is_zero() && **b != m.dims)
            .filter(|b| {
                let nu = slope_unchecked(theta, b);
                if strict {
                    nu >= mu
                } else {
                    nu > mu
                }
            })
            .any(|b| self.has_subrep_of_dim(m, b)))
    }

    /// No proper nonzero subrepresentation of larger slope.
    pub fn is_semistable(&self, m: &Representation, theta: &StabilityParam) -> Result<bool> {
        Ok(!self.destabilizing(m, theta, false)?)
    }

    /// Every proper nonzero subrepresentation has strictly smaller slope.
    pub fn is_stable(&self, m: &Representation, theta: &StabilityParam) -> Result<bool> {
        Ok(!self.destabilizing(m, theta, true)?)
    }

    /// Semistability that also accepts the zero representation.
    fn semistable_or_zero(&self, m: &Representation, theta: &StabilityParam) -> Result<bool> {
        if m.dims.is_zero() || theta.is_constant() {
            return Ok(true);
        }
        self.is_semistable(m, theta)
    }

    /// Semistable points of `R(Q, a)(F_q)`, and those among them with `w(M) = 0`,
    /// in one pass over the representation space.
    pub fn point_counts(&self, a: &DimVector, theta: &StabilityParam, w: &Potential) -> Result<PointCounts> {
        let mut semistable = 0;
        let mut semistable_w0 = 0;
        for m in self.points(a)? {
            if self.semistable_or_zero(&m, theta)? {
                semistable += 1;
                if self.potential_trace(&m, w).is_zero() {
                    semistable_w0 += 1;
                }
            }
        }
        Ok(PointCounts {
            semistable,
            semistable_w0,
            gl_order: gl_order(a, self.q()),
        })
    }

    /// Number of semistable points, restricted to `w(M) = 0` when `w0` is given.
    pub fn count_semistable(&self, a: &DimVector, theta: &StabilityParam, w0: Option<&Potential>) -> Result<u64> {
        let counts = self.point_counts(a, theta, w0.unwrap_or(&Potential::zero()))?;
        Ok(if w0.is_some() {
            counts.semistable_w0
        } else {
            counts.semistable
        })
    }

    /// Groupoid count of the semistable stack: points divided by `#GL_a`.
    pub fn stack_count(&self, a: &DimVector, theta: &StabilityParam, w0: Option<&Potential>) -> Result<Rational> {
        let n = self.count_semistable(a, theta, w0)?;
        Ok(Rational::new(BigInt::from(n), BigInt::from(gl_order(a, self.q()))))
    }

    /// `#{U <= X : U ~ N, X/U ~ M}`.
    pub fn hall_number(&self, x: &Representation, m: &Representation, n: &Representation) -> Result<u64> {
        if m.dims.add(&n.dims) != x.dims {
            return Err(Error::Invalid(format!(
                "dimension mismatch: {} + {} != {}",
                m.dims, n.dims, x.dims
            )));
        }
        let cm = self.canonical_form(m)?;
        let cn = self.canonical_form(n)?;
        let mut count = 0;
        for u in self.subrepresentations_of_dim(x, &n.dims) {
            if self.canonical_form(&self.restrict(x, &u)?)? == cn
                && self.canonical_form(&self.quotient_rep(x, &u)?)? == cm
            {
                count += 1;
            }
        }
        Ok(count)
    }

    /// Sum over isomorphism classes of semistable representations of `1/#Aut`.
    pub fn stack_count_by_classes(&self, a: &DimVector, theta: &StabilityParam) -> Result<Rational> {
        let mut total = Rational::zero();
        for m in self.classes(a)? {
            if self.semistable_or_zero(&m, theta)? {
                total += Rational::new(1.into(), BigInt::from(self.aut_order(&m)?));
            }
        }
        Ok(total)
    }
}

/// Reads a cycle from arrow names; convenience for tests and callers.
pub fn path_by_names(quiver: &Quiver, names: &str) -> Result<Path> {
    names.split_whitespace().map(|n| quiver.arrow_id(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::parse_rational;

    fn ctx(quiver: Quiver, q: u32) -> RepContext {
        RepContext::new(quiver, Field::new(q).unwrap(), Budget::default())
    }

    fn a2(q: u32) -> RepContext {
        ctx(Quiver::new(["1", "2"], [("x", "1", "2")]).unwrap(), q)
    }

    fn jordan(q: u32) -> RepContext {
        ctx(Quiver::new(["1"], [("l", "1", "1")]).unwrap(), q)
    }

    fn three_loop(q: u32) -> RepContext {
        ctx(
            Quiver::new(["1"], [("x", "1", "1"), ("y", "1", "1"), ("z", "1", "1")]).unwrap(),
            q,
        )
    }

    fn rep(c: &RepContext, dims: &[u32], maps: &[&[u32]]) -> Representation {
        let dims = DimVector(dims.to_vec());
        let maps = c
            .quiver()
            .arrows()
            .iter()
            .zip(maps)
            .map(|(a, e)| {
                let r = dims.0[a.target] as usize;
                let k = dims.0[a.source] as usize;
                Mat::from_entries(r, k, e.iter().map(|v| FieldElem(*v)).collect())
            })
            .collect();
        Representation::new(c.quiver(), dims, maps).unwrap()
    }

    fn d(v: &[u32]) -> DimVector {
        DimVector(v.to_vec())
    }

    #[test]
    fn potential_traces() {
        let j = jordan(2);
        let l3 = Potential::from_names(j.quiver(), &[(1, "l l l")]).unwrap();
        assert_eq!(j.potential_trace(&rep(&j, &[1], &[&[1]]), &l3), FieldElem(1));
        assert_eq!(j.potential_trace(&rep(&j, &[2], &[&[0, 1, 0, 0]]), &l3), FieldElem(0));
        let t = three_loop(3);
        let w = Potential::from_names(t.quiver(), &[(1, "x y z"), (-1, "x z y")]).unwrap();
        for m in t.points(&d(&[1])).unwrap() {
            assert_eq!(t.potential_trace(&m, &w), FieldElem::ZERO);
        }
    }

    #[test]
    fn scaling() {
        let j = jordan(3);
        let l3 = Potential::from_names(j.quiver(), &[(1, "l l l")]).unwrap();
        let wt = WeightFunction(vec![1]);
        let m = rep(&j, &[1], &[&[1]]);
        assert_eq!(j.scale(&m, FieldElem::ONE, &wt).unwrap(), m);
        let tm = j.scale(&m, FieldElem(2), &wt).unwrap();
        assert_eq!(j.potential_trace(&tm, &l3), FieldElem(2));
        assert!(j.scale(&m, FieldElem::ZERO, &wt).is_err());

        let a = a2(3);
        let m = rep(&a, &[1, 1], &[&[1]]);
        let tm = a.scale(&m, FieldElem(2), &WeightFunction(vec![2])).unwrap();
        assert_eq!(tm.map(0).get(0, 0), FieldElem(1));
    }

    #[test]
    fn representation_space_sizes() {
        assert_eq!(a2(2).points(&d(&[1, 1])).unwrap().count(), 2);
        assert_eq!(jordan(3).points(&d(&[1])).unwrap().count(), 3);
        assert_eq!(three_loop(2).points(&d(&[1])).unwrap().count(), 8);
        let tight = RepContext::new(
            Quiver::new(["1"], [("l", "1", "1")]).unwrap(),
            Field::new(2).unwrap(),
            Budget {
                max_points: 10,
                max_group: 10,
            },
        );
        assert!(matches!(tight.points(&d(&[2])), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn point_index_round_trip() {
        let c = three_loop(2);
        let a = d(&[2]);
        for i in (0..4096).step_by(37) {
            assert_eq!(c.index_of(&c.point(&a, i)), i);
        }
    }

    #[test]
    fn subrepresentation_examples() {
        let c = a2(2);
        let id = rep(&c, &[1, 1], &[&[1]]);
        let dims: Vec<DimVector> = c.subrepresentations(&id).iter().map(|u| u.dims()).collect();
        assert_eq!(dims, vec![d(&[0, 0]), d(&[0, 1]), d(&[1, 1])]);
        let zero = rep(&c, &[1, 1], &[&[0]]);
        assert_eq!(c.subrepresentations(&zero).len(), 4);
        let j = jordan(2);
        assert_eq!(j.subrepresentations(&rep(&j, &[1], &[&[0]])).len(), 2);
    }

    #[test]
    fn quotients() {
        let c = a2(3);
        let x = rep(&c, &[1, 1], &[&[2]]);
        let subs = c.subrepresentations(&x);
        let zero = &subs[0];
        let all = subs.last().unwrap();
        assert_eq!(c.quotient_rep(&x, zero).unwrap(), x);
        assert_eq!(c.quotient_rep(&x, all).unwrap(), Representation::zero(c.quiver(), d(&[0, 0])));
        let s2 = subs.iter().find(|u| u.dims() == d(&[0, 1])).unwrap();
        let quot = c.quotient_rep(&x, s2).unwrap();
        assert_eq!(quot.dims(), &d(&[1, 0]));
        let bad = SubRep {
            spaces: vec![Subspace::full(1), Subspace::zero(1)],
        };
        assert_eq!(c.quotient_rep(&x, &bad), Err(Error::NotClosed("x".into())));
    }

    #[test]
    fn isomorphism() {
        let c = a2(3);
        let x1 = rep(&c, &[1, 1], &[&[1]]);
        let x2 = rep(&c, &[1, 1], &[&[2]]);
        let x0 = rep(&c, &[1, 1], &[&[0]]);
        assert!(c.is_isomorphic(&x1, &x2).unwrap());
        assert!(!c.is_isomorphic(&x1, &x0).unwrap());
        let canon = c.canonical_form(&x2).unwrap();
        assert_eq!(canon, x1);
        assert_eq!(c.canonical_form(&canon).unwrap(), canon);
        let j = jordan(3);
        for m in j.points(&d(&[2])).unwrap() {
            let cf = j.canonical_form(&m).unwrap();
            assert_eq!(j.canonical_form(&cf).unwrap(), cf);
            assert!(cf <= m);
        }
    }

    #[test]
    fn automorphisms() {
        let c = a2(2);
        assert_eq!(c.aut_order(&rep(&c, &[1, 1], &[&[1]])).unwrap(), 1);
        assert_eq!(c.aut_order(&rep(&c, &[1, 1], &[&[0]])).unwrap(), 1);
        let c3 = a2(3);
        assert_eq!(c3.aut_order(&rep(&c3, &[1, 0], &[&[]])).unwrap(), 2);
        assert_eq!(c3.aut_order(&rep(&c3, &[1, 1], &[&[1]])).unwrap(), 2);
    }

    #[test]
    fn stability_examples() {
        let c = a2(2);
        let theta = StabilityParam::from_integers(&[1, 0]);
        let id = rep(&c, &[1, 1], &[&[1]]);
        assert!(c.is_semistable(&id, &theta).unwrap());
        assert!(c.is_stable(&id, &theta).unwrap());
        let zero = rep(&c, &[1, 1], &[&[0]]);
        assert!(!c.is_semistable(&zero, &theta).unwrap());
        let j = jordan(2);
        let any = StabilityParam(vec![parse_rational("-7/3").unwrap()]);
        assert!(j.is_stable(&rep(&j, &[1], &[&[1]]), &any).unwrap());
        assert_eq!(
            c.is_semistable(&Representation::zero(c.quiver(), d(&[0, 0])), &theta),
            Err(Error::ZeroDimension)
        );
    }

    #[test]
    fn semistable_counts() {
        let theta = StabilityParam::from_integers(&[1, 0]);
        assert_eq!(a2(2).count_semistable(&d(&[1, 1]), &theta, None).unwrap(), 1);
        assert_eq!(
            a2(3).count_semistable(&d(&[1, 1]), &StabilityParam::zero(2), None).unwrap(),
            3
        );
        let j = jordan(3);
        let l3 = Potential::from_names(j.quiver(), &[(1, "l l l")]).unwrap();
        assert_eq!(j.count_semistable(&d(&[1]), &StabilityParam::zero(1), Some(&l3)).unwrap(), 1);
    }

    #[test]
    fn stack_counts() {
        let theta = StabilityParam::from_integers(&[1, 0]);
        assert_eq!(a2(2).stack_count(&d(&[1, 1]), &theta, None).unwrap(), Rational::from_integer(1.into()));
        assert_eq!(
            jordan(3).stack_count(&d(&[1]), &StabilityParam::zero(1), None).unwrap(),
            parse_rational("3/2").unwrap()
        );
        assert_eq!(
            a2(3).stack_count(&d(&[0, 0]), &theta, None).unwrap(),
            Rational::from_integer(1.into())
        );
    }

    #[test]
    fn hall_numbers() {
        let c = ctx(Quiver::new(["1"], Vec::<(&str, &str, &str)>::new()).unwrap(), 2);
        let x = Representation::zero(c.quiver(), d(&[2]));
        let k = Representation::zero(c.quiver(), d(&[1]));
        assert_eq!(c.hall_number(&x, &k, &k).unwrap(), 3);

        let a = a2(2);
        let id = rep(&a, &[1, 1], &[&[1]]);
        let s1 = rep(&a, &[1, 0], &[&[]]);
        let s2 = rep(&a, &[0, 1], &[&[]]);
        assert_eq!(a.hall_number(&id, &s1, &s2).unwrap(), 1);
        assert_eq!(a.hall_number(&id, &s2, &s1).unwrap(), 0);
        assert!(a.hall_number(&id, &s1, &s1).is_err());
    }

    #[test]
    fn jacobian_membership() {
        let j2 = jordan(2);
        let l3 = Potential::from_names(j2.quiver(), &[(1, "l l l")]).unwrap();
        assert!(!j2.is_jacobian(&rep(&j2, &[1], &[&[1]]), &l3));
        assert!(j2.is_jacobian(&Representation::zero(j2.quiver(), d(&[2])), &l3));
        let j3 = jordan(3);
        for m in j3.points(&d(&[2])).unwrap() {
            assert!(j3.is_jacobian(&m, &l3));
        }
    }

    #[test]
    fn burnside_identity() {
        for c in [a2(2), a2(3)] {
            for theta in [StabilityParam::from_integers(&[1, 0]), StabilityParam::zero(2)] {
                for a in d(&[2, 2]).sub_vectors() {
                    assert_eq!(
                        c.stack_count_by_classes(&a, &theta).unwrap(),
                        c.stack_count(&a, &theta, None).unwrap()
                    );
                }
            }
        }
    }
}
