//! Quivers, dimension vectors, potentials and weight functions, together with
//! the bilinear forms and slope functions attached to a quiver.
//!
//! Arrows and vertices are referred to by their index in declaration order.
//! A path or cycle is a sequence of arrow indices written in traversal order:
//! the path `x y z` first follows `x`, then `y`, then `z`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type VertexId = usize;
pub type ArrowId = usize;

/// A sequence of arrows in traversal order.
pub type Path = Vec<ArrowId>;

/// A formal integer combination of paths. Zero coefficients are never stored.
pub type PathCombination = BTreeMap<Path, i64>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: VertexId,
    pub target: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_index: HashMap<String, VertexId>,
    arrow_index: HashMap<String, ArrowId>,
}

impl Quiver {
    /// Builds a quiver from vertex names and `(name, source, target)` triples.
    pub fn new<V, A, S1, S2, S3>(vertices: V, arrows: A) -> Result<Self>
    where
        V: IntoIterator<Item = S1>,
        A: IntoIterator<Item = (S2, S3, S3)>,
        S1: Into<String>,
        S2: Into<String>,
        S3: AsRef<str>,
    {
        let mut quiver = Quiver {
            vertices: Vec::new(),
            arrows: Vec::new(),
            vertex_index: HashMap::new(),
            arrow_index: HashMap::new(),
        };
        for v in vertices {
            quiver.add_vertex(v.into())?;
        }
        for (name, s, t) in arrows {
            quiver.add_arrow(name.into(), s.as_ref(), t.as_ref())?;
        }
        Ok(quiver)
    }

    pub fn add_vertex(&mut self, name: String) -> Result<VertexId> {
        if self.vertex_index.contains_key(&name) {
            return Err(Error::Duplicate {
                kind: "vertex",
                name,
            });
        }
        let id = self.vertices.len();
        self.vertex_index.insert(name.clone(), id);
        self.vertices.push(name);
        Ok(id)
    }

    pub fn add_arrow(&mut self, name: String, source: &str, target: &str) -> Result<ArrowId> {
        if self.arrow_index.contains_key(&name) {
            return Err(Error::Duplicate { kind: "arrow", name });
        }
        let source = self.vertex_id(source)?;
        let target = self.vertex_id(target)?;
        let id = self.arrows.len();
        self.arrow_index.insert(name.clone(), id);
        self.arrows.push(Arrow {
            name,
            source,
            target,
        });
        Ok(id)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrow(&self, id: ArrowId) -> &Arrow {
        &self.arrows[id]
    }

    pub fn vertex_id(&self, name: &str) -> Result<VertexId> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn arrow_id(&self, name: &str) -> Result<ArrowId> {
        self.arrow_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownArrow(name.to_string()))
    }

    fn check_dims(&self, a: &DimVector) -> Result<()> {
        if a.len() != self.num_vertices() {
            return Err(Error::DimensionMismatch {
                expected: self.num_vertices(),
                found: a.len(),
            });
        }
        Ok(())
    }

    /// Euler-Ringel form `sum_i a_i b_i - sum_{x: i -> j} a_i b_j`.
    pub fn euler_form(&self, a: &DimVector, b: &DimVector) -> Result<i64> {
        self.check_dims(a)?;
        self.check_dims(b)?;
        Ok(self.euler_form_unchecked(a, b))
    }

    pub(crate) fn euler_form_unchecked(&self, a: &DimVector, b: &DimVector) -> i64 {
        let diag: i64 = a.0.iter().zip(&b.0).map(|(x, y)| *x as i64 * *y as i64).sum();
        let off: i64 = self
            .arrows
            .iter()
            .map(|x| a.0[x.source] as i64 * b.0[x.target] as i64)
            .sum();
        diag - off
    }

    /// Skew-symmetric form `chi(a, b) - chi(b, a)`.
    pub fn skew_form(&self, a: &DimVector, b: &DimVector) -> Result<i64> {
        Ok(self.euler_form(a, b)? - self.euler_form(b, a)?)
    }

    pub(crate) fn skew_form_unchecked(&self, a: &DimVector, b: &DimVector) -> i64 {
        self.euler_form_unchecked(a, b) - self.euler_form_unchecked(b, a)
    }

    /// Tits form `chi(a, a)`.
    pub fn tits_form(&self, a: &DimVector) -> Result<i64> {
        self.euler_form(a, a)
    }

    /// Checks that `path` is composable head to tail. Returns the start and end
    /// vertices of a nonempty path.
    pub fn path_endpoints(&self, path: &[ArrowId]) -> Result<(VertexId, VertexId)> {
        let first = path.first().ok_or(Error::EmptyCycle)?;
        let mut end = self.arrows[*first].target;
        for (position, id) in path.iter().enumerate().skip(1) {
            let arrow = &self.arrows[*id];
            if arrow.source != end {
                return Err(Error::NotComposable { position });
            }
            end = arrow.target;
        }
        Ok((self.arrows[*first].source, end))
    }

    pub fn path_names(&self, path: &[ArrowId]) -> String {
        path.iter()
            .map(|id| self.arrows[*id].name.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Depth-first search for an oriented cycle using only the arrows accepted
    /// by `keep`. Returns the arrows of one cycle in traversal order.
    pub fn find_cycle_with(&self, keep: impl Fn(ArrowId) -> bool) -> Option<Path> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Active,
            Done,
        }
        let n = self.num_vertices();
        let mut out: Vec<Vec<ArrowId>> = vec![Vec::new(); n];
        for (id, a) in self.arrows.iter().enumerate() {
            if keep(id) {
                out[a.source].push(id);
            }
        }
        let mut mark = vec![Mark::New; n];
        for root in 0..n {
            if mark[root] != Mark::New {
                continue;
            }
            // stack of (vertex, next outgoing index); `trail` holds the arrows taken
            let mut stack = vec![(root, 0usize)];
            let mut trail: Vec<ArrowId> = Vec::new();
            mark[root] = Mark::Active;
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if *next < out[v].len() {
                    let arrow = out[v][*next];
                    *next += 1;
                    let w = self.arrows[arrow].target;
                    match mark[w] {
                        Mark::Active => {
                            // close the cycle: arrows from the first visit of w
                            let start = stack.iter().position(|(u, _)| *u == w).unwrap();
                            let mut cycle = trail[start..].to_vec();
                            cycle.push(arrow);
                            return Some(cycle);
                        }
                        Mark::New => {
                            mark[w] = Mark::Active;
                            stack.push((w, 0));
                            trail.push(arrow);
                        }
                        Mark::Done => {}
                    }
                } else {
                    mark[v] = Mark::Done;
                    stack.pop();
                    trail.pop();
                }
            }
        }
        None
    }

    /// Returns a witness cycle if the quiver has an oriented cycle.
    pub fn check_acyclic(&self) -> std::result::Result<(), Path> {
        match self.find_cycle_with(|_| true) {
            Some(c) => Err(c),
            None => Ok(()),
        }
    }
}

/// Dimension vector, one nonnegative entry per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimVector(pub Vec<u32>);

impl DimVector {
    pub fn zero(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|x| *x as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| *x == 0)
    }

    pub fn add(&self, other: &DimVector) -> DimVector {
        DimVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference, `None` if some entry would be negative.
    pub fn checked_sub(&self, other: &DimVector) -> Option<DimVector> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(DimVector)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &DimVector) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// All vectors `b` with `0 <= b <= self` componentwise, the zero vector
    /// first and `self` last.
    pub fn sub_vectors(&self) -> Vec<DimVector> {
        let mut out = vec![DimVector::zero(self.len())];
        for (i, &cap) in self.0.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * (cap as usize + 1));
            for v in &out {
                for k in 0..=cap {
                    let mut w = v.clone();
                    w.0[i] = k;
                    next.push(w);
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        text.split(',')
            .map(|s| {
                s.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Invalid(format!("bad dimension entry `{}`", s.trim())))
            })
            .collect::<Result<Vec<_>>>()
            .map(DimVector)
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl Serialize for DimVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// Rotates a cycle to its lexicographically minimal rotation.
pub fn normalize_cycle(cycle: &[ArrowId]) -> Path {
    (0..cycle.len())
        .map(|k| {
            let mut r = cycle[k..].to_vec();
            r.extend_from_slice(&cycle[..k]);
            r
        })
        .min()
        .unwrap_or_default()
}

/// A finite integer combination of cycles, each stored in normalized rotation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Potential {
    terms: BTreeMap<Path, i64>,
}

impl Potential {
    pub fn zero() -> Self {
        Potential::default()
    }

    /// Builds a potential from `(coefficient, cycle)` terms. Terms whose cycles
    /// agree up to rotation are merged, zero totals dropped.
    pub fn new(quiver: &Quiver, terms: impl IntoIterator<Item = (i64, Path)>) -> Result<Self> {
        let mut w = Potential::zero();
        for (c, cycle) in terms {
            w.add_term(quiver, c, cycle)?;
        }
        Ok(w)
    }

    /// Parses terms given by arrow names, e.g. `[(1, "x y z"), (-1, "x z y")]`.
    pub fn from_names(quiver: &Quiver, terms: &[(i64, &str)]) -> Result<Self> {
        let mut w = Potential::zero();
        for (c, cycle) in terms {
            let ids = cycle
                .split_whitespace()
                .map(|n| quiver.arrow_id(n))
                .collect::<Result<Vec<_>>>()?;
            w.add_term(quiver, *c, ids)?;
        }
        Ok(w)
    }

    pub fn add_term(&mut self, quiver: &Quiver, coefficient: i64, cycle: Path) -> Result<()> {
        let (start, end) = quiver.path_endpoints(&cycle)?;
        if start != end {
            return Err(Error::OpenCycle {
                start: quiver.vertices()[start].clone(),
                end: quiver.vertices()[end].clone(),
            });
        }
        let key = normalize_cycle(&cycle);
        let entry = self.terms.entry(key.clone()).or_insert(0);
        *entry = entry
            .checked_add(coefficient)
            .ok_or_else(|| Error::Invalid("potential coefficient overflow".into()))?;
        if *entry == 0 {
            self.terms.remove(&key);
        }
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Path)> {
        self.terms.iter().map(|(c, k)| (*k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Cyclic derivative of `w` with respect to `arrow`: for each occurrence of the
/// arrow in a cycle, the path that starts right after it and wraps around.
pub fn cyclic_derivative(quiver: &Quiver, w: &Potential, arrow: &str) -> Result<PathCombination> {
    let a = quiver.arrow_id(arrow)?;
    Ok(cyclic_derivative_by_id(w, a))
}

pub(crate) fn cyclic_derivative_by_id(w: &Potential, a: ArrowId) -> PathCombination {
    let mut out = PathCombination::new();
    for (c, cycle) in w.terms() {
        for (k, id) in cycle.iter().enumerate() {
            if *id != a {
                continue;
            }
            let mut path = cycle[k + 1..].to_vec();
            path.extend_from_slice(&cycle[..k]);
            let entry = out.entry(path.clone()).or_insert(0);
            *entry += c;
            if *entry == 0 {
                out.remove(&path);
            }
        }
    }
    out
}

/// Nonnegative integer weight per arrow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFunction(pub Vec<u64>);

impl WeightFunction {
    pub fn constant(quiver: &Quiver, w: u64) -> Self {
        WeightFunction(vec![w; quiver.num_arrows()])
    }

    pub fn of(&self, arrow: ArrowId) -> u64 {
        self.0[arrow]
    }

    /// Total weight of a path, saturating at `u64::MAX`.
    pub fn of_path(&self, path: &[ArrowId]) -> u64 {
        path.iter().fold(0u64, |acc, a| acc.saturating_add(self.0[*a]))
    }

    pub fn max(&self) -> u64 {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

/// Checks that all cycles of `w` have the same weight and returns it.
/// The zero potential is homogeneous of no particular weight (`None`).
pub fn check_homogeneous(quiver: &Quiver, w: &Potential, wt: &WeightFunction) -> Result<Option<u64>> {
    let mut first: Option<(&Path, u64)> = None;
    for (_, cycle) in w.terms() {
        let weight = wt.of_path(cycle);
        match first {
            None => first = Some((cycle, weight)),
            Some((c0, w0)) if w0 != weight => {
                return Err(Error::NotHomogeneous {
                    first: quiver.path_names(c0),
                    first_weight: w0,
                    second: quiver.path_names(cycle),
                    second_weight: weight,
                })
            }
            _ => {}
        }
    }
    Ok(first.map(|(_, w)| w))
}

/// Every oriented cycle has positive weight iff the weight-zero arrows form an
/// acyclic subquiver. On failure returns a cycle of weight zero.
pub fn check_positive_on_cycles(quiver: &Quiver, wt: &WeightFunction) -> std::result::Result<(), Path> {
    match quiver.find_cycle_with(|a| wt.of(a) == 0) {
        Some(c) => Err(c),
        None => Ok(()),
    }
}

/// Exact rational stability parameter, one entry per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityParam(pub Vec<Rational>);

impl StabilityParam {
    pub fn zero(n: usize) -> Self {
        StabilityParam(vec![Rational::zero(); n])
    }

    pub fn from_integers(values: &[i64]) -> Self {
        StabilityParam(values.iter().map(|v| Rational::from_integer(BigInt::from(*v))).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when every slope coincides, i.e. all entries are equal.
    pub fn is_constant(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    pub fn parse(text: &str) -> Result<Self> {
        text.split(',').map(|s| parse_rational(s.trim())).collect::<Result<Vec<_>>>().map(StabilityParam)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(rational_string).collect()
    }
}

/// Slope `theta . a / sum(a)`.
pub fn slope(theta: &StabilityParam, a: &DimVector) -> Result<Rational> {
    if theta.len() != a.len() {
        return Err(Error::DimensionMismatch {
            expected: theta.len(),
            found: a.len(),
        });
    }
    if a.is_zero() {
        return Err(Error::ZeroDimension);
    }
    Ok(slope_unchecked(theta, a))
}

pub(crate) fn slope_unchecked(theta: &StabilityParam, a: &DimVector) -> Rational {
    let num: Rational = theta
        .0
        .iter()
        .zip(&a.0)
        .map(|(t, x)| t * Rational::from_integer(BigInt::from(*x)))
        .sum();
    num / Rational::from_integer(BigInt::from(a.total()))
}

/// Returns a proper nonzero `b < a` with the same slope as `a`, or `None`
/// when `theta` is `a`-generic.
pub fn nongeneric_witness(theta: &StabilityParam, a: &DimVector) -> Result<Option<DimVector>> {
    let mu = slope(theta, a)?;
    Ok(a.sub_vectors()
        .into_iter()
        .rev()
        .filter(|b| !b.is_zero() && b != a)
        .find(|b| slope_unchecked(theta, b) == mu))
}

pub fn is_generic(theta: &StabilityParam, a: &DimVector) -> Result<bool> {
    Ok(nongeneric_witness(theta, a)?.is_none())
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::Invalid(format!("malformed rational `{text}`"));
    let parse_int = |s: &str| -> Result<BigInt> {
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse::<BigInt>().map_err(|_| bad())
    };
    match text.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() || d.is_negative() || d.to_string() != text.split_once('/').unwrap().1 {
                return Err(bad());
            }
            Ok(Rational::new(parse_int(n)?, d))
        }
        None => Ok(Rational::from_integer(parse_int(text)?)),
    }
}

/// `p/q` string, or just `p` for integers.
pub fn rational_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
