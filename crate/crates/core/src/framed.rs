//! Framed quivers and their level-graded covers.
//!
//! A framed quiver adds one vertex `*` joined to the original vertices by
//! framing arrows. Given a weight on the arrows, the hat quiver has a copy
//! `i@n` of every vertex for each level `n` in `-N..=N`, and an arrow
//! `a@n : s(a)@n -> t(a)@(n + wt(a))` whenever the target level is in range.

use crate::error::{Error, Result};
use crate::ffield::Field;
use crate::linalg::Mat;
use crate::quiver::{check_positive_on_cycles, ArrowId, DimVector, Quiver, StabilityParam, VertexId, WeightFunction};
use crate::rep::{Budget, RepContext, Representation};

pub const FRAMING_VERTEX: &str = "*";

/// Largest level bound `N` accepted when building a hat quiver.
pub const MAX_LEVELS: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FramedQuiver {
    quiver: Quiver,
    base_vertices: usize,
    base_arrows: usize,
}

impl FramedQuiver {
    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn star(&self) -> VertexId {
        self.base_vertices
    }

    pub fn base_vertices(&self) -> usize {
        self.base_vertices
    }

    pub fn framing_arrows(&self) -> std::ops::Range<ArrowId> {
        self.base_arrows..self.quiver.num_arrows()
    }

    /// `(a, 1)`.
    pub fn extend(&self, a: &DimVector) -> DimVector {
        let mut v = a.0.clone();
        v.push(1);
        DimVector(v)
    }
}

/// Adds the vertex `*` and the given `(name, source, target)` arrows, each of
/// which must have exactly one endpoint equal to `*`.
pub fn build_framed(base: &Quiver, framing: &[(String, String, String)]) -> Result<FramedQuiver> {
    let mut quiver = base.clone();
    quiver.add_vertex(FRAMING_VERTEX.to_string())?;
    for (name, s, t) in framing {
        if (s == FRAMING_VERTEX) == (t == FRAMING_VERTEX) {
            return Err(Error::InvalidFraming(name.clone()));
        }
        quiver.add_arrow(name.clone(), s, t)?;
    }
    Ok(FramedQuiver {
        quiver,
        base_vertices: base.num_vertices(),
        base_arrows: base.num_arrows(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HatQuiver {
    pub quiver: Quiver,
    pub levels: i64,
    /// `(framed vertex, level)` for every hat vertex.
    pub vertex_of: Vec<(VertexId, i64)>,
    /// `(framed arrow, source level)` for every hat arrow.
    pub arrow_of: Vec<(ArrowId, i64)>,
    pub theta: StabilityParam,
    pub weights: WeightFunction,
}

impl HatQuiver {
    pub fn vertex(&self, i: VertexId, n: i64) -> VertexId {
        let width = (2 * self.levels + 1) as usize;
        i * width + (n + self.levels) as usize
    }

    /// Level-collapsed dimension vector on the framed quiver.
    pub fn collapse(&self, hat: &DimVector, framed_vertices: usize) -> DimVector {
        let mut out = vec![0; framed_vertices];
        for (v, (i, _)) in self.vertex_of.iter().enumerate() {
            out[*i] += hat.0[v];
        }
        DimVector(out)
    }
}

pub fn hat_vertex_name(vertex: &str, level: i64) -> String {
    format!("{vertex}@{level}")
}

/// Builds the hat quiver for dimension vector `a` on the unframed vertices.
/// Levels run over `-N..=N` with `N = (|a| + 1) * max wt`.
pub fn build_hat_quiver(
    framed: &FramedQuiver,
    wt: &WeightFunction,
    a: &DimVector,
    theta: &StabilityParam,
) -> Result<HatQuiver> {
    let q = framed.quiver();
    if wt.0.len() != q.num_arrows() {
        return Err(Error::DimensionMismatch {
            expected: q.num_arrows(),
            found: wt.0.len(),
        });
    }
    if a.len() != framed.base_vertices() {
        return Err(Error::DimensionMismatch {
            expected: framed.base_vertices(),
            found: a.len(),
        });
    }
    if theta.len() != q.num_vertices() {
        return Err(Error::DimensionMismatch {
            expected: q.num_vertices(),
            found: theta.len(),
        });
    }
    if let Some(f) = framed.framing_arrows().find(|f| wt.of(*f) == 0) {
        return Err(Error::Invalid(format!(
            "framing arrow `{}` must have positive weight",
            q.arrow(f).name
        )));
    }
    check_positive_on_cycles(q, wt).map_err(|c| Error::ZeroWeightCycle(q.path_names(&c)))?;

    let levels = (a.total() + 1)
        .checked_mul(wt.max())
        .filter(|n| *n <= MAX_LEVELS)
        .ok_or_else(|| Error::Invalid(format!("hat quiver would need more than {MAX_LEVELS} levels")))?
        as i64;
    let mut hat = Quiver::new(Vec::<String>::new(), Vec::<(String, &str, &str)>::new())?;
    let mut vertex_of = Vec::new();
    let mut thetas = Vec::new();
    for (i, name) in q.vertices().iter().enumerate() {
        for n in -levels..=levels {
            hat.add_vertex(hat_vertex_name(name, n))?;
            vertex_of.push((i, n));
            thetas.push(theta.0[i].clone());
        }
    }
    let mut arrow_of = Vec::new();
    let mut weights = Vec::new();
    for (id, arrow) in q.arrows().iter().enumerate() {
        let shift = wt.of(id) as i64;
        for n in -levels..=levels - shift {
            hat.add_arrow(
                hat_vertex_name(&arrow.name, n),
                &hat_vertex_name(&q.vertices()[arrow.source], n),
                &hat_vertex_name(&q.vertices()[arrow.target], n + shift),
            )?;
            arrow_of.push((id, n));
            weights.push(wt.of(id));
        }
    }
    Ok(HatQuiver {
        quiver: hat,
        levels,
        vertex_of,
        arrow_of,
        theta: StabilityParam(thetas),
        weights: WeightFunction(weights),
    })
}

/// Every way to spread `a_i` over the levels of vertex `i`, with the framing
/// vertex fixed to dimension one at level zero.
pub fn hat_dim_vectors(hat: &HatQuiver, framed: &FramedQuiver, a: &DimVector) -> Vec<DimVector> {
    let width = (2 * hat.levels + 1) as usize;
    let mut out = vec![vec![0u32; hat.quiver.num_vertices()]];
    for (i, &n) in a.0.iter().enumerate() {
        let mut next = Vec::new();
        for partial in &out {
            for spread in spreads(n, width) {
                let mut v = partial.clone();
                v[i * width..(i + 1) * width].copy_from_slice(&spread);
                next.push(v);
            }
        }
        out = next;
    }
    let star = hat.vertex(framed.star(), 0);
    for v in &mut out {
        v[star] = 1;
    }
    out.into_iter().map(DimVector).collect()
}

/// Weak compositions of `n` into `parts` parts.
fn spreads(n: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in 0..=n {
        for mut rest in spreads(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Reassembles a hat representation as a representation of the framed
/// quiver, stacking the levels of each vertex in increasing order.
pub fn reassemble(hat: &HatQuiver, framed: &FramedQuiver, m: &Representation) -> Result<Representation> {
    let q = framed.quiver();
    let mut offset = vec![0usize; hat.quiver.num_vertices()];
    let mut dims = vec![0u32; q.num_vertices()];
    for (v, (i, _)) in hat.vertex_of.iter().enumerate() {
        offset[v] = dims[*i] as usize;
        dims[*i] += m.dims().0[v];
    }
    let mut maps: Vec<Mat> = q
        .arrows()
        .iter()
        .map(|a| Mat::zero(dims[a.target] as usize, dims[a.source] as usize))
        .collect();
    for (h, (id, _)) in hat.arrow_of.iter().enumerate() {
        let arrow = hat.quiver.arrow(h);
        let block = m.map(h);
        for r in 0..block.rows() {
            for c in 0..block.cols() {
                maps[*id].set(offset[arrow.target] + r, offset[arrow.source] + c, block.get(r, c));
            }
        }
    }
    Representation::new(q, DimVector(dims), maps)
}

/// Checks on every hat point of every hat dimension vector over `a` that a
/// semistable hat representation reassembles to a semistable framed one.
pub fn graded_semistability_consistent(
    framed: &FramedQuiver,
    hat: &HatQuiver,
    a: &DimVector,
    theta: &StabilityParam,
    field: &Field,
    budget: Budget,
) -> Result<bool> {
    let hat_ctx = RepContext::new(hat.quiver.clone(), field.clone(), budget);
    let framed_ctx = RepContext::new(framed.quiver().clone(), field.clone(), budget);
    for dims in hat_dim_vectors(hat, framed, a) {
        for m in hat_ctx.points(&dims)? {
            if hat_ctx.is_semistable(&m, &hat.theta)? && !framed_ctx.is_semistable(&reassemble(hat, framed, &m)?, theta)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
