//! Integer lattices: Smith normal form with transforms, integral linear
//! systems, and the grading lattice attached to a potential.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::quiver::{Potential, Quiver};

pub type IntMatrix = Vec<Vec<BigInt>>;

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// `left * a * right = diagonal`, with `diagonal[i][i]` dividing
/// `diagonal[i+1][i+1]` and all diagonal entries nonnegative.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: IntMatrix,
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.diagonal[i][i].clone()).collect()
    }
}

struct Reducer {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
    m: usize,
    n: usize,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        for row in self.v.iter_mut() {
            row.swap(i, j);
        }
    }

    /// row_i -= k * row_j
    fn row_sub(&mut self, i: usize, j: usize, k: &BigInt) {
        for c in 0..self.n {
            let t = &self.a[j][c] * k;
            self.a[i][c] -= t;
        }
        for c in 0..self.m {
            let t = &self.u[j][c] * k;
            self.u[i][c] -= t;
        }
    }

    /// col_i -= k * col_j
    fn col_sub(&mut self, i: usize, j: usize, k: &BigInt) {
        for r in 0..self.m {
            let t = &self.a[r][j] * k;
            self.a[r][i] -= t;
        }
        for r in 0..self.n {
            let t = &self.v[r][j] * k;
            self.v[r][i] -= t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -&*x;
        }
        for x in self.u[i].iter_mut() {
            *x = -&*x;
        }
    }
}

pub fn smith_normal_form(a: &IntMatrix, cols: usize) -> SmithForm {
    let m = a.len();
    let n = cols;
    let mut r = Reducer {
        a: a.clone(),
        u: identity(m),
        v: identity(n),
        m,
        n,
    };
    let mut t = 0;
    while t < m.min(n) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let pivot = (t..m)
            .flat_map(|i| (t..n).map(move |j| (i, j)))
            .filter(|&(i, j)| !r.a[i][j].is_zero())
            .min_by_key(|&(i, j)| r.a[i][j].abs());
        let Some((pi, pj)) = pivot else { break };
        r.swap_rows(t, pi);
        r.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if r.a[i][t].is_zero() {
                    continue;
                }
                let k = r.a[i][t].div_floor(&r.a[t][t]);
                r.row_sub(i, t, &k);
                if !r.a[i][t].is_zero() {
                    r.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if r.a[t][j].is_zero() {
                    continue;
                }
                let k = r.a[t][j].div_floor(&r.a[t][t]);
                r.col_sub(j, t, &k);
                if !r.a[t][j].is_zero() {
                    r.swap_cols(t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility: fold a row with an offending entry into row t
            let offending = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&r.a[i][j] % &r.a[t][t]).is_zero()));
            match offending {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    r.row_sub(t, i, &minus_one);
                }
                None => break,
            }
        }
        if r.a[t][t].is_negative() {
            r.negate_row(t);
        }
        t += 1;
    }
    SmithForm {
        diagonal: r.a,
        left: r.u,
        right: r.v,
        rank: t,
    }
}

fn mat_vec(a: &IntMatrix, x: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
}

/// An integral solution of `a x = b`, if one exists.
pub fn solve_integral(a: &IntMatrix, cols: usize, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.len(), b.len());
    let snf = smith_normal_form(a, cols);
    let ub = mat_vec(&snf.left, b);
    let mut y = vec![BigInt::zero(); cols];
    for (i, c) in ub.iter().enumerate() {
        if i < snf.rank {
            let d = &snf.diagonal[i][i];
            if !(c % d).is_zero() {
                return None;
            }
            y[i] = c / d;
        } else if !c.is_zero() {
            return None;
        }
    }
    Some(mat_vec(&snf.right, &y))
}

/// The lattice `(Z^{arrows} + Z) / <(content(u), -1)>` with one relation per
/// cycle `u` of the potential, and the class `omega` of `(0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradingLattice {
    relations: IntMatrix,
    arrows: usize,
}

impl GradingLattice {
    pub fn new(quiver: &Quiver, w: &Potential) -> Self {
        let arrows = quiver.num_arrows();
        let relations = w
            .terms()
            .map(|(_, cycle)| {
                let mut row = vec![BigInt::zero(); arrows + 1];
                for a in cycle {
                    row[*a] += 1;
                }
                row[arrows] = -BigInt::one();
                row
            })
            .collect();
        GradingLattice { relations, arrows }
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn columns(&self) -> usize {
        self.arrows + 1
    }

    /// Free rank and torsion coefficients (those greater than one).
    pub fn structure(&self) -> (usize, Vec<BigInt>) {
        let snf = smith_normal_form(&self.relations, self.columns());
        let torsion = snf.invariant_factors().into_iter().filter(|d| !d.is_one()).collect();
        (self.columns() - snf.rank, torsion)
    }

    fn contents(&self) -> IntMatrix {
        self.relations.iter().map(|r| r[..self.arrows].to_vec()).collect()
    }

    /// `omega` is a split monomorphism iff some integer function `g` on arrows
    /// has `g(content(u)) = 1` for every cycle `u`. Returns such a `g`.
    pub fn check_primitive(&self) -> Option<Vec<i64>> {
        let ones = vec![BigInt::one(); self.relations.len()];
        solve_integral(&self.contents(), self.arrows, &ones)
            .map(|g| g.iter().map(|x| x.to_i64().expect("witness fits in i64")).collect())
    }

    /// Checks `g(content(u)) = 1` for all cycles.
    pub fn is_witness(&self, g: &[i64]) -> bool {
        g.len() == self.arrows
            && self
                .contents()
                .iter()
                .all(|row| row.iter().zip(g).map(|(c, x)| c * BigInt::from(*x)).sum::<BigInt>() == BigInt::one())
    }
}
