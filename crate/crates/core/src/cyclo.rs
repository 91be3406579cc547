//! The coefficient ring `Q(zeta_p)[s] / (s^2 - q)`.
//!
//! `s` plays the role of a square root of `q`, and `zeta` is a primitive `p`-th
//! root of unity that carries the values of the additive character. Elements
//! are stored on the basis `zeta^k`, `0 <= k < p - 1`, with each coordinate a
//! pair `(r0, r1)` meaning `r0 + r1 s`.
//!
//! The ring is not always a field, so only division by nonzero rationals is
//! offered.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quiver::{rational_string, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CoefRing {
    p: u32,
    q: u64,
}

impl CoefRing {
    /// `p` must be prime and `q` a power of `p`; this is not rechecked here.
    pub fn new(p: u32, q: u64) -> Self {
        assert!(p >= 2, "characteristic must be at least 2");
        CoefRing { p, q }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    fn width(&self) -> usize {
        self.p as usize - 1
    }

    pub fn zero(&self) -> Coef {
        Coef {
            ring: *self,
            c: vec![[Rational::zero(), Rational::zero()]; self.width()],
        }
    }

    pub fn one(&self) -> Coef {
        self.rational(Rational::one())
    }

    pub fn rational(&self, r: Rational) -> Coef {
        let mut x = self.zero();
        x.c[0][0] = r;
        x
    }

    pub fn integer(&self, n: i64) -> Coef {
        self.rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn q_value(&self) -> Rational {
        Rational::from_integer(BigInt::from(self.q))
    }

    /// The square root `s` of `q`.
    pub fn s(&self) -> Coef {
        let mut x = self.zero();
        x.c[0][1] = Rational::one();
        x
    }

    /// `zeta^k` for any integer `k`.
    pub fn zeta_pow(&self, k: i64) -> Coef {
        let e = k.rem_euclid(self.p as i64) as usize;
        let mut x = self.zero();
        x.add_zeta_term(e, &[Rational::one(), Rational::zero()]);
        x
    }

    /// `(-s)^n`, using `s^{-1} = s / q` for negative `n`.
    pub fn neg_s_pow(&self, n: i64) -> Coef {
        let q = self.q_value();
        let half = n.div_euclid(2);
        let odd = n.rem_euclid(2) == 1;
        // (-s)^n = (-1)^n s^n, s^{2h} = q^h, s^{2h+1} = q^h s
        let mag = if half >= 0 {
            num_traits::pow(q, half as usize)
        } else {
            Rational::one() / num_traits::pow(q, (-half) as usize)
        };
        let mut x = self.zero();
        if odd {
            x.c[0][1] = -mag;
        } else {
            x.c[0][0] = mag;
        }
        x
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coef {
    ring: CoefRing,
    c: Vec<[Rational; 2]>,
}

impl Coef {
    pub fn ring(&self) -> CoefRing {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|[a, b]| a.is_zero() && b.is_zero())
    }

    /// The `(r0, r1)` pair at `zeta^k`.
    pub fn coefficient(&self, k: usize) -> (&Rational, &Rational) {
        (&self.c[k][0], &self.c[k][1])
    }

    /// The rational number this element equals, if it has no `s` or `zeta` part.
    pub fn as_rational(&self) -> Option<Rational> {
        let rest_zero = self.c[0][1].is_zero() && self.c[1..].iter().all(|[a, b]| a.is_zero() && b.is_zero());
        rest_zero.then(|| self.c[0][0].clone())
    }

    /// The pair `(r0, r1)` with `self = r0 + r1 s`, if no `zeta` appears.
    pub fn as_s_linear(&self) -> Option<(Rational, Rational)> {
        self.c[1..]
            .iter()
            .all(|[a, b]| a.is_zero() && b.is_zero())
            .then(|| (self.c[0][0].clone(), self.c[0][1].clone()))
    }

    fn add_zeta_term(&mut self, e: usize, v: &[Rational; 2]) {
        let p = self.ring.p as usize;
        let e = e % p;
        if e == p - 1 {
            // zeta^{p-1} = -(1 + zeta + ... + zeta^{p-2})
            for slot in self.c.iter_mut() {
                slot[0] -= &v[0];
                slot[1] -= &v[1];
            }
        } else {
            self.c[e][0] += &v[0];
            self.c[e][1] += &v[1];
        }
    }

    pub fn scale(&self, r: &Rational) -> Coef {
        Coef {
            ring: self.ring,
            c: self.c.iter().map(|[a, b]| [a * r, b * r]).collect(),
        }
    }

    pub fn div_rational(&self, r: &Rational) -> Result<Coef> {
        if r.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.scale(&(Rational::one() / r)))
    }

    fn check_ring(&self, other: &Coef) {
        assert_eq!(self.ring, other.ring, "coefficients from different rings");
    }
}

impl Add for &Coef {
    type Output = Coef;
    fn add(self, rhs: &Coef) -> Coef {
        self.check_ring(rhs);
        Coef {
            ring: self.ring,
            c: self.c.iter().zip(&rhs.c).map(|([a, b], [c, d])| [a + c, b + d]).collect(),
        }
    }
}

impl Sub for &Coef {
    type Output = Coef;
    fn sub(self, rhs: &Coef) -> Coef {
        self + &(-rhs)
    }
}

impl Neg for &Coef {
    type Output = Coef;
    fn neg(self) -> Coef {
        Coef {
            ring: self.ring,
            c: self.c.iter().map(|[a, b]| [-a, -b]).collect(),
        }
    }
}

impl Mul for &Coef {
    type Output = Coef;
    fn mul(self, rhs: &Coef) -> Coef {
        self.check_ring(rhs);
        let q = self.ring.q_value();
        let mut out = self.ring.zero();
        for (i, [a0, a1]) in self.c.iter().enumerate() {
            if a0.is_zero() && a1.is_zero() {
                continue;
            }
            for (j, [b0, b1]) in rhs.c.iter().enumerate() {
                if b0.is_zero() && b1.is_zero() {
                    continue;
                }
                let r0 = a0 * b0 + &q * a1 * b1;
                let r1 = a0 * b1 + a1 * b0;
                out.add_zeta_term(i + j, &[r0, r1]);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Coef {
            type Output = Coef;
            fn $m(self, rhs: Coef) -> Coef {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Coef {
    type Output = Coef;
    fn neg(self) -> Coef {
        -&self
    }
}

fn s_linear_string(r0: &Rational, r1: &Rational) -> String {
    let s_part = |r: &Rational| {
        if r.is_one() {
            "s".to_string()
        } else if *r == -Rational::one() {
            "-s".to_string()
        } else {
            format!("{}*s", rational_string(r))
        }
    };
    match (r0.is_zero(), r1.is_zero()) {
        (true, true) => "0".into(),
        (false, true) => rational_string(r0),
        (true, false) => s_part(r1),
        (false, false) => {
            let tail = s_part(r1);
            match tail.strip_prefix('-') {
                Some(t) => format!("{} - {}", rational_string(r0), t),
                None => format!("{} + {}", rational_string(r0), tail),
            }
        }
    }
}

impl fmt::Display for Coef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, [a, b]) in self.c.iter().enumerate() {
            if a.is_zero() && b.is_zero() {
                continue;
            }
            let inner = s_linear_string(a, b);
            parts.push(match k {
                0 => inner,
                _ => {
                    let z = if k == 1 { "z".to_string() } else { format!("z^{k}") };
                    if inner == "1" {
                        z
                    } else {
                        format!("({inner})*{z}")
                    }
                }
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

fn int_json(n: &BigInt) -> serde_json_like::Value {
    match n.to_i64() {
        Some(v) => serde_json_like::Value::Int(v),
        None => serde_json_like::Value::Str(n.to_string()),
    }
}

fn rational_json(r: &Rational) -> serde_json_like::Value {
    if r.is_integer() {
        int_json(r.numer())
    } else {
        serde_json_like::Value::Str(rational_string(r))
    }
}

/// Tiny serializable scalar, so the core crate does not need a JSON dependency.
mod serde_json_like {
    use serde::{Serialize, Serializer};

    pub enum Value {
        Int(i64),
        Str(String),
    }

    impl Serialize for Value {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            match self {
                Value::Int(v) => s.serialize_i64(*v),
                Value::Str(v) => s.serialize_str(v),
            }
        }
    }
}

/// Serialized as `{"zeta_powers": [[r0_num, r0_den, r1_num, r1_den], ...]}`,
/// plus `"s": [r0, r1]` when no power of `zeta` appears.
impl Serialize for Coef {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let powers: Vec<[serde_json_like::Value; 4]> = self
            .c
            .iter()
            .map(|[a, b]| [int_json(a.numer()), int_json(a.denom()), int_json(b.numer()), int_json(b.denom())])
            .collect();
        let linear = self.as_s_linear();
        let mut map = s.serialize_map(Some(if linear.is_some() { 2 } else { 1 }))?;
        map.serialize_entry("zeta_powers", &powers)?;
        if let Some((r0, r1)) = linear {
            map.serialize_entry("s", &[rational_json(&r0), rational_json(&r1)])?;
        }
        map.end()
    }
}
