//! Exact counting Donaldson-Thomas invariants of quivers with potentials over
//! finite fields.
//!
//! The crate is organised bottom-up:
//!
//! - [`quiver`]: quivers, potentials, weight functions, bilinear forms, slopes
//! - [`lattice`]: Smith normal form and the grading lattice of a potential
//! - [`ffield`] and [`linalg`]: finite fields, matrices, subspaces, `GL` groups
//! - [`cyclo`]: the coefficient ring `Q(zeta_p)[s]/(s^2 - q)`
//! - [`rep`]: representations, stability, point counts, Hall numbers
//! - [`hall`]: the Hall algebra and its semistable generating elements
//! - [`qtorus`]: the quantum torus and the integration maps
//! - [`dt`]: invariants, the Harder-Narasimhan relation, wall-crossing
//! - [`framed`]: framed quivers and the level-graded fixed-point quiver
//! - [`fixture`]: the text format for quivers with potentials

pub mod cyclo;
pub mod dt;
pub mod error;
pub mod ffield;
pub mod fixture;
pub mod framed;
pub mod hall;
pub mod lattice;
pub mod linalg;
pub mod qtorus;
pub mod quiver;
pub mod rep;

pub use cyclo::{Coef, CoefRing};
pub use error::{Error, Result};
pub use ffield::{Field, FieldElem};


pub use quiver::{DimVector, Potential, Quiver, Rational, StabilityParam, WeightFunction};
pub use hall::HallElement;
pub use qtorus::QTorusSeries;
pub use rep::{Budget, RepContext, Representation};
