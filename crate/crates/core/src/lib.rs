//! Exact discrete and ergodic multiparameter maximal operators.
//!
//! The crate computes maximal fields of indicator functions on `Z^n` for
//! finite families of lattice traces (integer boxes, centered and uncentered
//! ball traces, one-sided intervals), sharp Tauberian ratios and their
//! exhaustive or randomized maximization, and the ergodic counterparts on
//! finite weighted probability spaces with commuting measure-preserving
//! permutations, including the pointwise transference identity between the
//! two settings. [`analysis`] holds the closed-form quantities (ball-count
//! sandwich, the uncentered rescaling factor, reference exponents and
//! log-log exponent fits) and is the only module that uses floating point.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod ergodic;
mod error;
pub mod lattice;
pub mod maximal;
pub mod rational;
pub mod tauberian;

pub use error::{Error, Result};
pub use lattice::{
    BasisElement, BasisFamily, BasisKind, Descriptor, FamilySpec, LatticeSet, Point, Trace,
    Window, DEFAULT_ENUMERATION_CAP,
};
pub use maximal::{level_set, maximal_field, maximal_field_naive, MaximalField};
pub use rational::{Rational, Threshold};
