//! Lattice windows, finite lattice sets, basis families of lattice traces and
//! the floor-lift identity between discrete and continuous box averages.

mod average;
mod basis;
mod set;
mod window;

pub use average::{box_average, lift_measure, lifted_box_average};
pub use basis::{
    BasisElement, BasisFamily, BasisKind, Descriptor, FamilySpec, Trace, DEFAULT_ENUMERATION_CAP,
};
pub use set::LatticeSet;
pub use window::Window;

/// An integer vector in `Z^n`.
pub type Point = alloc::vec::Vec<i64>;
