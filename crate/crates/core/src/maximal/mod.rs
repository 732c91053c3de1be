//! Discrete maximal fields `M_F chi_E` with exact rational values.

mod kernel;

use alloc::vec::Vec;

pub use kernel::{Avg, Kernel, Scratch};

use crate::lattice::{BasisFamily, BasisKind, LatticeSet, Point, Window};
use crate::rational::{ratio, Rational, Threshold};
use crate::{Error, Result};

/// Values of a maximal operator on an evaluation window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalField {
    window: Window,
    values: Vec<Rational>,
    kind: BasisKind,
    truncation: i64,
}

impl MaximalField {
    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn truncation(&self) -> i64 {
        self.truncation
    }

    /// Values in window order.
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, point: &[i64]) -> Option<&Rational> {
        self.window.index_of(point).map(|i| &self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (Point, &Rational)> + '_ {
        self.window.points().zip(&self.values)
    }

    pub fn level_set(&self, alpha: &Rational) -> Result<LatticeSet> {
        level_set(self, alpha)
    }
}

fn check_dims(set: &LatticeSet, family: &BasisFamily, window: &Window) -> Result<()> {
    let n = family.dim();
    for found in [set.dim(), window.dim()] {
        if found != n {
            return Err(Error::DimensionMismatch { expected: n, found });
        }
    }
    Ok(())
}

/// Evaluation window that catches every nonzero value: the set's window
/// dilated by `truncation - 1`.
pub fn default_window(set: &LatticeSet, family: &BasisFamily) -> Result<Window> {
    set.window().dilate(family.truncation() - 1)
}

/// Reference evaluation: every element, every offset, one membership test each.
pub fn maximal_field_naive(
    set: &LatticeSet,
    family: &BasisFamily,
    window: &Window,
) -> Result<MaximalField> {
    check_dims(set, family, window)?;
    let zero = ratio(0, 1);
    let cells = set.to_indicator(set.window());
    let member = |p: &[i64]| set.window().index_of(p).is_some_and(|i| cells[i]);
    let mut shifted = alloc::vec![0i64; family.dim()];
    let values = window
        .points()
        .map(|m| {
            let mut best = zero.clone();
            for e in family.elements() {
                let hits = e
                    .trace
                    .offsets()
                    .filter(|j| {
                        for i in 0..m.len() {
                            shifted[i] = m[i] + j[i];
                        }
                        member(&shifted)
                    })
                    .count();
                let avg = ratio(hits as u64, e.trace.len() as u64);
                if avg > best {
                    best = avg;
                }
            }
            best
        })
        .collect();
    Ok(MaximalField {
        window: window.clone(),
        values,
        kind: family.kind(),
        truncation: family.truncation(),
    })
}

/// Same values as [`maximal_field_naive`], through a [`Kernel`].
pub fn maximal_field(set: &LatticeSet, family: &BasisFamily, window: &Window) -> Result<MaximalField> {
    check_dims(set, family, window)?;
    let kernel = Kernel::new(family, window.clone())?;
    let cells = set.to_indicator(kernel.grid());
    let mut averages = Vec::new();
    kernel.best_averages(&cells, &mut Scratch::default(), &mut averages);
    Ok(MaximalField {
        window: window.clone(),
        values: averages.iter().map(|a| ratio(a.hits as u64, a.size as u64)).collect(),
        kind: family.kind(),
        truncation: family.truncation(),
    })
}

/// `{m in window : value(m) > alpha}`, strict.
pub fn level_set(field: &MaximalField, alpha: &Rational) -> Result<LatticeSet> {
    let threshold = Threshold::new(alpha)?;
    let points = field
        .iter()
        .filter(|(_, v)| threshold.exceeded_by_rational(v))
        .map(|(p, _)| p);
    LatticeSet::new(field.window.clone(), points)
}
