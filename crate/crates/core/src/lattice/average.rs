use super::{BasisElement, LatticeSet};
use crate::rational::{ratio, Rational};
use crate::{Error, Result};

fn check_dims(set: &LatticeSet, point: &[i64], element: &BasisElement) -> Result<()> {
    let n = set.dim();
    for found in [point.len(), element.trace.dim()] {
        if found != n {
            return Err(Error::DimensionMismatch { expected: n, found });
        }
    }
    Ok(())
}

/// `#{j in trace : m + j in E} / #trace`, counted over the trace.
pub fn box_average(set: &LatticeSet, point: &[i64], element: &BasisElement) -> Result<Rational> {
    check_dims(set, point, element)?;
    let mut shifted = alloc::vec![0i64; point.len()];
    let hits = element
        .trace
        .offsets()
        .filter(|j| {
            for (s, (m, o)) in shifted.iter_mut().zip(point.iter().zip(j.iter())) {
                *s = m + o;
            }
            set.contains(&shifted)
        })
        .count();
    Ok(ratio(hits as u64, element.trace.len() as u64))
}

/// Measure of `[lo, hi)` intersected with `[a, b)` for integer endpoints.
fn overlap(lo: i64, hi: i64, a: i64, b: i64) -> u64 {
    (hi.min(b) - lo.max(a)).max(0) as u64
}

/// Continuous average of the floor-lift `chi_E(floor(x))` over the rectangle
/// `prod [m_i + a_i, m_i + b_i + 1)`, where `a ..= b` are the box corners.
///
/// Computed from the set side: each point of `E` contributes the volume of
/// its unit cube inside the rectangle.
pub fn lifted_box_average(
    set: &LatticeSet,
    point: &[i64],
    element: &BasisElement,
) -> Result<Rational> {
    check_dims(set, point, element)?;
    let (a, b) = element.box_corners().ok_or(Error::NotABox)?;
    let lo: alloc::vec::Vec<i64> = point.iter().zip(&a).map(|(m, a)| m + a).collect();
    let hi: alloc::vec::Vec<i64> = point.iter().zip(&b).map(|(m, b)| m + b + 1).collect();
    let volume: u64 = lo.iter().zip(&hi).map(|(l, h)| (h - l) as u64).product();
    let covered: u64 = set
        .iter()
        .map(|e| {
            (0..e.len())
                .map(|i| overlap(e[i], e[i] + 1, lo[i], hi[i]))
                .product::<u64>()
        })
        .sum();
    Ok(ratio(covered, volume))
}

/// Lebesgue measure of the floor-lift of `E` inside its window's rectangle.
pub fn lift_measure(set: &LatticeSet) -> u64 {
    let w = set.window();
    set.iter()
        .map(|e| {
            (0..e.len())
                .map(|i| overlap(e[i], e[i] + 1, w.lo()[i], w.hi()[i] + 1))
                .product::<u64>()
        })
        .sum()
}
