use alloc::vec::Vec;

use super::Point;
use crate::{Error, Result};

/// Axis-parallel box of lattice points `lo[i] ..= hi[i]`.
///
/// Cells are addressed in row-major order with the first axis slowest, which
/// coincides with the lexicographic order of the points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Window {
    lo: Vec<i64>,
    hi: Vec<i64>,
}

impl Window {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.is_empty() {
            return Err(Error::ZeroDimension);
        }
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch { expected: lo.len(), found: hi.len() });
        }
        if let Some(axis) = (0..lo.len()).find(|&i| lo[i] > hi[i]) {
            return Err(Error::EmptyWindow { axis });
        }
        let window = Self { lo, hi };
        window.checked_cell_count().ok_or(Error::WindowTooLarge)?;
        Ok(window)
    }

    /// `[-radius, radius]^dim`.
    pub fn cube(dim: usize, radius: i64) -> Result<Self> {
        Self::new(alloc::vec![-radius; dim], alloc::vec![radius; dim])
    }

    /// The integer points of the open cube `(-r, r)^dim`.
    pub fn open_cube(dim: usize, r: i64) -> Result<Self> {
        if r < 1 {
            return Err(Error::InvalidTruncation(r));
        }
        Self::cube(dim, r - 1)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    pub fn side(&self, axis: usize) -> usize {
        (self.hi[axis] - self.lo[axis] + 1) as usize
    }

    pub fn sides(&self) -> Vec<usize> {
        (0..self.dim()).map(|i| self.side(i)).collect()
    }

    fn checked_cell_count(&self) -> Option<usize> {
        let mut total: usize = 1;
        for i in 0..self.dim() {
            let side = self.hi[i].checked_sub(self.lo[i])?.checked_add(1)?;
            total = total.checked_mul(usize::try_from(side).ok()?)?;
        }
        Some(total)
    }

    pub fn cell_count(&self) -> usize {
        self.checked_cell_count().expect("validated at construction")
    }

    pub fn contains(&self, point: &[i64]) -> bool {
        point.len() == self.dim()
            && point.iter().zip(&self.lo).zip(&self.hi).all(|((p, l), h)| l <= p && p <= h)
    }

    pub fn contains_window(&self, other: &Window) -> bool {
        other.dim() == self.dim() && self.contains(&other.lo) && self.contains(&other.hi)
    }

    /// Row-major strides (last axis contiguous).
    pub fn strides(&self) -> Vec<usize> {
        let n = self.dim();
        let mut strides = alloc::vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.side(i + 1);
        }
        strides
    }

    pub fn index_of(&self, point: &[i64]) -> Option<usize> {
        if !self.contains(point) {
            return None;
        }
        Some(point.iter().enumerate().fold(0usize, |index, (i, p)| {
            index * self.side(i) + (p - self.lo[i]) as usize
        }))
    }

    pub fn point_at(&self, mut index: usize) -> Point {
        let n = self.dim();
        let mut point = alloc::vec![0i64; n];
        for i in (0..n).rev() {
            let side = self.side(i);
            point[i] = self.lo[i] + (index % side) as i64;
            index /= side;
        }
        point
    }

    /// Points in lexicographic order.
    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.cell_count()).map(move |i| self.point_at(i))
    }

    /// Grows every side by `by` cells on both ends.
    pub fn dilate(&self, by: i64) -> Result<Self> {
        Self::new(
            self.lo.iter().map(|v| v - by).collect(),
            self.hi.iter().map(|v| v + by).collect(),
        )
    }

    pub fn translate(&self, shift: &[i64]) -> Result<Self> {
        if shift.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: shift.len() });
        }
        Self::new(
            self.lo.iter().zip(shift).map(|(v, s)| v + s).collect(),
            self.hi.iter().zip(shift).map(|(v, s)| v + s).collect(),
        )
    }

    /// Smallest window containing both.
    pub fn hull(&self, other: &Window) -> Result<Self> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Self::new(
            self.lo.iter().zip(&other.lo).map(|(a, b)| *a.min(b)).collect(),
            self.hi.iter().zip(&other.hi).map(|(a, b)| *a.max(b)).collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_bad_bounds() {
        assert_eq!(Window::new(vec![], vec![]), Err(Error::ZeroDimension));
        assert_eq!(Window::new(vec![0, 2], vec![1, 1]), Err(Error::EmptyWindow { axis: 1 }));
        assert!(Window::new(vec![0], vec![0, 1]).is_err());
        assert_eq!(Window::new(vec![i64::MIN], vec![i64::MAX]), Err(Error::WindowTooLarge));
    }

    #[test]
    fn index_round_trip_is_lexicographic() {
        let w = Window::new(vec![-1, 2], vec![1, 4]).unwrap();
        assert_eq!(w.cell_count(), 9);
        let pts: Vec<Point> = w.points().collect();
        let mut sorted = pts.clone();
        sorted.sort();
        assert_eq!(pts, sorted);
        for (i, p) in pts.iter().enumerate() {
            assert_eq!(w.index_of(p), Some(i));
        }
        assert_eq!(w.index_of(&[2, 2]), None);
        assert_eq!(w.strides(), vec![3, 1]);
    }

    #[test]
    fn open_cube_excludes_boundary() {
        let w = Window::open_cube(2, 3).unwrap();
        assert_eq!(w.lo(), &[-2, -2]);
        assert_eq!(w.hi(), &[2, 2]);
        assert!(Window::open_cube(1, 0).is_err());
    }
}
