use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::{Point, Window};
use crate::{Error, Result};

/// A finite subset of `Z^n` together with a window that contains it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeSet {
    window: Window,
    points: BTreeSet<Point>,
}

impl LatticeSet {
    /// Duplicate points collapse; a point outside `window` is an error.
    pub fn new(window: Window, points: impl IntoIterator<Item = Point>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for p in points {
            if p.len() != window.dim() {
                return Err(Error::DimensionMismatch { expected: window.dim(), found: p.len() });
            }
            if !window.contains(&p) {
                return Err(Error::PointOutsideWindow(p));
            }
            set.insert(p);
        }
        Ok(Self { window, points: set })
    }

    pub fn empty(window: Window) -> Self {
        Self { window, points: BTreeSet::new() }
    }

    /// The cells of `window` selected by `indicator` (indexed in window order).
    pub fn from_indicator(window: Window, indicator: &[bool]) -> Self {
        let points = indicator
            .iter()
            .enumerate()
            .filter(|(_, &on)| on)
            .map(|(i, _)| window.point_at(i))
            .collect();
        Self { window, points }
    }

    /// Bit `i` of `mask` selects cell `i` of `window`.
    pub fn from_mask(window: Window, mask: u64) -> Self {
        let points = (0..window.cell_count().min(64))
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| window.point_at(i))
            .collect();
        Self { window, points }
    }

    pub fn dim(&self) -> usize {
        self.window.dim()
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, point: &[i64]) -> bool {
        self.points.contains(point)
    }

    /// Points in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = &Point> + '_ {
        self.points.iter()
    }

    pub fn to_indicator(&self, window: &Window) -> Vec<bool> {
        let mut out = alloc::vec![false; window.cell_count()];
        for p in &self.points {
            if let Some(i) = window.index_of(p) {
                out[i] = true;
            }
        }
        out
    }

    pub fn translate(&self, shift: &[i64]) -> Result<Self> {
        let window = self.window.translate(shift)?;
        let points = self
            .points
            .iter()
            .map(|p| p.iter().zip(shift).map(|(a, b)| a + b).collect())
            .collect();
        Ok(Self { window, points })
    }

    /// Same points, different (containing) window.
    pub fn with_window(&self, window: Window) -> Result<Self> {
        Self::new(window, self.points.iter().cloned())
    }

    pub fn is_subset(&self, other: &LatticeSet) -> bool {
        self.points.is_subset(&other.points)
    }

    pub fn into_points(self) -> BTreeSet<Point> {
        self.points
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_points_outside_window() {
        let w = Window::new(vec![0], vec![3]).unwrap();
        assert!(matches!(LatticeSet::new(w.clone(), [vec![4]]), Err(Error::PointOutsideWindow(_))));
        let s = LatticeSet::new(w, [vec![1], vec![1], vec![0]]).unwrap();
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn mask_and_indicator_agree() {
        let w = Window::new(vec![0, 0], vec![1, 2]).unwrap();
        let s = LatticeSet::from_mask(w.clone(), 0b100101);
        let ind = s.to_indicator(&w);
        assert_eq!(ind, vec![true, false, true, false, false, true]);
        assert_eq!(LatticeSet::from_indicator(w, &ind), s);
    }
}
