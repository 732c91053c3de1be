use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_rational::Ratio;

use super::{Point, Window};
use crate::{Error, Result};

/// Default bound on the number of enumerated basis elements (or candidates).
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisKind {
    /// Integer boxes containing the origin (traces of open axis-parallel rectangles).
    Box,
    /// Traces of open balls centered at the origin.
    CenteredBall,
    /// Traces of open balls containing the origin.
    UncenteredBall,
    /// One-dimensional forward windows `{0, .., N-1}`.
    OneSided,
}

impl BasisKind {
    pub const ALL: [BasisKind; 4] =
        [BasisKind::Box, BasisKind::CenteredBall, BasisKind::UncenteredBall, BasisKind::OneSided];

    pub fn as_str(self) -> &'static str {
        match self {
            BasisKind::Box => "box",
            BasisKind::CenteredBall => "centered-ball",
            BasisKind::UncenteredBall => "uncentered-ball",
            BasisKind::OneSided => "one-sided",
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BasisKind {
    type Err = ();

    fn from_str(s: &str) -> core::result::Result<Self, ()> {
        BasisKind::ALL.into_iter().find(|k| k.as_str() == s).ok_or(())
    }
}

/// A nonempty set of integer offsets, stored flat and sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Trace {
    dim: usize,
    coords: Vec<i64>,
}

impl Trace {
    pub fn new(dim: usize, points: impl IntoIterator<Item = Point>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut set = BTreeSet::new();
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
            }
            set.insert(p);
        }
        if set.is_empty() {
            return Err(Error::EmptyTrace);
        }
        Ok(Self { dim, coords: set.into_iter().flatten().collect() })
    }

    /// Every point of the box `lo ..= hi`.
    pub fn from_box(lo: &[i64], hi: &[i64]) -> Result<Self> {
        let window = Window::new(lo.to_vec(), hi.to_vec())?;
        Ok(Self { dim: lo.len(), coords: window.points().flatten().collect() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Offsets in lexicographic order.
    pub fn offsets(&self) -> core::slice::ChunksExact<'_, i64> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn contains(&self, offset: &[i64]) -> bool {
        if offset.len() != self.dim {
            return false;
        }
        let (mut lo, mut hi) = (0usize, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.coords[mid * self.dim..(mid + 1) * self.dim].cmp(offset) {
                core::cmp::Ordering::Less => lo = mid + 1,
                core::cmp::Ordering::Greater => hi = mid,
                core::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    pub fn contains_origin(&self) -> bool {
        self.contains(&alloc::vec![0; self.dim])
    }

    /// Per-axis minimum and maximum offsets.
    pub fn bounds(&self) -> (Vec<i64>, Vec<i64>) {
        let mut lo = alloc::vec![i64::MAX; self.dim];
        let mut hi = alloc::vec![i64::MIN; self.dim];
        for p in self.offsets() {
            for i in 0..self.dim {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        (lo, hi)
    }

    /// True when the trace is a full integer box.
    pub fn is_box(&self) -> bool {
        let (lo, hi) = self.bounds();
        let volume: usize = lo.iter().zip(&hi).map(|(a, b)| (b - a + 1) as usize).product();
        volume == self.len()
    }

    /// Largest `|offset_i|` over all offsets and axes.
    pub fn radius(&self) -> i64 {
        self.coords.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    pub fn negated(&self) -> Self {
        Self::new(self.dim, self.offsets().map(|p| p.iter().map(|v| -v).collect())).unwrap()
    }

    pub fn as_flat(&self) -> &[i64] {
        &self.coords
    }
}

/// Parameters a basis element was generated from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Descriptor {
    /// Corners `lo ..= hi` of an integer box.
    Box { lo: Vec<i64>, hi: Vec<i64> },
    /// Closed ball `|j - center|^2 <= radius_sq` with `center = center_num / center_den`.
    /// The trace equals the one of any open ball with a slightly larger radius.
    Ball { center_num: Vec<i64>, center_den: i64, radius_sq: Ratio<i64> },
    OneSided { length: i64 },
    /// Read back from a trace listing; only the trace is known.
    TraceOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisElement {
    pub kind: BasisKind,
    pub trace: Trace,
    pub descriptor: Descriptor,
}

impl BasisElement {
    pub fn integer_box(lo: &[i64], hi: &[i64]) -> Result<Self> {
        Ok(Self {
            kind: BasisKind::Box,
            trace: Trace::from_box(lo, hi)?,
            descriptor: Descriptor::Box { lo: lo.to_vec(), hi: hi.to_vec() },
        })
    }

    /// Box corners, when the trace is a full box.
    pub fn box_corners(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        self.trace.is_box().then(|| self.trace.bounds())
    }
}

/// What to enumerate: kind, dimension, truncation and (for uncentered balls)
/// the center grid parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    pub kind: BasisKind,
    pub dim: usize,
    pub truncation: i64,
    pub q: u64,
}

impl FamilySpec {
    pub fn new(kind: BasisKind, dim: usize, truncation: i64) -> Self {
        Self { kind, dim, truncation, q: 1 }
    }

    pub fn with_q(mut self, q: u64) -> Self {
        self.q = q;
        self
    }

    pub fn enumerate(&self, cap: u64) -> Result<BasisFamily> {
        match self.kind {
            BasisKind::Box => BasisFamily::boxes(self.dim, self.truncation, cap),
            BasisKind::CenteredBall => BasisFamily::centered_balls(self.dim, self.truncation, cap),
            BasisKind::UncenteredBall => {
                BasisFamily::uncentered_balls(self.dim, self.truncation, self.q, cap)
            }
            BasisKind::OneSided => {
                if self.dim != 1 {
                    return Err(Error::UnsupportedDimension("one-sided"));
                }
                BasisFamily::one_sided(self.truncation, cap)
            }
        }
    }
}

/// A finite basis restricted to `(-r, r)^n`, with pairwise distinct traces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisFamily {
    dim: usize,
    kind: BasisKind,
    truncation: i64,
    elements: Vec<BasisElement>,
}

fn check_cap(requested: u128, cap: u64) -> Result<()> {
    if requested > cap as u128 {
        return Err(Error::CapExceeded { requested, cap: cap as u128 });
    }
    Ok(())
}

fn check_shape(dim: usize, r: i64) -> Result<()> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    if r < 1 {
        return Err(Error::InvalidTruncation(r));
    }
    Ok(())
}

impl BasisFamily {
    /// Validates every family invariant; element order is kept.
    pub fn new(
        dim: usize,
        kind: BasisKind,
        truncation: i64,
        elements: Vec<BasisElement>,
    ) -> Result<Self> {
        check_shape(dim, truncation)?;
        if kind == BasisKind::OneSided && dim != 1 {
            return Err(Error::UnsupportedDimension("one-sided"));
        }
        let mut seen = BTreeSet::new();
        for (index, e) in elements.iter().enumerate() {
            if e.trace.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: e.trace.dim() });
            }
            if !e.trace.contains_origin() {
                return Err(Error::TraceMissingOrigin);
            }
            if e.trace.radius() >= truncation {
                return Err(Error::TraceOutsideTruncation { truncation });
            }
            if kind == BasisKind::Box && !e.trace.is_box() {
                return Err(Error::NotABox);
            }
            if !seen.insert(&e.trace) {
                return Err(Error::DuplicateTrace { index });
            }
        }
        Ok(Self { dim, kind, truncation, elements })
    }

    /// All boxes `prod {a_i ..= b_i}` with `-r < a_i <= 0 <= b_i < r`; `r^(2n)` elements.
    pub fn boxes(dim: usize, r: i64, cap: u64) -> Result<Self> {
        check_shape(dim, r)?;
        check_cap((r as u128).checked_pow(2 * dim as u32).unwrap_or(u128::MAX), cap)?;
        // corner pair per axis: a in -(r-1)..=0, b in 0..=r-1
        let corner_window = Window::new(alloc::vec![0; 2 * dim], alloc::vec![r - 1; 2 * dim])?;
        let mut elements: Vec<BasisElement> = corner_window
            .points()
            .map(|c| {
                let lo: Vec<i64> = c[..dim].iter().map(|v| -v).collect();
                let hi: Vec<i64> = c[dim..].to_vec();
                BasisElement::integer_box(&lo, &hi).expect("nonempty box")
            })
            .collect();
        sort_canonical(&mut elements);
        Self::new(dim, BasisKind::Box, r, elements)
    }

    /// One trace `{j : |j|^2 <= d}` per distinct squared norm `d < r^2`.
    pub fn centered_balls(dim: usize, r: i64, cap: u64) -> Result<Self> {
        check_shape(dim, r)?;
        let cube = Window::open_cube(dim, r)?;
        check_cap(cube.cell_count() as u128, cap)?;
        let r_sq = r * r;
        let mut by_norm: BTreeMap<i64, Vec<Point>> = BTreeMap::new();
        for p in cube.points() {
            let norm: i64 = p.iter().map(|v| v * v).sum();
            if norm < r_sq {
                by_norm.entry(norm).or_default().push(p);
            }
        }
        check_cap(by_norm.len() as u128, cap)?;
        let mut acc: Vec<Point> = Vec::new();
        let mut elements = Vec::with_capacity(by_norm.len());
        for (norm, shell) in by_norm {
            acc.extend(shell);
            elements.push(BasisElement {
                kind: BasisKind::CenteredBall,
                trace: Trace::new(dim, acc.iter().cloned())?,
                descriptor: Descriptor::Ball {
                    center_num: alloc::vec![0; dim],
                    center_den: 1,
                    radius_sq: Ratio::from_integer(norm),
                },
            });
        }
        Self::new(dim, BasisKind::CenteredBall, r, elements)
    }

    /// Ball traces with centers on the grid `(1/(2q)) Z^n` inside `(-r, r)^n`
    /// and critical radii (distances to lattice points), closed-threshold
    /// membership. A subfamily of the full uncentered basis.
    pub fn uncentered_balls(dim: usize, r: i64, q: u64, cap: u64) -> Result<Self> {
        check_shape(dim, r)?;
        if q == 0 {
            return Err(Error::InvalidCenterGrid);
        }
        let scale = 2 * q as i64;
        let center_window = Window::cube(dim, r * scale - 1)?;
        let probe = Window::cube(dim, r)?;
        let inner = Window::open_cube(dim, r)?;
        check_cap(center_window.cell_count() as u128 * probe.cell_count() as u128, cap)?;

        let probe_points: Vec<Point> = probe.points().collect();
        let on_boundary: Vec<bool> =
            probe_points.iter().map(|p| p.iter().any(|v| v.abs() == r)).collect();
        let inner_index: Vec<usize> =
            probe_points.iter().map(|p| inner.index_of(p).unwrap_or(usize::MAX)).collect();
        let words = inner.cell_count().div_ceil(64);

        let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
        let mut elements = Vec::new();
        let mut order: Vec<(i128, usize)> = Vec::with_capacity(probe_points.len());
        for center in center_window.points() {
            let origin_dist: i128 = center.iter().map(|c| (*c as i128) * (*c as i128)).sum();
            order.clear();
            order.extend(probe_points.iter().enumerate().map(|(i, p)| {
                let d: i128 = p
                    .iter()
                    .zip(&center)
                    .map(|(j, c)| {
                        let diff = (scale * j - c) as i128;
                        diff * diff
                    })
                    .sum();
                (d, i)
            }));
            order.sort_unstable();
            let mut bits = alloc::vec![0u64; words];
            let mut k = 0;
            'thresholds: while k < order.len() {
                let d = order[k].0;
                while k < order.len() && order[k].0 == d {
                    let i = order[k].1;
                    if on_boundary[i] {
                        break 'thresholds;
                    }
                    let idx = inner_index[i];
                    bits[idx / 64] |= 1 << (idx % 64);
                    k += 1;
                }
                if origin_dist <= d && !seen.contains(&bits) {
                    check_cap(elements.len() as u128 + 1, cap)?;
                    seen.insert(bits.clone());
                    let trace = Trace::new(
                        dim,
                        (0..inner.cell_count())
                            .filter(|idx| bits[idx / 64] >> (idx % 64) & 1 == 1)
                            .map(|idx| inner.point_at(idx)),
                    )?;
                    let sq = (scale as i128) * (scale as i128);
                    elements.push(BasisElement {
                        kind: BasisKind::UncenteredBall,
                        trace,
                        descriptor: Descriptor::Ball {
                            center_num: center.clone(),
                            center_den: scale,
                            radius_sq: Ratio::new(d as i64, sq as i64),
                        },
                    });
                }
            }
        }
        sort_canonical(&mut elements);
        Self::new(dim, BasisKind::UncenteredBall, r, elements)
    }

    /// Traces `{0, .., N-1}` for `1 <= N <= r` in dimension 1.
    pub fn one_sided(r: i64, cap: u64) -> Result<Self> {
        check_shape(1, r)?;
        check_cap(r as u128, cap)?;
        let elements = (1..=r)
            .map(|length| BasisElement {
                kind: BasisKind::OneSided,
                trace: Trace::from_box(&[0], &[length - 1]).expect("nonempty"),
                descriptor: Descriptor::OneSided { length },
            })
            .collect();
        Self::new(1, BasisKind::OneSided, r, elements)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn truncation(&self) -> i64 {
        self.truncation
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn traces(&self) -> impl Iterator<Item = &Trace> + '_ {
        self.elements.iter().map(|e| &e.trace)
    }

    pub fn trace_set(&self) -> BTreeSet<&Trace> {
        self.traces().collect()
    }

    /// Every trace of `self` is also a trace of `other`.
    pub fn is_subfamily_of(&self, other: &BasisFamily) -> bool {
        let theirs = other.trace_set();
        self.dim == other.dim && self.traces().all(|t| theirs.contains(t))
    }

    /// Largest `|offset_i|` over the family (at most `truncation - 1`).
    pub fn reach(&self) -> i64 {
        self.traces().map(Trace::radius).max().unwrap_or(0)
    }

    pub fn spec(&self) -> FamilySpec {
        let q = self
            .elements
            .iter()
            .find_map(|e| match &e.descriptor {
                Descriptor::Ball { center_den, .. } if self.kind == BasisKind::UncenteredBall => {
                    Some((*center_den as u64 / 2).max(1))
                }
                _ => None,
            })
            .unwrap_or(1);
        FamilySpec { kind: self.kind, dim: self.dim, truncation: self.truncation, q }
    }
}

fn sort_canonical(elements: &mut [BasisElement]) {
    elements.sort_by(|a, b| a.trace.len().cmp(&b.trace.len()).then_with(|| a.trace.cmp(&b.trace)));
}
