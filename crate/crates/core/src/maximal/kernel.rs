//! Fast evaluation of `max_J #(E ∩ (m + J)) / #J` over a window.
//!
//! Three plans, picked from the family shape:
//! * every trace is a box: one n-dimensional summed-area table, `2^n`
//!   lookups per (point, element);
//! * traces form a chain under inclusion: one incremental sweep per point
//!   over the largest trace, reading off the prefix counts;
//! * anything else: traces split into runs along the last axis, two lookups
//!   per run into row prefix sums.

use alloc::vec::Vec;

use crate::lattice::{BasisFamily, Window};
use crate::{Error, Result};

/// An average `hits / size` kept as integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Avg {
    pub hits: u32,
    pub size: u32,
}

impl Avg {
    pub const ZERO: Avg = Avg { hits: 0, size: 1 };

    #[inline]
    pub fn gt(self, other: Avg) -> bool {
        (self.hits as u64) * (other.size as u64) > (other.hits as u64) * (self.size as u64)
    }

    #[inline]
    pub fn is_one(self) -> bool {
        self.hits == self.size
    }
}

#[derive(Debug, Clone)]
enum Plan {
    Sat { shape: Vec<usize>, terms: Vec<(Vec<(isize, i8)>, u32)> },
    Chain { offsets: Vec<isize>, cuts: Vec<u32> },
    Runs { shape: Vec<usize>, runs: Vec<(Vec<(isize, isize)>, u32)> },
}

/// Reusable evaluator for one family over one evaluation window.
#[derive(Debug, Clone)]
pub struct Kernel {
    eval: Window,
    grid: Window,
    plan: Plan,
    bases: Vec<usize>,
}

/// Scratch buffers for [`Kernel::best_averages`].
#[derive(Debug, Default, Clone)]
pub struct Scratch {
    table: Vec<i32>,
}

fn strides_of(shape: &[usize]) -> Vec<usize> {
    let mut strides = alloc::vec![1usize; shape.len()];
    for i in (0..shape.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * shape[i + 1];
    }
    strides
}

fn dot(coords: &[i64], strides: &[usize]) -> isize {
    coords.iter().zip(strides).map(|(c, s)| *c as isize * *s as isize).sum()
}

fn is_chain(family: &BasisFamily) -> Option<Vec<usize>> {
    let mut order: Vec<usize> = (0..family.len()).collect();
    order.sort_by_key(|&i| family.elements()[i].trace.len());
    for w in order.windows(2) {
        let (small, big) = (&family.elements()[w[0]].trace, &family.elements()[w[1]].trace);
        if !small.offsets().all(|p| big.contains(p)) {
            return None;
        }
    }
    Some(order)
}

impl Kernel {
    pub fn new(family: &BasisFamily, eval: Window) -> Result<Self> {
        let n = family.dim();
        if eval.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: eval.dim() });
        }
        let grid = eval.dilate(family.reach())?;
        let sides = grid.sides();
        let elements = family.elements();

        let plan = if !elements.is_empty() && elements.iter().all(|e| e.trace.is_box()) {
            let shape: Vec<usize> = sides.iter().map(|s| s + 1).collect();
            let strides = strides_of(&shape);
            let terms = elements
                .iter()
                .map(|e| {
                    let (lo, hi) = e.trace.bounds();
                    let corners = (0..1usize << n)
                        .map(|mask| {
                            let mut zeros = 0;
                            let corner: Vec<i64> = (0..n)
                                .map(|i| {
                                    if mask >> i & 1 == 1 {
                                        hi[i] + 1
                                    } else {
                                        zeros += 1;
                                        lo[i]
                                    }
                                })
                                .collect();
                            (dot(&corner, &strides), if zeros % 2 == 0 { 1 } else { -1 })
                        })
                        .collect();
                    (corners, e.trace.len() as u32)
                })
                .collect();
            Plan::Sat { shape, terms }
        } else if let Some(order) = (elements.len() > 1).then(|| is_chain(family)).flatten() {
            let strides = grid.strides();
            let mut offsets = Vec::new();
            let mut cuts = Vec::new();
            let mut previous: Option<&crate::Trace> = None;
            for &i in &order {
                let trace = &elements[i].trace;
                for p in trace.offsets() {
                    if previous.is_none_or(|prev| !prev.contains(p)) {
                        offsets.push(dot(p, &strides));
                    }
                }
                cuts.push(trace.len() as u32);
                previous = Some(trace);
            }
            Plan::Chain { offsets, cuts }
        } else {
            let mut shape = sides.clone();
            shape[n - 1] += 1;
            let strides = strides_of(&shape);
            let runs = elements
                .iter()
                .map(|e| {
                    let mut out: Vec<(isize, isize)> = Vec::new();
                    let mut current: Option<(Vec<i64>, i64, i64)> = None;
                    // offsets are lexicographic, so runs along the last axis are contiguous
                    for p in e.trace.offsets() {
                        let (head, last) = (&p[..n - 1], p[n - 1]);
                        match &mut current {
                            Some((h, _, hi)) if h.as_slice() == head && *hi + 1 == last => {
                                *hi = last
                            }
                            _ => {
                                if let Some((h, lo, hi)) = current.take() {
                                    let row = dot(&h, &strides[..n - 1]);
                                    out.push((row + hi as isize + 1, row + lo as isize));
                                }
                                current = Some((head.to_vec(), last, last));
                            }
                        }
                    }
                    if let Some((h, lo, hi)) = current {
                        let row = dot(&h, &strides[..n - 1]);
                        out.push((row + hi as isize + 1, row + lo as isize));
                    }
                    (out, e.trace.len() as u32)
                })
                .collect();
            Plan::Runs { shape, runs }
        };

        let base_strides = match &plan {
            Plan::Sat { shape, .. } | Plan::Runs { shape, .. } => strides_of(shape),
            Plan::Chain { .. } => grid.strides(),
        };
        let bases = eval
            .points()
            .map(|m| {
                let rel: Vec<i64> = m.iter().zip(grid.lo()).map(|(a, b)| a - b).collect();
                dot(&rel, &base_strides) as usize
            })
            .collect();
        Ok(Self { eval, grid, plan, bases })
    }

    pub fn eval_window(&self) -> &Window {
        &self.eval
    }

    /// Window the indicator passed to [`Kernel::best_averages`] lives on.
    pub fn grid(&self) -> &Window {
        &self.grid
    }

    /// Best average at every point of the evaluation window (window order).
    ///
    /// `cells` is the indicator of `E` on [`Kernel::grid`].
    pub fn best_averages(&self, cells: &[bool], scratch: &mut Scratch, out: &mut Vec<Avg>) {
        debug_assert_eq!(cells.len(), self.grid.cell_count());
        out.clear();
        match &self.plan {
            Plan::Sat { shape, terms } => {
                fill_summed_area(cells, &self.grid.sides(), shape, &mut scratch.table);
                let table = &scratch.table;
                for &base in &self.bases {
                    let mut best = Avg::ZERO;
                    for (corners, size) in terms {
                        let hits: i32 = corners
                            .iter()
                            .map(|&(off, sign)| sign as i32 * table[(base as isize + off) as usize])
                            .sum();
                        let avg = Avg { hits: hits as u32, size: *size };
                        if avg.gt(best) {
                            best = avg;
                            if best.is_one() {
                                break;
                            }
                        }
                    }
                    out.push(best);
                }
            }
            Plan::Chain { offsets, cuts } => {
                for &base in &self.bases {
                    let mut best = Avg::ZERO;
                    let mut hits = 0u32;
                    let mut next = 0usize;
                    for (k, &off) in offsets.iter().enumerate() {
                        hits += cells[(base as isize + off) as usize] as u32;
                        if k + 1 == cuts[next] as usize {
                            let avg = Avg { hits, size: cuts[next] };
                            if avg.gt(best) {
                                best = avg;
                            }
                            next += 1;
                        }
                    }
                    out.push(best);
                }
            }
            Plan::Runs { shape, runs } => {
                fill_row_prefix(cells, &self.grid.sides(), shape, &mut scratch.table);
                let table = &scratch.table;
                for &base in &self.bases {
                    let mut best = Avg::ZERO;
                    for (element, size) in runs {
                        let hits: i32 = element
                            .iter()
                            .map(|&(plus, minus)| {
                                table[(base as isize + plus) as usize]
                                    - table[(base as isize + minus) as usize]
                            })
                            .sum();
                        let avg = Avg { hits: hits as u32, size: *size };
                        if avg.gt(best) {
                            best = avg;
                            if best.is_one() {
                                break;
                            }
                        }
                    }
                    out.push(best);
                }
            }
        }
    }
}

/// `table[x] = #{cells y : y_i < x_i for all i}` on the shape `sides + 1`.
fn fill_summed_area(cells: &[bool], sides: &[usize], shape: &[usize], table: &mut Vec<i32>) {
    let n = sides.len();
    let total: usize = shape.iter().product();
    table.clear();
    table.resize(total, 0);
    let strides = strides_of(shape);
    let cell_strides = strides_of(sides);
    for (idx, &on) in cells.iter().enumerate() {
        if on {
            let mut rest = idx;
            let mut pos = 0;
            for i in 0..n {
                let c = rest / cell_strides[i];
                rest %= cell_strides[i];
                pos += (c + 1) * strides[i];
            }
            table[pos] = 1;
        }
    }
    for axis in 0..n {
        let stride = strides[axis];
        let len = shape[axis];
        for start in 0..total {
            if (start / stride).is_multiple_of(len) {
                let mut acc = 0;
                for k in 0..len {
                    let p = start + k * stride;
                    acc += table[p];
                    table[p] = acc;
                }
            }
        }
    }
}

/// Prefix sums along the last axis only.
fn fill_row_prefix(cells: &[bool], sides: &[usize], shape: &[usize], table: &mut Vec<i32>) {
    let n = sides.len();
    let row_len = sides[n - 1];
    let rows = cells.len() / row_len;
    table.clear();
    table.resize(shape.iter().product(), 0);
    for row in 0..rows {
        let src = &cells[row * row_len..(row + 1) * row_len];
        let dst = &mut table[row * (row_len + 1)..(row + 1) * (row_len + 1)];
        let mut acc = 0;
        for k in 0..row_len {
            acc += src[k] as i32;
            dst[k + 1] = acc;
        }
    }
}
