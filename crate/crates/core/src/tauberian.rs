//! Sharp Tauberian ratios `#{M chi_E > alpha} / #E` and their maximization
//! over subsets of a window, exhaustively or by randomized hill climbing.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lattice::{BasisFamily, FamilySpec, LatticeSet, Window};
use crate::maximal::{default_window, Avg, Kernel, Scratch};
use crate::rational::{ratio, Rational, Threshold};
use crate::{Error, Result};

/// Largest window (in cells) enumerated by default.
pub const DEFAULT_EXHAUSTIVE_CELLS: usize = 20;
/// Masks are `u64`; nothing beyond this is addressable.
pub const MAX_EXHAUSTIVE_CELLS: usize = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Exhaustive,
    Search,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Search => "search",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Lattice(LatticeSet),
    /// Atoms of a finite system, ascending.
    Atoms(Vec<usize>),
}

impl Witness {
    pub fn len(&self) -> usize {
        match self {
            Witness::Lattice(s) => s.len(),
            Witness::Atoms(a) => a.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A certified lower bound (exact on the searched domain) for a Tauberian constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauberianEstimate {
    pub alpha: Rational,
    pub value: Rational,
    pub witness: Witness,
    pub mode: Mode,
    pub family: FamilySpec,
    pub seed: Option<u64>,
}

/// `#{m : M_F chi_E(m) > alpha} / #E`, with the level set taken over the
/// default evaluation window.
pub fn tauberian_ratio(set: &LatticeSet, family: &BasisFamily, alpha: &Rational) -> Result<Rational> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let threshold = Threshold::new(alpha)?;
    let window = default_window(set, family)?;
    let field = crate::maximal::maximal_field(set, family, &window)?;
    let count = field.values().iter().filter(|v| threshold.exceeded_by_rational(v)).count();
    Ok(ratio(count as u64, set.len() as u64))
}

/// Counts level sets of subsets of a fixed window, reusing one kernel.
#[derive(Debug, Clone)]
pub struct SubsetEvaluator {
    window: Window,
    kernel: Kernel,
    cell_to_grid: Vec<usize>,
    family: FamilySpec,
}

/// Per-thread buffers for a [`SubsetEvaluator`].
#[derive(Debug, Default, Clone)]
pub struct EvalState {
    grid: Vec<bool>,
    scratch: Scratch,
    averages: Vec<Avg>,
}

impl SubsetEvaluator {
    pub fn new(window: &Window, family: &BasisFamily) -> Result<Self> {
        if window.dim() != family.dim() {
            return Err(Error::DimensionMismatch { expected: family.dim(), found: window.dim() });
        }
        let eval = window.dilate(family.truncation() - 1)?;
        let kernel = Kernel::new(family, eval)?;
        let cell_to_grid = window
            .points()
            .map(|p| kernel.grid().index_of(&p).expect("window inside grid"))
            .collect();
        Ok(Self { window: window.clone(), kernel, cell_to_grid, family: family.spec() })
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn cells(&self) -> usize {
        self.cell_to_grid.len()
    }

    pub fn state(&self) -> EvalState {
        EvalState {
            grid: alloc::vec![false; self.kernel.grid().cell_count()],
            ..EvalState::default()
        }
    }

    fn averages<'s>(&self, state: &'s mut EvalState, selected: impl Iterator<Item = usize>) -> &'s [Avg] {
        state.grid.iter_mut().for_each(|c| *c = false);
        for i in selected {
            state.grid[self.cell_to_grid[i]] = true;
        }
        self.kernel.best_averages(&state.grid, &mut state.scratch, &mut state.averages);
        &state.averages
    }

    /// Level-set sizes for each threshold; `indicator` is indexed by window cell.
    pub fn level_counts(&self, state: &mut EvalState, indicator: &[bool], thresholds: &[Threshold], out: &mut [u64]) {
        let avgs = self.averages(state, indicator.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i));
        count_levels(avgs, thresholds, out);
    }

    pub fn level_counts_mask(&self, state: &mut EvalState, mask: u64, thresholds: &[Threshold], out: &mut [u64]) {
        let avgs = self.averages(state, (0..64).filter(|i| mask >> i & 1 == 1));
        count_levels(avgs, thresholds, out);
    }
}

fn count_levels(avgs: &[Avg], thresholds: &[Threshold], out: &mut [u64]) {
    out.iter_mut().for_each(|c| *c = 0);
    for a in avgs {
        for (t, c) in thresholds.iter().zip(out.iter_mut()) {
            if t.exceeded_by(a.hits as u64, a.size as u64) {
                *c += 1;
            }
        }
    }
}

/// Lexicographic order of the sorted index sequences of two masks.
pub fn cmp_masks(a: u64, b: u64) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let k = (a ^ b).trailing_zeros();
    let a_has = a >> k & 1 == 1;
    let without = if a_has { b } else { a };
    // the side holding bit k is smaller unless the other side stops before k
    let holder = if without >> k != 0 { Ordering::Less } else { Ordering::Greater };
    if a_has {
        holder
    } else {
        holder.reverse()
    }
}

/// Best subset found for one threshold: ratio `count / size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Best {
    pub count: u64,
    pub size: u32,
    pub mask: u64,
}

impl Best {
    /// Higher ratio wins; equal ratios go to the lexicographically smaller witness.
    pub fn better_than(&self, other: &Best) -> bool {
        let lhs = self.count as u128 * other.size as u128;
        let rhs = other.count as u128 * self.size as u128;
        lhs > rhs || (lhs == rhs && cmp_masks(self.mask, other.mask) == Ordering::Less)
    }

    pub fn merge(a: Option<Best>, b: Option<Best>) -> Option<Best> {
        match (a, b) {
            (Some(x), Some(y)) => Some(if y.better_than(&x) { y } else { x }),
            (x, None) => x,
            (None, y) => y,
        }
    }
}

/// Scans the nonempty masks in `masks`; one best per threshold.
pub fn exhaustive_range(
    evaluator: &SubsetEvaluator,
    thresholds: &[Threshold],
    masks: Range<u64>,
) -> Vec<Option<Best>> {
    let mut state = evaluator.state();
    let mut counts = alloc::vec![0u64; thresholds.len()];
    let mut best: Vec<Option<Best>> = alloc::vec![None; thresholds.len()];
    for mask in masks.start.max(1)..masks.end {
        evaluator.level_counts_mask(&mut state, mask, thresholds, &mut counts);
        let size = mask.count_ones();
        for (slot, &count) in best.iter_mut().zip(&counts) {
            *slot = Best::merge(*slot, Some(Best { count, size, mask }));
        }
    }
    best
}

/// Checks the window against `cap` and returns the mask range `1 .. 2^cells`.
pub fn exhaustive_masks(window: &Window, cap: usize) -> Result<Range<u64>> {
    let cells = window.cell_count();
    let limit = cap.min(MAX_EXHAUSTIVE_CELLS);
    if cells > limit {
        return Err(Error::CapExceeded { requested: cells as u128, cap: limit as u128 });
    }
    Ok(1..1u64 << cells)
}

pub fn check_alpha_grid(grid: &[Rational]) -> Result<Vec<Threshold>> {
    if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidAlphaGrid);
    }
    grid.iter().map(Threshold::new).collect()
}

/// Turns per-threshold bests into estimates.
pub fn exhaustive_estimates(
    evaluator: &SubsetEvaluator,
    thresholds: &[Threshold],
    bests: &[Option<Best>],
) -> Vec<TauberianEstimate> {
    thresholds
        .iter()
        .zip(bests)
        .map(|(t, b)| {
            let b = b.expect("at least one nonempty subset");
            TauberianEstimate {
                alpha: t.value().clone(),
                value: ratio(b.count, b.size as u64),
                witness: Witness::Lattice(LatticeSet::from_mask(evaluator.window.clone(), b.mask)),
                mode: Mode::Exhaustive,
                family: evaluator.family,
                seed: None,
            }
        })
        .collect()
}

/// Exact maximum of the Tauberian ratio over all nonempty `E ⊆ window`.
pub fn exhaustive_constant(
    window: &Window,
    family: &BasisFamily,
    alpha: &Rational,
    cap: usize,
) -> Result<TauberianEstimate> {
    Ok(exhaustive_sweep(window, family, core::slice::from_ref(alpha), cap)?.remove(0))
}

/// [`exhaustive_constant`] for a whole (strictly increasing) grid in one pass.
pub fn exhaustive_sweep(
    window: &Window,
    family: &BasisFamily,
    grid: &[Rational],
    cap: usize,
) -> Result<Vec<TauberianEstimate>> {
    let thresholds = check_alpha_grid(grid)?;
    let masks = exhaustive_masks(window, cap)?;
    let evaluator = SubsetEvaluator::new(window, family)?;
    let bests = exhaustive_range(&evaluator, &thresholds, masks);
    Ok(exhaustive_estimates(&evaluator, &thresholds, &bests))
}

fn cmp_indicators(a: &[bool], b: &[bool]) -> Ordering {
    let ia = a.iter().enumerate().filter(|(_, &x)| x).map(|(i, _)| i);
    let ib = b.iter().enumerate().filter(|(_, &x)| x).map(|(i, _)| i);
    ia.cmp(ib)
}

/// Randomized restart hill climbing over subsets of `window`.
///
/// Moves flip one cell; a move is kept when the ratio does not decrease.
/// A restart happens after `4 * cells + 8` consecutive moves without strict
/// improvement. Restarts alternate between a random half-density subset and
/// a random single cell. `budget` counts ratio evaluations.
pub fn search_constant(
    window: &Window,
    family: &BasisFamily,
    alpha: &Rational,
    budget: u64,
    seed: u64,
) -> Result<TauberianEstimate> {
    if budget == 0 {
        return Err(Error::InvalidBudget);
    }
    let threshold = [Threshold::new(alpha)?];
    let evaluator = SubsetEvaluator::new(window, family)?;
    let cells = evaluator.cells();
    let plateau_cap = 4 * cells + 8;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = evaluator.state();
    let mut count = [0u64];
    let mut evals = 0u64;
    let mut evaluate = |ind: &[bool], evals: &mut u64| -> (u64, u64) {
        *evals += 1;
        evaluator.level_counts(&mut state, ind, &threshold, &mut count);
        (count[0], ind.iter().filter(|&&b| b).count() as u64)
    };
    let better = |a: (u64, u64), b: (u64, u64)| a.0 as u128 * b.1 as u128 > b.0 as u128 * a.1 as u128;

    let mut best: Option<((u64, u64), Vec<bool>)> = None;
    let mut restart = 0u64;
    while evals < budget {
        let mut current = alloc::vec![false; cells];
        if restart.is_multiple_of(2) {
            current.iter_mut().for_each(|c| *c = rng.gen_bool(0.5));
        }
        if !current.iter().any(|&c| c) {
            current[rng.gen_range(0..cells)] = true;
        }
        restart += 1;
        let mut value = evaluate(&current, &mut evals);
        let mut stale = 0usize;
        loop {
            let replace = match &best {
                None => true,
                Some((v, ind)) => {
                    better(value, *v)
                        || (!better(*v, value) && cmp_indicators(&current, ind) == Ordering::Less)
                }
            };
            if replace {
                best = Some((value, current.clone()));
            }
            if evals >= budget || stale >= plateau_cap {
                break;
            }
            let k = rng.gen_range(0..cells);
            if current[k] && value.1 == 1 {
                stale += 1;
                continue;
            }
            current[k] = !current[k];
            let candidate = evaluate(&current, &mut evals);
            if better(value, candidate) {
                current[k] = !current[k];
                stale += 1;
            } else {
                stale = if better(candidate, value) { 0 } else { stale + 1 };
                value = candidate;
            }
        }
    }
    let ((count, size), indicator) = best.expect("budget >= 1");
    Ok(TauberianEstimate {
        alpha: alpha.clone(),
        value: ratio(count, size),
        witness: Witness::Lattice(LatticeSet::from_indicator(window.clone(), &indicator)),
        mode: Mode::Search,
        family: family.spec(),
        seed: Some(seed),
    })
}

/// One estimate per grid point. Values are reported raw; only exhaustive
/// sweeps are guaranteed antitone in `alpha`.
pub fn alpha_sweep(
    window: &Window,
    family: &BasisFamily,
    grid: &[Rational],
    mode: Mode,
    budget: u64,
    seed: u64,
    cap: usize,
) -> Result<Vec<TauberianEstimate>> {
    match mode {
        Mode::Exhaustive => exhaustive_sweep(window, family, grid, cap),
        Mode::Search => {
            check_alpha_grid(grid)?;
            grid.iter().map(|a| search_constant(window, family, a, budget, seed)).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::DEFAULT_ENUMERATION_CAP;
    use crate::rational::integer;
    use alloc::vec;

    fn boxes_1d(r: i64) -> BasisFamily {
        BasisFamily::boxes(1, r, DEFAULT_ENUMERATION_CAP).unwrap()
    }

    fn origin() -> LatticeSet {
        LatticeSet::new(Window::new(vec![0], vec![0]).unwrap(), [vec![0]]).unwrap()
    }

    #[test]
    fn single_point_ratios() {
        // m = -1, 1 average exactly 1/2, which the strict level set excludes
        assert_eq!(tauberian_ratio(&origin(), &boxes_1d(4), &ratio(1, 2)).unwrap(), integer(1));
        assert_eq!(tauberian_ratio(&origin(), &boxes_1d(4), &ratio(49, 100)).unwrap(), integer(3));
        assert_eq!(tauberian_ratio(&origin(), &boxes_1d(8), &ratio(3, 10)).unwrap(), integer(5));
        assert_eq!(tauberian_ratio(&origin(), &boxes_1d(8), &ratio(99, 100)).unwrap(), integer(1));
        let empty = LatticeSet::empty(Window::new(vec![0], vec![0]).unwrap());
        assert_eq!(tauberian_ratio(&empty, &boxes_1d(3), &ratio(1, 2)), Err(Error::EmptySet));
    }

    #[test]
    fn mask_order_is_lexicographic_on_points() {
        // {0} < {0,1} < {0,2} < {1} < {1,2}
        let chain = [0b001u64, 0b011, 0b101, 0b010, 0b110, 0b100];
        for w in chain.windows(2) {
            assert_eq!(cmp_masks(w[0], w[1]), Ordering::Less, "{:b} {:b}", w[0], w[1]);
            assert_eq!(cmp_masks(w[1], w[0]), Ordering::Greater);
        }
        assert_eq!(cmp_masks(5, 5), Ordering::Equal);
    }

    #[test]
    fn exhaustive_small_window() {
        let w = Window::new(vec![-2], vec![2]).unwrap();
        let est = exhaustive_constant(&w, &boxes_1d(5), &ratio(1, 2), 20).unwrap();
        assert_eq!(est.value, ratio(7, 3));
        // {-1, 0, 1} also reaches 7/3; ties go to the lexicographically smallest witness
        let witness = LatticeSet::new(w, [vec![-2], vec![-1], vec![0]]).unwrap();
        assert_eq!(est.witness, Witness::Lattice(witness.clone()));
        assert_eq!(tauberian_ratio(&witness, &boxes_1d(5), &ratio(1, 2)).unwrap(), est.value);
        let odd = LatticeSet::new(Window::cube(1, 1).unwrap(), [vec![-1], vec![0], vec![1]]).unwrap();
        assert_eq!(tauberian_ratio(&odd, &boxes_1d(5), &ratio(1, 2)).unwrap(), est.value);
    }

    #[test]
    fn exhaustive_cap() {
        let w = Window::new(vec![0], vec![24]).unwrap();
        let err = exhaustive_constant(&w, &boxes_1d(2), &ratio(1, 2), 20).unwrap_err();
        assert!(err.is_cap_exceeded());
    }

    #[test]
    fn grid_validation() {
        let w = Window::new(vec![0], vec![2]).unwrap();
        let f = boxes_1d(2);
        assert_eq!(
            alpha_sweep(&w, &f, &[ratio(1, 2), ratio(1, 3)], Mode::Exhaustive, 1, 0, 20),
            Err(Error::InvalidAlphaGrid)
        );
        assert_eq!(alpha_sweep(&w, &f, &[], Mode::Search, 1, 0, 20), Err(Error::InvalidAlphaGrid));
        assert_eq!(search_constant(&w, &f, &ratio(1, 2), 0, 0), Err(Error::InvalidBudget));
    }

    #[test]
    fn search_is_seed_deterministic_and_bounded() {
        let w = Window::new(vec![-3], vec![3]).unwrap();
        let f = boxes_1d(4);
        let alpha = ratio(2, 3);
        let a = search_constant(&w, &f, &alpha, 300, 11).unwrap();
        let b = search_constant(&w, &f, &alpha, 300, 11).unwrap();
        assert_eq!(a, b);
        let exact = exhaustive_constant(&w, &f, &alpha, 20).unwrap();
        assert!(a.value <= exact.value);
        let mut last = integer(0);
        for budget in [1, 5, 20, 80, 300] {
            let v = search_constant(&w, &f, &alpha, budget, 11).unwrap().value;
            assert!(v >= last);
            last = v;
        }
    }
}
