//! Finite weighted probability spaces with commuting measure-preserving
//! permutations, their ergodic maximal operators and the transference
//! identities linking them to the discrete operators on `Z^n`.
//!
//! Sets of atoms are passed as indicator slices of length `size()`.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, Mul, Range};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::lattice::{BasisFamily, LatticeSet, Point, Window};
use crate::maximal::{maximal_field, Avg, Kernel, Scratch};
use crate::rational::{format_rational, integer, ratio, Rational, Threshold};
use crate::tauberian::{check_alpha_grid, cmp_masks, Mode, TauberianEstimate, Witness};
use crate::{Error, Result};

/// Largest system enumerated by default in exhaustive ergodic searches.
pub const DEFAULT_EXHAUSTIVE_ATOMS: usize = 20;

/// `(Omega, mu, U_1, .., U_n)` with every invariant checked at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSystem {
    weights: Vec<Rational>,
    maps: Vec<Vec<usize>>,
    inverses: Vec<Vec<usize>>,
}

impl FiniteSystem {
    pub fn new(weights: Vec<Rational>, maps: Vec<Vec<usize>>) -> Result<Self> {
        let size = weights.len();
        if size == 0 || maps.is_empty() {
            return Err(Error::EmptySystem);
        }
        if let Some(atom) = weights.iter().position(|w| !w.is_positive()) {
            return Err(Error::NonPositiveWeight { atom });
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::WeightsDoNotSumToOne(format_rational(&total)));
        }
        let mut inverses = Vec::with_capacity(maps.len());
        for (index, map) in maps.iter().enumerate() {
            if map.len() != size {
                return Err(Error::MapLengthMismatch { map: index, expected: size, found: map.len() });
            }
            let mut inverse = alloc::vec![usize::MAX; size];
            for (x, &y) in map.iter().enumerate() {
                if y >= size || inverse[y] != usize::MAX {
                    return Err(Error::NotBijective { map: index, image: y });
                }
                inverse[y] = x;
            }
            if let Some(atom) = (0..size).find(|&x| weights[map[x]] != weights[x]) {
                return Err(Error::WeightNotPreserved { map: index, atom });
            }
            inverses.push(inverse);
        }
        for first in 0..maps.len() {
            for second in first + 1..maps.len() {
                let (u, v) = (&maps[first], &maps[second]);
                if let Some(atom) = (0..size).find(|&x| u[v[x]] != v[u[x]]) {
                    return Err(Error::NonCommuting { first, second, atom });
                }
            }
        }
        Ok(Self { weights, maps, inverses })
    }

    /// Uniform weights on `Z_{N_1} x .. x Z_{N_n}` with unit shifts per coordinate.
    /// Atoms are numbered row-major, first coordinate slowest.
    pub fn product_cyclic(sizes: &[usize]) -> Result<Self> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::EmptySystem);
        }
        let total: usize = sizes.iter().product();
        let mut strides = alloc::vec![1usize; sizes.len()];
        for i in (0..sizes.len() - 1).rev() {
            strides[i] = strides[i + 1] * sizes[i + 1];
        }
        let maps = (0..sizes.len())
            .map(|axis| {
                (0..total)
                    .map(|x| {
                        let coord = (x / strides[axis]) % sizes[axis];
                        let next = (coord + 1) % sizes[axis];
                        x - coord * strides[axis] + next * strides[axis]
                    })
                    .collect()
            })
            .collect();
        Self::new(alloc::vec![ratio(1, total as u64); total], maps)
    }

    pub fn size(&self) -> usize {
        self.weights.len()
    }

    pub fn dim(&self) -> usize {
        self.maps.len()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn maps(&self) -> &[Vec<usize>] {
        &self.maps
    }

    /// `U_1^{t_1} .. U_n^{t_n} atom`, negative powers through the inverses.
    pub fn act(&self, atom: usize, t: &[i64]) -> usize {
        let mut x = atom;
        for (axis, &power) in t.iter().enumerate() {
            let table = if power >= 0 { &self.maps[axis] } else { &self.inverses[axis] };
            for _ in 0..power.unsigned_abs() {
                x = table[x];
            }
        }
        x
    }

    pub fn measure(&self, set: &[bool]) -> Rational {
        self.weights.iter().zip(set).filter(|(_, &b)| b).map(|(w, _)| w).sum()
    }

    fn check_set(&self, set: &[bool]) -> Result<()> {
        if set.len() != self.size() {
            return Err(Error::DimensionMismatch { expected: self.size(), found: set.len() });
        }
        Ok(())
    }

    fn check_family(&self, family: &BasisFamily) -> Result<()> {
        if family.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: family.dim() });
        }
        Ok(())
    }
}

pub fn atoms_from_mask(size: usize, mask: u64) -> Vec<bool> {
    (0..size).map(|i| mask >> i & 1 == 1).collect()
}

/// Orbit points `U^j omega` for every atom and every trace offset, laid out
/// as a chain (nested traces) or as flat per-element lists.
#[derive(Debug, Clone)]
struct OrbitTable {
    /// per atom: atoms in visiting order
    atoms: Vec<Vec<u32>>,
    /// element sizes; for a chain these are prefix lengths of `atoms[omega]`
    sizes: Vec<u32>,
    chain: bool,
}

impl OrbitTable {
    fn new(sys: &FiniteSystem, family: &BasisFamily) -> Self {
        let elements = family.elements();
        let mut order: Vec<usize> = (0..elements.len()).collect();
        order.sort_by_key(|&i| elements[i].trace.len());
        let chain = order.windows(2).all(|w| {
            let (a, b) = (&elements[w[0]].trace, &elements[w[1]].trace);
            a.offsets().all(|p| b.contains(p))
        });
        let mut offsets: Vec<&[i64]> = Vec::new();
        let mut sizes = Vec::new();
        if chain {
            let mut prev: Option<&crate::Trace> = None;
            for &i in &order {
                let t = &elements[i].trace;
                offsets.extend(t.offsets().filter(|p| prev.is_none_or(|q| !q.contains(p))));
                sizes.push(t.len() as u32);
                prev = Some(t);
            }
        } else {
            for e in elements {
                offsets.extend(e.trace.offsets());
                sizes.push(e.trace.len() as u32);
            }
        }
        let atoms = (0..sys.size())
            .map(|omega| offsets.iter().map(|j| sys.act(omega, j) as u32).collect())
            .collect();
        Self { atoms, sizes, chain }
    }

    /// Best `(hits, size)` at `omega`.
    #[inline]
    fn best(&self, omega: usize, member: impl Fn(u32) -> bool) -> (u64, u64) {
        let atoms = &self.atoms[omega];
        let mut best = (0u64, 1u64);
        let mut consider = |hits: u64, size: u64| {
            if hits * best.1 > best.0 * size {
                best = (hits, size);
            }
        };
        if self.chain {
            let mut hits = 0u64;
            let mut next = 0;
            for (k, &a) in atoms.iter().enumerate() {
                hits += member(a) as u64;
                if k + 1 == self.sizes[next] as usize {
                    consider(hits, self.sizes[next] as u64);
                    next += 1;
                }
            }
        } else {
            let mut start = 0usize;
            for &size in &self.sizes {
                let end = start + size as usize;
                let hits = atoms[start..end].iter().filter(|&&a| member(a)).count() as u64;
                consider(hits, size as u64);
                start = end;
            }
        }
        best
    }
}

/// `M*_F chi_E(omega) = max_J (1/#J) sum_{j in J} chi_E(U^j omega)` for every atom.
pub fn ergodic_maximal_field(sys: &FiniteSystem, set: &[bool], family: &BasisFamily) -> Result<Vec<Rational>> {
    sys.check_set(set)?;
    sys.check_family(family)?;
    let table = OrbitTable::new(sys, family);
    Ok((0..sys.size())
        .map(|omega| {
            let (h, s) = table.best(omega, |a| set[a as usize]);
            ratio(h, s)
        })
        .collect())
}

/// `max_{1 <= N <= nmax} (1/N) #{0 <= j < N : U_1^j omega in E}`.
pub fn one_sided_maximal(sys: &FiniteSystem, set: &[bool], nmax: usize) -> Result<Vec<Rational>> {
    sys.check_set(set)?;
    if nmax == 0 {
        return Err(Error::InvalidTruncation(0));
    }
    let shift = &sys.maps[0];
    Ok((0..sys.size())
        .map(|omega| {
            let (mut x, mut hits) = (omega, 0u64);
            let mut best = (0u64, 1u64);
            for n in 1..=nmax as u64 {
                hits += set[x] as u64;
                if hits * best.1 > best.0 * n {
                    best = (hits, n);
                }
                x = shift[x];
            }
            ratio(best.0, best.1)
        })
        .collect())
}

/// `mu{omega : value(omega) > alpha}`.
pub fn ergodic_level_measure(sys: &FiniteSystem, field: &[Rational], alpha: &Rational) -> Result<Rational> {
    let threshold = Threshold::new(alpha)?;
    if field.len() != sys.size() {
        return Err(Error::DimensionMismatch { expected: sys.size(), found: field.len() });
    }
    Ok(sys
        .weights
        .iter()
        .zip(field)
        .filter(|(_, v)| threshold.exceeded_by_rational(v))
        .map(|(w, _)| w)
        .sum())
}

/// Both sides of the maximal ergodic inequality for `T = U_1`:
/// `(mu{T* chi_E > alpha}, mu(E) / alpha)`.
pub fn wiener_sides(sys: &FiniteSystem, set: &[bool], alpha: &Rational, nmax: usize) -> Result<(Rational, Rational)> {
    let field = one_sided_maximal(sys, set, nmax)?;
    let lhs = ergodic_level_measure(sys, &field, alpha)?;
    Ok((lhs, sys.measure(set) / alpha))
}

/// Weights as integers over their common denominator.
trait Mass: Clone + Ord + Zero + Add<Output = Self> + for<'a> Mul<&'a Self, Output = Self> {
    fn into_big(self) -> BigUint;
}

impl Mass for u128 {
    fn into_big(self) -> BigUint {
        BigUint::from(self)
    }
}

impl Mass for BigUint {
    fn into_big(self) -> BigUint {
        self
    }
}

/// Best subset for one threshold: ratio `level / mass` of scaled weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErgodicBest {
    pub level: BigUint,
    pub mass: BigUint,
    pub mask: u64,
}

impl ErgodicBest {
    pub fn better_than(&self, other: &ErgodicBest) -> bool {
        let lhs = &self.level * &other.mass;
        let rhs = &other.level * &self.mass;
        lhs > rhs || (lhs == rhs && cmp_masks(self.mask, other.mask) == Ordering::Less)
    }

    pub fn merge(a: Option<ErgodicBest>, b: Option<ErgodicBest>) -> Option<ErgodicBest> {
        match (a, b) {
            (Some(x), Some(y)) => Some(if y.better_than(&x) { y } else { x }),
            (x, None) => x,
            (None, y) => y,
        }
    }
}

/// Reusable state for exhaustive searches over subsets of atoms.
#[derive(Debug, Clone)]
pub struct ErgodicEvaluator {
    table: OrbitTable,
    scaled: Vec<BigUint>,
    size: usize,
    family: crate::FamilySpec,
}

impl ErgodicEvaluator {
    pub fn new(sys: &FiniteSystem, family: &BasisFamily) -> Result<Self> {
        sys.check_family(family)?;
        let den = sys.weights.iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let scaled = sys
            .weights
            .iter()
            .map(|w| (w.numer() * (&den / w.denom())).to_biguint().expect("positive"))
            .collect();
        Ok(Self { table: OrbitTable::new(sys, family), scaled, size: sys.size(), family: family.spec() })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn masks(&self, cap: usize) -> Result<Range<u64>> {
        let limit = cap.min(crate::tauberian::MAX_EXHAUSTIVE_CELLS);
        if self.size > limit {
            return Err(Error::CapExceeded { requested: self.size as u128, cap: limit as u128 });
        }
        Ok(1..1u64 << self.size)
    }

    pub fn range(&self, thresholds: &[Threshold], masks: Range<u64>) -> Vec<Option<ErgodicBest>> {
        let small: Option<Vec<u128>> = self.scaled.iter().map(|w| w.to_u64().map(u128::from)).collect();
        match small {
            Some(w) if self.scaled.iter().sum::<BigUint>() < BigUint::from(u64::MAX) => {
                self.range_with(&w, thresholds, masks)
            }
            _ => self.range_with(&self.scaled, thresholds, masks),
        }
    }

    fn range_with<T: Mass>(&self, weights: &[T], thresholds: &[Threshold], masks: Range<u64>) -> Vec<Option<ErgodicBest>> {
        let mut best: Vec<Option<(T, T, u64)>> = alloc::vec![None; thresholds.len()];
        let mut best_values: Vec<(u64, u64)> = alloc::vec![(0, 1); self.size];
        for mask in masks.start.max(1)..masks.end {
            let mut mass = T::zero();
            for (i, w) in weights.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    mass = mass + w.clone();
                }
            }
            for (omega, slot) in best_values.iter_mut().enumerate() {
                *slot = self.table.best(omega, |a| mask >> a & 1 == 1);
            }
            for (t, slot) in thresholds.iter().zip(best.iter_mut()) {
                let mut level = T::zero();
                for (omega, &(h, s)) in best_values.iter().enumerate() {
                    if t.exceeded_by(h, s) {
                        level = level + weights[omega].clone();
                    }
                }
                let replace = match slot {
                    None => true,
                    Some((bl, bm, bmask)) => {
                        let lhs = level.clone() * &*bm;
                        let rhs = bl.clone() * &mass;
                        lhs > rhs || (lhs == rhs && cmp_masks(mask, *bmask) == Ordering::Less)
                    }
                };
                if replace {
                    *slot = Some((level, mass.clone(), mask));
                }
            }
        }
        best.into_iter()
            .map(|b| b.map(|(level, mass, mask)| ErgodicBest { level: level.into_big(), mass: mass.into_big(), mask }))
            .collect()
    }

    pub fn estimates(&self, thresholds: &[Threshold], bests: &[Option<ErgodicBest>]) -> Vec<TauberianEstimate> {
        thresholds
            .iter()
            .zip(bests)
            .map(|(t, b)| {
                let b = b.as_ref().expect("at least one nonempty subset");
                TauberianEstimate {
                    alpha: t.value().clone(),
                    value: Rational::new(BigInt::from(b.level.clone()), BigInt::from(b.mass.clone())),
                    witness: Witness::Atoms((0..self.size).filter(|i| b.mask >> i & 1 == 1).collect()),
                    mode: Mode::Exhaustive,
                    family: self.family,
                    seed: None,
                }
            })
            .collect()
    }
}

/// Exact `max_E mu{M*_F chi_E > alpha} / mu(E)` over nonempty `E ⊆ Omega`.
pub fn ergodic_tauberian_exhaustive(
    sys: &FiniteSystem,
    family: &BasisFamily,
    alpha: &Rational,
    cap: usize,
) -> Result<TauberianEstimate> {
    Ok(ergodic_tauberian_sweep(sys, family, core::slice::from_ref(alpha), cap)?.remove(0))
}

pub fn ergodic_tauberian_sweep(
    sys: &FiniteSystem,
    family: &BasisFamily,
    grid: &[Rational],
    cap: usize,
) -> Result<Vec<TauberianEstimate>> {
    let thresholds = check_alpha_grid(grid)?;
    let evaluator = ErgodicEvaluator::new(sys, family)?;
    let masks = evaluator.masks(cap)?;
    let bests = evaluator.range(&thresholds, masks);
    Ok(evaluator.estimates(&thresholds, &bests))
}

/// `F_{E,T}(omega, .)` on `Z^n ∩ (-T, T)^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitSection {
    pub base: usize,
    pub horizon: i64,
    pub window: Window,
    /// indexed in window order
    pub values: Vec<bool>,
}

impl OrbitSection {
    pub fn value(&self, t: &[i64]) -> bool {
        self.window.index_of(t).is_some_and(|i| self.values[i])
    }

    pub fn to_lattice_set(&self) -> LatticeSet {
        LatticeSet::from_indicator(self.window.clone(), &self.values)
    }
}

pub fn orbit_section(sys: &FiniteSystem, set: &[bool], base: usize, horizon: i64) -> Result<OrbitSection> {
    sys.check_set(set)?;
    if base >= sys.size() {
        return Err(Error::AtomOutOfRange(base));
    }
    if horizon < 1 {
        return Err(Error::InvalidHorizon);
    }
    let window = Window::open_cube(sys.dim(), horizon)?;
    let values = window.points().map(|t| set[sys.act(base, &t)]).collect();
    Ok(OrbitSection { base, horizon, window, values })
}

/// `E_{r,T,omega} = {t ∈ Z^n ∩ (-r-T, r+T)^n : U^t omega ∈ E}`.
pub fn orbit_window_set(sys: &FiniteSystem, set: &[bool], base: usize, r: i64, horizon: i64) -> Result<LatticeSet> {
    if r < 1 {
        return Err(Error::InvalidTruncation(r));
    }
    Ok(orbit_section(sys, set, base, r + horizon)?.to_lattice_set())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCounterexample {
    pub atom: usize,
    pub m: Point,
    pub ergodic: Rational,
    pub discrete: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub pass: bool,
    pub checked: u64,
    pub counterexample: Option<IdentityCounterexample>,
}

/// Checks `M*_{F} chi_E(omega) = [M_F F_{E, r+T}(U^{-m} omega, .)](m)` for every
/// atom and every `m ∈ [-T, T]^n`. The left side comes from the orbit table,
/// the right side from the lattice kernel on orbit sections.
pub fn transference_identity_check(
    sys: &FiniteSystem,
    set: &[bool],
    family: &BasisFamily,
    horizon: i64,
) -> Result<IdentityReport> {
    IdentityChecker::new(sys, family, horizon)?.check(set)
}

/// [`transference_identity_check`] with everything that does not depend on
/// `E` computed once.
#[derive(Debug, Clone)]
pub struct IdentityChecker<'a> {
    sys: &'a FiniteSystem,
    table: OrbitTable,
    kernel: Kernel,
    /// per atom: orbit atom at every kernel grid cell, or `None` outside `(-r-T, r+T)^n`
    sections: Vec<Vec<Option<u32>>>,
    /// per atom: `U^{-m} omega` for every `m` in evaluation order
    back: Vec<Vec<u32>>,
}

impl<'a> IdentityChecker<'a> {
    pub fn new(sys: &'a FiniteSystem, family: &BasisFamily, horizon: i64) -> Result<Self> {
        sys.check_family(family)?;
        if horizon < 1 {
            return Err(Error::InvalidHorizon);
        }
        let eval = Window::cube(sys.dim(), horizon)?;
        let kernel = Kernel::new(family, eval.clone())?;
        let section_window = Window::open_cube(sys.dim(), family.truncation() + horizon)?;
        let sections = (0..sys.size())
            .map(|omega| {
                kernel
                    .grid()
                    .points()
                    .map(|t| section_window.contains(&t).then(|| sys.act(omega, &t) as u32))
                    .collect()
            })
            .collect();
        let back = (0..sys.size())
            .map(|omega| {
                eval.points()
                    .map(|m| {
                        let minus: Vec<i64> = m.iter().map(|v| -v).collect();
                        sys.act(omega, &minus) as u32
                    })
                    .collect()
            })
            .collect();
        Ok(Self { sys, table: OrbitTable::new(sys, family), kernel, sections, back })
    }

    /// Points checked per call to [`IdentityChecker::check`].
    pub fn checks_per_set(&self) -> u64 {
        (self.sys.size() * self.kernel.eval_window().cell_count()) as u64
    }

    pub fn check(&self, set: &[bool]) -> Result<IdentityReport> {
        self.sys.check_set(set)?;
        let size = self.sys.size();
        let ergodic: Vec<(u64, u64)> =
            (0..size).map(|omega| self.table.best(omega, |a| set[a as usize])).collect();
        let mut scratch = Scratch::default();
        let mut cells = Vec::new();
        let fields: Vec<Vec<Avg>> = self
            .sections
            .iter()
            .map(|section| {
                cells.clear();
                cells.extend(section.iter().map(|a| a.is_some_and(|a| set[a as usize])));
                let mut out = Vec::new();
                self.kernel.best_averages(&cells, &mut scratch, &mut out);
                out
            })
            .collect();
        let mut checked = 0u64;
        for (omega, (&(h, s), back)) in ergodic.iter().zip(&self.back).enumerate() {
            for (mi, &shifted) in back.iter().enumerate() {
                let discrete = fields[shifted as usize][mi];
                checked += 1;
                if h * discrete.size as u64 != discrete.hits as u64 * s {
                    return Ok(IdentityReport {
                        pass: false,
                        checked,
                        counterexample: Some(IdentityCounterexample {
                            atom: omega,
                            m: self.kernel.eval_window().point_at(mi),
                            ergodic: ratio(h, s),
                            discrete: ratio(discrete.hits as u64, discrete.size as u64),
                        }),
                    });
                }
            }
        }
        Ok(IdentityReport { pass: true, checked, counterexample: None })
    }
}

/// `((2T + 2r + 1) / (2T + 1))^n`.
pub fn boundary_factor(horizon: i64, r: i64, dim: usize) -> Rational {
    let base = Rational::new(BigInt::from(2 * horizon + 2 * r + 1), BigInt::from(2 * horizon + 1));
    (0..dim).fold(integer(1), |acc, _| acc * &base)
}

/// The averaged form of the level measure at finite horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HorizonChain {
    /// `mu{M*_{F} chi_E > alpha}`
    pub level_measure: Rational,
    /// `(2T+1)^{-n} ∫ #{m ∈ [-T,T]^n : [M_F F_{E,r+T}(omega,.)](m) > alpha} dmu`
    pub averaged_count: Rational,
    /// `(2T+1)^{-n} ∫ #{m ∈ Z^n : M_F chi_{E_{r,T,omega}}(m) > alpha} dmu`
    pub orbit_bound: Rational,
    /// `boundary_factor * mu(E)`, the bound `∫ #E_{r,T,omega} dmu / (2T+1)^n` never exceeds.
    pub orbit_mass_bound: Rational,
    pub orbit_mass: Rational,
}

impl HorizonChain {
    pub fn holds(&self) -> bool {
        self.level_measure == self.averaged_count
            && self.averaged_count <= self.orbit_bound
            && self.orbit_mass <= self.orbit_mass_bound
    }
}

pub fn horizon_chain(
    sys: &FiniteSystem,
    set: &[bool],
    family: &BasisFamily,
    alpha: &Rational,
    horizon: i64,
) -> Result<HorizonChain> {
    if horizon < 1 {
        return Err(Error::InvalidHorizon);
    }
    let threshold = Threshold::new(alpha)?;
    let r = family.truncation();
    let field = ergodic_maximal_field(sys, set, family)?;
    let level_measure = ergodic_level_measure(sys, &field, alpha)?;
    let eval = Window::cube(sys.dim(), horizon)?;
    let cells = integer(eval.cell_count() as i64);
    let mut averaged = integer(0);
    let mut orbit = integer(0);
    let mut mass = integer(0);
    for omega in 0..sys.size() {
        let orbit_set = orbit_window_set(sys, set, omega, r, horizon)?;
        let inside = maximal_field(&orbit_set, family, &eval)?;
        let near = inside.values().iter().filter(|v| threshold.exceeded_by_rational(v)).count();
        let all = crate::maximal::default_window(&orbit_set, family)?;
        let full = maximal_field(&orbit_set, family, &all)?;
        let far = full.values().iter().filter(|v| threshold.exceeded_by_rational(v)).count();
        let w = &sys.weights[omega];
        averaged += w * integer(near as i64);
        orbit += w * integer(far as i64);
        mass += w * integer(orbit_set.len() as i64);
    }
    Ok(HorizonChain {
        level_measure,
        averaged_count: averaged / &cells,
        orbit_bound: orbit / &cells,
        orbit_mass_bound: boundary_factor(horizon, r, sys.dim()) * sys.measure(set),
        orbit_mass: mass / cells,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityReport {
    pub alpha: Rational,
    pub ergodic_value: Rational,
    pub witness: Vec<usize>,
    pub discrete_bound: Rational,
    pub margin: Rational,
    pub holds: bool,
}

/// Exact ergodic Tauberian value compared against a bound for the discrete constant.
pub fn transference_inequality_check(
    sys: &FiniteSystem,
    family: &BasisFamily,
    alpha: &Rational,
    discrete_bound: &Rational,
    cap: usize,
) -> Result<InequalityReport> {
    let est = ergodic_tauberian_exhaustive(sys, family, alpha, cap)?;
    let witness = match est.witness {
        Witness::Atoms(a) => a,
        Witness::Lattice(_) => unreachable!("ergodic witnesses are atoms"),
    };
    let margin = discrete_bound - &est.value;
    Ok(InequalityReport {
        alpha: alpha.clone(),
        holds: !margin.is_negative(),
        ergodic_value: est.value,
        witness,
        discrete_bound: discrete_bound.clone(),
        margin,
    })
}
