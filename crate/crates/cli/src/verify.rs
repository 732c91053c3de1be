//! Named property suites behind `solyanik verify <suite>`.

use std::collections::HashMap;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use solyanik_core::analysis::{
    ball_count_sandwich, fit_exponent, solyanik_c, solyanik_threshold, theoretical_exponent,
    unit_ball_volume, Setting,
};
use solyanik_core::ergodic::{
    atoms_from_mask, ergodic_level_measure, ergodic_tauberian_sweep, one_sided_maximal,
    FiniteSystem, IdentityChecker,
};
use solyanik_core::lattice::{box_average, lift_measure, lifted_box_average};
use solyanik_core::maximal::default_window;
use solyanik_core::rational::{format_rational, integer, ratio};
use solyanik_core::tauberian::{exhaustive_sweep, tauberian_ratio, Witness};
use solyanik_core::{
    maximal_field, maximal_field_naive, BasisFamily, BasisKind, FamilySpec, LatticeSet, Rational,
    Window, DEFAULT_ENUMERATION_CAP,
};

use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};
use crate::{runner, systems};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Oracle,
    Lift,
    Transference,
    Inequality,
    Wiener,
    Tauberian,
    KnownValues,
    Formulas,
    Exponents,
    Determinism,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Oracle,
        Suite::Lift,
        Suite::Transference,
        Suite::Inequality,
        Suite::Wiener,
        Suite::Tauberian,
        Suite::KnownValues,
        Suite::Formulas,
        Suite::Exponents,
        Suite::Determinism,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Lift => "lift",
            Suite::Transference => "transference",
            Suite::Inequality => "inequality",
            Suite::Wiener => "wiener",
            Suite::Tauberian => "tauberian",
            Suite::KnownValues => "known-values",
            Suite::Formulas => "formulas",
            Suite::Exponents => "exponents",
            Suite::Determinism => "determinism",
        }
    }

    /// `all` expands to every suite.
    pub fn parse_list(name: &str) -> Result<Vec<Suite>> {
        if name == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        Suite::ALL
            .iter()
            .find(|s| s.name() == name)
            .map(|s| vec![*s])
            .ok_or_else(|| CliError::UnknownSuite(name.to_string()))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub pass: bool,
    pub checks: u64,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
    pub millis: u64,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        Self { suite: suite.name(), pass: true, checks: 0, failures: Vec::new(), notes: Vec::new(), millis: 0 }
    }

    fn check(&mut self, ok: bool, failure: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.pass = false;
            if self.failures.len() < 20 {
                self.failures.push(failure());
            }
        }
    }

    fn error(&mut self, e: impl std::fmt::Display) {
        self.pass = false;
        self.failures.push(e.to_string());
    }
}

pub fn run_suite(suite: Suite, pool: &rayon::ThreadPool) -> SuiteReport {
    let start = Instant::now();
    let mut report = SuiteReport::new(suite);
    let outcome = pool.install(|| match suite {
        Suite::Oracle => oracle(&mut report),
        Suite::Lift => lift(&mut report),
        Suite::Transference => transference(&mut report),
        Suite::Inequality => inequality(&mut report),
        Suite::Wiener => wiener(&mut report),
        Suite::Tauberian => tauberian(&mut report),
        Suite::KnownValues => known_values(&mut report),
        Suite::Formulas => formulas(&mut report),
        Suite::Exponents => exponents(&mut report),
        Suite::Determinism => determinism(&mut report),
    });
    if let Err(e) = outcome {
        report.error(e);
    }
    report.millis = start.elapsed().as_millis() as u64;
    report
}

/// A random subset of a random window with the given side limit.
pub fn random_set(rng: &mut impl Rng, dim: usize, max_side: usize) -> LatticeSet {
    let lo: Vec<i64> = (0..dim).map(|_| rng.gen_range(-4..=0)).collect();
    let hi: Vec<i64> = lo.iter().map(|l| l + rng.gen_range(0..max_side as i64)).collect();
    let window = Window::new(lo, hi).expect("nonempty window");
    let density = rng.gen_range(0.05..0.95);
    let cells: Vec<bool> = (0..window.cell_count()).map(|_| rng.gen_bool(density)).collect();
    LatticeSet::from_indicator(window, &cells)
}

fn oracle_spec(kind: BasisKind, rng: &mut impl Rng) -> FamilySpec {
    let dim = if kind == BasisKind::OneSided { 1 } else { rng.gen_range(1..=3) };
    let q = if kind == BasisKind::UncenteredBall && dim < 3 { rng.gen_range(1..=2) } else { 1 };
    FamilySpec::new(kind, dim, rng.gen_range(1..=4)).with_q(q)
}

/// Optimized and naive fields agree on 200 random instances per kind.
fn oracle(report: &mut SuiteReport) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0_0c1e);
    let mut instances = Vec::new();
    for kind in BasisKind::ALL {
        for _ in 0..200 {
            let spec = oracle_spec(kind, &mut rng);
            let side = if spec.dim == 3 { 4 } else { 8 };
            instances.push((spec, random_set(&mut rng, spec.dim, side)));
        }
    }
    let mut families: HashMap<FamilySpec, BasisFamily> = HashMap::new();
    for (spec, _) in &instances {
        if !families.contains_key(spec) {
            families.insert(*spec, spec.enumerate(DEFAULT_ENUMERATION_CAP)?);
        }
    }
    let outcomes: Vec<Result<bool>> = instances
        .par_iter()
        .map(|(spec, set)| {
            let family = &families[spec];
            let window = default_window(set, family)?;
            Ok(maximal_field(set, family, &window)? == maximal_field_naive(set, family, &window)?)
        })
        .collect();
    for ((spec, set), ok) in instances.iter().zip(outcomes) {
        report.check(ok?, || format!("{spec:?} on {:?}", set.window()));
    }
    Ok(())
}

/// Floor-lift averages equal lattice averages on 1000 random triples.
fn lift(report: &mut SuiteReport) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1_1f7);
    let families: Vec<BasisFamily> =
        (1..=3).map(|n| BasisFamily::boxes(n, 3, DEFAULT_ENUMERATION_CAP)).collect::<std::result::Result<_, _>>()?;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=3);
        let set = random_set(&mut rng, n, 5);
        let family = &families[n - 1];
        let element = &family.elements()[rng.gen_range(0..family.len())];
        let m: Vec<i64> = (0..n).map(|_| rng.gen_range(-7..=7)).collect();
        let lifted = lifted_box_average(&set, &m, element)?;
        let direct = box_average(&set, &m, element)?;
        report.check(lifted == direct, || format!("m={m:?}: lifted {lifted} vs {direct}"));
        report.check(lift_measure(&set) == set.len() as u64, || "lift measure differs from #E".into());
    }
    Ok(())
}

/// A system plus the (family, horizon) combinations to check on it.
pub struct TransferenceCase {
    pub name: String,
    pub system: FiniteSystem,
    pub checks: Vec<(FamilySpec, i64)>,
}

const ALL_HORIZONS: [(i64, i64); 9] = [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)];
const CORNER_HORIZONS: [(i64, i64); 5] = [(1, 1), (2, 2), (3, 3), (1, 3), (3, 1)];

fn family_grid(dim: usize, pairs: &[(i64, i64)]) -> Vec<(FamilySpec, i64)> {
    use BasisKind::*;
    let kinds: &[(BasisKind, u64)] = if dim == 1 {
        &[(Box, 1), (CenteredBall, 1), (UncenteredBall, 2), (OneSided, 1)]
    } else {
        &[(Box, 1), (CenteredBall, 1), (UncenteredBall, 1)]
    };
    let mut out = Vec::new();
    for &(kind, q) in kinds {
        for &(r, horizon) in pairs {
            out.push((FamilySpec::new(kind, dim, r).with_q(q), horizon));
        }
    }
    out
}

/// Shipped systems for the identity suite. Every family kind is checked with
/// all `r, T <= 3` on systems of at most 12 atoms and with the diagonal and
/// corner pairs above that; all subsets are checked up to 16 atoms, a seeded
/// sample beyond.
pub fn transference_cases() -> Result<Vec<TransferenceCase>> {
    let mut cases = Vec::new();
    let mut add = |name: String, system: FiniteSystem| {
        let pairs: &[(i64, i64)] = if system.size() <= 12 { &ALL_HORIZONS } else { &CORNER_HORIZONS };
        let checks = family_grid(system.dim(), pairs);
        cases.push(TransferenceCase { name, system, checks });
    };
    for n in [5, 7, 12, 16] {
        add(format!("Z_{n}"), FiniteSystem::product_cyclic(&[n])?);
    }
    add("cycles 3+2+1".into(), systems::cycle_system(&[3, 2, 1], None)?);
    add("cycles 4+3, weights 1:2".into(), systems::cycle_system(&[4, 3], Some(&[1, 2]))?);
    for dims in [[2usize, 3], [3, 3], [2, 6], [3, 4], [4, 4]] {
        add(format!("Z_{} x Z_{}", dims[0], dims[1]), FiniteSystem::product_cyclic(&dims)?);
    }
    add("Z_2^3".into(), FiniteSystem::product_cyclic(&[2, 2, 2])?);
    add("two blocks 2x3, weights 1:2".into(), systems::two_block_pair(2, 3, 2)?);
    let mut rng = ChaCha8Rng::seed_from_u64(0x7_a5f);
    for i in 0..6 {
        let sys = systems::random_commuting_pair(6, 16, &mut rng)?;
        add(format!("random pair #{i} ({} atoms)", sys.size()), sys);
    }
    add("Z_5 x Z_6".into(), FiniteSystem::product_cyclic(&[5, 6])?);
    add("Z_6 x Z_6".into(), FiniteSystem::product_cyclic(&[6, 6])?);
    Ok(cases)
}

/// Atom sets to check: all subsets up to 16 atoms, else empty, full,
/// singletons and 512 seeded random subsets.
pub fn transference_sets(size: usize, seed: u64) -> Vec<Vec<bool>> {
    if size <= 16 {
        return (0..1u64 << size).map(|m| atoms_from_mask(size, m)).collect();
    }
    let mut sets = vec![vec![false; size], vec![true; size]];
    sets.extend((0..size).map(|i| (0..size).map(|j| i == j).collect()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..512 {
        let density = rng.gen_range(0.1..0.9);
        sets.push((0..size).map(|_| rng.gen_bool(density)).collect());
    }
    sets
}

fn transference(report: &mut SuiteReport) -> Result<()> {
    for case in transference_cases()? {
        let sets = transference_sets(case.system.size(), case.system.size() as u64);
        for (spec, horizon) in &case.checks {
            let family = spec.enumerate(DEFAULT_ENUMERATION_CAP)?;
            let checker = IdentityChecker::new(&case.system, &family, *horizon)?;
            let failures: Vec<String> = sets
                .par_iter()
                .filter_map(|set| match checker.check(set) {
                    Ok(r) if r.pass => None,
                    Ok(r) => Some(format!("{}: {spec:?}, T={horizon}: {:?}", case.name, r.counterexample)),
                    Err(e) => Some(e.to_string()),
                })
                .collect();
            report.checks += sets.len() as u64 * checker.checks_per_set();
            if let Some(f) = failures.into_iter().next() {
                report.error(f);
            }
        }
    }
    Ok(())
}

/// Every cycle type on at most 12 atoms (uniform weights) plus seeded
/// orbit-constant random weights.
pub fn one_dimensional_systems() -> Result<Vec<FiniteSystem>> {
    let mut out = systems::all_cycle_types(12)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x12);
    out.extend(systems::weighted_cycle_types(12, 3, &mut rng)?);
    Ok(out)
}

pub fn inequality_grid() -> Vec<Rational> {
    vec![ratio(1, 2), ratio(2, 3), ratio(3, 4), ratio(9, 10)]
}

/// 1-D centered ergodic constants stay below `1 + 2(1 - alpha)/alpha`.
fn inequality(report: &mut SuiteReport) -> Result<()> {
    let grid = inequality_grid();
    let systems = one_dimensional_systems()?;
    let outcomes: Vec<Result<Vec<(Rational, Rational)>>> = systems
        .par_iter()
        .map(|sys| {
            let family = BasisFamily::centered_balls(1, 2 * sys.size() as i64 + 1, DEFAULT_ENUMERATION_CAP)?;
            let sweep = ergodic_tauberian_sweep(sys, &family, &grid, 20)?;
            Ok(sweep.into_iter().map(|e| (e.alpha, e.value)).collect())
        })
        .collect();
    for (sys, outcome) in systems.iter().zip(outcomes) {
        for (alpha, value) in outcome? {
            let bound = solyanik_core::analysis::centered_bound(&alpha, &integer(2))?;
            report.check(value <= bound, || {
                format!("{:?}: alpha {alpha}, value {value} > {bound}", sys.maps())
            });
        }
    }
    Ok(())
}

pub fn wiener_grid() -> Vec<Rational> {
    vec![ratio(1, 4), ratio(1, 2), ratio(3, 4), ratio(9, 10)]
}

/// `mu{T* chi_E > alpha} <= mu(E)/alpha` for every nonempty `E`. On a finite
/// orbit of period `p`, averages over `N > p` steps are mediants of shorter
/// ones and the period average, so `N <= |Omega|` gives the exact supremum.
fn wiener(report: &mut SuiteReport) -> Result<()> {
    let grid = wiener_grid();
    let systems = one_dimensional_systems()?;
    let outcomes: Vec<Result<(u64, Vec<String>)>> = systems
        .par_iter()
        .map(|sys| {
            let mut checks = 0;
            let mut failures = Vec::new();
            for mask in 1..1u64 << sys.size() {
                let set = atoms_from_mask(sys.size(), mask);
                let field = one_sided_maximal(sys, &set, sys.size())?;
                let measure = sys.measure(&set);
                for alpha in &grid {
                    checks += 1;
                    let level = ergodic_level_measure(sys, &field, alpha)?;
                    if level > &measure / alpha {
                        failures.push(format!("{:?}, E mask {mask:b}, alpha {alpha}", sys.maps()));
                    }
                }
            }
            Ok((checks, failures))
        })
        .collect();
    for outcome in outcomes {
        let (checks, failures) = outcome?;
        report.checks += checks;
        for f in failures {
            report.error(f);
        }
    }
    Ok(())
}

/// Windows with at most `max_cells` cells, one per shape, in dimensions 1 and 2.
pub fn small_windows(max_cells: usize) -> Vec<Window> {
    let mut out: Vec<Window> = (1..=max_cells as i64).map(|s| Window::new(vec![0], vec![s - 1]).expect("valid")).collect();
    for a in 1..=max_cells as i64 {
        for b in 1..=max_cells as i64 / a {
            out.push(Window::new(vec![0, 0], vec![a - 1, b - 1]).expect("valid"));
        }
    }
    out
}

/// Nested family pairs `(smaller, larger)` used for the structural checks.
pub fn nested_families(dim: usize) -> Result<Vec<(BasisFamily, BasisFamily)>> {
    use BasisKind::*;
    let f = |k, r, q| FamilySpec::new(k, dim, r).with_q(q).enumerate(DEFAULT_ENUMERATION_CAP);
    Ok(if dim == 1 {
        vec![
            (f(Box, 2, 1)?, f(Box, 4, 1)?),
            (f(CenteredBall, 4, 1)?, f(UncenteredBall, 4, 2)?),
            (f(OneSided, 3, 1)?, f(Box, 3, 1)?),
        ]
    } else {
        vec![(f(Box, 1, 1)?, f(Box, 2, 1)?), (f(CenteredBall, 2, 1)?, f(UncenteredBall, 2, 1)?)]
    })
}

pub fn structure_grid() -> Vec<Rational> {
    vec![ratio(1, 4), ratio(2, 5), ratio(1, 2), ratio(3, 5), ratio(3, 4), ratio(9, 10)]
}

/// Exhaustive constants: at least 1, antitone in alpha, monotone under
/// family inclusion, translation invariant, reproduced by their witnesses.
fn tauberian(report: &mut SuiteReport) -> Result<()> {
    let grid = structure_grid();
    let pairs: Vec<Vec<(BasisFamily, BasisFamily)>> = vec![nested_families(1)?, nested_families(2)?];
    let jobs: Vec<(Window, usize)> = small_windows(16)
        .into_iter()
        .flat_map(|w| (0..pairs[w.dim() - 1].len()).map(move |i| (w.clone(), i)))
        .collect();
    let outcomes: Vec<Result<Vec<String>>> = jobs
        .par_iter()
        .map(|(window, i)| {
            let (small, large) = &pairs[window.dim() - 1][*i];
            let mut failures = Vec::new();
            let a = exhaustive_sweep(window, small, &grid, 16)?;
            let b = exhaustive_sweep(window, large, &grid, 16)?;
            let shift: Vec<i64> = (0..window.dim()).map(|k| 3 - 2 * k as i64).collect();
            let moved = exhaustive_sweep(&window.translate(&shift)?, small, &grid, 16)?;
            let tag = format!("{:?}, {} r={}", window, small.kind(), small.truncation());
            for (k, e) in a.iter().enumerate() {
                if e.value < integer(1) {
                    failures.push(format!("{tag}: value {} < 1", e.value));
                }
                if k > 0 && e.value > a[k - 1].value {
                    failures.push(format!("{tag}: not antitone at alpha {}", e.alpha));
                }
                if e.value > b[k].value {
                    failures.push(format!("{tag}: larger family gives {} < {}", b[k].value, e.value));
                }
                if moved[k].value != e.value {
                    failures.push(format!("{tag}: translated window gives {}", moved[k].value));
                }
                let Witness::Lattice(w) = &e.witness else { unreachable!("lattice witness") };
                if tauberian_ratio(w, small, &e.alpha)? != e.value {
                    failures.push(format!("{tag}: witness does not reproduce {}", e.value));
                }
            }
            Ok(failures)
        })
        .collect();
    for outcome in outcomes {
        report.checks += 5 * grid.len() as u64;
        for f in outcome? {
            report.error(f);
        }
    }
    Ok(())
}

/// Closed forms for `E = {0}` in one dimension.
fn known_values(report: &mut SuiteReport) -> Result<()> {
    let origin = LatticeSet::new(Window::new(vec![0], vec![0])?, [vec![0]])?;
    let boxes = BasisFamily::boxes(1, 8, DEFAULT_ENUMERATION_CAP)?;
    let centered = BasisFamily::centered_balls(1, 8, DEFAULT_ENUMERATION_CAP)?;
    let window = Window::cube(1, 10)?;
    for (family, width) in [(&boxes, 1u64), (&centered, 2)] {
        let field = maximal_field(&origin, family, &window)?;
        for (m, v) in field.iter() {
            let d = m[0].unsigned_abs();
            let expected = if d < 8 { ratio(1, width * d + 1) } else { integer(0) };
            report.check(*v == expected, || format!("{} field at {m:?}: {v} != {expected}", family.kind()));
        }
    }
    for ((num, den), value) in [((1, 2), 3), ((3, 10), 5)] {
        let r = tauberian_ratio(&origin, &boxes, &ratio(num, den))?;
        report.check(r == integer(value), || {
            format!("box ratio at alpha = {num}/{den} is {r}, expected {value}")
        });
    }
    let near = tauberian_ratio(&origin, &boxes, &ratio(49, 100))?;
    report.notes.push(format!(
        "the level set is strict: at alpha = 1/2 the averages at m = -1, 1 equal 1/2 exactly; at alpha = 49/100 the ratio is {near}"
    ));
    Ok(())
}

/// `1 - 10^-k` for `k` spread evenly over `[k_min, 6]`.
pub fn solyanik_grid(n: usize) -> Vec<f64> {
    let c_n = unit_ball_volume(n);
    let k_min = -(1.0 - solyanik_threshold(n, c_n)).log10() + 1e-3;
    (0..100).map(|i| 1.0 - 10f64.powf(-(k_min + (6.0 - k_min) * i as f64 / 99.0))).collect()
}

/// Random centers on a 1/12 grid and radii in `(sqrt n + 0.1, 12)`.
pub fn sandwich_instance(rng: &mut impl Rng, n: usize) -> (Vec<Rational>, f64) {
    let center = (0..n).map(|_| Rational::new(rng.gen_range(-24i64..=24).into(), 12.into())).collect();
    let lo = (n as f64).sqrt() + 0.1;
    (center, rng.gen_range(lo..12.0))
}

fn formulas(report: &mut SuiteReport) -> Result<()> {
    for n in 1..=3 {
        let c_n = unit_ball_volume(n);
        let values = solyanik_grid(n)
            .into_iter()
            .map(|a| solyanik_c(a, n, c_n))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        for w in values.windows(2) {
            report.check(w[1] > w[0], || format!("n={n}: c not increasing ({} then {})", w[0], w[1]));
        }
        for v in &values {
            report.check(*v < 1.0, || format!("n={n}: c = {v} >= 1"));
        }
        let last = values[values.len() - 1];
        report.check(last > 0.99, || format!("n={n}: c(1 - 1e-6) = {last:.6}, not above 0.99"));
        let near = solyanik_c(1.0 - 1e-15, n, c_n)?;
        report.notes.push(format!("n={n}: c(1 - 1e-6) = {last:.6}, c(1 - 1e-15) = {near:.6}"));
        let mut rng = ChaCha8Rng::seed_from_u64(0x5a_d000 + n as u64);
        for _ in 0..500 {
            let (center, r) = sandwich_instance(&mut rng, n);
            let b = ball_count_sandwich(&center, r)?;
            report.check(b.pass, || {
                let c: Vec<String> = center.iter().map(format_rational).collect();
                format!("n={n}, c={c:?}, r={r}: {b:?}")
            });
        }
    }
    Ok(())
}

fn exponents(report: &mut SuiteReport) -> Result<()> {
    let alphas: Vec<f64> = (1..=12).map(|k| 1.0 - 0.5f64.powi(k)).collect();
    for (p, scale) in [(0.5, 1.0), (1.0, 3.0), (1.0 / 3.0, 0.25)] {
        let sweep: Vec<(f64, f64)> = alphas.iter().map(|&a| (a, 1.0 + scale * (1.0 / a - 1.0).powf(p))).collect();
        let fit = fit_exponent(&sweep)?;
        report.check((fit.slope - p).abs() < 1e-12 && fit.residual < 1e-12, || format!("planted {p}: {fit:?}"));
    }
    for n in 1..=4usize {
        let nn = n as u64;
        let table = [
            (BasisKind::Box, Setting::Discrete, ratio(1, nn)),
            (BasisKind::Box, Setting::Ergodic, ratio(1, nn)),
            (BasisKind::CenteredBall, Setting::Ergodic, integer(1)),
            (BasisKind::CenteredBall, Setting::Discrete, integer(1)),
            (BasisKind::UncenteredBall, Setting::Geometric, ratio(1, nn + 1)),
            (BasisKind::UncenteredBall, Setting::Ergodic, ratio(1, nn * (nn + 1))),
            (BasisKind::UncenteredBall, Setting::Discrete, ratio(1, nn * (nn + 1))),
        ];
        for (kind, setting, expected) in table {
            let got = theoretical_exponent(kind, setting, n)?;
            report.check(got == expected, || format!("{kind} {} n={n}: {got}", setting.as_str()));
        }
    }
    Ok(())
}

/// Configs exercised by the determinism suite.
pub fn determinism_configs() -> Vec<&'static str> {
    vec![
        r#"{"experiment": "tauberian-sweep", "params": {"family": {"kind": "box", "dim": 2, "truncation": 3}, "window": {"lo": [0, 0], "hi": [3, 3]}, "alphas": ["1/3", "1/2", "3/4"], "mode": "exhaustive"}}"#,
        r#"{"experiment": "tauberian-sweep", "seed": 11, "params": {"family": {"kind": "uncentered-ball", "dim": 2, "truncation": 3, "q": 2}, "window": {"lo": [-3, -3], "hi": [3, 3]}, "alphas": ["1/2", "2/3"], "mode": "search", "budget": 3000}}"#,
        r#"{"experiment": "ergodic-check", "params": {"system": {"cyclic": [3, 4]}, "family": {"kind": "box", "dim": 2, "truncation": 3}, "alphas": ["1/2", "3/4"]}}"#,
        r#"{"experiment": "transference", "params": {"system": {"cyclic": [2, 3]}, "family": {"kind": "box", "dim": 2, "truncation": 2}, "horizon": 2}}"#,
        r#"{"experiment": "maximal-field", "params": {"family": {"kind": "centered-ball", "dim": 2, "truncation": 3}, "set": {"window": {"lo": [0, 0], "hi": [2, 2]}, "points": [[0, 0], [1, 2]]}, "alphas": ["1/4"]}}"#,
    ]
}

/// Reads every file in `dir`, dropping the wall time from the manifest.
pub fn comparable_artifacts(dir: &Path) -> Result<Vec<(String, Vec<u8>)>> {
    let mut out = Vec::new();
    let entries = std::fs::read_dir(dir).map_err(|e| CliError::io(dir, e))?;
    for entry in entries {
        let path = entry.map_err(|e| CliError::io(dir, e))?.path();
        let name = path.file_name().expect("file name").to_string_lossy().into_owned();
        let mut bytes = std::fs::read(&path).map_err(|e| CliError::io(&path, e))?;
        if name == runner::MANIFEST {
            let mut v: serde_json::Value =
                serde_json::from_slice(&bytes).map_err(|e| CliError::Config(e.to_string()))?;
            v.as_object_mut().map(|o| o.remove("wall_time_ms"));
            bytes = v.to_string().into_bytes();
        }
        out.push((name, bytes));
    }
    out.sort();
    Ok(out)
}

fn scratch_dir(tag: &str) -> std::path::PathBuf {
    static COUNTER: std::sync::atomic::AtomicU64 = std::sync::atomic::AtomicU64::new(0);
    let k = COUNTER.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
    std::env::temp_dir().join(format!("solyanik-{}-{tag}-{k}", std::process::id()))
}

fn determinism(report: &mut SuiteReport) -> Result<()> {
    for (i, text) in determinism_configs().into_iter().enumerate() {
        let config = ExperimentConfig::parse(text)?;
        let mut runs = Vec::new();
        for threads in [1, 8, 8] {
            let dir = scratch_dir(&format!("det{i}"));
            let pool = crate::parallel::pool(Some(threads))?;
            runner::run(&config, Path::new("."), &dir, &pool)?;
            runs.push(comparable_artifacts(&dir)?);
            let _ = std::fs::remove_dir_all(&dir);
        }
        report.check(runs.windows(2).all(|w| w[0] == w[1]), || format!("{} artifacts differ", config.experiment.name()));
    }
    Ok(())
}
