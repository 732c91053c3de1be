//! Multi-threaded drivers for the exhaustive searches. Partial results merge
//! associatively with a deterministic tie-break, so the output does not depend
//! on the thread count or on scheduling.

use std::ops::Range;

use rayon::prelude::*;
use solyanik_core::ergodic::{ErgodicBest, ErgodicEvaluator, FiniteSystem};
use solyanik_core::tauberian::{
    check_alpha_grid, exhaustive_estimates, exhaustive_masks, exhaustive_range, search_constant,
    Best, SubsetEvaluator, TauberianEstimate,
};
use solyanik_core::{BasisFamily, Rational, Window};

use crate::error::{CliError, Result};

/// Thread count from `--threads`, else `SOLYANIK_THREADS`, else all cores.
pub const THREADS_ENV: &str = "SOLYANIK_THREADS";

pub fn pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    let from_env = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse().ok());
    let n = threads.or(from_env).unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

fn chunks(masks: Range<u64>) -> Vec<Range<u64>> {
    let len = masks.end - masks.start;
    let step = (len / 256).max(1 << 10);
    (masks.start..masks.end)
        .step_by(step as usize)
        .map(|s| s..(s + step).min(masks.end))
        .collect()
}

fn merge_all<T: Clone + Send>(parts: Vec<Vec<Option<T>>>, merge: impl Fn(Option<T>, Option<T>) -> Option<T>) -> Vec<Option<T>> {
    parts
        .into_iter()
        .reduce(|a, b| a.into_iter().zip(b).map(|(x, y)| merge(x, y)).collect())
        .unwrap_or_default()
}

pub fn exhaustive_sweep(
    pool: &rayon::ThreadPool,
    window: &Window,
    family: &BasisFamily,
    grid: &[Rational],
    cap: usize,
) -> Result<Vec<TauberianEstimate>> {
    let thresholds = check_alpha_grid(grid)?;
    let masks = exhaustive_masks(window, cap)?;
    let evaluator = SubsetEvaluator::new(window, family)?;
    let parts: Vec<Vec<Option<Best>>> = pool.install(|| {
        chunks(masks)
            .into_par_iter()
            .map(|range| exhaustive_range(&evaluator, &thresholds, range))
            .collect()
    });
    let bests = merge_all(parts, Best::merge);
    Ok(exhaustive_estimates(&evaluator, &thresholds, &bests))
}

/// Search mode runs one independent climb per grid point.
pub fn search_sweep(
    pool: &rayon::ThreadPool,
    window: &Window,
    family: &BasisFamily,
    grid: &[Rational],
    budget: u64,
    seed: u64,
) -> Result<Vec<TauberianEstimate>> {
    check_alpha_grid(grid)?;
    pool.install(|| {
        grid.par_iter()
            .map(|alpha| Ok(search_constant(window, family, alpha, budget, seed)?))
            .collect()
    })
}

pub fn ergodic_sweep(
    pool: &rayon::ThreadPool,
    sys: &FiniteSystem,
    family: &BasisFamily,
    grid: &[Rational],
    cap: usize,
) -> Result<Vec<TauberianEstimate>> {
    let thresholds = check_alpha_grid(grid)?;
    let evaluator = ErgodicEvaluator::new(sys, family)?;
    let masks = evaluator.masks(cap)?;
    let parts: Vec<Vec<Option<ErgodicBest>>> = pool.install(|| {
        chunks(masks)
            .into_par_iter()
            .map(|range| evaluator.range(&thresholds, range))
            .collect()
    });
    let bests = merge_all(parts, ErgodicBest::merge);
    Ok(evaluator.estimates(&thresholds, &bests))
}

#[cfg(test)]
mod tests {
    use super::*;
    use solyanik_core::rational::ratio;
    use solyanik_core::DEFAULT_ENUMERATION_CAP;

    #[test]
    fn parallel_matches_sequential() {
        let w = Window::new(vec![-2, -1], vec![2, 1]).unwrap();
        let f = BasisFamily::boxes(2, 3, DEFAULT_ENUMERATION_CAP).unwrap();
        let grid = [ratio(1, 3), ratio(1, 2), ratio(3, 4)];
        let seq = solyanik_core::tauberian::exhaustive_sweep(&w, &f, &grid, 20).unwrap();
        for threads in [1, 3, 8] {
            let p = pool(Some(threads)).unwrap();
            assert_eq!(exhaustive_sweep(&p, &w, &f, &grid, 20).unwrap(), seq);
        }
        let sys = FiniteSystem::product_cyclic(&[3, 4]).unwrap();
        let seq = solyanik_core::ergodic::ergodic_tauberian_sweep(&sys, &f, &grid, 20).unwrap();
        assert_eq!(ergodic_sweep(&pool(Some(4)).unwrap(), &sys, &f, &grid, 20).unwrap(), seq);
    }
}
