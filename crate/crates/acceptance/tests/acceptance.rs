//! Acceptance criteria 1 to 10, one PASS/FAIL line each. Runs without the
//! libtest harness so the lines are printed whether or not a criterion fails.

use std::path::Path;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use solyanik::verify::{self, comparable_artifacts, determinism_configs, run_suite, Suite};
use solyanik::{parallel, runner, ExperimentConfig};
use solyanik_core::analysis::{
    ball_count_sandwich, fit_exponent, solyanik_c, theoretical_exponent, unit_ball_volume, Setting,
};
use solyanik_core::rational::{integer, ratio};
use solyanik_core::tauberian::tauberian_ratio;
use solyanik_core::{maximal_field, BasisFamily, BasisKind, LatticeSet, Rational, Window, DEFAULT_ENUMERATION_CAP};

struct Outcome {
    pass: bool,
    detail: String,
}

fn suite(s: Suite, limit: Duration, pool: &rayon::ThreadPool) -> Outcome {
    let report = run_suite(s, pool);
    let elapsed = Duration::from_millis(report.millis);
    let mut detail = format!("{} checks in {:.1} s", report.checks, elapsed.as_secs_f64());
    if limit < Duration::MAX {
        detail.push_str(&format!(" (limit {} s)", limit.as_secs()));
    }
    for f in report.failures.iter().take(3) {
        detail.push_str(&format!("; {f}"));
    }
    Outcome { pass: report.pass && elapsed < limit, detail }
}

fn criterion_3(pool: &rayon::ThreadPool) -> Outcome {
    let cases = verify::transference_cases().expect("shipped systems validate");
    let largest = cases.iter().map(|c| c.system.size()).max().unwrap_or(0);
    let mut out = suite(Suite::Transference, Duration::from_secs(300), pool);
    out.pass &= cases.len() >= 20;
    out.detail = format!("{} systems up to {largest} atoms, {}", cases.len(), out.detail);
    out
}

fn criterion_7() -> Outcome {
    let origin = LatticeSet::new(Window::new(vec![0], vec![0]).unwrap(), [vec![0]]).unwrap();
    let window = Window::cube(1, 12).unwrap();
    let mut failures = Vec::new();
    for (r, width) in [(8, 1), (8, 2), (11, 1), (11, 2)] {
        let family = if width == 1 {
            BasisFamily::boxes(1, r, DEFAULT_ENUMERATION_CAP).unwrap()
        } else {
            BasisFamily::centered_balls(1, r, DEFAULT_ENUMERATION_CAP).unwrap()
        };
        let field = maximal_field(&origin, &family, &window).unwrap();
        // Traces have radius below r, so the closed form applies for |m| < r.
        for m in -(r - 1)..r {
            let expected = ratio(1, width * m.unsigned_abs() + 1);
            if field.get(&[m]) != Some(&expected) {
                failures.push(format!("{} r={r} field at {m} is {:?}", family.kind(), field.get(&[m])));
            }
        }
        if width == 1 {
            for (alpha, value) in [(ratio(1, 2), 3), (ratio(3, 10), 5)] {
                let got = tauberian_ratio(&origin, &family, &alpha).unwrap();
                if got != integer(value) {
                    failures.push(format!("box r={r} ratio at alpha {alpha} is {got}, expected {value}"));
                }
            }
        }
    }
    let pass = failures.is_empty();
    let detail = if pass { "fields and ratios match".to_string() } else { failures.join("; ") };
    Outcome { pass, detail }
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut finals = Vec::new();
    for n in 1..=3 {
        let c_n = unit_ball_volume(n);
        let values: Vec<f64> = verify::solyanik_grid(n).into_iter().map(|a| solyanik_c(a, n, c_n).unwrap()).collect();
        if values.len() != 100 || values.windows(2).any(|w| w[1] <= w[0]) {
            failures.push(format!("n={n}: grid values not strictly increasing"));
        }
        let last = solyanik_c(1.0 - 1e-6, n, c_n).unwrap();
        finals.push(format!("n={n}: {last:.6}"));
        if last <= 0.99 {
            failures.push(format!("n={n}: c(1 - 1e-6) = {last:.6} <= 0.99"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0xacc8 + n as u64);
        for _ in 0..500 {
            let (center, r) = verify::sandwich_instance(&mut rng, n);
            let b = ball_count_sandwich(&center, r).unwrap();
            if !b.pass {
                failures.push(format!("n={n}, r={r}: sandwich fails with count {}", b.count));
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(30) {
        failures.push(format!("took {:.1} s", elapsed.as_secs_f64()));
    }
    let pass = failures.is_empty();
    let detail = format!("c(1 - 1e-6): {}; {}", finals.join(", "), if pass { "ok".into() } else { failures.join("; ") });
    Outcome { pass, detail }
}

fn criterion_9() -> Outcome {
    let mut failures = Vec::new();
    let alphas: Vec<f64> = (1..=10).map(|k| 1.0 - 0.6f64.powi(k)).collect();
    for p in [0.5, 1.0, 1.0 / 3.0] {
        let sweep: Vec<(f64, f64)> = alphas.iter().map(|&a| (a, 1.0 + 2.0 * (1.0 / a - 1.0).powf(p))).collect();
        let fit = fit_exponent(&sweep).unwrap();
        if (fit.slope - p).abs() >= 1e-12 || fit.residual >= 1e-12 {
            failures.push(format!("planted {p}: slope {}, residual {}", fit.slope, fit.residual));
        }
    }
    for n in 1..=5u64 {
        let d = n as usize;
        let table: [(BasisKind, Setting, Rational); 3] = [
            (BasisKind::Box, Setting::Ergodic, ratio(1, n)),
            (BasisKind::CenteredBall, Setting::Ergodic, integer(1)),
            (BasisKind::UncenteredBall, Setting::Geometric, ratio(1, n + 1)),
        ];
        for (kind, setting, expected) in table {
            let got = theoretical_exponent(kind, setting, d).unwrap();
            if got != expected {
                failures.push(format!("{kind} {} n={n}: {got}", setting.as_str()));
            }
        }
        let got = theoretical_exponent(BasisKind::UncenteredBall, Setting::Ergodic, d).unwrap();
        if got != ratio(1, n * (n + 1)) {
            failures.push(format!("uncentered ergodic n={n}: {got}"));
        }
    }
    let pass = failures.is_empty();
    Outcome { pass, detail: if pass { "fits and table match".into() } else { failures.join("; ") } }
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut failures = Vec::new();
    let configs = determinism_configs();
    for (i, text) in configs.iter().enumerate() {
        let config = ExperimentConfig::parse(text).unwrap();
        let mut artifacts = Vec::new();
        for (run, threads) in [1, 1, 8, 8].into_iter().enumerate() {
            let out = dir.path().join(format!("c{i}-{run}"));
            let pool = parallel::pool(Some(threads)).unwrap();
            match runner::run(&config, Path::new("."), &out, &pool) {
                Ok(_) => artifacts.push(comparable_artifacts(&out).unwrap()),
                Err(e) => failures.push(format!("{} with {threads} threads: {e}", config.experiment.name())),
            }
        }
        if artifacts.windows(2).any(|w| w[0] != w[1]) {
            failures.push(format!("{}: artifacts differ", config.experiment.name()));
        }
    }
    let pass = failures.is_empty();
    let outcome = if pass { "identical".to_string() } else { failures.join("; ") };
    Outcome { pass, detail: format!("{} configs, 1 and 8 threads, two runs each; {outcome}", configs.len()) }
}

fn main() {
    let pool = rayon::ThreadPoolBuilder::new().build().expect("thread pool");
    type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;
    let criteria: Vec<(&str, Check)> = vec![
        ("oracle equivalence", Box::new(|| suite(Suite::Oracle, Duration::from_secs(60), &pool))),
        ("lift identity", Box::new(|| suite(Suite::Lift, Duration::from_secs(10), &pool))),
        ("transference identity", Box::new(|| criterion_3(&pool))),
        ("transference inequality", Box::new(|| suite(Suite::Inequality, Duration::MAX, &pool))),
        ("Wiener bound", Box::new(|| suite(Suite::Wiener, Duration::from_secs(120), &pool))),
        ("Tauberian structure", Box::new(|| suite(Suite::Tauberian, Duration::from_secs(600), &pool))),
        ("known 1D values", Box::new(criterion_7)),
        ("rescaling factor and ball counts", Box::new(criterion_8)),
        ("exponent machinery", Box::new(criterion_9)),
        ("determinism", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = check();
        failed += usize::from(!outcome.pass);
        println!("criterion {:>2} {}: {name}: {}", i + 1, if outcome.pass { "PASS" } else { "FAIL" }, outcome.detail);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
