//! Runs an [`ExperimentConfig`] and writes its artifacts plus `manifest.json`.
//!
//! Every artifact is computed before anything is written, so a failing run
//! leaves the output directory untouched, except for property violations,
//! which also write `counterexample.json`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use solyanik_core::analysis::{fit_exponent_exact, theoretical_exponent, Setting};
use solyanik_core::ergodic::{atoms_from_mask, wiener_sides, FiniteSystem};
use solyanik_core::maximal::default_window;
use solyanik_core::rational::{format_rational, ratio};
use solyanik_core::tauberian::{TauberianEstimate, Witness};
use solyanik_core::{maximal_field, BasisFamily, BasisKind, Rational};

use crate::config::{self, alpha_grid, BoundConfig, Experiment, ExperimentConfig, ModeConfig};
use crate::error::{CliError, Result};
use crate::{formats, parallel};

pub const MANIFEST: &str = "manifest.json";
pub const COUNTEREXAMPLE: &str = "counterexample.json";

/// Files produced by a run, by name, in memory.
#[derive(Debug, Default)]
pub struct Artifacts {
    files: BTreeMap<String, Vec<u8>>,
    violation: Option<(String, Value)>,
}

impl Artifacts {
    fn text(&mut self, name: &str, body: String) {
        self.files.insert(name.to_string(), body.into_bytes());
    }

    fn json(&mut self, name: &str, value: &Value) {
        let mut body = serde_json::to_string_pretty(value).expect("json serializes");
        body.push('\n');
        self.text(name, body);
    }

    fn violate(&mut self, message: String, detail: Value) {
        if self.violation.is_none() {
            self.violation = Some((message, detail));
        }
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.files.keys().map(String::as_str)
    }

    pub fn get(&self, name: &str) -> Option<&[u8]> {
        self.files.get(name).map(Vec::as_slice)
    }
}

#[derive(Debug)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    pub artifacts: Vec<String>,
}

fn q(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

fn family_json(family: &BasisFamily) -> Value {
    let spec = family.spec();
    json!({
        "kind": family.kind().as_str(),
        "dim": family.dim(),
        "truncation": family.truncation(),
        "q": spec.q,
        "elements": family.len(),
    })
}

fn estimate_json(e: &TauberianEstimate) -> Value {
    let witness: Value = match &e.witness {
        Witness::Lattice(set) => json!({ "points": set.iter().collect::<Vec<_>>() }),
        Witness::Atoms(atoms) => json!({ "atoms": atoms }),
    };
    json!({
        "alpha": q(&e.alpha),
        "value": q(&e.value),
        "mode": e.mode.as_str(),
        "seed": e.seed,
        "witness": witness,
    })
}

/// Computes every artifact of `config`; `base` resolves relative input paths.
pub fn compute(config: &ExperimentConfig, base: &Path, pool: &rayon::ThreadPool) -> Result<Artifacts> {
    let mut out = Artifacts::default();
    match &config.experiment {
        Experiment::MaximalField(p) => {
            let family = p.family.build()?;
            let set = p.set.build(base)?;
            let window = match &p.window {
                Some(w) => w.build()?,
                None => default_window(&set, &family)?,
            };
            let field = maximal_field(&set, &family, &window)?;
            let mut levels = Vec::new();
            for a in &p.alphas {
                let alpha = config::rational(a)?;
                let level = field.level_set(&alpha)?;
                let ratio = (!set.is_empty()).then(|| q(&ratio(level.len() as u64, set.len() as u64)));
                levels.push(json!({ "alpha": q(&alpha), "level_size": level.len(), "ratio": ratio }));
            }
            out.text("field.csv", formats::field_csv(&field));
            out.json(
                "report.json",
                &json!({
                    "experiment": config.experiment.name(),
                    "family": family_json(&family),
                    "set_size": set.len(),
                    "window": { "lo": window.lo(), "hi": window.hi() },
                    "levels": levels,
                }),
            );
        }
        Experiment::TauberianSweep(p) => {
            let family = p.family.build()?;
            let window = p.window.build()?;
            let grid = alpha_grid(&p.alphas)?;
            let estimates = match p.mode {
                ModeConfig::Exhaustive => parallel::exhaustive_sweep(pool, &window, &family, &grid, p.cap)?,
                ModeConfig::Search => {
                    let seed = config.seed.expect("validated");
                    let budget = p.budget.expect("validated");
                    parallel::search_sweep(pool, &window, &family, &grid, budget, seed)?
                }
            };
            out.text("sweep.csv", formats::sweep_csv(&estimates));
            out.json(
                "report.json",
                &json!({
                    "experiment": config.experiment.name(),
                    "family": family_json(&family),
                    "window": { "lo": window.lo(), "hi": window.hi() },
                    "estimates": estimates.iter().map(estimate_json).collect::<Vec<_>>(),
                }),
            );
        }
        Experiment::ErgodicCheck(p) => {
            let sys = p.system.build(base)?;
            let family = p.family.build()?;
            let grid = alpha_grid(&p.alphas)?;
            let estimates = parallel::ergodic_sweep(pool, &sys, &family, &grid, p.cap)?;
            let bounds: Option<Vec<Rational>> = match &p.discrete_bound {
                None => None,
                Some(BoundConfig::Named(_)) => Some(
                    grid.iter()
                        .map(|a| solyanik_core::analysis::centered_bound(a, &ratio(2, 1)))
                        .collect::<std::result::Result<_, _>>()?,
                ),
                Some(BoundConfig::Values(v)) => Some(v.iter().map(|b| config::rational(b)).collect::<Result<_>>()?),
            };
            let mut inequality = Vec::new();
            if let Some(bounds) = &bounds {
                for (e, bound) in estimates.iter().zip(bounds) {
                    let margin = bound - &e.value;
                    let holds = margin >= ratio(0, 1);
                    let row = json!({ "alpha": q(&e.alpha), "ergodic": q(&e.value), "bound": q(bound), "margin": q(&margin), "holds": holds });
                    if !holds {
                        out.violate(format!("ergodic constant exceeds the bound at alpha = {}", format_rational(&e.alpha)), row.clone());
                    }
                    inequality.push(row);
                }
            }
            let wiener = wiener_all_sets(&sys, &grid, p.nmax.unwrap_or(sys.size()), p.cap, &mut out)?;
            out.text("ergodic_sweep.csv", formats::sweep_csv(&estimates));
            out.json(
                "report.json",
                &json!({
                    "experiment": config.experiment.name(),
                    "atoms": sys.size(),
                    "family": family_json(&family),
                    "estimates": estimates.iter().map(estimate_json).collect::<Vec<_>>(),
                    "inequality": inequality,
                    "wiener": wiener,
                }),
            );
        }
        Experiment::Transference(p) => {
            let sys = p.system.build(base)?;
            let family = p.family.build()?;
            let checker = solyanik_core::ergodic::IdentityChecker::new(&sys, &family, p.horizon)?;
            let sets: Vec<Vec<bool>> = match &p.sets {
                Some(lists) => lists
                    .iter()
                    .map(|atoms| {
                        let mut set = vec![false; sys.size()];
                        for &a in atoms {
                            *set.get_mut(a).ok_or(solyanik_core::Error::AtomOutOfRange(a))? = true;
                        }
                        Ok(set)
                    })
                    .collect::<Result<_>>()?,
                None => {
                    if sys.size() > p.cap {
                        return Err(solyanik_core::Error::CapExceeded { requested: sys.size() as u128, cap: p.cap as u128 }.into());
                    }
                    (0..1u64 << sys.size()).map(|m| atoms_from_mask(sys.size(), m)).collect()
                }
            };
            use rayon::prelude::*;
            let reports = pool.install(|| {
                sets.par_iter().map(|s| checker.check(s)).collect::<std::result::Result<Vec<_>, _>>()
            })?;
            let checked: u64 = reports.iter().map(|r| r.checked).sum();
            let failure = reports.iter().zip(&sets).find(|(r, _)| !r.pass);
            if let Some((report, set)) = failure {
                let c = report.counterexample.as_ref().expect("failing report has a counterexample");
                let atoms: Vec<usize> = (0..set.len()).filter(|&i| set[i]).collect();
                out.violate(
                    "transference identity fails".into(),
                    json!({ "set": atoms, "atom": c.atom, "m": c.m, "ergodic": q(&c.ergodic), "discrete": q(&c.discrete) }),
                );
            }
            out.json(
                "report.json",
                &json!({
                    "experiment": config.experiment.name(),
                    "atoms": sys.size(),
                    "family": family_json(&family),
                    "horizon": p.horizon,
                    "sets": sets.len(),
                    "checked": checked,
                    "identity": if failure.is_none() { "pass" } else { "fail" },
                }),
            );
        }
        Experiment::AnalysisFit(p) => {
            let (pairs, input) = match (&p.sweep, &p.sweep_csv) {
                (Some(rows), _) => {
                    let pairs = rows
                        .iter()
                        .map(|[a, v]| Ok((config::rational(a)?, config::rational(v)?)))
                        .collect::<Result<Vec<_>>>()?;
                    (pairs, serde_json::to_vec(rows).expect("json serializes"))
                }
                (None, Some(path)) => {
                    let path = base.join(path);
                    let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
                    (formats::read_sweep_csv(&path.display().to_string(), &text)?, text.into_bytes())
                }
                (None, None) => unreachable!("validated"),
            };
            let fit = fit_exponent_exact(&pairs)?;
            let reference = match (&p.kind, &p.setting, p.dim) {
                (Some(kind), setting, Some(dim)) => {
                    let kind: BasisKind =
                        kind.parse().map_err(|_| CliError::Config(format!("unknown basis kind '{kind}'")))?;
                    let setting: Setting = setting
                        .as_deref()
                        .unwrap_or("discrete")
                        .parse()
                        .map_err(|_| CliError::Config("unknown setting".into()))?;
                    Some(q(&theoretical_exponent(kind, setting, dim)?))
                }
                _ => None,
            };
            out.json(
                "fit.json",
                &json!({
                    "experiment": config.experiment.name(),
                    "slope": fit.slope,
                    "intercept": fit.intercept,
                    "residual": fit.residual,
                    "dropped": fit.dropped,
                    "points": fit.points,
                    "input_digest": config::hex(&Sha256::digest(&input)),
                    "reference_exponent": reference,
                }),
            );
        }
    }
    Ok(out)
}

/// `mu{T* chi_E > alpha} <= mu(E) / alpha` for every nonempty `E`, when the
/// system is small enough to enumerate.
fn wiener_all_sets(sys: &FiniteSystem, grid: &[Rational], nmax: usize, cap: usize, out: &mut Artifacts) -> Result<Value> {
    if sys.size() > cap.min(solyanik_core::tauberian::MAX_EXHAUSTIVE_CELLS) {
        return Ok(json!({ "skipped": "too many atoms" }));
    }
    let mut rows = Vec::new();
    for alpha in grid {
        let mut worst: Option<(Rational, u64)> = None;
        for mask in 1..1u64 << sys.size() {
            let set = atoms_from_mask(sys.size(), mask);
            let (lhs, rhs) = wiener_sides(sys, &set, alpha, nmax)?;
            let slack = rhs - lhs;
            if worst.as_ref().is_none_or(|(w, _)| slack < *w) {
                worst = Some((slack, mask));
            }
        }
        let (slack, mask) = worst.expect("at least one set");
        let holds = slack >= ratio(0, 1);
        let atoms: Vec<usize> = (0..sys.size()).filter(|i| mask >> i & 1 == 1).collect();
        let row = json!({ "alpha": q(alpha), "min_slack": q(&slack), "tightest_set": atoms, "holds": holds });
        if !holds {
            out.violate(format!("Wiener bound fails at alpha = {}", format_rational(alpha)), row.clone());
        }
        rows.push(row);
    }
    Ok(Value::Array(rows))
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// Computes, then writes artifacts and the manifest into `out_dir`.
pub fn run(config: &ExperimentConfig, base: &Path, out_dir: &Path, pool: &rayon::ThreadPool) -> Result<RunSummary> {
    let start = Instant::now();
    let artifacts = compute(config, base, pool)?;
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let mut digests = BTreeMap::new();
    for (name, bytes) in &artifacts.files {
        write(&out_dir.join(name), bytes)?;
        digests.insert(name.clone(), config::hex(&Sha256::digest(bytes)));
    }
    if let Some((_, detail)) = &artifacts.violation {
        let body = serde_json::to_string_pretty(detail).expect("json serializes") + "\n";
        write(&out_dir.join(COUNTEREXAMPLE), body.as_bytes())?;
    }
    let manifest = json!({
        "experiment": config.experiment.name(),
        "config_digest": config.digest(),
        "version": env!("CARGO_PKG_VERSION"),
        "artifacts": digests,
        "wall_time_ms": start.elapsed().as_millis() as u64,
    });
    write(&out_dir.join(MANIFEST), (serde_json::to_string_pretty(&manifest).expect("json serializes") + "\n").as_bytes())?;
    if let Some((message, _)) = artifacts.violation {
        return Err(CliError::Violation(message));
    }
    Ok(RunSummary { out_dir: out_dir.to_path_buf(), artifacts: artifacts.files.into_keys().collect() })
}
