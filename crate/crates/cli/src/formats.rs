//! Line-oriented text formats and CSV exports.
//!
//! Family files:
//! ```text
//! dim=2 kind=uncentered-ball r=3 q=2
//! 0 0
//! 0 0;1 0
//! ```
//! one trace per line, offsets separated by `;`. Lattice-set files:
//! ```text
//! dim=2 kind=set lo=-2,-2 hi=2,2
//! 0 1
//! ```
//! System files: `atoms=<k>`, `weights=<k rationals>`, then one permutation
//! per line as its image list.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use solyanik_core::ergodic::FiniteSystem;
use solyanik_core::rational::{format_rational, parse_rational};
use solyanik_core::tauberian::{TauberianEstimate, Witness};
use solyanik_core::{
    BasisElement, BasisFamily, BasisKind, Descriptor, LatticeSet, MaximalField, Point, Trace,
    Window,
};

use crate::error::{CliError, Result};

struct Lines<'a> {
    source: &'a str,
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(source: &'a str, text: &'a str) -> Self {
        Self { source, inner: text.lines().enumerate() }
    }

    /// Next non-blank line, with its 1-based number.
    fn next(&mut self) -> Option<(usize, &'a str)> {
        self.inner.by_ref().map(|(i, l)| (i + 1, l.trim())).find(|(_, l)| !l.is_empty())
    }

    fn error(&self, line: usize, message: impl Into<String>) -> CliError {
        CliError::Parse { path: self.source.to_string(), line, message: message.into() }
    }
}

fn parse_header<'a>(lines: &Lines<'a>, line: usize, text: &'a str) -> Result<BTreeMap<&'a str, &'a str>> {
    text.split_whitespace()
        .map(|field| field.split_once('=').ok_or_else(|| lines.error(line, format!("expected key=value, got '{field}'"))))
        .collect()
}

fn header_value<'a>(lines: &Lines<'a>, line: usize, header: &BTreeMap<&'a str, &'a str>, key: &str) -> Result<&'a str> {
    header.get(key).copied().ok_or_else(|| lines.error(line, format!("missing '{key}'")))
}

fn parse_num<T: std::str::FromStr>(lines: &Lines<'_>, line: usize, text: &str) -> Result<T> {
    text.parse().map_err(|_| lines.error(line, format!("invalid number '{text}'")))
}

fn parse_tuple(lines: &Lines<'_>, line: usize, text: &str, dim: usize) -> Result<Point> {
    let point: Point = text
        .split_whitespace()
        .map(|v| parse_num(lines, line, v))
        .collect::<Result<_>>()?;
    if point.len() != dim {
        return Err(lines.error(line, format!("expected {dim} coordinates, got {}", point.len())));
    }
    Ok(point)
}

fn join(values: &[i64], sep: &str) -> String {
    values.iter().map(i64::to_string).collect::<Vec<_>>().join(sep)
}

/// A family as stored on disk; `q` is the center-grid parameter from the header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyFile {
    pub family: BasisFamily,
    pub q: u64,
}

pub fn write_family(family: &BasisFamily, q: u64) -> String {
    let mut out = format!("dim={} kind={} r={}", family.dim(), family.kind(), family.truncation());
    if family.kind() == BasisKind::UncenteredBall {
        let _ = write!(out, " q={q}");
    }
    out.push('\n');
    for trace in family.traces() {
        let tuples: Vec<String> = trace.offsets().map(|p| join(p, " ")).collect();
        out.push_str(&tuples.join(";"));
        out.push('\n');
    }
    out
}

pub fn read_family(source: &str, text: &str) -> Result<FamilyFile> {
    let mut lines = Lines::new(source, text);
    let (hl, head) = lines.next().ok_or_else(|| lines.error(0, "empty file"))?;
    let header = parse_header(&lines, hl, head)?;
    let dim: usize = parse_num(&lines, hl, header_value(&lines, hl, &header, "dim")?)?;
    let kind_text = header_value(&lines, hl, &header, "kind")?;
    let kind: BasisKind =
        kind_text.parse().map_err(|_| lines.error(hl, format!("unknown kind '{kind_text}'")))?;
    let r: i64 = parse_num(&lines, hl, header_value(&lines, hl, &header, "r")?)?;
    let q: u64 = match header.get("q") {
        Some(v) => parse_num(&lines, hl, v)?,
        None => 1,
    };
    let mut elements = Vec::new();
    while let Some((line, text)) = lines.next() {
        let points = text
            .split(';')
            .map(|t| parse_tuple(&lines, line, t, dim))
            .collect::<Result<Vec<_>>>()?;
        let trace = Trace::new(dim, points).map_err(|e| lines.error(line, e.to_string()))?;
        let descriptor = match kind {
            BasisKind::Box if trace.is_box() => {
                let (lo, hi) = trace.bounds();
                Descriptor::Box { lo, hi }
            }
            BasisKind::OneSided => Descriptor::OneSided { length: trace.len() as i64 },
            _ => Descriptor::TraceOnly,
        };
        elements.push(BasisElement { kind, trace, descriptor });
    }
    let family = BasisFamily::new(dim, kind, r, elements)?;
    Ok(FamilyFile { family, q })
}

pub fn write_set(set: &LatticeSet) -> String {
    let w = set.window();
    let mut out = format!("dim={} kind=set lo={} hi={}\n", set.dim(), join(w.lo(), ","), join(w.hi(), ","));
    for p in set.iter() {
        out.push_str(&join(p, " "));
        out.push('\n');
    }
    out
}

pub fn read_set(source: &str, text: &str) -> Result<LatticeSet> {
    let mut lines = Lines::new(source, text);
    let (hl, head) = lines.next().ok_or_else(|| lines.error(0, "empty file"))?;
    let header = parse_header(&lines, hl, head)?;
    let dim: usize = parse_num(&lines, hl, header_value(&lines, hl, &header, "dim")?)?;
    if header_value(&lines, hl, &header, "kind")? != "set" {
        return Err(lines.error(hl, "expected kind=set"));
    }
    let corner = |key: &str| -> Result<Vec<i64>> {
        let text = header_value(&lines, hl, &header, key)?;
        let v: Vec<i64> = text.split(',').map(|c| parse_num(&lines, hl, c)).collect::<Result<_>>()?;
        if v.len() != dim {
            return Err(lines.error(hl, format!("'{key}' needs {dim} coordinates")));
        }
        Ok(v)
    };
    let window = Window::new(corner("lo")?, corner("hi")?)?;
    let mut points = Vec::new();
    while let Some((line, text)) = lines.next() {
        points.push(parse_tuple(&lines, line, text, dim)?);
    }
    Ok(LatticeSet::new(window, points)?)
}

pub fn write_system(sys: &FiniteSystem) -> String {
    let weights: Vec<String> = sys.weights().iter().map(format_rational).collect();
    let mut out = format!("atoms={}\nweights={}\n", sys.size(), weights.join(" "));
    for map in sys.maps() {
        let images: Vec<String> = map.iter().map(usize::to_string).collect();
        out.push_str(&images.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_system(source: &str, text: &str) -> Result<FiniteSystem> {
    let mut lines = Lines::new(source, text);
    let mut field = |key: &str| -> Result<(usize, &str)> {
        let (line, text) = lines.next().ok_or_else(|| lines.error(0, format!("missing '{key}='")))?;
        let value = text
            .strip_prefix(key)
            .and_then(|t| t.strip_prefix('='))
            .ok_or_else(|| lines.error(line, format!("expected '{key}='")))?;
        Ok((line, value))
    };
    let (al, atoms) = field("atoms")?;
    let (wl, weights) = field("weights")?;
    let atoms: usize = parse_num(&lines, al, atoms.trim())?;
    let weights = weights
        .split_whitespace()
        .map(|w| parse_rational(w).map_err(|e| lines.error(wl, e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    if weights.len() != atoms {
        return Err(lines.error(wl, format!("expected {atoms} weights, got {}", weights.len())));
    }
    let mut maps = Vec::new();
    while let Some((line, text)) = lines.next() {
        maps.push(text.split_whitespace().map(|v| parse_num(&lines, line, v)).collect::<Result<Vec<usize>>>()?);
    }
    Ok(FiniteSystem::new(weights, maps)?)
}

/// `x1,..,xn,num,den`, one row per window point in window order.
pub fn field_csv(field: &MaximalField) -> String {
    let n = field.window().dim();
    let mut out: String = (1..=n).map(|i| format!("x{i},")).collect();
    out.push_str("num,den\n");
    for (m, v) in field.iter() {
        let _ = writeln!(out, "{},{},{}", join(&m, ","), v.numer(), v.denom());
    }
    out
}

pub const SWEEP_HEADER: &str = "alpha_num,alpha_den,value_num,value_den,mode,witness_size,seed";

pub fn sweep_csv(estimates: &[TauberianEstimate]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for e in estimates {
        let seed = e.seed.map(|s| s.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            e.alpha.numer(),
            e.alpha.denom(),
            e.value.numer(),
            e.value.denom(),
            e.mode.as_str(),
            e.witness.len(),
            seed
        );
    }
    out
}

/// `(alpha, value)` pairs from a sweep CSV.
pub fn read_sweep_csv(source: &str, text: &str) -> Result<Vec<(solyanik_core::Rational, solyanik_core::Rational)>> {
    let mut lines = Lines::new(source, text);
    match lines.next() {
        Some((_, h)) if h == SWEEP_HEADER => {}
        Some((line, _)) => return Err(lines.error(line, "unexpected header")),
        None => return Err(lines.error(0, "empty file")),
    }
    let mut out = Vec::new();
    while let Some((line, text)) = lines.next() {
        let cols: Vec<&str> = text.split(',').collect();
        if cols.len() != 7 {
            return Err(lines.error(line, "expected 7 columns"));
        }
        let frac = |num: &str, den: &str| {
            parse_rational(&format!("{num}/{den}")).map_err(|e| lines.error(line, e.to_string()))
        };
        out.push((frac(cols[0], cols[1])?, frac(cols[2], cols[3])?));
    }
    Ok(out)
}

/// Witness points, one per line, for the JSON reports.
pub fn witness_points(witness: &Witness) -> Vec<Vec<i64>> {
    match witness {
        Witness::Lattice(set) => set.iter().cloned().collect(),
        Witness::Atoms(atoms) => atoms.iter().map(|&a| vec![a as i64]).collect(),
    }
}
