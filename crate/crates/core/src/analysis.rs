//! Closed-form quantities: lattice-point counts in balls against the volume
//! sandwich, the uncentered rescaling factor `c(alpha, n)`, reference
//! Solyanik exponents, and log-log exponent fits of Tauberian sweeps.
//!
//! Everything here is `f64` except [`centered_bound`] and
//! [`theoretical_exponent`].

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::lattice::BasisKind;
use crate::rational::{format_rational, integer, to_f64, Rational};
use crate::{Error, Result};

/// Lebesgue measure of the unit ball in `R^n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    let half = n as f64 / 2.0;
    libm::pow(core::f64::consts::PI, half) / libm::tgamma(half + 1.0)
}

/// Dimensional constants: `c_n` for the ball-count sandwich and `a_n` for
/// the centered Tauberian bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisConstants {
    pub n: usize,
    pub c_n: f64,
    pub a_n: f64,
}

impl AnalysisConstants {
    pub fn new(n: usize, c_n: f64, a_n: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        if !(c_n > 0.0 && c_n.is_finite()) {
            return Err(Error::InvalidConstant("c_n"));
        }
        if !(a_n >= 1.0 && a_n.is_finite()) {
            return Err(Error::InvalidConstant("a_n"));
        }
        Ok(Self { n, c_n, a_n })
    }

    /// `c_n` set to the unit-ball volume. `a_n` is 2 in dimension 1 and
    /// has to be supplied otherwise.
    pub fn standard(n: usize, a_n: Option<f64>) -> Result<Self> {
        let a_n = match (n, a_n) {
            (_, Some(a)) => a,
            (1, None) => 2.0,
            (_, None) => return Err(Error::InvalidConstant("a_n")),
        };
        Self::new(n, unit_ball_volume(n), a_n)
    }

    /// Only `a_1 = 2` is known to be valid.
    pub fn a_n_certified(&self) -> bool {
        self.n == 1 && self.a_n == 2.0
    }
}

/// Smallest `alpha` for which `c(alpha, n)` is defined:
/// `1 - 1 / (c_n (2 sqrt n)^n)`.
pub fn solyanik_threshold(n: usize, c_n: f64) -> f64 {
    let root = libm::sqrt(n as f64);
    1.0 - 1.0 / (c_n * libm::pow(2.0 * root, n as f64))
}

/// `alpha * ((c_n(1-alpha))^{-1/n} - 2 sqrt n)^n / ((c_n(1-alpha))^{-1/n} + sqrt n)^n`.
pub fn solyanik_c(alpha: f64, n: usize, c_n: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    if !(c_n > 0.0 && c_n.is_finite()) {
        return Err(Error::InvalidConstant("c_n"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidAlpha(alloc::format!("{alpha}")));
    }
    let threshold = solyanik_threshold(n, c_n);
    if alpha <= threshold {
        return Err(Error::AlphaBelowThreshold { alpha, threshold });
    }
    let root = libm::sqrt(n as f64);
    let radius = libm::pow(c_n * (1.0 - alpha), -1.0 / n as f64);
    let ratio = (radius - 2.0 * root) / (radius + root);
    Ok(alpha * libm::pow(ratio, n as f64))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallCount {
    pub count: u64,
    /// `None` when `r <= sqrt n`, where the lower bound is vacuous.
    pub lower: Option<f64>,
    pub upper: f64,
    pub pass: bool,
}

/// Relative slack allowed when comparing a count against a float bound.
pub const FORMULA_TOLERANCE: f64 = 1e-9;

/// Lattice points in the open ball `|x - center| < r`, compared with
/// `omega_n (r -+ sqrt n)^n`.
pub fn ball_count_sandwich(center: &[Rational], r: f64) -> Result<BallCount> {
    let n = center.len();
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidRadius);
    }
    // Scale by the common denominator `L` of the center: the point `p` is
    // inside iff `sum_i (L p_i - L c_i)^2 < L^2 r^2`, with `r` taken as the
    // exact binary value of the float.
    let scale = center.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let exact_r = Rational::from_float(r).ok_or(Error::InvalidRadius)?;
    let bound = exact_r.clone() * exact_r * Rational::from_integer(&scale * &scale);
    let limit = bound.ceil().to_integer() - BigInt::one();
    let axes: Vec<Vec<BigInt>> = center
        .iter()
        .map(|c| {
            let c_f = to_f64(c);
            let lo = libm::floor(c_f - r) as i64 - 1;
            let hi = libm::ceil(c_f + r) as i64 + 1;
            let scaled_c = (c * Rational::from_integer(scale.clone())).to_integer();
            (lo..=hi)
                .map(|p| {
                    let d = BigInt::from(p) * &scale - &scaled_c;
                    &d * &d
                })
                .collect()
        })
        .collect();
    let small: Option<Vec<Vec<i128>>> =
        axes.iter().map(|a| a.iter().map(|v| v.to_i128()).collect()).collect();
    let count = match (small, limit.to_i128()) {
        (Some(axes), Some(limit)) if limit < i128::MAX / 2 => count_within(&axes, 0, &limit),
        _ => count_within(&axes, BigInt::zero(), &limit),
    };
    let volume = unit_ball_volume(n);
    let root = libm::sqrt(n as f64);
    let upper = volume * libm::pow(r + root, n as f64);
    let lower = (r > root).then(|| volume * libm::pow(r - root, n as f64));
    let c = count as f64;
    let pass = c <= upper * (1.0 + FORMULA_TOLERANCE)
        && lower.is_none_or(|l| l <= c * (1.0 + FORMULA_TOLERANCE));
    Ok(BallCount { count, lower, upper, pass })
}

/// Number of tuples, one nonnegative value per axis, whose sum is at most `limit`.
fn count_within<T>(axes: &[Vec<T>], acc: T, limit: &T) -> u64
where
    T: Clone + PartialOrd + for<'a> core::ops::Add<&'a T, Output = T>,
{
    match axes.split_first() {
        None => u64::from(acc <= *limit),
        Some((first, rest)) => first
            .iter()
            .map(|v| acc.clone() + v)
            .filter(|sum| sum <= limit)
            .map(|sum| count_within(rest, sum, limit))
            .sum(),
    }
}

/// Where an exponent is meant to hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Setting {
    /// Lattice averages on `Z^n`.
    Discrete,
    /// Averages along orbits of commuting transformations.
    Ergodic,
    /// Averages over Euclidean sets in `R^n`.
    Geometric,
}

impl Setting {
    pub fn as_str(self) -> &'static str {
        match self {
            Setting::Discrete => "discrete",
            Setting::Ergodic => "ergodic",
            Setting::Geometric => "geometric",
        }
    }
}

impl core::str::FromStr for Setting {
    type Err = ();

    fn from_str(s: &str) -> core::result::Result<Self, ()> {
        match s {
            "discrete" => Ok(Setting::Discrete),
            "ergodic" => Ok(Setting::Ergodic),
            "geometric" => Ok(Setting::Geometric),
            _ => Err(()),
        }
    }
}

/// Reference Solyanik exponent `p` in `C(alpha) - 1 ≲ (1/alpha - 1)^p`.
pub fn theoretical_exponent(kind: BasisKind, setting: Setting, n: usize) -> Result<Rational> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let n = n as i64;
    let reciprocal = |d: i64| Rational::new(BigInt::one(), BigInt::from(d));
    match (kind, setting) {
        (BasisKind::Box, _) => Ok(reciprocal(n)),
        (BasisKind::CenteredBall, _) => Ok(integer(1)),
        (BasisKind::UncenteredBall, Setting::Geometric) => Ok(reciprocal(n + 1)),
        (BasisKind::UncenteredBall, _) => Ok(reciprocal(n * (n + 1))),
        (BasisKind::OneSided, _) => Err(Error::NoReferenceExponent(kind.as_str())),
    }
}

/// `1 + a_n (1 - alpha) / alpha`.
pub fn centered_bound(alpha: &Rational, a_n: &Rational) -> Result<Rational> {
    if *alpha <= Rational::zero() || *alpha >= Rational::one() {
        return Err(Error::InvalidAlpha(format_rational(alpha)));
    }
    Ok(Rational::one() + a_n * (Rational::one() - alpha) / alpha)
}

pub fn centered_bound_f64(alpha: f64, a_n: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidAlpha(alloc::format!("{alpha}")));
    }
    Ok(1.0 + a_n * (1.0 - alpha) / alpha)
}

/// Least-squares line through `(log(1/alpha - 1), log(value - 1))`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFit {
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    /// Root mean square of the vertical residuals.
    pub residual: f64,
    /// Inputs with `value <= 1`, which have no logarithm.
    pub dropped: usize,
}

pub fn fit_exponent(sweep: &[(f64, f64)]) -> Result<ExponentFit> {
    let mut points = Vec::with_capacity(sweep.len());
    let mut dropped = 0;
    for &(alpha, value) in sweep {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidAlpha(alloc::format!("{alpha}")));
        }
        if value > 1.0 {
            points.push((libm::log(1.0 / alpha - 1.0), libm::log(value - 1.0)));
        } else {
            dropped += 1;
        }
    }
    let k = points.len() as f64;
    let too_few = Error::TooFewPoints { usable: points.len(), dropped };
    if points.len() < 2 {
        return Err(too_few);
    }
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / k;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.0 - mean_x)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx == 0.0 {
        return Err(too_few);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let sq: f64 = points
        .iter()
        .map(|p| {
            let e = p.1 - (slope * p.0 + intercept);
            e * e
        })
        .sum();
    Ok(ExponentFit { points, slope, intercept, residual: libm::sqrt(sq / k), dropped })
}

pub fn fit_exponent_exact(sweep: &[(Rational, Rational)]) -> Result<ExponentFit> {
    let pairs: Vec<(f64, f64)> = sweep.iter().map(|(a, v)| (to_f64(a), to_f64(v))).collect();
    fit_exponent(&pairs)
}
