//! Stability certificates and first-eigenvalue brackets for minimal
//! hypersurfaces `Mⁿ ⊂ Hⁿ⁺¹`.
//!
//! Every test returns a [`StabilityReport`]. A failed sufficient condition
//! is reported as [`Verdict::Inconclusive`], never as unstable.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::spectral::IndexReport;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    StableCertified,
    UnstableCertified,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::StableCertified => "stable-certified",
            Verdict::UnstableCertified => "unstable-certified",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Which test produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    /// `sup |A|² ≤ (n+1)²/4`.
    PointwiseCurvature,
    /// `∫|A|ⁿ dv ≤ C_s^{−n/2}`, `n ≥ 3`.
    SobolevCurvature,
    /// Necessary condition `∫|∇|A||² ≤ n² ∫|A|²` for stable surfaces with finite total curvature.
    GradientCondition,
    /// Window `n(n−1)(t² − 1) ≤ (n+1)²/4` for hyperbolic catenoids.
    HyperbolicCatenoidWindow,
    /// Pitch `α² ≤ 9/8` for helicoids.
    HelicoidPitch,
    /// Numerical Morse index of the stability operator.
    SpectralIndex,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::PointwiseCurvature => "pointwise-curvature",
            Criterion::SobolevCurvature => "sobolev-curvature",
            Criterion::GradientCondition => "gradient-condition",
            Criterion::HyperbolicCatenoidWindow => "hyperbolic-catenoid-window",
            Criterion::HelicoidPitch => "helicoid-pitch",
            Criterion::SpectralIndex => "spectral-index",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub verdict: Verdict,
    pub criterion: Criterion,
    /// The tested quantity.
    pub witness: f64,
    pub threshold: f64,
}

fn check_n(n: usize, min: usize) -> Result<f64> {
    if n < min {
        return Err(Error::InvalidInput(format!(
            "dimension n must be at least {min}, got {n}"
        )));
    }
    Ok(n as f64)
}

/// `((n−1)²/4, n²)`. The lower bound holds for every complete minimal
/// hypersurface of Hⁿ⁺¹; the upper bound additionally assumes the
/// hypersurface is stable with `∫|A|² dv < ∞`.
pub fn lambda1_bounds(n: usize) -> Result<(f64, f64)> {
    let nf = check_n(n, 2)?;
    Ok(((nf - 1.0).powi(2) / 4.0, nf * nf))
}

/// `(a²/4, 4b²/3)` for a stable minimal surface in a 3-manifold whose
/// sectional curvature is pinched in `[−b², −a²]`.
pub fn lambda1_bounds_pinched(a: f64, b: f64) -> Result<(f64, f64)> {
    if !(0.0 < a && a <= b) || !b.is_finite() {
        return Err(Error::InvalidInput(format!(
            "pinching constants must satisfy 0 < a ≤ b, got a = {a}, b = {b}"
        )));
    }
    Ok((a * a / 4.0, 4.0 * b * b / 3.0))
}

/// Stable if `sup |A|² ≤ (n+1)²/4`.
///
/// The hypothesis is read as a bound on `|A|²`: the argument behind the
/// criterion compares `|A|² − n` with the bottom of the spectrum
/// `(n−1)²/4`, and the helicoid pitch bound `α² ≤ 9/8` only follows from
/// the squared reading.
pub fn pointwise_stability_test(n: usize, sup_a_sq: f64) -> Result<StabilityReport> {
    let nf = check_n(n, 2)?;
    if !(sup_a_sq >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "sup |A|² must be non-negative, got {sup_a_sq}"
        )));
    }
    let threshold = (nf + 1.0).powi(2) / 4.0;
    Ok(StabilityReport {
        verdict: if sup_a_sq <= threshold {
            Verdict::StableCertified
        } else {
            Verdict::Inconclusive
        },
        criterion: Criterion::PointwiseCurvature,
        witness: sup_a_sq,
        threshold,
    })
}

/// Stable if `∫|A|ⁿ dv ≤ C_s^{−n/2}`, where `C_s` is the Sobolev constant of
/// Hⁿ⁺¹. There is no default for `C_s`.
pub fn sobolev_stability_test(
    n: usize,
    sobolev_const: f64,
    a_norm_pow_n: f64,
) -> Result<StabilityReport> {
    let nf = check_n(n, 3)?;
    if !(sobolev_const > 0.0) || !sobolev_const.is_finite() {
        return Err(Error::InvalidInput(format!(
            "Sobolev constant must be positive, got {sobolev_const}"
        )));
    }
    if !(a_norm_pow_n >= 0.0) {
        return Err(Error::InvalidInput(format!(
            "∫|A|ⁿ must be non-negative, got {a_norm_pow_n}"
        )));
    }
    let threshold = sobolev_const.powf(-nf / 2.0);
    Ok(StabilityReport {
        verdict: if a_norm_pow_n <= threshold {
            Verdict::StableCertified
        } else {
            Verdict::Inconclusive
        },
        criterion: Criterion::SobolevCurvature,
        witness: a_norm_pow_n,
        threshold,
    })
}

/// `n² ∫|A|² dv − ∫|∇|A||² dv`. A negative value rules out stability.
/// For `n = 2` this is the spherical catenoid functional `F`.
pub fn grad_condition_deficit(n: usize, mass_a_sq: f64, mass_grad_a_sq: f64) -> Result<f64> {
    let nf = check_n(n, 2)?;
    for (name, v) in [("∫|A|²", mass_a_sq), ("∫|∇|A||²", mass_grad_a_sq)] {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::InvalidInput(format!(
                "{name} must be finite and non-negative, got {v}"
            )));
        }
    }
    Ok(nf * nf * mass_a_sq - mass_grad_a_sq)
}

/// Report for the gradient condition: unstable-certified iff the deficit is negative.
pub fn gradient_condition_test(
    n: usize,
    mass_a_sq: f64,
    mass_grad_a_sq: f64,
) -> Result<StabilityReport> {
    let deficit = grad_condition_deficit(n, mass_a_sq, mass_grad_a_sq)?;
    Ok(StabilityReport {
        verdict: if deficit < 0.0 {
            Verdict::UnstableCertified
        } else {
            Verdict::Inconclusive
        },
        criterion: Criterion::GradientCondition,
        witness: deficit,
        threshold: 0.0,
    })
}

/// Report for a numerical index: unstable-certified iff a negative
/// direction was found and the count is converged.
pub fn spectral_index_test(report: &IndexReport) -> StabilityReport {
    StabilityReport {
        verdict: if report.converged && report.total_index >= 1 {
            Verdict::UnstableCertified
        } else {
            Verdict::Inconclusive
        },
        criterion: Criterion::SpectralIndex,
        witness: report.total_index as f64,
        threshold: 1.0,
    }
}
