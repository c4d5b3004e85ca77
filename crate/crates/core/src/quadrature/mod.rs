//! Adaptive one-dimensional quadrature and bracketed root finding.
//!
//! Finite intervals use globally adaptive bisection driven by the embedded
//! 7-point Gauss / 15-point Kronrod pair. Semi-infinite integrals are
//! truncated at a point chosen from a caller-supplied exponential decay rate,
//! and the analytic tail bound is added to the error estimate.

mod root;

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use root::{find_root_bracketed, solve_bracketed, RootBracket};

/// Evaluation budget before an adaptive integration gives up.
pub const MAX_EVALUATIONS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    /// Bound on `|value - exact|`; always non-negative.
    pub error_estimate: f64,
    pub evaluations: usize,
}

// Kronrod abscissae on [-1, 1] (non-negative half, descending), shared by the
// 7-point Gauss rule at odd indices.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One Gauss–Kronrod 7/15 panel: (Kronrod value, |K − G|, roundoff floor).
fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<(f64, f64, f64)> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let eval = |x: f64| -> Result<f64> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::NonFiniteIntegrand { abscissa: x })
        }
    };

    let fc = eval(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = fc.abs() * WGK[7];
    for (j, (&x, &w)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let dx = half * x;
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        kronrod += w * (f1 + f2);
        abs_sum += w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    let roundoff = 50.0 * f64::EPSILON * abs_sum * half.abs();
    Ok((value, error.max(roundoff), roundoff))
}

/// Integrates `f` over `[lo, hi]` until the summed panel error is at most
/// `tol * max(1, |value|)`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    integrate_with_budget(&f, lo, hi, tol, MAX_EVALUATIONS)
}

pub(crate) fn integrate_with_budget<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    tol: f64,
    budget: usize,
) -> Result<QuadratureResult> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidInput(format!(
            "integration bounds must satisfy lo < hi, got [{lo}, {hi}]"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be positive, got {tol}"
        )));
    }

    let (value, error, roundoff) = gk15(f, lo, hi)?;
    let mut evaluations = 15;
    let mut heap = BinaryHeap::new();
    heap.push(Panel {
        lo,
        hi,
        value,
        error,
    });
    let (mut total, mut total_err, mut total_roundoff) = (value, error, roundoff);

    loop {
        let target = tol * total.abs().max(1.0);
        if total_err <= target || total_err <= 2.0 * total_roundoff {
            break;
        }
        if evaluations + 30 > budget {
            return Err(Error::BudgetExceeded {
                budget,
                value: total,
                error_estimate: total_err,
            });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(worst.lo < mid && mid < worst.hi) {
            // Panel cannot be split further in floating point.
            heap.push(Panel {
                error: 0.0,
                ..worst
            });
            if heap
                .iter()
                .all(|p| p.error == 0.0 || p.hi - p.lo <= f64::EPSILON * p.lo.abs().max(1.0))
            {
                break;
            }
            continue;
        }
        let (v1, e1, r1) = gk15(f, worst.lo, mid)?;
        let (v2, e2, r2) = gk15(f, mid, worst.hi)?;
        evaluations += 30;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        total_roundoff += r1 + r2;
        heap.push(Panel {
            lo: worst.lo,
            hi: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            lo: mid,
            hi: worst.hi,
            value: v2,
            error: e2,
        });
    }

    // Re-sum to shed the drift of the running totals.
    let value: f64 = heap.iter().map(|p| p.value).sum();
    let error_estimate: f64 = heap.iter().map(|p| p.error).sum();
    Ok(QuadratureResult {
        value,
        error_estimate,
        evaluations,
    })
}

/// Integrates `f` over `[0, ∞)` given that `|f(s)| ≲ C e^{-decay_hint·s}`.
///
/// The truncation point `S` is grown until the envelope bound
/// `sup_{s≥S} |f(s)| e^{k s} · e^{-k S} / k`, with the supremum taken over
/// a sampled window of 20 e-folds past `S`, drops below `tol / 2`. The bound
/// is added to the error estimate of the finite part.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(
    f: F,
    tol: f64,
    decay_hint: f64,
) -> Result<QuadratureResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if !(decay_hint > 0.0) || !decay_hint.is_finite() {
        return Err(Error::InvalidInput(format!(
            "decay hint must be positive, got {decay_hint}"
        )));
    }

    let (cutoff, tail, samples) = truncation_point(&f, tol, decay_hint)?;
    let finite = integrate_with_budget(&f, 0.0, cutoff, tol, MAX_EVALUATIONS - samples)?;
    Ok(QuadratureResult {
        value: finite.value,
        error_estimate: finite.error_estimate + tail,
        evaluations: finite.evaluations + samples,
    })
}

const TAIL_WINDOW_EFOLDS: f64 = 20.0;
const TAIL_SAMPLES: usize = 81;

/// Returns `(S, tail_bound, evaluations)`.
fn truncation_point<F: Fn(f64) -> f64>(f: &F, tol: f64, decay: f64) -> Result<(f64, f64, usize)> {
    let step = TAIL_WINDOW_EFOLDS / decay / (TAIL_SAMPLES - 1) as f64;
    let mut cutoff = 2.0 / decay;
    let mut evaluations = 0;
    loop {
        // Envelope |f(s)| e^{k (s - S)}: relative to S so nothing overflows.
        let mut sup = 0.0f64;
        let mut first = 0.0;
        let mut last = 0.0;
        for j in 0..TAIL_SAMPLES {
            let s = cutoff + j as f64 * step;
            let y = f(s);
            if !y.is_finite() {
                return Err(Error::NonFiniteIntegrand { abscissa: s });
            }
            let env = y.abs() * (decay * (s - cutoff)).exp();
            sup = sup.max(env);
            if j == 0 {
                first = env;
            }
            last = env;
        }
        evaluations += TAIL_SAMPLES;

        // Genuine e^{-k s} decay keeps the scaled envelope bounded; growth
        // across the window means the hint overstates the decay rate.
        if last > 1e3 * first.max(f64::MIN_POSITIVE) && last > tol * f64::EPSILON {
            return Err(Error::DecayHintViolated {
                hint: decay,
                s: cutoff,
            });
        }
        let bound = sup / decay;
        if bound <= 0.5 * tol {
            return Ok((cutoff, bound, evaluations));
        }
        cutoff += 2.0 / decay;
        if decay * cutoff > 700.0 {
            return Err(Error::DecayHintViolated {
                hint: decay,
                s: cutoff,
            });
        }
    }
}

/// Composite Simpson rule with `intervals` (even) subintervals.
///
/// Fixed-step and non-adaptive; used as a brute-force cross-check.
pub fn simpson<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, intervals: usize) -> f64 {
    let n = intervals + intervals % 2;
    let h = (hi - lo) / n as f64;
    let mut sum = f(lo) + f(hi);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(lo + i as f64 * h);
    }
    sum * h / 3.0
}
