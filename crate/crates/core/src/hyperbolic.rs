//! Hyperbolic catenoids `M_t ⊂ Hⁿ⁺¹`.
//!
//! The profile `x(s)` of the generating curve solves
//! `x' = √(x² − 1 − a² x^{2(1−n)})` with `x(0) = t`, `x'(0) = 0` and
//! `a = t^{n−1} √(t² − 1)`. The first-order equation is degenerate at the
//! neck (its right side has a square-root zero there), so the profile is
//! integrated from the differentiated form
//!
//! ```text
//! x'' = x + (n − 1) a² x^{1 − 2n}
//! ```
//!
//! which is regular at `s = 0` and has the first-order equation as a first
//! integral. That first integral is monitored along the whole trajectory.
//! Only `s ≥ 0` is integrated; `x` is even in `s`.

use serde::{Deserialize, Serialize};

use crate::ode::{self, Tolerances};
use crate::quadrature::{integrate_adaptive, QuadratureResult};
use crate::{Error, Result};

pub const DEFAULT_S_MAX: f64 = 15.0;
pub const DEFAULT_STEP_TOL: f64 = 1e-10;
/// Beyond this `x ~ e^s` approaches the overflow range of `x²`.
pub const MAX_S: f64 = 300.0;

/// Tolerated mismatch `|x'² − (x² − 1 − a² x^{2−2n})| / max(1, x²)`.
const FIRST_INTEGRAL_TOL: f64 = 1e-7;
/// Agreement required between the two `|A|²` expressions.
const NORM_FORMS_TOL: f64 = 1e-6;
const MAX_STEP: f64 = 0.1;

/// `a = t^{n−1} √(t² − 1)`.
pub fn shape_constant(n: usize, t: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "dimension n must be at least 2, got {n}"
        )));
    }
    if !(t >= 1.0) || !t.is_finite() {
        return Err(Error::InvalidInput(format!(
            "neck value t must be at least 1, got {t}"
        )));
    }
    Ok(t.powi(n as i32 - 1) * (t * t - 1.0).sqrt())
}

/// Upper end `1 + (n+1)²/(4n(n−1))` of the nominal stable window for the
/// hyperbolic catenoid family.
///
/// The `|A|²` bound it is meant to enforce is `n(n−1)(t² − 1) ≤ (n+1)²/4`,
/// which is quadratic in `t`, so the nominal window is wider than what the
/// pointwise criterion certifies; see [`certified_window_max_t`].
pub fn stability_window_max_t(n: usize) -> Result<f64> {
    let nf = check_dim(n)?;
    Ok(1.0 + (nf + 1.0).powi(2) / (4.0 * nf * (nf - 1.0)))
}

/// Largest `t` with `n(n−1)(t² − 1) ≤ (n+1)²/4`, i.e.
/// `√(1 + (n+1)²/(4n(n−1)))`.
pub fn certified_window_max_t(n: usize) -> Result<f64> {
    let nf = check_dim(n)?;
    Ok((1.0 + (nf + 1.0).powi(2) / (4.0 * nf * (nf - 1.0))).sqrt())
}

fn check_dim(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "dimension n must be at least 2, got {n}"
        )));
    }
    Ok(n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicCatenoid {
    n: usize,
    t: f64,
    a: f64,
}

/// A point of the profile: arclength `s`, `x(s)` and `x'(s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    pub s: f64,
    pub x: f64,
    pub x_prime: f64,
}

impl ProfileSample {
    /// `(√max(0, x² − 1 − a²), √(x² − 1))`, the bracket for `x'` when `s > 0`.
    pub fn derivative_bracket(&self, a: f64) -> (f64, f64) {
        let base = (self.x - 1.0) * (self.x + 1.0);
        ((base - a * a).max(0.0).sqrt(), base.sqrt())
    }

    /// Strict bracketing `√(x² − 1 − a²) < x' < √(x² − 1)`; vacuous at `s = 0`.
    pub fn satisfies_bracket(&self, a: f64) -> bool {
        if self.s == 0.0 {
            return self.x_prime == 0.0;
        }
        let (lo, hi) = self.derivative_bracket(a);
        lo < self.x_prime && self.x_prime < hi
    }
}

impl HyperbolicCatenoid {
    pub fn new(n: usize, t: f64) -> Result<Self> {
        if !(t > 1.0) {
            return Err(Error::InvalidInput(format!(
                "hyperbolic catenoid needs t > 1, got {t}"
            )));
        }
        let a = shape_constant(n, t)?;
        Ok(Self { n, t, a })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    fn nf(&self) -> f64 {
        self.n as f64
    }

    /// `x'' = x + (n−1) a² x^{1−2n}`.
    fn acceleration(&self, x: f64) -> f64 {
        x + (self.nf() - 1.0) * self.a * self.a * x.powi(1 - 2 * self.n as i32)
    }

    /// `x² − 1 − a² x^{2(1−n)}`, the square of `x'` on the solution.
    pub fn radicand(&self, x: f64) -> f64 {
        (x - 1.0) * (x + 1.0) - self.a * self.a * x.powi(2 - 2 * self.n as i32)
    }

    /// `x''(0)`, the curvature of the profile at the neck.
    pub fn neck_acceleration(&self) -> f64 {
        self.acceleration(self.t)
    }

    /// Maximum of `|A|²`, attained at the neck:
    /// `n(n−1) a²/t^{2n} = n(n−1)(t² − 1)/t²`.
    pub fn sup_norm_a_sq(&self) -> f64 {
        let t2 = self.t * self.t;
        self.nf() * (self.nf() - 1.0) * (t2 - 1.0) / t2
    }

    /// The upper bound `n(n−1)(t² − 1) ≥ sup |A|²` used by the window
    /// certificate. It drops the `1/t²` factor of the exact maximum.
    pub fn norm_a_sq_bound(&self) -> f64 {
        self.nf() * (self.nf() - 1.0) * (self.t * self.t - 1.0)
    }

    /// Certificate of stability through the pointwise `|A|²` criterion
    /// applied to [`Self::norm_a_sq_bound`]: true iff
    /// `n(n−1)(t² − 1) ≤ (n+1)²/4`. False is inconclusive.
    pub fn is_stable_by_window(&self) -> bool {
        self.t > 1.0 && self.norm_a_sq_bound() <= (self.nf() + 1.0).powi(2) / 4.0
    }

    /// The pointwise criterion applied to the exact maximum of `|A|²`.
    /// Implied by [`Self::is_stable_by_window`]; for `n = 2` it holds for every `t`.
    pub fn is_stable_by_sharp_sup(&self) -> bool {
        self.t > 1.0 && self.sup_norm_a_sq() <= (self.nf() + 1.0).powi(2) / 4.0
    }

    /// Membership in the nominal window `1 < t < 1 + (n+1)²/(4n(n−1))`.
    /// Not a certificate on its own; see [`stability_window_max_t`].
    pub fn in_nominal_window(&self) -> bool {
        let max_t = stability_window_max_t(self.n).expect("n validated at construction");
        self.t > 1.0 && self.t < max_t
    }

    /// Integrates the profile on `[0, s_max]`, one sample per accepted step.
    pub fn integrate_profile(&self, s_max: f64, step_tol: f64) -> Result<Profile> {
        if !(s_max > 0.0) || s_max > MAX_S {
            return Err(Error::InvalidInput(format!(
                "s_max must lie in (0, {MAX_S}], got {s_max}"
            )));
        }
        if !(step_tol > 0.0) {
            return Err(Error::InvalidInput(format!(
                "step tolerance must be positive, got {step_tol}"
            )));
        }

        let mut samples: Vec<ProfileSample> = Vec::new();
        let mut accel = Vec::new();
        let tol = Tolerances {
            abs: step_tol,
            rel: step_tol,
            max_step: MAX_STEP,
        };
        ode::integrate(
            |_, y: &[f64; 2]| [y[1], self.acceleration(y[0])],
            0.0,
            [self.t, 0.0],
            s_max,
            tol,
            |step| {
                let sample = ProfileSample {
                    s: step.s,
                    x: step.y[0],
                    x_prime: step.y[1],
                };
                self.check_step(&sample, samples.last())?;
                samples.push(sample);
                accel.push(step.dy[1]);
                Ok(())
            },
        )?;
        Ok(Profile {
            catenoid: *self,
            samples,
            accel,
        })
    }

    fn check_step(&self, sample: &ProfileSample, prev: Option<&ProfileSample>) -> Result<()> {
        let scale = sample.x.powi(2).max(1.0);
        let radicand = self.radicand(sample.x);
        if radicand < -FIRST_INTEGRAL_TOL * scale {
            return Err(Error::NegativeRadicand {
                s: sample.s,
                value: radicand,
            });
        }
        let drift = (sample.x_prime * sample.x_prime - radicand).abs() / scale;
        if !(drift <= FIRST_INTEGRAL_TOL) {
            return Err(Error::Drift {
                s: sample.s,
                detail: format!("first integral violated by {drift:e}"),
            });
        }
        if let Some(prev) = prev {
            if !(sample.x > prev.x) || !(sample.x_prime > 0.0) {
                return Err(Error::Drift {
                    s: sample.s,
                    detail: format!("profile not increasing: x = {} after {}", sample.x, prev.x),
                });
            }
        }
        Ok(())
    }

    /// `|A|² = n(n−1) a² / x^{2n}`, cross-checked against
    /// `n(n−1)(x² − x'² − 1)/x²`.
    pub fn norm_a_sq(&self, sample: &ProfileSample) -> Result<f64> {
        let (closed, via_slope) = self.norm_a_sq_forms(sample);
        if (closed - via_slope).abs() > NORM_FORMS_TOL * closed.max(1.0) {
            return Err(Error::Drift {
                s: sample.s,
                detail: format!("|A|² forms disagree: {closed} vs {via_slope}"),
            });
        }
        Ok(closed)
    }

    /// Both `|A|²` expressions: `(n(n−1) a²/x^{2n}, n(n−1)(x² − x'² − 1)/x²)`.
    pub fn norm_a_sq_forms(&self, sample: &ProfileSample) -> (f64, f64) {
        let nn = self.nf() * (self.nf() - 1.0);
        let closed = nn * self.a * self.a / sample.x.powi(2 * self.n as i32);
        let via_slope = nn * slope_radicand(sample) / (sample.x * sample.x);
        (closed, via_slope)
    }

    /// `(λ₁, λₙ)` with `λ₁ = … = λ_{n−1} = −√(x² − x'² − 1)/x` and
    /// `λₙ = (n−1)√(x² − x'² − 1)/x`.
    pub fn principal_curvatures(&self, sample: &ProfileSample) -> Result<(f64, f64)> {
        let r = slope_radicand(sample);
        if !(r > 0.0) {
            return Err(Error::Degenerate(format!(
                "x² − x'² − 1 = {r} at s = {} is not positive",
                sample.s
            )));
        }
        let lambda1 = -r.sqrt() / sample.x;
        Ok((lambda1, -(self.nf() - 1.0) * lambda1))
    }
}

/// `x² − x'² − 1`, factored to limit cancellation.
fn slope_radicand(sample: &ProfileSample) -> f64 {
    (sample.x - sample.x_prime) * (sample.x + sample.x_prime) - 1.0
}

/// Integrated profile of a [`HyperbolicCatenoid`], with dense output.
#[derive(Debug, Clone)]
pub struct Profile {
    catenoid: HyperbolicCatenoid,
    samples: Vec<ProfileSample>,
    accel: Vec<f64>,
}

impl Profile {
    pub fn catenoid(&self) -> &HyperbolicCatenoid {
        &self.catenoid
    }

    pub fn samples(&self) -> &[ProfileSample] {
        &self.samples
    }

    pub fn s_max(&self) -> f64 {
        self.samples.last().map_or(0.0, |p| p.s)
    }

    /// Profile at `s ∈ [0, s_max]` by quintic Hermite interpolation of
    /// `x, x', x''` between accepted steps.
    pub fn sample_at(&self, s: f64) -> Result<ProfileSample> {
        if !(0.0..=self.s_max()).contains(&s) {
            return Err(Error::InvalidInput(format!(
                "s = {s} outside the integrated range [0, {}]",
                self.s_max()
            )));
        }
        let j = self.samples.partition_point(|p| p.s <= s);
        if j == 0 {
            return Ok(self.samples[0]);
        }
        let i = (j - 1).min(self.samples.len() - 2);
        let (p0, p1) = (&self.samples[i], &self.samples[i + 1]);
        let h = p1.s - p0.s;
        let tau = (s - p0.s) / h;
        let (t2, t3) = (tau * tau, tau * tau * tau);
        let (t4, t5) = (t3 * tau, t3 * t2);

        let h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
        let h1 = tau - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
        let h2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
        let h3 = 0.5 * t3 - t4 + 0.5 * t5;
        let h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
        let h5 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;

        let d0 = -30.0 * t2 + 60.0 * t3 - 30.0 * t4;
        let d1 = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4;
        let d2 = tau - 4.5 * t2 + 6.0 * t3 - 2.5 * t4;
        let d3 = 1.5 * t2 - 4.0 * t3 + 2.5 * t4;
        let d4 = -12.0 * t2 + 28.0 * t3 - 15.0 * t4;
        let d5 = 30.0 * t2 - 60.0 * t3 + 30.0 * t4;

        let (a0, a1) = (self.accel[i], self.accel[i + 1]);
        let x = h0 * p0.x
            + h1 * h * p0.x_prime
            + h2 * h * h * a0
            + h5 * p1.x
            + h4 * h * p1.x_prime
            + h3 * h * h * a1;
        let x_prime = (d0 * p0.x
            + d1 * h * p0.x_prime
            + d2 * h * h * a0
            + d5 * p1.x
            + d4 * h * p1.x_prime
            + d3 * h * h * a1)
            / h;
        Ok(ProfileSample { s, x, x_prime })
    }

    /// Integrand of `φ`: `√(x² − x'² − 1)/(x² − 1)`, with the numerator
    /// taken from the first integral `x² − x'² − 1 = a² x^{2(1−n)}`.
    fn phi_integrand(&self, x: f64) -> f64 {
        let c = &self.catenoid;
        c.a * x.powi(1 - c.n as i32) / ((x - 1.0) * (x + 1.0))
    }

    fn x_at(&self, s: f64) -> f64 {
        self.sample_at(s).map_or(f64::NAN, |p| p.x)
    }

    /// Angle `φ(s) = ∫₀ˢ √(x² − x'² − 1)/(x² − 1) dt`; odd in `s`.
    pub fn phi(&self, s: f64, tol: f64) -> Result<f64> {
        if s == 0.0 {
            return Ok(0.0);
        }
        let r = integrate_adaptive(|u| self.phi_integrand(self.x_at(u)), 0.0, s.abs(), tol)?;
        Ok(r.value.copysign(s))
    }

    fn phi_increment(&self, s: f64, ds: f64, tol: f64) -> Result<f64> {
        let (lo, hi) = if ds > 0.0 { (s, s + ds) } else { (s + ds, s) };
        let r = integrate_adaptive(|u| self.phi_integrand(self.x_at(u)), lo, hi, tol)?;
        Ok(r.value.copysign(ds))
    }

    fn curve_point(x: f64, phi: f64) -> (f64, f64, f64) {
        let r = ((x - 1.0) * (x + 1.0)).sqrt();
        (x, r * phi.sin(), r * phi.cos())
    }

    /// Point `(x, y, z)` of the generating curve in H² ⊂ 𝕃³ at `sample.s`.
    pub fn generating_curve(&self, sample: &ProfileSample, tol: f64) -> Result<(f64, f64, f64)> {
        let phi = self.phi(sample.s, tol)?;
        Ok(Self::curve_point(sample.x, phi))
    }

    /// Generating curve at any `|s| ≤ s_max`, using `x(−s) = x(s)` and `φ(−s) = −φ(s)`.
    pub fn curve_at(&self, s: f64, tol: f64) -> Result<(f64, f64, f64)> {
        let sample = self.sample_at(s.abs())?;
        let phi = self.phi(s, tol)?;
        Ok(Self::curve_point(sample.x, phi))
    }

    /// `|−x'² + y'² + z'² − 1|` from central differences of the generating
    /// curve with step `h` at `s`, where `h ≤ s ≤ s_max − h`.
    pub fn arclength_residual(&self, s: f64, h: f64, tol: f64) -> Result<f64> {
        if !(h > 0.0) || s - h < 0.0 || s + h > self.s_max() {
            return Err(Error::InvalidInput(format!(
                "difference stencil [{}, {}] leaves [0, {}]",
                s - h,
                s + h,
                self.s_max()
            )));
        }
        let phi = self.phi(s, tol)?;
        let plus = Self::curve_point(self.x_at(s + h), phi + self.phi_increment(s, h, tol)?);
        let minus = Self::curve_point(self.x_at(s - h), phi + self.phi_increment(s, -h, tol)?);
        let dx = (plus.0 - minus.0) / (2.0 * h);
        let dy = (plus.1 - minus.1) / (2.0 * h);
        let dz = (plus.2 - minus.2) / (2.0 * h);
        Ok((-dx * dx + dy * dy + dz * dz - 1.0).abs())
    }

    /// `|A|² x^{n−1}`: the curvature mass per unit area of the H^{n−1} fibre.
    pub fn mass_integrand(&self, sample: &ProfileSample) -> f64 {
        let c = &self.catenoid;
        let nf = c.nf();
        nf * (nf - 1.0) * c.a * c.a * sample.x.powi(-(c.n as i32) - 1)
    }

    /// `∫₀^upper |A|² x^{n−1} ds`, per unit fibre area.
    pub fn partial_mass(&self, upper: f64, tol: f64) -> Result<QuadratureResult> {
        if !(upper > 0.0 && upper <= self.s_max()) {
            return Err(Error::InvalidInput(format!(
                "upper limit {upper} outside (0, {}]",
                self.s_max()
            )));
        }
        integrate_adaptive(
            |s| {
                let x = self.x_at(s);
                self.mass_integrand(&ProfileSample {
                    s,
                    x,
                    x_prime: f64::NAN,
                })
            },
            0.0,
            upper,
            tol,
        )
    }
}
