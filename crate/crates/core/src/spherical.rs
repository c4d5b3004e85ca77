//! Spherical catenoids `M_a ⊂ H³`, `a > 1/2`.
//!
//! The surface is the image of
//!
//! ```text
//! f_a(s, θ) = (√(a cosh 2s + ½) cosh φ(s), √(a cosh 2s + ½) sinh φ(s),
//!              √(a cosh 2s − ½) cos θ,     √(a cosh 2s − ½) sin θ)
//! ```
//!
//! with `φ(s) = √(a² − ¼) ∫₀ˢ dt / ((a cosh 2t + ½) √(a cosh 2t − ½))`.
//! The induced metric is the warped product `ds² + ρ(s)² dθ²` with
//! `ρ(s)² = a cosh 2s − ½`, which is what the stability operator in
//! [`crate::spectral`] separates over.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::geom::LorentzVector;
use crate::quadrature::{
    integrate_adaptive, integrate_semi_infinite, solve_bracketed, QuadratureResult,
};
use crate::{Error, Result};

/// Decay rate of the mass and stability-functional integrands on `[0, ∞)`.
pub const INTEGRAND_DECAY: f64 = 3.0;

/// Step of the coarse scan that brackets the sign change of `F`.
pub const THRESHOLD_SCAN_STEP: f64 = 0.05;
/// Upper end of the coarse scan over `(1/2, 1.5]`.
pub const THRESHOLD_SCAN_MAX: f64 = 1.5;

/// Tolerance used for `φ` inside finite-difference checks.
const PHI_FD_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalCatenoid {
    a: f64,
}

/// Sign change of the stability functional located by [`SphericalCatenoid::instability_threshold`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Threshold {
    /// Root estimate of `a ↦ F(a)`.
    pub c0: f64,
    pub bracket: (f64, f64),
    pub tol: f64,
    /// Quadrature tolerance used for every `F` evaluation.
    pub quad_tol: f64,
}

impl SphericalCatenoid {
    /// Rejects `a ≤ 1/2`, where the neck radius `√(a − ½)` vanishes.
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.5) || !a.is_finite() {
            return Err(Error::InvalidInput(format!(
                "spherical catenoid needs a > 1/2, got {a}"
            )));
        }
        Ok(Self { a })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    fn u(&self, s: f64) -> f64 {
        self.a * (2.0 * s).cosh()
    }

    /// Warp radius `ρ(s) = √(a cosh 2s − ½)`.
    pub fn warp_rho(&self, s: f64) -> f64 {
        (self.u(s) - 0.5).sqrt()
    }

    /// `|A|²(s) = 2(a² − ¼) / (a cosh 2s − ½)²`.
    pub fn norm_a_sq(&self, s: f64) -> f64 {
        let r2 = self.u(s) - 0.5;
        2.0 * (self.a * self.a - 0.25) / (r2 * r2)
    }

    /// `|∇|A|| = √(2(a² − ¼)) · 2a |sinh 2s| / (a cosh 2s − ½)²`.
    pub fn grad_norm_a(&self, s: f64) -> f64 {
        let r2 = self.u(s) - 0.5;
        (2.0 * (self.a * self.a - 0.25)).sqrt() * 2.0 * self.a * (2.0 * s).sinh().abs() / (r2 * r2)
    }

    /// `sup |A|² = |A|²(0) = 2(a + ½)/(a − ½)`.
    pub fn sup_norm_a_sq(&self) -> f64 {
        2.0 * (self.a + 0.5) / (self.a - 0.5)
    }

    fn phi_integrand(&self, t: f64) -> f64 {
        let u = self.u(t);
        1.0 / ((u + 0.5) * (u - 0.5).sqrt())
    }

    fn phi_prefactor(&self) -> f64 {
        (self.a * self.a - 0.25).sqrt()
    }

    /// Longitude `φ(s)`; odd in `s`.
    pub fn phi(&self, s: f64, tol: f64) -> Result<f64> {
        if s == 0.0 {
            return Ok(0.0);
        }
        let r = integrate_adaptive(|t| self.phi_integrand(t), 0.0, s.abs(), tol)?;
        Ok((self.phi_prefactor() * r.value).copysign(s))
    }

    /// `φ(s + ds) − φ(s)` integrated directly over the short interval.
    fn phi_increment(&self, s: f64, ds: f64, tol: f64) -> Result<f64> {
        let (lo, hi) = if ds > 0.0 { (s, s + ds) } else { (s + ds, s) };
        let r = integrate_adaptive(|t| self.phi_integrand(t), lo, hi, tol)?;
        Ok((self.phi_prefactor() * r.value).copysign(ds))
    }

    fn embed_with_phi(&self, s: f64, theta: f64, phi: f64) -> [f64; 4] {
        let u = self.u(s);
        let outer = (u + 0.5).sqrt();
        let inner = (u - 0.5).sqrt();
        [
            outer * phi.cosh(),
            outer * phi.sinh(),
            inner * theta.cos(),
            inner * theta.sin(),
        ]
    }

    /// Point `f_a(s, θ)` of 𝕃⁴.
    pub fn embed(&self, s: f64, theta: f64, tol: f64) -> Result<LorentzVector> {
        let phi = self.phi(s, tol)?;
        Ok(LorentzVector::from_array(
            self.embed_with_phi(s, theta, phi),
        ))
    }

    /// Largest deviation of the finite-difference metric of the embedding
    /// from `ds² + ρ(s)² dθ²` at `(s, θ)`, using central differences of step `h`.
    pub fn metric_residual(&self, s: f64, theta: f64, h: f64) -> Result<f64> {
        if !(h > 0.0) {
            return Err(Error::InvalidInput(format!(
                "difference step must be positive, got {h}"
            )));
        }
        let phi = self.phi(s, PHI_FD_TOL)?;
        let phi_plus = phi + self.phi_increment(s, h, PHI_FD_TOL)?;
        let phi_minus = phi + self.phi_increment(s, -h, PHI_FD_TOL)?;

        let diff = |p: [f64; 4], m: [f64; 4]| -> LorentzVector {
            LorentzVector::from_array(std::array::from_fn::<f64, 4, _>(|i| {
                (p[i] - m[i]) / (2.0 * h)
            }))
        };
        let d_s = diff(
            self.embed_with_phi(s + h, theta, phi_plus),
            self.embed_with_phi(s - h, theta, phi_minus),
        );
        let d_theta = diff(
            self.embed_with_phi(s, theta + h, phi),
            self.embed_with_phi(s, theta - h, phi),
        );
        let e = d_s.inner(&d_s)?;
        let f = d_s.inner(&d_theta)?;
        let g = d_theta.inner(&d_theta)?;
        let rho2 = self.u(s) - 0.5;
        Ok((e - 1.0).abs().max(f.abs()).max((g - rho2).abs()))
    }

    /// `∫_M |A|² dv = 8π(a² − ¼) ∫₀^∞ (a cosh 2s − ½)^{-3/2} ds`.
    pub fn total_norm_a_sq(&self, tol: f64) -> Result<QuadratureResult> {
        let prefactor = 8.0 * PI * (self.a * self.a - 0.25);
        let r = integrate_semi_infinite(|s| (self.u(s) - 0.5).powf(-1.5), tol, INTEGRAND_DECAY)?;
        Ok(scale(r, prefactor))
    }

    /// `∫_M |∇|A||² dv = 32π(a² − ¼) a² ∫₀^∞ sinh² 2s (a cosh 2s − ½)^{-7/2} ds`.
    pub fn total_grad_norm_a_sq(&self, tol: f64) -> Result<QuadratureResult> {
        let prefactor = 32.0 * PI * (self.a * self.a - 0.25) * self.a * self.a;
        let r = integrate_semi_infinite(
            |s| (2.0 * s).sinh().powi(2) * (self.u(s) - 0.5).powf(-3.5),
            tol,
            INTEGRAND_DECAY,
        )?;
        Ok(scale(r, prefactor))
    }

    /// Closed form of the comparison bound obtained from `cosh 2s ≥ 1 + s²`:
    /// `8π(a² − ¼) ∫₀^∞ (a + a s² − ½)^{-3/2} ds = 8π(a + ½)/√a`.
    pub fn total_norm_a_sq_bound(&self) -> f64 {
        8.0 * PI * (self.a + 0.5) / self.a.sqrt()
    }

    /// Integrand of `F` on `[0, ∞)` before the `32π(a² − ¼)` prefactor:
    /// `u^{-3/2} − a² sinh² 2s · u^{-7/2}` with `u = a cosh 2s − ½`.
    ///
    /// Evaluated as `(a² + ¼ − a cosh 2s) · u^{-7/2}`, the same expression
    /// with the leading `e^{-3s}` terms cancelled analytically.
    pub fn stability_integrand(&self, s: f64) -> f64 {
        let c = self.u(s);
        (self.a * self.a + 0.25 - c) * (c - 0.5).powf(-3.5)
    }

    /// `F(a) = 4 ∫|A|² dv − ∫|∇|A||² dv`. Negative means `M_a` is unstable.
    pub fn stability_functional(&self, tol: f64) -> Result<QuadratureResult> {
        let prefactor = 32.0 * PI * (self.a * self.a - 0.25);
        let r = integrate_semi_infinite(|s| self.stability_integrand(s), tol, INTEGRAND_DECAY)?;
        Ok(scale(r, prefactor))
    }

    /// Root of `a ↦ F(a)` to bracket width `tol`, bracketed by a coarse scan
    /// over `(1/2, 1.5]` with step 0.05.
    pub fn instability_threshold(tol: f64) -> Result<Threshold> {
        Self::instability_threshold_with(tol, crate::DEFAULT_TOL.min(tol * 1e-3))
    }

    pub fn instability_threshold_with(tol: f64, quad_tol: f64) -> Result<Threshold> {
        if !(tol > 0.0) || !(quad_tol > 0.0) {
            return Err(Error::InvalidInput(format!(
                "tolerances must be positive, got tol {tol}, quad_tol {quad_tol}"
            )));
        }
        let f = |a: f64| -> Result<f64> { Ok(Self::new(a)?.stability_functional(quad_tol)?.value) };

        let steps = ((THRESHOLD_SCAN_MAX - 0.5) / THRESHOLD_SCAN_STEP).round() as usize;
        let mut prev: Option<(f64, f64)> = None;
        let mut bracket = None;
        for k in 1..=steps {
            let a = 0.5 + k as f64 * THRESHOLD_SCAN_STEP;
            let value = f(a)?;
            if let Some((pa, pv)) = prev {
                if pv < 0.0 && value >= 0.0 {
                    bracket = Some((pa, a));
                    break;
                }
            }
            prev = Some((a, value));
        }
        let (lo, hi) = bracket.ok_or(Error::NoSignChange {
            lo: 0.5 + THRESHOLD_SCAN_STEP,
            hi: THRESHOLD_SCAN_MAX,
            g_lo: f64::NAN,
            g_hi: f64::NAN,
        })?;

        let mut failure = None;
        let root = solve_bracketed(
            |a| match f(a) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            },
            lo,
            hi,
            tol,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        let root = root?;
        Ok(Threshold {
            c0: root.root,
            bracket: (root.lo, root.hi),
            tol,
            quad_tol,
        })
    }
}

fn scale(r: QuadratureResult, factor: f64) -> QuadratureResult {
    QuadratureResult {
        value: r.value * factor,
        error_estimate: r.error_estimate * factor.abs(),
        evaluations: r.evaluations,
    }
}
