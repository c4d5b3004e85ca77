//! Morse index of spherical catenoids in H³ by Fourier separation.
//!
//! Mode `m` of the stability form reduces to the Dirichlet problem
//! `−(ρ f′)′/ρ + q_m f = λ f` on `[−R, R]` with
//! `q_m = m²/ρ² − |A|² + 2`. After discretization both the operator and
//! the mass are symmetric tridiagonal, so the number of eigenvalues below a
//! shift is read off the pivot signs of an `LDLᵀ` factorization.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, SphericalCatenoid};

/// Smallest accepted number of grid intervals.
pub const MIN_INTERVALS: usize = 100;

/// Shift applied when a pivot vanishes exactly.
pub const PIVOT_SHIFT: f64 = 1e-12;

/// Extra truncation length and grid factor of the convergence re-run.
pub const REFINE_EXTRA_R: f64 = 5.0;
pub const REFINE_FACTOR: usize = 2;

const BISECTION_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Piecewise-linear finite elements with the consistent `ρ`-weighted
    /// mass. Eigenvalues of the constant-coefficient problem are approached
    /// from above.
    #[default]
    Galerkin,
    /// Central differences with diagonal mass `ρ_i h`.
    FiniteDifference,
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "galerkin" => Ok(Scheme::Galerkin),
            "fd" | "finite-difference" => Ok(Scheme::FiniteDifference),
            _ => Err(Error::InvalidInput(format!(
                "unknown scheme '{s}' (expected galerkin or fd)"
            ))),
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scheme::Galerkin => "galerkin",
            Scheme::FiniteDifference => "fd",
        })
    }
}

/// Discretized mode operator on `N + 1` uniform nodes of `[−R, R]`.
///
/// Unknowns live on the `N − 1` interior nodes. `op_*` hold the stiffness
/// plus potential, `mass_*` the mass.
#[derive(Debug, Clone)]
pub struct SturmLiouvilleDisc {
    grid: Vec<f64>,
    weight: Vec<f64>,
    potential: Vec<f64>,
    mode: usize,
    scheme: Scheme,
    op_diag: Vec<f64>,
    op_off: Vec<f64>,
    mass_diag: Vec<f64>,
    mass_off: Vec<f64>,
}

/// Inertia count below a shift.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub count: usize,
    /// A zero pivot forced the shift down by [`PIVOT_SHIFT`].
    pub shift_perturbed: bool,
}

impl SturmLiouvilleDisc {
    /// Discretizes `−(ρ f′)′/ρ + q f` with Dirichlet ends. `rho` must be
    /// positive on `[−R, R]`; midpoint weights are evaluated from `rho`.
    pub fn from_coefficients<P, Q>(
        rho: P,
        q: Q,
        r: f64,
        n: usize,
        mode: usize,
        scheme: Scheme,
    ) -> Result<Self>
    where
        P: Fn(f64) -> f64,
        Q: Fn(f64) -> f64,
    {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidInput(format!(
                "half-length R must be positive, got {r}"
            )));
        }
        if n < MIN_INTERVALS {
            return Err(Error::InvalidInput(format!(
                "grid needs at least {MIN_INTERVALS} intervals, got {n}"
            )));
        }
        let h = 2.0 * r / n as f64;
        let grid: Vec<f64> = (0..=n).map(|i| -r + h * i as f64).collect();
        let weight: Vec<f64> = grid.iter().map(|&s| rho(s)).collect();
        let potential: Vec<f64> = grid.iter().map(|&s| q(s)).collect();
        let mid: Vec<f64> = (0..n).map(|i| rho(-r + h * (i as f64 + 0.5))).collect();
        if let Some(bad) = weight
            .iter()
            .chain(&mid)
            .find(|w| !(**w > 0.0) || !w.is_finite())
        {
            return Err(Error::InvalidInput(format!(
                "weight must be positive and finite, got {bad}"
            )));
        }
        if let Some(i) = potential.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteIntegrand { abscissa: grid[i] });
        }

        let dim = n - 1;
        let mut op_diag = Vec::with_capacity(dim);
        let mut mass_diag = Vec::with_capacity(dim);
        let mut op_off = Vec::with_capacity(dim.saturating_sub(1));
        let mut mass_off = Vec::with_capacity(dim.saturating_sub(1));
        let w: Vec<f64> = weight.iter().zip(&potential).map(|(r, q)| r * q).collect();
        for i in 1..n {
            let stiff = (mid[i - 1] + mid[i]) / h;
            match scheme {
                Scheme::FiniteDifference => {
                    op_diag.push(stiff + h * w[i]);
                    mass_diag.push(h * weight[i]);
                }
                Scheme::Galerkin => {
                    op_diag.push(stiff + h / 12.0 * (6.0 * w[i] + w[i - 1] + w[i + 1]));
                    mass_diag.push(h / 12.0 * (6.0 * weight[i] + weight[i - 1] + weight[i + 1]));
                }
            }
            if i + 1 < n {
                let stiff_off = -mid[i] / h;
                match scheme {
                    Scheme::FiniteDifference => {
                        op_off.push(stiff_off);
                        mass_off.push(0.0);
                    }
                    Scheme::Galerkin => {
                        op_off.push(stiff_off + h / 12.0 * (w[i] + w[i + 1]));
                        mass_off.push(h / 12.0 * (weight[i] + weight[i + 1]));
                    }
                }
            }
        }
        Ok(SturmLiouvilleDisc {
            grid,
            weight,
            potential,
            mode,
            scheme,
            op_diag,
            op_off,
            mass_diag,
            mass_off,
        })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn weight(&self) -> &[f64] {
        &self.weight
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn mode(&self) -> usize {
        self.mode
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn spacing(&self) -> f64 {
        self.grid[1] - self.grid[0]
    }

    /// Number of interior unknowns.
    pub fn dim(&self) -> usize {
        self.op_diag.len()
    }

    /// Number of negative pivots of `op − σ·mass`, or `None` on an exact zero pivot.
    fn pivot_count(&self, sigma: f64) -> Option<usize> {
        let mut count = 0;
        let mut pivot = 0.0;
        for i in 0..self.dim() {
            let d = self.op_diag[i] - sigma * self.mass_diag[i];
            pivot = if i == 0 {
                d
            } else {
                let e = self.op_off[i - 1] - sigma * self.mass_off[i - 1];
                d - e * e / pivot
            };
            if pivot == 0.0 || !pivot.is_finite() {
                return None;
            }
            if pivot < 0.0 {
                count += 1;
            }
        }
        Some(count)
    }

    /// Number of discrete eigenvalues strictly below `sigma` (Sylvester's law of inertia).
    pub fn count_below(&self, sigma: f64) -> Inertia {
        match self.pivot_count(sigma) {
            Some(count) => Inertia {
                count,
                shift_perturbed: false,
            },
            None => {
                let mut shifted = sigma;
                loop {
                    shifted -= PIVOT_SHIFT * shifted.abs().max(1.0);
                    if let Some(count) = self.pivot_count(shifted) {
                        return Inertia {
                            count,
                            shift_perturbed: true,
                        };
                    }
                }
            }
        }
    }

    /// The `k` smallest eigenvalues in increasing order (fewer if `dim < k`),
    /// each located by bisection on [`count_below`](Self::count_below).
    pub fn lowest_eigenvalues(&self, k: usize) -> Vec<f64> {
        let k = k.min(self.dim());
        if k == 0 {
            return Vec::new();
        }
        // Rayleigh quotients are bounded below by the smallest nodal potential
        // for both schemes.
        let q_min = self.potential[1..self.grid.len() - 1]
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let lo = q_min - 1.0 - q_min.abs() * 1e-12;
        let mut hi = lo.abs().max(1.0);
        while self.count_below(hi).count < k {
            hi = 2.0 * hi + 1.0;
        }
        (0..k)
            .map(|j| {
                let (mut a, mut b) = (lo, hi);
                for _ in 0..BISECTION_ITERATIONS {
                    let mid = 0.5 * (a + b);
                    if mid <= a || mid >= b {
                        break;
                    }
                    if self.count_below(mid).count > j {
                        b = mid;
                    } else {
                        a = mid;
                    }
                }
                0.5 * (a + b)
            })
            .collect()
    }
}

/// `q_m(s) = m²/ρ² − |A|² + 2`.
pub fn mode_potential(cat: &SphericalCatenoid, m: usize, s: f64) -> f64 {
    let rho = cat.warp_rho(s);
    let mf = m as f64;
    mf * mf / (rho * rho) - cat.norm_a_sq(s) + 2.0
}

/// Mode operator of the spherical catenoid on `[−R, R]` with `N` intervals.
pub fn assemble_mode_operator(
    cat: &SphericalCatenoid,
    m: usize,
    r: f64,
    n: usize,
    scheme: Scheme,
) -> Result<SturmLiouvilleDisc> {
    SturmLiouvilleDisc::from_coefficients(
        |s| cat.warp_rho(s),
        |s| mode_potential(cat, m, s),
        r,
        n,
        m,
        scheme,
    )
}

pub fn count_negative_eigenvalues(disc: &SturmLiouvilleDisc) -> usize {
    disc.count_below(0.0).count
}

/// Closed-form `min_s q_m(s)`.
///
/// With `u = ρ² ≥ a − ½` and `c = 2(a² − ¼)`, `q_m = m²/u − c/u² + 2`. Its
/// only critical point `u = 2c/m²` is a maximum, so the infimum is the
/// smaller of the neck value and the limit `2`.
pub fn mode_potential_min(cat: &SphericalCatenoid, m: usize) -> f64 {
    mode_potential(cat, m, 0.0).min(2.0)
}

/// True iff `q_m ≥ 0` everywhere, which forces a zero count for that mode
/// in the continuum and in both discretizations.
pub fn mode_is_positive_by_bound(cat: &SphericalCatenoid, m: usize) -> bool {
    mode_potential_min(cat, m) >= 0.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndexOptions {
    pub r: f64,
    pub n: usize,
    pub m_max: usize,
    /// Number of lowest eigenvalues listed per assembled mode.
    pub k_lowest: usize,
    pub scheme: Scheme,
}

impl Default for IndexOptions {
    fn default() -> Self {
        IndexOptions {
            r: 10.0,
            n: 2000,
            m_max: 5,
            k_lowest: 3,
            scheme: Scheme::Galerkin,
        }
    }
}

impl IndexOptions {
    fn validate(&self) -> Result<()> {
        if !(self.r > 0.0) || !self.r.is_finite() {
            return Err(Error::InvalidInput(format!(
                "R must be positive, got {}",
                self.r
            )));
        }
        if self.n < MIN_INTERVALS {
            return Err(Error::InvalidInput(format!(
                "N must be at least {MIN_INTERVALS}, got {}",
                self.n
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSpectrum {
    pub mode: usize,
    pub negative_count: usize,
    pub lowest_eigenvalues: Vec<f64>,
    /// Skipped because `q_m ≥ 0` everywhere.
    pub screened: bool,
    pub shift_perturbed: bool,
    /// Count at the refined resolution `(2N, R + 5)`.
    pub refined_count: Option<usize>,
}

impl ModeSpectrum {
    /// Number of independent directions contributed: `±m` for `m ≥ 1`.
    pub fn multiplicity(&self) -> usize {
        if self.mode == 0 {
            1
        } else {
            2
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexReport {
    pub a: f64,
    pub r: f64,
    pub n: usize,
    pub scheme: Scheme,
    pub modes: Vec<ModeSpectrum>,
    pub total_index: usize,
    pub refined_total_index: usize,
    /// Every mode count unchanged under `N → 2N`, `R → R + 5`.
    pub converged: bool,
    /// Mode `m_max + 1` (and so every higher mode) is screened positive.
    pub higher_modes_screened: bool,
}

impl IndexReport {
    /// Modes with a nonzero count.
    pub fn unstable_modes(&self) -> Vec<usize> {
        self.modes
            .iter()
            .filter(|m| m.negative_count > 0)
            .map(|m| m.mode)
            .collect()
    }
}

fn mode_spectrum(cat: &SphericalCatenoid, m: usize, opts: &IndexOptions) -> Result<ModeSpectrum> {
    if mode_is_positive_by_bound(cat, m) {
        return Ok(ModeSpectrum {
            mode: m,
            negative_count: 0,
            lowest_eigenvalues: Vec::new(),
            screened: true,
            shift_perturbed: false,
            refined_count: Some(0),
        });
    }
    let disc = assemble_mode_operator(cat, m, opts.r, opts.n, opts.scheme)?;
    let inertia = disc.count_below(0.0);
    let fine = assemble_mode_operator(
        cat,
        m,
        opts.r + REFINE_EXTRA_R,
        opts.n * REFINE_FACTOR,
        opts.scheme,
    )?;
    let fine_inertia = fine.count_below(0.0);
    Ok(ModeSpectrum {
        mode: m,
        negative_count: inertia.count,
        lowest_eigenvalues: disc.lowest_eigenvalues(opts.k_lowest),
        screened: false,
        shift_perturbed: inertia.shift_perturbed || fine_inertia.shift_perturbed,
        refined_count: Some(fine_inertia.count),
    })
}

/// Morse index from modes `0..=m_max`, with a convergence re-run at `(2N, R + 5)`.
///
/// A count that changes under refinement yields `converged = false`; the
/// reported index is still the coarse one.
pub fn morse_index(cat: &SphericalCatenoid, opts: &IndexOptions) -> Result<IndexReport> {
    opts.validate()?;
    let modes = (0..=opts.m_max)
        .into_par_iter()
        .map(|m| mode_spectrum(cat, m, opts))
        .collect::<Result<Vec<_>>>()?;
    let total_index = modes
        .iter()
        .map(|m| m.negative_count * m.multiplicity())
        .sum();
    let refined_total_index = modes
        .iter()
        .map(|m| m.refined_count.unwrap_or(0) * m.multiplicity())
        .sum();
    let converged = modes
        .iter()
        .all(|m| m.refined_count == Some(m.negative_count));
    Ok(IndexReport {
        a: cat.a(),
        r: opts.r,
        n: opts.n,
        scheme: opts.scheme,
        modes,
        total_index,
        refined_total_index,
        converged,
        higher_modes_screened: mode_is_positive_by_bound(cat, opts.m_max + 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn constant(q: f64, n: usize, scheme: Scheme) -> SturmLiouvilleDisc {
        SturmLiouvilleDisc::from_coefficients(|_| 1.0, |_| q, PI, n, 0, scheme).unwrap()
    }

    #[test]
    fn potential_at_neck() {
        let cat = SphericalCatenoid::new(0.6).unwrap();
        let d0 = assemble_mode_operator(&cat, 0, 10.0, 2000, Scheme::Galerkin).unwrap();
        let d3 = assemble_mode_operator(&cat, 3, 10.0, 2000, Scheme::Galerkin).unwrap();
        assert!((d0.potential()[1000] + 20.0).abs() < 1e-9);
        assert!((d3.potential()[1000] - d0.potential()[1000] - 90.0).abs() < 1e-9);
        assert_eq!(d0.grid()[1000], 0.0);
        assert!(d0.weight().iter().all(|&w| w > 0.0));
        assert!(d0.grid().windows(2).all(|w| w[1] > w[0]));
        assert!((d0.spacing() - 0.01).abs() < 1e-15);
    }

    #[test]
    fn parameter_validation() {
        let cat = SphericalCatenoid::new(0.6).unwrap();
        assert!(assemble_mode_operator(&cat, 0, 10.0, 99, Scheme::Galerkin).is_err());
        assert!(assemble_mode_operator(&cat, 0, 0.0, 200, Scheme::Galerkin).is_err());
        assert!(SturmLiouvilleDisc::from_coefficients(
            |s| s,
            |_| 0.0,
            1.0,
            100,
            0,
            Scheme::Galerkin
        )
        .is_err());
        let opts = IndexOptions {
            n: 50,
            ..IndexOptions::default()
        };
        assert!(morse_index(&cat, &opts).unwrap_err().is_invalid_input());
    }

    #[test]
    fn constant_coefficient_counts() {
        for n in [500, 1000, 2000] {
            assert_eq!(
                count_negative_eigenvalues(&constant(1.0, n, Scheme::Galerkin)),
                0
            );
            assert_eq!(
                count_negative_eigenvalues(&constant(0.0, n, Scheme::Galerkin)),
                0
            );
            assert_eq!(
                count_negative_eigenvalues(&constant(-1.0, n, Scheme::Galerkin)),
                1
            );
            assert_eq!(
                count_negative_eigenvalues(&constant(1.0, n, Scheme::FiniteDifference)),
                0
            );
            assert_eq!(
                count_negative_eigenvalues(&constant(0.0, n, Scheme::FiniteDifference)),
                0
            );
        }
    }

    #[test]
    fn finite_differences_undershoot_a_zero_eigenvalue() {
        // The k = 2 Dirichlet eigenvalue of −f″ − f on [−π, π] is exactly 0;
        // central differences place it slightly below.
        let d = constant(-1.0, 1000, Scheme::FiniteDifference);
        assert_eq!(count_negative_eigenvalues(&d), 2);
        let ev = d.lowest_eigenvalues(2);
        let h = d.spacing();
        assert!((ev[1] + h * h / 12.0).abs() < 1e-8, "{}", ev[1]);
    }

    #[test]
    fn constant_coefficient_eigenvalues() {
        for scheme in [Scheme::Galerkin, Scheme::FiniteDifference] {
            let d = constant(1.0, 2000, scheme);
            let ev = d.lowest_eigenvalues(4);
            for (k, l) in ev.iter().enumerate() {
                let exact = ((k + 1) as f64 / 2.0).powi(2) + 1.0;
                assert!(
                    (l - exact).abs() < 1e-4,
                    "{scheme} k={} {l} vs {exact}",
                    k + 1
                );
                if scheme == Scheme::Galerkin {
                    assert!(*l > exact);
                }
            }
        }
    }

    #[test]
    fn eigenvalues_agree_with_counts() {
        let cat = SphericalCatenoid::new(0.6).unwrap();
        let d = assemble_mode_operator(&cat, 0, 10.0, 1000, Scheme::Galerkin).unwrap();
        let ev = d.lowest_eigenvalues(3);
        assert!(ev.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(
            ev.iter().filter(|&&l| l < 0.0).count(),
            count_negative_eigenvalues(&d)
        );
        for &l in &ev {
            assert_eq!(
                d.count_below(l - 1e-6).count + 1,
                d.count_below(l + 1e-6).count
            );
        }
    }

    #[test]
    fn zero_pivot_retries() {
        let d = SturmLiouvilleDisc::from_coefficients(
            |_| 1.0,
            |_| 0.0,
            1.0,
            100,
            0,
            Scheme::FiniteDifference,
        )
        .unwrap();
        // The first pivot of op − σ·mass vanishes at σ = op₀₀/mass₀₀.
        let sigma = d.op_diag[0] / d.mass_diag[0];
        let inertia = d.count_below(sigma);
        assert!(inertia.shift_perturbed);
        assert_eq!(inertia.count, d.count_below(sigma * (1.0 - 1e-9)).count);
    }

    #[test]
    fn screening_closed_form() {
        let c = SphericalCatenoid::new(0.6).unwrap();
        assert!(mode_is_positive_by_bound(&c, 10));
        assert!(!mode_is_positive_by_bound(&c, 0));
        let far = SphericalCatenoid::new(10.0).unwrap();
        assert!(!mode_is_positive_by_bound(&far, 1));
        assert!(mode_is_positive_by_bound(&far, 2));
        for a in [0.55, 0.7, 1.0, 3.0, 10.0] {
            let c = SphericalCatenoid::new(a).unwrap();
            for m in 0..8 {
                let grid_min = (0..=20000)
                    .map(|i| mode_potential(&c, m, -10.0 + 1e-3 * i as f64))
                    .fold(f64::INFINITY, f64::min);
                assert!(mode_potential_min(&c, m) <= grid_min + 1e-12);
                assert!(
                    grid_min - mode_potential_min(&c, m) < 1e-6 || mode_potential_min(&c, m) == 2.0
                );
                if c.sup_norm_a_sq() > 2.0 {
                    assert!(!mode_is_positive_by_bound(&c, 0));
                }
            }
        }
    }

    #[test]
    fn screened_modes_have_no_negative_eigenvalues() {
        let c = SphericalCatenoid::new(0.6).unwrap();
        for m in 0..12 {
            if mode_is_positive_by_bound(&c, m) {
                let d = assemble_mode_operator(&c, m, 8.0, 800, Scheme::Galerkin).unwrap();
                assert_eq!(count_negative_eigenvalues(&d), 0);
            }
        }
    }

    #[test]
    fn domain_monotonicity() {
        let c = SphericalCatenoid::new(0.6).unwrap();
        for scheme in [Scheme::Galerkin, Scheme::FiniteDifference] {
            let mut last = 0;
            for r in [0.5, 1.0, 2.0, 5.0, 10.0] {
                let n = (r * 200.0) as usize;
                let count = count_negative_eigenvalues(
                    &assemble_mode_operator(&c, 0, r, n.max(100), scheme).unwrap(),
                );
                assert!(count >= last, "{scheme} R={r}");
                last = count;
            }
        }
    }

    #[test]
    fn index_one_below_threshold() {
        let c = SphericalCatenoid::new(0.6).unwrap();
        let report = morse_index(&c, &IndexOptions::default()).unwrap();
        assert_eq!(report.total_index, 1);
        assert!(report.converged);
        assert_eq!(report.unstable_modes(), vec![0]);
        assert!(report.higher_modes_screened);
        assert!(report.modes[0].lowest_eigenvalues[0] < 0.0);
    }

    #[test]
    fn index_zero_far_from_neck() {
        let c = SphericalCatenoid::new(10.0).unwrap();
        let report = morse_index(&c, &IndexOptions::default()).unwrap();
        assert_eq!(report.total_index, 0);
        assert!(report.converged);
        assert_eq!(report.modes.len(), 6);
        assert!(!report.modes[1].screened);
    }
}
