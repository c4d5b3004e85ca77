use std::f64::consts::PI;

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::output::{Cell, Format, Report};
use super::CliError;
use crate::geom::{hyperboloid_residual, on_hyperboloid};
use crate::hyperbolic::{certified_window_max_t, stability_window_max_t, DEFAULT_STEP_TOL};
use crate::spectral::{morse_index, IndexOptions, Scheme, PIVOT_SHIFT};
use crate::stability::{
    gradient_condition_test, lambda1_bounds, lambda1_bounds_pinched, pointwise_stability_test,
    sobolev_stability_test, spectral_index_test, Criterion, StabilityReport, Verdict,
};
use crate::{Error, Helicoid, HyperbolicCatenoid, SphericalCatenoid, DEFAULT_TOL};

/// Constraint tolerance for exported points.
pub const EXPORT_CONSTRAINT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file (stdout if omitted).
    #[arg(long, short)]
    #[serde(skip)]
    pub output: Option<std::path::PathBuf>,
}

trait Context<T> {
    fn during(self, op: &str, params: impl FnOnce() -> String) -> Result<T, CliError>;
}

impl<T> Context<T> for crate::Result<T> {
    fn during(self, op: &str, params: impl FnOnce() -> String) -> Result<T, CliError> {
        self.map_err(|source| CliError::from_library(op, params(), source))
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn config<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).unwrap_or(Value::Null)
}

/// `count` evenly spaced values from `lo` to `hi` inclusive.
fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (count - 1) as f64;
    (0..count)
        .map(|i| {
            if i + 1 == count {
                hi
            } else {
                lo + step * i as f64
            }
        })
        .collect()
}

fn check_range(
    name: &str,
    lo: f64,
    hi: f64,
    count: usize,
    min_count: usize,
) -> Result<(), CliError> {
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(usage(format!(
            "{name} range needs finite min ≤ max, got [{lo}, {hi}]"
        )));
    }
    if count < min_count {
        return Err(usage(format!(
            "{name} grid needs at least {min_count} points, got {count}"
        )));
    }
    if lo == hi && count > 1 {
        return Err(usage(format!(
            "{name} range is empty but {count} points were requested"
        )));
    }
    Ok(())
}

fn check_tol(tol: f64) -> Result<(), CliError> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(usage(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepFArgs {
    #[arg(long, default_value_t = 0.55)]
    pub a_min: f64,
    #[arg(long, default_value_t = 1.5)]
    pub a_max: f64,
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
    /// Relative quadrature tolerance.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

pub fn sweep_f(args: &SweepFArgs) -> Result<Report, CliError> {
    check_tol(args.tol)?;
    if !(args.step > 0.0) || !args.step.is_finite() {
        return Err(usage(format!("step must be positive, got {}", args.step)));
    }
    if !(args.a_min > 0.5) || !(args.a_max >= args.a_min) || !args.a_max.is_finite() {
        return Err(usage(format!(
            "need 1/2 < a-min ≤ a-max, got [{}, {}]",
            args.a_min, args.a_max
        )));
    }
    let count = ((args.a_max - args.a_min) / args.step + 1e-9).floor() as usize + 1;
    if count > 100_000 {
        return Err(usage(format!("sweep has {count} points, more than 100000")));
    }
    let grid: Vec<f64> = (0..count)
        .map(|i| args.a_min + args.step * i as f64)
        .collect();
    let values = grid
        .par_iter()
        .map(|&a| {
            SphericalCatenoid::new(a)
                .and_then(|c| c.stability_functional(args.tol))
                .during("stability_functional", || {
                    format!("a = {a}, tol = {}", args.tol)
                })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut report = Report::new("sweep-f", config(args)).tolerance("quadrature", args.tol);
    let change = grid
        .windows(2)
        .zip(values.windows(2))
        .find(|(_, v)| v[0].value < 0.0 && v[1].value >= 0.0)
        .map(|(a, _)| json!([a[0], a[1]]));
    report.summary("sign_change", change.unwrap_or(Value::Null));
    report.columns(&["a", "F", "err", "sign"]);
    for (a, r) in grid.iter().zip(&values) {
        let sign = if r.value < 0.0 {
            "negative"
        } else {
            "positive"
        };
        report.push_row(vec![
            (*a).into(),
            r.value.into(),
            r.error_estimate.into(),
            sign.into(),
        ]);
    }
    Ok(report)
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FindC0Args {
    /// Width of the final bracket.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

pub fn find_c0(args: &FindC0Args) -> Result<Report, CliError> {
    check_tol(args.tol)?;
    let th = SphericalCatenoid::instability_threshold(args.tol)
        .during("instability_threshold", || format!("tol = {}", args.tol))?;
    let mut report = Report::new("find-c0", config(args))
        .tolerance("bracket", th.tol)
        .tolerance("quadrature", th.quad_tol);
    report.summary("c0", th.c0);
    report.summary("bracket", json!([th.bracket.0, th.bracket.1]));
    report.summary("tol", th.tol);
    report.columns(&["c0", "bracket_lo", "bracket_hi", "tol"]);
    report.push_row(vec![
        th.c0.into(),
        th.bracket.0.into(),
        th.bracket.1.into(),
        th.tol.into(),
    ]);
    Ok(report)
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct IndexArgs {
    /// Catenoid parameter, a > 1/2.
    #[arg(long)]
    pub a: f64,
    /// Truncation half-length R.
    #[arg(long = "r", short = 'R', default_value_t = 10.0)]
    pub r: f64,
    /// Grid intervals N.
    #[arg(long = "n", short = 'N', default_value_t = 2000)]
    pub n: usize,
    #[arg(long, default_value_t = 5)]
    pub m_max: usize,
    /// Lowest eigenvalues listed per mode.
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long, default_value_t = Scheme::Galerkin)]
    pub scheme: Scheme,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

pub fn index(args: &IndexArgs) -> Result<Report, CliError> {
    if args.m_max > 1000 || args.k > 1000 {
        return Err(usage("m-max and k are limited to 1000"));
    }
    let cat =
        SphericalCatenoid::new(args.a).during("SphericalCatenoid", || format!("a = {}", args.a))?;
    let opts = IndexOptions {
        r: args.r,
        n: args.n,
        m_max: args.m_max,
        k_lowest: args.k,
        scheme: args.scheme,
    };
    let rep = morse_index(&cat, &opts).during("morse_index", || {
        format!(
            "a = {}, R = {}, N = {}, m_max = {}",
            args.a, args.r, args.n, args.m_max
        )
    })?;
    let verdict = spectral_index_test(&rep);

    let mut report = Report::new("index", config(args)).tolerance("pivot_shift", PIVOT_SHIFT);
    report.summary("total_index", rep.total_index);
    report.summary("refined_total_index", rep.refined_total_index);
    report.summary("converged", rep.converged);
    report.summary("higher_modes_screened", rep.higher_modes_screened);
    report.summary("unstable_modes", rep.unstable_modes());
    report.summary("verdict", verdict.verdict.to_string());
    let mut columns: Vec<String> = [
        "mode",
        "multiplicity",
        "screened",
        "negative_count",
        "refined_count",
        "shift_perturbed",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    columns.extend((1..=args.k).map(|j| format!("lambda_{j}")));
    report.columns(&columns);
    for m in &rep.modes {
        let mut row: Vec<Cell> = vec![
            m.mode.into(),
            m.multiplicity().into(),
            m.screened.into(),
            m.negative_count.into(),
            m.refined_count.map_or(Cell::Empty, Cell::from),
            m.shift_perturbed.into(),
        ];
        row.extend((0..args.k).map(|j| {
            m.lowest_eigenvalues
                .get(j)
                .map_or(Cell::Empty, |&l| l.into())
        }));
        report.push_row(row);
    }
    Ok(report)
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HyperbolicWindowArgs {
    /// Dimensions n (comma separated).
    #[arg(long = "n", value_delimiter = ',', default_value = "2,3,4")]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 1.05)]
    pub t_min: f64,
    #[arg(long, default_value_t = 2.5)]
    pub t_max: f64,
    #[arg(long, default_value_t = 30)]
    pub t_count: usize,
    /// Profile length used for the slope bracket and |A|² checks.
    #[arg(long, default_value_t = 5.0)]
    pub s_max: f64,
    #[arg(long, default_value_t = DEFAULT_STEP_TOL)]
    pub step_tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

pub fn hyperbolic_window(args: &HyperbolicWindowArgs) -> Result<Report, CliError> {
    check_tol(args.step_tol)?;
    check_range("t", args.t_min, args.t_max, args.t_count, 1)?;
    if !(args.t_min > 1.0) {
        return Err(usage(format!("t-min must exceed 1, got {}", args.t_min)));
    }
    if args.n.is_empty() || args.n.iter().any(|&n| !(2..=64).contains(&n)) {
        return Err(usage("every n must lie in 2..=64"));
    }
    let ts = linspace(args.t_min, args.t_max, args.t_count);
    let cases: Vec<(usize, f64)> = args
        .n
        .iter()
        .flat_map(|&n| ts.iter().map(move |&t| (n, t)))
        .collect();
    let rows = cases
        .par_iter()
        .map(|&(n, t)| {
            window_row(n, t, args).during("integrate_profile", || format!("n = {n}, t = {t}"))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut report =
        Report::new("hyperbolic-window", config(args)).tolerance("step", args.step_tol);
    let mut nominal = Vec::new();
    let mut certified = Vec::new();
    for &n in &args.n {
        nominal.push(
            stability_window_max_t(n).during("stability_window_max_t", || format!("n = {n}"))?,
        );
        certified.push(
            certified_window_max_t(n).during("certified_window_max_t", || format!("n = {n}"))?,
        );
    }
    report.summary("nominal_window_max_t", nominal);
    report.summary("certified_window_max_t", certified);
    report.columns(&[
        "n",
        "t",
        "a",
        "norm_a_sq_bound",
        "sup_norm_a_sq",
        "threshold",
        "stable_by_window",
        "pointwise_verdict",
        "in_nominal_window",
        "slope_bracket_holds",
        "max_form_gap",
        "x_at_s_max",
    ]);
    for row in rows {
        report.push_row(row);
    }
    Ok(report)
}

fn window_row(n: usize, t: f64, args: &HyperbolicWindowArgs) -> crate::Result<Vec<Cell>> {
    let cat = HyperbolicCatenoid::new(n, t)?;
    let profile = cat.integrate_profile(args.s_max, args.step_tol)?;
    let bracket = profile
        .samples()
        .iter()
        .all(|s| s.satisfies_bracket(cat.a()));
    let gap = profile
        .samples()
        .iter()
        .map(|s| {
            let (c, v) = cat.norm_a_sq_forms(s);
            (c - v).abs()
        })
        .fold(0.0, f64::max);
    let last = profile.samples().last().map_or(f64::NAN, |s| s.x);
    let pointwise = pointwise_stability_test(n, cat.norm_a_sq_bound())?;
    Ok(vec![
        n.into(),
        t.into(),
        cat.a().into(),
        cat.norm_a_sq_bound().into(),
        cat.sup_norm_a_sq().into(),
        pointwise.threshold.into(),
        cat.is_stable_by_window().into(),
        pointwise.verdict.to_string().into(),
        cat.in_nominal_window().into(),
        bracket.into(),
        gap.into(),
        last.into(),
    ])
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HelicoidArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Number of t samples.
    #[arg(long, default_value_t = 100)]
    pub t_grid: usize,
    #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
    pub t_min: f64,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    pub t_max: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

pub fn helicoid(args: &HelicoidArgs) -> Result<Report, CliError> {
    check_range("t", args.t_min, args.t_max, args.t_grid, 1)?;
    let h = Helicoid::new(args.alpha).during("Helicoid", || format!("alpha = {}", args.alpha))?;
    let pointwise = pointwise_stability_test(2, h.sup_norm_a_sq())
        .during("pointwise_stability_test", || {
            format!("alpha = {}", args.alpha)
        })?;
    let mut report = Report::new("helicoid", config(args));
    report.summary("alpha", args.alpha);
    report.summary("sup_norm_a_sq", h.sup_norm_a_sq());
    report.summary("stable_by_pitch", h.is_stable_by_pitch());
    report.summary("pointwise_verdict", pointwise.verdict.to_string());
    report.columns(&["t", "E", "norm_a_sq", "norm_a_sq_from_forms"]);
    for t in linspace(args.t_min, args.t_max, args.t_grid) {
        let e = h.first_fundamental(t).ss;
        report.push_row(vec![
            t.into(),
            e.into(),
            h.norm_a_sq(t).into(),
            h.norm_a_sq_from_forms(t).into(),
        ]);
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Spherical,
    Helicoid,
    Hyperbolic,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EmbedExportArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Spherical catenoid parameter.
    #[arg(long)]
    pub a: Option<f64>,
    /// Helicoid pitch.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Hyperbolic catenoid dimension.
    #[arg(long = "n")]
    pub n: Option<usize>,
    /// Hyperbolic catenoid neck parameter.
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub s_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub s_max: Option<f64>,
    #[arg(long, default_value_t = 50)]
    pub s_count: usize,
    /// Second surface coordinate: θ for spherical (default [0, 2π)), t for helicoid (default [−2, 2]).
    #[arg(long, allow_hyphen_values = true)]
    pub v_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub v_max: Option<f64>,
    #[arg(long, default_value_t = 50)]
    pub v_count: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

fn required<T: Copy>(v: Option<T>, flag: &str, family: &str) -> Result<T, CliError> {
    v.ok_or_else(|| usage(format!("--{flag} is required for family {family}")))
}

fn check_surface_point(x: &[f64], s: f64, v: f64) -> Result<(), CliError> {
    let p = crate::LorentzVector::new(x.to_vec())
        .map_err(|e| CliError::from_library("embed", String::new(), e))?;
    let ok = on_hyperboloid(&p, EXPORT_CONSTRAINT_TOL).unwrap_or(false);
    if !ok {
        return Err(CliError::from_library(
            "embed",
            format!("s = {s}, v = {v}"),
            Error::Drift {
                s,
                detail: format!("hyperboloid residual {}", hyperboloid_residual(&p)),
            },
        ));
    }
    Ok(())
}

pub fn embed_export(args: &EmbedExportArgs) -> Result<Report, CliError> {
    check_tol(args.tol)?;
    let mut report =
        Report::new("embed-export", config(args)).tolerance("constraint", EXPORT_CONSTRAINT_TOL);
    match args.family {
        Family::Spherical | Family::Helicoid => {
            let (s_lo, s_hi) = (args.s_min.unwrap_or(-2.0), args.s_max.unwrap_or(2.0));
            check_range("s", s_lo, s_hi, args.s_count, 1)?;
            let ss = linspace(s_lo, s_hi, args.s_count);
            let (v_name, vs) = if args.family == Family::Spherical {
                let (lo, hi) = (args.v_min.unwrap_or(0.0), args.v_max.unwrap_or(2.0 * PI));
                check_range("v", lo, hi, args.v_count, 1)?;
                let step = (hi - lo) / args.v_count as f64;
                (
                    "theta",
                    (0..args.v_count)
                        .map(|j| lo + step * j as f64)
                        .collect::<Vec<_>>(),
                )
            } else {
                let (lo, hi) = (args.v_min.unwrap_or(-2.0), args.v_max.unwrap_or(2.0));
                check_range("v", lo, hi, args.v_count, 1)?;
                ("t", linspace(lo, hi, args.v_count))
            };
            let points: Vec<Vec<[f64; 4]>> = match args.family {
                Family::Spherical => {
                    let a = required(args.a, "a", "spherical")?;
                    let cat = SphericalCatenoid::new(a)
                        .during("SphericalCatenoid", || format!("a = {a}"))?;
                    ss.par_iter()
                        .map(|&s| {
                            vs.iter()
                                .map(|&th| {
                                    cat.embed(s, th, args.tol)
                                        .map(|p| std::array::from_fn(|i| p.coords()[i]))
                                        .during("embed", || {
                                            format!("a = {a}, s = {s}, theta = {th}")
                                        })
                                })
                                .collect::<Result<Vec<_>, _>>()
                        })
                        .collect::<Result<Vec<_>, _>>()?
                }
                _ => {
                    let alpha = required(args.alpha, "alpha", "helicoid")?;
                    let h =
                        Helicoid::new(alpha).during("Helicoid", || format!("alpha = {alpha}"))?;
                    ss.iter()
                        .map(|&s| {
                            vs.iter()
                                .map(|&t| std::array::from_fn(|i| h.embed(s, t).coords()[i]))
                                .collect()
                        })
                        .collect()
                }
            };
            report.summary("family", format!("{:?}", args.family).to_lowercase());
            report.summary("rows", ss.len() * vs.len());
            report.columns(&["s", v_name, "x1", "x2", "x3", "x4"]);
            for (s, row) in ss.iter().zip(&points) {
                for (v, x) in vs.iter().zip(row) {
                    check_surface_point(x, *s, *v)?;
                    let mut cells: Vec<Cell> = vec![(*s).into(), (*v).into()];
                    cells.extend(x.iter().map(|&c| Cell::from(c)));
                    report.push_row(cells);
                }
            }
        }
        Family::Hyperbolic => {
            let n = required(args.n, "n", "hyperbolic")?;
            let t = required(args.t, "t", "hyperbolic")?;
            if args.v_min.is_some() || args.v_max.is_some() {
                return Err(usage(
                    "--v-min/--v-max do not apply to the hyperbolic generating curve",
                ));
            }
            let (s_lo, s_hi) = (args.s_min.unwrap_or(0.0), args.s_max.unwrap_or(5.0));
            check_range("s", s_lo, s_hi, args.s_count, 1)?;
            let params = || format!("n = {n}, t = {t}");
            let cat = HyperbolicCatenoid::new(n, t).during("HyperbolicCatenoid", params)?;
            let reach = s_lo.abs().max(s_hi.abs()).max(1e-3);
            let profile = cat
                .integrate_profile(reach, DEFAULT_STEP_TOL)
                .during("integrate_profile", params)?;
            let ss = linspace(s_lo, s_hi, args.s_count);
            let points = ss
                .par_iter()
                .map(|&s| {
                    profile
                        .curve_at(s, args.tol)
                        .during("curve_at", || format!("n = {n}, t = {t}, s = {s}"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            report.summary("family", "hyperbolic");
            report.summary("rows", ss.len());
            report.columns(&["s", "x", "y", "z"]);
            for (s, (x, y, z)) in ss.iter().zip(points) {
                let residual = -x * x + y * y + z * z + 1.0;
                if !(residual.abs() <= EXPORT_CONSTRAINT_TOL) {
                    return Err(CliError::from_library(
                        "curve_at",
                        format!("n = {n}, t = {t}, s = {s}"),
                        Error::Drift {
                            s: *s,
                            detail: format!("curve residual {residual}"),
                        },
                    ));
                }
                report.push_row(vec![(*s).into(), x.into(), y.into(), z.into()]);
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CriteriaArgs {
    /// Hypersurface dimension n.
    #[arg(long = "n", default_value_t = 2)]
    pub n: usize,
    /// Curvature pinching −b² ≤ K ≤ −a² of the ambient 3-manifold: lower constant a.
    #[arg(long)]
    pub pinch_a: Option<f64>,
    #[arg(long)]
    pub pinch_b: Option<f64>,
    /// sup |A|² for the pointwise test.
    #[arg(long)]
    pub sup_a_sq: Option<f64>,
    #[arg(long)]
    pub sobolev_const: Option<f64>,
    /// ∫|A|ⁿ for the Sobolev test.
    #[arg(long)]
    pub a_norm_pow_n: Option<f64>,
    /// ∫|A|² for the gradient condition.
    #[arg(long)]
    pub mass: Option<f64>,
    /// ∫|∇|A||² for the gradient condition.
    #[arg(long)]
    pub grad: Option<f64>,
    /// Evaluate every applicable test on a concrete family member.
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    /// Also compute the spectral index (spherical family).
    #[arg(long)]
    pub with_index: bool,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutputArgs,
}

fn push_report(report: &mut Report, subject: &str, r: StabilityReport) {
    report.push_row(vec![
        subject.into(),
        r.criterion.to_string().into(),
        r.verdict.to_string().into(),
        r.witness.into(),
        r.threshold.into(),
    ]);
}

pub fn criteria(args: &CriteriaArgs) -> Result<Report, CliError> {
    check_tol(args.tol)?;
    let n = args.n;
    let mut report = Report::new("criteria", config(args)).tolerance("quadrature", args.tol);
    let (lo, hi) = lambda1_bounds(n).during("lambda1_bounds", || format!("n = {n}"))?;
    report.summary("lambda1_bounds", json!([lo, hi]));
    match (args.pinch_a, args.pinch_b) {
        (Some(a), Some(b)) => {
            let (lo, hi) = lambda1_bounds_pinched(a, b)
                .during("lambda1_bounds_pinched", || format!("a = {a}, b = {b}"))?;
            report.summary("lambda1_bounds_pinched", json!([lo, hi]));
        }
        (None, None) => {}
        _ => return Err(usage("--pinch-a and --pinch-b must be given together")),
    }
    report.columns(&["subject", "criterion", "verdict", "witness", "threshold"]);

    if let Some(sup) = args.sup_a_sq {
        let r = pointwise_stability_test(n, sup).during("pointwise_stability_test", || {
            format!("n = {n}, sup = {sup}")
        })?;
        push_report(&mut report, "input", r);
    }
    match (args.sobolev_const, args.a_norm_pow_n) {
        (Some(c), Some(i)) => {
            let r = sobolev_stability_test(n, c, i).during("sobolev_stability_test", || {
                format!("n = {n}, C_s = {c}, integral = {i}")
            })?;
            push_report(&mut report, "input", r);
        }
        (None, None) => {}
        _ => {
            return Err(usage(
                "--sobolev-const and --a-norm-pow-n must be given together",
            ))
        }
    }
    match (args.mass, args.grad) {
        (Some(m), Some(g)) => {
            let r = gradient_condition_test(n, m, g).during("gradient_condition_test", || {
                format!("n = {n}, mass = {m}, grad = {g}")
            })?;
            push_report(&mut report, "input", r);
        }
        (None, None) => {}
        _ => return Err(usage("--mass and --grad must be given together")),
    }

    match args.family {
        None => {
            if args.with_index {
                return Err(usage("--with-index needs --family spherical"));
            }
        }
        Some(Family::Spherical) => {
            let a = required(args.a, "a", "spherical")?;
            if n != 2 {
                return Err(usage("spherical catenoids are surfaces; use --n 2"));
            }
            let params = || format!("a = {a}");
            let cat = SphericalCatenoid::new(a).during("SphericalCatenoid", params)?;
            let subject = format!("spherical a={a}");
            let r = pointwise_stability_test(2, cat.sup_norm_a_sq())
                .during("pointwise_stability_test", params)?;
            push_report(&mut report, &subject, r);
            let mass = cat
                .total_norm_a_sq(args.tol)
                .during("total_norm_a_sq", params)?;
            let grad = cat
                .total_grad_norm_a_sq(args.tol)
                .during("total_grad_norm_a_sq", params)?;
            let r = gradient_condition_test(2, mass.value, grad.value)
                .during("gradient_condition_test", params)?;
            push_report(&mut report, &subject, r);
            if args.with_index {
                let rep =
                    morse_index(&cat, &IndexOptions::default()).during("morse_index", params)?;
                push_report(&mut report, &subject, spectral_index_test(&rep));
            }
        }
        Some(Family::Helicoid) => {
            let alpha = required(args.alpha, "alpha", "helicoid")?;
            if n != 2 {
                return Err(usage("helicoids are surfaces; use --n 2"));
            }
            let h = Helicoid::new(alpha).during("Helicoid", || format!("alpha = {alpha}"))?;
            let subject = format!("helicoid alpha={alpha}");
            push_report(
                &mut report,
                &subject,
                StabilityReport {
                    verdict: if h.is_stable_by_pitch() {
                        Verdict::StableCertified
                    } else {
                        Verdict::Inconclusive
                    },
                    criterion: Criterion::HelicoidPitch,
                    witness: alpha * alpha,
                    threshold: 9.0 / 8.0,
                },
            );
            let r = pointwise_stability_test(2, h.sup_norm_a_sq())
                .during("pointwise_stability_test", || format!("alpha = {alpha}"))?;
            push_report(&mut report, &subject, r);
        }
        Some(Family::Hyperbolic) => {
            let t = required(args.t, "t", "hyperbolic")?;
            let params = || format!("n = {n}, t = {t}");
            let cat = HyperbolicCatenoid::new(n, t).during("HyperbolicCatenoid", params)?;
            let subject = format!("hyperbolic n={n} t={t}");
            let threshold = (n as f64 + 1.0).powi(2) / 4.0;
            push_report(
                &mut report,
                &subject,
                StabilityReport {
                    verdict: if cat.is_stable_by_window() {
                        Verdict::StableCertified
                    } else {
                        Verdict::Inconclusive
                    },
                    criterion: Criterion::HyperbolicCatenoidWindow,
                    witness: cat.norm_a_sq_bound(),
                    threshold,
                },
            );
            let r = pointwise_stability_test(n, cat.sup_norm_a_sq())
                .during("pointwise_stability_test", params)?;
            push_report(&mut report, &subject, r);
        }
    }
    Ok(report)
}
