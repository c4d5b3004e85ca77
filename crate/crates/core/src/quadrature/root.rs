use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const MAX_ITERATIONS: usize = 500;

/// Final bracket of a sign change.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootBracket {
    /// Best estimate of the root; lies in `[lo, hi]`.
    pub root: f64,
    pub lo: f64,
    pub hi: f64,
    pub evaluations: usize,
}

impl RootBracket {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Root of `g` inside `[lo, hi]` located to bracket width `≤ tol`.
pub fn find_root_bracketed<G: FnMut(f64) -> f64>(g: G, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    solve_bracketed(g, lo, hi, tol).map(|b| b.root)
}

/// Brent's method: inverse quadratic / secant steps guarded by bisection.
/// Every iterate stays inside the current sign-change bracket.
#[allow(clippy::explicit_counter_loop)]
pub fn solve_bracketed<G: FnMut(f64) -> f64>(
    mut g: G,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<RootBracket> {
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "root bracket needs lo < hi and tol > 0, got [{lo}, {hi}], tol {tol}"
        )));
    }
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (g(a), g(b));
    let mut evaluations = 2;
    if !fa.is_finite() || !fb.is_finite() || fa * fb > 0.0 {
        return Err(Error::NoSignChange {
            lo,
            hi,
            g_lo: fa,
            g_hi: fb,
        });
    }
    if fa == 0.0 {
        return Ok(RootBracket {
            root: a,
            lo: a,
            hi: a,
            evaluations,
        });
    }
    if fb == 0.0 {
        return Ok(RootBracket {
            root: b,
            lo: b,
            hi: b,
            evaluations,
        });
    }

    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITERATIONS {
        if (fb > 0.0) == (fc > 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let m = 0.5 * (c - b);
        if fb == 0.0 {
            return Ok(RootBracket {
                root: b,
                lo: b,
                hi: b,
                evaluations,
            });
        }
        if (c - b).abs() <= tol || m.abs() <= 2.0 * f64::EPSILON * b.abs() {
            let (lo, hi) = if b < c { (b, c) } else { (c, b) };
            return Ok(RootBracket {
                root: b,
                lo,
                hi,
                evaluations,
            });
        }

        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * m * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }

        a = b;
        fa = fb;
        b += if d.abs() > tol1 {
            d
        } else {
            tol1.min(m.abs()).copysign(m)
        };
        fb = g(b);
        evaluations += 1;
        if !fb.is_finite() {
            return Err(Error::NonFiniteIntegrand { abscissa: b });
        }
    }
    Err(Error::RootNotConverged {
        iterations: MAX_ITERATIONS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn textbook_roots() {
        let r = solve_bracketed(|x| x * x - 2.0, 1.0, 2.0, 1e-12).unwrap();
        assert!((r.root - 2f64.sqrt()).abs() < 1e-12);
        assert!(r.width() <= 1e-12);
        let r = find_root_bracketed(f64::cos, 1.0, 2.0, 1e-12).unwrap();
        assert!((r - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn rejects_missing_sign_change() {
        let err = find_root_bracketed(|x| x * x + 1.0, -1.0, 1.0, 1e-10).unwrap_err();
        assert!(matches!(err, Error::NoSignChange { .. }));
        assert!(find_root_bracketed(|x| x, 1.0, 0.0, 1e-10).is_err());
    }

    #[test]
    fn exact_zero_at_endpoint() {
        assert_eq!(
            find_root_bracketed(|x| x - 1.0, 1.0, 2.0, 1e-10).unwrap(),
            1.0
        );
    }

    proptest! {
        #[test]
        fn root_stays_in_bracket(shift in -0.99f64..0.99, power in 1i32..6, tol_exp in 3i32..14) {
            let tol = 10f64.powi(-tol_exp);
            let g = |x: f64| (x - shift).powi(2 * power - 1) + 1e-3 * (x - shift);
            let r = solve_bracketed(g, -1.0, 1.0, tol).unwrap();
            prop_assert!(-1.0 <= r.root && r.root <= 1.0);
            prop_assert!(r.lo <= r.root && r.root <= r.hi);
            prop_assert!(r.width() <= tol);
            prop_assert!(r.lo <= shift + 1e-9 && shift - 1e-9 <= r.hi);
        }
    }
}
