//! Adaptive Dormand–Prince 5(4) integrator for small fixed-size systems.

use crate::{Error, Result};

/// An accepted step: position, state and state derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step<const D: usize> {
    pub s: f64,
    pub y: [f64; D],
    pub dy: [f64; D],
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub abs: f64,
    pub rel: f64,
    /// Cap on the step size.
    pub max_step: f64,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// 5th-order weights are the last row of A; E = b5 - b4.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates `y' = rhs(s, y)` from `s0` to `s_end`, calling `on_step` for
/// the initial point and every accepted step. The final step lands exactly
/// on `s_end`. `on_step` may abort the integration by returning an error.
pub fn integrate<const D: usize, R, S>(
    rhs: R,
    s0: f64,
    y0: [f64; D],
    s_end: f64,
    tol: Tolerances,
    mut on_step: S,
) -> Result<()>
where
    R: Fn(f64, &[f64; D]) -> [f64; D],
    S: FnMut(&Step<D>) -> Result<()>,
{
    if !(s_end > s0) {
        return Err(Error::InvalidInput(format!(
            "integration end {s_end} must exceed start {s0}"
        )));
    }
    let mut s = s0;
    let mut y = y0;
    let mut k0 = rhs(s, &y);
    on_step(&Step { s, y, dy: k0 })?;

    let mut h = (1e-2 * (s_end - s0)).min(tol.max_step);
    let mut last_err: f64 = 1e-4;
    while s < s_end {
        let final_step = s + h >= s_end;
        if final_step {
            h = s_end - s;
        }
        let mut k = [[0.0; D]; 7];
        k[0] = k0;
        for stage in 1..7 {
            let mut yt = y;
            for (j, kj) in k.iter().enumerate().take(stage) {
                let a = A[stage][j];
                if a != 0.0 {
                    for i in 0..D {
                        yt[i] += h * a * kj[i];
                    }
                }
            }
            k[stage] = rhs(s + C[stage] * h, &yt);
        }
        let mut y_new = y;
        for (j, kj) in k.iter().enumerate().take(6) {
            for i in 0..D {
                y_new[i] += h * A[6][j] * kj[i];
            }
        }
        let k_new = rhs(s + h, &y_new);
        k[6] = k_new;

        let mut err: f64 = 0.0;
        for i in 0..D {
            let e: f64 = (0..7).map(|j| E[j] * k[j][i]).sum::<f64>() * h;
            let scale = tol.abs + tol.rel * y[i].abs().max(y_new[i].abs());
            err = err.max((e / scale).abs());
        }
        if !err.is_finite() {
            err = f64::INFINITY;
        }

        if err <= 1.0 {
            s = if final_step { s_end } else { s + h };
            y = y_new;
            k0 = k_new;
            on_step(&Step { s, y, dy: k0 })?;
            // PI step-size control.
            let factor = 0.9 * err.max(1e-10).powf(-0.7 / 5.0) * last_err.powf(0.4 / 5.0);
            h = (h * factor.clamp(0.2, 5.0)).min(tol.max_step);
            last_err = err.max(1e-4);
        } else {
            let factor = (0.9 * err.powf(-1.0 / 5.0)).clamp(0.1, 0.9);
            h *= factor;
        }
        if h < 1e-14 * s.abs().max(1.0) {
            return Err(Error::StepUnderflow { s });
        }
    }
    Ok(())
}
