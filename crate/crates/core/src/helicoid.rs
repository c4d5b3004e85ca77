//! Helicoids `M_α ⊂ H³` with angular pitch `α`.
//!
//! `X(s, t) = (cosh s cosh t, sinh s cosh t, cos αs sinh t, sin αs sinh t)`
//! with first fundamental form `E ds² + dt²`, `E = cosh² t + α² sinh² t`,
//! and second fundamental form `−2α/√E ds dt`.

use serde::{Deserialize, Serialize};

use crate::geom::LorentzVector;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Helicoid {
    alpha: f64,
}

/// Coefficients of a symmetric 2-form in the `(s, t)` coordinates:
/// `ss ds² + 2 st ds dt + tt dt²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FundamentalForm {
    pub ss: f64,
    pub st: f64,
    pub tt: f64,
}

impl Helicoid {
    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::InvalidInput(format!(
                "pitch must be finite, got {alpha}"
            )));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    fn e(&self, t: f64) -> f64 {
        let (c, s) = (t.cosh(), t.sinh());
        c * c + self.alpha * self.alpha * s * s
    }

    fn point(&self, s: f64, t: f64) -> [f64; 4] {
        let (ct, st) = (t.cosh(), t.sinh());
        let phase = self.alpha * s;
        [
            s.cosh() * ct,
            s.sinh() * ct,
            phase.cos() * st,
            phase.sin() * st,
        ]
    }

    pub fn embed(&self, s: f64, t: f64) -> LorentzVector {
        LorentzVector::from_array(self.point(s, t))
    }

    /// `(E, F, G) = (cosh² t + α² sinh² t, 0, 1)`.
    pub fn first_fundamental(&self, t: f64) -> FundamentalForm {
        FundamentalForm {
            ss: self.e(t),
            st: 0.0,
            tt: 1.0,
        }
    }

    /// `II = −2α/√E ds dt`, i.e. the only nonzero coefficient is `st = −α/√E`.
    /// The sign refers to the unit normal oriented by [`Self::unit_normal`].
    pub fn second_fundamental(&self, t: f64) -> FundamentalForm {
        FundamentalForm {
            ss: 0.0,
            st: -self.alpha / self.e(t).sqrt(),
            tt: 0.0,
        }
    }

    /// `|A|² = α²/E + α²/E³`, the expression reported for this family.
    ///
    /// It bounds the value `2α²/E²` computed from the fundamental forms
    /// ([`Self::norm_a_sq_from_forms`]) from above, the difference being
    /// `α²(E − 1)²/E³`; both equal `2α²` at `t = 0`.
    pub fn norm_a_sq(&self, t: f64) -> f64 {
        let e = self.e(t);
        let a2 = self.alpha * self.alpha;
        a2 / e + a2 / (e * e * e)
    }

    /// `|A|² = 2 (II_st)² / (E G) = 2α²/E²`.
    pub fn norm_a_sq_from_forms(&self, t: f64) -> f64 {
        let e = self.e(t);
        2.0 * self.alpha * self.alpha / (e * e)
    }

    /// `sup |A|² = 2α²`, attained on the axis `t = 0`.
    pub fn sup_norm_a_sq(&self) -> f64 {
        2.0 * self.alpha * self.alpha
    }

    /// Stability certificate `α² ≤ 9/8` (equivalently `sup |A|² ≤ 9/4`).
    /// False is inconclusive, not a proof of instability.
    pub fn is_stable_by_pitch(&self) -> bool {
        self.alpha * self.alpha <= 9.0 / 8.0
    }

    /// Unit spacelike normal at `(s, t)` from Lorentzian Gram–Schmidt on
    /// `(X, ∂_s X, ∂_t X)` applied to a fixed auxiliary vector, oriented so
    /// that `det(X, ∂_s X, ∂_t X, ν) < 0`. Partials are taken analytically.
    pub fn unit_normal(&self, s: f64, t: f64) -> LorentzVector {
        let frame = self.frame(s, t);
        LorentzVector::from_array(frame[3])
    }

    fn partials(&self, s: f64, t: f64) -> ([f64; 4], [f64; 4]) {
        let (cs, ss) = (s.cosh(), s.sinh());
        let (ct, st) = (t.cosh(), t.sinh());
        let a = self.alpha;
        let (cp, sp) = ((a * s).cos(), (a * s).sin());
        (
            [ss * ct, cs * ct, -a * sp * st, a * cp * st],
            [cs * st, ss * st, cp * ct, sp * ct],
        )
    }

    /// Orthonormal frame `(X, e_s, e_t, ν)` of 𝕃⁴.
    fn frame(&self, s: f64, t: f64) -> [[f64; 4]; 4] {
        let x = self.point(s, t);
        let (xs, xt) = self.partials(s, t);
        let ip =
            |u: &[f64; 4], v: &[f64; 4]| -u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3];
        let sub = |u: [f64; 4], v: &[f64; 4], k: f64| {
            std::array::from_fn::<f64, 4, _>(|i| u[i] - k * v[i])
        };
        let unit = |u: [f64; 4]| {
            let n = ip(&u, &u).abs().sqrt();
            u.map(|c| c / n)
        };

        // X is timelike with ⟨X, X⟩ = −1, so projections onto it flip sign.
        let mut basis = vec![x];
        let orth = |v: [f64; 4], basis: &mut Vec<[f64; 4]>| {
            let mut w = v;
            for (k, b) in basis.iter().enumerate() {
                let sign = if k == 0 { -1.0 } else { 1.0 };
                w = sub(w, b, sign * ip(&v, b));
            }
            let w = unit(w);
            basis.push(w);
        };
        orth(xs, &mut basis);
        orth(xt, &mut basis);

        // Pick the auxiliary axis with the largest normal component.
        let mut best = [0.0; 4];
        let mut best_norm = -1.0;
        for axis in 0..4 {
            let mut e = [0.0; 4];
            e[axis] = 1.0;
            let mut w = e;
            for (k, b) in basis.iter().enumerate() {
                let sign = if k == 0 { -1.0 } else { 1.0 };
                w = sub(w, b, sign * ip(&e, b));
            }
            let norm = ip(&w, &w);
            if norm > best_norm {
                best_norm = norm;
                best = w;
            }
        }
        let mut nu = unit(best);
        let det = det4([basis[0], basis[1], basis[2], nu]);
        if det > 0.0 {
            nu = nu.map(|c| -c);
        }
        [basis[0], basis[1], basis[2], nu]
    }

    /// Fundamental forms at `(s, t)` from central differences of the
    /// embedding with steps `h` and `2h`, Richardson-extrapolated to fourth
    /// order, paired with the normal of [`Self::unit_normal`].
    pub fn fundamental_forms_fd(
        &self,
        s: f64,
        t: f64,
        h: f64,
    ) -> Result<(FundamentalForm, FundamentalForm)> {
        if !(h > 0.0) {
            return Err(Error::InvalidInput(format!(
                "difference step must be positive, got {h}"
            )));
        }
        let fine = self.differences(s, t, h);
        let coarse = self.differences(s, t, 2.0 * h);
        let [xs, xt, xss, xtt, xst]: [[f64; 4]; 5] = std::array::from_fn(|k| {
            std::array::from_fn(|i| (4.0 * fine[k][i] - coarse[k][i]) / 3.0)
        });
        let ip =
            |u: &[f64; 4], v: &[f64; 4]| -u[0] * v[0] + u[1] * v[1] + u[2] * v[2] + u[3] * v[3];
        let nu = self.frame(s, t)[3];
        Ok((
            FundamentalForm {
                ss: ip(&xs, &xs),
                st: ip(&xs, &xt),
                tt: ip(&xt, &xt),
            },
            FundamentalForm {
                ss: ip(&xss, &nu),
                st: ip(&xst, &nu),
                tt: ip(&xtt, &nu),
            },
        ))
    }

    /// Central differences `[X_s, X_t, X_ss, X_tt, X_st]` with step `h`.
    fn differences(&self, s: f64, t: f64, h: f64) -> [[f64; 4]; 5] {
        let p = |ds: f64, dt: f64| self.point(s + ds, t + dt);
        let comb = |terms: &[([f64; 4], f64)], scale: f64| -> [f64; 4] {
            std::array::from_fn(|i| terms.iter().map(|(v, w)| w * v[i]).sum::<f64>() / scale)
        };
        let centre = p(0.0, 0.0);
        [
            comb(&[(p(h, 0.0), 1.0), (p(-h, 0.0), -1.0)], 2.0 * h),
            comb(&[(p(0.0, h), 1.0), (p(0.0, -h), -1.0)], 2.0 * h),
            comb(
                &[(p(h, 0.0), 1.0), (centre, -2.0), (p(-h, 0.0), 1.0)],
                h * h,
            ),
            comb(
                &[(p(0.0, h), 1.0), (centre, -2.0), (p(0.0, -h), 1.0)],
                h * h,
            ),
            comb(
                &[
                    (p(h, h), 1.0),
                    (p(h, -h), -1.0),
                    (p(-h, h), -1.0),
                    (p(-h, -h), 1.0),
                ],
                4.0 * h * h,
            ),
        ]
    }
}

fn det4(m: [[f64; 4]; 4]) -> f64 {
    let minor = |skip_row: usize, skip_col: usize| -> f64 {
        let mut sub = [[0.0; 3]; 3];
        let mut r = 0;
        for (i, row) in m.iter().enumerate() {
            if i == skip_row {
                continue;
            }
            let mut c = 0;
            for (j, &v) in row.iter().enumerate() {
                if j == skip_col {
                    continue;
                }
                sub[r][c] = v;
                c += 1;
            }
            r += 1;
        }
        sub[0][0] * (sub[1][1] * sub[2][2] - sub[1][2] * sub[2][1])
            - sub[0][1] * (sub[1][0] * sub[2][2] - sub[1][2] * sub[2][0])
            + sub[0][2] * (sub[1][0] * sub[2][1] - sub[1][1] * sub[2][0])
    };
    (0..4)
        .map(|j| if j % 2 == 0 { 1.0 } else { -1.0 } * m[0][j] * minor(0, j))
        .sum()
}
