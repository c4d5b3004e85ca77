//! Lorentz–Minkowski space and the hyperboloid model.
//!
//! Signature is (−, +, …, +) with the timelike coordinate first. The
//! ambient dimension is carried by the vector itself so the same code serves
//! H³ ⊂ 𝕃⁴ and Hⁿ⁺¹ ⊂ 𝕃ⁿ⁺².

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A point or tangent vector of 𝕃ᵈ, coordinates `(x₁, …, x_d)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LorentzVector {
    coords: Vec<f64>,
}

impl LorentzVector {
    /// Builds a vector, rejecting fewer than two coordinates.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "a Lorentz vector needs at least 2 coordinates, got {}",
                coords.len()
            )));
        }
        Ok(Self { coords })
    }

    /// Builds a vector and checks it has exactly `dim` coordinates.
    pub fn with_dim(coords: Vec<f64>, dim: usize) -> Result<Self> {
        if coords.len() != dim {
            return Err(Error::DimensionMismatch {
                left: coords.len(),
                right: dim,
            });
        }
        Self::new(coords)
    }

    pub(crate) fn from_array<const D: usize>(coords: [f64; D]) -> Self {
        debug_assert!(D >= 2);
        Self {
            coords: coords.to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    /// Lorentzian inner product with `other`.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        minkowski_inner(self, other)
    }

    /// Componentwise `self + scale * other`.
    pub fn axpy(&self, scale: f64, other: &Self) -> Result<Self> {
        check_dims(self, other)?;
        Ok(Self {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + scale * b)
                .collect(),
        })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            coords: self.coords.iter().map(|c| c * factor).collect(),
        }
    }
}

fn check_dims(x: &LorentzVector, y: &LorentzVector) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    Ok(())
}

/// ⟨x, y⟩ = −x₁y₁ + Σᵢ₌₂ xᵢyᵢ.
pub fn minkowski_inner(x: &LorentzVector, y: &LorentzVector) -> Result<f64> {
    check_dims(x, y)?;
    let time = -x.coords[0] * y.coords[0];
    let space: f64 = x.coords[1..]
        .iter()
        .zip(&y.coords[1..])
        .map(|(a, b)| a * b)
        .sum();
    Ok(time + space)
}

/// True iff `|⟨x,x⟩ + 1| ≤ tol` and `x₁ ≥ 1 − tol` (upper sheet).
pub fn on_hyperboloid(x: &LorentzVector, tol: f64) -> Result<bool> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let norm = minkowski_inner(x, x)?;
    Ok((norm + 1.0).abs() <= tol && x.coords[0] >= 1.0 - tol)
}

/// Residual `⟨x,x⟩ + 1` of the hyperboloid equation.
pub fn hyperboloid_residual(x: &LorentzVector) -> f64 {
    // Self-product never mismatches.
    minkowski_inner(x, x).map(|v| v + 1.0).unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(c: &[f64]) -> LorentzVector {
        LorentzVector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn inner_product_examples() {
        assert_eq!(
            minkowski_inner(&v(&[1., 0., 0., 0.]), &v(&[1., 0., 0., 0.])).unwrap(),
            -1.0
        );
        assert_eq!(
            minkowski_inner(&v(&[1., 0., 0., 0.]), &v(&[0., 1., 0., 0.])).unwrap(),
            0.0
        );
        let b = v(&[1f64.cosh(), 1f64.sinh(), 0., 0.]);
        assert!((minkowski_inner(&b, &b).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn hyperboloid_examples() {
        assert!(on_hyperboloid(&v(&[1., 0., 0., 0.]), 1e-12).unwrap());
        assert!(!on_hyperboloid(&v(&[0., 1., 0., 0.]), 1e-12).unwrap());
        assert!(on_hyperboloid(&v(&[2f64.cosh(), 2f64.sinh(), 0., 0.]), 1e-12).unwrap());
        // Lower sheet is excluded.
        assert!(!on_hyperboloid(&v(&[-1., 0., 0., 0.]), 1e-12).unwrap());
    }

    #[test]
    fn rejects_mismatch_and_bad_tol() {
        let err = minkowski_inner(&v(&[1., 0., 0.]), &v(&[1., 0., 0., 0.])).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { left: 3, right: 4 });
        assert!(on_hyperboloid(&v(&[1., 0.]), 0.0).is_err());
        assert!(LorentzVector::with_dim(vec![1.0, 0.0], 4).is_err());
        assert!(LorentzVector::new(vec![1.0]).is_err());
    }

    proptest! {
        #[test]
        fn inner_is_symmetric_and_bilinear(
            x in prop::collection::vec(-10.0f64..10.0, 5),
            y in prop::collection::vec(-10.0f64..10.0, 5),
            z in prop::collection::vec(-10.0f64..10.0, 5),
            alpha in -3.0f64..3.0,
        ) {
            let (x, y, z) = (v(&x), v(&y), v(&z));
            let xy = minkowski_inner(&x, &y).unwrap();
            prop_assert_eq!(xy, minkowski_inner(&y, &x).unwrap());
            let lhs = minkowski_inner(&x.axpy(alpha, &z).unwrap(), &y).unwrap();
            let rhs = xy + alpha * minkowski_inner(&z, &y).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()) * 100.0);
        }
    }
}
