//! Numerical toolkit for minimal hypersurfaces in hyperbolic space.
//!
//! The crate instantiates three families of minimal surfaces in the
//! hyperboloid model of hyperbolic space (spherical catenoids in H³,
//! hyperbolic catenoids in Hⁿ⁺¹ and helicoids in H³), evaluates their
//! curvature and stability functionals, certifies stable parameter windows
//! and computes Morse indices of spherical catenoids spectrally.
//!
//! Modules:
//!
//! * [`geom`] – Lorentzian inner product and hyperboloid membership.
//! * [`quadrature`] – adaptive Gauss–Kronrod integration, semi-infinite
//!   truncation with a tail bound, and bracketed root finding.
//! * [`spherical`], [`hyperbolic`], [`helicoid`] – the surface families.
//! * [`stability`] – dimension-generic stability certificates.
//! * [`spectral`] – Sturm–Liouville discretisation of the stability
//!   operator and negative-eigenvalue counting by matrix inertia.
//! * [`cli`] – the `hypstab` batch frontend and its CSV/JSON formats.

// Negated comparisons are used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
mod error;
pub mod geom;
pub mod helicoid;
pub mod hyperbolic;
pub mod ode;
pub mod quadrature;
pub mod spectral;
pub mod spherical;
pub mod stability;

pub use error::{Error, Result};
pub use geom::LorentzVector;
pub use helicoid::Helicoid;
pub use hyperbolic::{HyperbolicCatenoid, Profile, ProfileSample};
pub use quadrature::QuadratureResult;
pub use spectral::{IndexOptions, IndexReport, ModeSpectrum, Scheme, SturmLiouvilleDisc};
pub use spherical::SphericalCatenoid;
pub use stability::{Criterion, StabilityReport, Verdict};

/// Default tolerance for every integral and root reported to users.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Crate version recorded in every output header.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
