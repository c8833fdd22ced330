//! Numerical toolkit for coherent phase states `|ε⟩ ∝ Σ εⁿ |n⟩`.
//!
//! * [`series`]: state parameters, truncation policies and the compensated
//!   summation of the series `S1`, `S2`.
//! * [`observables`]: quadrature means and (co)variances, squeezing, `R`,
//!   the Robertson–Schrödinger product and their approximations.
//! * [`wavefunction`]: coordinate wavefunctions, densities and the
//!   Gaussianity measure.
//! * [`wigner`]: Wigner functions, grids and negativity diagnostics.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`). The aliases at the
//! crate root pin the `f64` instantiation used by the command-line tool.
//!
//! ```
//! use cps_core::{observables::quadrature_stats, PhaseState, TruncationPolicy};
//!
//! let state = PhaseState::from_mean_n(25.0, std::f64::consts::FRAC_PI_2)?;
//! let stats = quadrature_stats(&state, &TruncationPolicy::default())?;
//! assert!(stats.converged);
//! assert!(stats.var_x < 0.5 && stats.rs_product >= 0.25);
//! # Ok::<(), cps_core::Error>(())
//! ```

pub mod error;
pub mod observables;
pub mod quadrature;
mod recurrence;
pub mod scalar;
pub mod series;
pub mod wavefunction;
pub mod wigner;

pub use error::{Error, Result};
pub use observables::{RsApproxVariant, DEFAULT_ETA, DEFAULT_ETA_RANGE};
pub use quadrature::{CompositeGaussLegendre, QuadSpec};
pub use scalar::{NeumaierSum, Scalar};
pub use series::{Flagged, TruncationMode, TruncationPolicy};
pub use wavefunction::{DensityMoments, PhaseCase};
pub use wigner::{OracleValue, WignerPolicy, WignerTruncation};

pub type Modulus = series::Modulus<f64>;
pub type PhaseState = series::PhaseState<f64>;
pub type SeriesResult = series::SeriesResult<f64>;
pub type QuadratureStats = observables::QuadratureStats<f64>;
pub type EtaFit = observables::EtaFit<f64>;
pub type CoherentState = wavefunction::CoherentState<f64>;
pub type PsiValue = wavefunction::PsiValue<f64>;
pub type WavefunctionSample = wavefunction::WavefunctionSample<f64>;
pub type PhasePoint = wigner::PhasePoint<f64>;
pub type WignerValue = wigner::WignerValue<f64>;
pub type WignerGrid = wigner::WignerGrid<f64>;
pub type Negativity = wigner::Negativity<f64>;
pub type Complex = num_complex::Complex<f64>;

pub type PhaseState32 = series::PhaseState<f32>;
pub type Modulus32 = series::Modulus<f32>;
