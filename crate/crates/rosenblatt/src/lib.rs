//! Fractional calculus and second-chaos process simulation on a shared Wiener path.
//!
//! The crate builds, from one sequence of Wiener increments, a fractional Brownian
//! motion `B^(H+1)/2` (Volterra representation), a Rosenblatt process `R^H` (double
//! Wiener integral of a singular kernel), and the shifted process
//!
//! ```text
//! R~_t = R_t + 2 d_H ∫_0^t θ dB^((H+1)/2) + d_H ∫_0^t θ² du,
//! ```
//!
//! together with the exponential density Z_T that makes `R~` a Rosenblatt process
//! under the reweighted measure. The [`verify`] module estimates weighted moments
//! of `R~` by self-normalized importance sampling and compares them against an
//! independent plain-Rosenblatt ensemble.
//!
//! Numerical backbone: product integration of Riemann-Liouville operators on
//! uniform grids (exact for piecewise-linear data, with analytic handling of power
//! singularities at the interval ends) and exact incomplete-beta cell integrals
//! for the Volterra/Rosenblatt kernels.
//!
//! The crate is `no_std`-compatible (enable the `libm` feature and disable
//! default features); all heap use goes through `alloc`.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]
// indexed loops are the clearer idiom in the numeric kernels; the special
// function tables intentionally carry full-precision literals
#![allow(clippy::needless_range_loop, clippy::excessive_precision)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("rosenblatt requires either the `std` or the `libm` feature");

mod error;
pub mod frac;
pub mod func;
pub mod girsanov;
pub mod grid;
pub mod hurst;
pub mod kernels;
pub(crate) mod math;
pub mod quad;
pub mod rng;
pub mod simulate;
pub mod special;
pub mod verify;

pub use error::Error;
pub use frac::{FracOrder, FracSide};
pub use func::SampledFunction;
pub use girsanov::{GirsanovDensity, ShiftSpec};
pub use grid::TimeGrid;
pub use hurst::HurstParam;
pub use kernels::KernelMatrix;
pub use rng::WienerIncrements;
pub use simulate::PathBundle;
pub use verify::{McConfig, McReport};

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
