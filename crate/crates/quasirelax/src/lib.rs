//! Exact Gaussian dynamics of two weakly coupled damped quantum
//! oscillators attached to independent Ohmic baths.
//!
//! The closed-form route evaluates the time-dependent spatial variances
//! sigma1^2(t), sigma2^2(t) and the cross precision scale beta12(t) of the
//! reduced two-oscillator density matrix from frequency-integrated
//! influence kernels. An independent microscopic route ([`oracle`])
//! integrates the full quadratic oscillator + discretized-bath model as an
//! exact linear-Gaussian system and serves as the cross-check.
//!
//! Module map:
//! - [`model`]: physical parameters, unit handling, normal modes
//! - [`kernels`]: classical paths and the closed-form action coefficient
//!   tables (s, b, D, Pi)
//! - [`influence`]: frequency-integrated influence kernels A, B, C, the
//!   cross kernels E1..E4, and the fluctuation-dissipation variance
//! - [`density`]: assembly of the reduced Gaussian state over time
//! - [`oracle`]: discretized-bath microscopic verifier
//! - [`quad`]: adaptive panel quadrature used by the above

pub mod constants;
pub mod density;
pub mod error;
pub mod influence;
pub mod kernels;
pub mod model;
pub mod oracle;
pub mod quad;
pub mod trig;

pub use error::{Error, Result};
