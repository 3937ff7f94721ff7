//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// |omega02^2 - omega01^2| below tolerance. The identical-oscillator
    /// case has r1 = 1, r2 = -1 and no small parameter; it needs a different
    /// solution and is rejected here.
    #[error("degenerate case unsupported: |omega02^2 - omega01^2| = {gap:.3e} < {tol:.3e}")]
    DegenerateFrequencies { gap: f64, tol: f64 },

    /// lambda^2/(M1 M2) >= omega01^2 omega02^2 makes the lower eigenmode
    /// unstable (Omega1^2 <= 0).
    #[error("overcritical coupling: omega01^2 omega02^2 = {product:.6e} <= lambda^2/(M1 M2) = {coupling:.6e}")]
    OvercriticalCoupling { product: f64, coupling: f64 },

    #[error(
        "weak-coupling condition violated: (omega02^2-omega01^2)/(2 omega01 omega02 rho) = {ratio:.3} < margin {margin:.3} (pass --force to run anyway)"
    )]
    WeakCouplingViolated { ratio: f64, margin: f64 },

    /// Raw (unrescaled) kernel values diverge at zeros of sin(Omega_i t);
    /// callers wanting values near a node must use the rescaled path.
    #[error("time {t:.6e} is within {tol:.1e} of a node of sin({omega:.6e} t); use the rescaled kernel path")]
    NodeProximity { t: f64, omega: f64, tol: f64 },

    #[error("quadrature did not reach tolerance: estimated error {estimate:.3e} > requested {requested:.3e} after {panels} panels")]
    QuadratureNoConvergence {
        estimate: f64,
        requested: f64,
        panels: usize,
    },

    #[error("incompatible inputs: {0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
