//! Physical constants (CGS) and the internal unit convention.
//!
//! Internally everything is computed with hbar = k_B = M1 = omega01 = 1.
//! Physical inputs (g, rad/s, K, cm^2) are rescaled at the boundary; see
//! [`crate::model::UnitMap`].

/// Reduced Planck constant in erg s (CODATA 2018, exact SI redefinition).
pub const HBAR_CGS: f64 = 1.054_571_817e-27;

/// Boltzmann constant in erg/K (exact since the 2019 SI redefinition).
pub const KB_CGS: f64 = 1.380_649e-16;

/// hbar and k_B in internal units.
pub const HBAR: f64 = 1.0;
pub const KB: f64 = 1.0;
