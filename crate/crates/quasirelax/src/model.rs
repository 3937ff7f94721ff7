//! Physical parameters and weak-coupling normal modes.
//!
//! Two damped oscillators (masses M1, M2, frequencies omega01, omega02,
//! damping rates gamma1, gamma2) are bilinearly coupled with strength
//! lambda and each attached to its own Ohmic bath. The eigenfrequencies of
//! the coupled pair solve
//!
//! ```text
//! w^4 - (omega01^2 + omega02^2) w^2 + omega01^2 omega02^2 - lambda^2/(M1 M2) = 0
//! ```
//!
//! giving the exact roots Omega1 < Omega2, effective dampings delta1,2 and
//! mixing ratios r1 = M1 (omega01^2 - Omega1^2)/lambda,
//! r2 = M2 (omega02^2 - Omega2^2)/lambda. The exact forms are used here;
//! the first-order expansions (Omega ~ omega0, delta ~ gamma, r linear in
//! lambda) serve as cross-checks in the tests.

use crate::constants::{HBAR_CGS, KB_CGS};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// One damped oscillator and its initial Gaussian width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorSpec {
    pub mass: f64,
    pub omega0: f64,
    pub gamma: f64,
    pub temperature: f64,
    /// Initial spatial variance. Defaults to the ground-state value
    /// hbar/(2 M omega0) when built through [`OscillatorSpec::new`].
    pub sigma0_sq: f64,
}

impl OscillatorSpec {
    /// Oscillator prepared in its ground-state width.
    pub fn new(mass: f64, omega0: f64, gamma: f64, temperature: f64, hbar: f64) -> Self {
        Self {
            mass,
            omega0,
            gamma,
            temperature,
            sigma0_sq: hbar / (2.0 * mass * omega0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass > 0.0) {
            return Err(Error::InvalidParameter(format!("mass = {} must be > 0", self.mass)));
        }
        if !(self.omega0 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "omega0 = {} must be > 0",
                self.omega0
            )));
        }
        if !(self.gamma >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma = {} must be >= 0",
                self.gamma
            )));
        }
        if self.gamma >= self.omega0 {
            return Err(Error::InvalidParameter(format!(
                "gamma = {} must be < omega0 = {} (underdamped regime)",
                self.gamma, self.omega0
            )));
        }
        if !(self.temperature >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "temperature = {} must be >= 0",
                self.temperature
            )));
        }
        if !(self.sigma0_sq > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sigma0_sq = {} must be > 0",
                self.sigma0_sq
            )));
        }
        Ok(())
    }

    /// Friction coefficient eta = 2 M gamma of the Ohmic spectral density
    /// J(omega) = eta omega.
    pub fn eta(&self) -> f64 {
        2.0 * self.mass * self.gamma
    }
}

/// Ohmic bath with a hard frequency cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    /// Cutoff frequency nu_max of the bath excitations.
    pub nu_max: f64,
}

impl BathSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.nu_max > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "nu_max = {} must be > 0",
                self.nu_max
            )));
        }
        Ok(())
    }

    /// Counter-term strength mu = 2 eta nu_max / pi generated by the
    /// (q - x)^2 coupling form.
    pub fn mu(&self, eta: f64) -> f64 {
        2.0 * eta * self.nu_max / std::f64::consts::PI
    }
}

/// The full two-oscillator + two-bath system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub osc1: OscillatorSpec,
    pub osc2: OscillatorSpec,
    pub bath1: BathSpec,
    pub bath2: BathSpec,
    /// Bilinear coupling constant; lambda x1 x2 has dimension of energy.
    pub lambda: f64,
}

/// Tolerance below which |omega02^2 - omega01^2| counts as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Default margin kappa for the weak-coupling gate.
pub const DEFAULT_WEAK_COUPLING_MARGIN: f64 = 10.0;

impl SystemSpec {
    /// Builds the spec from the dimensionless coupling coefficient
    /// rho = lambda / sqrt(M1 M2 omega01 omega02).
    pub fn with_rho(
        osc1: OscillatorSpec,
        osc2: OscillatorSpec,
        bath1: BathSpec,
        bath2: BathSpec,
        rho: f64,
    ) -> Self {
        let lambda = rho * (osc1.mass * osc2.mass * osc1.omega0 * osc2.omega0).sqrt();
        Self {
            osc1,
            osc2,
            bath1,
            bath2,
            lambda,
        }
    }

    /// Dimensionless coupling coefficient rho.
    pub fn rho(&self) -> f64 {
        self.lambda
            / (self.osc1.mass * self.osc2.mass * self.osc1.omega0 * self.osc2.omega0).sqrt()
    }

    pub fn oscillator(&self, index: usize) -> &OscillatorSpec {
        match index {
            1 => &self.osc1,
            2 => &self.osc2,
            _ => panic!("oscillator index must be 1 or 2"),
        }
    }

    pub fn bath(&self, index: usize) -> &BathSpec {
        match index {
            1 => &self.bath1,
            2 => &self.bath2,
            _ => panic!("bath index must be 1 or 2"),
        }
    }

    /// Checks per-component invariants and non-degeneracy. The
    /// weak-coupling gate is separate, see [`validate_weak_coupling`].
    pub fn validate(&self) -> Result<()> {
        self.osc1.validate()?;
        self.osc2.validate()?;
        self.bath1.validate()?;
        self.bath2.validate()?;
        let w1sq = self.osc1.omega0 * self.osc1.omega0;
        let w2sq = self.osc2.omega0 * self.osc2.omega0;
        let gap = (w2sq - w1sq).abs();
        if gap < DEGENERACY_TOL * w1sq {
            return Err(Error::DegenerateFrequencies {
                gap,
                tol: DEGENERACY_TOL * w1sq,
            });
        }
        Ok(())
    }
}

/// Eigenfrequencies, effective dampings and mixing ratios of the coupled
/// pair, from the exact root formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalModes {
    pub omega1: f64,
    pub omega2: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub r1: f64,
    pub r2: f64,
    pub rho: f64,
}

impl NormalModes {
    /// g = M2 r1 = -M1 r2 (exact identity via the frequency sum rule);
    /// the single coupling scale entering all first-order cross terms.
    pub fn coupling_scale(&self, m2: f64) -> f64 {
        m2 * self.r1
    }
}

/// Exact normal modes of the coupled pair.
///
/// Errors on degenerate bare frequencies and on overcritical coupling
/// (Omega1^2 <= 0).
pub fn derive_normal_modes(spec: &SystemSpec) -> Result<NormalModes> {
    spec.validate()?;
    let (m1, m2) = (spec.osc1.mass, spec.osc2.mass);
    let w1sq = spec.osc1.omega0 * spec.osc1.omega0;
    let w2sq = spec.osc2.omega0 * spec.osc2.omega0;
    let coupling = spec.lambda * spec.lambda / (m1 * m2);
    if w1sq * w2sq <= coupling {
        return Err(Error::OvercriticalCoupling {
            product: w1sq * w2sq,
            coupling,
        });
    }
    let half_sum = 0.5 * (w1sq + w2sq);
    let half_gap = 0.5 * (w2sq - w1sq);
    let root = (half_gap * half_gap + coupling).sqrt();
    let omega1_sq = half_sum - root;
    let omega2_sq = half_sum + root;

    let (g1, g2) = (spec.osc1.gamma, spec.osc2.gamma);
    let delta_of = |wsq: f64| {
        let a = wsq - w2sq;
        let b = wsq - w1sq;
        (a * g1 + b * g2) / (a + b)
    };

    // r_i from the eigenvector ratios; continuous r -> 0 as lambda -> 0.
    let (r1, r2) = if spec.lambda == 0.0 {
        (0.0, 0.0)
    } else {
        (
            m1 * (w1sq - omega1_sq) / spec.lambda,
            m2 * (w2sq - omega2_sq) / spec.lambda,
        )
    };

    Ok(NormalModes {
        omega1: omega1_sq.sqrt(),
        omega2: omega2_sq.sqrt(),
        delta1: delta_of(omega1_sq),
        delta2: delta_of(omega2_sq),
        r1,
        r2,
        rho: spec.rho(),
    })
}

/// Outcome of the weak-coupling diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeakCouplingReport {
    /// (omega02^2 - omega01^2) / (2 omega01 omega02 rho); infinite at rho = 0.
    pub ratio: f64,
    pub margin: f64,
    pub pass: bool,
}

/// Diagnostic for the separation between the frequency gap and the
/// coupling strength. Never mutates or errors.
pub fn validate_weak_coupling(spec: &SystemSpec, margin: f64) -> WeakCouplingReport {
    let w1 = spec.osc1.omega0;
    let w2 = spec.osc2.omega0;
    let rho = spec.rho().abs();
    let ratio = if rho == 0.0 {
        f64::INFINITY
    } else {
        (w2 * w2 - w1 * w1).abs() / (2.0 * w1 * w2 * rho)
    };
    WeakCouplingReport {
        ratio,
        margin,
        pass: ratio >= margin,
    }
}

/// Conversion constants between physical CGS inputs and the internal
/// hbar = k_B = M1 = omega01 = 1 system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitMap {
    /// Mass unit in g (the first oscillator's mass).
    pub mass_g: f64,
    /// Frequency unit in rad/s (the first oscillator's bare frequency).
    pub omega_rad_s: f64,
    /// Temperature unit in K: hbar omega01 / k_B.
    pub temperature_k: f64,
    /// Length^2 unit in cm^2: hbar / (M1 omega01).
    pub length_sq_cm2: f64,
}

impl UnitMap {
    pub fn from_physical(mass1_g: f64, omega01_rad_s: f64) -> Self {
        Self {
            mass_g: mass1_g,
            omega_rad_s: omega01_rad_s,
            temperature_k: HBAR_CGS * omega01_rad_s / KB_CGS,
            length_sq_cm2: HBAR_CGS / (mass1_g * omega01_rad_s),
        }
    }

    /// theta = k_B T / (hbar omega01).
    pub fn temperature_to_internal(&self, t_kelvin: f64) -> f64 {
        t_kelvin / self.temperature_k
    }

    pub fn time_to_internal(&self, t_seconds: f64) -> f64 {
        t_seconds * self.omega_rad_s
    }
}

/// Rescales a physical-units spec (g, rad/s, K, cm^2) to internal units.
/// Returns the rescaled spec and the conversion record; the map inverts
/// the transformation losslessly.
pub fn to_internal_units(spec: &SystemSpec) -> (SystemSpec, UnitMap) {
    let map = UnitMap::from_physical(spec.osc1.mass, spec.osc1.omega0);
    let osc = |o: &OscillatorSpec| OscillatorSpec {
        mass: o.mass / map.mass_g,
        omega0: o.omega0 / map.omega_rad_s,
        gamma: o.gamma / map.omega_rad_s,
        temperature: o.temperature / map.temperature_k,
        sigma0_sq: o.sigma0_sq / map.length_sq_cm2,
    };
    let internal = SystemSpec {
        osc1: osc(&spec.osc1),
        osc2: osc(&spec.osc2),
        bath1: BathSpec {
            nu_max: spec.bath1.nu_max / map.omega_rad_s,
        },
        bath2: BathSpec {
            nu_max: spec.bath2.nu_max / map.omega_rad_s,
        },
        // lambda has dimension mass * frequency^2
        lambda: spec.lambda / (map.mass_g * map.omega_rad_s * map.omega_rad_s),
    };
    (internal, map)
}

/// Inverse of [`to_internal_units`].
pub fn from_internal_units(spec: &SystemSpec, map: &UnitMap) -> SystemSpec {
    let osc = |o: &OscillatorSpec| OscillatorSpec {
        mass: o.mass * map.mass_g,
        omega0: o.omega0 * map.omega_rad_s,
        gamma: o.gamma * map.omega_rad_s,
        temperature: o.temperature * map.temperature_k,
        sigma0_sq: o.sigma0_sq * map.length_sq_cm2,
    };
    SystemSpec {
        osc1: osc(&spec.osc1),
        osc2: osc(&spec.osc2),
        bath1: BathSpec {
            nu_max: spec.bath1.nu_max * map.omega_rad_s,
        },
        bath2: BathSpec {
            nu_max: spec.bath2.nu_max * map.omega_rad_s,
        },
        lambda: spec.lambda * map.mass_g * map.omega_rad_s * map.omega_rad_s,
    }
}

/// The (Omega, delta, r) parameter set a kernel evaluation runs with.
///
/// `dressed` keeps the exact normal-mode frequencies and dampings in the
/// time dependence; `bare` replaces them by the uncoupled (omega0, gamma)
/// values, which is the consistent first-order reduction: with it the
/// single-oscillator kernels carry no lambda dependence at all.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModePair {
    pub omega1: f64,
    pub omega2: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub r1: f64,
    pub r2: f64,
}

impl ModePair {
    pub fn bare(spec: &SystemSpec, modes: &NormalModes) -> Self {
        Self {
            omega1: spec.osc1.omega0,
            omega2: spec.osc2.omega0,
            delta1: spec.osc1.gamma,
            delta2: spec.osc2.gamma,
            r1: modes.r1,
            r2: modes.r2,
        }
    }

    pub fn dressed(modes: &NormalModes) -> Self {
        Self {
            omega1: modes.omega1,
            omega2: modes.omega2,
            delta1: modes.delta1,
            delta2: modes.delta2,
            r1: modes.r1,
            r2: modes.r2,
        }
    }

    pub fn mode(&self, index: usize) -> (f64, f64) {
        match index {
            1 => (self.omega1, self.delta1),
            2 => (self.omega2, self.delta2),
            _ => panic!("mode index must be 1 or 2"),
        }
    }
}
