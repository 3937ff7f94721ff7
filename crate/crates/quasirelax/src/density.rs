//! Assembly of the reduced two-oscillator Gaussian state over time.
//!
//! On the diagonal slice the reduced density is
//!
//! ```text
//! rho(x1, x2, t) = N exp[ -x1^2/(2 sigma1^2) - x1 x2 / beta12 - x2^2/(2 sigma2^2) ]
//! ```
//!
//! The variances involve only the single-oscillator kernels,
//!
//! ```text
//! sigma_i^2 = [D4_i^2 + 4 a_i hbar (C_i + hbar a_i)] / (8 a_i D3_i^2),   a_i = 1/(8 sigma0i^2),
//! ```
//!
//! and the cross coefficient combines them with the first-order cross
//! kernels. Every factor that diverges at nodes of sin(Omega_i t) or
//! grows like e^{delta t} cancels in these ratios; the default path here
//! evaluates the cancelled forms directly:
//!
//! ```text
//! D3 sin(W t) e^{-d t} = -M W / 2                  (constant)
//! D4 sin(W t)          = (M/2)(W cos W t + d sin W t)
//! C  sin^2(W t) e^{-2 d t} = C_hat                 (bounded, -> FDT value)
//! ```
//!
//! so trajectories run to arbitrary t in double precision with no node
//! special-casing. A literal ("naive") route through the raw tables is
//! kept for cross-checks away from nodes.
//!
//! The variances are evaluated with the bare (omega0, gamma) mode
//! parameters, which is the consistent first-order reduction and makes
//! them exactly independent of the coupling. The cross coefficient keeps
//! the exact normal-mode frequencies and dampings in its time dependence
//! (the coupling's second-order rate shifts are what differentiates the
//! covariance decay between coupling strengths); setting
//! [`DensityOptions::dressed_covariance`] to false reduces it to the same
//! bare parameters.

use crate::error::{Error, Result};
use crate::influence::{self, QuadratureConfig};
use crate::kernels::KernelTable;
use crate::model::{derive_normal_modes, ModePair, NormalModes, OscillatorSpec, SystemSpec};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const HBAR: f64 = crate::constants::HBAR;

/// Gaussian state on the diagonal slice at one time.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GaussianState {
    pub t: f64,
    pub sigma1_sq: f64,
    pub sigma2_sq: f64,
    /// 1/beta12; stored inverted so the uncoupled case (beta12 = inf) is finite.
    pub beta12_inv: f64,
    /// Trace normalization: integral of rho over the plane is one.
    pub norm: f64,
}

impl GaussianState {
    pub fn from_widths(t: f64, sigma1_sq: f64, sigma2_sq: f64, beta12_inv: f64) -> Self {
        let det = 1.0 / (sigma1_sq * sigma2_sq) - beta12_inv * beta12_inv;
        Self {
            t,
            sigma1_sq,
            sigma2_sq,
            beta12_inv,
            norm: det.max(0.0).sqrt() / (2.0 * std::f64::consts::PI),
        }
    }

    /// The cross precision scale beta12 itself; +-inf when uncoupled.
    pub fn beta12(&self) -> f64 {
        1.0 / self.beta12_inv
    }

    /// Precision matrix [[1/s1^2, 1/b], [1/b, 1/s2^2]] positive definite.
    pub fn is_positive_definite(&self) -> bool {
        self.sigma1_sq > 0.0
            && self.sigma2_sq > 0.0
            && self.beta12_inv * self.beta12_inv < 1.0 / (self.sigma1_sq * self.sigma2_sq)
    }

    /// (<x1^2>, <x2^2>, <x1 x2>) from inverting the precision matrix.
    pub fn second_moments(&self) -> Result<(f64, f64, f64)> {
        if !self.is_positive_definite() {
            return Err(Error::InvalidParameter(format!(
                "state at t = {} is not positive definite",
                self.t
            )));
        }
        let det = 1.0 / (self.sigma1_sq * self.sigma2_sq) - self.beta12_inv * self.beta12_inv;
        Ok((
            1.0 / (self.sigma2_sq * det),
            1.0 / (self.sigma1_sq * det),
            -self.beta12_inv / det,
        ))
    }
}

/// Evaluation switches for [`reduced_state`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityOptions {
    /// Evaluate the literal raw-table formulas instead of the cancelled
    /// forms (debug path; fails near sin nodes).
    pub naive: bool,
    /// Keep the exact normal-mode rates in the covariance kernels.
    pub dressed_covariance: bool,
}

impl Default for DensityOptions {
    fn default() -> Self {
        Self {
            naive: false,
            dressed_covariance: true,
        }
    }
}

/// Factorized initial state: sigma_i^2(0) from the spec, no cross term.
pub fn initial_state(spec: &SystemSpec) -> GaussianState {
    GaussianState::from_widths(0.0, spec.osc1.sigma0_sq, spec.osc2.sigma0_sq, 0.0)
}

fn gaussian_width_params(osc: &OscillatorSpec) -> f64 {
    1.0 / (8.0 * osc.sigma0_sq)
}

/// Hatted numerator of the variance formula for one oscillator:
/// Delta_hat = (M/2)^2 kappa_hat^2 e^{-2 d t} + 4 a hbar C_hat + 4 a^2 hbar^2 u^2.
fn delta_hat(t: f64, mass: f64, a: f64, omega: f64, delta: f64, c_hat: f64) -> f64 {
    let kappa_hat = omega * (omega * t).cos() + delta * (omega * t).sin();
    let u = (omega * t).sin() * (-delta * t).exp();
    let quarter_m = 0.5 * mass;
    quarter_m * quarter_m * kappa_hat * kappa_hat * (-2.0 * delta * t).exp()
        + 4.0 * a * HBAR * c_hat
        + 4.0 * a * a * HBAR * HBAR * u * u
}

fn sigma_sq_stable(
    t: f64,
    osc_index: usize,
    spec: &SystemSpec,
    mp: &ModePair,
    qcfg: &QuadratureConfig,
) -> Result<(f64, f64)> {
    let osc = spec.oscillator(osc_index);
    let (w, d) = mp.mode(osc_index);
    let a = gaussian_width_params(osc);
    let (c_hat, c_err) = influence::eval_c_hat(t, osc_index, spec, mp, qcfg)?;
    let dh = delta_hat(t, osc.mass, a, w, d, c_hat);
    let d3h = 0.5 * osc.mass * w;
    let sigma = dh / (8.0 * a * d3h * d3h);
    let err = 4.0 * a * HBAR * c_err / (8.0 * a * d3h * d3h);
    Ok((sigma, err))
}

fn beta_inv_stable(
    t: f64,
    spec: &SystemSpec,
    mp: &ModePair,
    modes: &NormalModes,
    qcfg: &QuadratureConfig,
) -> Result<f64> {
    if spec.lambda == 0.0 {
        return Ok(0.0);
    }
    let (m1, m2) = (spec.osc1.mass, spec.osc2.mass);
    let (a1, a2) = (
        gaussian_width_params(&spec.osc1),
        gaussian_width_params(&spec.osc2),
    );
    let (w1, d1) = mp.mode(1);
    let (w2, d2) = mp.mode(2);
    let g = modes.coupling_scale(m2);

    let (c1_hat, _) = influence::eval_c_hat(t, 1, spec, mp, qcfg)?;
    let (c2_hat, _) = influence::eval_c_hat(t, 2, spec, mp, qcfg)?;
    let x = influence::eval_cross_x(t, spec, mp, qcfg)?;

    let dh1 = delta_hat(t, m1, a1, w1, d1, c1_hat);
    let dh2 = delta_hat(t, m2, a2, w2, d2, c2_hat);
    let kap1 = w1 * (w1 * t).cos() + d1 * (w1 * t).sin();
    let kap2 = w2 * (w2 * t).cos() + d2 * (w2 * t).sin();
    let u1 = (w1 * t).sin() * (-d1 * t).exp();
    let u2 = (w2 * t).sin() * (-d2 * t).exp();
    let decay = (-(d1 + d2) * t).exp();

    let num = -2.0 * a2 * g * m2 * w2 * w2 * dh1
        + 2.0 * a1 * g * m1 * w1 * w1 * dh2
        + 0.5 * a2 * g * m1 * m1 * m2 * w1 * w2 * kap1 * kap2 * decay
        - 0.5 * a1 * g * m1 * m2 * m2 * w1 * w2 * kap1 * kap2 * decay
        - 4.0 * HBAR * a1 * a2 * w1 * w2 * g * (m1 * x[1] - m2 * x[0])
        + 8.0 * a1 * a1 * a2 * HBAR * HBAR * g * m2 * w1 * w2 * u1 * u2
        - 8.0 * a1 * a2 * a2 * HBAR * HBAR * g * m1 * w1 * w2 * u1 * u2;

    Ok(num / (dh1 * dh2))
}

fn beta_inv_naive(
    t: f64,
    spec: &SystemSpec,
    mp: &ModePair,
    qcfg: &QuadratureConfig,
) -> Result<f64> {
    let table = KernelTable::evaluate(t, mp, spec)?;
    let c1 = influence::eval_abc(t, 1, spec, mp, qcfg)?.raw(mp.omega1, mp.delta1)?.2;
    let c2 = influence::eval_abc(t, 2, spec, mp, qcfg)?.raw(mp.omega2, mp.delta2)?.2;
    let e1 = influence::eval_cross_parts(t, spec, mp, qcfg)?.raw(mp)?[0];
    let (a1, a2) = (
        gaussian_width_params(&spec.osc1),
        gaussian_width_params(&spec.osc2),
    );
    let (f1, f2) = influence::eval_f(&table, c1, c2, e1, a1, a2, HBAR);
    let delta1 = table.d[3] * table.d[3] + 4.0 * a1 * HBAR * (c1 + HBAR * a1);
    let delta2 = table.dp[3] * table.dp[3] + 4.0 * a2 * HBAR * (c2 + HBAR * a2);
    Ok(8.0 * a2 * table.dp[2] * f1 / delta2 + 8.0 * a1 * table.d[2] * f2 / delta1)
}

fn sigma_sq_naive(
    t: f64,
    osc_index: usize,
    spec: &SystemSpec,
    mp: &ModePair,
    qcfg: &QuadratureConfig,
) -> Result<f64> {
    let table = KernelTable::evaluate(t, mp, spec)?;
    let osc = spec.oscillator(osc_index);
    let (w, d) = mp.mode(osc_index);
    let a = gaussian_width_params(osc);
    let c = influence::eval_abc(t, osc_index, spec, mp, qcfg)?.raw(w, d)?.2;
    let (d3, d4) = if osc_index == 1 {
        (table.d[2], table.d[3])
    } else {
        (table.dp[2], table.dp[3])
    };
    Ok((d4 * d4 + 4.0 * a * HBAR * (c + HBAR * a)) / (8.0 * a * d3 * d3))
}

/// Reduced Gaussian state at time t.
pub fn reduced_state(
    t: f64,
    spec: &SystemSpec,
    modes: &NormalModes,
    qcfg: &QuadratureConfig,
    opts: &DensityOptions,
) -> Result<GaussianState> {
    if t < 0.0 {
        return Err(Error::InvalidParameter(format!("negative time {}", t)));
    }
    if t == 0.0 {
        return Ok(initial_state(spec));
    }
    let bare = ModePair::bare(spec, modes);
    let cov_modes = if opts.dressed_covariance {
        ModePair::dressed(modes)
    } else {
        bare
    };
    if opts.naive {
        let s1 = sigma_sq_naive(t, 1, spec, &bare, qcfg)?;
        let s2 = sigma_sq_naive(t, 2, spec, &bare, qcfg)?;
        let binv = beta_inv_naive(t, spec, &cov_modes, qcfg)?;
        return Ok(GaussianState::from_widths(t, s1, s2, binv));
    }
    let (s1, _) = sigma_sq_stable(t, 1, spec, &bare, qcfg)?;
    let (s2, _) = sigma_sq_stable(t, 2, spec, &bare, qcfg)?;
    let binv = beta_inv_stable(t, spec, &cov_modes, modes, qcfg)?;
    Ok(GaussianState::from_widths(t, s1, s2, binv))
}

/// A time-gridded sequence of states with the normalization data the
/// output columns need.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<GaussianState>,
    /// sigma^2(FDT) per oscillator at its own bath temperature.
    pub sigma_fdt: [f64; 2],
    pub spec: SystemSpec,
    pub modes: NormalModes,
    pub qcfg: QuadratureConfig,
}

impl Trajectory {
    pub fn sigma_norm(&self, index: usize) -> Vec<f64> {
        self.states
            .iter()
            .map(|s| {
                let v = if index == 1 { s.sigma1_sq } else { s.sigma2_sq };
                v / self.sigma_fdt[index - 1]
            })
            .collect()
    }

    /// Normalized covariance sqrt(sigma1_F^2 sigma2_F^2) / beta12.
    pub fn beta12_norm(&self) -> Vec<f64> {
        let scale = (self.sigma_fdt[0] * self.sigma_fdt[1]).sqrt();
        self.states.iter().map(|s| s.beta12_inv * scale).collect()
    }
}

/// Strictly increasing grid: t = 0 followed by a geometric ramp from
/// `t_first` to `t_max`. Two points degenerate to {0, t_max}.
pub fn time_grid(t_max: f64, points: usize, t_first: f64) -> Vec<f64> {
    assert!(points >= 2, "grid needs at least two points");
    assert!(t_max > 0.0 && t_first > 0.0 && t_first < t_max);
    let mut grid = Vec::with_capacity(points);
    grid.push(0.0);
    let n = points - 1;
    if n == 1 {
        grid.push(t_max);
        return grid;
    }
    let ratio = (t_max / t_first).powf(1.0 / (n as f64 - 1.0));
    let mut t = t_first;
    for _ in 0..n {
        grid.push(t);
        t *= ratio;
    }
    grid[points - 1] = t_max;
    grid
}

/// Evaluates the state on every grid point (grid points are independent;
/// evaluation fans out across threads and collects in order).
pub fn trajectory(
    spec: &SystemSpec,
    grid: &[f64],
    qcfg: &QuadratureConfig,
    opts: &DensityOptions,
) -> Result<Trajectory> {
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(
            "time grid must be strictly increasing".into(),
        ));
    }
    let modes = derive_normal_modes(spec)?;
    let states: Result<Vec<GaussianState>> = grid
        .par_iter()
        .map(|&t| reduced_state(t, spec, &modes, qcfg, opts))
        .collect();
    let sigma_fdt = [
        influence::fdt_variance(&spec.osc1, qcfg)?,
        influence::fdt_variance(&spec.osc2, qcfg)?,
    ];
    Ok(Trajectory {
        times: grid.to_vec(),
        states: states?,
        sigma_fdt,
        spec: *spec,
        modes,
        qcfg: *qcfg,
    })
}

/// Textbook equilibrium comparison for one oscillator.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EquilibriumComparison {
    /// hbar coth(hbar omega / 2 kB T) / (2 M omega): the closed-form
    /// equilibrium variance of the isolated oscillator.
    pub tanh_form: f64,
    /// The damped-oscillator stationary variance at the spec's gamma.
    pub fdt: f64,
}

impl EquilibriumComparison {
    /// Relative deviation between the two forms; vanishes as gamma -> 0.
    pub fn relative_gap(&self) -> f64 {
        (self.fdt / self.tanh_form - 1.0).abs()
    }
}

pub fn equilibrium_density(osc: &OscillatorSpec, qcfg: &QuadratureConfig) -> Result<EquilibriumComparison> {
    let tanh_form = if osc.temperature <= 0.0 {
        HBAR / (2.0 * osc.mass * osc.omega0)
    } else {
        HBAR * influence::coth_stable(HBAR * osc.omega0 / (2.0 * osc.temperature))
            / (2.0 * osc.mass * osc.omega0)
    };
    Ok(EquilibriumComparison {
        tanh_form,
        fdt: influence::fdt_variance(osc, qcfg)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::BathSpec;

    fn spec(rho: f64, theta1: f64, theta2: f64) -> SystemSpec {
        let osc1 = OscillatorSpec::new(1.0, 1.0, 0.01, theta1, 1.0);
        let osc2 = OscillatorSpec::new(3.0, 2.0, 0.02, theta2, 1.0);
        let bath = BathSpec { nu_max: 50.0 };
        SystemSpec::with_rho(osc1, osc2, bath, bath, rho)
    }

    fn qcfg(spec: &SystemSpec) -> QuadratureConfig {
        QuadratureConfig::from_spec(spec)
    }

    #[test]
    fn initial_state_matches_spec_widths() {
        let s = spec(0.02, 3.9, 3.9);
        let st = initial_state(&s);
        assert_eq!(st.sigma1_sq, 0.5);
        assert!((st.sigma2_sq - 1.0 / 12.0).abs() < 1e-15);
        assert_eq!(st.beta12_inv, 0.0);
        let (_, _, x12) = st.second_moments().unwrap();
        assert_eq!(x12, 0.0);
    }

    #[test]
    fn second_moments_diagonal_and_coupled() {
        let st = GaussianState::from_widths(0.0, 1.0, 1.0, 0.0);
        let (a, b, c) = st.second_moments().unwrap();
        assert_eq!((a, b, c), (1.0, 1.0, 0.0));

        let st = GaussianState::from_widths(0.0, 1.0, 1.0, 0.1);
        let (a, b, c) = st.second_moments().unwrap();
        assert!((a - 1.0 / 0.99).abs() < 1e-12);
        assert!((b - 1.0 / 0.99).abs() < 1e-12);
        assert!((c + 0.1 / 0.99).abs() < 1e-12);
    }

    #[test]
    fn moments_round_trip_to_precision_form() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let s1: f64 = rng.gen_range(0.1..3.0);
            let s2: f64 = rng.gen_range(0.1..3.0);
            let bmax = 1.0 / (s1 * s2).sqrt();
            let binv = rng.gen_range(-0.9 * bmax..0.9 * bmax);
            let st = GaussianState::from_widths(0.0, s1, s2, binv);
            let (xx1, xx2, x12) = st.second_moments().unwrap();
            // re-invert the covariance back to precision entries
            let det = xx1 * xx2 - x12 * x12;
            assert!((xx2 / det - 1.0 / s1).abs() < 1e-12 / s1);
            assert!((xx1 / det - 1.0 / s2).abs() < 1e-12 / s2);
            assert!((-x12 / det - binv).abs() < 1e-12 * binv.abs().max(1.0));
        }
    }

    #[test]
    fn non_positive_definite_rejected() {
        let st = GaussianState::from_widths(0.0, 1.0, 1.0, 1.1);
        assert!(!st.is_positive_definite());
        assert!(st.second_moments().is_err());
    }

    #[test]
    fn short_time_variances_recover_initial_widths() {
        let s = spec(0.02, 3.93, 3.93);
        let modes = derive_normal_modes(&s).unwrap();
        let q = qcfg(&s);
        let st = reduced_state(1e-3, &s, &modes, &q, &DensityOptions::default()).unwrap();
        assert!((st.sigma1_sq / s.osc1.sigma0_sq - 1.0).abs() < 1e-3);
        assert!((st.sigma2_sq / s.osc2.sigma0_sq - 1.0).abs() < 1e-3);
    }

    #[test]
    fn long_time_variances_reach_fdt() {
        let s = spec(0.02, 3.93, 3.93);
        let modes = derive_normal_modes(&s).unwrap();
        let q = qcfg(&s);
        let f1 = influence::fdt_variance(&s.osc1, &q).unwrap();
        let f2 = influence::fdt_variance(&s.osc2, &q).unwrap();
        let st = reduced_state(10.0 / s.osc1.gamma, &s, &modes, &q, &DensityOptions::default()).unwrap();
        assert!((st.sigma1_sq / f1 - 1.0).abs() < 0.02, "{}", st.sigma1_sq / f1);
        let st2 = reduced_state(10.0 / s.osc2.gamma, &s, &modes, &q, &DensityOptions::default()).unwrap();
        assert!((st2.sigma2_sq / f2 - 1.0).abs() < 0.02, "{}", st2.sigma2_sq / f2);
    }

    #[test]
    fn uncoupled_cross_term_is_exactly_zero() {
        let s = spec(0.0, 3.93, 3.93);
        let modes = derive_normal_modes(&s).unwrap();
        let q = qcfg(&s);
        for &t in &[0.5, 5.0, 50.0, 500.0] {
            let st = reduced_state(t, &s, &modes, &q, &DensityOptions::default()).unwrap();
            assert_eq!(st.beta12_inv, 0.0);
            assert!(st.beta12().is_infinite());
        }
    }

    #[test]
    fn naive_and_stable_paths_agree_away_from_nodes() {
        let s = spec(0.02, 2.62, 9.17);
        let modes = derive_normal_modes(&s).unwrap();
        let q = qcfg(&s);
        // node-safe times (quarter-period offsets for both modes)
        for &t in &[0.8, 7.7, 20.1] {
            let stable = reduced_state(t, &s, &modes, &q, &DensityOptions::default()).unwrap();
            let naive = reduced_state(
                t,
                &s,
                &modes,
                &q,
                &DensityOptions {
                    naive: true,
                    dressed_covariance: true,
                },
            )
            .unwrap();
            assert!(
                (stable.sigma1_sq - naive.sigma1_sq).abs() < 1e-6 * stable.sigma1_sq,
                "sigma1 at t={}: {} vs {}",
                t,
                stable.sigma1_sq,
                naive.sigma1_sq
            );
            assert!((stable.sigma2_sq - naive.sigma2_sq).abs() < 1e-6 * stable.sigma2_sq);
            assert!(
                (stable.beta12_inv - naive.beta12_inv).abs()
                    < 1e-5 * stable.beta12_inv.abs().max(1e-12),
                "beta at t={}: {} vs {}",
                t,
                stable.beta12_inv,
                naive.beta12_inv
            );
        }
    }

    #[test]
    fn variances_independent_of_coupling() {
        let s0 = spec(0.0, 3.93, 3.93);
        let s5 = spec(0.05, 3.93, 3.93);
        let m0 = derive_normal_modes(&s0).unwrap();
        let m5 = derive_normal_modes(&s5).unwrap();
        let q = qcfg(&s0);
        for &t in &[0.7, 13.0, 210.0] {
            let a = reduced_state(t, &s0, &m0, &q, &DensityOptions::default()).unwrap();
            let b = reduced_state(t, &s5, &m5, &q, &DensityOptions::default()).unwrap();
            assert_eq!(a.sigma1_sq, b.sigma1_sq);
            assert_eq!(a.sigma2_sq, b.sigma2_sq);
        }
    }

    #[test]
    fn covariance_depends_on_both_temperatures() {
        let s_a = spec(0.02, 2.62, 9.17);
        let s_b = spec(0.02, 3.93, 9.17);
        let s_c = spec(0.02, 2.62, 5.0);
        let q = qcfg(&s_a);
        let t = 25.0;
        let val = |s: &SystemSpec| {
            let m = derive_normal_modes(s).unwrap();
            reduced_state(t, s, &m, &q, &DensityOptions::default())
                .unwrap()
                .beta12_inv
        };
        let a = val(&s_a);
        assert!((val(&s_b) - a).abs() > 1e-3 * a.abs());
        assert!((val(&s_c) - a).abs() > 1e-3 * a.abs());
    }

    #[test]
    fn positive_definite_along_trajectory() {
        let s = spec(0.05, 2.62, 9.17);
        let q = qcfg(&s);
        let grid = time_grid(1000.0, 60, 1e-3);
        let traj = trajectory(&s, &grid, &q, &DensityOptions::default()).unwrap();
        for st in &traj.states {
            assert!(st.is_positive_definite(), "t = {}", st.t);
        }
    }

    #[test]
    fn grid_refinement_leaves_values_unchanged() {
        let s = spec(0.02, 3.93, 3.93);
        let q = qcfg(&s);
        let coarse = [0.0, 1.0, 2.0, 4.0];
        let fine = [0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0];
        let tc = trajectory(&s, &coarse, &q, &DensityOptions::default()).unwrap();
        let tf = trajectory(&s, &fine, &q, &DensityOptions::default()).unwrap();
        assert_eq!(tc.states[1].sigma1_sq, tf.states[2].sigma1_sq);
        assert_eq!(tc.states[3].sigma1_sq, tf.states[6].sigma1_sq);
    }

    #[test]
    fn equilibrium_forms_converge_as_gamma_shrinks() {
        let q = QuadratureConfig {
            omega_rel_tol: 1e-10,
            omega_abs_tol: 1e-15,
            max_panels: 60_000,
            cutoff_nu_max: [50.0, 50.0],
        };
        let theta = 300.0 / 76.3823;
        let narrow = OscillatorSpec::new(1.0, 1.0, 1e-3, theta, 1.0);
        let wide = OscillatorSpec::new(1.0, 1.0, 0.1, theta, 1.0);
        let n = equilibrium_density(&narrow, &q).unwrap();
        let w = equilibrium_density(&wide, &q).unwrap();
        assert!(n.relative_gap() < 0.005, "narrow gap {}", n.relative_gap());
        assert!(w.relative_gap() > n.relative_gap());
        // T = 0 tanh form is the ground-state width
        let cold = OscillatorSpec::new(1.0, 1.0, 1e-3, 0.0, 1.0);
        let c = equilibrium_density(&cold, &q).unwrap();
        assert!((c.tanh_form - 0.5).abs() < 1e-14);
        // theta(300 K) at omega0 = 1: tanh form / sigma0^2 = coth(1/2 theta) ~ 7.7
        assert!((n.tanh_form / 0.5 - influence::coth_stable(1.0 / (2.0 * theta))).abs() < 1e-12);
    }

    #[test]
    fn time_grid_shape() {
        let g = time_grid(10.0, 2, 1e-3);
        assert_eq!(g, vec![0.0, 10.0]);
        let g = time_grid(10.0, 50, 1e-3);
        assert_eq!(g.len(), 50);
        assert_eq!(g[0], 0.0);
        assert!((g[49] - 10.0).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }
}
