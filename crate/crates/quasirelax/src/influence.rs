//! Frequency-integrated influence kernels.
//!
//! The propagator exponent carries, per oscillator i, three bath kernels
//!
//! ```text
//! K_i(t) = (M_i gamma_i / pi) int_0^{nu_max} dw w coth(hbar w / 2 kB T_i) K_w(t)
//! ```
//!
//! whose inner double time integrals reduce, via
//! cos(w(t'-t'')) = cos wt' cos wt'' + sin wt' sin wt'', to products of
//! four elementary 1-D integrals per mode ("atoms"). Only the w-integral
//! is numerical. All raw kernels diverge at nodes of sin(Omega_i t) and
//! grow exponentially; the rescaled ("hatted") combinations returned here
//! stay bounded for all t:
//!
//! ```text
//! A_hat = A sin^2(W t)              (A carries e^{-2 d t} internally)
//! B_hat = B sin^2(W t) e^{-d t}
//! C_hat = C sin^2(W t) e^{-2 d t}
//! ```
//!
//! The cross kernels E1..E4 decompose into the same hatted single-mode
//! kernels plus genuinely mixed-mode w-integrals (X, Lambda, Y below);
//! their raw values are assembled on demand away from sin nodes.

use crate::error::Result;
use crate::model::{ModePair, OscillatorSpec, SystemSpec};
use crate::quad::{self, QuadTol};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Tolerances and panel budget for the frequency integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub omega_rel_tol: f64,
    pub omega_abs_tol: f64,
    pub max_panels: usize,
    /// Effective per-bath cutoffs (recorded from the spec).
    pub cutoff_nu_max: [f64; 2],
}

impl QuadratureConfig {
    pub fn from_spec(spec: &SystemSpec) -> Self {
        Self {
            omega_rel_tol: 1e-8,
            omega_abs_tol: 1e-13,
            max_panels: 120_000,
            cutoff_nu_max: [spec.bath1.nu_max, spec.bath2.nu_max],
        }
    }

    fn tol(&self) -> QuadTol {
        QuadTol {
            abs_tol: self.omega_abs_tol,
            rel_tol: self.omega_rel_tol,
            max_panels: self.max_panels,
        }
    }
}

/// coth(x) with the small-argument branch 1/x + x/3 below x = 1e-4.
pub fn coth_stable(x: f64) -> f64 {
    if x < 1e-4 {
        1.0 / x + x / 3.0
    } else {
        1.0 + 2.0 / (2.0 * x).exp_m1()
    }
}

/// w coth(hbar w / 2 kB T) in internal units; the T = 0 limit is w.
pub fn thermal_weight(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        omega
    } else {
        omega * coth_stable(omega / (2.0 * temperature))
    }
}

/// The four elementary integrals of one damped mode against cos/sin(w t):
///
/// ```text
/// qc = int_0^t e^{-d u} sin(W u) cos(w u) du     rc = ... cos(W u) cos(w u)
/// qs = int_0^t e^{-d u} sin(W u) sin(w u) du     rs = ... cos(W u) sin(w u)
/// ```
#[derive(Debug, Clone, Copy)]
pub struct ModeAtoms {
    pub qc: f64,
    pub qs: f64,
    pub rc: f64,
    pub rs: f64,
}

/// (e^{z t} - 1)/z with a series branch for small |z t|.
fn expm1_over_z(z: Complex64, t: f64) -> Complex64 {
    let zt = z * t;
    if zt.norm() < 1e-4 {
        let mut acc = Complex64::new(1.0, 0.0);
        let mut pow = Complex64::new(1.0, 0.0);
        let mut fact = 1.0;
        for k in 2..=6 {
            pow *= zt;
            fact *= k as f64;
            acc += pow / fact;
        }
        acc * t
    } else {
        (zt.exp() - 1.0) / z
    }
}

impl ModeAtoms {
    pub fn evaluate(omega: f64, mode_omega: f64, mode_delta: f64, t: f64) -> Self {
        // angle sums: trig(W u) trig(w u) -> half-sum of trig((W +/- w) u)
        let ip = expm1_over_z(Complex64::new(-mode_delta, mode_omega + omega), t);
        let im = expm1_over_z(Complex64::new(-mode_delta, mode_omega - omega), t);
        Self {
            qc: 0.5 * (ip.im + im.im),
            qs: 0.5 * (im.re - ip.re),
            rc: 0.5 * (ip.re + im.re),
            rs: 0.5 * (ip.im - im.im),
        }
    }

    /// Forward (e^{+d tau}) integrals rescaled by e^{-d t}, via the
    /// substitution tau -> t - u. Returns (sc_hat, ss_hat, cc_hat, cs_hat)
    /// for sin/cos(W tau) against cos/sin(w tau).
    pub fn forward_hatted(&self, omega: f64, mode_omega: f64, t: f64) -> (f64, f64, f64, f64) {
        let (sw, cw) = ((mode_omega * t).sin(), (mode_omega * t).cos());
        let (so, co) = ((omega * t).sin(), (omega * t).cos());
        let sc = sw * (co * self.rc + so * self.rs) - cw * (co * self.qc + so * self.qs);
        let ss = sw * (so * self.rc - co * self.rs) - cw * (so * self.qc - co * self.qs);
        let cc = cw * (co * self.rc + so * self.rs) + sw * (co * self.qc + so * self.qs);
        let cs = cw * (so * self.rc - co * self.rs) + sw * (so * self.qc - co * self.qs);
        (sc, ss, cc, cs)
    }
}

/// Split points for the w-quadrature: resonance peaks bracketed explicitly,
/// plus a uniform oscillation-resolving panelization when the integrand
/// still carries visible e^{i w t} fringes (they fade like e^{-delta t}).
fn omega_splits(t: f64, modes: &ModePair, nu_max: f64, rel_tol: f64) -> Vec<f64> {
    let mut splits = Vec::new();
    for &(w, d) in &[(modes.omega1, modes.delta1), (modes.omega2, modes.delta2)] {
        for k in [-10.0, -3.0, -1.0, 0.0, 1.0, 3.0, 10.0] {
            splits.push(w + k * d);
        }
    }
    let delta_min = modes.delta1.min(modes.delta2);
    let fringe = (-delta_min * t).exp();
    if fringe > 0.01 * rel_tol {
        // ~3 panels per oscillation period 2 pi / t
        let n = ((3.0 * nu_max * t / (2.0 * PI)).ceil() as usize).clamp(8, 40_000);
        let h = nu_max / n as f64;
        for k in 1..n {
            splits.push(k as f64 * h);
        }
    }
    splits
}

/// One oscillator's hatted influence kernels at time t.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AbcKernels {
    pub t: f64,
    pub a_hat: f64,
    pub b_hat: f64,
    pub c_hat: f64,
    /// Estimated absolute quadrature error on c_hat.
    pub c_err: f64,
}

impl AbcKernels {
    /// Raw A, B, C; errors within the node guard of sin(Omega t).
    pub fn raw(&self, mode_omega: f64, mode_delta: f64) -> Result<(f64, f64, f64)> {
        crate::kernels::node_guard(self.t, mode_omega)?;
        let s2 = (mode_omega * self.t).sin().powi(2);
        let e = (mode_delta * self.t).exp();
        Ok((self.a_hat / s2, self.b_hat * e / s2, self.c_hat * e * e / s2))
    }
}

/// A_i, B_i, C_i of oscillator `osc_index` (1 or 2) in hatted form.
pub fn eval_abc(
    t: f64,
    osc_index: usize,
    spec: &SystemSpec,
    modes: &ModePair,
    qcfg: &QuadratureConfig,
) -> Result<AbcKernels> {
    let osc = spec.oscillator(osc_index);
    let (mw, md) = modes.mode(osc_index);
    let nu_max = qcfg.cutoff_nu_max[osc_index - 1];
    let temperature = osc.temperature;
    let prefactor = osc.mass * osc.gamma / PI;
    let splits = omega_splits(t, modes, nu_max, qcfg.omega_rel_tol);
    let tol = qcfg.tol();

    let a = quad::integrate(
        |w| {
            let at = ModeAtoms::evaluate(w, mw, md, t);
            let (sc, ss, _, _) = at.forward_hatted(w, mw, t);
            thermal_weight(w, temperature) * (sc * sc + ss * ss)
        },
        0.0,
        nu_max,
        &splits,
        &tol,
    )?;
    let b = quad::integrate(
        |w| {
            let at = ModeAtoms::evaluate(w, mw, md, t);
            let (sc, ss, _, _) = at.forward_hatted(w, mw, t);
            let (so, co) = ((w * t).sin(), (w * t).cos());
            thermal_weight(w, temperature)
                * 2.0
                * (sc * (co * at.qc + so * at.qs) + ss * (so * at.qc - co * at.qs))
        },
        0.0,
        nu_max,
        &splits,
        &tol,
    )?;
    let c = quad::integrate(
        |w| {
            let at = ModeAtoms::evaluate(w, mw, md, t);
            thermal_weight(w, temperature) * (at.qc * at.qc + at.qs * at.qs)
        },
        0.0,
        nu_max,
        &splits,
        &tol,
    )?;

    Ok(AbcKernels {
        t,
        a_hat: prefactor * a.value,
        b_hat: prefactor * b.value,
        c_hat: prefactor * c.value,
        c_err: prefactor * c.abs_error,
    })
}

/// Hatted C kernel only (the quantity the variance assembly needs).
pub fn eval_c_hat(
    t: f64,
    osc_index: usize,
    spec: &SystemSpec,
    modes: &ModePair,
    qcfg: &QuadratureConfig,
) -> Result<(f64, f64)> {
    let osc = spec.oscillator(osc_index);
    let (mw, md) = modes.mode(osc_index);
    let nu_max = qcfg.cutoff_nu_max[osc_index - 1];
    let splits = omega_splits(t, modes, nu_max, qcfg.omega_rel_tol);
    let r = quad::integrate(
        |w| {
            let at = ModeAtoms::evaluate(w, mw, md, t);
            thermal_weight(w, osc.temperature) * (at.qc * at.qc + at.qs * at.qs)
        },
        0.0,
        nu_max,
        &splits,
        &qcfg.tol(),
    )?;
    let p = osc.mass * osc.gamma / PI;
    Ok((p * r.value, p * r.abs_error))
}

/// Mixed-mode analogue of the C kernel, one per bath:
///
/// ```text
/// X_i(t) = (2 M_i gamma_i / pi) int dw w coth_i [qc1 qc2 + qs1 qs2]
/// ```
pub fn eval_cross_x(
    t: f64,
    spec: &SystemSpec,
    modes: &ModePair,
    qcfg: &QuadratureConfig,
) -> Result<[f64; 2]> {
    let mut out = [0.0; 2];
    for i in 1..=2 {
        let osc = spec.oscillator(i);
        let nu_max = qcfg.cutoff_nu_max[i - 1];
        let splits = omega_splits(t, modes, nu_max, qcfg.omega_rel_tol);
        let r = quad::integrate(
            |w| {
                let a1 = ModeAtoms::evaluate(w, modes.omega1, modes.delta1, t);
                let a2 = ModeAtoms::evaluate(w, modes.omega2, modes.delta2, t);
                thermal_weight(w, osc.temperature) * (a1.qc * a2.qc + a1.qs * a2.qs)
            },
            0.0,
            nu_max,
            &splits,
            &qcfg.tol(),
        )?;
        out[i - 1] = 2.0 * osc.mass * osc.gamma / PI * r.value;
    }
    Ok(out)
}

/// Stable building blocks of the cross kernels E1..E4.
///
/// E1 reduces exactly to single-mode C kernels plus the mixed integral X:
///
/// ```text
/// E1 = -2 r2 C1 - 2 r1 C2 + n1 n2 (r2 X1 + r1 X2)
/// ```
///
/// and E4 analogously with the A kernels and the mixed integral Lambda.
/// E2 and E3 mix the backward atoms with forward ones through the Y
/// integrals. Raw values are assembled away from sin nodes.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CrossKernelParts {
    pub t: f64,
    pub c_hat: [f64; 2],
    pub a_hat: [f64; 2],
    /// X_i: mixed backward-backward integral per bath.
    pub x: [f64; 2],
    /// Lambda_i: mixed forward-forward integral per bath.
    pub lambda: [f64; 2],
    /// y[i][j][k]: bath i+1 integral of Phi_{j+1} sc_hat_{k+1} + Psi_{j+1} ss_hat_{k+1}.
    pub y: [[[f64; 2]; 2]; 2],
}

/// Evaluates every mixed integral entering E1..E4.
pub fn eval_cross_parts(
    t: f64,
    spec: &SystemSpec,
    modes: &ModePair,
    qcfg: &QuadratureConfig,
) -> Result<CrossKernelParts> {
    let mut c_hat = [0.0; 2];
    let mut a_hat = [0.0; 2];
    for i in 1..=2 {
        let abc = eval_abc(t, i, spec, modes, qcfg)?;
        c_hat[i - 1] = abc.c_hat;
        a_hat[i - 1] = abc.a_hat;
    }
    let x = eval_cross_x(t, spec, modes, qcfg)?;

    let mut lambda = [0.0; 2];
    let mut y = [[[0.0; 2]; 2]; 2];
    for i in 1..=2 {
        let osc = spec.oscillator(i);
        let nu_max = qcfg.cutoff_nu_max[i - 1];
        let splits = omega_splits(t, modes, nu_max, qcfg.omega_rel_tol);
        let pref = 2.0 * osc.mass * osc.gamma / PI;
        let lam = quad::integrate(
            |w| {
                let a1 = ModeAtoms::evaluate(w, modes.omega1, modes.delta1, t);
                let a2 = ModeAtoms::evaluate(w, modes.omega2, modes.delta2, t);
                let (sc1, ss1, _, _) = a1.forward_hatted(w, modes.omega1, t);
                let (sc2, ss2, _, _) = a2.forward_hatted(w, modes.omega2, t);
                thermal_weight(w, osc.temperature) * (sc1 * sc2 + ss1 * ss2)
            },
            0.0,
            nu_max,
            &splits,
            &qcfg.tol(),
        )?;
        lambda[i - 1] = pref * lam.value;
        for j in 0..2 {
            for k in 0..2 {
                let r = quad::integrate(
                    |w| {
                        let aj = ModeAtoms::evaluate(
                            w,
                            if j == 0 { modes.omega1 } else { modes.omega2 },
                            if j == 0 { modes.delta1 } else { modes.delta2 },
                            t,
                        );
                        let ak = ModeAtoms::evaluate(
                            w,
                            if k == 0 { modes.omega1 } else { modes.omega2 },
                            if k == 0 { modes.delta1 } else { modes.delta2 },
                            t,
                        );
                        let (sck, ssk, _, _) =
                            ak.forward_hatted(w, if k == 0 { modes.omega1 } else { modes.omega2 }, t);
                        let (so, co) = ((w * t).sin(), (w * t).cos());
                        let phi = aj.qc * co + aj.qs * so;
                        let psi = aj.qc * so - aj.qs * co;
                        thermal_weight(w, osc.temperature) * (phi * sck + psi * ssk)
                    },
                    0.0,
                    nu_max,
                    &splits,
                    &qcfg.tol(),
                )?;
                y[i - 1][j][k] = pref * r.value;
            }
        }
    }

    Ok(CrossKernelParts {
        t,
        c_hat,
        a_hat,
        x,
        lambda,
        y,
    })
}

impl CrossKernelParts {
    /// Raw E1..E4; errors within the node guard of either sin(Omega_i t).
    pub fn raw(&self, modes: &ModePair) -> Result<[f64; 4]> {
        crate::kernels::node_guard(self.t, modes.omega1)?;
        crate::kernels::node_guard(self.t, modes.omega2)?;
        let t = self.t;
        let s = [(modes.omega1 * t).sin(), (modes.omega2 * t).sin()];
        let n = [
            (modes.delta1 * t).exp() / s[0],
            (modes.delta2 * t).exp() / s[1],
        ];
        let (r1, r2) = (modes.r1, modes.r2);
        let c1 = self.c_hat[0] * (2.0 * modes.delta1 * t).exp() / (s[0] * s[0]);
        let c2 = self.c_hat[1] * (2.0 * modes.delta2 * t).exp() / (s[1] * s[1]);
        let a1 = self.a_hat[0] / (s[0] * s[0]);
        let a2 = self.a_hat[1] / (s[1] * s[1]);

        let e1 = -2.0 * r2 * c1 - 2.0 * r1 * c2 + n[0] * n[1] * (r2 * self.x[0] + r1 * self.x[1]);
        let e4 = -2.0 * r2 * a1 - 2.0 * r1 * a2 + (r2 * self.lambda[0] + r1 * self.lambda[1]) / (s[0] * s[1]);
        // E2 couples xi_f2 with xi_i1, E3 couples xi_f1 with xi_i2.
        let e2 = r2 * (-n[0] / s[0] * self.y[0][0][0] + n[0] / s[1] * self.y[0][0][1])
            + r1 * (-n[1] / s[1] * self.y[1][1][1] + n[0] / s[1] * self.y[1][0][1]);
        let e3 = r2 * (-n[0] / s[0] * self.y[0][0][0] + n[1] / s[0] * self.y[0][1][0])
            + r1 * (n[1] / s[0] * self.y[1][1][0] - n[1] / s[1] * self.y[1][1][1]);
        Ok([e1, e2, e3, e4])
    }
}

/// Linear-response factors f1, f2 assembled from the kernel tables and
/// influence kernels (all raw; test/debug path):
///
/// ```text
/// f1 = D9 + D'9 + Pi6 - D3 D4 (D11 + D'11 + Pi14) / (D4^2 + 4 a1 hbar (C1 + hbar a1))
/// f2 = D10 + D'10 + Pi7 - [D'3 D'4 (D12 + D'12 + Pi15) + 2 hbar a2 E1 D'3]
///        / (D'4^2 + 4 a2 hbar (C2 + hbar a2))
/// ```
#[allow(clippy::too_many_arguments)]
pub fn eval_f(
    table: &crate::kernels::KernelTable,
    c1: f64,
    c2: f64,
    e1: f64,
    a1: f64,
    a2: f64,
    hbar: f64,
) -> (f64, f64) {
    let g1 = table.d[8] + table.dp[8] + table.pi[5];
    let g2 = table.d[9] + table.dp[9] + table.pi[6];
    let g3 = table.d[10] + table.dp[10] + table.pi[13];
    let g4 = table.d[11] + table.dp[11] + table.pi[14];
    let delta1 = table.d[3] * table.d[3] + 4.0 * a1 * hbar * (c1 + hbar * a1);
    let delta2 = table.dp[3] * table.dp[3] + 4.0 * a2 * hbar * (c2 + hbar * a2);
    let f1 = g1 - table.d[2] * table.d[3] * g3 / delta1;
    let f2 = g2 - (table.dp[2] * table.dp[3] * g4 + 2.0 * hbar * a2 * e1 * table.dp[2]) / delta2;
    (f1, f2)
}

/// Bath autocorrelation alpha(t) = alpha' + i alpha'' for the Ohmic
/// density J(w) = eta w with hard cutoff, by quadrature (validation only).
pub fn eval_alpha(
    t: f64,
    eta: f64,
    nu_max: f64,
    temperature: f64,
    qcfg: &QuadratureConfig,
) -> Result<Complex64> {
    let tol = qcfg.tol();
    let n = ((3.0 * nu_max * t.abs() / (2.0 * PI)).ceil() as usize).clamp(8, 40_000);
    let splits: Vec<f64> = (1..n).map(|k| k as f64 * nu_max / n as f64).collect();
    let re = quad::integrate(
        |w| eta * thermal_weight(w, temperature) * (w * t).cos(),
        0.0,
        nu_max,
        &splits,
        &tol,
    )?;
    let im = quad::integrate(|w| -eta * w * (w * t).sin(), 0.0, nu_max, &splits, &tol)?;
    Ok(Complex64::new(re.value / PI, im.value / PI))
}

/// Stationary variance of one damped oscillator from the
/// fluctuation-dissipation integral
///
/// ```text
/// sigma^2(FDT) = (hbar/pi) int_0^inf dw coth(hbar w / 2 kB T)
///                  2 gamma w / (M [(w^2 - w0^2)^2 + 4 gamma^2 w^2])
/// ```
///
/// The resonance at w0 is bracketed explicitly; the infinite limit is
/// truncated at max(50 w0, w0 + 40 gamma) with the analytic O(1/w^3)
/// tail added to the error estimate.
pub fn fdt_variance(osc: &OscillatorSpec, qcfg: &QuadratureConfig) -> Result<f64> {
    let w0 = osc.omega0;
    let gamma = osc.gamma;
    let cutoff = (50.0 * w0).max(w0 + 40.0 * gamma);
    let mut splits = Vec::new();
    for k in [-20.0, -10.0, -3.0, -1.0, 0.0, 1.0, 3.0, 10.0, 20.0] {
        splits.push(w0 + k * gamma);
    }
    splits.push(2.0 * w0);
    splits.push(10.0 * w0);
    let f = |w: f64| {
        let lorentz = 2.0 * gamma * w / ((w * w - w0 * w0).powi(2) + 4.0 * gamma * gamma * w * w);
        thermal_weight(w, osc.temperature) / w * lorentz
    };
    let r = quad::integrate(f, 0.0, cutoff, &splits, &qcfg.tol())?;
    // tail: integrand ~ 2 gamma / w^3 for w >> w0 (coth -> 1)
    let tail = gamma / (cutoff * cutoff);
    let value = r.value / (PI * osc.mass);
    let err = (r.abs_error + tail) / (PI * osc.mass);
    if err > 100.0 * (qcfg.omega_abs_tol + qcfg.omega_rel_tol * value) {
        return Err(crate::error::Error::QuadratureNoConvergence {
            estimate: err,
            requested: qcfg.omega_abs_tol + qcfg.omega_rel_tol * value,
            panels: r.panels,
        });
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{derive_normal_modes, BathSpec, OscillatorSpec, SystemSpec};

    fn spec_300k() -> SystemSpec {
        // m1 = 1e-23 g, omega01 = 1e13 rad/s, gamma = 0.01 omega0, 300 K
        // in internal units
        let theta = 300.0 / 76.3823;
        let osc1 = OscillatorSpec::new(1.0, 1.0, 0.01, theta, 1.0);
        let osc2 = OscillatorSpec::new(3.0, 2.0, 0.02, theta, 1.0);
        let bath = BathSpec { nu_max: 50.0 };
        SystemSpec::with_rho(osc1, osc2, bath, bath, 0.02)
    }

    fn cfg(spec: &SystemSpec) -> QuadratureConfig {
        QuadratureConfig::from_spec(spec)
    }

    #[test]
    fn coth_branches_agree() {
        let lo = coth_stable(1e-4 * 0.99999);
        let hi = coth_stable(1e-4 * 1.00001);
        assert!((lo - hi).abs() < 1e-9 * hi);
        assert!((coth_stable(20.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn alpha_static_zero_temperature() {
        // alpha'(0) at T = 0: (1/pi) int_0^numax eta w dw = eta numax^2 / 2 pi
        let spec = spec_300k();
        let qcfg = cfg(&spec);
        let eta = spec.osc1.eta();
        let a = eval_alpha(0.0, eta, 50.0, 0.0, &qcfg).unwrap();
        let expected = eta * 50.0f64.powi(2) / (2.0 * PI);
        assert!((a.re - expected).abs() < 1e-8 * expected);
        assert!(a.im.abs() < 1e-10 * expected);
    }

    #[test]
    fn alpha_imaginary_part_is_temperature_independent() {
        let spec = spec_300k();
        let qcfg = cfg(&spec);
        let eta = spec.osc1.eta();
        let cold = eval_alpha(0.7, eta, 50.0, 0.0, &qcfg).unwrap();
        let hot = eval_alpha(0.7, eta, 50.0, 8.0, &qcfg).unwrap();
        assert!((cold.im - hot.im).abs() < 1e-9 * cold.im.abs());
        assert!(cold.re != hot.re);
    }

    #[test]
    fn alpha_classical_limit() {
        // at hbar w / kB T -> 0 the real part approaches
        // (2 kB T / pi hbar) int (J(w)/w) cos(w t) dw
        let spec = spec_300k();
        let qcfg = cfg(&spec);
        let eta = spec.osc1.eta();
        let temperature = 5e4; // deep classical regime for w <= 50
        let t = 0.31;
        let a = eval_alpha(t, eta, 50.0, temperature, &qcfg).unwrap();
        let classical =
            2.0 * temperature / PI * eta * (50.0f64 * t).sin() / t;
        assert!(
            (a.re - classical).abs() < 2e-4 * classical.abs(),
            "{} vs {}",
            a.re,
            classical
        );
    }

    #[test]
    fn c_kernel_short_time_and_fdt_long_time() {
        let spec = spec_300k();
        let qcfg = cfg(&spec);
        let modes = derive_normal_modes(&spec).unwrap();
        let mp = crate::model::ModePair::bare(&spec, &modes);

        // short time: raw C at t = 1e-4 is <= 1e-6 of its t = 1/gamma scale
        let t0 = 1e-4;
        let short = eval_abc(t0, 1, &spec, &mp, &qcfg).unwrap();
        let raw_short = short.raw(mp.omega1, mp.delta1).unwrap().2;
        let mid = eval_abc(100.0, 1, &spec, &mp, &qcfg).unwrap();
        let raw_mid = mid.raw(mp.omega1, mp.delta1).unwrap().2;
        assert!(raw_short.abs() <= 1e-6 * raw_mid.abs());

        // long time: C1 * 2 hbar sin^2 e^{-2 gamma t} / (M^2 w^2) -> sigma^2(FDT)
        let sigf = fdt_variance(&spec.osc1, &qcfg).unwrap();
        let t1 = 5.0 / spec.osc1.gamma;
        let late = eval_abc(t1, 1, &spec, &mp, &qcfg).unwrap();
        let implied = late.c_hat * 2.0 / (spec.osc1.mass.powi(2) * mp.omega1.powi(2));
        assert!(
            (implied - sigf).abs() < 0.02 * sigf,
            "implied {} vs sigma_fdt {}",
            implied,
            sigf
        );
    }

    #[test]
    fn abc_kernels_ignore_partner_parameters() {
        let spec_a = spec_300k();
        let mut spec_b = spec_a;
        spec_b.lambda = 0.0;
        spec_b.osc2.temperature = 11.0;
        spec_b.osc2.mass = 7.0;
        let qcfg = cfg(&spec_a);
        let modes_a = derive_normal_modes(&spec_a).unwrap();
        let mp_a = crate::model::ModePair::bare(&spec_a, &modes_a);
        let modes_b = derive_normal_modes(&spec_b).unwrap();
        let mp_b = crate::model::ModePair::bare(&spec_b, &modes_b);
        let t = 3.7;
        let a = eval_abc(t, 1, &spec_a, &mp_a, &qcfg).unwrap();
        let b = eval_abc(t, 1, &spec_b, &mp_b, &qcfg).unwrap();
        assert_eq!(a.a_hat, b.a_hat);
        assert_eq!(a.b_hat, b.b_hat);
        assert_eq!(a.c_hat, b.c_hat);
    }

    #[test]
    fn temperature_monotonicity_of_c() {
        let spec = spec_300k();
        let qcfg = cfg(&spec);
        let modes = derive_normal_modes(&spec).unwrap();
        let mp = crate::model::ModePair::bare(&spec, &modes);
        let mut last = 0.0;
        for theta in [0.0, 1.0, 2.0, 4.0, 8.0] {
            let mut s = spec;
            s.osc1.temperature = theta;
            let k = eval_abc(11.3, 1, &s, &mp, &qcfg).unwrap();
            assert!(k.c_hat >= last);
            last = k.c_hat;
        }
    }

    #[test]
    fn cross_kernels_vanish_without_coupling() {
        let mut spec = spec_300k();
        spec.lambda = 0.0;
        let qcfg = cfg(&spec);
        let modes = derive_normal_modes(&spec).unwrap();
        let mp = crate::model::ModePair::bare(&spec, &modes);
        let parts = eval_cross_parts(4.4, &spec, &mp, &qcfg).unwrap();
        let raw = parts.raw(&mp).unwrap();
        for v in raw {
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn fdt_ratios_match_reported_values() {
        // sigma0^2 / sigma^2(FDT) for the four reported parameter points
        let qcfg = QuadratureConfig {
            omega_rel_tol: 1e-9,
            omega_abs_tol: 1e-14,
            max_panels: 60_000,
            cutoff_nu_max: [50.0, 50.0],
        };
        let theta = |t_kelvin: f64| t_kelvin / 76.3823;
        let cases = [
            (1.0, 1.0, theta(300.0), 0.13),
            (3.0, 2.0, theta(300.0), 0.25),
            (1.0, 1.0, theta(200.0), 0.19),
            (3.0, 2.0, theta(700.0), 0.11),
        ];
        for (mass, w0, th, expected) in cases {
            let osc = OscillatorSpec::new(mass, w0, 0.01 * w0, th, 1.0);
            let sigf = fdt_variance(&osc, &qcfg).unwrap();
            let ratio = osc.sigma0_sq / sigf;
            assert!(
                (ratio - expected).abs() <= 0.01,
                "m={} w0={} theta={}: ratio {} vs {}",
                mass,
                w0,
                th,
                ratio,
                expected
            );
        }
    }

    #[test]
    fn fdt_narrow_line_limit_at_zero_temperature() {
        let qcfg = QuadratureConfig {
            omega_rel_tol: 1e-10,
            omega_abs_tol: 1e-15,
            max_panels: 60_000,
            cutoff_nu_max: [50.0, 50.0],
        };
        let osc = OscillatorSpec::new(1.0, 1.0, 1e-4, 0.0, 1.0);
        let sigf = fdt_variance(&osc, &qcfg).unwrap();
        assert!((sigf - 0.5).abs() < 1e-3 * 0.5, "sigf = {}", sigf);
    }

    #[test]
    fn quadrature_tolerance_halving_is_consistent() {
        let spec = spec_300k();
        let modes = derive_normal_modes(&spec).unwrap();
        let mp = crate::model::ModePair::bare(&spec, &modes);
        let mut q1 = cfg(&spec);
        q1.omega_rel_tol = 1e-7;
        let mut q2 = q1;
        q2.omega_rel_tol = 5e-8;
        let t = 37.3;
        let (c1, e1) = eval_c_hat(t, 1, &spec, &mp, &q1).unwrap();
        let (c2, e2) = eval_c_hat(t, 1, &spec, &mp, &q2).unwrap();
        assert!((c1 - c2).abs() <= (e1 + e2).max(1e-12 * c1.abs()));
    }
}
