//! Adaptive 1-D quadrature on a Gauss-Kronrod 7-15 pair.
//!
//! Panel-adaptive with caller-supplied interior split points (used to
//! bracket resonance peaks and to pre-panel oscillatory integrands). The
//! error model follows the usual QUADPACK rescaling.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BinaryHeap;

/// Kronrod abscissae for the 7-15 pair (positive half).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights of the embedded 7-point rule (nodes XGK[1], XGK[3], XGK[5], center).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances and panel limits for an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadTol {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadTol {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-8,
            max_panels: 4000,
        }
    }
}

/// Value with an error estimate.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub panels: usize,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One Gauss-Kronrod 7-15 evaluation on [a, b].
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);

    let mut res_kronrod = fc * WGK[7];
    let mut res_gauss = fc * WG[3];
    let mut res_abs = res_kronrod.abs();

    let mut fv = [0.0f64; 14];
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[j] = f1;
        fv[j + 7] = f2;
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[j + 7] - mean).abs());
    }

    let value = res_kronrod * half;
    let err = rescale_error((res_kronrod - res_gauss) * half, res_abs * half.abs(), res_asc * half.abs());
    (value, err)
}

#[derive(Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrates `f` over [a, b].
///
/// `splits` lists interior points that seed the initial panelization
/// (out-of-range entries are ignored). Panels are then refined worst-first
/// until the summed error estimate meets `tol` or the panel budget runs out.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, splits: &[f64], tol: &QuadTol) -> Result<QuadResult> {
    if !(b > a) {
        return Ok(QuadResult {
            value: 0.0,
            abs_error: 0.0,
            panels: 0,
        });
    }
    let mut edges: Vec<f64> = Vec::with_capacity(splits.len() + 2);
    edges.push(a);
    for &s in splits {
        if s > a && s < b {
            edges.push(s);
        }
    }
    edges.push(b);
    edges.sort_by(f64::total_cmp);
    edges.dedup();

    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for w in edges.windows(2) {
        let (v, e) = gk15(&f, w[0], w[1]);
        total += v;
        total_err += e;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value: v,
            error: e,
        });
    }

    let target = |tot: f64| tol.abs_tol.max(tol.rel_tol * tot.abs());
    while total_err > target(total) && heap.len() < tol.max_panels {
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // panel at floating-point resolution; keep its estimate
            total_err += worst.error;
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk15(&f, worst.a, mid);
        let (v2, e2) = gk15(&f, mid, worst.b);
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }

    // recompute sums once to shed accumulated cancellation in the running totals
    let mut value = 0.0;
    let mut abs_error = 0.0;
    let panels = heap.len();
    for p in heap.into_iter() {
        value += p.value;
        abs_error += p.error;
    }

    if abs_error > target(value) * 100.0 {
        return Err(Error::QuadratureNoConvergence {
            estimate: abs_error,
            requested: target(value),
            panels,
        });
    }
    Ok(QuadResult {
        value,
        abs_error,
        panels,
    })
}

/// Convenience wrapper without split points.
pub fn integrate_plain<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: &QuadTol) -> Result<QuadResult> {
    integrate(f, a, b, &[], tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate_plain(|x| 3.0 * x * x, 0.0, 2.0, &QuadTol::default()).unwrap();
        assert!((r.value - 8.0).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_integral_converges() {
        // int_0^{20 pi} sin(x) dx = 0; int_0^{19.5 pi} sin = 1
        let tol = QuadTol {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_panels: 2000,
        };
        let r = integrate_plain(|x| x.sin(), 0.0, 19.5 * PI, &tol).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn peaked_integrand_with_splits() {
        // Lorentzian centered at 5 with width 1e-3, integrated over [0, 10]
        let g = 1e-3;
        let f = |x: f64| g / ((x - 5.0) * (x - 5.0) + g * g);
        let tol = QuadTol::default();
        let r = integrate(f, 0.0, 10.0, &[5.0 - g, 5.0, 5.0 + g], &tol).unwrap();
        let exact = ((10.0 - 5.0) / g).atan() - ((0.0 - 5.0) / g).atan();
        assert!((r.value - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn halving_tolerance_stays_within_estimate() {
        let tol1 = QuadTol {
            abs_tol: 1e-8,
            rel_tol: 1e-6,
            max_panels: 4000,
        };
        let tol2 = QuadTol {
            abs_tol: 5e-9,
            rel_tol: 5e-7,
            max_panels: 4000,
        };
        let f = |x: f64| (x * 37.0).cos() * (-x).exp();
        let r1 = integrate_plain(f, 0.0, 10.0, &tol1).unwrap();
        let r2 = integrate_plain(f, 0.0, 10.0, &tol2).unwrap();
        assert!((r1.value - r2.value).abs() <= r1.abs_error + r2.abs_error);
    }

    #[test]
    fn divergent_tolerance_is_reported() {
        // integrand too rough for the panel budget
        let tol = QuadTol {
            abs_tol: 1e-300,
            rel_tol: 1e-16,
            max_panels: 4,
        };
        let f = |x: f64| (1e4 * x).sin() / (x + 1e-4);
        assert!(matches!(
            integrate_plain(f, 0.0, 1.0, &tol),
            Err(Error::QuadratureNoConvergence { .. })
        ));
    }
}
