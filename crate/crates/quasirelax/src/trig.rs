//! Exact algebra on damped harmonics c * e^{a tau} * {cos|sin}(w tau).
//!
//! Sums of such terms are closed under products (product-to-sum),
//! differentiation and definite integration over [0, t], which is all the
//! classical-action coefficient tables need. Integrals are evaluated
//! through the complex primitive (e^{z t} - 1)/z with a series branch for
//! small |z t|, so nearly-resonant and undamped terms stay accurate.

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Cos,
    Sin,
}

/// One term c * e^{rate * tau} * phase(freq * tau); freq is kept >= 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coef: f64,
    pub rate: f64,
    pub freq: f64,
    pub phase: Phase,
}

impl Term {
    fn canonical(coef: f64, rate: f64, freq: f64, phase: Phase) -> Option<Term> {
        if coef == 0.0 {
            return None;
        }
        let (coef, freq) = if freq < 0.0 {
            match phase {
                Phase::Cos => (coef, -freq),
                Phase::Sin => (-coef, -freq),
            }
        } else {
            (coef, freq)
        };
        if freq == 0.0 && phase == Phase::Sin {
            return None; // sin(0) = 0
        }
        Some(Term {
            coef,
            rate,
            freq,
            phase,
        })
    }
}

/// A finite sum of damped harmonics.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrigSum {
    terms: Vec<Term>,
}

/// (e^{z t} - 1)/z, stable for small |z t|.
fn expm1_over_z(z: Complex64, t: f64) -> Complex64 {
    let zt = z * t;
    if zt.norm() < 1e-4 {
        // t * (1 + zt/2 + zt^2/6 + zt^3/24 + zt^4/120)
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

impl TrigSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(coef: f64, rate: f64, freq: f64, phase: Phase) -> Self {
        let mut s = Self::default();
        s.push(coef, rate, freq, phase);
        s
    }

    pub fn push(&mut self, coef: f64, rate: f64, freq: f64, phase: Phase) {
        if let Some(t) = Term::canonical(coef, rate, freq, phase) {
            self.terms.push(t);
        }
    }

    pub fn add(&mut self, other: &TrigSum) {
        self.terms.extend_from_slice(&other.terms);
    }

    pub fn scaled(&self, s: f64) -> TrigSum {
        if s == 0.0 {
            return TrigSum::zero();
        }
        TrigSum {
            terms: self
                .terms
                .iter()
                .map(|t| Term { coef: t.coef * s, ..*t })
                .collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Merges terms sharing (rate, freq, phase). Keeps products from
    /// blowing up the term count when sums are reused.
    pub fn compress(&mut self) {
        self.terms.sort_by(|a, b| {
            a.rate
                .total_cmp(&b.rate)
                .then(a.freq.total_cmp(&b.freq))
                .then((a.phase == Phase::Sin).cmp(&(b.phase == Phase::Sin)))
        });
        let mut out: Vec<Term> = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            match out.last_mut() {
                Some(last) if last.rate == t.rate && last.freq == t.freq && last.phase == t.phase => {
                    last.coef += t.coef;
                }
                _ => out.push(*t),
            }
        }
        out.retain(|t| t.coef != 0.0);
        self.terms = out;
    }

    /// Product via cos/sin product-to-sum identities.
    pub fn mul(&self, other: &TrigSum) -> TrigSum {
        let mut out = TrigSum::zero();
        for x in &self.terms {
            for y in &other.terms {
                let c = 0.5 * x.coef * y.coef;
                let rate = x.rate + y.rate;
                let (wm, wp) = (x.freq - y.freq, x.freq + y.freq);
                match (x.phase, y.phase) {
                    (Phase::Cos, Phase::Cos) => {
                        out.push(c, rate, wm, Phase::Cos);
                        out.push(c, rate, wp, Phase::Cos);
                    }
                    (Phase::Sin, Phase::Sin) => {
                        out.push(c, rate, wm, Phase::Cos);
                        out.push(-c, rate, wp, Phase::Cos);
                    }
                    (Phase::Sin, Phase::Cos) => {
                        out.push(c, rate, wm, Phase::Sin);
                        out.push(c, rate, wp, Phase::Sin);
                    }
                    (Phase::Cos, Phase::Sin) => {
                        out.push(-c, rate, wm, Phase::Sin);
                        out.push(c, rate, wp, Phase::Sin);
                    }
                }
            }
        }
        out.compress();
        out
    }

    /// Term-wise derivative d/dtau.
    pub fn deriv(&self) -> TrigSum {
        let mut out = TrigSum::zero();
        for t in &self.terms {
            match t.phase {
                Phase::Cos => {
                    out.push(t.coef * t.rate, t.rate, t.freq, Phase::Cos);
                    out.push(-t.coef * t.freq, t.rate, t.freq, Phase::Sin);
                }
                Phase::Sin => {
                    out.push(t.coef * t.rate, t.rate, t.freq, Phase::Sin);
                    out.push(t.coef * t.freq, t.rate, t.freq, Phase::Cos);
                }
            }
        }
        out.compress();
        out
    }

    pub fn eval(&self, tau: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let osc = match t.phase {
                    Phase::Cos => (t.freq * tau).cos(),
                    Phase::Sin => (t.freq * tau).sin(),
                };
                t.coef * (t.rate * tau).exp() * osc
            })
            .sum()
    }

    /// Exact integral over [0, t].
    pub fn integral(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|term| {
                let z = Complex64::new(term.rate, term.freq);
                let i = expm1_over_z(z, t);
                match term.phase {
                    Phase::Cos => term.coef * i.re,
                    Phase::Sin => term.coef * i.im,
                }
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integral_of_damped_cosine() {
        // int_0^t e^{-0.3 tau} cos(1.7 tau) dtau against the textbook formula
        let s = TrigSum::term(1.0, -0.3, 1.7, Phase::Cos);
        let t = 2.31;
        let (a, w) = (-0.3f64, 1.7f64);
        let exact = ((a * t).exp() * (a * (w * t).cos() + w * (w * t).sin()) - a) / (a * a + w * w);
        assert!((s.integral(t) - exact).abs() < 1e-14);
    }

    #[test]
    fn small_argument_integral_is_stable() {
        let s = TrigSum::term(1.0, 1e-9, 1e-9, Phase::Cos);
        let t = 1e-3;
        assert!((s.integral(t) - t).abs() < 1e-18);
    }

    #[test]
    fn product_matches_pointwise() {
        let a = TrigSum::term(1.3, -0.2, 1.1, Phase::Sin);
        let b = TrigSum::term(-0.7, 0.05, 2.4, Phase::Cos);
        let p = a.mul(&b);
        for &tau in &[0.0, 0.37, 1.9, 4.4] {
            let direct = a.eval(tau) * b.eval(tau);
            assert!((p.eval(tau) - direct).abs() < 1e-13);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let mut s = TrigSum::term(0.8, -0.1, 0.9, Phase::Cos);
        s.push(1.4, 0.2, 2.2, Phase::Sin);
        let d = s.deriv();
        let h = 1e-6;
        for &tau in &[0.1, 1.0, 3.7] {
            let fd = (s.eval(tau + h) - s.eval(tau - h)) / (2.0 * h);
            assert!((d.eval(tau) - fd).abs() < 1e-7);
        }
    }

    #[test]
    fn sin_products_reduce_frequency_content() {
        // sin(w t)^2 = (1 - cos(2 w t))/2
        let s = TrigSum::term(1.0, 0.0, 1.5, Phase::Sin);
        let p = s.mul(&s);
        assert!((p.eval(0.0) - 0.0).abs() < 1e-15);
        assert!((p.integral(2.0) - (1.0 - (2.0f64 * 3.0).cos()) / 2.0).abs() < 1.0); // smoke
        let exact = 2.0 / 2.0 - (2.0f64 * 1.5 * 2.0).sin() / (4.0 * 1.5);
        assert!((p.integral(2.0) - exact).abs() < 1e-14);
    }
}
