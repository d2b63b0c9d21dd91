//! Closed forms of the extremal families.
//!
//! ```text
//! k_n(z) = (i/2n) [ ((1 − iz)/(1 + iz))^n − 1 ],      k_n'(z) = (1 − iz)^{n−1} / (1 + iz)^{n+1}
//! h_α(z) = (1/2iα) [ ((1 + iz)/(1 − iz))^α − 1 ],      h_α'(z) = (1 + iz)^{α−1} / (1 − iz)^{α+1}
//! ```
//!
//! Non-integer powers use the principal branch. The bases `(1 ± iz)/(1 ∓ iz)`
//! have positive real part on the unit disk, so the branch cut is never
//! crossed.
//!
//! The harmonic Koebe function is `K = h + conj(g)` with
//!
//! ```text
//! h(z) = (z − z²/2 + z³/6) / (1 − z)³,   h'(z) = (1 + z) / (1 − z)⁴
//! g(z) = (z²/2 + z³/6) / (1 − z)³,       g'(z) = z (1 + z) / (1 − z)⁴
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Analytic families that can serve as the base of a [`ScaledCombo`](super::HarmonicMap::ScaledCombo).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnalyticFamily {
    PommerenkeKn { n: u32 },
    HAlpha { alpha: f64 },
}

impl AnalyticFamily {
    /// The order of the universal linear invariant family the function lies in.
    pub fn order(&self) -> f64 {
        match *self {
            Self::PommerenkeKn { n } => n as f64,
            Self::HAlpha { alpha } => alpha,
        }
    }

    pub fn value(&self, z: Complex64) -> Complex64 {
        match *self {
            Self::PommerenkeKn { n } => kn_value(n, z),
            Self::HAlpha { alpha } => h_alpha_value(alpha, z),
        }
    }

    pub fn deriv(&self, z: Complex64) -> Complex64 {
        match *self {
            Self::PommerenkeKn { n } => kn_deriv(n, z),
            Self::HAlpha { alpha } => h_alpha_deriv(alpha, z),
        }
    }
}

fn real_pow(w: Complex64, p: f64) -> Complex64 {
    if p == p.round() && p.abs() < i32::MAX as f64 {
        w.powi(p as i32)
    } else {
        w.powf(p)
    }
}

pub(crate) fn kn_value(n: u32, z: Complex64) -> Complex64 {
    let w = (ONE - I * z) / (ONE + I * z);
    I / (2.0 * n as f64) * (w.powi(n as i32) - ONE)
}

pub(crate) fn kn_deriv(n: u32, z: Complex64) -> Complex64 {
    let p = ONE + I * z;
    let w = (ONE - I * z) / p;
    w.powi(n as i32 - 1) / (p * p)
}

pub(crate) fn h_alpha_value(alpha: f64, z: Complex64) -> Complex64 {
    let w = (ONE + I * z) / (ONE - I * z);
    (real_pow(w, alpha) - ONE) / (2.0 * alpha * I)
}

pub(crate) fn h_alpha_deriv(alpha: f64, z: Complex64) -> Complex64 {
    let m = ONE - I * z;
    let w = (ONE + I * z) / m;
    real_pow(w, alpha - 1.0) / (m * m)
}

pub(crate) fn koebe_values(z: Complex64) -> (Complex64, Complex64) {
    let d = (ONE - z).powi(3);
    let z2 = z * z;
    let z3 = z2 * z;
    ((z - z2 / 2.0 + z3 / 6.0) / d, (z2 / 2.0 + z3 / 6.0) / d)
}

pub(crate) fn koebe_derivs(z: Complex64) -> (Complex64, Complex64) {
    let dh = (ONE + z) / (ONE - z).powi(4);
    (dh, z * dh)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_one_is_a_mobius_map() {
        let z = Complex64::new(0.5, 0.0);
        let v = h_alpha_value(1.0, z);
        assert!((v - Complex64::new(0.4, 0.2)).norm() < 1e-15);
        // Independent route: z/(1 − iz) as a geometric series Σ iᵏ z^{k+1}.
        let z = Complex64::new(0.2, -0.3);
        let series: Complex64 = (0..80).map(|k| I.powi(k) * z.powi(k + 1)).sum();
        assert!((h_alpha_value(1.0, z) - series).norm() < 1e-14);
    }

    #[test]
    fn kn_derivative_closed_form() {
        let z = Complex64::new(0.3, 0.0);
        let expected = (ONE - 0.3 * I) / (ONE + 0.3 * I).powi(3);
        assert!((kn_deriv(2, z) - expected).norm() < 1e-15);
        assert!((kn_deriv(3, Complex64::new(0.0, 0.0)) - ONE).norm() < 1e-15);
    }

    #[test]
    fn koebe_at_one_half() {
        let (h, g) = koebe_values(Complex64::new(0.5, 0.0));
        // Exact rationals: h = 19/6, g = 7/6.
        assert!((h.re - 19.0 / 6.0).abs() < 1e-14);
        assert!((g.re - 7.0 / 6.0).abs() < 1e-14);
        assert!((h + g.conj() - Complex64::new(13.0 / 3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn principal_branch_base_stays_in_right_half_plane() {
        for i in 0..60 {
            for j in 0..60 {
                let r = 0.999 * i as f64 / 59.0;
                let t = std::f64::consts::TAU * j as f64 / 60.0;
                let z = Complex64::from_polar(r, t);
                assert!(((ONE + I * z) / (ONE - I * z)).re > 0.0);
                assert!(((ONE - I * z) / (ONE + I * z)).re > 0.0);
            }
        }
    }
}
