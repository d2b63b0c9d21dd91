//! Complete elliptic integral of the first kind and the modulus function
//!
//! ```text
//!            π/2
//!           ⌠          dx
//! K(t)  =   │  ─────────────────────        K'(t) = K(√(1 − t²))
//!           ⌡  √(1 − t² sin² x)
//!           0
//!
//! φ(t)  =  (π/2) · K'(t) / K(t),    t ∈ (0, 1)
//! ```
//!
//! `φ` decreases strictly from `+∞` to `0` and satisfies the complementary
//! product `φ(t) · φ(√(1 − t²)) = (π/2)²`. All values are computed through the
//! arithmetic-geometric mean: `K(t) = π / (2·agm(1, t'))` and
//! `K'(t) = π / (2·agm(1, t))`, so neither endpoint needs `√(1 − t²)` to be
//! formed when it would round to 1.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{domain, Error, Result};

/// Stop the AGM once `|a − b| < AGM_TOL · a`.
pub const AGM_TOL: f64 = 1e-15;

/// `φ` is only evaluated on `[ENDPOINT_GUARD, 1 − ENDPOINT_GUARD]`.
pub const ENDPOINT_GUARD: f64 = 1e-12;

const AGM_MAX_ITER: usize = 64;
const PI2_OVER_4: f64 = FRAC_PI_2 * FRAC_PI_2;

/// Modulus `t ∈ [0, 1]` of the elliptic integral.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EllipticModulus(f64);

impl EllipticModulus {
    pub fn new(t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(domain(format!("elliptic modulus {t} outside [0, 1]")));
        }
        Ok(Self(t))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `√(1 − t²)`, formed as `√((1 − t)(1 + t))`.
    pub fn complement(self) -> Self {
        Self(((1.0 - self.0) * (1.0 + self.0)).sqrt())
    }
}

/// A value `s = φ(t) > 0`. Larger values correspond to smaller moduli.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PhiValue(f64);

impl PhiValue {
    pub fn new(s: f64) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(domain(format!("phi value {s} must be positive and finite")));
        }
        Ok(Self(s))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Arithmetic-geometric mean of two positive numbers.
pub fn agm(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(domain(format!("agm({a}, {b}) requires positive finite arguments")));
    }
    let (mut a, mut b) = (a, b);
    for _ in 0..AGM_MAX_ITER {
        if (a - b).abs() < AGM_TOL * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    Ok(0.5 * (a + b))
}

/// `K(t)` for `t ∈ [0, 1)`.
pub fn ellip_k(t: EllipticModulus) -> Result<f64> {
    if t.0 >= 1.0 {
        return Err(Error::Divergence("K(1) is infinite".into()));
    }
    Ok(PI / (2.0 * agm(1.0, t.complement().0)?))
}

/// `K'(t) = K(√(1 − t²))` for `t ∈ (0, 1]`.
pub fn ellip_k_comp(t: EllipticModulus) -> Result<f64> {
    if t.0 <= 0.0 {
        return Err(Error::Divergence("K'(0) is infinite".into()));
    }
    Ok(PI / (2.0 * agm(1.0, t.0)?))
}

/// The modulus function `φ(t) = (π/2)·K'(t)/K(t)`.
///
/// Errors within [`ENDPOINT_GUARD`] of either endpoint, where `φ` tends to
/// `+∞` (at 0) or `0` (at 1); callers substitute the analytic limits.
pub fn phi(t: EllipticModulus) -> Result<PhiValue> {
    let t = t.0;
    if t <= ENDPOINT_GUARD {
        return Err(Error::Divergence(format!("phi({t}): phi(0+) is infinite")));
    }
    if t >= 1.0 - ENDPOINT_GUARD {
        return Err(Error::Divergence(format!("phi({t}): phi(1-) is zero")));
    }
    Ok(PhiValue(phi_unchecked(t)))
}

fn phi_unchecked(t: f64) -> f64 {
    let tc = ((1.0 - t) * (1.0 + t)).sqrt();
    // (π/2)·K'/K = (π/2)·agm(1, t')/agm(1, t); arguments are positive here.
    FRAC_PI_2 * agm(1.0, tc).unwrap_or(f64::NAN) / agm(1.0, t).unwrap_or(f64::NAN)
}

/// Beyond this value `4e^{−s}` falls below [`ENDPOINT_GUARD`] and the
/// two-term asymptote is used instead of bisection.
pub fn asymptotic_threshold() -> f64 {
    (4.0 / ENDPOINT_GUARD).ln()
}

/// Inverse of [`phi`].
///
/// For `s ≥ π/2` the root is bracketed around the small-modulus asymptote
/// `t ≈ 4e^{−s}` and bisected to full precision. For `s < π/2` the
/// complementary product turns the problem into one with a small root:
/// `t = √(1 − t'²)` with `t' = φ⁻¹(π²/(4s))`.
pub fn phi_inv(s: PhiValue) -> Result<EllipticModulus> {
    let s = s.0;
    if s >= FRAC_PI_2 {
        Ok(EllipticModulus(small_root(s)))
    } else {
        let tc = small_root(PI2_OVER_4 / s);
        Ok(EllipticModulus(((1.0 - tc) * (1.0 + tc)).sqrt()))
    }
}

/// Root of `φ(t) = s` for `s ≥ π/2`, i.e. `t ∈ (0, 1/√2]`.
fn small_root(s: f64) -> f64 {
    let guess = 4.0 * (-s).exp();
    if s > asymptotic_threshold() {
        // φ(t) = ln(4/t) − t²/4 + O(t⁴ ln t): one fixed-point pass.
        return guess * (-guess * guess / 4.0).exp();
    }
    let upper = std::f64::consts::FRAC_1_SQRT_2;
    // φ(t) ≤ ln(4/t) on (0, 1/√2], so the root sits at or below the asymptote.
    let mut hi = (guess * 1.5).min(upper);
    let mut lo = (guess * 0.25).max(ENDPOINT_GUARD);
    while phi_unchecked(lo) < s && lo > ENDPOINT_GUARD {
        lo = (lo * 0.5).max(ENDPOINT_GUARD);
    }
    while phi_unchecked(hi) > s && hi < upper {
        hi = (hi * 2.0).min(upper);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-16 * hi {
            break;
        }
        if phi_unchecked(mid) > s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Convenience wrapper on plain `f64`s: `φ⁻¹(φ(t)/Q)`, the distortion of the
/// modulus under a `Q`-quasiconformal map. Exact limits are used at `t ∈ {0, 1}`.
pub fn distorted_modulus(t: f64, q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(domain(format!("modulus {t} outside [0, 1]")));
    }
    if !(q >= 1.0) {
        return Err(domain(format!("Q = {q} must be at least 1")));
    }
    if t <= 0.0 {
        return Ok(0.0);
    }
    if t >= 1.0 {
        return Ok(1.0);
    }
    if q == 1.0 {
        return Ok(t);
    }
    let s = phi(EllipticModulus(t))?.0 / q;
    Ok(phi_inv(PhiValue(s))?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn m(t: f64) -> EllipticModulus {
        EllipticModulus::new(t).unwrap()
    }

    /// Trapezoid rule on the full period of the (even, π-periodic) integrand;
    /// spectrally accurate and independent of the AGM path.
    fn k_by_trapezoid(t: f64) -> f64 {
        let n = 4096;
        let h = 2.0 * PI / n as f64;
        let sum: f64 = (0..n)
            .map(|j| {
                let s = (j as f64 * h).sin();
                1.0 / (1.0 - t * t * s * s).sqrt()
            })
            .sum();
        sum * h / 4.0
    }

    #[test]
    fn agm_fixed_points_and_symmetry() {
        assert_eq!(agm(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(agm(2.5, 2.5).unwrap(), 2.5);
        let a = agm(1.0, 2f64.sqrt()).unwrap();
        let b = agm(2f64.sqrt(), 1.0).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn agm_of_one_and_root_two() {
        // Hand-iterated recurrence: a₁ = 1.2071067811865475, b₁ = 1.189207115002721, …
        let (mut a, mut b) = (1.0f64, 2f64.sqrt());
        for _ in 0..8 {
            let n = 0.5 * (a + b);
            b = (a * b).sqrt();
            a = n;
        }
        assert!((a - 1.198140234735592).abs() < 1e-12);
        assert!((agm(1.0, 2f64.sqrt()).unwrap() - a).abs() < 1e-12);
    }

    #[test]
    fn agm_rejects_non_positive() {
        assert!(matches!(agm(0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(agm(1.0, -2.0), Err(Error::Domain(_))));
    }

    #[test]
    fn modulus_constructor_rejects_out_of_range() {
        assert!(EllipticModulus::new(-0.1).is_err());
        assert!(EllipticModulus::new(1.0 + 1e-15).is_err());
        assert!(EllipticModulus::new(f64::NAN).is_err());
        assert!(PhiValue::new(0.0).is_err());
    }

    #[test]
    fn k_values_against_quadrature() {
        assert_eq!(ellip_k(m(0.0)).unwrap(), FRAC_PI_2);
        let k = ellip_k(m(FRAC_1_SQRT_2)).unwrap();
        assert!((k - 1.854074677301372).abs() < 1e-13);
        assert!((k - k_by_trapezoid(FRAC_1_SQRT_2)).abs() < 1e-12);
        let k = ellip_k(m(0.5)).unwrap();
        assert!((k - 1.685750354812596).abs() < 1e-13);
        for i in 0..40 {
            let t = i as f64 / 40.0 * 0.99;
            assert!((ellip_k(m(t)).unwrap() - k_by_trapezoid(t)).abs() < 1e-10, "t = {t}");
        }
    }

    #[test]
    fn k_at_one_diverges() {
        assert!(matches!(ellip_k(m(1.0)), Err(Error::Divergence(_))));
        assert!(matches!(ellip_k_comp(m(0.0)), Err(Error::Divergence(_))));
    }

    #[test]
    fn complementary_integral() {
        let t = m(FRAC_1_SQRT_2);
        assert!((ellip_k_comp(t).unwrap() - ellip_k(t).unwrap()).abs() < 1e-14);
        assert!((ellip_k_comp(m(1.0)).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((ellip_k_comp(m(0.6)).unwrap() - ellip_k(m(0.8)).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn phi_special_values() {
        assert!((phi(m(FRAC_1_SQRT_2)).unwrap().value() - FRAC_PI_2).abs() < 1e-12);
        let t = 0.3;
        let p = phi(m(t)).unwrap().value() * phi(m(t).complement()).unwrap().value();
        assert!((p - PI2_OVER_4).abs() < 1e-12);
        // Reference from K and K' by trapezoid quadrature.
        let reference = FRAC_PI_2 * k_by_trapezoid((0.99f64).sqrt()) / k_by_trapezoid(0.1);
        let v = phi(m(0.1)).unwrap().value();
        assert!((v - reference).abs() < 1e-10);
        assert!((v - 3.686369237552852).abs() < 1e-12);
        assert!(((40f64).ln() - v).abs() / v < 3e-3);
    }

    #[test]
    fn phi_endpoints_error() {
        assert!(matches!(phi(m(0.0)), Err(Error::Divergence(_))));
        assert!(matches!(phi(m(1.0)), Err(Error::Divergence(_))));
        assert!(phi(m(1e-13)).is_err());
    }

    #[test]
    fn phi_inv_examples() {
        let t = phi_inv(PhiValue::new(FRAC_PI_2).unwrap()).unwrap().value();
        assert!((t - FRAC_1_SQRT_2).abs() < 1e-14);
        let s = phi(m(0.3)).unwrap();
        assert!((phi_inv(s).unwrap().value() - 0.3).abs() < 1e-10);
        let t = phi_inv(PhiValue::new(10.0).unwrap()).unwrap().value();
        assert!((t - 1.8159971755271974e-4).abs() < 1e-15);
        assert!((t - 4.0 * (-10f64).exp()).abs() / t < 1e-4);
    }

    #[test]
    fn phi_inv_far_tails() {
        // Small-modulus tail: asymptote only.
        let s = 40.0;
        let t = phi_inv(PhiValue::new(s).unwrap()).unwrap().value();
        assert!((t - 4.0 * (-s).exp()).abs() / t < 1e-15);
        // Near-one tail via the complementary product.
        let t = phi_inv(PhiValue::new(0.05).unwrap()).unwrap().value();
        let tc = 4.0 * (-PI2_OVER_4 / 0.05).exp();
        assert!((1.0 - t - 0.5 * tc * tc).abs() < 1e-15);
    }

    #[test]
    fn distorted_modulus_limits() {
        assert_eq!(distorted_modulus(0.0, 3.0).unwrap(), 0.0);
        assert_eq!(distorted_modulus(1.0, 3.0).unwrap(), 1.0);
        assert_eq!(distorted_modulus(0.4, 1.0).unwrap(), 0.4);
        // Distortion pushes moduli towards 1.
        let y = distorted_modulus(0.4, 2.0).unwrap();
        assert!(y > 0.4 && y < 1.0);
    }
}
