//! Distortion, covering and convexity bounds for `Q`-quasiconformal harmonic maps.
//!
//! With `k = (Q − 1)/(Q + 1)` and `x = |ω(z)|/k`, the ratio of univalent-disk
//! radii is bracketed by
//!
//! ```text
//! 1 − k ≤ m(x, Q) ≤ d_f(z)/d_h(z) ≤ M(x, k) ≤ 1 + k
//!
//! M(x, k)   = 1 + k ∫₀¹ (t + x)/(1 + xt) dt
//!           = 1 + (k/x)·{1 − (1/x − x)·log(1 + x)},         M(0, k) = 1 + k/2
//! 1/m(x, Q) = ∫₀¹ (1 + y x)/(1 − kx + y(x − k)) dt,  y = φ⁻¹(φ(t)/Q),  m(x, ∞) = 0
//! ```
//!
//! `m` has no closed form and is evaluated by adaptive quadrature, see
//! [`lower_bound_m_with`].

use std::fmt;

use crate::elliptic;
use crate::error::{domain, Error, Result};
use crate::mappings::{ComplexPoint, HarmonicMap};
use crate::quadrature::{integrate, QuadratureConfig};

/// Width of the end pieces of `[0, 1]` that are handled by asymptotics
/// instead of evaluating `φ` near its singular endpoints.
pub const ENDPOINT_CUT: f64 = 1e-8;

/// Default absolute tolerance for the integral defining `1/m`.
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

/// Quasiconformality constant `Q ∈ [1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QFactor {
    Finite(f64),
    Infinite,
}

impl QFactor {
    pub fn new(q: f64) -> Result<Self> {
        if q == f64::INFINITY {
            return Ok(QFactor::Infinite);
        }
        if !(q >= 1.0) {
            return Err(domain(format!("Q = {q} must be at least 1")));
        }
        Ok(QFactor::Finite(q))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            QFactor::Finite(q) => Some(q),
            QFactor::Infinite => None,
        }
    }

    pub fn k(self) -> f64 {
        match self {
            QFactor::Finite(q) => (q - 1.0) / (q + 1.0),
            QFactor::Infinite => 1.0,
        }
    }
}

impl fmt::Display for QFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QFactor::Finite(q) => write!(f, "{q}"),
            QFactor::Infinite => f.write_str("inf"),
        }
    }
}

/// `k = (Q − 1)/(Q + 1)`, with `k(∞) = 1`.
pub fn k_from_q(q: QFactor) -> Result<f64> {
    match q {
        QFactor::Finite(v) if !(v >= 1.0) => Err(domain(format!("Q = {v} must be at least 1"))),
        _ => Ok(q.k()),
    }
}

/// `Q = (1 + k)/(1 − k)`, with `Q(1) = ∞`.
pub fn q_from_k(k: f64) -> Result<QFactor> {
    if !(0.0..=1.0).contains(&k) {
        return Err(domain(format!("k = {k} outside [0, 1]")));
    }
    if k == 1.0 {
        return Ok(QFactor::Infinite);
    }
    Ok(QFactor::Finite((1.0 + k) / (1.0 - k)))
}

/// The scalars `(α, Q, k, x)` the bounds depend on. `k` is always derived from `Q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParams {
    alpha: f64,
    q: QFactor,
    k: f64,
    x: f64,
}

impl FamilyParams {
    pub fn new(alpha: f64, q: QFactor, x: f64) -> Result<Self> {
        if !(alpha >= 1.0) {
            return Err(domain(format!("order alpha = {alpha} must be at least 1")));
        }
        check_unit("x", x)?;
        Ok(Self { alpha, q, k: k_from_q(q)?, x })
    }

    pub fn from_k(alpha: f64, k: f64, x: f64) -> Result<Self> {
        Self::new(alpha, q_from_k(k)?, x)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn q(&self) -> QFactor {
        self.q
    }
    pub fn k(&self) -> f64 {
        self.k
    }
    pub fn x(&self) -> f64 {
        self.x
    }
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(domain(format!("{name} = {v} outside [0, 1]")));
    }
    Ok(())
}

fn check_half_open(name: &str, v: f64) -> Result<()> {
    if !(0.0..1.0).contains(&v) {
        return Err(domain(format!("{name} = {v} outside [0, 1)")));
    }
    Ok(())
}

fn check_order(alpha: f64) -> Result<()> {
    if !(alpha >= 1.0) || !alpha.is_finite() {
        return Err(domain(format!("order alpha = {alpha} must be finite and at least 1")));
    }
    Ok(())
}

/// `∫₀¹ (t + x)/(1 + xt) dt`.
fn m_integral(x: f64) -> f64 {
    if x < 0.1 {
        // 1/2 + Σ_{j≥2} (−1)ʲ · 2x^{j−1}/(j² − 1); the closed form cancels badly here.
        let mut sum = 0.5;
        let mut pow = 1.0;
        for j in 2..40 {
            pow *= x;
            let term = 2.0 * pow / ((j * j - 1) as f64);
            sum += if j % 2 == 0 { term } else { -term };
            if term < 1e-18 {
                break;
            }
        }
        sum
    } else {
        (1.0 - (1.0 / x - x) * x.ln_1p()) / x
    }
}

/// `M(x, k)`, the sharp upper bound on `d_f/d_h`.
pub fn upper_bound_m(x: f64, k: f64) -> Result<f64> {
    check_unit("x", x)?;
    check_unit("k", k)?;
    if x == 1.0 {
        return Ok(1.0 + k);
    }
    Ok(1.0 + k * m_integral(x))
}

/// A quadrature-backed value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadBound {
    pub value: f64,
    /// Estimated absolute error of `value`.
    pub error: f64,
    pub tolerance: f64,
    pub evaluations: usize,
}

/// `m(x, Q)` with the default tolerance.
pub fn lower_bound_m(x: f64, q: QFactor) -> Result<f64> {
    Ok(lower_bound_m_with(x, q, QuadratureConfig::with_tol(DEFAULT_QUAD_TOL))?.value)
}

fn m_integrand(x: f64, k: f64, y: f64) -> f64 {
    (1.0 + y * x) / (1.0 - k * x + y * (x - k))
}

/// `m(x, Q)`, the sharp lower bound on `d_f/d_h`, by adaptive quadrature.
///
/// The integral of `1/m` is split as `[0, δ] ∪ [δ, 1 − δ] ∪ [1 − δ, 1]` with
/// `δ = ENDPOINT_CUT`. On the middle piece `y = φ⁻¹(φ(t)/Q)` is evaluated
/// directly. Near `t = 0` the small-modulus asymptote gives
/// `y ≈ 4(t/4)^{1/Q}`, which is integrated after substituting `t = δ·v^Q`;
/// near `t = 1` the integrand equals its limit `1/(1 − k)` to within
/// `O((1 − t)^Q)`.
pub fn lower_bound_m_with(x: f64, q: QFactor, config: QuadratureConfig) -> Result<QuadBound> {
    check_unit("x", x)?;
    let tolerance = config.abs_tol;
    let q = match q {
        QFactor::Infinite => {
            return Ok(QuadBound { value: 0.0, error: 0.0, tolerance, evaluations: 0 })
        }
        QFactor::Finite(q) if !(q >= 1.0) => return Err(domain(format!("Q = {q} must be at least 1"))),
        QFactor::Finite(q) => q,
    };
    if q == 1.0 {
        return Ok(QuadBound { value: 1.0, error: 0.0, tolerance, evaluations: 0 });
    }
    let k = (q - 1.0) / (q + 1.0);
    let delta = ENDPOINT_CUT;

    let middle = integrate(
        |t| Ok(m_integrand(x, k, elliptic::distorted_modulus(t, q)?)),
        delta,
        1.0 - delta,
        QuadratureConfig { abs_tol: 0.8 * tolerance, ..config },
    )?;

    let scale = 4.0 * (delta / 4.0).powf(1.0 / q);
    let head = integrate(
        |v| Ok(delta * q * v.powf(q - 1.0) * m_integrand(x, k, scale * v)),
        0.0,
        1.0,
        QuadratureConfig { abs_tol: 0.1 * tolerance, ..config },
    )?;
    let tail = delta / (1.0 - k);

    // The integrand lies in [1, 1/(1 − k)], so 1/m does too.
    let inverse = (head.value + middle.value + tail).clamp(1.0, 1.0 / (1.0 - k));
    let inv_err = head.error + middle.error;
    Ok(QuadBound {
        value: 1.0 / inverse,
        error: inv_err / (inverse * inverse),
        tolerance,
        evaluations: head.evaluations + middle.evaluations,
    })
}

/// Elementary upper bound on `d_h/d_f` from the `16|z|^{1/Q}` distortion estimate:
///
/// ```text
/// (1/(1−k))·(1 − 16^{−Q}) + ∫₀^{16^{−Q}} (1 + yx)/(1 − kx + y(x − k)) dt,   y = 16 t^{1/Q}
/// ```
///
/// It dominates `1/m(x, Q)` and is dominated by `1/(1 − k)`.
pub fn mori_upper_bound_on_ratio(x: f64, q: f64) -> Result<f64> {
    check_unit("x", x)?;
    if !(q >= 1.0) || !q.is_finite() {
        return Err(domain(format!("Q = {q} must be finite and at least 1")));
    }
    let k = (q - 1.0) / (q + 1.0);
    let cut = 16f64.powf(-q);
    // t = cut·vᴽ turns y into v.
    let r = integrate(
        |v| Ok(q * v.powf(q - 1.0) * m_integrand(x, k, v)),
        0.0,
        1.0,
        QuadratureConfig::with_tol(1e-13),
    )?;
    // Written as a deficit from 1/(1 − k) so that x = 1 lands on it exactly.
    let top = 1.0 / (1.0 - k);
    Ok(top - cut * (top - r.value.min(top)))
}

/// The Theorem-1 bracket `[m(x, Q), M(x, k)]` for `d_f/d_h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPair {
    pub lower: f64,
    pub upper: f64,
    /// Quadrature error estimate of `lower`.
    pub lower_error: f64,
    pub params: FamilyParams,
}

pub fn ratio_bracket(params: FamilyParams, config: QuadratureConfig) -> Result<BoundPair> {
    let lower = lower_bound_m_with(params.x, params.q, config)?;
    Ok(BoundPair {
        lower: lower.value,
        upper: upper_bound_m(params.x, params.k)?,
        lower_error: lower.error,
        params,
    })
}

/// Two-sided radius estimate `lower ≤ d_f(z) ≤ upper`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Starkov's estimates for `f ∈ ℋ(α, Q)`:
/// `(1−|z|²)(|h'|+|g'|)/(2αQ) ≤ d_f(z) ≤ Q(1−|z|²)(|h'|−|g'|)`.
pub fn starkov_bounds(map: &HarmonicMap, z: ComplexPoint, alpha: f64, q: f64) -> Result<RadiusBounds> {
    check_order(alpha)?;
    if !(q >= 1.0) || !q.is_finite() {
        return Err(domain(format!("Q = {q} must be finite and at least 1")));
    }
    let (dh, dg) = map.derivs(z)?;
    let (a, b) = (dh.norm(), dg.norm());
    if b > a {
        return Err(Error::SenseReversal { re: z.re, im: z.im });
    }
    let s = 1.0 - z.norm_sqr();
    Ok(RadiusBounds { lower: s * (a + b) / (2.0 * alpha * q), upper: q * s * (a - b) })
}

/// Lower bound on `d_f(z)` in an affine and linear invariant family of order `α`:
/// `(1 − |ω(z)|)/(2α) · ((1 − |z|)/(1 + |z|))^α`.
pub fn theorem2_lower(omega_abs: f64, alpha: f64, z_abs: f64) -> Result<f64> {
    check_half_open("|omega|", omega_abs)?;
    check_half_open("|z|", z_abs)?;
    check_order(alpha)?;
    Ok((1.0 - omega_abs) / (2.0 * alpha) * ((1.0 - z_abs) / (1.0 + z_abs)).powf(alpha))
}

/// Schwarz–Pick bound `|ω(z)| ≤ k(|z| + |u|)/(1 + |u||z|)` with `u = ω(0)/k`.
pub fn schwarz_pick_dilatation_bound(u_abs: f64, k: f64, z_abs: f64) -> Result<f64> {
    check_unit("|u|", u_abs)?;
    check_unit("k", k)?;
    check_half_open("|z|", z_abs)?;
    Ok(k * (z_abs + u_abs) / (1.0 + u_abs * z_abs))
}

/// `((1−r)^{α−1}/(1+r)^{α+1}, (1+r)^{α−1}/(1−r)^{α+1})`, the range of `|h'(z)|`
/// over the universal family of order `α` at `|z| = r`.
pub fn growth_bounds_hprime(alpha: f64, z_abs: f64) -> Result<(f64, f64)> {
    check_order(alpha)?;
    check_half_open("|z|", z_abs)?;
    let (p, m) = (1.0 + z_abs, 1.0 - z_abs);
    Ok((m.powf(alpha - 1.0) / p.powf(alpha + 1.0), p.powf(alpha - 1.0) / m.powf(alpha + 1.0)))
}

/// `(1 − √(1 − k²))/k`, computed as `k/(1 + √(1 − k²))`.
fn order_increment(k: f64) -> f64 {
    k / (1.0 + ((1.0 - k) * (1.0 + k)).sqrt())
}

/// Order bound `α + (1 − √(1 − k²))/k` of the affine hull; equals `α` at `k = 0`.
pub fn affine_hull_order(alpha: f64, k: f64) -> Result<f64> {
    check_order(alpha)?;
    check_unit("k", k)?;
    Ok(alpha + order_increment(k))
}

/// `β − √(β² − 1) = 1/(β + √(β² − 1))` for `β ≥ 1`.
fn convexity_radius_of_order(beta: f64) -> f64 {
    1.0 / (beta + (beta * beta - 1.0).max(0.0).sqrt())
}

/// `R₀ = α₁ − √(α₁² − 1)` with `α₁ = α + (1 − √(1 − k²))/k`.
pub fn convexity_radius_r0(alpha: f64, q: f64) -> Result<f64> {
    check_order(alpha)?;
    let k = k_from_q(QFactor::new(q)?)?;
    if k == 0.0 {
        // Same digits as the textbook α − √(α² − 1) for analytic maps.
        return Ok(alpha - (alpha * alpha - 1.0).sqrt());
    }
    Ok(convexity_radius_of_order(alpha + order_increment(k)))
}

/// `R₀` from the literal expression
/// `α + k⁻¹ − √(k⁻² − 1) − √((α + k⁻¹ − √(k⁻² − 1))² − 1)`.
/// Kept as a cross-check of [`convexity_radius_r0`]; `k = 0` uses the limit.
pub fn convexity_radius_r0_literal(alpha: f64, q: f64) -> Result<f64> {
    check_order(alpha)?;
    let k = k_from_q(QFactor::new(q)?)?;
    if k == 0.0 {
        return Ok(alpha - (alpha * alpha - 1.0).sqrt());
    }
    let a1 = alpha + 1.0 / k - (1.0 / (k * k) - 1.0).sqrt();
    Ok(a1 - (a1 * a1 - 1.0).sqrt())
}

/// Convexity radii of `ℋ(α, Q)`: `R₀` at the origin and `R(z)` elsewhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityRadii {
    r0: f64,
}

impl ConvexityRadii {
    pub fn new(alpha: f64, q: f64) -> Result<Self> {
        Ok(Self { r0: convexity_radius_r0(alpha, q)? })
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    /// `R(z) = ½(R₀ + R₀⁻¹ − √((R₀ − R₀⁻¹)² + 4|z|²))`, rationalised to
    /// `2(1 − |z|²)/(R₀ + R₀⁻¹ + √((R₀⁻¹ − R₀)² + 4|z|²))`.
    pub fn at(&self, z_abs: f64) -> Result<f64> {
        check_half_open("|z|", z_abs)?;
        if z_abs == 0.0 {
            return Ok(self.r0);
        }
        let (r0, inv) = (self.r0, 1.0 / self.r0);
        let root = ((inv - r0).powi(2) + 4.0 * z_abs * z_abs).sqrt();
        Ok(2.0 * (1.0 - z_abs * z_abs) / (r0 + inv + root))
    }
}

pub fn convexity_radius_at(z_abs: f64, alpha: f64, q: f64) -> Result<f64> {
    ConvexityRadii::new(alpha, q)?.at(z_abs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn fin(q: f64) -> QFactor {
        QFactor::Finite(q)
    }

    /// Composite Simpson rule, independent of the adaptive integrator.
    fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn k_and_q_conversions() {
        assert_eq!(k_from_q(fin(1.0)).unwrap(), 0.0);
        assert!((k_from_q(fin(5.0 / 3.0)).unwrap() - 0.25).abs() < 1e-15);
        let QFactor::Finite(q) = q_from_k(k_from_q(fin(3.0)).unwrap()).unwrap() else { panic!() };
        assert!((q - 3.0).abs() < 1e-14);
        assert_eq!(k_from_q(QFactor::Infinite).unwrap(), 1.0);
        assert_eq!(q_from_k(1.0).unwrap(), QFactor::Infinite);
        assert!(k_from_q(fin(0.5)).is_err());
        assert!(q_from_k(1.5).is_err());
        assert!(QFactor::new(0.9).is_err());
        assert_eq!(QFactor::new(f64::INFINITY).unwrap(), QFactor::Infinite);
    }

    #[test]
    fn family_params_derive_k() {
        let p = FamilyParams::new(2.0, fin(5.0 / 3.0), 0.5).unwrap();
        assert!((p.k() - 0.25).abs() < 1e-15);
        assert!(FamilyParams::new(0.5, fin(2.0), 0.5).is_err());
        assert!(FamilyParams::new(1.0, fin(2.0), 1.5).is_err());
        assert_eq!(FamilyParams::from_k(1.0, 1.0, 0.0).unwrap().q(), QFactor::Infinite);
    }

    #[test]
    fn upper_bound_values() {
        assert_eq!(upper_bound_m(1.0, 0.25).unwrap(), 1.25);
        assert_eq!(upper_bound_m(0.0, 0.25).unwrap(), 1.125);
        assert_eq!(upper_bound_m(1.0, 1.0).unwrap(), 2.0);
        let v = upper_bound_m(0.5, 0.25).unwrap();
        let oracle = 1.0 + 0.25 * simpson(|t| (t + 0.5) / (1.0 + 0.5 * t), 0.0, 1.0, 2000);
        assert!((v - oracle).abs() < 1e-12);
        assert!((v - 1.1959011689188767).abs() < 1e-14);
    }

    #[test]
    fn upper_bound_is_continuous_across_series_switch() {
        let below = upper_bound_m(0.1 - 1e-12, 1.0).unwrap();
        let above = upper_bound_m(0.1, 1.0).unwrap();
        assert!((below - above).abs() < 1e-11);
        assert!((upper_bound_m(1e-9, 1.0).unwrap() - 1.5).abs() < 1e-8);
    }

    #[test]
    fn upper_bound_strictly_increasing() {
        for k in [0.1, 0.5, 1.0] {
            let mut prev = upper_bound_m(0.0, k).unwrap();
            for i in 1..=200 {
                let v = upper_bound_m(i as f64 / 200.0, k).unwrap();
                assert!(v > prev, "k = {k}, i = {i}");
                prev = v;
            }
        }
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(lower_bound_m(0.7, fin(1.0)).unwrap(), 1.0);
        assert_eq!(lower_bound_m(0.3, QFactor::Infinite).unwrap(), 0.0);
        // At x = 1 the integrand is the constant 1/(1 − k).
        let m = lower_bound_m(1.0, fin(5.0 / 3.0)).unwrap();
        assert!((m - 0.75).abs() < 1e-12, "{m}");
    }

    #[test]
    fn lower_bound_matches_brute_force_integral() {
        // Simpson on a graded grid t = u² … with the raw integrand (no asymptotics);
        // the endpoint values are the exact limits.
        let (x, q) = (0.6, 2.5);
        let k = (q - 1.0) / (q + 1.0);
        let integrand = |u: f64| {
            let t = u * u;
            let y = if t <= 1e-12 {
                0.0
            } else if t >= 1.0 - 1e-12 {
                1.0
            } else {
                crate::elliptic::distorted_modulus(t, q).unwrap()
            };
            2.0 * u * m_integrand(x, k, y)
        };
        let inverse = simpson(integrand, 0.0, 1.0, 20000);
        let m = lower_bound_m(x, fin(q)).unwrap();
        assert!((1.0 / inverse - m).abs() < 1e-6, "{} vs {m}", 1.0 / inverse);
    }

    #[test]
    fn lower_bound_tolerance_self_consistency() {
        for (x, q) in [(0.0, 2.0), (0.5, 5.0 / 3.0), (1.0, 6.0)] {
            let coarse = lower_bound_m_with(x, fin(q), QuadratureConfig::with_tol(1e-9)).unwrap();
            let fine = lower_bound_m_with(x, fin(q), QuadratureConfig::with_tol(5e-10)).unwrap();
            assert!((coarse.value - fine.value).abs() < 10.0 * coarse.error.max(1e-15));
        }
    }

    #[test]
    fn mori_examples() {
        assert!((mori_upper_bound_on_ratio(0.4, 1.0).unwrap() - 1.0).abs() < 1e-14);
        let m = lower_bound_m(0.5, fin(5.0 / 3.0)).unwrap();
        assert!(mori_upper_bound_on_ratio(0.5, 5.0 / 3.0).unwrap() >= 1.0 / m);
        assert!(mori_upper_bound_on_ratio(1.0, 3.0).unwrap() <= 2.0);
        assert!(mori_upper_bound_on_ratio(0.5, f64::INFINITY).is_err());
    }

    #[test]
    fn starkov_examples() {
        let b = starkov_bounds(&HarmonicMap::identity(), Complex64::new(0.0, 0.0), 1.0, 1.0).unwrap();
        assert_eq!((b.lower, b.upper), (0.5, 1.0));
        let f2 = HarmonicMap::f_n(2, 0.25).unwrap();
        let b = starkov_bounds(&f2, Complex64::new(0.0, 0.0), 2.0, 5.0 / 3.0).unwrap();
        assert!((b.lower - 0.25).abs() < 1e-15);
        assert!(b.lower <= 5.0 / 12.0 && 5.0 / 12.0 <= b.upper);
        let reversed = HarmonicMap::series(
            vec![Complex64::new(0.5, 0.0)],
            vec![Complex64::new(1.0, 0.0)],
            1.0,
        )
        .unwrap();
        assert!(matches!(
            starkov_bounds(&reversed, Complex64::new(0.1, 0.0), 1.0, 1.0),
            Err(Error::SenseReversal { .. })
        ));
    }

    #[test]
    fn theorem2_examples() {
        assert_eq!(theorem2_lower(0.0, 1.0, 0.0).unwrap(), 0.5);
        assert!((theorem2_lower(0.25, 2.0, 0.0).unwrap() - 3.0 / 16.0).abs() < 1e-15);
        assert!((theorem2_lower(0.5, 3.0, 0.0).unwrap() - 1.0 / 12.0).abs() < 1e-15);
        let a = theorem2_lower(0.2, 2.0, 0.3).unwrap();
        assert!(a < theorem2_lower(0.2, 2.0, 0.2).unwrap());
        assert!(a > theorem2_lower(0.3, 2.0, 0.3).unwrap());
        assert!(a > theorem2_lower(0.2, 2.5, 0.3).unwrap());
    }

    #[test]
    fn schwarz_pick_examples() {
        assert_eq!(schwarz_pick_dilatation_bound(0.0, 0.4, 0.0).unwrap(), 0.0);
        for r in [0.0, 0.3, 0.9] {
            assert!((schwarz_pick_dilatation_bound(1.0, 0.4, r).unwrap() - 0.4).abs() < 1e-15);
        }
        // ω(z) = z for the harmonic Koebe function: k = 1, u = 0, equality.
        for r in [0.1, 0.5, 0.95] {
            let w = HarmonicMap::HarmonicKoebe.dilatation(Complex64::new(0.0, r)).unwrap();
            assert!((w.norm() - schwarz_pick_dilatation_bound(0.0, 1.0, r).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn growth_examples() {
        assert_eq!(growth_bounds_hprime(2.0, 0.0).unwrap(), (1.0, 1.0));
        let (lo, hi) = growth_bounds_hprime(1.0, 0.5).unwrap();
        assert!((lo - 4.0 / 9.0).abs() < 1e-15 && (hi - 4.0).abs() < 1e-15);
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let h2 = HarmonicMap::h_alpha(2.0).unwrap();
        for _ in 0..50 {
            let z = Complex64::from_polar(rng.gen_range(0.0..0.95), rng.gen_range(0.0..6.3));
            let (lo, hi) = growth_bounds_hprime(2.0, z.norm()).unwrap();
            let d = h2.deriv_h(z).unwrap().norm();
            assert!(lo * (1.0 - 1e-12) <= d && d <= hi * (1.0 + 1e-12));
        }
    }

    #[test]
    fn affine_hull_order_examples() {
        assert!((affine_hull_order(2.0, 1e-12).unwrap() - 2.0).abs() < 1e-10);
        assert_eq!(affine_hull_order(2.0, 0.0).unwrap(), 2.0);
        assert!((affine_hull_order(2.0, 0.6).unwrap() - 7.0 / 3.0).abs() < 1e-15);
        for i in 0..=100 {
            assert!(affine_hull_order(1.5, i as f64 / 100.0).unwrap() <= 2.5);
        }
        assert!(affine_hull_order(1.5, 0.999).unwrap() < 2.5);
    }

    #[test]
    fn convexity_radius_examples() {
        assert_eq!(convexity_radius_r0(1.0, 1.0).unwrap(), 1.0);
        assert!((convexity_radius_r0(2.0, 1.0).unwrap() - (2.0 - 3f64.sqrt())).abs() < 1e-15);
        let a1: f64 = 6.0 - 15f64.sqrt();
        let expected = a1 - (a1 * a1 - 1.0).sqrt();
        let r0 = convexity_radius_r0(2.0, 5.0 / 3.0).unwrap();
        assert!((r0 - expected).abs() < 1e-14);
        assert!((r0 - 0.2497314209334426).abs() < 1e-14);
        let literal = convexity_radius_r0_literal(2.0, 5.0 / 3.0).unwrap();
        assert!((literal - r0).abs() < 1e-12);
    }

    #[test]
    fn convexity_radius_at_examples() {
        let radii = ConvexityRadii::new(2.0, 1.0).unwrap();
        assert_eq!(radii.at(0.0).unwrap(), radii.r0());
        let r0 = 2.0 - 3f64.sqrt();
        let direct = 0.5 * (r0 + 1.0 / r0 - ((r0 - 1.0 / r0).powi(2) + 1.0).sqrt());
        assert!((radii.at(0.5).unwrap() - direct).abs() < 1e-14);
        assert!((radii.at(0.5).unwrap() - 0.19722436226800535).abs() < 1e-14);
        for i in 0..100 {
            let r = 0.99 * i as f64 / 99.0;
            assert!(r + radii.at(r).unwrap() <= 1.0);
        }
        assert!(radii.at(1.0).is_err());
    }
}
