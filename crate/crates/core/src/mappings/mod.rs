//! Harmonic mappings `f = h + conj(g)` on the unit disk.
//!
//! A [`HarmonicMap`] is an immutable description: either one of the closed
//! form extremal families, a truncated power series, or a renormalisation
//! (Koebe transform, affine deformation, scaling) of another map. Every
//! variant exposes the analytic and co-analytic parts separately, together
//! with their derivatives, and everything else (dilatation, Jacobian,
//! directional derivatives) is derived from those.

mod descriptor;
mod families;

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

pub use descriptor::MapDescriptor;
pub use families::AnalyticFamily;

/// A point of the disk or of the image plane.
pub type ComplexPoint = Complex64;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Default radius up to which a truncated series is trusted.
pub const DEFAULT_SERIES_RADIUS: f64 = 0.95;

/// Sign of the co-analytic term in a [`HarmonicMap::ScaledCombo`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// How a Koebe transform renormalises the recentred map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KoebeNormalization {
    /// Divide by `h'(φ(0))·φ'(0)`, giving `a₁ = 1`.
    AnalyticDerivative,
    /// Divide by `∂_θ f(φ(0))·|φ'(0)|`, giving `a₁ + a₋₁ = 1`.
    #[default]
    DirectionalDerivative,
}

/// Truncated power series `h(z) = Σ aⱼ zʲ`, `g(z) = Σ bⱼ zʲ`, `j ≥ 1`.
///
/// `h[0]` is the coefficient of `z`, `h[1]` of `z²`, and so on. Evaluation is
/// refused at `|z| ≥ radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesMap {
    h: Vec<Complex64>,
    g: Vec<Complex64>,
    radius: f64,
}

impl SeriesMap {
    pub fn new(h: Vec<Complex64>, g: Vec<Complex64>, radius: f64) -> Result<Self> {
        if h.is_empty() {
            return Err(Error::Descriptor("series needs at least one analytic coefficient".into()));
        }
        if !(radius > 0.0 && radius <= 1.0) {
            return Err(domain(format!("series radius {radius} outside (0, 1]")));
        }
        if h.iter().chain(g.iter()).any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Descriptor("series coefficients must be finite".into()));
        }
        // Pad so both parts carry the same truncation order.
        let order = h.len().max(g.len());
        let mut h = h;
        let mut g = g;
        h.resize(order, ZERO);
        g.resize(order, ZERO);
        Ok(Self { h, g, radius })
    }

    pub fn h_coeffs(&self) -> &[Complex64] {
        &self.h
    }

    pub fn g_coeffs(&self) -> &[Complex64] {
        &self.g
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
        c.iter().rev().fold(ZERO, |acc, &a| (acc + a) * z)
    }

    fn horner_deriv(c: &[Complex64], z: Complex64) -> Complex64 {
        c.iter()
            .enumerate()
            .rev()
            .fold(ZERO, |acc, (j, &a)| acc * z + a * (j as f64 + 1.0))
    }
}

/// `F(z) = (f(z) + ε·conj(f(z))) / D`, with `D = 1 + ε·g'(0)` when normalised.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineDeformation {
    base: Box<HarmonicMap>,
    eps: Complex64,
    normalize: bool,
    denom: Complex64,
}

impl AffineDeformation {
    pub fn base(&self) -> &HarmonicMap {
        &self.base
    }
    pub fn eps(&self) -> Complex64 {
        self.eps
    }
    pub fn normalize(&self) -> bool {
        self.normalize
    }
}

/// `F(z) = (f(φ(z)) − f(φ(0))) / N` with `φ(z) = e^{iθ}(z + a)/(1 + āz)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KoebeTransform {
    base: Box<HarmonicMap>,
    a: Complex64,
    theta: f64,
    normalization: KoebeNormalization,
    norm: Complex64,
    offset: (Complex64, Complex64),
}

impl KoebeTransform {
    pub fn base(&self) -> &HarmonicMap {
        &self.base
    }
    pub fn a(&self) -> Complex64 {
        self.a
    }
    pub fn theta(&self) -> f64 {
        self.theta
    }
    pub fn normalization(&self) -> KoebeNormalization {
        self.normalization
    }
    /// The constant `N` the recentred map is divided by.
    pub fn normalizer(&self) -> Complex64 {
        self.norm
    }

    fn automorphism(&self, z: Complex64) -> (Complex64, Complex64) {
        let rot = Complex64::from_polar(1.0, self.theta);
        let den = ONE + self.a.conj() * z;
        let w = rot * (z + self.a) / den;
        let dw = rot * (1.0 - self.a.norm_sqr()) / (den * den);
        (w, dw)
    }
}

/// A harmonic mapping `f = h + conj(g)` of the unit disk.
#[derive(Debug, Clone, PartialEq)]
pub enum HarmonicMap {
    /// Pommerenke's `k_n`, an analytic member of the universal family of order `n`.
    PommerenkeKn { n: u32 },
    /// `h_α`, an analytic member of the universal family of order `α`.
    HAlpha { alpha: f64 },
    /// The harmonic Koebe function, mapping onto `ℂ ∖ (−∞, −1/6]`.
    HarmonicKoebe,
    Series(SeriesMap),
    Affine(AffineDeformation),
    /// `(B + s·k·conj(B)) / (1 + s·k)` for an analytic `B` and `s = ±1`;
    /// without normalisation the divisor is 1.
    ScaledCombo { base: AnalyticFamily, k: f64, sign: Sign, normalize: bool },
    Koebe(KoebeTransform),
    /// `c·f`.
    Scaled { base: Box<HarmonicMap>, factor: Complex64 },
    /// The analytic part `h` of another map, as a map in its own right.
    AnalyticPart(Box<HarmonicMap>),
}

/// First-coefficient normalisations a map satisfies at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormalizationTags {
    /// `a₁ = h'(0) = 1`.
    pub leading_one: bool,
    /// `a₁ + a₋₁ = h'(0) + conj(g'(0)) = 1`.
    pub sum_one: bool,
}

/// Resolution of the grid behind [`HarmonicMap::qc_constant`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QcGrid {
    pub n_radii: usize,
    pub n_angles: usize,
    pub r_max: f64,
}

impl Default for QcGrid {
    fn default() -> Self {
        Self { n_radii: 100, n_angles: 256, r_max: 0.999 }
    }
}

/// `sup |ω|` over a grid, or exactly for constant-dilatation maps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QcEstimate {
    pub value: f64,
    pub exact: bool,
    pub grid: QcGrid,
}

impl HarmonicMap {
    pub fn identity() -> Self {
        HarmonicMap::Series(SeriesMap { h: vec![ONE], g: vec![ZERO], radius: 1.0 })
    }

    pub fn kn(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(domain("k_n needs n ≥ 1"));
        }
        Ok(HarmonicMap::PommerenkeKn { n })
    }

    pub fn h_alpha(alpha: f64) -> Result<Self> {
        if !(alpha >= 1.0) || !alpha.is_finite() {
            return Err(domain(format!("h_alpha needs finite alpha ≥ 1, got {alpha}")));
        }
        Ok(HarmonicMap::HAlpha { alpha })
    }

    pub fn series(h: Vec<Complex64>, g: Vec<Complex64>, radius: f64) -> Result<Self> {
        Ok(HarmonicMap::Series(SeriesMap::new(h, g, radius)?))
    }

    pub fn scaled_combo(base: AnalyticFamily, k: f64, sign: Sign, normalize: bool) -> Result<Self> {
        if !(0.0..1.0).contains(&k) {
            return Err(domain(format!("combination coefficient k = {k} outside [0, 1)")));
        }
        match base {
            AnalyticFamily::PommerenkeKn { n } if n == 0 => return Err(domain("k_n needs n ≥ 1")),
            AnalyticFamily::HAlpha { alpha } if !(alpha >= 1.0) || !alpha.is_finite() => {
                return Err(domain(format!("h_alpha needs alpha ≥ 1, got {alpha}")))
            }
            _ => {}
        }
        Ok(HarmonicMap::ScaledCombo { base, k, sign, normalize })
    }

    /// `f_n = (k_n − k·conj(k_n)) / (1 − k)`.
    pub fn f_n(n: u32, k: f64) -> Result<Self> {
        Self::scaled_combo(AnalyticFamily::PommerenkeKn { n }, k, Sign::Minus, true)
    }

    /// `(h_α + k·conj(h_α)) / (1 + k)`.
    pub fn lower_extremal(alpha: f64, k: f64) -> Result<Self> {
        Self::scaled_combo(AnalyticFamily::HAlpha { alpha }, k, Sign::Plus, true)
    }

    /// `p = h_α + k·conj(h_α)`, unnormalised.
    pub fn affine_extremal(alpha: f64, k: f64) -> Result<Self> {
        Self::scaled_combo(AnalyticFamily::HAlpha { alpha }, k, Sign::Plus, false)
    }

    /// `K − b·conj(K)` for the harmonic Koebe function `K`.
    pub fn affine_koebe(b: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&b) {
            return Err(domain(format!("affine Koebe parameter b = {b} outside [0, 1)")));
        }
        HarmonicMap::HarmonicKoebe.affine_transform(Complex64::new(-b, 0.0))
    }

    pub fn scaled(self, factor: Complex64) -> Result<Self> {
        if factor == ZERO || !factor.re.is_finite() || !factor.im.is_finite() {
            return Err(Error::Degenerate("scale factor must be finite and non-zero".into()));
        }
        Ok(HarmonicMap::Scaled { base: Box::new(self), factor })
    }

    pub fn analytic_part(&self) -> Self {
        match self {
            HarmonicMap::PommerenkeKn { .. } | HarmonicMap::HAlpha { .. } => self.clone(),
            HarmonicMap::AnalyticPart(_) => self.clone(),
            _ => HarmonicMap::AnalyticPart(Box::new(self.clone())),
        }
    }

    /// Radius of the disk on which the map may be evaluated.
    pub fn domain_radius(&self) -> f64 {
        match self {
            HarmonicMap::Series(s) => s.radius,
            HarmonicMap::Affine(a) => a.base.domain_radius(),
            HarmonicMap::Scaled { base, .. } | HarmonicMap::AnalyticPart(base) => {
                base.domain_radius()
            }
            _ => 1.0,
        }
    }

    fn check_domain(&self, z: Complex64) -> Result<()> {
        let r = self.domain_radius();
        if !(z.norm() < r) || !z.re.is_finite() || !z.im.is_finite() {
            return Err(domain(format!("|z| = {} is not inside the domain radius {r}", z.norm())));
        }
        Ok(())
    }

    /// `(h(z), g(z))`.
    pub fn parts(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        self.check_domain(z)?;
        Ok(match self {
            HarmonicMap::PommerenkeKn { n } => (families::kn_value(*n, z), ZERO),
            HarmonicMap::HAlpha { alpha } => (families::h_alpha_value(*alpha, z), ZERO),
            HarmonicMap::HarmonicKoebe => families::koebe_values(z),
            HarmonicMap::Series(s) => (SeriesMap::horner(&s.h, z), SeriesMap::horner(&s.g, z)),
            HarmonicMap::Affine(a) => {
                let (h, g) = a.base.parts(z)?;
                ((h + a.eps * g) / a.denom, (g + a.eps.conj() * h) / a.denom.conj())
            }
            HarmonicMap::ScaledCombo { base, k, sign, normalize } => {
                let b = base.value(z);
                let s = sign.as_f64();
                let div = if *normalize { 1.0 + s * k } else { 1.0 };
                (b / div, b * (s * k / div))
            }
            HarmonicMap::Koebe(t) => {
                let (w, _) = t.automorphism(z);
                let (h, g) = t.base.parts(w)?;
                ((h - t.offset.0) / t.norm, (g - t.offset.1) / t.norm.conj())
            }
            HarmonicMap::Scaled { base, factor } => {
                let (h, g) = base.parts(z)?;
                (h * factor, g * factor.conj())
            }
            HarmonicMap::AnalyticPart(base) => (base.parts(z)?.0, ZERO),
        })
    }

    /// `(h'(z), g'(z))`.
    pub fn derivs(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        self.check_domain(z)?;
        Ok(match self {
            HarmonicMap::PommerenkeKn { n } => (families::kn_deriv(*n, z), ZERO),
            HarmonicMap::HAlpha { alpha } => (families::h_alpha_deriv(*alpha, z), ZERO),
            HarmonicMap::HarmonicKoebe => families::koebe_derivs(z),
            HarmonicMap::Series(s) => {
                (SeriesMap::horner_deriv(&s.h, z), SeriesMap::horner_deriv(&s.g, z))
            }
            HarmonicMap::Affine(a) => {
                let (dh, dg) = a.base.derivs(z)?;
                ((dh + a.eps * dg) / a.denom, (dg + a.eps.conj() * dh) / a.denom.conj())
            }
            HarmonicMap::ScaledCombo { base, k, sign, normalize } => {
                let b = base.deriv(z);
                let s = sign.as_f64();
                let div = if *normalize { 1.0 + s * k } else { 1.0 };
                (b / div, b * (s * k / div))
            }
            HarmonicMap::Koebe(t) => {
                let (w, dw) = t.automorphism(z);
                let (dh, dg) = t.base.derivs(w)?;
                (dh * dw / t.norm, dg * dw / t.norm.conj())
            }
            HarmonicMap::Scaled { base, factor } => {
                let (dh, dg) = base.derivs(z)?;
                (dh * factor, dg * factor.conj())
            }
            HarmonicMap::AnalyticPart(base) => (base.derivs(z)?.0, ZERO),
        })
    }

    /// `f(z) = h(z) + conj(g(z))`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let (h, g) = self.parts(z)?;
        Ok(h + g.conj())
    }

    pub fn deriv_h(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.derivs(z)?.0)
    }

    pub fn deriv_g(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.derivs(z)?.1)
    }

    /// Complex dilatation `ω = g'/h'`.
    pub fn dilatation(&self, z: Complex64) -> Result<Complex64> {
        let (dh, dg) = self.derivs(z)?;
        if dh == ZERO {
            return Err(Error::Degenerate(format!("h'(z) vanishes at z = {z}")));
        }
        Ok(dg / dh)
    }

    /// `J_f = |h'|² − |g'|²`.
    pub fn jacobian(&self, z: Complex64) -> Result<f64> {
        let (dh, dg) = self.derivs(z)?;
        Ok(dh.norm_sqr() - dg.norm_sqr())
    }

    /// `∂_θ f(z) = h'(z)e^{iθ} + conj(g'(z)e^{iθ})`.
    pub fn directional_derivative(&self, z: Complex64, theta: f64) -> Result<Complex64> {
        let (dh, dg) = self.derivs(z)?;
        let e = Complex64::from_polar(1.0, theta);
        Ok(dh * e + (dg * e).conj())
    }

    /// Which first-coefficient normalisations hold, to 1e-12.
    pub fn normalization_tags(&self) -> Result<NormalizationTags> {
        let (dh, dg) = self.derivs(ZERO)?;
        Ok(NormalizationTags {
            leading_one: (dh - ONE).norm() < 1e-12,
            sum_one: (dh + dg.conj() - ONE).norm() < 1e-12,
        })
    }

    /// The dilatation, if it is constant on the whole disk.
    pub fn constant_dilatation(&self) -> Option<Complex64> {
        match self {
            HarmonicMap::PommerenkeKn { .. }
            | HarmonicMap::HAlpha { .. }
            | HarmonicMap::AnalyticPart(_) => Some(ZERO),
            HarmonicMap::Series(s) if s.g.iter().all(|c| *c == ZERO) => Some(ZERO),
            HarmonicMap::Series(s) if s.h.len() == 1 => Some(s.g[0] / s.h[0]),
            HarmonicMap::Series(_) | HarmonicMap::HarmonicKoebe => None,
            HarmonicMap::ScaledCombo { k, sign, .. } => Some(Complex64::new(sign.as_f64() * k, 0.0)),
            HarmonicMap::Scaled { base, factor } => {
                base.constant_dilatation().map(|w| w * factor.conj() / factor)
            }
            HarmonicMap::Affine(a) => a.base.constant_dilatation().map(|w| {
                (w + a.eps.conj()) / (ONE + a.eps * w) * a.denom / a.denom.conj()
            }),
            HarmonicMap::Koebe(t) => {
                t.base.constant_dilatation().map(|w| w * t.norm / t.norm.conj())
            }
        }
    }

    /// `sup |ω|`: exact for constant-dilatation maps, otherwise the maximum
    /// over a polar grid of radii `r_max·i/n_radii` and `n_angles` angles.
    pub fn qc_constant(&self, grid: QcGrid) -> Result<QcEstimate> {
        if let Some(w) = self.constant_dilatation() {
            return Ok(QcEstimate { value: w.norm(), exact: true, grid });
        }
        if grid.n_radii == 0 || grid.n_angles == 0 || !(grid.r_max < self.domain_radius()) {
            return Err(domain("qc grid needs positive sizes and r_max inside the domain"));
        }
        let mut sup = self.dilatation(ZERO)?.norm();
        for i in 1..=grid.n_radii {
            let r = grid.r_max * i as f64 / grid.n_radii as f64;
            for j in 0..grid.n_angles {
                let z = Complex64::from_polar(r, TAU * j as f64 / grid.n_angles as f64);
                sup = sup.max(self.dilatation(z)?.norm());
            }
        }
        Ok(QcEstimate { value: sup, exact: false, grid })
    }

    /// Precompose with `φ(z) = e^{iθ}(z + a)/(1 + āz)`, recentre and renormalise.
    pub fn koebe_transform(
        &self,
        a: Complex64,
        theta: f64,
        normalization: KoebeNormalization,
    ) -> Result<Self> {
        if !(a.norm() < 1.0) {
            return Err(domain(format!("automorphism parameter |a| = {} must be < 1", a.norm())));
        }
        if self.domain_radius() < 1.0 {
            return Err(domain("Koebe transforms need a map defined on the whole disk"));
        }
        let mut t = KoebeTransform {
            base: Box::new(self.clone()),
            a,
            theta,
            normalization,
            norm: ONE,
            offset: (ZERO, ZERO),
        };
        let (p, dp) = t.automorphism(ZERO);
        let (dh, dg) = self.derivs(p)?;
        t.norm = match normalization {
            KoebeNormalization::AnalyticDerivative => dh * dp,
            KoebeNormalization::DirectionalDerivative => {
                let e = Complex64::from_polar(1.0, theta);
                (dh * e + (dg * e).conj()) * dp.norm()
            }
        };
        if !(t.norm.norm() > 0.0) || !t.norm.re.is_finite() {
            return Err(Error::Degenerate("Koebe normaliser vanishes".into()));
        }
        t.offset = self.parts(p)?;
        Ok(HarmonicMap::Koebe(t))
    }

    /// `(f + ε·conj(f)) / (1 + ε·g'(0))`.
    pub fn affine_transform(&self, eps: Complex64) -> Result<Self> {
        self.affine_transform_with(eps, true)
    }

    /// [`affine_transform`](Self::affine_transform) with the renormalisation optional.
    pub fn affine_transform_with(&self, eps: Complex64, normalize: bool) -> Result<Self> {
        if !(eps.norm() < 1.0) {
            return Err(domain(format!("affine parameter |eps| = {} must be < 1", eps.norm())));
        }
        let denom = if normalize {
            ONE + eps * self.derivs(ZERO)?.1
        } else {
            ONE
        };
        if denom.norm() < 1e-300 {
            return Err(Error::Degenerate("affine denominator 1 + eps·g'(0) vanishes".into()));
        }
        Ok(HarmonicMap::Affine(AffineDeformation {
            base: Box::new(self.clone()),
            eps,
            normalize,
            denom,
        }))
    }

    /// Undo the recentring of a Koebe transform by the inverse automorphism,
    /// `φ⁻¹(w) = e^{−iθ}(w − a e^{iθ})/(1 − ā e^{−iθ} w)`.
    pub fn inverse_automorphism(a: Complex64, theta: f64) -> (Complex64, f64) {
        (-a * Complex64::from_polar(1.0, theta), -theta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn closed_form_maps() -> Vec<HarmonicMap> {
        vec![
            HarmonicMap::kn(1).unwrap(),
            HarmonicMap::kn(2).unwrap(),
            HarmonicMap::kn(3).unwrap(),
            HarmonicMap::h_alpha(1.0).unwrap(),
            HarmonicMap::h_alpha(2.0).unwrap(),
            HarmonicMap::h_alpha(2.7).unwrap(),
            HarmonicMap::HarmonicKoebe,
            HarmonicMap::f_n(2, 0.25).unwrap(),
            HarmonicMap::lower_extremal(1.5, 0.4).unwrap(),
            HarmonicMap::affine_koebe(0.5).unwrap(),
            HarmonicMap::h_alpha(2.0).unwrap().affine_transform(c(0.2, -0.3)).unwrap(),
            HarmonicMap::HarmonicKoebe
                .koebe_transform(c(0.3, 0.2), 0.7, KoebeNormalization::DirectionalDerivative)
                .unwrap(),
            HarmonicMap::h_alpha(2.0).unwrap().scaled(c(0.8, 0.0)).unwrap(),
            HarmonicMap::f_n(2, 0.25).unwrap().analytic_part(),
        ]
    }

    #[test]
    fn derivatives_match_central_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let step = 1e-6;
        for map in closed_form_maps() {
            for _ in 0..50 {
                let z = Complex64::from_polar(rng.gen_range(0.0..0.8), rng.gen_range(0.0..TAU));
                let (dh, dg) = map.derivs(z).unwrap();
                let (hp, gp) = map.parts(z + step).unwrap();
                let (hm, gm) = map.parts(z - step).unwrap();
                let fd_h = (hp - hm) / (2.0 * step);
                let fd_g = (gp - gm) / (2.0 * step);
                let scale = dh.norm().max(1.0);
                assert!((fd_h - dh).norm() < 1e-8 * scale, "{map:?} at {z}: {fd_h} vs {dh}");
                assert!((fd_g - dg).norm() < 1e-8 * scale, "{map:?} at {z}: {fd_g} vs {dg}");
            }
        }
    }

    #[test]
    fn normalisation_at_origin() {
        for map in closed_form_maps() {
            assert!(map.eval(ZERO).unwrap().norm() < 1e-15, "{map:?}");
        }
        assert!(HarmonicMap::kn(3).unwrap().normalization_tags().unwrap().leading_one);
        assert!(HarmonicMap::HarmonicKoebe.normalization_tags().unwrap().leading_one);
        let tags = HarmonicMap::f_n(2, 0.25).unwrap().normalization_tags().unwrap();
        assert!(tags.sum_one && !tags.leading_one);
        let tags = HarmonicMap::lower_extremal(2.0, 0.25).unwrap().normalization_tags().unwrap();
        assert!(tags.sum_one && !tags.leading_one);
    }

    #[test]
    fn eval_examples() {
        let h1 = HarmonicMap::h_alpha(1.0).unwrap();
        assert_eq!(h1.eval(ZERO).unwrap(), ZERO);
        assert!((h1.eval(c(0.5, 0.0)).unwrap() - c(0.4, 0.2)).norm() < 1e-15);
        let k = HarmonicMap::HarmonicKoebe.eval(c(0.5, 0.0)).unwrap();
        assert!((k - c(13.0 / 3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn derivative_examples() {
        let k2 = HarmonicMap::kn(2).unwrap();
        let z = c(0.3, 0.0);
        let i = c(0.0, 1.0);
        let expected = (ONE - i * 0.3) / (ONE + i * 0.3).powi(3);
        assert!((k2.deriv_h(z).unwrap() - expected).norm() < 1e-15);
        assert_eq!(HarmonicMap::kn(3).unwrap().deriv_h(ZERO).unwrap(), ONE);
        let p = HarmonicMap::lower_extremal(2.0, 0.25).unwrap();
        for z in [c(0.1, 0.2), c(-0.5, 0.3)] {
            let (dh, dg) = p.derivs(z).unwrap();
            assert!((dg - dh * 0.25).norm() < 1e-15);
        }
    }

    #[test]
    fn dilatation_examples() {
        let f = HarmonicMap::f_n(2, 0.25).unwrap();
        for z in [c(0.0, 0.0), c(0.4, -0.2), c(-0.7, 0.1)] {
            assert!((f.dilatation(z).unwrap() - c(-0.25, 0.0)).norm() < 1e-15);
        }
        let z = c(0.3, 0.1);
        assert!((HarmonicMap::HarmonicKoebe.dilatation(z).unwrap() - z).norm() < 1e-15);
        let id = HarmonicMap::series(vec![ONE], vec![ZERO], 0.95).unwrap();
        assert_eq!(id.dilatation(z).unwrap(), ZERO);
    }

    #[test]
    fn jacobian_examples() {
        let id = HarmonicMap::identity();
        assert_eq!(id.jacobian(c(0.3, -0.4)).unwrap(), 1.0);
        let f = HarmonicMap::f_n(2, 0.25).unwrap();
        assert!((f.jacobian(ZERO).unwrap() - 5.0 / 3.0).abs() < 1e-14);
        let z = c(0.9, 0.0);
        let koebe = HarmonicMap::HarmonicKoebe;
        let dh = koebe.deriv_h(z).unwrap();
        let j = koebe.jacobian(z).unwrap();
        assert!(j > 0.0);
        assert!((j - dh.norm_sqr() * (1.0 - 0.81)).abs() < 1e-10 * j);
    }

    #[test]
    fn directional_derivative_range() {
        let id = HarmonicMap::identity();
        for t in [0.0, 1.0, 2.5] {
            let d = id.directional_derivative(c(0.2, 0.1), t).unwrap();
            assert!((d - Complex64::from_polar(1.0, t)).norm() < 1e-15);
            let d = HarmonicMap::HarmonicKoebe.directional_derivative(ZERO, t).unwrap();
            assert!((d - Complex64::from_polar(1.0, t)).norm() < 1e-15);
        }
        let p = HarmonicMap::lower_extremal(2.0, 0.25).unwrap();
        let z = c(0.2, 0.0);
        let (dh, dg) = p.derivs(z).unwrap();
        let spread = dh.norm() - dg.norm();
        let min = (0..3600)
            .map(|j| p.directional_derivative(z, TAU * j as f64 / 3600.0).unwrap().norm())
            .fold(f64::INFINITY, f64::min);
        assert!(min >= spread - 1e-12 && min - spread < 1e-5);
        // The minimum sits where h'e^{iθ} and conj(g'e^{iθ}) point in opposite directions.
        let theta = 0.5 * (std::f64::consts::PI - dg.arg() - dh.arg());
        let at = p.directional_derivative(z, theta).unwrap().norm();
        assert!((at - spread).abs() < 1e-12);
    }

    fn grid_points() -> Vec<Complex64> {
        (0..10)
            .flat_map(|i| {
                (0..10).map(move |j| Complex64::from_polar(0.85 * i as f64 / 9.0, TAU * j as f64 / 10.0))
            })
            .collect()
    }

    #[test]
    fn koebe_identity_automorphism() {
        let f = HarmonicMap::h_alpha(2.0).unwrap();
        let t = f.koebe_transform(ZERO, 0.0, KoebeNormalization::AnalyticDerivative).unwrap();
        for z in grid_points() {
            assert!((t.eval(z).unwrap() - f.eval(z).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn koebe_group_law() {
        let maps = [
            HarmonicMap::h_alpha(2.0).unwrap(),
            HarmonicMap::HarmonicKoebe,
            HarmonicMap::kn(3).unwrap(),
        ];
        let (a, theta) = (c(0.35, -0.2), 0.9);
        for f in maps {
            let t = f.koebe_transform(a, theta, KoebeNormalization::AnalyticDerivative).unwrap();
            let (b, phi) = HarmonicMap::inverse_automorphism(a, theta);
            let back = t.koebe_transform(b, phi, KoebeNormalization::AnalyticDerivative).unwrap();
            for z in grid_points() {
                assert!((back.eval(z).unwrap() - f.eval(z).unwrap()).norm() < 1e-9, "{z}");
            }
        }
    }

    #[test]
    fn koebe_directional_normalisation_sums_to_one() {
        let f = HarmonicMap::f_n(2, 0.25).unwrap();
        let t = f.koebe_transform(c(0.4, 0.0), 0.3, KoebeNormalization::DirectionalDerivative).unwrap();
        assert!(t.normalization_tags().unwrap().sum_one);
        assert!(t.eval(ZERO).unwrap().norm() < 1e-15);
        let w = t.dilatation(ZERO).unwrap();
        assert!((w.norm() - 0.25).abs() < 1e-14);
        let t = f.koebe_transform(c(0.4, 0.0), 0.0, KoebeNormalization::AnalyticDerivative).unwrap();
        assert!((t.dilatation(ZERO).unwrap().norm() - 0.25).abs() < 1e-14);
    }

    #[test]
    fn affine_examples() {
        let f = HarmonicMap::lower_extremal(2.0, 0.25).unwrap();
        let same = f.affine_transform(ZERO).unwrap();
        for z in grid_points() {
            assert!((same.eval(z).unwrap() - f.eval(z).unwrap()).norm() < 1e-15);
        }
        let k = HarmonicMap::affine_koebe(0.5).unwrap();
        assert!((k.dilatation(ZERO).unwrap() - c(-0.5, 0.0)).norm() < 1e-15);
        let id = HarmonicMap::identity().affine_transform(c(0.5, 0.0)).unwrap();
        assert!((id.jacobian(c(0.3, 0.3)).unwrap() - 0.75).abs() < 1e-15);
    }

    #[test]
    fn affine_dilatation_is_a_mobius_image() {
        let base = HarmonicMap::HarmonicKoebe.koebe_transform(
            c(0.2, 0.1),
            0.0,
            KoebeNormalization::AnalyticDerivative,
        )
        .unwrap();
        let eps = c(0.3, 0.4);
        let f = base.affine_transform(eps).unwrap();
        let HarmonicMap::Affine(a) = &f else { unreachable!() };
        let rot = a.denom / a.denom.conj();
        for z in grid_points() {
            let w = base.dilatation(z).unwrap();
            let expected = (w + eps.conj()) / (ONE + eps * w) * rot;
            assert!((f.dilatation(z).unwrap() - expected).norm() < 1e-12);
            assert!(f.jacobian(z).unwrap() > 0.0);
        }
        assert!(f.normalization_tags().unwrap().leading_one);
    }

    #[test]
    fn affine_rejects_bad_parameters() {
        assert!(HarmonicMap::identity().affine_transform(c(1.0, 0.0)).is_err());
        // g'(0) = 1/ε̄-like cancellation: 1 + ε·g'(0) = 0.
        let m = HarmonicMap::series(vec![ONE], vec![c(-2.0, 0.0)], 1.0).unwrap();
        assert!(matches!(m.affine_transform(c(0.5, 0.0)), Err(Error::Degenerate(_))));
    }

    #[test]
    fn qc_constant_examples() {
        let grid = QcGrid::default();
        let q = HarmonicMap::f_n(2, 0.25).unwrap().qc_constant(grid).unwrap();
        assert_eq!((q.value, q.exact), (0.25, true));
        let q = HarmonicMap::lower_extremal(2.0, 0.25).unwrap().qc_constant(grid).unwrap();
        assert_eq!((q.value, q.exact), (0.25, true));
        assert_eq!(HarmonicMap::identity().qc_constant(grid).unwrap().value, 0.0);
        let q = HarmonicMap::HarmonicKoebe.qc_constant(grid).unwrap();
        assert!(!q.exact);
        assert!((q.value - 0.999).abs() < 1e-12);
    }

    #[test]
    fn lewy_predicate_on_dense_grid() {
        for map in closed_form_maps() {
            for i in 0..40 {
                for j in 0..64 {
                    let z = Complex64::from_polar(0.98 * i as f64 / 39.0, TAU * j as f64 / 64.0);
                    assert!(map.jacobian(z).unwrap() > 0.0, "{map:?} at {z}");
                }
            }
        }
    }

    #[test]
    fn domain_errors() {
        let s = HarmonicMap::series(vec![ONE, c(0.1, 0.0)], vec![], DEFAULT_SERIES_RADIUS).unwrap();
        assert!(s.eval(c(0.96, 0.0)).is_err());
        assert!(s.eval(c(0.9, 0.0)).is_ok());
        assert!(HarmonicMap::HarmonicKoebe.eval(c(1.0, 0.0)).is_err());
        assert!(HarmonicMap::h_alpha(0.5).is_err());
        assert!(HarmonicMap::kn(0).is_err());
        assert!(HarmonicMap::identity().koebe_transform(c(1.0, 0.0), 0.0, Default::default()).is_err());
    }

    #[test]
    fn series_pads_to_common_order() {
        let HarmonicMap::Series(s) =
            HarmonicMap::series(vec![ONE], vec![ZERO, c(0.2, 0.0), c(0.1, 0.0)], 0.9).unwrap()
        else {
            unreachable!()
        };
        assert_eq!(s.h_coeffs().len(), s.g_coeffs().len());
    }
}
