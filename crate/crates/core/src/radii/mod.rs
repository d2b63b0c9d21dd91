//! The univalent-disk radius `d_f(z₀)`.
//!
//! Three estimators are available:
//!
//! * [`analytic_radius`] returns the exact value at the origin for the
//!   extremal families;
//! * [`univalent_disk_radius`] sweeps image directions and lifts each ray
//!   back to the disk (see [`ray_lift`]), taking the shortest escape length;
//! * [`boundary_distance`] measures `min |f(e^{iθ}) − f(z₀)|`, which equals
//!   `d_f(z₀)` for univalent maps with a continuous boundary extension.
//!
//! The ray-lift estimate equals `d_f(z₀)` whenever the shortest escaping ray
//! realises the radius of the largest univalent disk. This holds for the
//! univalent maps the crate is tested on; for general locally univalent maps
//! it is an assumption rather than a theorem.

mod raylift;

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::mappings::{AffineDeformation, AnalyticFamily, ComplexPoint, HarmonicMap};

pub use raylift::{ray_lift, RayLift, RayLiftConfig, RayStatus};

const ORIGIN: ComplexPoint = ComplexPoint { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Analytic,
    RayLift,
    BoundaryDistance,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusEstimate {
    pub value: f64,
    pub method: Method,
    /// Estimated absolute error.
    pub error: f64,
    pub directions_used: usize,
    /// Image direction (or boundary angle) of the minimum, when there is one.
    pub direction: Option<f64>,
    /// No ray escaped: `value` is only a lower bound.
    pub lower_bound_only: bool,
}

impl RadiusEstimate {
    fn exact(value: f64) -> Self {
        Self {
            value,
            method: Method::Analytic,
            error: 0.0,
            directions_used: 0,
            direction: None,
            lower_bound_only: false,
        }
    }
}

/// Settings for the direction sweep of [`univalent_disk_radius`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub n_directions: usize,
    /// Golden-section search around the best grid direction.
    pub refine: bool,
    pub angular_tol: f64,
    pub ray: RayLiftConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { n_directions: 720, refine: true, angular_tol: 1e-5, ray: RayLiftConfig::default() }
    }
}

impl SweepConfig {
    pub fn with_directions(n_directions: usize, refine: bool) -> Self {
        Self { n_directions, refine, ..Self::default() }
    }
}

/// Exact `d_f(0)` for the extremal families.
///
/// | map | `d_f(0)` |
/// |---|---|
/// | `k_n` | `1/(2n)` |
/// | `h_α` | `1/(2α)` |
/// | `(B + s·k·conj B)/(1 + s·k)` | `d_B(0)·(1 − s·k)/(1 + s·k)` |
/// | harmonic Koebe | `1/6` |
/// | `(K + ε·conj K)` | `|1 + ε|/6` |
/// | `c·f` | `|c|·d_f(0)` |
/// | `a·z + b·conj(z)` on `|z| < ρ` | `ρ(|a| − |b|)` |
///
/// Other maps give [`Error::Unsupported`]; use the ray-lift estimator for them.
pub fn analytic_radius(map: &HarmonicMap) -> Result<RadiusEstimate> {
    analytic_value(map).map(RadiusEstimate::exact)
}

fn family_radius(base: &AnalyticFamily) -> f64 {
    1.0 / (2.0 * base.order())
}

fn analytic_value(map: &HarmonicMap) -> Result<f64> {
    let unsupported = || Error::Unsupported(format!("no closed-form radius for {}", variant_name(map)));
    match map {
        HarmonicMap::PommerenkeKn { n } => Ok(1.0 / (2.0 * *n as f64)),
        HarmonicMap::HAlpha { alpha } => Ok(1.0 / (2.0 * alpha)),
        HarmonicMap::HarmonicKoebe => Ok(1.0 / 6.0),
        HarmonicMap::ScaledCombo { base, k, sign, normalize } => {
            let s = sign.as_f64();
            let div = if *normalize { 1.0 + s * k } else { 1.0 };
            Ok(family_radius(base) * (1.0 - s * k) / div)
        }
        HarmonicMap::Scaled { base, factor } => Ok(factor.norm() * analytic_value(base)?),
        HarmonicMap::Affine(a) if matches!(a.base(), HarmonicMap::HarmonicKoebe) => {
            Ok((1.0 + a.eps()).norm() / (6.0 * a_denom_norm(a)))
        }
        HarmonicMap::Series(s) if s.h_coeffs().len() == 1 => {
            let spread = s.h_coeffs()[0].norm() - s.g_coeffs()[0].norm();
            if spread <= 0.0 {
                return Err(Error::SenseReversal { re: 0.0, im: 0.0 });
            }
            Ok(s.radius() * spread)
        }
        HarmonicMap::AnalyticPart(inner) => match inner.as_ref() {
            HarmonicMap::PommerenkeKn { .. } | HarmonicMap::HAlpha { .. } => analytic_value(inner),
            HarmonicMap::ScaledCombo { base, k, sign, normalize } => {
                let div = if *normalize { 1.0 + sign.as_f64() * k } else { 1.0 };
                Ok(family_radius(base) / div)
            }
            HarmonicMap::Scaled { base, factor } => {
                Ok(factor.norm() * analytic_value(&base.analytic_part())?)
            }
            HarmonicMap::Series(s) if s.h_coeffs().len() == 1 => {
                Ok(s.radius() * s.h_coeffs()[0].norm())
            }
            _ => Err(unsupported()),
        },
        _ => Err(unsupported()),
    }
}

fn a_denom_norm(a: &AffineDeformation) -> f64 {
    if a.normalize() {
        let (_, dg) = a.base().derivs(ORIGIN).unwrap_or_default();
        (1.0 + a.eps() * dg).norm()
    } else {
        1.0
    }
}

fn variant_name(map: &HarmonicMap) -> &'static str {
    match map {
        HarmonicMap::PommerenkeKn { .. } => "pommerenke_kn",
        HarmonicMap::HAlpha { .. } => "h_alpha",
        HarmonicMap::HarmonicKoebe => "harmonic_koebe",
        HarmonicMap::Series(_) => "series",
        HarmonicMap::Affine(_) => "affine",
        HarmonicMap::ScaledCombo { .. } => "scaled_combo",
        HarmonicMap::Koebe(_) => "koebe",
        HarmonicMap::Scaled { .. } => "scaled",
        HarmonicMap::AnalyticPart(_) => "analytic_part",
    }
}

/// `|h'(z)|(1 − |z|²)`.
pub fn conformal_radius(map: &HarmonicMap, z: ComplexPoint) -> Result<f64> {
    if !(z.norm() < 1.0) {
        return Err(domain(format!("|z| = {} must be below 1", z.norm())));
    }
    Ok(map.deriv_h(z)?.norm() * (1.0 - z.norm_sqr()))
}

/// `|h'(z)|(1 − |z|²)/(2α)`, a lower bound on `d_h(z)` in the universal family of order `α`.
pub fn pommerenke_lower(map: &HarmonicMap, z: ComplexPoint, alpha: f64) -> Result<f64> {
    if !(alpha >= 1.0) {
        return Err(domain(format!("order alpha = {alpha} must be at least 1")));
    }
    Ok(conformal_radius(map, z)? / (2.0 * alpha))
}

fn lift_all(
    map: &HarmonicMap,
    z0: ComplexPoint,
    directions: &[f64],
    ray: &RayLiftConfig,
) -> Result<Vec<RayLift>> {
    let rays = directions
        .par_iter()
        .map(|&psi| ray_lift(map, z0, psi, ray))
        .collect::<Result<Vec<_>>>()?;
    if let Some(r) = rays.iter().find(|r| r.status == RayStatus::Singular) {
        return Err(Error::Singular(format!(
            "ray in direction {} met J_f <= 0 after length {}",
            r.direction, r.escape_length
        )));
    }
    Ok(rays)
}

/// A boundary point of the disk and its image as seen from `f(z₀)`.
#[derive(Debug, Clone, Copy)]
struct BoundaryTarget {
    /// Image direction from `f(z₀)`.
    psi: f64,
    point: ComplexPoint,
    distance: f64,
}

impl BoundaryTarget {
    fn new(map: &HarmonicMap, w0: ComplexPoint, point: ComplexPoint) -> Option<Self> {
        let d = map.eval(point).ok()? - w0;
        let distance = d.norm();
        distance.is_finite().then(|| Self { psi: d.arg().rem_euclid(TAU), point, distance })
    }

    /// Image directions at and just either side of `psi`.
    fn seeds(&self) -> Vec<f64> {
        // Rays grazing a fold crawl along it; the offset stays tiny to keep them short.
        let eta = 1e-9;
        vec![self.psi, (self.psi - eta).rem_euclid(TAU), (self.psi + eta).rem_euclid(TAU)]
    }

    /// Length of the ray aimed at the point if it reaches the boundary there.
    ///
    /// At a branch point on the boundary (the tip of `k_n`, `n ≥ 3`) a ray
    /// off by a rounding error slips past onto the next sheet, so a path that
    /// passes close to the point at the right length also counts.
    fn landing(&self, map: &HarmonicMap, z0: ComplexPoint, ray: &RayLiftConfig) -> Result<Option<f64>> {
        let len = self.distance;
        let cfg = RayLiftConfig { cap: len * (1.0 + 1e-6), record_path: true, ..*ray };
        let r = ray_lift(map, z0, self.psi, &cfg)?;
        if r.status == RayStatus::Escaped {
            return Ok(Some(r.escape_length));
        }
        // Sheets meet at a branch point, so a near miss in the image is a
        // near miss in the disk too; far-off preimages are other sheets.
        let (near_image, near_disk) = (LANDING_TOL * len, 0.05 * map.domain_radius());
        let target = map.eval(self.point)?;
        let mut hit = false;
        for z in &r.path_samples {
            if (z - self.point).norm() < near_disk && (map.eval(*z)? - target).norm() <= near_image {
                hit = true;
                break;
            }
        }
        Ok(hit.then_some(len))
    }
}

/// Relative image distance at which a ray counts as reaching a boundary point.
const LANDING_TOL: f64 = 1e-5;
const BOUNDARY_SAMPLES: usize = 512;
const MAX_CORNERS: usize = 8;

/// Boundary points worth aiming at: the one whose image is nearest to
/// `f(z₀)`, then corners of the boundary curve (local minima of its speed,
/// slowest first), each polished by golden-section search.
///
/// The nearest point catches slits whose escape cone is narrower than the
/// grid spacing. Corners catch branch points reached by a single ray; in the
/// plane their image need not be nearest, because the image can overlap
/// itself.
fn boundary_targets(map: &HarmonicMap, z0: ComplexPoint) -> Vec<BoundaryTarget> {
    let r = map.domain_radius() * (1.0 - 1e-9);
    let Ok(w0) = map.eval(z0) else {
        return Vec::new();
    };
    let at = |t: f64| ComplexPoint::from_polar(r, t);
    let dist = |t: f64| -> Result<f64> {
        let d = (map.eval(at(t))? - w0).norm();
        Ok(if d.is_finite() { d } else { f64::INFINITY })
    };
    // |∂ₜ f(r e^{it})| = |z h' − conj(z g')|.
    let speed = |t: f64| -> Result<f64> {
        let z = at(t);
        let (dh, dg) = map.derivs(z)?;
        let v = (z * dh - (z * dg).conj()).norm();
        Ok(if v.is_finite() { v } else { f64::INFINITY })
    };
    let h = TAU / BOUNDARY_SAMPLES as f64;
    let ts: Vec<f64> = (0..BOUNDARY_SAMPLES).map(|j| h * j as f64).collect();
    let (Ok(ds), Ok(vs)) = (
        ts.iter().map(|&t| dist(t)).collect::<Result<Vec<_>>>(),
        ts.iter().map(|&t| speed(t)).collect::<Result<Vec<_>>>(),
    ) else {
        return Vec::new();
    };
    let polish = |f: &dyn Fn(f64) -> Result<f64>, t0: f64| -> f64 {
        let (mut best_t, mut best) = (t0, f(t0).unwrap_or(f64::INFINITY));
        let _ = golden_section(
            |t| {
                let v = f(t)?;
                if v < best {
                    (best_t, best) = (t, v);
                }
                Ok(v)
            },
            t0 - h,
            t0 + h,
            1e-13,
        );
        best_t
    };

    let mut targets = Vec::new();
    let nearest = (0..BOUNDARY_SAMPLES).min_by(|&a, &b| ds[a].total_cmp(&ds[b]));
    if let Some(j) = nearest.filter(|&j| ds[j].is_finite()) {
        targets.extend(BoundaryTarget::new(map, w0, at(polish(&dist, ts[j]))));
    }
    let m = BOUNDARY_SAMPLES;
    let mut corners: Vec<usize> = (0..m)
        .filter(|&j| vs[j] < vs[(j + m - 1) % m] && vs[j] <= vs[(j + 1) % m])
        .collect();
    corners.sort_by(|&a, &b| vs[a].total_cmp(&vs[b]).then(a.cmp(&b)));
    for &j in corners.iter().take(MAX_CORNERS) {
        targets.extend(BoundaryTarget::new(map, w0, at(polish(&speed, ts[j]))));
    }
    targets
}

fn golden_section<F: FnMut(f64) -> Result<f64>>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Result<()> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    Ok(())
}

/// Shortest escape length over `n_directions` equally spaced image directions,
/// plus a few directions bracketing the nearest boundary image point.
///
/// The extra directions matter for slit images: there only rays aimed at the
/// slit escape, and when the slit points almost straight away from `f(z₀)`
/// that cone can be much narrower than the grid spacing. Rays are also aimed
/// at corners of the boundary curve: when a corner is a branch point the cone
/// is a single direction, and a ray aimed there that passes the point at the
/// right length counts as escaping.
///
/// Rays are stopped early once they are longer than a cap. A coarse subset of
/// directions runs first with a cap of four times `(|h'| + |g'|)(ρ² − |z₀|²)/ρ`,
/// doubled until some ray escapes; the shortest escape then caps the remaining
/// directions, so rays that cannot be minimal cost little. With `refine` the
/// best grid direction is improved by golden-section search over one grid
/// spacing either side; the result is the minimum over every direction tried.
///
/// The reported error is the extrapolated remainder of the best ray plus the
/// angular resolution times the value.
pub fn univalent_disk_radius(map: &HarmonicMap, z0: ComplexPoint, cfg: &SweepConfig) -> Result<RadiusEstimate> {
    let n = cfg.n_directions;
    if n == 0 {
        return Err(domain("at least one direction is needed"));
    }
    let rho = map.domain_radius();
    if !(z0.norm() < rho) {
        return Err(domain(format!("|z0| = {} must be below the domain radius {rho}", z0.norm())));
    }
    let (dh, dg) = map.derivs(z0)?;
    let mut cap = 4.0 * (dh.norm() + dg.norm()) * (rho * rho - z0.norm_sqr()) / rho;
    if !(cap.is_finite() && cap > 0.0) {
        cap = 1.0;
    }
    let directions: Vec<f64> = (0..n).map(|j| TAU * j as f64 / n as f64).collect();
    // A coarse pass finds some escaping ray; its length then caps the rest.
    // The coarse set keeps the axis directions when n allows it.
    let quarter = if n % 4 == 0 { n / 4 } else { n };
    let stride = (1..=(n / 32).max(1)).rev().find(|d| quarter % d == 0).unwrap_or(1);
    let mut coarse: Vec<f64> = directions.iter().copied().step_by(stride).collect();
    let targets = boundary_targets(map, z0);
    let seeds = targets.first().map(|b| b.seeds()).unwrap_or_default();
    coarse.extend(&seeds);
    // Shortest ray that reaches one of the targets, as (length, direction).
    let mut landing: Option<(f64, f64)> = None;
    for b in &targets {
        if let Some(len) = b.landing(map, z0, &cfg.ray)? {
            if landing.map_or(true, |(best, _)| len < best) {
                landing = Some((len, b.psi));
            }
        }
    }
    let n_used = n + seeds.len();
    let fine: Vec<f64> = directions.iter().enumerate().filter(|(j, _)| j % stride != 0).map(|(_, &p)| p).collect();
    let escaped = |rays: &[RayLift]| rays.iter().any(|r| r.status == RayStatus::Escaped);

    let mut rays;
    let mut doublings = 0;
    if let Some((len, _)) = landing {
        cap = len;
    }
    loop {
        let ray_cfg = RayLiftConfig { cap, record_path: false, ..cfg.ray };
        rays = lift_all(map, z0, &coarse, &ray_cfg)?;
        if escaped(&rays) {
            let shortest = rays
                .iter()
                .filter(|r| r.status == RayStatus::Escaped)
                .map(|r| r.escape_length)
                .fold(f64::INFINITY, f64::min);
            let ray_cfg = RayLiftConfig { cap: shortest, ..ray_cfg };
            rays.extend(lift_all(map, z0, &fine, &ray_cfg)?);
            break;
        }
        rays.extend(lift_all(map, z0, &fine, &ray_cfg)?);
        if escaped(&rays) || landing.is_some() {
            break;
        }
        let all_step_limited = rays.iter().all(|r| r.status == RayStatus::StepLimit);
        doublings += 1;
        if all_step_limited || doublings > 4 {
            let best = rays
                .iter()
                .min_by(|a, b| a.escape_length.total_cmp(&b.escape_length))
                .expect("n > 0");
            return Ok(RadiusEstimate {
                value: best.escape_length,
                method: Method::RayLift,
                error: f64::INFINITY,
                directions_used: n_used,
                direction: Some(best.direction),
                lower_bound_only: true,
            });
        }
        cap *= 2.0;
    }

    let (mut best_len, mut best_dir, mut best_res) = match landing {
        Some((len, psi)) => (len, psi, LANDING_TOL * len),
        None => (f64::INFINITY, 0.0, 0.0),
    };
    for r in rays.iter().filter(|r| r.status == RayStatus::Escaped) {
        if r.escape_length < best_len || (r.escape_length == best_len && r.direction < best_dir) {
            (best_len, best_dir, best_res) = (r.escape_length, r.direction, r.residual);
        }
    }

    let mut resolution = TAU / n as f64 / 2.0;
    if cfg.refine {
        let spacing = TAU / n as f64;
        let ray_cfg = RayLiftConfig { cap: best_len, record_path: false, ..cfg.ray };
        let centre = best_dir;
        golden_section(
            |psi| {
                let r = ray_lift(map, z0, psi, &ray_cfg)?;
                match r.status {
                    RayStatus::Singular => Err(Error::Singular(format!(
                        "ray in direction {psi} met J_f <= 0 after length {}",
                        r.escape_length
                    ))),
                    RayStatus::Escaped => {
                        if r.escape_length < best_len {
                            (best_len, best_dir, best_res) = (r.escape_length, psi, r.residual);
                        }
                        Ok(r.escape_length)
                    }
                    _ => Ok(r.escape_length.max(best_len)),
                }
            },
            centre - spacing,
            centre + spacing,
            cfg.angular_tol,
        )?;
        resolution = cfg.angular_tol;
    }

    Ok(RadiusEstimate {
        value: best_len,
        method: Method::RayLift,
        error: best_res + 1e-9 * best_len + resolution * best_len,
        directions_used: n_used,
        direction: Some(best_dir.rem_euclid(TAU)),
        lower_bound_only: false,
    })
}

/// The minimising ray of a sweep, re-run with its path recorded.
pub fn minimizing_ray(map: &HarmonicMap, z0: ComplexPoint, estimate: &RadiusEstimate, ray: &RayLiftConfig) -> Result<RayLift> {
    let psi = estimate
        .direction
        .ok_or_else(|| Error::Unsupported("the estimate carries no direction".into()))?;
    ray_lift(map, z0, psi, &RayLiftConfig { record_path: true, ..*ray })
}

/// `min_θ |f(r·e^{iθ}) − f(z₀)|` over `n_samples` angles with `r = ρ(1 − 10⁻⁹)`.
///
/// Equals `d_f(z₀)` for univalent maps whose boundary values are continuous.
/// The error is the chord length between the neighbours of the minimising sample.
pub fn boundary_distance(map: &HarmonicMap, z0: ComplexPoint, n_samples: usize) -> Result<RadiusEstimate> {
    if n_samples < 3 {
        return Err(domain("boundary distance needs at least 3 samples"));
    }
    let rho = map.domain_radius();
    if !(z0.norm() < rho) {
        return Err(domain(format!("|z0| = {} must be below the domain radius {rho}", z0.norm())));
    }
    let r = rho * (1.0 - 1e-9);
    let w0 = map.eval(z0)?;
    let values = (0..n_samples)
        .into_par_iter()
        .map(|j| map.eval(ComplexPoint::from_polar(r, TAU * j as f64 / n_samples as f64)))
        .collect::<Result<Vec<_>>>()?;
    let (j, dist) = values
        .iter()
        .map(|w| (w - w0).norm())
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("n_samples > 0");
    let prev = values[(j + n_samples - 1) % n_samples];
    let next = values[(j + 1) % n_samples];
    let chord = (values[j] - prev).norm().max((values[j] - next).norm());
    Ok(RadiusEstimate {
        value: dist,
        method: Method::BoundaryDistance,
        error: chord,
        directions_used: n_samples,
        direction: Some(TAU * j as f64 / n_samples as f64),
        lower_bound_only: false,
    })
}

/// How [`ratio_df_dh`] obtains the two radii.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioSettings {
    pub sweep: SweepConfig,
    /// At the origin, use [`analytic_radius`] for both radii when it applies.
    pub prefer_analytic: bool,
}

impl Default for RatioSettings {
    fn default() -> Self {
        Self { sweep: SweepConfig::default(), prefer_analytic: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioEstimate {
    pub ratio: f64,
    pub error: f64,
    pub d_f: RadiusEstimate,
    pub d_h: RadiusEstimate,
}

/// The radius of the map or, when allowed, its closed form.
pub fn radius(map: &HarmonicMap, z0: ComplexPoint, settings: &RatioSettings) -> Result<RadiusEstimate> {
    if settings.prefer_analytic && z0 == ORIGIN {
        if let Ok(est) = analytic_radius(map) {
            return Ok(est);
        }
    }
    univalent_disk_radius(map, z0, &settings.sweep)
}

/// `d_f(z₀)/d_h(z₀)` for `f = h + conj(g)`.
pub fn ratio_df_dh(map: &HarmonicMap, z0: ComplexPoint, settings: &RatioSettings) -> Result<RatioEstimate> {
    let d_f = radius(map, z0, settings)?;
    let d_h = radius(&map.analytic_part(), z0, settings)?;
    if d_f.lower_bound_only || d_h.lower_bound_only {
        return Err(Error::Unsupported(
            "no ray escaped for one of the radii; the ratio is undetermined".into(),
        ));
    }
    let ratio = d_f.value / d_h.value;
    let error = ratio * (d_f.error / d_f.value + d_h.error / d_h.value);
    Ok(RatioEstimate { ratio, error, d_f, d_h })
}
