//! Checks that confront the bounds with measured radii.
//!
//! Every check returns a [`VerificationReport`]. A failing estimator never
//! turns into a failed check: it yields [`Outcome::Indeterminate`].

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, QFactor};
use crate::error::{domain, Result};
use crate::mappings::{ComplexPoint, HarmonicMap, KoebeNormalization, QcGrid};
use crate::quadrature::QuadratureConfig;
use crate::radii::{self, RatioSettings, SweepConfig};

const ORIGIN: ComplexPoint = ComplexPoint { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Predicted {
    Value(f64),
    Interval { lower: f64, upper: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub predicted: Predicted,
    pub measured: f64,
    pub tolerance: f64,
    pub outcome: Outcome,
    pub metadata: BTreeMap<String, String>,
}

impl VerificationReport {
    fn new(check_name: impl Into<String>, predicted: Predicted, measured: f64, tolerance: f64) -> Self {
        let outcome = match predicted {
            _ if !measured.is_finite() => Outcome::Indeterminate,
            Predicted::Value(p) if (measured - p).abs() <= tolerance => Outcome::Pass,
            Predicted::Interval { lower, upper }
                if lower - tolerance <= measured && measured <= upper + tolerance =>
            {
                Outcome::Pass
            }
            _ => Outcome::Fail,
        };
        Self {
            check_name: check_name.into(),
            predicted,
            measured,
            tolerance,
            outcome,
            metadata: BTreeMap::new(),
        }
    }

    fn indeterminate(check_name: impl Into<String>, predicted: Predicted, reason: String) -> Self {
        let mut r = Self::new(check_name, predicted, f64::NAN, 0.0);
        r.metadata.insert("reason".into(), reason);
        r
    }

    fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }
}

fn point(z: ComplexPoint) -> String {
    format!("{},{}", z.re, z.im)
}

fn describe(map: &HarmonicMap) -> String {
    serde_json::to_string(&map.to_descriptor()).unwrap_or_default()
}

/// Bracket `[m(x, Q), M(x, k)]` for `d_f(z₀)/d_h(z₀)` against the measured ratio.
///
/// Off the origin the map is first recentred by a Koebe transform; the ratio
/// is invariant under it. A measured ratio passes if it lies in the bracket
/// widened by the estimator's own error and the quadrature error of `m`.
pub fn check_theorem1(
    map: &HarmonicMap,
    z0: ComplexPoint,
    alpha: f64,
    q: QFactor,
    settings: &RatioSettings,
) -> Result<VerificationReport> {
    let k = bounds::k_from_q(q)?;
    let qc = map.qc_constant(QcGrid::default())?;
    let slack = if qc.exact { 1e-12 } else { 1e-3 };
    if qc.value > k + slack {
        return Err(domain(format!("sup |omega| = {} exceeds k = {k}", qc.value)));
    }
    let omega = map.dilatation(z0)?.norm();
    let x = if k == 0.0 { 0.0 } else { (omega / k).min(1.0) };
    let lower = bounds::lower_bound_m_with(x, q, QuadratureConfig::with_tol(quad_tol()?))?;
    let upper = bounds::upper_bound_m(x, k)?;
    let predicted = Predicted::Interval { lower: lower.value, upper };
    let name = "theorem1";

    let centred = if z0 == ORIGIN {
        Ok(map.clone())
    } else {
        map.koebe_transform(z0, 0.0, KoebeNormalization::DirectionalDerivative)
    };
    let measured = centred.and_then(|f| radii::ratio_df_dh(&f, ORIGIN, settings));
    let report = match measured {
        Ok(r) => VerificationReport::new(name, predicted, r.ratio, r.error + lower.error)
            .with("d_f", r.d_f.value)
            .with("d_h", r.d_h.value)
            .with("method", format!("{:?}", r.d_f.method)),
        Err(e) => VerificationReport::indeterminate(name, predicted, e.to_string()),
    };
    Ok(report
        .with("map", describe(map))
        .with("z0", point(z0))
        .with("alpha", alpha)
        .with("q", q)
        .with("x", x)
        .with("quad_tolerance", lower.tolerance)
        .with("quad_error", lower.error)
        .with("directions", settings.sweep.n_directions))
}

/// Lower bound `(1 − |ω(z₀)|)/(2α)·((1 − |z₀|)/(1 + |z₀|))^α` against the measured `d_f(z₀)`.
pub fn check_theorem2(
    map: &HarmonicMap,
    z0: ComplexPoint,
    alpha: f64,
    settings: &RatioSettings,
) -> Result<VerificationReport> {
    let omega = map.dilatation(z0)?.norm();
    let bound = bounds::theorem2_lower(omega, alpha, z0.norm())?;
    let name = "theorem2";
    let report = match radii::radius(map, z0, settings) {
        Ok(est) => {
            let tol = est.error.max(1e-3 * bound);
            let mut r = VerificationReport::new(name, Predicted::Value(bound), est.value, tol);
            // One-sided: anything above the bound passes.
            if r.outcome == Outcome::Fail && est.value > bound {
                r.outcome = Outcome::Pass;
            }
            let equality = (est.value - bound).abs() <= tol;
            r.with("equality", equality).with("method", format!("{:?}", est.method))
        }
        Err(e) => VerificationReport::indeterminate(name, Predicted::Value(bound), e.to_string()),
    };
    Ok(report.with("map", describe(map)).with("z0", point(z0)).with("alpha", alpha))
}

/// Result of the tangent-turning test on one circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningTest {
    /// `Σ Δ arg T` over the circle.
    pub total_turning: f64,
    /// The smallest single increment of `arg T`.
    pub min_increment: f64,
    /// Smallest `|T|` met; below `1e-12` the test is inconclusive.
    pub min_speed: f64,
}

pub const TURNING_STEP_TOL: f64 = 1e-6;
pub const TURNING_TOTAL_TOL: f64 = 1e-4;

impl TurningTest {
    pub fn outcome(&self) -> Outcome {
        if self.min_speed < 1e-12 {
            Outcome::Indeterminate
        } else if self.min_increment >= -TURNING_STEP_TOL && (self.total_turning - TAU).abs() < TURNING_TOTAL_TOL {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

/// Sample the tangent `T(θ) = i r e^{iθ} h' + conj(i r e^{iθ} g')` of
/// `θ ↦ f(z₀ + r e^{iθ})` and accumulate the unwrapped turning of `arg T`.
pub fn tangent_turning(map: &HarmonicMap, z0: ComplexPoint, r: f64, n_samples: usize) -> Result<TurningTest> {
    if n_samples < 3 {
        return Err(domain("the turning test needs at least 3 samples"));
    }
    if !(r > 0.0) || !(z0.norm() + r < map.domain_radius()) {
        return Err(domain(format!("circle of radius {r} about {z0} leaves the domain")));
    }
    let tangents = (0..n_samples)
        .map(|j| {
            let p = ComplexPoint::from_polar(r, TAU * j as f64 / n_samples as f64);
            let t = p * ComplexPoint::i();
            let (dh, dg) = map.derivs(z0 + p)?;
            Ok(t * dh + (t * dg).conj())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut test = TurningTest { total_turning: 0.0, min_increment: f64::INFINITY, min_speed: f64::INFINITY };
    for j in 0..n_samples {
        let (a, b) = (tangents[j], tangents[(j + 1) % n_samples]);
        test.min_speed = test.min_speed.min(a.norm());
        let mut step = b.arg() - a.arg();
        if step > PI {
            step -= TAU;
        } else if step < -PI {
            step += TAU;
        }
        test.total_turning += step;
        test.min_increment = test.min_increment.min(step);
    }
    Ok(test)
}

/// Largest radius `r ≤ r_max` (to within `tol`) at which the image of the circle of
/// radius `r` about `z₀` still passes the turning test, found by bisection.
///
/// Convexity need not be monotone in `r` for every map, so this is an empirical
/// threshold, not a certified radius of convexity.
pub fn convexity_threshold(
    map: &HarmonicMap,
    z0: ComplexPoint,
    r_max: f64,
    n_samples: usize,
    tol: f64,
) -> Result<f64> {
    let passes = |r: f64| -> Result<bool> {
        Ok(tangent_turning(map, z0, r, n_samples)?.outcome() == Outcome::Pass)
    };
    if passes(r_max)? {
        return Ok(r_max);
    }
    let (mut lo, mut hi) = (0.0, r_max);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if passes(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Convexity of `f` on `D(z₀, R(|z₀|))` via the turning of the boundary tangent.
pub fn check_theorem3_convexity(
    map: &HarmonicMap,
    z0: ComplexPoint,
    alpha: f64,
    q: f64,
    n_samples: usize,
) -> Result<VerificationReport> {
    let r = bounds::convexity_radius_at(z0.norm(), alpha, q)?;
    check_convexity_at(map, z0, r, n_samples)
        .map(|rep| rep.with("alpha", alpha).with("q", q).with("radius_source", "R(z0)"))
}

/// Tangent-turning test on the circle of radius `r` about `z₀`.
pub fn check_convexity_at(map: &HarmonicMap, z0: ComplexPoint, r: f64, n_samples: usize) -> Result<VerificationReport> {
    let test = tangent_turning(map, z0, r, n_samples)?;
    let mut report = VerificationReport::new("theorem3", Predicted::Value(TAU), test.total_turning, TURNING_TOTAL_TOL);
    report.outcome = test.outcome();
    Ok(report
        .with("map", describe(map))
        .with("z0", point(z0))
        .with("radius", r)
        .with("samples", n_samples)
        .with("min_increment", test.min_increment)
        .with("min_speed", test.min_speed))
}

/// Closed-form radii at the origin measured by ray lifting: seven items.
pub fn run_sharpness_suite(k: f64, alpha: f64, n: u32, sweep: &SweepConfig) -> Result<Vec<VerificationReport>> {
    if !(0.0..1.0).contains(&k) {
        return Err(domain(format!("k = {k} outside [0, 1)")));
    }
    if !(alpha >= 1.0) || n == 0 {
        return Err(domain("the suite needs alpha ≥ 1 and n ≥ 1"));
    }
    let q = (1.0 + k) / (1.0 - k);
    let nf = n as f64;
    let real = |x: f64| ComplexPoint::new(x, 0.0);
    let b = k;
    let items: Vec<(&str, HarmonicMap, f64)> = vec![
        ("d_{k_n}(0)", HarmonicMap::kn(n)?, 1.0 / (2.0 * nf)),
        ("d_{k_n/(1-k)}(0)", HarmonicMap::kn(n)?.scaled(real(1.0 / (1.0 - k)))?, 1.0 / (2.0 * nf * (1.0 - k))),
        ("d_{f_n}(0)", HarmonicMap::f_n(n, k)?, q / (2.0 * nf)),
        ("d_f(0) lower extremal", HarmonicMap::lower_extremal(alpha, k)?, 1.0 / (2.0 * alpha * q)),
        ("d_{h_alpha/(1+k)}(0)", HarmonicMap::h_alpha(alpha)?.scaled(real(1.0 / (1.0 + k)))?, 1.0 / (2.0 * alpha * (1.0 + k))),
        ("d_K(0) harmonic Koebe", HarmonicMap::HarmonicKoebe, 1.0 / 6.0),
        ("d_K(0) affine Koebe", HarmonicMap::affine_koebe(b)?, (1.0 - b) / 6.0),
    ];
    let mut reports: Vec<VerificationReport> = items
        .into_par_iter()
        .map(|(name, map, predicted)| {
            let name = format!("sharpness: {name}");
            let report = match radii::univalent_disk_radius(&map, ORIGIN, sweep) {
                Ok(est) => VerificationReport::new(name, Predicted::Value(predicted), est.value, 1e-3 * predicted)
                    .with("estimator_error", est.error)
                    .with("direction", est.direction.unwrap_or(f64::NAN)),
                Err(e) => VerificationReport::indeterminate(name, Predicted::Value(predicted), e.to_string()),
            };
            report
                .with("map", describe(&map))
                .with("k", k)
                .with("alpha", alpha)
                .with("n", n)
                .with("directions", sweep.n_directions)
        })
        .collect();
    sort_reports(&mut reports);
    Ok(reports)
}

/// Order reports by name, then by their metadata, so output does not depend on scheduling.
pub fn sort_reports(reports: &mut [VerificationReport]) {
    reports.sort_by(|a, b| {
        a.check_name
            .cmp(&b.check_name)
            .then_with(|| a.metadata.iter().cmp(b.metadata.iter()))
    });
}

/// Quadrature tolerance for `m`: `HR_QUAD_TOL` if set, else the default.
pub fn quad_tol() -> Result<f64> {
    match std::env::var("HR_QUAD_TOL") {
        Err(_) => Ok(bounds::DEFAULT_QUAD_TOL),
        Ok(v) => v
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|t| *t > 0.0 && t.is_finite())
            .ok_or_else(|| domain(format!("HR_QUAD_TOL = {v:?} is not a positive number"))),
    }
}

/// Parameters of the shipped verification suites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SuiteParams {
    pub k: f64,
    pub alpha: f64,
    pub n: u32,
    pub directions: usize,
    pub refine: bool,
    /// Off-centre points for the convexity checks, as `[re, im]`.
    pub convexity_points: Vec<[f64; 2]>,
    pub convexity_samples: usize,
}

impl Default for SuiteParams {
    fn default() -> Self {
        Self {
            k: 0.25,
            alpha: 2.0,
            n: 2,
            directions: 720,
            refine: true,
            convexity_points: vec![[0.0, 0.0], [0.3, 0.0]],
            convexity_samples: 4096,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Theorem1,
    Theorem2,
    Theorem3,
    Sharpness,
}

impl SuiteParams {
    fn settings(&self) -> RatioSettings {
        RatioSettings {
            sweep: SweepConfig::with_directions(self.directions, self.refine),
            prefer_analytic: false,
        }
    }

    fn validate(&self) -> Result<QFactor> {
        if !(0.0..1.0).contains(&self.k) || !(self.alpha >= 1.0) || self.n == 0 || self.directions == 0 {
            return Err(domain("suite parameters need k in [0, 1), alpha ≥ 1, n ≥ 1, directions ≥ 1"));
        }
        bounds::q_from_k(self.k)
    }
}

fn theorem1_reports(p: &SuiteParams) -> Result<Vec<VerificationReport>> {
    let q = p.validate()?;
    let settings = p.settings();
    let maps = [
        (HarmonicMap::f_n(p.n, p.k)?, p.n as f64),
        (HarmonicMap::lower_extremal(p.alpha, p.k)?, p.alpha),
        (HarmonicMap::h_alpha(p.alpha)?.affine_transform(ComplexPoint::new(0.0, p.k))?, p.alpha),
    ];
    maps.into_par_iter()
        .map(|(map, alpha)| check_theorem1(&map, ORIGIN, alpha, q, &settings))
        .collect()
}

fn theorem2_reports(p: &SuiteParams) -> Result<Vec<VerificationReport>> {
    p.validate()?;
    let settings = p.settings();
    let maps = [
        (HarmonicMap::affine_extremal(p.alpha, p.k)?, p.alpha),
        (HarmonicMap::affine_koebe(p.k)?, 3.0),
        (HarmonicMap::identity(), 1.0),
    ];
    maps.into_par_iter()
        .map(|(map, alpha)| check_theorem2(&map, ORIGIN, alpha, &settings))
        .collect()
}

fn theorem3_reports(p: &SuiteParams) -> Result<Vec<VerificationReport>> {
    let q = match p.validate()? {
        QFactor::Finite(q) => q,
        QFactor::Infinite => unreachable!("k < 1"),
    };
    let scale = ComplexPoint::new(1.0 / (1.0 + p.k), 0.0);
    let maps = [
        (HarmonicMap::h_alpha(p.alpha)?, 1.0),
        (HarmonicMap::f_n(p.n, p.k)?, q),
        (HarmonicMap::h_alpha(p.alpha)?.scaled(scale)?, 1.0),
        (HarmonicMap::lower_extremal(p.alpha, p.k)?, q),
    ];
    let mut jobs = Vec::new();
    for (map, q) in &maps {
        let alpha = match map {
            HarmonicMap::ScaledCombo { base, .. } => base.order(),
            _ => p.alpha,
        };
        for z in &p.convexity_points {
            jobs.push((map, alpha, *q, ComplexPoint::new(z[0], z[1])));
        }
    }
    jobs.into_par_iter()
        .map(|(map, alpha, q, z0)| check_theorem3_convexity(map, z0, alpha, q, p.convexity_samples))
        .collect()
}

/// Run a shipped suite with the given parameters; reports are sorted by name.
pub fn run_suite(suite: Suite, p: &SuiteParams) -> Result<Vec<VerificationReport>> {
    p.validate()?;
    let mut out = Vec::new();
    if matches!(suite, Suite::All | Suite::Theorem1) {
        out.extend(theorem1_reports(p)?);
    }
    if matches!(suite, Suite::All | Suite::Theorem2) {
        out.extend(theorem2_reports(p)?);
    }
    if matches!(suite, Suite::All | Suite::Theorem3) {
        out.extend(theorem3_reports(p)?);
    }
    if matches!(suite, Suite::All | Suite::Sharpness) {
        out.extend(run_sharpness_suite(p.k, p.alpha, p.n, &p.settings().sweep)?);
    }
    sort_reports(&mut out);
    Ok(out)
}
