//! Lifting image rays back to the disk.
//!
//! For a direction `ψ` the lifted path `z(s)` solves `∂ₛ f(z(s)) = e^{iψ}`,
//! i.e. `h'(z) z' + conj(g'(z) z') = e^{iψ}`, whose unique solution is
//!
//! ```text
//! z' = (conj(h'(z)) e^{iψ} − conj(g'(z)) e^{−iψ}) / J_f(z).
//! ```
//!
//! The image of the path is the segment `f(z₀) + s·e^{iψ}`, so the arc length
//! at which the path leaves every compact subset of the disk is the distance
//! from `f(z₀)` to the boundary of the univalent disk in that direction.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::format::csv_number;
use crate::mappings::{ComplexPoint, HarmonicMap};

/// Below this value of `(|h'| − |g'|)/(|h'| + |g'|)` the ray is declared singular.
pub const SINGULAR_RATIO: f64 = 1e-10;

/// Step controls for [`ray_lift`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayLiftConfig {
    /// The path has escaped once `|z| ≥ ρ(1 − delta)`, `ρ` the domain radius.
    pub delta: f64,
    /// Largest step in image arc length.
    pub h_max: f64,
    /// The step is at most `step_factor·(ρ − |z|)/|z'|`, so a step moves the
    /// lifted point by about `step_factor` times its distance to the boundary.
    pub step_factor: f64,
    pub max_steps: u64,
    /// Stop once the image length exceeds this value.
    pub cap: f64,
    pub record_path: bool,
}

impl Default for RayLiftConfig {
    fn default() -> Self {
        Self {
            delta: 1e-6,
            h_max: 1e-3,
            step_factor: 0.1,
            max_steps: 10_000_000,
            cap: f64::INFINITY,
            record_path: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RayStatus {
    Escaped,
    /// The step budget ran out; `escape_length` is a lower bound.
    StepLimit,
    /// `J_f ≤ 0` was met along the path.
    Singular,
    /// The image length passed the cap; `escape_length` is a lower bound.
    Capped,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RayLift {
    pub direction: f64,
    /// Image arc length at escape, including the extrapolated remainder.
    pub escape_length: f64,
    /// The extrapolated remainder `(|h'| − |g'|)(ρ − |z|)` at the last point.
    pub residual: f64,
    pub steps: u64,
    pub status: RayStatus,
    /// The lifted curve, starting at `z₀`; empty unless recording was requested.
    pub path_samples: Vec<ComplexPoint>,
    /// Image arc length at each path sample.
    pub arc_lengths: Vec<f64>,
}

impl RayLift {
    /// `s,re,im` rows of the recorded path.
    pub fn path_csv(&self) -> String {
        let mut out = String::from("s,re,im\n");
        for (s, z) in self.arc_lengths.iter().zip(&self.path_samples) {
            out.push_str(&format!("{},{},{}\n", csv_number(*s), csv_number(z.re), csv_number(z.im)));
        }
        out
    }
}

enum Velocity {
    Regular(Complex64),
    Singular,
}

fn velocity(map: &HarmonicMap, z: Complex64, e: Complex64) -> Result<Velocity> {
    let (dh, dg) = map.derivs(z)?;
    let jac = dh.norm_sqr() - dg.norm_sqr();
    if !(jac > 0.0) {
        return Ok(Velocity::Singular);
    }
    Ok(Velocity::Regular((dh.conj() * e - dg.conj() * e.conj()) / jac))
}

/// One classical fourth-order step, or `None` if a stage left the domain or
/// met a non-positive Jacobian.
fn rk4_step(map: &HarmonicMap, z: Complex64, ds: f64, e: Complex64, rho: f64) -> Option<Complex64> {
    let stage = |p: Complex64| -> Option<Complex64> {
        if p.norm() >= rho {
            return None;
        }
        match velocity(map, p, e) {
            Ok(Velocity::Regular(v)) => Some(v),
            _ => None,
        }
    };
    let k1 = stage(z)?;
    let k2 = stage(z + k1 * (ds / 2.0))?;
    let k3 = stage(z + k2 * (ds / 2.0))?;
    let k4 = stage(z + k3 * ds)?;
    let next = z + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (ds / 6.0);
    (next.norm() < rho).then_some(next)
}

/// One Newton step pulling `z` back onto `f(z) = target`, skipped if it would
/// move `z` by more than a tenth of its distance to the boundary. Without it
/// the image drifts off the ray by ~1e-7 over a unit length, enough to miss a
/// boundary branch point of high order.
fn project(map: &HarmonicMap, z: Complex64, target: Complex64, rho: f64) -> Result<Complex64> {
    let (dh, dg) = map.derivs(z)?;
    let jac = dh.norm_sqr() - dg.norm_sqr();
    let r = target - map.eval(z)?;
    let dz = (dh.conj() * r - dg.conj() * r.conj()) / jac;
    let ok = jac > 0.0 && dz.re.is_finite() && dz.im.is_finite() && dz.norm() < 0.1 * (rho - z.norm());
    Ok(if ok { z + dz } else { z })
}

/// Lift the image ray from `f(z₀)` in direction `psi`.
pub fn ray_lift(map: &HarmonicMap, z0: ComplexPoint, psi: f64, cfg: &RayLiftConfig) -> Result<RayLift> {
    let rho = map.domain_radius();
    if !(z0.norm() < rho) {
        return Err(domain(format!("|z0| = {} must be below the domain radius {rho}", z0.norm())));
    }
    if map.jacobian(z0)? <= 0.0 {
        return Err(Error::SenseReversal { re: z0.re, im: z0.im });
    }
    let e = Complex64::from_polar(1.0, psi);
    let stop = rho * (1.0 - cfg.delta);
    let mut out = RayLift {
        direction: psi,
        escape_length: 0.0,
        residual: 0.0,
        steps: 0,
        status: RayStatus::Escaped,
        path_samples: Vec::new(),
        arc_lengths: Vec::new(),
    };
    let w0 = map.eval(z0)?;
    let (mut z, mut s) = (z0, 0.0);
    if cfg.record_path {
        out.path_samples.push(z);
        out.arc_lengths.push(s);
    }
    loop {
        let (dh, dg) = map.derivs(z)?;
        let speed = dh.norm() - dg.norm();
        // Creeping up on a curve where J_f vanishes.
        if !(speed > SINGULAR_RATIO * (dh.norm() + dg.norm())) {
            out.status = RayStatus::Singular;
            break;
        }
        let room = rho - z.norm();
        if z.norm() >= stop {
            out.residual = speed * room;
            s += out.residual;
            break;
        }
        if s >= cfg.cap {
            out.status = RayStatus::Capped;
            break;
        }
        if out.steps >= cfg.max_steps {
            out.status = RayStatus::StepLimit;
            break;
        }
        let lifted_speed = match velocity(map, z, e)? {
            Velocity::Regular(v) => v.norm(),
            Velocity::Singular => {
                out.status = RayStatus::Singular;
                break;
            }
        };
        let mut ds = cfg.h_max.min(cfg.step_factor * room / lifted_speed);
        // Steps below the resolution of s: the path is running into a boundary
        // point where h' vanishes faster than the room, e.g. the tip of k_n, n ≥ 3.
        if ds <= 4.0 * f64::EPSILON * s {
            out.residual = speed * room;
            s += out.residual;
            break;
        }
        let next = loop {
            if let Some(next) = rk4_step(map, z, ds, e, rho) {
                break Some(next);
            }
            ds /= 2.0;
            if ds < 1e-300 {
                break None;
            }
        };
        let Some(next) = next else {
            out.status = RayStatus::Singular;
            break;
        };
        s += ds;
        z = project(map, next, w0 + e * s, rho)?;
        out.steps += 1;
        if cfg.record_path {
            out.path_samples.push(z);
            out.arc_lengths.push(s);
        }
    }
    out.escape_length = s;
    Ok(out)
}
