//! Polar-grid images as SVG.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use harmonic_radii::mappings::MapDescriptor;
use harmonic_radii::radii::analytic_radius;
use harmonic_radii::{Complex64, Error, HarmonicMap, Result};
use serde::{Deserialize, Serialize};

/// Points per grid curve.
pub const SAMPLES_PER_CURVE: usize = 512;

pub const PRESETS: [&str; 4] = ["fig1a", "fig1b", "fig4a", "fig4b"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub n_radii: usize,
    pub n_rays: usize,
    pub r_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overlay {
    pub center: [f64; 2],
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlotSpec {
    pub map: MapDescriptor,
    pub grid: Grid,
    #[serde(default)]
    pub overlays: Vec<Overlay>,
    pub output: String,
    /// Width and height of the picture in pixels.
    pub size: u32,
    /// Half-width of the square window shown, centred on `f(0)`; derived from
    /// the overlays when absent.
    #[serde(default)]
    pub window: Option<f64>,
}

impl PlotSpec {
    pub fn validate(&self) -> Result<HarmonicMap> {
        let g = &self.grid;
        if !(g.r_max > 0.0 && g.r_max < 1.0) {
            return Err(Error::Domain(format!("grid r_max = {} must lie in (0, 1)", g.r_max)));
        }
        if g.n_radii < 2 || g.n_rays < 2 {
            return Err(Error::Domain("grid needs at least 2 radii and 2 rays".into()));
        }
        if let Some(o) = self.overlays.iter().find(|o| !(o.radius > 0.0 && o.radius.is_finite())) {
            return Err(Error::Domain(format!("overlay radius {} must be positive", o.radius)));
        }
        if self.size == 0 {
            return Err(Error::Domain("picture size must be positive".into()));
        }
        if matches!(self.window, Some(w) if !(w > 0.0 && w.is_finite())) {
            return Err(Error::Domain("window half-width must be positive".into()));
        }
        let map = HarmonicMap::try_from(self.map.clone())?;
        if g.r_max >= map.domain_radius() {
            return Err(Error::Domain(format!(
                "grid r_max = {} reaches the domain radius {}",
                g.r_max,
                map.domain_radius()
            )));
        }
        Ok(map)
    }
}

/// The figure presets: the maps at `k = 1/4` with their covering disks.
pub fn preset(name: &str) -> Result<PlotSpec> {
    let k = 0.25;
    let real = |x: f64| Complex64::new(x, 0.0);
    let map = match name {
        "fig1a" => HarmonicMap::kn(2)?.scaled(real(1.0 / (1.0 - k)))?,
        "fig1b" => HarmonicMap::f_n(2, k)?,
        "fig4a" => HarmonicMap::h_alpha(2.0)?.scaled(real(1.0 / (1.0 + k)))?,
        "fig4b" => HarmonicMap::lower_extremal(2.0, k)?,
        _ => {
            return Err(Error::Domain(format!(
                "unknown preset {name:?}; expected one of {}",
                PRESETS.join(", ")
            )))
        }
    };
    let radius = analytic_radius(&map)?.value;
    Ok(PlotSpec {
        map: map.to_descriptor(),
        grid: Grid { n_radii: 10, n_rays: 24, r_max: 0.95 },
        overlays: vec![Overlay { center: [0.0, 0.0], radius }],
        output: format!("{name}.svg"),
        size: 600,
        window: None,
    })
}

fn coord(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

/// Append a polyline through `points` as path commands, breaking it at
/// non-finite points and at points far outside the window.
fn path_data(points: &[Complex64], limit: f64) -> String {
    let mut d = String::new();
    let mut pen_down = false;
    for p in points {
        if !(p.re.is_finite() && p.im.is_finite()) || p.re.abs() > limit || p.im.abs() > limit {
            pen_down = false;
            continue;
        }
        let cmd = if pen_down { 'L' } else { 'M' };
        if !d.is_empty() {
            d.push(' ');
        }
        let _ = write!(d, "{cmd}{} {}", coord(p.re), coord(p.im));
        pen_down = true;
    }
    d
}

/// Render the images of the circles `|z| = r_max·j/n_radii` and of the rays
/// `arg z = 2πj/n_rays`, one `<path>` each, plus one `<circle>` per overlay.
pub fn render(spec: &PlotSpec) -> Result<String> {
    let map = spec.validate()?;
    let g = spec.grid;
    let origin = map.eval(Complex64::new(0.0, 0.0))?;
    let half = spec.window.unwrap_or_else(|| {
        let r = spec.overlays.iter().map(|o| o.radius).fold(0.0, f64::max);
        if r > 0.0 {
            2.5 * r
        } else {
            2.0
        }
    });
    // Points beyond this are dropped; the clip path hides the rest.
    let limit = 50.0 * half + origin.norm();

    let sample = |z: Complex64| map.eval(z);
    let last = (SAMPLES_PER_CURVE - 1) as f64;
    let mut curves = Vec::with_capacity(g.n_radii + g.n_rays);
    for j in 1..=g.n_radii {
        let r = g.r_max * j as f64 / g.n_radii as f64;
        let pts = (0..SAMPLES_PER_CURVE)
            .map(|i| sample(Complex64::from_polar(r, TAU * i as f64 / last)))
            .collect::<Result<Vec<_>>>()?;
        curves.push(pts);
    }
    for j in 0..g.n_rays {
        let t = TAU * j as f64 / g.n_rays as f64;
        let pts = (0..SAMPLES_PER_CURVE)
            .map(|i| sample(Complex64::from_polar(g.r_max * i as f64 / last, t)))
            .collect::<Result<Vec<_>>>()?;
        curves.push(pts);
    }

    let size = spec.size;
    let scale = size as f64 / (2.0 * half);
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(
        svg,
        r#"<defs><clipPath id="window"><rect x="0" y="0" width="{size}" height="{size}"/></clipPath></defs>"#
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>"#);
    let _ = writeln!(svg, r#"<g clip-path="url(#window)">"#);
    let _ = writeln!(
        svg,
        r#"<g transform="translate({c} {c}) scale({s} {neg}) translate({tx} {ty})">"#,
        c = size as f64 / 2.0,
        s = scale,
        neg = -scale,
        tx = -origin.re,
        ty = -origin.im,
    );
    for pts in &curves {
        let _ = writeln!(
            svg,
            r#"<path d="{}" fill="none" stroke="black" stroke-width="1" vector-effect="non-scaling-stroke"/>"#,
            path_data(pts, limit)
        );
    }
    for o in &spec.overlays {
        let _ = writeln!(
            svg,
            r#"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="red" stroke-width="1.5" vector-effect="non-scaling-stroke"/>"#,
            o.center[0], o.center[1], o.radius
        );
    }
    svg.push_str("</g>\n</g>\n</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_carry_the_covering_radii() {
        let expected = [1.0 / 3.0, 5.0 / 12.0, 0.2, 0.15];
        for (name, r) in PRESETS.iter().zip(expected) {
            let spec = preset(name).unwrap();
            assert!((spec.overlays[0].radius - r).abs() < 1e-15, "{name}");
        }
        assert!(preset("fig9").is_err());
    }

    #[test]
    fn one_path_per_curve_and_one_circle_per_overlay() {
        let spec = preset("fig1b").unwrap();
        let svg = render(&spec).unwrap();
        assert_eq!(svg.matches("<path").count(), 10 + 24);
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(svg.contains(r#"r="0.4166666666666667""#));
    }

    #[test]
    fn identity_grid_is_circles_and_rays() {
        let spec = PlotSpec {
            map: HarmonicMap::identity().to_descriptor(),
            grid: Grid { n_radii: 2, n_rays: 4, r_max: 0.5 },
            overlays: vec![],
            output: "id.svg".into(),
            size: 100,
            window: Some(1.0),
        };
        let svg = render(&spec).unwrap();
        // The ray at angle 0 runs along the positive real axis.
        let ray = svg.lines().filter(|l| l.starts_with("<path")).nth(2).unwrap();
        assert!(ray.contains("M0.000000 0.000000") && ray.contains("L0.500000 0.000000"));
        for l in ray.split(['L', 'M']).skip(1) {
            assert!(l.split_whitespace().nth(1).unwrap().trim_start_matches('-').starts_with("0.000000"));
        }
    }

    #[test]
    fn invalid_specs() {
        let mut spec = preset("fig1a").unwrap();
        spec.grid.r_max = 1.0;
        assert!(render(&spec).is_err());
        let mut spec = preset("fig1a").unwrap();
        spec.grid.n_rays = 1;
        assert!(render(&spec).is_err());
        let mut spec = preset("fig1a").unwrap();
        spec.overlays[0].radius = 0.0;
        assert!(render(&spec).is_err());
    }
}
