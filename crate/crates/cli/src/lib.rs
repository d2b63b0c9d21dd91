//! The `hradii` command line.
//!
//! Exit codes: 0 on success, 1 when a verification check fails or an
//! estimator cannot produce a value, 2 for configuration and domain errors,
//! 3 when output cannot be written.

pub mod plot;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use harmonic_radii::bounds::{self, QFactor};
use harmonic_radii::elliptic::{self, EllipticModulus, PhiValue};
use harmonic_radii::format::csv_number;
use harmonic_radii::quadrature::QuadratureConfig;
use harmonic_radii::radii::{self, SweepConfig};
use harmonic_radii::verify::{self, Outcome, Suite, SuiteParams};
use harmonic_radii::{Complex64, HarmonicMap};
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "hradii", version, about = "Univalent-disk radii and distortion bounds for harmonic maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Complete elliptic integrals and the modulus function φ.
    Elliptic(EllipticArgs),
    /// The bracket [m(x, Q), M(x, k)] for d_f/d_h.
    ///
    /// The Mori column is the elementary bound on d_h/d_f obtained by
    /// splitting the defining integral at t = 16^-Q.
    Bounds(BoundsArgs),
    /// Radius of the largest univalent disk about f(z0).
    Radius(RadiusArgs),
    /// Run verification checks and print a JSON report.
    Verify(VerifyArgs),
    /// Draw the image of a polar grid as SVG.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct EllipticSelect {
    /// K(t).
    #[arg(long, value_name = "T")]
    pub k: Option<f64>,
    /// K'(t) = K(√(1 − t²)).
    #[arg(long, value_name = "T")]
    pub kprime: Option<f64>,
    /// φ(t) = (π/2)·K'(t)/K(t).
    #[arg(long, value_name = "T")]
    pub phi: Option<f64>,
    /// The t with φ(t) = s.
    #[arg(long = "phi-inv", value_name = "S")]
    pub phi_inv: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EllipticArgs {
    #[command(flatten)]
    pub select: EllipticSelect,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// x = |ω(z)|/k in [0, 1].
    #[arg(long)]
    pub x: Option<f64>,
    /// Q ≥ 1, or "inf".
    #[arg(long)]
    pub q: Option<String>,
    /// A grid "X0:X1:NX,Q0:Q1:NQ" of equally spaced x and Q values, used instead of --x/--q.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct RadiusArgs {
    /// Map descriptor JSON file.
    #[arg(long)]
    pub map: PathBuf,
    /// Centre z0 as "re,im".
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    pub z0: String,
    #[arg(long, default_value_t = 720)]
    pub directions: usize,
    /// Golden-section refinement around the best direction.
    #[arg(long)]
    pub refine: bool,
    /// Use the closed form (origin only, extremal maps only).
    #[arg(long)]
    pub analytic: bool,
    /// Write the minimising lifted path as CSV.
    #[arg(long)]
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    All,
    Theorem1,
    Theorem2,
    Theorem3,
    Sharpness,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    pub suite: SuiteArg,
    /// JSON parameter file; missing keys take their defaults.
    #[arg(long)]
    pub params: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "source")]
pub struct PlotSource {
    /// One of fig1a, fig1b, fig4a, fig4b.
    #[arg(long)]
    pub preset: Option<String>,
    /// Plot specification JSON file.
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    pub source: PlotSource,
    /// Overrides the output path of the specification.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug)]
pub enum Failure {
    /// Bad input or configuration.
    Config(String),
    /// A check failed or an estimator gave up.
    Check(String),
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Check(_) => 1,
            Failure::Config(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Check(m) | Failure::Io(m) => m,
        }
    }
}

impl From<harmonic_radii::Error> for Failure {
    fn from(e: harmonic_radii::Error) -> Self {
        use harmonic_radii::Error as E;
        match e {
            E::Singular(_) | E::Unsupported(_) | E::Quadrature { .. } => Failure::Check(e.to_string()),
            _ => Failure::Config(e.to_string()),
        }
    }
}

type CliResult<T = ()> = std::result::Result<T, Failure>;

fn emit(out: &mut dyn Write, text: &str) -> CliResult {
    out.write_all(text.as_bytes()).map_err(|e| Failure::Io(e.to_string()))
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

/// Run a parsed command, writing results to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult {
    match cli.command {
        Command::Elliptic(a) => cmd_elliptic(a, out),
        Command::Bounds(a) => cmd_bounds(a, out),
        Command::Radius(a) => cmd_radius(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Plot(a) => cmd_plot(a, out),
    }
}

fn cmd_elliptic(a: EllipticArgs, out: &mut dyn Write) -> CliResult {
    let s = a.select;
    let modulus = EllipticModulus::new;
    let (name, arg, value) = if let Some(t) = s.k {
        ("K", t, elliptic::ellip_k(modulus(t)?)?)
    } else if let Some(t) = s.kprime {
        ("K'", t, elliptic::ellip_k_comp(modulus(t)?)?)
    } else if let Some(t) = s.phi {
        ("phi", t, elliptic::phi(modulus(t)?)?.value())
    } else if let Some(v) = s.phi_inv {
        ("phi_inv", v, elliptic::phi_inv(PhiValue::new(v)?)?.value())
    } else {
        unreachable!("clap requires one selector")
    };
    if a.json {
        emit(out, &pretty(&json!({ "function": name, "argument": arg, "value": value })))
    } else {
        emit(out, &format!("{value}\n"))
    }
}

fn parse_q(s: &str) -> CliResult<QFactor> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
        return Ok(QFactor::Infinite);
    }
    let v: f64 = t.parse().map_err(|_| Failure::Config(format!("cannot read Q from {s:?}")))?;
    Ok(QFactor::new(v)?)
}

fn parse_range(s: &str, what: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Failure::Config(format!("{what} range {s:?} must look like START:END:COUNT"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    match n {
        0 => Err(bad()),
        1 => Ok(vec![a]),
        _ => Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()),
    }
}

fn quad_config() -> CliResult<QuadratureConfig> {
    Ok(QuadratureConfig::with_tol(verify::quad_tol()?))
}

const BOUNDS_COLUMNS: [&str; 10] =
    ["x", "q", "k", "m", "m_error", "M", "one_minus_k", "one_plus_k", "mori", "quad_tolerance"];

fn bounds_row(x: f64, q: QFactor, cfg: QuadratureConfig) -> CliResult<Vec<Option<f64>>> {
    let k = bounds::k_from_q(q)?;
    let m = bounds::lower_bound_m_with(x, q, cfg)?;
    let upper = bounds::upper_bound_m(x, k)?;
    let mori = match q {
        QFactor::Finite(v) => Some(bounds::mori_upper_bound_on_ratio(x, v)?),
        QFactor::Infinite => None,
    };
    Ok(vec![
        Some(x),
        q.finite(),
        Some(k),
        Some(m.value),
        Some(m.error),
        Some(upper),
        Some(1.0 - k),
        Some(1.0 + k),
        mori,
        Some(m.tolerance),
    ])
}

fn cmd_bounds(a: BoundsArgs, out: &mut dyn Write) -> CliResult {
    let cfg = quad_config()?;
    let (xs, qs) = match (&a.grid, a.x, &a.q) {
        (Some(g), None, None) => {
            let (xr, qr) = g
                .split_once(',')
                .ok_or_else(|| Failure::Config(format!("grid {g:?} must be X0:X1:NX,Q0:Q1:NQ")))?;
            let qs = parse_range(qr, "Q")?
                .into_iter()
                .map(|v| QFactor::new(v).map_err(Failure::from))
                .collect::<CliResult<Vec<_>>>()?;
            (parse_range(xr, "x")?, qs)
        }
        (None, Some(x), Some(q)) => (vec![x], vec![parse_q(q)?]),
        _ => return Err(Failure::Config("give either --x and --q, or --grid alone".into())),
    };
    let mut rows = Vec::new();
    for &q in &qs {
        for &x in &xs {
            rows.push(bounds_row(x, q, cfg)?);
        }
    }
    match a.format {
        Format::Json => {
            let max_err = rows.iter().filter_map(|r| r[4]).fold(0.0, f64::max);
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let obj = BOUNDS_COLUMNS
                        .iter()
                        .zip(r)
                        .map(|(c, v)| {
                            let v = match (c, v) {
                                (&"q", None) => json!("inf"),
                                (_, v) => json!(v),
                            };
                            (c.to_string(), v)
                        })
                        .collect::<serde_json::Map<_, _>>();
                    Value::Object(obj)
                })
                .collect();
            let doc = json!({
                "rows": rows,
                "metadata": {
                    "quad_tolerance": cfg.abs_tol,
                    "max_quad_error": max_err,
                    "mori_breakpoint": "16^-Q",
                }
            });
            emit(out, &pretty(&doc))
        }
        Format::Csv => {
            let mut text = BOUNDS_COLUMNS.join(",");
            text.push('\n');
            for r in &rows {
                let cells: Vec<String> = r
                    .iter()
                    .enumerate()
                    .map(|(i, v)| match (i, v) {
                        (1, None) => "inf".to_string(),
                        (_, Some(v)) => csv_number(*v),
                        (_, None) => String::new(),
                    })
                    .collect();
                text.push_str(&cells.join(","));
                text.push('\n');
            }
            emit(out, &text)
        }
    }
}

fn parse_point(s: &str) -> CliResult<Complex64> {
    let bad = || Failure::Config(format!("z0 {s:?} must look like RE,IM"));
    let (re, im) = s.split_once(',').ok_or_else(bad)?;
    Ok(Complex64::new(re.trim().parse().map_err(|_| bad())?, im.trim().parse().map_err(|_| bad())?))
}

fn read_file(path: &PathBuf) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &PathBuf, text: &str) -> CliResult {
    std::fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn cmd_radius(a: RadiusArgs, out: &mut dyn Write) -> CliResult {
    let map = HarmonicMap::from_json(&read_file(&a.map)?)?;
    let z0 = parse_point(&a.z0)?;
    if a.analytic {
        if z0 != Complex64::new(0.0, 0.0) {
            return Err(Failure::Config("--analytic is only available at z0 = 0".into()));
        }
        if a.path.is_some() {
            return Err(Failure::Config("--path needs the ray-lift estimator".into()));
        }
        let est = radii::analytic_radius(&map)?;
        return emit(out, &pretty(&est));
    }
    let cfg = SweepConfig::with_directions(a.directions, a.refine);
    let est = radii::univalent_disk_radius(&map, z0, &cfg)?;
    emit(out, &pretty(&est))?;
    if let Some(path) = &a.path {
        let ray = radii::minimizing_ray(&map, z0, &est, &cfg.ray)?;
        write_file(path, &ray.path_csv())?;
    }
    if est.lower_bound_only {
        return Err(Failure::Check("no ray escaped (step-limit); the value is a lower bound".into()));
    }
    Ok(())
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> CliResult {
    let params = match &a.params {
        None => SuiteParams::default(),
        Some(path) => serde_json::from_str(&read_file(path)?)
            .map_err(|e| Failure::Config(format!("bad parameter file {}: {e}", path.display())))?,
    };
    verify::quad_tol()?;
    let suite = match a.suite {
        SuiteArg::All => Suite::All,
        SuiteArg::Theorem1 => Suite::Theorem1,
        SuiteArg::Theorem2 => Suite::Theorem2,
        SuiteArg::Theorem3 => Suite::Theorem3,
        SuiteArg::Sharpness => Suite::Sharpness,
    };
    let reports = verify::run_suite(suite, &params).map_err(|e| Failure::Config(e.to_string()))?;
    emit(out, &pretty(&reports))?;
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| r.outcome == Outcome::Fail)
        .map(|r| r.check_name.as_str())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("failed checks: {}", failed.join("; "))))
    }
}

fn cmd_plot(a: PlotArgs, out: &mut dyn Write) -> CliResult {
    let mut spec = match (&a.source.preset, &a.source.spec) {
        (Some(name), None) => plot::preset(name)?,
        (None, Some(path)) => serde_json::from_str(&read_file(path)?)
            .map_err(|e| Failure::Config(format!("bad plot specification {}: {e}", path.display())))?,
        _ => unreachable!("clap requires exactly one source"),
    };
    if let Some(o) = &a.output {
        spec.output = o.display().to_string();
    }
    let svg = plot::render(&spec)?;
    write_file(&PathBuf::from(&spec.output), &svg)?;
    emit(out, &format!("{}\n", spec.output))
}
