//! Command-line front end: every computation of the crate behind one
//! subcommand each, with JSON or CSV output and a static SVG figure.

mod output;
mod suite;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::QcdError;
use crate::metrics::{gehring_h, hyperbolic_distance, kra_distance, DiscPointPair};
use crate::modulus::phi;
use crate::shift::{beltrami_of_shift, build_shift, evaluate_shift, extremal_dilatation, ShiftMap};
use crate::specfun::{set_agm_tolerance, DEFAULT_AGM_TOLERANCE};

pub use output::{format_real, Cell, Record, Report};
pub use suite::{run_suite, Check, Suite, SUITE_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub tolerance: f64,
    pub grid_n: usize,
    pub fd_step: f64,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-9,
            grid_n: 512,
            fd_step: 1e-5,
            output_format: OutputFormat::Json,
            output_path: None,
        }
    }
}

impl RunConfig {
    fn validate(&self) -> Result<(), String> {
        if !(self.tolerance > 0.0) || !self.tolerance.is_finite() {
            return Err(format!("--tol must be positive, got {}", self.tolerance));
        }
        if self.grid_n < 32 {
            return Err(format!("--grid-n must be at least 32, got {}", self.grid_n));
        }
        if !(self.fd_step > 0.0) || !self.fd_step.is_finite() {
            return Err(format!("--fd-step must be positive, got {}", self.fd_step));
        }
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(name = "qcd", version, about = "Extremal quasiconformal displacement of the unit disc")]
#[command(allow_negative_numbers = true)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Tolerance for map construction and root finding.
    #[arg(long = "tol", global = true, env = "QCD_TOL", default_value_t = 1e-9)]
    tolerance: f64,
    /// Relative stopping threshold of the AGM iteration.
    #[arg(long, global = true, default_value_t = DEFAULT_AGM_TOLERANCE)]
    agm_tol: f64,
    /// Lattice size of the Laplace oracle.
    #[arg(long, global = true, default_value_t = 512)]
    grid_n: usize,
    /// Finite-difference step.
    #[arg(long, global = true, default_value_t = 1e-5)]
    fd_step: f64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Grötzsch modulus function Φ(R).
    Phi {
        #[arg(long = "R")]
        r: f64,
    },
    /// Dilatation of the extremal map moving 0 to −x.
    K {
        #[arg(long)]
        x: f64,
    },
    /// Image of an n×n polar grid under the extremal map.
    Map {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        grid: usize,
        /// Also draw the image grid as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Finite-difference Beltrami coefficient at seeded random points.
    Beltrami {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        samples: usize,
    },
    /// Kra and hyperbolic distances between two points of the disc.
    Kra {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z1: Complex64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z2: Complex64,
    },
    /// Gehring displacement function h(K).
    Gehring {
        #[arg(long = "K")]
        k: f64,
    },
    /// Run the verification suites.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s.split_once(',').ok_or_else(|| format!("expected RE,IM, got '{s}'"))?;
    let part = |t: &str| {
        t.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("expected RE,IM with finite reals, got '{s}'"))
    };
    Ok(Complex64::new(part(re)?, part(im)?))
}

enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<QcdError> for Failure {
    fn from(e: QcdError) -> Self {
        match e {
            QcdError::Domain(msg) => Failure::Usage(msg),
            other => Failure::Numeric(other.to_string()),
        }
    }
}

/// Parse `argv` (program name first), run, and return the exit code:
/// 0 on success, 1 on usage or domain errors, 2 on numeric failures.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run_cli`] with explicit output streams.
pub fn run_cli_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let g = &cli.global;
    let cfg = RunConfig {
        tolerance: g.tolerance,
        grid_n: g.grid_n,
        fd_step: g.fd_step,
        output_format: g.format,
        output_path: g.output.clone(),
    };
    let result = cfg
        .validate()
        .map_err(Failure::Usage)
        .and_then(|()| {
            if !(g.agm_tol > 0.0) {
                return Err(Failure::Usage(format!("--agm-tol must be positive, got {}", g.agm_tol)));
            }
            set_agm_tolerance(g.agm_tol);
            execute(&cli.command, &cfg)
        })
        .and_then(|(report, ok)| {
            emit(&report, &cfg, out).map_err(|e| Failure::Usage(format!("cannot write output: {e}")))?;
            Ok(ok)
        });
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => {
            let _ = writeln!(err, "error: verification failed");
            EXIT_NUMERIC
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Numeric(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_NUMERIC
        }
    }
}

fn emit(report: &Report, cfg: &RunConfig, out: &mut dyn Write) -> std::io::Result<()> {
    let mut file;
    let sink: &mut dyn Write = match &cfg.output_path {
        Some(path) => {
            file = BufWriter::new(File::create(path)?);
            &mut file
        }
        None => out,
    };
    match cfg.output_format {
        OutputFormat::Json => report.write_json(sink)?,
        OutputFormat::Csv => report.write_csv(sink)?,
    }
    sink.flush()
}

/// The report, and whether every verification check passed.
fn execute(cmd: &Command, cfg: &RunConfig) -> Result<(Report, bool), Failure> {
    let report = match *cmd {
        Command::Phi { r } => Report::scalar(vec![("R", r.into()), ("phi", phi(r)?.into())]),
        Command::K { x } => {
            let p = if x > 0.0 && x < 1.0 { phi(1.0 / x)? } else { f64::NAN };
            let k = extremal_dilatation(x)?;
            Report::scalar(vec![("x", x.into()), ("phi", p.into()), ("K", k.into()), ("outer_radius", p.sqrt().into())])
        }
        Command::Map { x, grid, ref svg } => {
            if grid == 0 {
                return Err(Failure::Usage("--grid must be positive".into()));
            }
            let f = build_shift(x, cfg.tolerance)?;
            let mut rows = Vec::with_capacity(grid * grid);
            for (z, w) in polar_grid_image(&f, grid)? {
                rows.push(vec![("re_in", z.re.into()), ("im_in", z.im.into()), ("re_out", w.re.into()), ("im_out", w.im.into())]);
            }
            if let Some(path) = svg {
                write_svg(&f, grid, path)?;
            }
            Report::table(
                vec![("x", x.into()), ("K", f.dilatation().into()), ("grid", grid.into())],
                "points",
                rows,
            )
        }
        Command::Beltrami { x, samples } => beltrami_report(x, samples, cfg)?,
        Command::Kra { z1, z2 } => {
            let pair = DiscPointPair::new(z1, z2)?;
            Report::scalar(vec![
                ("z1_re", z1.re.into()),
                ("z1_im", z1.im.into()),
                ("z2_re", z2.re.into()),
                ("z2_im", z2.im.into()),
                ("rho", pair.rho.into()),
                ("kra", kra_distance(z1, z2)?.into()),
                ("hyperbolic", hyperbolic_distance(z1, z2)?.into()),
            ])
        }
        Command::Gehring { k } => {
            let h = gehring_h(k, cfg.tolerance)?;
            Report::scalar(vec![("K", k.into()), ("h", h.into()), ("x", (0.5 * h).tanh().into())])
        }
        Command::Verify { suite } => {
            let checks = run_suite(suite, cfg)?;
            let ok = checks.iter().all(|c| c.passed);
            let rows = checks
                .iter()
                .map(|c| vec![("name", c.name.into()), ("value", c.value.into()), ("tolerance", c.tolerance.into()), ("passed", c.passed.into())])
                .collect();
            let name = suite.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default();
            let fields = vec![("suite", name.into()), ("passed", ok.into()), ("checks", checks.len().into())];
            return Ok((Report::table(fields, "checks", rows), ok));
        }
    };
    Ok((report, true))
}

/// Polar grid `r = i/n`, `θ = 2πj/n` for `1 ≤ i ≤ n`, `0 ≤ j < n`, with
/// its image.
fn polar_grid_image(f: &ShiftMap, n: usize) -> crate::Result<Vec<(Complex64, Complex64)>> {
    let mut out = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 0..n {
            let z = Complex64::from_polar(i as f64 / n as f64, std::f64::consts::TAU * j as f64 / n as f64);
            out.push((z, evaluate_shift(f, z)?));
        }
    }
    Ok(out)
}

fn beltrami_report(x: f64, samples: usize, cfg: &RunConfig) -> Result<Report, Failure> {
    let f = build_shift(x, cfg.tolerance)?;
    let k = f.dilatation();
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    let mut rows = Vec::with_capacity(samples);
    let mut attempts = 0;
    while rows.len() < samples {
        attempts += 1;
        if attempts > 100 * samples.max(1) {
            return Err(Failure::Numeric("could not place Beltrami samples away from the singular set".into()));
        }
        let z = Complex64::from_polar(rng.random_range(0.05_f64..0.95), rng.random_range(0.0..std::f64::consts::TAU));
        let s = match beltrami_of_shift(&f, z, cfg.fd_step) {
            Ok(s) => s,
            Err(QcdError::Domain(_)) => continue,
            Err(e) => return Err(e.into()),
        };
        let phase = s.teichmuller_phase();
        rows.push(vec![
            ("re", z.re.into()),
            ("im", z.im.into()),
            ("mu_re", s.mu.re.into()),
            ("mu_im", s.mu.im.into()),
            ("mu_abs", s.mu.norm().into()),
            ("phase_re", phase.re.into()),
            ("phase_im", phase.im.into()),
        ]);
    }
    Ok(Report::table(
        vec![("x", x.into()), ("K", k.into()), ("mu_expected", ((k - 1.0) / (k + 1.0)).into()), ("samples", samples.into())],
        "samples",
        rows,
    ))
}

/// SVG 1.1 drawing of the image of the polar grid: `n` circles and `n`
/// spokes, each a polyline, over the unit circle.
pub fn svg_document(f: &ShiftMap, n: usize) -> crate::Result<String> {
    let per_curve = (8 * n).clamp(64, 720);
    let mut curves = Vec::with_capacity(2 * n);
    for i in 1..=n {
        let r = i as f64 / n as f64;
        let pts = (0..=per_curve)
            .map(|k| evaluate_shift(f, Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / per_curve as f64)))
            .collect::<crate::Result<Vec<_>>>()?;
        curves.push(("#1f4e79", pts));
    }
    for j in 0..n {
        let th = std::f64::consts::TAU * j as f64 / n as f64;
        let pts = (0..=per_curve)
            .map(|k| evaluate_shift(f, Complex64::from_polar(k as f64 / per_curve as f64, th)))
            .collect::<crate::Result<Vec<_>>>()?;
        curves.push(("#b03a2e", pts));
    }
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n");
    s.push_str("<!DOCTYPE svg PUBLIC \"-//W3C//DTD SVG 1.1//EN\" \"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd\">\n");
    s.push_str("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"600\" height=\"600\" viewBox=\"-1.1 -1.1 2.2 2.2\">\n");
    let _ = writeln!(s, "<title>Extremal shift, x = {}, K = {}</title>", f.x(), format_real(f.dilatation()));
    s.push_str("<g transform=\"scale(1,-1)\" fill=\"none\" stroke-width=\"0.004\">\n");
    s.push_str("<circle cx=\"0\" cy=\"0\" r=\"1\" stroke=\"#000000\"/>\n");
    for (color, pts) in curves {
        let _ = write!(s, "<polyline stroke=\"{color}\" points=\"");
        for (k, p) in pts.iter().enumerate() {
            let sep = if k == 0 { "" } else { " " };
            let _ = write!(s, "{sep}{:.6},{:.6}", p.re, p.im);
        }
        s.push_str("\"/>\n");
    }
    let _ = writeln!(s, "<circle cx=\"{:.6}\" cy=\"0\" r=\"0.012\" fill=\"#000000\"/>", -f.x());
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}

fn write_svg(f: &ShiftMap, n: usize, path: &Path) -> Result<(), Failure> {
    let doc = svg_document(f, n)?;
    std::fs::write(path, doc).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}
