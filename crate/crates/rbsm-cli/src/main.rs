//! Command line front end: tessellation generation, contact statistics,
//! analytic predictors, expectation verification, curve plotting, single
//! simulations and stiffness-ratio sweeps.

mod svg;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rbsm::geometry::{
    chi_statistics, generate, DomainBox, GeometryError, Tessellation, TessellationKind,
};
use rbsm::homogenize::{alpha_sweep, simulate, HomogenizeError, RunOptions, SweepRow};
use rbsm::solver::{SolveMethod, StrainLoad};
use rbsm::theory::{
    closed_expectations, expectation_oracle, predict_cone, predict_general, Mode,
    OrientationDistribution, TheoryError,
};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "rbsm",
    about = "Rigid-body-spring lattice models: generation, prediction, simulation",
    version
)]
struct Cli {
    /// Default seed for subcommands that take one.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Size of the worker thread pool (0 = automatic).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Suppress warnings on standard error.
    #[arg(long, global = true)]
    quiet: bool,
    /// Overwrite existing output files.
    #[arg(long, global = true)]
    force: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a tessellation and write it as JSON.
    Generate(GenerateArgs),
    /// Contact-angle statistics of a tessellation file.
    Stats(StatsArgs),
    /// Analytic Poisson's ratio / modulus predictors.
    Predict(PredictArgs),
    /// Check closed-form orientation expectations against Monte Carlo.
    VerifyExpectations(VerifyArgs),
    /// Emit predictor curve plots (SVG + CSV).
    Curves(CurvesArgs),
    /// Solve one structure under prescribed boundary strain.
    Simulate(SimulateArgs),
    /// Sweep the stiffness ratio and compare against the predictor.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Voronoi,
    RandVoronoi,
    Random,
    Centered,
}

impl From<KindArg> for TessellationKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Voronoi => TessellationKind::Voronoi,
            KindArg::RandVoronoi => TessellationKind::RandomizedVoronoi,
            KindArg::Random => TessellationKind::Random,
            KindArg::Centered => TessellationKind::CenteredRandom,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum ModeArg {
    /// plane stress
    Ps,
    /// plane strain
    Pe,
    /// full three-dimensional
    #[value(name = "3d")]
    ThreeD,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Ps => Mode::PlaneStress,
            ModeArg::Pe => Mode::PlaneStrain,
            ModeArg::ThreeD => Mode::ThreeD,
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    /// Tessellation family.
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Domain width and height in units of the minimum spacing.
    #[arg(long, num_args = 2, value_names = ["W", "H"])]
    size: Vec<f64>,
    /// Minimum point spacing (length unit of the model).
    #[arg(long, default_value_t = 1.0)]
    lmin: f64,
    /// Random seed (overrides the global --seed).
    #[arg(long)]
    seed: Option<u64>,
    /// Output tessellation JSON.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct StatsArgs {
    /// Input tessellation JSON.
    #[arg(long = "in")]
    input: PathBuf,
    /// Number of histogram bins over [-pi, pi].
    #[arg(long, default_value_t = 80)]
    bins: usize,
    /// Output CSV (chi [rad], density [1/rad]).
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct PredictArgs {
    /// Analysis mode.
    #[arg(long, value_enum)]
    mode: ModeArg,
    /// Tangential/normal stiffness ratio (dimensionless, >= 0).
    #[arg(long)]
    alpha: f64,
    /// Cone half-width gamma in radians (0..=pi).
    #[arg(long, conflicts_with_all = ["i1", "i2", "table"])]
    gamma: Option<f64>,
    /// First angle moment I1 = E[cos chi] (dimensionless).
    #[arg(long, requires = "i2")]
    i1: Option<f64>,
    /// Second angle moment I2 = E[cos 2 chi] (dimensionless).
    #[arg(long, requires = "i1")]
    i2: Option<f64>,
    /// Tabulated density CSV with columns chi [rad], density [1/rad].
    #[arg(long, conflicts_with_all = ["i1", "i2"])]
    table: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Dimension of the model (2 or 3).
    #[arg(long)]
    dim: usize,
    /// Gamma grid as start:end:count (radians).
    #[arg(long, value_name = "A:B:N")]
    gamma_grid: String,
    /// Monte Carlo samples per grid point.
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    /// Random seed (overrides the global --seed).
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV of the comparison.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct CurvesArgs {
    /// Which figure family to draw: 2 (constants vs alpha), 3 (nu vs
    /// gamma), 4 (nu vs I2).
    #[arg(long)]
    figure: u8,
    /// Output SVG path.
    #[arg(long)]
    svg: PathBuf,
    /// Optional CSV with the plotted values.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Input tessellation JSON.
    #[arg(long = "in")]
    input: PathBuf,
    /// Contact normal stiffness E0 (stress units).
    #[arg(long, default_value_t = 1.0)]
    e0: f64,
    /// Tangential/normal stiffness ratio (dimensionless, >= 0).
    #[arg(long)]
    alpha: f64,
    /// Axial strain eps_11 prescribed on the boundary (dimensionless).
    #[arg(long, default_value_t = 1e-3)]
    p: f64,
    /// Axial strain eps_22 prescribed on the boundary (dimensionless).
    #[arg(long, default_value_t = 0.0)]
    q: f64,
    /// Evaluate constants under plane strain instead of plane stress.
    #[arg(long)]
    plane_strain: bool,
    /// Window margin for the stress estimate, in multiples of lmin.
    #[arg(long, default_value_t = 3.0)]
    margin: f64,
    /// Use conjugate gradients instead of the direct factorization.
    #[arg(long)]
    cg: bool,
    /// Include per-contact states in the result.
    #[arg(long)]
    states: bool,
    /// Output result JSON.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    /// Input tessellation JSON.
    #[arg(long = "in")]
    input: PathBuf,
    /// Comma-separated stiffness ratios (dimensionless).
    #[arg(long, value_delimiter = ',')]
    alphas: Vec<f64>,
    /// Contact normal stiffness E0 (stress units).
    #[arg(long, default_value_t = 1.0)]
    e0: f64,
    /// Analysis mode (ps or pe; the numeric solver is two dimensional).
    #[arg(long, value_enum, default_value = "ps")]
    mode: ModeArg,
    /// Axial strain eps_11 (dimensionless).
    #[arg(long, default_value_t = 1e-3)]
    p: f64,
    /// Axial strain eps_22 (dimensionless).
    #[arg(long, default_value_t = 0.0)]
    q: f64,
    /// Window margin for the stress estimate, in multiples of lmin.
    #[arg(long, default_value_t = 3.0)]
    margin: f64,
    /// Output CSV of the sweep rows.
    #[arg(long)]
    csv: PathBuf,
    /// Optional SVG comparing numeric and predicted constants.
    #[arg(long)]
    svg: Option<PathBuf>,
}

/// Failure categories mapped to process exit codes.
enum CliError {
    /// exit 1
    Config(String),
    /// exit 2
    Generation(String),
    /// exit 3
    Solver(String),
    /// exit 4
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Generation(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m)
            | CliError::Generation(m)
            | CliError::Solver(m)
            | CliError::Io(m) => m,
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::Io(_) | GeometryError::Serde(_) => CliError::Io(e.to_string()),
            _ => CliError::Generation(e.to_string()),
        }
    }
}

impl From<TheoryError> for CliError {
    fn from(e: TheoryError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<HomogenizeError> for CliError {
    fn from(e: HomogenizeError) -> Self {
        match e {
            HomogenizeError::Geometry(g) => g.into(),
            HomogenizeError::Theory(t) => t.into(),
            other => CliError::Solver(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

struct StderrLogger {
    quiet: bool,
}

impl log::Log for StderrLogger {
    fn enabled(&self, metadata: &log::Metadata) -> bool {
        !self.quiet && metadata.level() <= log::Level::Info
    }

    fn log(&self, record: &log::Record) {
        if self.enabled(record.metadata()) {
            eprintln!("[{}] {}", record.level(), record.args());
        }
    }

    fn flush(&self) {}
}

fn main() -> ExitCode {
    // Map argument errors to exit code 1 (clap's default would be 2, which
    // is reserved for generation failures here).
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let logger = Box::leak(Box::new(StderrLogger { quiet: cli.quiet }));
    let _ = log::set_logger(logger);
    log::set_max_level(log::LevelFilter::Info);
    if cli.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

/// Ensure an output path can be created without clobbering (unless forced).
fn check_output(path: &Path, force: bool) -> Result<(), CliError> {
    if path.exists() && !force {
        return Err(CliError::Config(format!(
            "output {} exists; pass --force to overwrite",
            path.display()
        )));
    }
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() && !parent.is_dir() {
            return Err(CliError::Io(format!(
                "output directory {} does not exist",
                parent.display()
            )));
        }
    }
    Ok(())
}

fn check_input(path: &Path) -> Result<(), CliError> {
    if !path.is_file() {
        return Err(CliError::Io(format!(
            "input file {} does not exist",
            path.display()
        )));
    }
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)?;
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Generate(a) => cmd_generate(cli, a),
        Command::Stats(a) => cmd_stats(cli, a),
        Command::Predict(a) => cmd_predict(a),
        Command::VerifyExpectations(a) => cmd_verify(cli, a),
        Command::Curves(a) => cmd_curves(cli, a),
        Command::Simulate(a) => cmd_simulate(cli, a),
        Command::Sweep(a) => cmd_sweep(cli, a),
    }
}

fn cmd_generate(cli: &Cli, a: &GenerateArgs) -> Result<(), CliError> {
    if a.size.len() != 2 {
        return Err(CliError::Config("--size takes exactly W H".into()));
    }
    if !(a.lmin > 0.0) {
        return Err(CliError::Config("--lmin must be positive".into()));
    }
    check_output(&a.out, cli.force)?;
    let seed = a.seed.or(cli.seed).unwrap_or(0);
    let domain = DomainBox::sized(a.size[0], a.size[1]).map_err(CliError::from)?;
    let t = generate(a.kind.into(), domain, a.lmin, seed, 10_000)?;
    t.save_json(&a.out)?;
    println!(
        "{} tessellation: {} bodies, {} contacts -> {}",
        t.kind,
        t.nodes.len(),
        t.contacts.len(),
        a.out.display()
    );
    Ok(())
}

fn cmd_stats(cli: &Cli, a: &StatsArgs) -> Result<(), CliError> {
    check_input(&a.input)?;
    if let Some(csv) = &a.csv {
        check_output(csv, cli.force)?;
    }
    let t = Tessellation::load_json(&a.input)?;
    let stats = chi_statistics(&t.contacts, a.bins)?;
    println!("elements: {}", stats.sample_count);
    println!("I1 = {:.6}", stats.i1);
    println!("I2 = {:.6}", stats.i2);
    if let Some(csv) = &a.csv {
        let mut out = String::from("chi,density\n");
        for (x, d) in stats.grid.iter().zip(&stats.density) {
            let _ = writeln!(out, "{x},{d}");
        }
        write_file(csv, &out)?;
    }
    Ok(())
}

fn load_table(path: &Path) -> Result<OrientationDistribution, CliError> {
    check_input(path)?;
    let text = std::fs::read_to_string(path)?;
    let mut grid = Vec::new();
    let mut density = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (ln == 0 && line.chars().any(|c| c.is_alphabetic())) {
            continue;
        }
        let mut parts = line.split(',');
        let (Some(x), Some(d)) = (parts.next(), parts.next()) else {
            return Err(CliError::Config(format!("table line {} malformed", ln + 1)));
        };
        grid.push(
            x.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Config(format!("table line {}: {e}", ln + 1)))?,
        );
        density.push(
            d.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Config(format!("table line {}: {e}", ln + 1)))?,
        );
    }
    OrientationDistribution::tabulated_normalized(grid, density, 2).map_err(CliError::from)
}

fn cmd_predict(a: &PredictArgs) -> Result<(), CliError> {
    let mode: Mode = a.mode.into();
    let ec = if let Some(gamma) = a.gamma {
        predict_cone(a.alpha, gamma, mode)?
    } else if let Some(table) = &a.table {
        let dist = load_table(table)?;
        predict_general(a.alpha, dist.i1(), dist.i2(), mode)?
    } else if let (Some(i1), Some(i2)) = (a.i1, a.i2) {
        predict_general(a.alpha, i1, i2, mode)?
    } else {
        return Err(CliError::Config(
            "pass either --gamma, --i1 with --i2, or --table".into(),
        ));
    };
    println!("mode={mode}");
    println!("nu={:.6}", ec.nu);
    println!("E/E0={:.6}", ec.e);
    Ok(())
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Config(format!(
            "grid '{spec}' must be start:end:count"
        )));
    }
    let a: f64 = parts[0]
        .parse()
        .map_err(|e| CliError::Config(format!("grid start: {e}")))?;
    let b: f64 = parts[1]
        .parse()
        .map_err(|e| CliError::Config(format!("grid end: {e}")))?;
    let n: usize = parts[2]
        .parse()
        .map_err(|e| CliError::Config(format!("grid count: {e}")))?;
    if n == 0 {
        return Err(CliError::Config("grid count must be positive".into()));
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect())
}

fn cmd_verify(cli: &Cli, a: &VerifyArgs) -> Result<(), CliError> {
    if a.dim != 2 && a.dim != 3 {
        return Err(CliError::Config("--dim must be 2 or 3".into()));
    }
    if a.samples == 0 {
        return Err(CliError::Config("--samples must be positive".into()));
    }
    if let Some(csv) = &a.csv {
        check_output(csv, cli.force)?;
    }
    let seed = a.seed.or(cli.seed).unwrap_or(1);
    let grid = parse_grid(&a.gamma_grid)?;
    let mut csv = String::from("dim,gamma,m_closed,m_mc,m_se,max_sigma,pass\n");
    let mut all_pass = true;
    for (row, &gamma) in grid.iter().enumerate() {
        let dist = OrientationDistribution::cone(gamma, a.dim)?;
        let est = expectation_oracle(&dist, a.samples, seed.wrapping_add(row as u64));
        let (m_closed, n_closed, t_closed) = closed_expectations(gamma, a.dim);
        let max_sigma = est.max_sigma_deviation(&n_closed, &t_closed);
        let m_err = (est.m_vol - m_closed).abs();
        let pass = max_sigma <= 3.0 && m_err <= 5e-3;
        all_pass &= pass;
        println!(
            "{} dim={} gamma={:.4} m_err={:.2e} max_sigma={:.2}",
            if pass { "PASS" } else { "FAIL" },
            a.dim,
            gamma,
            m_err,
            max_sigma
        );
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            a.dim, gamma, m_closed, est.m_vol, est.m_vol_se, max_sigma, pass
        );
    }
    if let Some(path) = &a.csv {
        write_file(path, &csv)?;
    }
    if all_pass {
        Ok(())
    } else {
        Err(CliError::Config(
            "expectation verification failed; see rows above".into(),
        ))
    }
}

fn cmd_curves(cli: &Cli, a: &CurvesArgs) -> Result<(), CliError> {
    check_output(&a.svg, cli.force)?;
    if let Some(csv) = &a.csv {
        check_output(csv, cli.force)?;
    }
    let modes = [Mode::PlaneStress, Mode::PlaneStrain, Mode::ThreeD];
    let mode_name = |m: Mode| match m {
        Mode::PlaneStress => "plane stress",
        Mode::PlaneStrain => "plane strain",
        Mode::ThreeD => "3D",
    };
    let mut csv = String::new();
    let panels: Vec<svg::Panel> = match a.figure {
        2 => {
            // elastic constants against the stiffness ratio (parallel contacts)
            let alphas: Vec<f64> = (0..=120).map(|i| i as f64 * 0.025).collect();
            csv.push_str("mode,alpha,nu,E_over_E0\n");
            let mut nu_series = Vec::new();
            let mut e_series = Vec::new();
            for &m in &modes {
                let mut nu_pts = Vec::new();
                let mut e_pts = Vec::new();
                for &al in &alphas {
                    let ec = rbsm::theory::predict_limit(al, m);
                    nu_pts.push((al, ec.nu));
                    e_pts.push((al, ec.e));
                    let _ = writeln!(csv, "{},{},{},{}", mode_name(m), al, ec.nu, ec.e);
                }
                nu_series.push(svg::Series {
                    label: mode_name(m).into(),
                    points: nu_pts,
                });
                e_series.push(svg::Series {
                    label: mode_name(m).into(),
                    points: e_pts,
                });
            }
            vec![
                svg::Panel {
                    title: "Poisson's ratio vs stiffness ratio".into(),
                    x_label: "alpha".into(),
                    y_label: "nu".into(),
                    series: nu_series,
                },
                svg::Panel {
                    title: "Elastic modulus vs stiffness ratio".into(),
                    x_label: "alpha".into(),
                    y_label: "E / E0".into(),
                    series: e_series,
                },
            ]
        }
        3 => {
            // Poisson's ratio bounds against the cone half-width
            let gammas: Vec<f64> = (1..=314).map(|i| i as f64 * 0.01).collect();
            csv.push_str("mode,gamma,nu_alpha0,nu_alpha_inf\n");
            let mut series = Vec::new();
            for &m in &modes {
                let mut a0_pts = Vec::new();
                let mut ainf_pts = Vec::new();
                for &g in &gammas {
                    let i2 = rbsm::theory::cone_i2(g, m.dim());
                    let (a0, ainf) = nu_extremes(m, i2);
                    if a0.is_finite() && ainf.is_finite() {
                        a0_pts.push((g, a0));
                        ainf_pts.push((g, ainf));
                        let _ = writeln!(csv, "{},{},{},{}", mode_name(m), g, a0, ainf);
                    }
                }
                series.push(svg::Series {
                    label: format!("{} alpha=0", mode_name(m)),
                    points: a0_pts,
                });
                series.push(svg::Series {
                    label: format!("{} alpha=inf", mode_name(m)),
                    points: ainf_pts,
                });
            }
            vec![svg::Panel {
                title: "Poisson's ratio bounds vs cone half-width".into(),
                x_label: "gamma [rad]".into(),
                y_label: "nu".into(),
                series,
            }]
        }
        4 => {
            let i2s: Vec<f64> = (-100..=100).map(|i| i as f64 * 0.01).collect();
            csv.push_str("mode,I2,nu_alpha0,nu_alpha_inf\n");
            let mut series = Vec::new();
            for &m in &modes {
                let mut a0_pts = Vec::new();
                let mut ainf_pts = Vec::new();
                for &i2 in &i2s {
                    let (a0, ainf) = nu_extremes(m, i2);
                    if a0.is_finite() && ainf.is_finite() {
                        a0_pts.push((i2, a0));
                        ainf_pts.push((i2, ainf));
                        let _ = writeln!(csv, "{},{},{},{}", mode_name(m), i2, a0, ainf);
                    }
                }
                series.push(svg::Series {
                    label: format!("{} alpha=0", mode_name(m)),
                    points: a0_pts,
                });
                series.push(svg::Series {
                    label: format!("{} alpha=inf", mode_name(m)),
                    points: ainf_pts,
                });
            }
            vec![svg::Panel {
                title: "Poisson's ratio bounds vs I2".into(),
                x_label: "I2".into(),
                y_label: "nu".into(),
                series,
            }]
        }
        other => {
            return Err(CliError::Config(format!(
                "--figure must be 2, 3 or 4 (got {other})"
            )))
        }
    };
    let rendered = svg::render(&panels).map_err(CliError::Config)?;
    write_file(&a.svg, &rendered)?;
    if let Some(path) = &a.csv {
        write_file(path, &csv)?;
    }
    println!("wrote {}", a.svg.display());
    Ok(())
}

/// Predictor values at the two stiffness extremes (alpha 0 and the
/// analytic alpha to infinity limit), in that order.
fn nu_extremes(mode: Mode, i2: f64) -> (f64, f64) {
    let a0 = match mode {
        Mode::PlaneStress => i2 / (2.0 + i2),
        Mode::PlaneStrain => i2 / (2.0 + 2.0 * i2),
        Mode::ThreeD => (3.0 * i2 + 1.0) / (7.0 * i2 + 9.0),
    };
    let ainf = match mode {
        Mode::PlaneStress => -i2 / (2.0 - i2),
        Mode::PlaneStrain => -i2 / (2.0 - 2.0 * i2),
        Mode::ThreeD => (3.0 * i2 + 1.0) / (7.0 * i2 - 11.0),
    };
    (a0, ainf)
}

#[derive(serde::Serialize)]
struct ResultDoc {
    mode: String,
    e0: f64,
    alpha: f64,
    eps: [[f64; 2]; 2],
    sigma: [[f64; 2]; 2],
    nu: f64,
    e: f64,
    v_inner: f64,
    residual_force: f64,
    residual_moment: f64,
    dofs: Vec<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    states: Option<Vec<StateDoc>>,
}

#[derive(serde::Serialize)]
struct StateDoc {
    a: usize,
    b: usize,
    delta: [f64; 2],
    e_n: f64,
    e_t: [f64; 2],
    s_n: f64,
    s_t: [f64; 2],
    f: [f64; 2],
}

fn cmd_simulate(cli: &Cli, a: &SimulateArgs) -> Result<(), CliError> {
    check_input(&a.input)?;
    check_output(&a.out, cli.force)?;
    let t = Tessellation::load_json(&a.input)?;
    let params = rbsm::theory::MaterialParams::new(a.e0, a.alpha).map_err(CliError::from)?;
    let mode = if a.plane_strain {
        Mode::PlaneStrain
    } else {
        Mode::PlaneStress
    };
    let opts = RunOptions {
        load: StrainLoad::axial(a.p, a.q),
        margin_lmin: a.margin,
        method: if a.cg {
            SolveMethod::ConjugateGradient
        } else {
            SolveMethod::Cholesky
        },
    };
    let sim = simulate(&t, &params, mode, &opts)?;
    let tensor = |t: &rbsm::tensor::Tensor2| {
        [
            [t.get(&[0, 0]), t.get(&[0, 1])],
            [t.get(&[1, 0]), t.get(&[1, 1])],
        ]
    };
    let doc = ResultDoc {
        mode: mode.to_string(),
        e0: a.e0,
        alpha: a.alpha,
        eps: tensor(&sim.macro_state.eps),
        sigma: tensor(&sim.macro_state.sigma),
        nu: sim.constants.nu,
        e: sim.constants.e,
        v_inner: sim.macro_state.v_inner,
        residual_force: sim.residual_force,
        residual_moment: sim.residual_moment,
        dofs: (0..sim.dofs.n_nodes())
            .map(|i| [sim.dofs.u(i).x, sim.dofs.u(i).y, sim.dofs.phi(i)])
            .collect(),
        states: a.states.then(|| {
            t.contacts
                .iter()
                .zip(&sim.states)
                .map(|(e, s)| StateDoc {
                    a: e.a,
                    b: e.b,
                    delta: [s.delta.x, s.delta.y],
                    e_n: s.e_n,
                    e_t: [s.e_t.x, s.e_t.y],
                    s_n: s.s_n,
                    s_t: [s.s_t.x, s.s_t.y],
                    f: [s.f.x, s.f.y],
                })
                .collect()
        }),
    };
    let text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Io(e.to_string()))?;
    write_file(&a.out, &text)?;
    println!(
        "nu={:.6} E={:.6} residual_force={:.3e} -> {}",
        doc.nu,
        doc.e,
        doc.residual_force,
        a.out.display()
    );
    Ok(())
}

fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("kind,seed,alpha,nu_num,E_num,nu_pred,E_pred,I1,I2\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.kind, r.seed, r.alpha, r.nu_num, r.e_num, r.nu_pred, r.e_pred, r.i1, r.i2
        );
    }
    out
}

fn cmd_sweep(cli: &Cli, a: &SweepArgs) -> Result<(), CliError> {
    check_input(&a.input)?;
    check_output(&a.csv, cli.force)?;
    if let Some(svg) = &a.svg {
        check_output(svg, cli.force)?;
    }
    if a.alphas.is_empty() {
        return Err(CliError::Config("--alphas must not be empty".into()));
    }
    let mode: Mode = a.mode.into();
    if mode == Mode::ThreeD {
        return Err(CliError::Config(
            "the numeric solver is two dimensional; use --mode ps or pe".into(),
        ));
    }
    let t = Tessellation::load_json(&a.input)?;
    let opts = RunOptions {
        load: StrainLoad::axial(a.p, a.q),
        margin_lmin: a.margin,
        method: SolveMethod::default(),
    };
    let mut rows = Vec::new();
    for r in alpha_sweep(&t, &a.alphas, a.e0, mode, &opts) {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => log::warn!("sweep row failed: {e}"),
        }
    }
    if rows.is_empty() {
        return Err(CliError::Solver("every sweep row failed".into()));
    }
    write_file(&a.csv, &sweep_csv(&rows))?;
    if let Some(path) = &a.svg {
        let nu_panel = svg::Panel {
            title: format!("Poisson's ratio ({})", t.kind),
            x_label: "alpha".into(),
            y_label: "nu".into(),
            series: vec![
                svg::Series {
                    label: "numeric".into(),
                    points: rows.iter().map(|r| (r.alpha, r.nu_num)).collect(),
                },
                svg::Series {
                    label: "predicted".into(),
                    points: rows.iter().map(|r| (r.alpha, r.nu_pred)).collect(),
                },
            ],
        };
        let e_panel = svg::Panel {
            title: format!("Elastic modulus ({})", t.kind),
            x_label: "alpha".into(),
            y_label: "E / E0".into(),
            series: vec![
                svg::Series {
                    label: "numeric".into(),
                    points: rows.iter().map(|r| (r.alpha, r.e_num)).collect(),
                },
                svg::Series {
                    label: "predicted".into(),
                    points: rows.iter().map(|r| (r.alpha, r.e_pred)).collect(),
                },
            ],
        };
        let rendered = svg::render(&[nu_panel, e_panel]).map_err(CliError::Config)?;
        write_file(path, &rendered)?;
    }
    println!("wrote {} rows -> {}", rows.len(), a.csv.display());
    Ok(())
}
