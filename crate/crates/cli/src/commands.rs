//! Subcommand definitions and their implementations. Each command returns
//! the text it prints so that it can be exercised without a process.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use acsusy_core::ground_state::{favourable_sector, zero_mode_axial, NormVerdict, ZeroModeOptions};
use acsusy_core::spectrum::{find_discrete_levels, ShootingOptions};
use acsusy_core::units::Dimensions;
use acsusy_core::{ChargeConfig, Domain, Sector};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::{parse_config, RunConfig};
use crate::error::{CliError, Context};
use crate::figures::{figure_series, meta_path, FigureParams};
use crate::pipeline::{self, Setup};

#[derive(Debug, Parser)]
#[command(name = "acsusy", version, about = "Supersymmetric ground states of a neutral spin-1/2 particle in Aharonov-Casher fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Broken/unbroken verdict from the zero-mode tail.
    Classify(Basic),
    /// Sample the ground state of a configuration as CSV.
    GroundState(GroundStateArgs),
    /// Normalisation constants of the ground state.
    Normalize(Basic),
    /// Superalgebra and zero-mode residual checks on a grid.
    SusyCheck(GridArgs),
    /// Lowest levels by grid diagonalisation (and shooting for the cylinder).
    Spectrum(SpectrumArgs),
    /// Write a figure series as CSV.
    Figure(FigureArgs),
    /// Minimum line-charge density for a bound ground state.
    LambdaMin(LambdaArgs),
    /// Full structured report as JSON.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct Basic {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct GridOpts {
    /// Cells per side (axial) or nodes inside r0 (cylinder).
    #[arg(long = "grid-n")]
    pub grid_n: Option<usize>,
    /// Half extent (axial) or outer radius (cylinder), in the configuration's length unit.
    #[arg(long)]
    pub extent: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GroundStateArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Sector of the axial zero mode (up, down); defaults to the decaying one.
    #[arg(long)]
    pub sector: Option<String>,
    #[command(flatten)]
    pub grid: GridOpts,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[command(flatten)]
    pub grid: GridOpts,
    /// σ₃ of the τ₃ = +1 block on radial grids (++ or +-).
    #[arg(long)]
    pub sector: Option<String>,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub m: i32,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[command(flatten)]
    pub grid: GridOpts,
    /// up, down, ++, +-, -+ or --; defaults to the sector holding the ground state.
    #[arg(long)]
    pub sector: Option<String>,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub m: i32,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(long)]
    pub id: u8,
    /// CSV path; a `<out>.meta` sidecar is written next to it. Prints to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Comma-separated β·r0² values for figure 3.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub betas: Option<Vec<f64>>,
    /// Half extent of the z range for figures 1 and 2 (natural units).
    #[arg(long)]
    pub extent: Option<f64>,
    /// Optional configuration supplying kappa, mass and the geometry constants.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LambdaArgs {
    /// Optional configuration supplying kappa, mass and units.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[command(flatten)]
    pub grid: GridOpts,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn execute(command: &Command) -> Result<String, CliError> {
    match command {
        Command::Classify(a) => classify(&parse_config(&a.config)?, a.json),
        Command::GroundState(a) => ground_state(&parse_config(&a.config)?, a),
        Command::Normalize(a) => normalize(&parse_config(&a.config)?, a.json),
        Command::SusyCheck(a) => susy_check(&parse_config(&a.config)?, a),
        Command::Spectrum(a) => spectrum(&parse_config(&a.config)?, a),
        Command::Figure(a) => figure(a),
        Command::LambdaMin(a) => lambda_min(a),
        Command::Report(a) => {
            let mut run = parse_config(&a.config)?;
            apply_grid(&mut run, &a.grid);
            let text = report_json(&run)?;
            match a.out.as_ref().or(run.out.as_ref()) {
                Some(path) => {
                    fs::write(path, &text).map_err(|source| CliError::Io { path: path.clone(), source })?;
                    Ok(format!("wrote {}\n", path.display()))
                }
                None => Ok(text),
            }
        }
    }
}

fn apply_grid(run: &mut RunConfig, grid: &GridOpts) {
    if grid.grid_n.is_some() {
        run.grid_n = grid.grid_n;
    }
    if grid.extent.is_some() {
        run.extent = grid.extent;
    }
}

fn natural_extent(run: &RunConfig) -> Option<f64> {
    run.extent.map(|x| run.context().to_natural(x, Dimensions::LENGTH))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialise");
    s.push('\n');
    s
}

/// The serialized report; byte-identical for identical configurations.
pub fn report_json(run: &RunConfig) -> Result<String, CliError> {
    Ok(to_json(&pipeline::run_report(run)?))
}

#[derive(Serialize)]
struct ClassifyOutput {
    geometry: &'static str,
    coupling: pipeline::CouplingReport,
    verdict: pipeline::VerdictReport,
}

pub fn classify(run: &RunConfig, json: bool) -> Result<String, CliError> {
    let s = pipeline::setup(run)?;
    let (_, verdict) = pipeline::verdict_report(&s.config, &s.coupling)?;
    let out = ClassifyOutput { geometry: run.geometry.name(), coupling: pipeline::coupling_report(run, &s), verdict };
    if json {
        return Ok(to_json(&out));
    }
    let mut t = String::new();
    let _ = writeln!(t, "geometry: {}", out.geometry);
    let _ = writeln!(t, "coupling: {} = {:e} ({})", out.coupling.kind, out.coupling.value, out.coupling.formula);
    if let Some(x) = out.coupling.strength {
        let _ = writeln!(t, "beta*r0^2: {x:e}");
    }
    let _ = write!(t, "verdict: {}", out.verdict.status);
    if let Some(sector) = &out.verdict.sector {
        let _ = write!(t, " in sector {sector}");
    }
    if let Some(mode) = out.verdict.divergence {
        let _ = write!(t, " ({mode})");
    }
    t.push('\n');
    Ok(t)
}

pub fn normalize(run: &RunConfig, json: bool) -> Result<String, CliError> {
    let s = pipeline::setup(run)?;
    let (verdict, verdict_json) = pipeline::verdict_report(&s.config, &s.coupling)?;
    let norm = pipeline::normalization_report(&s, &verdict)?;
    if json {
        #[derive(Serialize)]
        struct Out {
            verdict: pipeline::VerdictReport,
            #[serde(skip_serializing_if = "Option::is_none")]
            normalization: Option<pipeline::NormalizationReport>,
        }
        return Ok(to_json(&Out { verdict: verdict_json, normalization: norm }));
    }
    let Some(n) = norm else {
        return Ok(format!("broken ({}): the zero mode has no finite norm\n", verdict_json.divergence.unwrap_or("")));
    };
    let mut t = String::new();
    for (name, v) in [
        ("|C|^2", n.c_squared),
        ("|A|^2", n.a_squared),
        ("|B|^2", n.b_squared),
        ("P(r < r0)", n.probability_inside),
        ("P(r > r0)", n.probability_outside),
    ] {
        if let Some(v) = v {
            let _ = writeln!(t, "{name}: {v:.12e}");
        }
    }
    let _ = writeln!(t, "quadrature norm: {:.12e}", n.quadrature_norm);
    Ok(t)
}

pub fn ground_state(run: &RunConfig, args: &GroundStateArgs) -> Result<String, CliError> {
    let mut run = run.clone();
    apply_grid(&mut run, &args.grid);
    let s = pipeline::setup(&run)?;
    let (verdict, _) = pipeline::verdict_report(&s.config, &s.coupling)?;
    let grid = pipeline::default_grid(&s, run.grid_n, natural_extent(&run))?;
    let wf = match (&args.sector, s.config.domain()) {
        (Some(label), Domain::Axial) => {
            let sector = pipeline::parse_sector(label)?;
            zero_mode_axial(&s.profile, &s.coupling, &grid.nodes(), &ZeroModeOptions { sector, ..Default::default() }).context("zero mode")?
        }
        (Some(_), Domain::Radial) => return Err(CliError::argument("--sector", "the cylinder zero mode lives in the up sector only")),
        (None, Domain::Axial) => {
            acsusy_core::ground_state::closed_form_axial(&s.config, &s.coupling, &grid.nodes()).context("ground state")?
        }
        (None, Domain::Radial) => {
            acsusy_core::ground_state::zero_mode_radial(&s.config, &s.coupling, &grid.nodes()).context("ground state")?
        }
    };
    let coord = if wf.domain == Domain::Axial { "z" } else { "r" };
    let mut csv = format!("{coord},phi,phi_sq\n");
    for (x, v) in wf.coords.iter().zip(&wf.samples) {
        let _ = writeln!(csv, "{x:.16e},{v:.16e},{:.16e}", v * v);
    }
    match args.out.as_ref().or(run.out.as_ref()) {
        Some(path) => {
            fs::write(path, &csv).map_err(|source| CliError::Io { path: path.clone(), source })?;
            let meta = meta_path(path);
            let text = format!(
                "# natural units: hbar = c = 1, lengths in MeV^-1, Heaviside-Lorentz charges\ngeometry={}\nsector={}\nnormalisation={:?}\nverdict={}\n",
                s.config.name(),
                wf.sector,
                wf.norm_kind,
                if verdict.is_unbroken() { "unbroken" } else { "broken" }
            );
            fs::write(&meta, text).map_err(|source| CliError::Io { path: meta.clone(), source })?;
            Ok(format!("wrote {} ({} points)\n", path.display(), wf.len()))
        }
        None => Ok(csv),
    }
}

#[derive(Serialize)]
struct SusyCheckOutput {
    coarse: pipeline::AlgebraSection,
    fine: pipeline::AlgebraSection,
    /// Observed convergence order of each gap between the two grids.
    orders: [f64; 4],
}

pub fn susy_check(run: &RunConfig, args: &GridArgs) -> Result<String, CliError> {
    let mut run = run.clone();
    apply_grid(&mut run, &args.grid);
    let s = pipeline::setup(&run)?;
    let (verdict, _) = pipeline::verdict_report(&s.config, &s.coupling)?;
    let sigma3 = match args.sector.as_deref() {
        None => 1,
        Some(label) => {
            let sector = pipeline::parse_sector(label)?;
            if sector.tau3() != 1 {
                return Err(CliError::argument("--sector", "name the tau3 = +1 block (++ or +-); its partner is implied"));
            }
            sector.sigma3()
        }
    };
    let grid = pipeline::default_grid(&s, run.grid_n, natural_extent(&run))?;
    let coarse = pipeline::algebra_section(&s, &verdict, &grid, sigma3, args.m)?;
    let fine = pipeline::algebra_section(&s, &verdict, &grid.refined(), sigma3, args.m)?;
    let f = (grid.refinement_factor() as f64).ln();
    let order = |a: f64, b: f64| if a > 0.0 && b > 0.0 { (a / b).ln() / f } else { f64::NAN };
    let orders = [
        order(coarse.anticommutator_gap, fine.anticommutator_gap),
        order(coarse.commutator_q, fine.commutator_q),
        order(coarse.commutator_q_dagger, fine.commutator_q_dagger),
        match (coarse.zero_mode_residual, fine.zero_mode_residual) {
            (Some(a), Some(b)) => order(a, b),
            _ => f64::NAN,
        },
    ];
    let out = SusyCheckOutput { coarse, fine, orders };
    if args.json {
        return Ok(to_json(&out));
    }
    let mut t = String::new();
    let _ = writeln!(t, "{:<22} {:>14} {:>14} {:>8}", "quantity", "coarse", "fine", "order");
    let rows = [
        ("||{Q,Q+} - H||", out.coarse.anticommutator_gap, out.fine.anticommutator_gap),
        ("||[H,Q]||", out.coarse.commutator_q, out.fine.commutator_q),
        ("||[H,Q+]||", out.coarse.commutator_q_dagger, out.fine.commutator_q_dagger),
    ];
    for (i, (name, a, b)) in rows.iter().enumerate() {
        let _ = writeln!(t, "{name:<22} {a:>14.6e} {b:>14.6e} {:>8.3}", out.orders[i]);
    }
    if let (Some(a), Some(b)) = (out.coarse.zero_mode_residual, out.fine.zero_mode_residual) {
        let _ = writeln!(t, "{:<22} {a:>14.6e} {b:>14.6e} {:>8.3}", "||Q phi0||/||phi0||", out.orders[3]);
    }
    let _ = writeln!(t, "grid points: {} -> {}", out.coarse.grid_points, out.fine.grid_points);
    Ok(t)
}

#[derive(Serialize)]
struct SpectrumOutput {
    #[serde(flatten)]
    grid: pipeline::SpectrumSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    shooting_zero_mode: Option<bool>,
}

pub fn spectrum(run: &RunConfig, args: &SpectrumArgs) -> Result<String, CliError> {
    let mut run = run.clone();
    apply_grid(&mut run, &args.grid);
    let s = pipeline::setup(&run)?;
    let sector = match args.sector.as_deref() {
        Some(label) => pipeline::parse_sector(label)?,
        None if s.config.domain() == Domain::Radial => Sector::UP,
        None => favourable_sector(&s.coupling),
    };
    if s.config.domain() == Domain::Axial && (sector.sigma3() != 1 || args.m != 0) {
        return Err(CliError::argument("--sector", "axial configurations have only the up and down sectors with m = 0"));
    }
    if args.k == 0 {
        return Err(CliError::argument("--k", "at least one level is required"));
    }
    let grid = pipeline::default_grid(&s, run.grid_n, natural_extent(&run))?;
    let section = pipeline::spectrum_section(&s, &grid, sector, args.m, args.k)?;
    let shooting_zero_mode = shooting_zero_mode(&s, sector, args.m)?;
    let out = SpectrumOutput { grid: section, shooting_zero_mode };
    if args.json {
        return Ok(to_json(&out));
    }
    let mut t = String::new();
    let _ = writeln!(t, "sector {} m = {}", out.grid.sector, out.grid.m);
    let _ = writeln!(t, "{:>4} {:>22} {:>12}", "n", "epsilon", "error");
    for (n, l) in out.grid.levels.iter().enumerate() {
        let _ = writeln!(t, "{n:>4} {:>22.12e} {:>12.3e}", l.epsilon, l.error_estimate);
    }
    if let Some(z) = out.shooting_zero_mode {
        let _ = writeln!(t, "normalisable epsilon = 0 root (shooting): {}", if z { "yes" } else { "no" });
    }
    Ok(t)
}

fn shooting_zero_mode(s: &Setup, sector: Sector, m: i32) -> Result<Option<bool>, CliError> {
    let ChargeConfig::Cylinder { radius, .. } = s.config else {
        return Ok(None);
    };
    let scale = 0.5 / (s.coupling.mass() * radius * radius);
    let levels = find_discrete_levels(&s.config, &s.coupling, m, sector, (-scale, 0.0), &ShootingOptions::default()).context("shooting")?;
    Ok(Some(levels.entries.iter().any(|e| e.zero_mode)))
}

pub fn figure(args: &FigureArgs) -> Result<String, CliError> {
    let mut params = FigureParams::default();
    if let Some(path) = &args.config {
        let run = parse_config(path)?;
        let ctx = run.context();
        params.kappa = run.kappa;
        params.mass = ctx.to_natural(run.mass, Dimensions::ENERGY);
        match run.natural_geometry() {
            ChargeConfig::Ring { charge, radius } | ChargeConfig::Disk { charge, radius } => {
                params.charge = charge;
                params.radius = radius;
            }
            ChargeConfig::Plane { sigma } => params.sigma = sigma,
            ChargeConfig::SlabGap { rho, gap } => {
                params.rho = rho;
                params.gap = gap;
            }
            ChargeConfig::Cylinder { .. } | ChargeConfig::Volume { .. } => {}
        }
    }
    if let Some(b) = &args.betas {
        params.betas = b.clone();
    }
    if let Some(x) = args.extent {
        if !(x.is_finite() && x > 0.0) {
            return Err(CliError::argument("--extent", format!("must be positive, got {x}")));
        }
        params.extent = Some(x);
    }
    let series = figure_series(args.id, &params)?;
    match &args.out {
        Some(path) => {
            let meta = series.write(path)?;
            Ok(format!("wrote {} and {}\n", path.display(), meta.display()))
        }
        None => Ok(series.to_csv()),
    }
}

pub fn lambda_min(args: &LambdaArgs) -> Result<String, CliError> {
    let run = match &args.config {
        Some(path) => parse_config(path)?,
        None => RunConfig::new(ChargeConfig::Plane { sigma: 0.0 }),
    };
    let setup = match run.geometry {
        ChargeConfig::Cylinder { .. } => Some(pipeline::setup(&run)?),
        _ => None,
    };
    let r = pipeline::lambda_min_report(&run, setup.as_ref())?;
    if args.json {
        return Ok(to_json(&r));
    }
    let mut t = String::new();
    let _ = writeln!(t, "lambda_min = 4*pi*M/|e*kappa| = {:.6e} {} (kappa = {}, units {})", r.value, r.unit, run.kappa, run.units.name());
    let _ = writeln!(t, "physical: {:.6e} esu/cm = {:.6e} C/cm", r.esu_per_cm, r.coulomb_per_cm);
    let _ = writeln!(t, "neutron kappa: {:.6e} C/cm", r.neutron_kappa_coulomb_per_cm);
    let _ = writeln!(
        t,
        "proton-moment preset: {:.6e} C/cm vs reference {:.4e} C/cm ({:+.3}%)",
        r.proton_moment_coulomb_per_cm,
        r.reference_coulomb_per_cm,
        100.0 * r.proton_moment_relative_difference
    );
    if let Some(x) = r.line_density_ratio {
        let _ = writeln!(t, "sgn(kappa)*lambda/lambda_min = {x:.6e}");
    }
    Ok(t)
}

/// Verdict of the analytic classification, for cross-checks.
pub fn verdict_of(run: &RunConfig) -> Result<NormVerdict, CliError> {
    let s = pipeline::setup(run)?;
    Ok(pipeline::verdict_report(&s.config, &s.coupling)?.0)
}
