//! Shared steps of the subcommands: couplings, default grids and the
//! structured report.

use std::collections::BTreeMap;

use acsusy_core::algebra::{build_operators, OperatorDomain};
use acsusy_core::ground_state::{
    classify_susy, closed_form_axial, closed_form_norm, favourable_sector, probability_inside, probability_outside,
    zero_mode_radial, NormVerdict, Normalization,
};
use acsusy_core::spectrum::{extrapolated_levels, relativistic_energy};
use acsusy_core::units::{coupling_for, lambda_min, Dimensions, NEUTRON_KAPPA, PROTON_MOMENT_KAPPA};
use acsusy_core::{ChargeConfig, Coupling, Domain, FieldProfile, Sector, UniformGrid};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{CliError, Context};

/// Published threshold line density (C/cm) the proton-moment preset is
/// compared against.
pub const REFERENCE_LAMBDA_MIN_C_PER_CM: f64 = 4.6973e-3;

/// Default cells per side on the axis.
pub const DEFAULT_AXIAL_CELLS: usize = 400;
/// Default nodes inside r₀ on radial grids.
pub const DEFAULT_RADIAL_NODES: usize = 30;

/// Natural-unit geometry, its profile and coupling.
pub struct Setup {
    pub config: ChargeConfig,
    pub profile: FieldProfile,
    pub coupling: Coupling,
}

pub fn setup(run: &RunConfig) -> Result<Setup, CliError> {
    let ctx = run.context();
    let coupling = coupling_for(&run.geometry, &ctx, run.kappa, run.mass).context("coupling")?;
    let config = run.natural_geometry();
    let profile = config.field_profile().context("field profile")?;
    Ok(Setup { config, profile, coupling })
}

/// Length over which the ground state varies.
pub fn characteristic_length(config: &ChargeConfig, coupling: &Coupling) -> f64 {
    let a = coupling.value().abs();
    let decay = |d: f64| if a > 0.0 && d.is_finite() { d } else { 1.0 };
    match *config {
        ChargeConfig::Ring { radius, .. } | ChargeConfig::Disk { radius, .. } | ChargeConfig::Cylinder { radius, .. } => radius,
        ChargeConfig::Plane { .. } => decay(1.0 / a),
        ChargeConfig::SlabGap { gap, .. } => gap.max(decay(1.0 / a.sqrt())),
        ChargeConfig::Volume { .. } => decay(1.0 / a.sqrt()),
    }
}

/// Largest |W| = |gE| on [lo, hi].
fn max_superpotential(s: &Setup, lo: f64, hi: f64) -> f64 {
    let g = s.coupling.field_scale().abs();
    (0..=2000)
        .map(|i| lo + (hi - lo) * f64::from(i) / 2000.0)
        .map(|x| {
            let (a, b) = s.profile.field_limits(x);
            g * a.abs().max(b.abs())
        })
        .fold(0.0, f64::max)
}

/// Grid for the operators and eigensolver. `extent` is in natural units;
/// the spacing is reduced where needed so that |W|h ≤ ½.
pub fn default_grid(s: &Setup, grid_n: Option<usize>, extent: Option<f64>) -> Result<UniformGrid, CliError> {
    let ell = characteristic_length(&s.config, &s.coupling);
    match s.config {
        ChargeConfig::Cylinder { radius, .. } => {
            let outer = extent.unwrap_or(8.0 * radius);
            let w = max_superpotential(s, 0.0, outer);
            let mut k = grid_n.unwrap_or(DEFAULT_RADIAL_NODES);
            while w * radius / (k as f64 + 0.5) > 0.5 && k < 1_000_000 {
                k *= 2;
            }
            UniformGrid::radial(radius, k, outer).context("grid")
        }
        _ => {
            let half = extent.unwrap_or(10.0 * ell);
            let w = max_superpotential(s, -half, half);
            let mut h = half / grid_n.unwrap_or(DEFAULT_AXIAL_CELLS) as f64;
            if w * h > 0.5 {
                h = 0.5 / w;
            }
            UniformGrid::axial_resolving(half, h, s.profile.breakpoints()).context("grid")
        }
    }
}

/// Sector labels accepted on the command line.
pub fn parse_sector(label: &str) -> Result<Sector, CliError> {
    let (t, s) = match label {
        "up" | "++" => (1, 1),
        "down" | "-+" => (-1, 1),
        "+-" => (1, -1),
        "--" => (-1, -1),
        _ => return Err(CliError::argument("--sector", format!("`{label}` is not one of up, down, ++, +-, -+, --"))),
    };
    Ok(Sector::new(t, s).expect("valid labels"))
}

/// Geometry parameters by key, in the configuration's units.
pub fn parameters(config: &ChargeConfig) -> BTreeMap<&'static str, f64> {
    let mut p = BTreeMap::new();
    match *config {
        ChargeConfig::Ring { charge, radius } | ChargeConfig::Disk { charge, radius } => {
            p.insert("Q", charge);
            p.insert("r0", radius);
        }
        ChargeConfig::Plane { sigma } => {
            p.insert("sigma", sigma);
        }
        ChargeConfig::SlabGap { rho, gap } => {
            p.insert("rho", rho);
            p.insert("L", gap);
        }
        ChargeConfig::Cylinder { rho, radius } => {
            p.insert("rho", rho);
            p.insert("r0", radius);
        }
        ChargeConfig::Volume { rho } => {
            p.insert("rho", rho);
        }
    }
    p
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub geometry: &'static str,
    pub units: &'static str,
    pub parameters: BTreeMap<&'static str, f64>,
    pub kappa: f64,
    pub mass: f64,
    pub coupling: CouplingReport,
    pub verdict: VerdictReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalization: Option<NormalizationReport>,
    pub lambda_min: LambdaMinReport,
    pub algebra: AlgebraSection,
    pub spectrum: SpectrumSection,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingReport {
    pub kind: &'static str,
    pub formula: &'static str,
    /// In the configuration's units (length to the power `length_dimension`).
    pub value: f64,
    pub value_natural: f64,
    pub length_dimension: i32,
    /// eκ/2M in natural units.
    pub field_scale: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strength: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictReport {
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sector: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub divergence: Option<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormalizationReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_squared: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_squared: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_squared: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probability_inside: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probability_outside: Option<f64>,
    /// Norm of the normalised closed form by adaptive quadrature.
    pub quadrature_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaMinReport {
    /// 4πM/|eκ| in the configuration's units.
    pub value: f64,
    pub unit: &'static str,
    pub esu_per_cm: f64,
    pub coulomb_per_cm: f64,
    pub neutron_kappa_coulomb_per_cm: f64,
    pub proton_moment_coulomb_per_cm: f64,
    pub reference_coulomb_per_cm: f64,
    pub proton_moment_relative_difference: f64,
    /// sgn(κ)·λ/λ_min with λ = ρπr₀², cylinder only; above 1 exactly when
    /// the zero mode is normalisable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line_density_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgebraSection {
    pub grid_points: usize,
    pub spacing: f64,
    pub window: f64,
    pub anticommutator_gap: f64,
    pub commutator_q: f64,
    pub commutator_q_dagger: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_mode_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSection {
    pub sector: String,
    pub m: i32,
    pub method: &'static str,
    pub levels: Vec<LevelReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelReport {
    pub epsilon: f64,
    pub error_estimate: f64,
    pub relativistic_energy: f64,
}

pub fn verdict_report(config: &ChargeConfig, coupling: &Coupling) -> Result<(NormVerdict, VerdictReport), CliError> {
    let verdict = classify_susy(config, coupling).context("classification")?;
    let report = match verdict {
        NormVerdict::Unbroken { sector, .. } => VerdictReport { status: "unbroken", sector: Some(sector.to_string()), divergence: None },
        NormVerdict::Broken { mode } => VerdictReport { status: "broken", sector: None, divergence: Some(mode.name()) },
    };
    Ok((verdict, report))
}

pub fn coupling_report(run: &RunConfig, s: &Setup) -> CouplingReport {
    let c = &s.coupling;
    let strength = match s.config {
        ChargeConfig::Cylinder { radius, .. } => Some(c.value() * radius * radius),
        _ => None,
    };
    CouplingReport {
        kind: c.kind().name(),
        formula: c.defining_formula(),
        value: c.value_in(&run.context()),
        value_natural: c.value(),
        length_dimension: c.length_dimension(),
        field_scale: c.field_scale(),
        strength,
    }
}

pub fn normalization_report(s: &Setup, verdict: &NormVerdict) -> Result<Option<NormalizationReport>, CliError> {
    let NormVerdict::Unbroken { normalization, .. } = *verdict else {
        return Ok(None);
    };
    let quadrature_norm = closed_form_norm(&s.config, &s.coupling, None).context("normalisation quadrature")?;
    Ok(Some(match normalization {
        Normalization::Axial { c_squared } => NormalizationReport {
            c_squared: Some(c_squared),
            a_squared: None,
            b_squared: None,
            probability_inside: None,
            probability_outside: None,
            quadrature_norm,
        },
        Normalization::Cylinder { a_squared, b_squared } => {
            let ChargeConfig::Cylinder { radius, .. } = s.config else { unreachable!("cylinder normalisation") };
            let beta = s.coupling.value();
            NormalizationReport {
                c_squared: None,
                a_squared: Some(a_squared),
                b_squared: Some(b_squared),
                probability_inside: Some(probability_inside(beta, radius).context("probability")?),
                probability_outside: Some(probability_outside(beta, radius).context("probability")?),
                quadrature_norm,
            }
        }
    }))
}

pub fn lambda_min_report(run: &RunConfig, s: Option<&Setup>) -> Result<LambdaMinReport, CliError> {
    let ctx = run.context();
    let own = lambda_min(&ctx, run.kappa, run.mass).context("lambda_min")?;
    let neutron = lambda_min(&ctx, NEUTRON_KAPPA, ctx.default_mass).context("lambda_min")?;
    let proton = lambda_min(&ctx, PROTON_MOMENT_KAPPA, ctx.default_mass).context("lambda_min")?;
    let line_density_ratio = match s.map(|s| s.config) {
        Some(ChargeConfig::Cylinder { rho, radius }) => {
            let natural = lambda_min(&acsusy_core::UnitContext::default(), run.kappa, ctx.to_natural(run.mass, Dimensions::ENERGY))
                .context("lambda_min")?;
            Some(run.kappa.signum() * rho * std::f64::consts::PI * radius * radius / natural.value)
        }
        _ => None,
    };
    Ok(LambdaMinReport {
        value: own.value,
        unit: own.unit(),
        esu_per_cm: own.esu_per_cm,
        coulomb_per_cm: own.coulomb_per_cm,
        neutron_kappa_coulomb_per_cm: neutron.coulomb_per_cm,
        proton_moment_coulomb_per_cm: proton.coulomb_per_cm,
        reference_coulomb_per_cm: REFERENCE_LAMBDA_MIN_C_PER_CM,
        proton_moment_relative_difference: proton.coulomb_per_cm / REFERENCE_LAMBDA_MIN_C_PER_CM - 1.0,
        line_density_ratio,
    })
}

/// Ground state of the favourable sector sampled on `grid`, if it is
/// normalisable.
pub fn sampled_ground_state(s: &Setup, verdict: &NormVerdict, grid: &UniformGrid) -> Result<Option<acsusy_core::WaveFunction>, CliError> {
    if !verdict.is_unbroken() {
        return Ok(None);
    }
    let wf = match s.config.domain() {
        Domain::Axial => closed_form_axial(&s.config, &s.coupling, &grid.nodes()),
        Domain::Radial => zero_mode_radial(&s.config, &s.coupling, &grid.nodes()),
    }
    .context("ground state")?;
    Ok(Some(wf))
}

pub fn algebra_section(s: &Setup, verdict: &NormVerdict, grid: &UniformGrid, sigma3: i8, m: i32) -> Result<AlgebraSection, CliError> {
    let domain = match s.config.domain() {
        Domain::Axial => OperatorDomain::Axial,
        Domain::Radial => OperatorDomain::Radial { sigma3, m },
    };
    let ops = build_operators(&s.profile, &s.coupling, grid, domain).context("operators")?;
    let report = ops.verify_algebra();
    let zero_mode_residual = match sampled_ground_state(s, verdict, grid)? {
        Some(wf) if m == 0 => Some(ops.zero_mode_residual(&wf).context("zero-mode residual")?),
        _ => None,
    };
    Ok(AlgebraSection {
        grid_points: grid.len(),
        spacing: grid.spacing(),
        window: report.window,
        anticommutator_gap: report.anticommutator_gap,
        commutator_q: report.commutator_q,
        commutator_q_dagger: report.commutator_q_dagger,
        zero_mode_residual,
    })
}

pub fn spectrum_section(s: &Setup, grid: &UniformGrid, sector: Sector, m: i32, k: usize) -> Result<SpectrumSection, CliError> {
    let lv = extrapolated_levels(&s.profile, &s.coupling, grid, m, sector, k).context("spectrum")?;
    let mass = s.coupling.mass();
    let levels = lv
        .extrapolated
        .iter()
        .zip(&lv.error_estimate)
        .map(|(&epsilon, &error_estimate)| LevelReport { epsilon, error_estimate, relativistic_energy: relativistic_energy(epsilon, mass) })
        .collect();
    let m = if s.config.domain() == Domain::Axial { 0 } else { m };
    Ok(SpectrumSection { sector: sector.to_string(), m, method: "grid_diagonalization_richardson", levels })
}

/// The full structured report for a configuration.
pub fn run_report(run: &RunConfig) -> Result<Report, CliError> {
    let s = setup(run)?;
    let (verdict, verdict_json) = verdict_report(&s.config, &s.coupling)?;
    let grid = default_grid(&s, run.grid_n, run.extent.map(|x| run.context().to_natural(x, Dimensions::LENGTH)))?;
    let sector = favourable_sector(&s.coupling);
    let sector = if s.config.domain() == Domain::Radial { Sector::UP } else { sector };
    Ok(Report {
        geometry: run.geometry.name(),
        units: run.units.name(),
        parameters: parameters(&run.geometry),
        kappa: run.kappa,
        mass: run.mass,
        coupling: coupling_report(run, &s),
        verdict: verdict_json,
        normalization: normalization_report(&s, &verdict)?,
        lambda_min: lambda_min_report(run, Some(&s))?,
        algebra: algebra_section(&s, &verdict, &grid, 1, 0)?,
        spectrum: spectrum_section(&s, &grid, sector, 0, 3)?,
    })
}
