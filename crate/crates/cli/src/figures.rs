//! Figure series: the densities plotted in the three ground-state figures,
//! emitted as CSV for an external plotting step.
//!
//! | id | columns |
//! |----|---------|
//! | 1 | `z, phi_sq_ring, phi_sq_disk` |
//! | 2 | `z, phi_sq_plane, phi_sq_slabgap` |
//! | 3 | `r_over_r0, phi_sq_beta_<b>` per β·r₀² value b |
//!
//! Coordinates are natural-unit lengths (MeV⁻¹); Fig 3 uses r/r₀.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use acsusy_core::ground_state::{closed_form_axial, cylinder_density};
use acsusy_core::units::NEUTRON_KAPPA;
use acsusy_core::{ChargeConfig, Coupling, UnitContext};

use crate::error::{CliError, Context};
use crate::pipeline::characteristic_length;

pub const AXIAL_POINTS: usize = 2001;
pub const RADIAL_POINTS: usize = 1201;
pub const RADIAL_EXTENT: f64 = 6.0;
pub const DEFAULT_BETAS: [f64; 3] = [-1.2, -2.0, -5.0];

#[derive(Debug, Clone, PartialEq)]
pub struct FigureSeries {
    pub figure_id: u8,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// `key=value` pairs recorded in the sidecar file.
    pub metadata: Vec<(String, String)>,
}

/// Geometry constants for the figures, natural units.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureParams {
    pub kappa: f64,
    pub mass: f64,
    /// Shared total charge of ring and disk.
    pub charge: f64,
    pub radius: f64,
    pub sigma: f64,
    pub rho: f64,
    pub gap: f64,
    /// β·r₀² values for Fig 3.
    pub betas: Vec<f64>,
    /// Half extent of the z range; defaults to ten characteristic lengths.
    pub extent: Option<f64>,
}

impl Default for FigureParams {
    /// Charges chosen so that |β|/r₀ = 2 for Fig 1 and |α| = 1 for both
    /// Fig 2 curves, with r₀ = L = 1.
    fn default() -> Self {
        let ctx = UnitContext::default();
        let mass = ctx.default_mass;
        let unit = mass / (ctx.electron_charge * NEUTRON_KAPPA.abs());
        Self {
            kappa: NEUTRON_KAPPA,
            mass,
            charge: 8.0 * unit,
            radius: 1.0,
            sigma: 2.0 * unit,
            rho: 4.0 * unit,
            gap: 1.0,
            betas: DEFAULT_BETAS.to_vec(),
            extent: None,
        }
    }
}

impl FigureParams {
    fn coupling(&self, config: &ChargeConfig) -> Result<Coupling, CliError> {
        let ctx = UnitContext::default();
        acsusy_core::units::coupling_for(config, &ctx, self.kappa, self.mass).context("figure coupling")
    }
}

impl FigureSeries {
    /// Header and rows as CSV; values carry 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn metadata_text(&self) -> String {
        let mut out = String::from("# natural units: hbar = c = 1, lengths in MeV^-1, Heaviside-Lorentz charges\n");
        let _ = writeln!(out, "figure_id={}", self.figure_id);
        let _ = writeln!(out, "columns={}", self.columns.join(","));
        let _ = writeln!(out, "rows={}", self.rows.len());
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "{k}={v}");
        }
        out
    }

    pub fn validate(&self) -> Result<(), String> {
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.columns.len() {
                return Err(format!("row {i} has {} values for {} columns", row.len(), self.columns.len()));
            }
            if let Some(v) = row.iter().find(|v| !v.is_finite()) {
                return Err(format!("row {i} holds a non-finite value {v}"));
            }
        }
        Ok(())
    }

    /// Writes the CSV to `path` and the metadata to `<path>.meta`.
    pub fn write(&self, path: &Path) -> Result<PathBuf, CliError> {
        let meta = meta_path(path);
        fs::write(path, self.to_csv()).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        fs::write(&meta, self.metadata_text()).map_err(|source| CliError::Io { path: meta.clone(), source })?;
        Ok(meta)
    }
}

pub fn meta_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

/// Symmetric z samples with z = 0 at the centre.
fn axial_coords(half: f64) -> Vec<f64> {
    let mid = (AXIAL_POINTS / 2) as f64;
    (0..AXIAL_POINTS).map(|i| (i as f64 - mid) * half / mid).collect()
}

fn squared(samples: &[f64]) -> Vec<f64> {
    samples.iter().map(|v| v * v).collect()
}

fn columns(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

pub fn figure_series(id: u8, params: &FigureParams) -> Result<FigureSeries, CliError> {
    let series = match id {
        1 => {
            let ring = ChargeConfig::Ring { charge: params.charge, radius: params.radius };
            let disk = ChargeConfig::Disk { charge: params.charge, radius: params.radius };
            let (cr, cd) = (params.coupling(&ring)?, params.coupling(&disk)?);
            let half = params.extent.unwrap_or(10.0 * params.radius);
            let z = axial_coords(half);
            let pr = squared(&closed_form_axial(&ring, &cr, &z).context("ring ground state")?.samples);
            let pd = squared(&closed_form_axial(&disk, &cd, &z).context("disk ground state")?.samples);
            FigureSeries {
                figure_id: 1,
                columns: columns(&["z", "phi_sq_ring", "phi_sq_disk"]),
                rows: (0..z.len()).map(|i| vec![z[i], pr[i], pd[i]]).collect(),
                metadata: vec![
                    ("charge".into(), format!("{:.16e}", params.charge)),
                    ("r0".into(), format!("{:.16e}", params.radius)),
                    ("beta".into(), format!("{:.16e}", cr.value())),
                    ("scaling".into(), "densities tend to 1 as |z| grows".into()),
                ],
            }
        }
        2 => {
            let plane = ChargeConfig::Plane { sigma: params.sigma };
            let slab = ChargeConfig::SlabGap { rho: params.rho, gap: params.gap };
            let (cp, cs) = (params.coupling(&plane)?, params.coupling(&slab)?);
            let ell = characteristic_length(&plane, &cp).max(characteristic_length(&slab, &cs));
            let half = params.extent.unwrap_or(10.0 * ell);
            let z = axial_coords(half);
            let pp = squared(&closed_form_axial(&plane, &cp, &z).context("plane ground state")?.samples);
            let ps = squared(&closed_form_axial(&slab, &cs, &z).context("slab ground state")?.samples);
            FigureSeries {
                figure_id: 2,
                columns: columns(&["z", "phi_sq_plane", "phi_sq_slabgap"]),
                rows: (0..z.len()).map(|i| vec![z[i], pp[i], ps[i]]).collect(),
                metadata: vec![
                    ("sigma".into(), format!("{:.16e}", params.sigma)),
                    ("rho".into(), format!("{:.16e}", params.rho)),
                    ("L".into(), format!("{:.16e}", params.gap)),
                    ("alpha_plane".into(), format!("{:.16e}", cp.value())),
                    ("alpha_slabgap".into(), format!("{:.16e}", cs.value())),
                    ("scaling".into(), "normalised densities".into()),
                ],
            }
        }
        3 => {
            if params.betas.is_empty() {
                return Err(CliError::argument("--betas", "at least one value is required"));
            }
            if let Some(b) = params.betas.iter().find(|b| !(b.is_finite() && **b < -1.0)) {
                return Err(CliError::argument(
                    "--betas",
                    format!("beta*r0^2 = {b} is not below -1: supersymmetry is broken and no normalisable density exists"),
                ));
            }
            let r: Vec<f64> = (0..RADIAL_POINTS).map(|i| RADIAL_EXTENT * i as f64 / (RADIAL_POINTS - 1) as f64).collect();
            let mut cols = vec!["r_over_r0".to_string()];
            let mut data = vec![r.clone()];
            for &b in &params.betas {
                cols.push(format!("phi_sq_beta_{b}"));
                let col: Result<Vec<f64>, _> = r.iter().map(|&x| cylinder_density(b, 1.0, x)).collect();
                data.push(col.context("cylinder density")?);
            }
            FigureSeries {
                figure_id: 3,
                columns: cols,
                rows: (0..r.len()).map(|i| data.iter().map(|c| c[i]).collect()).collect(),
                metadata: vec![
                    ("betas".into(), params.betas.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(",")),
                    ("scaling".into(), "r0 = 1; densities normalised over the whole plane, 2*pi*int |phi|^2 r dr = 1".into()),
                ],
            }
        }
        _ => return Err(CliError::argument("--id", format!("figure id must be 1, 2 or 3, got {id}"))),
    };
    series.validate().map_err(|message| CliError::Output { message })?;
    Ok(series)
}
