//! Plain-text `key=value` run configurations.
//!
//! Blank lines and lines starting with `#` are ignored. Recognised keys:
//!
//! | key | meaning |
//! |-----|---------|
//! | `geometry` | ring, disk, plane, slab_gap, cylinder or volume |
//! | `Q`, `r0`, `sigma`, `rho`, `L` | geometry parameters |
//! | `kappa` | anomalous moment (default −1.91304273) |
//! | `mass` | particle rest energy (default: neutron, in the chosen units) |
//! | `units` | natural (default), gaussian or si |
//! | `grid_n`, `extent` | grid resolution and outer extent |
//! | `out` | output path |

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use acsusy_core::units::NEUTRON_KAPPA;
use acsusy_core::{ChargeConfig, ConfigError, UnitContext, UnitSystem};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigFileError {
    #[error("cannot read {path}: {message}")]
    Read { path: PathBuf, message: String },
    #[error("line {line}: expected key=value, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice (first on line {first})")]
    Duplicate { line: usize, key: String, first: usize },
    #[error("line {line}: `{key}` must be a number, got `{value}`")]
    NotNumeric { line: usize, key: String, value: String },
    #[error("line {line}: `{key}` has invalid value `{value}` (expected {expected})")]
    InvalidValue { line: usize, key: String, value: String, expected: &'static str },
    #[error("missing required key `{key}` for geometry {geometry}")]
    Missing { key: &'static str, geometry: String },
    #[error("missing required key `geometry`")]
    MissingGeometry,
    #[error("line {line}: key `{key}`: {source}")]
    Invalid { line: usize, key: &'static str, source: ConfigError },
}

const KEYS: [&str; 12] = ["geometry", "Q", "r0", "sigma", "rho", "L", "kappa", "mass", "units", "grid_n", "extent", "out"];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Geometry in the units of `units`.
    pub geometry: ChargeConfig,
    pub kappa: f64,
    /// Rest energy in the energy unit of `units`.
    pub mass: f64,
    pub units: UnitSystem,
    pub grid_n: Option<usize>,
    pub extent: Option<f64>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn context(&self) -> UnitContext {
        UnitContext::new(self.units)
    }

    /// Geometry converted to natural units.
    pub fn natural_geometry(&self) -> ChargeConfig {
        self.context().config_to_natural(&self.geometry)
    }

    /// A default-unit configuration for `geometry`.
    pub fn new(geometry: ChargeConfig) -> Self {
        let ctx = UnitContext::default();
        Self { geometry, kappa: NEUTRON_KAPPA, mass: ctx.default_mass, units: ctx.system, grid_n: None, extent: None, out: None }
    }
}

pub fn parse_config(path: &Path) -> Result<RunConfig, ConfigFileError> {
    let text = fs::read_to_string(path).map_err(|e| ConfigFileError::Read { path: path.to_path_buf(), message: e.to_string() })?;
    parse_config_str(&text)
}

struct Entry {
    line: usize,
    value: String,
}

pub fn parse_config_str(text: &str) -> Result<RunConfig, ConfigFileError> {
    let mut entries: BTreeMap<&'static str, Entry> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed.split_once('=').ok_or_else(|| ConfigFileError::Syntax { line, text: trimmed.to_string() })?;
        let key = key.trim();
        let known = KEYS.iter().find(|k| **k == key).ok_or_else(|| ConfigFileError::UnknownKey { line, key: key.to_string() })?;
        if let Some(first) = entries.get(known) {
            return Err(ConfigFileError::Duplicate { line, key: key.to_string(), first: first.line });
        }
        entries.insert(known, Entry { line, value: value.trim().to_string() });
    }

    let number = |key: &'static str| -> Result<Option<(f64, usize)>, ConfigFileError> {
        entries
            .get(key)
            .map(|e| {
                e.value.parse::<f64>().map(|v| (v, e.line)).map_err(|_| ConfigFileError::NotNumeric {
                    line: e.line,
                    key: key.to_string(),
                    value: e.value.clone(),
                })
            })
            .transpose()
    };

    let geometry_entry = entries.get("geometry").ok_or(ConfigFileError::MissingGeometry)?;
    let geometry_name = geometry_entry.value.as_str();
    let required: &[&'static str] = match geometry_name {
        "ring" | "disk" => &["Q", "r0"],
        "plane" => &["sigma"],
        "slab_gap" => &["rho", "L"],
        "cylinder" => &["rho", "r0"],
        "volume" => &["rho"],
        _ => {
            return Err(ConfigFileError::InvalidValue {
                line: geometry_entry.line,
                key: "geometry".into(),
                value: geometry_name.into(),
                expected: "ring, disk, plane, slab_gap, cylinder or volume",
            })
        }
    };
    let mut values = BTreeMap::new();
    for &key in required {
        let (v, _) = number(key)?.ok_or_else(|| ConfigFileError::Missing { key, geometry: geometry_name.to_string() })?;
        values.insert(key, v);
    }
    for key in ["Q", "r0", "sigma", "rho", "L"] {
        if !required.contains(&key) {
            if let Some(e) = entries.get(key) {
                return Err(ConfigFileError::InvalidValue {
                    line: e.line,
                    key: key.into(),
                    value: e.value.clone(),
                    expected: "no value: the key does not apply to this geometry",
                });
            }
        }
    }
    let geometry = match geometry_name {
        "ring" => ChargeConfig::Ring { charge: values["Q"], radius: values["r0"] },
        "disk" => ChargeConfig::Disk { charge: values["Q"], radius: values["r0"] },
        "plane" => ChargeConfig::Plane { sigma: values["sigma"] },
        "slab_gap" => ChargeConfig::SlabGap { rho: values["rho"], gap: values["L"] },
        "cylinder" => ChargeConfig::Cylinder { rho: values["rho"], radius: values["r0"] },
        _ => ChargeConfig::Volume { rho: values["rho"] },
    };
    if let Err(source) = geometry.validate() {
        let key = match source {
            ConfigError::NonPositive { parameter, .. } | ConfigError::NonFinite { parameter, .. } => parameter,
            _ => "geometry",
        };
        let line = entries.get(key).map_or(geometry_entry.line, |e| e.line);
        return Err(ConfigFileError::Invalid { line, key, source });
    }

    let units = match entries.get("units") {
        None => UnitSystem::Natural,
        Some(e) => match e.value.to_ascii_lowercase().as_str() {
            "natural" => UnitSystem::Natural,
            "gaussian" => UnitSystem::Gaussian,
            "si" => UnitSystem::Si,
            _ => {
                return Err(ConfigFileError::InvalidValue {
                    line: e.line,
                    key: "units".into(),
                    value: e.value.clone(),
                    expected: "natural, gaussian or si",
                })
            }
        },
    };
    let kappa = match number("kappa")? {
        None => NEUTRON_KAPPA,
        Some((k, line)) if k == 0.0 || !k.is_finite() => {
            return Err(ConfigFileError::InvalidValue { line, key: "kappa".into(), value: k.to_string(), expected: "a finite nonzero number" })
        }
        Some((k, _)) => k,
    };
    let mass = match number("mass")? {
        None => UnitContext::new(units).default_mass,
        Some((m, line)) if !(m.is_finite() && m > 0.0) => {
            return Err(ConfigFileError::Invalid { line, key: "mass", source: ConfigError::NonPositive { parameter: "mass", value: m } })
        }
        Some((m, _)) => m,
    };
    let grid_n = match entries.get("grid_n") {
        None => None,
        Some(e) => match e.value.parse::<usize>() {
            Ok(n) if n >= 2 => Some(n),
            _ => {
                return Err(ConfigFileError::InvalidValue {
                    line: e.line,
                    key: "grid_n".into(),
                    value: e.value.clone(),
                    expected: "an integer of at least 2",
                })
            }
        },
    };
    let extent = match number("extent")? {
        None => None,
        Some((x, line)) if !(x.is_finite() && x > 0.0) => {
            return Err(ConfigFileError::Invalid { line, key: "extent", source: ConfigError::NonPositive { parameter: "extent", value: x } })
        }
        Some((x, _)) => Some(x),
    };
    let out = entries.get("out").map(|e| PathBuf::from(&e.value));
    Ok(RunConfig { geometry, kappa, mass, units, grid_n, extent, out })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cylinder_happy_path() {
        let cfg = parse_config_str("geometry=cylinder\nrho=-8\nr0=1\n").unwrap();
        assert_eq!(cfg.geometry, ChargeConfig::Cylinder { rho: -8.0, radius: 1.0 });
        assert_eq!(cfg.kappa, NEUTRON_KAPPA);
        assert_eq!(cfg.units, UnitSystem::Natural);
    }

    #[test]
    fn ring_without_charge_names_the_key() {
        let err = parse_config_str("geometry=ring\nr0=1").unwrap_err();
        assert_eq!(err, ConfigFileError::Missing { key: "Q", geometry: "ring".into() });
        assert!(err.to_string().contains("`Q`"));
    }

    #[test]
    fn negative_radius_names_the_constraint() {
        let err = parse_config_str("geometry=cylinder\nrho=2\nr0=-1").unwrap_err();
        assert!(matches!(err, ConfigFileError::Invalid { line: 3, key: "r0", .. }), "{err:?}");
        assert!(err.to_string().contains("r0 must be positive"));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_config_str("# c\ngeometry=plane\nsigma=abc").unwrap_err();
        assert_eq!(err, ConfigFileError::NotNumeric { line: 3, key: "sigma".into(), value: "abc".into() });
        let err = parse_config_str("geometry=plane\nsigma=1\ncolour=blue").unwrap_err();
        assert_eq!(err, ConfigFileError::UnknownKey { line: 3, key: "colour".into() });
    }

    #[test]
    fn unit_defaults_follow_the_system() {
        let cfg = parse_config_str("geometry=plane\nsigma=1\nunits=si").unwrap();
        assert_eq!(cfg.mass, UnitContext::new(UnitSystem::Si).default_mass);
    }
}
