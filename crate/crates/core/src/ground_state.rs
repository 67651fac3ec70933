//! Zero-mode ground states, their normalisation and the classification of
//! supersymmetry as broken or unbroken.
//!
//! On the axial line the zero mode of sector τ₃ = s is exp(−s·g·∫₀ᶻE), with
//! g = eκ/2M. The closed forms use |β| or |α| and therefore live in the
//! sector where that exponential does not grow ([`favourable_sector`]).
//! The cylinder zero mode is always taken in τ₃ = +1.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::configurations::{ChargeConfig, Domain, FieldProfile};
use crate::error::{ConfigError, GridError, GroundStateError};
use crate::math;
use crate::numerics::quadrature::{integrate_piecewise, integrate_to_infinity, QuadratureOptions};
use crate::sector::Sector;
use crate::units::Coupling;
use crate::wavefunction::{NormKind, WaveFunction};

pub const DEFAULT_EXPONENT_CAP: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroModeMethod {
    /// Closed-form antiderivative of the field.
    Analytic,
    /// Adaptive quadrature of the field between consecutive nodes.
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroModeOptions {
    pub sector: Sector,
    pub method: ZeroModeMethod,
    /// Largest admissible log-amplitude before exponentiation.
    pub exponent_cap: f64,
}

impl Default for ZeroModeOptions {
    fn default() -> Self {
        Self { sector: Sector::UP, method: ZeroModeMethod::Analytic, exponent_cap: DEFAULT_EXPONENT_CAP }
    }
}

/// The sector whose zero mode does not grow: τ₃ = +1 for a negative
/// coupling, τ₃ = −1 for a positive one.
pub fn favourable_sector(coupling: &Coupling) -> Sector {
    if coupling.value() > 0.0 {
        Sector::DOWN
    } else {
        Sector::UP
    }
}

pub(crate) fn check_coords(coords: &[f64], domain: Domain) -> Result<(), GridError> {
    for (i, &x) in coords.iter().enumerate() {
        let bad = !x.is_finite() || (domain == Domain::Radial && x < 0.0) || (i > 0 && x <= coords[i - 1]);
        if bad {
            return Err(GridError::NotIncreasing { index: i });
        }
    }
    Ok(())
}

fn exponentiate(coords: &[f64], logs: &[f64], cap: f64) -> Result<Vec<f64>, GroundStateError> {
    coords
        .iter()
        .zip(logs)
        .map(|(&x, &l)| {
            if l > cap || l.is_nan() {
                Err(GroundStateError::ExponentOverflow { at: x, exponent: l, cap })
            } else {
                Ok(math::exp(l))
            }
        })
        .collect()
}

/// Zero mode exp(−τ₃·g·∫₀ᶻE) on the given axial coordinates, scaled to 1
/// at z = 0.
pub fn zero_mode_axial(
    profile: &FieldProfile,
    coupling: &Coupling,
    coords: &[f64],
    opts: &ZeroModeOptions,
) -> Result<WaveFunction, GroundStateError> {
    if profile.domain() != Domain::Axial {
        return Err(ConfigError::WrongDomain { geometry: profile.config().name(), expected: "axial" }.into());
    }
    check_coords(coords, Domain::Axial)?;
    let antiderivative = match opts.method {
        ZeroModeMethod::Analytic => coords.iter().map(|&z| profile.antiderivative(z)).collect(),
        ZeroModeMethod::Quadrature => cumulative_field_integral(profile, coords)?,
    };
    let scale = -opts.sector.tau() * coupling.field_scale();
    let logs: Vec<f64> = antiderivative.iter().map(|f| scale * f).collect();
    let samples = exponentiate(coords, &logs, opts.exponent_cap)?;
    Ok(WaveFunction::new(Domain::Axial, coords.to_vec(), samples, opts.sector, 0, NormKind::Unnormalized))
}

/// ∫₀ˣE at every coordinate, accumulated outward from the origin.
fn cumulative_field_integral(profile: &FieldProfile, coords: &[f64]) -> Result<Vec<f64>, GroundStateError> {
    let opts = QuadratureOptions { abs_tol: 1e-15, rel_tol: 1e-13, ..QuadratureOptions::default() };
    let field = |z: f64| profile.field(z);
    let splits = profile.breakpoints();
    let mut out = alloc::vec![0.0; coords.len()];
    let start = coords.iter().position(|&z| z >= 0.0).unwrap_or(coords.len());
    let mut acc = 0.0;
    let mut prev = 0.0;
    for i in start..coords.len() {
        acc += integrate_piecewise(field, prev, coords[i], splits, &opts)?.value;
        out[i] = acc;
        prev = coords[i];
    }
    acc = 0.0;
    prev = 0.0;
    for i in (0..start).rev() {
        acc -= integrate_piecewise(field, coords[i], prev, splits, &opts)?.value;
        out[i] = acc;
        prev = coords[i];
    }
    Ok(out)
}

/// Log-amplitude of the closed-form ground state.
///
/// Ring and disk (never normalisable) are scaled so the tail tends to 1.
/// The normalisable geometries carry their normalisation constant; the
/// cylinder does so only below threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
struct ClosedForm {
    config: ChargeConfig,
    strength: f64,
    log_constant: f64,
}

impl ClosedForm {
    fn new(config: &ChargeConfig, coupling: &Coupling) -> Self {
        let v = coupling.value();
        let a = math::abs(v);
        let log_constant = if v == 0.0 {
            0.0
        } else {
            match *config {
                ChargeConfig::Ring { .. } | ChargeConfig::Disk { .. } => 0.0,
                ChargeConfig::Plane { .. } => 0.5 * math::ln(0.5 * a),
                ChargeConfig::SlabGap { gap, .. } => -0.5 * math::ln(gap + math::sqrt(PI / (2.0 * a))),
                ChargeConfig::Volume { .. } => 0.25 * math::ln(2.0 * a / PI),
                ChargeConfig::Cylinder { radius, .. } => match normalization_cylinder(v, radius) {
                    Ok((a_sq, _)) => 0.5 * math::ln(a_sq),
                    Err(_) => 0.0,
                },
            }
        };
        Self { config: *config, strength: v, log_constant }
    }

    fn log_amplitude(&self, x: f64) -> f64 {
        let v = self.strength;
        let a = math::abs(v);
        if v == 0.0 {
            return 0.0;
        }
        let shape = match self.config {
            ChargeConfig::Ring { radius, .. } => a / math::hypot(x, radius),
            ChargeConfig::Disk { radius, .. } => -(a / (PI * radius * radius)) * (math::abs(x) - math::hypot(x, radius)),
            ChargeConfig::Plane { .. } => -0.5 * a * math::abs(x),
            ChargeConfig::SlabGap { gap, .. } => {
                let d = (math::abs(x) - 0.5 * gap).max(0.0);
                -a * d * d
            }
            ChargeConfig::Volume { .. } => -a * x * x,
            ChargeConfig::Cylinder { radius, .. } => {
                let nu = v * radius * radius;
                if x <= radius {
                    0.5 * v * x * x
                } else {
                    0.5 * nu + nu * math::ln(x / radius)
                }
            }
        };
        self.log_constant + shape
    }

    fn density(&self, x: f64) -> f64 {
        math::exp(2.0 * self.log_amplitude(x))
    }

    fn norm_kind(&self) -> NormKind {
        if self.strength == 0.0 {
            return NormKind::NonNormalizable;
        }
        match self.config {
            ChargeConfig::Ring { .. } | ChargeConfig::Disk { .. } => NormKind::NonNormalizable,
            ChargeConfig::Cylinder { radius, .. } if self.strength * radius * radius >= -1.0 => NormKind::NonNormalizable,
            _ => NormKind::Normalized,
        }
    }
}

/// The explicit ground-state formulas for the axial geometries, in the
/// [`favourable_sector`].
///
/// * ring: exp(|β|/√(z² + r₀²))
/// * disk: exp(−(|β|/πr₀²)(|z| − √(z² + r₀²)))
/// * plane: √(|α|/2)·exp(−|α||z|/2)
/// * slab with gap L: C·exp(−|α|(|z| − L/2)²) outside, C inside,
///   C² = 1/(L + √(π/2|α|))
/// * uniform volume: (2|α|/π)^¼·exp(−|α|z²)
pub fn closed_form_axial(
    config: &ChargeConfig,
    coupling: &Coupling,
    coords: &[f64],
) -> Result<WaveFunction, GroundStateError> {
    config.validate()?;
    if config.domain() != Domain::Axial {
        return Err(ConfigError::WrongDomain { geometry: config.name(), expected: "axial" }.into());
    }
    check_coords(coords, Domain::Axial)?;
    let form = ClosedForm::new(config, coupling);
    let logs: Vec<f64> = coords.iter().map(|&z| form.log_amplitude(z)).collect();
    let samples = exponentiate(coords, &logs, DEFAULT_EXPONENT_CAP)?;
    Ok(WaveFunction::new(Domain::Axial, coords.to_vec(), samples, favourable_sector(coupling), 0, form.norm_kind()))
}

/// Piecewise cylinder zero mode φ_< = A·e^{βr²/2}, φ_> = B·r^{βr₀²},
/// continuous at r₀. Below threshold A is the normalisation constant;
/// otherwise A = 1.
pub fn zero_mode_radial(
    config: &ChargeConfig,
    coupling: &Coupling,
    coords: &[f64],
) -> Result<WaveFunction, GroundStateError> {
    config.validate()?;
    if !matches!(config, ChargeConfig::Cylinder { .. }) {
        return Err(ConfigError::WrongDomain { geometry: config.name(), expected: "radial" }.into());
    }
    check_coords(coords, Domain::Radial)?;
    let form = ClosedForm::new(config, coupling);
    let logs: Vec<f64> = coords.iter().map(|&r| form.log_amplitude(r)).collect();
    let samples = exponentiate(coords, &logs, DEFAULT_EXPONENT_CAP)?;
    Ok(WaveFunction::new(Domain::Radial, coords.to_vec(), samples, Sector::UP, 0, form.norm_kind()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivergenceMode {
    /// The zero mode tends to a nonzero constant.
    ConstantTail,
    /// The zero mode grows like a power of r.
    PowerTail,
    /// Power-law decay too slow for a finite norm (−1 ≤ βr₀² < 0).
    ThresholdViolation,
}

impl DivergenceMode {
    pub fn name(&self) -> &'static str {
        match self {
            DivergenceMode::ConstantTail => "constant_tail",
            DivergenceMode::PowerTail => "power_tail",
            DivergenceMode::ThresholdViolation => "threshold_violation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normalization {
    /// |C|² of the axial closed form.
    Axial { c_squared: f64 },
    /// |A|² and |B|² of the cylinder zero mode.
    Cylinder { a_squared: f64, b_squared: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormVerdict {
    Unbroken { sector: Sector, normalization: Normalization },
    Broken { mode: DivergenceMode },
}

impl NormVerdict {
    pub fn is_unbroken(&self) -> bool {
        matches!(self, NormVerdict::Unbroken { .. })
    }
}

/// Tail analysis of the zero mode.
pub fn classify_susy(config: &ChargeConfig, coupling: &Coupling) -> Result<NormVerdict, GroundStateError> {
    config.validate()?;
    let v = coupling.value();
    if v == 0.0 {
        return Ok(NormVerdict::Broken { mode: DivergenceMode::ConstantTail });
    }
    let a = math::abs(v);
    let sector = favourable_sector(coupling);
    let axial = |c_squared| NormVerdict::Unbroken { sector, normalization: Normalization::Axial { c_squared } };
    Ok(match *config {
        ChargeConfig::Ring { .. } | ChargeConfig::Disk { .. } => NormVerdict::Broken { mode: DivergenceMode::ConstantTail },
        ChargeConfig::Plane { .. } => axial(0.5 * a),
        ChargeConfig::SlabGap { gap, .. } => axial(1.0 / (gap + math::sqrt(PI / (2.0 * a)))),
        ChargeConfig::Volume { .. } => axial(math::sqrt(2.0 * a / PI)),
        ChargeConfig::Cylinder { radius, .. } => {
            let strength = v * radius * radius;
            if strength < -1.0 {
                let (a_squared, b_squared) = normalization_cylinder(v, radius)?;
                NormVerdict::Unbroken { sector: Sector::UP, normalization: Normalization::Cylinder { a_squared, b_squared } }
            } else if strength < 0.0 {
                NormVerdict::Broken { mode: DivergenceMode::ThresholdViolation }
            } else {
                NormVerdict::Broken { mode: DivergenceMode::PowerTail }
            }
        }
    })
}

/// Closed-form (|A|², |B|²) of the normalised cylinder zero mode.
///
/// With ν = |β|r₀², |A|² = |β|(ν−1)e^{ν/2} / π[2(ν−1)sinh(ν/2) + νe^{−ν/2}],
/// evaluated after cancelling e^{ν/2} so that large ν does not overflow.
pub fn normalization_cylinder(beta: f64, r0: f64) -> Result<(f64, f64), GroundStateError> {
    let nu = check_threshold(beta, r0)?;
    let b = math::abs(beta);
    let a_sq = b * (nu - 1.0) / (PI * ((nu - 1.0) * -math::expm1(-nu) + nu * math::exp(-nu)));
    let b_sq = a_sq * math::exp(-nu + 2.0 * nu * math::ln(r0));
    Ok((a_sq, b_sq))
}

/// 2π|B|²∫_{r₀}^∞ r^{2βr₀²+1} dr = π|A|²e^{−ν}r₀²/(ν − 1).
pub fn probability_outside(beta: f64, r0: f64) -> Result<f64, GroundStateError> {
    let nu = check_threshold(beta, r0)?;
    let (a_sq, _) = normalization_cylinder(beta, r0)?;
    Ok(PI * a_sq * math::exp(-nu) * r0 * r0 / (nu - 1.0))
}

/// 2π|A|²∫₀^{r₀} r e^{βr²} dr.
pub fn probability_inside(beta: f64, r0: f64) -> Result<f64, GroundStateError> {
    let nu = check_threshold(beta, r0)?;
    let (a_sq, _) = normalization_cylinder(beta, r0)?;
    Ok(PI * a_sq * -math::expm1(-nu) / math::abs(beta))
}

fn check_threshold(beta: f64, r0: f64) -> Result<f64, GroundStateError> {
    if !(r0.is_finite() && r0 > 0.0) {
        return Err(ConfigError::NonPositive { parameter: "r0", value: r0 }.into());
    }
    if !beta.is_finite() {
        return Err(ConfigError::NonFinite { parameter: "beta", value: beta }.into());
    }
    let strength = beta * r0 * r0;
    if strength >= -1.0 {
        return Err(GroundStateError::ThresholdViolation { strength });
    }
    Ok(-strength)
}

/// Normalised |φ|² of the closed-form cylinder zero mode at r.
pub fn cylinder_density(beta: f64, r0: f64, r: f64) -> Result<f64, GroundStateError> {
    let (a_sq, _) = normalization_cylinder(beta, r0)?;
    let nu = beta * r0 * r0;
    let log = if r <= r0 { beta * r * r } else { nu + 2.0 * nu * math::ln(r / r0) };
    Ok(a_sq * math::exp(log))
}

/// Norm of the closed-form ground state on [−R, R] (axial) or the disk
/// r ≤ R (cylinder); `None` integrates over the whole domain.
pub fn closed_form_norm(config: &ChargeConfig, coupling: &Coupling, extent: Option<f64>) -> Result<f64, GroundStateError> {
    config.validate()?;
    let form = ClosedForm::new(config, coupling);
    let opts = QuadratureOptions { abs_tol: 1e-300, rel_tol: 1e-13, max_subdivisions: 4000 };
    let profile = config.field_profile()?;
    let (measure, weight): (fn(f64) -> f64, f64) = match config.domain() {
        Domain::Axial => (|_| 1.0, 2.0),
        Domain::Radial => (|r| r, 2.0 * PI),
    };
    let integrand = |x: f64| form.density(x) * measure(x);
    let mut splits: Vec<f64> = profile.breakpoints().iter().copied().filter(|b| *b > 0.0).collect();
    splits.push(profile.length_scale());
    let value = match extent {
        Some(r) => integrate_piecewise(integrand, 0.0, r, &splits, &opts)?.value,
        None => {
            let cut = splits.iter().copied().fold(0.0, f64::max);
            integrate_piecewise(integrand, 0.0, cut, &splits, &opts)?.value + integrate_to_infinity(integrand, cut, &opts)?.value
        }
    };
    Ok(weight * value)
}

/// norm(2R) / norm(R) for the closed-form ground state.
pub fn truncated_norm_ratio(config: &ChargeConfig, coupling: &Coupling, extent: f64) -> Result<f64, GroundStateError> {
    Ok(closed_form_norm(config, coupling, Some(2.0 * extent))? / closed_form_norm(config, coupling, Some(extent))?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpandingDomainTest {
    pub extents: Vec<f64>,
    pub norms: Vec<f64>,
    /// Ratio of the norm gained on [2R, 4R] to that gained on [R, 2R].
    pub last_increment_ratio: f64,
    pub normalizable: bool,
}

/// Numerical normalisability test: the truncated norm is evaluated on
/// domains doubling from `start`, and the zero mode counts as normalisable
/// when the norm added per doubling shrinks (or vanishes).
///
/// A constant tail adds twice as much per doubling; a radial power tail
/// r^p adds 2^{2p+2} times as much, so the test is sharp at p = −1.
pub fn expanding_domain_test(
    config: &ChargeConfig,
    coupling: &Coupling,
    start: f64,
    doublings: usize,
) -> Result<ExpandingDomainTest, GroundStateError> {
    let doublings = doublings.max(2);
    let mut extents = Vec::with_capacity(doublings + 1);
    let mut norms = Vec::with_capacity(doublings + 1);
    let mut r = start;
    for _ in 0..=doublings {
        extents.push(r);
        norms.push(closed_form_norm(config, coupling, Some(r))?);
        r *= 2.0;
    }
    let n = norms.len();
    let d1 = norms[n - 2] - norms[n - 3];
    let d2 = norms[n - 1] - norms[n - 2];
    let negligible = d2 <= 1e-14 * norms[n - 1];
    let ratio = if d1 > 0.0 { d2 / d1 } else { 0.0 };
    let normalizable = negligible || ratio < 1.0 - 1e-6;
    Ok(ExpandingDomainTest { extents, norms, last_increment_ratio: ratio, normalizable })
}

/// Starting extent for [`expanding_domain_test`]: a few times every length
/// the zero mode depends on.
pub fn natural_extent(config: &ChargeConfig, coupling: &Coupling) -> f64 {
    let a = math::abs(coupling.value());
    let decay = match config {
        ChargeConfig::Ring { .. } | ChargeConfig::Disk { .. } => a,
        ChargeConfig::Plane { .. } if a > 0.0 => 1.0 / a,
        ChargeConfig::SlabGap { .. } | ChargeConfig::Volume { .. } if a > 0.0 => 1.0 / math::sqrt(a),
        _ => 0.0,
    };
    8.0 * config.source_length().unwrap_or(0.0).max(decay).max(f64::MIN_POSITIVE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn coupling(config: &ChargeConfig, g: f64) -> Coupling {
        Coupling::from_field_scale(config, g, 939.0)
    }

    #[test]
    fn plane_zero_mode_decays_like_half_alpha() {
        let cfg = ChargeConfig::Plane { sigma: 2.0 };
        let c = coupling(&cfg, 0.7);
        let coords: Vec<f64> = (-20..=20).map(|i| i as f64 * 0.25).collect();
        let wf = zero_mode_axial(&cfg.field_profile().unwrap(), &c, &coords, &ZeroModeOptions::default()).unwrap();
        let a = c.value().abs();
        for (z, s) in wf.coords.iter().zip(&wf.samples) {
            assert_relative_eq!(*s, libm::exp(-0.5 * a * z.abs()), max_relative = 1e-14);
        }
    }

    #[test]
    fn zero_field_gives_constant() {
        let cfg = ChargeConfig::Ring { charge: 0.0, radius: 1.0 };
        let c = coupling(&cfg, 1.0);
        let coords = [-3.0, -1.0, 0.0, 2.0];
        let wf = zero_mode_axial(&cfg.field_profile().unwrap(), &c, &coords, &ZeroModeOptions::default()).unwrap();
        assert!(wf.samples.iter().all(|&s| s == 1.0));
        assert_eq!(classify_susy(&cfg, &c).unwrap(), NormVerdict::Broken { mode: DivergenceMode::ConstantTail });
    }

    #[test]
    fn exponent_cap_is_enforced() {
        let cfg = ChargeConfig::Volume { rho: 1.0 };
        let c = coupling(&cfg, -1.0);
        let coords = [0.0, 10.0, 50.0];
        let err = zero_mode_axial(&cfg.field_profile().unwrap(), &c, &coords, &ZeroModeOptions::default()).unwrap_err();
        assert!(matches!(err, GroundStateError::ExponentOverflow { at, .. } if at == 50.0));
    }

    #[test]
    fn literal_sinh_form_matches() {
        for nu in [1.1, 2.0, 7.5, 20.0] {
            let r0: f64 = 1.3;
            let beta = -nu / (r0 * r0);
            let b = beta.abs();
            let literal = b * (nu - 1.0) * libm::exp(0.5 * nu)
                / (PI * (2.0 * (nu - 1.0) * libm::sinh(0.5 * nu) + nu * libm::exp(-0.5 * nu)));
            let (a_sq, _) = normalization_cylinder(beta, r0).unwrap();
            assert_relative_eq!(a_sq, literal, max_relative = 1e-13);
        }
    }

    #[test]
    fn cylinder_probabilities_sum_to_one() {
        for nu in [1.5, 2.0, 5.0] {
            let beta = -nu;
            let p = probability_inside(beta, 1.0).unwrap() + probability_outside(beta, 1.0).unwrap();
            assert_relative_eq!(p, 1.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn threshold_errors() {
        assert!(matches!(normalization_cylinder(-1.0, 1.0), Err(GroundStateError::ThresholdViolation { .. })));
        assert!(matches!(probability_outside(-0.5, 1.0), Err(GroundStateError::ThresholdViolation { .. })));
    }

    #[test]
    fn radial_power_law_by_construction() {
        let cfg = ChargeConfig::Cylinder { rho: 4.0, radius: 1.0 };
        let c = coupling(&cfg, 1.0);
        assert_relative_eq!(c.value(), -2.0);
        let wf = zero_mode_radial(&cfg, &c, &[0.5, 1.0, 2.0]).unwrap();
        assert_relative_eq!(wf.samples[2] / wf.samples[1], 0.25, max_relative = 1e-14);
    }

    #[test]
    fn slab_closed_form_is_continuous_and_normalised() {
        let cfg = ChargeConfig::SlabGap { rho: 3.0, gap: 1.2 };
        let c = coupling(&cfg, -0.8);
        let wf = closed_form_axial(&cfg, &c, &[0.6 - 1e-12, 0.6, 0.6 + 1e-12]).unwrap();
        assert_relative_eq!(wf.samples[0], wf.samples[2], max_relative = 1e-10);
        assert_relative_eq!(closed_form_norm(&cfg, &c, None).unwrap(), 1.0, max_relative = 1e-10);
    }

    #[test]
    fn favourable_sector_follows_coupling_sign() {
        let cfg = ChargeConfig::Plane { sigma: 1.0 };
        assert_eq!(favourable_sector(&coupling(&cfg, 1.0)), Sector::UP);
        assert_eq!(favourable_sector(&coupling(&cfg, -1.0)), Sector::DOWN);
    }
}
