//! Physical constants, unit systems and the geometry couplings.
//!
//! The natural system has ħ = c = 1 with Heaviside–Lorentz charges, so the
//! elementary charge is √(4πα) and ∇·E = ρ. Energies are in MeV and
//! lengths in MeV⁻¹. Gaussian quantities are in erg, cm and esu; SI ones in
//! J, m and C.

use core::f64::consts::PI;

use crate::configurations::ChargeConfig;
use crate::error::UnitsError;
use crate::math;

pub const FINE_STRUCTURE: f64 = 7.297_352_569_3e-3;
pub const HBAR_C_MEV_FM: f64 = 197.326_980_4;
pub const ELEMENTARY_CHARGE_C: f64 = 1.602_176_634e-19;
pub const MEV_IN_JOULE: f64 = 1.602_176_634e-13;
pub const MEV_IN_ERG: f64 = 1.602_176_634e-6;
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
pub const STATCOULOMB_PER_COULOMB: f64 = 2.997_924_58e9;
pub const NEUTRON_REST_ENERGY_MEV: f64 = 939.565_420_52;
/// Neutron magnetic moment in nuclear magnetons.
pub const NEUTRON_KAPPA: f64 = -1.913_042_73;
/// Proton magnetic moment in nuclear magnetons, the alternative κ preset.
pub const PROTON_MOMENT_KAPPA: f64 = 2.792_847_344_6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitSystem {
    Natural,
    Gaussian,
    Si,
}

impl UnitSystem {
    pub fn name(&self) -> &'static str {
        match self {
            UnitSystem::Natural => "natural",
            UnitSystem::Gaussian => "gaussian",
            UnitSystem::Si => "si",
        }
    }
}

/// Powers of charge, length and energy carried by a quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dimensions {
    pub charge: i32,
    pub length: i32,
    pub energy: i32,
}

impl Dimensions {
    pub const NONE: Self = Self::new(0, 0, 0);
    pub const CHARGE: Self = Self::new(1, 0, 0);
    pub const LENGTH: Self = Self::new(0, 1, 0);
    pub const ENERGY: Self = Self::new(0, 0, 1);

    pub const fn new(charge: i32, length: i32, energy: i32) -> Self {
        Self { charge, length, energy }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitContext {
    pub system: UnitSystem,
    /// ħc in the system's energy × length.
    pub hbar_c: f64,
    /// Elementary charge in the system's charge unit.
    pub electron_charge: f64,
    /// Neutron rest energy in the system's energy unit.
    pub default_mass: f64,
    pub default_kappa: f64,
}

impl UnitContext {
    pub fn new(system: UnitSystem) -> Self {
        let (hbar_c, electron_charge, default_mass) = match system {
            UnitSystem::Natural => (1.0, math::sqrt(4.0 * PI * FINE_STRUCTURE), NEUTRON_REST_ENERGY_MEV),
            UnitSystem::Gaussian => (
                HBAR_C_MEV_FM * MEV_IN_ERG * 1e-13,
                ELEMENTARY_CHARGE_C * STATCOULOMB_PER_COULOMB,
                NEUTRON_REST_ENERGY_MEV * MEV_IN_ERG,
            ),
            UnitSystem::Si => (
                HBAR_C_MEV_FM * MEV_IN_JOULE * 1e-15,
                ELEMENTARY_CHARGE_C,
                NEUTRON_REST_ENERGY_MEV * MEV_IN_JOULE,
            ),
        };
        Self { system, hbar_c, electron_charge, default_mass, default_kappa: NEUTRON_KAPPA }
    }

    /// One system energy unit expressed in MeV.
    fn energy_factor(&self) -> f64 {
        match self.system {
            UnitSystem::Natural => 1.0,
            UnitSystem::Gaussian => 1.0 / MEV_IN_ERG,
            UnitSystem::Si => 1.0 / MEV_IN_JOULE,
        }
    }

    /// One system length unit expressed in MeV⁻¹.
    fn length_factor(&self) -> f64 {
        match self.system {
            UnitSystem::Natural => 1.0,
            UnitSystem::Gaussian => 1e13 / HBAR_C_MEV_FM,
            UnitSystem::Si => 1e15 / HBAR_C_MEV_FM,
        }
    }

    /// One system charge unit expressed as a natural (Heaviside–Lorentz)
    /// charge.
    fn charge_factor(&self) -> f64 {
        match self.system {
            UnitSystem::Natural => 1.0,
            UnitSystem::Gaussian => math::sqrt(4.0 * PI / self.hbar_c),
            UnitSystem::Si => 1.0 / math::sqrt(VACUUM_PERMITTIVITY * self.hbar_c),
        }
    }

    fn factor(&self, dims: Dimensions) -> f64 {
        let p = |x: f64, n: i32| math::powf(x, n as f64);
        p(self.charge_factor(), dims.charge) * p(self.length_factor(), dims.length) * p(self.energy_factor(), dims.energy)
    }

    pub fn to_natural(&self, value: f64, dims: Dimensions) -> f64 {
        value * self.factor(dims)
    }

    pub fn from_natural(&self, value: f64, dims: Dimensions) -> f64 {
        value / self.factor(dims)
    }

    pub fn config_to_natural(&self, config: &ChargeConfig) -> ChargeConfig {
        config.map_parameters(|v, d| self.to_natural(v, d))
    }

    pub fn config_from_natural(&self, config: &ChargeConfig) -> ChargeConfig {
        config.map_parameters(|v, d| self.from_natural(v, d))
    }
}

impl Default for UnitContext {
    fn default() -> Self {
        Self::new(UnitSystem::Natural)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CouplingKind {
    /// β = −eQκ/4M for the ring and the disk.
    BetaRingDisk,
    /// α = −eσκ/2M for the plane.
    AlphaPlane,
    /// α = −eρκ/4M for the slab with a gap and the uniform volume.
    AlphaVolume,
    /// β = −eρκ/4M for the cylinder.
    BetaCylinder,
}

impl CouplingKind {
    pub fn name(&self) -> &'static str {
        match self {
            CouplingKind::BetaRingDisk => "beta_ring_disk",
            CouplingKind::AlphaPlane => "alpha_plane",
            CouplingKind::AlphaVolume => "alpha_volume",
            CouplingKind::BetaCylinder => "beta_cylinder",
        }
    }

    pub fn defining_formula(&self) -> &'static str {
        match self {
            CouplingKind::BetaRingDisk => "beta = -e*Q*kappa/(4*M)",
            CouplingKind::AlphaPlane => "alpha = -e*sigma*kappa/(2*M)",
            CouplingKind::AlphaVolume => "alpha = -e*rho*kappa/(4*M)",
            CouplingKind::BetaCylinder => "beta = -e*rho*kappa/(4*M)",
        }
    }

    /// Power of length carried by the coupling.
    pub fn length_dimension(&self) -> i32 {
        match self {
            CouplingKind::BetaRingDisk => 1,
            CouplingKind::AlphaPlane => -1,
            CouplingKind::AlphaVolume | CouplingKind::BetaCylinder => -2,
        }
    }

    fn for_config(config: &ChargeConfig) -> Self {
        match config {
            ChargeConfig::Ring { .. } | ChargeConfig::Disk { .. } => CouplingKind::BetaRingDisk,
            ChargeConfig::Plane { .. } => CouplingKind::AlphaPlane,
            ChargeConfig::SlabGap { .. } | ChargeConfig::Volume { .. } => CouplingKind::AlphaVolume,
            ChargeConfig::Cylinder { .. } => CouplingKind::BetaCylinder,
        }
    }

    /// k in value = −k·g·(charge parameter).
    fn weight(&self) -> f64 {
        match self {
            CouplingKind::AlphaPlane => 1.0,
            _ => 0.5,
        }
    }
}

/// Geometry coupling in natural units together with the superpotential
/// scale g = eκ/2M, so that W = g·E.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    kind: CouplingKind,
    value: f64,
    field_scale: f64,
    mass: f64,
}

impl Coupling {
    /// Builds a coupling directly from g and the natural-unit config.
    pub fn from_field_scale(config: &ChargeConfig, field_scale: f64, mass: f64) -> Self {
        let kind = CouplingKind::for_config(config);
        let value = -kind.weight() * field_scale * config.charge_parameter();
        Self { kind, value, field_scale, mass }
    }

    pub fn kind(&self) -> CouplingKind {
        self.kind
    }

    /// β or α in natural units (MeV⁻¹ powers).
    pub fn value(&self) -> f64 {
        self.value
    }

    /// g = eκ/2M in natural units.
    pub fn field_scale(&self) -> f64 {
        self.field_scale
    }

    /// Mass M in MeV.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn defining_formula(&self) -> &'static str {
        self.kind.defining_formula()
    }

    pub fn length_dimension(&self) -> i32 {
        self.kind.length_dimension()
    }

    /// The coupling value in the lengths of `ctx`.
    pub fn value_in(&self, ctx: &UnitContext) -> f64 {
        ctx.from_natural(self.value, Dimensions::new(0, self.length_dimension(), 0))
    }
}

/// Coupling for `config` given in the units of `ctx`, with `mass` in the
/// context's energy unit.
pub fn coupling_for(config: &ChargeConfig, ctx: &UnitContext, kappa: f64, mass: f64) -> Result<Coupling, UnitsError> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(UnitsError::NonPositiveMass(mass));
    }
    if !kappa.is_finite() {
        return Err(UnitsError::NonFiniteKappa(kappa));
    }
    config.validate()?;
    let natural = ctx.config_to_natural(config);
    let m = ctx.to_natural(mass, Dimensions::ENERGY);
    let e = UnitContext::new(UnitSystem::Natural).electron_charge;
    Ok(Coupling::from_field_scale(&natural, e * kappa / (2.0 * m), m))
}

/// Threshold line density λ = ρπr₀² for a normalisable cylinder zero mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearChargeDensity {
    pub system: UnitSystem,
    /// 4πMc²/|eκ| with the constants of `system`.
    pub value: f64,
    /// The same formula evaluated with Gaussian constants.
    pub esu_per_cm: f64,
    /// The Gaussian evaluation converted to coulomb per centimetre.
    pub coulomb_per_cm: f64,
}

impl LinearChargeDensity {
    pub fn unit(&self) -> &'static str {
        match self.system {
            UnitSystem::Natural => "MeV",
            UnitSystem::Gaussian => "esu/cm",
            UnitSystem::Si => "C/m",
        }
    }
}

/// Evaluates 4π·Mc²/|eκ| with `mass` in the energy unit of `ctx`.
///
/// The formula does not transform covariantly between Heaviside–Lorentz
/// and Gaussian charges, so the physical-unit figures are always the plain
/// Gaussian evaluation with the mass converted to erg.
pub fn lambda_min(ctx: &UnitContext, kappa: f64, mass: f64) -> Result<LinearChargeDensity, UnitsError> {
    if kappa == 0.0 {
        return Err(UnitsError::ZeroKappa);
    }
    if !kappa.is_finite() {
        return Err(UnitsError::NonFiniteKappa(kappa));
    }
    if !(mass.is_finite() && mass > 0.0) {
        return Err(UnitsError::NonPositiveMass(mass));
    }
    let gaussian = UnitContext::new(UnitSystem::Gaussian);
    let mass_erg = gaussian.from_natural(ctx.to_natural(mass, Dimensions::ENERGY), Dimensions::ENERGY);
    let esu_per_cm = 4.0 * PI * mass_erg / math::abs(gaussian.electron_charge * kappa);
    let coulomb_per_cm = esu_per_cm / STATCOULOMB_PER_COULOMB;
    let value = match ctx.system {
        UnitSystem::Natural => 4.0 * PI * mass / math::abs(ctx.electron_charge * kappa),
        UnitSystem::Gaussian => esu_per_cm,
        UnitSystem::Si => coulomb_per_cm * 100.0,
    };
    Ok(LinearChargeDensity { system: ctx.system, value, esu_per_cm, coulomb_per_cm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gaussian_elementary_charge() {
        let g = UnitContext::new(UnitSystem::Gaussian);
        assert_relative_eq!(g.electron_charge, 4.803_204_7e-10, max_relative = 1e-7);
    }

    #[test]
    fn elementary_charge_maps_to_natural_value() {
        // The rounded CODATA values of α, ħc, e and ε₀ agree to about 1e-10.
        let e_nat = UnitContext::new(UnitSystem::Natural).electron_charge;
        for sys in [UnitSystem::Gaussian, UnitSystem::Si] {
            let ctx = UnitContext::new(sys);
            assert_relative_eq!(ctx.to_natural(ctx.electron_charge, Dimensions::CHARGE), e_nat, max_relative = 1e-9);
        }
    }

    #[test]
    fn mass_round_trip() {
        let si = UnitContext::new(UnitSystem::Si);
        let m = si.from_natural(NEUTRON_REST_ENERGY_MEV, Dimensions::ENERGY);
        assert_relative_eq!(m, si.default_mass, max_relative = 1e-14);
        assert_relative_eq!(si.to_natural(m, Dimensions::ENERGY), NEUTRON_REST_ENERGY_MEV, max_relative = 1e-12);
    }

    #[test]
    fn ring_sign() {
        let ctx = UnitContext::default();
        let c = coupling_for(&ChargeConfig::Ring { charge: 3.0, radius: 1.0 }, &ctx, -1.9, 939.0).unwrap();
        assert!(c.value() > 0.0);
        assert_eq!(c.kind(), CouplingKind::BetaRingDisk);
    }

    #[test]
    fn zero_plane_charge_gives_zero_alpha() {
        let ctx = UnitContext::default();
        let c = coupling_for(&ChargeConfig::Plane { sigma: 0.0 }, &ctx, -1.9, 939.0).unwrap();
        assert_eq!(c.value(), 0.0);
    }

    #[test]
    fn rejects_bad_mass() {
        let ctx = UnitContext::default();
        let cfg = ChargeConfig::Plane { sigma: 1.0 };
        assert_eq!(coupling_for(&cfg, &ctx, -1.9, 0.0), Err(UnitsError::NonPositiveMass(0.0)));
        assert!(coupling_for(&cfg, &ctx, -1.9, -3.0).is_err());
    }

    #[test]
    fn lambda_min_rejects_zero_kappa() {
        assert_eq!(lambda_min(&UnitContext::default(), 0.0, 939.0), Err(UnitsError::ZeroKappa));
    }

    #[test]
    fn lambda_min_neutron_value() {
        let ctx = UnitContext::new(UnitSystem::Gaussian);
        let l = lambda_min(&ctx, NEUTRON_KAPPA, ctx.default_mass).unwrap();
        assert_relative_eq!(l.coulomb_per_cm, 6.867e-3, max_relative = 1e-3);
    }
}
