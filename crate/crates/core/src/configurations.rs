//! Charge geometries and the electric-field profiles they produce.
//!
//! Fields follow the ∇·E = ρ convention. The four planar sources (ring,
//! disk, plane, slab with a gap) and the uniform volume are seen on the z
//! axis; the cylinder field is radial in the plane. Points where E or dE/dx
//! is not smooth are listed as breakpoints so grids can put nodes there.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::ConfigError;
use crate::math;
use crate::units::Dimensions;

/// Coordinate domain of a field profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    /// The z axis, z ∈ ℝ.
    Axial,
    /// The radial half-line r ∈ [0, ∞) of the plane.
    Radial,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChargeConfig {
    /// Uniformly charged ring of total charge `charge` and radius `radius`.
    Ring { charge: f64, radius: f64 },
    /// Uniformly charged disk of total charge `charge` and radius `radius`.
    Disk { charge: f64, radius: f64 },
    /// Infinite plane with surface density `sigma`.
    Plane { sigma: f64 },
    /// Uniform volume density `rho` with a symmetric slab of thickness `gap`
    /// removed around z = 0.
    SlabGap { rho: f64, gap: f64 },
    /// Infinite cylinder of uniform density `rho` and radius `radius`.
    Cylinder { rho: f64, radius: f64 },
    /// Uniform volume density with no gap.
    Volume { rho: f64 },
}

impl ChargeConfig {
    pub fn name(&self) -> &'static str {
        match self {
            ChargeConfig::Ring { .. } => "ring",
            ChargeConfig::Disk { .. } => "disk",
            ChargeConfig::Plane { .. } => "plane",
            ChargeConfig::SlabGap { .. } => "slab_gap",
            ChargeConfig::Cylinder { .. } => "cylinder",
            ChargeConfig::Volume { .. } => "volume",
        }
    }

    pub fn domain(&self) -> Domain {
        match self {
            ChargeConfig::Cylinder { .. } => Domain::Radial,
            _ => Domain::Axial,
        }
    }

    /// The charge, surface or volume density that sets the field strength.
    pub fn charge_parameter(&self) -> f64 {
        match *self {
            ChargeConfig::Ring { charge, .. } | ChargeConfig::Disk { charge, .. } => charge,
            ChargeConfig::Plane { sigma } => sigma,
            ChargeConfig::SlabGap { rho, .. } | ChargeConfig::Cylinder { rho, .. } | ChargeConfig::Volume { rho } => rho,
        }
    }

    /// Geometric length of the source: r₀ or the gap thickness L.
    pub fn source_length(&self) -> Option<f64> {
        match *self {
            ChargeConfig::Ring { radius, .. } | ChargeConfig::Disk { radius, .. } | ChargeConfig::Cylinder { radius, .. } => {
                Some(radius)
            }
            ChargeConfig::SlabGap { gap, .. } => Some(gap),
            ChargeConfig::Plane { .. } | ChargeConfig::Volume { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let finite = |parameter: &'static str, value: f64| {
            if value.is_finite() {
                Ok(())
            } else {
                Err(ConfigError::NonFinite { parameter, value })
            }
        };
        let positive = |parameter: &'static str, value: f64| {
            finite(parameter, value)?;
            if value > 0.0 {
                Ok(())
            } else {
                Err(ConfigError::NonPositive { parameter, value })
            }
        };
        match *self {
            ChargeConfig::Ring { charge, radius } | ChargeConfig::Disk { charge, radius } => {
                finite("Q", charge)?;
                positive("r0", radius)
            }
            ChargeConfig::Plane { sigma } => finite("sigma", sigma),
            ChargeConfig::SlabGap { rho, gap } => {
                finite("rho", rho)?;
                positive("L", gap)
            }
            ChargeConfig::Cylinder { rho, radius } => {
                finite("rho", rho)?;
                positive("r0", radius)
            }
            ChargeConfig::Volume { rho } => finite("rho", rho),
        }
    }

    /// Applies `f(value, dimensions)` to every parameter, for unit changes.
    pub fn map_parameters(&self, f: impl Fn(f64, Dimensions) -> f64) -> ChargeConfig {
        let q = Dimensions::CHARGE;
        let len = Dimensions::LENGTH;
        let sigma = Dimensions::new(1, -2, 0);
        let rho = Dimensions::new(1, -3, 0);
        match *self {
            ChargeConfig::Ring { charge, radius } => ChargeConfig::Ring { charge: f(charge, q), radius: f(radius, len) },
            ChargeConfig::Disk { charge, radius } => ChargeConfig::Disk { charge: f(charge, q), radius: f(radius, len) },
            ChargeConfig::Plane { sigma: s } => ChargeConfig::Plane { sigma: f(s, sigma) },
            ChargeConfig::SlabGap { rho: r, gap } => ChargeConfig::SlabGap { rho: f(r, rho), gap: f(gap, len) },
            ChargeConfig::Cylinder { rho: r, radius } => ChargeConfig::Cylinder { rho: f(r, rho), radius: f(radius, len) },
            ChargeConfig::Volume { rho: r } => ChargeConfig::Volume { rho: f(r, rho) },
        }
    }

    /// The field profile of this source (see [`FieldProfile::new`]).
    pub fn field_profile(&self) -> Result<FieldProfile, ConfigError> {
        FieldProfile::new(*self)
    }
}

/// A value at a point that may be a breakpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PointValue {
    Smooth(f64),
    /// One-sided limits from below and above.
    Breakpoint { left: f64, right: f64 },
}

impl PointValue {
    pub fn average(&self) -> f64 {
        match *self {
            PointValue::Smooth(v) => v,
            PointValue::Breakpoint { left, right } => 0.5 * (left + right),
        }
    }
}

/// Closed-form electric field of a [`ChargeConfig`] with analytic
/// derivative, divergence and antiderivative.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldProfile {
    config: ChargeConfig,
    breakpoints: Vec<f64>,
}

impl FieldProfile {
    pub fn new(config: ChargeConfig) -> Result<Self, ConfigError> {
        config.validate()?;
        let breakpoints = match config {
            ChargeConfig::Ring { .. } | ChargeConfig::Volume { .. } => Vec::new(),
            ChargeConfig::Disk { .. } | ChargeConfig::Plane { .. } => vec![0.0],
            ChargeConfig::SlabGap { gap, .. } => vec![-0.5 * gap, 0.5 * gap],
            ChargeConfig::Cylinder { radius, .. } => vec![radius],
        };
        Ok(Self { config, breakpoints })
    }

    pub fn config(&self) -> &ChargeConfig {
        &self.config
    }

    pub fn domain(&self) -> Domain {
        self.config.domain()
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Length scale of the source, falling back to 1 for the scale-free
    /// plane and volume.
    pub fn length_scale(&self) -> f64 {
        self.config.source_length().unwrap_or(1.0)
    }

    pub fn is_breakpoint(&self, x: f64) -> bool {
        let tol = 1e-12 * self.length_scale();
        self.breakpoints.iter().any(|b| math::abs(x - b) <= tol)
    }

    fn check_domain(&self, x: f64) -> Result<(), ConfigError> {
        if !x.is_finite() || (self.domain() == Domain::Radial && x < 0.0) {
            return Err(ConfigError::OutsideDomain { point: x });
        }
        Ok(())
    }

    /// E(x) off breakpoints, with the branch chosen by `above` at a
    /// breakpoint.
    fn field_branch(&self, x: f64, above: bool) -> f64 {
        let side = |z: f64| {
            if z > 0.0 || (z == 0.0 && above) {
                1.0
            } else {
                -1.0
            }
        };
        match self.config {
            ChargeConfig::Ring { charge, radius } => {
                let s2 = x * x + radius * radius;
                0.5 * charge * x / (s2 * math::sqrt(s2))
            }
            ChargeConfig::Disk { charge, radius } => {
                let sigma = charge / (PI * radius * radius);
                let s = math::hypot(x, radius);
                0.5 * sigma * side(x) * (1.0 - math::abs(x) / s)
            }
            ChargeConfig::Plane { sigma } => 0.5 * sigma * side(x),
            ChargeConfig::SlabGap { rho, gap } => {
                let half = 0.5 * gap;
                let outside = math::abs(x) > half || (math::abs(x) == half && (x > 0.0) == above);
                if outside {
                    rho * (x - side(x) * half)
                } else {
                    0.0
                }
            }
            ChargeConfig::Cylinder { rho, radius } => {
                if x < radius || (x == radius && !above) {
                    0.5 * rho * x
                } else {
                    0.5 * rho * radius * radius / x
                }
            }
            ChargeConfig::Volume { rho } => rho * x,
        }
    }

    /// One-sided limits (E(x⁻), E(x⁺)); equal away from discontinuities.
    pub fn field_limits(&self, x: f64) -> (f64, f64) {
        if self.is_breakpoint(x) {
            let b = self.snap(x);
            (self.field_branch(b, false), self.field_branch(b, true))
        } else {
            let e = self.field_branch(x, true);
            (e, e)
        }
    }

    /// E(x); the mean of the one-sided limits at a breakpoint.
    pub fn field(&self, x: f64) -> f64 {
        let (l, r) = self.field_limits(x);
        0.5 * (l + r)
    }

    /// Jump E(x⁺) − E(x⁻); nonzero only at surface charges.
    pub fn field_jump(&self, x: f64) -> f64 {
        let (l, r) = self.field_limits(x);
        r - l
    }

    fn snap(&self, x: f64) -> f64 {
        self.breakpoints
            .iter()
            .copied()
            .find(|b| math::abs(x - b) <= 1e-12 * self.length_scale())
            .unwrap_or(x)
    }

    fn derivative_branch(&self, x: f64, above: bool) -> f64 {
        match self.config {
            ChargeConfig::Ring { charge, radius } => {
                let s2 = x * x + radius * radius;
                0.5 * charge * (radius * radius - 2.0 * x * x) / (s2 * s2 * math::sqrt(s2))
            }
            ChargeConfig::Disk { charge, radius } => {
                let sigma = charge / (PI * radius * radius);
                let s2 = x * x + radius * radius;
                -0.5 * sigma * radius * radius / (s2 * math::sqrt(s2))
            }
            ChargeConfig::Plane { .. } => 0.0,
            ChargeConfig::SlabGap { rho, gap } => {
                let half = 0.5 * gap;
                let outside = math::abs(x) > half || (math::abs(x) == half && (x > 0.0) == above);
                if outside {
                    rho
                } else {
                    0.0
                }
            }
            ChargeConfig::Cylinder { rho, radius } => {
                if x < radius || (x == radius && !above) {
                    0.5 * rho
                } else {
                    -0.5 * rho * radius * radius / (x * x)
                }
            }
            ChargeConfig::Volume { rho } => rho,
        }
    }

    /// dE/dx, excluding any delta function carried by a jump of E.
    pub fn field_derivative(&self, x: f64) -> PointValue {
        if self.is_breakpoint(x) {
            let b = self.snap(x);
            PointValue::Breakpoint { left: self.derivative_branch(b, false), right: self.derivative_branch(b, true) }
        } else {
            PointValue::Smooth(self.derivative_branch(x, true))
        }
    }

    /// Charge density seen by the particle: dE/dz on the axis, and
    /// (1/r) d(rE)/dr in the plane. At a breakpoint both one-sided limits
    /// are returned instead of a single value.
    pub fn divergence_at(&self, x: f64) -> Result<PointValue, ConfigError> {
        self.check_domain(x)?;
        Ok(self.divergence(x))
    }

    pub(crate) fn divergence(&self, x: f64) -> PointValue {
        match self.config {
            ChargeConfig::Cylinder { rho, radius } => {
                if self.is_breakpoint(x) {
                    PointValue::Breakpoint { left: rho, right: 0.0 }
                } else if x < radius {
                    PointValue::Smooth(rho)
                } else {
                    PointValue::Smooth(0.0)
                }
            }
            _ => self.field_derivative(x),
        }
    }

    /// ∫₀ˣ E: the zero-mode exponent up to the coupling prefactor.
    pub fn antiderivative(&self, x: f64) -> f64 {
        match self.config {
            ChargeConfig::Ring { charge, radius } => 0.5 * charge * (1.0 / radius - 1.0 / math::hypot(x, radius)),
            ChargeConfig::Disk { charge, radius } => {
                let sigma = charge / (PI * radius * radius);
                0.5 * sigma * (math::abs(x) - math::hypot(x, radius) + radius)
            }
            ChargeConfig::Plane { sigma } => 0.5 * sigma * math::abs(x),
            ChargeConfig::SlabGap { rho, gap } => {
                let d = math::abs(x) - 0.5 * gap;
                if d > 0.0 {
                    0.5 * rho * d * d
                } else {
                    0.0
                }
            }
            ChargeConfig::Cylinder { rho, radius } => {
                if x <= radius {
                    0.25 * rho * x * x
                } else {
                    0.25 * rho * radius * radius + 0.5 * rho * radius * radius * math::ln(x / radius)
                }
            }
            ChargeConfig::Volume { rho } => 0.5 * rho * x * x,
        }
    }
}
