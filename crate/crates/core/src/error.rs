use thiserror::Error;

use crate::numerics::ode::OdeError;
use crate::numerics::quadrature::QuadratureError;
use crate::numerics::tridiag::EigenError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{parameter} must be positive, got {value}")]
    NonPositive { parameter: &'static str, value: f64 },
    #[error("{parameter} must be finite, got {value}")]
    NonFinite { parameter: &'static str, value: f64 },
    #[error("{geometry} is not defined on the {expected} domain")]
    WrongDomain { geometry: &'static str, expected: &'static str },
    #[error("sector label {label} must be +1 or -1, got {value}")]
    InvalidSector { label: &'static str, value: i8 },
    #[error("point {point} lies outside the field domain")]
    OutsideDomain { point: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UnitsError {
    #[error("mass must be positive and finite, got {0}")]
    NonPositiveMass(f64),
    #[error("kappa = 0: the minimum line density diverges")]
    ZeroKappa,
    #[error("kappa must be finite, got {0}")]
    NonFiniteKappa(f64),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("grid needs at least {required} nodes, got {got}")]
    TooFewNodes { required: usize, got: usize },
    #[error("{parameter} must be positive and finite, got {value}")]
    InvalidExtent { parameter: &'static str, value: f64 },
    #[error("breakpoint {point} is not a grid node")]
    BreakpointNotNode { point: f64 },
    #[error("breakpoint {point} lies outside the grid")]
    BreakpointOutside { point: f64 },
    #[error("grid coordinates are not uniformly spaced")]
    NotUniform,
    #[error("coordinates must be finite and strictly increasing (index {index})")]
    NotIncreasing { index: usize },
    #[error("grid domain does not match the field profile")]
    DomainMismatch,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GroundStateError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("zero-mode exponent {exponent:.3e} at x = {at} exceeds the cap {cap}")]
    ExponentOverflow { at: f64, exponent: f64, cap: f64 },
    #[error("beta*r0^2 = {strength} is not below -1: no normalizable zero mode")]
    ThresholdViolation { strength: f64 },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("grid too coarse: |W| h = {value:.3} at x = {at} exceeds 1")]
    GridTooCoarse { at: f64, value: f64 },
    #[error("vector length {got} does not match the grid ({expected})")]
    LengthMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error("requested {requested} eigenpairs but the grid has {available} nodes")]
    TooManyLevels { requested: usize, available: usize },
    #[error("epsilon = {epsilon:.6e} lies in the scattering continuum (threshold {threshold:.6e}): no decaying tail")]
    Continuum { epsilon: f64, threshold: f64 },
    #[error("radial integration broke down at r = {radius:.6e}: {source}")]
    Stiffness { radius: f64, source: OdeError },
    #[error("doubling the domain moved level {index} by {shift:.3e} (tolerance {tolerance:.3e})")]
    TruncationSensitive { index: usize, shift: f64, tolerance: f64 },
    #[error("invalid search window [{lower}, {upper}]")]
    InvalidWindow { lower: f64, upper: f64 },
    #[error("k must be at least 1")]
    ZeroCount,
}
