//! Supersymmetric ground states of a neutral spin-1/2 particle with an
//! anomalous magnetic moment moving in Aharonov–Casher electric fields.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only numerics:
//!
//! * [`units`]: constants, unit systems, the geometry couplings β and α and
//!   the minimum line-charge density for a bound ground state.
//! * [`configurations`]: the charge geometries and their electric-field
//!   profiles on the axial line or the radial plane.
//! * [`ground_state`]: zero modes (closed form and by quadrature), their
//!   normalisation and the broken/unbroken supersymmetry classification.
//! * [`algebra`]: discretised supercharges and Hamiltonians, and checks of
//!   the superalgebra on a grid.
//! * [`spectrum`]: grid diagonalisation and the shooting solution of the
//!   matching condition at the cylinder surface.
//!
//! All quantities inside the physics modules are in natural units
//! (ħ = c = 1, Heaviside–Lorentz charges so that ∇·E = ρ). Use
//! [`units::UnitContext`] to move configurations in and out of Gaussian or
//! SI units.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod configurations;
pub mod error;
pub mod grid;
pub mod ground_state;
pub(crate) mod math;
pub mod numerics;
pub mod sector;
pub mod spectrum;
pub mod units;
pub mod wavefunction;

pub use configurations::{ChargeConfig, Domain, FieldProfile, PointValue};
pub use error::{
    AlgebraError, ConfigError, GridError, GroundStateError, SpectrumError, UnitsError,
};
pub use grid::UniformGrid;
pub use sector::Sector;
pub use units::{Coupling, CouplingKind, UnitContext, UnitSystem};
pub use wavefunction::{NormKind, WaveFunction};
