//! Discretised supercharges and Hamiltonians, and grid checks of the
//! superalgebra.
//!
//! With W = g·E the supercharge is Q = τ⁻ ⊗ (−i)(d + W)/√(2M). Only the
//! real operator A = d + W (radially ∂ − σ₃m/r + W) is stored; it maps the
//! τ₃ = +1 block to its partner block. Its adjoint is taken under the
//! domain's inner product (weights r_i on radial grids).
//!
//! The Hamiltonian blocks are discretised independently of A, from
//! (1/2M)[p² + W² − τ₃ W′] on the axis and
//! (1/2M)[p² + W² − τ₃ (g ∇·E + 2σ₃ m W/r)] in the plane.

use alloc::vec::Vec;

use crate::configurations::{Domain, FieldProfile, PointValue};
use crate::error::{AlgebraError, GridError};
use crate::grid::UniformGrid;
use crate::math;
use crate::numerics::tridiag::{SymTridiagonal, Tridiagonal};
use crate::sector::Sector;
use crate::units::Coupling;
use crate::wavefunction::WaveFunction;

/// Which family of operators a grid carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorDomain {
    Axial,
    /// Radial operators for the τ₃ = +1 block (σ₃, m); the partner block
    /// is (τ₃ = −1, −σ₃, m + σ₃).
    Radial { sigma3: i8, m: i32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorGrid {
    grid: UniformGrid,
    domain: OperatorDomain,
    mass: f64,
    a: Tridiagonal,
    a_dagger: Tridiagonal,
    hamiltonians: [Tridiagonal; 2],
    blocks: [(Sector, i32); 2],
    weights: Vec<f64>,
    breakpoints: Vec<f64>,
    length_scale: f64,
}

fn check_grid(profile: &FieldProfile, grid: &UniformGrid) -> Result<(), GridError> {
    if profile.domain() != grid.domain() {
        return Err(GridError::DomainMismatch);
    }
    if grid.len() < 3 {
        return Err(GridError::TooFewNodes { required: 3, got: grid.len() });
    }
    grid.check_breakpoints(profile.breakpoints())
}

/// Inner-product weights of the grid: 1 on the axis, r_i in the plane.
pub fn weights(grid: &UniformGrid) -> Vec<f64> {
    match grid.domain() {
        Domain::Axial => alloc::vec![1.0; grid.len()],
        Domain::Radial => grid.nodes(),
    }
}

/// Superpotential at a node; the mean of the one-sided limits at a jump.
fn superpotential(profile: &FieldProfile, g: f64, x: f64) -> f64 {
    g * profile.field(x)
}

/// First-order operator A on the grid, Dirichlet beyond the last node.
fn first_order(profile: &FieldProfile, g: f64, grid: &UniformGrid, sigma_m: f64, m: i32) -> Tridiagonal {
    let n = grid.len();
    let h = grid.spacing();
    let mut a = Tridiagonal::zeros(n);
    for i in 0..n {
        let x = grid.node(i);
        a.diag[i] = superpotential(profile, g, x);
        if i > 0 {
            a.lower[i] = -0.5 / h;
        }
        if i + 1 < n {
            a.upper[i] = 0.5 / h;
        }
        if grid.domain() == Domain::Radial {
            a.diag[i] -= sigma_m / x;
        }
    }
    if grid.domain() == Domain::Radial {
        // Mirror ghost at −h/2: f(−h/2) = (−1)^m f(h/2).
        let parity = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        a.diag[0] -= parity * 0.5 / h;
    }
    a
}

/// Hamiltonian block for `sector` (and angular number `m` in the plane),
/// as a general tridiagonal matrix self-adjoint under [`weights`].
pub fn hamiltonian_block(
    profile: &FieldProfile,
    coupling: &Coupling,
    grid: &UniformGrid,
    sector: Sector,
    m: i32,
) -> Result<Tridiagonal, AlgebraError> {
    check_grid(profile, grid)?;
    Ok(hamiltonian_unchecked(profile, coupling, grid, sector, m))
}

fn hamiltonian_unchecked(profile: &FieldProfile, coupling: &Coupling, grid: &UniformGrid, sector: Sector, m: i32) -> Tridiagonal {
    let n = grid.len();
    let h = grid.spacing();
    let g = coupling.field_scale();
    let scale = 0.5 / coupling.mass();
    let tau = sector.tau();
    let mut out = Tridiagonal::zeros(n);
    for i in 0..n {
        let x = grid.node(i);
        let (e_lo, e_hi) = profile.field_limits(x);
        let w_sq = 0.5 * g * g * (e_lo * e_lo + e_hi * e_hi);
        let (kin_lower, kin_diag, kin_upper, extra) = match grid.domain() {
            Domain::Axial => {
                let slope = match profile.field_derivative(x) {
                    PointValue::Smooth(d) => d,
                    PointValue::Breakpoint { left, right } => 0.5 * (left + right) + (e_hi - e_lo) / h,
                };
                (-1.0 / (h * h), 2.0 / (h * h), -1.0 / (h * h), -tau * g * slope)
            }
            Domain::Radial => {
                let div = profile.divergence(x).average();
                let w = g * 0.5 * (e_lo + e_hi);
                let mf = f64::from(m);
                let lo = (x - 0.5 * h).max(0.0);
                let hi = x + 0.5 * h;
                let d = (lo + hi) / (x * h * h);
                let centrifugal = mf * mf / (x * x);
                (-lo / (x * h * h), d, -hi / (x * h * h), centrifugal - tau * (g * div + 2.0 * sector.sigma() * mf * w / x))
            }
        };
        out.diag[i] = scale * (kin_diag + w_sq + extra);
        if i > 0 {
            out.lower[i] = scale * kin_lower;
        }
        if i + 1 < n {
            out.upper[i] = scale * kin_upper;
        }
    }
    out
}

/// Symmetric matrix similar to the Hamiltonian block, for eigensolvers.
pub fn symmetric_hamiltonian(
    profile: &FieldProfile,
    coupling: &Coupling,
    grid: &UniformGrid,
    sector: Sector,
    m: i32,
) -> Result<SymTridiagonal, AlgebraError> {
    let block = hamiltonian_block(profile, coupling, grid, sector, m)?;
    Ok(block.symmetrized(&weights(grid)))
}

/// Builds A, A† and the two Hamiltonian blocks.
///
/// On the axis the blocks are τ₃ = +1 and τ₃ = −1. In the plane `domain`
/// names (σ₃, m) of the τ₃ = +1 block.
pub fn build_operators(
    profile: &FieldProfile,
    coupling: &Coupling,
    grid: &UniformGrid,
    domain: OperatorDomain,
) -> Result<OperatorGrid, AlgebraError> {
    check_grid(profile, grid)?;
    let g = coupling.field_scale();
    let h = grid.spacing();
    for x in grid.nodes() {
        let (lo, hi) = profile.field_limits(x);
        let value = math::abs(g) * math::abs(lo).max(math::abs(hi)) * h;
        if value > 1.0 {
            return Err(AlgebraError::GridTooCoarse { at: x, value });
        }
    }
    let (blocks, sigma_m, m) = match (domain, grid.domain()) {
        (OperatorDomain::Axial, Domain::Axial) => ([(Sector::UP, 0), (Sector::DOWN, 0)], 0.0, 0),
        (OperatorDomain::Radial { sigma3, m }, Domain::Radial) => {
            let up = Sector::new(1, sigma3)?;
            let (partner, m_partner) = up.superpartner(m);
            ([(up, m), (partner, m_partner)], f64::from(sigma3) * f64::from(m), m)
        }
        _ => return Err(GridError::DomainMismatch.into()),
    };
    let w = weights(grid);
    let a = first_order(profile, g, grid, sigma_m, m);
    let a_dagger = a.weighted_adjoint(&w);
    let hamiltonians = [
        hamiltonian_unchecked(profile, coupling, grid, blocks[0].0, blocks[0].1),
        hamiltonian_unchecked(profile, coupling, grid, blocks[1].0, blocks[1].1),
    ];
    Ok(OperatorGrid {
        grid: grid.clone(),
        domain,
        mass: coupling.mass(),
        a,
        a_dagger,
        hamiltonians,
        blocks,
        weights: w,
        breakpoints: profile.breakpoints().to_vec(),
        length_scale: profile.length_scale(),
    })
}

impl OperatorGrid {
    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn domain(&self) -> OperatorDomain {
        self.domain
    }

    /// (sector, m) of the two blocks in stacking order.
    pub fn blocks(&self) -> [(Sector, i32); 2] {
        self.blocks
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn hamiltonian(&self, block: usize) -> &Tridiagonal {
        &self.hamiltonians[block]
    }

    /// The real operator A with Q = −i·A/√(2M) (block 0 → block 1).
    pub fn first_order(&self) -> &Tridiagonal {
        &self.a
    }

    pub fn first_order_adjoint(&self) -> &Tridiagonal {
        &self.a_dagger
    }

    fn check_len(&self, v: &[f64], expected: usize) -> Result<(), AlgebraError> {
        if v.len() != expected {
            return Err(AlgebraError::LengthMismatch { expected, got: v.len() });
        }
        Ok(())
    }

    /// Q acting on a sector-stacked vector [block 0; block 1], with the
    /// constant phase −i dropped.
    pub fn apply_q(&self, v: &[f64]) -> Result<Vec<f64>, AlgebraError> {
        let n = self.grid.len();
        self.check_len(v, 2 * n)?;
        let s = 1.0 / math::sqrt(2.0 * self.mass);
        let mut out = alloc::vec![0.0; 2 * n];
        for (o, x) in out[n..].iter_mut().zip(self.a.apply(&v[..n])) {
            *o = s * x;
        }
        Ok(out)
    }

    /// Q† acting on a sector-stacked vector (phase +i dropped).
    pub fn apply_q_dagger(&self, v: &[f64]) -> Result<Vec<f64>, AlgebraError> {
        let n = self.grid.len();
        self.check_len(v, 2 * n)?;
        let s = 1.0 / math::sqrt(2.0 * self.mass);
        let mut out = alloc::vec![0.0; 2 * n];
        for (o, x) in out[..n].iter_mut().zip(self.a_dagger.apply(&v[n..])) {
            *o = s * x;
        }
        Ok(out)
    }

    pub fn apply_h(&self, v: &[f64]) -> Result<Vec<f64>, AlgebraError> {
        let n = self.grid.len();
        self.check_len(v, 2 * n)?;
        let mut out = self.hamiltonians[0].apply(&v[..n]);
        out.extend(self.hamiltonians[1].apply(&v[n..]));
        Ok(out)
    }

    /// Nodes at least `window` away from every breakpoint and from the
    /// ends of the domain (the origin counts as an end on radial grids).
    pub fn interior_mask(&self, window: f64) -> Vec<bool> {
        let lo = self.grid.lower_boundary();
        let hi = self.grid.upper_boundary();
        self.grid
            .nodes()
            .into_iter()
            .map(|x| x - lo >= window && hi - x >= window && self.breakpoints.iter().all(|b| math::abs(x - b) >= window))
            .collect()
    }

    fn masked_norm(&self, v: &[f64], mask: &[bool]) -> f64 {
        let s: f64 = v
            .iter()
            .zip(mask)
            .zip(&self.weights)
            .filter(|((_, &keep), _)| keep)
            .map(|((x, _), w)| w * x * x)
            .sum();
        math::sqrt(s * self.grid.spacing())
    }

    fn probes(&self) -> Vec<[Vec<f64>; 2]> {
        let lo = self.grid.lower_boundary();
        let hi = self.grid.upper_boundary();
        let span = hi - lo;
        let width = span / 8.0;
        let nodes = self.grid.nodes();
        let power = |m: i32, x: f64| if self.grid.domain() == Domain::Radial { math::powf(x, f64::from(m.abs())) } else { 1.0 };
        [0.31, 0.5, 0.64]
            .iter()
            .map(|&frac| {
                let c = lo + frac * span;
                let make = |m: i32| -> Vec<f64> {
                    nodes
                        .iter()
                        .map(|&x| {
                            let u = (x - c) / width;
                            power(m, x) * math::exp(-u * u)
                        })
                        .collect()
                };
                [make(self.blocks[0].1), make(self.blocks[1].1)]
            })
            .collect()
    }

    /// Norms of {Q,Q†} − H, [H,Q] and [H,Q†] on smooth probe functions,
    /// measured on nodes at least `window` from breakpoints and domain ends.
    /// Each norm is relative to the probe's norm on the same nodes.
    pub fn verify_algebra_with_window(&self, window: f64) -> AlgebraReport {
        let mask = self.interior_mask(window);
        let s2 = 1.0 / (2.0 * self.mass);
        let s = math::sqrt(s2);
        let mut report = AlgebraReport { anticommutator_gap: 0.0, commutator_q: 0.0, commutator_q_dagger: 0.0, window };
        let diff = |a: Vec<f64>, b: Vec<f64>, scale: f64| -> Vec<f64> { a.iter().zip(&b).map(|(x, y)| scale * x - y).collect() };
        for [p0, p1] in self.probes() {
            let n0 = self.masked_norm(&p0, &mask).max(f64::MIN_POSITIVE);
            let n1 = self.masked_norm(&p1, &mask).max(f64::MIN_POSITIVE);
            // {Q,Q†} is Q†Q on block 0 and QQ† on block 1.
            let ap0 = self.a.apply(&p0);
            let gap0 = diff(self.a_dagger.apply(&ap0), self.hamiltonians[0].apply(&p0), s2);
            let adp1 = self.a_dagger.apply(&p1);
            let gap1 = diff(self.a.apply(&adp1), self.hamiltonians[1].apply(&p1), s2);
            let anti = (self.masked_norm(&gap0, &mask) / n0).max(self.masked_norm(&gap1, &mask) / n1);
            // [H,Q] on block 0: (H₁A − AH₀)/√(2M); [H,Q†] on block 1: (H₀A† − A†H₁)/√(2M).
            let hq = diff(self.hamiltonians[1].apply(&ap0), self.a.apply(&self.hamiltonians[0].apply(&p0)), 1.0);
            let hqd = diff(self.hamiltonians[0].apply(&adp1), self.a_dagger.apply(&self.hamiltonians[1].apply(&p1)), 1.0);
            report.anticommutator_gap = report.anticommutator_gap.max(anti);
            report.commutator_q = report.commutator_q.max(s * self.masked_norm(&hq, &mask) / n0);
            report.commutator_q_dagger = report.commutator_q_dagger.max(s * self.masked_norm(&hqd, &mask) / n1);
        }
        report
    }

    /// [`verify_algebra_with_window`](Self::verify_algebra_with_window) with
    /// a window of a quarter of the source length scale.
    pub fn verify_algebra(&self) -> AlgebraReport {
        self.verify_algebra_with_window(self.default_window())
    }

    pub fn default_window(&self) -> f64 {
        0.25 * self.length_scale.min(0.25 * (self.grid.upper_boundary() - self.grid.lower_boundary()))
    }

    /// ‖Q φ‖/‖φ‖ on interior nodes, applying Q to the τ₃ = +1 block and Q†
    /// to the τ₃ = −1 block.
    pub fn zero_mode_residual(&self, wf: &WaveFunction) -> Result<f64, AlgebraError> {
        self.zero_mode_residual_with_window(wf, self.default_window())
    }

    pub fn zero_mode_residual_with_window(&self, wf: &WaveFunction, window: f64) -> Result<f64, AlgebraError> {
        self.check_len(&wf.samples, self.grid.len())?;
        let mask = self.interior_mask(window);
        let op = if wf.sector.tau3() > 0 { &self.a } else { &self.a_dagger };
        let out = op.apply(&wf.samples);
        let n = self.masked_norm(&wf.samples, &mask);
        Ok(self.masked_norm(&out, &mask) / (math::sqrt(2.0 * self.mass) * n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraReport {
    pub anticommutator_gap: f64,
    pub commutator_q: f64,
    pub commutator_q_dagger: f64,
    pub window: f64,
}

impl AlgebraReport {
    pub fn max_gap(&self) -> f64 {
        self.anticommutator_gap.max(self.commutator_q).max(self.commutator_q_dagger)
    }
}

/// Free function form of [`OperatorGrid::verify_algebra`].
pub fn verify_algebra(ops: &OperatorGrid) -> AlgebraReport {
    ops.verify_algebra()
}

/// Free function form of [`OperatorGrid::zero_mode_residual`].
pub fn zero_mode_residual(ops: &OperatorGrid, wf: &WaveFunction) -> Result<f64, AlgebraError> {
    ops.zero_mode_residual(wf)
}

/// Result of applying a Hamiltonian block to a sampled wavefunction.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianAction {
    pub output: WaveFunction,
    /// True at breakpoint nodes, where the output is not meaningful.
    pub masked: Vec<bool>,
}

/// Applies the Hamiltonian block of `sector` (and `m` in the plane) to
/// `wf`, which must live on a uniform grid of the profile's domain.
pub fn apply_hamiltonian(
    profile: &FieldProfile,
    coupling: &Coupling,
    wf: &WaveFunction,
    sector: Sector,
    m: i32,
) -> Result<HamiltonianAction, AlgebraError> {
    let grid = UniformGrid::from_coords(wf.domain, &wf.coords)?;
    if wf.domain == Domain::Radial && math::abs(grid.node(0) - 0.5 * grid.spacing()) > 1e-9 * grid.spacing() {
        return Err(GridError::NotUniform.into());
    }
    let m = if wf.domain == Domain::Axial { 0 } else { m };
    let block = hamiltonian_block(profile, coupling, &grid, sector, m)?;
    let samples = block.apply(&wf.samples);
    let masked = wf.coords.iter().map(|&x| profile.is_breakpoint(x)).collect();
    let output = WaveFunction::new(wf.domain, wf.coords.clone(), samples, sector, m, crate::wavefunction::NormKind::Unnormalized);
    Ok(HamiltonianAction { output, masked })
}
