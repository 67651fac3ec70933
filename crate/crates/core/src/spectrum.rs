//! Eigenvalue problems: diagonalisation of the discretised Hamiltonian
//! blocks, and the shooting solution of the matching condition at the
//! cylinder surface.
//!
//! Energies are ε = (E² − M²)/2M in natural units. Every Hamiltonian block
//! is {Q, Q†} restricted to a sector and therefore non-negative.

use alloc::vec::Vec;

use crate::algebra::{symmetric_hamiltonian, weights};
use crate::configurations::{ChargeConfig, Domain, FieldProfile};
use crate::error::{ConfigError, SpectrumError};
use crate::grid::UniformGrid;
use crate::math;
use crate::numerics::ode::{integrate, OdeError, OdeOptions};
use crate::sector::Sector;
use crate::units::Coupling;
use crate::wavefunction::{NormKind, WaveFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SusyStatus {
    Unbroken,
    Broken,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumMethod {
    GridDiag,
    Shooting,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumEntry {
    pub epsilon: f64,
    pub m: i32,
    pub sector: Sector,
    /// Present for grid diagonalisation; shooting reports energies only.
    pub wavefunction: Option<WaveFunction>,
    /// True for a normalisable ε = 0 state, the supersymmetric ground state.
    pub zero_mode: bool,
}

impl SpectrumEntry {
    /// Relativistic energy from E² = M² + 2Mε.
    pub fn relativistic_energy(&self, mass: f64) -> f64 {
        relativistic_energy(self.epsilon, mass)
    }
}

pub fn relativistic_energy(epsilon: f64, mass: f64) -> f64 {
    math::sqrt(mass * mass + 2.0 * mass * epsilon)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    /// Sorted by ascending ε.
    pub entries: Vec<SpectrumEntry>,
    pub susy_status: SusyStatus,
    pub method: SpectrumMethod,
}

impl SpectrumResult {
    pub fn energies(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.epsilon).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Natural energy unit 1/(2Mℓ²) of a profile.
pub fn energy_scale(profile: &FieldProfile, coupling: &Coupling) -> f64 {
    let l = profile.length_scale();
    0.5 / (coupling.mass() * l * l)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigensolveOptions {
    /// Re-solve on a grid with twice the outer extent and fail if any level
    /// moves by more than `truncation_tolerance`.
    pub check_truncation: bool,
    pub truncation_tolerance: f64,
    /// Levels with ε at or below this count as zero modes. Defaults to
    /// 1e-6 of the profile's energy scale.
    pub zero_tolerance: Option<f64>,
    pub eigenvectors: bool,
}

impl Default for EigensolveOptions {
    fn default() -> Self {
        Self { check_truncation: false, truncation_tolerance: 1e-8, zero_tolerance: None, eigenvectors: true }
    }
}

fn lowest_levels(
    profile: &FieldProfile,
    coupling: &Coupling,
    grid: &UniformGrid,
    m: i32,
    sector: Sector,
    k: usize,
) -> Result<(crate::numerics::tridiag::SymTridiagonal, Vec<f64>), SpectrumError> {
    if k == 0 {
        return Err(SpectrumError::ZeroCount);
    }
    if k > grid.len() {
        return Err(SpectrumError::TooManyLevels { requested: k, available: grid.len() });
    }
    let m = if grid.domain() == Domain::Axial { 0 } else { m };
    let h = symmetric_hamiltonian(profile, coupling, grid, sector, m)?;
    let eigs = h.lowest_eigenvalues(k)?;
    Ok((h, eigs))
}

/// Lowest `k` eigenpairs of one Hamiltonian block with Dirichlet conditions
/// at the outer ghost node(s) of `grid`.
pub fn eigensolve(
    profile: &FieldProfile,
    coupling: &Coupling,
    grid: &UniformGrid,
    m: i32,
    sector: Sector,
    k: usize,
    opts: &EigensolveOptions,
) -> Result<SpectrumResult, SpectrumError> {
    let (h, eigs) = lowest_levels(profile, coupling, grid, m, sector, k)?;
    if opts.check_truncation {
        let (_, wide) = lowest_levels(profile, coupling, &grid.doubled_extent(), m, sector, k)?;
        for (index, (a, b)) in eigs.iter().zip(&wide).enumerate() {
            let shift = math::abs(a - b);
            if shift > opts.truncation_tolerance {
                return Err(SpectrumError::TruncationSensitive { index, shift, tolerance: opts.truncation_tolerance });
            }
        }
    }
    let zero_tol = opts.zero_tolerance.unwrap_or(1e-6 * energy_scale(profile, coupling));
    let w = weights(grid);
    let m = if grid.domain() == Domain::Axial { 0 } else { m };
    let mut entries = Vec::with_capacity(k);
    for &epsilon in &eigs {
        let wavefunction = if opts.eigenvectors {
            let y = h.eigenvector(epsilon)?;
            let samples = y.iter().zip(&w).map(|(v, wi)| v / math::sqrt(*wi)).collect();
            Some(WaveFunction::new(grid.domain(), grid.nodes(), samples, sector, m, NormKind::Unnormalized).normalized())
        } else {
            None
        };
        entries.push(SpectrumEntry { epsilon, m, sector, wavefunction, zero_mode: epsilon <= zero_tol });
    }
    let susy_status = if entries.first().is_some_and(|e| e.zero_mode) { SusyStatus::Unbroken } else { SusyStatus::Broken };
    Ok(SpectrumResult { entries, susy_status, method: SpectrumMethod::GridDiag })
}

/// Grid eigenvalues with a Richardson estimate of their continuum limit.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtrapolatedLevels {
    pub coarse: Vec<f64>,
    pub fine: Vec<f64>,
    pub extrapolated: Vec<f64>,
    /// |fine − extrapolated|, a bound on the error of the fine values.
    pub error_estimate: Vec<f64>,
}

/// Lowest `k` eigenvalues on `grid` and on its refinement, combined by
/// Richardson extrapolation at order 2.
pub fn extrapolated_levels(
    profile: &FieldProfile,
    coupling: &Coupling,
    grid: &UniformGrid,
    m: i32,
    sector: Sector,
    k: usize,
) -> Result<ExtrapolatedLevels, SpectrumError> {
    let (_, coarse) = lowest_levels(profile, coupling, grid, m, sector, k)?;
    let (_, fine) = lowest_levels(profile, coupling, &grid.refined(), m, sector, k)?;
    let factor = grid.refinement_factor() as f64;
    let extrapolated: Vec<f64> =
        coarse.iter().zip(&fine).map(|(c, f)| crate::numerics::richardson(*c, *f, factor, 2.0)).collect();
    let error_estimate = fine.iter().zip(&extrapolated).map(|(f, x)| math::abs(f - x)).collect();
    Ok(ExtrapolatedLevels { coarse, fine, extrapolated, error_estimate })
}

/// Outer boundary condition for the inward radial integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OuterBoundary {
    /// Solution decaying at infinity; only ε ≤ 0 is admissible.
    Decaying,
    /// f(R) = 0 at the given radius, the condition grid diagonalisation
    /// imposes at its outer ghost node.
    Dirichlet(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingOptions {
    pub outer: OuterBoundary,
    pub ode: OdeOptions,
    /// Start of the outward integration as a fraction of r₀.
    pub start_fraction: f64,
    /// For ε < 0 the inward integration starts this many decay lengths
    /// 1/√(−2Mε) beyond r₀.
    pub decay_lengths: f64,
    pub scan_points: usize,
    /// Bisection stops when the bracket is below this fraction of the
    /// energy scale 1/(2Mr₀²).
    pub root_tolerance: f64,
    /// |mismatch| below which ε = 0 counts as a root.
    pub zero_mismatch_tolerance: f64,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        Self {
            outer: OuterBoundary::Decaying,
            ode: OdeOptions::default(),
            start_fraction: 1e-3,
            decay_lengths: 50.0,
            scan_points: 200,
            root_tolerance: 1e-10,
            zero_mismatch_tolerance: 1e-8,
        }
    }
}

/// Radial equation for one (τ₃, σ₃, m) block written in t = ln r:
/// f_tt = q(t) f with q = m² + r²(W² − τ₃(g∇·E + 2σ₃mW/r) − 2Mε).
struct RadialProblem<'a> {
    profile: &'a FieldProfile,
    g: f64,
    two_m: f64,
    tau: f64,
    sigma: f64,
    m: f64,
    epsilon: f64,
    r0: f64,
}

impl RadialProblem<'_> {
    /// q without the energy term.
    fn potential(&self, r: f64, above: bool) -> f64 {
        let w = self.g * self.profile.field(r);
        let div = match self.profile.divergence(r) {
            crate::configurations::PointValue::Smooth(d) => d,
            crate::configurations::PointValue::Breakpoint { left, right } => {
                if above {
                    right
                } else {
                    left
                }
            }
        };
        self.m * self.m + r * r * (w * w - self.tau * self.g * div) - 2.0 * self.tau * self.sigma * self.m * w * r
    }

    fn q(&self, r: f64, above: bool) -> f64 {
        self.potential(r, above) - self.two_m * self.epsilon * r * r
    }

    fn integrate(&self, t0: f64, y0: [f64; 2], t1: f64, opts: &OdeOptions) -> Result<[f64; 2], SpectrumError> {
        let above = t0 > math::ln(self.r0);
        let rhs = |t: f64, y: &[f64; 2]| [y[1], self.q(math::exp(t), above) * y[0]];
        let rescale = |_: f64, y: &mut [f64; 2]| {
            let n = math::abs(y[0]) + math::abs(y[1]);
            if !(1e-100..=1e100).contains(&n) && n > 0.0 {
                y[0] /= n;
                y[1] /= n;
            }
        };
        integrate(rhs, t0, y0, t1, opts, rescale).map_err(|e: OdeError| {
            let t = match e {
                OdeError::StepUnderflow { t } | OdeError::StepLimit { t } | OdeError::NonFinite { t } => t,
            };
            SpectrumError::Stiffness { radius: math::exp(t), source: e }
        })
    }

    /// Regular solution ~ r^{|m|}(1 + a r²) carried from near the origin
    /// to r₀.
    fn outward(&self, opts: &ShootingOptions) -> Result<[f64; 2], SpectrumError> {
        let rs = opts.start_fraction * self.r0;
        let mu = math::abs(self.m);
        let q2 = (self.q(rs, false) - self.m * self.m) / (rs * rs);
        let a = q2 / (4.0 * (mu + 1.0));
        let y0 = [1.0 + a * rs * rs, mu + (mu + 2.0) * a * rs * rs];
        self.integrate(math::ln(rs), y0, math::ln(self.r0), &opts.ode)
    }

    /// Solution obeying the outer boundary condition, carried in to r₀.
    fn inward(&self, opts: &ShootingOptions) -> Result<[f64; 2], SpectrumError> {
        match opts.outer {
            OuterBoundary::Dirichlet(radius) => {
                if !(radius.is_finite() && radius > self.r0) {
                    return Err(ConfigError::NonPositive { parameter: "R - r0", value: radius - self.r0 }.into());
                }
                self.integrate(math::ln(radius), [0.0, -1.0], math::ln(self.r0), &opts.ode)
            }
            OuterBoundary::Decaying => {
                if self.epsilon > 0.0 {
                    return Err(SpectrumError::Continuum { epsilon: self.epsilon, threshold: 0.0 });
                }
                let kappa_sq = -self.two_m * self.epsilon;
                let far = if kappa_sq > 0.0 {
                    self.r0 + opts.decay_lengths / math::sqrt(kappa_sq)
                } else {
                    100.0 * self.r0
                };
                // WKB log-derivative of the decaying solution of f_tt = Q f.
                let big_q = self.q(far, true);
                let slope = 2.0 * kappa_sq * far * far;
                let y = -math::sqrt(big_q.max(0.0)) - if big_q > 0.0 { slope / (4.0 * big_q) } else { 0.0 };
                self.integrate(math::ln(far), [1.0, y], math::ln(self.r0), &opts.ode)
            }
        }
    }

    /// Power μ of the exterior solutions r^{±μ} at ε = 0.
    fn exterior_power(&self) -> f64 {
        math::sqrt(self.potential(100.0 * self.r0, true).max(0.0))
    }
}

fn radial_problem<'a>(
    profile: &'a FieldProfile,
    coupling: &Coupling,
    epsilon: f64,
    m: i32,
    sector: Sector,
) -> Result<RadialProblem<'a>, SpectrumError> {
    let r0 = match *profile.config() {
        ChargeConfig::Cylinder { radius, .. } => radius,
        ref other => return Err(ConfigError::WrongDomain { geometry: other.name(), expected: "radial" }.into()),
    };
    if !epsilon.is_finite() {
        return Err(ConfigError::NonFinite { parameter: "epsilon", value: epsilon }.into());
    }
    Ok(RadialProblem {
        profile,
        g: coupling.field_scale(),
        two_m: 2.0 * coupling.mass(),
        tau: sector.tau(),
        sigma: sector.sigma(),
        m: f64::from(m),
        epsilon,
        r0,
    })
}

/// Normalised Wronskian (f_out·f′_in − f′_out·f_in)/(|u_out||u_in|) at r₀ of
/// the regular interior solution and the exterior solution obeying the
/// outer boundary condition; derivatives are with respect to ln r. Its
/// zeros in ε are the eigenvalues.
pub fn match_at_boundary(
    config: &ChargeConfig,
    coupling: &Coupling,
    epsilon: f64,
    m: i32,
    sector: Sector,
    opts: &ShootingOptions,
) -> Result<f64, SpectrumError> {
    let profile = config.field_profile()?;
    let problem = radial_problem(&profile, coupling, epsilon, m, sector)?;
    mismatch(&problem, opts)
}

fn mismatch(problem: &RadialProblem<'_>, opts: &ShootingOptions) -> Result<f64, SpectrumError> {
    let out = problem.outward(opts)?;
    let inn = problem.inward(opts)?;
    let w = out[0] * inn[1] - out[1] * inn[0];
    Ok(w / (math::hypot(out[0], out[1]) * math::hypot(inn[0], inn[1])))
}

/// Brackets sign changes of [`match_at_boundary`] on a uniform scan of
/// `[lower, upper]` and refines each by bisection.
///
/// With [`OuterBoundary::Decaying`] the window must lie in ε ≤ 0; ε = 0 is
/// tested directly and kept only when the exterior tail r^{−μ} is
/// normalisable (μ > 1), in which case it is flagged as the zero mode.
pub fn find_discrete_levels(
    config: &ChargeConfig,
    coupling: &Coupling,
    m: i32,
    sector: Sector,
    window: (f64, f64),
    opts: &ShootingOptions,
) -> Result<SpectrumResult, SpectrumError> {
    let (lower, upper) = window;
    if !(lower.is_finite() && upper.is_finite() && lower < upper) {
        return Err(SpectrumError::InvalidWindow { lower, upper });
    }
    if opts.outer == OuterBoundary::Decaying && upper > 0.0 {
        return Err(SpectrumError::InvalidWindow { lower, upper });
    }
    let profile = config.field_profile()?;
    let r0 = profile.length_scale();
    let scale = 0.5 / (coupling.mass() * r0 * r0);
    let eval = |e: f64| -> Result<f64, SpectrumError> { mismatch(&radial_problem(&profile, coupling, e, m, sector)?, opts) };

    let mut roots: Vec<(f64, bool)> = Vec::new();
    let n = opts.scan_points.max(2);
    let xs: Vec<f64> = (0..n).map(|i| lower + (upper - lower) * i as f64 / (n - 1) as f64).collect();
    let mut values = Vec::with_capacity(n);
    for &x in &xs {
        values.push(eval(x)?);
    }
    let zero_at_edge = opts.outer == OuterBoundary::Decaying && upper == 0.0;
    for i in 0..n - 1 {
        let (mut a, mut b) = (xs[i], xs[i + 1]);
        let (mut fa, fb) = (values[i], values[i + 1]);
        if fa == 0.0 {
            roots.push((a, true));
            continue;
        }
        if zero_at_edge && i + 1 == n - 1 {
            // The ε = 0 endpoint is handled below.
            if math::abs(fb) <= opts.zero_mismatch_tolerance {
                continue;
            }
        }
        if fa * fb >= 0.0 {
            continue;
        }
        while b - a > opts.root_tolerance * scale {
            let mid = 0.5 * (a + b);
            let fm = eval(mid)?;
            if fm == 0.0 {
                a = mid;
                b = mid;
                break;
            }
            if fa * fm < 0.0 {
                b = mid;
            } else {
                a = mid;
                fa = fm;
            }
        }
        roots.push((0.5 * (a + b), true));
    }
    let last = values[n - 1];
    if zero_at_edge && math::abs(last) <= opts.zero_mismatch_tolerance {
        let mu = radial_problem(&profile, coupling, 0.0, m, sector)?.exterior_power();
        roots.push((0.0, mu > 1.0));
    } else if opts.outer != OuterBoundary::Decaying && last == 0.0 {
        roots.push((upper, true));
    }

    let zero_tol = opts.root_tolerance * scale * 10.0;
    let mut entries: Vec<SpectrumEntry> = roots
        .into_iter()
        .filter(|(_, normalizable)| *normalizable)
        .map(|(epsilon, _)| SpectrumEntry {
            epsilon,
            m,
            sector,
            wavefunction: None,
            zero_mode: opts.outer == OuterBoundary::Decaying && math::abs(epsilon) <= zero_tol,
        })
        .collect();
    entries.sort_by(|a, b| a.epsilon.total_cmp(&b.epsilon));
    entries.dedup_by(|a, b| math::abs(a.epsilon - b.epsilon) <= zero_tol);
    let susy_status = if entries.iter().any(|e| e.zero_mode) { SusyStatus::Unbroken } else { SusyStatus::Broken };
    Ok(SpectrumResult { entries, susy_status, method: SpectrumMethod::Shooting })
}

/// Interior data for ε > 0 where the exterior is a scattering continuum:
/// the logarithmic derivative r f′/f of the regular solution at r₀, which
/// fixes the phase shift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringPoint {
    pub epsilon: f64,
    pub log_derivative: f64,
}

pub fn scattering_data(
    config: &ChargeConfig,
    coupling: &Coupling,
    m: i32,
    sector: Sector,
    energies: &[f64],
    opts: &ShootingOptions,
) -> Result<Vec<ScatteringPoint>, SpectrumError> {
    let profile = config.field_profile()?;
    energies
        .iter()
        .map(|&epsilon| {
            let p = radial_problem(&profile, coupling, epsilon, m, sector)?;
            let u = p.outward(opts)?;
            Ok(ScatteringPoint { epsilon, log_derivative: u[1] / u[0] })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cylinder(nu: f64) -> (ChargeConfig, Coupling) {
        // g = 1, M = 1/2: β = −ρ/2 and 1/2M = 1.
        let cfg = ChargeConfig::Cylinder { rho: 2.0 * nu, radius: 1.0 };
        (cfg, Coupling::from_field_scale(&cfg, 1.0, 0.5))
    }

    #[test]
    fn zero_mode_matches_at_zero_energy() {
        let (cfg, c) = cylinder(2.0);
        let mm = match_at_boundary(&cfg, &c, 0.0, 0, Sector::UP, &ShootingOptions::default()).unwrap();
        assert!(mm.abs() < 1e-8, "{mm}");
    }

    #[test]
    fn continuum_is_rejected() {
        let (cfg, c) = cylinder(2.0);
        let err = match_at_boundary(&cfg, &c, 0.1, 0, Sector::UP, &ShootingOptions::default()).unwrap_err();
        assert!(matches!(err, SpectrumError::Continuum { .. }));
    }

    #[test]
    fn zero_mode_is_found_only_below_threshold() {
        for (nu, expected) in [(2.0, true), (0.5, false)] {
            let (cfg, c) = cylinder(nu);
            let r = find_discrete_levels(&cfg, &c, 0, Sector::UP, (-1.0, 0.0), &ShootingOptions::default()).unwrap();
            assert_eq!(r.susy_status == SusyStatus::Unbroken, expected, "nu = {nu}");
            assert!(r.entries.iter().all(|e| e.epsilon >= 0.0));
        }
    }

    #[test]
    fn free_cylinder_has_no_bound_states() {
        let cfg = ChargeConfig::Cylinder { rho: 0.0, radius: 1.0 };
        let c = Coupling::from_field_scale(&cfg, 1.0, 0.5);
        let r = find_discrete_levels(&cfg, &c, 0, Sector::UP, (-2.0, 0.0), &ShootingOptions::default()).unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn dirichlet_roots_match_free_disk() {
        // Free particle in a disk of radius R: ε = j₀ₙ²/R² with 1/2M = 1.
        let cfg = ChargeConfig::Cylinder { rho: 0.0, radius: 1.0 };
        let c = Coupling::from_field_scale(&cfg, 1.0, 0.5);
        let opts = ShootingOptions { outer: OuterBoundary::Dirichlet(3.0), ..ShootingOptions::default() };
        let r = find_discrete_levels(&cfg, &c, 0, Sector::UP, (0.01, 3.0), &opts).unwrap();
        let j01: f64 = 2.404_825_557_695_773;
        assert_relative_eq!(r.entries[0].epsilon, j01 * j01 / 9.0, max_relative = 1e-9);
    }

    #[test]
    fn oscillator_levels_on_a_grid() {
        // W = gρz with g = ρ = 1, M = 1/2: ω/M = 2, up-sector levels 0, 2, 4.
        let cfg = ChargeConfig::Volume { rho: 1.0 };
        let c = Coupling::from_field_scale(&cfg, 1.0, 0.5);
        let p = cfg.field_profile().unwrap();
        let grid = UniformGrid::axial(12.0, 600).unwrap();
        let r = eigensolve(&p, &c, &grid, 0, Sector::UP, 3, &EigensolveOptions::default()).unwrap();
        for (e, want) in r.energies().iter().zip([0.0, 2.0, 4.0]) {
            assert!((e - want).abs() < 1e-3, "{e} vs {want}");
        }
        let wf = r.entries[0].wavefunction.as_ref().unwrap();
        assert_relative_eq!(wf.trapezoid_norm_sq(), 1.0, max_relative = 1e-12);
    }
}
