mod common;

use std::time::Instant;

use acsusy_core::spectrum::{
    eigensolve, extrapolated_levels, find_discrete_levels, EigensolveOptions, OuterBoundary, ShootingOptions, SusyStatus,
};
use acsusy_core::{ChargeConfig, Coupling, Sector, SpectrumError, UniformGrid};
use approx::assert_relative_eq;
use common::order;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Cylinder of radius r₀ with βr₀² = strength; g = 1, M = ½.
fn cylinder(strength: f64, r0: f64) -> (ChargeConfig, Coupling) {
    let cfg = ChargeConfig::Cylinder { rho: -2.0 * strength / (r0 * r0), radius: r0 };
    (cfg, Coupling::from_field_scale(&cfg, 1.0, 0.5))
}

fn random_sector(rng: &mut ChaCha8Rng) -> Sector {
    let pick = |rng: &mut ChaCha8Rng| if rng.random_bool(0.5) { 1 } else { -1 };
    Sector::new(pick(rng), pick(rng)).unwrap()
}

#[test]
fn shooting_matches_grid_diagonalisation() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..12 {
        let strength: f64 = rng.random_range(-4.0..4.0);
        let r0: f64 = rng.random_range(0.5..2.0);
        let m: i32 = rng.random_range(-2..=2);
        let sector = random_sector(&mut rng);
        let (cfg, c) = cylinder(strength, r0);
        let profile = cfg.field_profile().unwrap();
        let grid = UniformGrid::radial(r0, 30, 6.0 * r0).unwrap().refined();
        let levels = extrapolated_levels(&profile, &c, &grid, m, sector, 4).unwrap();
        let scale = 1.0 / (r0 * r0);
        let top = levels.extrapolated[3] * 1.05;
        let opts = ShootingOptions { outer: OuterBoundary::Dirichlet(grid.upper_boundary()), ..Default::default() };
        let shot = find_discrete_levels(&cfg, &c, m, sector, (-0.5 * scale, top), &opts).unwrap();
        let roots = shot.energies();
        assert_eq!(roots.len(), 4, "βr₀²={strength} r0={r0} m={m} {sector}: {roots:?} vs {:?}", levels.extrapolated);
        for (a, b) in roots.iter().zip(&levels.extrapolated) {
            assert!((a - b).abs() < 1e-6, "βr₀²={strength} m={m} {sector}: {roots:?} vs {:?}", levels.extrapolated);
        }
    }
    assert!(start.elapsed().as_secs_f64() < 60.0);
}

#[test]
fn zero_energy_root_exactly_below_threshold() {
    let opts = ShootingOptions { scan_points: 24, ..Default::default() };
    for i in 0..=40 {
        let strength = f64::from(i - 30) / 10.0;
        let (cfg, c) = cylinder(strength, 1.0);
        let result = find_discrete_levels(&cfg, &c, 0, Sector::UP, (-2.0, 0.0), &opts).unwrap();
        let has_zero = result.entries.iter().any(|e| e.zero_mode && e.epsilon == 0.0);
        assert_eq!(has_zero, strength < -1.0, "βr₀² = {strength}: {:?}", result.entries);
        assert_eq!(result.susy_status == SusyStatus::Unbroken, strength < -1.0);
    }
}

#[test]
fn no_negative_levels_in_any_sector() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let opts = ShootingOptions { scan_points: 30, ..Default::default() };
    for _ in 0..10 {
        let strength: f64 = rng.random_range(-5.0..5.0);
        let (cfg, c) = cylinder(strength, 1.0);
        for m in -2..=2 {
            for sector in [Sector::UP, Sector::DOWN, Sector::new(1, -1).unwrap(), Sector::new(-1, -1).unwrap()] {
                let result = find_discrete_levels(&cfg, &c, m, sector, (-3.0, 0.0), &opts).unwrap();
                assert!(result.entries.iter().all(|e| e.epsilon >= -1e-9), "βr₀²={strength} m={m} {sector}: {:?}", result.entries);
            }
        }
    }
}

#[test]
fn continuum_window_is_rejected() {
    let (cfg, c) = cylinder(-2.0, 1.0);
    let err = find_discrete_levels(&cfg, &c, 0, Sector::UP, (-1.0, 1.0), &ShootingOptions::default()).unwrap_err();
    assert!(matches!(err, SpectrumError::InvalidWindow { .. }));
}

#[test]
fn oscillator_levels() {
    // W = gρz: ω = |gρ|, up levels nω/M and down levels (n+1)ω/M.
    for rho in [2.0, 0.5] {
        let cfg = ChargeConfig::Volume { rho };
        let c = Coupling::from_field_scale(&cfg, 1.0, 0.5);
        let profile = cfg.field_profile().unwrap();
        let step = rho / 0.5;
        let grid = UniformGrid::axial(10.0 / rho.sqrt(), 800).unwrap();
        for (sector, offset) in [(Sector::UP, 0.0), (Sector::DOWN, 1.0)] {
            let lv = extrapolated_levels(&profile, &c, &grid, 0, sector, 3).unwrap();
            for (n, e) in lv.extrapolated.iter().enumerate() {
                let exact = (n as f64 + offset) * step;
                if exact == 0.0 {
                    assert!(e.abs() < 1e-4 * step, "{e}");
                } else {
                    assert_relative_eq!(*e, exact, max_relative = 1e-4);
                }
            }
        }
    }
}

#[test]
fn partner_spectra_coincide_above_zero() {
    for cfg in [ChargeConfig::SlabGap { rho: 1.0, gap: 1.0 }, ChargeConfig::Volume { rho: -1.5 }, ChargeConfig::SlabGap { rho: -2.0, gap: 0.4 }] {
        let c = Coupling::from_field_scale(&cfg, 1.0, 0.5);
        let profile = cfg.field_profile().unwrap();
        let grid = UniformGrid::axial_resolving(8.0, 0.02, profile.breakpoints()).unwrap();
        let up = extrapolated_levels(&profile, &c, &grid, 0, Sector::UP, 5).unwrap();
        let down = extrapolated_levels(&profile, &c, &grid, 0, Sector::DOWN, 5).unwrap();
        // The favourable sector holds the extra zero level.
        let (with_zero, without) = if c.value() < 0.0 { (&up, &down) } else { (&down, &up) };
        assert!(with_zero.extrapolated[0].abs() < 1e-6);
        for i in 0..4 {
            assert_relative_eq!(with_zero.extrapolated[i + 1], without.extrapolated[i], max_relative = 1e-6);
        }
    }
}

#[test]
fn cylinder_zero_mode_level_converges_to_zero() {
    // In a Dirichlet box the zero mode is lifted to a box level of order
    // R⁻⁴ for βr₀² = −2; grid levels converge to it at second order.
    let (cfg, c) = cylinder(-2.0, 1.0);
    let profile = cfg.field_profile().unwrap();
    let opts = EigensolveOptions { eigenvectors: false, ..Default::default() };
    let mut box_levels = Vec::new();
    for outer in [10.0, 20.0, 40.0] {
        let mut grid = UniformGrid::radial(1.0, 20, outer).unwrap();
        let shoot = ShootingOptions { outer: OuterBoundary::Dirichlet(grid.upper_boundary()), ..Default::default() };
        let exact = find_discrete_levels(&cfg, &c, 0, Sector::UP, (-0.1, 0.005), &shoot).unwrap().energies()[0];
        let mut errors = Vec::new();
        for _ in 0..3 {
            let res = eigensolve(&profile, &c, &grid, 0, Sector::UP, 1, &opts).unwrap();
            errors.push((res.entries[0].epsilon - exact).abs());
            grid = grid.refined();
        }
        for w in errors.windows(2) {
            let p = order(w[0], w[1], 3.0);
            assert!(p >= 1.9, "R={outer}: {errors:?} order {p}");
        }
        box_levels.push(exact);
    }
    for w in box_levels.windows(2) {
        let p = order(w[0], w[1], 2.0);
        assert!(p > 3.5, "{box_levels:?}");
    }
}

#[test]
fn truncation_check_separates_bound_and_continuum() {
    let opts = EigensolveOptions { check_truncation: true, eigenvectors: false, ..Default::default() };
    let cfg = ChargeConfig::Volume { rho: 1.0 };
    let c = Coupling::from_field_scale(&cfg, 1.0, 0.5);
    let grid = UniformGrid::axial(8.0, 400).unwrap();
    let res = eigensolve(&cfg.field_profile().unwrap(), &c, &grid, 0, Sector::UP, 3, &opts).unwrap();
    assert_eq!(res.susy_status, SusyStatus::Unbroken);

    let (cfg, c) = cylinder(0.5, 1.0);
    let grid = UniformGrid::radial(1.0, 10, 10.0).unwrap();
    let err = eigensolve(&cfg.field_profile().unwrap(), &c, &grid, 0, Sector::UP, 1, &opts).unwrap_err();
    assert!(matches!(err, SpectrumError::TruncationSensitive { .. }));
}

#[test]
fn grid_levels_are_never_significantly_negative() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let strength: f64 = rng.random_range(-5.0..5.0);
        let m: i32 = rng.random_range(-3..=3);
        let sector = random_sector(&mut rng);
        let (cfg, c) = cylinder(strength, 1.0);
        let grid = UniformGrid::radial(1.0, 15, 8.0).unwrap();
        let lv = extrapolated_levels(&cfg.field_profile().unwrap(), &c, &grid, m, sector, 1).unwrap();
        assert!(lv.fine[0] >= -10.0 * lv.error_estimate[0], "βr₀²={strength} m={m} {sector}: {lv:?}");
    }
}
