use std::f64::consts::PI;

use acsusy_core::units::{coupling_for, lambda_min, Dimensions, NEUTRON_KAPPA, PROTON_MOMENT_KAPPA};
use acsusy_core::{ChargeConfig, UnitContext, UnitSystem};
use approx::assert_relative_eq;
use proptest::prelude::*;

#[test]
fn natural_lambda_min_is_the_plain_formula() {
    let ctx = UnitContext::default();
    for (kappa, mass) in [(NEUTRON_KAPPA, 939.56542052), (2.5, 1.0), (-0.1, 3.0)] {
        let got = lambda_min(&ctx, kappa, mass).unwrap();
        let e = (4.0 * PI / 137.035999084).sqrt();
        assert_relative_eq!(got.value, 4.0 * PI * mass / (e * kappa).abs(), max_relative = 1e-9);
        assert_eq!(got.unit(), "MeV");
    }
}

#[test]
fn physical_lambda_min_values() {
    let si = UnitContext::new(UnitSystem::Si);
    let mass = si.default_mass;
    let neutron = lambda_min(&si, NEUTRON_KAPPA, mass).unwrap();
    let proton = lambda_min(&si, PROTON_MOMENT_KAPPA, mass).unwrap();
    // 4π·(939.565 MeV in erg)/(4.8032e-10 esu · |κ|), then esu → C.
    let erg = 939.56542052 * 1.602176634e-6;
    let oracle = |k: f64| 4.0 * PI * erg / (4.80320471e-10 * k.abs()) / 2.99792458e9;
    assert_relative_eq!(neutron.coulomb_per_cm, oracle(NEUTRON_KAPPA), max_relative = 1e-8);
    assert_relative_eq!(proton.coulomb_per_cm, oracle(PROTON_MOMENT_KAPPA), max_relative = 1e-8);
    assert!((proton.coulomb_per_cm / 4.6973e-3 - 1.0).abs() < 0.01);
    assert!((neutron.coulomb_per_cm - 6.9e-3).abs() < 0.1e-3);
    assert_relative_eq!(neutron.value, 100.0 * neutron.coulomb_per_cm, max_relative = 1e-15);
    // Mass given in a different system gives the same physical figure.
    let natural = lambda_min(&UnitContext::default(), NEUTRON_KAPPA, 939.56542052).unwrap();
    assert_relative_eq!(natural.coulomb_per_cm, neutron.coulomb_per_cm, max_relative = 1e-12);
}

#[test]
fn lambda_min_rejects_degenerate_input() {
    let ctx = UnitContext::default();
    assert!(lambda_min(&ctx, 0.0, 1.0).is_err());
    assert!(lambda_min(&ctx, 1.0, -1.0).is_err());
    assert!(lambda_min(&ctx, f64::NAN, 1.0).is_err());
}

#[test]
fn coupling_is_unit_independent() {
    // A 1 fm cylinder at density 1e-3 e/fm³ described in three systems.
    let nat = UnitContext::default();
    let r0_nat: f64 = 1.0 / 197.3269804;
    let rho_nat = 1e-3 * nat.electron_charge / r0_nat.powi(3);
    let base = ChargeConfig::Cylinder { rho: rho_nat, radius: r0_nat };
    let c_nat = coupling_for(&base, &nat, NEUTRON_KAPPA, nat.default_mass).unwrap();
    for sys in [UnitSystem::Gaussian, UnitSystem::Si] {
        let ctx = UnitContext::new(sys);
        let cfg = ctx.config_from_natural(&base);
        let c = coupling_for(&cfg, &ctx, NEUTRON_KAPPA, ctx.default_mass).unwrap();
        assert_relative_eq!(c.value(), c_nat.value(), max_relative = 1e-9);
        let strength = c.value() * r0_nat * r0_nat;
        assert!(strength.is_finite());
    }
}

proptest! {
    #[test]
    fn round_trip_through_natural_units(v in -1e6f64..1e6, q in -2i32..3, l in -3i32..3, e in -1i32..2) {
        let dims = Dimensions::new(q, l, e);
        for sys in [UnitSystem::Natural, UnitSystem::Gaussian, UnitSystem::Si] {
            let ctx = UnitContext::new(sys);
            let back = ctx.from_natural(ctx.to_natural(v, dims), dims);
            prop_assert!((back - v).abs() <= 1e-12 * v.abs().max(1e-300));
        }
    }

    #[test]
    fn config_round_trip(rho in 1e-3f64..1e3, r0 in 1e-3f64..1e3) {
        let cfg = ChargeConfig::Cylinder { rho, radius: r0 };
        for sys in [UnitSystem::Gaussian, UnitSystem::Si] {
            let ctx = UnitContext::new(sys);
            let ChargeConfig::Cylinder { rho: r2, radius: a2 } = ctx.config_to_natural(&ctx.config_from_natural(&cfg)) else { unreachable!() };
            prop_assert!((r2 / rho - 1.0).abs() < 1e-12 && (a2 / r0 - 1.0).abs() < 1e-12);
        }
    }
}
