mod common;

use std::f64::consts::PI;

use acsusy_core::ground_state::{cylinder_density, normalization_cylinder, probability_inside, probability_outside};
use approx::assert_relative_eq;
use common::simpson;
use proptest::prelude::*;

/// |A|² from 1/|A|² = 2π[∫₀^{r₀} r e^{βr²} dr + e^{βr₀²}∫_{r₀}^∞ r (r/r₀)^{2βr₀²} dr],
/// the outer integral taken in t = ln(r/r₀).
fn a_squared_oracle(beta: f64, r0: f64) -> f64 {
    let nu = -beta * r0 * r0;
    let inner = simpson(&|r: f64| r * (beta * r * r).exp(), 0.0, r0, 1e-16);
    let rate = 2.0 - 2.0 * nu;
    let t_max = 45.0 / -rate;
    let outer = r0 * r0 * (-nu).exp() * simpson(&|t: f64| (rate * t).exp(), 0.0, t_max, 1e-17);
    1.0 / (2.0 * PI * (inner + outer))
}

#[test]
fn a_squared_matches_quadrature_oracle() {
    for nu in [1.1, 1.5, 2.0, 5.0, 20.0] {
        for r0 in [1.0, 0.7, 3.0] {
            let beta = -nu / (r0 * r0);
            let (a_sq, b_sq) = normalization_cylinder(beta, r0).unwrap();
            assert_relative_eq!(a_sq, a_squared_oracle(beta, r0), max_relative = 1e-10);
            // Continuity at r₀.
            assert_relative_eq!(b_sq * r0.powf(-2.0 * nu), a_sq * (-nu).exp(), max_relative = 1e-12);
        }
    }
}

#[test]
fn density_integrates_to_one() {
    for nu in [1.2, 2.0, 5.0] {
        let beta = -nu;
        let rho = |r: f64| 2.0 * PI * r * cylinder_density(beta, 1.0, r).unwrap();
        let inner = simpson(&rho, 0.0, 1.0, 1e-14);
        let outer = simpson(&|t: f64| rho(t.exp()) * t.exp(), 0.0, 45.0 / (2.0 * nu - 2.0), 1e-14);
        assert_relative_eq!(inner + outer, 1.0, max_relative = 1e-9);
        assert_relative_eq!(probability_outside(beta, 1.0).unwrap(), outer, max_relative = 1e-9);
        assert_relative_eq!(probability_inside(beta, 1.0).unwrap() + probability_outside(beta, 1.0).unwrap(), 1.0, max_relative = 1e-13);
    }
}

#[test]
fn threshold_limit_spreads_the_state_out() {
    let (a_sq, _) = normalization_cylinder(-1.0 - 1e-6, 1.0).unwrap();
    assert!(a_sq < 1e-5);
    assert!(probability_outside(-1.0 - 1e-6, 1.0).unwrap() > 0.999);
    assert!(normalization_cylinder(-1.0, 1.0).is_err());
    assert!(normalization_cylinder(-0.5, 1.0).is_err());
}

#[test]
fn large_strength_does_not_overflow() {
    let (a_sq, b_sq) = normalization_cylinder(-800.0, 1.0).unwrap();
    assert!(a_sq.is_finite() && b_sq.is_finite());
    // Deep well: Gaussian core, |A|² → |β|/π.
    assert_relative_eq!(a_sq, 800.0 / PI, max_relative = 2e-3);
}

proptest! {
    #[test]
    fn outside_probability_decreases_with_strength(nu in 1.01f64..40.0, step in 1e-3f64..5.0) {
        let p1 = probability_outside(-nu, 1.0).unwrap();
        let p2 = probability_outside(-(nu + step), 1.0).unwrap();
        prop_assert!(p2 < p1);
    }

    #[test]
    fn normalization_scales_with_radius(nu in 1.01f64..30.0, r0 in 0.05f64..20.0) {
        // |A|²r₀² depends on ν alone.
        let (a1, _) = normalization_cylinder(-nu, 1.0).unwrap();
        let (a2, _) = normalization_cylinder(-nu / (r0 * r0), r0).unwrap();
        prop_assert!((a2 * r0 * r0 / a1 - 1.0).abs() < 1e-12);
        let p1 = probability_outside(-nu, 1.0).unwrap();
        let p2 = probability_outside(-nu / (r0 * r0), r0).unwrap();
        prop_assert!((p1 - p2).abs() < 1e-12);
    }
}
