use acsusy::commands::{report_json, verdict_of};
use acsusy::config::{parse_config_str, RunConfig};
use acsusy::pipeline::run_report;
use acsusy_core::ground_state::classify_susy;
use acsusy_core::units::coupling_for;
use acsusy_core::{ChargeConfig, UnitContext};
use proptest::prelude::*;

/// Natural-unit ρ giving βr₀² = strength for r₀ = 1 and the default κ, M.
fn cylinder_rho(strength: f64) -> f64 {
    let ctx = UnitContext::default();
    let g = ctx.electron_charge * acsusy_core::units::NEUTRON_KAPPA / (2.0 * ctx.default_mass);
    -2.0 * strength / g
}

#[test]
fn unbroken_cylinder_reports_normalisation() {
    let run = RunConfig::new(ChargeConfig::Cylinder { rho: cylinder_rho(-2.0), radius: 1.0 });
    let report = run_report(&run).unwrap();
    assert_eq!(report.verdict.status, "unbroken");
    let norm = report.normalization.as_ref().unwrap();
    assert!(norm.a_squared.unwrap() > 0.0);
    assert!((norm.quadrature_norm - 1.0).abs() < 1e-9);
    assert!(report.lambda_min.line_density_ratio.unwrap() > 1.0);
    assert!(report.spectrum.levels[0].epsilon.abs() < 1e-5);
}

#[test]
fn ring_report_has_no_normalisation() {
    let run = parse_config_str("geometry=ring\nQ=5e4\nr0=2").unwrap();
    let text = report_json(&run).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["verdict"]["status"], "broken");
    assert_eq!(v["verdict"]["divergence"], "constant_tail");
    assert!(v.get("normalization").is_none());
    for key in ["coupling", "lambda_min", "algebra", "spectrum"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn reports_are_byte_identical() {
    for text in ["geometry=slab_gap\nrho=3e4\nL=0.5", "geometry=cylinder\nrho=-2e4\nr0=1", "geometry=plane\nsigma=-1e4\nunits=natural"] {
        let run = parse_config_str(text).unwrap();
        assert_eq!(report_json(&run).unwrap(), report_json(&run).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn report_verdict_matches_classification(kind in 0usize..6, scale in -3.0f64..3.0, length in 0.2f64..3.0) {
        let x = 1e4 * scale;
        let geometry = match kind {
            0 => ChargeConfig::Ring { charge: x, radius: length },
            1 => ChargeConfig::Disk { charge: x, radius: length },
            2 => ChargeConfig::Plane { sigma: x },
            3 => ChargeConfig::SlabGap { rho: x, gap: length },
            4 => ChargeConfig::Volume { rho: x },
            _ => ChargeConfig::Cylinder { rho: x, radius: length },
        };
        let run = RunConfig::new(geometry);
        let ctx = run.context();
        let c = coupling_for(&geometry, &ctx, run.kappa, run.mass).unwrap();
        let expected = classify_susy(&geometry, &c).unwrap();
        prop_assert_eq!(verdict_of(&run).unwrap(), expected);
        let report = run_report(&run).unwrap();
        prop_assert_eq!(report.verdict.status == "unbroken", expected.is_unbroken());
    }
}
