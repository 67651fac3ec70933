use std::f64::consts::PI;

use acsusy::figures::{figure_series, meta_path, FigureParams, AXIAL_POINTS, RADIAL_POINTS};
use acsusy_core::ground_state::probability_outside;
use approx::assert_relative_eq;

/// Composite Simpson rule on equally spaced samples (even interval count).
fn simpson(x: &[f64], f: &[f64]) -> f64 {
    let h = x[1] - x[0];
    let n = x.len() - 1;
    assert!(n % 2 == 0);
    (0..n / 2).map(|i| h / 3.0 * (f[2 * i] + 4.0 * f[2 * i + 1] + f[2 * i + 2])).sum()
}

#[test]
fn figure_three_densities_are_normalised() {
    let s = figure_series(3, &FigureParams::default()).unwrap();
    assert_eq!(s.columns.len(), 4);
    assert_eq!(s.rows.len(), RADIAL_POINTS);
    let r: Vec<f64> = s.rows.iter().map(|row| row[0]).collect();
    for (j, beta) in [-1.2f64, -2.0, -5.0].iter().enumerate() {
        assert_eq!(s.columns[j + 1], format!("phi_sq_beta_{beta}"));
        let f: Vec<f64> = s.rows.iter().map(|row| 2.0 * PI * row[0] * row[j + 1]).collect();
        let inner: Vec<f64> = f[..=200].to_vec();
        let outer: Vec<f64> = f[200..].to_vec();
        let body = simpson(&r[..=200], &inner) + simpson(&r[200..], &outer);
        // Beyond r = 6r₀ the density is the pure tail r^{2β}.
        let tail = probability_outside(*beta, 1.0).unwrap() * 6f64.powf(2.0 + 2.0 * beta);
        assert!((body + tail - 1.0).abs() < 1e-6, "beta {beta}: {}", body + tail);
    }
}

#[test]
fn figure_one_tails_are_constant() {
    let s = figure_series(1, &FigureParams::default()).unwrap();
    assert_eq!(s.columns, ["z", "phi_sq_ring", "phi_sq_disk"]);
    assert_eq!(s.rows.len(), AXIAL_POINTS);
    assert_eq!(s.rows[AXIAL_POINTS / 2][0], 0.0);
    let last = s.rows.last().unwrap();
    let first = &s.rows[0];
    for j in 1..3 {
        assert!(last[j] > 0.5 && last[j] < 2.0, "{last:?}");
        assert_relative_eq!(first[j], last[j], max_relative = 1e-12);
        // Peak at the centre, far above the tail.
        assert!(s.rows[AXIAL_POINTS / 2][j] > 2.0 * last[j]);
    }
}

#[test]
fn figure_two_curves_are_normalised() {
    let s = figure_series(2, &FigureParams::default()).unwrap();
    assert_eq!(s.columns, ["z", "phi_sq_plane", "phi_sq_slabgap"]);
    let z: Vec<f64> = s.rows.iter().map(|r| r[0]).collect();
    let mid = AXIAL_POINTS / 2;
    for j in 1..3 {
        let f: Vec<f64> = s.rows.iter().map(|r| r[j]).collect();
        // Split at the kinks z = 0 and |z| = L/2, both nodes of the grid.
        let q = mid / 20;
        let cuts = [0, mid - q, mid, mid + q, AXIAL_POINTS - 1];
        let mut total: f64 = cuts.windows(2).map(|w| simpson(&z[w[0]..=w[1]], &f[w[0]..=w[1]])).sum();
        if j == 1 {
            // Exponential plane tails beyond the plotted range.
            let alpha: f64 = s.metadata.iter().find(|(k, _)| k == "alpha_plane").unwrap().1.parse().unwrap();
            total += 2.0 * f[0] / alpha.abs();
        }
        assert!((total - 1.0).abs() < 1e-6, "column {j}: {total}");
    }
}

#[test]
fn broken_betas_and_bad_ids_are_rejected() {
    let p = FigureParams { betas: vec![-2.0, -1.0], ..FigureParams::default() };
    let err = figure_series(3, &p).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(err.to_string().contains("-1"));
    for id in [0, 4] {
        assert_eq!(figure_series(id, &FigureParams::default()).unwrap_err().exit_code(), 2);
    }
}

#[test]
fn csv_is_reproducible_and_locale_free() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig3.csv");
    let s = figure_series(3, &FigureParams::default()).unwrap();
    s.write(&path).unwrap();
    let first = std::fs::read(&path).unwrap();
    figure_series(3, &FigureParams::default()).unwrap().write(&path).unwrap();
    assert_eq!(first, std::fs::read(&path).unwrap());
    let text = String::from_utf8(first).unwrap();
    let row = text.lines().nth(1).unwrap();
    for cell in row.split(',') {
        let mantissa = cell.split('e').next().unwrap();
        assert_eq!(mantissa.trim_start_matches('-').len(), 18, "{cell}");
        assert!(cell.parse::<f64>().is_ok());
    }
    let meta = std::fs::read_to_string(meta_path(&path)).unwrap();
    assert!(meta.starts_with("# natural units"));
}
