//! Dormand–Prince 5(4) integrator with adaptive step control.

use thiserror::Error;

use crate::math;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError {
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("step limit exceeded at t = {t}")]
    StepLimit { t: f64 },
    #[error("solution became non-finite at t = {t}")]
    NonFinite { t: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Initial step as a fraction of the integration span.
    pub initial_fraction: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-11, abs_tol: 1e-13, initial_fraction: 1e-3, max_steps: 200_000 }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// Difference between the 5th- and embedded 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates `y' = rhs(t, y)` from `t0` to `t1` (either direction).
///
/// `observer` sees every accepted step and may rescale the state in place,
/// which linear problems use to keep solutions inside floating-point range.
pub fn integrate<const N: usize, F, O>(
    mut rhs: F,
    t0: f64,
    y0: [f64; N],
    t1: f64,
    opts: &OdeOptions,
    mut observer: O,
) -> Result<[f64; N], OdeError>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    O: FnMut(f64, &mut [f64; N]),
{
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = math::sign(span);
    let mut t = t0;
    let mut y = y0;
    let mut h = span * opts.initial_fraction;
    let mut k = [[0.0; N]; 7];
    k[0] = rhs(t, &y);
    let mut steps = 0usize;

    while dir * (t1 - t) > 0.0 {
        if steps >= opts.max_steps {
            return Err(OdeError::StepLimit { t });
        }
        steps += 1;
        if dir * (t + h - t1) > 0.0 {
            h = t1 - t;
        }
        for s in 1..7 {
            let mut ys = y;
            for (i, v) in ys.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += A[s][j] * kj[i];
                }
                *v += h * acc;
            }
            k[s] = rhs(t + C[s] * h, &ys);
        }
        let mut y_new = y;
        for (i, v) in y_new.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (j, kj) in k.iter().enumerate().take(6) {
                acc += A[6][j] * kj[i];
            }
            *v += h * acc;
        }
        let mut err_sq = 0.0;
        for i in 0..N {
            let mut e = 0.0;
            for (j, kj) in k.iter().enumerate() {
                e += E[j] * kj[i];
            }
            let scale = opts.abs_tol + opts.rel_tol * math::abs(y[i]).max(math::abs(y_new[i]));
            let r = h * e / scale;
            err_sq += r * r;
        }
        let err = math::sqrt(err_sq / N as f64);
        if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
            h *= 0.25;
            if math::abs(h) < 1e-15 * math::abs(span) {
                return Err(OdeError::NonFinite { t });
            }
            continue;
        }
        if err <= 1.0 {
            t += h;
            y = y_new;
            observer(t, &mut y);
            // FSAL: the 7th stage is the derivative at the new point, unless
            // the observer rescaled the state.
            k[0] = rhs(t, &y);
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * math::powf(err, -0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if math::abs(h) < 1e-14 * math::abs(span).max(math::abs(t)) {
            return Err(OdeError::StepUnderflow { t });
        }
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn harmonic_oscillator_period() {
        let tau = 2.0 * core::f64::consts::PI;
        let y = integrate(|_, y: &[f64; 2]| [y[1], -y[0]], 0.0, [1.0, 0.0], tau, &OdeOptions::default(), |_, _| {})
            .unwrap();
        assert_relative_eq!(y[0], 1.0, epsilon = 1e-9);
        assert!(y[1].abs() < 1e-9);
    }

    #[test]
    fn backwards_exponential() {
        let y = integrate(|_, y: &[f64; 1]| [y[0]], 1.0, [1.0], 0.0, &OdeOptions::default(), |_, _| {}).unwrap();
        assert_relative_eq!(y[0], libm::exp(-1.0), max_relative = 1e-10);
    }

    #[test]
    fn observer_rescaling_preserves_ratio() {
        let mut log_scale = 0.0;
        let y = integrate(
            |_, y: &[f64; 2]| [y[1], y[0]],
            0.0,
            [1.0, 1.0],
            60.0,
            &OdeOptions::default(),
            |_, y| {
                if y[0].abs() > 1e10 {
                    log_scale += libm::log(y[0].abs());
                    let s = y[0].abs();
                    y.iter_mut().for_each(|v| *v /= s);
                }
            },
        )
        .unwrap();
        assert_relative_eq!(y[1] / y[0], 1.0, epsilon = 1e-12);
        assert_relative_eq!(log_scale + libm::log(y[0]), 60.0, max_relative = 1e-9);
    }
}
