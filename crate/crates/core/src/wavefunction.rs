//! Sampled component wavefunctions.

use alloc::vec::Vec;

use crate::configurations::Domain;
use crate::sector::Sector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormKind {
    Normalized,
    Unnormalized,
    /// The function has no finite norm on the full domain; the samples are
    /// scaled to 1 at the origin (or at their peak).
    NonNormalizable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    pub domain: Domain,
    pub coords: Vec<f64>,
    pub samples: Vec<f64>,
    pub sector: Sector,
    /// Angular quantum number; always 0 on the axial line.
    pub m: i32,
    pub norm_kind: NormKind,
}

impl WaveFunction {
    pub fn new(domain: Domain, coords: Vec<f64>, samples: Vec<f64>, sector: Sector, m: i32, norm_kind: NormKind) -> Self {
        debug_assert_eq!(coords.len(), samples.len());
        Self { domain, coords, samples, sector, m, norm_kind }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Trapezoid-rule ∫|φ|² dz on the axial line, or 2π∫|φ|² r dr in the
    /// plane. The radial rule includes the segment from r = 0 to the first
    /// node with φ held constant there.
    pub fn trapezoid_norm_sq(&self) -> f64 {
        let c = &self.coords;
        let s = &self.samples;
        match self.domain {
            Domain::Axial => c
                .windows(2)
                .zip(s.windows(2))
                .map(|(x, f)| 0.5 * (x[1] - x[0]) * (f[0] * f[0] + f[1] * f[1]))
                .sum(),
            Domain::Radial => {
                if c.is_empty() {
                    return 0.0;
                }
                let head = 0.5 * c[0] * c[0] * s[0] * s[0];
                let body: f64 = c
                    .windows(2)
                    .zip(s.windows(2))
                    .map(|(r, f)| 0.5 * (r[1] - r[0]) * (r[0] * f[0] * f[0] + r[1] * f[1] * f[1]))
                    .sum();
                2.0 * core::f64::consts::PI * (head + body)
            }
        }
    }

    /// Rescales the samples to unit trapezoid norm.
    pub fn normalized(mut self) -> Self {
        let n = crate::math::sqrt(self.trapezoid_norm_sq());
        if n > 0.0 && n.is_finite() {
            self.samples.iter_mut().for_each(|v| *v /= n);
            self.norm_kind = NormKind::Normalized;
        }
        self
    }

    pub fn probability_density(&self) -> Vec<f64> {
        self.samples.iter().map(|v| v * v).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.samples.iter().all(|v| v.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn axial_gaussian_norm() {
        let n = 4001;
        let coords: Vec<f64> = (0..n).map(|i| -10.0 + 20.0 * i as f64 / (n - 1) as f64).collect();
        let samples = coords.iter().map(|z| libm::exp(-z * z / 2.0)).collect();
        let wf = WaveFunction::new(Domain::Axial, coords, samples, Sector::UP, 0, NormKind::Unnormalized);
        assert_relative_eq!(wf.trapezoid_norm_sq(), libm::sqrt(core::f64::consts::PI), max_relative = 1e-10);
        assert_relative_eq!(wf.normalized().trapezoid_norm_sq(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn radial_norm_of_constant_disk() {
        let h = 0.01;
        let coords: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) * h).collect();
        let samples = alloc::vec![1.0; 100];
        let wf = WaveFunction::new(Domain::Radial, coords, samples, Sector::UP, 0, NormKind::Unnormalized);
        let last = 99.5 * h;
        assert_relative_eq!(wf.trapezoid_norm_sq(), core::f64::consts::PI * last * last, max_relative = 1e-12);
    }
}
