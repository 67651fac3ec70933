//! Tridiagonal operators and a Sturm-sequence eigensolver for the symmetric
//! case.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::math;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EigenError {
    #[error("matrix is empty")]
    Empty,
    #[error("band lengths do not match the dimension {dim}")]
    Shape { dim: usize },
    #[error("non-finite matrix entry at row {row}")]
    NonFinite { row: usize },
    #[error("eigenvalue index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("inverse iteration for eigenvalue {eigenvalue:.6e} did not converge (residual {residual:.3e})")]
    NotConverged { eigenvalue: f64, residual: f64 },
}

/// General tridiagonal matrix: `lower[i]` multiplies `x[i-1]` in row `i`
/// (`lower[0]` unused), `upper[i]` multiplies `x[i+1]` (`upper[n-1]` unused).
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Tridiagonal {
    pub fn zeros(n: usize) -> Self {
        Self { lower: vec![0.0; n], diag: vec![0.0; n], upper: vec![0.0; n] }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        debug_assert_eq!(x.len(), n);
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.lower[i] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.upper[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    /// Adjoint with respect to the inner product `<a, b> = Σ w_i a_i b_i`:
    /// `W⁻¹ Aᵀ W`.
    pub fn weighted_adjoint(&self, weights: &[f64]) -> Self {
        let n = self.len();
        let mut out = Self::zeros(n);
        for i in 0..n {
            out.diag[i] = self.diag[i];
            if i > 0 {
                // (Aᵀ)_{i,i-1} = A_{i-1,i} = upper[i-1]
                out.lower[i] = self.upper[i - 1] * weights[i - 1] / weights[i];
            }
            if i + 1 < n {
                out.upper[i] = self.lower[i + 1] * weights[i + 1] / weights[i];
            }
        }
        out
    }

    /// Symmetrises `W⁻¹ S` (self-adjoint under the weights) into the
    /// similar symmetric matrix `W^{1/2} (W⁻¹ S) W^{-1/2}`.
    pub fn symmetrized(&self, weights: &[f64]) -> SymTridiagonal {
        let n = self.len();
        let off = (0..n.saturating_sub(1))
            .map(|i| self.upper[i] * math::sqrt(weights[i] / weights[i + 1]))
            .collect();
        SymTridiagonal { diag: self.diag.clone(), off }
    }
}

/// Real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self, EigenError> {
        let n = diag.len();
        if n == 0 {
            return Err(EigenError::Empty);
        }
        if off.len() + 1 != n {
            return Err(EigenError::Shape { dim: n });
        }
        if let Some(row) = diag.iter().position(|v| !v.is_finite()) {
            return Err(EigenError::NonFinite { row });
        }
        if let Some(row) = off.iter().position(|v| !v.is_finite()) {
            return Err(EigenError::NonFinite { row });
        }
        Ok(Self { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off_diag(&self) -> &[f64] {
        &self.off
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.off[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += math::abs(self.off[i - 1]);
            }
            if i + 1 < n {
                r += math::abs(self.off[i]);
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence count).
    pub fn count_below(&self, x: f64) -> usize {
        let (lo, hi) = self.gershgorin();
        let tiny = f64::EPSILON * (math::abs(lo).max(math::abs(hi))).max(f64::MIN_POSITIVE);
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..self.len() {
            if i > 0 {
                let e = self.off[i - 1];
                q = self.diag[i] - x - e * e / q;
            }
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `index`-th smallest eigenvalue (0-based) by bisection, to the
    /// limit of floating-point resolution.
    pub fn eigenvalue(&self, index: usize) -> Result<f64, EigenError> {
        let n = self.len();
        if index >= n {
            return Err(EigenError::IndexOutOfRange { index, dim: n });
        }
        let (mut lo, mut hi) = self.gershgorin();
        let pad = 1e-12 * (math::abs(lo) + math::abs(hi)) + f64::MIN_POSITIVE;
        lo -= pad;
        hi += pad;
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    pub fn lowest_eigenvalues(&self, k: usize) -> Result<Vec<f64>, EigenError> {
        (0..k).map(|i| self.eigenvalue(i)).collect()
    }

    /// Unit eigenvector for an eigenvalue previously computed by
    /// [`eigenvalue`](Self::eigenvalue), by shifted inverse iteration.
    pub fn eigenvector(&self, eigenvalue: f64) -> Result<Vec<f64>, EigenError> {
        let n = self.len();
        let (lo, hi) = self.gershgorin();
        let norm = math::abs(lo).max(math::abs(hi)).max(f64::MIN_POSITIVE);
        let shift = eigenvalue + 4.0 * f64::EPSILON * norm;
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * math::cos(0.7 * i as f64)).collect();
        normalize(&mut x);
        let mut residual = f64::INFINITY;
        for _ in 0..6 {
            x = solve_shifted(&self.diag, &self.off, shift, &x);
            if x.iter().any(|v| !v.is_finite()) {
                return Err(EigenError::NotConverged { eigenvalue, residual });
            }
            normalize(&mut x);
            let ax = self.apply(&x);
            residual = math::sqrt(ax.iter().zip(&x).map(|(a, b)| (a - eigenvalue * b) * (a - eigenvalue * b)).sum());
            if residual <= 1e3 * f64::EPSILON * norm * math::sqrt(n as f64) {
                break;
            }
        }
        if residual > 1e-6 * norm {
            return Err(EigenError::NotConverged { eigenvalue, residual });
        }
        // Fix the sign so the largest-magnitude component is positive.
        let big = x.iter().copied().fold(0.0, |m: f64, v| if math::abs(v) > math::abs(m) { v } else { m });
        if big < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
        Ok(x)
    }
}

fn normalize(x: &mut [f64]) {
    let n = math::sqrt(x.iter().map(|v| v * v).sum());
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
}

/// Solves `(T − shift·I) y = b` by Gaussian elimination with partial
/// pivoting (the factor gains one extra superdiagonal).
fn solve_shifted(diag: &[f64], off: &[f64], shift: f64, b: &[f64]) -> Vec<f64> {
    let n = diag.len();
    if n == 1 {
        let d = diag[0] - shift;
        let d = if d == 0.0 { f64::EPSILON } else { d };
        return vec![b[0] / d];
    }
    // Row i of U holds u0 (diagonal), u1, u2 (superdiagonals).
    let mut u0 = vec![0.0; n];
    let mut u1 = vec![0.0; n];
    let mut u2 = vec![0.0; n];
    let mut rhs = b.to_vec();
    // Current row being eliminated: (d, e) = (diagonal, first super).
    let mut cur_d = diag[0] - shift;
    let mut cur_e = off[0];
    let mut cur_f = 0.0;
    let tiny = f64::EPSILON * diag.iter().chain(off).fold(0.0, |m: f64, v| m.max(math::abs(*v))).max(1.0);
    for i in 0..n - 1 {
        let sub = off[i];
        let next_d = diag[i + 1] - shift;
        let next_e = if i + 2 < n { off[i + 1] } else { 0.0 };
        if math::abs(cur_d) >= math::abs(sub) {
            let piv = if cur_d == 0.0 { tiny } else { cur_d };
            let l = sub / piv;
            u0[i] = piv;
            u1[i] = cur_e;
            u2[i] = cur_f;
            rhs[i + 1] -= l * rhs[i];
            cur_d = next_d - l * cur_e;
            cur_e = next_e - l * cur_f;
            cur_f = 0.0;
        } else {
            // Swap rows i and i+1.
            let l = cur_d / sub;
            u0[i] = sub;
            u1[i] = next_d;
            u2[i] = next_e;
            rhs.swap(i, i + 1);
            rhs[i + 1] -= l * rhs[i];
            let new_d = cur_e - l * next_d;
            let new_e = cur_f - l * next_e;
            cur_d = new_d;
            cur_e = new_e;
            cur_f = 0.0;
        }
    }
    u0[n - 1] = if cur_d == 0.0 { tiny } else { cur_d };
    let mut y = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = rhs[i];
        if i + 1 < n {
            s -= u1[i] * y[i + 1];
        }
        if i + 2 < n {
            s -= u2[i] * y[i + 2];
        }
        y[i] = s / u0[i];
    }
    y
}
