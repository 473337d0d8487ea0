use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::SpectralGrid;

/// Fourier-series coefficients of a periodic field, in FFT order.
/// Convention: `u(x) = Σ_j c_j e^{iξ_j x}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierField {
    pub coeffs: Vec<Complex64>,
}

impl FourierField {
    pub fn zeros(n: usize) -> Self {
        FourierField {
            coeffs: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        FourierField { coeffs }
    }

    pub fn from_physical(grid: &SpectralGrid, values: &[Complex64]) -> Self {
        FourierField {
            coeffs: grid.forward(values),
        }
    }

    pub fn from_real(grid: &SpectralGrid, values: &[f64]) -> Self {
        let v: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_physical(grid, &v)
    }

    /// Samples a function at the collocation points.
    pub fn sample(grid: &SpectralGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let v: Vec<Complex64> = grid.points().into_iter().map(f).collect();
        Self::from_physical(grid, &v)
    }

    pub fn sample_real(grid: &SpectralGrid, f: impl Fn(f64) -> f64) -> Self {
        Self::sample(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn to_physical(&self, grid: &SpectralGrid) -> Vec<Complex64> {
        grid.inverse(&self.coeffs)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Zero-mode coefficient, i.e. the spatial mean.
    pub fn mean(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// `sqrt(Σ|c_j|^2)`.
    pub fn l2_coeffs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Checks `c_{-j} = conj(c_j)` to an absolute tolerance.
    pub fn is_conjugate_symmetric(&self, tol: f64) -> bool {
        let n = self.coeffs.len();
        (0..n).all(|j| {
            let mirror = (n - j) % n;
            (self.coeffs[mirror] - self.coeffs[j].conj()).norm() <= tol
        })
    }

    /// Coefficients of the complex-conjugate function.
    pub fn conj_field(&self) -> Self {
        let n = self.coeffs.len();
        FourierField {
            coeffs: (0..n).map(|j| self.coeffs[(n - j) % n].conj()).collect(),
        }
    }

    pub fn scale(&self, a: Complex64) -> Self {
        FourierField {
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.coeffs.len(), other.coeffs.len());
        FourierField {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    /// Coefficientwise multiplication by a real multiplier table.
    pub fn multiply(&self, symbol: &[f64]) -> Self {
        FourierField {
            coeffs: self.coeffs.iter().zip(symbol).map(|(c, s)| c * s).collect(),
        }
    }

    /// Coefficientwise multiplication by a complex multiplier table.
    pub fn multiply_complex(&self, symbol: &[Complex64]) -> Self {
        FourierField {
            coeffs: self.coeffs.iter().zip(symbol).map(|(c, s)| c * s).collect(),
        }
    }

    /// Drops the imaginary part of the physical-space representation.
    pub fn real_part(&self) -> Self {
        self.add(&self.conj_field()).scale(Complex64::new(0.5, 0.0))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}
