use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{QzError, Result};

/// Periodic collocation grid on `[0, L)` with `N` points.
///
/// Coefficient arrays are stored in FFT order: index `j < N/2` carries
/// wavenumber `2πj/L`, index `j ≥ N/2` carries `2π(j-N)/L`. Index `N/2` is the
/// Nyquist mode.
#[derive(Clone)]
pub struct SpectralGrid {
    n: usize,
    length: f64,
    dx: f64,
    xi: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    padded_forward: Arc<dyn Fft<f64>>,
    padded_inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralGrid")
            .field("n", &self.n)
            .field("length", &self.length)
            .finish()
    }
}

/// Builds a grid with `n` points on a box of length `length`.
pub fn make_grid(n: usize, length: f64) -> Result<SpectralGrid> {
    if n < 8 {
        return Err(QzError::config("N", format!("need N >= 8, got {n}")));
    }
    if n % 2 != 0 {
        return Err(QzError::config("N", format!("N must be even, got {n}")));
    }
    if !(length.is_finite() && length > 0.0) {
        return Err(QzError::config("L", format!("need L > 0, got {length}")));
    }
    let mut planner = FftPlanner::new();
    let m = padded_len(n);
    let k0 = 2.0 * PI / length;
    let xi = (0..n).map(|j| k0 * signed_index(j, n) as f64).collect();
    Ok(SpectralGrid {
        n,
        length,
        dx: length / n as f64,
        xi,
        forward: planner.plan_fft_forward(n),
        inverse: planner.plan_fft_inverse(n),
        padded_forward: planner.plan_fft_forward(m),
        padded_inverse: planner.plan_fft_inverse(m),
    })
}

fn padded_len(n: usize) -> usize {
    3 * n / 2
}

/// Signed mode number of FFT-order index `j` on a grid of `n` points.
pub fn signed_index(j: usize, n: usize) -> i64 {
    if j < n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

impl SpectralGrid {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Wavenumbers in FFT order.
    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    /// Wavenumbers sorted from `-N/2` to `N/2 - 1`.
    pub fn xi_sorted(&self) -> Vec<f64> {
        let mut v = self.xi.clone();
        v.sort_by(|a, b| a.total_cmp(b));
        v
    }

    pub fn nyquist_index(&self) -> usize {
        self.n / 2
    }

    /// Collocation points `x_m = m·dx`.
    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|m| m as f64 * self.dx).collect()
    }

    /// Physical values to series coefficients, `u(x) = Σ c_j e^{iξ_j x}`.
    pub fn forward(&self, values: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(values.len(), self.n);
        let mut buf = values.to_vec();
        self.forward.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        buf
    }

    /// Series coefficients to physical values.
    pub fn inverse(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(coeffs.len(), self.n);
        let mut buf = coeffs.to_vec();
        self.inverse.process(&mut buf);
        buf
    }

    /// Product of two band-limited fields with 3/2 zero padding, truncated
    /// back to the grid. The Nyquist mode of the result is zero.
    pub fn dealiased_product(&self, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
        let pa = self.padded_physical(a);
        let pb = self.padded_physical(b);
        let prod: Vec<Complex64> = pa.iter().zip(&pb).map(|(x, y)| x * y).collect();
        self.truncate_from_padded(prod)
    }

    /// `|u|^2` computed with 3/2 zero padding.
    pub fn dealiased_modulus_squared(&self, a: &[Complex64]) -> Vec<Complex64> {
        let pa = self.padded_physical(a);
        let prod: Vec<Complex64> = pa.iter().map(|x| Complex64::new(x.norm_sqr(), 0.0)).collect();
        self.truncate_from_padded(prod)
    }

    fn padded_physical(&self, c: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let m = padded_len(n);
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for (j, &cj) in c.iter().enumerate() {
            if j == n / 2 {
                continue;
            }
            let k = signed_index(j, n);
            let idx = if k >= 0 { k as usize } else { (m as i64 + k) as usize };
            buf[idx] = cj;
        }
        self.padded_inverse.process(&mut buf);
        buf
    }

    fn truncate_from_padded(&self, mut values: Vec<Complex64>) -> Vec<Complex64> {
        let n = self.n;
        let m = values.len();
        self.padded_forward.process(&mut values);
        let scale = 1.0 / m as f64;
        (0..n)
            .map(|j| {
                if j == n / 2 {
                    return Complex64::new(0.0, 0.0);
                }
                let k = signed_index(j, n);
                let idx = if k >= 0 { k as usize } else { (m as i64 + k) as usize };
                values[idx] * scale
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavenumbers_two_pi_box() {
        let g = make_grid(8, 2.0 * PI).unwrap();
        let xi = g.xi_sorted();
        let expected = [-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0];
        for (a, b) in xi.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!((g.dx() * 8.0 - 2.0 * PI).abs() == 0.0);
    }

    #[test]
    fn wavenumber_spacing_half_box() {
        let g = make_grid(8, PI).unwrap();
        let xi = g.xi_sorted();
        for w in xi.windows(2) {
            assert!((w[1] - w[0] - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_odd_and_tiny() {
        assert!(make_grid(7, 1.0).is_err());
        assert!(make_grid(6, 1.0).is_err());
        assert!(make_grid(8, 0.0).is_err());
        assert!(make_grid(8, -1.0).is_err());
    }

    #[test]
    fn round_trip_all_sizes() {
        for n in [8usize, 10, 16, 30, 64, 100, 256, 1024] {
            let g = make_grid(n, 3.7).unwrap();
            let u: Vec<Complex64> = (0..n)
                .map(|m| Complex64::new((m as f64 * 0.37).sin() + 0.2, (m as f64).cos()))
                .collect();
            let back = g.inverse(&g.forward(&u));
            let scale: f64 = u.iter().map(|z| z.norm()).fold(0.0, f64::max);
            for (a, b) in u.iter().zip(&back) {
                assert!((a - b).norm() <= 1e-12 * scale, "n = {n}");
            }
        }
    }

    #[test]
    fn dealiased_product_matches_exact_trig_product() {
        // cos(3x)·cos(4x) = (cos x + cos 7x)/2, resolvable on N = 32
        let g = make_grid(32, 2.0 * PI).unwrap();
        let x = g.points();
        let a: Vec<Complex64> = x.iter().map(|&x| Complex64::new((3.0 * x).cos(), 0.0)).collect();
        let b: Vec<Complex64> = x.iter().map(|&x| Complex64::new((4.0 * x).cos(), 0.0)).collect();
        let p = g.dealiased_product(&g.forward(&a), &g.forward(&b));
        assert!((p[1].re - 0.25).abs() < 1e-14);
        assert!((p[7].re - 0.25).abs() < 1e-14);
        assert!((p[31].re - 0.25).abs() < 1e-14);
        // cos(12x)·cos(13x) has a 25-mode which must be removed, not aliased to -7
        let a: Vec<Complex64> = x.iter().map(|&x| Complex64::new((12.0 * x).cos(), 0.0)).collect();
        let b: Vec<Complex64> = x.iter().map(|&x| Complex64::new((13.0 * x).cos(), 0.0)).collect();
        let p = g.dealiased_product(&g.forward(&a), &g.forward(&b));
        assert!(p[32 - 7].norm() < 1e-14);
        assert!((p[1].re - 0.25).abs() < 1e-14);
    }
}
