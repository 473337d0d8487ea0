use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QzError, Result};
use crate::spectral::{phi_eps, FourierField, SpectralGrid};

/// Members of the NLS family reached from the adiabatic limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NlsVariant {
    /// `iE_t + E_xx + |E|²E = 0`.
    Cubic,
    /// `iE_t + E_xx + |E|²E = ε²(E_xxxx - E(|E|²)_xx)`.
    QuantumPerturbed,
}

/// Split-step stepper for one variant, step size and ε.
#[derive(Clone, Debug)]
pub struct NlsStepper {
    variant: NlsVariant,
    eps: f64,
    dt: f64,
    half: Vec<Complex64>,
    lap: Vec<f64>,
}

impl NlsStepper {
    pub fn new(variant: NlsVariant, eps: f64, dt: f64, grid: &SpectralGrid) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(QzError::config(
                "nls.dt",
                format!("time step must be positive, got {dt}"),
            ));
        }
        if !(0.0..=1.0).contains(&eps) {
            return Err(QzError::config("nls.eps", format!("need 0 <= eps <= 1, got {eps}")));
        }
        let linear_eps = match variant {
            NlsVariant::Cubic => 0.0,
            NlsVariant::QuantumPerturbed => eps,
        };
        let half = grid
            .xi()
            .iter()
            .map(|&k| Complex64::from_polar(1.0, -0.5 * dt * phi_eps(k, linear_eps)))
            .collect();
        let lap = grid.xi().iter().map(|&k| -k * k).collect();
        Ok(NlsStepper {
            variant,
            eps,
            dt,
            half,
            lap,
        })
    }

    /// Effective potential `V` so that the nonlinear substep is `E ↦ e^{i dt V}E`.
    fn potential(&self, e_phys: &[Complex64], e: &FourierField, grid: &SpectralGrid) -> Vec<f64> {
        let rho: Vec<f64> = e_phys.iter().map(|v| v.norm_sqr()).collect();
        match self.variant {
            NlsVariant::Cubic => rho,
            NlsVariant::QuantumPerturbed => {
                let e2 = self.eps * self.eps;
                let smooth = FourierField::from_coeffs(grid.dealiased_modulus_squared(&e.coeffs));
                let rho_xx = smooth.multiply(&self.lap).to_physical(grid);
                rho.iter().zip(&rho_xx).map(|(r, q)| r + e2 * q.re).collect()
            }
        }
    }

    pub fn step(&self, e: &FourierField, grid: &SpectralGrid) -> Result<FourierField> {
        let a = e.multiply_complex(&self.half);
        let phys = a.to_physical(grid);
        let v = self.potential(&phys, &a, grid);
        let rotated: Vec<Complex64> = phys
            .iter()
            .zip(&v)
            .map(|(x, p)| x * Complex64::from_polar(1.0, self.dt * p))
            .collect();
        let out = FourierField::from_physical(grid, &rotated).multiply_complex(&self.half);
        if !out.is_finite() {
            return Err(QzError::BlowUp {
                t: f64::NAN,
                detail: "non-finite NLS coefficients".into(),
            });
        }
        Ok(out)
    }
}

/// Result of an NLS-family run.
#[derive(Clone, Debug)]
pub struct NlsRun {
    pub t: Vec<f64>,
    pub mass: Vec<f64>,
    pub e_final: FourierField,
}

pub fn solve_nls_family(
    e0: &FourierField,
    eps: f64,
    variant: NlsVariant,
    t_final: f64,
    dt: f64,
    grid: &SpectralGrid,
) -> Result<NlsRun> {
    let stepper = NlsStepper::new(variant, eps, dt, grid)?;
    let steps = (t_final / dt).round() as usize;
    let mass = |e: &FourierField| e.l2_coeffs().powi(2) * grid.length();
    let mut e = e0.clone();
    let mut run = NlsRun {
        t: vec![0.0],
        mass: vec![mass(&e)],
        e_final: FourierField::zeros(0),
    };
    for i in 1..=steps {
        let t = i as f64 * dt;
        e = stepper.step(&e, grid).map_err(|err| match err {
            QzError::BlowUp { detail, .. } => QzError::BlowUp { t, detail },
            other => other,
        })?;
        run.t.push(t);
        run.mass.push(mass(&e));
    }
    run.e_final = e;
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;

    fn soliton(g: &SpectralGrid) -> FourierField {
        let c = g.length() / 2.0;
        FourierField::sample_real(g, |x| 2f64.sqrt() / (x - c).cosh())
    }

    #[test]
    fn cubic_soliton_keeps_its_modulus() {
        let g = make_grid(512, 32.0 * std::f64::consts::PI).unwrap();
        let e0 = soliton(&g);
        let run = solve_nls_family(&e0, 0.0, NlsVariant::Cubic, 1.0, 1e-3, &g).unwrap();
        let a = e0.to_physical(&g);
        let b = run.e_final.to_physical(&g);
        let dev = a
            .iter()
            .zip(&b)
            .map(|(x, y)| (x.norm() - y.norm()).abs())
            .fold(0.0, f64::max);
        assert!(dev < 1e-3, "{dev}");
        let m0 = run.mass[0];
        assert!(run.mass.iter().all(|m| (m - m0).abs() < 1e-10 * m0));
    }

    #[test]
    fn perturbed_at_zero_eps_is_cubic() {
        let g = make_grid(128, 40.0).unwrap();
        let e = soliton(&g).scale(Complex64::new(1.2, 0.3));
        let a = NlsStepper::new(NlsVariant::Cubic, 0.0, 1e-2, &g).unwrap();
        let b = NlsStepper::new(NlsVariant::QuantumPerturbed, 0.0, 1e-2, &g).unwrap();
        let (mut x, mut y) = (e.clone(), e);
        for _ in 0..20 {
            x = a.step(&x, &g).unwrap();
            y = b.step(&y, &g).unwrap();
            assert!(x.sub(&y).max_abs() <= 1e-12);
        }
    }

    #[test]
    fn perturbed_conserves_mass() {
        let g = make_grid(256, 40.0).unwrap();
        let e0 = soliton(&g);
        let run = solve_nls_family(&e0, 0.5, NlsVariant::QuantumPerturbed, 1.0, 1e-3, &g).unwrap();
        let m0 = run.mass[0];
        assert!(run.mass.iter().all(|m| (m - m0).abs() < 1e-10 * m0));
        assert!(solve_nls_family(&e0, 0.5, NlsVariant::Cubic, 1.0, 0.0, &g).is_err());
    }
}
