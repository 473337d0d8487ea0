use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::tau_integral::plus_part;
use crate::error::{QzError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kernel {
    C1,
    C2,
    C3,
}

impl FromStr for Kernel {
    type Err = QzError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "C1" => Ok(Kernel::C1),
            "C2" => Ok(Kernel::C2),
            "C3" => Ok(Kernel::C3),
            other => Err(QzError::config("estimates.which", format!("unknown kernel `{other}`"))),
        }
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kernel::C1 => "C1",
            Kernel::C2 => "C2",
            Kernel::C3 => "C3",
        };
        f.write_str(s)
    }
}

/// Sobolev pair, modulation exponents and `ε` for the kernel estimates.
///
/// `b = b₁ = 1/2 + θ/2` and `b′ = b₁′ = −1/2 + θ` unless overridden.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateConfig {
    pub k: f64,
    pub l: f64,
    pub theta: f64,
    pub eps: f64,
    pub b: f64,
    pub b1: f64,
    pub b_prime: f64,
    pub b1_prime: f64,
}

impl EstimateConfig {
    pub fn new(k: f64, l: f64, theta: f64, eps: f64) -> Self {
        EstimateConfig {
            k,
            l,
            theta,
            eps,
            b: 0.5 + 0.5 * theta,
            b1: 0.5 + 0.5 * theta,
            b_prime: -0.5 + theta,
            b1_prime: -0.5 + theta,
        }
    }

    pub fn c(&self) -> f64 {
        -self.b_prime
    }

    pub fn c1(&self) -> f64 {
        -self.b1_prime
    }

    /// `(B₁, B₂)` fed to the modulation estimate by each kernel.
    pub fn modulation_pair(&self, which: Kernel) -> (f64, f64) {
        match which {
            Kernel::C1 => (self.c1(), self.b1),
            Kernel::C2 | Kernel::C3 => (self.c(), self.b1),
        }
    }

    /// `B` with `2B = 2B₁ − [1 − 2B₂]₊`.
    pub fn modulation_b(&self, which: Kernel) -> f64 {
        let (b1, b2) = self.modulation_pair(which);
        b1 - 0.5 * plus_part(1.0 - 2.0 * b2)
    }

    /// Checks the exponent hypotheses of the chosen kernel. `(k, l)` is not
    /// checked: scans outside 𝔸 are legitimate experiments.
    pub fn check(&self, which: Kernel) -> Result<()> {
        let finite = [
            self.k,
            self.l,
            self.theta,
            self.eps,
            self.b,
            self.b1,
            self.b_prime,
            self.b1_prime,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(QzError::config("estimates", "non-finite parameter"));
        }
        if !(self.eps > 0.0 && self.eps <= 1.0) {
            return Err(QzError::config("estimates.eps", "must lie in (0, 1]"));
        }
        if !(self.theta > 0.0) {
            return Err(QzError::config("estimates.theta", "must be positive"));
        }
        if !(self.b > 0.5 && self.b1 > 0.5) {
            return Err(QzError::Hypothesis(format!(
                "b, b1 must exceed 1/2, got {}, {}",
                self.b, self.b1
            )));
        }
        for (name, v) in [("b'", self.b_prime), ("b1'", self.b1_prime)] {
            if !(v > -0.5 && v < 0.0) {
                return Err(QzError::Hypothesis(format!("{name} must lie in (-1/2, 0), got {v}")));
            }
        }
        let (lo_b1, lo_b2) = self.modulation_pair(which);
        if !(0.25 < lo_b1 && lo_b1 <= lo_b2) {
            return Err(QzError::Hypothesis(format!(
                "need 1/4 < B1 <= B2, got ({lo_b1}, {lo_b2})"
            )));
        }
        let lower = match which {
            Kernel::C1 => 1.0 / 6.0,
            Kernel::C2 => 1.0 / 3.0,
            Kernel::C3 => 1.0 / 8.0,
        };
        let big_b = self.modulation_b(which);
        if !(big_b > lower && big_b < 0.5) {
            return Err(QzError::Hypothesis(format!(
                "{which} needs B in ({lower:.4}, 1/2), got {big_b}"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_exponents() {
        let c = EstimateConfig::new(0.0, 0.0, 0.05, 1.0);
        assert!((c.b1 - 0.525).abs() < 1e-15);
        assert!((c.c1() - 0.45).abs() < 1e-15);
        for which in [Kernel::C1, Kernel::C2, Kernel::C3] {
            assert!((c.modulation_b(which) - 0.45).abs() < 1e-15);
            c.check(which).unwrap();
        }
    }

    #[test]
    fn rejects_large_theta_and_bad_eps() {
        assert!(EstimateConfig::new(0.0, 0.0, 0.6, 1.0).check(Kernel::C1).is_err());
        assert!(EstimateConfig::new(0.0, 0.0, 0.05, 0.0).check(Kernel::C1).is_err());
        // B = 0.3 is admissible for C1 and C3 but not for C2.
        let c = EstimateConfig::new(0.0, 0.0, 0.2, 1.0);
        assert!(c.check(Kernel::C1).is_ok());
        assert!(c.check(Kernel::C2).is_err());
    }

    #[test]
    fn kernel_names_round_trip() {
        for k in [Kernel::C1, Kernel::C2, Kernel::C3] {
            assert_eq!(k.to_string().parse::<Kernel>().unwrap(), k);
        }
        assert!("C4".parse::<Kernel>().is_err());
    }
}
