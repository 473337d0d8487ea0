use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::state::PrimalState;
use crate::error::{QzError, Result};
use crate::spectral::FourierField;

pub const MAGIC: &[u8; 4] = b"QZK1";

/// Checkpoint record; the binary layout is
/// `"QZK1" | N: u64 | L, eps, t: f64 | E, n, nt as interleaved (re, im) f64`, all little-endian.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub length: f64,
    pub eps: f64,
    pub state: PrimalState,
}

impl Checkpoint {
    pub fn to_bytes(&self) -> Vec<u8> {
        let n = self.state.len();
        let mut out = Vec::with_capacity(36 + 48 * n);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&(n as u64).to_le_bytes());
        for v in [self.length, self.eps, self.state.t] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        for field in [&self.state.e, &self.state.n, &self.state.nt] {
            for c in &field.coeffs {
                out.extend_from_slice(&c.re.to_le_bytes());
                out.extend_from_slice(&c.im.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 36 || &bytes[..4] != MAGIC {
            return Err(QzError::Format("missing QZK1 header".into()));
        }
        let u64_at = |i: usize| u64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
        let f64_at = |i: usize| f64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
        let n = u64_at(4) as usize;
        let expected = 36usize
            .checked_add(n.checked_mul(48).ok_or_else(|| QzError::Format("N overflows".into()))?)
            .ok_or_else(|| QzError::Format("N overflows".into()))?;
        if bytes.len() != expected {
            return Err(QzError::Format(format!(
                "expected {expected} bytes for N = {n}, found {}",
                bytes.len()
            )));
        }
        let (length, eps, t) = (f64_at(12), f64_at(20), f64_at(28));
        let field = |k: usize| {
            let base = 36 + k * 16 * n;
            FourierField::from_coeffs(
                (0..n)
                    .map(|j| Complex64::new(f64_at(base + 16 * j), f64_at(base + 16 * j + 8)))
                    .collect(),
            )
        };
        Ok(Checkpoint {
            length,
            eps,
            state: PrimalState {
                e: field(0),
                n: field(1),
                nt: field(2),
                t,
            },
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::File::create(path)?.write_all(&self.to_bytes())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let mut buf = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut buf)?;
        Self::from_bytes(&buf)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Checkpoint {
        let mut state = PrimalState::zeros(8);
        for j in 0..8 {
            state.e.coeffs[j] = Complex64::new(j as f64, -0.5 * j as f64);
            state.n.coeffs[j] = Complex64::new(1.0 / (j as f64 + 1.0), 0.0);
        }
        state.t = 0.75;
        Checkpoint {
            length: 12.5,
            eps: 0.5,
            state,
        }
    }

    #[test]
    fn binary_round_trip() {
        let c = sample();
        let bytes = c.to_bytes();
        assert_eq!(&bytes[..4], b"QZK1");
        assert_eq!(bytes.len(), 36 + 48 * 8);
        assert_eq!(Checkpoint::from_bytes(&bytes).unwrap(), c);
        assert!(Checkpoint::from_bytes(&bytes[..40]).is_err());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("state.qzk");
        c.write(&path).unwrap();
        assert_eq!(Checkpoint::read(&path).unwrap(), c);
    }

    #[test]
    fn json_round_trip() {
        let c = sample();
        assert_eq!(Checkpoint::from_json(&c.to_json().unwrap()).unwrap(), c);
    }
}
