//! States of the single-excitation subspace: complex amplitudes over sites.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Unit-norm complex amplitude vector over chain sites. Every constructor
/// and every operation returning a `StateVector` maintains the norm within
/// 1e-12; nothing renormalizes silently, so norm drift in the dynamics is
/// observable by tests rather than hidden.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Accepts amplitudes that are already unit norm (within 1e-12).
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidSpec("state needs at least one site".into()));
        }
        let norm = norm_of(&amplitudes);
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes; rejects the zero vector.
    pub fn from_unnormalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidSpec("state needs at least one site".into()));
        }
        let norm = norm_of(&amplitudes);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes: amplitudes.into_iter().map(|a| a / norm).collect() })
    }

    /// Basis state |site> (1-based site index).
    pub fn site_basis(size: usize, site: usize) -> Result<Self> {
        if size == 0 || site == 0 || site > size {
            return Err(Error::InvalidSpec(format!(
                "site {site} outside chain of {size} sites"
            )));
        }
        let mut amplitudes = vec![Complex64::ZERO; size];
        amplitudes[site - 1] = Complex64::ONE;
        Ok(Self { amplitudes })
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Amplitudes indexed by site - 1.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        norm_of(&self.amplitudes)
    }

    /// <self|other>, conjugating self.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), got: other.len() });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

fn norm_of(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Site reversal: the amplitude at site i moves to site N+1-i. Applying it
/// twice is exactly the identity.
pub fn mirror_reflect(psi: &StateVector) -> StateVector {
    let mut amplitudes = psi.amplitudes.clone();
    amplitudes.reverse();
    StateVector { amplitudes }
}

/// Transfer fidelity |<target|evolved>|, in [0, 1] up to rounding.
pub fn fidelity(target: &StateVector, evolved: &StateVector) -> Result<f64> {
    Ok(target.inner(evolved)?.norm())
}
