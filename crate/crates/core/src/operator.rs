//! Real symmetric tridiagonal operators on the single-excitation site basis.
//!
//! A spin chain restricted to states with exactly one up spin is a hopping
//! model on sites 1..=N: on-site energies on the diagonal, couplings on the
//! off-diagonal. Every Hamiltonian in this crate is stored in this form.

use crate::error::{Error, Result};

/// Real symmetric tridiagonal matrix: `diagonal[i]` is the on-site term of
/// site i+1, `offdiagonal[i]` couples sites i+1 and i+2. Units of the
/// coupling J with hbar = 1 throughout.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    diagonal: Vec<f64>,
    offdiagonal: Vec<f64>,
}

impl TridiagonalOperator {
    /// Validates lengths (`offdiagonal` one shorter than `diagonal`) and
    /// finiteness of every entry.
    pub fn new(diagonal: Vec<f64>, offdiagonal: Vec<f64>) -> Result<Self> {
        if diagonal.is_empty() {
            return Err(Error::InvalidSpec("operator needs at least one site".into()));
        }
        if offdiagonal.len() + 1 != diagonal.len() {
            return Err(Error::DimensionMismatch {
                expected: diagonal.len() - 1,
                got: offdiagonal.len(),
            });
        }
        if !diagonal.iter().chain(offdiagonal.iter()).all(|x| x.is_finite()) {
            return Err(Error::InvalidSpec("operator entries must be finite".into()));
        }
        Ok(Self { diagonal, offdiagonal })
    }

    pub fn size(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn offdiagonal(&self) -> &[f64] {
        &self.offdiagonal
    }

    /// True iff the operator commutes with the site-reversal (mirror)
    /// operator P|i> = |N+1-i> to within `tol` entrywise: the diagonal is
    /// even about the center and the couplings read the same from both ends.
    pub fn is_mirror_symmetric(&self, tol: f64) -> bool {
        let n = self.size();
        let diag_ok = (0..n).all(|i| (self.diagonal[i] - self.diagonal[n - 1 - i]).abs() <= tol);
        let m = self.offdiagonal.len();
        let off_ok =
            (0..m).all(|i| (self.offdiagonal[i] - self.offdiagonal[m - 1 - i]).abs() <= tol);
        diag_ok && off_ok
    }

    /// Matrix-vector product, used by residual checks.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.size();
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: x.len() });
        }
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut acc = self.diagonal[i] * x[i];
            if i > 0 {
                acc += self.offdiagonal[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.offdiagonal[i] * x[i + 1];
            }
            y[i] = acc;
        }
        Ok(y)
    }

    /// Same operator with a constant added to every diagonal entry. A global
    /// shift only changes an overall phase of the dynamics; certification
    /// results must be invariant under it.
    pub fn shifted(&self, c: f64) -> Self {
        Self {
            diagonal: self.diagonal.iter().map(|d| d + c).collect(),
            offdiagonal: self.offdiagonal.clone(),
        }
    }
}
