//! Deterministic eigendecomposition of real symmetric tridiagonal operators.
//!
//! The solver is the classic implicit-shift QL iteration with accumulation
//! of the rotations, which keeps the eigenvector set orthonormal to machine
//! precision by construction. No external linear algebra is involved, so
//! identical inputs give bit-identical output on a given build.

use crate::error::{Error, Result};
use crate::operator::TridiagonalOperator;

/// Mirror parity of an eigenvector under site reversal: `None` marks a
/// vector that is neither symmetric nor antisymmetric within tolerance
/// (the signature of a non-mirror-symmetric operator).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    None,
}

impl Parity {
    /// +1 for even, -1 for odd.
    pub fn sign(self) -> Option<i8> {
        match self {
            Parity::Even => Some(1),
            Parity::Odd => Some(-1),
            Parity::None => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
            Parity::None => "none",
        }
    }
}

/// Full spectrum of a tridiagonal operator: ascending eigenvalues, matching
/// orthonormal real eigenvectors, and a parity label per level (filled by
/// `spectral::classify_parities`; `Parity::None` until then).
///
/// Sign convention: in every vector the first component of magnitude
/// greater than 1e-12 is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    values: Vec<f64>,
    vectors: Vec<Vec<f64>>,
    parities: Vec<Parity>,
}

impl EigenSystem {
    pub(crate) fn from_parts(values: Vec<f64>, vectors: Vec<Vec<f64>>, parities: Vec<Parity>) -> Self {
        debug_assert_eq!(values.len(), vectors.len());
        debug_assert_eq!(values.len(), parities.len());
        Self { values, vectors, parities }
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    /// Eigenvalues, ascending.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Eigenvector for level `n` (0-based, ascending order), indexed by site.
    pub fn vector(&self, n: usize) -> &[f64] {
        &self.vectors[n]
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub(crate) fn parts_mut(&mut self) -> (&[f64], &mut Vec<Vec<f64>>, &mut Vec<Parity>) {
        (&self.values, &mut self.vectors, &mut self.parities)
    }

    /// Largest eigen-residual max_n ||H v_n - e_n v_n||, a direct accuracy
    /// check against the operator the system came from.
    pub fn max_residual(&self, op: &TridiagonalOperator) -> Result<f64> {
        if op.size() != self.size() {
            return Err(Error::DimensionMismatch { expected: self.size(), got: op.size() });
        }
        let mut worst = 0.0f64;
        for (n, v) in self.vectors.iter().enumerate() {
            let hv = op.apply(v)?;
            let r = hv
                .iter()
                .zip(v)
                .map(|(a, b)| {
                    let d = a - self.values[n] * b;
                    d * d
                })
                .sum::<f64>()
                .sqrt();
            worst = worst.max(r);
        }
        Ok(worst)
    }
}

/// Sweep budget per eigenvalue before the solver reports failure.
const MAX_SWEEPS: usize = 50;

/// Make the first component of magnitude > 1e-12 positive.
pub(crate) fn fix_sign(v: &mut [f64]) {
    for &x in v.iter() {
        if x.abs() > 1e-12 {
            if x < 0.0 {
                for y in v.iter_mut() {
                    *y = -*y;
                }
            }
            return;
        }
    }
}

/// Full eigendecomposition. Output is deterministic: ascending eigenvalues,
/// orthonormal vectors under the sign convention. Non-convergence after the
/// sweep budget is a reported error, never a silent truncation.
pub fn diagonalize(op: &TridiagonalOperator) -> Result<EigenSystem> {
    let n = op.size();
    let mut d = op.diagonal().to_vec();
    // e[i] couples i and i+1; one trailing slot simplifies indexing.
    let mut e = op.offdiagonal().to_vec();
    e.push(0.0);
    // z[j] accumulates eigenvector j (starts as identity column j).
    let mut z: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut col = vec![0.0; n];
            col[j] = 1.0;
            col
        })
        .collect();

    ql_implicit(&mut d, &mut e, &mut z)?;

    // Ascending order with the vectors carried along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let mut vectors: Vec<Vec<f64>> = order.into_iter().map(|i| std::mem::take(&mut z[i])).collect();
    for v in &mut vectors {
        fix_sign(v);
    }
    let parities = vec![Parity::None; n];
    Ok(EigenSystem::from_parts(values, vectors, parities))
}

/// Implicit-shift QL with eigenvector accumulation (tql2 lineage). On entry
/// `d` is the diagonal and `e[i]` the subdiagonal (with `e[n-1]` scratch);
/// on exit `d` holds unordered eigenvalues and `z` the matching columns.
fn ql_implicit(d: &mut [f64], e: &mut [f64], z: &mut [Vec<f64>]) -> Result<()> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            // Split point: first negligible subdiagonal at or after l.
            let mut m = l;
            while m + 1 < n {
                let scale = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * scale {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS {
                return Err(Error::NoConvergence { index: l, sweeps: MAX_SWEEPS });
            }

            // Wilkinson-style shift from the leading 2x2.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            let r_signed = if g >= 0.0 { r } else { -r };
            g = d[m] - d[l] + e[l] / (g + r_signed);
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;

            let mut underflowed = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Rotation annihilated prematurely; recover and restart.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflowed = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;

                // Apply the rotation to eigenvector columns i and i+1.
                let (lo, hi) = z.split_at_mut(i + 1);
                let zi = &mut lo[i];
                let zi1 = &mut hi[0];
                for row in 0..n {
                    f = zi1[row];
                    zi1[row] = s * zi[row] + c * f;
                    zi[row] = c * zi[row] - s * f;
                }
            }
            if underflowed {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
