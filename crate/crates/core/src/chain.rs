//! Chain Hamiltonian builders.
//!
//! Two families are built here:
//!
//! * the engineered XY family: an even-length chain whose couplings are
//!   chosen so the single-excitation spectrum is a shifted integer lattice
//!   with a tunable middle gap, which makes the chain act as a perfect
//!   mirror after a fixed evolution time;
//! * the parabolic-field chain: a uniformly coupled chain in a parabolic
//!   on-site field, whose low-lying spectrum is quasi-harmonic and carries
//!   Gaussian wavepackets across with near-unit fidelity.

use crate::error::{Error, Result};
use crate::operator::TridiagonalOperator;

/// Engineered chain family label: `n` sites (even), gap parameter `k >= 0`.
///
/// Couplings are `J_i = sqrt(i(n-i))` for even bond index i and
/// `J_i = sqrt((i+2k)(n-i+2k))` for odd i. For k = 0 this reduces to the
/// linear-spectrum chain; k > 0 opens a spectral gap of 2(2k+1) between the
/// two halves of the spectrum while keeping all levels on an odd-integer
/// lattice, so perfect transfer at t = pi/2 survives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineeredChainSpec {
    n: usize,
    k: usize,
}

impl EngineeredChainSpec {
    /// `n` must be even and at least 2: the coupling rule satisfies the
    /// mirror symmetry J_i = J_{n-i} only for even n.
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n < 2 || n % 2 != 0 {
            return Err(Error::InvalidSpec(format!(
                "engineered chain needs even site count >= 2, got {n}"
            )));
        }
        Ok(Self { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// The n-1 couplings J_1..J_{n-1}.
    pub fn couplings(&self) -> Vec<f64> {
        let (n, k) = (self.n as f64, self.k as f64);
        (1..self.n)
            .map(|i| {
                let i = i as f64;
                if (i as usize) % 2 == 0 {
                    (i * (n - i)).sqrt()
                } else {
                    ((i + 2.0 * k) * (n - i + 2.0 * k)).sqrt()
                }
            })
            .collect()
    }

    /// Zero diagonal, engineered couplings on the off-diagonal.
    pub fn hamiltonian(&self) -> TridiagonalOperator {
        TridiagonalOperator::new(vec![0.0; self.n], self.couplings())
            .expect("engineered couplings are finite by construction")
    }

    /// Closed-form spectrum, ascending:
    /// eps_n = -n + 2(m-k) - 1 for m = 1..n/2 and -n + 2(m+k) - 1 for
    /// m = n/2+1..n. All values are odd integers; consecutive gaps are 2
    /// except the middle gap 2(2k+1).
    pub fn spectrum_formula(&self) -> Vec<f64> {
        let n = self.n as i64;
        let k = self.k as i64;
        (1..=n)
            .map(|m| {
                let shift = if m <= n / 2 { -k } else { k };
                (-n + 2 * (m + shift) - 1) as f64
            })
            .collect()
    }

    /// Eigenvector components from the three-term recursion the couplings
    /// were designed around: seed c_1 = 1, c_2 = eps/J_1, generic rows for
    /// c_3..c_{n-1}, and the last row solved as c_n = J_{n-1} c_{n-1} / eps.
    /// That final division makes the scheme singular at eps = 0, which is
    /// rejected (the engineered spectrum never contains 0).
    ///
    /// The result is normalized and sign-fixed exactly like eigensolver
    /// output, so the two constructions can be compared directly.
    pub fn eigenvector_by_recursion(&self, eigenvalue: f64) -> Result<Vec<f64>> {
        if eigenvalue.abs() < 1e-12 {
            return Err(Error::ZeroEigenvalue);
        }
        let j = self.couplings();
        let n = self.n;
        let mut c = vec![0.0; n];
        c[0] = 1.0;
        c[1] = eigenvalue / j[0];
        for i in 2..n - 1 {
            c[i] = (eigenvalue * c[i - 1] - j[i - 2] * c[i - 2]) / j[i - 1];
        }
        c[n - 1] = j[n - 2] * c[n - 2] / eigenvalue;
        let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in &mut c {
            *x /= norm;
        }
        crate::eigen::fix_sign(&mut c);
        Ok(c)
    }
}

/// Parabolic-field chain: 2M+1 sites with uniform coupling J and on-site
/// field B(i) = 2 B0 (i - M - 1)^2, zero at the center site M+1.
///
/// In the single-excitation subspace the Hamiltonian is hopping -J/2 with
/// diagonal B(i)/2 (a constant shift from the spin model is dropped).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParabolicChainSpec {
    half_length: usize,
    coupling: f64,
    b0: f64,
}

impl ParabolicChainSpec {
    /// Explicit field curvature.
    pub fn with_b0(half_length: usize, coupling: f64, b0: f64) -> Result<Self> {
        if half_length == 0 {
            return Err(Error::InvalidSpec("half_length must be positive".into()));
        }
        if !(coupling > 0.0) || !coupling.is_finite() {
            return Err(Error::InvalidSpec(format!("coupling must be positive, got {coupling}")));
        }
        if !(b0 >= 0.0) || !b0.is_finite() {
            return Err(Error::InvalidSpec(format!("b0 must be nonnegative, got {b0}")));
        }
        Ok(Self { half_length, coupling, b0 })
    }

    /// Curvature derived from a packet width and the dimensionless field
    /// factor: B0 = 8 (ln2 / width^2)^2 * lambda. At lambda = 1 the trap's
    /// ground-state width matches a Gaussian packet of FWHM `width`, which
    /// is the regime where the harmonic reference curve is exact.
    pub fn from_lambda(half_length: usize, coupling: f64, width: f64, lambda: f64) -> Result<Self> {
        if !(width > 0.0) || !width.is_finite() {
            return Err(Error::InvalidSpec(format!("packet width must be positive, got {width}")));
        }
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidSpec(format!("lambda must be nonnegative, got {lambda}")));
        }
        let r = std::f64::consts::LN_2 / (width * width);
        Self::with_b0(half_length, coupling, 8.0 * r * r * lambda)
    }

    pub fn half_length(&self) -> usize {
        self.half_length
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn b0(&self) -> f64 {
        self.b0
    }

    /// Number of sites, 2M+1.
    pub fn size(&self) -> usize {
        2 * self.half_length + 1
    }

    /// 1-based index of the field minimum.
    pub fn center_site(&self) -> usize {
        self.half_length + 1
    }

    /// B(i) = 2 B0 (i - M - 1)^2 for i = 1..=2M+1; exactly 0 at the center.
    pub fn field(&self) -> Vec<f64> {
        let c = self.center_site() as i64;
        (1..=self.size() as i64)
            .map(|i| {
                let x = (i - c) as f64;
                2.0 * self.b0 * x * x
            })
            .collect()
    }

    /// Hopping -J/2, diagonal B(i)/2.
    pub fn hamiltonian(&self) -> TridiagonalOperator {
        let diag: Vec<f64> = self.field().iter().map(|b| 0.5 * b).collect();
        let off = vec![-0.5 * self.coupling; self.size() - 1];
        TridiagonalOperator::new(diag, off).expect("parabolic entries are finite by construction")
    }
}
