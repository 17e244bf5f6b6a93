//! Parity classification and spectrum-parity certification.
//!
//! A mirror-symmetric chain transfers any state perfectly at time pi/E0
//! exactly when its spectrum sits on an affine integer lattice
//! eps_n = c + N_n * E0 and the mirror parity of every level matches
//! sign * (-1)^{N_n} for one global sign. `check_spmc` certifies that
//! condition numerically and reports the certificate.

use crate::eigen::{fix_sign, EigenSystem, Parity};
use crate::error::{Error, Result};

/// Relative gap below which two eigenvalues count as one degenerate cluster
/// for parity classification.
const CLUSTER_REL_TOL: f64 = 1e-9;

/// Why a certification failed. `None` in `SpmcReport::failure` means passed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificationFailure {
    /// Fewer than two levels: no gaps to measure.
    TooFewLevels,
    /// Every gap is below tolerance; no usable level spacing.
    AllDegenerate,
    /// No common measure fits all gaps within tolerance.
    Incommensurate,
    /// Some eigenvector is neither even nor odd under the mirror.
    IndefiniteParity,
    /// The parity sequence does not match sign * (-1)^{N_n} for either sign.
    ParityMismatch,
}

impl std::fmt::Display for CertificationFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::TooFewLevels => "too-few-levels",
            Self::AllDegenerate => "all-degenerate",
            Self::Incommensurate => "incommensurate",
            Self::IndefiniteParity => "indefinite-parity",
            Self::ParityMismatch => "parity-mismatch",
        };
        f.write_str(s)
    }
}

/// Certificate for the spectrum-parity matching condition.
///
/// When `passes` is true: eps_n = offset + level_integers[n] * e0 within
/// tol * e0 for every level, and every parity equals sign * (-1)^{N_n}.
/// The transfer time pi/e0 is when the propagator becomes the mirror
/// operator up to a global phase.
#[derive(Debug, Clone, PartialEq)]
pub struct SpmcReport {
    pub passes: bool,
    /// Base energy quantum (0 when no common measure was found).
    pub e0: f64,
    /// Affine shift c = eps_1.
    pub offset: f64,
    /// N_n = round((eps_n - offset)/e0), nondecreasing; empty if e0 unknown.
    pub level_integers: Vec<i64>,
    /// Global parity sign, +1 or -1.
    pub sign: i8,
    /// max_n |eps_n - offset - N_n * e0|.
    pub max_commensurability_residual: f64,
    /// Levels violating the parity rule under the best global sign.
    pub max_parity_mismatch_count: usize,
    /// pi/e0 (infinite when e0 is unknown).
    pub predicted_transfer_time: f64,
    pub failure: Option<CertificationFailure>,
    /// Tolerances the certificate was issued under.
    pub tol: f64,
    pub max_integer: u64,
}

/// Label each eigenvector even/odd/none under site reversal, with tolerance
/// `tol` on the reflection residual norm.
///
/// Eigenvalue clusters degenerate within 1e-9 (relative) are first rotated
/// to parity eigenvectors via the projections (v +/- Pv)/2: parity labels of
/// individual vectors inside a degenerate cluster are basis-dependent, the
/// projected basis is not. Vectors outside clusters are untouched.
pub fn classify_parities(mut sys: EigenSystem, tol: f64) -> Result<EigenSystem> {
    if !(tol > 0.0) {
        return Err(Error::InvalidSpec(format!("parity tolerance must be positive, got {tol}")));
    }
    let n = sys.size();
    let clusters = degenerate_clusters(sys.values());
    {
        let (_, vectors, parities) = sys.parts_mut();
        for cluster in clusters {
            if cluster.len() > 1 {
                rotate_cluster_to_parity(vectors, cluster.clone());
            }
        }
        for i in 0..n {
            parities[i] = label_parity(&vectors[i], tol);
        }
    }
    Ok(sys)
}

fn degenerate_clusters(values: &[f64]) -> Vec<std::ops::Range<usize>> {
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        let split = i == values.len() || {
            let scale = 1.0f64.max(values[i].abs()).max(values[i - 1].abs());
            (values[i] - values[i - 1]).abs() > CLUSTER_REL_TOL * scale
        };
        if split {
            clusters.push(start..i);
            start = i;
        }
    }
    clusters
}

/// Replace the cluster's vectors with an orthonormal parity-definite basis
/// of the same span, built by Gram-Schmidt over the even then odd
/// projections. If the projections do not yield a full basis (possible when
/// the operator is not mirror-symmetric), the originals are kept and the
/// labels come out `None` honestly.
fn rotate_cluster_to_parity(vectors: &mut [Vec<f64>], cluster: std::ops::Range<usize>) {
    let want = cluster.len();
    let n = vectors[0].len();
    let mut accepted: Vec<Vec<f64>> = Vec::with_capacity(want);
    for parity_sign in [1.0, -1.0] {
        for i in cluster.clone() {
            if accepted.len() == want {
                break;
            }
            let v = &vectors[i];
            let mut w: Vec<f64> =
                (0..n).map(|s| 0.5 * (v[s] + parity_sign * v[n - 1 - s])).collect();
            // Orthogonalize twice for stability.
            for _ in 0..2 {
                for prev in &accepted {
                    let dot: f64 = w.iter().zip(prev).map(|(a, b)| a * b).sum();
                    for (a, b) in w.iter_mut().zip(prev) {
                        *a -= dot * b;
                    }
                }
            }
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-6 {
                for x in &mut w {
                    *x /= norm;
                }
                fix_sign(&mut w);
                accepted.push(w);
            }
        }
    }
    if accepted.len() == want {
        for (slot, w) in cluster.zip(accepted) {
            vectors[slot] = w;
        }
    }
}

fn label_parity(v: &[f64], tol: f64) -> Parity {
    let n = v.len();
    let mut even_res = 0.0f64;
    let mut odd_res = 0.0f64;
    for i in 0..n {
        let r = v[n - 1 - i];
        even_res += (v[i] - r) * (v[i] - r);
        odd_res += (v[i] + r) * (v[i] + r);
    }
    if even_res.sqrt() <= tol {
        Parity::Even
    } else if odd_res.sqrt() <= tol {
        Parity::Odd
    } else {
        Parity::None
    }
}

/// Largest approximate common measure of a set of positive gaps: returns the
/// biggest g such that every gap is within `tol * g` of m*g for an integer
/// 1 <= m <= max_integer. `None` (incommensurate) is a normal outcome, not
/// an error.
///
/// Algorithm: nearest-integer Euclid reduction over the gaps (terminating at
/// remainders below tol * max_gap), one least-squares polish of g against
/// the implied integer multipliers, then verification of every gap.
pub fn approximate_gap_gcd(gaps: &[f64], tol: f64, max_integer: u64) -> Option<f64> {
    if gaps.is_empty() || !(tol > 0.0) || max_integer == 0 {
        return None;
    }
    let max_gap = gaps.iter().cloned().fold(0.0f64, f64::max);
    if gaps.iter().any(|&g| !(g > tol) || !g.is_finite()) {
        return None;
    }
    let eps = tol * max_gap;
    let mut g = gaps[0];
    for &gap in &gaps[1..] {
        g = euclid_pair(g, gap, eps);
        if g <= eps {
            // Common measure collapsed below resolution; nothing credible.
            return None;
        }
    }
    // Least-squares polish against the integer multipliers implied by g.
    let mut num = 0.0;
    let mut den = 0.0;
    for &gap in gaps {
        let m = (gap / g).round();
        num += m * gap;
        den += m * m;
    }
    let g = num / den;
    // Verification gate.
    for &gap in gaps {
        let m = (gap / g).round();
        if m < 1.0 || m > max_integer as f64 {
            return None;
        }
        if (gap - m * g).abs() > tol * g {
            return None;
        }
    }
    Some(g)
}

fn euclid_pair(a: f64, b: f64, eps: f64) -> f64 {
    let (mut x, mut y) = if a >= b { (a, b) } else { (b, a) };
    while y > eps {
        let r = (x - (x / y).round() * y).abs();
        x = y;
        y = r;
    }
    x
}

/// Certify the spectrum-parity matching condition on a classified system.
///
/// E0 comes from the approximate GCD of all level gaps above tolerance,
/// the offset is the lowest eigenvalue, and N_n = round((eps_n - c)/E0).
/// Passing requires every level residual within tol * E0, every parity
/// definite, and one global sign fitting p_n = sign * (-1)^{N_n}.
pub fn check_spmc(sys: &EigenSystem, tol: f64, max_integer: u64) -> Result<SpmcReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidSpec(format!(
            "commensurability tolerance must be positive, got {tol}"
        )));
    }
    if max_integer == 0 {
        return Err(Error::InvalidSpec("max_integer must be positive".into()));
    }
    let values = sys.values();
    let n = values.len();
    let offset = if n > 0 { values[0] } else { 0.0 };

    let mut report = SpmcReport {
        passes: false,
        e0: 0.0,
        offset,
        level_integers: Vec::new(),
        sign: 1,
        max_commensurability_residual: 0.0,
        max_parity_mismatch_count: 0,
        predicted_transfer_time: f64::INFINITY,
        failure: None,
        tol,
        max_integer,
    };

    if n < 2 {
        report.failure = Some(CertificationFailure::TooFewLevels);
        return Ok(report);
    }

    let gaps: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).filter(|&g| g > tol).collect();
    if gaps.is_empty() {
        report.failure = Some(CertificationFailure::AllDegenerate);
        return Ok(report);
    }

    let e0 = match approximate_gap_gcd(&gaps, tol, max_integer) {
        Some(g) => g,
        None => {
            report.failure = Some(CertificationFailure::Incommensurate);
            return Ok(report);
        }
    };
    report.e0 = e0;
    report.predicted_transfer_time = std::f64::consts::PI / e0;
    report.level_integers = values.iter().map(|&v| ((v - offset) / e0).round() as i64).collect();
    report.max_commensurability_residual = values
        .iter()
        .zip(&report.level_integers)
        .map(|(&v, &m)| (v - offset - m as f64 * e0).abs())
        .fold(0.0f64, f64::max);
    if report.max_commensurability_residual > tol * e0 {
        report.failure = Some(CertificationFailure::Incommensurate);
        return Ok(report);
    }

    if sys.parities().iter().any(|p| *p == Parity::None) {
        report.failure = Some(CertificationFailure::IndefiniteParity);
        return Ok(report);
    }

    // Fit the single global sign.
    let mut mismatch_plus = 0usize;
    let mut mismatch_minus = 0usize;
    for (p, &m) in sys.parities().iter().zip(&report.level_integers) {
        let lattice = if m % 2 == 0 { 1i8 } else { -1i8 };
        let p = p.sign().expect("parities checked definite above");
        if p != lattice {
            mismatch_plus += 1;
        }
        if p != -lattice {
            mismatch_minus += 1;
        }
    }
    let (sign, mismatches) = if mismatch_plus <= mismatch_minus {
        (1i8, mismatch_plus)
    } else {
        (-1i8, mismatch_minus)
    };
    report.sign = sign;
    report.max_parity_mismatch_count = mismatches;
    if mismatches > 0 {
        report.failure = Some(CertificationFailure::ParityMismatch);
        return Ok(report);
    }

    report.passes = true;
    Ok(report)
}
