//! Gaussian wavepacket transfer through the parabolic-field chain and the
//! field-strength sweep that locates the optimal transfer fidelity.
//!
//! A packet of FWHM `width` launched a distance L/2 left of center swings
//! across the trap and refocuses near the mirror site at half the trap
//! period. The dimensionless factor lambda scales the field curvature; the
//! sweep scans it, records each peak fidelity, and refines around the best.

use rayon::prelude::*;

use crate::chain::ParabolicChainSpec;
use crate::dynamics::{fidelity_curve, FidelityCurve};
use crate::eigen::diagonalize;
use crate::error::{Error, Result};
use crate::state::{mirror_reflect, StateVector};
use num_complex::Complex64;

/// Gaussian packet parameters: site offset of the center from the chain
/// center (negative = left), FWHM of the probability profile, and the
/// derived exponent alpha^2 = 4 ln2 / width^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianSpec {
    center_offset: i64,
    width: f64,
    alpha_sq: f64,
}

impl GaussianSpec {
    pub fn new(center_offset: i64, width: f64) -> Result<Self> {
        if !(width > 0.0) || !width.is_finite() {
            return Err(Error::InvalidSpec(format!("packet width must be positive, got {width}")));
        }
        let alpha_sq = 4.0 * std::f64::consts::LN_2 / (width * width);
        Ok(Self { center_offset, width, alpha_sq })
    }

    pub fn center_offset(&self) -> i64 {
        self.center_offset
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn alpha_sq(&self) -> f64 {
        self.alpha_sq
    }
}

/// Normalized packet with amplitudes proportional to
/// exp(-alpha^2 (i - center_site)^2 / 2); tails truncated by the chain ends
/// are absorbed into the normalization.
pub fn gaussian_state(
    chain_size: usize,
    center_site: usize,
    spec: &GaussianSpec,
) -> Result<StateVector> {
    if center_site == 0 || center_site > chain_size {
        return Err(Error::InvalidSpec(format!(
            "packet center {center_site} outside chain of {chain_size} sites"
        )));
    }
    let amps: Vec<Complex64> = (1..=chain_size as i64)
        .map(|i| {
            let x = (i - center_site as i64) as f64;
            Complex64::new((-0.5 * spec.alpha_sq * x * x).exp(), 0.0)
        })
        .collect();
    StateVector::from_unnormalized(amps)
}

/// Harmonic-limit reference fidelity at field factor 1:
/// F(t) = exp[-(alpha^2/2) N_A^2 (1 + cos(alpha^2 t))].
///
/// Maxima of 1 occur at odd multiples of pi/alpha^2 and the period is
/// 2 pi / alpha^2. Exact when the packet width matches the trap ground
/// state (lambda = 1) and the swing stays in the quadratic part of the band.
pub fn analytic_fidelity(t: f64, spec: &GaussianSpec) -> f64 {
    analytic_fidelity_scaled(t, spec, 1.0)
}

/// The same reference at general field factor: the trap frequency scales as
/// sqrt(lambda), so F(t) = exp[-(a^2/2) N_A^2 (1 + cos(a^2 sqrt(lambda) t))].
pub fn analytic_fidelity_scaled(t: f64, spec: &GaussianSpec, lambda: f64) -> f64 {
    let a2 = spec.alpha_sq;
    let na2 = (spec.center_offset * spec.center_offset) as f64;
    (-0.5 * a2 * na2 * (1.0 + (a2 * lambda.sqrt() * t).cos())).exp()
}

/// Time span a fidelity curve is sampled over.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeWindow {
    /// 1.5 trap periods, [0, 1.5 * 2 pi / (alpha^2 sqrt(lambda))]: always
    /// contains the first arrival (half a period) plus room for late
    /// refocusing structure. Requires lambda > 0.
    Adaptive,
    /// Fixed [0, t_max].
    Explicit { t_max: f64 },
}

/// Sweep definition: packet of FWHM `width` carried over `distance` sites
/// (centers at -distance/2 and +distance/2 about the chain center) on a
/// chain of 2(distance/2 + margin) + 1 sites.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Transfer distance L (even, positive).
    pub distance: usize,
    /// Packet FWHM.
    pub width: f64,
    /// Field factors to scan, ascending.
    pub lambda_grid: Vec<f64>,
    /// Extra sites beyond the packet centers on each end.
    pub margin: usize,
    /// Uniform coupling J.
    pub coupling: f64,
    pub time_window: TimeWindow,
    /// Samples per fidelity curve.
    pub time_samples: usize,
    /// Insert one pass of extra grid points around the coarse best row.
    pub refine: bool,
}

impl SweepConfig {
    /// Defaults: margin 20, coupling 1, adaptive window, 6000 samples per
    /// curve, one refinement, and the default lambda grid for (distance,
    /// width).
    pub fn new(distance: usize, width: f64) -> Result<Self> {
        let config = Self {
            distance,
            width,
            lambda_grid: default_lambda_grid(distance, width, 1.0)?,
            margin: 20,
            coupling: 1.0,
            time_window: TimeWindow::Adaptive,
            time_samples: 6000,
            refine: true,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        // Distance 0 is legal: a packet already at the center, mirror-equal
        // to its own target.
        if self.distance % 2 != 0 {
            return Err(Error::InvalidSpec(format!(
                "transfer distance must be even, got {}",
                self.distance
            )));
        }
        if !(self.width > 0.0) || !self.width.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "packet width must be positive, got {}",
                self.width
            )));
        }
        if !(self.coupling > 0.0) || !self.coupling.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "coupling must be positive, got {}",
                self.coupling
            )));
        }
        if self.lambda_grid.is_empty() {
            return Err(Error::InvalidSpec("lambda grid must be nonempty".into()));
        }
        if self.lambda_grid.iter().any(|l| !(*l >= 0.0) || !l.is_finite()) {
            return Err(Error::InvalidSpec("lambda grid entries must be nonnegative".into()));
        }
        if self.lambda_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSpec("lambda grid must be strictly ascending".into()));
        }
        if self.time_samples == 0 {
            return Err(Error::InvalidSpec("need at least 1 time sample".into()));
        }
        if let TimeWindow::Explicit { t_max } = self.time_window {
            if !(t_max > 0.0) || !t_max.is_finite() {
                return Err(Error::InvalidSpec(format!(
                    "explicit time window must be positive, got {t_max}"
                )));
            }
        }
        Ok(())
    }

    /// Chain half-length M: sites run 1..=2M+1.
    pub fn half_length(&self) -> usize {
        self.distance / 2 + self.margin
    }
}

/// Default field-factor grid: 60 logarithmic points on
/// [1e-4, 2] * lambda_edge, where lambda_edge = 2J / (B0(1) (L/2)^2) is the
/// factor at which the packet's initial potential energy equals the full
/// hopping bandwidth. Optima for transferable packets sit inside this range;
/// far above lambda_edge the packet starts under a potential wall higher
/// than the band and nothing propagates.
pub fn default_lambda_grid(distance: usize, width: f64, coupling: f64) -> Result<Vec<f64>> {
    if distance < 2 || distance % 2 != 0 {
        return Err(Error::InvalidSpec(format!(
            "transfer distance must be even and positive, got {distance}"
        )));
    }
    if !(width > 0.0) || !width.is_finite() {
        return Err(Error::InvalidSpec(format!("packet width must be positive, got {width}")));
    }
    if !(coupling > 0.0) || !coupling.is_finite() {
        return Err(Error::InvalidSpec(format!("coupling must be positive, got {coupling}")));
    }
    let r = std::f64::consts::LN_2 / (width * width);
    let b0_unit = 8.0 * r * r;
    let half = (distance / 2) as f64;
    let edge = 2.0 * coupling / (b0_unit * half * half);
    Ok(log_grid(1e-4 * edge, 2.0 * edge, 60))
}

fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let ratio = hi / lo;
    (0..points).map(|i| lo * ratio.powf(i as f64 / (points - 1) as f64)).collect()
}

/// One sweep row: the refined fidelity peak for a single field factor.
/// `flagged` marks a window whose maximum sat on the boundary (no interior
/// local maximum); flagged rows stay in the table but are excluded from
/// best-row selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub lambda: f64,
    pub b0: f64,
    pub peak_time: f64,
    pub peak_fidelity: f64,
    pub flagged: bool,
}

/// All rows in ascending lambda order plus the index of the best unflagged
/// row (ties broken toward smaller lambda); `None` when every row is
/// flagged.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub best_row: Option<usize>,
}

impl SweepResult {
    pub fn best(&self) -> Option<&SweepRow> {
        self.best_row.map(|i| &self.rows[i])
    }
}

/// Single-lambda transfer curve plus the harmonic reference on the same
/// grid, for side-by-side serialization.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferReport {
    pub lambda: f64,
    pub b0: f64,
    pub curve: FidelityCurve,
    pub analytic: Vec<f64>,
    pub flagged: bool,
}

fn window_end(config: &SweepConfig, lambda: f64, alpha_sq: f64) -> Result<f64> {
    match config.time_window {
        TimeWindow::Adaptive => {
            if !(lambda > 0.0) {
                return Err(Error::InvalidSpec(
                    "adaptive time window needs lambda > 0; give an explicit t_max".into(),
                ));
            }
            Ok(1.5 * 2.0 * std::f64::consts::PI / (alpha_sq * lambda.sqrt()))
        }
        TimeWindow::Explicit { t_max } => Ok(t_max),
    }
}

fn eval_curve(config: &SweepConfig, lambda: f64) -> Result<(ParabolicChainSpec, GaussianSpec, FidelityCurve)> {
    let chain =
        ParabolicChainSpec::from_lambda(config.half_length(), config.coupling, config.width, lambda)?;
    let gauss = GaussianSpec::new(-((config.distance / 2) as i64), config.width)?;
    let sys = diagonalize(&chain.hamiltonian())?;
    let center = (chain.center_site() as i64 + gauss.center_offset) as usize;
    let psi0 = gaussian_state(chain.size(), center, &gauss)?;
    let target = mirror_reflect(&psi0);
    let end = window_end(config, lambda, gauss.alpha_sq())?;
    let n = config.time_samples;
    let times: Vec<f64> = if n == 1 {
        vec![0.0]
    } else {
        (0..n).map(|i| end * i as f64 / (n - 1) as f64).collect()
    };
    let curve = fidelity_curve(&sys, &psi0, &target, &times)?;
    Ok((chain, gauss, curve))
}

fn eval_rows(config: &SweepConfig, lambdas: &[f64]) -> Result<Vec<SweepRow>> {
    lambdas
        .par_iter()
        .map(|&lambda| {
            let (chain, _, curve) = eval_curve(config, lambda)?;
            Ok(SweepRow {
                lambda,
                b0: chain.b0(),
                peak_time: curve.peak_time,
                peak_fidelity: curve.peak_value,
                flagged: !curve.interior_peak,
            })
        })
        .collect()
}

fn best_index(rows: &[SweepRow]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, row) in rows.iter().enumerate() {
        if row.flagged {
            continue;
        }
        match best {
            Some(b) if rows[b].peak_fidelity >= row.peak_fidelity => {}
            _ => best = Some(i),
        }
    }
    best
}

/// Scan the grid, optionally insert 24 extra points between the coarse
/// best's neighbors, and return every row (ascending lambda) with the best
/// marked. Rows are computed concurrently but merged in grid order, so the
/// result is a pure function of the config.
pub fn optimize_lambda(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let mut rows = eval_rows(config, &config.lambda_grid)?;

    if config.refine {
        if let Some(best) = best_index(&rows) {
            let grid = &config.lambda_grid;
            let ratio = if grid.len() >= 2 {
                (grid[grid.len() - 1] / grid[0]).powf(1.0 / (grid.len() - 1) as f64)
            } else {
                2.0
            };
            let lo = if best > 0 { grid[best - 1] } else { grid[0] / ratio };
            let hi = if best + 1 < grid.len() { grid[best + 1] } else { grid[grid.len() - 1] * ratio };
            const REFINE_POINTS: usize = 24;
            let extra: Vec<f64> = (1..=REFINE_POINTS)
                .map(|j| lo * (hi / lo).powf(j as f64 / (REFINE_POINTS + 1) as f64))
                .collect();
            rows.extend(eval_rows(config, &extra)?);
            rows.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
        }
    }

    let best_row = best_index(&rows);
    Ok(SweepResult { rows, best_row })
}

/// Full curve for one field factor, with the harmonic reference evaluated on
/// the same time grid.
pub fn transfer_report(config: &SweepConfig, lambda: f64) -> Result<TransferReport> {
    config.validate()?;
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidSpec(format!("lambda must be nonnegative, got {lambda}")));
    }
    let (chain, gauss, curve) = eval_curve(config, lambda)?;
    let analytic: Vec<f64> =
        curve.times.iter().map(|&t| analytic_fidelity_scaled(t, &gauss, lambda)).collect();
    Ok(TransferReport {
        lambda,
        b0: chain.b0(),
        flagged: !curve.interior_peak,
        curve,
        analytic,
    })
}
