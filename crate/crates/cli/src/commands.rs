//! One function per subcommand. Each returns the process exit code on
//! success; certification failure is a result (exit 2), not an error.

use std::path::PathBuf;

use spintransfer::{
    check_spmc, classify_parities, diagonalize, evolve, fidelity_curve, mirror_reflect,
    optimize_lambda, transfer_report, StateVector, SweepConfig, TimeWindow,
};

use crate::config::{Model, RunConfig};
use crate::output::{fmt_f64, write_output, Format, Table};
use crate::{CommonArgs, Failure};

pub type CmdFn = fn(&CommonArgs) -> Result<i32, Failure>;

fn bad(msg: impl Into<String>) -> Failure {
    Failure::Validation(msg.into())
}

/// Settings shared by every command, with flag > config > default priority.
struct Ctx {
    config: RunConfig,
    format: Format,
    out: Option<PathBuf>,
    tol: f64,
    max_integer: u64,
}

impl Ctx {
    fn new(args: &CommonArgs) -> Result<Self, Failure> {
        let config = RunConfig::load(&args.config)?;
        let format = match args.format {
            Some(f) => f,
            None => config
                .get("output", "format")
                .map(str::parse)
                .transpose()
                .map_err(Failure::Validation)?
                .unwrap_or(Format::Csv),
        };
        let out = args.out.clone().or_else(|| config.get("output", "path").map(PathBuf::from));
        let tol = match args.tol {
            Some(t) => t,
            None => config.f64("tolerances", "tol")?.unwrap_or(1e-9),
        };
        let max_integer = match args.max_integer {
            Some(m) => m,
            None => config.u64("tolerances", "max_integer")?.unwrap_or(1000),
        };
        Ok(Self { config, format, out, tol, max_integer })
    }

    fn emit(&self, table: &Table) -> Result<(), Failure> {
        write_output(self.out.as_deref(), &table.render(self.format))
    }
}

pub fn cmd_spectrum(args: &CommonArgs) -> Result<i32, Failure> {
    let ctx = Ctx::new(args)?;
    let model = ctx.config.model()?;
    let op = model.operator(args.margin)?;
    let sys = classify_parities(diagonalize(&op)?, ctx.tol)?;

    let table = match &model {
        Model::Engineered(chain) => {
            let formula = chain.spectrum_formula();
            Table {
                headers: vec!["level", "eigenvalue", "parity", "formula", "residual"],
                rows: sys
                    .values()
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| {
                        vec![
                            i.to_string(),
                            fmt_f64(v),
                            sys.parities()[i].label().to_string(),
                            fmt_f64(formula[i]),
                            fmt_f64((v - formula[i]).abs()),
                        ]
                    })
                    .collect(),
                meta: vec![],
            }
        }
        _ => Table {
            headers: vec!["level", "eigenvalue", "parity"],
            rows: sys
                .values()
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    vec![i.to_string(), fmt_f64(v), sys.parities()[i].label().to_string()]
                })
                .collect(),
            meta: vec![],
        },
    };
    ctx.emit(&table)?;
    Ok(0)
}

pub fn cmd_check_spmc(args: &CommonArgs) -> Result<i32, Failure> {
    let ctx = Ctx::new(args)?;
    let op = ctx.config.model()?.operator(args.margin)?;
    let sys = classify_parities(diagonalize(&op)?, ctx.tol)?;
    let report = check_spmc(&sys, ctx.tol, ctx.max_integer)?;

    let integers =
        report.level_integers.iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
    let table = Table {
        headers: vec![],
        rows: vec![],
        meta: vec![
            ("passes", report.passes.to_string()),
            ("failure", report.failure.map_or("none".to_string(), |f| f.to_string())),
            ("e0", fmt_f64(report.e0)),
            ("offset", fmt_f64(report.offset)),
            ("level_integers", integers),
            ("sign", report.sign.to_string()),
            ("max_commensurability_residual", fmt_f64(report.max_commensurability_residual)),
            ("max_parity_mismatch_count", report.max_parity_mismatch_count.to_string()),
            ("predicted_transfer_time", fmt_f64(report.predicted_transfer_time)),
            ("tol", fmt_f64(report.tol)),
            ("max_integer", report.max_integer.to_string()),
        ],
    };
    ctx.emit(&table)?;
    Ok(if report.passes { 0 } else { 2 })
}

pub fn cmd_evolve(args: &CommonArgs) -> Result<i32, Failure> {
    let ctx = Ctx::new(args)?;
    let op = ctx.config.model()?.operator(args.margin)?;
    let site = ctx.config.usize("evolve", "site")?.unwrap_or(1);
    let time = match args.tmax {
        Some(t) => t,
        None => ctx
            .config
            .f64("evolve", "time")?
            .ok_or_else(|| bad("evolve needs [evolve] time or --tmax"))?,
    };
    if !time.is_finite() {
        return Err(bad(format!("evolve time must be finite, got {time}")));
    }
    let sys = diagonalize(&op)?;
    let psi0 = StateVector::site_basis(op.size(), site)?;
    let psi = evolve(&sys, &psi0, time)?;

    let table = Table {
        headers: vec!["site", "re", "im", "probability"],
        rows: psi
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(i, a)| {
                vec![(i + 1).to_string(), fmt_f64(a.re), fmt_f64(a.im), fmt_f64(a.norm_sqr())]
            })
            .collect(),
        meta: vec![("time", fmt_f64(time)), ("initial_site", site.to_string())],
    };
    ctx.emit(&table)?;
    Ok(0)
}

fn time_grid(t_max: f64, samples: usize) -> Result<Vec<f64>, Failure> {
    if samples == 0 {
        return Err(bad("need at least 1 time sample"));
    }
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(bad(format!("time horizon must be positive, got {t_max}")));
    }
    Ok(if samples == 1 {
        vec![0.0]
    } else {
        (0..samples).map(|i| t_max * i as f64 / (samples - 1) as f64).collect()
    })
}

pub fn cmd_transfer(args: &CommonArgs) -> Result<i32, Failure> {
    let ctx = Ctx::new(args)?;
    let model = ctx.config.model()?;
    let samples = ctx.config.usize("curve", "samples")?.unwrap_or(6000);
    let t_max = match args.tmax {
        Some(t) => Some(t),
        None => ctx.config.f64("curve", "t_max")?,
    };

    let table = match &model {
        Model::Parabolic(p) => {
            let (distance, margin) = p.require_distance(args.margin)?;
            let lambda = p.lambda()?;
            let config = SweepConfig {
                distance,
                width: p.width,
                lambda_grid: vec![lambda],
                margin,
                coupling: p.coupling,
                time_window: match t_max {
                    Some(t) => TimeWindow::Explicit { t_max: t },
                    None => TimeWindow::Adaptive,
                },
                time_samples: samples,
                refine: false,
            };
            let report = transfer_report(&config, lambda)?;
            Table {
                headers: vec!["time", "fidelity", "analytic_fidelity"],
                rows: report
                    .curve
                    .times
                    .iter()
                    .zip(&report.curve.values)
                    .zip(&report.analytic)
                    .map(|((t, f), a)| vec![fmt_f64(*t), fmt_f64(*f), fmt_f64(*a)])
                    .collect(),
                meta: vec![
                    ("lambda", fmt_f64(report.lambda)),
                    ("b0", fmt_f64(report.b0)),
                    ("peak_time", fmt_f64(report.curve.peak_time)),
                    ("peak_fidelity", fmt_f64(report.curve.peak_value)),
                    ("flagged", u8::from(report.flagged).to_string()),
                ],
            }
        }
        other => {
            // Site excitation in at one end, mirror target at the other.
            let op = other.operator(args.margin)?;
            let t_max = t_max
                .ok_or_else(|| bad("transfer on this model needs [curve] t_max or --tmax"))?;
            let times = time_grid(t_max, samples)?;
            let sys = diagonalize(&op)?;
            let psi0 = StateVector::site_basis(op.size(), 1)?;
            let target = mirror_reflect(&psi0);
            let curve = fidelity_curve(&sys, &psi0, &target, &times)?;
            Table {
                headers: vec!["time", "fidelity"],
                rows: curve
                    .times
                    .iter()
                    .zip(&curve.values)
                    .map(|(t, f)| vec![fmt_f64(*t), fmt_f64(*f)])
                    .collect(),
                meta: vec![
                    ("peak_time", fmt_f64(curve.peak_time)),
                    ("peak_fidelity", fmt_f64(curve.peak_value)),
                    ("flagged", u8::from(!curve.interior_peak).to_string()),
                ],
            }
        }
    };
    ctx.emit(&table)?;
    Ok(0)
}

pub fn cmd_sweep(args: &CommonArgs) -> Result<i32, Failure> {
    let ctx = Ctx::new(args)?;
    let Model::Parabolic(p) = ctx.config.model()? else {
        return Err(bad("sweep needs a parabolic model"));
    };
    let (distance, model_margin) = p.require_distance(None)?;
    let margin = match args.margin {
        Some(m) => m,
        None => ctx.config.usize("sweep", "margin")?.unwrap_or(model_margin),
    };
    let samples = ctx.config.usize("sweep", "samples")?.unwrap_or(6000);
    let refine = ctx.config.bool("sweep", "refine")?.unwrap_or(true);
    let t_max = match args.tmax {
        Some(t) => Some(t),
        None => ctx.config.f64("sweep", "t_max")?,
    };

    let grid = match (
        ctx.config.f64("sweep", "lambda_min")?,
        ctx.config.f64("sweep", "lambda_max")?,
        ctx.config.usize("sweep", "points")?,
    ) {
        (None, None, None) => spintransfer::default_lambda_grid(distance, p.width, p.coupling)?,
        (Some(lo), Some(hi), Some(points)) => {
            if !(lo > 0.0) || !hi.is_finite() || hi < lo {
                return Err(bad(format!("bad sweep range [{lo}, {hi}]")));
            }
            if points == 0 {
                return Err(bad("sweep needs at least 1 grid point"));
            }
            if points == 1 {
                vec![lo]
            } else {
                if hi <= lo {
                    return Err(bad(format!("sweep range [{lo}, {hi}] needs lambda_max > lambda_min")));
                }
                (0..points)
                    .map(|i| lo * (hi / lo).powf(i as f64 / (points - 1) as f64))
                    .collect()
            }
        }
        _ => {
            return Err(bad(
                "give all of [sweep] lambda_min, lambda_max, points, or none for the default grid",
            ))
        }
    };

    let config = SweepConfig {
        distance,
        width: p.width,
        lambda_grid: grid,
        margin,
        coupling: p.coupling,
        time_window: match t_max {
            Some(t) => TimeWindow::Explicit { t_max: t },
            None => TimeWindow::Adaptive,
        },
        time_samples: samples,
        refine,
    };
    let result = optimize_lambda(&config)?;

    let mut meta: Vec<(&'static str, String)> = Vec::new();
    match result.best() {
        Some(best) => {
            meta.push(("best_lambda", fmt_f64(best.lambda)));
            meta.push(("best_b0", fmt_f64(best.b0)));
            meta.push(("best_peak_time", fmt_f64(best.peak_time)));
            meta.push(("best_peak_fidelity", fmt_f64(best.peak_fidelity)));
        }
        None => meta.push(("best", "none".to_string())),
    }
    let table = Table {
        headers: vec!["lambda", "b0", "peak_time", "peak_fidelity", "flagged"],
        rows: result
            .rows
            .iter()
            .map(|r| {
                vec![
                    fmt_f64(r.lambda),
                    fmt_f64(r.b0),
                    fmt_f64(r.peak_time),
                    fmt_f64(r.peak_fidelity),
                    u8::from(r.flagged).to_string(),
                ]
            })
            .collect(),
        meta,
    };
    ctx.emit(&table)?;
    Ok(0)
}
