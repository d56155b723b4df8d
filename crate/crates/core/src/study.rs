//! Convergence studies, CFL sweeps and timing comparisons, with CSV
//! emission. These drive everything the command-line tool exposes.

use crate::dd::DoubleDouble;
use crate::dg::{l2_error, l2_project, DgOperator};
use crate::driver::{default_adaptive_eps, integrate, TimeIntegrator};
use crate::mesh::Mesh;
use crate::problems::Problem;
use crate::real::Real;
use crate::reference;
use crate::sdc::Node0Variant;
use crate::siac::postprocess_errors;
use crate::{Error, Result};
use rayon::prelude::*;
use std::fmt::Write as _;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    Standard,
    Extended,
}

impl std::str::FromStr for Precision {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" | "f64" => Ok(Precision::Standard),
            "extended" | "dd" => Ok(Precision::Extended),
            other => Err(Error::Parse(format!("unknown precision '{other}'"))),
        }
    }
}

/// Precision-independent integrator description; optional fields fall back
/// to the defaults of the experiments (K = 2p, eps = dx^(2p+2), k_max = 2p).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IntegratorSpec {
    Rk3,
    Rk4,
    Sdg { sweeps: Option<usize> },
    Sdc { sweeps: Option<usize>, variant: Node0Variant },
    AdaptiveSdg { eps: Option<f64>, k_max: Option<usize> },
    AdaptiveSdc { eps: Option<f64>, k_max: Option<usize>, variant: Node0Variant },
}

impl IntegratorSpec {
    pub fn resolve<S: Real>(&self, degree: usize, dx: S) -> TimeIntegrator<S> {
        let default_sweeps = 2 * degree;
        match *self {
            IntegratorSpec::Rk3 => TimeIntegrator::Rk3,
            IntegratorSpec::Rk4 => TimeIntegrator::Rk4,
            IntegratorSpec::Sdg { sweeps } => TimeIntegrator::Sdg {
                sweeps: sweeps.unwrap_or(default_sweeps),
            },
            IntegratorSpec::Sdc { sweeps, variant } => TimeIntegrator::Sdc {
                sweeps: sweeps.unwrap_or(default_sweeps),
                variant,
            },
            IntegratorSpec::AdaptiveSdg { eps, k_max } => TimeIntegrator::AdaptiveSdg {
                eps: eps
                    .map(S::from_f64)
                    .unwrap_or_else(|| default_adaptive_eps(dx, degree)),
                k_max: k_max.unwrap_or(default_sweeps),
            },
            IntegratorSpec::AdaptiveSdc { eps, k_max, variant } => TimeIntegrator::AdaptiveSdc {
                eps: eps
                    .map(S::from_f64)
                    .unwrap_or_else(|| default_adaptive_eps(dx, degree)),
                k_max: k_max.unwrap_or(default_sweeps),
                variant,
            },
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            IntegratorSpec::Rk3 => "rk3",
            IntegratorSpec::Rk4 => "rk4",
            IntegratorSpec::Sdg { .. } => "sdg",
            IntegratorSpec::Sdc { .. } => "sdc",
            IntegratorSpec::AdaptiveSdg { .. } => "adaptive-sdg",
            IntegratorSpec::AdaptiveSdc { .. } => "adaptive-sdc",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub problem: Problem,
    pub degree: usize,
    pub n_list: Vec<usize>,
    pub cfl: f64,
    pub t_final: f64,
    pub integrator: IntegratorSpec,
    pub precision: Precision,
    /// When false the seconds column is reported as 0 so identical configs
    /// produce bit-identical CSV output.
    pub report_seconds: bool,
}

impl RunConfig {
    pub fn new(problem: Problem, degree: usize, n_list: Vec<usize>, integrator: IntegratorSpec) -> Self {
        let cfl = match (problem, integrator) {
            (Problem::VariableCoefficient, _) | (Problem::Burgers, _) => 0.05,
            (Problem::Linear, IntegratorSpec::Rk3 | IntegratorSpec::Rk4) if degree >= 2 => 0.01,
            _ => 0.1,
        };
        Self {
            problem,
            degree,
            n_list,
            cfl,
            t_final: problem.default_t_final(),
            integrator,
            precision: Precision::Standard,
            report_seconds: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ReportRow {
    pub degree: usize,
    pub n: usize,
    pub dg_l2: f64,
    pub dg_order: Option<f64>,
    pub pp_l2: f64,
    pub pp_order: Option<f64>,
    pub seconds: f64,
    pub rhs_evals: u64,
}

#[derive(Clone, Debug)]
pub enum RowOutcome {
    Ok(ReportRow),
    Skipped { n: usize, reason: String },
    Failed { n: usize, error: String },
}

#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub rows: Vec<RowOutcome>,
}

impl ConvergenceReport {
    pub fn ok_rows(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter_map(|r| match r {
            RowOutcome::Ok(row) => Some(row),
            _ => None,
        })
    }

    pub fn any_failed(&self) -> bool {
        self.rows.iter().any(|r| matches!(r, RowOutcome::Failed { .. }))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,N,dg_l2,dg_order,pp_l2,pp_order,seconds,rhs_evals\n");
        for row in &self.rows {
            match row {
                RowOutcome::Ok(r) => {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{},{}",
                        r.degree,
                        r.n,
                        r.dg_l2,
                        r.dg_order.map(|o| o.to_string()).unwrap_or_default(),
                        r.pp_l2,
                        r.pp_order.map(|o| o.to_string()).unwrap_or_default(),
                        r.seconds,
                        r.rhs_evals
                    );
                }
                RowOutcome::Skipped { n, reason } => {
                    let _ = writeln!(out, "# skipped N={n}: {reason}");
                }
                RowOutcome::Failed { n, error } => {
                    let _ = writeln!(out, "# failed N={n}: {error}");
                }
            }
        }
        out
    }
}

/// log2 error ratio between consecutive grids.
pub fn order(e_coarse: f64, e_fine: f64) -> f64 {
    (e_coarse / e_fine).log2()
}

struct RowData {
    dg: f64,
    pp: f64,
    evals: u64,
    seconds: f64,
}

fn run_row<S: Real>(
    problem: Problem,
    degree: usize,
    n: usize,
    cfl: f64,
    t_final: f64,
    spec: &IntegratorSpec,
) -> Result<RowData> {
    let (a, b) = problem.domain::<S>();
    let mesh = Mesh::new(a, b, n)?;
    let sol0 = l2_project(|x| problem.initial(x), mesh, degree);
    let op = DgOperator::new(mesh, degree, problem.flux());
    let integrator = spec.resolve::<S>(degree, mesh.dx);
    let tf = S::from_f64(t_final);

    let start = Instant::now();
    let (sol, stats) = integrate(&op, &sol0, tf, S::from_f64(cfl), &integrator)?;
    let exact = move |x: S| problem.exact(x, tf).expect("exact solution in range");
    let dg = l2_error(&sol, exact).to_f64();
    let (pp, _) = postprocess_errors(&sol, exact)?;
    Ok(RowData {
        dg,
        pp: pp.to_f64(),
        evals: stats.rhs_evals,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// One table: for each N project, integrate, measure raw and filtered L2
/// errors and their orders. Rows run in parallel; failures are recorded
/// per row without aborting the others.
pub fn run_convergence_study(cfg: &RunConfig) -> ConvergenceReport {
    let results: Vec<(usize, Option<Result<RowData>>)> = cfg
        .n_list
        .par_iter()
        .map(|&n| {
            // Standard precision cannot resolve rows whose published error
            // sits below the round-off floor; skip them explicitly.
            if cfg.precision == Precision::Standard {
                if let Some(pp) =
                    reference::reference_pp_error(cfg.problem, cfg.degree, n, cfg.t_final)
                {
                    if pp < reference::STANDARD_PRECISION_FLOOR {
                        return (n, None);
                    }
                }
            }
            let data = match cfg.precision {
                Precision::Standard => {
                    run_row::<f64>(cfg.problem, cfg.degree, n, cfg.cfl, cfg.t_final, &cfg.integrator)
                }
                Precision::Extended => run_row::<DoubleDouble>(
                    cfg.problem,
                    cfg.degree,
                    n,
                    cfg.cfl,
                    cfg.t_final,
                    &cfg.integrator,
                ),
            };
            (n, Some(data))
        })
        .collect();

    let mut rows = Vec::with_capacity(results.len());
    let mut prev: Option<(f64, f64)> = None;
    for (n, outcome) in results {
        match outcome {
            None => {
                prev = None;
                rows.push(RowOutcome::Skipped {
                    n,
                    reason: format!(
                        "requires extended precision (published error below {:e})",
                        reference::STANDARD_PRECISION_FLOOR
                    ),
                });
            }
            Some(Err(e)) => {
                prev = None;
                rows.push(RowOutcome::Failed { n, error: e.to_string() });
            }
            Some(Ok(data)) => {
                let (dg_order, pp_order) = match prev {
                    Some((dg_prev, pp_prev)) => {
                        (Some(order(dg_prev, data.dg)), Some(order(pp_prev, data.pp)))
                    }
                    None => (None, None),
                };
                prev = Some((data.dg, data.pp));
                rows.push(RowOutcome::Ok(ReportRow {
                    degree: cfg.degree,
                    n,
                    dg_l2: data.dg,
                    dg_order,
                    pp_l2: data.pp,
                    pp_order,
                    seconds: if cfg.report_seconds { data.seconds } else { 0.0 },
                    rhs_evals: data.evals,
                }));
            }
        }
    }
    ConvergenceReport { rows }
}

#[derive(Clone, Copy, Debug)]
pub struct CflRow {
    pub cfl: f64,
    pub dg_l2: f64,
    pub pp_l2: f64,
}

/// Errors as a function of the CFL number at fixed (problem, degree, N).
pub fn cfl_sweep(
    problem: Problem,
    degree: usize,
    n: usize,
    spec: &IntegratorSpec,
    cfls: &[f64],
    precision: Precision,
) -> Result<Vec<CflRow>> {
    let t_final = problem.default_t_final();
    let rows: Vec<Result<CflRow>> = cfls
        .par_iter()
        .map(|&cfl| {
            let data = match precision {
                Precision::Standard => run_row::<f64>(problem, degree, n, cfl, t_final, spec),
                Precision::Extended => {
                    run_row::<DoubleDouble>(problem, degree, n, cfl, t_final, spec)
                }
            }?;
            Ok(CflRow {
                cfl,
                dg_l2: data.dg,
                pp_l2: data.pp,
            })
        })
        .collect();
    rows.into_iter().collect()
}

pub fn cfl_csv(rows: &[CflRow]) -> String {
    let mut out = String::from("cfl,dg_l2,pp_l2\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{}", r.cfl, r.dg_l2, r.pp_l2);
    }
    out
}

#[derive(Clone, Copy, Debug)]
pub struct TimingRow {
    pub degree: usize,
    /// Step size RK3 needs for its temporal error to stop polluting the
    /// post-processed spatial accuracy.
    pub rk3_cfl: f64,
    pub rk3_steps: u64,
    pub rk3_rhs_evals: u64,
    /// Wall-clock time of the verified RK3 run; None when the row was
    /// estimated from the required step count instead of run to completion.
    pub rk3_seconds: Option<f64>,
    pub sdg_rhs_evals: u64,
    pub sdg_seconds: f64,
    pub eval_ratio: f64,
    pub time_ratio: Option<f64>,
    pub estimated: bool,
}

/// Cost of reaching the spatially-dominated filtered accuracy: RK3 versus
/// ExSDG_p^{2p} at cfl 0.1, per polynomial degree. Runs in extended
/// precision so the p >= 3 reference errors are meaningful. RK3 rows whose
/// verification run would exceed `budget_seconds` are estimated from the
/// fitted third-order error model and marked as such.
pub fn timing_comparison(
    problem: Problem,
    degrees: &[usize],
    n: usize,
    budget_seconds: f64,
) -> Result<Vec<TimingRow>> {
    type S = DoubleDouble;
    let t_final = problem.default_t_final();
    let (a, b) = problem.domain::<S>();
    let mesh = Mesh::new(a, b, n)?;
    let mut out = Vec::with_capacity(degrees.len());

    for &p in degrees {
        let sol0 = l2_project(|x| problem.initial(x), mesh, p);
        let op = DgOperator::new(mesh, p, problem.flux());
        let tf = S::from_f64(t_final);
        let exact = move |x: S| problem.exact(x, tf).expect("exact solution in range");

        // Reference: SDG with K = 2p at cfl 0.1 is spatially dominated.
        let start = Instant::now();
        let (sdg_sol, sdg_stats) = integrate(
            &op,
            &sol0,
            tf,
            S::from_f64(0.1),
            &TimeIntegrator::Sdg { sweeps: 2 * p },
        )?;
        let sdg_seconds = start.elapsed().as_secs_f64();
        let (pp_ref, _) = postprocess_errors(&sdg_sol, exact)?;
        let target = pp_ref.to_f64() * 1.1;

        // Fit the temporal error C * cfl^3 from two coarse, clearly
        // temporally-dominated runs.
        let rk3_err = |cfl: f64| -> Result<(f64, f64, u64)> {
            let t0 = Instant::now();
            let (sol, stats) = integrate(&op, &sol0, tf, S::from_f64(cfl), &TimeIntegrator::Rk3)?;
            let (pp, _) = postprocess_errors(&sol, exact)?;
            Ok((pp.to_f64(), t0.elapsed().as_secs_f64(), stats.rhs_evals))
        };
        let stability_cap = 1.0 / (2.0 * p as f64 + 1.0);
        let (e_fit, _, _) = rk3_err(stability_cap * 0.5)?;
        let mut cfl_star = if e_fit <= target {
            stability_cap
        } else {
            let c0 = e_fit / (stability_cap * 0.5).powi(3);
            // Temporal share of the target, with a 2x safety margin.
            (0.5 * pp_ref.to_f64() / c0).powf(1.0 / 3.0).min(stability_cap)
        };

        // Decide whether the verification run fits the budget, estimating
        // its cost from the fitting run.
        let (_, fit_secs, fit_evals) = rk3_err(stability_cap * 0.25)?;
        let secs_per_eval = fit_secs / fit_evals as f64;
        let mut verified: Option<(f64, f64, u64)> = None;
        for _attempt in 0..3 {
            let steps = (t_final / (cfl_star * mesh.dx.to_f64())).ceil();
            let predicted = steps * 3.0 * secs_per_eval;
            if predicted > budget_seconds {
                break;
            }
            let (err, secs, evals) = rk3_err(cfl_star)?;
            if err <= target {
                verified = Some((err, secs, evals));
                break;
            }
            cfl_star *= (target / err).powf(1.0 / 3.0) * 0.9;
        }

        let rk3_steps = (t_final / (cfl_star * mesh.dx.to_f64())).ceil() as u64;
        let (rk3_evals, rk3_seconds, estimated) = match verified {
            Some((_, secs, evals)) => (evals, Some(secs), false),
            None => (3 * rk3_steps, None, true),
        };

        out.push(TimingRow {
            degree: p,
            rk3_cfl: cfl_star,
            rk3_steps,
            rk3_rhs_evals: rk3_evals,
            rk3_seconds,
            sdg_rhs_evals: sdg_stats.rhs_evals,
            sdg_seconds,
            eval_ratio: rk3_evals as f64 / sdg_stats.rhs_evals as f64,
            time_ratio: rk3_seconds.map(|s| s / sdg_seconds),
            estimated,
        });
    }
    Ok(out)
}

pub fn timing_csv(rows: &[TimingRow]) -> String {
    let mut out = String::from(
        "degree,rk3_cfl,rk3_steps,rk3_rhs_evals,rk3_seconds,sdg_rhs_evals,sdg_seconds,eval_ratio,time_ratio,estimated\n",
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.degree,
            r.rk3_cfl,
            r.rk3_steps,
            r.rk3_rhs_evals,
            r.rk3_seconds.map(|s| s.to_string()).unwrap_or_default(),
            r.sdg_rhs_evals,
            r.sdg_seconds,
            r.eval_ratio,
            r.time_ratio.map(|s| s.to_string()).unwrap_or_default(),
            r.estimated
        );
    }
    out
}
