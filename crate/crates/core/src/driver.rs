//! Time-stepping driver: CFL-based step control, integrator dispatch,
//! iteration-adaptive SDG/SDC stepping, and exact rhs-evaluation accounting.

use crate::dg::{max_wave_speed, DgOperator, DgSolution};
use crate::flux::Flux;
use crate::real::Real;
use crate::rk::{rk3_step, rk4_step};
use crate::sdc::{Node0Variant, SdcTableau};
use crate::sdg::SdgTableau;
use crate::state::OdeState;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TimeIntegrator<S> {
    Rk3,
    Rk4,
    /// Predictor plus `sweeps` corrections per step.
    Sdg { sweeps: usize },
    Sdc { sweeps: usize, variant: Node0Variant },
    /// Sweeps until the endpoint increment drops below eps, capped by k_max.
    AdaptiveSdg { eps: S, k_max: usize },
    AdaptiveSdc { eps: S, k_max: usize, variant: Node0Variant },
}

impl<S: Real> TimeIntegrator<S> {
    pub fn name(&self) -> &'static str {
        match self {
            TimeIntegrator::Rk3 => "rk3",
            TimeIntegrator::Rk4 => "rk4",
            TimeIntegrator::Sdg { .. } => "sdg",
            TimeIntegrator::Sdc { .. } => "sdc",
            TimeIntegrator::AdaptiveSdg { .. } => "adaptive-sdg",
            TimeIntegrator::AdaptiveSdc { .. } => "adaptive-sdc",
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct StepStats {
    pub steps: u64,
    pub rhs_evals: u64,
    /// Correction sweeps actually performed (SDG/SDC only).
    pub sweeps_total: u64,
}

/// Integrate `sol0` to `t_final` with uniform steps dt = cfl * dx / alpha,
/// the final step shrunk to land exactly on the target time. alpha is the
/// initial global wave speed, so for unit-speed advection the step is
/// exactly cfl * dx.
pub fn integrate<S: Real>(
    op: &DgOperator<S>,
    sol0: &DgSolution<S>,
    t_final: S,
    cfl: S,
    integrator: &TimeIntegrator<S>,
) -> Result<(DgSolution<S>, StepStats)> {
    let t0 = sol0.time;
    if t_final < t0 {
        return Err(Error::InvalidArgument("t_final precedes current time".into()));
    }
    if t_final == t0 {
        return Ok((sol0.clone(), StepStats::default()));
    }
    let mut dt = cfl * op.mesh.dx;
    let alpha = max_wave_speed(sol0, &op.flux);
    if alpha > S::zero() {
        dt /= alpha;
    }
    let span = t_final - t0;
    let n_steps = (span / dt - S::epsilon()).floor().to_f64() as usize + 1;

    let mut stats = StepStats::default();
    let mut evals = 0u64;
    let mut u = sol0.clone();
    let mut t = t0;

    let sdg_tab: Option<SdgTableau<S>> = match integrator {
        TimeIntegrator::Sdg { .. } | TimeIntegrator::AdaptiveSdg { .. } => {
            Some(SdgTableau::new(op.degree)?)
        }
        _ => None,
    };
    let sdc_tab: Option<SdcTableau<S>> = match integrator {
        TimeIntegrator::Sdc { variant, .. } => Some(SdcTableau::new(op.degree, *variant)?),
        TimeIntegrator::AdaptiveSdc { variant, .. } => Some(SdcTableau::new(op.degree, *variant)?),
        _ => None,
    };

    for step in 0..n_steps {
        let dt_step = if step + 1 == n_steps { t_final - t } else { dt };
        let mut rhs = |tau: S, v: &DgSolution<S>| {
            evals += 1;
            op.rhs(tau, v)
        };
        let next = match integrator {
            TimeIntegrator::Rk3 => rk3_step(&u, t, dt_step, &mut rhs),
            TimeIntegrator::Rk4 => rk4_step(&u, t, dt_step, &mut rhs),
            TimeIntegrator::Sdg { sweeps } => {
                stats.sweeps_total += *sweeps as u64;
                sdg_tab.as_ref().unwrap().step(&u, t, dt_step, *sweeps, &mut rhs)
            }
            TimeIntegrator::Sdc { sweeps, .. } => {
                stats.sweeps_total += *sweeps as u64;
                sdc_tab.as_ref().unwrap().step(&u, t, dt_step, *sweeps, &mut rhs)
            }
            TimeIntegrator::AdaptiveSdg { eps, k_max } => {
                adaptive_sdg_step(sdg_tab.as_ref().unwrap(), &u, t, dt_step, *eps, *k_max, &mut rhs)
                    .map(|(v, k)| {
                        stats.sweeps_total += k as u64;
                        v
                    })
            }
            TimeIntegrator::AdaptiveSdc { eps, k_max, .. } => {
                adaptive_sdc_step(sdc_tab.as_ref().unwrap(), &u, t, dt_step, *eps, *k_max, &mut rhs)
                    .map(|(v, k)| {
                        stats.sweeps_total += k as u64;
                        v
                    })
            }
        };
        u = next.map_err(|e| Error::IntegrationFailure {
            step,
            reason: e.to_string(),
        })?;
        if !u.is_finite() {
            return Err(Error::IntegrationFailure {
                step,
                reason: "non-finite solution state".into(),
            });
        }
        t = if step + 1 == n_steps { t_final } else { t + dt };
        stats.steps += 1;
    }
    u.time = t_final;
    stats.rhs_evals = evals;
    Ok((u, stats))
}

/// SDG step that sweeps until |u^K_{n,p} - u^{K-1}_{n,p}| < eps (discrete L2
/// over all coefficients) or k_max sweeps are spent. Returns the iteration
/// count actually used.
pub fn adaptive_sdg_step<S, St, F>(
    tab: &SdgTableau<S>,
    u_n: &St,
    t_n: S,
    dt: S,
    eps: S,
    k_max: usize,
    rhs: &mut F,
) -> Result<(St, usize)>
where
    S: Real,
    St: OdeState<S>,
    F: FnMut(S, &St) -> St,
{
    let mut state = tab.predict(u_n, t_n, dt, rhs)?;
    let mut k = 0;
    loop {
        tab.complete_cache(&mut state, t_n, dt, rhs);
        let next = tab.sweep(&state, u_n, t_n, dt, rhs)?;
        k += 1;
        let inc = next.last_stage().l2_dist(state.last_stage());
        state = next;
        if inc < eps || k >= k_max {
            let last = state.stages.pop().expect("non-empty stages");
            return Ok((last, k));
        }
    }
}

/// SDC counterpart of [`adaptive_sdg_step`].
pub fn adaptive_sdc_step<S, St, F>(
    tab: &SdcTableau<S>,
    u_n: &St,
    t_n: S,
    dt: S,
    eps: S,
    k_max: usize,
    rhs: &mut F,
) -> Result<(St, usize)>
where
    S: Real,
    St: OdeState<S>,
    F: FnMut(S, &St) -> St,
{
    let mut state = tab.predict(u_n, t_n, dt, rhs)?;
    let mut k = 0;
    loop {
        tab.complete_cache(&mut state, t_n, dt, rhs);
        let next = tab.sweep(&state, u_n, t_n, dt, rhs)?;
        k += 1;
        let inc = next.last_stage().l2_dist(state.last_stage());
        state = next;
        if inc < eps || k >= k_max {
            let last = state.stages.pop().expect("non-empty stages");
            return Ok((last, k));
        }
    }
}

/// Default adaptive tolerance: one step's share of the post-processed
/// spatial error scale dx^(2p+1).
pub fn default_adaptive_eps<S: Real>(dx: S, degree: usize) -> S {
    dx.powi(2 * degree as i32 + 2)
}
