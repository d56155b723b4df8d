//! Explicit spectral deferred correction on right Gauss-Radau nodes, built
//! on the Picard integral form with the spectral integration matrix S.
//!
//! The printed algorithm resets node 0 to u_n in every sweep even though the
//! first Radau node sits strictly inside the step; that `Literal` variant
//! pins the wrong fixed point, so the default `Corrected` variant integrates
//! the cached rhs over [t_n, t_{n,0}] instead. Both are kept selectable.

use crate::lagrange::LagrangeBasis;
use crate::linalg::Mat;
use crate::quadrature::{gauss_legendre, gauss_radau_right};
use crate::real::Real;
use crate::sdg::SweepState;
use crate::state::OdeState;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Node0Variant {
    /// u^{k+1}_{n,0} = u_n, exactly as printed.
    Literal,
    /// u^{k+1}_{n,0} = u_n + (dt/2) sum_j S[0][j] f(t_j, u^k_j).
    #[default]
    Corrected,
}

#[derive(Clone, Debug)]
pub struct SdcTableau<S> {
    pub degree: usize,
    pub nodes: Vec<S>,
    pub weights: Vec<S>,
    /// Row 0 covers [-1, tau_0]; row m+1 covers [tau_m, tau_{m+1}].
    /// All on the reference interval, so the step scales rows by dt/2.
    pub s_mat: Mat<S>,
    pub variant: Node0Variant,
}

impl<S: Real> SdcTableau<S> {
    pub fn new(degree: usize, variant: Node0Variant) -> Result<Self> {
        if degree < 1 {
            return Err(Error::InvalidArgument("SDC tableau needs degree >= 1".into()));
        }
        let rule = gauss_radau_right::<S>(degree + 1)?;
        let basis = LagrangeBasis::new(rule.nodes.clone())?;
        let seg_rule = gauss_legendre::<S>(degree + 1)?;
        let p = degree;
        let mut s_mat = Mat::zeros(p + 1, p + 1);
        for m in 0..=p {
            let a = if m == 0 { -S::one() } else { rule.nodes[m - 1] };
            let b = rule.nodes[m];
            for j in 0..=p {
                s_mat[(m, j)] = seg_rule.integrate(a, b, |t| basis.eval_all(t)[j]);
            }
        }
        Ok(Self {
            degree,
            nodes: rule.nodes,
            weights: rule.weights,
            s_mat,
            variant,
        })
    }

    pub fn node_time(&self, t_n: S, dt: S, m: usize) -> S {
        t_n + (self.nodes[m] + S::one()) * dt.half()
    }

    /// Euler predictor identical in structure to the SDG one.
    pub fn predict<St, F>(&self, u_n: &St, t_n: S, dt: S, rhs: &mut F) -> Result<SweepState<St>>
    where
        St: OdeState<S>,
        F: FnMut(S, &St) -> St,
    {
        let p = self.degree;
        let mut stages = Vec::with_capacity(p + 1);
        let mut fvals: Vec<Option<St>> = vec![None; p + 1];
        let f0 = rhs(t_n, u_n);
        let mut u = u_n.clone();
        u.scaled_add(self.node_time(t_n, dt, 0) - t_n, &f0);
        stages.push(u);
        for m in 0..p {
            let tm = self.node_time(t_n, dt, m);
            let f = rhs(tm, &stages[m]);
            let mut next = stages[m].clone();
            next.scaled_add(self.node_time(t_n, dt, m + 1) - tm, &f);
            fvals[m] = Some(f);
            stages.push(next);
        }
        let state = SweepState { stages, fvals };
        if !state.stages[p].is_finite() {
            return Err(Error::IntegrationFailure {
                step: 0,
                reason: "non-finite predictor stage".into(),
            });
        }
        Ok(state)
    }

    pub fn complete_cache<St, F>(&self, state: &mut SweepState<St>, t_n: S, dt: S, rhs: &mut F)
    where
        St: OdeState<S>,
        F: FnMut(S, &St) -> St,
    {
        for m in 0..=self.degree {
            if state.fvals[m].is_none() {
                let tm = self.node_time(t_n, dt, m);
                state.fvals[m] = Some(rhs(tm, &state.stages[m]));
            }
        }
    }

    pub fn sweep<St, F>(
        &self,
        state: &SweepState<St>,
        u_n: &St,
        t_n: S,
        dt: S,
        rhs: &mut F,
    ) -> Result<SweepState<St>>
    where
        St: OdeState<S>,
        F: FnMut(S, &St) -> St,
    {
        let p = self.degree;
        let half_dt = dt.half();
        debug_assert!(state.fvals.iter().all(Option::is_some));

        let quad_term = |row: usize| -> St {
            let mut acc = u_n.clone();
            acc.scale(S::zero());
            for j in 0..=p {
                let c = half_dt * self.s_mat[(row, j)];
                acc.scaled_add(c, state.fvals[j].as_ref().expect("cached rhs"));
            }
            acc
        };

        let mut stages = Vec::with_capacity(p + 1);
        let mut fvals: Vec<Option<St>> = vec![None; p + 1];

        let u0 = match self.variant {
            Node0Variant::Literal => u_n.clone(),
            Node0Variant::Corrected => {
                let mut u0 = u_n.clone();
                u0.scaled_add(S::one(), &quad_term(0));
                u0
            }
        };
        stages.push(u0);

        for m in 0..p {
            let tm = self.node_time(t_n, dt, m);
            let f_new = rhs(tm, &stages[m]);
            let gap = self.node_time(t_n, dt, m + 1) - tm;
            let mut next = stages[m].clone();
            next.scaled_add(gap, &f_new);
            next.scaled_add(-gap, state.fvals[m].as_ref().expect("cached rhs"));
            next.scaled_add(S::one(), &quad_term(m + 1));
            fvals[m] = Some(f_new);
            stages.push(next);
        }

        if !stages[p].is_finite() {
            return Err(Error::IntegrationFailure {
                step: 0,
                reason: "non-finite SDC sweep stage".into(),
            });
        }
        Ok(SweepState { stages, fvals })
    }

    /// Full step: predictor plus `sweeps` corrections, returning u_{n,p}.
    pub fn step<St, F>(&self, u_n: &St, t_n: S, dt: S, sweeps: usize, rhs: &mut F) -> Result<St>
    where
        St: OdeState<S>,
        F: FnMut(S, &St) -> St,
    {
        if sweeps == 0 {
            return Err(Error::InvalidArgument("SDC step needs >= 1 iteration".into()));
        }
        let mut state = self.predict(u_n, t_n, dt, rhs)?;
        for _ in 0..sweeps {
            self.complete_cache(&mut state, t_n, dt, rhs);
            state = self.sweep(&state, u_n, t_n, dt, rhs)?;
        }
        Ok(state.stages[self.degree].clone())
    }
}
