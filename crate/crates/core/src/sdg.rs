//! Explicit SDG time integrator: a DG-in-time discretization on right
//! Gauss-Radau nodes solved by an Euler predictor plus correction sweeps.
//! Each sweep raises the observed order by one, up to the 2p+1
//! superconvergence of the underlying collocation system.
//!
//! `ExSDG_p^K` here means: Euler predictor through the p+1 Radau nodes,
//! followed by K correction sweeps, returning the last stage value.

use crate::lagrange::LagrangeBasis;
use crate::linalg::Mat;
use crate::quadrature::{gauss_legendre, gauss_radau_right};
use crate::real::Real;
use crate::state::OdeState;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct SdgTableau<S> {
    pub degree: usize,
    /// Right Gauss-Radau nodes on [-1, 1] (last node = 1).
    pub nodes: Vec<S>,
    /// Matching quadrature weights omega_m.
    pub weights: Vec<S>,
    /// L[i][j] = int l_i' l_j dt - delta_ip delta_jp.
    pub l_mat: Mat<S>,
    /// Lower bidiagonal approximation of L (-1 diagonal, +1 subdiagonal).
    pub l_delta: Mat<S>,
    /// L_delta * L^{-1}.
    pub l_tilde: Mat<S>,
    /// l_j(-1), the initial-trace vector template.
    pub trace_left: Vec<S>,
    /// Infinity-norm condition estimate of L, recorded at construction.
    pub cond_l: f64,
}

impl<S: Real> SdgTableau<S> {
    /// Tableau on right Gauss-Radau nodes (the paper's setting).
    pub fn new(degree: usize) -> Result<Self> {
        if degree < 1 {
            return Err(Error::InvalidArgument("SDG tableau needs degree >= 1".into()));
        }
        let rule = gauss_radau_right::<S>(degree + 1)?;
        Self::from_nodes(rule.nodes, rule.weights)
    }

    /// Tableau on arbitrary distinct nodes with their interpolatory weights.
    /// Used by the uniform-node regression; normal use is [`SdgTableau::new`].
    pub fn from_nodes(nodes: Vec<S>, weights: Vec<S>) -> Result<Self> {
        let p = nodes.len() - 1;
        let basis = LagrangeBasis::new(nodes.clone())?;

        // int l_i' l_j via Gauss-Legendre exact for degree 2p-1.
        let quad = gauss_legendre::<S>(p + 1)?;
        let mut l_mat = Mat::zeros(p + 1, p + 1);
        for (&t, &w) in quad.nodes.iter().zip(&quad.weights) {
            let vals = basis.eval_all(t);
            let ders = basis.deriv_all(t);
            for i in 0..=p {
                for j in 0..=p {
                    l_mat[(i, j)] += w * ders[i] * vals[j];
                }
            }
        }
        l_mat[(p, p)] -= S::one();

        let mut l_delta = Mat::zeros(p + 1, p + 1);
        for i in 0..=p {
            l_delta[(i, i)] = -S::one();
            if i > 0 {
                l_delta[(i, i - 1)] = S::one();
            }
        }

        let lu = l_mat
            .clone()
            .lu()
            .map_err(|e| Error::Construction(format!("L is singular: {e}")))?;
        let l_inv = lu.inverse();
        let l_tilde = l_delta.matmul(&l_inv);
        let cond_l = (l_mat.norm_inf() * l_inv.norm_inf()).to_f64();

        let trace_left = basis.eval_all(-S::one());
        Ok(Self {
            degree: p,
            nodes,
            weights,
            l_mat,
            l_delta,
            l_tilde,
            trace_left,
            cond_l,
        })
    }

    /// Physical time of stage m within [t_n, t_n + dt].
    pub fn node_time(&self, t_n: S, dt: S, m: usize) -> S {
        t_n + (self.nodes[m] + S::one()) * dt.half()
    }

    /// Euler predictor marching u_n through the Radau nodes (iteration 0).
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

    /// Evaluate any missing cached rhs values for the state's iteration.
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

    /// One correction sweep (iteration k -> k+1), exactly the printed update:
    /// node 0 from the weighted L~ quadrature of the cached rhs, nodes m+1
    /// from the two-term Euler difference plus the L~ row quadrature.
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

        // (dt/2) * sum_j L~[r][j] w_j f(t_j, u^k_j) for each row r.
        let quad_term = |row: usize| -> St {
            let mut acc = u_n.clone();
            acc.scale(S::zero());
            for j in 0..=p {
                let c = half_dt * self.l_tilde[(row, j)] * self.weights[j];
                acc.scaled_add(c, state.fvals[j].as_ref().expect("cached rhs"));
            }
            acc
        };

        let mut stages = Vec::with_capacity(p + 1);
        let mut fvals: Vec<Option<St>> = vec![None; p + 1];

        let mut u0 = u_n.clone();
        u0.scaled_add(S::one(), &quad_term(0));
        stages.push(u0);

        for m in 0..p {
            let tm = self.node_time(t_n, dt, m);
            let f_new = rhs(tm, &stages[m]);
            let mut next = stages[m].clone();
            let wm = half_dt * self.weights[m];
            next.scaled_add(wm, &f_new);
            next.scaled_add(-wm, state.fvals[m].as_ref().expect("cached rhs"));
            next.scaled_add(S::one(), &quad_term(m + 1));
            fvals[m] = Some(f_new);
            stages.push(next);
        }

        if !stages[p].is_finite() {
            return Err(Error::IntegrationFailure {
                step: 0,
                reason: "non-finite SDG sweep stage".into(),
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
            return Err(Error::InvalidArgument("SDG step needs >= 1 iteration".into()));
        }
        let mut state = self.predict(u_n, t_n, dt, rhs)?;
        for _ in 0..sweeps {
            self.complete_cache(&mut state, t_n, dt, rhs);
            state = self.sweep(&state, u_n, t_n, dt, rhs)?;
        }
        Ok(state.stages[self.degree].clone())
    }

    /// Direct solve of the time-DG weak form for the scalar linear problem
    /// u' = lambda u: (L + (lambda dt/2) diag(w)) U = -B. This is the fixed
    /// point of the sweeps and the test oracle for them.
    pub fn collocation_solve(&self, u_n: S, dt: S, lambda: S) -> Result<Vec<S>> {
        let p = self.degree;
        let mut a = self.l_mat.clone();
        for m in 0..=p {
            a[(m, m)] += lambda * dt.half() * self.weights[m];
        }
        let b: Vec<S> = self.trace_left.iter().map(|&l| -(u_n * l)).collect();
        let lu = a
            .lu()
            .map_err(|_| Error::SolverFailure("collocation system is singular".into()))?;
        Ok(lu.solve(&b))
    }
}

/// Stage values and cached rhs evaluations for one iteration of a step.
#[derive(Clone, Debug)]
pub struct SweepState<St> {
    pub stages: Vec<St>,
    pub fvals: Vec<Option<St>>,
}

impl<St> SweepState<St> {
    pub fn last_stage(&self) -> &St {
        self.stages.last().expect("non-empty stages")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tab(p: usize) -> SdgTableau<f64> {
        SdgTableau::new(p).unwrap()
    }

    #[test]
    fn p1_tableau_matches_hand_derivation() {
        // Nodes {-1/3, 1}: l_0 = 3(1-t)/4, l_1 = (3t+1)/4 give
        // L = [[-9/8, -3/8], [9/8, -5/8]] and L~ = [[5/9, -1/3], [4/9, 4/3]].
        let t = tab(1);
        assert!((t.nodes[0] + 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(t.nodes[1], 1.0);
        assert!((t.weights[0] - 1.5).abs() < 1e-15);
        assert!((t.weights[1] - 0.5).abs() < 1e-15);
        let l_want = [[-9.0 / 8.0, -3.0 / 8.0], [9.0 / 8.0, -5.0 / 8.0]];
        let lt_want = [[5.0 / 9.0, -1.0 / 3.0], [4.0 / 9.0, 4.0 / 3.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((t.l_mat[(i, j)] - l_want[i][j]).abs() < 1e-14);
                assert!((t.l_tilde[(i, j)] - lt_want[i][j]).abs() < 1e-14);
            }
        }
        // Hidden identities used by the printed algorithm: (L~ B)_0 = u_n and
        // (L~ B)_{m+1} = 0.
        let ltb = t.l_tilde.matvec(&t.trace_left);
        assert!((ltb[0] - 1.0).abs() < 1e-14);
        assert!(ltb[1].abs() < 1e-14);
    }

    #[test]
    fn l_entries_match_independent_quadrature() {
        // Cross-check int l_i' l_j with finite-difference derivatives and
        // composite Simpson, independent of the assembly path.
        let p = 2;
        let t = tab(p);
        let basis = LagrangeBasis::new(t.nodes.clone()).unwrap();
        let h = 1e-6;
        let n_panels = 2000;
        for i in 0..=p {
            for j in 0..=p {
                let f = |x: f64| {
                    let d = (basis.eval_all(x + h)[i] - basis.eval_all(x - h)[i]) / (2.0 * h);
                    d * basis.eval_all(x)[j]
                };
                let mut acc = 0.0;
                let w = 2.0 / n_panels as f64;
                for k in 0..n_panels {
                    let a = -1.0 + k as f64 * w;
                    acc += w / 6.0 * (f(a) + 4.0 * f(a + w / 2.0) + f(a + w));
                }
                if i == p && j == p {
                    acc -= 1.0;
                }
                assert!(
                    (t.l_mat[(i, j)] - acc).abs() < 1e-8,
                    "L[{i}][{j}] = {} vs oracle {acc}",
                    t.l_mat[(i, j)]
                );
            }
        }
    }

    #[test]
    fn l_tilde_identity_for_all_degrees() {
        for p in 1..=5 {
            let t = tab(p);
            let prod = t.l_tilde.matmul(&t.l_mat);
            for i in 0..=p {
                for j in 0..=p {
                    assert!(
                        (prod[(i, j)] - t.l_delta[(i, j)]).abs() < 1e-12,
                        "p={p} entry ({i},{j})"
                    );
                }
            }
            let ltb = t.l_tilde.matvec(&t.trace_left);
            assert!((ltb[0] - 1.0).abs() < 1e-12);
            for m in 1..=p {
                assert!(ltb[m].abs() < 1e-12);
            }
            assert!(t.cond_l.is_finite() && t.cond_l > 0.0);
        }
    }

    #[test]
    fn predictor_examples() {
        let t = tab(1);
        // rhs = 0 keeps every stage at u_n.
        let state = t
            .predict(&2.5, 0.0, 0.4, &mut |_t: f64, _u: &f64| 0.0)
            .unwrap();
        assert!(state.stages.iter().all(|&u| u == 2.5));

        // u' = -u with the first Radau gap dt/3.
        let dt = 0.3;
        let state = t
            .predict(&1.0, 0.0, dt, &mut |_t: f64, u: &f64| -u)
            .unwrap();
        assert!((state.stages[0] - (1.0 - dt / 3.0)).abs() < 1e-15);

        // Euler marching is affine in u_n.
        let run = |u0: f64| {
            t.predict(&u0, 0.0, dt, &mut |_t: f64, u: &f64| -u)
                .unwrap()
                .stages[1]
        };
        let (a, b, c) = (run(0.0), run(1.0), run(2.0));
        assert!((c - 2.0 * b + a).abs() < 1e-14);
    }

    #[test]
    fn sweep_keeps_zero_rhs_constant() {
        let t = tab(2);
        let mut rhs = |_t: f64, _u: &f64| 0.0;
        let mut state = t.predict(&1.25, 0.0, 0.5, &mut rhs).unwrap();
        t.complete_cache(&mut state, 0.0, 0.5, &mut rhs);
        let next = t.sweep(&state, &1.25, 0.0, 0.5, &mut rhs).unwrap();
        assert!(next.stages.iter().all(|&u| u == 1.25));
    }

    #[test]
    fn sweep_fixes_collocation_solution() {
        for p in 1..=3 {
            let t = tab(p);
            let (u_n, dt, lambda) = (0.8, 0.3, -1.0);
            let stages = t.collocation_solve(u_n, dt, lambda).unwrap();
            let mut rhs = |_t: f64, u: &f64| lambda * u;
            let mut state = SweepState {
                stages: stages.clone(),
                fvals: vec![None; p + 1],
            };
            t.complete_cache(&mut state, 0.0, dt, &mut rhs);
            let next = t.sweep(&state, &u_n, 0.0, dt, &mut rhs).unwrap();
            for m in 0..=p {
                assert!(
                    (next.stages[m] - stages[m]).abs() < 1e-11,
                    "p={p} stage {m}: {} vs {}",
                    next.stages[m],
                    stages[m]
                );
            }
        }
    }

    #[test]
    fn collocation_examples() {
        let t = tab(2);
        // lambda = 0 keeps the constant.
        let u = t.collocation_solve(3.0, 0.5, 0.0).unwrap();
        assert!(u.iter().all(|&v| (v - 3.0).abs() < 1e-14));

        // The defining residual L U + (dt/2) F(U) + B = 0.
        let (u_n, dt, lambda) = (1.0, 0.4, -1.0);
        let u = t.collocation_solve(u_n, dt, lambda).unwrap();
        let lu = t.l_mat.matvec(&u);
        for m in 0..=2 {
            let res = lu[m] + dt / 2.0 * t.weights[m] * lambda * u[m] + u_n * t.trace_left[m];
            assert!(res.abs() < 1e-12, "residual {res:e}");
        }
    }

    #[test]
    fn collocation_endpoint_superconvergence() {
        // Marching with the exact collocation step converges globally at
        // 2p+1 (Radau superconvergence at the right endpoint).
        let p = 2;
        let t = tab(p);
        let lambda = -1.0;
        let err = |dt: f64| {
            let m = (1.0 / dt).round() as usize;
            let mut u = 1.0;
            for _ in 0..m {
                u = *t.collocation_solve(u, dt, lambda).unwrap().last().unwrap();
            }
            (u - (-1.0_f64).exp()).abs()
        };
        let (e1, e2) = (err(0.2), err(0.1));
        let order = (e1 / e2).log2();
        assert!(
            (order - (2 * p + 1) as f64).abs() < 0.4,
            "order {order}, errors {e1:e}/{e2:e}"
        );
    }

    #[test]
    fn step_examples_and_affinity() {
        let t = tab(2);
        let mut zero = |_t: f64, _u: &f64| 0.0;
        assert_eq!(t.step(&1.5, 0.0, 0.3, 4, &mut zero).unwrap(), 1.5);
        assert!(t.step(&1.5, 0.0, 0.3, 0, &mut zero).is_err());

        // The step is affine in u_n on a linear problem:
        // step(c) = step(0) + c (step(1) - step(0)).
        let mut s = |u0: f64| {
            t.step(&u0, 0.0, 0.25, 3, &mut |_t: f64, u: &f64| -0.7 * u)
                .unwrap()
        };
        let (s0, s1, s5) = (s(0.0), s(1.0), s(5.0));
        assert!((s5 - (s0 + 5.0 * (s1 - s0))).abs() < 1e-12);
    }

    #[test]
    fn many_sweeps_reach_collocation_fixed_point() {
        let p = 2;
        let t = tab(p);
        let (dt, lambda) = (0.2, -1.0);
        let target = t.collocation_solve(1.0, dt, lambda).unwrap()[p];
        let got = t
            .step(&1.0, 0.0, dt, 40, &mut |_t: f64, u: &f64| lambda * u)
            .unwrap();
        assert!((got - target).abs() < 1e-12, "{got} vs {target}");
    }

    #[test]
    fn order_ladder_small() {
        // Predictor-only order 1 baseline is raised by one per sweep.
        let p = 2;
        let t = tab(p);
        let run = |sweeps: usize, dt: f64| {
            let m = (1.0 / dt).round() as usize;
            let mut u = 1.0;
            let mut time = 0.0;
            for _ in 0..m {
                u = t
                    .step(&u, time, dt, sweeps, &mut |_t: f64, v: &f64| -v)
                    .unwrap();
                time += dt;
            }
            (u - (-1.0_f64).exp()).abs()
        };
        for sweeps in 1..=3 {
            // Slopes are read off the finest pair; coarser pairs still sit
            // in the transition between consecutive orders.
            let e1 = run(sweeps, 0.025);
            let e2 = run(sweeps, 0.0125);
            let order = (e1 / e2).log2();
            let want = (sweeps + 1) as f64;
            assert!(
                (order - want).abs() < 0.35,
                "sweeps {sweeps}: order {order} want {want}"
            );
        }
    }

    #[test]
    fn uniform_nodes_cap_the_order() {
        // Rebuilding on uniform nodes must drop superconvergence to ~p+1.
        let p = 2;
        let nodes: Vec<f64> = (1..=p + 1)
            .map(|m| -1.0 + 2.0 * m as f64 / (p as f64 + 1.0))
            .collect();
        let basis = LagrangeBasis::new(nodes.clone()).unwrap();
        let quad = gauss_legendre::<f64>(p + 2).unwrap();
        let weights: Vec<f64> = (0..=p)
            .map(|j| {
                quad.nodes
                    .iter()
                    .zip(&quad.weights)
                    .map(|(&x, &w)| w * basis.eval_all(x)[j])
                    .sum()
            })
            .collect();
        let t = SdgTableau::from_nodes(nodes, weights).unwrap();
        let run = |dt: f64| {
            let m = (1.0 / dt).round() as usize;
            let mut u = 1.0;
            let mut time = 0.0;
            for _ in 0..m {
                u = t
                    .step(&u, time, dt, 2 * p, &mut |_t: f64, v: &f64| -v)
                    .unwrap();
                time += dt;
            }
            (u - (-1.0_f64).exp()).abs()
        };
        let order = (run(0.1) / run(0.05)).log2();
        assert!(
            order <= p as f64 + 1.0 + 0.3,
            "uniform-node order {order} should cap near {}",
            p + 1
        );
    }
}
