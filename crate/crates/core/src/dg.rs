//! DG approximation space on a uniform periodic mesh: modal solutions,
//! L2 projection and errors, interface traces, and the semi-discrete
//! operator obtained from the weak form with a Lax-Friedrichs flux.
//!
//! Each element carries p+1 coefficients in the orthonormal Legendre basis,
//! so projection and mass are diagonal operations.

use crate::flux::{lax_friedrichs, Flux};
use crate::legendre;
use crate::linalg::Mat;
use crate::mesh::Mesh;
use crate::quadrature::gauss_legendre;
use crate::real::Real;
use crate::state::OdeState;

#[derive(Clone, Debug)]
pub struct DgSolution<S> {
    pub mesh: Mesh<S>,
    pub degree: usize,
    /// N x (p+1) modal coefficients, row-major by element.
    pub coeffs: Vec<S>,
    pub time: S,
}

impl<S: Real> DgSolution<S> {
    pub fn zeros(mesh: Mesh<S>, degree: usize) -> Self {
        Self {
            mesh,
            degree,
            coeffs: vec![S::zero(); mesh.n * (degree + 1)],
            time: S::zero(),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.degree + 1
    }

    pub fn element(&self, j: usize) -> &[S] {
        let nm = self.n_modes();
        &self.coeffs[j * nm..(j + 1) * nm]
    }

    pub fn element_mut(&mut self, j: usize) -> &mut [S] {
        let nm = self.n_modes();
        &mut self.coeffs[j * nm..(j + 1) * nm]
    }

    /// Evaluate on element j at reference coordinate xi.
    pub fn eval_ref(&self, j: usize, xi: S) -> S {
        let phi = legendre::eval(self.degree, xi);
        self.element(j)
            .iter()
            .zip(&phi)
            .fold(S::zero(), |acc, (&c, &v)| acc + c * v)
    }

    /// Evaluate at a physical point with periodic wrapping.
    pub fn eval_periodic(&self, x: S) -> S {
        let (j, xi) = self.mesh.locate_periodic(x);
        self.eval_ref(j, xi)
    }

    /// Traces (u-, u+) at interface j for 0 <= j <= N with periodic wrap:
    /// u- from the element left of the interface at its right endpoint,
    /// u+ from the element right of it at its left endpoint.
    pub fn traces(&self, j: usize) -> (S, S) {
        let n = self.mesh.n;
        let left_elem = (j + n - 1) % n;
        let right_elem = j % n;
        (
            self.eval_ref(left_elem, S::one()),
            self.eval_ref(right_elem, -S::one()),
        )
    }
}

impl<S: Real> OdeState<S> for DgSolution<S> {
    fn scaled_add(&mut self, a: S, other: &Self) {
        debug_assert_eq!(self.coeffs.len(), other.coeffs.len());
        for (c, &o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *c += a * o;
        }
    }

    fn scale(&mut self, a: S) {
        for c in self.coeffs.iter_mut() {
            *c *= a;
        }
    }

    fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| Real::is_finite(*c))
    }

    fn l2_dist(&self, other: &Self) -> S {
        let mut acc = S::zero();
        for (&a, &b) in self.coeffs.iter().zip(&other.coeffs) {
            let d = a - b;
            acc += d * d;
        }
        acc.sqrt()
    }
}

/// Element-wise L2 projection of `f` onto V_h using a (p+2)-point Gauss rule.
pub fn l2_project<S: Real, F: Fn(S) -> S>(f: F, mesh: Mesh<S>, degree: usize) -> DgSolution<S> {
    let rule = gauss_legendre::<S>(degree + 2).expect("rule size >= 1");
    let phi: Vec<Vec<S>> = rule.nodes.iter().map(|&t| legendre::eval(degree, t)).collect();
    let mut sol = DgSolution::zeros(mesh, degree);
    for j in 0..mesh.n {
        let elem = sol.element_mut(j);
        for (q, (&t, &w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
            let x = mesh.to_physical(j, t);
            let fx = f(x);
            for (m, c) in elem.iter_mut().enumerate() {
                *c += w * fx * phi[q][m];
            }
        }
    }
    sol
}

/// Continuous L2 error against `exact`, via a (p+3)-point Gauss rule
/// per element.
pub fn l2_error<S: Real, F: Fn(S) -> S>(sol: &DgSolution<S>, exact: F) -> S {
    let rule = gauss_legendre::<S>(sol.degree + 3).expect("rule size >= 1");
    let phi: Vec<Vec<S>> = rule
        .nodes
        .iter()
        .map(|&t| legendre::eval(sol.degree, t))
        .collect();
    let mut acc = S::zero();
    for j in 0..sol.mesh.n {
        let elem = sol.element(j);
        for (q, (&t, &w)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
            let x = sol.mesh.to_physical(j, t);
            let uh = elem
                .iter()
                .zip(&phi[q])
                .fold(S::zero(), |a, (&c, &v)| a + c * v);
            let d = uh - exact(x);
            acc += w * d * d;
        }
    }
    (acc * sol.mesh.dx.half()).sqrt()
}

/// Total integral of the solution over the domain. Exact: only the mean
/// mode contributes, with int_el phi_0 dx = dx / sqrt(2).
pub fn total_mass<S: Real>(sol: &DgSolution<S>) -> S {
    let nm = sol.n_modes();
    let mut sum = S::zero();
    for j in 0..sol.mesh.n {
        sum += sol.coeffs[j * nm];
    }
    sum * sol.mesh.dx / S::from_int(2).sqrt()
}

/// Frozen global wave-speed bound: max |f'(u)| over volume quadrature points
/// and interface traces.
pub fn max_wave_speed<S: Real>(sol: &DgSolution<S>, flux: &Flux<S>) -> S {
    let rule = gauss_legendre::<S>(sol.degree + 2).expect("rule size >= 1");
    let t = sol.time;
    let mut alpha = S::zero();
    for j in 0..sol.mesh.n {
        for &xi in &rule.nodes {
            let x = sol.mesh.to_physical(j, xi);
            alpha = alpha.max(flux.dfdu(sol.eval_ref(j, xi), x, t).abs());
        }
        let xl = sol.mesh.x_left(j);
        alpha = alpha.max(flux.dfdu(sol.eval_ref(j, -S::one()), xl, t).abs());
        let xr = sol.mesh.x_left(j + 1);
        alpha = alpha.max(flux.dfdu(sol.eval_ref(j, S::one()), xr, t).abs());
    }
    alpha
}

/// Precomputed tables for repeated evaluations of the semi-discrete operator.
pub struct DgOperator<S> {
    pub mesh: Mesh<S>,
    pub degree: usize,
    pub flux: Flux<S>,
    vol_nodes: Vec<S>,
    vol_weights: Vec<S>,
    /// phi[(q, m)] = phi_m(xi_q)
    phi: Mat<S>,
    dphi: Mat<S>,
    phi_left: Vec<S>,
    phi_right: Vec<S>,
}

impl<S: Real> DgOperator<S> {
    pub fn new(mesh: Mesh<S>, degree: usize, flux: Flux<S>) -> Self {
        let rule = gauss_legendre::<S>(degree + 2).expect("rule size >= 1");
        let nq = rule.len();
        let nm = degree + 1;
        let mut phi = Mat::zeros(nq, nm);
        let mut dphi = Mat::zeros(nq, nm);
        for (q, &t) in rule.nodes.iter().enumerate() {
            let (vals, ders) = legendre::eval_with_deriv(degree, t);
            for m in 0..nm {
                phi[(q, m)] = vals[m];
                dphi[(q, m)] = ders[m];
            }
        }
        Self {
            mesh,
            degree,
            flux,
            vol_nodes: rule.nodes,
            vol_weights: rule.weights,
            phi,
            dphi,
            phi_left: legendre::eval(degree, -S::one()),
            phi_right: legendre::eval(degree, S::one()),
        }
    }

    /// The semi-discrete right-hand side d/dt u_h = L_h(t, u_h).
    ///
    /// alpha is recomputed once per evaluation (global Lax-Friedrichs).
    pub fn rhs(&self, t: S, u: &DgSolution<S>) -> DgSolution<S> {
        let n = self.mesh.n;
        let nm = self.degree + 1;
        let nq = self.vol_nodes.len();
        debug_assert_eq!(u.coeffs.len(), n * nm);

        // Interface traces.
        let mut tr_left = vec![S::zero(); n];
        let mut tr_right = vec![S::zero(); n];
        for j in 0..n {
            let elem = u.element(j);
            let mut ul = S::zero();
            let mut ur = S::zero();
            for m in 0..nm {
                ul += elem[m] * self.phi_left[m];
                ur += elem[m] * self.phi_right[m];
            }
            tr_left[j] = ul;
            tr_right[j] = ur;
        }

        // Volume quadrature values of u_h.
        let mut uq = vec![S::zero(); n * nq];
        for j in 0..n {
            let elem = u.element(j);
            for q in 0..nq {
                let mut v = S::zero();
                for m in 0..nm {
                    v += elem[m] * self.phi[(q, m)];
                }
                uq[j * nq + q] = v;
            }
        }

        // Global wave speed over quadrature points and traces.
        let mut alpha = S::zero();
        for j in 0..n {
            for q in 0..nq {
                let x = self.mesh.to_physical(j, self.vol_nodes[q]);
                alpha = alpha.max(self.flux.dfdu(uq[j * nq + q], x, t).abs());
            }
            let xl = self.mesh.x_left(j);
            let xr = self.mesh.x_left(j + 1);
            alpha = alpha.max(self.flux.dfdu(tr_left[j], xl, t).abs());
            alpha = alpha.max(self.flux.dfdu(tr_right[j], xr, t).abs());
        }

        // Numerical fluxes; interface i is the left edge of element i.
        let mut fhat = vec![S::zero(); n];
        for i in 0..n {
            let um = tr_right[(i + n - 1) % n];
            let up = tr_left[i];
            let x = self.mesh.x_left(i);
            fhat[i] = lax_friedrichs(&self.flux, um, up, alpha, x, t);
        }

        let mut rate = DgSolution::zeros(self.mesh, self.degree);
        rate.time = t;
        let two_over_dx = S::from_int(2) / self.mesh.dx;
        let mut fq = vec![S::zero(); nq];
        for j in 0..n {
            for q in 0..nq {
                let x = self.mesh.to_physical(j, self.vol_nodes[q]);
                fq[q] = self.flux.value(uq[j * nq + q], x, t);
            }
            let fl = fhat[j];
            let fr = fhat[(j + 1) % n];
            let elem = rate.element_mut(j);
            for m in 0..nm {
                let mut vol = S::zero();
                for q in 0..nq {
                    vol += self.vol_weights[q] * fq[q] * self.dphi[(q, m)];
                }
                elem[m] = two_over_dx * (vol + fl * self.phi_left[m] - fr * self.phi_right[m]);
            }
            if let Flux::VariableCoefficient = self.flux {
                for q in 0..nq {
                    let x = self.mesh.to_physical(j, self.vol_nodes[q]);
                    let g = self.flux.source(x, t).expect("variable coefficient source");
                    let wg = self.vol_weights[q] * g;
                    for m in 0..nm {
                        elem[m] += wg * self.phi[(q, m)];
                    }
                }
            }
        }
        rate
    }
}

/// One-off evaluation of the semi-discrete operator (tests and diagnostics;
/// time loops should hold a [`DgOperator`]).
pub fn semidiscrete_rhs<S: Real>(sol: &DgSolution<S>, t: S, flux: &Flux<S>) -> DgSolution<S> {
    DgOperator::new(sol.mesh, sol.degree, *flux).rhs(t, sol)
}
