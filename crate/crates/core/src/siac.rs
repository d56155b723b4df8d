//! SIAC post-processing: central B-splines, the symmetric convolution kernel
//! K^(2p+1, p+1), and exact evaluation of the filtered solution
//! u* = K_h * u_h on the uniform periodic mesh.
//!
//! All convolution integrals are done in physical space with piecewise
//! quadrature split at every kernel breakpoint and mesh interface, so each
//! sub-integrand is a polynomial handled exactly by the Gauss rule.

use crate::dg::DgSolution;
use crate::legendre;
use crate::linalg::Mat;
use crate::quadrature::gauss_legendre;
use crate::real::Real;
use crate::{Error, Result};

/// Central B-spline of order `ell` (degree ell-1, support [-ell/2, ell/2])
/// via the two-term recursion.
pub fn bspline_eval<S: Real>(ell: usize, x: S) -> Result<S> {
    if ell == 0 {
        return Err(Error::InvalidArgument(
            "B-spline order must be at least 1".into(),
        ));
    }
    Ok(bspline_rec(ell, x))
}

fn bspline_rec<S: Real>(ell: usize, x: S) -> S {
    let half = S::from_f64(0.5);
    if ell == 1 {
        // Half-open indicator: the recursion samples exactly at the
        // breakpoints, and [-1/2, 1/2) is the convention that makes it
        // reproduce the continuous higher-order splines there.
        return if x >= -half && x < half { S::one() } else { S::zero() };
    }
    // Outside the support, skip the recursion.
    let bound = S::from_int(ell as i64).half();
    if x.abs() > bound {
        return S::zero();
    }
    // psi^(L+1)(x) = [((L+1)/2 + x) psi^L(x+1/2) + ((L+1)/2 - x) psi^L(x-1/2)] / L
    let l = S::from_int(ell as i64 - 1);
    let c = (l + S::one()).half();
    ((c + x) * bspline_rec(ell - 1, x + half) + (c - x) * bspline_rec(ell - 1, x - half)) / l
}

/// Raw moments m_t = int psi^(ell)(y) y^t dy for t = 0..=t_max, by exact
/// piecewise Gauss quadrature over the spline's unit polynomial pieces.
fn bspline_moments<S: Real>(ell: usize, t_max: usize) -> Vec<S> {
    let deg = (ell - 1) + t_max;
    let rule = gauss_legendre::<S>(deg / 2 + 1).expect("rule size >= 1");
    let mut moments = vec![S::zero(); t_max + 1];
    let lo = -S::from_int(ell as i64).half();
    for k in 0..ell {
        let a = lo + S::from_int(k as i64);
        let b = a + S::one();
        for t in 0..=t_max {
            moments[t] += rule.integrate(a, b, |y| bspline_rec(ell, y) * y.powi(t as i32));
        }
    }
    moments
}

/// Kernel coefficients c_gamma from the moment conditions K * x^r = x^r,
/// r = 0..2p (equivalently: unit mass and vanishing moments 1..2p).
pub fn kernel_coefficients<S: Real>(p: usize) -> Result<Vec<S>> {
    if p < 1 {
        return Err(Error::InvalidArgument("kernel needs p >= 1".into()));
    }
    let n = 2 * p + 1;
    let m = bspline_moments::<S>(p + 1, 2 * p);
    // Moment of the spline shifted to gamma - p:
    // int psi(y - a) y^s dy = sum_t C(s, t) a^(s-t) m_t.
    let binom = pascal::<S>(2 * p);
    let mut a_mat = Mat::zeros(n, n);
    for s in 0..n {
        for gamma in 0..n {
            let shift = S::from_int(gamma as i64 - p as i64);
            let mut acc = S::zero();
            for t in 0..=s {
                acc += binom[s][t] * shift.powi((s - t) as i32) * m[t];
            }
            a_mat[(s, gamma)] = acc;
        }
    }
    let mut rhs = vec![S::zero(); n];
    rhs[0] = S::one();
    let lu = a_mat
        .lu()
        .map_err(|_| Error::Construction("singular kernel moment system".into()))?;
    Ok(lu.solve(&rhs))
}

fn pascal<S: Real>(n: usize) -> Vec<Vec<S>> {
    let mut rows: Vec<Vec<S>> = Vec::with_capacity(n + 1);
    for s in 0..=n {
        let mut row = vec![S::one(); s + 1];
        for t in 1..s {
            row[t] = rows[s - 1][t - 1] + rows[s - 1][t];
        }
        rows.push(row);
    }
    rows
}

/// The symmetric SIAC kernel: 2p+1 central B-splines of order p+1 at
/// integer shifts -p..p.
#[derive(Clone, Debug)]
pub struct SiacKernel<S> {
    pub p: usize,
    pub coeffs: Vec<S>,
}

impl<S: Real> SiacKernel<S> {
    pub fn new(p: usize) -> Result<Self> {
        Ok(Self {
            p,
            coeffs: kernel_coefficients(p)?,
        })
    }

    /// Support half-width (3p+1)/2 in kernel coordinates.
    pub fn support_half_width(&self) -> S {
        S::from_int(3 * self.p as i64 + 1).half()
    }

    pub fn eval(&self, y: S) -> S {
        let ell = self.p + 1;
        let mut acc = S::zero();
        for (gamma, &c) in self.coeffs.iter().enumerate() {
            let shift = S::from_int(gamma as i64 - self.p as i64);
            acc += c * bspline_rec(ell, y - shift);
        }
        acc
    }

    /// Breakpoint lattice of the kernel: (3p+2) unit-spaced points spanning
    /// the support.
    pub fn breakpoints(&self) -> Vec<S> {
        let lo = -self.support_half_width();
        (0..=3 * self.p + 1)
            .map(|k| lo + S::from_int(k as i64))
            .collect()
    }
}

/// Filtered value u*(x) by direct convolution with kernel scaling h = dx and
/// periodic wrapping of u_h. Exact piecewise quadrature.
pub fn postprocess_point<S: Real>(sol: &DgSolution<S>, kernel: &SiacKernel<S>, x: S) -> S {
    let p = kernel.p;
    let h = sol.mesh.dx;
    let half_width = kernel.support_half_width();

    // Split points: kernel breakpoints plus mesh interfaces expressed in
    // kernel coordinates y = (x - xi)/h.
    let mut breaks = kernel.breakpoints();
    let rel = (x - sol.mesh.a) / h;
    let j_lo = (rel - half_width).floor().to_f64() as i64;
    let j_hi = (rel + half_width).floor().to_f64() as i64 + 1;
    for j in j_lo..=j_hi {
        let y = rel - S::from_int(j);
        if y > -half_width && y < half_width {
            breaks.push(y);
        }
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));

    let rule = gauss_legendre::<S>(p + 2).expect("rule size >= 1");
    let tiny = S::epsilon() * S::from_int(64);
    let mut acc = S::zero();
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b - a <= tiny {
            continue;
        }
        acc += rule.integrate(a, b, |y| kernel.eval(y) * sol.eval_periodic(x - h * y));
    }
    acc
}

/// Precomputed filter weights for a fixed set of reference evaluation
/// points. On a uniform mesh the convolution geometry repeats element to
/// element, so u*(x_{j,q}) is the same linear combination of neighbouring
/// coefficients for every j.
pub struct SiacFilter<S> {
    pub kernel: SiacKernel<S>,
    degree: usize,
    ref_points: Vec<S>,
    /// weights[q][k][m] pairs with element offset `offsets[k]`, mode m.
    weights: Vec<Vec<Vec<S>>>,
    offsets: Vec<i64>,
}

impl<S: Real> SiacFilter<S> {
    pub fn new(degree: usize, ref_points: Vec<S>) -> Result<Self> {
        let kernel: SiacKernel<S> = SiacKernel::new(degree)?;
        let p = degree;
        let half_width = kernel.support_half_width();
        let rule = gauss_legendre::<S>(p + 2)?;

        // Work on a virtual unit mesh: the evaluation element is [0, 1].
        let off_lo = (-half_width).floor().to_f64() as i64 - 1;
        let off_hi = (S::one() + half_width).floor().to_f64() as i64 + 1;
        let offsets: Vec<i64> = (off_lo..=off_hi).collect();
        let tiny = S::epsilon() * S::from_int(64);

        let mut weights = Vec::with_capacity(ref_points.len());
        for &xi in &ref_points {
            let x0 = (xi + S::one()).half();
            let mut breaks = kernel.breakpoints();
            for e in off_lo..=off_hi + 1 {
                let y = x0 - S::from_int(e);
                if y > -half_width && y < half_width {
                    breaks.push(y);
                }
            }
            breaks.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));

            let mut w_q = vec![vec![S::zero(); p + 1]; offsets.len()];
            for win in breaks.windows(2) {
                let (a, b) = (win[0], win[1]);
                if b - a <= tiny {
                    continue;
                }
                let half = (b - a).half();
                let mid = (a + b).half();
                for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
                    let y = mid + half * t;
                    let xv = x0 - y;
                    let e = xv.floor().to_f64() as i64;
                    let local = (xv - S::from_int(e)) * S::from_int(2) - S::one();
                    let k = (e - off_lo) as usize;
                    let kv = w * half * kernel.eval(y);
                    let phi = legendre::eval(p, local);
                    for m in 0..=p {
                        w_q[k][m] += kv * phi[m];
                    }
                }
            }
            weights.push(w_q);
        }
        Ok(Self {
            kernel,
            degree,
            ref_points,
            weights,
            offsets,
        })
    }

    pub fn ref_points(&self) -> &[S] {
        &self.ref_points
    }

    /// Filtered values at every reference point of element j.
    pub fn values_in_element(&self, sol: &DgSolution<S>, j: usize) -> Vec<S> {
        debug_assert_eq!(sol.degree, self.degree);
        let n = sol.mesh.n as i64;
        let nm = self.degree + 1;
        self.weights
            .iter()
            .map(|w_q| {
                let mut acc = S::zero();
                for (k, &off) in self.offsets.iter().enumerate() {
                    let e = (((j as i64 + off) % n) + n) % n;
                    let elem = sol.element(e as usize);
                    for m in 0..nm {
                        acc += w_q[k][m] * elem[m];
                    }
                }
                acc
            })
            .collect()
    }
}

/// A pointwise error sample of the raw and filtered solutions.
#[derive(Clone, Copy, Debug)]
pub struct PointError {
    pub x: f64,
    pub dg_error: f64,
    pub filtered_error: f64,
}

/// L2 error of the filtered solution plus pointwise samples (p+2 per
/// element) for plot emission.
///
/// The L2 quadrature uses (p+3)-point Gauss per half element: for even p the
/// filtered field has its spline knots at element midpoints, so splitting
/// keeps each sub-integrand smooth.
pub fn postprocess_errors<S: Real, F: Fn(S) -> S>(
    sol: &DgSolution<S>,
    exact: F,
) -> Result<(S, Vec<PointError>)> {
    let p = sol.degree;
    let err_rule = gauss_legendre::<S>(p + 3)?;
    let one = S::one();
    // Reference points of both half-element rules, then the sample points.
    let mut ref_points = Vec::new();
    let mut ref_weights = Vec::new();
    for (&t, &w) in err_rule.nodes.iter().zip(&err_rule.weights) {
        ref_points.push((t - one).half());
        ref_weights.push(w.half());
    }
    for (&t, &w) in err_rule.nodes.iter().zip(&err_rule.weights) {
        ref_points.push((t + one).half());
        ref_weights.push(w.half());
    }
    let sample_rule = gauss_legendre::<S>(p + 2)?;
    let n_err = ref_points.len();
    ref_points.extend_from_slice(&sample_rule.nodes);

    let filter = SiacFilter::new(p, ref_points)?;
    let mut acc = S::zero();
    let mut samples = Vec::with_capacity(sol.mesh.n * (p + 2));
    for j in 0..sol.mesh.n {
        let vals = filter.values_in_element(sol, j);
        for q in 0..n_err {
            let x = sol.mesh.to_physical(j, filter.ref_points()[q]);
            let d = vals[q] - exact(x);
            acc += ref_weights[q] * d * d;
        }
        for q in n_err..vals.len() {
            let xi = filter.ref_points()[q];
            let x = sol.mesh.to_physical(j, xi);
            let ex = exact(x);
            samples.push(PointError {
                x: x.to_f64(),
                dg_error: (sol.eval_ref(j, xi) - ex).abs().to_f64(),
                filtered_error: (vals[q] - ex).abs().to_f64(),
            });
        }
    }
    Ok(((acc * sol.mesh.dx.half()).sqrt(), samples))
}

/// L2 error of the filtered solution only.
pub fn postprocess_l2_error<S: Real, F: Fn(S) -> S>(sol: &DgSolution<S>, exact: F) -> Result<S> {
    postprocess_errors(sol, exact).map(|(e, _)| e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::{l2_project, total_mass};
    use crate::mesh::Mesh;

    #[test]
    fn bspline_base_case() {
        assert_eq!(bspline_eval(1, 0.4).unwrap(), 1.0);
        assert_eq!(bspline_eval(1, 0.6).unwrap(), 0.0);
        assert!(bspline_eval::<f64>(0, 0.0).is_err());
    }

    #[test]
    fn hat_apex() {
        assert!((bspline_eval(2, 0.0).unwrap() - 1.0_f64).abs() < 1e-15);
        assert!((bspline_eval(2, 0.5).unwrap() - 0.5_f64).abs() < 1e-15);
    }

    #[test]
    fn unit_mass_up_to_order_six() {
        // Composite oracle, independent of the Gauss machinery. The order-1
        // spline is an indicator, so midpoint sampling avoids its endpoint
        // convention; the smooth orders use Simpson on breakpoint-aligned
        // panels.
        for ell in 1..=6 {
            let panels = 24000;
            let lo = -(ell as f64) / 2.0;
            let w = (ell as f64) / panels as f64;
            let f = |x: f64| bspline_eval(ell, x).unwrap();
            // Kahan summation keeps the oracle's own rounding below the
            // tolerance it checks.
            let mut acc = 0.0;
            let mut comp = 0.0;
            for k in 0..panels {
                let a = lo + k as f64 * w;
                let contrib = if ell == 1 {
                    w * f(a + w / 2.0)
                } else {
                    w / 6.0 * (f(a) + 4.0 * f(a + w / 2.0) + f(a + w))
                };
                let y = contrib - comp;
                let t = acc + y;
                comp = (t - acc) - y;
                acc = t;
            }
            assert!((acc - 1.0).abs() < 1e-13, "order {ell}: mass {acc}");
        }
    }

    #[test]
    fn nonnegative_and_compact() {
        for ell in 1..=6 {
            let half = ell as f64 / 2.0;
            for i in 0..200 {
                let x = -4.0 + 8.0 * i as f64 / 199.0;
                let v = bspline_eval(ell, x).unwrap();
                assert!(v >= 0.0);
                if x.abs() > half + 1e-12 {
                    assert_eq!(v, 0.0);
                }
            }
        }
    }

    #[test]
    fn p1_coefficients_match_moment_solve() {
        let c = kernel_coefficients::<f64>(1).unwrap();
        assert!((c[0] + 1.0 / 12.0).abs() < 1e-13);
        assert!((c[1] - 7.0 / 6.0).abs() < 1e-13);
        assert!((c[2] + 1.0 / 12.0).abs() < 1e-13);
    }

    #[test]
    fn coefficients_sum_to_one_and_are_symmetric() {
        for p in 1..=4 {
            let c = kernel_coefficients::<f64>(p).unwrap();
            let sum: f64 = c.iter().sum();
            assert!((sum - 1.0).abs() < 1e-12, "p={p} sum {sum}");
            for g in 0..=2 * p {
                assert!((c[g] - c[2 * p - g]).abs() < 1e-12, "p={p} gamma={g}");
            }
        }
    }

    /// Brute-force convolution (K * x^r)(x0) over the kernel pieces.
    fn convolve_monomial(kernel: &SiacKernel<f64>, r: usize, x0: f64) -> f64 {
        let rule = gauss_legendre::<f64>(3 * kernel.p / 2 + 3).unwrap();
        let breaks = kernel.breakpoints();
        let mut acc = 0.0;
        for w in breaks.windows(2) {
            acc += rule.integrate(w[0], w[1], |y| kernel.eval(y) * (x0 - y).powi(r as i32));
        }
        acc
    }

    #[test]
    fn kernel_reproduces_polynomials_by_convolution() {
        // Fixed xorshift stream for the sample points.
        let mut s = 0x9e3779b97f4a7c15_u64;
        let mut rand = move || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 * 4.0 - 2.0
        };
        for p in 1..=4 {
            let kernel = SiacKernel::<f64>::new(p).unwrap();
            for _ in 0..20 {
                let x0 = rand();
                for r in 0..=2 * p {
                    let got = convolve_monomial(&kernel, r, x0);
                    assert!(
                        (got - x0.powi(r as i32)).abs() < 1e-11,
                        "p={p} r={r} x0={x0}: {got}"
                    );
                }
            }
        }
    }

    #[test]
    fn filtered_projection_reproduces_polynomials() {
        // Project x^r on a wider non-periodic extension and filter interior
        // points so the wrap never touches the boundary data.
        for p in 1..=3usize {
            let mesh = Mesh::new(-2.0, 3.0, 50).unwrap();
            let kernel = SiacKernel::<f64>::new(p).unwrap();
            for r in 0..=2 * p {
                let f = move |x: f64| x.powi(r as i32);
                let sol = l2_project(f, mesh, p);
                for &x in &[0.05, 0.31, 0.5, 0.77, 0.93] {
                    let got = postprocess_point(&sol, &kernel, x);
                    assert!(
                        (got - f(x)).abs() < 1e-11,
                        "p={p} r={r} x={x}: err {:e}",
                        (got - f(x)).abs()
                    );
                }
            }
        }
    }

    #[test]
    fn constant_passes_through() {
        let mesh = Mesh::new(0.0, 1.0, 20).unwrap();
        let sol = l2_project(|_| 2.5, mesh, 2);
        let kernel = SiacKernel::<f64>::new(2).unwrap();
        for &x in &[0.0, 0.13, 0.5, 0.99] {
            assert!((postprocess_point(&sol, &kernel, x) - 2.5).abs() < 1e-12);
        }
    }

    #[test]
    fn filter_matrix_agrees_with_direct_convolution() {
        let p = 2;
        let mesh = Mesh::new(0.0, 1.0, 20).unwrap();
        let sol = l2_project(|x| (2.0 * std::f64::consts::PI * x).sin(), mesh, p);
        let ref_points = vec![-0.7, 0.0, 0.42];
        let filter = SiacFilter::new(p, ref_points.clone()).unwrap();
        for j in [0usize, 7, 19] {
            let fast = filter.values_in_element(&sol, j);
            for (q, &xi) in ref_points.iter().enumerate() {
                let x = mesh.to_physical(j, xi);
                let slow = postprocess_point(&sol, &filter.kernel, x);
                assert!(
                    (fast[q] - slow).abs() < 1e-12,
                    "element {j} point {q}: {} vs {}",
                    fast[q],
                    slow
                );
            }
        }
    }

    #[test]
    fn filtering_preserves_total_mass() {
        let p = 2;
        let mesh = Mesh::new(0.0, 1.0, 24).unwrap();
        let sol = l2_project(
            |x| (2.0 * std::f64::consts::PI * x).sin() + 0.7,
            mesh,
            p,
        );
        // Integrate u* with a dense composite rule built from the filter.
        let rule = gauss_legendre::<f64>(p + 3).unwrap();
        let filter = SiacFilter::new(p, rule.nodes.clone()).unwrap();
        let mut mass = 0.0;
        for j in 0..mesh.n {
            let vals = filter.values_in_element(&sol, j);
            for (q, &w) in rule.weights.iter().enumerate() {
                mass += w * vals[q];
            }
        }
        mass *= mesh.dx / 2.0;
        assert!(
            (mass - total_mass(&sol)).abs() < 1e-11,
            "mass {mass} vs {}",
            total_mass(&sol)
        );
    }

    #[test]
    fn filtered_error_beats_dg_error_on_smooth_projection() {
        let p = 2;
        let f = |x: f64| (2.0 * std::f64::consts::PI * x).sin();
        let mesh = Mesh::new(0.0, 1.0, 40).unwrap();
        let sol = l2_project(f, mesh, p);
        let (pp, samples) = postprocess_errors(&sol, f).unwrap();
        let dg = crate::dg::l2_error(&sol, f);
        assert!(pp < dg, "filtered {pp:e} vs dg {dg:e}");
        assert_eq!(samples.len(), 40 * (p + 2));
    }
}
