//! Quadrature rules on the reference interval [-1, 1].
//!
//! Nodes are seeded in f64 (asymptotic guesses plus bisection) and polished
//! by Newton iteration in the target scalar, so the same construction serves
//! both precisions.

use crate::real::Real;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadKind {
    GaussLegendre,
    GaussRadauRight,
}

#[derive(Clone, Debug)]
pub struct QuadratureRule<S> {
    pub nodes: Vec<S>,
    pub weights: Vec<S>,
    pub kind: QuadKind,
    /// Largest polynomial degree integrated exactly.
    pub exact_degree: usize,
}

impl<S: Real> QuadratureRule<S> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrate `f` over [a, b].
    pub fn integrate<F: Fn(S) -> S>(&self, a: S, b: S, f: F) -> S {
        let half = (b - a).half();
        let mid = (a + b).half();
        let mut acc = S::zero();
        for (&t, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * t);
        }
        acc * half
    }
}

/// Legendre polynomial P_n and its derivative at `x`.
pub fn legendre_p_dp<S: Real>(n: usize, x: S) -> (S, S) {
    if n == 0 {
        return (S::one(), S::zero());
    }
    let mut p_prev = S::one();
    let mut p = x;
    for k in 1..n {
        let kf = S::from_int(k as i64);
        let a = (S::from_int(2 * k as i64 + 1) * x * p - kf * p_prev)
            / S::from_int(k as i64 + 1);
        p_prev = p;
        p = a;
    }
    // (1 - x^2) P_n' = n (P_{n-1} - x P_n)
    let nf = S::from_int(n as i64);
    let denom = S::one() - x * x;
    let dp = if denom.abs() > S::epsilon() {
        nf * (p_prev - x * p) / denom
    } else {
        // Endpoint values: P_n'(+-1) = (+-1)^{n-1} n(n+1)/2.
        let sign = if x > S::zero() || n % 2 == 1 {
            S::one()
        } else {
            -S::one()
        };
        sign * nf * (nf + S::one()).half()
    };
    (p, dp)
}

/// n-point Gauss-Legendre rule, exact for degree 2n-1.
pub fn gauss_legendre<S: Real>(n: usize) -> Result<QuadratureRule<S>> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "Gauss-Legendre rule needs at least one point".into(),
        ));
    }
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        // Tricomi-style initial guess, then Newton in f64.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..50 {
            let (p, dp) = legendre_p_dp(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        // Polish in the target scalar.
        let mut xs = S::from_f64(x);
        for _ in 0..4 {
            let (p, dp) = legendre_p_dp(n, xs);
            xs -= p / dp;
        }
        let (_, dp) = legendre_p_dp(n, xs);
        let w = S::from_int(2) / ((S::one() - xs * xs) * dp * dp);
        nodes.push(xs);
        weights.push(w);
    }
    nodes.reverse();
    weights.reverse();
    if n % 2 == 1 {
        nodes[n / 2] = S::zero();
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        kind: QuadKind::GaussLegendre,
        exact_degree: 2 * n - 1,
    })
}

/// n-point right Gauss-Radau rule (last node exactly 1), exact for degree 2n-2.
///
/// Built from the left Radau rule by reflection: the left rule fixes -1 and
/// takes the interior roots of P_{n-1} + P_n.
pub fn gauss_radau_right<S: Real>(n: usize) -> Result<QuadratureRule<S>> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "Gauss-Radau rule needs at least one point".into(),
        ));
    }
    let nf = S::from_int(n as i64);
    let endpoint_weight = S::from_int(2) / (nf * nf);
    let mut left_nodes = vec![-S::one()];
    let mut left_weights = vec![endpoint_weight];

    if n > 1 {
        for x0 in radau_interior_seeds(n) {
            let mut xs = S::from_f64(x0);
            for _ in 0..6 {
                let (pm, dpm) = legendre_p_dp(n - 1, xs);
                let (pn, dpn) = legendre_p_dp(n, xs);
                xs -= (pm + pn) / (dpm + dpn);
            }
            let (pm, _) = legendre_p_dp(n - 1, xs);
            let w = (S::one() - xs) / (nf * nf * pm * pm);
            left_nodes.push(xs);
            left_weights.push(w);
        }
    }

    let mut nodes: Vec<S> = left_nodes.iter().rev().map(|&x| -x).collect();
    let weights: Vec<S> = left_weights.iter().rev().copied().collect();
    let last = nodes.len() - 1;
    nodes[last] = S::one();
    Ok(QuadratureRule {
        nodes,
        weights,
        kind: QuadKind::GaussRadauRight,
        exact_degree: 2 * n - 2,
    })
}

/// f64 seeds for the interior roots of P_{n-1} + P_n
/// (sign-change scan plus bisection; n is small so this is cheap).
fn radau_interior_seeds(n: usize) -> Vec<f64> {
    let g = |x: f64| legendre_p_dp(n - 1, x).0 + legendre_p_dp(n, x).0;
    let m = 512 * n;
    let a = -1.0 + 1e-9;
    let b = 1.0;
    let mut seeds = Vec::with_capacity(n - 1);
    let mut x_prev = a;
    let mut g_prev = g(a);
    for i in 1..=m {
        let x = a + (b - a) * (i as f64) / (m as f64);
        let gx = g(x);
        if g_prev == 0.0 {
            seeds.push(x_prev);
        } else if g_prev * gx < 0.0 {
            let (mut lo, mut hi) = (x_prev, x);
            let mut glo = g_prev;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let gm = g(mid);
                if glo * gm <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    glo = gm;
                }
            }
            seeds.push(0.5 * (lo + hi));
        }
        x_prev = x;
        g_prev = gx;
    }
    debug_assert_eq!(seeds.len(), n - 1);
    seeds
}
