//! Lagrange interpolation basis on a set of distinct nodes.

use crate::linalg::Mat;
use crate::real::Real;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct LagrangeBasis<S> {
    nodes: Vec<S>,
    /// den[j] = prod_{k != j} (x_j - x_k)
    denom: Vec<S>,
}

impl<S: Real> LagrangeBasis<S> {
    pub fn new(nodes: Vec<S>) -> Result<Self> {
        let n = nodes.len();
        if n == 0 {
            return Err(Error::InvalidArgument("empty node set".into()));
        }
        let mut denom = vec![S::one(); n];
        for j in 0..n {
            for k in 0..n {
                if k != j {
                    let d = nodes[j] - nodes[k];
                    if d == S::zero() {
                        return Err(Error::InvalidArgument(format!(
                            "repeated interpolation node at index {j}"
                        )));
                    }
                    denom[j] *= d;
                }
            }
        }
        Ok(Self { nodes, denom })
    }

    pub fn degree(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn nodes(&self) -> &[S] {
        &self.nodes
    }

    /// Values of every cardinal polynomial at `t`.
    pub fn eval_all(&self, t: S) -> Vec<S> {
        let n = self.nodes.len();
        let mut vals = vec![S::zero(); n];
        for j in 0..n {
            let mut num = S::one();
            for k in 0..n {
                if k != j {
                    num *= t - self.nodes[k];
                }
            }
            vals[j] = num / self.denom[j];
        }
        vals
    }

    /// Derivatives of every cardinal polynomial at `t`.
    pub fn deriv_all(&self, t: S) -> Vec<S> {
        let n = self.nodes.len();
        let mut vals = vec![S::zero(); n];
        for j in 0..n {
            let mut sum = S::zero();
            for m in 0..n {
                if m == j {
                    continue;
                }
                let mut prod = S::one();
                for k in 0..n {
                    if k != j && k != m {
                        prod *= t - self.nodes[k];
                    }
                }
                sum += prod;
            }
            vals[j] = sum / self.denom[j];
        }
        vals
    }

    /// Value and derivative matrices at the given points:
    /// `v[(i, j)] = l_j(pts[i])`, `d[(i, j)] = l_j'(pts[i])`.
    pub fn matrices(&self, pts: &[S]) -> (Mat<S>, Mat<S>) {
        let n = self.nodes.len();
        let mut v = Mat::zeros(pts.len(), n);
        let mut d = Mat::zeros(pts.len(), n);
        for (i, &t) in pts.iter().enumerate() {
            for (j, val) in self.eval_all(t).into_iter().enumerate() {
                v[(i, j)] = val;
            }
            for (j, val) in self.deriv_all(t).into_iter().enumerate() {
                d[(i, j)] = val;
            }
        }
        (v, d)
    }

    /// Interpolate samples `f_j` given at the basis nodes.
    pub fn interpolate(&self, samples: &[S], t: S) -> S {
        self.eval_all(t)
            .iter()
            .zip(samples)
            .fold(S::zero(), |acc, (&l, &f)| acc + l * f)
    }
}

/// Convenience wrapper matching the (basis, eval points) -> (V, D) operation.
pub fn lagrange_matrices<S: Real>(
    basis: &LagrangeBasis<S>,
    eval_points: &[S],
) -> (Mat<S>, Mat<S>) {
    basis.matrices(eval_points)
}
