//! Minimal dense matrix support for the small systems this solver builds
//! (collocation tableaux and kernel moment systems, order <= ~13). Kept
//! in-house because everything must stay generic over the scalar type.

use crate::real::Real;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Real> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c));
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(S::zero(), |acc, (&a, &x)| acc + a * x)
            })
            .collect()
    }

    pub fn max_abs(&self) -> S {
        self.data
            .iter()
            .fold(S::zero(), |acc, &x| acc.max(x.abs()))
    }

    /// Max absolute row sum.
    pub fn norm_inf(&self) -> S {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .fold(S::zero(), |acc, &x| acc + x.abs())
            })
            .fold(S::zero(), |acc, s| acc.max(s))
    }

    /// LU factorization with partial pivoting; `self` is consumed.
    pub fn lu(mut self) -> Result<Lu<S>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut piv: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut p = k;
            let mut best = self[(k, k)].abs();
            for i in k + 1..n {
                let v = self[(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if !(best > S::zero()) || !best.is_finite() {
                return Err(Error::SolverFailure(format!(
                    "singular matrix at pivot {k}"
                )));
            }
            if p != k {
                piv.swap(k, p);
                for j in 0..n {
                    let tmp = self[(k, j)];
                    self[(k, j)] = self[(p, j)];
                    self[(p, j)] = tmp;
                }
            }
            let d = self[(k, k)].recip();
            for i in k + 1..n {
                let m = self[(i, k)] * d;
                self[(i, k)] = m;
                for j in k + 1..n {
                    let s = self[(k, j)];
                    self[(i, j)] = self[(i, j)] - m * s;
                }
            }
        }
        Ok(Lu { lu: self, piv })
    }
}

impl<S: Real> std::ops::Index<(usize, usize)> for Mat<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S: Real> std::ops::IndexMut<(usize, usize)> for Mat<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

pub struct Lu<S> {
    lu: Mat<S>,
    piv: Vec<usize>,
}

impl<S: Real> Lu<S> {
    pub fn solve(&self, b: &[S]) -> Vec<S> {
        let n = self.lu.rows;
        assert_eq!(b.len(), n);
        let mut x: Vec<S> = self.piv.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            for j in 0..i {
                let m = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= m * xj;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let m = self.lu[(i, j)];
                let xj = x[j];
                x[i] -= m * xj;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    pub fn inverse(&self) -> Mat<S> {
        let n = self.lu.rows;
        let mut inv = Mat::zeros(n, n);
        for j in 0..n {
            let mut e = vec![S::zero(); n];
            e[j] = S::one();
            let col = self.solve(&e);
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        inv
    }
}
