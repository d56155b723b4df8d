//! Uniform 1D mesh with periodic element indexing.

use crate::real::Real;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct Mesh<S> {
    pub a: S,
    pub b: S,
    pub n: usize,
    pub dx: S,
}

impl<S: Real> Mesh<S> {
    pub fn new(a: S, b: S, n: usize) -> Result<Self> {
        if !(a < b) {
            return Err(Error::InvalidArgument("mesh needs a < b".into()));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("mesh needs at least one element".into()));
        }
        let dx = (b - a) / S::from_int(n as i64);
        Ok(Self { a, b, n, dx })
    }

    /// Left interface of element j (0-based).
    pub fn x_left(&self, j: usize) -> S {
        self.a + S::from_int(j as i64) * self.dx
    }

    pub fn x_center(&self, j: usize) -> S {
        self.a + (S::from_int(j as i64) + S::from_f64(0.5)) * self.dx
    }

    /// Map a reference coordinate in [-1,1] into element j.
    pub fn to_physical(&self, j: usize, xi: S) -> S {
        self.x_center(j) + xi * self.dx.half()
    }

    /// Element containing `x` after periodic wrapping, with its local
    /// reference coordinate.
    pub fn locate_periodic(&self, x: S) -> (usize, S) {
        let len = self.b - self.a;
        let mut y = (x - self.a) / len;
        y = y - y.floor();
        let scaled = y * S::from_int(self.n as i64);
        let mut j = scaled.floor().to_f64() as i64;
        if j < 0 {
            j = 0;
        }
        if j >= self.n as i64 {
            j = self.n as i64 - 1;
        }
        let xi = (scaled - S::from_int(j)) * S::from_int(2) - S::one();
        (j as usize, xi)
    }
}
