//! State abstraction shared by every time stepper, so the same integrators
//! drive both scalar ODE tests and DG coefficient fields.

use crate::real::Real;

pub trait OdeState<S: Real>: Clone + Send {
    /// self += a * other
    fn scaled_add(&mut self, a: S, other: &Self);

    /// self *= a
    fn scale(&mut self, a: S);

    fn is_finite(&self) -> bool;

    /// Euclidean norm of the difference, used by the adaptive iteration
    /// indicator.
    fn l2_dist(&self, other: &Self) -> S;
}

impl<S: Real> OdeState<S> for S {
    fn scaled_add(&mut self, a: S, other: &Self) {
        *self += a * *other;
    }

    fn scale(&mut self, a: S) {
        *self *= a;
    }

    fn is_finite(&self) -> bool {
        Real::is_finite(*self)
    }

    fn l2_dist(&self, other: &Self) -> S {
        (*self - *other).abs()
    }
}

/// a*x + b*y as a new state.
pub fn lin_comb<S: Real, St: OdeState<S>>(a: S, x: &St, b: S, y: &St) -> St {
    let mut out = x.clone();
    out.scale(a);
    out.scaled_add(b, y);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_state_ops() {
        let mut u = 2.0_f64;
        u.scaled_add(3.0, &4.0);
        assert_eq!(u, 14.0);
        assert_eq!(u.l2_dist(&10.0), 4.0);
        assert!(OdeState::<f64>::is_finite(&u));
        assert!(!OdeState::<f64>::is_finite(&f64::NAN));
    }
}
