//! Flux definitions for the model problems and the Lax-Friedrichs
//! numerical flux.

use crate::problems;
use crate::real::Real;

/// The scalar conservation laws exercised by the experiments. The variable
/// coefficient case carries its manufactured source so the stated exact
/// solution solves the PDE.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Flux<S> {
    LinearAdvection { speed: S },
    /// u_t + (a(x,t) u)_x = g(x,t) with a = 2 + sin(2 pi (x+t)) and g chosen
    /// so that u = sin(2 pi (x-t)) is exact.
    VariableCoefficient,
    Burgers,
}

impl<S: Real> Flux<S> {
    pub fn value(&self, u: S, x: S, t: S) -> S {
        match self {
            Flux::LinearAdvection { speed } => *speed * u,
            Flux::VariableCoefficient => Self::coefficient(x, t) * u,
            Flux::Burgers => (u * u).half(),
        }
    }

    /// Wave speed f'(u).
    pub fn dfdu(&self, u: S, x: S, t: S) -> S {
        match self {
            Flux::LinearAdvection { speed } => *speed,
            Flux::VariableCoefficient => Self::coefficient(x, t),
            Flux::Burgers => u,
        }
    }

    /// a(x,t) = 2 + sin(2 pi (x + t)).
    pub fn coefficient(x: S, t: S) -> S {
        S::from_int(2) + (two_pi::<S>() * (x + t)).sin()
    }

    /// Manufactured source for the variable-coefficient problem:
    /// g = 2 pi cos(2 pi (x+t)) sin(2 pi (x-t)) + 2 pi (1 + sin(2 pi (x+t))) cos(2 pi (x-t)).
    pub fn source(&self, x: S, t: S) -> Option<S> {
        match self {
            Flux::VariableCoefficient => {
                let w = two_pi::<S>();
                let plus = w * (x + t);
                let minus = w * (x - t);
                Some(w * plus.cos() * minus.sin() + w * (S::one() + plus.sin()) * minus.cos())
            }
            _ => None,
        }
    }

    /// Exact solution when one is known in closed form (or, for Burgers,
    /// via the pre-shock characteristic solve).
    pub fn exact(&self, x: S, t: S) -> Option<S> {
        match self {
            Flux::LinearAdvection { speed } => Some((two_pi::<S>() * (x - *speed * t)).sin()),
            Flux::VariableCoefficient => Some((two_pi::<S>() * (x - t)).sin()),
            Flux::Burgers => problems::burgers_exact(x, t).ok(),
        }
    }

    pub fn is_source_free(&self) -> bool {
        !matches!(self, Flux::VariableCoefficient)
    }
}

pub fn two_pi<S: Real>() -> S {
    S::pi() * S::from_int(2)
}

/// Lax-Friedrichs flux: (f(u-) + f(u+) - alpha (u+ - u-)) / 2.
pub fn lax_friedrichs<S: Real>(flux: &Flux<S>, u_minus: S, u_plus: S, alpha: S, x: S, t: S) -> S {
    (flux.value(u_minus, x, t) + flux.value(u_plus, x, t) - alpha * (u_plus - u_minus)).half()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn consistency_when_states_agree() {
        let f = Flux::Burgers;
        let v = lax_friedrichs(&f, 0.7, 0.7, 1.0, 0.0, 0.0);
        assert!((v - 0.245).abs() < 1e-15);
    }

    #[test]
    fn linear_advection_upwinds() {
        // speed 1 with alpha 1 reduces to f(u-).
        let f = Flux::LinearAdvection { speed: 1.0 };
        let v = lax_friedrichs(&f, 0.3, -5.0, 1.0, 0.0, 0.0);
        assert!((v - 0.3).abs() < 1e-15);
    }

    #[test]
    fn burgers_jump_example() {
        let f = Flux::Burgers;
        let v = lax_friedrichs(&f, 1.0, -1.0, 1.0, 0.0, 0.0);
        assert!((v - 1.5).abs() < 1e-15);
    }

    #[test]
    fn manufactured_source_satisfies_pde() {
        // Sixth-order finite differences of u_t + (a u)_x against g.
        let f = Flux::VariableCoefficient;
        let u = |x: f64, t: f64| (2.0 * std::f64::consts::PI * (x - t)).sin();
        let au = |x: f64, t: f64| Flux::<f64>::coefficient(x, t) * u(x, t);
        let h = 1e-3;
        let d6 = |g: &dyn Fn(f64) -> f64, s: f64| {
            (-g(s - 3.0 * h) + 9.0 * g(s - 2.0 * h) - 45.0 * g(s - h) + 45.0 * g(s + h)
                - 9.0 * g(s + 2.0 * h)
                + g(s + 3.0 * h))
                / (60.0 * h)
        };
        for &(x, t) in &[(0.13, 0.0), (0.5, 0.21), (0.87, 0.66), (0.31, 1.0), (0.05, 0.4)] {
            let ut = d6(&|s| u(x, s), t);
            let aux = d6(&|s| au(s, t), x);
            let g = f.source(x, t).unwrap();
            assert!(
                (ut + aux - g).abs() < 1e-10,
                "residual {:e} at ({x},{t})",
                (ut + aux - g).abs()
            );
        }
    }
}
