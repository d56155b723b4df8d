//! The model problems exercised by the experiments, with their exact
//! solutions.

use crate::flux::{two_pi, Flux};
use crate::real::Real;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Problem {
    /// u_t + u_x = 0 on [0,1], u(x,0) = sin(2 pi x).
    Linear,
    /// u_t + ((2 + sin(2 pi (x+t))) u)_x = g on [0,1], manufactured so
    /// u = sin(2 pi (x-t)).
    VariableCoefficient,
    /// u_t + (u^2/2)_x = 0 on [0, 2 pi], u(x,0) = sin x, run pre-shock.
    Burgers,
}

impl Problem {
    pub fn flux<S: Real>(&self) -> Flux<S> {
        match self {
            Problem::Linear => Flux::LinearAdvection { speed: S::one() },
            Problem::VariableCoefficient => Flux::VariableCoefficient,
            Problem::Burgers => Flux::Burgers,
        }
    }

    pub fn domain<S: Real>(&self) -> (S, S) {
        match self {
            Problem::Linear | Problem::VariableCoefficient => (S::zero(), S::one()),
            Problem::Burgers => (S::zero(), two_pi::<S>()),
        }
    }

    pub fn initial<S: Real>(&self, x: S) -> S {
        match self {
            Problem::Linear | Problem::VariableCoefficient => (two_pi::<S>() * x).sin(),
            Problem::Burgers => x.sin(),
        }
    }

    pub fn exact<S: Real>(&self, x: S, t: S) -> Result<S> {
        match self {
            Problem::Linear | Problem::VariableCoefficient => {
                Ok((two_pi::<S>() * (x - t)).sin())
            }
            Problem::Burgers => burgers_exact(x, t),
        }
    }

    /// Final time used by the corresponding experiment.
    pub fn default_t_final(&self) -> f64 {
        match self {
            Problem::Linear | Problem::VariableCoefficient => 1.0,
            Problem::Burgers => 0.5,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Problem::Linear => "linear",
            Problem::VariableCoefficient => "varcoef",
            Problem::Burgers => "burgers",
        }
    }
}

impl std::str::FromStr for Problem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Problem::Linear),
            "varcoef" | "variable-coefficient" => Ok(Problem::VariableCoefficient),
            "burgers" => Ok(Problem::Burgers),
            other => Err(Error::Parse(format!("unknown problem '{other}'"))),
        }
    }
}

/// Pre-shock exact Burgers solution: the root of u = sin(x - u t) along the
/// characteristic through x, by Newton iteration seeded at sin(x).
pub fn burgers_exact<S: Real>(x: S, t: S) -> Result<S> {
    if t.to_f64() >= 1.0 {
        return Err(Error::EvaluationFailure(
            "Burgers characteristics cross at t = 1 for sine data".into(),
        ));
    }
    let tol = S::epsilon() * S::from_int(16);
    let mut u = x.sin();
    for _ in 0..50 {
        let s = (x - u * t).sin();
        let r = u - s;
        if r.abs() <= tol {
            return Ok(u);
        }
        let dr = S::one() + t * (x - u * t).cos();
        u -= r / dr;
    }
    let r = (u - (x - u * t).sin()).abs();
    if r <= tol * S::from_int(64) {
        Ok(u)
    } else {
        Err(Error::EvaluationFailure(format!(
            "Burgers Newton stalled at residual {:e}",
            r.to_f64()
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn burgers_at_time_zero_is_initial_data() {
        for &x in &[0.0, 0.4, 1.0, 3.0, 6.0] {
            assert!((burgers_exact(x, 0.0).unwrap() - x.sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn burgers_odd_symmetry_fixed_point() {
        let u = burgers_exact(std::f64::consts::PI, 0.5).unwrap();
        assert!(u.abs() < 1e-14);
    }

    #[test]
    fn burgers_self_residual() {
        // Deterministic pseudo-random sample of (x, t), t <= 0.5.
        let mut s = 0x243f6a8885a308d3_u64;
        let mut rand = move || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..1000 {
            let x = rand() * 2.0 * std::f64::consts::PI;
            let t = rand() * 0.5;
            let u = burgers_exact(x, t).unwrap();
            assert!((u - (x - u * t).sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn burgers_rejects_post_shock_times() {
        assert!(burgers_exact(1.0, 1.0).is_err());
    }

    #[test]
    fn exact_solutions_satisfy_initial_conditions() {
        for prob in [Problem::Linear, Problem::VariableCoefficient, Problem::Burgers] {
            let (a, b) = prob.domain::<f64>();
            for i in 0..10 {
                let x = a + (b - a) * i as f64 / 9.0;
                assert!((prob.exact(x, 0.0).unwrap() - prob.initial(x)).abs() < 1e-13);
            }
        }
    }
}
