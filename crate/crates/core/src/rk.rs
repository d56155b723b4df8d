//! Baseline explicit Runge-Kutta steppers (TVD-RK3 of Shu-Osher and the
//! classical RK4), written against the state abstraction so they serve both
//! scalar ODE tests and DG fields.

use crate::real::Real;
use crate::state::OdeState;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RkScheme {
    TvdRk3,
    ClassicalRk4,
}

fn check_finite<S: Real, St: OdeState<S>>(u: &St) -> Result<()> {
    if u.is_finite() {
        Ok(())
    } else {
        Err(Error::IntegrationFailure {
            step: 0,
            reason: "non-finite state in Runge-Kutta stage".into(),
        })
    }
}

/// One TVD-RK3 step:
/// u1 = u + dt L(t, u)
/// u2 = 3/4 u + 1/4 (u1 + dt L(t + dt, u1))
/// u  = 1/3 u + 2/3 (u2 + dt L(t + dt/2, u2))
pub fn rk3_step<S, St, F>(u: &St, t: S, dt: S, rhs: &mut F) -> Result<St>
where
    S: Real,
    St: OdeState<S>,
    F: FnMut(S, &St) -> St,
{
    let k = rhs(t, u);
    check_finite(&k)?;
    let mut u1 = u.clone();
    u1.scaled_add(dt, &k);

    let k = rhs(t + dt, &u1);
    check_finite(&k)?;
    u1.scaled_add(dt, &k);
    let mut u2 = u.clone();
    u2.scale(S::from_f64(0.75));
    u2.scaled_add(S::from_f64(0.25), &u1);

    let k = rhs(t + dt.half(), &u2);
    check_finite(&k)?;
    u2.scaled_add(dt, &k);
    let third = S::one() / S::from_int(3);
    let mut out = u.clone();
    out.scale(third);
    out.scaled_add(S::from_int(2) * third, &u2);
    check_finite(&out)?;
    Ok(out)
}

/// One classical RK4 step with stage times (t, t + dt/2, t + dt/2, t + dt).
pub fn rk4_step<S, St, F>(u: &St, t: S, dt: S, rhs: &mut F) -> Result<St>
where
    S: Real,
    St: OdeState<S>,
    F: FnMut(S, &St) -> St,
{
    let half_dt = dt.half();
    let k1 = rhs(t, u);
    check_finite(&k1)?;

    let mut stage = u.clone();
    stage.scaled_add(half_dt, &k1);
    let k2 = rhs(t + half_dt, &stage);
    check_finite(&k2)?;

    let mut stage = u.clone();
    stage.scaled_add(half_dt, &k2);
    let k3 = rhs(t + half_dt, &stage);
    check_finite(&k3)?;

    let mut stage = u.clone();
    stage.scaled_add(dt, &k3);
    let k4 = rhs(t + dt, &stage);
    check_finite(&k4)?;

    let sixth = dt / S::from_int(6);
    let mut out = u.clone();
    out.scaled_add(sixth, &k1);
    out.scaled_add(sixth + sixth, &k2);
    out.scaled_add(sixth + sixth, &k3);
    out.scaled_add(sixth, &k4);
    check_finite(&out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_rhs_is_identity() {
        let mut rhs = |_t: f64, _u: &f64| 0.0;
        assert_eq!(rk3_step(&1.7, 0.0, 0.1, &mut rhs).unwrap(), 1.7);
        assert_eq!(rk4_step(&1.7, 0.0, 0.1, &mut rhs).unwrap(), 1.7);
    }

    #[test]
    fn rk3_stability_polynomial_value() {
        // u' = -u, dt = 0.1: R(-0.1) = 1 - 0.1 + 0.005 - 0.001/6.
        let mut rhs = |_t: f64, u: &f64| -u;
        let v = rk3_step(&1.0, 0.0, 0.1, &mut rhs).unwrap();
        let want = 1.0 - 0.1 + 0.005 - 0.001 / 6.0;
        assert!((v - want).abs() < 1e-15);
    }

    #[test]
    fn rk4_stability_polynomial_value() {
        let mut rhs = |_t: f64, u: &f64| -u;
        let v = rk4_step(&1.0, 0.0, 0.1, &mut rhs).unwrap();
        let want: f64 = (0..=4).map(|r| (-0.1_f64).powi(r) / factorial(r)).sum();
        assert!((v - want).abs() < 1e-15);
        assert!((v - 0.9048375).abs() < 1e-12);
    }

    fn factorial(r: i32) -> f64 {
        (1..=r).map(|k| k as f64).product::<f64>().max(1.0)
    }

    fn global_order(step: impl Fn(&f64, f64, f64) -> f64) -> Vec<f64> {
        // u' = -u over [0,1].
        let run = |dt: f64| {
            let m = (1.0 / dt).round() as usize;
            let mut u = 1.0;
            let mut t = 0.0;
            for _ in 0..m {
                u = step(&u, t, dt);
                t += dt;
            }
            (u - (-1.0_f64).exp()).abs()
        };
        let errs: Vec<f64> = [0.1, 0.05, 0.025].iter().map(|&dt| run(dt)).collect();
        errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
    }

    #[test]
    fn rk3_global_order_three() {
        let orders = global_order(|u, t, dt| {
            rk3_step(u, t, dt, &mut |_t: f64, v: &f64| -v).unwrap()
        });
        for o in orders {
            assert!((o - 3.0).abs() < 0.1, "order {o}");
        }
    }

    #[test]
    fn rk4_global_order_four() {
        let orders = global_order(|u, t, dt| {
            rk4_step(u, t, dt, &mut |_t: f64, v: &f64| -v).unwrap()
        });
        for o in orders {
            assert!((o - 4.0).abs() < 0.15, "order {o}");
        }
    }

    #[test]
    fn rk3_stage_times_match_scheme() {
        // For rhs = g(t) a single step produces
        // u + dt (g(t)/6 + g(t+dt)/6 + 2 g(t+dt/2)/3), a Simpson-like rule;
        // record the times actually requested.
        let mut times = Vec::new();
        let g = |t: f64| t * t;
        let mut rhs = |t: f64, _u: &f64| {
            times.push(t);
            g(t)
        };
        let t0 = 0.3;
        let dt = 0.2;
        let v = rk3_step(&0.0, t0, dt, &mut rhs).unwrap();
        assert_eq!(times, vec![t0, t0 + dt, t0 + dt / 2.0]);
        let want = dt * (g(t0) / 6.0 + g(t0 + dt) / 6.0 + 2.0 * g(t0 + dt / 2.0) / 3.0);
        assert!((v - want).abs() < 1e-15);
    }

    #[test]
    fn translation_invariance_on_linear_problem() {
        // step(u + c) = step(u) + R(lambda dt) c for u' = lambda u.
        let lambda = -0.8;
        let dt = 0.13;
        let r3 = |z: f64| 1.0 + z + z * z / 2.0 + z * z * z / 6.0;
        let mut rhs = |_t: f64, u: &f64| lambda * u;
        let a = rk3_step(&0.4, 0.0, dt, &mut rhs).unwrap();
        let b = rk3_step(&(0.4 + 2.5), 0.0, dt, &mut rhs).unwrap();
        assert!((b - a - r3(lambda * dt) * 2.5).abs() < 1e-13);
    }

    #[test]
    fn nan_rhs_is_an_error() {
        let mut rhs = |_t: f64, _u: &f64| f64::NAN;
        assert!(rk3_step(&1.0, 0.0, 0.1, &mut rhs).is_err());
        assert!(rk4_step(&1.0, 0.0, 0.1, &mut rhs).is_err());
    }
}
