//! Orthonormal Legendre modal basis on the reference element [-1, 1]:
//! `phi_m = sqrt((2m+1)/2) P_m`, so that `int phi_i phi_j = delta_ij`.

use crate::real::Real;

/// Values of phi_0..phi_p at `t`.
pub fn eval<S: Real>(p: usize, t: S) -> Vec<S> {
    let mut out = Vec::with_capacity(p + 1);
    let mut p_prev = S::one();
    let mut p_cur = t;
    for m in 0..=p {
        let pm = match m {
            0 => S::one(),
            1 => t,
            _ => {
                let k = m - 1;
                let next = (S::from_int(2 * k as i64 + 1) * t * p_cur
                    - S::from_int(k as i64) * p_prev)
                    / S::from_int(k as i64 + 1);
                p_prev = p_cur;
                p_cur = next;
                next
            }
        };
        out.push(norm_factor::<S>(m) * pm);
    }
    out
}

/// Values and derivatives of phi_0..phi_p at `t`.
pub fn eval_with_deriv<S: Real>(p: usize, t: S) -> (Vec<S>, Vec<S>) {
    // Plain Legendre values and derivatives by recurrence:
    // P'_{m+1} = P'_{m-1} + (2m+1) P_m
    let mut vals = Vec::with_capacity(p + 1);
    let mut ders = Vec::with_capacity(p + 1);
    let mut pm1 = S::one();
    let mut dm1 = S::zero();
    vals.push(pm1);
    ders.push(dm1);
    if p >= 1 {
        let mut pm = t;
        let mut dm = S::one();
        vals.push(pm);
        ders.push(dm);
        for m in 1..p {
            let next = (S::from_int(2 * m as i64 + 1) * t * pm - S::from_int(m as i64) * pm1)
                / S::from_int(m as i64 + 1);
            let dnext = dm1 + S::from_int(2 * m as i64 + 1) * pm;
            pm1 = pm;
            dm1 = dm;
            pm = next;
            dm = dnext;
            vals.push(pm);
            ders.push(dm);
        }
    }
    for m in 0..=p {
        let c = norm_factor::<S>(m);
        vals[m] *= c;
        ders[m] *= c;
    }
    (vals, ders)
}

fn norm_factor<S: Real>(m: usize) -> S {
    ((S::from_int(2 * m as i64) + S::one()).half()).sqrt()
}
