//! Software double-double arithmetic (~31 significant decimal digits).
//!
//! A value is stored as an unevaluated sum `hi + lo` of two binary64 numbers
//! with `|lo| <= ulp(hi)/2`. The error-free transformations follow Dekker and
//! Knuth; the transcendental functions use argument reduction against
//! double-double constants followed by Taylor summation, which is accurate to
//! a few units in the last place over the moderate argument ranges this
//! solver needs. Hardware FMA is used for products when the target has it.

use crate::real::Real;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

#[derive(Clone, Copy, Default)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline(always)]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline(always)]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline(always)]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    if cfg!(target_feature = "fma") {
        (p, a.mul_add(b, -p))
    } else {
        const SPLITTER: f64 = 134_217_729.0; // 2^27 + 1
        let ta = SPLITTER * a;
        let ah = ta - (ta - a);
        let al = a - ah;
        let tb = SPLITTER * b;
        let bh = tb - (tb - b);
        let bl = b - bh;
        (p, ((ah * bh - p) + ah * bl + al * bh) + al * bl)
    }
}

impl DoubleDouble {
    pub const fn new(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    fn from_sum(hi: f64, lo: f64) -> Self {
        let (h, l) = quick_two_sum(hi, lo);
        Self { hi: h, lo: l }
    }

    fn add_f64(self, b: f64) -> Self {
        let (s1, s2) = two_sum(self.hi, b);
        Self::from_sum(s1, s2 + self.lo)
    }

    fn mul_f64(self, b: f64) -> Self {
        let (p1, p2) = two_prod(self.hi, b);
        Self::from_sum(p1, p2 + self.lo * b)
    }

    /// Exact scaling by a power of two.
    fn ldexp(self, k: i32) -> Self {
        let c = f64::powi(2.0, k);
        Self {
            hi: self.hi * c,
            lo: self.lo * c,
        }
    }

    const PI: Self = Self::new(3.141592653589793, 1.2246467991473532e-16);
    const PI_HALF: Self = Self::new(1.5707963267948966, 6.123233995736766e-17);
    const LN2: Self = Self::new(0.6931471805599453, 2.3190468138462996e-17);

    fn nan() -> Self {
        Self::new(f64::NAN, f64::NAN)
    }

    /// sin and cos together from a single reduction mod pi/2.
    fn sin_cos(self) -> (Self, Self) {
        if self.hi == 0.0 && self.lo == 0.0 {
            return (Self::from_f64(0.0), Self::from_f64(1.0));
        }
        if !self.hi.is_finite() {
            return (Self::nan(), Self::nan());
        }
        let q = (self.hi / Self::PI_HALF.hi).round();
        let r = self - Self::PI_HALF.mul_f64(q);
        let (s, c) = taylor_sin_cos(r);
        match ((q as i64) % 4 + 4) % 4 {
            0 => (s, c),
            1 => (c, -s),
            2 => (-s, -c),
            _ => (-c, s),
        }
    }
}

/// Taylor series for |r| <= pi/4.
fn taylor_sin_cos(r: DoubleDouble) -> (DoubleDouble, DoubleDouble) {
    let r2 = r * r;
    let mut s = r;
    let mut term = r;
    for k in 1..=20_i64 {
        term = term * r2 / DoubleDouble::from_int(-(2 * k) * (2 * k + 1));
        s += term;
        if term.hi.abs() < 1e-35 {
            break;
        }
    }
    let one = DoubleDouble::from_f64(1.0);
    let mut c = one;
    let mut term = one;
    for k in 1..=20_i64 {
        term = term * r2 / DoubleDouble::from_int(-(2 * k - 1) * (2 * k));
        c += term;
        if term.hi.abs() < 1e-35 {
            break;
        }
    }
    (s, c)
}

impl Add for DoubleDouble {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        Self::from_sum(s1, s2 + t2)
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        let (p1, p2) = two_prod(self.hi, rhs.hi);
        Self::from_sum(p1, p2 + (self.hi * rhs.lo + self.lo * rhs.hi))
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        let q1 = self.hi / rhs.hi;
        let r = self - rhs.mul_f64(q1);
        let q2 = r.hi / rhs.hi;
        let r = r - rhs.mul_f64(q2);
        let q3 = r.hi / rhs.hi;
        Self::from_sum(q1, q2).add_f64(q3)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl AddAssign for DoubleDouble {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}
impl SubAssign for DoubleDouble {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}
impl MulAssign for DoubleDouble {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}
impl DivAssign for DoubleDouble {
    fn div_assign(&mut self, rhs: Self) {
        *self = *self / rhs;
    }
}

impl PartialEq for DoubleDouble {
    fn eq(&self, other: &Self) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl fmt::Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dd({:e}, {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_f64(), f)
    }
}

impl Real for DoubleDouble {
    const NAME: &'static str = "dd";

    fn zero() -> Self {
        Self::new(0.0, 0.0)
    }
    fn one() -> Self {
        Self::new(1.0, 0.0)
    }
    fn from_f64(v: f64) -> Self {
        Self::new(v, 0.0)
    }
    fn from_int(v: i64) -> Self {
        debug_assert!(v.abs() < (1 << 53));
        Self::new(v as f64, 0.0)
    }
    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    fn sqrt(self) -> Self {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Self::zero();
        }
        if self.hi < 0.0 {
            return Self::nan();
        }
        // One double-double Newton step from the f64 seed reaches full width.
        let x = Self::from_f64(self.hi.sqrt());
        (x + self / x).ldexp(-1)
    }

    fn sin(self) -> Self {
        self.sin_cos().0
    }

    fn cos(self) -> Self {
        self.sin_cos().1
    }

    fn exp(self) -> Self {
        if self.hi > 709.0 {
            return Self::from_f64(f64::INFINITY);
        }
        if self.hi < -709.0 {
            return Self::zero();
        }
        let k = (self.hi / Self::LN2.hi).round();
        let r = (self - Self::LN2.mul_f64(k)).ldexp(-9);
        // exp(r) - 1 by Taylor, then 9 squarings of u <- u^2 + 2u.
        let mut term = r;
        let mut u = r;
        for n in 2..=14_i64 {
            term = term * r / Self::from_int(n);
            u += term;
            if term.hi.abs() < 1e-40 {
                break;
            }
        }
        for _ in 0..9 {
            u = u * u + u.ldexp(1);
        }
        u.add_f64(1.0).ldexp(k as i32)
    }

    fn floor(self) -> Self {
        let f = self.hi.floor();
        if f == self.hi {
            Self::from_sum(f, self.lo.floor())
        } else {
            Self::new(f, 0.0)
        }
    }

    fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::one();
        }
        let mut base = if n < 0 { Self::one() / self } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }

    fn mul_add(self, a: Self, b: Self) -> Self {
        self * a + b
    }

    fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
    fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }
    fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    fn epsilon() -> Self {
        // 2^-104
        Self::from_f64(4.930380657631324e-32)
    }

    fn pi() -> Self {
        Self::PI
    }
}
