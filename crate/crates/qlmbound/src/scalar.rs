//! The [`Scalar`] trait lets every solver run in plain `f64` ("double") or
//! [`Dd`] ("extended") precision from the same generic code.
//!
//! Constants that are not binary fractions must enter through [`Scalar::from_dd`]
//! (or a decimal parse) so the extended mode keeps the full-precision value;
//! `from_f64` is only for values that are exact in `f64` (grid points, small
//! integers, powers of two).

use crate::xprec::Dd;
use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

pub trait Scalar:
    Copy
    + PartialOrd
    + PartialEq
    + Debug
    + Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Send
    + Sync
    + 'static
{
    /// Human-readable mode name ("double" / "extended").
    const NAME: &'static str;

    fn from_f64(v: f64) -> Self;
    fn from_dd(v: Dd) -> Self;
    fn to_f64(self) -> f64;
    fn to_dd(self) -> Dd;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
    fn pi() -> Self {
        Self::from_dd(Dd::pi())
    }
    /// Unit roundoff of the mode (2^-52 or 2^-104).
    fn eps() -> f64;

    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sin_cos(self) -> (Self, Self);
    fn atan(self) -> Self;
    fn atan2(self, x: Self) -> Self;
    fn powi(self, n: i32) -> Self;
    /// `(Ai(x), Ai'(x))`; always computed through the extended kernel so the
    /// double mode gets correctly rounded seeds too.
    fn airy(self) -> (Self, Self);
    fn round(self) -> Self;
    fn floor(self) -> Self;
    fn maxv(self, o: Self) -> Self;
    fn minv(self, o: Self) -> Self;
    fn is_finite(self) -> bool;
}

impl Scalar for f64 {
    const NAME: &'static str = "double";

    fn from_f64(v: f64) -> Self {
        v
    }
    fn from_dd(v: Dd) -> Self {
        v.to_f64()
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn to_dd(self) -> Dd {
        Dd::from_f64(self)
    }
    fn eps() -> f64 {
        f64::EPSILON * 0.5
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn sin_cos(self) -> (Self, Self) {
        f64::sin_cos(self)
    }
    fn atan(self) -> Self {
        f64::atan(self)
    }
    fn atan2(self, x: Self) -> Self {
        f64::atan2(self, x)
    }
    fn powi(self, n: i32) -> Self {
        f64::powi(self, n)
    }
    fn airy(self) -> (Self, Self) {
        let (a, ap) = Dd::from_f64(self).airy();
        (a.to_f64(), ap.to_f64())
    }
    fn round(self) -> Self {
        f64::round(self)
    }
    fn floor(self) -> Self {
        f64::floor(self)
    }
    fn maxv(self, o: Self) -> Self {
        f64::max(self, o)
    }
    fn minv(self, o: Self) -> Self {
        f64::min(self, o)
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl Scalar for Dd {
    const NAME: &'static str = "extended";

    fn from_f64(v: f64) -> Self {
        Dd::from_f64(v)
    }
    fn from_dd(v: Dd) -> Self {
        v
    }
    fn to_f64(self) -> f64 {
        Dd::to_f64(self)
    }
    fn to_dd(self) -> Dd {
        self
    }
    fn eps() -> f64 {
        Dd::EPSILON
    }
    fn abs(self) -> Self {
        Dd::abs(self)
    }
    fn sqrt(self) -> Self {
        Dd::sqrt(self)
    }
    fn exp(self) -> Self {
        Dd::exp(self)
    }
    fn ln(self) -> Self {
        Dd::ln(self)
    }
    fn sin(self) -> Self {
        Dd::sin(self)
    }
    fn cos(self) -> Self {
        Dd::cos(self)
    }
    fn sin_cos(self) -> (Self, Self) {
        Dd::sin_cos(self)
    }
    fn atan(self) -> Self {
        Dd::atan(self)
    }
    fn atan2(self, x: Self) -> Self {
        Dd::atan2(self, x)
    }
    fn powi(self, n: i32) -> Self {
        Dd::powi(self, n)
    }
    fn airy(self) -> (Self, Self) {
        Dd::airy(self)
    }
    fn round(self) -> Self {
        Dd::round(self)
    }
    fn floor(self) -> Self {
        Dd::floor(self)
    }
    fn maxv(self, o: Self) -> Self {
        Dd::max(self, o)
    }
    fn minv(self, o: Self) -> Self {
        Dd::min(self, o)
    }
    fn is_finite(self) -> bool {
        Dd::is_finite(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generic_quadratic_root<S: Scalar>() -> S {
        // Solve x^2 = 2 by Newton from 1; exercises the full trait surface a
        // solver needs.
        let two = S::from_f64(2.0);
        let mut x = S::one();
        for _ in 0..8 {
            x = (x + two / x) / two;
        }
        x
    }

    #[test]
    fn both_modes_agree_to_double_precision() {
        let a: f64 = generic_quadratic_root();
        let b: Dd = generic_quadratic_root();
        assert!((a - b.to_f64()).abs() < 1e-15);
        assert!((b.sqr() - Dd::from_f64(2.0)).abs().hi < 1e-31);
    }

    #[test]
    fn airy_in_double_mode_is_correctly_rounded() {
        let (ai, _) = (0.0f64).airy();
        assert_eq!(ai, 0.3550280538878172);
    }
}
