//! Double-double arithmetic: an unevaluated sum of two `f64`s giving ~106 bits
//! (~32 decimal digits) of precision. Core arithmetic here; elementary
//! functions in [`elem`], decimal conversion in [`decimal`], Airy functions in
//! [`airy`].
//!
//! The representation invariant is `hi = fl(hi + lo)`, i.e. `lo` is at most
//! half an ulp of `hi`. All basic operations are the classical
//! error-free-transformation algorithms (Dekker/Knuth two_sum, FMA two_prod)
//! in their "accurate" variants.

mod airy;
mod decimal;
mod elem;

pub use decimal::ParseDdError;

/// Exact constants as component arrays (head first). Generated offline from a
/// 60-digit reference; each component is the correctly rounded remainder.
pub(crate) mod consts {
    pub const PI_DD: [f64; 2] = [3.141592653589793, 1.2246467991473532e-16];
    pub const PI_OVER_2_TD: [f64; 3] = [
        1.5707963267948966,
        6.123233995736766e-17,
        -1.4973849048591698e-33,
    ];
    pub const PI_OVER_4_DD: [f64; 2] = [0.7853981633974483, 3.061616997868383e-17];
    pub const TWO_PI_DD: [f64; 2] = [6.283185307179586, 2.4492935982947064e-16];
    pub const LN2_DD: [f64; 3] = [
        0.6931471805599453,
        2.3190468138462996e-17,
        5.707708438416212e-34,
    ];
    pub const AI0_DD: [f64; 2] = [0.3550280538878172, 2.05233632436212e-17];
    pub const AIP0_DD: [f64; 2] = [-0.2588194037928068, 2.522243111610832e-17];
    pub const SQRT_PI_DD: [f64; 2] = [1.772453850905516, -7.666586499825799e-17];
}

/// A double-double number: the exact value is `hi + lo`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

/// Error-free sum: returns `(s, e)` with `s = fl(a+b)` and `a+b = s+e` exactly.
#[inline(always)]
pub(crate) fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// `two_sum` specialization valid when `|a| >= |b|` (or either is zero).
#[inline(always)]
pub(crate) fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

/// Error-free product via FMA: `a*b = p + e` exactly.
#[inline(always)]
pub(crate) fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, f64::mul_add(a, b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    /// Unit roundoff of the format, 2^-104 (quadratic in the f64 epsilon).
    pub const EPSILON: f64 = 4.93038065763132e-32;

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Dd {
        let (hi, lo) = quick_two_sum(hi, lo);
        Dd { hi, lo }
    }

    /// Construct from components already known to satisfy the invariant.
    #[inline]
    pub(crate) fn raw(hi: f64, lo: f64) -> Dd {
        Dd { hi, lo }
    }

    #[inline]
    pub fn from_f64(v: f64) -> Dd {
        Dd { hi: v, lo: 0.0 }
    }

    #[inline]
    pub fn from_i64(v: i64) -> Dd {
        // i64 may exceed 53 bits; split exactly.
        let hi = v as f64;
        let lo = (v - hi as i64) as f64;
        Dd::new(hi, lo)
    }

    /// Nearest f64 (the head component, by the representation invariant).
    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi
    }

    pub fn pi() -> Dd {
        Dd::raw(consts::PI_DD[0], consts::PI_DD[1])
    }

    pub fn two_pi() -> Dd {
        Dd::raw(consts::TWO_PI_DD[0], consts::TWO_PI_DD[1])
    }

    pub fn pi_over_2() -> Dd {
        Dd::raw(consts::PI_OVER_2_TD[0], consts::PI_OVER_2_TD[1])
    }

    pub fn pi_over_4() -> Dd {
        Dd::raw(consts::PI_OVER_4_DD[0], consts::PI_OVER_4_DD[1])
    }

    pub fn ln_2() -> Dd {
        Dd::raw(consts::LN2_DD[0], consts::LN2_DD[1])
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    #[inline]
    pub fn is_nan(self) -> bool {
        self.hi.is_nan() || self.lo.is_nan()
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.hi == 0.0
    }

    #[inline]
    pub fn is_sign_negative(self) -> bool {
        self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0)
    }

    /// Multiply by an exact power of two (error-free).
    #[inline]
    pub fn ldexp(self, k: i32) -> Dd {
        let s = pow2(k);
        Dd::raw(self.hi * s, self.lo * s)
    }

    /// Round to the nearest integer (ties away from zero on the head).
    pub fn round(self) -> Dd {
        let rh = self.hi.round();
        if rh == self.hi {
            // Head already integral: the tail decides the nearest integer.
            Dd::new(rh, self.lo.round())
        } else if (rh - self.hi).abs() == 0.5 {
            // Exact tie on the head: the tail breaks it.
            if self.lo > 0.0 {
                Dd::from_f64(self.hi + 0.5)
            } else if self.lo < 0.0 {
                Dd::from_f64(self.hi - 0.5)
            } else {
                Dd::from_f64(rh)
            }
        } else {
            Dd::from_f64(rh)
        }
    }

    pub fn floor(self) -> Dd {
        let fh = self.hi.floor();
        if fh == self.hi {
            Dd::new(fh, self.lo.floor())
        } else {
            Dd::from_f64(fh)
        }
    }

    pub fn sqrt(self) -> Dd {
        if self.is_zero() {
            return Dd::ZERO;
        }
        assert!(
            self.hi > 0.0,
            "Dd::sqrt: negative argument {:?}",
            self.hi
        );
        // Karp's trick: y ≈ 1/sqrt(x) in f64, s = x*y, then one correction
        // step s + (x - s^2)*y/2 computed with an exact square.
        let y = 1.0 / self.hi.sqrt();
        let s = self.hi * y;
        let sdd = Dd::from_f64(s);
        let e = (self - sdd.sqr()).hi * (y * 0.5);
        let (hi, lo) = quick_two_sum(s, e);
        // One more Newton step in full Dd precision for the last couple bits.
        let r = Dd::raw(hi, lo);
        let half = Dd::from_f64(0.5);
        (r + self / r) * half
    }

    /// Exact-ish square (slightly cheaper and tighter than `self * self`).
    #[inline]
    pub fn sqr(self) -> Dd {
        let (p1, p2) = two_prod(self.hi, self.hi);
        let p2 = p2 + 2.0 * (self.hi * self.lo) + self.lo * self.lo;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd::raw(hi, lo)
    }

    pub fn recip(self) -> Dd {
        Dd::ONE / self
    }

    /// Integer power by binary exponentiation.
    pub fn powi(self, n: i32) -> Dd {
        if n == 0 {
            return Dd::ONE;
        }
        let mut base = if n < 0 { self.recip() } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Dd::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    pub fn max(self, other: Dd) -> Dd {
        if self < other {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Dd) -> Dd {
        if other < self {
            other
        } else {
            self
        }
    }
}

/// 2^k as f64 (exact for the normal range used here).
#[inline]
pub(crate) fn pow2(k: i32) -> f64 {
    f64::from_bits(((1023 + k) as u64) << 52)
}

impl std::ops::Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd::raw(-self.hi, -self.lo)
    }
}

impl std::ops::Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd::raw(hi, lo)
    }
}

impl std::ops::Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl std::ops::Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, b.hi);
        let p2 = p2 + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd::raw(hi, lo)
    }
}

impl std::ops::Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        // Long division: three f64 quotient digits plus a correction.
        let q1 = self.hi / b.hi;
        if !q1.is_finite() {
            return Dd::from_f64(q1);
        }
        let mut r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd::raw(hi, lo) + Dd::from_f64(q3)
    }
}

impl Dd {
    /// Product with a plain f64 (error-free transformation on the head).
    #[inline]
    pub fn mul_f64(self, b: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, b);
        let p2 = p2 + self.lo * b;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd::raw(hi, lo)
    }

    #[inline]
    pub fn add_f64(self, b: f64) -> Dd {
        self + Dd::from_f64(b)
    }
}

impl std::ops::AddAssign for Dd {
    #[inline]
    fn add_assign(&mut self, b: Dd) {
        *self = *self + b;
    }
}
impl std::ops::SubAssign for Dd {
    #[inline]
    fn sub_assign(&mut self, b: Dd) {
        *self = *self - b;
    }
}
impl std::ops::MulAssign for Dd {
    #[inline]
    fn mul_assign(&mut self, b: Dd) {
        *self = *self * b;
    }
}
impl std::ops::DivAssign for Dd {
    #[inline]
    fn div_assign(&mut self, b: Dd) {
        *self = *self / b;
    }
}

impl PartialEq for Dd {
    #[inline]
    fn eq(&self, other: &Dd) -> bool {
        self.hi == other.hi && self.lo == other.lo
    }
}

impl PartialOrd for Dd {
    #[inline]
    fn partial_cmp(&self, other: &Dd) -> Option<std::cmp::Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(std::cmp::Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl From<f64> for Dd {
    fn from(v: f64) -> Dd {
        Dd::from_f64(v)
    }
}

impl From<i32> for Dd {
    fn from(v: i32) -> Dd {
        Dd::from_f64(v as f64)
    }
}

impl std::str::FromStr for Dd {
    type Err = ParseDdError;
    fn from_str(s: &str) -> std::result::Result<Dd, ParseDdError> {
        decimal::parse_dd(s)
    }
}

impl std::fmt::Display for Dd {
    /// 32 significant decimal digits, scientific notation, correctly rounded.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let digits = f.precision().unwrap_or(32);
        f.write_str(&decimal::format_dd(*self, digits))
    }
}

impl Dd {
    /// Decimal rendering with `sig` significant digits (scientific notation).
    pub fn to_decimal(self, sig: usize) -> String {
        decimal::format_dd(self, sig)
    }

    /// Parse a decimal string, correctly rounded to double-double.
    pub fn parse(s: &str) -> std::result::Result<Dd, ParseDdError> {
        decimal::parse_dd(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dd(s: &str) -> Dd {
        Dd::parse(s).unwrap()
    }

    fn assert_close(a: Dd, b: Dd, tol: f64, what: &str) {
        let scale = b.abs().hi.max(1e-300);
        let rel = (a - b).abs().hi / scale;
        assert!(rel <= tol, "{what}: {a} vs {b} (rel {rel:.3e})");
    }

    #[test]
    fn eft_identities() {
        let (s, e) = two_sum(1.0, 1e-20);
        assert_eq!(s, 1.0);
        assert_eq!(e, 1e-20);
        let (p, e) = two_prod(1.0 + 2f64.powi(-30), 1.0 + 2f64.powi(-30));
        assert_eq!(p + e, (1.0 + 2f64.powi(-30)) * (1.0 + 2f64.powi(-30)));
        assert_eq!(e, 2f64.powi(-60)); // exact low part of the square
        let _ = p;
    }

    #[test]
    fn add_keeps_106_bits() {
        let a = Dd::ONE;
        let b = Dd::from_f64(2f64.powi(-80));
        let s = a + b;
        assert_eq!(s.hi, 1.0);
        assert_eq!(s.lo, 2f64.powi(-80));
        let back = s - b;
        assert_eq!(back.hi, 1.0);
        assert_eq!(back.lo, 0.0);
    }

    #[test]
    fn mul_div_roundtrip() {
        let a = dd("1.2345678901234567890123456789012");
        let b = dd("9.8765432109876543210987654321098");
        let c = a * b / b;
        assert_close(c, a, 1e-31, "a*b/b");
    }

    #[test]
    fn sqrt_squares_back() {
        // [TRIVIAL] sqrt(2)^2 == 2 to working precision.
        let two = Dd::from_f64(2.0);
        let r = two.sqrt();
        assert_close(r.sqr(), two, 1e-31, "sqrt(2)^2");
        assert_close(
            r,
            dd("1.414213562373095048801688724209698078570"),
            1e-31,
            "sqrt(2)",
        );
    }

    #[test]
    fn powi_matches_repeated_mul() {
        let x = dd("0.97531");
        let mut acc = Dd::ONE;
        for _ in 0..13 {
            acc = acc * x;
        }
        assert_close(x.powi(13), acc, 1e-30, "x^13");
        assert_close(x.powi(-3) * x.powi(3), Dd::ONE, 1e-30, "x^-3*x^3");
    }

    #[test]
    fn rounding_and_floor() {
        assert_eq!(Dd::from_f64(2.5).round().hi, 3.0);
        assert_eq!(dd("2.4999999999999999999999").round().hi, 2.0);
        assert_eq!(dd("-3.7").floor().hi, -4.0);
        assert_eq!(Dd::from_f64(4.0).floor().hi, 4.0);
    }

    #[test]
    fn division_by_zero_is_infinite() {
        let q = Dd::ONE / Dd::ZERO;
        assert!(q.hi.is_infinite());
    }

    #[test]
    fn ordering() {
        let a = Dd::new(1.0, -1e-20);
        let b = Dd::ONE;
        assert!(a < b);
        assert!(b > a);
        assert!(a == a);
    }
}
