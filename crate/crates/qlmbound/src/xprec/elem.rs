//! Elementary functions for [`Dd`]: exp, ln, sin/cos, atan/atan2, powf.
//!
//! Strategy per function:
//! - `exp`: range reduction by ln 2 (three-component constant), then a Taylor
//!   series on `r/512` followed by nine repeated squarings of `e^x - 1`.
//! - `ln`: f64 seed plus two Newton steps on `exp`.
//! - `sin`/`cos`: argument reduction modulo π/2 against a three-component
//!   π/2, then Taylor series on `|r| ≤ π/4`.
//! - `atan2`: f64 seed plus two Newton steps on `sin`/`cos`.

use super::{consts, two_prod, Dd};

impl Dd {
    pub fn exp(self) -> Dd {
        let x = self;
        if x.hi > 700.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        if x.hi < -745.0 {
            return Dd::ZERO;
        }
        if x.is_zero() {
            return Dd::ONE;
        }
        // x = k ln2 + r, |r| <= ln2/2. The reduction uses all three ln2
        // components so r keeps full precision even for |k| ~ 1000.
        let k = (x.hi / consts::LN2_DD[0]).round();
        let mut r = x;
        for &c in &consts::LN2_DD {
            let (p, e) = two_prod(k, c);
            r = r - Dd::new(p, e);
        }
        // r -> r/512; exp via Taylor of expm1, then unscale by squaring:
        // (1+t)^2 - 1 = t^2 + 2t keeps everything in the small variable t.
        let rs = r.ldexp(-9);
        let mut term = rs;
        let mut sum = rs;
        let mut n = 1.0;
        loop {
            n += 1.0;
            term = term * rs / Dd::from_f64(n);
            sum += term;
            if term.hi.abs() < 1e-35 * sum.hi.abs() {
                break;
            }
        }
        let mut t = sum;
        for _ in 0..9 {
            t = t.sqr() + t.ldexp(1);
        }
        let e = t + Dd::ONE;
        let ki = k as i32;
        // Split the power of two to stay in range near the extremes.
        if ki > 1000 || ki < -1000 {
            e.ldexp(ki / 2).ldexp(ki - ki / 2)
        } else {
            e.ldexp(ki)
        }
    }

    pub fn ln(self) -> Dd {
        assert!(
            self.hi > 0.0,
            "Dd::ln: non-positive argument {:?}",
            self.hi
        );
        // Newton on exp(y) = x: y += x*exp(-y) - 1, quadratic from an f64 seed.
        let mut y = Dd::from_f64(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - Dd::ONE;
        }
        y
    }

    pub fn sin_cos(self) -> (Dd, Dd) {
        if self.is_zero() {
            return (Dd::ZERO, Dd::ONE);
        }
        // Reduce modulo pi/2 with a three-component constant. Valid for the
        // |x| <~ 1e12 range used here (the reduction loses ~log2|k| bits).
        let k = (self.hi / consts::PI_OVER_2_TD[0]).round();
        let mut r = self;
        for &c in &consts::PI_OVER_2_TD {
            let (p, e) = two_prod(k, c);
            r = r - Dd::new(p, e);
        }
        let (sr, cr) = sin_cos_taylor(r);
        // Quadrant from k mod 4.
        match (k as i64).rem_euclid(4) {
            0 => (sr, cr),
            1 => (cr, -sr),
            2 => (-sr, -cr),
            _ => (-cr, sr),
        }
    }

    pub fn sin(self) -> Dd {
        self.sin_cos().0
    }

    pub fn cos(self) -> Dd {
        self.sin_cos().1
    }

    pub fn tan(self) -> Dd {
        let (s, c) = self.sin_cos();
        s / c
    }

    /// Four-quadrant arctangent; f64 seed refined by two Newton steps on the
    /// residual `y cos a - x sin a` (scale-invariant in `(x, y)`).
    pub fn atan2(y: Dd, x: Dd) -> Dd {
        if y.is_zero() && x.is_zero() {
            return Dd::ZERO;
        }
        let mut a = Dd::from_f64(f64::atan2(y.hi, x.hi));
        for _ in 0..2 {
            let (s, c) = a.sin_cos();
            let num = y * c - x * s;
            let den = x * c + y * s;
            a = a + num / den;
        }
        a
    }

    pub fn atan(self) -> Dd {
        Dd::atan2(self, Dd::ONE)
    }

    pub fn asin(self) -> Dd {
        let c = (Dd::ONE - self.sqr()).sqrt();
        Dd::atan2(self, c)
    }

    /// General power for positive base.
    pub fn powf(self, y: Dd) -> Dd {
        if self.is_zero() {
            return Dd::ZERO;
        }
        (y * self.ln()).exp()
    }
}

/// Taylor sin and cos on |r| ≤ π/4 + slack.
fn sin_cos_taylor(r: Dd) -> (Dd, Dd) {
    let r2 = r.sqr();
    // sin = r * sum (-r^2)^k / (2k+1)!
    let mut term = r;
    let mut s = r;
    let mut n = 1.0;
    loop {
        term = -term * r2 / Dd::from_f64((n + 1.0) * (n + 2.0));
        s += term;
        n += 2.0;
        if term.hi.abs() < 1e-34 {
            break;
        }
    }
    // cos from sin: cos = sqrt(1 - sin^2) is ill-conditioned near |r|=pi/4's
    // complement; the direct series is cheap and unconditionally accurate.
    let mut term = Dd::ONE;
    let mut c = Dd::ONE;
    let mut n = 0.0;
    loop {
        term = -term * r2 / Dd::from_f64((n + 1.0) * (n + 2.0));
        c += term;
        n += 2.0;
        if term.hi.abs() < 1e-34 {
            break;
        }
    }
    (s, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dd(s: &str) -> Dd {
        Dd::parse(s).unwrap()
    }

    fn check(a: Dd, reference: &str, tol: f64, what: &str) {
        let b = dd(reference);
        let scale = b.abs().hi.max(1e-300);
        let rel = (a - b).abs().hi / scale;
        assert!(rel <= tol, "{what}: got {a}, want {b} (rel {rel:.3e})");
    }

    // [DERIVED] references below are 40-digit values from an independent
    // arbitrary-precision oracle.

    #[test]
    fn exp_reference_values() {
        check(
            Dd::ONE.exp(),
            "2.718281828459045235360287471352662497757",
            1e-31,
            "exp(1)",
        );
        check(
            Dd::from_f64(-1.0).exp(),
            "0.3678794411714423215955237701614608674458",
            1e-31,
            "exp(-1)",
        );
        check(
            Dd::from_f64(0.5).exp(),
            "1.648721270700128146848650787814163571654",
            1e-31,
            "exp(0.5)",
        );
        check(
            Dd::from_f64(10.0).exp(),
            "22026.46579480671651695790064528424436635",
            1e-31,
            "exp(10)",
        );
        check(
            Dd::from_f64(-20.0).exp(),
            "2.061153622438557827965940380155820976376e-9",
            1e-31,
            "exp(-20)",
        );
        check(
            dd("0.001").exp(),
            "1.001000500166708341668055753993058311563",
            1e-31,
            "exp(0.001)",
        );
        check(
            dd("34.7").exp(),
            "1174947663720104.340370774733623414580557",
            5e-31,
            "exp(34.7)",
        );
    }

    #[test]
    fn exp_spec_digits() {
        // exp(1) printed to 30 significant digits.
        assert_eq!(
            Dd::ONE.exp().to_decimal(30),
            "2.71828182845904523536028747135"
        );
    }

    #[test]
    fn ln_reference_values() {
        check(
            Dd::from_f64(2.0).ln(),
            "0.6931471805599453094172321214581765680755",
            1e-30,
            "ln(2)",
        );
        check(
            dd("0.7").ln(),
            "-0.3566749439387323789126387112411844779640",
            1e-30,
            "ln(0.7)",
        );
        check(
            dd("1e-6").ln(),
            "-13.81551055796427410410794872810618524561",
            1e-30,
            "ln(1e-6)",
        );
        check(
            dd("123456.789").ln(),
            "11.72364648718588098113995898391011158691",
            1e-30,
            "ln(123456.789)",
        );
        // Near-1 argument: the Newton update evaluates x*exp(-y) near 1, so
        // the error is absolute at the format's unit roundoff rather than
        // relative to the tiny result.
        let v = dd("1.0000001").ln();
        let r = dd("9.999999500000033333330833333533333322953e-8");
        let err = (v - r).abs().hi;
        assert!(err < 1e-31, "ln(1.0000001): abs err {err:.3e}");
    }

    #[test]
    fn exp_ln_roundtrip() {
        for &x in &[0.3, 1.7, 10.0, 55.5, 123.456, 1e-3] {
            let d = Dd::from_f64(x);
            let back = d.exp().ln();
            assert!(
                (back - d).abs().hi <= 1e-30 * x.abs().max(1.0),
                "ln(exp({x})) = {back}"
            );
        }
    }

    #[test]
    fn sin_cos_reference_values() {
        check(
            Dd::ONE.sin(),
            "0.8414709848078965066525023216302989996226",
            1e-31,
            "sin(1)",
        );
        check(
            Dd::from_f64(0.5).sin(),
            "0.4794255386042030002732879352155713880818",
            1e-31,
            "sin(0.5)",
        );
        check(
            Dd::from_f64(3.0).sin(),
            "0.1411200080598672221007448028081102798469",
            1e-30,
            "sin(3)",
        );
        check(
            Dd::from_f64(10.0).sin(),
            "-0.5440211108893698134047476618513772816836",
            1e-31,
            "sin(10)",
        );
        check(
            Dd::from_f64(100.0).sin(),
            "-0.5063656411097587936565576104597854320650",
            1e-30,
            "sin(100)",
        );
        check(
            dd("-7.25").sin(),
            "-0.8230808790115054584216711834120565157150",
            1e-31,
            "sin(-7.25)",
        );
        check(
            Dd::ONE.cos(),
            "0.5403023058681397174009366074429766037323",
            1e-31,
            "cos(1)",
        );
        check(
            Dd::from_f64(3.0).cos(),
            "-0.9899924966004454572715727947312613023937",
            1e-31,
            "cos(3)",
        );
        check(
            Dd::from_f64(100.0).cos(),
            "0.8623188722876839341019385139508425355101",
            1e-30,
            "cos(100)",
        );
        check(
            dd("-7.25").cos(),
            "0.5679241732886948644238363482181612943445",
            1e-31,
            "cos(-7.25)",
        );
    }

    #[test]
    fn pythagorean_identity() {
        for i in 0..50 {
            let x = Dd::from_f64(-12.0 + 0.493 * i as f64);
            let (s, c) = x.sin_cos();
            let r = s.sqr() + c.sqr() - Dd::ONE;
            assert!(r.abs().hi < 1e-31, "sin^2+cos^2 at {}", x.hi);
        }
    }

    #[test]
    fn atan_reference_values() {
        check(
            Dd::ONE.atan(),
            "0.7853981633974483096156608458198757210493",
            1e-31,
            "atan(1)",
        );
        check(
            dd("0.1").atan(),
            "0.09966865249116202737844611987802059024328",
            1e-31,
            "atan(0.1)",
        );
        check(
            Dd::from_f64(-3.0).atan(),
            "-1.249045772398254425829917077281090123078",
            1e-31,
            "atan(-3)",
        );
        check(
            Dd::from_f64(1000.0).atan(),
            "1.569796327128229752564797882004830898087",
            1e-31,
            "atan(1000)",
        );
        check(
            dd("0.999").atan(),
            "0.7848979133141150013031697743878289438352",
            1e-31,
            "atan(0.999)",
        );
    }

    #[test]
    fn atan2_quadrants() {
        let a = Dd::atan2(Dd::ONE, Dd::ONE);
        check(a, "0.7853981633974483096156608458198757210493", 1e-31, "atan2 I");
        let a = Dd::atan2(Dd::ONE, -Dd::ONE);
        check(a, "2.356194490192344928846982537459627163148", 1e-31, "atan2 II");
        let a = Dd::atan2(-Dd::ONE, -Dd::ONE);
        check(a, "-2.356194490192344928846982537459627163148", 1e-31, "atan2 III");
        let a = Dd::atan2(-Dd::ONE, Dd::ONE);
        check(a, "-0.7853981633974483096156608458198757210493", 1e-31, "atan2 IV");
    }

    #[test]
    fn spec_pi_over_4_digits() {
        assert_eq!(
            Dd::ONE.atan().to_decimal(30),
            "0.785398163397448309615660845820"
        );
    }

    #[test]
    fn tan_atan_roundtrip() {
        for i in 0..40 {
            let x = Dd::from_f64(-1.5 + 0.077 * i as f64);
            let t = x.tan();
            let back = t.atan();
            assert!((back - x).abs().hi < 1e-30, "atan(tan(x)) at {}", x.hi);
        }
    }

    #[test]
    fn powf_consistency() {
        let x = dd("3.21");
        check(
            x.powf(Dd::from_f64(2.0)),
            &x.sqr().to_decimal(35),
            1e-30,
            "x^2 via powf",
        );
    }
}
