//! The Airy pair `(Ai, Ai')` in double-double precision.
//!
//! Three regimes, chosen so every one delivers ≲1e-26 relative error:
//! - `|x| <= 4.5`: Maclaurin series (no cancellation growth this close in).
//! - `x >= 13` and `x <= -13`: Poincaré asymptotic series in
//!   `ζ = (2/3)|x|^{3/2}` (smallest term ≲ e^{-2ζ} ≤ 7e-28 at the boundary).
//! - the gaps `(4.5, 13)` and `(-13, -4.5)`: Taylor-series integration of
//!   `y'' = x y` from the nearest trusted anchor (13 going down, or -4.5
//!   going down), which follows the locally growing direction of `Ai` on both
//!   paths and therefore keeps relative error bounded.
//!
//! Values underflow (gracefully, through subnormals) for `x ≳ 105`.

use super::{consts, Dd};

impl Dd {
    /// Returns `(Ai(x), Ai'(x))`.
    pub fn airy(self) -> (Dd, Dd) {
        let x = self;
        assert!(x.is_finite(), "Dd::airy: non-finite argument");
        let xf = x.hi;
        if xf.abs() <= 4.5 {
            airy_maclaurin(x)
        } else if xf >= 13.0 {
            airy_asymptotic_pos(x)
        } else if xf <= -13.0 {
            airy_asymptotic_neg(x)
        } else if xf > 0.0 {
            // Step down from the asymptotic anchor at 13.
            airy_stepped(Dd::from_f64(13.0), x)
        } else {
            // Step down from the Maclaurin anchor at -4.5.
            airy_stepped(Dd::from_f64(-4.5), x)
        }
    }
}

/// Maclaurin series: Ai = c1 f - c2 g with
/// f = Σ x^{3k} Π 1/((3j-1)3j), g = Σ x^{3k+1} Π 1/(3j(3j+1)).
fn airy_maclaurin(x: Dd) -> (Dd, Dd) {
    let c1 = Dd::raw(consts::AI0_DD[0], consts::AI0_DD[1]);
    let c2 = -Dd::raw(consts::AIP0_DD[0], consts::AIP0_DD[1]);
    if x.is_zero() {
        return (c1, -c2);
    }
    let x3 = x * x.sqr();
    let inv_x = x.recip();
    let mut tf = Dd::ONE;
    let mut f = Dd::ONE;
    let mut df = Dd::ZERO;
    let mut tg = x;
    let mut g = x;
    let mut dg = Dd::ONE;
    let mut k = 1.0f64;
    loop {
        tf = tf * x3 / Dd::from_f64((3.0 * k - 1.0) * (3.0 * k));
        f += tf;
        df += tf.mul_f64(3.0 * k) * inv_x;
        tg = tg * x3 / Dd::from_f64((3.0 * k) * (3.0 * k + 1.0));
        g += tg;
        dg += tg.mul_f64(3.0 * k + 1.0) * inv_x;
        k += 1.0;
        if tf.hi.abs() < 1e-36 && tg.hi.abs() < 1e-36 {
            break;
        }
        assert!(k < 200.0, "airy_maclaurin failed to converge");
    }
    (c1 * f - c2 * g, c1 * df - c2 * dg)
}

/// DLMF 9.7 coefficient pair (u_k, v_k); returns the next (u, v) from u.
#[inline]
fn next_u(u: Dd, k: f64) -> (Dd, Dd) {
    let u = u.mul_f64((6.0 * k - 5.0) * (6.0 * k - 1.0)) / Dd::from_f64(72.0 * k);
    let v = u.mul_f64(6.0 * k + 1.0) / Dd::from_f64(1.0 - 6.0 * k);
    (u, v)
}

/// x >= 13: Ai ~ e^{-ζ}/(2√π x^{1/4}) Σ (-1)^k u_k ζ^{-k},
/// Ai' ~ -x^{1/4} e^{-ζ}/(2√π) Σ (-1)^k v_k ζ^{-k}.
fn airy_asymptotic_pos(x: Dd) -> (Dd, Dd) {
    let sqrt_x = x.sqrt();
    let zeta = x * sqrt_x * Dd::from_f64(2.0) / Dd::from_f64(3.0);
    let inv_zeta = zeta.recip();
    let mut u = Dd::ONE;
    let mut sum_u = Dd::ONE;
    let mut sum_v = Dd::ONE;
    let mut pw = Dd::ONE;
    let mut k = 1.0f64;
    let mut last = f64::INFINITY;
    loop {
        let (nu, nv) = next_u(u, k);
        u = nu;
        pw = -pw * inv_zeta;
        let tu = u * pw;
        if tu.hi.abs() >= last {
            break; // divergent tail reached
        }
        last = tu.hi.abs();
        sum_u += tu;
        sum_v += nv * pw;
        k += 1.0;
        if last < 1e-36 || k > 60.0 {
            break;
        }
    }
    let sqrt_pi = Dd::raw(consts::SQRT_PI_DD[0], consts::SQRT_PI_DD[1]);
    let x14 = sqrt_x.sqrt();
    let e = (-zeta).exp();
    let common = e / (sqrt_pi.ldexp(1));
    (common / x14 * sum_u, -(common * x14) * sum_v)
}

/// x <= -13 (z = -x): oscillatory expansion,
/// Ai(-z) ~ (1/(√π z^{1/4})) [cos(ζ-π/4) Σ(-1)^k u_{2k} ζ^{-2k}
///                           + sin(ζ-π/4) Σ(-1)^k u_{2k+1} ζ^{-2k-1}]
/// Ai'(-z) ~ (z^{1/4}/√π) [sin(ζ-π/4) Σ(-1)^k v_{2k} ζ^{-2k}
///                        - cos(ζ-π/4) Σ(-1)^k v_{2k+1} ζ^{-2k-1}].
fn airy_asymptotic_neg(x: Dd) -> (Dd, Dd) {
    let z = -x;
    let sqrt_z = z.sqrt();
    let zeta = z * sqrt_z * Dd::from_f64(2.0) / Dd::from_f64(3.0);
    let inv_zeta = zeta.recip();
    // Even/odd-index partial sums with alternating signs per index pair.
    let mut u = Dd::ONE;
    let mut pw = Dd::ONE; // ζ^{-k} with sign (-1)^{floor(k/2)} applied below
    let mut su_even = Dd::ONE;
    let mut su_odd = Dd::ZERO;
    let mut sv_even = Dd::ONE;
    let mut sv_odd = Dd::ZERO;
    let mut k = 1.0f64;
    let mut last = f64::INFINITY;
    loop {
        let (nu, nv) = next_u(u, k);
        u = nu;
        pw = pw * inv_zeta;
        let ki = k as i64;
        let sign = if (ki / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let tu = u * pw.mul_f64(sign);
        let tv = nv * pw.mul_f64(sign);
        if tu.hi.abs() >= last {
            break;
        }
        last = tu.hi.abs();
        if ki % 2 == 0 {
            su_even += tu;
            sv_even += tv;
        } else {
            su_odd += tu;
            sv_odd += tv;
        }
        k += 1.0;
        if last < 1e-36 || k > 60.0 {
            break;
        }
    }
    let sqrt_pi = Dd::raw(consts::SQRT_PI_DD[0], consts::SQRT_PI_DD[1]);
    let z14 = sqrt_z.sqrt();
    let phase = zeta - Dd::pi_over_4();
    let (s, c) = phase.sin_cos();
    let ai = (c * su_even + s * su_odd) / (sqrt_pi * z14);
    let aip = (s * sv_even - c * sv_odd) * z14 / sqrt_pi;
    (ai, aip)
}

/// Taylor-series integration of y'' = t y from `from` down to `to`.
fn airy_stepped(from: Dd, to: Dd) -> (Dd, Dd) {
    let (mut y, mut dy) = if from.hi > 0.0 {
        airy_asymptotic_pos(from)
    } else {
        airy_maclaurin(from)
    };
    let span = (to - from).hi;
    let n_steps = (span.abs() / 0.5).ceil().max(1.0);
    let h = (to - from) / Dd::from_f64(n_steps);
    let mut t = from;
    for _ in 0..n_steps as usize {
        let (ny, ndy) = taylor_step(t, y, dy, h);
        y = ny;
        dy = ndy;
        t = t + h;
    }
    (y, dy)
}

/// One Taylor step: given y(t0), y'(t0) for y'' = t y, evaluate at t0 + h.
fn taylor_step(t0: Dd, y: Dd, dy: Dd, h: Dd) -> (Dd, Dd) {
    // a_{n+2} = (t0 a_n + a_{n-1}) / ((n+1)(n+2)), a_{-1} = 0.
    let mut a_nm1 = Dd::ZERO; // a_{n-1}
    let mut a_n = y; // a_0
    let mut a_np1 = dy; // a_1
    let mut hp = h; // h^{n+1}
    let mut sum_y = y + dy * h;
    let mut sum_dy = dy;
    let scale = y.hi.abs().max(dy.hi.abs()).max(1e-300);
    let mut n = 0.0f64;
    loop {
        let a_np2 = (t0 * a_n + a_nm1) / Dd::from_f64((n + 1.0) * (n + 2.0));
        hp = hp * h;
        // hp == h^{n+2} here.
        let term = a_np2 * hp;
        sum_y += term;
        sum_dy += a_np2 * (hp / h).mul_f64(n + 2.0);
        a_nm1 = a_n;
        a_n = a_np1;
        a_np1 = a_np2;
        n += 1.0;
        if term.hi.abs() < 1e-37 * scale && n > 8.0 {
            break;
        }
        assert!(n < 120.0, "airy taylor_step failed to converge");
    }
    (sum_y, sum_dy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dd(s: &str) -> Dd {
        Dd::parse(s).unwrap()
    }

    // [DERIVED] 40-digit reference values from an arbitrary-precision oracle.
    const CASES: &[(&str, &str, &str)] = &[
        (
            "-30.25",
            "-0.2369004284915597311198069023814335703003",
            "-0.2321973323726892749173641388708401234283",
        ),
        (
            "-20",
            "-0.1764061270779846895901922922194775049259",
            "0.8928628567364712383984099341143186250162",
        ),
        (
            "-12.5",
            "-0.2762745613811602482251711382965334893478",
            "-0.4193313304195051644060210937262784795921",
        ),
        (
            "-8",
            "-0.05270505035638620262208267579388862081638",
            "0.9355609381983065510255224621326357323637",
        ),
        (
            "-5",
            "0.3507610090241143197880163276967422214844",
            "0.3271928185544431367948786774266291979275",
        ),
        (
            "-1",
            "0.5355608832923521187995165656388747074669",
            "-0.01016056711664520939504546984535756184189",
        ),
        (
            "-0.5",
            "0.4757280916105395887986437782813071504876",
            "-0.2040816703395473861448172017949446083749",
        ),
        (
            "0",
            "0.3550280538878172392600631860041831763980",
            "-0.2588194037928067984051835601892039634791",
        ),
        (
            "0.5",
            "0.2316936064808334897691252545099217396184",
            "-0.2249105326646838931359969903285832148250",
        ),
        (
            "1",
            "0.1352924163128814155241474235154663061749",
            "-0.1591474412967932127875002524972296865739",
        ),
        (
            "2",
            "0.03492413042327437913532208079180760976106",
            "-0.05309038443365363170399918587870349124856",
        ),
        (
            "3.75",
            "0.001580071717921013257845719138246103806533",
            "-0.003157514753239784192030096292774192523970",
        ),
        (
            "4.3",
            "0.0005077871681561492926417808254094030740124",
            "-0.001080703305224640330973915065480188924303",
        ),
        (
            "6",
            "0.000009947694360252889570238847668828779047343",
            "-0.00002476520039703495475418182538698540387637",
        ),
        (
            "8",
            "4.692207616099231625649081703488224455253e-8",
            "-1.341439297906786574291153707932024241570e-7",
        ),
        (
            "9",
            "2.471168430872489843289241134339096458065e-9",
            "-7.480641389658946412759545273419122256691e-9",
        ),
        (
            "11.5",
            "7.814290183962854346130297587929236294189e-13",
            "-2.666679967504531405901069622158442386312e-12",
        ),
        (
            "13",
            "3.981776078833335363022547078760319691402e-15",
            "-1.443208057397262604448112020464816196788e-14",
        ),
        (
            "17",
            "7.050197298388614542441447162869847179008e-22",
            "-2.917148219293313793259713373314763801757e-21",
        ),
        (
            "20",
            "1.691672868670540313553560212509351322370e-27",
            "-7.586391625748354960515371705912807505817e-27",
        ),
        (
            "28",
            "1.552343448341592586671362486312389727547e-44",
            "-8.228031752356181205744313508361310544412e-44",
        ),
        (
            "30.25",
            "8.117956942534393861793209113106648555329e-50",
            "-4.471560394793337836456022371691564181240e-49",
        ),
        (
            "40",
            "6.365742658552914909567364686554155772682e-75",
            "-4.030017977600678042292694418417540525338e-74",
        ),
        (
            "60",
            "2.783148709496935537097603938247637105692e-136",
            "-2.156975811209473787248144445419786648188e-135",
        ),
    ];

    #[test]
    fn reference_values() {
        for &(xs, ais, aips) in CASES {
            let x = dd(xs);
            let (ai, aip) = x.airy();
            for (got, want, name) in [(ai, dd(ais), "Ai"), (aip, dd(aips), "Ai'")] {
                let rel = (got - want).abs().hi / want.abs().hi;
                assert!(
                    rel <= 1e-25,
                    "{name}({xs}) = {got}, want {want} (rel {rel:.3e})"
                );
            }
        }
    }

    #[test]
    fn first_negative_zero() {
        // [DERIVED] Ai vanishes at x = -2.33810741045976703848919725244673...
        let x = dd("-2.338107410459767038489197252446735440638");
        let (ai, aip) = x.airy();
        assert!(
            ai.abs().hi < 1e-26,
            "Ai at first zero should vanish, got {ai}"
        );
        let want = dd("0.7012108227206913624906916560315387022535");
        let rel = (aip - want).abs().hi / want.hi;
        assert!(rel <= 1e-25, "Ai' at first zero: {aip} (rel {rel:.3e})");
    }

    #[test]
    fn wronskian_identity() {
        // Ai satisfies y'' = x y; check the local Wronskian-like consistency
        // via a tight finite Taylor step: values at x and x+h must agree with
        // stepping from x.
        for &x0 in &[-11.0, -3.0, 0.7, 5.0, 10.0, 16.0] {
            let x = Dd::from_f64(x0);
            let h = Dd::from_f64(0.25);
            let (y, dy) = x.airy();
            let (ys, dys) = taylor_step(x, y, dy, h);
            let (yt, dyt) = (x + h).airy();
            let rel = (ys - yt).abs().hi / yt.abs().hi.max(1e-300);
            let reld = (dys - dyt).abs().hi / dyt.abs().hi.max(1e-300);
            assert!(
                rel < 1e-24 && reld < 1e-24,
                "step consistency at {x0}: {rel:.3e} {reld:.3e}"
            );
        }
    }

    #[test]
    fn deep_positive_underflow_is_graceful() {
        let (ai, aip) = Dd::from_f64(150.0).airy();
        assert!(ai.hi >= 0.0 && ai.hi < 1e-300);
        assert!(aip.hi <= 0.0);
    }
}
