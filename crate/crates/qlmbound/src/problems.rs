//! The catalogue of radial/one-dimensional eigenproblems.
//!
//! Every problem provides the local wavenumber `k²(E, r)` of
//! `χ'' + k²χ = 0` in two flavors:
//! - **exact**: `2m(E−V) − l(l+1)/r²`, used by the oracle and the QLM phase
//!   iteration;
//! - **Langer**: `2m(E−V) − (l+½)²/r²` for radial problems (the uniformized
//!   semiclassical form), with the centrifugal term omitted entirely for
//!   symmetric even-parity problems. WKB quantization and the Airy seed use
//!   this flavor.
//!
//! The relativistic Coulomb problem is solved in its reduced form: the radial
//! variable is `ρ`, the equation is `χ'' = [b² + V(ρ) + L(L+1)/ρ²]χ` with
//! `b² = (1−E²)/(4α²E²)`, and
//! `V(ρ) = −1/(2ρ) − (α²/4)/ρ² + (3α²/4)/(ρ²(ρ+α²)²)`.
//! Its Langer flavor additionally drops the short-range `(3α²/4)/…` wall —
//! the semiclassical convention that reproduces published WKB values — and
//! WKB energies map back through the linearized relation `E = 1/(1+4α²b²)`
//! while the exact equation is solved directly in `E`.

use crate::scalar::Scalar;
use crate::xprec::Dd;
use crate::{Result, SolveError};

/// Behavior of the wavefunction at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    /// Radial problems: χ(0) = 0, χ ~ r^{l+1}.
    NodeAtOrigin,
    /// Symmetric 1-D problems solved on the half line: χ'(0) = 0.
    ZeroDerivAtOrigin,
}

#[derive(Clone, Debug)]
pub enum PotentialKind {
    /// V = r⁵/2.
    Anharmonic,
    /// V = ln r.
    Logarithmic,
    /// V = −v0 / (1 + exp((r−r0)/a)).
    WoodSaxon { v0: Dd, r0: Dd, a: Dd },
    /// V = g²(r²−a²)²/2.
    TwoPower { g2: Dd, a: Dd },
    /// V = r²/2.
    Harmonic,
    /// Reduced relativistic Coulomb problem in ρ (see module docs).
    BreitCoulomb { alpha: Dd },
}

#[derive(Clone, Debug)]
pub struct Problem {
    pub name: String,
    pub kind: PotentialKind,
    /// Mass m entering 2m(E−V).
    pub mass: Dd,
    /// Orbital angular momentum of the exact centrifugal term.
    pub l: u32,
    pub parity: Parity,
    /// Inner edge of the integration domain (0 allowed only for even parity).
    pub r_min: f64,
    /// Outer edge; chosen so the forbidden-region action beyond the outer
    /// turning point exceeds ~55 for every catalogued state.
    pub r_max: f64,
}

/// A target state: number of radial nodes plus its table label.
#[derive(Clone, Debug)]
pub struct StateSpec {
    pub nodes: u32,
    pub label: String,
}

impl StateSpec {
    pub fn new(nodes: u32, label: &str) -> StateSpec {
        StateSpec {
            nodes,
            label: label.to_string(),
        }
    }
}

impl Problem {
    // ----- constructors ----------------------------------------------------

    /// V = r⁵/2, m = 1, s-states.
    pub fn anharmonic5() -> Problem {
        Problem {
            name: "anharmonic5".into(),
            kind: PotentialKind::Anharmonic,
            mass: Dd::ONE,
            l: 0,
            parity: Parity::NodeAtOrigin,
            r_min: 1e-8,
            r_max: 6.0,
        }
    }

    /// V = ln r, m = 1/2, s-states.
    pub fn log_r() -> Problem {
        Problem {
            name: "log".into(),
            kind: PotentialKind::Logarithmic,
            mass: Dd::from_f64(0.5),
            l: 0,
            parity: Parity::NodeAtOrigin,
            r_min: 1e-8,
            r_max: 80.0,
        }
    }

    /// V = −24/(1+exp((r−1)/0.2)), m = 1, s-states.
    pub fn woodsaxon() -> Problem {
        Problem {
            name: "woodsaxon".into(),
            kind: PotentialKind::WoodSaxon {
                v0: Dd::from_f64(24.0),
                r0: Dd::ONE,
                // 0.2 is not a binary fraction; parse it, never widen.
                a: Dd::parse("0.2").unwrap(),
            },
            mass: Dd::ONE,
            l: 0,
            parity: Parity::NodeAtOrigin,
            r_min: 1e-8,
            r_max: 130.0,
        }
    }

    /// Symmetric double well V = g²(r²−a²)²/2, g² = 1/64, a = 4, m = 1.
    /// `even` selects the parity: "+" states have χ'(0) = 0, "−" states are
    /// solved as radial s-states (node at the origin).
    pub fn doublewell(even: bool) -> Problem {
        Problem {
            name: "doublewell".into(),
            kind: PotentialKind::TwoPower {
                g2: Dd::from_f64(1.0 / 64.0),
                a: Dd::from_f64(4.0),
            },
            mass: Dd::ONE,
            l: 0,
            parity: if even {
                Parity::ZeroDerivAtOrigin
            } else {
                Parity::NodeAtOrigin
            },
            r_min: if even { 0.0 } else { 1e-8 },
            r_max: 12.5,
        }
    }

    /// V = r²/2, m = 1; exact spectrum E_n = n + 1/2 over both parities.
    pub fn harmonic(even: bool) -> Problem {
        Problem {
            name: "harmonic".into(),
            kind: PotentialKind::Harmonic,
            mass: Dd::ONE,
            l: 0,
            parity: if even {
                Parity::ZeroDerivAtOrigin
            } else {
                Parity::NodeAtOrigin
            },
            r_min: if even { 0.0 } else { 1e-8 },
            r_max: 14.0,
        }
    }

    /// Reduced relativistic Coulomb problem for orbital momentum `big_l`;
    /// `nu = n_r + 1 + big_l` sets the domain size.
    pub fn breitcoulomb(alpha: Dd, big_l: u32, nu: u32) -> Problem {
        Problem {
            name: "breitcoulomb".into(),
            kind: PotentialKind::BreitCoulomb { alpha },
            mass: Dd::from_f64(0.5), // 2m = 1 in the reduced equation
            l: big_l,
            parity: Parity::NodeAtOrigin,
            r_min: 1e-7,
            r_max: 320.0 * nu as f64,
        }
    }

    /// Default fine-structure constant, α = 1/137.03599976.
    pub fn default_alpha() -> Dd {
        Dd::ONE / Dd::parse("137.03599976").unwrap()
    }

    /// Look up a built-in problem together with its state (some catalogue
    /// entries, like the double well, pick parity per state).
    pub fn builtin(name: &str, state: &str, alpha: Option<Dd>) -> Result<(Problem, StateSpec)> {
        let ns = |label: &str| -> Result<u32> {
            // "1s".."9s" -> nodes 0..8
            let d = label
                .chars()
                .next()
                .and_then(|c| c.to_digit(10))
                .filter(|&d| d >= 1)
                .ok_or_else(|| SolveError::Config(format!("unknown state `{label}`")))?;
            Ok(d - 1)
        };
        match name {
            "anharmonic5" => Ok((Problem::anharmonic5(), StateSpec::new(ns(state)?, state))),
            "log" => Ok((Problem::log_r(), StateSpec::new(ns(state)?, state))),
            "woodsaxon" => Ok((Problem::woodsaxon(), StateSpec::new(ns(state)?, state))),
            "doublewell" => {
                let even = match state.chars().last() {
                    Some('+') => true,
                    Some('-') => false,
                    _ => {
                        return Err(SolveError::Config(format!(
                            "doublewell states need a parity suffix, e.g. 1s+ or 2s- (got `{state}`)"
                        )))
                    }
                };
                let base = &state[..state.len() - 1];
                Ok((Problem::doublewell(even), StateSpec::new(ns(base)?, state)))
            }
            "harmonic" => {
                // States labelled by total quantum number n0..n9; parity
                // follows from it.
                let n: u32 = state
                    .strip_prefix('n')
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| {
                        SolveError::Config(format!("harmonic states are n0, n1, ... (got `{state}`)"))
                    })?;
                let even = n % 2 == 0;
                Ok((Problem::harmonic(even), StateSpec::new(n / 2, state)))
            }
            "breitcoulomb" => {
                let alpha = alpha.unwrap_or_else(Problem::default_alpha);
                let (nodes, big_l, nu, label) = match state {
                    "1s" => (0, 0, 1, "1s"),
                    "2s" => (1, 0, 2, "2s"),
                    "2p" => (0, 1, 2, "2p"),
                    "3p" => (1, 1, 3, "3p"),
                    _ => {
                        return Err(SolveError::Config(format!(
                            "breitcoulomb states are 1s, 2s, 2p, 3p (got `{state}`)"
                        )))
                    }
                };
                Ok((
                    Problem::breitcoulomb(alpha, big_l, nu),
                    StateSpec::new(nodes, label),
                ))
            }
            _ => Err(SolveError::Config(format!("unknown problem `{name}`"))),
        }
    }

    pub fn builtin_names() -> &'static [&'static str] {
        &["anharmonic5", "log", "woodsaxon", "doublewell", "harmonic", "breitcoulomb"]
    }

    // ----- potential and wavenumber ---------------------------------------

    pub fn is_breit(&self) -> bool {
        matches!(self.kind, PotentialKind::BreitCoulomb { .. })
    }

    /// V(r) (for Breit–Coulomb: the reduced ρ-potential without the
    /// centrifugal term, wall included).
    pub fn potential<S: Scalar>(&self, r: S) -> S {
        match &self.kind {
            PotentialKind::Anharmonic => {
                r.powi(5) / S::from_f64(2.0)
            }
            PotentialKind::Logarithmic => r.ln(),
            PotentialKind::WoodSaxon { v0, r0, a } => {
                let z = (r - S::from_dd(*r0)) / S::from_dd(*a);
                // Evaluate with exp of the negative argument so the tail
                // (z up to ~650 at r_max) never overflows.
                if z.to_f64() > 0.0 {
                    let em = (-z).exp();
                    -S::from_dd(*v0) * em / (em + S::one())
                } else {
                    -S::from_dd(*v0) / (S::one() + z.exp())
                }
            }
            PotentialKind::TwoPower { g2, a } => {
                let u = r * r - S::from_dd(*a * *a);
                S::from_dd(*g2) * u * u / S::from_f64(2.0)
            }
            PotentialKind::Harmonic => r * r / S::from_f64(2.0),
            PotentialKind::BreitCoulomb { alpha } => {
                let a2 = S::from_dd(alpha.sqr());
                let r2 = r * r;
                let half = S::from_f64(0.5);
                let quarter = S::from_f64(0.25);
                let wall_den = r + a2;
                -half / r - quarter * a2 / r2
                    + S::from_f64(0.75) * a2 / (r2 * wall_den * wall_den)
            }
        }
    }

    /// dV/dr, analytic (needed by the Langer seed's derivative).
    pub fn potential_deriv<S: Scalar>(&self, r: S) -> S {
        match &self.kind {
            PotentialKind::Anharmonic => {
                S::from_f64(2.5) * r.powi(4)
            }
            PotentialKind::Logarithmic => S::one() / r,
            PotentialKind::WoodSaxon { v0, r0, a } => {
                // v0·e^z/(a(1+e^z)²) is symmetric under z → −z; evaluate with
                // exp(−|z|) so neither tail overflows.
                let ad = S::from_dd(*a);
                let z = (r - S::from_dd(*r0)) / ad;
                let em = (-z.abs()).exp();
                let den = S::one() + em;
                S::from_dd(*v0) * em / (ad * den * den)
            }
            PotentialKind::TwoPower { g2, a } => {
                let u = r * r - S::from_dd(*a * *a);
                S::from_dd(*g2) * u * (r + r)
            }
            PotentialKind::Harmonic => r,
            PotentialKind::BreitCoulomb { alpha } => {
                // dV/dρ = 1/(2ρ²) + α²/(2ρ³) − (3α²/2)(2ρ+α²)/(ρ³(ρ+α²)³).
                let a2 = S::from_dd(alpha.sqr());
                let r2 = r * r;
                let r3 = r2 * r;
                let half = S::from_f64(0.5);
                let w = r + a2;
                half / r2 + half * a2 / r3
                    - S::from_f64(1.5) * a2 * (r + r + a2) / (r3 * w * w * w)
            }
        }
    }

    /// b²(E) = (1−E²)/(4α²E²) for the Breit–Coulomb reduction.
    pub fn breit_b2<S: Scalar>(&self, e: S) -> S {
        match &self.kind {
            PotentialKind::BreitCoulomb { alpha } => {
                let a2 = S::from_dd(alpha.sqr());
                (S::one() - e * e) / (S::from_f64(4.0) * a2 * e * e)
            }
            _ => unreachable!("breit_b2 on a non-Breit problem"),
        }
    }

    /// Inverse of the linearized WKB energy map: E = 1/(1+4α²b²).
    pub fn breit_wkb_energy<S: Scalar>(&self, b2: S) -> S {
        match &self.kind {
            PotentialKind::BreitCoulomb { alpha } => {
                let a2 = S::from_dd(alpha.sqr());
                S::one() / (S::one() + S::from_f64(4.0) * a2 * b2)
            }
            _ => unreachable!("breit_wkb_energy on a non-Breit problem"),
        }
    }

    /// Exact local wavenumber squared: 2m(E−V) − l(l+1)/r² (Breit–Coulomb:
    /// −b²(E) − V(ρ) − L(L+1)/ρ²).
    pub fn ksq_exact<S: Scalar>(&self, e: S, r: S) -> S {
        let v = self.potential(r);
        let base = if self.is_breit() {
            -self.breit_b2(e) - v
        } else {
            S::from_dd(self.mass.ldexp(1)) * (e - v)
        };
        if self.l > 0 {
            base - S::from_f64((self.l * (self.l + 1)) as f64) / (r * r)
        } else {
            base
        }
    }

    /// The same with the energy term fixed directly (used by solvers that
    /// iterate on b² for Breit–Coulomb): for non-Breit problems `eterm` is E.
    pub fn ksq_exact_deriv<S: Scalar>(&self, r: S) -> S {
        // d(k²)/dr at fixed E.
        let dv = self.potential_deriv(r);
        let base = if self.is_breit() {
            -dv
        } else {
            -S::from_dd(self.mass.ldexp(1)) * dv
        };
        if self.l > 0 {
            base + S::from_f64((2 * self.l * (self.l + 1)) as f64) / (r * r * r)
        } else {
            base
        }
    }

    /// Langer-uniformized wavenumber squared (see module docs).
    pub fn ksq_langer<S: Scalar>(&self, e: S, r: S) -> S {
        match (&self.kind, self.parity) {
            (PotentialKind::BreitCoulomb { alpha }, _) => {
                // Wall dropped; centrifugal (L+1/2)² − α²/4 over ρ².
                let a2 = S::from_dd(alpha.sqr());
                let half = S::from_f64(0.5);
                let lh = S::from_f64(self.l as f64 + 0.5);
                let c = lh * lh - a2 / S::from_f64(4.0);
                -self.breit_b2(e) + half / r - c / (r * r)
            }
            (_, Parity::ZeroDerivAtOrigin) => {
                S::from_dd(self.mass.ldexp(1)) * (e - self.potential(r))
            }
            (_, Parity::NodeAtOrigin) => {
                let lh = S::from_f64(self.l as f64 + 0.5);
                S::from_dd(self.mass.ldexp(1)) * (e - self.potential(r)) - lh * lh / (r * r)
            }
        }
    }

    /// d(k²_Langer)/dr at fixed E.
    pub fn ksq_langer_deriv<S: Scalar>(&self, r: S) -> S {
        match (&self.kind, self.parity) {
            (PotentialKind::BreitCoulomb { alpha }, _) => {
                let a2 = S::from_dd(alpha.sqr());
                let half = S::from_f64(0.5);
                let lh = S::from_f64(self.l as f64 + 0.5);
                let c = lh * lh - a2 / S::from_f64(4.0);
                let r2 = r * r;
                -half / r2 + S::from_f64(2.0) * c / (r2 * r)
            }
            (_, Parity::ZeroDerivAtOrigin) => {
                -S::from_dd(self.mass.ldexp(1)) * self.potential_deriv(r)
            }
            (_, Parity::NodeAtOrigin) => {
                let lh = S::from_f64(self.l as f64 + 0.5);
                -S::from_dd(self.mass.ldexp(1)) * self.potential_deriv(r)
                    + S::from_f64(2.0) * lh * lh / (r * r * r)
            }
        }
    }

    /// Minimum of the potential over the domain (coarse scan; used to bracket
    /// energies from below).
    pub fn potential_min(&self) -> f64 {
        let lo = self.r_min.max(1e-6);
        let mut vmin = f64::INFINITY;
        for i in 0..=4096 {
            let r = lo + (self.r_max - lo) * i as f64 / 4096.0;
            let v: f64 = self.potential(r);
            if v < vmin {
                vmin = v;
            }
        }
        vmin
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn woodsaxon_spec_value() {
        // [TRIVIAL] V(1) = -24/2 = -12 exactly at the half-depth radius.
        let p = Problem::woodsaxon();
        let v: Dd = p.potential(Dd::ONE);
        assert!((v + Dd::from_f64(12.0)).abs().hi < 1e-30, "V(1) = {v}");
    }

    #[test]
    fn doublewell_barrier_height() {
        // [TRIVIAL] V(0) = g² a⁴/2 = (1/64)·256/2 = 2.
        let p = Problem::doublewell(true);
        let v: f64 = p.potential(0.0f64);
        assert_eq!(v, 2.0);
        // Wells at r = ±4 with V = 0.
        let v4: f64 = p.potential(4.0f64);
        assert_eq!(v4, 0.0);
    }

    #[test]
    fn anharmonic_and_log_values() {
        let p = Problem::anharmonic5();
        let v: f64 = p.potential(2.0f64);
        assert_eq!(v, 16.0); // 2^5/2
        let p = Problem::log_r();
        let v: Dd = p.potential(Dd::from_f64(1.0));
        assert_eq!(v.hi, 0.0);
    }

    #[test]
    fn ksq_flavors_differ_by_langer_term() {
        let p = Problem::anharmonic5();
        let e = Dd::from_f64(2.0);
        let r = Dd::from_f64(1.5);
        let exact = p.ksq_exact(e, r);
        let langer = p.ksq_langer(e, r);
        // l = 0: difference must be exactly 1/(4r²).
        let want = Dd::from_f64(0.25) / (r * r);
        assert!((exact - langer - want).abs().hi < 1e-30);
    }

    #[test]
    fn potential_deriv_matches_finite_difference() {
        for p in [
            Problem::anharmonic5(),
            Problem::log_r(),
            Problem::woodsaxon(),
            Problem::doublewell(false),
            Problem::harmonic(true),
            Problem::breitcoulomb(Problem::default_alpha(), 0, 1),
        ] {
            for &r in &[0.7, 1.0, 2.3, 5.1] {
                let h = 1e-6;
                let num = (p.potential(r + h) - p.potential(r - h)) / (2.0 * h);
                let ana: f64 = p.potential_deriv(r);
                let scale = ana.abs().max(1.0);
                assert!(
                    (num - ana).abs() / scale < 1e-8,
                    "{} dV/dr at {r}: {num} vs {ana}",
                    p.name
                );
            }
        }
    }

    #[test]
    fn breit_maps() {
        let p = Problem::breitcoulomb(Problem::default_alpha(), 0, 1);
        // Hydrogenic scale: b² = 1/16 for nu = 1 gives E slightly below 1.
        let e: Dd = p.breit_wkb_energy(Dd::from_f64(0.0625));
        assert!(e.hi < 1.0 && e.hi > 0.99998);
        // b2 and the exact map are mutually consistent:
        // E = 1/sqrt(1+4a²b²) => breit_b2(E) = b².
        let alpha = Problem::default_alpha();
        let b2 = Dd::from_f64(0.0625);
        let e_exact = Dd::ONE
            / (Dd::ONE + Dd::from_f64(4.0) * alpha.sqr() * b2).sqrt();
        let back: Dd = p.breit_b2(e_exact);
        assert!((back - b2).abs().hi < 1e-28);
    }

    #[test]
    fn builtin_lookup() {
        assert!(Problem::builtin("anharmonic5", "2s", None).is_ok());
        assert!(Problem::builtin("doublewell", "1s+", None).is_ok());
        assert!(Problem::builtin("doublewell", "1s", None).is_err());
        assert!(Problem::builtin("nosuch", "1s", None).is_err());
        let (p, s) = Problem::builtin("harmonic", "n3", None).unwrap();
        assert_eq!(p.parity, Parity::NodeAtOrigin);
        assert_eq!(s.nodes, 1);
        let (p, s) = Problem::builtin("breitcoulomb", "2p", None).unwrap();
        assert_eq!(p.l, 1);
        assert_eq!(s.nodes, 0);
    }
}
