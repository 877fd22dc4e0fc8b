//! Semiclassical layer: turning points, action integrals, WKB quantization
//! (with a tunneling correction for symmetric double wells), and the
//! Langer-uniformized Airy wavefunction used to seed the quasilinearization
//! iteration.
//!
//! All semiclassics uses the Langer flavor of `k²` (see [`crate::problems`]).
//! Quantization targets for a state with `n` radial nodes:
//! - origin forbidden in the Langer sense (all radial states): `(n+½)π`;
//! - even parity under a central barrier: `(n+½)π − ½e^{−B}` where `B` is the
//!   half-barrier action `∫₀^{r₁}|k|`;
//! - even parity, origin classically allowed: `(n+¼)π` (the half-line share
//!   of the symmetric full-line integral).
//!
//! For the reduced relativistic Coulomb problem the quantization root is
//! found in `E` through the exact map `b²(E)`, and the published-style WKB
//! energy is then read off through the linearized map `E = 1/(1+4α²b²)`.

use crate::ode::GaussLegendre;
use crate::problems::{Parity, Problem, StateSpec};
use crate::scalar::Scalar;
use crate::{Result, SolveError};

/// Classically allowed window of the Langer wavenumber at a given energy.
#[derive(Clone, Debug)]
pub struct Turning<S> {
    /// Zeros of `k²_Langer`, ascending. One entry when the origin side is
    /// allowed, two otherwise.
    pub tps: Vec<S>,
    /// True when `k²(r_min⁺) > 0`.
    pub origin_allowed: bool,
}

impl<S: Scalar> Turning<S> {
    /// Inner edge of the allowed region (a turning point, or none when the
    /// region starts at the domain edge).
    pub fn inner(&self) -> Option<S> {
        if self.origin_allowed {
            None
        } else {
            Some(self.tps[0])
        }
    }

    pub fn outer(&self) -> S {
        *self.tps.last().unwrap()
    }
}

/// Cube root in the working precision (f64 seed + two Newton steps).
fn cbrt<S: Scalar>(x: S) -> S {
    debug_assert!(x.to_f64() >= 0.0);
    if x.to_f64() == 0.0 {
        return S::zero();
    }
    let mut y = S::from_f64(x.to_f64().cbrt());
    for _ in 0..2 {
        let y2 = y * y;
        y -= (y2 * y - x) / (S::from_f64(3.0) * y2);
    }
    y
}

/// The fully quantized semiclassical state.
#[derive(Clone, Debug)]
pub struct WkbSolution<S> {
    /// Energy at which the quantization condition is satisfied (for the
    /// relativistic Coulomb problem: through the exact `b²(E)` map). This is
    /// what seeds the QLM iteration.
    pub seed_energy: S,
    /// Published-style WKB energy (differs from `seed_energy` only for the
    /// relativistic Coulomb problem, where the linearized map is applied).
    pub energy: S,
    pub turning: Turning<S>,
    /// Allowed-region action ∫√k² at `seed_energy`.
    pub action: S,
    /// Quantization target the action was driven to.
    pub target: S,
    /// Half-barrier action for even-parity under-barrier states.
    pub barrier_action: Option<S>,
    /// |action − target| at the accepted root.
    pub residual: f64,
}

pub struct Wkb<'a, S: Scalar> {
    pub problem: &'a Problem,
    gl: GaussLegendre<S>,
}

impl<'a, S: Scalar> Wkb<'a, S> {
    pub fn new(problem: &'a Problem) -> Wkb<'a, S> {
        Wkb {
            problem,
            gl: GaussLegendre::new(20),
        }
    }

    fn quad_tol(&self) -> f64 {
        (S::eps() * 1e5).max(1e-27)
    }

    // ----- turning points --------------------------------------------------

    /// Locate the zeros of `k²_Langer(E, ·)` on the domain: coarse f64 scan
    /// (log-spaced for radial problems whose structure sits near the origin),
    /// then Newton in the working precision.
    pub fn turning_points(&self, e: S) -> Result<Turning<S>> {
        let p = self.problem;
        let ef = e.to_f64();
        let lo = p.r_min.max(1e-9);
        let n = 4096usize;
        let log_spaced = p.r_min > 0.0 && p.r_max / lo > 50.0;
        let grid = |i: usize| -> f64 {
            let t = i as f64 / n as f64;
            if log_spaced {
                lo * (p.r_max / lo).powf(t)
            } else {
                p.r_min + (p.r_max - p.r_min) * t
            }
        };
        let mut roots: Vec<S> = Vec::new();
        let mut prev_r = grid(0).max(1e-12);
        let mut prev_k: f64 = p.ksq_langer(ef, prev_r);
        let origin_allowed = prev_k > 0.0;
        for i in 1..=n {
            let r = grid(i);
            let k: f64 = p.ksq_langer(ef, r);
            if (prev_k <= 0.0) != (k <= 0.0) {
                // Bisect in f64, then polish in S.
                let (mut a, mut b) = (prev_r, r);
                let (mut fa, _) = (prev_k, k);
                for _ in 0..60 {
                    let m = 0.5 * (a + b);
                    let fm: f64 = p.ksq_langer(ef, m);
                    if (fa <= 0.0) == (fm <= 0.0) {
                        a = m;
                        fa = fm;
                    } else {
                        b = m;
                    }
                }
                let mut x = S::from_f64(0.5 * (a + b));
                for _ in 0..4 {
                    let f = p.ksq_langer(e, x);
                    let d = p.ksq_langer_deriv(x);
                    x -= f / d;
                }
                roots.push(x);
            }
            prev_r = r;
            prev_k = k;
        }
        if roots.is_empty() {
            return Err(SolveError::NoBoundState(format!(
                "no classically allowed region for {} at E = {ef:.6e}",
                p.name
            )));
        }
        Ok(Turning {
            tps: roots,
            origin_allowed,
        })
    }

    // ----- action integrals ------------------------------------------------

    /// ∫_a^b √(±k²) dr with the square-root behavior at both endpoints
    /// removed by the substitution r = end ∓ t² (valid whether or not the
    /// endpoint is an actual turning point). `forbidden` selects |k| from
    /// −k².
    fn action_between(&self, e: S, a: S, b: S, forbidden: bool) -> S {
        let p = self.problem;
        let sgn = if forbidden { -S::one() } else { S::one() };
        let speed = |r: S| -> S {
            let k2 = sgn * p.ksq_langer(e, r);
            k2.maxv(S::zero()).sqrt()
        };
        let mid = (a + b) * S::from_f64(0.5);
        let tol = self.quad_tol();
        let two = S::from_f64(2.0);
        let left = self.gl.adaptive(
            &mut |t: S| speed(a + t * t) * two * t,
            S::zero(),
            (mid - a).sqrt(),
            tol,
        );
        let right = self.gl.adaptive(
            &mut |t: S| speed(b - t * t) * two * t,
            S::zero(),
            (b - mid).sqrt(),
            tol,
        );
        left + right
    }

    /// Allowed-region action for this energy's turning structure.
    pub fn action(&self, e: S, t: &Turning<S>) -> S {
        let a = t.inner().unwrap_or_else(|| S::from_f64(self.problem.r_min));
        self.action_between(e, a, t.outer(), false)
    }

    /// Half-barrier action ∫_{r_min}^{r₁}|k| (even-parity under-barrier
    /// states).
    pub fn barrier_action(&self, e: S, t: &Turning<S>) -> S {
        self.action_between(e, S::from_f64(self.problem.r_min), t.tps[0], true)
    }

    /// Quantization mismatch F(E) = A(E) − target(E); monotonically
    /// increasing in E. Returns the pieces alongside.
    pub fn quant_mismatch(&self, e: S, nodes: u32) -> Result<(S, Turning<S>, S, S, Option<S>)> {
        let t = self.turning_points(e)?;
        let act = self.action(e, &t);
        let nf = nodes as f64;
        let (target, barrier) = match (self.problem.parity, t.origin_allowed) {
            (Parity::NodeAtOrigin, _) => (S::pi() * S::from_f64(nf + 0.5), None),
            (Parity::ZeroDerivAtOrigin, true) => (S::pi() * S::from_f64(nf + 0.25), None),
            (Parity::ZeroDerivAtOrigin, false) => {
                let b = self.barrier_action(e, &t);
                (
                    S::pi() * S::from_f64(nf + 0.5) - (-b).exp() * S::from_f64(0.5),
                    Some(b),
                )
            }
        };
        Ok((act - target, t, act, target, barrier))
    }
}

/// Energy window scanned for the quantization root: `(lo, hi)` in the
/// variable E (the exact-map E for the relativistic Coulomb problem).
fn scan_window(p: &Problem) -> (f64, f64) {
    if p.is_breit() {
        // E ∈ (0, 1); all structure is within 1−E ∈ [1e-12, 0.5].
        (0.5, 1.0 - 1e-12)
    } else {
        let vmin = p.potential_min();
        let vedge: f64 = p.potential(p.r_max);
        let scale = (vedge - vmin).abs().max(1.0);
        (vmin + 1e-9 * scale, vedge - 1e-9 * scale)
    }
}

/// Solve the WKB quantization condition for the requested state.
pub fn solve_wkb<S: Scalar>(problem: &Problem, state: &StateSpec) -> Result<WkbSolution<S>> {
    // Stage 1: bracket the root with an f64 scan (F is monotone in E).
    let wf: Wkb<'_, f64> = Wkb::new(problem);
    let (lo, hi) = scan_window(problem);
    let nscan = 600;
    let mut bracket: Option<(f64, f64, f64, f64)> = None;
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=nscan {
        let t = i as f64 / nscan as f64;
        // Log-spaced in 1−E for the Coulomb window, linear otherwise.
        let e = if problem.is_breit() {
            1.0 - (1.0 - lo) * ((1.0 - hi) / (1.0 - lo)).powf(t)
        } else {
            lo + (hi - lo) * t
        };
        let f = match wf.quant_mismatch(e, state.nodes) {
            Ok((f, ..)) => f,
            Err(_) => -1e9, // no allowed region yet: far below the target
        };
        if let Some((ep, fp)) = prev {
            if fp < 0.0 && f >= 0.0 {
                bracket = Some((ep, e, fp, f));
                break;
            }
        }
        prev = Some((e, f));
    }
    let (mut a, mut b, mut fa, mut fb) = bracket.ok_or_else(|| {
        SolveError::NoBoundState(format!(
            "state {} of {} not found in the energy window ({lo:.6e}, {hi:.6e})",
            state.label, problem.name
        ))
    })?;
    for _ in 0..80 {
        let m = 0.5 * (a + b);
        let fm = match wf.quant_mismatch(m, state.nodes) {
            Ok((f, ..)) => f,
            Err(_) => -1e9,
        };
        if fm < 0.0 {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
        if (b - a).abs() < 1e-13 * b.abs().max(1e-3) {
            break;
        }
    }
    let _ = (fa, fb);

    // Stage 2: secant in the working precision from the f64 root.
    let ws: Wkb<'_, S> = Wkb::new(problem);
    let scale = b.abs().max(1e-3);
    let mut e0 = S::from_f64(a);
    let mut e1 = S::from_f64(b.max(a + 1e-14 * scale));
    let mut f0 = ws.quant_mismatch(e0, state.nodes)?.0;
    let mut best = e1;
    for _ in 0..60 {
        let f1 = ws.quant_mismatch(e1, state.nodes)?.0;
        best = e1;
        if f1.to_f64().abs() < (S::eps() * 100.0).max(1e-26) {
            break;
        }
        let denom = f1 - f0;
        if denom.to_f64() == 0.0 {
            break;
        }
        let step = f1 * (e1 - e0) / denom;
        e0 = e1;
        f0 = f1;
        e1 -= step;
        if (e1 - e0).abs().to_f64() < 4.0 * S::eps() * e1.abs().to_f64().max(1e-3) {
            best = e1;
            break;
        }
    }
    let (fbest, turning, action, target, barrier) = ws.quant_mismatch(best, state.nodes)?;
    let energy = if problem.is_breit() {
        // Read off the published-style WKB energy via the linearized map.
        let b2 = problem.breit_b2(best);
        problem.breit_wkb_energy(b2)
    } else {
        best
    };
    Ok(WkbSolution {
        seed_energy: best,
        energy,
        turning,
        action,
        target,
        barrier_action: barrier,
        residual: fbest.to_f64().abs(),
    })
}

// ---------------------------------------------------------------------------
// Langer-uniformized Airy seed wavefunction.
// ---------------------------------------------------------------------------

/// The seed wavefunction χ₀ on its evaluation grid, assembled from two Airy
/// branches anchored at the inner and outer turning points and joined at a
/// common zero of their difference near the phase midpoint.
#[derive(Clone, Debug)]
pub struct LangerSeed<S> {
    pub energy: S,
    pub grid: Vec<S>,
    pub chi: Vec<S>,
    pub dchi: Vec<S>,
    /// Index into `grid` of the branch-switch point.
    pub match_index: usize,
    /// Relative mismatch of the two branch derivatives at the switch point
    /// (a measure of the seed's internal consistency; small only at a
    /// properly quantized energy).
    pub derivative_jump: f64,
    pub turning: Turning<S>,
}

/// One uniformized branch χ(r) = c·√(S^{1/3}/|k|)·Ai(±S^{2/3}) anchored at a
/// turning point, with the analytic derivative.
struct Branch<'a, S: Scalar> {
    problem: &'a Problem,
    e: S,
    anchor: S,
    coeff: S,
}

impl<'a, S: Scalar> Branch<'a, S> {
    /// Evaluate at `r` given the accumulated |∫_anchor^r |k||.
    fn eval(&self, r: S, abs_action: S) -> (S, S) {
        let p = self.problem;
        let k2 = p.ksq_langer(self.e, r);
        let dk2 = p.ksq_langer_deriv(r);
        let absk = k2.abs().sqrt();
        let s = abs_action * S::from_f64(1.5); // S = (3/2)∫|k|
        let s13 = cbrt(s);
        let xi = s13 * s13;
        let allowed = k2.to_f64() > 0.0;
        let arg = if allowed { -xi } else { xi };
        let (ai, dai) = arg.airy();
        let amp = (s13 / absk).sqrt();
        let chi = self.coeff * amp * ai;
        // d|S|/dr = (3/2)|k|·σ, σ = sign(r − anchor); dξ/dr = |k|σ/S^{1/3};
        // (ln amp)' = S'/(6S) − |k|'/(2|k|), |k|' = ±dk²/(2|k|).
        let sigma = if r.to_f64() >= self.anchor.to_f64() {
            S::one()
        } else {
            -S::one()
        };
        let sp = S::from_f64(1.5) * absk * sigma;
        let dabsk = if allowed {
            dk2 / (S::from_f64(2.0) * absk)
        } else {
            -dk2 / (S::from_f64(2.0) * absk)
        };
        let dlog_amp = sp / (S::from_f64(6.0) * s) - dabsk / (S::from_f64(2.0) * absk);
        let dxi = absk * sigma / s13;
        let darg = if allowed { -dxi } else { dxi };
        let dchi = self.coeff * amp * (dlog_amp * ai + dai * darg);
        (chi, dchi)
    }
}

/// Cumulative |∫|k|| from `anchor` through the ordered points `rs` (each
/// strictly on one side of the anchor, ordered away from it). The first gap
/// touches the turning point, so its square-root edge is removed by the
/// r = anchor ± t² substitution; subsequent gaps use a plain panel.
fn cumulative_action<S: Scalar>(
    w: &Wkb<'_, S>,
    e: S,
    anchor: S,
    rs: &[S],
    forbidden_side: bool,
) -> Vec<S> {
    let p = w.problem;
    let sgn = if forbidden_side { -S::one() } else { S::one() };
    let mut speed = |r: S| -> S { (sgn * p.ksq_langer(e, r)).maxv(S::zero()).sqrt() };
    let mut out = Vec::with_capacity(rs.len());
    let mut acc = S::zero();
    let mut prev = anchor;
    for (i, &r) in rs.iter().enumerate() {
        let inc = if i == 0 {
            let span = (r - anchor).abs().sqrt();
            let dir = if r.to_f64() >= anchor.to_f64() {
                S::one()
            } else {
                -S::one()
            };
            let two = S::from_f64(2.0);
            w.gl.adaptive(
                &mut |t: S| speed(anchor + dir * t * t) * two * t,
                S::zero(),
                span,
                w.quad_tol(),
            )
        } else {
            w.gl.panel(&mut speed, prev.minv(r), prev.maxv(r))
        };
        acc += inc.abs();
        out.push(acc);
        prev = r;
    }
    out
}

/// Geometric grid walking away from `start` towards `end`, first step `delta`,
/// growth 1.05; always ends exactly at `end`.
fn tail_grid<S: Scalar>(start: S, end: S, delta: f64) -> Vec<S> {
    let dir = if end.to_f64() >= start.to_f64() {
        1.0
    } else {
        -1.0
    };
    let span = (end - start).abs().to_f64();
    let mut pts = Vec::new();
    let mut off = delta;
    while off < span {
        pts.push(start + S::from_f64(dir * off));
        off *= 1.05;
    }
    pts.push(end);
    pts
}

/// Build the Langer seed at a quantized energy (default grid density).
pub fn langer_seed<S: Scalar>(
    problem: &Problem,
    sol: &WkbSolution<S>,
    nodes: u32,
) -> Result<LangerSeed<S>> {
    langer_seed_dense(problem, sol, nodes, 40.0)
}

/// [`langer_seed`] with an explicit allowed-region grid density (samples per
/// phase radian); used to verify that results are grid-converged.
pub fn langer_seed_dense<S: Scalar>(
    problem: &Problem,
    sol: &WkbSolution<S>,
    nodes: u32,
    per_radian: f64,
) -> Result<LangerSeed<S>> {
    let w: Wkb<'_, S> = Wkb::new(problem);
    let e = sol.seed_energy;
    let t = &sol.turning;
    let outer = t.outer();
    let inner = t.inner();
    let r_lo = S::from_f64(problem.r_min);
    let r_hi = S::from_f64(problem.r_max);
    let a_edge = inner.unwrap_or(r_lo);
    let width = (outer - a_edge).to_f64();
    let delta = 1e-7 * width;

    // Allowed-region grid: uniform, dense enough for ≥40 points per phase
    // radian at the largest local wavenumber.
    let kmax = {
        let mut m: f64 = 0.0;
        for i in 1..512 {
            let r = a_edge + (outer - a_edge) * S::from_f64(i as f64 / 512.0);
            let k2: f64 = problem.ksq_langer(e, r).to_f64();
            m = m.max(k2.max(0.0).sqrt());
        }
        m
    };
    let n_allowed = ((per_radian * kmax * width).ceil() as usize).clamp(400, 80_000);
    let a0 = a_edge + S::from_f64(delta);
    let b0 = outer - S::from_f64(delta);
    let allowed: Vec<S> = (0..=n_allowed)
        .map(|i| a0 + (b0 - a0) * S::from_f64(i as f64 / n_allowed as f64))
        .collect();

    // Branches. With only one turning point (origin classically allowed) the
    // outer branch serves the whole domain.
    let two_branches = inner.is_some();
    let c_b = if nodes % 2 == 0 { S::one() } else { -S::one() };
    let br_b = Branch {
        problem,
        e,
        anchor: outer,
        coeff: c_b,
    };
    let s_b_allowed = {
        let rev: Vec<S> = allowed.iter().rev().copied().collect();
        let mut s = cumulative_action(&w, e, outer, &rev, false);
        s.reverse();
        s
    };

    let (match_index, derivative_jump, chi_a_allowed): (usize, f64, Option<Vec<(S, S)>>) =
        if two_branches {
            let t_a = inner.unwrap();
            let br_a = Branch {
                problem,
                e,
                anchor: t_a,
                coeff: S::one(),
            };
            let s_a_allowed = cumulative_action(&w, e, t_a, &allowed, false);
            let vals_a: Vec<(S, S)> = allowed
                .iter()
                .zip(&s_a_allowed)
                .map(|(&r, &s)| br_a.eval(r, s))
                .collect();
            let vals_b: Vec<(S, S)> = allowed
                .iter()
                .zip(&s_b_allowed)
                .map(|(&r, &s)| br_b.eval(r, s))
                .collect();
            // Zero of χ_a − χ_b nearest the phase midpoint.
            let half_action = sol.action.to_f64() / 2.0;
            let mut best: Option<(usize, f64)> = None;
            for i in 0..allowed.len() - 1 {
                let d0 = (vals_a[i].0 - vals_b[i].0).to_f64();
                let d1 = (vals_a[i + 1].0 - vals_b[i + 1].0).to_f64();
                if d0 == 0.0 || (d0 < 0.0) != (d1 < 0.0) {
                    let phase = s_a_allowed[i].to_f64();
                    let dist = (phase - half_action).abs();
                    if best.map_or(true, |(_, bd)| dist < bd) {
                        best = Some((i, dist));
                    }
                }
            }
            let (idx, _) = best.ok_or_else(|| {
                SolveError::NonConvergence(
                    "seed branches have no common zero: energy is not quantized".into(),
                )
            })?;
            // Normalize by the local derivative scale k·|χ| (the crossing
            // often sits near an extremum where both derivatives are small).
            let kloc = problem
                .ksq_langer(e, allowed[idx])
                .maxv(S::zero())
                .sqrt()
                .to_f64();
            let scale = vals_a[idx]
                .1
                .to_f64()
                .abs()
                .max(vals_b[idx].1.to_f64().abs())
                .max(kloc * vals_a[idx].0.to_f64().abs());
            let jump = (vals_a[idx].1 - vals_b[idx].1).to_f64().abs() / scale.max(1e-300);
            (idx, jump, Some(vals_a))
        } else {
            (0, 0.0, None)
        };

    // Assemble: inner tail + allowed region + outer tail.
    let mut grid: Vec<S> = Vec::new();
    let mut chi: Vec<S> = Vec::new();
    let mut dchi: Vec<S> = Vec::new();

    if two_branches {
        let t_a = inner.unwrap();
        let br_a = Branch {
            problem,
            e,
            anchor: t_a,
            coeff: S::one(),
        };
        let tail: Vec<S> = tail_grid(t_a, r_lo, width / n_allowed as f64);
        let s_tail = cumulative_action(&w, e, t_a, &tail, true);
        for (&r, &s) in tail.iter().zip(&s_tail).rev() {
            let (c, d) = br_a.eval(r, s);
            grid.push(r);
            chi.push(c);
            dchi.push(d);
        }
    }
    let inner_tail_len = grid.len();
    let vals_b_allowed: Vec<(S, S)> = allowed
        .iter()
        .zip(&s_b_allowed)
        .map(|(&r, &s)| br_b.eval(r, s))
        .collect();
    for (i, &r) in allowed.iter().enumerate() {
        let (c, d) = if two_branches && i <= match_index {
            chi_a_allowed.as_ref().unwrap()[i]
        } else {
            vals_b_allowed[i]
        };
        grid.push(r);
        chi.push(c);
        dchi.push(d);
    }
    let outer_tail: Vec<S> = tail_grid(outer, r_hi, width / n_allowed as f64);
    let s_out = cumulative_action(&w, e, outer, &outer_tail, true);
    for (&r, &s) in outer_tail.iter().zip(&s_out) {
        let (c, d) = br_b.eval(r, s);
        grid.push(r);
        chi.push(c);
        dchi.push(d);
    }

    // Normalize to max |χ| = 1.
    let mut m = S::zero();
    for &c in &chi {
        m = m.maxv(c.abs());
    }
    let inv = S::one() / m;
    for v in chi.iter_mut() {
        *v *= inv;
    }
    for v in dchi.iter_mut() {
        *v *= inv;
    }

    Ok(LangerSeed {
        energy: e,
        grid,
        chi,
        dchi,
        match_index: inner_tail_len + match_index,
        derivative_jump,
        turning: sol.turning.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::Problem;
    use crate::xprec::Dd;

    fn wkb_energy_dd(problem: &Problem, nodes: u32, label: &str) -> Dd {
        let s: WkbSolution<Dd> =
            solve_wkb(problem, &StateSpec::new(nodes, label)).expect("wkb solve");
        s.energy
    }

    #[test]
    fn harmonic_wkb_is_exact() {
        // Langer-corrected WKB is exact for the harmonic oscillator: the
        // half-line actions give E_n = n + 1/2 for every parity.
        for n in 0..6u32 {
            let p = Problem::harmonic(n % 2 == 0);
            let e = wkb_energy_dd(&p, n / 2, "t");
            let want = Dd::from_f64(n as f64 + 0.5);
            assert!(
                (e - want).abs().hi < 1e-24,
                "harmonic n={n}: {e} vs {want}"
            );
        }
    }

    #[test]
    fn harmonic_turning_points() {
        let p = Problem::harmonic(true);
        let w: Wkb<'_, Dd> = Wkb::new(&p);
        let e = Dd::from_f64(2.5);
        let t = w.turning_points(e).unwrap();
        assert!(t.origin_allowed);
        assert_eq!(t.tps.len(), 1);
        let want = Dd::from_f64(5.0).sqrt(); // √(2E)
        assert!((t.outer() - want).abs().hi < 1e-28);
    }

    #[test]
    fn quintic_ground_state_action() {
        // Independently derived quantization root for V = r⁵/2, n = 0.
        let p = Problem::anharmonic5();
        let e = wkb_energy_dd(&p, 0, "1s");
        assert!(
            (e - Dd::parse("1.951594078106").unwrap()).abs().hi < 1e-9,
            "quintic 1s WKB energy {e}"
        );
    }

    #[test]
    fn log_and_woodsaxon_ground_states() {
        let e = wkb_energy_dd(&Problem::log_r(), 0, "1s");
        assert!(
            (e - Dd::parse("1.05346726985").unwrap()).abs().hi < 1e-10,
            "log 1s {e}"
        );
        let e = wkb_energy_dd(&Problem::woodsaxon(), 0, "1s");
        assert!(
            (e + Dd::parse("17.61192").unwrap()).abs().hi < 5e-5,
            "woodsaxon 1s {e}"
        );
    }

    #[test]
    fn double_well_even_ground_state_with_tunneling() {
        let p = Problem::doublewell(true);
        let s: WkbSolution<Dd> = solve_wkb(&p, &StateSpec::new(0, "1s+")).unwrap();
        assert!(s.barrier_action.is_some(), "under-barrier state");
        assert!(
            (s.energy - Dd::parse("0.484067").unwrap()).abs().hi < 5e-6,
            "doublewell 1s+ {}",
            s.energy
        );
        assert!(s.residual < 1e-24);
    }

    #[test]
    fn relativistic_coulomb_ground_state() {
        // At α = 1/137 exactly the linearized-map WKB energy is known to
        // 12 digits.
        let p = Problem::breitcoulomb(Dd::ONE / Dd::from_f64(137.0), 0, 1);
        let e = wkb_energy_dd(&p, 0, "1s");
        assert!(
            (e - Dd::parse("0.999986679987").unwrap()).abs().hi < 5e-13,
            "breit 1s WKB {e}"
        );
    }

    #[test]
    fn seed_has_correct_node_count_and_small_jump() {
        for (nodes, label) in [(0u32, "1s"), (1, "2s"), (2, "3s")] {
            let p = Problem::anharmonic5();
            let s: WkbSolution<Dd> = solve_wkb(&p, &StateSpec::new(nodes, label)).unwrap();
            let seed = langer_seed(&p, &s, nodes).unwrap();
            let mut count = 0;
            for i in 1..seed.chi.len() {
                let a = seed.chi[i - 1].hi;
                let b = seed.chi[i].hi;
                if a != 0.0 && b != 0.0 && (a < 0.0) != (b < 0.0) {
                    count += 1;
                }
            }
            assert_eq!(count, nodes, "{label}: node count");
            // The uniformized branches only merge asymptotically: the jump
            // reflects the intrinsic quality of the semiclassical seed, which
            // improves rapidly with the action of the state.
            let gate = if nodes == 0 { 1.0 } else { 0.3 };
            assert!(
                seed.derivative_jump < gate,
                "{label}: derivative jump {:.3e}",
                seed.derivative_jump
            );
            // Normalized, with decayed tails.
            let maxv = seed.chi.iter().fold(0.0f64, |m, c| m.max(c.hi.abs()));
            assert!((maxv - 1.0).abs() < 1e-15);
            assert!(seed.chi.last().unwrap().hi.abs() < 1e-10);
        }
    }

    #[test]
    fn seed_even_parity_has_flat_origin() {
        // Harmonic ground state: single-branch seed; χ'(0) ≈ 0 is exactly
        // the quantization condition.
        let p = Problem::harmonic(true);
        let s: WkbSolution<Dd> = solve_wkb(&p, &StateSpec::new(0, "n0")).unwrap();
        let seed = langer_seed(&p, &s, 0).unwrap();
        let d0 = seed.dchi[0].hi.abs();
        let c0 = seed.chi[0].hi.abs();
        assert!(c0 > 0.5, "χ(0) = {c0}");
        // The seed is only semiclassically flat at the origin; ~10% slope
        // is the intrinsic error at this small an action.
        assert!(d0 / c0 < 0.2, "χ'(0)/χ(0) = {:.3e}", d0 / c0);
    }
}
