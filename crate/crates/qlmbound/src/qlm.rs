//! Quasilinearization (Newton–Kantorovich) solver in the phase
//! representation.
//!
//! The log-derivative `y = χ'/χ` of the radial Schrödinger equation obeys
//! the Riccati equation `y' = −k² − y²`. Quasilinearization replaces it by
//! the sequence of *linear* problems
//!
//! ```text
//! y_p' = −k² + y_{p−1}² − 2 y_{p−1} y_p            (Newton step)
//! ```
//!
//! each of which can equivalently be written in closed form with an
//! integrating factor (see [`riccati_newton_quadrature`]). The iteration
//! converges quadratically from any seed with the right node structure.
//!
//! Because `y` has poles at the wavefunction nodes, the production solver
//! works with the bounded Prüfer phase instead:
//!
//! ```text
//! tan u = −κ χ / χ',      κ = √(2m|E|) frozen at the seed energy,
//! u'    = f(u)  = −κ cos²u − (k²/κ) sin²u,
//! f_u   = (κ − k²/κ) sin 2u.
//! ```
//!
//! `u` decreases monotonically through the allowed region, passing a
//! multiple of π at every node, so the boundary conditions pin the node
//! count exactly. One quasilinear iterate integrates the linearized phase
//! equation `u_p' = f(u_{p−1}) + f_u(u_{p−1})(u_p − u_{p−1})` outward and
//! inward, and the energy is updated by matching the two branches at the
//! outer turning point. The first iterate, seeded by the Langer WKB
//! wavefunction, already carries most of the accuracy gain; subsequent
//! iterates converge quadratically to the exact eigenvalue.

use crate::ode::{gbs_integrate, GaussLegendre};
use crate::oracle::{start_conditions, step_cap};
use crate::problems::{Problem, StateSpec};
use crate::scalar::Scalar;
use crate::wkb::{langer_seed_dense, solve_wkb, LangerSeed, Turning, WkbSolution};
use crate::{Result, SolveError};

/// Local integration tolerance. The floor in double precision is higher
/// than the oracle's because the linearized right-hand side interpolates the
/// previous iterate: the interpolant's window switches leave sub-1e-12
/// seams that an f64 tableau cannot extrapolate through.
fn phase_tol<S: Scalar>() -> f64 {
    (S::eps() * 2e4).max(1e-26)
}

// ---------------------------------------------------------------------------
// Riccati form: the Newton step by ODE integration and by quadrature.
// ---------------------------------------------------------------------------

/// One quasilinear Riccati step `y' = −k² + y_prev² − 2 y_prev y`,
/// integrated from `(r0, y0)` to `r1` with the GBS integrator.
pub fn riccati_newton_ode<S: Scalar>(
    ksq: impl Fn(S) -> S,
    y_prev: impl Fn(S) -> S,
    r0: S,
    y0: S,
    r1: S,
    tol: f64,
    step: f64,
) -> S {
    let two = S::from_f64(2.0);
    gbs_integrate(
        &mut |r: S, y: &[S; 1]| {
            let yp = y_prev(r);
            [-ksq(r) + yp * yp - two * yp * y[0]]
        },
        r0,
        r1,
        [y0],
        tol,
        |_r, _y| step,
    )[0]
}

/// The same Newton step evaluated in closed form: with the integrating
/// factor `μ(r) = exp(2∫ y_prev)` the linear equation gives
///
/// ```text
/// μ(r1) y(r1) = μ(r0) y(r0) − ∫_{r1}^{r0} μ(s) (−k²(s) + y_prev²(s)) ds.
/// ```
///
/// `int_y_prev` must be an antiderivative of `y_prev`.
pub fn riccati_newton_quadrature<S: Scalar>(
    ksq: impl Fn(S) -> S,
    y_prev: impl Fn(S) -> S,
    int_y_prev: impl Fn(S) -> S,
    r0: S,
    y0: S,
    r1: S,
    tol: f64,
) -> S {
    let gl: GaussLegendre<S> = GaussLegendre::new(20);
    let two = S::from_f64(2.0);
    let yref = int_y_prev(r1);
    let mu = |s: S| (two * (int_y_prev(s) - yref)).exp();
    let integral = gl.adaptive(
        &mut |s: S| {
            let yp = y_prev(s);
            mu(s) * (-ksq(s) + yp * yp)
        },
        r1,
        r0,
        tol,
    );
    mu(r0) * y0 - integral
}

// ---------------------------------------------------------------------------
// Phase representation.
// ---------------------------------------------------------------------------

/// A phase iterate sampled on a fixed grid, with Lagrange interpolation
/// between the samples.
#[derive(Clone, Debug)]
pub struct PhaseFunction<S> {
    pub grid: Vec<S>,
    pub u: Vec<S>,
    grid_f64: Vec<f64>,
}

impl<S: Scalar> PhaseFunction<S> {
    pub fn new(grid: Vec<S>, u: Vec<S>) -> PhaseFunction<S> {
        assert_eq!(grid.len(), u.len());
        assert!(grid.len() >= 8, "phase grid too small to interpolate");
        let grid_f64 = grid.iter().map(|&g| g.to_f64()).collect();
        PhaseFunction { grid, u, grid_f64 }
    }

    /// 8-point Lagrange interpolation on the (non-uniform) grid. The grid is
    /// dense enough (≥40 samples per phase radian) that the interpolation
    /// error sits far below the linearization defect; and because the Newton
    /// map is quadratically self-correcting, any interpolation error of the
    /// *previous* iterate only perturbs the next energy at second order.
    pub fn eval(&self, r: S) -> S {
        const M: usize = 8;
        let n = self.grid.len();
        let x = r.to_f64();
        let pos = self.grid_f64.partition_point(|&g| g < x);
        let lo = pos.saturating_sub(M / 2).min(n - M);
        let mut acc = S::zero();
        for i in lo..lo + M {
            let mut w = S::one();
            for j in lo..lo + M {
                if j != i {
                    w *= (r - self.grid[j]) / (self.grid[i] - self.grid[j]);
                }
            }
            acc += w * self.u[i];
        }
        acc
    }
}

/// `u' = f(u)`.
fn phase_rhs<S: Scalar>(k2: S, kap: S, u: S) -> S {
    let (s, c) = u.sin_cos();
    -(kap * c * c) - k2 / kap * s * s
}

/// `∂f/∂u`.
fn phase_rhs_du<S: Scalar>(k2: S, kap: S, u: S) -> S {
    (kap - k2 / kap) * (S::from_f64(2.0) * u).sin()
}

/// Phase boundary value at `r_min`, from the recessive power-law solution.
fn bc_origin<S: Scalar>(p: &Problem, e: S, kap: S) -> S {
    let (c0, d0) = start_conditions(p, e);
    (-(kap * c0)).atan2(d0)
}

/// Phase boundary value at `r_max`: the decaying branch `χ'/χ = −K` after
/// `nodes` interior nodes, i.e. `u = arctan(κ/K) − (nodes+1)π`.
fn bc_outer<S: Scalar>(p: &Problem, e: S, kap: S, nodes: u32) -> S {
    let bigk = (-p.ksq_exact(e, S::from_f64(p.r_max)))
        .maxv(S::zero())
        .sqrt();
    kap.atan2(bigk) - S::from_f64(nodes as f64 + 1.0) * S::pi()
}

/// Unwrapped phase of the Langer seed wavefunction: `atan2(−κχ, χ')` made
/// continuous along the grid, anchored at the origin boundary value.
fn seed_phase<S: Scalar>(p: &Problem, seed: &LangerSeed<S>, kap: S) -> PhaseFunction<S> {
    let two_pi = S::pi() * S::from_f64(2.0);
    let mut u = Vec::with_capacity(seed.grid.len());
    let mut prev = bc_origin(p, seed.energy, kap);
    for i in 0..seed.grid.len() {
        let raw = (-(kap * seed.chi[i])).atan2(seed.dchi[i]);
        let wind = ((prev - raw) / two_pi).round();
        let v = raw + two_pi * wind;
        u.push(v);
        prev = v;
    }
    PhaseFunction::new(seed.grid.clone(), u)
}

/// Integrate the linearized phase equation from `(r0, u0)` to `r1`.
fn integrate_phase<S: Scalar>(
    p: &Problem,
    e: S,
    kap: S,
    prev: &PhaseFunction<S>,
    r0: S,
    r1: S,
    u0: S,
) -> S {
    let trace = std::env::var_os("QLMTRACE").is_some();
    let mut ncall = 0u64;
    let mut rhs = |r: S, y: &[S; 1]| {
        let up = prev.eval(r);
        let k2 = p.ksq_exact(e, r);
        ncall += 1;
        if trace && ncall % 100_000 == 0 {
            eprintln!("  integrate_phase: {} rhs calls, r = {:.8}", ncall, r.to_f64());
        }
        [phase_rhs(k2, kap, up) + phase_rhs_du(k2, kap, up) * (y[0] - up)]
    };
    let tol = phase_tol::<S>();
    let observer = |r: S, _y: &mut [S; 1]| step_cap(p, e, r);
    // Integrate interval by interval: `prev.eval` is one polynomial inside
    // each grid interval but switches windows at the nodes, and the
    // extrapolating integrator cannot converge across even a sub-tolerance
    // jump in the right-hand side. Restarting at every node keeps each span
    // perfectly smooth.
    let x0 = r0.to_f64();
    let x1 = r1.to_f64();
    let mut y = [u0];
    let mut cur = r0;
    if x1 >= x0 {
        let lo = prev.grid_f64.partition_point(|&g| g <= x0);
        let hi = prev.grid_f64.partition_point(|&g| g < x1);
        for i in lo..hi {
            y = gbs_integrate(&mut rhs, cur, prev.grid[i], y, tol, observer);
            cur = prev.grid[i];
        }
    } else {
        let hi = prev.grid_f64.partition_point(|&g| g < x0);
        let lo = prev.grid_f64.partition_point(|&g| g <= x1);
        for i in (lo..hi).rev() {
            y = gbs_integrate(&mut rhs, cur, prev.grid[i], y, tol, observer);
            cur = prev.grid[i];
        }
    }
    gbs_integrate(&mut rhs, cur, r1, y, tol, observer)[0]
}

/// Matching functional `M(E) = u_out(r_m) − u_in(r_m)` of the linearized
/// iterate; its root in E is the iterate's energy.
fn phase_match<S: Scalar>(
    p: &Problem,
    e: S,
    kap: S,
    prev: &PhaseFunction<S>,
    rm: f64,
    nodes: u32,
) -> S {
    let u_out = integrate_phase(
        p,
        e,
        kap,
        prev,
        S::from_f64(p.r_min),
        S::from_f64(rm),
        bc_origin(p, e, kap),
    );
    let u_in = integrate_phase(
        p,
        e,
        kap,
        prev,
        S::from_f64(p.r_max),
        S::from_f64(rm),
        bc_outer(p, e, kap, nodes),
    );
    u_out - u_in
}

/// One secant energy update per quasilinear iterate: evaluate the mismatch
/// of the *current* linearized problem at `e` and at a nearby probe energy,
/// and take a single secant step. The step is not iterated to a root — the
/// next iterate refines the phase and the energy together, so the energy
/// sequence and the iteration count track the quasilinear convergence
/// directly. `de_hint` sets the probe offset from the most recent energy
/// change, keeping the finite-difference slope accurate as ΔE shrinks.
fn energy_update<S: Scalar>(
    p: &Problem,
    kap: S,
    prev: &PhaseFunction<S>,
    rm: f64,
    nodes: u32,
    e: S,
    de_hint: f64,
) -> Result<S> {
    let scale = e.to_f64().abs().max(1e-3);
    let delta = (de_hint * 1e-3)
        .abs()
        .clamp(1e-24 * scale, 1e-7 * scale)
        .max(4.0 * S::eps() * scale);
    let m0 = phase_match(p, e, kap, prev, rm, nodes);
    let e1 = e + S::from_f64(delta);
    let m1 = phase_match(p, e1, kap, prev, rm, nodes);
    if !m0.to_f64().is_finite() || !m1.to_f64().is_finite() {
        return Err(SolveError::NonConvergence(format!(
            "phase matching produced a non-finite mismatch for {} at E = {:.6e}",
            p.name,
            e.to_f64()
        )));
    }
    let denom = m1 - m0;
    if denom.to_f64() == 0.0 {
        return Ok(e);
    }
    Ok(e - m0 * (e1 - e) / denom)
}

/// Diagnostic: mismatch of the *nonlinear* phase equation at energy `e`
/// (no linearization, no interpolation).
pub fn nonlinear_phase_mismatch<S: Scalar>(p: &Problem, e: S, kap: S, rm: f64, nodes: u32) -> S {
    let mut rhs = |r: S, y: &[S; 1]| [phase_rhs(p.ksq_exact(e, r), kap, y[0])];
    let tol = std::env::var("QLM_TOL")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or_else(phase_tol::<S>);
    let observer = |r: S, _y: &mut [S; 1]| step_cap(p, e, r);
    let out = gbs_integrate(
        &mut rhs,
        S::from_f64(p.r_min),
        S::from_f64(rm),
        [bc_origin(p, e, kap)],
        tol,
        observer,
    )[0];
    let inn = gbs_integrate(
        &mut rhs,
        S::from_f64(p.r_max),
        S::from_f64(rm),
        [bc_outer(p, e, kap, nodes)],
        tol,
        observer,
    )[0];
    out - inn
}

/// Sample the linearized iterate at energy `e` on the fixed grid: outward up
/// to the match radius, inward beyond it. Returns the new phase function and
/// the linearization defect
/// `max |f(u_p) − f(u_{p−1}) − f_u(u_{p−1})(u_p − u_{p−1})| / (κ + |k²|/κ)`,
/// the dimensionless measure of how far the iterate still is from solving
/// the nonlinear equation (it shrinks quadratically).
fn sample_phase<S: Scalar>(
    p: &Problem,
    e: S,
    kap: S,
    prev: &PhaseFunction<S>,
    rm: f64,
    nodes: u32,
) -> (PhaseFunction<S>, f64) {
    let grid = prev.grid.clone();
    let n = grid.len();
    let mut u = vec![S::zero(); n];
    let i_split = prev.grid_f64.partition_point(|&g| g <= rm);

    let rhs = |r: S, y: &[S; 1]| {
        let up = prev.eval(r);
        let k2 = p.ksq_exact(e, r);
        [phase_rhs(k2, kap, up) + phase_rhs_du(k2, kap, up) * (y[0] - up)]
    };
    let tol = phase_tol::<S>();

    // Outward branch, extended to the match radius after the last grid point.
    let mut y = [bc_origin(p, e, kap)];
    let mut cur = S::from_f64(p.r_min);
    for i in 0..i_split {
        let r = grid[i];
        if (r - cur).to_f64() > 0.0 {
            y = gbs_integrate(&mut rhs.clone(), cur, r, y, tol, |rr, _y: &mut [S; 1]| {
                step_cap(p, e, rr)
            });
            cur = r;
        }
        u[i] = y[0];
    }
    let out_end = gbs_integrate(
        &mut rhs.clone(),
        cur,
        S::from_f64(rm),
        y,
        tol,
        |rr, _y: &mut [S; 1]| step_cap(p, e, rr),
    )[0];

    // Inward branch, likewise extended to the match radius.
    let mut y = [bc_outer(p, e, kap, nodes)];
    let mut cur = S::from_f64(p.r_max);
    for i in (i_split..n).rev() {
        let r = grid[i];
        if (cur - r).to_f64() > 0.0 {
            y = gbs_integrate(&mut rhs.clone(), cur, r, y, tol, |rr, _y: &mut [S; 1]| {
                step_cap(p, e, rr)
            });
            cur = r;
        }
        u[i] = y[0];
    }
    let in_end = gbs_integrate(
        &mut rhs.clone(),
        cur,
        S::from_f64(rm),
        y,
        tol,
        |rr, _y: &mut [S; 1]| step_cap(p, e, rr),
    )[0];

    // The energy is updated once per iterate, not solved to the root, so the
    // two branches still miss by the residual mismatch. Close the gap by
    // shifting the inward branch: interpolating across a jump would otherwise
    // put spikes into the next linearized right-hand side. The shift is a
    // constant reinterpretation of the previous iterate and is absorbed at
    // second order by the Newton map.
    let jump = out_end - in_end;
    for v in u[i_split..].iter_mut() {
        *v += jump;
    }

    // Linearization defect over the grid.
    let mut defect: f64 = 0.0;
    for i in 0..n {
        let up = prev.eval(grid[i]);
        let k2 = p.ksq_exact(e, grid[i]);
        let lin = phase_rhs(k2, kap, up) + phase_rhs_du(k2, kap, up) * (u[i] - up);
        let d = (phase_rhs(k2, kap, u[i]) - lin).to_f64().abs();
        let local = kap.to_f64() + k2.to_f64().abs() / kap.to_f64();
        defect = defect.max(d / local);
    }

    (PhaseFunction::new(grid, u), defect)
}

// ---------------------------------------------------------------------------
// Full solve.
// ---------------------------------------------------------------------------

/// Iteration controls for [`solve_state`].
#[derive(Clone, Debug)]
pub struct QlmOptions {
    /// Relative energy change below which the iteration stops (`None` picks
    /// 1e-21 in extended precision, ~2e-15 in double).
    pub tol_rel: Option<f64>,
    /// Iteration cap.
    pub max_iter: usize,
    /// Minimum grid samples per radian of accumulated phase in the allowed
    /// region. The default is dense enough that doubling it changes the
    /// converged energy by less than 1e-22 relative.
    pub points_per_radian: f64,
}

impl Default for QlmOptions {
    fn default() -> Self {
        QlmOptions {
            tol_rel: None,
            max_iter: 60,
            points_per_radian: 40.0,
        }
    }
}

/// Result of the quasilinear iteration for one bound state.
#[derive(Clone, Debug)]
pub struct QlmSolution<S> {
    /// WKB quantization root used to build the seed.
    pub seed_energy: S,
    /// The WKB energy in published convention (differs from `seed_energy`
    /// only for the relativistic Coulomb problem).
    pub wkb_energy: S,
    /// Energy after each iterate; the last entry is the converged value.
    /// Each entry is produced by a single secant update (the iteration never
    /// solves an energy equation to convergence within one iterate).
    pub energies: Vec<S>,
    /// First-iterate energy in the published sense: the root of the *seed*
    /// linearization's matching function, found by secant iteration on that
    /// one frozen linear problem (no relinearization is involved).
    pub qlm1_energy: S,
    /// Linearization defect after each iterate (quadratically decreasing).
    pub defects: Vec<f64>,
    /// The converged phase iterate.
    pub phase: PhaseFunction<S>,
    /// Langer seed wavefunction the iteration started from.
    pub seed: LangerSeed<S>,
    /// Unwrapped phase of the seed (the zeroth iterate).
    pub seed_phase: PhaseFunction<S>,
    /// Frozen Prüfer scale κ.
    pub kappa: S,
    /// Matching radius (outer turning point of the seed).
    pub match_r: f64,
    pub turning: Turning<S>,
    pub nodes: u32,
}

impl<S: Scalar> QlmSolution<S> {
    /// Converged energy.
    pub fn energy(&self) -> S {
        *self.energies.last().expect("at least one iterate")
    }

    /// Energy of the first quasilinear iterate (root of the seed
    /// linearization's matching condition).
    pub fn qlm1(&self) -> S {
        self.qlm1_energy
    }

    /// Number of iterates performed.
    pub fn iterations(&self) -> usize {
        self.energies.len()
    }
}

/// Run the full pipeline for one state: WKB quantization, Langer seed,
/// quasilinear phase iteration with per-iterate energy matching.
pub fn solve_state<S: Scalar>(
    p: &Problem,
    state: &StateSpec,
    opts: &QlmOptions,
) -> Result<QlmSolution<S>> {
    let wkb: WkbSolution<S> = solve_wkb(p, state)?;
    let seed = langer_seed_dense(p, &wkb, state.nodes, opts.points_per_radian)?;
    let nodes = state.nodes;

    // Frozen phase scale: any positive constant is a valid gauge; 2m|E| makes
    // tan u ≈ ∓1-scale through the allowed region. For near-zero eigenvalues
    // fall back to the potential's depth so κ never degenerates.
    let e_scale = if wkb.seed_energy.to_f64().abs() < 1e-3 {
        S::from_f64(p.potential_min().abs() / 4.0)
    } else {
        wkb.seed_energy.abs()
    };
    let kap = (S::from_f64(2.0) * S::from_dd(p.mass) * e_scale).sqrt();
    let rm = wkb.turning.outer().to_f64();

    let tol_rel = opts.tol_rel.unwrap_or((S::eps() * 10.0).max(1e-21));
    let u0 = seed_phase(p, &seed, kap);
    let mut prev = u0.clone();
    let mut e = wkb.seed_energy;

    // First-iterate energy in the published sense: secant iteration on the
    // seed linearization's matching function, which stays frozen throughout.
    let qlm1_energy = {
        let scale = e.to_f64().abs().max(1e-3);
        let mut e0 = e;
        let mut m0 = phase_match(p, e0, kap, &prev, rm, nodes);
        let mut e1 = e0 + S::from_f64(1e-7 * scale);
        for _ in 0..30 {
            let m1 = phase_match(p, e1, kap, &prev, rm, nodes);
            let denom = m1 - m0;
            if denom.to_f64() == 0.0 {
                break;
            }
            let step = m1 * (e1 - e0) / denom;
            e0 = e1;
            m0 = m1;
            e1 -= step;
            if step.to_f64().abs() < 1e-12 * scale {
                break;
            }
        }
        e1
    };

    let mut energies: Vec<S> = Vec::new();
    let mut defects: Vec<f64> = Vec::new();
    // Probe offset for the first secant slope; later iterates scale it to
    // the latest energy change.
    let mut de_hint = 1e-4 * e.to_f64().abs().max(1e-3);
    let mut converged = false;
    for _ in 0..opts.max_iter {
        let e_new = energy_update(p, kap, &prev, rm, nodes, e, de_hint)?;
        de_hint = (e_new - e).abs().to_f64();
        if std::env::var_os("QLMTRACE").is_some() {
            eprintln!(
                "qlm iter {}: E = {:e} dE = {:.3e}",
                energies.len() + 1,
                e_new.to_f64(),
                de_hint
            );
        }
        let (next, defect) = sample_phase(p, e_new, kap, &prev, rm, nodes);
        let de = (e_new - e).abs().to_f64();
        energies.push(e_new);
        defects.push(defect);
        prev = next;
        let first = energies.len() == 1;
        e = e_new;
        if !first && de <= tol_rel * e_new.to_f64().abs().max(1e-3) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(SolveError::NonConvergence(format!(
            "state {} of {}: |ΔE| still above {:.1e} after {} iterates",
            state.label,
            p.name,
            tol_rel,
            energies.len()
        )));
    }
    Ok(QlmSolution {
        seed_energy: wkb.seed_energy,
        wkb_energy: wkb.energy,
        energies,
        qlm1_energy,
        defects,
        phase: prev,
        seed,
        seed_phase: u0,
        kappa: kap,
        match_r: rm,
        turning: wkb.turning,
        nodes,
    })
}

/// Reconstruct `χ = −A sin u` on the phase grid by integrating the converged
/// *nonlinear* phase equation together with the log-amplitude
/// `(ln A)' = −((κ² − k²)/2κ) sin 2u`, outward and inward, joined at the
/// match radius and normalized to `max |χ| = 1`.
pub fn reconstruct_wavefunction<S: Scalar>(p: &Problem, sol: &QlmSolution<S>) -> Vec<S> {
    reconstruct_chi(p, sol, sol.energy(), None)
}

/// The wavefunction of the *first* quasilinear iterate: the phase equation
/// linearized around the seed phase, at the first-iterate energy. The
/// amplitude law is evaluated on the iterate's own phase, which is accurate
/// to the same order as the iterate itself.
pub fn reconstruct_qlm1_wavefunction<S: Scalar>(p: &Problem, sol: &QlmSolution<S>) -> Vec<S> {
    reconstruct_chi(p, sol, sol.qlm1(), Some(&sol.seed_phase))
}

fn reconstruct_chi<S: Scalar>(
    p: &Problem,
    sol: &QlmSolution<S>,
    e: S,
    lin_source: Option<&PhaseFunction<S>>,
) -> Vec<S> {
    let kap = sol.kappa;
    let grid = &sol.phase.grid;
    let n = grid.len();
    let rm = sol.match_r;
    let i_split = grid.partition_point(|&g| g.to_f64() <= rm);
    let tol = phase_tol::<S>();
    let two = S::from_f64(2.0);

    let rhs = |r: S, y: &[S; 2]| {
        let k2 = p.ksq_exact(e, r);
        let du = match lin_source {
            Some(src) => {
                let up = src.eval(r);
                phase_rhs(k2, kap, up) + phase_rhs_du(k2, kap, up) * (y[0] - up)
            }
            None => phase_rhs(k2, kap, y[0]),
        };
        [du, -((kap * kap - k2) / (two * kap)) * (two * y[0]).sin()]
    };
    let observer = |r: S, _y: &mut [S; 2]| step_cap(p, e, r);

    let mut u = vec![S::zero(); n];
    let mut la = vec![S::zero(); n];

    let mut y = [bc_origin(p, e, kap), S::zero()];
    let mut cur = S::from_f64(p.r_min);
    for i in 0..i_split {
        if (grid[i] - cur).to_f64() > 0.0 {
            y = gbs_integrate(&mut rhs.clone(), cur, grid[i], y, tol, observer);
            cur = grid[i];
        }
        u[i] = y[0];
        la[i] = y[1];
    }
    let out_end = if i_split > 0 {
        gbs_integrate(&mut rhs.clone(), cur, S::from_f64(rm), y, tol, observer)
    } else {
        y
    };

    let mut y = [bc_outer(p, e, kap, sol.nodes), S::zero()];
    let mut cur = S::from_f64(p.r_max);
    for i in (i_split..n).rev() {
        if (cur - grid[i]).to_f64() > 0.0 {
            y = gbs_integrate(&mut rhs.clone(), cur, grid[i], y, tol, observer);
            cur = grid[i];
        }
        u[i] = y[0];
        la[i] = y[1];
    }
    let in_end = gbs_integrate(&mut rhs.clone(), cur, S::from_f64(rm), y, tol, observer);

    // Continuity of ln A at the match radius fixes the inward branch's scale.
    let shift = out_end[1] - in_end[1];
    for v in la[i_split..].iter_mut() {
        *v += shift;
    }
    // Subtract the maximum before exponentiating so the amplitude can span
    // hundreds of e-folds without overflow.
    let la_max = la
        .iter()
        .map(|v| v.to_f64())
        .fold(f64::NEG_INFINITY, f64::max);
    let mut chi: Vec<S> = (0..n)
        .map(|i| -((la[i] - S::from_f64(la_max)).exp() * u[i].sin()))
        .collect();
    let mut m = S::zero();
    for &c in &chi {
        m = m.maxv(c.abs());
    }
    let inv = S::one() / m;
    for v in chi.iter_mut() {
        *v *= inv;
    }
    chi
}
