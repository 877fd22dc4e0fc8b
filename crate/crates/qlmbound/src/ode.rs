//! Numerical workhorses shared by the solvers:
//! - a Gragg–Bulirsch–Stoer (GBS) integrator: modified-midpoint sweeps with
//!   polynomial extrapolation in h², effective order 12–16, which reaches
//!   local errors of 1e-26..1e-28 in extended precision with step sizes a
//!   plain Runge–Kutta scheme could not afford;
//! - a classical RK4 step-doubling driver, kept as an independent
//!   cross-check of the GBS implementation;
//! - Gauss–Legendre panels with adaptive bisection for the action integrals.

use crate::scalar::Scalar;

/// Sub-step counts of the extrapolation ladder.
const N_SEQ: [usize; 9] = [2, 4, 6, 8, 10, 12, 14, 16, 18];

/// One modified-midpoint sweep with `n` sub-steps across `h`.
fn midpoint_sweep<S: Scalar, const N: usize, F>(
    rhs: &mut F,
    t: S,
    y: &[S; N],
    h: S,
    n: usize,
) -> [S; N]
where
    F: FnMut(S, &[S; N]) -> [S; N],
{
    let hs = h / S::from_f64(n as f64);
    let mut zm = *y;
    let f0 = rhs(t, y);
    let mut zc = std::array::from_fn(|i| y[i] + hs * f0[i]);
    let mut tm = t + hs;
    for _ in 1..n {
        let f = rhs(tm, &zc);
        let znext = std::array::from_fn(|i| zm[i] + S::from_f64(2.0) * hs * f[i]);
        zm = zc;
        zc = znext;
        tm += hs;
    }
    let f = rhs(t + h, &zc);
    std::array::from_fn(|i| (zm[i] + zc[i] + hs * f[i]) / S::from_f64(2.0))
}

/// One adaptive GBS step attempt. Returns `(y_new, err_est, levels_used)` if
/// the extrapolation tableau converged below `tol`. `scale` holds the
/// per-component error denominators (typically |y_i| + |h·f_i|).
pub fn gbs_step<S: Scalar, const N: usize, F>(
    rhs: &mut F,
    t: S,
    y: &[S; N],
    h: S,
    tol: f64,
    scale: &[f64; N],
) -> Option<([S; N], f64, usize)>
where
    F: FnMut(S, &[S; N]) -> [S; N],
{
    // rows[k][j] = T_{k,j}: sweep with N_SEQ[k] sub-steps, extrapolated j
    // times in (h/n)^2 (Deuflhard tableau).
    let mut rows: Vec<Vec<[S; N]>> = Vec::with_capacity(N_SEQ.len());
    for (k, &n) in N_SEQ.iter().enumerate() {
        let mut row = vec![midpoint_sweep(rhs, t, y, h, n)];
        for j in 1..=k {
            let ratio = N_SEQ[k] as f64 / N_SEQ[k - j] as f64;
            let fac = S::from_f64(1.0 / (ratio * ratio - 1.0));
            let cur = row[j - 1];
            let below = rows[k - 1][j - 1];
            row.push(std::array::from_fn(|i| cur[i] + (cur[i] - below[i]) * fac));
        }
        if k > 0 {
            let best = row[k];
            let prev = row[k - 1];
            let err = (0..N)
                .map(|i| (best[i] - prev[i]).to_f64().abs() / scale[i])
                .fold(0.0, f64::max);
            if err < tol {
                return Some((best, err.max(1e-3 * tol), k));
            }
        }
        rows.push(row);
    }
    None
}

/// Integrate `y' = f(t, y)` from `t0` to `t1` (either direction). The
/// observer runs after every accepted step and may renormalize the state;
/// it returns an extra cap on the next step size (`f64::INFINITY` for none).
pub fn gbs_integrate<S: Scalar, const N: usize, F, O>(
    rhs: &mut F,
    t0: S,
    t1: S,
    y0: [S; N],
    tol: f64,
    mut observer: O,
) -> [S; N]
where
    F: FnMut(S, &[S; N]) -> [S; N],
    O: FnMut(S, &mut [S; N]) -> f64,
{
    let dir = if (t1 - t0).to_f64() >= 0.0 { 1.0 } else { -1.0 };
    let total = (t1 - t0).to_f64().abs();
    let mut t = t0;
    let mut y = y0;
    let mut h = dir * (total / 16.0).min(0.1);
    let mut cap = observer(t, &mut y).max(1e-12);
    loop {
        let remaining = (t1 - t).to_f64() * dir;
        if remaining <= 0.0 {
            return y;
        }
        // The last step must land on t1 *exactly in S*: rounding the step to
        // f64 would leave an O(eps_f64·h) endpoint offset, which for a
        // working precision finer than f64 dominates the integration error.
        let hcap = h.abs().min(cap);
        let (hs, t_next, hmag) = if remaining <= hcap {
            (t1 - t, t1, remaining)
        } else {
            let hstep = hcap * dir;
            (S::from_f64(hstep), t + S::from_f64(hstep), hcap)
        };
        // Per-component error scale |y_i| + |h·f_i|: keeps components of very
        // different magnitude (e.g. χ and χ' near the origin) individually
        // accurate, and stays meaningful across zero crossings.
        let f0 = rhs(t, &y);
        let overall = (0..N)
            .map(|i| y[i].to_f64().abs())
            .fold(0.0, f64::max)
            .max(1e-280);
        let scale: [f64; N] = std::array::from_fn(|i| {
            (y[i].to_f64().abs() + hmag * f0[i].to_f64().abs()).max(1e-12 * overall)
        });
        match gbs_step(rhs, t, &y, hs, tol, &scale) {
            Some((ynew, err, level)) => {
                t = t_next;
                y = ynew;
                cap = observer(t, &mut y).max(1e-12);
                // Grow cautiously; shrink if the tableau had to go deep.
                let grow: f64 = if level <= 4 {
                    2.0
                } else if level <= 6 {
                    1.2
                } else {
                    0.7
                };
                let quality = (tol / err.max(1e-300)).powf(1.0 / 12.0).min(2.0);
                h = (hmag * grow.min(quality * 1.5)).max(1e-12) * dir;
            }
            None => {
                h = hmag * 0.25 * dir;
                assert!(
                    h.abs() > 1e-13 * total.max(1.0),
                    "gbs_integrate: step size underflow at t = {}",
                    t.to_f64()
                );
            }
        }
    }
}

/// Classical RK4 with step doubling (Richardson estimate). Much slower than
/// GBS for tight tolerances; retained as an independent cross-check.
pub fn rk4_integrate<S: Scalar, const N: usize, F>(
    rhs: &mut F,
    t0: S,
    t1: S,
    y0: [S; N],
    steps: usize,
) -> [S; N]
where
    F: FnMut(S, &[S; N]) -> [S; N],
{
    let h = (t1 - t0) / S::from_f64(steps as f64);
    let half = S::from_f64(0.5);
    let sixth = S::one() / S::from_f64(6.0);
    let mut t = t0;
    let mut y = y0;
    for _ in 0..steps {
        let k1 = rhs(t, &y);
        let y2: [S; N] = std::array::from_fn(|i| y[i] + half * h * k1[i]);
        let k2 = rhs(t + half * h, &y2);
        let y3: [S; N] = std::array::from_fn(|i| y[i] + half * h * k2[i]);
        let k3 = rhs(t + half * h, &y3);
        let y4: [S; N] = std::array::from_fn(|i| y[i] + h * k3[i]);
        let k4 = rhs(t + h, &y4);
        y = std::array::from_fn(|i| {
            y[i] + h * sixth * (k1[i] + S::from_f64(2.0) * (k2[i] + k3[i]) + k4[i])
        });
        t += h;
    }
    y
}

// ---------------------------------------------------------------------------
// Gauss–Legendre quadrature.
// ---------------------------------------------------------------------------

/// Fixed-order Gauss–Legendre rule on [-1, 1], nodes computed at runtime by
/// Newton iteration on the Legendre recurrence in the working precision.
pub struct GaussLegendre<S> {
    nodes: Vec<S>,
    weights: Vec<S>,
}

impl<S: Scalar> GaussLegendre<S> {
    pub fn new(n: usize) -> GaussLegendre<S> {
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 1..=n {
            // Chebyshev-like initial guess, then Newton on P_n.
            let mut x = S::from_f64(
                (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos(),
            );
            let mut dp = S::one();
            for _ in 0..60 {
                let (p, d) = legendre_pair(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.to_f64().abs() < 4.0 * S::eps() {
                    let (p2, d2) = legendre_pair(n, x);
                    dp = d2;
                    x -= p2 / d2;
                    break;
                }
            }
            nodes.push(x);
            let w = S::from_f64(2.0) / ((S::one() - x * x) * dp * dp);
            weights.push(w);
        }
        GaussLegendre { nodes, weights }
    }

    /// ∫_a^b f dx with one panel.
    pub fn panel<F: FnMut(S) -> S>(&self, f: &mut F, a: S, b: S) -> S {
        let half = S::from_f64(0.5);
        let mid = (a + b) * half;
        let rad = (b - a) * half;
        let mut acc = S::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += *w * f(mid + rad * *x);
        }
        acc * rad
    }

    /// Adaptive bisection to an absolute tolerance.
    pub fn adaptive<F: FnMut(S) -> S>(&self, f: &mut F, a: S, b: S, abs_tol: f64) -> S {
        let whole = self.panel(f, a, b);
        self.adapt_rec(f, a, b, whole, abs_tol, 0)
    }

    fn adapt_rec<F: FnMut(S) -> S>(
        &self,
        f: &mut F,
        a: S,
        b: S,
        whole: S,
        abs_tol: f64,
        depth: usize,
    ) -> S {
        let mid = (a + b) * S::from_f64(0.5);
        let left = self.panel(f, a, mid);
        let right = self.panel(f, mid, b);
        let diff = ((left + right) - whole).to_f64().abs();
        if diff <= abs_tol || depth >= 48 {
            assert!(
                depth < 48,
                "adaptive quadrature failed to converge (residual {diff:.3e})"
            );
            return left + right;
        }
        self.adapt_rec(f, a, mid, left, abs_tol * 0.5, depth + 1)
            + self.adapt_rec(f, mid, b, right, abs_tol * 0.5, depth + 1)
    }
}

/// (P_n(x), P_n'(x)) via the three-term recurrence.
fn legendre_pair<S: Scalar>(n: usize, x: S) -> (S, S) {
    let mut p0 = S::one();
    let mut p1 = x;
    for k in 2..=n {
        let kf = S::from_f64(k as f64);
        let p2 = ((S::from_f64((2 * k - 1) as f64) * x * p1)
            - S::from_f64((k - 1) as f64) * p0)
            / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = S::from_f64(n as f64) * (x * p1 - p0) / (x * x - S::one());
    (p1, dp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xprec::Dd;

    #[test]
    fn gl_integrates_polynomials_exactly() {
        let gl: GaussLegendre<f64> = GaussLegendre::new(8);
        // Degree 15 is exact for an 8-point rule.
        let v = gl.panel(&mut |x: f64| x.powi(14), -1.0, 1.0);
        assert!((v - 2.0 / 15.0).abs() < 1e-14, "got {v}");
    }

    #[test]
    fn gl_extended_reaches_format_precision() {
        let gl: GaussLegendre<Dd> = GaussLegendre::new(20);
        let v = gl.adaptive(
            &mut |x: Dd| x.exp(),
            Dd::ZERO,
            Dd::ONE,
            1e-30,
        );
        let want = Dd::ONE.exp() - Dd::ONE;
        assert!((v - want).abs().hi < 1e-29, "∫exp = {v}");
    }

    #[test]
    fn gbs_harmonic_oscillator() {
        // y'' = -y integrated as a 2-system over 10 periods.
        let t1 = Dd::two_pi().mul_f64(10.0);
        let y = gbs_integrate(
            &mut |_t, y: &[Dd; 2]| [y[1], -y[0]],
            Dd::ZERO,
            t1,
            [Dd::ONE, Dd::ZERO],
            1e-26,
            |_t, _y| f64::INFINITY,
        );
        assert!((y[0] - Dd::ONE).abs().hi < 5e-21, "cos drift {:?}", y[0]);
        assert!(y[1].abs().hi < 5e-21, "sin drift {:?}", y[1]);
    }

    #[test]
    fn gbs_matches_rk4_crosscheck() {
        // Independent integrator agreement on a mildly stiff linear problem.
        let rhs = |t: f64, y: &[f64; 2]| [y[1], -(1.0 + t * t) * y[0]];
        let a = gbs_integrate(
            &mut rhs.clone(),
            0.0,
            3.0,
            [1.0, 0.0],
            1e-13,
            |_t, _y| f64::INFINITY,
        );
        let b = rk4_integrate(&mut rhs.clone(), 0.0, 3.0, [1.0, 0.0], 40_000);
        assert!((a[0] - b[0]).abs() < 1e-10, "{a:?} vs {b:?}");
        assert!((a[1] - b[1]).abs() < 1e-10);
    }

    #[test]
    fn gbs_observer_can_renormalize() {
        // Exponential growth y' = 5y over a long range with renormalization;
        // counts how often the observer rescaled.
        let mut rescales = 0;
        let y = gbs_integrate(
            &mut |_t, y: &[f64; 1]| [5.0 * y[0]],
            0.0,
            200.0,
            [1.0],
            1e-12,
            |_t, y: &mut [f64; 1]| {
                if y[0].abs() > 1e100 {
                    y[0] *= 1e-100;
                    rescales += 1;
                }
                f64::INFINITY
            },
        );
        assert!(rescales > 0);
        assert!(y[0].is_finite());
    }
}
