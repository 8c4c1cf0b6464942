//! Fixed-step method-of-steps integration.
//!
//! Both the non-dimensional equation and the dimensional mean-field system
//! are integrated by classical RK4 on a two-component state: the solution
//! itself and an auxiliary quantity carrying the distributed delay (the
//! sliding integral `I(t) = ∫_{t-1}^{t} x`, or the proliferative density `p`).
//! The step is `h = delay / N`, so every delayed lookup falls on the grid or
//! at a half step, and all derivative breakpoints are grid nodes. Delayed
//! values between nodes come from cubic Hermite interpolation of the stored
//! values and right-hand-side samples.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::{grid_point, in_omega, rhs_parts, HistoryFunction, ModelParams, MIN_GRID};

/// Slack on `0 <= x <= 1` before a run that started in the feasible set is
/// reported as an invariance violation.
pub const GROWTH_SLACK: f64 = 1e-6;

/// Abscissae of the two-point Gauss-Legendre rule on `[0, 1]`.
const GAUSS2: [f64; 2] = [0.211_324_865_405_187_1, 0.788_675_134_594_812_9];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub steps_per_delay: usize,
    pub t_end: f64,
    pub record_diagnostics: bool,
}

impl IntegratorConfig {
    pub fn new(steps_per_delay: usize, t_end: f64) -> Result<Self> {
        let cfg = Self { steps_per_delay, t_end, record_diagnostics: true };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps_per_delay < MIN_GRID || !self.steps_per_delay.is_multiple_of(2) {
            return Err(invalid(format!(
                "steps per delay must be even and at least {MIN_GRID}, got {}",
                self.steps_per_delay
            )));
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(invalid(format!("t_end must be positive, got {}", self.t_end)));
        }
        Ok(())
    }

    /// Number of steps needed to reach `t_end` in units of the delay.
    fn step_count(&self, delay: f64) -> usize {
        let steps = (self.t_end / delay * self.steps_per_delay as f64 - 1e-9).ceil();
        (steps as usize).max(1)
    }
}

/// Node values and slopes of a solution on `t >= 0`, with Hermite dense output.
#[derive(Debug, Clone, PartialEq)]
struct Track {
    n: usize,
    h: f64,
    values: Vec<f64>,
    /// Right derivative at each node.
    derivs: Vec<f64>,
    /// Left derivative at node `n` (one delay); differs from the right one
    /// only when the history jumps at zero.
    deriv_left_at_delay: Option<f64>,
}

impl Track {
    #[inline]
    fn left_slope(&self, k: usize) -> f64 {
        match self.deriv_left_at_delay {
            Some(d) if k == self.n => d,
            _ => self.derivs[k],
        }
    }

    #[inline]
    fn hermite(&self, k: usize, u: f64) -> f64 {
        if u == 0.0 {
            return self.values[k];
        }
        if u == 1.0 {
            return self.values[k + 1];
        }
        hermite(
            self.values[k],
            self.values[k + 1],
            self.h * self.derivs[k],
            self.h * self.left_slope(k + 1),
            u,
        )
    }

    /// Exact integral of the Hermite cubic over interval `k`.
    #[inline]
    fn interval_integral(&self, k: usize) -> f64 {
        let h = self.h;
        h / 2.0 * (self.values[k] + self.values[k + 1])
            + h * h / 12.0 * (self.derivs[k] - self.left_slope(k + 1))
    }

    /// `C[k] = ∫_{0}^{t_k}` of the dense output.
    fn cumulative_integral(&self) -> Vec<f64> {
        let mut acc = Vec::with_capacity(self.values.len());
        acc.push(0.0);
        for k in 0..self.values.len() - 1 {
            let last = acc[k];
            acc.push(last + self.interval_integral(k));
        }
        acc
    }
}

#[inline]
fn hermite(y0: f64, y1: f64, m0: f64, m1: f64, u: f64) -> f64 {
    let u2 = u * u;
    let u3 = u2 * u;
    (2.0 * u3 - 3.0 * u2 + 1.0) * y0
        + (u3 - 2.0 * u2 + u) * m0
        + (-2.0 * u3 + 3.0 * u2) * y1
        + (u3 - u2) * m1
}

/// RK4 method of steps for `x' = F(x, a, x(t - delay))`, `a' = G(...)`.
///
/// `history(step, u)` returns the delayed value inside the history interval
/// that step `step < n` looks back onto, at fraction `u` of that interval;
/// `u = 1` on the last interval must be the left limit at zero.
fn method_of_steps<F, H, C>(
    n: usize,
    h: f64,
    steps: usize,
    start: (f64, f64),
    history: H,
    rhs: F,
    mut check: C,
) -> Result<(Track, Vec<f64>)>
where
    F: Fn(f64, f64, f64) -> (f64, f64),
    H: Fn(usize, f64) -> f64,
    C: FnMut(usize, f64) -> Result<()>,
{
    let mut track = Track {
        n,
        h,
        values: Vec::with_capacity(steps + 1),
        derivs: Vec::with_capacity(steps + 1),
        deriv_left_at_delay: None,
    };
    let mut aux = Vec::with_capacity(steps + 1);

    let (x0, a0) = start;
    track.values.push(x0);
    track.derivs.push(rhs(x0, a0, history(0, 0.0)).0);
    aux.push(a0);

    for step in 0..steps {
        let (d0, dm, d1) = if step >= n {
            let q = step - n;
            (track.values[q], track.hermite(q, 0.5), track.values[q + 1])
        } else {
            (history(step, 0.0), history(step, 0.5), history(step, 1.0))
        };
        let x = track.values[step];
        let a = aux[step];
        let (k1, l1) = rhs(x, a, d0);
        let (k2, l2) = rhs(x + 0.5 * h * k1, a + 0.5 * h * l1, dm);
        let (k3, l3) = rhs(x + 0.5 * h * k2, a + 0.5 * h * l2, dm);
        let (k4, l4) = rhs(x + h * k3, a + h * l3, d1);
        let x_new = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        let a_new = a + h / 6.0 * (l1 + 2.0 * l2 + 2.0 * l3 + l4);

        let k = step + 1;
        if !(x_new.is_finite() && a_new.is_finite()) {
            return Err(Error::NonFinite { t: k as f64 * h });
        }
        check(k, x_new)?;

        let delayed_right = if k >= n { track.values[k - n] } else { history(k, 0.0) };
        if k == n {
            track.deriv_left_at_delay = Some(rhs(x_new, a_new, d1).0);
        }
        track.values.push(x_new);
        track.derivs.push(rhs(x_new, a_new, delayed_right).0);
        aux.push(a_new);
    }
    Ok((track, aux))
}

/// Numerical solution of the non-dimensional equation on `[-1, t_end]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    params: ModelParams,
    history: HistoryFunction,
    track: Track,
    /// Sliding integral `I(t_k)`.
    integral: Vec<f64>,
    started_in_omega: bool,
}

impl Trajectory {
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn history(&self) -> &HistoryFunction {
        &self.history
    }

    /// Step size `1 / N`.
    pub fn step(&self) -> f64 {
        self.track.h
    }

    pub fn steps_per_delay(&self) -> usize {
        self.track.n
    }

    /// Always zero: nodes are `t_k = k h` for `k = 0..len()`.
    pub fn t_start(&self) -> f64 {
        0.0
    }

    pub fn t_end(&self) -> f64 {
        self.node_time(self.len() - 1)
    }

    /// Number of nodes on `[0, t_end]`.
    pub fn len(&self) -> usize {
        self.track.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.track.values.is_empty()
    }

    #[inline]
    pub fn node_time(&self, k: usize) -> f64 {
        k as f64 / self.track.n as f64
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|k| self.node_time(k))
    }

    pub fn values(&self) -> &[f64] {
        &self.track.values
    }

    /// Right-hand side at each node (right limit at `t = 0`).
    pub fn derivs(&self) -> &[f64] {
        &self.track.derivs
    }

    pub fn running_integral(&self) -> &[f64] {
        &self.integral
    }

    /// False when the initial function was outside the feasible set; such runs
    /// are integrated without the invariance check.
    pub fn started_in_omega(&self) -> bool {
        self.started_in_omega
    }

    /// Dense evaluation on `[-1, t_end]`; arguments outside are clamped.
    pub fn eval(&self, t: f64) -> f64 {
        if t < 0.0 {
            return self.history.eval(t.max(-1.0));
        }
        let n = self.track.n as f64;
        let last = self.len() - 1;
        let pos = (t * n).min(last as f64);
        let k = (pos.floor() as usize).min(last.saturating_sub(1));
        if last == 0 {
            return self.track.values[0];
        }
        self.track.hermite(k, pos - k as f64)
    }

    /// Index of the first node with `t_k >= t`.
    pub fn node_at_or_after(&self, t: f64) -> usize {
        let k = (t.max(0.0) * self.track.n as f64 - 1e-9).ceil().max(0.0) as usize;
        k.min(self.len() - 1)
    }

    /// Total density and its complement at every node.
    pub fn diagnostics(&self) -> DiagnosticsSeries {
        let rho = self.params.rho();
        let times: Vec<f64> = self.times().collect();
        let theta: Vec<f64> =
            self.track.values.iter().zip(&self.integral).map(|(x, i)| x + rho * i).collect();
        let w = theta.iter().map(|t| 1.0 - t).collect();
        DiagnosticsSeries { times, theta, w, running_integral: self.integral.clone() }
    }

    /// `Q[k] = ∫_{0}^{t_k} x(s - 1) ds`, from the history interpolant on
    /// `[-1, 0]` and the Hermite dense output afterwards.
    pub fn delayed_quadrature(&self) -> Vec<f64> {
        let n = self.track.n;
        let h = self.track.h;
        let mut q = Vec::with_capacity(self.len());
        q.push(0.0);
        for k in 0..self.len() - 1 {
            let piece = if k < n {
                let a = grid_point(k, n);
                GAUSS2.iter().map(|g| self.history.eval_left(a + g * h)).sum::<f64>() * h / 2.0
            } else {
                self.track.interval_integral(k - n)
            };
            let last = q[k];
            q.push(last + piece);
        }
        q
    }

    /// CSV with header `t,x,theta,w,I`, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let diag = self.diagnostics();
        writeln!(out, "t,x,theta,w,I")?;
        for k in 0..self.len() {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                diag.times[k], self.track.values[k], diag.theta[k], diag.w[k], diag.running_integral[k]
            )?;
        }
        Ok(())
    }
}

/// Derived series along a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsSeries {
    pub times: Vec<f64>,
    /// Total density `x + rho I`.
    pub theta: Vec<f64>,
    /// `1 - theta`.
    pub w: Vec<f64>,
    /// `I(t) = ∫_{t-1}^{t} x`.
    pub running_integral: Vec<f64>,
}

/// Integrates the non-dimensional equation from `phi` up to `config.t_end`.
pub fn integrate(
    params: &ModelParams,
    phi: &HistoryFunction,
    config: &IntegratorConfig,
) -> Result<(Trajectory, Option<DiagnosticsSeries>)> {
    config.validate()?;
    let n = config.steps_per_delay;
    let h = 1.0 / n as f64;
    let rho = params.rho();
    let started_in_omega = in_omega(phi, params);

    let history = |step: usize, u: f64| phi.eval_left(-1.0 + (step as f64 + u) * h);
    let rhs = |x: f64, i: f64, d: f64| (rhs_parts(rho, x, d, i), x - d);
    let check = |k: usize, x: f64| {
        if started_in_omega && !(-GROWTH_SLACK..=1.0 + GROWTH_SLACK).contains(&x) {
            Err(Error::InvarianceViolation { t: k as f64 * h, x })
        } else {
            Ok(())
        }
    };
    let (track, integral) = method_of_steps(
        n,
        h,
        config.step_count(1.0),
        (phi.head(), phi.integral()),
        history,
        rhs,
        check,
    )?;
    let traj =
        Trajectory { params: *params, history: phi.clone(), track, integral, started_in_omega };
    let diag = config.record_diagnostics.then(|| traj.diagnostics());
    Ok((traj, diag))
}

/// Sup-norm defect of `w(t) = w(0) exp(-rho ∫_0^t x(s-1) ds)` along a run.
///
/// `w` comes from the integrated state, the exponential from quadrature of
/// the dense output, so the two sides are computed independently.
pub fn w_crosscheck(trajectory: &Trajectory, diagnostics: &DiagnosticsSeries) -> f64 {
    let rho = trajectory.params().rho();
    let q = trajectory.delayed_quadrature();
    let w0 = diagnostics.w[0];
    diagnostics
        .w
        .iter()
        .zip(&q)
        .map(|(w, qk)| (w - w0 * (-rho * qk).exp()).abs())
        .fold(0.0, f64::max)
}

/// Lowest value of `x` over `[t_end / 2, t_end]`, minimised over a set of
/// initial functions. Runs are independent and executed in parallel.
pub fn persistence_floor(
    params: &ModelParams,
    phi_set: &[HistoryFunction],
    config: &IntegratorConfig,
) -> Result<f64> {
    if phi_set.is_empty() {
        return Err(invalid("persistence floor needs at least one initial function"));
    }
    for (i, phi) in phi_set.iter().enumerate() {
        if !(phi.head() > 0.0 && in_omega(phi, params)) {
            return Err(invalid(format!(
                "initial function {i} must lie in the feasible set with phi(0) > 0"
            )));
        }
    }
    let cfg = IntegratorConfig { record_diagnostics: false, ..*config };
    let floors: Result<Vec<f64>> = phi_set
        .par_iter()
        .map(|phi| {
            let (traj, _) = integrate(params, phi, &cfg)?;
            let start = traj.node_at_or_after(traj.t_end() / 2.0);
            Ok(traj.values()[start..].iter().copied().fold(f64::INFINITY, f64::min))
        })
        .collect();
    Ok(floors?.into_iter().fold(f64::INFINITY, f64::min))
}

/// Dimensional mean-field system for motile (`m`) and proliferative (`p`)
/// densities, with `m = 0` on `[-tau, 0)`, `m(0) = m0`, `p(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanFieldParams {
    /// Phenotype switching rate.
    pub r: f64,
    /// Cell-cycle delay.
    pub tau: f64,
    /// Number of lattice sites.
    pub capacity: f64,
    pub m0: f64,
}

impl MeanFieldParams {
    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64| v.is_finite() && v > 0.0;
        if !(pos(self.r) && pos(self.tau) && pos(self.capacity)) {
            return Err(invalid("r, tau and K must be positive"));
        }
        if !(self.m0.is_finite() && self.m0 >= 0.0 && self.m0 <= self.capacity) {
            return Err(invalid(format!("m0 must lie in [0, K], got {}", self.m0)));
        }
        Ok(())
    }

    /// The equivalent non-dimensional parameter `rho = r tau`.
    pub fn rho(&self) -> f64 {
        self.r * self.tau
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanFieldSeries {
    pub times: Vec<f64>,
    pub m: Vec<f64>,
    pub p: Vec<f64>,
    /// `r ∫_{t-tau}^{t} m(s) ds` from quadrature of the dense output of `m`.
    pub p_check: Vec<f64>,
    pub capacity: f64,
}

impl MeanFieldSeries {
    /// `(m + p) / K`.
    pub fn total_density(&self) -> Vec<f64> {
        self.m.iter().zip(&self.p).map(|(m, p)| (m + p) / self.capacity).collect()
    }

    /// Linear interpolation of the total density at `t`.
    pub fn total_density_at(&self, t: f64) -> f64 {
        let dt = self.times[1] - self.times[0];
        let pos = (t / dt).clamp(0.0, (self.times.len() - 1) as f64);
        let k = (pos.floor() as usize).min(self.times.len() - 2);
        let u = pos - k as f64;
        let at = |i: usize| (self.m[i] + self.p[i]) / self.capacity;
        (1.0 - u) * at(k) + u * at(k + 1)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,m,p,p_check")?;
        for k in 0..self.times.len() {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e}",
                self.times[k], self.m[k], self.p[k], self.p_check[k]
            )?;
        }
        Ok(())
    }
}

/// Integrates the mean-field system with the same scheme as [`integrate`];
/// `config.t_end` is in dimensional time and the step is `tau / N`.
pub fn mean_field_integrate(mf: &MeanFieldParams, config: &IntegratorConfig) -> Result<MeanFieldSeries> {
    mf.validate()?;
    config.validate()?;
    let n = config.steps_per_delay;
    let h = mf.tau / n as f64;
    let (r, cap) = (mf.r, mf.capacity);

    let rhs = |m: f64, p: f64, d: f64| (-r * m + r * d + r * d * (cap - p - m) / cap, r * m - r * d);
    let check = |k: usize, m: f64| {
        let x = m / cap;
        if !(-GROWTH_SLACK..=1.0 + GROWTH_SLACK).contains(&x) {
            Err(Error::InvarianceViolation { t: k as f64 * h, x })
        } else {
            Ok(())
        }
    };
    let (track, p) =
        method_of_steps(n, h, config.step_count(mf.tau), (mf.m0, 0.0), |_, _| 0.0, rhs, check)?;

    let cumulative = track.cumulative_integral();
    let p_check = (0..cumulative.len())
        .map(|k| r * (cumulative[k] - if k >= n { cumulative[k - n] } else { 0.0 }))
        .collect();
    let times = (0..track.values.len()).map(|k| k as f64 * mf.tau / n as f64).collect();
    Ok(MeanFieldSeries { times, m: track.values, p, p_check, capacity: cap })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cos_phi(n: usize, a: f64) -> HistoryFunction {
        HistoryFunction::from_fn(n, |s| 0.005 * ((a * s).cos() + 1.0)).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(IntegratorConfig::new(15, 1.0).is_err());
        assert!(IntegratorConfig::new(18, 1.0).is_ok());
        assert!(IntegratorConfig::new(19, 1.0).is_err());
        assert!(IntegratorConfig::new(200, 0.0).is_err());
    }

    #[test]
    fn equilibrium_is_fixed_point() {
        let params = ModelParams::new(7.0).unwrap();
        let phi = HistoryFunction::constant(200, 1.0 / 8.0).unwrap();
        let (traj, diag) = integrate(&params, &phi, &IntegratorConfig::new(200, 50.0).unwrap()).unwrap();
        assert!(traj.values().iter().all(|x| (x - 0.125).abs() < 1e-12));
        assert!(diag.unwrap().w.iter().all(|w| w.abs() < 1e-12));
        assert!((traj.t_end() - 50.0).abs() < 1e-12);
    }

    #[test]
    fn zero_stays_zero() {
        for rho in [0.3, 4.0, 90.0] {
            let params = ModelParams::new(rho).unwrap();
            let phi = HistoryFunction::constant(32, 0.0).unwrap();
            let (traj, _) = integrate(&params, &phi, &IntegratorConfig::new(32, 5.0).unwrap()).unwrap();
            assert!(traj.values().iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn converges_for_rho_ten() {
        let params = ModelParams::new(10.0).unwrap();
        let (traj, _) =
            integrate(&params, &cos_phi(200, 10.0), &IntegratorConfig::new(200, 60.0).unwrap()).unwrap();
        let last = *traj.values().last().unwrap();
        assert!((last - 1.0 / 11.0).abs() < 1e-3, "x(60) = {last}");
    }

    #[test]
    fn dense_output_matches_nodes() {
        let params = ModelParams::new(3.0).unwrap();
        let (traj, _) =
            integrate(&params, &cos_phi(64, 10.0), &IntegratorConfig::new(64, 4.0).unwrap()).unwrap();
        for k in 0..traj.len() {
            assert_eq!(traj.eval(traj.node_time(k)), traj.values()[k]);
        }
        assert_eq!(traj.eval(-0.5), traj.history().eval(-0.5));
    }

    #[test]
    fn infeasible_start_is_flagged_not_rejected() {
        let params = ModelParams::new(1.0).unwrap();
        let phi = HistoryFunction::constant(32, 0.9).unwrap();
        let (traj, _) = integrate(&params, &phi, &IntegratorConfig::new(32, 5.0).unwrap()).unwrap();
        assert!(!traj.started_in_omega());
    }

    #[test]
    fn w_identity_holds() {
        let params = ModelParams::new(10.0).unwrap();
        let (traj, diag) =
            integrate(&params, &cos_phi(200, 10.0), &IntegratorConfig::new(200, 10.0).unwrap()).unwrap();
        let defect = w_crosscheck(&traj, &diag.unwrap());
        assert!(defect < 1e-6, "defect {defect}");

        let star = HistoryFunction::constant(200, 1.0 / 11.0).unwrap();
        let (traj, diag) = integrate(&params, &star, &IntegratorConfig::new(200, 10.0).unwrap()).unwrap();
        assert!(w_crosscheck(&traj, &diag.unwrap()) < 1e-14);
    }

    #[test]
    fn mean_field_zero_start() {
        let mf = MeanFieldParams { r: 1.0, tau: 1.0, capacity: 1.0, m0: 0.0 };
        let s = mean_field_integrate(&mf, &IntegratorConfig::new(50, 5.0).unwrap()).unwrap();
        assert!(s.m.iter().chain(&s.p).all(|&v| v == 0.0));
    }

    #[test]
    fn mean_field_p_matches_window_integral() {
        for (r, tau, cap, m0) in [(1.0, 1.0, 1.0, 0.05), (2.0, 0.7, 1.0, 0.3), (0.5, 3.0, 1.0, 0.9)] {
            let mf = MeanFieldParams { r, tau, capacity: cap, m0 };
            let s = mean_field_integrate(&mf, &IntegratorConfig::new(200, 30.0).unwrap()).unwrap();
            let err = s.p.iter().zip(&s.p_check).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err < 1e-8, "r={r} tau={tau}: {err}");
        }
    }

    #[test]
    fn mean_field_rejects_bad_params() {
        let cfg = IntegratorConfig::new(50, 5.0).unwrap();
        let bad = MeanFieldParams { r: 1.0, tau: 1.0, capacity: 1.0, m0: 2.0 };
        assert!(mean_field_integrate(&bad, &cfg).is_err());
        let bad = MeanFieldParams { r: 0.0, tau: 1.0, capacity: 1.0, m0: 0.1 };
        assert!(mean_field_integrate(&bad, &cfg).is_err());
    }

    #[test]
    fn persistence_floor_at_equilibrium() {
        let params = ModelParams::new(4.0).unwrap();
        let star = HistoryFunction::constant(40, 0.2).unwrap();
        let floor = persistence_floor(&params, &[star], &IntegratorConfig::new(40, 20.0).unwrap()).unwrap();
        assert!((floor - 0.2).abs() < 1e-12);
        let zero = HistoryFunction::constant(40, 0.0).unwrap();
        assert!(persistence_floor(&params, &[zero], &IntegratorConfig::new(40, 20.0).unwrap()).is_err());
    }

    #[test]
    fn csv_layout() {
        let params = ModelParams::new(1.0).unwrap();
        let phi = HistoryFunction::constant(16, 0.5).unwrap();
        let (traj, _) = integrate(&params, &phi, &IntegratorConfig::new(16, 1.0).unwrap()).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,x,theta,w,I"));
        let first: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(first, vec![0.0, 0.5, 1.0, 0.0, 0.5]);
        assert_eq!(text.lines().count(), 18);
    }
}
