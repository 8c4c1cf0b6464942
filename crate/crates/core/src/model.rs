//! Model definitions for the non-dimensional go-or-grow equation
//!
//! ```text
//! x'(t) = -rho x(t) + rho x(t-1) (2 - rho ∫_{t-1}^{t} x(s) ds - x(t))
//! ```
//!
//! The state of the equation is a history segment on `[-1, 0]`, represented
//! here by [`HistoryFunction`]: samples on a uniform grid with piecewise-cubic
//! evaluation and composite Simpson quadrature.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Minimum number of grid intervals on the unit delay.
pub const MIN_GRID: usize = 16;

/// Slack on the `theta <= 1` test so that states on the boundary of the
/// feasible set are accepted.
pub const OMEGA_TOL: f64 = 1e-12;

/// The single dimensionless parameter `rho = r * tau`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    rho: f64,
}

impl ModelParams {
    pub fn new(rho: f64) -> Result<Self> {
        if !(rho.is_finite() && rho > 0.0) {
            return Err(invalid(format!("rho must be positive and finite, got {rho}")));
        }
        Ok(Self { rho })
    }

    #[inline]
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Positive equilibrium `1 / (rho + 1)`.
    #[inline]
    pub fn x_star(&self) -> f64 {
        1.0 / (self.rho + 1.0)
    }
}

/// The two constant solutions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Equilibria {
    pub zero: f64,
    pub positive: f64,
}

pub fn equilibria(params: &ModelParams) -> Equilibria {
    Equilibria { zero: 0.0, positive: params.x_star() }
}

/// Local Lipschitz constant of the right-hand side on the ball of radius `m`.
pub fn lipschitz_bound(m: f64, params: &ModelParams) -> Result<f64> {
    if !(m.is_finite() && m > 0.0) {
        return Err(invalid(format!("radius M must be positive, got {m}")));
    }
    let rho = params.rho;
    Ok(3.0 * rho + m * (2.0 * rho * rho + 2.0 * rho))
}

/// Initial segment `phi` on `[-1, 0]`, sampled at `s_i = -1 + i/N`.
///
/// `head` is the value used for `x(0)`. It equals the last sample for
/// continuous data; [`HistoryFunction::with_initial_value`] allows a jump at
/// zero (used by the mean-field initial condition, where the history is zero
/// on `[-1, 0)` and `x(0) > 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryFunction {
    samples: Vec<f64>,
    head: f64,
}

impl HistoryFunction {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        let head = *samples.last().ok_or_else(|| invalid("history has no samples"))?;
        Self::with_initial_value(samples, head)
    }

    /// History whose left limit at zero is the last sample, with `x(0) = x0`.
    pub fn with_initial_value(samples: Vec<f64>, x0: f64) -> Result<Self> {
        if samples.len() < MIN_GRID + 1 {
            return Err(invalid(format!(
                "history needs at least {} samples, got {}",
                MIN_GRID + 1,
                samples.len()
            )));
        }
        if !(samples.len() - 1).is_multiple_of(2) {
            return Err(invalid("history grid count must be even"));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(invalid(format!("history sample {i} is not finite")));
        }
        if !x0.is_finite() {
            return Err(invalid("initial value is not finite"));
        }
        Ok(Self { samples, head: x0 })
    }

    /// Samples `f` on the grid with `n` intervals.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let samples = (0..=n).map(|i| f(grid_point(i, n))).collect();
        Self::new(samples)
    }

    pub fn constant(n: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n + 1])
    }

    #[inline]
    pub fn grid_count(&self) -> usize {
        self.samples.len() - 1
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// `x(0)`.
    #[inline]
    pub fn head(&self) -> f64 {
        self.head
    }

    /// `phi(s)` for `s` in `[-1, 0]`; returns [`Self::head`] at `s = 0`.
    pub fn eval(&self, s: f64) -> f64 {
        if s >= 0.0 {
            self.head
        } else {
            self.eval_left(s)
        }
    }

    /// Piecewise-cubic interpolant through the samples; at `s = 0` this is
    /// the left limit (the last sample). Arguments are clamped to `[-1, 0]`.
    pub fn eval_left(&self, s: f64) -> f64 {
        let n = self.grid_count();
        let pos = ((s + 1.0) * n as f64).clamp(0.0, n as f64);
        let nearest = pos.round();
        if (pos - nearest).abs() < 1e-10 {
            return self.samples[nearest as usize];
        }
        let i = (pos.floor() as usize).min(n - 1);
        let j0 = i.saturating_sub(1).min(n - 3);
        let u = pos - j0 as f64;
        let y = &self.samples[j0..j0 + 4];
        lagrange4(u, y)
    }

    /// `∫_{-1}^{0} phi(s) ds` by composite Simpson.
    pub fn integral(&self) -> f64 {
        simpson(&self.samples, 1.0 / self.grid_count() as f64)
    }

    /// Supremum norm over the samples and `x(0)`.
    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().fold(self.head.abs(), |m, v| m.max(v.abs()))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.head >= 0.0 && self.samples.iter().all(|&v| v >= 0.0)
    }
}

#[inline]
pub(crate) fn grid_point(i: usize, n: usize) -> f64 {
    -1.0 + i as f64 / n as f64
}

/// Cubic through `(0, y0), (1, y1), (2, y2), (3, y3)` evaluated at `u`.
#[inline]
fn lagrange4(u: f64, y: &[f64]) -> f64 {
    let (u0, u1, u2, u3) = (u, u - 1.0, u - 2.0, u - 3.0);
    -y[0] * u1 * u2 * u3 / 6.0 + y[1] * u0 * u2 * u3 / 2.0 - y[2] * u0 * u1 * u3 / 2.0
        + y[3] * u0 * u1 * u2 / 6.0
}

/// Composite Simpson rule on equally spaced values (odd length).
pub(crate) fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len() - 1;
    debug_assert!(n.is_multiple_of(2));
    let mut odd = 0.0;
    let mut even = 0.0;
    for (i, v) in values.iter().enumerate().take(n).skip(1) {
        if i % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    h / 3.0 * (values[0] + values[n] + 4.0 * odd + 2.0 * even)
}

/// `f` evaluated from its three ingredients: `x(t)`, `x(t-1)` and the
/// sliding integral `∫_{t-1}^{t} x`.
#[inline]
pub fn rhs_parts(rho: f64, now: f64, delayed: f64, window_integral: f64) -> f64 {
    -rho * now + rho * delayed * (2.0 - rho * window_integral - now)
}

/// Right-hand side functional `f(phi)`.
pub fn rhs(phi: &HistoryFunction, params: &ModelParams) -> f64 {
    rhs_parts(params.rho, phi.head(), phi.eval(-1.0), phi.integral())
}

/// Total density `phi(0) + rho ∫ phi`.
pub fn theta(phi: &HistoryFunction, params: &ModelParams) -> f64 {
    phi.head() + params.rho * phi.integral()
}

/// Membership in the feasible set: nonnegative samples and `theta <= 1`.
pub fn in_omega(phi: &HistoryFunction, params: &ModelParams) -> bool {
    phi.is_nonnegative() && theta(phi, params) <= 1.0 + OMEGA_TOL
}
