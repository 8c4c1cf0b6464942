//! Numerical experiments built on the integrator: the connecting orbit from
//! the zero equilibrium, and period/envelope diagnostics of slowly decaying
//! transient oscillations.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dde::{integrate, IntegratorConfig, Trajectory};
use crate::error::{invalid, Error, Result};
use crate::model::{HistoryFunction, ModelParams};
use crate::phi::PhiSpec;
use crate::spectral::{leading_pair_at_star, leading_real_root_at_zero};

/// Distance to `x*` regarded as converged.
pub const CONVERGENCE_TOL: f64 = 1e-6;
/// Minimum prominence of a detected peak.
pub const PEAK_PROMINENCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct HeteroclinicResult {
    pub c: f64,
    pub lambda0: f64,
    pub trajectory: Trajectory,
    /// Slope of `ln x` over the early window where `x < x*/10`.
    pub fitted_growth: f64,
    /// `sup |x - x*|` over the last delay interval.
    pub terminal_gap: f64,
    /// Time after which `|x - x*|` stays below [`CONVERGENCE_TOL`].
    pub settled_at: Option<f64>,
}

#[derive(Serialize)]
struct HeteroclinicJson {
    rho: f64,
    c: f64,
    lambda0: f64,
    fitted_growth: f64,
    terminal_gap: f64,
}

impl HeteroclinicResult {
    /// `{rho, c, lambda0, fitted_growth, terminal_gap}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(HeteroclinicJson {
            rho: self.trajectory.params().rho(),
            c: self.c,
            lambda0: self.lambda0,
            fitted_growth: self.fitted_growth,
            terminal_gap: self.terminal_gap,
        })
        .expect("plain struct serializes")
    }
}

/// Exclusive upper bound on the launch amplitude.
pub fn launch_bound(params: &ModelParams) -> f64 {
    0.5 / (1.0 + params.rho())
}

/// Integrates from `c e^{lambda0 s}`, the leading unstable eigenfunction of
/// the zero equilibrium scaled by `c`.
pub fn heteroclinic(params: &ModelParams, c: f64, config: &IntegratorConfig) -> Result<HeteroclinicResult> {
    let bound = launch_bound(params);
    if !(c > 0.0 && c < bound) {
        return Err(invalid(format!("launch amplitude must lie in (0, {bound}), got {c}")));
    }
    let lambda0 = leading_real_root_at_zero(params);
    let phi = HistoryFunction::from_fn(config.steps_per_delay, |s| c * (lambda0 * s).exp())?;
    let (trajectory, _) = integrate(params, &phi, config)?;
    let x_star = params.x_star();
    let values = trajectory.values();

    let early: Vec<(f64, f64)> = values
        .iter()
        .enumerate()
        .take_while(|(_, &x)| x < 0.1 * x_star)
        .map(|(k, &x)| (trajectory.node_time(k), x.ln()))
        .collect();
    if early.len() < 2 {
        return Err(invalid("launch amplitude too large to observe early growth"));
    }
    let (fitted_growth, _) = least_squares(&early);

    let tail = trajectory.node_at_or_after(trajectory.t_end() - 1.0);
    let terminal_gap = values[tail..].iter().map(|x| (x - x_star).abs()).fold(0.0, f64::max);
    let settled_at = match values.iter().rposition(|x| (x - x_star).abs() >= CONVERGENCE_TOL) {
        Some(k) if k + 1 < values.len() => Some(trajectory.node_time(k + 1)),
        Some(_) => None,
        None => Some(0.0),
    };
    Ok(HeteroclinicResult { c, lambda0, trajectory, fitted_growth, terminal_gap, settled_at })
}

/// First time `x` reaches `level`, located by bisection on the dense output.
pub fn crossing_time(trajectory: &Trajectory, level: f64) -> Option<f64> {
    let values = trajectory.values();
    let k = values.iter().position(|&x| x >= level)?;
    if k == 0 {
        return Some(0.0);
    }
    let (mut a, mut b) = (trajectory.node_time(k - 1), trajectory.node_time(k));
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        if trajectory.eval(m) >= level {
            b = m;
        } else {
            a = m;
        }
    }
    Some(0.5 * (a + b))
}

/// Delay of `later` relative to `earlier` at the level `x*/2`.
pub fn time_shift(earlier: &Trajectory, later: &Trajectory) -> Option<f64> {
    let level = 0.5 * earlier.params().x_star();
    Some(crossing_time(later, level)? - crossing_time(earlier, level)?)
}

/// Slope and intercept of the least-squares line through `points`.
fn least_squares(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mt = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mt).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mt)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransientDiagnostics {
    pub window: (f64, f64),
    /// Times of all strict local maxima in the window.
    pub peak_times: Vec<f64>,
    pub peak_values: Vec<f64>,
    /// Peaks that are the largest within half a fundamental period.
    pub dominant_times: Vec<f64>,
    pub dominant_values: Vec<f64>,
    /// Median gap between dominant peaks.
    pub dominant_period: f64,
    /// Slope of `ln(peak - x*)` over the dominant peaks.
    pub envelope_rate: f64,
    /// `sup |x - x*|` over the window.
    pub envelope_amplitude: f64,
    pub leading_pair: Complex64,
}

/// Strict local maxima of `v` with prominence above [`PEAK_PROMINENCE`].
fn strict_maxima(v: &[f64]) -> Vec<usize> {
    let mut peaks = Vec::new();
    for i in 1..v.len().saturating_sub(1) {
        if !(v[i] > v[i - 1] && v[i] > v[i + 1]) {
            continue;
        }
        let base = |range: &mut dyn Iterator<Item = usize>| {
            let mut low = v[i];
            for j in range {
                if v[j] > v[i] {
                    break;
                }
                low = low.min(v[j]);
            }
            low
        };
        let left = base(&mut (0..i).rev());
        let right = base(&mut (i + 1..v.len()));
        if v[i] - left.max(right) > PEAK_PROMINENCE {
            peaks.push(i);
        }
    }
    peaks
}

/// Vertex of the parabola through three equally spaced samples, as an
/// offset in steps from the middle one and the value there.
fn parabolic_vertex(a: f64, b: f64, c: f64) -> (f64, f64) {
    let denom = a - 2.0 * b + c;
    if denom == 0.0 {
        return (0.0, b);
    }
    let off = 0.5 * (a - c) / denom;
    (off, b - 0.25 * (a - c) * off)
}

/// Fundamental period in samples from the autocorrelation: the highest
/// correlation after the first minimum.
fn fundamental_lag(v: &[f64]) -> Option<usize> {
    let n = v.len();
    let mean = v.iter().sum::<f64>() / n as f64;
    let y: Vec<f64> = v.iter().map(|x| x - mean).collect();
    let max_lag = n / 2;
    let acf: Vec<f64> =
        (0..=max_lag).map(|k| y[..n - k].iter().zip(&y[k..]).map(|(a, b)| a * b).sum()).collect();
    let first_min = (1..max_lag).find(|&k| acf[k] < 0.0 || (acf[k] <= acf[k - 1] && acf[k] <= acf[k + 1]))?;
    (first_min..=max_lag).max_by(|&a, &b| acf[a].total_cmp(&acf[b]))
}

/// Peak statistics of `x` on `window`.
pub fn transient_diagnostics(
    trajectory: &Trajectory,
    window: (f64, f64),
    params: &ModelParams,
) -> Result<TransientDiagnostics> {
    let (ta, tb) = window;
    if !(ta >= 0.0 && tb <= trajectory.t_end() + 1e-9 && tb - ta >= 5.0) {
        return Err(invalid(format!(
            "window [{ta}, {tb}] must lie in [0, {}] and span at least 5 delays",
            trajectory.t_end()
        )));
    }
    let a = trajectory.node_at_or_after(ta);
    let b = trajectory.node_at_or_after(tb);
    let v = &trajectory.values()[a..=b];
    let h = trajectory.step();
    let x_star = params.x_star();

    let peaks = strict_maxima(v);
    if peaks.len() < 3 {
        return Err(Error::InsufficientOscillation { found: peaks.len() });
    }
    let refined: Vec<(f64, f64)> = peaks
        .iter()
        .map(|&i| {
            let (off, val) = parabolic_vertex(v[i - 1], v[i], v[i + 1]);
            (trajectory.node_time(a + i) + off * h, val)
        })
        .collect();

    let lag = fundamental_lag(v).ok_or(Error::InsufficientOscillation { found: peaks.len() })?;
    let half = 0.5 * lag as f64 * h;
    let dominant: Vec<(f64, f64)> = refined
        .iter()
        .copied()
        .filter(|&(t, val)| refined.iter().all(|&(s, w)| (s - t).abs() > half || w <= val))
        .collect();
    if dominant.len() < 3 {
        return Err(Error::InsufficientOscillation { found: dominant.len() });
    }
    let mut gaps: Vec<f64> = dominant.windows(2).map(|w| w[1].0 - w[0].0).collect();
    gaps.sort_by(f64::total_cmp);
    let mid = gaps.len() / 2;
    let dominant_period = if gaps.len() % 2 == 1 { gaps[mid] } else { 0.5 * (gaps[mid - 1] + gaps[mid]) };

    let logs: Vec<(f64, f64)> =
        dominant.iter().filter(|p| p.1 > x_star).map(|&(t, val)| (t, (val - x_star).ln())).collect();
    let envelope_rate = if logs.len() >= 2 { least_squares(&logs).0 } else { f64::NAN };
    let envelope_amplitude = v.iter().map(|x| (x - x_star).abs()).fold(0.0, f64::max);

    Ok(TransientDiagnostics {
        window,
        peak_times: refined.iter().map(|p| p.0).collect(),
        peak_values: refined.iter().map(|p| p.1).collect(),
        dominant_times: dominant.iter().map(|p| p.0).collect(),
        dominant_values: dominant.iter().map(|p| p.1).collect(),
        dominant_period,
        envelope_rate,
        envelope_amplitude,
        leading_pair: leading_pair_at_star(params)?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GalleryEntry {
    pub phi: PhiSpec,
    pub trajectory: Trajectory,
    /// `None` when the window holds too few oscillations.
    pub diagnostics: Option<TransientDiagnostics>,
}

/// Integrates the default initial functions followed by `extra`, and
/// measures each on `window`.
pub fn shape_gallery(
    params: &ModelParams,
    extra: &[PhiSpec],
    config: &IntegratorConfig,
    window: (f64, f64),
) -> Result<Vec<GalleryEntry>> {
    let mut phis = PhiSpec::gallery_defaults().to_vec();
    phis.extend_from_slice(extra);
    phis.par_iter()
        .map(|phi| {
            let history = phi.to_history(config.steps_per_delay)?;
            let (trajectory, _) = integrate(params, &history, config)?;
            let diagnostics = match transient_diagnostics(&trajectory, window, params) {
                Ok(d) => Some(d),
                Err(Error::InsufficientOscillation { .. }) => None,
                Err(e) => return Err(e),
            };
            Ok(GalleryEntry { phi: *phi, trajectory, diagnostics })
        })
        .collect()
}

/// Largest `|x - y|` over the common nodes of `window`.
pub fn sup_distance(x: &Trajectory, y: &Trajectory, window: (f64, f64)) -> f64 {
    let a = x.node_at_or_after(window.0);
    let b = x.node_at_or_after(window.1);
    (a..=b).map(|k| (x.values()[k] - y.values()[k]).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(rho: f64) -> ModelParams {
        ModelParams::new(rho).unwrap()
    }

    #[test]
    fn least_squares_recovers_line() {
        let pts: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, 2.0 - 0.5 * i as f64)).collect();
        let (m, c) = least_squares(&pts);
        assert!((m + 0.5).abs() < 1e-14 && (c - 2.0).abs() < 1e-13);
    }

    #[test]
    fn parabola_vertex_exact() {
        let f = |x: f64| 3.0 - 2.0 * (x - 0.3).powi(2);
        let (off, val) = parabolic_vertex(f(-1.0), f(0.0), f(1.0));
        assert!((off - 0.3).abs() < 1e-14 && (val - 3.0).abs() < 1e-14);
    }

    #[test]
    fn maxima_skip_plateaus_and_noise() {
        let v = [0.0, 1.0, 1.0, 0.0, 2.0, 0.0, 0.5, 0.5 + 1e-12, 0.5, 3.0, 1.0];
        assert_eq!(strict_maxima(&v), vec![4, 9]);
    }

    #[test]
    fn fundamental_lag_ignores_harmonics() {
        let v: Vec<f64> = (0..2000)
            .map(|i| {
                let t = i as f64 / 100.0;
                (std::f64::consts::TAU * t).sin() + 0.6 * (2.0 * std::f64::consts::TAU * t).sin()
            })
            .collect();
        assert_eq!(fundamental_lag(&v), Some(100));
    }

    #[test]
    fn equilibrium_has_no_oscillation() {
        let params = p(100.0);
        let phi = HistoryFunction::constant(200, params.x_star()).unwrap();
        let (traj, _) = integrate(&params, &phi, &IntegratorConfig::new(200, 20.0).unwrap()).unwrap();
        let err = transient_diagnostics(&traj, (5.0, 15.0), &params).unwrap_err();
        assert_eq!(err, Error::InsufficientOscillation { found: 0 });
    }

    #[test]
    fn launch_amplitude_checked() {
        let cfg = IntegratorConfig::new(100, 10.0).unwrap();
        let params = p(20.0);
        assert!(heteroclinic(&params, 0.0, &cfg).is_err());
        assert!(heteroclinic(&params, 0.5 / 21.0, &cfg).is_err());
    }

    #[test]
    fn early_growth_matches_leading_root() {
        for rho in [5.0, 20.0, 50.0] {
            let params = p(rho);
            let cfg = IntegratorConfig::new(200, 40.0).unwrap();
            let res = heteroclinic(&params, 1e-5, &cfg).unwrap();
            let rel = (res.fitted_growth - res.lambda0).abs() / res.lambda0;
            assert!(rel < 0.02, "rho={rho} fitted={} lambda0={}", res.fitted_growth, res.lambda0);
        }
    }

    #[test]
    fn halving_launch_delays_by_ln2_over_lambda0() {
        let params = p(20.0);
        let cfg = IntegratorConfig::new(200, 40.0).unwrap();
        let a = heteroclinic(&params, 1e-5, &cfg).unwrap();
        let b = heteroclinic(&params, 5e-6, &cfg).unwrap();
        let expected = std::f64::consts::LN_2 / a.lambda0;
        let shift = time_shift(&a.trajectory, &b.trajectory).unwrap();
        assert!((shift - expected).abs() < 0.05 * expected, "{shift} vs {expected}");
    }

    #[test]
    fn diagnostics_are_pure() {
        let params = p(50.0);
        let phi = PhiSpec::gallery_defaults()[0].to_history(200).unwrap();
        let (traj, _) = integrate(&params, &phi, &IntegratorConfig::new(200, 30.0).unwrap()).unwrap();
        let a = transient_diagnostics(&traj, (20.0, 30.0), &params).unwrap();
        let b = transient_diagnostics(&traj.clone(), (20.0, 30.0), &params).unwrap();
        assert_eq!(a, b);
        assert!(a.dominant_period > 0.0);
    }

    #[test]
    fn gallery_shapes_differ_with_common_period() {
        let params = p(100.0);
        let cfg = IntegratorConfig::new(200, 60.0).unwrap();
        let gallery = shape_gallery(&params, &[], &cfg, (40.0, 60.0)).unwrap();
        assert_eq!(gallery.len(), 3);
        for (i, a) in gallery.iter().enumerate() {
            let d = a.diagnostics.as_ref().unwrap();
            assert!((d.dominant_period - 1.0).abs() < 0.1, "{}", d.dominant_period);
            for b in &gallery[i + 1..] {
                let dist = sup_distance(&a.trajectory, &b.trajectory, (40.0, 60.0));
                assert!(dist > 0.5 * params.x_star(), "{dist}");
            }
        }
    }

    #[test]
    fn moderate_rho_oscillation_dies_out() {
        let params = p(10.0);
        let cfg = IntegratorConfig::new(200, 60.0).unwrap();
        let gallery = shape_gallery(&params, &[], &cfg, (40.0, 60.0)).unwrap();
        let traj = &gallery[0].trajectory;
        let k = traj.node_at_or_after(50.0);
        let amp = traj.values()[k..].iter().map(|x| (x - params.x_star()).abs()).fold(0.0, f64::max);
        assert!(amp < 1e-4, "{amp}");
    }

    #[test]
    fn late_mode_matches_leading_pair() {
        let params = p(20.0);
        let res = heteroclinic(&params, 1e-5, &IntegratorConfig::new(200, 300.0).unwrap()).unwrap();
        assert!(res.terminal_gap < 1e-6);
        let d = transient_diagnostics(&res.trajectory, (60.0, 160.0), &params).unwrap();
        let omega = std::f64::consts::TAU / d.dominant_period;
        assert!((d.envelope_rate + 0.04).abs() < 0.02, "{}", d.envelope_rate);
        assert!((omega - 6.0).abs() < 0.5, "{omega}");
        assert!((omega - d.leading_pair.im).abs() < 0.05 * d.leading_pair.im);
    }

    #[test]
    fn late_frequency_tracks_leading_pair() {
        for rho in [50.0, 100.0, 190.0] {
            let params = p(rho);
            let phi = PhiSpec::gallery_defaults()[0].to_history(200).unwrap();
            let (traj, _) = integrate(&params, &phi, &IntegratorConfig::new(200, 420.0).unwrap()).unwrap();
            let d = transient_diagnostics(&traj, (400.0, 420.0), &params).unwrap();
            let omega = std::f64::consts::TAU / d.dominant_period;
            assert!((omega - d.leading_pair.im).abs() < 0.05 * d.leading_pair.im, "rho={rho} {omega}");
        }
    }

    #[test]
    fn json_keys() {
        let params = p(5.0);
        let res = heteroclinic(&params, 1e-4, &IntegratorConfig::new(64, 10.0).unwrap()).unwrap();
        let json = res.to_json();
        let keys: Vec<&str> = json.as_object().unwrap().keys().map(String::as_str).collect();
        for k in ["rho", "c", "lambda0", "fitted_growth", "terminal_gap"] {
            assert!(keys.contains(&k));
        }
    }
}
