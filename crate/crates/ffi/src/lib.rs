//! C interface to `gogrow`.
//!
//! Every function returns a [`GgStatus`]. On failure a message describing
//! the last error on the calling thread is available from
//! [`gg_last_error`]. Objects handed out through `out` pointers are owned by
//! the caller and must be released with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gogrow::abm::{AbmState, DensitySeries, LatticeParams};
use gogrow::dde::{integrate, IntegratorConfig, Trajectory};
use gogrow::model::{equilibria, lipschitz_bound, HistoryFunction, ModelParams};
use gogrow::phi::PhiSpec;
use gogrow::spectral::{c_curve, find_roots, rho_crit, unstable_count_at_zero, CharRoot, EquilibriumTag, Rect};
use gogrow::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GgStatus {
    Ok = 0,
    InvalidInput = 1,
    InvarianceViolation = 2,
    NonFinite = 3,
    BoundaryTooClose = 4,
    SubdivisionFailure = 5,
    DegenerateParameter = 6,
    Singularity = 7,
    InsufficientOscillation = 8,
    NullPointer = 9,
    Panic = 10,
}

impl From<&Error> for GgStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidInput(_) => Self::InvalidInput,
            Error::InvarianceViolation { .. } => Self::InvarianceViolation,
            Error::NonFinite { .. } => Self::NonFinite,
            Error::BoundaryTooClose { .. } => Self::BoundaryTooClose,
            Error::SubdivisionFailure(_) => Self::SubdivisionFailure,
            Error::DegenerateParameter { .. } => Self::DegenerateParameter,
            Error::Singularity(_) => Self::Singularity,
            Error::InsufficientOscillation { .. } => Self::InsufficientOscillation,
        }
    }
}

/// Which characteristic function to search.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GgEquilibrium {
    AtZero = 0,
    AtStar = 1,
    Reduced = 2,
}

impl From<GgEquilibrium> for EquilibriumTag {
    fn from(e: GgEquilibrium) -> Self {
        match e {
            GgEquilibrium::AtZero => EquilibriumTag::AtZero,
            GgEquilibrium::AtStar => EquilibriumTag::AtStar,
            GgEquilibrium::Reduced => EquilibriumTag::Reduced,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GgRoot {
    pub re: f64,
    pub im: f64,
    pub residual: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GgLatticeParams {
    pub n_dims: usize,
    pub side: usize,
    pub spacing: f64,
    pub seeding: f64,
    pub switch_rate: f64,
    pub cycle_delay: f64,
    pub motility_rate: f64,
}

/// Numerical solution of the delay equation.
pub struct GgTrajectory(Trajectory);

/// Characteristic roots sorted by decreasing real part.
pub struct GgRootSet(Vec<CharRoot>);

/// Density series of one lattice simulation.
pub struct GgDensitySeries(DensitySeries);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

/// Runs `f`, recording errors and converting panics into a status.
fn guard(f: impl FnOnce() -> Result<(), GgStatus>) -> GgStatus {
    set_error(String::new());
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GgStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            GgStatus::Panic
        }
    }
}

fn fail(e: Error) -> GgStatus {
    let status = GgStatus::from(&e);
    set_error(e.to_string());
    status
}

fn null(what: &str) -> GgStatus {
    set_error(format!("null pointer: {what}"));
    GgStatus::NullPointer
}

/// Writes `v` through `out` if it is non-null.
unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), GgStatus> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn gg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Equilibria `0` and `1 / (rho + 1)`.
///
/// # Safety
/// `zero` and `positive` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gg_equilibria(rho: f64, zero: *mut f64, positive: *mut f64) -> GgStatus {
    guard(|| {
        let params = ModelParams::new(rho).map_err(fail)?;
        let eq = equilibria(&params);
        put(zero, eq.zero, "zero")?;
        put(positive, eq.positive, "positive")
    })
}

/// Lipschitz constant of the right-hand side on the ball of radius `m`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gg_lipschitz_bound(m: f64, rho: f64, out: *mut f64) -> GgStatus {
    guard(|| {
        let params = ModelParams::new(rho).map_err(fail)?;
        put(out, lipschitz_bound(m, &params).map_err(fail)?, "out")
    })
}

/// Stability threshold `rho_j`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gg_rho_crit(j: usize, out: *mut f64) -> GgStatus {
    guard(|| put(out, rho_crit(j).map_err(fail)?, "out"))
}

/// Point of the curve `C_j^-` at parameter `nu`.
///
/// # Safety
/// `alpha` and `beta` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gg_c_curve(j: usize, nu: f64, alpha: *mut f64, beta: *mut f64) -> GgStatus {
    guard(|| {
        let (a, b) = c_curve(j, nu).map_err(fail)?;
        put(alpha, a, "alpha")?;
        put(beta, b, "beta")
    })
}

/// Number of characteristic roots with positive real part at the zero
/// equilibrium.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gg_unstable_count_at_zero(rho: f64, out: *mut usize) -> GgStatus {
    guard(|| {
        let params = ModelParams::new(rho).map_err(fail)?;
        put(out, unstable_count_at_zero(&params).map_err(fail)?, "out")
    })
}

fn run_integration(rho: f64, history: gogrow::Result<HistoryFunction>, steps: usize, t_end: f64) -> Result<Trajectory, GgStatus> {
    let params = ModelParams::new(rho).map_err(fail)?;
    let config = IntegratorConfig::new(steps, t_end).map_err(fail)?;
    let history = history.map_err(fail)?;
    Ok(integrate(&params, &history, &config).map_err(fail)?.0)
}

/// Integrates from `scale (cos(a s^b) + 1)` with `steps` steps per delay.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gg_integrate_cosine(
    rho: f64,
    scale: f64,
    a: f64,
    b: f64,
    steps: usize,
    t_end: f64,
    out: *mut *mut GgTrajectory,
) -> GgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let history = PhiSpec::cosine(scale, a, b).and_then(|p| p.to_history(steps));
        let traj = run_integration(rho, history, steps, t_end)?;
        put(out, Box::into_raw(Box::new(GgTrajectory(traj))), "out")
    })
}

/// Integrates from history samples on the uniform grid of `[-1, 0]`;
/// `count - 1` is the number of steps per delay.
///
/// # Safety
/// `samples` must point to `count` readable doubles; `out` must be valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn gg_integrate_samples(
    rho: f64,
    samples: *const f64,
    count: usize,
    t_end: f64,
    out: *mut *mut GgTrajectory,
) -> GgStatus {
    guard(|| {
        if samples.is_null() {
            return Err(null("samples"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        if count < 2 {
            return Err(fail(Error::InvalidInput("need at least two samples".into())));
        }
        let data = std::slice::from_raw_parts(samples, count).to_vec();
        let traj = run_integration(rho, HistoryFunction::new(data), count - 1, t_end)?;
        put(out, Box::into_raw(Box::new(GgTrajectory(traj))), "out")
    })
}

/// Number of nodes `t_k = k h`, `k = 0, 1, ...`.
///
/// # Safety
/// `traj` must come from an integrate call and not yet be freed.
#[no_mangle]
pub unsafe extern "C" fn gg_trajectory_len(traj: *const GgTrajectory, out: *mut usize) -> GgStatus {
    guard(|| {
        let t = traj.as_ref().ok_or_else(|| null("traj"))?;
        put(out, t.0.len(), "out")
    })
}

/// Step size `h`.
///
/// # Safety
/// As for [`gg_trajectory_len`].
#[no_mangle]
pub unsafe extern "C" fn gg_trajectory_step(traj: *const GgTrajectory, out: *mut f64) -> GgStatus {
    guard(|| {
        let t = traj.as_ref().ok_or_else(|| null("traj"))?;
        put(out, t.0.step(), "out")
    })
}

/// Copies up to `capacity` node values into `buf` and stores the number
/// copied in `written`.
///
/// # Safety
/// `buf` must be writable for `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn gg_trajectory_values(
    traj: *const GgTrajectory,
    buf: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> GgStatus {
    guard(|| {
        let t = traj.as_ref().ok_or_else(|| null("traj"))?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let n = capacity.min(t.0.len());
        ptr::copy_nonoverlapping(t.0.values().as_ptr(), buf, n);
        put(written, n, "written")
    })
}

/// Dense-output value `x(t)` for `t` in `[-1, t_end]`.
///
/// # Safety
/// As for [`gg_trajectory_len`].
#[no_mangle]
pub unsafe extern "C" fn gg_trajectory_eval(traj: *const GgTrajectory, t: f64, out: *mut f64) -> GgStatus {
    guard(|| {
        let tr = traj.as_ref().ok_or_else(|| null("traj"))?;
        if !(t >= -1.0 && t <= tr.0.t_end()) {
            return Err(fail(Error::InvalidInput(format!("t = {t} outside [-1, {}]", tr.0.t_end()))));
        }
        put(out, tr.0.eval(t), "out")
    })
}

/// Releases a trajectory; null is ignored.
///
/// # Safety
/// `traj` must be null or come from an integrate call, and is invalid
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn gg_trajectory_free(traj: *mut GgTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}

/// Characteristic roots inside `[re_min, re_max] x [im_min, im_max]`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gg_find_roots(
    equilibrium: GgEquilibrium,
    rho: f64,
    re_min: f64,
    re_max: f64,
    im_min: f64,
    im_max: f64,
    max_roots: usize,
    out: *mut *mut GgRootSet,
) -> GgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let params = ModelParams::new(rho).map_err(fail)?;
        let rect = Rect::new(re_min, re_max, im_min, im_max).map_err(fail)?;
        let roots = find_roots(equilibrium.into(), &params, &rect, max_roots).map_err(fail)?;
        put(out, Box::into_raw(Box::new(GgRootSet(roots))), "out")
    })
}

/// # Safety
/// `set` must come from [`gg_find_roots`] and not yet be freed.
#[no_mangle]
pub unsafe extern "C" fn gg_root_set_len(set: *const GgRootSet, out: *mut usize) -> GgStatus {
    guard(|| {
        let s = set.as_ref().ok_or_else(|| null("set"))?;
        put(out, s.0.len(), "out")
    })
}

/// Root `index` of the set.
///
/// # Safety
/// As for [`gg_root_set_len`].
#[no_mangle]
pub unsafe extern "C" fn gg_root_set_get(set: *const GgRootSet, index: usize, out: *mut GgRoot) -> GgStatus {
    guard(|| {
        let s = set.as_ref().ok_or_else(|| null("set"))?;
        let r = s
            .0
            .get(index)
            .ok_or_else(|| fail(Error::InvalidInput(format!("index {index} out of range"))))?;
        put(out, GgRoot { re: r.lambda.re, im: r.lambda.im, residual: r.residual }, "out")
    })
}

/// # Safety
/// `set` must be null or come from [`gg_find_roots`], and is invalid
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn gg_root_set_free(set: *mut GgRootSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Default lattice parameters.
#[no_mangle]
pub extern "C" fn gg_lattice_default() -> GgLatticeParams {
    let d = LatticeParams::default();
    GgLatticeParams {
        n_dims: d.n_dims,
        side: d.side,
        spacing: d.spacing,
        seeding: d.seeding,
        switch_rate: d.switch_rate,
        cycle_delay: d.cycle_delay,
        motility_rate: d.motility_rate,
    }
}

/// One lattice simulation from `t = 0` to `t_end`, recorded every
/// `record_dt`, using random stream `stream` of `seed`.
///
/// # Safety
/// `params` must be readable; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gg_abm_run(
    params: *const GgLatticeParams,
    seed: u64,
    stream: u64,
    t_end: f64,
    record_dt: f64,
    out: *mut *mut GgDensitySeries,
) -> GgStatus {
    guard(|| {
        let p = params.as_ref().ok_or_else(|| null("params"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let lp = LatticeParams {
            n_dims: p.n_dims,
            side: p.side,
            spacing: p.spacing,
            seeding: p.seeding,
            switch_rate: p.switch_rate,
            cycle_delay: p.cycle_delay,
            motility_rate: p.motility_rate,
        };
        let series = AbmState::init(lp, seed, stream).and_then(|mut s| s.run(t_end, record_dt)).map_err(fail)?;
        put(out, Box::into_raw(Box::new(GgDensitySeries(series))), "out")
    })
}

/// # Safety
/// `series` must come from [`gg_abm_run`] and not yet be freed.
#[no_mangle]
pub unsafe extern "C" fn gg_density_series_len(series: *const GgDensitySeries, out: *mut usize) -> GgStatus {
    guard(|| {
        let s = series.as_ref().ok_or_else(|| null("series"))?;
        put(out, s.0.times.len(), "out")
    })
}

/// Time, motile and proliferative density at record `index`.
///
/// # Safety
/// As for [`gg_density_series_len`]; the output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn gg_density_series_get(
    series: *const GgDensitySeries,
    index: usize,
    t: *mut f64,
    m: *mut f64,
    p: *mut f64,
) -> GgStatus {
    guard(|| {
        let s = &series.as_ref().ok_or_else(|| null("series"))?.0;
        if index >= s.times.len() {
            return Err(fail(Error::InvalidInput(format!("index {index} out of range"))));
        }
        put(t, s.times[index], "t")?;
        put(m, s.m[index], "m")?;
        put(p, s.p[index], "p")
    })
}

/// # Safety
/// `series` must be null or come from [`gg_abm_run`], and is invalid
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn gg_density_series_free(series: *mut GgDensitySeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}
