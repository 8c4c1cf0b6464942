//! Argument-principle root isolation in axis-aligned rectangles.

use std::f64::consts::{FRAC_PI_4, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cells smaller than this are handed to Newton even if they hold several roots.
pub const MIN_CELL: f64 = 1e-3;
/// Residual required of every refined root.
pub const RESIDUAL_TOL: f64 = 1e-10;

const NEWTON_MAX_ITER: usize = 50;
const NEWTON_STEP_TOL: f64 = 1e-13;
const MAX_EDGE_DEPTH: u32 = 48;
const PERTURB_ATTEMPTS: u32 = 8;

/// An analytic function together with its derivative.
pub trait Analytic: Sync {
    fn value(&self, z: Complex64) -> Complex64;
    fn deriv(&self, z: Complex64) -> Complex64;
}

impl<F, D> Analytic for (F, D)
where
    F: Fn(Complex64) -> Complex64 + Sync,
    D: Fn(Complex64) -> Complex64 + Sync,
{
    fn value(&self, z: Complex64) -> Complex64 {
        (self.0)(z)
    }
    fn deriv(&self, z: Complex64) -> Complex64 {
        (self.1)(z)
    }
}

/// Closed rectangle `[re_min, re_max] x [im_min, im_max]` in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Rect {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let ok = [re_min, re_max, im_min, im_max].iter().all(|v| v.is_finite())
            && re_min < re_max
            && im_min < im_max;
        if !ok {
            return Err(Error::InvalidInput(format!(
                "degenerate rectangle [{re_min}, {re_max}] x [{im_min}, {im_max}]"
            )));
        }
        Ok(Self { re_min, re_max, im_min, im_max })
    }

    pub fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    pub fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }

    pub fn contains(&self, z: Complex64, margin: f64) -> bool {
        z.re >= self.re_min - margin
            && z.re <= self.re_max + margin
            && z.im >= self.im_min - margin
            && z.im <= self.im_max + margin
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }

    fn grown(&self, d: f64) -> Self {
        Self {
            re_min: self.re_min - d,
            re_max: self.re_max + d,
            im_min: self.im_min - d,
            im_max: self.im_max + d,
        }
    }

    /// Splits at fraction `frac` along each side that is not much shorter
    /// than the other, giving two or four children.
    fn split(&self, frac: f64) -> Vec<Rect> {
        let (w, h) = (self.width(), self.height());
        let xs = if w >= 0.5 * h {
            let m = self.re_min + frac * w;
            vec![(self.re_min, m), (m, self.re_max)]
        } else {
            vec![(self.re_min, self.re_max)]
        };
        let ys = if h >= 0.5 * w {
            let m = self.im_min + (1.0 - frac) * h;
            vec![(self.im_min, m), (m, self.im_max)]
        } else {
            vec![(self.im_min, self.im_max)]
        };
        let mut out = Vec::with_capacity(4);
        for &(a, b) in &xs {
            for &(c, d) in &ys {
                out.push(Rect { re_min: a, re_max: b, im_min: c, im_max: d });
            }
        }
        out
    }
}

/// Accumulated change of `arg f` along the segment `a -> b`, refined until
/// every piece turns by less than a quarter of a half-turn and is consistent
/// with its midpoint.
fn arg_change<F: Analytic + ?Sized>(
    f: &F,
    a: Complex64,
    b: Complex64,
    fa: Complex64,
    fb: Complex64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let fm = f.value(m);
    let scale = 1e-14 * (1.0 + m.norm());
    if fm.norm() <= scale || !fm.is_finite() {
        return Err(Error::BoundaryTooClose { re: m.re, im: m.im });
    }
    let whole = (fb / fa).arg();
    let left = (fm / fa).arg();
    let right = (fb / fm).arg();
    if left.abs() < FRAC_PI_4 && right.abs() < FRAC_PI_4 && (left + right - whole).abs() < 1e-9 {
        return Ok(whole);
    }
    if depth >= MAX_EDGE_DEPTH {
        return Err(Error::BoundaryTooClose { re: m.re, im: m.im });
    }
    Ok(arg_change(f, a, m, fa, fm, depth + 1)? + arg_change(f, m, b, fm, fb, depth + 1)?)
}

/// Number of zeros inside `rect`, counted with multiplicity.
pub fn winding<F: Analytic + ?Sized>(f: &F, rect: &Rect) -> Result<usize> {
    let corners = rect.corners();
    let base = (rect.width().max(rect.height()) / 64.0).max(1e-6);
    let mut total = 0.0;
    for e in 0..4 {
        let (p, q) = (corners[e], corners[(e + 1) % 4]);
        let pieces = (((q - p).norm() / base).ceil() as usize).clamp(4, 4096);
        let mut z0 = p;
        let mut f0 = f.value(z0);
        if f0.norm() <= 1e-14 * (1.0 + z0.norm()) || !f0.is_finite() {
            return Err(Error::BoundaryTooClose { re: z0.re, im: z0.im });
        }
        for i in 1..=pieces {
            let z1 = p + (q - p) * (i as f64 / pieces as f64);
            let f1 = f.value(z1);
            if f1.norm() <= 1e-14 * (1.0 + z1.norm()) || !f1.is_finite() {
                return Err(Error::BoundaryTooClose { re: z1.re, im: z1.im });
            }
            total += arg_change(f, z0, z1, f0, f1, 0)?;
            z0 = z1;
            f0 = f1;
        }
    }
    let turns = total / TAU;
    let rounded = turns.round();
    if (turns - rounded).abs() > 0.05 || rounded < 0.0 {
        let c = rect.center();
        return Err(Error::BoundaryTooClose { re: c.re, im: c.im });
    }
    Ok(rounded as usize)
}

/// Winding count on `rect`, growing the rectangle slightly when the contour
/// runs too close to a zero. Returns the rectangle actually used.
pub fn winding_perturbed<F: Analytic + ?Sized>(f: &F, rect: &Rect) -> Result<(Rect, usize)> {
    let mut last = None;
    for attempt in 0..PERTURB_ATTEMPTS {
        let r = if attempt == 0 {
            *rect
        } else {
            rect.grown(1e-7 * rect.diameter() * 3f64.powi(attempt as i32))
        };
        match winding(f, &r) {
            Ok(n) => return Ok((r, n)),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::SubdivisionFailure("winding".into())))
}

/// Newton iteration from `z0`; `None` if it fails to converge to a point with
/// residual below [`RESIDUAL_TOL`].
pub fn newton<F: Analytic + ?Sized>(f: &F, z0: Complex64) -> Option<Complex64> {
    let mut z = z0;
    for _ in 0..NEWTON_MAX_ITER {
        let d = f.deriv(z);
        if d.norm() == 0.0 || !d.is_finite() {
            return None;
        }
        let step = f.value(z) / d;
        z -= step;
        if !z.is_finite() || z.norm() > 1e8 {
            return None;
        }
        if step.norm() < NEWTON_STEP_TOL * (1.0 + z.norm()) {
            break;
        }
    }
    (f.value(z).norm() < RESIDUAL_TOL).then_some(z)
}

/// Isolates and refines the `count` zeros inside `rect`.
pub fn isolate<F: Analytic + ?Sized>(
    f: &F,
    rect: &Rect,
    count: usize,
    out: &mut Vec<Complex64>,
) -> Result<()> {
    if count == 0 {
        return Ok(());
    }
    let margin = 1e-9 * (1.0 + rect.diameter());
    if count == 1 {
        if let Some(z) = newton(f, rect.center()) {
            if rect.contains(z, margin) {
                out.push(z);
                return Ok(());
            }
        }
    }
    if rect.diameter() < MIN_CELL {
        return cluster(f, rect, count, out);
    }
    for frac in [0.5123, 0.4789, 0.5371, 0.4417, 0.5613] {
        let children = rect.split(frac);
        let counts: Result<Vec<usize>> = children.iter().map(|c| winding(f, c)).collect();
        let Ok(counts) = counts else { continue };
        if counts.iter().sum::<usize>() != count {
            continue;
        }
        let mark = out.len();
        let mut ok = true;
        for (child, &n) in children.iter().zip(&counts) {
            if isolate(f, child, n, out).is_err() {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(());
        }
        out.truncate(mark);
    }
    Err(Error::SubdivisionFailure(format!(
        "could not separate {count} roots in [{}, {}] x [{}, {}]",
        rect.re_min, rect.re_max, rect.im_min, rect.im_max
    )))
}

/// Multistart Newton inside a tiny cell holding several roots.
fn cluster<F: Analytic + ?Sized>(
    f: &F,
    rect: &Rect,
    count: usize,
    out: &mut Vec<Complex64>,
) -> Result<()> {
    let mut found: Vec<Complex64> = Vec::new();
    let margin = 1e-9 * (1.0 + rect.diameter());
    let steps = 5;
    for i in 0..steps {
        for j in 0..steps {
            let z0 = Complex64::new(
                rect.re_min + rect.width() * (i as f64 + 0.5) / steps as f64,
                rect.im_min + rect.height() * (j as f64 + 0.5) / steps as f64,
            );
            if let Some(z) = newton(f, z0) {
                if rect.contains(z, margin) && found.iter().all(|w| (w - z).norm() > 1e-8) {
                    found.push(z);
                }
            }
        }
    }
    if found.len() == count {
        out.extend(found);
        Ok(())
    } else {
        Err(Error::SubdivisionFailure(format!(
            "cluster near {} holds {count} roots by winding but Newton found {}",
            rect.center(),
            found.len()
        )))
    }
}

/// All zeros in `rect`, after any boundary perturbation.
pub fn zeros_in<F: Analytic + ?Sized>(f: &F, rect: &Rect) -> Result<Vec<Complex64>> {
    let (r, count) = winding_perturbed(f, rect)?;
    let mut out = Vec::with_capacity(count);
    isolate(f, &r, count, &mut out)?;
    if out.len() != count {
        return Err(Error::SubdivisionFailure(format!(
            "winding count {count} but refined {} roots",
            out.len()
        )));
    }
    Ok(out)
}

/// Argument change of `f` around a circle, in turns.
#[cfg(test)]
pub(crate) fn turns_on_circle<F: Analytic + ?Sized>(f: &F, c: Complex64, r: f64, m: usize) -> f64 {
    let mut total = 0.0;
    let pt = |k: usize| c + Complex64::from_polar(r, TAU * k as f64 / m as f64);
    for k in 0..m {
        total += (f.value(pt(k + 1)) / f.value(pt(k))).arg();
    }
    total / TAU
}
