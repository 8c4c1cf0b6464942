//! Characteristic equations of the linearisations at both equilibria.
//!
//! * at zero: `lambda + rho - 2 rho e^{-lambda}`
//! * at `x* = 1/(rho+1)`: `P(lambda) + Q(lambda) e^{-lambda}` with
//!   `P = lambda^2 + rho (1 + 1/(rho+1)) lambda + rho^2/(rho+1)` and
//!   `Q = -rho^2/(rho+1) - rho lambda`, which factors as
//!   `(lambda + rho/(rho+1)) (lambda + rho - rho e^{-lambda})`.
//!
//! The quasi-polynomial form at `x*` carries a spurious zero at `lambda = 0`
//! introduced by clearing the denominator of the distributed-delay term.
//! Root searches at `x*` therefore use the undivided form
//! [`char_star_integral`], which is nonzero at the origin.

mod chart;
pub(crate) mod compensated;
mod contour;

use std::fmt;
use std::io::{self, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use chart::{c_curve, rho_crit, StabilityChart};
pub use contour::{newton, winding, Analytic, Rect, MIN_CELL, RESIDUAL_TOL};

use crate::error::{Error, Result};
use compensated::{Cdd, Dd};
use crate::model::ModelParams;

/// Tolerance below which a root's imaginary part is treated as zero.
const REAL_SNAP: f64 = 1e-9;
/// Bottom edge used when searching the upper half plane with mirroring.
const MIRROR_PAD: f64 = 1e-3;
/// Threshold ties closer than this are rejected by [`unstable_count_at_zero`].
pub const THRESHOLD_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquilibriumTag {
    /// `lambda + rho - 2 rho e^{-lambda}`.
    AtZero,
    /// The linearisation at the positive equilibrium.
    AtStar,
    /// The second factor `lambda + rho - rho e^{-lambda}`.
    Reduced,
}

impl fmt::Display for EquilibriumTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::AtZero => "at_zero",
            Self::AtStar => "at_star",
            Self::Reduced => "reduced",
        })
    }
}

impl std::str::FromStr for EquilibriumTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "at_zero" | "zero" => Ok(Self::AtZero),
            "at_star" | "star" => Ok(Self::AtStar),
            "reduced" => Ok(Self::Reduced),
            other => Err(Error::InvalidInput(format!("unknown equilibrium tag {other:?}"))),
        }
    }
}

#[inline]
fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn char_zero(lambda: Complex64, params: &ModelParams) -> Complex64 {
    let rho = params.rho();
    lambda + rho - 2.0 * rho * (-lambda).exp()
}

pub fn char_zero_deriv(lambda: Complex64, params: &ModelParams) -> Complex64 {
    1.0 + 2.0 * params.rho() * (-lambda).exp()
}

/// `P(lambda) + Q(lambda) e^{-lambda}`, evaluated in double-double so the
/// result is correctly rounded for the computed `e^{-lambda}` even when the
/// two terms cancel to many digits.
pub fn char_star(lambda: Complex64, params: &ModelParams) -> Complex64 {
    let rho = Dd::from(params.rho());
    let a = rho.add(Dd::from(1.0)).recip_mul(params.rho());
    let k = rho.mul(a);
    let z = Cdd::from(lambda);
    let e = Cdd::from((-lambda).exp());
    let p = z.mul(z).add(z.scale(rho.add(a))).add(Cdd::real(k));
    let q = Cdd::real(k).add(z.scale(rho)).neg();
    p.add(q.mul(e)).to_c64()
}

pub fn char_star_deriv(lambda: Complex64, params: &ModelParams) -> Complex64 {
    let rho = params.rho();
    let k = rho * rho / (rho + 1.0);
    let dp = 2.0 * lambda + rho * (1.0 + 1.0 / (rho + 1.0));
    let q = -k - rho * lambda;
    dp + (c(-rho) - q) * (-lambda).exp()
}

pub fn char_reduced(lambda: Complex64, params: &ModelParams) -> Complex64 {
    let rho = params.rho();
    lambda + rho - rho * (-lambda).exp()
}

pub fn char_reduced_deriv(lambda: Complex64, params: &ModelParams) -> Complex64 {
    1.0 + params.rho() * (-lambda).exp()
}

/// `(1 - e^{-z}) / z` and its derivative, with the removable singularity
/// filled in.
fn window_kernel(z: Complex64) -> (Complex64, Complex64) {
    if z.norm() < 0.5 {
        // sum_k (-z)^k / (k+1)!
        let mut value = c(0.0);
        let mut deriv = c(0.0);
        let mut power = c(1.0); // (-z)^k
        let mut fact = 1.0; // (k+1)!
        for k in 0..24 {
            fact *= (k + 1) as f64;
            value += power / fact;
            if k + 1 < 24 {
                // d/dz (-z)^{k+1} / (k+2)! = -(k+1) (-z)^k / (k+2)!
                deriv -= power * ((k + 1) as f64) / (fact * (k + 2) as f64);
            }
            power *= -z;
        }
        (value, deriv)
    } else {
        let e = (-z).exp();
        ((1.0 - e) / z, ((1.0 + z) * e - 1.0) / (z * z))
    }
}

/// Characteristic function of the linear variational equation at `x*`, in
/// the form `RHS(lambda) - lambda` before multiplying through by `lambda`:
///
/// `-rho (1 + 1/(rho+1)) - rho^2/(rho+1) (1 - e^{-lambda})/lambda + rho e^{-lambda} - lambda`.
///
/// Equals `-char_star(lambda) / lambda` away from the origin and `-rho` at it.
pub fn char_star_integral(lambda: Complex64, params: &ModelParams) -> Complex64 {
    let rho = params.rho();
    let (kernel, _) = window_kernel(lambda);
    -rho * (1.0 + 1.0 / (rho + 1.0)) - rho * rho / (rho + 1.0) * kernel + rho * (-lambda).exp()
        - lambda
}

pub fn char_star_integral_deriv(lambda: Complex64, params: &ModelParams) -> Complex64 {
    let rho = params.rho();
    let (_, dkernel) = window_kernel(lambda);
    -rho * rho / (rho + 1.0) * dkernel - rho * (-lambda).exp() - 1.0
}

/// The function whose zeros are searched for a given equilibrium.
#[derive(Debug, Clone, Copy)]
pub struct CharFunction {
    pub tag: EquilibriumTag,
    pub params: ModelParams,
}

impl Analytic for CharFunction {
    fn value(&self, z: Complex64) -> Complex64 {
        match self.tag {
            EquilibriumTag::AtZero => char_zero(z, &self.params),
            EquilibriumTag::AtStar => char_star_integral(z, &self.params),
            EquilibriumTag::Reduced => char_reduced(z, &self.params),
        }
    }

    fn deriv(&self, z: Complex64) -> Complex64 {
        match self.tag {
            EquilibriumTag::AtZero => char_zero_deriv(z, &self.params),
            EquilibriumTag::AtStar => char_star_integral_deriv(z, &self.params),
            EquilibriumTag::Reduced => char_reduced_deriv(z, &self.params),
        }
    }
}

/// A refined characteristic root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharRoot {
    pub lambda: Complex64,
    /// `|char(lambda)|` of the searched function.
    pub residual: f64,
    pub equilibrium: EquilibriumTag,
}

/// Search region `[-5, 3] x [0, 2 K pi + pi] i` for the leading `pairs` pairs.
pub fn default_rect(pairs: usize) -> Rect {
    Rect {
        re_min: -5.0,
        re_max: 3.0,
        im_min: 0.0,
        im_max: 2.0 * pairs as f64 * std::f64::consts::PI + std::f64::consts::PI,
    }
}

/// All characteristic roots in `rect`, sorted by descending real part and
/// truncated to `max_roots`.
///
/// A rectangle whose bottom edge is the real axis is treated as the upper
/// half of a conjugate-symmetric search: real roots on the axis are found and
/// every complex root is returned together with its conjugate. Rectangles
/// touching or straddling the axis are searched in the upper half plane and
/// mirrored, so results are always closed under conjugation within `rect`.
pub fn find_roots(
    tag: EquilibriumTag,
    params: &ModelParams,
    rect: &Rect,
    max_roots: usize,
) -> Result<Vec<CharRoot>> {
    let f = CharFunction { tag, params: *params };
    let mut roots: Vec<Complex64> = Vec::new();

    if rect.im_min <= 0.0 && rect.im_max >= 0.0 {
        let top = rect.im_max.max(-rect.im_min);
        let search = Rect::new(rect.re_min, rect.re_max, -MIRROR_PAD, top)?;
        let mirror_all = rect.im_min == 0.0;
        for z in contour::zeros_in(&f, &search)? {
            if z.im.abs() <= REAL_SNAP {
                roots.push(snap_real(&f, z));
            } else if z.im > 0.0 {
                if z.im <= rect.im_max {
                    roots.push(z);
                }
                if mirror_all || -z.im >= rect.im_min {
                    roots.push(z.conj());
                }
            }
        }
    } else if rect.im_max < 0.0 {
        let upper = Rect::new(rect.re_min, rect.re_max, -rect.im_max, -rect.im_min)?;
        roots.extend(contour::zeros_in(&f, &upper)?.into_iter().map(|z| z.conj()));
    } else {
        roots.extend(contour::zeros_in(&f, rect)?);
    }

    let mut out: Vec<CharRoot> = roots
        .into_iter()
        .map(|z| CharRoot { lambda: z, residual: f.value(z).norm(), equilibrium: tag })
        .collect();
    out.sort_by(|a, b| {
        b.lambda
            .re
            .total_cmp(&a.lambda.re)
            .then(b.lambda.im.total_cmp(&a.lambda.im))
    });
    out.truncate(max_roots);
    Ok(out)
}

fn snap_real(f: &CharFunction, z: Complex64) -> Complex64 {
    let real = Complex64::new(z.re, 0.0);
    match newton(f, real) {
        Some(r) if (r.re - z.re).abs() < 1e-6 => Complex64::new(r.re, 0.0),
        _ => real,
    }
}

/// Number of zeros of the searched function inside `rect`.
pub fn count_roots(tag: EquilibriumTag, params: &ModelParams, rect: &Rect) -> Result<usize> {
    let f = CharFunction { tag, params: *params };
    Ok(contour::winding_perturbed(&f, rect)?.1)
}

/// The positive real root of `lambda + rho = 2 rho e^{-lambda}`.
///
/// The function is increasing and concave on the real line and negative at
/// zero, so Newton from zero increases monotonically to the root.
pub fn leading_real_root_at_zero(params: &ModelParams) -> f64 {
    let rho = params.rho();
    let g = |x: f64| x + rho - 2.0 * rho * (-x).exp();
    let dg = |x: f64| 1.0 + 2.0 * rho * (-x).exp();
    let mut x = 0.0;
    for _ in 0..100 {
        let step = g(x) / dg(x);
        x -= step;
        if step.abs() < 1e-16 * (1.0 + x.abs()) {
            break;
        }
    }
    x
}

/// Leading complex pair at `x*` (the one with positive imaginary part).
pub fn leading_pair_at_star(params: &ModelParams) -> Result<Complex64> {
    let roots = find_roots(EquilibriumTag::AtStar, params, &default_rect(3), usize::MAX)?;
    roots
        .iter()
        .map(|r| r.lambda)
        .find(|z| z.im > REAL_SNAP)
        .ok_or_else(|| Error::SubdivisionFailure("no complex root in the default rectangle".into()))
}

/// `1 + 2k`, where `k` counts the thresholds `rho_j` below `rho`.
pub fn unstable_count_at_zero(params: &ModelParams) -> Result<usize> {
    let rho = params.rho();
    let mut k = 0;
    for j in 1.. {
        let threshold = rho_crit(j)?;
        if (rho - threshold).abs() < THRESHOLD_TOL {
            return Err(Error::DegenerateParameter { rho, j, tol: THRESHOLD_TOL });
        }
        if threshold > rho {
            break;
        }
        k = j;
    }
    Ok(1 + 2 * k)
}

/// Winding count of zeros of `char_zero` with positive real part. Such zeros
/// satisfy `|lambda| <= 3 rho`, so a box of that size holds all of them.
pub fn unstable_count_by_winding(params: &ModelParams) -> Result<usize> {
    let r = 3.0 * params.rho() + 2.0;
    count_roots(EquilibriumTag::AtZero, params, &Rect::new(0.0, r, -r, r)?)
}

/// Root sets at `x*` over an increasing sequence of `rho`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralScan {
    pub rows: Vec<ScanRow>,
    /// For each row, the distance of the j-th pair (ascending imaginary part)
    /// to `2 j pi i`.
    pub pair_distances: Vec<Vec<f64>>,
    /// Whether each pair's distance is non-increasing along the scan.
    pub monotone: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub rho: f64,
    pub roots: Vec<CharRoot>,
}

/// Slack allowed when checking that pair distances do not grow along a scan.
pub const SCAN_SLACK: f64 = 1e-6;

pub fn spectral_limit_scan(rho_list: &[f64], rect: &Rect) -> Result<SpectralScan> {
    if rho_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("rho list must be strictly ascending".into()));
    }
    let mut rows = Vec::with_capacity(rho_list.len());
    let mut pair_distances = Vec::with_capacity(rho_list.len());
    for &rho in rho_list {
        let params = ModelParams::new(rho)?;
        let roots = find_roots(EquilibriumTag::AtStar, &params, rect, usize::MAX)?;
        let mut upper: Vec<Complex64> =
            roots.iter().map(|r| r.lambda).filter(|z| z.im > REAL_SNAP).collect();
        upper.sort_by(|a, b| a.im.total_cmp(&b.im));
        let dist: Vec<f64> = upper
            .iter()
            .enumerate()
            .map(|(j, z)| (z - Complex64::new(0.0, std::f64::consts::TAU * (j + 1) as f64)).norm())
            .collect();
        pair_distances.push(dist);
        rows.push(ScanRow { rho, roots });
    }
    let monotone = pair_distances.windows(2).all(|w| {
        w[0].iter().zip(&w[1]).all(|(before, after)| *after <= *before + SCAN_SLACK)
    });
    Ok(SpectralScan { rows, pair_distances, monotone })
}

#[derive(Serialize)]
struct RootJson {
    re: f64,
    im: f64,
    residual: f64,
}

#[derive(Serialize)]
struct RootSetJson<'a> {
    rho: f64,
    equilibrium: &'a str,
    roots: Vec<RootJson>,
}

/// `{"rho": r, "equilibrium": tag, "roots": [{"re", "im", "residual"}]}`.
pub fn roots_to_json(rho: f64, tag: EquilibriumTag, roots: &[CharRoot]) -> serde_json::Value {
    let tag = tag.to_string();
    let doc = RootSetJson {
        rho,
        equilibrium: &tag,
        roots: roots
            .iter()
            .map(|r| RootJson { re: r.lambda.re, im: r.lambda.im, residual: r.residual })
            .collect(),
    };
    serde_json::to_value(doc).expect("root set serializes")
}

pub fn write_roots_csv<W: Write>(roots: &[CharRoot], mut out: W) -> io::Result<()> {
    writeln!(out, "re,im,residual")?;
    for r in roots {
        writeln!(out, "{:.16e},{:.16e},{:.16e}", r.lambda.re, r.lambda.im, r.residual)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn factorization_identity(
            re in -10.0f64..10.0,
            im in -10.0f64..10.0,
            rho in prop::sample::select(vec![0.1, 1.0, 3.0, 10.0, 50.0, 100.0, 200.0]),
        ) {
            let params = ModelParams::new(rho).unwrap();
            let z = Complex64::new(re, im);
            let lhs = char_star(z, &params);
            let rhs = factored_oracle(z, rho);
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + z.norm_sqr()));
        }
    }

    fn p(rho: f64) -> ModelParams {
        ModelParams::new(rho).unwrap()
    }

    /// `(lambda + rho/(rho+1)) (lambda + rho - rho e^{-lambda})` in double-double.
    fn factored_oracle(z: Complex64, rho: f64) -> Complex64 {
        let r = Dd::from(rho);
        let a = r.add(Dd::from(1.0)).recip_mul(rho);
        let zz = Cdd::from(z);
        let e = Cdd::from((-z).exp());
        let left = zz.add(Cdd::real(a));
        let right = zz.add(Cdd::real(r)).add(e.scale(r).neg());
        left.mul(right).to_c64()
    }

    /// Bisection on the real line, independent of the Newton path.
    fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
        assert!(f(a) * f(b) < 0.0);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if f(a) * f(m) <= 0.0 {
                b = m;
            } else {
                a = m;
            }
        }
        0.5 * (a + b)
    }

    fn zero_oracle(rho: f64) -> f64 {
        bisect(|x| x + rho - 2.0 * rho * (-x).exp(), 0.0, rho)
    }

    #[test]
    fn leading_root_at_zero_matches_bisection() {
        for rho in [0.1, 1.0, 5.0, 20.0, 50.0, 100.0] {
            let newton = leading_real_root_at_zero(&p(rho));
            assert!((newton - zero_oracle(rho)).abs() < 1e-12, "rho={rho}");
        }
        let l1 = zero_oracle(1.0);
        assert!((0.35..0.40).contains(&l1));
        assert!((l1 - 0.3748).abs() < 1e-4);
        assert!((zero_oracle(20.0) - 0.66).abs() < 0.01);
    }

    #[test]
    fn char_zero_sign_change_on_zero_rho() {
        for rho in [0.01, 0.5, 3.0, 70.0] {
            assert!(char_zero(c(0.0), &p(rho)).re < 0.0);
            assert!(char_zero(c(rho), &p(rho)).re > 0.0);
        }
    }

    #[test]
    fn char_star_examples() {
        for rho in [0.5, 1.0, 20.0] {
            let params = p(rho);
            assert!(char_star(c(-rho / (rho + 1.0)), &params).norm() < 1e-14);
            assert!((char_star_integral(c(0.0), &params) - c(-rho)).norm() < 1e-14);
        }
    }

    #[test]
    fn integral_form_relates_to_quasi_polynomial() {
        let params = p(7.0);
        for z in [Complex64::new(0.3, 0.1), Complex64::new(-2.0, 5.0), Complex64::new(1e-3, -2e-3)] {
            let lhs = char_star_integral(z, &params) * z;
            assert!((lhs + char_star(z, &params)).norm() < 1e-11 * (1.0 + z.norm_sqr()));
        }
        // derivative by central differences
        for z in [Complex64::new(0.2, 0.3), Complex64::new(-1.0, 4.0), Complex64::new(0.6, 0.0)] {
            let h = 1e-6;
            let fd = (char_star_integral(z + h, &params) - char_star_integral(z - h, &params)) / (2.0 * h);
            assert!((fd - char_star_integral_deriv(z, &params)).norm() < 1e-6);
        }
    }

    #[test]
    fn roots_at_zero_rho_one() {
        let rect = Rect::new(-1.0, 2.0, -1.0, 1.0).unwrap();
        let roots = find_roots(EquilibriumTag::AtZero, &p(1.0), &rect, 10).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].lambda.im, 0.0);
        assert!((roots[0].lambda.re - zero_oracle(1.0)).abs() < 1e-12);
        assert!(roots[0].residual < 1e-10);
    }

    #[test]
    fn roots_at_star_rho_twenty() {
        let rect = Rect::new(-1.0, 1.0, 0.0, 10.0).unwrap();
        let roots = find_roots(EquilibriumTag::AtStar, &p(20.0), &rect, 10).unwrap();
        let pair: Vec<_> = roots.iter().filter(|r| r.lambda.im.abs() > 1e-9).collect();
        assert_eq!(pair.len(), 2);
        let z = pair.iter().find(|r| r.lambda.im > 0.0).unwrap().lambda;
        assert!((z.re + 0.04).abs() < 0.01, "{z}");
        assert!((z.im - 6.0).abs() < 0.1, "{z}");
        // the real root -rho/(rho+1) is inside too; the origin is not a root
        assert!(roots.iter().any(|r| (r.lambda.re + 20.0 / 21.0).abs() < 1e-12 && r.lambda.im == 0.0));
        assert!(roots.iter().all(|r| r.lambda.norm() > 1e-6));
    }

    #[test]
    fn reduced_has_origin_and_stable_rest() {
        for rho in [0.7, 4.0, 30.0] {
            let roots = find_roots(EquilibriumTag::Reduced, &p(rho), &default_rect(4), 100).unwrap();
            assert!(roots[0].lambda.norm() < 1e-12, "rho={rho}: {:?}", roots[0]);
            assert!(roots[1..].iter().all(|r| r.lambda.re < 0.0));
            assert!(roots.len() >= 9);
        }
    }

    #[test]
    fn at_star_spectrum_stable_and_symmetric() {
        for rho in [1.0, 10.0, 100.0] {
            let params = p(rho);
            let roots = find_roots(EquilibriumTag::AtStar, &params, &default_rect(3), 100).unwrap();
            assert!(roots.iter().all(|r| r.lambda.re < 0.0));
            assert!(roots.iter().all(|r| r.residual < RESIDUAL_TOL));
            for r in &roots {
                assert!(roots.iter().any(|s| (s.lambda - r.lambda.conj()).norm() < 1e-12));
            }
            for w in roots.windows(2) {
                assert!(w[0].lambda.re >= w[1].lambda.re);
            }
        }
    }

    #[test]
    fn unstable_counts() {
        assert_eq!(unstable_count_at_zero(&p(1.0)).unwrap(), 1);
        assert_eq!(unstable_count_at_zero(&p(5.0)).unwrap(), 3);
        assert_eq!(unstable_count_at_zero(&p(7.0)).unwrap(), 5);
        for rho in [1.0, 5.0, 7.0] {
            assert_eq!(
                unstable_count_by_winding(&p(rho)).unwrap(),
                unstable_count_at_zero(&p(rho)).unwrap()
            );
        }
        let tie = p(rho_crit(1).unwrap());
        assert!(matches!(unstable_count_at_zero(&tie), Err(Error::DegenerateParameter { .. })));
    }

    #[test]
    fn thresholds_straddle() {
        for j in 1..=3 {
            let rc = rho_crit(j).unwrap();
            let below = unstable_count_by_winding(&p(rc - 0.05)).unwrap();
            let above = unstable_count_by_winding(&p(rc + 0.05)).unwrap();
            assert_eq!(above, below + 2, "j={j}");
        }
    }

    #[test]
    fn limit_scan_approaches_axis() {
        let scan = spectral_limit_scan(&[1.0, 10.0, 100.0], &default_rect(3)).unwrap();
        assert!(scan.monotone, "{:?}", scan.pair_distances);
        let last = &scan.pair_distances[2];
        assert!(last.len() >= 3);
        assert!(last[..3].iter().all(|d| *d < 0.35), "{last:?}");
        // the isolated real root -rho/(rho+1) tends to -1
        let real: Vec<f64> = scan.rows.iter()
            .map(|r| r.roots.iter().find(|z| z.lambda.im == 0.0).unwrap().lambda.re)
            .collect();
        assert!(real.windows(2).all(|w| w[1] < w[0]));
        assert!((real[2] + 100.0 / 101.0).abs() < 1e-12);
        assert!(spectral_limit_scan(&[10.0, 1.0], &default_rect(3)).is_err());
    }

    #[test]
    fn json_layout() {
        let roots = find_roots(EquilibriumTag::AtZero, &p(1.0), &Rect::new(-1.0, 2.0, -1.0, 1.0).unwrap(), 5)
            .unwrap();
        let v = roots_to_json(1.0, EquilibriumTag::AtZero, &roots);
        assert_eq!(v["equilibrium"], "at_zero");
        assert_eq!(v["rho"], 1.0);
        assert_eq!(v["roots"].as_array().unwrap().len(), 1);
        assert!(v["roots"][0]["re"].as_f64().unwrap() > 0.37);
    }
}
