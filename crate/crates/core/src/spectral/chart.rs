//! Curves in the `(alpha, beta)` plane on which `z - alpha - beta e^{-z}`
//! has a purely imaginary root `z = i nu`, and the thresholds where the
//! zero-equilibrium line `(-rho, 2 rho)` crosses them.

use std::f64::consts::PI;
use std::io::{self, Write};

use serde::Serialize;

use crate::error::{invalid, Error, Result};

const ENDPOINT_TOL: f64 = 1e-12;

/// Threshold `rho_j = (2 j pi - pi/3) / sqrt 3`.
pub fn rho_crit(j: usize) -> Result<f64> {
    if j == 0 {
        return Err(invalid("threshold index must be at least 1"));
    }
    Ok((2.0 * j as f64 * PI - PI / 3.0) / 3f64.sqrt())
}

/// Point `(nu cos nu / sin nu, -nu / sin nu)` of the curve `C_j^-`.
pub fn c_curve(j: usize, nu: f64) -> Result<(f64, f64)> {
    if j == 0 || !nu.is_finite() {
        return Err(invalid(format!("bad curve arguments j = {j}, nu = {nu}")));
    }
    let lo = (2 * j - 1) as f64 * PI;
    let hi = 2.0 * j as f64 * PI;
    let tol = ENDPOINT_TOL * hi;
    if (nu - lo).abs() <= tol || (nu - hi).abs() <= tol {
        return Err(Error::Singularity(nu));
    }
    if nu < lo || nu > hi {
        return Err(invalid(format!("nu = {nu} outside ({lo}, {hi})")));
    }
    let (s, c) = nu.sin_cos();
    Ok((nu * c / s, -nu / s))
}

/// Sampled curve `C_j^-` together with its threshold `rho_j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityChart {
    pub j: usize,
    pub nu_samples: Vec<f64>,
    pub alpha_beta: Vec<(f64, f64)>,
    pub rho_crit: f64,
}

impl StabilityChart {
    /// `count` equally spaced interior samples of `((2j-1) pi, 2 j pi)`.
    pub fn sample(j: usize, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(invalid("sample count must be positive"));
        }
        let rho_crit = rho_crit(j)?;
        let lo = (2 * j - 1) as f64 * PI;
        let step = PI / (count + 1) as f64;
        let nu_samples: Vec<f64> = (1..=count).map(|i| lo + i as f64 * step).collect();
        let alpha_beta = nu_samples
            .iter()
            .map(|&nu| c_curve(j, nu))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { j, nu_samples, alpha_beta, rho_crit })
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "nu,alpha,beta")?;
        for (nu, (a, b)) in self.nu_samples.iter().zip(&self.alpha_beta) {
            writeln!(out, "{nu:.16e},{a:.16e},{b:.16e}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn thresholds() {
        assert!((rho_crit(1).unwrap() - 3.0230).abs() < 1e-4);
        assert!((rho_crit(2).unwrap() - 6.6505).abs() < 1e-4);
        assert!(rho_crit(0).is_err());
    }

    #[test]
    fn threshold_point_lies_on_zero_line() {
        let nu = 2.0 * PI - PI / 3.0;
        let (a, b) = c_curve(1, nu).unwrap();
        let r = rho_crit(1).unwrap();
        assert!((a + r).abs() < 1e-12);
        assert!((b - 2.0 * r).abs() < 1e-12);
    }

    #[test]
    fn midpoint_value() {
        let (a, b) = c_curve(1, 1.5 * PI).unwrap();
        assert!(a.abs() < 1e-12);
        assert!((b - 1.5 * PI).abs() < 1e-12);
    }

    #[test]
    fn endpoints_and_outside() {
        assert_eq!(c_curve(1, PI), Err(Error::Singularity(PI)));
        assert_eq!(c_curve(1, 2.0 * PI), Err(Error::Singularity(2.0 * PI)));
        assert!(matches!(c_curve(1, 0.5), Err(Error::InvalidInput(_))));
        assert!(matches!(c_curve(2, 1.5 * PI), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn points_give_imaginary_roots() {
        for j in 1..=4 {
            let chart = StabilityChart::sample(j, 200).unwrap();
            for (&nu, &(a, b)) in chart.nu_samples.iter().zip(&chart.alpha_beta) {
                let z = Complex64::new(0.0, nu);
                let r = z - a - b * (-z).exp();
                assert!(r.norm() < 1e-10 * (1.0 + a.abs() + b.abs()), "j={j} nu={nu} r={r}");
            }
        }
    }

    #[test]
    fn csv_layout() {
        let chart = StabilityChart::sample(1, 3).unwrap();
        let mut buf = Vec::new();
        chart.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s.lines().count(), 4);
        assert!(s.starts_with("nu,alpha,beta\n"));
    }
}
