//! Circular cross-section of radius a with slip length beta.
//!
//! Radial modes are J0(gamma r / a) with J0(gamma) = (beta / a) gamma J1(gamma)
//! and lambda = (gamma / a)^2. Using J1(gamma) / gamma for the mode integral,
//! the flux weight reduces to Q_j = 4 pi a^4 / (gamma^4 (1 + (beta gamma / a)^2)).

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{ensure, Error, Result};
use crate::modesum::{FluxSeries, Mode, TransientCurve};
use crate::rootkit::{bessel_j, bessel_j0_zeros, bessel_j_complex, solve_bracketed, Tol};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialMode {
    pub gamma: f64,
    pub lambda: f64,
    /// (int phi)^2 / int phi^2; these sum to the area.
    pub area_weight: f64,
    /// Q_j = area_weight / lambda.
    pub weight: f64,
}

fn check_params(a: f64, beta: f64) -> Result<()> {
    ensure(a.is_finite() && a > 0.0, || format!("radius must be positive, got {a}"))?;
    ensure(beta.is_finite() && beta >= 0.0, || format!("slip length must be non-negative, got {beta}"))
}

pub fn q_steady_disk(a: f64, beta: f64, dp: f64) -> Result<f64> {
    check_params(a, beta)?;
    Ok(PI * a.powi(3) * (a + 4.0 * beta) * dp / 8.0)
}

/// J0(g) - (beta / a) g J1(g); its positive zeros are the radial roots.
pub fn radial_root_function(gamma: f64, beta_over_a: f64) -> f64 {
    let j0 = bessel_j(0, gamma).unwrap_or(f64::NAN);
    let j1 = bessel_j(1, gamma).unwrap_or(f64::NAN);
    j0 - beta_over_a * gamma * j1
}

/// First `n` radial modes, ascending. The k-th root lies strictly between the
/// (k-1)-th and k-th zeros of J0.
pub fn disk_spectrum(a: f64, beta: f64, n: usize) -> Result<Vec<RadialMode>> {
    check_params(a, beta)?;
    ensure(n >= 1, || "need at least one mode".into())?;
    let zeros = bessel_j0_zeros(n)?;
    let k = beta / a;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let gamma = if beta == 0.0 {
            zeros[i]
        } else {
            let lo = if i == 0 { 0.0 } else { zeros[i - 1] };
            solve_bracketed(|g| radial_root_function(g, k), lo, zeros[i], Tol::default())?.x
        };
        let lambda = (gamma / a).powi(2);
        let area_weight = 4.0 * PI * a * a / (gamma * gamma * (1.0 + (k * gamma).powi(2)));
        out.push(RadialMode { gamma, lambda, area_weight, weight: area_weight / lambda });
    }
    Ok(out)
}

pub fn lambda1_disk(a: f64, beta: f64) -> Result<f64> {
    Ok(disk_spectrum(a, beta, 1)?[0].lambda)
}

pub fn disk_flux_series(a: f64, beta: f64, dp: f64, modes: usize) -> Result<FluxSeries> {
    let spec = disk_spectrum(a, beta, modes)?;
    FluxSeries::new(
        spec.iter().map(|m| Mode { lambda: m.lambda, weight: m.weight }).collect(),
        dp,
        Some(q_steady_disk(a, beta, dp)?),
    )
}

/// Relative mismatch |Q(0)| / Q_steady tolerated before the truncation is rejected.
pub const TRANSIENT_START_TOL: f64 = 1e-6;

/// Flux after a pressure gradient dp is switched on at t = 0.
pub fn q_transient_disk(a: f64, beta: f64, dp: f64, times: &[f64], modes: usize) -> Result<TransientCurve> {
    let series = disk_flux_series(a, beta, dp, modes)?;
    let (steady, _) = series.steady();
    let q0 = series.initial_residual().abs();
    if q0 > TRANSIENT_START_TOL * steady.abs() {
        return Err(Error::InsufficientModes { error: q0, limit: TRANSIENT_START_TOL * steady.abs() });
    }
    Ok(series.q_transient_curve(times))
}

/// Complex flux amplitude for the gradient exp(i omega t), by the Bessel closed form.
pub fn q_periodic_disk(a: f64, beta: f64, omega: f64) -> Result<Complex64> {
    check_params(a, beta)?;
    ensure(omega.is_finite() && omega >= 0.0, || format!("frequency must be non-negative, got {omega}"))?;
    if omega == 0.0 {
        return Ok(Complex64::new(q_steady_disk(a, beta, 1.0)?, 0.0));
    }
    // sigma^2 = -i omega
    let sigma = Complex64::new(1.0, -1.0) * (0.5 * omega).sqrt();
    let s = sigma * a;
    let j0 = bessel_j_complex(0, s)?;
    let j1 = bessel_j_complex(1, s)?;
    let num = 2.0 * j1 - s * j0 + s * s * (beta / a) * j1;
    let den = sigma.powu(3) * (j0 - beta * sigma * j1);
    Ok(PI * a * num / den)
}

/// Partial sums of sum (int |z|^2 phi_j)(int phi_j) / int phi_j^2, which
/// tend to the polar moment pi a^4 / 2 if the radial modes are complete for r^2.
pub fn polar_moment_mode_sum(a: f64, beta: f64, modes: usize) -> Result<f64> {
    let spec = disk_spectrum(a, beta, modes)?;
    let mut total = 0.0;
    for m in &spec {
        let g = m.gamma;
        let j1 = bessel_j(1, g)?;
        let j2 = bessel_j(2, g)?;
        let int_phi = 2.0 * PI * a * a * j1 / g;
        let int_r2_phi = 2.0 * PI * a.powi(4) * (j1 / g - 2.0 * j2 / (g * g));
        let j0 = bessel_j(0, g)?;
        let norm = PI * a * a * (j0 * j0 + j1 * j1);
        total += int_r2_phi * int_phi / norm;
    }
    Ok(total)
}
