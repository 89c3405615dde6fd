//! Near-circular ellipses x^2/a^2 + a^2 y^2 = 1 (area pi), treated as
//! perturbations of the unit disk in eps = (a^2 - a^-2) / (a^2 + a^-2).

use serde::Serialize;
use std::f64::consts::PI;

use crate::disk::disk_spectrum;
use crate::error::{ensure, Result};
use crate::geomfn::FourierBoundary;
use crate::rootkit::{bessel_j, bessel_j0_zeros};

/// Perturbative results are trusted for |eps| up to this value.
pub const EPS_REGIME: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpsParam {
    pub eps: f64,
    /// Eccentricity sqrt(1 - a^-4) for a >= 1.
    pub eccentricity: f64,
}

pub fn eps_param(a: f64) -> Result<EpsParam> {
    ensure(a.is_finite() && a > 0.0, || format!("semi-axis must be positive, got {a}"))?;
    let (p, q) = (a * a, 1.0 / (a * a));
    let big = a.max(1.0 / a);
    Ok(EpsParam { eps: (p - q) / (p + q), eccentricity: (1.0 - big.powi(-4)).sqrt() })
}

/// A perturbative value with its expansion parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Perturbative {
    pub value: f64,
    pub eps: f64,
    pub in_regime: bool,
}

fn wrap(value: f64, eps: f64, what: &str) -> Perturbative {
    let in_regime = eps.abs() <= EPS_REGIME;
    if !in_regime {
        log::warn!("{what}: |eps| = {:.3} beyond the perturbative regime {EPS_REGIME}", eps.abs());
    }
    Perturbative { value, eps, in_regime }
}

/// Exact no-slip flux pi / (4 (a^2 + a^-2)).
pub fn q_steady_ellipse_exact_b0(a: f64) -> Result<f64> {
    ensure(a.is_finite() && a > 0.0, || format!("semi-axis must be positive, got {a}"))?;
    Ok(PI / (4.0 * (a * a + 1.0 / (a * a))))
}

/// Velocity coefficients of u = (1 - r^2)/4 + beta/2 + eps^2 t02
///   + eps t11 r^2 cos 2 theta + eps^2 t22 r^4 cos 4 theta.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VelocityCoeffs {
    pub t11: f64,
    pub t02: f64,
    pub t22: f64,
}

pub fn velocity_coeffs(beta: f64) -> VelocityCoeffs {
    let d = 1.0 + 2.0 * beta;
    VelocityCoeffs {
        t11: 0.25 * (1.0 + beta) / d,
        t02: -(4.0 + 5.0 * beta + 6.0 * beta * beta) / (32.0 * d),
        t22: -beta * (1.0 - 2.0 * beta) / (32.0 * (1.0 + 4.0 * beta) * d),
    }
}

/// Perturbative velocity at polar point (r, theta).
pub fn velocity_pert(beta: f64, eps: f64, r: f64, theta: f64) -> f64 {
    let c = velocity_coeffs(beta);
    0.25 * (1.0 - r * r) + 0.5 * beta + eps * eps * c.t02 + eps * c.t11 * r * r * (2.0 * theta).cos()
        + eps * eps * c.t22 * r.powi(4) * (4.0 * theta).cos()
}

/// Second-order flux coefficient q1 in Q = (pi/8)(1 + 4 beta) + q1 eps^2.
pub fn q1_coefficient(beta: f64) -> f64 {
    -PI / 16.0 * (1.0 + beta * (1.0 + 6.0 * beta) / (2.0 * (2.0 * beta + 1.0)))
}

pub fn q_steady_ellipse_pert(a: f64, beta: f64, dp: f64) -> Result<Perturbative> {
    ensure(beta.is_finite() && beta >= 0.0, || format!("slip length must be non-negative, got {beta}"))?;
    let e = eps_param(a)?.eps;
    let q = PI / 8.0 * (1.0 + 4.0 * beta) + q1_coefficient(beta) * e * e;
    Ok(wrap(q * dp, e, "ellipse steady flux"))
}

/// Eigenvalue expansion data: gamma = gamma0 + gamma2 eps^2 and the
/// eigenfunction J0(g r) + a11 eps J2(g r) cos 2 theta + a22 eps^2 J4(g r) cos 4 theta.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenCoeffs {
    pub gamma0: f64,
    pub gamma2: f64,
    pub a11: f64,
    pub a22: f64,
}

pub fn eigen_coeffs(beta: f64) -> Result<EigenCoeffs> {
    let g = disk_spectrum(1.0, beta, 1)?[0].gamma;
    Ok(eigen_coeffs_at(g, beta))
}

/// Coefficients as functions of the disk root gamma0 and beta.
pub fn eigen_coeffs_at(g: f64, beta: f64) -> EigenCoeffs {
    let g2 = g * g;
    let b = beta;
    let b2 = b * b;
    let n = b2 * b2 * g2.powi(3) - g2 * (2.0 * g2 - 3.0) * b2 * b + (2.0 * g2 + 3.0) * (g2 - 2.0) * b2
        + (5.0 - 2.0 * g2) * b
        - 2.0
        + g2;
    let d = (b2 * g2 - 2.0 * b + 1.0) * (b2 * g2 + 1.0);
    let gamma2 = g / 16.0 * n / d;
    let a11 = g2 / 4.0 * (b2 * g2 - b + 1.0) / (b2 * g2 - 2.0 * b + 1.0);
    let n22 = g2 * g2 * (g2 - 12.0) * b2 * b2 - g2 * (2.0 * g2 - 31.0) * b2 * b
        + (-14.0 - 17.0 * g2 + 2.0 * g2 * g2) * b2
        + (25.0 - 2.0 * g2) * b
        + g2
        - 6.0;
    let d22 = (b2 * g2 - 2.0 * b + 1.0) * (-12.0 * b2 * g2 + g2 * g2 * b2 - 2.0 * b * g2 + 24.0 * b + g2 - 6.0);
    let a22 = g2 * g2 / 128.0 * n22 / d22;
    EigenCoeffs { gamma0: g, gamma2, a11, a22 }
}

pub fn lambda1_ellipse_pert(a: f64, beta: f64) -> Result<Perturbative> {
    ensure(beta.is_finite() && beta >= 0.0, || format!("slip length must be non-negative, got {beta}"))?;
    let e = eps_param(a)?.eps;
    let c = eigen_coeffs(beta)?;
    let gamma = c.gamma0 + c.gamma2 * e * e;
    Ok(wrap(gamma * gamma, e, "ellipse eigenvalue"))
}

/// Perturbative eigenfunction at (r, theta); `terms` = 1, 2 or 3 keeps
/// the J0, J2 and J4 parts respectively, and the eigenvalue correction is
/// included only with all three.
pub fn eigenfunction_pert(coeffs: &EigenCoeffs, eps: f64, terms: usize, r: f64, theta: f64) -> f64 {
    let g = if terms >= 3 { coeffs.gamma0 + coeffs.gamma2 * eps * eps } else { coeffs.gamma0 };
    let x = g * r;
    let mut v = bessel_j(0, x).unwrap_or(f64::NAN);
    if terms >= 2 {
        v += coeffs.a11 * eps * bessel_j(2, x).unwrap_or(f64::NAN) * (2.0 * theta).cos();
    }
    if terms >= 3 {
        v += coeffs.a22 * eps * eps * bessel_j(4, x).unwrap_or(f64::NAN) * (4.0 * theta).cos();
    }
    v
}

/// First zero of J0.
pub fn j0_first_zero() -> f64 {
    bessel_j0_zeros(1).map(|z| z[0]).unwrap_or(2.404_825_557_695_773)
}

/// Boundary weight 1 + 2 j J_n'(j) / J_n(j) at the first zero j of J0.
pub fn rayleigh_coefficient(n: usize) -> Result<f64> {
    ensure(n >= 1, || "Rayleigh coefficients start at n = 1".into())?;
    let j = j0_first_zero();
    let jn = bessel_j(n as u32, j)?;
    let jnm1 = bessel_j(n as u32 - 1, j)?;
    // J_n' = J_{n-1} - (n / x) J_n
    Ok(1.0 + 2.0 * (j * jnm1 - n as f64 * jn) / jn)
}

/// No-slip lambda1 for a near-circular boundary: j / sqrt(lambda) =
/// 1 + a0 - (1/4) sum_n (1 + 2 j J_n'(j)/J_n(j)) (a_n^2 + b_n^2).
pub fn rayleigh_lambda_b0(fb: &FourierBoundary) -> Result<f64> {
    let j = j0_first_zero();
    let mut s = 0.0;
    for n in 1..=fb.order() {
        let a = fb.cos.get(n - 1).copied().unwrap_or(0.0);
        let b = fb.sin.get(n - 1).copied().unwrap_or(0.0);
        if a != 0.0 || b != 0.0 {
            s += rayleigh_coefficient(n)? * (a * a + b * b);
        }
    }
    let ratio = 1.0 + fb.a0 - 0.25 * s;
    Ok((j / ratio).powi(2))
}

const HD_C4: f64 = 0.034640;
const HD_C6: f64 = 0.010355;
const HD_C8: f64 = 0.004650;

/// Empirical no-slip fit sqrt(lambda) / a = j (1 - e^2/4 - c4 e^4 - c6 e^6 - c8 e^8)
/// with e the eccentricity and a >= 1 the semi-major axis.
pub fn hewitt_day_lambda(a: f64) -> Result<f64> {
    let big = a.max(1.0 / a);
    let e2 = eps_param(big)?.eccentricity.powi(2);
    let j = j0_first_zero();
    let f = 1.0 - e2 / 4.0 - HD_C4 * e2 * e2 - HD_C6 * e2.powi(3) - HD_C8 * e2.powi(4);
    Ok((big * j * f).powi(2))
}
