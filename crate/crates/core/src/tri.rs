//! Equilateral triangle with vertices (-a, 0), (a, 0), (0, a sqrt 3).
//!
//! Eigenvalues are computed for a = 1 and rescaled by
//! lambda1(a, beta) = lambda1(1, beta / a) / a^2.

use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{ensure, Error, Result};
use crate::rootkit::{integrate, ode_solve, scan_bracket, solve_bracketed, Tol};

const SQRT3: f64 = 1.732_050_807_568_877_2;

fn check(a: f64, beta: f64) -> Result<()> {
    ensure(a.is_finite() && a > 0.0, || format!("half-side must be positive, got {a}"))?;
    ensure(beta.is_finite() && beta >= 0.0, || format!("slip length must be non-negative, got {beta}"))
}

pub fn q_steady_tri(a: f64, beta: f64, dp: f64) -> Result<f64> {
    check(a, beta)?;
    let area = SQRT3 * a * a;
    let perimeter = 6.0 * a;
    let c0 = a / SQRT3;
    let s0 = SQRT3 * a.powi(4) / 20.0;
    let s_inf = a.powi(4) / (4.0 * SQRT3);
    Ok(dp * (beta * area * area / perimeter + s0 + beta / (c0 + beta) * (s_inf - s0)))
}

/// Steady velocity: a blend of the no-slip torsion function and the
/// paraboloid centred at the incentre.
pub fn tri_velocity(a: f64, beta: f64, dp: f64, x: f64, y: f64) -> f64 {
    let u0 = y * (y - SQRT3 * (a + x)) * (y - SQRT3 * (a - x)) / (4.0 * SQRT3 * a);
    let yc = y - a / SQRT3;
    let u_inf = a * a / 6.0 - 0.25 * (x * x + yc * yc);
    let c0 = a / SQRT3;
    dp * (c0 * u0 + beta * u_inf + a / (2.0 * SQRT3) * beta * (c0 + beta)) / (c0 + beta)
}

/// Pole-free form of tan(sqrt3 s / 2) = 3 s beta / (beta^2 s^2 - 2) divided
/// by s, where s = sqrt(lambda) for the unit triangle. Negative at s = 0.
pub fn tri_root_function(s: f64, beta: f64) -> f64 {
    let th = 0.5 * SQRT3 * s;
    let sinc = if th.abs() < 1e-8 { 0.5 * SQRT3 } else { th.sin() / s };
    sinc * (beta * beta * s * s - 2.0) - 3.0 * beta * th.cos()
}

/// sqrt(lambda1) of the unit triangle: the first root in (0, 2 pi / sqrt 3).
fn sqrt_lambda1_unit(beta: f64) -> Result<f64> {
    let top = 2.0 * PI / SQRT3;
    if beta == 0.0 {
        return Ok(top);
    }
    let f = |s: f64| tri_root_function(s, beta);
    let (lo, hi) = scan_bracket(f, 0.0, top, 256)?;
    Ok(solve_bracketed(f, lo, hi, Tol::default())?.x)
}

pub fn lambda1_tri(a: f64, beta: f64) -> Result<f64> {
    check(a, beta)?;
    Ok(sqrt_lambda1_unit(beta / a)?.powi(2) / (a * a))
}

/// Smallest positive root t1 of tan(t sqrt3 / beta) = 3 t / (2 t^2 - 1), unit triangle.
pub fn tri_t1(beta: f64) -> Result<f64> {
    ensure(beta > 0.0, || "t1 is defined for beta > 0".into())?;
    Ok(0.5 * beta * sqrt_lambda1_unit(beta)?)
}

/// Slip length at which the unit triangle has fundamental eigenvalue lambda,
/// for 0 < lambda <= 4 pi^2 / 3.
pub fn beta_of_lambda_tri(lambda: f64) -> Result<f64> {
    let top = 4.0 * PI * PI / 3.0;
    ensure(lambda > 0.0 && lambda <= top, || format!("lambda = {lambda} outside (0, 4 pi^2 / 3]"))?;
    if lambda == top {
        return Ok(0.0);
    }
    let s = lambda.sqrt();
    let split = PI / SQRT3;
    if (s - split).abs() < 1e-12 * split {
        return Ok(6f64.sqrt() / PI);
    }
    let t = (0.5 * SQRT3 * s).tan();
    let root = (9.0 + 8.0 * t * t).sqrt();
    Ok(if s < split { (3.0 + root) / (2.0 * s * t) } else { (3.0 - root) / (2.0 * s * t) })
}

/// d lambda1 / d beta for the unit triangle.
pub fn tri_ode_rhs(beta: f64, lambda: f64) -> f64 {
    let b2 = beta * beta;
    let num = -12.0 * lambda * (b2 * lambda + 2.0);
    let den = SQRT3 * b2 * b2 * lambda * lambda + b2 * (5.0 * SQRT3 + 6.0 * beta) * lambda + 4.0 * SQRT3 + 12.0 * beta;
    num / den
}

/// lambda1 of the unit triangle at each (ascending) beta, by integrating the
/// eigenvalue ODE from lambda(0) = 4 pi^2 / 3.
pub fn lambda1_tri_ode(betas: &[f64]) -> Result<Vec<f64>> {
    if betas.iter().any(|b| !(*b >= 0.0)) {
        return Err(Error::Domain("slip lengths must be non-negative".into()));
    }
    ode_solve(tri_ode_rhs, 0.0, 4.0 * PI * PI / 3.0, betas, 1e-12)
}

/// Fundamental eigenfunction of the unit triangle (unnormalised):
/// sin(p + b sqrt3 x + b y) + sin(p - b sqrt3 x + b y) + sin(p + b sqrt3 - 2 b y),
/// b = sqrt(lambda) / 2, p = arctan(beta sqrt(lambda) / 2).
pub fn tri_eigenfunction(beta: f64, lambda: f64, x: f64, y: f64) -> f64 {
    let b = 0.5 * lambda.sqrt();
    let p = (beta * b).atan();
    (p + b * SQRT3 * x + b * y).sin() + (p - b * SQRT3 * x + b * y).sin() + (p + b * SQRT3 - 2.0 * b * y).sin()
}

/// Integral of f over the triangle with half-side a.
pub fn integrate_over_triangle<F: Fn(f64, f64) -> f64>(a: f64, f: F, tol: f64) -> Result<f64> {
    let mut err = None;
    let v = integrate(
        |y| {
            let half = a - y / SQRT3;
            match integrate(|x| f(x, y), -half, half, tol) {
                Ok(v) => v,
                Err(e) => {
                    err = Some(e);
                    0.0
                }
            }
        },
        0.0,
        a * SQRT3,
        tol,
    )?;
    match err {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FirstMode {
    pub lambda: f64,
    /// (int phi)^2 / int phi^2
    pub area_weight: f64,
    /// Q_1 = area_weight / lambda
    pub weight: f64,
}

/// First-mode flux weight by quadrature of the explicit eigenfunction.
pub fn tri_first_mode(a: f64, beta: f64) -> Result<FirstMode> {
    check(a, beta)?;
    let bu = beta / a;
    let lam_unit = lambda1_tri(1.0, bu)?;
    let int1 = integrate_over_triangle(1.0, |x, y| tri_eigenfunction(bu, lam_unit, x, y), 1e-12)?;
    let int2 = integrate_over_triangle(1.0, |x, y| tri_eigenfunction(bu, lam_unit, x, y).powi(2), 1e-12)?;
    let area_weight = a * a * int1 * int1 / int2;
    let lambda = lam_unit / (a * a);
    Ok(FirstMode { lambda, area_weight, weight: area_weight / lambda })
}

/// Residual of the coupled pair 2 D tan L = 3 r / beta, -D tan M = 3 r / beta,
/// r = 1 / sqrt3, D = L - M = t1 sqrt3 / beta: |tan D - tan(L - M)| from the
/// addition formula, together with the mismatch of lambda1 = (4/3) D^2.
pub fn coupled_pair_residual(beta: f64) -> Result<f64> {
    let t = tri_t1(beta)?;
    let d = t * SQRT3 / beta;
    let rhs = SQRT3 / beta;
    let tl = rhs / (2.0 * d);
    let tm = -rhs / d;
    // tan D = (tl - tm) / (1 + tl tm), cross-multiplied to stay finite near D = pi / 2.
    let (num, den) = (tl - tm, 1.0 + tl * tm);
    let addition = (d.sin() * den - d.cos() * num).abs() / (num.abs() + den.abs());
    let lam_from_d = 4.0 / 3.0 * d * d;
    let lam = lambda1_tri(1.0, beta)?;
    Ok(addition.max((lam_from_d - lam).abs() / lam))
}
