//! Rectangle (-a, a) x (-b, b) with slip length beta.
//!
//! One-dimensional Robin modes on (-c, c): even modes cos(mu x) with
//! mu tan(mu c) = 1/beta, odd modes sin(mu x) with tan(mu c) = -beta mu.
//! Rectangle modes are products, lambda = mu_x^2 + mu_y^2.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{ensure, Error, Result};
use crate::modesum::{FluxSeries, Mode, TransientCurve};
use crate::rootkit::{ode_solve, solve_bracketed, Tol};

fn check_len(c: f64, what: &str) -> Result<()> {
    ensure(c.is_finite() && c > 0.0, || format!("{what} must be positive, got {c}"))
}

fn check_beta(beta: f64) -> Result<()> {
    ensure(beta.is_finite() && beta >= 0.0, || format!("slip length must be non-negative, got {beta}"))
}

/// Even-mode root on branch k: mu in (k pi / c, (k pi + pi/2) / c), solving
/// beta mu sin(mu c) - cos(mu c) = 0, the pole-free form of mu tan(mu c) = 1/beta.
pub fn mu_root(c: f64, beta: f64, k: usize) -> Result<f64> {
    check_len(c, "half-width")?;
    check_beta(beta)?;
    let lo = k as f64 * PI;
    let hi = lo + FRAC_PI_2;
    if beta == 0.0 {
        return Ok(hi / c);
    }
    let s = beta / c;
    let root = solve_bracketed(|x| s * x * x.sin() - x.cos(), lo, hi, Tol::default())?;
    Ok(root.x / c)
}

/// Odd-mode root on branch k: mu c in ((k + 1/2) pi, (k + 1) pi).
pub fn mu_root_odd(c: f64, beta: f64, k: usize) -> Result<f64> {
    check_len(c, "half-width")?;
    check_beta(beta)?;
    let hi = (k as f64 + 1.0) * PI;
    if beta == 0.0 {
        return Ok(hi / c);
    }
    let s = beta / c;
    let root = solve_bracketed(|x| x.sin() + s * x * x.cos(), hi - FRAC_PI_2, hi, Tol::default())?;
    Ok(root.x / c)
}

/// Fundamental even root.
pub fn mu(c: f64, beta: f64) -> Result<f64> {
    mu_root(c, beta, 0)
}

/// Algebraic bounds (lower, upper) on the fundamental root, both exact at beta = 0.
pub fn mu_bounds(c: f64, beta: f64) -> Result<(f64, f64)> {
    check_len(c, "half-width")?;
    check_beta(beta)?;
    let lb = PI / (c * (4.0 * c + PI * PI * beta)).sqrt();
    // (pi / 4 beta)(sqrt(1 + 4 beta / c) - 1), rationalised for small beta.
    let ub = (PI / c) / (1.0 + (1.0 + 4.0 * beta / c).sqrt());
    Ok((lb, ub))
}

/// d mu / d c along the fundamental branch.
pub fn dmu_dc(c: f64, beta: f64) -> Result<f64> {
    let m = mu(c, beta)?;
    let g = 1.0 + beta * beta * m * m;
    Ok(-m * g / (beta + c * g))
}

pub fn lambda1_rect(a: f64, b: f64, beta: f64) -> Result<f64> {
    Ok(mu(a, beta)?.powi(2) + mu(b, beta)?.powi(2))
}

/// Fundamental eigenvalue of the square (-h, h)^2 as a function of beta,
/// integrated from lambda(0) = pi^2 / (2 h^2) along
/// d lambda / d beta = -2 lambda / (beta + h (1 + beta^2 lambda / 2)).
pub fn lambda1_square_ode(h: f64, betas: &[f64]) -> Result<Vec<f64>> {
    check_len(h, "half-side")?;
    let lam0 = PI * PI / (2.0 * h * h);
    ode_solve(
        |beta, lam| -2.0 * lam / (beta + h * (1.0 + beta * beta * lam / 2.0)),
        0.0,
        lam0,
        betas,
        1e-12,
    )
}

/// Roots X_p = mu_p a of cos X = (beta / a) X sin X used by the steady series.
pub fn steady_series_roots(a: f64, beta: f64, n: usize) -> Result<Vec<f64>> {
    (0..n).map(|k| Ok(mu_root(a, beta, k)? * a)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    /// Magnitude of the last retained term.
    pub last_term: f64,
}

/// Steady flux through the rectangle by the single cosine series
/// u = (a^2 - x^2)/2 + beta a - sum C_p cosh(X_p y / a) cos(X_p x / a),
/// C_p = A_p / (cosh(X_p b / a) + (beta X_p / a) sinh(X_p b / a)),
/// A_p = 2 (a / X_p)^3 sin X_p / (beta sin^2 X_p + a).
pub fn q_steady_rect(a: f64, b: f64, beta: f64, dp: f64, n_terms: usize) -> Result<SeriesValue> {
    check_len(a, "half-width a")?;
    check_len(b, "half-width b")?;
    check_beta(beta)?;
    let xs = steady_series_roots(a, beta, n_terms)?;
    let mut sum = 0.0;
    let mut last = 0.0;
    for &x in &xs {
        let s = x.sin();
        let amp = 2.0 * (a / x).powi(3) * s / (beta * s * s + a);
        // sinh / (cosh + k sinh) written with tanh to avoid overflow.
        let t = (x * b / a).tanh();
        let ratio = t / (1.0 + beta * x / a * t);
        last = 4.0 * a * a * amp * s * ratio / (x * x);
        sum += last;
    }
    let value = 4.0 / 3.0 * a.powi(3) * b + 4.0 * beta * a * a * b - sum;
    Ok(SeriesValue { value: value * dp, last_term: last.abs() * dp })
}

/// One-dimensional Robin mode on (-c, c), in ascending order of mu.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mode1d {
    pub mu: f64,
    pub even: bool,
    /// (int phi)^2 / int phi^2; zero for odd modes.
    pub area_weight: f64,
}

/// First `n` one-dimensional modes; even and odd alternate.
pub fn modes_1d(c: f64, beta: f64, n: usize) -> Result<Vec<Mode1d>> {
    let mut out = Vec::with_capacity(n);
    for p in 0..n {
        let k = p / 2;
        if p % 2 == 0 {
            let m = mu_root(c, beta, k)?;
            let s = (m * c).sin();
            let int = 2.0 * s / m;
            let norm = c + (2.0 * m * c).sin() / (2.0 * m);
            out.push(Mode1d { mu: m, even: true, area_weight: int * int / norm });
        } else {
            out.push(Mode1d { mu: mu_root_odd(c, beta, k)?, even: false, area_weight: 0.0 });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RectMode {
    /// 1-based indices in the x and y one-dimensional sequences.
    pub p: usize,
    pub q: usize,
    pub lambda: f64,
    pub area_weight: f64,
    pub weight: f64,
}

/// Product modes from the first `nx` x-modes and `ny` y-modes, ascending in lambda.
pub fn rect_spectrum(a: f64, b: f64, beta: f64, nx: usize, ny: usize) -> Result<Vec<RectMode>> {
    let mx = modes_1d(a, beta, nx)?;
    let my = modes_1d(b, beta, ny)?;
    let mut out = Vec::with_capacity(nx * ny);
    for (i, u) in mx.iter().enumerate() {
        for (j, v) in my.iter().enumerate() {
            let lambda = u.mu * u.mu + v.mu * v.mu;
            let area_weight = u.area_weight * v.area_weight;
            out.push(RectMode { p: i + 1, q: j + 1, lambda, area_weight, weight: area_weight / lambda });
        }
    }
    out.sort_by(|x, y| x.lambda.total_cmp(&y.lambda));
    Ok(out)
}

pub fn rect_flux_series(a: f64, b: f64, beta: f64, dp: f64, nx: usize, ny: usize, closed_terms: usize) -> Result<FluxSeries> {
    let spec = rect_spectrum(a, b, beta, nx, ny)?;
    let steady = q_steady_rect(a, b, beta, dp, closed_terms)?.value;
    FluxSeries::new(
        spec.iter().map(|m| Mode { lambda: m.lambda, weight: m.weight }).collect(),
        dp,
        Some(steady),
    )
}

pub fn q_transient_rect(a: f64, b: f64, beta: f64, dp: f64, times: &[f64], nx: usize, ny: usize) -> Result<TransientCurve> {
    let series = rect_flux_series(a, b, beta, dp, nx, ny, 400)?;
    Ok(series.q_transient_curve(times))
}

pub fn q_periodic_rect(a: f64, b: f64, beta: f64, omega: f64, nx: usize, ny: usize) -> Result<Complex64> {
    Ok(rect_flux_series(a, b, beta, 1.0, nx, ny, 400)?.q_periodic(omega))
}

/// phi1(z) = arctan(1/z) / z, decreasing on z > 0; NaN off that domain.
pub fn phi1(z: f64) -> f64 {
    if !(z > 0.0) {
        return f64::NAN;
    }
    (1.0 / z).atan() / z
}

/// phi2(z) = phi1(sqrt z).
pub fn phi2(z: f64) -> f64 {
    phi1(z.sqrt())
}

/// The z > 0 with phi1(z) = v.
pub fn phi1_inverse(v: f64) -> Result<f64> {
    ensure(v.is_finite() && v > 0.0, || format!("phi1 takes values in (0, inf), got {v}"))?;
    let guess_small = FRAC_PI_2 / v;
    let guess_large = 1.0 / v.sqrt();
    let lo = 0.25 * guess_small.min(guess_large);
    let hi = 4.0 * guess_small.max(guess_large);
    let root = solve_bracketed(|z| phi1(z) - v, lo, hi, Tol::default())?;
    Ok(root.x)
}

/// Scaled root beta mu(c, beta), obtained by inverting phi1(mu_hat) = c / beta.
pub fn mu_hat_via_phi(c: f64, beta: f64) -> Result<f64> {
    check_len(c, "half-width")?;
    ensure(beta > 0.0, || "scaled roots need beta > 0".into())?;
    phi1_inverse(c / beta)
}

/// Lower bound on lambda1 of the equal-area rectangle (-h r, h r) x (-h/r, h/r).
pub fn lambda_lb(h: f64, r: f64, beta: f64) -> Result<f64> {
    Ok(mu_bounds(h * r, beta)?.0.powi(2) + mu_bounds(h / r, beta)?.0.powi(2))
}

pub fn lambda_ub(h: f64, r: f64, beta: f64) -> Result<f64> {
    Ok(mu_bounds(h * r, beta)?.1.powi(2) + mu_bounds(h / r, beta)?.1.powi(2))
}

/// Rayleigh quotient of cos(mu x / r) cos(mu r y) on (-h r, h r) x (-h/r, h/r),
/// mu the square's fundamental root; an upper bound on lambda1 of that rectangle.
pub fn variational_bound(h: f64, r: f64, beta: f64) -> Result<f64> {
    check_len(r, "aspect parameter")?;
    let lam = 2.0 * mu(h, beta)?.powi(2);
    let sr = r.sqrt();
    let shape = (sr - 1.0 / sr).powi(2) * (r + 1.0 + 1.0 / r);
    let corr = beta * shape / (h * (1.0 + beta * beta * lam / 2.0) + beta);
    Ok(lam * (0.5 * (r * r + 1.0 / (r * r)) - corr))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuarticRoots {
    pub big_b: f64,
    /// r_- < 1 < r_+ = 1 / r_-.
    pub r_minus: f64,
    pub r_plus: f64,
}

/// Coefficients (a1, a2) of r^4 + a1 r^3 + a2 r^2 + a1 r + 1 = 0, whose
/// positive roots solve lambda_lb(h, r, beta) = y / h^2.
pub fn quartic_coefficients(h: f64, beta: f64, y: f64) -> (f64, f64) {
    let p2 = PI * PI;
    let a1 = beta * p2 / (4.0 * h) - y * beta / h;
    let a2 = -y * (beta * beta * p2 * p2 + 16.0 * h * h) / (4.0 * h * h * p2);
    (a1, a2)
}

/// Solves the palindromic quartic through r + 1/r = B. Requires
/// y / h^2 > lambda_lb(h, 1, beta), equivalently B > 2.
pub fn quartic_rstar(h: f64, beta: f64, y: f64) -> Result<QuarticRoots> {
    check_len(h, "half-side")?;
    check_beta(beta)?;
    let floor = 2.0 * PI * PI / (h * (4.0 * h + PI * PI * beta));
    if !(y / (h * h) > floor) {
        return Err(Error::Precondition(format!(
            "y / h^2 = {} must exceed lambda_lb at r = 1, {}",
            y / (h * h),
            floor
        )));
    }
    let (a1, a2) = quartic_coefficients(h, beta, y);
    let big_b = 0.5 * (-a1 + (a1 * a1 - 4.0 * a2 + 8.0).sqrt());
    if !(big_b > 2.0) {
        return Err(Error::Precondition(format!("B = {big_b} must exceed 2")));
    }
    let d = (big_b * big_b - 4.0).sqrt();
    let r_plus = 0.5 * (big_b + d);
    Ok(QuarticRoots { big_b, r_minus: 1.0 / r_plus, r_plus })
}
