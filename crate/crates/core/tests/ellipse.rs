mod common;

use common::{bessel_series, bisect, fd_ellipse_flux, rel, richardson2};
use slipflow::disk::{lambda1_disk, q_steady_disk};
use slipflow::ellipse::*;
use slipflow::geomfn::{ellipse_boundary_expansion, FourierBoundary};
use std::f64::consts::PI;

fn j0() -> f64 {
    bisect(|x| bessel_series(0, x), 2.0, 3.0)
}

fn eps(a: f64) -> f64 {
    eps_param(a).unwrap().eps
}

/// Richardson-extrapolated oracle flux for the area-pi ellipse with semi-axes a, 1/a.
fn oracle_flux(a: f64, beta: f64) -> f64 {
    let coarse = fd_ellipse_flux(a, 1.0 / a, beta, 16, 48);
    let fine = fd_ellipse_flux(a, 1.0 / a, beta, 32, 96);
    richardson2(coarse, fine)
}

/// Second-order coefficient of f(a) / f(1) - 1 in (a - 1), with the O(a - 1)
/// remainder removed by linear extrapolation from two offsets.
fn quadratic_coefficient(f: impl Fn(f64) -> f64) -> f64 {
    let c = |d: f64| (f(1.0 + d) / f(1.0) - 1.0) / (d * d);
    2.0 * c(5e-4) - c(1e-3)
}

#[test]
fn expansion_parameter() {
    for a in [1.01, 1.2, 2.0] {
        let p = eps_param(a).unwrap();
        assert!(rel(eps_param(1.0 / a).unwrap().eps, -p.eps) < 1e-14);
        assert!(p.eps > 0.0 && p.eps < 1.0);
        assert!(rel(p.eccentricity, (1.0 - a.powi(-4)).sqrt()) < 1e-14);
    }
    assert_eq!(eps(1.0), 0.0);
    assert!(rel(eps(1.0 + 1e-6), 2e-6) < 1e-5);
}

#[test]
fn no_slip_exact_flux() {
    assert!(rel(q_steady_ellipse_exact_b0(1.0).unwrap(), PI / 8.0) < 1e-15);
    for a in [1.3, 2.0] {
        let e = eps(a);
        assert!(rel(q_steady_ellipse_exact_b0(a).unwrap(), PI / 8.0 * (1.0 - e * e).sqrt()) < 1e-14);
    }
    let a = 1.01;
    let e = eps(a);
    let gap = q_steady_ellipse_exact_b0(a).unwrap() - PI / 8.0 * (1.0 - 0.5 * e * e);
    assert!(gap.abs() <= e.powi(4), "{gap}");
}

#[test]
fn no_slip_exact_flux_against_finite_differences() {
    let a = 1.5;
    let fd = oracle_flux(a, 0.0);
    let exact = q_steady_ellipse_exact_b0(a).unwrap();
    assert!(rel(exact, fd) <= 1e-3, "{exact} vs {fd}");
    assert!(rel(exact, fd) <= 1e-5, "oracle should be far tighter than the criterion");
}

#[test]
fn perturbative_flux_coefficient() {
    assert!(rel(q1_coefficient(0.0), -PI / 16.0) < 1e-15);
    for beta in [0.0, 0.5, 3.0] {
        let q = q_steady_ellipse_pert(1.0, beta, 1.0).unwrap().value;
        assert!(rel(q, PI / 8.0 * (1.0 + 4.0 * beta)) < 1e-15);
    }
    // exact no-slip flux expands as (pi/8)(1 - eps^2/2), so the gap is fourth order
    for a in [1.02, 1.05] {
        let e = eps(a);
        let gap = q_steady_ellipse_pert(a, 0.0, 1.0).unwrap().value - q_steady_ellipse_exact_b0(a).unwrap();
        assert!(gap.abs() <= 0.1 * e.powi(4), "a {a}: {gap}");
    }
}

#[test]
fn slip_flux_against_finite_differences() {
    let beta = 1.0;
    let gap = |a: f64| q_steady_ellipse_pert(a, beta, 1.0).unwrap().value - oracle_flux(a, beta);
    let (g1, g2) = (gap(1.1), gap(1.05));
    assert!(g1.abs() <= eps(1.1).powi(3), "{g1}");
    // the neglected terms are at least cubic in eps
    assert!((g1 / g2).abs() > (eps(1.1) / eps(1.05)).powi(3) * 0.9, "{g1} {g2}");
}

#[test]
fn perturbative_velocity_field() {
    for beta in [0.0, 0.5, 2.0] {
        let resid = |a: f64| {
            let e = eps(a);
            let u = |x: f64, y: f64| velocity_pert(beta, e, x.hypot(y), y.atan2(x));
            worst_robin_residual(&u, a, beta)
        };
        let (r1, r2) = (resid(1.04), resid(1.02));
        assert!(r1 / r2 > 7.0, "beta {beta}: {r1} {r2}");
        let e = eps(1.04);
        let u = |x: f64, y: f64| velocity_pert(beta, e, x.hypot(y), y.atan2(x));
        let h = 1e-3;
        for (x, y) in [(0.2, 0.1), (-0.5, 0.3)] {
            let lap = (u(x + h, y) + u(x - h, y) + u(x, y + h) + u(x, y - h) - 4.0 * u(x, y)) / (h * h);
            assert!((lap + 1.0).abs() < 1e-6);
        }
    }
}

/// Largest |f + beta df/dn| over 64 points on the ellipse x^2/a^2 + a^2 y^2 = 1.
fn worst_robin_residual(f: &impl Fn(f64, f64) -> f64, a: f64, beta: f64) -> f64 {
    let h = 1e-6;
    (0..64)
        .map(|k| {
            let t = k as f64 * PI / 64.0;
            let (x, y) = (a * t.cos(), t.sin() / a);
            let (nx, ny) = (x / (a * a), a * a * y);
            let n = nx.hypot(ny);
            let (nx, ny) = (nx / n, ny / n);
            let dn = (f(x + h * nx, y + h * ny) - f(x - h * nx, y - h * ny)) / (2.0 * h);
            (f(x, y) + beta * dn).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn eigenfunction_boundary_residual_orders() {
    for beta in [0.0, 0.5, 2.0] {
        let c = eigen_coeffs(beta).unwrap();
        let ratio = |terms: usize| {
            let resid = |a: f64| {
                let e = eps(a);
                let f = |x: f64, y: f64| eigenfunction_pert(&c, e, terms, x.hypot(y), y.atan2(x));
                worst_robin_residual(&f, a, beta)
            };
            resid(1.04) / resid(1.02)
        };
        let (r1, r2, r3) = (ratio(1), ratio(2), ratio(3));
        assert!((r1 - 2.0).abs() < 0.2, "beta {beta}: {r1}");
        assert!((r2 - 4.0).abs() < 0.4, "beta {beta}: {r2}");
        assert!(r3 > 7.0, "beta {beta}: {r3}");
    }
}

#[test]
fn eigenvalue_correction_limits() {
    let c = eigen_coeffs(0.0).unwrap();
    let g = c.gamma0;
    assert!(rel(g, j0()) < 1e-14);
    assert!((c.gamma2 - (g * g - 2.0) * g / 16.0).abs() <= 1e-12);
    let c = eigen_coeffs(1e3).unwrap();
    assert!((c.gamma2 / c.gamma0 - 3.0 / 32.0).abs() <= 1e-3);
    for beta in [0.0, 0.7] {
        assert!(rel(lambda1_ellipse_pert(1.0, beta).unwrap().value, lambda1_disk(1.0, beta).unwrap()) < 1e-15);
    }
}

#[test]
fn no_slip_eigenvalue_coefficient() {
    let j = j0();
    let coef = 0.5 * j * j - 1.0;
    assert!((coef - 1.891592982).abs() < 1e-6);
    let pert = quadratic_coefficient(|a| lambda1_ellipse_pert(a, 0.0).unwrap().value);
    assert!((pert - coef).abs() < 1e-4, "{pert}");
}

#[test]
fn rayleigh_weights() {
    assert!((rayleigh_coefficient(1).unwrap() + 1.0).abs() < 1e-12);
    for n in 1..=12 {
        let r = rayleigh_coefficient(n).unwrap();
        let nf = n as f64;
        assert!(2.0 * nf - 3.0 <= r + 1e-12 && r < 2.0 * nf + 1.0, "n {n}: {r}");
    }
    assert!(rayleigh_coefficient(0).is_err());
    let round = FourierBoundary { a0: 0.0, cos: vec![0.0; 4], sin: vec![0.0; 4] };
    assert!(rel(rayleigh_lambda_b0(&round).unwrap(), j0() * j0()) < 1e-14);
}

#[test]
fn rayleigh_route_for_the_ellipse() {
    let coef = quadratic_coefficient(|a| rayleigh_lambda_b0(&ellipse_boundary_expansion(a)).unwrap());
    assert!((coef - 1.8916).abs() < 1e-4, "{coef}");
}

#[test]
fn historical_fit() {
    let j = j0();
    assert!(rel(hewitt_day_lambda(1.0).unwrap(), j * j) < 1e-14);
    let coef = quadratic_coefficient(|a| hewitt_day_lambda(a).unwrap());
    assert!((coef - 1.89152).abs() < 1e-4, "{coef}");
    let a = 1.05;
    let hd = hewitt_day_lambda(a).unwrap();
    let ray = rayleigh_lambda_b0(&ellipse_boundary_expansion(a)).unwrap();
    assert!(rel(hd, ray) < 1e-3);
    assert!(rel(hewitt_day_lambda(1.0 / a).unwrap(), hd) < 1e-14);
}

#[test]
fn symmetry_and_bounds() {
    let j = j0();
    for a in [1.0, 1.05, 1.1, 1.18, 1.25] {
        for beta in [0.0, 0.5, 1.0, 5.0] {
            let q = q_steady_ellipse_pert(a, beta, 1.0).unwrap().value;
            let l = lambda1_ellipse_pert(a, beta).unwrap().value;
            // 1/a is itself rounded, so only rounding-level agreement is meaningful
            assert!(rel(q, q_steady_ellipse_pert(1.0 / a, beta, 1.0).unwrap().value) < 1e-14);
            assert!(rel(l, lambda1_ellipse_pert(1.0 / a, beta).unwrap().value) < 1e-14);
            if a > 1.0 && eps(a) <= EPS_REGIME {
                assert!(q < q_steady_disk(1.0, beta, 1.0).unwrap(), "a {a} beta {beta}");
                assert!(l > lambda1_disk(1.0, beta).unwrap(), "a {a} beta {beta}");
            }
        }
        let l = lambda1_ellipse_pert(a, 0.0).unwrap().value;
        assert!(j * j <= l && l <= 0.5 * j * j * (a * a + 1.0 / (a * a)), "a {a}");
    }
}

#[test]
fn regime_flag() {
    assert!(q_steady_ellipse_pert(1.1, 1.0, 1.0).unwrap().in_regime);
    let far = lambda1_ellipse_pert(1.2, 1.0).unwrap();
    assert!(!far.in_regime && far.eps > EPS_REGIME);
    assert!(q_steady_ellipse_pert(1.1, -1.0, 1.0).is_err());
    assert!(q_steady_ellipse_exact_b0(0.0).is_err());
}
