//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's own numerics.
#![allow(dead_code)]

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// Composite Simpson rule on n (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Plain bisection to full precision on a sign-changing bracket.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    assert!(flo * f(hi) <= 0.0, "no sign change on [{lo}, {hi}]");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// J_n(x) by its power series summed in pairs of terms; accurate for x below ~20.
pub fn bessel_series(n: u32, x: f64) -> f64 {
    let h = 0.5 * x;
    let mut term = h.powi(n as i32) / (1..=n).map(|k| k as f64).product::<f64>();
    let mut sum = term;
    for k in 1..200 {
        term *= -h * h / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// Flux of -lap u = 1 on (-a, a) x (-b, b) with u + beta du/dn = 0, by the
/// 5-point Laplacian with equal spacing h = 2a / cells_x, solved by SOR on a
/// symmetry quarter and integrated with the trapezoid rule. Robin rows use a
/// ghost node, so the scheme is second order for every beta.
pub fn fd_rect_flux(a: f64, b: f64, beta: f64, cells_x: usize) -> f64 {
    let h = 2.0 * a / cells_x as f64;
    let cells_y = (2.0 * b / h).round() as usize;
    assert!(cells_x % 2 == 0 && cells_y % 2 == 0);
    assert!((cells_y as f64 * h - 2.0 * b).abs() < 1e-12 * b, "aspect must fit the grid");
    // node 0 on the wall, node n on the centre line
    let (nx, ny) = (cells_x / 2, cells_y / 2);
    let mut u = vec![vec![0.0f64; ny + 1]; nx + 1];
    let first = if beta == 0.0 { 1 } else { 0 };
    let g = if beta == 0.0 { 0.0 } else { 2.0 * h / beta };
    let omega = 2.0 / (1.0 + (std::f64::consts::PI / cells_x.max(cells_y) as f64).sin());
    for _ in 0..1_000_000 {
        let (mut change, mut size) = (0.0f64, 0.0f64);
        for i in first..=nx {
            for j in first..=ny {
                let mut diag = 4.0;
                let (left, right) = if i == 0 {
                    diag += g;
                    (u[1][j], u[1][j])
                } else if i == nx {
                    (u[i - 1][j], u[i - 1][j])
                } else {
                    (u[i - 1][j], u[i + 1][j])
                };
                let (down, up) = if j == 0 {
                    diag += g;
                    (u[i][1], u[i][1])
                } else if j == ny {
                    (u[i][j - 1], u[i][j - 1])
                } else {
                    (u[i][j - 1], u[i][j + 1])
                };
                let gs = (left + right + down + up + h * h) / diag;
                let d = omega * (gs - u[i][j]);
                u[i][j] += d;
                change = change.max(d.abs());
                size = size.max(u[i][j].abs());
            }
        }
        if change <= 1e-14 * size {
            break;
        }
    }
    let mut q = 0.0;
    for (i, col) in u.iter().enumerate() {
        for (j, v) in col.iter().enumerate() {
            let wx = if i == 0 || i == nx { 0.5 } else { 1.0 };
            let wy = if j == 0 || j == ny { 0.5 } else { 1.0 };
            q += wx * wy * v;
        }
    }
    4.0 * q * h * h
}

/// Richardson extrapolation of a second-order quantity from grids n and 2n.
pub fn richardson2(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}

/// Flux of -lap u = 1 inside x^2/A^2 + y^2/B^2 = 1 (A > B) with
/// u + beta du/dn = 0, by the 5-point scheme in elliptic coordinates
/// x = c cosh(m) cos(v), y = c sinh(m) sin(v), where the Laplacian is
/// conformal with factor h^2 = c^2 (sinh^2 m + sin^2 v). The quarter
/// (m, v) in [0, m0] x [0, pi/2] carries mirror conditions on three sides
/// (m = 0 is the focal segment) and the Robin row on m = m0.
pub fn fd_ellipse_flux(big: f64, small: f64, beta: f64, cells_m: usize, cells_v: usize) -> f64 {
    let c = (big * big - small * small).sqrt();
    let m0 = (small / c).asinh();
    let (dm, dv) = (m0 / cells_m as f64, std::f64::consts::FRAC_PI_2 / cells_v as f64);
    let (nm, nv) = (cells_m, cells_v);
    let h2 = |i: usize, j: usize| {
        let (m, v) = (i as f64 * dm, j as f64 * dv);
        c * c * (m.sinh().powi(2) + v.sin().powi(2))
    };
    let (wm, wv) = (1.0 / (dm * dm), 1.0 / (dv * dv));
    let mut u = vec![vec![0.0f64; nv + 1]; nm + 1];
    let last = if beta == 0.0 { nm - 1 } else { nm };
    let omega = 2.0 / (1.0 + (std::f64::consts::PI / nm.max(nv) as f64).sin());
    for _ in 0..2_000_000 {
        let (mut change, mut size) = (0.0f64, 0.0f64);
        for i in 0..=last {
            for j in 0..=nv {
                let mut diag = 2.0 * wm + 2.0 * wv;
                let (lo, hi) = if i == 0 {
                    (u[1][j], u[1][j])
                } else if i == nm {
                    // ghost u[nm+1] = u[nm-1] - 2 dm h u[nm] / beta
                    diag += 2.0 * dm * h2(i, j).sqrt() / beta * wm;
                    (u[i - 1][j], u[i - 1][j])
                } else {
                    (u[i - 1][j], u[i + 1][j])
                };
                let (dn, up) = if j == 0 {
                    (u[i][1], u[i][1])
                } else if j == nv {
                    (u[i][j - 1], u[i][j - 1])
                } else {
                    (u[i][j - 1], u[i][j + 1])
                };
                let gs = (wm * (lo + hi) + wv * (dn + up) + h2(i, j)) / diag;
                let d = omega * (gs - u[i][j]);
                u[i][j] += d;
                change = change.max(d.abs());
                size = size.max(u[i][j].abs());
            }
        }
        if change <= 1e-14 * size {
            break;
        }
    }
    let mut q = 0.0;
    for i in 0..=nm {
        for j in 0..=nv {
            let wi = if i == 0 || i == nm { 0.5 } else { 1.0 };
            let wj = if j == 0 || j == nv { 0.5 } else { 1.0 };
            q += wi * wj * u[i][j] * h2(i, j);
        }
    }
    4.0 * q * dm * dv
}
