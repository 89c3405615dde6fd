//! Geometric functionals of cross-sections: area, perimeter, polar and
//! principal moments, the boundary functional B, isoperimetric deficits,
//! Fraenkel asymmetry and second-order Fourier-boundary estimates.

use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{ensure, Error, Result};
use crate::rootkit::elliptic_e;

/// Star-shaped boundary r(theta) = 1 + a0 + sum_n (a_n cos n theta + b_n sin n theta).
/// `cos[k]` and `sin[k]` hold the coefficients of order k + 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierBoundary {
    pub a0: f64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl FourierBoundary {
    pub fn new(a0: f64, cos: Vec<f64>, sin: Vec<f64>) -> Self {
        FourierBoundary { a0, cos, sin }
    }

    pub fn order(&self) -> usize {
        self.cos.len().max(self.sin.len())
    }

    fn coeff(&self, n: usize) -> (f64, f64) {
        (
            self.cos.get(n - 1).copied().unwrap_or(0.0),
            self.sin.get(n - 1).copied().unwrap_or(0.0),
        )
    }

    /// r(theta) and dr/dtheta.
    pub fn radius(&self, theta: f64) -> (f64, f64) {
        let mut r = 1.0 + self.a0;
        let mut dr = 0.0;
        for n in 1..=self.order() {
            let (a, b) = self.coeff(n);
            let (s, c) = (n as f64 * theta).sin_cos();
            r += a * c + b * s;
            dr += n as f64 * (b * c - a * s);
        }
        (r, dr)
    }

    /// Every coefficient multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        FourierBoundary {
            a0: self.a0 * s,
            cos: self.cos.iter().map(|c| c * s).collect(),
            sin: self.sin.iter().map(|c| c * s).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ShapeSpec {
    Disk { radius: f64 },
    /// Half-widths: the rectangle is (-a, a) x (-b, b).
    Rectangle { a: f64, b: f64 },
    /// Vertices (-a, 0), (a, 0), (0, a sqrt 3).
    EquilateralTriangle { a: f64 },
    RegularPolygon { n: u32, area: f64 },
    /// x^2/a^2 + a^2 y^2 = 1, area pi.
    EllipseUnitArea { a: f64 },
    FourierBoundary(FourierBoundary),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeomSummary {
    pub area: f64,
    pub perimeter: f64,
    /// Polar moment of inertia about the centroid.
    pub polar_moment: f64,
    /// (I_max, I_min) about centroidal principal axes.
    pub principal_moments: (f64, f64),
    /// B = boundary integral of ds / (n . (z - z_c)); `None` if the boundary is
    /// not star-shaped about the centroid.
    pub b_functional: Option<f64>,
    /// |boundary|^2 - 4 pi |area|.
    pub isoperimetric_deficit: f64,
}

fn positive(x: f64, what: &str) -> Result<()> {
    ensure(x.is_finite() && x > 0.0, || format!("{what} must be positive and finite, got {x}"))
}

/// Side length, inradius and circumradius of a regular n-gon of given area.
pub fn regular_polygon_dims(n: u32, area: f64) -> (f64, f64, f64) {
    let t = (PI / n as f64).tan();
    let inradius = (area / (n as f64 * t)).sqrt();
    let side = 2.0 * inradius * t;
    let circumradius = inradius / (PI / n as f64).cos();
    (side, inradius, circumradius)
}

/// Polar moment of a regular n-gon about its centre.
pub fn regular_polygon_polar_moment(n: u32, area: f64) -> f64 {
    let x = PI / n as f64;
    area * area * (x.tan() + 3.0 / x.tan()) / (6.0 * n as f64)
}

pub fn geom_summary(shape: &ShapeSpec) -> Result<GeomSummary> {
    let s = match *shape {
        ShapeSpec::Disk { radius } => {
            positive(radius, "radius")?;
            let area = PI * radius * radius;
            let i = PI * radius.powi(4) / 4.0;
            GeomSummary {
                area,
                perimeter: 2.0 * PI * radius,
                polar_moment: 2.0 * i,
                principal_moments: (i, i),
                b_functional: Some(2.0 * PI),
                isoperimetric_deficit: 0.0,
            }
        }
        ShapeSpec::Rectangle { a, b } => {
            positive(a, "half-width a")?;
            positive(b, "half-width b")?;
            let area = 4.0 * a * b;
            let ix = area * b * b / 3.0;
            let iy = area * a * a / 3.0;
            let perimeter = 4.0 * (a + b);
            GeomSummary {
                area,
                perimeter,
                polar_moment: ix + iy,
                principal_moments: (ix.max(iy), ix.min(iy)),
                b_functional: Some(4.0 * (b / a + a / b)),
                isoperimetric_deficit: perimeter * perimeter - 4.0 * PI * area,
            }
        }
        ShapeSpec::EquilateralTriangle { a } => {
            positive(a, "half-side a")?;
            let area = 3f64.sqrt() * a * a;
            polygon_summary(3, area)
        }
        ShapeSpec::RegularPolygon { n, area } => {
            ensure(n >= 3, || format!("polygon needs n >= 3, got {n}"))?;
            positive(area, "area")?;
            polygon_summary(n, area)
        }
        ShapeSpec::EllipseUnitArea { a } => {
            positive(a, "semi-axis a")?;
            let (big, small) = if a >= 1.0 { (a, 1.0 / a) } else { (1.0 / a, a) };
            let e = (1.0 - (small / big).powi(2)).sqrt();
            let perimeter = 4.0 * big * elliptic_e(e)?;
            let area = PI;
            let ix = PI / (4.0 * a * a);
            let iy = PI * a * a / 4.0;
            GeomSummary {
                area,
                perimeter,
                polar_moment: ix + iy,
                principal_moments: (ix.max(iy), ix.min(iy)),
                b_functional: Some(PI * (a * a + 1.0 / (a * a))),
                isoperimetric_deficit: perimeter * perimeter - 4.0 * PI * area,
            }
        }
        ShapeSpec::FourierBoundary(ref fb) => fourier_quadrature(fb)?.summary,
    };
    Ok(s)
}

fn polygon_summary(n: u32, area: f64) -> GeomSummary {
    let (side, inradius, _) = regular_polygon_dims(n, area);
    let perimeter = n as f64 * side;
    let ic = regular_polygon_polar_moment(n, area);
    GeomSummary {
        area,
        perimeter,
        polar_moment: ic,
        principal_moments: (ic / 2.0, ic / 2.0),
        b_functional: Some(perimeter / inradius),
        isoperimetric_deficit: perimeter * perimeter - 4.0 * PI * area,
    }
}

struct FourierQuad {
    summary: GeomSummary,
}

fn fourier_quadrature(fb: &FourierBoundary) -> Result<FourierQuad> {
    let m = (64 * fb.order()).max(1024);
    let h = 2.0 * PI / m as f64;
    let mut area = 0.0;
    let (mut mx, mut my) = (0.0, 0.0);
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    let mut perimeter = 0.0;
    let mut pts = Vec::with_capacity(m);
    for k in 0..m {
        let th = k as f64 * h;
        let (r, dr) = fb.radius(th);
        ensure(r > 0.0, || format!("Fourier boundary radius non-positive at theta = {th}"))?;
        let (s, c) = th.sin_cos();
        area += 0.5 * r * r;
        mx += r.powi(3) * c / 3.0;
        my += r.powi(3) * s / 3.0;
        let r4 = r.powi(4) / 4.0;
        sxx += r4 * c * c;
        syy += r4 * s * s;
        sxy += r4 * s * c;
        perimeter += (r * r + dr * dr).sqrt();
        let (x, y) = (r * c, r * s);
        let (dx, dy) = (dr * c - r * s, dr * s + r * c);
        pts.push((x, y, dx, dy));
    }
    area *= h;
    perimeter *= h;
    let (xc, yc) = (mx * h / area, my * h / area);
    // Centroidal second moments: int (x - xc)^2 etc.
    let jxx = sxx * h - area * xc * xc;
    let jyy = syy * h - area * yc * yc;
    let jxy = sxy * h - area * xc * yc;
    let mean = 0.5 * (jxx + jyy);
    let rad = (0.25 * (jxx - jyy).powi(2) + jxy * jxy).sqrt();
    let mut b = 0.0;
    let mut star = true;
    for &(x, y, dx, dy) in &pts {
        let den = (x - xc) * dy - (y - yc) * dx;
        if den <= 0.0 {
            star = false;
            break;
        }
        b += (dx * dx + dy * dy) / den;
    }
    Ok(FourierQuad {
        summary: GeomSummary {
            area,
            perimeter,
            polar_moment: jxx + jyy,
            principal_moments: (mean + rad, mean - rad),
            b_functional: if star { Some(b * h) } else { None },
            isoperimetric_deficit: perimeter * perimeter - 4.0 * PI * area,
        },
    })
}

/// B functional, or an error when it is undefined for the shape.
pub fn b_functional(shape: &ShapeSpec) -> Result<f64> {
    geom_summary(shape)?
        .b_functional
        .ok_or_else(|| Error::Unsupported("B functional needs a boundary star-shaped about the centroid".into()))
}

/// A geometric radius as a second-order estimate and by exact quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimatePair {
    pub estimate: f64,
    pub exact: f64,
}

impl EstimatePair {
    pub fn error(&self) -> f64 {
        (self.estimate - self.exact).abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FourierFunctionals {
    /// sqrt(|area| / pi)
    pub area_radius: EstimatePair,
    /// |boundary| / (2 pi)
    pub perimeter_radius: EstimatePair,
    /// (2 I_c / pi)^(1/4)
    pub moment_radius: EstimatePair,
}

/// Moment-radius weight of order n. Order one is a rigid translation to
/// second order, so its weight is reduced by the centroid shift.
pub fn moment_weight(n: usize) -> f64 {
    if n == 1 {
        1.0
    } else {
        3.0
    }
}

/// Exact area over pi for a Fourier boundary.
pub fn fourier_area_over_pi(fb: &FourierBoundary) -> f64 {
    let s: f64 = (1..=fb.order()).map(|n| {
        let (a, b) = fb.coeff(n);
        a * a + b * b
    }).sum();
    (1.0 + fb.a0).powi(2) + 0.5 * s
}

pub fn fourier_functionals(fb: &FourierBoundary) -> Result<FourierFunctionals> {
    let exact = geom_summary(&ShapeSpec::FourierBoundary(fb.clone()))?;
    let (mut s_area, mut s_per, mut s_mom) = (0.0, 0.0, 0.0);
    for n in 1..=fb.order() {
        let (a, b) = fb.coeff(n);
        let q = a * a + b * b;
        s_area += q;
        s_per += (n * n) as f64 * q;
        s_mom += moment_weight(n) * q;
    }
    let base = 1.0 + fb.a0;
    Ok(FourierFunctionals {
        area_radius: EstimatePair { estimate: base + 0.25 * s_area, exact: (exact.area / PI).sqrt() },
        perimeter_radius: EstimatePair { estimate: base + 0.25 * s_per, exact: exact.perimeter / (2.0 * PI) },
        moment_radius: EstimatePair {
            estimate: base + 0.25 * s_mom,
            exact: (2.0 * exact.polar_moment / PI).powf(0.25),
        },
    })
}

/// Fourier coefficients, to second order in a - 1, of the unit-area ellipse
/// boundary x^2/a^2 + a^2 y^2 = 1.
pub fn ellipse_boundary_expansion(a: f64) -> FourierBoundary {
    let d = a - 1.0;
    FourierBoundary::new(-0.25 * d * d, vec![0.0, d - 0.5 * d * d, 0.0, 0.75 * d * d], vec![])
}

/// Exact polar radius of the unit-area ellipse.
pub fn ellipse_radius(a: f64, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    1.0 / (c * c / (a * a) + a * a * s * s).sqrt()
}

/// Fraenkel asymmetry |Omega \ B| / |Omega| of the unit-area ellipse against the
/// concentric unit disk.
pub fn fraenkel_alpha_ellipse(a: f64) -> f64 {
    2.0 / PI * ((a - 1.0 / a) / 2.0).atan()
}

/// Fraenkel asymmetry of a regular n-gon against the equal-area disk at its centre.
pub fn fraenkel_alpha_regular_polygon(n: u32) -> Result<f64> {
    ensure(n >= 3, || format!("polygon needs n >= 3, got {n}"))?;
    let (side, rho, _) = regular_polygon_dims(n, PI);
    let half_chord = (1.0 - rho * rho).sqrt();
    ensure(half_chord <= 0.5 * side, || format!("disk chords overlap for n = {n}"))?;
    let segment = rho.acos() - rho * half_chord;
    Ok(n as f64 * segment / PI)
}

/// Tabulated 2 alpha for the regular 3-, 4- and 6-gon.
pub fn fraenkel_alpha_fixture(n: u32) -> Result<f64> {
    let two_alpha = match n {
        3 => 0.3649426110,
        4 => 0.1810919377,
        6 => 0.0744657545,
        _ => return Err(Error::Unsupported(format!("no Fraenkel fixture for n = {n}"))),
    };
    Ok(0.5 * two_alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolygonRow {
    pub n: u32,
    /// |boundary|^2 / (4 pi |area|) - 1
    pub deficit_ratio: f64,
    /// sqrt(2 pi I_c) / |area| - 1
    pub moment_ratio: f64,
    /// sqrt(1 + 2 alpha^2) - 1
    pub asymmetry_bound: f64,
    pub two_alpha: f64,
}

pub fn polygon_table(n: u32) -> Result<PolygonRow> {
    if !matches!(n, 3 | 4 | 6) {
        return Err(Error::Unsupported(format!("polygon table covers n in {{3, 4, 6}}, got {n}")));
    }
    let g = geom_summary(&ShapeSpec::RegularPolygon { n, area: PI })?;
    let alpha = fraenkel_alpha_regular_polygon(n)?;
    Ok(PolygonRow {
        n,
        deficit_ratio: g.perimeter.powi(2) / (4.0 * PI * g.area) - 1.0,
        moment_ratio: (2.0 * PI * g.polar_moment).sqrt() / g.area - 1.0,
        asymmetry_bound: (1.0 + 2.0 * alpha * alpha).sqrt() - 1.0,
        two_alpha: 2.0 * alpha,
    })
}
