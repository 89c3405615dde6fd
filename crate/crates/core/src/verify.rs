//! Inequality harness: sweeps shapes and slip lengths, evaluates every
//! inequality as a signed margin and collects the margins in reports.
//!
//! Margins are relative to the reference side of each inequality, so a
//! positive margin means the inequality holds. Grid cells are evaluated with
//! an order-preserving parallel map, so reports are reproducible exactly.

use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::disk::{disk_spectrum, lambda1_disk, q_steady_disk};
use crate::ellipse::{j0_first_zero, lambda1_ellipse_pert, q_steady_ellipse_exact_b0, q_steady_ellipse_pert};
use crate::error::{ensure, Error, Result};
use crate::fem::{fem_solve, FemShape};
use crate::geomfn::{geom_summary, regular_polygon_dims, ShapeSpec};
use crate::rect::{
    lambda1_rect, lambda_lb, lambda_ub, mu, mu_bounds, mu_hat_via_phi, phi1, phi1_inverse, phi2, q_steady_rect,
    quartic_coefficients, quartic_rstar, rect_spectrum, variational_bound,
};
use crate::rootkit::{erf, integrate_to_infinity, sine_integral, solve_bracketed, Tol};
use crate::tri::{lambda1_tri, q_steady_tri, tri_first_mode};

/// Inequalities hold when the margin is at least `-MARGIN_TOL`; strict ones
/// need a margin above `MARGIN_TOL`.
pub const MARGIN_TOL: f64 = 1e-10;

/// Coarse ring count for finite-element evaluations inside sweeps.
pub const SWEEP_RINGS: usize = 16;

/// Terms of the rectangle steady series used by the harness.
const RECT_TERMS: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ReportClass {
    /// A proved statement; a failing point fails the report.
    Theorem,
    /// A conjecture or open question; the report documents evidence and always passes.
    Exploratory,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Sense {
    Strict,
    NonStrict,
    /// An equality locus: |margin| must not exceed `tol`.
    Equality { tol: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckPoint {
    pub label: String,
    pub beta: f64,
    /// Shape parameter or sample abscissa.
    pub param: f64,
    pub margin: f64,
    pub sense: Sense,
}

impl CheckPoint {
    pub fn new(label: impl Into<String>, beta: f64, param: f64, margin: f64, sense: Sense) -> Self {
        CheckPoint { label: label.into(), beta, param, margin, sense }
    }

    pub fn holds(&self) -> bool {
        match self.sense {
            Sense::Strict => self.margin > MARGIN_TOL,
            Sense::NonStrict => self.margin >= -MARGIN_TOL,
            Sense::Equality { tol } => self.margin.abs() <= tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub id: String,
    pub class: ReportClass,
    pub points: Vec<CheckPoint>,
    /// Smallest margin over the inequality points (equality loci excluded).
    pub min_margin: f64,
    /// Index of the point attaining `min_margin`.
    pub worst_point: Option<usize>,
    /// Largest |margin| over the equality loci.
    pub max_equality_residual: f64,
    /// Every point satisfies its sense.
    pub all_hold: bool,
    pub pass: bool,
    pub notes: Vec<String>,
}

impl VerifyReport {
    pub fn new(id: impl Into<String>, class: ReportClass, points: Vec<CheckPoint>, notes: Vec<String>) -> Self {
        let mut min_margin = f64::INFINITY;
        let mut worst_point = None;
        let mut max_equality_residual: f64 = 0.0;
        for (i, p) in points.iter().enumerate() {
            match p.sense {
                Sense::Equality { .. } => max_equality_residual = max_equality_residual.max(p.margin.abs()),
                _ => {
                    // NaN margins must surface as the worst point.
                    if p.margin.is_nan() || p.margin < min_margin {
                        min_margin = p.margin;
                        worst_point = Some(i);
                        if p.margin.is_nan() {
                            break;
                        }
                    }
                }
            }
        }
        let all_hold = !points.is_empty() && points.iter().all(CheckPoint::holds);
        let pass = class == ReportClass::Exploratory || all_hold;
        VerifyReport { id: id.into(), class, points, min_margin, worst_point, max_equality_residual, all_hold, pass, notes }
    }

    /// Points whose sense is violated.
    pub fn failures(&self) -> impl Iterator<Item = &CheckPoint> {
        self.points.iter().filter(|p| !p.holds())
    }

    /// Column-oriented JSON: id, grid arrays, margins, summary fields.
    pub fn to_json(&self) -> serde_json::Value {
        let col = |f: &dyn Fn(&CheckPoint) -> serde_json::Value| -> Vec<serde_json::Value> { self.points.iter().map(f).collect() };
        serde_json::json!({
            "id": self.id,
            "class": self.class,
            "labels": col(&|p| p.label.clone().into()),
            "betas": col(&|p| num(p.beta)),
            "params": col(&|p| num(p.param)),
            "margins": col(&|p| num(p.margin)),
            "senses": col(&|p| sense_name(p.sense).into()),
            "min_margin": num(self.min_margin),
            "worst_point": self.worst_point,
            "max_equality_residual": num(self.max_equality_residual),
            "all_hold": self.all_hold,
            "pass": self.pass,
            "notes": self.notes,
        })
    }

    /// Flat records matching `CSV_HEADER`, one per point.
    pub fn csv_records(&self) -> Vec<[String; 7]> {
        self.points
            .iter()
            .map(|p| {
                [
                    self.id.clone(),
                    p.label.clone(),
                    format_sig(p.beta),
                    format_sig(p.param),
                    format_sig(p.margin),
                    sense_name(p.sense),
                    p.holds().to_string(),
                ]
            })
            .collect()
    }
}

pub const CSV_HEADER: [&str; 7] = ["id", "label", "beta", "param", "margin", "sense", "holds"];

fn sense_name(s: Sense) -> String {
    match s {
        Sense::Strict => "strict".into(),
        Sense::NonStrict => "nonstrict".into(),
        Sense::Equality { tol } => format!("equality({})", format_sig(tol)),
    }
}

/// Finite values rounded to 12 significant digits; non-finite values become null.
fn num(x: f64) -> serde_json::Value {
    if x.is_finite() {
        serde_json::Value::from(round_sig(x))
    } else {
        serde_json::Value::Null
    }
}

/// Rounds to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Shortest round-trip text of `x` after rounding to 12 significant digits,
/// with '.' as the decimal separator.
pub fn format_sig(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let y = round_sig(x);
    if y == 0.0 {
        return "0".into();
    }
    let a = y.abs();
    if !(1e-6..1e15).contains(&a) {
        format!("{y:e}")
    } else {
        format!("{y}")
    }
}

/// Slip lengths and shape parameters for a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepGrid {
    pub betas: Vec<f64>,
    pub params: Vec<f64>,
    pub area: f64,
}

impl SweepGrid {
    pub fn new(betas: Vec<f64>, params: Vec<f64>, area: f64) -> Result<SweepGrid> {
        ensure(!betas.is_empty(), || "sweep needs at least one slip length".into())?;
        ensure(betas.iter().all(|b| b.is_finite() && *b >= 0.0), || "slip lengths must be finite and non-negative".into())?;
        ensure(params.iter().all(|p| p.is_finite()), || "shape parameters must be finite".into())?;
        ensure(area.is_finite() && area > 0.0, || format!("area must be positive, got {area}"))?;
        Ok(SweepGrid { betas, params, area })
    }

    /// `n` slip lengths log-spaced over [lo, hi] at area pi.
    pub fn log_betas(lo: f64, hi: f64, n: usize) -> Result<SweepGrid> {
        SweepGrid::new(log_space(lo, hi, n)?, vec![], PI)
    }
}

pub fn log_space(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    ensure(lo > 0.0 && hi >= lo && n >= 1, || format!("bad log grid [{lo}, {hi}] with {n} points"))?;
    if n == 1 {
        return Ok(vec![lo]);
    }
    let (l0, l1) = (lo.ln(), hi.ln());
    Ok((0..n).map(|i| (l0 + (l1 - l0) * i as f64 / (n - 1) as f64).exp()).collect())
}

pub fn lin_space(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    ensure(n >= 2 && hi > lo, || format!("bad linear grid [{lo}, {hi}] with {n} points"))?;
    Ok((0..n).map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect())
}

/// Cross-sections compared against the equal-area disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SweepShape {
    Disk,
    /// Rectangle with side ratio `aspect` >= 1.
    Rectangle { aspect: f64 },
    Triangle,
    /// Ellipse with semi-axis ratio a^2, second-order perturbation values.
    EllipsePert { a: f64 },
    /// Ellipse with semi-axis ratio a^2, finite-element values.
    Ellipse { a: f64 },
    /// Regular n-gon, finite-element values.
    Polygon { n: u32 },
}

/// Steady flux and fundamental eigenvalue at one slip length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShapeValues {
    pub q_steady: f64,
    pub lambda1: f64,
    pub perimeter: f64,
}

impl SweepShape {
    pub fn label(&self) -> String {
        match *self {
            SweepShape::Disk => "disk".into(),
            SweepShape::Rectangle { aspect } if aspect == 1.0 => "square".into(),
            SweepShape::Rectangle { aspect } => format!("rect-1:{}", format_sig(aspect)),
            SweepShape::Triangle => "triangle".into(),
            SweepShape::EllipsePert { a } => format!("ellipse-pert-a{}", format_sig(a)),
            SweepShape::Ellipse { a } => format!("ellipse-a{}", format_sig(a)),
            SweepShape::Polygon { n } => format!("ngon-{n}"),
        }
    }

    pub fn evaluate(&self, area: f64, beta: f64) -> Result<ShapeValues> {
        ensure(area.is_finite() && area > 0.0, || format!("area must be positive, got {area}"))?;
        // Length scale relative to area pi; ellipse and FEM values scale from there.
        let s = (area / PI).sqrt();
        match *self {
            SweepShape::Disk => Ok(ShapeValues {
                q_steady: q_steady_disk(s, beta, 1.0)?,
                lambda1: lambda1_disk(s, beta)?,
                perimeter: 2.0 * PI * s,
            }),
            SweepShape::Rectangle { aspect } => {
                ensure(aspect >= 1.0, || format!("aspect must be at least 1, got {aspect}"))?;
                let a = 0.5 * (area * aspect).sqrt();
                let b = a / aspect;
                Ok(ShapeValues {
                    q_steady: q_steady_rect(b, a, beta, 1.0, RECT_TERMS)?.value,
                    lambda1: lambda1_rect(a, b, beta)?,
                    perimeter: 4.0 * (a + b),
                })
            }
            SweepShape::Triangle => {
                let a = (area / 3f64.sqrt()).sqrt();
                Ok(ShapeValues { q_steady: q_steady_tri(a, beta, 1.0)?, lambda1: lambda1_tri(a, beta)?, perimeter: 6.0 * a })
            }
            SweepShape::EllipsePert { a } => {
                let bs = beta / s;
                let p = geom_summary(&ShapeSpec::EllipseUnitArea { a })?.perimeter;
                Ok(ShapeValues {
                    q_steady: s.powi(4) * q_steady_ellipse_pert(a, bs, 1.0)?.value,
                    lambda1: lambda1_ellipse_pert(a, bs)?.value / (s * s),
                    perimeter: s * p,
                })
            }
            SweepShape::Ellipse { a } => {
                let f = fem_solve(FemShape::EllipseUnitArea { a }, beta / s, 1.0, SWEEP_RINGS)?;
                let p = geom_summary(&ShapeSpec::EllipseUnitArea { a })?.perimeter;
                Ok(ShapeValues { q_steady: s.powi(4) * f.q_steady, lambda1: f.lambda1 / (s * s), perimeter: s * p })
            }
            SweepShape::Polygon { n } => {
                let f = fem_solve(FemShape::RegularPolygon { n, area }, beta, 1.0, SWEEP_RINGS)?;
                Ok(ShapeValues { q_steady: f.q_steady, lambda1: f.lambda1, perimeter: n as f64 * regular_polygon_dims(n, area).0 })
            }
        }
    }
}

/// The shape set of the isoperimetric sweeps.
pub fn default_sweep_shapes() -> Vec<SweepShape> {
    vec![
        SweepShape::Disk,
        SweepShape::Rectangle { aspect: 1.0 },
        SweepShape::Rectangle { aspect: 4.0 },
        SweepShape::Triangle,
        SweepShape::EllipsePert { a: 1.15 },
        SweepShape::Ellipse { a: 1.2 },
        SweepShape::Polygon { n: 3 },
        SweepShape::Polygon { n: 4 },
        SweepShape::Polygon { n: 6 },
    ]
}

fn disk_sense(shape: &SweepShape) -> Sense {
    if *shape == SweepShape::Disk {
        Sense::Equality { tol: 1e-12 }
    } else {
        Sense::Strict
    }
}

/// Values for every (shape, beta) cell and for the disk at each beta.
fn sweep_values(shapes: &[SweepShape], grid: &SweepGrid) -> Result<(Vec<(SweepShape, f64, ShapeValues)>, Vec<ShapeValues>)> {
    let cells: Vec<(SweepShape, f64)> = shapes.iter().flat_map(|s| grid.betas.iter().map(move |b| (*s, *b))).collect();
    let vals = cells
        .par_iter()
        .map(|(s, b)| Ok((*s, *b, s.evaluate(grid.area, *b)?)))
        .collect::<Result<Vec<_>>>()?;
    let disk = grid.betas.iter().map(|b| SweepShape::Disk.evaluate(grid.area, *b)).collect::<Result<Vec<_>>>()?;
    Ok((vals, disk))
}

/// Steady flux never exceeds the equal-area disk's: margin (Q_disk - Q) / Q_disk.
pub fn check_theorem1(shapes: &[SweepShape], grid: &SweepGrid) -> Result<VerifyReport> {
    let (vals, disk) = sweep_values(shapes, grid)?;
    let nb = grid.betas.len();
    let points = vals
        .iter()
        .enumerate()
        .map(|(i, (s, b, v))| {
            let d = disk[i % nb].q_steady;
            CheckPoint::new(s.label(), *b, grid.area, (d - v.q_steady) / d, disk_sense(s))
        })
        .collect();
    Ok(VerifyReport::new("theorem1", ReportClass::Theorem, points, vec![]))
}

/// The fundamental eigenvalue is at least the equal-area disk's: margin (lambda1 - lambda1_disk) / lambda1_disk.
pub fn check_theorem2(shapes: &[SweepShape], grid: &SweepGrid) -> Result<VerifyReport> {
    let (vals, disk) = sweep_values(shapes, grid)?;
    let nb = grid.betas.len();
    let points = vals
        .iter()
        .enumerate()
        .map(|(i, (s, b, v))| {
            let d = disk[i % nb].lambda1;
            CheckPoint::new(s.label(), *b, grid.area, (v.lambda1 - d) / d, disk_sense(s))
        })
        .collect();
    Ok(VerifyReport::new("theorem2", ReportClass::Theorem, points, vec![]))
}

/// Among rectangles (-h r, h r) x (-h/r, h/r) the square minimises lambda1.
/// `grid.params` holds r values in (0, 1]. Checked by direct roots, through
/// the phi1 / phi2 inversion with its log-convexity consequence, and against
/// the variational upper bound.
pub fn check_theorem3(h: f64, grid: &SweepGrid) -> Result<VerifyReport> {
    ensure(h.is_finite() && h > 0.0, || format!("half-side must be positive, got {h}"))?;
    ensure(grid.params.iter().all(|r| *r > 0.0 && *r <= 1.0), || "r values must lie in (0, 1]".into())?;
    let cells: Vec<(f64, f64)> = grid.betas.iter().flat_map(|b| grid.params.iter().map(move |r| (*b, *r))).collect();
    let chunks = cells.par_iter().map(|&(b, r)| theorem3_cell(h, b, r)).collect::<Result<Vec<_>>>()?;
    let points = chunks.into_iter().flatten().collect();
    Ok(VerifyReport::new(format!("theorem3-h{}", format_sig(h)), ReportClass::Theorem, points, vec![]))
}

fn theorem3_cell(h: f64, beta: f64, r: f64) -> Result<Vec<CheckPoint>> {
    let at_square = r == 1.0;
    let eq = |tol: f64, strict: Sense| if at_square { Sense::Equality { tol } } else { strict };
    let mut out = Vec::with_capacity(7);
    let lam_sq = lambda1_rect(h, h, beta)?;
    let lam = lambda1_rect(h * r, h / r, beta)?;
    out.push(CheckPoint::new("direct", beta, r, (lam - lam_sq) / lam_sq, eq(1e-12, Sense::Strict)));
    let v = variational_bound(h, r, beta)?;
    out.push(CheckPoint::new("variational", beta, r, (v - lam) / lam, eq(1e-10, Sense::NonStrict)));
    if beta == 0.0 {
        let closed = PI * PI / (4.0 * h * h) * (r * r + 1.0 / (r * r));
        out.push(CheckPoint::new("closed-form", beta, r, (lam - closed) / closed, Sense::Equality { tol: 1e-12 }));
        return Ok(out);
    }
    let mx = mu_hat_via_phi(h * r, beta)?;
    let my = mu_hat_via_phi(h / r, beta)?;
    let ms = mu_hat_via_phi(h, beta)?;
    // The inversion route must agree with the direct roots.
    let agree = [(mx, h * r), (my, h / r), (ms, h)]
        .iter()
        .map(|&(m, c)| Ok((m / beta - mu(c, beta)?).abs() / mu(c, beta)?))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    out.push(CheckPoint::new("phi-route", beta, r, 1e-9 - agree, Sense::NonStrict));
    let prod = phi2(mx * mx) * phi2(my * my);
    let target = phi2(ms * ms).powi(2);
    out.push(CheckPoint::new("phi2-product", beta, r, (prod - target).abs() / target, Sense::Equality { tol: 1e-12 }));
    let goal = (mx * mx + my * my - 2.0 * ms * ms) / (2.0 * ms * ms);
    out.push(CheckPoint::new("goal", beta, r, goal, eq(1e-12, Sense::Strict)));
    let logcvx = (0.5 * (mx + my) - ms) / ms;
    out.push(CheckPoint::new("log-convexity", beta, r, logcvx, eq(1e-12, Sense::Strict)));
    Ok(out)
}

/// Algebraic root bounds, their minimisation at the square, and the quartic
/// for the crossing r* of lambda_lb with lambda_ub at the square.
pub fn check_rect_bounds(h: f64, grid: &SweepGrid) -> Result<VerifyReport> {
    ensure(h.is_finite() && h > 0.0, || format!("half-side must be positive, got {h}"))?;
    let mut points = Vec::new();
    for &beta in &grid.betas {
        let lb1 = lambda_lb(h, 1.0, beta)?;
        let ub1 = lambda_ub(h, 1.0, beta)?;
        for &r in &grid.params {
            for c in [h * r, h / r] {
                let m = mu(c, beta)?;
                let (lo, hi) = mu_bounds(c, beta)?;
                let sense = if beta == 0.0 { Sense::Equality { tol: 1e-12 } } else { Sense::Strict };
                points.push(CheckPoint::new("mu-lower", beta, c, (m - lo) / m, sense));
                points.push(CheckPoint::new("mu-upper", beta, c, (hi - m) / m, sense));
            }
            let sense = if r == 1.0 { Sense::Equality { tol: 1e-12 } } else { Sense::Strict };
            points.push(CheckPoint::new("lambda-lb-min", beta, r, (lambda_lb(h, r, beta)? - lb1) / lb1, sense));
            points.push(CheckPoint::new("lambda-ub-min", beta, r, (lambda_ub(h, r, beta)? - ub1) / ub1, sense));
        }
        if beta > 0.0 {
            let y = ub1 * h * h;
            let q = quartic_rstar(h, beta, y)?;
            let (a1, a2) = quartic_coefficients(h, beta, y);
            for rr in [q.r_minus, q.r_plus] {
                let lam = lambda_lb(h, rr, beta)?;
                let res = (lam - ub1).abs() / ub1;
                points.push(CheckPoint::new("quartic-lambda", beta, rr, res, Sense::Equality { tol: 1e-9 }));
                let poly = rr.powi(4) + a1 * rr.powi(3) + a2 * rr * rr + a1 * rr + 1.0;
                points.push(CheckPoint::new("quartic-residual", beta, rr, poly, Sense::Equality { tol: 1e-9 }));
            }
            points.push(CheckPoint::new("quartic-product", beta, q.r_minus, q.r_minus * q.r_plus - 1.0, Sense::Equality { tol: 1e-12 }));
        }
    }
    Ok(VerifyReport::new(format!("rect-bounds-h{}", format_sig(h)), ReportClass::Theorem, points, vec![]))
}

/// Square against triangle at equal area: Q_square > Q_triangle and
/// lambda1_square < lambda1_triangle, with the disk below both eigenvalues.
pub fn check_polygon_ordering(grid: &SweepGrid) -> Result<VerifyReport> {
    let mut points = Vec::new();
    for &beta in &grid.betas {
        let sq = SweepShape::Rectangle { aspect: 1.0 }.evaluate(grid.area, beta)?;
        let tr = SweepShape::Triangle.evaluate(grid.area, beta)?;
        let dk = SweepShape::Disk.evaluate(grid.area, beta)?;
        points.push(CheckPoint::new("q-square-triangle", beta, grid.area, (sq.q_steady - tr.q_steady) / sq.q_steady, Sense::Strict));
        points.push(CheckPoint::new("lambda-triangle-square", beta, grid.area, (tr.lambda1 - sq.lambda1) / tr.lambda1, Sense::Strict));
        points.push(CheckPoint::new("lambda-square-disk", beta, grid.area, (sq.lambda1 - dk.lambda1) / sq.lambda1, Sense::Strict));
    }
    Ok(VerifyReport::new("polygon-ordering", ReportClass::Theorem, points, vec![]))
}

/// beta lambda1 approaches |boundary| / |area| for large beta: margin
/// `tol` minus the relative deviation.
pub fn check_robin_asymptote(beta: f64, area: f64, tol: f64) -> Result<VerifyReport> {
    let shapes = [SweepShape::Disk, SweepShape::Rectangle { aspect: 1.0 }, SweepShape::Triangle, SweepShape::Rectangle { aspect: 2.0 }];
    let mut points = Vec::new();
    for s in shapes {
        let v = s.evaluate(area, beta)?;
        let dev = (beta * v.lambda1 * area / v.perimeter - 1.0).abs();
        points.push(CheckPoint::new(s.label(), beta, area, tol - dev, Sense::NonStrict));
    }
    Ok(VerifyReport::new("robin-asymptote", ReportClass::Theorem, points, vec![]))
}

/// No-slip quantities of a fixture shape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoSlipValues {
    pub q_steady: f64,
    pub lambda1: f64,
    /// First-mode weight (int phi_1)^2 / (lambda_1 int phi_1^2).
    pub first_mode_weight: f64,
}

/// Exact where available; regular n-gons with n >= 5 and ellipses other
/// than through the flux use finite elements.
pub fn no_slip_values(shape: &ShapeSpec) -> Result<NoSlipValues> {
    match *shape {
        ShapeSpec::Disk { radius } => {
            let m = disk_spectrum(radius, 0.0, 1)?[0];
            Ok(NoSlipValues { q_steady: q_steady_disk(radius, 0.0, 1.0)?, lambda1: m.lambda, first_mode_weight: m.weight })
        }
        ShapeSpec::Rectangle { a, b } => {
            let m = rect_spectrum(a, b, 0.0, 1, 1)?[0];
            Ok(NoSlipValues { q_steady: q_steady_rect(a, b, 0.0, 1.0, RECT_TERMS)?.value, lambda1: m.lambda, first_mode_weight: m.weight })
        }
        ShapeSpec::EquilateralTriangle { a } => {
            let m = tri_first_mode(a, 0.0)?;
            Ok(NoSlipValues { q_steady: q_steady_tri(a, 0.0, 1.0)?, lambda1: m.lambda, first_mode_weight: m.weight })
        }
        ShapeSpec::EllipseUnitArea { a } => {
            let f = fem_solve(FemShape::EllipseUnitArea { a }, 0.0, 1.0, 2 * SWEEP_RINGS)?;
            Ok(NoSlipValues { q_steady: q_steady_ellipse_exact_b0(a)?, lambda1: f.lambda1, first_mode_weight: f.first_mode_weight })
        }
        ShapeSpec::RegularPolygon { n, area } => {
            let f = fem_solve(FemShape::RegularPolygon { n, area }, 0.0, 1.0, 2 * SWEEP_RINGS)?;
            Ok(NoSlipValues { q_steady: f.q_steady, lambda1: f.lambda1, first_mode_weight: f.first_mode_weight })
        }
        ShapeSpec::FourierBoundary(_) => Err(Error::Unsupported("no-slip values need a closed-form or meshed shape".into())),
    }
}

/// The no-slip fixture set at area pi.
pub fn classical_shapes() -> Vec<ShapeSpec> {
    let h = PI.sqrt() / 2.0;
    vec![
        ShapeSpec::Disk { radius: 1.0 },
        ShapeSpec::Rectangle { a: h, b: h },
        ShapeSpec::Rectangle { a: h * 2f64.sqrt(), b: h / 2f64.sqrt() },
        ShapeSpec::Rectangle { a: 2.0 * h, b: h / 2.0 },
        ShapeSpec::EquilateralTriangle { a: (PI / 3f64.sqrt()).sqrt() },
        ShapeSpec::EllipseUnitArea { a: 1.3 },
        ShapeSpec::EllipseUnitArea { a: 2.0 },
        ShapeSpec::RegularPolygon { n: 6, area: PI },
    ]
}

fn shape_label(s: &ShapeSpec) -> String {
    match s {
        ShapeSpec::Disk { radius } => format!("disk-r{}", format_sig(*radius)),
        ShapeSpec::Rectangle { a, b } => format!("rect-{}x{}", format_sig(2.0 * a), format_sig(2.0 * b)),
        ShapeSpec::EquilateralTriangle { a } => format!("triangle-a{}", format_sig(*a)),
        ShapeSpec::EllipseUnitArea { a } => format!("ellipse-a{}", format_sig(*a)),
        ShapeSpec::RegularPolygon { n, area } => format!("ngon-{n}-area{}", format_sig(*area)),
        ShapeSpec::FourierBoundary(_) => "fourier".into(),
    }
}

/// Classical no-slip inequalities on the fixture set, plus the tangent
/// bounds on (0, pi/2) at 1000 points.
pub fn check_classical_b0(shapes: &[ShapeSpec]) -> Result<VerifyReport> {
    let j = j0_first_zero();
    let j4 = j.powi(4);
    let rows = shapes.par_iter().map(|s| Ok((s, geom_summary(s)?, no_slip_values(s)?))).collect::<Result<Vec<_>>>()?;
    let mut points = Vec::new();
    for (shape, g, v) in rows {
        let label = |what: &str| format!("{what}:{}", shape_label(shape));
        let disk = matches!(shape, ShapeSpec::Disk { .. });
        let ellipse = disk || matches!(shape, ShapeSpec::EllipseUnitArea { .. });
        let at = |is_eq: bool, tol: f64, other: Sense| if is_eq { Sense::Equality { tol } } else { other };
        let a = g.area;
        let (imax, imin) = g.principal_moments;
        let ic = g.polar_moment;
        // Q lambda^2 >= (pi/8) j^4, equality for the disk.
        let kj = v.q_steady * v.lambda1 * v.lambda1 / (PI / 8.0 * j4) - 1.0;
        points.push(CheckPoint::new(label("torsion-eigenvalue"), 0.0, a, kj, at(disk, 1e-8, Sense::Strict)));
        // Q_1 >= 4 pi / lambda^2, equality for the disk.
        let pr = v.first_mode_weight * v.lambda1 * v.lambda1 / (4.0 * PI) - 1.0;
        points.push(CheckPoint::new(label("first-mode-lower"), 0.0, a, pr, at(disk, 1e-8, Sense::NonStrict)));
        // Q <= I_max I_min / (I_max + I_min), equality for ellipses.
        let nic = 1.0 - v.q_steady * (imax + imin) / (imax * imin);
        points.push(CheckPoint::new(label("principal-moment"), 0.0, a, nic, at(ellipse, 1e-6, Sense::Strict)));
        // Q <= I_c / 4, equality for the disk.
        points.push(CheckPoint::new(label("polar-moment"), 0.0, a, 1.0 - 4.0 * v.q_steady / ic, at(disk, 1e-10, Sense::Strict)));
        // (|area|/pi)^2 <= 2 I_c / pi <= (|boundary| / 2 pi)^4, equality for the disk.
        let mid = 2.0 * ic / PI;
        points.push(CheckPoint::new(label("area-moment"), 0.0, a, mid / (a / PI).powi(2) - 1.0, at(disk, 1e-12, Sense::Strict)));
        let outer = (g.perimeter / (2.0 * PI)).powi(4);
        points.push(CheckPoint::new(label("moment-perimeter"), 0.0, a, outer / mid - 1.0, at(disk, 1e-12, Sense::Strict)));
        if let Some(b) = g.b_functional {
            // Q >= |area|^2 / (4 B), equality for ellipses.
            let qb = 4.0 * b * v.q_steady / (a * a) - 1.0;
            points.push(CheckPoint::new(label("b-torsion"), 0.0, a, qb, at(ellipse, 1e-6, Sense::NonStrict)));
            // lambda1 <= j^2 B / (2 |area|), equality for the disk.
            let lb = 1.0 - 2.0 * a * v.lambda1 / (j * j * b);
            points.push(CheckPoint::new(label("b-eigenvalue"), 0.0, a, lb, at(disk, 1e-8, Sense::NonStrict)));
            // Q_1 <= 4 B / lambda^2.
            let q1b = 1.0 - v.first_mode_weight * v.lambda1 * v.lambda1 / (4.0 * b);
            points.push(CheckPoint::new(label("b-first-mode"), 0.0, a, q1b, Sense::NonStrict));
        }
        points.push(CheckPoint::new(label("deficit"), 0.0, a, deficit_margin(a, g.perimeter, v.q_steady), at(disk, 1e-12, Sense::NonStrict)));
    }
    for i in 1..=1000 {
        let x = FRAC_PI_2 * i as f64 / 1001.0;
        let t = x.tan();
        let d = PI * PI - 4.0 * x * x;
        points.push(CheckPoint::new("tan-lower", 0.0, x, (t - 8.0 * x / d) / t, Sense::Strict));
        points.push(CheckPoint::new("tan-upper", 0.0, x, (x * PI * PI / d - t) / t, Sense::Strict));
    }
    Ok(VerifyReport::new("classical-b0", ReportClass::Theorem, points, vec![]))
}

/// Lower bound on the no-slip flux from the isoperimetric deficit, with
/// Psi^2 = 1 - 4 pi |area| / |boundary|^2; Psi = 0 gives the disk value.
pub fn deficit_lower_bound(area: f64, perimeter: f64) -> Result<f64> {
    let ratio = 1.0 - 4.0 * PI * area / (perimeter * perimeter);
    ensure(ratio > -1e-12 && ratio < 1.0, || format!("deficit ratio {ratio} outside [0, 1)"))?;
    let base = area * area / (8.0 * PI);
    if ratio <= 0.0 {
        return Ok(base);
    }
    let psi = ratio.sqrt();
    let one = 1.0 - ratio;
    Ok(base * (1.0 - 2.0 * ratio / one - 4.0 * ratio * ratio / (one * one) * psi.ln()))
}

fn deficit_margin(area: f64, perimeter: f64, q: f64) -> f64 {
    match deficit_lower_bound(area, perimeter) {
        Ok(lb) => (q - lb) / q,
        Err(_) => f64::NAN,
    }
}

/// Deficit bound on its own: margin (Q - bound) / Q.
pub fn check_deficit_bound(shapes: &[ShapeSpec]) -> Result<VerifyReport> {
    let mut points = Vec::new();
    for s in shapes {
        let g = geom_summary(s)?;
        let q = no_slip_values(s)?.q_steady;
        let sense = if matches!(s, ShapeSpec::Disk { .. }) { Sense::Equality { tol: 1e-12 } } else { Sense::Strict };
        points.push(CheckPoint::new(shape_label(s), 0.0, g.area, deficit_margin(g.area, g.perimeter, q), sense));
    }
    Ok(VerifyReport::new("deficit-bound", ReportClass::Theorem, points, vec![]))
}

/// k(r, t) = exp(-r t) + exp(-t / r) - 2 exp(-t).
pub fn cm_kernel(r: f64, t: f64) -> f64 {
    (-r * t).exp() + (-t / r).exp() - 2.0 * (-t).exp()
}

/// The sign change of k(r, .) inside (1/2, 1).
pub fn kernel_root(r: f64) -> Result<f64> {
    Ok(solve_bracketed(|t| cm_kernel(r, t), 0.5, 1.0, Tol::default())?.x)
}

/// phi1 through its Laplace representation with kernel Si(t).
pub fn phi1_laplace(z: f64) -> Result<f64> {
    integrate_to_infinity(|t| (-z * t).exp() * sine_integral(t), 0.0, 1e-12)
}

/// phi2 through its Laplace representation with kernel (1/2) sqrt(pi / t) erf(sqrt t).
pub fn phi2_laplace(z: f64) -> Result<f64> {
    integrate_to_infinity(
        |t| {
            let w = if t < 1e-12 { 1.0 } else { 0.5 * (PI / t).sqrt() * erf(t.sqrt()) };
            (-z * t).exp() * w
        },
        0.0,
        1e-12,
    )
}

/// k-th derivative by central differences at steps h and h/2, combined by Richardson.
pub fn fd_derivative<F: Fn(f64) -> f64>(f: F, x: f64, k: u32, h: f64) -> f64 {
    let diff = |h: f64| {
        let mut s = 0.0;
        let mut binom = 1.0;
        for i in 0..=k {
            let off = (0.5 * k as f64 - i as f64) * h;
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            s += sign * binom * f(x + off);
            binom = binom * (k - i) as f64 / (i + 1) as f64;
        }
        s / h.powi(k as i32)
    };
    (4.0 * diff(0.5 * h) - diff(h)) / 3.0
}

fn log_convexity_margin<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, c: f64) -> f64 {
    // (c - b) log f(a) + (b - a) log f(c) - (c - a) log f(b), scaled by the spread.
    ((c - b) * f(a).ln() + (b - a) * f(c).ln() - (c - a) * f(b).ln()) / ((c - a) * (c - b) * (b - a))
}

/// Minimises X + Y subject to zeta(X) + zeta(Y) = 2 zeta(Z), zeta = log phi2,
/// by golden-section search over log X. Returns the minimiser (X, Y).
pub fn lemma2_minimiser(z: f64) -> Result<(f64, f64)> {
    ensure(z > 0.0, || "Z must be positive".into())?;
    let target = 2.0 * phi2(z).ln();
    let partner = |x: f64| -> Result<f64> {
        let v = (target - phi2(x).ln()).exp();
        Ok(phi1_inverse(v)?.powi(2))
    };
    let cost = |s: f64| partner(s.exp()).map(|y| s.exp() + y).unwrap_or(f64::INFINITY);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (z.ln() - 2.5, z.ln() + 1.5);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (cost(x1), cost(x2));
    for _ in 0..200 {
        if hi - lo < 1e-12 {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = cost(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = cost(x2);
        }
    }
    let x = (0.5 * (lo + hi)).exp();
    Ok((x, partner(x)?))
}

/// Complete-monotonicity evidence behind the square's optimality: kernel
/// sign pattern, Laplace representations, alternating derivatives,
/// log-convexity triples and the separable convex programme.
pub fn check_compmon() -> Result<VerifyReport> {
    let mut points = Vec::new();
    for i in 1..=9 {
        let r = i as f64 / 10.0;
        let scale = |t: f64| (-r * t).exp() + (-t / r).exp() + 2.0 * (-t).exp();
        for k in 1..=49 {
            let t = 0.5 * k as f64 / 50.0;
            points.push(CheckPoint::new("kernel-negative", r, t, -cm_kernel(r, t) / scale(t), Sense::Strict));
        }
        for k in 0..=60 {
            let t = 1.0 + k as f64 * 0.5;
            points.push(CheckPoint::new("kernel-positive", r, t, cm_kernel(r, t) / scale(t), Sense::Strict));
        }
        let t0 = kernel_root(r)?;
        points.push(CheckPoint::new("kernel-root", r, t0, (t0 - 0.5).min(1.0 - t0), Sense::Strict));
    }
    for z in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let e1 = (phi1_laplace(z)? - phi1(z)).abs() / phi1(z);
        points.push(CheckPoint::new("phi1-laplace", 0.0, z, 1e-6 - e1, Sense::NonStrict));
        let e2 = (phi2_laplace(z)? - phi2(z)).abs() / phi2(z);
        points.push(CheckPoint::new("phi2-laplace", 0.0, z, 1e-6 - e2, Sense::NonStrict));
        for k in 0..=4u32 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let h = 0.1 * z;
            let d1 = sign * fd_derivative(phi1, z, k, h) * z.powi(k as i32) / phi1(z);
            points.push(CheckPoint::new(format!("phi1-derivative-{k}"), 0.0, z, d1, Sense::Strict));
            let d2 = sign * fd_derivative(phi2, z, k, h) * z.powi(k as i32) / phi2(z);
            points.push(CheckPoint::new(format!("phi2-derivative-{k}"), 0.0, z, d2, Sense::Strict));
        }
    }
    let xs = [0.05, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0];
    for (i, &a) in xs.iter().enumerate() {
        for (j, &b) in xs.iter().enumerate().skip(i + 1) {
            for &c in xs.iter().skip(j + 1) {
                points.push(CheckPoint::new("phi1-log-convex", a, b, log_convexity_margin(&phi1, a, b, c), Sense::Strict));
                points.push(CheckPoint::new("phi2-log-convex", a, b, log_convexity_margin(&phi2, a, b, c), Sense::Strict));
            }
        }
    }
    for z in [0.25, 1.0, 4.0] {
        let (x, y) = lemma2_minimiser(z)?;
        let dev = ((x - z).abs().max((y - z).abs())) / z;
        points.push(CheckPoint::new("separable-minimiser", 0.0, z, 1e-6 - dev, Sense::NonStrict));
    }
    Ok(VerifyReport::new("complete-monotonicity", ReportClass::Theorem, points, vec![]))
}

/// Relative flux gap to the disk, (Q_disk - Q) / Q_disk, along a log grid
/// in beta from 1 to `beta_max`. Evidence for the gap vanishing is a
/// decreasing trajectory; the large-beta limit 1 - |boundary_disk| / |boundary|
/// is reported alongside.
pub fn check_qsteady_beta_conjecture(shapes: &[SweepShape], beta_max: f64) -> Result<VerifyReport> {
    ensure(beta_max >= 1e3, || format!("beta_max must be at least 1e3, got {beta_max}"))?;
    let betas = log_space(1.0, beta_max, 13)?;
    let mut points = Vec::new();
    let mut notes = Vec::new();
    for s in shapes {
        let mut gaps = Vec::new();
        for &b in &betas {
            let v = s.evaluate(PI, b)?;
            let d = SweepShape::Disk.evaluate(PI, b)?;
            let gap = (d.q_steady - v.q_steady) / d.q_steady;
            gaps.push(gap);
            points.push(CheckPoint::new(format!("gap:{}", s.label()), b, PI, gap, Sense::NonStrict));
        }
        let perimeter = s.evaluate(PI, 1.0)?.perimeter;
        let limit = 1.0 - 2.0 * PI / perimeter;
        let decreasing = gaps.windows(2).all(|w| w[1] <= w[0] + 1e-15);
        notes.push(format!(
            "{}: gap {} at beta=1, {} at beta={}; decreasing={}; large-beta limit 1 - P_disk/P = {}",
            s.label(),
            format_sig(gaps[0]),
            format_sig(*gaps.last().unwrap_or(&f64::NAN)),
            format_sig(beta_max),
            decreasing,
            format_sig(limit)
        ));
    }
    Ok(VerifyReport::new("qsteady-beta-conjecture", ReportClass::Exploratory, points, notes))
}

/// Whether lambda1 of the regular n-gon exceeds that of the (n+1)-gon at equal area.
pub fn check_ngon_question(ns: &[u32], grid: &SweepGrid) -> Result<VerifyReport> {
    let cells: Vec<(u32, f64)> = ns.iter().flat_map(|n| grid.betas.iter().map(move |b| (*n, *b))).collect();
    let points = cells
        .par_iter()
        .map(|&(n, b)| {
            let l0 = SweepShape::Polygon { n }.evaluate(grid.area, b)?.lambda1;
            let l1 = SweepShape::Polygon { n: n + 1 }.evaluate(grid.area, b)?.lambda1;
            Ok(CheckPoint::new(format!("ngon-{n}-vs-{}", n + 1), b, n as f64, (l0 - l1) / l0, Sense::Strict))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport::new("ngon-question", ReportClass::Exploratory, points, vec![]))
}

/// Alternating-sign derivatives of the fundamental root mu(c) up to order 4,
/// and the log-convexity consequence for r and 1/r.
pub fn check_mu_compmon(betas: &[f64]) -> Result<VerifyReport> {
    let mut points = Vec::new();
    for &beta in betas {
        let f = |c: f64| mu(c, beta).unwrap_or(f64::NAN);
        for c in [0.2, 0.5, 1.0, 2.0, 5.0] {
            for k in 0..=4u32 {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let d = sign * fd_derivative(f, c, k, 0.1 * c) * c.powi(k as i32) / f(c);
                points.push(CheckPoint::new(format!("mu-derivative-{k}"), beta, c, d, Sense::Strict));
            }
        }
        for r in [0.1, 0.3, 0.5, 0.8] {
            let m1 = f(1.0);
            let v = (1.0 / r - 1.0) * (f(r) / m1).ln() + (1.0 - r) * (f(1.0 / r) / m1).ln();
            points.push(CheckPoint::new("mu-log-convex", beta, r, v, Sense::Strict));
        }
    }
    Ok(VerifyReport::new("mu-complete-monotonicity", ReportClass::Exploratory, points, vec![]))
}

/// Verification suites runnable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Suite {
    Theorem1,
    Theorem2,
    Theorem3,
    Bounds,
    Polygon,
    Asymptote,
    Classical,
    Compmon,
    Conjectures,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 10] =
        ["theorem1", "theorem2", "theorem3", "bounds", "polygon", "asymptote", "classical", "compmon", "conjectures", "all"];

    pub fn parse(name: &str) -> Option<Suite> {
        use Suite::*;
        Some(match name {
            "theorem1" => Theorem1,
            "theorem2" => Theorem2,
            "theorem3" => Theorem3,
            "bounds" => Bounds,
            "polygon" => Polygon,
            "asymptote" => Asymptote,
            "classical" => Classical,
            "compmon" => Compmon,
            "conjectures" => Conjectures,
            "all" => All,
            _ => return None,
        })
    }
}

/// Slip lengths of the isoperimetric sweeps: 20 log-spaced in [1e-3, 1e3].
pub fn theorem_grid() -> Result<SweepGrid> {
    SweepGrid::log_betas(1e-3, 1e3, 20)
}

/// Theorem 3 grid: beta in {0.01, 0.1, 1, 10}, 200 r values in [0.05, 1].
pub fn rect_grid() -> Result<SweepGrid> {
    SweepGrid::new(vec![0.01, 0.1, 1.0, 10.0], lin_space(0.05, 1.0, 200)?, PI)
}

pub const RECT_HALF_SIDES: [f64; 3] = [0.5, 1.0, 2.0];

/// Reports of a suite on its default grids.
pub fn run_suite(suite: Suite) -> Result<Vec<VerifyReport>> {
    let mut out = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Theorem1 {
        out.push(check_theorem1(&default_sweep_shapes(), &theorem_grid()?)?);
    }
    if all || suite == Suite::Theorem2 {
        out.push(check_theorem2(&default_sweep_shapes(), &theorem_grid()?)?);
    }
    if all || suite == Suite::Theorem3 {
        for h in RECT_HALF_SIDES {
            out.push(check_theorem3(h, &rect_grid()?)?);
        }
    }
    if all || suite == Suite::Bounds {
        for h in RECT_HALF_SIDES {
            out.push(check_rect_bounds(h, &rect_grid()?)?);
        }
    }
    if all || suite == Suite::Polygon {
        out.push(check_polygon_ordering(&SweepGrid::new(
            vec![0.0, 0.001, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0, 1000.0],
            vec![],
            3f64.sqrt(),
        )?)?);
    }
    if all || suite == Suite::Asymptote {
        out.push(check_robin_asymptote(1e3, PI, 0.01)?);
    }
    if all || suite == Suite::Classical {
        out.push(check_classical_b0(&classical_shapes())?);
        out.push(check_deficit_bound(&classical_shapes())?);
    }
    if all || suite == Suite::Compmon {
        out.push(check_compmon()?);
    }
    if all || suite == Suite::Conjectures {
        let shapes = [SweepShape::Disk, SweepShape::Rectangle { aspect: 1.0 }, SweepShape::Triangle, SweepShape::Rectangle { aspect: 4.0 }];
        out.push(check_qsteady_beta_conjecture(&shapes, 1e3)?);
        out.push(check_ngon_question(&[3, 4, 5, 6, 7], &SweepGrid::new(vec![0.0, 0.1, 1.0, 10.0], vec![], PI)?)?);
        out.push(check_mu_compmon(&[0.1, 1.0, 10.0])?);
    }
    Ok(out)
}
