//! Fixed-grid curves and tables. Each figure carries a post-emit check of
//! the qualitative claim it illustrates.

use anyhow::{bail, Result};
use std::f64::consts::PI;

use slipflow::disk::{disk_spectrum, q_transient_disk};
use slipflow::ellipse::{j0_first_zero, rayleigh_coefficient};
use slipflow::geomfn::{fraenkel_alpha_fixture, moment_weight, polygon_table};
use slipflow::rect::{lambda1_rect, lambda_lb, lambda_ub, phi1, q_steady_rect, q_transient_rect};
use slipflow::verify::{log_space, SweepShape};

use crate::output::{Cell, Table};

pub struct Figure {
    pub id: &'static str,
    pub about: &'static str,
}

pub const FIGURES: [Figure; 11] = [
    Figure { id: "lambda-beta-disk", about: "scaled disk eigenvalue a^2 lambda1 against beta/a" },
    Figure { id: "tri-q-ratio", about: "Q_steady triangle / disk against beta, area pi" },
    Figure { id: "tri-lambda-ratio", about: "lambda1 triangle / disk against beta, area sqrt 3" },
    Figure { id: "square-q-ratio", about: "Q_steady square / disk against beta, area pi" },
    Figure { id: "square-lambda-ratio", about: "lambda1 square / disk against beta, area pi" },
    Figure { id: "zerocs", about: "starting flow Q(t) and Q(t)/Q(inf), unit disk and square of side sqrt pi" },
    Figure { id: "rect-q-square", about: "Q_steady / |area|^2 of rectangles with area 4, beta = 1" },
    Figure { id: "rect-lambda-square", about: "|area| lambda1 of rectangles with area 4, beta = 1" },
    Figure { id: "tri-square-lambda", about: "lambda1 of triangle and square against beta, areas sqrt 3" },
    Figure { id: "logcvx-phi1", about: "sqrt(phi1(X) phi1(Y)) - phi1(sqrt((X^2 + Y^2)/2))" },
    Figure { id: "rect-bounds", about: "lambda_LB, lambda1, lambda_UB against r, h = 1, beta = 1" },
];

pub const TABLES: [&str; 2] = ["polygon-deficits", "rn-table"];

/// beta = 0 followed by 61 log-spaced values in [1e-3, 1e3].
fn beta_axis() -> Result<Vec<f64>> {
    let mut b = vec![0.0];
    b.extend(log_space(1e-3, 1e3, 61)?);
    Ok(b)
}

/// 81 log-spaced values in [1/k, k], symmetric so that the middle one is exactly 1.
fn symmetric_log_axis(k: f64) -> Vec<f64> {
    let l = k.ln();
    (0..81)
        .map(|i| {
            let j = i as i32 - 40;
            match j.cmp(&0) {
                std::cmp::Ordering::Equal => 1.0,
                std::cmp::Ordering::Greater => (l * j as f64 / 40.0).exp(),
                std::cmp::Ordering::Less => 1.0 / (l * (-j) as f64 / 40.0).exp(),
            }
        })
        .collect()
}

/// The figure's table, or an error naming the violated claim.
pub fn emit_figure(id: &str) -> Result<Table> {
    let table = match id {
        "lambda-beta-disk" => lambda_beta_disk()?,
        "tri-q-ratio" => ratio_figure(id, SweepShape::Triangle, PI, true)?,
        "tri-lambda-ratio" => ratio_figure(id, SweepShape::Triangle, 3f64.sqrt(), false)?,
        "square-q-ratio" => ratio_figure(id, SweepShape::Rectangle { aspect: 1.0 }, PI, true)?,
        "square-lambda-ratio" => ratio_figure(id, SweepShape::Rectangle { aspect: 1.0 }, PI, false)?,
        "zerocs" => zerocs()?,
        "rect-q-square" => rect_square(id, true)?,
        "rect-lambda-square" => rect_square(id, false)?,
        "tri-square-lambda" => tri_square_lambda()?,
        "logcvx-phi1" => logcvx_phi1()?,
        "rect-bounds" => rect_bounds()?,
        _ => bail!(UnknownId::figure(id)),
    };
    Ok(table)
}

#[derive(Debug)]
pub struct UnknownId(pub String);

impl UnknownId {
    fn figure(id: &str) -> UnknownId {
        let known: Vec<&str> = FIGURES.iter().map(|f| f.id).collect();
        UnknownId(format!("unknown figure id '{id}'; known ids: {}", known.join(", ")))
    }
}

impl std::fmt::Display for UnknownId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UnknownId {}

/// A violated figure claim.
#[derive(Debug)]
pub struct ClaimFailed(pub String);

impl std::fmt::Display for ClaimFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "figure check failed: {}", self.0)
    }
}

impl std::error::Error for ClaimFailed {}

fn claim(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(ClaimFailed(what.to_string()).into())
    }
}

fn lambda_beta_disk() -> Result<Table> {
    let mut t = Table::new("lambda-beta-disk", &["beta_over_a", "a2_lambda1"])
        .comment("a^2 lambda1 = gamma1^2 for the disk of radius a")
        .comment("check: decreasing in beta/a, equal to j0^2 at beta = 0");
    t.log_x = true;
    let mut prev = f64::INFINITY;
    let mut decreasing = true;
    for b in beta_axis()? {
        let lam = disk_spectrum(1.0, b, 1)?[0].lambda;
        decreasing &= lam < prev;
        prev = lam;
        t.push(vec![b.into(), lam.into()]);
    }
    let j = j0_first_zero();
    let first = t.column("a2_lambda1")[0];
    claim(decreasing, "a^2 lambda1 must decrease in beta/a")?;
    claim((first - j * j).abs() <= 1e-12 * j * j, "a^2 lambda1 must equal j0^2 at beta = 0")?;
    Ok(t)
}

fn ratio_figure(id: &str, shape: SweepShape, area: f64, flux: bool) -> Result<Table> {
    let (what, rel) = if flux { ("q_steady", "< 1") } else { ("lambda1", "> 1") };
    let name = shape.label();
    let mut t = Table::new(id, &["beta", "ratio", &format!("{what}_{name}"), &format!("{what}_disk")])
        .comment(format!("{what} of the {name} over the equal-area disk, area {}", slipflow::verify::format_sig(area)))
        .comment(format!("check: ratio {rel} at every beta"));
    t.log_x = true;
    let mut ok = true;
    for b in beta_axis()? {
        let v = shape.evaluate(area, b)?;
        let d = SweepShape::Disk.evaluate(area, b)?;
        let (x, y) = if flux { (v.q_steady, d.q_steady) } else { (v.lambda1, d.lambda1) };
        let r = x / y;
        ok &= if flux { r < 1.0 } else { r > 1.0 };
        t.push(vec![b.into(), r.into(), x.into(), y.into()]);
    }
    claim(ok, &format!("ratio must stay {rel}"))?;
    Ok(t)
}

fn zerocs() -> Result<Table> {
    let h = PI.sqrt() / 2.0;
    let times: Vec<f64> = (0..=60).map(|i| 0.025 * i as f64).collect();
    let disk = q_transient_disk(1.0, 0.0, 1.0, &times, 200)?;
    // 64 flux-carrying modes per direction
    let square = q_transient_rect(h, h, 0.0, 1.0, &times, 128, 128)?;
    let mut t = Table::new("zerocs", &["t", "q_disk", "q_square", "q_disk_normalised", "q_square_normalised"])
        .comment("starting flow from rest, beta = 0, unit pressure gradient, both areas pi")
        .comment("check: disk has the larger Q(inf); its normalised flux approaches 1 more slowly");
    let mut slower = true;
    for (i, &tt) in times.iter().enumerate() {
        let (qd, qs) = (disk.flux[i], square.flux[i]);
        let (nd, ns) = (qd / disk.steady, qs / square.steady);
        if tt > 0.0 {
            slower &= nd < ns;
        }
        t.push(vec![tt.into(), qd.into(), qs.into(), nd.into(), ns.into()]);
    }
    claim(disk.steady > square.steady, "disk Q(inf) must exceed the square's")?;
    claim(slower, "disk normalised flux must lie below the square's for t > 0")?;
    Ok(t)
}

fn rect_square(id: &str, flux: bool) -> Result<Table> {
    let beta = 1.0;
    let area = 4.0;
    let col = if flux { "q_over_area2" } else { "area_lambda1" };
    let mut t = Table::new(id, &["x", "log_x", col])
        .comment("rectangles (-a, a) x (-1/a, 1/a), area 4, beta = 1, x = |area| / (4 a^2)")
        .comment(if flux { "check: maximised at the square, x = 1" } else { "check: minimised at the square, x = 1" });
    t.log_x = true;
    let xs = symmetric_log_axis(100.0);
    let mut best = (f64::NAN, 0usize);
    for (i, &x) in xs.iter().enumerate() {
        let a = 1.0 / x.sqrt();
        let b = 1.0 / a;
        let v = if flux { q_steady_rect(a, b, beta, 1.0, 400)?.value / (area * area) } else { area * lambda1_rect(a, b, beta)? };
        let better = if flux { !(v <= best.0) } else { !(v >= best.0) };
        if better {
            best = (v, i);
        }
        t.push(vec![x.into(), x.ln().into(), v.into()]);
    }
    claim(xs[best.1] == 1.0, "extremum must sit at the square")?;
    Ok(t)
}

fn tri_square_lambda() -> Result<Table> {
    let area = 3f64.sqrt();
    let mut t = Table::new("tri-square-lambda", &["beta", "lambda1_triangle", "lambda1_square"])
        .comment("fundamental eigenvalues at equal area sqrt 3")
        .comment("check: both decrease in beta, triangle above square");
    t.log_x = true;
    let (mut pt, mut ps) = (f64::INFINITY, f64::INFINITY);
    let mut ok = true;
    for b in beta_axis()? {
        let lt = SweepShape::Triangle.evaluate(area, b)?.lambda1;
        let ls = SweepShape::Rectangle { aspect: 1.0 }.evaluate(area, b)?.lambda1;
        ok &= lt < pt && ls < ps && lt > ls;
        pt = lt;
        ps = ls;
        t.push(vec![b.into(), lt.into(), ls.into()]);
    }
    claim(ok, "curves must decrease with the triangle above the square")?;
    Ok(t)
}

fn logcvx_phi1() -> Result<Table> {
    let ys = [0.25, 0.5, 1.0, 2.0];
    let mut t = Table::new("logcvx-phi1", &["x", "y=0.25", "y=0.5", "y=1", "y=2"])
        .comment("sqrt(phi1(x) phi1(y)) - phi1(sqrt((x^2 + y^2) / 2)), phi1(z) = arctan(1/z) / z")
        .comment("check: positive off the diagonal, zero on x = y");
    let mut ok = true;
    for i in 1..=60 {
        let x = i as f64 / 20.0;
        let mut row: Vec<Cell> = vec![x.into()];
        for &y in &ys {
            let v = (phi1(x) * phi1(y)).sqrt() - phi1(((x * x + y * y) / 2.0).sqrt());
            ok &= if x == y { v.abs() <= 1e-15 } else { v > 0.0 };
            row.push(v.into());
        }
        t.push(row);
    }
    claim(ok, "gap must be positive off the diagonal and zero on it")?;
    Ok(t)
}

fn rect_bounds() -> Result<Table> {
    let (h, beta) = (1.0, 1.0);
    let mut t = Table::new("rect-bounds", &["r", "lambda_lb", "lambda1", "lambda_ub"])
        .comment("rectangles (-h r, h r) x (-h/r, h/r), h = 1, beta = 1")
        .comment("check: lambda_lb <= lambda1 <= lambda_ub, both bounds minimised at r = 1");
    t.log_x = true;
    let rs = symmetric_log_axis(5.0);
    let mut ok = true;
    let (mut lb_min, mut ub_min) = ((f64::INFINITY, 0.0), (f64::INFINITY, 0.0));
    for &r in &rs {
        let lb = lambda_lb(h, r, beta)?;
        let ub = lambda_ub(h, r, beta)?;
        let lam = lambda1_rect(h * r, h / r, beta)?;
        ok &= lb < lam && lam < ub;
        if lb < lb_min.0 {
            lb_min = (lb, r);
        }
        if ub < ub_min.0 {
            ub_min = (ub, r);
        }
        t.push(vec![r.into(), lb.into(), lam.into(), ub.into()]);
    }
    claim(ok, "bounds must bracket lambda1")?;
    claim(lb_min.1 == 1.0 && ub_min.1 == 1.0, "both bounds must be minimised at r = 1")?;
    Ok(t)
}

pub fn emit_table(id: &str) -> Result<Table> {
    match id {
        "polygon-deficits" => polygon_deficits(),
        "rn-table" => rn_table(),
        _ => bail!(UnknownId(format!("unknown table id '{id}'; known ids: {}", TABLES.join(", ")))),
    }
}

fn polygon_deficits() -> Result<Table> {
    let mut t = Table::new(
        "polygon-deficits",
        &["n", "deficit_ratio", "moment_ratio", "asymmetry_bound", "two_alpha", "two_alpha_fixture"],
    )
    .comment("regular n-gons: |boundary|^2/(4 pi |area|) - 1, sqrt(2 pi I_c)/|area| - 1, sqrt(1 + 2 alpha^2) - 1")
    .comment("two_alpha: Fraenkel asymmetry from the closed form; two_alpha_fixture: tabulated constant");
    for n in [3u32, 4, 6] {
        let r = polygon_table(n)?;
        t.push(vec![
            (n as i64).into(),
            r.deficit_ratio.into(),
            r.moment_ratio.into(),
            r.asymmetry_bound.into(),
            r.two_alpha.into(),
            (2.0 * fraenkel_alpha_fixture(n)?).into(),
        ]);
    }
    Ok(t)
}

fn rn_table() -> Result<Table> {
    let mut t = Table::new(
        "rn-table",
        &["n", "area", "perimeter", "polar_moment", "polar_moment_centroidal", "q_steady", "outer_radius", "inner_radius", "rayleigh_weight"],
    )
    .comment("second-order weights R(n): radius = 1 + a0 + (1/4) sum R(n) (a_n^2 + b_n^2)")
    .comment("polar_moment about the origin; polar_moment_centroidal about the centroid")
    .comment("rayleigh_weight w(n): j / sqrt(lambda1) = 1 + a0 - (1/4) sum w(n) (a_n^2 + b_n^2)")
    .comment("check: 2n - 3 <= w(n) < 2n + 1");
    let mut ok = true;
    for n in 1..=8usize {
        let w = rayleigh_coefficient(n)?;
        let k = n as f64;
        ok &= 2.0 * k - 3.0 - 1e-12 <= w && w < 2.0 * k + 1.0;
        let ni = n as i64;
        t.push(vec![
            ni.into(),
            1i64.into(),
            (ni * ni).into(),
            3i64.into(),
            moment_weight(n).into(),
            (3 - 2 * ni).into(),
            (2 * ni - 1).into(),
            (-2 * ni - 1).into(),
            w.into(),
        ]);
    }
    claim(ok, "Rayleigh weights must lie in [2n - 3, 2n + 1)")?;
    Ok(t)
}
