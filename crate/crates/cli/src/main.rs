mod figures;
mod output;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use slipflow::disk::{disk_flux_series, disk_spectrum, q_periodic_disk, q_steady_disk, q_transient_disk};
use slipflow::ellipse::{lambda1_ellipse_pert, q_steady_ellipse_exact_b0, q_steady_ellipse_pert, rayleigh_lambda_b0};
use slipflow::fem::{fem_solve, FemShape};
use slipflow::geomfn::{fourier_functionals, geom_summary, FourierBoundary, ShapeSpec};
use slipflow::rect::{lambda1_rect, q_steady_rect, q_transient_rect, rect_spectrum};
use slipflow::tri::{q_steady_tri, tri_first_mode};
use slipflow::verify::{format_sig, run_suite, Suite, SweepGrid, SweepShape, CSV_HEADER};

use figures::{ClaimFailed, UnknownId};
use output::Table;

#[derive(Parser)]
#[command(name = "slipflow", version, about = "Steady, starting and oscillatory pressure-driven flow in straight ducts with Navier slip")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Steady flux, first eigenvalue and first-mode weight of one cross-section.
    Compute {
        #[command(flatten)]
        shape: ShapeArgs,
        #[command(flatten)]
        flow: FlowArgs,
        /// FEM refinement for shapes without a closed form.
        #[arg(long, default_value_t = 32)]
        rings: usize,
        #[command(flatten)]
        io: OutArgs,
    },
    /// Flux after the pressure gradient is switched on at t = 0 (disk or rectangle).
    Transient {
        #[command(flatten)]
        shape: ShapeArgs,
        #[command(flatten)]
        flow: FlowArgs,
        /// start:stop:N, optionally followed by :lin or :log (default lin).
        #[arg(long)]
        t_grid: String,
        /// Radial modes for the disk, or symmetric modes per direction for the rectangle.
        #[arg(long)]
        modes: Option<usize>,
        #[command(flatten)]
        io: OutArgs,
    },
    /// Complex flux amplitude in a disk under an oscillating gradient.
    Periodic {
        #[arg(long, default_value_t = 1.0, value_parser = finite)]
        radius: f64,
        #[arg(long, default_value_t = 0.0, value_parser = finite)]
        beta: f64,
        /// Comma-separated angular frequencies.
        #[arg(long, value_delimiter = ',', required = true, value_parser = finite)]
        omega: Vec<f64>,
        #[arg(long, default_value_t = 200)]
        modes: usize,
        #[command(flatten)]
        io: OutArgs,
    },
    /// A named figure, or Q_steady and lambda1 of one shape over a beta grid.
    Sweep {
        #[arg(long, conflicts_with_all = ["shape", "beta_grid"])]
        figure: Option<String>,
        #[command(flatten)]
        shape: Option<SweepArgs>,
        #[command(flatten)]
        io: OutArgs,
    },
    /// Numerical checks of the extremal properties and inequalities.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// A named table.
    Table {
        #[arg(long)]
        table: String,
        #[command(flatten)]
        io: OutArgs,
    },
    /// Figure, table and suite ids.
    List,
}

#[derive(Args)]
struct ShapeArgs {
    #[arg(long, value_enum)]
    shape: ShapeKind,
    #[arg(long, value_parser = finite)]
    radius: Option<f64>,
    /// Rectangle half-width, triangle half-side or ellipse semi-axis.
    #[arg(long, value_parser = finite)]
    a: Option<f64>,
    /// Rectangle half-height.
    #[arg(long, value_parser = finite)]
    b: Option<f64>,
    /// Polygon side count.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, value_parser = finite)]
    area: Option<f64>,
    /// Fourier boundary mean-radius correction, r = 1 + a0 + sum (a_n cos + b_n sin).
    #[arg(long, value_parser = finite, allow_hyphen_values = true)]
    a0: Option<f64>,
    #[arg(long, value_delimiter = ',', value_parser = finite, allow_hyphen_values = true)]
    cos: Vec<f64>,
    #[arg(long, value_delimiter = ',', value_parser = finite, allow_hyphen_values = true)]
    sin: Vec<f64>,
}

#[derive(Args)]
struct FlowArgs {
    #[arg(long, default_value_t = 0.0, value_parser = finite)]
    beta: f64,
    #[arg(long, default_value_t = 1.0, value_parser = finite)]
    dp: f64,
}

#[derive(Args)]
#[group(requires = "shape")]
struct SweepArgs {
    #[arg(long, value_enum)]
    shape: Option<ShapeKind>,
    /// Rectangle aspect ratio b/a (at least 1), ellipse semi-axis or polygon side count.
    #[arg(long, value_parser = finite)]
    param: Option<f64>,
    #[arg(long, default_value_t = PI, value_parser = finite)]
    area: f64,
    /// lo:hi:N, log-spaced.
    #[arg(long, default_value = "1e-3:1e3:25")]
    beta_grid: String,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeKind {
    Disk,
    Rect,
    Tri,
    Ngon,
    Ellipse,
    Fourier,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
}

/// A bad combination of otherwise well-formed arguments.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

/// At least one verification report failed.
#[derive(Debug)]
struct VerifyFailed(usize);

impl std::fmt::Display for VerifyFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} verification report(s) failed", self.0)
    }
}

impl std::error::Error for VerifyFailed {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(Usage(msg.into()))
}

fn finite(s: &str) -> std::result::Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("expected a finite number, got {s}"))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.is::<Usage>() || e.is::<UnknownId>() {
        return 2;
    }
    if e.is::<ClaimFailed>() || e.is::<VerifyFailed>() {
        return 1;
    }
    match e.downcast_ref::<slipflow::Error>() {
        Some(slipflow::Error::Domain(_) | slipflow::Error::Precondition(_) | slipflow::Error::Unsupported(_)) => 2,
        _ => 1,
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Compute { shape, flow, rings, io } => emit(&compute(&shape, &flow, rings)?, &io),
        Command::Transient { shape, flow, t_grid, modes, io } => emit(&transient(&shape, &flow, &t_grid, modes)?, &io),
        Command::Periodic { radius, beta, omega, modes, io } => emit(&periodic(radius, beta, &omega, modes)?, &io),
        Command::Sweep { figure, shape, io } => {
            let table = match (figure, shape) {
                (Some(id), _) => figures::emit_figure(&id)?,
                (None, Some(s)) => custom_sweep(&s)?,
                (None, None) => return Err(usage("sweep needs --figure or --shape")),
            };
            emit(&table, &io)
        }
        Command::Verify { suite, format, out } => verify(&suite, format, out),
        Command::Table { table, io } => emit(&figures::emit_table(&table)?, &io),
        Command::List => {
            let mut s = String::from("figures:\n");
            for f in &figures::FIGURES {
                s.push_str(&format!("  {:<20} {}\n", f.id, f.about));
            }
            s.push_str("tables:\n");
            for t in figures::TABLES {
                s.push_str(&format!("  {t}\n"));
            }
            s.push_str("suites:\n");
            for n in Suite::NAMES {
                s.push_str(&format!("  {n}\n"));
            }
            write_out(&s, None)
        }
    }
}

fn write_out(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut h = std::io::stdout().lock();
            h.write_all(text.as_bytes())?;
            Ok(h.flush()?)
        }
    }
}

fn emit(table: &Table, io: &OutArgs) -> Result<()> {
    let text = match io.format {
        Format::Csv => table.to_csv()?,
        Format::Json => table.to_json()?,
        Format::Svg => table.to_svg(),
    };
    write_out(&text, io.out.as_ref())
}

fn need(v: Option<f64>, flag: &str, shape: &str) -> Result<f64> {
    v.ok_or_else(|| usage(format!("--shape {shape} needs --{flag}")))
}

/// Geometry from the shape flags. Rectangles and triangles may be given by
/// --area alone (square, equilateral), disks by --radius or --area.
fn shape_spec(s: &ShapeArgs) -> Result<ShapeSpec> {
    Ok(match s.shape {
        ShapeKind::Disk => match (s.radius, s.area) {
            (Some(r), _) => ShapeSpec::Disk { radius: r },
            (None, Some(area)) => ShapeSpec::Disk { radius: (area / PI).sqrt() },
            (None, None) => ShapeSpec::Disk { radius: 1.0 },
        },
        ShapeKind::Rect => match (s.a, s.b, s.area) {
            (Some(a), Some(b), _) => ShapeSpec::Rectangle { a, b },
            (Some(a), None, None) => ShapeSpec::Rectangle { a, b: a },
            (None, None, Some(area)) => {
                let h = area.sqrt() / 2.0;
                ShapeSpec::Rectangle { a: h, b: h }
            }
            _ => return Err(usage("--shape rect needs --a and --b, --a alone (square) or --area alone (square)")),
        },
        ShapeKind::Tri => match (s.a, s.area) {
            (Some(a), _) => ShapeSpec::EquilateralTriangle { a },
            (None, Some(area)) => ShapeSpec::EquilateralTriangle { a: (area / 3f64.sqrt()).sqrt() },
            (None, None) => return Err(usage("--shape tri needs --a or --area")),
        },
        ShapeKind::Ngon => {
            let n = s.n.ok_or_else(|| usage("--shape ngon needs --n"))?;
            ShapeSpec::RegularPolygon { n, area: s.area.unwrap_or(PI) }
        }
        ShapeKind::Ellipse => ShapeSpec::EllipseUnitArea { a: need(s.a, "a", "ellipse")? },
        ShapeKind::Fourier => ShapeSpec::FourierBoundary(FourierBoundary::new(s.a0.unwrap_or(0.0), s.cos.clone(), s.sin.clone())),
    })
}

fn compute(s: &ShapeArgs, flow: &FlowArgs, rings: usize) -> Result<Table> {
    let spec = shape_spec(s)?;
    let g = geom_summary(&spec)?;
    let (beta, dp) = (flow.beta, flow.dp);
    let mut t = Table::new("steady flux and first eigenvalue", &["quantity", "value", "method"])
        .comment(format!("beta = {}, dp = {}", format_sig(beta), format_sig(dp)));
    let mut row = |q: &str, v: f64, m: &str| t.push(vec![q.into(), v.into(), m.into()]);
    row("area", g.area, "exact");
    row("perimeter", g.perimeter, "exact");
    let fem = |shape: FemShape| fem_solve(shape, beta, dp, rings);
    match spec {
        ShapeSpec::Disk { radius } => {
            let m = disk_spectrum(radius, beta, 1)?[0];
            row("q_steady", q_steady_disk(radius, beta, dp)?, "exact");
            row("lambda1", m.lambda, "exact");
            row("first_mode_weight", dp * m.weight, "exact");
        }
        ShapeSpec::Rectangle { a, b } => {
            let q = q_steady_rect(a, b, beta, dp, 400)?;
            row("q_steady", q.value, "series");
            row("lambda1", lambda1_rect(a, b, beta)?, "exact");
            row("first_mode_weight", dp * rect_spectrum(a, b, beta, 1, 1)?[0].weight, "exact");
        }
        ShapeSpec::EquilateralTriangle { a } => {
            let m = tri_first_mode(a, beta)?;
            row("q_steady", q_steady_tri(a, beta, dp)?, "exact");
            row("lambda1", m.lambda, "exact");
            row("first_mode_weight", dp * m.weight, "quadrature");
        }
        ShapeSpec::RegularPolygon { n, area } => {
            let f = fem(FemShape::RegularPolygon { n, area })?;
            push_fem(&mut row, &f);
        }
        ShapeSpec::EllipseUnitArea { a } => {
            let q = q_steady_ellipse_pert(a, beta, dp)?;
            let l = lambda1_ellipse_pert(a, beta)?;
            if beta == 0.0 {
                row("q_steady", q_steady_ellipse_exact_b0(a)? * dp, "exact");
            }
            row("q_steady", q.value, "perturbative");
            row("lambda1", l.value, "perturbative");
            row("eps", q.eps, "exact");
            let f = fem(FemShape::EllipseUnitArea { a })?;
            push_fem(&mut row, &f);
        }
        ShapeSpec::FourierBoundary(ref fb) => {
            if beta != 0.0 {
                return Err(anyhow!(slipflow::Error::Unsupported("Fourier boundaries are evaluated at beta = 0 only".into())));
            }
            row("lambda1", rayleigh_lambda_b0(fb)?, "perturbative");
            let f = fourier_functionals(fb)?;
            row("area_radius", f.area_radius.estimate, "perturbative");
            row("perimeter_radius", f.perimeter_radius.estimate, "perturbative");
            row("moment_radius", f.moment_radius.estimate, "perturbative");
        }
    }
    Ok(t)
}

fn push_fem(row: &mut impl FnMut(&str, f64, &str), f: &slipflow::fem::FemSolution) {
    row("q_steady", f.q_steady, "fem");
    row("q_steady_error", f.q_error_estimate(), "fem");
    row("lambda1", f.lambda1, "fem");
    row("lambda1_error", f.lambda_error_estimate(), "fem");
    row("first_mode_weight", f.first_mode_weight, "fem");
}

/// Parses start:stop:N[:lin|:log], also accepting the scale glued to N.
fn parse_t_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if !(3..=4).contains(&parts.len()) {
        return Err(usage(format!("--t-grid expects start:stop:N[:lin|log], got {s}")));
    }
    let num = |p: &str| finite(p).map_err(usage);
    let (start, stop) = (num(parts[0])?, num(parts[1])?);
    let (count, mut scale) = match parts[2].strip_suffix("lin").map(|c| (c, "lin")).or_else(|| parts[2].strip_suffix("log").map(|c| (c, "log"))) {
        Some((c, sc)) => (c, sc),
        None => (parts[2], "lin"),
    };
    if let Some(sc) = parts.get(3) {
        scale = sc;
    }
    let n: usize = count.parse().map_err(|_| usage(format!("bad point count in --t-grid: {}", parts[2])))?;
    if n < 2 || !(stop > start) || start < 0.0 {
        return Err(usage("--t-grid needs 0 <= start < stop and N >= 2"));
    }
    match scale {
        "lin" => Ok(slipflow::verify::lin_space(start, stop, n)?),
        "log" if start > 0.0 => Ok(slipflow::verify::log_space(start, stop, n)?),
        "log" => Err(usage("a log --t-grid needs start > 0")),
        other => Err(usage(format!("unknown --t-grid scale {other}"))),
    }
}

fn transient(s: &ShapeArgs, flow: &FlowArgs, grid: &str, modes: Option<usize>) -> Result<Table> {
    let times = parse_t_grid(grid)?;
    let curve = match shape_spec(s)? {
        ShapeSpec::Disk { radius } => q_transient_disk(radius, flow.beta, flow.dp, &times, modes.unwrap_or(200))?,
        ShapeSpec::Rectangle { a, b } => {
            // antisymmetric modes carry no flux, so count only the symmetric ones
            let m = 2 * modes.unwrap_or(64);
            q_transient_rect(a, b, flow.beta, flow.dp, &times, m, m)?
        }
        _ => return Err(anyhow!(slipflow::Error::Unsupported("transient flow is available for the disk and the rectangle".into()))),
    };
    let mut t = Table::new("starting flow", &["t", "q", "q_over_steady"])
        .comment(format!("beta = {}, dp = {}, q_steady = {}", format_sig(flow.beta), format_sig(flow.dp), format_sig(curve.steady)));
    for (&time, &q) in curve.times.iter().zip(&curve.flux) {
        t.push(vec![time.into(), q.into(), (q / curve.steady).into()]);
    }
    Ok(t)
}

fn periodic(radius: f64, beta: f64, omegas: &[f64], modes: usize) -> Result<Table> {
    let series = disk_flux_series(radius, beta, 1.0, modes)?;
    let mut t = Table::new("oscillatory flow in a disk", &["omega", "re", "im", "abs", "phase", "mode_sum_re", "mode_sum_im"])
        .comment(format!("radius = {}, beta = {}, unit gradient amplitude", format_sig(radius), format_sig(beta)));
    for &w in omegas {
        let q = q_periodic_disk(radius, beta, w)?;
        let m = series.q_periodic(w);
        t.push(vec![w.into(), q.re.into(), q.im.into(), q.norm().into(), q.arg().into(), m.re.into(), m.im.into()]);
    }
    Ok(t)
}

fn custom_sweep(s: &SweepArgs) -> Result<Table> {
    let kind = s.shape.ok_or_else(|| usage("sweep needs --figure or --shape"))?;
    let param = s.param;
    let shape = match kind {
        ShapeKind::Disk => SweepShape::Disk,
        ShapeKind::Rect => SweepShape::Rectangle { aspect: param.unwrap_or(1.0) },
        ShapeKind::Tri => SweepShape::Triangle,
        ShapeKind::Ellipse => SweepShape::Ellipse { a: param.ok_or_else(|| usage("--shape ellipse needs --param"))? },
        ShapeKind::Ngon => {
            let n = param.ok_or_else(|| usage("--shape ngon needs --param"))?;
            if n.fract() != 0.0 || n < 3.0 {
                return Err(usage("--param for ngon is a side count of at least 3"));
            }
            SweepShape::Polygon { n: n as u32 }
        }
        ShapeKind::Fourier => return Err(usage("Fourier boundaries cannot be swept")),
    };
    let parts: Vec<&str> = s.beta_grid.split(':').collect();
    let [lo, hi, n] = parts[..] else {
        return Err(usage(format!("--beta-grid expects lo:hi:N, got {}", s.beta_grid)));
    };
    let n: usize = n.parse().map_err(|_| usage(format!("bad point count in --beta-grid: {n}")))?;
    let betas = slipflow::verify::log_space(finite(lo).map_err(usage)?, finite(hi).map_err(usage)?, n)?;
    let grid = SweepGrid::new(betas, vec![], s.area)?;
    let mut t = Table::new(&format!("{} against beta", shape.label()), &["beta", "q_steady", "lambda1", "q_over_disk", "lambda_over_disk"])
        .comment(format!("area = {}", format_sig(s.area)));
    t.log_x = true;
    let r = (grid.area / PI).sqrt();
    for &b in &grid.betas {
        let v = shape.evaluate(grid.area, b)?;
        let qd = q_steady_disk(r, b, 1.0)?;
        let ld = disk_spectrum(r, b, 1)?[0].lambda;
        t.push(vec![b.into(), v.q_steady.into(), v.lambda1.into(), (v.q_steady / qd).into(), (v.lambda1 / ld).into()]);
    }
    Ok(t)
}

fn verify(name: &str, format: ReportFormat, out: Option<PathBuf>) -> Result<()> {
    let suite = Suite::parse(name).ok_or_else(|| anyhow!(UnknownId(format!("suite {name} (known: {})", Suite::NAMES.join(", ")))))?;
    let reports = run_suite(suite)?;
    for r in &reports {
        eprintln!("{} {} min_margin={}", if r.pass { "PASS" } else { "FAIL" }, r.id, format_sig(r.min_margin));
    }
    let text = match format {
        ReportFormat::Json => {
            let v: Vec<serde_json::Value> = reports.iter().map(|r| r.to_json()).collect();
            serde_json::to_string_pretty(&v)? + "\n"
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(vec![]);
            w.write_record(CSV_HEADER)?;
            for r in &reports {
                for rec in r.csv_records() {
                    w.write_record(&rec)?;
                }
            }
            String::from_utf8(w.into_inner()?)?
        }
    };
    write_out(&text, out.as_ref())?;
    let failed = reports.iter().filter(|r| !r.pass).count();
    if failed > 0 {
        bail!(VerifyFailed(failed));
    }
    Ok(())
}
