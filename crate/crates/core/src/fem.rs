//! Piecewise-linear finite elements for the Robin problem on symmetric
//! star-shaped sections. Only one symmetry wedge is meshed; the symmetry
//! lines carry the natural (Neumann) condition. Two uniformly nested meshes
//! are combined by Richardson extrapolation of the O(h^2) error.

use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{ensure, Error, Result};
use crate::geomfn::regular_polygon_dims;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum FemShape {
    Disk { radius: f64 },
    Rectangle { a: f64, b: f64 },
    RegularPolygon { n: u32, area: f64 },
    EllipseUnitArea { a: f64 },
}

struct Wedge {
    angle: f64,
    copies: f64,
    /// Angles in (0, angle) where the boundary has a corner.
    corners: Vec<f64>,
    shape: FemShape,
}

impl Wedge {
    fn new(shape: FemShape) -> Result<Wedge> {
        let pos = |x: f64, what: &str| ensure(x.is_finite() && x > 0.0, || format!("{what} must be positive, got {x}"));
        Ok(match shape {
            FemShape::Disk { radius } => {
                pos(radius, "radius")?;
                Wedge { angle: FRAC_PI_2, copies: 4.0, corners: vec![], shape }
            }
            FemShape::Rectangle { a, b } => {
                pos(a, "half-width")?;
                pos(b, "half-width")?;
                Wedge { angle: FRAC_PI_2, copies: 4.0, corners: vec![(b / a).atan()], shape }
            }
            FemShape::RegularPolygon { n, area } => {
                ensure(n >= 3, || format!("polygon needs n >= 3, got {n}"))?;
                pos(area, "area")?;
                Wedge { angle: PI / n as f64, copies: 2.0 * n as f64, corners: vec![], shape }
            }
            FemShape::EllipseUnitArea { a } => {
                pos(a, "semi-axis")?;
                Wedge { angle: FRAC_PI_2, copies: 4.0, corners: vec![], shape }
            }
        })
    }

    fn boundary_radius(&self, th: f64) -> f64 {
        match self.shape {
            FemShape::Disk { radius } => radius,
            FemShape::Rectangle { a, b } => {
                let (s, c) = th.sin_cos();
                let rx = if c > 0.0 { a / c } else { f64::INFINITY };
                let ry = if s > 0.0 { b / s } else { f64::INFINITY };
                rx.min(ry)
            }
            FemShape::RegularPolygon { n, area } => regular_polygon_dims(n, area).1 / th.cos(),
            FemShape::EllipseUnitArea { a } => {
                let (s, c) = th.sin_cos();
                1.0 / (c * c / (a * a) + a * a * s * s).sqrt()
            }
        }
    }

    /// Angular nodes, uniform between corners, `m` intervals in total.
    fn angles(&self, m: usize) -> Vec<f64> {
        let mut breaks = vec![0.0];
        breaks.extend(self.corners.iter().copied());
        breaks.push(self.angle);
        let mut out = vec![0.0];
        let pieces = breaks.len() - 1;
        let mut used = 0;
        for p in 0..pieces {
            let (lo, hi) = (breaks[p], breaks[p + 1]);
            let k = if p + 1 == pieces {
                m - used
            } else {
                (((hi - lo) / self.angle * m as f64).round() as usize).max(2)
            };
            used += k;
            for i in 1..=k {
                out.push(lo + (hi - lo) * i as f64 / k as f64);
            }
        }
        out
    }
}

/// Symmetric banded matrix, lower band stored row-wise: `band[i][k]` = A[i][i - k].
#[derive(Clone)]
struct Banded {
    n: usize,
    w: usize,
    band: Vec<f64>,
}

impl Banded {
    fn new(n: usize, w: usize) -> Self {
        Banded { n, w, band: vec![0.0; n * (w + 1)] }
    }

    fn add(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        self.band[i * (self.w + 1) + (i - j)] += v;
    }

    fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let row = &self.band[i * (self.w + 1)..(i + 1) * (self.w + 1)];
            y[i] += row[0] * x[i];
            for k in 1..=self.w.min(i) {
                let j = i - k;
                y[i] += row[k] * x[j];
                y[j] += row[k] * x[i];
            }
        }
        y
    }

    /// In-place Cholesky factorisation A = L L^T.
    fn cholesky(mut self) -> Result<Banded> {
        let w = self.w;
        let stride = w + 1;
        for i in 0..self.n {
            for k in (0..=w.min(i)).rev() {
                let j = i - k;
                let mut s = self.band[i * stride + k];
                let lo = i.saturating_sub(w).max(j.saturating_sub(w));
                for p in lo..j {
                    s -= self.band[i * stride + (i - p)] * self.band[j * stride + (j - p)];
                }
                if k == 0 {
                    if s <= 0.0 {
                        return Err(Error::Domain("finite-element matrix not positive definite".into()));
                    }
                    self.band[i * stride] = s.sqrt();
                } else {
                    self.band[i * stride + k] = s / self.band[j * stride];
                }
            }
        }
        Ok(self)
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let stride = self.w + 1;
        let mut y = b.to_vec();
        for i in 0..self.n {
            let mut s = y[i];
            for k in 1..=self.w.min(i) {
                s -= self.band[i * stride + k] * y[i - k];
            }
            y[i] = s / self.band[i * stride];
        }
        for i in (0..self.n).rev() {
            let mut s = y[i];
            for k in 1..=self.w.min(self.n - 1 - i) {
                s -= self.band[(i + k) * stride + k] * y[i + k];
            }
            y[i] = s / self.band[i * stride];
        }
        y
    }
}

struct Assembled {
    stiffness: Banded,
    mass: Banded,
    load: Vec<f64>,
    copies: f64,
}

fn assemble(wedge: &Wedge, rings: usize, beta: f64) -> Assembled {
    let m = ((rings as f64 * wedge.angle).round() as usize).max(4 + 2 * wedge.corners.len());
    let thetas = wedge.angles(m);
    let per_ring = thetas.len();
    let n_nodes = 1 + rings * per_ring;
    let idx = |i: usize, j: usize| if i == 0 { 0 } else { 1 + (i - 1) * per_ring + j };
    let mut pts = vec![(0.0, 0.0); n_nodes];
    for i in 1..=rings {
        let s = i as f64 / rings as f64;
        for (j, &th) in thetas.iter().enumerate() {
            let r = s * wedge.boundary_radius(th);
            pts[idx(i, j)] = (r * th.cos(), r * th.sin());
        }
    }
    let w = per_ring + 1;
    let mut stiffness = Banded::new(n_nodes, w);
    let mut mass = Banded::new(n_nodes, w);
    let mut load = vec![0.0; n_nodes];
    let mut add_tri = |tri: [usize; 3]| {
        let p: Vec<(f64, f64)> = tri.iter().map(|&k| pts[k]).collect();
        let det = (p[1].0 - p[0].0) * (p[2].1 - p[0].1) - (p[2].0 - p[0].0) * (p[1].1 - p[0].1);
        let area = 0.5 * det.abs();
        // Gradients of barycentric coordinates.
        let g: Vec<(f64, f64)> = (0..3)
            .map(|k| {
                let (a, b) = (p[(k + 1) % 3], p[(k + 2) % 3]);
                ((a.1 - b.1) / det, (b.0 - a.0) / det)
            })
            .collect();
        for a in 0..3 {
            load[tri[a]] += area / 3.0;
            for b in 0..=a {
                let k = area * (g[a].0 * g[b].0 + g[a].1 * g[b].1);
                let mm = if a == b { area / 6.0 } else { area / 12.0 };
                stiffness.add(tri[a], tri[b], k);
                mass.add(tri[a], tri[b], mm);
            }
        }
    };
    for j in 0..per_ring - 1 {
        add_tri([0, idx(1, j), idx(1, j + 1)]);
    }
    for i in 1..rings {
        for j in 0..per_ring - 1 {
            add_tri([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            add_tri([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    if beta > 0.0 {
        for j in 0..per_ring - 1 {
            let (u, v) = (idx(rings, j), idx(rings, j + 1));
            let len = ((pts[u].0 - pts[v].0).powi(2) + (pts[u].1 - pts[v].1).powi(2)).sqrt();
            let c = len / (6.0 * beta);
            stiffness.add(u, u, 2.0 * c);
            stiffness.add(v, v, 2.0 * c);
            stiffness.add(u, v, c);
        }
    } else {
        // Dirichlet: decouple boundary nodes.
        for j in 0..per_ring {
            let u = idx(rings, j);
            for k in 0..=w {
                if u >= k {
                    stiffness.band[u * (w + 1) + k] = 0.0;
                    mass.band[u * (w + 1) + k] = 0.0;
                }
                if u + k < n_nodes {
                    stiffness.band[(u + k) * (w + 1) + k] = 0.0;
                    mass.band[(u + k) * (w + 1) + k] = 0.0;
                }
            }
            stiffness.band[u * (w + 1)] = 1.0;
            load[u] = 0.0;
        }
    }
    Assembled { stiffness, mass, load, copies: wedge.copies }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FemLevel {
    pub rings: usize,
    pub q_steady: f64,
    pub lambda1: f64,
    pub first_mode_weight: f64,
}

fn solve_level(wedge: &Wedge, rings: usize, beta: f64, dp: f64) -> Result<FemLevel> {
    let asm = assemble(wedge, rings, beta);
    let k_full = asm.stiffness.clone();
    let chol = asm.stiffness.cholesky()?;
    let u = chol.solve(&asm.load);
    let q = asm.copies * dp * asm.load.iter().zip(&u).map(|(f, u)| f * u).sum::<f64>();
    let mut x = u.clone();
    let mut lambda = f64::INFINITY;
    for _ in 0..500 {
        let mx = asm.mass.mul(&x);
        let y = chol.solve(&mx);
        let ky = k_full.mul(&y);
        let my = asm.mass.mul(&y);
        let num: f64 = y.iter().zip(&ky).map(|(a, b)| a * b).sum();
        let den: f64 = y.iter().zip(&my).map(|(a, b)| a * b).sum();
        let next = num / den;
        let norm = den.sqrt();
        x = y.iter().map(|v| v / norm).collect();
        let done = (next - lambda).abs() <= 1e-13 * next;
        lambda = next;
        if done {
            break;
        }
    }
    let mx = asm.mass.mul(&x);
    let int_phi: f64 = asm.load.iter().zip(&x).map(|(f, v)| f * v).sum();
    let int_phi2: f64 = x.iter().zip(&mx).map(|(a, b)| a * b).sum();
    Ok(FemLevel { rings, q_steady: q, lambda1: lambda, first_mode_weight: asm.copies * int_phi * int_phi / (lambda * int_phi2) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FemSolution {
    pub q_steady: f64,
    pub lambda1: f64,
    /// Q_1 = (int phi_1)^2 / (lambda_1 int phi_1^2)
    pub first_mode_weight: f64,
    pub coarse: FemLevel,
    pub fine: FemLevel,
}

impl FemSolution {
    /// |fine - coarse| / 3, the Richardson correction size for the flux.
    pub fn q_error_estimate(&self) -> f64 {
        (self.fine.q_steady - self.coarse.q_steady).abs() / 3.0
    }

    pub fn lambda_error_estimate(&self) -> f64 {
        (self.fine.lambda1 - self.coarse.lambda1).abs() / 3.0
    }
}

/// Default number of radial rings on the coarse mesh.
pub const DEFAULT_RINGS: usize = 64;

/// Steady flux, fundamental eigenvalue and first-mode weight with slip length `beta`.
pub fn fem_solve(shape: FemShape, beta: f64, dp: f64, rings: usize) -> Result<FemSolution> {
    ensure(beta.is_finite() && beta >= 0.0, || format!("slip length must be non-negative, got {beta}"))?;
    ensure(rings >= 4, || "need at least 4 rings".into())?;
    let wedge = Wedge::new(shape)?;
    let coarse = solve_level(&wedge, rings, beta, dp)?;
    let fine = solve_level(&wedge, 2 * rings, beta, dp)?;
    let rich = |c: f64, f: f64| (4.0 * f - c) / 3.0;
    Ok(FemSolution {
        q_steady: rich(coarse.q_steady, fine.q_steady),
        lambda1: rich(coarse.lambda1, fine.lambda1),
        first_mode_weight: rich(coarse.first_mode_weight, fine.first_mode_weight),
        coarse,
        fine,
    })
}
