mod common;

use common::{rel, simpson};
use slipflow::geomfn::*;
use slipflow::Error;
use std::f64::consts::PI;

#[test]
fn disk_identities() {
    let g = geom_summary(&ShapeSpec::Disk { radius: 1.0 }).unwrap();
    assert!(rel(g.area, PI) < 1e-15);
    assert!(rel(g.perimeter, 2.0 * PI) < 1e-15);
    assert!(rel(g.polar_moment, PI / 2.0) < 1e-15);
    assert!(rel(g.b_functional.unwrap(), 2.0 * PI) < 1e-15);
    assert_eq!(g.isoperimetric_deficit, 0.0);
}

#[test]
fn ellipse_polar_moment_and_perimeter() {
    for a in [1.0, 1.2, 2.0, 0.7] {
        let g = geom_summary(&ShapeSpec::EllipseUnitArea { a }).unwrap();
        assert!(rel(g.polar_moment, PI * (a * a + 1.0 / (a * a)) / 4.0) < 1e-13, "a = {a}");
        assert!(rel(g.area, PI) < 1e-14);
        // arclength of (a cos t, sin t / a)
        let arc = simpson(|t| ((a * t.sin()).powi(2) + (t.cos() / a).powi(2)).sqrt(), 0.0, 2.0 * PI, 20_000);
        assert!(rel(g.perimeter, arc) < 1e-8, "a = {a}: {} vs {arc}", g.perimeter);
    }
}

#[test]
fn rectangle_and_triangle_closed_forms() {
    let g = geom_summary(&ShapeSpec::Rectangle { a: 1.0, b: 2.0 }).unwrap();
    assert!(rel(g.area, 8.0) < 1e-15);
    assert!(rel(g.perimeter, 12.0) < 1e-15);
    // (area / 3)(a^2 + b^2)
    assert!(rel(g.polar_moment, 8.0 * 5.0 / 3.0) < 1e-14);
    let t = geom_summary(&ShapeSpec::EquilateralTriangle { a: 1.0 }).unwrap();
    assert!(rel(t.area, 3f64.sqrt()) < 1e-15);
    assert!(rel(t.perimeter, 6.0) < 1e-15);
    // sqrt3 a^4 / 3 for side 2a
    assert!(rel(t.polar_moment, 3f64.sqrt() / 3.0) < 1e-14);
}

#[test]
fn polygon_deficit_ratios() {
    let g = geom_summary(&ShapeSpec::RegularPolygon { n: 3, area: 3f64.sqrt() }).unwrap();
    let ratio = g.perimeter.powi(2) / (4.0 * PI * g.area) - 1.0;
    assert!((ratio - (3.0 * 3f64.sqrt() / PI - 1.0)).abs() < 1e-14);
    assert!((ratio - 0.653986686).abs() < 5e-10);
    let sq = polygon_table(4).unwrap();
    assert!((sq.deficit_ratio - (4.0 / PI - 1.0)).abs() < 1e-14);
    // the n = 4 polygon coincides with the square
    let p4 = geom_summary(&ShapeSpec::RegularPolygon { n: 4, area: 4.0 }).unwrap();
    let r = geom_summary(&ShapeSpec::Rectangle { a: 1.0, b: 1.0 }).unwrap();
    assert!(rel(p4.perimeter, r.perimeter) < 1e-14);
    assert!(rel(p4.polar_moment, r.polar_moment) < 1e-14);
}

#[test]
fn polygon_polar_moment_by_triangles() {
    // n isosceles triangles meeting at the centre; one has I_apex = area (rho^2/2 + side^2/24)
    for n in [3u32, 5, 6, 9] {
        let area = 2.5;
        let (side, rho, _) = regular_polygon_dims(n, area);
        let tri_area = area / n as f64;
        let i_apex = tri_area * (rho * rho / 2.0 + side * side / 24.0);
        let g = geom_summary(&ShapeSpec::RegularPolygon { n, area }).unwrap();
        assert!(rel(g.polar_moment, n as f64 * i_apex) < 1e-13, "n = {n}");
        assert!(rel(g.polar_moment, regular_polygon_polar_moment(n, area)) < 1e-13);
    }
}

#[test]
fn fraenkel_ellipse() {
    assert_eq!(fraenkel_alpha_ellipse(1.0), 0.0);
    for a in [1.3, 2.0] {
        assert!((fraenkel_alpha_ellipse(a) - fraenkel_alpha_ellipse(1.0 / a).abs()).abs() < 1e-15);
    }
    // near a = 1 the leading behaviour is (2(a - 1) - (a - 1)^2) / pi
    let d = 1e-3;
    let lead = (2.0 * d - d * d) / PI;
    assert!((fraenkel_alpha_ellipse(1.0 + d) - lead).abs() < 1e-8);
    // a = 2: area of the ellipse outside the concentric unit disk, by polar quadrature
    let a = 2.0;
    let outside = simpson(|t| 0.5 * (ellipse_radius(a, t).powi(2) - 1.0).max(0.0), 0.0, 2.0 * PI, 400_000);
    assert!((outside / PI - fraenkel_alpha_ellipse(a)).abs() < 1e-8);
    assert!((fraenkel_alpha_ellipse(a) - 2.0 / PI * 0.75f64.atan()).abs() < 1e-15);
}

#[test]
fn fraenkel_fixtures() {
    assert_eq!(fraenkel_alpha_fixture(3).unwrap(), 0.3649426110 / 2.0);
    assert_eq!(fraenkel_alpha_fixture(4).unwrap(), 0.1810919377 / 2.0);
    assert_eq!(fraenkel_alpha_fixture(6).unwrap(), 0.0744657545 / 2.0);
    assert!(matches!(fraenkel_alpha_fixture(5), Err(Error::Unsupported(_))));
    for n in [3, 4, 6] {
        let closed = fraenkel_alpha_regular_polygon(n).unwrap();
        assert!((closed - fraenkel_alpha_fixture(n).unwrap()).abs() < 1e-9, "n = {n}");
    }
}

#[test]
fn fourier_zero_is_unit_disk() {
    let f = fourier_functionals(&FourierBoundary::new(0.0, vec![], vec![])).unwrap();
    for p in [f.area_radius, f.perimeter_radius, f.moment_radius] {
        assert!((p.estimate - 1.0).abs() < 1e-15);
        assert!((p.exact - 1.0).abs() < 1e-12);
    }
}

#[test]
fn fourier_a0_only_area() {
    let fb = FourierBoundary::new(0.07, vec![], vec![]);
    let g = geom_summary(&ShapeSpec::FourierBoundary(fb.clone())).unwrap();
    assert!(rel(g.area, PI * 1.07f64.powi(2)) < 1e-13);
    assert!(rel(fourier_area_over_pi(&fb), 1.07f64.powi(2)) < 1e-15);
}

#[test]
fn fourier_second_order_perimeter() {
    let e = 0.05;
    let fb = FourierBoundary::new(0.0, vec![0.0, e], vec![]);
    let est = fourier_functionals(&fb).unwrap().perimeter_radius.estimate * 2.0 * PI;
    assert!(rel(est, 2.0 * PI * (1.0 + 0.25 * 4.0 * e * e)) < 1e-15);
    let arc = simpson(
        |t| {
            let r = 1.0 + e * (2.0 * t).cos();
            let dr = -2.0 * e * (2.0 * t).sin();
            (r * r + dr * dr).sqrt()
        },
        0.0,
        2.0 * PI,
        20_000,
    );
    assert!((est - arc).abs() < 2.0 * PI * e.powi(3), "{est} vs {arc}");
    let g = geom_summary(&ShapeSpec::FourierBoundary(fb)).unwrap();
    assert!(rel(g.perimeter, arc) < 1e-10);
}

#[test]
fn ellipse_expansion_coefficients() {
    let z = ellipse_boundary_expansion(1.0);
    assert!(z.a0 == 0.0 && z.cos.iter().all(|&c| c == 0.0) && z.sin.is_empty());
    let fb = ellipse_boundary_expansion(1.1);
    assert!((fb.cos[1] - (0.1 - 0.005)).abs() < 1e-15);
    assert!((fb.a0 + 0.0025).abs() < 1e-15);
    let area = fourier_area_over_pi(&fb) * PI;
    let exact = simpson(|t| 0.5 * ellipse_radius(1.1, t).powi(2), 0.0, 2.0 * PI, 4000);
    assert!(rel(exact, PI) < 1e-12);
    assert!((area - exact).abs() < 5e-3 && (area - exact).abs() > 1e-6);
}

#[test]
fn b_functional_star_shaped() {
    // regular polygon closed form n side / inradius
    let (side, rho, _) = regular_polygon_dims(6, 1.0);
    let b = b_functional(&ShapeSpec::RegularPolygon { n: 6, area: 1.0 }).unwrap();
    assert!(rel(b, 6.0 * side / rho) < 1e-14);
    // a radius that changes sign has no star-shaped boundary
    let bad = FourierBoundary::new(0.0, vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.2], vec![]);
    assert!(b_functional(&ShapeSpec::FourierBoundary(bad)).is_err());
}

#[test]
fn rejects_bad_dimensions() {
    assert!(matches!(geom_summary(&ShapeSpec::Disk { radius: -1.0 }), Err(Error::Domain(_))));
    assert!(geom_summary(&ShapeSpec::Rectangle { a: 1.0, b: f64::NAN }).is_err());
    assert!(geom_summary(&ShapeSpec::RegularPolygon { n: 2, area: 1.0 }).is_err());
}
