use num_complex::Complex64;
use proptest::prelude::*;
use slipflow::rootkit::*;
use slipflow::Error;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

// Reference values computed with 30-digit arithmetic.
#[test]
fn bessel_real_reference_values() {
    let cases = [
        (0, 1.0, 0.76519768655796655145),
        (0, 10.0, -0.2459357644513483352),
        (1, 50.0, -0.097511828125175137661),
        (5, 50.0, -0.081400247696569639644),
        (0, 600.5, -0.030805149986298940562),
        (3, 0.5, 0.0025637299945872440754),
        (10, 3.0, 0.000012928351645715883778),
        (20, 5.0, 2.7703300521289416874e-11),
        (1, 1500.3, -0.017051827151132776653),
        (0, 37.2, 0.036518620107154280172),
    ];
    for (n, x, want) in cases {
        let got = bessel_j(n, x).unwrap();
        assert!(rel(got, want) < 1e-12, "J_{n}({x}) = {got}, want {want}");
    }
}

#[test]
fn bessel_real_trivial_points_and_parity() {
    assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
    assert_eq!(bessel_j(3, 0.0).unwrap(), 0.0);
    assert!((bessel_j(1, -2.5).unwrap() + bessel_j(1, 2.5).unwrap()).abs() < 1e-16);
    assert!((bessel_j(2, -7.5).unwrap() - bessel_j(2, 7.5).unwrap()).abs() < 1e-16);
}

#[test]
fn bessel_real_rejects_large_arguments() {
    assert!(matches!(bessel_j(0, 1e4), Err(Error::Domain(_))));
    assert!(matches!(bessel_j(0, f64::NAN), Err(Error::Domain(_))));
}

#[test]
fn bessel_first_zero() {
    let z = bessel_j0_zeros(3).unwrap();
    assert!((z[0] - 2.404825557695773).abs() < 1e-13);
    assert!((z[1] - 5.520078110286311).abs() < 1e-13);
    assert!((z[2] - 8.653727912911013).abs() < 1e-13);
    let many = bessel_j0_zeros(200).unwrap();
    assert!(many.windows(2).all(|w| w[1] > w[0] + 3.0));
    for &x in &many {
        assert!(bessel_j(0, x).unwrap().abs() < 1e-12);
    }
}

#[test]
fn bessel_complex_reference_values() {
    let cases = [
        (0, (2.0, 2.0), (0.027654478380304578126, -1.7799949648342146847)),
        (1, (2.0, 2.0), (1.6170187883495027318, -0.27260958229437976239)),
        (0, (15.0, -15.0), (-127711.89455787744741, 254040.28281785883147)),
        (1, (21.0, -21.0), (93852843.517176714869, 18643584.066244308713)),
        (0, (29.9, 0.0), (-0.097811150066062445526, 0.0)),
        (1, (-3.0, 7.0), (-47.819363637949614935, -143.39837964070489152)),
        (0, (2.5, -2.5), (-1.2776287373036407245, 2.2978711946110883312)),
    ];
    for (n, (re, im), (wr, wi)) in cases {
        let got = bessel_j_complex(n, Complex64::new(re, im)).unwrap();
        let want = Complex64::new(wr, wi);
        assert!((got - want).norm() / want.norm() < 1e-10, "J_{n}({re}+{im}i) = {got}, want {want}");
    }
}

#[test]
fn bessel_complex_domain() {
    assert!(bessel_j_complex(2, Complex64::new(1.0, 0.0)).is_err());
    assert!(bessel_j_complex(0, Complex64::new(25.0, 25.0)).is_err());
}

#[test]
fn sine_integral_and_erf_reference_values() {
    let si = [
        (0.5, 0.49310741804306668916),
        (3.0, 1.8486525279994682564),
        (4.5, 1.6541404143792439835),
        (12.0, 1.5049712415263733705),
        (40.0, 1.5869851193547845068),
        (200.0, 1.5683823393394698334),
    ];
    for (t, want) in si {
        assert!((sine_integral(t) - want).abs() < 1e-13, "Si({t})");
    }
    let erfs = [
        (0.3, 0.32862675945912741619, 0.67137324054087258381),
        (2.9, 0.99995890212190054114, 0.000041097878099458857996),
        (3.1, 0.99998835134263280041, 0.000011648657367199589313),
        (5.0, 0.99999999999846254021, 1.5374597944280348502e-12),
    ];
    for (x, e, ec) in erfs {
        assert!((erf(x) - e).abs() < 1e-14, "erf({x})");
        assert!(rel(erfc(x), ec) < 1e-10, "erfc({x})");
    }
}

#[test]
fn elliptic_e_reference_values() {
    for (k, want) in [(0.3, 1.534833464923249043), (0.9, 1.1716970527816141047), (0.999, 1.0039944099655077705)] {
        assert!((elliptic_e(k).unwrap() - want).abs() < 1e-13);
    }
    assert!((elliptic_e(0.0).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    assert_eq!(elliptic_e(1.0).unwrap(), 1.0);
    assert!(elliptic_e(1.5).is_err());
}

#[test]
fn solver_contract() {
    let r = solve_bracketed(|x| x * x - 2.0, 0.0, 2.0, Tol::default()).unwrap();
    assert!((r.x - 2f64.sqrt()).abs() < 1e-15);
    assert!(matches!(
        solve_bracketed(|x| x * x + 1.0, -1.0, 1.0, Tol::default()),
        Err(Error::NoSignChange { .. })
    ));
    let r = solve_bracketed(|x| (x - 1.0).powi(3), 0.0, 3.0, Tol::default()).unwrap();
    assert!((r.x - 1.0).abs() < 1e-5);
}

#[test]
fn quadrature_and_ode() {
    let v = integrate(|x| x.sin(), 0.0, std::f64::consts::PI, 1e-13).unwrap();
    assert!((v - 2.0).abs() < 1e-13);
    let v = integrate_to_infinity(|x| (-x).exp(), 0.0, 1e-12).unwrap();
    assert!((v - 1.0).abs() < 1e-11);
    let ys = ode_solve(|_, y| -y, 0.0, 1.0, &[0.5, 1.0, 3.0], 1e-12).unwrap();
    for (y, t) in ys.iter().zip([0.5, 1.0, 3.0]) {
        assert!(rel(*y, (-t as f64).exp()) < 1e-9);
    }
}

proptest! {
    // Three-term recurrence J_{n-1} + J_{n+1} = (2n/x) J_n holds for the evaluator.
    #[test]
    fn bessel_recurrence(n in 1u32..30, x in 0.1f64..200.0) {
        let a = bessel_j(n - 1, x).unwrap();
        let b = bessel_j(n, x).unwrap();
        let c = bessel_j(n + 1, x).unwrap();
        let scale = a.abs().max(b.abs()).max(c.abs()).max(1e-300);
        prop_assert!((a + c - 2.0 * n as f64 / x * b).abs() <= 1e-12 * scale * (1.0 + 2.0 * n as f64 / x));
    }

    #[test]
    fn complex_agrees_with_real_on_axis(n in 0u32..2, x in 0.0f64..29.0) {
        let c = bessel_j_complex(n, Complex64::new(x, 0.0)).unwrap();
        let r = bessel_j(n, x).unwrap();
        prop_assert!((c.re - r).abs() < 1e-12 && c.im.abs() < 1e-12);
    }

    #[test]
    fn solver_stays_in_bracket(c in -5.0f64..5.0) {
        let r = solve_bracketed(|x| x.powi(3) - c, -10.0, 10.0, Tol::default()).unwrap();
        prop_assert!((-10.0..=10.0).contains(&r.x));
        prop_assert!((r.x - c.cbrt()).abs() < 1e-12);
    }
}
