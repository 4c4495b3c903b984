use num_complex::Complex64;
use penner::asympt::planar_f;
use penner::electro::*;
use penner::spectral::SpectralCurve;
use proptest::prelude::*;

fn s3() -> f64 {
    3f64.sqrt()
}

fn l7() -> f64 {
    (-1.0f64 / 7.0).exp()
}

fn l3() -> f64 {
    (-1.0f64 / 3.0).exp()
}

#[test]
fn closed_form_examples() {
    assert!((u_interval_closed(2.0).unwrap() - 0.80685).abs() < 1e-5);
    assert!((u_interval_closed(1.0 + 1e-13).unwrap() - 1.0).abs() < 1e-9);
    assert!(u_interval_closed(0.9).is_err());
    assert!((total_energy(2.0, 1.0).unwrap() - 0.40343).abs() < 1e-5);
    assert_eq!(total_energy(s3(), l7()).unwrap(), total_energy(s3(), l3()).unwrap());
    assert!(total_energy(1.0, 0.5).is_err());
    assert!(re_g_at_a(2.0).unwrap().is_finite());
    let t = 1.8;
    let l1 = int_v_rho_closed(t, 1.0).unwrap();
    assert!((l1 - (t - 2.0 + (1.0 - 1.0 / t) * (t - 1.0).ln())).abs() < 1e-15);
}

#[test]
fn re_g_consistency() {
    for &t in &[1.2, s3(), 2.0, 9.0] {
        let a = penner::spectral::endpoints(t).unwrap().0;
        let lhs = (a + a.ln()) / t - 2.0 * re_g_at_a(t).unwrap();
        assert!((lhs - u_interval_closed(t).unwrap()).abs() < 1e-10);
    }
}

#[test]
fn potential_is_constant_on_components() {
    let curve = SpectralCurve::new(s3(), l7()).unwrap();
    let r = report(&curve, 10).unwrap();
    assert!(r.u_interval_spread < 1e-5);
    assert!(r.u_oval_spread < 1e-5);
    assert!((r.u_interval - r.u_interval_closed).abs() < 1e-5);
    assert!((r.u_oval - r.u_interval + l7().ln()).abs() < 1e-4);
    assert!((r.re_g_at_a - r.re_g_at_a_quadrature).abs() < 1e-5);
    assert!((r.int_v_rho - r.int_v_rho_closed).abs() < 1e-5);
    assert!((r.energy - r.energy_assembled).abs() < 1e-5);
    assert!((r.energy - r.energy_double_counting).abs() < 1e-5);
    assert!(r.free_energy_relation_gap < 1e-10);
    let js = serde_json::to_value(r).unwrap();
    for key in ["U_interval", "U_oval", "energy", "intVrho", "free_energy_relation_gap"] {
        assert!(js.get(key).is_some(), "{key}");
    }
}

#[test]
fn int_v_rho_shift_between_ovals() {
    let a = int_v_rho(&SpectralCurve::new(s3(), l3()).unwrap()).unwrap();
    let b = int_v_rho(&SpectralCurve::new(s3(), l7()).unwrap()).unwrap();
    assert!((a.quadrature - b.quadrature + 4.0 / 21.0).abs() < 1e-5);
    assert!((a.quadrature - a.closed_form).abs() < 1e-5);
    assert!(int_v_rho(&SpectralCurve::new(s3(), 0.0).unwrap()).is_err());
}

#[test]
fn potential_off_support() {
    let curve = SpectralCurve::new(2.0, 0.5).unwrap();
    // Far away U ≈ V/t - 2 ln|z|.
    let z = Complex64::new(0.0, 1e5);
    let u = potential_u(z, &curve).unwrap();
    let far = external_v(z) / 2.0 - 2.0 * z.norm().ln();
    assert!((u - far).abs() < 1e-4);
    assert!(potential_u(Complex64::new(0.0, 0.0), &curve).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn ledger_identity(t in 1.01f64..20.0, l in 0.001f64..1.0) {
        let f = planar_f(t, l).unwrap();
        let e = total_energy(t, l).unwrap();
        prop_assert!((f - e + (1.0 - 1.0 / t) * l.ln()).abs() < 1e-12);
    }
}
