use penner::coupling::*;
use proptest::prelude::*;

fn sqrt3() -> Thooft {
    Thooft::real(3f64.sqrt()).unwrap()
}

#[test]
fn g_of_n_examples() {
    let th = CouplingSequence::thooft(Thooft::ratio(2, 1).unwrap()).unwrap();
    assert_eq!(th.g_of_n(4), 0.5);
    let ip = CouplingSequence::integer_part(sqrt3(), 1.0 / 7.0).unwrap();
    let expect = 1.0 / (34.0 + (-60.0f64 / 7.0).exp() / 2.0);
    assert!((ip.g_of_n(60) - expect).abs() < 1e-16);
    let inv = ip.inverse(60);
    assert_eq!(inv.int_part(), 34);
    assert!((inv.offset() / ((-60.0f64 / 7.0).exp() / 2.0) - 1.0).abs() < 1e-13);
    let sh = CouplingSequence::shifted(Thooft::ratio(5, 2).unwrap(), 0.3).unwrap();
    assert!((sh.g_of_n(10) - 1.0 / 4.3).abs() < 1e-16);
}

#[test]
fn tiny_offsets_survive() {
    let ip = CouplingSequence::integer_part(sqrt3(), 1.0 / 7.0).unwrap();
    let inv = ip.inverse(4000);
    assert!((inv.ln_abs_offset() - (-4000.0 / 7.0 - 2f64.ln())).abs() < 1e-9);
}

#[test]
fn l_estimates_approach_limit() {
    let ip = CouplingSequence::integer_part(sqrt3(), 1.0 / 3.0).unwrap();
    let target = (-1.0f64 / 3.0).exp();
    let errs: Vec<f64> = [50, 100, 200]
        .iter()
        .map(|&n| (ip.finite_l_estimate(n).value - target).abs())
        .collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
    assert!(errs[2] < 0.02);

    let inf = CouplingSequence::integer_part(sqrt3(), f64::INFINITY).unwrap();
    for n in [1, 7, 60] {
        let e = inf.finite_l_estimate(n);
        assert!(e.degenerate);
        assert_eq!(e.value, 0.0);
    }

    let th = CouplingSequence::thooft(Thooft::ratio(2, 1).unwrap()).unwrap();
    for n in [2, 4, 10] {
        let e = th.finite_l_estimate(n);
        assert!(e.degenerate && e.value == 0.0);
    }
}

#[test]
fn limit_examples() {
    let ip = CouplingSequence::integer_part(sqrt3(), 1.0 / 7.0).unwrap();
    assert_eq!(ip.limit_l(), FineStructure { l: Some((-1.0f64 / 7.0).exp()), exists: true });
    let th = CouplingSequence::thooft(Thooft::ratio(5, 2).unwrap()).unwrap();
    assert!(!th.limit_l().exists);
    let sh = CouplingSequence::shifted(Thooft::ratio(5, 2).unwrap(), 0.3).unwrap();
    assert_eq!(sh.limit_l().l, Some(1.0));
    // α on the lattice k/p lets sin(π/g_n) vanish along a subsequence.
    let lat = CouplingSequence::shifted(Thooft::ratio(5, 2).unwrap(), 0.4).unwrap();
    assert!(!lat.limit_l().exists);
    let irr = CouplingSequence::shifted(sqrt3(), 0.3).unwrap();
    assert!(!irr.limit_l().exists);
}

#[test]
fn fractional_parts_cycle() {
    let sh = CouplingSequence::shifted(Thooft::ratio(5, 2).unwrap(), 0.3).unwrap();
    for n in 1..200u64 {
        let a = sh.inverse(n).fract();
        let b = sh.inverse(n + 5).fract();
        assert!((a - b).abs() < 1e-12);
        let j = sh.residue_class(n).unwrap();
        assert!((a - (0.3 + j as f64 / 5.0).fract()).abs() < 1e-12);
    }
    assert_eq!(residue_class(7, 5, 2), 4);
}

#[test]
fn shifted_bound_up_to_ten_thousand() {
    let t = 2.5;
    let alpha = 0.3;
    let sh = CouplingSequence::shifted(Thooft::real(t).unwrap(), alpha).unwrap();
    for n in (1..=10_000u64).step_by(37) {
        let gap = (n as f64 * sh.g_of_n(n) - t).abs();
        assert!(gap < t * t * (alpha + 1.0) / n as f64);
    }
}

#[test]
fn integer_part_log_error_decreases() {
    let ip = CouplingSequence::integer_part(sqrt3(), 0.5).unwrap();
    let mut prev = f64::INFINITY;
    for k in 4..12 {
        let n = 1u64 << k;
        let e = (ip.finite_l_estimate(n).log_value + 0.5).abs();
        assert!(e < prev);
        prev = e;
    }
}

#[test]
fn invalid_parameters() {
    assert!(Thooft::ratio(0, 3).is_err());
    assert!(Thooft::real(-1.0).is_err());
    assert!(CouplingSequence::shifted(sqrt3(), -0.1).is_err());
    assert!(CouplingSequence::integer_part(sqrt3(), -1.0).is_err());
}

#[test]
fn sequences_roundtrip_json() {
    let seqs = [
        CouplingSequence::integer_part(sqrt3(), f64::INFINITY).unwrap(),
        CouplingSequence::shifted(Thooft::ratio(5, 2).unwrap(), 0.3).unwrap(),
        CouplingSequence::thooft(Thooft::real(2.0).unwrap()).unwrap(),
    ];
    for s in seqs {
        let js = serde_json::to_string(&s).unwrap();
        let back: CouplingSequence = serde_json::from_str(&js).unwrap();
        assert_eq!(back, s, "{js}");
    }
}

proptest! {
    #[test]
    fn n_g_n_tends_to_t(t in 0.3f64..8.0, alpha in 0.0f64..3.0) {
        let sh = CouplingSequence::shifted(Thooft::real(t).unwrap(), alpha).unwrap();
        let ip = CouplingSequence::integer_part(Thooft::real(t).unwrap(), 0.2).unwrap();
        let n = 5000u64;
        prop_assert!((n as f64 * sh.g_of_n(n) - t).abs() < t * t * (alpha + 1.0) / n as f64);
        prop_assert!((n as f64 * ip.g_of_n(n) - t).abs() < 2.0 * t * t / n as f64);
    }
}
