use std::f64::consts::PI;

use penner::asympt::planar_f;
use penner::coupling::{Coupling, CouplingSequence, Thooft};
use penner::partition::*;
use penner::specfun::{log_barnes_g, log_gamma, NearInteger};
use proptest::prelude::*;

fn sequences() -> Vec<CouplingSequence> {
    vec![
        CouplingSequence::thooft(Thooft::ratio(5, 2).unwrap()).unwrap(),
        CouplingSequence::integer_part(Thooft::real(3f64.sqrt()).unwrap(), 1.0 / 7.0).unwrap(),
        CouplingSequence::shifted(Thooft::ratio(5, 2).unwrap(), 0.3).unwrap(),
        CouplingSequence::integer_part(Thooft::real(1.0 / 3f64.sqrt()).unwrap(), 1.0 / 3.0).unwrap(),
    ]
}

/// ln|Z_n| from the recurrence coefficients in plain f64, as a separate oracle.
fn naive_log_z(n: u64, g: f64) -> f64 {
    let inv = 1.0 / g;
    let h0 = (2.0 * (PI * inv).sin().abs()).ln() + (1.0 - inv) * g.ln() + log_gamma(1.0 - inv).unwrap().logabs;
    let mut s = n as f64 * h0;
    for k in 1..n {
        let kg = k as f64 * g;
        s += (n - k) as f64 * (kg * (kg - 1.0)).abs().ln();
    }
    s
}

#[test]
fn h0_examples() {
    let g = Coupling::from_g(2.0).unwrap();
    assert!((log_h0(&g).logabs - (2.0 * 2f64.sqrt() * PI.sqrt()).ln()).abs() < 1e-15);
    for k in [1, 3, 10] {
        let g = Coupling::from_inverse(NearInteger::integer(k)).unwrap();
        assert!(log_h0(&g).is_zero());
    }
    assert!(log_h0(&Coupling::from_g(0.01 / 1.001).unwrap()).logabs.is_finite());
}

#[test]
fn hand_values() {
    let g = Coupling::from_g(2.0).unwrap();
    let h0 = (2.0 * 2f64.sqrt() * PI.sqrt()).ln();
    assert!((log_z_product(1, &g).unwrap().log_abs_z - h0).abs() < 1e-15);
    let two = 2.0 * h0 + 2f64.ln();
    assert!((log_z_product(2, &g).unwrap().log_abs_z - two).abs() < 1e-14);
    assert!((log_z_barnes(2, &g).unwrap().log_abs_z - two).abs() < 1e-12);
    assert!(log_z_product(0, &g).is_err());
}

#[test]
fn matches_naive_product() {
    for g in [0.37, 2.0, 0.0513] {
        let c = Coupling::from_g(g).unwrap();
        for n in [1, 5, 30] {
            let v = log_z_product(n, &c).unwrap().log_abs_z;
            let o = naive_log_z(n, g);
            assert!((v - o).abs() < 1e-9 * o.abs().max(1.0), "g={g} n={n}");
        }
    }
}

#[test]
fn routes_agree_to_one_hundred() {
    for seq in sequences() {
        for n in 1..=100 {
            let g = seq.coupling(n);
            let p = log_z_product(n, &g).unwrap();
            let b = log_z_barnes(n, &g).unwrap();
            assert!(route_gap(&p, &b) < 1e-8, "{} n={n}", seq.kind());
        }
    }
}

#[test]
fn sixty_integer_part() {
    let seq = CouplingSequence::integer_part(Thooft::real(3f64.sqrt()).unwrap(), 1.0 / 7.0).unwrap();
    let g = seq.coupling(60);
    let p = log_z_product(60, &g).unwrap();
    assert!(p.log_abs_z.is_finite());
    let b = log_z_barnes(60, &g).unwrap();
    assert!((p.log_abs_z - b.log_abs_z).abs() < 1e-8 * p.log_abs_z.abs());
}

#[test]
fn below_one_takes_negative_branch() {
    let seq = CouplingSequence::integer_part(Thooft::real(1.0 / 3f64.sqrt()).unwrap(), 1.0 / 3.0).unwrap();
    let inv = seq.inverse(60);
    let a = inv.neg().add_int(61);
    let b = inv.neg().add_int(1);
    assert!(a.value() < 0.0 && b.value() < 0.0);
    assert!(log_barnes_g(&a).unwrap().logabs.is_finite());
    let g = seq.coupling(60);
    let gap = route_gap(&log_z_product(60, &g).unwrap(), &log_z_barnes(60, &g).unwrap());
    assert!(gap < 1e-8);
}

#[test]
fn vanishing_partition_function() {
    let seq = CouplingSequence::thooft(Thooft::ratio(2, 1).unwrap()).unwrap();
    let z = log_z_product(4, &seq.coupling(4)).unwrap();
    assert!(z.vanishes());
    assert!(z.free_energy().is_none());
    assert!(log_z_barnes(4, &seq.coupling(4)).unwrap().vanishes());
    assert!(free_energy_n(4, &seq).is_err());
}

#[test]
fn free_energy_curves() {
    let t = 3f64.sqrt();
    let rs = [1.0 / 7.0, 1.0 / 3.0];
    let mut at400 = Vec::new();
    for &r in &rs {
        let seq = CouplingSequence::integer_part(Thooft::real(t).unwrap(), r).unwrap();
        let limit = planar_f(t, (-r).exp()).unwrap();
        let e100 = (free_energy_n(100, &seq).unwrap() - limit).abs();
        let e400 = (free_energy_n(400, &seq).unwrap() - limit).abs();
        assert!(e400 < e100, "r={r}");
        at400.push(free_energy_n(400, &seq).unwrap());
    }
    let expect = (1.0 - 1.0 / t) * (1.0 / 3.0 - 1.0 / 7.0);
    assert!(((at400[1] - at400[0]) - expect).abs() < 5e-3);

    let below = 1.0 / t;
    let f: Vec<f64> = rs
        .iter()
        .map(|&r| {
            let seq = CouplingSequence::integer_part(Thooft::real(below).unwrap(), r).unwrap();
            free_energy_n(400, &seq).unwrap()
        })
        .collect();
    assert!((f[0] - f[1]).abs() < 5e-3);
}

#[test]
fn sweep_layout() {
    let seq = CouplingSequence::shifted(Thooft::ratio(5, 2).unwrap(), 0.3).unwrap();
    let rows = sweep(&seq, 4).unwrap();
    assert_eq!(rows.len(), 4);
    let csv = sweep_csv(&rows);
    assert!(csv.starts_with("n,g_n,logabsZ_product,logabsZ_barnes,F_n\n"));
    assert_eq!(csv.lines().count(), 5);
    let js = serde_json::to_value(rows[0]).unwrap();
    assert!(js.get("logabsZ_product").is_some() && js.get("F_n").is_some());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn route_equality(inv in 0.05f64..80.0, n in 1u64..120) {
        prop_assume!((inv - inv.round()).abs() > 1e-6);
        let g = Coupling::from_inverse(NearInteger::from_f64(inv)).unwrap();
        let p = log_z_product(n, &g).unwrap();
        let b = log_z_barnes(n, &g).unwrap();
        prop_assert!(route_gap(&p, &b) < 1e-8);
    }
}
