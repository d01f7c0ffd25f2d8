use std::f64::consts::PI;

use chordal_core::densities::montecarlo::{
    mc_c18, mc_omega_inf, mc_vol_s1_minus, mc_vol_s1_plus, mc_vol_s1_plus_rejection, zeta3_series,
    REJECTION_HALF_WIDTH,
};
use chordal_core::densities::padic::{euler_factor, euler_factor_product, omega_p_total, PadicClassSet};
use chordal_core::densities::report::{assemble_constants, ArchimedeanInputs};
use chordal_core::exactmath::{primes_up_to, rat};

/// Plain forward summation with an integral-test tail, independent of the
/// library's summation order.
fn zeta3_oracle() -> f64 {
    let n = 2_000_000u64;
    let s: f64 = (1..=n).map(|k| (k as f64).powi(-3)).sum();
    s + 1.0 / (2.0 * (n as f64 + 0.5).powi(2))
}

#[test]
fn euler_product_converges_to_zeta3() {
    let z = zeta3_oracle();
    // forward summation loses about 1e-10 to rounding
    assert!((zeta3_series(10_000_000).unwrap() - z).abs() < 1e-9);
    let target = 1.0 / (z * z);
    let prod = euler_factor_product(100_000).unwrap();
    assert!((prod - target).abs() < 1e-4, "{prod} vs {target}");
    assert!((euler_factor_product(2).unwrap() - 49.0 / 64.0).abs() < 1e-15);
    assert!(euler_factor_product(3).unwrap() < euler_factor_product(2).unwrap());
    assert!(euler_factor_product(1).is_err());
}

#[test]
fn every_factor_is_exact() {
    for p in primes_up_to(2000) {
        let q = rat(1, 1) - rat(1, p as i64).pow(3);
        assert_eq!(euler_factor(p).unwrap(), &q * &q, "p={p}");
        let r = rat(1, 1) + rat(1, p as i64) + rat(1, p as i64).pow(2);
        assert_eq!(omega_p_total(p).unwrap(), &r * &r);
    }
    assert_eq!(PadicClassSet::new(2).unwrap().reps().len(), 8);
}

#[test]
fn monte_carlo_examples() {
    let n = 200_000;
    let vp = mc_vol_s1_plus(n, 0).unwrap();
    let vm = mc_vol_s1_minus(n, 0).unwrap();
    assert!(vp.value > 0.0);
    assert!(vm.value > 0.0 && vm.value <= PI.powi(3));
    assert_eq!(vp, mc_vol_s1_plus(n, 0).unwrap());
    let rej = mc_vol_s1_plus_rejection(n, 0, REJECTION_HALF_WIDTH).unwrap();
    assert!(rej.value > 0.0);
    assert!(mc_vol_s1_minus(1000, 0).is_err());
    let op = mc_omega_inf(true, n, 0).unwrap();
    let om = mc_omega_inf(false, n, 0).unwrap();
    assert!(op.value.is_finite() && op.value > 0.0);
    assert!(om.value.is_finite() && om.value > 0.0);
}

#[test]
fn assembled_constants_are_positive_and_consistent() {
    let n = 200_000;
    let inputs = ArchimedeanInputs {
        vol_s1_plus: Some(mc_vol_s1_plus(n, 1).unwrap()),
        vol_s1_minus: Some(mc_vol_s1_minus(n, 1).unwrap()),
        c18: Some(mc_c18(&[10.0, 30.0, 100.0, 300.0], n, 1).unwrap()),
        omega_inf_plus1: Some(mc_omega_inf(true, n, 1).unwrap()),
        omega_inf_minus1: Some(mc_omega_inf(false, n, 1).unwrap()),
    };
    let r = assemble_constants(&[2, 3, 5, 7, 11, 13], zeta3_oracle(), &inputs).unwrap();
    assert!(r.constants_positive());
    let check = r.theta_check();
    assert!(check.difference.abs() <= 4.0 * check.sigma, "{check:?}");
    assert_eq!(r.primes[1].total, rat(169, 81));
}
