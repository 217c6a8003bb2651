//! Quasi-one- and quasi-two-dimensional traps.

#![allow(clippy::excessive_precision)]

use approx::assert_relative_eq;
use boseloops::aniso::{
    additional_q2d, additional_q2d_prediction, classify, meso_q1d, meso_q1d_prediction, noncondensate_aniso,
    noncondensate_q2d_limit, AnisotropicTag,
};
use boseloops::kernels::TrapModel;
use boseloops::rdm::{loop_cutoffs, loop_decompose, DEFAULT_CHI};
use boseloops::thermo::{nu_critical_trap, nu_m, CanonicalTarget};
use boseloops::{Error, SeriesControl};

const ZETA3: f64 = 1.2020569031595942854;
const ORIGIN: [f64; 3] = [0.0; 3];

fn ctl() -> SeriesControl {
    SeriesControl::default()
}

#[test]
fn classification() {
    let q1 = TrapModel::quasi_1d(0.1, 1.0, 1.0, 1.0).unwrap();
    let tag = |nu: f64, trap: &TrapModel| classify(&CanonicalTarget::new(1.0, nu).unwrap(), trap).map(|r| r.tag);
    assert_eq!(tag(1.0, &q1).unwrap(), AnisotropicTag::Subcritical);
    assert_eq!(tag(1.7, &q1).unwrap(), AnisotropicTag::GbecOnly);
    assert_eq!(tag(3.0, &q1).unwrap(), AnisotropicTag::Coexistence);
    assert!(matches!(tag(ZETA3, &q1), Err(Error::Regime(_))));
    assert!(matches!(tag(ZETA3 + 1.0, &q1), Err(Error::Regime(_))));
    let q2 = TrapModel::quasi_2d(0.1, 1.0, 1.0, 1.0).unwrap();
    assert_eq!(tag(3.0, &q2).unwrap(), AnisotropicTag::Supercritical);
    assert!(matches!(
        tag(3.0, &TrapModel::isotropic(3, 0.1).unwrap()),
        Err(Error::Model(_))
    ));
    let r = classify(&CanonicalTarget::new(1.0, 2.0 * ZETA3).unwrap(), &q2).unwrap();
    assert_relative_eq!(r.eta, 2.0, max_relative = 1e-15);
}

#[test]
fn reference_frequency_enters_critical_numbers() {
    let q1 = TrapModel::quasi_1d(0.1, 2.0, 8.0, 1.0).unwrap();
    // ω₀ = (ω₁ω⊥²)^{1/3} = 2
    assert_relative_eq!(
        nu_critical_trap(1.0, &q1).unwrap().finite().unwrap(),
        ZETA3 / 8.0,
        max_relative = 1e-14
    );
    assert_relative_eq!(nu_m(1.0, &q1).unwrap(), ZETA3 / 8.0 + 4.0 / 8.0, max_relative = 1e-14);
}

#[test]
fn mesoscopic_prediction_formulas() {
    let trap = TrapModel::quasi_1d(0.3, 6.0, 1.0, 1.0).unwrap();
    let target = CanonicalTarget::new(1.0, 15.0 * ZETA3).unwrap();
    let p = meso_q1d_prediction(&target, &trap).unwrap();
    assert_relative_eq!(p.exponent, 93.493314690190666642, max_relative = 1e-14);
    assert_relative_eq!(p.ln_prefactor_natural, -2.6952762804553088215, max_relative = 1e-14);
    assert_relative_eq!(p.ln_prefactor_wavelength, p.ln_prefactor_natural, epsilon = 1e-13);
    let above = CanonicalTarget::new(1.0, 40.0 * ZETA3).unwrap();
    let p = meso_q1d_prediction(&above, &trap).unwrap();
    assert_relative_eq!(p.exponent, 36.0 / (2.0 * 0.09), max_relative = 1e-14);
    let below = CanonicalTarget::new(1.0, 1.0).unwrap();
    assert!(matches!(meso_q1d_prediction(&below, &trap), Err(Error::Regime(_))));
}

#[test]
fn mesoscopic_loops_grow_at_the_predicted_exponential_rate() {
    let target = CanonicalTarget::new(1.0, 15.0 * ZETA3).unwrap();
    for kappa in [0.4, 0.3, 0.25] {
        let trap = TrapModel::quasi_1d(kappa, 6.0, 1.0, 1.0).unwrap();
        let ln_meso = meso_q1d(&ORIGIN, &ORIGIN, &target, &trap, &ctl()).unwrap().ln();
        let want = meso_q1d_prediction(&target, &trap).unwrap().ln_value();
        assert!((ln_meso / want - 1.0).abs() < 0.1, "kappa {kappa}: {ln_meso} vs {want}");
    }
}

#[test]
fn quasi_two_dimensional_closed_forms() {
    let q2 = TrapModel::quasi_2d(0.1, 2.0, 1.0, 1.0).unwrap();
    assert_relative_eq!(
        additional_q2d_prediction(2.0, &q2).unwrap(),
        0.12698727186848193957,
        max_relative = 1e-14
    );
    let q2 = TrapModel::quasi_2d(0.1, 1.0, 1.0, 1.0).unwrap();
    assert_relative_eq!(
        noncondensate_q2d_limit(&ORIGIN, &ORIGIN, 1.0, &q2, &ctl()).unwrap(),
        0.34545633143818876756,
        max_relative = 1e-9
    );
    assert!(additional_q2d_prediction(1.0, &TrapModel::quasi_1d(0.1, 1.0, 1.0, 1.0).unwrap()).is_err());
}

#[test]
fn additional_term_split_is_exact() {
    let q2 = TrapModel::quasi_2d(0.02, 1.0, 1.0, 1.0).unwrap();
    let target = CanonicalTarget::new(1.0, 2.0 * ZETA3).unwrap();
    let a = additional_q2d(&ORIGIN, &ORIGIN, &target, &q2, &ctl()).unwrap();
    assert_relative_eq!(a.first_part + a.second_part, a.meso, max_relative = 1e-9);
    assert!(a.meso > 0.0 && a.meso < a.predicted_limit);
    assert!(a.meso_raw > a.meso);
}

#[test]
fn decomposition_of_quasi_two_dimensional_density() {
    let q2 = TrapModel::quasi_2d(0.02, 1.0, 1.0, 1.0).unwrap();
    let target = CanonicalTarget::new(1.0, 2.0 * ZETA3).unwrap();
    let dec = loop_decompose(&ORIGIN, &ORIGIN, &target, &q2, &ctl()).unwrap();
    assert_relative_eq!(
        dec.short_sum + dec.meso_sum + dec.macro_sum,
        dec.total,
        max_relative = 1e-9
    );
    let a = additional_q2d(&ORIGIN, &ORIGIN, &target, &q2, &ctl()).unwrap();
    assert_relative_eq!(dec.meso_noncondensate, a.meso, max_relative = 1e-9);
    let (ln_n, ln_m) = loop_cutoffs(&q2, &ctl(), DEFAULT_CHI).unwrap();
    assert!(ln_n < ln_m);
}

#[test]
fn noncondensate_density_stays_finite_in_quasi_two_dimensions() {
    let target = CanonicalTarget::new(1.0, 2.0 * ZETA3).unwrap();
    let mut prev = 0.0;
    for kappa in [0.1, 0.02, 0.005] {
        let q2 = TrapModel::quasi_2d(kappa, 1.0, 1.0, 1.0).unwrap();
        let v = noncondensate_aniso(&ORIGIN, &ORIGIN, &target, &q2, &ctl()).unwrap();
        assert!(v > prev && v < 0.35);
        prev = v;
    }
}
