//! Particle number, chemical-potential solver, occupations and regimes.

#![allow(clippy::excessive_precision)]

use approx::assert_relative_eq;
use boseloops::kernels::TrapModel;
use boseloops::specfun::PhysicalConstants;
use boseloops::thermo::{
    gbec_band_sum, grand_potential, ln_gap_asymptotic, mu_open_trap, nu_critical, nu_critical_trap, nu_eigen_sum, nu_m,
    nu_rescaled, occupation, regime, solve_mu, CanonicalTarget, GrandCanonicalPoint, Regime,
};
use boseloops::{Error, SeriesControl};

const ZETA3: f64 = 1.2020569031595942854;

fn ctl() -> SeriesControl {
    SeriesControl::default()
}

#[test]
fn nu_isotropic_reference_values() {
    let cases = [
        (3, 0.1, 1.0, 0.0, 1.1969325438054996876),
        (1, 0.2, 1.0, -0.3, 1.3330446678055307222),
        (2, 0.05, 2.0, 0.0, 0.39883768337872327578),
    ];
    for (d, kappa, beta, mu, want) in cases {
        let pt = GrandCanonicalPoint::new(beta, mu, TrapModel::isotropic(d, kappa).unwrap()).unwrap();
        assert_relative_eq!(nu_rescaled(&pt, &ctl()).unwrap(), want, max_relative = 1e-9);
    }
}

#[test]
fn nu_anisotropic_reference_values() {
    let q2 = TrapModel::quasi_2d(0.2, 1.0, 1.0, 1.0).unwrap();
    let pt = GrandCanonicalPoint::from_ln_gap(1.0, 0.01f64.ln(), q2).unwrap();
    assert_relative_eq!(
        nu_rescaled(&pt, &ctl()).unwrap(),
        1.4104285924931654881,
        max_relative = 1e-9
    );
    let q1 = TrapModel::quasi_1d(0.5, 1.0, 1.0, 1.0).unwrap();
    let pt = GrandCanonicalPoint::from_ln_gap(1.0, 0.05f64.ln(), q1).unwrap();
    assert_relative_eq!(
        nu_rescaled(&pt, &ctl()).unwrap(),
        2.3334396607657599274,
        max_relative = 1e-9
    );
}

#[test]
fn loop_form_matches_eigenvalue_sum() {
    let trap = TrapModel::isotropic(3, 0.3).unwrap();
    let pt = GrandCanonicalPoint::new(1.5, 0.2, trap).unwrap();
    let eig = nu_eigen_sum(&pt, 400).unwrap();
    assert!(eig.tail_bound < 1e-12);
    assert_relative_eq!(nu_rescaled(&pt, &ctl()).unwrap(), eig.value, max_relative = 1e-9);
}

#[test]
fn grand_potential_reference_value() {
    let pt = GrandCanonicalPoint::new(1.0, -0.3, TrapModel::isotropic(1, 0.2).unwrap()).unwrap();
    assert_relative_eq!(
        grand_potential(&pt, &ctl()).unwrap(),
        -4.7849077105155560059,
        max_relative = 1e-9
    );
}

#[test]
fn critical_numbers() {
    let c = PhysicalConstants::default();
    assert_relative_eq!(
        nu_critical(1.0, 3, &c).unwrap().finite().unwrap(),
        ZETA3,
        max_relative = 1e-14
    );
    assert_relative_eq!(
        nu_critical(2.0, 2, &c).unwrap().finite().unwrap(),
        0.41123351671205660912,
        max_relative = 1e-14
    );
    assert!(nu_critical(1.0, 1, &c).unwrap().is_divergent());
    let q1 = TrapModel::quasi_1d(0.1, 1.0, 1.0, 1.0).unwrap();
    assert_relative_eq!(nu_m(1.0, &q1).unwrap(), ZETA3 + 1.0, max_relative = 1e-15);
    assert!(matches!(
        nu_m(1.0, &TrapModel::isotropic(3, 0.1).unwrap()),
        Err(Error::Model(_))
    ));
}

#[test]
fn open_trap_chemical_potential() {
    let c = PhysicalConstants::default();
    assert_relative_eq!(
        mu_open_trap(1.0, 0.5 * ZETA3, 3, &c).unwrap(),
        -0.59018425314480445214,
        max_relative = 1e-10
    );
    assert_relative_eq!(
        mu_open_trap(1.0, 1.0, 1, &c).unwrap(),
        -0.45867514538708189102,
        max_relative = 1e-10
    );
    assert!(matches!(mu_open_trap(1.0, 2.0 * ZETA3, 3, &c), Err(Error::Regime(_))));
}

#[test]
fn solver_reaches_target_in_all_regimes() {
    for (trap, nu) in [
        (TrapModel::isotropic(3, 0.05).unwrap(), 0.5 * ZETA3),
        (TrapModel::isotropic(3, 0.05).unwrap(), 2.0 * ZETA3),
        (TrapModel::isotropic(1, 0.01).unwrap(), 3.0),
        (TrapModel::quasi_1d(0.02, 1.0, 1.0, 1.0).unwrap(), 1.7),
        (TrapModel::quasi_1d(0.02, 1.0, 1.0, 1.0).unwrap(), 4.0),
        (TrapModel::quasi_2d(0.01, 1.0, 1.0, 1.0).unwrap(), 2.0 * ZETA3),
    ] {
        let target = CanonicalTarget::new(1.0, nu).unwrap();
        let sol = solve_mu(&target, &trap, &ctl()).unwrap();
        let got = nu_rescaled(&sol.point, &ctl()).unwrap();
        assert_relative_eq!(got, nu, max_relative = 1e-9);
        assert!(sol.mu() <= trap.ground_energy());
    }
}

#[test]
fn subcritical_mu_tends_to_open_trap_value() {
    let c = PhysicalConstants::default();
    let target = CanonicalTarget::new(1.0, 0.5 * ZETA3).unwrap();
    let want = mu_open_trap(1.0, target.nu, 3, &c).unwrap();
    let sol = solve_mu(&target, &TrapModel::isotropic(3, 0.005).unwrap(), &ctl()).unwrap();
    assert!((sol.mu() - want).abs() < 0.02);
}

#[test]
fn supercritical_gap_follows_asymptotic_law() {
    let target = CanonicalTarget::new(1.0, 2.0 * ZETA3).unwrap();
    let trap = TrapModel::isotropic(3, 0.01).unwrap();
    let sol = solve_mu(&target, &trap, &ctl()).unwrap();
    let asym = ln_gap_asymptotic(&target, &trap).unwrap();
    assert!(((sol.ln_gap() - asym).exp() - 1.0).abs() < 0.05);
}

#[test]
fn ground_occupation_approaches_condensate_fraction() {
    let target = CanonicalTarget::new(1.0, 2.0 * ZETA3).unwrap();
    let occ = occupation(&target, &TrapModel::isotropic(3, 0.005).unwrap(), &[0, 0, 0], &ctl()).unwrap();
    assert!((occ - ZETA3).abs() / ZETA3 < 0.02);
}

#[test]
fn regimes() {
    let q1 = TrapModel::quasi_1d(0.1, 1.0, 1.0, 1.0).unwrap();
    let at = |nu: f64| regime(&CanonicalTarget::new(1.0, nu).unwrap(), &q1).unwrap();
    assert_eq!(at(1.0), Regime::Subcritical);
    assert_eq!(at(ZETA3), Regime::Critical);
    assert_eq!(at(1.8), Regime::Supercritical);
    assert_eq!(at(ZETA3 + 1.0), Regime::Critical);
    assert_eq!(at(3.0), Regime::Coexistence);
    let d1 = TrapModel::isotropic(1, 0.1).unwrap();
    assert_eq!(
        regime(&CanonicalTarget::new(1.0, 50.0).unwrap(), &d1).unwrap(),
        Regime::Subcritical
    );
}

#[test]
fn gbec_band_below_second_critical_number() {
    let q1 = TrapModel::quasi_1d(0.01, 1.0, 1.0, 1.0).unwrap();
    let nuc = nu_critical_trap(1.0, &q1).unwrap().finite().unwrap();
    let num = nu_m(1.0, &q1).unwrap();
    let nu = 0.5 * (nuc + num);
    let band = gbec_band_sum(&CanonicalTarget::new(1.0, nu).unwrap(), &q1, 0.05, &ctl()).unwrap();
    assert!((band - (nu - nuc)).abs() / (nu - nuc) < 0.05);
}

#[test]
fn invalid_states_are_rejected() {
    let trap = TrapModel::isotropic(3, 0.1).unwrap();
    assert!(GrandCanonicalPoint::new(1.0, 0.2, trap).is_err());
    assert!(GrandCanonicalPoint::new(0.0, -1.0, trap).is_err());
    assert!(CanonicalTarget::new(1.0, -1.0).is_err());
}
