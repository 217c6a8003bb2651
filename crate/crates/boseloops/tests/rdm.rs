//! Reduced density matrix: loop form, eigenfunction oracle, decomposition
//! and open-trap limits.

#![allow(clippy::excessive_precision)]

use approx::assert_relative_eq;
use boseloops::extended::{DivergenceLaw, ExtendedReal};
use boseloops::kernels::TrapModel;
use boseloops::rdm::{
    barometric_radii, condensate_limit, density_profile, ground_term_at, linear_fit, local_density_at, loop_decompose,
    loop_decompose_at, open_trap_rdm, open_trap_series, rdm_at, rdm_eigen, rdm_eigen_at, rdm_rescaled, richardson,
    semiclassical_density, theorem2_limit, SmallParameter, DEFAULT_CHI,
};
use boseloops::specfun::PhysicalConstants;
use boseloops::thermo::{nu_rescaled, CanonicalTarget, GrandCanonicalPoint};
use boseloops::{Error, SeriesControl};

const ZETA3: f64 = 1.2020569031595942854;

fn ctl() -> SeriesControl {
    SeriesControl::default()
}

#[test]
fn one_dimensional_reference_values() {
    let pt = GrandCanonicalPoint::new(1.0, -0.3, TrapModel::isotropic(1, 0.2).unwrap()).unwrap();
    assert_relative_eq!(
        rdm_at(&[0.4], &[-0.1], &pt, &ctl()).unwrap(),
        0.65053875003659696487,
        max_relative = 1e-10
    );
    let pt = GrandCanonicalPoint::new(2.0, 0.2, TrapModel::isotropic(1, 0.5).unwrap()).unwrap();
    assert_relative_eq!(
        rdm_at(&[1.5], &[1.5], &pt, &ctl()).unwrap(),
        1.3953583714485190867,
        max_relative = 1e-10
    );
}

#[test]
fn three_dimensional_reference_value() {
    let trap = TrapModel::isotropic(3, 0.1).unwrap();
    let pt = GrandCanonicalPoint::from_ln_gap(1.0, 0.02f64.ln(), trap).unwrap();
    let got = rdm_at(&[0.5, 0.0, 0.0], &[0.0, 0.2, 0.0], &pt, &ctl()).unwrap();
    assert_relative_eq!(got, 0.39324429234702070765, max_relative = 1e-9);
}

#[test]
fn eigenfunction_sum_agrees_with_loops() {
    let pt = GrandCanonicalPoint::new(1.0, 0.3, TrapModel::isotropic(2, 0.7).unwrap()).unwrap();
    let x = [0.3, -0.2];
    let y = [0.1, 0.4];
    let eig = rdm_eigen_at(&x, &y, &pt, 80).unwrap();
    assert!(eig.tail_bound < 1e-12);
    assert_relative_eq!(rdm_at(&x, &y, &pt, &ctl()).unwrap(), eig.value, epsilon = 1e-10);
}

#[test]
fn truncated_eigen_sum_warns() {
    let target = CanonicalTarget::new(1.0, 1.0).unwrap();
    let trap = TrapModel::isotropic(1, 0.2).unwrap();
    let err = rdm_eigen(&[0.0], &[0.0], &target, &trap, 5, &ctl()).unwrap_err();
    assert!(matches!(err, Error::TruncationWarning { .. }));
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn diagonal_integrates_to_particle_number() {
    let trap = TrapModel::isotropic(1, 0.5).unwrap();
    let pt = GrandCanonicalPoint::new(1.0, 0.0, trap).unwrap();
    let q = boseloops::quad::integrate_real_line(|x| rdm_at(&[x], &[x], &pt, &ctl()).unwrap(), 0.0, 2.0, 1e-12, 1e-10)
        .unwrap();
    let n = nu_rescaled(&pt, &ctl()).unwrap() / 0.5;
    assert_relative_eq!(q.value, n, max_relative = 1e-8);
}

#[test]
fn decomposition_partitions_the_series() {
    let target = CanonicalTarget::new(1.0, 2.0 * ZETA3).unwrap();
    let x = [0.3, 0.0, 0.0];
    let y = [0.0, 0.1, 0.0];
    for kappa in [0.1, 0.02] {
        let trap = TrapModel::isotropic(3, kappa).unwrap();
        let dec = loop_decompose(&x, &y, &target, &trap, &ctl()).unwrap();
        let full = boseloops::rdm::rdm_loops(&x, &y, &target, &trap, &ctl()).unwrap();
        assert_relative_eq!(dec.short_sum + dec.meso_sum + dec.macro_sum, full, max_relative = 1e-9);
        assert_relative_eq!(dec.total, full, max_relative = 1e-9);
        assert_eq!(dec.short_cutoff, (kappa.powf(-1.25)).floor() as u64);
    }
}

#[test]
fn macroscopic_loops_carry_the_condensate() {
    let c = PhysicalConstants::default();
    let target = CanonicalTarget::new(1.0, 2.0 * ZETA3).unwrap();
    let limit = condensate_limit(1.0, target.nu, 3, &c).unwrap();
    assert_relative_eq!(limit, 0.21587393986912157393, max_relative = 1e-14);
    let trap = TrapModel::isotropic(3, 0.005).unwrap();
    let v = rdm_rescaled(&[0.2, 0.0, 0.0], &[-0.3, 0.1, 0.0], &target, &trap, &ctl()).unwrap();
    assert!((v - limit).abs() / limit < 0.02);
}

#[test]
fn ground_term_is_the_condensate_part() {
    let trap = TrapModel::isotropic(3, 0.01).unwrap();
    let pt = GrandCanonicalPoint::from_ln_gap(1.0, -14.0, trap).unwrap();
    let x = [0.2, 0.0, 0.0];
    let dec = loop_decompose_at(&x, &x, &pt, &ctl(), DEFAULT_CHI).unwrap();
    let g = ground_term_at(&x, &x, &pt).unwrap();
    assert_relative_eq!(dec.ground_term, g, max_relative = 1e-12);
    assert!(g > 0.9 * dec.total);
}

#[test]
fn open_trap_series_reference_values() {
    let c = PhysicalConstants::default();
    assert_relative_eq!(
        open_trap_series(0.25, 1.0, -0.2, 3, &c, &ctl()).unwrap(),
        0.075972550391254506881,
        max_relative = 1e-9
    );
    assert!(open_trap_series(0.0, 1.0, 0.0, 2, &c, &ctl()).is_err());
}

#[test]
fn open_trap_rdm_regimes() {
    let c = PhysicalConstants::default();
    let x = [0.6, 0.0, 0.0];
    let o = [0.0; 3];
    let crit = open_trap_rdm(&x, &o, 1.0, ZETA3, 3, &c, &ctl()).unwrap();
    assert_relative_eq!(crit.finite().unwrap(), 0.15163415848311029037, max_relative = 1e-9);
    let sup = open_trap_rdm(&x, &o, 1.0, 2.0 * ZETA3, 3, &c, &ctl()).unwrap();
    assert!(matches!(sup, ExtendedReal::Divergent(DivergenceLaw::PowerLaw { exponent, .. }) if exponent == 1.5));
    let two = open_trap_rdm(&[0.0, 0.0], &[0.0, 0.0], 1.0, 5.0, 2, &c, &ctl()).unwrap();
    assert!(matches!(
        two,
        ExtendedReal::Divergent(DivergenceLaw::Logarithmic { .. })
    ));
    let one = open_trap_rdm(&[0.7], &[0.0], 1.0, 1.0, 1, &c, &ctl()).unwrap();
    assert_relative_eq!(one.finite().unwrap(), 0.42242929560919090128, max_relative = 1e-9);
}

#[test]
fn semiclassical_density_reference_value() {
    let c = PhysicalConstants::default();
    assert_relative_eq!(
        semiclassical_density(&[1.0, 0.0, 0.0], 1.0, -0.2, 3, &c).unwrap(),
        0.039324417609125828318,
        max_relative = 1e-12
    );
}

#[test]
fn thermal_profile_matches_semiclassical_limit_away_from_origin() {
    let c = PhysicalConstants::default();
    let trap = TrapModel::isotropic(3, 0.01).unwrap();
    let nu = 2.0 * ZETA3;
    let pt = boseloops::thermo::solve_mu(&CanonicalTarget::new(1.0, nu).unwrap(), &trap, &ctl())
        .unwrap()
        .point;
    let x = [1.5, 0.0, 0.0];
    let v = local_density_at(&x, 1.0, &pt, false, &ctl()).unwrap();
    let want = theorem2_limit(&x, 1.0, 1.0, nu, 3, &c, false)
        .unwrap()
        .finite()
        .unwrap();
    assert!((v / want - 1.0).abs() < 0.03);
}

#[test]
fn profile_rejects_origin_and_empty_grid() {
    let target = CanonicalTarget::new(1.0, 0.5).unwrap();
    let trap = TrapModel::isotropic(3, 0.1).unwrap();
    assert!(matches!(
        density_profile(&[vec![0.0; 3]], 1.0, &target, &trap, false, &ctl()),
        Err(Error::Origin)
    ));
    assert!(density_profile(&[], 1.0, &target, &trap, false, &ctl()).is_err());
}

#[test]
fn profile_is_ordered_and_deterministic() {
    let target = CanonicalTarget::new(1.0, 0.5).unwrap();
    let trap = TrapModel::isotropic(2, 0.05).unwrap();
    let grid: Vec<Vec<f64>> = (1..=12).map(|i| vec![0.25 * i as f64, 0.0]).collect();
    let a = density_profile(&grid, 1.0, &target, &trap, false, &ctl()).unwrap();
    let b = density_profile(&grid, 1.0, &target, &trap, false, &ctl()).unwrap();
    assert_eq!(a, b);
    assert!(a.values.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn barometric_ratio_closed_form() {
    let c = PhysicalConstants::default();
    let r = barometric_radii(&CanonicalTarget::new(1.0, 2.0 * ZETA3).unwrap(), 3, &c).unwrap();
    assert_relative_eq!(r.ratio, 1.8007853552793759308, max_relative = 1e-8);
    assert_relative_eq!(r.ratio_closed_form, 1.8007853552793759308, max_relative = 1e-14);
    let r2 = barometric_radii(&CanonicalTarget::new(2.0, 2.0).unwrap(), 3, &c).unwrap();
    assert_relative_eq!(r2.ratio, r2.ratio_closed_form, max_relative = 1e-8);
    assert_relative_eq!(
        r2.ratio_with_extra_beta,
        r2.ratio_closed_form / 2.0,
        max_relative = 1e-14
    );
}

#[test]
fn extrapolation_helpers() {
    let v = |k: f64| 3.0 + 2.0 * k;
    assert_relative_eq!(
        richardson(0.1, v(0.1), 0.05, v(0.05), SmallParameter::Kappa).unwrap(),
        3.0,
        epsilon = 1e-14
    );
    let (s, i) = linear_fit(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]).unwrap();
    assert_relative_eq!(s, 2.0, epsilon = 1e-14);
    assert_relative_eq!(i, 1.0, epsilon = 1e-14);
    assert!(linear_fit(&[1.0], &[1.0]).is_err());
}
