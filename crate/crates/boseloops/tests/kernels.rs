//! Oscillator kernels, traces and trap geometry.

#![allow(clippy::excessive_precision)]

use approx::assert_relative_eq;
use boseloops::kernels::{
    kernel_d, mehler_kernel_1d, semigroup_trace, semigroup_trace_ground_form, TrapGeometry, TrapModel,
};
use boseloops::quad::integrate_real_line;
use boseloops::specfun::PhysicalConstants;

#[test]
fn mehler_kernel_reference_values() {
    let c = PhysicalConstants::default();
    let cases = [
        ((0.3, -0.7, 0.9, 1.3), 0.19781245256825357225),
        ((1.0, 1.0, 0.05, 0.2), 1.7823260459246621976),
        ((2.0, -1.0, 5.0, 0.5), 0.02738387436669876766),
    ];
    for ((x, y, t, w), want) in cases {
        assert_relative_eq!(mehler_kernel_1d(x, y, t, w, &c).unwrap(), want, max_relative = 1e-13);
    }
}

#[test]
fn trace_closed_forms_agree() {
    let trap = TrapModel::isotropic(2, 0.3).unwrap();
    assert_relative_eq!(
        semigroup_trace(1.0, &trap).unwrap(),
        11.028151442698521029,
        max_relative = 1e-14
    );
    for t in [0.1, 1.0, 7.0] {
        for trap in [
            TrapModel::isotropic(3, 0.2).unwrap(),
            TrapModel::quasi_1d(0.5, 1.0, 1.0, 2.0).unwrap(),
            TrapModel::quasi_2d(0.3, 1.0, 1.5, 1.0).unwrap(),
        ] {
            assert_relative_eq!(
                semigroup_trace(t, &trap).unwrap(),
                semigroup_trace_ground_form(t, &trap).unwrap(),
                max_relative = 1e-13
            );
        }
    }
}

#[test]
fn kernel_diagonal_integrates_to_trace_in_one_dimension() {
    let trap = TrapModel::isotropic(1, 0.4).unwrap();
    for t in [0.5, 1.0, 2.0] {
        let q = integrate_real_line(|x| kernel_d(&[x], &[x], t, &trap).unwrap(), 0.0, 2.0, 1e-14, 1e-12).unwrap();
        assert_relative_eq!(q.value, semigroup_trace(t, &trap).unwrap(), max_relative = 1e-9);
    }
}

#[test]
fn kernel_is_symmetric_and_positive() {
    let trap = TrapModel::isotropic(3, 0.3).unwrap();
    let x = [0.2, -0.4, 1.1];
    let y = [-0.5, 0.3, 0.0];
    let a = kernel_d(&x, &y, 1.3, &trap).unwrap();
    let b = kernel_d(&y, &x, 1.3, &trap).unwrap();
    assert!(a > 0.0);
    assert_relative_eq!(a, b, max_relative = 1e-15);
}

#[test]
fn anisotropic_components() {
    let q1 = TrapModel::quasi_1d(0.5, 1.0, 1.0, 1.0).unwrap();
    let (k1, kp) = q1.kappa_components();
    assert_relative_eq!(k1, 0.5 * (-4.0f64).exp(), max_relative = 1e-15);
    assert_relative_eq!(kp, 0.5, max_relative = 1e-15);
    let q2 = TrapModel::quasi_2d(0.2, 1.0, 1.0, 1.0).unwrap();
    let (k1, kp) = q2.kappa_components();
    assert_relative_eq!(k1, 0.2, max_relative = 1e-15);
    assert_relative_eq!(kp, 0.2 * (-(5.0f64).sqrt()).exp(), max_relative = 1e-14);
    assert_eq!(q2.dim(), 3);
}

#[test]
fn invalid_traps_are_rejected() {
    assert!(TrapModel::isotropic(4, 0.1).is_err());
    assert!(TrapModel::isotropic(3, 0.0).is_err());
    assert!(TrapModel::quasi_1d(0.1, -1.0, 1.0, 1.0).is_err());
    let bad = TrapGeometry::Isotropic { d: 2, kappa: f64::NAN };
    assert!(TrapModel::new(bad, PhysicalConstants::default()).is_err());
}

#[test]
fn ground_state_energy_and_dimension_checks() {
    let trap = TrapModel::isotropic(3, 0.1).unwrap();
    assert_relative_eq!(trap.ground_energy(), 0.15, max_relative = 1e-15);
    assert!(kernel_d(&[0.0, 0.0], &[0.0, 0.0], 1.0, &trap).is_err());
    assert!(kernel_d(&[0.0; 3], &[0.0; 3], -1.0, &trap).is_err());
}
