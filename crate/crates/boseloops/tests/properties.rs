//! Randomized properties: elementary inequalities, loop partitions, solver
//! residuals and symmetry of the density matrix.

#![allow(clippy::excessive_precision)]

use boseloops::kernels::inequalities::*;
use boseloops::kernels::TrapModel;
use boseloops::rdm::{loop_decompose_at, rdm_at, DEFAULT_CHI};
use boseloops::thermo::{nu_rescaled, solve_mu, CanonicalTarget, GrandCanonicalPoint};
use boseloops::SeriesControl;
use proptest::prelude::*;

fn within(b: (f64, f64, f64), strict: bool) -> bool {
    let (lo, v, hi) = b;
    let slack = 1e-15 * v.abs().max(1.0);
    if strict {
        lo < v + slack && v < hi + slack
    } else {
        lo <= v + slack && v <= hi + slack
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn elementary_inequalities(x in 1e-6f64..40.0, p in 0.1f64..5.0, q in 0.1f64..5.0) {
        prop_assert!(within(cosh_bounds(x), false));
        prop_assert!(within(sinh_bounds(x), false));
        prop_assert!(within(tanh_bounds(x), false));
        prop_assert!(within(coth_bounds(x), false));
        prop_assert!(within(one_minus_exp_bounds(x), true));
        prop_assert!(within(expm1_bounds(x), false));
        prop_assert!(within(power_exponential_bound(x, p, q), false));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn loop_partition_is_exact(
        kappa in 0.005f64..0.5,
        ln_gap in -20.0f64..0.0,
        x in prop::collection::vec(-2.0f64..2.0, 3),
        y in prop::collection::vec(-2.0f64..2.0, 3),
    ) {
        let ctl = SeriesControl::default();
        let pt = GrandCanonicalPoint::from_ln_gap(1.0, ln_gap, TrapModel::isotropic(3, kappa).unwrap()).unwrap();
        let dec = loop_decompose_at(&x, &y, &pt, &ctl, DEFAULT_CHI).unwrap();
        let full = rdm_at(&x, &y, &pt, &ctl).unwrap();
        let parts = dec.short_sum + dec.meso_sum + dec.macro_sum;
        prop_assert!((parts - full).abs() <= 1e-9 * full.abs());
    }

    #[test]
    fn density_matrix_is_symmetric_and_dominated_by_diagonal(
        kappa in 0.05f64..1.0,
        mu_frac in -2.0f64..0.99,
        x in -2.0f64..2.0,
        y in -2.0f64..2.0,
    ) {
        let ctl = SeriesControl::default();
        let trap = TrapModel::isotropic(1, kappa).unwrap();
        let pt = GrandCanonicalPoint::new(1.0, mu_frac * trap.ground_energy(), trap).unwrap();
        let a = rdm_at(&[x], &[y], &pt, &ctl).unwrap();
        let b = rdm_at(&[y], &[x], &pt, &ctl).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs());
        let dx = rdm_at(&[x], &[x], &pt, &ctl).unwrap();
        let dy = rdm_at(&[y], &[y], &pt, &ctl).unwrap();
        prop_assert!(a * a <= dx * dy * (1.0 + 1e-12));
    }

    #[test]
    fn solver_residual_is_small(
        kappa in 0.005f64..0.5,
        nu in 0.05f64..6.0,
        beta in 0.5f64..2.0,
    ) {
        let ctl = SeriesControl::default();
        let trap = TrapModel::isotropic(3, kappa).unwrap();
        let sol = solve_mu(&CanonicalTarget::new(beta, nu).unwrap(), &trap, &ctl).unwrap();
        let got = nu_rescaled(&sol.point, &ctl).unwrap();
        prop_assert!((got - nu).abs() <= 1e-9 * nu);
    }

    #[test]
    fn particle_number_increases_with_chemical_potential(
        kappa in 0.01f64..0.5,
        g1 in -15.0f64..2.0,
        step in 0.01f64..3.0,
    ) {
        let ctl = SeriesControl::default();
        let trap = TrapModel::isotropic(2, kappa).unwrap();
        let lo = nu_rescaled(&GrandCanonicalPoint::from_ln_gap(1.0, g1 + step, trap).unwrap(), &ctl).unwrap();
        let hi = nu_rescaled(&GrandCanonicalPoint::from_ln_gap(1.0, g1, trap).unwrap(), &ctl).unwrap();
        prop_assert!(hi > lo);
    }
}
