//! Inverts the particle-number equation for μ̄ and compares the gap with its
//! leading-order asymptotic form in the three regimes.

use boseloops::kernels::TrapModel;
use boseloops::thermo::{ln_gap_asymptotic, nu_critical_trap, nu_rescaled, solve_mu, CanonicalTarget};
use boseloops::{Result, SeriesControl};

fn main() -> Result<()> {
    let ctl = SeriesControl::default();
    let beta = 1.0;
    let trap = TrapModel::isotropic(3, 0.01)?;
    let nu_c = nu_critical_trap(beta, &trap)?.finite().expect("finite in d = 3");
    for eta in [0.5, 2.0] {
        let target = CanonicalTarget::new(beta, eta * nu_c)?;
        let sol = solve_mu(&target, &trap, &ctl)?;
        let achieved = nu_rescaled(&sol.point, &ctl)?;
        let asym = ln_gap_asymptotic(&target, &trap)?;
        println!(
            "eta = {eta}: mu = {:.12}, ln gap = {:.6} (asymptotic {:.6}), residual {:.1e}, {} iterations",
            sol.mu(),
            sol.ln_gap(),
            asym,
            (achieved - target.nu) / target.nu,
            sol.iterations
        );
    }
    Ok(())
}
