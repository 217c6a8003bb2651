//! Chemical potential, ground-state occupation and critical numbers along a
//! κ-ladder for an isotropic three-dimensional trap at twice the critical
//! particle number.

use boseloops::kernels::TrapModel;
use boseloops::thermo::{gbec_band_sum_at, nu_critical_trap, occupation_at, regime, solve_mu, CanonicalTarget};
use boseloops::{Result, SeriesControl};

fn main() -> Result<()> {
    let ctl = SeriesControl::default();
    let beta = 1.0;
    let probe = TrapModel::isotropic(3, 0.1)?;
    let nu_c = nu_critical_trap(beta, &probe)?.finite().expect("finite in d = 3");
    let target = CanonicalTarget::new(beta, 2.0 * nu_c)?;
    println!("nu_c = {nu_c:.12}, nu = {:.12}", target.nu);
    println!(
        "{:>8} {:>14} {:>12} {:>14} {:>12}",
        "kappa", "mu", "ln gap", "occupation", "band"
    );
    for kappa in [0.1, 0.05, 0.02, 0.01, 0.005] {
        let trap = TrapModel::isotropic(3, kappa)?;
        let sol = solve_mu(&target, &trap, &ctl)?;
        let occ = occupation_at(&sol.point, &[0, 0, 0])?;
        let band = gbec_band_sum_at(&sol.point, 0.05, &ctl)?;
        println!(
            "{kappa:>8} {:>14.10} {:>12.6} {:>14.8} {:>12.3e}",
            sol.mu(),
            sol.ln_gap(),
            occ,
            band
        );
    }
    println!("regime: {:?}", regime(&target, &probe)?);
    Ok(())
}
