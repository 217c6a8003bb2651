//! Splits the reduced density matrix into short, mesoscopic and macroscopic
//! loops and watches the macroscopic part approach the condensate density.

use boseloops::kernels::TrapModel;
use boseloops::rdm::{condensate_limit, loop_decompose};
use boseloops::specfun::PhysicalConstants;
use boseloops::thermo::{nu_critical_trap, CanonicalTarget};
use boseloops::{Result, SeriesControl};

fn main() -> Result<()> {
    let ctl = SeriesControl::default();
    let consts = PhysicalConstants::default();
    let beta = 1.0;
    let nu_c = nu_critical_trap(beta, &TrapModel::isotropic(3, 0.1)?)?
        .finite()
        .expect("finite in d = 3");
    let target = CanonicalTarget::new(beta, 2.0 * nu_c)?;
    let x = [0.3, 0.0, 0.0];
    let y = [0.0, 0.0, 0.0];
    let limit = condensate_limit(beta, target.nu, 3, &consts)?;
    println!("condensate limit {limit:.8}");
    for kappa in [0.1, 0.01, 0.001] {
        let trap = TrapModel::isotropic(3, kappa)?;
        let dec = loop_decompose(&x, &y, &target, &trap, &ctl)?;
        println!(
            "kappa {kappa:>6}: N = {:>6}, short {:.6}, meso {:.3e}, kappa^1.5 * macro {:.8}",
            dec.short_cutoff,
            dec.short_sum,
            dec.meso_sum,
            dec.macro_sum * kappa.powf(1.5)
        );
    }
    Ok(())
}
