//! Quasi-one- and quasi-two-dimensional traps: regime classification,
//! mesoscopic loops in the elongated trap and the additional term in the
//! flattened one.

use boseloops::aniso::{additional_q2d, classify, meso_q1d, meso_q1d_prediction};
use boseloops::kernels::TrapModel;
use boseloops::thermo::{nu_critical_trap, nu_m, CanonicalTarget};
use boseloops::{Result, SeriesControl};

fn main() -> Result<()> {
    let ctl = SeriesControl::default();
    let beta = 1.0;
    let origin = [0.0; 3];

    let q1 = TrapModel::quasi_1d(0.01, 1.0, 1.0, 1.0)?;
    let nu_c = nu_critical_trap(beta, &q1)?.finite().expect("finite");
    let nu_max = nu_m(beta, &q1)?;
    println!("quasi-1D: nu_c = {nu_c:.6}, nu_m = {nu_max:.6}");
    let target = CanonicalTarget::new(beta, 2.0 * nu_max)?;
    println!("  regime {:?}", classify(&target, &q1)?);
    let meso = meso_q1d(&origin, &origin, &target, &q1, &ctl)?;
    let pred = meso_q1d_prediction(&target, &q1)?;
    println!("  ln meso = {:.4}, predicted {:.4}", meso.ln(), pred.ln_value());

    println!("quasi-2D additional term:");
    for kappa in [0.1, 0.01, 0.001] {
        let q2 = TrapModel::quasi_2d(kappa, 1.0, 1.0, 1.0)?;
        let nu_c = nu_critical_trap(beta, &q2)?.finite().expect("finite");
        let target = CanonicalTarget::new(beta, 2.0 * nu_c)?;
        let a = additional_q2d(&origin, &origin, &target, &q2, &ctl)?;
        println!(
            "  kappa {kappa:>6}: {:.6} = {:.6} + {:.6} (closed form {:.6})",
            a.meso, a.first_part, a.second_part, a.predicted_limit
        );
    }
    Ok(())
}
