//! Scaled density profiles: the thermal cloud on the δ = 1 scale and the
//! condensate on the δ = 1/2 scale, with their closed-form limits.

use boseloops::kernels::TrapModel;
use boseloops::rdm::{barometric_radii, density_profile, theorem2_limit};
use boseloops::specfun::PhysicalConstants;
use boseloops::thermo::{nu_critical_trap, CanonicalTarget};
use boseloops::{Result, SeriesControl};

fn main() -> Result<()> {
    let ctl = SeriesControl::default();
    let consts = PhysicalConstants::default();
    let beta = 1.0;
    let trap = TrapModel::isotropic(3, 0.01)?;
    let nu_c = nu_critical_trap(beta, &trap)?.finite().expect("finite in d = 3");
    let target = CanonicalTarget::new(beta, 2.0 * nu_c)?;
    let grid: Vec<Vec<f64>> = [0.5, 1.0, 1.5, 2.0, 3.0].iter().map(|&r| vec![r, 0.0, 0.0]).collect();
    for delta in [1.0, 0.5] {
        let prof = density_profile(&grid, delta, &target, &trap, true, &ctl)?;
        println!("delta = {delta} ({:?})", prof.regime);
        for (x, v) in prof.grid.iter().zip(&prof.values) {
            let pred = theorem2_limit(x, delta, beta, target.nu, 3, &consts, true)?;
            println!("  |x| = {:4.1}: {v:.6e}  limit {:?}", x[0], pred);
        }
    }
    let radii = barometric_radii(&target, 3, &consts)?;
    println!(
        "thermal/condensate radius ratio {:.6} (closed form {:.6})",
        radii.ratio, radii.ratio_closed_form
    );
    Ok(())
}
