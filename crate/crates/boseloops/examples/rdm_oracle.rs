//! Compares the loop (Mehler-kernel) form of the reduced density matrix with
//! a direct eigenfunction sum in one dimension.

use boseloops::kernels::TrapModel;
use boseloops::rdm::{rdm_at, rdm_eigen_at};
use boseloops::thermo::GrandCanonicalPoint;
use boseloops::{Result, SeriesControl};

fn main() -> Result<()> {
    let ctl = SeriesControl::default();
    let trap = TrapModel::isotropic(1, 0.2)?;
    let pt = GrandCanonicalPoint::new(1.0, -0.3, trap)?;
    for (x, y) in [(0.0, 0.0), (0.4, -0.1), (1.0, 0.5), (2.0, 2.0)] {
        let loops = rdm_at(&[x], &[y], &pt, &ctl)?;
        let eigen = rdm_eigen_at(&[x], &[y], &pt, 400)?;
        println!(
            "x = {x:5.2}, y = {y:5.2}: loops {loops:.15e}, eigen {:.15e} (tail < {:.1e}), rel diff {:.1e}",
            eigen.value,
            eigen.tail_bound,
            (loops - eigen.value).abs() / eigen.value.abs()
        );
    }
    Ok(())
}
