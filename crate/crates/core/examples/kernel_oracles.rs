//! Analytic oracles behind the contractions: master integral, Gamma reflection, kernel symmetries.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use currentalg::boson::{analytic_oracle_checks, kernel_checks};
use currentalg::liealg::{cartan, Series};
use currentalg::params::ParamTower;
use currentalg::special::{contour_primitive, master_integral};

fn main() {
    let p = ParamTower::with_levels(0.1, 1.0, &[1]).expect("params");
    for x in [0.3, 1.0, 2.5] {
        let z = Complex64::new(x, 0.0);
        let closed = master_integral(z, 1.0).expect("closed form");
        let direct = contour_primitive(z, &[1.0]);
        println!("x = {x}: closed form {closed:.12}, contour {direct:.12}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checks = analytic_oracle_checks(&p, 1e-6).expect("oracles");
    checks.extend(kernel_checks(&p, &cartan(Series::A, 2).expect("cartan"), 50, &mut rng, 1e-12).expect("kernel"));
    for c in checks {
        println!("{:<44} {:>10.3e} (tol {:.0e})", c.id, c.max_residual, c.tol);
    }
}
