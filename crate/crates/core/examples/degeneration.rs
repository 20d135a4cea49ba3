//! Small-`eta` limit: structure functions and module entries approach their rational counterparts.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use currentalg::evalrep;
use currentalg::liealg::{cartan, Series};
use currentalg::structfn::degeneration_check;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for eta in [1.0, 1e-1, 1e-2, 1e-3, 1e-4] {
        let g = cartan(Series::A, 2).expect("cartan");
        let c = degeneration_check(&g, 0.1, eta, 20, &mut rng, 1e-3).expect("degeneration");
        println!("eta = {eta:<8e} structure functions off by {:.3e}", c.max_residual);
    }
    for r in 1..=3 {
        let c = evalrep::degeneration_check(r, 0.1, 20, &mut rng, 1e-3).expect("module");
        println!("{:<36} {:.3e}", c.id, c.max_residual);
    }
}
