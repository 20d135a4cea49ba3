//! Level-one free-boson currents of `sl_2^`: exchange relations, the `[E, F]` pole audit and Serre.

use num_rational::Rational64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use currentalg::boson::{ef_audit, exchange_cases, exchange_check, level_one, serre_checks, Engine, ZeroModeConvention};
use currentalg::liealg::{cartan, Series};
use currentalg::params::ParamTower;
use currentalg::structfn::Ctx;
use currentalg::trigcalc::Sampler;

fn main() {
    let p = ParamTower::with_levels(0.3, 0.8, &[1]).expect("params");
    let g = cartan(Series::A, 2).expect("cartan");
    let e = Engine::new(&p, &g, ZeroModeConvention::Cocycle, 1, 1e-12).expect("engine");
    let ctx = Ctx::base(&p);
    let s = Sampler::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for case in exchange_cases(&g) {
        let c = exchange_check(&e, &level_one, &case, ctx, 10, &s, &mut rng, 1e-8).expect("exchange");
        println!("{:<28} {:>10.3e}", c.id, c.max_residual);
    }
    let (_, poles) = ef_audit(&e, &level_one, 1, Rational64::from_integer(1), 6, &s, &mut rng, 1e-8).expect("audit");
    for pl in poles {
        println!("[E_1, F_1] pole at w = {} ih: {} residue {:+.6}{:+.6}i", pl.at, pl.monomial, pl.residue[0], pl.residue[1]);
    }
    for c in serre_checks(&e, &level_one, ctx, 6, &s, &mut rng, 1e-7).expect("serre") {
        println!("{:<28} {:>10.3e}", c.id, c.max_residual);
    }
}
