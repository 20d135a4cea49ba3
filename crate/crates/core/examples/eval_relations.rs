//! Verifies every defining relation on the level-zero evaluation module of `sl_3^`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use currentalg::evalrep::{asymptotic_checks, pole_inventory, strip_check, verify_all, EvalRep, FNorm};
use currentalg::params::ParamTower;

fn main() {
    let p = ParamTower::with_levels(0.3, 0.8, &[0]).expect("params");
    let rep = EvalRep::build(2, &p, FNorm::Balanced).expect("rep");
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut checks = verify_all(&rep, 12, &mut rng, 1e-10, 1e-10).expect("checks");
    checks.push(strip_check(&rep));
    checks.extend(asymptotic_checks(&rep).expect("asymptotics"));
    for c in &checks {
        let tag = if c.pass { "ok  " } else if c.informational { "info" } else { "FAIL" };
        println!("{tag} {:<40} {:>10.3e}  n={}", c.id, c.max_residual, c.samples);
    }
    for e in pole_inventory(&rep) {
        println!("pole {:<6} u = {}", e.current, e.pole);
    }
    println!("K = {:.12}, nu = {:.12}", rep.k(), rep.nu());
}
