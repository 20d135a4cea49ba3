//! Coproducts of the Hopf family, the axioms on the evaluation module, and the level-2
//! homomorphism on two boson slots.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use currentalg::evalrep::{EvalRep, FNorm};
use currentalg::hopf::*;
use currentalg::liealg::{cartan, Series};
use currentalg::params::ParamTower;
use currentalg::trigcalc::ShiftExpr;

fn main() {
    let u = ShiftExpr::var("u");
    for gen in Gen::CURRENTS {
        let d = coproduct_plus(&CurrentExpr::generator(gen, 1, &u, 0)).expect("coproduct");
        for (c, w) in &d.terms {
            println!("D+ {:<3} {c:>2} {}", gen.label(), word_label(w));
        }
    }

    let p = ParamTower::with_levels(0.3, 0.8, &[0]).expect("params");
    let rep = EvalRep::build(2, &p, FNorm::Balanced).expect("rep");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checks = verify_axioms(&rep, 1, 20, &mut rng, 1e-9).expect("axioms");
    checks.push(minus_plus_identity(2, -2..=3).expect("identity"));
    checks.push(zero_level_collapse(2, -1..=3).expect("collapse"));
    checks.push(coassociativity_report(2, 3).expect("level 3"));

    let g = cartan(Series::A, 1).expect("cartan");
    let hom = verify_homomorphism(0.3, 0.8, &g, 20, &mut rng, 1e-7, 1e-10).expect("homomorphism");
    checks.extend(hom.checks);
    for c in &checks {
        let tag = if c.pass { "ok  " } else if c.informational { "info" } else { "FAIL" };
        println!("{tag} {:<48} {:>10.3e}  n={}", c.id, c.max_residual, c.samples);
    }
    for (i, p) in &hom.poles {
        println!("pole node {i} w = {} i hbar: {} residue {:?}", p.at, p.monomial, p.residue);
    }
}
