//! Runs the intertwiner suite on A2 and prints the checks and the reading report.

use currentalg::intertwine::{verify_suite, Variant};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let rep = verify_suite(2, 0.3, 0.7, &[Variant::AsPrinted, Variant::Normalized], 8, &mut rng, 1e-10)?;
    for c in &rep.checks {
        let mark = match (c.pass, c.informational) {
            (true, _) => "ok",
            (false, true) => "info",
            (false, false) => "FAIL",
        };
        println!("{mark:5} {:60} {:.2e} {}", c.id, c.max_residual, c.note.clone().unwrap_or_default());
    }
    for e in &rep.variants.entries {
        println!("{:20} as printed: {:5}  normalized: {}", e.id, e.as_printed_ok, e.normalized_ok);
    }
    Ok(())
}
