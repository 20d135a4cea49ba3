//! Runs every suite from a config and prints the text summary.

use currentalg::report::{run, RunConfig};

fn main() {
    let cfg = RunConfig::from_toml("algebra = \"A1\"\nsamples = 6\nseed = 42\n").expect("config");
    let report = run(&cfg).expect("run");
    print!("{}", report.summary());
    std::process::exit(if report.pass { 0 } else { 1 });
}
