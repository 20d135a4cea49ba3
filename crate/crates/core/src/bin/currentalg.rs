//! Command-line front end: runs verification suites and exports the intertwiner catalog.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use currentalg::report::{run, ConfigError, RunConfig, Suite, VariantSel};

#[derive(Parser)]
#[command(name = "currentalg", version, about = "Verification workbench for the deformed current algebra A_{hbar,eta}(g^)")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand)]
enum Cmd {
    /// Defining relations on the level-zero evaluation module.
    VerifyEvalrep,
    /// Level-one free-boson realization.
    VerifyBoson,
    /// Hopf family axioms, coproduct identities and the level-two homomorphism.
    VerifyHopf,
    /// Intertwiner catalog consistency.
    VerifyIntertwine,
    /// Every suite in dependency order.
    VerifyAll,
    /// Writes the intertwiner catalog as JSON.
    ExportCatalog,
}

#[derive(Args)]
struct Opts {
    /// TOML config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Algebra tag, e.g. A2, D4, E6.
    #[arg(long, global = true)]
    algebra: Option<String>,
    #[arg(long, global = true)]
    hbar: Option<f64>,
    #[arg(long, global = true)]
    eta: Option<f64>,
    /// Comma-separated levels c_0, c_1, ...
    #[arg(long, global = true)]
    levels: Option<String>,
    /// Samples per check.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Tolerance for delta-free relations.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory for report.json and summary.txt (or catalog.json).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Reading of the ambiguous intertwiner delta terms: printed, normalized or both.
    #[arg(long, global = true)]
    variant: Option<String>,
}

fn config(opts: &Opts) -> Result<RunConfig, ConfigError> {
    let mut c = match &opts.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(v) = &opts.algebra {
        c.algebra = v.clone();
    }
    if let Some(v) = opts.hbar {
        c.hbar = v;
    }
    if let Some(v) = opts.eta {
        c.eta = v;
    }
    if let Some(v) = &opts.levels {
        c.levels = v.clone();
    }
    if let Some(v) = opts.samples {
        c.samples = v;
    }
    if let Some(v) = opts.tol {
        c.tol = v;
    }
    if let Some(v) = opts.seed {
        c.seed = v;
    }
    if let Some(v) = &opts.variant {
        c.variant = v.parse::<VariantSel>()?;
    }
    Ok(c)
}

fn out_dir(opts: &Opts) -> Option<PathBuf> {
    opts.out.clone().or_else(|| std::env::var_os("CURRENTALG_OUT").map(PathBuf::from))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match real_main(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn real_main(cli: &Cli) -> Result<bool, ConfigError> {
    let out = out_dir(&cli.opts);
    if let Cmd::ExportCatalog = cli.cmd {
        let json = currentalg::intertwine::export_catalog();
        match out {
            Some(d) => {
                std::fs::create_dir_all(&d)?;
                std::fs::write(d.join("catalog.json"), json + "\n")?;
            }
            None => println!("{json}"),
        }
        return Ok(true);
    }
    let mut cfg = config(&cli.opts)?;
    let only = |s: Suite| vec![s];
    match cli.cmd {
        Cmd::VerifyEvalrep => cfg.suites = only(Suite::Evalrep),
        Cmd::VerifyBoson => cfg.suites = only(Suite::Boson),
        Cmd::VerifyHopf => cfg.suites = only(Suite::Hopf),
        Cmd::VerifyIntertwine => cfg.suites = only(Suite::Intertwine),
        Cmd::VerifyAll | Cmd::ExportCatalog => {}
    }
    let report = run(&cfg)?;
    let summary = report.summary();
    match out {
        Some(d) => {
            std::fs::create_dir_all(&d)?;
            std::fs::write(d.join("report.json"), report.to_json() + "\n")?;
            std::fs::write(d.join("summary.txt"), &summary)?;
            print!("{summary}");
        }
        None => {
            println!("{}", report.to_json());
            eprint!("{summary}");
        }
    }
    Ok(report.pass)
}
