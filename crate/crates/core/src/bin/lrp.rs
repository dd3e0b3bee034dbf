use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use longedge::config::ExperimentConfig;
use longedge::{runner, verify, Error};

#[derive(Parser)]
#[command(name = "lrp", about = "Longest-edge experiments for long-range percolation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config's master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value = "all")]
    suite: String,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Run replicates and write per-replicate CSV plus a JSON summary.
    Simulate,
    /// Analytic CDF, dichotomy or bound tables.
    Exact,
    /// Norming sequences along the n grid.
    Norming,
    /// Acceptance suites.
    Verify,
    /// Convergence rate along the n grid.
    Sweep,
}

fn load(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let path = cli.config.as_ref().ok_or_else(|| Error::Config("--config is required".into()))?;
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<bool, Error> {
    let mut opts = verify::VerifyOptions::default();
    if let Some(w) = cli.workers {
        opts.workers = w.max(1);
    }
    let out = cli.out.as_deref();
    match cli.command {
        Command::Simulate => {
            let s = runner::cmd_simulate(&load(cli)?, opts.workers, out)?;
            for r in &s.rows {
                println!(
                    "n={} threshold={} e_star_median={} ks={} w_mean={} certificate={:e}",
                    r.n,
                    r.threshold,
                    r.e_star_median,
                    r.ks_to_limit.map(|v| format!("{v:.4}")).unwrap_or("-".into()),
                    r.w_mean,
                    r.certificate
                );
            }
        }
        Command::Exact => print!("{}", runner::cmd_exact(&load(cli)?, out)?.to_csv()),
        Command::Norming => print!("{}", runner::cmd_norming(&load(cli)?, out)?.to_csv()),
        Command::Sweep => {
            let r = runner::cmd_sweep(&load(cli)?, out)?;
            print!("{}", r.table.to_csv());
            println!("# {} slope {:.4} +- {:.4}", r.quantity, r.fit.slope, r.fit.stderr);
        }
        Command::Verify => {
            if let Some(s) = cli.seed {
                opts.seed = s;
            }
            let reports = verify::run(&cli.suite, &opts)?;
            for r in &reports {
                print!("{r}");
            }
            if let Some(dir) = out {
                std::fs::create_dir_all(dir)?;
                let text = serde_json::to_string_pretty(&reports).expect("reports serialize");
                std::fs::write(dir.join("verify.json"), text + "\n")?;
            }
            return Ok(reports.iter().all(|r| r.passed()));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("lrp: {e}");
            ExitCode::from(if e.is_validation() { 1 } else { 2 })
        }
    }
}
