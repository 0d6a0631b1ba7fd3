use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use wpcr_core::baselines::Scheme;
use wpcr_experiments::output::{write_fig3, write_scheme, write_solve, write_sweep};
use wpcr_experiments::validate::{validate_gamma, write_checks};
use wpcr_experiments::{
    build_topology, fig3_sweep, improvement_summary, run_scenario, run_sweep, ScenarioConfig,
};

const EXIT_INFEASIBLE: u8 = 2;
const EXIT_ERROR: u8 = 1;

#[derive(Parser)]
#[command(
    name = "wpcr",
    version,
    about = "Optimal time allocation for a wireless-powered cognitive radio slot"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario file of `key = value` lines; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Seed for random placement.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output CSV path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one scenario and print the allocation and multipliers.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Scheme whose allocation is printed.
        #[arg(long, default_value = "proposed")]
        scheme: Scheme,
    },
    /// Monte Carlo sweep of one parameter, averaged per scheme.
    Sweep {
        #[command(flatten)]
        common: Common,
    },
    /// Sum throughput against the WPT duration.
    Fig3 {
        #[command(flatten)]
        common: Common,
    },
    /// Check the solver against the numerical oracles.
    Validate {
        #[command(flatten)]
        common: Common,
    },
}

fn load(common: &Common) -> Result<ScenarioConfig> {
    match &common.config {
        Some(path) => {
            ScenarioConfig::from_path(path).with_context(|| format!("reading {}", path.display()))
        }
        None => Ok(ScenarioConfig::default()),
    }
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Solve { common, scheme } => {
            let cfg = load(&common)?;
            let topo = build_topology(&cfg.params, &cfg.placement, common.seed)?;
            let res = run_scenario(&cfg.params, &topo, cfg.xi, cfg.benchmark_design)?;
            let out = sink(common.out.as_deref())?;
            match scheme {
                Scheme::Proposed => write_solve(out, &res.outcome)?,
                other => write_scheme(
                    out,
                    res.report(other).expect("baselines are always evaluated"),
                )?,
            }
            if res.proposed.is_none() && scheme == Scheme::Proposed {
                eprintln!(
                    "PU target {} exceeds the largest achievable PU rate",
                    cfg.params.delta
                );
                return Ok(EXIT_INFEASIBLE);
            }
            Ok(0)
        }
        Command::Sweep { common } => {
            let cfg = load(&common)?;
            let out = run_sweep(&cfg, common.seed)?;
            write_sweep(sink(common.out.as_deref())?, &out.means)?;
            if let Some(path) = &common.out {
                let trials = path.with_extension("trials.csv");
                write_sweep(sink(Some(&trials))?, &out.trials)?;
            }
            match improvement_summary(&out.means) {
                Ok(summary) => {
                    for s in summary {
                        eprintln!(
                            "improvement over {}: {:.2}% ({} points)",
                            s.baseline, s.percent, s.points
                        );
                    }
                }
                Err(e) => eprintln!("no improvement summary: {e}"),
            }
            Ok(0)
        }
        Command::Fig3 { common } => {
            let cfg = load(&common)?;
            let topo = build_topology(&cfg.params, &cfg.placement, common.seed)?;
            let res = run_scenario(&cfg.params, &topo, cfg.xi, cfg.benchmark_design)?;
            write_fig3(
                sink(common.out.as_deref())?,
                &fig3_sweep(&res.gamma, cfg.params.delta, cfg.tau0_grid),
            )?;
            Ok(if res.proposed.is_none() {
                EXIT_INFEASIBLE
            } else {
                0
            })
        }
        Command::Validate { common } => {
            let cfg = load(&common)?;
            let topo = build_topology(&cfg.params, &cfg.placement, common.seed)?;
            let res = run_scenario(&cfg.params, &topo, cfg.xi, cfg.benchmark_design)?;
            let checks = validate_gamma(&res.gamma, cfg.params.delta, cfg.xi, common.seed)?;
            write_checks(sink(common.out.as_deref())?, &checks)?;
            let failed: Vec<&str> = checks
                .iter()
                .filter(|c| !c.pass)
                .map(|c| c.name.as_str())
                .collect();
            if failed.is_empty() {
                Ok(0)
            } else {
                eprintln!("failed checks: {}", failed.join(", "));
                Ok(EXIT_ERROR)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
