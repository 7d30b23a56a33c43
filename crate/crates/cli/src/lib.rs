//! Batch driver: `run` a scenario to CSV files, or `verify` the acceptance suites.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use kinsv::io::{load_scenario, write_outputs};
use kinsv::trajectory::run;
use kinsv::verify::{Verifier, SUITES};

#[derive(Debug, Parser)]
#[command(
    name = "kinsv",
    version,
    about = "Kinetic shallow-water solver with rain, infiltration and recharge friction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a scenario and write probes.csv, snapshot_<t>.csv and diagnostics.csv.
    Run {
        /// Built-in scenario name or path to a TOML file.
        #[arg(long)]
        scenario: String,
        /// Override a parameter, e.g. `--set alpha=5`. Repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE", value_parser = key_value)]
        overrides: Vec<(String, String)>,
        /// Output directory, created if missing.
        #[arg(long)]
        out: PathBuf,
        /// Snapshot times, replacing the scenario's own.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        snapshots: Option<Vec<f64>>,
        /// Probe positions, replacing the scenario's own.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        probes: Option<Vec<f64>>,
    },
    /// Run acceptance suites and print one line per criterion.
    Verify {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
        suite: String,
    },
}

fn key_value(s: &str) -> Result<(String, String), String> {
    match s.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim().to_string(), v.trim().to_string())),
        _ => Err(format!("expected KEY=VALUE, got `{s}`")),
    }
}

/// Parses `args` (program name first) and executes; returns the process exit code.
///
/// Usage errors exit with 2, run or verification failures with 1.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match cli.command {
        Command::Run {
            scenario,
            overrides,
            out,
            snapshots,
            probes,
        } => run_command(&scenario, &overrides, &out, snapshots, probes),
        Command::Verify { suite } => verify_command(&suite),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn run_command(
    name: &str,
    overrides: &[(String, String)],
    out: &Path,
    snapshots: Option<Vec<f64>>,
    probes: Option<Vec<f64>>,
) -> kinsv::error::Result<i32> {
    let mut scenario = load_scenario(name, overrides)?;
    if let Some(s) = snapshots {
        scenario.output.snapshots = s;
    }
    if let Some(p) = probes {
        scenario.output.probes = p;
    }
    scenario.validate()?;
    let outputs = run(&scenario)?;
    write_outputs(&outputs, out)?;
    println!(
        "final time {} s, {} steps, mass-audit error {:.3e} m^2",
        outputs.final_time,
        outputs.steps,
        outputs.mass_error()
    );
    Ok(0)
}

fn verify_command(suite: &str) -> kinsv::error::Result<i32> {
    let outcomes = Verifier::new().suite(suite)?;
    for o in &outcomes {
        println!("{o}");
    }
    Ok(if outcomes.iter().all(|o| o.passed) {
        0
    } else {
        1
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_value_splits_once() {
        assert_eq!(key_value("a=b=c").unwrap(), ("a".into(), "b=c".into()));
        assert!(key_value("=1").is_err());
        assert!(key_value("alpha").is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(cli_main(["kinsv", "launch"]), 2);
        assert_eq!(cli_main(["kinsv", "run", "--out", "x"]), 2);
        assert_eq!(cli_main(["kinsv", "verify", "--suite", "nope"]), 2);
    }

    #[test]
    fn snapshot_list_parses() {
        let cli = Cli::try_parse_from([
            "kinsv",
            "run",
            "--scenario",
            "flume",
            "--out",
            "o",
            "--snapshots",
            "1,2.5",
        ])
        .unwrap();
        match cli.command {
            Command::Run { snapshots, .. } => assert_eq!(snapshots, Some(vec![1.0, 2.5])),
            _ => unreachable!(),
        }
    }
}
