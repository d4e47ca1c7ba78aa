use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use qsync::{
    qfim_report, render_report, render_verify, run_sweep, verify_target, DriveSelection, Error,
    SweepConfig,
};

#[derive(Parser)]
#[command(
    name = "qsync",
    version,
    about = "Steady states, linear response, and information measures for driven open oscillators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a parameter sweep from a JSON config: one CSV per measure plus a
    /// run manifest.
    Sweep {
        /// Sweep configuration file (JSON).
        #[arg(long)]
        config: PathBuf,
    },
    /// Print the information matrix of a drive family at fixed parameters,
    /// with eigendrives and per-drive orthogonality, plus a JSON twin.
    Qfim {
        /// Model source: builtin:vdp, builtin:tqo, or a model JSON file.
        #[arg(long)]
        model: String,
        /// Parameter overrides as key=value (builtin models only).
        #[arg(long = "params", value_name = "KEY=VALUE")]
        params: Vec<String>,
        /// Drive selection: a preset (all, all-x, single-particle-x) or
        /// explicit drive labels. Defaults to all drives.
        #[arg(long = "drives", value_name = "LABEL")]
        drives: Vec<String>,
        /// Where to write the JSON twin of the report.
        #[arg(long, default_value = "qfim_report.json")]
        output: PathBuf,
    },
    /// Run self-checks against closed-form references and independent
    /// numerical routes; exits nonzero if any check fails.
    Verify {
        /// builtin:vdp, builtin:tqo, or a model JSON file. Default: both
        /// builtin models.
        target: Option<String>,
    },
}

fn parse_params(raw: &[String]) -> qsync::Result<BTreeMap<String, f64>> {
    let mut params = BTreeMap::new();
    for item in raw {
        let (key, value) = item.split_once('=').ok_or_else(|| {
            Error::Config(format!("parameter {item:?} is not of the form key=value"))
        })?;
        let value: f64 = value
            .parse()
            .map_err(|_| Error::Config(format!("parameter {key:?} has non-numeric value {value:?}")))?;
        if params.insert(key.to_string(), value).is_some() {
            return Err(Error::Config(format!("parameter {key:?} given twice")));
        }
    }
    Ok(params)
}

fn parse_drives(raw: &[String]) -> DriveSelection {
    match raw {
        [] => DriveSelection::Preset("all".into()),
        [one] if ["all", "all-x", "single-particle-x"].contains(&one.as_str()) => {
            DriveSelection::Preset(one.clone())
        }
        labels => DriveSelection::Named(labels.to_vec()),
    }
}

fn run(cli: Cli) -> qsync::Result<i32> {
    match cli.command {
        Command::Sweep { config } => {
            let cfg = SweepConfig::load(&config)?;
            let outcome = run_sweep(&cfg)?;
            println!(
                "swept {} points ({} failed)",
                outcome.points_total, outcome.points_failed
            );
            for (stem, path) in &outcome.csv_paths {
                println!("  {stem}: {}", path.display());
            }
            println!("  manifest: {}", outcome.manifest_path.display());
            Ok(0)
        }
        Command::Qfim {
            model,
            params,
            drives,
            output,
        } => {
            let params = parse_params(&params)?;
            let selection = parse_drives(&drives);
            let report = qfim_report(&model, &params, &selection)?;
            print!("{}", render_report(&report));
            std::fs::write(&output, serde_json::to_string_pretty(&report)? + "\n")?;
            println!("\njson: {}", output.display());
            Ok(0)
        }
        Command::Verify { target } => {
            let report = verify_target(target.as_deref())?;
            print!("{}", render_verify(&report));
            Ok(if report.all_passed() { 0 } else { 1 })
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
