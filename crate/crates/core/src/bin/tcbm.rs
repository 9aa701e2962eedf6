use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use tcbm::estimators::{box_dim_fit, empirical_lq};
use tcbm::harness::{
    dump_paths, preset_config, preset_names, run_config, ExperimentConfig, RunOptions,
};
use tcbm::process::{SamplePath, TimeGrid};
use tcbm::Error;

#[derive(Parser)]
#[command(
    name = "tcbm",
    version,
    about = "Simulate time-changed Brownian motion and measure its graph"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct ConfigFlags {
    /// Root seed of the ensemble.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of paths.
    #[arg(long)]
    ensemble: Option<usize>,
    /// Number of grid points.
    #[arg(long = "grid-size")]
    grid_size: Option<usize>,
    /// Dotted `key=value` override of the configuration (repeatable).
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in presets.
    ListPresets,
    /// Run a built-in preset and print its JSON report.
    Preset {
        name: String,
        #[command(flatten)]
        flags: ConfigFlags,
        /// Write report.json (and any scan CSVs) into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record wall-clock seconds in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Run an experiment described by a TOML file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        flags: ConfigFlags,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        timing: bool,
    },
    /// Simulate the paths of a preset or config and dump them as CSV.
    Simulate {
        /// Built-in preset supplying the variance function and grid.
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        flags: ConfigFlags,
        #[arg(long)]
        out: PathBuf,
    },
    /// Estimate the box dimension and oscillation spectrum of a `t,x` CSV path.
    Estimate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, num_args = 2, value_names = ["MIN", "MAX"], default_values_t = [4, 12])]
        levels: Vec<u32>,
        /// Exponents for the oscillation L^q spectrum at the finest level.
        #[arg(long, num_args = 1..)]
        q: Vec<f64>,
    },
}

fn apply_flags(config: ExperimentConfig, flags: &ConfigFlags) -> tcbm::Result<ExperimentConfig> {
    let mut overrides = Vec::new();
    if let Some(s) = flags.seed {
        overrides.push(format!("root_seed={s}"));
    }
    if let Some(e) = flags.ensemble {
        overrides.push(format!("ensemble={e}"));
    }
    if let Some(g) = flags.grid_size {
        overrides.push(format!("grid_size={g}"));
    }
    overrides.extend(flags.overrides.iter().cloned());
    config.with_overrides(&overrides)
}

fn load_config(path: &Path) -> tcbm::Result<ExperimentConfig> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    ExperimentConfig::from_toml(&text)
}

fn run_and_report(
    config: ExperimentConfig,
    out: Option<PathBuf>,
    timing: bool,
) -> tcbm::Result<i32> {
    let options = RunOptions {
        timing,
        output_dir: out.clone(),
    };
    let report = run_config(&config, &options);
    let text = report.to_json();
    match out {
        Some(dir) => {
            std::fs::create_dir_all(&dir)
                .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
            let file = dir.join("report.json");
            std::fs::write(&file, &text)
                .map_err(|e| Error::Io(format!("{}: {e}", file.display())))?;
            let status = if report.passed { "pass" } else { "FAIL" };
            println!("{}: {status} ({})", report.preset, file.display());
        }
        None => print!("{text}"),
    }
    if let Some(err) = &report.error {
        eprintln!("error: {err}");
    }
    for c in report.checks.iter().filter(|c| !c.passed) {
        eprintln!(
            "check failed: {} = {:?} not in [{:?}, {:?}]",
            c.metric, c.value, c.min, c.max
        );
    }
    Ok(report.exit_code())
}

fn read_path_csv(path: &Path) -> tcbm::Result<SamplePath> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("t,x") {
        return Err(Error::Validation(format!(
            "{}: expected header 't,x'",
            path.display()
        )));
    }
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (n, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Validation(format!("{}:{}: {e}", path.display(), n + 2)))
        };
        let (t, x) = line.split_once(',').ok_or_else(|| {
            Error::Validation(format!(
                "{}:{}: expected two columns",
                path.display(),
                n + 2
            ))
        })?;
        times.push(parse(t)?);
        values.push(parse(x)?);
    }
    Ok(SamplePath {
        grid: TimeGrid::new(times)?,
        values,
        hurst: 0.5,
        v_name: path.display().to_string(),
        seed: 0,
        stream_index: 0,
    })
}

fn estimate(input: &Path, levels: &[u32], qs: &[f64]) -> tcbm::Result<i32> {
    let path = read_path_csv(input)?;
    let fit = box_dim_fit(&path, levels[0], levels[1])?;
    let mut lq = serde_json::Map::new();
    for &q in qs {
        lq.insert(
            q.to_string(),
            json!(empirical_lq(&path, q, &[levels[1]])?[0].1),
        );
    }
    let out =
        json!({ "input": input.display().to_string(), "box_dimension": fit, "lq_spectrum": lq });
    println!(
        "{}",
        serde_json::to_string_pretty(&out).map_err(|e| Error::Internal(e.to_string()))?
    );
    Ok(0)
}

fn dispatch(cli: Cli) -> tcbm::Result<i32> {
    match cli.command {
        Command::ListPresets => {
            for name in preset_names() {
                let config = preset_config(name)?;
                let tag = if config.asserted {
                    ""
                } else {
                    " [exploratory]"
                };
                println!("{name:<22}{}{tag}", config.description);
            }
            Ok(0)
        }
        Command::Preset {
            name,
            flags,
            out,
            timing,
        } => run_and_report(apply_flags(preset_config(&name)?, &flags)?, out, timing),
        Command::Run {
            config,
            flags,
            out,
            timing,
        } => run_and_report(apply_flags(load_config(&config)?, &flags)?, out, timing),
        Command::Simulate {
            preset,
            config,
            flags,
            out,
        } => {
            let base = match (preset, config) {
                (Some(name), None) => preset_config(&name)?,
                (None, Some(path)) => load_config(&path)?,
                _ => return Err(Error::Usage("simulate needs --preset or --config".into())),
            };
            let config = apply_flags(base, &flags)?;
            for file in dump_paths(&config, &out)? {
                println!("{}", file.display());
            }
            Ok(0)
        }
        Command::Estimate { input, levels, q } => estimate(&input, &levels, &q),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, Error::Usage(_)) { 2 } else { 1 })
        }
    }
}
