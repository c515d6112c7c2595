use std::path::{Path, PathBuf};
use std::process::ExitCode;

use biphoton::detection::NoiseModel;
use biphoton::scenario::{
    builtin, builtins, format_config, load, run_scenario, suggest, write_outputs, ScenarioError,
    ScenarioOutcome,
};
use clap::{Parser, Subcommand};

/// Default base directory for outputs, overridden by `--out` and by an
/// `[output]` section in the config.
const OUT_ENV: &str = "BIPHOTON_OUT";
const DEFAULT_OUT: &str = "biphoton-out";

#[derive(Parser)]
#[command(
    name = "biphoton",
    version,
    about = "Entangled-photon aberration cancellation scenarios"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a built-in scenario or a config file.
    Run {
        /// Built-in name (see `list`) or path to a config file.
        scenario: String,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed for the scan noise and the Monte Carlo errors.
        #[arg(long)]
        seed: Option<u64>,
        /// Grid points per axis, keeping the grid spacing.
        #[arg(long)]
        grid: Option<usize>,
        /// Use expected counts instead of Poisson draws.
        #[arg(long)]
        noiseless: bool,
    },
    /// List the built-in scenarios.
    List,
    /// Write a built-in scenario as a config file.
    Export { name: String, path: PathBuf },
}

fn output_dir(explicit: Option<PathBuf>, configured: Option<PathBuf>, name: &str) -> PathBuf {
    explicit.or(configured).unwrap_or_else(|| {
        let base =
            std::env::var_os(OUT_ENV).map_or_else(|| PathBuf::from(DEFAULT_OUT), PathBuf::from);
        base.join(name)
    })
}

fn run(
    scenario: &str,
    out: Option<PathBuf>,
    seed: Option<u64>,
    grid: Option<usize>,
    noiseless: bool,
) -> Result<(), ScenarioError> {
    let mut cfg = load(scenario)?;
    if let Some(seed) = seed {
        cfg.scan.seed = seed;
        cfg.analysis.seed = seed;
    }
    if let Some(points) = grid {
        let spacing = cfg.grid.position_extent_mm / cfg.grid.points as f64;
        cfg.grid.points = points;
        cfg.grid.position_extent_mm = spacing * points as f64;
    }
    if noiseless {
        cfg.scan.noise = NoiseModel::Noiseless;
    }
    let outcome = run_scenario(&cfg)?;
    let dir = output_dir(out, cfg.output.clone(), &cfg.name);
    let written = write_outputs(&cfg, &outcome, &dir)?;
    summarize(&outcome);
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn summarize(outcome: &ScenarioOutcome) {
    match outcome {
        ScenarioOutcome::Correlation(o) => {
            if let Some(w) = &o.witness {
                println!(
                    "Δx₋² = {:.4} mm², Δκ₊² = {:.4} mm⁻², product = {:.4} ± {:.4} (bound {}): {}",
                    w.delta_x_minus_sq,
                    w.delta_kappa_plus_sq,
                    w.product,
                    w.product_se,
                    w.bound,
                    if w.violated {
                        "entangled"
                    } else {
                        "not verified"
                    }
                );
            }
        }
        ScenarioOutcome::Imaging(o) => {
            let period = o
                .image
                .period
                .map_or_else(|| "none".to_string(), |p| format!("{p:.4} mm"));
            println!("visibility = {:.4}, period = {period}", o.image.visibility);
        }
    }
}

fn export(name: &str, path: &Path) -> Result<(), ScenarioError> {
    let cfg = builtin(name).ok_or_else(|| ScenarioError::UnknownScenario {
        name: name.to_string(),
        suggestion: suggest(name).map(str::to_string),
    })?;
    std::fs::write(path, format_config(&cfg)).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            scenario,
            out,
            seed,
            grid,
            noiseless,
        } => run(&scenario, out, seed, grid, noiseless),
        Command::List => {
            for b in builtins() {
                println!("{:<7} {}", b.name, b.description);
            }
            Ok(())
        }
        Command::Export { name, path } => export(&name, &path),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
