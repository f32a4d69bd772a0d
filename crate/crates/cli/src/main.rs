use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use permwig_cli::{recipes, run, write_outputs, CliError, Experiment, ExperimentConfig};

#[derive(Parser)]
#[command(name = "permwig", version, about = "Experiments on Wigner matrices with permuted entries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// TOML experiment config.
    #[arg(long, conflicts_with = "recipe")]
    config: Option<PathBuf>,
    /// Built-in recipe name.
    #[arg(long)]
    recipe: Option<String>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for result.toml and CSVs.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Fixed, transposed and grid statistics of each family member.
    #[command(name = "perm_stats", alias = "perm-stats")]
    PermStats(RunArgs),
    /// Pairwise condition reports over a dimension list.
    #[command(name = "condition_report", alias = "condition-report")]
    ConditionReport(RunArgs),
    /// Monte-Carlo mixed trace moment.
    #[command(name = "moment_mc", alias = "moment-mc")]
    MomentMc(RunArgs),
    /// Exact mixed trace moment at small N.
    #[command(name = "moment_exact", alias = "moment-exact")]
    MomentExact(RunArgs),
    /// Expected injective traffic state of a test graph.
    #[command(name = "traffic_check", alias = "traffic-check")]
    TrafficCheck(RunArgs),
    /// Anticommutator spectrum against the symmetric Poisson law.
    Spectrum(RunArgs),
    /// Noncrossing-pairing moment or the operator-matrix example.
    #[command(name = "nc_moment", alias = "nc-moment")]
    NcMoment(RunArgs),
    /// Runs whatever experiment the config or recipe names.
    Run(RunArgs),
    /// Lists recipes, or prints one as TOML.
    Recipes {
        #[arg(long)]
        print: Option<String>,
    },
}

fn load(args: &RunArgs) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match (&args.config, &args.recipe) {
        (Some(p), None) => ExperimentConfig::load(p)?,
        (None, Some(r)) => recipes::find(r)?.config,
        _ => return Err(CliError::Config("give one of --config or --recipe".into())),
    };
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(o) = &args.out {
        cfg.out = Some(o.clone());
    }
    Ok(cfg)
}

fn execute(args: &RunArgs, want: Option<Experiment>) -> Result<bool, CliError> {
    let cfg = load(args)?;
    if let Some(w) = want {
        if w != cfg.experiment {
            return Err(CliError::Config(format!(
                "subcommand {} does not match config experiment {}",
                w.name(),
                cfg.experiment.name()
            )));
        }
    }
    let (report, files) = run(&cfg)?;
    match &cfg.out {
        Some(dir) => {
            write_outputs(dir, &report, &files)?;
            eprintln!("wrote {}", dir.join("result.toml").display());
        }
        None => print!("{}", report.to_toml()),
    }
    for c in &report.checks {
        eprintln!(
            "{} {}: {:.3e} (tolerance {:.3e})",
            if c.pass { "pass" } else { "FAIL" },
            c.name,
            c.value,
            c.tolerance
        );
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, want) = match &cli.command {
        Command::Recipes { print: Some(name) } => {
            return match recipes::find(name) {
                Ok(r) => {
                    print!("{}", r.config.to_toml());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::from(e.exit_code())
                }
            };
        }
        Command::Recipes { print: None } => {
            for r in recipes::all() {
                println!("{:<30} {:<17} {}", r.name, r.config.experiment.name(), r.about);
            }
            return ExitCode::SUCCESS;
        }
        Command::PermStats(a) => (a, Some(Experiment::PermStats)),
        Command::ConditionReport(a) => (a, Some(Experiment::ConditionReport)),
        Command::MomentMc(a) => (a, Some(Experiment::MomentMc)),
        Command::MomentExact(a) => (a, Some(Experiment::MomentExact)),
        Command::TrafficCheck(a) => (a, Some(Experiment::TrafficCheck)),
        Command::Spectrum(a) => (a, Some(Experiment::Spectrum)),
        Command::NcMoment(a) => (a, Some(Experiment::NcMoment)),
        Command::Run(a) => (a, None),
    };
    match execute(args, want) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
