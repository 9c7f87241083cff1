use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use condsqueeze::harness::{self, Experiment, ExperimentConfig, WhichSnapshot};
use condsqueeze::Result;

/// Conditional-squeezing experiments and figure data.
#[derive(Parser)]
#[command(name = "condsqueeze", version)]
struct Cli {
    /// Key-value config applied on top of the command's defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (overrides output_path).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Use g = 1e-4 instead of the reduced-cost couplings.
    #[arg(long, global = true)]
    paper_scale: bool,
    /// Fock cutoff (overrides fock_cutoff).
    #[arg(long, global = true)]
    cutoff: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Prepare a code word and report both measurement branches.
    Protocol,
    /// Fidelity against drive amplitude.
    Fig2a,
    /// Fidelity against coupling strength.
    Fig2b,
    /// Moment ratios of the two code words.
    Fig3,
    /// Open-system fidelity curves.
    Fig4,
    /// Wigner function grid plus a JSON sidecar.
    Wigner {
        #[arg(long, value_enum)]
        which: Which,
    },
    /// Run the invariant suite.
    Validate,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    #[value(name = "fig1_sym")]
    Fig1Sym,
    #[value(name = "fig1_antisym")]
    Fig1Antisym,
    #[value(name = "open_endstate")]
    OpenEndstate,
}

fn config(cli: &Cli, experiment: Experiment) -> Result<ExperimentConfig> {
    let mut cfg = harness::default_config(experiment, cli.paper_scale);
    if let Some(path) = &cli.config {
        cfg = harness::load_config(path, cfg)?;
    }
    if let Some(n) = cli.cutoff {
        cfg.fock_cutoff = n;
    }
    if let Some(out) = &cli.out {
        cfg.output_path = out.to_string_lossy().into_owned();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(path: &str, contents: &str) -> Result<()> {
    harness::write_text(Path::new(path), contents)?;
    println!("wrote {path}");
    Ok(())
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Protocol => {
            let cfg = config(cli, Experiment::Protocol)?;
            let result = harness::run_protocol(&cfg)?;
            emit(&cfg.output_path, &harness::protocol_json(&result))?;
        }
        Command::Fig2a => {
            let cfg = config(cli, Experiment::Fig2a)?;
            let rows = harness::sweep_amplitude(&cfg, &harness::amplitude_grid())?;
            emit(&cfg.output_path, &harness::amplitude_csv(&rows))?;
        }
        Command::Fig2b => {
            let cfg = config(cli, Experiment::Fig2b)?;
            let rows = harness::sweep_coupling(&cfg, &harness::coupling_grid(cli.paper_scale))?;
            emit(&cfg.output_path, &harness::coupling_csv(&rows))?;
        }
        Command::Fig3 => {
            let cfg = config(cli, Experiment::Fig3)?;
            let rows = harness::moment_ratio_curves(&harness::r_grid(), &[1, 2, 3, 4])?;
            emit(&cfg.output_path, &harness::moment_csv(&rows))?;
        }
        Command::Fig4 => {
            let cfg = config(cli, Experiment::Fig4)?;
            let rows = harness::open_fidelity_curves(&cfg, &harness::FIG4_COMBOS)?;
            emit(&cfg.output_path, &harness::open_curves_csv(&rows))?;
        }
        Command::Wigner { which } => {
            let cfg = config(cli, Experiment::Wigner)?;
            let which = match which {
                Which::Fig1Sym => WhichSnapshot::Fig1Sym,
                Which::Fig1Antisym => WhichSnapshot::Fig1Antisym,
                Which::OpenEndstate => WhichSnapshot::OpenEndstate,
            };
            let (grid, meta) = harness::wigner_snapshot(&cfg, which)?;
            for w in grid.warnings() {
                eprintln!("warning: {w}");
            }
            emit(&cfg.output_path, &harness::wigner_csv(&grid))?;
            let sidecar = Path::new(&cfg.output_path).with_extension("json");
            emit(&sidecar.to_string_lossy(), &harness::snapshot_json(&meta))?;
        }
        Command::Validate => {
            let cfg = config(cli, Experiment::Validate)?;
            let report = harness::validate();
            print!("{}", report.summary());
            emit(&cfg.output_path, &report.to_json())?;
            if !report.passed {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
