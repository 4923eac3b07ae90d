use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hystlab_cli::verify::VerifyOptions;
use hystlab_cli::{presets, CliError, RunOptions};

#[derive(Parser)]
#[command(name = "hystlab", version, about = "Hysteresis experiments on the Landau-Lifshitz equation and second-order exemplars")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct RunArgs {
    /// Spec file, or the name of a preset
    spec: String,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads for sweeps (0 = one per core)
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Write SVG loop plots
    #[arg(long)]
    plot: bool,
    /// Use this exact time step instead of the default bound
    #[arg(long)]
    dt: Option<f64>,
    /// Transient periods skipped before the analysed cycle
    #[arg(long)]
    discard_periods: Option<usize>,
}

impl RunArgs {
    fn options(&self) -> RunOptions {
        let jobs = if self.jobs == 0 { std::thread::available_parallelism().map_or(1, |n| n.get()) } else { self.jobs };
        RunOptions { out: self.out.clone(), jobs, plot: self.plot, dt: self.dt, discard_periods: self.discard_periods }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one frequency and write the t,u,y trajectory
    Simulate {
        #[command(flatten)]
        run: RunArgs,
        /// Frequency to run when the experiment file lists several
        #[arg(long)]
        omega: Option<f64>,
    },
    /// Run every listed frequency, write loop metrics and print the verdict
    Sweep {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Compare numeric and analytic eigenvalues of the linearized operator
    Spectrum {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run the built-in oracle checks
    Verify {
        /// Relative error injected into the analytic damping (self-test of the spectral check)
        #[arg(long, default_value_t = 0.0, hide = true)]
        perturb_nu: f64,
    },
    /// Inspect the shipped presets
    Preset {
        #[command(subcommand)]
        command: PresetCommand,
    },
}

#[derive(Subcommand)]
enum PresetCommand {
    /// List preset names
    List,
    /// Print a preset with every default filled in
    Show { name: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Simulate { run, omega } => {
            let spec = presets::resolve(&run.spec)?;
            let record = hystlab_cli::simulate(&spec, omega, &run.options())?;
            for f in &record.outputs {
                println!("wrote {}", run.out.join(f).display());
            }
        }
        Command::Sweep { run } => {
            let spec = presets::resolve(&run.spec)?;
            let (record, result) = hystlab_cli::sweep(&spec, &run.options())?;
            for e in &result.entries {
                println!(
                    "omega {:<10} normalized_area {:.6} area {:+.6e} closure_gap {:.3e}",
                    hystlab_cli::output::num(e.omega),
                    e.metrics.normalized_area,
                    e.metrics.area,
                    e.metrics.closure_gap
                );
            }
            if let Some(d) = record.rate_independence {
                println!("rate independence (two lowest frequencies): {d:.4}");
            }
            if let Some(c) = &record.census {
                println!("equilibria: {:?}, several stable: {}", c.count, c.multiple_stable);
            }
            println!("verdict: {}", result.verdict);
        }
        Command::Spectrum { run } => {
            let spec = presets::resolve(&run.spec)?;
            let (record, rows) = hystlab_cli::spectrum(&spec, &run.options())?;
            for r in &rows {
                println!("mode {:>2} analytic {:+.6}{:+.6}i numeric {:+.6}{:+.6}i error {:.3e}", r.mode, r.analytic.re, r.analytic.im, r.numeric.re, r.numeric.im, r.abs_error);
            }
            for f in &record.outputs {
                println!("wrote {}", run.out.join(f).display());
            }
        }
        Command::Verify { perturb_nu } => {
            let (checks, outcome) = hystlab_cli::verify(&VerifyOptions { perturb_nu });
            for c in &checks {
                println!("{:<4} {:<46} {}", if c.pass { "ok" } else { "FAIL" }, c.name, c.detail);
            }
            outcome?;
        }
        Command::Preset { command: PresetCommand::List } => {
            for (name, description) in presets::list()? {
                println!("{name:<20} {}", description.unwrap_or_default());
            }
        }
        Command::Preset { command: PresetCommand::Show { name } } => {
            let path = presets::preset_path(&name).ok_or_else(|| CliError::Spec(format!("no preset named `{name}`")))?;
            print!("{}", presets::load_file(&path)?.resolved().to_toml());
        }
    }
    Ok(())
}
