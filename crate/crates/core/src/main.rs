use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use barotropic_ns::cli::{self, CliError, RunConfig};
use barotropic_ns::model::HypothesisReport;
use barotropic_ns::solver::{compatibility_residual, init_state, DEFAULT_VACUUM_THRESHOLD};

#[derive(Parser)]
#[command(
    name = "barotropic",
    version,
    about = "1D compressible barotropic Navier-Stokes lab"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write diagnostics.csv, stationary.csv, final_state.csv, summary.txt.
    Run {
        config: PathBuf,
        /// Overrides `run.output`.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Solve for the stationary density and write stationary.csv.
    Stationary {
        config: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Self-convergence study over doubling resolutions.
    Converge {
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        resolutions: Vec<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Evaluate the stationary existence condition and the regularity hypotheses.
    CheckCondition { config: PathBuf },
    /// Compatibility residual of the initial data.
    Compat { config: PathBuf },
}

fn load(path: &Path, output: &Option<PathBuf>) -> Result<RunConfig, CliError> {
    let mut c = cli::load_config(path)?;
    if let Some(o) = output {
        c.run.output = o.to_string_lossy().into_owned();
    }
    Ok(c)
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Run { config, output } => {
            let c = load(&config, &output)?;
            let outcome = cli::run_scenario(&c)?;
            print!("{}", outcome.summary.render());
            if let Some(e) = outcome.aborted {
                return Err(CliError::Numerical(e));
            }
        }
        Command::Stationary { config, output } => {
            let c = load(&config, &output)?;
            let (check, st) = cli::scenario::stationary_for(&c)?;
            let st = st.ok_or(CliError::Infeasible {
                lhs: check.lhs,
                mass: 1.0,
            })?;
            let dir = PathBuf::from(&c.run.output);
            std::fs::create_dir_all(&dir)?;
            std::fs::write(
                dir.join("stationary.csv"),
                cli::scenario::stationary_csv(&c, &st),
            )?;
            println!("lhs = {}", check.lhs);
            println!("margin = {}", check.margin);
            println!("kappa = {}", st.kappa);
            println!("k1 = {}", st.k1);
            println!("k2 = {}", st.k2);
            println!("residual_norm = {}", st.residual_norm);
        }
        Command::Converge {
            config,
            resolutions,
            output,
        } => {
            let c = load(&config, &output)?;
            let report = cli::convergence_study(&c, &resolutions)?;
            print!("{}", report.to_csv(&c));
        }
        Command::CheckCondition { config } => {
            let c = cli::load_config(&config)?;
            let params = c.params()?;
            let force = c.force()?;
            let check = barotropic_ns::stationary::existence_condition_scaled(
                &force,
                params.gamma(),
                params.coefficient(),
                1.0,
            );
            println!("holds = {}", check.holds);
            println!("lhs = {}", check.lhs);
            println!("margin = {}", check.margin);
            let h = HypothesisReport::assess(&params, &force);
            println!("force_bounded = {}", h.force_bounded);
            println!("force_h1 = {}", h.force_h1);
            println!("viscosity_c1 = {}", h.viscosity_c1);
            println!("viscosity_c2 = {}", h.viscosity_c2);
            println!("strong_solution_hypotheses = {}", h.strong_solution());
            println!("classical_solution_hypotheses = {}", h.classical_solution());
        }
        Command::Compat { config } => {
            let c = cli::load_config(&config)?;
            let params = c.params()?;
            let grid = c.grid()?;
            let (_, st) = cli::scenario::stationary_for(&c)?;
            let state = init_state(&c.initial_data()?, &grid, st.as_ref())
                .map_err(|e| CliError::Config(format!("initial: {e}")))?;
            let threshold = c.run.compat_threshold.unwrap_or(DEFAULT_VACUUM_THRESHOLD);
            let r = compatibility_residual(&state, &params, &grid, threshold)
                .map_err(CliError::Numerical)?;
            println!("residual = {}", r.residual);
            println!("assessed_faces = {}", r.assessed);
            println!("excluded_faces = {}", r.excluded);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                cli::EXIT_CONFIG as u8
            } else {
                0
            });
        }
    };
    match execute(args.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
