//! One configured run: stationary solve, time march, diagnostics and files.
//!
//! Files written to the run's output directory:
//!
//! - `diagnostics.csv`: one row per record
//! - `stationary.csv`: the stationary profile, only when it exists
//! - `final_state.csv`: checkpoint of the last state reached
//! - `summary.txt`: `key = value` lines, written even when the run aborts
//!
//! CSV files open with `#` metadata lines (scenario, config hash, grid size).
//! Nothing time- or machine-dependent is written, so reruns are byte-identical.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::diagnostics::{fit_decay, DecayFit, DiagnosticRecord};
use crate::error::Error;
use crate::grid::Grid;
use crate::num::Num;
use crate::solver::{init_state, write_checkpoint, Simulation, State, Trajectory};
use crate::stationary::{
    existence_condition_scaled, solve_stationary, ExistenceCheck, StationaryDensity,
};

use super::{CliError, RunConfig};

/// Everything a run produced, files aside.
#[derive(Debug, Clone)]
pub struct ScenarioOutcome {
    pub trajectory: Trajectory,
    /// why the run stopped early, if it did
    pub aborted: Option<Error>,
    pub stationary: Option<StationaryDensity>,
    pub existence: ExistenceCheck,
    pub summary: Summary,
}

impl ScenarioOutcome {
    pub fn final_state(&self) -> &State {
        &self.trajectory.final_state
    }

    pub fn records(&self) -> &[DiagnosticRecord] {
        &self.trajectory.records
    }
}

/// Headline numbers of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub scenario: String,
    pub config_hash: String,
    pub n: usize,
    /// `None` on success, the abort reason otherwise
    pub abort_reason: Option<String>,
    pub t_final: f64,
    pub steps: usize,
    pub existence: ExistenceCheck,
    pub kappa: Option<f64>,
    pub fit_window: (f64, f64),
    pub dev_l2_fit: Result<DecayFit, String>,
    pub u_w12_fit: Result<DecayFit, String>,
    pub final_sup_rho: f64,
    pub max_sup_rho: f64,
    /// least-squares slope of `gradrho_l2` against `t` over the fit window
    pub gradrho_slope: Option<f64>,
    pub max_mass_drift: f64,
}

impl Summary {
    pub fn render(&self) -> String {
        let mut s = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        line("scenario", self.scenario.clone());
        line("config_sha256", self.config_hash.clone());
        line("n", self.n.to_string());
        line(
            "status",
            match &self.abort_reason {
                None => "completed".into(),
                Some(r) => format!("aborted: {r}"),
            },
        );
        line("t_final", Num(self.t_final).to_string());
        line("steps", self.steps.to_string());
        line(
            "existence_condition",
            if self.existence.holds {
                format!(
                    "holds, lhs={}, margin={}",
                    Num(self.existence.lhs),
                    Num(self.existence.margin)
                )
            } else {
                format!(
                    "existence condition violated, lhs={}",
                    Num(self.existence.lhs)
                )
            },
        );
        line("kappa", opt(self.kappa));
        line(
            "fit_window",
            format!("[{}, {}]", Num(self.fit_window.0), Num(self.fit_window.1)),
        );
        for (name, fit) in [("dev_l2", &self.dev_l2_fit), ("u_w12", &self.u_w12_fit)] {
            match fit {
                Ok(f) => {
                    line(&format!("alpha_{name}"), Num(f.alpha).to_string());
                    line(&format!("r2_{name}"), Num(f.r_squared).to_string());
                }
                Err(reason) => {
                    line(&format!("alpha_{name}"), format!("NA ({reason})"));
                    line(&format!("r2_{name}"), "NA".into());
                }
            }
        }
        line("final_sup_rho", Num(self.final_sup_rho).to_string());
        line("max_sup_rho", Num(self.max_sup_rho).to_string());
        line("gradrho_slope", opt(self.gradrho_slope));
        line("max_mass_drift", Num(self.max_mass_drift).to_string());
        s
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".into(), |x| Num(x).to_string())
}

fn ols_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mt = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let stt: f64 = points.iter().map(|p| (p.0 - mt).powi(2)).sum();
    let sty: f64 = points.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    (stt > 0.0).then(|| sty / stt)
}

/// Existence check and, when it holds, the stationary profile.
pub fn stationary_for(
    config: &RunConfig,
) -> Result<(ExistenceCheck, Option<StationaryDensity>), CliError> {
    let p = config.problem()?;
    let check = existence_condition_scaled(&p.force, p.params.gamma(), p.params.coefficient(), 1.0);
    if !check.holds {
        return Ok((check, None));
    }
    let s = solve_stationary(&p.force, &p.params, 1.0, &p.grid, config.stationary_tol())
        .map_err(CliError::Numerical)?;
    Ok((check, Some(s)))
}

/// Runs `config` without touching the file system.
pub fn simulate(config: &RunConfig) -> Result<ScenarioOutcome, CliError> {
    let problem = config.problem()?;
    let solver = config.solver_config()?;
    let data = config.initial_data()?;
    let (existence, stationary) = stationary_for(config)?;
    let initial = init_state(&data, &problem.grid, stationary.as_ref())
        .map_err(|e| CliError::Config(format!("initial: {e}")))?;

    let sim = Simulation::new(&problem, solver).with_stationary(stationary.as_ref());
    let (trajectory, aborted) = match sim.run(initial, config.run.t_end, config.run.sample_every) {
        Ok(t) => (t, None),
        Err(a) => (a.partial, Some(a.error)),
    };
    let summary = summarize(
        config,
        &trajectory,
        aborted.as_ref(),
        existence,
        stationary.as_ref(),
    );
    Ok(ScenarioOutcome {
        trajectory,
        aborted,
        stationary,
        existence,
        summary,
    })
}

fn summarize(
    config: &RunConfig,
    trajectory: &Trajectory,
    aborted: Option<&Error>,
    existence: ExistenceCheck,
    stationary: Option<&StationaryDensity>,
) -> Summary {
    let records = &trajectory.records;
    let window = config.fit_window();
    let fit = |pick: &dyn Fn(&DiagnosticRecord) -> Option<f64>| -> Result<DecayFit, String> {
        let series: Vec<(f64, f64)> = records
            .iter()
            .filter_map(|r| pick(r).map(|v| (r.t, v)))
            .collect();
        if series.is_empty() {
            return Err("no stationary profile".into());
        }
        fit_decay(&series, window).map_err(|e| e.to_string())
    };
    let grad: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.t >= window.0 && r.t <= window.1)
        .map(|r| (r.t, r.gradrho_l2))
        .collect();
    let mass0 = records.first().map_or(1.0, |r| r.mass);
    Summary {
        scenario: config.run.scenario.clone(),
        config_hash: config.hash(),
        n: config.grid.n,
        abort_reason: aborted.map(|e| e.to_string()),
        t_final: trajectory.final_state.t,
        steps: trajectory.steps,
        existence,
        kappa: stationary.map(|s| s.kappa),
        fit_window: window,
        dev_l2_fit: fit(&|r| r.dev_l2),
        u_w12_fit: fit(&|r| Some(r.u_w12)),
        final_sup_rho: trajectory.final_state.rho.max(),
        max_sup_rho: records.iter().map(|r| r.sup_rho).fold(0.0, f64::max),
        gradrho_slope: ols_slope(&grad),
        max_mass_drift: records
            .iter()
            .map(|r| (r.mass - mass0).abs())
            .fold(0.0, f64::max),
    }
}

fn metadata(config: &RunConfig) -> Vec<(&'static str, String)> {
    vec![
        ("scenario", config.run.scenario.clone()),
        ("config_sha256", config.hash()),
        ("n", config.grid.n.to_string()),
    ]
}

fn header(meta: &[(&str, String)]) -> String {
    meta.iter().map(|(k, v)| format!("# {k} = {v}\n")).collect()
}

pub fn diagnostics_csv(config: &RunConfig, records: &[DiagnosticRecord]) -> String {
    let mut s = header(&metadata(config));
    s.push_str(&DiagnosticRecord::csv_header());
    s.push('\n');
    for r in records {
        s.push_str(&r.to_csv_row());
        s.push('\n');
    }
    s
}

pub fn stationary_csv(config: &RunConfig, st: &StationaryDensity) -> String {
    let mut meta = metadata(config);
    meta.extend([
        ("kappa", Num(st.kappa).to_string()),
        ("k1", Num(st.k1).to_string()),
        ("k2", Num(st.k2).to_string()),
        ("residual_norm", Num(st.residual_norm).to_string()),
        ("mass", Num(st.mass).to_string()),
    ]);
    let mut s = header(&meta);
    s.push_str("x_center,rho_s\n");
    let grid = Grid::new(st.profile.len()).expect("profile comes from a valid grid");
    for (x, r) in grid.cell_centers().zip(st.profile.iter()) {
        let _ = writeln!(s, "{},{}", Num(x), Num(*r));
    }
    s
}

/// Writes all output files for `outcome` into `dir`.
pub fn write_outputs(
    config: &RunConfig,
    outcome: &ScenarioOutcome,
    dir: &Path,
) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("summary.txt"), outcome.summary.render())?;
    fs::write(
        dir.join("diagnostics.csv"),
        diagnostics_csv(config, outcome.records()),
    )?;
    let stationary_path = dir.join("stationary.csv");
    match &outcome.stationary {
        Some(st) => fs::write(&stationary_path, stationary_csv(config, st))?,
        // a stale profile from an earlier feasible run would be misleading
        None if stationary_path.exists() => fs::remove_file(&stationary_path)?,
        None => {}
    }
    let grid = Grid::new(config.grid.n).map_err(|e| CliError::Config(e.to_string()))?;
    fs::write(
        dir.join("final_state.csv"),
        write_checkpoint(outcome.final_state(), &grid, &metadata(config)),
    )?;
    Ok(())
}

/// Runs `config` and writes its files to `run.output`. A numerical abort still
/// writes every file (the summary records the reason) and is reported through
/// [`ScenarioOutcome::aborted`].
pub fn run_scenario(config: &RunConfig) -> Result<ScenarioOutcome, CliError> {
    let dir = Path::new(&config.run.output);
    let outcome = match simulate(config) {
        Ok(o) => o,
        Err(e) => {
            fs::create_dir_all(dir)?;
            fs::write(
                dir.join("summary.txt"),
                format!(
                    "scenario = {}\nconfig_sha256 = {}\nstatus = aborted: {e}\n",
                    config.run.scenario,
                    config.hash()
                ),
            )?;
            return Err(e);
        }
    };
    write_outputs(config, &outcome, dir)?;
    Ok(outcome)
}
