//! Self-convergence: run one config at doubling resolutions, compare each
//! solution with the next finer one at `t_end`, and estimate the order.
//!
//! The finer solution is restricted to the coarse grid before differencing:
//! pairs of fine cells are averaged onto the coarse cell they tile, and coarse
//! faces coincide with every other fine face. The error is
//! `sqrt(|rho_n - R rho_2n|^2 + |u_n - R u_2n|^2)` in the grid `L^2` norms.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::grid::{lp_norm, CellField, FaceField, Grid};
use crate::num::Num;
use crate::solver::State;

use super::scenario::run_scenario;
use super::{CliError, RunConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub error_rho: f64,
    pub error_u: f64,
    pub error: f64,
    /// `log2(e_{n/2} / e_n)`; absent on the coarsest row
    pub order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub t: f64,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    /// The smallest observed order.
    pub fn min_order(&self) -> Option<f64> {
        self.rows.iter().filter_map(|r| r.order).reduce(f64::min)
    }

    pub fn to_csv(&self, config: &RunConfig) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# scenario = {}", config.run.scenario);
        let _ = writeln!(s, "# config_sha256 = {}", config.hash());
        let _ = writeln!(s, "# t = {}", Num(self.t));
        s.push_str("n,error_rho,error_u,error,order\n");
        for r in &self.rows {
            let order = r.order.map_or_else(|| "NA".into(), |o| Num(o).to_string());
            let _ = writeln!(
                s,
                "{},{},{},{},{order}",
                r.n,
                Num(r.error_rho),
                Num(r.error_u),
                Num(r.error)
            );
        }
        s
    }
}

pub fn check_resolutions(resolutions: &[usize]) -> Result<(), CliError> {
    if resolutions.len() < 3 {
        return Err(CliError::Config(format!(
            "--resolutions: need at least 3 resolutions, got {}",
            resolutions.len()
        )));
    }
    if resolutions[0] < 4 {
        return Err(CliError::Config(
            "--resolutions: n must be at least 4".into(),
        ));
    }
    for w in resolutions.windows(2) {
        if w[1] != 2 * w[0] {
            return Err(CliError::Config(format!(
                "--resolutions: each resolution must double the previous ({} then {})",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// Restricts a solution on `2n` cells to `n` cells.
pub fn restrict(fine: &State) -> State {
    let rho = fine.rho.as_slice();
    let u = fine.u.as_slice();
    State {
        t: fine.t,
        rho: CellField(rho.chunks_exact(2).map(|p| 0.5 * (p[0] + p[1])).collect()),
        u: FaceField(u.iter().step_by(2).copied().collect()),
    }
}

/// `L^2` distance between a coarse solution and the restricted fine one.
pub fn self_difference(coarse: &State, fine: &State) -> Result<(f64, f64), CliError> {
    let grid = Grid::new(coarse.rho.len()).map_err(CliError::Numerical)?;
    let r = restrict(fine);
    let d_rho = coarse.rho.zip_map(&r.rho, |a, b| a - b);
    let d_u = coarse.u.zip_map(&r.u, |a, b| a - b);
    let e_rho = lp_norm(&d_rho, 2.0, &grid).map_err(CliError::Numerical)?;
    let e_u = lp_norm(&d_u, 2.0, &grid).map_err(CliError::Numerical)?;
    Ok((e_rho, e_u))
}

/// Runs `base` at each resolution (concurrently, each into
/// `<output>/n<N>/`) and writes `<output>/convergence.csv`.
pub fn convergence_study(
    base: &RunConfig,
    resolutions: &[usize],
) -> Result<ConvergenceReport, CliError> {
    check_resolutions(resolutions)?;
    let root = PathBuf::from(&base.run.output);
    let configs: Vec<RunConfig> = resolutions
        .iter()
        .map(|&n| {
            let mut c = base.clone();
            c.grid.n = n;
            c.run.output = root.join(format!("n{n}")).to_string_lossy().into_owned();
            c
        })
        .collect();
    for c in &configs {
        c.validate()?;
    }

    let results: Vec<Result<State, CliError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = configs
            .iter()
            .map(|c| {
                scope.spawn(move || {
                    let outcome = run_scenario(c)?;
                    match outcome.aborted {
                        Some(e) => Err(CliError::Numerical(e)),
                        None => Ok(outcome.trajectory.final_state),
                    }
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("resolution worker panicked"))
            .collect()
    });
    let states = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for (k, pair) in states.windows(2).enumerate() {
        let (error_rho, error_u) = self_difference(&pair[0], &pair[1])?;
        let error = error_rho.hypot(error_u);
        let order = rows.last().map(|prev| (prev.error / error).log2());
        rows.push(ConvergenceRow {
            n: resolutions[k],
            error_rho,
            error_u,
            error,
            order,
        });
    }
    let report = ConvergenceReport {
        t: base.run.t_end,
        rows,
    };
    write_report(base, &report, &root)?;
    Ok(report)
}

fn write_report(base: &RunConfig, report: &ConvergenceReport, root: &Path) -> Result<(), CliError> {
    fs::create_dir_all(root)?;
    fs::write(root.join("convergence.csv"), report.to_csv(base))?;
    Ok(())
}
