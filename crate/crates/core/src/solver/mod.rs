//! Time marching on the staggered grid.
//!
//! One step of length `dt` does:
//!
//! 1. Continuity, explicit and conservative: face fluxes `u_j * rho_upwind`
//!    with zero flux through the walls. Under the CFL bound the update is a
//!    convex combination, so density stays nonnegative and vacuum is admitted.
//! 2. Momentum, semi-implicit: explicit upwind momentum transport and pressure
//!    gradient at the new density, backward-Euler viscosity. The viscous
//!    matrix has diagonal `m_j/dt + (mu_{j-1} + mu_j)/dx^2 > 0` even where the
//!    face mass `m_j` vanishes, because `mu >= mu_lower > 0`.

mod checkpoint;
mod initial;
mod tridiag;

pub use checkpoint::{read_checkpoint, write_checkpoint};
pub use initial::{init_state, InitialData, Profile, BOUNDARY_TOLERANCE};
pub use tridiag::tridiagonal_solve;

use crate::diagnostics::{record, Context, DiagnosticRecord};
use crate::error::{Error, Result};
use crate::grid::{CellField, FaceField, Field, Grid};
use crate::model::{FluidParams, ForceField};
use crate::stationary::StationaryDensity;

/// Density and velocity at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub t: f64,
    /// cell centers, nonnegative
    pub rho: CellField,
    /// faces, `u[0] = u[n] = 0`
    pub u: FaceField,
}

impl State {
    pub fn check(&self, grid: &Grid) -> Result<()> {
        self.rho.check(grid)?;
        self.u.check(grid)
    }
}

/// Everything that defines the PDE: constitutive laws, force and mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub params: FluidParams,
    pub force: ForceField,
    pub grid: Grid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Courant number in `(0, 1]`.
    pub cfl: f64,
    pub dt_max: f64,
    /// Optional density floor applied after the continuity update. Zero means
    /// no floor; a positive floor breaks exact mass conservation and exists
    /// only for comparison runs.
    pub vacuum_floor: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            cfl: 0.4,
            dt_max: 0.01,
            vacuum_floor: 0.0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "cfl must lie in (0, 1] (got {})",
                self.cfl
            )));
        }
        if !(self.dt_max > 0.0 && self.dt_max.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "dt_max must be positive (got {})",
                self.dt_max
            )));
        }
        if !(self.vacuum_floor >= 0.0 && self.vacuum_floor.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "vacuum_floor must be >= 0 (got {})",
                self.vacuum_floor
            )));
        }
        Ok(())
    }
}

/// Advective/acoustic time step `cfl dx / max_j (|u_j| + c(rho_face))`, capped
/// by `dt_max`. The result also never exceeds `dx / max_i (u_{i+1}^+ + u_i^-)`,
/// the bound that keeps the upwind continuity update a convex combination;
/// that bound is inactive for `cfl <= 1/2`.
pub fn compute_dt(state: &State, config: &SolverConfig, params: &FluidParams, grid: &Grid) -> f64 {
    let n = grid.cells();
    let rho = state.rho.as_slice();
    let u = state.u.as_slice();
    let mut speed: f64 = 0.0;
    for j in 0..=n {
        let rho_face = if j == 0 {
            rho[0]
        } else if j == n {
            rho[n - 1]
        } else {
            0.5 * (rho[j - 1] + rho[j])
        };
        speed = speed.max(u[j].abs() + params.c(rho_face));
    }
    let mut dt = config.dt_max;
    if speed > 0.0 {
        dt = dt.min(config.cfl * grid.dx() / speed);
    }
    let outflow = (0..n)
        .map(|i| u[i + 1].max(0.0) - u[i].min(0.0))
        .fold(0.0, f64::max);
    if outflow > 0.0 {
        dt = dt.min(grid.dx() / outflow);
    }
    dt
}

/// Advances `state` by `dt`.
pub fn step(state: &State, dt: f64, problem: &Problem, config: &SolverConfig) -> Result<State> {
    let grid = &problem.grid;
    let params = &problem.params;
    let n = grid.cells();
    let dx = grid.dx();
    let lambda = dt / dx;
    let rho = state.rho.as_slice();
    let u = state.u.as_slice();
    let t_new = state.t + dt;

    // (a) continuity
    let mut flux = vec![0.0; n + 1];
    for j in 1..n {
        let upwind = if u[j] >= 0.0 { rho[j - 1] } else { rho[j] };
        flux[j] = u[j] * upwind;
    }
    let scale = rho.iter().copied().fold(0.0, f64::max);
    let mut rho_new = Vec::with_capacity(n);
    for i in 0..n {
        let mut r = rho[i] - lambda * (flux[i + 1] - flux[i]);
        if r < 0.0 {
            // rounding in a convex combination; anything larger is a CFL breach
            if r >= -1e-14 * scale {
                r = 0.0;
            } else {
                return Err(Error::NegativeDensity {
                    index: i,
                    value: r,
                    t: t_new,
                });
            }
        }
        if config.vacuum_floor > 0.0 {
            r = r.max(config.vacuum_floor);
        }
        rho_new.push(r);
    }

    // (b) momentum on the n - 1 interior faces
    let mu: Vec<f64> = rho_new.iter().map(|&r| params.mu(r)).collect();
    let pressure: Vec<f64> = rho_new.iter().map(|&r| params.p(r)).collect();
    // mass fluxes through the dual faces (cell centers)
    let dual_flux: Vec<f64> = (0..n).map(|i| 0.5 * (flux[i] + flux[i + 1])).collect();
    let inv_dx2 = 1.0 / (dx * dx);
    let m = n - 1;
    let mut lower = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut upper = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    for k in 0..m {
        let j = k + 1;
        let face_mass = 0.5 * (rho_new[j - 1] + rho_new[j]);
        let advection = (dual_flux[j - 1].max(0.0) * (u[j] - u[j - 1])
            + dual_flux[j].min(0.0) * (u[j + 1] - u[j]))
            / dx;
        let grad_p = (pressure[j] - pressure[j - 1]) / dx;
        lower[k] = -mu[j - 1] * inv_dx2;
        upper[k] = -mu[j] * inv_dx2;
        diag[k] = face_mass / dt + (mu[j - 1] + mu[j]) * inv_dx2;
        rhs[k] =
            face_mass * u[j] / dt - advection - grad_p + face_mass * problem.force.f(grid.face(j));
    }
    let interior = tridiag::tridiagonal_solve_positive(&lower, &diag, &upper, &rhs)?;
    let mut u_new = Vec::with_capacity(n + 1);
    u_new.push(0.0);
    u_new.extend(interior);
    u_new.push(0.0);

    if rho_new.iter().chain(&u_new).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { t: t_new });
    }
    Ok(State {
        t: t_new,
        rho: CellField(rho_new),
        u: FaceField(u_new),
    })
}

/// The outcome of [`Simulation::run`].
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub final_state: State,
    pub records: Vec<DiagnosticRecord>,
    pub steps: usize,
}

/// A run that stopped early; carries everything computed before the failure.
#[derive(Debug, Clone)]
pub struct Aborted {
    pub error: Error,
    pub partial: Trajectory,
}

impl From<Aborted> for Error {
    fn from(a: Aborted) -> Self {
        a.error
    }
}

/// One accepted step, handed to observers.
pub struct StepEvent<'a> {
    pub before: &'a State,
    pub after: &'a State,
    pub dt: f64,
}

pub struct Simulation<'a> {
    pub problem: &'a Problem,
    pub config: SolverConfig,
    pub stationary: Option<&'a StationaryDensity>,
}

impl<'a> Simulation<'a> {
    pub fn new(problem: &'a Problem, config: SolverConfig) -> Self {
        Self {
            problem,
            config,
            stationary: None,
        }
    }

    pub fn with_stationary(mut self, stationary: Option<&'a StationaryDensity>) -> Self {
        self.stationary = stationary;
        self
    }

    fn context(&self) -> Context<'_> {
        Context {
            problem: self.problem,
            stationary: self.stationary,
        }
    }

    // Aborted carries the partial trajectory on purpose
    #[allow(clippy::result_large_err)]
    pub fn run(
        &self,
        initial: State,
        t_end: f64,
        sample_every: f64,
    ) -> Result<Trajectory, Aborted> {
        self.run_observed(initial, t_end, sample_every, |_| {})
    }

    /// Marches to `t_end`, recording diagnostics at multiples of
    /// `sample_every` and at `t_end`. Steps are shortened to land exactly on
    /// sample times. `observer` sees every accepted step.
    #[allow(clippy::result_large_err)]
    pub fn run_observed(
        &self,
        initial: State,
        t_end: f64,
        sample_every: f64,
        mut observer: impl FnMut(StepEvent<'_>),
    ) -> Result<Trajectory, Aborted> {
        let ctx = self.context();
        let grid = &self.problem.grid;
        let mut state = initial;
        let mut steps = 0;
        let mut records = Vec::new();

        let setup = (|| -> Result<()> {
            self.config.validate()?;
            state.check(grid)?;
            if !(t_end >= 0.0 && t_end.is_finite()) {
                return Err(Error::domain("t_end", t_end, ">= 0"));
            }
            if !(sample_every > 0.0) {
                return Err(Error::domain("sample_every", sample_every, "> 0"));
            }
            Ok(())
        })();
        let fail = |error: Error, state: State, records: Vec<DiagnosticRecord>, steps| Aborted {
            error,
            partial: Trajectory {
                final_state: state,
                records,
                steps,
            },
        };
        if let Err(e) = setup {
            return Err(fail(e, state, records, steps));
        }
        match record(&state, &ctx) {
            Ok(r) => records.push(r),
            Err(e) => return Err(fail(e, state, records, steps)),
        }

        let eps = 1e-12 * t_end.max(1.0);
        let mut sample_index: u64 = 1;
        while state.t < t_end - eps {
            let next_sample = (sample_index as f64 * sample_every).min(t_end);
            let dt = compute_dt(&state, &self.config, &self.problem.params, grid)
                .min(next_sample - state.t);
            let mut next = match step(&state, dt, self.problem, &self.config) {
                Ok(s) => s,
                Err(e) => return Err(fail(e, state, records, steps)),
            };
            let landed = next.t >= next_sample - eps;
            if landed {
                next.t = next_sample;
            }
            observer(StepEvent {
                before: &state,
                after: &next,
                dt,
            });
            state = next;
            steps += 1;
            if landed {
                while (sample_index as f64) * sample_every <= state.t + eps {
                    sample_index += 1;
                }
                match record(&state, &ctx) {
                    Ok(r) => records.push(r),
                    Err(e) => return Err(fail(e, state, records, steps)),
                }
            }
        }
        Ok(Trajectory {
            final_state: state,
            records,
            steps,
        })
    }
}

/// Samples `initial` and runs it to `t_end`.
pub fn run(
    initial: &InitialData,
    problem: &Problem,
    config: &SolverConfig,
    t_end: f64,
    sample_every: f64,
    stationary: Option<&StationaryDensity>,
) -> Result<Trajectory> {
    let state = init_state(initial, &problem.grid, stationary)?;
    Ok(Simulation::new(problem, *config)
        .with_stationary(stationary)
        .run(state, t_end, sample_every)?)
}

/// Default density threshold below which cells are excluded from the
/// compatibility residual.
pub const DEFAULT_VACUUM_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompatibilityReport {
    /// `L^2` norm of `g` over the assessed faces.
    pub residual: f64,
    pub assessed: usize,
    /// faces whose density is at or below the threshold
    pub excluded: usize,
}

/// Discrete `g = rho^{-1/2} ([mu(rho) u_x]_x - P(rho)_x)` on interior faces
/// with face density above `threshold`, and its `L^2` norm.
pub fn compatibility_residual(
    state: &State,
    params: &FluidParams,
    grid: &Grid,
    threshold: f64,
) -> Result<CompatibilityReport> {
    state.check(grid)?;
    let n = grid.cells();
    let dx = grid.dx();
    let rho = state.rho.as_slice();
    let u = state.u.as_slice();
    let mut sum = 0.0;
    let mut assessed = 0;
    let mut excluded = 0;
    for j in 1..n {
        let rho_face = 0.5 * (rho[j - 1] + rho[j]);
        if !(rho_face > threshold) {
            excluded += 1;
            continue;
        }
        let stress_right = params.mu(rho[j]) * (u[j + 1] - u[j]) / dx;
        let stress_left = params.mu(rho[j - 1]) * (u[j] - u[j - 1]) / dx;
        let viscous = (stress_right - stress_left) / dx;
        let grad_p = (params.p(rho[j]) - params.p(rho[j - 1])) / dx;
        let g = (viscous - grad_p) / rho_face.sqrt();
        sum += dx * g * g;
        assessed += 1;
    }
    if assessed == 0 {
        return Err(Error::AllVacuum { threshold });
    }
    Ok(CompatibilityReport {
        residual: sum.sqrt(),
        assessed,
        excluded,
    })
}
