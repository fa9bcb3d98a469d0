//! The stationary density `rho_s` solving `[P(rho_s)]_x = rho_s f` with a
//! prescribed total mass.
//!
//! Dividing by `rho_s` and integrating once gives the closed form
//!
//! ```text
//! rho_s(x)^(gamma - 1) = kappa + (gamma - 1) / (A gamma) * F(x),   F(x) = int_0^x f
//! ```
//!
//! so the whole problem reduces to the scalar `kappa`. The discrete mass
//! `M(kappa) = dx * sum_i [kappa + c F(x_i)]_+^(1/(gamma-1))` is continuous and
//! strictly increasing above the positivity threshold `kappa* = -c min F`,
//! which makes bisection unconditionally convergent once the existence
//! condition `M(kappa*) < mass` holds.

use crate::error::{Error, Result};
use crate::grid::{integrate, CellField, Grid};
use crate::model::{FluidParams, ForceField};

pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Quadrature intervals used by [`existence_condition`].
const CONDITION_INTERVALS: usize = 20_000;

#[derive(Debug, Clone, PartialEq)]
pub struct StationaryDensity {
    pub profile: CellField,
    pub kappa: f64,
    /// min of the profile
    pub k1: f64,
    /// max of the profile
    pub k2: f64,
    pub residual_norm: f64,
    pub mass: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExistenceCheck {
    pub holds: bool,
    pub lhs: f64,
    /// `mass - lhs`
    pub margin: f64,
}

/// The existence condition with `A = 1`.
pub fn existence_condition(force: &ForceField, gamma: f64, mass: f64) -> ExistenceCheck {
    existence_condition_scaled(force, gamma, 1.0, mass)
}

/// `lhs = int_0^1 (c (F - min F))^(1/(gamma-1)) dx` with `c = (gamma-1)/(A gamma)`;
/// the condition holds when `lhs < mass`.
pub fn existence_condition_scaled(
    force: &ForceField,
    gamma: f64,
    a: f64,
    mass: f64,
) -> ExistenceCheck {
    let c = (gamma - 1.0) / (a * gamma);
    let expo = 1.0 / (gamma - 1.0);
    let f_min = primitive_min(force);
    let integrand = |x: f64| (c * (force.big_f(x) - f_min).max(0.0)).powf(expo);
    let lhs = simpson(integrand, CONDITION_INTERVALS);
    ExistenceCheck {
        holds: lhs < mass,
        lhs,
        margin: mass - lhs,
    }
}

fn simpson(f: impl Fn(f64) -> f64, intervals: usize) -> f64 {
    let h = 1.0 / intervals as f64;
    let mut s = f(0.0) + f(1.0);
    for k in 1..intervals {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(k as f64 * h);
    }
    s * h / 3.0
}

/// `min_{[0,1]} F` by dense sampling refined with a golden-section search
/// around the best sample.
fn primitive_min(force: &ForceField) -> f64 {
    let n = CONDITION_INTERVALS;
    let h = 1.0 / n as f64;
    let (k_best, mut best) =
        (0..=n)
            .map(|k| (k, force.big_f(k as f64 * h)))
            .fold(
                (0, f64::INFINITY),
                |acc, (k, v)| if v < acc.1 { (k, v) } else { acc },
            );
    let mut lo = (k_best as f64 - 1.0).max(0.0) * h;
    let mut hi = (k_best as f64 + 1.0).min(n as f64) * h;
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let x1 = hi - phi * (hi - lo);
        let x2 = lo + phi * (hi - lo);
        if force.big_f(x1) < force.big_f(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    best = best.min(force.big_f(0.5 * (lo + hi)));
    best
}

/// Discrete mass `M(kappa)` of the closed-form profile on `grid`.
pub fn mass_of_kappa(kappa: f64, force: &ForceField, params: &FluidParams, grid: &Grid) -> f64 {
    let (c, expo) = reduction(params);
    grid.dx()
        * grid
            .cell_centers()
            .map(|x| (kappa + c * force.big_f(x)).max(0.0).powf(expo))
            .sum::<f64>()
}

fn reduction(params: &FluidParams) -> (f64, f64) {
    let g = params.gamma();
    ((g - 1.0) / (params.coefficient() * g), 1.0 / (g - 1.0))
}

pub fn solve_stationary(
    force: &ForceField,
    params: &FluidParams,
    mass: f64,
    grid: &Grid,
    tol: f64,
) -> Result<StationaryDensity> {
    let width = 10.0 * (1.0 + force.primitive_sup_norm());
    solve_stationary_with_bracket(force, params, mass, grid, tol, width)
}

/// Like [`solve_stationary`] but with an explicit initial bracket width above
/// the positivity threshold.
pub fn solve_stationary_with_bracket(
    force: &ForceField,
    params: &FluidParams,
    mass: f64,
    grid: &Grid,
    tol: f64,
    initial_width: f64,
) -> Result<StationaryDensity> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::domain("mass", mass, "> 0"));
    }
    if !(tol > 0.0) {
        return Err(Error::domain("tol", tol, "> 0"));
    }
    if !(initial_width > 0.0) {
        return Err(Error::domain("initial_width", initial_width, "> 0"));
    }
    let check = existence_condition_scaled(force, params.gamma(), params.coefficient(), mass);
    if !check.holds {
        return Err(Error::StationaryInfeasible {
            lhs: check.lhs,
            mass,
        });
    }

    let (c, expo) = reduction(params);
    let f_min_cells = grid
        .cell_centers()
        .map(|x| force.big_f(x))
        .fold(f64::INFINITY, f64::min);
    let threshold = -c * f_min_cells;
    let lo0 = threshold + 1e-14 * threshold.abs().max(1.0);
    let m = |k: f64| mass_of_kappa(k, force, params, grid);

    if m(lo0) >= mass {
        return Err(Error::Bracket(format!(
            "mass at the positivity threshold already exceeds the target {mass}"
        )));
    }
    let mut lo = lo0;
    let mut hi = lo0 + initial_width;
    let mut expansions = 0;
    while m(hi) < mass {
        lo = hi;
        hi = lo0 + 2.0 * (hi - lo0);
        expansions += 1;
        if expansions > 200 || !hi.is_finite() {
            return Err(Error::Bracket("could not bracket the target mass".into()));
        }
    }

    let mut kappa = 0.5 * (lo + hi);
    for _ in 0..400 {
        kappa = 0.5 * (lo + hi);
        let mk = m(kappa);
        if (mk - mass).abs() <= tol || kappa <= lo || kappa >= hi {
            break;
        }
        if mk < mass {
            lo = kappa;
        } else {
            hi = kappa;
        }
    }

    let profile = grid.sample_cells(|x| (kappa + c * force.big_f(x)).powf(expo));
    let k1 = profile.min();
    let k2 = profile.max();
    if !(k1 > 0.0) {
        return Err(Error::Bracket(format!(
            "converged constant {kappa} leaves a nonpositive profile"
        )));
    }
    let achieved = integrate(&profile, grid)?;
    let residual_norm = stationary_residual(&profile, force, params, grid)?;
    Ok(StationaryDensity {
        profile,
        kappa,
        k1,
        k2,
        residual_norm,
        mass: achieved,
    })
}

/// `L^2` norm over interior faces of
/// `(P(rho_i) - P(rho_{i-1})) / dx - (rho_i + rho_{i-1}) / 2 * f(x_i)`.
pub fn stationary_residual(
    profile: &CellField,
    force: &ForceField,
    params: &FluidParams,
    grid: &Grid,
) -> Result<f64> {
    use crate::grid::Field;
    profile.check(grid)?;
    if let Some(&v) = profile.iter().find(|&&v| !(v > 0.0)) {
        return Err(Error::domain("profile entry", v, "> 0"));
    }
    let dx = grid.dx();
    let rho = profile.as_slice();
    let sum: f64 = (1..grid.cells())
        .map(|j| {
            let r = (params.p(rho[j]) - params.p(rho[j - 1])) / dx
                - 0.5 * (rho[j] + rho[j - 1]) * force.f(grid.face(j));
            r * r
        })
        .sum();
    Ok((dx * sum).sqrt())
}
