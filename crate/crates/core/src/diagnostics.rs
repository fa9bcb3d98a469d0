//! Functionals of a state: mass, energy, dissipation, the relative-entropy
//! Lyapunov functional, distances to equilibrium, and log-linear decay fits.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::grid::{
    cell_gradient, face_gradient, faces_to_cells, integrate, lp_norm, w1p_norm, Field, Grid,
};
use crate::model::{FluidParams, ForceField};
use crate::num::Num;
use crate::solver::{Problem, State};
use crate::stationary::StationaryDensity;

/// What a record is computed against.
#[derive(Debug, Clone, Copy)]
pub struct Context<'a> {
    pub problem: &'a Problem,
    /// Absent when the existence condition fails; equilibrium-relative
    /// fields are then left empty.
    pub stationary: Option<&'a StationaryDensity>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticRecord {
    pub t: f64,
    pub mass: f64,
    pub sup_rho: f64,
    pub energy: f64,
    pub dissipation: f64,
    pub lyapunov: Option<f64>,
    pub dev_l1: Option<f64>,
    pub dev_l2: Option<f64>,
    pub u_l2: f64,
    pub u_w12: f64,
    pub u_w1inf: f64,
    pub gradrho_l2: f64,
}

pub const CSV_COLUMNS: [&str; 12] = [
    "t",
    "mass",
    "sup_rho",
    "energy",
    "dissipation",
    "lyapunov",
    "dev_l1",
    "dev_l2",
    "u_l2",
    "u_w12",
    "u_w1inf",
    "gradrho_l2",
];

/// Marker written for equilibrium-relative fields without a stationary profile.
pub const CSV_ABSENT: &str = "NA";

impl DiagnosticRecord {
    pub fn csv_header() -> String {
        CSV_COLUMNS.join(",")
    }

    pub fn to_csv_row(&self) -> String {
        let opt = |v: Option<f64>| v.map_or_else(|| CSV_ABSENT.to_string(), |x| Num(x).to_string());
        let mut s = String::new();
        let _ = write!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            Num(self.t),
            Num(self.mass),
            Num(self.sup_rho),
            Num(self.energy),
            Num(self.dissipation),
            opt(self.lyapunov),
            opt(self.dev_l1),
            opt(self.dev_l2),
            Num(self.u_l2),
            Num(self.u_w12),
            Num(self.u_w1inf),
            Num(self.gradrho_l2)
        );
        s
    }

    pub fn from_csv_row(line: &str) -> Result<Self> {
        let cols: Vec<&str> = line.trim().split(',').collect();
        if cols.len() != CSV_COLUMNS.len() {
            return Err(Error::Parse(format!(
                "expected {} columns, found {}",
                CSV_COLUMNS.len(),
                cols.len()
            )));
        }
        let num = |k: usize| -> Result<f64> {
            cols[k]
                .parse()
                .map_err(|_| Error::Parse(format!("column {}: `{}`", CSV_COLUMNS[k], cols[k])))
        };
        let opt = |k: usize| -> Result<Option<f64>> {
            if cols[k] == CSV_ABSENT {
                Ok(None)
            } else {
                num(k).map(Some)
            }
        };
        Ok(Self {
            t: num(0)?,
            mass: num(1)?,
            sup_rho: num(2)?,
            energy: num(3)?,
            dissipation: num(4)?,
            lyapunov: opt(5)?,
            dev_l1: opt(6)?,
            dev_l2: opt(7)?,
            u_l2: num(8)?,
            u_w12: num(9)?,
            u_w1inf: num(10)?,
            gradrho_l2: num(11)?,
        })
    }
}

/// `int (rho u^2 / 2 + P(rho)/(gamma - 1) - rho F) dx`, with `u` averaged
/// from faces to cell centers.
pub fn energy(state: &State, params: &FluidParams, force: &ForceField, grid: &Grid) -> Result<f64> {
    state.check(grid)?;
    let uc = faces_to_cells(&state.u, grid)?;
    let g1 = params.gamma() - 1.0;
    let sum: f64 = state
        .rho
        .iter()
        .zip(uc.iter())
        .zip(grid.cell_centers())
        .map(|((&r, &v), x)| 0.5 * r * v * v + params.p(r) / g1 - r * force.big_f(x))
        .sum();
    Ok(grid.dx() * sum)
}

/// Kinetic part `int rho u^2 / 2`.
pub fn kinetic_energy(state: &State, grid: &Grid) -> Result<f64> {
    state.check(grid)?;
    let uc = faces_to_cells(&state.u, grid)?;
    Ok(grid.dx()
        * state
            .rho
            .iter()
            .zip(uc.iter())
            .map(|(&r, &v)| 0.5 * r * v * v)
            .sum::<f64>())
}

/// `int mu(rho) u_x^2 dx` over cells.
pub fn dissipation(state: &State, params: &FluidParams, grid: &Grid) -> Result<f64> {
    state.check(grid)?;
    let ux = face_gradient(&state.u, grid)?;
    Ok(grid.dx()
        * state
            .rho
            .iter()
            .zip(ux.iter())
            .map(|(&r, &g)| params.mu(r) * g * g)
            .sum::<f64>())
}

/// Relative potential `G(rho; rho_s) = (P(rho) - P(rho_s) - P'(rho_s)(rho - rho_s)) / (gamma - 1)`.
///
/// Evaluated as `A rho_s^gamma / (gamma - 1) * h(rho/rho_s - 1)` with
/// `h(d) = (1 + d)^gamma - 1 - gamma d`; near `d = 0` the binomial series
/// replaces the cancelling direct form so that `G` keeps full relative
/// accuracy down to `|rho - rho_s| ~ 1e-150`.
pub fn g_potential(rho: f64, rho_s: f64, params: &FluidParams) -> Result<f64> {
    if !(rho_s > 0.0 && rho_s.is_finite()) {
        return Err(Error::domain("rho_s", rho_s, "> 0"));
    }
    if !(rho >= 0.0 && rho.is_finite()) {
        return Err(Error::domain("rho", rho, ">= 0"));
    }
    Ok(g_unchecked(rho, rho_s, params))
}

pub(crate) fn g_unchecked(rho: f64, rho_s: f64, params: &FluidParams) -> f64 {
    let gamma = params.gamma();
    // rho - rho_s is exact when the two are close; rho / rho_s - 1 is not
    let d = (rho - rho_s) / rho_s;
    let h = if d.abs() < 0.25 {
        // sum_{k>=2} binom(gamma, k) d^k
        let mut coef = gamma * (gamma - 1.0) / 2.0;
        let mut power = d * d;
        let mut sum = coef * power;
        for k in 3..80 {
            coef *= (gamma - (k - 1) as f64) / k as f64;
            power *= d;
            let term = coef * power;
            sum += term;
            if term.abs() <= 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        (1.0 + d).powf(gamma) - 1.0 - gamma * d
    };
    (params.coefficient() * rho_s.powf(gamma) / (gamma - 1.0) * h).max(0.0)
}

/// `int (rho u^2 / 2 + G(rho; rho_s)) dx`.
pub fn lyapunov(
    state: &State,
    stationary: &StationaryDensity,
    params: &FluidParams,
    grid: &Grid,
) -> Result<f64> {
    state.check(grid)?;
    stationary.profile.check(grid)?;
    let potential: f64 = state
        .rho
        .iter()
        .zip(stationary.profile.iter())
        .map(|(&r, &s)| g_unchecked(r, s, params))
        .sum();
    Ok(kinetic_energy(state, grid)? + grid.dx() * potential)
}

/// `(||rho - rho_s||_{L^p}, ||u||_{W^{1,p}})`.
pub fn deviation_norms(
    state: &State,
    stationary: &StationaryDensity,
    p: f64,
    grid: &Grid,
) -> Result<(f64, f64)> {
    state.check(grid)?;
    stationary.profile.check(grid)?;
    let dev = state.rho.zip_map(&stationary.profile, |a, b| a - b);
    Ok((lp_norm(&dev, p, grid)?, w1p_norm(&state.u, p, grid)?))
}

/// The quadratic bounds `M1 ||rho - rho_s||^2 <= int G <= M2 ||rho - rho_s||^2`
/// with constants taken over the realized density range
/// `[min(rho_min, k1), max(rho_max, k2)]`:
/// `M1 = min P' / (2 xi_max)`, `M2 = max P' / (2 xi_min)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropySandwich {
    pub m1: f64,
    /// `+inf` when the range touches vacuum
    pub m2: f64,
    pub lower: f64,
    pub potential: f64,
    pub upper: f64,
}

impl EntropySandwich {
    pub fn holds(&self) -> bool {
        self.lower <= self.potential && self.potential <= self.upper
    }
}

pub fn entropy_sandwich(
    state: &State,
    stationary: &StationaryDensity,
    params: &FluidParams,
    grid: &Grid,
) -> Result<EntropySandwich> {
    state.check(grid)?;
    stationary.profile.check(grid)?;
    let lo = state.rho.min().min(stationary.k1);
    let hi = state.rho.max().max(stationary.k2);
    // P' is increasing for gamma > 1
    let m1 = params.dp(lo) / (2.0 * hi);
    let m2 = if lo > 0.0 {
        params.dp(hi) / (2.0 * lo)
    } else {
        f64::INFINITY
    };
    let dx = grid.dx();
    let (mut dev2, mut potential) = (0.0, 0.0);
    for (&r, &s) in state.rho.iter().zip(stationary.profile.iter()) {
        dev2 += (r - s) * (r - s);
        potential += g_unchecked(r, s, params);
    }
    dev2 *= dx;
    potential *= dx;
    let upper = if m2.is_infinite() {
        f64::INFINITY
    } else {
        m2 * dev2
    };
    Ok(EntropySandwich {
        m1,
        m2,
        lower: m1 * dev2,
        potential,
        upper,
    })
}

/// Every functional at once.
pub fn record(state: &State, ctx: &Context<'_>) -> Result<DiagnosticRecord> {
    let Problem {
        params,
        force,
        grid,
    } = ctx.problem;
    state.check(grid)?;
    let (lyap, dev_l1, dev_l2) = match ctx.stationary {
        Some(s) => {
            let dev = state.rho.zip_map(&s.profile, |a, b| a - b);
            (
                Some(lyapunov(state, s, params, grid)?),
                Some(lp_norm(&dev, 1.0, grid)?),
                Some(lp_norm(&dev, 2.0, grid)?),
            )
        }
        None => (None, None, None),
    };
    let rec = DiagnosticRecord {
        t: state.t,
        mass: integrate(&state.rho, grid)?,
        sup_rho: lp_norm(&state.rho, f64::INFINITY, grid)?,
        energy: energy(state, params, force, grid)?,
        dissipation: dissipation(state, params, grid)?,
        lyapunov: lyap,
        dev_l1,
        dev_l2,
        u_l2: lp_norm(&state.u, 2.0, grid)?,
        u_w12: w1p_norm(&state.u, 2.0, grid)?,
        u_w1inf: w1p_norm(&state.u, f64::INFINITY, grid)?,
        gradrho_l2: lp_norm(&cell_gradient(&state.rho, grid)?, 2.0, grid)?,
    };
    let finite = [
        rec.mass,
        rec.sup_rho,
        rec.energy,
        rec.dissipation,
        rec.u_l2,
        rec.u_w12,
        rec.u_w1inf,
        rec.gradrho_l2,
    ]
    .iter()
    .chain(rec.lyapunov.iter())
    .chain(rec.dev_l1.iter())
    .chain(rec.dev_l2.iter())
    .all(|v| v.is_finite());
    if !finite {
        return Err(Error::NonFinite { t: state.t });
    }
    Ok(rec)
}

/// Least-squares fit of `log value = intercept - alpha t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub alpha: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub samples: usize,
}

pub const MIN_FIT_SAMPLES: usize = 10;

/// Fits an exponential to the samples with `t0 <= t <= t1`. Nonpositive or
/// non-finite values are skipped. A series with constant logarithm gets
/// `alpha = 0, r^2 = 1`.
pub fn fit_decay(series: &[(f64, f64)], window: (f64, f64)) -> Result<DecayFit> {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|(t, v)| *t >= window.0 && *t <= window.1 && *v > 0.0 && v.is_finite())
        .map(|&(t, v)| (t, v.ln()))
        .collect();
    if pts.len() < MIN_FIT_SAMPLES {
        return Err(Error::FitInfeasible {
            needed: MIN_FIT_SAMPLES,
            found: pts.len(),
        });
    }
    let n = pts.len() as f64;
    let t_mean = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let y_mean = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(t, y) in &pts {
        let (dt, dy) = (t - t_mean, y - y_mean);
        sxx += dt * dt;
        sxy += dt * dy;
        syy += dy * dy;
    }
    if !(sxx > 0.0) {
        return Err(Error::FitInfeasible {
            needed: MIN_FIT_SAMPLES,
            found: 1,
        });
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * t_mean;
    let ss_res: f64 = pts
        .iter()
        .map(|&(t, y)| {
            let r = y - (intercept + slope * t);
            r * r
        })
        .sum();
    let scale = y_mean.abs().max(1.0);
    let r_squared = if syy <= (1e-14 * scale).powi(2) * n {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(DecayFit {
        alpha: if syy == 0.0 { 0.0 } else { -slope },
        intercept,
        r_squared,
        window,
        samples: pts.len(),
    })
}
