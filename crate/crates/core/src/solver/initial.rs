use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{integrate, CellField, FaceField, Grid};
use crate::interp::PiecewiseLinear;
use crate::stationary::StationaryDensity;

use super::State;

/// Tolerance on `|u0(0)|`, `|u0(1)|` before the no-slip check rejects data.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

/// A scalar profile on `[0, 1]`.
#[derive(Clone)]
pub enum Profile {
    Constant(f64),
    /// Ascending coefficients.
    Polynomial(Vec<f64>),
    /// `offset + amplitude * sin(pi * wavenumber * x + phase)`
    Sine {
        offset: f64,
        amplitude: f64,
        wavenumber: f64,
        phase: f64,
    },
    Table(PiecewiseLinear),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl Profile {
    pub fn sine(amplitude: f64, wavenumber: f64) -> Self {
        Profile::Sine {
            offset: 0.0,
            amplitude,
            wavenumber,
            phase: 0.0,
        }
    }

    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Profile::Custom(Arc::new(f))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Profile::Constant(_) => "constant",
            Profile::Polynomial(_) => "poly",
            Profile::Sine { .. } => "sine",
            Profile::Table(_) => "table",
            Profile::Custom(_) => "custom",
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Profile::Constant(c) => *c,
            Profile::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck),
            Profile::Sine {
                offset,
                amplitude,
                wavenumber,
                phase,
            } => offset + amplitude * (PI * wavenumber * x + phase).sin(),
            Profile::Table(t) => t.eval(x),
            Profile::Custom(f) => f(x),
        }
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Constant(c) => f.debug_tuple("Constant").field(c).finish(),
            Profile::Polynomial(c) => f.debug_tuple("Polynomial").field(c).finish(),
            Profile::Sine {
                offset,
                amplitude,
                wavenumber,
                phase,
            } => f
                .debug_struct("Sine")
                .field("offset", offset)
                .field("amplitude", amplitude)
                .field("wavenumber", wavenumber)
                .field("phase", phase)
                .finish(),
            Profile::Table(t) => f.debug_tuple("Table").field(t).finish(),
            Profile::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl PartialEq for Profile {
    fn eq(&self, other: &Self) -> bool {
        use Profile::*;
        match (self, other) {
            (Constant(a), Constant(b)) => a == b,
            (Polynomial(a), Polynomial(b)) => a == b,
            (
                Sine {
                    offset: o1,
                    amplitude: a1,
                    wavenumber: k1,
                    phase: p1,
                },
                Sine {
                    offset: o2,
                    amplitude: a2,
                    wavenumber: k2,
                    phase: p2,
                },
            ) => o1 == o2 && a1 == a2 && k1 == k2 && p1 == p2,
            (Table(a), Table(b)) => a == b,
            (Custom(a), Custom(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

/// Initial density and velocity.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    pub rho0: Profile,
    /// Add the stationary profile to `rho0` (perturbation of equilibrium).
    pub add_stationary: bool,
    pub u0: Profile,
    /// Rescale the sampled density to unit mass.
    pub normalize_mass: bool,
}

impl InitialData {
    pub fn new(rho0: Profile, u0: Profile) -> Self {
        Self {
            rho0,
            add_stationary: false,
            u0,
            normalize_mass: true,
        }
    }

    /// `rho_s + perturbation`, fluid at rest unless `u0` is replaced.
    pub fn perturbed_equilibrium(perturbation: Profile) -> Self {
        Self {
            rho0: perturbation,
            add_stationary: true,
            u0: Profile::Constant(0.0),
            normalize_mass: true,
        }
    }
}

/// Samples the initial data on `grid`. `stationary` is required when the data
/// is a perturbation of equilibrium.
pub fn init_state(
    data: &InitialData,
    grid: &Grid,
    stationary: Option<&StationaryDensity>,
) -> Result<State> {
    let mut rho = grid.sample_cells(|x| data.rho0.eval(x));
    if data.add_stationary {
        let s = stationary.ok_or_else(|| {
            Error::InitialData(
                "density is relative to the stationary profile, which is unavailable".into(),
            )
        })?;
        if s.profile.len() != grid.cells() {
            return Err(Error::LengthMismatch {
                expected: grid.cells(),
                got: s.profile.len(),
            });
        }
        rho = rho.zip_map(&s.profile, |a, b| a + b);
    }
    for (i, &r) in rho.iter().enumerate() {
        if !r.is_finite() || r < 0.0 {
            return Err(Error::InitialData(format!(
                "initial density {r} at x = {} is negative or not finite",
                grid.cell_center(i)
            )));
        }
    }
    if data.normalize_mass {
        let m = integrate(&rho, grid)?;
        if !(m > 0.0) {
            return Err(Error::InitialData("initial density has zero mass".into()));
        }
        rho = rho.map(|r| r / m);
    }

    let mut u = grid.sample_faces(|x| data.u0.eval(x)).0;
    for (side, v) in [("x = 0", u[0]), ("x = 1", u[grid.cells()])] {
        if !(v.abs() <= BOUNDARY_TOLERANCE) {
            return Err(Error::InitialData(format!(
                "initial velocity {v} at {side} violates the no-slip condition"
            )));
        }
    }
    if let Some(v) = u.iter().find(|v| !v.is_finite()) {
        return Err(Error::InitialData(format!(
            "initial velocity {v} is not finite"
        )));
    }
    let n = grid.cells();
    u[0] = 0.0;
    u[n] = 0.0;

    Ok(State {
        t: 0.0,
        rho: CellField(rho.0),
        u: FaceField(u),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_rest_state() {
        let grid = Grid::new(20).unwrap();
        let s = init_state(
            &InitialData::new(Profile::Constant(1.0), Profile::Constant(0.0)),
            &grid,
            None,
        )
        .unwrap();
        assert_eq!(s.t, 0.0);
        assert!(s.rho.iter().all(|&r| (r - 1.0).abs() < 1e-15));
        assert!(s.u.iter().all(|&v| v == 0.0));
        assert!((integrate(&s.rho, &grid).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn linear_vacuum_density_keeps_its_samples() {
        let grid = Grid::new(50).unwrap();
        let data = InitialData::new(Profile::Polynomial(vec![0.0, 2.0]), Profile::Constant(0.0));
        let s = init_state(&data, &grid, None).unwrap();
        for (i, r) in s.rho.iter().enumerate() {
            assert!((r - 2.0 * grid.cell_center(i)).abs() < 1e-14);
        }
    }

    #[test]
    fn normalization_rescales_mass() {
        let grid = Grid::new(32).unwrap();
        let data = InitialData::new(Profile::Constant(3.0), Profile::Constant(0.0));
        let s = init_state(&data, &grid, None).unwrap();
        assert!((integrate(&s.rho, &grid).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn velocity_boundary_check() {
        let grid = Grid::new(40).unwrap();
        let ok = InitialData::new(Profile::Constant(1.0), Profile::sine(1.0, 1.0));
        assert!(init_state(&ok, &grid, None).is_ok());
        let cos = InitialData::new(
            Profile::Constant(1.0),
            Profile::Sine {
                offset: 0.0,
                amplitude: 1.0,
                wavenumber: 1.0,
                phase: PI / 2.0,
            },
        );
        assert!(matches!(
            init_state(&cos, &grid, None),
            Err(Error::InitialData(_))
        ));
    }

    #[test]
    fn negative_density_is_rejected_with_location() {
        let grid = Grid::new(10).unwrap();
        let data = InitialData::new(Profile::Polynomial(vec![-0.5, 1.0]), Profile::Constant(0.0));
        match init_state(&data, &grid, None) {
            Err(Error::InitialData(msg)) => assert!(msg.contains("x = 0.05"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn perturbation_needs_stationary_profile() {
        let grid = Grid::new(10).unwrap();
        let data = InitialData::perturbed_equilibrium(Profile::sine(0.1, 2.0));
        assert!(init_state(&data, &grid, None).is_err());
    }
}
