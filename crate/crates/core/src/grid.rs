//! Uniform staggered mesh on `[0, 1]` and its discrete calculus.
//!
//! Density lives at the `n` cell centers `x_i = (i + 1/2) dx`, velocity at the
//! `n + 1` faces `x_j = j dx` (zero-based indices). Cell integrals use the
//! midpoint rule, face integrals the trapezoid rule, and interior-face
//! integrals (the density gradient) weight each of the `n - 1` faces by `dx`.

use crate::error::{Error, Result};

pub const MIN_CELLS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    n: usize,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        if n < MIN_CELLS {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least {MIN_CELLS} cells (got {n})"
            )));
        }
        Ok(Self { n })
    }

    pub fn cells(&self) -> usize {
        self.n
    }

    pub fn faces(&self) -> usize {
        self.n + 1
    }

    pub fn dx(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn cell_center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) / self.n as f64
    }

    pub fn face(&self, j: usize) -> f64 {
        j as f64 / self.n as f64
    }

    pub fn cell_centers(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.cell_center(i))
    }

    pub fn face_positions(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n + 1).map(move |j| self.face(j))
    }

    /// Cell field sampled from `f` at the cell centers.
    pub fn sample_cells(&self, f: impl Fn(f64) -> f64) -> CellField {
        CellField(self.cell_centers().map(f).collect())
    }

    /// Face field sampled from `f` at the faces.
    pub fn sample_faces(&self, f: impl Fn(f64) -> f64) -> FaceField {
        FaceField(self.face_positions().map(f).collect())
    }
}

/// A discrete field together with the quadrature weights it is integrated with.
pub trait Field {
    fn values(&self) -> &[f64];

    fn expected_len(grid: &Grid) -> usize;

    /// Quadrature weight of sample `k`.
    fn weight(grid: &Grid, k: usize) -> f64;

    fn check(&self, grid: &Grid) -> Result<()> {
        let expected = Self::expected_len(grid);
        let got = self.values().len();
        if got == expected {
            Ok(())
        } else {
            Err(Error::LengthMismatch { expected, got })
        }
    }
}

macro_rules! field_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name(pub Vec<f64>);

        impl $name {
            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn as_slice(&self) -> &[f64] {
                &self.0
            }

            pub fn iter(&self) -> std::slice::Iter<'_, f64> {
                self.0.iter()
            }

            pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
                Self(self.0.iter().map(|&v| f(v)).collect())
            }

            pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
                Self(self.0.iter().zip(&other.0).map(|(&a, &b)| f(a, b)).collect())
            }

            pub fn min(&self) -> f64 {
                self.0.iter().copied().fold(f64::INFINITY, f64::min)
            }

            pub fn max(&self) -> f64 {
                self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
            }
        }

        impl std::ops::Index<usize> for $name {
            type Output = f64;
            fn index(&self, k: usize) -> &f64 {
                &self.0[k]
            }
        }

        impl From<Vec<f64>> for $name {
            fn from(v: Vec<f64>) -> Self {
                Self(v)
            }
        }
    };
}

field_type!(
    /// `n` samples at cell centers.
    CellField
);
field_type!(
    /// `n + 1` samples at faces, boundaries included.
    FaceField
);
field_type!(
    /// `n - 1` samples at interior faces `j = 1..n-1`.
    InteriorFaceField
);

impl Field for CellField {
    fn values(&self) -> &[f64] {
        &self.0
    }
    fn expected_len(grid: &Grid) -> usize {
        grid.cells()
    }
    fn weight(grid: &Grid, _k: usize) -> f64 {
        grid.dx()
    }
}

impl Field for FaceField {
    fn values(&self) -> &[f64] {
        &self.0
    }
    fn expected_len(grid: &Grid) -> usize {
        grid.faces()
    }
    fn weight(grid: &Grid, k: usize) -> f64 {
        if k == 0 || k == grid.cells() {
            0.5 * grid.dx()
        } else {
            grid.dx()
        }
    }
}

impl Field for InteriorFaceField {
    fn values(&self) -> &[f64] {
        &self.0
    }
    fn expected_len(grid: &Grid) -> usize {
        grid.cells() - 1
    }
    fn weight(grid: &Grid, _k: usize) -> f64 {
        grid.dx()
    }
}

/// Midpoint-rule integral of a cell field over `[0, 1]`.
pub fn integrate(field: &CellField, grid: &Grid) -> Result<f64> {
    field.check(grid)?;
    Ok(grid.dx() * field.iter().sum::<f64>())
}

/// Discrete `L^p` norm; `p = f64::INFINITY` gives the max norm.
pub fn lp_norm<F: Field>(field: &F, p: f64, grid: &Grid) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::domain("p", p, "p >= 1 or infinity"));
    }
    field.check(grid)?;
    let v = field.values();
    if p.is_infinite() {
        return Ok(v.iter().fold(0.0, |m, x| m.max(x.abs())));
    }
    let sum: f64 = v
        .iter()
        .enumerate()
        .map(|(k, x)| F::weight(grid, k) * x.abs().powf(p))
        .sum();
    Ok(sum.powf(1.0 / p))
}

/// `u_x` at cell centers: `(u_{i+1} - u_i) / dx`.
pub fn face_gradient(u: &FaceField, grid: &Grid) -> Result<CellField> {
    u.check(grid)?;
    let inv = grid.cells() as f64;
    Ok(CellField(
        u.0.windows(2).map(|w| (w[1] - w[0]) * inv).collect(),
    ))
}

/// `rho_x` at interior faces: `(rho_i - rho_{i-1}) / dx`.
pub fn cell_gradient(rho: &CellField, grid: &Grid) -> Result<InteriorFaceField> {
    rho.check(grid)?;
    let inv = grid.cells() as f64;
    Ok(InteriorFaceField(
        rho.0.windows(2).map(|w| (w[1] - w[0]) * inv).collect(),
    ))
}

/// `||u||_{L^p} + ||u_x||_{L^p}`.
pub fn w1p_norm(u: &FaceField, p: f64, grid: &Grid) -> Result<f64> {
    Ok(lp_norm(u, p, grid)? + lp_norm(&face_gradient(u, grid)?, p, grid)?)
}

/// Face values averaged to cell centers.
pub fn faces_to_cells(u: &FaceField, grid: &Grid) -> Result<CellField> {
    u.check(grid)?;
    Ok(CellField(
        u.0.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect(),
    ))
}
