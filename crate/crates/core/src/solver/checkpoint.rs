//! Plain-text checkpoints:
//!
//! ```text
//! # t = 0.5
//! # <any other metadata>
//! # section: cells
//! x_center,rho
//! 0.005,1.02
//! ...
//! # section: faces
//! x_face,u
//! 0,0
//! ...
//! ```
//!
//! Floats are written in shortest round-trip form, so reading a
//! checkpoint back reproduces the state bit for bit.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::grid::{CellField, FaceField, Grid};
use crate::num::Num;

use super::State;

pub fn write_checkpoint(state: &State, grid: &Grid, metadata: &[(&str, String)]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# t = {}", Num(state.t));
    for (k, v) in metadata {
        let _ = writeln!(out, "# {k} = {v}");
    }
    out.push_str("# section: cells\nx_center,rho\n");
    for (x, r) in grid.cell_centers().zip(state.rho.iter()) {
        let _ = writeln!(out, "{},{}", Num(x), Num(*r));
    }
    out.push_str("# section: faces\nx_face,u\n");
    for (x, u) in grid.face_positions().zip(state.u.iter()) {
        let _ = writeln!(out, "{},{}", Num(x), Num(*u));
    }
    out
}

pub fn read_checkpoint(text: &str) -> Result<State> {
    #[derive(PartialEq)]
    enum Section {
        None,
        Cells,
        Faces,
    }
    let mut section = Section::None;
    let mut t = None;
    let mut rho = Vec::new();
    let mut u = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(meta) = line.strip_prefix('#') {
            let meta = meta.trim();
            if let Some(name) = meta.strip_prefix("section:") {
                section = match name.trim() {
                    "cells" => Section::Cells,
                    "faces" => Section::Faces,
                    other => return Err(Error::Parse(format!("unknown section `{other}`"))),
                };
            } else if let Some(v) = meta.strip_prefix("t =") {
                t = Some(parse(v.trim(), lineno)?);
            }
            continue;
        }
        if line.starts_with("x_") {
            continue;
        }
        let (_, value) = line
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("line {}: expected `x,value`", lineno + 1)))?;
        let value = parse(value.trim(), lineno)?;
        match section {
            Section::Cells => rho.push(value),
            Section::Faces => u.push(value),
            Section::None => {
                return Err(Error::Parse(format!(
                    "line {}: data before any section",
                    lineno + 1
                )))
            }
        }
    }
    let t = t.ok_or_else(|| Error::Parse("missing `# t = ...` header".into()))?;
    if rho.len() + 1 != u.len() {
        return Err(Error::Parse(format!(
            "{} cells do not match {} faces",
            rho.len(),
            u.len()
        )));
    }
    Ok(State {
        t,
        rho: CellField(rho),
        u: FaceField(u),
    })
}

fn parse(s: &str, lineno: usize) -> Result<f64> {
    s.parse()
        .map_err(|_| Error::Parse(format!("line {}: `{s}` is not a number", lineno + 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn checkpoint_round_trips_exactly(
            rho in proptest::collection::vec(0.0f64..1e3, 4..40),
            t in 0.0f64..1e4,
            seed in any::<u64>(),
        ) {
            let grid = Grid::new(rho.len()).unwrap();
            let u: Vec<f64> = (0..=rho.len())
                .map(|j| ((seed.wrapping_mul(j as u64 + 1) % 1000) as f64 - 500.0) * 1.37e-3)
                .collect();
            let state = State { t, rho: CellField(rho), u: FaceField(u) };
            let text = write_checkpoint(&state, &grid, &[("scenario", "x".into())]);
            prop_assert_eq!(read_checkpoint(&text).unwrap(), state);
        }
    }

    #[test]
    fn rejects_malformed() {
        assert!(read_checkpoint("x_center,rho\n1,2\n").is_err());
        assert!(read_checkpoint("# t = 0\n# section: cells\n0.1,abc\n").is_err());
        assert!(
            read_checkpoint("# t = 0\n# section: cells\n0.1,1\n# section: faces\n0,0\n").is_err()
        );
    }
}
