//! Run configuration: a TOML document with five flat sections.
//!
//! ```toml
//! [grid]
//! n = 200
//!
//! [fluid]
//! gamma = 2.0
//! viscosity = "constant"   # constant | affine | power | table
//! mu0 = 10.0
//!
//! [force]
//! kind = "constant"        # zero | constant | poly | sin | table
//! value = 1.0
//!
//! [initial]
//! rho = "sine"             # constant | poly | sine | table
//! rho_amplitude = 0.2
//! rho_wavenumber = 2.0
//! rho_add_stationary = true
//! u = "zero"
//!
//! [run]
//! scenario = "relax"
//! t_end = 50.0
//! ```
//!
//! Unknown keys are rejected. Every validation message starts with the key
//! path it concerns.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::grid::Grid;
use crate::interp::PiecewiseLinear;
use crate::model::{FluidParams, ForceField, ViscosityKind, ViscosityLaw};
use crate::solver::{InitialData, Problem, Profile, SolverConfig};
use crate::stationary::DEFAULT_TOLERANCE;

use super::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridSection,
    pub fluid: FluidSection,
    #[serde(default)]
    pub force: ForceSection,
    pub initial: InitialSection,
    pub run: RunSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluidSection {
    pub gamma: f64,
    /// pressure coefficient in `P = A rho^gamma`
    #[serde(rename = "A", default = "one")]
    pub a: f64,
    pub viscosity: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_bar: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeff: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_lower: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table_rho: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table_mu: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForceSection {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    /// ascending polynomial coefficients
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<f64>>,
    /// `amplitude * sin(2 pi frequency x + phase)`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table_x: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table_f: Option<Vec<f64>>,
}

impl Default for ForceSection {
    fn default() -> Self {
        Self {
            kind: "zero".into(),
            value: None,
            coeffs: None,
            amplitude: None,
            frequency: None,
            phase: None,
            table_x: None,
            table_f: None,
        }
    }
}

/// Profiles are described by a kind plus prefixed parameters, e.g. `rho = "sine"`
/// with `rho_amplitude`, `rho_wavenumber` (the profile is
/// `offset + amplitude sin(pi wavenumber x + phase)`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    pub rho: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_coeffs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_offset: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_wavenumber: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_phase: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_table_x: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_table_y: Option<Vec<f64>>,
    #[serde(default)]
    pub rho_add_stationary: bool,
    #[serde(default = "zero_kind")]
    pub u: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_coeffs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_offset: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_wavenumber: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_phase: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_table_x: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_table_y: Option<Vec<f64>>,
    #[serde(default = "yes")]
    pub normalize_mass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default = "custom_name")]
    pub scenario: String,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_dt_max")]
    pub dt_max: f64,
    pub t_end: f64,
    #[serde(default = "default_sample_every")]
    pub sample_every: f64,
    #[serde(default = "default_output")]
    pub output: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stationary_tol: Option<f64>,
    /// decay-fit window; defaults to the second half of the run
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_end: Option<f64>,
    #[serde(default)]
    pub vacuum_floor: f64,
    /// density threshold for the compatibility residual
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compat_threshold: Option<f64>,
}

fn one() -> f64 {
    1.0
}
fn yes() -> bool {
    true
}
fn zero_kind() -> String {
    "zero".into()
}
fn custom_name() -> String {
    "custom".into()
}
fn default_cfl() -> f64 {
    SolverConfig::default().cfl
}
fn default_dt_max() -> f64 {
    SolverConfig::default().dt_max
}
fn default_sample_every() -> f64 {
    0.25
}
fn default_output() -> String {
    "out".into()
}

fn invalid(path: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{path}: {msg}"))
}

fn require<T: Clone>(value: &Option<T>, path: &str) -> Result<T, CliError> {
    value
        .clone()
        .ok_or_else(|| invalid(path, "required for the selected kind"))
}

fn positive(value: f64, path: &str) -> Result<(), CliError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(invalid(path, format!("must be positive (got {value})")))
    }
}

/// Rejects parameters that belong to a kind other than the selected one.
fn only(
    section: &str,
    kind: &str,
    present: &[(&str, bool)],
    allowed: &[&str],
) -> Result<(), CliError> {
    for (key, set) in present {
        if *set && !allowed.contains(key) {
            return Err(invalid(
                &format!("{section}.{key}"),
                format!("does not apply to kind \"{kind}\""),
            ));
        }
    }
    Ok(())
}

pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let config: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    config.validate()?;
    Ok(config)
}

impl RunConfig {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the canonical serialization, so formatting and comments in
    /// the source file do not change it. The output directory is left out:
    /// it does not affect the run.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.run.output.clear();
        let digest = Sha256::digest(c.to_toml().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.grid.n < 4 {
            return Err(invalid(
                "grid.n",
                format!("must be at least 4 (got {})", self.grid.n),
            ));
        }
        self.params()?;
        self.force()?;
        self.initial_data()?;
        self.solver_config()?;
        let r = &self.run;
        if !(r.t_end >= 0.0 && r.t_end.is_finite()) {
            return Err(invalid(
                "run.t_end",
                format!("must be >= 0 (got {})", r.t_end),
            ));
        }
        positive(r.sample_every, "run.sample_every")?;
        if let Some(tol) = r.stationary_tol {
            positive(tol, "run.stationary_tol")?;
        }
        if let Some(th) = r.compat_threshold {
            if !(th >= 0.0 && th.is_finite()) {
                return Err(invalid(
                    "run.compat_threshold",
                    format!("must be >= 0 (got {th})"),
                ));
            }
        }
        if r.fit_start.is_some() || r.fit_end.is_some() {
            let (a, b) = self.fit_window();
            if !(a >= 0.0 && a < b) {
                return Err(invalid(
                    "run.fit_start",
                    format!("window [{a}, {b}] is empty"),
                ));
            }
        }
        if r.scenario.is_empty() {
            return Err(invalid("run.scenario", "must not be empty"));
        }
        if r.output.is_empty() {
            return Err(invalid("run.output", "must not be empty"));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid, CliError> {
        Grid::new(self.grid.n).map_err(|e| invalid("grid.n", e))
    }

    pub fn problem(&self) -> Result<Problem, CliError> {
        Ok(Problem {
            params: self.params()?,
            force: self.force()?,
            grid: self.grid()?,
        })
    }

    pub fn params(&self) -> Result<FluidParams, CliError> {
        let f = &self.fluid;
        if !(f.gamma > 1.0) || !f.gamma.is_finite() {
            return Err(invalid(
                "fluid.gamma",
                format!("gamma must exceed 1 (got {})", f.gamma),
            ));
        }
        positive(f.a, "fluid.A")?;
        let present = [
            ("mu0", f.mu0.is_some()),
            ("mu_bar", f.mu_bar.is_some()),
            ("slope", f.slope.is_some()),
            ("coeff", f.coeff.is_some()),
            ("theta", f.theta.is_some()),
            ("table_rho", f.table_rho.is_some()),
            ("table_mu", f.table_mu.is_some()),
        ];
        let kind = match f.viscosity.as_str() {
            "constant" => {
                only("fluid", "constant", &present, &["mu0"])?;
                ViscosityKind::Constant {
                    mu0: require(&f.mu0, "fluid.mu0")?,
                }
            }
            "affine" => {
                only("fluid", "affine", &present, &["mu_bar", "slope"])?;
                ViscosityKind::Affine {
                    mu_bar: require(&f.mu_bar, "fluid.mu_bar")?,
                    slope: require(&f.slope, "fluid.slope")?,
                }
            }
            "power" => {
                only("fluid", "power", &present, &["mu_bar", "coeff", "theta"])?;
                ViscosityKind::Power {
                    mu_bar: require(&f.mu_bar, "fluid.mu_bar")?,
                    coeff: require(&f.coeff, "fluid.coeff")?,
                    theta: require(&f.theta, "fluid.theta")?,
                }
            }
            "table" => {
                only("fluid", "table", &present, &["table_rho", "table_mu"])?;
                let t = PiecewiseLinear::new(
                    require(&f.table_rho, "fluid.table_rho")?,
                    require(&f.table_mu, "fluid.table_mu")?,
                )
                .map_err(|e| invalid("fluid.table_rho", e))?;
                ViscosityKind::Table(t)
            }
            other => {
                return Err(invalid(
                    "fluid.viscosity",
                    format!("unknown kind \"{other}\" (expected constant, affine, power or table)"),
                ))
            }
        };
        let law = ViscosityLaw::new(kind, f.mu_lower).map_err(|e| invalid("fluid.viscosity", e))?;
        FluidParams::with_coefficient(f.gamma, f.a, law).map_err(|e| invalid("fluid", e))
    }

    pub fn force(&self) -> Result<ForceField, CliError> {
        let f = &self.force;
        let present = [
            ("value", f.value.is_some()),
            ("coeffs", f.coeffs.is_some()),
            ("amplitude", f.amplitude.is_some()),
            ("frequency", f.frequency.is_some()),
            ("phase", f.phase.is_some()),
            ("table_x", f.table_x.is_some()),
            ("table_f", f.table_f.is_some()),
        ];
        let force = match f.kind.as_str() {
            "zero" => {
                only("force", "zero", &present, &[])?;
                ForceField::Zero
            }
            "constant" => {
                only("force", "constant", &present, &["value"])?;
                ForceField::Constant(require(&f.value, "force.value")?)
            }
            "poly" => {
                only("force", "poly", &present, &["coeffs"])?;
                ForceField::Polynomial(require(&f.coeffs, "force.coeffs")?)
            }
            "sin" => {
                only(
                    "force",
                    "sin",
                    &present,
                    &["amplitude", "frequency", "phase"],
                )?;
                ForceField::Sinusoid {
                    amplitude: require(&f.amplitude, "force.amplitude")?,
                    frequency: require(&f.frequency, "force.frequency")?,
                    phase: f.phase.unwrap_or(0.0),
                }
            }
            "table" => {
                only("force", "table", &present, &["table_x", "table_f"])?;
                ForceField::Table(
                    PiecewiseLinear::new(
                        require(&f.table_x, "force.table_x")?,
                        require(&f.table_f, "force.table_f")?,
                    )
                    .map_err(|e| invalid("force.table_x", e))?,
                )
            }
            other => {
                return Err(invalid(
                    "force.kind",
                    format!(
                        "unknown kind \"{other}\" (expected zero, constant, poly, sin or table)"
                    ),
                ))
            }
        };
        force.validate().map_err(|e| invalid("force", e))?;
        Ok(force)
    }

    pub fn initial_data(&self) -> Result<InitialData, CliError> {
        let i = &self.initial;
        let rho0 = profile(
            "rho",
            &i.rho,
            ProfileKeys {
                value: &i.rho_value,
                coeffs: &i.rho_coeffs,
                offset: &i.rho_offset,
                amplitude: &i.rho_amplitude,
                wavenumber: &i.rho_wavenumber,
                phase: &i.rho_phase,
                table_x: &i.rho_table_x,
                table_y: &i.rho_table_y,
            },
        )?;
        let u0 = profile(
            "u",
            &i.u,
            ProfileKeys {
                value: &i.u_value,
                coeffs: &i.u_coeffs,
                offset: &i.u_offset,
                amplitude: &i.u_amplitude,
                wavenumber: &i.u_wavenumber,
                phase: &i.u_phase,
                table_x: &i.u_table_x,
                table_y: &i.u_table_y,
            },
        )?;
        Ok(InitialData {
            rho0,
            add_stationary: i.rho_add_stationary,
            u0,
            normalize_mass: i.normalize_mass,
        })
    }

    pub fn solver_config(&self) -> Result<SolverConfig, CliError> {
        let c = SolverConfig {
            cfl: self.run.cfl,
            dt_max: self.run.dt_max,
            vacuum_floor: self.run.vacuum_floor,
        };
        if !(c.cfl > 0.0 && c.cfl <= 1.0) {
            return Err(invalid(
                "run.cfl",
                format!("must lie in (0, 1] (got {})", c.cfl),
            ));
        }
        positive(c.dt_max, "run.dt_max")?;
        if !(c.vacuum_floor >= 0.0 && c.vacuum_floor.is_finite()) {
            return Err(invalid(
                "run.vacuum_floor",
                format!("must be >= 0 (got {})", c.vacuum_floor),
            ));
        }
        Ok(c)
    }

    pub fn stationary_tol(&self) -> f64 {
        self.run.stationary_tol.unwrap_or(DEFAULT_TOLERANCE)
    }

    pub fn fit_window(&self) -> (f64, f64) {
        let end = self.run.fit_end.unwrap_or(self.run.t_end);
        let start = self.run.fit_start.unwrap_or(0.5 * end);
        (start, end)
    }
}

struct ProfileKeys<'a> {
    value: &'a Option<f64>,
    coeffs: &'a Option<Vec<f64>>,
    offset: &'a Option<f64>,
    amplitude: &'a Option<f64>,
    wavenumber: &'a Option<f64>,
    phase: &'a Option<f64>,
    table_x: &'a Option<Vec<f64>>,
    table_y: &'a Option<Vec<f64>>,
}

fn profile(prefix: &str, kind: &str, k: ProfileKeys<'_>) -> Result<Profile, CliError> {
    let section = "initial";
    let key = |name: &str| format!("{prefix}_{name}");
    let path = |name: &str| format!("{section}.{prefix}_{name}");
    let names = [
        key("value"),
        key("coeffs"),
        key("offset"),
        key("amplitude"),
        key("wavenumber"),
        key("phase"),
        key("table_x"),
        key("table_y"),
    ];
    let present = [
        (names[0].as_str(), k.value.is_some()),
        (names[1].as_str(), k.coeffs.is_some()),
        (names[2].as_str(), k.offset.is_some()),
        (names[3].as_str(), k.amplitude.is_some()),
        (names[4].as_str(), k.wavenumber.is_some()),
        (names[5].as_str(), k.phase.is_some()),
        (names[6].as_str(), k.table_x.is_some()),
        (names[7].as_str(), k.table_y.is_some()),
    ];
    let p = match kind {
        "zero" => {
            only(section, kind, &present, &[])?;
            Profile::Constant(0.0)
        }
        "constant" => {
            only(section, kind, &present, &[&names[0]])?;
            Profile::Constant(require(k.value, &path("value"))?)
        }
        "poly" => {
            only(section, kind, &present, &[&names[1]])?;
            Profile::Polynomial(require(k.coeffs, &path("coeffs"))?)
        }
        "sine" => {
            only(
                section,
                kind,
                &present,
                &[&names[2], &names[3], &names[4], &names[5]],
            )?;
            Profile::Sine {
                offset: k.offset.unwrap_or(0.0),
                amplitude: require(k.amplitude, &path("amplitude"))?,
                wavenumber: require(k.wavenumber, &path("wavenumber"))?,
                phase: k.phase.unwrap_or(0.0),
            }
        }
        "table" => {
            only(section, kind, &present, &[&names[6], &names[7]])?;
            Profile::Table(
                PiecewiseLinear::new(
                    require(k.table_x, &path("table_x"))?,
                    require(k.table_y, &path("table_y"))?,
                )
                .map_err(|e| invalid(&path("table_x"), e))?,
            )
        }
        other => {
            return Err(invalid(
                &format!("{section}.{prefix}"),
                format!(
                    "unknown profile \"{other}\" (expected zero, constant, poly, sine or table)"
                ),
            ))
        }
    };
    let finite = match &p {
        Profile::Constant(c) => c.is_finite(),
        Profile::Polynomial(c) => c.iter().all(|v| v.is_finite()),
        Profile::Sine {
            offset,
            amplitude,
            wavenumber,
            phase,
        } => [offset, amplitude, wavenumber, phase]
            .iter()
            .all(|v| v.is_finite()),
        _ => true,
    };
    if !finite {
        return Err(invalid(
            &format!("{section}.{prefix}"),
            "parameters must be finite",
        ));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[grid]
n = 50

[fluid]
gamma = 2.0
viscosity = "constant"
mu0 = 1.0

[initial]
rho = "constant"
rho_value = 1.0

[run]
t_end = 1.0
"#;

    #[test]
    fn minimal_document_gets_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.grid.n, 50);
        assert_eq!(c.fluid.a, 1.0);
        assert_eq!(c.force.kind, "zero");
        assert_eq!(c.initial.u, "zero");
        assert!(c.initial.normalize_mass);
        assert_eq!(c.run.cfl, 0.4);
        assert_eq!(c.run.dt_max, 0.01);
        assert_eq!(c.run.scenario, "custom");
        assert_eq!(c.fit_window(), (0.5, 1.0));
        assert_eq!(c.force().unwrap(), ForceField::Zero);
    }

    #[test]
    fn gamma_one_is_rejected() {
        let err = parse_config(&MINIMAL.replace("gamma = 2.0", "gamma = 1.0")).unwrap_err();
        assert!(err.to_string().contains("gamma must exceed 1"), "{err}");
        assert!(err.to_string().contains("fluid.gamma"), "{err}");
    }

    #[test]
    fn unknown_key_is_named() {
        let err = parse_config(&MINIMAL.replace("gamma = 2.0", "gama = 2.0")).unwrap_err();
        assert!(err.to_string().contains("gama"), "{err}");
    }

    #[test]
    fn stray_parameter_for_kind_is_named() {
        let err =
            parse_config(&MINIMAL.replace("mu0 = 1.0", "mu0 = 1.0\nslope = 2.0")).unwrap_err();
        assert!(err.to_string().contains("fluid.slope"), "{err}");
    }

    #[test]
    fn missing_kind_parameter_is_named() {
        let err = parse_config(&MINIMAL.replace("rho_value = 1.0", "")).unwrap_err();
        assert!(err.to_string().contains("initial.rho_value"), "{err}");
    }

    #[test]
    fn constraint_violations_carry_key_path() {
        for (from, to, key) in [
            ("n = 50", "n = 3", "grid.n"),
            ("t_end = 1.0", "t_end = 1.0\ncfl = 2.0", "run.cfl"),
            ("t_end = 1.0", "t_end = -1.0", "run.t_end"),
            ("mu0 = 1.0", "mu0 = -1.0", "fluid.viscosity"),
            (
                "t_end = 1.0",
                "t_end = 1.0\nfit_start = 2.0",
                "run.fit_start",
            ),
        ] {
            let err = parse_config(&MINIMAL.replace(from, to)).unwrap_err();
            assert!(err.to_string().contains(key), "{key}: {err}");
        }
    }

    #[test]
    fn type_mismatch_is_a_config_error() {
        let err = parse_config(&MINIMAL.replace("n = 50", "n = \"fifty\"")).unwrap_err();
        assert!(matches!(err, CliError::Config(_)));
    }

    #[test]
    fn round_trip_is_identity() {
        let c = parse_config(MINIMAL).unwrap();
        let again = parse_config(&c.to_toml()).unwrap();
        assert_eq!(again, c);
        assert_eq!(again.hash(), c.hash());
    }

    #[test]
    fn hash_ignores_output_but_not_physics() {
        let a = parse_config(MINIMAL).unwrap();
        let mut b = a.clone();
        b.run.output = "elsewhere".into();
        assert_eq!(a.hash(), b.hash());
        b.fluid.gamma = 2.5;
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn hash_ignores_formatting() {
        let a = parse_config(MINIMAL).unwrap();
        let b = parse_config(&format!("# comment\n{MINIMAL}\n\n")).unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }
}
