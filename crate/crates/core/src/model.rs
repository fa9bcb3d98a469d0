//! Constitutive laws: the barotropic pressure `P = A rho^gamma`, the
//! density-dependent viscosity `mu(rho) >= mu_lower > 0`, and the external
//! force `f(x)` together with its primitive `F(x) = int_0^x f`.
//!
//! Every law is validated when it is built. Evaluation afterwards only checks
//! the argument domain.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::interp::PiecewiseLinear;

/// Sample count used to validate tabulated viscosity laws.
pub const VISCOSITY_VALIDATION_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct FluidParams {
    gamma: f64,
    a: f64,
    viscosity: ViscosityLaw,
}

impl FluidParams {
    /// Pressure coefficient `A = 1`.
    pub fn new(gamma: f64, viscosity: ViscosityLaw) -> Result<Self> {
        Self::with_coefficient(gamma, 1.0, viscosity)
    }

    pub fn with_coefficient(gamma: f64, a: f64, viscosity: ViscosityLaw) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 1.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma must exceed 1 (got {gamma})"
            )));
        }
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "pressure coefficient A must be positive (got {a})"
            )));
        }
        Ok(Self {
            gamma,
            a,
            viscosity,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn coefficient(&self) -> f64 {
        self.a
    }

    pub fn viscosity_law(&self) -> &ViscosityLaw {
        &self.viscosity
    }

    pub fn pressure(&self, rho: f64) -> Result<f64> {
        check_density(rho)?;
        Ok(self.p(rho))
    }

    pub fn pressure_derivative(&self, rho: f64) -> Result<f64> {
        check_density(rho)?;
        Ok(self.dp(rho))
    }

    pub fn viscosity(&self, rho: f64) -> Result<f64> {
        self.viscosity.eval(rho)
    }

    /// `sqrt(P'(rho))`; zero at vacuum.
    pub fn sound_speed(&self, rho: f64) -> Result<f64> {
        check_density(rho)?;
        Ok(self.c(rho))
    }

    /// Internal energy density `P(rho) / (gamma - 1)`.
    pub fn internal_energy(&self, rho: f64) -> Result<f64> {
        check_density(rho)?;
        Ok(self.p(rho) / (self.gamma - 1.0))
    }

    // Unchecked evaluations for hot loops; callers guarantee rho >= 0.
    #[inline]
    pub(crate) fn p(&self, rho: f64) -> f64 {
        self.a * rho.powf(self.gamma)
    }

    #[inline]
    pub(crate) fn dp(&self, rho: f64) -> f64 {
        if rho == 0.0 {
            0.0
        } else {
            self.a * self.gamma * rho.powf(self.gamma - 1.0)
        }
    }

    #[inline]
    pub(crate) fn c(&self, rho: f64) -> f64 {
        self.dp(rho).sqrt()
    }

    #[inline]
    pub(crate) fn mu(&self, rho: f64) -> f64 {
        self.viscosity.eval_unchecked(rho)
    }
}

fn check_density(rho: f64) -> Result<()> {
    if rho >= 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("rho", rho, "finite and >= 0"))
    }
}

/// Functional form of `mu(rho)`.
#[derive(Debug, Clone, PartialEq)]
pub enum ViscosityKind {
    Constant {
        mu0: f64,
    },
    /// `mu_bar + slope * rho`
    Affine {
        mu_bar: f64,
        slope: f64,
    },
    /// `mu_bar + coeff * rho^theta`
    Power {
        mu_bar: f64,
        coeff: f64,
        theta: f64,
    },
    Table(PiecewiseLinear),
}

impl ViscosityKind {
    pub fn name(&self) -> &'static str {
        match self {
            ViscosityKind::Constant { .. } => "constant",
            ViscosityKind::Affine { .. } => "affine",
            ViscosityKind::Power { .. } => "power",
            ViscosityKind::Table(_) => "table",
        }
    }

    fn eval(&self, rho: f64) -> f64 {
        match self {
            ViscosityKind::Constant { mu0 } => *mu0,
            ViscosityKind::Affine { mu_bar, slope } => mu_bar + slope * rho,
            ViscosityKind::Power {
                mu_bar,
                coeff,
                theta,
            } => mu_bar + coeff * rho.powf(*theta),
            ViscosityKind::Table(t) => t.eval(rho),
        }
    }

    /// Infimum over `rho >= 0` for the closed forms, `None` if unbounded below.
    fn analytic_infimum(&self) -> Option<Option<f64>> {
        match self {
            ViscosityKind::Constant { mu0 } => Some(Some(*mu0)),
            ViscosityKind::Affine { mu_bar, slope } => {
                Some(if *slope >= 0.0 { Some(*mu_bar) } else { None })
            }
            ViscosityKind::Power { mu_bar, coeff, .. } => {
                Some(if *coeff >= 0.0 { Some(*mu_bar) } else { None })
            }
            ViscosityKind::Table(_) => None,
        }
    }
}

/// A viscosity law certified to satisfy `mu(rho) >= mu_lower > 0` for all
/// `rho >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ViscosityLaw {
    kind: ViscosityKind,
    mu_lower: f64,
}

impl ViscosityLaw {
    /// Builds and certifies a law. Without an explicit `mu_lower` the bound is
    /// taken as the law's own infimum (closed forms) or the smallest table value.
    pub fn new(kind: ViscosityKind, mu_lower: Option<f64>) -> Result<Self> {
        match &kind {
            ViscosityKind::Constant { mu0 } => finite("mu0", *mu0)?,
            ViscosityKind::Affine { mu_bar, slope } => {
                finite("mu_bar", *mu_bar)?;
                finite("slope", *slope)?;
            }
            ViscosityKind::Power {
                mu_bar,
                coeff,
                theta,
            } => {
                finite("mu_bar", *mu_bar)?;
                finite("coeff", *coeff)?;
                finite("theta", *theta)?;
                if *theta < 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "power-law exponent theta must be >= 0 (got {theta})"
                    )));
                }
            }
            ViscosityKind::Table(_) => {}
        }

        let mu_lower = match (mu_lower, &kind) {
            (Some(m), _) => m,
            (None, ViscosityKind::Table(t)) => t.min_value(),
            (None, k) => match k.analytic_infimum() {
                Some(Some(inf)) => inf,
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "{} viscosity law is unbounded below on rho >= 0",
                        k.name()
                    )))
                }
            },
        };
        if !(mu_lower.is_finite() && mu_lower > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "viscosity lower bound must be positive (got {mu_lower})"
            )));
        }

        match &kind {
            ViscosityKind::Table(t) => {
                // piecewise-linear with flat ends: the minimum sits on a node
                for (&x, &y) in t.xs().iter().zip(t.ys()) {
                    if y < mu_lower {
                        return Err(Error::ViscosityBelowBound {
                            rho: x.max(0.0),
                            value: y,
                            mu_lower,
                        });
                    }
                }
                let top = 10.0 * t.xs().last().copied().unwrap_or(1.0).max(0.1);
                for k in 0..=VISCOSITY_VALIDATION_SAMPLES {
                    let rho = top * k as f64 / VISCOSITY_VALIDATION_SAMPLES as f64;
                    let value = t.eval(rho);
                    if value < mu_lower {
                        return Err(Error::ViscosityBelowBound {
                            rho,
                            value,
                            mu_lower,
                        });
                    }
                }
            }
            closed => match closed.analytic_infimum() {
                Some(Some(inf)) if inf >= mu_lower => {}
                Some(Some(inf)) => {
                    return Err(Error::ViscosityBelowBound {
                        rho: 0.0,
                        value: inf,
                        mu_lower,
                    })
                }
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "{} viscosity law is unbounded below on rho >= 0",
                        closed.name()
                    )))
                }
            },
        }
        Ok(Self { kind, mu_lower })
    }

    pub fn constant(mu0: f64) -> Result<Self> {
        Self::new(ViscosityKind::Constant { mu0 }, None)
    }

    pub fn affine(mu_bar: f64, slope: f64) -> Result<Self> {
        Self::new(ViscosityKind::Affine { mu_bar, slope }, None)
    }

    pub fn power(mu_bar: f64, coeff: f64, theta: f64) -> Result<Self> {
        Self::new(
            ViscosityKind::Power {
                mu_bar,
                coeff,
                theta,
            },
            None,
        )
    }

    pub fn table(rho: Vec<f64>, mu: Vec<f64>, mu_lower: Option<f64>) -> Result<Self> {
        Self::new(
            ViscosityKind::Table(PiecewiseLinear::new(rho, mu)?),
            mu_lower,
        )
    }

    pub fn kind(&self) -> &ViscosityKind {
        &self.kind
    }

    pub fn mu_lower(&self) -> f64 {
        self.mu_lower
    }

    pub fn eval(&self, rho: f64) -> Result<f64> {
        check_density(rho)?;
        Ok(self.kind.eval(rho))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, rho: f64) -> f64 {
        self.kind.eval(rho)
    }

    /// Number of continuous derivatives on `[0, inf)` (capped at 2).
    pub fn smoothness(&self) -> u8 {
        match &self.kind {
            ViscosityKind::Constant { .. } | ViscosityKind::Affine { .. } => 2,
            ViscosityKind::Power { coeff, theta, .. } => {
                if *coeff == 0.0 || theta.fract() == 0.0 || *theta >= 2.0 {
                    2
                } else if *theta >= 1.0 {
                    1
                } else {
                    0
                }
            }
            ViscosityKind::Table(t) => {
                if t.ys().windows(2).all(|w| w[0] == w[1]) {
                    2
                } else {
                    0
                }
            }
        }
    }
}

fn finite(what: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(what, v, "finite"))
    }
}

/// External force `f(x)` on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub enum ForceField {
    Zero,
    Constant(f64),
    /// Ascending coefficients: `c0 + c1 x + c2 x^2 + ...`
    Polynomial(Vec<f64>),
    /// `amplitude * sin(2 pi frequency x + phase)`
    Sinusoid {
        amplitude: f64,
        frequency: f64,
        phase: f64,
    },
    Table(PiecewiseLinear),
}

impl ForceField {
    pub fn name(&self) -> &'static str {
        match self {
            ForceField::Zero => "zero",
            ForceField::Constant(_) => "constant",
            ForceField::Polynomial(_) => "poly",
            ForceField::Sinusoid { .. } => "sin",
            ForceField::Table(_) => "table",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            ForceField::Zero | ForceField::Table(_) => true,
            ForceField::Constant(c) => c.is_finite(),
            ForceField::Polynomial(c) => c.iter().all(|v| v.is_finite()),
            ForceField::Sinusoid {
                amplitude,
                frequency,
                phase,
            } => amplitude.is_finite() && frequency.is_finite() && phase.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "{} force has non-finite parameters",
                self.name()
            )))
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        check_coordinate(x)?;
        Ok(self.f(x))
    }

    /// `F(x) = int_0^x f(y) dy`, exact for every variant.
    pub fn primitive(&self, x: f64) -> Result<f64> {
        check_coordinate(x)?;
        Ok(self.big_f(x))
    }

    #[inline]
    pub(crate) fn f(&self, x: f64) -> f64 {
        match self {
            ForceField::Zero => 0.0,
            ForceField::Constant(c) => *c,
            ForceField::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck),
            ForceField::Sinusoid {
                amplitude,
                frequency,
                phase,
            } => amplitude * (2.0 * PI * frequency * x + phase).sin(),
            ForceField::Table(t) => t.eval(x),
        }
    }

    pub(crate) fn big_f(&self, x: f64) -> f64 {
        match self {
            ForceField::Zero => 0.0,
            ForceField::Constant(c) => c * x,
            ForceField::Polynomial(c) => {
                c.iter()
                    .enumerate()
                    .rev()
                    .fold(0.0, |acc, (k, &ck)| acc * x + ck / (k + 1) as f64)
                    * x
            }
            ForceField::Sinusoid {
                amplitude,
                frequency,
                phase,
            } => {
                if *frequency == 0.0 {
                    amplitude * phase.sin() * x
                } else {
                    let w = 2.0 * PI * frequency;
                    amplitude / w * (phase.cos() - (w * x + phase).cos())
                }
            }
            ForceField::Table(t) => t.integral(0.0, x),
        }
    }

    /// `||f||_{L^inf(0,1)}`: exact for constant, sinusoid and table variants,
    /// dense sampling for polynomials.
    pub fn sup_norm(&self) -> f64 {
        match self {
            ForceField::Zero => 0.0,
            ForceField::Constant(c) => c.abs(),
            ForceField::Sinusoid { amplitude, .. } => amplitude.abs(),
            ForceField::Table(t) => t.max_abs(),
            ForceField::Polynomial(_) => {
                let n = 10_000;
                (0..=n).fold(0.0, |m, k| m.max(self.f(k as f64 / n as f64).abs()))
            }
        }
    }

    /// `||F||_{L^inf(0,1)}` by dense sampling.
    pub fn primitive_sup_norm(&self) -> f64 {
        let n = 10_000;
        (0..=n).fold(0.0, |m, k| m.max(self.big_f(k as f64 / n as f64).abs()))
    }
}

fn check_coordinate(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::domain("x", x, "[0, 1]"))
    }
}

/// Which regularity hypotheses of the existence theory a configuration meets.
/// Reported, never enforced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HypothesisReport {
    /// f bounded (always true for the supported variants)
    pub force_bounded: bool,
    /// f in H^1 (all supported variants are piecewise smooth and continuous)
    pub force_h1: bool,
    /// mu in C^1[0, inf): needed for strong solutions
    pub viscosity_c1: bool,
    /// mu in C^2[0, inf): needed for classical solutions
    pub viscosity_c2: bool,
}

impl HypothesisReport {
    pub fn assess(params: &FluidParams, force: &ForceField) -> Self {
        let s = params.viscosity_law().smoothness();
        let bounded = force.sup_norm().is_finite();
        Self {
            force_bounded: bounded,
            force_h1: bounded,
            viscosity_c1: s >= 1,
            viscosity_c2: s >= 2,
        }
    }

    pub fn strong_solution(&self) -> bool {
        self.force_h1 && self.viscosity_c1
    }

    pub fn classical_solution(&self) -> bool {
        self.force_h1 && self.viscosity_c2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn air() -> FluidParams {
        FluidParams::new(1.4, ViscosityLaw::constant(1.0).unwrap()).unwrap()
    }

    fn gas(gamma: f64) -> FluidParams {
        FluidParams::new(gamma, ViscosityLaw::constant(1.0).unwrap()).unwrap()
    }

    #[test]
    fn pressure_examples() {
        assert_eq!(air().pressure(1.0).unwrap(), 1.0);
        assert_eq!(air().pressure(0.0).unwrap(), 0.0);
        assert!((air().pressure(2.0).unwrap() - 2.639015821545789).abs() < 1e-12);
        assert!(matches!(air().pressure(-0.1), Err(Error::Domain { .. })));
    }

    #[test]
    fn pressure_derivative_examples() {
        assert_eq!(gas(1.7).pressure_derivative(1.0).unwrap(), 1.7);
        assert_eq!(air().pressure_derivative(0.0).unwrap(), 0.0);
        assert_eq!(gas(2.0).pressure_derivative(3.0).unwrap(), 6.0);
        assert!(air().pressure_derivative(-1.0).is_err());
    }

    #[test]
    fn pressure_derivative_matches_finite_difference() {
        let h = 1e-5;
        for gamma in [1.4, 2.0, 3.0] {
            let p = FluidParams::with_coefficient(gamma, 2.5, ViscosityLaw::constant(1.0).unwrap())
                .unwrap();
            for rho in [0.5, 1.0, 2.0, 5.0] {
                let fd = (p.pressure(rho + h).unwrap() - p.pressure(rho - h).unwrap()) / (2.0 * h);
                let exact = p.pressure_derivative(rho).unwrap();
                assert!(
                    ((fd - exact) / exact).abs() < 1e-6,
                    "gamma={gamma} rho={rho}"
                );
            }
        }
    }

    #[test]
    fn sound_speed_examples() {
        assert_eq!(air().sound_speed(0.0).unwrap(), 0.0);
        assert!((gas(2.0).sound_speed(1.0).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!((air().sound_speed(1.0).unwrap() - 1.183215956619923).abs() < 1e-12);
    }

    #[test]
    fn construction_rejects_bad_gamma_and_a() {
        let mu = ViscosityLaw::constant(1.0).unwrap();
        assert!(FluidParams::new(1.0, mu.clone()).is_err());
        assert!(FluidParams::new(0.5, mu.clone()).is_err());
        assert!(FluidParams::with_coefficient(2.0, 0.0, mu.clone()).is_err());
        assert!(FluidParams::with_coefficient(2.0, -1.0, mu).is_err());
    }

    #[test]
    fn viscosity_examples() {
        let c = ViscosityLaw::constant(1.0).unwrap();
        assert_eq!(c.eval(0.0).unwrap(), 1.0);
        assert_eq!(c.eval(42.0).unwrap(), 1.0);
        let p = ViscosityLaw::power(0.5, 1.0, 1.0).unwrap();
        assert_eq!(p.eval(2.0).unwrap(), 2.5);
        assert_eq!(p.mu_lower(), 0.5);
        let err = ViscosityLaw::table(vec![0.0, 1.0, 2.0], vec![1.0, 0.1, 1.0], Some(0.5));
        assert!(matches!(err, Err(Error::ViscosityBelowBound { .. })));
    }

    #[test]
    fn viscosity_rejects_unbounded_or_nonpositive_laws() {
        assert!(ViscosityLaw::affine(1.0, -0.1).is_err());
        assert!(ViscosityLaw::constant(0.0).is_err());
        assert!(ViscosityLaw::power(0.0, 1.0, 1.0).is_err());
        assert!(ViscosityLaw::power(1.0, 1.0, -1.0).is_err());
        assert!(ViscosityLaw::new(ViscosityKind::Constant { mu0: 1.0 }, Some(2.0)).is_err());
        assert!(ViscosityLaw::new(ViscosityKind::Constant { mu0: 1.0 }, Some(0.5)).is_ok());
    }

    #[test]
    fn table_viscosity_clamps_flat() {
        let t = ViscosityLaw::table(vec![0.5, 1.5], vec![1.0, 3.0], None).unwrap();
        assert_eq!(t.mu_lower(), 1.0);
        assert_eq!(t.eval(0.0).unwrap(), 1.0);
        assert_eq!(t.eval(1.0).unwrap(), 2.0);
        assert_eq!(t.eval(100.0).unwrap(), 3.0);
    }

    #[test]
    fn smoothness_classes() {
        assert_eq!(ViscosityLaw::power(1.0, 1.0, 0.5).unwrap().smoothness(), 0);
        assert_eq!(ViscosityLaw::power(1.0, 1.0, 1.5).unwrap().smoothness(), 1);
        assert_eq!(ViscosityLaw::power(1.0, 1.0, 3.0).unwrap().smoothness(), 2);
        assert_eq!(
            ViscosityLaw::table(vec![0.0, 1.0], vec![1.0, 2.0], None)
                .unwrap()
                .smoothness(),
            0
        );
    }

    #[test]
    fn force_primitive_examples() {
        let zero = ForceField::Zero;
        assert_eq!(zero.primitive(0.3).unwrap(), 0.0);
        let one = ForceField::Constant(1.0);
        assert_eq!(one.primitive(0.25).unwrap(), 0.25);
        assert_eq!(one.primitive(1.0).unwrap(), 1.0);
        let s = ForceField::Sinusoid {
            amplitude: 1.0,
            frequency: 1.0,
            phase: 0.0,
        };
        for x in [0.1, 0.37, 0.5, 0.9] {
            let expected = (1.0 - (2.0 * PI * x).cos()) / (2.0 * PI);
            assert!((s.primitive(x).unwrap() - expected).abs() < 1e-15);
        }
        assert!(s.primitive(1.0).unwrap().abs() < 1e-15);
        assert!(matches!(one.eval(1.5), Err(Error::Domain { .. })));
        assert!(one.primitive(-0.1).is_err());
    }

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + k as f64 * h);
        }
        s * h / 3.0
    }

    fn smooth_forces() -> Vec<ForceField> {
        vec![
            ForceField::Constant(-2.5),
            ForceField::Polynomial(vec![1.0, -3.0, 0.5, 2.0]),
            ForceField::Sinusoid {
                amplitude: 1.3,
                frequency: 1.5,
                phase: 0.4,
            },
            ForceField::Sinusoid {
                amplitude: 2.0,
                frequency: 0.0,
                phase: 0.7,
            },
        ]
    }

    #[test]
    fn primitive_matches_simpson_quadrature() {
        for f in smooth_forces() {
            let q = simpson(|x| f.eval(x).unwrap(), 0.0, 1.0, 2000);
            let closed = f.primitive(1.0).unwrap();
            assert!((q - closed).abs() < 1e-10, "{f:?}: {q} vs {closed}");
        }
    }

    #[test]
    fn primitive_derivative_is_force() {
        let h = 1e-6;
        for f in smooth_forces() {
            for x in [0.2, 0.5, 0.8] {
                let fd = (f.primitive(x + h).unwrap() - f.primitive(x - h).unwrap()) / (2.0 * h);
                assert!((fd - f.eval(x).unwrap()).abs() < 1e-7, "{f:?} at {x}");
            }
        }
    }

    #[test]
    fn table_force_primitive_is_exact() {
        let t = ForceField::Table(
            PiecewiseLinear::new(vec![0.0, 0.5, 1.0], vec![0.0, 2.0, 0.0]).unwrap(),
        );
        assert_eq!(t.primitive(0.0).unwrap(), 0.0);
        assert!((t.primitive(0.5).unwrap() - 0.5).abs() < 1e-15);
        assert!((t.primitive(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((t.primitive(0.25).unwrap() - 0.125).abs() < 1e-15);
        assert_eq!(t.sup_norm(), 2.0);
    }

    #[test]
    fn hypotheses_follow_viscosity_smoothness() {
        let rough = FluidParams::new(2.0, ViscosityLaw::power(1.0, 1.0, 0.5).unwrap()).unwrap();
        let r = HypothesisReport::assess(&rough, &ForceField::Constant(1.0));
        assert!(r.force_h1 && !r.strong_solution());
        let r = HypothesisReport::assess(&gas(2.0), &ForceField::Zero);
        assert!(r.classical_solution());
    }

    fn any_law() -> impl Strategy<Value = ViscosityLaw> {
        prop_oneof![
            (0.01f64..10.0).prop_map(|m| ViscosityLaw::constant(m).unwrap()),
            (0.01f64..10.0, 0.0f64..5.0).prop_map(|(m, s)| ViscosityLaw::affine(m, s).unwrap()),
            (0.01f64..10.0, 0.0f64..5.0, 0.0f64..3.0)
                .prop_map(|(m, c, t)| ViscosityLaw::power(m, c, t).unwrap()),
            proptest::collection::vec(0.01f64..10.0, 2..8).prop_map(|ys| {
                let xs = (0..ys.len()).map(|k| k as f64 * 0.7).collect();
                ViscosityLaw::table(xs, ys, None).unwrap()
            }),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn viscosity_never_below_lower_bound(law in any_law(), rho in 0.0f64..100.0) {
            prop_assert!(law.eval(rho).unwrap() >= law.mu_lower());
        }

        #[test]
        fn pressure_is_monotone(gamma in 1.01f64..4.0, r1 in 0.0f64..50.0, dr in 1e-6f64..10.0) {
            let p = gas(gamma);
            prop_assert!(p.pressure(r1).unwrap() < p.pressure(r1 + dr).unwrap());
        }
    }
}
