//! JSON scenario configuration.
//!
//! Complex numbers are written as `[re, im]` pairs and 2×2 matrices as
//! row-major nested arrays of pairs. Everything except `scenario` has a
//! default or is required only by the scenario that uses it.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Complex, Mat2, ZnElement};
use crate::calculus::{M2VectorField, ZnVectorField};
use crate::classical::{GeodesicState, GridField, Stencil};
use crate::connection::{
    braiding_residual_m2, braiding_residual_zn, reality_residual_m2, reality_residual_zn,
};
use crate::mobius::{metric_preservation_check, Coefficients, RowState};
use crate::ode::{Method, Options};
use crate::presets;
use crate::transport::{state_eval_m2, state_eval_zn};

pub const PRESETS: [&str; 2] = ["paper-fig1", "paper-fig2"];

/// Tolerance used by [`validate`] for constraints on initial data.
pub const VALIDATION_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{origin}: parse error at line {line}, column {column}: {message}")]
    Parse {
        origin: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("unknown preset `{0}` (available: {list})", list = PRESETS.join(", "))]
    UnknownPreset(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn field_error(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Field {
        field: field.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    Zn,
    M2,
    M2row,
    ClassicalGeodesic,
    ClassicalBurgers,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 5] = [
        ScenarioKind::Zn,
        ScenarioKind::M2,
        ScenarioKind::M2row,
        ScenarioKind::ClassicalGeodesic,
        ScenarioKind::ClassicalBurgers,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Zn => "zn",
            ScenarioKind::M2 => "m2",
            ScenarioKind::M2row => "m2row",
            ScenarioKind::ClassicalGeodesic => "classical-geodesic",
            ScenarioKind::ClassicalBurgers => "classical-burgers",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|k| k.name()).collect();
                format!(
                    "unknown scenario `{s}` (expected one of {})",
                    names.join(", ")
                )
            })
    }
}

/// A complex number as `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pair(pub f64, pub f64);

impl From<Complex> for Pair {
    fn from(z: Complex) -> Self {
        Pair(z.re, z.im)
    }
}

impl From<Pair> for Complex {
    fn from(p: Pair) -> Self {
        Complex::new(p.0, p.1)
    }
}

pub type PairMatrix = [[Pair; 2]; 2];

fn to_pair_matrix(m: &Mat2) -> PairMatrix {
    m.entries.map(|row| row.map(Pair::from))
}

fn from_pair_matrix(m: &PairMatrix) -> Mat2 {
    Mat2 {
        entries: m.map(|row| row.map(Complex::from)),
    }
}

/// `m` is a vector on `Z_n` and a matrix on `M_2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Amplitudes {
    Vector(Vec<Pair>),
    Matrix(PairMatrix),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Integrator {
    #[default]
    Rk4,
    Rk45,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Manifold {
    Sphere,
    Flat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StencilName {
    Second,
    Fourth,
}

impl From<StencilName> for Stencil {
    fn from(s: StencilName) -> Self {
        match s {
            StencilName::Second => Stencil::Second,
            StencilName::Fourth => Stencil::Fourth,
        }
    }
}

fn default_t_end() -> f64 {
    10.0
}

fn default_step() -> f64 {
    1e-3
}

fn default_stride() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,

    /// `zn`: group order; inferred from `k_plus` when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_plus: Option<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_minus: Option<Vec<Pair>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<Amplitudes>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k1: Option<PairMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k2: Option<PairMatrix>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q0: Option<Pair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q1: Option<Pair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q2: Option<Pair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Pair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Pair>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifold: Option<Manifold>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<f64>>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stencil: Option<StencilName>,
    /// `classical-burgers`: `K(x, 0) = amplitude · sin x` unless `k0` is given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k0: Option<Vec<f64>>,
    /// `classical-burgers`: constant Christoffel symbol of the line.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,

    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default = "default_step")]
    pub step: f64,
    #[serde(default = "default_stride")]
    pub stride: usize,
    #[serde(default)]
    pub integrator: Integrator,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rtol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atol: Option<f64>,

    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl ScenarioConfig {
    /// A config with only the scenario set and all timing fields at their defaults.
    pub fn empty(scenario: ScenarioKind) -> Self {
        Self {
            scenario,
            n: None,
            k_plus: None,
            k_minus: None,
            m: None,
            k1: None,
            k2: None,
            q0: None,
            q1: None,
            q2: None,
            lambda: None,
            mu: None,
            manifold: None,
            x: None,
            v: None,
            points: None,
            stencil: None,
            amplitude: None,
            k0: None,
            gamma: None,
            t_end: default_t_end(),
            step: default_step(),
            stride: default_stride(),
            integrator: Integrator::Rk4,
            rtol: None,
            atol: None,
            out: None,
        }
    }

    /// Ready-to-run defaults for each scenario.
    pub fn default_for(scenario: ScenarioKind) -> Self {
        let mut c = Self::empty(scenario);
        c.stride = 10;
        match scenario {
            ScenarioKind::Zn => {
                let k = presets::fig1_field();
                c.n = Some(3);
                c.k_plus = Some(k.plus.samples().iter().map(|&z| z.into()).collect());
                c.k_minus = Some(k.minus.samples().iter().map(|&z| z.into()).collect());
                c.m = Some(Amplitudes::Vector(
                    presets::fig1_m()
                        .samples()
                        .iter()
                        .map(|&z| z.into())
                        .collect(),
                ));
            }
            ScenarioKind::M2 => {
                let k = presets::fig2_field();
                c.k1 = Some(to_pair_matrix(&k.k1));
                c.k2 = Some(to_pair_matrix(&k.k2));
                c.m = Some(Amplitudes::Matrix(to_pair_matrix(&presets::fig2_m())));
            }
            ScenarioKind::M2row => {
                c.q0 = Some(Pair(0.0, 1.0));
                c.q1 = Some(Pair(1.0, 0.0));
                c.q2 = Some(Pair(-1.0, 0.0));
                let r = std::f64::consts::FRAC_1_SQRT_2;
                c.lambda = Some(Pair(r, 0.0));
                c.mu = Some(Pair(r, 0.0));
            }
            ScenarioKind::ClassicalGeodesic => {
                c.manifold = Some(Manifold::Sphere);
                c.x = Some(vec![1.0, 0.0]);
                c.v = Some(vec![0.3, 1.0]);
            }
            ScenarioKind::ClassicalBurgers => {
                c.points = Some(GridField::DEFAULT_POINTS);
                c.stencil = Some(StencilName::Fourth);
                c.amplitude = Some(0.1);
                c.gamma = Some(0.0);
                c.t_end = 1.0;
            }
        }
        c
    }

    pub fn preset(name: &str) -> Result<Self, ConfigError> {
        match name {
            "paper-fig1" => Ok(Self::default_for(ScenarioKind::Zn)),
            "paper-fig2" => Ok(Self::default_for(ScenarioKind::M2)),
            other => Err(ConfigError::UnknownPreset(other.to_string())),
        }
    }

    pub fn from_json(text: &str, origin: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Parse {
            origin: origin.to_string(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text, &path.display().to_string())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    pub fn options(&self) -> Result<Options, ConfigError> {
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(field_error("t_end", "must be positive and finite"));
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(field_error("step", "must be positive and finite"));
        }
        if self.step > self.t_end {
            return Err(field_error("step", "must not exceed t_end"));
        }
        if self.stride == 0 {
            return Err(field_error("stride", "must be at least 1"));
        }
        let method = match self.integrator {
            Integrator::Rk4 => Method::Rk4,
            Integrator::Rk45 => {
                let Method::Rk45 { rtol, atol } = Method::adaptive_default() else {
                    unreachable!()
                };
                let rtol = self.rtol.unwrap_or(rtol);
                let atol = self.atol.unwrap_or(atol);
                for (name, v) in [("rtol", rtol), ("atol", atol)] {
                    if !(v.is_finite() && v > 0.0) {
                        return Err(field_error(name, "must be positive"));
                    }
                }
                Method::Rk45 { rtol, atol }
            }
        };
        Ok(Options {
            t_end: self.t_end,
            step: self.step,
            stride: self.stride,
            method,
            ..Options::default()
        })
    }

    /// Checks shapes and converts to typed initial data.
    pub fn plan(&self) -> Result<Plan, ConfigError> {
        let options = self.options()?;
        let scenario = match self.scenario {
            ScenarioKind::Zn => Scenario::Zn(self.zn_data()?),
            ScenarioKind::M2 => Scenario::M2(self.m2_data()?),
            ScenarioKind::M2row => Scenario::M2Row {
                q: Coefficients::new(
                    required(self.q0, "q0")?.into(),
                    required(self.q1, "q1")?.into(),
                    required(self.q2, "q2")?.into(),
                ),
                initial: RowState {
                    lambda: required(self.lambda, "lambda")?.into(),
                    mu: required(self.mu, "mu")?.into(),
                },
            },
            ScenarioKind::ClassicalGeodesic => self.geodesic_data()?,
            ScenarioKind::ClassicalBurgers => self.burgers_data()?,
        };
        check_finite(&scenario)?;
        Ok(Plan { scenario, options })
    }

    fn zn_data(&self) -> Result<ZnData, ConfigError> {
        let plus = required(self.k_plus.as_ref(), "k_plus")?;
        let minus = required(self.k_minus.as_ref(), "k_minus")?;
        let m = match required(self.m.as_ref(), "m")? {
            Amplitudes::Vector(v) => v,
            Amplitudes::Matrix(_) => {
                return Err(field_error("m", "expected a vector of [re, im] pairs"))
            }
        };
        let n = self.n.unwrap_or(plus.len());
        if n < 2 {
            return Err(field_error("n", "group order must be at least 2"));
        }
        for (name, v) in [("k_plus", plus), ("k_minus", minus), ("m", m)] {
            if v.len() != n {
                return Err(field_error(
                    name,
                    format!("expected {n} entries, got {}", v.len()),
                ));
            }
        }
        let element = |name: &str, v: &[Pair]| {
            ZnElement::new(v.iter().map(|&p| p.into()).collect())
                .map_err(|e| field_error(name, e.to_string()))
        };
        Ok(ZnData {
            k: ZnVectorField {
                plus: element("k_plus", plus)?,
                minus: element("k_minus", minus)?,
            },
            m: element("m", m)?,
        })
    }

    fn m2_data(&self) -> Result<M2Data, ConfigError> {
        let k1 = required(self.k1.as_ref(), "k1")?;
        let k2 = required(self.k2.as_ref(), "k2")?;
        let m = match required(self.m.as_ref(), "m")? {
            Amplitudes::Matrix(m) => m,
            Amplitudes::Vector(_) => {
                return Err(field_error("m", "expected a 2x2 matrix of [re, im] pairs"))
            }
        };
        Ok(M2Data {
            k: M2VectorField {
                k1: from_pair_matrix(k1),
                k2: from_pair_matrix(k2),
            },
            m: from_pair_matrix(m),
        })
    }

    fn geodesic_data(&self) -> Result<Scenario, ConfigError> {
        let manifold = self.manifold.unwrap_or(Manifold::Sphere);
        let x = required(self.x.as_ref(), "x")?.clone();
        let v = required(self.v.as_ref(), "v")?.clone();
        let dim = match manifold {
            Manifold::Sphere => 2,
            Manifold::Flat => x.len().max(1),
        };
        if x.len() != dim {
            return Err(field_error(
                "x",
                format!("expected {dim} coordinates, got {}", x.len()),
            ));
        }
        if v.len() != dim {
            return Err(field_error(
                "v",
                format!("expected {dim} components, got {}", v.len()),
            ));
        }
        if manifold == Manifold::Sphere && x[0].sin().abs() < 1e-12 {
            return Err(field_error("x", "θ must avoid the coordinate poles"));
        }
        Ok(Scenario::Geodesic {
            manifold,
            initial: GeodesicState { x, v },
        })
    }

    fn burgers_data(&self) -> Result<Scenario, ConfigError> {
        let stencil = self.stencil.unwrap_or(StencilName::Fourth).into();
        let field = match &self.k0 {
            Some(values) => {
                if let Some(p) = self.points {
                    if p != values.len() {
                        return Err(field_error(
                            "k0",
                            format!("expected {p} samples, got {}", values.len()),
                        ));
                    }
                }
                GridField::new(values.clone(), stencil)
            }
            None => {
                let a = self.amplitude.unwrap_or(0.1);
                let n = self.points.unwrap_or(GridField::DEFAULT_POINTS);
                GridField::from_fn(n, stencil, |x| a * x.sin())
            }
        }
        .map_err(|e| {
            field_error(
                if self.k0.is_some() { "k0" } else { "points" },
                e.to_string(),
            )
        })?;
        Ok(Scenario::Burgers {
            initial: field,
            gamma: self.gamma.unwrap_or(0.0),
        })
    }
}

fn required<T>(value: Option<T>, field: &str) -> Result<T, ConfigError> {
    value.ok_or_else(|| field_error(field, "required for this scenario"))
}

fn check_finite(s: &Scenario) -> Result<(), ConfigError> {
    let ok = match s {
        Scenario::Zn(d) => d.to_vec().iter().all(|v| v.is_finite()),
        Scenario::M2(d) => d.to_vec().iter().all(|v| v.is_finite()),
        Scenario::M2Row { q, initial } => {
            [q.q0, q.q1, q.q2].iter().all(|z| z.is_finite())
                && initial.to_vec().iter().all(|v| v.is_finite())
        }
        Scenario::Geodesic { initial, .. } => initial.to_vec().iter().all(|v| v.is_finite()),
        Scenario::Burgers { initial, gamma } => {
            gamma.is_finite() && initial.values.iter().all(|v| v.is_finite())
        }
    };
    if ok {
        Ok(())
    } else {
        Err(field_error("initial data", "all entries must be finite"))
    }
}

pub type ZnData = crate::transport::ZnGeodesicState;
pub type M2Data = crate::transport::M2GeodesicState;

/// Typed initial data for one run.
#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    Zn(ZnData),
    M2(M2Data),
    M2Row {
        q: Coefficients,
        initial: RowState,
    },
    Geodesic {
        manifold: Manifold,
        initial: GeodesicState,
    },
    Burgers {
        initial: GridField,
        gamma: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub scenario: Scenario,
    pub options: Options,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
}

impl Check {
    fn new(name: &str, value: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            tolerance: VALIDATION_TOLERANCE,
        }
    }

    pub fn passed(&self) -> bool {
        self.value <= self.tolerance
    }
}

/// Constraint checks on initial data. Violations are warnings: the
/// equations stay integrable, they just stop conserving what they would.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub scenario: ScenarioKind,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn warnings(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn is_clean(&self) -> bool {
        self.warnings().next().is_none()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario {}: initial data parsed", self.scenario)?;
        for c in &self.checks {
            let tag = if c.passed() { "ok  " } else { "warn" };
            writeln!(
                f,
                "{tag} {:<28} {:.3e} (tolerance {:.0e})",
                c.name, c.value, c.tolerance
            )?;
        }
        Ok(())
    }
}

pub fn validate(config: &ScenarioConfig) -> Result<ValidationReport, ConfigError> {
    let plan = config.plan()?;
    let checks = match &plan.scenario {
        Scenario::Zn(d) => {
            let n = d.m.order();
            vec![
                Check::new("reality residual", reality_residual_zn(&d.k).max_abs()),
                Check::new("braiding residual", braiding_residual_zn(&d.k).max_abs()),
                Check::new(
                    "normalization |φ(1) - 1|",
                    (state_eval_zn(&d.m, &ZnElement::unit(n)).re - 1.0).abs(),
                ),
            ]
        }
        Scenario::M2(d) => vec![
            Check::new("reality residual", reality_residual_m2(&d.k).max_abs()),
            Check::new(
                "braiding residual",
                braiding_residual_m2(&d.k).frobenius_norm(),
            ),
            Check::new(
                "normalization |φ(1) - 1|",
                (state_eval_m2(&d.m, &Mat2::identity()).re - 1.0).abs(),
            ),
        ],
        Scenario::M2Row { q, initial } => vec![
            Check::new(
                "normalization | |λ|²+|μ|² - 1 |",
                (initial.norm_sq() - 1.0).abs(),
            ),
            Check::new(
                "metric preservation",
                if metric_preservation_check(q) {
                    0.0
                } else {
                    (q.q0 + q.q0.conj()).norm().max((q.q2 + q.q1.conj()).norm())
                },
            ),
        ],
        Scenario::Geodesic { initial, .. } => vec![Check::new(
            "initial speed is nonzero",
            if initial.v.iter().any(|v| *v != 0.0) {
                0.0
            } else {
                1.0
            },
        )],
        Scenario::Burgers { .. } => Vec::new(),
    };
    Ok(ValidationReport {
        scenario: config.scenario,
        checks,
    })
}
