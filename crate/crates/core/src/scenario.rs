//! Running configured scenarios and writing their artifacts.
//!
//! Every run produces `trajectory.csv` (raw state), `invariants.csv`
//! (monitored residuals), `state.csv` (observables), the resolved
//! `config.json`, and a handful of SVG charts. CSV files are the contract;
//! a chart that cannot be rendered or written only produces a warning.

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::algebra::{Complex, Mat2, ZnElement};
use crate::classical::{BurgersSystem, FlatSpace, GeodesicState, GeodesicSystem, RoundSphere};
use crate::config::{ConfigError, Manifold, Plan, Scenario, ScenarioConfig};
use crate::connection::{
    braiding_residual_m2, braiding_residual_zn, reality_residual_m2, reality_residual_zn,
};
use crate::mobius::{Coefficients, RowState, RowSystem};
use crate::ode::{integrate, IntegrationError, Options, Trajectory};
use crate::output::{complex_columns, Table};
use crate::par::{self, Execution};
use crate::svg::{LineChart, Series};
use crate::transport::{
    bloch_with_residue, M2Geodesic, M2GeodesicState, ZnGeodesic, ZnGeodesicState,
};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("integration failed: {0}")]
    Integration(#[from] IntegrationError),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("no output directory given (set `out` in the config or pass one explicitly)")]
    NoOutput,
}

impl RunError {
    /// 2 for configuration problems, 3 for numerical failure, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::NoOutput => 2,
            RunError::Integration(IntegrationError::InvalidOptions(_)) => 2,
            RunError::Integration(IntegrationError::DimensionMismatch { .. }) => 2,
            RunError::Integration(_) => 3,
            RunError::Write { .. } => 1,
        }
    }
}

/// Everything a run produces, before it touches the filesystem.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub trajectory: Table,
    pub invariants: Table,
    pub state: Table,
    /// `(file stem, chart)`
    pub figures: Vec<(String, LineChart)>,
    /// Largest magnitude of each headline invariant over the run.
    pub headline: Vec<(String, f64)>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub dir: PathBuf,
    pub samples: usize,
    pub headline: Vec<(String, f64)>,
    pub warnings: Vec<String>,
}

pub fn execute(plan: &Plan) -> Result<RunOutput, IntegrationError> {
    let opts = &plan.options;
    match &plan.scenario {
        Scenario::Zn(s) => execute_zn(s, opts),
        Scenario::M2(s) => execute_m2(s, opts),
        Scenario::M2Row { q, initial } => execute_row(q, initial, opts),
        Scenario::Geodesic { manifold, initial } => execute_geodesic(*manifold, initial, opts),
        Scenario::Burgers { initial, gamma } => {
            let sys = BurgersSystem {
                points: initial.len(),
                stencil: initial.stencil,
                gamma: move |_x: f64| *gamma,
                exec: Execution::Sequential,
            };
            let traj = integrate(&sys, &initial.values, opts)?;
            Ok(burgers_output(&traj, initial.spacing()))
        }
    }
}

/// Plans, executes and writes one config. `out` overrides `config.out`.
pub fn run(config: &ScenarioConfig, out: Option<&Path>) -> Result<RunReport, RunError> {
    let dir = out
        .map(Path::to_path_buf)
        .or_else(|| config.out.clone())
        .ok_or(RunError::NoOutput)?;
    let plan = config.plan()?;
    let output = execute(&plan)?;
    let warnings = output.write(&dir, config)?;
    Ok(RunReport {
        dir,
        samples: output.trajectory.rows.len(),
        headline: output.headline,
        warnings,
    })
}

/// Independent runs, one output directory each, spread over threads.
pub fn sweep(
    jobs: &[(ScenarioConfig, PathBuf)],
    exec: Execution,
) -> Vec<Result<RunReport, RunError>> {
    par::map(exec, jobs, |(config, dir)| run(config, Some(dir)))
}

impl RunOutput {
    /// Writes CSV files and the config, then charts. Returns chart warnings.
    pub fn write(&self, dir: &Path, config: &ScenarioConfig) -> Result<Vec<String>, RunError> {
        fs::create_dir_all(dir).map_err(|source| RunError::Write {
            path: dir.to_path_buf(),
            source,
        })?;
        let files = [
            ("trajectory.csv", self.trajectory.to_csv()),
            ("invariants.csv", self.invariants.to_csv()),
            ("state.csv", self.state.to_csv()),
            ("config.json", config.to_json()),
        ];
        for (name, body) in files {
            let path = dir.join(name);
            fs::write(&path, body).map_err(|source| RunError::Write { path, source })?;
        }
        let mut warnings = Vec::new();
        for (stem, chart) in &self.figures {
            let path = dir.join(format!("{stem}.svg"));
            let rendered =
                std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| chart.render()));
            match rendered {
                Ok(svg) => {
                    if let Err(e) = fs::write(&path, svg) {
                        warnings.push(format!("plot {}: {e}", path.display()));
                    }
                }
                Err(_) => warnings.push(format!("plot {}: rendering failed", path.display())),
            }
        }
        Ok(warnings)
    }
}

fn max_abs_column(table: &Table, name: &str) -> f64 {
    table
        .column(name)
        .map(|c| c.iter().fold(0.0, |m: f64, v| m.max(v.abs())))
        .unwrap_or(0.0)
}

fn max_abs_columns(table: &Table, names: &[String]) -> f64 {
    names
        .iter()
        .map(|n| max_abs_column(table, n))
        .fold(0.0, f64::max)
}

fn push_complex(row: &mut Vec<f64>, z: Complex) {
    row.push(z.re);
    row.push(z.im);
}

fn with_time(names: impl IntoIterator<Item = String>) -> Vec<String> {
    std::iter::once("t".to_string()).chain(names).collect()
}

fn complex_names(prefix: &str, count: usize) -> Vec<String> {
    (0..count)
        .flat_map(|i| complex_columns(&format!("{prefix}_{i}")))
        .collect()
}

const ENTRIES: [&str; 4] = ["11", "12", "21", "22"];

fn matrix_names(prefix: &str) -> Vec<String> {
    ENTRIES
        .iter()
        .flat_map(|e| complex_columns(&format!("{prefix}_{e}")))
        .collect()
}

fn trajectory_table(header: Vec<String>, traj: &Trajectory) -> Table {
    let mut table = Table::new(with_time(header));
    for (t, y) in traj.iter() {
        let mut row = Vec::with_capacity(y.len() + 1);
        row.push(t);
        row.extend_from_slice(y);
        table.push(row);
    }
    table
}

fn chart(title: &str, y_label: &str, table: &Table, columns: &[(&str, String)]) -> LineChart {
    let mut c = LineChart::new(title, "t", y_label);
    for (label, col) in columns {
        c = c.with_series(Series::new(*label, table.series(col)));
    }
    c
}

/// Real parts of all four entries, plus imaginary parts when any is nonzero.
fn matrix_chart(title: &str, table: &Table, prefix: &str) -> LineChart {
    let mut c = LineChart::new(title, "t", "entries");
    let im_names: Vec<String> = ENTRIES.iter().map(|e| format!("{prefix}_{e}_im")).collect();
    let show_im = max_abs_columns(table, &im_names) > 0.0;
    for e in ENTRIES {
        c = c.with_series(Series::new(
            format!("Re {e}"),
            table.series(&format!("{prefix}_{e}_re")),
        ));
        if show_im {
            c = c.with_series(Series::new(
                format!("Im {e}"),
                table.series(&format!("{prefix}_{e}_im")),
            ));
        }
    }
    c
}

fn execute_zn(init: &ZnGeodesicState, opts: &Options) -> Result<RunOutput, IntegrationError> {
    let n = init.order();
    let traj = integrate(&ZnGeodesic { n }, &init.to_vec(), opts)?;
    let header = [
        complex_names("k_plus", n),
        complex_names("k_minus", n),
        complex_names("m", n),
    ]
    .concat();
    let trajectory = trajectory_table(header, &traj);

    let abs = |p: &str| abs_names(p, n);
    let mut inv_header = Vec::new();
    for p in ["reality", "braiding"] {
        for i in 0..n {
            inv_header.extend(complex_columns(&format!("{p}_{i}")));
            inv_header.push(format!("{p}_{i}_abs"));
        }
    }
    inv_header.push("normalization".into());
    inv_header.extend(abs("k_plus"));
    inv_header.extend(abs("k_minus"));
    let mut invariants = Table::new(with_time(inv_header));

    let mut st_header: Vec<String> = (0..n).map(|i| format!("phi_delta_{i}")).collect();
    st_header.extend((0..n).map(|i| format!("phi_cumulative_{i}")));
    let mut state = Table::new(with_time(st_header));

    for (t, y) in traj.iter() {
        let s = ZnGeodesicState::from_slice(n, y);
        let mut row = vec![t];
        for r in [reality_residual_zn(&s.k), braiding_residual_zn(&s.k)] {
            for &z in r.samples() {
                push_complex(&mut row, z);
                row.push(z.norm());
            }
        }
        row.push(s.phi(&ZnElement::unit(n)).re - 1.0);
        row.extend(s.k.plus.samples().iter().map(|z| z.norm()));
        row.extend(s.k.minus.samples().iter().map(|z| z.norm()));
        invariants.push(row);

        let single: Vec<f64> = s.m.samples().iter().map(|z| z.norm_sqr()).collect();
        let mut row = vec![t];
        row.extend(&single);
        row.extend(single.iter().scan(0.0, |acc, v| {
            *acc += v;
            Some(*acc)
        }));
        state.push(row);
    }

    let first_abs = |p: &str, i: usize| init_abs(p, i, &invariants);
    let modulus = (0..n)
        .flat_map(|i| [("k_plus", i), ("k_minus", i)])
        .map(|(p, i)| {
            let col = format!("{p}_{i}_abs");
            let start = first_abs(p, i);
            invariants
                .column(&col)
                .unwrap()
                .iter()
                .fold(0.0, |m: f64, v| m.max((v - start).abs()))
        })
        .fold(0.0, f64::max);
    let headline = vec![
        (
            "reality".to_string(),
            max_abs_columns(&invariants, &abs("reality")),
        ),
        (
            "braiding".to_string(),
            max_abs_columns(&invariants, &abs("braiding")),
        ),
        (
            "normalization".to_string(),
            max_abs_column(&invariants, "normalization"),
        ),
        ("modulus drift".to_string(), modulus),
    ];

    let cumulative: Vec<(String, String)> = (0..n)
        .map(|k| {
            let label = (0..=k)
                .map(|i| format!("δ{i}"))
                .collect::<Vec<_>>()
                .join("+");
            (format!("φ({label})"), format!("phi_cumulative_{k}"))
        })
        .collect();
    let reality: Vec<(String, String)> = (0..n)
        .map(|i| {
            (
                format!("|K-({i}) + K+({})*|", (i + 1) % n),
                format!("reality_{i}_abs"),
            )
        })
        .collect();
    let figures = vec![
        (
            "fig1a".into(),
            chart("state", "φ", &state, &as_refs(&cumulative)),
        ),
        (
            "fig1b".into(),
            chart("reality check", "residual", &invariants, &as_refs(&reality)),
        ),
        (
            "fig1c".into(),
            chart(
                "normalisation check",
                "φ(1) - 1",
                &invariants,
                &[("φ(1) - 1", "normalization".into())],
            ),
        ),
    ];
    Ok(RunOutput {
        trajectory,
        invariants,
        state,
        figures,
        headline,
    })
}

fn abs_names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}_{i}_abs")).collect()
}

fn as_refs(v: &[(String, String)]) -> Vec<(&str, String)> {
    v.iter().map(|(a, b)| (a.as_str(), b.clone())).collect()
}

fn init_abs(prefix: &str, i: usize, table: &Table) -> f64 {
    let idx = table.column_index(&format!("{prefix}_{i}_abs")).unwrap();
    table.rows.first().map_or(0.0, |r| r[idx])
}

fn execute_m2(init: &M2GeodesicState, opts: &Options) -> Result<RunOutput, IntegrationError> {
    let traj = integrate(&M2Geodesic, &init.to_vec(), opts)?;
    let header = [matrix_names("k1"), matrix_names("k2"), matrix_names("m")].concat();
    let trajectory = trajectory_table(header, &traj);

    let mut inv_header = matrix_names("commutator");
    inv_header.push("commutator_norm".into());
    inv_header.extend(matrix_names("reality"));
    inv_header.extend([
        "reality_norm".into(),
        "normalization".into(),
        "bloch_radius_sq".into(),
        "bloch_residue".into(),
    ]);
    let mut invariants = Table::new(with_time(inv_header));
    let mut state = Table::new(with_time(["s", "x", "y", "phi_1"].map(String::from)));

    let push_matrix = |row: &mut Vec<f64>, m: &Mat2| {
        for z in m.flat() {
            push_complex(row, z);
        }
    };
    for (t, y) in traj.iter() {
        let s = M2GeodesicState::from_slice(y);
        let comm = braiding_residual_m2(&s.k);
        let real = reality_residual_m2(&s.k);
        let phi1 = s.phi(&Mat2::identity()).re;
        let (p, residue) = bloch_with_residue(&s.m);
        let mut row = vec![t];
        push_matrix(&mut row, &comm);
        row.push(comm.frobenius_norm());
        push_matrix(&mut row, &real);
        row.extend([real.frobenius_norm(), phi1 - 1.0, p.radius_sq(), residue]);
        invariants.push(row);
        state.push(vec![t, p.s, p.x, p.y, phi1]);
    }

    let excess = invariants
        .rows
        .iter()
        .zip(&state.rows)
        .map(|(inv, st)| inv[inv.len() - 2] - 0.25 * st[4] * st[4])
        .fold(f64::NEG_INFINITY, f64::max);
    let headline = vec![
        (
            "commutator".to_string(),
            max_abs_column(&invariants, "commutator_norm"),
        ),
        (
            "reality".to_string(),
            max_abs_column(&invariants, "reality_norm"),
        ),
        (
            "normalization".to_string(),
            max_abs_column(&invariants, "normalization"),
        ),
        ("bloch |y|".to_string(), max_abs_column(&state, "y")),
        ("bloch excess".to_string(), excess),
    ];

    let mut path = LineChart::new("path in state space", "x", "s");
    path.equal_aspect = true;
    let circle = (0..=200)
        .map(|k| {
            let a = std::f64::consts::TAU * k as f64 / 200.0;
            (0.5 * a.cos(), 0.5 * a.sin())
        })
        .collect();
    let sx = state.rows.iter().map(|r| (r[2], r[1])).collect();
    path = path
        .with_series(Series::new("(x, s)", sx))
        .with_series(Series::new("pure states", circle));

    let figures = vec![
        (
            "fig2a".into(),
            matrix_chart("entries of K1(t)", &trajectory, "k1"),
        ),
        (
            "fig2b".into(),
            matrix_chart("entries of K2(t)", &trajectory, "k2"),
        ),
        (
            "fig2c".into(),
            matrix_chart("entries of [K1(t), K2(t)]", &invariants, "commutator"),
        ),
        (
            "fig3a".into(),
            chart(
                "(s, x, y)",
                "coordinate",
                &state,
                &[("s", "s".into()), ("x", "x".into()), ("y", "y".into())],
            ),
        ),
        ("fig3b".into(), path),
        (
            "fig3c".into(),
            chart(
                "normalisation check",
                "φ(1) - 1",
                &invariants,
                &[("φ(1) - 1", "normalization".into())],
            ),
        ),
    ];
    Ok(RunOutput {
        trajectory,
        invariants,
        state,
        figures,
        headline,
    })
}

fn execute_row(
    q: &Coefficients,
    init: &RowState,
    opts: &Options,
) -> Result<RunOutput, IntegrationError> {
    let traj = integrate(&RowSystem { q: *q }, &init.to_vec(), opts)?;
    let header = [complex_columns("lambda"), complex_columns("mu")].concat();
    let trajectory = trajectory_table(header.to_vec(), &traj);
    let norm0 = init.norm_sq();
    let mut invariants = Table::new(with_time(["norm_sq".into(), "norm_sq_drift".into()]));
    let mut state = Table::new(with_time(["s", "x", "y"].map(String::from)));
    for (t, y) in traj.iter() {
        let r = RowState::from_slice(y);
        let norm = r.norm_sq();
        invariants.push(vec![t, norm, norm - norm0]);
        // pure state φ(a) = (λ, μ) a (λ, μ)^† normalized
        let xy = r.lambda * r.mu.conj() / norm;
        let s = 0.5 * (r.mu.norm_sqr() - r.lambda.norm_sqr()) / norm;
        state.push(vec![t, s, xy.re, xy.im]);
    }
    let headline = vec![(
        "norm drift".to_string(),
        max_abs_column(&invariants, "norm_sq_drift"),
    )];
    let figures = vec![
        (
            "row_state".into(),
            chart(
                "pure state (s, x, y)",
                "coordinate",
                &state,
                &[("s", "s".into()), ("x", "x".into()), ("y", "y".into())],
            ),
        ),
        (
            "row_norm".into(),
            chart(
                "norm drift",
                "|λ|² + |μ|² - initial",
                &invariants,
                &[("drift", "norm_sq_drift".into())],
            ),
        ),
    ];
    Ok(RunOutput {
        trajectory,
        invariants,
        state,
        figures,
        headline,
    })
}

fn execute_geodesic(
    manifold: Manifold,
    init: &GeodesicState,
    opts: &Options,
) -> Result<RunOutput, IntegrationError> {
    let dim = init.x.len();
    let (traj, header) = match manifold {
        Manifold::Sphere => (
            integrate(
                &GeodesicSystem {
                    provider: &RoundSphere,
                },
                &init.to_vec(),
                opts,
            )?,
            ["theta", "phi", "theta_dot", "phi_dot"]
                .map(String::from)
                .to_vec(),
        ),
        Manifold::Flat => (
            integrate(
                &GeodesicSystem {
                    provider: &FlatSpace { dim },
                },
                &init.to_vec(),
                opts,
            )?,
            (0..dim)
                .map(|i| format!("x_{i}"))
                .chain((0..dim).map(|i| format!("v_{i}")))
                .collect(),
        ),
    };
    let speed_sq = |x: &[f64], v: &[f64]| match manifold {
        Manifold::Sphere => RoundSphere::speed_sq(x, v),
        Manifold::Flat => v.iter().map(|c| c * c).sum(),
    };
    let trajectory = trajectory_table(header.clone(), &traj);
    let speed0 = speed_sq(&init.x, &init.v);
    let mut invariants = Table::new(with_time(["speed_sq".into(), "speed_sq_drift".into()]));
    let st_header: Vec<String> = match manifold {
        Manifold::Sphere => ["X", "Y", "Z"].map(String::from).to_vec(),
        Manifold::Flat => header[..dim].to_vec(),
    };
    let mut state = Table::new(with_time(st_header));
    for (t, y) in traj.iter() {
        let (x, v) = y.split_at(dim);
        let sp = speed_sq(x, v);
        invariants.push(vec![t, sp, sp - speed0]);
        let mut row = vec![t];
        match manifold {
            Manifold::Sphere => row.extend(RoundSphere::embed(x)),
            Manifold::Flat => row.extend_from_slice(x),
        }
        state.push(row);
    }
    let headline = vec![(
        "speed² drift".to_string(),
        max_abs_column(&invariants, "speed_sq_drift"),
    )];
    let coords: Vec<(&str, String)> = header[..dim]
        .iter()
        .map(|h| (h.as_str(), h.clone()))
        .collect();
    let figures = vec![
        (
            "geodesic_coordinates".into(),
            chart("geodesic coordinates", "coordinate", &trajectory, &coords),
        ),
        (
            "geodesic_speed".into(),
            chart(
                "speed check",
                "g(v, v) - initial",
                &invariants,
                &[("drift", "speed_sq_drift".into())],
            ),
        ),
    ];
    Ok(RunOutput {
        trajectory,
        invariants,
        state,
        figures,
        headline,
    })
}

fn burgers_output(traj: &Trajectory, h: f64) -> RunOutput {
    let points = traj.states.first().map_or(0, Vec::len);
    let trajectory = trajectory_table((0..points).map(|j| format!("k_{j}")).collect(), traj);
    let integral = |y: &[f64]| h * y.iter().sum::<f64>();
    let integral0 = traj.states.first().map_or(0.0, |y| integral(y));
    let mut invariants = Table::new(with_time(
        ["integral", "integral_drift", "max_abs"].map(String::from),
    ));
    let mut state = Table::new(with_time(["k_min", "k_max"].map(String::from)));
    for (t, y) in traj.iter() {
        let i = integral(y);
        let max_abs = y.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
        invariants.push(vec![t, i, i - integral0, max_abs]);
        let lo = y.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        state.push(vec![t, lo, hi]);
    }
    let headline = vec![
        (
            "integral drift".to_string(),
            max_abs_column(&invariants, "integral_drift"),
        ),
        (
            "max |K|".to_string(),
            max_abs_column(&invariants, "max_abs"),
        ),
    ];
    let mut profiles = LineChart::new("velocity profiles", "x", "K");
    let last = traj.len().saturating_sub(1);
    let mut picks = vec![0, last / 2, last];
    picks.dedup();
    for k in picks {
        let Some(y) = traj.states.get(k) else {
            continue;
        };
        let pts = y
            .iter()
            .enumerate()
            .map(|(j, v)| (j as f64 * h, *v))
            .collect();
        profiles = profiles.with_series(Series::new(format!("t = {:.3}", traj.times[k]), pts));
    }
    let figures = vec![
        ("burgers_profiles".into(), profiles),
        (
            "burgers_integral".into(),
            chart(
                "integral check",
                "∫K dx - initial",
                &invariants,
                &[("drift", "integral_drift".into())],
            ),
        ),
    ];
    RunOutput {
        trajectory,
        invariants,
        state,
        figures,
        headline,
    }
}
