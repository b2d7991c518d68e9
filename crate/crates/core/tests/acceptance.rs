//! One PASS/FAIL line per acceptance criterion; exits nonzero on any failure.

mod common;

use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use common::{
    appendix, burgers_vs_characteristics, complex, great_circle, max_dev, riccati_deviation, rng,
    velocity_identity_m2, velocity_identity_zn,
};
use ncflow::classical::{pullback_geodesic_check, GeodesicSystem, RoundSphere, Stencil};
use ncflow::flow::{m2_rhs, zn_rhs};
use ncflow::mobius::{Coefficients, RowState, RowSystem, SpherePoint};
use ncflow::ode::{integrate, Options};
use ncflow::transport::{
    m2_transport_rhs, zn_transport_rhs, M2GeodesicState, ZnGeodesic, ZnGeodesicState,
};
use ncflow::{presets, Complex, M2VectorField, Mat2, ScenarioConfig, ZnElement, ZnVectorField};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("ncflow-acceptance-{}-{name}", std::process::id()))
}

fn column(dir: &Path, file: &str, name: &str) -> Vec<f64> {
    let text = std::fs::read_to_string(dir.join(file)).expect("csv written");
    let mut lines = text.lines();
    let idx = lines
        .next()
        .unwrap()
        .split(',')
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("{file} has no column {name}"));
    lines
        .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap())
        .collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m: f64, x| m.max(x.abs()))
}

/// Runs a preset at every step (stride 1) through the full writer.
fn run_preset(name: &str) -> (PathBuf, f64) {
    let dir = scratch(name);
    let mut config = ScenarioConfig::preset(name).unwrap();
    config.stride = 1;
    let start = Instant::now();
    ncflow::run(&config, Some(&dir)).expect("preset runs");
    (dir, start.elapsed().as_secs_f64())
}

fn fig1_reproduction(dir: &Path, seconds: f64) -> Outcome {
    let top = column(dir, "state.csv", "phi_cumulative_2");
    let have_curves =
        (0..3).all(|k| column(dir, "state.csv", &format!("phi_cumulative_{k}")).len() == 10001);
    let norm = max_abs(&top.iter().map(|v| v - 1.0).collect::<Vec<_>>());
    let reality = (0..3)
        .map(|i| max_abs(&column(dir, "invariants.csv", &format!("reality_{i}_abs"))))
        .fold(0.0, f64::max);
    let figures = ["fig1a", "fig1b", "fig1c"]
        .iter()
        .all(|f| dir.join(format!("{f}.svg")).is_file());
    outcome(
        have_curves && figures && norm <= 1e-6 && reality <= 1e-6 && seconds < 5.0,
        format!("3 cumulative curves x 10001 samples; max|φ(1)-1| = {norm:.2e}; max reality = {reality:.2e}; runtime {seconds:.2} s"),
    )
}

fn z3_conserved(dir: &Path) -> Outcome {
    let mut modulus: f64 = 0.0;
    for i in 0..3 {
        let col = column(dir, "invariants.csv", &format!("k_plus_{i}_abs"));
        modulus = modulus.max(max_abs(&col.iter().map(|v| v - 1.0).collect::<Vec<_>>()));
    }
    let braiding = (0..3)
        .map(|i| max_abs(&column(dir, "invariants.csv", &format!("braiding_{i}_abs"))))
        .fold(0.0, f64::max);
    let k = presets::fig1_field();
    let products = (0..3)
        .map(|i| (k.minus.at(i) * k.plus.at(i + 1) + 1.0).norm())
        .fold(0.0, f64::max);
    outcome(
        modulus <= 1e-6 && braiding <= 1e-6 && products <= 1e-15,
        format!("max||K+(i)|-1| = {modulus:.2e}; max braiding = {braiding:.2e}; max|K-(i)K+(i+1)+1| at t=0 = {products:.1e}"),
    )
}

fn oracle_equivalence() -> Outcome {
    let mut r = rng(2024);
    let mut worst_z: f64 = 0.0;
    let mut worst_m: f64 = 0.0;
    for _ in 0..100 {
        let v: Vec<Complex> = (0..9).map(|_| complex(&mut r)).collect();
        let (kp, km, m) = ([v[0], v[1], v[2]], [v[3], v[4], v[5]], [v[6], v[7], v[8]]);
        let field = ZnVectorField {
            plus: ZnElement::new(kp.to_vec()).unwrap(),
            minus: ZnElement::new(km.to_vec()).unwrap(),
        };
        let dk = zn_rhs(&field);
        let dm = zn_transport_rhs(&ZnElement::new(m.to_vec()).unwrap(), &field);
        let (ep, em, emm) = appendix::z3(kp, km, m);
        worst_z = worst_z
            .max(max_dev(dk.plus.samples(), &ep))
            .max(max_dev(dk.minus.samples(), &em))
            .max(max_dev(dm.samples(), &emm));

        let w: Vec<Complex> = (0..12).map(|_| complex(&mut r)).collect();
        let (k1, k2, m) = (
            [w[0], w[1], w[2], w[3]],
            [w[4], w[5], w[6], w[7]],
            [w[8], w[9], w[10], w[11]],
        );
        let field = M2VectorField {
            k1: Mat2::from_flat(k1),
            k2: Mat2::from_flat(k2),
        };
        let dk = m2_rhs(&field);
        let dm = m2_transport_rhs(&Mat2::from_flat(m), &field);
        let (e1, e2, em) = appendix::m2(k1, k2, m);
        worst_m = worst_m
            .max(max_dev(&dk.k1.flat(), &e1))
            .max(max_dev(&dk.k2.flat(), &e2))
            .max(max_dev(&dm.flat(), &em));
    }
    outcome(
        worst_z <= 1e-13 && worst_m <= 1e-13,
        format!("100 random states each; max deviation Z3 = {worst_z:.2e}, M2 = {worst_m:.2e}"),
    )
}

fn fig23_reproduction(dir: &Path) -> Outcome {
    let comm = max_abs(&column(dir, "invariants.csv", "commutator_norm"));
    let norm = max_abs(&column(dir, "invariants.csv", "normalization"));
    let (s, x, y) = (
        column(dir, "state.csv", "s"),
        column(dir, "state.csv", "x"),
        column(dir, "state.csv", "y"),
    );
    let max_y = max_abs(&y);
    let excess = (0..s.len())
        .map(|k| s[k] * s[k] + x[k] * x[k] + y[k] * y[k] - 0.25)
        .fold(f64::NEG_INFINITY, f64::max);
    let start = (s[0] + 1.0 / 3.0)
        .abs()
        .max((x[0] - 1.0 / 6.0).abs())
        .max(y[0].abs());
    let figures = ["fig2a", "fig2b", "fig2c", "fig3a", "fig3b", "fig3c"]
        .iter()
        .all(|f| dir.join(format!("{f}.svg")).is_file());
    outcome(
        figures && comm <= 1e-6 && norm <= 1e-6 && max_y <= 1e-8 && excess <= 1e-8 && start <= 1e-12,
        format!(
            "max||[K1,K2]|| = {comm:.2e}; max|φ(1)-1| = {norm:.2e}; max|y| = {max_y:.1e}; max(r²-¼) = {excess:.2e}; initial point error {start:.1e}"
        ),
    )
}

fn velocity_identity() -> Outcome {
    let dz = velocity_identity_zn(
        &ZnGeodesicState {
            k: presets::fig1_field(),
            m: presets::fig1_m(),
        },
        1e-4,
    );
    let dm = velocity_identity_m2(
        &M2GeodesicState {
            k: presets::fig2_field(),
            m: presets::fig2_m(),
        },
        1e-4,
    );
    outcome(
        dz <= 1e-6 && dm <= 1e-6,
        format!("h = 1e-4, 11 times, all basis elements; max|Δφ/Δt - V(da)| Z3 = {dz:.2e}, M2 = {dm:.2e}"),
    )
}

fn mobius_oracle() -> Outcome {
    let z0 = SpherePoint::Finite(Complex::new(0.3, 0.2));
    let mut details = Vec::new();
    let mut pass = true;
    for (q1, q2) in [(1.0, 1.0), (1.0, -1.0), (0.0, 1.0)] {
        let d = riccati_deviation(Complex::new(q1, 0.0), Complex::new(q2, 0.0), z0, 2.0, 1e-3);
        pass &= d <= 1e-6;
        details.push(format!("({q1},{q2}): {d:.1e}"));
    }
    let q1 = Complex::new(0.8, -0.4);
    let q = Coefficients::new(Complex::new(0.0, 0.7), q1, -q1.conj());
    let init = RowState {
        lambda: Complex::new(0.6, 0.1),
        mu: Complex::new(-0.3, 0.7),
    };
    let traj = integrate(&RowSystem { q }, &init.to_vec(), &Options::rk4(2.0, 1e-3)).unwrap();
    let drift = traj
        .iter()
        .map(|(_, y)| (RowState::from_slice(y).norm_sq() - init.norm_sq()).abs())
        .fold(0.0, f64::max);
    pass &= drift <= 1e-8;
    outcome(
        pass,
        format!(
            "t in [0,2], chart distance {}; norm drift {drift:.1e}",
            details.join(", ")
        ),
    )
}

fn classical_recovery() -> Outcome {
    let sphere = GeodesicSystem {
        provider: &RoundSphere,
    };
    let (x0, v0) = ([1.0, 0.0], [0.3, 1.0]);
    let traj = integrate(
        &sphere,
        &[x0[0], x0[1], v0[0], v0[1]],
        &Options::rk4(10.0, 1e-3),
    )
    .unwrap();
    let s0 = RoundSphere::speed_sq(&x0, &v0);
    let speed = traj
        .iter()
        .map(|(_, y)| (RoundSphere::speed_sq(&y[..2], &y[2..]) - s0).abs())
        .fold(0.0, f64::max);

    let traj = integrate(
        &sphere,
        &[FRAC_PI_2, 0.0, 0.0, 1.0],
        &Options::rk4(10.0, 1e-3),
    )
    .unwrap();
    let equator = traj
        .iter()
        .map(|(_, y)| (y[0] - FRAC_PI_2).abs())
        .fold(0.0, f64::max);

    let burgers = burgers_vs_characteristics(0.1, 256, Stencil::Fourth, 1.0);

    let (gx, gv) = ([1.1, 0.2], [0.4, 0.9]);
    let residuals: Vec<f64> = [1e-2, 5e-3, 2.5e-3]
        .iter()
        .map(|&dt: &f64| {
            let samples: Vec<Vec<f64>> = (0..=(1.0 / dt).round() as usize)
                .map(|k| great_circle(gx, gv, k as f64 * dt).to_vec())
                .collect();
            pullback_geodesic_check(&samples, dt, &RoundSphere).unwrap()
        })
        .collect();
    let orders: Vec<f64> = residuals.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let second_order = orders.iter().all(|p| (p - 2.0).abs() <= 0.2);
    outcome(
        speed <= 1e-6 && equator <= 1e-8 && burgers <= 1e-4 && second_order,
        format!(
            "speed² drift {speed:.1e}; equator drift {equator:.1e}; Burgers vs characteristics {burgers:.1e}; pullback residuals {:.2e}/{:.2e}/{:.2e}, observed orders {:.3}, {:.3}",
            residuals[0], residuals[1], residuals[2], orders[0], orders[1]
        ),
    )
}

fn integrator_order() -> Outcome {
    let sys = ZnGeodesic { n: 3 };
    let y0 = ZnGeodesicState {
        k: presets::fig1_field(),
        m: presets::fig1_m(),
    }
    .to_vec();
    let final_state = |h: f64| {
        integrate(&sys, &y0, &Options::rk4(10.0, h))
            .unwrap()
            .last()
            .unwrap()
            .1
            .to_vec()
    };
    let reference = final_state(5e-4);
    let error = |h: f64| {
        final_state(h)
            .iter()
            .zip(&reference)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    };
    let (e1, e2) = (error(0.02), error(0.01));
    let ratio = e1 / e2;
    outcome(
        (ratio - 16.0).abs() <= 0.2 * 16.0,
        format!("t in [0,10], h = 0.02 vs 0.01 against h = 5e-4: errors {e1:.3e} / {e2:.3e}, ratio {ratio:.2}"),
    )
}

fn main() -> ExitCode {
    let (fig1_dir, fig1_seconds) = run_preset("paper-fig1");
    let (fig2_dir, _) = run_preset("paper-fig2");

    let results = [
        (
            "Z3 state curves, normalisation and reality",
            fig1_reproduction(&fig1_dir, fig1_seconds),
        ),
        ("Z3 conserved moduli and braiding", z3_conserved(&fig1_dir)),
        ("transcribed NDSolve oracle", oracle_equivalence()),
        (
            "M2 commutator, normalisation and Bloch path",
            fig23_reproduction(&fig2_dir),
        ),
        ("velocity identity dφ(a)/dt = V(da)", velocity_identity()),
        ("Möbius flow vs closed form", mobius_oracle()),
        ("classical recovery", classical_recovery()),
        ("RK4 global order", integrator_order()),
    ];
    let _ = std::fs::remove_dir_all(&fig1_dir);
    let _ = std::fs::remove_dir_all(&fig2_dir);

    let mut failures = 0;
    for (k, (name, o)) in results.iter().enumerate() {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        failures += usize::from(!o.pass);
        println!("{tag} [{}] {name}: {}", k + 1, o.detail);
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failures,
        results.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
