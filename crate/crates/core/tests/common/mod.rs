#![allow(dead_code)]

pub mod appendix;

use ncflow::{Complex, Mat2, ZnElement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex(rng: &mut impl Rng) -> Complex {
    Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn zn(rng: &mut impl Rng, n: usize) -> ZnElement {
    ZnElement::from_fn(n, |_| complex(rng))
}

pub fn mat2(rng: &mut impl Rng) -> Mat2 {
    Mat2::new(complex(rng), complex(rng), complex(rng), complex(rng))
}

pub fn max_dev(a: &[Complex], b: &[Complex]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

use ncflow::calculus::{d_m2, d_zn};
use ncflow::ode::{rk4_advance, OdeSystem};
use ncflow::transport::{
    velocity_functional_m2, velocity_functional_zn, M2Geodesic, M2GeodesicState, ZnGeodesic,
    ZnGeodesicState,
};

/// Eleven sample times spread over `[0.5, 9.5]`.
pub fn identity_times() -> Vec<f64> {
    (0..11).map(|k| 0.5 + 0.9 * k as f64).collect()
}

/// Walks the trajectory through `times`; at each one compares the centered
/// difference of `φ(a)` (half-width `h`) with `V(da)` for every basis `a`.
/// Returns the largest mismatch.
fn velocity_identity<S: OdeSystem>(
    sys: &S,
    y0: &[f64],
    times: &[f64],
    h: f64,
    mismatch: impl Fn(&[f64], &[f64], &[f64], f64) -> f64,
) -> f64 {
    let (mut t, mut y) = (0.0, y0.to_vec());
    let mut worst: f64 = 0.0;
    for &tk in times {
        y = rk4_advance(sys, t, &y, tk - t, 1e-3);
        t = tk;
        let fwd = rk4_advance(sys, t, &y, h, h);
        let back = rk4_advance(sys, t, &y, -h, h);
        worst = worst.max(mismatch(&y, &fwd, &back, h));
    }
    worst
}

pub fn velocity_identity_zn(init: &ZnGeodesicState, h: f64) -> f64 {
    let n = init.order();
    velocity_identity(
        &ZnGeodesic { n },
        &init.to_vec(),
        &identity_times(),
        h,
        |y, f, b, h| {
            let (s, sf, sb) = (
                ZnGeodesicState::from_slice(n, y),
                ZnGeodesicState::from_slice(n, f),
                ZnGeodesicState::from_slice(n, b),
            );
            (0..n)
                .map(|i| {
                    let a = ZnElement::delta(n, i as i64);
                    let fd = (sf.phi(&a) - sb.phi(&a)) / (2.0 * h);
                    (fd - velocity_functional_zn(&s.m, &s.k, &d_zn(&a))).norm()
                })
                .fold(0.0, f64::max)
        },
    )
}

pub fn velocity_identity_m2(init: &M2GeodesicState, h: f64) -> f64 {
    velocity_identity(
        &M2Geodesic,
        &init.to_vec(),
        &identity_times(),
        h,
        |y, f, b, h| {
            let (s, sf, sb) = (
                M2GeodesicState::from_slice(y),
                M2GeodesicState::from_slice(f),
                M2GeodesicState::from_slice(b),
            );
            Mat2::basis()
                .iter()
                .map(|a| {
                    let fd = (sf.phi(a) - sb.phi(a)) / (2.0 * h);
                    (fd - velocity_functional_m2(&s.m, &s.k, &d_m2(a))).norm()
                })
                .fold(0.0, f64::max)
        },
    )
}

use ncflow::classical::{characteristic_solution, BurgersSystem, GridField, RoundSphere, Stencil};
use ncflow::mobius::{integrate_riccati, mobius_exact, SpherePoint};
use ncflow::ode::{integrate, Options};

/// Largest chart distance between the integrated Riccati flow and the
/// closed-form Möbius action, over every step of `[0, t_end]`.
pub fn riccati_deviation(q1: Complex, q2: Complex, z0: SpherePoint, t_end: f64, step: f64) -> f64 {
    integrate_riccati(z0, q1, q2, t_end, step)
        .unwrap()
        .into_iter()
        .map(|(t, z)| mobius_exact(z0, q1, q2, t).chart_distance(&z))
        .fold(0.0, f64::max)
}

/// Exact great circle through `(θ0, φ0)` with initial coordinate velocity
/// `v0`, returned as `(θ, φ)` at `t`. Built from the embedding, independent
/// of any Christoffel symbols.
pub fn great_circle(x0: [f64; 2], v0: [f64; 2], t: f64) -> [f64; 2] {
    let (st, ct) = x0[0].sin_cos();
    let (sp, cp) = x0[1].sin_cos();
    let p = [st * cp, st * sp, ct];
    // ∂/∂θ and ∂/∂φ of the embedding
    let e_theta = [ct * cp, ct * sp, -st];
    let e_phi = [-st * sp, st * cp, 0.0];
    let u: Vec<f64> = (0..3)
        .map(|i| v0[0] * e_theta[i] + v0[1] * e_phi[i])
        .collect();
    let speed = u.iter().map(|c| c * c).sum::<f64>().sqrt();
    let (s, c) = (speed * t).sin_cos();
    let q = [0, 1, 2].map(|i| c * p[i] + s * u[i] / speed);
    RoundSphere::coordinates(q)
}

/// Max grid error against the flat characteristics oracle for
/// `K(x, 0) = eps · sin x`, sampled at several times up to `t_end`.
pub fn burgers_vs_characteristics(eps: f64, points: usize, stencil: Stencil, t_end: f64) -> f64 {
    let init = GridField::from_fn(points, stencil, |x| eps * x.sin()).unwrap();
    let sys = BurgersSystem {
        points,
        stencil,
        gamma: |_x: f64| 0.0,
        exec: ncflow::Execution::Sequential,
    };
    let opts = Options::rk4(t_end, 1e-3).with_stride(250);
    let traj = integrate(&sys, &init.values, &opts).unwrap();
    let mut worst: f64 = 0.0;
    for (t, y) in traj.iter() {
        for (j, v) in y.iter().enumerate() {
            let exact = characteristic_solution(|x| eps * x.sin(), |x| eps * x.cos(), init.x(j), t)
                .unwrap();
            worst = worst.max((v - exact).abs());
        }
    }
    worst
}
