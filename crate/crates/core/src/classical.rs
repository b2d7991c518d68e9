//! Classical limit: geodesics from Christoffel symbols, the velocity-field
//! equation `∂K/∂t + K K' + Γ K² = 0` on a periodic line and its
//! characteristics, and a finite-difference check that a sampled curve is a
//! geodesic.

use thiserror::Error;

use crate::ode::{rk4_step, OdeSystem, Rk4Workspace};
use crate::par::{self, Execution};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassicalError {
    #[error("Christoffel symbols undefined at {0:?}")]
    Domain(Vec<f64>),
    #[error("need at least 3 curve samples, got {0}")]
    TooFewSamples(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("grid needs at least 16 points, got {0}")]
    GridTooSmall(usize),
    #[error("characteristic solve did not converge at x = {0}")]
    NoConvergence(f64),
}

pub trait ChristoffelProvider: Sync {
    fn dim(&self) -> usize;
    /// `Γ^i_{jk}` at `x`.
    fn gamma(&self, x: &[f64], i: usize, j: usize, k: usize) -> Result<f64, ClassicalError>;
}

#[derive(Debug, Clone, Copy)]
pub struct FlatSpace {
    pub dim: usize,
}

impl ChristoffelProvider for FlatSpace {
    fn dim(&self) -> usize {
        self.dim
    }

    fn gamma(&self, _x: &[f64], _i: usize, _j: usize, _k: usize) -> Result<f64, ClassicalError> {
        Ok(0.0)
    }
}

/// Unit 2-sphere in coordinates `(θ, φ)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct RoundSphere;

impl RoundSphere {
    /// `g(v, v) = θ'² + sin²θ φ'²`.
    pub fn speed_sq(x: &[f64], v: &[f64]) -> f64 {
        v[0] * v[0] + x[0].sin().powi(2) * v[1] * v[1]
    }

    /// Maps `(θ, φ)` to the embedded point in R³.
    pub fn embed(x: &[f64]) -> [f64; 3] {
        let (st, ct) = x[0].sin_cos();
        let (sp, cp) = x[1].sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Inverse of [`RoundSphere::embed`] with `φ` in `(-π, π]`.
    pub fn coordinates(p: [f64; 3]) -> [f64; 2] {
        let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        [(p[2] / r).clamp(-1.0, 1.0).acos(), p[1].atan2(p[0])]
    }
}

impl ChristoffelProvider for RoundSphere {
    fn dim(&self) -> usize {
        2
    }

    fn gamma(&self, x: &[f64], i: usize, j: usize, k: usize) -> Result<f64, ClassicalError> {
        let (s, c) = x[0].sin_cos();
        match (i, j, k) {
            (0, 1, 1) => Ok(-s * c),
            (1, 0, 1) | (1, 1, 0) => {
                if s.abs() < 1e-300 {
                    Err(ClassicalError::Domain(x.to_vec()))
                } else {
                    Ok(c / s)
                }
            }
            _ => Ok(0.0),
        }
    }
}

/// A connection on the real line given by one function `Γ(x)`.
pub struct LineConnection<F> {
    pub gamma: F,
}

impl<F: Fn(f64) -> f64 + Sync> ChristoffelProvider for LineConnection<F> {
    fn dim(&self) -> usize {
        1
    }

    fn gamma(&self, x: &[f64], _i: usize, _j: usize, _k: usize) -> Result<f64, ClassicalError> {
        Ok((self.gamma)(x[0]))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicState {
    pub x: Vec<f64>,
    pub v: Vec<f64>,
}

impl GeodesicState {
    pub fn to_vec(&self) -> Vec<f64> {
        self.x.iter().chain(&self.v).copied().collect()
    }

    pub fn from_slice(y: &[f64]) -> Self {
        let d = y.len() / 2;
        Self {
            x: y[..d].to_vec(),
            v: y[d..].to_vec(),
        }
    }
}

/// `(dx/dt, dv/dt) = (v, -Γ^i_{jk} v^j v^k)`.
pub fn geodesic_rhs<P: ChristoffelProvider + ?Sized>(
    state: &GeodesicState,
    provider: &P,
) -> Result<(Vec<f64>, Vec<f64>), ClassicalError> {
    let d = provider.dim();
    if state.x.len() != d || state.v.len() != d {
        return Err(ClassicalError::Dimension {
            expected: d,
            got: state.x.len(),
        });
    }
    let mut acc = vec![0.0; d];
    for (i, a) in acc.iter_mut().enumerate() {
        for j in 0..d {
            for k in 0..d {
                *a -= provider.gamma(&state.x, i, j, k)? * state.v[j] * state.v[k];
            }
        }
    }
    Ok((state.v.clone(), acc))
}

/// Geodesic equation as an ODE over `(x, v)`. A Christoffel domain error
/// poisons the derivative with NaN, which the integrator reports as a blowup.
pub struct GeodesicSystem<'a, P: ?Sized> {
    pub provider: &'a P,
}

impl<P: ChristoffelProvider + ?Sized> OdeSystem for GeodesicSystem<'_, P> {
    fn dim(&self) -> usize {
        2 * self.provider.dim()
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        let d = self.provider.dim();
        match geodesic_rhs(&GeodesicState::from_slice(y), self.provider) {
            Ok((dx, dv)) => {
                dy[..d].copy_from_slice(&dx);
                dy[d..].copy_from_slice(&dv);
            }
            Err(_) => dy.fill(f64::NAN),
        }
    }
}

/// Max over interior samples of `|γ'' + Γ γ' γ'|`, using centered second
/// differences on uniformly spaced samples.
pub fn pullback_geodesic_check<P: ChristoffelProvider + ?Sized>(
    samples: &[Vec<f64>],
    dt: f64,
    provider: &P,
) -> Result<f64, ClassicalError> {
    if samples.len() < 3 {
        return Err(ClassicalError::TooFewSamples(samples.len()));
    }
    let d = provider.dim();
    if let Some(bad) = samples.iter().find(|s| s.len() != d) {
        return Err(ClassicalError::Dimension {
            expected: d,
            got: bad.len(),
        });
    }
    let mut worst: f64 = 0.0;
    for w in samples.windows(3) {
        let (prev, cur, next) = (&w[0], &w[1], &w[2]);
        let vel: Vec<f64> = (0..d).map(|i| (next[i] - prev[i]) / (2.0 * dt)).collect();
        for i in 0..d {
            let acc = (next[i] - 2.0 * cur[i] + prev[i]) / (dt * dt);
            let mut r = acc;
            for j in 0..d {
                for k in 0..d {
                    r += provider.gamma(cur, i, j, k)? * vel[j] * vel[k];
                }
            }
            worst = worst.max(r.abs());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stencil {
    Second,
    Fourth,
}

/// Samples of `K` on the periodic grid `x_j = 2π j / N`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub values: Vec<f64>,
    pub stencil: Stencil,
}

impl GridField {
    pub const DEFAULT_POINTS: usize = 256;

    pub fn new(values: Vec<f64>, stencil: Stencil) -> Result<Self, ClassicalError> {
        if values.len() < 16 {
            return Err(ClassicalError::GridTooSmall(values.len()));
        }
        Ok(Self { values, stencil })
    }

    pub fn from_fn(
        n: usize,
        stencil: Stencil,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self, ClassicalError> {
        let h = grid_spacing(n);
        Self::new((0..n).map(|j| f(j as f64 * h)).collect(), stencil)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        grid_spacing(self.len())
    }

    pub fn x(&self, j: usize) -> f64 {
        j as f64 * self.spacing()
    }

    /// Four-point Lagrange interpolation, periodic.
    pub fn interpolate(&self, x: f64) -> f64 {
        let n = self.len() as i64;
        let h = self.spacing();
        let u = x.rem_euclid(std::f64::consts::TAU) / h;
        let j = u.floor() as i64;
        let s = u - j as f64;
        let at = |k: i64| self.values[k.rem_euclid(n) as usize];
        let (p0, p1, p2, p3) = (at(j - 1), at(j), at(j + 1), at(j + 2));
        // nodes at s = -1, 0, 1, 2
        -p0 * s * (s - 1.0) * (s - 2.0) / 6.0 + p1 * (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0
            - p2 * (s + 1.0) * s * (s - 2.0) / 2.0
            + p3 * (s + 1.0) * s * (s - 1.0) / 6.0
    }
}

fn grid_spacing(n: usize) -> f64 {
    std::f64::consts::TAU / n as f64
}

fn derivative_at(values: &[f64], j: usize, h: f64, stencil: Stencil) -> f64 {
    let n = values.len();
    let at = |off: isize| values[(j as isize + off).rem_euclid(n as isize) as usize];
    match stencil {
        Stencil::Second => (at(1) - at(-1)) / (2.0 * h),
        Stencil::Fourth => (-at(2) + 8.0 * at(1) - 8.0 * at(-1) + at(-2)) / (12.0 * h),
    }
}

/// Centered finite-difference derivative on the periodic grid.
pub fn grid_derivative(field: &GridField) -> Vec<f64> {
    let h = field.spacing();
    (0..field.len())
        .map(|j| derivative_at(&field.values, j, h, field.stencil))
        .collect()
}

/// `∂K/∂t = -K K' - Γ(x) K²` on the grid.
pub fn burgers_rhs(field: &GridField, gamma: &(dyn Fn(f64) -> f64 + Sync)) -> Vec<f64> {
    burgers_rhs_with(field, gamma, Execution::Sequential)
}

pub fn burgers_rhs_with(
    field: &GridField,
    gamma: &(dyn Fn(f64) -> f64 + Sync),
    exec: Execution,
) -> Vec<f64> {
    let h = field.spacing();
    let values = &field.values;
    let stencil = field.stencil;
    par::map_range(exec, values.len(), |j| {
        let k = values[j];
        -k * derivative_at(values, j, h, stencil) - gamma(j as f64 * h) * k * k
    })
}

/// The velocity-field equation on a periodic grid as an ODE over the samples.
pub struct BurgersSystem<G> {
    pub points: usize,
    pub stencil: Stencil,
    pub gamma: G,
    pub exec: Execution,
}

impl<G: Fn(f64) -> f64 + Sync> OdeSystem for BurgersSystem<G> {
    fn dim(&self) -> usize {
        self.points
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        let h = grid_spacing(self.points);
        let stencil = self.stencil;
        let gamma = &self.gamma;
        let out = par::map_range(self.exec, y.len(), |j| {
            let k = y[j];
            -k * derivative_at(y, j, h, stencil) - gamma(j as f64 * h) * k * k
        });
        dy.copy_from_slice(&out);
    }
}

/// Flat-space characteristics: the value at `(x, t)` of the solution with
/// initial datum `k0`, found by solving `x0 + k0(x0) t = x` with Newton's
/// method. Valid before characteristics cross.
pub fn characteristic_solution(
    k0: impl Fn(f64) -> f64,
    dk0: impl Fn(f64) -> f64,
    x: f64,
    t: f64,
) -> Result<f64, ClassicalError> {
    let mut x0 = x - k0(x) * t;
    for _ in 0..100 {
        let f = x0 + k0(x0) * t - x;
        let df = 1.0 + dk0(x0) * t;
        let dx = f / df;
        x0 -= dx;
        if dx.abs() < 1e-15 * (1.0 + x0.abs()) {
            return Ok(k0(x0));
        }
    }
    Err(ClassicalError::NoConvergence(x))
}

/// A characteristic `(t, x, K)` of the velocity-field equation:
/// `dx/dt = K`, `dK/dt = -Γ(x) K²`.
pub fn trace_characteristic(
    x0: f64,
    k0: f64,
    gamma: impl Fn(f64) -> f64,
    t_end: f64,
    step: f64,
) -> Vec<(f64, f64, f64)> {
    struct Char<F>(F);
    impl<F: Fn(f64) -> f64> OdeSystem for Char<F> {
        fn dim(&self) -> usize {
            2
        }
        fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
            dy[0] = y[1];
            dy[1] = -(self.0)(y[0]) * y[1] * y[1];
        }
    }
    let sys = Char(gamma);
    let n = ((t_end / step) - 1e-9).ceil().max(1.0) as usize;
    let dt = t_end / n as f64;
    let mut ws = Rk4Workspace::new(2);
    let mut y = [x0, k0];
    let mut next = [0.0; 2];
    let mut out = Vec::with_capacity(n + 1);
    out.push((0.0, x0, k0));
    for s in 0..n {
        rk4_step(&sys, s as f64 * dt, &y, dt, &mut next, &mut ws);
        y = next;
        out.push(((s + 1) as f64 * dt, y[0], y[1]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::{integrate, Options};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn flat_geodesic_is_a_line() {
        let flat = FlatSpace { dim: 2 };
        let sys = GeodesicSystem { provider: &flat };
        let traj = integrate(&sys, &[0.0, 0.0, 1.0, 0.0], &Options::rk4(3.0, 1e-2)).unwrap();
        for (t, y) in traj.iter() {
            assert!((y[0] - t).abs() < 1e-12 && y[1] == 0.0);
        }
    }

    #[test]
    fn sphere_symbols_and_domain_error() {
        let x = [FRAC_PI_4, 0.3];
        assert!((RoundSphere.gamma(&x, 0, 1, 1).unwrap() + 0.5).abs() < 1e-15);
        assert!((RoundSphere.gamma(&x, 1, 0, 1).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(RoundSphere.gamma(&x, 0, 0, 0).unwrap(), 0.0);
        let pole = GeodesicState {
            x: vec![0.0, 0.0],
            v: vec![0.0, 1.0],
        };
        assert!(matches!(
            geodesic_rhs(&pole, &RoundSphere),
            Err(ClassicalError::Domain(_))
        ));
    }

    #[test]
    fn equator_is_invariant() {
        let sys = GeodesicSystem {
            provider: &RoundSphere,
        };
        let traj = integrate(&sys, &[FRAC_PI_2, 0.0, 0.0, 1.0], &Options::rk4(10.0, 1e-3)).unwrap();
        let drift = traj
            .iter()
            .map(|(_, y)| (y[0] - FRAC_PI_2).abs())
            .fold(0.0, f64::max);
        assert!(drift <= 1e-8);
    }

    #[test]
    fn pullback_check_examples() {
        let dt = 1e-2;
        let line: Vec<Vec<f64>> = (0..50)
            .map(|k| vec![0.3 * k as f64 * dt, -1.0 + k as f64 * dt])
            .collect();
        assert!(pullback_geodesic_check(&line, dt, &FlatSpace { dim: 2 }).unwrap() <= 1e-8);

        // unit-speed circle of latitude θ = π/4 is not a geodesic
        let w = 2f64.sqrt();
        let lat: Vec<Vec<f64>> = (0..50)
            .map(|k| vec![FRAC_PI_4, w * k as f64 * dt])
            .collect();
        let r = pullback_geodesic_check(&lat, dt, &RoundSphere).unwrap();
        assert!(r >= 0.1 && (r - 1.0).abs() < 1e-3);

        assert_eq!(
            pullback_geodesic_check(&line[..2], dt, &FlatSpace { dim: 2 }),
            Err(ClassicalError::TooFewSamples(2))
        );
    }

    #[test]
    fn constant_field_is_stationary() {
        let f = GridField::from_fn(32, Stencil::Fourth, |_| 0.7).unwrap();
        assert!(burgers_rhs(&f, &|_| 0.0).iter().all(|v| v.abs() < 1e-15));
        assert_eq!(
            GridField::new(vec![0.0; 8], Stencil::Second),
            Err(ClassicalError::GridTooSmall(8))
        );
    }

    #[test]
    fn fourth_order_derivative_is_accurate() {
        let f = GridField::from_fn(64, Stencil::Fourth, f64::sin).unwrap();
        let d = grid_derivative(&f);
        let err = d
            .iter()
            .enumerate()
            .map(|(j, v)| (v - f.x(j).cos()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-5, "{err}");
    }

    #[test]
    fn interpolation_is_periodic_and_accurate() {
        let f = GridField::from_fn(128, Stencil::Fourth, |x| (2.0 * x).cos()).unwrap();
        for x in [0.0, 0.1234, PI, 6.2, -0.5, 7.0] {
            assert!((f.interpolate(x) - (2.0 * x).cos()).abs() < 1e-5);
        }
    }

    #[test]
    fn characteristic_solution_at_time_zero() {
        let v = characteristic_solution(|x| 0.1 * x.sin(), |x| 0.1 * x.cos(), 1.3, 0.0).unwrap();
        assert!((v - 0.1 * 1.3f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn characteristic_with_constant_gamma() {
        // dK/dt = -g K² gives K = K0 / (1 + g K0 t)
        let path = trace_characteristic(0.0, 0.5, |_| 0.2, 1.0, 1e-3);
        let (t, _, k) = *path.last().unwrap();
        assert!((k - 0.5 / (1.0 + 0.2 * 0.5 * t)).abs() < 1e-12);
    }
}
