//! Transport on the row module `Row²(C)` over `M_2(C)` and the induced
//! Möbius flow on the Riemann sphere of pure states.
//!
//! With `m = (λ, μ)` the transport equation is linear,
//! `(λ', μ') = (Q_0 λ + Q_2 μ, Q_0 μ + Q_1 λ)`, and `z = λ/μ` obeys the
//! Riccati equation `z' = Q_2 - Q_1 z²`. The time-`t` map is the Möbius
//! action of `exp(t [[0, Q_2], [Q_1, 0]])`.

use thiserror::Error;

use crate::algebra::{Complex, ONE, ZERO};
use crate::flow::{read_complex, write_complex};
use crate::ode::{rk4_step, OdeSystem, Rk4Workspace};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MobiusError {
    #[error("point at infinity passed to the finite chart")]
    Pole,
    #[error("invalid step or span")]
    InvalidSpan,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub q0: Complex,
    pub q1: Complex,
    pub q2: Complex,
}

impl Coefficients {
    pub fn new(q0: Complex, q1: Complex, q2: Complex) -> Self {
        Self { q0, q1, q2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowState {
    pub lambda: Complex,
    pub mu: Complex,
}

impl RowState {
    pub fn norm_sq(&self) -> f64 {
        self.lambda.norm_sqr() + self.mu.norm_sqr()
    }

    pub fn to_sphere(&self) -> Option<SpherePoint> {
        SpherePoint::from_homogeneous(self.lambda, self.mu)
    }
}

/// A point of `C ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpherePoint {
    Finite(Complex),
    Infinity,
}

impl SpherePoint {
    /// `λ/μ`; `None` when both vanish.
    pub fn from_homogeneous(lambda: Complex, mu: Complex) -> Option<Self> {
        if mu == ZERO {
            (lambda != ZERO).then_some(SpherePoint::Infinity)
        } else {
            Some(SpherePoint::Finite(lambda / mu))
        }
    }

    pub fn homogeneous(&self) -> (Complex, Complex) {
        match *self {
            SpherePoint::Finite(z) => (z, ONE),
            SpherePoint::Infinity => (ONE, ZERO),
        }
    }

    /// Unit vector on the sphere of radius 1 under stereographic projection.
    pub fn to_unit_sphere(&self) -> [f64; 3] {
        match *self {
            SpherePoint::Infinity => [0.0, 0.0, 1.0],
            SpherePoint::Finite(z) => {
                let r2 = z.norm_sqr();
                let d = 1.0 + r2;
                [2.0 * z.re / d, 2.0 * z.im / d, (r2 - 1.0) / d]
            }
        }
    }

    /// Chordal distance, bounded by 2.
    pub fn chordal_distance(&self, other: &Self) -> f64 {
        let (a, b) = (self.to_unit_sphere(), other.to_unit_sphere());
        a.iter()
            .zip(&b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }

    /// Distance measured in whichever of the charts `z` or `1/z` keeps
    /// `self` inside the closed unit disc.
    pub fn chart_distance(&self, other: &Self) -> f64 {
        let (l1, m1) = self.homogeneous();
        let (l2, m2) = other.homogeneous();
        if l1.norm() <= m1.norm() {
            if m2 == ZERO {
                return f64::INFINITY;
            }
            (l1 / m1 - l2 / m2).norm()
        } else {
            if l2 == ZERO {
                return f64::INFINITY;
            }
            (m1 / l1 - m2 / l2).norm()
        }
    }
}

/// `(Q_0 λ + Q_2 μ, Q_0 μ + Q_1 λ)`.
pub fn row_rhs(state: &RowState, q: &Coefficients) -> RowState {
    RowState {
        lambda: q.q0 * state.lambda + q.q2 * state.mu,
        mu: q.q0 * state.mu + q.q1 * state.lambda,
    }
}

/// `Q_2 - Q_1 z²`.
pub fn mobius_rhs(z: Complex, q1: Complex, q2: Complex) -> Result<Complex, MobiusError> {
    if !z.is_finite() {
        return Err(MobiusError::Pole);
    }
    Ok(q2 - q1 * z * z)
}

/// `exp(t [[0, q2], [q1, 0]])` in closed form.
///
/// The generator squares to `q1 q2 I`, so with `ω² = q1 q2` the exponential is
/// `cosh(ωt) I + sinh(ωt)/ω A`; `ω` may be complex, which covers the
/// trigonometric branch, and the series for `sinh(x)/x` handles `ω → 0`.
pub fn flow_matrix(q1: Complex, q2: Complex, t: f64) -> [[Complex; 2]; 2] {
    let omega = (q1 * q2).sqrt();
    let x = omega * t;
    let cosh = x.cosh();
    // sinh(ωt)/ω = t · sinh(x)/x
    let sinhc = if x.norm() < 1e-4 {
        let x2 = x * x;
        ONE + x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sinh() / x
    };
    let s = sinhc * t;
    [[cosh, q2 * s], [q1 * s, cosh]]
}

pub fn apply_mobius(m: &[[Complex; 2]; 2], z: SpherePoint) -> SpherePoint {
    let (l, u) = z.homogeneous();
    let nl = m[0][0] * l + m[0][1] * u;
    let nu = m[1][0] * l + m[1][1] * u;
    SpherePoint::from_homogeneous(nl, nu).expect("invertible Möbius matrix")
}

pub fn mobius_exact(z0: SpherePoint, q1: Complex, q2: Complex, t: f64) -> SpherePoint {
    apply_mobius(&flow_matrix(q1, q2, t), z0)
}

/// True iff `Q_0* = -Q_0` and `Q_2 = -Q_1*`.
pub fn metric_preservation_check(q: &Coefficients) -> bool {
    const TOL: f64 = 1e-12;
    (q.q0.conj() + q.q0).norm() <= TOL && (q.q2 + q.q1.conj()).norm() <= TOL
}

/// The linear row system as a real ODE with state `(λ, μ)`.
#[derive(Debug, Clone, Copy)]
pub struct RowSystem {
    pub q: Coefficients,
}

impl OdeSystem for RowSystem {
    fn dim(&self) -> usize {
        4
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        let mut it = read_complex(y);
        let state = RowState {
            lambda: it.next().unwrap(),
            mu: it.next().unwrap(),
        };
        let d = row_rhs(&state, &self.q);
        write_complex(dy, [d.lambda, d.mu]);
    }
}

impl RowState {
    pub fn to_vec(&self) -> Vec<f64> {
        vec![self.lambda.re, self.lambda.im, self.mu.re, self.mu.im]
    }

    pub fn from_slice(y: &[f64]) -> Self {
        Self {
            lambda: Complex::new(y[0], y[1]),
            mu: Complex::new(y[2], y[3]),
        }
    }
}

/// Riccati flow in one chart: `z' = a - c z²`. In the `w = 1/z` chart the
/// roles of `Q_1` and `Q_2` swap.
struct Riccati {
    a: Complex,
    c: Complex,
}

impl OdeSystem for Riccati {
    fn dim(&self) -> usize {
        2
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        let z = Complex::new(y[0], y[1]);
        let d = self.a - self.c * z * z;
        dy[0] = d.re;
        dy[1] = d.im;
    }
}

/// Integrates the Riccati equation with RK4, switching between the charts
/// `z` and `w = 1/z` whenever the active coordinate leaves the unit disc.
/// Returns samples at every step, starting with `(0, z0)`.
pub fn integrate_riccati(
    z0: SpherePoint,
    q1: Complex,
    q2: Complex,
    t_end: f64,
    step: f64,
) -> Result<Vec<(f64, SpherePoint)>, MobiusError> {
    if !(step > 0.0 && t_end > 0.0 && t_end.is_finite()) {
        return Err(MobiusError::InvalidSpan);
    }
    let direct = Riccati { a: q2, c: q1 };
    let inverted = Riccati { a: q1, c: q2 };
    let (mut inverted_chart, mut coord) = match z0 {
        SpherePoint::Finite(z) if z.norm() <= 1.0 => (false, z),
        SpherePoint::Finite(z) => (true, z.inv()),
        SpherePoint::Infinity => (true, ZERO),
    };
    let n_steps = ((t_end / step) - 1e-9).ceil().max(1.0) as usize;
    let mut ws = Rk4Workspace::new(2);
    let mut out = vec![(0.0, z0)];
    let mut y = [coord.re, coord.im];
    let mut next = [0.0; 2];
    for k in 1..=n_steps {
        let t0 = (k - 1) as f64 * step;
        let t1 = if k == n_steps { t_end } else { k as f64 * step };
        let sys: &dyn OdeSystem = if inverted_chart { &inverted } else { &direct };
        rk4_step(sys, t0, &y, t1 - t0, &mut next, &mut ws);
        coord = Complex::new(next[0], next[1]);
        if !coord.is_finite() {
            return Err(MobiusError::Pole);
        }
        if coord.norm() > 1.0 {
            inverted_chart = !inverted_chart;
            coord = coord.inv();
        }
        y = [coord.re, coord.im];
        let point = match (inverted_chart, coord == ZERO) {
            (false, _) => SpherePoint::Finite(coord),
            (true, true) => SpherePoint::Infinity,
            (true, false) => SpherePoint::Finite(coord.inv()),
        };
        out.push((t1, point));
    }
    Ok(out)
}
