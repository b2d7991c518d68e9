//! Transport of `m ∈ M` by `∇_M(m) = 0`, the induced states
//! `φ(a) = <m a, m̄>`, the velocity functional and Bloch coordinates.
//!
//! The velocity field and `m` are evolved together as one ODE system
//! ([`ZnGeodesic`], [`M2Geodesic`]) so that `K(t)` is never interpolated.

use crate::algebra::{AlgebraError, Complex, Element, Mat2, ZnElement};
use crate::calculus::{self, M2Form, M2VectorField, OneForm, VectorField, ZnForm, ZnVectorField};
use crate::connection::{solve_b_m2, solve_b_zn};
use crate::flow::{m2_rhs, read_mat2, read_zn, write_complex, zn_rhs};
use crate::ode::OdeSystem;

/// `dm/dt = -m b - K_+(m - R_{-1} m) - K_-(m - R_{+1} m)`.
pub fn zn_transport_rhs(m: &ZnElement, k: &ZnVectorField) -> ZnElement {
    let b = solve_b_zn(k);
    let flow = k.apply(&calculus::d_zn(m));
    -&(&(m * &b) + &flow)
}

/// `dm/dt = -b m - K_1 [E_12, m] - K_2 [E_21, m]`.
pub fn m2_transport_rhs(m: &Mat2, k: &M2VectorField) -> Mat2 {
    let b = solve_b_m2(k);
    -(b * *m + k.apply(&calculus::d_m2(m)))
}

/// `φ(a) = Σ_i |m(i)|² a(i)`.
pub fn state_eval_zn(m: &ZnElement, a: &ZnElement) -> Complex {
    (&(m * a) * &m.star()).integral()
}

/// `φ(a) = tr(m a m*)`.
pub fn state_eval_m2(m: &Mat2, a: &Mat2) -> Complex {
    (*m * *a * m.star()).trace()
}

pub fn state_eval(m: &Element, a: &Element) -> Result<Complex, AlgebraError> {
    m.mul(a)?.inner_product(m)
}

/// `V(ξ) = <K(m ξ), m̄>`.
pub fn velocity_functional_zn(m: &ZnElement, k: &ZnVectorField, xi: &ZnForm) -> Complex {
    k.apply(&xi.left_mul(m)).inner_product(m)
}

pub fn velocity_functional_m2(m: &Mat2, k: &M2VectorField, xi: &M2Form) -> Complex {
    k.apply(&xi.left_mul(m)).inner_product(m)
}

pub fn velocity_functional(
    m: &Element,
    k: &VectorField,
    xi: &OneForm,
) -> Result<Complex, AlgebraError> {
    let moved = calculus::left_multiply_form(m, xi)?;
    calculus::apply_vf(k, &moved)?.inner_product(m)
}

/// Coordinates of a state on `M_2` with `φ = (½-s, x+iy; x-iy, ½+s)`
/// against the matrix entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochPoint {
    pub s: f64,
    pub x: f64,
    pub y: f64,
}

impl BlochPoint {
    pub fn radius_sq(&self) -> f64 {
        self.s * self.s + self.x * self.x + self.y * self.y
    }
}

pub fn bloch_observables() -> [Mat2; 3] {
    use crate::algebra::{I, ONE, ZERO};
    [
        Mat2::new(-ONE, ZERO, ZERO, ONE),
        Mat2::new(ZERO, ONE, ONE, ZERO),
        Mat2::new(ZERO, -I, I, ZERO),
    ]
}

/// Bloch coordinates together with the largest imaginary residue of the
/// three Hermitian evaluations.
pub fn bloch_with_residue(m: &Mat2) -> (BlochPoint, f64) {
    let [zs, zx, zy] = bloch_observables().map(|a| state_eval_m2(m, &a) * 0.5);
    let residue = zs.im.abs().max(zx.im.abs()).max(zy.im.abs());
    (
        BlochPoint {
            s: zs.re,
            x: zx.re,
            y: zy.re,
        },
        residue,
    )
}

pub fn bloch(m: &Mat2) -> BlochPoint {
    bloch_with_residue(m).0
}

/// Velocity field and transported element on `C(Z_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZnGeodesicState {
    pub k: ZnVectorField,
    pub m: ZnElement,
}

impl ZnGeodesicState {
    pub fn order(&self) -> usize {
        self.m.order()
    }

    /// Layout: `K_+`, `K_-`, `m`, each as `n` interleaved complex values.
    pub fn to_vec(&self) -> Vec<f64> {
        let n = self.order();
        let mut y = vec![0.0; 6 * n];
        let values = self
            .k
            .plus
            .samples()
            .iter()
            .chain(self.k.minus.samples())
            .chain(self.m.samples())
            .copied();
        write_complex(&mut y, values);
        y
    }

    pub fn from_slice(n: usize, y: &[f64]) -> Self {
        assert_eq!(y.len(), 6 * n, "state length");
        Self {
            k: ZnVectorField {
                plus: read_zn(&y[..2 * n]),
                minus: read_zn(&y[2 * n..4 * n]),
            },
            m: read_zn(&y[4 * n..]),
        }
    }

    pub fn phi(&self, a: &ZnElement) -> Complex {
        state_eval_zn(&self.m, a)
    }
}

/// Velocity field and transported element on `M_2(C)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct M2GeodesicState {
    pub k: M2VectorField,
    pub m: Mat2,
}

impl M2GeodesicState {
    pub const DIM: usize = 24;

    /// Layout: `K_1`, `K_2`, `m`, each row-major as interleaved complex values.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut y = vec![0.0; Self::DIM];
        let values = self
            .k
            .k1
            .flat()
            .into_iter()
            .chain(self.k.k2.flat())
            .chain(self.m.flat());
        write_complex(&mut y, values);
        y
    }

    pub fn from_slice(y: &[f64]) -> Self {
        assert_eq!(y.len(), Self::DIM, "state length");
        Self {
            k: M2VectorField {
                k1: read_mat2(&y[..8]),
                k2: read_mat2(&y[8..16]),
            },
            m: read_mat2(&y[16..]),
        }
    }

    pub fn phi(&self, a: &Mat2) -> Complex {
        state_eval_m2(&self.m, a)
    }
}

/// The coupled `(K, m)` system on `C(Z_n)`.
#[derive(Debug, Clone, Copy)]
pub struct ZnGeodesic {
    pub n: usize,
}

impl OdeSystem for ZnGeodesic {
    fn dim(&self) -> usize {
        6 * self.n
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        let s = ZnGeodesicState::from_slice(self.n, y);
        let dk = zn_rhs(&s.k);
        let dm = zn_transport_rhs(&s.m, &s.k);
        let values = dk
            .plus
            .samples()
            .iter()
            .chain(dk.minus.samples())
            .chain(dm.samples())
            .copied();
        write_complex(dy, values);
    }
}

/// The coupled `(K_1, K_2, m)` system on `M_2(C)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct M2Geodesic;

impl OdeSystem for M2Geodesic {
    fn dim(&self) -> usize {
        M2GeodesicState::DIM
    }

    fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
        let s = M2GeodesicState::from_slice(y);
        let dk = m2_rhs(&s.k);
        let dm = m2_transport_rhs(&s.m, &s.k);
        let values = dk
            .k1
            .flat()
            .into_iter()
            .chain(dk.k2.flat())
            .chain(dm.flat());
        write_complex(dy, values);
    }
}
