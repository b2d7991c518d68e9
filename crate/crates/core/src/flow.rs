//! Right-hand sides of the geodesic velocity equations for `K`.
//!
//! With flat connections on the calculi (`∇(e_{±1}) = 0`, `∇(s^i) = 0`) and
//! the braiding constraint imposed, the velocity equation reduces to
//!
//! * `C(Z_n)`: `∂K_± = K_± (R_{∓1}β - β)` with `β = b + K_+ + K_-`,
//! * `M_2`: `∂K_i = ½ [K_i, E_12 K_1 + E_21 K_2 + K_1 E_12 + K_2 E_21]`,
//!
//! where `b` is recomputed from `K` by [`crate::connection::solve_b_zn`] at
//! every evaluation.

use crate::algebra::{Complex, Mat2, ZnElement};
use crate::calculus::{M2VectorField, ZnVectorField};
use crate::connection::solve_b_zn;

pub fn zn_rhs(k: &ZnVectorField) -> ZnVectorField {
    let b = solve_b_zn(k);
    let beta = &(&b + &k.plus) + &k.minus;
    ZnVectorField {
        plus: &k.plus * &(&beta.shift(-1) - &beta),
        minus: &k.minus * &(&beta.shift(1) - &beta),
    }
}

pub fn m2_rhs(k: &M2VectorField) -> M2VectorField {
    let (e12, e21) = (Mat2::e12(), Mat2::e21());
    let big_b = e12 * k.k1 + e21 * k.k2 + k.k1 * e12 + k.k2 * e21;
    let half = Complex::new(0.5, 0.0);
    M2VectorField {
        k1: k.k1.commutator(&big_b).scale(half),
        k2: k.k2.commutator(&big_b).scale(half),
    }
}

/// Interleaved `(re, im)` packing of complex values into a real state.
pub(crate) fn write_complex(out: &mut [f64], values: impl IntoIterator<Item = Complex>) -> usize {
    let mut idx = 0;
    for z in values {
        out[idx] = z.re;
        out[idx + 1] = z.im;
        idx += 2;
    }
    idx
}

pub(crate) fn read_complex(y: &[f64]) -> impl Iterator<Item = Complex> + '_ {
    y.chunks_exact(2).map(|p| Complex::new(p[0], p[1]))
}

pub(crate) fn read_zn(y: &[f64]) -> ZnElement {
    ZnElement::from_vec_unchecked(read_complex(y).collect())
}

pub(crate) fn read_mat2(y: &[f64]) -> Mat2 {
    let mut it = read_complex(y);
    let mut next = || it.next().expect("four complex entries");
    Mat2::from_flat([next(), next(), next(), next()])
}
