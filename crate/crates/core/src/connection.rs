//! The connection data `(b, K)` on `M = C^∞(R) ⊗ A`, the divergence and
//! reality conditions for inner-product preservation, and the braiding
//! residual `G = K(K ⊗ id)(σ - id)`.
//!
//! `b` is always the Hermitian solution of the divergence condition; its free
//! anti-Hermitian part is fixed to zero.

use crate::algebra::{AlgebraError, Complex, Element, Mat2, ZnElement};
use crate::calculus::{self, M2VectorField, OneForm, VectorField, ZnVectorField};

#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionData {
    pub k: VectorField,
    pub b: Element,
}

impl ConnectionData {
    /// Pairs `K` with the `b` solving the divergence condition.
    pub fn from_field(k: VectorField) -> Self {
        let b = solve_b(&k);
        Self { k, b }
    }

    /// `∫ (b a + K(da) + a b*)` for one algebra element `a`.
    pub fn divergence_residual(&self, a: &Element) -> Result<Complex, AlgebraError> {
        divergence_residual(&self.k, &self.b, a)
    }
}

/// `b = ½(R_{+1}K_+ - K_+ + R_{-1}K_- - K_-)`.
pub fn solve_b_zn(k: &ZnVectorField) -> ZnElement {
    let n = k.order();
    let (kp, km) = (k.plus.samples(), k.minus.samples());
    ZnElement::from_fn(n, |i| {
        let next = (i + 1) % n;
        let prev = (i + n - 1) % n;
        0.5 * (kp[next] - kp[i] + km[prev] - km[i])
    })
}

/// `b = ½([E_12, K_1] + [E_21, K_2])`.
pub fn solve_b_m2(k: &M2VectorField) -> Mat2 {
    (Mat2::e12().commutator(&k.k1) + Mat2::e21().commutator(&k.k2)).scale(0.5.into())
}

pub fn solve_b(k: &VectorField) -> Element {
    match k {
        VectorField::Zn(k) => solve_b_zn(k).into(),
        VectorField::M2(k) => solve_b_m2(k).into(),
    }
}

/// `ρ(i) = K_-(i) + K_+(i+1)*`; zero iff `K` is real.
pub fn reality_residual_zn(k: &ZnVectorField) -> ZnElement {
    let n = k.order();
    ZnElement::from_fn(n, |i| k.minus.at(i as i64) + k.plus.at(i as i64 + 1).conj())
}

/// `K_1* + K_2`.
pub fn reality_residual_m2(k: &M2VectorField) -> Mat2 {
    k.k1.star() + k.k2
}

pub fn reality_residual(k: &VectorField) -> Element {
    match k {
        VectorField::Zn(k) => reality_residual_zn(k).into(),
        VectorField::M2(k) => reality_residual_m2(k).into(),
    }
}

/// `G(i) = K_-(i) K_+(i+1) - K_-(i-1) K_+(i)`.
pub fn braiding_residual_zn(k: &ZnVectorField) -> ZnElement {
    let n = k.order();
    ZnElement::from_fn(n, |i| {
        let i = i as i64;
        k.minus.at(i) * k.plus.at(i + 1) - k.minus.at(i - 1) * k.plus.at(i)
    })
}

/// `[K_1, K_2]`.
pub fn braiding_residual_m2(k: &M2VectorField) -> Mat2 {
    k.k1.commutator(&k.k2)
}

pub fn braiding_residual(k: &VectorField) -> Element {
    match k {
        VectorField::Zn(k) => braiding_residual_zn(k).into(),
        VectorField::M2(k) => braiding_residual_m2(k).into(),
    }
}

/// `∫ (b a + K(da) + a b*)`. Vanishes for every `a` exactly when `b` solves
/// the divergence condition for `K`.
pub fn divergence_residual(
    k: &VectorField,
    b: &Element,
    a: &Element,
) -> Result<Complex, AlgebraError> {
    let flow = calculus::apply_vf(k, &calculus::d(a))?;
    let total = b.mul(a)?.add(&flow)?.add(&a.mul(&b.star())?)?;
    Ok(total.integral())
}

/// `∫ (K(ξ*) - K(ξ)*)`, the general reality functional evaluated on one form.
pub fn reality_functional(k: &VectorField, xi: &OneForm) -> Result<Complex, AlgebraError> {
    let lhs = calculus::apply_vf(k, &xi.star())?;
    let rhs = calculus::apply_vf(k, xi)?.star();
    Ok(lhs.sub(&rhs)?.integral())
}
