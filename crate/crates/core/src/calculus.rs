//! First-order differential calculi on `C(Z_n)` and `M_2(C)`, and vector
//! fields as right-module maps from 1-forms to the algebra.
//!
//! On `Z_n` the calculus has generators `e_{+1}, e_{-1}` with the relation
//! `e_a f = R_a(f) e_a`; on `M_2` it has central generators `s^1, s^2` with
//! `da = s^1 [E_12, a] + s^2 [E_21, a]`. Forms are stored with the algebra
//! coefficients to the right of the generators, so evaluating a vector field
//! is a contraction of coefficients.

use crate::algebra::{AlgebraError, Element, Mat2, ZnElement};

/// `e_{+1} plus + e_{-1} minus`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZnForm {
    pub plus: ZnElement,
    pub minus: ZnElement,
}

/// `s^1 s1 + s^2 s2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct M2Form {
    pub s1: Mat2,
    pub s2: Mat2,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OneForm {
    Zn(ZnForm),
    M2(M2Form),
}

/// Values `K(e_{+1}), K(e_{-1})` of a vector field on `C(Z_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZnVectorField {
    pub plus: ZnElement,
    pub minus: ZnElement,
}

/// Values `K(s^1), K(s^2)` of a vector field on `M_2(C)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct M2VectorField {
    pub k1: Mat2,
    pub k2: Mat2,
}

#[derive(Debug, Clone, PartialEq)]
pub enum VectorField {
    Zn(ZnVectorField),
    M2(M2VectorField),
}

impl From<ZnVectorField> for VectorField {
    fn from(v: ZnVectorField) -> Self {
        VectorField::Zn(v)
    }
}

impl From<M2VectorField> for VectorField {
    fn from(v: M2VectorField) -> Self {
        VectorField::M2(v)
    }
}

impl From<ZnForm> for OneForm {
    fn from(v: ZnForm) -> Self {
        OneForm::Zn(v)
    }
}

impl From<M2Form> for OneForm {
    fn from(v: M2Form) -> Self {
        OneForm::M2(v)
    }
}

impl ZnForm {
    pub fn zero(n: usize) -> Self {
        Self {
            plus: ZnElement::zero(n),
            minus: ZnElement::zero(n),
        }
    }

    pub fn order(&self) -> usize {
        self.plus.order()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            plus: &self.plus + &other.plus,
            minus: &self.minus + &other.minus,
        }
    }

    /// `f ξ`, moving `f` through the generators with `f e_a = e_a R_{-a}(f)`.
    pub fn left_mul(&self, f: &ZnElement) -> Self {
        Self {
            plus: &f.shift(-1) * &self.plus,
            minus: &f.shift(1) * &self.minus,
        }
    }

    /// `ξ a`.
    pub fn right_mul(&self, a: &ZnElement) -> Self {
        Self {
            plus: &self.plus * a,
            minus: &self.minus * a,
        }
    }

    /// `ξ*`, using `e_{±1}* = -e_{∓1}`.
    pub fn star(&self) -> Self {
        // (e_+ a)* = a* (-e_-) = -e_- R_{+1}(a*)
        Self {
            plus: -&self.minus.star().shift(-1),
            minus: -&self.plus.star().shift(1),
        }
    }
}

impl M2Form {
    pub fn zero() -> Self {
        Self {
            s1: Mat2::zero(),
            s2: Mat2::zero(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            s1: self.s1 + other.s1,
            s2: self.s2 + other.s2,
        }
    }

    pub fn left_mul(&self, f: &Mat2) -> Self {
        Self {
            s1: *f * self.s1,
            s2: *f * self.s2,
        }
    }

    pub fn right_mul(&self, a: &Mat2) -> Self {
        Self {
            s1: self.s1 * *a,
            s2: self.s2 * *a,
        }
    }

    /// `ξ*`, using `(s^1)* = -s^2` and centrality.
    pub fn star(&self) -> Self {
        Self {
            s1: -self.s2.star(),
            s2: -self.s1.star(),
        }
    }
}

impl ZnVectorField {
    pub fn zero(n: usize) -> Self {
        Self {
            plus: ZnElement::zero(n),
            minus: ZnElement::zero(n),
        }
    }

    pub fn order(&self) -> usize {
        self.plus.order()
    }

    pub fn apply(&self, xi: &ZnForm) -> ZnElement {
        &(&self.plus * &xi.plus) + &(&self.minus * &xi.minus)
    }

    pub fn max_abs(&self) -> f64 {
        self.plus.max_abs().max(self.minus.max_abs())
    }
}

impl M2VectorField {
    pub fn zero() -> Self {
        Self {
            k1: Mat2::zero(),
            k2: Mat2::zero(),
        }
    }

    pub fn apply(&self, xi: &M2Form) -> Mat2 {
        self.k1 * xi.s1 + self.k2 * xi.s2
    }

    pub fn max_abs(&self) -> f64 {
        self.k1.max_abs().max(self.k2.max_abs())
    }
}

/// `df = e_{+1}(f - R_{-1} f) + e_{-1}(f - R_{+1} f)`.
pub fn d_zn(f: &ZnElement) -> ZnForm {
    ZnForm {
        plus: f - &f.shift(-1),
        minus: f - &f.shift(1),
    }
}

/// `da = s^1 [E_12, a] + s^2 [E_21, a]`.
pub fn d_m2(a: &Mat2) -> M2Form {
    M2Form {
        s1: Mat2::e12().commutator(a),
        s2: Mat2::e21().commutator(a),
    }
}

pub fn d(a: &Element) -> OneForm {
    match a {
        Element::Zn(f) => OneForm::Zn(d_zn(f)),
        Element::M2(m) => OneForm::M2(d_m2(m)),
    }
}

fn mismatch(left: String, right: String) -> AlgebraError {
    AlgebraError::DimensionMismatch { left, right }
}

impl OneForm {
    pub fn describe(&self) -> String {
        match self {
            OneForm::Zn(x) => format!("Ω¹ C(Z_{})", x.order()),
            OneForm::M2(_) => "Ω¹ M_2(C)".to_string(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        match (self, other) {
            (OneForm::Zn(a), OneForm::Zn(b)) if a.order() == b.order() => Ok(a.add(b).into()),
            (OneForm::M2(a), OneForm::M2(b)) => Ok(a.add(b).into()),
            _ => Err(mismatch(self.describe(), other.describe())),
        }
    }

    pub fn right_mul(&self, a: &Element) -> Result<Self, AlgebraError> {
        match (self, a) {
            (OneForm::Zn(x), Element::Zn(f)) if x.order() == f.order() => Ok(x.right_mul(f).into()),
            (OneForm::M2(x), Element::M2(m)) => Ok(x.right_mul(m).into()),
            _ => Err(mismatch(self.describe(), a.describe())),
        }
    }

    pub fn star(&self) -> Self {
        match self {
            OneForm::Zn(x) => x.star().into(),
            OneForm::M2(x) => x.star().into(),
        }
    }
}

impl VectorField {
    pub fn describe(&self) -> String {
        match self {
            VectorField::Zn(k) => format!("X(C(Z_{}))", k.order()),
            VectorField::M2(_) => "X(M_2(C))".to_string(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        match self {
            VectorField::Zn(k) => k.max_abs(),
            VectorField::M2(k) => k.max_abs(),
        }
    }
}

/// `f ξ`, normalized back to generator-left form.
pub fn left_multiply_form(f: &Element, xi: &OneForm) -> Result<OneForm, AlgebraError> {
    match (f, xi) {
        (Element::Zn(f), OneForm::Zn(x)) if f.order() == x.order() => Ok(x.left_mul(f).into()),
        (Element::M2(f), OneForm::M2(x)) => Ok(x.left_mul(f).into()),
        _ => Err(mismatch(f.describe(), xi.describe())),
    }
}

/// Evaluates the vector field on a 1-form.
pub fn apply_vf(k: &VectorField, xi: &OneForm) -> Result<Element, AlgebraError> {
    match (k, xi) {
        (VectorField::Zn(k), OneForm::Zn(x)) if k.order() == x.order() => Ok(k.apply(x).into()),
        (VectorField::M2(k), OneForm::M2(x)) => Ok(k.apply(x).into()),
        _ => Err(mismatch(k.describe(), xi.describe())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Complex, ONE, ZERO};

    #[test]
    fn derivative_of_unit_vanishes() {
        assert_eq!(d_zn(&ZnElement::unit(3)), ZnForm::zero(3));
        assert_eq!(d_m2(&Mat2::identity()), M2Form::zero());
    }

    #[test]
    fn zn_derivative_of_delta() {
        let df = d_zn(&ZnElement::delta(3, 0));
        let d0 = ZnElement::delta(3, 0);
        assert_eq!(df.plus, &d0 - &ZnElement::delta(3, 1));
        assert_eq!(df.minus, &d0 - &ZnElement::delta(3, 2));
    }

    #[test]
    fn m2_derivative_of_e11() {
        let df = d_m2(&Mat2::e11());
        assert_eq!(df.s1, -Mat2::e12());
        assert_eq!(df.s2, Mat2::e21());
    }

    #[test]
    fn left_multiplication_examples() {
        let xi = ZnForm {
            plus: ZnElement::unit(3),
            minus: ZnElement::zero(3),
        };
        assert_eq!(xi.left_mul(&ZnElement::unit(3)), xi);
        let moved = xi.left_mul(&ZnElement::delta(3, 0));
        assert_eq!(moved.plus, ZnElement::delta(3, 1));
        assert_eq!(moved.minus, ZnElement::zero(3));

        let eta = M2Form {
            s1: Mat2::identity(),
            s2: Mat2::zero(),
        };
        assert_eq!(eta.left_mul(&Mat2::e12()).s1, Mat2::e12());
    }

    #[test]
    fn vector_field_evaluation_examples() {
        let k = ZnVectorField {
            plus: ZnElement::unit(3),
            minus: ZnElement::zero(3),
        };
        let value = k.apply(&d_zn(&ZnElement::delta(3, 0)));
        assert_eq!(value, &ZnElement::delta(3, 0) - &ZnElement::delta(3, 1));
        assert_eq!(k.apply(&ZnForm::zero(3)), ZnElement::zero(3));

        let diag = Mat2::real(1.0, 0.0, 0.0, 2.0);
        let km = M2VectorField {
            k1: diag,
            k2: Mat2::new(ONE, Complex::new(0.3, 1.0), ZERO, -ONE),
        };
        let xi = M2Form {
            s1: Mat2::identity(),
            s2: Mat2::zero(),
        };
        assert_eq!(km.apply(&xi), diag);
    }

    #[test]
    fn tagged_forms_check_algebra() {
        let k: VectorField = ZnVectorField::zero(3).into();
        let xi: OneForm = M2Form::zero().into();
        assert!(apply_vf(&k, &xi).is_err());
        let f: Element = ZnElement::unit(4).into();
        assert!(left_multiply_form(&f, &ZnForm::zero(3).into()).is_err());
        let ok = apply_vf(&k, &ZnForm::zero(3).into()).unwrap();
        assert_eq!(ok, Element::Zn(ZnElement::zero(3)));
    }

    #[test]
    fn form_star_is_involutive() {
        let xi = ZnForm {
            plus: ZnElement::from_fn(4, |i| Complex::new(i as f64, 1.0)),
            minus: ZnElement::from_fn(4, |i| Complex::new(-1.0, i as f64 * 0.5)),
        };
        assert_eq!(xi.star().star(), xi);
        let eta = M2Form {
            s1: Mat2::new(ONE, Complex::new(0.0, 2.0), ZERO, -ONE),
            s2: Mat2::e12(),
        };
        assert_eq!(eta.star().star(), eta);
    }
}
