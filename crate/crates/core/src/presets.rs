//! Built-in initial data.

use crate::algebra::{Complex, Mat2, ZnElement, ONE, ZERO};
use crate::calculus::{M2VectorField, ZnVectorField};

fn phase(theta: f64) -> Complex {
    Complex::from_polar(1.0, theta)
}

/// The real, braided `Z_3` field whose products `K_-(i) K_+(i+1)` all equal -1.
pub fn fig1_field() -> ZnVectorField {
    // samples are indexed by group element 0, 1, 2
    let plus = vec![-phase(-2.0), -phase(-3.0), -ONE];
    let minus = vec![phase(3.0), ONE, phase(2.0)];
    ZnVectorField {
        plus: ZnElement::new(plus).expect("valid preset"),
        minus: ZnElement::new(minus).expect("valid preset"),
    }
}

pub fn fig1_m() -> ZnElement {
    let r = Complex::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    ZnElement::new(vec![r, ZERO, r]).expect("valid preset")
}

pub fn fig2_field() -> M2VectorField {
    let k1 = Mat2::real(1.0, 0.0, 0.0, 2.0);
    M2VectorField { k1, k2: -k1 }
}

pub fn fig2_m() -> Mat2 {
    Mat2::real(1.0, 1.0, 2.0, 0.0).scale((1.0 / 6f64.sqrt()).into())
}
