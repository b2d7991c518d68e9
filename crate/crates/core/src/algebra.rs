//! Finite-dimensional star algebras: functions on the cyclic group `Z_n`
//! and 2×2 complex matrices.
//!
//! The typed values [`ZnElement`] and [`Mat2`] implement the arithmetic
//! operators directly and panic on mismatched group orders, which keeps the
//! flow right-hand sides readable. [`Element`] is the tagged form used at the
//! library boundary; its methods check compatibility and return
//! [`AlgebraError`] instead.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

pub type Complex = Complex64;

pub const ZERO: Complex = Complex::new(0.0, 0.0);
pub const ONE: Complex = Complex::new(1.0, 0.0);
pub const I: Complex = Complex::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("group order must be at least 2, got {0}")]
    InvalidOrder(usize),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: String, right: String },
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
}

/// A function on `Z_n`, stored as its `n` samples.
#[derive(Clone, PartialEq)]
pub struct ZnElement {
    samples: Vec<Complex>,
}

impl fmt::Debug for ZnElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.samples.iter()).finish()
    }
}

impl ZnElement {
    pub fn new(samples: Vec<Complex>) -> Result<Self, AlgebraError> {
        if samples.len() < 2 {
            return Err(AlgebraError::InvalidOrder(samples.len()));
        }
        if let Some(i) = samples.iter().position(|z| !z.is_finite()) {
            return Err(AlgebraError::NonFinite(i));
        }
        Ok(Self { samples })
    }

    /// Builds an element without the finiteness check. Used on hot paths
    /// where values come from already validated state.
    pub(crate) fn from_vec_unchecked(samples: Vec<Complex>) -> Self {
        debug_assert!(samples.len() >= 2);
        Self { samples }
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> Complex) -> Self {
        assert!(n >= 2, "group order must be at least 2");
        Self {
            samples: (0..n).map(f).collect(),
        }
    }

    pub fn constant(n: usize, value: Complex) -> Self {
        Self::from_fn(n, |_| value)
    }

    pub fn zero(n: usize) -> Self {
        Self::constant(n, ZERO)
    }

    pub fn unit(n: usize) -> Self {
        Self::constant(n, ONE)
    }

    /// The indicator function of the group element `i mod n`.
    pub fn delta(n: usize, i: i64) -> Self {
        let k = wrap(i, n);
        Self::from_fn(n, |j| if j == k { ONE } else { ZERO })
    }

    pub fn order(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[Complex] {
        &self.samples
    }

    /// Value at group element `i`, reduced mod `n`.
    pub fn at(&self, i: i64) -> Complex {
        self.samples[wrap(i, self.order())]
    }

    pub fn star(&self) -> Self {
        self.map(|z| z.conj())
    }

    /// `(R_a f)(i) = f(i + a)`.
    pub fn shift(&self, a: i64) -> Self {
        let n = self.order();
        Self::from_fn(n, |i| self.at(i as i64 + a))
    }

    pub fn integral(&self) -> Complex {
        self.samples.iter().sum()
    }

    pub fn inner_product(&self, other: &Self) -> Complex {
        assert_same_order(self, other);
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(a, c)| a * c.conj())
            .sum()
    }

    pub fn scale(&self, s: Complex) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(Complex) -> Complex) -> Self {
        Self {
            samples: self.samples.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex, Complex) -> Complex) -> Self {
        assert_same_order(self, other);
        Self {
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

pub(crate) fn wrap(i: i64, n: usize) -> usize {
    i.rem_euclid(n as i64) as usize
}

fn assert_same_order(a: &ZnElement, b: &ZnElement) {
    assert_eq!(
        a.order(),
        b.order(),
        "Z_n elements of different group order"
    );
}

impl Add for &ZnElement {
    type Output = ZnElement;
    fn add(self, rhs: Self) -> ZnElement {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &ZnElement {
    type Output = ZnElement;
    fn sub(self, rhs: Self) -> ZnElement {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &ZnElement {
    type Output = ZnElement;
    fn mul(self, rhs: Self) -> ZnElement {
        self.zip_with(rhs, |a, b| a * b)
    }
}

impl Neg for &ZnElement {
    type Output = ZnElement;
    fn neg(self) -> ZnElement {
        self.map(|z| -z)
    }
}

impl AddAssign<&ZnElement> for ZnElement {
    fn add_assign(&mut self, rhs: &ZnElement) {
        assert_same_order(self, rhs);
        for (a, b) in self.samples.iter_mut().zip(&rhs.samples) {
            *a += b;
        }
    }
}

/// A 2×2 complex matrix; `entries[i][j]` is the coefficient of `E_{i+1, j+1}`.
#[derive(Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub entries: [[Complex; 2]; 2],
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.entries)
    }
}

impl Mat2 {
    pub const fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> Self {
        Self {
            entries: [[a, b], [c, d]],
        }
    }

    pub fn real(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn e11() -> Self {
        Self::new(ONE, ZERO, ZERO, ZERO)
    }

    pub const fn e12() -> Self {
        Self::new(ZERO, ONE, ZERO, ZERO)
    }

    pub const fn e21() -> Self {
        Self::new(ZERO, ZERO, ONE, ZERO)
    }

    pub const fn e22() -> Self {
        Self::new(ZERO, ZERO, ZERO, ONE)
    }

    pub fn diag(a: Complex, d: Complex) -> Self {
        Self::new(a, ZERO, ZERO, d)
    }

    /// Matrix units `E_11, E_12, E_21, E_22`, a linear basis of the algebra.
    pub fn basis() -> [Self; 4] {
        [Self::e11(), Self::e12(), Self::e21(), Self::e22()]
    }

    pub fn get(&self, i: usize, j: usize) -> Complex {
        self.entries[i][j]
    }

    pub fn flat(&self) -> [Complex; 4] {
        let [[a, b], [c, d]] = self.entries;
        [a, b, c, d]
    }

    pub fn from_flat(v: [Complex; 4]) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    /// Conjugate transpose.
    pub fn star(&self) -> Self {
        let [[a, b], [c, d]] = self.entries;
        Self::new(a.conj(), c.conj(), b.conj(), d.conj())
    }

    pub fn trace(&self) -> Complex {
        self.entries[0][0] + self.entries[1][1]
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn scale(&self, s: Complex) -> Self {
        self.map(|z| z * s)
    }

    pub fn map(&self, f: impl Fn(Complex) -> Complex) -> Self {
        let [[a, b], [c, d]] = self.entries;
        Self::new(f(a), f(b), f(c), f(d))
    }

    /// `tr(a c*)`.
    pub fn inner_product(&self, other: &Self) -> Complex {
        (*self * other.star()).trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.flat().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.flat().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.flat().iter().all(|z| z.is_finite())
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Self) -> Mat2 {
        let (l, r) = (self.flat(), rhs.flat());
        Mat2::from_flat([l[0] + r[0], l[1] + r[1], l[2] + r[2], l[3] + r[3]])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Self) -> Mat2 {
        self + (-rhs)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.map(|z| -z)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Self) -> Mat2 {
        let a = &self.entries;
        let b = &rhs.entries;
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2 { entries: out }
    }
}

impl Mul<Complex> for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Complex) -> Mat2 {
        self.scale(rhs)
    }
}

/// Tagged algebra element.
#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Zn(ZnElement),
    M2(Mat2),
}

impl From<ZnElement> for Element {
    fn from(v: ZnElement) -> Self {
        Element::Zn(v)
    }
}

impl From<Mat2> for Element {
    fn from(v: Mat2) -> Self {
        Element::M2(v)
    }
}

impl Element {
    pub fn describe(&self) -> String {
        match self {
            Element::Zn(f) => format!("C(Z_{})", f.order()),
            Element::M2(_) => "M_2(C)".to_string(),
        }
    }

    pub fn unit_like(&self) -> Self {
        match self {
            Element::Zn(f) => ZnElement::unit(f.order()).into(),
            Element::M2(_) => Mat2::identity().into(),
        }
    }

    pub fn zero_like(&self) -> Self {
        match self {
            Element::Zn(f) => ZnElement::zero(f.order()).into(),
            Element::M2(_) => Mat2::zero().into(),
        }
    }

    /// A linear basis of the algebra this element lives in.
    pub fn basis_like(&self) -> Vec<Element> {
        match self {
            Element::Zn(f) => {
                let n = f.order();
                (0..n as i64)
                    .map(|i| ZnElement::delta(n, i).into())
                    .collect()
            }
            Element::M2(_) => Mat2::basis().into_iter().map(Element::M2).collect(),
        }
    }

    pub fn check_compatible(&self, other: &Self) -> Result<(), AlgebraError> {
        match (self, other) {
            (Element::Zn(a), Element::Zn(b)) if a.order() == b.order() => Ok(()),
            (Element::M2(_), Element::M2(_)) => Ok(()),
            _ => Err(AlgebraError::DimensionMismatch {
                left: self.describe(),
                right: other.describe(),
            }),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_compatible(other)?;
        Ok(match (self, other) {
            (Element::Zn(a), Element::Zn(b)) => Element::Zn(a * b),
            (Element::M2(a), Element::M2(b)) => Element::M2(*a * *b),
            _ => unreachable!(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_compatible(other)?;
        Ok(match (self, other) {
            (Element::Zn(a), Element::Zn(b)) => Element::Zn(a + b),
            (Element::M2(a), Element::M2(b)) => Element::M2(*a + *b),
            _ => unreachable!(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_compatible(other)?;
        Ok(match (self, other) {
            (Element::Zn(a), Element::Zn(b)) => Element::Zn(a - b),
            (Element::M2(a), Element::M2(b)) => Element::M2(*a - *b),
            _ => unreachable!(),
        })
    }

    pub fn scale(&self, s: Complex) -> Self {
        match self {
            Element::Zn(a) => Element::Zn(a.scale(s)),
            Element::M2(a) => Element::M2(a.scale(s)),
        }
    }

    pub fn star(&self) -> Self {
        match self {
            Element::Zn(a) => Element::Zn(a.star()),
            Element::M2(a) => Element::M2(a.star()),
        }
    }

    /// Sum of samples on `Z_n`, trace on `M_2`.
    pub fn integral(&self) -> Complex {
        match self {
            Element::Zn(a) => a.integral(),
            Element::M2(a) => a.trace(),
        }
    }

    /// `integral(a c*)`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex, AlgebraError> {
        Ok(self.mul(&other.star())?.integral())
    }

    pub fn max_abs(&self) -> f64 {
        match self {
            Element::Zn(a) => a.max_abs(),
            Element::M2(a) => a.max_abs(),
        }
    }

    pub fn as_zn(&self) -> Option<&ZnElement> {
        match self {
            Element::Zn(a) => Some(a),
            Element::M2(_) => None,
        }
    }

    pub fn as_m2(&self) -> Option<&Mat2> {
        match self {
            Element::M2(a) => Some(a),
            Element::Zn(_) => None,
        }
    }
}
