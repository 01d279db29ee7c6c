//! Arithmetic backends for the exponential-time kernels.
//!
//! Exact matrices are lowered to integer matrices by clearing a common
//! denominator, so the hot loops run on `BigInt` (or Gaussian integers)
//! instead of reducing rationals after every operation.

use std::fmt;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::scalar::{rational_to_f64, Field, Scalar};

pub trait Ring: Clone + Send + Sync + PartialEq + fmt::Debug + 'static {
    const EXACT: bool;
    const FIELD: Field;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_bigint(v: &BigInt) -> Self;

    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn add_assign(&mut self, o: &Self);
    fn sub_assign(&mut self, o: &Self);
    /// `self += a * b`
    fn mul_add_assign(&mut self, a: &Self, b: &Self);
    /// Division that is exact for exact rings when the quotient exists in the
    /// ring (fraction-free elimination relies on this).
    fn div_exact(&self, o: &Self) -> Self;
    /// Pivot size for floating-point elimination.
    fn magnitude(&self) -> f64;

    /// Lowers an entry already multiplied by the common denominator.
    fn lower(s: &Scalar, scale: &BigInt) -> Option<Self>;
    /// Builds the scalar `self / den`.
    fn into_scalar(self, den: &BigInt) -> Scalar;

    fn pow(&self, exp: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }
}

fn scaled_integer(x: &BigRational, scale: &BigInt) -> BigInt {
    let v = x * BigRational::from_integer(scale.clone());
    debug_assert!(v.is_integer(), "scale must clear the denominator");
    v.to_integer()
}

impl Ring for BigInt {
    const EXACT: bool = true;
    const FIELD: Field = Field::Rational;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_bigint(v: &BigInt) -> Self {
        v.clone()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
    fn sub_assign(&mut self, o: &Self) {
        *self -= o;
    }
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        if !Zero::is_zero(a) && !Zero::is_zero(b) {
            *self += a * b;
        }
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn magnitude(&self) -> f64 {
        self.to_f64().map_or(f64::INFINITY, f64::abs)
    }
    fn lower(s: &Scalar, scale: &BigInt) -> Option<Self> {
        match s {
            Scalar::Rational(x) => Some(scaled_integer(x, scale)),
            _ => None,
        }
    }
    fn into_scalar(self, den: &BigInt) -> Scalar {
        Scalar::Rational(BigRational::new(self, den.clone()))
    }
}

pub type GaussInt = Complex<BigInt>;

impl Ring for GaussInt {
    const EXACT: bool = true;
    const FIELD: Field = Field::ComplexRational;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_bigint(v: &BigInt) -> Self {
        Complex::new(v.clone(), BigInt::from(0))
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn add_assign(&mut self, o: &Self) {
        self.re += &o.re;
        self.im += &o.im;
    }
    fn sub_assign(&mut self, o: &Self) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        if Zero::is_zero(a) || Zero::is_zero(b) {
            return;
        }
        self.re += &a.re * &b.re - &a.im * &b.im;
        self.im += &a.re * &b.im + &a.im * &b.re;
    }
    fn div_exact(&self, o: &Self) -> Self {
        // (a + bi)(c - di) / (c^2 + d^2), each component divides exactly.
        let norm = &o.re * &o.re + &o.im * &o.im;
        let num = self * o.conj();
        Complex::new(num.re / &norm, num.im / &norm)
    }
    fn magnitude(&self) -> f64 {
        let re = self.re.to_f64().unwrap_or(f64::INFINITY);
        let im = self.im.to_f64().unwrap_or(f64::INFINITY);
        re.hypot(im)
    }
    fn lower(s: &Scalar, scale: &BigInt) -> Option<Self> {
        match s {
            Scalar::Rational(x) => Some(Complex::new(scaled_integer(x, scale), BigInt::from(0))),
            Scalar::ComplexRational(x) => Some(Complex::new(
                scaled_integer(&x.re, scale),
                scaled_integer(&x.im, scale),
            )),
            _ => None,
        }
    }
    fn into_scalar(self, den: &BigInt) -> Scalar {
        Scalar::gaussian(
            BigRational::new(self.re, den.clone()),
            BigRational::new(self.im, den.clone()),
        )
    }
}

impl Ring for f64 {
    const EXACT: bool = false;
    const FIELD: Field = Field::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn from_bigint(v: &BigInt) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
    fn sub_assign(&mut self, o: &Self) {
        *self -= o;
    }
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn lower(s: &Scalar, _scale: &BigInt) -> Option<Self> {
        match s {
            Scalar::Float(x) => Some(*x),
            _ => None,
        }
    }
    fn into_scalar(self, den: &BigInt) -> Scalar {
        Scalar::Float(self / rational_to_f64(&BigRational::from_integer(den.clone())))
    }
}

impl Ring for Complex64 {
    const EXACT: bool = false;
    const FIELD: Field = Field::ComplexFloat;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_bigint(v: &BigInt) -> Self {
        Complex64::new(v.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
    fn sub_assign(&mut self, o: &Self) {
        *self -= o;
    }
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn lower(s: &Scalar, _scale: &BigInt) -> Option<Self> {
        match s {
            Scalar::Float(x) => Some(Complex64::new(*x, 0.0)),
            Scalar::ComplexFloat(x) => Some(*x),
            _ => None,
        }
    }
    fn into_scalar(self, den: &BigInt) -> Scalar {
        let d = den.to_f64().unwrap_or(f64::NAN);
        Scalar::ComplexFloat(self / d)
    }
}
