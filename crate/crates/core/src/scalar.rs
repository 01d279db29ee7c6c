//! Exact and approximate scalars.
//!
//! Exact values are big rationals or Gaussian rationals and never degrade to
//! floating point on their own: combining an exact scalar with a float is an
//! error unless the caller converts explicitly with [`Scalar::to_float`].
//!
//! Textual syntax (locale independent):
//!
//! * `p` or `p/q` for rationals,
//! * `p/q+r/s i` for Gaussian rationals,
//! * decimal literals (`1.5`, `2e-3`, `inf`) for floats, `1.5-0.25 i` for
//!   complex floats.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    ComplexRational,
    Float,
    ComplexFloat,
}

impl Field {
    pub fn is_exact(self) -> bool {
        matches!(self, Field::Rational | Field::ComplexRational)
    }

    pub fn is_complex(self) -> bool {
        matches!(self, Field::ComplexRational | Field::ComplexFloat)
    }

    /// Smallest field holding values of both `self` and `other`.
    pub fn join(self, other: Field) -> Result<Field> {
        if self.is_exact() != other.is_exact() {
            return Err(Error::MixedExactness {
                left: self,
                right: other,
            });
        }
        let complex = self.is_complex() || other.is_complex();
        Ok(match (self.is_exact(), complex) {
            (true, false) => Field::Rational,
            (true, true) => Field::ComplexRational,
            (false, false) => Field::Float,
            (false, true) => Field::ComplexFloat,
        })
    }

    /// The float field with the same real/complex shape.
    pub fn to_float(self) -> Field {
        if self.is_complex() {
            Field::ComplexFloat
        } else {
            Field::Float
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Field::Rational => "rational",
            Field::ComplexRational => "complex-rational",
            Field::Float => "float",
            Field::ComplexFloat => "complex-float",
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(Field::Rational),
            "complex-rational" => Ok(Field::ComplexRational),
            "float" => Ok(Field::Float),
            "complex-float" => Ok(Field::ComplexFloat),
            other => Err(Error::parse(format!("unknown field `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Rational(BigRational),
    ComplexRational(Complex<BigRational>),
    Float(f64),
    ComplexFloat(Complex64),
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

macro_rules! binop {
    ($name:ident, $op:tt) => {
        pub fn $name(&self, other: &Scalar) -> Result<Scalar> {
            let field = self.field().join(other.field())?;
            let a = self.promote(field)?;
            let b = other.promote(field)?;
            Ok(match (a, b) {
                (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x $op y),
                (Scalar::ComplexRational(x), Scalar::ComplexRational(y)) => {
                    Scalar::ComplexRational(x $op y)
                }
                (Scalar::Float(x), Scalar::Float(y)) => Scalar::Float(x $op y),
                (Scalar::ComplexFloat(x), Scalar::ComplexFloat(y)) => {
                    Scalar::ComplexFloat(x $op y)
                }
                _ => unreachable!("operands promoted to a common field"),
            })
        }
    };
}

impl Scalar {
    pub fn int(v: i64) -> Scalar {
        Scalar::Rational(rat(v))
    }

    /// The rational `p/q`. Panics if `q == 0`.
    pub fn ratio(p: i64, q: i64) -> Scalar {
        Scalar::Rational(BigRational::new(p.into(), q.into()))
    }

    pub fn gaussian(re: BigRational, im: BigRational) -> Scalar {
        Scalar::ComplexRational(Complex::new(re, im))
    }

    pub fn from_i64(field: Field, v: i64) -> Scalar {
        match field {
            Field::Rational => Scalar::Rational(rat(v)),
            Field::ComplexRational => Scalar::ComplexRational(Complex::new(rat(v), rat(0))),
            Field::Float => Scalar::Float(v as f64),
            Field::ComplexFloat => Scalar::ComplexFloat(Complex64::new(v as f64, 0.0)),
        }
    }

    pub fn zero(field: Field) -> Scalar {
        Scalar::from_i64(field, 0)
    }

    pub fn one(field: Field) -> Scalar {
        Scalar::from_i64(field, 1)
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::ComplexRational(_) => Field::ComplexRational,
            Scalar::Float(_) => Field::Float,
            Scalar::ComplexFloat(_) => Field::ComplexFloat,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.field().is_exact()
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(x) => x.is_zero(),
            Scalar::ComplexRational(x) => x.is_zero(),
            Scalar::Float(x) => *x == 0.0,
            Scalar::ComplexFloat(x) => x.is_zero(),
        }
    }

    /// Re-tag `self` in a field of the same exactness that is at least as wide.
    pub fn promote(&self, field: Field) -> Result<Scalar> {
        let here = self.field();
        if here == field {
            return Ok(self.clone());
        }
        match (self, field) {
            (Scalar::Rational(x), Field::ComplexRational) => {
                Ok(Scalar::ComplexRational(Complex::new(x.clone(), rat(0))))
            }
            (Scalar::Float(x), Field::ComplexFloat) => {
                Ok(Scalar::ComplexFloat(Complex64::new(*x, 0.0)))
            }
            _ if here.is_exact() != field.is_exact() => Err(Error::MixedExactness {
                left: here,
                right: field,
            }),
            _ => Err(Error::invalid(format!("cannot narrow {here} to {field}"))),
        }
    }

    /// Explicit exact-to-float conversion; floats are returned unchanged.
    pub fn to_float(&self) -> Scalar {
        match self {
            Scalar::Rational(x) => Scalar::Float(rational_to_f64(x)),
            Scalar::ComplexRational(x) => {
                Scalar::ComplexFloat(Complex64::new(rational_to_f64(&x.re), rational_to_f64(&x.im)))
            }
            other => other.clone(),
        }
    }

    binop!(add, +);
    binop!(sub, -);
    binop!(mul, *);

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        if other.is_exact() && other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let field = self.field().join(other.field())?;
        let a = self.promote(field)?;
        let b = other.promote(field)?;
        Ok(match (a, b) {
            (Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x / y),
            (Scalar::ComplexRational(x), Scalar::ComplexRational(y)) => {
                Scalar::ComplexRational(x / y)
            }
            (Scalar::Float(x), Scalar::Float(y)) => Scalar::Float(x / y),
            (Scalar::ComplexFloat(x), Scalar::ComplexFloat(y)) => Scalar::ComplexFloat(x / y),
            _ => unreachable!("operands promoted to a common field"),
        })
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(x) => Scalar::Rational(-x),
            Scalar::ComplexRational(x) => Scalar::ComplexRational(-x.clone()),
            Scalar::Float(x) => Scalar::Float(-x),
            Scalar::ComplexFloat(x) => Scalar::ComplexFloat(-x),
        }
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::ComplexRational(x) => Scalar::ComplexRational(x.conj()),
            Scalar::ComplexFloat(x) => Scalar::ComplexFloat(x.conj()),
            other => other.clone(),
        }
    }

    pub fn powi(&self, exp: u32) -> Scalar {
        let mut acc = Scalar::one(self.field());
        for _ in 0..exp {
            acc = acc.mul(self).expect("same field");
        }
        acc
    }

    /// Drops a vanishing imaginary part. Exact values must have an imaginary
    /// part of exactly zero; complex floats are accepted when
    /// `|im| <= 1e-9 * (1 + |re|)`.
    pub fn into_real(self) -> Result<Scalar> {
        match self {
            Scalar::ComplexRational(x) => {
                if x.im.is_zero() {
                    Ok(Scalar::Rational(x.re))
                } else {
                    Err(Error::NotReal(Scalar::ComplexRational(x).to_string()))
                }
            }
            Scalar::ComplexFloat(x) => {
                if x.im.abs() <= 1e-9 * (1.0 + x.re.abs()) {
                    Ok(Scalar::Float(x.re))
                } else {
                    Err(Error::NotReal(Scalar::ComplexFloat(x).to_string()))
                }
            }
            real => Ok(real),
        }
    }

    /// Sign of a real value (complex values with zero imaginary part count as
    /// real).
    pub fn signum(&self) -> Result<Ordering> {
        match self.clone().into_real()? {
            Scalar::Rational(x) => Ok(x.cmp(&BigRational::zero())),
            Scalar::Float(x) => x
                .partial_cmp(&0.0)
                .ok_or_else(|| Error::Domain("NaN has no sign".into())),
            _ => unreachable!(),
        }
    }

    pub fn cmp_real(&self, other: &Scalar) -> Result<Ordering> {
        self.sub(other)?.signum()
    }

    pub fn is_nonneg_integer(&self) -> bool {
        match self.clone().into_real() {
            Ok(Scalar::Rational(x)) => x.is_integer() && !x.is_negative(),
            Ok(Scalar::Float(x)) => x >= 0.0 && x.fract() == 0.0,
            _ => false,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(x) => Some(x),
            _ => None,
        }
    }

    /// Lossy magnitude, for reporting only.
    pub fn to_f64(&self) -> f64 {
        match self.to_float() {
            Scalar::Float(x) => x,
            Scalar::ComplexFloat(x) => {
                if x.im == 0.0 {
                    x.re
                } else {
                    x.norm()
                }
            }
            _ => unreachable!(),
        }
    }

    /// Least common multiple of the denominators (real and imaginary parts);
    /// `None` for floats.
    pub(crate) fn denominator_lcm(&self) -> Option<BigInt> {
        match self {
            Scalar::Rational(x) => Some(x.denom().clone()),
            Scalar::ComplexRational(x) => Some(x.re.denom().lcm(x.im.denom())),
            _ => None,
        }
    }
}

pub(crate) fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Out of f64 range: fall back to the sign-correct infinity.
        if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// The generalized binomial coefficient `alpha (alpha-1) ... (alpha-k+1) / k!`.
///
/// Exact whenever `alpha` is exact; `k = 0` gives one.
pub fn gen_binomial(alpha: &Scalar, k: u32) -> Scalar {
    let field = alpha.field();
    let mut acc = Scalar::one(field);
    for i in 0..k {
        let factor = alpha
            .sub(&Scalar::from_i64(field, i as i64))
            .and_then(|f| f.div(&Scalar::from_i64(field, i as i64 + 1)))
            .expect("same field, nonzero divisor");
        acc = acc.mul(&factor).expect("same field");
    }
    acc
}

fn looks_float(s: &str) -> bool {
    let lower = s.to_ascii_lowercase();
    lower.contains('.') || lower.contains('e') || lower.contains("inf") || lower.contains("nan")
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::parse(format!("invalid rational `{s}`"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(Error::parse(format!("zero denominator in `{s}`")));
    }
    Ok(BigRational::new(p, q))
}

enum RealPart {
    Exact(BigRational),
    Approx(f64),
}

fn parse_real(s: &str) -> Result<RealPart> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::parse("empty scalar"));
    }
    if looks_float(s) {
        s.parse::<f64>()
            .map(RealPart::Approx)
            .map_err(|_| Error::parse(format!("invalid float `{s}`")))
    } else {
        parse_rational(s).map(RealPart::Exact)
    }
}

/// Index of the sign separating real and imaginary parts, if any.
fn split_point(body: &str) -> Option<usize> {
    let bytes = body.as_bytes();
    (1..bytes.len()).rev().find(|&i| {
        (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E' | b'/')
    })
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(text: &str) -> Result<Scalar> {
        let s = text.trim();
        let Some(body) = s.strip_suffix('i') else {
            return Ok(match parse_real(s)? {
                RealPart::Exact(x) => Scalar::Rational(x),
                RealPart::Approx(x) => Scalar::Float(x),
            });
        };
        let body = body.trim_end();
        let (re_text, im_text) = match split_point(body) {
            Some(at) => (&body[..at], &body[at..]),
            None => ("0", body),
        };
        let im_text = im_text.trim();
        let im_text = match im_text {
            "" | "+" => "1",
            "-" => "-1",
            t => t.strip_prefix('+').unwrap_or(t),
        };
        match (parse_real(re_text)?, parse_real(im_text)?) {
            (RealPart::Exact(re), RealPart::Exact(im)) => Ok(Scalar::gaussian(re, im)),
            (RealPart::Approx(re), RealPart::Approx(im)) => {
                Ok(Scalar::ComplexFloat(Complex64::new(re, im)))
            }
            _ => Err(Error::parse(format!(
                "`{text}` mixes exact and decimal parts"
            ))),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(x) => write!(f, "{x}"),
            Scalar::ComplexRational(x) => {
                let sign = if x.im.is_negative() { '-' } else { '+' };
                write!(f, "{}{}{} i", x.re, sign, x.im.abs())
            }
            Scalar::Float(x) => write!(f, "{x:?}"),
            Scalar::ComplexFloat(x) => {
                let sign = if x.im.is_sign_negative() { '-' } else { '+' };
                write!(f, "{:?}{}{:?} i", x.re, sign, x.im.abs())
            }
        }
    }
}

impl From<BigRational> for Scalar {
    fn from(x: BigRational) -> Self {
        Scalar::Rational(x)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::int(v)
    }
}
