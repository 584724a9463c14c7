//! Sparse multivariate polynomials over exact rationals or complex doubles.
//!
//! A [`VariableRing`] names the variables and tags the coefficient field. A
//! [`Polynomial`] stores its nonzero terms in a map keyed by [`Exponent`],
//! ordered by graded reverse lexicographic order, so the last entry of the
//! map is always the leading term.

mod matrix;
mod parse;
mod polynomial;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use matrix::{jacobian, minors, PolyMatrix};
pub use parse::{parse, parse_rational};
pub use polynomial::{Exponent, Polynomial};

/// Exact rational coefficients.
pub type Rational = BigRational;

/// Working precision of the complex field. Only IEEE double is realized.
pub const DOUBLE_PRECISION_BITS: u32 = 53;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable `{name}` at position {position}")]
    UnknownVariable { name: String, position: usize },
    #[error("polynomials belong to different rings")]
    RingMismatch,
    #[error("expected {expected} coordinates, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("jacobian of an empty polynomial list")]
    EmptyInput,
    #[error("minor size {size} out of range for a {rows}x{cols} matrix")]
    MinorSize { size: usize, rows: usize, cols: usize },
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("coefficient field mismatch: ring is {ring}, polynomial type is {poly}")]
    FieldMismatch { ring: FieldKind, poly: FieldKind },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rational,
    Complex { precision_bits: u32 },
}

impl FieldKind {
    pub const COMPLEX_DOUBLE: FieldKind = FieldKind::Complex {
        precision_bits: DOUBLE_PRECISION_BITS,
    };
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rational => write!(f, "QQ"),
            FieldKind::Complex { precision_bits } => write!(f, "CC_{precision_bits}"),
        }
    }
}

/// Ordered variable names plus a coefficient-field tag.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariableRing {
    names: Vec<String>,
    field: FieldKind,
}

impl VariableRing {
    pub fn new<S: AsRef<str>>(names: &[S], field: FieldKind) -> Result<Arc<Self>, RingError> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(RingError::InvalidRing("empty variable name".into()));
            }
            if !is_identifier(name) {
                return Err(RingError::InvalidRing(format!("`{name}` is not an identifier")));
            }
            if names[..i].contains(name) {
                return Err(RingError::InvalidRing(format!("duplicate variable `{name}`")));
            }
        }
        if let FieldKind::Complex { precision_bits } = field {
            if precision_bits != DOUBLE_PRECISION_BITS {
                return Err(RingError::InvalidRing(format!(
                    "complex precision of {precision_bits} bits is not supported (only {DOUBLE_PRECISION_BITS})"
                )));
            }
        }
        Ok(Arc::new(Self { names, field }))
    }

    pub fn rational<S: AsRef<str>>(names: &[S]) -> Result<Arc<Self>, RingError> {
        Self::new(names, FieldKind::Rational)
    }

    pub fn complex<S: AsRef<str>>(names: &[S]) -> Result<Arc<Self>, RingError> {
        Self::new(names, FieldKind::COMPLEX_DOUBLE)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Same variables over another coefficient field.
    pub fn with_field(&self, field: FieldKind) -> Result<Arc<Self>, RingError> {
        Self::new(&self.names, field)
    }

    /// A name that is not yet used in this ring, derived from `base`.
    pub fn fresh_name(&self, base: &str) -> String {
        if self.index_of(base).is_none() {
            return base.to_string();
        }
        (0..)
            .map(|i| format!("{base}_{i}"))
            .find(|n| self.index_of(n).is_none())
            .expect("unbounded search")
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A coefficient field usable by [`Polynomial`].
pub trait Coefficient:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn field_kind() -> FieldKind;
    fn from_rational(q: &Rational) -> Self;
    fn from_i64(v: i64) -> Self;
    fn inverse(&self) -> Option<Self>;
    /// The coefficient in polynomial-text syntax.
    fn render(&self) -> String;
    /// True for negative reals; the printer then emits ` - ` and the magnitude.
    fn is_negative(&self) -> bool;
}

impl Coefficient for Rational {
    fn field_kind() -> FieldKind {
        FieldKind::Rational
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }

    fn render(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

impl Coefficient for Complex64 {
    fn field_kind() -> FieldKind {
        FieldKind::COMPLEX_DOUBLE
    }

    fn from_rational(q: &Rational) -> Self {
        Complex64::new(rational_to_f64(q), 0.0)
    }

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn inverse(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.inv())
    }

    fn render(&self) -> String {
        if self.im == 0.0 {
            format!("{}", self.re)
        } else {
            format!("({}{:+}*i)", self.re, self.im)
        }
    }

    fn is_negative(&self) -> bool {
        self.im == 0.0 && self.re < 0.0
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_rejects_duplicates_and_bad_names() {
        assert!(VariableRing::rational(&["x", "x"]).is_err());
        assert!(VariableRing::rational(&["x", ""]).is_err());
        assert!(VariableRing::rational(&["1x"]).is_err());
        assert!(VariableRing::rational(&["x1", "x_2"]).is_ok());
    }

    #[test]
    fn only_double_complex_precision() {
        assert!(VariableRing::new(&["x"], FieldKind::Complex { precision_bits: 106 }).is_err());
        assert!(VariableRing::complex(&["x"]).is_ok());
    }

    #[test]
    fn fresh_name_avoids_collisions() {
        let r = VariableRing::rational(&["y", "y_0"]).unwrap();
        assert_eq!(r.fresh_name("y"), "y_1");
        assert_eq!(r.fresh_name("t"), "t");
    }
}
