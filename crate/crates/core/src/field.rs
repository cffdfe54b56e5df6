//! Exact scalars over ℚ, ℚ(i) and ℚ(√m).
//!
//! Every element is stored as `a + b·α` with `a, b` reduced big rationals and
//! `α² = -1` (Gaussian) or `α² = m` (real quadratic). Rational elements embed
//! into either extension, but the two extensions never mix.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::FieldError;

/// Which ground field an element (or matrix) lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    /// ℚ(i)
    Gaussian,
    /// ℚ(√m), m square-free and > 1.
    Sqrt(u64),
}

impl Field {
    /// Builds ℚ(√m), rejecting m that are not square-free or not > 1.
    pub fn sqrt(m: u64) -> Result<Field, FieldError> {
        if m < 2 || !is_square_free(m) {
            return Err(FieldError::NotSquareFree(m));
        }
        Ok(Field::Sqrt(m))
    }

    /// Smallest field containing both, if any.
    pub fn join(self, other: Field) -> Result<Field, FieldError> {
        match (self, other) {
            (a, b) if a == b => Ok(a),
            (Field::Rational, b) => Ok(b),
            (a, Field::Rational) => Ok(a),
            (a, b) => Err(FieldError::Incompatible(a, b)),
        }
    }

    fn alpha_square(self) -> BigRational {
        match self {
            Field::Rational => BigRational::zero(),
            Field::Gaussian => -BigRational::one(),
            Field::Sqrt(m) => BigRational::from_integer(BigInt::from(m)),
        }
    }

    pub fn is_real(self) -> bool {
        !matches!(self, Field::Gaussian)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Gaussian => write!(f, "Q(i)"),
            Field::Sqrt(m) => write!(f, "Q(sqrt({m}))"),
        }
    }
}

impl FromStr for Field {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        match t.as_str() {
            "Q" | "QQ" | "rational" => Ok(Field::Rational),
            "Q(i)" | "gaussian" => Ok(Field::Gaussian),
            _ => {
                let inner = t
                    .strip_prefix("Q(sqrt(")
                    .and_then(|r| r.strip_suffix("))"))
                    .or_else(|| t.strip_prefix("sqrt"));
                match inner.and_then(|v| v.parse::<u64>().ok()) {
                    Some(m) => Field::sqrt(m),
                    None => Err(FieldError::Parse(s.to_string())),
                }
            }
        }
    }
}

pub(crate) fn is_square_free(m: u64) -> bool {
    let mut k = 2u64;
    while k * k <= m {
        if m % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// An element `re + ext·α` of one of the supported fields.
#[derive(Clone, Debug)]
pub struct ExactScalar {
    re: BigRational,
    ext: BigRational,
    field: Field,
}

/// Column vectors are plain sequences of scalars.
pub type Vector = Vec<ExactScalar>;

impl ExactScalar {
    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_i64(v: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        ExactScalar {
            re: q,
            ext: BigRational::zero(),
            field: Field::Rational,
        }
    }

    /// `re + ext·α` in the given field. `ext` must be zero for ℚ.
    pub fn new(re: BigRational, ext: BigRational, field: Field) -> Result<Self, FieldError> {
        if field == Field::Rational && !ext.is_zero() {
            return Err(FieldError::NoGenerator(field));
        }
        Ok(ExactScalar { re, ext, field })
    }

    /// The imaginary unit of ℚ(i).
    pub fn i() -> Self {
        ExactScalar {
            re: BigRational::zero(),
            ext: BigRational::one(),
            field: Field::Gaussian,
        }
    }

    /// √m in ℚ(√m).
    pub fn sqrt(m: u64) -> Result<Self, FieldError> {
        let field = Field::sqrt(m)?;
        Ok(ExactScalar {
            re: BigRational::zero(),
            ext: BigRational::one(),
            field,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.re
    }

    pub fn generator_part(&self) -> &BigRational {
        &self.ext
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.ext.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.ext.is_zero()
    }

    /// True when the value lies in ℚ, whatever the tag.
    pub fn is_rational(&self) -> bool {
        self.ext.is_zero()
    }

    /// Re-tags into a larger field.
    pub fn coerce(&self, field: Field) -> Result<Self, FieldError> {
        let joined = self.field.join(field)?;
        if joined != field {
            return Err(FieldError::Incompatible(self.field, field));
        }
        Ok(ExactScalar {
            re: self.re.clone(),
            ext: self.ext.clone(),
            field,
        })
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, FieldError> {
        let field = self.field.join(rhs.field)?;
        Ok(ExactScalar {
            re: &self.re + &rhs.re,
            ext: &self.ext + &rhs.ext,
            field,
        })
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, FieldError> {
        let field = self.field.join(rhs.field)?;
        Ok(ExactScalar {
            re: &self.re - &rhs.re,
            ext: &self.ext - &rhs.ext,
            field,
        })
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, FieldError> {
        let field = self.field.join(rhs.field)?;
        if self.ext.is_zero() && rhs.ext.is_zero() {
            return Ok(ExactScalar {
                re: &self.re * &rhs.re,
                ext: BigRational::zero(),
                field,
            });
        }
        let d = field.alpha_square();
        let re = &self.re * &rhs.re + &self.ext * &rhs.ext * d;
        let ext = &self.re * &rhs.ext + &self.ext * &rhs.re;
        Ok(ExactScalar { re, ext, field })
    }

    /// Multiplicative inverse via the conjugate.
    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if self.ext.is_zero() {
            return Ok(ExactScalar {
                re: self.re.recip(),
                ext: BigRational::zero(),
                field: self.field,
            });
        }
        let norm = self.norm();
        Ok(ExactScalar {
            re: &self.re / &norm,
            ext: -(&self.ext / &norm),
            field: self.field,
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, FieldError> {
        self.checked_mul(&rhs.inv()?)
    }

    /// Field norm `a² − b²α²` (never zero for nonzero input).
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re - &self.ext * &self.ext * self.field.alpha_square()
    }

    /// Galois conjugate `a − b·α`.
    pub fn conjugate(&self) -> Self {
        ExactScalar {
            re: self.re.clone(),
            ext: -self.ext.clone(),
            field: self.field,
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = ExactScalar::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Sign of the real image under the embedding `α ↦ +√m` (`plus = true`)
    /// or `α ↦ −√m`. `None` for ℚ(i), which has no real embedding.
    pub fn sign_at(&self, plus: bool) -> Option<Ordering> {
        match self.field {
            Field::Gaussian => {
                if self.ext.is_zero() {
                    Some(self.re.cmp(&BigRational::zero()))
                } else {
                    None
                }
            }
            Field::Rational => Some(self.re.cmp(&BigRational::zero())),
            Field::Sqrt(m) => {
                let b = if plus { self.ext.clone() } else { -self.ext.clone() };
                Some(sign_of_sum_with_root(&self.re, &b, m))
            }
        }
    }

    /// Approximate value for display/debug only.
    pub fn to_f64_parts(&self) -> (f64, f64) {
        let f = |q: &BigRational| {
            let n: f64 = q.numer().to_string().parse().unwrap_or(f64::NAN);
            let d: f64 = q.denom().to_string().parse().unwrap_or(f64::NAN);
            n / d
        };
        (f(&self.re), f(&self.ext))
    }
}

/// sign(a + b√m), decided exactly.
fn sign_of_sum_with_root(a: &BigRational, b: &BigRational, m: u64) -> Ordering {
    let zero = BigRational::zero();
    let sa = a.cmp(&zero);
    let sb = b.cmp(&zero);
    match (sa, sb) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (x, y) if x == y => x,
        _ => {
            // opposite signs: compare a² with b²m
            let lhs = a * a;
            let rhs = b * b * BigRational::from_integer(BigInt::from(m));
            match lhs.cmp(&rhs) {
                Ordering::Greater => sa,
                Ordering::Less => sb,
                Ordering::Equal => Ordering::Equal,
            }
        }
    }
}

impl PartialEq for ExactScalar {
    fn eq(&self, other: &Self) -> bool {
        self.re == other.re
            && self.ext == other.ext
            && (self.ext.is_zero() || self.field == other.field)
    }
}

impl Eq for ExactScalar {}

impl Default for ExactScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for ExactScalar {
    fn from(v: i64) -> Self {
        ExactScalar::from_i64(v)
    }
}

impl From<BigRational> for ExactScalar {
    fn from(q: BigRational) -> Self {
        ExactScalar::from_rational(q)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            /// Panics when the operands live in incompatible extensions.
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$method(rhs)
            }
        }
        impl $tr<ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        self.field = self.field.join(rhs.field).unwrap_or_else(|e| panic!("{e}"));
        self.re += &rhs.re;
        if !rhs.ext.is_zero() {
            self.ext += &rhs.ext;
        }
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, rhs: &ExactScalar) {
        self.field = self.field.join(rhs.field).unwrap_or_else(|e| panic!("{e}"));
        self.re -= &rhs.re;
        if !rhs.ext.is_zero() {
            self.ext -= &rhs.ext;
        }
    }
}

impl MulAssign<&ExactScalar> for ExactScalar {
    fn mul_assign(&mut self, rhs: &ExactScalar) {
        *self = &*self * rhs;
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            re: -self.re,
            ext: -self.ext,
            field: self.field,
        }
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -(self.clone())
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ext.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        let unit = match self.field {
            Field::Gaussian => "i".to_string(),
            Field::Sqrt(m) => format!("sqrt({m})"),
            Field::Rational => unreachable!("rational elements carry no generator part"),
        };
        let mut out = String::new();
        if !self.re.is_zero() {
            out.push_str(&fmt_rational(&self.re));
        }
        let mag = self.ext.abs();
        if self.ext.is_negative() {
            out.push('-');
        } else if !self.re.is_zero() {
            out.push('+');
        }
        if !mag.is_one() {
            out.push_str(&fmt_rational(&mag));
            out.push('*');
        }
        out.push_str(&unit);
        write!(f, "{out}")
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

impl FromStr for ExactScalar {
    type Err = FieldError;

    /// Accepts `p/q`, `a+b*i`, `a-b*sqrt(m)`, `i`, `-sqrt(5)` and so on.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || FieldError::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        // split into signed terms, ignoring signs inside parentheses
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut depth = 0i32;
        let mut cur = String::new();
        let mut neg = false;
        for (idx, c) in t.chars().enumerate() {
            match c {
                '(' => {
                    depth += 1;
                    cur.push(c)
                }
                ')' => {
                    depth -= 1;
                    cur.push(c)
                }
                '+' | '-' if depth == 0 => {
                    if idx != 0 {
                        if cur.is_empty() {
                            return Err(err());
                        }
                        terms.push((neg, std::mem::take(&mut cur)));
                    }
                    neg = c == '-';
                }
                _ => cur.push(c),
            }
        }
        if cur.is_empty() {
            return Err(err());
        }
        terms.push((neg, cur));

        let mut re = BigRational::zero();
        let mut ext = BigRational::zero();
        let mut field = Field::Rational;
        for (neg, term) in terms {
            let (coef, unit) = match term.rsplit_once('*') {
                Some((c, u)) => (parse_rational(c).ok_or_else(err)?, Some(u.to_string())),
                None => match parse_rational(&term) {
                    Some(q) => (q, None),
                    None => (BigRational::one(), Some(term.clone())),
                },
            };
            let coef = if neg { -coef } else { coef };
            match unit {
                None => re += coef,
                Some(u) => {
                    let f = if u == "i" {
                        Field::Gaussian
                    } else {
                        let m = u
                            .strip_prefix("sqrt(")
                            .and_then(|r| r.strip_suffix(')'))
                            .and_then(|r| r.parse::<u64>().ok())
                            .ok_or_else(err)?;
                        Field::sqrt(m)?
                    };
                    field = field.join(f)?;
                    ext += coef;
                }
            }
        }
        Ok(ExactScalar { re, ext, field })
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Int(i64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Int(v) => Ok(ExactScalar::from_i64(v)),
        }
    }
}
