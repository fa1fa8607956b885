//! Exact rationals and the mixed exact/transcendental scalar used for kernel values.
//!
//! Every quantity built from rational parameters stays a [`Rational`]. The
//! exponential families contribute a factor `e^c` with rational `c`; those
//! values are carried as `coeff · e^c` so that sums over a single kernel row
//! (which all share the same normalizer) remain exact. Only sums mixing
//! different exponents fall back to `f64`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"3"`, `"-1/2"` or a plain decimal such as `"0.5"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let (neg, whole) = match whole.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, whole.strip_prefix('+').unwrap_or(whole)),
        };
        if frac.is_empty() && whole.is_empty() {
            return Err(bad());
        }
        if !whole.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{}{}", if whole.is_empty() { "0" } else { whole }, frac);
        let num: BigInt = digits.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(num, den);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Canonical `num/den` (or bare integer) rendering; inverse of [`parse_rational`].
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Kernel value: exact rational, exact rational times `e^exponent`, or float.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(Rational),
    Scaled { coeff: Rational, exponent: Rational },
    Float(f64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(Rational::one())
    }

    /// `coeff · e^exponent`, collapsing to [`Scalar::Exact`] when either factor is trivial.
    pub fn scaled(coeff: Rational, exponent: Rational) -> Self {
        if coeff.is_zero() || exponent.is_zero() {
            Scalar::Exact(coeff)
        } else {
            Scalar::Scaled { coeff, exponent }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Scaled { coeff, .. } => coeff.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    /// True for plain rationals only.
    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    /// True unless rounding has happened somewhere upstream.
    pub fn is_symbolic(&self) -> bool {
        !matches!(self, Scalar::Float(_))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(r) => Some(r),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => rational_to_f64(r),
            Scalar::Scaled { coeff, exponent } => {
                rational_to_f64(coeff) * rational_to_f64(exponent).exp()
            }
            Scalar::Float(x) => *x,
        }
    }

    /// Sign of the value; exact whenever the representation is.
    pub fn signum(&self) -> Ordering {
        match self {
            Scalar::Exact(r) | Scalar::Scaled { coeff: r, .. } => {
                if r.is_positive() {
                    Ordering::Greater
                } else if r.is_negative() {
                    Ordering::Less
                } else {
                    Ordering::Equal
                }
            }
            Scalar::Float(x) => x.partial_cmp(&0.0).unwrap_or(Ordering::Equal),
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Scaled { coeff, exponent } => Scalar::Scaled {
                coeff: coeff.abs(),
                exponent: exponent.clone(),
            },
            Scalar::Float(x) => Scalar::Float(x.abs()),
        }
    }

    pub fn recip(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.recip()),
            Scalar::Scaled { coeff, exponent } => Scalar::Scaled {
                coeff: coeff.recip(),
                exponent: -exponent.clone(),
            },
            Scalar::Float(x) => Scalar::Float(1.0 / x),
        }
    }

    fn exponent(&self) -> Option<Rational> {
        match self {
            Scalar::Exact(_) => Some(Rational::zero()),
            Scalar::Scaled { exponent, .. } => Some(exponent.clone()),
            Scalar::Float(_) => None,
        }
    }

    fn coeff(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(r) | Scalar::Scaled { coeff: r, .. } => Some(r),
            Scalar::Float(_) => None,
        }
    }

    fn add_ref(&self, other: &Scalar) -> Scalar {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        match (self.exponent(), other.exponent()) {
            (Some(a), Some(b)) if a == b => {
                Scalar::scaled(self.coeff().unwrap() + other.coeff().unwrap(), a)
            }
            _ => Scalar::Float(self.to_f64() + other.to_f64()),
        }
    }

    fn mul_ref(&self, other: &Scalar) -> Scalar {
        match (self.coeff(), other.coeff()) {
            (Some(a), Some(b)) => Scalar::scaled(
                a * b,
                self.exponent().unwrap() + other.exponent().unwrap(),
            ),
            _ if self.is_zero() || other.is_zero() => Scalar::zero(),
            _ => Scalar::Float(self.to_f64() * other.to_f64()),
        }
    }

    fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r.clone()),
            Scalar::Scaled { coeff, exponent } => Scalar::Scaled {
                coeff: -coeff.clone(),
                exponent: exponent.clone(),
            },
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Exact(r)
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Float(x)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        let diff = self.add_ref(&other.neg_ref());
        match diff {
            Scalar::Float(x) => x == 0.0,
            exact => exact.is_zero(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            other => write!(f, "{}", other.to_f64()),
        }
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                let f: fn(&Scalar, &Scalar) -> Scalar = $body;
                f(self, rhs)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

scalar_binop!(Add, add, |a, b| a.add_ref(b));
scalar_binop!(Sub, sub, |a, b| a.add_ref(&b.neg_ref()));
scalar_binop!(Mul, mul, |a, b| a.mul_ref(b));
scalar_binop!(Div, div, |a, b| a.mul_ref(&b.recip()));

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert_eq!(parse_rational("0.5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_rational("4/8").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn canonical_strings() {
        assert_eq!(format_rational(&rat(2, 4)), "1/2");
        assert_eq!(format_rational(&int(7)), "7");
        assert_eq!(format_rational(&rat(-1, 3)), "-1/3");
    }

    #[test]
    fn scaled_values_add_exactly_with_common_exponent() {
        let e = rat(-1, 2);
        let a = Scalar::scaled(rat(1, 3), e.clone());
        let b = Scalar::scaled(rat(2, 3), e.clone());
        let s = &a + &b;
        match &s {
            Scalar::Scaled { coeff, exponent } => {
                assert_eq!(coeff, &int(1));
                assert_eq!(exponent, &e);
            }
            other => panic!("expected scaled, got {other:?}"),
        }
        assert!((s.to_f64() - (-0.5f64).exp()).abs() < 1e-15);
        // cancelling the exponent gives an exact rational back
        let back = &s * &Scalar::scaled(int(1), rat(1, 2));
        assert_eq!(back.as_rational(), Some(&int(1)));
    }

    #[test]
    fn mixing_exponents_falls_back_to_float() {
        let a = Scalar::scaled(int(1), int(1));
        let b = Scalar::one();
        let s = a + b;
        assert!(matches!(s, Scalar::Float(_)));
        assert!((s.to_f64() - (1.0f64.exp() + 1.0)).abs() < 1e-12);
    }
}
