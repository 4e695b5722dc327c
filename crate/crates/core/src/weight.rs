//! Scalar abstraction shared by the floating and exact code paths.

use alloc::format;
use alloc::string::{String, ToString};
use core::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational weights.
pub type Rational = BigRational;

/// A field element usable as a probability weight.
///
/// `f64` compares with tolerance [`crate::EPS`]; [`Rational`] compares exactly.
pub trait Weight:
    Clone + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Debug + Display
{
    /// Tolerance used for sign decisions on partial sums and for the rank threshold.
    fn tolerance() -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).unwrap() / Self::from_i64(den).unwrap()
    }

    /// Exact rational image (dyadic for floats).
    fn to_exact(&self) -> Rational;

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Sign with tolerance: `-1`, `0` or `1`.
    fn sign_tol(&self) -> i8 {
        let tol = Self::tolerance();
        if *self > tol {
            1
        } else if *self < -tol {
            -1
        } else {
            0
        }
    }

    fn min_of(a: &Self, b: &Self) -> Self {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    fn max_of(a: &Self, b: &Self) -> Self {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }
}

impl Weight for f64 {
    fn tolerance() -> Self {
        crate::EPS
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_exact(&self) -> Rational {
        rational_from_f64(*self)
    }
}

impl Weight for Rational {
    fn tolerance() -> Self {
        Rational::zero()
    }

    fn to_exact(&self) -> Rational {
        self.clone()
    }
}

/// Parses a decimal (`"0.58"`, `"-1.5e-3"`) or fraction (`"29/50"`) into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let err = || Error::Parse(s.to_string());
    if s.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| err())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut numer: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().map_err(|_| err())? };
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u8);
    let value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Exact conversion of a finite float (dyadic rational).
pub fn rational_from_f64(x: f64) -> Rational {
    Rational::from_float(x).unwrap_or_else(Rational::zero)
}

/// `"p/q"` rendering; integers render as `"p"`.
pub fn rational_to_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
