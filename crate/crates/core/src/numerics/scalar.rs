//! Precision-generic scalars.
//!
//! Two backends implement [`Scalar`]: [`Rational`] (exact, arbitrary size) and
//! [`BigFloat`] (binary floating point with a per-value precision of at least
//! 64 bits). Generic algorithms take a [`Precision`] wherever they need to
//! materialise constants.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};
use std::str::FromStr;

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::ops::UnsignedAbs;
use dashu_int::{IBig, UBig};
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::NumericsError;

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

/// Complex pair over a scalar backend.
pub type Complex<T> = num_complex::Complex<T>;

/// Arithmetic mode of one computation context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Exact,
    /// Binary floating point with the given number of significand bits.
    Float(u32),
}

impl Precision {
    pub const MIN_FLOAT_BITS: u32 = 64;

    pub fn validate(self) -> Result<Self, NumericsError> {
        match self {
            Precision::Float(bits) if bits < Self::MIN_FLOAT_BITS => {
                Err(NumericsError::InvalidPrecision(format!(
                    "float precision must be at least {} bits, got {bits}",
                    Self::MIN_FLOAT_BITS
                )))
            }
            p => Ok(p),
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Precision::Exact)
    }

    /// Bits used when a float routine needs a working precision for this mode.
    pub fn working_bits(self) -> u32 {
        match self {
            Precision::Exact => 256,
            Precision::Float(bits) => bits.max(Self::MIN_FLOAT_BITS),
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precision::Exact => write!(f, "exact"),
            Precision::Float(bits) => write!(f, "float({bits})"),
        }
    }
}

impl FromStr for Precision {
    type Err = NumericsError;

    /// Accepts `exact`, `float(256)`, `float:256` and `float256`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        if t == "exact" {
            return Ok(Precision::Exact);
        }
        let bits = t
            .strip_prefix("float")
            .map(|rest| rest.trim_matches(|c| c == '(' || c == ')' || c == ':' || c == ' '))
            .and_then(|digits| digits.parse::<u32>().ok())
            .ok_or_else(|| NumericsError::InvalidPrecision(format!("unrecognised precision mode `{s}`")))?;
        Precision::Float(bits).validate()
    }
}

/// Field element usable by every algorithm in this crate.
pub trait Scalar:
    Clone + fmt::Debug + fmt::Display + PartialEq + PartialOrd + Send + Sync + 'static + Num + Neg<Output = Self>
{
    /// Precision of this value. Floats built from integer constants report `Float(0)`.
    fn precision(&self) -> Precision;

    fn is_exact_backend() -> bool;

    fn from_bigint_ratio(num: BigInt, den: BigInt, prec: Precision) -> Self;

    fn from_rational(r: &Rational, prec: Precision) -> Self {
        Self::from_bigint_ratio(r.numer().clone(), r.denom().clone(), prec)
    }

    /// Exact conversion for the rational backend (every finite f64 is dyadic).
    fn from_f64(v: f64, prec: Precision) -> Self {
        let r = Rational::from_float(v).expect("finite f64");
        Self::from_rational(&r, prec)
    }

    fn from_big_float(v: &BigFloat, prec: Precision) -> Self;

    fn to_big_float(&self, bits: u32) -> BigFloat;

    fn to_f64(&self) -> f64;

    /// Natural log of |self|, robust for values outside the f64 range.
    fn ln_abs(&self) -> f64;

    fn abs_val(&self) -> Self;

    /// Exact rational value of this scalar (floats are dyadic).
    fn to_rational_exact(&self) -> Rational;

    fn to_exact_string(&self) -> String;

    /// Values whose modulus is at or below this are treated as zero when testing
    /// pole proximity. Zero in exact mode.
    fn pole_tolerance(prec: Precision) -> Self;

    fn from_i64(v: i64, prec: Precision) -> Self {
        Self::from_bigint_ratio(BigInt::from(v), BigInt::one(), prec)
    }

    fn from_ratio(num: i64, den: i64, prec: Precision) -> Self {
        Self::from_bigint_ratio(BigInt::from(num), BigInt::from(den), prec)
    }

    fn parse_scalar(s: &str, prec: Precision) -> Result<Self, NumericsError> {
        let r = parse_rational(s)?;
        Ok(Self::from_rational(&r, prec))
    }

    fn sign(&self) -> Ordering {
        self.partial_cmp(&Self::zero()).unwrap_or(Ordering::Equal)
    }
}

/// Parses `p/q`, signed integers and decimal/scientific literals into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, NumericsError> {
    let t = s.trim();
    let bad = || NumericsError::Parse(format!("not a rational literal: `{s}`"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = t.split_once('/') {
        let num = parse_rational(p)?;
        let den = parse_rational(q)?;
        if den.is_zero() {
            return Err(NumericsError::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(num / den);
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut num = BigInt::from_str(if all_digits.is_empty() { "0" } else { &all_digits }).map_err(|_| bad())?;
    if negative {
        num = -num;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(r)
}

/// Parses a complex literal such as `2`, `-1/2`, `2.5+2i`, `-1-1i` or `3i` into (re, im).
pub fn parse_complex_rational(s: &str) -> Result<(Rational, Rational), NumericsError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return Ok((parse_rational(&t)?, Rational::zero()));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (parse_rational(&body[..i])?, &body[i..]),
        None => (Rational::zero(), body),
    };
    let im = match im {
        "" | "+" => Rational::one(),
        "-" => -Rational::one(),
        v => parse_rational(v)?,
    };
    Ok((re, im))
}

fn bigint_ln(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().map(|x| x.abs().ln()).unwrap_or(f64::NAN);
    }
    let shift = bits - 64;
    let top = (v.abs() >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

impl Scalar for Rational {
    fn precision(&self) -> Precision {
        Precision::Exact
    }

    fn is_exact_backend() -> bool {
        true
    }

    fn from_bigint_ratio(num: BigInt, den: BigInt, _prec: Precision) -> Self {
        Rational::new(num, den)
    }

    fn from_rational(r: &Rational, _prec: Precision) -> Self {
        r.clone()
    }

    fn from_big_float(v: &BigFloat, _prec: Precision) -> Self {
        v.to_rational()
    }

    fn to_big_float(&self, bits: u32) -> BigFloat {
        BigFloat::from_bigint_ratio(self.numer().clone(), self.denom().clone(), Precision::Float(bits))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| self.ln_abs().exp() * if self.is_negative() { -1.0 } else { 1.0 })
    }

    fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        bigint_ln(self.numer()) - bigint_ln(self.denom())
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn to_rational_exact(&self) -> Rational {
        self.clone()
    }

    fn to_exact_string(&self) -> String {
        self.to_string()
    }

    fn pole_tolerance(_prec: Precision) -> Self {
        Rational::zero()
    }
}

type Repr = FBig<HalfEven, 2>;

/// Bits used for a division whose operands both carry unlimited precision.
const FALLBACK_BITS: usize = 128;

/// Binary floating point value with its own precision (0 means an exact integer constant).
#[derive(Clone, Debug)]
pub struct BigFloat(Repr);

impl BigFloat {
    pub fn bits(&self) -> u32 {
        self.0.precision() as u32
    }

    pub fn with_bits(&self, bits: u32) -> Self {
        BigFloat(self.0.clone().with_precision(bits as usize).value())
    }

    pub fn to_rational(&self) -> Rational {
        let repr = self.0.repr();
        let sig = ibig_to_bigint(repr.significand());
        let exp = repr.exponent();
        if exp >= 0 {
            Rational::from_integer(sig << exp as usize)
        } else {
            Rational::new(sig, BigInt::one() << (-exp) as usize)
        }
    }

    pub fn from_int(v: i64) -> Self {
        BigFloat(Repr::from(v))
    }
}

fn ibig_to_bigint(v: &IBig) -> BigInt {
    let sign = match v.cmp(&IBig::ZERO) {
        Ordering::Less => Sign::Minus,
        Ordering::Greater => Sign::Plus,
        Ordering::Equal => Sign::NoSign,
    };
    let mag: UBig = v.unsigned_abs();
    BigInt::from_biguint(sign, BigUint::from_bytes_le(&mag.to_le_bytes()))
}

fn bigint_to_ibig(v: &BigInt) -> IBig {
    let (sign, bytes) = v.to_bytes_le();
    let mag = IBig::from(UBig::from_le_bytes(&bytes));
    if sign == Sign::Minus {
        -mag
    } else {
        mag
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.precision() == 0 {
            return write!(f, "{}", self.to_rational());
        }
        let digits = ((self.0.precision() as f64) * std::f64::consts::LOG10_2).ceil() as usize;
        let dec = self.0.clone().with_base::<10>().value();
        let dec = dec.with_precision(digits.max(1)).value();
        write!(f, "{dec}")
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.0.repr() == other.0.repr()
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.repr().partial_cmp(other.0.repr())
    }
}

impl Add for BigFloat {
    type Output = BigFloat;
    fn add(self, rhs: Self) -> Self {
        BigFloat(self.0 + rhs.0)
    }
}

impl Sub for BigFloat {
    type Output = BigFloat;
    fn sub(self, rhs: Self) -> Self {
        BigFloat(self.0 - rhs.0)
    }
}

impl Mul for BigFloat {
    type Output = BigFloat;
    fn mul(self, rhs: Self) -> Self {
        BigFloat(self.0 * rhs.0)
    }
}

impl Div for BigFloat {
    type Output = BigFloat;
    fn div(self, rhs: Self) -> Self {
        let lhs = if self.0.precision() == 0 && rhs.0.precision() == 0 {
            self.0.with_precision(FALLBACK_BITS).value()
        } else {
            self.0
        };
        BigFloat(lhs / rhs.0)
    }
}

impl Rem for BigFloat {
    type Output = BigFloat;
    fn rem(self, rhs: Self) -> Self {
        let q = (self.clone() / rhs.clone()).0.trunc();
        self - BigFloat(q) * rhs
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> Self {
        BigFloat(-self.0)
    }
}

impl Zero for BigFloat {
    fn zero() -> Self {
        BigFloat(Repr::ZERO)
    }
    fn is_zero(&self) -> bool {
        self.0.repr().significand() == &IBig::ZERO
    }
}

impl One for BigFloat {
    fn one() -> Self {
        BigFloat(Repr::ONE)
    }
}

impl Num for BigFloat {
    type FromStrRadixErr = NumericsError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        if radix != 10 {
            return Err(NumericsError::Parse(format!("radix {radix} unsupported")));
        }
        let r = parse_rational(s)?;
        Ok(BigFloat::from_rational(&r, Precision::Float(FALLBACK_BITS as u32)))
    }
}

impl Scalar for BigFloat {
    fn precision(&self) -> Precision {
        Precision::Float(self.bits())
    }

    fn is_exact_backend() -> bool {
        false
    }

    fn from_bigint_ratio(num: BigInt, den: BigInt, prec: Precision) -> Self {
        let bits = match prec {
            Precision::Float(b) => b as usize,
            Precision::Exact => FALLBACK_BITS,
        };
        let n = Repr::from(bigint_to_ibig(&num));
        if den.is_one() {
            if num.bits() as usize <= bits {
                return BigFloat(n.with_precision(bits).value());
            }
            return BigFloat(n.with_precision(bits).value());
        }
        let d = Repr::from(bigint_to_ibig(&den));
        BigFloat(n.with_precision(bits).value() / d.with_precision(bits).value())
    }

    fn from_big_float(v: &BigFloat, prec: Precision) -> Self {
        match prec {
            Precision::Float(b) => v.with_bits(b),
            Precision::Exact => v.clone(),
        }
    }

    fn to_big_float(&self, bits: u32) -> BigFloat {
        self.with_bits(bits)
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let repr = self.0.repr();
        bigint_ln(&ibig_to_bigint(repr.significand())) + repr.exponent() as f64 * std::f64::consts::LN_2
    }

    fn abs_val(&self) -> Self {
        if self.0.repr().significand() < &IBig::ZERO {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn to_rational_exact(&self) -> Rational {
        self.to_rational()
    }

    fn to_exact_string(&self) -> String {
        self.to_string()
    }

    fn pole_tolerance(prec: Precision) -> Self {
        let bits = prec.working_bits();
        BigFloat(Repr::from_parts(IBig::ONE, -((bits / 2) as isize)))
    }
}

/// Modulus of a complex pair, computed in f64 from the exact parts.
pub fn complex_abs_f64<T: Scalar>(z: &Complex<T>) -> f64 {
    let re = z.re.to_f64();
    let im = z.im.to_f64();
    if re.is_finite() && im.is_finite() && (re != 0.0 || im != 0.0) {
        return re.hypot(im);
    }
    let n2 = z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone();
    if n2.is_zero() {
        0.0
    } else {
        (0.5 * n2.ln_abs()).exp()
    }
}

/// Rounds a rational to the nearest multiple of 2^-bits.
pub fn round_to_dyadic(r: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits as usize;
    let scaled = r * Rational::from_integer(scale.clone());
    let (q, rem) = scaled.numer().div_mod_floor(scaled.denom());
    let twice = rem * 2;
    let q = if twice >= *scaled.denom() { q + 1 } else { q };
    Rational::new(q, scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn parses_complex_literals() {
        assert_eq!(parse_complex_rational("2.5+2i").unwrap(), (q("5/2"), q("2")));
        assert_eq!(parse_complex_rational("-1-1i").unwrap(), (q("-1"), q("-1")));
        assert_eq!(parse_complex_rational("-i").unwrap(), (q("0"), q("-1")));
        assert_eq!(parse_complex_rational("1e-2+3/4i").unwrap(), (q("1/100"), q("3/4")));
        assert_eq!(parse_complex_rational(" -2 ").unwrap(), (q("-2"), q("0")));
        assert!(parse_complex_rational("1+xi").is_err());
    }

    #[test]
    fn parses_rational_literals() {
        assert_eq!(q("3/4"), Rational::new(3.into(), 4.into()));
        assert_eq!(q("-0.25"), Rational::new((-1).into(), 4.into()));
        assert_eq!(q("1e-3"), Rational::new(1.into(), 1000.into()));
        assert_eq!(q("2.5E2"), Rational::from_integer(250.into()));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn precision_modes_parse_and_validate() {
        assert_eq!("exact".parse::<Precision>().unwrap(), Precision::Exact);
        assert_eq!("float(128)".parse::<Precision>().unwrap(), Precision::Float(128));
        assert_eq!("float:256".parse::<Precision>().unwrap(), Precision::Float(256));
        assert!("float(32)".parse::<Precision>().is_err());
        assert!("double".parse::<Precision>().is_err());
    }

    #[test]
    fn bigfloat_round_trips_through_rational() {
        let third = BigFloat::from_ratio(1, 3, Precision::Float(200));
        assert_eq!(third.bits(), 200);
        let r = third.to_rational();
        let err = (r - Rational::new(1.into(), 3.into())).abs();
        assert!(err < Rational::new(1.into(), BigInt::one() << 199));
        assert!((third.to_f64() - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn bigfloat_constants_adopt_operand_precision() {
        let x = BigFloat::from_ratio(1, 7, Precision::Float(160));
        let y = BigFloat::one() - x;
        assert_eq!(y.bits(), 160);
        let z = BigFloat::one() / BigFloat::from_i64(3, Precision::Float(96));
        assert_eq!(z.bits(), 96);
    }

    #[test]
    fn ln_abs_handles_huge_values() {
        let big = Rational::from_integer(BigInt::one() << 5000usize);
        assert!((big.ln_abs() - 5000.0 * std::f64::consts::LN_2).abs() < 1e-9);
        let f = BigFloat::from_bigint_ratio(BigInt::one() << 3000usize, BigInt::one(), Precision::Float(64));
        assert!((f.ln_abs() - 3000.0 * std::f64::consts::LN_2).abs() < 1e-9);
    }

    #[test]
    fn dyadic_rounding() {
        let r = round_to_dyadic(&q("1/3"), 4);
        assert_eq!(r, q("5/16"));
    }
}
