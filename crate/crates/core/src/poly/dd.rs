//! Double-double numbers: an unevaluated sum `hi + lo` of two floats with
//! about 106 significant bits.
//!
//! Output polynomials of high degree are stored with these coefficients.
//! Rounding such a polynomial to plain floats perturbs its value by the unit
//! roundoff times the sum of the magnitudes of its terms, which far from the
//! origin can exceed the value itself by many orders of magnitude.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Rem, RemAssign, Sub, SubAssign};

use num_bigint::{BigInt, Sign};
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

use super::Rational;
use crate::{Error, Result};

/// `hi + lo` with `hi = fl(hi + lo)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

/// Unit roundoff of double-double arithmetic, as used in error bounds.
pub const DD_UNIT: f64 = f64::EPSILON * f64::EPSILON * 0.25;

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

impl Dd {
    pub const fn new(hi: f64) -> Self {
        Dd { hi, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    /// Nearest double-double to `r`, up to the last bit of `lo`.
    pub fn from_rational(r: &Rational) -> Self {
        let hi = r.to_f64().unwrap_or(f64::NAN);
        if !hi.is_finite() {
            return Dd::new(hi);
        }
        let rest = r - Rational::from_float(hi).expect("finite");
        quick_two_sum(hi, rest.to_f64().unwrap_or(0.0))
    }

    /// The exact value `hi + lo`.
    pub fn to_rational(self) -> Option<Rational> {
        Some(Rational::from_float(self.hi)? + Rational::from_float(self.lo)?)
    }

    /// Exact decimal expansion of `hi + lo`, with no exponent and no trailing
    /// zeros. Every double-double is a dyadic rational, so the expansion is
    /// finite.
    pub fn to_decimal_string(self) -> String {
        let Some(r) = self.to_rational() else {
            return alloc::format!("{}", self.to_f64());
        };
        let (numer, denom) = (r.numer().clone(), r.denom().clone());
        // denom is a power of two, 2^e; value = numer * 5^e / 10^e
        let e = denom.bits() - 1;
        let scaled = numer.abs() * BigInt::from(5u8).pow(e as u32);
        let mut digits = scaled.to_str_radix(10);
        let e = e as usize;
        if digits.len() <= e {
            let pad = e + 1 - digits.len();
            digits.insert_str(0, &"0".repeat(pad));
        }
        let (int, frac) = digits.split_at(digits.len() - e);
        let frac = frac.trim_end_matches('0');
        let sign = if numer.sign() == Sign::Minus { "-" } else { "" };
        if frac.is_empty() {
            alloc::format!("{sign}{int}")
        } else {
            alloc::format!("{sign}{int}.{frac}")
        }
    }

    /// Parses a plain decimal number (optional sign, digits, optional
    /// fraction, optional exponent) exactly and rounds it.
    pub fn from_decimal_str(s: &str) -> Result<Self> {
        parse_decimal(s).map(|r| Dd::from_rational(&r)).ok_or_else(|| Error::InvalidArgument(alloc::format!("not a decimal number: {s:?}")))
    }
}

/// Exact value of a decimal literal such as `-12.5e-3`.
pub fn parse_decimal(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits: String = int.chars().chain(frac.chars()).collect();
    let n = BigInt::parse_bytes(digits.as_bytes(), 10)?;
    let shift = exp.checked_sub(i32::try_from(frac.len()).ok()?)?;
    let ten = BigInt::from(10u8);
    let r = if shift >= 0 {
        Rational::from_integer(n * ten.pow(shift as u32))
    } else {
        Rational::new(n, ten.pow(shift.unsigned_abs()))
    };
    Some(if neg { -r } else { r })
}

impl From<f64> for Dd {
    fn from(v: f64) -> Self {
        Dd::new(v)
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_f64(), f)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi)? {
            Ordering::Equal => self.lo.partial_cmp(&other.lo),
            o => Some(o),
        }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let r = quick_two_sum(s, e + t);
        quick_two_sum(r.hi, r.lo + f)
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = libm::fma(self.hi, o.hi, -p);
        quick_two_sum(p, e + (self.hi * o.lo + self.lo * o.hi))
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::new(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::new(q2);
        let q3 = r.hi / o.hi;
        quick_two_sum(q1, q2) + Dd::new(q3)
    }
}

impl Rem for Dd {
    type Output = Dd;
    /// `self - o * trunc(self / o)`, with the quotient truncated in double-double.
    fn rem(self, o: Dd) -> Dd {
        let q = self / o;
        let t = libm::trunc(q.hi);
        let t = if t == q.hi { quick_two_sum(t, libm::trunc(q.lo)) } else { Dd::new(t) };
        self - o * t
    }
}

macro_rules! assign {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr for Dd {
            fn $m(&mut self, o: Dd) {
                *self = *self $op o;
            }
        }
    };
}
assign!(AddAssign, add_assign, +);
assign!(SubAssign, sub_assign, -);
assign!(MulAssign, mul_assign, *);
assign!(DivAssign, div_assign, /);
assign!(RemAssign, rem_assign, %);

impl Zero for Dd {
    fn zero() -> Self {
        Dd::new(0.0)
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0 && self.lo == 0.0
    }
}

impl One for Dd {
    fn one() -> Self {
        Dd::new(1.0)
    }
}

impl Num for Dd {
    type FromStrRadixErr = Error;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self> {
        if radix != 10 {
            return Err(Error::InvalidArgument(alloc::format!("radix {radix} is not supported")));
        }
        Dd::from_decimal_str(s)
    }
}

impl FromPrimitive for Dd {
    fn from_i64(n: i64) -> Option<Self> {
        let hi = n as f64;
        // the rounding error of the conversion is itself an integer
        let lo = (n as i128 - hi as i128) as f64;
        Some(quick_two_sum(hi, lo))
    }
    fn from_u64(n: u64) -> Option<Self> {
        let hi = n as f64;
        let lo = (n as i128 - hi as i128) as f64;
        Some(quick_two_sum(hi, lo))
    }
    fn from_f64(n: f64) -> Option<Self> {
        Some(Dd::new(n))
    }
}

/// Exact expansions of a slice of double-doubles, for tests and checks.
pub fn to_rationals(v: &[Dd]) -> Option<Vec<Rational>> {
    v.iter().map(|d| d.to_rational()).collect()
}
