//! Exact Gaussian rationals `re + im·i` with `re, im ∈ ℚ`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussCoeff {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussCoeff {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussCoeff { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussCoeff { re, im: BigRational::zero() }
    }

    pub fn from_int(v: i64) -> Self {
        Self::real(BigRational::from_integer(v.into()))
    }

    /// `num/den` as a real coefficient. Panics on `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(num.into(), den.into()))
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussCoeff {
            re: BigRational::from_integer(re.into()),
            im: BigRational::from_integer(im.into()),
        }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussCoeff { re: self.re.clone(), im: -&self.im }
    }

    /// `|c|²`, always a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return None;
        }
        Some(GaussCoeff { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = GaussCoeff::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    /// Least common multiple of the denominators of both parts.
    pub fn denom_lcm(&self) -> BigInt {
        num_integer::Integer::lcm(self.re.denom(), self.im.denom())
    }
}

pub(crate) fn rat_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Oversized parts: shift both down to 64 significant bits first.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift_n = (nb - 64).max(0);
    let shift_d = (db - 64).max(0);
    let n = (r.numer() >> shift_n as usize).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift_d as usize).to_f64().unwrap_or(1.0);
    n / d * 2f64.powi((shift_n - shift_d) as i32)
}

impl Zero for GaussCoeff {
    fn zero() -> Self {
        GaussCoeff { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussCoeff {
    fn one() -> Self {
        GaussCoeff { re: BigRational::one(), im: BigRational::zero() }
    }
}

impl<'a> Add<&'a GaussCoeff> for &'a GaussCoeff {
    type Output = GaussCoeff;
    fn add(self, o: &GaussCoeff) -> GaussCoeff {
        GaussCoeff { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Add for GaussCoeff {
    type Output = GaussCoeff;
    fn add(self, o: GaussCoeff) -> GaussCoeff {
        &self + &o
    }
}

impl<'a> Sub<&'a GaussCoeff> for &'a GaussCoeff {
    type Output = GaussCoeff;
    fn sub(self, o: &GaussCoeff) -> GaussCoeff {
        GaussCoeff { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Sub for GaussCoeff {
    type Output = GaussCoeff;
    fn sub(self, o: GaussCoeff) -> GaussCoeff {
        &self - &o
    }
}

impl<'a> Mul<&'a GaussCoeff> for &'a GaussCoeff {
    type Output = GaussCoeff;
    fn mul(self, o: &GaussCoeff) -> GaussCoeff {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussCoeff::real(&self.re * &o.re);
        }
        GaussCoeff {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Mul for GaussCoeff {
    type Output = GaussCoeff;
    fn mul(self, o: GaussCoeff) -> GaussCoeff {
        &self * &o
    }
}

impl<'a> Div<&'a GaussCoeff> for &'a GaussCoeff {
    type Output = GaussCoeff;
    /// Panics on division by zero.
    fn div(self, o: &GaussCoeff) -> GaussCoeff {
        self * &o.inv().expect("division by zero Gaussian rational")
    }
}

impl Div for GaussCoeff {
    type Output = GaussCoeff;
    fn div(self, o: GaussCoeff) -> GaussCoeff {
        &self / &o
    }
}

impl Neg for GaussCoeff {
    type Output = GaussCoeff;
    fn neg(self) -> GaussCoeff {
        GaussCoeff { re: -self.re, im: -self.im }
    }
}

impl Neg for &GaussCoeff {
    type Output = GaussCoeff;
    fn neg(self) -> GaussCoeff {
        GaussCoeff { re: -&self.re, im: -&self.im }
    }
}

impl AddAssign<&GaussCoeff> for GaussCoeff {
    fn add_assign(&mut self, o: &GaussCoeff) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&GaussCoeff> for GaussCoeff {
    fn sub_assign(&mut self, o: &GaussCoeff) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl From<i64> for GaussCoeff {
    fn from(v: i64) -> Self {
        GaussCoeff::from_int(v)
    }
}

impl From<BigRational> for GaussCoeff {
    fn from(v: BigRational) -> Self {
        GaussCoeff::real(v)
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussCoeff {
    /// Canonical form: `p/q`, `r/si`, `p/q+r/si` or `p/q-r/si`; the unit
    /// imaginary part prints as a bare `i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_str = |v: &BigRational| -> String {
            let a = v.abs();
            if a.is_one() {
                "i".to_string()
            } else {
                format!("{}i", fmt_rat(&a))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rat(&self.re)),
            (true, false) => {
                let sign = if self.im.is_negative() { "-" } else { "" };
                write!(f, "{}{}", sign, im_str(&self.im))
            }
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                write!(f, "{}{}{}", fmt_rat(&self.re), sign, im_str(&self.im))
            }
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let bad = || ParseError::Coefficient(s.to_string());
    let s = s.trim();
    if s.is_empty() {
        return Err(bad());
    }
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// Parses an imaginary part written without its trailing `i`; an empty or
/// sign-only magnitude means one.
fn parse_imag(body: &str, original: &str) -> Result<BigRational, ParseError> {
    let body = body.trim();
    match body {
        "" | "+" => Ok(BigRational::one()),
        "-" => Ok(-BigRational::one()),
        _ => {
            let (sign, mag) = match body.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, body.strip_prefix('+').unwrap_or(body)),
            };
            let mag = mag.trim();
            let v = if mag.is_empty() {
                BigRational::one()
            } else {
                parse_rational(mag).map_err(|_| ParseError::Coefficient(original.to_string()))?
            };
            Ok(if sign < 0 { -v } else { v })
        }
    }
}

impl FromStr for GaussCoeff {
    type Err = ParseError;

    /// Accepts `p`, `p/q`, `ri`, `r/si`, `i`, `-i`, `p/q+r/si`, `p/q-i`, ...
    fn from_str(raw: &str) -> Result<Self, ParseError> {
        let s: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(ParseError::Coefficient(raw.to_string()));
        }
        let Some(body) = s.strip_suffix('i') else {
            return Ok(GaussCoeff::real(parse_rational(&s)?));
        };
        // Split at the last sign that is not the leading character.
        let split = body
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(k, _)| k)
            .last();
        match split {
            Some(k) => {
                let re = parse_rational(&body[..k])
                    .map_err(|_| ParseError::Coefficient(raw.to_string()))?;
                let im = parse_imag(&body[k..], raw)?;
                Ok(GaussCoeff::new(re, im))
            }
            None => Ok(GaussCoeff::new(BigRational::zero(), parse_imag(body, raw)?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> GaussCoeff {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print() {
        for (input, printed) in [
            ("2", "2"),
            ("-3/6", "-1/2"),
            ("i", "i"),
            ("-i", "-i"),
            ("3/4i", "3/4i"),
            ("1/2+3/4i", "1/2+3/4i"),
            ("1/2-i", "1/2-i"),
            ("-1-2i", "-1-2i"),
            (" 5 + i ", "5+i"),
            ("0", "0"),
        ] {
            assert_eq!(c(input).to_string(), printed, "input {input}");
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "abc", "1/0", "1//2", "2+i+i", "ii"] {
            assert!(s.parse::<GaussCoeff>().is_err(), "accepted {s:?}");
        }
    }

    #[test]
    fn field_ops() {
        let a = c("1+2i");
        let b = c("3-i");
        assert_eq!(&a * &b, c("5+5i"));
        assert_eq!(&(&a / &b) * &b, a);
        assert_eq!(a.conj(), c("1-2i"));
        assert_eq!(a.norm_sqr(), BigRational::from_integer(5.into()));
        assert!(GaussCoeff::zero().inv().is_none());
        assert_eq!(c("i").pow(2), c("-1"));
    }

    #[test]
    fn huge_rational_to_f64() {
        let big = BigInt::from(10).pow(400);
        let r = BigRational::new(big.clone() * 3, big);
        assert!((rat_to_f64(&r) - 3.0).abs() < 1e-12);
    }
}
