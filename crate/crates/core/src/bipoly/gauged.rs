//! Rational functions times half-integer powers of a holomorphic gauge base.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::rat::BiRat;
use super::{EvalError, GaussCoeff, Var};

/// A half-integer, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Half(i64);

impl Half {
    pub const ZERO: Half = Half(0);

    pub fn from_twice(twice: i64) -> Self {
        Half(twice)
    }

    pub fn int(v: i64) -> Self {
        Half(2 * v)
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn scale(self, k: i64) -> Half {
        Half(self.0 * k)
    }
}

impl Add for Half {
    type Output = Half;
    fn add(self, o: Half) -> Half {
        Half(self.0 + o.0)
    }
}

impl Sub for Half {
    type Output = Half;
    fn sub(self, o: Half) -> Half {
        Half(self.0 - o.0)
    }
}

impl Neg for Half {
    type Output = Half;
    fn neg(self) -> Half {
        Half(-self.0)
    }
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// `core · s^p · s̄^q` for a holomorphic gauge base `s`.
///
/// When `p = q = 0` the base plays no role and the value combines freely with
/// any other gauge. Combining two values whose bases differ while both carry
/// nonzero exponents is a logic error and panics.
#[derive(Clone, Debug)]
pub struct GaugedRat {
    core: BiRat,
    base: BiRat,
    p: Half,
    q: Half,
}

impl GaugedRat {
    /// # Panics
    /// If `base` is zero or depends on `w`.
    pub fn new(core: BiRat, base: BiRat, p: Half, q: Half) -> Self {
        assert!(!base.is_zero(), "gauge base must be nonzero");
        assert!(base.is_holomorphic(), "gauge base must be holomorphic");
        GaugedRat { core, base, p, q }
    }

    pub fn plain(core: BiRat) -> Self {
        GaugedRat { core, base: BiRat::one(), p: Half::ZERO, q: Half::ZERO }
    }

    pub fn zero() -> Self {
        Self::plain(BiRat::zero())
    }

    pub fn one() -> Self {
        Self::plain(BiRat::one())
    }

    pub fn core(&self) -> &BiRat {
        &self.core
    }

    pub fn base(&self) -> &BiRat {
        &self.base
    }

    pub fn exponents(&self) -> (Half, Half) {
        (self.p, self.q)
    }

    pub fn is_ungauged(&self) -> bool {
        self.p == Half::ZERO && self.q == Half::ZERO
    }

    pub fn is_zero(&self) -> bool {
        self.core.is_zero()
    }

    pub fn is_sigma_real(&self) -> bool {
        self.p == self.q && self.core.is_sigma_real()
    }

    fn base_conj(&self) -> BiRat {
        self.base.conj()
    }

    /// Picks the shared base of two operands.
    fn common_base(&self, o: &GaugedRat) -> BiRat {
        if self.is_ungauged() {
            return o.base.clone();
        }
        if o.is_ungauged() {
            return self.base.clone();
        }
        assert!(self.base == o.base, "gauge bases differ: {} vs {}", self.base, o.base);
        self.base.clone()
    }

    /// Core multiplied by `s^dp · s̄^dq` for integer `dp`, `dq`.
    fn shifted_core(&self, base: &BiRat, dp: Half, dq: Half) -> BiRat {
        debug_assert!(dp.is_integer() && dq.is_integer());
        let mut c = self.core.clone();
        if dp != Half::ZERO {
            c = &c * &base.pow((dp.twice() / 2) as i32);
        }
        if dq != Half::ZERO {
            c = &c * &base.conj().pow((dq.twice() / 2) as i32);
        }
        c
    }

    /// Rewrites both operands over the same exponents, if the exponent gaps
    /// are integers.
    fn align(&self, o: &GaugedRat) -> Option<(BiRat, BiRat, BiRat, Half, Half)> {
        let base = self.common_base(o);
        let (dp, dq) = (self.p - o.p, self.q - o.q);
        if !dp.is_integer() || !dq.is_integer() {
            return None;
        }
        let p = self.p.min(o.p);
        let q = self.q.min(o.q);
        let a = self.shifted_core(&base, self.p - p, self.q - q);
        let b = o.shifted_core(&base, o.p - p, o.q - q);
        Some((a, b, base, p, q))
    }

    /// Multiplies the core by `s^k s̄^l` and lowers the exponents to match.
    pub fn with_exponents(&self, p: Half, q: Half) -> Option<GaugedRat> {
        let (dp, dq) = (self.p - p, self.q - q);
        if !dp.is_integer() || !dq.is_integer() {
            return None;
        }
        let core = self.shifted_core(&self.base, dp, dq);
        Some(GaugedRat { core, base: self.base.clone(), p, q })
    }

    /// Exponent pair `(0, 0)` form when the exponents are integers.
    pub fn to_plain(&self) -> Option<BiRat> {
        self.with_exponents(Half::ZERO, Half::ZERO).map(|g| g.core)
    }

    pub fn conj(&self) -> GaugedRat {
        GaugedRat { core: self.core.conj(), base: self.base.clone(), p: self.q, q: self.p }
    }

    pub fn derive(&self, var: Var) -> GaugedRat {
        let d = self.core.derive(var);
        let (e, s) = match var {
            Var::Z => (self.p, self.base.clone()),
            Var::Zbar => (self.q, self.base_conj()),
        };
        let core = if e == Half::ZERO || self.core.is_zero() {
            d
        } else {
            let log_d = &s.derive(var) / &s;
            let coef = BiRat::constant(GaussCoeff::ratio(e.twice(), 2));
            &d + &(&(&coef * &self.core) * &log_d)
        };
        GaugedRat { core, base: self.base.clone(), p: self.p, q: self.q }
    }

    pub fn inv(&self) -> Option<GaugedRat> {
        Some(GaugedRat { core: self.core.inv()?, base: self.base.clone(), p: -self.p, q: -self.q })
    }

    pub fn pow(&self, e: i32) -> GaugedRat {
        GaugedRat {
            core: self.core.pow(e),
            base: self.base.clone(),
            p: self.p.scale(e as i64),
            q: self.q.scale(e as i64),
        }
    }

    pub fn scale(&self, c: &GaussCoeff) -> GaugedRat {
        GaugedRat { core: self.core.scale(c), ..self.clone() }
    }

    pub fn mul_rat(&self, r: &BiRat) -> GaugedRat {
        GaugedRat { core: &self.core * r, ..self.clone() }
    }

    /// Evaluates at `z0` with `w := conj(z0)`, using
    /// `s^p s̄^q = |s|^{p+q} e^{i(p−q) arg s}`.
    pub fn eval(&self, z0: Complex64) -> Result<Complex64, EvalError> {
        let c = self.core.eval(z0)?;
        if self.is_ungauged() {
            return Ok(c);
        }
        let s = self.base.eval(z0)?;
        let sum = (self.p + self.q).to_f64();
        if s.norm() == 0.0 {
            return if sum > 0.0 { Ok(Complex64::new(0.0, 0.0)) } else { Err(EvalError::PoleAtPoint(z0)) };
        }
        let phase = (self.p - self.q).to_f64() * s.arg();
        Ok(c * Complex64::from_polar(s.norm().powf(sum), phase))
    }

    pub fn summary(&self) -> String {
        if self.is_ungauged() {
            self.core.summary()
        } else {
            format!("[{}] * s^({}) * conj(s)^({}), s = {}", self.core.summary(), self.p, self.q, self.base)
        }
    }
}

impl PartialEq for GaugedRat {
    fn eq(&self, o: &GaugedRat) -> bool {
        if self.is_ungauged() && o.is_ungauged() {
            return self.core == o.core;
        }
        if !self.is_ungauged() && !o.is_ungauged() && self.base != o.base {
            return false;
        }
        match self.align(o) {
            Some((a, b, ..)) => a == b,
            None => self.is_zero() && o.is_zero(),
        }
    }
}

impl From<BiRat> for GaugedRat {
    fn from(r: BiRat) -> Self {
        Self::plain(r)
    }
}

impl<'a> Mul<&'a GaugedRat> for &'a GaugedRat {
    type Output = GaugedRat;
    fn mul(self, o: &GaugedRat) -> GaugedRat {
        let base = self.common_base(o);
        GaugedRat { core: &self.core * &o.core, base, p: self.p + o.p, q: self.q + o.q }
    }
}

impl<'a> Div<&'a GaugedRat> for &'a GaugedRat {
    type Output = GaugedRat;
    fn div(self, o: &GaugedRat) -> GaugedRat {
        self * &o.inv().expect("division by zero")
    }
}

impl<'a> GaugedRat {
    fn add_impl(&'a self, o: &'a GaugedRat, negate: bool) -> GaugedRat {
        let signed = |g: &GaugedRat| if negate { -g } else { g.clone() };
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return signed(o);
        }
        let (a, b, base, p, q) = self
            .align(o)
            .unwrap_or_else(|| panic!("cannot add gauge exponents ({}, {}) and ({}, {})", self.p, self.q, o.p, o.q));
        let core = if negate { &a - &b } else { &a + &b };
        GaugedRat { core, base, p, q }
    }
}

impl<'a> Add<&'a GaugedRat> for &'a GaugedRat {
    type Output = GaugedRat;
    /// # Panics
    /// If the exponent gaps are not integers and neither operand is zero.
    fn add(self, o: &GaugedRat) -> GaugedRat {
        self.add_impl(o, false)
    }
}

impl<'a> Sub<&'a GaugedRat> for &'a GaugedRat {
    type Output = GaugedRat;
    fn sub(self, o: &GaugedRat) -> GaugedRat {
        self.add_impl(o, true)
    }
}

impl Neg for &GaugedRat {
    type Output = GaugedRat;
    fn neg(self) -> GaugedRat {
        GaugedRat { core: -&self.core, ..self.clone() }
    }
}

impl fmt::Display for GaugedRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ungauged() {
            write!(f, "{}", self.core)
        } else {
            write!(f, "[{}] * s^({}) * conj(s)^({}), s = {}", self.core, self.p, self.q, self.base)
        }
    }
}
