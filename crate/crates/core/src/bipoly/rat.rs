//! Rational functions in `(z, w)` kept in canonical form.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::gcd::gcd_with_cofactors;
use super::poly::BiPoly;
use super::{EvalError, GaussCoeff, Var, POLE_THRESHOLD};

/// `num / den` with `gcd(num, den) = 1` and `den` monic under graded-lex
/// order, so structural equality is mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiRat {
    num: BiPoly,
    den: BiPoly,
}

impl BiRat {
    /// # Panics
    /// If `den` is zero.
    pub fn new(num: BiPoly, den: BiPoly) -> Self {
        Self::try_new(num, den).expect("zero denominator")
    }

    pub fn try_new(num: BiPoly, den: BiPoly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(Self::zero());
        }
        let (_, n, d) = gcd_with_cofactors(&num, &den);
        Some(Self::from_coprime(n, d))
    }

    /// Makes the denominator monic; the caller guarantees coprimality.
    fn from_coprime(num: BiPoly, den: BiPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let lc = den.leading_coeff();
        if lc.is_one() {
            return BiRat { num, den };
        }
        let inv = lc.inv().expect("nonzero leading coefficient");
        BiRat { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn zero() -> Self {
        BiRat { num: BiPoly::zero(), den: BiPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_poly(BiPoly::one())
    }

    pub fn from_poly(p: BiPoly) -> Self {
        BiRat { num: p, den: BiPoly::one() }
    }

    pub fn constant(c: GaussCoeff) -> Self {
        Self::from_poly(BiPoly::constant(c))
    }

    pub fn from_int(v: i64) -> Self {
        Self::constant(GaussCoeff::from_int(v))
    }

    pub fn z() -> Self {
        Self::from_poly(BiPoly::z())
    }

    pub fn w() -> Self {
        Self::from_poly(BiPoly::w())
    }

    pub fn num(&self) -> &BiPoly {
        &self.num
    }

    pub fn den(&self) -> &BiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<GaussCoeff> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    /// No dependence on `w`.
    pub fn is_holomorphic(&self) -> bool {
        self.num.is_holomorphic() && self.den.is_holomorphic()
    }

    /// Fixed by [`BiRat::conj`].
    pub fn is_sigma_real(&self) -> bool {
        self.conj() == *self
    }

    pub fn conj(&self) -> BiRat {
        // Conjugation maps the graded-lex leading term of a monic denominator
        // to some term that need not lead, so renormalize the scalar.
        Self::from_coprime(self.num.conj(), self.den.conj())
    }

    pub fn derive(&self, var: Var) -> BiRat {
        let dn = self.num.derive(var);
        if self.den.is_one() {
            return Self::from_poly(dn);
        }
        let dd = self.den.derive(var);
        if dd.is_zero() {
            return Self::new(dn, self.den.clone());
        }
        // (n/d)' = (n'·(d/g) − n·(d'/g)) / (d·(d/g)) with g = gcd(d, d').
        let (_, d_g, dd_g) = gcd_with_cofactors(&self.den, &dd);
        let top = &(&dn * &d_g) - &(&self.num * &dd_g);
        let bottom = &self.den * &d_g;
        Self::new(top, bottom)
    }

    pub fn inv(&self) -> Option<BiRat> {
        if self.is_zero() {
            return None;
        }
        Some(Self::from_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: i32) -> BiRat {
        let base = if e < 0 {
            self.inv().expect("negative power of zero")
        } else {
            self.clone()
        };
        let k = e.unsigned_abs();
        BiRat { num: base.num.pow(k), den: base.den.pow(k) }
    }

    pub fn scale(&self, c: &GaussCoeff) -> BiRat {
        if c.is_zero() {
            return Self::zero();
        }
        BiRat { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Evaluates at `z0` with `w := conj(z0)`.
    pub fn eval(&self, z0: Complex64) -> Result<Complex64, EvalError> {
        self.eval_with(z0, POLE_THRESHOLD)
    }

    /// As [`BiRat::eval`], with an explicit relative pole threshold.
    pub fn eval_with(&self, z0: Complex64, threshold: f64) -> Result<Complex64, EvalError> {
        let w0 = z0.conj();
        let d = self.den.eval(z0, w0);
        let scale: f64 = self
            .den
            .terms()
            .map(|(m, c)| c.to_complex().norm() * z0.norm().powi(m.z as i32) * w0.norm().powi(m.w as i32))
            .sum();
        if d.norm() <= threshold * scale {
            return Err(EvalError::PoleAtPoint(z0));
        }
        Ok(self.num.eval(z0, w0) / d)
    }

    /// Evaluates with independent values for `z` and `w`.
    pub fn eval_zw(&self, z0: Complex64, w0: Complex64) -> Option<Complex64> {
        let d = self.den.eval(z0, w0);
        (d != Complex64::zero()).then(|| self.num.eval(z0, w0) / d)
    }

    /// Short textual preview for reports.
    pub fn summary(&self) -> String {
        if self.den.is_one() {
            self.num.summary()
        } else {
            format!("({}) / ({})", self.num.summary(), self.den.summary())
        }
    }

    fn add_impl(&self, o: &BiRat, negate: bool) -> BiRat {
        let c = if negate { -&o.num } else { o.num.clone() };
        if self.is_zero() {
            return BiRat { num: c, den: o.den.clone() };
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self::new(&self.num + &c, self.den.clone());
        }
        if self.den.is_one() {
            return BiRat { num: &(&self.num * &o.den) + &c, den: o.den.clone() };
        }
        if o.den.is_one() {
            return BiRat { num: &self.num + &(&c * &self.den), den: self.den.clone() };
        }
        let (g, b1, d1) = gcd_with_cofactors(&self.den, &o.den);
        let t = &(&self.num * &d1) + &(&c * &b1);
        if t.is_zero() {
            return Self::zero();
        }
        if g.is_one() {
            return Self::from_coprime(t, &self.den * &o.den);
        }
        let (_, t1, g1) = gcd_with_cofactors(&t, &g);
        Self::from_coprime(t1, &(&g1 * &b1) * &d1)
    }

    fn mul_impl(&self, o: &BiRat) -> BiRat {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.is_constant() {
            return o.scale(&self.num.leading_coeff());
        }
        if o.is_constant() {
            return self.scale(&o.num.leading_coeff());
        }
        let (_, a1, d1) = gcd_with_cofactors(&self.num, &o.den);
        let (_, c1, b1) = gcd_with_cofactors(&o.num, &self.den);
        Self::from_coprime(&a1 * &c1, &b1 * &d1)
    }
}

impl Default for BiRat {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<BiPoly> for BiRat {
    fn from(p: BiPoly) -> Self {
        Self::from_poly(p)
    }
}

impl From<GaussCoeff> for BiRat {
    fn from(c: GaussCoeff) -> Self {
        Self::constant(c)
    }
}

impl From<i64> for BiRat {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl<'a> Add<&'a BiRat> for &'a BiRat {
    type Output = BiRat;
    fn add(self, o: &BiRat) -> BiRat {
        self.add_impl(o, false)
    }
}

impl<'a> Sub<&'a BiRat> for &'a BiRat {
    type Output = BiRat;
    fn sub(self, o: &BiRat) -> BiRat {
        self.add_impl(o, true)
    }
}

impl<'a> Mul<&'a BiRat> for &'a BiRat {
    type Output = BiRat;
    fn mul(self, o: &BiRat) -> BiRat {
        self.mul_impl(o)
    }
}

impl<'a> Div<&'a BiRat> for &'a BiRat {
    type Output = BiRat;
    /// # Panics
    /// On division by zero.
    fn div(self, o: &BiRat) -> BiRat {
        self.mul_impl(&o.inv().expect("division by zero"))
    }
}

impl Neg for &BiRat {
    type Output = BiRat;
    fn neg(self) -> BiRat {
        BiRat { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for BiRat {
            type Output = BiRat;
            fn $f(self, o: BiRat) -> BiRat {
                (&self).$f(&o)
            }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for BiRat {
    type Output = BiRat;
    fn neg(self) -> BiRat {
        -&self
    }
}

impl fmt::Display for BiRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
