//! Sparse bivariate polynomials in `(z, w)` over the Gaussian rationals.
//!
//! Terms live in a `BTreeMap` keyed by [`Mono`], whose ordering is graded
//! lexicographic with `z > w`; the last entry is therefore the leading term.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::coeff::GaussCoeff;
use super::Var;

/// Exponent pair `z^z · w^w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mono {
    pub z: u32,
    pub w: u32,
}

impl Mono {
    pub const ONE: Mono = Mono { z: 0, w: 0 };

    pub fn new(z: u32, w: u32) -> Self {
        Mono { z, w }
    }

    pub fn total(self) -> u32 {
        self.z + self.w
    }

    pub fn divides(self, other: Mono) -> bool {
        self.z <= other.z && self.w <= other.w
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then(self.z.cmp(&other.z))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Mono {
    type Output = Mono;
    fn add(self, o: Mono) -> Mono {
        Mono { z: self.z + o.z, w: self.w + o.w }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BiPoly {
    terms: BTreeMap<Mono, GaussCoeff>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(GaussCoeff::one())
    }

    pub fn constant(c: GaussCoeff) -> Self {
        Self::monomial(c, Mono::ONE)
    }

    pub fn monomial(c: GaussCoeff, m: Mono) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        BiPoly { terms }
    }

    pub fn z() -> Self {
        Self::monomial(GaussCoeff::one(), Mono::new(1, 0))
    }

    pub fn w() -> Self {
        Self::monomial(GaussCoeff::one(), Mono::new(0, 1))
    }

    /// Builds a polynomial from arbitrary (possibly repeated or zero) terms.
    pub fn from_terms<I: IntoIterator<Item = (Mono, GaussCoeff)>>(it: I) -> Self {
        let mut terms: BTreeMap<Mono, GaussCoeff> = BTreeMap::new();
        for (m, c) in it {
            *terms.entry(m).or_insert_with(GaussCoeff::zero) += &c;
        }
        terms.retain(|_, c| !c.is_zero());
        BiPoly { terms }
    }

    /// Univariate polynomial in `z` from ascending coefficients.
    pub fn from_z_coeffs(coeffs: &[GaussCoeff]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (Mono::new(k as u32, 0), c.clone())),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Mono::ONE).is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == Mono::ONE)
    }

    /// The constant value, if the polynomial has no `z` or `w` dependence.
    pub fn constant_value(&self) -> Option<GaussCoeff> {
        if self.is_constant() {
            Some(self.coeff(Mono::ONE))
        } else {
            None
        }
    }

    /// True when no term mentions `w`.
    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(|m| m.w == 0)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: Mono) -> GaussCoeff {
        self.terms.get(&m).cloned().unwrap_or_else(GaussCoeff::zero)
    }

    /// Terms in ascending term order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &GaussCoeff)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(Mono, &GaussCoeff)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    pub fn leading_coeff(&self) -> GaussCoeff {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(GaussCoeff::zero)
    }

    pub fn degree(&self, var: Var) -> u32 {
        self.terms
            .keys()
            .map(|m| match var {
                Var::Z => m.z,
                Var::Zbar => m.w,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total()).max().unwrap_or(0)
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Mono {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Mono::ONE;
        };
        it.fold(*first, |acc, m| Mono::new(acc.z.min(m.z), acc.w.min(m.w)))
    }

    /// Divides by a monomial that must divide every term.
    pub fn div_monomial(&self, m: Mono) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    debug_assert!(m.divides(*k));
                    (Mono::new(k.z - m.z, k.w - m.w), c.clone())
                })
                .collect(),
        }
    }

    pub fn mul_monomial(&self, c: &GaussCoeff, m: Mono) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            terms: self.terms.iter().map(|(k, v)| (*k + m, v * c)).collect(),
        }
    }

    pub fn scale(&self, c: &GaussCoeff) -> BiPoly {
        self.mul_monomial(c, Mono::ONE)
    }

    /// Scales so that the leading coefficient is one. Zero stays zero.
    pub fn monic(&self) -> BiPoly {
        match self.leading() {
            None => BiPoly::zero(),
            Some((_, lc)) if lc.is_one() => self.clone(),
            Some((_, lc)) => {
                let inv = lc.inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn pow(&self, e: u32) -> BiPoly {
        let mut acc = BiPoly::one();
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

    /// Exact partial derivative, `z` and `w` treated as independent.
    pub fn derive(&self, var: Var) -> BiPoly {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let (e, dm) = match var {
                Var::Z => (m.z, Mono { z: m.z.wrapping_sub(1), w: m.w }),
                Var::Zbar => (m.w, Mono { z: m.z, w: m.w.wrapping_sub(1) }),
            };
            (e > 0).then(|| (dm, c * &GaussCoeff::from_int(e as i64)))
        });
        BiPoly { terms: terms.collect() }
    }

    /// Swaps `z ↔ w` and conjugates every coefficient.
    pub fn conj(&self) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Mono::new(m.w, m.z), c.conj()))
                .collect(),
        }
    }

    /// Substitutes `z ↦ z0`, `w ↦ w0` in double precision.
    pub fn eval(&self, z0: Complex64, w0: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(m, c)| c.to_complex() * z0.powu(m.z) * w0.powu(m.w))
            .sum()
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &BiPoly) -> Option<BiPoly> {
        let (lm, lc) = d.leading()?;
        let lc_inv = lc.inv()?;
        let mut rem = self.terms.clone();
        let mut quot = BTreeMap::new();
        while let Some((m, c)) = rem.iter().next_back().map(|(m, c)| (*m, c.clone())) {
            if !lm.divides(m) {
                return None;
            }
            let qm = Mono::new(m.z - lm.z, m.w - lm.w);
            let qc = &c * &lc_inv;
            for (dm, dc) in &d.terms {
                let key = *dm + qm;
                let prod = dc * &qc;
                let entry = rem.entry(key).or_insert_with(GaussCoeff::zero);
                *entry -= &prod;
                if entry.is_zero() {
                    rem.remove(&key);
                }
            }
            quot.insert(qm, qc);
        }
        Some(BiPoly { terms: quot })
    }

    /// Common denominator of all coefficients, together with the
    /// Gaussian-integer coefficients of `L · self`.
    pub(crate) fn to_gauss_int(&self) -> (Vec<(Mono, BigInt, BigInt)>, BigInt) {
        let mut l = BigInt::one();
        for c in self.terms.values() {
            l = num_integer::Integer::lcm(&l, &c.denom_lcm());
        }
        let ints = self
            .terms
            .iter()
            .map(|(m, c)| {
                let re = c.re.numer() * (&l / c.re.denom());
                let im = c.im.numer() * (&l / c.im.denom());
                (*m, re, im)
            })
            .collect();
        (ints, l)
    }

    fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.is_real())
    }

    /// Groups terms by the exponent of the variable other than `var`; each
    /// group, with that exponent stripped, is a polynomial in `var` alone.
    pub fn slices(&self, var: Var) -> Vec<BiPoly> {
        let mut groups: BTreeMap<u32, BTreeMap<Mono, GaussCoeff>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (key, rest) = match var {
                Var::Z => (m.w, Mono::new(m.z, 0)),
                Var::Zbar => (m.z, Mono::new(0, m.w)),
            };
            groups.entry(key).or_default().insert(rest, c.clone());
        }
        groups.into_values().map(|terms| BiPoly { terms }).collect()
    }

    /// Writes `self = A(z)·B(w)` when the coefficient matrix has rank one.
    /// `B` is normalized to leading coefficient one.
    pub fn split_separable(&self) -> Option<(BiPoly, BiPoly)> {
        let (&lm, lc) = self.terms.iter().next_back()?;
        let zs: Vec<u32> = {
            let mut v: Vec<u32> = self.terms.keys().map(|m| m.z).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        let ws: Vec<u32> = {
            let mut v: Vec<u32> = self.terms.keys().map(|m| m.w).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        if zs.len() * ws.len() != self.terms.len() {
            return None;
        }
        // Rank one: c(i,j)·c(i0,j0) = c(i,j0)·c(i0,j) on the full grid.
        for (m, c) in &self.terms {
            let a = self.terms.get(&Mono::new(m.z, lm.w))?;
            let b = self.terms.get(&Mono::new(lm.z, m.w))?;
            if (c * lc) != (a * b) {
                return None;
            }
        }
        let inv = lc.inv()?;
        let a = BiPoly::from_terms(zs.iter().map(|&i| (Mono::new(i, 0), self.coeff(Mono::new(i, lm.w)))));
        let b = BiPoly::from_terms(ws.iter().map(|&j| (Mono::new(0, j), &self.coeff(Mono::new(lm.z, j)) * &inv)));
        Some((a, b))
    }

    /// Short textual preview, used in error witnesses.
    pub fn summary(&self) -> String {
        let s = self.to_string();
        if s.len() <= 240 {
            s
        } else {
            format!(
                "{}... ({} terms, bidegree ({}, {}))",
                &s[..s.char_indices().nth(200).map(|(k, _)| k).unwrap_or(s.len())],
                self.len(),
                self.degree(Var::Z),
                self.degree(Var::Zbar)
            )
        }
    }
}

fn mul_polys(a: &BiPoly, b: &BiPoly) -> BiPoly {
    if a.is_zero() || b.is_zero() {
        return BiPoly::zero();
    }
    if a.is_monomial() {
        let (m, c) = a.leading().unwrap();
        return b.mul_monomial(c, m);
    }
    if b.is_monomial() {
        let (m, c) = b.leading().unwrap();
        return a.mul_monomial(c, m);
    }
    // Multiply over ℤ[i] after clearing denominators; a single rational
    // normalisation per output term.
    let (ai, la) = a.to_gauss_int();
    let (bi, lb) = b.to_gauss_int();
    let real = a.is_real() && b.is_real();
    let mut acc: HashMap<Mono, (BigInt, BigInt)> = HashMap::with_capacity(ai.len() * 2);
    for (ma, ra, ia) in &ai {
        for (mb, rb, ib) in &bi {
            let e = acc
                .entry(*ma + *mb)
                .or_insert_with(|| (BigInt::zero(), BigInt::zero()));
            if real {
                e.0 += ra * rb;
            } else {
                e.0 += ra * rb - ia * ib;
                e.1 += ra * ib + ia * rb;
            }
        }
    }
    let l = la * lb;
    let terms = acc.into_iter().filter_map(|(m, (re, im))| {
        if re.is_zero() && im.is_zero() {
            return None;
        }
        Some((
            m,
            GaussCoeff::new(BigRational::new(re, l.clone()), BigRational::new(im, l.clone())),
        ))
    });
    BiPoly { terms: terms.collect() }
}

impl<'a> Mul<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn mul(self, o: &BiPoly) -> BiPoly {
        mul_polys(self, o)
    }
}

impl Mul for BiPoly {
    type Output = BiPoly;
    fn mul(self, o: BiPoly) -> BiPoly {
        mul_polys(&self, &o)
    }
}

impl<'a> Add<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn add(self, o: &BiPoly) -> BiPoly {
        let (big, small) = if self.len() >= o.len() { (self, o) } else { (o, self) };
        let mut terms = big.terms.clone();
        for (m, c) in &small.terms {
            let e = terms.entry(*m).or_insert_with(GaussCoeff::zero);
            *e += c;
            if e.is_zero() {
                terms.remove(m);
            }
        }
        BiPoly { terms }
    }
}

impl Add for BiPoly {
    type Output = BiPoly;
    fn add(self, o: BiPoly) -> BiPoly {
        &self + &o
    }
}

impl<'a> Sub<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn sub(self, o: &BiPoly) -> BiPoly {
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            let e = terms.entry(*m).or_insert_with(GaussCoeff::zero);
            *e -= c;
            if e.is_zero() {
                terms.remove(m);
            }
        }
        BiPoly { terms }
    }
}

impl Sub for BiPoly {
    type Output = BiPoly;
    fn sub(self, o: BiPoly) -> BiPoly {
        &self - &o
    }
}

impl Neg for BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

impl From<GaussCoeff> for BiPoly {
    fn from(c: GaussCoeff) -> Self {
        BiPoly::constant(c)
    }
}

impl From<i64> for BiPoly {
    fn from(v: i64) -> Self {
        BiPoly::constant(GaussCoeff::from_int(v))
    }
}

fn fmt_mono(m: Mono) -> String {
    let part = |name: &str, e: u32| match e {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{name}^{e}")),
    };
    [part("z", m.z), part("w", m.w)]
        .into_iter()
        .flatten()
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for BiPoly {
    /// Canonical rendering, leading term first, e.g. `z^2*w - 1/2*z + (1+i)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let (negative, mag) = if c.is_real() && c.re < BigRational::zero() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            let sep = match (k, negative) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let mono = fmt_mono(*m);
            let coeff = if mag.is_real() {
                mag.to_string()
            } else {
                format!("({mag})")
            };
            let body = match (mono.is_empty(), mag.is_one()) {
                (true, _) => coeff,
                (false, true) => mono,
                (false, false) => format!("{coeff}*{mono}"),
            };
            write!(f, "{sep}{body}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> GaussCoeff {
        s.parse().unwrap()
    }

    #[test]
    fn term_order_is_graded_lex() {
        let mut ms = vec![Mono::new(0, 2), Mono::new(2, 0), Mono::new(1, 1), Mono::new(3, 0), Mono::ONE];
        ms.sort();
        assert_eq!(
            ms,
            vec![Mono::ONE, Mono::new(0, 2), Mono::new(1, 1), Mono::new(2, 0), Mono::new(3, 0)]
        );
    }

    #[test]
    fn display_is_canonical() {
        let p = BiPoly::from_terms([
            (Mono::new(2, 1), c("1")),
            (Mono::new(1, 0), c("-1/2")),
            (Mono::ONE, c("1+i")),
            (Mono::new(0, 1), c("-i")),
        ]);
        assert_eq!(p.to_string(), "z^2*w - 1/2*z + (-i)*w + (1+i)");
        assert_eq!(BiPoly::zero().to_string(), "0");
    }

    #[test]
    fn mul_and_divide() {
        let a = &BiPoly::one() + &(&BiPoly::z() * &BiPoly::w());
        let b = &BiPoly::z() - &BiPoly::constant(c("1/3+2i"));
        let p = &a * &b;
        assert_eq!(p.div_exact(&a).unwrap(), b);
        assert_eq!(p.div_exact(&b).unwrap(), a);
        assert!(a.div_exact(&b).is_none());
    }

    #[test]
    fn derivative_power_rule() {
        let p = BiPoly::monomial(c("1"), Mono::new(2, 1));
        assert_eq!(p.derive(Var::Z), BiPoly::monomial(c("2"), Mono::new(1, 1)));
        assert_eq!(p.derive(Var::Zbar), BiPoly::monomial(c("1"), Mono::new(2, 0)));
        assert!(BiPoly::constant(c("7-i")).derive(Var::Z).is_zero());
    }

    #[test]
    fn conj_swaps_variables() {
        let p = BiPoly::monomial(c("i"), Mono::new(1, 0));
        assert_eq!(p.conj(), BiPoly::monomial(c("-i"), Mono::new(0, 1)));
        assert_eq!(p.conj().conj(), p);
    }
}
