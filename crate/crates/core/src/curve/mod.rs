//! Liftings of holomorphic curves into `ℂ^{n+1}`: unit-Wronskian pairs,
//! rational normal lifts, R-matrix deformations, Wronskians and the Gram
//! norms `h_k = ‖Λ_k‖²`.
//!
//! Lifting components are holomorphic [`BiRat`] values (no `w`). Square roots
//! of factorial weights are never formed: each component carries a squared
//! weight `a_k`, and only quadratic expressions in the components are built.

mod norms;
mod rmatrix;

pub use norms::{gram_norms, gram_norms_direct, NormTower, TowerKind};
pub use rmatrix::{ms_lifting, GaugedLifting, RMatrix, RScaling};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::bipoly::{BiPoly, BiRat, GaussCoeff, Mono, Var};
use crate::linalg;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("polynomial must be nonzero")]
    ZeroPolynomial,
    #[error("expected a function of z alone, got {0}")]
    NotHolomorphic(String),
    #[error("v0*v1' - v1*v0' = {0}, expected 1")]
    NotUnitWronskian(String),
    #[error("lifting needs at least two components with matching weights")]
    BadShape,
    #[error("squared weights must be positive")]
    NonPositiveWeight,
    #[error("every lifting component is zero")]
    ZeroLifting,
    #[error("scaling factor must be nonzero")]
    ZeroScale,
    #[error("f' vanishes identically (f = {0})")]
    DegenerateFunction(String),
    #[error("R matrix: {0}")]
    InvalidRMatrix(String),
    #[error("norm h_{0} vanishes identically")]
    IdenticallyZeroNorm(usize),
}

pub fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `Π_{k=0}^{n} k!`.
pub fn superfactorial(n: usize) -> BigInt {
    (0..=n).fold(BigInt::one(), |acc, k| acc * factorial(k))
}

fn require_holomorphic(r: &BiRat) -> Result<(), CurveError> {
    if r.is_holomorphic() {
        Ok(())
    } else {
        Err(CurveError::NotHolomorphic(r.summary()))
    }
}

/// Antiderivative in `z` with zero constant term.
pub fn antiderivative_z(p: &BiPoly) -> BiPoly {
    BiPoly::from_terms(p.terms().map(|(m, c)| {
        let k = GaussCoeff::ratio(1, m.z as i64 + 1);
        (Mono::new(m.z + 1, m.w), c * &k)
    }))
}

/// `v0·v1′ − v1·v0′`.
pub fn pair_wronskian(v0: &BiRat, v1: &BiRat) -> BiRat {
    &(v0 * &v1.derive(Var::Z)) - &(v1 * &v0.derive(Var::Z))
}

/// Two holomorphic rational functions with `v0·v1′ − v1·v0′ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitWronskianPair {
    v0: BiRat,
    v1: BiRat,
}

impl UnitWronskianPair {
    pub fn new(v0: BiRat, v1: BiRat) -> Result<Self, CurveError> {
        require_holomorphic(&v0)?;
        require_holomorphic(&v1)?;
        let w = pair_wronskian(&v0, &v1);
        if !w.is_one() {
            return Err(CurveError::NotUnitWronskian(w.summary()));
        }
        Ok(UnitWronskianPair { v0, v1 })
    }

    pub fn v0(&self) -> &BiRat {
        &self.v0
    }

    pub fn v1(&self) -> &BiRat {
        &self.v1
    }

    /// `‖v‖² = v0·v̄0 + v1·v̄1`.
    pub fn normsq(&self) -> BiRat {
        &(&self.v0 * &self.v0.conj()) + &(&self.v1 * &self.v1.conj())
    }

    /// The meromorphic function `v1/v0` the pair lifts.
    pub fn ratio(&self) -> BiRat {
        &self.v1 / &self.v0
    }
}

/// `(1/s, F/s)` with `F′ = s²`, `F(0) = 0`.
pub fn make_unit_pair(s: &BiPoly) -> Result<UnitWronskianPair, CurveError> {
    if s.is_zero() {
        return Err(CurveError::ZeroPolynomial);
    }
    if !s.is_holomorphic() {
        return Err(CurveError::NotHolomorphic(s.summary()));
    }
    let f = antiderivative_z(&(s * s));
    let v0 = BiRat::new(BiPoly::one(), s.clone());
    let v1 = BiRat::new(f, s.clone());
    Ok(UnitWronskianPair { v0, v1 })
}

/// Shared view of the two lifting kinds used by the norm computation.
pub trait Lifting {
    fn n(&self) -> usize;
    /// Unweighted components.
    fn parts(&self) -> &[BiRat];
    fn sq_weights(&self) -> &[BigRational];
    /// Holomorphic base `s` when the lifting is `s^{−n/2}` times the parts.
    fn gauge_base(&self) -> Option<&BiRat>;
}

/// Represented components are `√a_k · parts[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedLifting {
    n: usize,
    parts: Vec<BiRat>,
    sq_weights: Vec<BigRational>,
}

impl WeightedLifting {
    pub fn new(parts: Vec<BiRat>, sq_weights: Vec<BigRational>) -> Result<Self, CurveError> {
        if parts.len() < 2 || parts.len() != sq_weights.len() {
            return Err(CurveError::BadShape);
        }
        if sq_weights.iter().any(|a| !a.is_positive()) {
            return Err(CurveError::NonPositiveWeight);
        }
        for p in &parts {
            require_holomorphic(p)?;
        }
        if parts.iter().all(BiRat::is_zero) {
            return Err(CurveError::ZeroLifting);
        }
        Ok(WeightedLifting { n: parts.len() - 1, parts, sq_weights })
    }

    /// Unit weights.
    pub fn unweighted(parts: Vec<BiRat>) -> Result<Self, CurveError> {
        let w = vec![BigRational::one(); parts.len()];
        Self::new(parts, w)
    }

    /// `det(d^j/dz^j parts[k])`, without the weights.
    pub fn det_m(&self) -> BiRat {
        linalg::det(&derivative_matrix(&self.parts, self.n + 1))
    }

    /// Poles of the components and zeros of the Wronskian.
    pub fn exceptional_factors(&self) -> Vec<BiPoly> {
        let mut out: Vec<BiPoly> = self.parts.iter().map(|p| p.den().clone()).collect();
        let d = self.det_m();
        out.push(d.num().clone());
        out.push(d.den().clone());
        dedup_factors(out)
    }
}

impl Lifting for WeightedLifting {
    fn n(&self) -> usize {
        self.n
    }
    fn parts(&self) -> &[BiRat] {
        &self.parts
    }
    fn sq_weights(&self) -> &[BigRational] {
        &self.sq_weights
    }
    fn gauge_base(&self) -> Option<&BiRat> {
        None
    }
}

/// Nonconstant polynomials, monic and without repeats.
pub(crate) fn dedup_factors(polys: Vec<BiPoly>) -> Vec<BiPoly> {
    let mut out: Vec<BiPoly> = Vec::new();
    for p in polys {
        if p.is_zero() || p.is_constant() {
            continue;
        }
        let m = p.monic();
        if !out.contains(&m) {
            out.push(m);
        }
    }
    out
}

/// `M[j][k] = d^j/dz^j parts[k]` for `j < rows`.
pub fn derivative_matrix(parts: &[BiRat], rows: usize) -> Vec<Vec<BiRat>> {
    let mut out = Vec::with_capacity(rows);
    let mut cur = parts.to_vec();
    for j in 0..rows {
        if j > 0 {
            cur = cur.iter().map(|p| p.derive(Var::Z)).collect();
        }
        out.push(cur.clone());
    }
    out
}

/// Rational normal lift: `parts[k] = v0^{n−k} v1^k`, `a_k = 1/((n−k)! k!)`.
pub fn rational_normal_lift(pair: &UnitWronskianPair, n: usize) -> WeightedLifting {
    assert!(n >= 1, "n must be positive");
    let parts = (0..=n)
        .map(|k| &pair.v0.pow((n - k) as i32) * &pair.v1.pow(k as i32))
        .collect();
    WeightedLifting { n, parts, sq_weights: binomial_weights(n) }
}

/// `1/((n−k)!·k!)` for `k = 0..=n`.
pub fn binomial_weights(n: usize) -> Vec<BigRational> {
    (0..=n)
        .map(|k| BigRational::new(BigInt::one(), factorial(n - k) * factorial(k)))
        .collect()
}

/// `(Π a_k)·det(M)²`, the square of the represented Wronskian.
pub fn wronskian_squared(lift: &WeightedLifting) -> BiRat {
    let prod: BigRational = lift.sq_weights.iter().fold(BigRational::one(), |acc, a| acc * a);
    let d = lift.det_m();
    (&d * &d).scale(&GaussCoeff::real(prod))
}

/// Multiplies every part by `g`.
pub fn scale_lifting(lift: &WeightedLifting, g: &BiRat) -> Result<WeightedLifting, CurveError> {
    if g.is_zero() {
        return Err(CurveError::ZeroScale);
    }
    require_holomorphic(g)?;
    Ok(WeightedLifting {
        n: lift.n,
        parts: lift.parts.iter().map(|p| p * g).collect(),
        sq_weights: lift.sq_weights.clone(),
    })
}

/// Unit-weight lifting `(1, v, v²/2!, …, vⁿ/n!)`.
pub fn exponential_lifting(v: &BiRat, n: usize) -> Result<WeightedLifting, CurveError> {
    let parts = (0..=n)
        .map(|k| v.pow(k as i32).scale(&GaussCoeff::real(BigRational::new(BigInt::one(), factorial(k)))))
        .collect();
    WeightedLifting::unweighted(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(coeffs: &[i64]) -> BiPoly {
        BiPoly::from_z_coeffs(&coeffs.iter().map(|&c| GaussCoeff::from_int(c)).collect::<Vec<_>>())
    }

    #[test]
    fn unit_pairs() {
        let p = make_unit_pair(&poly(&[1])).unwrap();
        assert_eq!(p.v0(), &BiRat::one());
        assert_eq!(p.v1(), &BiRat::z());

        let p = make_unit_pair(&poly(&[0, 1])).unwrap();
        assert_eq!(p.v0(), &BiRat::z().inv().unwrap());
        assert_eq!(p.v1(), &(&BiRat::z() * &BiRat::z()).scale(&GaussCoeff::ratio(1, 3)));

        let p = make_unit_pair(&poly(&[1, 1])).unwrap();
        assert!(pair_wronskian(p.v0(), p.v1()).is_one());
        assert!(matches!(make_unit_pair(&BiPoly::zero()), Err(CurveError::ZeroPolynomial)));
    }

    #[test]
    fn rejects_non_unit_pair() {
        let r = UnitWronskianPair::new(BiRat::one(), BiRat::z().scale(&GaussCoeff::from_int(2)));
        assert!(matches!(r, Err(CurveError::NotUnitWronskian(_))));
    }

    #[test]
    fn rational_normal_weights() {
        let pair = make_unit_pair(&poly(&[1])).unwrap();
        let l = rational_normal_lift(&pair, 3);
        let w: Vec<String> = l.sq_weights().iter().map(|a| a.to_string()).collect();
        assert_eq!(w, ["1/6", "1/2", "1/2", "1/6"]);
        assert_eq!(l.parts()[3], BiRat::z().pow(3));
    }

    #[test]
    fn wronskian_examples() {
        let pair = make_unit_pair(&poly(&[1])).unwrap();
        let l = rational_normal_lift(&pair, 2);
        assert_eq!(l.det_m(), BiRat::from_int(2));
        assert!(wronskian_squared(&l).is_one());

        let scaled = scale_lifting(&rational_normal_lift(&pair, 1), &BiRat::z()).unwrap();
        assert_eq!(wronskian_squared(&scaled), BiRat::z().pow(4));

        let g = &BiRat::one() + &BiRat::z();
        let scaled = scale_lifting(&l, &g).unwrap();
        assert_eq!(wronskian_squared(&scaled), g.pow(6));
    }
}
