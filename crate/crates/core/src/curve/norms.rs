//! Gram norms `h_k = ‖f̂ ∧ f̂′ ∧ … ∧ f̂^{(k)}‖²`.
//!
//! By Cauchy–Binet the Gram determinant of the first `k+1` derivative rows is
//! `Σ_I (Π_{i∈I} a_i)·|m_I|²` over `(k+1)`-subsets `I` of the columns, where
//! `m_I` is the corresponding minor of the derivative matrix. The minors are
//! univariate, so each `h_k` is one Hermitian sum over a common denominator.

use num_rational::BigRational;
use num_traits::One;

use super::{derivative_matrix, CurveError, Lifting};
use crate::bipoly::{gcd_with_cofactors, BiPoly, BiRat, GaugedRat, GaussCoeff, Half};
use crate::linalg;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TowerKind {
    /// From a weighted lifting; no gauge factor.
    Weighted,
    /// From an R-matrix lifting; `h_k` carries `|f′|^{−(k+1)n}`.
    Gauged,
}

/// `h_0, …, h_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormTower {
    n: usize,
    h: Vec<GaugedRat>,
    kind: TowerKind,
}

impl NormTower {
    /// Builds a tower from explicit values, e.g. to exercise failure paths.
    pub fn from_parts(h: Vec<GaugedRat>, kind: TowerKind) -> Self {
        assert!(h.len() >= 2, "a tower needs h_0 and h_n");
        NormTower { n: h.len() - 1, h, kind }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> TowerKind {
        self.kind
    }

    pub fn h(&self) -> &[GaugedRat] {
        &self.h
    }

    /// `h_k` with the convention `h_{−1} = 1`.
    pub fn h_ext(&self, k: isize) -> GaugedRat {
        if k < 0 {
            GaugedRat::one()
        } else {
            self.h[k as usize].clone()
        }
    }

    /// A copy with `h_k` replaced.
    pub fn with_h(&self, k: usize, value: GaugedRat) -> Self {
        let mut h = self.h.clone();
        h[k] = value;
        NormTower { n: self.n, h, kind: self.kind }
    }
}

/// `Σ a_t · m_t·conj(m_t)` for holomorphic `m_t`.
pub(crate) fn hermitian_sum(terms: &[(BigRational, BiRat)]) -> BiRat {
    let terms: Vec<_> = terms.iter().filter(|(_, m)| !m.is_zero()).collect();
    if terms.is_empty() {
        return BiRat::zero();
    }
    let mut lcm = BiPoly::one();
    for (_, m) in &terms {
        let (_, _, extra) = gcd_with_cofactors(&lcm, m.den());
        if !extra.is_constant() {
            lcm = &lcm * &extra;
        }
    }
    let mut total = BiPoly::zero();
    for (a, m) in &terms {
        let cof = lcm.div_exact(m.den()).expect("denominator divides the lcm");
        let lifted = m.num() * &cof;
        let term = (&lifted * &lifted.conj()).scale(&GaussCoeff::real(a.clone()));
        total = &total + &term;
    }
    BiRat::new(total, &lcm * &lcm.conj())
}

fn gauge_exponent<L: Lifting>(lift: &L, k: usize) -> Half {
    Half::from_twice(-((k as i64 + 1) * lift.n() as i64))
}

fn wrap<L: Lifting>(lift: &L, k: usize, core: BiRat) -> Result<GaugedRat, CurveError> {
    if core.is_zero() {
        return Err(CurveError::IdenticallyZeroNorm(k));
    }
    Ok(match lift.gauge_base() {
        None => GaugedRat::plain(core),
        Some(base) => {
            let e = gauge_exponent(lift, k);
            GaugedRat::new(core, base.clone(), e, e)
        }
    })
}

fn kind_of<L: Lifting>(lift: &L) -> TowerKind {
    if lift.gauge_base().is_some() {
        TowerKind::Gauged
    } else {
        TowerKind::Weighted
    }
}

/// Exact norms via Cauchy–Binet.
pub fn gram_norms<L: Lifting>(lift: &L) -> Result<NormTower, CurveError> {
    let n = lift.n();
    let m = derivative_matrix(lift.parts(), n + 1);
    let a = lift.sq_weights();
    let mut h = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let rows: Vec<usize> = (0..=k).collect();
        let terms: Vec<(BigRational, BiRat)> = linalg::subsets(n + 1, k + 1)
            .into_iter()
            .map(|cols| {
                let w = cols.iter().fold(BigRational::one(), |acc, &i| acc * &a[i]);
                (w, linalg::minor(&m, &rows, &cols))
            })
            .collect();
        h.push(wrap(lift, k, hermitian_sum(&terms))?);
    }
    Ok(NormTower { n, h, kind: kind_of(lift) })
}

/// Norms as literal determinants of the Gram matrices
/// `G_ij = Σ_k a_k·M[i][k]·conj(M[j][k])`. Slower; kept as an independent
/// route for cross-checking [`gram_norms`].
pub fn gram_norms_direct<L: Lifting>(lift: &L) -> Result<NormTower, CurveError> {
    let n = lift.n();
    let m = derivative_matrix(lift.parts(), n + 1);
    let conj: Vec<Vec<BiRat>> = m.iter().map(|row| row.iter().map(BiRat::conj).collect()).collect();
    let a = lift.sq_weights();
    let g: Vec<Vec<BiRat>> = (0..=n)
        .map(|i| {
            (0..=n)
                .map(|j| {
                    (0..=n).fold(BiRat::zero(), |acc, k| {
                        let t = (&m[i][k] * &conj[j][k]).scale(&GaussCoeff::real(a[k].clone()));
                        &acc + &t
                    })
                })
                .collect()
        })
        .collect();
    let mut h = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let idx: Vec<usize> = (0..=k).collect();
        h.push(wrap(lift, k, linalg::minor(&g, &idx, &idx))?);
    }
    Ok(NormTower { n, h, kind: kind_of(lift) })
}
