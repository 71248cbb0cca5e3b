//! Upper-triangular deformations `R` of the rational normal curve and the
//! liftings `(f′)^{−n/2}·R·(1, f, …, fⁿ)` they define.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{dedup_factors, factorial, CurveError, Lifting};
use crate::bipoly::{BiPoly, BiRat, GaussCoeff, Var};

/// How the rational entries `U` map to the represented matrix `R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RScaling {
    /// `R = U`.
    Plain,
    /// `R_ij = U_ij / √((i−1)!(n+1−i)!)` (1-based rows).
    Binomial,
}

/// Upper-triangular `(n+1)×(n+1)` matrix stored as `R_ij = √w_i · U_ij`,
/// with Gaussian-rational `U` and positive rational row weights `w_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct RMatrix {
    n: usize,
    u: Vec<Vec<GaussCoeff>>,
    weights: Vec<BigRational>,
}

impl RMatrix {
    /// Validates shape, triangularity and a real positive diagonal.
    pub fn from_rows(rows: Vec<Vec<GaussCoeff>>, scaling: RScaling) -> Result<Self, CurveError> {
        let m = rows.len();
        if m < 2 || rows.iter().any(|r| r.len() != m) {
            return Err(CurveError::InvalidRMatrix(format!("expected a square matrix of size >= 2, got {m} rows")));
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if j < i && !c.is_zero() {
                    return Err(CurveError::InvalidRMatrix(format!("entry ({}, {}) below the diagonal is {c}", i + 1, j + 1)));
                }
            }
            let d = &row[i];
            if !d.is_real() || !d.re.is_positive() {
                return Err(CurveError::InvalidRMatrix(format!("diagonal entry ({}, {}) = {d} is not real positive", i + 1, i + 1)));
            }
        }
        let n = m - 1;
        let weights = match scaling {
            RScaling::Plain => vec![BigRational::one(); m],
            RScaling::Binomial => binomial_row_weights(n),
        };
        Ok(RMatrix { n, u: rows, weights })
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal_unchecked(n, vec![BigRational::one(); n + 1])
    }

    /// `U = I` with binomial row weights: the rational normal curve itself.
    pub fn rational_normal(n: usize) -> Self {
        Self::diagonal_unchecked(n, binomial_row_weights(n))
    }

    fn diagonal_unchecked(n: usize, weights: Vec<BigRational>) -> Self {
        let u = (0..=n)
            .map(|i| (0..=n).map(|j| GaussCoeff::from_int((i == j) as i64)).collect())
            .collect();
        RMatrix { n, u, weights }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The rational part `U_ij` (0-based).
    pub fn entry(&self, i: usize, j: usize) -> &GaussCoeff {
        &self.u[i][j]
    }

    /// Squared row weight `w_i` (0-based).
    pub fn sq_weight(&self, i: usize) -> &BigRational {
        &self.weights[i]
    }

    pub fn sq_weights(&self) -> &[BigRational] {
        &self.weights
    }

    /// Squared normalization product `(Π_{m=1}^{n+1} (m−1)!·R_mm)²`.
    pub fn normalization_squared(&self) -> BigRational {
        (0..=self.n).fold(BigRational::one(), |acc, m| {
            let f = BigRational::from_integer(factorial(m));
            acc * &f * &f * self.u[m][m].norm_sqr() * &self.weights[m]
        })
    }

    /// Diagonal real positive and `Π (m−1)!·R_mm = 1`.
    pub fn is_normalized(&self) -> bool {
        let positive = (0..=self.n).all(|m| self.u[m][m].is_real() && self.u[m][m].re.is_positive());
        positive && self.normalization_squared().is_one()
    }

    /// `S_ij = Σ_{k ≤ min(i,j)} R_ki·conj(R_kj)` (0-based).
    pub fn gram(&self) -> Vec<Vec<GaussCoeff>> {
        let m = self.n + 1;
        (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        (0..=i.min(j)).fold(GaussCoeff::zero(), |acc, k| {
                            let t = &(&self.u[k][i] * &self.u[k][j].conj()) * &GaussCoeff::real(self.weights[k].clone());
                            acc + t
                        })
                    })
                    .collect()
            })
            .collect()
    }

    /// Multiplies row `k` by `phases[k]`; each phase must have modulus one.
    /// The result generally has a non-positive diagonal and so is not
    /// normalized, but shares [`RMatrix::gram`] with `self`.
    pub fn with_row_phases(&self, phases: &[GaussCoeff]) -> Result<Self, CurveError> {
        if phases.len() != self.n + 1 || phases.iter().any(|d| !d.norm_sqr().is_one()) {
            return Err(CurveError::InvalidRMatrix("row phases must have modulus one".into()));
        }
        let u = self
            .u
            .iter()
            .zip(phases)
            .map(|(row, d)| row.iter().map(|c| c * d).collect())
            .collect();
        Ok(RMatrix { n: self.n, u, weights: self.weights.clone() })
    }
}

/// `1/((i−1)!(n+1−i)!)` for rows `i = 1..=n+1`.
fn binomial_row_weights(n: usize) -> Vec<BigRational> {
    (0..=n)
        .map(|i| BigRational::new(BigInt::one(), factorial(i) * factorial(n - i)))
        .collect()
}

/// `(f′)^{−n/2} · (Σ_{j≥i} R_ij f^j)_i`, kept as unweighted parts with row
/// weights and the gauge base `f′`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugedLifting {
    n: usize,
    f: BiRat,
    fp: BiRat,
    parts: Vec<BiRat>,
    sq_weights: Vec<BigRational>,
}

impl GaugedLifting {
    pub fn f(&self) -> &BiRat {
        &self.f
    }

    pub fn f_prime(&self) -> &BiRat {
        &self.fp
    }

    /// Poles of `f` and `f′`, zeros of `f′`.
    pub fn exceptional_factors(&self) -> Vec<BiPoly> {
        dedup_factors(vec![self.f.den().clone(), self.fp.num().clone(), self.fp.den().clone()])
    }
}

impl Lifting for GaugedLifting {
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
        Some(&self.fp)
    }
}

pub fn ms_lifting(f: &BiRat, r: &RMatrix) -> Result<GaugedLifting, CurveError> {
    if !f.is_holomorphic() {
        return Err(CurveError::NotHolomorphic(f.summary()));
    }
    let fp = f.derive(Var::Z);
    if fp.is_zero() {
        return Err(CurveError::DegenerateFunction(f.summary()));
    }
    let n = r.n;
    let powers: Vec<BiRat> = (0..=n).map(|j| f.pow(j as i32)).collect();
    let parts = (0..=n)
        .map(|i| {
            (i..=n).fold(BiRat::zero(), |acc, j| {
                let c = r.entry(i, j);
                if c.is_zero() {
                    acc
                } else {
                    &acc + &powers[j].scale(c)
                }
            })
        })
        .collect();
    Ok(GaugedLifting { n, f: f.clone(), fp, parts, sq_weights: r.weights.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> GaussCoeff {
        s.parse().unwrap()
    }

    #[test]
    fn identity_is_normalized_only_for_n_one() {
        assert!(RMatrix::identity(1).is_normalized());
        assert!(!RMatrix::identity(2).is_normalized());
        for n in 1..6 {
            assert!(RMatrix::rational_normal(n).is_normalized());
        }
    }

    #[test]
    fn binomial_scaling_normalizes_by_diagonal_product() {
        let r = RMatrix::from_rows(
            vec![vec![c("2"), c("1+i"), c("0")], vec![c("0"), c("1/3"), c("-i")], vec![c("0"), c("0"), c("3/2")]],
            RScaling::Binomial,
        )
        .unwrap();
        assert!(r.is_normalized());
    }

    #[test]
    fn rejects_lower_entries_and_bad_diagonal() {
        let lower = RMatrix::from_rows(vec![vec![c("1"), c("0")], vec![c("1"), c("1")]], RScaling::Plain);
        assert!(lower.is_err());
        let neg = RMatrix::from_rows(vec![vec![c("-1"), c("0")], vec![c("0"), c("1")]], RScaling::Plain);
        assert!(neg.is_err());
    }

    #[test]
    fn ms_components() {
        let r = RMatrix::from_rows(vec![vec![c("1"), c("i")], vec![c("0"), c("1")]], RScaling::Plain).unwrap();
        let l = ms_lifting(&BiRat::z(), &r).unwrap();
        let expect0 = &BiRat::one() + &BiRat::z().scale(&GaussCoeff::i());
        assert_eq!(l.parts(), &[expect0, BiRat::z()]);
        assert!(matches!(ms_lifting(&BiRat::from_int(5), &r), Err(CurveError::DegenerateFunction(_))));
    }

    #[test]
    fn row_phases_preserve_gram() {
        let r = RMatrix::from_rows(vec![vec![c("1"), c("2-i")], vec![c("0"), c("1")]], RScaling::Plain).unwrap();
        let rot = r.with_row_phases(&[c("i"), c("-1")]).unwrap();
        assert_eq!(r.gram(), rot.gram());
        assert!(!rot.is_normalized());
    }
}
