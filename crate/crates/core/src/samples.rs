//! Seeded random inputs: unit-Wronskian pairs, liftings, holomorphic
//! factors, normalized R-matrices and meromorphic functions.
//!
//! Coefficients are small Gaussian rationals so that exact arithmetic stays
//! cheap at the sizes used by the test suites.

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bipoly::{BiPoly, BiRat, GaussCoeff, Var};
use crate::curve::{factorial, make_unit_pair, RMatrix, RScaling, UnitWronskianPair, WeightedLifting};

/// Deterministic generator for a given seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `(a + b·i)/d` with `|a|, |b| ≤ 3` and `1 ≤ d ≤ 3`.
pub fn gauss<R: Rng>(rng: &mut R) -> GaussCoeff {
    let d = rng.gen_range(1..=3i64);
    GaussCoeff::new(
        BigRational::new(rng.gen_range(-3..=3i64).into(), d.into()),
        BigRational::new(rng.gen_range(-3..=3i64).into(), d.into()),
    )
}

/// Nonzero Gaussian rational.
pub fn gauss_nonzero<R: Rng>(rng: &mut R) -> GaussCoeff {
    loop {
        let c = gauss(rng);
        if !c.is_zero() {
            return c;
        }
    }
}

/// Polynomial in `z` of degree at most `max_degree`, not identically zero.
pub fn holomorphic_poly<R: Rng>(rng: &mut R, max_degree: usize) -> BiPoly {
    let d = rng.gen_range(0..=max_degree);
    let mut c: Vec<GaussCoeff> = (0..d).map(|_| gauss(rng)).collect();
    c.push(gauss_nonzero(rng));
    BiPoly::from_z_coeffs(&c)
}

/// `make_unit_pair(s)` for random `s` of degree at most 3.
pub fn unit_pair<R: Rng>(rng: &mut R) -> UnitWronskianPair {
    make_unit_pair(&holomorphic_poly(rng, 3)).expect("s is nonzero and holomorphic")
}

/// Unit-weight lifting with polynomial parts of degree at most `n + 1`.
pub fn lifting<R: Rng>(rng: &mut R, n: usize) -> WeightedLifting {
    let parts = (0..=n).map(|_| BiRat::from_poly(holomorphic_poly(rng, n + 1))).collect();
    WeightedLifting::unweighted(parts).expect("nonzero holomorphic parts")
}

/// `p/q` with `deg p ≤ 2`, `deg q ≤ 1`.
pub fn holomorphic_factor<R: Rng>(rng: &mut R) -> BiRat {
    BiRat::new(holomorphic_poly(rng, 2), holomorphic_poly(rng, 1))
}

/// Positive rational `p/q` with `1 ≤ p, q ≤ 4`.
fn positive<R: Rng>(rng: &mut R) -> BigRational {
    BigRational::new(rng.gen_range(1..=4i64).into(), rng.gen_range(1..=4i64).into())
}

/// Upper-triangular `R` with Gaussian-rational entries, positive rational
/// diagonal and `Π_m m!·R_mm = 1`, the last diagonal entry fixing the
/// product.
pub fn normalized_r<R: Rng>(rng: &mut R, n: usize) -> RMatrix {
    let mut diag: Vec<BigRational> = (0..n).map(|_| positive(rng)).collect();
    let prod = diag
        .iter()
        .enumerate()
        .fold(BigRational::from_integer(factorial(n)), |acc, (m, d)| acc * d * BigRational::from_integer(factorial(m)));
    diag.push(BigRational::one() / prod);
    let rows = (0..=n)
        .map(|i| {
            (0..=n)
                .map(|j| match j.cmp(&i) {
                    std::cmp::Ordering::Less => GaussCoeff::from_int(0),
                    std::cmp::Ordering::Equal => GaussCoeff::real(diag[i].clone()),
                    std::cmp::Ordering::Greater => gauss(rng),
                })
                .collect()
        })
        .collect();
    let r = RMatrix::from_rows(rows, RScaling::Plain).expect("valid upper-triangular matrix");
    debug_assert!(r.is_normalized());
    r
}

/// Nonconstant `p/q` in `z` with `deg p ≤ 2`, `deg q ≤ 1`.
pub fn function<R: Rng>(rng: &mut R) -> BiRat {
    loop {
        let f = BiRat::new(holomorphic_poly(rng, 2), holomorphic_poly(rng, 1));
        if !f.derive(Var::Z).is_zero() {
            return f;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_values() {
        let (mut a, mut b) = (rng(7), rng(7));
        assert_eq!(unit_pair(&mut a), unit_pair(&mut b));
        assert_eq!(function(&mut a), function(&mut b));
    }

    #[test]
    fn r_is_normalized() {
        let mut g = rng(1);
        for n in 1..=4 {
            assert!(normalized_r(&mut g, n).is_normalized());
        }
    }
}
