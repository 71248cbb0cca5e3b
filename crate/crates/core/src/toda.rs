//! Toda fields assembled from norm towers, the constant-shift family of the
//! rational normal curve, the `w`-substitution and the closed form of the
//! reduced first field.
//!
//! Fields are stored as `e^{u_i}`; logarithms only appear when sampling.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::bipoly::{rat_to_f64, BiPoly, BiRat, GaugedRat, GaussCoeff, LazyRat, Var};
use crate::curve::{NormTower, RMatrix, TowerKind};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TodaError {
    #[error("top norm h_n = {0} is not 1")]
    NonUnitTopNorm(String),
    #[error("f' vanishes identically (f = {0})")]
    DegenerateFunction(String),
    #[error("expected a function of z alone, got {0}")]
    NotHolomorphic(String),
    #[error("R is not normalized: (prod (m-1)! R_mm)^2 = {0}")]
    BadNormalization(String),
    #[error("field {0} is not sigma-real")]
    NotSigmaReal(usize),
    #[error("field {0} vanishes identically")]
    ZeroField(usize),
    #[error("expected {expected} fields, got {got}")]
    WrongLength { expected: usize, got: usize },
}

/// Tridiagonal Cartan matrix of `SU(n+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartanMatrix {
    n: usize,
    entries: Vec<Vec<i64>>,
}

impl CartanMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    /// `a_ij`, 1-based, zero outside the matrix.
    pub fn get(&self, i: usize, j: usize) -> i64 {
        if i == 0 || j == 0 || i > self.n || j > self.n {
            0
        } else {
            self.entries[i - 1][j - 1]
        }
    }
}

impl fmt::Display for CartanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>2}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

pub fn cartan_matrix(n: usize) -> CartanMatrix {
    assert!(n >= 1, "n must be positive");
    let entries = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match i.abs_diff(j) {
                    0 => 2,
                    1 => -1,
                    _ => 0,
                })
                .collect()
        })
        .collect();
    CartanMatrix { n, entries }
}

/// How a solution was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Norms of a weighted lifting.
    WeightedTower,
    /// Norms of an R-matrix lifting.
    GaugedTower,
    /// The closed form for the first field of a reduced solution.
    ReducedClosedForm,
    /// Supplied directly.
    Explicit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TodaSolution {
    n: usize,
    exp_u: Vec<GaugedRat>,
    provenance: Provenance,
    exceptional: Vec<BiPoly>,
}

impl TodaSolution {
    /// Checks that each field is σ-real and not identically zero.
    pub fn new(exp_u: Vec<GaugedRat>, provenance: Provenance) -> Result<Self, TodaError> {
        if exp_u.is_empty() {
            return Err(TodaError::WrongLength { expected: 1, got: 0 });
        }
        for (i, e) in exp_u.iter().enumerate() {
            if e.is_zero() {
                return Err(TodaError::ZeroField(i + 1));
            }
            if !e.is_sigma_real() {
                return Err(TodaError::NotSigmaReal(i + 1));
            }
        }
        Ok(TodaSolution { n: exp_u.len(), exp_u, provenance, exceptional: Vec::new() })
    }

    /// Every field equal to the same positive constant. Not a solution;
    /// used to show that checks detect non-solutions.
    pub fn constant(n: usize, value: BigRational) -> Self {
        let e = GaugedRat::plain(BiRat::constant(GaussCoeff::real(value)));
        TodaSolution { n, exp_u: vec![e; n], provenance: Provenance::Explicit, exceptional: Vec::new() }
    }

    /// Attaches holomorphic polynomials whose zeros should be kept away from
    /// when sampling.
    pub fn with_exceptional(mut self, factors: Vec<BiPoly>) -> Self {
        self.exceptional = factors;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `e^{u_1}, …, e^{u_n}`.
    pub fn exp_u(&self) -> &[GaugedRat] {
        &self.exp_u
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn exceptional(&self) -> &[BiPoly] {
        &self.exceptional
    }
}

/// `e^{u_i} = h_{i−2}·h_i / h_{i−1}²` with `h_{−1} = 1`.
pub fn solution_from_norms(tower: &NormTower) -> Result<TodaSolution, TodaError> {
    let n = tower.n();
    let top = &tower.h()[n];
    if *top != GaugedRat::one() {
        return Err(TodaError::NonUnitTopNorm(top.summary()));
    }
    let exp_u = (1..=n as isize)
        .map(|i| {
            let e = &(&tower.h_ext(i - 2) * &tower.h_ext(i)) / &tower.h_ext(i - 1).pow(2);
            match e.to_plain() {
                Some(core) => GaugedRat::plain(core),
                None => e,
            }
        })
        .collect();
    let provenance = match tower.kind() {
        TowerKind::Weighted => Provenance::WeightedTower,
        TowerKind::Gauged => Provenance::GaugedTower,
    };
    TodaSolution::new(exp_u, provenance)
}

/// `e^{u_i} = Π_j h_{j−1}^{−a_ij}`, the other evaluation order.
pub fn exp_u_product_form(tower: &NormTower, i: usize) -> GaugedRat {
    let a = cartan_matrix(tower.n());
    (1..=tower.n()).fold(GaugedRat::one(), |acc, j| {
        let e = -a.get(i, j);
        if e == 0 {
            acc
        } else {
            &acc * &tower.h_ext(j as isize - 1).pow(e as i32)
        }
    })
}

/// `e^{c_i} = i(n+1−i)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShiftConstants {
    pub n: usize,
    pub c: Vec<f64>,
    #[serde(serialize_with = "ser_rationals")]
    pub exp_c: Vec<BigRational>,
}

fn ser_rationals<S: serde::Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

pub fn shift_constants(n: usize) -> ShiftConstants {
    assert!(n >= 1, "n must be positive");
    let exp_c: Vec<BigRational> = (1..=n)
        .map(|i| BigRational::from_integer(BigInt::from(i * (n + 1 - i))))
        .collect();
    let c = exp_c.iter().map(|e| rat_to_f64(e).ln()).collect();
    ShiftConstants { n, c, exp_c }
}

/// `Σ_j a_ij·j(n+1−j) = 2` for every row, in integers.
pub fn verify_shift_identity(n: usize) -> bool {
    let a = cartan_matrix(n);
    (1..=n).all(|i| {
        let s: i128 = (1..=n)
            .map(|j| a.get(i, j) as i128 * (j * (n + 1 - j)) as i128)
            .sum();
        s == 2
    })
}

/// `e^{2(n+1)w_k}` for `k = 0..=n`:
/// `e^{2(n+1)w_0} = Π_i (e^{u_i})^{−(n−i+1)}` and each further step
/// multiplies by `(e^{u_k})^{n+1}`.
pub fn w_substitution(exp_u: &[GaugedRat]) -> Vec<GaugedRat> {
    let n = exp_u.len();
    let mut cur = exp_u
        .iter()
        .enumerate()
        .fold(GaugedRat::one(), |acc, (i, e)| &acc * &e.pow(-((n - i) as i32)));
    let mut out = Vec::with_capacity(n + 1);
    out.push(cur.clone());
    for e in exp_u {
        cur = &cur * &e.pow((n + 1) as i32);
        out.push(cur.clone());
    }
    out
}

fn check_function(f: &BiRat) -> Result<BiRat, TodaError> {
    if !f.is_holomorphic() {
        return Err(TodaError::NotHolomorphic(f.summary()));
    }
    let fp = f.derive(Var::Z);
    if fp.is_zero() {
        return Err(TodaError::DegenerateFunction(f.summary()));
    }
    Ok(fp)
}

fn check_normalized(r: &RMatrix) -> Result<(), TodaError> {
    if r.is_normalized() {
        Ok(())
    } else {
        Err(TodaError::BadNormalization(r.normalization_squared().to_string()))
    }
}

/// `Σ_{i,j} S_ij a^i b^{n−i} conj(a^j b^{n−j})` for `f = a/b`; the
/// denominator `D` equals this divided by `|b|^{2n}`.
fn reduced_polynomial(f: &BiRat, s: &[Vec<GaussCoeff>]) -> BiPoly {
    let n = s.len() - 1;
    let (a, b) = (f.num(), f.den());
    let comps: Vec<BiPoly> = (0..=n).map(|i| &a.pow(i as u32) * &b.pow((n - i) as u32)).collect();
    let conj: Vec<BiPoly> = comps.iter().map(BiPoly::conj).collect();
    let mut total = BiPoly::zero();
    for i in 0..=n {
        // Σ_j S_ij conj(A_j) first, then one product with A_i.
        let mut inner = BiPoly::zero();
        for j in 0..=n {
            if !s[i][j].is_zero() {
                inner = &inner + &conj[j].scale(&s[i][j]);
            }
        }
        if !inner.is_zero() {
            total = &total + &(&comps[i] * &inner);
        }
    }
    total
}

/// `D = Σ_{i,j} S_ij f^{i−1} f̄^{j−1}` (1-based), `S = Rᴴ R` restricted as
/// in [`RMatrix::gram`].
pub fn reduced_denominator(f: &BiRat, r: &RMatrix) -> Result<BiRat, TodaError> {
    check_function(f)?;
    let n = r.n();
    let p = reduced_polynomial(f, &r.gram());
    let q = f.den().pow(n as u32);
    Ok(BiRat::new(p, &q * &q.conj()))
}

/// `e^{u_1} = (D·∂∂̄D − ∂D·∂̄D)/D²` from a Hermitian coefficient matrix `S`,
/// without any condition on how `S` was produced.
pub fn reduced_u1_from_gram(f: &BiRat, s: &[Vec<GaussCoeff>]) -> Result<GaugedRat, TodaError> {
    check_function(f)?;
    let p = reduced_polynomial(f, s);
    // |b|^{2n} is separable, so it drops out of ∂∂̄ log D.
    let pz = p.derive(Var::Z);
    let b = &(&p * &pz.derive(Var::Zbar)) - &(&pz * &p.derive(Var::Zbar));
    Ok(GaugedRat::plain(BiRat::new(b, &p * &p)))
}

/// Closed form of the first field of the reduced solution for `(f, R)`.
pub fn reduced_u1_closed_form(f: &BiRat, r: &RMatrix) -> Result<GaugedRat, TodaError> {
    check_normalized(r)?;
    reduced_u1_from_gram(f, &r.gram())
}

/// The numerator `Σ_{i,j,l,m} S_ij S_lm (f^{i−1} f̄^{j−1} f′^{l−1} f̄′^{m−1}
/// − f^{i−1} f̄′^{j−1} f′^{l−1} f̄^{m−1})`, with powers (not derivatives)
/// of `f′`, taken literally.
pub fn ms_printed_numerator(f: &BiRat, r: &RMatrix) -> Result<GaugedRat, TodaError> {
    let fp = check_function(f)?;
    check_normalized(r)?;
    let s = r.gram();
    let n = r.n();
    let pw = |x: &BiRat| -> Vec<BiRat> { (0..=n).map(|k| x.pow(k as i32)).collect() };
    let (f_pow, fp_pow) = (pw(f), pw(&fp));
    let (fb_pow, fpb_pow) = (pw(&f.conj()), pw(&fp.conj()));
    let quad = |x: &[BiRat], y: &[BiRat]| -> BiRat {
        let mut acc = BiRat::zero();
        for i in 0..=n {
            for j in 0..=n {
                if !s[i][j].is_zero() {
                    acc = &acc + &(&x[i] * &y[j]).scale(&s[i][j]);
                }
            }
        }
        acc
    };
    // Each sum factors into a product of two quadratic forms.
    let first = &quad(&f_pow, &fb_pow) * &quad(&fp_pow, &fpb_pow);
    let second = &quad(&f_pow, &fpb_pow) * &quad(&fp_pow, &fb_pow);
    Ok(GaugedRat::plain(&first - &second))
}

/// Whether the literal numerator equals `e^{u_1}·D² = D·∂∂̄D − ∂D·∂̄D`.
pub fn printed_numerator_matches(f: &BiRat, r: &RMatrix) -> Result<bool, TodaError> {
    let printed = ms_printed_numerator(f, r)?;
    let d = reduced_denominator(f, r)?;
    let num = Arc::new(d.num().clone());
    let den = Arc::new(d.den().clone());
    let target = LazyRat::bilinear(&num, &den);
    let printed = printed.to_plain().expect("plain value");
    Ok(LazyRat::from_rat(&printed).sub(&target).is_zero())
}

/// `true` when `S = Rᴴ R` is diagonal with `S_ii·(i−1)!(n+1−i)!` independent
/// of `i`, i.e. `R` describes the rational normal curve up to a unitary
/// change and a constant factor.
pub fn is_rational_normal_gram(r: &RMatrix) -> bool {
    let n = r.n();
    let s = r.gram();
    let scaled = |i: usize| -> GaussCoeff {
        let f = crate::curve::factorial(i) * crate::curve::factorial(n - i);
        &s[i][i] * &GaussCoeff::real(BigRational::from_integer(f))
    };
    let first = scaled(0);
    (0..=n).all(|i| (0..=n).all(|j| if i == j { scaled(i) == first } else { s[i][j].is_zero() }))
}

/// `e^{u_i} / e^{u_1} = i(n+1−i)/n` exactly, for all `i`.
pub fn is_shifted_family(sol: &TodaSolution) -> bool {
    let consts = shift_constants(sol.n());
    let first = &sol.exp_u()[0];
    sol.exp_u().iter().zip(&consts.exp_c).all(|(e, c)| {
        let ratio = c / &consts.exp_c[0];
        *e == first.scale(&GaussCoeff::real(ratio))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{gram_norms, make_unit_pair, ms_lifting, rational_normal_lift, RScaling};

    fn one_plus_zw() -> BiRat {
        &BiRat::one() + &(&BiRat::z() * &BiRat::w())
    }

    #[test]
    fn cartan_examples() {
        assert_eq!(cartan_matrix(1).entries(), &[vec![2]]);
        assert_eq!(cartan_matrix(2).entries(), &[vec![2, -1], vec![-1, 2]]);
        assert_eq!(cartan_matrix(4).entries()[2], vec![0, -1, 2, -1]);
    }

    #[test]
    fn shift_constant_examples() {
        let ints = |n| shift_constants(n).exp_c.iter().map(|r| r.to_integer()).collect::<Vec<_>>();
        assert_eq!(ints(1), vec![BigInt::from(1)]);
        assert_eq!(ints(2), vec![BigInt::from(2), BigInt::from(2)]);
        assert_eq!(ints(3), vec![BigInt::from(3), BigInt::from(4), BigInt::from(3)]);
        assert!((shift_constants(3).c[1] - 4f64.ln()).abs() < 1e-15);
        assert!((1..=50).all(verify_shift_identity));
    }

    #[test]
    fn solutions_from_small_towers() {
        let pair = make_unit_pair(&BiPoly::one()).unwrap();
        let sol = solution_from_norms(&gram_norms(&rational_normal_lift(&pair, 1)).unwrap()).unwrap();
        assert_eq!(sol.exp_u()[0], GaugedRat::plain(one_plus_zw().pow(-2)));

        let tower = gram_norms(&rational_normal_lift(&pair, 2)).unwrap();
        let sol = solution_from_norms(&tower).unwrap();
        let two = GaugedRat::plain(one_plus_zw().pow(-2).scale(&GaussCoeff::from_int(2)));
        assert_eq!(sol.exp_u(), &[two.clone(), two]);
        for i in 1..=2 {
            assert_eq!(exp_u_product_form(&tower, i), sol.exp_u()[i - 1]);
        }

        let bad = tower.with_h(2, GaugedRat::plain(BiRat::from_int(2)));
        assert!(matches!(solution_from_norms(&bad), Err(TodaError::NonUnitTopNorm(_))));
    }

    #[test]
    fn w_substitution_examples() {
        let e = GaugedRat::plain(one_plus_zw().pow(-2));
        let w = w_substitution(std::slice::from_ref(&e));
        assert_eq!(w, vec![e.inv().unwrap(), e.clone()]);
        let ones = w_substitution(&[GaugedRat::one(), GaugedRat::one()]);
        assert!(ones.iter().all(|g| *g == GaugedRat::one()));
    }

    #[test]
    fn closed_form_examples() {
        let sphere = GaugedRat::plain(one_plus_zw().pow(-2));
        assert_eq!(reduced_u1_closed_form(&BiRat::z(), &RMatrix::identity(1)).unwrap(), sphere);

        // Generic f: f′f̄′/(1+f f̄)².
        let f = &BiRat::z().pow(2) + &BiRat::from_int(3);
        let fp = f.derive(Var::Z);
        let expect = &(&fp * &fp.conj()) / &(&BiRat::one() + &(&f * &f.conj())).pow(2);
        assert_eq!(reduced_u1_closed_form(&f, &RMatrix::identity(1)).unwrap(), GaugedRat::plain(expect));

        assert!(matches!(
            reduced_u1_closed_form(&BiRat::from_int(5), &RMatrix::identity(1)),
            Err(TodaError::DegenerateFunction(_))
        ));
        assert!(matches!(
            reduced_u1_closed_form(&BiRat::z(), &RMatrix::identity(2)),
            Err(TodaError::BadNormalization(_))
        ));
    }

    #[test]
    fn closed_form_matches_pipeline_for_rational_normal() {
        let r = RMatrix::rational_normal(2);
        let tower = gram_norms(&ms_lifting(&BiRat::z(), &r).unwrap()).unwrap();
        let sol = solution_from_norms(&tower).unwrap();
        let closed = reduced_u1_closed_form(&BiRat::z(), &r).unwrap();
        assert_eq!(sol.exp_u()[0], closed);
        assert_eq!(closed, GaugedRat::plain(one_plus_zw().pow(-2).scale(&GaussCoeff::from_int(2))));
        assert!(is_shifted_family(&sol));
    }

    #[test]
    fn printed_numerator_n1() {
        // f′f̄′ − f′f̄ + f f̄ − f f̄′ with f = z: 1 − w + zw − z.
        let r = RMatrix::identity(1);
        let p = ms_printed_numerator(&BiRat::z(), &r).unwrap();
        let expect = &(&(&BiRat::one() - &BiRat::w()) + &(&BiRat::z() * &BiRat::w())) - &BiRat::z();
        assert_eq!(p, GaugedRat::plain(expect));
        assert!(!printed_numerator_matches(&BiRat::z(), &r).unwrap());
    }

    #[test]
    fn printed_numerator_drops_vanishing_gram_entries() {
        // R_12 = 0 gives S_12 = S_21 = 0, so only diagonal pairs contribute.
        let r = RMatrix::from_rows(
            vec![
                vec![GaussCoeff::from_int(2), GaussCoeff::from_int(0)],
                vec![GaussCoeff::from_int(0), GaussCoeff::ratio(1, 2)],
            ],
            RScaling::Plain,
        )
        .unwrap();
        let s = r.gram();
        assert!(s[0][1].is_zero() && s[1][0].is_zero());
        assert!(ms_printed_numerator(&BiRat::z(), &r).is_ok());
    }

    #[test]
    fn unitary_row_phases_leave_closed_form_unchanged() {
        let r = RMatrix::from_rows(
            vec![
                vec![GaussCoeff::from_int(1), GaussCoeff::from_ints(1, 2)],
                vec![GaussCoeff::from_int(0), GaussCoeff::from_int(1)],
            ],
            RScaling::Plain,
        )
        .unwrap();
        let f = &BiRat::z() + &BiRat::z().pow(3);
        let base = reduced_u1_closed_form(&f, &r).unwrap();
        let phased = r.with_row_phases(&[GaussCoeff::from_ints(0, 1), GaussCoeff::from_int(-1)]).unwrap();
        assert_eq!(reduced_u1_from_gram(&f, &phased.gram()).unwrap(), base);
    }
}
