//! Toda frames of the rational normal curve, the operator
//! `P f = ∂_z(‖v‖⁴ f)` and its kernel.
//!
//! Only even powers of `‖v‖` occur, so every quantity is a plain [`BiRat`]
//! with powers of `‖v‖²` in the denominator.

use num_rational::BigRational;
use thiserror::Error;

use crate::bipoly::{BiRat, GaussCoeff, Var};
use crate::curve::{derivative_matrix, Lifting, UnitWronskianPair, WeightedLifting};
use crate::linalg;
use crate::toda::ShiftConstants;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error("frame recursion did not terminate: f_{index} = {witness}")]
    RecursionNonTerminating { index: usize, witness: String },
}

/// A vector of components together with the pair it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct PChainState {
    pair: UnitWronskianPair,
    normsq: BiRat,
    current: Vec<BiRat>,
}

impl PChainState {
    pub fn new(pair: &UnitWronskianPair, current: Vec<BiRat>) -> Self {
        PChainState { normsq: pair.normsq(), pair: pair.clone(), current }
    }

    pub fn pair(&self) -> &UnitWronskianPair {
        &self.pair
    }

    /// `‖v‖²`.
    pub fn normsq(&self) -> &BiRat {
        &self.normsq
    }

    pub fn current(&self) -> &[BiRat] {
        &self.current
    }

    pub fn is_zero(&self) -> bool {
        self.current.iter().all(BiRat::is_zero)
    }
}

/// `current ↦ ∂_z(‖v‖⁴·current)`.
pub fn p_operator(state: &PChainState) -> PChainState {
    let n4 = state.normsq.pow(2);
    let current = state.current.iter().map(|c| (&n4 * c).derive(Var::Z)).collect();
    PChainState { pair: state.pair.clone(), normsq: state.normsq.clone(), current }
}

/// `P^{n+1}(‖v‖^{−2(n+2)}·v0^k v1^{n−k}) = 0`.
pub fn p_kernel_check(pair: &UnitWronskianPair, n: usize, k: usize) -> bool {
    assert!(k <= n, "k must lie in 0..=n");
    let start = &pair.normsq().pow(-(n as i32 + 2)) * &(&pair.v0().pow(k as i32) * &pair.v1().pow((n - k) as i32));
    let mut state = PChainState::new(pair, vec![start]);
    for _ in 0..=n {
        state = p_operator(&state);
        if state.is_zero() {
            return true;
        }
    }
    state.is_zero()
}

/// Wronskian of `v0ⁿ, v0^{n−1}v1, …, v1ⁿ`; equals `Π_{k=0}^{n} k!` for a
/// unit-Wronskian pair.
pub fn kernel_basis_wronskian(pair: &UnitWronskianPair, n: usize) -> BiRat {
    let monomials: Vec<BiRat> = (0..=n)
        .map(|k| &pair.v0().pow((n - k) as i32) * &pair.v1().pow(k as i32))
        .collect();
    linalg::det(&derivative_matrix(&monomials, n + 1))
}

/// `f̂_0, …, f̂_n` for the rational normal lift of a pair. Components are the
/// unweighted parts; the weights enter only through inner products.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameSequence {
    n: usize,
    frames: Vec<Vec<BiRat>>,
    sq_weights: Vec<BigRational>,
    pair: UnitWronskianPair,
}

impl FrameSequence {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn frames(&self) -> &[Vec<BiRat>] {
        &self.frames
    }

    pub fn frame(&self, k: usize) -> &[BiRat] {
        &self.frames[k]
    }

    pub fn pair(&self) -> &UnitWronskianPair {
        &self.pair
    }

    /// `⟨f̂_i, f̂_j⟩ = Σ_k a_k·f̂_i[k]·conj(f̂_j[k])`.
    pub fn inner(&self, i: usize, j: usize) -> BiRat {
        self.frames[i]
            .iter()
            .zip(&self.frames[j])
            .zip(&self.sq_weights)
            .fold(BiRat::zero(), |acc, ((a, b), w)| {
                &acc + &(a * &b.conj()).scale(&GaussCoeff::real(w.clone()))
            })
    }
}

/// `(v_z, v) = v0′·conj(v0) + v1′·conj(v1)`.
fn vz_dot_v(pair: &UnitWronskianPair) -> BiRat {
    let (v0, v1) = (pair.v0(), pair.v1());
    &(&v0.derive(Var::Z) * &v0.conj()) + &(&v1.derive(Var::Z) * &v1.conj())
}

fn scale_vec(v: &[BiRat], s: &BiRat) -> Vec<BiRat> {
    v.iter().map(|c| c * s).collect()
}

fn sub_vec(a: &[BiRat], b: &[BiRat]) -> Vec<BiRat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn derive_vec(v: &[BiRat], var: Var) -> Vec<BiRat> {
    v.iter().map(|c| c.derive(var)).collect()
}

/// One step `∂f̂_k − 2(w_k)_z f̂_k` with `2(w_k)_z = (n−2k)(v_z, v)/‖v‖²`.
fn recursion_step(f: &[BiRat], n: usize, k: usize, log_d: &BiRat) -> Vec<BiRat> {
    let c = BiRat::from_int(n as i64 - 2 * k as i64);
    sub_vec(&derive_vec(f, Var::Z), &scale_vec(f, &(&c * log_d)))
}

/// Runs the frame recursion from the lift and asserts `f̂_{n+1} = 0`.
pub fn frame_sequence(lift: &WeightedLifting, pair: &UnitWronskianPair) -> Result<FrameSequence, FrameError> {
    let n = lift.n();
    let log_d = &vz_dot_v(pair) / &pair.normsq();
    let mut frames = vec![lift.parts().to_vec()];
    for k in 0..=n {
        let next = recursion_step(&frames[k], n, k, &log_d);
        if k == n {
            if let Some(c) = next.iter().find(|c| !c.is_zero()) {
                return Err(FrameError::RecursionNonTerminating { index: n + 1, witness: c.summary() });
            }
        } else {
            frames.push(next);
        }
    }
    Ok(FrameSequence { n, frames, sq_weights: lift.sq_weights().to_vec(), pair: pair.clone() })
}

/// `∂_z̄ f̂_0 = 0` and `∂_z̄ f̂_k + (e^{c_k}/‖v‖⁴)·f̂_{k−1} = 0` for `k = 1..=n`.
pub fn verify_dbar_identity(seq: &FrameSequence, consts: &ShiftConstants) -> bool {
    if consts.n != seq.n {
        return false;
    }
    if !derive_vec(&seq.frames[0], Var::Zbar).iter().all(BiRat::is_zero) {
        return false;
    }
    let inv4 = seq.pair.normsq().pow(-2);
    (1..=seq.n).all(|k| {
        let e = inv4.scale(&GaussCoeff::real(consts.exp_c[k - 1].clone()));
        let lhs = derive_vec(&seq.frames[k], Var::Zbar);
        lhs.iter().zip(&seq.frames[k - 1]).all(|(d, prev)| (d + &(&e * prev)).is_zero())
    })
}

/// `∂f̂_k − 2(w_k)_z f̂_k = ‖v‖^{2(n−2k)}·∂(‖v‖^{2(2k−n)} f̂_k)` for every `k`.
pub fn recursion_forms_agree(seq: &FrameSequence) -> bool {
    let n = seq.n;
    let normsq = seq.pair.normsq();
    let log_d = &vz_dot_v(&seq.pair) / &normsq;
    (0..=n).all(|k| {
        let e = 2 * k as i32 - n as i32;
        let direct = recursion_step(&seq.frames[k], n, k, &log_d);
        let weighted = scale_vec(&seq.frames[k], &normsq.pow(e));
        let rewritten = scale_vec(&derive_vec(&weighted, Var::Z), &normsq.pow(-e));
        direct == rewritten
    })
}

/// `φ_{k+1} = P φ_k` with `φ_k = ‖v‖^{2(2k−2−n)} f̂_k`, and `P φ_n = 0`.
pub fn chain_consistency(seq: &FrameSequence) -> bool {
    let n = seq.n;
    let normsq = seq.pair.normsq();
    let phi = |k: usize| scale_vec(&seq.frames[k], &normsq.pow(2 * k as i32 - 2 - n as i32));
    (0..=n).all(|k| {
        let next = p_operator(&PChainState::new(&seq.pair, phi(k)));
        if k == n {
            next.is_zero()
        } else {
            next.current == phi(k + 1)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipoly::BiPoly;
    use crate::curve::{make_unit_pair, rational_normal_lift};
    use crate::toda::shift_constants;

    fn standard() -> UnitWronskianPair {
        make_unit_pair(&BiPoly::one()).unwrap()
    }

    fn d() -> BiRat {
        &BiRat::one() + &(&BiRat::z() * &BiRat::w())
    }

    #[test]
    fn p_operator_chain() {
        let pair = standard();
        let step = |c: BiRat| p_operator(&PChainState::new(&pair, vec![c])).current()[0].clone();
        let w = BiRat::w();
        assert_eq!(step(d().pow(-3)), -(&w * &d().pow(-2)));
        assert_eq!(step(&BiRat::z() * &d().pow(-3)), d().pow(-2));
        assert!(step(-(&w * &d().pow(-2))).is_zero());
    }

    #[test]
    fn kernel_examples() {
        let pair = standard();
        assert!(p_kernel_check(&pair, 1, 0) && p_kernel_check(&pair, 1, 1));
        assert!(p_kernel_check(&pair, 2, 1));
        let pz = make_unit_pair(&BiPoly::z()).unwrap();
        assert!((0..=2).all(|k| p_kernel_check(&pz, 2, k)));
        assert_eq!(kernel_basis_wronskian(&pair, 2), BiRat::from_int(2));
        assert_eq!(kernel_basis_wronskian(&pair, 3), BiRat::from_int(12));
        assert_eq!(kernel_basis_wronskian(&pz, 2), BiRat::from_int(2));
    }

    #[test]
    fn frames_n1() {
        let pair = standard();
        let seq = frame_sequence(&rational_normal_lift(&pair, 1), &pair).unwrap();
        assert_eq!(seq.frame(0), &[BiRat::one(), BiRat::z()]);
        let inv = d().inv().unwrap();
        assert_eq!(seq.frame(1), &[-(&BiRat::w() * &inv), inv]);
        assert!(verify_dbar_identity(&seq, &shift_constants(1)));
        assert!(seq.inner(0, 1).is_zero());
        assert!(recursion_forms_agree(&seq) && chain_consistency(&seq));
    }

    #[test]
    fn frames_n2_and_wrong_constants() {
        let pair = standard();
        let seq = frame_sequence(&rational_normal_lift(&pair, 2), &pair).unwrap();
        assert!(verify_dbar_identity(&seq, &shift_constants(2)));
        let mut wrong = shift_constants(2);
        wrong.exp_c[0] = BigRational::from_integer(3.into());
        assert!(!verify_dbar_identity(&seq, &wrong));
    }

    #[test]
    fn non_rational_normal_lift_does_not_terminate() {
        let pair = standard();
        let lift = WeightedLifting::unweighted(vec![BiRat::one(), BiRat::z().pow(2)]).unwrap();
        assert!(matches!(frame_sequence(&lift, &pair), Err(FrameError::RecursionNonTerminating { .. })));
    }
}
