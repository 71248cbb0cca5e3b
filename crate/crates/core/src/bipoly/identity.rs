//! Exact zero test for sums of products of polynomials.
//!
//! `Σ_t c_t·Π_f P_{t,f}` is scaled to Gaussian-integer coefficients and
//! reduced modulo primes `p ≡ 1 (mod 2^20)` under both maps `i ↦ ±ι`. Each
//! image is tested by evaluating every factor on a grid of roots of unity
//! large enough that the grid values determine the polynomial. A nonzero
//! image proves the sum nonzero. Once the product of the primes used exceeds
//! twice an a-priori bound on every coefficient (real and imaginary parts
//! bounded through the ℓ¹ norms of the factors), vanishing of all images
//! proves the sum is identically zero. The answer is exact either way.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::coeff::GaussCoeff;
use super::poly::BiPoly;

const POOL: usize = 400;
/// Largest transform length per variable is `2^MAX_LOG`.
const MAX_LOG: u32 = 20;

/// Montgomery arithmetic modulo an NTT-friendly prime below `2^62`.
#[derive(Clone, Copy)]
struct Field {
    p: u64,
    /// `−p^{−1} mod 2^64`.
    pneg_inv: u64,
    /// `2^128 mod p`.
    r2: u64,
    /// Primitive `2^MAX_LOG`-th root of unity, Montgomery form.
    omega: u64,
    /// A square root of −1, plain form.
    iota: u64,
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powm(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a, p);
        }
        a = mulm(a, a, p);
        e >>= 1;
    }
    r
}

impl Field {
    fn new(p: u64) -> Self {
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = mulm(r, r, p);
        let half = (p - 1) / 2;
        let g = (2..).find(|&g| powm(g, half, p) == p - 1).unwrap();
        let mut f = Field { p, pneg_inv: inv.wrapping_neg(), r2, omega: 0, iota: powm(g, (p - 1) / 4, p) };
        f.omega = f.to_mont(powm(g, (p - 1) >> MAX_LOG, p));
        f
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.pneg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn to_mont(&self, a: u64) -> u64 {
        self.mul(a, self.r2)
    }

    fn from_big(&self, x: &BigInt) -> u64 {
        let (sign, digits) = x.to_u64_digits();
        let p = self.p as u128;
        let r = digits.iter().rev().fold(0u128, |acc, &d| ((acc << 64) | d as u128) % p) as u64;
        if sign == Sign::Minus && r != 0 {
            self.p - r
        } else {
            r
        }
    }

    /// `w^j` for `j < len/2`, `w` a primitive `len`-th root of unity.
    fn twiddles(&self, len: usize) -> Vec<u64> {
        let mut w = self.omega;
        let mut l = 1usize << MAX_LOG;
        while l > len {
            w = self.mul(w, w);
            l >>= 1;
        }
        let mut out = Vec::with_capacity(len / 2);
        let mut cur = self.to_mont(1);
        for _ in 0..len / 2 {
            out.push(cur);
            cur = self.mul(cur, w);
        }
        out
    }

    /// In-place DIF transform; output in bit-reversed order.
    fn ntt(&self, a: &mut [u64], tw: &[u64]) {
        let n = a.len();
        let mut len = n;
        while len >= 2 {
            let half = len / 2;
            let step = n / len;
            for chunk in a.chunks_exact_mut(len) {
                let (lo, hi) = chunk.split_at_mut(half);
                for j in 0..half {
                    let (u, v) = (lo[j], hi[j]);
                    lo[j] = self.add(u, v);
                    hi[j] = self.mul(self.sub(u, v), tw[j * step]);
                }
            }
            len = half;
        }
    }
}

fn pool() -> &'static [Field] {
    static P: OnceLock<Vec<Field>> = OnceLock::new();
    P.get_or_init(|| {
        let mut out = Vec::with_capacity(POOL);
        let mut c: u64 = ((1u64 << 62) - 1) >> MAX_LOG;
        while out.len() < POOL {
            let n = (c << MAX_LOG) + 1;
            if super::modular::is_prime(n) {
                out.push(Field::new(n));
            }
            c -= 1;
        }
        out
    })
}

/// A factor written as `scale · prim` with `prim` over ℤ[i].
struct IntFactor {
    terms: Vec<(u32, u32, BigInt, BigInt)>,
    norm1: BigInt,
    dz: u32,
    dw: u32,
}

fn integerize(p: &BiPoly) -> (BigRational, IntFactor) {
    let (ints, l) = p.to_gauss_int();
    let mut g = BigInt::zero();
    for (_, re, im) in &ints {
        g = g.gcd(re).gcd(im);
    }
    if g.is_zero() {
        g = BigInt::one();
    }
    let mut norm1 = BigInt::zero();
    let terms: Vec<_> = ints
        .into_iter()
        .map(|(m, re, im)| {
            let (re, im) = (re / &g, im / &g);
            norm1 += re.abs() + im.abs();
            (m.z, m.w, re, im)
        })
        .collect();
    let dz = terms.iter().map(|t| t.0).max().unwrap_or(0);
    let dw = terms.iter().map(|t| t.1).max().unwrap_or(0);
    (BigRational::new(g, l), IntFactor { terms, norm1, dz, dw })
}

/// Values of `re + e·im` (Montgomery form) for a Gaussian integer.
fn embed(f: &Field, re: &BigInt, im: &BigInt, e: u64) -> u64 {
    let v = (f.from_big(re) as u128 + mulm(f.from_big(im), e, f.p) as u128) % f.p as u128;
    f.to_mont(v as u64)
}

/// Values of a factor on the `nz × nw` grid of roots of unity.
fn evaluate(f: &Field, fac: &IntFactor, e: u64, nz: usize, nw: usize, tz: &[u64], tw: &[u64]) -> Vec<u64> {
    let mut grid = vec![0u64; nz * nw];
    for (z, w, re, im) in &fac.terms {
        grid[*z as usize * nw + *w as usize] = embed(f, re, im, e);
    }
    for z in 0..=fac.dz as usize {
        f.ntt(&mut grid[z * nw..(z + 1) * nw], tw);
    }
    let mut col = vec![0u64; nz];
    for w in 0..nw {
        for z in 0..nz {
            col[z] = grid[z * nw + w];
        }
        f.ntt(&mut col, tz);
        for z in 0..nz {
            grid[z * nw + w] = col[z];
        }
    }
    grid
}

/// One summand `coeff · Π factors`.
#[derive(Clone, Debug)]
pub struct Product {
    pub coeff: GaussCoeff,
    pub factors: Vec<Arc<BiPoly>>,
}

impl Product {
    pub fn new(coeff: GaussCoeff, factors: Vec<Arc<BiPoly>>) -> Self {
        Product { coeff, factors }
    }
}

/// Decides whether `Σ coeff·Π factors` is the zero polynomial.
pub fn vanishes(terms: &[Product]) -> bool {
    let terms: Vec<&Product> = terms
        .iter()
        .filter(|t| !t.coeff.is_zero() && t.factors.iter().all(|f| !f.is_zero()))
        .collect();
    if terms.is_empty() {
        return true;
    }
    // Integerize each distinct factor once.
    let mut cache: HashMap<*const BiPoly, usize> = HashMap::new();
    let mut factors: Vec<(BigRational, IntFactor)> = Vec::new();
    let mut plan: Vec<(GaussCoeff, Vec<usize>)> = Vec::with_capacity(terms.len());
    for t in &terms {
        let mut idx = Vec::with_capacity(t.factors.len());
        let mut scale = t.coeff.clone();
        for f in &t.factors {
            let key = Arc::as_ptr(f);
            let k = *cache.entry(key).or_insert_with(|| {
                factors.push(integerize(f));
                factors.len() - 1
            });
            scale = &scale * &GaussCoeff::real(factors[k].0.clone());
            idx.push(k);
        }
        plan.push((scale, idx));
    }
    // Common integer multiplier for the scalars.
    let den = plan
        .iter()
        .fold(BigInt::one(), |acc, (c, _)| acc.lcm(&c.denom_lcm()));
    let mut scalars: Vec<(BigInt, BigInt)> = Vec::with_capacity(plan.len());
    let mut bound = BigInt::zero();
    for (c, idx) in &plan {
        let re = (&c.re * BigRational::from_integer(den.clone())).to_integer();
        let im = (&c.im * BigRational::from_integer(den.clone())).to_integer();
        let mut b = re.abs() + im.abs();
        for &k in idx {
            b *= &factors[k].1.norm1;
        }
        bound += b;
        scalars.push((re, im));
    }
    let target = bound * 2u32;
    let mut modulus = BigInt::one();
    for f in pool() {
        for e in [f.iota, f.p - f.iota] {
            if !image_vanishes(&plan, &scalars, &factors, f, e) {
                return false;
            }
        }
        modulus *= BigInt::from(f.p);
        if modulus > target {
            return true;
        }
    }
    panic!("zero test exhausted its prime pool (bound of {} bits)", target.bits());
}

fn image_vanishes(
    plan: &[(GaussCoeff, Vec<usize>)],
    scalars: &[(BigInt, BigInt)],
    factors: &[(BigRational, IntFactor)],
    f: &Field,
    e: u64,
) -> bool {
    let degree = |pick: fn(&IntFactor) -> u32| {
        plan.iter()
            .map(|(_, idx)| idx.iter().map(|&k| pick(&factors[k].1) as usize).sum::<usize>())
            .max()
            .unwrap_or(0)
    };
    let nz = (degree(|x| x.dz) + 1).next_power_of_two().max(2);
    let nw = (degree(|x| x.dw) + 1).next_power_of_two().max(2);
    assert!(nz.max(nw) <= 1 << MAX_LOG, "degree too large for the zero test");
    let (tz, tw) = (f.twiddles(nz), f.twiddles(nw));
    let mut values: HashMap<usize, Vec<u64>> = HashMap::new();
    let mut total = vec![0u64; nz * nw];
    let mut prod = vec![0u64; nz * nw];
    for ((_, idx), (re, im)) in plan.iter().zip(scalars) {
        let c = embed(f, re, im, e);
        if c == 0 {
            continue;
        }
        prod.iter_mut().for_each(|v| *v = c);
        for &k in idx {
            let vals = values
                .entry(k)
                .or_insert_with(|| evaluate(f, &factors[k].1, e, nz, nw, &tz, &tw));
            for (a, &b) in prod.iter_mut().zip(vals.iter()) {
                *a = f.mul(*a, b);
            }
        }
        for (t, &v) in total.iter_mut().zip(prod.iter()) {
            *t = f.add(*t, v);
        }
    }
    total.iter().all(|&v| v == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipoly::Mono;

    fn arc(p: BiPoly) -> Arc<BiPoly> {
        Arc::new(p)
    }

    #[test]
    fn detects_identities_and_non_identities() {
        let a = &BiPoly::one() + &(&BiPoly::z() * &BiPoly::w());
        let b = &BiPoly::z() - &BiPoly::constant(GaussCoeff::from_ints(1, 3));
        let ab = &a * &b;
        let one = GaussCoeff::from_int(1);
        let minus = GaussCoeff::from_int(-1);
        let t = vec![
            Product::new(one.clone(), vec![arc(a.clone()), arc(b.clone())]),
            Product::new(minus.clone(), vec![arc(ab.clone())]),
        ];
        assert!(vanishes(&t));
        let bumped = &ab + &BiPoly::monomial(GaussCoeff::ratio(1, 1_000_000_007), Mono::new(3, 3));
        let t = vec![
            Product::new(one, vec![arc(a), arc(b)]),
            Product::new(minus, vec![arc(bumped)]),
        ];
        assert!(!vanishes(&t));
    }

    #[test]
    fn large_coefficients_need_several_primes() {
        let big = GaussCoeff::real(BigRational::new(BigInt::from(3).pow(200u32), BigInt::from(7).pow(90u32)));
        let a = BiPoly::z().scale(&big) + BiPoly::w();
        let sq = &a * &a;
        let t = vec![
            Product::new(GaussCoeff::from_int(1), vec![arc(a.clone()), arc(a.clone())]),
            Product::new(GaussCoeff::from_int(-1), vec![arc(sq.clone())]),
        ];
        assert!(vanishes(&t));
        // A tiny perturbation far below any single prime's reach.
        let nudged = &sq + &BiPoly::constant(GaussCoeff::from_int(1));
        let t = vec![
            Product::new(GaussCoeff::from_int(1), vec![arc(a.clone()), arc(a)]),
            Product::new(GaussCoeff::from_int(-1), vec![arc(nudged)]),
        ];
        assert!(!vanishes(&t));
    }
}
