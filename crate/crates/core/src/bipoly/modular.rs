//! Modular gcd for ℚ(i)[z, w].
//!
//! Each prime `p ≡ 1 (mod 4)` carries a square root `ι` of `−1`, giving two
//! ring maps `ℚ(i) → 𝔽_p` (`i ↦ ι` and `i ↦ −ι`). Both images of the inputs go
//! through Brown's dense bivariate gcd; the two monic images are recombined
//! into Gaussian residues, lifted by CRT over several primes, rationally
//! reconstructed, and accepted only after an exact multiplication check
//! `a = g·(a/g)`, `b = g·(b/g)` over ℚ(i).

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::coeff::GaussCoeff;
use super::poly::{BiPoly, Mono};

const PRIME_POOL: usize = 400;
const MAX_PRIMES_PER_GCD: usize = 380;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Prime {
    pub p: u64,
    pub iota: u64,
}

#[inline]
fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
fn addm(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
fn subm(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn powm(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a, p);
        }
        a = mulm(a, a, p);
        e >>= 1;
    }
    r
}

#[inline]
fn invm(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    powm(a, p - 2, p)
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powm(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulm(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn primes() -> &'static [Prime] {
    static POOL: OnceLock<Vec<Prime>> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut out = Vec::with_capacity(PRIME_POOL);
        let mut n: u64 = (1u64 << 62) - 3;
        while out.len() < PRIME_POOL {
            if is_prime(n) {
                let half = (n - 1) / 2;
                let g = (2..).find(|&g| powm(g, half, n) == n - 1).unwrap();
                let iota = powm(g, (n - 1) / 4, n);
                debug_assert_eq!(mulm(iota, iota, n), n - 1);
                out.push(Prime { p: n, iota });
            }
            n -= 4;
        }
        out
    })
}

fn bigint_mod(x: &BigInt, p: u64) -> u64 {
    let r = (x % BigInt::from(p)).to_i128().unwrap();
    if r < 0 {
        (r + p as i128) as u64
    } else {
        r as u64
    }
}

fn rat_mod(r: &BigRational, p: u64) -> Option<u64> {
    let d = bigint_mod(r.denom(), p);
    if d == 0 {
        return None;
    }
    Some(mulm(bigint_mod(r.numer(), p), invm(d, p), p))
}

fn coeff_image(c: &GaussCoeff, p: u64, embed: u64) -> Option<u64> {
    let re = rat_mod(&c.re, p)?;
    if c.im.is_zero() {
        return Some(re);
    }
    let im = rat_mod(&c.im, p)?;
    Some(addm(re, mulm(im, embed, p), p))
}

// ---------------------------------------------------------------------------
// Dense univariate polynomials over 𝔽_p (index = degree, no trailing zeros).

type UPoly = Vec<u64>;

fn up_trim(a: &mut UPoly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn up_eval(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| addm(mulm(acc, x, p), c, p))
}

fn up_monic(a: &mut UPoly, p: u64) {
    if let Some(&lc) = a.last() {
        if lc != 1 {
            let inv = invm(lc, p);
            for c in a.iter_mut() {
                *c = mulm(*c, inv, p);
            }
        }
    }
}

/// Remainder of `a` by nonzero `b`, in place; optional quotient.
fn up_divrem(a: &UPoly, b: &UPoly, p: u64) -> (UPoly, UPoly) {
    let db = b.len() - 1;
    if a.len() < b.len() {
        return (Vec::new(), a.clone());
    }
    let inv = invm(*b.last().unwrap(), p);
    let mut r = a.clone();
    let mut q = vec![0u64; a.len() - db];
    for k in (0..q.len()).rev() {
        let c = mulm(r[k + db], inv, p);
        q[k] = c;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                r[k + j] = subm(r[k + j], mulm(c, bj, p), p);
            }
        }
    }
    r.truncate(db);
    up_trim(&mut r);
    (q, r)
}

fn up_gcd(a: &UPoly, b: &UPoly, p: u64) -> UPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let (_, r) = up_divrem(&x, &y, p);
        x = y;
        y = r;
    }
    up_monic(&mut x, p);
    x
}

fn up_mul(a: &[u64], b: &[u64], p: u64) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = addm(out[i + j], mulm(x, y, p), p);
        }
    }
    up_trim(&mut out);
    out
}

/// Newton interpolation through `(xs[k], ys[k])`.
fn interpolate(xs: &[u64], ys: &[u64], p: u64) -> UPoly {
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for k in (j..n).rev() {
            let num = subm(coef[k], coef[k - 1], p);
            let den = subm(xs[k], xs[k - j], p);
            coef[k] = mulm(num, invm(den, p), p);
        }
    }
    // Horner expansion of the Newton form.
    let mut out: UPoly = vec![coef[n - 1]];
    for k in (0..n - 1).rev() {
        // out = out * (x - xs[k]) + coef[k]
        let mut next = vec![0u64; out.len() + 1];
        for (i, &c) in out.iter().enumerate() {
            next[i + 1] = addm(next[i + 1], c, p);
            next[i] = subm(next[i], mulm(c, xs[k], p), p);
        }
        next[0] = addm(next[0], coef[k], p);
        out = next;
    }
    up_trim(&mut out);
    out
}

// ---------------------------------------------------------------------------
// Dense bivariate polynomials over 𝔽_p: `bp[i]` is the coefficient of z^i,
// itself a polynomial in w.

type BPoly = Vec<UPoly>;

fn bp_trim(a: &mut BPoly) {
    while a.last().is_some_and(|c| c.is_empty()) {
        a.pop();
    }
}

fn bp_content(a: &BPoly, p: u64) -> UPoly {
    let mut g: UPoly = Vec::new();
    for c in a {
        if c.is_empty() {
            continue;
        }
        g = if g.is_empty() {
            let mut m = c.clone();
            up_monic(&mut m, p);
            m
        } else {
            up_gcd(&g, c, p)
        };
        if g.len() == 1 {
            break;
        }
    }
    g
}

fn bp_div_content(a: &BPoly, c: &UPoly, p: u64) -> BPoly {
    if c.len() <= 1 {
        return a.clone();
    }
    a.iter()
        .map(|x| {
            if x.is_empty() {
                Vec::new()
            } else {
                let (q, r) = up_divrem(x, c, p);
                debug_assert!(r.is_empty());
                q
            }
        })
        .collect()
}

fn bp_eval_w(a: &BPoly, alpha: u64, p: u64) -> UPoly {
    let mut out: UPoly = a.iter().map(|c| up_eval(c, alpha, p)).collect();
    up_trim(&mut out);
    out
}

fn bp_wdeg(a: &BPoly) -> usize {
    a.iter().map(|c| c.len().saturating_sub(1)).max().unwrap_or(0)
}

/// Brown's dense gcd with `z` main and `w` the evaluation variable. `None`
/// means the prime or evaluation points turned out unusable.
fn brown(a: &BPoly, b: &BPoly, p: u64) -> Option<BPoly> {
    let ca = bp_content(a, p);
    let cb = bp_content(b, p);
    let cont = up_gcd(&ca, &cb, p);
    let a1 = bp_div_content(a, &ca, p);
    let b1 = bp_div_content(b, &cb, p);
    let trivial = || -> BPoly { vec![cont.clone()] };
    if a1.len() <= 1 || b1.len() <= 1 {
        return Some(trivial());
    }
    let lca = a1.last().unwrap();
    let lcb = b1.last().unwrap();
    let gamma = up_gcd(lca, lcb, p);
    let bound = (gamma.len() - 1) + bp_wdeg(&a1).min(bp_wdeg(&b1));
    let mut e = a1.len().min(b1.len()) - 1;
    let mut xs: Vec<u64> = Vec::new();
    let mut vals: Vec<UPoly> = Vec::new();
    let max_tries = 4 * (bound + 1) + 64;
    let mut alpha = 0u64;
    for _ in 0..max_tries {
        alpha += 1;
        if up_eval(lca, alpha, p) == 0 || up_eval(lcb, alpha, p) == 0 {
            continue;
        }
        let ga = bp_eval_w(&a1, alpha, p);
        let gb = bp_eval_w(&b1, alpha, p);
        let mut g = up_gcd(&ga, &gb, p);
        let dg = g.len() - 1;
        if dg == 0 {
            return Some(trivial());
        }
        if dg < e {
            e = dg;
            xs.clear();
            vals.clear();
        } else if dg > e {
            continue;
        }
        if xs.is_empty() && dg > e {
            continue;
        }
        let s = up_eval(&gamma, alpha, p);
        for c in g.iter_mut() {
            *c = mulm(*c, s, p);
        }
        xs.push(alpha);
        vals.push(g);
        if xs.len() == bound + 1 {
            let mut h: BPoly = (0..=e)
                .map(|j| {
                    let ys: Vec<u64> = vals.iter().map(|v| v.get(j).copied().unwrap_or(0)).collect();
                    interpolate(&xs, &ys, p)
                })
                .collect();
            bp_trim(&mut h);
            let hc = bp_content(&h, p);
            let h = bp_div_content(&h, &hc, p);
            let h: BPoly = h.iter().map(|c| up_mul(c, &cont, p)).collect();
            return Some(h);
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Conversions between exact polynomials and their images.

fn image(a: &BiPoly, p: u64, embed: u64) -> Option<BPoly> {
    let dz = a.degree(super::Var::Z) as usize;
    let dw = a.degree(super::Var::Zbar) as usize;
    let mut out: BPoly = vec![vec![0u64; dw + 1]; dz + 1];
    for (m, c) in a.terms() {
        out[m.z as usize][m.w as usize] = coeff_image(c, p, embed)?;
    }
    for c in out.iter_mut() {
        up_trim(c);
    }
    bp_trim(&mut out);
    Some(out)
}

type SparseImage = BTreeMap<Mono, u64>;

fn to_sparse(a: &BPoly) -> SparseImage {
    let mut out = BTreeMap::new();
    for (i, c) in a.iter().enumerate() {
        for (j, &v) in c.iter().enumerate() {
            if v != 0 {
                out.insert(Mono::new(i as u32, j as u32), v);
            }
        }
    }
    out
}

fn sparse_monic(a: &mut SparseImage, p: u64) {
    if let Some((_, &lc)) = a.iter().next_back() {
        let inv = invm(lc, p);
        for v in a.values_mut() {
            *v = mulm(*v, inv, p);
        }
    }
}

/// Exact division of `a` by monic `g` in 𝔽_p[z, w] under the graded order.
fn sparse_div(a: &SparseImage, g: &SparseImage, p: u64) -> Option<SparseImage> {
    let (&lm, &lc) = g.iter().next_back()?;
    debug_assert_eq!(lc, 1);
    let mut rem = a.clone();
    let mut quot = BTreeMap::new();
    while let Some((&m, &c)) = rem.iter().next_back() {
        if !lm.divides(m) {
            return None;
        }
        let qm = Mono::new(m.z - lm.z, m.w - lm.w);
        for (&gm, &gc) in g.iter() {
            let key = gm + qm;
            let e = rem.entry(key).or_insert(0);
            *e = subm(*e, mulm(c, gc, p), p);
            if *e == 0 {
                rem.remove(&key);
            }
        }
        quot.insert(qm, c);
    }
    Some(quot)
}

// ---------------------------------------------------------------------------
// CRT accumulation and rational reconstruction.

#[derive(Default)]
struct Residues {
    re: BTreeMap<Mono, BigInt>,
    im: BTreeMap<Mono, BigInt>,
}

fn crt_step(old: &BigInt, modulus: &BigInt, r: u64, p: u64, minv: u64) -> BigInt {
    let old_p = bigint_mod(old, p);
    let t = mulm(subm(r, old_p, p), minv, p);
    old + modulus * BigInt::from(t)
}

impl Residues {
    /// Folds in the Gaussian image given by its two embeddings.
    fn absorb(
        &mut self,
        plus: &SparseImage,
        minus: &SparseImage,
        prime: Prime,
        modulus: &BigInt,
        minv: u64,
    ) {
        let p = prime.p;
        let inv2 = invm(2, p);
        let inv2i = invm(mulm(2, prime.iota, p), p);
        let keys: BTreeSet<Mono> = plus
            .keys()
            .chain(minus.keys())
            .chain(self.re.keys())
            .copied()
            .collect();
        for m in keys {
            let x = plus.get(&m).copied().unwrap_or(0);
            let y = minus.get(&m).copied().unwrap_or(0);
            let re = mulm(addm(x, y, p), inv2, p);
            let im = mulm(subm(x, y, p), inv2i, p);
            let zero = BigInt::zero();
            let old_re = self.re.get(&m).unwrap_or(&zero);
            let old_im = self.im.get(&m).unwrap_or(&zero);
            let new_re = crt_step(old_re, modulus, re, p, minv);
            let new_im = crt_step(old_im, modulus, im, p, minv);
            self.re.insert(m, new_re);
            self.im.insert(m, new_im);
        }
    }

    fn reconstruct(&self, modulus: &BigInt) -> Option<BiPoly> {
        let bound = (modulus / 2u32).sqrt();
        let mut terms = Vec::with_capacity(self.re.len());
        for (m, re) in &self.re {
            let re = rational_reconstruct(re, modulus, &bound)?;
            let im = rational_reconstruct(&self.im[m], modulus, &bound)?;
            terms.push((*m, GaussCoeff::new(re, im)));
        }
        Some(BiPoly::from_terms(terms))
    }
}

/// Finds `n/d ≡ u (mod m)` with `|n|, d ≤ bound`, if one exists.
fn rational_reconstruct(u: &BigInt, m: &BigInt, bound: &BigInt) -> Option<BigRational> {
    let u = u.mod_floor(m);
    if u.is_zero() {
        return Some(BigRational::zero());
    }
    let (mut r0, mut r1) = (m.clone(), u);
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || &t1.abs() > bound {
        return None;
    }
    if !r1.gcd(&t1).is_one() {
        return None;
    }
    let (n, d) = if t1.sign() == Sign::Minus { (-r1, -t1) } else { (r1, t1) };
    Some(BigRational::new(n, d))
}

// ---------------------------------------------------------------------------

pub(crate) struct Cofactored {
    pub gcd: BiPoly,
    pub cof_a: BiPoly,
    pub cof_b: BiPoly,
}

/// Images of `a`, `b` under one embedding, plus their monic gcd and cofactors.
struct ImageTriple {
    g: SparseImage,
    ca: SparseImage,
    cb: SparseImage,
}

enum PrimeOutcome {
    Trivial,
    Images(ImageTriple),
    Unusable,
}

fn per_embedding(a: &BiPoly, b: &BiPoly, p: u64, embed: u64) -> PrimeOutcome {
    let (Some(ai), Some(bi)) = (image(a, p, embed), image(b, p, embed)) else {
        return PrimeOutcome::Unusable;
    };
    // Leading terms must survive reduction for the degree arguments to hold.
    let lead_ok = |x: &BiPoly| {
        x.leading()
            .and_then(|(_, c)| coeff_image(c, p, embed))
            .is_some_and(|v| v != 0)
    };
    if !lead_ok(a) || !lead_ok(b) {
        return PrimeOutcome::Unusable;
    }
    let Some(g) = brown(&ai, &bi, p) else {
        return PrimeOutcome::Unusable;
    };
    let mut g = to_sparse(&g);
    if g.keys().all(|m| *m == Mono::ONE) {
        return PrimeOutcome::Trivial;
    }
    sparse_monic(&mut g, p);
    let (Some(ca), Some(cb)) = (
        sparse_div(&to_sparse(&ai), &g, p),
        sparse_div(&to_sparse(&bi), &g, p),
    ) else {
        return PrimeOutcome::Unusable;
    };
    PrimeOutcome::Images(ImageTriple { g, ca, cb })
}

/// Monic gcd of nonzero `a`, `b` with exact cofactors.
pub(crate) fn modular_gcd(a: &BiPoly, b: &BiPoly) -> Cofactored {
    let trivial = || Cofactored { gcd: BiPoly::one(), cof_a: a.clone(), cof_b: b.clone() };
    let mut modulus = BigInt::one();
    let mut g_res = Residues::default();
    let mut a_res = Residues::default();
    let mut b_res = Residues::default();
    let mut lead: Option<Mono> = None;
    let mut previous: Option<BiPoly> = None;
    let mut used = 0usize;

    for &prime in primes() {
        if used >= MAX_PRIMES_PER_GCD {
            break;
        }
        let p = prime.p;
        let plus = per_embedding(a, b, p, prime.iota);
        let plus = match plus {
            PrimeOutcome::Trivial => return trivial(),
            PrimeOutcome::Unusable => continue,
            PrimeOutcome::Images(t) => t,
        };
        let minus = match per_embedding(a, b, p, p - prime.iota) {
            PrimeOutcome::Trivial => return trivial(),
            PrimeOutcome::Unusable => continue,
            PrimeOutcome::Images(t) => t,
        };
        let lm_plus = *plus.g.keys().next_back().unwrap();
        let lm_minus = *minus.g.keys().next_back().unwrap();
        if lm_plus != lm_minus {
            continue;
        }
        match lead {
            Some(l) if lm_plus > l => continue,
            Some(l) if lm_plus < l => {
                modulus = BigInt::one();
                g_res = Residues::default();
                a_res = Residues::default();
                b_res = Residues::default();
                previous = None;
                lead = Some(lm_plus);
            }
            None => lead = Some(lm_plus),
            _ => {}
        }
        used += 1;
        let minv = invm(bigint_mod(&modulus, p), p);
        g_res.absorb(&plus.g, &minus.g, prime, &modulus, minv);
        a_res.absorb(&plus.ca, &minus.ca, prime, &modulus, minv);
        b_res.absorb(&plus.cb, &minus.cb, prime, &modulus, minv);
        modulus *= BigInt::from(p);

        let Some(g) = g_res.reconstruct(&modulus) else {
            continue;
        };
        let stable = previous.as_ref() == Some(&g);
        previous = Some(g.clone());
        if !stable {
            continue;
        }
        let (Some(ca), Some(cb)) = (a_res.reconstruct(&modulus), b_res.reconstruct(&modulus)) else {
            continue;
        };
        if &(&g * &ca) == a && &(&g * &cb) == b {
            return Cofactored { gcd: g, cof_a: ca, cof_b: cb };
        }
    }
    panic!("modular gcd failed to converge (inputs of {} and {} terms)", a.len(), b.len());
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_pool_has_square_roots_of_minus_one() {
        for pr in primes().iter().take(5) {
            assert_eq!(pr.p % 4, 1);
            assert_eq!(mulm(pr.iota, pr.iota, pr.p), pr.p - 1);
        }
    }

    #[test]
    fn reconstruct_small_rationals() {
        let m = BigInt::from(primes()[0].p) * BigInt::from(primes()[1].p);
        let bound = (&m / 2u32).sqrt();
        for (n, d) in [(3i64, 7i64), (-22, 5), (0, 1), (1, 1)] {
            let x = BigRational::new(n.into(), d.into());
            let u = (BigInt::from(n) * BigInt::from(d).modpow(&(&m - 2u32), &m)).mod_floor(&m);
            // m is not prime, so invert via extended gcd instead.
            let dinv = {
                let e = BigInt::from(d).extended_gcd(&m);
                e.x.mod_floor(&m)
            };
            let u2 = (BigInt::from(n) * dinv).mod_floor(&m);
            let _ = u;
            assert_eq!(rational_reconstruct(&u2, &m, &bound), Some(x));
        }
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = primes()[0].p;
        let poly: UPoly = vec![5, 0, 7, 1];
        let xs: Vec<u64> = (1..=4).collect();
        let ys: Vec<u64> = xs.iter().map(|&x| up_eval(&poly, x, p)).collect();
        assert_eq!(interpolate(&xs, &ys, p), poly);
    }
}
