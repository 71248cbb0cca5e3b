use super::modular::modular_gcd;
use super::poly::{BiPoly, Mono};
use super::{GaussCoeff, Var};

/// Monic gcd (graded-lex leading coefficient one). `gcd(0, 0) = 0`.
pub fn gcd(a: &BiPoly, b: &BiPoly) -> BiPoly {
    gcd_with_cofactors(a, b).0
}

/// Returns `(g, a/g, b/g)` with `g` the monic gcd of `a` and `b`.
pub fn gcd_with_cofactors(a: &BiPoly, b: &BiPoly) -> (BiPoly, BiPoly, BiPoly) {
    if a.is_zero() && b.is_zero() {
        return (BiPoly::zero(), BiPoly::zero(), BiPoly::zero());
    }
    if a.is_zero() {
        let lc = b.leading_coeff();
        return (b.monic(), BiPoly::zero(), BiPoly::constant(lc));
    }
    if b.is_zero() {
        let lc = a.leading_coeff();
        return (a.monic(), BiPoly::constant(lc), BiPoly::zero());
    }
    if a.is_constant() || b.is_constant() {
        return (BiPoly::one(), a.clone(), b.clone());
    }
    if a == b {
        let lc = a.leading_coeff();
        return (a.monic(), BiPoly::constant(lc.clone()), BiPoly::constant(lc));
    }

    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let m = Mono::new(ma.z.min(mb.z), ma.w.min(mb.w));
    let a1 = a.div_monomial(ma);
    let b1 = b.div_monomial(mb);
    let one = GaussCoeff::from_int(1);
    let lift = |core: BiPoly, own: Mono| core.mul_monomial(&one, Mono::new(own.z - m.z, own.w - m.w));

    let (g, ca, cb) = if a1.is_constant() || b1.is_constant() {
        (BiPoly::one(), a1, b1)
    } else if let Some(g) = structured_gcd(&a1, &b1) {
        if g.is_one() {
            (g, a1, b1)
        } else {
            let ca = a1.div_exact(&g).expect("gcd divides its arguments");
            let cb = b1.div_exact(&g).expect("gcd divides its arguments");
            (g, ca, cb)
        }
    } else {
        let r = modular_gcd(&a1, &b1);
        (r.gcd, r.cof_a, r.cof_b)
    };
    debug_assert!(!g.is_zero());
    let g = if m == Mono::ONE { g } else { g.mul_monomial(&one, m) };
    (g, lift(ca, ma), lift(cb, mb))
}

/// The single variable a nonconstant polynomial depends on, if any.
fn univariate_in(p: &BiPoly) -> Option<Var> {
    match (p.degree(Var::Z), p.degree(Var::Zbar)) {
        (_, 0) => Some(Var::Z),
        (0, _) => Some(Var::Zbar),
        _ => None,
    }
}

/// Monic gcd of `a` with `u`, a polynomial in `var` alone: the gcd of `u`
/// with every slice of `a` along `var`.
fn gcd_with_univariate(a: &BiPoly, u: &BiPoly, var: Var) -> BiPoly {
    let mut g = u.monic();
    for s in a.slices(var) {
        if g.is_constant() {
            break;
        }
        g = gcd(&g, &s);
    }
    g
}

/// Shortcuts for arguments with a univariate or separable `A(z)·B(w)`
/// factor structure, which covers every denominator built from liftings.
/// `None` means no structure applies.
fn structured_gcd(a: &BiPoly, b: &BiPoly) -> Option<BiPoly> {
    let (ua, ub) = (univariate_in(a), univariate_in(b));
    if let (Some(va), Some(vb)) = (ua, ub) {
        return if va == vb { None } else { Some(BiPoly::one()) };
    }
    if let Some(v) = ub {
        return Some(gcd_with_univariate(a, b, v));
    }
    if let Some(v) = ua {
        return Some(gcd_with_univariate(b, a, v));
    }
    let (other, (pz, pw)) = match (b.split_separable(), a.split_separable()) {
        (Some(s), _) => (a, s),
        (None, Some(s)) => (b, s),
        (None, None) => return None,
    };
    // A(z) and B(w) are coprime, so the gcd splits into the two pieces.
    let gz = gcd_with_univariate(other, &pz, Var::Z);
    let rest = if gz.is_one() { other.clone() } else { other.div_exact(&gz)? };
    let gw = gcd_with_univariate(&rest, &pw, Var::Zbar);
    Some((&gz * &gw).monic())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(u32, u32, i64)]) -> BiPoly {
        BiPoly::from_terms(terms.iter().map(|&(z, w, c)| (Mono::new(z, w), GaussCoeff::from_int(c))))
    }

    fn check(a: &BiPoly, b: &BiPoly, expect: &BiPoly) {
        let (g, ca, cb) = gcd_with_cofactors(a, b);
        assert_eq!(&g, expect);
        assert_eq!(&(&g * &ca), a);
        assert_eq!(&(&g * &cb), b);
    }

    #[test]
    fn difference_of_squares() {
        // z² − w² and z − w
        let a = p(&[(2, 0, 1), (0, 2, -1)]);
        let b = p(&[(1, 0, 1), (0, 1, -1)]);
        check(&a, &b, &b);
    }

    #[test]
    fn shared_factor_with_gaussian_coefficients() {
        let d = &p(&[(1, 1, 1), (0, 0, 1)]) + &BiPoly::monomial(GaussCoeff::i(), Mono::new(1, 0));
        let x = p(&[(2, 0, 3), (0, 1, 1), (0, 0, -2)]);
        let y = &p(&[(0, 3, 1), (1, 0, 5)]) + &BiPoly::constant(GaussCoeff::ratio(1, 7));
        let a = &(&d * &d) * &x;
        let b = &d * &y;
        check(&a, &b, &d.monic());
    }

    #[test]
    fn coprime_inputs() {
        let a = p(&[(1, 1, 1), (0, 0, 1)]);
        let b = p(&[(1, 0, 1), (0, 0, 2)]);
        check(&a, &b, &BiPoly::one());
    }

    #[test]
    fn monomial_content_is_kept() {
        let a = p(&[(3, 1, 2), (2, 2, 4)]);
        let b = p(&[(2, 0, 1), (1, 0, 1)]);
        check(&a, &b, &p(&[(1, 0, 1)]));
    }

    #[test]
    fn zero_arguments() {
        let b = p(&[(1, 0, 2), (0, 0, 4)]);
        check(&BiPoly::zero(), &b, &b.monic());
        assert!(gcd(&BiPoly::zero(), &BiPoly::zero()).is_zero());
    }
}
