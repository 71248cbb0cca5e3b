//! Unexpanded rational expressions for identity checking.
//!
//! A [`LazyRat`] is `Σ c_t Π P_{t,f} / Π Q_g^{m_g}`. Sums, products and the
//! bilinear operator `B(r) = r·∂∂̄r − ∂r·∂̄r` are formed symbolically and only
//! the final numerator is tested, by [`vanishes`], without ever reducing to
//! canonical form.

use std::sync::Arc;

use num_complex::Complex64;

use super::coeff::GaussCoeff;
use super::identity::{vanishes, Product};
use super::numeric::CompiledPoly;
use super::poly::BiPoly;
use super::rat::BiRat;
use super::Var;

#[derive(Clone, Debug)]
pub struct LazyRat {
    num: Vec<Product>,
    den: Vec<(Arc<BiPoly>, u32)>,
}

fn arc(p: BiPoly) -> Arc<BiPoly> {
    Arc::new(p)
}

/// `B(P) = P·P_zw − P_z·P_w` as two products.
fn bilinear_terms(p: &Arc<BiPoly>) -> Vec<Product> {
    let pz = p.derive(Var::Z);
    let pw = arc(p.derive(Var::Zbar));
    let pzw = arc(pz.derive(Var::Zbar));
    vec![
        Product::new(GaussCoeff::from_int(1), vec![p.clone(), pzw]),
        Product::new(GaussCoeff::from_int(-1), vec![arc(pz), pw]),
    ]
}

impl LazyRat {
    pub fn zero() -> Self {
        LazyRat { num: Vec::new(), den: Vec::new() }
    }

    pub fn constant(c: GaussCoeff) -> Self {
        LazyRat { num: vec![Product::new(c, Vec::new())], den: Vec::new() }
    }

    /// `num / den`, sharing the given polynomials.
    pub fn fraction(num: &Arc<BiPoly>, den: &Arc<BiPoly>) -> Self {
        let mut out = LazyRat { num: vec![Product::new(GaussCoeff::from_int(1), vec![num.clone()])], den: Vec::new() };
        out.push_den(den.clone(), 1);
        out
    }

    pub fn from_rat(r: &BiRat) -> Self {
        Self::fraction(&arc(r.num().clone()), &arc(r.den().clone()))
    }

    pub fn from_poly(p: &Arc<BiPoly>) -> Self {
        LazyRat { num: vec![Product::new(GaussCoeff::from_int(1), vec![p.clone()])], den: Vec::new() }
    }

    fn push_den(&mut self, q: Arc<BiPoly>, m: u32) {
        if m == 0 || q.is_one() {
            return;
        }
        match self.den.iter_mut().find(|(d, _)| Arc::ptr_eq(d, &q) || **d == *q) {
            Some(entry) => entry.1 += m,
            None => self.den.push((q, m)),
        }
    }

    fn mul_num(num: &[Product], extra: &[Arc<BiPoly>]) -> Vec<Product> {
        num.iter()
            .map(|t| {
                let mut f = t.factors.clone();
                f.extend(extra.iter().cloned());
                Product::new(t.coeff.clone(), f)
            })
            .collect()
    }

    pub fn scale(&self, c: &GaussCoeff) -> Self {
        LazyRat {
            num: self.num.iter().map(|t| Product::new(&t.coeff * c, t.factors.clone())).collect(),
            den: self.den.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&GaussCoeff::from_int(-1))
    }

    pub fn mul(&self, o: &LazyRat) -> Self {
        let mut num = Vec::with_capacity(self.num.len() * o.num.len());
        for a in &self.num {
            for b in &o.num {
                let mut f = a.factors.clone();
                f.extend(b.factors.iter().cloned());
                num.push(Product::new(&a.coeff * &b.coeff, f));
            }
        }
        let mut out = LazyRat { num, den: self.den.clone() };
        for (q, m) in &o.den {
            out.push_den(q.clone(), *m);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(GaussCoeff::from_int(1)), |acc, _| acc.mul(self))
    }

    /// Sum over the least common multiple of the two denominator multisets.
    pub fn add(&self, o: &LazyRat) -> Self {
        let mut den: Vec<(Arc<BiPoly>, u32)> = self.den.clone();
        for (q, m) in &o.den {
            match den.iter_mut().find(|(d, _)| Arc::ptr_eq(d, q) || **d == **q) {
                Some(entry) => entry.1 = entry.1.max(*m),
                None => den.push((q.clone(), *m)),
            }
        }
        let missing = |own: &[(Arc<BiPoly>, u32)]| -> Vec<Arc<BiPoly>> {
            let mut out = Vec::new();
            for (q, m) in &den {
                let have = own
                    .iter()
                    .find(|(d, _)| Arc::ptr_eq(d, q) || **d == **q)
                    .map_or(0, |e| e.1);
                for _ in have..*m {
                    out.push(q.clone());
                }
            }
            out
        };
        let mut num = Self::mul_num(&self.num, &missing(&self.den));
        num.extend(Self::mul_num(&o.num, &missing(&o.den)));
        LazyRat { num, den }
    }

    pub fn sub(&self, o: &LazyRat) -> Self {
        self.add(&o.neg())
    }

    /// `B(N/Q)`; when `Q` is separable `B(Q) = 0` and this is `B(N)/Q²`,
    /// otherwise `(Q²B(N) − N²B(Q))/Q⁴`.
    pub fn bilinear(num: &Arc<BiPoly>, den: &Arc<BiPoly>) -> Self {
        let bn = bilinear_terms(num);
        if den.is_constant() || den.split_separable().is_some() {
            let mut out = LazyRat { num: bn, den: Vec::new() };
            out.push_den(den.clone(), 2);
            return out;
        }
        let bq = bilinear_terms(den);
        let mut terms = Self::mul_num(&bn, &[den.clone(), den.clone()]);
        terms.extend(
            Self::mul_num(&bq, &[num.clone(), num.clone()])
                .into_iter()
                .map(|t| Product::new(-t.coeff, t.factors)),
        );
        let mut out = LazyRat { num: terms, den: Vec::new() };
        out.push_den(den.clone(), 4);
        out
    }

    /// `∂∂̄ log(N/Q) = B(N)/N² − B(Q)/Q²`.
    pub fn log_laplacian(num: &Arc<BiPoly>, den: &Arc<BiPoly>) -> Self {
        let mut a = LazyRat { num: bilinear_terms(num), den: Vec::new() };
        a.push_den(num.clone(), 2);
        if den.is_constant() || den.split_separable().is_some() {
            return a;
        }
        let mut b = LazyRat { num: bilinear_terms(den), den: Vec::new() };
        b.push_den(den.clone(), 2);
        a.sub(&b)
    }

    /// Exact: the represented function is identically zero.
    pub fn is_zero(&self) -> bool {
        vanishes(&self.num)
    }

    /// Double-precision value at `z0` with `w = conj(z0)`; `None` at a pole.
    pub fn eval(&self, z0: Complex64) -> Option<Complex64> {
        let w0 = z0.conj();
        let mut cache: Vec<(*const BiPoly, Complex64)> = Vec::new();
        let mut value_of = |p: &Arc<BiPoly>| -> Complex64 {
            let key = Arc::as_ptr(p);
            if let Some((_, v)) = cache.iter().find(|(k, _)| *k == key) {
                return *v;
            }
            let v = CompiledPoly::new(p).eval(z0, w0);
            cache.push((key, v));
            v
        };
        let mut num = Complex64::new(0.0, 0.0);
        for t in &self.num {
            let mut v = t.coeff.to_complex();
            for f in &t.factors {
                v *= value_of(f);
            }
            num += v;
        }
        let mut den = Complex64::new(1.0, 0.0);
        for (q, m) in &self.den {
            den *= value_of(q).powu(*m);
        }
        (den.norm() > 0.0 && den.is_finite()).then(|| num / den)
    }
}
