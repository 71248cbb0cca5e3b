//! Double-precision evaluators prepared once and reused across grids.

use num_complex::Complex64;

use super::gauged::{GaugedRat, Half};
use super::poly::BiPoly;
use super::rat::BiRat;
use super::{EvalError, POLE_THRESHOLD};

#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(usize, usize, Complex64)>,
    dz: usize,
    dw: usize,
}

impl CompiledPoly {
    pub fn new(p: &BiPoly) -> Self {
        let terms: Vec<_> = p
            .terms()
            .map(|(m, c)| (m.z as usize, m.w as usize, c.to_complex()))
            .collect();
        let dz = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let dw = terms.iter().map(|t| t.1).max().unwrap_or(0);
        CompiledPoly { terms, dz, dw }
    }

    /// Value and the sum of absolute term magnitudes.
    pub fn eval_with_scale(&self, z0: Complex64, w0: Complex64) -> (Complex64, f64) {
        let zp = powers(z0, self.dz);
        let wp = powers(w0, self.dw);
        let mut v = Complex64::new(0.0, 0.0);
        let mut s = 0.0;
        for &(i, j, c) in &self.terms {
            let t = c * zp[i] * wp[j];
            v += t;
            s += t.norm();
        }
        (v, s)
    }

    pub fn eval(&self, z0: Complex64, w0: Complex64) -> Complex64 {
        self.eval_with_scale(z0, w0).0
    }
}

fn powers(x: Complex64, d: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(d + 1);
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..=d {
        out.push(acc);
        acc *= x;
    }
    out
}

#[derive(Clone, Debug)]
pub struct CompiledRat {
    num: CompiledPoly,
    den: CompiledPoly,
    threshold: f64,
}

impl CompiledRat {
    pub fn new(r: &BiRat) -> Self {
        CompiledRat {
            num: CompiledPoly::new(r.num()),
            den: CompiledPoly::new(r.den()),
            threshold: POLE_THRESHOLD,
        }
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self
    }

    /// Evaluates at `z0` with `w := conj(z0)`.
    pub fn eval(&self, z0: Complex64) -> Result<Complex64, EvalError> {
        let w0 = z0.conj();
        let (d, scale) = self.den.eval_with_scale(z0, w0);
        if d.norm() <= self.threshold * scale {
            return Err(EvalError::PoleAtPoint(z0));
        }
        Ok(self.num.eval(z0, w0) / d)
    }
}

#[derive(Clone, Debug)]
pub struct CompiledGauged {
    core: CompiledRat,
    base: Option<CompiledRat>,
    p: Half,
    q: Half,
}

impl CompiledGauged {
    pub fn new(g: &GaugedRat) -> Self {
        let (p, q) = g.exponents();
        CompiledGauged {
            core: CompiledRat::new(g.core()),
            base: (!g.is_ungauged()).then(|| CompiledRat::new(g.base())),
            p,
            q,
        }
    }

    pub fn eval(&self, z0: Complex64) -> Result<Complex64, EvalError> {
        let c = self.core.eval(z0)?;
        let Some(base) = &self.base else {
            return Ok(c);
        };
        let s = base.eval(z0)?;
        let sum = (self.p + self.q).to_f64();
        if s.norm() == 0.0 {
            return if sum > 0.0 { Ok(Complex64::new(0.0, 0.0)) } else { Err(EvalError::PoleAtPoint(z0)) };
        }
        let phase = (self.p - self.q).to_f64() * s.arg();
        Ok(c * Complex64::from_polar(s.norm().powf(sum), phase))
    }
}

/// Complex roots of a nonzero polynomial in `z` alone, by simultaneous
/// Weierstrass iteration. Multiple roots are returned with multiplicity and
/// converge more slowly; they are still located to well within any masking
/// radius used for sampling.
pub fn roots_z(p: &BiPoly) -> Vec<Complex64> {
    assert!(p.is_holomorphic(), "roots_z needs a polynomial in z");
    let d = p.degree(super::Var::Z) as usize;
    if d == 0 {
        return Vec::new();
    }
    let mut c = vec![Complex64::new(0.0, 0.0); d + 1];
    for (m, v) in p.terms() {
        c[m.z as usize] = v.to_complex();
    }
    let lead = c[d];
    let c: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    let eval = |x: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &k| acc * x + k);
    let radius = 1.0 + c[..d].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let seed = Complex64::from_polar(1.0, 0.4);
    let mut z: Vec<Complex64> = (0..d).map(|k| seed.powu(k as u32) * radius * 0.5).collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..d {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                den = Complex64::new(1e-300, 0.0);
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 * radius {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipoly::GaussCoeff;

    #[test]
    fn roots_of_quadratic() {
        // (z − 1)(z + 2i)
        let p = BiPoly::from_z_coeffs(&[GaussCoeff::from_ints(0, -2), GaussCoeff::from_ints(-1, 2), GaussCoeff::from_int(1)]);
        let mut r = roots_z(&p);
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((r[0] - Complex64::new(0.0, -2.0)).norm() < 1e-10);
        assert!((r[1] - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn compiled_matches_direct() {
        let d = &BiRat::one() + &(&BiRat::z() * &BiRat::w());
        let r = &BiRat::z().scale(&GaussCoeff::from_ints(1, 2)) / &d.pow(2);
        let c = CompiledRat::new(&r);
        for z0 in [Complex64::new(0.3, -0.7), Complex64::new(-1.5, 0.25)] {
            assert!((c.eval(z0).unwrap() - r.eval(z0).unwrap()).norm() < 1e-14);
        }
        let pole = CompiledRat::new(&BiRat::z().inv().unwrap());
        assert!(pole.eval(Complex64::new(0.0, 0.0)).is_err());
    }
}
