//! All complex roots of an integer polynomial, in double-double precision with
//! rigorous residual bounds.
//!
//! Real roots come from exact isolation. Non-real roots are located by Aberth
//! iteration in `f64`, polished by double-double Newton steps, and emitted in
//! conjugate pairs. Each residual `|p(z)|` is evaluated exactly at the stored
//! dyadic root and rounded up.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use twofloat::TwoFloat;

use crate::algebraic::interval::{next_up, pow2, rational_to_f64, rational_to_f64_up};
use crate::algebraic::{isolate_real_roots, AlgebraicReal, IntPoly};
use crate::error::{Error, Result};

use super::phi::{ser_poly, Minimality};

/// Complex double-double.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cdd {
    pub re: TwoFloat,
    pub im: TwoFloat,
}

impl Cdd {
    pub fn new(re: TwoFloat, im: TwoFloat) -> Self {
        Self { re, im }
    }

    fn from_c64(z: Complex64) -> Self {
        Self::new(TwoFloat::from(z.re), TwoFloat::from(z.im))
    }

    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }

    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }

    fn mul(self, o: Self) -> Self {
        Self::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }

    fn div(self, o: Self) -> Self {
        let den = o.re * o.re + o.im * o.im;
        Self::new(
            (self.re * o.re + self.im * o.im) / den,
            (self.im * o.re - self.re * o.im) / den,
        )
    }

    fn norm_hi(self) -> f64 {
        self.re.hi().hypot(self.im.hi())
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.hi() + self.re.lo(), self.im.hi() + self.im.lo())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub z: Cdd,
    /// Rigorous upper bound of `|p(z)|` at the stored value of `z`.
    pub residual: f64,
}

impl Root {
    pub fn re(&self) -> f64 {
        self.z.re.hi()
    }

    pub fn im(&self) -> f64 {
        self.z.im.hi()
    }

    pub fn modulus(&self) -> f64 {
        self.z.to_c64().norm()
    }

    pub fn is_real(&self) -> bool {
        self.z.im == 0.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConjugateSet {
    pub poly: IntPoly,
    pub roots: Vec<Root>,
    pub beta_root_index: Option<usize>,
    pub minimality: Minimality,
    pub converged: bool,
}

impl ConjugateSet {
    pub fn max_residual(&self) -> f64 {
        self.roots.iter().map(|r| r.residual).fold(0.0, f64::max)
    }

    /// Roots other than the flagged `beta`.
    pub fn conjugates(&self) -> impl Iterator<Item = &Root> {
        self.roots
            .iter()
            .enumerate()
            .filter(move |(i, _)| Some(*i) != self.beta_root_index)
            .map(|(_, r)| r)
    }

    /// Flags the real root nearest to `beta`.
    pub fn flag_beta(&mut self, beta: &AlgebraicReal) {
        let b = beta.to_f64();
        self.beta_root_index = self
            .roots
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_real())
            .min_by(|(_, x), (_, y)| (x.re() - b).abs().total_cmp(&(y.re() - b).abs()))
            .map(|(i, _)| i);
    }

    /// CSV with header `re,im,residual,is_beta`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,residual,is_beta\n");
        for (i, r) in self.roots.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{:e},{}\n",
                r.re(),
                r.im(),
                r.residual,
                Some(i) == self.beta_root_index
            ));
        }
        out
    }
}

#[derive(Serialize)]
struct RootJson {
    re: f64,
    im: f64,
    re_lo: f64,
    im_lo: f64,
    modulus: f64,
    residual: f64,
}

#[derive(Serialize)]
struct ConjugateSetJson<'a> {
    #[serde(serialize_with = "ser_poly")]
    poly: &'a IntPoly,
    roots: Vec<RootJson>,
    beta_root_index: Option<usize>,
    minimality: Minimality,
    converged: bool,
}

impl Serialize for ConjugateSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ConjugateSetJson {
            poly: &self.poly,
            roots: self
                .roots
                .iter()
                .map(|r| RootJson {
                    re: r.z.re.hi(),
                    im: r.z.im.hi(),
                    re_lo: r.z.re.lo(),
                    im_lo: r.z.im.lo(),
                    modulus: r.modulus(),
                    residual: r.residual,
                })
                .collect(),
            beta_root_index: self.beta_root_index,
            minimality: self.minimality,
            converged: self.converged,
        }
        .serialize(s)
    }
}

fn dd_from_rational(q: &BigRational) -> TwoFloat {
    let hi = rational_to_f64(q);
    let rest = q - BigRational::from_float(hi).unwrap_or_else(BigRational::zero);
    TwoFloat::new_add(hi, rational_to_f64(&rest))
}

fn dd_from_int(c: &BigInt) -> TwoFloat {
    dd_from_rational(&BigRational::from_integer(c.clone()))
}

fn dd_to_rational(x: TwoFloat) -> BigRational {
    BigRational::from_float(x.hi()).unwrap() + BigRational::from_float(x.lo()).unwrap()
}

/// Exact `|p(z)|` at the dyadic point `z`, rounded up.
pub fn residual_bound(p: &IntPoly, z: Cdd) -> f64 {
    let re = dd_to_rational(z.re);
    let im = dd_to_rational(z.im);
    let mut ar = BigRational::zero();
    let mut ai = BigRational::zero();
    for c in p.coeffs().iter().rev() {
        let nr = &ar * &re - &ai * &im + BigRational::from_integer(c.clone());
        let ni = &ar * &im + &ai * &re;
        ar = nr;
        ai = ni;
    }
    let sq = &ar * &ar + &ai * &ai;
    if sq.is_zero() {
        return 0.0;
    }
    next_up(rational_to_f64_up(&sq).sqrt())
}

fn eval_c64(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Aberth-Ehrlich simultaneous iteration in `f64`.
fn aberth(c: &[f64], max_iter: usize) -> Vec<Complex64> {
    let n = c.len() - 1;
    let lead = c[n].abs();
    // Fujiwara bound on root moduli.
    let bound = (0..n)
        .map(|i| {
            let r = (c[i].abs() / lead).powf(1.0 / (n - i) as f64);
            if i == 0 {
                r * 0.5f64.powf(1.0 / n as f64)
            } else {
                r
            }
        })
        .fold(0.0, f64::max)
        * 2.0;
    let radius = bound.max(1e-3) * 0.5;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..max_iter {
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let (p, dp) = eval_c64(c, z[k]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| Complex64::new(1.0, 0.0) / (z[k] - z[j]))
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[k] -= w;
                worst = worst.max(w.norm() / z[k].norm().max(1e-300));
            }
        }
        if worst < 1e-15 {
            break;
        }
    }
    z
}

fn eval_dd(c: &[TwoFloat], z: Cdd) -> (Cdd, Cdd) {
    let zero = Cdd::new(TwoFloat::from(0.0), TwoFloat::from(0.0));
    let mut p = zero;
    let mut dp = zero;
    for &a in c.iter().rev() {
        dp = dp.mul(z).add(p);
        p = p.mul(z).add(Cdd::new(a, TwoFloat::from(0.0)));
    }
    (p, dp)
}

fn polish(c: &[TwoFloat], mut z: Cdd) -> Cdd {
    for _ in 0..64 {
        let (p, dp) = eval_dd(c, z);
        if p.norm_hi() == 0.0 || dp.norm_hi() == 0.0 {
            break;
        }
        let step = p.div(dp);
        if !step.re.hi().is_finite() || !step.im.hi().is_finite() {
            break;
        }
        z = z.sub(step);
        if step.norm_hi() <= 1e-33 * z.norm_hi().max(1e-300) {
            break;
        }
    }
    z
}

/// Roots of a square-free polynomial, real ones exact to double-double.
fn roots_square_free(f: &IntPoly) -> Vec<Cdd> {
    let d = f.degree();
    let bound = BigRational::from_integer(f.cauchy_bound());
    let reals = isolate_real_roots(f, &-bound.clone(), &bound);
    let mut out: Vec<Cdd> = reals
        .iter()
        .map(|r| {
            let mag = r.hi().abs().max(r.lo().abs()).ceil().to_integer().max(BigInt::one());
            let w = BigRational::new(BigInt::one(), pow2(112)) * BigRational::from_integer(mag);
            let r = r.refine(&w);
            let mid = (r.lo() + r.hi()) / BigRational::from_integer(BigInt::from(2));
            Cdd::new(dd_from_rational(&mid), TwoFloat::from(0.0))
        })
        .collect();
    let pairs = (d - reals.len()) / 2;
    if pairs > 0 {
        let cf = f.to_f64_coeffs();
        let cdd: Vec<TwoFloat> = f.coeffs().iter().map(dd_from_int).collect();
        let mut approx = aberth(&cf, 2000);
        approx.sort_by(|a, b| b.im.total_cmp(&a.im));
        for z in approx.into_iter().take(pairs) {
            let z = polish(&cdd, Cdd::from_c64(Complex64::new(z.re, z.im.abs())));
            out.push(z);
            out.push(z.conj());
        }
    }
    out
}

fn cmp_dd(a: TwoFloat, b: TwoFloat) -> Ordering {
    a.hi().total_cmp(&b.hi()).then(a.lo().total_cmp(&b.lo()))
}

/// All roots with multiplicity, sorted by `(re, im)`, without failing on slow convergence.
pub fn all_roots_partial(p: &IntPoly, tol: f64) -> Result<ConjugateSet> {
    if p.degree() == 0 {
        return Err(Error::Domain("polynomial must have degree >= 1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive (got {tol})")));
    }
    let mut zs = Vec::with_capacity(p.degree());
    for (f, m) in p.square_free_decomposition() {
        if f.degree() == 0 {
            continue;
        }
        for z in roots_square_free(&f) {
            zs.extend(std::iter::repeat_n(z, m));
        }
    }
    zs.sort_by(|a, b| cmp_dd(a.re, b.re).then(cmp_dd(a.im, b.im)));
    let roots: Vec<Root> = zs.into_iter().map(|z| Root { z, residual: residual_bound(p, z) }).collect();
    let converged = roots.len() == p.degree() && roots.iter().all(|r| r.residual <= tol);
    Ok(ConjugateSet {
        poly: p.clone(),
        roots,
        beta_root_index: None,
        minimality: Minimality::Unknown,
        converged,
    })
}

/// All roots with residual bounds `<= tol`, or `NonConvergence` listing the partial result.
pub fn all_roots(p: &IntPoly, tol: f64) -> Result<ConjugateSet> {
    let set = all_roots_partial(p, tol)?;
    if set.converged {
        return Ok(set);
    }
    let detail: Vec<String> = set
        .roots
        .iter()
        .map(|r| format!("{}{:+}i (residual {:e})", r.re(), r.im(), r.residual))
        .collect();
    Err(Error::NonConvergence(format!(
        "{} of degree {}: {} roots found, worst residual {:e} > {tol:e}: [{}]",
        p,
        p.degree(),
        set.roots.len(),
        set.max_residual(),
        detail.join(", ")
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn quadratics() {
        let s = all_roots(&p(&[-1, -1, 1]), 1e-12).unwrap();
        assert_eq!(s.roots.len(), 2);
        assert!((s.roots[0].re() + 0.618_033_988_749_895).abs() < 1e-15);
        assert!((s.roots[1].re() - 1.618_033_988_749_895).abs() < 1e-15);
        let s = all_roots(&p(&[2, -4, 1]), 1e-12).unwrap();
        assert!((s.roots[0].re() - (2.0 - 2f64.sqrt())).abs() < 1e-15);
        assert!((s.roots[1].re() - (2.0 + 2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn plastic_cubic() {
        let s = all_roots(&p(&[-1, -1, 0, 1]), 1e-12).unwrap();
        assert_eq!(s.roots.len(), 3);
        let real: Vec<_> = s.roots.iter().filter(|r| r.is_real()).collect();
        assert_eq!(real.len(), 1);
        let b = real[0].re();
        assert!((b - 1.324_717_957_244_746).abs() < 1e-14);
        for r in s.roots.iter().filter(|r| !r.is_real()) {
            assert!((r.modulus() - (1.0 / b).sqrt()).abs() < 1e-14);
        }
        // Conjugate pair adjacent after sorting by (re, im).
        assert_eq!(s.roots[0].z, s.roots[1].z.conj());
    }

    #[test]
    fn repeated_and_rational_roots() {
        // (x - 1)^2 (x^2 + 1) (2x + 3)
        let f = &(&(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[1, 0, 1])) * &p(&[3, 2]);
        let s = all_roots(&f, 1e-20).unwrap();
        assert_eq!(s.roots.len(), 5);
        assert_eq!(s.roots[0].re(), -1.5);
        assert_eq!(s.roots[0].residual, 0.0);
        assert_eq!(s.roots.iter().filter(|r| r.re() == 1.0).count(), 2);
    }

    #[test]
    fn vieta_sums() {
        let f = p(&[7, -3, 0, 5, -2, 1, 1]);
        let s = all_roots(&f, 1e-12).unwrap();
        let sum: Complex64 = s.roots.iter().map(|r| r.z.to_c64()).sum();
        assert!((sum.re + 1.0).abs() < 1e-11 && sum.im.abs() < 1e-11);
        let prod: Complex64 = s.roots.iter().map(|r| r.z.to_c64()).product();
        assert!((prod.re - 7.0).abs() < 1e-10 && prod.im.abs() < 1e-10);
    }

    #[test]
    fn csv_shape() {
        let mut s = all_roots(&p(&[-1, -1, 1]), 1e-12).unwrap();
        s.flag_beta(&AlgebraicReal::golden());
        let csv = s.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "re,im,residual,is_beta");
        assert!(lines[2].ends_with(",true"));
        assert!(lines[1].ends_with(",false"));
    }

    #[test]
    fn bad_input() {
        assert!(all_roots(&p(&[3]), 1e-9).is_err());
        assert!(all_roots(&p(&[1, 1]), 0.0).is_err());
    }
}
