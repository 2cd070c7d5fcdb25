//! Exact arithmetic in `Q(beta)`.
//!
//! Elements are rational coefficient vectors reduced modulo the defining
//! polynomial of `beta`. Signs and floors are decided by interval enclosures
//! at increasing precision, backed by an exact zero test, so every answer is
//! certified. The defining polynomial need not be irreducible: a zero test that
//! discovers a proper factor vanishing at `beta` records it, and callers can
//! rebuild the field over that factor.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::interval::{floor_div, pow2, rational_to_f64, FixedInterval};
use super::poly::{IntPoly, RatPoly};
use super::real::{isolate_real_roots, AlgebraicReal};

/// An element of `Q(beta)`: `sum c[k] beta^k`, `k < degree`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BetaElement {
    c: Vec<BigRational>,
}

impl BetaElement {
    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// `Some(q)` when only the constant coefficient is nonzero.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.c[1..].iter().all(Zero::is_zero) {
            Some(&self.c[0])
        } else {
            None
        }
    }

    pub fn as_rat_poly(&self) -> RatPoly {
        RatPoly::new(self.c.clone())
    }
}

impl fmt::Display for BetaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})b")?,
                _ => write!(f, "({c})b^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

struct Approx {
    prec: u64,
    powers: Vec<FixedInterval>,
}

pub struct BetaField {
    beta: AlgebraicReal,
    /// Monic defining polynomial over Q.
    monic: Vec<BigRational>,
    deg: usize,
    approx: Mutex<Approx>,
    factor: Mutex<Option<IntPoly>>,
}

impl fmt::Debug for BetaField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BetaField").field("beta", &self.beta).finish()
    }
}

const START_PREC: u64 = 64;

impl BetaField {
    pub fn new(beta: AlgebraicReal) -> Self {
        let p = beta.poly();
        let deg = p.degree();
        let lead = BigRational::from_integer(p.leading().expect("nonzero").clone());
        let monic = p
            .coeffs()
            .iter()
            .map(|c| BigRational::from_integer(c.clone()) / &lead)
            .collect();
        Self {
            beta,
            monic,
            deg,
            approx: Mutex::new(Approx { prec: 0, powers: Vec::new() }),
            factor: Mutex::new(None),
        }
    }

    pub fn beta(&self) -> &AlgebraicReal {
        &self.beta
    }

    pub fn degree(&self) -> usize {
        self.deg
    }

    /// A proper factor of the defining polynomial vanishing at `beta`, if one was found.
    pub fn discovered_factor(&self) -> Option<IntPoly> {
        self.factor.lock().unwrap().clone()
    }

    pub fn zero(&self) -> BetaElement {
        BetaElement { c: vec![BigRational::zero(); self.deg] }
    }

    pub fn from_rational(&self, q: BigRational) -> BetaElement {
        let mut e = self.zero();
        e.c[0] = q;
        e
    }

    pub fn from_int(&self, n: impl Into<BigInt>) -> BetaElement {
        self.from_rational(BigRational::from_integer(n.into()))
    }

    pub fn one(&self) -> BetaElement {
        self.from_int(1)
    }

    /// The generator `beta` itself.
    pub fn gen(&self) -> BetaElement {
        self.reduce(vec![BigRational::zero(), BigRational::one()])
    }

    /// Reduces an arbitrary coefficient vector modulo the defining polynomial.
    pub fn reduce(&self, mut v: Vec<BigRational>) -> BetaElement {
        let d = self.deg;
        while v.len() > d {
            let top = v.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let base = v.len() - d;
            for (k, m) in self.monic[..d].iter().enumerate() {
                v[base + k] -= &top * m;
            }
        }
        v.resize(d, BigRational::zero());
        BetaElement { c: v }
    }

    pub fn add(&self, a: &BetaElement, b: &BetaElement) -> BetaElement {
        BetaElement { c: a.c.iter().zip(&b.c).map(|(x, y)| x + y).collect() }
    }

    pub fn sub(&self, a: &BetaElement, b: &BetaElement) -> BetaElement {
        BetaElement { c: a.c.iter().zip(&b.c).map(|(x, y)| x - y).collect() }
    }

    pub fn neg(&self, a: &BetaElement) -> BetaElement {
        BetaElement { c: a.c.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, a: &BetaElement, q: &BigRational) -> BetaElement {
        BetaElement { c: a.c.iter().map(|x| x * q).collect() }
    }

    pub fn add_int(&self, a: &BetaElement, n: &BigInt) -> BetaElement {
        let mut r = a.clone();
        r.c[0] += BigRational::from_integer(n.clone());
        r
    }

    pub fn mul(&self, a: &BetaElement, b: &BetaElement) -> BetaElement {
        let mut v = vec![BigRational::zero(); 2 * self.deg - 1];
        for (i, x) in a.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.c.iter().enumerate() {
                if !y.is_zero() {
                    v[i + j] += x * y;
                }
            }
        }
        self.reduce(v)
    }

    /// `beta * a`.
    pub fn mul_beta(&self, a: &BetaElement) -> BetaElement {
        let mut v = Vec::with_capacity(self.deg + 1);
        v.push(BigRational::zero());
        v.extend(a.c.iter().cloned());
        self.reduce(v)
    }

    pub fn pow_beta(&self, n: usize) -> BetaElement {
        let mut r = self.one();
        for _ in 0..n {
            r = self.mul_beta(&r);
        }
        r
    }

    /// Enclosure of `beta^k` for `k < degree` at `prec` fractional bits.
    fn powers(&self, prec: u64) -> Vec<FixedInterval> {
        let mut ap = self.approx.lock().unwrap();
        if ap.prec >= prec && !ap.powers.is_empty() {
            if ap.prec == prec {
                return ap.powers.clone();
            }
            let shift = ap.prec - prec;
            let p = pow2(shift);
            return ap
                .powers
                .iter()
                .map(|iv| FixedInterval {
                    lo: floor_div(&iv.lo, &p),
                    hi: super::interval::ceil_div(&iv.hi, &p),
                })
                .collect();
        }
        // Extra bits absorb the growth of errors through the powers.
        let guard = 16 + 4 * self.deg as u64 + self.beta.hi().abs().ceil().to_integer().bits() * self.deg as u64;
        let wp = prec + guard;
        let (_, l, h) = self.beta.dyadic_bounds(wp);
        let b = FixedInterval { lo: l, hi: h };
        let mut pw = Vec::with_capacity(self.deg);
        pw.push(FixedInterval::point(pow2(wp)));
        for k in 1..self.deg {
            let next = pw[k - 1].mul(&b, wp);
            pw.push(next);
        }
        let p = pow2(guard);
        let out: Vec<FixedInterval> = pw
            .iter()
            .map(|iv| FixedInterval {
                lo: floor_div(&iv.lo, &p),
                hi: super::interval::ceil_div(&iv.hi, &p),
            })
            .collect();
        ap.prec = prec;
        ap.powers = out.clone();
        out
    }

    /// Interval enclosure of `a` at `prec` fractional bits.
    pub fn enclose(&self, a: &BetaElement, prec: u64) -> FixedInterval {
        let pw = self.powers(prec);
        let mut acc = FixedInterval::zero();
        for (c, b) in a.c.iter().zip(&pw) {
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&FixedInterval::from_rational(c, prec).mul(b, prec));
        }
        acc
    }

    /// Exact test of `a == 0` as a real number. Records a proper factor of the
    /// defining polynomial when `a` is a nonzero vector vanishing at `beta`.
    pub fn is_zero_value(&self, a: &BetaElement) -> bool {
        if a.is_zero() {
            return true;
        }
        if let Some(q) = a.as_rational() {
            return q.is_zero();
        }
        let q = IntPoly::from_rat(&a.as_rat_poly());
        let p = self.beta.poly();
        let g = p.gcd(&q);
        if g.degree() == 0 {
            return false;
        }
        if isolate_real_roots(&g, self.beta.lo(), self.beta.hi()).is_empty() {
            return false;
        }
        let mut f = self.factor.lock().unwrap();
        let better = f.as_ref().is_none_or(|old| g.degree() < old.degree());
        if better {
            *f = Some(g);
        }
        true
    }

    /// Sign of `a` as a real number.
    pub fn sign(&self, a: &BetaElement) -> Ordering {
        if let Some(q) = a.as_rational() {
            return q.cmp(&BigRational::zero());
        }
        let mut prec = START_PREC;
        let mut checked = false;
        loop {
            let iv = self.enclose(a, prec);
            if iv.lo.is_positive() {
                return Ordering::Greater;
            }
            if iv.hi.is_negative() {
                return Ordering::Less;
            }
            if !checked {
                checked = true;
                if self.is_zero_value(a) {
                    return Ordering::Equal;
                }
            }
            prec *= 2;
        }
    }

    pub fn cmp(&self, a: &BetaElement, b: &BetaElement) -> Ordering {
        self.sign(&self.sub(a, b))
    }

    pub fn cmp_int(&self, a: &BetaElement, n: &BigInt) -> Ordering {
        self.sign(&self.add_int(a, &-n))
    }

    /// Exact `floor(a)`.
    pub fn floor(&self, a: &BetaElement) -> BigInt {
        if let Some(q) = a.as_rational() {
            return q.floor().to_integer();
        }
        let mut prec = START_PREC;
        loop {
            let iv = self.enclose(a, prec);
            let p = pow2(prec);
            let fl = floor_div(&iv.lo, &p);
            let fh = floor_div(&iv.hi, &p);
            if fl == fh {
                return fl;
            }
            if &fh - &fl == BigInt::one() {
                // A single integer fh lies in (lo, hi]: decide exactly.
                return match self.cmp_int(a, &fh) {
                    Ordering::Less => fl,
                    _ => fh,
                };
            }
            prec *= 2;
        }
    }

    pub fn to_f64(&self, a: &BetaElement) -> f64 {
        if let Some(q) = a.as_rational() {
            return rational_to_f64(q);
        }
        let mut prec = 80;
        loop {
            let iv = self.enclose(a, prec);
            if iv.width().bits() + 56 <= prec || prec > 4096 {
                return iv.mid_f64(prec);
            }
            prec *= 2;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::real::parse_rational;

    fn int(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn golden_identities() {
        let f = BetaField::new(AlgebraicReal::golden());
        let b = f.gen();
        let b2 = f.mul(&b, &b);
        assert_eq!(b2, f.add(&b, &f.one()));
        assert_eq!(f.floor(&b), int(1));
        assert_eq!(f.floor(&f.mul_beta(&b2)), int(4));
        assert_eq!(f.sign(&f.sub(&b, &f.from_rational(parse_rational("1.618").unwrap()))), Ordering::Greater);
        assert!((f.to_f64(&b) - 1.618_033_988_749_895).abs() < 1e-15);
    }

    #[test]
    fn floor_at_exact_integers() {
        let f = BetaField::new(AlgebraicReal::sqrt2_plus_2());
        let b = f.gen();
        // (b - 2)^2 = 2 exactly, represented non-trivially before reduction.
        let t = f.add_int(&b, &int(-2));
        let sq = f.mul(&t, &t);
        assert_eq!(f.floor(&sq), int(2));
        assert_eq!(f.sign(&f.add_int(&sq, &int(-2))), Ordering::Equal);
        // b * (4 - b) = 2
        let u = f.mul(&b, &f.add_int(&f.neg(&b), &int(4)));
        assert_eq!(f.floor(&u), int(2));
    }

    #[test]
    fn reducible_defining_polynomial_is_detected() {
        // (x^2 - x - 1)(x^2 + 1): golden ratio is the only root in [1, 2].
        let p = &IntPoly::from_i64s(&[-1, -1, 1]) * &IntPoly::from_i64s(&[1, 0, 1]);
        let beta = AlgebraicReal::new(p, BigRational::from_integer(int(1)), BigRational::from_integer(int(2))).unwrap();
        let f = BetaField::new(beta);
        let b = f.gen();
        let v = f.sub(&f.mul(&b, &b), &f.add_int(&b, &int(1)));
        assert!(!v.is_zero());
        assert_eq!(f.sign(&v), Ordering::Equal);
        assert_eq!(f.discovered_factor(), Some(IntPoly::from_i64s(&[-1, -1, 1])));
        assert_eq!(f.floor(&f.mul(&b, &b)), int(2));
    }

    #[test]
    fn rational_beta() {
        let f = BetaField::new(AlgebraicReal::from_rational(parse_rational("5/2").unwrap()));
        let b = f.gen();
        assert_eq!(b.as_rational(), Some(&parse_rational("5/2").unwrap()));
        assert_eq!(f.floor(&f.mul_beta(&b)), int(6));
    }
}
