//! Real algebraic numbers by isolating interval, and real-root isolation.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::interval::{pow2, rational_to_f64};
use super::poly::IntPoly;
use crate::error::{Error, Result};

/// A real root of a square-free integer polynomial, pinned by a rational interval
/// `[lo, hi]` that contains no other root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicReal {
    poly: IntPoly,
    lo: BigRational,
    hi: BigRational,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn half(a: &BigRational, b: &BigRational) -> BigRational {
    (a + b) / rat(2)
}

impl AlgebraicReal {
    /// Validates that `poly` is square-free of degree >= 1 and has exactly one root in `[lo, hi]`.
    pub fn new(poly: IntPoly, lo: BigRational, hi: BigRational) -> Result<Self> {
        if poly.degree() == 0 {
            return Err(Error::Domain("defining polynomial must have degree >= 1".into()));
        }
        if lo >= hi {
            return Err(Error::Domain(format!("empty interval [{lo}, {hi}]")));
        }
        let poly = poly.primitive_part();
        if !poly.is_square_free() {
            return Err(Error::Domain(format!("{poly} is not square-free")));
        }
        let roots = count_roots_closed(&poly, &lo, &hi);
        if roots != 1 {
            return Err(Error::Domain(format!(
                "{poly} has {roots} roots in [{lo}, {hi}], expected exactly one"
            )));
        }
        Ok(Self { poly, lo, hi })
    }

    /// Trusted constructor for intervals produced by isolation.
    pub(crate) fn from_parts(poly: IntPoly, lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo < hi);
        Self { poly, lo, hi }
    }

    pub fn from_rational(q: BigRational) -> Self {
        let poly = IntPoly::new(vec![-q.numer().clone(), q.denom().clone()]).primitive_part();
        Self {
            poly,
            lo: &q - rat(1),
            hi: q + rat(1),
        }
    }

    /// The largest real root of `p`, if any lies above `above`.
    pub fn largest_root_above(p: &IntPoly, above: &BigRational) -> Option<Self> {
        let bound = BigRational::from_integer(p.cauchy_bound());
        if above >= &bound {
            return None;
        }
        isolate_real_roots(p, above, &bound)
            .into_iter().rfind(|r| r.cmp_rational(above) == Ordering::Greater)
    }

    /// `(1 + sqrt 5) / 2`
    pub fn golden() -> Self {
        Self::from_parts(IntPoly::from_i64s(&[-1, -1, 1]), rat(1), rat(2))
    }

    /// Real root of `x^3 - x - 1`, the smallest Pisot number.
    pub fn plastic() -> Self {
        Self::from_parts(IntPoly::from_i64s(&[-1, -1, 0, 1]), rat(1), rat(2))
    }

    /// `2 + sqrt 2`, root of `x^2 - 4x + 2`.
    pub fn sqrt2_plus_2() -> Self {
        Self::from_parts(IntPoly::from_i64s(&[2, -4, 1]), rat(3), rat(4))
    }

    pub fn named(name: &str) -> Option<Self> {
        match name {
            "golden" => Some(Self::golden()),
            "plastic" => Some(Self::plastic()),
            "sqrt2plus2" => Some(Self::sqrt2_plus_2()),
            _ => None,
        }
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// The same root under a square-free factor of the defining polynomial that vanishes on it.
    pub(crate) fn with_factor(&self, factor: IntPoly) -> Self {
        Self {
            poly: factor.primitive_part(),
            lo: self.lo.clone(),
            hi: self.hi.clone(),
        }
    }

    /// Exact value when the defining polynomial is linear.
    pub fn exact_rational(&self) -> Option<BigRational> {
        if self.poly.degree() == 1 {
            let c = self.poly.coeffs();
            Some(BigRational::new(-c[0].clone(), c[1].clone()))
        } else if self.poly.sign_at(&self.lo) == Ordering::Equal {
            Some(self.lo.clone())
        } else if self.poly.sign_at(&self.hi) == Ordering::Equal {
            Some(self.hi.clone())
        } else {
            None
        }
    }

    pub fn is_integer(&self) -> bool {
        if let Some(q) = self.exact_rational() {
            return q.is_integer();
        }
        let k = BigRational::from_integer(self.floor());
        self.cmp_rational(&k) == Ordering::Equal
    }

    /// Bisection until the width is at most `width`. Deterministic.
    pub fn refine(&self, width: &BigRational) -> Self {
        assert!(width.is_positive(), "refinement width must be positive");
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        if let Some(q) = self.exact_rational() {
            // The root is known exactly: shrink around it.
            while &hi - &lo > *width {
                let w = (&hi - &lo) / rat(4);
                lo = &q - &w;
                hi = &q + &w;
            }
            return Self { poly: self.poly.clone(), lo, hi };
        }
        let mut s_lo = self.poly.sign_at(&lo);
        while &hi - &lo > *width {
            let mid = half(&lo, &hi);
            let s_mid = self.poly.sign_at(&mid);
            if s_mid == Ordering::Equal {
                // Only reachable for reducible defining data: the root is `mid`.
                let w = (&hi - &lo) / rat(4);
                return Self { poly: self.poly.clone(), lo: &mid - &w, hi: &mid + &w }.refine(width);
            }
            if s_mid == s_lo {
                lo = mid;
                s_lo = s_mid;
            } else {
                hi = mid;
            }
        }
        Self { poly: self.poly.clone(), lo, hi }
    }

    /// Integer endpoints `(l, h)` with the root in `[l / 2^prec, h / 2^prec]` and `h - l <= 2`.
    pub fn dyadic_bounds(&self, prec: u64) -> (Self, BigInt, BigInt) {
        let w = BigRational::new(BigInt::one(), pow2(prec));
        let r = if self.width() > w { self.refine(&w) } else { self.clone() };
        let p = pow2(prec);
        let l = super::interval::floor_div(&(r.lo.numer() * &p), r.lo.denom());
        let h = super::interval::ceil_div(&(r.hi.numer() * &p), r.hi.denom());
        (r, l, h)
    }

    pub fn to_f64(&self) -> f64 {
        if let Some(q) = self.exact_rational() {
            return rational_to_f64(&q);
        }
        let r = self.refine(&BigRational::new(BigInt::one(), pow2(64) * self.scale_hint()));
        rational_to_f64(&half(&r.lo, &r.hi))
    }

    fn scale_hint(&self) -> BigInt {
        let m = self.lo.abs().max(self.hi.abs());
        (m.ceil().to_integer() + 1u32).max(BigInt::one())
    }

    /// `floor` of the root, exact.
    pub fn floor(&self) -> BigInt {
        if let Some(q) = self.exact_rational() {
            return q.floor().to_integer();
        }
        let mut r = self.clone();
        loop {
            let fl = r.lo.floor().to_integer();
            let fh = r.hi.floor().to_integer();
            if fl == fh {
                return fl;
            }
            if &fh - &fl == BigInt::one() {
                let k = BigRational::from_integer(fh.clone());
                return match r.cmp_rational(&k) {
                    Ordering::Less => fl,
                    _ => fh,
                };
            }
            let w = r.width() / rat(2);
            r = r.refine(&w);
        }
    }

    /// Sign of `root - q`.
    pub fn cmp_rational(&self, q: &BigRational) -> Ordering {
        if let Some(v) = self.exact_rational() {
            return v.cmp(q);
        }
        if q <= &self.lo {
            return Ordering::Greater;
        }
        if q >= &self.hi {
            return Ordering::Less;
        }
        let s_q = self.poly.sign_at(q);
        if s_q == Ordering::Equal {
            return Ordering::Equal;
        }
        let s_lo = self.poly.sign_at(&self.lo);
        // Root in (lo, q) iff the sign changes there.
        if s_lo == s_q {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

impl fmt::Display for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root of {} in [{}, {}] (~{})", self.poly, self.lo, self.hi, self.to_f64())
    }
}

/// JSON form: `{"poly": ["c0", "c1", ...], "lo": "p/q", "hi": "p/q"}`.
#[derive(Serialize, Deserialize)]
struct AlgebraicRealJson {
    poly: Vec<IntOrString>,
    lo: String,
    hi: String,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntOrString {
    Int(i64),
    Str(String),
}

impl Serialize for AlgebraicReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AlgebraicRealJson {
            poly: self.poly.coeffs().iter().map(|c| IntOrString::Str(c.to_string())).collect(),
            lo: self.lo.to_string(),
            hi: self.hi.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgebraicReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = AlgebraicRealJson::deserialize(d)?;
        let coeffs = j
            .poly
            .into_iter()
            .map(|c| match c {
                IntOrString::Int(i) => Ok(BigInt::from(i)),
                IntOrString::Str(s) => s.trim().parse::<BigInt>().map_err(|e| e.to_string()),
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        let lo = parse_rational(&j.lo).map_err(D::Error::custom)?;
        let hi = parse_rational(&j.hi).map_err(D::Error::custom)?;
        AlgebraicReal::new(IntPoly::new(coeffs), lo, hi).map_err(D::Error::custom)
    }
}

/// Parses `"p"`, `"p/q"` or a finite decimal such as `"-1.25"` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        if !fp.chars().all(|c| c.is_ascii_digit()) || !ip.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = BigInt::from(10).pow(fp.len() as u32);
        let q = BigRational::new(n, d);
        return Ok(if neg { -q } else { q });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

/// Sign variations in the coefficient sequence, zeros skipped.
fn sign_variations(c: &[BigInt]) -> usize {
    let mut last = 0i8;
    let mut v = 0;
    for x in c {
        let s = if x.is_positive() {
            1
        } else if x.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
    }
    v
}

/// Descartes bound for roots of `p` in the open interval `(a, b)`:
/// sign variations of `(1+x)^d p((a + b x)/(1 + x))`. Exact when the result is 0 or 1.
fn descartes_bound(p: &IntPoly, a: &BigRational, b: &BigRational) -> usize {
    let d = p.degree();
    // (a + b x) scaled to integers: (an*bd + bn*ad x) / (ad*bd)
    let (an, ad) = (a.numer(), a.denom());
    let (bn, bdn) = (b.numer(), b.denom());
    let lin = IntPoly::new(vec![an * bdn, bn * ad]);
    let den = ad * bdn;
    let one_plus_x = IntPoly::new(vec![den.clone(), den]);
    // Powers of both linear factors.
    let mut lin_pows = vec![IntPoly::one()];
    let mut opx_pows = vec![IntPoly::one()];
    for _ in 0..d {
        lin_pows.push(lin_pows.last().unwrap() * &lin);
        opx_pows.push(opx_pows.last().unwrap() * &one_plus_x);
    }
    let mut q = IntPoly::zero();
    for (i, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = &(&lin_pows[i] * &opx_pows[d - i]) * &IntPoly::new(vec![c.clone()]);
        q = &q + &term;
    }
    sign_variations(q.coeffs())
}

/// Number of distinct roots of the square-free `p` in `[lo, hi]`.
fn count_roots_closed(p: &IntPoly, lo: &BigRational, hi: &BigRational) -> usize {
    isolate_square_free(p, lo, hi).len()
}

/// Isolates every distinct real root of `p` in `[lo, hi]`, ascending, with pairwise
/// disjoint intervals. Roots hit exactly by bisection are returned with their linear
/// factor as the defining polynomial.
pub fn isolate_real_roots(p: &IntPoly, lo: &BigRational, hi: &BigRational) -> Vec<AlgebraicReal> {
    assert!(!p.is_zero(), "cannot isolate roots of the zero polynomial");
    if p.degree() == 0 || lo > hi {
        return Vec::new();
    }
    let sf = p.square_free_part();
    isolate_square_free(&sf, lo, hi)
}

enum Found {
    Exact(BigRational),
    Interval(BigRational, BigRational),
}

/// A Descartes cell `(a, b)` holding one root, shrunk until neither endpoint is a root.
fn shrink_off_roots(sf: &IntPoly, mut a: BigRational, mut b: BigRational) -> Found {
    while sf.sign_at(&a) == Ordering::Equal || sf.sign_at(&b) == Ordering::Equal {
        let m = half(&a, &b);
        if sf.sign_at(&m) == Ordering::Equal {
            return Found::Exact(m);
        }
        if descartes_bound(sf, &a, &m) == 1 {
            b = m;
        } else {
            a = m;
        }
    }
    Found::Interval(a, b)
}

fn isolate_square_free(sf: &IntPoly, lo: &BigRational, hi: &BigRational) -> Vec<AlgebraicReal> {
    let mut found: Vec<Found> = Vec::new();
    if sf.sign_at(lo) == Ordering::Equal {
        found.push(Found::Exact(lo.clone()));
    }
    if hi > lo && sf.sign_at(hi) == Ordering::Equal {
        found.push(Found::Exact(hi.clone()));
    }
    if hi > lo {
        let mut stack = vec![(lo.clone(), hi.clone())];
        while let Some((a, b)) = stack.pop() {
            match descartes_bound(sf, &a, &b) {
                0 => {}
                1 => found.push(shrink_off_roots(sf, a, b)),
                _ => {
                    let m = half(&a, &b);
                    if sf.sign_at(&m) == Ordering::Equal {
                        found.push(Found::Exact(m.clone()));
                    }
                    stack.push((a, m.clone()));
                    stack.push((m, b));
                }
            }
        }
    }
    // Sort by a point inside each enclosure.
    let key = |f: &Found| match f {
        Found::Exact(q) => q.clone(),
        Found::Interval(a, b) => half(a, b),
    };
    found.sort_by_key(key);

    // Shrink irrational intervals away from neighbouring exact roots, then give exact
    // roots a small symmetric interval that stays clear of every neighbour.
    let n = found.len();
    let mut irr: Vec<Option<AlgebraicReal>> = found
        .iter()
        .map(|f| match f {
            Found::Interval(a, b) => Some(AlgebraicReal::from_parts(sf.clone(), a.clone(), b.clone())),
            Found::Exact(_) => None,
        })
        .collect();
    for i in 0..n {
        let Some(r) = irr[i].clone() else { continue };
        let mut r = r;
        let touches = |r: &AlgebraicReal, q: &BigRational| &r.lo <= q && q <= &r.hi;
        for j in [i.wrapping_sub(1), i + 1] {
            if let Some(Found::Exact(q)) = found.get(j) {
                while touches(&r, q) {
                    let w = r.width() / rat(2);
                    r = r.refine(&w);
                }
            }
        }
        irr[i] = Some(r);
    }
    // Descartes cells share bisection endpoints; separate neighbours strictly.
    for i in 1..n {
        if let (Some(a), Some(b)) = (irr[i - 1].clone(), irr[i].clone()) {
            let (mut a, mut b) = (a, b);
            while a.hi >= b.lo {
                let wa = a.width() / rat(2);
                let wb = b.width() / rat(2);
                a = a.refine(&wa);
                b = b.refine(&wb);
            }
            irr[i - 1] = Some(a);
            irr[i] = Some(b);
        }
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        match &found[i] {
            Found::Interval(..) => out.push(irr[i].clone().unwrap()),
            Found::Exact(q) => {
                let mut gap = rat(1);
                if i > 0 {
                    let left = match &irr[i - 1] {
                        Some(r) => r.hi.clone(),
                        None => key(&found[i - 1]),
                    };
                    gap = gap.min((q - left) / rat(2));
                }
                if i + 1 < n {
                    let right = match &irr[i + 1] {
                        Some(r) => r.lo.clone(),
                        None => key(&found[i + 1]),
                    };
                    gap = gap.min((right - q) / rat(2));
                }
                let lin = IntPoly::new(vec![-q.numer().clone(), q.denom().clone()]).primitive_part();
                out.push(AlgebraicReal::from_parts(lin, q - &gap, q + &gap));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn isolates_golden_ratio() {
        let roots = isolate_real_roots(&IntPoly::from_i64s(&[-1, -1, 1]), &q("1"), &q("2"));
        assert_eq!(roots.len(), 1);
        assert!((roots[0].to_f64() - 1.618_033_988_7).abs() < 1e-10);
    }

    #[test]
    fn isolates_two_plus_sqrt2() {
        let roots = isolate_real_roots(&IntPoly::from_i64s(&[2, -4, 1]), &q("1"), &q("4"));
        assert_eq!(roots.len(), 1);
        assert!((roots[0].to_f64() - 3.414_213_562_3).abs() < 1e-10);
    }

    #[test]
    fn no_real_roots() {
        assert!(isolate_real_roots(&IntPoly::from_i64s(&[1, 0, 1]), &q("-10"), &q("10")).is_empty());
    }

    #[test]
    fn rational_and_repeated_roots() {
        // (2x - 3)^2 (x^2 - 2): distinct roots -sqrt2, sqrt2, 3/2
        let f = &(&IntPoly::from_i64s(&[-3, 2]) * &IntPoly::from_i64s(&[-3, 2])) * &IntPoly::from_i64s(&[-2, 0, 1]);
        let roots = isolate_real_roots(&f, &q("-5"), &q("5"));
        assert_eq!(roots.len(), 3);
        assert!((roots[2].to_f64() - 1.5).abs() < 1e-12);
        assert_eq!(roots[2].floor(), BigInt::from(1));
        for w in roots.windows(2) {
            assert!(w[0].hi() < w[1].lo(), "intervals must be disjoint");
        }
        // Roots at the endpoints of the search interval.
        let r = isolate_real_roots(&IntPoly::from_i64s(&[-1, 0, 1]), &q("-1"), &q("1"));
        assert_eq!(r.len(), 2);
        assert_eq!(r[1].exact_rational(), Some(q("1")));
    }

    #[test]
    fn refine_examples() {
        let g = AlgebraicReal::golden().refine(&q("1/1000000000000"));
        assert!(g.width() <= q("1/1000000000000"));
        assert!(g.lo() < &q("1.618033988749895") && &q("1.618033988749894") < g.hi());
        let s = AlgebraicReal::sqrt2_plus_2().refine(&q("1/1000000"));
        assert!(s.lo() > &q("3.414212") && s.hi() < &q("3.414215"));
        let again = s.refine(&q("1"));
        assert_eq!(again, s);
    }

    #[test]
    fn floor_and_compare() {
        assert_eq!(AlgebraicReal::golden().floor(), BigInt::from(1));
        assert_eq!(AlgebraicReal::sqrt2_plus_2().floor(), BigInt::from(3));
        assert_eq!(AlgebraicReal::from_rational(q("-3/2")).floor(), BigInt::from(-2));
        assert_eq!(AlgebraicReal::golden().cmp_rational(&q("1.6")), Ordering::Greater);
        assert_eq!(AlgebraicReal::golden().cmp_rational(&q("1.7")), Ordering::Less);
    }

    #[test]
    fn validation_rejects_bad_intervals() {
        assert!(AlgebraicReal::new(IntPoly::from_i64s(&[-1, 0, 1]), q("-2"), q("2")).is_err());
        assert!(AlgebraicReal::new(IntPoly::from_i64s(&[-1, 0, 1]), q("2"), q("0")).is_err());
        assert!(AlgebraicReal::new(IntPoly::from_i64s(&[-1, 0, 1]), q("0"), q("2")).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let g = AlgebraicReal::golden();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"poly":["-1","-1","1"],"lo":"1","hi":"2"}"#);
        let back: AlgebraicReal = serde_json::from_str(r#"{"poly":[-1,-1,1],"lo":"1","hi":"2"}"#).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(q("3/2"), BigRational::new(3.into(), 2.into()));
        assert_eq!(q("-1.25"), BigRational::new((-5).into(), 4.into()));
        assert_eq!(q(".5"), BigRational::new(1.into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }
}
