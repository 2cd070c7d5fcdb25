//! Arbitrary-precision floating point for the non-exact orbit diagnostics.

use std::collections::HashMap;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_rational::BigRational;
use serde::Serialize;

use crate::algebraic::{AlgebraicReal, BetaElement};
use crate::betamap::SignPattern;
use crate::error::{Error, Result};

pub const RM: RoundingMode = RoundingMode::ToEven;
pub const DEFAULT_BITS: usize = 256;

/// Working precision plus the constant cache needed by the transcendental functions.
pub struct HighPrec {
    pub bits: usize,
    cc: Consts,
}

impl HighPrec {
    pub fn new(bits: usize) -> Result<Self> {
        if bits < 64 {
            return Err(Error::Domain(format!("precision {bits} below 64 bits")));
        }
        let cc = Consts::new().map_err(|e| Error::Domain(format!("constant cache: {e:?}")))?;
        Ok(Self { bits, cc })
    }

    pub fn from_f64(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.bits)
    }

    pub fn from_i64(&self, x: i64) -> BigFloat {
        BigFloat::from_i64(x, self.bits)
    }

    pub fn from_rational(&mut self, q: &BigRational) -> BigFloat {
        let n = BigFloat::parse(&q.numer().to_string(), Radix::Dec, self.bits + 64, RM, &mut self.cc);
        let d = BigFloat::parse(&q.denom().to_string(), Radix::Dec, self.bits + 64, RM, &mut self.cc);
        n.div(&d, self.bits, RM)
    }

    pub fn from_algebraic(&mut self, a: &AlgebraicReal) -> BigFloat {
        if let Some(q) = a.exact_rational() {
            return self.from_rational(&q);
        }
        let (r, _, _) = a.dyadic_bounds(self.bits as u64 + 16);
        let two = BigRational::from_integer(2.into());
        self.from_rational(&((r.lo() + r.hi()) / two))
    }

    /// Value of a field element `sum c_i beta^i`.
    pub fn from_element(&mut self, x: &BetaElement, beta: &BigFloat) -> BigFloat {
        let mut acc = self.from_i64(0);
        for c in x.coeffs().iter().rev() {
            let c = self.from_rational(c);
            acc = acc.mul(beta, self.bits, RM).add(&c, self.bits, RM);
        }
        acc
    }

    pub fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.bits, RM)
    }

    pub fn cos(&mut self, x: &BigFloat) -> BigFloat {
        x.cos(self.bits, RM, &mut self.cc)
    }

    pub fn acos(&mut self, x: &BigFloat) -> BigFloat {
        x.acos(self.bits, RM, &mut self.cc)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, RM)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, RM)
    }

    pub fn decimal(&mut self, x: &BigFloat) -> String {
        x.format(Radix::Dec, RM, &mut self.cc).unwrap_or_else(|_| "NaN".into())
    }
}

/// Nearest `f64` (to within an ulp).
pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let Some((words, _, sign, exp, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    let top = *words.last().expect("nonempty mantissa");
    let v = top as f64 * 2f64.powi(exp - 64);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// `floor` as an `i64`.
pub fn floor_i64(x: &BigFloat) -> i64 {
    to_f64(&x.floor()).round() as i64
}

/// Candidate lookup for near-coincident points: buckets of width `2^-40` in `f64`.
#[derive(Default)]
pub(crate) struct NearIndex {
    map: HashMap<i64, Vec<usize>>,
}

impl NearIndex {
    fn key(x: &BigFloat) -> i64 {
        (to_f64(x) * 2f64.powi(40)).floor() as i64
    }

    pub(crate) fn insert(&mut self, x: &BigFloat, idx: usize) {
        self.map.entry(Self::key(x)).or_default().push(idx);
    }

    /// Smallest stored index accepted by `close`.
    pub(crate) fn find(&self, x: &BigFloat, mut close: impl FnMut(usize) -> bool) -> Option<usize> {
        let k = Self::key(x);
        let mut cands: Vec<usize> = (k - 1..=k + 1)
            .filter_map(|b| self.map.get(&b))
            .flatten()
            .copied()
            .collect();
        cands.sort_unstable();
        cands.into_iter().find(|&i| close(i))
    }
}

/// Orbit of 1 under a generalized beta-map computed in floating point. Never a proof:
/// the expansion amplifies rounding by `beta` per step.
#[derive(Clone, Debug, Serialize)]
pub struct ApproxOrbit {
    pub pattern: String,
    pub precision_bits: usize,
    pub steps: usize,
    /// First `(i, j)` with `|x_i - x_j| < 2^(-bits/2)`.
    pub near_recurrence: Option<(usize, usize)>,
    pub head: Vec<f64>,
    pub probative: bool,
}

pub fn approx_tau_orbit(beta: &AlgebraicReal, pattern: &SignPattern, steps: usize, bits: usize) -> Result<ApproxOrbit> {
    let mut hp = HighPrec::new(bits)?;
    let b = hp.from_algebraic(beta);
    let tol = BigFloat::from_f64(2f64.powi(-(bits as i32) / 2), bits);
    let mut xs: Vec<BigFloat> = vec![hp.from_i64(1)];
    let mut buckets = NearIndex::default();
    buckets.insert(&xs[0], 0);
    let mut near = None;
    for _ in 0..steps {
        let x = xs.last().expect("nonempty");
        let bx = hp.mul(&b, x);
        let i = floor_i64(&bx);
        let e = pattern.at(i.max(0) as usize);
        let frac = hp.sub(&bx, &hp.from_i64(i));
        let next = if e == 0 { frac } else { hp.sub(&hp.from_i64(1), &frac) };
        let hit = buckets.find(&next, |k| hp.sub(&next, &xs[k]).abs() < tol);
        buckets.insert(&next, xs.len());
        xs.push(next);
        if let Some(k) = hit {
            near = Some((k, xs.len() - 1));
            break;
        }
    }
    Ok(ApproxOrbit {
        pattern: pattern.to_string(),
        precision_bits: bits,
        steps: xs.len() - 1,
        near_recurrence: near,
        head: xs.iter().take(32).map(to_f64).collect(),
        probative: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::parse_rational;

    #[test]
    fn conversions() {
        let mut hp = HighPrec::new(128).unwrap();
        let x = hp.from_rational(&parse_rational("-1/3").unwrap());
        assert!((to_f64(&x) + 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(to_f64(&hp.from_i64(5)), 5.0);
        let g = hp.from_algebraic(&AlgebraicReal::golden());
        assert!((to_f64(&g) - 1.618_033_988_749_895).abs() < 1e-15);
        assert_eq!(floor_i64(&g), 1);
        assert!((to_f64(&hp.pi()) - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn golden_e0_float_orbit_recurs() {
        let o = approx_tau_orbit(&AlgebraicReal::golden(), &SignPattern::e0(), 20, 256).unwrap();
        // 1 -> beta - 1 -> 0 lands on a discontinuity, so only recurrence itself is stable.
        assert!(o.near_recurrence.is_some());
        assert!(!o.probative);
    }
}
