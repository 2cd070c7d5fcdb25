//! Outward-rounded fixed-point interval arithmetic.
//!
//! An interval `[lo, hi]` at precision `prec` denotes the real interval
//! `[lo / 2^prec, hi / 2^prec]`. Products are rounded outward, so every
//! operation yields an enclosure of the exact result.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedInterval {
    pub lo: BigInt,
    pub hi: BigInt,
}

pub(crate) fn pow2(prec: u64) -> BigInt {
    BigInt::one() << prec
}

pub(crate) fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

pub(crate) fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

impl FixedInterval {
    pub fn point(v: BigInt) -> Self {
        Self { lo: v.clone(), hi: v }
    }

    pub fn zero() -> Self {
        Self::point(BigInt::zero())
    }

    pub fn from_rational(q: &BigRational, prec: u64) -> Self {
        let scaled = q.numer() * pow2(prec);
        Self {
            lo: floor_div(&scaled, q.denom()),
            hi: ceil_div(&scaled, q.denom()),
        }
    }

    /// Encloses `[lo, hi]` given as rationals.
    pub fn from_bounds(lo: &BigRational, hi: &BigRational, prec: u64) -> Self {
        let p = pow2(prec);
        Self {
            lo: floor_div(&(lo.numer() * &p), lo.denom()),
            hi: ceil_div(&(hi.numer() * &p), hi.denom()),
        }
    }

    /// Exact dyadic `f64` input.
    pub fn from_f64(x: f64, prec: u64) -> Self {
        let q = BigRational::from_float(x).expect("finite float");
        Self::from_rational(&q, prec)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    /// Exact product by an integer (no rounding).
    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_negative() {
            Self {
                lo: &self.hi * k,
                hi: &self.lo * k,
            }
        } else {
            Self {
                lo: &self.lo * k,
                hi: &self.hi * k,
            }
        }
    }

    pub fn mul(&self, o: &Self, prec: u64) -> Self {
        let cands = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let mn = cands.iter().min().unwrap();
        let mx = cands.iter().max().unwrap();
        let p = pow2(prec);
        Self {
            lo: floor_div(mn, &p),
            hi: ceil_div(mx, &p),
        }
    }

    /// Outward-rounded image under `min(a*x, b*x)` where `a <= b` are integers: the
    /// lower envelope of a box-constrained linear term.
    pub fn min_of_scaled(&self, a: &BigInt, b: &BigInt) -> Self {
        let x = self.scale(a);
        let y = self.scale(b);
        Self {
            lo: x.lo.clone().min(y.lo.clone()),
            hi: x.hi.min(y.hi),
        }
    }

    pub fn width(&self) -> BigInt {
        &self.hi - &self.lo
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn lo_rational(&self, prec: u64) -> BigRational {
        BigRational::new(self.lo.clone(), pow2(prec))
    }

    pub fn hi_rational(&self, prec: u64) -> BigRational {
        BigRational::new(self.hi.clone(), pow2(prec))
    }

    /// Upper bound of `|x|` for `x` in the interval, as an `f64` rounded up.
    pub fn mag_upper_f64(&self, prec: u64) -> f64 {
        let m = self.lo.abs().max(self.hi.abs());
        rational_to_f64_up(&BigRational::new(m, pow2(prec)))
    }

    pub fn mid_f64(&self, prec: u64) -> f64 {
        rational_to_f64(&BigRational::new(&self.lo + &self.hi, pow2(prec + 1)))
    }
}

/// Complex interval: rectangular enclosure.
#[derive(Clone, Debug)]
pub struct ComplexInterval {
    pub re: FixedInterval,
    pub im: FixedInterval,
}

impl ComplexInterval {
    pub fn one(prec: u64) -> Self {
        Self {
            re: FixedInterval::point(pow2(prec)),
            im: FixedInterval::zero(),
        }
    }

    pub fn from_f64(re: f64, im: f64, prec: u64) -> Self {
        Self {
            re: FixedInterval::from_f64(re, prec),
            im: FixedInterval::from_f64(im, prec),
        }
    }

    pub fn mul(&self, o: &Self, prec: u64) -> Self {
        Self {
            re: self.re.mul(&o.re, prec).sub(&self.im.mul(&o.im, prec)),
            im: self.re.mul(&o.im, prec).add(&self.im.mul(&o.re, prec)),
        }
    }
}

/// Nearest `f64` to a rational (via the float conversion of num-rational, which
/// may be off by an ulp for huge operands).
pub fn rational_to_f64(q: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    if q.is_zero() {
        return 0.0;
    }
    // Scale so the integer division keeps 64 significant bits.
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = 64 - (nb - db);
    let scaled = if shift >= 0 {
        (q.numer() << shift as u64) / q.denom()
    } else {
        q.numer() / (q.denom() << (-shift) as u64)
    };
    let m = scaled.to_f64().unwrap_or(f64::NAN);
    m * 2f64.powi(-shift as i32)
}

/// An `f64` that is `>=` the rational.
pub fn rational_to_f64_up(q: &BigRational) -> f64 {
    let v = rational_to_f64(q);
    if !v.is_finite() {
        return v;
    }
    let back = BigRational::from_float(v).expect("finite");
    if &back >= q {
        v
    } else {
        next_up(v)
    }
}

pub fn next_up(v: f64) -> f64 {
    if v.is_nan() || v == f64::INFINITY {
        return v;
    }
    if v == 0.0 {
        return f64::from_bits(1);
    }
    let b = v.to_bits();
    if v > 0.0 {
        f64::from_bits(b + 1)
    } else {
        f64::from_bits(b - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_encloses_exact_value() {
        let prec = 40;
        let a = FixedInterval::from_rational(&BigRational::new(1.into(), 3.into()), prec);
        let b = FixedInterval::from_rational(&BigRational::new((-2).into(), 7.into()), prec);
        let c = a.mul(&b, prec);
        let exact = BigRational::new((-2).into(), 21.into());
        assert!(c.lo_rational(prec) <= exact && exact <= c.hi_rational(prec));
    }

    #[test]
    fn rational_conversion_rounds_sensibly() {
        let q = BigRational::new(1.into(), 3.into());
        assert!((rational_to_f64(&q) - 1.0 / 3.0).abs() < 1e-16);
        let up = rational_to_f64_up(&q);
        assert!(BigRational::from_float(up).unwrap() >= q);
        let big = BigRational::new(BigInt::from(10).pow(400), BigInt::from(10).pow(399));
        assert!((rational_to_f64(&big) - 10.0).abs() < 1e-14);
    }
}
