//! Generating functions of orbit data and the characteristic polynomials built from them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebraic::{BetaElement, BetaField, IntPoly};
use crate::betamap::{orbit_prefix, OrbitRecord, SignPattern, Verdict};
use crate::error::{Error, Result};

/// `phi(z) = sum_n s_n d_n z^(n+1)`, closed by the orbit's termination.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum PhiSeries {
    /// `sum_{n<N} s_n d_n z^(n+1) + k0 s_N z^(N+1)`
    Simple {
        coeffs: Vec<i64>,
        k0: i64,
        #[serde(rename = "N")]
        n: usize,
        s_n: i8,
    },
    /// Coefficients `a_n = s_n d_n` with `a_(n+l) = twist * a_n` for `n >= p`.
    Periodic {
        preperiod: Vec<i64>,
        period: Vec<i64>,
        twist: i8,
    },
}

impl PhiSeries {
    /// Coefficients of `z^1, ..., z^len`.
    pub fn coefficients(&self, len: usize) -> Vec<i64> {
        match self {
            PhiSeries::Simple { coeffs, k0, n, s_n } => (0..len)
                .map(|i| match i.cmp(n) {
                    std::cmp::Ordering::Less => coeffs[i],
                    std::cmp::Ordering::Equal => k0 * i64::from(*s_n),
                    std::cmp::Ordering::Greater => 0,
                })
                .collect(),
            PhiSeries::Periodic { preperiod, period, twist } => (0..len)
                .map(|i| {
                    if i < preperiod.len() {
                        preperiod[i]
                    } else {
                        let j = i - preperiod.len();
                        let turns = j / period.len();
                        let t = if turns % 2 == 1 { i64::from(*twist) } else { 1 };
                        t * period[j % period.len()]
                    }
                })
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    Simple,
    PeriodicNumerator,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Minimality {
    EisensteinCertified,
    BestEffort,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharPoly {
    #[serde(serialize_with = "ser_poly")]
    pub poly: IntPoly,
    pub provenance: Provenance,
    pub minimality: Minimality,
}

pub(crate) fn ser_poly<S: serde::Serializer>(p: &IntPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("IntPoly", 2)?;
    st.serialize_field("coeffs", &p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>())?;
    st.serialize_field("display", &p.to_string())?;
    st.end()
}

pub fn phi_from_orbit(rec: &OrbitRecord) -> Result<PhiSeries> {
    let a = |st: &crate::betamap::OrbitStep| i64::from(st.cum_sign) * st.digit;
    match rec.verdict {
        Verdict::Simple { n, k0 } => Ok(PhiSeries::Simple {
            coeffs: rec.steps[..n].iter().map(a).collect(),
            k0,
            n,
            s_n: rec.steps[n].cum_sign,
        }),
        Verdict::EventuallyPeriodic { preperiod, period } => {
            let twist = rec.steps[preperiod..preperiod + period]
                .iter()
                .map(|s| s.sign)
                .product();
            Ok(PhiSeries::Periodic {
                preperiod: rec.steps[..preperiod].iter().map(a).collect(),
                period: rec.steps[preperiod..preperiod + period].iter().map(a).collect(),
                twist,
            })
        }
        Verdict::Unresolved { max_steps } => Err(Error::UnresolvedOrbit { max_steps }),
    }
}

/// Integer polynomial in `x = 1/z` with root `beta`, from `1 - phi(z)`.
///
/// Simple orbits give `x^(N+1) - sum_{n<N} s_n d_n x^(N-n) - k0 s_N`. Periodic orbits
/// give the reversed numerator of `(1 - phi(z)) (1 - twist z^l)`.
pub fn char_poly(series: &PhiSeries) -> CharPoly {
    let (q, provenance) = match series {
        PhiSeries::Simple { n, .. } => {
            // 1 - phi(z) is already a polynomial.
            let a = series.coefficients(n + 1);
            let mut q = vec![BigInt::one()];
            q.extend(a.iter().map(|&c| BigInt::from(-c)));
            (IntPoly::new(q), Provenance::Simple)
        }
        PhiSeries::Periodic { preperiod, period, twist } => {
            let p = preperiod.len();
            let l = period.len();
            let mut head = vec![BigInt::one()];
            head.extend(preperiod.iter().map(|&c| BigInt::from(-c)));
            let head = IntPoly::new(head);
            let mut geo = vec![BigInt::zero(); l + 1];
            geo[0] = BigInt::one();
            geo[l] = BigInt::from(-i64::from(*twist));
            let mut tail = vec![BigInt::zero(); p + 1];
            tail.extend(period.iter().map(|&c| BigInt::from(c)));
            let q = &(&head * &IntPoly::new(geo)) - &IntPoly::new(tail);
            (q, Provenance::PeriodicNumerator)
        }
    };
    let poly = q.reversed().primitive_part();
    let minimality = if eisenstein_any(&poly).is_some() {
        Minimality::EisensteinCertified
    } else {
        Minimality::Unknown
    };
    CharPoly { poly, provenance, minimality }
}

/// `p(beta)` as an element of `Q(beta)`.
pub fn eval_in_field(field: &BetaField, p: &IntPoly) -> BetaElement {
    let mut acc = field.zero();
    for c in p.coeffs().iter().rev() {
        acc = field.add_int(&field.mul_beta(&acc), c);
    }
    acc
}

/// Whether `p` vanishes at the field's `beta`, decided exactly.
pub fn vanishes_at_beta(field: &BetaField, p: &IntPoly) -> bool {
    field.is_zero_value(&eval_in_field(field, p))
}

/// Characteristic polynomial of a finite orbit, verified to vanish at `beta`.
pub fn char_poly_of(rec: &OrbitRecord) -> Result<CharPoly> {
    let cp = char_poly(&phi_from_orbit(rec)?);
    if !vanishes_at_beta(&rec.field, &cp.poly) {
        return Err(Error::ConstructionFailed(format!(
            "characteristic polynomial {} does not vanish at beta",
            cp.poly
        )));
    }
    Ok(cp)
}

/// Checks `1 - sum_{n<=N} s_n d_n z^(n+1) = (1 - beta z) sum_{n<=N} s_n tau^n(1) z^n
/// + s_(N+1) tau^(N+1)(1) z^(N+1)` coefficient by coefficient in `Q(beta)`.
pub fn lemma2_check(field: &BetaField, pattern: &SignPattern, n: usize) -> Result<bool> {
    let steps = orbit_prefix(field, pattern, n + 1)?;
    let term = |k: usize| -> BetaElement {
        let st = &steps[k];
        if st.cum_sign > 0 {
            st.point.clone()
        } else {
            field.neg(&st.point)
        }
    };
    for k in 0..=n + 1 {
        let lhs = if k == 0 {
            field.one()
        } else {
            let st = &steps[k - 1];
            field.from_int(-(i64::from(st.cum_sign) * st.digit))
        };
        let mut rhs = if k <= n { term(k) } else { field.zero() };
        if k >= 1 {
            rhs = field.sub(&rhs, &field.mul_beta(&term(k - 1)));
        }
        if k == n + 1 {
            rhs = field.add(&rhs, &term(n + 1));
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Eisenstein's criterion at `prime`.
pub fn eisenstein_certificate(p: &IntPoly, prime: &BigInt) -> bool {
    assert!(prime >= &BigInt::from(2), "prime must be at least 2");
    let c = p.coeffs();
    if p.degree() == 0 {
        return false;
    }
    let lead = c.last().unwrap();
    if lead.is_multiple_of(prime) {
        return false;
    }
    if !c[..c.len() - 1].iter().all(|x| x.is_multiple_of(prime)) {
        return false;
    }
    !c[0].is_multiple_of(&(prime * prime))
}

/// A prime at which Eisenstein's criterion holds, searching the primes dividing every
/// non-leading coefficient (trial division up to `10^6`).
pub fn eisenstein_any(p: &IntPoly) -> Option<BigInt> {
    if p.degree() == 0 {
        return None;
    }
    let c = p.coeffs();
    let mut g = c[..c.len() - 1].iter().fold(BigInt::zero(), |g, x| g.gcd(x)).abs();
    if g <= BigInt::one() {
        return None;
    }
    let mut d = BigInt::from(2);
    let limit = BigInt::from(1_000_000);
    while &d * &d <= g && d <= limit {
        if g.is_multiple_of(&d) {
            if eisenstein_certificate(p, &d) {
                return Some(d);
            }
            while g.is_multiple_of(&d) {
                g /= &d;
            }
        }
        d += 1;
    }
    // What remains is prime when the loop ran past its square root.
    if g > BigInt::one() && &d * &d > g && eisenstein_certificate(p, &g) {
        return Some(g);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::AlgebraicReal;
    use crate::betamap::orbit_of_one;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn golden_series_and_polynomials() {
        let rec = orbit_of_one(&AlgebraicReal::golden(), &SignPattern::e0(), 50).unwrap();
        let s = phi_from_orbit(&rec).unwrap();
        assert_eq!(s.coefficients(4), vec![1, 1, 0, 0]);
        assert_eq!(char_poly_of(&rec).unwrap().poly, p(&[-1, -1, 1]));

        let rec = orbit_of_one(&AlgebraicReal::golden(), &SignPattern::e1(), 50).unwrap();
        let s = phi_from_orbit(&rec).unwrap();
        assert_eq!(s.coefficients(5), vec![2, -1, 1, -1, 1]);
        let cp = char_poly_of(&rec).unwrap();
        assert_eq!(cp.poly, p(&[-1, -1, 1]));
        assert_eq!(cp.provenance, Provenance::PeriodicNumerator);
    }

    #[test]
    fn simple_series_from_digit_data() {
        let s = PhiSeries::Simple { coeffs: vec![4], k0: 2, n: 1, s_n: -1 };
        assert_eq!(char_poly(&s).poly, p(&[2, -4, 1]));
        assert_eq!(char_poly(&s).minimality, Minimality::EisensteinCertified);
    }

    #[test]
    fn unresolved_has_no_series() {
        let rec = orbit_of_one(&AlgebraicReal::golden(), &SignPattern::e1(), 1).unwrap();
        assert!(matches!(phi_from_orbit(&rec), Err(Error::UnresolvedOrbit { max_steps: 1 })));
    }

    #[test]
    fn lemma2_examples() {
        let f = BetaField::new(AlgebraicReal::golden());
        assert!(lemma2_check(&f, &SignPattern::e1(), 4).unwrap());
        assert!(lemma2_check(&f, &SignPattern::e0(), 1).unwrap());
        let plastic = BetaField::new(AlgebraicReal::plastic());
        assert!(lemma2_check(&plastic, &SignPattern::alt(), 30).unwrap());
    }

    #[test]
    fn eisenstein_examples() {
        let two = BigInt::from(2);
        assert!(eisenstein_certificate(&p(&[-2, 4, -8, 1]), &two));
        assert!(!eisenstein_certificate(&p(&[-1, -1, 1]), &two));
        assert!(eisenstein_certificate(&p(&[2, -4, 1]), &two));
        assert_eq!(eisenstein_any(&p(&[-3, 6, 1])), Some(BigInt::from(3)));
        assert_eq!(eisenstein_any(&p(&[-4, 2, 1])), None);
        assert_eq!(eisenstein_any(&p(&[1_000_003 * 1_000_003, 1_000_003, 1])), None);
        assert_eq!(eisenstein_any(&p(&[1_000_003, 1_000_003, 1])), Some(BigInt::from(1_000_003)));
    }
}
