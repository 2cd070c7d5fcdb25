//! Galois-conjugate candidates of a finite-orbit `beta`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::algebraic::{isolate_real_roots, AlgebraicReal, IntPoly};
use crate::betamap::OrbitRecord;
use crate::error::Result;

use super::phi::{char_poly_of, eisenstein_any, Minimality};
use super::roots::{all_roots, ConjugateSet};

fn x_pow_minus_one(k: usize) -> IntPoly {
    let mut c = vec![BigInt::zero(); k + 1];
    c[0] = BigInt::from(-1);
    c[k] = BigInt::from(1);
    IntPoly::new(c)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..)
        .take_while(|d| d * d <= n)
        .filter(|d| n.is_multiple_of(*d))
        .flat_map(|d| [d, n / d])
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Removes factors that cannot carry `beta`: every cyclotomic factor dividing some
/// `x^k - 1` with `k <= 2 deg`, and every rational root other than `beta`.
pub fn strip_spurious(p: &IntPoly, beta: &AlgebraicReal) -> IntPoly {
    let mut p = p.strip_x_factors().primitive_part();
    for k in 1..=2 * p.degree() {
        loop {
            let g = p.gcd(&x_pow_minus_one(k));
            if g.degree() == 0 || g.degree() == p.degree() {
                break;
            }
            p = p.div_exact(&g).expect("gcd divides").primitive_part();
        }
    }
    let lead = p.leading().and_then(|l| l.abs().to_u64());
    let Some(lead) = lead.filter(|&l| l <= 1_000_000) else {
        return p;
    };
    let dens = divisors(lead);
    let bound = BigRational::from_integer(p.cauchy_bound());
    let beta_q = beta.exact_rational();
    for r in isolate_real_roots(&p, &-bound.clone(), &bound) {
        let approx = (r.lo() + r.hi()) / BigRational::from_integer(BigInt::from(2));
        for &b in &dens {
            let b = BigRational::from_integer(BigInt::from(b));
            let a = (&approx * &b).round();
            let q = a / b;
            if !p.eval_rational(&q).is_zero() || beta_q.as_ref() == Some(&q) {
                continue;
            }
            let lin = IntPoly::new(vec![-q.numer().clone(), q.denom().clone()]);
            while p.degree() > 1 && p.eval_rational(&q).is_zero() {
                p = p.div_exact(&lin).expect("rational root").primitive_part();
            }
            break;
        }
    }
    p
}

/// Roots of the stripped characteristic polynomial, with `beta` flagged.
pub fn conjugates(rec: &OrbitRecord, tol: f64) -> Result<ConjugateSet> {
    let cp = char_poly_of(rec)?;
    let stripped = strip_spurious(&cp.poly, rec.beta());
    let mut set = all_roots(&stripped, tol)?;
    set.flag_beta(rec.beta());
    set.minimality = if eisenstein_any(&stripped).is_some() {
        Minimality::EisensteinCertified
    } else {
        Minimality::BestEffort
    };
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::parse_rational;
    use crate::betamap::{orbit_of_one, SignPattern};

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn golden_conjugates() {
        for pat in [SignPattern::e0(), SignPattern::e1()] {
            let rec = orbit_of_one(&AlgebraicReal::golden(), &pat, 50).unwrap();
            let set = conjugates(&rec, 1e-12).unwrap();
            let conj: Vec<_> = set.conjugates().collect();
            assert_eq!(conj.len(), 1);
            assert!((conj[0].re() + 0.618_033_988_7).abs() < 1e-10);
            assert_eq!(set.minimality, Minimality::BestEffort);
        }
    }

    #[test]
    fn strips_cyclotomic_and_rational_factors() {
        // (x^2 - x - 1)(x + 1)(x^2 + x + 1)(2x - 5)
        let f = &(&(&p(&[-1, -1, 1]) * &p(&[1, 1])) * &p(&[1, 1, 1])) * &p(&[-5, 2]);
        assert_eq!(strip_spurious(&f, &AlgebraicReal::golden()), p(&[-1, -1, 1]));
        // A rational beta survives.
        let beta = AlgebraicReal::from_rational(parse_rational("5/2").unwrap());
        assert_eq!(strip_spurious(&(&p(&[-5, 2]) * &p(&[-1, 1])), &beta), p(&[-5, 2]));
    }
}
