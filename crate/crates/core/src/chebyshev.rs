//! The generalized Chebyshev map `F_beta(x) = cos(beta arccos x)` on `[-1, 1]` and its
//! relation to the alternating map `tau_{beta, E_alt}` through `h(x) = cos(pi x)`.

use astro_float::BigFloat;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebraic::AlgebraicReal;
use crate::betamap::{orbit_cycle, validate_beta, SignPattern, Verdict};
use crate::error::{Error, Result};
use crate::highprec::{floor_i64, to_f64, HighPrec, NearIndex, DEFAULT_BITS};

/// Margin around the discontinuities of `tau` excluded from the residual grid.
pub const BRANCH_MARGIN: f64 = 1e-9;

/// `cos(beta arccos x)` for `x` in `[-1, 1]`.
pub fn f_beta(hp: &mut HighPrec, beta: &BigFloat, x: &BigFloat) -> Result<BigFloat> {
    let one = hp.from_i64(1);
    if x.is_nan() || x.abs() > one {
        return Err(Error::Domain(format!("x = {} outside [-1, 1]", to_f64(x))));
    }
    let t = hp.acos(x);
    let bt = hp.mul(beta, &t);
    Ok(hp.cos(&bt))
}

/// [`f_beta`] on `f64` inputs at the default precision.
pub fn f_beta_f64(beta: f64, x: f64) -> Result<f64> {
    let mut hp = HighPrec::new(DEFAULT_BITS)?;
    let (b, x) = (hp.from_f64(beta), hp.from_f64(x));
    Ok(to_f64(&f_beta(&mut hp, &b, &x)?))
}

/// `cos(pi x)`
fn h(hp: &mut HighPrec, x: &BigFloat) -> BigFloat {
    let pi = hp.pi();
    let a = hp.mul(&pi, x);
    hp.cos(&a)
}

/// `tau_{beta, E_alt}(x)`, or `None` within `BRANCH_MARGIN` of a branch endpoint.
fn tau_alt(hp: &HighPrec, beta: &BigFloat, x: &BigFloat) -> Option<BigFloat> {
    let bx = hp.mul(beta, x);
    let i = floor_i64(&bx);
    let frac = hp.sub(&bx, &hp.from_i64(i));
    let f = to_f64(&frac);
    if !(BRANCH_MARGIN..=1.0 - BRANCH_MARGIN).contains(&f) {
        return None;
    }
    Some(if i.rem_euclid(2) == 0 { frac } else { hp.sub(&hp.from_i64(1), &frac) })
}

/// `max |F_beta(h(x)) - h(tau(x))|` over an equispaced grid of `n_samples` points of `[0, 1]`,
/// skipping points near branch endpoints.
pub fn conjugacy_residual(beta: &AlgebraicReal, n_samples: usize, bits: usize) -> Result<f64> {
    validate_beta(beta)?;
    if n_samples < 2 {
        return Err(Error::Domain("need at least two samples".into()));
    }
    let b = HighPrec::new(bits)?.from_algebraic(beta);
    let den = (n_samples - 1) as i64;
    let per_point = (0..n_samples)
        .into_par_iter()
        .map_init(
            || HighPrec::new(bits).expect("precision checked"),
            |hp, k| -> Result<f64> {
                let x = hp.from_i64(k as i64).div(&hp.from_i64(den), bits, crate::highprec::RM);
                let Some(tx) = tau_alt(hp, &b, &x) else {
                    return Ok(0.0);
                };
                let hx = h(hp, &x);
                let lhs = f_beta(hp, &b, &hx)?;
                let rhs = h(hp, &tx);
                Ok(to_f64(&hp.sub(&lhs, &rhs).abs()))
            },
        )
        .collect::<Result<Vec<f64>>>()?;
    Ok(per_point.into_iter().fold(0.0, f64::max))
}

/// `{F_beta^n(-1)}` up to the first near-recurrence.
#[derive(Clone, Debug, Serialize)]
pub struct ChebOrbit {
    pub beta: String,
    pub beta_approx: f64,
    pub points: Vec<f64>,
    pub closed: bool,
    /// First `(i, j)` with `|y_i - y_j| < 2^(-bits/2)`.
    pub recurrence: Option<(usize, usize)>,
    pub precision_bits: usize,
}

fn cheb_orbit_raw(hp: &mut HighPrec, beta: &BigFloat, max_steps: usize) -> Result<(Vec<BigFloat>, Option<(usize, usize)>)> {
    let tol = hp.from_f64(2f64.powi(-(hp.bits as i32) / 2));
    let one = hp.from_i64(1);
    let mut ys = vec![hp.from_i64(-1)];
    let mut index = NearIndex::default();
    index.insert(&ys[0], 0);
    for _ in 0..max_steps {
        let mut y = f_beta(hp, beta, ys.last().expect("nonempty"))?;
        // cos can overshoot by an ulp
        if y.abs() > one {
            y = if y.is_negative() { one.neg() } else { one.clone() };
        }
        let hit = index.find(&y, |k| hp.sub(&y, &ys[k]).abs() < tol);
        index.insert(&y, ys.len());
        ys.push(y);
        if let Some(k) = hit {
            return Ok((ys.clone(), Some((k, ys.len() - 1))));
        }
    }
    Ok((ys, None))
}

pub fn cheb_orbit(beta: &AlgebraicReal, max_steps: usize, bits: usize) -> Result<ChebOrbit> {
    let mut hp = HighPrec::new(bits)?;
    let b = hp.from_algebraic(beta);
    let (ys, rec) = cheb_orbit_raw(&mut hp, &b, max_steps)?;
    Ok(ChebOrbit {
        beta: hp.decimal(&b),
        beta_approx: to_f64(&b),
        points: ys.iter().map(to_f64).collect(),
        closed: rec.is_some(),
        recurrence: rec,
        precision_bits: bits,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Agreement {
    Agree,
    Disagree,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConsistencyReport {
    pub exact_verdict: Verdict,
    /// Recurrence `(p, p + l)` of the exact `E_alt` orbit of 1.
    pub expected_recurrence: Option<(usize, usize)>,
    pub orbit: ChebOrbit,
    /// `max_n |F_beta^n(-1) - cos(pi tau^n(1))|` over the common prefix.
    pub max_h_deviation: f64,
    pub tolerance: f64,
    pub status: Agreement,
}

/// Compares the exact `E_alt` orbit of 1 with the floating-point `F_beta` orbit of `-1`.
/// The exact verdict is authoritative; the float side only corroborates it.
pub fn finite_orbit_consistency(beta: &AlgebraicReal, max_steps: usize, bits: usize) -> Result<ConsistencyReport> {
    let rec = orbit_cycle(beta, &SignPattern::alt(), max_steps)?;
    let expected = match rec.verdict {
        Verdict::EventuallyPeriodic { preperiod, period } => Some((preperiod, preperiod + period)),
        _ => None,
    };
    let mut hp = HighPrec::new(bits)?;
    let b = hp.from_algebraic(beta);
    let (ys, recurrence) = cheb_orbit_raw(&mut hp, &b, max_steps + 1)?;
    let mut dev = 0.0f64;
    for (st, y) in rec.steps.iter().zip(&ys) {
        let x = hp.from_element(&st.point, &b);
        let hx = h(&mut hp, &x);
        dev = dev.max(to_f64(&hp.sub(&hx, y).abs()));
    }
    let tolerance = 2f64.powi(-(bits as i32) / 2);
    let status = match expected {
        None => Agreement::Inconclusive,
        Some(e) if recurrence == Some(e) && dev < tolerance => Agreement::Agree,
        Some(_) => Agreement::Disagree,
    };
    Ok(ConsistencyReport {
        exact_verdict: rec.verdict,
        expected_recurrence: expected,
        orbit: ChebOrbit {
            beta: hp.decimal(&b),
            beta_approx: to_f64(&b),
            points: ys.iter().map(to_f64).collect(),
            closed: recurrence.is_some(),
            recurrence,
            precision_bits: bits,
        },
        max_h_deviation: dev,
        tolerance,
        status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::parse_rational;

    fn rational(s: &str) -> AlgebraicReal {
        AlgebraicReal::from_rational(parse_rational(s).unwrap())
    }

    #[test]
    fn chebyshev_closed_forms() {
        assert!((f_beta_f64(2.0, 0.3).unwrap() + 0.82).abs() < 1e-15);
        assert!((f_beta_f64(1.37, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(f_beta_f64(2.5, -1.0).unwrap().abs() < 1e-15);
        assert!(f_beta_f64(2.0, 1.5).is_err());
    }

    #[test]
    fn residual_small_and_integer_rejected() {
        let r = conjugacy_residual(&rational("5/2"), 101, 128).unwrap();
        assert!(r < 1e-30, "{r}");
        assert!(conjugacy_residual(&rational("2"), 101, 128).is_err());
    }

    #[test]
    fn golden_consistency() {
        let rep = finite_orbit_consistency(&AlgebraicReal::golden(), 100, 256).unwrap();
        assert_eq!(rep.status, Agreement::Agree, "{rep:?}");
        assert_eq!(rep.orbit.points[0], -1.0);
    }
}
