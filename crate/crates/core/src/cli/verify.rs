//! Randomized and fixed invariant suites behind `genbeta verify`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebraic::{isolate_real_roots, AlgebraicReal, BetaField, IntPoly};
use crate::betamap::{orbit_of_one, SignPattern, Verdict};
use crate::chebyshev::{conjugacy_residual, f_beta, finite_orbit_consistency, Agreement};
use crate::construct::{lemma1_beta, DigitVector};
use crate::error::Result;
use crate::highprec::{to_f64, HighPrec};
use crate::sets::{
    check_golden_bound, cloud_from_orbits, cloud_parry, cloud_yrrap, extremal_min_real, membership,
    negative_real_violations, positive_real_violations, CoeffBox, SampleSpec,
};
use crate::spectra::lemma2_check;

use super::{to_json, Output, EXIT_ERROR};

pub const SUITES: [&str; 6] = ["lemma2", "lemma1", "golden-bound", "positivity", "membership", "chebyshev"];

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

fn check(suite: &str, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check { suite: suite.into(), name: name.into(), passed, detail: detail.into() }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A non-integer algebraic `beta` in `(1, 6)` of degree at most 4.
pub fn random_beta(rng: &mut ChaCha8Rng) -> AlgebraicReal {
    loop {
        let d = rng.gen_range(1..=4usize);
        if d == 1 {
            let den = rng.gen_range(2..=9i64);
            let num = rng.gen_range(den + 1..6 * den);
            if num % den != 0 {
                return AlgebraicReal::from_rational(rat(num, den));
            }
            continue;
        }
        let mut c: Vec<i64> = (0..d).map(|_| rng.gen_range(-6..=6)).collect();
        c.push(rng.gen_range(1..=2));
        let p = IntPoly::from_i64s(&c);
        let roots: Vec<AlgebraicReal> = isolate_real_roots(&p, &rat(1, 1), &rat(6, 1))
            .into_iter()
            .filter(|r| r.cmp_rational(&rat(1, 1)) == Ordering::Greater)
            .filter(|r| r.cmp_rational(&rat(6, 1)) == Ordering::Less && !r.is_integer())
            .collect();
        if let Some(r) = roots.choose(rng) {
            return r.clone();
        }
    }
}

/// Eventually periodic pattern with preperiod `<= 3` and period `<= 3`.
pub fn random_pattern(rng: &mut ChaCha8Rng) -> SignPattern {
    let pre = (0..rng.gen_range(0..=3)).map(|_| rng.gen_range(0..=1u8)).collect();
    let per = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..=1u8)).collect();
    SignPattern::new(pre, per).expect("valid pattern")
}

/// `M(0) <= 50`, `N <= 6`, satisfying the digit hypotheses.
pub fn random_digit_vector(rng: &mut ChaCha8Rng) -> DigitVector {
    loop {
        let n = rng.gen_range(1..=6usize);
        let m0 = rng.gen_range((3 * n as i64 + 3).max(4)..=50);
        let mut m = vec![m0];
        for _ in 0..n {
            let a = rng.gen_range(1..=m0 - 2);
            m.push(if rng.gen_bool(0.5) { a } else { -a });
        }
        if let Ok(dv) = DigitVector::new(m) {
            return dv;
        }
    }
}

pub fn lemma2_suite(seed: u64, cases: usize) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs: Vec<_> = (0..cases)
        .map(|_| (random_beta(&mut rng), random_pattern(&mut rng), rng.gen_range(1..=30usize)))
        .collect();
    let results: Vec<Result<bool>> = inputs
        .par_iter()
        .map(|(b, p, n)| lemma2_check(&BetaField::new(b.clone()), p, *n))
        .collect();
    let failures: Vec<String> = inputs
        .iter()
        .zip(&results)
        .filter(|(_, r)| !matches!(r, Ok(true)))
        .map(|((b, p, n), r)| format!("beta={b} pattern={p} N={n}: {r:?}"))
        .collect();
    vec![check(
        "lemma2",
        format!("{cases} random exact identities"),
        failures.is_empty(),
        if failures.is_empty() { format!("{cases}/{cases} hold") } else { failures.join("; ") },
    )]
}

/// Independent replay check of a digit vector: verdict, digits and cumulative signs.
pub fn lemma1_replay_ok(dv: &DigitVector) -> std::result::Result<(), String> {
    let (_, rec) = lemma1_beta(dv).map_err(|e| e.to_string())?;
    let n = dv.n();
    let want = Verdict::Simple { n, k0: dv.m[n].abs() };
    if rec.verdict != want {
        return Err(format!("verdict {} not {want}", rec.verdict));
    }
    if rec.digits()[..n] != dv.m[..n].iter().map(|x| x.abs()).collect::<Vec<_>>()[..] {
        return Err(format!("digits {:?}", rec.digits()));
    }
    if rec.cum_signs()[..=n] != dv.m.iter().map(|x| x.signum() as i8).collect::<Vec<_>>()[..] {
        return Err(format!("signs {:?}", rec.cum_signs()));
    }
    Ok(())
}

pub fn lemma1_suite(seed: u64, cases: usize) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4c31);
    let dvs: Vec<_> = (0..cases).map(|_| random_digit_vector(&mut rng)).collect();
    let res: Vec<_> = dvs.par_iter().map(lemma1_replay_ok).collect();
    let failures: Vec<String> = dvs
        .iter()
        .zip(&res)
        .filter_map(|(d, r)| r.as_ref().err().map(|e| format!("{:?}: {e}", d.m)))
        .collect();
    vec![check(
        "lemma1",
        format!("{cases} random digit vectors replay"),
        failures.is_empty(),
        format!("{}/{cases} replay {}", cases - failures.len(), failures.join("; ")).trim().to_string(),
    )]
}

pub fn golden_bound_suite(seed: u64, samples: usize) -> Vec<Check> {
    let s = "golden-bound";
    let mut out = Vec::new();
    let golden = orbit_of_one(&AlgebraicReal::golden(), &SignPattern::e1(), 50).map(|r| cloud_from_orbits(&[r]));
    match golden {
        Ok(c) => {
            let (m, pass) = check_golden_bound(&c);
            out.push(check(s, "golden E_1 singleton", pass && c.len() == 1, format!("max modulus {m:.12}")));
        }
        Err(e) => out.push(check(s, "golden E_1 singleton", false, e.to_string())),
    }
    let cloud = cloud_yrrap(&SampleSpec::random(samples, 4, seed));
    let (m, pass) = check_golden_bound(&cloud);
    out.push(check(s, format!("{samples}-sample Yrrap batch bound"), pass, format!("max modulus {m:.12} over {} points", cloud.len())));
    let neg = negative_real_violations(&cloud);
    out.push(check(s, "no real Yrrap conjugate below -1", neg.is_empty(), format!("{} violations", neg.len())));
    let built = cloud.sources - cloud.skipped.len();
    out.push(check(
        s,
        "every constructed beta contributes",
        built > 0 && cloud.len() >= built,
        format!("{built} of {} samples built, {} skipped", cloud.sources, cloud.skipped.len()),
    ));
    out
}

pub fn positivity_suite(depth: usize, max_count: usize) -> Vec<Check> {
    let cloud = cloud_parry(depth, max_count);
    let pos = positive_real_violations(&cloud);
    let golden = cloud.points.iter().any(|p| (p.re + 0.618_033_988_749_895).abs() < 1e-12 && p.im == 0.0);
    vec![
        check(
            "positivity",
            format!("no positive real Parry conjugate (depth {depth})"),
            pos.is_empty() && !cloud.is_empty(),
            format!("{} violations over {} points from {} sequences", pos.len(), cloud.len(), cloud.sources),
        ),
        check("positivity", "golden conjugate present", golden, ""),
    ]
}

pub fn membership_suite() -> Vec<Check> {
    let s = "membership";
    let (n, tol) = (40, 1e-9);
    let grid: Vec<f64> = (1..=100).map(|k| -(k as f64) / 101.0).collect();
    let verdicts: Vec<_> = grid
        .par_iter()
        .map(|&z| membership(Complex64::new(z, 0.0), CoeffBox::Unit, n, tol))
        .collect();
    let mut bad = Vec::new();
    for (&z, v) in grid.iter().zip(&verdicts) {
        let closed = extremal_min_real(z).expect("inside (-1, 0)");
        let tail = z.abs().powi(n as i32 + 1) / (1.0 - z.abs());
        let ok = match v {
            Ok(v) if closed <= -1e-6 => v.is_yes(),
            Ok(v) if closed >= tail + tol => v.is_no(),
            Ok(_) => true,
            Err(_) => false,
        };
        if !ok {
            bad.push(format!("z={z}: closed form {closed:e}, got {v:?}"));
        }
    }
    let mut out = vec![check(s, "spike grid agrees with closed form", bad.is_empty(), bad.join("; "))];
    let pos: Vec<_> = (1..20)
        .map(|k| membership(Complex64::new(k as f64 / 20.0, 0.0), CoeffBox::Unit, n, tol))
        .filter(|v| !matches!(v, Ok(v) if v.is_no()))
        .collect();
    out.push(check(s, "positive reals are never in G_[0,1]", pos.is_empty(), format!("{} exceptions", pos.len())));
    let mono = grid
        .iter()
        .filter(|&&z| extremal_min_real(z).unwrap() < -1e-3)
        .all(|&z| {
            let a = membership(Complex64::new(z, 0.0), CoeffBox::Unit, 20, tol).map(|v| v.is_yes());
            let b = membership(Complex64::new(z, 0.0), CoeffBox::Unit, 21, tol).map(|v| v.is_yes());
            a != Ok(true) || b == Ok(true)
        });
    out.push(check(s, "InnerYes persists from N = 20 to 21", mono, ""));
    let zero = membership(Complex64::new(0.0, 0.0), CoeffBox::Unit, n, tol);
    out.push(check(s, "z = 0 is excluded", matches!(zero, Ok(v) if v.is_no()), ""));
    out
}

pub fn chebyshev_suite(bits: usize) -> Vec<Check> {
    let s = "chebyshev";
    let mut out = Vec::new();
    let betas = [
        ("2.5", AlgebraicReal::from_rational(rat(5, 2))),
        ("3.3", AlgebraicReal::from_rational(rat(33, 10))),
        ("golden", AlgebraicReal::golden()),
    ];
    for (name, b) in &betas {
        match conjugacy_residual(b, 1000, bits) {
            Ok(r) => out.push(check(s, format!("conjugacy residual beta={name}"), r < 1e-9, format!("{r:e}"))),
            Err(e) => out.push(check(s, format!("conjugacy residual beta={name}"), false, e.to_string())),
        }
    }
    let poly_err = |k: i64, p: fn(f64) -> f64| -> f64 {
        let mut hp = HighPrec::new(bits).expect("bits >= 64");
        let b = hp.from_i64(k);
        (0..1000)
            .map(|i| -1.0 + 2.0 * i as f64 / 999.0)
            .map(|x| {
                let xf = hp.from_f64(x);
                let v = f_beta(&mut hp, &b, &xf).map(|y| to_f64(&y)).unwrap_or(f64::NAN);
                (v - p(x)).abs()
            })
            .fold(0.0, f64::max)
    };
    let e2 = poly_err(2, |x| 2.0 * x * x - 1.0);
    let e3 = poly_err(3, |x| 4.0 * x * x * x - 3.0 * x);
    out.push(check(s, "F_2 = 2x^2 - 1", e2 < 1e-12, format!("{e2:e}")));
    out.push(check(s, "F_3 = 4x^3 - 3x", e3 < 1e-12, format!("{e3:e}")));
    for (name, b) in [("golden", AlgebraicReal::golden()), ("2+sqrt2", AlgebraicReal::sqrt2_plus_2())] {
        let r = finite_orbit_consistency(&b, 200, bits);
        let (ok, detail) = match &r {
            Ok(rep) => (rep.status == Agreement::Agree, format!("{} {:?}", rep.exact_verdict, rep.status)),
            Err(e) => (false, e.to_string()),
        };
        out.push(check(s, format!("finite orbit consistency beta={name}"), ok, detail));
    }
    out
}

pub fn suite_checks(name: &str, seed: u64) -> Option<Vec<Check>> {
    Some(match name {
        "lemma2" => lemma2_suite(seed, 200),
        "lemma1" => lemma1_suite(seed, 50),
        "golden-bound" => golden_bound_suite(seed, 100),
        "positivity" => positivity_suite(8, 2000),
        "membership" => membership_suite(),
        "chebyshev" => chebyshev_suite(256),
        "all" => SUITES.iter().flat_map(|s| suite_checks(s, seed).expect("known suite")).collect(),
        _ => return None,
    })
}

pub fn run_suite(name: &str, seed: u64) -> Result<Output> {
    let Some(checks) = suite_checks(name, seed) else {
        return Err(crate::error::Error::Parse(format!(
            "unknown suite {name:?} (one of {}, all)",
            SUITES.join(", ")
        )));
    };
    let passed = checks.iter().all(|c| c.passed);
    let report = VerifyReport { suite: name.into(), seed, passed, checks };
    Ok(Output { text: to_json(&report), code: if passed { 0 } else { EXIT_ERROR } })
}
