use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebraic::AlgebraicReal;
use crate::betamap::{orbit_of_one, OrbitRecord, SignPattern, Verdict};
use crate::chebyshev::{conjugacy_residual, finite_orbit_consistency, ConsistencyReport};
use crate::construct::{
    lemma1_beta, thm_a_yrrap_approx, thm_b_alt_approx, thm_c_from_seed, Approximation, DigitVector,
    NonYrrapCertificate,
};
use crate::error::{Error, Result};
use crate::highprec::{approx_tau_orbit, ApproxOrbit};
use crate::sets::{cloud_alt, cloud_parry, cloud_yrrap, membership, CoeffBox, MembershipVerdict, SampleSpec};
use crate::spectra::{char_poly_of, conjugates as conjugate_set, CharPoly};

use super::{parse_list, parse_rationals, to_json, BetaArgs, ConstructCmd, OrbitArgs, Output, EXIT_ERROR, EXIT_UNRESOLVED};

const RESIDUAL_LIMIT: f64 = 1e-9;

fn finite_orbit(a: &OrbitArgs) -> Result<OrbitRecord> {
    let rec = orbit_of_one(&a.beta.resolve()?, &a.pattern()?, a.max_steps)?;
    if let Verdict::Unresolved { max_steps } = rec.verdict {
        return Err(Error::UnresolvedOrbit { max_steps });
    }
    Ok(rec)
}

pub(crate) fn classify(a: &OrbitArgs) -> Result<Output> {
    let rec = orbit_of_one(&a.beta.resolve()?, &a.pattern()?, a.max_steps)?;
    let code = if rec.verdict.is_finite() { 0 } else { EXIT_UNRESOLVED };
    Ok(Output { text: to_json(&rec), code })
}

#[derive(Serialize)]
struct CharPolyReport<'a> {
    verdict: &'a Verdict,
    char_poly: CharPoly,
}

pub(crate) fn charpoly(a: &OrbitArgs) -> Result<Output> {
    let rec = finite_orbit(a)?;
    let char_poly = char_poly_of(&rec)?;
    Ok(Output::ok(to_json(&CharPolyReport { verdict: &rec.verdict, char_poly })))
}

pub(crate) fn conjugates(a: &OrbitArgs, tol: f64, format: &str) -> Result<Output> {
    let rec = finite_orbit(a)?;
    let set = conjugate_set(&rec, tol)?;
    match format {
        "csv" => Ok(Output::ok(set.to_csv())),
        "json" => Ok(Output::ok(to_json(&set))),
        other => Err(Error::Parse(format!("unknown format {other:?} (csv|json)"))),
    }
}

#[derive(Serialize)]
struct Lemma1Report {
    m: Vec<i64>,
    #[serde(serialize_with = "crate::spectra::phi::ser_poly")]
    polynomial: crate::algebraic::IntPoly,
    orbit: OrbitRecord,
}

#[derive(Serialize)]
struct ApproxReport {
    approximation: Approximation,
    char_poly: CharPoly,
    orbit: OrbitRecord,
}

#[derive(Serialize)]
struct NonYrrapReport {
    certificate: NonYrrapCertificate,
    approx_e1_orbit: ApproxOrbit,
}

fn approx_report(a: Approximation) -> Result<Output> {
    let char_poly = char_poly_of(&a.record)?;
    let orbit = a.record.clone();
    Ok(Output::ok(to_json(&ApproxReport { approximation: a, char_poly, orbit })))
}

fn one_rational(s: &str) -> Result<num_rational::BigRational> {
    crate::algebraic::parse_rational(s)
}

pub(crate) fn construct(c: &ConstructCmd, precision: usize) -> Result<Output> {
    match c {
        ConstructCmd::Lemma1 { m } => {
            let dv = DigitVector::new(parse_list(m, "digit", |t| t.parse::<i64>().ok())?)?;
            let (_, orbit) = lemma1_beta(&dv)?;
            Ok(Output::ok(to_json(&Lemma1Report { polynomial: dv.polynomial(), m: dv.m, orbit })))
        }
        ConstructCmd::Thma { targets, eps } => {
            approx_report(thm_a_yrrap_approx(&parse_rationals(targets)?, &one_rational(eps)?)?)
        }
        ConstructCmd::Thmb { targets, signs, eps } => {
            let signs = parse_list(signs, "sign", |t| t.parse::<i8>().ok())?;
            approx_report(thm_b_alt_approx(&parse_rationals(targets)?, &signs, &one_rational(eps)?)?)
        }
        ConstructCmd::Nonyrrap { seed, n, m, approx_steps } => {
            let certificate = thm_c_from_seed(&seed.resolve()?, *n, *m)?;
            let approx_e1_orbit = approx_tau_orbit(&certificate.beta, &SignPattern::e1(), *approx_steps, precision)?;
            Ok(Output::ok(to_json(&NonYrrapReport { certificate, approx_e1_orbit })))
        }
    }
}

#[derive(Serialize)]
struct MemberReport {
    z: (f64, f64),
    #[serde(rename = "box")]
    coeff_box: CoeffBox,
    degree: usize,
    tol: f64,
    verdict: MembershipVerdict,
}

pub(crate) fn member(z: &str, coeff_box: &str, degree: usize, tol: f64) -> Result<Output> {
    let parts = parse_list(z, "coordinate", |t| t.parse::<f64>().ok())?;
    let [re, im] = parts[..] else {
        return Err(Error::Parse(format!("--z needs re,im, got {z:?}")));
    };
    let bx: CoeffBox = coeff_box.parse()?;
    let verdict = membership(Complex64::new(re, im), bx, degree, tol)?;
    Ok(Output::ok(to_json(&MemberReport { z: (re, im), coeff_box: bx, degree, tol, verdict })))
}

pub(crate) fn cloud(
    pattern: &str,
    spec: Option<&Path>,
    random: usize,
    depth: usize,
    max_count: usize,
    seed: u64,
) -> Result<Output> {
    let load = || -> Result<SampleSpec> {
        match spec {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Error::Parse(format!("reading {}: {e}", p.display())))?;
                serde_json::from_str(&text).map_err(|e| Error::Parse(format!("sample spec: {e}")))
            }
            None => Ok(SampleSpec::random(random, 4, seed)),
        }
    };
    let cloud = match pattern {
        "e0" => cloud_parry(depth, max_count),
        "e1" => cloud_yrrap(&load()?),
        "alt" => cloud_alt(&load()?),
        other => return Err(Error::Parse(format!("unknown cloud pattern {other:?} (e0|e1|alt)"))),
    };
    for s in &cloud.skipped {
        eprintln!("skipped sample {}: {}", s.index, s.reason);
    }
    Ok(Output::ok(cloud.to_csv()))
}

#[derive(Serialize)]
struct ChebyshevReport {
    beta: AlgebraicReal,
    beta_approx: f64,
    samples: usize,
    precision_bits: usize,
    conjugacy_residual: f64,
    residual_ok: bool,
    consistency: ConsistencyReport,
}

pub(crate) fn chebyshev(beta: &BetaArgs, samples: usize, bits: usize, max_steps: usize) -> Result<Output> {
    let b = beta.resolve()?;
    let residual = conjugacy_residual(&b, samples, bits)?;
    let consistency = finite_orbit_consistency(&b, max_steps, bits)?;
    let residual_ok = residual < RESIDUAL_LIMIT;
    if !residual_ok {
        eprintln!("WARNING: conjugacy residual {residual:e} exceeds {RESIDUAL_LIMIT:e}; h(x) = cos(pi x) fails here");
    }
    let report = ChebyshevReport {
        beta_approx: b.to_f64(),
        beta: b,
        samples,
        precision_bits: bits,
        conjugacy_residual: residual,
        residual_ok,
        consistency,
    };
    Ok(Output { text: to_json(&report), code: if residual_ok { 0 } else { EXIT_ERROR } })
}
