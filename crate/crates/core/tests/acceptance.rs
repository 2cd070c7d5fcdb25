//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use genbeta::algebraic::{parse_rational, AlgebraicReal, BetaField, IntPoly};
use genbeta::betamap::{classify, orbit_of_one, SignPattern, Verdict};
use genbeta::chebyshev::{conjugacy_residual, f_beta_f64, finite_orbit_consistency, Agreement};
use genbeta::cli::verify::{lemma1_suite, lemma2_suite};
use genbeta::construct::{thm_a_yrrap_approx, thm_c_from_seed};
use genbeta::sets::{
    check_golden_bound, cloud_parry, cloud_yrrap, extremal_min_real, membership, negative_real_violations,
    positive_real_violations, CoeffBox, MembershipVerdict, SampleSpec,
};
use genbeta::spectra::{char_poly_of, conjugates, eisenstein_certificate, Minimality, Provenance};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Signed;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(t: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let e = t.elapsed();
    ensure(e < limit, format!("{what} took {e:?}, limit {limit:?}"))
}

fn q(s: &str) -> BigRational {
    parse_rational(s).unwrap()
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

fn golden_parry() -> Outcome {
    let t = Instant::now();
    let rec = orbit_of_one(&AlgebraicReal::golden(), &SignPattern::e0(), 100).map_err(|e| e.to_string())?;
    ensure(rec.verdict == Verdict::Simple { n: 1, k0: 1 }, format!("verdict {}", rec.verdict))?;
    let cp = char_poly_of(&rec).map_err(|e| e.to_string())?;
    ensure(cp.poly == IntPoly::from_i64s(&[-1, -1, 1]), format!("char poly {}", cp.poly))?;
    let set = conjugates(&rec, 1e-12).map_err(|e| e.to_string())?;
    let c: Vec<_> = set.conjugates().collect();
    let oracle = (1.0 - 5f64.sqrt()) / 2.0;
    ensure(c.len() == 1 && (c[0].re() - oracle).abs() < 1e-10, format!("conjugates {c:?}"))?;
    within(t, Duration::from_secs(1), "golden Parry")?;
    Ok(format!("Simple{{N=1,k0=1}}, {}, conjugate {:.10}, {:?}", cp.poly, c[0].re(), t.elapsed()))
}

fn golden_yrrap() -> Outcome {
    let rec = orbit_of_one(&AlgebraicReal::golden(), &SignPattern::e1(), 100).map_err(|e| e.to_string())?;
    ensure(
        rec.verdict == Verdict::EventuallyPeriodic { preperiod: 1, period: 1 },
        format!("verdict {}", rec.verdict),
    )?;
    let cp = char_poly_of(&rec).map_err(|e| e.to_string())?;
    ensure(cp.provenance == Provenance::PeriodicNumerator, "provenance")?;
    ensure(cp.poly == IntPoly::from_i64s(&[-1, -1, 1]), format!("char poly {}", cp.poly))?;
    let set = conjugates(&rec, 1e-12).map_err(|e| e.to_string())?;
    let m = set.conjugates().map(|r| r.modulus()).fold(0.0, f64::max);
    ensure((m - INV_PHI).abs() < 1e-12 && m <= (1.0 + 5f64.sqrt()) / 2.0, format!("modulus {m}"))?;
    Ok(format!("EventuallyPeriodic{{1,1}}, {}, conjugate modulus {m:.10}", cp.poly))
}

fn lemma2_property() -> Outcome {
    let t = Instant::now();
    let checks = lemma2_suite(20_240_601, 200);
    ensure(checks.iter().all(|c| c.passed), format!("{:?}", checks))?;
    within(t, Duration::from_secs(120), "200 identities")?;
    Ok(format!("{} in {:?}", checks[0].detail, t.elapsed()))
}

fn lemma1_round_trip() -> Outcome {
    let t = Instant::now();
    let checks = lemma1_suite(20_240_601, 50);
    ensure(checks.iter().all(|c| c.passed), format!("{:?}", checks))?;
    within(t, Duration::from_secs(60), "50 replays")?;
    Ok(format!("{} in {:?}", checks[0].detail, t.elapsed()))
}

fn yrrap_constructor() -> Outcome {
    let t = Instant::now();
    let targets = [q("0.25"), q("0.5"), q("0.75")];
    let eps = q("0.05");
    let a = thm_a_yrrap_approx(&targets, &eps).map_err(|e| e.to_string())?;
    // Independent replay under E_1.
    let rec = orbit_of_one(&a.beta, &SignPattern::e1(), 50).map_err(|e| e.to_string())?;
    ensure(matches!(rec.verdict, Verdict::Simple { .. }), format!("verdict {}", rec.verdict))?;
    let fl = a.beta.floor();
    ensure(fl.is_odd_int(), format!("floor {fl}"))?;
    let f = BetaField::new(a.beta.clone());
    for (k, target) in targets.iter().enumerate() {
        let x = &rec.steps[k + 1].point;
        let lo = f.from_rational(target - &eps);
        let hi = f.from_rational(target + &eps);
        ensure(f.cmp(x, &lo).is_gt() && f.cmp(x, &hi).is_lt(), format!("tau^{}(1) = {}", k + 1, f.to_f64(x)))?;
    }
    let cp = char_poly_of(&rec).map_err(|e| e.to_string())?;
    ensure(eisenstein_certificate(&cp.poly, &BigInt::from(2)), format!("{} not Eisenstein at 2", cp.poly))?;
    within(t, Duration::from_secs(30), "constructor")?;
    Ok(format!("beta ~ {:.6}, [beta] = {fl}, {}, {:?}", a.beta.to_f64(), cp.poly, t.elapsed()))
}

trait OddInt {
    fn is_odd_int(&self) -> bool;
}

impl OddInt for BigInt {
    fn is_odd_int(&self) -> bool {
        (self % 2i32).abs() == BigInt::from(1)
    }
}

fn non_yrrap_certificate() -> Outcome {
    let t = Instant::now();
    let cert = thm_c_from_seed(&AlgebraicReal::golden(), 1, 2).map_err(|e| e.to_string())?;
    let mut b = cert.b.b.clone();
    b.resize(10, 0);
    ensure(b == [1, 1, 0, 1, 0, 0, 0, 1, 0, 0], format!("b = {b:?}"))?;
    // f(-1) = 1 - sum b_n (-1)^(n+1), evaluated here directly.
    let f_m1: i64 = 1 - b.iter().enumerate().map(|(n, &d)| d as i64 * if n % 2 == 0 { -1 } else { 1 }).sum::<i64>();
    ensure(f_m1 == -1 && cert.f_at_minus_one == "-1", format!("f(-1) = {f_m1} / {}", cert.f_at_minus_one))?;
    let r = &cert.neg_root;
    ensure(r.lo() >= &q("-1") && r.hi() <= &q("0"), "root outside (-1, 0)")?;
    ensure(r.width() <= q("1/10000000000"), format!("width {}", r.width()))?;
    ensure(r.poly().sign_at(r.lo()) != r.poly().sign_at(r.hi()), "no sign change on the isolating interval")?;
    let v = classify(&cert.beta, &SignPattern::e0(), 1000).map_err(|e| e.to_string())?;
    ensure(v.is_finite(), format!("E_0 verdict {v}"))?;
    ensure(cert.caveat == Minimality::BestEffort, format!("caveat {:?}", cert.caveat))?;
    within(t, Duration::from_secs(30), "certificate")?;
    Ok(format!("beta ~ {:.10}, root ~ {:.10}, E_0 {v}, {:?}", cert.beta_approx, cert.neg_root_approx, t.elapsed()))
}

fn spike_endpoint() -> Outcome {
    let (mut lo, mut hi) = (-0.9f64, -0.3f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if extremal_min_real(mid).unwrap() > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let target = (1.0 - 5f64.sqrt()) / 2.0;
    ensure((lo - target).abs() < 1e-12, format!("zero at {lo}, expected {target}"))?;
    let (n, tol) = (40, 1e-9);
    let mut checked = 0;
    for k in 1..=100 {
        let z = -(k as f64) / 101.0;
        let closed = extremal_min_real(z).unwrap();
        let tail = z.abs().powi(n as i32 + 1) / (1.0 - z.abs());
        let v = membership(Complex64::new(z, 0.0), CoeffBox::Unit, n, tol).map_err(|e| e.to_string())?;
        if closed <= -1e-6 {
            ensure(v.is_yes(), format!("z = {z}: closed form {closed:e} but {v:?}"))?;
            checked += 1;
        } else if closed >= tail {
            ensure(v.is_no(), format!("z = {z}: closed form {closed:e} but {v:?}"))?;
            checked += 1;
        }
    }
    Ok(format!("zero at {lo:.15}, {checked}/100 grid points decided in agreement"))
}

/// `min Re f(iy)` over the unit box: `1 - y^2 / (1 - y^4)`.
fn imaginary_axis_floor(y: f64) -> f64 {
    1.0 - y * y / (1.0 - y.powi(4))
}

fn disk_membership() -> Outcome {
    let mut problems = Vec::new();
    let mut found = Vec::new();
    for (re, im) in [(0.0, 0.5), (0.0, 0.55), (0.3, 0.4)] {
        let v = membership(Complex64::new(re, im), CoeffBox::Unit, 40, 1e-9).map_err(|e| e.to_string())?;
        found.push(format!("{re}+{im}i -> {v:?}"));
        if !v.is_yes() {
            let note = if re == 0.0 {
                format!(" (min Re f = {:.6} > 0 over the whole family)", imaginary_axis_floor(im))
            } else {
                String::new()
            };
            problems.push(format!("{re}+{im}i is not InnerYes{note}"));
        }
    }
    for z in [0.3, 0.0] {
        let v = membership(Complex64::new(z, 0.0), CoeffBox::Unit, 40, 1e-9).map_err(|e| e.to_string())?;
        if v != (MembershipVerdict::No { lower_bound: 1.0 }) {
            problems.push(format!("z = {z}: {v:?}"));
        }
    }
    if problems.is_empty() {
        Ok(found.join("; "))
    } else {
        Err(format!("{}; computed: {}", problems.join("; "), found.join("; ")))
    }
}

fn positivity_and_golden_bound() -> Outcome {
    let parry = cloud_parry(8, 2000);
    let pos = positive_real_violations(&parry);
    ensure(!parry.is_empty() && pos.is_empty(), format!("{} positive real Parry conjugates", pos.len()))?;
    let y = cloud_yrrap(&SampleSpec::random(100, 4, 20_240_601));
    ensure(y.skipped.is_empty(), format!("skipped {:?}", y.skipped))?;
    let neg = negative_real_violations(&y);
    ensure(neg.is_empty(), format!("{} negative real Yrrap conjugates beyond -1", neg.len()))?;
    let (m, pass) = check_golden_bound(&y);
    ensure(pass && m <= 1.618_033_988_8, format!("max modulus {m}"))?;
    Ok(format!(
        "Parry {} points / {} sequences, Yrrap {} points / {} samples, max modulus {m:.10}",
        parry.len(),
        parry.sources,
        y.len(),
        y.sources
    ))
}

fn chebyshev() -> Outcome {
    let mut parts = Vec::new();
    for (name, b) in [
        ("2.5", AlgebraicReal::from_rational(q("5/2"))),
        ("3.3", AlgebraicReal::from_rational(q("33/10"))),
        ("golden", AlgebraicReal::golden()),
    ] {
        let r = conjugacy_residual(&b, 1000, 256).map_err(|e| e.to_string())?;
        ensure(r < 1e-9, format!("residual {r:e} for {name}"))?;
        parts.push(format!("{name}: {r:.1e}"));
    }
    let err = (0..1000)
        .map(|i| -1.0 + 2.0 * i as f64 / 999.0)
        .map(|x| (f_beta_f64(2.0, x).unwrap() - (2.0 * x * x - 1.0)).abs())
        .fold(0.0, f64::max);
    ensure(err < 1e-12, format!("F_2 error {err:e}"))?;
    for (name, b) in [("golden", AlgebraicReal::golden()), ("2+sqrt2", AlgebraicReal::sqrt2_plus_2())] {
        let rep = finite_orbit_consistency(&b, 200, 256).map_err(|e| e.to_string())?;
        ensure(rep.status == Agreement::Agree, format!("{name}: {:?}", rep.status))?;
        parts.push(format!("{name} {} agrees", rep.exact_verdict));
    }
    Ok(format!("{}, F_2 error {err:.1e}", parts.join(", ")))
}

fn run_bin(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_genbeta")).args(args).output().map_err(|e| e.to_string())?;
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let a = run_bin(&["--seed", "11", "--threads", "8", "verify", "all"])?;
    let b = run_bin(&["--seed", "11", "--threads", "2", "verify", "all"])?;
    ensure(!a.is_empty() && a == b, "verify all reports differ")?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let p1 = dir.path().join("t1.csv");
    let p8 = dir.path().join("t8.csv");
    for (threads, p) in [("1", &p1), ("8", &p8)] {
        run_bin(&["--threads", threads, "--out", p.to_str().unwrap(), "cloud", "--pattern", "e1", "--random", "40"])?;
    }
    let c1 = std::fs::read(&p1).map_err(|e| e.to_string())?;
    let c8 = std::fs::read(&p8).map_err(|e| e.to_string())?;
    ensure(c1.len() > 40 && c1 == c8, "cloud CSV differs between 1 and 8 threads")?;
    Ok(format!("verify all: {} identical bytes; cloud CSV: {} identical bytes", a.len(), c1.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("golden ratio Parry fixture", golden_parry),
        ("golden ratio Yrrap fixture", golden_yrrap),
        ("generating-function identity, 200 random cases", lemma2_property),
        ("digit-vector round trip, 50 random cases", lemma1_round_trip),
        ("odd Yrrap constructor (0.25, 0.5, 0.75)", yrrap_constructor),
        ("non-Yrrap Parry certificate from golden seed", non_yrrap_certificate),
        ("spike endpoint and real-axis membership", spike_endpoint),
        ("disk membership fixtures", disk_membership),
        ("positivity, negativity and golden bound", positivity_and_golden_bound),
        ("Chebyshev conjugacy and finite orbits", chebyshev),
        ("deterministic reports and clouds", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("acceptance {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("acceptance {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
