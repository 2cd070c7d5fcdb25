//! Samples of the conjugate sets and membership tests for the zero sets
//! `G_I = { z in D : f(z) = 0 for some f = 1 + sum a_n z^n, a_n in I }`.

use std::fmt;
use std::str::FromStr;

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize};

use crate::algebraic::interval::{next_up, pow2, rational_to_f64_up, ComplexInterval, FixedInterval};
use crate::algebraic::{parse_rational, AlgebraicReal};
use crate::betamap::OrbitRecord;
use crate::construct::{parry_admissible, thm_a_yrrap_approx, thm_b_alt_approx, ParrySequence};
use crate::error::{Error, Result};
use crate::spectra::{all_roots, conjugates, strip_spurious, Minimality};

/// `(1 + sqrt 5) / 2`
pub const GOLDEN: f64 = 1.618_033_988_749_895;
pub const GOLDEN_TOL: f64 = 1e-9;

const ROOT_TOL: f64 = 1e-12;
const CERT_PREC: u64 = 160;

/// `min f(z)` over `f = 1 + sum a_n z^n` with `a_n in [0, 1]`, for real `z` in `(-1, 0)`.
/// The minimum puts `a_n = 1` at odd `n` and `0` elsewhere.
pub fn extremal_min_real(z: f64) -> Result<f64> {
    if !(z > -1.0 && z < 0.0) {
        return Err(Error::Domain(format!("z = {z} not in (-1, 0)")));
    }
    Ok(1.0 + z / (1.0 - z * z))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoeffBox {
    /// `[0, 1]`
    Unit,
    /// `[-1, 1]`
    Sym,
}

impl CoeffBox {
    pub fn bounds(self) -> (i64, i64) {
        match self {
            CoeffBox::Unit => (0, 1),
            CoeffBox::Sym => (-1, 1),
        }
    }
}

impl FromStr for CoeffBox {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit" => Ok(CoeffBox::Unit),
            "sym" => Ok(CoeffBox::Sym),
            _ => Err(Error::Parse(format!("unknown coefficient box {s:?} (unit|sym)"))),
        }
    }
}

impl fmt::Display for CoeffBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoeffBox::Unit => "unit",
            CoeffBox::Sym => "sym",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum MembershipVerdict {
    /// `|1 + sum_{n<=degree} witness[n-1] z^n| <= residual <= tol`, rigorously.
    InnerYes { witness: Vec<f64>, degree: usize, residual: f64 },
    /// Every `f` in the family has `|f(z)| >= lower_bound > tol`.
    No { lower_bound: f64 },
    Unknown { lp_min: f64, lower_bound: f64, tail: f64 },
}

impl MembershipVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, MembershipVerdict::InnerYes { .. })
    }

    pub fn is_no(&self) -> bool {
        matches!(self, MembershipVerdict::No { .. })
    }
}

fn f64_down(q: &BigRational) -> f64 {
    -rational_to_f64_up(&-q)
}

/// Upper bound of `max|a| |z|^(N+1) / (1 - |z|)`.
fn tail_bound(z: Complex64, n: usize, amax: i64) -> f64 {
    let q = |x: f64| BigRational::from_float(x).expect("finite");
    let r2 = q(z.re) * q(z.re) + q(z.im) * q(z.im);
    let r = next_up(rational_to_f64_up(&r2).sqrt());
    if r >= 1.0 {
        return f64::INFINITY;
    }
    let r = q(r);
    let t = r.pow((n + 1) as i32) / (BigRational::one() - r) * BigRational::from_integer(amax.into());
    rational_to_f64_up(&t)
}

fn powers(z: Complex64, n: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n);
    let mut p = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        p *= z;
        out.push(p);
    }
    out
}

/// `lr + sum min(lo g_n, hi g_n)` with `g_n = lr Re z^n + li Im z^n`, in floating point.
fn dual_value(pw: &[Complex64], (lo, hi): (i64, i64), lr: f64, li: f64) -> f64 {
    lr + pw
        .iter()
        .map(|p| {
            let g = lr * p.re + li * p.im;
            (lo as f64 * g).min(hi as f64 * g)
        })
        .sum::<f64>()
}

fn l1_dir(theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    let n = c.abs() + s.abs();
    (c / n, s / n)
}

/// Direction `lambda` on the unit l1-sphere maximizing the dual bound, by a grid sweep
/// refined around its best cell.
fn best_direction(pw: &[Complex64], bx: (i64, i64)) -> (f64, f64) {
    const GRID: usize = 2048;
    let tau = std::f64::consts::TAU;
    let eval = |t: f64| {
        let (a, b) = l1_dir(t);
        dual_value(pw, bx, a, b)
    };
    let mut best = (0.0, eval(0.0));
    for k in 1..GRID {
        let t = tau * k as f64 / GRID as f64;
        let v = eval(t);
        if v > best.1 {
            best = (t, v);
        }
    }
    let mut step = tau / GRID as f64;
    for _ in 0..40 {
        for t in [best.0 - step, best.0 + step] {
            let v = eval(t);
            if v > best.1 {
                best = (t, v);
            }
        }
        step *= 0.5;
    }
    l1_dir(best.0)
}

fn z_powers_enclosed(z: Complex64, n: usize) -> Vec<ComplexInterval> {
    let zi = ComplexInterval::from_f64(z.re, z.im, CERT_PREC);
    let mut out = Vec::with_capacity(n);
    let mut p = ComplexInterval::one(CERT_PREC);
    for _ in 0..n {
        p = p.mul(&zi, CERT_PREC);
        out.push(p.clone());
    }
    out
}

/// Rigorous lower bound of `min over the box of max(|Re f_N(z)|, |Im f_N(z)|)` from the
/// dual direction `lambda`.
fn certified_dual_bound(pw: &[ComplexInterval], bx: (i64, i64), (lr, li): (f64, f64)) -> f64 {
    let lri = FixedInterval::from_f64(lr, CERT_PREC);
    let lii = FixedInterval::from_f64(li, CERT_PREC);
    let (lo, hi) = (BigInt::from(bx.0), BigInt::from(bx.1));
    let mut s = lri.clone();
    for p in pw {
        let g = lri.mul(&p.re, CERT_PREC).add(&lii.mul(&p.im, CERT_PREC));
        s = s.add(&g.min_of_scaled(&lo, &hi));
    }
    let norm = next_up(lr.abs() + li.abs());
    let lb = BigRational::new(s.lo, pow2(CERT_PREC));
    if lb.is_positive() {
        f64_down(&(lb / BigRational::from_float(norm).expect("finite")))
    } else {
        f64_down(&lb)
    }
}

/// Upper bound of `|1 + sum a_n z^n|`.
fn certified_residual(pw: &[ComplexInterval], a: &[f64]) -> f64 {
    let mut re = FixedInterval::point(pow2(CERT_PREC));
    let mut im = FixedInterval::zero();
    for (p, &c) in pw.iter().zip(a) {
        let ci = FixedInterval::from_f64(c, CERT_PREC);
        re = re.add(&p.re.mul(&ci, CERT_PREC));
        im = im.add(&p.im.mul(&ci, CERT_PREC));
    }
    let q = |x: f64| BigRational::from_float(x).expect("finite");
    let r = q(re.mag_upper_f64(CERT_PREC));
    let i = q(im.mag_upper_f64(CERT_PREC));
    next_up(rational_to_f64_up(&(&r * &r + &i * &i)).sqrt())
}

/// Minimizes `max(|Re f_N(z)|, |Im f_N(z)|)` over the box; returns the value and coefficients.
fn primal_lp(pw: &[Complex64], (lo, hi): (i64, i64)) -> Option<(f64, Vec<f64>)> {
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let t = lp.add_var(1.0, (0.0, f64::INFINITY));
    let vars: Vec<_> = pw.iter().map(|_| lp.add_var(0.0, (lo as f64, hi as f64))).collect();
    for (part, c) in [(0usize, 1.0), (1, 0.0)] {
        let coef = |p: &Complex64| if part == 0 { p.re } else { p.im };
        let mut up: Vec<_> = vars.iter().zip(pw).map(|(&v, p)| (v, coef(p))).collect();
        up.push((t, -1.0));
        lp.add_constraint(up.as_slice(), ComparisonOp::Le, -c);
        let mut down: Vec<_> = vars.iter().zip(pw).map(|(&v, p)| (v, -coef(p))).collect();
        down.push((t, -1.0));
        lp.add_constraint(down.as_slice(), ComparisonOp::Le, c);
    }
    let sol = lp.solve().ok()?;
    let a = vars.iter().map(|&v| sol[v].clamp(lo as f64, hi as f64)).collect();
    Some((sol.objective(), a))
}

/// Decides whether `z` is (approximately) a zero of some `1 + sum a_n z^n` with
/// coefficients in the box. `No` is sound for the infinite family; `InnerYes` certifies
/// the degree-`n` polynomial witness up to `tol`.
pub fn membership(z: Complex64, bx: CoeffBox, n: usize, tol: f64) -> Result<MembershipVerdict> {
    if !(z.re.is_finite() && z.im.is_finite()) || z.norm_sqr() >= 1.0 {
        return Err(Error::Domain(format!("|z| must be < 1 (z = {z})")));
    }
    if n == 0 || !(tol > 0.0) {
        return Err(Error::Domain("degree and tolerance must be positive".into()));
    }
    if z == Complex64::new(0.0, 0.0) || (bx == CoeffBox::Unit && z.im == 0.0 && z.re > 0.0) {
        return Ok(MembershipVerdict::No { lower_bound: 1.0 });
    }
    let bounds = bx.bounds();
    let pw = powers(z, n);
    let enclosed = z_powers_enclosed(z, n);
    let lower_bound = certified_dual_bound(&enclosed, bounds, best_direction(&pw, bounds));
    let tail = tail_bound(z, n, bounds.0.abs().max(bounds.1.abs()));
    if lower_bound - tail > tol {
        return Ok(MembershipVerdict::No { lower_bound: f64_down(&(q_of(lower_bound) - q_of(tail))) });
    }
    let lp = primal_lp(&pw, bounds);
    if let Some((_, a)) = &lp {
        let residual = certified_residual(&enclosed, a);
        if residual <= tol {
            return Ok(MembershipVerdict::InnerYes { witness: a.clone(), degree: n, residual });
        }
    }
    Ok(MembershipVerdict::Unknown {
        lp_min: lp.map_or(f64::NAN, |(v, _)| v),
        lower_bound,
        tail,
    })
}

fn q_of(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CloudPoint {
    pub re: f64,
    pub im: f64,
    pub source_beta: f64,
    pub pattern: String,
    pub residual: f64,
}

impl CloudPoint {
    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CloudBounds {
    pub min_re: f64,
    pub max_re: f64,
    pub min_im: f64,
    pub max_im: f64,
    pub max_modulus: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SkippedSample {
    pub index: usize,
    pub reason: String,
}

/// Conjugates of a finite set of sources, in source order. `beta` itself is not included.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct PointCloud {
    pub points: Vec<CloudPoint>,
    pub bounds: CloudBounds,
    pub sources: usize,
    pub skipped: Vec<SkippedSample>,
}

impl PointCloud {
    pub fn new(points: Vec<CloudPoint>, sources: usize, skipped: Vec<SkippedSample>) -> Self {
        let mut b = CloudBounds::default();
        if !points.is_empty() {
            b = CloudBounds {
                min_re: f64::INFINITY,
                max_re: f64::NEG_INFINITY,
                min_im: f64::INFINITY,
                max_im: f64::NEG_INFINITY,
                max_modulus: 0.0,
            };
            for p in &points {
                b.min_re = b.min_re.min(p.re);
                b.max_re = b.max_re.max(p.re);
                b.min_im = b.min_im.min(p.im);
                b.max_im = b.max_im.max(p.im);
                b.max_modulus = b.max_modulus.max(p.modulus());
            }
        }
        Self { points, bounds: b, sources, skipped }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// CSV with header `re,im,source_beta,pattern,residual`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,source_beta,pattern,residual\n");
        for p in &self.points {
            out.push_str(&format!("{:?},{:?},{:?},{},{:e}\n", p.re, p.im, p.source_beta, p.pattern, p.residual));
        }
        out
    }

    /// Pushes a point by hand (negative controls, merging).
    pub fn push(&mut self, p: CloudPoint) {
        let mut pts = std::mem::take(&mut self.points);
        pts.push(p);
        *self = Self::new(pts, self.sources, std::mem::take(&mut self.skipped));
    }
}

type SourceResult = std::result::Result<Vec<CloudPoint>, String>;

fn assemble(results: Vec<SourceResult>) -> PointCloud {
    let sources = results.len();
    let mut points = Vec::new();
    let mut skipped = Vec::new();
    for (index, r) in results.into_iter().enumerate() {
        match r {
            Ok(p) => points.extend(p),
            Err(reason) => skipped.push(SkippedSample { index, reason }),
        }
    }
    PointCloud::new(points, sources, skipped)
}

fn orbit_points(rec: &OrbitRecord, tag: &str, certified_only: bool) -> SourceResult {
    let set = conjugates(rec, ROOT_TOL).map_err(|e| e.to_string())?;
    if certified_only && set.minimality != Minimality::EisensteinCertified {
        return Err(format!("polynomial {} not Eisenstein-certified", set.poly));
    }
    let b = rec.beta().to_f64();
    Ok(set
        .conjugates()
        .map(|r| CloudPoint { re: r.re(), im: r.im(), source_beta: b, pattern: tag.into(), residual: r.residual })
        .collect())
}

/// Cloud of the conjugates of the given finite orbits, tagged with their patterns.
pub fn cloud_from_orbits(records: &[OrbitRecord]) -> PointCloud {
    assemble(
        records
            .par_iter()
            .map(|r| orbit_points(r, &r.pattern.to_string(), false))
            .collect(),
    )
}

/// Admissible eventually zero sequences with `b_0 <= max_digit`, length at most `max_depth`,
/// ordered by length then lexicographically. Integer `b = (k)` is skipped.
pub fn parry_sequences(max_depth: usize, max_digit: u64, max_count: usize) -> Vec<ParrySequence> {
    let mut out = Vec::new();
    for len in 1..=max_depth {
        let mut cur = vec![0u64; len];
        loop {
            if out.len() >= max_count {
                return out;
            }
            if cur[0] >= 1 && cur[len - 1] >= 1 && len > 1 {
                let b = ParrySequence::new(cur.clone());
                if parry_admissible(&b) {
                    out.push(b);
                }
            }
            let mut i = len;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if cur[i] < max_digit {
                    cur[i] += 1;
                    break;
                }
                cur[i] = 0;
            }
            if cur.iter().all(|&d| d == 0) {
                break;
            }
        }
    }
    out
}

pub const PARRY_MAX_DIGIT: u64 = 2;

fn parry_points(b: &ParrySequence) -> SourceResult {
    let rev = b.f_poly().reversed();
    let beta = AlgebraicReal::largest_root_above(&rev, &BigRational::one())
        .ok_or_else(|| format!("no root above 1 for {:?}", b.b))?;
    if beta.is_integer() {
        return Err(format!("integer beta for {:?}", b.b));
    }
    let stripped = strip_spurious(&rev, &beta);
    let mut set = all_roots(&stripped, ROOT_TOL).map_err(|e| e.to_string())?;
    set.flag_beta(&beta);
    let bf = beta.to_f64();
    Ok(set
        .conjugates()
        .map(|r| CloudPoint { re: r.re(), im: r.im(), source_beta: bf, pattern: "e0".into(), residual: r.residual })
        .collect())
}

/// Conjugates of simple Parry numbers whose expansions of 1 have length `<= max_depth`
/// and leading digit `<= PARRY_MAX_DIGIT`, over at most `max_count` sequences.
pub fn cloud_parry(max_depth: usize, max_count: usize) -> PointCloud {
    let seqs = parry_sequences(max_depth, PARRY_MAX_DIGIT, max_count);
    assemble(seqs.par_iter().map(parry_points).collect())
}

fn de_rationals<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigRational>, D::Error> {
    let vals = Vec::<serde_json::Value>::deserialize(d)?;
    vals.iter().map(value_to_rational).collect::<std::result::Result<_, _>>().map_err(serde::de::Error::custom)
}

fn de_rational<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
    value_to_rational(&serde_json::Value::deserialize(d)?).map_err(serde::de::Error::custom)
}

fn value_to_rational(v: &serde_json::Value) -> std::result::Result<BigRational, String> {
    let s = match v {
        serde_json::Value::Number(n) => n.to_string(),
        serde_json::Value::String(s) => s.clone(),
        other => return Err(format!("expected a number or string, got {other}")),
    };
    parse_rational(&s).map_err(|e| e.to_string())
}

fn ser_rationals<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|q| q.to_string()))
}

fn ser_rational<S: serde::Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// One constructor call. Numbers may be JSON numbers (read as exact decimals) or
/// strings such as `"1/3"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    #[serde(deserialize_with = "de_rationals", serialize_with = "ser_rationals")]
    pub targets: Vec<BigRational>,
    #[serde(deserialize_with = "de_rational", serialize_with = "ser_rational")]
    pub eps: BigRational,
    /// Cumulative signs for the alternating constructor (default all `+1`); ignored otherwise.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub signs: Vec<i8>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub samples: Vec<Sample>,
}

impl SampleSpec {
    /// `count` samples of `1..=max_len` distinct targets `k/10`, eps `1/20`, random signs.
    pub fn random(count: usize, max_len: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples = (0..count)
            .map(|_| {
                let len = rng.gen_range(1..=max_len.clamp(1, 9));
                let mut pool: Vec<i64> = (1..=9).collect();
                let mut targets = Vec::with_capacity(len);
                for _ in 0..len {
                    let k = pool.remove(rng.gen_range(0..pool.len()));
                    targets.push(BigRational::new(k.into(), 10.into()));
                }
                let signs = (0..len).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
                Sample { targets, eps: BigRational::new(1.into(), 20.into()), signs }
            })
            .collect();
        Self { samples }
    }
}

/// Conjugates of `thm_a_yrrap_approx` outputs; failed or uncertified samples are skipped
/// and listed in `skipped`.
pub fn cloud_yrrap(spec: &SampleSpec) -> PointCloud {
    assemble(
        spec.samples
            .par_iter()
            .map(|s| {
                let a = thm_a_yrrap_approx(&s.targets, &s.eps).map_err(|e| e.to_string())?;
                orbit_points(&a.record, "e1", true)
            })
            .collect(),
    )
}

/// Conjugates of `thm_b_alt_approx` outputs with Eisenstein-certified polynomials.
pub fn cloud_alt(spec: &SampleSpec) -> PointCloud {
    assemble(
        spec.samples
            .par_iter()
            .map(|s| {
                let signs = if s.signs.is_empty() { vec![1; s.targets.len()] } else { s.signs.clone() };
                let a = thm_b_alt_approx(&s.targets, &signs, &s.eps).map_err(|e| e.to_string())?;
                orbit_points(&a.record, "alt", true)
            })
            .collect(),
    )
}

/// `(max modulus, max <= golden ratio + 1e-9)`.
pub fn check_golden_bound(cloud: &PointCloud) -> (f64, bool) {
    let m = cloud.points.iter().map(CloudPoint::modulus).fold(0.0, f64::max);
    (m, m <= GOLDEN + GOLDEN_TOL)
}

/// Points that are exactly real and positive (impossible for Parry conjugates).
pub fn positive_real_violations(cloud: &PointCloud) -> Vec<&CloudPoint> {
    cloud.points.iter().filter(|p| p.im == 0.0 && p.re > 0.0).collect()
}

/// Real points `< -1` (impossible for Yrrap conjugates).
pub fn negative_real_violations(cloud: &PointCloud) -> Vec<&CloudPoint> {
    cloud.points.iter().filter(|p| p.im == 0.0 && p.re < -1.0).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceStats {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub max: f64,
}

impl DistanceStats {
    fn of(mut d: Vec<f64>) -> Option<Self> {
        if d.is_empty() {
            return None;
        }
        d.sort_by(f64::total_cmp);
        let count = d.len();
        let median = if count % 2 == 1 { d[count / 2] } else { 0.5 * (d[count / 2 - 1] + d[count / 2]) };
        Some(Self { count, mean: d.iter().sum::<f64>() / count as f64, median, max: d[count - 1] })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReflectionSummary {
    pub band: (f64, f64),
    pub parry_in_band: usize,
    pub yrrap_in_band: usize,
    /// Distance from each Parry point to the nearest reflected Yrrap point.
    pub parry_to_reflected_yrrap: Option<DistanceStats>,
    pub yrrap_to_reflected_parry: Option<DistanceStats>,
}

fn nearest(from: &[(f64, f64)], to: &[(f64, f64)]) -> Vec<f64> {
    if to.is_empty() {
        return Vec::new();
    }
    from.par_iter()
        .map(|a| to.iter().map(|b| (a.0 - b.0).hypot(a.1 - b.1)).fold(f64::INFINITY, f64::min))
        .collect()
}

/// Compares the Parry cloud with the mirror image `z -> -conj(z)` of the Yrrap cloud and
/// vice versa, restricted to moduli in `band`. A diagnostic only.
pub fn reflection_compare(parry: &PointCloud, yrrap: &PointCloud, band: (f64, f64)) -> ReflectionSummary {
    let sel = |c: &PointCloud, reflect: bool| -> Vec<(f64, f64)> {
        c.points
            .iter()
            .filter(|p| (band.0..=band.1).contains(&p.modulus()))
            .map(|p| if reflect { (-p.re, p.im) } else { (p.re, p.im) })
            .collect()
    };
    let p = sel(parry, false);
    let y = sel(yrrap, false);
    let p_ref = sel(parry, true);
    let y_ref = sel(yrrap, true);
    ReflectionSummary {
        band,
        parry_in_band: p.len(),
        yrrap_in_band: y.len(),
        parry_to_reflected_yrrap: DistanceStats::of(nearest(&p, &y_ref)),
        yrrap_to_reflected_parry: DistanceStats::of(nearest(&y, &p_ref)),
    }
}
