//! The generalized beta-map `tau(x) = E(i) + (-1)^E(i) (beta x - i)`, `i = floor(beta x)`,
//! and the exact orbit of 1.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::algebraic::{AlgebraicReal, BetaElement, BetaField};
use crate::error::{Error, Result};

/// An eventually periodic 0-1 sequence `E`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignPattern {
    preperiod: Vec<u8>,
    period: Vec<u8>,
}

impl SignPattern {
    pub fn new(preperiod: Vec<u8>, period: Vec<u8>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Domain("sign pattern period must be nonempty".into()));
        }
        if preperiod.iter().chain(&period).any(|&b| b > 1) {
            return Err(Error::Domain("sign pattern symbols must be 0 or 1".into()));
        }
        Ok(Self { preperiod, period })
    }

    /// `(0, 0, 0, ...)`: the beta-transformation.
    pub fn e0() -> Self {
        Self { preperiod: vec![], period: vec![0] }
    }

    /// `(1, 1, 1, ...)`: the negative beta-transformation.
    pub fn e1() -> Self {
        Self { preperiod: vec![], period: vec![1] }
    }

    /// `(0, 1, 0, 1, ...)`: odd branches flipped, the continuous map.
    pub fn alt() -> Self {
        Self { preperiod: vec![], period: vec![0, 1] }
    }

    pub fn preperiod(&self) -> &[u8] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    pub fn at(&self, i: usize) -> u8 {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    /// The first `len` symbols as a preperiod, followed by zeros.
    pub fn truncated(&self, len: usize) -> Self {
        Self { preperiod: (0..len).map(|i| self.at(i)).collect(), period: vec![0] }
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = |w: &[u8]| w.iter().map(|b| char::from(b'0' + b)).collect::<String>();
        if self.preperiod.is_empty() {
            match self.period.as_slice() {
                [0] => return write!(f, "e0"),
                [1] => return write!(f, "e1"),
                [0, 1] => return write!(f, "alt"),
                _ => {}
            }
        }
        write!(f, "custom:{}/{}", word(&self.preperiod), word(&self.period))
    }
}

impl FromStr for SignPattern {
    type Err = Error;

    /// `e0`, `e1`, `alt`, or `custom:PRE/PER` with words over `{0,1}` (PRE may be empty).
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "e0" | "E0" => Ok(Self::e0()),
            "e1" | "E1" => Ok(Self::e1()),
            "alt" | "ealt" | "Ealt" => Ok(Self::alt()),
            other => {
                let body = other
                    .strip_prefix("custom:")
                    .ok_or_else(|| Error::Parse(format!("unknown sign pattern {other:?}")))?;
                let (pre, per) = body
                    .split_once('/')
                    .ok_or_else(|| Error::Parse(format!("custom pattern needs PRE/PER: {other:?}")))?;
                let word = |w: &str| -> Result<Vec<u8>> {
                    w.chars()
                        .map(|c| match c {
                            '0' => Ok(0),
                            '1' => Ok(1),
                            _ => Err(Error::Parse(format!("bad pattern symbol {c:?}"))),
                        })
                        .collect()
                };
                Self::new(word(pre)?, word(per)?)
            }
        }
    }
}

impl Serialize for SignPattern {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitStep {
    /// `tau^n(1)`
    pub point: BetaElement,
    /// `d_n`
    pub digit: i64,
    /// `e_n`
    pub sign: i8,
    /// `s_n = e_0 ... e_{n-1}`
    pub cum_sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Verdict {
    /// `tau^N(1) = k0 / beta` with `N >= 1` minimal.
    Simple {
        #[serde(rename = "N")]
        n: usize,
        k0: i64,
    },
    /// `tau^p(1) = tau^(p + l)(1)` with `p`, `l` minimal.
    EventuallyPeriodic { preperiod: usize, period: usize },
    Unresolved { max_steps: usize },
}

impl Verdict {
    pub fn is_finite(&self) -> bool {
        !matches!(self, Verdict::Unresolved { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Simple { n, k0 } => write!(f, "Simple{{N={n}, k0={k0}}}"),
            Verdict::EventuallyPeriodic { preperiod, period } => {
                write!(f, "EventuallyPeriodic{{p={preperiod}, l={period}}}")
            }
            Verdict::Unresolved { max_steps } => write!(f, "Unresolved{{max_steps={max_steps}}}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct OrbitRecord {
    pub field: Arc<BetaField>,
    pub pattern: SignPattern,
    pub steps: Vec<OrbitStep>,
    pub verdict: Verdict,
}

impl OrbitRecord {
    pub fn beta(&self) -> &AlgebraicReal {
        self.field.beta()
    }

    pub fn digits(&self) -> Vec<i64> {
        self.steps.iter().map(|s| s.digit).collect()
    }

    pub fn signs(&self) -> Vec<i8> {
        self.steps.iter().map(|s| s.sign).collect()
    }

    pub fn cum_signs(&self) -> Vec<i8> {
        self.steps.iter().map(|s| s.cum_sign).collect()
    }

    pub fn points_f64(&self) -> Vec<f64> {
        self.steps.iter().map(|s| self.field.to_f64(&s.point)).collect()
    }
}

#[derive(Serialize)]
struct OrbitRecordJson<'a> {
    beta: &'a AlgebraicReal,
    beta_approx: f64,
    pattern: &'a SignPattern,
    verdict: &'a Verdict,
    digits: Vec<i64>,
    signs: Vec<i8>,
    cum_signs: Vec<i8>,
    points: Vec<Vec<String>>,
    points_approx: Vec<f64>,
}

impl Serialize for OrbitRecord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OrbitRecordJson {
            beta: self.beta(),
            beta_approx: self.beta().to_f64(),
            pattern: &self.pattern,
            verdict: &self.verdict,
            digits: self.digits(),
            signs: self.signs(),
            cum_signs: self.cum_signs(),
            points: self
                .steps
                .iter()
                .map(|st| st.point.coeffs().iter().map(|c| c.to_string()).collect())
                .collect(),
            points_approx: self.points_f64(),
        }
        .serialize(s)
    }
}

/// Rejects `beta <= 1` and integer `beta`.
pub fn validate_beta(beta: &AlgebraicReal) -> Result<()> {
    if beta.cmp_rational(&num_rational::BigRational::one()) != Ordering::Greater {
        return Err(Error::Domain(format!("beta must exceed 1 (got {})", beta.to_f64())));
    }
    if beta.is_integer() {
        return Err(Error::NonIntegerRequired(beta.floor().to_string()));
    }
    Ok(())
}

struct Step {
    next: BetaElement,
    /// `I_beta(x) = floor(beta x)`
    index: i64,
    digit: i64,
    sign: i8,
    /// `beta x - index`, the beta-transformation image
    frac: BetaElement,
}

fn check_unit(field: &BetaField, x: &BetaElement) -> Result<()> {
    if field.sign(x) == Ordering::Less || field.cmp(x, &field.one()) == Ordering::Greater {
        return Err(Error::Domain(format!("point {} is outside [0, 1]", field.to_f64(x))));
    }
    Ok(())
}

fn step(field: &BetaField, pattern: &SignPattern, x: &BetaElement) -> Result<Step> {
    let bx = field.mul_beta(x);
    let i = field.floor(&bx);
    let index = i
        .to_i64()
        .filter(|v| *v >= 0 && *v < (1 << 62))
        .ok_or_else(|| Error::Domain(format!("branch index {i} out of range")))?;
    let frac = field.add_int(&bx, &-&i);
    let e = pattern.at(index as usize);
    let next = if e == 0 { frac.clone() } else { field.add_int(&field.neg(&frac), &BigInt::one()) };
    Ok(Step {
        next,
        index,
        digit: index + i64::from(e),
        sign: if e == 0 { 1 } else { -1 },
        frac,
    })
}

/// One application of `tau_{beta,E}` to `x` in `[0, 1]`: `(tau(x), d, e)`.
pub fn tau_step(field: &BetaField, pattern: &SignPattern, x: &BetaElement) -> Result<(BetaElement, i64, i8)> {
    validate_beta(field.beta())?;
    check_unit(field, x)?;
    let s = step(field, pattern, x)?;
    Ok((s.next, s.digit, s.sign))
}

/// Digits `s_i d_i` for `i < n` and the tail `tau^n(x)`, so that
/// `x = sum s_i d_i / beta^(i+1) + s_n tau^n(x) / beta^n`.
pub fn expand_point(
    field: &BetaField,
    pattern: &SignPattern,
    x: &BetaElement,
    n: usize,
) -> Result<(Vec<i64>, BetaElement, i8)> {
    validate_beta(field.beta())?;
    check_unit(field, x)?;
    let mut x = x.clone();
    let mut s: i8 = 1;
    let mut coeffs = Vec::with_capacity(n);
    for _ in 0..n {
        let st = step(field, pattern, &x)?;
        coeffs.push(i64::from(s) * st.digit);
        s *= st.sign;
        x = st.next;
    }
    Ok((coeffs, x, s))
}

/// Exact points `tau^0(1), ..., tau^n(1)` with digits and signs, no termination test.
pub fn orbit_prefix(field: &BetaField, pattern: &SignPattern, n: usize) -> Result<Vec<OrbitStep>> {
    validate_beta(field.beta())?;
    let mut out = Vec::with_capacity(n + 1);
    let mut x = field.one();
    let mut s: i8 = 1;
    for k in 0..=n {
        let st = step(field, pattern, &x)?;
        out.push(OrbitStep { point: x, digit: st.digit, sign: st.sign, cum_sign: s });
        s *= st.sign;
        if k < n {
            x = st.next;
        } else {
            break;
        }
    }
    Ok(out)
}

/// Points already visited, keyed exactly and by approximate value. The approximate
/// index catches equal values with different coordinates, which only happens while
/// the defining polynomial of beta is reducible.
struct Visited {
    exact: HashMap<BetaElement, usize>,
    buckets: HashMap<i64, Vec<usize>>,
    points: Vec<BetaElement>,
}

const BUCKET: f64 = 1e9;

impl Visited {
    fn new() -> Self {
        Self { exact: HashMap::new(), buckets: HashMap::new(), points: Vec::new() }
    }

    fn find(&self, field: &BetaField, x: &BetaElement, approx: f64) -> Option<usize> {
        if let Some(&j) = self.exact.get(x) {
            return Some(j);
        }
        let k = (approx * BUCKET).floor() as i64;
        let mut cands: Vec<usize> = (k - 1..=k + 1)
            .filter_map(|b| self.buckets.get(&b))
            .flatten()
            .copied()
            .collect();
        cands.sort_unstable();
        cands
            .into_iter()
            .find(|&j| field.is_zero_value(&field.sub(x, &self.points[j])))
    }

    fn insert(&mut self, x: BetaElement, approx: f64) {
        let j = self.points.len();
        self.exact.insert(x.clone(), j);
        self.buckets.entry((approx * BUCKET).floor() as i64).or_default().push(j);
        self.points.push(x);
    }
}

fn run_orbit(field: Arc<BetaField>, pattern: &SignPattern, max_steps: usize, stop_at_ep: bool) -> Result<OrbitRecord> {
    let mut steps: Vec<OrbitStep> = Vec::new();
    let mut visited = Visited::new();
    let mut x = field.one();
    visited.insert(x.clone(), 1.0);
    let mut s: i8 = 1;
    let mut n = 0;
    let verdict = loop {
        let st = step(&field, pattern, &x)?;
        if stop_at_ep && n >= 1 && st.index >= 1 && field.sign(&st.frac) == Ordering::Equal {
            steps.push(OrbitStep { point: x, digit: st.digit, sign: st.sign, cum_sign: s });
            break Verdict::Simple { n, k0: st.index };
        }
        steps.push(OrbitStep { point: x, digit: st.digit, sign: st.sign, cum_sign: s });
        s *= st.sign;
        if n == max_steps {
            break Verdict::Unresolved { max_steps };
        }
        let next = st.next;
        let approx = field.to_f64(&next);
        if let Some(j) = visited.find(&field, &next, approx) {
            let prev = &steps[j];
            steps.push(OrbitStep { point: next, digit: prev.digit, sign: prev.sign, cum_sign: s });
            break Verdict::EventuallyPeriodic { preperiod: j, period: n + 1 - j };
        }
        visited.insert(next.clone(), approx);
        x = next;
        n += 1;
    };
    Ok(OrbitRecord { field, pattern: pattern.clone(), steps, verdict })
}

fn orbit_with_restart(beta: &AlgebraicReal, pattern: &SignPattern, max_steps: usize, stop_at_ep: bool) -> Result<OrbitRecord> {
    if max_steps == 0 {
        return Err(Error::Domain("max_steps must be at least 1".into()));
    }
    validate_beta(beta)?;
    let mut beta = beta.clone();
    loop {
        let field = Arc::new(BetaField::new(beta.clone()));
        let rec = run_orbit(field.clone(), pattern, max_steps, stop_at_ep)?;
        match field.discovered_factor() {
            Some(g) => beta = beta.with_factor(g),
            None => return Ok(rec),
        }
    }
}

/// Exact orbit of 1 until it enters `EP = {1/beta, ..., [beta]/beta}`, recurs, or
/// `max_steps` applications have been made.
pub fn orbit_of_one(beta: &AlgebraicReal, pattern: &SignPattern, max_steps: usize) -> Result<OrbitRecord> {
    orbit_with_restart(beta, pattern, max_steps, true)
}

/// Like [`orbit_of_one`] but ignores `EP` and runs until the orbit closes up.
pub fn orbit_cycle(beta: &AlgebraicReal, pattern: &SignPattern, max_steps: usize) -> Result<OrbitRecord> {
    orbit_with_restart(beta, pattern, max_steps, false)
}

pub fn classify(beta: &AlgebraicReal, pattern: &SignPattern, max_steps: usize) -> Result<Verdict> {
    Ok(orbit_of_one(beta, pattern, max_steps)?.verdict)
}

pub fn is_parry(beta: &AlgebraicReal, max_steps: usize) -> Result<bool> {
    Ok(classify(beta, &SignPattern::e0(), max_steps)?.is_finite())
}

pub fn is_yrrap(beta: &AlgebraicReal, max_steps: usize) -> Result<bool> {
    Ok(classify(beta, &SignPattern::e1(), max_steps)?.is_finite())
}

/// Largest `|coefficient|` over a step's point, for diagnostics of coefficient growth.
pub fn point_height(x: &BetaElement) -> BigInt {
    x.coeffs()
        .iter()
        .map(|c| c.numer().abs().max(c.denom().clone()))
        .max()
        .unwrap_or_default()
}
