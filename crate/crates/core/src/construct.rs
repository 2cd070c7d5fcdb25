//! Constructions of simple generalized Parry numbers from digit data, the
//! approximation constructors for `E_1` and `E_alt`, and Parry-but-not-Yrrap
//! numbers with their negative-root certificates.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebraic::{isolate_real_roots, AlgebraicReal, BetaField, IntPoly};
use crate::betamap::{orbit_of_one, orbit_prefix, OrbitRecord, SignPattern, Verdict};
use crate::error::{Error, Result};
use crate::spectra::{char_poly_of, eisenstein_any, eisenstein_certificate, strip_spurious, Minimality};

/// Nonzero integers `M(0), ..., M(N)` for `1 = sum_j M(j) / x^(j+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DigitVector {
    pub m: Vec<i64>,
}

impl DigitVector {
    pub fn new(m: Vec<i64>) -> Result<Self> {
        let v = Self { m };
        v.validate()?;
        Ok(v)
    }

    pub fn n(&self) -> usize {
        self.m.len() - 1
    }

    /// The hypotheses: distinct nonzero entries, `M(0) >= 2`, `|M(j)| + 1 < M(0)` for
    /// `j >= 1`, and `|M(i)| != |M(j)| - 1` for `i != j`.
    pub fn validate(&self) -> Result<()> {
        let m = &self.m;
        let bad = |s: String| Err(Error::HypothesisViolated(s));
        if m.len() < 2 {
            return bad(format!("need at least two digits, got {}", m.len()));
        }
        if m.contains(&0) {
            return bad("digits must be nonzero".into());
        }
        for i in 0..m.len() {
            for j in i + 1..m.len() {
                if m[i] == m[j] {
                    return bad(format!("M({i}) = M({j}) = {}", m[i]));
                }
            }
        }
        if m[0] < 2 {
            return bad(format!("M(0) = {} < 2", m[0]));
        }
        for (j, &x) in m.iter().enumerate().skip(1) {
            if x.unsigned_abs() + 1 >= m[0].unsigned_abs() {
                return bad(format!("|M({j})| + 1 = {} is not below M(0) = {}", x.unsigned_abs() + 1, m[0]));
            }
        }
        for i in 0..m.len() {
            for j in 0..m.len() {
                if i != j && m[i].unsigned_abs() + 1 == m[j].unsigned_abs() {
                    return bad(format!("|M({i})| = |M({j})| - 1"));
                }
            }
        }
        Ok(())
    }

    /// `x^(N+1) - sum_j M(j) x^(N-j)`
    pub fn polynomial(&self) -> IntPoly {
        let n = self.n();
        let mut c = vec![BigInt::zero(); n + 2];
        c[n + 1] = BigInt::one();
        for (j, &x) in self.m.iter().enumerate() {
            c[n - j] = BigInt::from(-x);
        }
        IntPoly::new(c)
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Sign pattern forced by the digit signs: at step `j < N` the branch index is
/// `|M(j)| - E`, with `E = 1` exactly when the sign flips between `M(j)` and `M(j+1)`.
fn implied_pattern(m: &[i64], floor_beta: usize) -> Result<SignPattern> {
    let n = m.len() - 1;
    let mut forced: BTreeMap<usize, u8> = BTreeMap::new();
    for j in 0..n {
        let e = u8::from(m[j].signum() != m[j + 1].signum());
        let idx = m[j].unsigned_abs() as usize - usize::from(e);
        if let Some(&prev) = forced.get(&idx) {
            if prev != e {
                return Err(Error::ConstructionFailed(format!(
                    "branch {idx} must be both flipped and unflipped"
                )));
            }
        }
        forced.insert(idx, e);
    }
    if let Some((&idx, _)) = forced.range(floor_beta + 1..).next() {
        return Err(Error::ConstructionFailed(format!("branch index {idx} exceeds [beta] = {floor_beta}")));
    }
    let pre = (0..=floor_beta).map(|i| forced.get(&i).copied().unwrap_or(0)).collect();
    SignPattern::new(pre, vec![0])
}

/// Root `beta > 1` of `x^(N+1) - sum M(j) x^(N-j)` and its orbit under the implied pattern,
/// replayed exactly: digits `|M(j)|` and cumulative signs `sign M(j)` for `j < N`, then
/// `tau^N(1) = |M(N)| / beta` with sign `sign M(N)`.
pub fn lemma1_beta(m: &DigitVector) -> Result<(AlgebraicReal, OrbitRecord)> {
    m.validate()?;
    let n = m.n();
    let beta = AlgebraicReal::largest_root_above(&m.polynomial(), &BigRational::one())
        .ok_or_else(|| Error::ConstructionFailed("no root above 1".into()))?;
    let floor = beta
        .floor()
        .to_usize()
        .ok_or_else(|| Error::ConstructionFailed("beta too large".into()))?;
    let pattern = implied_pattern(&m.m, floor)?;
    let rec = orbit_of_one(&beta, &pattern, n + 2)?;
    let fail = |what: String| Err(Error::ConstructionFailed(format!("replay of {:?}: {what}", m.m)));
    let k0 = m.m[n].abs();
    if rec.verdict != (Verdict::Simple { n, k0 }) {
        return fail(format!("verdict {} instead of Simple{{N={n}, k0={k0}}}", rec.verdict));
    }
    for j in 0..=n {
        let st = &rec.steps[j];
        if j < n && st.digit != m.m[j].abs() {
            return fail(format!("digit {j} is {} not {}", st.digit, m.m[j].abs()));
        }
        if i64::from(st.cum_sign) != m.m[j].signum() {
            return fail(format!("cumulative sign {j} is {}", st.cum_sign));
        }
    }
    Ok((rec.beta().clone(), rec))
}

#[derive(Clone, Debug, Serialize)]
pub struct Approximation {
    pub beta: AlgebraicReal,
    #[serde(skip)]
    pub record: OrbitRecord,
    pub m_param: i64,
    pub digits: Vec<i64>,
    pub eisenstein: bool,
}

fn check_targets(targets: &[BigRational], eps: &BigRational) -> Result<BigRational> {
    if targets.is_empty() {
        return Err(Error::Domain("need at least one target".into()));
    }
    if !eps.is_positive() {
        return Err(Error::Domain("eps must be positive".into()));
    }
    let mut pts = vec![BigRational::zero(), BigRational::one()];
    for t in targets {
        if !t.is_positive() || t >= &BigRational::one() {
            return Err(Error::Domain(format!("target {t} outside (0, 1)")));
        }
        pts.push(t.clone());
    }
    pts.sort();
    let mut delta: Option<BigRational> = None;
    for w in pts.windows(2) {
        let d = &w[1] - &w[0];
        if d.is_zero() {
            return Err(Error::Domain(format!("targets must be distinct ({} repeats)", w[0])));
        }
        delta = Some(delta.map_or(d.clone(), |x: BigRational| x.min(d)));
    }
    Ok(delta.unwrap())
}

/// Smallest integer `> max(7/delta, 7/eps)` with the given parity.
fn start_m(delta: &BigRational, eps: &BigRational, odd: bool) -> i64 {
    let bound = (rat(7) / delta).max(rat(7) / eps);
    let mut m = bound.floor().to_integer().to_i64().expect("bound fits") + 1;
    if (m % 2 == 1) != odd {
        m += 1;
    }
    m
}

/// Even digits near `I_M(a_n)`, the last one `2 mod 4` within 2.
fn even_digits(m: i64, targets: &[BigRational]) -> Vec<i64> {
    let n = targets.len();
    let im = |a: &BigRational| (a * rat(m)).floor().to_integer().to_i64().expect("fits");
    let mut out = Vec::with_capacity(n);
    for (k, a) in targets.iter().enumerate() {
        let i = im(a);
        if k + 1 < n {
            out.push(if i % 2 == 0 { i } else { i + 1 });
        } else {
            let best = (i - 2..=i + 2)
                .filter(|d| *d >= 2 && d.mod_floor(&4) == 2)
                .min_by_key(|d| ((d - i).abs(), *d))
                .unwrap_or(2);
            out.push(best);
        }
    }
    out
}

fn within(field: &BetaField, x: &crate::algebraic::BetaElement, a: &BigRational, eps: &BigRational) -> bool {
    let hi = field.from_rational(a + eps);
    let lo = field.from_rational(a - eps);
    field.cmp(x, &hi) == Ordering::Less && field.cmp(x, &lo) == Ordering::Greater
}

fn verify_approx(
    m: &DigitVector,
    pattern: &SignPattern,
    targets: &[BigRational],
    eps: &BigRational,
    want_odd: bool,
) -> Result<(AlgebraicReal, OrbitRecord)> {
    let (beta, _) = lemma1_beta(m)?;
    let n = m.n();
    let rec = orbit_of_one(&beta, pattern, n + 2)?;
    let fail = |what: String| Err(Error::ConstructionFailed(what));
    let k0 = m.m[n].abs();
    if rec.verdict != (Verdict::Simple { n, k0 }) {
        return fail(format!("{pattern} orbit verdict {} instead of Simple{{N={n}, k0={k0}}}", rec.verdict));
    }
    for (j, st) in rec.steps.iter().enumerate().take(n) {
        if st.digit != m.m[j].abs() {
            return fail(format!("{pattern} digit {j} is {} not {}", st.digit, m.m[j].abs()));
        }
    }
    for (j, st) in rec.steps.iter().enumerate() {
        if i64::from(st.cum_sign) != m.m[j].signum() {
            return fail(format!("{pattern} cumulative sign {j} is {}", st.cum_sign));
        }
    }
    for (k, a) in targets.iter().enumerate() {
        if !within(&rec.field, &rec.steps[k + 1].point, a, eps) {
            return fail(format!("tau^{}(1) misses target {a} by eps", k + 1));
        }
    }
    if want_odd && beta.floor().is_even() {
        return fail(format!("integer part {} is even", beta.floor()));
    }
    Ok((beta, rec))
}

const MAX_RETRIES: usize = 8;

fn approx_construct(
    targets: &[BigRational],
    signs: Option<&[i8]>,
    eps: &BigRational,
) -> Result<Approximation> {
    let delta = check_targets(targets, eps)?;
    let alt = signs.is_some();
    let mut mp = start_m(&delta, eps, !alt);
    let mut last = None;
    for _ in 0..=MAX_RETRIES {
        let d = even_digits(mp, targets);
        let mut m = vec![if alt { mp } else { mp + 1 }];
        for (k, &dk) in d.iter().enumerate() {
            let c = match signs {
                Some(s) => i64::from(s[k]),
                None => if k % 2 == 0 { -1 } else { 1 },
            };
            m.push(c * dk);
        }
        let pattern = if alt { SignPattern::alt() } else { SignPattern::e1() };
        let attempt = DigitVector::new(m.clone())
            .and_then(|dv| verify_approx(&dv, &pattern, targets, eps, !alt).map(|r| (dv, r)));
        match attempt {
            Ok((dv, (beta, record))) => {
                let cp = char_poly_of(&record)?;
                let eisenstein = eisenstein_certificate(&cp.poly, &BigInt::from(2));
                if !alt && !eisenstein {
                    last = Some(Error::ConstructionFailed(format!("{} is not Eisenstein at 2", cp.poly)));
                } else {
                    return Ok(Approximation { beta, record, m_param: mp, digits: dv.m, eisenstein });
                }
            }
            Err(e) => last = Some(e),
        }
        mp = if alt { 2 * mp } else { 2 * mp + 1 };
    }
    Err(Error::ConstructionFailed(format!(
        "no instance after {MAX_RETRIES} retries: {}",
        last.map(|e| e.to_string()).unwrap_or_default()
    )))
}

/// Simple Yrrap `beta` with odd integer part and `|tau^n(1) - a_n| < eps` for every target,
/// characteristic polynomial Eisenstein at 2.
pub fn thm_a_yrrap_approx(targets: &[BigRational], eps: &BigRational) -> Result<Approximation> {
    approx_construct(targets, None, eps)
}

/// Simple `beta` for `E_alt` with cumulative signs `signs` and `|tau^n(1) - a_n| < eps`.
pub fn thm_b_alt_approx(targets: &[BigRational], signs: &[i8], eps: &BigRational) -> Result<Approximation> {
    if signs.len() != targets.len() {
        return Err(Error::LengthMismatch { expected: targets.len(), got: signs.len() });
    }
    if signs.iter().any(|s| s.abs() != 1) {
        return Err(Error::Domain("signs must be +1 or -1".into()));
    }
    approx_construct(targets, Some(signs), eps)
}

/// An eventually zero digit sequence, trailing zeros implicit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParrySequence {
    pub b: Vec<u64>,
}

impl ParrySequence {
    pub fn new(mut b: Vec<u64>) -> Self {
        while b.last() == Some(&0) {
            b.pop();
        }
        Self { b }
    }

    pub fn get(&self, i: usize) -> u64 {
        self.b.get(i).copied().unwrap_or(0)
    }

    /// `f(x) = 1 - sum b_n x^(n+1)`
    pub fn f_poly(&self) -> IntPoly {
        let mut c = vec![BigInt::one()];
        c.extend(self.b.iter().map(|&x| -BigInt::from(x)));
        IntPoly::new(c)
    }
}

/// Every shift `(b_(n+k))_n` with `k >= 1` is lexicographically `<=` `b`, and `b_0 >= 1`.
pub fn parry_admissible(b: &ParrySequence) -> bool {
    if b.get(0) == 0 {
        return false;
    }
    let len = b.b.len();
    (1..len).all(|k| {
        for i in 0..len {
            match b.get(k + i).cmp(&b.get(i)) {
                Ordering::Less => return true,
                Ordering::Greater => return false,
                Ordering::Equal => {}
            }
        }
        true
    })
}

/// `a_0 ... a_(2N-1)` followed by `M` copies of the block `0 1 0 ... 0` of length `2N + 2`.
pub fn thm_c_sequence(a_prefix: &[u64], n: usize, m: usize) -> Result<ParrySequence> {
    if a_prefix.len() != 2 * n {
        return Err(Error::LengthMismatch { expected: 2 * n, got: a_prefix.len() });
    }
    if n == 0 || m == 0 {
        return Err(Error::Domain("N and M must be at least 1".into()));
    }
    let mut b = a_prefix.to_vec();
    for _ in 0..m {
        let mut block = vec![0u64; 2 * n + 2];
        block[1] = 1;
        b.extend(block);
    }
    Ok(ParrySequence::new(b))
}

/// The first `2N` greedy digits of 1 for `seed`.
pub fn seed_prefix(seed: &AlgebraicReal, n: usize) -> Result<Vec<u64>> {
    let field = BetaField::new(seed.clone());
    let steps = orbit_prefix(&field, &SignPattern::e0(), 2 * n - 1)?;
    Ok(steps.iter().map(|s| s.digit as u64).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct NonYrrapCertificate {
    pub b: ParrySequence,
    pub beta: AlgebraicReal,
    pub beta_approx: f64,
    #[serde(serialize_with = "crate::spectra::phi::ser_poly")]
    pub f: IntPoly,
    pub f_at_minus_one: String,
    pub neg_root: AlgebraicReal,
    pub neg_root_approx: f64,
    pub parry_verdict: Verdict,
    pub caveat: Minimality,
}

/// Parry number with expansion `b` and a root of `f` in `(-1, 0)`. The certificate rules out
/// the Yrrap property when that root's reciprocal is a conjugate of `beta`; `caveat` records
/// whether irreducibility was proved.
pub fn certify_non_yrrap(b: &ParrySequence) -> Result<NonYrrapCertificate> {
    if !parry_admissible(b) {
        return Err(Error::NotAdmissible);
    }
    let f = b.f_poly();
    let f_m1 = f.eval_int(&BigInt::from(-1));
    if !f_m1.is_negative() {
        return Err(Error::NoSignChange { f_at_minus_one: f_m1.to_string() });
    }
    let rev = f.reversed();
    let beta = AlgebraicReal::largest_root_above(&rev, &BigRational::one())
        .ok_or_else(|| Error::ConstructionFailed("no root above 1".into()))?;
    let neg_root = isolate_real_roots(&f, &rat(-1), &BigRational::zero())
        .into_iter()
        .find(|r| r.poly().sign_at(r.lo()) != r.poly().sign_at(r.hi()))
        .ok_or_else(|| Error::ConstructionFailed("sign change without isolated root".into()))?
        .refine(&BigRational::new(BigInt::one(), BigInt::from(10u64.pow(10))));
    let rec = orbit_of_one(&beta, &SignPattern::e0(), b.b.len() + 8)?;
    let len = b.b.len();
    let expected = Verdict::Simple { n: len - 1, k0: b.b[len - 1] as i64 };
    let digits_ok = rec.steps.iter().take(len - 1).map(|s| s.digit as u64).eq(b.b[..len - 1].iter().copied());
    if rec.verdict != expected || !digits_ok {
        return Err(Error::ConstructionFailed(format!(
            "greedy expansion of 1 for the solved beta is {:?} ({}), not b",
            rec.digits(),
            rec.verdict
        )));
    }
    let caveat = if eisenstein_any(&strip_spurious(&rev, &beta)).is_some() {
        Minimality::EisensteinCertified
    } else {
        Minimality::BestEffort
    };
    Ok(NonYrrapCertificate {
        b: b.clone(),
        beta_approx: beta.to_f64(),
        beta,
        f,
        f_at_minus_one: f_m1.to_string(),
        neg_root_approx: neg_root.to_f64(),
        neg_root,
        parry_verdict: rec.verdict,
        caveat,
    })
}

/// Parry number near `seed`: the greedy prefix of length `2N` followed by `M` blocks.
pub fn thm_c_from_seed(seed: &AlgebraicReal, n: usize, m: usize) -> Result<NonYrrapCertificate> {
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let prefix = seed_prefix(seed, n)?;
    certify_non_yrrap(&thm_c_sequence(&prefix, n, m)?)
}
