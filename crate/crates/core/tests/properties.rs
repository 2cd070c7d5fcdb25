use std::cmp::Ordering;

use genbeta::algebraic::{AlgebraicReal, BetaElement, BetaField, IntPoly};
use genbeta::betamap::{expand_point, orbit_of_one, orbit_prefix, tau_step, SignPattern, Verdict};
use genbeta::chebyshev::f_beta_f64;
use genbeta::cli::verify::{lemma1_replay_ok, random_beta, random_digit_vector, random_pattern};
use genbeta::sets::{extremal_min_real, membership, CoeffBox};
use genbeta::spectra::{all_roots, lemma2_check};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn element(field: &BetaField, c: &[i64], den: i64) -> BetaElement {
    field.reduce(c.iter().map(|&x| BigRational::new(x.into(), den.into())).collect())
}

fn in_unit(field: &BetaField, x: &BetaElement) -> bool {
    field.sign(x) != Ordering::Less && field.cmp_int(x, &BigInt::from(1)) != Ordering::Greater
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn tau_maps_unit_interval_into_itself(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (beta, pattern) = (random_beta(&mut r), random_pattern(&mut r));
        let field = BetaField::new(beta);
        for st in orbit_prefix(&field, &pattern, 20).unwrap() {
            prop_assert!(in_unit(&field, &st.point));
            prop_assert!(st.digit >= 0);
        }
    }

    #[test]
    fn expansion_reconstructs_the_point(seed in any::<u64>(), n in 1usize..15) {
        let mut r = rng(seed);
        let (beta, pattern) = (random_beta(&mut r), random_pattern(&mut r));
        let field = BetaField::new(beta);
        let (coeffs, tail, s) = expand_point(&field, &pattern, &field.one(), n).unwrap();
        // beta^n = sum c_i beta^(n-1-i) + s tau^n(1)
        let mut rhs = if s > 0 { tail } else { field.neg(&tail) };
        for (i, &c) in coeffs.iter().enumerate() {
            rhs = field.add(&rhs, &field.scale(&field.pow_beta(n - 1 - i), &BigRational::from_integer(c.into())));
        }
        prop_assert_eq!(field.pow_beta(n), rhs);
    }

    #[test]
    fn orbit_depends_only_on_branches_up_to_floor(seed in any::<u64>(), tail_bits in proptest::collection::vec(0u8..2, 1..4)) {
        let mut r = rng(seed);
        let (beta, pattern) = (random_beta(&mut r), random_pattern(&mut r));
        let fl = beta.floor().to_string().parse::<usize>().unwrap();
        let pre = (0..=fl).map(|i| pattern.at(i)).collect();
        let other = SignPattern::new(pre, tail_bits).unwrap();
        let field = BetaField::new(beta);
        let a = orbit_prefix(&field, &pattern, 12).unwrap();
        let b = orbit_prefix(&field, &other, 12).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn verdicts_are_minimal(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (beta, pattern) = (random_beta(&mut r), random_pattern(&mut r));
        let rec = orbit_of_one(&beta, &pattern, 60).unwrap();
        let f = &rec.field;
        match rec.verdict {
            Verdict::EventuallyPeriodic { preperiod, period } => {
                let pts: Vec<_> = rec.steps.iter().map(|s| &s.point).collect();
                prop_assert_eq!(pts.len(), preperiod + period + 1);
                prop_assert_eq!(f.cmp(pts[preperiod], pts[preperiod + period]), Ordering::Equal);
                for i in 0..preperiod + period {
                    for j in i + 1..preperiod + period {
                        prop_assert_ne!(f.cmp(pts[i], pts[j]), Ordering::Equal);
                    }
                }
            }
            Verdict::Simple { n, k0 } => {
                let last = &rec.steps[n].point;
                prop_assert_eq!(f.mul_beta(last), f.from_int(k0));
                for st in &rec.steps[1..n] {
                    let bx = f.mul_beta(&st.point);
                    let i = f.floor(&bx);
                    let hits = f.sign(&f.sub(&bx, &f.from_int(i.clone()))) == Ordering::Equal;
                    prop_assert!(!(hits && i >= BigInt::from(1)));
                }
            }
            Verdict::Unresolved { max_steps } => prop_assert_eq!(rec.steps.len(), max_steps + 1),
        }
    }

    #[test]
    fn comparison_is_antisymmetric_and_numeric(seed in any::<u64>(), a in proptest::collection::vec(-20i64..20, 1..4), b in proptest::collection::vec(-20i64..20, 1..4), den in 1i64..7) {
        let mut r = rng(seed);
        let field = BetaField::new(random_beta(&mut r));
        let (x, y) = (element(&field, &a, den), element(&field, &b, den));
        prop_assert_eq!(field.cmp(&x, &y), field.cmp(&y, &x).reverse());
        let (fx, fy) = (field.to_f64(&x), field.to_f64(&y));
        if (fx - fy).abs() > 1e-9 * (1.0 + fx.abs().max(fy.abs())) {
            prop_assert_eq!(field.cmp(&x, &y), fx.partial_cmp(&fy).unwrap());
        }
        let bx = field.to_f64(&field.mul_beta(&x));
        let beta = field.beta().to_f64();
        prop_assert!((bx - beta * fx).abs() <= 1e-9 * (1.0 + bx.abs()));
    }

    #[test]
    fn generating_function_identity(seed in any::<u64>(), n in 1usize..30) {
        let mut r = rng(seed);
        let (beta, pattern) = (random_beta(&mut r), random_pattern(&mut r));
        prop_assert!(lemma2_check(&BetaField::new(beta), &pattern, n).unwrap());
    }

    #[test]
    fn digit_vectors_replay(seed in any::<u64>()) {
        let dv = random_digit_vector(&mut rng(seed));
        prop_assert_eq!(lemma1_replay_ok(&dv), Ok(()));
    }

    #[test]
    fn pattern_round_trips(pre in proptest::collection::vec(0u8..2, 0..5), per in proptest::collection::vec(0u8..2, 1..5)) {
        let p = SignPattern::new(pre, per).unwrap();
        let q: SignPattern = p.to_string().parse().unwrap();
        for i in 0..20 {
            prop_assert_eq!(p.at(i), q.at(i));
        }
    }

    #[test]
    fn root_sum_matches_vieta(c in proptest::collection::vec(-9i64..10, 2..7), lead in 1i64..4) {
        let mut c = c;
        c.push(lead);
        prop_assume!(c[0] != 0);
        let p = IntPoly::from_i64s(&c);
        let sq = p.square_free_part();
        let set = all_roots(&sq, 1e-9).unwrap();
        prop_assert_eq!(set.roots.len(), sq.degree());
        let d = sq.degree();
        let coeffs = sq.to_f64_coeffs();
        let expected = -coeffs[d - 1] / coeffs[d];
        let sum: f64 = set.roots.iter().map(|r| r.re()).sum();
        let scale: f64 = set.roots.iter().map(|r| r.modulus()).sum::<f64>() + 1.0;
        prop_assert!((sum - expected).abs() < 1e-9 * scale, "{} vs {}", sum, expected);
    }

    #[test]
    fn positive_reals_never_in_unit_zero_set(x in 0.0f64..0.99, n in 1usize..60) {
        let v = membership(Complex64::new(x, 0.0), CoeffBox::Unit, n, 1e-9).unwrap();
        prop_assert!(!v.is_yes());
    }

    #[test]
    fn spike_matches_closed_form(z in -0.98f64..-0.02) {
        let closed = extremal_min_real(z).unwrap();
        let v = membership(Complex64::new(z, 0.0), CoeffBox::Unit, 40, 1e-9).unwrap();
        let tail = z.abs().powi(41) / (1.0 - z.abs());
        if closed <= -1e-6 {
            prop_assert!(v.is_yes(), "{:?}", v);
            let w = membership(Complex64::new(z, 0.0), CoeffBox::Unit, 41, 1e-9).unwrap();
            prop_assert!(w.is_yes());
        } else if closed >= tail + 1e-9 {
            prop_assert!(v.is_no(), "{:?}", v);
        }
    }

    #[test]
    fn second_chebyshev_polynomial(x in -1.0f64..=1.0) {
        prop_assert!((f_beta_f64(2.0, x).unwrap() - (2.0 * x * x - 1.0)).abs() < 1e-12);
    }
}

#[test]
fn tau_step_digit_and_sign_agree_with_pattern() {
    let field = BetaField::new(AlgebraicReal::plastic());
    let (_, d, e) = tau_step(&field, &SignPattern::e1(), &field.one()).unwrap();
    // floor(beta) = 1 and E(1) = 1: digit 1 + 1, sign -1
    assert_eq!((d, e), (2, -1));
}
