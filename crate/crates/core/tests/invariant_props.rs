mod common;

use std::f64::consts::{PI, SQRT_2};

use common::{dense_rep, rng, theta_grid};
use egyb_core::enhance::{check_offdiagonal_last, check_perpendicular_sampled};
use egyb_core::invariant::{
    markov_check, multiplicativity_check, quartic_check_type2, skein_check, t_invariant,
    tilde_multiplicativity_check, trivial_link_value,
};
use egyb_core::{BraidWord, Enhancement, Limits, Operator, RepContext, TensorShape};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

const EPS: f64 = 1e-9;

fn standard(op: Operator) -> Enhancement {
    Enhancement::standard(op).unwrap()
}

fn t(s: &Enhancement, b: &BraidWord) -> Complex64 {
    t_invariant(s, b).unwrap().value
}

fn words(max_strands: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    (1..=max_strands, 0..=max_len, any::<u64>()).prop_map(|(n, len, seed)| BraidWord::random(n, len, seed))
}

fn enhancements() -> impl Strategy<Value = Enhancement> {
    (0usize..4, 0.0..PI).prop_map(|(which, theta)| standard(common::catalog(theta).swap_remove(which)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn markov_invariance(s in enhancements(), b in words(4, 10), seed in any::<u64>()) {
        prop_assert!(markov_check(&s, &b, 3, seed).unwrap() < EPS);
    }

    #[test]
    fn conway_relations(theta in 0.0..PI, b in words(4, 10)) {
        prop_assume!(b.strands() >= 2);
        let one = Complex64::new(1.0, 0.0);
        let sq2 = Complex64::new(SQRT_2, 0.0);
        prop_assert!(skein_check(&standard(Operator::type1(theta)), &b, one, one).unwrap() < EPS);
        prop_assert!(skein_check(&standard(Operator::type3(theta)), &b, one, sq2).unwrap() < EPS);
        prop_assert!(skein_check(&standard(Operator::r232()), &b, one, sq2).unwrap() < EPS);
    }

    #[test]
    fn type2_quartic_relation(theta in 0.0..PI, b in words(4, 10)) {
        prop_assume!(b.strands() >= 2);
        prop_assert!(quartic_check_type2(&standard(Operator::type2(theta)), &b).unwrap() < EPS);
    }

    #[test]
    fn projective_multiplicativity(s in enhancements(), b1 in words(3, 8), b2 in words(3, 8)) {
        prop_assert!(multiplicativity_check(&s, &b1, &b2).unwrap() < EPS);
        prop_assert!(tilde_multiplicativity_check(&s, &b1, &b2).unwrap() < EPS);
    }

    #[test]
    fn braid_relations_hold_on_vectors(which in 0usize..4, theta in 0.0..PI, seed in any::<u64>()) {
        let op = common::catalog(theta).swap_remove(which);
        let ctx = RepContext::new(&op, 4, Limits::default()).unwrap();
        let mut r = rng(seed);
        let v: Vec<Complex64> = (0..ctx.dim())
            .map(|_| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
            .collect();
        let apply = |letters: &[i32]| ctx.rep_apply(&BraidWord::new(4, letters.to_vec()).unwrap(), &v).unwrap();
        let close = |a: Vec<Complex64>, b: Vec<Complex64>| a.iter().zip(&b).all(|(x, y)| (x - y).norm() < 1e-12);
        prop_assert!(close(apply(&[1, 2, 1]), apply(&[2, 1, 2])));
        prop_assert!(close(apply(&[2, 3, 2]), apply(&[3, 2, 3])));
        prop_assert!(close(apply(&[1, 3]), apply(&[3, 1])));
        prop_assert!(close(apply(&[1, -1]), v.clone()));
    }
}

#[test]
fn trivial_links_match_closed_form() {
    for theta in [0.0, 1.3, PI] {
        for op in common::catalog(theta) {
            let s = standard(op);
            for n in 1..=6 {
                let direct = t(&s, &BraidWord::identity(n));
                assert!((direct - trivial_link_value(&s, n)).norm() < EPS);
            }
        }
    }
}

#[test]
fn theta_independence_is_observed() {
    let braids = [
        BraidWord::new(2, vec![1, 1, 1]).unwrap(),
        BraidWord::new(3, vec![1, -2, 1, -2]).unwrap(),
        BraidWord::new(4, vec![1, 2, 3, -1, 2, 2, -3]).unwrap(),
        BraidWord::random(4, 11, 77),
    ];
    for build in [Operator::type1, Operator::type2, Operator::type3] {
        for b in &braids {
            let reference = t(&standard(build(0.0)), b);
            for theta in theta_grid(16) {
                assert!((t(&standard(build(theta)), b) - reference).norm() < EPS);
            }
        }
    }
}

#[test]
fn dense_oracle_agrees_on_traces() {
    for op in common::catalog(0.45) {
        for seed in 0..4 {
            let b = BraidWord::random(3, 9, seed);
            let s = standard(op.clone());
            let dense = dense_rep(&op, &b).trace();
            let scale = s.alpha().powi(-b.writhe() as i32) * s.beta().powi(-3);
            assert!((t(&s, &b) - scale * dense).norm() < 1e-12);
        }
    }
}

#[test]
fn type2_double_crossing_between_split_components() {
    let s = standard(Operator::type2(0.8));
    // sigma_i^2 joining two split sublinks, no other sigma_i
    let cases = [
        BraidWord::new(3, vec![1, 1, 1, 2, 2]).unwrap(),
        BraidWord::new(4, vec![1, -1, 2, 2, 3, 3, 3]).unwrap(),
        BraidWord::new(4, vec![1, 2, 2, -3]).unwrap(),
    ];
    for b in &cases {
        assert!(t(&s, b).norm() < EPS, "{b}");
    }
}

#[test]
fn type2_samples_are_perpendicular() {
    let s = standard(Operator::type2(1.7));
    let sample = check_perpendicular_sampled(&s, 3, 100, 12, 11).unwrap();
    assert!(sample.max < 1e-10);
}

#[test]
fn defect_minus_off_diagonal_with_defect_plus() {
    let shape = TensorShape::new(2, 2);
    for theta in theta_grid(16) {
        for build in [Operator::type1, Operator::type2, Operator::type3] {
            let s = standard(build(theta));
            let plus = check_offdiagonal_last(s.defect(1), shape, EPS).unwrap();
            let minus = check_offdiagonal_last(s.defect(-1), shape, EPS).unwrap();
            assert!(plus && minus);
        }
    }
}

#[test]
fn r232_perpendicularity_is_exact() {
    let s = standard(Operator::r232());
    for n in 2..=4 {
        assert_eq!(check_perpendicular_sampled(&s, n, 10, 8, 1).unwrap().max, 0.0);
    }
}

#[test]
fn type2_value_evidence() {
    // knots give 4; two-component links give 0 or 8 by linking number
    let s = standard(Operator::type2(0.3));
    let knots = [vec![1, 1, 1], vec![1, 1, 1, 1, 1]];
    for k in knots {
        assert!((t(&s, &BraidWord::new(2, k).unwrap()) - Complex64::new(4.0, 0.0)).norm() < EPS);
    }
    let unlink = t(&s, &BraidWord::identity(2));
    assert!((unlink - Complex64::new(8.0, 0.0)).norm() < EPS);
}
