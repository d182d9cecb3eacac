use std::collections::BTreeMap;

use ffred::algebra::factor::is_irreducible;
use ffred::algebra::sample::{random_elem, random_nonzero_ratfun, random_poly, random_ratfun};
use ffred::algebra::text::{from_text, to_text};
use ffred::algebra::{factor, partial_fractions, FieldCtx, RatFun};
use ffred::artin_schreier::{as_image, as_kernel, solve_as, ASExponent};
use ffred::elliptic::{TwistCurve, TwistPoint};
use ffred::eval::{eval_ring_bounded, RingCtx, WitnessEval};
use ffred::geometry::{as_const_kernel, as_const_solvable};
use ffred::logic::syntax::{and, implies, not, or};
use ffred::logic::{parse, translate, Formula, Sig, TranslationEnv};
use ffred::model::ModelParams;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field(i: usize) -> FieldCtx {
    match i {
        0 => FieldCtx::prime(2).unwrap(),
        1 => FieldCtx::prime(3).unwrap(),
        2 => FieldCtx::prime(5).unwrap(),
        _ => FieldCtx::new(3, 2).unwrap(),
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_form_is_unique(fi in 0usize..4, seed: u64) {
        let f = field(fi);
        let mut r = rng(seed);
        let a = random_ratfun(&f, 4, &mut r);
        let c = random_nonzero_ratfun(&f, 2, &mut r);
        // the same value built two ways has the same representation
        let b = a.mul(&c).checked_div(&c).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.num().gcd(a.den()).is_one());
        prop_assert!(a.den().is_monic());
    }

    #[test]
    fn frobenius_is_repeated_multiplication(fi in 0usize..4, seed: u64, e in 0u32..3) {
        let f = field(fi);
        let mut r = rng(seed);
        let a = random_ratfun(&f, 2, &mut r);
        let b = random_ratfun(&f, 2, &mut r);
        let n = (f.p() as u64).pow(e);
        let slow = (0..n).fold(RatFun::one(&f), |acc, _| acc.mul(&a));
        prop_assert_eq!(a.frobenius_power(e), slow);
        prop_assert_eq!(a.add(&b).frobenius_power(e), a.frobenius_power(e).add(&b.frobenius_power(e)));
    }

    #[test]
    fn partial_fractions_recompose(fi in 0usize..4, seed: u64) {
        let f = field(fi);
        let a = random_ratfun(&f, 5, &mut rng(seed));
        prop_assert_eq!(partial_fractions(&a).recompose(), a);
    }

    #[test]
    fn factorization_multiplies_back(fi in 0usize..4, seed: u64) {
        let f = field(fi);
        let g = random_poly(&f, 7, &mut rng(seed));
        prop_assume!(!g.is_zero());
        let fac = factor(&g).unwrap();
        prop_assert_eq!(fac.expand(&f), g);
        for (pi, _) in &fac.factors {
            prop_assert!(pi.is_monic() && is_irreducible(pi));
            // an independent irreducibility check: no roots below degree 4
            if pi.deg() > 1 && pi.deg() < 4 {
                prop_assert!(f.elements().all(|x| !pi.eval(x).is_zero()));
            }
        }
    }

    #[test]
    fn text_form_round_trips(fi in 0usize..4, seed: u64) {
        let f = field(fi);
        let a = random_ratfun(&f, 4, &mut rng(seed));
        let text = to_text(&a);
        let json = serde_json::to_string(&text).unwrap();
        prop_assert_eq!(from_text(&f, &serde_json::from_str(&json).unwrap()).unwrap(), a);
    }

    #[test]
    fn artin_schreier_round_trip(fi in 0usize..4, seed: u64, r in 1u32..3) {
        let f = field(fi);
        let r = ASExponent::new(r).unwrap();
        let u = random_ratfun(&f, 4, &mut rng(seed));
        let a = as_image(&u, r);
        let sol = solve_as(&a, r).expect("images are solvable");
        prop_assert_eq!(as_image(&sol, r), a);
        let c = sol.sub(&u).as_constant().expect("solutions differ by a constant");
        prop_assert_eq!(f.frob_pow(c, r.r() as u64), c);
    }

    #[test]
    fn kernel_is_exactly_the_fixed_constants(fi in 0usize..4, r in 1u32..3) {
        let f = field(fi);
        let r = ASExponent::new(r).unwrap();
        let fixed: Vec<_> = f.elements().filter(|&c| f.frob_pow(c, r.r() as u64) == c).collect();
        prop_assert_eq!(as_kernel(&f, r), fixed.clone());
        for c in f.elements() {
            prop_assert_eq!(as_image(&RatFun::constant(&f, c), r).is_zero(), fixed.contains(&c));
        }
    }

    #[test]
    fn coded_integers_round_trip(fi in 0usize..4, s in 1u64..6) {
        let m = ModelParams::new(&field(fi));
        let x = m.encode(s).unwrap();
        prop_assert_eq!(m.decode(&x.value), Some(s));
        prop_assert_eq!(x.value, RatFun::t(m.field()).frobenius_power(m.r().r() * s as u32));
    }

    #[test]
    fn divisibility_witnesses_satisfy_the_identity(fi in 0usize..3, s1 in 1u64..5, s2 in 1u64..5) {
        let m = ModelParams::new(&field(fi));
        let w = m.divides_witness(s1, s2).unwrap();
        prop_assert_eq!(w.is_some(), s2 % s1 == 0);
        if let Some(x) = w {
            let lhs = x.pow(m.base_pow(s1).unwrap() - 1);
            prop_assert_eq!(lhs, m.t().pow(m.base_pow(s2).unwrap() - 1));
        }
    }

    #[test]
    fn constant_image_times_kernel_is_q(fi in 1usize..5, k in 1u64..3) {
        let f = if fi == 4 { FieldCtx::new(5, 2).unwrap() } else { field(fi) };
        let image = f.elements().filter(|&c| as_const_solvable(&f, c, k).unwrap().is_some()).count();
        prop_assert_eq!(image * as_const_kernel(&f, k).len(), f.q() as usize);
    }

    #[test]
    fn twist_coordinates_round_trip(seed: u64) {
        let f = FieldCtx::prime(5).unwrap();
        let c = TwistCurve::from_ints(&f, &[1, 1, 0, 1]).unwrap();
        let x = random_ratfun(&f, 3, &mut rng(seed));
        let pt = TwistPoint::Affine { x, y: random_ratfun(&f, 3, &mut rng(seed ^ 1)) };
        prop_assert_eq!(c.from_weierstrass(&c.to_weierstrass(&pt)), pt.clone());
        prop_assert_eq!(c.on_curve(&pt), c.on_weierstrass(&c.to_weierstrass(&pt)));
    }
}

fn arith_sentence(depth: u32) -> impl Strategy<Value = Formula> {
    let atoms = prop::sample::select(vec![
        "(= (+ 1 1) 2)",
        "(= (+ 1 2) 2)",
        "(divides 1 3)",
        "(divides 2 3)",
        "(exists x (= (+ x 1) 3))",
    ])
    .prop_map(|s| parse(s, Sig::Arith).unwrap());
    atoms.prop_recursive(depth, 8, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| and(vec![a, b])),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| or(vec![a, b])),
            (inner.clone(), inner).prop_map(|(a, b)| implies(a, b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn translation_commutes_with_connectives(a in arith_sentence(1), b in arith_sentence(1)) {
        let env = TranslationEnv::new(&ModelParams::new(&field(1)));
        let tr = |phi: &Formula| translate(phi, &env).unwrap();
        prop_assert_eq!(tr(&not(a.clone())), not(tr(&a)));
        prop_assert_eq!(tr(&and(vec![a.clone(), b.clone()])), and(vec![tr(&a), tr(&b)]));
        prop_assert_eq!(tr(&or(vec![a.clone(), b.clone()])), or(vec![tr(&a), tr(&b)]));
        prop_assert_eq!(tr(&implies(a.clone(), b.clone())), implies(tr(&a), tr(&b)));
    }

    #[test]
    fn translation_preserves_truth(phi in arith_sentence(2)) {
        let f = field(1);
        let ev = WitnessEval::new(&f, 6);
        let env = TranslationEnv::new(ev.ctx().model());
        let ring = translate(&phi, &env).unwrap();
        prop_assert!(ring.check_sort(Sig::Ring).is_ok());
        prop_assert_eq!(ring.params().into_iter().collect::<Vec<_>>(), vec!["t".to_string()]);
        let v = ev.eval(&ring).unwrap();
        prop_assert_eq!(v.is_true(), ffred::eval::eval_arith(&phi, 30).unwrap());
        prop_assert!(v.is_true() || v.is_false());
    }

    #[test]
    fn existential_truth_is_monotone_in_degree(fi in 1usize..3, seed: u64) {
        let f = field(fi);
        let mut r = rng(seed);
        let c = random_elem(&f, &mut r);
        let a = RatFun::t(&f).pow(2).add(&RatFun::constant(&f, c));
        let ctx = RingCtx::new(&f, BTreeMap::from([("a".to_string(), a)]));
        let phi = parse("(exists x (= (* x x) (param a)))", Sig::Ring).unwrap();
        let mut seen_true = false;
        for d in 1..=3 {
            let v = eval_ring_bounded(&phi, &ctx, d, &Vec::new()).unwrap();
            prop_assert!(!seen_true || v);
            seen_true |= v;
        }
    }
}

#[test]
fn witness_mode_agrees_with_bounded_search() {
    let f = field(1);
    let cases = [
        ("(exists x (= (* x x) (pow (param t) 4)))", true),
        ("(exists x (= (- (pow x 3) x) (- (pow (param t) 3) (param t))))", true),
        ("(exists x (= (- (pow x 3) x) (param t)))", false),
        ("(exists x (and (not (= x 0)) (= (* x (param t)) 1)))", true),
    ];
    let ev = WitnessEval::new(&f, 4);
    for (text, want) in cases {
        let phi = parse(text, Sig::Ring).unwrap();
        let bounded = eval_ring_bounded(&phi, ev.ctx(), 2, &Vec::new()).unwrap();
        assert_eq!(bounded, want, "{text}");
        let w = ev.eval(&phi).unwrap();
        if w.is_true() {
            assert!(bounded, "{text}");
        }
        if !w.bounded {
            assert_eq!(w.is_true(), bounded, "{text}");
        }
    }
}
