use proptest::prelude::*;
use quadsum_core::backend::{Backend, Exact, Float};
use quadsum_core::gauss::{
    gauss_s, quad_gauss_g, reciprocity_residual, u_brute, u_closed, u_reciprocity_residual, GaussSumSpec,
};
use quadsum_core::multidim::{
    diagonal_problem, diagonal_product_oracle, quad_sum_mod_b, quad_sum_over, random_problem, reciprocity_nd_residual,
    QuadSumProblem, Side,
};
use quadsum_core::number::prec::dist;
use quadsum_core::number::PrecComplex;
use quadsum_core::zeta::{euler_product_residual, functional_equation_residual, zeros_in_window, FiniteZeta};
use quadsum_core::{Integer, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const P: u32 = 128;

fn triple(bound: i64) -> impl Strategy<Value = (i64, i64, i64)> {
    (-bound..=bound, -bound..=bound, -bound..=bound)
        .prop_filter("ac != 0 and ac + b even", |&(a, b, c)| a != 0 && c != 0 && (a * c + b) % 2 == 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reciprocity_beyond_the_sweep((a, b, c) in triple(400)) {
        prop_assert!(reciprocity_residual(&Float::new(P), a, b, c).unwrap().value < 1e-25);
    }

    #[test]
    fn exact_and_float_gauss_sums_agree((a, b, c) in triple(25)) {
        let spec = GaussSumSpec::new(a, b, c).unwrap();
        let ex = Exact::new(P);
        let embedded = ex.embed(&gauss_s(&ex, &spec));
        prop_assert!(dist(&embedded, &gauss_s(&Float::new(P), &spec)) < 1e-30);
    }

    #[test]
    fn gauss_sum_closed_form_matches_float_brute(a in -300i64..=300, n in 1u64..=300) {
        prop_assume!(a != 0 && quadsum_core::number::rational::gcd_i64(a, n as i64) == 1);
        let fl = Float::new(P);
        let brute = quad_gauss_g(&fl, a, n, false).unwrap();
        let closed = quad_gauss_g(&fl, a, n, true).unwrap();
        prop_assert!(dist(&brute, &closed) < 1e-25);
    }

    #[test]
    fn u_closed_form_and_reciprocity(p in -60i64..=60, q in 1i64..=60) {
        prop_assume!(p != 0);
        let r = Rational::from((p, q));
        let ex = Exact::new(P);
        prop_assert_eq!(ex.compare(&u_brute(&ex, &r), &u_closed(&ex, &r).unwrap()).exact, Some(true));
        prop_assert!(u_reciprocity_residual(&Float::new(P), &r).unwrap().value < 1e-25);
    }

    #[test]
    fn functional_equation_for_larger_n(half_n in 1u64..=1000, re in -3.0f64..3.0, im in -10.0f64..10.0) {
        let s = PrecComplex::from_f64(re, im, P);
        prop_assert!(functional_equation_residual(2 * half_n, &s).unwrap() < 1e-25);
    }

    #[test]
    fn euler_product_for_larger_n(half_n in 1u64..=1000, re in -3.0f64..3.0, im in -10.0f64..10.0) {
        let s = PrecComplex::from_f64(re, im, P);
        prop_assert!(euler_product_residual(2 * half_n, &s).unwrap() < 1e-25);
    }

    #[test]
    fn representatives_can_be_shifted(seed in any::<u64>(), n in 1usize..=3, shift in prop::collection::vec(-3i64..=3, 3)) {
        let p = random_problem(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let ex = Exact::new(P);
        let b = &p.reduced_form().b;
        let z: Vec<Integer> = shift[..n].iter().map(|&k| Integer::from(k)).collect();
        let bz = b.mul_vec(&z).unwrap();
        let reps = p.reps(Side::B).unwrap();
        let moved: Vec<Vec<Integer>> = reps
            .iter()
            .enumerate()
            .map(|(k, r)| if k % 2 == 0 { r.iter().zip(&bz).map(|(x, y)| Integer::from(x + y)).collect() } else { r.clone() })
            .collect();
        let a = quad_sum_over(&ex, &p, Side::B, &reps);
        let m = quad_sum_over(&ex, &p, Side::B, &moved);
        prop_assert_eq!(ex.compare(&a, &m).exact, Some(true));
    }

    #[test]
    fn nd_reciprocity_holds_exactly(seed in any::<u64>(), n in 1usize..=2) {
        let p = random_problem(&mut ChaCha8Rng::seed_from_u64(seed), n);
        prop_assert_eq!(reciprocity_nd_residual(&Exact::new(P), &p).unwrap().exact, Some(true));
    }

    #[test]
    fn diagonal_sums_factor(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let entries = quadsum_core::multidim::random_diagonal_entries(&mut rng, n);
        let p = diagonal_problem(&entries).unwrap();
        let fl = Float::new(P);
        let v = quad_sum_mod_b(&fl, &p, Side::B).unwrap();
        prop_assert!(dist(&v, &diagonal_product_oracle(&fl, &entries).unwrap()) < 1e-25);
    }
}

#[test]
fn documented_gauss_sum_values() {
    let ex = Exact::new(P);
    let s = gauss_s(&ex, &GaussSumSpec::new(1, 0, 2).unwrap());
    assert_eq!(ex.compare(&s, &ex.unit(&Rational::from((1, 8)))).exact, Some(true));
    assert!(GaussSumSpec::new(0, 1, 2).is_err());
    assert!(GaussSumSpec::new(1, 1, 0).is_err());
    assert!(reciprocity_residual(&Float::new(P), 1, 0, 1).is_err());
}

#[test]
fn first_zero_of_z2() {
    let zeros = zeros_in_window(2, 0.0, 10.0, P).unwrap();
    let want = 3.0 * std::f64::consts::PI / 4.0 / std::f64::consts::LN_2;
    assert!((zeros[0].t() - want).abs() < 1e-12);
    let z = FiniteZeta::new(2, P).unwrap();
    for zero in &zeros {
        assert!(z.eval(&zero.s).abs_f64() < 1e-30);
    }
    assert!(FiniteZeta::new(3, P).is_err());
}

#[test]
fn half_integer_constructor_is_stricter() {
    let t = quadsum_core::lattice::RatSymMatrix::from_i64_fracs(&[vec![(3, 5)]]).unwrap();
    assert!(QuadSumProblem::new(t.clone(), vec![Rational::from((1, 10))]).is_ok());
    assert!(QuadSumProblem::from_half_integer(t, vec![Rational::from((1, 10))]).is_err());
}
