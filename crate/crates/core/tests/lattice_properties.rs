use std::collections::HashSet;

use nalgebra::DMatrix;
use proptest::prelude::*;
use quadsum_core::lattice::{
    class_key, class_key_data, coset_reps, evenness_check, integrality_criteria, rat_matrix_from_json,
    rat_matrix_to_json, reduced_form, reduced_form_sym, signature, smith_normal_form, IntMatrix, RatMatrix,
    RatSymMatrix,
};
use quadsum_core::{Integer, Rational};

fn int_matrix(rows: usize, cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-bound..=bound, rows * cols)
        .prop_map(move |v| IntMatrix::from_fn(rows, cols, |i, j| Integer::from(v[i * cols + j])))
}

fn square_int_matrix(max_n: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_n).prop_flat_map(move |n| int_matrix(n, n, bound))
}

fn sym_rational(max_n: usize) -> impl Strategy<Value = RatSymMatrix> {
    (1..=max_n)
        .prop_flat_map(|n| (Just(n), prop::collection::vec((-6i64..=6, 1i64..=6), n * n)))
        .prop_map(|(n, v)| {
            let mut m = RatMatrix::zeros(n, n);
            for i in 0..n {
                for j in i..n {
                    let x = Rational::from(v[i * n + j]);
                    m[(i, j)] = x.clone();
                    m[(j, i)] = x;
                }
            }
            RatSymMatrix::new(m).unwrap()
        })
}

fn to_f64(t: &RatSymMatrix) -> DMatrix<f64> {
    let n = t.n();
    DMatrix::from_fn(n, n, |i, j| t.as_matrix()[(i, j)].to_f64())
}

fn divisibility_chain(d: &[Integer]) -> bool {
    d.windows(2).all(|w| if w[0] == 0 { w[1] == 0 } else { w[1].is_divisible(&w[0]) })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn smith_form_reconstructs_square(m in square_int_matrix(4, 9)) {
        let sf = smith_normal_form(&m);
        prop_assert_eq!(sf.u.mul(&sf.s).unwrap().mul(&sf.v).unwrap(), m);
        prop_assert_eq!(sf.u.det().abs(), 1);
        prop_assert_eq!(sf.v.det().abs(), 1);
        prop_assert!(sf.s.is_diagonal());
        let d = sf.diagonal();
        prop_assert!(d.iter().all(|x| *x >= 0));
        prop_assert!(divisibility_chain(&d));
    }

    #[test]
    fn smith_form_reconstructs_rectangular(m in (1usize..=3, 1usize..=4).prop_flat_map(|(r, c)| int_matrix(r, c, 7))) {
        let sf = smith_normal_form(&m);
        prop_assert_eq!(sf.u.mul(&sf.s).unwrap().mul(&sf.v).unwrap(), m);
        prop_assert!(divisibility_chain(&sf.diagonal()));
    }

    #[test]
    fn smith_diagonal_product_is_the_determinant(m in square_int_matrix(4, 9)) {
        let d = smith_normal_form(&m).diagonal();
        let prod = d.iter().fold(Integer::from(1), |acc, x| acc * x);
        prop_assert_eq!(prod, m.det().abs());
    }

    #[test]
    fn reduced_form_invariants(t in sym_rational(4)) {
        prop_assume!(t.det() != 0);
        let rf = reduced_form_sym(&t).unwrap();
        prop_assert!(rf.validate(t.as_matrix()).is_ok());
        let b_inv = rf.b.to_rational().inverse().unwrap();
        prop_assert_eq!(&rf.a.to_rational().mul(&b_inv).unwrap(), t.as_matrix());
        let n = rf.n_matrix();
        prop_assert_eq!(n.transpose(), n);
    }

    #[test]
    fn reduced_form_of_nonsymmetric_matrix(v in prop::collection::vec((-5i64..=5, 1i64..=5), 4)) {
        let m = RatMatrix::from_fn(2, 2, |i, j| Rational::from(v[2 * i + j]));
        prop_assume!(m.det() != 0);
        let rf = reduced_form(&m).unwrap();
        prop_assert!(rf.validate(&m).is_ok());
    }

    #[test]
    fn membership_criteria_agree(t in sym_rational(3), ys in prop::collection::vec(-10i64..=10, 30)) {
        prop_assume!(t.det() != 0);
        let rf = reduced_form_sym(&t).unwrap();
        let n = t.n();
        for y in ys.chunks(n).filter(|c| c.len() == n) {
            let y: Vec<Integer> = y.iter().map(|&k| Integer::from(k)).collect();
            let (lhs, rhs) = integrality_criteria(&t, &rf.b, &y).unwrap();
            prop_assert_eq!(lhs, rhs);
            // every B z is a member
            let bz = rf.b.mul_vec(&y).unwrap();
            prop_assert_eq!(integrality_criteria(&t, &rf.b, &bz).unwrap(), (true, true));
        }
    }

    #[test]
    fn coset_system_is_complete(b in square_int_matrix(3, 4)) {
        let det = b.det().abs();
        prop_assume!(det != 0);
        let reps = coset_reps(&b).unwrap();
        prop_assert_eq!(Integer::from(reps.len()), det.clone());
        let (adj, d) = class_key_data(&b).unwrap();
        let keys: HashSet<Vec<Integer>> = reps.iter().map(|r| class_key(&adj, &d, r)).collect();
        prop_assert_eq!(keys.len(), reps.len());
        // shifting a representative by a lattice vector keeps its class
        let shift = b.mul_vec(&vec![Integer::from(3); b.rows()]).unwrap();
        for r in &reps {
            let moved: Vec<Integer> = r.iter().zip(&shift).map(|(x, s)| Integer::from(x + s)).collect();
            prop_assert_eq!(class_key(&adj, &d, &moved), class_key(&adj, &d, r));
        }
    }

    #[test]
    fn signature_matches_float_eigenvalues(t in sym_rational(5)) {
        let eig = to_f64(&t).symmetric_eigen().eigenvalues;
        prop_assume!(eig.iter().all(|l| l.abs() > 1e-6));
        let count: i64 = eig.iter().map(|l| if *l > 0.0 { 1 } else { -1 }).sum();
        prop_assert_eq!(signature(&t).unwrap(), count);
    }

    #[test]
    fn signature_is_a_congruence_invariant(t in sym_rational(3), p in square_int_matrix(3, 3)) {
        prop_assume!(t.det() != 0 && p.rows() == t.n() && p.det() != 0);
        let pr = p.to_rational();
        let moved = pr.mul(t.as_matrix()).unwrap().mul(&pr.transpose()).unwrap();
        let moved = RatSymMatrix::new(moved).unwrap();
        prop_assert_eq!(signature(&moved).unwrap(), signature(&t).unwrap());
    }

    #[test]
    fn json_round_trip(t in sym_rational(4)) {
        let json = rat_matrix_to_json(t.as_matrix());
        prop_assert_eq!(&rat_matrix_from_json(&json).unwrap(), t.as_matrix());
    }
}

#[test]
fn evenness_examples() {
    let m = |x: i64| IntMatrix::from_i64(&[vec![x]]).unwrap();
    assert!(evenness_check(&m(2), &m(1), &[Rational::from(0)]).unwrap());
    assert!(evenness_check(&m(1), &m(2), &[Rational::from((1, 2))]).unwrap());
    assert!(!evenness_check(&m(1), &m(1), &[Rational::from(0)]).unwrap());
}

#[test]
fn json_accepts_strings_and_integers() {
    let v: serde_json::Value = serde_json::from_str(r#"[["1/2", 3], [-4, "5/6"]]"#).unwrap();
    let m = rat_matrix_from_json(&v).unwrap();
    assert_eq!(m[(0, 0)], Rational::from((1, 2)));
    assert_eq!(m[(0, 1)], Rational::from(3));
    assert_eq!(m[(1, 0)], Rational::from(-4));
    assert!(rat_matrix_from_json(&serde_json::from_str(r#"[["1/0"]]"#).unwrap()).is_err());
    assert!(rat_matrix_from_json(&serde_json::from_str(r#"[[1, 2], [3]]"#).unwrap()).is_err());
}
