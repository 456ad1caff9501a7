use quadsum_core::lattice::{RatMatrix, RatSymMatrix};
use quadsum_core::number::prec::dist;
use quadsum_core::number::PrecComplex;
use quadsum_core::selftest::{random_rational_symmetric, random_siegel_point};
use quadsum_core::theta::{
    det_branch, jacobi_theta, jacobi_transform_residual, real_limit_exact, riemann_theta, riemann_theta_with_radius,
    riemann_transform_residual, riemann_transform_sides, theta_average_residual, theta_km, theta_km_residual,
    thmb_finite_tau_residual, CMatrix, DetBranchMode, SiegelPoint,
};
use quadsum_core::Rational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const P: u32 = 128;
const TOL: f64 = 1e-25;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn c(re: f64, im: f64) -> PrecComplex {
    PrecComplex::from_f64(re, im, P)
}

#[test]
fn tail_bound_is_honest() {
    let mut r = rng(1);
    for k in 0..12 {
        let p = random_siegel_point(&mut r, 1 + k % 3, P).unwrap();
        let v = riemann_theta(&p, TOL).unwrap();
        assert!(v.tail_bound <= TOL);
        let wide = riemann_theta_with_radius(&p, 2 * v.truncation_radius);
        assert!(dist(&v.value, &wide.value) < v.tail_bound.max(1e-35));
    }
}

#[test]
fn integer_shifts_leave_theta_unchanged() {
    let mut r = rng(2);
    for k in 0..9 {
        let n = 1 + k % 3;
        let p = random_siegel_point(&mut r, n, P).unwrap();
        let shifted: Vec<PrecComplex> =
            p.z.iter().enumerate().map(|(j, z)| z + &c(j as f64 - 1.0, 0.0)).collect();
        let q = SiegelPoint::new(shifted, p.tau.clone()).unwrap();
        let a = riemann_theta(&p, TOL).unwrap().value;
        let b = riemann_theta(&q, TOL).unwrap().value;
        assert!(dist(&a, &b) < 1e-24);
    }
}

#[test]
fn det_branch_squares_to_the_determinant() {
    let mut r = rng(3);
    let minus_i = c(0.0, -1.0);
    for k in 0..50 {
        let p = random_siegel_point(&mut r, 1 + k % 3, P).unwrap();
        let root = det_branch(&p.tau, DetBranchMode::Siegel).unwrap();
        let det = p.tau.scale(&minus_i).det().unwrap();
        assert!(dist(&(&root * &root), &det) < 1e-25);
    }
}

#[test]
fn det_branch_is_continuous_along_segments() {
    let mut r = rng(4);
    for k in 0..6 {
        let n = 1 + k % 3;
        let end = random_siegel_point(&mut r, n, P).unwrap().tau;
        let start = CMatrix::identity(n, P).scale(&c(0.0, 1.0));
        let mut prev: Option<PrecComplex> = None;
        for step in 0..=100 {
            let lam = step as f64 / 100.0;
            let tau = start.scale(&c(1.0 - lam, 0.0)).add(&end.scale(&c(lam, 0.0)));
            let v = det_branch(&tau, DetBranchMode::Siegel).unwrap();
            if let Some(p) = &prev {
                assert!(dist(p, &v) < 0.1, "jump at lambda = {lam}");
            }
            prev = Some(v);
        }
    }
}

#[test]
fn siegel_branch_approaches_the_real_limit() {
    let mut r = rng(5);
    for k in 0..20 {
        let t = random_rational_symmetric(&mut r, 1 + k % 3);
        let limit = real_limit_exact(&t, P).unwrap();
        let n = t.n();
        let errors: Vec<f64> = [1e-1, 1e-2, 1e-3]
            .iter()
            .map(|&eps| {
                let tau = CMatrix::from_rational(t.as_matrix(), P).add(&CMatrix::identity(n, P).scale(&c(0.0, eps)));
                dist(&det_branch(&tau, DetBranchMode::Siegel).unwrap(), &limit)
            })
            .collect();
        assert!(errors[1] < errors[0] && errors[2] < errors[1], "t = {:?}: {errors:?}", t.as_matrix());
        let real = CMatrix::from_rational(t.as_matrix(), P);
        assert!(dist(&det_branch(&real, DetBranchMode::RealLimit).unwrap(), &limit) < 1e-30);
    }
}

#[test]
fn progressions_add_up_to_theta() {
    let mut r = rng(6);
    for _ in 0..5 {
        let p = random_siegel_point(&mut r, 1, P).unwrap();
        let (z, tau) = (&p.z[0], p.tau.get(0, 0));
        let full = jacobi_theta(z, tau, TOL).unwrap().value;
        let mut sum = PrecComplex::zero(P);
        for k in 0..3 {
            sum += &theta_km(k, 3, z, tau, TOL).unwrap().value;
        }
        assert!(dist(&full, &sum) < 1e-24);
        for (k, m) in [(0, 1), (1, 2), (2, 5), (-1, 3)] {
            assert!(theta_km_residual(k, m, z, tau, TOL).unwrap().value < 1e-20);
        }
    }
}

#[test]
fn one_variable_riemann_transform_matches_jacobi() {
    let mut r = rng(7);
    for _ in 0..5 {
        let p = random_siegel_point(&mut r, 1, P).unwrap();
        let jr = jacobi_transform_residual(&p.z[0], p.tau.get(0, 0), TOL).unwrap().value;
        let rr = riemann_transform_residual(&p, TOL).unwrap().value;
        assert!(jr < 1e-20 && rr < 1e-20);
        let (l, _) = riemann_transform_sides(&p, TOL).unwrap();
        let tau = p.tau.get(0, 0);
        let inv = &PrecComplex::one(P) / tau;
        let want = jacobi_theta(&(&p.z[0] * &inv), &-inv, TOL).unwrap().value;
        assert!(dist(&l, &want) < 1e-20);
    }
}

#[test]
fn theta_average_identity() {
    let mut r = rng(8);
    for (a, b, cc) in [(3, 2, 0), (1, 1, 1), (2, 3, 0), (-3, 4, 2), (5, 1, -1)] {
        let p = random_siegel_point(&mut r, 1, P).unwrap();
        let res = theta_average_residual(a, b, cc, &p.z[0], p.tau.get(0, 0), TOL).unwrap();
        assert!(res.value < 1e-20, "({a}, {b}, {cc}): {}", res.value);
    }
}

#[test]
fn finite_tau_documented_examples() {
    let half = |n: usize| {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::from((1, 2));
        }
        RatSymMatrix::new(m).unwrap()
    };
    let tau1 = CMatrix::from_rows(vec![vec![c(0.0, 2.0)]]).unwrap();
    let res = thmb_finite_tau_residual(&half(1), &[Rational::new()], &[c(0.0, 0.0)], &tau1, TOL).unwrap();
    assert!(res.value < 1e-16);
    let tau2 = CMatrix::identity(2, P).scale(&c(0.0, 3.0));
    let res = thmb_finite_tau_residual(&half(2), &[Rational::new(), Rational::new()], &[c(0.0, 0.0), c(0.0, 0.0)], &tau2, TOL)
        .unwrap();
    assert!(res.value < 1e-14);
}

#[test]
fn rejects_degenerate_imaginary_parts() {
    let bad = CMatrix::from_parts(&[vec![0.0, 0.0], vec![0.0, 0.0]], &[vec![1.0, 1.0], vec![1.0, 1.0]], P).unwrap();
    assert!(SiegelPoint::new(vec![c(0.0, 0.0), c(0.0, 0.0)], bad).is_err());
    let asym = CMatrix::from_parts(&[vec![0.0, 0.3], vec![0.0, 0.0]], &[vec![1.0, 0.0], vec![0.0, 1.0]], P).unwrap();
    assert!(SiegelPoint::new(vec![c(0.0, 0.0), c(0.0, 0.0)], asym).is_err());
}
