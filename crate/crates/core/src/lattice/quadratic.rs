//! Exact signature, the evenness condition, and the integrality criterion
//! relating `t` to its reduced form.

use rug::{Integer, Rational};

use super::matrix::{IntMatrix, RatSymMatrix};
use crate::error::{Error, Result};

/// Number of positive minus number of negative eigenvalues, computed by
/// exact congruence diagonalization over the rationals.
pub fn signature(t: &RatSymMatrix) -> Result<i64> {
    let n = t.n();
    let mut m = t.as_matrix().clone();
    let mut sig = 0i64;
    for k in 0..n {
        if m[(k, k)] == 0 {
            if let Some(j) = (k + 1..n).find(|&j| m[(j, j)] != 0) {
                m.swap_rows(k, j);
                m.swap_cols(k, j);
            } else if let Some(j) = (k + 1..n).find(|&j| m[(k, j)] != 0) {
                // all remaining diagonal entries vanish: adding row and column j
                // to k makes the pivot 2 m_kj
                for c in 0..n {
                    let add = m[(j, c)].clone();
                    m[(k, c)] += add;
                }
                for r in 0..n {
                    let add = m[(r, j)].clone();
                    m[(r, k)] += add;
                }
            } else {
                return Err(Error::Singular("t is singular".into()));
            }
        }
        let pivot = m[(k, k)].clone();
        sig += if pivot > 0 { 1 } else { -1 };
        for i in k + 1..n {
            if m[(i, k)] == 0 {
                continue;
            }
            let f = Rational::from(&m[(i, k)] / &pivot);
            for c in k..n {
                let sub = Rational::from(&f * &m[(k, c)]);
                m[(i, c)] -= sub;
            }
            for r in k..n {
                let sub = Rational::from(&f * &m[(r, k)]);
                m[(r, i)] -= sub;
            }
        }
    }
    Ok(sig)
}

/// Checks that `v` has entries in `(1/2) Z`.
pub fn validate_half_integers(v: &[Rational]) -> Result<()> {
    match v.iter().find(|x| *x.denom() != 1 && *x.denom() != 2) {
        Some(x) => Err(Error::InvalidArgument(format!("{x} is not a half-integer"))),
        None => Ok(()),
    }
}

/// Whether `B^T A + 2 diag(B^T s)` is integral with even diagonal.
pub fn evenness_check(a: &IntMatrix, b: &IntMatrix, s: &[Rational]) -> Result<bool> {
    if a.rows() != b.rows() || a.cols() != b.cols() || !a.is_square() || s.len() != a.rows() {
        return Err(Error::Dimension("A, B and s must have matching sizes".into()));
    }
    let bt = b.transpose();
    let n = bt.mul(a)?;
    let bts = bt.to_rational().mul_vec(s)?;
    Ok((0..s.len()).all(|i| {
        let d = Rational::from(&bts[i] * 2u32) + &n[(i, i)];
        *d.denom() == 1 && d.numer().is_even()
    }))
}

/// Whether `n + 2 diag(c)` is integral with even diagonal, for integral symmetric `n`.
pub fn evenness_check_dual(n: &IntMatrix, c: &[Rational]) -> bool {
    (0..c.len()).all(|i| {
        let d = Rational::from(&c[i] * 2u32) + &n[(i, i)];
        *d.denom() == 1 && d.numer().is_even()
    })
}

/// `(y and t y integral)` compared with `(B^{-1} y integral)`; the two must agree.
pub fn integrality_criteria(t: &RatSymMatrix, b: &IntMatrix, y: &[Integer]) -> Result<(bool, bool)> {
    let yq: Vec<Rational> = y.iter().map(Rational::from).collect();
    let ty = t.mul_vec(&yq)?;
    let lhs = ty.iter().all(|x| *x.denom() == 1);
    let binv_y = b.to_rational().inverse()?.mul_vec(&yq)?;
    let rhs = binv_y.iter().all(|x| *x.denom() == 1);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::reduced::reduced_form_sym;

    fn sym(rows: &[Vec<(i64, i64)>]) -> RatSymMatrix {
        RatSymMatrix::from_i64_fracs(rows).unwrap()
    }

    #[test]
    fn documented_signatures() {
        assert_eq!(signature(&RatSymMatrix::new(crate::lattice::RatMatrix::identity(4)).unwrap()).unwrap(), 4);
        assert_eq!(signature(&sym(&[vec![(1, 1), (0, 1)], vec![(0, 1), (-2, 1)]])).unwrap(), 0);
        assert_eq!(signature(&sym(&[vec![(0, 1), (1, 1)], vec![(1, 1), (0, 1)]])).unwrap(), 0);
        assert_eq!(signature(&sym(&[vec![(0, 1), (1, 1), (0, 1)], vec![(1, 1), (0, 1), (0, 1)], vec![(0, 1), (0, 1), (-3, 7)]])).unwrap(), -1);
        assert!(signature(&sym(&[vec![(1, 1), (1, 1)], vec![(1, 1), (1, 1)]])).is_err());
    }

    #[test]
    fn documented_evenness() {
        let m = |x: i64| IntMatrix::from_i64(&[vec![x]]).unwrap();
        assert!(evenness_check(&m(2), &m(1), &[Rational::from(0)]).unwrap());
        assert!(evenness_check(&m(1), &m(2), &[Rational::from((1, 2))]).unwrap());
        assert!(!evenness_check(&m(1), &m(1), &[Rational::from(0)]).unwrap());
        assert!(!evenness_check(&m(1), &m(1), &[Rational::from((1, 3))]).unwrap());
        assert!(validate_half_integers(&[Rational::from((1, 3))]).is_err());
    }

    #[test]
    fn integrality_examples() {
        let t = sym(&[vec![(1, 2), (0, 1)], vec![(0, 1), (3, 4)]]);
        let rf = reduced_form_sym(&t).unwrap();
        for y in [[2, 4], [1, 4], [2, 2], [0, 0], [-4, 8]] {
            let y: Vec<Integer> = y.iter().map(|&k| Integer::from(k)).collect();
            let (l, r) = integrality_criteria(&t, &rf.b, &y).unwrap();
            assert_eq!(l, r);
        }
    }
}
