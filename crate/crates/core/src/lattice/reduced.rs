//! Reduced forms `t = A B^{-1}` and coset systems of `Z^n / B Z^n`.

use rug::{Integer, Rational};

use super::matrix::{IntMatrix, RatMatrix, RatSymMatrix};
use super::snf::smith_normal_form;
use crate::error::{Error, Result};
use crate::number::rational::mod_pos;

/// `t = A B^{-1}` with `A = U P`, `B = V Q`, `U`, `V` unimodular and
/// `P`, `Q` diagonal with coprime entries and `Q > 0`.
#[derive(Debug, Clone)]
pub struct ReducedForm {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub p: IntMatrix,
    pub q: IntMatrix,
    pub a: IntMatrix,
    pub b: IntMatrix,
}

impl ReducedForm {
    /// Checks every defining property against `t`, exactly.
    pub fn validate(&self, t: &RatMatrix) -> Result<()> {
        let fail = |what: &str| Err(Error::InvalidArgument(format!("reduced form invariant violated: {what}")));
        if self.u.det().abs() != 1 {
            return fail("|det U| = 1");
        }
        if self.v.det().abs() != 1 {
            return fail("|det V| = 1");
        }
        if !self.p.is_diagonal() || !self.q.is_diagonal() {
            return fail("P and Q diagonal");
        }
        for i in 0..self.q.rows() {
            let (pi, qi) = (&self.p[(i, i)], &self.q[(i, i)]);
            if *qi <= 0 {
                return fail("Q_ii > 0");
            }
            if Integer::from(pi.gcd_ref(qi)) != 1 {
                return fail("gcd(P_ii, Q_ii) = 1");
            }
        }
        if self.u.mul(&self.p)? != self.a {
            return fail("A = U P");
        }
        if self.v.mul(&self.q)? != self.b {
            return fail("B = V Q");
        }
        if t.mul(&self.b.to_rational())? != self.a.to_rational() {
            return fail("t B = A");
        }
        Ok(())
    }

    /// `n = B^T A`, symmetric and integral whenever `t` is symmetric.
    pub fn n_matrix(&self) -> IntMatrix {
        self.b.transpose().mul(&self.a).expect("square")
    }
}

/// Computes one reduced form of a nonsingular rational matrix.
///
/// Writes `t = N / d` with `N` integral, takes `N = W S X`, reduces each
/// `S_ii / d` to `p_i / q_i`, and sets `U = W`, `V = X^{-1}`.
pub fn reduced_form(t: &RatMatrix) -> Result<ReducedForm> {
    if !t.is_square() {
        return Err(Error::Dimension("reduced form needs a square matrix".into()));
    }
    if t.det() == 0 {
        return Err(Error::Singular("t has determinant zero".into()));
    }
    let n = t.rows();
    let d = t.common_denominator();
    let big_n = t.scale(&Rational::from(d.clone())).to_integer().expect("denominators cleared");
    let snf = smith_normal_form(&big_n);
    let mut p = IntMatrix::zeros(n, n);
    let mut q = IntMatrix::zeros(n, n);
    for i in 0..n {
        let r = Rational::from((snf.s[(i, i)].clone(), d.clone()));
        p[(i, i)] = r.numer().clone();
        q[(i, i)] = r.denom().clone();
    }
    let u = snf.u;
    let v = snf
        .v
        .to_rational()
        .inverse()?
        .to_integer()
        .expect("inverse of a unimodular matrix is integral");
    let a = u.mul(&p)?;
    let b = v.mul(&q)?;
    Ok(ReducedForm { u, v, p, q, a, b })
}

pub fn reduced_form_sym(t: &RatSymMatrix) -> Result<ReducedForm> {
    reduced_form(t.as_matrix())
}

/// A complete residue system of `Z^n / B Z^n`.
///
/// With `B = W S X` the map `y -> W y` is a bijection from the box
/// `prod [0, S_ii)` onto the quotient.
pub fn coset_reps(b: &IntMatrix) -> Result<Vec<Vec<Integer>>> {
    if !b.is_square() {
        return Err(Error::Dimension("coset representatives need a square B".into()));
    }
    if b.det() == 0 {
        return Err(Error::Singular("B has determinant zero".into()));
    }
    let snf = smith_normal_form(b);
    let sizes: Vec<u64> = snf
        .diagonal()
        .iter()
        .map(|s| s.to_u64().ok_or_else(|| Error::InvalidArgument("|det B| is too large to enumerate".into())))
        .collect::<Result<_>>()?;
    let total: u64 = sizes.iter().product();
    let mut out = Vec::with_capacity(total as usize);
    let mut y = vec![0u64; sizes.len()];
    for _ in 0..total {
        let yv: Vec<Integer> = y.iter().map(|&k| Integer::from(k)).collect();
        out.push(snf.u.mul_vec(&yv)?);
        for (k, size) in y.iter_mut().zip(&sizes) {
            *k += 1;
            if *k < *size {
                break;
            }
            *k = 0;
        }
    }
    Ok(out)
}

/// `adj(B)` and `|det B|`; `adj(B) r mod |det B|` identifies the class of `r`.
pub fn class_key_data(b: &IntMatrix) -> Result<(IntMatrix, Integer)> {
    let det = b.det();
    if det == 0 {
        return Err(Error::Singular("B has determinant zero".into()));
    }
    let adj = b
        .to_rational()
        .inverse()?
        .scale(&Rational::from(det.clone()))
        .to_integer()
        .expect("adjugate is integral");
    Ok((adj, det.abs()))
}

/// Canonical key of the class of `r` in `Z^n / B Z^n`.
pub fn class_key(adj: &IntMatrix, det: &Integer, r: &[Integer]) -> Vec<Integer> {
    adj.mul_vec(r).expect("dimension").iter().map(|x| mod_pos(x, det)).collect()
}
