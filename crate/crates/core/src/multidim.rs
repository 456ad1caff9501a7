//! Quadratic exponential sums in `n` variables over coset systems, and
//! the multidimensional reciprocity law in its two equivalent shapes.
//!
//! With `t = A B^{-1}` in reduced form and `n = B^T A`, the sum over
//! `x mod B` of `e(x^T t x / 2 + x^T s)` is related to the sum over
//! `x mod A` of `e(-x^T t^{-1} x / 2 + x^T t^{-1} s)`. The dual shape sums
//! over `B^{-1} Z^n / Z^n` and `A^{-1} Z^n / Z^n` with the integral
//! matrix `n` and the vector `c = B^T s`.

use rand::Rng;
use rug::{Integer, Rational};

use crate::backend::{Backend, PhaseHistogram, Residual};
use crate::error::{invalid, Error, Result};
use crate::gauss::{gauss_s_unnormalized, GaussSumSpec};
use crate::lattice::{
    coset_reps, evenness_check, evenness_check_dual, reduced_form_sym, signature, validate_half_integers,
    IntMatrix, RatMatrix, RatSymMatrix, ReducedForm,
};
use crate::number::rational::{denom_u64, frac, lcm_u64};

/// Which coset system a sum runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `x mod B`, phase `x^T t x / 2 + x^T s`.
    B,
    /// `x mod A`, phase `-x^T t^{-1} x / 2 + x^T t^{-1} s`.
    A,
}

/// A nonsingular rational symmetric `t` with a linear term satisfying the
/// evenness condition, together with everything derived from it.
#[derive(Debug, Clone)]
pub struct QuadSumProblem {
    t: RatSymMatrix,
    t_inv: RatMatrix,
    s: Vec<Rational>,
    c: Vec<Rational>,
    rf: ReducedForm,
    n_mat: IntMatrix,
    sigma: i64,
}

impl QuadSumProblem {
    /// Builds a problem from a rational linear term `s`.
    ///
    /// Fails unless `B^T A + 2 diag(B^T s)` is integral and even, since
    /// otherwise the sum depends on the chosen representatives.
    pub fn new(t: RatSymMatrix, s: Vec<Rational>) -> Result<Self> {
        if s.len() != t.n() {
            return Err(Error::Dimension(format!("s has length {} but t is {}x{}", s.len(), t.n(), t.n())));
        }
        let rf = reduced_form_sym(&t)?;
        if !evenness_check(&rf.a, &rf.b, &s)? {
            return invalid("evenness condition fails: B^T A + 2 diag(B^T s) is not an even integral matrix");
        }
        let c = rf.b.transpose().to_rational().mul_vec(&s)?;
        Self::assemble(t, s, c, rf)
    }

    /// Builds a problem from `s` in `(1/2) Z^n`.
    pub fn from_half_integer(t: RatSymMatrix, s: Vec<Rational>) -> Result<Self> {
        validate_half_integers(&s)?;
        Self::new(t, s)
    }

    /// Builds a problem from the dual linear term `c`, so that `s = B^{-T} c`.
    pub fn from_dual(t: RatSymMatrix, c: Vec<Rational>) -> Result<Self> {
        if c.len() != t.n() {
            return Err(Error::Dimension(format!("c has length {} but t is {}x{}", c.len(), t.n(), t.n())));
        }
        let rf = reduced_form_sym(&t)?;
        let n_mat = rf.n_matrix();
        if !evenness_check_dual(&n_mat, &c) {
            return invalid("evenness condition fails: n + 2 diag(c) is not an even integral matrix");
        }
        let s = rf.b.transpose().to_rational().inverse()?.mul_vec(&c)?;
        Self::assemble(t, s, c, rf)
    }

    fn assemble(t: RatSymMatrix, s: Vec<Rational>, c: Vec<Rational>, rf: ReducedForm) -> Result<Self> {
        let t_inv = t.inverse()?;
        let n_mat = rf.n_matrix();
        let sigma = signature(&t)?;
        Ok(Self { t, t_inv, s, c, rf, n_mat, sigma })
    }

    pub fn dim(&self) -> usize {
        self.t.n()
    }

    pub fn t(&self) -> &RatSymMatrix {
        &self.t
    }

    pub fn t_inv(&self) -> &RatMatrix {
        &self.t_inv
    }

    pub fn s(&self) -> &[Rational] {
        &self.s
    }

    pub fn c(&self) -> &[Rational] {
        &self.c
    }

    pub fn reduced_form(&self) -> &ReducedForm {
        &self.rf
    }

    /// `n = B^T A`.
    pub fn n_mat(&self) -> &IntMatrix {
        &self.n_mat
    }

    /// Signature of `t`.
    pub fn sigma(&self) -> i64 {
        self.sigma
    }

    pub fn det_a(&self) -> Result<u64> {
        abs_det_u64(&self.rf.a)
    }

    pub fn det_b(&self) -> Result<u64> {
        abs_det_u64(&self.rf.b)
    }

    /// Representatives of `Z^n / B Z^n` or `Z^n / A Z^n`.
    pub fn reps(&self, side: Side) -> Result<Vec<Vec<Integer>>> {
        match side {
            Side::B => coset_reps(&self.rf.b),
            Side::A => coset_reps(&self.rf.a),
        }
    }

    /// Exact phase of the summand at the integral point `x`, reduced mod 1.
    pub fn phase(&self, side: Side, x: &[Integer]) -> Rational {
        let xq: Vec<Rational> = x.iter().map(Rational::from).collect();
        let (quad, lin) = match side {
            Side::B => (quad_form(self.t.as_matrix(), &xq) / 2u32, dot(&xq, &self.s)),
            Side::A => {
                let ts = self.t_inv.mul_vec(&self.s).expect("dimension");
                (-quad_form(&self.t_inv, &xq) / 2u32, dot(&xq, &ts))
            }
        };
        frac(&(quad + lin))
    }
}

fn abs_det_u64(m: &IntMatrix) -> Result<u64> {
    m.det()
        .abs()
        .to_u64()
        .ok_or_else(|| Error::InvalidArgument("determinant too large for a coset sum".into()))
}

fn dot(x: &[Rational], y: &[Rational]) -> Rational {
    x.iter().zip(y).fold(Rational::new(), |acc, (a, b)| acc + Rational::from(a * b))
}

fn quad_form(m: &RatMatrix, x: &[Rational]) -> Rational {
    dot(x, &m.mul_vec(x).expect("dimension"))
}

/// `sum_k e(phases[k])` through a common-denominator histogram.
fn sum_phases<B: Backend>(be: &B, phases: &[Rational]) -> B::Value {
    let den = phases.iter().fold(1u64, |acc, p| lcm_u64(acc, denom_u64(p)));
    let mut h = PhaseHistogram::new(den);
    for p in phases {
        h.push_rational(p);
    }
    be.phase_sum(&h)
}

/// Unnormalized sum over an explicit list of representatives.
pub fn quad_sum_over<B: Backend>(be: &B, p: &QuadSumProblem, side: Side, reps: &[Vec<Integer>]) -> B::Value {
    let phases: Vec<Rational> = reps.iter().map(|x| p.phase(side, x)).collect();
    sum_phases(be, &phases)
}

/// Unnormalized sum over the coset system of the chosen side.
pub fn quad_sum_mod_b<B: Backend>(be: &B, p: &QuadSumProblem, side: Side) -> Result<B::Value> {
    Ok(quad_sum_over(be, p, side, &p.reps(side)?))
}

/// Both sides of the reciprocity law for `p`, each already normalized.
pub fn reciprocity_nd_sides<B: Backend>(be: &B, p: &QuadSumProblem) -> Result<(B::Value, B::Value)> {
    let lhs = be.div_sqrt(&quad_sum_mod_b(be, p, Side::B)?, p.det_b()?);
    let dual = be.div_sqrt(&quad_sum_mod_b(be, p, Side::A)?, p.det_a()?);
    let sts = dot(&p.s, &p.t_inv.mul_vec(&p.s)?);
    let phase = Rational::from((p.sigma, 8)) - sts / 2u32;
    Ok((lhs, be.mul_unit(&dual, &phase)))
}

pub fn reciprocity_nd_residual<B: Backend>(be: &B, p: &QuadSumProblem) -> Result<Residual> {
    let (lhs, rhs) = reciprocity_nd_sides(be, p)?;
    Ok(be.compare(&lhs, &rhs))
}

/// Both sides of the dual shape, summing over `B^{-1} Z^n / Z^n` and
/// `A^{-1} Z^n / Z^n` with phases `+-x^T n x / 2 + x^T c`.
pub fn cor_gr_sides<B: Backend>(be: &B, p: &QuadSumProblem) -> Result<(B::Value, B::Value)> {
    let n_rat = p.n_mat.to_rational();
    let n_sym = RatSymMatrix::new(n_rat.clone())?;
    let sigma_n = signature(&n_sym)?;
    let side_sum = |m: &IntMatrix, sign: i32| -> Result<B::Value> {
        let m_inv = m.to_rational().inverse()?;
        let mut phases = Vec::new();
        for y in coset_reps(m)? {
            let yq: Vec<Rational> = y.iter().map(Rational::from).collect();
            let x = m_inv.mul_vec(&yq)?;
            let q = quad_form(&n_rat, &x) / 2u32;
            let q = if sign < 0 { -q } else { q };
            phases.push(frac(&(q + dot(&x, &p.c))));
        }
        Ok(sum_phases(be, &phases))
    };
    let lhs = be.div_sqrt(&side_sum(&p.rf.b, 1)?, p.det_b()?);
    let dual = be.div_sqrt(&side_sum(&p.rf.a, -1)?, p.det_a()?);
    let cnc = dot(&p.c, &n_rat.inverse()?.mul_vec(&p.c)?);
    let phase = Rational::from((sigma_n, 8)) - cnc / 2u32;
    Ok((lhs, be.mul_unit(&dual, &phase)))
}

/// Residual of the dual shape for `(t, c)`, combined with the gap between
/// its two sides and the corresponding sides of the `s`-shape.
pub fn cor_gr_residual<B: Backend>(be: &B, t: &RatSymMatrix, c: &[Rational]) -> Result<Residual> {
    let p = QuadSumProblem::from_dual(t.clone(), c.to_vec())?;
    let (gl, gr) = cor_gr_sides(be, &p)?;
    let (bl, br) = reciprocity_nd_sides(be, &p)?;
    Ok(be.compare(&gl, &gr).max(be.compare(&gl, &bl)).max(be.compare(&gr, &br)))
}

/// The `c = 0` case; requires `n = B^T A` to be even.
pub fn landsberg_schaar_nd_residual<B: Backend>(be: &B, t: &RatSymMatrix) -> Result<Residual> {
    let rf = reduced_form_sym(t)?;
    let n = rf.n_matrix();
    if (0..n.rows()).any(|i| n[(i, i)].is_odd()) {
        return invalid("B^T A has an odd diagonal entry");
    }
    let p = QuadSumProblem::new(t.clone(), vec![Rational::new(); t.n()])?;
    reciprocity_nd_residual(be, &p)
}

/// A diagonal problem `t = diag(a_i / c_i)`, `s_i = b_i / (2 c_i)`.
pub fn diagonal_problem(entries: &[(i64, i64, i64)]) -> Result<QuadSumProblem> {
    let n = entries.len();
    let mut t = RatMatrix::zeros(n, n);
    let mut s = Vec::with_capacity(n);
    for (i, &(a, b, c)) in entries.iter().enumerate() {
        if a == 0 || c == 0 {
            return invalid("diagonal entries need a, c nonzero");
        }
        t[(i, i)] = Rational::from((a, c));
        s.push(Rational::from((b, 2 * c)));
    }
    QuadSumProblem::new(RatSymMatrix::new(t)?, s)
}

/// Product of the one-variable sums `sum_{x mod c_i} e((a_i x^2 + b_i x) / 2 c_i)`
/// rescaled to run over `x mod B` once: each factor picks up `1/gcd(a_i, c_i)`.
pub fn diagonal_product_oracle<B: Backend>(be: &B, entries: &[(i64, i64, i64)]) -> Result<B::Value> {
    let mut acc = be.one();
    for &(a, b, c) in entries {
        let g = crate::number::rational::gcd_i64(a, c);
        let sum = gauss_s_unnormalized(be, &GaussSumSpec::new(a, b, c)?);
        acc = be.mul(&acc, &be.scale(&sum, &Rational::from((1, g))));
    }
    Ok(acc)
}

/// Random problem: `t = N / d` with integral symmetric `N` (entries in
/// `[-5, 5]`), `d` in `1..=4`, and the first `s` in `{0, 1/2, -1/2}^n`
/// (in lexicographic order) that satisfies the evenness condition.
pub fn random_problem<R: Rng>(rng: &mut R, n: usize) -> QuadSumProblem {
    loop {
        let d: i64 = rng.gen_range(1..=4);
        let mut t = RatMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = Rational::from((rng.gen_range(-5i64..=5), d));
                t[(i, j)] = v.clone();
                t[(j, i)] = v;
            }
        }
        if t.det() == 0 {
            continue;
        }
        let t = RatSymMatrix::new(t).expect("symmetric by construction");
        let choices = [Rational::new(), Rational::from((1, 2)), Rational::from((-1, 2))];
        let total = 3usize.pow(n as u32);
        // start the search at a random offset so nonzero s shows up often
        let start = rng.gen_range(0..total);
        for k in 0..total {
            let mut code = (start + k) % total;
            let s: Vec<Rational> = (0..n)
                .map(|_| {
                    let v = choices[code % 3].clone();
                    code /= 3;
                    v
                })
                .collect();
            if let Ok(p) = QuadSumProblem::new(t.clone(), s) {
                return p;
            }
        }
    }
}

/// Random diagonal problem entries `(a_i, b_i, c_i)` with `gcd(a_i, c_i) = 1`,
/// `a_i c_i + b_i` even, `|a_i|, |c_i| <= 6`, `|b_i| <= 6`.
pub fn random_diagonal_entries<R: Rng>(rng: &mut R, n: usize) -> Vec<(i64, i64, i64)> {
    (0..n)
        .map(|_| loop {
            let a = rng.gen_range(-6i64..=6);
            let c = rng.gen_range(-6i64..=6);
            let b = rng.gen_range(-6i64..=6);
            if a != 0 && c != 0 && crate::number::rational::gcd_i64(a, c) == 1 && (a * c + b) % 2 == 0 {
                break (a, b, c);
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::{Exact, Float};
    use crate::gauss::reciprocity_sides;
    use crate::number::PrecComplex;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-25;

    fn sym(rows: &[Vec<(i64, i64)>]) -> RatSymMatrix {
        RatSymMatrix::from_i64_fracs(rows).unwrap()
    }

    fn zeros(n: usize) -> Vec<Rational> {
        vec![Rational::new(); n]
    }

    #[test]
    fn documented_sums() {
        let be = Float::new(128);
        let p = QuadSumProblem::new(sym(&[vec![(1, 2)]]), zeros(1)).unwrap();
        let v = quad_sum_mod_b(&be, &p, Side::B).unwrap();
        assert!(crate::number::prec::dist(&v, &PrecComplex::from_f64(1.0, 1.0, 128)) < TOL);

        let id = RatSymMatrix::new(RatMatrix::identity(3)).unwrap();
        let p = QuadSumProblem::new(id, zeros(3));
        // identity has odd diagonal: evenness fails for s = 0, but s = 1/2 works
        assert!(p.is_err());
        let id2 = RatSymMatrix::new(RatMatrix::identity(2).scale(&Rational::from(2))).unwrap();
        let p = QuadSumProblem::new(id2, zeros(2)).unwrap();
        let v = quad_sum_mod_b(&be, &p, Side::B).unwrap();
        assert!(crate::number::prec::dist(&v, &PrecComplex::one(128)) < TOL);

        let h = sym(&[vec![(0, 1), (1, 2)], vec![(1, 2), (0, 1)]]);
        let p = QuadSumProblem::new(h, zeros(2)).unwrap();
        let v = quad_sum_mod_b(&be, &p, Side::B).unwrap();
        assert!(crate::number::prec::dist(&v, &PrecComplex::from_f64(2.0, 0.0, 128)) < TOL);
    }

    #[test]
    fn documented_reciprocity_cases() {
        let ex = Exact::new(128);
        for t in [
            sym(&[vec![(1, 2)]]),
            sym(&[vec![(1, 2), (0, 1)], vec![(0, 1), (1, 2)]]),
            sym(&[vec![(0, 1), (1, 2)], vec![(1, 2), (0, 1)]]),
        ] {
            let p = QuadSumProblem::new(t.clone(), zeros(t.n())).unwrap();
            assert_eq!(reciprocity_nd_residual(&ex, &p).unwrap().exact, Some(true));
            assert_eq!(landsberg_schaar_nd_residual(&ex, &t).unwrap().exact, Some(true));
            assert_eq!(cor_gr_residual(&ex, &t, &zeros(t.n())).unwrap().exact, Some(true));
        }
        assert_eq!(cor_gr_residual(&ex, &sym(&[vec![(2, 1)]]), &zeros(1)).unwrap().exact, Some(true));
        // n = [1] is odd, made even by c = 1/2
        assert_eq!(cor_gr_residual(&ex, &sym(&[vec![(1, 1)]]), &[Rational::from((1, 2))]).unwrap().exact, Some(true));
        assert!(cor_gr_residual(&ex, &sym(&[vec![(1, 1)]]), &zeros(1)).is_err());
        assert!(landsberg_schaar_nd_residual(&ex, &sym(&[vec![(1, 1)]])).is_err());
    }

    #[test]
    fn scalar_case_matches_one_variable_law() {
        let be = Float::new(128);
        for (a, b, c) in [(1, 0, 2), (3, 1, 5), (-2, 0, 7), (5, -3, -3), (3, 2, -8), (4, 2, 9)] {
            let p = QuadSumProblem::new(sym(&[vec![(a, c)]]), vec![Rational::from((b, 2 * c))]).unwrap();
            let (l, r) = reciprocity_nd_sides(&be, &p).unwrap();
            let (l1, r1) = reciprocity_sides(&be, a, b, c).unwrap();
            assert!(crate::number::prec::dist(&l, &l1) < TOL);
            assert!(crate::number::prec::dist(&r, &r1) < TOL);
        }
    }

    #[test]
    fn literal_a_side_linear_term_fails() {
        // with x^T s on the A side instead of x^T t^{-1} s the identity breaks
        let be = Float::new(128);
        let p = QuadSumProblem::new(sym(&[vec![(3, 5)]]), vec![Rational::from((1, 10))]).unwrap();
        let (lhs, _) = reciprocity_nd_sides(&be, &p).unwrap();
        let phases: Vec<Rational> = p
            .reps(Side::A)
            .unwrap()
            .iter()
            .map(|x| {
                let x = Rational::from(&x[0]);
                frac(&(-Rational::from(&x * &x) * Rational::from((5, 6)) + x * Rational::from((1, 10))))
            })
            .collect();
        let literal = be.div_sqrt(&sum_phases(&be, &phases), 3);
        let sts = Rational::from((1, 100)) * Rational::from((5, 3));
        let literal = be.mul_unit(&literal, &(Rational::from((1, 8)) - sts / 2u32));
        assert!(be.compare(&lhs, &literal).value > 1e-3);
    }

    #[test]
    fn random_problems_and_representative_shifts() {
        let ex = Exact::new(128);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in 0..12 {
            let n = 1 + k % 3;
            let p = random_problem(&mut rng, n);
            assert_eq!(reciprocity_nd_residual(&ex, &p).unwrap().exact, Some(true), "{p:?}");
            let reps = p.reps(Side::B).unwrap();
            let b = &p.reduced_form().b;
            let shifted: Vec<Vec<Integer>> = reps
                .iter()
                .map(|r| {
                    let z: Vec<Integer> = (0..n).map(|_| Integer::from(rng.gen_range(-3i64..=3))).collect();
                    let bz = b.mul_vec(&z).unwrap();
                    r.iter().zip(bz).map(|(x, y)| Integer::from(x + y)).collect()
                })
                .collect();
            assert_eq!(quad_sum_over(&ex, &p, Side::B, &reps), quad_sum_over(&ex, &p, Side::B, &shifted));
        }
    }

    #[test]
    fn diagonal_factorization() {
        let ex = Exact::new(128);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let entries = random_diagonal_entries(&mut rng, 3);
            let p = diagonal_problem(&entries).unwrap();
            let v = quad_sum_mod_b(&ex, &p, Side::B).unwrap();
            assert_eq!(v, diagonal_product_oracle(&ex, &entries).unwrap(), "{entries:?}");
        }
    }

    #[test]
    fn half_integer_constructor() {
        let t = sym(&[vec![(1, 1)]]);
        assert!(QuadSumProblem::from_half_integer(t.clone(), vec![Rational::from((1, 2))]).is_ok());
        assert!(QuadSumProblem::from_half_integer(t, vec![Rational::from((1, 6))]).is_err());
    }
}
