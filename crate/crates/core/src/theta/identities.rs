//! The branch of `det(-i tau)^{1/2}` and numerical checks of the theta
//! transformation laws, the progression lemma, the averaged identity, and
//! the finite-`tau` form of the multidimensional reciprocity law.

use rug::{Float, Integer, Rational};

use super::linalg::{
    add_rational, cholesky, lower_inverse, pd_margin, rational_vec, real_mul, real_transpose, symmetric_eigenvalues,
    CMatrix, SiegelPoint,
};
use super::series::{jacobi_theta, riemann_theta, theta_km};
use crate::backend::{Float as FloatBackend, Residual};
use crate::error::{invalid, Error, Result};
use crate::lattice::{coset_reps, signature, IntMatrix, RatMatrix, RatSymMatrix};
use crate::multidim::{cor_gr_sides, QuadSumProblem};
use crate::number::prec::dist;
use crate::number::rational::{frac, gcd_i64};
use crate::number::PrecComplex;

/// Which square root of `det(-i tau)` to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetBranchMode {
    /// The continuous branch on the Siegel half-space, positive on `i R_{>0} I`.
    Siegel,
    /// The boundary value at a real nonsingular symmetric matrix.
    RealLimit,
}

/// `det(-i tau)^{1/2}` on the requested branch.
///
/// Siegel mode factors `Im tau = L L^T`, diagonalizes `L^{-1} Re tau L^{-T}`
/// with eigenvalues `d_j`, and returns `prod L_jj prod sqrt(1 - i d_j)`.
/// Real-limit mode returns `|det t|^{1/2} e(-sigma / 8)`.
pub fn det_branch(tau: &CMatrix, mode: DetBranchMode) -> Result<PrecComplex> {
    let n = tau.rows();
    if tau.cols() != n {
        return Err(Error::Dimension("det_branch needs a square matrix".into()));
    }
    let prec = tau.prec();
    let slack = 2f64.powi(-(prec as i32) / 2);
    if tau.asymmetry() > slack {
        return Err(Error::NotSymmetric);
    }
    match mode {
        DetBranchMode::Siegel => {
            let l = cholesky(&tau.imag_part(), &pd_margin(prec))
                .ok_or_else(|| Error::NotPositiveDefinite("Im tau is not positive definite".into()))?;
            let li = lower_inverse(&l);
            let u = real_mul(&real_mul(&li, &tau.real_part()), &real_transpose(&li));
            let mut out = PrecComplex::one(prec);
            for (j, d) in symmetric_eigenvalues(&u).iter().enumerate() {
                let factor = PrecComplex::from_parts(Float::with_val(prec, 1u32), Float::with_val(prec, -d));
                out = &(&out * &factor.sqrt()) * &PrecComplex::from_parts(l[j][j].clone(), Float::new(prec));
            }
            Ok(out)
        }
        DetBranchMode::RealLimit => {
            if tau.imag_part().iter().flatten().any(|x| x.to_f64().abs() > slack) {
                return invalid("real-limit branch needs a real matrix");
            }
            let ev = symmetric_eigenvalues(&tau.real_part());
            let mut modulus = Float::with_val(prec, 1u32);
            let mut sigma = 0i64;
            for d in &ev {
                if d.to_f64().abs() <= slack {
                    return Err(Error::Singular("real-limit branch needs a nonsingular matrix".into()));
                }
                sigma += if d.is_sign_negative() { -1 } else { 1 };
                modulus *= Float::with_val(prec, d.abs_ref());
            }
            Ok(PrecComplex::e_rational(&Rational::from((-sigma, 8)), prec).mul_float(&modulus.sqrt()))
        }
    }
}

/// Real-limit branch for a rational matrix, from the exact determinant and signature.
pub fn real_limit_exact(t: &RatSymMatrix, prec: u32) -> Result<PrecComplex> {
    let det = t.det();
    if det == 0 {
        return Err(Error::Singular("t is singular".into()));
    }
    let sigma = signature(t)?;
    let modulus = Float::with_val(prec, det.abs()).sqrt();
    Ok(PrecComplex::e_rational(&Rational::from((-sigma, 8)), prec).mul_float(&modulus))
}

/// Both sides of `theta(z/tau, -1/tau) = sqrt(-i tau) e(z^2 / 2 tau) theta(z, tau)`.
pub fn jacobi_transform_sides(z: &PrecComplex, tau: &PrecComplex, tol: f64) -> Result<(PrecComplex, PrecComplex)> {
    let prec = tau.prec_bits().max(z.prec_bits());
    let one = PrecComplex::one(prec);
    let tau_inv = &one / tau;
    let lhs = jacobi_theta(&(z * &tau_inv), &(-&tau_inv), tol)?.value;
    let root = (&tau.clone() * &(-PrecComplex::i(prec))).sqrt();
    let half = PrecComplex::from_f64(0.5, 0.0, prec);
    let phase = PrecComplex::e(&(&(&(z * z) * &tau_inv) * &half));
    let rhs = &(&root * &phase) * &jacobi_theta(z, tau, tol)?.value;
    Ok((lhs, rhs))
}

pub fn jacobi_transform_residual(z: &PrecComplex, tau: &PrecComplex, tol: f64) -> Result<Residual> {
    let (l, r) = jacobi_transform_sides(z, tau, tol)?;
    Ok(Residual::numeric(dist(&l, &r)))
}

/// Both sides of the progression lemma for `theta_{k,m}`.
pub fn theta_km_sides(k: i64, m: i64, z: &PrecComplex, tau: &PrecComplex, tol: f64) -> Result<(PrecComplex, PrecComplex)> {
    let lhs = theta_km(k, m, z, tau, tol)?.value;
    let prec = tau.prec_bits().max(z.prec_bits());
    let one = PrecComplex::one(prec);
    let mq = Rational::from(m);
    let inv_root = &one / &(tau * &(-PrecComplex::i(prec))).sqrt();
    let half = PrecComplex::from_f64(0.5, 0.0, prec);
    let phase = PrecComplex::e(&-(&(&(z * z) / tau) * &half));
    let arg_z = &PrecComplex::from_rational(&Rational::from((k, m)), prec) + &(z / &tau.mul_rational(&mq));
    let arg_tau = -(&one / &tau.mul_rational(&Rational::from(m * m)));
    let theta = jacobi_theta(&arg_z, &arg_tau, tol)?.value;
    let rhs = (&(&inv_root * &phase) * &theta).mul_rational(&Rational::from((1, m)));
    Ok((lhs, rhs))
}

pub fn theta_km_residual(k: i64, m: i64, z: &PrecComplex, tau: &PrecComplex, tol: f64) -> Result<Residual> {
    let (l, r) = theta_km_sides(k, m, z, tau, tol)?;
    Ok(Residual::numeric(dist(&l, &r)))
}

/// Both sides of the averaged identity
/// `(1/|b|) sum_{x mod b} e((a x^2 + c x) / 2b) theta(x/b + z, tau)
///  = sqrt(i a/b) e(-c^2 / 8ab) (1/|a|) sum_{y mod a} e((-b y^2 + c y) / 2a) theta(y/a + z - c/2ab, tau - 1/ab)`.
pub fn theta_average_sides(a: i64, b: i64, c: i64, z: &PrecComplex, tau: &PrecComplex, tol: f64) -> Result<(PrecComplex, PrecComplex)> {
    if a == 0 || b == 0 || gcd_i64(a, b) != 1 {
        return invalid("a and b must be nonzero and coprime");
    }
    if (a * b + c).rem_euclid(2) != 0 {
        return invalid("ab + c must be even");
    }
    let prec = tau.prec_bits().max(z.prec_bits());
    let mut lhs = PrecComplex::zero(prec);
    for x in 0..b.unsigned_abs() as i64 {
        let w = PrecComplex::e_rational(&Rational::from((a * x * x + c * x, 2 * b)), prec);
        let arg = &PrecComplex::from_rational(&Rational::from((x, b)), prec) + z;
        lhs += &(&w * &jacobi_theta(&arg, tau, tol)?.value);
    }
    let lhs = lhs.mul_rational(&Rational::from((1, b.abs())));

    let shift = PrecComplex::from_rational(&Rational::from((c, 2 * a * b)), prec);
    let tau_a = tau - &PrecComplex::from_rational(&Rational::from((1, a * b)), prec);
    let mut sum = PrecComplex::zero(prec);
    for y in 0..a.unsigned_abs() as i64 {
        let w = PrecComplex::e_rational(&Rational::from((-b * y * y + c * y, 2 * a)), prec);
        let arg = &(&PrecComplex::from_rational(&Rational::from((y, a)), prec) + z) - &shift;
        sum += &(&w * &jacobi_theta(&arg, &tau_a, tol)?.value);
    }
    let it = PrecComplex::from_parts(Float::new(prec), Float::with_val(prec, &Rational::from((a, b))));
    let factor = &it.sqrt() * &PrecComplex::e_rational(&Rational::from((-c * c, 8 * a * b)), prec);
    let rhs = (&factor * &sum).mul_rational(&Rational::from((1, a.abs())));
    Ok((lhs, rhs))
}

pub fn theta_average_residual(a: i64, b: i64, c: i64, z: &PrecComplex, tau: &PrecComplex, tol: f64) -> Result<Residual> {
    let (l, r) = theta_average_sides(a, b, c, z, tau, tol)?;
    Ok(Residual::numeric(dist(&l, &r)))
}

/// Both sides of `Theta(tau^{-1} z, -tau^{-1}) = det(-i tau)^{1/2} e(z^T tau^{-1} z / 2) Theta(z, tau)`.
pub fn riemann_transform_sides(p: &SiegelPoint, tol: f64) -> Result<(PrecComplex, PrecComplex)> {
    let tau_inv = p.tau.inverse()?;
    let w = tau_inv.mul_vec(&p.z);
    let image = SiegelPoint::new(w, tau_inv.neg())?;
    let lhs = riemann_theta(&image, tol)?.value;
    let half = PrecComplex::from_f64(0.5, 0.0, p.prec());
    let phase = PrecComplex::e(&(&tau_inv.bilinear(&p.z, &p.z) * &half));
    let rhs = &(&det_branch(&p.tau, DetBranchMode::Siegel)? * &phase) * &riemann_theta(p, tol)?.value;
    Ok((lhs, rhs))
}

pub fn riemann_transform_residual(p: &SiegelPoint, tol: f64) -> Result<Residual> {
    let (l, r) = riemann_transform_sides(p, tol)?;
    Ok(Residual::numeric(dist(&l, &r)))
}

/// Points `B^{-1} y` for `y` running over `Z^n / B Z^n`.
fn dual_points(m: &IntMatrix) -> Result<Vec<Vec<Rational>>> {
    let inv = m.to_rational().inverse()?;
    coset_reps(m)?
        .into_iter()
        .map(|y| inv.mul_vec(&y.iter().map(Rational::from).collect::<Vec<_>>()))
        .collect()
}

fn quad(m: &RatMatrix, x: &[Rational]) -> Rational {
    let mx = m.mul_vec(x).expect("dimension");
    x.iter().zip(&mx).fold(Rational::new(), |acc, (a, b)| acc + Rational::from(a * b))
}

fn dot(x: &[Rational], y: &[Rational]) -> Rational {
    x.iter().zip(y).fold(Rational::new(), |acc, (a, b)| acc + Rational::from(a * b))
}

/// Both sides of the finite-`tau` identity behind the reciprocity law:
///
/// `sum_{x in B^{-1}Z^n/Z^n} e(x^T n x / 2 + x^T c) Theta(z + x, tau)`
/// against
/// `det(-i t)^{-1/2} e(-c^T n^{-1} c / 2) sum_{x in A^{-1}Z^n/Z^n} e(-x^T n x / 2 + x^T c) Theta(z + x - n^{-1} c, tau - n^{-1})`
/// with the real-limit branch.
pub fn thmb_finite_tau_sides(
    t: &RatSymMatrix,
    c: &[Rational],
    z: &[PrecComplex],
    tau: &CMatrix,
    tol: f64,
) -> Result<(PrecComplex, PrecComplex)> {
    let p = QuadSumProblem::from_dual(t.clone(), c.to_vec())?;
    SiegelPoint::new(z.to_vec(), tau.clone())?;
    let prec = tau.prec();
    let n_rat = p.n_mat().to_rational();
    let n_inv = n_rat.inverse()?;
    let rf = p.reduced_form();

    let side = |m: &IntMatrix, sign: i32, shift: &[PrecComplex], tau_side: &CMatrix| -> Result<PrecComplex> {
        let mut acc = PrecComplex::zero(prec);
        for x in dual_points(m)? {
            let q = quad(&n_rat, &x) / 2u32;
            let q = if sign < 0 { -q } else { q };
            let w = PrecComplex::e_rational(&frac(&(q + dot(&x, c))), prec);
            let xz = rational_vec(&x, prec);
            let arg: Vec<PrecComplex> = z.iter().zip(&xz).zip(shift).map(|((a, b), s)| &(a + b) - s).collect();
            let theta = riemann_theta(&SiegelPoint::new(arg, tau_side.clone())?, tol)?.value;
            acc += &(&w * &theta);
        }
        Ok(acc)
    };

    let zero_shift = vec![PrecComplex::zero(prec); z.len()];
    let lhs = side(&rf.b, 1, &zero_shift, tau)?;
    let shift = rational_vec(&n_inv.mul_vec(c)?, prec);
    let tau_a = add_rational(tau, &n_inv.neg());
    let sum_a = side(&rf.a, -1, &shift, &tau_a)?;
    let cnc = dot(c, &n_inv.mul_vec(c)?);
    let k = &PrecComplex::e_rational(&(-cnc / 2u32), prec) / &real_limit_exact(t, prec)?;
    Ok((lhs, &k * &sum_a))
}

pub fn thmb_finite_tau_residual(t: &RatSymMatrix, c: &[Rational], z: &[PrecComplex], tau: &CMatrix, tol: f64) -> Result<Residual> {
    let (l, r) = thmb_finite_tau_sides(t, c, z, tau, tol)?;
    Ok(Residual::numeric(dist(&l, &r)))
}

/// Outcome of evaluating the finite-`tau` identity at `tau = i height I`, `z = 0`.
#[derive(Debug, Clone)]
pub struct LargeTauLimit {
    /// Largest gap between a finite-`tau` side and the matching (rescaled) side of the coset-sum law.
    pub gap: f64,
    /// `|det B| + |det A| |K|` times the bound `(1 + 2 sum_{x >= 1} e^{-pi x^2 height})^n - 1` on `|Theta - 1|`.
    pub bound: f64,
    /// Residual of the finite-`tau` identity itself.
    pub residual: f64,
}

pub fn thmb_large_tau_limit(t: &RatSymMatrix, c: &[Rational], height: f64, prec: u32, tol: f64) -> Result<LargeTauLimit> {
    let n = t.n();
    let mut tau = CMatrix::zeros(n, n, prec);
    for i in 0..n {
        tau.set(i, i, PrecComplex::from_f64(0.0, height, prec));
    }
    let z = vec![PrecComplex::zero(prec); n];
    let (fl, fr) = thmb_finite_tau_sides(t, c, &z, &tau, tol)?;
    let p = QuadSumProblem::from_dual(t.clone(), c.to_vec())?;
    let (gl, gr) = cor_gr_sides(&FloatBackend::new(prec), &p)?;
    let root_b = Float::with_val(prec, Integer::from(p.det_b()?)).sqrt();
    let gl = gl.mul_float(&root_b);
    let gr = gr.mul_float(&root_b);
    let gap = dist(&fl, &gl).max(dist(&fr, &gr));

    let mut one_dim = 0.0f64;
    for x in 1..50 {
        one_dim += (-std::f64::consts::PI * (x * x) as f64 * height).exp();
    }
    let per_theta = (1.0 + 2.0 * one_dim).powi(n as i32) - 1.0;
    let det_t = t.det().to_f64().abs();
    let weight = p.det_b()? as f64 + p.det_a()? as f64 / det_t.sqrt();
    Ok(LargeTauLimit { gap, bound: weight * per_theta + tol * weight, residual: dist(&fl, &fr) })
}
