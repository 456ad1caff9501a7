//! Truncated theta series with certified tail bounds.
//!
//! Every summand satisfies `|e(x^T tau x / 2 + x^T z)| <= prod_j g(x_j)` with
//! `g(k) = exp(-pi lambda k^2 + 2 pi y |k|)`, where `lambda` is the smallest
//! eigenvalue of `Im tau` and `y = max |Im z_j|`. Summing `g` over the
//! complement of the box `||x||_inf <= R` gives the bound
//! `n T (G + T)^{n-1}`, with `T` the one-variable tail beyond `R` and `G`
//! the one-variable sum inside it.

use super::linalg::{CMatrix, SiegelPoint};
use crate::error::{Error, Result};
use crate::number::PrecComplex;

const START_RADIUS: u64 = 4;
/// Refuse boxes with more terms than this.
const MAX_TERMS: f64 = 5.0e7;
const GUARD_BITS: u32 = 32;

/// A theta value with the truncation that produced it.
#[derive(Clone, Debug)]
pub struct ThetaValue {
    pub value: PrecComplex,
    pub truncation_radius: u64,
    pub tail_bound: f64,
}

fn ln_g(k: f64, lambda: f64, y: f64) -> f64 {
    -std::f64::consts::PI * lambda * k * k + 2.0 * std::f64::consts::PI * y * k
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Natural log of the tail bound for the box of radius `r`, or `None`
/// when `r` is still on the rising part of `g` and no geometric bound applies.
pub fn ln_tail_bound(n: usize, lambda: f64, y: f64, r: u64) -> Option<f64> {
    let r1 = (r + 1) as f64;
    let ratio = ln_g(r1 + 1.0, lambda, y) - ln_g(r1, lambda, y);
    if ratio >= 0.0 {
        return None;
    }
    // T <= 2 g(R+1) / (1 - q), q = g(R+2) / g(R+1), decreasing ratios beyond
    let ln_t = 2f64.ln() + ln_g(r1, lambda, y) - (-ratio.exp()).ln_1p();
    let mut ln_inner = f64::NEG_INFINITY;
    for k in 0..=r {
        let term = ln_g(k as f64, lambda, y);
        ln_inner = log_add(ln_inner, term);
        if k > 0 {
            ln_inner = log_add(ln_inner, term);
        }
    }
    let ln_total = log_add(ln_inner, ln_t);
    Some((n as f64).ln() + ln_t + (n as f64 - 1.0) * ln_total)
}

/// Smallest radius `R >= 4` (stepping by one) whose tail bound is below `tol`.
pub fn choose_radius(n: usize, lambda: f64, y: f64, tol: f64) -> Result<(u64, f64)> {
    if !(lambda > 0.0) {
        return Err(Error::NotPositiveDefinite("Im tau has no positive lower eigenvalue bound".into()));
    }
    let target = tol.ln();
    let mut r = START_RADIUS;
    loop {
        if (2.0 * r as f64 + 1.0).powi(n as i32) > MAX_TERMS {
            return Err(Error::InvalidArgument(format!(
                "theta truncation radius {r} exceeds the summation budget (lambda_min = {lambda:e})"
            )));
        }
        if let Some(ln_b) = ln_tail_bound(n, lambda, y, r) {
            if ln_b < target {
                return Ok((r, ln_b.exp()));
            }
        }
        r += 1;
    }
}

/// Sum of `e(x^T tau x / 2 + x^T z)` over `||x||_inf <= r`, optionally only
/// over `x` with `x_0 = k (mod m)` (used for one variable).
pub fn box_sum(z: &[PrecComplex], tau: &CMatrix, r: u64, progression: Option<(i64, i64)>) -> PrecComplex {
    let n = z.len();
    let prec = tau.prec().max(z.iter().map(PrecComplex::prec_bits).max().unwrap_or(64));
    let work = prec + GUARD_BITS;
    let tau_w: Vec<Vec<PrecComplex>> =
        (0..n).map(|i| (0..n).map(|j| tau.get(i, j).with_prec(work)).collect()).collect();
    let z_w: Vec<PrecComplex> = z.iter().map(|v| v.with_prec(work)).collect();
    let half = PrecComplex::from_f64(0.5, 0.0, work);
    let r = r as i64;
    let mut x = vec![-r; n];
    let mut acc = PrecComplex::zero(work);
    'outer: loop {
        let keep = match progression {
            Some((k, m)) => (x[0] - k).rem_euclid(m) == 0,
            None => true,
        };
        if keep {
            let mut q = PrecComplex::zero(work);
            let mut l = PrecComplex::zero(work);
            for i in 0..n {
                if x[i] == 0 {
                    continue;
                }
                let mut row = PrecComplex::zero(work);
                for j in 0..n {
                    if x[j] != 0 {
                        row += &tau_w[i][j].mul_rational(&rug::Rational::from(x[j]));
                    }
                }
                q += &row.mul_rational(&rug::Rational::from(x[i]));
                l += &z_w[i].mul_rational(&rug::Rational::from(x[i]));
            }
            let phase = &(&q * &half) + &l;
            acc += &PrecComplex::e(&phase);
        }
        for xi in x.iter_mut() {
            *xi += 1;
            if *xi <= r {
                continue 'outer;
            }
            *xi = -r;
        }
        break;
    }
    acc.with_prec(prec)
}

fn max_abs_imag(z: &[PrecComplex]) -> f64 {
    z.iter().map(|v| v.im().to_f64().abs()).fold(0.0, f64::max)
}

/// Riemann theta `sum_{x in Z^n} e(x^T tau x / 2 + x^T z)` to within `tol`.
pub fn riemann_theta(p: &SiegelPoint, tol: f64) -> Result<ThetaValue> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    // slight shrink guards against rounding in the eigenvalue estimate
    let lambda = p.lambda_min().to_f64() * (1.0 - 1e-12);
    let (r, tail) = choose_radius(p.n(), lambda, max_abs_imag(&p.z), tol)?;
    Ok(ThetaValue { value: box_sum(&p.z, &p.tau, r, None), truncation_radius: r, tail_bound: tail })
}

/// Riemann theta over an explicit box, for self-consistency checks.
pub fn riemann_theta_with_radius(p: &SiegelPoint, r: u64) -> ThetaValue {
    let lambda = p.lambda_min().to_f64() * (1.0 - 1e-12);
    let tail = ln_tail_bound(p.n(), lambda, max_abs_imag(&p.z), r).map_or(f64::INFINITY, f64::exp);
    ThetaValue { value: box_sum(&p.z, &p.tau, r, None), truncation_radius: r, tail_bound: tail }
}

fn check_upper(tau: &PrecComplex) -> Result<()> {
    if tau.im().is_sign_negative() || tau.im().is_zero() {
        return Err(Error::InvalidArgument("Im tau must be positive".into()));
    }
    Ok(())
}

fn jacobi_impl(z: &PrecComplex, tau: &PrecComplex, tol: f64, progression: Option<(i64, i64)>) -> Result<ThetaValue> {
    check_upper(tau)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let lambda = tau.im().to_f64();
    let (r, tail) = choose_radius(1, lambda, z.im().to_f64().abs(), tol)?;
    let t = CMatrix::from_rows(vec![vec![tau.clone()]])?;
    Ok(ThetaValue {
        value: box_sum(std::slice::from_ref(z), &t, r, progression),
        truncation_radius: r,
        tail_bound: tail,
    })
}

/// Jacobi theta `sum_n e(n^2 tau / 2 + n z)`.
pub fn jacobi_theta(z: &PrecComplex, tau: &PrecComplex, tol: f64) -> Result<ThetaValue> {
    jacobi_impl(z, tau, tol, None)
}

/// The progression theta `sum_{n = k mod m} e(n^2 tau / 2 + n z)`.
pub fn theta_km(k: i64, m: i64, z: &PrecComplex, tau: &PrecComplex, tol: f64) -> Result<ThetaValue> {
    if m <= 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    jacobi_impl(z, tau, tol, Some((k, m)))
}

/// Jacobi theta summed directly over `|n| <= r`.
pub fn jacobi_theta_with_radius(z: &PrecComplex, tau: &PrecComplex, r: u64) -> Result<PrecComplex> {
    check_upper(tau)?;
    let t = CMatrix::from_rows(vec![vec![tau.clone()]])?;
    Ok(box_sum(std::slice::from_ref(z), &t, r, None))
}
