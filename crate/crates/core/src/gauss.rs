//! One-dimensional quadratic Gauss sums, the finite theta function `T(s,t)`
//! and the normalized sum `u(r)`, with their closed forms and reciprocity.

use rug::{Integer, Rational};

use crate::backend::{Backend, PhaseHistogram, Residual};
use crate::error::{invalid, Error, Result};
use crate::fourier::{check_quadratic, quadratic_numerators};
use crate::number::rational::{denom_u64, gcd_i64, is_prime, lcm_u64, mod_pos};
use crate::number::roots::eighth_root;
use crate::number::{jacobi, CyclotomicInt};

/// The triple `(a, b, c)` of `S_{a,b,c}`, with `c != 0` and `ac + b` even.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GaussSumSpec {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl GaussSumSpec {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        check_quadratic(a, b, c)?;
        Ok(Self { a, b, c })
    }
}

/// `sum_{x mod |c|} e((a x^2 + b x) / 2c)`, without the normalizing root.
pub fn gauss_s_unnormalized<B: Backend>(be: &B, spec: &GaussSumSpec) -> B::Value {
    let mut h = PhaseHistogram::new(2 * spec.c.unsigned_abs());
    for k in quadratic_numerators(spec.a, spec.b, spec.c) {
        h.push(k);
    }
    be.phase_sum(&h)
}

/// `S_{a,b,c} = |c|^{-1/2} sum_{x mod |c|} e((a x^2 + b x) / 2c)`.
pub fn gauss_s<B: Backend>(be: &B, spec: &GaussSumSpec) -> B::Value {
    be.div_sqrt(&gauss_s_unnormalized(be, spec), spec.c.unsigned_abs())
}

/// `g(a, n) = sum_{x=0}^{n-1} e(a x^2 / n)` by direct summation.
pub fn quad_gauss_g_brute<B: Backend>(be: &B, a: i64, n: u64) -> Result<B::Value> {
    if n == 0 {
        return invalid("g(a, n) needs n >= 1");
    }
    let m = n as i128;
    let a = (a as i128).rem_euclid(m);
    let mut h = PhaseHistogram::new(n);
    for x in 0..m {
        h.push(a * x % m * x);
    }
    Ok(be.phase_sum(&h))
}

/// `g(a, n)` from the sign formula; needs `gcd(a, n) = 1`.
///
/// Negative `a` is handled through `g(a, n) = conj g(-a, n)`.
pub fn quad_gauss_g_closed<B: Backend>(be: &B, a: i64, n: u64) -> Result<B::Value> {
    if n == 0 {
        return invalid("g(a, n) needs n >= 1");
    }
    if gcd_i64(a, n as i64) != 1 {
        return invalid(format!("closed form of g({a}, {n}) needs gcd(a, n) = 1"));
    }
    if a < 0 {
        return Ok(be.conj(&quad_gauss_g_closed(be, -a, n)?));
    }
    let n_i = n as i64;
    let unit = match n % 4 {
        1 => be.rational(&Rational::from(jacobi(a, n_i)?)),
        2 => return Ok(be.zero()),
        3 => be.scale(&be.unit(&Rational::from((1, 4))), &Rational::from(jacobi(a, n_i)?)),
        _ => {
            // a is odd here, so (n | a) is defined and 1 + i^a is 1 + i or 1 - i
            let one_plus = be.add(&be.one(), &be.unit(&Rational::from((a % 4, 4))));
            be.scale(&one_plus, &Rational::from(jacobi(n_i, a)?))
        }
    };
    Ok(be.mul_sqrt(&unit, n))
}

/// Either form of `g(a, n)`.
pub fn quad_gauss_g<B: Backend>(be: &B, a: i64, n: u64, closed_form: bool) -> Result<B::Value> {
    if closed_form {
        quad_gauss_g_closed(be, a, n)
    } else {
        quad_gauss_g_brute(be, a, n)
    }
}

/// Compares the closed and brute-force forms of `g(a, n)`.
pub fn sign_formula_residual<B: Backend>(be: &B, a: i64, n: u64) -> Result<Residual> {
    let closed = quad_gauss_g_closed(be, a, n)?;
    let brute = quad_gauss_g_brute(be, a, n)?;
    Ok(be.compare(&brute, &closed))
}

/// Both sides of `S_{a,b,c} = e(sgn(ac)/8) e(-b^2/8ac) S_{-c,b,a}`.
pub fn reciprocity_sides<B: Backend>(be: &B, a: i64, b: i64, c: i64) -> Result<(B::Value, B::Value)> {
    if a == 0 || c == 0 {
        return invalid("reciprocity needs ac != 0");
    }
    let lhs = gauss_s(be, &GaussSumSpec::new(a, b, c)?);
    let dual = gauss_s(be, &GaussSumSpec::new(-c, b, a)?);
    let sgn = (a.signum() * c.signum()) as i64;
    let phase = Rational::from((sgn, 8)) - Rational::from((b as i128 * b as i128, 8 * a as i128 * c as i128));
    Ok((lhs, be.mul_unit(&dual, &phase)))
}

pub fn reciprocity_residual<B: Backend>(be: &B, a: i64, b: i64, c: i64) -> Result<Residual> {
    let (lhs, rhs) = reciprocity_sides(be, a, b, c)?;
    Ok(be.compare(&lhs, &rhs))
}

/// `T(s, t) = 1/2 sum_{x=0}^{2 den(t) - 1} e(x^2 t / 2 + x s)`, and `T(s, 0) = 0`.
pub fn finite_theta_t<B: Backend>(be: &B, s: &Rational, t: &Rational) -> B::Value {
    if *t == 0 {
        return be.zero();
    }
    let dt = denom_u64(t);
    let den = lcm_u64(2 * dt, denom_u64(s));
    let tn = Integer::from(t.numer() * (den / (2 * dt)));
    let sn = Integer::from(s.numer() * (den / denom_u64(s)));
    let m = Integer::from(den);
    let mut h = PhaseHistogram::new(den);
    for x in 0..2 * dt {
        let k = Integer::from(&tn * x) * x + Integer::from(&sn * x);
        let k = Integer::from(k % &m).to_i64().unwrap();
        h.push(k as i128);
    }
    be.scale(&be.phase_sum(&h), &Rational::from((1, 2)))
}

/// `sqrt(-i t)` for rational `t != 0`, principal branch: `sqrt|t| w^{-sgn t}`.
fn sqrt_minus_i_t<B: Backend>(be: &B, t: &Rational) -> B::Value {
    let num = t.numer().clone().abs();
    let den = t.denom().clone();
    let radicand = Integer::from(&num * &den).to_u64().expect("radicand exceeds u64");
    let root = be.scale(&be.mul_sqrt(&be.one(), radicand), &Rational::from((Integer::from(1), den)));
    be.mul_unit(&root, &Rational::from((-(t.cmp0() as i32), 8)))
}

/// Both sides of `T(s/t, -1/t) = sqrt(-i t) e(s^2 / 2t) T(s, t)`.
///
/// The identity is the reciprocity law in disguise and holds when
/// `t = a/c`, `s = b/2c` with `ac + b` even; other inputs are rejected.
pub fn t_transform_sides<B: Backend>(be: &B, s: &Rational, t: &Rational) -> Result<(B::Value, B::Value)> {
    if *t == 0 {
        return invalid("the T-transformation needs t != 0");
    }
    let b = Rational::from(s * Rational::from(2 * t.denom().clone()));
    let parity_ok = *b.denom() == 1 && Integer::from(t.numer() * t.denom() + b.numer()).is_even();
    if !parity_ok {
        return Err(Error::IllDefined(format!(
            "T-transformation needs s = b/2c with ac + b even for t = a/c (s = {s}, t = {t})"
        )));
    }
    let lhs = finite_theta_t(be, &Rational::from(s / t), &Rational::from(-t.clone().recip()));
    let alpha = be.mul_unit(&sqrt_minus_i_t(be, t), &(Rational::from(s * s) / (t.clone() * 2u32)));
    let rhs = be.mul(&alpha, &finite_theta_t(be, s, t));
    Ok((lhs, rhs))
}

pub fn t_transform_residual<B: Backend>(be: &B, s: &Rational, t: &Rational) -> Result<Residual> {
    let (lhs, rhs) = t_transform_sides(be, s, t)?;
    Ok(be.compare(&lhs, &rhs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UMode {
    Brute,
    Closed,
}

/// `u(p/q) = 1/(2q) sum_{x=0}^{2q-1} e(p x^2 / 2q)` for `p/q` in lowest terms.
pub fn u_brute<B: Backend>(be: &B, r: &Rational) -> B::Value {
    let q = denom_u64(r);
    let m = 2 * q as i128;
    let p = mod_pos(r.numer(), &Integer::from(2 * q)).to_i64().unwrap() as i128;
    let mut h = PhaseHistogram::new(2 * q);
    for x in 0..m {
        h.push(p * x % m * x);
    }
    be.scale(&be.phase_sum(&h), &Rational::from((1, 2 * q)))
}

/// Closed form of `u(p/q)` for `r = p/q != 0`.
///
/// `w^p (q | p) / sqrt q` for odd `p`, `w^{1-q} (p | q) / sqrt q` for even `p`,
/// and `0` when `pq` is odd. For odd negative `p` the symbol is `(q | |p|)`.
pub fn u_closed<B: Backend>(be: &B, r: &Rational) -> Result<B::Value> {
    if *r == 0 {
        return invalid("closed form of u needs r != 0");
    }
    let p = r.numer().to_i64().ok_or_else(|| Error::InvalidArgument("numerator exceeds i64".into()))?;
    let q = r.denom().to_i64().ok_or_else(|| Error::InvalidArgument("denominator exceeds i64".into()))?;
    if p % 2 != 0 && q % 2 != 0 {
        return Ok(be.zero());
    }
    let (symbol, w_exp) = if p % 2 != 0 { (jacobi(q, p.abs())?, p) } else { (jacobi(p, q)?, 1 - q) };
    let v = be.scale(&be.unit(&Rational::from((w_exp, 8))), &Rational::from(symbol));
    Ok(be.div_sqrt(&v, q as u64))
}

pub fn u_value<B: Backend>(be: &B, r: &Rational, mode: UMode) -> Result<B::Value> {
    match mode {
        UMode::Brute => Ok(u_brute(be, r)),
        UMode::Closed => u_closed(be, r),
    }
}

/// The unit `eps(m, p, r)` with `u(m / p^r) = eps(m, p, r) / sqrt(p^r)`.
///
/// Requires `p` prime, `m > 0`, `mp` even, `p` not dividing `m`, `r > 0`.
pub fn u_epsilon(m: i64, p: u64, r: u32) -> Result<CyclotomicInt> {
    if !is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    if m <= 0 || r == 0 {
        return invalid("u_epsilon needs m > 0 and r > 0");
    }
    if (m as i128 * p as i128) % 2 != 0 {
        return invalid("u_epsilon needs mp even");
    }
    if m % p as i64 == 0 {
        return invalid(format!("u_epsilon needs p = {p} not dividing m = {m}"));
    }
    let scalar = |k: i32| CyclotomicInt::from_int(Integer::from(k));
    Ok(match (p == 2, r % 2 == 1) {
        (false, true) => eighth_root(1 - p as i64).mul(&scalar(jacobi(m, p as i64)?)),
        (false, false) => CyclotomicInt::one(),
        (true, true) => eighth_root(m).mul(&scalar(jacobi(2, m)?)),
        (true, false) => eighth_root(m),
    })
}

/// Both sides of `u(r) = sqrt|r| e(sgn(r)/8) u(-1/r)` for `r != 0`.
///
/// For `r > 0` the factor is `sqrt(r) w`. For `r < 0` it is `-i sqrt|r| w`,
/// the continuous branch of `sqrt(r)`.
pub fn u_reciprocity_sides<B: Backend>(be: &B, r: &Rational) -> Result<(B::Value, B::Value)> {
    if *r == 0 {
        return invalid("u reciprocity needs r != 0");
    }
    let lhs = u_brute(be, r);
    let dual = u_brute(be, &Rational::from(-r.clone().recip()));
    let radicand = Integer::from(r.numer().clone().abs() * r.denom()).to_u64().expect("radicand exceeds u64");
    let factor = be.scale(&be.mul_sqrt(&be.unit(&Rational::from((r.cmp0() as i32, 8))), radicand),
        &Rational::from((Integer::from(1), r.denom().clone())));
    Ok((lhs, be.mul(&factor, &dual)))
}

pub fn u_reciprocity_residual<B: Backend>(be: &B, r: &Rational) -> Result<Residual> {
    let (lhs, rhs) = u_reciprocity_sides(be, r)?;
    Ok(be.compare(&lhs, &rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::{Exact, Float};
    use crate::number::rat;

    fn ex() -> Exact {
        Exact::new(128)
    }

    #[test]
    fn gauss_s_examples() {
        let be = ex();
        let s = gauss_s(&be, &GaussSumSpec::new(1, 0, 2).unwrap());
        assert_eq!(be.compare(&s, &be.unit(&rat(1, 8))).exact, Some(true));
        let s = gauss_s(&be, &GaussSumSpec::new(1, 1, 1).unwrap());
        assert_eq!(be.compare(&s, &be.one()).exact, Some(true));
        let s = gauss_s(&be, &GaussSumSpec::new(2, 0, 3).unwrap());
        assert_eq!(be.compare(&s, &be.unit(&rat(1, 4))).exact, Some(true));
        assert!(GaussSumSpec::new(1, 1, 0).is_err());
        assert!(GaussSumSpec::new(2, 1, 3).is_err());
    }

    #[test]
    fn sign_formula_examples() {
        let be = ex();
        let two_plus_2i = be.scale(&be.add(&be.one(), &be.unit(&rat(1, 4))), &rat(2, 1));
        let g = quad_gauss_g_brute(&be, 1, 4).unwrap();
        assert_eq!(be.compare(&g, &two_plus_2i).exact, Some(true));
        let g = quad_gauss_g_closed(&be, 1, 4).unwrap();
        assert_eq!(be.compare(&g, &two_plus_2i).exact, Some(true));
        let i_sqrt3 = be.mul_sqrt(&be.unit(&rat(1, 4)), 3);
        assert_eq!(be.compare(&quad_gauss_g_closed(&be, 1, 3).unwrap(), &i_sqrt3).exact, Some(true));
        assert!(quad_gauss_g_brute(&be, 1, 6).unwrap().is_zero());
        assert!(quad_gauss_g_closed(&be, 1, 6).unwrap().is_zero());
        assert!(quad_gauss_g_closed(&be, 2, 6).is_err());
        // the n = 0 mod 4 case uses (n | a): a = 7, n = 12 separates it from (a | n)
        assert_eq!(sign_formula_residual(&be, 7, 12).unwrap().exact, Some(true));
        assert_eq!(sign_formula_residual(&be, -5, 8).unwrap().exact, Some(true));
    }

    #[test]
    fn reciprocity_examples() {
        let be = ex();
        for (a, b, c) in [(1, 0, 2), (3, 1, 5), (-2, 0, 3)] {
            assert_eq!(reciprocity_residual(&be, a, b, c).unwrap().exact, Some(true), "{a},{b},{c}");
            assert!(reciprocity_residual(&Float::new(128), a, b, c).unwrap().value < 1e-25);
        }
        assert!(reciprocity_residual(&be, 0, 1, 2).is_err());
    }

    #[test]
    fn finite_theta_examples() {
        let be = ex();
        assert!(finite_theta_t(&be, &rat(1, 3), &rat(0, 1)).is_zero());
        let t = finite_theta_t(&be, &rat(0, 1), &rat(1, 2));
        assert_eq!(be.compare(&t, &be.add(&be.one(), &be.unit(&rat(1, 4)))).exact, Some(true));
        assert_eq!(t_transform_residual(&be, &rat(1, 2), &rat(3, 2)).unwrap().exact, Some(true));
        // period two in t
        let a = finite_theta_t(&be, &rat(1, 5), &rat(3, 7));
        let b = finite_theta_t(&be, &rat(1, 5), &rat(17, 7));
        assert_eq!(be.compare(&a, &b).exact, Some(true));
        assert!(t_transform_residual(&be, &rat(1, 3), &rat(3, 2)).is_err());
    }

    #[test]
    fn u_examples() {
        let be = ex();
        assert!(u_brute(&be, &rat(3, 5)).is_zero());
        assert!(u_closed(&be, &rat(3, 5)).unwrap().is_zero());
        let half_1_plus_i = be.scale(&be.add(&be.one(), &be.unit(&rat(1, 4))), &rat(1, 2));
        assert_eq!(be.compare(&u_brute(&be, &rat(1, 2)), &half_1_plus_i).exact, Some(true));
        assert_eq!(be.compare(&u_closed(&be, &rat(1, 2)).unwrap(), &half_1_plus_i).exact, Some(true));
        assert_eq!(be.compare(&u_brute(&be, &rat(2, 1)), &be.one()).exact, Some(true));
        assert_eq!(be.compare(&u_closed(&be, &rat(2, 1)).unwrap(), &be.one()).exact, Some(true));
        for r in [rat(-1, 2), rat(-3, 2), rat(-5, 2), rat(-4, 3), rat(7, 10)] {
            let c = u_closed(&be, &r).unwrap();
            assert_eq!(be.compare(&u_brute(&be, &r), &c).exact, Some(true), "{r}");
        }
    }

    #[test]
    fn u_epsilon_examples() {
        assert_eq!(u_epsilon(1, 2, 2).unwrap(), eighth_root(1));
        assert_eq!(u_epsilon(2, 3, 2).unwrap(), CyclotomicInt::one());
        assert_eq!(u_epsilon(2, 3, 1).unwrap(), CyclotomicInt::zeta_power(4, 1));
        assert!(u_epsilon(3, 3, 1).is_err());
        assert!(u_epsilon(3, 5, 1).is_err());
        assert!(u_epsilon(2, 4, 1).is_err());
    }

    #[test]
    fn u_reciprocity_branch() {
        let be = ex();
        for r in [rat(1, 2), rat(-1, 2), rat(3, 4), rat(-6, 5), rat(2, 1)] {
            assert_eq!(u_reciprocity_residual(&be, &r).unwrap().exact, Some(true), "{r}");
        }
        // the branch sqrt(-x) = i sqrt(x) would put the factor at sqrt|r| e(3/8) for r < 0
        let r = rat(-1, 2);
        let (lhs, _) = u_reciprocity_sides(&be, &r).unwrap();
        let dual = u_brute(&be, &rat(2, 1));
        let wrong = be.mul(&be.div_sqrt(&be.unit(&rat(3, 8)), 2), &dual);
        assert_eq!(be.compare(&lhs, &wrong).exact, Some(false));
    }
}
