//! The finite Dirichlet polynomial
//! `Z_n(s) = sum_{d | n} u(d'/d) d^s / sqrt(gcd(d, d'))`, `d' = n/d`,
//! its local factors, functional equation and zeros on `Re(s) = 1/2`.

use std::collections::BTreeMap;

use rug::{Float as MpFloat, Rational};

use crate::backend::Float;
use crate::error::{invalid, Result};
use crate::gauss::{u_brute, u_epsilon};
use crate::number::prec::{pi, PrecComplex};
use crate::number::rational::{divisors, factorize, frac, gcd_u64};
use crate::number::CyclotomicInt;

/// Guard bits used for every zeta evaluation on top of the requested precision.
const ZETA_GUARD: u32 = 64;

fn check_even(n: u64) -> Result<()> {
    if n == 0 || n % 2 == 1 {
        return invalid(format!("Z_n needs an even positive n, got {n}"));
    }
    Ok(())
}

/// `u(r)` evaluated by direct summation, independent of any closed form.
fn u_numeric(r: &Rational, prec: u32) -> PrecComplex {
    u_brute(&Float::new(prec), r)
}

/// `Z_n` with its divisor-sum coefficients precomputed.
#[derive(Debug, Clone)]
pub struct FiniteZeta {
    n: u64,
    prec: u32,
    terms: Vec<(u64, PrecComplex)>,
}

impl FiniteZeta {
    pub fn new(n: u64, prec: u32) -> Result<Self> {
        check_even(n)?;
        let work = prec + ZETA_GUARD;
        let terms = divisors(n)
            .into_iter()
            .map(|d| {
                let dd = n / d;
                let u = u_numeric(&Rational::from((dd, d)), work);
                let g = MpFloat::with_val(work, gcd_u64(d, dd)).sqrt();
                (d, u.div_float(&g))
            })
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Ok(Self { n, prec, terms })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `Z_n(s)`.
    pub fn eval(&self, s: &PrecComplex) -> PrecComplex {
        let s = s.with_prec(self.prec + ZETA_GUARD);
        let mut acc = PrecComplex::zero(self.prec + ZETA_GUARD);
        for (d, c) in &self.terms {
            acc += &(c * &PrecComplex::pow_real_base(&Rational::from(*d), &s));
        }
        acc
    }

    /// `L_n(s) = n^{-s/2} Z_n(s)`.
    pub fn completed(&self, s: &PrecComplex) -> PrecComplex {
        let s = s.with_prec(self.prec + ZETA_GUARD);
        let half = Rational::from((-1, 2));
        let scale = PrecComplex::pow_real_base(&Rational::from(self.n), &s.mul_rational(&half));
        scale * self.eval(&s)
    }

    /// `|L_n(1 - s) - w conj(L_n(conj s))|`.
    pub fn functional_equation_residual(&self, s: &PrecComplex) -> f64 {
        let prec = self.prec + ZETA_GUARD;
        let one = PrecComplex::one(prec);
        let lhs = self.completed(&(&one - s));
        let rhs = PrecComplex::eighth_root(1, prec) * self.completed(&s.conj()).conj();
        (lhs - rhs).abs_f64()
    }
}

/// `Z_n(s)` by the divisor sum.
pub fn zeta_direct(n: u64, s: &PrecComplex) -> Result<PrecComplex> {
    Ok(FiniteZeta::new(n, s.prec_bits())?.eval(s))
}

pub fn functional_equation_residual(n: u64, s: &PrecComplex) -> Result<f64> {
    Ok(FiniteZeta::new(n, s.prec_bits())?.functional_equation_residual(s))
}

/// Which of the four closed forms applies to a local factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalCase {
    OddPrimeOddExponent,
    OddPrimeEvenExponent,
    TwoOddExponent,
    TwoEvenExponent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorMode {
    /// The defining sum over `k = 0..alpha`.
    Direct,
    /// The factorized closed form.
    Closed,
    /// For `p = 2`, odd `alpha`: the variant `(1 + X^K)(1 + eps X^K) / (1 - X)`.
    /// It disagrees with the defining sum and is kept only for comparison.
    ClosedDisplayVariant,
}

/// One factor `(1 - X^K) / (1 - X)` or `1 + eps X^K` of a closed form, `X = p^{s-1/2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosedTerm {
    Geometric { k: u32 },
    Unit { k: u32, phase: Rational },
}

/// The `p`-part `Z_{n,p}` of `Z_n` for `n = p^alpha m`, `p` not dividing `m`.
#[derive(Debug, Clone)]
pub struct LocalFactor {
    pub p: u64,
    pub alpha: u32,
    pub m: u64,
    pub beta: u32,
    pub case: LocalCase,
    /// The unit `eps` of the closed form (absent for odd `p`, even `alpha`).
    pub unit: Option<CyclotomicInt>,
    /// Phase `phi` with `eps = e(phi)`.
    unit_phase: Option<Rational>,
    prec: u32,
    /// Coefficients `u(n / p^{2k}) p^{-mu(k)/2}` of `p^{ks}`.
    direct: Vec<PrecComplex>,
}

impl LocalFactor {
    pub fn new(n: u64, p: u64, prec: u32) -> Result<Self> {
        check_even(n)?;
        let alpha = factorize(n).into_iter().find(|&(q, _)| q == p).map(|(_, e)| e);
        let Some(alpha) = alpha else {
            return invalid(format!("{p} is not a prime divisor of {n}"));
        };
        let m = n / p.pow(alpha);
        let beta = alpha / 2;
        let work = prec + ZETA_GUARD;
        let direct = (0..=alpha)
            .map(|k| {
                let u = u_numeric(&Rational::from((n, p.pow(2 * k))), work);
                let mu = k.min(alpha - k);
                u.div_float(&MpFloat::with_val(work, p.pow(mu)).sqrt())
            })
            .collect();
        let (case, unit, unit_phase) = match (p == 2, alpha % 2 == 1) {
            (false, true) => {
                let sym = crate::number::jacobi(m as i64, p as i64)?;
                let phase = Rational::from((1 - p as i64, 8)) + if sym < 0 { Rational::from((1, 2)) } else { Rational::new() };
                (LocalCase::OddPrimeOddExponent, Some(u_epsilon(m as i64, p, alpha)?), Some(frac(&phase)))
            }
            (false, false) => (LocalCase::OddPrimeEvenExponent, None, None),
            (true, true) => {
                let sym = crate::number::jacobi(2, m as i64)?;
                let phase = Rational::from((m as i64, 8)) + if sym < 0 { Rational::from((1, 2)) } else { Rational::new() };
                (LocalCase::TwoOddExponent, Some(u_epsilon(m as i64, 2, alpha)?), Some(frac(&phase)))
            }
            (true, false) => {
                let phase = Rational::from((m as i64, 8));
                (LocalCase::TwoEvenExponent, Some(crate::number::eighth_root(m as i64)), Some(frac(&phase)))
            }
        };
        Ok(Self { p, alpha, m, beta, case, unit, unit_phase, prec, direct })
    }

    /// The closed form as a product of geometric and unit factors.
    pub fn closed_terms(&self) -> Vec<ClosedTerm> {
        let k = self.beta + 1;
        let phase = || self.unit_phase.clone().expect("unit phase");
        match self.case {
            LocalCase::OddPrimeOddExponent | LocalCase::TwoOddExponent => {
                vec![ClosedTerm::Geometric { k }, ClosedTerm::Unit { k, phase: phase() }]
            }
            LocalCase::OddPrimeEvenExponent => vec![ClosedTerm::Geometric { k: self.alpha + 1 }],
            LocalCase::TwoEvenExponent => {
                vec![ClosedTerm::Geometric { k: self.beta }, ClosedTerm::Unit { k, phase: phase() }]
            }
        }
    }

    fn x_power(&self, s: &PrecComplex, k: u32) -> PrecComplex {
        let half = Rational::from((1, 2));
        let shifted = s - &PrecComplex::from_rational(&half, s.prec_bits());
        let exponent = shifted.mul_rational(&Rational::from(k));
        PrecComplex::pow_real_base(&Rational::from(self.p), &exponent)
    }

    pub fn eval(&self, s: &PrecComplex, mode: FactorMode) -> PrecComplex {
        let work = self.prec + ZETA_GUARD;
        let s = s.with_prec(work);
        match mode {
            FactorMode::Direct => {
                let mut acc = PrecComplex::zero(work);
                let mut pk = PrecComplex::one(work);
                let ps = PrecComplex::pow_real_base(&Rational::from(self.p), &s);
                for c in &self.direct {
                    acc += &(c * &pk);
                    pk = &pk * &ps;
                }
                acc
            }
            FactorMode::Closed => {
                let mut acc = PrecComplex::one(work);
                for term in self.closed_terms() {
                    acc = acc * self.eval_term(&term, &s);
                }
                acc
            }
            FactorMode::ClosedDisplayVariant => {
                if self.case != LocalCase::TwoOddExponent {
                    return self.eval(&s, FactorMode::Closed);
                }
                let k = self.beta + 1;
                let one = PrecComplex::one(work);
                let xk = self.x_power(&s, k);
                let eps = PrecComplex::e_rational(self.unit_phase.as_ref().unwrap(), work);
                let num = (&one + &xk) * (&one + &eps * &xk);
                num / (&one - &self.x_power(&s, 1))
            }
        }
    }

    fn eval_term(&self, term: &ClosedTerm, s: &PrecComplex) -> PrecComplex {
        let work = s.prec_bits();
        match term {
            // (1 - X^k) / (1 - X) summed as a polynomial so X = 1 needs no care
            ClosedTerm::Geometric { k } => {
                let x = self.x_power(s, 1);
                let mut acc = PrecComplex::zero(work);
                let mut xj = PrecComplex::one(work);
                for _ in 0..*k {
                    acc += &xj;
                    xj = &xj * &x;
                }
                acc
            }
            ClosedTerm::Unit { k, phase } => {
                PrecComplex::one(work) + PrecComplex::e_rational(phase, work) * self.x_power(s, *k)
            }
        }
    }
}

pub fn euler_factor(n: u64, p: u64, s: &PrecComplex, mode: FactorMode) -> Result<PrecComplex> {
    Ok(LocalFactor::new(n, p, s.prec_bits())?.eval(s, mode))
}

/// All local factors of `Z_n`, in increasing order of `p`.
pub fn local_factors(n: u64, prec: u32) -> Result<Vec<LocalFactor>> {
    check_even(n)?;
    factorize(n).into_iter().map(|(p, _)| LocalFactor::new(n, p, prec)).collect()
}

/// `|Z_n(s) - prod_p Z_{n,p}(s)|` with the factors in direct form.
pub fn euler_product_residual(n: u64, s: &PrecComplex) -> Result<f64> {
    let zeta = FiniteZeta::new(n, s.prec_bits())?;
    let mut prod = PrecComplex::one(s.prec_bits() + ZETA_GUARD);
    for f in local_factors(n, s.prec_bits())? {
        prod = prod * f.eval(s, FactorMode::Direct);
    }
    Ok((zeta.eval(s) - prod).abs_f64())
}

/// A zero `1/2 + i t` of `Z_n`, `t = 2 pi r / log p`.
#[derive(Debug, Clone)]
pub struct CriticalZero {
    pub s: PrecComplex,
    /// `r = t log(p) / 2 pi`, exact.
    pub turns: Rational,
    /// The prime whose local factor vanishes (`0` when `t = 0`, shared by all).
    pub p: u64,
    pub multiplicity: u32,
}

impl CriticalZero {
    pub fn t(&self) -> f64 {
        self.s.im().to_f64()
    }
}

/// Zeros of `Z_n` on `Re(s) = 1/2` with `t_min <= t <= t_max`, from the closed forms.
///
/// The factor `(1 - X^K)/(1 - X)` vanishes at `X^K = 1`, `X != 1`, and
/// `1 + e(phi) X^K` at `X^K = e(1/2 - phi)`. With `X = p^{it}` these are
/// arithmetic progressions in `t`. Coinciding zeros add their multiplicities.
pub fn zeros_in_window(n: u64, t_min: f64, t_max: f64, prec: u32) -> Result<Vec<CriticalZero>> {
    if !(t_min < t_max) {
        return invalid(format!("empty window [{t_min}, {t_max}]"));
    }
    let mut found: BTreeMap<(u64, Rational), u32> = BTreeMap::new();
    for factor in local_factors(n, prec)? {
        let log_p = (factor.p as f64).ln();
        let two_pi = std::f64::consts::TAU;
        for term in factor.closed_terms() {
            let (k, offset) = match &term {
                ClosedTerm::Geometric { k } => (*k, Rational::new()),
                ClosedTerm::Unit { k, phase } => (*k, frac(&(Rational::from((1, 2)) - phase))),
            };
            if k == 0 {
                continue;
            }
            // t = 2 pi (j + offset) / (k log p)
            let scale = k as f64 * log_p / two_pi;
            let off = offset.to_f64();
            let j_lo = (t_min * scale - off).floor() as i64 - 1;
            let j_hi = (t_max * scale - off).ceil() as i64 + 1;
            for j in j_lo..=j_hi {
                if matches!(term, ClosedTerm::Geometric { .. }) && j.rem_euclid(k as i64) == 0 {
                    continue;
                }
                let turns = (Rational::from(j) + &offset) / Rational::from(k);
                let t = std::f64::consts::TAU * turns.to_f64() / log_p;
                if t < t_min - 1e-9 || t > t_max + 1e-9 {
                    continue;
                }
                let key = if turns == 0 { (0, turns) } else { (factor.p, turns) };
                *found.entry(key).or_insert(0) += 1;
            }
        }
    }
    let work = prec + ZETA_GUARD;
    let mut zeros: Vec<CriticalZero> = found
        .into_iter()
        .map(|((p, turns), multiplicity)| {
            let t = if p == 0 {
                MpFloat::new(work)
            } else {
                pi(work) * 2u32 * MpFloat::with_val(work, &turns) / MpFloat::with_val(work, p).ln()
            };
            let s = PrecComplex::from_parts(MpFloat::with_val(work, 0.5), t);
            CriticalZero { s, turns, p, multiplicity }
        })
        .filter(|z| {
            let t = z.t();
            t >= t_min && t <= t_max
        })
        .collect();
    zeros.sort_by(|a, b| a.s.im().partial_cmp(b.s.im()).unwrap());
    Ok(zeros)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> PrecComplex {
        PrecComplex::from_f64(re, im, 128)
    }

    /// `1 + w 2^{s - 1/2}`, the value of `Z_2`.
    fn z2(s: &PrecComplex) -> PrecComplex {
        let shifted = s - &c(0.5, 0.0);
        PrecComplex::one(192) + PrecComplex::eighth_root(1, 192) * PrecComplex::pow_real_base(&Rational::from(2), &shifted)
    }

    #[test]
    fn z2_matches_its_closed_expression() {
        for s in [c(0.0, 0.0), c(0.5, 0.0), c(1.0, 1.0), c(-2.0, 3.5)] {
            assert!((zeta_direct(2, &s).unwrap() - z2(&s)).abs_f64() < 1e-30);
            for mode in [FactorMode::Direct, FactorMode::Closed] {
                assert!((euler_factor(2, 2, &s, mode).unwrap() - z2(&s)).abs_f64() < 1e-30);
            }
        }
        let variant = euler_factor(2, 2, &c(0.0, 0.0), FactorMode::ClosedDisplayVariant).unwrap();
        assert!((variant - z2(&c(0.0, 0.0))).abs_f64() > 0.1);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(zeta_direct(3, &c(0.0, 0.0)).is_err());
        assert!(zeta_direct(0, &c(0.0, 0.0)).is_err());
        assert!(euler_factor(6, 5, &c(0.0, 0.0), FactorMode::Direct).is_err());
        assert!(zeros_in_window(2, 1.0, 1.0, 128).is_err());
    }

    #[test]
    fn functional_equation_and_euler_product() {
        assert!(functional_equation_residual(2, &c(0.3, 2.0)).unwrap() < 1e-25);
        assert!(functional_equation_residual(2, &c(0.5, 0.0)).unwrap() < 1e-25);
        assert!(functional_equation_residual(12, &c(0.7, -1.1)).unwrap() < 1e-25);
        assert!(euler_product_residual(6, &c(1.0, 1.0)).unwrap() < 1e-25);
        assert!(euler_product_residual(60, &c(-2.0, 0.5)).unwrap() < 1e-25);
        let s = c(0.0, 0.0);
        let prod = euler_factor(6, 2, &s, FactorMode::Direct).unwrap() * euler_factor(6, 3, &s, FactorMode::Direct).unwrap();
        assert!((zeta_direct(6, &s).unwrap() - prod).abs_f64() < 1e-30);
    }

    #[test]
    fn closed_local_factor_examples() {
        let s = c(0.5, 0.0);
        let d = euler_factor(4, 2, &s, FactorMode::Direct).unwrap();
        let cl = euler_factor(4, 2, &s, FactorMode::Closed).unwrap();
        assert!((d - cl).abs_f64() < 1e-30);
        // p odd, alpha even: (1 - X^3) / (1 - X)
        for s in [c(0.1, 0.2), c(2.0, -1.0), c(-1.5, 4.0)] {
            let x = PrecComplex::pow_real_base(&Rational::from(3), &(&s - &c(0.5, 0.0)));
            let one = PrecComplex::one(128);
            let expected = (&one - &x.powi(3)) / (&one - &x);
            let cl = euler_factor(18, 3, &s, FactorMode::Closed).unwrap();
            let d = euler_factor(18, 3, &s, FactorMode::Direct).unwrap();
            assert!((cl.clone() - expected).abs_f64() < 1e-25);
            assert!((cl - d).abs_f64() < 1e-25);
        }
    }

    #[test]
    fn zeros_of_z2() {
        let zeros = zeros_in_window(2, 0.0, 10.0, 128).unwrap();
        assert_eq!(zeros.len(), 1);
        let expected = 0.75 * std::f64::consts::PI / std::f64::consts::LN_2;
        assert!((zeros[0].t() - expected).abs() < 1e-12);
        assert!((zeros[0].t() - 3.399270).abs() < 1e-6);
        let z = zeta_direct(2, &zeros[0].s).unwrap();
        assert!(z.abs_f64() < 1e-20);
        // off the line the same heights are not zeros
        let off = PrecComplex::from_parts(MpFloat::with_val(128, 0.3), zeros[0].s.im().clone());
        assert!(zeta_direct(2, &off).unwrap().abs_f64() > 0.01);
    }

    #[test]
    fn zeros_of_z4_vanish() {
        let zeros = zeros_in_window(4, 0.0, 20.0, 128).unwrap();
        assert!(!zeros.is_empty());
        for z in zeros {
            assert_eq!(*z.s.re(), 0.5);
            assert!(zeta_direct(4, &z.s).unwrap().abs_f64() < 1e-20, "t = {}", z.t());
        }
    }
}
