//! Two interchangeable evaluation backends for sums of roots of unity.
//!
//! [`Float`] evaluates everything as [`PrecComplex`] at a fixed precision.
//! [`Exact`] works in `Q(zeta_M)` and decides identities by exact equality;
//! it also embeds its values numerically so both backends report a residual.

use std::fmt;
use std::str::FromStr;

use rug::{Float as MpFloat, Integer, Rational};

use crate::error::{Error, Result};
use crate::number::prec::{dist, PrecComplex};
use crate::number::roots::{root_of_unity, sqrt_as_cyclotomic};
use crate::number::CyclotomicInt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BackendKind {
    Exact,
    Float,
}

impl BackendKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BackendKind::Exact => "exact",
            BackendKind::Float => "float",
        }
    }
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BackendKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(BackendKind::Exact),
            "float" => Ok(BackendKind::Float),
            other => Err(Error::Parse(format!("unknown backend {other:?} (expected exact or float)"))),
        }
    }
}

/// Outcome of comparing the two sides of an identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    /// `|lhs - rhs|` evaluated numerically.
    pub value: f64,
    /// Exact verdict, present only for the exact backend.
    pub exact: Option<bool>,
}

impl Residual {
    pub fn numeric(value: f64) -> Self {
        Self { value, exact: None }
    }

    /// The exact verdict when available, otherwise `value < tol`.
    pub fn passes(&self, tol: f64) -> bool {
        match self.exact {
            Some(verdict) => verdict,
            None => self.value < tol,
        }
    }

    /// Componentwise worst case of two residuals.
    pub fn max(self, other: Residual) -> Residual {
        let exact = match (self.exact, other.exact) {
            (Some(a), Some(b)) => Some(a && b),
            (a, b) => a.or(b),
        };
        Residual { value: self.value.max(other.value), exact }
    }
}

/// Histogram of phases `k / den`, the common input of both backends.
#[derive(Debug, Clone)]
pub struct PhaseHistogram {
    den: u64,
    counts: Vec<i64>,
}

impl PhaseHistogram {
    pub fn new(den: u64) -> Self {
        assert!(den >= 1, "phase denominator must be positive");
        Self { den, counts: vec![0; den as usize] }
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    /// Records `e(numer / den)`.
    pub fn push(&mut self, numer: i128) {
        self.push_weighted(numer, 1);
    }

    pub fn push_weighted(&mut self, numer: i128, weight: i64) {
        let k = numer.rem_euclid(self.den as i128) as usize;
        self.counts[k] += weight;
    }

    /// Records `e(x)`; the denominator of `x` must divide `den`.
    pub fn push_rational(&mut self, x: &Rational) {
        let d = x.denom().to_u64().filter(|d| self.den % d == 0).expect("phase denominator does not divide");
        let scaled = Integer::from(x.numer() * (self.den / d));
        let k = Integer::from(scaled % self.den).to_i64().unwrap();
        self.push(k as i128);
    }
}

/// An element `num / den` of `Q(zeta_M)` with `den > 0`.
#[derive(Clone)]
pub struct CycloFraction {
    num: CyclotomicInt,
    den: Integer,
}

/// Prints `(c_0 + c_1 z + ...) / den` with `z = e(1/M)` after reduction.
impl fmt::Display for CycloFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.num.reduced();
        let mut poly = String::new();
        let mut count = 0;
        for (k, c) in num.coeffs().iter().enumerate().filter(|(_, c)| **c != 0) {
            let monomial = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            let magnitude = Integer::from(c.abs_ref());
            let body = if monomial.is_empty() {
                magnitude.to_string()
            } else if magnitude == 1 {
                monomial
            } else {
                format!("{magnitude}{monomial}")
            };
            match (count, *c < 0) {
                (0, true) => poly.push_str(&format!("-{body}")),
                (0, false) => poly.push_str(&body),
                (_, true) => poly.push_str(&format!(" - {body}")),
                (_, false) => poly.push_str(&format!(" + {body}")),
            }
            count += 1;
        }
        if count == 0 {
            return f.write_str("0");
        }
        if self.den != 1 {
            poly = if count > 1 { format!("({poly})/{}", self.den) } else { format!("{poly}/{}", self.den) };
        }
        let uses_z = num.coeffs().iter().skip(1).any(|c| *c != 0);
        if uses_z {
            write!(f, "{poly} with z = e(1/{})", num.order())
        } else {
            f.write_str(&poly)
        }
    }
}

impl CycloFraction {
    pub fn new(num: CyclotomicInt, den: Integer) -> Self {
        assert!(den > 0, "denominator must be positive");
        let mut out = Self { num, den };
        out.normalize();
        out
    }

    pub fn from_cyclotomic(num: CyclotomicInt) -> Self {
        Self { num, den: Integer::from(1) }
    }

    pub fn from_rational(x: &Rational) -> Self {
        Self::new(CyclotomicInt::from_int(x.numer().clone()), x.denom().clone())
    }

    pub fn numerator(&self) -> &CyclotomicInt {
        &self.num
    }

    pub fn denominator(&self) -> &Integer {
        &self.den
    }

    fn normalize(&mut self) {
        if self.den == 1 {
            return;
        }
        let mut g = self.den.clone();
        for c in self.num.coeffs() {
            if *c != 0 {
                g.gcd_mut(c);
                if g == 1 {
                    return;
                }
            }
        }
        if self.num.is_zero() {
            self.den = Integer::from(1);
            return;
        }
        let coeffs = self.num.coeffs().iter().map(|c| Integer::from(c / &g)).collect();
        self.num = CyclotomicInt::from_coeffs(self.num.order(), coeffs);
        self.den /= g;
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::new(self.num.add(&other.num), self.den.clone());
        }
        let a = self.num.scale(&other.den);
        let b = other.num.scale(&self.den);
        Self::new(a.add(&b), Integer::from(&self.den * &other.den))
    }

    pub fn neg(&self) -> Self {
        Self { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), Integer::from(&self.den * &other.den))
    }

    pub fn conj(&self) -> Self {
        Self { num: self.num.conj(), den: self.den.clone() }
    }

    pub fn scale(&self, x: &Rational) -> Self {
        Self::new(self.num.scale(x.numer()), Integer::from(&self.den * x.denom()))
    }

    pub fn mul_unit(&self, x: &Rational) -> Self {
        let d = x.denom().to_u64().expect("denominator exceeds u64");
        let k = Integer::from(x.numer() % d).to_i64().unwrap();
        Self { num: self.num.mul_zeta(k, d), den: self.den.clone() }
    }

    pub fn mul_sqrt(&self, m: u64) -> Self {
        Self { num: self.num.mul(&sqrt_as_cyclotomic(m)), den: self.den.clone() }
    }

    /// `self / sqrt(m)` computed as `self * sqrt(m) / m`.
    pub fn div_sqrt(&self, m: u64) -> Self {
        Self::new(self.num.mul(&sqrt_as_cyclotomic(m)), Integer::from(&self.den * m))
    }

    pub fn embed(&self, prec: u32) -> PrecComplex {
        let v = self.num.embed(prec + self.den.significant_bits());
        let d = MpFloat::with_val(v.prec_bits(), &self.den);
        v.div_float(&d).with_prec(prec)
    }
}

impl PartialEq for CycloFraction {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        self.num.scale(&other.den) == other.num.scale(&self.den)
    }
}

impl fmt::Debug for CycloFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) / {}", self.num, self.den)
    }
}

/// Arithmetic needed to evaluate and compare exponential sums.
pub trait Backend: Sync {
    type Value: Clone + fmt::Debug + Send + Sync;

    fn kind(&self) -> BackendKind;
    /// Precision used for numerical values and embeddings.
    fn prec(&self) -> u32;

    fn zero(&self) -> Self::Value;
    fn one(&self) -> Self::Value {
        self.rational(&Rational::from(1))
    }
    fn rational(&self, x: &Rational) -> Self::Value;
    /// `e(x) = exp(2 pi i x)`.
    fn unit(&self, x: &Rational) -> Self::Value;
    /// `sum_k counts[k] e(k / den)`.
    fn phase_sum(&self, phases: &PhaseHistogram) -> Self::Value;

    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn neg(&self, a: &Self::Value) -> Self::Value;
    fn conj(&self, a: &Self::Value) -> Self::Value;
    fn scale(&self, a: &Self::Value, x: &Rational) -> Self::Value;
    fn mul_unit(&self, a: &Self::Value, x: &Rational) -> Self::Value {
        self.mul(a, &self.unit(x))
    }
    fn mul_sqrt(&self, a: &Self::Value, m: u64) -> Self::Value;
    fn div_sqrt(&self, a: &Self::Value, m: u64) -> Self::Value;

    fn embed(&self, a: &Self::Value) -> PrecComplex;
    fn compare(&self, a: &Self::Value, b: &Self::Value) -> Residual;
}

/// Largest denominator whose roots of unity are tabulated.
const ROOT_TABLE_MAX_DEN: u64 = 4096;
const ROOT_TABLE_MAX_ENTRIES: usize = 256;

thread_local! {
    static ROOT_TABLES: std::cell::RefCell<std::collections::HashMap<(u64, u32), std::rc::Rc<Vec<PrecComplex>>>> =
        std::cell::RefCell::new(std::collections::HashMap::new());
}

/// All `e(k / den)` at `prec`, cached per thread. Entries are computed with
/// `e_rational`, so cached and uncached sums agree bit for bit.
fn root_table(den: u64, prec: u32) -> Option<std::rc::Rc<Vec<PrecComplex>>> {
    if den > ROOT_TABLE_MAX_DEN {
        return None;
    }
    ROOT_TABLES.with(|cell| {
        let mut map = cell.borrow_mut();
        if let Some(t) = map.get(&(den, prec)) {
            return Some(t.clone());
        }
        if map.len() >= ROOT_TABLE_MAX_ENTRIES {
            map.clear();
        }
        let t: Vec<PrecComplex> =
            (0..den).map(|k| PrecComplex::e_rational(&Rational::from((k, den)), prec)).collect();
        let t = std::rc::Rc::new(t);
        map.insert((den, prec), t.clone());
        Some(t)
    })
}

/// Multiprecision floating-point evaluation.
#[derive(Debug, Clone, Copy)]
pub struct Float {
    pub prec: u32,
}

impl Float {
    pub fn new(prec: u32) -> Self {
        Self { prec: crate::number::prec::clamp_prec(prec) }
    }
}

impl Backend for Float {
    type Value = PrecComplex;

    fn kind(&self) -> BackendKind {
        BackendKind::Float
    }

    fn prec(&self) -> u32 {
        self.prec
    }

    fn zero(&self) -> PrecComplex {
        PrecComplex::zero(self.prec)
    }

    fn rational(&self, x: &Rational) -> PrecComplex {
        PrecComplex::from_rational(x, self.prec)
    }

    fn unit(&self, x: &Rational) -> PrecComplex {
        PrecComplex::e_rational(x, self.prec)
    }

    fn phase_sum(&self, phases: &PhaseHistogram) -> PrecComplex {
        let mut acc = PrecComplex::zero(self.prec);
        let table = root_table(phases.den(), self.prec);
        for (k, &c) in phases.counts().iter().enumerate() {
            if c != 0 {
                let z = match &table {
                    Some(t) => t[k].clone(),
                    None => PrecComplex::e_rational(&Rational::from((k as u64, phases.den())), self.prec),
                };
                acc += &z.mul_rational(&Rational::from(c));
            }
        }
        acc
    }

    fn add(&self, a: &PrecComplex, b: &PrecComplex) -> PrecComplex {
        a + b
    }

    fn sub(&self, a: &PrecComplex, b: &PrecComplex) -> PrecComplex {
        a - b
    }

    fn mul(&self, a: &PrecComplex, b: &PrecComplex) -> PrecComplex {
        a * b
    }

    fn neg(&self, a: &PrecComplex) -> PrecComplex {
        -a
    }

    fn conj(&self, a: &PrecComplex) -> PrecComplex {
        a.conj()
    }

    fn scale(&self, a: &PrecComplex, x: &Rational) -> PrecComplex {
        a.mul_rational(x)
    }

    fn mul_sqrt(&self, a: &PrecComplex, m: u64) -> PrecComplex {
        a.mul_float(&MpFloat::with_val(self.prec + 16, m).sqrt())
    }

    fn div_sqrt(&self, a: &PrecComplex, m: u64) -> PrecComplex {
        a.div_float(&MpFloat::with_val(self.prec + 16, m).sqrt())
    }

    fn embed(&self, a: &PrecComplex) -> PrecComplex {
        a.clone()
    }

    fn compare(&self, a: &PrecComplex, b: &PrecComplex) -> Residual {
        Residual::numeric(dist(a, b))
    }
}

/// Exact evaluation in cyclotomic fields; `prec` only affects embeddings.
#[derive(Debug, Clone, Copy)]
pub struct Exact {
    pub prec: u32,
}

impl Exact {
    pub fn new(prec: u32) -> Self {
        Self { prec: crate::number::prec::clamp_prec(prec) }
    }
}

impl Backend for Exact {
    type Value = CycloFraction;

    fn kind(&self) -> BackendKind {
        BackendKind::Exact
    }

    fn prec(&self) -> u32 {
        self.prec
    }

    fn zero(&self) -> CycloFraction {
        CycloFraction::from_cyclotomic(CyclotomicInt::zero(1))
    }

    fn rational(&self, x: &Rational) -> CycloFraction {
        CycloFraction::from_rational(x)
    }

    fn unit(&self, x: &Rational) -> CycloFraction {
        CycloFraction::from_cyclotomic(root_of_unity(x))
    }

    fn phase_sum(&self, phases: &PhaseHistogram) -> CycloFraction {
        CycloFraction::from_cyclotomic(CyclotomicInt::from_histogram(phases.den(), phases.counts()))
    }

    fn add(&self, a: &CycloFraction, b: &CycloFraction) -> CycloFraction {
        a.add(b)
    }

    fn sub(&self, a: &CycloFraction, b: &CycloFraction) -> CycloFraction {
        a.sub(b)
    }

    fn mul(&self, a: &CycloFraction, b: &CycloFraction) -> CycloFraction {
        a.mul(b)
    }

    fn neg(&self, a: &CycloFraction) -> CycloFraction {
        a.neg()
    }

    fn conj(&self, a: &CycloFraction) -> CycloFraction {
        a.conj()
    }

    fn scale(&self, a: &CycloFraction, x: &Rational) -> CycloFraction {
        a.scale(x)
    }

    fn mul_unit(&self, a: &CycloFraction, x: &Rational) -> CycloFraction {
        a.mul_unit(x)
    }

    fn mul_sqrt(&self, a: &CycloFraction, m: u64) -> CycloFraction {
        a.mul_sqrt(m)
    }

    fn div_sqrt(&self, a: &CycloFraction, m: u64) -> CycloFraction {
        a.div_sqrt(m)
    }

    fn embed(&self, a: &CycloFraction) -> PrecComplex {
        a.embed(self.prec)
    }

    fn compare(&self, a: &CycloFraction, b: &CycloFraction) -> Residual {
        Residual { value: dist(&a.embed(self.prec), &b.embed(self.prec)), exact: Some(a == b) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::rat;

    #[test]
    fn exact_values_print_readably() {
        let ex = Exact::new(128);
        assert_eq!(ex.unit(&rat(1, 8)).to_string(), "z with z = e(1/8)");
        assert_eq!(ex.rational(&rat(-3, 4)).to_string(), "-3/4");
        assert_eq!(ex.zero().to_string(), "0");
        let half_root = ex.div_sqrt(&ex.one(), 2);
        let text = half_root.to_string();
        assert!(text.contains("/2") && text.contains("e(1/8)"), "{text}");
    }

    #[test]
    fn backends_agree_on_small_sums() {
        let mut h = PhaseHistogram::new(12);
        for x in 0..12i128 {
            h.push(x * x + 5 * x);
        }
        let fl = Float::new(128);
        let ex = Exact::new(128);
        let a = fl.phase_sum(&h);
        let b = ex.embed(&ex.phase_sum(&h));
        assert!(dist(&a, &b) < 1e-30);
    }

    #[test]
    fn fractions_compare_exactly() {
        let ex = Exact::new(128);
        // (1 + i) / sqrt 2 equals e(1/8)
        let one_plus_i = ex.add(&ex.one(), &ex.unit(&rat(1, 4)));
        let lhs = ex.div_sqrt(&one_plus_i, 2);
        let r = ex.compare(&lhs, &ex.unit(&rat(1, 8)));
        assert_eq!(r.exact, Some(true));
        assert!(r.value < 1e-35);
        let half = ex.scale(&ex.one(), &rat(1, 2));
        assert_eq!(ex.compare(&ex.add(&half, &half), &ex.one()).exact, Some(true));
        assert_eq!(ex.compare(&half, &ex.one()).exact, Some(false));
    }

    #[test]
    fn residual_verdicts() {
        assert!(Residual::numeric(1e-30).passes(1e-25));
        assert!(!Residual { value: 0.0, exact: Some(false) }.passes(1.0));
        let m = Residual::numeric(1e-3).max(Residual { value: 0.0, exact: Some(true) });
        assert_eq!(m.exact, Some(true));
        assert_eq!(m.value, 1e-3);
    }
}
