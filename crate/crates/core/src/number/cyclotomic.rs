//! Exact arithmetic in the cyclotomic integers `Z[zeta_m]`.
//!
//! An element of order `m` is stored as a coefficient vector of length `m`
//! over the powers `zeta_m^k`. The canonical form is the remainder modulo
//! the cyclotomic polynomial `Phi_m`, so it has degree below `phi(m)` and
//! coefficient-wise comparison is exact equality in `Z[zeta_m]`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rug::{Complex, Float, Integer};

use super::prec::{clamp_prec, pi, PrecComplex};
use super::rational::{divisors, lcm_u64};

/// Coefficients of `Phi_m`, lowest degree first.
pub fn cyclotomic_polynomial(m: u64) -> Arc<Vec<i64>> {
    assert!(m >= 1, "cyclotomic polynomial of order 0");
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }

    // x^m - 1 divided by every Phi_d with d | m, d < m
    let mut poly = vec![0i128; m as usize + 1];
    poly[0] = -1;
    poly[m as usize] = 1;
    for d in divisors(m) {
        if d == m {
            continue;
        }
        let divisor = cyclotomic_polynomial(d);
        poly = divide_exact(&poly, &divisor);
    }
    let coeffs: Vec<i64> = poly
        .into_iter()
        .map(|c| i64::try_from(c).expect("cyclotomic coefficient overflow"))
        .collect();
    let coeffs = Arc::new(coeffs);
    cache.lock().unwrap().insert(m, coeffs.clone());
    coeffs
}

/// Quotient of `num` by the monic `den`; the remainder must vanish.
fn divide_exact(num: &[i128], den: &[i64]) -> Vec<i128> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![0i128; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn];
        if c == 0 {
            continue;
        }
        quot[i] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= c * d as i128;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    quot
}

/// Euler's totient, read off as the degree of `Phi_m`.
pub fn totient(m: u64) -> usize {
    cyclotomic_polynomial(m).len() - 1
}

/// An element `sum_k c_k zeta_m^k` of `Z[zeta_m]` in canonical form.
#[derive(Clone)]
pub struct CyclotomicInt {
    order: u64,
    coeffs: Vec<Integer>,
}

impl CyclotomicInt {
    pub fn zero(order: u64) -> Self {
        assert!(order >= 1, "order must be positive");
        Self { order, coeffs: vec![Integer::new(); order as usize] }
    }

    pub fn one() -> Self {
        Self::from_int(Integer::from(1))
    }

    pub fn from_int(c: Integer) -> Self {
        Self { order: 1, coeffs: vec![c] }
    }

    /// `zeta_order^k`.
    pub fn zeta_power(order: u64, k: i64) -> Self {
        let mut v = vec![Integer::new(); order as usize];
        v[k.rem_euclid(order as i64) as usize] = Integer::from(1);
        Self::from_raw(order, v)
    }

    /// Builds `sum_k coeffs[k] zeta_order^k`; indices wrap modulo `order`.
    pub fn from_coeffs(order: u64, coeffs: Vec<Integer>) -> Self {
        let m = order as usize;
        if coeffs.len() == m {
            return Self::from_raw(order, coeffs);
        }
        let mut v = vec![Integer::new(); m];
        for (k, c) in coeffs.into_iter().enumerate() {
            v[k % m] += c;
        }
        Self::from_raw(order, v)
    }

    /// `sum_k counts[k] zeta_order^k` for a histogram of exponents.
    pub fn from_histogram(order: u64, counts: &[i64]) -> Self {
        let m = order as usize;
        let mut v = vec![Integer::new(); m];
        for (k, &c) in counts.iter().enumerate() {
            if c != 0 {
                v[k % m] += c;
            }
        }
        Self::from_raw(order, v)
    }

    /// Takes a length-`order` vector (already reduced mod `x^order - 1`).
    fn from_raw(order: u64, mut v: Vec<Integer>) -> Self {
        reduce_in_place(order, &mut v);
        Self { order, coeffs: v }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0)
    }

    /// Re-reduces the coefficient vector. The identity on canonical forms.
    pub fn reduced(&self) -> Self {
        Self::from_raw(self.order, self.coeffs.clone())
    }

    /// Same element viewed in `Z[zeta_target]`; `target` must be a multiple of the order.
    pub fn lift(&self, target: u64) -> Self {
        assert!(target % self.order == 0, "cannot lift order {} to {}", self.order, target);
        if target == self.order {
            return self.clone();
        }
        let step = (target / self.order) as usize;
        let mut v = vec![Integer::new(); target as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c != 0 {
                v[k * step] = c.clone();
            }
        }
        Self::from_raw(target, v)
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let l = lcm_u64(self.order, other.order);
        (self.lift(l), other.lift(l))
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.order == other.order {
            let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| Integer::from(a + b)).collect();
            return Self { order: self.order, coeffs };
        }
        let (a, b) = self.common(other);
        a.add(&b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { order: self.order, coeffs: self.coeffs.iter().map(|c| Integer::from(-c)).collect() }
    }

    pub fn scale(&self, k: &Integer) -> Self {
        Self { order: self.order, coeffs: self.coeffs.iter().map(|c| Integer::from(c * k)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let l = lcm_u64(self.order, other.order);
        let sa = (l / self.order) as usize;
        let sb = (l / other.order) as usize;
        let lu = l as usize;
        let nz_b: Vec<(usize, &Integer)> =
            other.coeffs.iter().enumerate().filter(|(_, c)| **c != 0).map(|(k, c)| (k * sb, c)).collect();
        let mut v = vec![Integer::new(); lu];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            let ia = i * sa;
            for &(jb, b) in &nz_b {
                let k = (ia + jb) % lu;
                v[k] += a * b;
            }
        }
        Self::from_raw(l, v)
    }

    /// Multiplies by `zeta_den^k`.
    pub fn mul_zeta(&self, k: i64, den: u64) -> Self {
        let l = lcm_u64(self.order, den);
        let sa = (l / self.order) as usize;
        let shift = (k.rem_euclid(den as i64) as u64 * (l / den)) as usize;
        let lu = l as usize;
        let mut v = vec![Integer::new(); lu];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a != 0 {
                v[(i * sa + shift) % lu] = a.clone();
            }
        }
        Self::from_raw(l, v)
    }

    /// Complex conjugate, `zeta^k -> zeta^{-k}`.
    pub fn conj(&self) -> Self {
        let m = self.order as usize;
        let mut v = vec![Integer::new(); m];
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c != 0 {
                v[(m - k) % m] = c.clone();
            }
        }
        Self::from_raw(self.order, v)
    }

    /// Sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> Integer {
        self.coeffs.iter().map(|c| Integer::from(c.abs_ref())).sum()
    }

    /// Numerical value under `zeta_m -> exp(2 pi i / m)`.
    ///
    /// The absolute error is below `2^(1 - prec) * l1_norm`.
    pub fn embed(&self, prec: u32) -> PrecComplex {
        let prec = clamp_prec(prec);
        let work = prec + 16 + self.l1_norm().significant_bits();
        let m = self.order;
        let two_pi_over_m = pi(work) * 2u32 / Float::with_val(work, m);
        let mut acc = Complex::new(work);
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            if k == 0 {
                acc += c;
                continue;
            }
            let angle = Float::with_val(work, &two_pi_over_m * k as u64);
            let (s, co) = angle.sin_cos(Float::new(work));
            acc += Complex::with_val(work, (co * c, s * c));
        }
        PrecComplex::from_complex(Complex::with_val(prec, acc))
    }
}

/// Reduces a length-`order` vector modulo `Phi_order`, in place.
fn reduce_in_place(order: u64, v: &mut [Integer]) {
    debug_assert_eq!(v.len(), order as usize);
    let phi = cyclotomic_polynomial(order);
    let deg = phi.len() - 1;
    let terms: Vec<(usize, i64)> =
        phi[..deg].iter().enumerate().filter(|(_, c)| **c != 0).map(|(j, c)| (j, *c)).collect();
    for i in (deg..v.len()).rev() {
        if v[i] == 0 {
            continue;
        }
        let c = std::mem::take(&mut v[i]);
        let base = i - deg;
        for &(j, pj) in &terms {
            v[base + j] -= &c * pj;
        }
    }
}

impl PartialEq for CyclotomicInt {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CyclotomicInt {}

impl fmt::Debug for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclotomicInt[{}](", self.order)?;
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}*z^{k}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}
