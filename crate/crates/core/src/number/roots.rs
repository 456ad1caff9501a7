//! Roots of unity and square roots of integers as cyclotomic integers.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::{Integer, Rational};

use super::cyclotomic::CyclotomicInt;
use super::prec::PrecComplex;
use super::rational::{factorize, mod_pos};
use crate::error::{invalid, Result};

/// `e(x) = exp(2 pi i x)` in `Z[zeta_m]` with `m` the denominator of `x`.
pub fn root_of_unity(x: &Rational) -> CyclotomicInt {
    let m = x.denom().to_u64().expect("denominator exceeds u64");
    let k = mod_pos(x.numer(), x.denom()).to_i64().expect("exponent exceeds i64");
    CyclotomicInt::zeta_power(m, k)
}

/// `w^k` with `w = e(1/8)`.
pub fn eighth_root(k: i64) -> CyclotomicInt {
    CyclotomicInt::zeta_power(8, k)
}

/// `1` for `a = 1 (mod 4)` and `i` for `a = 3 (mod 4)`.
pub fn epsilon_a(a: i64) -> Result<CyclotomicInt> {
    if a <= 0 || a % 2 == 0 {
        return invalid(format!("epsilon_a needs a positive odd argument, got {a}"));
    }
    Ok(if a % 4 == 1 { CyclotomicInt::one() } else { CyclotomicInt::zeta_power(4, 1) })
}

/// Numerical value of `v` at `prec_bits` bits.
pub fn cyclo_embed(v: &CyclotomicInt, prec_bits: u32) -> PrecComplex {
    v.embed(prec_bits)
}

/// The positive square root of `m` as an element of a cyclotomic ring.
///
/// Writes `m = f^2 u` with `u` squarefree and uses `sqrt 2 = zeta_8 + zeta_8^-1`
/// together with `sqrt v = eps_v^-1 sum_{x mod v} zeta_v^{x^2}` for odd `v`.
/// The result lives in the smallest ring this construction needs.
pub fn sqrt_as_cyclotomic(m: u64) -> CyclotomicInt {
    assert!(m >= 1, "square root of zero requested");
    static CACHE: OnceLock<Mutex<HashMap<u64, CyclotomicInt>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&m) {
        return v.clone();
    }

    let mut square_part = 1u64;
    let mut free = 1u64;
    for (p, e) in factorize(m) {
        square_part *= p.pow(e / 2);
        if e % 2 == 1 {
            free *= p;
        }
    }
    let mut root = CyclotomicInt::from_int(Integer::from(square_part));
    if free % 2 == 0 {
        let sqrt2 = eighth_root(1).add(&eighth_root(-1));
        root = root.mul(&sqrt2);
        free /= 2;
    }
    if free > 1 {
        let mut hist = vec![0i64; free as usize];
        for x in 0..free {
            hist[(x * x % free) as usize] += 1;
        }
        let gauss = CyclotomicInt::from_histogram(free, &hist);
        let unit_inv = if free % 4 == 1 { CyclotomicInt::one() } else { CyclotomicInt::zeta_power(4, 3) };
        root = root.mul(&gauss.mul(&unit_inv));
    }
    cache.lock().unwrap().insert(m, root.clone());
    root
}
