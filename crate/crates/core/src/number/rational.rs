//! Helpers around [`rug::Rational`], which already keeps fractions reduced
//! with a positive denominator.

use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Builds the reduced fraction `num/den`.
///
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::from((num, den))
}

/// Parses the text form `p/q` (or a bare integer `p`).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    match text.split_once('/') {
        Some((p, q)) => {
            let p: Integer = p.trim().parse().map_err(|_| bad())?;
            let q: Integer = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(Error::Parse(format!("zero denominator in {text:?}")));
            }
            Ok(Rational::from((p, q)))
        }
        None => {
            let p: Integer = text.parse().map_err(|_| bad())?;
            Ok(Rational::from(p))
        }
    }
}

/// Formats as `p/q`, omitting `/q` when `q == 1`.
pub fn format_rational(x: &Rational) -> String {
    if *x.denom() == 1 {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses a comma separated list of rationals.
pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(parse_rational).collect()
}

/// Representative of `x` modulo 1 in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    let floor = Integer::from(x.floor_ref());
    Rational::from(x - floor)
}

/// Least nonnegative residue of `a` modulo a positive `n`.
pub fn mod_pos(a: &Integer, n: &Integer) -> Integer {
    let mut r = Integer::from(a % n);
    if r < 0 {
        r += n;
    }
    r
}

/// Denominator as a machine integer. Panics if it does not fit.
pub fn denom_u64(x: &Rational) -> u64 {
    x.denom().to_u64().expect("denominator exceeds u64")
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd_u64(a, b) * b
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    gcd_u64(a.unsigned_abs(), b.unsigned_abs()) as i64
}

/// Prime factorisation by trial division, ascending primes with exponents.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// Positive divisors in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}
