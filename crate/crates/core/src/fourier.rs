//! Fourier analysis on the cyclic group `G_n = Z/nZ`.
//!
//! The transform is unnormalized, `F_n f(x) = sum_y f(y) e_n(-xy)`, so that
//! `F_n F_n f(x) = n f(-x)`. Poisson summation and the quadratic-phase lemma
//! are stated for the unitary transform `n^{-1/2} F_n`.

use rug::Rational;

use crate::backend::{Backend, PhaseHistogram, Residual};
use crate::error::{invalid, Error, Result};
use crate::gauss::{gauss_s, GaussSumSpec};

/// A function `G_n -> C` stored as its values at `0, 1, ..., n-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicFn<V> {
    values: Vec<V>,
}

impl<V: Clone> CyclicFn<V> {
    pub fn new(values: Vec<V>) -> Result<Self> {
        if values.is_empty() {
            return invalid("a function on G_n needs n >= 1 values");
        }
        Ok(Self { values })
    }

    pub fn modulus(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[V] {
        &self.values
    }

    /// Value at `x`, read modulo `n`.
    pub fn at(&self, x: i64) -> &V {
        &self.values[x.rem_euclid(self.values.len() as i64) as usize]
    }

    /// The reflection `x -> f(-x)`.
    pub fn reflect(&self) -> Self {
        let n = self.values.len() as i64;
        Self { values: (0..n).map(|x| self.at(-x).clone()).collect() }
    }

    pub fn map<W>(&self, f: impl Fn(&V) -> W) -> CyclicFn<W> {
        CyclicFn { values: self.values.iter().map(f).collect() }
    }
}

/// `F_n f(x) = sum_y f(y) e_n(-xy)` by direct summation.
pub fn dft<B: Backend>(be: &B, f: &CyclicFn<B::Value>) -> CyclicFn<B::Value> {
    let n = f.modulus() as u64;
    let units: Vec<B::Value> = (0..n).map(|k| be.unit(&Rational::from((k, n)))).collect();
    let values = (0..n)
        .map(|x| {
            let mut acc = be.zero();
            for (y, fy) in f.values().iter().enumerate() {
                let k = (n - (x * y as u64) % n) % n;
                acc = be.add(&acc, &be.mul(fy, &units[k as usize]));
            }
            acc
        })
        .collect();
    CyclicFn { values }
}

/// Residual of Poisson summation for the subgroup pair `H_a`, `H_b` of `G_{ab}`.
///
/// Compares `a^{-1/2} sum_{H_a} f` with `b^{-1/2} sum_{H_b} n^{-1/2} F_n f`,
/// where `H_a` is generated by `n / a = b`.
pub fn poisson_residual<B: Backend>(be: &B, f: &CyclicFn<B::Value>, a: u64, b: u64) -> Result<Residual> {
    let n = f.modulus() as u64;
    if a == 0 || b == 0 || a.checked_mul(b) != Some(n) {
        return invalid(format!("({a}, {b}) is not a factorisation of n = {n}"));
    }
    let mut lhs = be.zero();
    for j in 0..a {
        lhs = be.add(&lhs, f.at((j * b) as i64));
    }
    let lhs = be.div_sqrt(&lhs, a);

    let fhat = dft(be, f);
    let mut rhs = be.zero();
    for j in 0..b {
        rhs = be.add(&rhs, fhat.at((j * a) as i64));
    }
    let rhs = be.div_sqrt(&be.div_sqrt(&rhs, b), n);
    Ok(be.compare(&lhs, &rhs))
}

/// Phases of `f_{a,b,c}(x) = e((a x^2 + b x) / 2c)` on `x = 0..|c|-1`,
/// as numerators over `2|c|`.
pub(crate) fn quadratic_numerators(a: i64, b: i64, c: i64) -> impl Iterator<Item = i128> {
    let m = 2 * c.unsigned_abs() as i128;
    let sign = c.signum() as i128;
    let (a, b) = ((a as i128).rem_euclid(m), (b as i128).rem_euclid(m));
    (0..c.unsigned_abs() as i128).map(move |x| sign * ((a * x % m) * x + b * x) % m)
}

pub(crate) fn check_quadratic(a: i64, b: i64, c: i64) -> Result<()> {
    if c == 0 {
        return invalid("the modulus c must be nonzero");
    }
    if (a as i128 * c as i128 + b as i128) % 2 != 0 {
        return Err(Error::IllDefined(format!("f_({a},{b},{c}) is not a function on G_{c}: ac + b is odd")));
    }
    Ok(())
}

/// The function `f_{a,b,c}` on `G_|c|`; requires `ac + b` even.
pub fn quadratic_phase<B: Backend>(be: &B, a: i64, b: i64, c: i64) -> Result<CyclicFn<B::Value>> {
    check_quadratic(a, b, c)?;
    let den = 2 * c.unsigned_abs();
    let values = quadratic_numerators(a, b, c)
        .map(|k| {
            let mut h = PhaseHistogram::new(den);
            h.push(k);
            be.phase_sum(&h)
        })
        .collect();
    Ok(CyclicFn { values })
}

/// `C(m, n)`: `S_{1,0,n}` for even `m` and `S_{1,1,n} e(1/8n)` for odd `m`.
pub fn whf_constant<B: Backend>(be: &B, m: i64, n: i64) -> Result<B::Value> {
    check_whf(m, n)?;
    if m % 2 == 0 {
        Ok(gauss_s(be, &GaussSumSpec::new(1, 0, n)?))
    } else {
        let s = gauss_s(be, &GaussSumSpec::new(1, 1, n)?);
        Ok(be.mul_unit(&s, &Rational::from((1, 8 * n))))
    }
}

fn check_whf(m: i64, n: i64) -> Result<()> {
    if n <= 0 {
        return invalid(format!("n must be positive, got {n}"));
    }
    if (m - n) % 2 != 0 {
        return Err(Error::IllDefined(format!(
            "f_(1,{m},{n}) is not a function on G_{n}: m and n must have the same parity"
        )));
    }
    Ok(())
}

/// Checks `n^{-1/2} F_n f_{1,m,n} = C(m,n) e(-m^2/8n) f_{-1,m,n}` pointwise.
///
/// Returns `C(m, n)` and the worst pointwise residual.
pub fn whf_check<B: Backend>(be: &B, m: i64, n: i64) -> Result<(B::Value, Residual)> {
    let c = whf_constant(be, m, n)?;
    let f = quadratic_phase(be, 1, m, n)?;
    let g = quadratic_phase(be, -1, m, n)?;
    let fhat = dft(be, &f);
    let factor = be.mul_unit(&c, &Rational::from((-m * m, 8 * n)));
    let mut worst: Option<Residual> = None;
    for x in 0..n {
        let lhs = be.div_sqrt(fhat.at(x), n as u64);
        let rhs = be.mul(&factor, g.at(x));
        let r = be.compare(&lhs, &rhs);
        worst = Some(match worst {
            Some(w) => w.max(r),
            None => r,
        });
    }
    Ok((c, worst.expect("n >= 1")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::{Exact, Float};
    use crate::number::prec::dist;
    use crate::number::{rat, PrecComplex};

    fn fl() -> Float {
        Float::new(128)
    }

    #[test]
    fn transform_of_delta_and_constant() {
        let be = fl();
        let mut delta = vec![be.zero(); 4];
        delta[0] = be.one();
        let d = dft(&be, &CyclicFn::new(delta).unwrap());
        for v in d.values() {
            assert!(dist(v, &be.one()) < 1e-35);
        }
        let c = dft(&be, &CyclicFn::new(vec![be.one(); 3]).unwrap());
        assert!(dist(c.at(0), &PrecComplex::from_f64(3.0, 0.0, 128)) < 1e-35);
        assert!(c.at(1).abs_f64() < 1e-35 && c.at(2).abs_f64() < 1e-35);
    }

    #[test]
    fn quadratic_phase_examples() {
        let be = Exact::new(128);
        let f = quadratic_phase(&be, 1, 0, 2).unwrap();
        assert_eq!(f.modulus(), 2);
        assert_eq!(be.compare(f.at(0), &be.one()).exact, Some(true));
        assert_eq!(be.compare(f.at(1), &be.unit(&rat(1, 4))).exact, Some(true));
        let g = quadratic_phase(&be, 1, 1, 1).unwrap();
        assert_eq!(be.compare(g.at(0), &be.one()).exact, Some(true));
        assert!(matches!(quadratic_phase(&be, 2, 1, 3), Err(Error::IllDefined(_))));
    }

    #[test]
    fn whf_examples() {
        let be = Exact::new(128);
        let (c, r) = whf_check(&be, 0, 2).unwrap();
        assert_eq!(be.compare(&c, &be.unit(&rat(1, 8))).exact, Some(true));
        assert_eq!(r.exact, Some(true));
        assert_eq!(whf_check(&be, 2, 4).unwrap().1.exact, Some(true));
        assert_eq!(whf_check(&be, 1, 3).unwrap().1.exact, Some(true));
        assert!(matches!(whf_check(&be, 1, 2), Err(Error::IllDefined(_))));
        assert!(whf_check(&be, 2, 0).is_err());
    }

    #[test]
    fn poisson_trivial_pairs() {
        let be = Exact::new(128);
        let mut delta = vec![be.zero(); 4];
        delta[0] = be.one();
        let f = CyclicFn::new(delta).unwrap();
        assert_eq!(poisson_residual(&be, &f, 2, 2).unwrap().exact, Some(true));
        assert_eq!(poisson_residual(&be, &f, 4, 1).unwrap().exact, Some(true));
        assert!(poisson_residual(&be, &f, 3, 1).is_err());
    }
}
