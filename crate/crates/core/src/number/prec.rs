//! Multiprecision complex numbers backed by MPC.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::{Constant, Special};
use rug::ops::Pow;
use rug::{Assign, Complex, Float, Rational};

use super::rational::frac;

/// Default working precision in bits.
pub const DEFAULT_PREC_BITS: u32 = 128;
/// Smallest precision a [`PrecComplex`] may carry.
pub const MIN_PREC_BITS: u32 = 64;
/// Default tolerance for identity checks at the default precision.
pub const DEFAULT_TOL: f64 = 1e-25;

/// Extra bits used internally when evaluating transcendental functions.
const GUARD_BITS: u32 = 16;

pub fn clamp_prec(prec: u32) -> u32 {
    prec.max(MIN_PREC_BITS)
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// A complex number with an explicit precision budget.
///
/// Binary operations produce a result at the larger of the two operand
/// precisions, so precision never drops silently.
#[derive(Clone, PartialEq)]
pub struct PrecComplex {
    inner: Complex,
}

impl PrecComplex {
    pub fn zero(prec: u32) -> Self {
        Self::from_complex(Complex::new(clamp_prec(prec)))
    }

    pub fn one(prec: u32) -> Self {
        Self::from_f64(1.0, 0.0, prec)
    }

    pub fn i(prec: u32) -> Self {
        Self::from_f64(0.0, 1.0, prec)
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Self::from_complex(Complex::with_val(clamp_prec(prec), (re, im)))
    }

    pub fn from_rational(x: &Rational, prec: u32) -> Self {
        let prec = clamp_prec(prec);
        Self::from_complex(Complex::with_val(prec, (x, 0)))
    }

    pub fn from_parts(re: Float, im: Float) -> Self {
        let prec = clamp_prec(re.prec().max(im.prec()));
        Self::from_complex(Complex::with_val(prec, (re, im)))
    }

    pub fn from_complex(inner: Complex) -> Self {
        let (pr, pi) = inner.prec();
        if pr.min(pi) < MIN_PREC_BITS {
            let prec = pr.max(pi).max(MIN_PREC_BITS);
            return Self { inner: Complex::with_val(prec, inner) };
        }
        Self { inner }
    }

    /// Parses `re,im` (or a bare real number).
    pub fn parse(text: &str, prec: u32) -> Option<Self> {
        let prec = clamp_prec(prec);
        let mut parts = text.split(',');
        let re = Float::parse(parts.next()?.trim()).ok()?;
        let im = match parts.next() {
            Some(s) => Float::parse(s.trim()).ok()?,
            None => Float::parse("0").ok()?,
        };
        if parts.next().is_some() {
            return None;
        }
        Some(Self::from_parts(Float::with_val(prec, re), Float::with_val(prec, im)))
    }

    /// `e(x) = exp(2 pi i x)` for rational `x`, reduced mod 1 exactly first.
    pub fn e_rational(x: &Rational, prec: u32) -> Self {
        let prec = clamp_prec(prec);
        let work = prec + GUARD_BITS;
        let r = frac(x);
        let angle = Float::with_val(work, &r) * (pi(work) * 2u32);
        let (s, c) = angle.sin_cos(Float::new(work));
        Self::from_complex(Complex::with_val(prec, (c, s)))
    }

    /// `e(x)` for a complex argument: `exp(2 pi i x)`.
    pub fn e(x: &PrecComplex) -> Self {
        let prec = x.prec_bits();
        let work = prec + GUARD_BITS;
        let re = Float::with_val(work, x.re().fract_ref());
        let angle = re * (pi(work) * 2u32);
        let (s, c) = angle.sin_cos(Float::new(work));
        let modulus = (Float::with_val(work, x.im()) * (pi(work) * -2i32)).exp();
        Self::from_complex(Complex::with_val(prec, (c * &modulus, s * modulus)))
    }

    /// `w^k` where `w = exp(pi i / 4)`.
    pub fn eighth_root(k: i64, prec: u32) -> Self {
        Self::e_rational(&Rational::from((k, 8)), prec)
    }

    pub fn prec_bits(&self) -> u32 {
        let (a, b) = self.inner.prec();
        a.max(b)
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self::from_complex(Complex::with_val(clamp_prec(prec), &self.inner))
    }

    pub fn re(&self) -> &Float {
        self.inner.real()
    }

    pub fn im(&self) -> &Float {
        self.inner.imag()
    }

    pub fn as_complex(&self) -> &Complex {
        &self.inner
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec_bits(), self.inner.abs_ref())
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    pub fn norm_sqr(&self) -> Float {
        Float::with_val(self.prec_bits(), self.inner.norm_ref())
    }

    pub fn conj(&self) -> Self {
        Self::from_complex(self.inner.clone().conj())
    }

    pub fn exp(&self) -> Self {
        Self::from_complex(self.inner.clone().exp())
    }

    /// Principal square root, with `sqrt(-x) = i sqrt(x)` for `x > 0`.
    pub fn sqrt(&self) -> Self {
        let mut z = self.inner.clone();
        // a signed zero imaginary part would select the lower branch on the cut
        if z.imag().is_zero() {
            z.mut_imag().assign(Special::Zero);
        }
        Self::from_complex(z.sqrt())
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        Self::from_complex(self.inner.clone().ln())
    }

    /// `base^s = exp(s log base)` for a positive rational base.
    pub fn pow_real_base(base: &Rational, s: &PrecComplex) -> Self {
        let prec = s.prec_bits();
        let log = Float::with_val(prec + GUARD_BITS, base).ln();
        let exponent = Complex::with_val(prec + GUARD_BITS, s.as_complex() * log);
        Self::from_complex(Complex::with_val(prec, exponent.exp()))
    }

    pub fn powi(&self, k: i32) -> Self {
        Self::from_complex(Complex::with_val(self.prec_bits(), self.inner.clone().pow(k)))
    }

    pub fn mul_float(&self, x: &Float) -> Self {
        Self::from_complex(Complex::with_val(self.prec_bits(), &self.inner * x))
    }

    pub fn mul_rational(&self, x: &Rational) -> Self {
        let f = Float::with_val(self.prec_bits() + GUARD_BITS, x);
        self.mul_float(&f)
    }

    pub fn div_float(&self, x: &Float) -> Self {
        Self::from_complex(Complex::with_val(self.prec_bits(), &self.inner / x))
    }

    /// Decimal strings `(re, im)` carrying all significant digits.
    pub fn to_decimal_strings(&self) -> (String, String) {
        (float_to_decimal(self.re()), float_to_decimal(self.im()))
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re().to_f64(), self.im().to_f64())
    }

    pub fn is_zero(&self) -> bool {
        self.inner.real().is_zero() && self.inner.imag().is_zero()
    }
}

/// Decimal string of a float at its full precision.
pub fn float_to_decimal(x: &Float) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, None)
}

/// `|a - b|` as an `f64`.
pub fn dist(a: &PrecComplex, b: &PrecComplex) -> f64 {
    (a - b).abs_f64()
}

impl fmt::Debug for PrecComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_decimal_strings();
        write!(f, "({re}, {im})")
    }
}

impl fmt::Display for PrecComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64_pair();
        write!(f, "{re:+.20e}{im:+.20e}i")
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<&PrecComplex> for &PrecComplex {
            type Output = PrecComplex;
            fn $method(self, rhs: &PrecComplex) -> PrecComplex {
                let prec = self.prec_bits().max(rhs.prec_bits());
                PrecComplex::from_complex(Complex::with_val(prec, &self.inner $op &rhs.inner))
            }
        }
        impl $tr<PrecComplex> for PrecComplex {
            type Output = PrecComplex;
            fn $method(self, rhs: PrecComplex) -> PrecComplex {
                &self $op &rhs
            }
        }
        impl $tr<&PrecComplex> for PrecComplex {
            type Output = PrecComplex;
            fn $method(self, rhs: &PrecComplex) -> PrecComplex {
                &self $op rhs
            }
        }
        impl $tr<PrecComplex> for &PrecComplex {
            type Output = PrecComplex;
            fn $method(self, rhs: PrecComplex) -> PrecComplex {
                self $op &rhs
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

impl AddAssign<&PrecComplex> for PrecComplex {
    fn add_assign(&mut self, rhs: &PrecComplex) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&PrecComplex> for PrecComplex {
    fn sub_assign(&mut self, rhs: &PrecComplex) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&PrecComplex> for PrecComplex {
    fn mul_assign(&mut self, rhs: &PrecComplex) {
        *self = &*self * rhs;
    }
}

impl Neg for PrecComplex {
    type Output = PrecComplex;
    fn neg(self) -> PrecComplex {
        PrecComplex::from_complex(-self.inner)
    }
}

impl Neg for &PrecComplex {
    type Output = PrecComplex;
    fn neg(self) -> PrecComplex {
        -(self.clone())
    }
}
