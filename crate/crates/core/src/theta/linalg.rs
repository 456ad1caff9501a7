//! Small dense complex and real matrices at working precision, plus the
//! Siegel upper half-space point type.

use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::lattice::RatMatrix;
use crate::number::PrecComplex;

/// Square or rectangular complex matrix, row-major.
#[derive(Clone, Debug)]
pub struct CMatrix {
    n_rows: usize,
    n_cols: usize,
    data: Vec<PrecComplex>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize, prec: u32) -> Self {
        Self { n_rows: rows, n_cols: cols, data: vec![PrecComplex::zero(prec); rows * cols] }
    }

    pub fn identity(n: usize, prec: u32) -> Self {
        let mut m = Self::zeros(n, n, prec);
        for i in 0..n {
            m.data[i * n + i] = PrecComplex::one(prec);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<PrecComplex>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if n_rows == 0 || rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::Dimension("complex matrix rows must be nonempty and of equal length".into()));
        }
        Ok(Self { n_rows, n_cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_rational(m: &RatMatrix, prec: u32) -> Self {
        let mut out = Self::zeros(m.rows(), m.cols(), prec);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.data[i * m.cols() + j] = PrecComplex::from_rational(&m[(i, j)], prec);
            }
        }
        out
    }

    /// `re + i im` from two real matrices of the same shape.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>], prec: u32) -> Result<Self> {
        let rows = re
            .iter()
            .zip(im)
            .map(|(r, s)| r.iter().zip(s).map(|(&x, &y)| PrecComplex::from_f64(x, y, prec)).collect())
            .collect();
        Self::from_rows(rows)
    }

    pub fn rows(&self) -> usize {
        self.n_rows
    }

    pub fn cols(&self) -> usize {
        self.n_cols
    }

    pub fn get(&self, i: usize, j: usize) -> &PrecComplex {
        &self.data[i * self.n_cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: PrecComplex) {
        self.data[i * self.n_cols + j] = v;
    }

    pub fn prec(&self) -> u32 {
        self.data.iter().map(PrecComplex::prec_bits).max().unwrap_or(64)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.n_cols, self.n_rows, self.prec());
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Self { data, ..*self }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Self { data, ..*self }
    }

    pub fn scale(&self, k: &PrecComplex) -> Self {
        let data = self.data.iter().map(|a| a * k).collect();
        Self { data, ..*self }
    }

    pub fn neg(&self) -> Self {
        let data = self.data.iter().map(|a| -a).collect();
        Self { data, ..*self }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n_cols, other.n_rows, "dimension mismatch");
        let mut out = Self::zeros(self.n_rows, other.n_cols, self.prec().max(other.prec()));
        for i in 0..self.n_rows {
            for j in 0..other.n_cols {
                let mut acc = PrecComplex::zero(out.prec());
                for k in 0..self.n_cols {
                    acc += &(self.get(i, k) * other.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[PrecComplex]) -> Vec<PrecComplex> {
        assert_eq!(self.n_cols, v.len(), "dimension mismatch");
        (0..self.n_rows)
            .map(|i| {
                let mut acc = PrecComplex::zero(self.prec());
                for (k, x) in v.iter().enumerate() {
                    acc += &(self.get(i, k) * x);
                }
                acc
            })
            .collect()
    }

    /// `x^T M y` without conjugation.
    pub fn bilinear(&self, x: &[PrecComplex], y: &[PrecComplex]) -> PrecComplex {
        dot(x, &self.mul_vec(y))
    }

    pub fn real_part(&self) -> Vec<Vec<Float>> {
        (0..self.n_rows).map(|i| (0..self.n_cols).map(|j| self.get(i, j).re().clone()).collect()).collect()
    }

    pub fn imag_part(&self) -> Vec<Vec<Float>> {
        (0..self.n_rows).map(|i| (0..self.n_cols).map(|j| self.get(i, j).im().clone()).collect()).collect()
    }

    /// Largest `|m_ij - m_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                worst = worst.max(crate::number::prec::dist(self.get(i, j), self.get(j, i)));
            }
        }
        worst
    }

    /// Gauss-Jordan elimination with partial pivoting; returns the inverse
    /// and the determinant.
    pub fn inverse_and_det(&self) -> Result<(Self, PrecComplex)> {
        if self.n_rows != self.n_cols {
            return Err(Error::Dimension("inverse needs a square matrix".into()));
        }
        let n = self.n_rows;
        let prec = self.prec();
        let mut a = self.clone();
        let mut inv = Self::identity(n, prec);
        let mut det = PrecComplex::one(prec);
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a.get(i, k).abs().partial_cmp(&a.get(j, k).abs()).unwrap())
                .unwrap();
            if a.get(p, k).is_zero() {
                return Err(Error::Singular("complex matrix is singular".into()));
            }
            if p != k {
                a.swap_rows(p, k);
                inv.swap_rows(p, k);
                det = -det;
            }
            let pivot = a.get(k, k).clone();
            det *= &pivot;
            for j in 0..n {
                a.set(k, j, a.get(k, j) / &pivot);
                inv.set(k, j, inv.get(k, j) / &pivot);
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let f = a.get(i, k).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    a.set(i, j, a.get(i, j) - &(&f * a.get(k, j)));
                    inv.set(i, j, inv.get(i, j) - &(&f * inv.get(k, j)));
                }
            }
        }
        Ok((inv, det))
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(self.inverse_and_det()?.0)
    }

    pub fn det(&self) -> Result<PrecComplex> {
        match self.inverse_and_det() {
            Ok((_, d)) => Ok(d),
            Err(Error::Singular(_)) => Ok(PrecComplex::zero(self.prec())),
            Err(e) => Err(e),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.n_cols {
            self.data.swap(a * self.n_cols + j, b * self.n_cols + j);
        }
    }
}

pub fn dot(x: &[PrecComplex], y: &[PrecComplex]) -> PrecComplex {
    let prec = x.iter().chain(y).map(PrecComplex::prec_bits).max().unwrap_or(64);
    let mut acc = PrecComplex::zero(prec);
    for (a, b) in x.iter().zip(y) {
        acc += &(a * b);
    }
    acc
}

/// Lower-triangular `L` with `M = L L^T`, or `None` if some pivot falls
/// below `margin`.
pub fn cholesky(m: &[Vec<Float>], margin: &Float) -> Option<Vec<Vec<Float>>> {
    let n = m.len();
    let prec = m[0][0].prec();
    let mut l = vec![vec![Float::new(prec); n]; n];
    for j in 0..n {
        let mut d = m[j][j].clone();
        for k in 0..j {
            d -= Float::with_val(prec, l[j][k].square_ref());
        }
        if d <= *margin {
            return None;
        }
        let ljj = d.sqrt();
        for i in j + 1..n {
            let mut s = m[i][j].clone();
            for k in 0..j {
                s -= Float::with_val(prec, &l[i][k] * &l[j][k]);
            }
            l[i][j] = s / &ljj;
        }
        l[j][j] = ljj;
    }
    Some(l)
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn symmetric_eigenvalues(m: &[Vec<Float>]) -> Vec<Float> {
    let n = m.len();
    let prec = m[0][0].prec();
    let mut a: Vec<Vec<Float>> = m.to_vec();
    let eps = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 4));
    for _sweep in 0..100 {
        let mut off = Float::new(prec);
        let mut scale = Float::new(prec);
        for i in 0..n {
            for j in 0..n {
                let sq = Float::with_val(prec, a[i][j].square_ref());
                if i != j {
                    off += &sq;
                }
                scale += sq;
            }
        }
        if off <= Float::with_val(prec, &eps * &eps) * &scale || off.is_zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].is_zero() {
                    continue;
                }
                // rotation zeroing a[p][q]
                let theta = Float::with_val(prec, &a[q][q] - &a[p][p]) / Float::with_val(prec, &a[p][q] * 2u32);
                let sign = if theta.is_sign_negative() { -1 } else { 1 };
                let root = (Float::with_val(prec, theta.square_ref()) + 1u32).sqrt();
                let t = Float::with_val(prec, sign) / (theta.abs() + root);
                let c = Float::with_val(prec, 1u32) / (Float::with_val(prec, t.square_ref()) + 1u32).sqrt();
                let s = Float::with_val(prec, &t * &c);
                for k in 0..n {
                    let akp = a[k][p].clone();
                    let akq = a[k][q].clone();
                    a[k][p] = Float::with_val(prec, &c * &akp) - Float::with_val(prec, &s * &akq);
                    a[k][q] = Float::with_val(prec, &s * &akp) + Float::with_val(prec, &c * &akq);
                }
                for k in 0..n {
                    let apk = a[p][k].clone();
                    let aqk = a[q][k].clone();
                    a[p][k] = Float::with_val(prec, &c * &apk) - Float::with_val(prec, &s * &aqk);
                    a[q][k] = Float::with_val(prec, &s * &apk) + Float::with_val(prec, &c * &aqk);
                }
            }
        }
    }
    let mut ev: Vec<Float> = (0..n).map(|i| a[i][i].clone()).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

/// Inverse of a lower-triangular real matrix.
pub fn lower_inverse(l: &[Vec<Float>]) -> Vec<Vec<Float>> {
    let n = l.len();
    let prec = l[0][0].prec();
    let mut inv = vec![vec![Float::new(prec); n]; n];
    for j in 0..n {
        inv[j][j] = Float::with_val(prec, 1u32) / &l[j][j];
        for i in j + 1..n {
            let mut s = Float::new(prec);
            for k in j..i {
                s += Float::with_val(prec, &l[i][k] * &inv[k][j]);
            }
            inv[i][j] = -s / &l[i][i];
        }
    }
    inv
}

pub fn real_mul(a: &[Vec<Float>], b: &[Vec<Float>]) -> Vec<Vec<Float>> {
    let prec = a[0][0].prec();
    (0..a.len())
        .map(|i| {
            (0..b[0].len())
                .map(|j| {
                    let mut s = Float::new(prec);
                    for k in 0..b.len() {
                        s += Float::with_val(prec, &a[i][k] * &b[k][j]);
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn real_transpose(a: &[Vec<Float>]) -> Vec<Vec<Float>> {
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

/// A point `(z, tau)` of `C^n x H_n`.
#[derive(Clone, Debug)]
pub struct SiegelPoint {
    pub z: Vec<PrecComplex>,
    pub tau: CMatrix,
}

impl SiegelPoint {
    /// Validates symmetry of `tau` and positive definiteness of `Im tau`
    /// (Cholesky pivots must exceed `2^{-prec/2}`).
    pub fn new(z: Vec<PrecComplex>, tau: CMatrix) -> Result<Self> {
        let n = tau.rows();
        if tau.cols() != n || z.len() != n {
            return Err(Error::Dimension("z must have length n and tau must be n x n".into()));
        }
        let prec = tau.prec();
        let slack = 2f64.powi(-(prec as i32) / 2);
        if tau.asymmetry() > slack {
            return Err(Error::NotSymmetric);
        }
        if cholesky(&tau.imag_part(), &pd_margin(prec)).is_none() {
            return Err(Error::NotPositiveDefinite("Im tau is not positive definite".into()));
        }
        Ok(Self { z, tau })
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn prec(&self) -> u32 {
        self.tau.prec()
    }

    /// Smallest eigenvalue of `Im tau`.
    pub fn lambda_min(&self) -> Float {
        symmetric_eigenvalues(&self.tau.imag_part()).swap_remove(0)
    }
}

pub fn pd_margin(prec: u32) -> Float {
    Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2))
}

/// `tau + r` for a rational matrix `r`.
pub fn add_rational(tau: &CMatrix, r: &RatMatrix) -> CMatrix {
    tau.add(&CMatrix::from_rational(r, tau.prec()))
}

pub fn rational_vec(v: &[Rational], prec: u32) -> Vec<PrecComplex> {
    v.iter().map(|x| PrecComplex::from_rational(x, prec)).collect()
}
