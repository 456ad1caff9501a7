//! Dense exact matrices over the integers and the rationals.

use std::fmt;
use std::ops::{Index, IndexMut};

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::number::rational::{format_rational, parse_rational};

/// A dense row-major matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<Integer>;
pub type RatMatrix = Matrix<Rational>;

impl<T: Clone + Default> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::default(); rows * cols] }
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::Dimension("matrix must have at least one row and column".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("rows have different lengths".into()));
        }
        Ok(Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    pub fn is_symmetric(&self) -> bool
    where
        T: PartialEq,
    {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

macro_rules! ring_ops {
    ($t:ty) => {
        impl Matrix<$t> {
            pub fn identity(n: usize) -> Self {
                Self::from_fn(n, n, |i, j| <$t>::from(u8::from(i == j)))
            }

            pub fn diagonal(entries: &[$t]) -> Self {
                let n = entries.len();
                Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { <$t>::new() })
            }

            pub fn mul(&self, other: &Self) -> Result<Self> {
                if self.cols != other.rows {
                    return Err(Error::Dimension(format!(
                        "cannot multiply {}x{} by {}x{}",
                        self.rows, self.cols, other.rows, other.cols
                    )));
                }
                let mut out = Self::zeros(self.rows, other.cols);
                for i in 0..self.rows {
                    for k in 0..self.cols {
                        let a = &self[(i, k)];
                        if *a == 0 {
                            continue;
                        }
                        for j in 0..other.cols {
                            let prod = <$t>::from(a * &other[(k, j)]);
                            out[(i, j)] += prod;
                        }
                    }
                }
                Ok(out)
            }

            pub fn mul_vec(&self, v: &[$t]) -> Result<Vec<$t>> {
                if self.cols != v.len() {
                    return Err(Error::Dimension(format!("{}x{} matrix times vector of length {}", self.rows, self.cols, v.len())));
                }
                Ok((0..self.rows)
                    .map(|i| {
                        let mut acc = <$t>::new();
                        for (a, x) in self.row(i).iter().zip(v) {
                            acc += <$t>::from(a * x);
                        }
                        acc
                    })
                    .collect())
            }

            pub fn add(&self, other: &Self) -> Result<Self> {
                if self.rows != other.rows || self.cols != other.cols {
                    return Err(Error::Dimension("cannot add matrices of different shapes".into()));
                }
                Ok(Self::from_fn(self.rows, self.cols, |i, j| <$t>::from(&self[(i, j)] + &other[(i, j)])))
            }

            pub fn scale(&self, k: &$t) -> Self {
                self.map(|x| <$t>::from(x * k))
            }

            pub fn neg(&self) -> Self {
                self.map(|x| <$t>::from(-x))
            }

            pub fn is_diagonal(&self) -> bool {
                (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)] == 0))
            }
        }
    };
}

ring_ops!(Integer);
ring_ops!(Rational);

impl IntMatrix {
    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Integer::from(x)).collect()).collect())
    }

    pub fn to_rational(&self) -> RatMatrix {
        self.map(|x| Rational::from(x))
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Integer {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut sign = 1;
        let mut prev = Integer::from(1);
        for k in 0..n {
            if m[(k, k)] == 0 {
                let Some(p) = (k + 1..n).find(|&i| m[(i, k)] != 0) else {
                    return Integer::new();
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = Integer::from(&m[(i, j)] * &m[(k, k)]) - Integer::from(&m[(i, k)] * &m[(k, j)]);
                    m[(i, j)] = v / &prev;
                }
            }
            prev = m[(k, k)].clone();
        }
        let d = m[(n - 1, n - 1)].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }
}

impl RatMatrix {
    /// Integer matrix with the same entries; fails on non-integral entries.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        if self.data.iter().any(|x| *x.denom() != 1) {
            return None;
        }
        Some(self.map(|x| x.numer().clone()))
    }

    /// Least common multiple of all denominators.
    pub fn common_denominator(&self) -> Integer {
        let mut d = Integer::from(1);
        for x in &self.data {
            d.lcm_mut(x.denom());
        }
        d
    }

    /// Reduced row echelon elimination on `[self | rhs]`; returns `None` if singular.
    fn solve_many(&self, rhs: &RatMatrix) -> Option<RatMatrix> {
        let n = self.rows;
        let mut a = self.clone();
        let mut b = rhs.clone();
        for k in 0..n {
            let p = (k..n).find(|&i| a[(i, k)] != 0)?;
            a.swap_rows(k, p);
            b.swap_rows(k, p);
            let inv = a[(k, k)].clone().recip();
            for j in 0..n {
                a[(k, j)] *= &inv;
            }
            for j in 0..b.cols {
                b[(k, j)] *= &inv;
            }
            for i in 0..n {
                if i == k || a[(i, k)] == 0 {
                    continue;
                }
                let f = a[(i, k)].clone();
                for j in 0..n {
                    let v = Rational::from(&f * &a[(k, j)]);
                    a[(i, j)] -= v;
                }
                for j in 0..b.cols {
                    let v = Rational::from(&f * &b[(k, j)]);
                    b[(i, j)] -= v;
                }
            }
        }
        Some(b)
    }

    pub fn inverse(&self) -> Result<RatMatrix> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        self.solve_many(&RatMatrix::identity(self.rows)).ok_or_else(|| Error::Singular("matrix is not invertible".into()))
    }

    pub fn det(&self) -> Rational {
        let d = self.common_denominator();
        let n = self.rows as u32;
        let scaled = self.scale(&Rational::from(d.clone())).to_integer().expect("cleared denominators");
        Rational::from((scaled.det(), d.pow(n)))
    }
}

/// A symmetric matrix of rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RatSymMatrix(RatMatrix);

impl RatSymMatrix {
    pub fn new(m: RatMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!("symmetric matrix must be square, got {}x{}", m.rows(), m.cols())));
        }
        if !m.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(Self(m))
    }

    pub fn from_i64_fracs(rows: &[Vec<(i64, i64)>]) -> Result<Self> {
        let rows = rows.iter().map(|r| r.iter().map(|&(p, q)| Rational::from((p, q))).collect()).collect();
        Self::new(RatMatrix::from_rows(rows)?)
    }

    pub fn n(&self) -> usize {
        self.0.rows()
    }

    pub fn as_matrix(&self) -> &RatMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> RatMatrix {
        self.0
    }

    /// `x^T t y`.
    pub fn bilinear(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let ty = self.0.mul_vec(y).expect("dimension");
        x.iter().zip(&ty).map(|(a, b)| Rational::from(a * b)).sum()
    }
}

impl fmt::Debug for RatSymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl std::ops::Deref for RatSymMatrix {
    type Target = RatMatrix;

    fn deref(&self) -> &RatMatrix {
        &self.0
    }
}

fn entry_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()),
        other => Err(Error::Parse(format!("matrix entry must be an integer or a \"p/q\" string, got {other}"))),
    }
}

/// Parses a JSON array of rows whose entries are integers or `"p/q"` strings.
pub fn rat_matrix_from_json(v: &Value) -> Result<RatMatrix> {
    let rows = v.as_array().ok_or_else(|| Error::Parse("matrix must be a JSON array of rows".into()))?;
    let rows = rows
        .iter()
        .map(|r| {
            let r = r.as_array().ok_or_else(|| Error::Parse("each matrix row must be a JSON array".into()))?;
            r.iter().map(entry_from_json).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    RatMatrix::from_rows(rows)
}

pub fn rat_matrix_from_json_str(text: &str) -> Result<RatMatrix> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    rat_matrix_from_json(&v)
}

pub fn sym_matrix_from_json_str(text: &str) -> Result<RatSymMatrix> {
    RatSymMatrix::new(rat_matrix_from_json_str(text)?)
}

pub fn int_matrix_from_json_str(text: &str) -> Result<IntMatrix> {
    rat_matrix_from_json_str(text)?.to_integer().ok_or_else(|| Error::Parse("matrix entries must be integers".into()))
}

/// JSON array of rows; integral entries become numbers when they fit in `i64`.
pub fn rat_matrix_to_json(m: &RatMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    m.row(i)
                        .iter()
                        .map(|x| match (x.denom() == &1, x.numer().to_i64()) {
                            (true, Some(k)) => Value::from(k),
                            _ => Value::String(format_rational(x)),
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn int_matrix_to_json(m: &IntMatrix) -> Value {
    rat_matrix_to_json(&m.to_rational())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinants() {
        let m = IntMatrix::from_i64(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]).unwrap();
        assert_eq!(m.det(), 4);
        let s = IntMatrix::from_i64(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(s.det(), -1);
        let z = IntMatrix::from_i64(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(z.det(), 0);
        let r = RatSymMatrix::from_i64_fracs(&[vec![(1, 2), (0, 1)], vec![(0, 1), (3, 4)]]).unwrap();
        assert_eq!(r.det(), Rational::from((3, 8)));
    }

    #[test]
    fn inverse_round_trip() {
        let r = RatSymMatrix::from_i64_fracs(&[vec![(0, 1), (1, 2)], vec![(1, 2), (0, 1)]]).unwrap();
        let inv = r.inverse().unwrap();
        assert_eq!(r.mul(&inv).unwrap(), RatMatrix::identity(2));
        let sing = RatMatrix::from_rows(vec![vec![Rational::from(1), Rational::from(2)], vec![Rational::from(2), Rational::from(4)]]).unwrap();
        assert!(matches!(sing.inverse(), Err(Error::Singular(_))));
    }

    #[test]
    fn json_round_trip() {
        let m = sym_matrix_from_json_str(r#"[["1/2", 3], [3, "-6/4"]]"#).unwrap();
        assert_eq!(m[(1, 1)], Rational::from((-3, 2)));
        let back = rat_matrix_to_json(&m);
        assert_eq!(back.to_string(), r#"[["1/2",3],[3,"-3/2"]]"#);
        assert!(matches!(sym_matrix_from_json_str("[[1, 2], [3, 4]]"), Err(Error::NotSymmetric)));
        assert!(sym_matrix_from_json_str("[[1, 2], [3]]").is_err());
        assert!(sym_matrix_from_json_str("[[1.5]]").is_err());
        assert!(int_matrix_from_json_str(r#"[["1/2"]]"#).is_err());
    }
}
