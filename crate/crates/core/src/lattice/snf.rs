//! Smith normal form with unimodular witnesses.

use rug::Integer;

use super::matrix::IntMatrix;

/// `N = U S V` with `U`, `V` unimodular and `S` diagonal, `S_11 | S_22 | ...`, `S_ii >= 0`.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<Integer> {
        (0..self.s.rows().min(self.s.cols())).map(|i| self.s[(i, i)].clone()).collect()
    }
}

/// Computes the Smith normal form by smallest-pivot elimination.
///
/// Row operations on `S` are mirrored as inverse column operations on `U`
/// and column operations as inverse row operations on `V`, which keeps
/// `U S V = N` invariant throughout.
pub fn smith_normal_form(n: &IntMatrix) -> SmithForm {
    let (rows, cols) = (n.rows(), n.cols());
    let mut s = n.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = smallest_entry(&s, t) else {
                return SmithForm { u, s, v };
            };
            s.swap_rows(t, pi);
            u.swap_cols(t, pi);
            s.swap_cols(t, pj);
            v.swap_rows(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if s[(i, t)] != 0 {
                    let q = Integer::from(&s[(i, t)] / &s[(t, t)]);
                    // row_i -= q row_t, mirrored as col_t += q col_i on U
                    row_axpy(&mut s, i, t, &Integer::from(-&q), cols);
                    col_axpy(&mut u, t, i, &q);
                    clean &= s[(i, t)] == 0;
                }
            }
            for j in t + 1..cols {
                if s[(t, j)] != 0 {
                    let q = Integer::from(&s[(t, j)] / &s[(t, t)]);
                    // col_j -= q col_t, mirrored as row_t += q row_j on V
                    col_axpy(&mut s, j, t, &Integer::from(-&q));
                    row_axpy(&mut v, t, j, &q, cols);
                    clean &= s[(t, j)] == 0;
                }
            }
            if !clean {
                continue;
            }
            // the pivot must divide the rest of the block
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !s[(i, j)].is_divisible(&s[(t, t)])));
            match bad {
                Some(i) => {
                    // row_t += row_i, mirrored as col_i -= col_t on U
                    row_axpy(&mut s, t, i, &Integer::from(1), cols);
                    col_axpy(&mut u, i, t, &Integer::from(-1));
                }
                None => break,
            }
        }
        if s[(t, t)] < 0 {
            for j in 0..cols {
                let x = -std::mem::take(&mut s[(t, j)]);
                s[(t, j)] = x;
            }
            for i in 0..rows {
                let x = -std::mem::take(&mut u[(i, t)]);
                u[(i, t)] = x;
            }
        }
    }
    SmithForm { u, s, v }
}

fn smallest_entry(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            if s[(i, j)] == 0 {
                continue;
            }
            let better = match best {
                None => true,
                Some((bi, bj)) => s[(i, j)].cmp_abs(&s[(bi, bj)]).is_lt(),
            };
            if better {
                best = Some((i, j));
            }
        }
    }
    best
}

/// `row_dst += k row_src`.
fn row_axpy(m: &mut IntMatrix, dst: usize, src: usize, k: &Integer, cols: usize) {
    for j in 0..cols {
        let add = Integer::from(k * &m[(src, j)]);
        m[(dst, j)] += add;
    }
}

/// `col_dst += k col_src`.
fn col_axpy(m: &mut IntMatrix, dst: usize, src: usize, k: &Integer) {
    for i in 0..m.rows() {
        let add = Integer::from(k * &m[(i, src)]);
        m[(i, dst)] += add;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(n: &IntMatrix) -> SmithForm {
        let f = smith_normal_form(n);
        assert_eq!(f.u.mul(&f.s).unwrap().mul(&f.v).unwrap(), *n);
        assert_eq!(f.u.det().abs(), 1);
        assert_eq!(f.v.det().abs(), 1);
        assert!(f.s.is_diagonal());
        let d = f.diagonal();
        assert!(d.iter().all(|x| *x >= 0));
        for w in d.windows(2) {
            assert!(w[0] == 0 && w[1] == 0 || w[1].is_divisible(&w[0]));
        }
        f
    }

    #[test]
    fn documented_examples() {
        let f = check(&IntMatrix::identity(3));
        assert_eq!(f.s, IntMatrix::identity(3));
        let f = check(&IntMatrix::from_i64(&[vec![2, 0], vec![0, 3]]).unwrap());
        assert_eq!(f.diagonal(), vec![Integer::from(1), Integer::from(6)]);
        let f = check(&IntMatrix::from_i64(&[vec![0, 1], vec![1, 0]]).unwrap());
        assert_eq!(f.s, IntMatrix::identity(2));
    }

    #[test]
    fn singular_and_rectangular() {
        let f = check(&IntMatrix::from_i64(&[vec![2, 4], vec![4, 8]]).unwrap());
        assert_eq!(f.diagonal(), vec![Integer::from(2), Integer::from(0)]);
        check(&IntMatrix::from_i64(&[vec![6, 4, 2], vec![3, 9, -12]]).unwrap());
        check(&IntMatrix::from_i64(&[vec![0, 0], vec![0, 0]]).unwrap());
    }
}
