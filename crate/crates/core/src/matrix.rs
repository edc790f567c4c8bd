//! Dense integer matrices and the Smith normal form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("ragged matrix: row {row} has {len} entries, expected {expected}")]
pub struct RaggedMatrix {
    pub row: usize,
    pub len: usize,
    pub expected: usize,
}

impl TryFrom<Vec<Vec<i64>>> for IntMatrix {
    type Error = RaggedMatrix;

    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self, RaggedMatrix> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(RaggedMatrix { row: i, len: r.len(), expected: cols });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { rows: rows.len(), cols, data })
    }
}

impl From<IntMatrix> for Vec<Vec<i64>> {
    fn from(m: IntMatrix) -> Self {
        m.to_rows()
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Panics on ragged input; use `TryFrom` for untrusted data.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        Self::try_from(rows.iter().map(|r| r.as_ref().to_vec()).collect::<Vec<_>>())
            .expect("rows of equal length")
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &d) in entries.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product dimensions");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| v[i] * self[(i, j)]).sum())
            .collect()
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `self * g * self^T`
    pub fn congruence(&self, g: &Self) -> Self {
        self.mul(g).mul(&self.transpose())
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn block(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let mut m = Self::zeros(a.rows + c.rows, a.cols + b.cols);
        for i in 0..m.rows {
            for j in 0..m.cols {
                m[(i, j)] = match (i < a.rows, j < a.cols) {
                    (true, true) => a[(i, j)],
                    (true, false) => b[(i, j - a.cols)],
                    (false, true) => c[(i - a.rows, j)],
                    (false, false) => d[(i - a.rows, j - a.cols)],
                };
            }
        }
        m
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::block(
            self,
            &Self::zeros(self.rows, other.cols),
            &Self::zeros(other.rows, self.cols),
            other,
        )
    }

    /// Submatrix with the given rows and columns removed.
    pub fn minor(&self, drop_rows: &[usize], drop_cols: &[usize]) -> Self {
        let rows: Vec<usize> = (0..self.rows).filter(|i| !drop_rows.contains(i)).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|j| !drop_cols.contains(j)).collect();
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)];
            }
        }
        m
    }

    /// Exact determinant by fraction-free elimination.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| self.row(i).iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        if n == 0 {
            return BigInt::one();
        }
        sign * &a[n - 1][n - 1]
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

/// `left * a * right = diag`, with `left`, `right` unimodular and the
/// nonzero diagonal entries positive, each dividing the next.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub diag: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries in order.
    pub fn invariant_factors(&self) -> Vec<i64> {
        (0..self.diag.rows.min(self.diag.cols))
            .map(|i| self.diag[(i, i)])
            .take_while(|&d| d != 0)
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

struct Work {
    a: Vec<Vec<i128>>,
    u: Vec<Vec<i128>>,
    v: Vec<Vec<i128>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in self.a.iter_mut() {
            r.swap(i, j);
        }
        for r in self.v.iter_mut() {
            r.swap(i, j);
        }
    }

    // row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: i128) {
        for m in [&mut self.a, &mut self.u] {
            for k in 0..m[0].len() {
                let x = checked(m[j][k].checked_mul(c));
                m[i][k] = checked(m[i][k].checked_add(x));
            }
        }
    }

    // col_i += c * col_j
    fn add_col(&mut self, i: usize, j: usize, c: i128) {
        for m in [&mut self.a, &mut self.v] {
            for r in m.iter_mut() {
                let x = checked(r[j].checked_mul(c));
                r[i] = checked(r[i].checked_add(x));
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut().chain(self.u[i].iter_mut()) {
            *x = -*x;
        }
    }
}

fn checked(x: Option<i128>) -> i128 {
    x.expect("integer overflow in Smith normal form")
}

fn to_matrix(m: &[Vec<i128>], rows: usize, cols: usize) -> IntMatrix {
    let mut out = IntMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            out[(i, j)] = i64::try_from(m[i][j]).expect("Smith normal form entry exceeds i64");
        }
    }
    out
}

/// Smith normal form by row/column reduction with smallest-pivot selection.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows, a.cols);
    let ident = |k: usize| -> Vec<Vec<i128>> {
        (0..k).map(|i| (0..k).map(|j| i128::from(i == j)).collect()).collect()
    };
    let mut w = Work {
        a: (0..m).map(|i| a.row(i).iter().map(|&x| x as i128).collect()).collect(),
        u: ident(m),
        v: ident(n),
    };
    for k in 0..m.min(n) {
        // smallest nonzero pivot in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in k..m {
            for j in k..n {
                let x = w.a[i][j].abs();
                if x != 0 && best.is_none_or(|(bi, bj)| x < w.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(k, pi);
        w.swap_cols(k, pj);
        loop {
            let mut changed = false;
            for i in k + 1..m {
                if w.a[i][k] != 0 {
                    let q = Integer::div_floor(&w.a[i][k], &w.a[k][k]);
                    w.add_row(i, k, -q);
                    if w.a[i][k] != 0 {
                        w.swap_rows(k, i);
                        changed = true;
                    }
                }
            }
            for j in k + 1..n {
                if w.a[k][j] != 0 {
                    let q = Integer::div_floor(&w.a[k][j], &w.a[k][k]);
                    w.add_col(j, k, -q);
                    if w.a[k][j] != 0 {
                        w.swap_cols(k, j);
                        changed = true;
                    }
                }
            }
            if changed {
                continue;
            }
            // divisibility fix-up
            let p = w.a[k][k];
            let bad = (k + 1..m).find(|&i| (k + 1..n).any(|j| w.a[i][j] % p != 0));
            match bad {
                Some(i) => w.add_row(k, i, 1),
                None => break,
            }
        }
        if w.a[k][k] < 0 {
            w.negate_row(k);
        }
    }
    SmithForm {
        left: to_matrix(&w.u, m, m),
        right: to_matrix(&w.v, n, n),
        diag: to_matrix(&w.a, m, n),
    }
}

/// Basis (as columns) of the integer kernel `{x : a x = 0}`.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    let n = a.cols;
    let mut k = IntMatrix::zeros(n, n - r);
    for j in r..n {
        for i in 0..n {
            k[(i, j - r)] = snf.right[(i, j)];
        }
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn check(a: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(a);
        assert_eq!(s.left.mul(a).mul(&s.right), s.diag);
        assert!(s.left.determinant().abs().is_one());
        assert!(s.right.determinant().abs().is_one());
        let f = s.invariant_factors();
        assert!(f.windows(2).all(|w| w[1] % w[0] == 0));
        assert!(f.iter().all(|&d| d > 0));
        s
    }

    #[test]
    fn diagonal_two_three() {
        let s = check(&IntMatrix::from_rows(&[[2, 0], [0, 3]]));
        assert_eq!(s.invariant_factors(), vec![1, 6]);
    }

    #[test]
    fn zero_and_empty() {
        assert_eq!(check(&IntMatrix::zeros(3, 2)).rank(), 0);
        assert_eq!(check(&IntMatrix::zeros(0, 3)).rank(), 0);
    }

    #[test]
    fn rectangular() {
        let s = check(&IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]));
        assert_eq!(s.invariant_factors(), vec![2, 6, 12]);
        let s = check(&IntMatrix::from_rows(&[[1, 2, 3], [4, 5, 6]]));
        assert_eq!(s.invariant_factors(), vec![1, 3]);
    }

    #[test]
    fn determinant_values() {
        assert_eq!(IntMatrix::from_rows(&[[2, 1], [1, 2]]).determinant(), 3.into());
        assert_eq!(IntMatrix::from_rows(&[[0, 1], [1, 0]]).determinant(), (-1).into());
        assert_eq!(IntMatrix::zeros(0, 0).determinant(), 1.into());
        assert_eq!(IntMatrix::from_rows(&[[0, 2, 1], [1, 0, 0], [3, 1, 0]]).determinant(), 1.into());
    }

    #[test]
    fn kernel() {
        let a = IntMatrix::from_rows(&[[1, 2, 3], [2, 4, 6]]);
        let k = kernel_basis(&a);
        assert_eq!(k.ncols(), 2);
        assert_eq!(a.mul(&k), IntMatrix::zeros(2, 2));
    }
}
