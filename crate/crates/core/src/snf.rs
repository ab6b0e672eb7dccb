//! Dense integer matrices and the Smith normal form.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A dense row-major integer matrix. Entries are `i128`; the matrices met in
/// handle calculus are small and well inside that range.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from rows. All rows must have `cols` entries; `cols`
    /// is needed separately so that 0-row matrices keep their width.
    pub fn from_rows<R, T>(rows: &[R], cols: usize) -> Self
    where
        R: AsRef<[T]>,
        T: Copy + Into<i128>,
    {
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged matrix row {}", i);
            for (j, &v) in r.iter().enumerate() {
                m[(i, j)] = v.into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn row(&self, i: usize) -> &[i128] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i128> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i128>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
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

    pub fn mul_vec(&self, v: &[i128]) -> Vec<i128> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> i128 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a = self.clone();
        let mut sign = 1;
        let mut prev = 1i128;
        for k in 0..n {
            if a[(k, k)] == 0 {
                match (k + 1..n).find(|&i| a[(i, k)] != 0) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[(i, j)] = (a[(i, j)] * a[(k, k)] - a[(i, k)] * a[(k, j)]) / prev;
                }
            }
            prev = a[(k, k)];
        }
        sign * a[(n - 1, n - 1)]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: i128) {
        for j in 0..self.cols {
            let v = self[(src, j)];
            self[(dst, j)] += q * v;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: i128) {
        for i in 0..self.rows {
            let v = self[(i, src)];
            self[(i, dst)] += q * v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)];
        }
    }

    /// Removes row `i` and column `j` (either may be `None`).
    pub fn without(&self, row: Option<usize>, col: Option<usize>) -> Matrix {
        let rows: Vec<usize> = (0..self.rows).filter(|&i| Some(i) != row).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&j| Some(j) != col).collect();
        let mut out = Matrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out[(a, b)] = self[(i, j)];
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = i128;
    fn index(&self, (i, j): (usize, usize)) -> &i128 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i128 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}{:?}", self.rows, self.cols, self.to_rows())
    }
}

/// Result of [`smith_normal_form`]: `left * m * right = diag(diagonal)`
/// with `left`, `right` unimodular. `right_inverse` is the inverse of
/// `right`, kept so kernel coordinates can be read off without inversion.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: Vec<i128>,
    pub left: Matrix,
    pub right: Matrix,
    pub right_inverse: Matrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|&&d| d != 0).count()
    }

    /// The diagonal matrix `left * m * right`, with the original shape.
    pub fn diagonal_matrix(&self) -> Matrix {
        let mut d = Matrix::zeros(self.left.rows(), self.right.rows());
        for (k, &v) in self.diagonal.iter().enumerate() {
            d[(k, k)] = v;
        }
        d
    }

    /// A Z-basis of the kernel of the original matrix (as column vectors).
    pub fn kernel_basis(&self) -> Vec<Vec<i128>> {
        (self.rank()..self.right.cols())
            .map(|j| self.right.column(j))
            .collect()
    }

    /// Coordinates of a kernel vector `x` in [`Self::kernel_basis`].
    pub fn kernel_coordinates(&self, x: &[i128]) -> Vec<i128> {
        let y = self.right_inverse.mul_vec(x);
        y[self.rank()..].to_vec()
    }
}

/// Smith normal form by repeated pivoting on the entry of least absolute
/// value. Deterministic: ties go to the first entry in column-major order.
///
/// The diagonal has `min(rows, cols)` entries, nonnegative, each dividing the
/// next; zeros come last.
pub fn smith_normal_form(m: &Matrix) -> SmithForm {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = Matrix::identity(r);
    let mut right = Matrix::identity(c);
    let mut right_inv = Matrix::identity(c);

    let steps = r.min(c);
    'outer: for k in 0..steps {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for j in k..c {
                for i in k..r {
                    let v = a[(i, j)].abs();
                    if v != 0 && best.is_none_or(|(bi, bj)| v < a[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break 'outer;
            };
            a.swap_rows(k, pi);
            left.swap_rows(k, pi);
            a.swap_cols(k, pj);
            right.swap_cols(k, pj);
            right_inv.swap_rows(k, pj);

            let pivot = a[(k, k)];
            let mut clean = true;
            for i in k + 1..r {
                let q = a[(i, k)] / pivot;
                if q != 0 {
                    a.add_row(i, k, -q);
                    left.add_row(i, k, -q);
                }
                clean &= a[(i, k)] == 0;
            }
            for j in k + 1..c {
                let q = a[(k, j)] / pivot;
                if q != 0 {
                    a.add_col(j, k, -q);
                    right.add_col(j, k, -q);
                    right_inv.add_row(k, j, q);
                }
                clean &= a[(k, j)] == 0;
            }
            if !clean {
                continue;
            }
            let offender = (k + 1..r).find(|&i| (k + 1..c).any(|j| a[(i, j)] % pivot != 0));
            match offender {
                Some(i) => {
                    a.add_row(k, i, 1);
                    left.add_row(k, i, 1);
                }
                None => break,
            }
        }
        if a[(k, k)] < 0 {
            a.negate_row(k);
            left.negate_row(k);
        }
    }

    SmithForm {
        diagonal: (0..steps).map(|k| a[(k, k)]).collect(),
        left,
        right,
        right_inverse: right_inv,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &Matrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(s.left.mul(m).mul(&s.right), s.diagonal_matrix());
        assert_eq!(s.left.determinant().abs(), 1);
        assert_eq!(s.right.determinant().abs(), 1);
        assert_eq!(s.right.mul(&s.right_inverse), Matrix::identity(m.cols()));
        for w in s.diagonal.windows(2) {
            if w[0] == 0 {
                assert_eq!(w[1], 0);
            } else {
                assert_eq!(w[1] % w[0], 0);
            }
        }
        s
    }

    #[test]
    fn examples() {
        assert_eq!(check(&Matrix::from_rows(&[[0i64]], 1)).diagonal, vec![0]);
        assert_eq!(check(&Matrix::identity(3)).diagonal, vec![1, 1, 1]);
        assert_eq!(check(&Matrix::from_rows(&[[2i64, 0], [0, 3]], 2)).diagonal, vec![1, 6]);
    }

    #[test]
    fn empty_matrices() {
        let s = check(&Matrix::zeros(0, 3));
        assert!(s.diagonal.is_empty());
        assert_eq!(s.kernel_basis().len(), 3);
        let s = check(&Matrix::zeros(2, 0));
        assert!(s.diagonal.is_empty());
    }

    #[test]
    fn rectangular_and_negative() {
        let m = Matrix::from_rows(&[[4i64, -6, 2], [2, 2, -8]], 3);
        let s = check(&m);
        // gcd of entries is 2, gcd of 2x2 minors (20, -36, 44) is 4
        assert_eq!(s.diagonal, vec![2, 2]);
        for v in s.kernel_basis() {
            assert!(m.mul_vec(&v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn kernel_coordinates_invert_basis() {
        let m = Matrix::from_rows(&[[1i64, 2, 3], [2, 4, 6]], 3);
        let s = check(&m);
        let basis = s.kernel_basis();
        assert_eq!(basis.len(), 2);
        let x: Vec<i128> = (0..3).map(|i| 3 * basis[0][i] - 5 * basis[1][i]).collect();
        assert_eq!(s.kernel_coordinates(&x), vec![3, -5]);
    }

    #[test]
    fn determinant_known_values() {
        assert_eq!(Matrix::zeros(0, 0).determinant(), 1);
        assert_eq!(Matrix::from_rows(&[[0i64, 1], [1, 0]], 2).determinant(), -1);
        assert_eq!(
            Matrix::from_rows(&[[2i64, -1, 0], [-1, 2, -1], [0, -1, 2]], 3).determinant(),
            4
        );
    }
}
