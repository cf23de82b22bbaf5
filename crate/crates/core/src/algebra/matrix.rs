//! Dense matrices over ℚ.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use super::poly::{rat, RationalPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {got}")]
    EntryCount { rows: usize, cols: usize, expected: usize, got: usize },
    #[error("ragged rows")]
    Ragged,
    #[error("matrix must be square, got {0}x{1}")]
    NotSquare(usize, usize),
    #[error("matrix must be symmetric")]
    NotSymmetric,
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("Krylov matrix is singular: vector is not cyclic")]
    SingularKrylov,
    #[error("matrix is singular")]
    Singular,
}

/// Row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigRational>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::EntryCount {
                rows,
                cols,
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(ExactMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(MatrixError::Ragged);
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor for integer matrices; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
            .expect("rectangular")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn diagonal(entries: &[BigRational]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, d) in entries.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    pub fn column_vector(v: &[BigRational]) -> Self {
        ExactMatrix { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigRational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn require_square(&self) -> Result<usize, MatrixError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(MatrixError::NotSquare(self.rows, self.cols))
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_diagonal(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn diagonal_entries(&self) -> Vec<BigRational> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    /// Entry `(i, j)` depends only on `i + j`.
    pub fn is_hankel(&self) -> bool {
        (0..self.rows).all(|i| {
            (0..self.cols).all(|j| {
                i == 0 || j + 1 == self.cols || self[(i, j)] == self[(i - 1, j + 1)]
            })
        })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn trace(&self) -> BigRational {
        (0..self.rows.min(self.cols)).map(|i| &self[(i, i)]).sum()
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::DimensionMismatch);
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * &rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `self^T * B * self`
    pub fn congruent(&self, b: &Self) -> Result<Self, MatrixError> {
        self.transpose().checked_mul(b)?.checked_mul(self)
    }

    fn add_scaled_identity(&self, c: &BigRational) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] += c;
        }
        m
    }

    /// Determinant by Bareiss elimination on the integer matrix obtained by
    /// clearing each row's denominators.
    pub fn det(&self) -> Result<BigRational, MatrixError> {
        let n = self.require_square()?;
        if n == 0 {
            return Ok(BigRational::one());
        }
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let l = self.row(i).iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                let row = self
                    .row(i)
                    .iter()
                    .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
                    .collect();
                scale *= l;
                row
            })
            .collect();
        Ok(BigRational::new(bareiss_det(&mut a), scale))
    }

    /// Characteristic polynomial `det(xI - M)` by Faddeev–LeVerrier.
    ///
    /// Debug builds cross-check the result against
    /// [`ExactMatrix::charpoly_by_interpolation`].
    pub fn charpoly(&self) -> Result<RationalPoly, MatrixError> {
        let n = self.require_square()?;
        // c[k] is the coefficient of x^k
        let mut c = vec![BigRational::zero(); n + 1];
        c[n] = BigRational::one();
        let mut mk = Self::zeros(n, n);
        for k in 1..=n {
            let prod = self.checked_mul(&mk)?;
            mk = prod.add_scaled_identity(&c[n + 1 - k]);
            let am = self.checked_mul(&mk)?;
            c[n - k] = -am.trace() / rat(k as i64);
        }
        let p = RationalPoly::new(c);
        debug_assert_eq!(Some(&p), self.charpoly_by_interpolation().ok().as_ref());
        Ok(p)
    }

    /// Characteristic polynomial from `det(cI - M)` at `c = 0..=n`, by Newton
    /// divided differences.
    pub fn charpoly_by_interpolation(&self) -> Result<RationalPoly, MatrixError> {
        let n = self.require_square()?;
        let xs: Vec<BigRational> = (0..=n).map(|c| rat(c as i64)).collect();
        let mut ys = Vec::with_capacity(n + 1);
        for x in &xs {
            let shifted = Self::identity(n)
                .scaled(x)
                .checked_sub(self)
                .expect("same shape");
            ys.push(shifted.det()?);
        }
        Ok(interpolate(&xs, &ys))
    }

    pub fn scaled(&self, c: &BigRational) -> Self {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, MatrixError> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(MatrixError::DimensionMismatch);
        }
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// Columns `v, Mv, ..., M^{n-1} v`. Fails with `SingularKrylov` when they
    /// are linearly dependent.
    pub fn krylov_matrix(&self, v: &[BigRational]) -> Result<Self, MatrixError> {
        let n = self.require_square()?;
        if v.len() != n {
            return Err(MatrixError::DimensionMismatch);
        }
        let mut p = Self::zeros(n, n);
        let mut col = v.to_vec();
        for j in 0..n {
            for (i, x) in col.iter().enumerate() {
                p[(i, j)] = x.clone();
            }
            if j + 1 < n {
                col = self.mul_vec(&col);
            }
        }
        if p.det()?.is_zero() {
            return Err(MatrixError::SingularKrylov);
        }
        Ok(p)
    }

    /// Solves `self * x = b` for square nonsingular `self`.
    pub fn solve(&self, b: &[BigRational]) -> Result<Vec<BigRational>, MatrixError> {
        let n = self.require_square()?;
        if b.len() != n {
            return Err(MatrixError::DimensionMismatch);
        }
        let mut a = self.to_rows();
        for (row, bi) in a.iter_mut().zip(b) {
            row.push(bi.clone());
        }
        for k in 0..n {
            let piv = (k..n).find(|&i| !a[i][k].is_zero()).ok_or(MatrixError::Singular)?;
            a.swap(k, piv);
            let inv = a[k][k].recip();
            for x in a[k].iter_mut().skip(k) {
                *x *= &inv;
            }
            for i in 0..n {
                if i != k && !a[i][k].is_zero() {
                    let f = a[i][k].clone();
                    for j in k..=n {
                        let t = &f * &a[k][j];
                        a[i][j] -= t;
                    }
                }
            }
        }
        Ok(a.into_iter().map(|mut r| r.pop().expect("augmented")).collect())
    }

    /// Finds invertible `Q` with `Q^T B Q` diagonal. Returns `Q` and the
    /// diagonal entries.
    ///
    /// Zero pivots are handled by swapping in a later nonzero diagonal entry
    /// if one exists, otherwise by the substitution `e_k -> e_k + e_j` for a
    /// `j` with `B_kj != 0`.
    pub fn congruence_diagonalize(&self) -> Result<(Self, Vec<BigRational>), MatrixError> {
        let n = self.require_square()?;
        if !self.is_symmetric() {
            return Err(MatrixError::NotSymmetric);
        }
        let mut s = self.clone();
        let mut q = Self::identity(n);
        for k in 0..n {
            if s[(k, k)].is_zero() {
                if let Some(j) = (k + 1..n).find(|&j| !s[(j, j)].is_zero()) {
                    s.swap_rows(k, j);
                    s.swap_cols(k, j);
                    q.swap_cols(k, j);
                } else if let Some(j) = (k + 1..n).find(|&j| !s[(k, j)].is_zero()) {
                    s.add_row(k, j, &BigRational::one());
                    s.add_col(k, j, &BigRational::one());
                    q.add_col(k, j, &BigRational::one());
                } else {
                    continue;
                }
            }
            let pivot = s[(k, k)].clone();
            for i in k + 1..n {
                if s[(i, k)].is_zero() {
                    continue;
                }
                let c = -(&s[(i, k)] / &pivot);
                s.add_row(i, k, &c);
                s.add_col(i, k, &c);
                q.add_col(i, k, &c);
            }
        }
        debug_assert!(q.congruent(self).map(|d| d.is_diagonal()).unwrap_or(false));
        let d = s.diagonal_entries();
        Ok((q, d))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    // row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &BigRational) {
        for j in 0..self.cols {
            let t = c * &self[(src, j)];
            self[(dst, j)] += t;
        }
    }

    // col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &BigRational) {
        for i in 0..self.rows {
            let t = c * &self[(i, src)];
            self[(i, dst)] += t;
        }
    }
}

/// Bareiss fraction-free elimination; destroys `a`.
fn bareiss_det(a: &mut [Vec<BigInt>]) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Newton-form interpolation through `(xs[i], ys[i])`.
pub(crate) fn interpolate(xs: &[BigRational], ys: &[BigRational]) -> RationalPoly {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    let mut p = RationalPoly::constant(dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        p = &(&p * &RationalPoly::linear_root(xs[i].clone())) + &RationalPoly::constant(dd[i].clone());
    }
    p
}

impl Index<(usize, usize)> for ExactMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.checked_mul(rhs).expect("dimension mismatch")
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_i64(rows)
    }

    #[test]
    fn determinants() {
        assert_eq!(ExactMatrix::identity(4).det(), Ok(rat(1)));
        assert_eq!(m(&[&[1, 1], &[1, 2]]).det(), Ok(rat(1)));
        assert_eq!(m(&[&[1, 1], &[1, 1]]).det(), Ok(rat(0)));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det(), Ok(rat(-1)));
        assert_eq!(m(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]]).det(), Ok(rat(6)));
        let half = BigRational::new(1.into(), 2.into());
        let r = ExactMatrix::diagonal(&[half.clone(), rat(3)]);
        assert_eq!(r.det(), Ok(BigRational::new(3.into(), 2.into())));
        assert_eq!(m(&[&[1, 2]]).det(), Err(MatrixError::NotSquare(1, 2)));
    }

    #[test]
    fn charpolys() {
        assert_eq!(ExactMatrix::identity(2).charpoly().unwrap(), RationalPoly::from_i64(&[1, -2, 1]));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).charpoly().unwrap(), RationalPoly::from_i64(&[-1, 0, 1]));
        // (x - 3)(x + 2)
        assert_eq!(m(&[&[3, 0], &[0, -2]]).charpoly().unwrap(), RationalPoly::from_i64(&[-6, -1, 1]));
        assert_eq!(ExactMatrix::zeros(0, 0).charpoly().unwrap(), RationalPoly::one());
    }

    #[test]
    fn krylov() {
        let mm = m(&[&[1, 1], &[1, -1]]);
        assert_eq!(mm.krylov_matrix(&[rat(1), rat(0)]).unwrap(), m(&[&[1, 1], &[0, 1]]));
        assert_eq!(
            ExactMatrix::identity(2).krylov_matrix(&[rat(1), rat(0)]),
            Err(MatrixError::SingularKrylov)
        );
        assert_eq!(m(&[&[5]]).krylov_matrix(&[rat(1)]).unwrap(), m(&[&[1]]));
    }

    #[test]
    fn diagonalize_examples() {
        let (q, d) = m(&[&[1, 0], &[0, -1]]).congruence_diagonalize().unwrap();
        assert_eq!(q, ExactMatrix::identity(2));
        assert_eq!(d, vec![rat(1), rat(-1)]);

        let b = m(&[&[1, 1], &[1, 2]]);
        let (q, d) = b.congruence_diagonalize().unwrap();
        assert_eq!(d, vec![rat(1), rat(1)]);
        assert_eq!(q, m(&[&[1, -1], &[0, 1]]));
        assert_eq!(q.congruent(&b).unwrap(), ExactMatrix::identity(2));

        let h = m(&[&[0, 1], &[1, 0]]);
        let (q, d) = h.congruence_diagonalize().unwrap();
        assert_eq!(q.congruent(&h).unwrap(), ExactMatrix::diagonal(&d));
        assert_eq!(&d[0] * &d[1], rat(-1) * q.det().unwrap().pow(2));

        let degenerate = m(&[&[1, 1], &[1, 1]]);
        let (_, d) = degenerate.congruence_diagonalize().unwrap();
        assert_eq!(d.iter().filter(|x| x.is_zero()).count(), 1);

        assert_eq!(m(&[&[1, 2], &[0, 1]]).congruence_diagonalize(), Err(MatrixError::NotSymmetric));
    }

    #[test]
    fn solve_linear_system() {
        let a = m(&[&[2, 0], &[0, 4]]);
        let x = a.solve(&[rat(1), rat(1)]).unwrap();
        assert_eq!(x, vec![BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 4.into())]);
        assert_eq!(m(&[&[1, 1], &[1, 1]]).solve(&[rat(1), rat(0)]), Err(MatrixError::Singular));
    }

    #[test]
    fn hankel_detection() {
        assert!(m(&[&[1, 1], &[1, 2]]).is_hankel());
        assert!(m(&[&[1, 2, 3], &[2, 3, 4], &[3, 4, 5]]).is_hankel());
        assert!(!m(&[&[1, 2], &[3, 4]]).is_hankel());
    }
}
