//! Dense matrices over a [`Ring`], with exact elimination over Q(√2, √5).

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::laurent::CoeffFn;
use crate::ring::Ring;
use crate::scalar::QScalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Ring> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<T>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        Self::from_fn(r, c, |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix shape mismatch");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let cur = std::mem::replace(&mut out[(i, j)], T::zero());
                    out[(i, j)] = cur + &(a.clone() * b);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for (j, vj) in v.iter().enumerate() {
                    if !vj.is_zero() && !self[(i, j)].is_zero() {
                        acc = acc + &(self[(i, j)].clone() * vj);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() + b).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.clone() - b).collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|a| a.clone() * c)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + &self[(i, i)])
    }

    /// Determinant by Laplace expansion memoized over column subsets
    /// (O(n·2ⁿ) ring operations, no division).
    pub fn det(&self) -> T {
        assert_eq!(self.rows, self.cols, "det of a non-square matrix");
        let n = self.rows;
        let mut dp = vec![T::zero(); 1 << n];
        dp[0] = T::one();
        for mask in 0..(1usize << n) {
            if dp[mask].is_zero() {
                continue;
            }
            let row = mask.count_ones() as usize;
            if row == n {
                continue;
            }
            for j in 0..n {
                if mask & (1 << j) != 0 || self[(row, j)].is_zero() {
                    continue;
                }
                let above = (mask >> (j + 1)).count_ones();
                let term = dp[mask].clone() * &self[(row, j)];
                let next = mask | (1 << j);
                let cur = std::mem::replace(&mut dp[next], T::zero());
                dp[next] = if above % 2 == 0 { cur + &term } else { cur - &term };
            }
        }
        dp[(1 << n) - 1].clone()
    }

    pub fn minor(&self, skip_row: usize, skip_col: usize) -> Self {
        Self::from_fn(self.rows - 1, self.cols - 1, |i, j| {
            let ii = if i >= skip_row { i + 1 } else { i };
            let jj = if j >= skip_col { j + 1 } else { j };
            self[(ii, jj)].clone()
        })
    }

    pub fn adjugate(&self) -> Self {
        let n = self.rows;
        if n == 1 {
            return Self::identity(1);
        }
        Self::from_fn(n, n, |i, j| {
            let m = self.minor(j, i).det();
            if (i + j) % 2 == 0 {
                m
            } else {
                -m
            }
        })
    }

    /// Inverse through the adjugate; `None` unless the determinant is a unit.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det().try_inv()?;
        Some(self.adjugate().scale(&d))
    }
}

impl Mat<CoeffFn> {
    pub fn eval(&self, s: &QScalar) -> Result<Mat<QScalar>> {
        let data = self.data.iter().map(|c| c.eval(s)).collect::<Result<Vec<_>>>()?;
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn constant(&self) -> Option<Mat<QScalar>> {
        let data = self.data.iter().map(CoeffFn::as_constant).collect::<Option<Vec<_>>>()?;
        Some(Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }
}

impl Mat<QScalar> {
    pub fn to_coeff(&self) -> Mat<CoeffFn> {
        self.map(|q| CoeffFn::constant(q.clone()))
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            for j in 0..m.cols {
                m.data.swap(p * m.cols + j, r * m.cols + j);
            }
            let inv = m[(r, c)].inv().expect("nonzero pivot");
            for j in 0..m.cols {
                m[(r, j)] = m[(r, j)].clone() * &inv;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in 0..m.cols {
                    let t = f.clone() * &m[(r, j)];
                    m[(i, j)] = m[(i, j)].clone() - &t;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space {v : Mv = 0}.
    pub fn kernel(&self) -> Vec<Vec<QScalar>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![QScalar::zero(); self.cols];
                v[f] = QScalar::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Gauss–Jordan inverse.
    pub fn inverse_exact(&self) -> Result<Self> {
        let n = self.rows;
        if n != self.cols {
            return Err(Error::Precondition("inverse of a non-square matrix".into()));
        }
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                QScalar::one()
            } else {
                QScalar::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::Degenerate("singular matrix".into()));
        }
        Ok(Self::from_fn(n, n, |i, j| r[(i, j + n)].clone()))
    }

    /// Inertia (p, q, z) of a symmetric matrix by exact LDLᵀ with
    /// congruence pivoting.
    pub fn inertia(&self) -> (usize, usize, usize) {
        assert!(self.is_symmetric(), "inertia of a non-symmetric matrix");
        let mut a = self.clone();
        let n = a.rows;
        let (mut p, mut q) = (0, 0);
        let mut k = 0;
        while k < n {
            if let Some(i) = (k..n).find(|&i| !a[(i, i)].is_zero()) {
                a.swap_sym(i, k);
            } else if let Some((i, j)) = (k..n)
                .flat_map(|i| (k..n).map(move |j| (i, j)))
                .find(|&(i, j)| i != j && !a[(i, j)].is_zero())
            {
                // e_i → e_i + e_j turns the zero diagonal into 2a_ij
                a.add_sym(i, j);
                a.swap_sym(i, k);
            } else {
                break;
            }
            let piv = a[(k, k)].clone();
            match piv.signum() {
                1 => p += 1,
                _ => q += 1,
            }
            let inv = piv.inv().expect("nonzero pivot");
            for i in (k + 1)..n {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let f = a[(i, k)].clone() * &inv;
                for j in k..n {
                    let t = f.clone() * &a[(k, j)];
                    a[(i, j)] = a[(i, j)].clone() - &t;
                }
            }
            for i in (k + 1)..n {
                for j in (k + 1)..n {
                    let v = a[(i, j)].clone();
                    a[(j, i)] = v;
                }
                a[(k, i)] = QScalar::zero();
                a[(i, k)] = QScalar::zero();
            }
            k += 1;
        }
        (p, q, n - p - q)
    }

    /// Sylvester signature (p, q); errors on a degenerate form.
    pub fn signature(&self) -> Result<(usize, usize)> {
        let (p, q, z) = self.inertia();
        if z > 0 {
            return Err(Error::Degenerate(format!("form has a {z}-dimensional radical")));
        }
        Ok((p, q))
    }

    fn swap_sym(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    fn add_sym(&mut self, i: usize, j: usize) {
        for c in 0..self.cols {
            let v = self[(j, c)].clone();
            self[(i, c)] = self[(i, c)].clone() + &v;
        }
        for r in 0..self.rows {
            let v = self[(r, j)].clone();
            self[(r, i)] = self[(r, i)].clone() + &v;
        }
    }
}

/// Dimension of the span of a family of vectors.
pub fn span_rank(vs: &[Vec<QScalar>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    Mat::from_rows(vs.to_vec()).rank()
}

/// Whether two families span the same subspace.
pub fn same_span(a: &[Vec<QScalar>], b: &[Vec<QScalar>]) -> bool {
    let ra = span_rank(a);
    let rb = span_rank(b);
    let mut all = a.to_vec();
    all.extend(b.iter().cloned());
    ra == rb && span_rank(&all) == ra
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> QScalar {
        QScalar::int(n)
    }

    #[test]
    fn det_and_inverse() {
        let m = Mat::from_rows(vec![
            vec![q(2), q(1), q(0)],
            vec![q(1), q(3), q(1)],
            vec![q(0), q(1), q(4)],
        ]);
        assert_eq!(m.det(), q(18));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(3));
        assert_eq!(inv, m.inverse_exact().unwrap());
    }

    #[test]
    fn permutation_det_sign() {
        let m = Mat::from_rows(vec![vec![q(0), q(1)], vec![q(1), q(0)]]);
        assert_eq!(m.det(), q(-1));
    }

    #[test]
    fn kernel_basis() {
        let m = Mat::from_rows(vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]]);
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.apply(v).iter().all(Ring::is_zero));
        }
    }

    #[test]
    fn signature_hyperbolic() {
        let m = Mat::from_rows(vec![vec![q(0), q(1)], vec![q(1), q(0)]]);
        assert_eq!(m.signature().unwrap(), (1, 1));
        let id = Mat::<QScalar>::identity(7);
        assert_eq!(id.signature().unwrap(), (7, 0));
        let deg = Mat::from_rows(vec![vec![q(1), q(1)], vec![q(1), q(1)]]);
        assert!(deg.signature().is_err());
    }

    #[test]
    fn laurent_inverse() {
        use crate::laurent::Param;
        let r = CoeffFn::rho(Param::Rho);
        let m = Mat::from_rows(vec![
            vec![r.scale(&q(2)), CoeffFn::int(1)],
            vec![CoeffFn::int(1), CoeffFn::zero()],
        ]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(2));
    }
}
