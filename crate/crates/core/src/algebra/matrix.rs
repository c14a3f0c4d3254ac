use std::fmt;

use num_traits::{One, Zero};

use super::{ComplexApprox, Rat, Scalar, UniPoly};
use crate::error::{Error, Result};

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RatMatrix = Matrix<Rat>;

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero_elem(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one_elem());
        }
        m
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

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
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
            for j in 0..other.cols {
                let mut acc = T::zero_elem();
                for l in 0..self.cols {
                    acc = acc.plus(&self.get(i, l).times(other.get(l, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero_elem(), |acc, (a, b)| acc.plus(&a.times(b)))
            })
            .collect())
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        self.transpose().mul_vec(v)
    }

    /// `self^n` by repeated multiplication.
    pub fn pow(&self, n: u32) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension("power of a non-square matrix".into()));
        }
        let mut acc = Self::identity(self.rows);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }
}

impl RatMatrix {
    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| super::rat(v)).collect())
                .collect(),
        )
    }

    pub fn to_complex(&self) -> Matrix<ComplexApprox> {
        self.map(ComplexApprox::from_rat)
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "square matrix required, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<Rat> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(Rat::one());
        }
        let mut a = self.to_rows();
        let mut sign = Rat::one();
        let mut prev = Rat::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(p) => {
                        a.swap(k, p);
                        sign = -sign;
                    }
                    None => return Ok(Rat::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        let mut a = self.to_rows();
        let mut inv = Self::identity(n).to_rows();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !a[i][col].is_zero()) else {
                return Err(Error::Singular { det: Rat::zero() });
            };
            a.swap(col, p);
            inv.swap(col, p);
            let pivot = a[col][col].recip();
            for j in 0..n {
                a[col][j] *= &pivot;
                inv[col][j] *= &pivot;
            }
            for i in 0..n {
                if i == col || a[i][col].is_zero() {
                    continue;
                }
                let f = a[i][col].clone();
                for j in 0..n {
                    let t = &f * &a[col][j];
                    a[i][j] -= t;
                    let t = &f * &inv[col][j];
                    inv[i][j] -= t;
                }
            }
        }
        Self::from_rows(inv)
    }

    /// Solves `self * x = b` for square nonsingular `self`.
    pub fn solve(&self, b: &[Rat]) -> Result<Vec<Rat>> {
        self.require_square()?;
        if b.len() != self.rows {
            return Err(Error::Dimension(format!(
                "right-hand side of length {} for {} equations",
                b.len(),
                self.rows
            )));
        }
        match self.solve_unique(b) {
            Err(Error::Underdetermined { .. }) | Err(Error::Inconsistent) => {
                Err(Error::Singular { det: Rat::zero() })
            }
            other => other,
        }
    }

    /// Row-reduces the (possibly rectangular) system `self * x = b` and
    /// returns its unique solution.
    pub fn solve_unique(&self, b: &[Rat]) -> Result<Vec<Rat>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!(
                "right-hand side of length {} for {} equations",
                b.len(),
                self.rows
            )));
        }
        let (rref, pivots) = self.augmented_rref(b);
        let n = self.cols;
        // a pivot in the augmented column means 0 = nonzero
        if pivots.last() == Some(&n) {
            return Err(Error::Inconsistent);
        }
        if pivots.len() < n {
            return Err(Error::Underdetermined {
                rank: pivots.len(),
                unknowns: n,
            });
        }
        Ok((0..n).map(|i| rref[i][n].clone()).collect())
    }

    pub fn rank(&self) -> usize {
        self.augmented_rref(&vec![Rat::zero(); self.rows]).1.len()
    }

    fn augmented_rref(&self, b: &[Rat]) -> (Vec<Vec<Rat>>, Vec<usize>) {
        let n = self.cols;
        let mut a: Vec<Vec<Rat>> = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.push(b[i].clone());
                r
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..=n {
            if r == a.len() {
                break;
            }
            let Some(p) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let inv = a[r][col].recip();
            for v in a[r].iter_mut() {
                *v *= &inv;
            }
            for i in 0..a.len() {
                if i != r && !a[i][col].is_zero() {
                    let f = a[i][col].clone();
                    let (row, pivot) = if i < r {
                        let (lo, hi) = a.split_at_mut(r);
                        (&mut lo[i], &hi[0])
                    } else {
                        let (lo, hi) = a.split_at_mut(i);
                        (&mut hi[0], &lo[r])
                    };
                    for (x, p) in row[col..=n].iter_mut().zip(&pivot[col..=n]) {
                        *x -= &f * p;
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        (a, pivots)
    }

    /// A nonzero `v` with `vᵀ·self = 0`, if the rows are dependent.
    pub fn left_null_vector(&self) -> Option<Vec<Rat>> {
        let t = self.transpose();
        let (rref, pivots) = t.augmented_rref(&vec![Rat::zero(); t.rows]);
        let free = (0..t.cols).find(|c| !pivots.contains(c))?;
        let mut v = vec![Rat::zero(); t.cols];
        v[free] = Rat::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -rref[r][free].clone();
        }
        Some(v)
    }

    /// Characteristic polynomial `det(xI - self)` by Faddeev-LeVerrier.
    pub fn char_poly(&self) -> Result<UniPoly> {
        self.require_square()?;
        let n = self.rows;
        let mut coeffs = vec![Rat::zero(); n + 1];
        coeffs[n] = Rat::one();
        let mut aux = Self::zeros(n, n);
        let mut c = Rat::one();
        for k in 1..=n {
            // aux <- self * aux + c_{n-k+1} * I
            let mut next = self.mul(&aux)?;
            for i in 0..n {
                let v = next.get(i, i) + &c;
                next.set(i, i, v);
            }
            aux = next;
            let prod = self.mul(&aux)?;
            let trace = (0..n).fold(Rat::zero(), |acc, i| acc + prod.get(i, i));
            c = -trace / super::rat(k as i64);
            coeffs[n - k] = c.clone();
        }
        Ok(UniPoly::new(coeffs))
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
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
