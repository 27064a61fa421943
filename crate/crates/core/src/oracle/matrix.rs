use std::ops::{Index, IndexMut};

use serde::Serialize;

use crate::Scalar;

/// Small dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<S> {
    dim: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![S::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn diagonal(values: &[S]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Builds from rows; panics if the rows are ragged or not square.
    pub fn from_rows<R: AsRef<[S]>>(rows: &[R]) -> Self {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), dim, "matrix rows must be square");
            data.extend_from_slice(row);
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        self.data
            .chunks(self.dim.max(1))
            .map(<[S]>::to_vec)
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == S::zero() {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] = out[(i, j)] + a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    pub fn trace(&self) -> S {
        (0..self.dim).fold(S::zero(), |acc, i| acc + self[(i, i)])
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> S {
        self.data.iter().fold(S::zero(), |acc, &x| acc.max(x.abs()))
    }

    pub fn frobenius_norm(&self) -> S {
        self.data
            .iter()
            .fold(S::zero(), |acc, &x| acc + x * x)
            .sqrt()
    }

    /// Frobenius norm of the strictly off-diagonal part.
    pub fn off_diagonal_norm(&self) -> S {
        let mut acc = S::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    acc = acc + self[(i, j)] * self[(i, j)];
                }
            }
        }
        acc.sqrt()
    }

    /// Largest `|m_ij - m_ji|`.
    pub fn asymmetry(&self) -> S {
        let mut worst = S::zero();
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn is_symmetric(&self) -> bool {
        self.asymmetry() == S::zero()
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.dim + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.dim + j]
    }
}

impl<S: Serialize> Serialize for Matrix<S> {
    fn serialize<Ser: serde::Serializer>(&self, serializer: Ser) -> Result<Ser::Ok, Ser::Error> {
        serializer.collect_seq(self.data.chunks(self.dim.max(1)))
    }
}
