//! Dense indexed tensors over [`Expr`].
//!
//! Components are stored row-major with the first written index varying
//! slowest. Storage is fully dense and no symmetry is ever assumed: the
//! curvature of a semi-symmetric non-metric connection loses index symmetries
//! that hold in the Levi-Civita case, so symmetries are *tested*, never built
//! in.

use crate::expr::Expr;

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    /// (contravariant, covariant) slot counts; indices are ordered with all
    /// contravariant slots first.
    valence: (usize, usize),
    dim: usize,
    data: Vec<Expr>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TensorError {
    #[error("valence mismatch: expected {expected:?}, got {got:?}")]
    ValenceMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("index {index:?} out of bounds for rank {rank}, dimension {dim}")]
    IndexOutOfBounds {
        index: Vec<usize>,
        rank: usize,
        dim: usize,
    },
}

impl Tensor {
    pub fn zeros(valence: (usize, usize), dim: usize) -> Self {
        let rank = valence.0 + valence.1;
        Tensor {
            valence,
            dim,
            data: vec![Expr::zero(); dim.pow(rank as u32)],
        }
    }

    /// Build componentwise from an index function.
    pub fn build(
        valence: (usize, usize),
        dim: usize,
        f: impl Fn(&[usize]) -> Expr + Sync,
    ) -> Self {
        let rank = valence.0 + valence.1;
        let len = dim.pow(rank as u32);
        let data = crate::par::map_indexed(len, |flat| f(&unflatten(flat, rank, dim)));
        Tensor { valence, dim, data }
    }

    /// Sequential variant of [`Tensor::build`], used by the benchmark suite to
    /// compare against the data-parallel path.
    pub fn build_serial(
        valence: (usize, usize),
        dim: usize,
        f: impl Fn(&[usize]) -> Expr,
    ) -> Self {
        let rank = valence.0 + valence.1;
        let len = dim.pow(rank as u32);
        let data = (0..len).map(|flat| f(&unflatten(flat, rank, dim))).collect();
        Tensor { valence, dim, data }
    }

    pub fn valence(&self) -> (usize, usize) {
        self.valence
    }

    pub fn rank(&self) -> usize {
        self.valence.0 + self.valence.1
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn flatten(&self, index: &[usize]) -> Result<usize, TensorError> {
        if index.len() != self.rank() || index.iter().any(|&i| i >= self.dim) {
            return Err(TensorError::IndexOutOfBounds {
                index: index.to_vec(),
                rank: self.rank(),
                dim: self.dim,
            });
        }
        Ok(index.iter().fold(0, |acc, &i| acc * self.dim + i))
    }

    pub fn get(&self, index: &[usize]) -> Result<&Expr, TensorError> {
        Ok(&self.data[self.flatten(index)?])
    }

    pub fn set(&mut self, index: &[usize], value: Expr) -> Result<(), TensorError> {
        let flat = self.flatten(index)?;
        self.data[flat] = value;
        Ok(())
    }

    /// Unchecked-by-construction accessor for internal loops; panics on a bad
    /// index like any slice access.
    pub fn at(&self, index: &[usize]) -> &Expr {
        let flat = index.iter().fold(0, |acc, &i| acc * self.dim + i);
        &self.data[flat]
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor, TensorError> {
        if self.valence != other.valence {
            return Err(TensorError::ValenceMismatch {
                expected: self.valence,
                got: other.valence,
            });
        }
        if self.dim != other.dim {
            return Err(TensorError::DimensionMismatch(self.dim, other.dim));
        }
        Ok(Tensor {
            valence: self.valence,
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(x, y)| x.add(y))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Tensor) -> Result<Tensor, TensorError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Tensor {
        self.map(|e| e.neg())
    }

    pub fn scale(&self, s: &Expr) -> Tensor {
        self.map(|e| e.mul(s))
    }

    pub fn map(&self, f: impl Fn(&Expr) -> Expr) -> Tensor {
        Tensor {
            valence: self.valence,
            dim: self.dim,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn components(&self) -> impl Iterator<Item = (Vec<usize>, &Expr)> {
        let rank = self.rank();
        let dim = self.dim;
        self.data
            .iter()
            .enumerate()
            .map(move |(flat, e)| (unflatten(flat, rank, dim), e))
    }

    /// Non-zero components in canonical (lexicographic) index order.
    pub fn nonzero(&self) -> impl Iterator<Item = (Vec<usize>, &Expr)> {
        self.components().filter(|(_, e)| !e.is_zero())
    }
}

pub(crate) fn unflatten(mut flat: usize, rank: usize, dim: usize) -> Vec<usize> {
    let mut idx = vec![0usize; rank];
    for slot in (0..rank).rev() {
        idx[slot] = flat % dim;
        flat /= dim;
    }
    idx
}

/// All rank-`rank` multi-indices in lexicographic order.
pub fn indices(rank: usize, dim: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..dim.pow(rank as u32)).map(move |flat| unflatten(flat, rank, dim))
}
