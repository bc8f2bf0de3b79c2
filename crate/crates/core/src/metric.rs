//! Diagonal metric bookkeeping.
//!
//! Only diagonal metrics whose entries depend on the single coordinate `x₃`
//! are supported; partial derivatives along the other coordinates vanish
//! identically. The symbolic curvature pipeline additionally needs every
//! diagonal entry to be a unit of the expression ring (a single term
//! `c·e^{k·x₃}` with no function factors) so that the inverse metric stays
//! inside the ring.

use crate::expr::{Expr, Rational};
use crate::frac::FracExpr;
use crate::tensor::Tensor;

#[derive(Debug, Clone)]
pub struct Metric {
    dim: usize,
    diagonal: Vec<Expr>,
    inverse_diagonal: Vec<FracExpr>,
    unit_inverse: Option<Vec<Expr>>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricError {
    #[error("metric dimension must be at least 3, got {0}")]
    DimensionTooSmall(usize),
    #[error("non-invertible metric: diagonal entry {0} is zero")]
    DegenerateEntry(usize),
    #[error(
        "diagonal entry {0} is not a unit of the expression ring; the symbolic \
         pipeline needs entries of the form c*exp(k*x3)"
    )]
    NonUnitEntry(usize),
}

impl Metric {
    pub fn diagonal(entries: Vec<Expr>) -> Result<Self, MetricError> {
        let dim = entries.len();
        if dim < 3 {
            return Err(MetricError::DimensionTooSmall(dim));
        }
        for (i, e) in entries.iter().enumerate() {
            if e.is_zero() {
                return Err(MetricError::DegenerateEntry(i));
            }
        }
        let inverse_diagonal = entries
            .iter()
            .map(|e| FracExpr::new(Expr::one(), e.clone()).expect("nonzero checked"))
            .collect();
        let unit_inverse = unit_inverses(&entries);
        Ok(Metric {
            dim,
            diagonal: entries,
            inverse_diagonal,
            unit_inverse,
        })
    }

    /// The Sol-type metric `diag(e^{2x₃}, e^{-2x₃}, ε)` with `ε = ±1`.
    pub fn sol3(epsilon: i8) -> Self {
        Metric::diagonal(vec![
            Expr::exp_weight(2),
            Expr::exp_weight(-2),
            Expr::from_int(epsilon as i64),
        ])
        .expect("preset metric is invertible")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn diag(&self, i: usize) -> &Expr {
        &self.diagonal[i]
    }

    /// Elementwise reciprocal of the diagonal, as fractions.
    pub fn inverse_diagonal(&self) -> &[FracExpr] {
        &self.inverse_diagonal
    }

    /// Ring inverses of the diagonal entries; `None` when some entry is not a
    /// unit.
    pub fn unit_inverse_diagonal(&self) -> Option<&[Expr]> {
        self.unit_inverse.as_deref()
    }

    /// Ring inverse of one diagonal entry; errors when the entry is not a
    /// unit.
    pub fn inv(&self, i: usize) -> Result<&Expr, MetricError> {
        self.unit_inverse
            .as_ref()
            .map(|v| &v[i])
            .ok_or(MetricError::NonUnitEntry(i))
    }

    /// Index of the first diagonal entry that is not a unit of the ring.
    pub fn first_non_unit_entry(&self) -> Option<usize> {
        self.diagonal
            .iter()
            .position(|e| unit_inverses(std::slice::from_ref(e)).is_none())
    }

    /// The metric as a (0,2) tensor.
    pub fn tensor(&self) -> Tensor {
        let mut g = Tensor::zeros((0, 2), self.dim);
        for i in 0..self.dim {
            g.set(&[i, i], self.diagonal[i].clone()).unwrap();
        }
        g
    }
}

fn unit_inverses(entries: &[Expr]) -> Option<Vec<Expr>> {
    entries
        .iter()
        .map(|e| {
            if e.num_terms() != 1 {
                return None;
            }
            let ((w, m), c) = e.terms().next().unwrap();
            if !m.is_one() {
                return None;
            }
            Some(Expr::term(
                Rational::from_integer(1.into()) / c,
                -w,
                crate::expr::Monomial::one(),
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sol3_inverse_is_elementwise_reciprocal() {
        for eps in [1i8, -1] {
            let m = Metric::sol3(eps);
            let inv = m.unit_inverse_diagonal().unwrap();
            assert_eq!(inv[0], Expr::exp_weight(-2));
            assert_eq!(inv[1], Expr::exp_weight(2));
            assert_eq!(inv[2], Expr::from_int(eps as i64)); // ε² = 1
            for i in 0..3 {
                assert_eq!(m.diag(i).mul(&inv[i]), Expr::one());
            }
        }
    }

    #[test]
    fn euclidean_inverse_is_identity() {
        let m = Metric::diagonal(vec![Expr::one(), Expr::one(), Expr::one()]).unwrap();
        for f in m.inverse_diagonal() {
            assert!(f.equals(&FracExpr::one()));
        }
    }

    #[test]
    fn degenerate_metric_rejected() {
        let err = Metric::diagonal(vec![Expr::exp_weight(2), Expr::zero(), Expr::one()])
            .unwrap_err();
        assert_eq!(err, MetricError::DegenerateEntry(1));
    }

    #[test]
    fn inverse_diagonal_multiplies_to_one() {
        let m = Metric::diagonal(vec![
            Expr::func("a", 0),
            Expr::exp_weight(4),
            Expr::from_int(-1),
        ])
        .unwrap();
        for i in 0..3 {
            let prod = m.inverse_diagonal()[i].mul(&FracExpr::from_expr(m.diag(i).clone()));
            assert!(prod.equals(&FracExpr::one()));
        }
        // `a` is not a unit, so there is no ring inverse
        assert!(m.unit_inverse_diagonal().is_none());
        assert!(matches!(m.inv(0), Err(MetricError::NonUnitEntry(0))));
    }
}
