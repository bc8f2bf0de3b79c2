//! Connection coefficients and covariant differentiation.
//!
//! `gamma[α][i][j] = Γ^α_{ij}` with `∇_{∂_i}∂_j = Γ^α_{ij}∂_α`: the first
//! lower index is the differentiation direction. The semi-symmetric
//! non-metric connection is `∇̂_X Y = ∇_X Y + g(P̂,Y)X`, i.e.
//! `Γ̂^α_{ij} = Γ^α_{ij} + ω_j δ^α_i` with `ω_j = g(P̂,∂_j)`. It has torsion
//! and is not metric-compatible, so no index symmetry is assumed anywhere.

use crate::expr::{rat, Expr};
use crate::metric::{Metric, MetricError};
use crate::tensor::{indices, Tensor};

/// Index (0-based) of the distinguished coordinate `x₃`; all fields depend on
/// it alone, so `∂_l = 0` for every other `l`.
pub const COORD_X3: usize = 2;

/// `∂_l` applied to a component expression.
pub fn partial(l: usize, e: &Expr) -> Expr {
    if l == COORD_X3 {
        e.differentiate()
    } else {
        Expr::zero()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    dim: usize,
    gamma: Vec<Expr>, // [α][i][j]
}

impl Connection {
    pub fn zeros(dim: usize) -> Self {
        Connection {
            dim,
            gamma: vec![Expr::zero(); dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gamma(&self, alpha: usize, i: usize, j: usize) -> &Expr {
        &self.gamma[(alpha * self.dim + i) * self.dim + j]
    }

    pub fn set_gamma(&mut self, alpha: usize, i: usize, j: usize, value: Expr) {
        self.gamma[(alpha * self.dim + i) * self.dim + j] = value;
    }

    /// Non-zero coefficients as `(α, i, j, Γ^α_{ij})` in index order.
    pub fn nonzero(&self) -> Vec<(usize, usize, usize, &Expr)> {
        let mut out = Vec::new();
        for a in 0..self.dim {
            for i in 0..self.dim {
                for j in 0..self.dim {
                    let g = self.gamma(a, i, j);
                    if !g.is_zero() {
                        out.push((a, i, j, g));
                    }
                }
            }
        }
        out
    }
}

/// Christoffel symbols of the second kind for a diagonal metric:
/// `Γ^k_{ij} = ½ g^{kk} (∂_i g_{jk} + ∂_j g_{ik} - ∂_k g_{ij})`.
pub fn levi_civita(m: &Metric) -> Result<Connection, MetricError> {
    let n = m.dim();
    let mut conn = Connection::zeros(n);
    let half = rat(1, 2);
    for k in 0..n {
        let ginv_k = m.inv(k)?.clone();
        for i in 0..n {
            for j in 0..n {
                // diagonal metric: g_{jk} ≠ 0 only for j = k
                let mut s = Expr::zero();
                if j == k {
                    s = s.add(&partial(i, m.diag(k)));
                }
                if i == k {
                    s = s.add(&partial(j, m.diag(k)));
                }
                if i == j {
                    s = s.sub(&partial(k, m.diag(i)));
                }
                if !s.is_zero() {
                    conn.set_gamma(k, i, j, ginv_k.mul(&s).scale(&half));
                }
            }
        }
    }
    Ok(conn)
}

/// Semi-symmetric non-metric connection for the vector field `P̂ = Σ pⱼ∂ⱼ`:
/// adds `ω_j δ^α_i` to the Levi-Civita coefficients, with
/// `ω_j = g(P̂,∂_j) = g_{jj}·pʲ` for a diagonal metric.
pub fn ssnm(m: &Metric, p: &[Expr]) -> Result<Connection, ConnectionError> {
    let n = m.dim();
    if p.len() != n {
        return Err(ConnectionError::BadVectorLength {
            expected: n,
            got: p.len(),
        });
    }
    let mut conn = levi_civita(m)?;
    let omega: Vec<Expr> = (0..n).map(|j| m.diag(j).mul(&p[j])).collect();
    for i in 0..n {
        for j in 0..n {
            if omega[j].is_zero() {
                continue;
            }
            let g = conn.gamma(i, i, j).add(&omega[j]);
            conn.set_gamma(i, i, j, g);
        }
    }
    Ok(conn)
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConnectionError {
    #[error("vector field has {got} components, metric dimension is {expected}")]
    BadVectorLength { expected: usize, got: usize },
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("covariant derivative of contravariant tensors is unsupported")]
    ContravariantInput,
}

/// Covariant derivative of a covariant tensor:
/// `(∇T)_{l;i₁…i_q} = ∂_l T_{i₁…i_q} - Σ_m Γ^β_{l i_m} T_{…β…}`.
/// The derivative index is the first index of the result, matching the
/// subscript-before-tensor notation `∇_l T_{i₁…i_q}`.
pub fn covariant_derivative(conn: &Connection, t: &Tensor) -> Result<Tensor, ConnectionError> {
    if t.valence().0 != 0 {
        return Err(ConnectionError::ContravariantInput);
    }
    let q = t.valence().1;
    let n = t.dim();
    let out = Tensor::build((0, q + 1), n, |idx| {
        let l = idx[0];
        let inner = &idx[1..];
        let mut v = partial(l, t.at(inner));
        let mut slot = inner.to_vec();
        for m_slot in 0..q {
            let orig = slot[m_slot];
            for beta in 0..n {
                let g = conn.gamma(beta, l, orig);
                if g.is_zero() {
                    continue;
                }
                slot[m_slot] = beta;
                v = v.sub(&g.mul(t.at(&slot)));
            }
            slot[m_slot] = orig;
        }
        v
    });
    Ok(out)
}

/// `∇g` as a (0,3) tensor; identically zero for the Levi-Civita connection,
/// generally nonzero for the semi-symmetric non-metric one.
pub fn metric_derivative(conn: &Connection, m: &Metric) -> Tensor {
    covariant_derivative(conn, &m.tensor()).expect("metric tensor is covariant")
}

/// Exact equality of two connections, coefficient by coefficient.
pub fn connections_equal(a: &Connection, b: &Connection) -> bool {
    if a.dim() != b.dim() {
        return false;
    }
    indices(3, a.dim()).all(|idx| a.gamma(idx[0], idx[1], idx[2]) == b.gamma(idx[0], idx[1], idx[2]))
}
