//! Curvature tensors of a (possibly non-metric) connection.
//!
//! Conventions, fixed once and used everywhere:
//!
//! * the curvature bracket of a connection is
//!   `B^α_{kij} = ∂_iΓ^α_{kj} - ∂_jΓ^α_{ki} + Σ_β (Γ^β_{kj}Γ^α_{βi} - Γ^β_{ki}Γ^α_{βj})`,
//!   antisymmetric in `(i,j)` by construction;
//! * the (0,4) Riemann tensor is `R_{hkij} = g_{hα} B^α_{kij}`;
//! * the curvature endomorphism of a (0,4) tensor `E` raises the *last* slot:
//!   `ℰ(i,j,k)^h = g^{hα} E_{ijkα}`, so the first index pair carries the
//!   endomorphism arguments;
//! * the Ricci trace is `Ric_{kj} = Σ_α ℰ_R(α,k,j)^α`, which for a diagonal
//!   metric is `Σ_α g^{αα} R_{αkjα}`.
//!
//! For the Levi-Civita connection these reduce to the classical conventions
//! (pair symmetry, first Bianchi identity); for the semi-symmetric non-metric
//! connection the Riemann tensor keeps only the last-pair antisymmetry and the
//! Ricci tensor may be non-symmetric. Ricci is never symmetrized.

use crate::connection::{partial, Connection};
use crate::expr::{rat, Expr};
use crate::metric::{Metric, MetricError};
use crate::products::kulkarni;
use crate::tensor::{Tensor, TensorError};

/// Curvature endomorphism of a connection as a (1,3) tensor stored
/// `[h][i][j][k]`: `(i,j)` are the endomorphism arguments, `k` the acted-on
/// vector, `h` the output component.
pub fn endo_from_connection(conn: &Connection) -> Tensor {
    let n = conn.dim();
    Tensor::build((1, 3), n, |idx| {
        let (h, i, j, k) = (idx[0], idx[1], idx[2], idx[3]);
        let mut v = partial(i, conn.gamma(h, k, j)).sub(&partial(j, conn.gamma(h, k, i)));
        for beta in 0..n {
            v = v.add(&conn.gamma(beta, k, j).mul(conn.gamma(h, beta, i)));
            v = v.sub(&conn.gamma(beta, k, i).mul(conn.gamma(h, beta, j)));
        }
        v
    })
}

/// (0,4) Riemann curvature `R_{hkij} = g_{hα} B^α_{kij}`; exact, canonical,
/// antisymmetric in the last index pair for any connection.
pub fn riemann04(conn: &Connection, m: &Metric) -> Result<Tensor, MetricError> {
    let endo = endo_from_connection(conn);
    let n = m.dim();
    Ok(Tensor::build((0, 4), n, |idx| {
        let (h, k, i, j) = (idx[0], idx[1], idx[2], idx[3]);
        m.diag(h).mul(endo.at(&[h, i, j, k]))
    }))
}

/// Raise the last slot of a (0,4) tensor into the curvature-endomorphism
/// layout: `ℰ(i,j,k)^h = g^{hα} E_{ijkα}`.
pub fn endo_from_tensor04(t: &Tensor, m: &Metric) -> Result<Tensor, Error> {
    expect_valence(t, (0, 4))?;
    let n = m.dim();
    let inv: Vec<Expr> = (0..n).map(|h| m.inv(h).cloned()).collect::<Result<_, _>>()?;
    Ok(Tensor::build((1, 3), n, |idx| {
        let (h, i, j, k) = (idx[0], idx[1], idx[2], idx[3]);
        inv[h].mul(t.at(&[i, j, k, h]))
    }))
}

/// Lower the output slot back: exact inverse of [`endo_from_tensor04`].
pub fn tensor04_from_endo(endo: &Tensor, m: &Metric) -> Result<Tensor, Error> {
    expect_valence(endo, (1, 3))?;
    let n = m.dim();
    Ok(Tensor::build((0, 4), n, |idx| {
        let (i, j, k, h) = (idx[0], idx[1], idx[2], idx[3]);
        m.diag(h).mul(endo.at(&[h, i, j, k]))
    }))
}

/// `Ric(Y₁,Y₂) = tr{X → ℰ_R(X,Y₁)Y₂}` in the fixed endomorphism layout:
/// `Ric_{kj} = Σ_α ℰ(α,k,j)^α`. The result is not symmetrized.
pub fn trace_ricci_from_endo(endo: &Tensor) -> Result<Tensor, Error> {
    expect_valence(endo, (1, 3))?;
    let n = endo.dim();
    Ok(Tensor::build((0, 2), n, |idx| {
        let (k, j) = (idx[0], idx[1]);
        let mut s = Expr::zero();
        for alpha in 0..n {
            s = s.add(endo.at(&[alpha, alpha, k, j]));
        }
        s
    }))
}

/// Scalar curvature `κ = Σ g^{kj} Ric_{kj}`. The metric is diagonal, so the
/// slot order of a non-symmetric Ricci is irrelevant here.
pub fn scalar_curvature(ric: &Tensor, m: &Metric) -> Result<Expr, Error> {
    expect_valence(ric, (0, 2))?;
    let mut kappa = Expr::zero();
    for k in 0..m.dim() {
        kappa = kappa.add(&m.inv(k)?.mul(ric.at(&[k, k])));
    }
    Ok(kappa)
}

/// Ricci tensor and scalar curvature of a connection.
pub fn ricci_and_scalar(conn: &Connection, m: &Metric) -> Result<(Tensor, Expr), Error> {
    let r = riemann04(conn, m)?;
    let endo = endo_from_tensor04(&r, m)?;
    let ric = trace_ricci_from_endo(&endo)?;
    let kappa = scalar_curvature(&ric, m)?;
    Ok((ric, kappa))
}

/// The four derived curvature tensors:
///
/// * Weyl conformal `C = R - (g∧Ric)/(n-2) + κ(g∧g)/(2(n-1)(n-2))`
/// * conharmonic `K = R - (g∧Ric)/(n-2)`
/// * concircular `W = R - κ(g∧g)/(2n(n-1))`
/// * projective `P_{hkij} = R_{hkij} - (Ric_{ki}g_{hj} - Ric_{hi}g_{kj})/(n-1)`
///
/// `P` is assembled from its explicit component formula rather than a
/// Kulkarni–Nomizu product: it lacks the pair symmetries of the others, and
/// the correction term must sit on exactly these slots to match the component
/// tables the golden suite checks.
pub fn derived_curvatures(
    r: &Tensor,
    ric: &Tensor,
    kappa: &Expr,
    m: &Metric,
) -> Result<DerivedCurvatures, Error> {
    expect_valence(r, (0, 4))?;
    expect_valence(ric, (0, 2))?;
    let n = m.dim();
    let nn = n as i64;
    let g = m.tensor();
    let g_wedge_ric = kulkarni(&g, ric)?;
    let g_wedge_g = kulkarni(&g, &g)?;

    let k_tensor = r.sub(&g_wedge_ric.scale(&Expr::from_rational(rat(1, nn - 2))))?;
    let c_tensor = k_tensor.add(
        &g_wedge_g.scale(&kappa.scale(&rat(1, 2 * (nn - 1) * (nn - 2)))),
    )?;
    let w_tensor = r.sub(&g_wedge_g.scale(&kappa.scale(&rat(1, 2 * nn * (nn - 1)))))?;

    let inv_nm1 = rat(1, nn - 1);
    let p_tensor = Tensor::build((0, 4), n, |idx| {
        let (h, k, i, j) = (idx[0], idx[1], idx[2], idx[3]);
        let corr = ric
            .at(&[k, i])
            .mul(g.at(&[h, j]))
            .sub(&ric.at(&[h, i]).mul(g.at(&[k, j])));
        r.at(&[h, k, i, j]).sub(&corr.scale(&inv_nm1))
    });

    Ok(DerivedCurvatures {
        c: c_tensor,
        k: k_tensor,
        w: w_tensor,
        p: p_tensor,
    })
}

pub struct DerivedCurvatures {
    pub c: Tensor,
    pub k: Tensor,
    pub w: Tensor,
    pub p: Tensor,
}

/// Everything the classifier needs about one connection.
pub struct CurvatureSet {
    pub connection: Connection,
    pub r: Tensor,
    pub ric: Tensor,
    pub kappa: Expr,
    pub c: Tensor,
    pub k: Tensor,
    pub w: Tensor,
    pub p: Tensor,
}

impl CurvatureSet {
    pub fn compute(conn: Connection, m: &Metric) -> Result<Self, Error> {
        let r = riemann04(&conn, m)?;
        let (ric, kappa) = ricci_and_scalar(&conn, m)?;
        let d = derived_curvatures(&r, &ric, &kappa, m)?;
        Ok(CurvatureSet {
            connection: conn,
            r,
            ric,
            kappa,
            c: d.c,
            k: d.k,
            w: d.w,
            p: d.p,
        })
    }

    /// The five curvature tensors in canonical order.
    pub fn family(&self) -> [(&'static str, &Tensor); 5] {
        [
            ("R", &self.r),
            ("C", &self.c),
            ("K", &self.k),
            ("W", &self.w),
            ("P", &self.p),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

fn expect_valence(t: &Tensor, want: (usize, usize)) -> Result<(), TensorError> {
    if t.valence() != want {
        return Err(TensorError::ValenceMismatch {
            expected: want,
            got: t.valence(),
        });
    }
    Ok(())
}
