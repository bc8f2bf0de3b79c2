//! Kulkarni–Nomizu products, derivation products `E·F` and Tachibana tensors
//! `Q(Z,F)`.
//!
//! A (0,4) curvature-like tensor `E` acts on a covariant tensor `F` through
//! its endomorphism `ℰ(u₁,u₂)` (see [`crate::curvature::endo_from_tensor04`]):
//!
//! ```text
//! (E·F)(Y₁,…,Y_k,U₁,U₂) = -F(ℰ(U₁,U₂)Y₁,…) - … - F(…,ℰ(U₁,U₂)Y_k)
//! ```
//!
//! and a (0,2) tensor `Z` acts through the wedge endomorphism
//! `(U₁∧_Z U₂)Y = Z(U₂,Y)U₁ - Z(U₁,Y)U₂`, giving
//!
//! ```text
//! Q(Z,F)(Y₁,…,Y_k,U₁,U₂) = Z(U₁,Y₁)F(U₂,…) + … + Z(U₁,Y_k)F(…,U₂)
//!                        - Z(U₂,Y₁)F(U₁,…) - … - Z(U₂,Y_k)F(…,U₁)
//! ```
//!
//! `Z` is not required to be symmetric: the case-b Ricci tensor is not, and
//! the formulas are well-defined without symmetry.

use crate::curvature::{endo_from_tensor04, Error};
use crate::expr::Expr;
use crate::metric::Metric;
use crate::tensor::{Tensor, TensorError};

/// Kulkarni–Nomizu product of two (0,2) tensors:
/// `(A∧E)_{hkij} = A_{hj}E_{ki} - A_{hi}E_{kj} + A_{ki}E_{hj} - A_{kj}E_{hi}`.
pub fn kulkarni(a: &Tensor, e: &Tensor) -> Result<Tensor, TensorError> {
    check_rank2(a)?;
    check_rank2(e)?;
    if a.dim() != e.dim() {
        return Err(TensorError::DimensionMismatch(a.dim(), e.dim()));
    }
    let n = a.dim();
    Ok(Tensor::build((0, 4), n, |idx| {
        let (h, k, i, j) = (idx[0], idx[1], idx[2], idx[3]);
        a.at(&[h, j])
            .mul(e.at(&[k, i]))
            .sub(&a.at(&[h, i]).mul(e.at(&[k, j])))
            .add(&a.at(&[k, i]).mul(e.at(&[h, j])))
            .sub(&a.at(&[k, j]).mul(e.at(&[h, i])))
    }))
}

fn check_rank2(t: &Tensor) -> Result<(), TensorError> {
    if t.valence() != (0, 2) {
        return Err(TensorError::ValenceMismatch {
            expected: (0, 2),
            got: t.valence(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProductError {
    #[error("derivation acts on (0,2) or (0,4) tensors only, got rank {0}")]
    UnsupportedRank(usize),
    #[error(transparent)]
    Curvature(#[from] Error),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Derivation product `E·F` for a (0,4) tensor `E` and `F` of rank 2 or 4.
/// The two endomorphism arguments are the last two indices of the result.
pub fn dot(e4: &Tensor, f: &Tensor, m: &Metric) -> Result<Tensor, ProductError> {
    dot_impl(e4, f, m, false)
}

/// Sequential twin of [`dot`] for the benchmark comparison.
pub fn dot_serial(e4: &Tensor, f: &Tensor, m: &Metric) -> Result<Tensor, ProductError> {
    dot_impl(e4, f, m, true)
}

fn dot_impl(e4: &Tensor, f: &Tensor, m: &Metric, serial: bool) -> Result<Tensor, ProductError> {
    let k = check_operand(f)?;
    let endo = endo_from_tensor04(e4, m)?;
    let n = m.dim();
    let component = |idx: &[usize]| {
        let ys = &idx[..k];
        let (u1, u2) = (idx[k], idx[k + 1]);
        let mut v = Expr::zero();
        let mut slot = ys.to_vec();
        for mth in 0..k {
            let orig = slot[mth];
            for c in 0..n {
                let w = endo.at(&[c, u1, u2, orig]);
                if w.is_zero() {
                    continue;
                }
                slot[mth] = c;
                v = v.sub(&w.mul(f.at(&slot)));
            }
            slot[mth] = orig;
        }
        v
    };
    Ok(if serial {
        Tensor::build_serial((0, k + 2), n, component)
    } else {
        Tensor::build((0, k + 2), n, component)
    })
}

/// Tachibana tensor `Q(Z,F)` for a (0,2) tensor `Z` and `F` of rank 2 or 4.
pub fn tachibana(z: &Tensor, f: &Tensor, m: &Metric) -> Result<Tensor, ProductError> {
    tachibana_impl(z, f, m, false)
}

/// Sequential twin of [`tachibana`] for the benchmark comparison.
pub fn tachibana_serial(z: &Tensor, f: &Tensor, m: &Metric) -> Result<Tensor, ProductError> {
    tachibana_impl(z, f, m, true)
}

fn tachibana_impl(
    z: &Tensor,
    f: &Tensor,
    m: &Metric,
    serial: bool,
) -> Result<Tensor, ProductError> {
    check_rank2(z)?;
    let k = check_operand(f)?;
    if z.dim() != f.dim() || z.dim() != m.dim() {
        return Err(TensorError::DimensionMismatch(z.dim(), f.dim()).into());
    }
    let n = m.dim();
    let component = |idx: &[usize]| {
        let ys = &idx[..k];
        let (u1, u2) = (idx[k], idx[k + 1]);
        let mut v = Expr::zero();
        let mut slot = ys.to_vec();
        for mth in 0..k {
            let orig = slot[mth];
            slot[mth] = u2;
            v = v.add(&z.at(&[u1, orig]).mul(f.at(&slot)));
            slot[mth] = u1;
            v = v.sub(&z.at(&[u2, orig]).mul(f.at(&slot)));
            slot[mth] = orig;
        }
        v
    };
    Ok(if serial {
        Tensor::build_serial((0, k + 2), n, component)
    } else {
        Tensor::build((0, k + 2), n, component)
    })
}

fn check_operand(f: &Tensor) -> Result<usize, ProductError> {
    let k = f.valence().1;
    if f.valence().0 != 0 || (k != 2 && k != 4) {
        return Err(ProductError::UnsupportedRank(f.rank()));
    }
    Ok(k)
}
