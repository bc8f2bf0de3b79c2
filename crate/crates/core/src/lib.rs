//! Exact symbolic curvature engine and geometric-structure classifier for
//! diagonal semi-Riemannian metrics depending on one coordinate, equipped
//! with a semi-symmetric non-metric connection `∇̂_X Y = ∇_X Y + g(P̂,Y)X`.
//!
//! The crate computes, in exact arithmetic over a canonical expression ring:
//! connection coefficients, the Riemann / Weyl conformal / conharmonic /
//! concircular / projective curvature tensors, covariant derivatives,
//! Kulkarni–Nomizu products, derivation products `E·F`, Tachibana tensors
//! `Q(Z,F)`, and from those a full structure classification (semisymmetry and
//! pseudosymmetry relations, quasi-Einstein ranks, Roter decompositions,
//! Einstein levels, Codazzi / cyclic-parallel flags, compatibility,
//! recurrence of curvature 2-forms). A finite-difference numeric tower
//! cross-checks every tensor at sampled points.

pub mod classify;
pub mod config;
pub mod connection;
pub mod curvature;
pub mod expr;
pub mod frac;
pub mod golden;
pub mod linalg;
pub mod metric;
pub mod numeric;
pub(crate) mod par;
pub mod parse;
pub mod products;
pub mod report;
pub mod tensor;

pub use config::{NumericCheck, OutputFormat, Preset, RunConfig};
pub use expr::{Expr, Rational};
pub use frac::FracExpr;
pub use metric::Metric;
pub use report::{run, ClassificationReport, Pipeline, RunError};
pub use tensor::Tensor;
