//! Frenet and equiform apparatus of curves in the pseudo-Galilean space
//! G³₁, AW(k)-type classification, equiform Bertrand pairs, and a set of
//! closed-form fixture curves.
//!
//! Curves are in arc-length form `s ↦ (s, y(s), z(s))` and are evaluated
//! through their derivative jets up to order four, either analytic or
//! rebuilt from positions by finite differences.

// guards are written as `!(x > tol)` so that NaN fails them
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod aw;
pub mod bertrand;
pub mod cli;
pub mod curve;
pub mod diagnostics;
pub mod equiform;
pub mod error;
pub mod frenet;
pub mod numeric;
pub mod zoo;

pub use algebra::{CausalClass, PgVector, SimilarityMotion};
pub use aw::{classify, AwReport, AwType, QVectors};
pub use bertrand::{
    bertrand_mate, bertrand_nature, verify_bertrand_pair, BertrandNature, BertrandPair,
};
pub use curve::{make_analytic_curve, make_sampled_curve, CurveJet, Domain, JetKind};
pub use diagnostics::Diagnostic;
pub use equiform::{equiform_data, natural_class, EquiformData, NaturalClass, NaturalTag};
pub use error::{Degeneracy, Error, Result};
pub use frenet::{frenet_data, FrenetData};
pub use zoo::{bertrand_fixture, get_example, isotropic_circle, ZooCurve, ZooEntry, ZooParams};
