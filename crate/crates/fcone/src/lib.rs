//! Exact divisor calculus on the moduli spaces of stable and pseudostable
//! pointed curves.
//!
//! The crate works in the tautological basis `lambda`, `delta_irr`,
//! `delta_{i,I}` of the rational Picard group of the moduli space of stable
//! `n`-pointed genus-`g` curves, with the usual convention
//! `delta_{0,{k}} = -psi_k`. Everything is computed over exact rationals;
//! there is no floating point anywhere in the core, so membership on a
//! chamber wall is decidable.
//!
//! The main pieces:
//!
//! - [`index_set`]: the set of boundary classes `[i, I]` modulo
//!   `(i, I) ~ (g - i, I^c)`, admissible subsets and their counting.
//! - [`divisor`]: exact divisor classes, adjoint parameters, push/pull along
//!   the contraction to the pseudostable space, and the pullback along the
//!   flag map to genus zero.
//! - [`fcurve`]: the six families of F-curves with their intersection
//!   numbers, and the elliptic bridge curves of the pseudostable space.
//! - [`positivity`]: F-nef / F-ample testing, both by brute force over the
//!   enumerated F-curves and through closed-form inequality systems for
//!   adjoint divisors.
//! - [`ample_model`]: the ample-model classifier for adjoint divisors and
//!   the chamber sweep over coefficient grids.
//! - [`geometry`]: Q-factoriality, descent of line bundles, and the
//!   factorization of the contraction into divisorial and small steps.
//! - [`cli`]: the `fcone` command line front end.

pub mod ample_model;
pub mod cli;
pub mod divisor;
pub mod error;
pub mod fcurve;
pub mod geometry;
pub mod index_set;
pub mod positivity;
pub mod rat;

pub use error::{DomainError, Result};
pub use rat::Rat;
