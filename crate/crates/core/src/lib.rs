//! Regularized point-charge fields on Minkowski space.
//!
//! The crate covers retarded-time kinematics for analytic worldlines, smooth
//! Heaviside regularizations H_ε built from mollifiers, the generating
//! function Φ_α whose d'Alembertian contains the Liénard–Wiechert potential,
//! weak limits of ε-nets against test functions, the self-energy of a
//! regularized charge at rest, and a small exact algebra of one-dimensional
//! distributions.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// reference constants keep every digit the oracle printed
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod association;
pub mod distalg;
pub mod fields;
pub mod jet;
pub mod minkowski;
#[cfg(test)]
mod props;
pub mod quad;
pub mod regularization;
pub mod retarded;
pub mod sampling;
pub mod selfenergy;

pub use minkowski::{minkowski_inner, validate_worldline, CatalogWorldline, FourVector, Worldline};
pub use regularization::{GeneralizedNet, HeavisideFamily, Mollifier};
pub use retarded::{kinematics, retarded_time, RetardedKinematics};
