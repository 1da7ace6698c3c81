//! Chirp-based hierarchical beam training for near-field XL-MIMO.
//!
//! The crate is organised bottom-up:
//!
//! - [`system`], [`geometry`] and [`channel`]: array configuration, exact and
//!   Taylor spherical-wave distances, near-field steering vectors, the
//!   slope–intercept (k–b) mapping and stochastic LoS/NLoS channels.
//! - [`codebook`]: normalized spatial-chirp codewords, the elementary k–b grid,
//!   the DFT column, the triangle-subdivision hierarchy and a distance-ring
//!   baseline.
//! - [`training`]: noisy pilot measurements and the search procedures
//!   (hierarchical, exhaustive, perfect CSI).
//! - [`analysis`]: ideal and measured chirp beam patterns, sum-rate, success
//!   and overhead accounting.
//! - [`experiment`]: config-driven Monte-Carlo sweeps with deterministic seed
//!   splitting and CSV output.

// NaN-rejecting checks are written as `!(x > 0.0)` on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod channel;
pub mod codebook;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod system;
pub mod training;
pub mod vector;

pub use error::{Error, Result};
pub use geometry::{KbPoint, SteeringMode, UserGeometry};
pub use system::SystemConfig;
pub use vector::ComplexVector;
