//! Exact construction and verification of the Kontsevich–Witten and
//! (generalized) Brézin–Gross–Witten tau-functions: cut-and-join series,
//! Schur Q-function expansions, hypergeometric BKP sums and the bilinear
//! identities they satisfy, all in exact rational arithmetic.

pub mod cache;
pub mod error;
pub mod hirota;
pub mod operators;
pub mod partitions;
pub mod polyring;
pub mod qschur;
pub mod report;
pub mod scalars;
pub mod tau;

pub use error::{Error, Result};
