//! Coset shaping for Gray-mapped 2^m-PAM / QAM coded modulation.
//!
//! The crate is organised bottom-up:
//!
//! - [`gf2lin`]: dense GF(2) matrices and vectors.
//! - [`mapper`]: Gray-labelled PAM mapping ψ of codewords.
//! - [`shaping`]: shaping-oriented generator matrices, min-energy coset-leader
//!   encoding and the matching decoder.
//! - [`channel`]: seeded AWGN.
//! - [`decoding`]: ML decoding, bit demapping and LDPC belief propagation.
//! - [`metrics`]: energies, shaping gain, capacity limits and NSM estimates.
//! - [`harness`]: experiment configuration, Monte Carlo runs and CSV output.

pub mod channel;
pub mod decoding;
pub mod gf2lin;
pub mod harness;
pub mod mapper;
pub mod metrics;
pub mod shaping;

pub use gf2lin::{BinMatrix, BinVec};
pub use mapper::{GrayTable, SignalSeq};
pub use shaping::{ShapedWord, ShapingConstruction, ShapingParams};
