//! Receivers: exact ML decoding for tiny codes, Gray-PAM bit demapping and
//! sum-product decoding of binary LDPC codes.
//!
//! LLRs use the natural log and are positive when bit 0 is more likely.

use std::ops::Deref;

use thiserror::Error;

mod bp;
mod demap;
mod ldpc;
mod ml;

pub use bp::{bp_decode, BpDecoder, BpOutput, CheckRule, LLR_CLIP};
pub use demap::{demap_llr, symbol_posteriors, DemapMode};
pub use ldpc::{parse_alist, ParityCheck};
pub use ml::{ml_decode, MlDecoder, ML_CAP};

use crate::gf2lin::Gf2Error;
use crate::mapper::MapperError;
use crate::shaping::ShapingError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecodingError {
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("noise variance must be positive, got {0}")]
    NonPositiveVariance(f64),
    #[error("ML enumeration over 2^{bits} codewords exceeds the cap of 2^{cap}")]
    EnumerationTooLarge { bits: usize, cap: usize },
    #[error("malformed alist: {0}")]
    MalformedAlist(String),
    #[error("index {index} out of range 1..={max} in alist")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("invalid parity-check structure: {0}")]
    InvalidStructure(String),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Mapper(#[from] MapperError),
    #[error(transparent)]
    Shaping(#[from] ShapingError),
}

/// Per-bit log-likelihood ratios `ln P(b=0|y) / P(b=1|y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrVec(Vec<f64>);

impl LlrVec {
    pub fn new(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| v.is_finite()));
        LlrVec(values)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for LlrVec {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for LlrVec {
    fn from(values: Vec<f64>) -> Self {
        LlrVec::new(values)
    }
}
