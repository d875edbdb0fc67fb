//! Unsupervised learning by output distribution matching: a dual
//! autoencoder that aligns two unpaired data domains, a GAN-trained
//! classifier whose prediction statistics are matched to a label stream,
//! and per-test-case generative inference for one-shot domain adaptation,
//! plus deterministic generators for every task and a batch harness.

pub mod adapt;
pub mod data;
pub mod dualae;
pub mod error;
pub mod ganodm;
pub mod harness;
pub mod optim;
pub mod tensor;

pub use error::{Error, Result};
