//! Dense tensors with reverse-mode differentiation: just enough machinery
//! for dense layers, 1-D/2-D convolutions, global max pooling over time,
//! the usual activations, and the three losses used across the experiments.

pub mod gradcheck;
pub mod init;
pub mod ops;
pub mod scalar;
#[allow(clippy::module_inception)]
mod tensor;
pub mod tape;

pub use gradcheck::grad_check;
pub use init::{tensor_new, InitKind, InitSpec};
pub use ops::{Activation, LossKind};
pub use scalar::Scalar;
pub use tape::{Gradients, Tape, Var};
pub use tensor::Tensor;
