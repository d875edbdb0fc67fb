//! Plain SGD with a piecewise-constant learning-rate schedule, and Adagrad
//! for the per-test-case adaptation loop. No momentum, no weight decay;
//! regularization terms belong to objectives, not optimizers.

use crate::error::{Error, Result};
use crate::tensor::{Scalar, Tensor};

// ── learning-rate schedule ───────────────────────────────────────────

/// Piecewise-constant schedule: a list of (updates, lr) phases.
#[derive(Debug, Clone, PartialEq)]
pub struct LrSchedule {
    phases: Vec<(u64, f64)>,
}

impl LrSchedule {
    pub fn new(phases: Vec<(u64, f64)>) -> Result<Self> {
        if phases.is_empty() {
            return Err(Error::invalid("lr_schedule", "no phases"));
        }
        if phases.iter().any(|&(n, lr)| n == 0 || lr <= 0.0) {
            return Err(Error::invalid("lr_schedule", "phases need positive length and lr"));
        }
        Ok(LrSchedule { phases })
    }

    /// Single-phase schedule.
    pub fn constant(total: u64, lr: f64) -> Result<Self> {
        Self::new(vec![(total, lr)])
    }

    pub fn total_updates(&self) -> u64 {
        self.phases.iter().map(|&(n, _)| n).sum()
    }

    pub fn phases(&self) -> &[(u64, f64)] {
        &self.phases
    }

    /// Learning rate of the phase containing update index `t`.
    pub fn lr_at(&self, t: u64) -> Result<f64> {
        let mut start = 0u64;
        for &(n, lr) in &self.phases {
            if t < start + n {
                return Ok(lr);
            }
            start += n;
        }
        Err(Error::invalid(
            "lr_at",
            format!("update index {} outside schedule of {} updates", t, self.total_updates()),
        ))
    }

    /// Parse "0.1:2000,0.03:2000,0.01:2000" into phases, dividing each lr
    /// by `divisor` (the batch size in the quoted-rate convention).
    pub fn parse(text: &str, divisor: f64) -> Result<Self> {
        let mut phases = Vec::new();
        for part in text.split(',') {
            let (lr, n) = part
                .split_once(':')
                .ok_or_else(|| Error::invalid("lr_schedule", format!("bad phase '{}'", part)))?;
            let lr: f64 = lr
                .trim()
                .parse()
                .map_err(|_| Error::invalid("lr_schedule", format!("bad lr '{}'", lr)))?;
            let n: u64 = n
                .trim()
                .parse()
                .map_err(|_| Error::invalid("lr_schedule", format!("bad count '{}'", n)))?;
            phases.push((n, lr / divisor));
        }
        Self::new(phases)
    }
}

// ── SGD ──────────────────────────────────────────────────────────────

/// p ← p − lr·g, elementwise.
pub fn sgd_step<S: Scalar>(param: &mut Tensor<S>, grad: &Tensor<S>, lr: f64) -> Result<()> {
    if param.shape() != grad.shape() {
        return Err(Error::shape(
            "sgd_step",
            format!("param {:?} vs grad {:?}", param.shape(), grad.shape()),
        ));
    }
    grad.check_finite("sgd_step")?;
    let lr = S::from_f64(lr);
    for (p, &g) in param.data_mut().iter_mut().zip(grad.data()) {
        *p -= lr * g;
    }
    Ok(())
}

// ── Adagrad ──────────────────────────────────────────────────────────

/// Per-parameter squared-gradient accumulators.
#[derive(Debug, Clone)]
pub struct AdagradState<S: Scalar> {
    accum: Vec<Tensor<S>>,
    pub lr: f64,
    pub epsilon: f64,
}

impl<S: Scalar> AdagradState<S> {
    pub fn new(shapes: &[&[usize]], lr: f64, epsilon: f64) -> Self {
        AdagradState {
            accum: shapes.iter().map(|s| Tensor::zeros(s)).collect(),
            lr,
            epsilon,
        }
    }

    pub fn accumulator(&self, idx: usize) -> &Tensor<S> {
        &self.accum[idx]
    }

    /// acc ← acc + g²; p ← p − lr·g/√(acc+ε).
    pub fn step(&mut self, idx: usize, param: &mut Tensor<S>, grad: &Tensor<S>) -> Result<()> {
        if param.shape() != grad.shape() || self.accum[idx].shape() != grad.shape() {
            return Err(Error::shape(
                "adagrad_step",
                format!("param {:?} vs grad {:?}", param.shape(), grad.shape()),
            ));
        }
        grad.check_finite("adagrad_step")?;
        let lr = S::from_f64(self.lr);
        let eps = S::from_f64(self.epsilon);
        let acc = self.accum[idx].data_mut();
        for ((p, &g), a) in param.data_mut().iter_mut().zip(grad.data()).zip(acc) {
            *a += g * g;
            *p -= lr * g / (*a + eps).sqrt();
        }
        Ok(())
    }
}
