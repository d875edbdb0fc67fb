//! Wengert tape. A forward pass records one node per primitive operation;
//! `backward` replays the records in reverse exactly once and accumulates
//! gradients into every node that can reach a trainable leaf.

use super::ops::{self, Activation, LossKind};
use super::scalar::Scalar;
use super::tensor::Tensor;
use crate::error::{Error, Result};

/// Handle to a value on the tape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Var(usize);

enum Op<S: Scalar> {
    Leaf,
    Affine { x: Var, w: Var, b: Var },
    Conv1d { seq: Var, kernels: Var, bias: Var },
    Conv2dSame { img: Var, kernels: Var, bias: Var },
    GlobalMaxPool { seq: Var, argmax: Vec<usize> },
    Activation { x: Var, kind: Activation },
    Add { a: Var, b: Var },
    Sub { a: Var, b: Var },
    MulElem { a: Var, b: Var },
    /// y = mul·x + add, elementwise.
    AffineScalar { x: Var, mul: S },
    SumAll { x: Var },
    Reshape { x: Var, from: Vec<usize> },
    SquaredLoss { pred: Var, target: Tensor<S> },
    SigmoidXent { pred: Var, target: Tensor<S> },
    /// Binary cross-entropy where the target itself is optimized.
    SigmoidXentVarTarget { pred: Var, target: Var },
    SoftmaxXent { pred: Var, target: Tensor<S>, softmax: Tensor<S> },
    /// Slot-wise variants: one loss value per leading-dim slot.
    SquaredRows { pred: Var, target: Tensor<S> },
    SigmoidXentRows { pred: Var, target: Var },
    /// Pick index i along axis 1: [a, b, rest] -> [a, rest].
    IndexAxis1 { x: Var, i: usize },
    /// Per-slot 2-D convolution (same padding), kernels differ per slot.
    Conv2dGrouped { imgs: Var, kernels: Var, bias: Var },
}

struct Node<S: Scalar> {
    value: Tensor<S>,
    op: Op<S>,
    /// True if this node depends on a trainable leaf.
    requires: bool,
}

pub struct Tape<S: Scalar> {
    nodes: Vec<Node<S>>,
}

/// Gradients from one reverse sweep, keyed by tape variable.
pub struct Gradients<S: Scalar> {
    grads: Vec<Option<Tensor<S>>>,
    /// Number of records processed by the sweep (each exactly once).
    pub records_visited: usize,
}

impl<S: Scalar> Gradients<S> {
    /// Gradient for a variable; detached parameters yield zeros.
    pub fn take(&mut self, v: Var, shape: &[usize]) -> Tensor<S> {
        self.grads[v.0].take().unwrap_or_else(|| Tensor::zeros(shape))
    }

    pub fn get(&self, v: Var) -> Option<&Tensor<S>> {
        self.grads[v.0].as_ref()
    }
}

impl<S: Scalar> Default for Tape<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> Tape<S> {
    pub fn new() -> Self {
        Tape { nodes: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn value(&self, v: Var) -> &Tensor<S> {
        &self.nodes[v.0].value
    }

    fn push(&mut self, value: Tensor<S>, op: Op<S>, requires: bool) -> Var {
        self.nodes.push(Node { value, op, requires });
        Var(self.nodes.len() - 1)
    }

    fn requires(&self, v: Var) -> bool {
        self.nodes[v.0].requires
    }

    /// Trainable input: receives a gradient.
    pub fn leaf(&mut self, value: Tensor<S>) -> Var {
        self.push(value, Op::Leaf, true)
    }

    /// Non-trainable input: no gradient is accumulated for it.
    pub fn constant(&mut self, value: Tensor<S>) -> Var {
        self.push(value, Op::Leaf, false)
    }

    pub fn affine(&mut self, x: Var, w: Var, b: Var) -> Result<Var> {
        let y = ops::affine(self.value(x), self.value(w), self.value(b))?;
        y.check_finite("affine")?;
        let req = self.requires(x) || self.requires(w) || self.requires(b);
        Ok(self.push(y, Op::Affine { x, w, b }, req))
    }

    pub fn conv1d(&mut self, seq: Var, kernels: Var, bias: Var) -> Result<Var> {
        let y = ops::conv1d(self.value(seq), self.value(kernels), self.value(bias))?;
        y.check_finite("conv1d")?;
        let req = self.requires(seq) || self.requires(kernels) || self.requires(bias);
        Ok(self.push(y, Op::Conv1d { seq, kernels, bias }, req))
    }

    pub fn conv2d_same(&mut self, img: Var, kernels: Var, bias: Var) -> Result<Var> {
        let y = ops::conv2d_same(self.value(img), self.value(kernels), self.value(bias))?;
        y.check_finite("conv2d")?;
        let req = self.requires(img) || self.requires(kernels) || self.requires(bias);
        Ok(self.push(y, Op::Conv2dSame { img, kernels, bias }, req))
    }

    pub fn global_max_pool(&mut self, seq: Var) -> Result<Var> {
        let (y, argmax) = ops::global_max_pool(self.value(seq))?;
        let req = self.requires(seq);
        Ok(self.push(y, Op::GlobalMaxPool { seq, argmax }, req))
    }

    pub fn activation(&mut self, x: Var, kind: Activation) -> Var {
        let y = ops::activation(self.value(x), kind);
        let req = self.requires(x);
        self.push(y, Op::Activation { x, kind }, req)
    }

    pub fn add(&mut self, a: Var, b: Var) -> Result<Var> {
        let y = self.value(a).zip(self.value(b), "add", |x, z| x + z)?;
        y.check_finite("add")?;
        let req = self.requires(a) || self.requires(b);
        Ok(self.push(y, Op::Add { a, b }, req))
    }

    pub fn sub(&mut self, a: Var, b: Var) -> Result<Var> {
        let y = self.value(a).zip(self.value(b), "sub", |x, z| x - z)?;
        y.check_finite("sub")?;
        let req = self.requires(a) || self.requires(b);
        Ok(self.push(y, Op::Sub { a, b }, req))
    }

    pub fn mul_elem(&mut self, a: Var, b: Var) -> Result<Var> {
        let y = self.value(a).zip(self.value(b), "mul_elem", |x, z| x * z)?;
        y.check_finite("mul_elem")?;
        let req = self.requires(a) || self.requires(b);
        Ok(self.push(y, Op::MulElem { a, b }, req))
    }

    pub fn affine_scalar(&mut self, x: Var, mul: S, add: S) -> Result<Var> {
        let y = self.value(x).map(|v| mul * v + add);
        y.check_finite("affine_scalar")?;
        let req = self.requires(x);
        Ok(self.push(y, Op::AffineScalar { x, mul }, req))
    }

    pub fn sum_all(&mut self, x: Var) -> Result<Var> {
        let s: S = self.value(x).data().iter().copied().sum();
        let y = Tensor::scalar(s);
        y.check_finite("sum_all")?;
        let req = self.requires(x);
        Ok(self.push(y, Op::SumAll { x }, req))
    }

    pub fn reshape(&mut self, x: Var, shape: &[usize]) -> Result<Var> {
        let from = self.value(x).shape().to_vec();
        let y = self.value(x).clone().reshaped(shape)?;
        let req = self.requires(x);
        Ok(self.push(y, Op::Reshape { x, from }, req))
    }

    /// Scalar loss against a fixed target.
    pub fn loss(&mut self, kind: LossKind, pred: Var, target: &Tensor<S>) -> Result<Var> {
        let req = self.requires(pred);
        match kind {
            LossKind::Squared => {
                let l = ops::squared_loss(self.value(pred), target)?;
                let y = Tensor::scalar(l);
                y.check_finite("squared_loss")?;
                Ok(self.push(y, Op::SquaredLoss { pred, target: target.clone() }, req))
            }
            LossKind::SigmoidXent => {
                let l = ops::sigmoid_xent_loss(self.value(pred), target)?;
                let y = Tensor::scalar(l);
                y.check_finite("sigmoid_xent")?;
                Ok(self.push(y, Op::SigmoidXent { pred, target: target.clone() }, req))
            }
            LossKind::SoftmaxXent => {
                let (l, sm) = ops::softmax_xent_loss(self.value(pred), target)?;
                let y = Tensor::scalar(l);
                y.check_finite("softmax_xent")?;
                Ok(self.push(y, Op::SoftmaxXent { pred, target: target.clone(), softmax: sm }, req))
            }
        }
    }

    /// Binary cross-entropy whose target is itself a tape variable, so the
    /// gradient flows into both logits and target.
    pub fn sigmoid_xent_var_target(&mut self, pred: Var, target: Var) -> Result<Var> {
        let l = ops::sigmoid_xent_loss(self.value(pred), self.value(target))?;
        let y = Tensor::scalar(l);
        y.check_finite("sigmoid_xent")?;
        let req = self.requires(pred) || self.requires(target);
        Ok(self.push(y, Op::SigmoidXentVarTarget { pred, target }, req))
    }

    /// Squared loss summed per leading-dim slot: [n, rest…] -> [n].
    pub fn squared_rows(&mut self, pred: Var, target: &Tensor<S>) -> Result<Var> {
        let y = ops::squared_loss_rows(self.value(pred), target)?;
        y.check_finite("squared_rows")?;
        let req = self.requires(pred);
        Ok(self.push(y, Op::SquaredRows { pred, target: target.clone() }, req))
    }

    /// Per-slot binary cross-entropy with a variable target.
    pub fn sigmoid_xent_rows_var(&mut self, pred: Var, target: Var) -> Result<Var> {
        let y = ops::sigmoid_xent_rows(self.value(pred), self.value(target))?;
        y.check_finite("sigmoid_xent_rows")?;
        let req = self.requires(pred) || self.requires(target);
        Ok(self.push(y, Op::SigmoidXentRows { pred, target }, req))
    }

    /// Pick index i along axis 1: [a, b, rest…] -> [a, rest…].
    pub fn index_axis1(&mut self, x: Var, i: usize) -> Result<Var> {
        let shape = self.value(x).shape().to_vec();
        if shape.len() < 2 || i >= shape[1] {
            return Err(Error::shape(
                "index_axis1",
                format!("index {} into shape {:?}", i, shape),
            ));
        }
        let (a, b) = (shape[0], shape[1]);
        let inner: usize = shape[2..].iter().product();
        let mut out_shape = vec![a];
        out_shape.extend_from_slice(&shape[2..]);
        let mut data = vec![S::zero(); a * inner];
        let src = self.value(x).data();
        for s in 0..a {
            let from = (s * b + i) * inner;
            data[s * inner..(s + 1) * inner].copy_from_slice(&src[from..from + inner]);
        }
        let y = Tensor::from_vec(&out_shape, data)?;
        let req = self.requires(x);
        Ok(self.push(y, Op::IndexAxis1 { x, i }, req))
    }

    /// Per-slot 2-D convolution with same padding and per-slot kernels.
    pub fn conv2d_grouped(&mut self, imgs: Var, kernels: Var, bias: Var) -> Result<Var> {
        let y = ops::conv2d_grouped(self.value(imgs), self.value(kernels), self.value(bias))?;
        y.check_finite("conv2d_grouped")?;
        let req = self.requires(imgs) || self.requires(kernels) || self.requires(bias);
        Ok(self.push(y, Op::Conv2dGrouped { imgs, kernels, bias }, req))
    }

    /// Reverse sweep from a scalar loss. Consumes no nodes; may be called
    /// once per tape.
    pub fn backward(&self, loss: Var) -> Result<Gradients<S>> {
        if !self.nodes[loss.0].value.is_scalar() {
            return Err(Error::invalid(
                "backward",
                format!("loss must be scalar, got shape {:?}", self.nodes[loss.0].value.shape()),
            ));
        }
        let mut grads: Vec<Option<Tensor<S>>> = (0..self.nodes.len()).map(|_| None).collect();
        grads[loss.0] = Some(Tensor::scalar(S::one()));
        let mut visited = 0usize;

        for i in (0..self.nodes.len()).rev() {
            visited += 1;
            let Some(g) = grads[i].take() else { continue };
            if !self.nodes[i].requires {
                continue;
            }
            match &self.nodes[i].op {
                Op::Leaf => {
                    grads[i] = Some(g);
                    continue;
                }
                Op::Affine { x, w, b } => {
                    let (dx, dw, db) =
                        ops::affine_backward(self.value(*x), self.value(*w), &g);
                    self.acc(&mut grads, *x, dx);
                    self.acc(&mut grads, *w, dw);
                    self.acc(&mut grads, *b, db);
                }
                Op::Conv1d { seq, kernels, bias } => {
                    let (ds, dk, db) =
                        ops::conv1d_backward(self.value(*seq), self.value(*kernels), &g);
                    self.acc(&mut grads, *seq, ds);
                    self.acc(&mut grads, *kernels, dk);
                    self.acc(&mut grads, *bias, db);
                }
                Op::Conv2dSame { img, kernels, bias } => {
                    let (di, dk, db) =
                        ops::conv2d_same_backward(self.value(*img), self.value(*kernels), &g);
                    self.acc(&mut grads, *img, di);
                    self.acc(&mut grads, *kernels, dk);
                    self.acc(&mut grads, *bias, db);
                }
                Op::GlobalMaxPool { seq, argmax } => {
                    let mut ds = Tensor::zeros(self.value(*seq).shape());
                    let (time, ch) = match self.value(*seq).shape() {
                        [t, c] => (*t, *c),
                        [_, t, c] => (*t, *c),
                        _ => unreachable!(),
                    };
                    for (flat, &t_best) in argmax.iter().enumerate() {
                        let (bi, c) = (flat / ch, flat % ch);
                        let idx = bi * (time * ch) + t_best * ch + c;
                        ds.data_mut()[idx] += g.data()[flat];
                    }
                    self.acc(&mut grads, *seq, ds);
                }
                Op::Activation { x, kind } => {
                    let dx = ops::activation_backward(
                        self.value(*x),
                        &self.nodes[i].value,
                        &g,
                        *kind,
                    );
                    self.acc(&mut grads, *x, dx);
                }
                Op::Add { a, b } => {
                    self.acc(&mut grads, *a, g.clone());
                    self.acc(&mut grads, *b, g);
                }
                Op::Sub { a, b } => {
                    self.acc(&mut grads, *a, g.clone());
                    self.acc(&mut grads, *b, g.map(|v| -v));
                }
                Op::MulElem { a, b } => {
                    let da = g.zip(self.value(*b), "mul_bwd", |gv, bv| gv * bv).unwrap();
                    let db = g.zip(self.value(*a), "mul_bwd", |gv, av| gv * av).unwrap();
                    self.acc(&mut grads, *a, da);
                    self.acc(&mut grads, *b, db);
                }
                Op::AffineScalar { x, mul } => {
                    let m = *mul;
                    self.acc(&mut grads, *x, g.map(|v| v * m));
                }
                Op::SumAll { x } => {
                    let dx = Tensor::filled(self.value(*x).shape(), g.item());
                    self.acc(&mut grads, *x, dx);
                }
                Op::Reshape { x, from } => {
                    let dx = g.clone().reshaped(from).unwrap();
                    self.acc(&mut grads, *x, dx);
                }
                Op::SquaredLoss { pred, target } => {
                    let gs = g.item();
                    let two = S::from_f64(2.0);
                    let dp = self
                        .value(*pred)
                        .zip(target, "sq_bwd", |p, t| two * (p - t) * gs)
                        .unwrap();
                    self.acc(&mut grads, *pred, dp);
                }
                Op::SigmoidXent { pred, target } => {
                    let gs = g.item();
                    let dp = self
                        .value(*pred)
                        .zip(target, "bce_bwd", |z, t| (ops::sigmoid(z) - t) * gs)
                        .unwrap();
                    self.acc(&mut grads, *pred, dp);
                }
                Op::SigmoidXentVarTarget { pred, target } => {
                    let gs = g.item();
                    let dp = self
                        .value(*pred)
                        .zip(self.value(*target), "bce_bwd", |z, t| (ops::sigmoid(z) - t) * gs)
                        .unwrap();
                    // d/dt of −[t·ln σ(z) + (1−t)·ln(1−σ(z))] = −z
                    let dt = self.value(*pred).map(|z| -z * gs);
                    self.acc(&mut grads, *pred, dp);
                    self.acc(&mut grads, *target, dt);
                }
                Op::SoftmaxXent { pred, target, softmax } => {
                    let gs = g.item();
                    let dp = softmax.zip(target, "smx_bwd", |q, t| (q - t) * gs).unwrap();
                    self.acc(&mut grads, *pred, dp);
                }
                Op::SquaredRows { pred, target } => {
                    let pv = self.value(*pred);
                    let per = pv.numel() / pv.shape()[0];
                    let two = S::from_f64(2.0);
                    let mut dp = Tensor::zeros(pv.shape());
                    for (s, (row_p, row_t)) in pv
                        .data()
                        .chunks_exact(per)
                        .zip(target.data().chunks_exact(per))
                        .enumerate()
                    {
                        let gs = g.data()[s];
                        let dst = &mut dp.data_mut()[s * per..(s + 1) * per];
                        for ((d, &p), &t) in dst.iter_mut().zip(row_p).zip(row_t) {
                            *d = two * (p - t) * gs;
                        }
                    }
                    self.acc(&mut grads, *pred, dp);
                }
                Op::SigmoidXentRows { pred, target } => {
                    let pv = self.value(*pred);
                    let tv = self.value(*target);
                    let per = pv.numel() / pv.shape()[0];
                    let mut dp = Tensor::zeros(pv.shape());
                    let mut dt = Tensor::zeros(tv.shape());
                    for s in 0..pv.shape()[0] {
                        let gs = g.data()[s];
                        let zp = &pv.data()[s * per..(s + 1) * per];
                        let tp = &tv.data()[s * per..(s + 1) * per];
                        let ddp = &mut dp.data_mut()[s * per..(s + 1) * per];
                        let ddt = &mut dt.data_mut()[s * per..(s + 1) * per];
                        for i in 0..per {
                            ddp[i] = (ops::sigmoid(zp[i]) - tp[i]) * gs;
                            ddt[i] = -zp[i] * gs;
                        }
                    }
                    self.acc(&mut grads, *pred, dp);
                    self.acc(&mut grads, *target, dt);
                }
                Op::IndexAxis1 { x, i: idx } => {
                    let shape = self.value(*x).shape();
                    let (b, inner): (usize, usize) =
                        (shape[1], shape[2..].iter().product());
                    let mut dx = Tensor::zeros(shape);
                    for s in 0..shape[0] {
                        let dst = (s * b + idx) * inner;
                        dx.data_mut()[dst..dst + inner]
                            .copy_from_slice(&g.data()[s * inner..(s + 1) * inner]);
                    }
                    self.acc(&mut grads, *x, dx);
                }
                Op::Conv2dGrouped { imgs, kernels, bias } => {
                    let (di, dk, db) =
                        ops::conv2d_grouped_backward(self.value(*imgs), self.value(*kernels), &g);
                    self.acc(&mut grads, *imgs, di);
                    self.acc(&mut grads, *kernels, dk);
                    self.acc(&mut grads, *bias, db);
                }
            }
        }

        Ok(Gradients { grads, records_visited: visited })
    }

    fn acc(&self, grads: &mut [Option<Tensor<S>>], v: Var, delta: Tensor<S>) {
        if !self.nodes[v.0].requires {
            return;
        }
        match &mut grads[v.0] {
            Some(t) => t.add_assign(&delta),
            slot @ None => *slot = Some(delta),
        }
    }
}
