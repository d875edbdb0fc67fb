//! GAN training of the distribution-matching constraint dist F(x) = dist y:
//! a dense classifier maps windows of consecutive digit images to prediction
//! vectors, a 1-D convolutional discriminator tries to tell those windows
//! from one-hot label windows, and a small supervised squared loss on k
//! labelled digits anchors the channel assignment.

use crate::data::labelfile::{ImageSequence, LabelFile};
use crate::data::mnist::{MnistSet, IMAGE_PIXELS};
use crate::error::{Error, Result};
use crate::optim::{sgd_step, LrSchedule};
use crate::tensor::ops;
use crate::tensor::{tensor_new, Activation, InitSpec, LossKind, Scalar, Tape, Tensor, Var};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const DIGITS: usize = 10;

// ── classifier ───────────────────────────────────────────────────────

/// Dense relu net with an identity output layer (784-300-300-10).
#[derive(Debug, Clone)]
pub struct Classifier<S: Scalar> {
    layers: Vec<(Tensor<S>, Tensor<S>)>,
}

impl<S: Scalar> Classifier<S> {
    pub fn init(widths: &[usize], init_scale: f64, rng: &mut ChaCha8Rng) -> Result<Self> {
        if widths.len() < 2 {
            return Err(Error::invalid("classifier", "need at least two widths"));
        }
        let gauss = InitSpec::gaussian_scaled(init_scale);
        let mut layers = Vec::new();
        for pair in widths.windows(2) {
            let w = tensor_new(&[pair[1], pair[0]], &gauss, rng)?;
            layers.push((w, Tensor::zeros(&[pair[1]])));
        }
        Ok(Classifier { layers })
    }

    pub fn layer_shapes(&self) -> Vec<Vec<usize>> {
        self.layers.iter().map(|(w, _)| w.shape().to_vec()).collect()
    }

    /// Pure forward (no gradients): [n,784] -> [n,10].
    pub fn forward(&self, images: &Tensor<S>) -> Result<Tensor<S>> {
        let mut h = images.clone();
        let last = self.layers.len() - 1;
        for (i, (w, b)) in self.layers.iter().enumerate() {
            h = ops::affine(&h, w, b)?;
            if i < last {
                h = ops::activation(&h, Activation::Relu);
            }
        }
        Ok(h)
    }

    /// Taped forward for steps that train the classifier.
    fn forward_on(&self, tape: &mut Tape<S>, images: Var, params: &[(Var, Var)]) -> Result<Var> {
        let mut h = images;
        let last = params.len() - 1;
        for (i, &(w, b)) in params.iter().enumerate() {
            h = tape.affine(h, w, b)?;
            if i < last {
                h = tape.activation(h, Activation::Relu);
            }
        }
        Ok(h)
    }

    fn place(&self, tape: &mut Tape<S>, trainable: bool) -> Vec<(Var, Var)> {
        self.layers
            .iter()
            .map(|(w, b)| {
                if trainable {
                    (tape.leaf(w.clone()), tape.leaf(b.clone()))
                } else {
                    (tape.constant(w.clone()), tape.constant(b.clone()))
                }
            })
            .collect()
    }

    fn apply_grads(
        &mut self,
        grads: &mut crate::tensor::Gradients<S>,
        vars: &[(Var, Var)],
        lr: f64,
    ) -> Result<()> {
        for ((w, b), &(wv, bv)) in self.layers.iter_mut().zip(vars) {
            sgd_step(w, &grads.take(wv, w.shape()), lr)?;
            sgd_step(b, &grads.take(bv, b.shape()), lr)?;
        }
        Ok(())
    }

    pub fn named_params(&self) -> Vec<(String, &Tensor<S>)> {
        let mut out = Vec::new();
        for (i, (w, b)) in self.layers.iter().enumerate() {
            out.push((format!("f_w{}", i), w));
            out.push((format!("f_b{}", i), b));
        }
        out
    }

    pub fn load_params(&mut self, params: &[(String, Tensor<S>)]) -> Result<()> {
        for (name, value) in params {
            let (kind, idx) = name
                .strip_prefix("f_")
                .and_then(|rest| {
                    let (k, i) = rest.split_at(1);
                    i.parse::<usize>().ok().map(|i| (k.to_string(), i))
                })
                .ok_or_else(|| Error::Checkpoint(format!("unknown parameter '{}'", name)))?;
            if idx >= self.layers.len() {
                return Err(Error::Checkpoint(format!("layer index out of range in '{}'", name)));
            }
            let slot = match kind.as_str() {
                "w" => &mut self.layers[idx].0,
                "b" => &mut self.layers[idx].1,
                _ => return Err(Error::Checkpoint(format!("unknown parameter '{}'", name))),
            };
            if slot.shape() != value.shape() {
                return Err(Error::Checkpoint(format!("shape mismatch for '{}'", name)));
            }
            *slot = value.clone();
        }
        Ok(())
    }

    /// Direct mutable access for supervised pretraining paths.
    pub fn layers_mut(&mut self) -> &mut Vec<(Tensor<S>, Tensor<S>)> {
        &mut self.layers
    }
}

/// Argmax digit for one image.
pub fn classify<S: Scalar>(f: &Classifier<S>, image: &[f32]) -> Result<u8> {
    let input = Tensor::from_vec(
        &[1, IMAGE_PIXELS],
        image.iter().map(|&p| S::from_f64(p as f64)).collect(),
    )?;
    let out = f.forward(&input)?;
    Ok(argmax(out.data()) as u8)
}

pub(crate) fn argmax<S: Scalar>(row: &[S]) -> usize {
    let mut best = 0;
    for (i, &v) in row.iter().enumerate() {
        if v > row[best] {
            best = i;
        }
    }
    best
}

/// Fraction misclassified on a held-out set.
pub fn eval_error<S: Scalar>(f: &Classifier<S>, set: &MnistSet) -> Result<f64> {
    let n = set.len();
    let mut data = Vec::with_capacity(n * IMAGE_PIXELS);
    for i in 0..n {
        data.extend(set.image(i).iter().map(|&p| S::from_f64(p as f64)));
    }
    let out = f.forward(&Tensor::from_vec(&[n, IMAGE_PIXELS], data)?)?;
    let mut wrong = 0usize;
    for (i, row) in out.data().chunks_exact(DIGITS).enumerate() {
        if argmax(row) != set.label(i) as usize {
            wrong += 1;
        }
    }
    Ok(wrong as f64 / n as f64)
}

// ── discriminator ────────────────────────────────────────────────────

/// 1-D conv stack over prediction windows, global max pool over time, then
/// dense layers down to a single score used as a logit.
#[derive(Debug, Clone)]
pub struct Discriminator<S: Scalar> {
    convs: Vec<(Tensor<S>, Tensor<S>)>,
    dense: Vec<(Tensor<S>, Tensor<S>)>,
}

impl<S: Scalar> Discriminator<S> {
    /// `conv_channels` is the channel progression starting at the input,
    /// e.g. [10, 200, 200, 200] for three width-7 conv layers.
    pub fn init(
        conv_channels: &[usize],
        kernel_width: usize,
        dense_widths: &[usize],
        init_scale: f64,
        rng: &mut ChaCha8Rng,
    ) -> Result<Self> {
        let gauss = InitSpec::gaussian_scaled(init_scale);
        let mut convs = Vec::new();
        for pair in conv_channels.windows(2) {
            // Kernels are drawn as (width·in, out) matrices so the scaled
            // init sees the same rows+cols a dense layer would.
            let flat = tensor_new(&[kernel_width * pair[0], pair[1]], &gauss, rng)?;
            let k = flat.reshaped(&[kernel_width, pair[0], pair[1]])?;
            convs.push((k, Tensor::zeros(&[pair[1]])));
        }
        let mut dense = Vec::new();
        for pair in dense_widths.windows(2) {
            let w = tensor_new(&[pair[1], pair[0]], &gauss, rng)?;
            dense.push((w, Tensor::zeros(&[pair[1]])));
        }
        Ok(Discriminator { convs, dense })
    }

    pub fn conv_shapes(&self) -> Vec<Vec<usize>> {
        self.convs.iter().map(|(k, _)| k.shape().to_vec()).collect()
    }

    pub fn receptive_field(&self) -> usize {
        let width = self.convs[0].0.shape()[0];
        self.convs.len() * (width - 1) + 1
    }

    fn forward_on(
        &self,
        tape: &mut Tape<S>,
        windows: Var,
        params: &DiscriminatorVars,
    ) -> Result<Var> {
        let mut h = windows;
        for &(k, b) in &params.convs {
            h = tape.conv1d(h, k, b)?;
            h = tape.activation(h, Activation::Relu);
        }
        h = tape.global_max_pool(h)?;
        let last = params.dense.len() - 1;
        for (i, &(w, b)) in params.dense.iter().enumerate() {
            h = tape.affine(h, w, b)?;
            if i < last {
                h = tape.activation(h, Activation::Relu);
            }
        }
        Ok(h)
    }

    fn place(&self, tape: &mut Tape<S>, trainable: bool) -> DiscriminatorVars {
        let mut put = |t: &Tensor<S>| {
            if trainable {
                tape.leaf(t.clone())
            } else {
                tape.constant(t.clone())
            }
        };
        DiscriminatorVars {
            convs: self.convs.iter().map(|(k, b)| (put(k), put(b))).collect(),
            dense: self.dense.iter().map(|(w, b)| (put(w), put(b))).collect(),
        }
    }

    fn apply_grads(
        &mut self,
        grads: &mut crate::tensor::Gradients<S>,
        vars: &DiscriminatorVars,
        lr: f64,
    ) -> Result<()> {
        for ((k, b), &(kv, bv)) in self.convs.iter_mut().zip(&vars.convs) {
            sgd_step(k, &grads.take(kv, k.shape()), lr)?;
            sgd_step(b, &grads.take(bv, b.shape()), lr)?;
        }
        for ((w, b), &(wv, bv)) in self.dense.iter_mut().zip(&vars.dense) {
            sgd_step(w, &grads.take(wv, w.shape()), lr)?;
            sgd_step(b, &grads.take(bv, b.shape()), lr)?;
        }
        Ok(())
    }

    pub fn named_params(&self) -> Vec<(String, &Tensor<S>)> {
        let mut out = Vec::new();
        for (i, (k, b)) in self.convs.iter().enumerate() {
            out.push((format!("d_conv{}_k", i), k));
            out.push((format!("d_conv{}_b", i), b));
        }
        for (i, (w, b)) in self.dense.iter().enumerate() {
            out.push((format!("d_dense{}_w", i), w));
            out.push((format!("d_dense{}_b", i), b));
        }
        out
    }
}

struct DiscriminatorVars {
    convs: Vec<(Var, Var)>,
    dense: Vec<(Var, Var)>,
}

// ── configuration and data ───────────────────────────────────────────

#[derive(Debug, Clone)]
pub struct GanOdmConfig {
    pub classifier_widths: Vec<usize>,
    pub conv_channels: Vec<usize>,
    pub kernel_width: usize,
    pub dense_widths: Vec<usize>,
    pub batch: usize,
    pub window: usize,
    pub updates: u64,
    pub generator_schedule: LrSchedule,
    pub discriminator_lr: f64,
    pub supervised_lr: f64,
    pub labelled: usize,
    pub generator_init: f64,
    pub discriminator_init: f64,
    pub eval_every: u64,
    pub seed: u64,
}

impl GanOdmConfig {
    /// The quoted hyperparameter setting: batch 200, 6000 updates, the
    /// three-phase generator schedule, and 0.005/batch for discriminator
    /// and supervised rates (all rates per summed loss).
    pub fn paper_default(window: usize, conv_layers: usize, labelled: usize, seed: u64) -> Self {
        let batch = 200usize;
        let mut conv_channels = vec![DIGITS];
        conv_channels.extend(std::iter::repeat(200).take(conv_layers));
        GanOdmConfig {
            classifier_widths: vec![IMAGE_PIXELS, 300, 300, DIGITS],
            conv_channels,
            kernel_width: 7,
            dense_widths: vec![200, 200, 1],
            batch,
            window,
            updates: 6000,
            generator_schedule: LrSchedule::parse("0.1:2000,0.03:2000,0.01:2000", batch as f64)
                .unwrap(),
            discriminator_lr: 0.005 / batch as f64,
            supervised_lr: 0.005 / batch as f64,
            labelled,
            generator_init: 1.4,
            discriminator_init: 1.0,
            eval_every: 200,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let receptive = self.conv_channels.len().saturating_sub(1) * (self.kernel_width - 1) + 1;
        if self.window < receptive {
            return Err(Error::invalid(
                "ganodm_config",
                format!("window {} below discriminator receptive field {}", self.window, receptive),
            ));
        }
        if self.batch == 0 {
            return Err(Error::invalid("ganodm_config", "batch must be positive"));
        }
        if self.discriminator_lr <= 0.0 || self.supervised_lr < 0.0 {
            return Err(Error::invalid("ganodm_config", "learning rates must be positive"));
        }
        Ok(())
    }
}

/// The OCR task data the GAN trains against.
pub struct OcrTask {
    pub train: MnistSet,
    pub test: MnistSet,
    pub label_file: LabelFile,
    pub image_seq: ImageSequence,
}

/// One batch of aligned-length windows: real one-hot label windows and
/// fake image windows, drawn independently of each other.
pub struct WindowBatch<S: Scalar> {
    /// [batch, window, 10] one-hot rows.
    pub real: Tensor<S>,
    /// [batch·window, 784] images, window-contiguous.
    pub fake_images: Tensor<S>,
}

pub fn sample_windows<S: Scalar, R: Rng + ?Sized>(
    task: &OcrTask,
    batch: usize,
    window: usize,
    rng: &mut R,
) -> Result<WindowBatch<S>> {
    let digits = &task.label_file.digits;
    let seq = &task.image_seq.indices;
    if digits.len() < window || seq.len() < window {
        return Err(Error::invalid("sample_windows", "sequences shorter than the window"));
    }
    let real_starts = digits.len() - window + 1;
    let fake_starts = seq.len() - window + 1;

    let mut real = vec![S::zero(); batch * window * DIGITS];
    for b in 0..batch {
        let s = rng.random_range(0..real_starts);
        for (t, &d) in digits[s..s + window].iter().enumerate() {
            real[(b * window + t) * DIGITS + d as usize] = S::one();
        }
    }
    let mut fake = vec![S::zero(); batch * window * IMAGE_PIXELS];
    for b in 0..batch {
        let s = rng.random_range(0..fake_starts);
        for (t, &idx) in seq[s..s + window].iter().enumerate() {
            let img = task.train.image(idx as usize);
            let dst = (b * window + t) * IMAGE_PIXELS;
            for (o, &p) in fake[dst..dst + IMAGE_PIXELS].iter_mut().zip(img) {
                *o = S::from_f64(p as f64);
            }
        }
    }
    Ok(WindowBatch {
        real: Tensor::from_vec(&[batch, window, DIGITS], real)?,
        fake_images: Tensor::from_vec(&[batch * window, IMAGE_PIXELS], fake)?,
    })
}

// ── training steps ───────────────────────────────────────────────────

/// Logistic discriminator update on a frozen classifier:
/// minimize −log σ(D(real)) − log(1 − σ(D(F(fake)))).
pub fn discriminator_step<S: Scalar>(
    d: &mut Discriminator<S>,
    f: &Classifier<S>,
    batch: &WindowBatch<S>,
    lr: f64,
) -> Result<f64> {
    let (n, window) = (batch.real.shape()[0], batch.real.shape()[1]);
    // F is frozen here: plain forward, the result enters the tape as data.
    let fake_pred = f.forward(&batch.fake_images)?.reshaped(&[n, window, DIGITS])?;

    let mut tape = Tape::new();
    let vars = d.place(&mut tape, true);
    let real = tape.constant(batch.real.clone());
    let fake = tape.constant(fake_pred);
    let score_real = d.forward_on(&mut tape, real, &vars)?;
    let score_fake = d.forward_on(&mut tape, fake, &vars)?;
    let ones = Tensor::filled(&[n, 1], S::one());
    let zeros = Tensor::zeros(&[n, 1]);
    let loss_real = tape.loss(LossKind::SigmoidXent, score_real, &ones)?;
    let loss_fake = tape.loss(LossKind::SigmoidXent, score_fake, &zeros)?;
    let loss = tape.add(loss_real, loss_fake)?;
    let value = tape.value(loss).item().as_f64();

    let mut grads = tape.backward(loss)?;
    d.apply_grads(&mut grads, &vars, lr)?;
    Ok(value / n as f64)
}

/// Non-saturating generator update on a frozen discriminator:
/// minimize −log σ(D(F(fake))).
pub fn generator_step<S: Scalar>(
    f: &mut Classifier<S>,
    d: &Discriminator<S>,
    batch: &WindowBatch<S>,
    lr: f64,
) -> Result<f64> {
    let (n, window) = (batch.real.shape()[0], batch.real.shape()[1]);
    let mut tape = Tape::new();
    let f_vars = f.place(&mut tape, true);
    let d_vars = d.place(&mut tape, false);
    let images = tape.constant(batch.fake_images.clone());
    let pred = f.forward_on(&mut tape, images, &f_vars)?;
    let windows = tape.reshape(pred, &[n, window, DIGITS])?;
    let score = d.forward_on(&mut tape, windows, &d_vars)?;
    let ones = Tensor::filled(&[n, 1], S::one());
    let loss = tape.loss(LossKind::SigmoidXent, score, &ones)?;
    let value = tape.value(loss).item().as_f64();

    let mut grads = tape.backward(loss)?;
    f.apply_grads(&mut grads, &f_vars, lr)?;
    Ok(value / n as f64)
}

/// Squared loss between F(image) and the one-hot target over the k
/// labelled examples. No-op when k = 0.
pub fn supervised_step<S: Scalar>(
    f: &mut Classifier<S>,
    images: &Tensor<S>,
    targets: &Tensor<S>,
    lr: f64,
) -> Result<Option<f64>> {
    if images.shape()[0] == 0 {
        return Ok(None);
    }
    let mut tape = Tape::new();
    let vars = f.place(&mut tape, true);
    let x = tape.constant(images.clone());
    let pred = f.forward_on(&mut tape, x, &vars)?;
    let loss = tape.loss(LossKind::Squared, pred, targets)?;
    let value = tape.value(loss).item().as_f64();
    let mut grads = tape.backward(loss)?;
    f.apply_grads(&mut grads, &vars, lr)?;
    Ok(Some(value))
}

// ── full training loop ───────────────────────────────────────────────

#[derive(Debug, Clone)]
pub struct GanMetricsRow {
    pub update: u64,
    pub d_loss: f64,
    pub g_loss: f64,
    pub s_loss: f64,
    pub test_error: f64,
}

pub struct GanRun<S: Scalar> {
    pub classifier: Classifier<S>,
    pub discriminator: Discriminator<S>,
    pub trace: Vec<GanMetricsRow>,
    pub labelled_indices: Vec<u32>,
}

pub fn ganodm_init<S: Scalar>(cfg: &GanOdmConfig) -> Result<(Classifier<S>, Discriminator<S>)> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let f = Classifier::init(&cfg.classifier_widths, cfg.generator_init, &mut rng)?;
    let d = Discriminator::init(
        &cfg.conv_channels,
        cfg.kernel_width,
        &cfg.dense_widths,
        cfg.discriminator_init,
        &mut rng,
    )?;
    Ok((f, d))
}

/// One discriminator step, one generator step, one supervised step per
/// update, with the three per-component learning-rate settings.
pub fn ganodm_train<S: Scalar>(cfg: &GanOdmConfig, task: &OcrTask) -> Result<GanRun<S>> {
    let (mut f, mut d) = ganodm_init::<S>(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(0x0d0a));

    // k labelled single digits, fixed for the whole run.
    let mut labelled_indices: Vec<u32> = Vec::new();
    while labelled_indices.len() < cfg.labelled {
        let i = rng.random_range(0..task.train.len() as u32);
        if !labelled_indices.contains(&i) {
            labelled_indices.push(i);
        }
    }
    let mut sup_images = Vec::with_capacity(cfg.labelled * IMAGE_PIXELS);
    let mut sup_targets = vec![S::zero(); cfg.labelled * DIGITS];
    for (row, &i) in labelled_indices.iter().enumerate() {
        sup_images.extend(task.train.image(i as usize).iter().map(|&p| S::from_f64(p as f64)));
        sup_targets[row * DIGITS + task.train.label(i as usize) as usize] = S::one();
    }
    let sup_images = Tensor::from_vec(&[cfg.labelled, IMAGE_PIXELS], sup_images)?;
    let sup_targets = Tensor::from_vec(&[cfg.labelled, DIGITS], sup_targets)?;

    let mut trace = Vec::with_capacity(cfg.updates as usize);
    let mut test_error = eval_error(&f, &task.test)?;
    for t in 0..cfg.updates {
        let d_batch = sample_windows::<S, _>(task, cfg.batch, cfg.window, &mut rng)?;
        let d_loss = discriminator_step(&mut d, &f, &d_batch, cfg.discriminator_lr)
            .map_err(|e| diverged(t, e))?;

        let g_batch = sample_windows::<S, _>(task, cfg.batch, cfg.window, &mut rng)?;
        let g_lr = cfg.generator_schedule.lr_at(t)?;
        let g_loss = generator_step(&mut f, &d, &g_batch, g_lr).map_err(|e| diverged(t, e))?;

        let s_loss = supervised_step(&mut f, &sup_images, &sup_targets, cfg.supervised_lr)
            .map_err(|e| diverged(t, e))?
            .unwrap_or(0.0);

        if (t + 1) % cfg.eval_every == 0 || t + 1 == cfg.updates {
            test_error = eval_error(&f, &task.test)?;
        }
        trace.push(GanMetricsRow { update: t, d_loss, g_loss, s_loss, test_error });
    }
    Ok(GanRun { classifier: f, discriminator: d, trace, labelled_indices })
}

fn diverged(update: u64, e: Error) -> Error {
    match e {
        Error::NonFinite { op } => {
            Error::Diverged { update, detail: format!("non-finite value in {}", op) }
        }
        other => other,
    }
}

// ── n-gram KL evaluation ─────────────────────────────────────────────

/// Empirical KL between the label n-gram distribution and the argmax
/// prediction n-gram distribution over a prefix of the image sequence,
/// with additive smoothing on both sides.
pub fn ngram_kl<S: Scalar>(
    f: &Classifier<S>,
    task: &OcrTask,
    n: usize,
    alpha: f64,
    eval_len: usize,
) -> Result<f64> {
    if !(1..=3).contains(&n) {
        return Err(Error::invalid("ngram_kl", "n must be 1, 2, or 3"));
    }
    if alpha <= 0.0 {
        return Err(Error::invalid("ngram_kl", "smoothing alpha must be positive"));
    }
    let len = eval_len.min(task.image_seq.indices.len()).min(task.label_file.digits.len());
    if len < n {
        return Err(Error::invalid("ngram_kl", "sequence shorter than n"));
    }
    // Argmax predictions over the evaluation prefix, in manageable chunks.
    let mut preds = Vec::with_capacity(len);
    let chunk = 4096;
    let mut i = 0;
    while i < len {
        let hi = (i + chunk).min(len);
        let mut data = Vec::with_capacity((hi - i) * IMAGE_PIXELS);
        for &idx in &task.image_seq.indices[i..hi] {
            data.extend(task.train.image(idx as usize).iter().map(|&p| S::from_f64(p as f64)));
        }
        let out = f.forward(&Tensor::from_vec(&[hi - i, IMAGE_PIXELS], data)?)?;
        preds.extend(out.data().chunks_exact(DIGITS).map(|row| argmax(row) as u8));
        i = hi;
    }
    let labels = &task.label_file.digits[..len];
    Ok(ngram_kl_between(labels, &preds, n, alpha))
}

/// KL[dist(label n-grams) ‖ dist(pred n-grams)] with α-smoothing on both.
pub fn ngram_kl_between(labels: &[u8], preds: &[u8], n: usize, alpha: f64) -> f64 {
    let cells = 10usize.pow(n as u32);
    let count = |seq: &[u8]| -> Vec<f64> {
        let mut c = vec![0.0f64; cells];
        for win in seq.windows(n) {
            let mut idx = 0usize;
            for &d in win {
                idx = idx * 10 + d as usize;
            }
            c[idx] += 1.0;
        }
        c
    };
    let p = count(labels);
    let q = count(preds);
    let p_total: f64 = p.iter().sum::<f64>() + alpha * cells as f64;
    let q_total: f64 = q.iter().sum::<f64>() + alpha * cells as f64;
    let mut kl = 0.0;
    for i in 0..cells {
        let pi = (p[i] + alpha) / p_total;
        let qi = (q[i] + alpha) / q_total;
        kl += pi * (pi / qi).ln();
    }
    kl
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::corpus::{corpus_from_text, TokenMode};
    use crate::data::labelfile::{make_image_sequence, make_label_file};
    use crate::data::synth::{generate_corpus_text, generate_digit_set};

    fn tiny_task(seed: u64) -> OcrTask {
        let train = generate_digit_set(seed, 300);
        let test = generate_digit_set(seed + 1, 60);
        let text = generate_corpus_text(seed, 30_000);
        let corpus = corpus_from_text(&text, TokenMode::Char, 0).unwrap();
        let label_file = make_label_file(&corpus, seed).unwrap();
        let image_seq = make_image_sequence(&label_file, &train, seed + 2).unwrap();
        OcrTask { train, test, label_file, image_seq }
    }

    fn tiny_cfg(seed: u64) -> GanOdmConfig {
        let mut cfg = GanOdmConfig::paper_default(20, 3, 4, seed);
        cfg.batch = 8;
        cfg.updates = 3;
        cfg.eval_every = 2;
        cfg.generator_schedule = LrSchedule::parse("0.1:2000,0.03:2000,0.01:2000", 8.0).unwrap();
        cfg.discriminator_lr = 0.005 / 8.0;
        cfg.supervised_lr = 0.005 / 8.0;
        cfg
    }

    #[test]
    fn init_produces_paper_shapes() {
        let cfg = GanOdmConfig::paper_default(20, 3, 4, 0);
        let (f, d) = ganodm_init::<f32>(&cfg).unwrap();
        assert_eq!(f.layer_shapes(), vec![vec![300, 784], vec![300, 300], vec![10, 300]]);
        assert_eq!(
            d.conv_shapes(),
            vec![vec![7, 10, 200], vec![7, 200, 200], vec![7, 200, 200]]
        );
        assert_eq!(d.dense[0].0.shape(), &[200, 200]);
        assert_eq!(d.dense[1].0.shape(), &[1, 200]);
        assert_eq!(d.receptive_field(), 19);
    }

    #[test]
    fn same_seed_same_nets() {
        let cfg = GanOdmConfig::paper_default(20, 3, 4, 11);
        let (f1, d1) = ganodm_init::<f32>(&cfg).unwrap();
        let (f2, d2) = ganodm_init::<f32>(&cfg).unwrap();
        assert_eq!(f1.layers[0].0, f2.layers[0].0);
        assert_eq!(d1.convs[0].0, d2.convs[0].0);
    }

    #[test]
    fn window_below_receptive_field_is_rejected() {
        let cfg = GanOdmConfig::paper_default(18, 3, 4, 0);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn real_windows_are_one_hot_and_fake_windows_contiguous() {
        let task = tiny_task(1);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let batch: WindowBatch<f32> = sample_windows(&task, 6, 20, &mut rng).unwrap();
        for row in batch.real.data().chunks_exact(DIGITS) {
            assert_eq!(row.iter().filter(|&&v| v == 1.0).count(), 1);
            assert_eq!(row.iter().sum::<f32>(), 1.0);
        }
        // Each fake window must be a contiguous run of the image sequence.
        let w = 20usize;
        for b in 0..6 {
            let first =
                &batch.fake_images.data()[(b * w) * IMAGE_PIXELS..(b * w + 1) * IMAGE_PIXELS];
            let mut found = false;
            'scan: for window_ids in task.image_seq.indices.windows(w) {
                let img = task.train.image(window_ids[0] as usize);
                if img.iter().zip(first.iter()).all(|(&a, &b)| a == b) {
                    for (t, &idx) in window_ids.iter().enumerate() {
                        let expect = task.train.image(idx as usize);
                        let got = &batch.fake_images.data()
                            [(b * w + t) * IMAGE_PIXELS..(b * w + t + 1) * IMAGE_PIXELS];
                        if expect.iter().zip(got.iter()).any(|(&a, &b)| a != b) {
                            continue 'scan;
                        }
                    }
                    found = true;
                    break;
                }
            }
            assert!(found, "fake window {} is not a contiguous sequence window", b);
        }
    }

    #[test]
    fn window_starts_are_uniform() {
        // Chi-square over 1e4 draws of window starts, bucketed into 20
        // bins; reject only below p=0.001 (critical value 43.82, 19 dof).
        let len = 120usize;
        let window = 20usize;
        let starts = len - window + 1;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let draws = 10_000usize;
        let bins = 20usize;
        let mut hist = vec![0f64; bins];
        for _ in 0..draws {
            let s = rng.random_range(0..starts);
            hist[s * bins / starts] += 1.0;
        }
        let mut expect = vec![0f64; bins];
        for s in 0..starts {
            expect[s * bins / starts] += draws as f64 / starts as f64;
        }
        let chi2: f64 = hist.iter().zip(&expect).map(|(o, e)| (o - e) * (o - e) / e).sum();
        assert!(chi2 < 43.82, "chi-square {} too large; starts not uniform", chi2);
    }

    #[test]
    fn discriminator_step_freezes_f_and_generator_step_freezes_d() {
        let task = tiny_task(2);
        let cfg = tiny_cfg(2);
        let (mut f, mut d) = ganodm_init::<f32>(&cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let batch = sample_windows::<f32, _>(&task, cfg.batch, cfg.window, &mut rng).unwrap();

        let f_before: Vec<Tensor<f32>> = f.layers.iter().map(|(w, _)| w.clone()).collect();
        discriminator_step(&mut d, &f, &batch, cfg.discriminator_lr).unwrap();
        for ((w, _), before) in f.layers.iter().zip(&f_before) {
            assert_eq!(w, before, "discriminator step must not move classifier weights");
        }

        let d_before: Vec<Tensor<f32>> = d.convs.iter().map(|(k, _)| k.clone()).collect();
        generator_step(&mut f, &d, &batch, 1e-3).unwrap();
        for ((k, _), before) in d.convs.iter().zip(&d_before) {
            assert_eq!(k, before, "generator step must not move discriminator weights");
        }
    }

    #[test]
    fn d_loss_at_zero_scores_is_two_ln_two_per_pair() {
        let task = tiny_task(3);
        let mut cfg = tiny_cfg(3);
        cfg.discriminator_init = 0.0;
        let (f, mut d) = ganodm_init::<f32>(&cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let batch = sample_windows::<f32, _>(&task, cfg.batch, cfg.window, &mut rng).unwrap();
        let d_loss = discriminator_step(&mut d, &f, &batch, 0.0).unwrap();
        assert!((d_loss - 2.0 * (2.0f64).ln()).abs() < 1e-5, "d_loss {}", d_loss);
    }

    #[test]
    fn g_loss_at_zero_scores_is_ln_two() {
        let task = tiny_task(4);
        let mut cfg = tiny_cfg(4);
        cfg.discriminator_init = 0.0;
        let (mut f, d) = ganodm_init::<f32>(&cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let batch = sample_windows::<f32, _>(&task, cfg.batch, cfg.window, &mut rng).unwrap();
        let g_loss = generator_step(&mut f, &d, &batch, 1e-4).unwrap();
        assert!((g_loss - (2.0f64).ln()).abs() < 1e-5, "g_loss {}", g_loss);
    }

    #[test]
    fn supervised_step_noop_for_zero_examples_and_zero_loss_on_perfect_fit() {
        let cfg = tiny_cfg(5);
        let (mut f, _) = ganodm_init::<f32>(&cfg).unwrap();
        let none = supervised_step(
            &mut f,
            &Tensor::zeros(&[0, IMAGE_PIXELS]),
            &Tensor::zeros(&[0, DIGITS]),
            1e-3,
        )
        .unwrap();
        assert!(none.is_none());
        let x = Tensor::filled(&[1, IMAGE_PIXELS], 0.1f32);
        let y = f.forward(&x).unwrap();
        let s = supervised_step(&mut f, &x, &y, 0.0).unwrap().unwrap();
        assert!(s < 1e-9);
    }

    #[test]
    fn classify_is_untrained_chance_and_argmax_shift_invariant() {
        let test = generate_digit_set(8, 40);
        let cfg = tiny_cfg(6);
        let (mut f, _) = ganodm_init::<f32>(&cfg).unwrap();
        let err = eval_error(&f, &test).unwrap();
        assert!(err > 0.5, "untrained classifier suspiciously good: {}", err);
        let img = test.image(0);
        let base = classify(&f, img).unwrap();
        // Shifting every output logit by the same constant (a strictly
        // increasing transform) cannot change the argmax.
        let (_, bias) = f.layers.last_mut().unwrap();
        for v in bias.data_mut() {
            *v += 5.0;
        }
        assert_eq!(classify(&f, img).unwrap(), base);
    }

    #[test]
    fn ngram_kl_reference_values() {
        // Identical sequences: KL vanishes up to smoothing.
        let seq: Vec<u8> = (0..5000).map(|i| ((i * 7 + i / 3) % 10) as u8).collect();
        let kl = ngram_kl_between(&seq, &seq, 1, 1e-9);
        assert!(kl.abs() <= 1e-6, "self-KL {}", kl);
        // p=(1,0,...) vs q=(0.5,0.5,0,...): ln 2.
        let p: Vec<u8> = vec![0; 1000];
        let q: Vec<u8> = (0..1000).map(|i| (i % 2) as u8).collect();
        let kl = ngram_kl_between(&p, &q, 1, 1e-12);
        assert!((kl - 2.0f64.ln()).abs() < 1e-3, "KL {}", kl);
        // Nonnegativity on arbitrary pairs.
        let a: Vec<u8> = (0..4000).map(|i| ((i * 13 + 5) % 10) as u8).collect();
        let b: Vec<u8> = (0..4000).map(|i| ((i * 29 + 1) % 10) as u8).collect();
        for n in 1..=3 {
            assert!(ngram_kl_between(&a, &b, n, 1e-6) >= 0.0);
        }
    }

    #[test]
    fn zero_updates_keeps_init_and_short_runs_stay_finite() {
        let task = tiny_task(9);
        let mut cfg = tiny_cfg(9);
        cfg.updates = 0;
        let run = ganodm_train::<f32>(&cfg, &task).unwrap();
        let (f0, _) = ganodm_init::<f32>(&cfg).unwrap();
        assert_eq!(run.classifier.layers[0].0, f0.layers[0].0);
        assert!(run.trace.is_empty());

        cfg.updates = 3;
        let run = ganodm_train::<f32>(&cfg, &task).unwrap();
        assert_eq!(run.trace.len(), 3);
        for row in &run.trace {
            assert!(row.d_loss.is_finite() && row.g_loss.is_finite() && row.s_loss.is_finite());
        }
    }
}
