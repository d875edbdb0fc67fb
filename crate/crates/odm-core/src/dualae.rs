//! Dual autoencoder: two autoencoders over different domains sharing their
//! inner trunk weights, trained on unpaired batches. Encoding with one
//! domain's input head and decoding with the other's output head at test
//! time reads out the inter-domain correspondence.

use crate::data::bags::one_symbol_bag;
use crate::data::cipher::SymbolMap;
use crate::error::{Error, Result};
use crate::optim::sgd_step;
use crate::tensor::ops;
use crate::tensor::{tensor_new, Activation, InitSpec, LossKind, Scalar, Tape, Tensor, Var};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    X,
    Y,
}

#[derive(Debug, Clone)]
pub struct DualAeConfig {
    /// Layer widths, symmetric around the trunk, e.g. 784-100-100-100-784.
    pub widths: Vec<usize>,
    pub nonlinearity: Activation,
    pub init_scale: f64,
    pub loss_x: LossKind,
    pub loss_y: LossKind,
    pub batch: usize,
    /// Per-step learning rate (already divided by batch under the summed
    /// loss convention).
    pub lr: f64,
    pub updates: u64,
    pub seed: u64,
}

impl DualAeConfig {
    pub fn validate(&self) -> Result<()> {
        let n = self.widths.len();
        if n < 3 {
            return Err(Error::invalid("dualae_config", "need at least in-hidden-out widths"));
        }
        for i in 0..n {
            if self.widths[i] != self.widths[n - 1 - i] {
                return Err(Error::invalid(
                    "dualae_config",
                    format!("widths {:?} not symmetric around the trunk", self.widths),
                ));
            }
            if self.widths[i] == 0 {
                return Err(Error::invalid("dualae_config", "zero width"));
            }
        }
        if self.init_scale < 0.0 {
            return Err(Error::invalid("dualae_config", "negative init scale"));
        }
        if self.batch == 0 {
            return Err(Error::invalid("dualae_config", "batch must be positive"));
        }
        Ok(())
    }

    pub fn input_width(&self) -> usize {
        self.widths[0]
    }
}

/// Domain-specific heads around a shared trunk. The trunk tensors are the
/// single source of truth for both paths.
#[derive(Debug, Clone)]
pub struct DualAeModel<S: Scalar> {
    pub nonlinearity: Activation,
    pub loss_x: LossKind,
    pub loss_y: LossKind,
    b0: Tensor<S>,
    b0_bias: Tensor<S>,
    b1: Tensor<S>,
    b1_bias: Tensor<S>,
    /// Shared trunk layers (weight, bias), used identically by both paths.
    trunk: Vec<(Tensor<S>, Tensor<S>)>,
    a0: Tensor<S>,
    a0_bias: Tensor<S>,
    a1: Tensor<S>,
    a1_bias: Tensor<S>,
}

impl<S: Scalar> DualAeModel<S> {
    pub fn init(cfg: &DualAeConfig) -> Result<Self> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let w = &cfg.widths;
        let n = w.len();
        let gauss = InitSpec::gaussian_scaled(cfg.init_scale);

        let b0 = tensor_new(&[w[1], w[0]], &gauss, &mut rng)?;
        let b1 = tensor_new(&[w[1], w[0]], &gauss, &mut rng)?;
        let mut trunk = Vec::new();
        for i in 1..n - 2 {
            let wt = tensor_new(&[w[i + 1], w[i]], &gauss, &mut rng)?;
            trunk.push((wt, Tensor::zeros(&[w[i + 1]])));
        }
        let a0 = tensor_new(&[w[n - 1], w[n - 2]], &gauss, &mut rng)?;
        let a1 = tensor_new(&[w[n - 1], w[n - 2]], &gauss, &mut rng)?;

        Ok(DualAeModel {
            nonlinearity: cfg.nonlinearity,
            loss_x: cfg.loss_x,
            loss_y: cfg.loss_y,
            b0_bias: Tensor::zeros(&[w[1]]),
            b1_bias: Tensor::zeros(&[w[1]]),
            a0_bias: Tensor::zeros(&[w[n - 1]]),
            a1_bias: Tensor::zeros(&[w[n - 1]]),
            b0,
            b1,
            trunk,
            a0,
            a1,
        })
    }

    fn loss_of(&self, domain: Domain) -> LossKind {
        match domain {
            Domain::X => self.loss_x,
            Domain::Y => self.loss_y,
        }
    }

    /// The output layer stays linear when the loss applies its own link
    /// (softmax/sigmoid cross-entropy); squared-loss paths put the
    /// nonlinearity back on the output as in the reconstruction equations.
    fn output_activation(&self, domain: Domain) -> Activation {
        match self.loss_of(domain) {
            LossKind::Squared => self.nonlinearity,
            _ => Activation::Identity,
        }
    }

    fn heads(&self, domain: Domain) -> (&Tensor<S>, &Tensor<S>, &Tensor<S>, &Tensor<S>) {
        match domain {
            Domain::X => (&self.b0, &self.b0_bias, &self.a0, &self.a0_bias),
            Domain::Y => (&self.b1, &self.b1_bias, &self.a1, &self.a1_bias),
        }
    }

    /// Named parameters in a stable order (checkpoint layout).
    pub fn named_params(&self) -> Vec<(String, &Tensor<S>)> {
        let mut out = vec![
            ("b0".to_string(), &self.b0),
            ("b0_bias".to_string(), &self.b0_bias),
            ("b1".to_string(), &self.b1),
            ("b1_bias".to_string(), &self.b1_bias),
        ];
        for (i, (w, b)) in self.trunk.iter().enumerate() {
            out.push((format!("w{}", i + 1), w));
            out.push((format!("w{}_bias", i + 1), b));
        }
        out.push(("a0".to_string(), &self.a0));
        out.push(("a0_bias".to_string(), &self.a0_bias));
        out.push(("a1".to_string(), &self.a1));
        out.push(("a1_bias".to_string(), &self.a1_bias));
        out
    }

    pub fn load_params(&mut self, params: &[(String, Tensor<S>)]) -> Result<()> {
        for (name, value) in params {
            let slot: &mut Tensor<S> = match name.as_str() {
                "b0" => &mut self.b0,
                "b0_bias" => &mut self.b0_bias,
                "b1" => &mut self.b1,
                "b1_bias" => &mut self.b1_bias,
                "a0" => &mut self.a0,
                "a0_bias" => &mut self.a0_bias,
                "a1" => &mut self.a1,
                "a1_bias" => &mut self.a1_bias,
                other => {
                    let parse = other
                        .strip_prefix('w')
                        .and_then(|rest| {
                            let (idx, is_bias) = match rest.strip_suffix("_bias") {
                                Some(i) => (i, true),
                                None => (rest, false),
                            };
                            idx.parse::<usize>().ok().map(|i| (i, is_bias))
                        });
                    match parse {
                        Some((i, is_bias)) if i >= 1 && i <= self.trunk.len() => {
                            let slot = &mut self.trunk[i - 1];
                            if is_bias { &mut slot.1 } else { &mut slot.0 }
                        }
                        _ => {
                            return Err(Error::Checkpoint(format!("unknown parameter '{}'", name)))
                        }
                    }
                }
            };
            if slot.shape() != value.shape() {
                return Err(Error::Checkpoint(format!(
                    "parameter '{}' shape {:?} does not match model {:?}",
                    name,
                    value.shape(),
                    slot.shape()
                )));
            }
            *slot = value.clone();
        }
        Ok(())
    }

    /// Pure forward pass: encode with `from`'s input head, cross the trunk,
    /// decode with `to`'s output head.
    fn map_through(&self, input: &Tensor<S>, from: Domain, to: Domain) -> Result<Tensor<S>> {
        let (b, b_bias, _, _) = self.heads(from);
        let (_, _, a, a_bias) = self.heads(to);
        let mut h = ops::activation(&ops::affine(input, b, b_bias)?, self.nonlinearity);
        for (w, bias) in &self.trunk {
            h = ops::activation(&ops::affine(&h, w, bias)?, self.nonlinearity);
        }
        let out = ops::affine(&h, a, a_bias)?;
        Ok(ops::activation(&out, self.output_activation(to)))
    }

    /// Cross-domain mapping (the test-time wiring).
    pub fn cross_map(&self, input: &Tensor<S>, direction: Domain) -> Result<Tensor<S>> {
        match direction {
            Domain::X => self.map_through(input, Domain::X, Domain::Y),
            Domain::Y => self.map_through(input, Domain::Y, Domain::X),
        }
    }

    /// Same-domain reconstruction.
    pub fn autoencode(&self, input: &Tensor<S>, domain: Domain) -> Result<Tensor<S>> {
        self.map_through(input, domain, domain)
    }

    /// One SGD step on a single domain's reconstruction loss. Only that
    /// domain's heads and the shared trunk are touched.
    pub fn step(
        &mut self,
        input: &Tensor<S>,
        target: &Tensor<S>,
        domain: Domain,
        lr: f64,
    ) -> Result<f64> {
        let mut tape = Tape::new();
        let (b, b_bias, a, a_bias) = self.heads(domain);
        let bv = tape.leaf(b.clone());
        let bbv = tape.leaf(b_bias.clone());
        let trunk_vars: Vec<(Var, Var)> = self
            .trunk
            .iter()
            .map(|(w, bias)| (tape.leaf(w.clone()), tape.leaf(bias.clone())))
            .collect();
        let av = tape.leaf(a.clone());
        let abv = tape.leaf(a_bias.clone());
        let x = tape.constant(input.clone());

        let mut h = tape.affine(x, bv, bbv)?;
        h = tape.activation(h, self.nonlinearity);
        for &(w, bias) in &trunk_vars {
            h = tape.affine(h, w, bias)?;
            h = tape.activation(h, self.nonlinearity);
        }
        let mut out = tape.affine(h, av, abv)?;
        let out_act = self.output_activation(domain);
        if out_act != Activation::Identity {
            out = tape.activation(out, out_act);
        }
        let loss = tape.loss(self.loss_of(domain), out, target)?;
        let loss_value = tape.value(loss).item().as_f64();

        let mut grads = tape.backward(loss)?;
        {
            let (b, b_bias, a, a_bias) = match domain {
                Domain::X => (&mut self.b0, &mut self.b0_bias, &mut self.a0, &mut self.a0_bias),
                Domain::Y => (&mut self.b1, &mut self.b1_bias, &mut self.a1, &mut self.a1_bias),
            };
            sgd_step(b, &grads.take(bv, b.shape()), lr)?;
            sgd_step(b_bias, &grads.take(bbv, b_bias.shape()), lr)?;
            sgd_step(a, &grads.take(av, a.shape()), lr)?;
            sgd_step(a_bias, &grads.take(abv, a_bias.shape()), lr)?;
        }
        for ((w, bias), &(wv, biasv)) in self.trunk.iter_mut().zip(&trunk_vars) {
            sgd_step(w, &grads.take(wv, w.shape()), lr)?;
            sgd_step(bias, &grads.take(biasv, bias.shape()), lr)?;
        }
        Ok(loss_value)
    }
}

/// Alternating unpaired training: one X-domain step then one Y-domain step
/// per update. The callback sees (update, loss_x, loss_y) and may stop the
/// run early by returning false.
pub fn train<S, FX, FY, CB>(
    model: &mut DualAeModel<S>,
    mut sample_x: FX,
    mut sample_y: FY,
    updates: u64,
    lr: f64,
    mut on_update: CB,
) -> Result<()>
where
    S: Scalar,
    FX: FnMut() -> Result<(Tensor<S>, Tensor<S>)>,
    FY: FnMut() -> Result<(Tensor<S>, Tensor<S>)>,
    CB: FnMut(u64, f64, f64) -> bool,
{
    for t in 0..updates {
        let (xin, xtarget) = sample_x()?;
        let loss_x = model.step(&xin, &xtarget, Domain::X, lr).map_err(|e| diverged(t, e))?;
        let (yin, ytarget) = sample_y()?;
        let loss_y = model.step(&yin, &ytarget, Domain::Y, lr).map_err(|e| diverged(t, e))?;
        if !on_update(t, loss_x, loss_y) {
            break;
        }
    }
    Ok(())
}

fn diverged(update: u64, e: Error) -> Error {
    match e {
        Error::NonFinite { op } => {
            Error::Diverged { update, detail: format!("non-finite value in {}", op) }
        }
        other => other,
    }
}

/// Read a symbol mapping out of a bag-trained model: probe each source
/// symbol with a count-n bag and take the argmax of the cross-mapped
/// output over the target alphabet.
pub fn extract_mapping<S: Scalar>(
    model: &DualAeModel<S>,
    vocab_size: usize,
    n: usize,
    width: usize,
) -> Result<SymbolMap> {
    let mut map: SymbolMap = vec![None; vocab_size];
    for s in 0..vocab_size {
        let probe = one_symbol_bag::<S>(s as u32, n, width);
        let out = model.cross_map(&probe, Domain::X)?;
        let mut best = 0usize;
        let mut best_v = out.data()[0];
        for (i, &v) in out.data().iter().enumerate().take(vocab_size) {
            if v > best_v {
                best_v = v;
                best = i;
            }
        }
        map[s] = Some(best as u32);
    }
    Ok(map)
}
