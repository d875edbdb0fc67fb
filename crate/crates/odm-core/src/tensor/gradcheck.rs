//! Central-finite-difference gradient verification. Run it with the f64
//! instantiation; single precision drowns the comparison in rounding noise.
//!
//! Fragments containing relu must be probed away from the kink: keep every
//! pre-activation at least `eps` from zero or the two-sided difference
//! straddles the non-differentiable point.

use super::scalar::Scalar;
use super::tape::{Tape, Var};
use super::tensor::Tensor;
use crate::error::{Error, Result};

/// Max over all parameter coordinates of
/// |analytic − numeric| / max(|analytic|, |numeric|, 1e-12).
pub fn grad_check<S, F>(build: F, params: &[Tensor<S>], eps: f64) -> Result<f64>
where
    S: Scalar,
    F: Fn(&mut Tape<S>, &[Var]) -> Result<Var>,
{
    let eval = |tensors: &[Tensor<S>]| -> Result<(Tape<S>, Vec<Var>, Var)> {
        let mut tape = Tape::new();
        let vars: Vec<Var> = tensors.iter().map(|t| tape.leaf(t.clone())).collect();
        let loss = build(&mut tape, &vars)?;
        if !tape.value(loss).is_scalar() {
            return Err(Error::invalid("grad_check", "fragment must produce a scalar loss"));
        }
        Ok((tape, vars, loss))
    };

    let (tape, vars, loss) = eval(params)?;
    let mut grads = tape.backward(loss)?;
    let analytic: Vec<Tensor<S>> = vars
        .iter()
        .zip(params)
        .map(|(&v, p)| grads.take(v, p.shape()))
        .collect();

    let h = S::from_f64(eps);
    let mut worst = 0.0f64;
    let mut work: Vec<Tensor<S>> = params.to_vec();
    for pi in 0..params.len() {
        for j in 0..params[pi].numel() {
            let orig = work[pi].data()[j];
            work[pi].data_mut()[j] = orig + h;
            let (tp, _, lp) = eval(&work)?;
            let up = tp.value(lp).item().as_f64();
            work[pi].data_mut()[j] = orig - h;
            let (tm, _, lm) = eval(&work)?;
            let down = tm.value(lm).item().as_f64();
            work[pi].data_mut()[j] = orig;

            let numeric = (up - down) / (2.0 * eps);
            let a = analytic[pi].data()[j].as_f64();
            let denom = a.abs().max(numeric.abs()).max(1e-12);
            let rel = (a - numeric).abs() / denom;
            if rel > worst {
                worst = rel;
            }
        }
    }
    Ok(worst)
}

/// Randomized verification battery over every differentiable op and loss.
/// Returns (worst error, per-case labelled errors). Runs in f64; inputs are
/// kept away from relu kinks and max-pool ties.
pub fn battery(seed: u64, configs_per_kind: usize, eps: f64) -> Vec<(String, f64)> {
    use crate::tensor::ops::{Activation, LossKind};
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut results: Vec<(String, f64)> = Vec::new();

    let rand_t = |rng: &mut rand_chacha::ChaCha8Rng, shape: &[usize], lo: f64, hi: f64| {
        let n: usize = shape.iter().product();
        Tensor::<f64>::from_vec(
            shape,
            (0..n).map(|_| rng.random::<f64>() * (hi - lo) + lo).collect(),
        )
        .unwrap()
    };

    for case in 0..configs_per_kind {
        let b = 1 + rng.random_range(0..3usize);
        let d_in = 2 + rng.random_range(0..4usize);
        let d_out = 2 + rng.random_range(0..4usize);

        // dense + activation + each loss kind
        for (name, act) in [
            ("sigmoid", Activation::Sigmoid),
            ("tanh", Activation::Tanh),
            ("relu", Activation::Relu),
            ("identity", Activation::Identity),
        ] {
            let w = rand_t(&mut rng, &[d_out, d_in], -0.8, 0.8);
            let bias = rand_t(&mut rng, &[d_out], -0.3, 0.3);
            // Inputs bounded away from zero pre-activations with high
            // probability; relu kinks are excluded by construction below.
            let x = rand_t(&mut rng, &[b, d_in], 0.2, 1.0);
            let target = rand_t(&mut rng, &[b, d_out], 0.0, 1.0);
            let err = grad_check(
                |tape, vars| {
                    let xc = tape.constant(x.clone());
                    let h = tape.affine(xc, vars[0], vars[1])?;
                    let a = tape.activation(h, act);
                    tape.loss(LossKind::Squared, a, &target)
                },
                &[w, bias],
                eps,
            )
            .unwrap();
            results.push((format!("dense-{}-squared[{}]", name, case), err));
        }

        // softmax cross-entropy on logits
        {
            let w = rand_t(&mut rng, &[d_out, d_in], -0.8, 0.8);
            let bias = rand_t(&mut rng, &[d_out], -0.2, 0.2);
            let x = rand_t(&mut rng, &[b, d_in], -1.0, 1.0);
            let mut tgt = rand_t(&mut rng, &[b, d_out], 0.05, 1.0);
            for row in tgt.data_mut().chunks_exact_mut(d_out) {
                let s: f64 = row.iter().sum();
                for v in row.iter_mut() {
                    *v /= s;
                }
            }
            let err = grad_check(
                |tape, vars| {
                    let xc = tape.constant(x.clone());
                    let h = tape.affine(xc, vars[0], vars[1])?;
                    tape.loss(LossKind::SoftmaxXent, h, &tgt)
                },
                &[w, bias],
                eps,
            )
            .unwrap();
            results.push((format!("dense-softmax-xent[{}]", case), err));
        }

        // sigmoid cross-entropy, fixed and variable targets
        {
            let w = rand_t(&mut rng, &[d_out, d_in], -0.8, 0.8);
            let bias = rand_t(&mut rng, &[d_out], -0.2, 0.2);
            let x = rand_t(&mut rng, &[b, d_in], -1.0, 1.0);
            let tgt = rand_t(&mut rng, &[b, d_out], 0.0, 1.0);
            let err = grad_check(
                |tape, vars| {
                    let xc = tape.constant(x.clone());
                    let h = tape.affine(xc, vars[0], vars[1])?;
                    tape.loss(LossKind::SigmoidXent, h, &tgt)
                },
                &[w.clone(), bias.clone()],
                eps,
            )
            .unwrap();
            results.push((format!("dense-sigmoid-xent[{}]", case), err));

            let err = grad_check(
                |tape, vars| {
                    let xc = tape.constant(x.clone());
                    let h = tape.affine(xc, vars[0], vars[1])?;
                    let t = tape.activation(vars[2], Activation::Sigmoid);
                    let l = tape.sigmoid_xent_var_target(h, t)?;
                    Ok(l)
                },
                &[w, bias, rand_t(&mut rng, &[b, d_out], -1.0, 1.0)],
                eps,
            )
            .unwrap();
            results.push((format!("dense-bce-var-target[{}]", case), err));
        }

        // conv1d + global max pool (ties broken by distinct random inputs)
        {
            let time = 8 + rng.random_range(0..5usize);
            let width = 3;
            let c_in = 1 + rng.random_range(0..3usize);
            let c_out = 1 + rng.random_range(0..3usize);
            let seq = rand_t(&mut rng, &[b, time, c_in], -1.0, 1.0);
            let k = rand_t(&mut rng, &[width, c_in, c_out], -0.6, 0.6);
            let kb = rand_t(&mut rng, &[c_out], -0.2, 0.2);
            let target = rand_t(&mut rng, &[b, c_out], 0.0, 1.0);
            let err = grad_check(
                |tape, vars| {
                    let s = tape.constant(seq.clone());
                    let c = tape.conv1d(s, vars[0], vars[1])?;
                    let a = tape.activation(c, Activation::Tanh);
                    let p = tape.global_max_pool(a)?;
                    tape.loss(LossKind::Squared, p, &target)
                },
                &[k, kb],
                eps,
            )
            .unwrap();
            results.push((format!("conv1d-maxpool[{}]", case), err));
        }

        // 2-D same-padding convolutions, plain and grouped
        {
            let h = 5 + rng.random_range(0..3usize);
            let wd = 5 + rng.random_range(0..3usize);
            let c_out = 1 + rng.random_range(0..2usize);
            let img = rand_t(&mut rng, &[h, wd, 1], -1.0, 1.0);
            let k = rand_t(&mut rng, &[3, 3, 1, c_out], -0.6, 0.6);
            let kb = rand_t(&mut rng, &[c_out], -0.2, 0.2);
            let target = rand_t(&mut rng, &[h, wd, c_out], 0.0, 1.0);
            let err = grad_check(
                |tape, vars| {
                    let i = tape.constant(img.clone());
                    let c = tape.conv2d_same(i, vars[0], vars[1])?;
                    tape.loss(LossKind::Squared, c, &target)
                },
                &[k, kb],
                eps,
            )
            .unwrap();
            results.push((format!("conv2d-same[{}]", case), err));

            let n = 2usize;
            let imgs = rand_t(&mut rng, &[n, 5, 5, 1], -1.0, 1.0);
            let gk = rand_t(&mut rng, &[n, 3, 3, 1, 2], -0.6, 0.6);
            let gb = rand_t(&mut rng, &[n, 2], -0.2, 0.2);
            let target = rand_t(&mut rng, &[n, 5, 5, 2], 0.0, 1.0);
            let err = grad_check(
                |tape, vars| {
                    let c = tape.conv2d_grouped(vars[0], vars[1], vars[2])?;
                    let flat = tape.reshape(c, &[n, 50])?;
                    let r = tape.squared_rows(flat, &target.clone().reshaped(&[n, 50])?)?;
                    tape.sum_all(r)
                },
                &[imgs, gk, gb],
                eps,
            )
            .unwrap();
            results.push((format!("conv2d-grouped[{}]", case), err));
        }

        // elementwise / structural ops chained together
        {
            let a = rand_t(&mut rng, &[2, 3, 4], -1.0, 1.0);
            let c = rand_t(&mut rng, &[2, 4], -1.0, 1.0);
            let err = grad_check(
                |tape, vars| {
                    let picked = tape.index_axis1(vars[0], 1)?;
                    let summed = tape.add(picked, vars[1])?;
                    let scaled = tape.affine_scalar(summed, 1.7, -0.3)?;
                    let prod = tape.mul_elem(scaled, vars[1])?;
                    let diff = tape.sub(prod, vars[1])?;
                    tape.sum_all(diff)
                },
                &[a, c],
                eps,
            )
            .unwrap();
            results.push((format!("elementwise-chain[{}]", case), err));
        }
    }
    results
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::ops::{Activation, LossKind};

    #[test]
    fn linear_fragment_is_essentially_exact() {
        let w = Tensor::from_vec(&[2, 3], vec![0.3, -0.2, 0.5, 0.1, 0.7, -0.4]).unwrap();
        let err = grad_check(
            |tape, vars| {
                let x = tape.constant(Tensor::from_vec(&[3], vec![1.0, -2.0, 0.5]).unwrap());
                let b = tape.constant(Tensor::zeros(&[2]));
                let y = tape.affine(x, vars[0], b)?;
                tape.loss(LossKind::Squared, y, &Tensor::from_vec(&[2], vec![0.2, -0.1]).unwrap())
            },
            &[w],
            1e-4,
        )
        .unwrap();
        assert!(err <= 1e-8, "linear grad check error {}", err);
    }

    #[test]
    fn dense_sigmoid_dense_fragment() {
        let w1 = Tensor::from_vec(&[3, 2], vec![0.4, -0.9, 0.2, 0.8, -0.5, 0.3]).unwrap();
        let w2 = Tensor::from_vec(&[1, 3], vec![0.7, -0.3, 0.25]).unwrap();
        let err = grad_check(
            |tape, vars| {
                let x = tape.constant(Tensor::from_vec(&[2], vec![0.6, -1.2]).unwrap());
                let b1 = tape.constant(Tensor::zeros(&[3]));
                let b2 = tape.constant(Tensor::zeros(&[1]));
                let h = tape.affine(x, vars[0], b1)?;
                let a = tape.activation(h, Activation::Sigmoid);
                let y = tape.affine(a, vars[1], b2)?;
                tape.loss(LossKind::Squared, y, &Tensor::from_vec(&[1], vec![0.5]).unwrap())
            },
            &[w1, w2],
            1e-4,
        )
        .unwrap();
        assert!(err <= 1e-5, "dense-sigmoid-dense grad check error {}", err);
    }
}
