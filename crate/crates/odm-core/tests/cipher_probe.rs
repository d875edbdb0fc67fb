use odm_core::data::bags::sample_bags;
use odm_core::data::cipher::{make_cipher, mapping_accuracy};
use odm_core::data::corpus::{load_corpus, TokenMode};
use odm_core::dualae::{self, DualAeConfig, DualAeModel};
use odm_core::tensor::{ops, Activation, LossKind, Tape, Tensor, Var};
use odm_core::optim::sgd_step;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::Path;

// Joint-step trainer: both domain losses on one tape, single gradient step.
// Heads are module-private, so rebuild a standalone dual AE here.
struct JointAe {
    b0: Tensor<f32>, b0b: Tensor<f32>, b1: Tensor<f32>, b1b: Tensor<f32>,
    w: Tensor<f32>, wb: Tensor<f32>,
    a0: Tensor<f32>, a0b: Tensor<f32>, a1: Tensor<f32>, a1b: Tensor<f32>,
}

fn joint_run(seed: u64, lr_quoted: f64, batch: usize, updates: u64, trunk_scale: f32) -> f64 {
    use odm_core::tensor::{tensor_new, InitSpec};
    let corpus = load_corpus(Path::new("/tmp/odm/data/corpus.txt"), TokenMode::Char, 0).unwrap();
    let task = make_cipher(&corpus, seed).unwrap();
    let counts = task.counts_a();
    let (width, bag_n) = (100usize, 10usize);
    let lr = lr_quoted / batch as f64;
    let g = InitSpec::gaussian_scaled(0.003);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = JointAe {
        b0: tensor_new(&[25, 100], &g, &mut rng).unwrap(), b0b: Tensor::zeros(&[25]),
        b1: tensor_new(&[25, 100], &g, &mut rng).unwrap(), b1b: Tensor::zeros(&[25]),
        w: tensor_new(&[25, 25], &g, &mut rng).unwrap(), wb: Tensor::zeros(&[25]),
        a0: tensor_new(&[100, 25], &g, &mut rng).unwrap(), a0b: Tensor::zeros(&[100]),
        a1: tensor_new(&[100, 25], &g, &mut rng).unwrap(), a1b: Tensor::zeros(&[100]),
    };
    let mut rng_x = ChaCha8Rng::seed_from_u64(seed + 1);
    let mut rng_y = ChaCha8Rng::seed_from_u64(seed + 2);
    let inv = 1.0f32 / bag_n as f32;
    for _t in 0..updates {
        let bx = sample_bags::<f32, _>(&task.stream_a, bag_n, batch, width, &mut rng_x).unwrap();
        let tx = bx.map(|c| c * inv);
        let by = sample_bags::<f32, _>(&task.stream_b, bag_n, batch, width, &mut rng_y).unwrap();
        let ty = by.map(|c| c * inv);
        let mut tape = Tape::new();
        let vb0 = tape.leaf(m.b0.clone()); let vb0b = tape.leaf(m.b0b.clone());
        let vb1 = tape.leaf(m.b1.clone()); let vb1b = tape.leaf(m.b1b.clone());
        let vw = tape.leaf(m.w.clone()); let vwb = tape.leaf(m.wb.clone());
        let va0 = tape.leaf(m.a0.clone()); let va0b = tape.leaf(m.a0b.clone());
        let va1 = tape.leaf(m.a1.clone()); let va1b = tape.leaf(m.a1b.clone());
        let path = |tape: &mut Tape<f32>, input: &Tensor<f32>, b: Var, bb: Var, a: Var, ab: Var, vw: Var, vwb: Var| -> Var {
            let x = tape.constant(input.clone());
            let h = tape.affine(x, b, bb).unwrap();
            let h = tape.activation(h, Activation::Sigmoid);
            let h = tape.affine(h, vw, vwb).unwrap();
            let h = tape.activation(h, Activation::Sigmoid);
            tape.affine(h, a, ab).unwrap()
        };
        let ox = path(&mut tape, &bx, vb0, vb0b, va0, va0b, vw, vwb);
        let oy = path(&mut tape, &by, vb1, vb1b, va1, va1b, vw, vwb);
        let lx = tape.loss(LossKind::SoftmaxXent, ox, &tx).unwrap();
        let ly = tape.loss(LossKind::SoftmaxXent, oy, &ty).unwrap();
        let loss = tape.add(lx, ly).unwrap();
        let mut grads = tape.backward(loss).unwrap();
        let trunk_lr = lr * trunk_scale as f64;
        for (p, v, plr) in [(&mut m.b0, vb0, lr), (&mut m.b0b, vb0b, lr), (&mut m.b1, vb1, lr), (&mut m.b1b, vb1b, lr),
                       (&mut m.w, vw, trunk_lr), (&mut m.wb, vwb, trunk_lr),
                       (&mut m.a0, va0, lr), (&mut m.a0b, va0b, lr), (&mut m.a1, va1, lr), (&mut m.a1b, va1b, lr)] {
            let gr = grads.take(v, p.shape());
            sgd_step(p, &gr, plr).unwrap();
        }
    }
    // probe readout x->y
    let mut correct = 0; let mut total = 0;
    for s in 0..task.vocab_size {
        let mut probe = vec![0.0f32; width];
        probe[s] = 10.0;
        let x = Tensor::from_vec(&[width], probe).unwrap();
        let h = ops::activation(&ops::affine(&x, &m.b0, &m.b0b).unwrap(), Activation::Sigmoid);
        let h = ops::activation(&ops::affine(&h, &m.w, &m.wb).unwrap(), Activation::Sigmoid);
        let o = ops::affine(&h, &m.a1, &m.a1b).unwrap();
        let mut best = 0; for i in 0..task.vocab_size { if o.data()[i] > o.data()[best] { best = i; } }
        if counts[s] >= 1 { total += 1; if best as u32 == task.truth[s] { correct += 1; } }
    }
    correct as f64 / total as f64
}

#[test]
fn joint_vs_alternating() {
    for (lr, b, ts) in [(2.0, 200, 1.0f32), (3.0, 200, 1.0), (2.0, 200, 0.3), (3.0, 400, 0.3), (4.0, 400, 1.0)] {
        for seed in [0u64, 1] {
            let acc = joint_run(seed, lr, b, 10000, ts);
            println!("JOINT lr={} b={} trunk_scale={} seed={} -> acc={:.3}", lr, b, ts, seed, acc);
        }
    }
}
