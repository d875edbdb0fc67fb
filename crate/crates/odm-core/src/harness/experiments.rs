//! The experiment registry: name → defaults → runner. Every run writes the
//! resolved config, a metrics CSV, a summary JSON, and (except gradcheck)
//! a checkpoint into its output directory, then leaves the process exit
//! code to the caller.

use super::checkpoint::save_checkpoint;
use super::config::RunConfig;
use super::metrics::{fmt_f64, write_file, write_summary, MetricsTable};
use crate::data::bags::sample_bags;
use crate::data::cipher::{frequency_baseline, make_cipher, mapping_accuracy};
use crate::data::corpus::{load_corpus, TokenMode};
use crate::data::labelfile::{make_image_sequence, make_label_file};
use crate::data::mnist::{load_idx, write_idx, MnistSet, IMAGE_PIXELS};
use crate::data::perm::PermutationTask;
use crate::data::synth::{generate_corpus_text, generate_digit_set};
use crate::dualae::{self, Domain, DualAeConfig, DualAeModel};
use crate::error::{Error, Result};
use crate::ganodm::{self, Classifier, GanOdmConfig, OcrTask};
use crate::optim::LrSchedule;
use crate::tensor::{Activation, LossKind, Scalar, Tensor};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::{Path, PathBuf};

pub const EXPERIMENTS: &[&str] =
    &["cipher-char", "cipher-word", "mnist-perm", "gan-odm", "adapt", "gradcheck", "gen-data"];

/// Run one experiment end to end. `overrides` are (key, value) pairs with
/// the highest precedence; unknown keys are rejected.
pub fn run_experiment(
    experiment: &str,
    config_file: Option<&Path>,
    overrides: &[(String, String)],
    out: &Path,
) -> Result<()> {
    std::fs::create_dir_all(out).map_err(|e| Error::io(out.display().to_string(), e))?;
    match experiment {
        "cipher-char" => run_cipher(config_file, overrides, out, TokenMode::Char),
        "cipher-word" => run_cipher(config_file, overrides, out, TokenMode::Word),
        "mnist-perm" => run_mnist_perm(config_file, overrides, out),
        "gan-odm" => run_gan_odm(config_file, overrides, out),
        "adapt" => run_adapt(config_file, overrides, out),
        "gradcheck" => run_gradcheck(config_file, overrides, out),
        "gen-data" => run_gen_data(config_file, overrides, out),
        other => Err(Error::Config(format!(
            "unknown experiment '{}'; expected one of {}",
            other,
            EXPERIMENTS.join(", ")
        ))),
    }
}

fn write_resolved(cfg: &RunConfig, out: &Path) -> Result<()> {
    write_file(&out.join("config.txt"), cfg.resolved_text().as_bytes())
}

fn load_mnist_dir(dir: &str) -> Result<(MnistSet, MnistSet)> {
    let dir = PathBuf::from(dir);
    let train = load_idx(&dir.join("train-images-idx3-ubyte"), &dir.join("train-labels-idx1-ubyte"))?;
    let test = load_idx(&dir.join("t10k-images-idx3-ubyte"), &dir.join("t10k-labels-idx1-ubyte"))?;
    Ok((train, test))
}

// ── substitution ciphers ─────────────────────────────────────────────

fn cipher_defaults(mode: TokenMode) -> Vec<(&'static str, &'static str)> {
    let mut defaults = vec![
        ("corpus", ""),
        ("bag_n", "10"),
        ("batch", "400"),
        ("lr", "2.0"),
        ("updates", "10000"),
        ("init_scale", "0.003"),
        ("nonlinearity", "sigmoid"),
        ("eval_every", "250"),
        ("min_count", "1"),
        ("early_stop", "1"),
        ("seed", "0"),
    ];
    match mode {
        TokenMode::Char => {
            defaults.push(("vocab_size", "30"));
            defaults.push(("widths", "100-25-25-100"));
        }
        TokenMode::Word => {
            defaults.push(("vocab_size", "1000"));
            defaults.push(("widths", "1000-100-100-1000"));
        }
    }
    defaults
}

fn run_cipher(
    config_file: Option<&Path>,
    overrides: &[(String, String)],
    out: &Path,
    mode: TokenMode,
) -> Result<()> {
    let defaults = cipher_defaults(mode);
    let cfg = RunConfig::resolve(&defaults, config_file, overrides)?;
    write_resolved(&cfg, out)?;

    let corpus_path = cfg.get("corpus");
    if corpus_path.is_empty() {
        return Err(Error::Config("key 'corpus' must name a text file".into()));
    }
    let vocab_size = cfg.get_usize("vocab_size")?;
    let corpus = load_corpus(Path::new(corpus_path), mode, vocab_size)?;
    let seed = cfg.get_u64("seed")?;
    let task = make_cipher(&corpus, seed)?;

    let widths = cfg.get_widths("widths")?;
    if widths[0] < task.vocab_size {
        return Err(Error::Config(format!(
            "input width {} below vocabulary size {}",
            widths[0], task.vocab_size
        )));
    }
    let batch = cfg.get_usize("batch")?;
    let bag_n = cfg.get_usize("bag_n")?;
    let updates = cfg.get_u64("updates")?;
    let eval_every = cfg.get_u64("eval_every")?.max(1);
    let min_count = cfg.get_u64("min_count")?;
    let early_stop = cfg.get_u64("early_stop")? != 0;
    // Single rate ("2.0") or a piecewise schedule ("4.0:2000,1.5:8000"),
    // quoted per summed loss and divided by the batch size.
    let lr_schedule = if cfg.get("lr").contains(':') {
        LrSchedule::parse(cfg.get("lr"), batch as f64)?
    } else {
        LrSchedule::constant(updates.max(1), cfg.get_f64("lr")? / batch as f64)?
    };
    let lr = lr_schedule.lr_at(0)?;
    let width = widths[0];

    let model_cfg = DualAeConfig {
        widths,
        nonlinearity: Activation::parse(cfg.get("nonlinearity"))?,
        init_scale: cfg.get_f64("init_scale")?,
        loss_x: LossKind::SoftmaxXent,
        loss_y: LossKind::SoftmaxXent,
        batch,
        lr,
        updates,
        seed,
    };
    let mut model = DualAeModel::<f32>::init(&model_cfg)?;

    let counts = task.counts_a();
    let mut rng_x = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mut rng_y = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    let inv_n = 1.0f32 / bag_n as f32;
    let make_batch = |stream: &[u32], rng: &mut ChaCha8Rng| -> Result<(Tensor<f32>, Tensor<f32>)> {
        let bags = sample_bags::<f32, _>(stream, bag_n, batch, width, rng)?;
        let target = bags.map(|c| c * inv_n);
        Ok((bags, target))
    };
    let accuracy_eval = |model: &DualAeModel<f32>| -> Result<f64> {
        let est = dualae::extract_mapping(model, task.vocab_size, bag_n, width)?;
        mapping_accuracy(&est, &task.truth, &counts, min_count)
    };

    // Train in eval-sized chunks; the accuracy column carries the value
    // measured at the end of each chunk. Early stop at perfect recovery.
    let mut table = MetricsTable::new(&["update", "loss_x", "loss_y", "mapping_accuracy"]);
    let mut last_accuracy = 0.0f64;
    let mut done = 0u64;
    let mut updates_run = 0u64;
    while done < updates {
        let chunk = eval_every.min(updates - done);
        let mut chunk_rows: Vec<(u64, f64, f64)> = Vec::new();
        let base = done;
        let lr = lr_schedule.lr_at(done.min(lr_schedule.total_updates() - 1))?;
        dualae::train(
            &mut model,
            || make_batch(&task.stream_a, &mut rng_x),
            || make_batch(&task.stream_b, &mut rng_y),
            chunk,
            lr,
            |t, lx, ly| {
                chunk_rows.push((base + t, lx, ly));
                true
            },
        )?;
        done += chunk;
        updates_run = done;
        last_accuracy = accuracy_eval(&model)?;
        for (t, lx, ly) in &chunk_rows {
            table.push(vec![t.to_string(), fmt_f64(*lx), fmt_f64(*ly), fmt_f64(last_accuracy)]);
        }
        if early_stop && last_accuracy >= 1.0 {
            break;
        }
    }
    table.write_csv(&out.join("metrics.csv"))?;

    let baseline = frequency_baseline(&task.stream_a, &task.stream_b, task.vocab_size);
    let baseline_accuracy = mapping_accuracy(&baseline, &task.truth, &counts, min_count)?;

    write_summary(
        &out.join("summary.json"),
        &serde_json::json!({
            "experiment": match mode { TokenMode::Char => "cipher-char", TokenMode::Word => "cipher-word" },
            "seed": seed,
            "config_hash": cfg.hash_hex(),
            "vocab_size": task.vocab_size,
            "mapping_accuracy": last_accuracy,
            "frequency_baseline_accuracy": baseline_accuracy,
            "updates_run": updates_run,
        }),
    )?;

    let params: Vec<(String, Tensor<f32>)> =
        model.named_params().into_iter().map(|(n, t)| (n, t.clone())).collect();
    save_checkpoint(&out.join("model.ckpt"), &params)?;
    Ok(())
}

// ── pixel permutation ────────────────────────────────────────────────

const MNIST_PERM_DEFAULTS: &[(&str, &str)] = &[
    ("mnist_dir", ""),
    ("widths", "784-100-100-100-784"),
    ("nonlinearity", "sigmoid"),
    ("init_scale", "0.003"),
    ("batch", "100"),
    ("lr", "0.1"),
    ("updates", "30000"),
    ("holdout", "1000"),
    ("perm_seed", "1"),
    ("eval_every", "1000"),
    ("seed", "0"),
];

pub fn pearson(a: &[f32], b: &[f32]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().map(|&v| v as f64).sum::<f64>() / n;
    let mb = b.iter().map(|&v| v as f64).sum::<f64>() / n;
    let mut num = 0.0;
    let mut da = 0.0;
    let mut db = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        let u = x as f64 - ma;
        let v = y as f64 - mb;
        num += u * v;
        da += u * u;
        db += v * v;
    }
    num / (da.sqrt() * db.sqrt() + 1e-12)
}

fn run_mnist_perm(
    config_file: Option<&Path>,
    overrides: &[(String, String)],
    out: &Path,
) -> Result<()> {
    let cfg = RunConfig::resolve(MNIST_PERM_DEFAULTS, config_file, overrides)?;
    write_resolved(&cfg, out)?;
    if cfg.get("mnist_dir").is_empty() {
        return Err(Error::Config("key 'mnist_dir' must name an IDX directory".into()));
    }
    let (train, test) = load_mnist_dir(cfg.get("mnist_dir"))?;
    let seed = cfg.get_u64("seed")?;
    let perm = PermutationTask::new(cfg.get_u64("perm_seed")?);
    let batch = cfg.get_usize("batch")?;
    let updates = cfg.get_u64("updates")?;
    let lr = cfg.get_f64("lr")? / batch as f64;

    let model_cfg = DualAeConfig {
        widths: cfg.get_widths("widths")?,
        nonlinearity: Activation::parse(cfg.get("nonlinearity"))?,
        init_scale: cfg.get_f64("init_scale")?,
        loss_x: LossKind::Squared,
        loss_y: LossKind::Squared,
        batch,
        lr,
        updates,
        seed,
    };
    let mut model = DualAeModel::<f32>::init(&model_cfg)?;

    let mut rng_x = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mut rng_y = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));

    let batch_images = |set: &MnistSet, rng: &mut ChaCha8Rng, permute: Option<&PermutationTask>| {
        let mut data = Vec::with_capacity(batch * IMAGE_PIXELS);
        for _ in 0..batch {
            let img = set.image(rng.random_range(0..set.len()));
            match permute {
                Some(p) => data.extend(p.apply(img)),
                None => data.extend_from_slice(img),
            }
        }
        Tensor::<f32>::from_vec(&[batch, IMAGE_PIXELS], data)
    };

    let mut table = MetricsTable::new(&["update", "loss_x", "loss_y"]);
    let mut rows: Vec<(u64, f64, f64)> = Vec::new();
    {
        let train_ref = &train;
        dualae::train(
            &mut model,
            || {
                let b = batch_images(train_ref, &mut rng_x, Some(&perm))?;
                Ok((b.clone(), b))
            },
            || {
                let b = batch_images(train_ref, &mut rng_y, None)?;
                Ok((b.clone(), b))
            },
            updates,
            lr,
            |t, lx, ly| {
                rows.push((t, lx, ly));
                true
            },
        )?;
    }
    for (t, lx, ly) in &rows {
        table.push(vec![t.to_string(), fmt_f64(*lx), fmt_f64(*ly)]);
    }
    table.write_csv(&out.join("metrics.csv"))?;

    // Held-out evaluation: cross-map permuted digits back and correlate
    // with the originals; the control correlates against an unrelated
    // permutation of the same digits.
    let holdout = cfg.get_usize("holdout")?.min(test.len());
    let control_perm = PermutationTask::new(cfg.get_u64("perm_seed")? ^ 0x5a5a_5a5a);
    let mut corr_sum = 0.0;
    let mut control_sum = 0.0;
    for i in 0..holdout {
        let original = test.image(i);
        let permuted = perm.apply(original);
        let input = Tensor::<f32>::from_vec(&[IMAGE_PIXELS], permuted)?;
        let mapped = model.cross_map(&input, Domain::X)?;
        corr_sum += pearson(mapped.data(), original);
        control_sum += pearson(mapped.data(), &control_perm.apply(original));
    }
    let mean_corr = corr_sum / holdout as f64;
    let control_corr = control_sum / holdout as f64;

    write_summary(
        &out.join("summary.json"),
        &serde_json::json!({
            "experiment": "mnist-perm",
            "seed": seed,
            "config_hash": cfg.hash_hex(),
            "holdout": holdout,
            "mean_correlation": mean_corr,
            "control_correlation": control_corr,
        }),
    )?;
    let params: Vec<(String, Tensor<f32>)> =
        model.named_params().into_iter().map(|(n, t)| (n, t.clone())).collect();
    save_checkpoint(&out.join("model.ckpt"), &params)?;
    Ok(())
}

// ── GAN distribution matching ────────────────────────────────────────

const GAN_ODM_DEFAULTS: &[(&str, &str)] = &[
    ("mnist_dir", ""),
    ("corpus", ""),
    ("window", "20"),
    ("conv_layers", "3"),
    ("batch", "200"),
    ("updates", "6000"),
    ("g_lr_schedule", "0.1:2000,0.03:2000,0.01:2000"),
    ("d_lr", "0.005"),
    ("s_lr", "0.005"),
    ("k_labelled", "4"),
    ("g_init", "1.4"),
    ("d_init", "1.0"),
    ("eval_every", "200"),
    ("ngram_alpha", "1e-9"),
    ("ngram_eval_len", "20000"),
    ("seed", "0"),
];

fn build_ocr_task(mnist_dir: &str, corpus_path: &str, seed: u64) -> Result<OcrTask> {
    let (train, test) = load_mnist_dir(mnist_dir)?;
    let corpus = load_corpus(Path::new(corpus_path), TokenMode::Char, 0)?;
    let label_file = make_label_file(&corpus, seed)?;
    let image_seq = make_image_sequence(&label_file, &train, seed.wrapping_add(0x5e0))?;
    Ok(OcrTask { train, test, label_file, image_seq })
}

fn run_gan_odm(
    config_file: Option<&Path>,
    overrides: &[(String, String)],
    out: &Path,
) -> Result<()> {
    let cfg = RunConfig::resolve(GAN_ODM_DEFAULTS, config_file, overrides)?;
    write_resolved(&cfg, out)?;
    if cfg.get("mnist_dir").is_empty() || cfg.get("corpus").is_empty() {
        return Err(Error::Config("keys 'mnist_dir' and 'corpus' are required".into()));
    }
    let seed = cfg.get_u64("seed")?;
    let task = build_ocr_task(cfg.get("mnist_dir"), cfg.get("corpus"), seed)?;

    let batch = cfg.get_usize("batch")?;
    let gan_cfg = GanOdmConfig {
        classifier_widths: vec![IMAGE_PIXELS, 300, 300, ganodm::DIGITS],
        conv_channels: {
            let mut c = vec![ganodm::DIGITS];
            c.extend(std::iter::repeat(200).take(cfg.get_usize("conv_layers")?));
            c
        },
        kernel_width: 7,
        dense_widths: vec![200, 200, 1],
        batch,
        window: cfg.get_usize("window")?,
        updates: cfg.get_u64("updates")?,
        generator_schedule: LrSchedule::parse(cfg.get("g_lr_schedule"), batch as f64)?,
        discriminator_lr: cfg.get_f64("d_lr")? / batch as f64,
        supervised_lr: cfg.get_f64("s_lr")? / batch as f64,
        labelled: cfg.get_usize("k_labelled")?,
        generator_init: cfg.get_f64("g_init")?,
        discriminator_init: cfg.get_f64("d_init")?,
        eval_every: cfg.get_u64("eval_every")?.max(1),
        seed,
    };

    let alpha = cfg.get_f64("ngram_alpha")?;
    let eval_len = cfg.get_usize("ngram_eval_len")?;
    let (f0, _) = ganodm::ganodm_init::<f32>(&gan_cfg)?;
    let kl1_init = ganodm::ngram_kl(&f0, &task, 1, alpha, eval_len)?;
    let kl2_init = ganodm::ngram_kl(&f0, &task, 2, alpha, eval_len)?;

    let run = ganodm::ganodm_train::<f32>(&gan_cfg, &task)?;

    let mut table = MetricsTable::new(&["update", "d_loss", "g_loss", "s_loss", "test_error"]);
    for row in &run.trace {
        table.push(vec![
            row.update.to_string(),
            fmt_f64(row.d_loss),
            fmt_f64(row.g_loss),
            fmt_f64(row.s_loss),
            fmt_f64(row.test_error),
        ]);
    }
    table.write_csv(&out.join("metrics.csv"))?;

    let kl1_final = ganodm::ngram_kl(&run.classifier, &task, 1, alpha, eval_len)?;
    let kl2_final = ganodm::ngram_kl(&run.classifier, &task, 2, alpha, eval_len)?;
    let final_error = run.trace.last().map(|r| r.test_error).unwrap_or(1.0);
    let min_error =
        run.trace.iter().map(|r| r.test_error).fold(f64::INFINITY, f64::min);

    write_summary(
        &out.join("summary.json"),
        &serde_json::json!({
            "experiment": "gan-odm",
            "seed": seed,
            "config_hash": cfg.hash_hex(),
            "final_test_error": final_error,
            "min_test_error": min_error,
            "kl1_init": kl1_init,
            "kl1_final": kl1_final,
            "kl2_init": kl2_init,
            "kl2_final": kl2_final,
            "labelled_indices": run.labelled_indices,
        }),
    )?;

    let mut params: Vec<(String, Tensor<f32>)> =
        run.classifier.named_params().into_iter().map(|(n, t)| (n, t.clone())).collect();
    params.extend(
        run.discriminator.named_params().into_iter().map(|(n, t)| (n, t.clone())),
    );
    save_checkpoint(&out.join("model.ckpt"), &params)?;
    Ok(())
}

// ── one-shot adaptation ──────────────────────────────────────────────

const ADAPT_DEFAULTS: &[(&str, &str)] = &[
    ("mnist_dir", ""),
    ("shift", "invert"),
    ("cases", "100"),
    ("steps", "10000"),
    ("restarts", "5"),
    ("adagrad_lr", "0.1"),
    ("lambda", "1.0"),
    ("sigma", "0.1"),
    ("theta_init", "1.0"),
    ("x_noise", "0.01"),
    ("prior_hidden", "32"),
    ("prior_layers", "3"),
    ("prior_updates", "3000"),
    ("prior_batch", "64"),
    ("prior_lr", "0.05"),
    ("cls_updates", "4000"),
    ("cls_batch", "100"),
    ("cls_lr", "0.05"),
    ("seed", "0"),
];

fn run_adapt(config_file: Option<&Path>, overrides: &[(String, String)], out: &Path) -> Result<()> {
    let cfg = RunConfig::resolve(ADAPT_DEFAULTS, config_file, overrides)?;
    write_resolved(&cfg, out)?;
    if cfg.get("mnist_dir").is_empty() {
        return Err(Error::Config("key 'mnist_dir' must name an IDX directory".into()));
    }
    let (train, test) = load_mnist_dir(cfg.get("mnist_dir"))?;
    let seed = cfg.get_u64("seed")?;
    let shift = cfg.get("shift").to_string();
    if shift != "invert" && shift != "identity" {
        return Err(Error::Config(format!("key 'shift': expected invert or identity, got '{}'", shift)));
    }

    let prior_cfg = crate::adapt::PriorConfig {
        hidden: cfg.get_usize("prior_hidden")?,
        layers: cfg.get_usize("prior_layers")?,
        init_scale: 1.0,
        updates: cfg.get_u64("prior_updates")?,
        batch: cfg.get_usize("prior_batch")?,
        lr: cfg.get_f64("prior_lr")?,
        seed,
    };
    let prior = crate::adapt::train_prior::<f32>(&train, &prior_cfg)?;

    let cls_batch = cfg.get_usize("cls_batch")?;
    let classifier = train_supervised::<f32>(
        &train,
        &[IMAGE_PIXELS, 300, 300, ganodm::DIGITS],
        cfg.get_u64("cls_updates")?,
        cls_batch,
        cfg.get_f64("cls_lr")? / cls_batch as f64,
        seed.wrapping_add(0xc1a5),
    )?;
    let classifier_error = ganodm::eval_error(&classifier, &test)?;

    let adapt_cfg = crate::adapt::AdaptConfig {
        steps: cfg.get_u64("steps")?,
        restarts: cfg.get_usize("restarts")?,
        lr: cfg.get_f64("adagrad_lr")?,
        epsilon: 1e-8,
        lambda: cfg.get_f64("lambda")?,
        sigma: cfg.get_f64("sigma")?,
        theta_init: cfg.get_f64("theta_init")?,
        x_init_noise: cfg.get_f64("x_noise")?,
        seed: seed.wrapping_add(0xada0),
    };

    let cases = cfg.get_usize("cases")?.min(test.len());
    let shifted: Vec<Vec<f32>> = (0..cases)
        .map(|i| {
            let img = test.image(i);
            match shift.as_str() {
                "invert" => img.iter().map(|&p| 1.0 - p).collect(),
                _ => img.to_vec(),
            }
        })
        .collect();
    let refs: Vec<&[f32]> = shifted.iter().map(|v| v.as_slice()).collect();
    let results = crate::adapt::run_adaptation(&prior, &refs, &adapt_cfg)?;

    let mut table =
        MetricsTable::new(&["case", "true_digit", "baseline_pred", "adapted_pred", "objective"]);
    let mut jsonl = String::new();
    let mut adapted_correct = 0usize;
    let mut baseline_correct = 0usize;
    for (i, result) in results.iter().enumerate() {
        let true_digit = test.label(i);
        let baseline_pred = ganodm::classify(&classifier, &shifted[i])?;
        let pixels: Vec<f32> = result.x_star.data().to_vec();
        let adapted_pred = ganodm::classify(&classifier, &pixels)?;
        if adapted_pred == true_digit {
            adapted_correct += 1;
        }
        if baseline_pred == true_digit {
            baseline_correct += 1;
        }
        table.push(vec![
            i.to_string(),
            true_digit.to_string(),
            baseline_pred.to_string(),
            adapted_pred.to_string(),
            fmt_f64(result.winning_objective),
        ]);
        let record = serde_json::json!({
            "case_id": i,
            "restart_objectives": result.restart_objectives,
            "winning_objective": result.winning_objective,
            "predicted_digit": adapted_pred,
            "true_digit": true_digit,
        });
        jsonl.push_str(&record.to_string());
        jsonl.push('\n');
    }
    table.write_csv(&out.join("metrics.csv"))?;
    write_file(&out.join("cases.jsonl"), jsonl.as_bytes())?;

    let adapted_accuracy = adapted_correct as f64 / cases as f64;
    let baseline_accuracy = baseline_correct as f64 / cases as f64;
    write_summary(
        &out.join("summary.json"),
        &serde_json::json!({
            "experiment": "adapt",
            "seed": seed,
            "config_hash": cfg.hash_hex(),
            "shift": shift,
            "cases": cases,
            "adapted_accuracy": adapted_accuracy,
            "baseline_accuracy": baseline_accuracy,
            "classifier_error": classifier_error,
        }),
    )?;

    let mut params: Vec<(String, Tensor<f32>)> =
        prior.named_params().into_iter().map(|(n, t)| (n, t.clone())).collect();
    params.extend(classifier.named_params().into_iter().map(|(n, t)| (n, t.clone())));
    save_checkpoint(&out.join("model.ckpt"), &params)?;
    Ok(())
}

/// Plain supervised training of the dense classifier with the squared loss
/// against one-hot targets (the anchor used across the experiments).
pub fn train_supervised<S: Scalar>(
    train: &MnistSet,
    widths: &[usize],
    updates: u64,
    batch: usize,
    lr: f64,
    seed: u64,
) -> Result<Classifier<S>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut classifier = Classifier::<S>::init(widths, 1.4, &mut rng)?;
    for _ in 0..updates {
        let mut images = Vec::with_capacity(batch * IMAGE_PIXELS);
        let mut targets = vec![S::zero(); batch * ganodm::DIGITS];
        for b in 0..batch {
            let i = rng.random_range(0..train.len());
            images.extend(train.image(i).iter().map(|&p| S::from_f64(p as f64)));
            targets[b * ganodm::DIGITS + train.label(i) as usize] = S::one();
        }
        let images = Tensor::from_vec(&[batch, IMAGE_PIXELS], images)?;
        let targets = Tensor::from_vec(&[batch, ganodm::DIGITS], targets)?;
        ganodm::supervised_step(&mut classifier, &images, &targets, lr)?;
    }
    Ok(classifier)
}

// ── gradient checking ────────────────────────────────────────────────

const GRADCHECK_DEFAULTS: &[(&str, &str)] = &[
    ("configs_per_kind", "10"),
    ("fd_epsilon", "1e-5"),
    ("threshold", "1e-5"),
    ("seed", "0"),
];

fn run_gradcheck(
    config_file: Option<&Path>,
    overrides: &[(String, String)],
    out: &Path,
) -> Result<()> {
    let cfg = RunConfig::resolve(GRADCHECK_DEFAULTS, config_file, overrides)?;
    write_resolved(&cfg, out)?;
    let results = crate::tensor::gradcheck::battery(
        cfg.get_u64("seed")?,
        cfg.get_usize("configs_per_kind")?,
        cfg.get_f64("fd_epsilon")?,
    );
    let mut table = MetricsTable::new(&["case", "max_relative_error"]);
    let mut worst = 0.0f64;
    let mut worst_case = String::new();
    for (name, err) in &results {
        table.push(vec![name.clone(), fmt_f64(*err)]);
        if *err > worst {
            worst = *err;
            worst_case = name.clone();
        }
    }
    table.write_csv(&out.join("metrics.csv"))?;
    let threshold = cfg.get_f64("threshold")?;
    write_summary(
        &out.join("summary.json"),
        &serde_json::json!({
            "experiment": "gradcheck",
            "seed": cfg.get_u64("seed")?,
            "config_hash": cfg.hash_hex(),
            "cases": results.len(),
            "max_relative_error": worst,
            "worst_case": worst_case,
            "threshold": threshold,
        }),
    )?;
    println!("gradcheck: {} cases, max relative error {:.3e}", results.len(), worst);
    if worst > threshold {
        return Err(Error::Check(format!(
            "gradcheck max relative error {:.3e} exceeds {:.1e} ({})",
            worst, threshold, worst_case
        )));
    }
    Ok(())
}

// ── data generation ──────────────────────────────────────────────────

const GEN_DATA_DEFAULTS: &[(&str, &str)] = &[
    ("corpus_bytes", "4000000"),
    ("train_count", "12000"),
    ("test_count", "2000"),
    ("seed", "0"),
];

fn run_gen_data(
    config_file: Option<&Path>,
    overrides: &[(String, String)],
    out: &Path,
) -> Result<()> {
    let cfg = RunConfig::resolve(GEN_DATA_DEFAULTS, config_file, overrides)?;
    write_resolved(&cfg, out)?;
    let seed = cfg.get_u64("seed")?;
    let corpus = generate_corpus_text(seed, cfg.get_usize("corpus_bytes")?);
    write_file(&out.join("corpus.txt"), corpus.as_bytes())?;

    let train = generate_digit_set(seed.wrapping_add(1), cfg.get_usize("train_count")?);
    let test = generate_digit_set(seed.wrapping_add(2), cfg.get_usize("test_count")?);
    write_idx(&out.join("train-images-idx3-ubyte"), &out.join("train-labels-idx1-ubyte"), &train)?;
    write_idx(&out.join("t10k-images-idx3-ubyte"), &out.join("t10k-labels-idx1-ubyte"), &test)?;

    let mut table = MetricsTable::new(&["file", "items"]);
    table.push(vec!["corpus.txt".into(), corpus.len().to_string()]);
    table.push(vec!["train".into(), train.len().to_string()]);
    table.push(vec!["test".into(), test.len().to_string()]);
    table.write_csv(&out.join("metrics.csv"))?;

    write_summary(
        &out.join("summary.json"),
        &serde_json::json!({
            "experiment": "gen-data",
            "seed": seed,
            "config_hash": cfg.hash_hex(),
            "corpus_bytes": corpus.len(),
            "train_count": train.len(),
            "test_count": test.len(),
        }),
    )?;
    Ok(())
}
