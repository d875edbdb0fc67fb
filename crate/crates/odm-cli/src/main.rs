//! Batch runner: `odm <experiment> [--config FILE] [--key value ...] --out DIR`.
//!
//! Exit codes: 0 success; 2 usage or configuration error; 3 missing or
//! malformed data files; 4 training divergence; 1 other failures
//! (including a failed gradcheck threshold).

use odm_core::harness::{run_experiment, EXPERIMENTS};
use odm_core::Error;
use std::path::PathBuf;
use std::process::ExitCode;

const USAGE: &str = "\
usage: odm <experiment> [--config FILE] [--key value ...] --out DIR

experiments:
  cipher-char   character substitution cipher, dual autoencoder recovery
  cipher-word   word substitution cipher over the top-1000 vocabulary
  mnist-perm    pixel-permutation task on digit images
  gan-odm       GAN-trained classifier matching label window statistics
  adapt         one-shot domain adaptation with a next-row prior
  gradcheck     finite-difference verification of every op (wide precision)
  gen-data      generate the corpus and digit IDX files locally

options:
  --config FILE   key=value file merged below command-line overrides
  --out DIR       output directory (resolved config, metrics, summary,
                  checkpoint); created if missing
  --key value     override one config key (repeatable; see config.txt of a
                  previous run for the full key list)
  --help          print this text
";

struct Invocation {
    experiment: String,
    config: Option<PathBuf>,
    out: PathBuf,
    overrides: Vec<(String, String)>,
}

fn parse_args(args: &[String]) -> Result<Option<Invocation>, String> {
    if args.is_empty() || args[0] == "--help" || args[0] == "-h" {
        return Ok(None);
    }
    let experiment = args[0].clone();
    if experiment.starts_with('-') {
        return Err(format!("expected an experiment name, got '{}'", experiment));
    }
    if !EXPERIMENTS.contains(&experiment.as_str()) {
        return Err(format!(
            "unknown experiment '{}'; expected one of {}",
            experiment,
            EXPERIMENTS.join(", ")
        ));
    }
    let mut config = None;
    let mut out = None;
    let mut overrides = Vec::new();
    let mut i = 1;
    while i < args.len() {
        let flag = &args[i];
        if flag == "--help" || flag == "-h" {
            return Ok(None);
        }
        let Some(key) = flag.strip_prefix("--") else {
            return Err(format!("expected a --flag, got '{}'", flag));
        };
        if key.is_empty() {
            return Err("empty flag '--'".to_string());
        }
        let Some(value) = args.get(i + 1) else {
            return Err(format!("flag '--{}' needs a value", key));
        };
        match key {
            "config" => config = Some(PathBuf::from(value)),
            "out" => out = Some(PathBuf::from(value)),
            _ => overrides.push((key.to_string(), value.clone())),
        }
        i += 2;
    }
    let Some(out) = out else {
        return Err("missing required --out DIR".to_string());
    };
    Ok(Some(Invocation { experiment, config, out, overrides }))
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::InvalidArgument { .. } => 2,
        Error::Io { .. } | Error::BadData { .. } | Error::Checkpoint(_) => 3,
        Error::Diverged { .. } => 4,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let invocation = match parse_args(&args) {
        Ok(Some(inv)) => inv,
        Ok(None) => {
            print!("{}", USAGE);
            return ExitCode::SUCCESS;
        }
        Err(msg) => {
            eprintln!("error: {}", msg);
            eprint!("{}", USAGE);
            return ExitCode::from(2);
        }
    };
    match run_experiment(
        &invocation.experiment,
        invocation.config.as_deref(),
        &invocation.overrides,
        &invocation.out,
    ) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(exit_code_for(&e))
        }
    }
}
