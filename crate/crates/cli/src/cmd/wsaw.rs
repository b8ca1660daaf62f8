use crate::manifest::{RunManifest, RunWriter};
use crate::{config_error, module_error, Result};
use clap::Args;
use std::path::Path;
use wsaw_ct::{estimate_chi, CtGenerator, MAX_DIM};

#[derive(Debug, Args)]
pub struct WsawArgs {
    /// Lattice dimension of the nearest-neighbor walk.
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    /// Self-intersection penalty strength.
    #[arg(long)]
    pub g: f64,
    /// Killing rate; the susceptibility integral needs it positive.
    #[arg(long)]
    pub nu: f64,
    /// Truncation horizon of the time integral.
    #[arg(long, default_value_t = 12.0)]
    pub horizon: f64,
    /// Trapezoid step of the time integral.
    #[arg(long, default_value_t = 0.05)]
    pub grid_step: f64,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

pub fn run(out: &Path, args: &WsawArgs) -> Result<RunManifest> {
    if !(1..=MAX_DIM).contains(&args.d) {
        return Err(config_error("d", format!("dimension must be between 1 and {MAX_DIM}")));
    }
    if !(args.g >= 0.0) {
        return Err(config_error("g", "coupling must be nonnegative"));
    }
    if !(args.nu > 0.0) {
        return Err(config_error("nu", "killing rate must be positive"));
    }
    if args.samples == 0 {
        return Err(config_error("samples", "need at least one sample"));
    }
    if !(args.grid_step > 0.0 && args.grid_step <= args.horizon) {
        return Err(config_error("grid-step", "step must be positive and at most the horizon"));
    }

    let generator = CtGenerator::nearest_neighbor(args.d).map_err(|e| module_error("wsaw-ct", e))?;
    let estimate = estimate_chi(
        &generator,
        args.g,
        args.nu,
        args.horizon,
        args.grid_step,
        args.samples,
        args.seed,
    )
    .map_err(|e| module_error("wsaw-ct", e))?;

    let mut writer = RunWriter::create(out, "wsaw", args.seed)?;
    writer.record("d", args.d);
    writer.record("g", args.g);
    writer.record("nu", args.nu);
    writer.record("horizon", args.horizon);
    writer.record("grid_step", args.grid_step);
    writer.record("samples", args.samples);
    writer.record("seed", args.seed);

    let summary = serde_json::json!({
        "d": args.d,
        "g": estimate.g,
        "nu": estimate.nu,
        "chi": estimate.chi,
        "stderr": estimate.stderr,
        "tail_bound": estimate.tail_bound,
        "horizon": estimate.horizon,
        "grid_step": estimate.grid_step,
        "samples": estimate.samples,
        "seed": args.seed,
    });
    writer.artifact("wsaw_summary.jsonl", format!("{summary}\n").as_bytes())?;
    writer.finish()
}
