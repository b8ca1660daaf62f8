use crate::manifest::{RunManifest, RunWriter};
use crate::{config_error, module_error, Result};
use clap::Args;
use std::path::Path;
use walk_mc::{estimate_nu, ChainSettings, MAX_DIM};

#[derive(Debug, Args)]
pub struct PivotArgs {
    /// Lattice dimension, 1 through 5.
    #[arg(long)]
    pub d: usize,
    /// Walk lengths of the mean-square-displacement ladder; at least four.
    #[arg(long, value_delimiter = ',', default_value = "64,128,256,512,1024")]
    pub lengths: Vec<usize>,
    /// Accepted pivots discarded before measuring, per length.
    #[arg(long, default_value_t = 2_000)]
    pub burn_in: usize,
    /// Accepted pivots measured per length.
    #[arg(long, default_value_t = 100_000)]
    pub min_accepted: usize,
    /// Proposal floor per length; zero defers to the acceptance target.
    #[arg(long, default_value_t = 0)]
    pub min_proposals: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

pub fn run(out: &Path, args: &PivotArgs) -> Result<RunManifest> {
    if !(1..=MAX_DIM).contains(&args.d) {
        return Err(config_error("d", format!("dimension must be between 1 and {MAX_DIM}")));
    }
    if args.lengths.len() < 4 {
        return Err(config_error("lengths", "the exponent fit needs at least four lengths"));
    }
    if args.min_accepted == 0 {
        return Err(config_error("min-accepted", "need at least one accepted pivot"));
    }

    let settings = ChainSettings {
        burn_in_accepted: args.burn_in,
        min_accepted: args.min_accepted,
        min_proposals: args.min_proposals,
        seed: args.seed,
    };
    let estimate =
        estimate_nu(args.d, &args.lengths, &settings).map_err(|e| module_error("walk-mc", e))?;

    let mut csv = String::from("len,mean_r2,stderr_r2,accepted,proposals\n");
    for point in &estimate.per_length {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            point.len, point.mean_r2, point.stderr_r2, point.accepted, point.proposals
        ));
    }

    let mut writer = RunWriter::create(out, "pivot", args.seed)?;
    writer.record("d", args.d);
    writer.record("lengths", &args.lengths);
    writer.record("burn_in", args.burn_in);
    writer.record("min_accepted", args.min_accepted);
    writer.record("min_proposals", args.min_proposals);
    writer.record("seed", args.seed);
    writer.artifact(&format!("pivot_d{}.csv", args.d), csv.as_bytes())?;

    let summary = serde_json::json!({
        "d": estimate.dim,
        "nu": estimate.nu,
        "nu_stderr": estimate.nu_stderr,
        "slope": estimate.slope,
        "intercept": estimate.intercept,
        "seed": args.seed,
    });
    writer.artifact(
        &format!("pivot_d{}_summary.jsonl", args.d),
        format!("{summary}\n").as_bytes(),
    )?;
    writer.finish()
}
