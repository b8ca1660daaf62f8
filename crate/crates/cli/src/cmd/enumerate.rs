use crate::manifest::{RunManifest, RunWriter};
use crate::{config_error, module_error, Result};
use clap::Args;
use saw_enum::{connective_estimates, enumerate_saw};
use std::path::Path;
use std::time::Duration;

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    /// Lattice dimension, 1 through 5.
    #[arg(long)]
    pub d: usize,
    /// Longest walk length to count.
    #[arg(long)]
    pub n: usize,
    /// Wall-clock budget in seconds; counting stops after the last fully
    /// enumerated length once it is spent.
    #[arg(long)]
    pub budget_secs: Option<f64>,
}

pub fn run(out: &Path, args: &EnumerateArgs) -> Result<RunManifest> {
    if !(1..=5).contains(&args.d) {
        return Err(config_error("d", "dimension must be between 1 and 5"));
    }
    if args.n == 0 {
        return Err(config_error("n", "need at least one length"));
    }
    if let Some(budget) = args.budget_secs {
        if !(budget > 0.0) {
            return Err(config_error("budget-secs", "budget must be positive"));
        }
    }

    let budget = args.budget_secs.map(Duration::from_secs_f64);
    let result = enumerate_saw(args.d, args.n, budget).map_err(|e| module_error("saw-enum", e))?;
    let estimates = connective_estimates(&result.counts);

    let mut csv = String::from("n,c_n\n");
    for (i, count) in result.counts.iter().enumerate() {
        csv.push_str(&format!("{},{}\n", i + 1, count));
    }

    let mut writer = RunWriter::create(out, "enumerate", 0)?;
    writer.record("d", args.d);
    writer.record("n", args.n);
    writer.record("budget_secs", args.budget_secs);
    writer.artifact(&format!("enumerate_d{}.csv", args.d), csv.as_bytes())?;

    let summary = serde_json::json!({
        "d": args.d,
        "requested_n": args.n,
        "counted_n": result.completed_max(),
        "complete": result.complete,
        "mu_ratio": estimates.ratios.last(),
        "mu_root": estimates.roots.last(),
    });
    writer.artifact("enumerate_summary.jsonl", format!("{summary}\n").as_bytes())?;
    writer.finish()
}
