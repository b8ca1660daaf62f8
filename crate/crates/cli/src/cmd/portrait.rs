use crate::manifest::{RunManifest, RunWriter};
use crate::{config_error, module_error, Result};
use clap::Args;
use rg_flow::{phase_portrait, FlowParams, PortraitClass};
use std::path::Path;

#[derive(Debug, Args)]
pub struct PortraitArgs {
    /// Field component count.
    #[arg(long, default_value_t = 1.0)]
    pub n: f64,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.55)]
    pub alpha: f64,
    /// Block base L.
    #[arg(long, default_value_t = 2)]
    pub l: usize,
    /// Constant damping coefficient.
    #[arg(long, default_value_t = 2.0)]
    pub a: f64,
    /// Starting quartic couplings, comma list.
    #[arg(long, value_delimiter = ',', default_value = "0.02,0.05,0.1,0.2,0.3,0.4")]
    pub s0_grid: Vec<f64>,
    /// Starting mass couplings, comma list.
    #[arg(long, value_delimiter = ',', default_value = "-0.2,-0.1,-0.05,0.0,0.05,0.1,0.2")]
    pub mu0_grid: Vec<f64>,
    /// Step cap per trajectory.
    #[arg(long, default_value_t = 40)]
    pub j_max: usize,
}

fn class_label(class: PortraitClass) -> &'static str {
    match class {
        PortraitClass::Converging => "converging",
        PortraitClass::MuDivergingUp => "mu-diverging-up",
        PortraitClass::MuDivergingDown => "mu-diverging-down",
    }
}

pub fn run(out: &Path, args: &PortraitArgs) -> Result<RunManifest> {
    if args.s0_grid.is_empty() || args.mu0_grid.is_empty() {
        return Err(config_error("s0-grid", "both starting grids need at least one point"));
    }
    if args.j_max == 0 {
        return Err(config_error("j-max", "need at least one flow step"));
    }

    let params = FlowParams::new(args.l, args.eps, args.alpha, args.n)
        .map_err(|e| module_error("rg-flow", e))?;
    let points = phase_portrait(&params, args.a, &args.s0_grid, &args.mu0_grid, args.j_max)
        .map_err(|e| module_error("rg-flow", e))?;

    let mut csv = String::from("s0,mu0,class,steps,s_end,mu_end\n");
    let mut counts = [0usize; 3];
    for point in &points {
        let end = point.trajectory.end();
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            point.s0,
            point.mu0,
            class_label(point.class),
            point.trajectory.states.len() - 1,
            end.s,
            end.mu
        ));
        counts[match point.class {
            PortraitClass::Converging => 0,
            PortraitClass::MuDivergingUp => 1,
            PortraitClass::MuDivergingDown => 2,
        }] += 1;
    }

    let mut writer = RunWriter::create(out, "phase-portrait", 0)?;
    writer.record("n", args.n);
    writer.record("eps", args.eps);
    writer.record("alpha", args.alpha);
    writer.record("l", args.l);
    writer.record("a", args.a);
    writer.record("s0_grid", &args.s0_grid);
    writer.record("mu0_grid", &args.mu0_grid);
    writer.record("j_max", args.j_max);
    writer.artifact("phase_portrait.csv", csv.as_bytes())?;

    let summary = serde_json::json!({
        "points": points.len(),
        "converging": counts[0],
        "mu_diverging_up": counts[1],
        "mu_diverging_down": counts[2],
    });
    writer.artifact("phase_portrait_summary.jsonl", format!("{summary}\n").as_bytes())?;
    writer.finish()
}
