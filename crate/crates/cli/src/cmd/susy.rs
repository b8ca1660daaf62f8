//! The boson-fermion integral representation against the walk oracle. The
//! form side evaluates the susceptibility by Berezin integration of the
//! interacting superintegrand; the walk side is the closed radial reduction
//! on one site and a continuous-time Monte Carlo estimate on larger graphs.

use crate::manifest::{RunManifest, RunWriter};
use crate::{config_error, module_error, CliError, Result};
use clap::{Args, ValueEnum};
use std::path::Path;
use susy_saw::{evaluate_intrep, one_site_chi, QuadratureGrid, SiteGraph};
use wsaw_ct::{estimate_chi, CtGenerator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphKind {
    Single,
    Path2,
    Path3,
    Triangle,
}

#[derive(Debug, Args)]
pub struct SusyArgs {
    /// Interaction graph of the representation.
    #[arg(long, value_enum, default_value_t = GraphKind::Path2)]
    pub graph: GraphKind,
    #[arg(long, default_value_t = 1.0)]
    pub g: f64,
    #[arg(long, default_value_t = 1.0)]
    pub nu: f64,
    /// Quadrature nodes per real axis; the grid has nodes^(2 sites) points.
    #[arg(long, default_value_t = 16)]
    pub nodes: usize,
    /// Walk samples of the Monte Carlo side.
    #[arg(long, default_value_t = 200_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Time horizon of the walk-side integral.
    #[arg(long, default_value_t = 12.0)]
    pub horizon: f64,
    /// Time grid step of the walk-side integral.
    #[arg(long, default_value_t = 0.02)]
    pub grid_step: f64,
    /// Deterministic part of the agreement allowance.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
}

fn graph_for(kind: GraphKind) -> Result<(SiteGraph, &'static str)> {
    Ok(match kind {
        GraphKind::Single => (SiteGraph::single_site(), "single"),
        GraphKind::Path2 => (SiteGraph::path(2).map_err(|e| module_error("susy-saw", e))?, "path-2"),
        GraphKind::Path3 => (SiteGraph::path(3).map_err(|e| module_error("susy-saw", e))?, "path-3"),
        GraphKind::Triangle => (SiteGraph::triangle(), "triangle"),
    })
}

pub fn run(out: &Path, args: &SusyArgs) -> Result<RunManifest> {
    if args.samples == 0 {
        return Err(config_error("samples", "need at least one sample"));
    }
    if !(args.tol > 0.0) {
        return Err(config_error("tol", "tolerance must be positive"));
    }

    let (graph, label) = graph_for(args.graph)?;
    let grid = QuadratureGrid::for_weight(graph.sites(), args.g, args.nu, args.nodes)
        .map_err(|e| module_error("susy-saw", e))?;
    let form = evaluate_intrep(&graph, args.g, args.nu, &grid)
        .map_err(|e| module_error("susy-saw", e))?;

    // One site admits an exact radial reduction; larger graphs fall back to
    // the Monte Carlo walk with a four-sigma allowance.
    let (walk_chi, walk_stderr, walk_tail, walk_method, samples_used) = match args.graph {
        GraphKind::Single => {
            let chi = one_site_chi(args.g, args.nu).map_err(|e| module_error("susy-saw", e))?;
            (chi, 0.0, 0.0, "radial-quadrature", 0usize)
        }
        _ => {
            let generator = CtGenerator::graph(&graph.walk_generator())
                .map_err(|e| module_error("wsaw-ct", e))?;
            let est = estimate_chi(
                &generator,
                args.g,
                args.nu,
                args.horizon,
                args.grid_step,
                args.samples,
                args.seed,
            )
            .map_err(|e| module_error("wsaw-ct", e))?;
            (est.chi, est.stderr, est.tail_bound, "walk-monte-carlo", args.samples)
        }
    };

    let delta = form.chi - walk_chi;
    let allowance = 4.0 * walk_stderr + walk_tail + args.tol;
    let pass = delta.abs() <= allowance;

    let mut writer = RunWriter::create(out, "susy-check", args.seed)?;
    writer.record("graph", label);
    writer.record("g", args.g);
    writer.record("nu", args.nu);
    writer.record("nodes", args.nodes);
    writer.record("samples", args.samples);
    writer.record("seed", args.seed);
    writer.record("horizon", args.horizon);
    writer.record("grid_step", args.grid_step);
    writer.record("tol", args.tol);

    let report = serde_json::json!({
        "graph": label,
        "sites": graph.sites(),
        "g": args.g,
        "nu": args.nu,
        "nodes": args.nodes,
        "cutoff": grid.cutoff(),
        "form_chi": form.chi,
        "form_site_contributions": form.contributions,
        "form_tail_fraction": form.tail_fraction,
        "form_imag_residual": form.imag_residual,
        "walk_method": walk_method,
        "walk_chi": walk_chi,
        "walk_stderr": walk_stderr,
        "walk_tail_bound": walk_tail,
        "samples": samples_used,
        "seed": args.seed,
        "delta": delta,
        "allowance": allowance,
        "pass": pass,
    });
    writer.artifact("susy_check.jsonl", format!("{report}\n").as_bytes())?;
    let manifest = writer.finish()?;
    if pass {
        Ok(manifest)
    } else {
        Err(CliError::Check(format!(
            "form {} vs walk {walk_chi}: gap {:.3e} exceeds allowance {allowance:.3e}",
            form.chi,
            delta.abs()
        )))
    }
}
