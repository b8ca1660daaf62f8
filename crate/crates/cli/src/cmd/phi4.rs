//! Quartic-field susceptibility by two routes: full tensor quadrature of
//! the correlation sum, and the partition-function route through the mass
//! split. The routes describe one model only when the kinetic exponent is
//! 2, which is what makes their agreement a check rather than a tautology.

use crate::manifest::{RunManifest, RunWriter};
use crate::{config_error, module_error, CliError, Result};
use clap::Args;
use phi4_tiny::{chi_direct, chi_via_zn, QuadratureSpec, TinyTorus};
use std::path::Path;

#[derive(Debug, Args)]
pub struct Phi4Args {
    /// Torus periods per axis, comma list.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub periods: Vec<usize>,
    /// Quartic couplings of the comparison grid.
    #[arg(long, value_delimiter = ',', default_value = "0.3,0.6,1.0")]
    pub g_list: Vec<f64>,
    /// Bare masses of the comparison grid; the total mass adds --m2.
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.5,0.9")]
    pub nu_list: Vec<f64>,
    /// External mass split off the total.
    #[arg(long, default_value_t = 0.4)]
    pub m2: f64,
    /// Kinetic exponent of the partition-function route.
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    /// Quadrature nodes per field coordinate.
    #[arg(long, default_value_t = 80)]
    pub nodes: usize,
    /// Fail with the check exit code unless the routes agree to --tol.
    #[arg(long)]
    pub check: bool,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

pub fn run(out: &Path, args: &Phi4Args) -> Result<RunManifest> {
    if args.g_list.is_empty() || args.nu_list.is_empty() {
        return Err(config_error("g-list", "both coupling grids need at least one point"));
    }
    if !(args.m2 > 0.0) || !args.m2.is_finite() {
        return Err(config_error("m2", "external mass must be positive"));
    }
    if !(args.tol > 0.0) {
        return Err(config_error("tol", "tolerance must be positive"));
    }

    let torus = TinyTorus::new(&args.periods).map_err(|e| module_error("phi4-tiny", e))?;
    let mut csv = String::from("g,nu0,m2,alpha,chi_direct,chi_via_zn,delta\n");
    let mut worst = 0.0f64;
    for &g in &args.g_list {
        for &nu0 in &args.nu_list {
            let spec = QuadratureSpec::for_potential(g, nu0 + args.m2, args.nodes)
                .map_err(|e| module_error("phi4-tiny", e))?;
            let direct = chi_direct(&torus, g, nu0 + args.m2, 1, &spec)
                .map_err(|e| module_error("phi4-tiny", e))?;
            let via_zn = chi_via_zn(&torus, g, nu0, args.m2, args.alpha, &spec)
                .map_err(|e| module_error("phi4-tiny", e))?;
            let delta = via_zn - direct;
            worst = worst.max(delta.abs());
            csv.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                g, nu0, args.m2, args.alpha, direct, via_zn, delta
            ));
        }
    }

    let pass = worst <= args.tol;
    let mut writer = RunWriter::create(out, "phi4", 0)?;
    writer.record("periods", &args.periods);
    writer.record("g_list", &args.g_list);
    writer.record("nu_list", &args.nu_list);
    writer.record("m2", args.m2);
    writer.record("alpha", args.alpha);
    writer.record("nodes", args.nodes);
    writer.record("check", args.check);
    writer.record("tol", args.tol);
    writer.artifact("phi4_compare.csv", csv.as_bytes())?;

    let summary = serde_json::json!({
        "periods": &args.periods,
        "sites": torus.site_count(),
        "m2": args.m2,
        "alpha": args.alpha,
        "nodes": args.nodes,
        "grid_points": args.g_list.len() * args.nu_list.len(),
        "worst_delta": worst,
        "tol": args.tol,
        "pass": pass,
    });
    writer.artifact("phi4_summary.jsonl", format!("{summary}\n").as_bytes())?;
    let manifest = writer.finish()?;
    if !args.check || pass {
        Ok(manifest)
    } else {
        Err(CliError::Check(format!(
            "worst route disagreement {worst:.3e} exceeds tol {:.1e}",
            args.tol
        )))
    }
}
