//! Exact identities of the Gaussian engine: progressive integration over a
//! covariance split, reconstruction of the covariance from its scale
//! decomposition, and the zero-mode row sum, which must equal 1/m^2 because
//! the kinetic form annihilates constants.

use crate::manifest::{RunManifest, RunWriter};
use crate::{config_error, module_error, CliError, Result};
use clap::Args;
use gaussian_field::{
    beta_table, progressive_check, Covariance, CovarianceDecomposition, PolynomialObservable,
};
use lattice_core::TorusLattice;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::Path;

#[derive(Debug, Args)]
pub struct GaussianArgs {
    /// Torus dimension.
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    /// Block side; the period per axis is base^scales.
    #[arg(long, default_value_t = 2)]
    pub base: usize,
    #[arg(long, default_value_t = 4)]
    pub scales: usize,
    /// Kinetic exponent of (-laplacian)^(alpha/2) + m^2.
    #[arg(long, default_value_t = 2.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.1)]
    pub m2: f64,
    /// Mass of the second covariance in the progressive split.
    #[arg(long, default_value_t = 0.25)]
    pub m2_second: f64,
    /// Scales of the covariance decomposition.
    #[arg(long, default_value_t = 4)]
    pub n_scales: usize,
    /// Random polynomial observables probed by the progressive identity.
    #[arg(long, default_value_t = 20)]
    pub observables: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Bound on the progressive and reconstruction residuals.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Bound on the zero-mode row-sum residual.
    #[arg(long, default_value_t = 1e-10)]
    pub zero_mode_tol: f64,
    /// Also tabulate the running quartic damping coefficient per scale.
    #[arg(long)]
    pub emit_beta: bool,
    /// Component count entering the damping table.
    #[arg(long, default_value_t = 1.0)]
    pub n_components: f64,
    /// Epsilon entering the damping table.
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
}

/// Up to three monomials of degree at most four with small integer
/// coefficients; exact in f64 through every pairing sum.
fn random_observable(rng: &mut ChaCha8Rng, sites: usize) -> PolynomialObservable {
    let mut obs = PolynomialObservable::new();
    for _ in 0..rng.random_range(1..=3usize) {
        let degree = rng.random_range(1..=4usize);
        let monomial: Vec<usize> = (0..degree).map(|_| rng.random_range(0..sites)).collect();
        let coeff = rng.random_range(-3i64..=3) as f64;
        obs = obs.term(coeff, &monomial).expect("degree within cap");
    }
    obs
}

pub fn run(out: &Path, args: &GaussianArgs) -> Result<RunManifest> {
    if args.observables == 0 {
        return Err(config_error("observables", "need at least one observable"));
    }
    if args.n_scales > args.scales {
        return Err(config_error(
            "n-scales",
            format!("decomposition cannot exceed the torus scales ({})", args.scales),
        ));
    }
    if !(args.tol > 0.0) || !(args.zero_mode_tol > 0.0) {
        return Err(config_error("tol", "tolerances must be positive"));
    }

    let torus = TorusLattice::new(args.dim, args.base, args.scales)
        .map_err(|e| module_error("lattice-core", e))?;
    let sites = torus.site_count();
    let first = Covariance::build(torus.clone(), args.alpha, args.m2)
        .map_err(|e| module_error("gaussian-field", e))?;
    let second = Covariance::build(torus.clone(), args.alpha, args.m2_second)
        .map_err(|e| module_error("gaussian-field", e))?;

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut progressive_residual = 0.0f64;
    for _ in 0..args.observables {
        let obs = random_observable(&mut rng, sites);
        let residual = progressive_check(&first, &second, &obs)
            .map_err(|e| module_error("gaussian-field", e))?;
        progressive_residual = progressive_residual.max(residual);
    }

    let decomposition = CovarianceDecomposition::build(&first, args.base, args.n_scales)
        .map_err(|e| module_error("gaussian-field", e))?;
    let mut reconstruction_residual = 0.0f64;
    for x in 0..sites {
        let total: f64 = decomposition.pieces().iter().map(|p| p.row[x]).sum();
        reconstruction_residual = reconstruction_residual.max((total - first.row()[x]).abs());
    }

    let row_sum: f64 = first.row().iter().sum();
    let zero_mode_residual = (row_sum - 1.0 / args.m2).abs();

    let pass = progressive_residual <= args.tol
        && reconstruction_residual <= args.tol
        && zero_mode_residual <= args.zero_mode_tol;

    let mut writer = RunWriter::create(out, "gaussian-check", args.seed)?;
    writer.record("dim", args.dim);
    writer.record("base", args.base);
    writer.record("scales", args.scales);
    writer.record("alpha", args.alpha);
    writer.record("m2", args.m2);
    writer.record("m2_second", args.m2_second);
    writer.record("n_scales", args.n_scales);
    writer.record("observables", args.observables);
    writer.record("seed", args.seed);
    writer.record("tol", args.tol);
    writer.record("zero_mode_tol", args.zero_mode_tol);
    writer.record("emit_beta", args.emit_beta);
    writer.record("n_components", args.n_components);
    writer.record("eps", args.eps);

    let mut report = serde_json::json!({
        "dim": args.dim,
        "period": torus.period(),
        "alpha": args.alpha,
        "m2": args.m2,
        "m2_second": args.m2_second,
        "n_scales": args.n_scales,
        "observables": args.observables,
        "seed": args.seed,
        "progressive_residual": progressive_residual,
        "reconstruction_residual": reconstruction_residual,
        "zero_mode_residual": zero_mode_residual,
        "tol": args.tol,
        "zero_mode_tol": args.zero_mode_tol,
        "pass": pass,
    });

    if args.emit_beta {
        let table = beta_table(
            &torus,
            args.alpha,
            args.m2,
            args.base,
            args.n_scales,
            args.n_components,
            args.eps,
        )
        .map_err(|e| module_error("gaussian-field", e))?;
        let mut csv = String::from("j,beta_j\n");
        for (j, beta) in table.beta.iter().enumerate() {
            csv.push_str(&format!("{j},{beta}\n"));
        }
        writer.artifact("beta_table.csv", csv.as_bytes())?;
        let extra = report.as_object_mut().expect("report is an object");
        extra.insert("beta_stable_lo".into(), serde_json::json!(table.stable_lo));
        extra.insert("beta_stable_hi".into(), serde_json::json!(table.stable_hi));
        extra.insert("beta_tail_average".into(), serde_json::json!(table.tail_average));
    }

    writer.artifact("gaussian_check.jsonl", format!("{report}\n").as_bytes())?;
    let manifest = writer.finish()?;
    if pass {
        Ok(manifest)
    } else {
        Err(CliError::Check(format!(
            "progressive {progressive_residual:.3e}, reconstruction {reconstruction_residual:.3e}, \
             zero mode {zero_mode_residual:.3e} against tol {:.1e} / {:.1e}",
            args.tol, args.zero_mode_tol
        )))
    }
}
