use clap::{Parser, Subcommand};
use lattice_rg::cmd;
use lattice_rg::manifest::RunManifest;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "lattice-rg",
    version,
    about = "Walk, field and flow computations with digest-pinned run manifests"
)]
struct Cli {
    /// Output directory for artifacts and the manifest log.
    #[arg(long, global = true, env = "LATTICE_RG_OUT", default_value = ".")]
    out: PathBuf,
    /// Cap on worker threads; subcommands parallelize internally.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact self-avoiding walk counts by backtracking enumeration.
    Enumerate(cmd::enumerate::EnumerateArgs),
    /// Pivot-chain estimate of the end-to-end distance exponent.
    Pivot(cmd::pivot::PivotArgs),
    /// Susceptibility of the continuous-time weakly self-avoiding walk.
    Wsaw(cmd::wsaw::WsawArgs),
    /// Exact identities of the Gaussian field engine.
    GaussianCheck(cmd::gaussian::GaussianArgs),
    /// Coefficient-level reblocking identity and factorization checks.
    PolymerCheck(cmd::polymer::PolymerArgs),
    /// Critical exponent from the two-coupling flow recursion.
    RgFlow(cmd::rgflow::RgFlowArgs),
    /// Flow classification over a grid of starting couplings.
    PhasePortrait(cmd::portrait::PortraitArgs),
    /// Quartic-field susceptibility by two independent routes.
    Phi4(cmd::phi4::Phi4Args),
    /// Boson-fermion integral representation against the walk oracle.
    SusyCheck(cmd::susy::SusyArgs),
}

fn dispatch(cli: &Cli) -> lattice_rg::Result<RunManifest> {
    let out = &cli.out;
    match &cli.command {
        Command::Enumerate(args) => cmd::enumerate::run(out, args),
        Command::Pivot(args) => cmd::pivot::run(out, args),
        Command::Wsaw(args) => cmd::wsaw::run(out, args),
        Command::GaussianCheck(args) => cmd::gaussian::run(out, args),
        Command::PolymerCheck(args) => cmd::polymer::run(out, args),
        Command::RgFlow(args) => cmd::rgflow::run(out, args),
        Command::PhasePortrait(args) => cmd::portrait::run(out, args),
        Command::Phi4(args) => cmd::phi4::run(out, args),
        Command::SusyCheck(args) => cmd::susy::run(out, args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads: need at least one thread");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: rayon: {e}");
            return ExitCode::from(3);
        }
    }
    match dispatch(&cli) {
        Ok(manifest) => {
            println!(
                "{}: {} artifact(s) in {}",
                manifest.subcommand,
                manifest.outputs.len(),
                cli.out.display()
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
