use std::process::ExitCode;

use affine_core::mutation::{Mutation, Site};
use affine_verify::{emit_report, parse_complex, render_table, run_suites, Suite, SuiteConfig, DEFAULT_SEED};
use clap::Parser;

/// Checks the affine algebra, loop-group phase space and momentum-map
/// identities on seeded random inputs.
///
/// Exit status: 0 when every case passes, 1 when any case fails, 2 on a
/// configuration error.
#[derive(Parser, Debug)]
#[command(name = "affine-verify", version)]
struct Cli {
    /// `sl2`, `so3` or a path to a JSON basis file.
    #[arg(long, default_value = "sl2")]
    algebra: String,
    /// Fourier band of random loops.
    #[arg(long, default_value_t = 4)]
    band: usize,
    /// Grid size for group loops (power of two, greater than 4 * band).
    #[arg(long, default_value_t = 128)]
    grid: usize,
    /// Samples per identity.
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Comma-separated levels, e.g. `1,1+0.5i`.
    #[arg(long, default_value = "1,1+0.5i", allow_hyphen_values = true)]
    k: String,
    #[arg(long, default_value_t = 1e-12)]
    tol_exact: f64,
    #[arg(long, default_value_t = 1e-8)]
    tol_grid: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol_fd: f64,
    /// Comma-separated suites: algebra, loop, affine, phase.
    #[arg(long)]
    suite: Option<String>,
    /// Run a single case by id, e.g. `phase/poisson-jacobi@k=1:7`.
    #[arg(long)]
    case: Option<String>,
    /// Write the JSON report to this path.
    #[arg(long)]
    report: Option<std::path::PathBuf>,
    /// Scale one formula coefficient by 1 + 1e-3 (fault injection).
    #[arg(long)]
    mutate: Option<Site>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

fn config(cli: &Cli) -> Result<SuiteConfig, String> {
    let k_values = cli.k.split(',').map(parse_complex).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
    let suites = match &cli.suite {
        Some(list) => list
            .split(',')
            .map(|s| s.trim().parse::<Suite>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?,
        None => Suite::ALL.to_vec(),
    };
    let cfg = SuiteConfig {
        algebra: cli.algebra.clone(),
        band: cli.band,
        grid: cli.grid,
        trials: cli.trials,
        seed: cli.seed,
        k_values,
        tol_exact: cli.tol_exact,
        tol_grid: cli.tol_grid,
        tol_fd: cli.tol_fd,
        suites,
        case: cli.case.clone(),
        mutation: cli.mutate.map(Mutation::new),
    };
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let report = match run_suites(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    print!("{}", render_table(&report));
    if let Some(path) = &cli.report {
        if let Err(e) = emit_report(&report, path) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
