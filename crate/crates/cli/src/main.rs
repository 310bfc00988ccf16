//! Command-line driver for the degreewise Brown-Peterson homology engine:
//! coefficient and homology tables, theorem verifiers, cohomology rank
//! checks, deterministic rendering, and a content-addressed disk cache.

mod cache;
mod render;

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use bp_homology::chain::{DegreewiseComplex, Homology, HomologyTable};
use bp_homology::coeff::{CoefficientScheme, PSeriesTable};
use bp_homology::cohomology;
use bp_homology::report::{Verdict, VerificationReport};
use bp_homology::verify;
use bp_homology::Prime;

use cache::{Cache, CacheFailure};
use render::Format;

#[derive(Parser)]
#[command(name = "bph", version, about = "Degreewise Brown-Peterson homology engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,

    /// Cache directory; overrides BPH_CACHE_DIR and the default under the
    /// system temp directory.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Disable the disk cache entirely.
    #[arg(long, global = true)]
    no_cache: bool,

    /// Recompute cached artifacts and fail unless the bytes match.
    #[arg(long, global = true)]
    audit_cache: bool,

    /// Allow p = 2, probing statements that are conjectural there.
    #[arg(long, global = true)]
    conjecture_probe: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print the p-series coefficient table with its structural checks.
    Pseries {
        #[command(flatten)]
        params: PrimeWindow,
        /// Use the generator-free table (additive p-series), the classical
        /// homology model.
        #[arg(long)]
        singular_model: bool,
    },
    /// Compute the homology table of the n-fold chain model.
    Homology {
        #[command(flatten)]
        params: PrimeWindow,
        /// Number of tensor factors.
        #[arg(long)]
        n: usize,
        /// One row per (degree, odd count) stratum instead of per degree.
        #[arg(long)]
        bigraded: bool,
        /// Use the generator-free table (additive p-series), the classical
        /// homology model.
        #[arg(long)]
        singular_model: bool,
    },
    /// Cross-check the chain pipeline against the presentation pipeline.
    #[command(subcommand)]
    Verify(VerifyCheck),
    /// Rank check behind the stacked comparison-map surjectivity.
    Vandermonde {
        /// The prime p (odd).
        #[arg(long)]
        p: u64,
        /// Number of factors.
        #[arg(long)]
        k: usize,
        /// Top total degree to check; defaults to 2p^k.
        #[arg(long)]
        window: Option<u32>,
    },
    /// Vanishing of n-fold products of degree-one classes.
    Stretch {
        /// The prime p (odd).
        #[arg(long)]
        p: u64,
        /// Number of factors.
        #[arg(long)]
        k: usize,
        /// Number of degree-one factors multiplied together.
        #[arg(long)]
        n: usize,
    },
    /// The p = 2 contrast computation: both pullback evaluations survive.
    P2Example,
}

#[derive(Subcommand)]
enum VerifyCheck {
    /// Direct-sum decomposition of homology against the word table.
    Main {
        #[command(flatten)]
        params: PrimeWindow,
        /// Number of tensor factors.
        #[arg(long)]
        n: usize,
    },
    /// Torsion product of the k-th tensor power against N^k (x) L_k.
    Tor {
        #[command(flatten)]
        params: PrimeWindow,
        /// Tensor power.
        #[arg(long)]
        k: usize,
    },
    /// Bigraded homology strata against N-letter counts of the word table.
    Level {
        #[command(flatten)]
        params: PrimeWindow,
        /// Number of tensor factors.
        #[arg(long)]
        n: usize,
    },
    /// Reduction kernel as the span of the higher generators.
    Kernel {
        #[command(flatten)]
        params: PrimeWindow,
        /// Tensor power.
        #[arg(long)]
        k: usize,
    },
    /// Annihilator-window evidence for generator multiplication.
    Squeeze {
        #[command(flatten)]
        params: PrimeWindow,
        /// Tensor power.
        #[arg(long)]
        k: usize,
        /// Generator level to multiply by; must satisfy 1 <= level < k.
        #[arg(long)]
        level: usize,
    },
}

#[derive(Args, Clone, Copy)]
struct PrimeWindow {
    /// The prime p.
    #[arg(long)]
    p: u64,
    /// Degree bound D; computed degrees stay strictly below it for homology
    /// and at most it for presented tables.
    #[arg(long)]
    max_degree: u32,
}

enum RunError {
    Usage(String),
    AuditMismatch(PathBuf),
}

impl From<bp_homology::Error> for RunError {
    fn from(err: bp_homology::Error) -> RunError {
        RunError::Usage(err.to_string())
    }
}

impl From<CacheFailure> for RunError {
    fn from(failure: CacheFailure) -> RunError {
        match failure {
            CacheFailure::Compute(err) => err.into(),
            CacheFailure::AuditMismatch(path) => RunError::AuditMismatch(path),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(RunError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(RunError::AuditMismatch(path)) => {
            eprintln!(
                "error: determinism audit failed: cached bytes at {} differ from the \
                 recomputation",
                path.display()
            );
            1
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32, RunError> {
    let format = cli.format;
    let probe = cli.conjecture_probe;
    let cache = if cli.no_cache {
        Cache::disabled()
    } else {
        Cache::new(Some(resolve_cache_dir(cli.cache_dir.clone())), cli.audit_cache)
    };
    match cli.command {
        Command::Pseries { params, singular_model } => {
            let prime = gated_prime(params.p, probe)?;
            let (table, payload) =
                load_pseries(&cache, prime, params.max_degree, singular_model)?;
            let props = table.check_properties();
            banner(prime, format);
            print!("{}", render::render_pseries(&table, &payload, &props, format));
            Ok(if props.passed() { 0 } else { 1 })
        }
        Command::Homology { params, n, bigraded, singular_model } => {
            let prime = gated_prime(params.p, probe)?;
            let (pseries, _) = load_pseries(&cache, prime, params.max_degree, singular_model)?;
            let scheme = pseries.scheme();
            let fields = [
                ("schema", "1".to_string()),
                ("artifact", "homology".to_string()),
                ("p", prime.get().to_string()),
                ("n", n.to_string()),
                ("degree_bound", params.max_degree.to_string()),
                ("scheme", scheme.to_string()),
            ];
            let validate = |text: &str| {
                HomologyTable::from_json(text).is_ok_and(|t| {
                    t.prime_value() == prime.get()
                        && t.factors() == n
                        && t.degree_bound() == params.max_degree
                })
            };
            let payload = cache.get_or_compute(&fields, &validate, &mut || {
                let complex = Arc::new(DegreewiseComplex::assemble(
                    Arc::clone(&pseries),
                    n,
                    params.max_degree,
                )?);
                Ok(Homology::compute(complex)?.table().to_json())
            })?;
            let table = HomologyTable::from_json(&payload)?;
            banner(prime, format);
            print!("{}", render::render_homology(&table, scheme, bigraded, format));
            Ok(0)
        }
        Command::Verify(check) => {
            let (params, report) = match check {
                VerifyCheck::Main { params, n } => {
                    let pseries = verify_pseries(probe, &cache, &params)?;
                    (params, verify::verify_theorem_main(pseries, n, params.max_degree)?)
                }
                VerifyCheck::Tor { params, k } => {
                    let pseries = verify_pseries(probe, &cache, &params)?;
                    (params, verify::verify_tor(pseries, k, params.max_degree)?)
                }
                VerifyCheck::Level { params, n } => {
                    let pseries = verify_pseries(probe, &cache, &params)?;
                    (params, verify::verify_level(pseries, n, params.max_degree)?)
                }
                VerifyCheck::Kernel { params, k } => {
                    let pseries = verify_pseries(probe, &cache, &params)?;
                    (params, verify::verify_kernel_lemma(pseries, k, params.max_degree)?)
                }
                VerifyCheck::Squeeze { params, k, level } => {
                    let pseries = verify_pseries(probe, &cache, &params)?;
                    (params, verify::squeeze_evidence(pseries, k, level, params.max_degree)?)
                }
            };
            banner(Prime::new(params.p)?, format);
            print!("{}", render::render_report(&report, format));
            Ok(verdict_exit(&report))
        }
        Command::Vandermonde { p, k, window } => {
            let prime = Prime::new(p)?;
            let window = match window {
                Some(w) => w,
                None => default_vandermonde_window(prime, k)?,
            };
            let report = cohomology::vandermonde_surjectivity(prime, k, window)?;
            print!("{}", render::render_report(&report, format));
            Ok(verdict_exit(&report))
        }
        Command::Stretch { p, k, n } => {
            let prime = Prime::new(p)?;
            let report = cohomology::stretch_check(prime, k, n)?;
            print!("{}", render::render_report(&report, format));
            Ok(verdict_exit(&report))
        }
        Command::P2Example => {
            let report = cohomology::p2_counterexample();
            print!("{}", render::render_report(&report, format));
            Ok(verdict_exit(&report))
        }
    }
}

/// Primes pass through; p = 2 needs the explicit probe flag because the
/// odd-prime statements are conjectural there.
fn gated_prime(p: u64, conjecture_probe: bool) -> Result<Prime, RunError> {
    let prime = Prime::new(p)?;
    if prime.get() == 2 && !conjecture_probe {
        return Err(RunError::Usage(
            "the verified statements are conjectural at p = 2; rerun with --conjecture-probe \
             to compute them anyway"
                .to_string(),
        ));
    }
    Ok(prime)
}

/// Conjecture-probe banner for p = 2 runs: on stdout for tables, on stderr
/// for machine formats so the payload stays parseable.
fn banner(prime: Prime, format: Format) {
    if prime.get() != 2 {
        return;
    }
    let line = "# conjecture probe: the statements checked below are conjectural at p = 2";
    if format == Format::Table {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn verdict_exit(report: &VerificationReport) -> i32 {
    match report.verdict {
        Verdict::Pass => 0,
        Verdict::Fail => 1,
        Verdict::Vacuous | Verdict::Inconclusive => {
            eprintln!("warning: {} verdict is {}", report.name, report.verdict);
            0
        }
    }
}

fn resolve_cache_dir(flag: Option<PathBuf>) -> PathBuf {
    if let Some(dir) = flag {
        return dir;
    }
    if let Some(dir) = std::env::var_os("BPH_CACHE_DIR") {
        return PathBuf::from(dir);
    }
    std::env::temp_dir().join("bph-cache")
}

fn verify_pseries(
    probe: bool,
    cache: &Cache,
    params: &PrimeWindow,
) -> Result<Arc<PSeriesTable>, RunError> {
    let prime = gated_prime(params.p, probe)?;
    let (pseries, _) = load_pseries(cache, prime, params.max_degree, false)?;
    Ok(pseries)
}

/// Load the p-series table through the cache; returns the parsed table and
/// its frozen JSON payload.
fn load_pseries(
    cache: &Cache,
    prime: Prime,
    degree_bound: u32,
    singular: bool,
) -> Result<(Arc<PSeriesTable>, String), RunError> {
    let scheme =
        if singular { CoefficientScheme::Singular } else { CoefficientScheme::Hazewinkel };
    let fields = [
        ("schema", "1".to_string()),
        ("artifact", "pseries".to_string()),
        ("p", prime.get().to_string()),
        ("degree_bound", degree_bound.to_string()),
        ("scheme", scheme.to_string()),
    ];
    let validate = |text: &str| {
        PSeriesTable::from_json(text).is_ok_and(|t| {
            t.prime() == prime && t.degree_bound() == degree_bound && t.scheme() == scheme
        })
    };
    let payload = cache.get_or_compute(&fields, &validate, &mut || {
        let table = if singular {
            PSeriesTable::singular(prime, degree_bound)?
        } else {
            PSeriesTable::compute(prime, degree_bound)?
        };
        Ok(table.to_json())
    })?;
    let table = PSeriesTable::from_json(&payload)?;
    Ok((Arc::new(table), payload))
}

fn default_vandermonde_window(prime: Prime, k: usize) -> Result<u32, RunError> {
    let base: u64 = prime.get();
    let mut window: u64 = 2;
    for _ in 0..k {
        window = window.saturating_mul(base);
        if window > u32::MAX as u64 {
            return Err(RunError::Usage(format!(
                "the default window 2*{base}^{k} overflows; pass --window explicitly"
            )));
        }
    }
    Ok(window as u32)
}
