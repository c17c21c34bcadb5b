//! Command-line surface: every computation exposed as a subcommand with
//! deterministic, machine-readable output.
//!
//! Exit codes: 0 on success, 1 on invalid input or configuration, 2 when
//! a verification the command performs fails. Output for identical inputs
//! and cache state is byte-identical; the thread pool size never affects
//! what is printed.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_integer::Integer;
use serde_json::json;

use crate::covering;
use crate::density;
use crate::error::Error;
use crate::factor::Effort;
use crate::gaussian::GInt;
use crate::orders::Factorizer;
use crate::primes;
use crate::series::{self, SumLedger};
use crate::verify;
use crate::constants;

/// Environment variable consulted for the cache path when `--cache` is
/// not given.
pub const CACHE_ENV_VAR: &str = "GAUSSIAN_ROMANOV_CACHE";

#[derive(Parser)]
#[command(
    name = "gaussian-romanov",
    version,
    about = "Exact and certified computations around sums of a Gaussian prime and a power of 1+i"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Output format, where the command supports more than one
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Multiplier on the deterministic factoring budget
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    effort: u64,
    /// Factorization cache file; defaults to $GAUSSIAN_ROMANOV_CACHE
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Worker threads (default: one per core); never changes the output
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..=4096))]
    threads: Option<u64>,
    /// Reserved for randomized exploration tooling; the shipped
    /// subcommands are deterministic and ignore it
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Prime elements of the Gaussian integers
    Primes {
        #[command(subcommand)]
        action: PrimesCmd,
    },
    /// Multiplicative orders of 1+i modulo primes
    Orders {
        #[command(subcommand)]
        action: OrdersCmd,
    },
    /// The order-classified series: exact partial sums and the tail
    Romanov {
        #[command(subcommand)]
        action: RomanovCmd,
    },
    /// Representation-density scans over a disk
    Density {
        #[command(subcommand)]
        action: DensityCmd,
    },
    /// Prime-pair counts against the sieve corridor
    Sieve {
        #[command(subcommand)]
        action: SieveCmd,
    },
    /// Covering systems and the non-representable progression
    Covering {
        #[command(subcommand)]
        action: CoveringCmd,
    },
    /// Analytic constants and the assembled density bound
    Constants {
        #[command(subcommand)]
        action: ConstantsCmd,
    },
    /// Acceptance checks
    Verify {
        #[command(subcommand)]
        action: VerifyCmd,
    },
}

#[derive(Subcommand)]
enum PrimesCmd {
    /// List the prime elements with house at most x
    List {
        #[arg(long, default_value_t = 10.0)]
        x: f64,
    },
    /// Count the prime elements with house at most x
    Count {
        #[arg(long, default_value_t = 10.0)]
        x: f64,
    },
}

#[derive(Subcommand)]
enum OrdersCmd {
    /// Primes grouped by the exact order of 1+i, for orders up to emax
    Table {
        #[arg(long, default_value_t = 24, value_parser = clap::value_parser!(u64).range(1..))]
        emax: u64,
    },
}

#[derive(Subcommand)]
enum RomanovCmd {
    /// Exact ledger of the class products, series slices and partials
    Sum {
        #[arg(long, default_value_t = 24, value_parser = clap::value_parser!(u64).range(1..))]
        emax: u64,
    },
    /// Closed-form tail integral from x0
    Tail {
        #[arg(long, default_value_t = 200.0)]
        x0: f64,
        /// Unweighted partial sum at x0, subtracted as E/x0
        #[arg(long, default_value_t = 3.33018)]
        e_at_x0: f64,
        /// Coefficient of log^2 t in the integrand numerator
        #[arg(long, default_value_t = 3.997993, allow_hyphen_values = true)]
        a: f64,
        /// Coefficient of log t in the integrand numerator
        #[arg(long, default_value_t = -7.503313, allow_hyphen_values = true)]
        b: f64,
        /// Constant term in the integrand numerator
        #[arg(long, default_value_t = 3.5206, allow_hyphen_values = true)]
        c: f64,
        /// Prefactor applied to the whole integral
        #[arg(long, default_value_t = 0.999749)]
        scale: f64,
    },
}

#[derive(Subcommand)]
enum DensityCmd {
    /// Scan the disk house <= x for representations
    Scan {
        #[arg(long, default_value_t = 100.0)]
        x: f64,
        /// Also admit the exponent k = 0
        #[arg(long)]
        include_zero_exponent: bool,
    },
}

#[derive(Subcommand)]
enum SieveCmd {
    /// Pair counts for the power-difference samples at radius x
    Check {
        #[arg(long, default_value_t = 500.0)]
        x: f64,
    },
}

#[derive(Subcommand)]
enum CoveringCmd {
    /// Verify the six-congruence covering system
    Verify,
    /// Build the obstructed progression; optionally scan a disk
    #[command(alias = "build-obstruction")]
    Obstruction {
        /// Scan radius (house bound); omit to skip the scan
        #[arg(long, alias = "scan-radius")]
        radius: Option<f64>,
        /// Exponent cap for the scan (default derived from the radius)
        #[arg(long)]
        kcap: Option<u64>,
    },
}

#[derive(Subcommand)]
enum ConstantsCmd {
    /// All analytic constants and the assembled density bound
    Report {
        /// Weighted series partial entering the assembly
        #[arg(long, default_value_t = 1.27095)]
        s_head: f64,
        /// Tail-integral value entering the assembly
        #[arg(long, default_value_t = 0.57749)]
        s_tail: f64,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Run the fifteen acceptance checks
    All,
}

/// Dispatch failure, carrying the exit code distinction.
enum CliError {
    /// Bad input or configuration: exit 1.
    Validation(String),
    /// A performed verification failed: exit 2.
    Verification(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        match e {
            Error::ObstructionViolated { .. } => CliError::Verification(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

/// Parse the process arguments and run; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.common.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n as usize)
                .build();
            match pool {
                Ok(pool) => pool.install(|| execute(&cli)),
                Err(e) => Err(CliError::Validation(format!("thread pool: {e}"))),
            }
        }
        None => execute(&cli),
    };
    match outcome {
        Ok(()) => 0,
        Err(CliError::Validation(message)) => {
            eprintln!("error: {message}");
            1
        }
        Err(CliError::Verification(message)) => {
            eprintln!("verification failure: {message}");
            2
        }
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Primes { action } => primes_cmd(action, &cli.common),
        Command::Orders { action } => orders_cmd(action, &cli.common),
        Command::Romanov { action } => romanov_cmd(action, &cli.common),
        Command::Density { action } => density_cmd(action, &cli.common),
        Command::Sieve { action } => sieve_cmd(action, &cli.common),
        Command::Covering { action } => covering_cmd(action, &cli.common),
        Command::Constants { action } => constants_cmd(action, &cli.common),
        Command::Verify { action } => verify_cmd(action, &cli.common),
    }
}

fn format_or(common: &Common, default: Format) -> Format {
    common.format.unwrap_or(default)
}

fn require_finite(name: &str, value: f64, minimum: f64) -> Result<(), CliError> {
    if !value.is_finite() || value < minimum {
        return Err(CliError::Validation(format!(
            "--{name} must be a finite number >= {minimum}, got {value}"
        )));
    }
    Ok(())
}

fn factorizer(common: &Common) -> Result<Factorizer, CliError> {
    let effort = Effort::scaled(common.effort);
    let cache_path = common
        .cache
        .clone()
        .or_else(|| std::env::var_os(CACHE_ENV_VAR).map(PathBuf::from));
    match cache_path {
        Some(path) => Ok(Factorizer::with_cache(effort, path)?),
        None => Ok(Factorizer::new(effort)),
    }
}

fn prime_row(z: &GInt) -> serde_json::Value {
    let record = primes::PrimeRecord::from_prime_element(z);
    json!({
        "element": z.to_string(),
        "norm": record.norm.to_string(),
        "degree": record.degree,
    })
}

fn primes_cmd(action: &PrimesCmd, common: &Common) -> Result<(), CliError> {
    match action {
        PrimesCmd::List { x } => {
            require_finite("x", *x, 0.0)?;
            let elements = primes::primes_in_disk(*x);
            match format_or(common, Format::Csv) {
                Format::Csv => {
                    println!("re,im,norm,degree");
                    for z in &elements {
                        let record = primes::PrimeRecord::from_prime_element(z);
                        println!("{},{},{},{}", z.re(), z.im(), record.norm, record.degree);
                    }
                }
                Format::Json => {
                    let rows: Vec<_> = elements.iter().map(prime_row).collect();
                    println!("{}", serde_json::to_string_pretty(&rows).unwrap());
                }
            }
        }
        PrimesCmd::Count { x } => {
            require_finite("x", *x, 0.0)?;
            let count = primes::count_primes_in_disk(*x);
            match format_or(common, Format::Json) {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "x": x,
                        "count": count.to_string(),
                    }))
                    .unwrap()
                ),
                Format::Csv => {
                    println!("x,count");
                    println!("{x},{count}");
                }
            }
        }
    }
    Ok(())
}

/// Persist complete factorizations for every exponent up to `emax`.
/// After `warm_up` this is a cheap merge of memoized cyclotomic pieces,
/// and it is what makes `--cache` useful across runs.
fn persist_through(fz: &mut Factorizer, emax: u64) -> Result<(), CliError> {
    for e in 1..=emax {
        fz.full_factorization(e)?;
    }
    Ok(())
}

fn orders_cmd(action: &OrdersCmd, common: &Common) -> Result<(), CliError> {
    let OrdersCmd::Table { emax } = action;
    let mut fz = factorizer(common)?;
    fz.warm_up(*emax);
    persist_through(&mut fz, *emax)?;
    match format_or(common, Format::Csv) {
        Format::Csv => {
            println!("order,re,im,norm,complete");
            for e in 1..=*emax {
                let (records, complete) = fz.primes_of_order(e);
                for rec in records {
                    println!(
                        "{e},{},{},{},{complete}",
                        rec.generator.re(),
                        rec.generator.im(),
                        rec.norm
                    );
                }
            }
        }
        Format::Json => {
            let mut rows = Vec::new();
            for e in 1..=*emax {
                let (records, complete) = fz.primes_of_order(e);
                rows.push(json!({
                    "order": e,
                    "complete": complete,
                    "primes": records
                        .iter()
                        .map(|rec| prime_row(&rec.generator))
                        .collect::<Vec<_>>(),
                }));
            }
            println!("{}", serde_json::to_string_pretty(&rows).unwrap());
        }
    }
    Ok(())
}

fn rational_string(r: &num_rational::BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn romanov_cmd(action: &RomanovCmd, common: &Common) -> Result<(), CliError> {
    match action {
        RomanovCmd::Sum { emax } => {
            let mut fz = factorizer(common)?;
            let ledger = SumLedger::build(*emax, &mut fz)?;
            persist_through(&mut fz, *emax)?;
            match format_or(common, Format::Csv) {
                Format::Csv => print!("{}", ledger.to_csv()),
                Format::Json => {
                    let mut partial = num_rational::BigRational::from_integer(0.into());
                    let rows: Vec<_> = ledger
                        .entries()
                        .iter()
                        .map(|entry| {
                            partial += &entry.g
                                / num_rational::BigRational::from_integer(entry.e.into());
                            json!({
                                "e": entry.e,
                                "f": rational_string(&entry.f),
                                "g": rational_string(&entry.g),
                                "partial_sum": rational_string(&partial),
                                "complete": entry.complete,
                            })
                        })
                        .collect();
                    println!("{}", serde_json::to_string_pretty(&rows).unwrap());
                }
            }
        }
        RomanovCmd::Tail {
            x0,
            e_at_x0,
            a,
            b,
            c,
            scale,
        } => {
            require_finite("x0", *x0, 1.0)?;
            let tail = series::tail_bound_assembly(*x0, *e_at_x0, *a, *b, *c, *scale);
            match format_or(common, Format::Json) {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "x0": x0,
                        "e_at_x0": e_at_x0,
                        "a": a,
                        "b": b,
                        "c": c,
                        "scale": scale,
                        "tail_bound": tail,
                    }))
                    .unwrap()
                ),
                Format::Csv => {
                    println!("x0,e_at_x0,a,b,c,scale,tail_bound");
                    println!("{x0},{e_at_x0},{a},{b},{c},{scale},{tail}");
                }
            }
        }
    }
    Ok(())
}

fn density_cmd(action: &DensityCmd, common: &Common) -> Result<(), CliError> {
    let DensityCmd::Scan {
        x,
        include_zero_exponent,
    } = action;
    require_finite("x", *x, 16.0)?;
    let report = density::density_scan_with(*x, *include_zero_exponent);
    match format_or(common, Format::Json) {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
        Format::Csv => {
            println!("x,l_max,sum_r,sum_r2,sum_eta,even_norm_distinct,lattice,eta_density,cs_bound");
            println!(
                "{},{},{},{},{},{},{},{},{}",
                report.x,
                report.l_max,
                report.sum_r,
                report.sum_r2,
                report.sum_eta,
                report.even_norm_distinct,
                report.lattice,
                report.eta_density,
                report.cs_bound
            );
        }
    }
    Ok(())
}

fn sieve_cmd(action: &SieveCmd, common: &Common) -> Result<(), CliError> {
    let SieveCmd::Check { x } = action;
    require_finite("x", *x, 16.0)?;
    let samples = density::power_difference_samples(*x);
    if samples.is_empty() {
        return Err(CliError::Validation(format!(
            "no power-difference samples exist at x = {x}; increase --x"
        )));
    }
    let rows = density::sieve_bound_check(*x, &samples);
    match format_or(common, Format::Json) {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rows).unwrap()),
        Format::Csv => {
            println!("zeta,pairs,ratio,within_kappa");
            for row in &rows {
                println!("{},{},{},{}", row.zeta, row.pairs, row.ratio, row.within_kappa);
            }
        }
    }
    if rows.iter().all(|r| r.within_kappa) {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "{} of {} samples exceed the sieve constant",
            rows.iter().filter(|r| !r.within_kappa).count(),
            rows.len()
        )))
    }
}

fn covering_cmd(action: &CoveringCmd, common: &Common) -> Result<(), CliError> {
    match action {
        CoveringCmd::Verify => {
            let system = [(0u64, 2u64), (0, 3), (1, 4), (3, 8), (7, 12), (23, 24)];
            let period = system.iter().fold(1u64, |l, &(_, m)| l.lcm(&m));
            let (covers, witness) = covering::verify_covering(&system);
            match witness {
                None => println!("covering: {covers}, lcm={period}"),
                Some(w) => println!("covering: {covers}, lcm={period}, witness={w}"),
            }
            if covers {
                Ok(())
            } else {
                Err(CliError::Verification(
                    "the congruence system does not cover".to_string(),
                ))
            }
        }
        CoveringCmd::Obstruction { radius, kcap } => {
            let obs = covering::build_obstruction()?;
            let divisibility = covering::obstruction_divisibility_check(&obs, 48);
            let scan_value = match radius {
                Some(b) => {
                    require_finite("radius", *b, 0.0)?;
                    let cap = kcap.unwrap_or_else(|| covering::default_k_cap(&obs, *b));
                    let exceptions = covering::scan_obstruction(&obs, *b, cap)?;
                    let class = covering::class_density_report(&obs, *b)?;
                    json!({
                        "radius": b,
                        "k_cap": cap.to_string(),
                        "exceptions": exceptions,
                        "class_density": class,
                    })
                }
                None => serde_json::Value::Null,
            };
            let report = json!({
                "x0": obs.x0.to_string(),
                "modulus": obs.modulus.to_string(),
                "modulus_norm": obs.modulus.norm().to_string(),
                "x0_norm": obs.x0.norm().to_string(),
                "pairs": obs
                    .pairs
                    .iter()
                    .map(|(a, m, p)| json!({
                        "exponent_residue": a,
                        "order": m,
                        "prime": p.to_string(),
                    }))
                    .collect::<Vec<_>>(),
                "divisibility_through_48": divisibility,
                "modulus_note": obs.modulus_report(),
                "scan": scan_value,
            });
            match format_or(common, Format::Json) {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
                Format::Csv => {
                    return Err(CliError::Validation(
                        "the obstruction report is structured; use --format json".to_string(),
                    ))
                }
            }
            if divisibility {
                Ok(())
            } else {
                Err(CliError::Verification(
                    "divisibility check failed through k = 48".to_string(),
                ))
            }
        }
    }
}

fn constants_cmd(action: &ConstantsCmd, common: &Common) -> Result<(), CliError> {
    let ConstantsCmd::Report { s_head, s_tail } = action;
    require_finite("s-head", *s_head, 0.0)?;
    require_finite("s-tail", *s_tail, 0.0)?;
    let report = constants::assemble_density_bound(*s_head, *s_tail);
    match format_or(common, Format::Json) {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
        Format::Csv => {
            return Err(CliError::Validation(
                "the constants report is structured; use --format json".to_string(),
            ))
        }
    }
    Ok(())
}

fn verify_cmd(action: &VerifyCmd, common: &Common) -> Result<(), CliError> {
    let VerifyCmd::All = action;
    let results = verify::run_all();
    match common.format {
        None => {
            for r in &results {
                let status = if r.passed { "PASS" } else { "FAIL" };
                println!("criterion {:02} {}: {status} ({})", r.id, r.name, r.details);
            }
        }
        Some(Format::Json) => {
            let rows: Vec<_> = results
                .iter()
                .map(|r| {
                    json!({
                        "id": r.id,
                        "name": r.name,
                        "passed": r.passed,
                        "details": r.details,
                    })
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&rows).unwrap());
        }
        Some(Format::Csv) => {
            println!("id,name,passed");
            for r in &results {
                println!("{},{},{}", r.id, r.name, r.passed);
            }
        }
    }
    if verify::all_passed(&results) {
        Ok(())
    } else {
        let failed: Vec<String> = results
            .iter()
            .filter(|r| !r.passed)
            .map(|r| format!("{:02} {}", r.id, r.name))
            .collect();
        Err(CliError::Verification(format!(
            "criteria failed: {}",
            failed.join(", ")
        )))
    }
}
