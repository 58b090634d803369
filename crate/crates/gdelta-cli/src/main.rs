//! Command-line frontend for the g(Δ,r)/h(Δ,r) toolkit.
//!
//! Exit codes: 0 success, 1 negative verification, 2 invalid input,
//! 3 resource cap exceeded, 4 internal verification failure.

use clap::{Parser, Subcommand, ValueEnum};
use deltamod::{
    bound_report, certify, compute_g, compute_h, compute_table, construct_basic, construct_f1,
    construct_f2, construct_f3, construct_thirty_s24, construct_vandermonde,
    count_hnf_closed_form, count_inequivalent, enumerate_hnf, matrix_to_string, oracle_g,
    ComputationResult, EnumMode, Error, HnfEnumConfig, Mode, ResultCache, SearchOptions,
};
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

#[derive(Parser)]
#[command(name = "gdelta-cli", version, about = "exact column-number functions of Δ-modular integer matrices")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliMode {
    Generic,
    Nongeneric,
}

impl From<CliMode> for Mode {
    fn from(m: CliMode) -> Mode {
        match m {
            CliMode::Generic => Mode::Generic,
            CliMode::Nongeneric => Mode::NonGeneric,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CountMode {
    /// Every Hermite normal form of determinant Δ.
    All,
    /// Only the Operation-1/2 reduced ones.
    Op,
    /// Equivalence classes.
    Classes,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Basic,
    F1,
    F2,
    F3,
    #[value(name = "30s24")]
    ThirtyS24,
    Vandermonde,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute g(Δ,r) (generic mode) or h(Δ,r) (nongeneric mode) exactly.
    Compute {
        #[arg(long)]
        delta: i64,
        #[arg(long)]
        rank: usize,
        #[arg(long, value_enum, default_value = "generic")]
        mode: CliMode,
        /// Byte-stable witnesses; false enables cross-instance pruning hints.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        deterministic: bool,
        /// Node limit per clique search.
        #[arg(long)]
        cap: Option<u64>,
        /// Wall-clock limit per clique search, in seconds.
        #[arg(long)]
        wall_budget: Option<u64>,
        /// h-mode: search the unrestricted universe (zero column and both
        /// signs kept) instead of the halved one; same value, slower.
        #[arg(long)]
        allow_negations: bool,
        /// Write the witness matrix here instead of stdout.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Persist/reuse results in this cache file.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Emit a CSV table of values and bounds for Δ = 2..=delta-max.
    Table {
        /// Comma-separated rank list, e.g. 2,3.
        #[arg(long, value_delimiter = ',')]
        rank: Vec<usize>,
        #[arg(long)]
        delta_max: i64,
        #[arg(long, value_enum, default_value = "generic")]
        mode: CliMode,
        /// Write to this file instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Certify a matrix from a text file; exit 0 iff it is Δ-modular with
    /// pairwise distinct columns.
    Verify {
        path: PathBuf,
        #[arg(long)]
        delta: i64,
    },
    /// Print one of the explicit witness families in the matrix text format.
    Construct {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        delta: Option<i64>,
        /// 30s24 family parameter (Δ = 30s+24); derived from --delta if omitted.
        #[arg(long)]
        s: Option<i64>,
        /// Vandermonde prime.
        #[arg(long)]
        p: Option<i64>,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Print closed-form bounds for (Δ, r) as one CSV row.
    Bounds {
        #[arg(long)]
        delta: i64,
        #[arg(long)]
        rank: usize,
    },
    /// Count Hermite normal forms of determinant Δ.
    HnfCount {
        #[arg(long)]
        delta: i64,
        #[arg(long)]
        rank: usize,
        #[arg(long, value_enum, default_value = "all")]
        mode: CountMode,
    },
    /// Brute-force reference value for tiny parameters; no normal-form theory.
    Oracle {
        #[arg(long)]
        delta: i64,
        #[arg(long)]
        rank: usize,
    },
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::ResourceCap { .. } => 3,
        Error::VerificationFailed(_) => 4,
        _ => 2,
    }
}

fn print_result(
    label: &str,
    res: &ComputationResult,
    witness_path: Option<&PathBuf>,
) -> deltamod::Result<()> {
    println!("{}({},{}) = {}", label, res.delta, res.r, res.value);
    eprintln!(
        "normal forms processed: {}, elapsed: {} ms",
        res.hnfs_processed,
        res.elapsed.as_millis()
    );
    match witness_path {
        Some(p) => fs::write(p, matrix_to_string(&res.witness))?,
        None => print!("{}", matrix_to_string(&res.witness)),
    }
    Ok(())
}

fn run(cmd: Cmd) -> deltamod::Result<u8> {
    match cmd {
        Cmd::Compute {
            delta,
            rank,
            mode,
            deterministic,
            cap,
            wall_budget,
            allow_negations,
            witness,
            cache,
        } => {
            let mode = Mode::from(mode);
            let mut options = SearchOptions::default();
            options.deterministic = deterministic;
            if let Some(n) = cap {
                options.node_cap = Some(n);
            }
            options.wall_budget = wall_budget.map(Duration::from_secs);
            options.allow_negations = allow_negations;
            let label = match mode {
                Mode::Generic => "g",
                Mode::NonGeneric => "h",
            };
            let mut store = match &cache {
                Some(p) => Some(ResultCache::open(p)?),
                None => None,
            };
            if let Some(hit) = store.as_ref().and_then(|c| c.get(delta, rank, mode)) {
                eprintln!("cache hit");
                print_result(label, &hit.clone(), witness.as_ref())?;
                return Ok(0);
            }
            let res = match mode {
                Mode::Generic => compute_g(delta, rank, &options)?,
                Mode::NonGeneric => compute_h(delta, rank, &options)?,
            };
            if let Some(c) = store.as_mut() {
                c.put(res.clone());
                c.save()?;
            }
            print_result(label, &res, witness.as_ref())?;
            Ok(0)
        }
        Cmd::Table { rank, delta_max, mode, csv } => {
            let options = SearchOptions::default();
            match csv {
                Some(p) => {
                    let mut f = fs::File::create(&p)?;
                    compute_table(&rank, delta_max, mode.into(), &options, &mut f)?;
                    f.flush()?;
                }
                None => {
                    let stdout = std::io::stdout();
                    let mut lock = stdout.lock();
                    compute_table(&rank, delta_max, mode.into(), &options, &mut lock)?;
                    lock.flush()?;
                }
            }
            Ok(0)
        }
        Cmd::Verify { path, delta } => {
            let text = fs::read_to_string(&path)?;
            let m = deltamod::matrix_from_str(&text)?;
            let rep = certify(&m, delta)?;
            println!("rank: {}", rep.rank);
            println!("max_abs_top_minor: {}", rep.max_abs_top_minor);
            println!("zero_top_minor_count: {}", rep.zero_top_minor_count);
            println!("is_generic: {}", rep.is_generic);
            println!("is_delta_submodular: {}", rep.is_delta_submodular);
            println!("is_delta_modular: {}", rep.is_delta_modular);
            println!("columns_distinct: {}", rep.columns_distinct);
            Ok(if rep.is_delta_modular && rep.columns_distinct { 0 } else { 1 })
        }
        Cmd::Construct { family, delta, s, p, rank } => {
            let need_delta = || {
                delta.ok_or_else(|| Error::InvalidParam("--delta is required for this family".into()))
            };
            let m = match family {
                Family::Basic => {
                    let r = rank
                        .ok_or_else(|| Error::InvalidParam("--rank is required for basic".into()))?;
                    construct_basic(need_delta()?, r)?
                }
                Family::F1 => construct_f1(need_delta()?)?,
                Family::F2 => construct_f2(need_delta()?)?,
                Family::F3 => construct_f3(need_delta()?)?,
                Family::ThirtyS24 => {
                    let s = match (s, delta) {
                        (Some(s), Some(d)) if 30 * s + 24 != d => {
                            return Err(Error::InvalidParam(format!(
                                "--s {} contradicts --delta {} (need Δ = 30s+24)",
                                s, d
                            )));
                        }
                        (Some(s), _) => s,
                        (None, Some(d)) if d >= 24 && (d - 24) % 30 == 0 => (d - 24) / 30,
                        (None, Some(d)) => {
                            return Err(Error::InvalidParam(format!(
                                "delta {} is not of the form 30s+24",
                                d
                            )));
                        }
                        (None, None) => {
                            return Err(Error::InvalidParam("need --s or --delta".into()))
                        }
                    };
                    construct_thirty_s24(s)?
                }
                Family::Vandermonde => {
                    let p = p
                        .ok_or_else(|| Error::InvalidParam("--p is required for vandermonde".into()))?;
                    let r = rank
                        .ok_or_else(|| Error::InvalidParam("--rank is required for vandermonde".into()))?;
                    construct_vandermonde(p, r)?
                }
            };
            print!("{}", matrix_to_string(&m));
            Ok(0)
        }
        Cmd::Bounds { delta, rank } => {
            let b = bound_report(delta, rank)?;
            let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
            println!(
                "{},{},{},{},{},{},{}",
                b.delta,
                b.r,
                opt(b.lower_bound),
                b.lower_provenance.unwrap_or_default(),
                opt(b.upper_linear),
                opt(b.upper_sublinear),
                opt(b.exact_if_forced)
            );
            Ok(0)
        }
        Cmd::HnfCount { delta, rank, mode } => {
            let count: u128 = match mode {
                CountMode::All => count_hnf_closed_form(delta, rank)?,
                CountMode::Op => {
                    let cfg = HnfEnumConfig { delta, r: rank, mode: EnumMode::OpReduced };
                    enumerate_hnf(&cfg)?.count() as u128
                }
                CountMode::Classes => count_inequivalent(delta, rank, 1_000_000)? as u128,
            };
            println!("{}", count);
            Ok(0)
        }
        Cmd::Oracle { delta, rank } => {
            let res = oracle_g(delta, rank)?;
            print_result("g", &res, None)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(error_code(&e))
        }
    }
}
