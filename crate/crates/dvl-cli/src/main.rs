//! `dvl` — decide whether the Dirichlet series of a rational periodic
//! function vanishes at positive integers, exactly.
//!
//! Subcommands: `check` (criterion verdict as a JSON report), `search`
//! (exhaustive ±1 family sweeps), `eval` (numeric `L(s,f)` oracles),
//! `regress` (bundled regressions), `threshold`, `chars`.
//!
//! Verdict exit codes, stable for shell pipelines:
//! `0` nonvanishing, `10` vanishes, `11` divergent, `2` malformed input.

mod regress;

use anyhow::Context;
use clap::{Parser, Subcommand};
use dvl_core::characters::shared_table;
use dvl_core::numeric::{l1_numeric, ls_numeric};
use dvl_core::periodic::{rational_to_string, PeriodicFunction};
use dvl_core::search::{
    candidate_bits, run_search, run_search_pruned, Family, SearchSpec, SEARCH_BITS_LIMIT,
};
use dvl_core::vanishing::{decide_vanishing, erdos_prime_threshold, log_coefficients, Verdict};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_NONVANISHING: u8 = 0;
const EXIT_PARSE: u8 = 2;
const EXIT_VANISHES: u8 = 10;
const EXIT_DIVERGENT: u8 = 11;

#[derive(Parser)]
#[command(name = "dvl", version, about = "Exact vanishing criterion for Dirichlet series of periodic functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide vanishing of L(k,f); prints the full report as JSON
    Check {
        /// Function file: {"period": N, "values": [v_1, ..., v_N]}
        path: PathBuf,
        /// Evaluate at s = k (k > 1 verdicts are conditional on Chowla-Milnor)
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Exhaustive search over a ±1 family for vanishing L(1,f)
    Search {
        /// Period N of the candidate functions
        #[arg(long)]
        period: u64,
        /// erdos (±1 on 1..N-1, 0 at N) or pm1 (±1 everywhere)
        #[arg(long, default_value = "erdos")]
        family: String,
        /// Evaluate the criterion only on zero-sum candidates
        #[arg(long)]
        zero_sum: bool,
        /// Worker threads (default: DVL_WORKERS or all cores)
        #[arg(long, env = "DVL_WORKERS")]
        workers: Option<usize>,
        /// Divisor-slice pruned sweep (required beyond the 2^28 guard)
        #[arg(long)]
        pruned: bool,
        /// Directory receiving one function file per vanishing candidate
        #[arg(long, default_value = "search_out")]
        out: PathBuf,
        /// Machine-readable summary instead of prose
        #[arg(long)]
        json: bool,
    },
    /// Numeric L(s,f); at s = 1 also prints the exact log expansion
    Eval {
        path: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
    },
    /// Run the bundled regression checks; nonzero exit on any failure
    Regress,
    /// Erdos-family prime threshold for a squarefree period
    Threshold { n: u64 },
    /// Character table of a modulus: exponents and conductors
    Chars {
        modulus: u64,
        #[arg(long)]
        json: bool,
    },
}

fn load_function(path: &Path) -> Result<PeriodicFunction, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    PeriodicFunction::from_json_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn verdict_exit(verdict: Verdict) -> ExitCode {
    match verdict {
        Verdict::Nonvanishing => ExitCode::from(EXIT_NONVANISHING),
        Verdict::Vanishes => ExitCode::from(EXIT_VANISHES),
        Verdict::Divergent => ExitCode::from(EXIT_DIVERGENT),
    }
}

fn cmd_check(path: &Path, k: u32) -> ExitCode {
    let f = match load_function(path) {
        Ok(f) => f,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(EXIT_PARSE);
        }
    };
    let report = decide_vanishing(&f, k);
    println!("{}", report.to_json_string());
    verdict_exit(report.verdict)
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn family_name(family: Family) -> &'static str {
    match family {
        Family::Erdos => "erdos",
        Family::Pm1Full => "pm1",
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    period: u64,
    family: &str,
    zero_sum: bool,
    workers: Option<usize>,
    pruned: bool,
    out: &Path,
    json: bool,
) -> anyhow::Result<ExitCode> {
    let family: Family = family.parse().map_err(|e| anyhow::anyhow!("{e}"))?;
    let spec = SearchSpec {
        period,
        family,
        require_zero_sum: zero_sum,
        worker_count: workers.unwrap_or_else(default_workers),
    };
    let bits = candidate_bits(family, period);
    let outcome = if pruned {
        run_search_pruned(&spec)?
    } else if bits > SEARCH_BITS_LIMIT {
        anyhow::bail!(
            "2^{bits} candidates exceed the 2^{SEARCH_BITS_LIMIT} guard; rerun with --pruned"
        );
    } else {
        run_search(&spec)?
    };

    std::fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    for &index in &outcome.vanishing {
        let f = dvl_core::search::candidate_function(family, period, index);
        let path = out.join(format!("vanishing-{index}.json"));
        std::fs::write(&path, f.to_json_string())
            .with_context(|| format!("cannot write {}", path.display()))?;
    }

    if json {
        println!(
            "{}",
            serde_json::json!({
                "period": period,
                "family": family_name(family),
                "total": outcome.total,
                "divergent": outcome.divergent,
                "nonvanishing": outcome.nonvanishing,
                "vanishing": outcome.vanishing,
                "pruned": outcome.pruned,
            })
        );
    } else {
        println!(
            "searched {} candidates (period {period}, {} family{})",
            outcome.total,
            family_name(family),
            if outcome.pruned { ", pruned sweep" } else { "" },
        );
        println!("  divergent:    {}", outcome.divergent);
        println!("  nonvanishing: {}", outcome.nonvanishing);
        println!("  vanishing:    {}", outcome.vanishing.len());
        for &index in &outcome.vanishing {
            println!(
                "    index {index} -> {}",
                out.join(format!("vanishing-{index}.json")).display()
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_eval(path: &Path, s: f64) -> ExitCode {
    let f = match load_function(path) {
        Ok(f) => f,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(EXIT_PARSE);
        }
    };
    if (s - 1.0).abs() < f64::EPSILON {
        match l1_numeric(&f) {
            Ok(value) => {
                println!("L(1,f) = {value:.16e}");
                let coeffs = log_coefficients(&f).expect("zero sum checked by l1_numeric");
                let terms: Vec<String> = coeffs
                    .iter()
                    .filter(|(_, c)| !is_zero_rational(c))
                    .map(|(p, c)| format!("{}*log({p})", rational_to_string(c)))
                    .collect();
                println!(
                    "exact log expansion: {}",
                    if terms.is_empty() { "0".to_string() } else { terms.join(" + ") }
                );
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_DIVERGENT)
            }
        }
    } else {
        match ls_numeric(&f, s) {
            Ok(value) => {
                println!("L({s},f) = {value:.16e}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::FAILURE
            }
        }
    }
}

fn is_zero_rational(r: &dvl_core::Rational) -> bool {
    use num_traits::Zero;
    r.is_zero()
}

fn cmd_threshold(n: u64) -> anyhow::Result<ExitCode> {
    let bound = erdos_prime_threshold(n)?;
    println!("{bound}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_chars(modulus: u64, json: bool) -> ExitCode {
    let table = shared_table(modulus);
    if json {
        let rows: Vec<serde_json::Value> = table
            .characters()
            .iter()
            .map(|chi| {
                serde_json::json!({
                    "exponents": chi.exponents(),
                    "conductor": chi.conductor(),
                    "primitive": chi.is_primitive(),
                    "principal": chi.is_principal(),
                })
            })
            .collect();
        println!("{}", serde_json::json!({"modulus": modulus, "characters": rows}));
    } else {
        println!("characters mod {modulus} ({} total)", table.characters().len());
        for (i, chi) in table.characters().iter().enumerate() {
            println!(
                "  #{i}: exponents {:?}, conductor {}{}",
                chi.exponents(),
                chi.conductor(),
                if chi.is_primitive() { " (primitive)" } else { "" },
            );
        }
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check { path, k } => cmd_check(&path, k),
        Command::Search { period, family, zero_sum, workers, pruned, out, json } => {
            match cmd_search(period, &family, zero_sum, workers, pruned, &out, json) {
                Ok(code) => code,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            }
        }
        Command::Eval { path, s } => cmd_eval(&path, s),
        Command::Regress => regress::run_all(),
        Command::Threshold { n } => match cmd_threshold(n) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::FAILURE
            }
        },
        Command::Chars { modulus, json } => cmd_chars(modulus, json),
    }
}
