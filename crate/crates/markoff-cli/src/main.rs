//! Command-line surface over the markoff library: enumeration, per-slope
//! reports, cross-module invariant sweeps, and unicity verification.
//!
//! Exit codes: 0 success, 1 mathematical violation, 2 usage error.

mod sweep;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use markoff::farey::{self, Slope};
use markoff::{arith, cache, character, form, matrix, tree, unicity};

#[derive(Parser)]
#[command(
    name = "markoff",
    version,
    about = "Markoff equation toolkit: triples, slopes, characters, matrices, forms, unicity certificates"
)]
struct Cli {
    /// Worker threads for tree enumeration (default: machine parallelism)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Miller-Rabin rounds for inputs past the deterministic 64-bit range
    #[arg(long, global = true, default_value_t = arith::DEFAULT_MR_ROUNDS)]
    primality_rounds: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
    Tree,
}

#[derive(Subcommand)]
enum Command {
    /// List Markoff numbers up to a bound or down to a Farey level
    Enumerate {
        /// Largest Markoff number to report (decimal)
        #[arg(long, value_parser = parse_biguint, conflicts_with = "level")]
        bound: Option<BigUint>,
        /// Deepest Farey level to report
        #[arg(long)]
        level: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Full report for one slope: number, triple, characters, matrix, form,
    /// geodesic length
    Slope {
        /// Slope as "nu/mu" ("1/0" for infinity)
        slope: String,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Half-width of the lattice box scanned for the form minimum
        #[arg(long, default_value_t = 50)]
        box_radius: u32,
    },
    /// Run the cross-module invariant sweep; exit 1 on any violation
    Verify {
        /// Sweep every slope of level up to this depth
        #[arg(long, conflicts_with = "bound")]
        level: Option<u32>,
        /// Sweep every slope attaining a Markoff number up to this bound
        #[arg(long, value_parser = parse_biguint)]
        bound: Option<BigUint>,
    },
    /// Duplicate search plus prime-power certification below a bound
    Unicity {
        #[arg(long, value_parser = parse_biguint)]
        bound: BigUint,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

fn parse_biguint(s: &str) -> Result<BigUint, String> {
    let v = BigUint::from_str(s).map_err(|_| format!("{s:?} is not a decimal integer"))?;
    if v.is_zero() {
        return Err("bounds start at 1".into());
    }
    Ok(v)
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

/// Geodesic length 2·arccosh(3m/2); the toolkit's only floating-point
/// output. Relative precision 1e-12 or better.
fn geodesic_length(m: &BigUint) -> f64 {
    let bits = m.bits();
    if bits <= 53 {
        // m is exactly representable here
        let x = 1.5 * m.to_f64().expect("small value");
        return 2.0 * (x + (x * x - 1.0).sqrt()).ln();
    }
    // arccosh(3m/2) = ln(3m) up to O(m^-2), far below f64 resolution here
    let top = (m >> (bits - 53)).to_u64().expect("53-bit mantissa") as f64;
    let ln_m = top.ln() + (bits - 53) as f64 * std::f64::consts::LN_2;
    2.0 * (ln_m + 3f64.ln())
}

fn cache_file() -> Option<PathBuf> {
    std::env::var_os("MARKOFF_CACHE").map(|dir| PathBuf::from(dir).join("slope-cache.json"))
}

fn load_cache() {
    let Some(path) = cache_file() else { return };
    let Ok(text) = std::fs::read_to_string(&path) else {
        return;
    };
    let Ok(value) = serde_json::from_str::<serde_json::Value>(&text) else {
        return;
    };
    if value["schema"] != 1 {
        return;
    }
    let Some(records) = value["records"].as_array() else {
        return;
    };
    let parsed = records.iter().filter_map(|rec| {
        let t: Slope = rec["t"].as_str()?.parse().ok()?;
        let m = BigUint::from_str(rec["m"].as_str()?).ok()?;
        let u = BigUint::from_str(rec["u"].as_str()?).ok()?;
        let v = BigUint::from_str(rec["v"].as_str()?).ok()?;
        // drop records that fail the defining relation; the file is
        // user-editable and a poisoned entry would corrupt every report
        if &u * &u + 1u32 != &v * &m || 2u32 * &u > m {
            return None;
        }
        Some((t, m, u, v))
    });
    cache::import_records(parsed);
}

fn save_cache() {
    let Some(path) = cache_file() else { return };
    let records: Vec<serde_json::Value> = cache::export_records()
        .into_iter()
        .map(|(t, m, u, v)| {
            json!({
                "t": t.to_string(),
                "m": m.to_string(),
                "u": u.to_string(),
                "v": v.to_string(),
            })
        })
        .collect();
    let payload = json!({ "schema": 1, "records": records });
    if let Some(parent) = path.parent() {
        let _ = std::fs::create_dir_all(parent);
    }
    let _ = std::fs::write(&path, payload.to_string());
}

fn record_csv_line(rec: &tree::NumberRecord) -> String {
    let slopes = rec
        .slopes
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(";");
    let triple = format!("{};{};{}", rec.triple.x(), rec.triple.y(), rec.triple.z());
    format!("{},{},{},{}", rec.m, rec.level, slopes, triple)
}

fn cmd_enumerate(
    bound: Option<BigUint>,
    level: Option<u32>,
    format: Format,
    threads: usize,
) -> ExitCode {
    let records = match (&bound, level) {
        (Some(b), None) => tree::enumerate_numbers_threaded(b, threads),
        (None, Some(l)) => tree::enumerate_to_level(l),
        _ => return usage_error("enumerate needs exactly one of --bound or --level"),
    };
    match format {
        Format::Json => {
            for rec in &records {
                println!("{}", rec.to_json());
            }
        }
        Format::Csv => {
            println!("m,level,slopes,triple");
            for rec in &records {
                println!("{}", record_csv_line(rec));
            }
        }
        Format::Table => {
            let width = records
                .iter()
                .map(|r| r.m.to_string().len())
                .max()
                .unwrap_or(1)
                .max(1);
            println!("{:>width$}  {:>5}  {:<10}  triple", "m", "level", "slope");
            for rec in &records {
                let slopes = rec
                    .slopes
                    .iter()
                    .map(|s| s.to_string())
                    .collect::<Vec<_>>()
                    .join(" ");
                println!(
                    "{:>width$}  {:>5}  {:<10}  {}",
                    rec.m.to_string(),
                    rec.level,
                    slopes,
                    rec.triple
                );
            }
        }
        Format::Tree => {
            let max_level = match (bound, level) {
                (None, Some(l)) => l,
                _ => return usage_error("--format tree needs --level"),
            };
            // sideways rendering: larger slopes on top, indent by level
            let mut slopes = farey::slopes_up_to_level(max_level);
            slopes.reverse();
            for t in slopes {
                let lv = farey::farey_level(&t).to_u32().expect("shallow level");
                let indent = " ".repeat(2 * lv as usize);
                println!("{indent}{t}  {}", tree::markoff_number(&t));
            }
        }
    }
    ExitCode::SUCCESS
}

fn cmd_slope(raw: &str, format: Format, box_radius: u32) -> ExitCode {
    let Ok(slope) = raw.parse::<Slope>() else {
        return usage_error(&format!("{raw:?} is not a slope (expected \"nu/mu\")"));
    };
    let level = farey::farey_level(&slope);
    if level > BigUint::from(10_000u32) {
        // the walk materializes one step per level and the numbers grow
        // doubly exponentially; refuse unserviceable depths up front
        return usage_error(&format!(
            "slope {slope} has level {level}, beyond the supported depth of 10000"
        ));
    }
    let ch = character::character(&slope);
    let triple = match tree::triple_class_at(&slope) {
        tree::TripleClass::Singular(t) => t,
        tree::TripleClass::Sloped(st) => st.triple(),
    };
    let rec = matrix::markoff_matrix(&slope);
    let f = form::markoff_form(&triple);
    let delta = match form::discriminant(&f) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("VIOLATION: {e}");
            return ExitCode::from(1);
        }
    };
    let minimum = form::verify_minimum(&f, box_radius.max(1));
    let length = geodesic_length(&ch.m);

    match format {
        Format::Json => {
            let payload = json!({
                "t": slope.to_string(),
                "level": level.to_string(),
                "m": ch.m.to_string(),
                "u": ch.u.to_string(),
                "v": ch.v.to_string(),
                "triple": [triple.x().to_string(), triple.y().to_string(), triple.z().to_string()],
                "M": [
                    [rec.m.a.to_string(), rec.m.b.to_string()],
                    [rec.m.c.to_string(), rec.m.d.to_string()],
                ],
                "form": f.to_json(),
                "minimum": {
                    "box_radius": box_radius,
                    "min": minimum.min.to_string(),
                    "at": [minimum.attaining.0, minimum.attaining.1],
                    "equals_m": minimum.equals_m,
                },
                "geodesic_length": format!("{length:.12}"),
            });
            println!("{payload}");
        }
        Format::Table => {
            println!("slope            {slope}");
            println!("level            {level}");
            println!("m                {}", ch.m);
            println!("triple           {triple}");
            println!("u                {}", ch.u);
            println!("v                {}", ch.v);
            println!("M                {}", rec.m);
            println!("form             ({}, {}, {})", f.a, f.b, f.c);
            println!("delta            {delta}");
            println!(
                "box minimum      {} at ({}, {}) within radius {}",
                minimum.min, minimum.attaining.0, minimum.attaining.1, box_radius
            );
            println!("geodesic length  {length:.12}");
        }
        _ => return usage_error("slope supports --format json or table"),
    }
    ExitCode::SUCCESS
}

fn cmd_verify(level: Option<u32>, bound: Option<BigUint>, threads: usize) -> ExitCode {
    let scope = match (level, bound) {
        (Some(l), None) => sweep::Scope::Level(l),
        (None, Some(b)) => sweep::Scope::Bound(b),
        _ => return usage_error("verify needs exactly one of --level or --bound"),
    };
    let report = sweep::run(&scope, threads);
    for line in &report.lines {
        println!("{line}");
    }
    if report.failures.is_empty() {
        println!("all invariants hold");
        ExitCode::SUCCESS
    } else {
        for failure in &report.failures {
            eprintln!("VIOLATION: {failure}");
        }
        ExitCode::from(1)
    }
}

fn cmd_unicity(bound: &BigUint, format: Format, threads: usize, rounds: u32) -> ExitCode {
    let report = unicity::verify_unicity_threaded(bound, threads, rounds);
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Table => {
            println!("numbers ≤ {}: {}", report.bound, report.total_numbers);
            println!("certified (prime power or twice a prime power):");
            for cert in &report.certificates {
                let class = if cert.class.twice {
                    format!("2·{}^{}", cert.class.p, cert.class.n)
                } else {
                    format!("{}^{}", cert.class.p, cert.class.n)
                };
                println!(
                    "  m={} = {}  slope {}  u={}  roots in (0, m/2): {}",
                    cert.m, class, cert.slope, cert.u, cert.root_count
                );
            }
            println!(
                "hypothesis unmet: {}",
                report
                    .hypothesis_unmet
                    .iter()
                    .map(|m| m.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            if report.duplicates.is_empty() {
                println!("duplicates: none");
            } else {
                for (m, slopes) in &report.duplicates {
                    println!(
                        "DUPLICATE m={} at slopes {}",
                        m,
                        slopes
                            .iter()
                            .map(|s| s.to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    );
                }
            }
            for v in &report.violations {
                println!("VIOLATION: {v}");
            }
        }
        _ => return usage_error("unicity supports --format json or table"),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    // die quietly on SIGPIPE like other stream producers; the default Rust
    // handler turns `markoff enumerate | head` into a panic
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let threads = cli
        .threads
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
        .max(1);
    load_cache();
    let code = match cli.command {
        Command::Enumerate {
            bound,
            level,
            format,
        } => cmd_enumerate(bound, level, format, threads),
        Command::Slope {
            slope,
            format,
            box_radius,
        } => cmd_slope(&slope, format, box_radius),
        Command::Verify { level, bound } => cmd_verify(level, bound, threads),
        Command::Unicity { bound, format } => {
            cmd_unicity(&bound, format, threads, cli.primality_rounds)
        }
    };
    save_cache();
    code
}
