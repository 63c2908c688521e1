use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qgreedy_core::bases::Algebra;
use qgreedy_core::clusters::ClusterCache;
use qgreedy_core::greedy::quantum_greedy;
use qgreedy_core::qtorus::{expand_in_cluster, to_pointed};
use qgreedy_core::scan::{check_vector, scan, CellResult, Check, ScanOptions, ScanReport};
use qgreedy_core::verify::{run_suite, Suite};
use qgreedy_core::{ClusterIndex, Error, PointedElement, TorusElement};
use serde_json::json;

/// Exact computations in rank 2 quantum cluster algebras A_v(b,c).
#[derive(Parser)]
#[command(name = "qgreedy", version)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Directory for the on-disk cluster-variable cache.
    #[arg(long, global = true, env = "QGREEDY_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Worker threads for scans (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Args)]
struct Params {
    #[arg(short, value_parser = clap::value_parser!(i64).range(1..))]
    b: i64,
    #[arg(short, value_parser = clap::value_parser!(i64).range(1..))]
    c: i64,
}

#[derive(Args)]
struct Vector {
    /// Pointing vector.
    #[arg(short, num_args = 2, value_names = ["A1", "A2"], allow_negative_numbers = true, required = true)]
    a: Vec<i64>,
}

impl Vector {
    fn get(&self) -> (i64, i64) {
        (self.a[0], self.a[1])
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Element {
    Greedy,
    Triangular,
    Standard,
}

#[derive(Subcommand)]
enum Command {
    /// Quantum greedy element X[a1,a2].
    Greedy {
        #[command(flatten)]
        p: Params,
        #[command(flatten)]
        v: Vector,
    },
    /// Cluster variable X_m in the initial cluster.
    ClusterVar {
        #[command(flatten)]
        p: Params,
        #[arg(short, allow_negative_numbers = true)]
        m: i64,
    },
    /// Standard monomial M[a1,a2].
    Standard {
        #[command(flatten)]
        p: Params,
        #[command(flatten)]
        v: Vector,
    },
    /// Triangular basis element C[a1,a2].
    Triangular {
        #[command(flatten)]
        p: Params,
        #[command(flatten)]
        v: Vector,
    },
    /// Re-expands a basis element in the cluster {X_m, X_m+1}.
    Expand {
        #[command(flatten)]
        p: Params,
        #[command(flatten)]
        v: Vector,
        #[arg(short, allow_negative_numbers = true)]
        m: i64,
        #[arg(long, value_enum, default_value_t = Element::Greedy)]
        element: Element,
    },
    /// Runs checks on a single pointing vector.
    Check {
        #[command(flatten)]
        p: Params,
        #[command(flatten)]
        v: Vector,
        /// Comma-separated checks (default: all).
        #[arg(long, value_delimiter = ',', value_parser = parse_check)]
        checks: Vec<Check>,
        /// Also check positivity in clusters -R..=R.
        #[arg(long, value_name = "R", value_parser = clap::value_parser!(i64).range(0..))]
        cluster_range: Option<i64>,
    },
    /// Runs checks over 0 <= a1, a2 <= bound.
    Scan {
        #[command(flatten)]
        p: Params,
        #[arg(long, value_parser = clap::value_parser!(i64).range(0..))]
        bound: i64,
        /// Comma-separated checks (default: all).
        #[arg(long, value_delimiter = ',', value_parser = parse_check)]
        checks: Vec<Check>,
        /// Also check positivity in clusters -R..=R.
        #[arg(long, value_name = "R", value_parser = clap::value_parser!(i64).range(0..))]
        cluster_range: Option<i64>,
    },
    /// Runs verification suites (default: all).
    Verify {
        #[arg(value_parser = parse_suite)]
        suites: Vec<Suite>,
    },
    /// Manages the cluster-variable cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    Clear,
    Stats,
}

fn parse_check(s: &str) -> Result<Check, String> {
    Check::from_str(s).map_err(|_| {
        let names: Vec<_> = Check::ALL.iter().map(|c| c.as_str()).collect();
        format!("unknown check '{s}' (expected one of {})", names.join(", "))
    })
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    Suite::from_str(s).map_err(|_| {
        let names: Vec<_> = Suite::ALL.iter().map(|x| x.as_str()).collect();
        format!("unknown suite '{s}' (expected one of {})", names.join(", "))
    })
}

enum Failure {
    Usage(String),
    Check,
    Internal(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(msg) => Failure::Usage(msg),
            other => Failure::Internal(other),
        }
    }
}

type Outcome = Result<(), Failure>;

fn json_out<T: serde::Serialize>(x: &T) -> Outcome {
    println!("{}", serde_json::to_string(x).map_err(Error::from)?);
    Ok(())
}

fn no_latex(fmt: Format, what: &str) -> Outcome {
    if fmt == Format::Latex {
        return Err(Failure::Usage(format!("--format latex is not available for {what}")));
    }
    Ok(())
}

fn print_torus(fmt: Format, label: &str, t: &TorusElement) -> Outcome {
    match fmt {
        Format::Text => println!("{label} = {t}"),
        Format::Json => json_out(t)?,
        Format::Latex => println!("{}", t.to_latex()),
    }
    Ok(())
}

fn print_pointed(fmt: Format, label: &str, x: &PointedElement) -> Outcome {
    match fmt {
        Format::Text => {
            println!("{label}, (b,c) = ({},{})", x.b, x.c);
            for (&(p, q), e) in &x.grid {
                println!("e({p},{q}) = {e}");
            }
        }
        Format::Json => json_out(x)?,
        Format::Latex => println!("{}", x.to_torus().to_latex()),
    }
    Ok(())
}

fn print_cells(fmt: Format, cells: &[CellResult]) -> Outcome {
    match fmt {
        Format::Json => json_out(&cells)?,
        _ => {
            for r in cells {
                let status = if r.pass { "PASS" } else { "FAIL" };
                println!("{status} {} a=({},{}) {}", r.check, r.a[0], r.a[1], r.witness);
            }
        }
    }
    Ok(())
}

fn print_scan(fmt: Format, report: &ScanReport) -> Outcome {
    if fmt == Format::Json {
        return json_out(report);
    }
    println!(
        "scan (b,c) = ({},{}), bound {}, clusters {:?}",
        report.b, report.c, report.bound, report.clusters_covered
    );
    for name in &report.checks {
        let fails: Vec<_> = report.results.iter().filter(|r| &r.check == name && !r.pass).collect();
        if fails.is_empty() {
            println!("{name}: no failures");
            continue;
        }
        let list: Vec<_> = fails.iter().map(|r| format!("({},{})", r.a[0], r.a[1])).collect();
        println!("{name}: {} failures: {}", fails.len(), list.join(" "));
        for r in fails {
            println!("  ({},{}) {}", r.a[0], r.a[1], r.witness);
        }
    }
    Ok(())
}

fn checks_or_all(checks: Vec<Check>) -> Vec<Check> {
    if checks.is_empty() {
        Check::ALL.to_vec()
    } else {
        checks
    }
}

fn run(cli: Cli) -> Outcome {
    let fmt = cli.format;
    let clusters = match &cli.cache_dir {
        Some(dir) => ClusterCache::with_dir(dir),
        None => ClusterCache::in_memory(),
    };
    match cli.command {
        Command::Greedy { p, v } => {
            let (a1, a2) = v.get();
            print_pointed(fmt, &format!("X[{a1},{a2}]"), &quantum_greedy(p.b, p.c, a1, a2)?)
        }
        Command::ClusterVar { p, m } => {
            print_torus(fmt, &format!("X_{m}"), &clusters.cluster_variable(p.b, p.c, m)?)
        }
        Command::Standard { p, v } => {
            let (a1, a2) = v.get();
            print_torus(fmt, &format!("M[{a1},{a2}]"), &clusters.standard_monomial(p.b, p.c, a1, a2)?)
        }
        Command::Triangular { p, v } => {
            let a = v.get();
            let mut alg = Algebra::new(p.b, p.c, &clusters)?;
            let elem = alg.triangular_element(a)?;
            let label = format!("C[{},{}]", a.0, a.1);
            match fmt {
                Format::Text => {
                    println!("{label} = {elem}");
                    for (&(i, j), r) in &alg.triangular_r_coeffs(a)?.coeffs {
                        println!("r({i},{j}) = {r}");
                    }
                    Ok(())
                }
                _ => print_pointed(fmt, &label, &to_pointed(&elem, p.b, p.c)?),
            }
        }
        Command::Expand { p, v, m, element } => {
            let a = v.get();
            let mut alg = Algebra::new(p.b, p.c, &clusters)?;
            let (name, f) = match element {
                Element::Greedy => ("X", alg.greedy_torus(a)?),
                Element::Triangular => ("C", alg.triangular_element(a)?),
                Element::Standard => ("M", alg.standard_monomial(a)?.clone()),
            };
            let there = expand_in_cluster(&f, ClusterIndex(m), p.b, p.c)?;
            print_torus(fmt, &format!("{name}[{},{}] in cluster {m}", a.0, a.1), &there)
        }
        Command::Check { p, v, checks, cluster_range } => {
            no_latex(fmt, "check")?;
            let cells = check_vector(p.b, p.c, v.get(), &checks_or_all(checks), cluster_range, &clusters)?;
            print_cells(fmt, &cells)?;
            if cells.iter().all(|r| r.pass) {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Scan { p, bound, checks, cluster_range } => {
            no_latex(fmt, "scan")?;
            let opts = ScanOptions {
                b: p.b,
                c: p.c,
                bound,
                checks: checks_or_all(checks),
                cluster_radius: cluster_range,
                threads: cli.threads.map(|n| n as usize),
            };
            let report = scan(&opts, &clusters)?;
            print_scan(fmt, &report)?;
            if report.all_pass() {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Verify { suites } => {
            no_latex(fmt, "verify")?;
            let suites = if suites.is_empty() { Suite::ALL.to_vec() } else { suites };
            let mut outcomes = Vec::new();
            for s in suites {
                for o in run_suite(s, &clusters) {
                    if fmt == Format::Text {
                        println!("{} {o}", s.as_str());
                    }
                    outcomes.push(json!({"suite": s.as_str(), "outcome": o}));
                }
            }
            let failed = outcomes.iter().filter(|o| o["outcome"]["pass"] == false).count();
            if fmt == Format::Json {
                json_out(&json!({"pass": failed == 0, "failed": failed, "outcomes": outcomes}))?;
            } else {
                println!("{} passed, {failed} failed", outcomes.len() - failed);
            }
            if failed == 0 {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Cache { action } => {
            no_latex(fmt, "cache")?;
            let Some(dir) = cli.cache_dir.as_ref() else {
                return Err(Failure::Usage(
                    "no cache directory configured (use --cache-dir or QGREEDY_CACHE_DIR)".into(),
                ));
            };
            match action {
                CacheAction::Clear => {
                    clusters.clear()?;
                    match fmt {
                        Format::Json => json_out(&json!({"cleared": dir}))?,
                        _ => println!("cleared {}", dir.display()),
                    }
                }
                CacheAction::Stats => {
                    let s = clusters.stats()?;
                    match fmt {
                        Format::Json => json_out(&json!({"entries": s.entries, "bytes": s.bytes}))?,
                        _ => println!("entries: {}\nbytes: {}", s.entries, s.bytes),
                    }
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors.
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
