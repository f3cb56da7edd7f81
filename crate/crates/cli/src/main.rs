use std::fmt::Write as _;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use kpoly::cycbar::{self, predicted_homology};
use kpoly::numtheory::is_prime;
use kpoly::ssengine::{self, Mode};
use kpoly::tcassemble::{cross_check, tc_group_in_degree};
use kpoly::verify::{run_suite, Suite, VerifyConfig};
use kpoly::wittsplit::DEFAULT_ENUM_BOUND;
use kpoly::GroupStructure;

#[derive(Parser)]
#[command(name = "kpoly", version, about = "K-theory of truncated polynomial algebras over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Relative K-groups K_n(k[x]/(x^e), (x)) for k = F_{p^f}
    Kgroups(KgroupsArgs),
    /// Homology of the weight pieces of the cyclic bar construction
    Hh(HhArgs),
    /// Run verification suites
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum PageMode {
    Tate,
    Hfp,
}

#[derive(Args)]
struct KgroupsArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    e: u64,
    /// Single degree 2r-1
    #[arg(long, conflicts_with = "rmax", required_unless_present = "rmax")]
    r: Option<u64>,
    /// All degrees 1..=2rmax-1
    #[arg(long)]
    rmax: Option<u64>,
    #[arg(long, default_value_t = 1)]
    f: u32,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct HhArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    e: u32,
    #[arg(long, conflicts_with = "mmax", required_unless_present = "mmax")]
    m: Option<u32>,
    /// All weights 1..=mmax
    #[arg(long)]
    mmax: Option<u32>,
    /// Print the spectral sequence page for each weight over total degrees -10..=10
    #[arg(long, value_enum)]
    dump_page: Option<PageMode>,
    /// Print the normalized complex as a matrix listing
    #[arg(long)]
    dump_complex: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_ENUM_BOUND)]
    enum_bound: u128,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    e: Option<u64>,
    #[arg(long)]
    rmax: Option<u64>,
}

/// JSON shape of `kgroups --format json`.
#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupTable {
    pub p: u64,
    pub e: u64,
    pub f: u32,
    pub groups: Vec<DegreeEntry>,
}

#[derive(Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeEntry {
    pub degree: u64,
    pub factors: Vec<u64>,
}

enum Failure {
    Usage(String),
    /// Suite report, printed to stdout before exiting with status 1.
    Verification(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        Failure::Runtime(err)
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn check_prime(p: u64) -> Result<(), Failure> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(usage(format!("--p {p} is not a prime")))
    }
}

fn positive(name: &str, v: u64) -> Result<(), Failure> {
    if v == 0 {
        return Err(usage(format!("--{name} must be positive")));
    }
    Ok(())
}

fn field_name(p: u64, f: u32) -> String {
    if f == 1 {
        format!("F_{p}")
    } else {
        format!("F_{p}^{f}")
    }
}

fn group_table(args: &KgroupsArgs) -> Result<GroupTable, Failure> {
    check_prime(args.p)?;
    positive("e", args.e)?;
    positive("f", args.f as u64)?;
    let degrees: Vec<u64> = match (args.r, args.rmax) {
        (Some(r), _) => {
            positive("r", r)?;
            vec![2 * r - 1]
        }
        (None, Some(rmax)) => {
            positive("rmax", rmax)?;
            (1..2 * rmax).collect()
        }
        (None, None) => return Err(usage("one of --r or --rmax is required")),
    };
    let mut groups = Vec::with_capacity(degrees.len());
    for degree in degrees {
        let g = tc_group_in_degree(args.p, args.e, degree, args.f)
            .with_context(|| format!("degree {degree}"))?;
        groups.push(DegreeEntry {
            degree,
            factors: factors_u64(&g)?,
        });
    }
    Ok(GroupTable {
        p: args.p,
        e: args.e,
        f: args.f,
        groups,
    })
}

fn factors_u64(g: &GroupStructure) -> anyhow::Result<Vec<u64>> {
    g.factors()
        .iter()
        .map(|x| u64::try_from(x).context("invariant factor does not fit in 64 bits"))
        .collect()
}

fn render_factors(factors: &[u64]) -> String {
    if factors.is_empty() {
        return "0".into();
    }
    factors.iter().map(|q| format!("Z/{q}")).collect::<Vec<_>>().join(" + ")
}

fn render_table(t: &GroupTable) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "K_n({}[x]/(x^{}), (x))  p={} e={} f={}",
        field_name(t.p, t.f),
        t.e,
        t.p,
        t.e,
        t.f
    );
    let rows: Vec<(String, String, String)> = t
        .groups
        .iter()
        .map(|g| {
            let order: u128 = g.factors.iter().map(|&q| q as u128).product();
            (g.degree.to_string(), render_factors(&g.factors), order.to_string())
        })
        .collect();
    let w0 = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max("degree".len());
    let w1 = rows.iter().map(|r| r.1.len()).max().unwrap_or(0).max("group".len());
    let _ = writeln!(out, "{:<w0$}  {:<w1$}  order", "degree", "group");
    for (d, g, o) in rows {
        let _ = writeln!(out, "{d:<w0$}  {g:<w1$}  {o}");
    }
    out
}

pub fn render_json(t: &GroupTable) -> String {
    serde_json::to_string_pretty(t).expect("plain data serializes") + "\n"
}

fn cmd_kgroups(args: &KgroupsArgs) -> Result<String, Failure> {
    let table = group_table(args)?;
    Ok(match args.format {
        Format::Table => render_table(&table),
        Format::Json => render_json(&table),
    })
}

fn cmd_hh(args: &HhArgs) -> Result<String, Failure> {
    check_prime(args.p)?;
    if args.e < 2 {
        return Err(usage("--e must be at least 2"));
    }
    let weights: Vec<u32> = match (args.m, args.mmax) {
        (Some(m), _) => vec![m],
        (None, Some(mmax)) => (1..=mmax).collect(),
        (None, None) => return Err(usage("one of --m or --mmax is required")),
    };
    if weights.contains(&0) {
        return Err(usage("weights must be positive"));
    }
    let mut out = String::new();
    for m in weights {
        let complex = cycbar::generate_complex(args.e, m, args.p)
            .and_then(|c| c.with_connes())
            .with_context(|| format!("weight {m}"))?;
        let h = cycbar::reduced_homology(&complex).with_context(|| format!("weight {m}"))?;
        let mut parts: Vec<String> =
            h.nonzero().iter().map(|(n, r)| format!("deg {n}: {r}")).collect();
        if parts.is_empty() {
            parts.push("0".into());
        }
        if let Some(b) = h.connes_scalar() {
            parts.push(format!("B = {b}"));
        }
        let _ = write!(out, "m={m}  {}", parts.join(", "));
        let predicted = predicted_homology(args.e, m, args.p);
        if h.nonzero() != predicted {
            let _ = write!(out, "  MISMATCH (predicted {predicted:?})");
        }
        out.push('\n');
        if args.dump_complex {
            out.push_str(&complex.to_listing());
        }
        if let Some(mode) = args.dump_page {
            let mode = match mode {
                PageMode::Tate => Mode::Tate,
                PageMode::Hfp => Mode::Hfp,
            };
            let page = ssengine::build_e2_from_homology(&h, mode).context("E2 page")?;
            let patterns = ssengine::standard_patterns(&page, h.connes_scalar().unwrap_or(0), 1);
            let run = ssengine::run_to_einfty(&page, &patterns, -10..=10).context("spectral sequence")?;
            for d in &run.patterns {
                let _ = writeln!(out, "# {d}");
            }
            out.push_str(&run.dump());
        }
    }
    Ok(out)
}

fn cmd_verify(args: &VerifyArgs) -> Result<String, Failure> {
    let suites: Vec<Suite> = if args.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![args.suite.parse().map_err(|_| {
            usage(format!(
                "unknown suite {:?} (expected all, {})",
                args.suite,
                Suite::ALL.map(Suite::name).join(", ")
            ))
        })?]
    };
    if let Some(p) = args.p {
        check_prime(p)?;
    }
    if let Some(e) = args.e {
        positive("e", e)?;
    }
    if let Some(rmax) = args.rmax {
        positive("rmax", rmax)?;
    }
    if args.enum_bound == 0 {
        return Err(usage("--enum-bound must be positive"));
    }
    let config = VerifyConfig {
        seed: args.seed,
        enum_bound: args.enum_bound,
        primes: args.p.map(|p| vec![p]),
        exponents: args.e.map(|e| vec![e]),
        rmax: args.rmax,
    };
    let mut out = String::new();
    let mut all_passed = true;
    for suite in suites {
        if suite == Suite::Routes && args.suite != "all" {
            for p in config.primes.clone().unwrap_or(vec![2, 3]) {
                for e in config.exponents.clone().unwrap_or(vec![2, 3, 4, 6]) {
                    for r in 1..=config.rmax.unwrap_or(6) {
                        let c = cross_check(p, e, r, config.enum_bound)
                            .with_context(|| format!("p={p} e={e} r={r}"))?;
                        let _ = writeln!(out, "{}", c.note());
                    }
                }
            }
        }
        let result = run_suite(suite, &config);
        all_passed &= result.passed();
        let _ = writeln!(out, "{result}");
    }
    if all_passed {
        Ok(out)
    } else {
        Err(Failure::Verification(out))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Kgroups(args) => cmd_kgroups(args),
        Command::Hh(args) => cmd_hh(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(out)) => {
            print!("{out}");
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(err)) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
