//! `mocktheta`: verify catalogued identities, print series coefficients and
//! partition-count tables.
//!
//! Exit status is 0 on success, 1 when a verification or table check fails,
//! and 2 on usage errors (including unknown identity or builder names).

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mocktheta::bivariate::builders::{self, BuildParams};
use mocktheta::catalog::{builder, Built, Mutation};
use mocktheta::partitions::count;
use mocktheta::{Catalog, Error, Orders, PartitionMode, VerifyReport};

#[derive(Parser, Debug)]
#[command(name = "mocktheta", version, about = "Exact q-series identity checks for omega(q) and nu(q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify one identity, or the whole catalog with --all
    Verify(VerifyArgs),
    /// Print the nonzero coefficients of a registered series builder
    Coeffs(CoeffsArgs),
    /// Tabulate partition counts against the generating series
    Table(TableArgs),
    /// List identity ids and builder names
    List,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Identity id (see `mocktheta list`)
    #[arg(required_unless_present = "all", conflicts_with = "all")]
    id: Option<String>,
    #[arg(long)]
    all: bool,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    q_order: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    z_order: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n_max: Option<u64>,
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    #[arg(long)]
    csv: bool,
    /// Fault injection: add DELTA to the z^Z q^Q cell of a builder's output
    #[arg(long, value_name = "BUILDER:Z:Q:DELTA")]
    perturb: Vec<String>,
    /// Fault injection: drop outer-sum term N of a builder
    #[arg(long, value_name = "BUILDER:N")]
    skip_term: Vec<String>,
}

#[derive(Args, Debug)]
struct CoeffsArgs {
    builder: String,
    #[arg(long)]
    q_order: usize,
    /// Defaults to the q order
    #[arg(long)]
    z_order: Option<usize>,
    /// Print only this row of a two-variable series
    #[arg(long)]
    z_degree: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Pomega,
    Pnu,
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(value_enum)]
    mode: Mode,
    #[arg(long)]
    max: u64,
    #[arg(long)]
    csv: bool,
}

enum Failure {
    Usage(String),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = io::stdout().lock();
    let result = match cli.command {
        Command::Verify(a) => verify(a, &mut out),
        Command::Coeffs(a) => coeffs(a, &mut out),
        Command::Table(a) => table(a, &mut out),
        Command::List => list(&mut out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn verify(a: VerifyArgs, out: &mut impl Write) -> Result<(), Failure> {
    let orders = Orders {
        q_order: a.q_order.map(|v| v as usize),
        z_order: a.z_order.map(|v| v as usize),
        n_max: a.n_max.map(|v| v as usize),
    };
    let mut catalog = Catalog::standard();
    for spec in &a.perturb {
        let (name, m) = parse_perturb(spec)?;
        catalog = catalog.with_mutation(name, m)?;
    }
    for spec in &a.skip_term {
        let (name, n) = spec
            .split_once(':')
            .and_then(|(b, n)| Some((b, n.parse().ok()?)))
            .ok_or_else(|| Failure::Usage(format!("bad --skip-term `{spec}`")))?;
        catalog = catalog.with_mutation(name, Mutation::SkipTerm(n))?;
    }
    let reports = match &a.id {
        Some(id) => vec![catalog.verify(id, &orders)?],
        None => catalog.verify_all(&orders)?,
    };
    if a.csv {
        writeln!(out, "identity,status,q_order,z_order,z_degree,q_exponent,lhs,rhs,elapsed_ms")?;
    }
    for r in &reports {
        if a.json {
            let line = serde_json::to_string(r).map_err(|e| Failure::Usage(e.to_string()))?;
            writeln!(out, "{line}")?;
        } else if a.csv {
            writeln!(out, "{}", csv_line(r))?;
        } else {
            writeln!(out, "{}", text_line(r))?;
        }
    }
    if reports.iter().all(VerifyReport::passed) {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn parse_perturb(spec: &str) -> Result<(&str, Mutation), Failure> {
    let bad = || Failure::Usage(format!("bad --perturb `{spec}`, expected BUILDER:Z:Q:DELTA"));
    let mut it = spec.rsplitn(4, ':');
    let (delta, q, z, name) = (it.next(), it.next(), it.next(), it.next());
    let (Some(delta), Some(q), Some(z), Some(name)) = (delta, q, z, name) else {
        return Err(bad());
    };
    Ok((
        name,
        Mutation::AddCell {
            z_degree: z.parse().map_err(|_| bad())?,
            q_exponent: q.parse().map_err(|_| bad())?,
            delta: delta.parse().map_err(|_| bad())?,
        },
    ))
}

fn opt(v: Option<usize>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_line(r: &VerifyReport) -> String {
    let status = if r.passed() { "pass" } else { "fail" };
    let m = r.first_mismatch.as_ref();
    format!(
        "{},{status},{},{},{},{},{},{},{}",
        r.identity,
        r.q_order,
        opt(r.z_order),
        opt(m.map(|m| m.z_degree)),
        opt(m.map(|m| m.q_exponent)),
        m.map(|m| m.lhs.to_string()).unwrap_or_default(),
        m.map(|m| m.rhs.to_string()).unwrap_or_default(),
        r.elapsed_ms
    )
}

fn text_line(r: &VerifyReport) -> String {
    let mut s = format!(
        "{:<4}  {:<22} q_order {}",
        if r.passed() { "PASS" } else { "FAIL" },
        r.identity,
        r.q_order
    );
    if let Some(z) = r.z_order {
        s.push_str(&format!(" z_order {z}"));
    }
    s.push_str(&format!("  {} ms", r.elapsed_ms));
    if let Some(m) = &r.first_mismatch {
        s.push_str(&format!(
            "  first mismatch at z^{} q^{}: lhs {} rhs {}",
            m.z_degree, m.q_exponent, m.lhs, m.rhs
        ));
    }
    s
}

fn coeffs(a: CoeffsArgs, out: &mut impl Write) -> Result<(), Failure> {
    let entry = builder(&a.builder)?;
    let z_order = a.z_order.unwrap_or(a.q_order);
    if let Some(m) = a.z_degree {
        if !entry.bivariate && m > 0 {
            return Err(Failure::Usage(format!("`{}` is a series in q alone", entry.name)));
        }
        if m > z_order {
            return Err(Failure::Usage(format!("--z-degree {m} exceeds --z-order {z_order}")));
        }
    }
    match entry.build(&BuildParams::new(z_order, a.q_order)) {
        Built::Uni(s) => {
            for (e, c) in s.terms() {
                writeln!(out, "{e} {c}")?;
            }
        }
        Built::Bi(s) => match a.z_degree {
            Some(m) => {
                for (e, c) in s.rows()[m].terms() {
                    writeln!(out, "{e} {c}")?;
                }
            }
            None => {
                for (m, row) in s.rows().iter().enumerate() {
                    for (e, c) in row.terms() {
                        writeln!(out, "{m} {e} {c}")?;
                    }
                }
            }
        },
    }
    Ok(())
}

fn table(a: TableArgs, out: &mut impl Write) -> Result<(), Failure> {
    let order = a.max as usize;
    let params = BuildParams::new(0, order);
    let (mode, series, first) = match a.mode {
        Mode::Pomega => (PartitionMode::Omega, builders::q_omega(&params), 1),
        Mode::Pnu => (PartitionMode::Nu, builders::nu_neg_q(&params), 0),
    };
    if a.csv {
        writeln!(out, "n,count,series_coeff,agree")?;
    }
    let mut all_agree = true;
    for n in first..=a.max {
        let c = count(mode, n);
        let s = &series[n as usize];
        let agree = &c == s;
        all_agree &= agree;
        if a.csv {
            writeln!(out, "{n},{c},{s},{agree}")?;
        } else {
            writeln!(out, "{n:>4} {c:>10} {s:>10}  {}", if agree { "OK" } else { "MISMATCH" })?;
        }
    }
    if all_agree {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn list(out: &mut impl Write) -> Result<(), Failure> {
    writeln!(out, "identities:")?;
    for r in Catalog::standard().records() {
        writeln!(out, "  {:<22} {}", r.id, r.description)?;
    }
    writeln!(out, "builders:")?;
    for name in mocktheta::catalog::builder_names() {
        let e = builder(name)?;
        writeln!(out, "  {:<18} {}", e.name, e.formula)?;
    }
    Ok(())
}
