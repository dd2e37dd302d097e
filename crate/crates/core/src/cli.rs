//! Command-line front end.
//!
//! Exit codes:
//!
//! | code | meaning                                              |
//! |------|------------------------------------------------------|
//! | 0    | success (for `verify`: the assignment solves)        |
//! | 1    | I/O failure, or `verify` found an undecodable demand |
//! | 2    | bad arguments, unparsable or mismatched input files  |
//! | 3    | characteristic condition fails for `solve`           |
//! | 4    | search budget exceeded (all cells, for `table`)      |

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::code::{CodeError, CodingAssignment, DEFAULT_ORACLE_BUDGET};
use crate::families::{q_from_primes, Family, FamilySpec};
use crate::gf::Field;
use crate::network::Network;
use crate::search::{
    characteristic_table, exhaustive_scalar_search, randomized_vector_search, SearchError,
    SearchOptions, SearchOutcome, TableMode, DEFAULT_SEARCH_BUDGET,
};
use crate::solutions::{fano_paper_solution, non_fano_paper_solution, SolutionError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CHARACTERISTIC: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

pub const BUDGET_ENV: &str = "NETCODE_BUDGET";
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Parser)]
#[command(
    name = "netcode",
    version,
    about = "Linear network coding over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a family network as JSON or DOT.
    Generate(GenerateArgs),
    /// Build the explicit code for a family and verify it.
    Solve(SolveArgs),
    /// Check an assignment file against a network file.
    Verify(VerifyArgs),
    /// Search for a linear solution.
    Search(SearchArgs),
    /// Tabulate solvability across fields.
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableFormat {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Constructive,
    Exhaustive,
    Auto,
}

#[derive(Debug, Args)]
struct FamilyArgs {
    /// gen-fano, gen-non-fano, fano, non-fano, modified-fano, modified-non-fano
    family: String,
    #[arg(long)]
    q: Option<u32>,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Where to write the assignment JSON.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where to write the network JSON the assignment refers to.
    #[arg(long)]
    network_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    network: PathBuf,
    assignment: PathBuf,
    /// Expected field characteristic; a different one is a mismatch.
    #[arg(long)]
    p: Option<u64>,
    /// Expected extension degree.
    #[arg(long)]
    m: Option<u32>,
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// Family name; omit when --network is given.
    family: Option<String>,
    #[arg(long)]
    q: Option<u32>,
    /// Network JSON file instead of a family.
    #[arg(long, conflicts_with = "family")]
    network: Option<PathBuf>,
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long, conflicts_with = "random")]
    exhaustive: bool,
    #[arg(long)]
    random: bool,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    budget: Option<u128>,
    /// Enumerate every coefficient vector instead of one per edge scaling.
    #[arg(long)]
    no_normalize: bool,
    /// Write a found assignment here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TableArgs {
    family: String,
    /// Comma-separated q values.
    #[arg(long, value_delimiter = ',', conflicts_with = "primes")]
    q: Vec<u32>,
    /// Comma-separated primes; q is their product (or prime powers with --exponents).
    #[arg(long, value_delimiter = ',')]
    primes: Vec<u64>,
    #[arg(long, value_delimiter = ',', requires = "primes")]
    exponents: Vec<u32>,
    /// Comma-separated field characteristics.
    #[arg(long, value_delimiter = ',', required = true)]
    fields: Vec<u64>,
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, value_enum, default_value = "constructive")]
    mode: Mode,
    #[arg(long, value_enum, default_value = "text")]
    format: TableFormat,
    #[arg(long)]
    budget: Option<u128>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

/// An error carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl fmt::Display) -> Self {
        Failure {
            code,
            message: message.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(EXIT_FAILED, e)
    }
}

impl From<SolutionError> for Failure {
    fn from(e: SolutionError) -> Self {
        match e {
            SolutionError::CharacteristicMismatch { .. } => Failure::new(EXIT_CHARACTERISTIC, e),
            _ => Failure::new(EXIT_USAGE, e),
        }
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::BudgetExceeded { .. } => Failure::new(EXIT_BUDGET, e),
            SearchError::Pool(_) => Failure::new(EXIT_FAILED, e),
            _ => Failure::new(EXIT_USAGE, e),
        }
    }
}

fn usage(e: impl fmt::Display) -> Failure {
    Failure::new(EXIT_USAGE, e)
}

/// Runs the CLI with `args` (including the program name), writing normal
/// output to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{text}");
            return code;
        }
    };
    let result = match cli.command {
        Command::Generate(a) => generate(a, out, err),
        Command::Solve(a) => solve(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Search(a) => search(a, out),
        Command::Table(a) => table(a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn family_spec(name: &str, q: Option<u32>) -> Result<FamilySpec, Failure> {
    let family: Family = name.parse().map_err(usage)?;
    let q = match q {
        Some(q) => q,
        None if family.is_parameterized() => {
            return Err(usage(format!("{family} needs --q")));
        }
        None => 2,
    };
    FamilySpec::new(family, q).map_err(usage)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .map_err(|e| Failure::new(EXIT_FAILED, format!("cannot write {}: {e}", path.display())))
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_FAILED, format!("cannot read {}: {e}", path.display())))
}

/// With `--out` the summary goes to stdout; otherwise the network itself does
/// and the summary moves to stderr so the output stays parseable.
fn generate(a: GenerateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let spec = family_spec(&a.family.family, a.family.q)?;
    let net = spec.build().map_err(usage)?;
    let mut text = match a.format {
        Format::Json => net.to_json(),
        Format::Dot => net.to_dot(),
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &a.out {
        Some(path) => {
            write_file(path, &text)?;
            writeln!(out, "wrote {}", path.display())?;
            writeln!(out, "{}", net.summary())?;
        }
        None => {
            write!(out, "{text}")?;
            writeln!(err, "{}", net.summary())?;
        }
    }
    Ok(EXIT_OK)
}

fn solve(a: SolveArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let spec = family_spec(&a.family.family, a.family.q)?;
    let field = Field::new(a.p, a.m).map_err(usage)?;
    let assignment = match spec.family {
        Family::GenFano => fano_paper_solution(spec.q, &field, a.k)?,
        Family::GenNonFano => non_fano_paper_solution(spec.q, &field, a.k)?,
        other => {
            return Err(usage(format!(
                "no explicit construction for {other}; use `search`"
            )))
        }
    };
    let report = assignment.verify();
    writeln!(out, "{} q={} over {} k={}", spec.family, spec.q, field, a.k)?;
    writeln!(out, "{report}")?;
    if let Some(path) = &a.out {
        write_file(path, &assignment.to_json())?;
        writeln!(out, "wrote {}", path.display())?;
    }
    if let Some(path) = &a.network_out {
        write_file(path, &assignment.network().to_json())?;
        writeln!(out, "wrote {}", path.display())?;
    }
    Ok(if report.solved { EXIT_OK } else { EXIT_FAILED })
}

fn load_network(path: &Path) -> Result<Arc<Network>, Failure> {
    let text = read_file(path)?;
    Network::from_json(&text)
        .map(Arc::new)
        .map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let net = load_network(&a.network)?;
    let text = read_file(&a.assignment)?;
    let assignment = CodingAssignment::from_json(&text, net)
        .map_err(|e| usage(format!("{}: {e}", a.assignment.display())))?;
    let field = assignment.field();
    if a.p.is_some_and(|p| p != field.characteristic() as u64)
        || a.m.is_some_and(|m| m != field.degree())
    {
        return Err(usage(format!(
            "assignment is over {field}, expected GF({}^{})",
            a.p.unwrap_or(field.characteristic() as u64),
            a.m.unwrap_or(field.degree())
        )));
    }
    let report = assignment.verify();
    writeln!(out, "{report}")?;
    match report.first_failure() {
        None => Ok(EXIT_OK),
        Some(d) => {
            writeln!(
                out,
                "first failing terminal: {} (demand {})",
                d.terminal, d.demand
            )?;
            Ok(EXIT_FAILED)
        }
    }
}

fn budget_from(flag: Option<u128>) -> Result<u128, Failure> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| usage(format!("{BUDGET_ENV}={v:?} is not a nonnegative integer"))),
        Err(_) => Ok(DEFAULT_SEARCH_BUDGET),
    }
}

fn print_outcome(o: &SearchOutcome, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "searched: {}", o.searched)?;
    writeln!(out, "elapsed_ms: {}", o.elapsed.as_millis())?;
    if let Some(report) = &o.report {
        writeln!(out, "{report}")?;
    }
    Ok(())
}

fn search(a: SearchArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let net = match (&a.network, &a.family) {
        (Some(path), _) => load_network(path)?,
        (None, Some(name)) => Arc::new(family_spec(name, a.q)?.build().map_err(usage)?),
        (None, None) => return Err(usage("give a family or --network")),
    };
    let field = Field::new(a.p, a.m).map_err(usage)?;
    let budget = budget_from(a.budget)?;
    if a.jobs == 0 {
        return Err(usage("--jobs must be at least 1"));
    }
    writeln!(out, "network: {} ({})", net.meta.family, net.summary())?;
    writeln!(out, "field: {field}  k: {}", a.k)?;

    let outcome = if a.random {
        let seed = a.seed.unwrap_or(DEFAULT_SEED);
        writeln!(out, "mode: random  trials: {}  seed: {seed}", a.trials)?;
        randomized_vector_search(net, &field, a.k, a.trials, seed)?
    } else {
        writeln!(
            out,
            "mode: exhaustive  normalize: {}  jobs: {}",
            !a.no_normalize, a.jobs
        )?;
        if a.k != 1 {
            writeln!(
                out,
                "exhaustive certification covers k = 1 only; nothing to enumerate for k = {}",
                a.k
            )?;
            writeln!(out, "STATUS: INCONCLUSIVE")?;
            return Ok(EXIT_OK);
        }
        let opts = SearchOptions {
            budget,
            normalize: !a.no_normalize,
            jobs: a.jobs,
        };
        match exhaustive_scalar_search(net, &field, &opts) {
            Ok(o) => o,
            Err(e @ SearchError::BudgetExceeded { .. }) => {
                writeln!(out, "{e}")?;
                writeln!(out, "STATUS: INCONCLUSIVE")?;
                return Ok(EXIT_BUDGET);
            }
            Err(e) => return Err(e.into()),
        }
    };
    print_outcome(&outcome, out)?;
    if let Some(assignment) = &outcome.assignment {
        match assignment.function_check(DEFAULT_ORACLE_BUDGET) {
            Ok(ok) => writeln!(out, "oracle: {}", if ok { "agrees" } else { "DISAGREES" })?,
            Err(CodeError::BudgetExceeded { .. }) => writeln!(out, "oracle: skipped (too large)")?,
            Err(e) => return Err(usage(e)),
        }
        match &a.out {
            Some(path) => {
                write_file(path, &assignment.to_json())?;
                writeln!(out, "wrote {}", path.display())?;
            }
            None => writeln!(out, "{}", assignment.to_json())?,
        }
    }
    writeln!(out, "STATUS: {}", outcome.status)?;
    Ok(EXIT_OK)
}

fn table(a: TableArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let family: Family = a.family.parse().map_err(usage)?;
    let qs = if !a.primes.is_empty() {
        let exps = (!a.exponents.is_empty()).then_some(a.exponents.as_slice());
        vec![q_from_primes(&a.primes, exps).map_err(usage)?]
    } else if !a.q.is_empty() {
        a.q.clone()
    } else if family.is_parameterized() {
        return Err(usage(format!("{family} needs --q or --primes")));
    } else {
        vec![2]
    };
    if a.jobs == 0 {
        return Err(usage("--jobs must be at least 1"));
    }
    let mode = match a.mode {
        Mode::Constructive => TableMode::Constructive,
        Mode::Exhaustive => TableMode::Exhaustive,
        Mode::Auto => TableMode::Auto,
    };
    let opts = SearchOptions {
        budget: budget_from(a.budget)?,
        normalize: true,
        jobs: a.jobs,
    };
    let t = characteristic_table(family, &qs, &a.fields, a.m, a.k, mode, &opts)?;
    match a.format {
        TableFormat::Text => write!(out, "{}", t.render_text())?,
        TableFormat::Csv => write!(out, "{}", t.to_csv())?,
    }
    Ok(if t.all_budget_exceeded() {
        EXIT_BUDGET
    } else {
        EXIT_OK
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["netcode"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn generate_summary_and_bad_q() {
        let (code, out, err) = run_str(&["generate", "gen-fano", "--q", "3", "--format", "dot"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("digraph"));
        assert_eq!(err, "4 sources, 7 coded edges, 6 terminals\n");
        let (code, _, err) = run_str(&["generate", "gen-fano", "--q", "1"]);
        assert_eq!(code, 2, "{err}");
        let (code, _, _) = run_str(&["generate", "nope", "--q", "2"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn solve_exit_codes() {
        let (code, out, _) = run_str(&["solve", "gen-fano", "--q", "6", "--p", "3"]);
        assert_eq!(code, 0);
        assert!(out.contains("solved: true"));
        let (code, _, err) = run_str(&["solve", "gen-fano", "--q", "6", "--p", "5"]);
        assert_eq!(code, 3);
        assert!(err.contains("5 does not divide 6"));
        let (code, _, _) = run_str(&["solve", "gen-non-fano", "--q", "6", "--p", "5", "--k", "2"]);
        assert_eq!(code, 0);
        let (code, _, _) = run_str(&["solve", "gen-fano", "--q", "2", "--p", "4"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn table_examples() {
        let (code, out, _) = run_str(&[
            "table", "gen-fano", "--q", "2", "--fields", "2", "--format", "csv",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 2);
        assert!(out
            .lines()
            .nth(1)
            .unwrap()
            .starts_with("gen_fano,2,2,1,1,paper-solution-verifies,"));
        let (code, _, _) = run_str(&["table", "gen-fano", "--fields", "2"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn search_budget_exit() {
        let (code, out, _) = run_str(&[
            "search",
            "gen-fano",
            "--q",
            "2",
            "--p",
            "3",
            "--exhaustive",
            "--budget",
            "5",
        ]);
        assert_eq!(code, 4);
        assert_eq!(out.lines().last(), Some("STATUS: INCONCLUSIVE"));
    }
}
