use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use super::{exhaustive_scalar_search, SearchError, SearchOptions, SearchStatus};
use crate::code::CodeError;
use crate::families::{Family, FamilySpec};
use crate::gf::Field;
use crate::solutions::{
    fano_paper_solution, fano_pattern, non_fano_paper_solution, non_fano_pattern, SolutionError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableMode {
    /// Explicit constructions only (parameterized families).
    #[default]
    Constructive,
    /// Scalar enumeration; k ≥ 2 cells are inconclusive.
    Exhaustive,
    /// Construction when the characteristic condition holds, otherwise
    /// enumeration when k = 1 and affordable, otherwise the failing pattern.
    Auto,
}

impl FromStr for TableMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "constructive" => Ok(TableMode::Constructive),
            "exhaustive" => Ok(TableMode::Exhaustive),
            "auto" => Ok(TableMode::Auto),
            other => Err(format!(
                "unknown mode {other:?} (expected constructive, exhaustive or auto)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    PaperSolutionVerifies,
    /// The explicit pattern was applied against its precondition and a
    /// terminal failed. Evidence of unsolvability, not a certificate.
    PatternFails {
        terminal: String,
    },
    ExhaustiveNone,
    FoundBySearch,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::PaperSolutionVerifies => "paper-solution-verifies",
            Verdict::PatternFails { .. } => "pattern-fails",
            Verdict::ExhaustiveNone => "exhaustive-none",
            Verdict::FoundBySearch => "found-by-search",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    /// `Some(true)` for a verified solution, `Some(false)` for a certificate or
    /// a failing pattern, `None` when nothing is known.
    pub fn solvable(&self) -> Option<bool> {
        match self {
            Verdict::PaperSolutionVerifies | Verdict::FoundBySearch => Some(true),
            Verdict::PatternFails { .. } | Verdict::ExhaustiveNone => Some(false),
            Verdict::Inconclusive => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TableRow {
    pub family: Family,
    pub q: u32,
    pub p: u64,
    pub m: u32,
    pub k: usize,
    pub verdict: Verdict,
    pub searched: u64,
    pub elapsed: Duration,
    pub budget_exceeded: bool,
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub rows: Vec<TableRow>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("family,q,p,m,k,verdict,searched,elapsed_ms\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.family,
                r.q,
                r.p,
                r.m,
                r.k,
                r.verdict.as_str(),
                r.searched,
                r.elapsed.as_millis()
            );
        }
        out
    }

    pub fn render_text(&self) -> String {
        let header = [
            "family",
            "q",
            "p",
            "m",
            "k",
            "verdict",
            "solvable",
            "searched",
            "elapsed_ms",
        ];
        let cells: Vec<[String; 9]> = self
            .rows
            .iter()
            .map(|r| {
                let verdict = match &r.verdict {
                    Verdict::PatternFails { terminal } => format!("pattern-fails at {terminal}"),
                    v => v.as_str().to_string(),
                };
                let solvable = match &r.verdict {
                    Verdict::PatternFails { .. } => "no (pattern)",
                    v => match v.solvable() {
                        Some(true) => "yes",
                        Some(false) => "no",
                        None => "?",
                    },
                };
                [
                    r.family.to_string(),
                    r.q.to_string(),
                    r.p.to_string(),
                    r.m.to_string(),
                    r.k.to_string(),
                    verdict,
                    solvable.to_string(),
                    r.searched.to_string(),
                    r.elapsed.as_millis().to_string(),
                ]
            })
            .collect();
        let mut widths = header.map(str::len);
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let mut out = String::new();
        let mut line = |row: &[&str]| {
            let parts: Vec<String> = row
                .iter()
                .zip(widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            let _ = writeln!(out, "{}", parts.join("  ").trim_end());
        };
        line(&header);
        for row in &cells {
            let refs: Vec<&str> = row.iter().map(String::as_str).collect();
            line(&refs);
        }
        out
    }

    /// True when the table is nonempty and every cell hit the search budget.
    pub fn all_budget_exceeded(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.budget_exceeded)
    }
}

fn constructive(
    family: Family,
    q: u32,
    field: &Field,
    k: usize,
) -> Result<Option<Verdict>, SearchError> {
    let attempt = match family {
        Family::GenFano => fano_paper_solution(q, field, k),
        Family::GenNonFano => non_fano_paper_solution(q, field, k),
        _ => return Ok(None),
    };
    match attempt {
        Ok(a) => Ok(Some(if a.verify().solved {
            Verdict::PaperSolutionVerifies
        } else {
            Verdict::Inconclusive
        })),
        Err(SolutionError::CharacteristicMismatch { .. }) => {
            let pattern = match family {
                Family::GenFano => fano_pattern(q, field, k)?,
                _ => non_fano_pattern(q, field, k)?,
            };
            let report = pattern.verify();
            Ok(Some(match report.first_failure() {
                Some(d) => Verdict::PatternFails {
                    terminal: d.terminal.clone(),
                },
                None => Verdict::FoundBySearch,
            }))
        }
        Err(e) => Err(e.into()),
    }
}

fn condition_holds(family: Family, q: u32, p: u32) -> bool {
    match family {
        Family::GenFano => q.is_multiple_of(p),
        Family::GenNonFano => !q.is_multiple_of(p),
        _ => false,
    }
}

/// One row per (q, p) in the given order. Cells that exceed the search budget
/// are reported inconclusive.
pub fn characteristic_table(
    family: Family,
    qs: &[u32],
    primes: &[u64],
    m: u32,
    k: usize,
    mode: TableMode,
    opts: &SearchOptions,
) -> Result<Table, SearchError> {
    let mut rows = Vec::new();
    for &q in qs {
        let spec = FamilySpec::new(family, q)?;
        let net = Arc::new(spec.build()?);
        for &p in primes {
            let field = Field::new(p, m).map_err(CodeError::from)?;
            let start = Instant::now();
            let mut searched = 0;
            let mut budget_exceeded = false;
            let mut search = || -> Result<Verdict, SearchError> {
                if k != 1 {
                    return Ok(Verdict::Inconclusive);
                }
                match exhaustive_scalar_search(net.clone(), &field, opts) {
                    Ok(out) => {
                        searched = out.searched;
                        Ok(match out.status {
                            SearchStatus::Found => Verdict::FoundBySearch,
                            SearchStatus::ExhaustedNone => Verdict::ExhaustiveNone,
                            SearchStatus::Inconclusive => Verdict::Inconclusive,
                        })
                    }
                    Err(SearchError::BudgetExceeded { .. }) => {
                        budget_exceeded = true;
                        Ok(Verdict::Inconclusive)
                    }
                    Err(e) => Err(e),
                }
            };
            let verdict = match mode {
                TableMode::Constructive => {
                    constructive(family, spec.q, &field, k)?.unwrap_or(Verdict::Inconclusive)
                }
                TableMode::Exhaustive => search()?,
                TableMode::Auto => {
                    if !family.is_parameterized() {
                        search()?
                    } else if condition_holds(family, spec.q, field.characteristic()) {
                        constructive(family, spec.q, &field, k)?.unwrap_or(Verdict::Inconclusive)
                    } else {
                        let v = search()?;
                        if v == Verdict::Inconclusive {
                            budget_exceeded = false;
                            constructive(family, spec.q, &field, k)?
                                .unwrap_or(Verdict::Inconclusive)
                        } else {
                            v
                        }
                    }
                }
            };
            rows.push(TableRow {
                family,
                q: spec.q,
                p,
                m,
                k,
                verdict,
                searched,
                elapsed: start.elapsed(),
                budget_exceeded,
            });
        }
    }
    Ok(Table { rows })
}
