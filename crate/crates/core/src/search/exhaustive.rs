//! Depth-first enumeration of scalar local coefficients, one coded edge at a
//! time in topological order. Decoders are never enumerated: a terminal is
//! checked by a span test as soon as all of its inputs have known global
//! vectors, and a failing terminal prunes the whole subtree.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use super::{SearchError, SearchOptions, SearchOutcome, SearchStatus};
use crate::code::CodingAssignment;
use crate::gf::{Field, FieldElement};
use crate::network::{EdgeRole, Network};

struct PlanEdge {
    id: String,
    /// (producer origin, symbol index)
    producers: Vec<(String, usize)>,
}

struct Check {
    inputs: Vec<usize>,
    demand: usize,
}

struct Plan {
    field: Field,
    sources: usize,
    edges: Vec<PlanEdge>,
    /// `checks[l]` runs once the first `l` coded edges are fixed.
    checks: Vec<Vec<Check>>,
    /// Candidate count per edge.
    counts: Vec<u128>,
    normalize: bool,
}

fn pow(base: u128, exp: usize) -> Option<u128> {
    (0..exp).try_fold(1u128, |acc, _| acc.checked_mul(base))
}

/// Number of coefficient vectors for an edge with `n` producers.
fn candidate_count(order: u128, n: usize, normalize: bool) -> Option<u128> {
    if normalize && n > 0 {
        // zero vector plus one representative per projective point
        Some((pow(order, n)? - 1) / (order - 1) + 1)
    } else {
        pow(order, n)
    }
}

impl Plan {
    fn new(net: &Network, field: &Field, normalize: bool) -> Result<Self, SearchError> {
        let s = net.sources.len();
        let mut index: HashMap<String, usize> = net
            .sources
            .iter()
            .enumerate()
            .map(|(i, src)| (src.label.clone(), i))
            .collect();
        let mut edges = Vec::new();
        let order = net
            .topological_order()
            .map_err(crate::code::CodeError::from)?;
        for e in order {
            if net.role(e) != EdgeRole::Coded {
                continue;
            }
            let producers = net
                .inputs(&e.tail)
                .into_iter()
                .map(|p| {
                    let i = index[&p];
                    (p, i)
                })
                .collect();
            index.insert(e.id.clone(), s + edges.len());
            edges.push(PlanEdge {
                id: e.id.clone(),
                producers,
            });
        }
        let mut checks: Vec<Vec<Check>> = (0..=edges.len()).map(|_| Vec::new()).collect();
        for t in &net.terminals {
            let inputs: Vec<usize> = net.inputs(&t.node).iter().map(|o| index[o]).collect();
            let level = inputs
                .iter()
                .filter(|&&i| i >= s)
                .map(|&i| i - s + 1)
                .max()
                .unwrap_or(0);
            for d in &t.demands {
                checks[level].push(Check {
                    inputs: inputs.clone(),
                    demand: net.source_index(d).expect("validated demand"),
                });
            }
        }
        let q = field.order() as u128;
        let counts = edges
            .iter()
            .map(|e| candidate_count(q, e.producers.len(), normalize).unwrap_or(u128::MAX))
            .collect();
        Ok(Plan {
            field: field.clone(),
            sources: s,
            edges,
            checks,
            counts,
            normalize,
        })
    }

    fn space(&self) -> u128 {
        self.counts
            .iter()
            .try_fold(1u128, |acc, &c| acc.checked_mul(c))
            .unwrap_or(u128::MAX)
    }

    /// Writes the `idx`-th coefficient vector (lexicographic, first producer
    /// most significant) into `out`.
    fn candidate(&self, idx: u128, out: &mut [FieldElement]) {
        let q = self.field.order() as u128;
        let n = out.len();
        let fill = |mut v: u128, slots: &mut [FieldElement]| {
            for slot in slots.iter_mut().rev() {
                *slot = self
                    .field
                    .element((v % q) as u64)
                    .expect("digit below field order");
                v /= q;
            }
        };
        if !self.normalize || n == 0 {
            fill(idx, out);
            return;
        }
        out.iter_mut().for_each(|x| *x = FieldElement::ZERO);
        if idx == 0 {
            return;
        }
        // blocks by leading position, last position first (lexicographically smallest)
        let mut rest = idx - 1;
        for lead in (0..n).rev() {
            let block = pow(q, n - 1 - lead).expect("fits: bounded by candidate count");
            if rest < block {
                out[lead] = self.field.one();
                fill(rest, &mut out[lead + 1..]);
                return;
            }
            rest -= block;
        }
        unreachable!("index within candidate count");
    }
}

/// Is `target` (a unit vector) in the span of `rows`? Small dense elimination.
fn unit_in_span(field: &Field, rows: &[&[FieldElement]], target: usize, width: usize) -> bool {
    let mut m: Vec<Vec<FieldElement>> = rows.iter().map(|r| r.to_vec()).collect();
    let mut unit = vec![FieldElement::ZERO; width];
    unit[target] = field.one();
    let mut lead = 0;
    for c in 0..width {
        let Some(pr) = (lead..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(lead, pr);
        let inv = field.inv(m[lead][c]).expect("nonzero pivot");
        let pivot: Vec<FieldElement> = m[lead].iter().map(|&x| field.mul(x, inv)).collect();
        for row in m.iter_mut().skip(lead + 1) {
            let f = row[c];
            if !f.is_zero() {
                for j in c..width {
                    row[j] = field.sub(row[j], field.mul(f, pivot[j]));
                }
            }
        }
        let f = unit[c];
        if !f.is_zero() {
            for j in c..width {
                unit[j] = field.sub(unit[j], field.mul(f, pivot[j]));
            }
        }
        m[lead] = pivot;
        lead += 1;
        if lead == m.len() {
            break;
        }
    }
    unit.iter().all(|x| x.is_zero())
}

struct Worker<'p> {
    plan: &'p Plan,
    /// Global vectors of all symbols: sources then coded edges.
    globals: Vec<Vec<FieldElement>>,
    coeffs: Vec<Vec<FieldElement>>,
    searched: u64,
}

impl<'p> Worker<'p> {
    fn new(plan: &'p Plan) -> Self {
        let s = plan.sources;
        let field = &plan.field;
        let mut globals: Vec<Vec<FieldElement>> = (0..s)
            .map(|i| {
                let mut v = vec![FieldElement::ZERO; s];
                v[i] = field.one();
                v
            })
            .collect();
        globals.extend(plan.edges.iter().map(|_| vec![FieldElement::ZERO; s]));
        let coeffs = plan
            .edges
            .iter()
            .map(|e| vec![FieldElement::ZERO; e.producers.len()])
            .collect();
        Worker {
            plan,
            globals,
            coeffs,
            searched: 0,
        }
    }

    fn checks_pass(&self, level: usize) -> bool {
        let width = self.plan.sources;
        self.plan.checks[level].iter().all(|c| {
            let rows: Vec<&[FieldElement]> = c
                .inputs
                .iter()
                .map(|&i| self.globals[i].as_slice())
                .collect();
            unit_in_span(&self.plan.field, &rows, c.demand, width)
        })
    }

    /// Fixes edge `level` to candidate `idx`; returns whether the terminals that
    /// become checkable all pass.
    fn place(&mut self, level: usize, idx: u128) -> bool {
        self.searched += 1;
        let plan = self.plan;
        let field = &plan.field;
        let s = plan.sources;
        plan.candidate(idx, &mut self.coeffs[level]);
        let mut g = vec![FieldElement::ZERO; s];
        for (&c, &(_, src)) in self.coeffs[level].iter().zip(&plan.edges[level].producers) {
            if c.is_zero() {
                continue;
            }
            for (acc, &x) in g.iter_mut().zip(&self.globals[src]) {
                *acc = field.add(*acc, field.mul(c, x));
            }
        }
        self.globals[s + level] = g;
        self.checks_pass(level + 1)
    }

    fn dfs(&mut self, level: usize) -> bool {
        if level == self.plan.edges.len() {
            return true;
        }
        for idx in 0..self.plan.counts[level] {
            if self.place(level, idx) && self.dfs(level + 1) {
                return true;
            }
        }
        false
    }
}

/// Size of the coefficient space the exhaustive search would enumerate.
pub fn search_space_size(
    net: &Network,
    field: &Field,
    normalize: bool,
) -> Result<u128, SearchError> {
    Ok(Plan::new(net, field, normalize)?.space())
}

fn to_assignment(
    net: Arc<Network>,
    plan: &Plan,
    coeffs: &[Vec<FieldElement>],
) -> Result<CodingAssignment, SearchError> {
    let mut a = CodingAssignment::new(net, plan.field.clone(), 1)?;
    for (edge, cs) in plan.edges.iter().zip(coeffs) {
        for ((producer, _), &c) in edge.producers.iter().zip(cs) {
            a.set_scalar(producer, &edge.id, c)?;
        }
    }
    Ok(a)
}

/// Exhaustive search for a scalar (k = 1) linear solution. Returns the first
/// solution in lexicographic order of coefficient vectors, or `ExhaustedNone`.
pub fn exhaustive_scalar_search(
    net: Arc<Network>,
    field: &Field,
    opts: &SearchOptions,
) -> Result<SearchOutcome, SearchError> {
    let start = Instant::now();
    net.validate().map_err(crate::code::CodeError::from)?;
    let plan = Plan::new(&net, field, opts.normalize)?;
    let space = plan.space();
    if space > opts.budget {
        return Err(SearchError::BudgetExceeded {
            required: space,
            budget: opts.budget,
        });
    }

    let found: Option<Vec<Vec<FieldElement>>>;
    let searched: u64;
    if !Worker::new(&plan).checks_pass(0) {
        found = None;
        searched = 0;
    } else if plan.edges.is_empty() {
        found = Some(Vec::new());
        searched = 0;
    } else if opts.jobs <= 1 {
        let mut w = Worker::new(&plan);
        found = w.dfs(0).then(|| w.coeffs.clone());
        searched = w.searched;
    } else {
        let counter = AtomicU64::new(0);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| SearchError::Pool(e.to_string()))?;
        let first = plan.counts[0];
        let per_partition = |idx: u128| {
            let mut w = Worker::new(&plan);
            let ok = w.place(0, idx) && w.dfs(1);
            counter.fetch_add(w.searched, Ordering::Relaxed);
            ok.then(|| w.coeffs.clone())
        };
        found = pool.install(|| {
            (0..first as u64)
                .into_par_iter()
                .find_map_first(|idx| per_partition(idx as u128))
        });
        searched = counter.load(Ordering::Relaxed);
    }

    let (status, assignment, report) = match found {
        Some(coeffs) => {
            let a = to_assignment(net, &plan, &coeffs)?;
            let report = a.verify();
            assert!(
                report.solved,
                "search accepted an assignment that does not verify"
            );
            (SearchStatus::Found, Some(a), Some(report))
        }
        None => (SearchStatus::ExhaustedNone, None, None),
    };
    Ok(SearchOutcome {
        status,
        assignment,
        report,
        searched,
        elapsed: start.elapsed(),
    })
}
