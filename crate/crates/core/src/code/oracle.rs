//! Brute-force decodability oracle. It pushes every possible source tuple
//! through the network symbol by symbol and checks that each demanded block is
//! constant on every fiber of the terminal's received tuple. It shares no code
//! with the rank-based verifier beyond field arithmetic and matrix-vector
//! products.

use std::collections::HashMap;

use super::{CodeError, CodingAssignment};
use crate::gf::{FieldElement, FieldMatrix};
use crate::network::EdgeRole;

pub const DEFAULT_ORACLE_BUDGET: u128 = 1 << 20;

pub(super) fn function_check(a: &CodingAssignment, budget: u128) -> Result<bool, CodeError> {
    let net = &a.network;
    let field = &a.field;
    let k = a.k;
    let s = net.sources.len();
    let digits = s * k;
    let order = field.order() as u128;
    let total = (0..digits).try_fold(1u128, |acc, _| acc.checked_mul(order));
    let total = match total {
        Some(t) if t <= budget => t,
        _ => {
            return Err(CodeError::BudgetExceeded {
                required: total.unwrap_or(u128::MAX),
                budget,
            })
        }
    };

    // symbol table: sources first, then coded edges in topological order
    let mut index: HashMap<String, usize> = net
        .sources
        .iter()
        .enumerate()
        .map(|(i, src)| (src.label.clone(), i))
        .collect();
    let mut steps: Vec<Vec<(usize, &FieldMatrix)>> = Vec::new();
    for e in net.topological_order()? {
        if net.role(e) != EdgeRole::Coded {
            continue;
        }
        let terms = net
            .inputs(&e.tail)
            .iter()
            .filter_map(|p| a.get(p, &e.id).map(|m| (index[p], m)))
            .collect();
        index.insert(e.id.clone(), s + steps.len());
        steps.push(terms);
    }
    let checks: Vec<(Vec<usize>, usize)> = net
        .terminals
        .iter()
        .flat_map(|t| {
            let inputs: Vec<usize> = net.inputs(&t.node).iter().map(|o| index[o]).collect();
            t.demands
                .iter()
                .map(move |d| (inputs.clone(), net.source_index(d).expect("validated")))
        })
        .collect();

    let mut fibers: Vec<HashMap<Vec<FieldElement>, Vec<FieldElement>>> =
        vec![HashMap::new(); checks.len()];
    let mut symbols: Vec<Vec<FieldElement>> = vec![Vec::new(); s + steps.len()];
    let zero = vec![field.zero(); k];
    for n in 0..total {
        let mut rest = n;
        for sym in symbols.iter_mut().take(s) {
            sym.clear();
            for _ in 0..k {
                sym.push(field.element((rest % order) as u64).expect("digit < order"));
                rest /= order;
            }
        }
        for (i, terms) in steps.iter().enumerate() {
            let mut y = zero.clone();
            for &(src, m) in terms {
                let part = m.apply(&symbols[src]);
                for (acc, v) in y.iter_mut().zip(part) {
                    *acc = field.add(*acc, v);
                }
            }
            symbols[s + i] = y;
        }
        for (c, (inputs, demand)) in checks.iter().enumerate() {
            let received: Vec<FieldElement> = inputs
                .iter()
                .flat_map(|&i| symbols[i].iter().copied())
                .collect();
            let wanted = &symbols[*demand];
            match fibers[c].get(&received) {
                Some(prev) if prev != wanted => return Ok(false),
                Some(_) => {}
                None => {
                    fibers[c].insert(received, wanted.clone());
                }
            }
        }
    }
    Ok(true)
}
