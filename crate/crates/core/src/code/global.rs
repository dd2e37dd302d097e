use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{CodeError, CodingAssignment};
use crate::gf::{Field, FieldMatrix, MatrixError};
use crate::network::{EdgeRole, Network};

/// Global coding matrices: for every edge, the k × (S·k) map from the stacked
/// source messages to the edge symbol. Column blocks follow the network's
/// source order.
#[derive(Debug, Clone)]
pub struct GlobalCode {
    network: Arc<Network>,
    field: Field,
    k: usize,
    by_edge: BTreeMap<String, FieldMatrix>,
}

/// Outcome of decoding one demanded source at one terminal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decoding {
    /// Decoder blocks, one k×k matrix per terminal input (by origin).
    Decodable(Vec<(String, FieldMatrix)>),
    /// `rank([G_t; selector]) - rank(G_t)`; always positive.
    NotDecodable { rank_deficit: usize },
}

impl Decoding {
    pub fn is_decodable(&self) -> bool {
        matches!(self, Decoding::Decodable(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandReport {
    pub terminal: String,
    pub demand: String,
    pub decoding: Decoding,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolvabilityReport {
    pub demands: Vec<DemandReport>,
    pub solved: bool,
}

impl SolvabilityReport {
    pub fn failures(&self) -> impl Iterator<Item = &DemandReport> {
        self.demands.iter().filter(|d| !d.decoding.is_decodable())
    }

    pub fn first_failure(&self) -> Option<&DemandReport> {
        self.failures().next()
    }
}

impl fmt::Display for SolvabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.demands {
            match &d.decoding {
                Decoding::Decodable(blocks) => {
                    let parts: Vec<String> = blocks
                        .iter()
                        .filter(|(_, m)| !m.is_zero())
                        .map(|(o, m)| format!("{o}:{:?}", m.to_rows()))
                        .collect();
                    writeln!(
                        f,
                        "{} <- {}: decodable  decoder {}",
                        d.terminal,
                        d.demand,
                        parts.join(" ")
                    )?;
                }
                Decoding::NotDecodable { rank_deficit } => writeln!(
                    f,
                    "{} <- {}: NOT decodable (rank deficit {})",
                    d.terminal, d.demand, rank_deficit
                )?,
            }
        }
        write!(f, "solved: {}", self.solved)
    }
}

impl GlobalCode {
    pub(super) fn compute(a: &CodingAssignment) -> Self {
        let net = a.network.clone();
        let (field, k) = (a.field.clone(), a.k);
        let width = net.sources.len() * k;
        let mut by_edge: BTreeMap<String, FieldMatrix> = BTreeMap::new();
        let order = net
            .topological_order()
            .expect("assignment networks are validated");
        for e in order {
            let g = match net.role(e) {
                EdgeRole::Direct => {
                    let label = net.origin(e);
                    selector(&net, &field, k, &label)
                }
                EdgeRole::Forward => {
                    let input = net.in_edges(&e.tail).next().expect("relays have one input");
                    by_edge[&input.id].clone()
                }
                EdgeRole::Coded => {
                    let mut acc = FieldMatrix::zeros(&field, k, width);
                    for producer in net.inputs(&e.tail) {
                        let Some(local) = a.get(&producer, &e.id) else {
                            continue;
                        };
                        let g_in = origin_code(&net, &field, k, &by_edge, &producer);
                        let term = local.mul(&g_in).expect("shapes checked on insert");
                        acc = acc.add(&term).expect("same shape");
                    }
                    acc
                }
            };
            by_edge.insert(e.id.clone(), g);
        }
        GlobalCode {
            network: net,
            field,
            k,
            by_edge,
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edge(&self, id: &str) -> Option<&FieldMatrix> {
        self.by_edge.get(id)
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &FieldMatrix)> {
        self.by_edge.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Global matrix of an origin (source label or coded edge id).
    pub fn origin(&self, origin: &str) -> FieldMatrix {
        origin_code(&self.network, &self.field, self.k, &self.by_edge, origin)
    }

    /// Stacked global matrices of the terminal's inputs.
    pub fn terminal_matrix(&self, terminal: &str) -> Result<(Vec<String>, FieldMatrix), CodeError> {
        if self.network.terminal(terminal).is_none() {
            return Err(CodeError::UnknownTerminal(terminal.to_string()));
        }
        let inputs = self.network.inputs(terminal);
        let parts: Vec<FieldMatrix> = inputs.iter().map(|o| self.origin(o)).collect();
        let refs: Vec<&FieldMatrix> = parts.iter().collect();
        let width = self.network.sources.len() * self.k;
        let g = FieldMatrix::vstack(&self.field, width, &refs)?;
        Ok((inputs, g))
    }

    /// Solves for a decoder `X` with `X · G_t = selector(label)`.
    pub fn decodable(&self, terminal: &str, label: &str) -> Result<Decoding, CodeError> {
        let (inputs, g) = self.terminal_matrix(terminal)?;
        let t = self.network.terminal(terminal).expect("checked above");
        if !t.demands.iter().any(|d| d == label) {
            return Err(CodeError::UnknownLabel {
                terminal: terminal.to_string(),
                label: label.to_string(),
            });
        }
        let target = selector(&self.network, &self.field, self.k, label);
        match FieldMatrix::solve_left(&g, &target) {
            Ok(x) => {
                let k = self.k;
                let blocks = inputs
                    .into_iter()
                    .enumerate()
                    .map(|(i, o)| (o, x.block(0, i * k, k, k)))
                    .collect();
                Ok(Decoding::Decodable(blocks))
            }
            Err(MatrixError::NoSolution) => {
                let both = FieldMatrix::vstack(&self.field, g.cols(), &[&g, &target])?;
                Ok(Decoding::NotDecodable {
                    rank_deficit: both.rank() - g.rank(),
                })
            }
            Err(e) => Err(e.into()),
        }
    }

    pub fn report(&self) -> SolvabilityReport {
        let mut demands = Vec::new();
        for t in &self.network.terminals {
            for d in &t.demands {
                let decoding = self
                    .decodable(&t.node, d)
                    .expect("terminal and demand come from the network");
                demands.push(DemandReport {
                    terminal: t.node.clone(),
                    demand: d.clone(),
                    decoding,
                });
            }
        }
        let solved = demands.iter().all(|d| d.decoding.is_decodable());
        SolvabilityReport { demands, solved }
    }
}

/// `[0 .. I_k .. 0]` with the identity in the block of `label`.
pub(crate) fn selector(net: &Network, field: &Field, k: usize, label: &str) -> FieldMatrix {
    let idx = net.source_index(label).expect("label is a known source");
    let mut m = FieldMatrix::zeros(field, k, net.sources.len() * k);
    m.set_block(0, idx * k, &FieldMatrix::identity(field, k));
    m
}

fn origin_code(
    net: &Network,
    field: &Field,
    k: usize,
    by_edge: &BTreeMap<String, FieldMatrix>,
    origin: &str,
) -> FieldMatrix {
    match by_edge.get(origin) {
        Some(g) => g.clone(),
        None => selector(net, field, k, origin),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::NetworkBuilder;

    #[test]
    fn identity_chain() {
        let mut b = NetworkBuilder::new("chain", None);
        b.source("s");
        b.source("x");
        b.intermediate("a");
        b.terminal("t", &["s"]);
        b.edge("s", "a");
        b.coded("a>t", "a", "t");
        let net = Arc::new(b.build());
        let f = Field::prime(5).unwrap();
        let mut a = CodingAssignment::new(net.clone(), f.clone(), 1).unwrap();
        a.set_scalar("s", "a>t", f.one()).unwrap();
        let g = a.global_codes();
        assert_eq!(g.edge("a>t").unwrap(), &selector(&net, &f, 1, "s"));
        assert!(a.verify().solved);
    }

    #[test]
    fn direct_terminal_decodes_with_identity() {
        let mut b = NetworkBuilder::new("direct", None);
        b.source("s");
        b.terminal("t", &["s"]);
        b.edge("s", "t");
        let net = Arc::new(b.build());
        let f = Field::prime(3).unwrap();
        let a = CodingAssignment::new(net, f.clone(), 2).unwrap();
        let g = a.global_codes();
        assert_eq!(
            g.decodable("t", "s").unwrap(),
            Decoding::Decodable(vec![("s".into(), FieldMatrix::identity(&f, 2))])
        );
        assert!(matches!(
            g.decodable("nope", "s"),
            Err(CodeError::UnknownTerminal(_))
        ));
        assert!(matches!(
            g.decodable("t", "zz"),
            Err(CodeError::UnknownLabel { .. })
        ));
    }
}
