//! Acyclic multi-source networks: sources, intermediate and relay nodes,
//! terminals with demand sets.
//!
//! Edge roles are derived from the tail node:
//!
//! * an edge out of a **source** is a direct edge and carries that source's
//!   message unchanged;
//! * an edge out of a **relay** node forwards the relay's single input unchanged
//!   (used to fan a bottleneck edge out to several consumers);
//! * an edge out of an **intermediate** node is a coded edge: a linear
//!   combination of the node's inputs.
//!
//! Every input of a node therefore resolves to an *origin*: either a source
//! label or the id of a coded edge. Local coding coefficients are keyed by
//! `(origin, consumer)`.

mod builder;
mod dot;

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use builder::NetworkBuilder;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum NetworkError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate node id `{0}`")]
    DuplicateNode(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("edge `{edge}` references unknown node `{node}`")]
    UnknownNode { edge: String, node: String },
    #[error("edge `{0}` is a self-loop")]
    SelfLoop(String),
    #[error("edge `{0}` repeats an existing (tail, head, index) triple")]
    ParallelIndexClash(String),
    #[error("source `{node}` has incoming edge `{edge}`")]
    SourceHasInEdge { node: String, edge: String },
    #[error("terminal `{node}` has outgoing edge `{edge}`")]
    TerminalHasOutEdge { node: String, edge: String },
    #[error("source node `{0}` is not declared in the source list (or declared twice)")]
    SourceDeclaration(String),
    #[error("`{0}` is declared as a source but is not a source node")]
    NotASource(String),
    #[error("`{0}` is declared as a terminal but is not a terminal node")]
    NotATerminal(String),
    #[error("duplicate source label `{0}`")]
    DuplicateLabel(String),
    #[error("terminal `{terminal}` demands unknown source `{label}`")]
    UnknownDemand { terminal: String, label: String },
    #[error("relay node `{node}` must have exactly one incoming edge, has {in_degree}")]
    RelayInDegree { node: String, in_degree: usize },
    #[error("node `{node}` receives `{origin}` on more than one incoming edge")]
    DuplicateInput { node: String, origin: String },
    #[error("source label `{0}` collides with a coded edge id")]
    LabelClash(String),
    #[error("cycle detected through edge `{0}`")]
    CycleDetected(String),
}

impl From<serde_json::Error> for NetworkError {
    fn from(e: serde_json::Error) -> Self {
        NetworkError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Source,
    Intermediate,
    Relay,
    Terminal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub kind: NodeKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    pub tail: String,
    pub head: String,
    /// Disambiguates parallel edges between the same pair of nodes.
    pub index: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceDecl {
    pub node: String,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminalDecl {
    pub node: String,
    pub demands: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl Default for Meta {
    fn default() -> Self {
        Meta {
            family: "custom".into(),
            q: None,
            provenance: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeRole {
    Direct,
    Forward,
    Coded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Summary {
    pub sources: usize,
    pub coded_edges: usize,
    pub terminals: usize,
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} sources, {} coded edges, {} terminals",
            self.sources, self.coded_edges, self.terminals
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Network {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    pub sources: Vec<SourceDecl>,
    pub terminals: Vec<TerminalDecl>,
    #[serde(default)]
    pub meta: Meta,
}

impl Network {
    pub fn node(&self, id: &str) -> Option<&Node> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn kind(&self, node: &str) -> Option<NodeKind> {
        self.node(node).map(|n| n.kind)
    }

    pub fn in_edges<'a>(&'a self, node: &'a str) -> impl Iterator<Item = &'a Edge> + 'a {
        self.edges.iter().filter(move |e| e.head == node)
    }

    pub fn out_edges<'a>(&'a self, node: &'a str) -> impl Iterator<Item = &'a Edge> + 'a {
        self.edges.iter().filter(move |e| e.tail == node)
    }

    pub fn role(&self, edge: &Edge) -> EdgeRole {
        match self.kind(&edge.tail) {
            Some(NodeKind::Source) => EdgeRole::Direct,
            Some(NodeKind::Relay) => EdgeRole::Forward,
            _ => EdgeRole::Coded,
        }
    }

    pub fn coded_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges
            .iter()
            .filter(|e| self.role(e) == EdgeRole::Coded)
    }

    /// Source labels in declaration order; this order fixes the column blocks
    /// of every global coding matrix.
    pub fn source_labels(&self) -> Vec<&str> {
        self.sources.iter().map(|s| s.label.as_str()).collect()
    }

    pub fn source_index(&self, label: &str) -> Option<usize> {
        self.sources.iter().position(|s| s.label == label)
    }

    fn source_label_of(&self, node: &str) -> Option<&str> {
        self.sources
            .iter()
            .find(|s| s.node == node)
            .map(|s| s.label.as_str())
    }

    pub fn terminal(&self, node: &str) -> Option<&TerminalDecl> {
        self.terminals.iter().find(|t| t.node == node)
    }

    /// The symbol carried by `edge`: a source label for direct edges, the coded
    /// edge id for coded edges, and the origin of the relay's input for forwards.
    pub fn origin(&self, edge: &Edge) -> String {
        let mut cur = edge;
        // bounded by the edge count; a validated network has no relay cycles
        for _ in 0..=self.edges.len() {
            match self.role(cur) {
                EdgeRole::Direct => {
                    return self
                        .source_label_of(&cur.tail)
                        .unwrap_or(&cur.tail)
                        .to_string()
                }
                EdgeRole::Coded => return cur.id.clone(),
                EdgeRole::Forward => match self.in_edges(&cur.tail).next() {
                    Some(e) => cur = e,
                    None => return cur.id.clone(),
                },
            }
        }
        cur.id.clone()
    }

    /// Distinct origins arriving at `node`, in edge-list order.
    pub fn inputs(&self, node: &str) -> Vec<String> {
        let mut seen = HashSet::new();
        self.in_edges(node)
            .map(|e| self.origin(e))
            .filter(|o| seen.insert(o.clone()))
            .collect()
    }

    pub fn summary(&self) -> Summary {
        Summary {
            sources: self.sources.len(),
            coded_edges: self.coded_edges().count(),
            terminals: self.terminals.len(),
        }
    }

    /// Nodes reachable from `start` along directed edges (including `start`).
    pub fn reachable_from(&self, start: &str) -> BTreeSet<String> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([start.to_string()]);
        while let Some(n) = queue.pop_front() {
            if !seen.insert(n.clone()) {
                continue;
            }
            for e in self.out_edges(&n) {
                queue.push_back(e.head.clone());
            }
        }
        seen
    }

    pub fn has_path(&self, from: &str, to: &str) -> bool {
        self.reachable_from(from).contains(to)
    }

    /// Edges ordered so that each edge follows every edge into its tail. Ties
    /// are broken by position in the edge list, so the order is deterministic.
    pub fn topological_order(&self) -> Result<Vec<&Edge>, NetworkError> {
        let n = self.edges.len();
        let mut waiting: HashMap<&str, usize> = HashMap::new();
        for e in &self.edges {
            *waiting.entry(e.head.as_str()).or_default() += 1;
        }
        let mut out_of: HashMap<&str, Vec<usize>> = HashMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            out_of.entry(e.tail.as_str()).or_default().push(i);
        }
        let mut heap = BinaryHeap::new();
        for (i, e) in self.edges.iter().enumerate() {
            if waiting.get(e.tail.as_str()).copied().unwrap_or(0) == 0 {
                heap.push(Reverse(i));
            }
        }
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(i)) = heap.pop() {
            let e = &self.edges[i];
            order.push(e);
            let left = waiting.get_mut(e.head.as_str()).expect("counted above");
            *left -= 1;
            if *left == 0 {
                for &j in out_of.get(e.head.as_str()).map_or(&[][..], |v| v) {
                    heap.push(Reverse(j));
                }
            }
        }
        if order.len() < n {
            let placed: HashSet<&str> = order.iter().map(|e| e.id.as_str()).collect();
            let stuck = self
                .edges
                .iter()
                .find(|e| !placed.contains(e.id.as_str()))
                .expect("some edge was not placed");
            return Err(NetworkError::CycleDetected(stuck.id.clone()));
        }
        Ok(order)
    }

    /// Checks every structural invariant and reports the first violation.
    pub fn validate(&self) -> Result<(), NetworkError> {
        let mut kinds: HashMap<&str, NodeKind> = HashMap::new();
        for n in &self.nodes {
            if kinds.insert(&n.id, n.kind).is_some() {
                return Err(NetworkError::DuplicateNode(n.id.clone()));
            }
        }
        let mut edge_ids = HashSet::new();
        let mut triples = HashSet::new();
        for e in &self.edges {
            if !edge_ids.insert(e.id.as_str()) {
                return Err(NetworkError::DuplicateEdge(e.id.clone()));
            }
            for end in [&e.tail, &e.head] {
                if !kinds.contains_key(end.as_str()) {
                    return Err(NetworkError::UnknownNode {
                        edge: e.id.clone(),
                        node: end.clone(),
                    });
                }
            }
            if e.tail == e.head {
                return Err(NetworkError::SelfLoop(e.id.clone()));
            }
            if !triples.insert((e.tail.as_str(), e.head.as_str(), e.index)) {
                return Err(NetworkError::ParallelIndexClash(e.id.clone()));
            }
        }
        for e in &self.edges {
            if kinds[e.head.as_str()] == NodeKind::Source {
                return Err(NetworkError::SourceHasInEdge {
                    node: e.head.clone(),
                    edge: e.id.clone(),
                });
            }
            if kinds[e.tail.as_str()] == NodeKind::Terminal {
                return Err(NetworkError::TerminalHasOutEdge {
                    node: e.tail.clone(),
                    edge: e.id.clone(),
                });
            }
        }

        let mut labels = BTreeMap::new();
        let mut declared = HashSet::new();
        for s in &self.sources {
            if kinds.get(s.node.as_str()) != Some(&NodeKind::Source) {
                return Err(NetworkError::NotASource(s.node.clone()));
            }
            if !declared.insert(s.node.as_str()) {
                return Err(NetworkError::SourceDeclaration(s.node.clone()));
            }
            if labels.insert(s.label.as_str(), s.node.as_str()).is_some() {
                return Err(NetworkError::DuplicateLabel(s.label.clone()));
            }
        }
        if let Some(n) = self
            .nodes
            .iter()
            .find(|n| n.kind == NodeKind::Source && !declared.contains(n.id.as_str()))
        {
            return Err(NetworkError::SourceDeclaration(n.id.clone()));
        }
        for t in &self.terminals {
            if kinds.get(t.node.as_str()) != Some(&NodeKind::Terminal) {
                return Err(NetworkError::NotATerminal(t.node.clone()));
            }
            if let Some(d) = t.demands.iter().find(|d| !labels.contains_key(d.as_str())) {
                return Err(NetworkError::UnknownDemand {
                    terminal: t.node.clone(),
                    label: d.clone(),
                });
            }
        }

        self.topological_order()?;

        for n in self.nodes.iter().filter(|n| n.kind == NodeKind::Relay) {
            let in_degree = self.in_edges(&n.id).count();
            if in_degree != 1 {
                return Err(NetworkError::RelayInDegree {
                    node: n.id.clone(),
                    in_degree,
                });
            }
        }
        for n in &self.nodes {
            let mut seen = HashSet::new();
            for e in self.in_edges(&n.id) {
                let origin = self.origin(e);
                if !seen.insert(origin.clone()) {
                    return Err(NetworkError::DuplicateInput {
                        node: n.id.clone(),
                        origin,
                    });
                }
            }
        }
        if let Some(e) = self
            .coded_edges()
            .find(|e| labels.contains_key(e.id.as_str()))
        {
            return Err(NetworkError::LabelClash(e.id.clone()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("network serializes")
    }

    /// Parses and validates a network.
    pub fn from_json(text: &str) -> Result<Network, NetworkError> {
        let net: Network = serde_json::from_str(text)?;
        net.validate()?;
        Ok(net)
    }

    pub fn to_dot(&self) -> String {
        dot::render(self)
    }
}
