use super::{Edge, Meta, Network, Node, NodeKind, SourceDecl, TerminalDecl};

/// Incremental construction of a [`Network`]. Sources use their label as node id.
/// Non-coded edges get the id `tail>head` (suffixed `#i` for parallel copies).
#[derive(Debug, Default)]
pub struct NetworkBuilder {
    net: Network,
}

impl NetworkBuilder {
    pub fn new(family: &str, q: Option<u32>) -> Self {
        NetworkBuilder {
            net: Network {
                meta: Meta {
                    family: family.to_string(),
                    q,
                    provenance: None,
                },
                ..Network::default()
            },
        }
    }

    pub fn provenance(&mut self, note: &str) -> &mut Self {
        self.net.meta.provenance = Some(note.to_string());
        self
    }

    fn node(&mut self, id: &str, kind: NodeKind) {
        self.net.nodes.push(Node {
            id: id.to_string(),
            kind,
        });
    }

    pub fn source(&mut self, label: &str) -> &mut Self {
        self.node(label, NodeKind::Source);
        self.net.sources.push(SourceDecl {
            node: label.to_string(),
            label: label.to_string(),
        });
        self
    }

    pub fn intermediate(&mut self, id: &str) -> &mut Self {
        self.node(id, NodeKind::Intermediate);
        self
    }

    pub fn relay(&mut self, id: &str) -> &mut Self {
        self.node(id, NodeKind::Relay);
        self
    }

    pub fn terminal<S: AsRef<str>>(&mut self, id: &str, demands: &[S]) -> &mut Self {
        self.node(id, NodeKind::Terminal);
        self.net.terminals.push(TerminalDecl {
            node: id.to_string(),
            demands: demands.iter().map(|d| d.as_ref().to_string()).collect(),
        });
        self
    }

    fn next_index(&self, tail: &str, head: &str) -> u32 {
        self.net
            .edges
            .iter()
            .filter(|e| e.tail == tail && e.head == head)
            .count() as u32
    }

    /// Plain (direct or forwarding) edge.
    pub fn edge(&mut self, tail: &str, head: &str) -> &mut Self {
        let index = self.next_index(tail, head);
        let id = if index == 0 {
            format!("{tail}>{head}")
        } else {
            format!("{tail}>{head}#{index}")
        };
        self.coded(&id, tail, head)
    }

    /// Edge with an explicit id (used for the named coded edges).
    pub fn coded(&mut self, id: &str, tail: &str, head: &str) -> &mut Self {
        let index = self.next_index(tail, head);
        self.net.edges.push(Edge {
            id: id.to_string(),
            tail: tail.to_string(),
            head: head.to_string(),
            index,
        });
        self
    }

    pub fn build(self) -> Network {
        self.net
    }
}
