//! Linear coding assignments over a network: local coding matrices, global
//! coding matrices, decodability, and an enumeration oracle.

mod global;
mod oracle;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::gf::{Field, FieldElement, FieldError, FieldMatrix, MatrixError};
use crate::network::{EdgeRole, Network, NetworkError};

pub use global::{Decoding, DemandReport, GlobalCode, SolvabilityReport};
pub use oracle::DEFAULT_ORACLE_BUDGET;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("vector dimension must be at least 1")]
    ZeroDimension,
    #[error("`{0}` is not a coded edge")]
    UnknownConsumer(String),
    #[error("`{producer}` is not an input of the tail of `{consumer}`")]
    NotAProducer { producer: String, consumer: String },
    #[error("matrix for ({producer}, {consumer}) is {rows}x{cols}, expected {k}x{k}")]
    Shape {
        producer: String,
        consumer: String,
        rows: usize,
        cols: usize,
        k: usize,
    },
    #[error("matrix field {found} differs from assignment field {expected}")]
    FieldMismatch { expected: String, found: String },
    #[error("unknown terminal `{0}`")]
    UnknownTerminal(String),
    #[error("terminal `{terminal}` does not demand `{label}`")]
    UnknownLabel { terminal: String, label: String },
    #[error("enumeration needs {required} cases, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

impl From<serde_json::Error> for CodeError {
    fn from(e: serde_json::Error) -> Self {
        CodeError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

/// A k-dimensional linear code on a network: one k×k local matrix per
/// (producer, coded edge) pair. Producers are named by origin (a source label or
/// a coded edge id). Missing pairs are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodingAssignment {
    network: Arc<Network>,
    field: Field,
    k: usize,
    local: BTreeMap<(String, String), FieldMatrix>,
}

impl CodingAssignment {
    /// Empty (all-zero) assignment. The network is validated here.
    pub fn new(network: Arc<Network>, field: Field, k: usize) -> Result<Self, CodeError> {
        if k == 0 {
            return Err(CodeError::ZeroDimension);
        }
        network.validate()?;
        Ok(CodingAssignment {
            network,
            field,
            k,
            local: BTreeMap::new(),
        })
    }

    pub fn network(&self) -> &Arc<Network> {
        &self.network
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Producers feeding the coded edge `consumer`, in edge-list order.
    pub fn producers(&self, consumer: &str) -> Result<Vec<String>, CodeError> {
        let edge = self
            .network
            .edge(consumer)
            .filter(|e| self.network.role(e) == EdgeRole::Coded)
            .ok_or_else(|| CodeError::UnknownConsumer(consumer.to_string()))?;
        Ok(self.network.inputs(&edge.tail))
    }

    pub fn set(
        &mut self,
        producer: &str,
        consumer: &str,
        matrix: FieldMatrix,
    ) -> Result<(), CodeError> {
        if !self.producers(consumer)?.iter().any(|p| p == producer) {
            return Err(CodeError::NotAProducer {
                producer: producer.to_string(),
                consumer: consumer.to_string(),
            });
        }
        if matrix.field() != &self.field {
            return Err(CodeError::FieldMismatch {
                expected: self.field.to_string(),
                found: matrix.field().to_string(),
            });
        }
        if matrix.shape() != (self.k, self.k) {
            return Err(CodeError::Shape {
                producer: producer.to_string(),
                consumer: consumer.to_string(),
                rows: matrix.rows(),
                cols: matrix.cols(),
                k: self.k,
            });
        }
        self.local
            .insert((producer.to_string(), consumer.to_string()), matrix);
        Ok(())
    }

    /// Sets the local matrix to `x · I_k`.
    pub fn set_scalar(
        &mut self,
        producer: &str,
        consumer: &str,
        x: FieldElement,
    ) -> Result<(), CodeError> {
        let m = FieldMatrix::scalar(&self.field, x, self.k);
        self.set(producer, consumer, m)
    }

    pub fn get(&self, producer: &str, consumer: &str) -> Option<&FieldMatrix> {
        self.local
            .get(&(producer.to_string(), consumer.to_string()))
    }

    /// Explicitly stored entries, sorted by (producer, consumer).
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, &FieldMatrix)> {
        self.local
            .iter()
            .map(|((p, c), m)| (p.as_str(), c.as_str(), m))
    }

    /// Replaces every local matrix `A` by `A ⊗ I_factor`, giving a code of
    /// dimension `k · factor`.
    pub fn lift(&self, factor: usize) -> Result<Self, CodeError> {
        if factor == 0 {
            return Err(CodeError::ZeroDimension);
        }
        Ok(CodingAssignment {
            network: self.network.clone(),
            field: self.field.clone(),
            k: self.k * factor,
            local: self
                .local
                .iter()
                .map(|(key, m)| (key.clone(), m.kron_identity(factor)))
                .collect(),
        })
    }

    /// Moves the local matrices onto another network with compatible coded edges.
    pub fn rebind(&self, network: Arc<Network>) -> Result<Self, CodeError> {
        let mut out = CodingAssignment::new(network, self.field.clone(), self.k)?;
        for ((p, c), m) in &self.local {
            out.set(p, c, m.clone())?;
        }
        Ok(out)
    }

    pub fn global_codes(&self) -> GlobalCode {
        GlobalCode::compute(self)
    }

    /// Decodability of every (terminal, demand) pair.
    pub fn verify(&self) -> SolvabilityReport {
        self.global_codes().report()
    }

    /// Enumeration oracle: true iff every demanded block is a function of the
    /// terminal's received symbols, checked over all source tuples.
    pub fn function_check(&self, budget: u128) -> Result<bool, CodeError> {
        oracle::function_check(self, budget)
    }

    pub fn to_json(&self) -> String {
        let file = AssignmentFile {
            field: FieldSpec {
                p: self.field.characteristic() as u64,
                m: self.field.degree(),
            },
            k: self.k,
            local: self
                .entries()
                .map(|(p, c, m)| LocalEntry {
                    producer: p.to_string(),
                    consumer: c.to_string(),
                    matrix: m.to_rows(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("assignment serializes")
    }

    /// Parses an assignment and checks it against `network`.
    pub fn from_json(text: &str, network: Arc<Network>) -> Result<Self, CodeError> {
        let file: AssignmentFile = serde_json::from_str(text)?;
        let field = Field::new(file.field.p, file.field.m)?;
        let mut out = CodingAssignment::new(network, field.clone(), file.k)?;
        for entry in file.local {
            let m = FieldMatrix::from_rows(&field, &entry.matrix)?;
            out.set(&entry.producer, &entry.consumer, m)?;
        }
        Ok(out)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct FieldSpec {
    p: u64,
    m: u32,
}

#[derive(Debug, Serialize, Deserialize)]
struct LocalEntry {
    producer: String,
    consumer: String,
    matrix: Vec<Vec<u64>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct AssignmentFile {
    field: FieldSpec,
    k: usize,
    local: Vec<LocalEntry>,
}
