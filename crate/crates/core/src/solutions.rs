//! Explicit scalar solutions for both families, lifted to dimension k with
//! `c ↦ c · I_k`.
//!
//! Generalized Fano (characteristic divides q):
//!
//! ```text
//! E13 = a + Σ b_i          E24 = Σ b_i + c
//! E57 = E13 - E24          E68 = E13 - c
//! E_i = E24 - Σ_{j≠i} b_j  E910 = E68 - E57
//! ```
//!
//! so t(q+1) recovers `E68 - Σ E_i = a - q·c = a`.
//!
//! Generalized non-Fano (characteristic does not divide q):
//!
//! ```text
//! e_a = a + Σ b_i    e_i = a + Σ_{j≠i} b_j    e_b = Σ b_i
//! ```
//!
//! so t(q+2) recovers `q⁻¹ (Σ e_i - (q-1) e_b) = a`.

use std::sync::Arc;

use crate::code::{CodeError, CodingAssignment};
use crate::families::{generalized_fano, generalized_non_fano, FamilyError};
use crate::gf::Field;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum SolutionError {
    #[error("{}", mismatch_message(*p, *q, *needs_divides))]
    CharacteristicMismatch { p: u32, q: u32, needs_divides: bool },
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Code(#[from] CodeError),
}

fn mismatch_message(p: u32, q: u32, needs_divides: bool) -> String {
    if needs_divides {
        format!(
            "{p} does not divide {q}: no linear solution when the characteristic does not divide q"
        )
    } else {
        format!("{p} divides {q}: no linear solution when the characteristic divides q")
    }
}

/// The generalized Fano solution; requires `p | q`.
pub fn fano_paper_solution(
    q: u32,
    field: &Field,
    k: usize,
) -> Result<CodingAssignment, SolutionError> {
    let p = field.characteristic();
    if !q.is_multiple_of(p) {
        return Err(SolutionError::CharacteristicMismatch {
            p,
            q,
            needs_divides: true,
        });
    }
    fano_pattern(q, field, k)
}

/// The generalized non-Fano solution; requires `p ∤ q`.
pub fn non_fano_paper_solution(
    q: u32,
    field: &Field,
    k: usize,
) -> Result<CodingAssignment, SolutionError> {
    let p = field.characteristic();
    if q.is_multiple_of(p) {
        return Err(SolutionError::CharacteristicMismatch {
            p,
            q,
            needs_divides: false,
        });
    }
    non_fano_pattern(q, field, k)
}

/// The Fano coefficient pattern without the characteristic check. Over a field
/// whose characteristic does not divide q it is a valid code that fails at
/// terminal t(q+1).
pub fn fano_pattern(q: u32, field: &Field, k: usize) -> Result<CodingAssignment, SolutionError> {
    let net = Arc::new(generalized_fano(q)?);
    let mut a = CodingAssignment::new(net, field.clone(), k)?;
    let one = field.one();
    let minus_one = field.neg(one);
    let bs: Vec<String> = (1..q).map(|i| format!("b{i}")).collect();

    a.set_scalar("a", "E13", one)?;
    for b in &bs {
        a.set_scalar(b, "E13", one)?;
        a.set_scalar(b, "E24", one)?;
    }
    a.set_scalar("c", "E24", one)?;
    a.set_scalar("E13", "E57", one)?;
    a.set_scalar("E24", "E57", minus_one)?;
    a.set_scalar("E13", "E68", one)?;
    a.set_scalar("c", "E68", minus_one)?;
    for i in 1..q {
        let e = format!("E_{i}");
        a.set_scalar("E24", &e, one)?;
        for j in (1..q).filter(|&j| j != i) {
            a.set_scalar(&bs[j as usize - 1], &e, minus_one)?;
        }
    }
    a.set_scalar("E68", "E910", one)?;
    a.set_scalar("E57", "E910", minus_one)?;
    Ok(a)
}

/// The non-Fano coefficient pattern without the characteristic check. Over a
/// field whose characteristic divides q it fails at terminal t(q+2).
pub fn non_fano_pattern(
    q: u32,
    field: &Field,
    k: usize,
) -> Result<CodingAssignment, SolutionError> {
    let net = Arc::new(generalized_non_fano(q)?);
    let mut a = CodingAssignment::new(net, field.clone(), k)?;
    let one = field.one();
    let bs: Vec<String> = (1..=q).map(|i| format!("b{i}")).collect();

    a.set_scalar("a", "e_a", one)?;
    for b in &bs {
        a.set_scalar(b, "e_a", one)?;
        a.set_scalar(b, "e_b", one)?;
    }
    for i in 1..=q {
        let e = format!("e_{i}");
        a.set_scalar("a", &e, one)?;
        for j in (1..=q).filter(|&j| j != i) {
            a.set_scalar(&bs[j as usize - 1], &e, one)?;
        }
    }
    Ok(a)
}
