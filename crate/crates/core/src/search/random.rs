use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{SearchError, SearchOutcome, SearchStatus};
use crate::code::CodingAssignment;
use crate::gf::{Field, FieldMatrix};
use crate::network::Network;

/// Samples uniformly random k×k local matrices for every (producer, coded
/// edge) pair and returns the first sample that verifies. Never reports
/// `ExhaustedNone`; `searched` counts sampled assignments.
pub fn randomized_vector_search(
    net: Arc<Network>,
    field: &Field,
    k: usize,
    trials: u64,
    seed: u64,
) -> Result<SearchOutcome, SearchError> {
    let start = Instant::now();
    let base = CodingAssignment::new(net.clone(), field.clone(), k)?;
    let mut pairs = Vec::new();
    for e in net.coded_edges() {
        for p in base.producers(&e.id)? {
            pairs.push((p, e.id.clone()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = field.order() as u64;
    for trial in 0..trials {
        let mut a = base.clone();
        for (p, c) in &pairs {
            let data = (0..k * k)
                .map(|_| field.element(rng.gen_range(0..order)).expect("below order"))
                .collect();
            let m = FieldMatrix::from_elements(field, k, k, data).expect("k*k entries");
            a.set(p, c, m)?;
        }
        let report = a.verify();
        if report.solved {
            return Ok(SearchOutcome {
                status: SearchStatus::Found,
                assignment: Some(a),
                report: Some(report),
                searched: trial + 1,
                elapsed: start.elapsed(),
            });
        }
    }
    Ok(SearchOutcome {
        status: SearchStatus::Inconclusive,
        assignment: None,
        report: None,
        searched: trials,
        elapsed: start.elapsed(),
    })
}
