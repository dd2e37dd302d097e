use std::collections::BTreeSet;

use netcode::families::{
    classic_variants, fano, generalized_fano, generalized_non_fano, modified_fano,
    modified_non_fano, non_fano, RECONSTRUCTED,
};
use netcode::network::Network;

fn node_ids(n: &Network) -> BTreeSet<&str> {
    n.nodes.iter().map(|x| x.id.as_str()).collect()
}

fn edge_triples(n: &Network) -> BTreeSet<(&str, &str, &str)> {
    n.edges
        .iter()
        .map(|e| (e.id.as_str(), e.tail.as_str(), e.head.as_str()))
        .collect()
}

#[test]
fn fano_is_a_subnetwork_of_modified_fano() {
    let small = fano();
    let big = modified_fano();
    assert!(node_ids(&small).is_subset(&node_ids(&big)));
    assert!(edge_triples(&small).is_subset(&edge_triples(&big)));
    assert!(small.edges.len() < big.edges.len());
    assert_eq!(small.terminals.len() + 1, big.terminals.len());
}

#[test]
fn modified_fano_is_generalized_fano_at_two() {
    let g = generalized_fano(2).unwrap();
    let m = modified_fano();
    assert_eq!(node_ids(&g), node_ids(&m));
    assert_eq!(edge_triples(&g), edge_triples(&m));
    assert_eq!(g.terminals, m.terminals);
}

#[test]
fn reconstructed_variants_are_flagged() {
    for n in [fano(), non_fano(), modified_non_fano()] {
        assert_eq!(
            n.meta.provenance.as_deref(),
            Some(RECONSTRUCTED),
            "{}",
            n.meta.family
        );
    }
    assert!(generalized_fano(3).unwrap().meta.provenance.is_none());
    let names: Vec<String> = classic_variants()
        .iter()
        .map(|n| n.meta.family.clone())
        .collect();
    assert_eq!(
        names,
        ["fano", "non_fano", "modified_fano", "modified_non_fano"]
    );
}

#[test]
fn non_fano_fourth_terminal_variants() {
    let classic = non_fano();
    let t4 = classic.terminal("t4").unwrap();
    assert_eq!(t4.demands, ["a", "b1", "b2"]);
    assert_eq!(classic.inputs("t4"), ["e_1", "e_2", "e_b"]);

    let modified = modified_non_fano();
    let t4 = modified.terminal("t4").unwrap();
    assert_eq!(t4.demands, ["b1", "b2"]);
    let mut inputs = modified.inputs("t4");
    inputs.sort();
    assert_eq!(inputs, ["a", "e_1", "e_2"]);
}

#[test]
fn generalized_counts_and_isolation() {
    for q in 2..=12u32 {
        let n = q as usize;
        let s = generalized_fano(q).unwrap().summary();
        assert_eq!(
            (s.sources, s.coded_edges, s.terminals),
            (n + 1, n + 4, 2 * n)
        );
        let nf = generalized_non_fano(q).unwrap();
        let s = nf.summary();
        assert_eq!(
            (s.sources, s.coded_edges, s.terminals),
            (n + 1, n + 2, n + 2)
        );
        for i in 1..=q {
            let tail = &nf.edge(&format!("e_{i}")).unwrap().tail;
            assert!(!nf.has_path(&format!("b{i}"), tail));
            for j in (1..=q).filter(|&j| j != i) {
                assert!(nf.has_path(&format!("b{j}"), tail));
            }
        }
    }
}
