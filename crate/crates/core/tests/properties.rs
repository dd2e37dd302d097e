use std::sync::Arc;

use netcode::code::{CodingAssignment, DEFAULT_ORACLE_BUDGET};
use netcode::families::{generalized_fano, generalized_non_fano, Family, FamilySpec};
use netcode::gf::{Field, FieldMatrix, MatrixError};
use netcode::network::{EdgeRole, Network};
use netcode::solutions::{fano_paper_solution, non_fano_paper_solution};
use proptest::prelude::*;

fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(Field::prime(2).unwrap()),
        Just(Field::prime(3).unwrap()),
        Just(Field::prime(5).unwrap()),
        Just(Field::new(2, 2).unwrap()),
        Just(Field::new(3, 2).unwrap()),
    ]
}

fn matrix(field: Field, rows: usize, cols: usize) -> impl Strategy<Value = FieldMatrix> {
    let order = field.order() as u64;
    prop::collection::vec(0..order, rows * cols).prop_map(move |vals| {
        let rows_v: Vec<Vec<u64>> = if cols == 0 {
            vec![Vec::new(); rows]
        } else {
            vals.chunks(cols).map(<[u64]>::to_vec).collect()
        };
        FieldMatrix::from_rows(&field, &rows_v).unwrap()
    })
}

/// Low-rank matrices show up often enough to exercise singular paths.
fn square(field: Field, n: usize) -> impl Strategy<Value = FieldMatrix> {
    let f2 = field.clone();
    prop_oneof![
        matrix(field.clone(), n, n),
        (1..=n).prop_flat_map(move |r| {
            (matrix(f2.clone(), n, r), matrix(f2.clone(), r, n))
                .prop_map(|(a, b)| a.mul(&b).unwrap())
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn rank_of_product_is_bounded(
        (a, b) in (field_strategy(), 1..5usize, 1..5usize, 1..5usize)
            .prop_flat_map(|(f, r, m, c)| (matrix(f.clone(), r, m), matrix(f, m, c)))
    ) {
        let ab = a.mul(&b).unwrap();
        prop_assert!(ab.rank() <= a.rank().min(b.rank()));
    }

    #[test]
    fn solve_left_is_exact_or_certified(
        (g, t) in (field_strategy(), 1..5usize, 1..5usize, 1..3usize)
            .prop_flat_map(|(f, r, c, tr)| (matrix(f.clone(), r, c), matrix(f, tr, c)))
    ) {
        match FieldMatrix::solve_left(&g, &t) {
            Ok(x) => prop_assert_eq!(x.mul(&g).unwrap(), t),
            Err(MatrixError::NoSolution) => {
                let both = FieldMatrix::vstack(g.field(), g.cols(), &[&g, &t]).unwrap();
                prop_assert!(both.rank() > g.rank());
            }
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn inverse_exists_iff_full_rank(a in (field_strategy(), 1..5usize).prop_flat_map(|(f, n)| square(f, n))) {
        let n = a.rows();
        match a.inverse() {
            Ok(inv) => {
                prop_assert_eq!(a.rank(), n);
                prop_assert_eq!(a.mul(&inv).unwrap(), FieldMatrix::identity(a.field(), n));
            }
            Err(_) => prop_assert!(a.rank() < n),
        }
    }

    #[test]
    fn kron_identity_multiplies_rank(
        (a, k) in (field_strategy(), 1..4usize, 1..4usize, 1..4usize)
            .prop_flat_map(|(f, r, c, k)| (matrix(f, r, c), Just(k)))
    ) {
        prop_assert_eq!(a.kron_identity(k).rank(), k * a.rank());
    }

    #[test]
    fn family_json_round_trip(q in 2..13u32, non_fano in any::<bool>()) {
        let net = if non_fano { generalized_non_fano(q) } else { generalized_fano(q) }.unwrap();
        prop_assert_eq!(Network::from_json(&net.to_json()).unwrap(), net);
    }

    #[test]
    fn topological_order_respects_tails(q in 2..13u32, non_fano in any::<bool>()) {
        let net = if non_fano { generalized_non_fano(q) } else { generalized_fano(q) }.unwrap();
        let order = net.topological_order().unwrap();
        prop_assert_eq!(order.len(), net.edges.len());
        let pos = |id: &str| order.iter().position(|e| e.id == id).unwrap();
        for e in &net.edges {
            for into_tail in net.in_edges(&e.tail) {
                prop_assert!(pos(&into_tail.id) < pos(&e.id));
            }
        }
    }

    #[test]
    fn rank_verifier_matches_oracle(
        non_fano in any::<bool>(),
        p in prop_oneof![Just(2u64), Just(3u64)],
        k in 1..3usize,
        seed in any::<u64>(),
    ) {
        // keep S·k·m·log2(p) ≤ 20 so the oracle stays cheap
        let net = Arc::new(if non_fano { generalized_non_fano(2) } else { generalized_fano(2) }.unwrap());
        let field = Field::prime(p).unwrap();
        let a = random_assignment(&net, &field, k, seed);
        let oracle = a.function_check(DEFAULT_ORACLE_BUDGET).unwrap();
        prop_assert_eq!(a.verify().solved, oracle);
    }

    #[test]
    fn global_code_source_blocks(
        non_fano in any::<bool>(),
        p in prop_oneof![Just(2u64), Just(3u64), Just(5u64)],
        k in 1..3usize,
        seed in any::<u64>(),
    ) {
        let net = Arc::new(if non_fano { generalized_non_fano(3) } else { generalized_fano(3) }.unwrap());
        let field = Field::prime(p).unwrap();
        let a = random_assignment(&net, &field, k, seed);
        let g = a.global_codes();
        for e in net.edges.iter().filter(|e| net.role(e) == EdgeRole::Direct) {
            let s = net.source_index(&e.tail).unwrap();
            let m = g.edge(&e.id).unwrap();
            for blk in 0..net.sources.len() {
                let b = m.block(0, blk * k, k, k);
                if blk == s {
                    prop_assert_eq!(b, FieldMatrix::identity(&field, k));
                } else {
                    prop_assert!(b.is_zero());
                }
            }
        }
    }
}

fn random_assignment(net: &Arc<Network>, field: &Field, k: usize, seed: u64) -> CodingAssignment {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut a = CodingAssignment::new(net.clone(), field.clone(), k).unwrap();
    let order = field.order() as u64;
    for e in net.coded_edges() {
        for prod in a.producers(&e.id).unwrap() {
            let rows: Vec<Vec<u64>> = (0..k)
                .map(|_| (0..k).map(|_| rng.gen_range(0..order)).collect())
                .collect();
            a.set(&prod, &e.id, FieldMatrix::from_rows(field, &rows).unwrap())
                .unwrap();
        }
    }
    a
}

#[test]
fn inverses_exhaustive_small_fields() {
    for (p, m) in [
        (2, 1),
        (3, 1),
        (5, 1),
        (7, 1),
        (2, 2),
        (2, 3),
        (3, 2),
        (2, 4),
        (5, 2),
        (2, 5),
        (2, 6),
    ] {
        let f = Field::new(p, m).unwrap();
        for x in f.elements().filter(|x| !x.is_zero()) {
            assert_eq!(f.mul(x, f.inv(x).unwrap()), f.one(), "{f} {x}");
        }
    }
}

#[test]
fn zero_assignment_never_solves() {
    let f3 = Field::prime(3).unwrap();
    for family in Family::ALL {
        for q in [2, 3, 5] {
            let net = Arc::new(FamilySpec::new(family, q).unwrap().build().unwrap());
            for k in [1, 2] {
                let a = CodingAssignment::new(net.clone(), f3.clone(), k).unwrap();
                assert!(!a.verify().solved, "{family} q={q} k={k}");
            }
        }
    }
}

#[test]
fn construction_iff_over_wider_grid() {
    for q in 2..=12u32 {
        for p in [2u64, 3, 5, 7, 11] {
            for m in [1, 2] {
                let field = Field::new(p, m).unwrap();
                let divides = q % p as u32 == 0;
                for k in [1, 2] {
                    let fano = fano_paper_solution(q, &field, k);
                    assert_eq!(fano.is_ok(), divides);
                    if let Ok(a) = fano {
                        assert!(a.verify().solved, "fano q={q} {field} k={k}");
                    }
                    let non = non_fano_paper_solution(q, &field, k);
                    assert_eq!(non.is_ok(), !divides);
                    if let Ok(a) = non {
                        assert!(a.verify().solved, "non-fano q={q} {field} k={k}");
                    }
                }
            }
        }
    }
}
