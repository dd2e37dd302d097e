//! Generators for the generalized Fano and non-Fano network families and their
//! q = 2 classical relatives.
//!
//! Every coded edge ends in a relay node that fans the edge's symbol out to all
//! of its consumers, so the bottleneck is a single coded edge regardless of how
//! many nodes read it.

use std::fmt;
use std::str::FromStr;

use crate::gf::is_prime;
use crate::network::{Network, NetworkBuilder};

/// Provenance note for networks reconstructed by hand rather than from coding equations.
pub const RECONSTRUCTED: &str = "reconstructed-from-proof-text";

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("q must be at least 2, got {0}")]
    QTooSmall(u32),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("exponent for prime {prime} must be at least 1")]
    ZeroExponent { prime: u64 },
    #[error("{primes} primes but {exponents} exponents")]
    ExponentCount { primes: usize, exponents: usize },
    #[error("empty prime set")]
    NoPrimes,
    #[error("product of prime powers does not fit in 32 bits")]
    Overflow,
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    GenFano,
    GenNonFano,
    Fano,
    NonFano,
    ModifiedFano,
    ModifiedNonFano,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::GenFano,
        Family::GenNonFano,
        Family::Fano,
        Family::NonFano,
        Family::ModifiedFano,
        Family::ModifiedNonFano,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::GenFano => "gen_fano",
            Family::GenNonFano => "gen_non_fano",
            Family::Fano => "fano",
            Family::NonFano => "non_fano",
            Family::ModifiedFano => "modified_fano",
            Family::ModifiedNonFano => "modified_non_fano",
        }
    }

    /// Classic variants exist only at q = 2.
    pub fn is_parameterized(self) -> bool {
        matches!(self, Family::GenFano | Family::GenNonFano)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = FamilyError;

    /// Accepts both `gen_fano` and `gen-fano` spellings.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.replace('-', "_");
        Family::ALL
            .into_iter()
            .find(|f| f.name() == norm)
            .ok_or_else(|| FamilyError::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub q: u32,
}

impl FamilySpec {
    pub fn new(family: Family, q: u32) -> Result<Self, FamilyError> {
        if q < 2 {
            return Err(FamilyError::QTooSmall(q));
        }
        let q = if family.is_parameterized() { q } else { 2 };
        Ok(FamilySpec { family, q })
    }

    pub fn build(&self) -> Result<Network, FamilyError> {
        match self.family {
            Family::GenFano => generalized_fano(self.q),
            Family::GenNonFano => generalized_non_fano(self.q),
            Family::Fano => Ok(fano()),
            Family::NonFano => Ok(non_fano()),
            Family::ModifiedFano => Ok(modified_fano()),
            Family::ModifiedNonFano => Ok(modified_non_fano()),
        }
    }
}

fn b(i: u32) -> String {
    format!("b{i}")
}

/// Generalized Fano network for parameter q: sources a, b1..b(q-1), c and
/// q + 4 coded edges
///
/// ```text
/// E13  <- a, b1..b(q-1)          E24 <- b1..b(q-1), c
/// E57  <- E13, E24               E68 <- E13, c
/// E_i  <- E24, b_j (j != i)      E910 <- E57, E68
/// ```
///
/// with terminals t1 <- {E57, a} wanting c; t(1+i) <- {E910, b_j (j != i)}
/// wanting b_i; t(q+1) <- {E68, E_1..E_(q-1)} wanting a; t(q+1+i) <- {E_i, b_i}
/// wanting c.
pub fn generalized_fano(q: u32) -> Result<Network, FamilyError> {
    if q < 2 {
        return Err(FamilyError::QTooSmall(q));
    }
    Ok(build_fano(q, "gen_fano"))
}

fn build_fano(q: u32, family: &str) -> Network {
    let bs: Vec<String> = (1..q).map(b).collect();
    let mut nb = NetworkBuilder::new(family, Some(q));
    nb.source("a");
    for bi in &bs {
        nb.source(bi);
    }
    nb.source("c");

    for id in ["u1", "u2", "u5", "u6", "u9"] {
        nb.intermediate(id);
    }
    for id in ["u3", "u4", "u7", "u8", "u10"] {
        nb.relay(id);
    }
    for i in 1..q {
        nb.intermediate(&format!("v{i}"));
        nb.relay(&format!("w{i}"));
    }
    let terminals = 2 * q;
    for t in 1..=terminals {
        let demand = if t == 1 || t > q + 1 {
            "c".to_string()
        } else if t == q + 1 {
            "a".to_string()
        } else {
            b(t - 1)
        };
        nb.terminal(&format!("t{t}"), &[demand]);
    }

    // E13 and E24
    nb.edge("a", "u1");
    for bi in &bs {
        nb.edge(bi, "u1");
    }
    nb.coded("E13", "u1", "u3");
    for bi in &bs {
        nb.edge(bi, "u2");
    }
    nb.edge("c", "u2");
    nb.coded("E24", "u2", "u4");

    nb.edge("u3", "u5");
    nb.edge("u4", "u5");
    nb.coded("E57", "u5", "u7");

    nb.edge("u3", "u6");
    nb.edge("c", "u6");
    nb.coded("E68", "u6", "u8");

    for i in 1..q {
        let v = format!("v{i}");
        nb.edge("u4", &v);
        for j in (1..q).filter(|&j| j != i) {
            nb.edge(&b(j), &v);
        }
        nb.coded(&format!("E_{i}"), &v, &format!("w{i}"));
    }

    nb.edge("u7", "u9");
    nb.edge("u8", "u9");
    nb.coded("E910", "u9", "u10");

    // t1: E57 and a, wants c
    nb.edge("a", "t1");
    nb.edge("u7", "t1");
    // t(1+i): E910 and b_j (j != i), wants b_i
    for i in 1..q {
        let t = format!("t{}", 1 + i);
        nb.edge("u10", &t);
        for j in (1..q).filter(|&j| j != i) {
            nb.edge(&b(j), &t);
        }
    }
    // t(q+1): E68 and every E_i, wants a
    let t = format!("t{}", q + 1);
    nb.edge("u8", &t);
    for i in 1..q {
        nb.edge(&format!("w{i}"), &t);
    }
    // t(q+1+i): E_i and b_i, wants c
    for i in 1..q {
        let t = format!("t{}", q + 1 + i);
        nb.edge(&format!("w{i}"), &t);
        nb.edge(&b(i), &t);
    }
    nb.build()
}

/// Generalized non-Fano network for parameter q: sources a, b1..bq and q + 2
/// coded edges
///
/// ```text
/// e_a <- a, b1..bq      e_i <- a, b_j (j != i)      e_b <- b1..bq
/// ```
///
/// with terminals t1 <- {e_a, e_b} wanting a; t(1+i) <- {e_a, e_i} wanting b_i;
/// t(q+2) <- {e_1..e_q, e_b} wanting a. No b_i reaches the tail of e_i.
pub fn generalized_non_fano(q: u32) -> Result<Network, FamilyError> {
    if q < 2 {
        return Err(FamilyError::QTooSmall(q));
    }
    Ok(build_non_fano(q, "gen_non_fano"))
}

fn build_non_fano(q: u32, family: &str) -> Network {
    let bs: Vec<String> = (1..=q).map(b).collect();
    let mut nb = NetworkBuilder::new(family, Some(q));
    nb.source("a");
    for bi in &bs {
        nb.source(bi);
    }

    nb.intermediate("ua");
    nb.relay("ra");
    for i in 1..=q {
        nb.intermediate(&format!("u{i}"));
        nb.relay(&format!("r{i}"));
    }
    nb.intermediate("ub");
    nb.relay("rb");

    nb.terminal("t1", &["a"]);
    for i in 1..=q {
        nb.terminal(&format!("t{}", 1 + i), &[b(i)]);
    }
    nb.terminal(&format!("t{}", q + 2), &["a"]);

    nb.edge("a", "ua");
    for bi in &bs {
        nb.edge(bi, "ua");
    }
    nb.coded("e_a", "ua", "ra");
    for i in 1..=q {
        let u = format!("u{i}");
        nb.edge("a", &u);
        for j in (1..=q).filter(|&j| j != i) {
            nb.edge(&b(j), &u);
        }
        nb.coded(&format!("e_{i}"), &u, &format!("r{i}"));
    }
    for bi in &bs {
        nb.edge(bi, "ub");
    }
    nb.coded("e_b", "ub", "rb");

    nb.edge("ra", "t1");
    nb.edge("rb", "t1");
    for i in 1..=q {
        let t = format!("t{}", 1 + i);
        nb.edge("ra", &t);
        nb.edge(&format!("r{i}"), &t);
    }
    let t = format!("t{}", q + 2);
    for i in 1..=q {
        nb.edge(&format!("r{i}"), &t);
    }
    nb.edge("rb", &t);
    nb.build()
}

/// The modified Fano network: the generalized Fano network at q = 2.
pub fn modified_fano() -> Network {
    build_fano(2, "modified_fano")
}

/// Fano network, obtained from the modified Fano network by dropping terminal
/// t4 together with its two incoming edges.
pub fn fano() -> Network {
    let mut net = build_fano(2, "fano");
    net.meta.provenance = Some(RECONSTRUCTED.into());
    net.nodes.retain(|n| n.id != "t4");
    net.edges.retain(|e| e.head != "t4");
    net.terminals.retain(|t| t.node != "t4");
    net
}

/// Non-Fano network: as the generalized non-Fano network at q = 2, except that
/// t4 (inputs e_1, e_2, e_b) demands all of a, b1, b2.
pub fn non_fano() -> Network {
    let mut net = build_non_fano(2, "non_fano");
    net.meta.provenance = Some(RECONSTRUCTED.into());
    let t4 = net
        .terminals
        .iter_mut()
        .find(|t| t.node == "t4")
        .expect("q = 2 has t4");
    t4.demands = vec!["a".into(), "b1".into(), "b2".into()];
    net
}

/// Modified non-Fano network: t4 receives e_1, e_2 and a directly, and demands
/// b1, b2.
pub fn modified_non_fano() -> Network {
    let mut net = build_non_fano(2, "modified_non_fano");
    net.meta.provenance = Some(RECONSTRUCTED.into());
    let pos = net
        .edges
        .iter()
        .position(|e| e.tail == "rb" && e.head == "t4")
        .expect("q = 2 has rb -> t4");
    net.edges[pos] = crate::network::Edge {
        id: "a>t4".into(),
        tail: "a".into(),
        head: "t4".into(),
        index: 0,
    };
    let t4 = net
        .terminals
        .iter_mut()
        .find(|t| t.node == "t4")
        .expect("q = 2 has t4");
    t4.demands = vec!["b1".into(), "b2".into()];
    net
}

/// All four classic variants, in the order fano, non_fano, modified_fano,
/// modified_non_fano.
pub fn classic_variants() -> [Network; 4] {
    [fano(), non_fano(), modified_fano(), modified_non_fano()]
}

/// `q = p1^r1 · p2^r2 ⋯`, with every exponent defaulting to 1.
pub fn q_from_primes(primes: &[u64], exponents: Option<&[u32]>) -> Result<u32, FamilyError> {
    if primes.is_empty() {
        return Err(FamilyError::NoPrimes);
    }
    if let Some(e) = exponents {
        if e.len() != primes.len() {
            return Err(FamilyError::ExponentCount {
                primes: primes.len(),
                exponents: e.len(),
            });
        }
    }
    let mut q: u32 = 1;
    for (i, &p) in primes.iter().enumerate() {
        if !is_prime(p) {
            return Err(FamilyError::NotPrime(p));
        }
        let r = exponents.map_or(1, |e| e[i]);
        if r == 0 {
            return Err(FamilyError::ZeroExponent { prime: p });
        }
        let p32 = u32::try_from(p).map_err(|_| FamilyError::Overflow)?;
        let power = p32.checked_pow(r).ok_or(FamilyError::Overflow)?;
        q = q.checked_mul(power).ok_or(FamilyError::Overflow)?;
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[&str]) -> Vec<String> {
        let mut v: Vec<String> = v.iter().map(|s| s.to_string()).collect();
        v.sort();
        v
    }

    fn inputs(net: &Network, node: &str) -> Vec<String> {
        let mut v = net.inputs(node);
        v.sort();
        v
    }

    #[test]
    fn fano_counts() {
        let n2 = generalized_fano(2).unwrap();
        let s = n2.summary();
        assert_eq!((s.sources, s.coded_edges, s.terminals), (3, 6, 4));
        let n3 = generalized_fano(3).unwrap();
        let s = n3.summary();
        assert_eq!((s.sources, s.coded_edges, s.terminals), (4, 7, 6));
        assert_eq!(n2.validate(), Ok(()));
        assert_eq!(n3.validate(), Ok(()));
    }

    #[test]
    fn fano_q2_t4() {
        let n = generalized_fano(2).unwrap();
        assert_eq!(inputs(&n, "t4"), set(&["E_1", "b1"]));
        assert_eq!(n.terminal("t4").unwrap().demands, vec!["c"]);
    }

    #[test]
    fn fano_producer_sets() {
        let n = generalized_fano(4).unwrap();
        assert_eq!(inputs(&n, "u1"), set(&["a", "b1", "b2", "b3"]));
        assert_eq!(inputs(&n, "u2"), set(&["b1", "b2", "b3", "c"]));
        assert_eq!(inputs(&n, "u5"), set(&["E13", "E24"]));
        assert_eq!(inputs(&n, "u6"), set(&["E13", "c"]));
        assert_eq!(inputs(&n, "v2"), set(&["E24", "b1", "b3"]));
        assert_eq!(inputs(&n, "u9"), set(&["E57", "E68"]));
        assert_eq!(inputs(&n, "t1"), set(&["E57", "a"]));
        assert_eq!(inputs(&n, "t3"), set(&["E910", "b1", "b3"]));
        assert_eq!(inputs(&n, "t5"), set(&["E68", "E_1", "E_2", "E_3"]));
        assert_eq!(inputs(&n, "t7"), set(&["E_2", "b2"]));
        assert_eq!(n.terminal("t3").unwrap().demands, vec!["b2"]);
        assert_eq!(n.terminal("t5").unwrap().demands, vec!["a"]);
    }

    #[test]
    fn non_fano_counts_and_sets() {
        let n2 = generalized_non_fano(2).unwrap();
        let s = n2.summary();
        assert_eq!((s.sources, s.coded_edges, s.terminals), (3, 4, 4));
        assert_eq!(inputs(&n2, "t4"), set(&["e_1", "e_2", "e_b"]));
        assert_eq!(n2.terminal("t4").unwrap().demands, vec!["a"]);
        let n3 = generalized_non_fano(3).unwrap();
        let s = n3.summary();
        assert_eq!((s.sources, s.coded_edges, s.terminals), (4, 5, 5));
        assert_eq!(inputs(&n3, "u2"), set(&["a", "b1", "b3"]));
        assert_eq!(n3.validate(), Ok(()));
    }

    #[test]
    fn q_below_two_rejected() {
        assert_eq!(generalized_fano(1), Err(FamilyError::QTooSmall(1)));
        assert_eq!(generalized_non_fano(0), Err(FamilyError::QTooSmall(0)));
        assert!(FamilySpec::new(Family::GenFano, 1).is_err());
    }

    #[test]
    fn classic_variants_shape() {
        let [fano, non_fano, modified_fano, modified_non_fano] = classic_variants();
        for n in [&fano, &non_fano, &modified_fano, &modified_non_fano] {
            assert_eq!(n.validate(), Ok(()), "{}", n.meta.family);
        }
        assert_eq!(
            modified_fano.edges.len(),
            generalized_fano(2).unwrap().edges.len()
        );
        assert_eq!(fano.terminals.len(), 3);
        let t4 = non_fano.terminal("t4").unwrap();
        assert_eq!(t4.demands.len(), 3);
        assert_eq!(inputs(&modified_non_fano, "t4"), set(&["a", "e_1", "e_2"]));
        assert_eq!(
            modified_non_fano.terminal("t4").unwrap().demands,
            vec!["b1", "b2"]
        );
        assert_eq!(fano.meta.provenance.as_deref(), Some(RECONSTRUCTED));
        assert_eq!(modified_fano.meta.provenance, None);
    }

    #[test]
    fn q_from_prime_sets() {
        assert_eq!(q_from_primes(&[2], None), Ok(2));
        assert_eq!(q_from_primes(&[2, 3], None), Ok(6));
        assert_eq!(q_from_primes(&[2, 3], Some(&[2, 1])), Ok(12));
        assert_eq!(q_from_primes(&[4], None), Err(FamilyError::NotPrime(4)));
        assert_eq!(q_from_primes(&[2], Some(&[40])), Err(FamilyError::Overflow));
        assert_eq!(
            q_from_primes(&[2, 3], Some(&[1])),
            Err(FamilyError::ExponentCount {
                primes: 2,
                exponents: 1
            })
        );
        assert_eq!(q_from_primes(&[], None), Err(FamilyError::NoPrimes));
    }

    #[test]
    fn family_names_parse() {
        assert_eq!("gen-fano".parse::<Family>(), Ok(Family::GenFano));
        assert_eq!("gen_non_fano".parse::<Family>(), Ok(Family::GenNonFano));
        assert_eq!(
            "modified-non-fano".parse::<Family>(),
            Ok(Family::ModifiedNonFano)
        );
        assert!("butterfly".parse::<Family>().is_err());
    }
}
