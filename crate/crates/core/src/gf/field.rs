//! Prime-power finite fields GF(p^m).
//!
//! Elements are stored packed: the polynomial `c_0 + c_1 x + ... + c_{m-1} x^{m-1}`
//! is the integer `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`. For `m = 1` this is just
//! the residue mod `p`.

use std::fmt;
use std::sync::Arc;

use super::poly;

/// Fields up to this order get precomputed addition/multiplication tables.
const TABLE_LIMIT: u32 = 256;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("GF({p}^{m}) does not fit in 32-bit element encoding")]
    TooLarge { p: u64, m: u32 },
    #[error("element {value} out of range for a field of order {order}")]
    ElementOutOfRange { value: u64, order: u32 },
}

/// A single field element in packed-coefficient form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);

    /// Packed integer encoding.
    pub fn value(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

struct Inner {
    p: u32,
    m: u32,
    order: u32,
    /// Monic modulus, low coefficient first, length m + 1. Empty for prime fields.
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

/// A finite field GF(p^m). Cheap to clone; immutable.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl Field {
    /// Builds GF(p^m). For `m > 1` the modulus is the lowest monic irreducible
    /// polynomial of degree `m`, ordering candidates by their packed low-order
    /// coefficients (equivalently, lexicographically from the highest coefficient down).
    pub fn new(p: u64, m: u32) -> Result<Self, FieldError> {
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let order = (p as u128)
            .checked_pow(m)
            .filter(|&o| o <= u32::MAX as u128)
            .ok_or(FieldError::TooLarge { p, m })? as u32;
        let p = p as u32;
        let modulus = if m == 1 {
            Vec::new()
        } else {
            poly::lowest_irreducible(p, m as usize)
        };
        let mut inner = Inner {
            p,
            m,
            order,
            modulus,
            tables: None,
        };
        if m > 1 && order <= TABLE_LIMIT {
            inner.tables = Some(build_tables(&inner));
        }
        Ok(Field(Arc::new(inner)))
    }

    /// The prime field GF(p).
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        Self::new(p, 1)
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.m
    }

    pub fn order(&self) -> u32 {
        self.0.order
    }

    /// Monic modulus polynomial, low coefficient first; `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        if self.0.m == 1 {
            None
        } else {
            Some(&self.0.modulus)
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// Element from its packed encoding.
    pub fn element(&self, value: u64) -> Result<FieldElement, FieldError> {
        if value >= self.0.order as u64 {
            return Err(FieldError::ElementOutOfRange {
                value,
                order: self.0.order,
            });
        }
        Ok(FieldElement(value as u32))
    }

    /// Image of an integer under the ring map Z -> GF(p^m), i.e. `n · 1`.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// Polynomial-basis coefficients of `x`, low degree first, length m.
    pub fn coefficients(&self, x: FieldElement) -> Vec<u32> {
        poly::unpack(x.0, self.0.p, self.0.m as usize)
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> Result<FieldElement, FieldError> {
        let p = self.0.p;
        if coeffs.len() > self.0.m as usize {
            return Err(FieldError::ElementOutOfRange {
                value: coeffs.len() as u64,
                order: self.0.order,
            });
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= p) {
            return Err(FieldError::ElementOutOfRange {
                value: c as u64,
                order: self.0.order,
            });
        }
        Ok(FieldElement(poly::pack(coeffs, p)))
    }

    /// All elements in packed order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.0.order).map(FieldElement)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let inner = &*self.0;
        if inner.m == 1 {
            let s = a.0 as u64 + b.0 as u64;
            return FieldElement((s % inner.p as u64) as u32);
        }
        if let Some(t) = &inner.tables {
            return FieldElement(t.add[(a.0 * inner.order + b.0) as usize]);
        }
        FieldElement(poly::add_packed(a.0, b.0, inner.p, inner.m as usize))
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let inner = &*self.0;
        if inner.m == 1 {
            return FieldElement(if a.0 == 0 { 0 } else { inner.p - a.0 });
        }
        if let Some(t) = &inner.tables {
            return FieldElement(t.neg[a.0 as usize]);
        }
        FieldElement(poly::neg_packed(a.0, inner.p, inner.m as usize))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let inner = &*self.0;
        if inner.m == 1 {
            let prod = a.0 as u64 * b.0 as u64;
            return FieldElement((prod % inner.p as u64) as u32);
        }
        if let Some(t) = &inner.tables {
            return FieldElement(t.mul[(a.0 * inner.order + b.0) as usize]);
        }
        mul_poly(inner, a.0, b.0)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        if a.is_zero() {
            return None;
        }
        if let Some(t) = &self.0.tables {
            return Some(FieldElement(t.inv[a.0 as usize]));
        }
        // a^(order - 2)
        Some(self.pow(a, self.0.order as u64 - 2))
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

fn mul_poly(inner: &Inner, a: u32, b: u32) -> FieldElement {
    let m = inner.m as usize;
    let pa = poly::unpack(a, inner.p, m);
    let pb = poly::unpack(b, inner.p, m);
    let prod = poly::mul(&pa, &pb, inner.p);
    let r = poly::rem(&prod, &inner.modulus, inner.p);
    FieldElement(poly::pack(&r, inner.p))
}

fn build_tables(inner: &Inner) -> Tables {
    let n = inner.order as usize;
    let m = inner.m as usize;
    let mut add = vec![0u32; n * n];
    let mut mul = vec![0u32; n * n];
    let mut neg = vec![0u32; n];
    let mut inv = vec![0u32; n];
    for a in 0..n as u32 {
        neg[a as usize] = poly::neg_packed(a, inner.p, m);
        for b in 0..n as u32 {
            let idx = a as usize * n + b as usize;
            add[idx] = poly::add_packed(a, b, inner.p, m);
            let prod = mul_poly(inner, a, b).0;
            mul[idx] = prod;
            if prod == 1 {
                inv[a as usize] = b;
            }
        }
    }
    Tables { add, mul, neg, inv }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.m == other.0.m && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.m == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.m)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_fields() {
        let f2 = Field::new(2, 1).unwrap();
        assert_eq!(f2.characteristic(), 2);
        assert_eq!(f2.order(), 2);
        assert!(f2.modulus().is_none());
        let f3 = Field::new(3, 1).unwrap();
        assert_eq!(f3.characteristic(), 3);
    }

    #[test]
    fn gf4_modulus_is_x2_x_1() {
        // monic quadratics over GF(2): x^2, x^2+1, x^2+x, x^2+x+1; only the last
        // has no root in {0, 1}
        let roots = |c0: u32, c1: u32| (0..2u32).any(|x| (x * x + c1 * x + c0).is_multiple_of(2));
        let irreducible: Vec<_> = (0..4u32)
            .map(|v| (v & 1, v >> 1))
            .filter(|&(c0, c1)| !roots(c0, c1))
            .collect();
        assert_eq!(irreducible, vec![(1, 1)]);

        let f4 = Field::new(2, 2).unwrap();
        assert_eq!(f4.characteristic(), 2);
        assert_eq!(f4.order(), 4);
        assert_eq!(f4.modulus(), Some(&[1, 1, 1][..]));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(Field::new(4, 1).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(Field::new(1, 1).unwrap_err(), FieldError::NotPrime(1));
        assert_eq!(Field::new(3, 0).unwrap_err(), FieldError::ZeroDegree);
        assert!(matches!(
            Field::new(2, 40),
            Err(FieldError::TooLarge { .. })
        ));
    }

    #[test]
    fn characteristic_is_p_for_extensions() {
        for (p, m) in [(2, 3), (3, 2), (5, 2), (7, 2), (2, 8), (11, 3)] {
            let f = Field::new(p, m).unwrap();
            assert_eq!(f.characteristic() as u64, p);
            let one = f.one();
            let mut acc = f.zero();
            for _ in 0..p {
                acc = f.add(acc, one);
            }
            assert!(acc.is_zero(), "p·1 must vanish in {f}");
        }
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
            (2, 6),
            (5, 2),
            (7, 2),
            (3, 3),
        ] {
            let f = Field::new(p, m).unwrap();
            assert!(f.order() <= 64);
            assert!(f.inv(f.zero()).is_none());
            for x in f.elements().skip(1) {
                let y = f.inv(x).unwrap();
                assert_eq!(f.mul(x, y), f.one(), "{f}: {x}·{y}");
            }
        }
    }

    #[test]
    fn tables_match_polynomial_arithmetic() {
        for (p, m) in [(2, 8), (3, 2), (7, 2)] {
            let f = Field::new(p, m).unwrap();
            assert!(f.0.tables.is_some());
            for a in f.elements() {
                for b in f.elements().step_by(3) {
                    assert_eq!(f.mul(a, b), mul_poly(&f.0, a.0, b.0));
                }
            }
        }
    }

    #[test]
    fn untabled_field_axioms() {
        let f = Field::new(2, 9).unwrap();
        assert!(f.0.tables.is_none());
        for a in [1u64, 2, 3, 100, 511] {
            let a = f.element(a).unwrap();
            assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        }
        let g = Field::new(3, 5).unwrap();
        let x = g.element(2).unwrap();
        let y = g.element(77).unwrap();
        let z = g.element(200).unwrap();
        assert_eq!(g.mul(x, g.add(y, z)), g.add(g.mul(x, y), g.mul(x, z)));
    }

    #[test]
    fn int_embedding_and_negation() {
        let f = Field::new(3, 2).unwrap();
        assert_eq!(f.from_int(3), f.zero());
        assert_eq!(f.from_int(-1), f.element(2).unwrap());
        assert_eq!(f.from_int(6), f.zero());
        for x in f.elements() {
            assert!(f.add(x, f.neg(x)).is_zero());
        }
        assert_eq!(f.coefficients(f.element(7).unwrap()), vec![1, 2]);
        assert_eq!(f.from_coefficients(&[1, 2]).unwrap(), f.element(7).unwrap());
        assert!(f.element(9).is_err());
    }
}
