//! Dense polynomials over GF(p), low coefficient first. Only what the
//! extension-field construction needs.

pub(crate) fn unpack(mut v: u32, p: u32, m: usize) -> Vec<u32> {
    let mut out = vec![0; m];
    for c in out.iter_mut() {
        *c = v % p;
        v /= p;
    }
    out
}

pub(crate) fn pack(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

pub(crate) fn add_packed(a: u32, b: u32, p: u32, m: usize) -> u32 {
    let (mut a, mut b) = (a, b);
    let mut out = 0u32;
    let mut place = 1u32;
    for i in 0..m {
        let d = (a % p + b % p) % p;
        out += d * place;
        a /= p;
        b /= p;
        if i + 1 < m {
            place *= p;
        }
    }
    out
}

pub(crate) fn neg_packed(a: u32, p: u32, m: usize) -> u32 {
    let mut a = a;
    let mut out = 0u32;
    let mut place = 1u32;
    for i in 0..m {
        let d = a % p;
        out += ((p - d) % p) * place;
        a /= p;
        if i + 1 < m {
            place *= p;
        }
    }
    out
}

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // Fermat; p is prime
    let (mut base, mut e, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p64 = p as u64;
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

/// Remainder of `a` modulo `m` (m nonzero).
pub(crate) fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let m = trim(m.to_vec());
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p) as u64;
    let p64 = p as u64;
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let factor = r[r.len() - 1] as u64 * lead_inv % p64;
        for (i, &c) in m.iter().enumerate() {
            let sub = factor * c as u64 % p64;
            let slot = &mut r[shift + i];
            *slot = ((*slot as u64 + p64 - sub) % p64) as u32;
        }
        r = trim(r);
    }
    r
}

fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn pow_mod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut acc = vec![1u32];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(&mul(&acc, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        e >>= 1;
    }
    acc
}

/// Ben-Or: monic `f` of degree n is irreducible iff gcd(f, x^(p^i) - x) = 1
/// for every 1 <= i <= n/2.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let f = trim(f.to_vec());
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    let x = vec![0u32, 1];
    let mut xp = rem(&x, &f, p);
    for _ in 1..=n / 2 {
        xp = pow_mod(&xp, p as u64, &f, p);
        let g = gcd(&f, &sub(&xp, &x, p), p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// The lowest monic irreducible polynomial of degree `m` over GF(p), where
/// candidates are ordered by the packed value of their non-leading coefficients.
pub(crate) fn lowest_irreducible(p: u32, m: usize) -> Vec<u32> {
    let limit = (p as u64).pow(m as u32);
    for v in 0..limit {
        let mut f = unpack(v as u32, p, m);
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
