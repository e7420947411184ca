//! Exact arithmetic in GF(p^e) backed by full lookup tables.
//!
//! Elements are encoded as integers in `[0, q)`: the polynomial
//! `c_0 + c_1 x + ... + c_{e-1} x^{e-1}` over GF(p) is stored as
//! `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`. The same encoding is used in
//! every serialized artifact.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order supported by the table representation.
pub const MAX_ORDER: u32 = 256;

/// An element of a finite field, encoded in base p.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(transparent)]
#[serde(transparent)]
pub struct FieldElement(pub u8);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0 as u32
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The descriptor that identifies a field on disk: `{p, e, modulus}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub e: u32,
    /// Coefficients of the monic modulus, lowest degree first.
    pub modulus: Vec<u32>,
}

/// GF(q) with q = p^e.
#[derive(Clone)]
pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    // x -> x^p
    frob: Vec<u8>,
    generator: FieldElement,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field").field("p", &self.p).field("e", &self.e).field("modulus", &self.modulus).finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.modulus == other.modulus
    }
}

impl Eq for Field {}

/// Splits `q` as `p^e`, or returns `None` if `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

pub fn is_prime_power(q: u32) -> bool {
    prime_power(q).is_some()
}

// Dense polynomials over GF(p), lowest degree first, no trailing zeros.
fn poly_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = poly_trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = mod_inverse(b[db], p);
    while r.len() > db {
        let dr = r.len() - 1;
        let coef = r[dr] * lead_inv % p;
        for (k, &bk) in b.iter().enumerate() {
            let idx = dr - db + k;
            r[idx] = (r[idx] + p - coef * bk % p) % p;
        }
        r = poly_trim(r);
    }
    r
}

fn mod_inverse(a: u32, p: u32) -> u32 {
    (1..p).find(|x| a * x % p == 1).expect("nonzero residue mod a prime")
}

/// Digits of `v` in base `p`, `len` of them, lowest first.
fn digits(mut v: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(v % p);
        v /= p;
    }
    out
}

fn monic_of_degree(d: usize, low: u32, p: u32) -> Vec<u32> {
    let mut c = digits(low, p, d);
    c.push(1);
    c
}

/// Trial-division irreducibility test for a monic polynomial over GF(p).
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        for low in 0..p.pow(d as u32) {
            let div = monic_of_degree(d, low, p);
            if poly_rem(poly, &div, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible of degree `e` over GF(p) with the smallest
/// base-p encoding of its lower coefficients.
fn least_irreducible(p: u32, e: u32) -> Vec<u32> {
    (0..p.pow(e))
        .map(|low| monic_of_degree(e as usize, low, p))
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

impl Field {
    /// Builds GF(q). For `e > 1` the modulus is the least monic
    /// irreducible polynomial, so tables are reproducible.
    pub fn new(q: u32) -> Result<Field> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_ORDER {
            return Err(Error::Parameter(format!("field order {q} exceeds the supported maximum {MAX_ORDER}")));
        }
        let modulus = if e == 1 { vec![0, 1] } else { least_irreducible(p, e) };
        let qs = q as usize;
        let el = e as usize;

        let encode = |c: &[u32]| -> u8 { c.iter().rev().fold(0u32, |acc, &d| acc * p + d) as u8 };

        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        for a in 0..q {
            let da = digits(a, p, el);
            for b in 0..q {
                let db = digits(b, p, el);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * qs + b as usize] = encode(&sum);

                let mut prod = vec![0u32; 2 * el];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = if e == 1 { poly_trim(prod) } else { poly_rem(&prod, &modulus, p) };
                r.resize(el, 0);
                mul[a as usize * qs + b as usize] = encode(&r);
            }
        }

        let mut neg = vec![0u8; qs];
        let mut inv = vec![0u8; qs];
        for a in 0..qs {
            neg[a] = (0..qs).find(|&b| add[a * qs + b] == 0).unwrap() as u8;
            if a != 0 {
                inv[a] = (1..qs)
                    .find(|&b| mul[a * qs + b] == 1)
                    .ok_or_else(|| Error::Internal(format!("no inverse for {a} in GF({q})")))?
                    as u8;
            }
        }

        let mut field = Field { p, e, q, modulus, add, mul, neg, inv, frob: Vec::new(), generator: FieldElement::ONE };
        field.frob = (0..q).map(|a| field.pow(FieldElement(a as u8), p as u64).0).collect();
        field.generator = field
            .find_generator()
            .ok_or_else(|| Error::Internal(format!("multiplicative group of GF({q}) is not cyclic")))?;
        Ok(field)
    }

    fn find_generator(&self) -> Option<FieldElement> {
        let order = (self.q - 1) as u64;
        let mut primes = Vec::new();
        let mut rest = order;
        let mut d = 2;
        while d * d <= rest {
            if rest.is_multiple_of(d) {
                primes.push(d);
                while rest.is_multiple_of(d) {
                    rest /= d;
                }
            }
            d += 1;
        }
        if rest > 1 {
            primes.push(rest);
        }
        (1..self.q)
            .map(|g| FieldElement(g as u8))
            .find(|&g| primes.iter().all(|&r| self.pow(g, order / r) != FieldElement::ONE))
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn e(&self) -> u32 {
        self.e
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// A generator of the multiplicative group (the least one by encoding).
    pub fn primitive_element(&self) -> FieldElement {
        self.generator
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor { p: self.p, e: self.e, modulus: self.modulus.clone() }
    }

    #[inline]
    pub fn contains(&self, a: FieldElement) -> bool {
        a.value() < self.q
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(|a| FieldElement(a as u8))
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.add[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.mul[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.0 as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        (!a.is_zero()).then(|| FieldElement(self.inv[a.0 as usize]))
    }

    pub fn pow(&self, a: FieldElement, mut k: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// `a^(p^k)`, with `k` taken modulo `e`.
    pub fn frobenius(&self, a: FieldElement, k: u32) -> FieldElement {
        let mut x = a;
        for _ in 0..k % self.e {
            x = FieldElement(self.frob[x.0 as usize]);
        }
        x
    }

    /// Table of the map `a -> a^(p^k)`, indexed by encoding.
    pub fn frobenius_table(&self, k: u32) -> Vec<FieldElement> {
        self.elements().map(|a| self.frobenius(a, k)).collect()
    }
}
