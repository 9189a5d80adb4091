//! Finite fields `F_q`, `q = p^k <= 256`, with table-driven arithmetic.
//!
//! An element is stored as an integer in `[0, q)` whose base-`p` digits
//! `a_0 + a_1 p + ... + a_{k-1} p^{k-1}` are the coefficients of the
//! polynomial `a_0 + a_1 x + ... + a_{k-1} x^{k-1}` modulo the field's
//! modulus. Integer order of encodings is the total order of the field.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest field order accepted by [`make_field`].
pub const MAX_ORDER: usize = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{k} exceeds the limit of {MAX_ORDER}")]
    TooLarge { p: u64, k: u32 },
    #[error("cannot invert zero")]
    InverseOfZero,
    #[error("malformed field string {0:?}; expected \"p\" or \"p^k\"")]
    Malformed(String),
}

/// A field element under the integer encoding described in the module docs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u8);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn value(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Inner {
    p: usize,
    k: u32,
    q: usize,
    modulus: Option<Vec<u8>>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

/// A concrete finite field. Cloning is cheap; the tables are shared.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<Inner>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.k == other.inner.k)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.inner.p)
            .field("k", &self.inner.k)
            .field("modulus", &self.inner.modulus)
            .finish()
    }
}

/// Formats as `"p"` for prime fields and `"p^k"` otherwise.
impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.k == 1 {
            write!(f, "{}", self.inner.p)
        } else {
            write!(f, "{}^{}", self.inner.p, self.inner.k)
        }
    }
}

/// Parses `"p"`, `"p^k"`, or a bare prime power such as `"4"`.
impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let malformed = || FieldError::Malformed(s.to_string());
        match s.split_once('^') {
            Some((p, k)) => {
                let p: u64 = p.trim().parse().map_err(|_| malformed())?;
                let k: u32 = k.trim().parse().map_err(|_| malformed())?;
                make_field(p, k)
            }
            None => {
                let n: u64 = s.parse().map_err(|_| malformed())?;
                let (p, k) = prime_power(n).ok_or(FieldError::NotPrimePower(n))?;
                make_field(p, k)
            }
        }
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Writes `n = p^k` with `p` prime, if possible.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..=n).find(|&d| n.is_multiple_of(d))?;
    let mut rest = n;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

/// Builds `F_{p^k}`. For `k > 1` the modulus is the monic irreducible of
/// degree `k` whose low coefficients `(a_0, ..., a_{k-1})` are
/// lexicographically smallest.
pub fn make_field(p: u64, k: u32) -> Result<FieldSpec, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if k == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let q = p
        .checked_pow(k)
        .filter(|&q| q as usize <= MAX_ORDER)
        .ok_or(FieldError::TooLarge { p, k })? as usize;
    let p = p as usize;
    let modulus = (k > 1).then(|| smallest_irreducible(p, k as usize));

    let mut add = vec![0u8; q * q];
    let mut mul = vec![0u8; q * q];
    for a in 0..q {
        let da = digits(a, p, k as usize);
        for b in 0..q {
            let db = digits(b, p, k as usize);
            let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            add[a * q + b] = undigits(&sum, p) as u8;
            let prod = match &modulus {
                None => (a * b) % p,
                Some(m) => undigits(&poly_mulmod(&da, &db, m, p), p),
            };
            mul[a * q + b] = prod as u8;
        }
    }
    let mut neg = vec![0u8; q];
    let mut inv = vec![0u8; q];
    for a in 0..q {
        neg[a] = (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8;
        if a != 0 {
            inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as u8;
        }
    }

    Ok(FieldSpec {
        inner: Arc::new(Inner {
            p,
            k,
            q,
            modulus: modulus.map(|m| m.into_iter().map(|c| c as u8).collect()),
            add,
            mul,
            neg,
            inv,
        }),
    })
}

fn digits(mut a: usize, p: usize, k: usize) -> Vec<usize> {
    (0..k)
        .map(|_| {
            let d = a % p;
            a /= p;
            d
        })
        .collect()
}

fn undigits(ds: &[usize], p: usize) -> usize {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Product of two polynomials (coefficients low-first) reduced modulo the
/// monic `modulus`, given by its `k` low coefficients.
fn poly_mulmod(a: &[usize], b: &[usize], modulus: &[usize], p: usize) -> Vec<usize> {
    let k = modulus.len();
    let mut prod = vec![0usize; 2 * k];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for deg in (k..2 * k).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        // x^k = -(m_0 + ... + m_{k-1} x^{k-1})
        for (j, &m) in modulus.iter().enumerate() {
            let idx = deg - k + j;
            prod[idx] = (prod[idx] + (p - (c * m) % p)) % p;
        }
    }
    prod.truncate(k);
    prod
}

/// Remainder of `num` modulo a monic `den`; both low-first, `den` full length.
fn poly_rem(num: &[usize], den: &[usize], p: usize) -> Vec<usize> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    while r.len() > dd {
        let lead = r[r.len() - 1];
        let shift = r.len() - 1 - dd;
        if lead != 0 {
            for (j, &c) in den.iter().enumerate() {
                r[shift + j] = (r[shift + j] + p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    r
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
/// `poly` is monic and given low-first including the leading 1.
fn is_irreducible(poly: &[usize], p: usize) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        for low in 0..p.pow(d as u32) {
            let mut div = digits(low, p, d);
            div.push(1);
            if poly_rem(poly, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: usize, k: usize) -> Vec<usize> {
    // Lex order on (a_0, ..., a_{k-1}) is base-p counting with a_0 most significant.
    (0..p.pow(k as u32))
        .map(|n| {
            let mut low = digits(n, p, k);
            low.reverse();
            low
        })
        .find(|low| {
            let mut full = low.clone();
            full.push(1);
            is_irreducible(&full, p)
        })
        .expect("an irreducible polynomial exists in every degree")
}

impl FieldSpec {
    pub fn characteristic(&self) -> usize {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.k
    }

    pub fn order(&self) -> usize {
        self.inner.q
    }

    /// Low coefficients `(a_0, ..., a_{k-1})` of the monic modulus, when `k > 1`.
    pub fn modulus(&self) -> Option<&[u8]> {
        self.inner.modulus.as_deref()
    }

    /// Converts an integer encoding; `None` if out of range.
    pub fn elem(&self, v: usize) -> Option<Elem> {
        (v < self.inner.q).then_some(Elem(v as u8))
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.inner.add[a.value() * self.inner.q + b.value()])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.inner.mul[a.value() * self.inner.q + b.value()])
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.inner.neg[a.value()])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, FieldError> {
        if a.is_zero() {
            return Err(FieldError::InverseOfZero);
        }
        Ok(Elem(self.inner.inv[a.value()]))
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// All `q` elements in increasing encoding order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.inner.q).map(|v| Elem(v as u8))
    }
}

pub fn enumerate_elements(field: &FieldSpec) -> Vec<Elem> {
    field.elements().collect()
}
