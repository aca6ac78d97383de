//! Arithmetic in small prime-power fields GF(p^k).
//!
//! Elements are integer codes `c = Σ cᵢ pⁱ` where `cᵢ` are the coefficients of
//! the polynomial representative (low degree first). Code 0 is the additive
//! identity and code 1 the multiplicative identity. For `q ≤ 256` all
//! operations are table lookups; above that multiplication reduces modulo the
//! defining polynomial on the fly.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

/// Fields up to this order get precomputed operation tables.
pub const TABLE_LIMIT: u32 = 256;

/// A field element code in `[0, q)`.
pub type Fe = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("modulus has degree {got}, expected {expected}")]
    DegreeMismatch { expected: u32, got: u32 },
    #[error("modulus is not monic")]
    NotMonic,
    #[error("modulus coefficient {0} is out of range")]
    CoefficientOutOfRange(u32),
    #[error("modulus is reducible: divisible by {factor:?} (low degree first)")]
    NotIrreducible { factor: Vec<u32> },
    #[error("field order {0} exceeds the supported maximum")]
    TooLarge(u64),
    #[error("field header `{0}` is malformed")]
    BadHeader(String),
    #[error("cannot invert zero")]
    ZeroInverse,
}

#[derive(Debug)]
struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

#[derive(Debug)]
struct Inner {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

/// A finite field `GF(p^k)`. Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}", self.inner.q)?;
        if self.inner.k > 1 {
            write!(f, ", modulus {:?}", self.inner.modulus)?;
        }
        write!(f, ")")
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, k)` with `q = p^k`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

// Polynomials over GF(p) as coefficient vectors, low degree first, no trailing zeros.

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    // b is monic
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        for (i, &c) in b.iter().enumerate() {
            let t = (lead as u64 * c as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - t) % p;
        }
        r = trim(r);
    }
    r
}

/// Least monic divisor of degree `1..=deg/2` of the monic polynomial `f`, if any.
fn find_factor(f: &[u32], p: u32) -> Option<Vec<u32>> {
    let deg = f.len() as u32 - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d);
        for code in 0..count {
            let mut g = digits(code, p, d as usize);
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return Some(g);
            }
        }
    }
    None
}

fn digits(mut code: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = (code % p as u64) as u32;
        code /= p as u64;
    }
    out
}

/// The lexicographically least monic irreducible polynomial of degree `k`
/// over GF(p), ordering candidates by their non-leading coefficients read as
/// a base-p number (low degree least significant).
pub fn default_modulus(p: u32, k: u32) -> Vec<u32> {
    let count = (p as u64).pow(k);
    for code in 0..count {
        let mut f = digits(code, p, k as usize);
        f.push(1);
        if f[0] != 0 && find_factor(&f, p).is_none() {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Builds `GF(p^k)`. When `modulus` is omitted and `k > 1` the
/// [`default_modulus`] is used.
pub fn build_field(p: u32, k: u32, modulus: Option<&[u32]>) -> Result<Field, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if k == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let q = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
    if q > MAX_ORDER as u64 {
        return Err(FieldError::TooLarge(q));
    }
    let q = q as u32;
    let modulus = match modulus {
        Some(m) => {
            if m.is_empty() {
                return Err(FieldError::DegreeMismatch { expected: k, got: 0 });
            }
            let got = m.len() as u32 - 1;
            if got != k {
                return Err(FieldError::DegreeMismatch { expected: k, got });
            }
            if let Some(&c) = m.iter().find(|&&c| c >= p) {
                return Err(FieldError::CoefficientOutOfRange(c));
            }
            if m[k as usize] != 1 {
                return Err(FieldError::NotMonic);
            }
            if k == 1 {
                vec![0, 1]
            } else if let Some(factor) = find_factor(m, p) {
                return Err(FieldError::NotIrreducible { factor });
            } else {
                m.to_vec()
            }
        }
        None if k == 1 => vec![0, 1],
        None => default_modulus(p, k),
    };
    let mut inner = Inner { p, k, q, modulus, tables: None };
    if q <= TABLE_LIMIT {
        inner.tables = Some(build_tables(&inner));
    }
    Ok(Field { inner: Arc::new(inner) })
}

/// Builds the field of order `q` with the default modulus.
pub fn field_of_order(q: u32) -> Result<Field, FieldError> {
    match prime_power(q) {
        Some((p, k)) => build_field(p, k, None),
        None => Err(FieldError::NotPrime(q)),
    }
}

fn slow_add(f: &Inner, a: u32, b: u32) -> u32 {
    if f.k == 1 {
        return (a + b) % f.p;
    }
    let (mut a, mut b) = (a, b);
    let mut out = 0;
    let mut place = 1;
    for _ in 0..f.k {
        out += ((a % f.p + b % f.p) % f.p) * place;
        a /= f.p;
        b /= f.p;
        place *= f.p;
    }
    out
}

fn slow_neg(f: &Inner, a: u32) -> u32 {
    if f.k == 1 {
        return (f.p - a) % f.p;
    }
    let mut a = a;
    let mut out = 0;
    let mut place = 1;
    for _ in 0..f.k {
        out += ((f.p - a % f.p) % f.p) * place;
        a /= f.p;
        place *= f.p;
    }
    out
}

fn slow_mul(f: &Inner, a: u32, b: u32) -> u32 {
    if f.k == 1 {
        return ((a as u64 * b as u64) % f.p as u64) as u32;
    }
    let k = f.k as usize;
    let p = f.p as u64;
    let da = digits(a as u64, f.p, k);
    let db = digits(b as u64, f.p, k);
    let mut prod = vec![0u32; 2 * k - 1];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p) as u32;
        }
    }
    let r = poly_rem(&prod, &f.modulus, f.p);
    r.iter().rev().fold(0u32, |acc, &c| acc * f.p + c)
}

fn slow_inv(f: &Inner, a: u32) -> u32 {
    // a^(q-2)
    let mut result = 1u32;
    let mut base = a;
    let mut e = f.q - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = slow_mul(f, result, base);
        }
        base = slow_mul(f, base, base);
        e >>= 1;
    }
    result
}

fn build_tables(f: &Inner) -> Tables {
    let q = f.q as usize;
    let mut add = vec![0u16; q * q];
    let mut mul = vec![0u16; q * q];
    for a in 0..q {
        for b in 0..q {
            add[a * q + b] = slow_add(f, a as u32, b as u32) as u16;
            mul[a * q + b] = slow_mul(f, a as u32, b as u32) as u16;
        }
    }
    let neg = (0..q).map(|a| slow_neg(f, a as u32) as u16).collect();
    let mut inv = vec![0u16; q];
    for a in 1..q {
        inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).expect("field element has an inverse") as u16;
    }
    Tables { add, mul, neg, inv }
}

impl Field {
    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn k(&self) -> u32 {
        self.inner.k
    }

    /// The field order `q = p^k`.
    pub fn order(&self) -> u32 {
        self.inner.q
    }

    /// Defining polynomial, low degree first (`[0, 1]` for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn contains(&self, a: Fe) -> bool {
        a < self.inner.q
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        match &self.inner.tables {
            Some(t) => t.add[(a * self.inner.q + b) as usize] as Fe,
            None => slow_add(&self.inner, a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        match &self.inner.tables {
            Some(t) => t.neg[a as usize] as Fe,
            None => slow_neg(&self.inner, a),
        }
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        match &self.inner.tables {
            Some(t) => t.mul[(a * self.inner.q + b) as usize] as Fe,
            None => slow_mul(&self.inner, a, b),
        }
    }

    pub fn inv(&self, a: Fe) -> Result<Fe, FieldError> {
        if a == 0 {
            return Err(FieldError::ZeroInverse);
        }
        Ok(match &self.inner.tables {
            Some(t) => t.inv[a as usize] as Fe,
            None => slow_inv(&self.inner, a),
        })
    }

    /// Inverse of a value known to be nonzero.
    #[inline]
    pub(crate) fn inv_nz(&self, a: Fe) -> Fe {
        debug_assert!(a != 0);
        match &self.inner.tables {
            Some(t) => t.inv[a as usize] as Fe,
            None => slow_inv(&self.inner, a),
        }
    }

    /// All element codes in ascending order.
    pub fn elements(&self) -> std::ops::Range<Fe> {
        0..self.inner.q
    }

    /// The header line used by the matrix file format: `q p k c0 c1 .. ck`.
    pub fn header(&self) -> String {
        let mut s = format!("{} {} {}", self.inner.q, self.inner.p, self.inner.k);
        for c in &self.inner.modulus {
            s.push(' ');
            s.push_str(&c.to_string());
        }
        s
    }

    /// Parses a header produced by [`Field::header`].
    pub fn parse_header(line: &str) -> Result<Field, FieldError> {
        let bad = || FieldError::BadHeader(line.trim().to_string());
        let nums: Vec<u32> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        if nums.len() < 4 {
            return Err(bad());
        }
        let (q, p, k) = (nums[0], nums[1], nums[2]);
        let field = build_field(p, k, Some(&nums[3..]))?;
        if field.order() != q {
            return Err(bad());
        }
        Ok(field)
    }
}
