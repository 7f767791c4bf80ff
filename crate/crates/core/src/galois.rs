//! Arithmetic in GF(p^n).
//!
//! Elements are indexed by the integer `c_0 + c_1 p + ... + c_{n-1} p^{n-1}`
//! of their polynomial-basis coefficients, so enumeration order is
//! lexicographic on the coefficient vector read from the top degree down.
//! Multiplication goes through log/antilog tables built once per field.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

const ADD_TABLE_MAX: usize = 256;

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

/// Splits `q` into `(p, n)` with `q = p^n`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut n = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        n += 1;
    }
    (rest == 1).then_some((p as u32, n))
}

/// Index of a field element; only meaningful together with its [`Field`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Coefficient-vector form of an element (low degree first).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub rep: Vec<u32>,
}

impl FieldElement {
    pub fn new(rep: Vec<u32>) -> Self {
        FieldElement { rep }
    }
}

/// `p`, `n` and the defining modulus (low degree first, monic, length `n + 1`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    pub p: u32,
    pub n: u32,
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn order(&self) -> usize {
        (self.p as usize).pow(self.n)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF {} {}", self.p, self.n)?;
        for c in &self.modulus {
            write!(f, " {c}")?;
        }
        Ok(())
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::ParseError { line: 1, msg: msg.to_string() };
        let mut it = s.split_whitespace();
        if it.next() != Some("GF") {
            return Err(bad("expected `GF p n modulus...`"));
        }
        let mut num = || -> Result<u32> {
            it.next().ok_or_else(|| bad("truncated field description"))?.parse::<u32>().map_err(|e| bad(&e.to_string()))
        };
        let p = num()?;
        let n = num()?;
        let mut modulus = Vec::with_capacity(n as usize + 1);
        for _ in 0..=n {
            modulus.push(num()?);
        }
        Ok(FieldSpec { p, n, modulus })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
    Pow(u64),
}

/// An immutable handle on GF(p^n) with precomputed tables.
#[derive(Debug, Clone)]
pub struct Field {
    spec: FieldSpec,
    q: usize,
    generator: Elem,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
    trace: Vec<u32>,
    square: Vec<bool>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for Field {}

/// Polynomial helpers over GF(p), coefficient vectors low degree first.
mod poly {
    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    /// Remainder of `a` modulo monic-or-not `m` over GF(p).
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let m = trim(m.to_vec());
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm && !r.is_empty() {
            let shift = r.len() - 1 - dm;
            let factor = (r[r.len() - 1] as u64 * lead_inv as u64 % p as u64) as u32;
            for (i, &c) in m.iter().enumerate() {
                let sub = (factor as u64 * c as u64 % p as u64) as u32;
                let idx = i + shift;
                r[idx] = (r[idx] + p - sub) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn inv_mod(a: u32, p: u32) -> u32 {
        // p is prime and small
        let mut r = 1u64;
        let mut base = a as u64 % p as u64;
        let mut e = p as u64 - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % p as u64;
            }
            base = base * base % p as u64;
            e >>= 1;
        }
        r as u32
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        trim(out.into_iter().map(|c| c as u32).collect())
    }

    /// Enumerates monic polynomials of degree `deg` in increasing
    /// `sum c_i p^i` order, calling `f` until it returns true.
    pub fn monic_of_degree(deg: u32, p: u32) -> impl Iterator<Item = Vec<u32>> {
        let count = (p as u64).pow(deg);
        (0..count).map(move |mut k| {
            let mut v = Vec::with_capacity(deg as usize + 1);
            for _ in 0..deg {
                v.push((k % p as u64) as u32);
                k /= p as u64;
            }
            v.push(1);
            v
        })
    }

    /// Exhaustive irreducibility test: no monic factor of degree `1..=deg/2`.
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let deg = m.len() as u32 - 1;
        if deg == 0 {
            return false;
        }
        for d in 1..=deg / 2 {
            for f in monic_of_degree(d, p) {
                if rem(m, &f, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

/// The least monic irreducible polynomial of degree `n` over GF(p), ordered
/// by the integer `sum c_i p^i`.
pub fn least_irreducible(p: u32, n: u32) -> Vec<u32> {
    poly::monic_of_degree(n, p)
        .find(|m| poly::is_irreducible(m, p))
        .expect("irreducible polynomials exist in every degree")
}

pub fn is_irreducible(p: u32, modulus: &[u32]) -> bool {
    poly::is_irreducible(modulus, p)
}

impl Field {
    /// Builds GF(p^n). Without an explicit modulus the least monic
    /// irreducible of degree `n` is used.
    pub fn new(p: u32, n: u32, modulus: Option<Vec<u32>>) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if n == 0 {
            return Err(Error::DegreeMismatch { expected: 0, got: modulus.unwrap_or_default() });
        }
        let order = (p as u64).checked_pow(n).unwrap_or(u64::MAX);
        if order > MAX_FIELD_ORDER {
            return Err(Error::OrderTooLarge { order, max: MAX_FIELD_ORDER });
        }
        let modulus = match modulus {
            Some(m) => {
                if m.len() != n as usize + 1 || m[n as usize] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::DegreeMismatch { expected: n, got: m });
                }
                if !poly::is_irreducible(&m, p) {
                    return Err(Error::NotIrreducible { p, modulus: m });
                }
                m
            }
            None => least_irreducible(p, n),
        };
        Ok(Self::build(FieldSpec { p, n, modulus }))
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Field> {
        Field::new(spec.p, spec.n, Some(spec.modulus.clone()))
    }

    /// GF(q) for a prime power `q`, with the default modulus.
    pub fn of_order(q: u64) -> Result<Field> {
        match prime_power(q) {
            Some((p, n)) => Field::new(p, n, None),
            None => Err(Error::NotPrime(q)),
        }
    }

    fn build(spec: FieldSpec) -> Field {
        let p = spec.p;
        let n = spec.n as usize;
        let q = spec.order();
        let to_vec = |k: usize| -> Vec<u32> {
            let mut k = k;
            (0..n)
                .map(|_| {
                    let c = (k % p as usize) as u32;
                    k /= p as usize;
                    c
                })
                .collect()
        };
        let to_idx = |v: &[u32]| -> u32 { v.iter().rev().fold(0u32, |acc, &c| acc * p + c) };
        let mulmod = |a: u32, b: u32| -> u32 {
            let prod = poly::mul(&poly::trim(to_vec(a as usize)), &poly::trim(to_vec(b as usize)), p);
            let r = poly::rem(&prod, &spec.modulus, p);
            let mut full = r;
            full.resize(n, 0);
            to_idx(&full)
        };

        // Find the least generator of the multiplicative group.
        let mut exp = vec![0u32; q.max(2) - 1];
        let mut generator = Elem(1);
        if q == 2 {
            exp[0] = 1;
        } else {
            for g in 2..q as u32 {
                let mut cur = 1u32;
                let mut ok = true;
                for (i, slot) in exp.iter_mut().enumerate() {
                    *slot = cur;
                    cur = mulmod(cur, g);
                    if cur == 1 && i + 1 < q - 1 {
                        ok = false;
                        break;
                    }
                }
                if ok && cur == 1 {
                    generator = Elem(g);
                    break;
                }
            }
        }
        let mut log = vec![0u32; q];
        for (i, &e) in exp.iter().enumerate() {
            log[e as usize] = i as u32;
        }

        let neg: Vec<u32> = (0..q)
            .map(|k| {
                let v: Vec<u32> = to_vec(k).iter().map(|&c| (p - c) % p).collect();
                to_idx(&v)
            })
            .collect();

        let add = (q <= ADD_TABLE_MAX).then(|| {
            let mut t = vec![0u32; q * q];
            for a in 0..q {
                let va = to_vec(a);
                for b in 0..q {
                    let vb = to_vec(b);
                    let s: Vec<u32> = va.iter().zip(&vb).map(|(x, y)| (x + y) % p).collect();
                    t[a * q + b] = to_idx(&s);
                }
            }
            t
        });

        let mut field = Field { spec, q, generator, exp, log, neg, add, trace: Vec::new(), square: Vec::new() };
        field.trace = (0..q as u32).map(|a| field.trace_direct(Elem(a)).0).collect();
        let mut square = vec![false; q];
        for b in 0..q as u32 {
            square[field.mul(Elem(b), Elem(b)).idx()] = true;
        }
        field.square = square;
        field
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.spec.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.spec.n
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.q as u32).map(Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + Clone {
        (1..self.q as u32).map(Elem)
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, k: i64) -> Elem {
        Elem(k.rem_euclid(self.spec.p as i64) as u32)
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        let p = self.spec.p;
        let mut k = a.0;
        (0..self.spec.n)
            .map(|_| {
                let c = k % p;
                k /= p;
                c
            })
            .collect()
    }

    pub fn to_element(&self, a: Elem) -> FieldElement {
        FieldElement { rep: self.coeffs(a) }
    }

    pub fn from_element(&self, a: &FieldElement) -> Result<Elem> {
        if a.rep.len() != self.spec.n as usize || a.rep.iter().any(|&c| c >= self.spec.p) {
            return Err(Error::FieldMismatch);
        }
        Ok(Elem(a.rep.iter().rev().fold(0, |acc, &c| acc * self.spec.p + c)))
    }

    /// Validates an index against this field.
    pub fn elem(&self, k: u32) -> Result<Elem> {
        if (k as usize) < self.q {
            Ok(Elem(k))
        } else {
            Err(Error::FieldMismatch)
        }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.spec.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        match &self.add {
            Some(t) => Elem(t[a.idx() * self.q + b.idx()]),
            None => self.add_digits(a, b),
        }
    }

    fn add_digits(&self, a: Elem, b: Elem) -> Elem {
        let p = self.spec.p;
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.spec.n {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        Elem(out)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.idx()])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        let m = self.q - 1;
        let s = self.log[a.idx()] as usize + self.log[b.idx()] as usize;
        Elem(self.exp[if s >= m { s - m } else { s }])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = self.q - 1;
        Ok(Elem(self.exp[(m - self.log[a.idx()] as usize) % m]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let m = (self.q - 1) as u64;
        let k = (self.log[a.idx()] as u64 * (e % m)) % m;
        Elem(self.exp[k as usize])
    }

    /// Discrete log to the base of [`Field::generator`].
    pub fn log(&self, a: Elem) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.idx()])
    }

    /// Checked arithmetic on coefficient-vector elements. `b` is required
    /// for the binary operations and ignored otherwise.
    pub fn arith(&self, op: ArithOp, a: &FieldElement, b: Option<&FieldElement>) -> Result<FieldElement> {
        let x = self.from_element(a)?;
        let y = || -> Result<Elem> {
            self.from_element(b.ok_or_else(|| Error::InvalidArgument("missing operand".into()))?)
        };
        let r = match op {
            ArithOp::Add => self.add(x, y()?),
            ArithOp::Sub => self.sub(x, y()?),
            ArithOp::Mul => self.mul(x, y()?),
            ArithOp::Div => self.div(x, y()?)?,
            ArithOp::Neg => self.neg(x),
            ArithOp::Inv => self.inv(x)?,
            ArithOp::Pow(e) => self.pow(x, e),
        };
        Ok(self.to_element(r))
    }

    fn trace_direct(&self, a: Elem) -> Elem {
        let mut acc = Elem::ZERO;
        let mut cur = a;
        for _ in 0..self.spec.n {
            acc = self.add(acc, cur);
            cur = self.pow(cur, self.spec.p as u64);
        }
        acc
    }

    /// Absolute trace `a + a^p + ... + a^{p^{n-1}}`; the result lies in the
    /// prime subfield, so its index is its integer value in `0..p`.
    #[inline]
    pub fn trace(&self, a: Elem) -> Elem {
        Elem(self.trace[a.idx()])
    }

    /// Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.spec.p as u64)
    }

    /// The unique square root in characteristic 2.
    pub fn frobenius_sqrt(&self, a: Elem) -> Result<Elem> {
        if self.spec.p != 2 {
            return Err(Error::WrongCharacteristic { expected: 2, actual: self.spec.p });
        }
        Ok(self.pow(a, (self.q / 2) as u64))
    }

    #[inline]
    pub fn is_square(&self, a: Elem) -> bool {
        self.square[a.idx()]
    }

    /// Evaluates `sum coeffs[i] x^i`.
    pub fn eval_poly(&self, coeffs: &[Elem], x: Elem) -> Elem {
        coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// Human-readable form: integers for prime fields, polynomials in `x` otherwise.
    pub fn format(&self, a: Elem) -> String {
        if self.spec.n == 1 {
            return a.0.to_string();
        }
        let c = self.coeffs(a);
        let terms: Vec<String> = c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &v)| v != 0)
            .map(|(i, &v)| match (i, v) {
                (0, v) => v.to_string(),
                (1, 1) => "x".to_string(),
                (1, v) => format!("{v}x"),
                (i, 1) => format!("x^{i}"),
                (i, v) => format!("{v}x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }

    pub fn describe(&self) -> String {
        self.spec.to_string()
    }
}
