//! The finite field F_q, q = p^e odd.
//!
//! Elements are small integers `0..q`: the element with coordinates
//! `(c_0, ..., c_{e-1})` over F_p (in the basis `1, x, ..., x^{e-1}` of
//! `F_p[x]/(modulus)`) is encoded as `sum c_i p^i`. Integer order on the
//! encoding is the canonical order of the field, so `0..p` is the prime
//! subfield in its natural order.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field size. Arithmetic is table driven.
pub const MAX_Q: u32 = 1024;

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe(pub(crate) u16);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn index(self) -> u32 {
        self.0 as u32
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    /// Monic irreducible modulus over F_p, coefficients from the constant
    /// term up (length `e + 1`). Empty for prime fields.
    pub modulus: Vec<u32>,
}

/// Conway polynomials for the small non-prime fields we ship defaults for.
const DEFAULT_MODULI: &[(u32, u32, &[u32])] = &[
    (3, 2, &[2, 2, 1]),
    (5, 2, &[2, 4, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (7, 2, &[3, 6, 1]),
];

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FieldSpec {
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, None)
    }

    /// Builds a field description. For `e > 1` the modulus defaults to the
    /// built-in table (q = 9, 25, 27, 49) or else to the first monic
    /// irreducible of degree `e` over F_p in canonical order.
    pub fn new(p: u32, e: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("characteristic {p} is not prime")));
        }
        if p == 2 {
            return Err(Error::invalid("q must be odd"));
        }
        if e == 0 {
            return Err(Error::invalid("extension degree must be at least 1"));
        }
        let q = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        if q > MAX_Q as u64 {
            return Err(Error::invalid(format!("q = {p}^{e} exceeds the supported maximum {MAX_Q}")));
        }
        if e == 1 {
            if modulus.as_ref().is_some_and(|m| !m.is_empty()) {
                return Err(Error::invalid("a modulus is only meaningful for e > 1"));
            }
            return Ok(FieldSpec { p, e, modulus: Vec::new() });
        }
        let prime = Fq::new(FieldSpec { p, e: 1, modulus: Vec::new() })?;
        let modulus = match modulus {
            Some(m) => {
                let m: Vec<u32> = m.into_iter().map(|c| c % p).collect();
                if m.len() != e as usize + 1 || m[e as usize] != 1 {
                    return Err(Error::invalid(format!(
                        "modulus must be monic of degree {e} (coefficients from the constant term up)"
                    )));
                }
                let poly = super::Poly::from_coeffs(m.iter().map(|&c| prime.from_u32(c)).collect());
                if !super::is_irreducible(&prime, &poly)? {
                    return Err(Error::NotIrreducible(format!("modulus {}", poly.display(&prime))));
                }
                m
            }
            None => match DEFAULT_MODULI.iter().find(|(pp, ee, _)| *pp == p && *ee == e) {
                Some((_, _, m)) => m.to_vec(),
                None => {
                    let f = super::monic_irreducibles(&prime, e as usize)
                        .next()
                        .ok_or_else(|| Error::internal("no irreducible modulus found"))?;
                    f.coeffs().iter().map(|c| c.index()).collect()
                }
            },
        };
        Ok(FieldSpec { p, e, modulus })
    }

    /// Splits `q` into `p^e`.
    pub fn from_q(q: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if q < 3 {
            return Err(Error::invalid(format!("q = {q} is not an odd prime power")));
        }
        let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
        let mut e = 0;
        let mut rest = q;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(Error::invalid(format!("q = {q} is not a prime power")));
        }
        Self::new(p, e, modulus)
    }

    pub fn q(&self) -> u32 {
        self.p.pow(self.e)
    }
}

struct Tables {
    spec: FieldSpec,
    q: usize,
    add: Vec<Fe>,
    mul: Vec<Fe>,
    neg: Vec<Fe>,
    inv: Vec<Fe>,
    primitive: Fe,
}

/// A finite field context. Cheap to clone.
#[derive(Clone)]
pub struct Fq {
    t: Arc<Tables>,
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fq(q = {}, {:?})", self.t.q, self.t.spec)
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.t, &other.t) || self.t.spec == other.t.spec
    }
}

impl Eq for Fq {}

impl Fq {
    pub fn new(spec: FieldSpec) -> Result<Self> {
        let p = spec.p as usize;
        let e = spec.e as usize;
        let q = p.pow(spec.e);
        if q > MAX_Q as usize {
            return Err(Error::invalid(format!("q = {q} exceeds the supported maximum {MAX_Q}")));
        }
        let coords = |mut a: usize| -> Vec<usize> {
            let mut c = vec![0; e];
            for ci in c.iter_mut() {
                *ci = a % p;
                a /= p;
            }
            c
        };
        let encode = |c: &[usize]| -> usize { c.iter().rev().fold(0, |acc, &x| acc * p + x) };

        let mut add = vec![Fe(0); q * q];
        let mut mul = vec![Fe(0); q * q];
        let all: Vec<Vec<usize>> = (0..q).map(coords).collect();
        for a in 0..q {
            for b in 0..q {
                let s: Vec<usize> = (0..e).map(|i| (all[a][i] + all[b][i]) % p).collect();
                add[a * q + b] = Fe(encode(&s) as u16);
                let prod = if e == 1 {
                    vec![(a * b) % p]
                } else {
                    let mut full = vec![0usize; 2 * e - 1];
                    for i in 0..e {
                        for j in 0..e {
                            full[i + j] = (full[i + j] + all[a][i] * all[b][j]) % p;
                        }
                    }
                    // reduce modulo the monic modulus
                    for k in (e..full.len()).rev() {
                        let c = full[k];
                        if c != 0 {
                            for (i, &mi) in spec.modulus.iter().enumerate().take(e) {
                                let idx = k - e + i;
                                full[idx] = (full[idx] + (p - c) * (mi as usize % p)) % p;
                            }
                            full[k] = 0;
                        }
                    }
                    full.truncate(e);
                    full
                };
                mul[a * q + b] = Fe(encode(&prod) as u16);
            }
        }
        let mut neg = vec![Fe(0); q];
        let mut inv = vec![Fe(0); q];
        for a in 0..q {
            for b in 0..q {
                if add[a * q + b].0 == 0 {
                    neg[a] = Fe(b as u16);
                }
                if mul[a * q + b].0 == 1 {
                    inv[a] = Fe(b as u16);
                }
            }
        }
        for a in 1..q {
            if mul[a * q + inv[a].0 as usize].0 != 1 {
                return Err(Error::NotIrreducible("field modulus".into()));
            }
        }
        let mut fq = Fq { t: Arc::new(Tables { spec, q, add, mul, neg, inv, primitive: Fe(0) }) };
        let order = (q - 1) as u128;
        let factors = prime_factors(order);
        let primitive = (1..q)
            .map(|a| Fe(a as u16))
            .find(|&a| factors.iter().all(|&l| fq.pow(a, order / l) != Fe::ONE))
            .ok_or_else(|| Error::internal("no primitive element"))?;
        Arc::get_mut(&mut fq.t).expect("fresh table").primitive = primitive;
        Ok(fq)
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(FieldSpec::prime(p)?)
    }

    pub fn from_q(q: u32) -> Result<Self> {
        Self::new(FieldSpec::from_q(q, None)?)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.t.spec
    }

    pub fn q(&self) -> u32 {
        self.t.q as u32
    }

    pub fn p(&self) -> u32 {
        self.t.spec.p
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        self.t.add[a.0 as usize * self.t.q + b.0 as usize]
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        self.t.neg[a.0 as usize]
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        self.t.mul[a.0 as usize * self.t.q + b.0 as usize]
    }

    #[inline]
    pub fn inv(&self, a: Fe) -> Fe {
        debug_assert!(!a.is_zero(), "inverse of zero");
        self.t.inv[a.0 as usize]
    }

    pub fn try_inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.inv(a))
        }
    }

    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, mut a: Fe, mut k: u128) -> Fe {
        let mut acc = Fe::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            k >>= 1;
        }
        acc
    }

    /// The first generator of F_q^* in canonical order.
    pub fn primitive(&self) -> Fe {
        self.t.primitive
    }

    /// Image of an integer in the prime subfield.
    pub fn from_i64(&self, x: i64) -> Fe {
        Fe(x.rem_euclid(self.t.spec.p as i64) as u16)
    }

    pub(crate) fn from_u32(&self, x: u32) -> Fe {
        debug_assert!((x as usize) < self.t.q);
        Fe(x as u16)
    }

    /// Element with encoding `index`, if in range.
    pub fn element(&self, index: u32) -> Option<Fe> {
        ((index as usize) < self.t.q).then_some(Fe(index as u16))
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.t.q as u16).map(Fe)
    }

    pub fn coords(&self, a: Fe) -> Vec<u32> {
        let p = self.t.spec.p;
        let mut x = a.0 as u32;
        (0..self.t.spec.e)
            .map(|_| {
                let c = x % p;
                x /= p;
                c
            })
            .collect()
    }

    pub fn from_coords(&self, coords: &[i64]) -> Result<Fe> {
        if coords.len() > self.t.spec.e as usize {
            return Err(Error::Parse(format!(
                "field element has {} coordinates, expected at most {}",
                coords.len(),
                self.t.spec.e
            )));
        }
        let p = self.t.spec.p as i64;
        let idx = coords.iter().rev().fold(0i64, |acc, &c| acc * p + c.rem_euclid(p));
        Ok(Fe(idx as u16))
    }

    pub fn is_square(&self, a: Fe) -> bool {
        a.is_zero() || self.pow(a, (self.t.q as u128 - 1) / 2) == Fe::ONE
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Fe) -> u32 {
        debug_assert!(!a.is_zero());
        let mut x = a;
        let mut k = 1;
        while x != Fe::ONE {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Text form: an integer for prime-subfield elements of prime fields, a
    /// coordinate vector `[c0,c1,...]` otherwise.
    pub fn fmt_elem(&self, a: Fe) -> String {
        if self.t.spec.e == 1 {
            a.0.to_string()
        } else {
            let c: Vec<String> = self.coords(a).iter().map(|c| c.to_string()).collect();
            format!("[{}]", c.join(","))
        }
    }

    /// Parses an integer (reduced into the prime subfield) or a bracketed
    /// coordinate vector.
    pub fn parse_elem(&self, s: &str) -> Result<Fe> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let coords = inner
                .split(',')
                .map(|c| c.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad coordinate `{c}`"))))
                .collect::<Result<Vec<_>>>()?;
            self.from_coords(&coords)
        } else {
            let x: i64 = s.parse().map_err(|_| Error::Parse(format!("bad field element `{s}`")))?;
            Ok(self.from_i64(x))
        }
    }
}
