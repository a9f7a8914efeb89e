//! Dense univariate polynomials over F_q in the variable `T`.

use std::cmp::Ordering;

use super::fq::{Fe, Fq};
use crate::error::{Error, Result};

/// A polynomial with coefficients from the constant term up. The leading
/// coefficient is never zero; the zero polynomial has no coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Fe>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![Fe::ONE] }
    }

    /// The variable `T`.
    pub fn t() -> Self {
        Poly { coeffs: vec![Fe::ZERO, Fe::ONE] }
    }

    pub fn constant(c: Fe) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * T^k`
    pub fn monomial(c: Fe, k: usize) -> Self {
        let mut coeffs = vec![Fe::ZERO; k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Fe>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Convenience constructor from integer coefficients (constant term first).
    pub fn from_ints(fq: &Fq, coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| fq.from_i64(c)).collect())
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Fe {
        self.coeffs.get(k).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Fe::ONE
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the convention `deg 0 = -1`.
    pub fn deg_i64(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn leading(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Fe::ONE
    }

    /// Constant polynomial value, if the polynomial has degree <= 0.
    pub fn as_constant(&self) -> Option<Fe> {
        match self.coeffs.len() {
            0 => Some(Fe::ZERO),
            1 => Some(self.coeffs[0]),
            _ => None,
        }
    }

    pub fn add(&self, other: &Poly, fq: &Fq) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| fq.add(self.coeff(k), other.coeff(k))).collect())
    }

    pub fn sub(&self, other: &Poly, fq: &Fq) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| fq.sub(self.coeff(k), other.coeff(k))).collect())
    }

    pub fn neg(&self, fq: &Fq) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|&c| fq.neg(c)).collect() }
    }

    pub fn scale(&self, c: Fe, fq: &Fq) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|&a| fq.mul(a, c)).collect() }
    }

    /// Multiplication by `T^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Fe::ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }

    pub fn mul(&self, other: &Poly, fq: &Fq) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Fe::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = fq.add(out[i + j], fq.mul(a, b));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn pow(&self, k: u32, fq: &Fq) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = acc.mul(self, fq);
        }
        acc
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn divmod(&self, divisor: &Poly, fq: &Fq) -> Result<(Poly, Poly)> {
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = fq.inv(divisor.leading());
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Fe::ZERO; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k];
            if c.is_zero() {
                continue;
            }
            let f = fq.mul(c, lead_inv);
            quot[k - dd] = f;
            for (i, &b) in divisor.coeffs.iter().enumerate() {
                let idx = k - dd + i;
                rem[idx] = fq.sub(rem[idx], fq.mul(f, b));
            }
        }
        rem.truncate(dd);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    pub fn rem(&self, divisor: &Poly, fq: &Fq) -> Result<Poly> {
        Ok(self.divmod(divisor, fq)?.1)
    }

    /// Division that must be exact; a nonzero remainder is an internal error.
    pub fn exact_div(&self, divisor: &Poly, fq: &Fq) -> Result<Poly> {
        let (q, r) = self.divmod(divisor, fq)?;
        if !r.is_zero() {
            return Err(Error::internal("inexact polynomial division"));
        }
        Ok(q)
    }

    pub fn monic(&self, fq: &Fq) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(fq.inv(self.leading()), fq)
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &Poly, fq: &Fq) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, fq).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic(fq)
    }

    /// Extended gcd: returns `(g, s, t)` with `g = s*self + t*other`, `g` monic.
    pub fn ext_gcd(&self, other: &Poly, fq: &Fq) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1, fq).expect("nonzero divisor");
            let s = s0.sub(&q.mul(&s1, fq), fq);
            let t = t0.sub(&q.mul(&t1, fq), fq);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let li = fq.inv(r0.leading());
        (r0.scale(li, fq), s0.scale(li, fq), t0.scale(li, fq))
    }

    pub fn eval(&self, x: Fe, fq: &Fq) -> Fe {
        self.coeffs.iter().rev().fold(Fe::ZERO, |acc, &c| fq.add(fq.mul(acc, x), c))
    }

    /// `self^k mod modulus`.
    pub fn powmod(&self, mut k: u128, modulus: &Poly, fq: &Fq) -> Result<Poly> {
        let mut base = self.rem(modulus, fq)?;
        let mut acc = Poly::one().rem(modulus, fq)?;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base, fq).rem(modulus, fq)?;
            }
            base = base.mul(&base, fq).rem(modulus, fq)?;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Multiplicity of `w` in `self` and the cofactor: `self = w^k * u`.
    pub fn split_power(&self, w: &Poly, fq: &Fq) -> Result<(u32, Poly)> {
        if self.is_zero() {
            return Err(Error::invalid("cannot take the valuation of zero"));
        }
        let mut k = 0;
        let mut u = self.clone();
        loop {
            let (q, r) = u.divmod(w, fq)?;
            if !r.is_zero() {
                return Ok((k, u));
            }
            u = q;
            k += 1;
        }
    }

    pub fn display<'a>(&'a self, fq: &'a Fq) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, fq }
    }
}

impl Ord for Poly {
    /// Canonical order: by degree, then lexicographically on the coefficient
    /// vector starting from the constant term.
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    fq: &'a Fq,
}

impl std::fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&super::text::format_poly(self.poly, self.fq))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divmod_examples() {
        let f3 = Fq::prime(3).unwrap();
        let (q, r) = Poly::from_ints(&f3, &[1, 0, 1]).divmod(&Poly::t(), &f3).unwrap();
        assert_eq!(q, Poly::t());
        assert_eq!(r, Poly::one());

        let f5 = Fq::prime(5).unwrap();
        let f = Poly::from_ints(&f5, &[1, 2, 0, 1]);
        let g = Poly::from_ints(&f5, &[1, 0, 1]);
        let (q, r) = f.divmod(&g, &f5).unwrap();
        assert_eq!(q, Poly::t());
        assert_eq!(r, Poly::from_ints(&f5, &[1, 1]));
        assert_eq!(q.mul(&g, &f5).add(&r, &f5), f);

        let (q, r) = f.divmod(&Poly::one(), &f5).unwrap();
        assert_eq!((q, r), (f, Poly::zero()));
        assert_eq!(Poly::t().divmod(&Poly::zero(), &f5), Err(Error::DivisionByZero));
    }

    #[test]
    fn ext_gcd_bezout() {
        let f5 = Fq::prime(5).unwrap();
        let a = Poly::from_ints(&f5, &[1, 2, 0, 1]);
        let b = Poly::from_ints(&f5, &[4, 0, 1]);
        let (g, s, t) = a.ext_gcd(&b, &f5);
        assert_eq!(s.mul(&a, &f5).add(&t.mul(&b, &f5), &f5), g);
        assert_eq!(g, a.gcd(&b, &f5));
    }

    #[test]
    fn canonical_order() {
        let f3 = Fq::prime(3).unwrap();
        let mut v = [Poly::from_ints(&f3, &[1, 0, 1]),
            Poly::from_ints(&f3, &[0, 1, 1]),
            Poly::from_ints(&f3, &[2, 1]),
            Poly::from_ints(&f3, &[0, 0, 1])];
        v.sort();
        assert_eq!(v[0], Poly::from_ints(&f3, &[2, 1]));
        assert_eq!(v[1], Poly::from_ints(&f3, &[0, 0, 1]));
        assert_eq!(v[2], Poly::from_ints(&f3, &[0, 1, 1]));
        assert_eq!(v[3], Poly::from_ints(&f3, &[1, 0, 1]));
    }
}
