//! Arithmetic modulo irreducible polynomials: irreducibility, quadratic
//! symbols, square roots and the Chinese remainder theorem.

use super::fq::{prime_factors, Fe, Fq};
use super::poly::Poly;
use crate::error::{Error, Result};

/// An element of the residue field `A/(modulus)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResidueElem {
    pub rep: Poly,
    pub modulus: Poly,
}

impl ResidueElem {
    pub fn new(rep: &Poly, modulus: &Poly, fq: &Fq) -> Result<Self> {
        Ok(ResidueElem { rep: rep.rem(modulus, fq)?, modulus: modulus.clone() })
    }

    pub fn mul(&self, other: &ResidueElem, fq: &Fq) -> ResidueElem {
        debug_assert_eq!(self.modulus, other.modulus);
        let rep = self.rep.mul(&other.rep, fq).rem(&self.modulus, fq).expect("nonzero modulus");
        ResidueElem { rep, modulus: self.modulus.clone() }
    }
}

/// `q^deg`, the size of the residue field of a prime of degree `deg`.
pub(crate) fn residue_field_size(fq: &Fq, deg: usize) -> Result<u128> {
    (fq.q() as u128)
        .checked_pow(deg as u32)
        .filter(|&n| n < (1u128 << 120))
        .ok_or_else(|| Error::invalid(format!("residue field of degree {deg} is too large")))
}

/// Rabin's test: `f` of degree `n` is irreducible iff `T^(q^n) = T mod f` and
/// `gcd(T^(q^(n/l)) - T, f) = 1` for every prime `l | n`.
pub fn is_irreducible(fq: &Fq, f: &Poly) -> Result<bool> {
    let n = match f.degree() {
        None => return Err(Error::invalid("irreducibility of the zero polynomial")),
        Some(0) => return Ok(false),
        Some(1) => return Ok(true),
        Some(n) => n,
    };
    let f = f.monic(fq);
    let t = Poly::t();
    let q = fq.q() as u128;
    // frob[k] = T^(q^k) mod f
    let mut frob = vec![t.rem(&f, fq)?];
    for k in 1..=n {
        let next = frob[k - 1].powmod(q, &f, fq)?;
        frob.push(next);
    }
    if frob[n] != t {
        return Ok(false);
    }
    for l in prime_factors(n as u128) {
        let k = n / l as usize;
        let g = frob[k].sub(&t, fq).gcd(&f, fq);
        if !g.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All monic polynomials of a fixed degree in canonical order (constant term
/// most significant).
pub struct MonicPolys {
    fq: Fq,
    digits: Option<Vec<u32>>,
}

impl Iterator for MonicPolys {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        let digits = self.digits.as_mut()?;
        let mut coeffs: Vec<Fe> = digits.iter().map(|&d| self.fq.element(d).unwrap()).collect();
        coeffs.push(Fe::ONE);
        let out = Poly::from_coeffs(coeffs);
        // advance, last coefficient fastest
        let q = self.fq.q();
        let mut i = digits.len();
        loop {
            if i == 0 {
                self.digits = None;
                break;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < q {
                break;
            }
            digits[i] = 0;
        }
        Some(out)
    }
}

pub fn monic_polys(fq: &Fq, degree: usize) -> MonicPolys {
    MonicPolys { fq: fq.clone(), digits: Some(vec![0; degree]) }
}

/// Every monic irreducible of exactly `degree`, in canonical order.
pub fn monic_irreducibles(fq: &Fq, degree: usize) -> impl Iterator<Item = Poly> + '_ {
    monic_polys(fq, degree).filter(move |f| is_irreducible(fq, f).unwrap_or(false))
}

fn require_irreducible(fq: &Fq, w: &Poly) -> Result<()> {
    if w.is_zero() || !is_irreducible(fq, w)? {
        return Err(Error::NotIrreducible(w.display(fq).to_string()));
    }
    Ok(())
}

/// Legendre symbol without the irreducibility check on `w`.
pub(crate) fn legendre_unchecked(fq: &Fq, a: &Poly, w: &Poly) -> Result<i8> {
    let a = a.rem(w, fq)?;
    if a.is_zero() {
        return Ok(0);
    }
    let size = residue_field_size(fq, w.degree().unwrap())?;
    let x = a.powmod((size - 1) / 2, w, fq)?;
    if x.is_one() {
        Ok(1)
    } else if x == Poly::constant(fq.neg(Fe::ONE)) {
        Ok(-1)
    } else {
        Err(Error::internal(format!("Euler criterion gave {} (modulus reducible?)", x.display(fq))))
    }
}

/// Legendre symbol `(a / w)` for an irreducible `w`: 0 if `w | a`, +1 if `a`
/// is a nonzero square mod `w`, -1 otherwise.
pub fn legendre(fq: &Fq, a: &Poly, w: &Poly) -> Result<i8> {
    require_irreducible(fq, w)?;
    legendre_unchecked(fq, a, w)
}

/// The local Hilbert symbol `(a, b)` at the place of the irreducible `w`
/// (odd q): with `a = w^s u`, `b = w^t v`,
/// `(a, b) = (-1)^(s t e) (u/w)^t (v/w)^s` where `e = (q-1)/2 * deg w mod 2`.
pub fn hilbert_symbol(fq: &Fq, a: &Poly, b: &Poly, w: &Poly) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::invalid("Hilbert symbol of zero"));
    }
    require_irreducible(fq, w)?;
    let (s, u) = a.split_power(w, fq)?;
    let (t, v) = b.split_power(w, fq)?;
    let eps = ((fq.q() as u64 - 1) / 2 * w.degree().unwrap() as u64) % 2;
    let mut sign: i8 = if (s as u64 * t as u64 * eps) % 2 == 1 { -1 } else { 1 };
    if t % 2 == 1 {
        sign *= legendre_unchecked(fq, &u, w)?;
    }
    if s % 2 == 1 {
        sign *= legendre_unchecked(fq, &v, w)?;
    }
    Ok(sign)
}

/// The unique `x` with `deg x < sum deg m_i` and `x = r_i mod m_i`.
pub fn crt(fq: &Fq, residues: &[Poly], moduli: &[Poly]) -> Result<Poly> {
    if residues.len() != moduli.len() {
        return Err(Error::invalid("crt: residue and modulus counts differ"));
    }
    let mut x = Poly::zero();
    let mut m = Poly::one();
    for (r, mi) in residues.iter().zip(moduli) {
        if mi.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, s, _) = m.ext_gcd(mi, fq);
        if !g.is_one() {
            return Err(Error::invalid(format!("crt: moduli not coprime (common factor {})", g.display(fq))));
        }
        // x' = x + m * s * (r - x)   (s = m^{-1} mod mi)
        let diff = r.sub(&x, fq).mul(&s, fq).rem(mi, fq)?;
        x = x.add(&m.mul(&diff, fq), fq);
        m = m.mul(mi, fq);
        x = x.rem(&m, fq)?;
    }
    Ok(x)
}

/// Square root of `a` modulo the irreducible `f` (Tonelli-Shanks in
/// `A/(f)`). Of the two roots the one smaller in canonical polynomial order
/// is returned.
pub fn sqrt_mod_irreducible(fq: &Fq, a: &Poly, f: &Poly) -> Result<ResidueElem> {
    require_irreducible(fq, f)?;
    sqrt_mod_irreducible_unchecked(fq, a, f)
}

pub(crate) fn sqrt_mod_irreducible_unchecked(fq: &Fq, a: &Poly, f: &Poly) -> Result<ResidueElem> {
    let a = a.rem(f, fq)?;
    if a.is_zero() {
        return Ok(ResidueElem { rep: Poly::zero(), modulus: f.clone() });
    }
    if legendre_unchecked(fq, &a, f)? != 1 {
        return Err(Error::invalid(format!("{} is not a square modulo {}", a.display(fq), f.display(fq))));
    }
    let size = residue_field_size(fq, f.degree().unwrap())?;
    let mut s = 0u32;
    let mut t = size - 1;
    while t % 2 == 0 {
        t /= 2;
        s += 1;
    }
    let deg = f.degree().unwrap();
    let z = (1..deg + 1)
        .flat_map(|d| all_polys_below(fq, d))
        .find(|c| !c.is_zero() && legendre_unchecked(fq, c, f).ok() == Some(-1))
        .ok_or_else(|| Error::internal("no quadratic non-residue found"))?;
    let mul = |x: &Poly, y: &Poly| x.mul(y, fq).rem(f, fq).expect("nonzero modulus");
    let mut m = s;
    let mut c = z.powmod(t, f, fq)?;
    let mut tt = a.powmod(t, f, fq)?;
    let mut r = a.powmod(t.div_ceil(2), f, fq)?;
    while !tt.is_one() {
        let mut i = 0;
        let mut probe = tt.clone();
        while !probe.is_one() {
            probe = mul(&probe, &probe);
            i += 1;
            if i == m {
                return Err(Error::internal("Tonelli-Shanks failed"));
            }
        }
        let mut b = c.clone();
        for _ in 0..(m - i - 1) {
            b = mul(&b, &b);
        }
        m = i;
        c = mul(&b, &b);
        tt = mul(&tt, &c);
        r = mul(&r, &b);
    }
    let neg = r.neg(fq);
    let rep = if neg < r { neg } else { r };
    debug_assert_eq!(mul(&rep, &rep), a);
    Ok(ResidueElem { rep, modulus: f.clone() })
}

/// Polynomials of degree `< deg` in canonical order, all degrees interleaved
/// by the canonical order of `Poly`.
fn all_polys_below(fq: &Fq, deg: usize) -> impl Iterator<Item = Poly> + '_ {
    // exactly degree deg-1 (including the non-monic ones), degree 0 handled by deg = 1
    let q = fq.q();
    let count = (q as u128).pow(deg as u32);
    (0..count).filter_map(move |mut idx| {
        let mut coeffs = Vec::with_capacity(deg);
        for _ in 0..deg {
            coeffs.push(fq.element((idx % q as u128) as u32).unwrap());
            idx /= q as u128;
        }
        let p = Poly::from_coeffs(coeffs);
        (p.degree() == Some(deg - 1)).then_some(p)
    })
}
