//! Truncated Laurent series in `pi = 1/T` with explicit precision tracking.
//!
//! A [`Laurent`] is known modulo `pi^prec`. Exact values carry the sentinel
//! precision [`EXACT`]. Operations never guess: a value whose known digits
//! all vanish is "zero at this precision", and anything that needs its
//! leading term fails with [`Error::InsufficientPrecision`].

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::algebra::{Fe, Fq, Poly};
use crate::error::{Error, Result};

/// Precision of exactly known values.
pub const EXACT: i64 = i64::MAX / 4;

fn shift_prec(p: i64, v: i64) -> i64 {
    if p >= EXACT {
        EXACT
    } else {
        (p + v).min(EXACT)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Laurent {
    /// Exponent of `coeffs[0]`; equals `prec` when no digit is known nonzero.
    val: i64,
    coeffs: Vec<Fe>,
    prec: i64,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent { val: EXACT, coeffs: Vec::new(), prec: EXACT }
    }

    /// `O(pi^prec)`
    pub fn zero_to(prec: i64) -> Self {
        Laurent { val: prec, coeffs: Vec::new(), prec }
    }

    pub fn one() -> Self {
        Self::monomial(Fe::ONE, 0)
    }

    /// The exact value `c * pi^k`.
    pub fn monomial(c: Fe, k: i64) -> Self {
        Self::from_parts(k, vec![c], EXACT)
    }

    pub fn constant(c: Fe) -> Self {
        Self::monomial(c, 0)
    }

    /// Builds `sum coeffs[i] pi^(val+i) + O(pi^prec)`, dropping digits at or
    /// beyond `prec` and normalizing leading zeros.
    pub fn from_parts(val: i64, mut coeffs: Vec<Fe>, prec: i64) -> Self {
        if prec < EXACT && val < prec {
            coeffs.truncate((prec - val) as usize);
        } else if prec < EXACT {
            coeffs.clear();
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        match coeffs.iter().position(|c| !c.is_zero()) {
            None => Laurent { val: prec, coeffs: Vec::new(), prec },
            Some(lead) => {
                coeffs.drain(..lead);
                Laurent { val: val + lead as i64, coeffs, prec }
            }
        }
    }

    /// `f(1/pi)` known to `O(pi^prec)`.
    pub fn from_poly(f: &Poly, prec: i64) -> Result<Self> {
        if !f.is_zero() && prec <= -(f.deg_i64()) {
            return Err(Error::invalid(format!(
                "precision {prec} does not exceed the valuation {} of the polynomial",
                -f.deg_i64()
            )));
        }
        Ok(Self::from_poly_exact(f).truncate(prec))
    }

    pub fn from_poly_exact(f: &Poly) -> Self {
        if f.is_zero() {
            return Self::zero();
        }
        let coeffs: Vec<Fe> = f.coeffs().iter().rev().copied().collect();
        Self::from_parts(-f.deg_i64(), coeffs, EXACT)
    }

    /// The valuation, or `None` if the value is zero at its precision.
    pub fn val(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.val)
    }

    /// A lower bound for the valuation that is exact when [`Self::val`] is `Some`.
    pub fn val_bound(&self) -> i64 {
        self.val
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec >= EXACT
    }

    /// No nonzero digit is known (an exact zero or `O(pi^prec)`).
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Known digits starting at [`Self::val_bound`].
    pub fn digits(&self) -> &[Fe] {
        &self.coeffs
    }

    /// Coefficient of `pi^k` (zero outside the stored range; callers must
    /// stay below the precision).
    pub fn coeff(&self, k: i64) -> Fe {
        debug_assert!(k < self.prec);
        if k < self.val {
            return Fe::ZERO;
        }
        self.coeffs.get((k - self.val) as usize).copied().unwrap_or(Fe::ZERO)
    }

    /// Forgets everything at and beyond `pi^prec` (precision only decreases).
    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        Self::from_parts(self.val, self.coeffs.clone(), prec)
    }

    pub fn neg(&self, fq: &Fq) -> Self {
        Laurent { val: self.val, coeffs: self.coeffs.iter().map(|&c| fq.neg(c)).collect(), prec: self.prec }
    }

    pub fn scale(&self, c: Fe, fq: &Fq) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Laurent { val: self.val, coeffs: self.coeffs.iter().map(|&a| fq.mul(a, c)).collect(), prec: self.prec }
    }

    /// Multiplication by `pi^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_exact() && self.is_zero() {
            return self.clone();
        }
        Laurent { val: self.val + k, coeffs: self.coeffs.clone(), prec: shift_prec(self.prec, k) }
    }

    fn add_scaled(&self, other: &Laurent, sign: Fe, fq: &Fq) -> Self {
        let prec = self.prec.min(other.prec);
        if other.is_zero() {
            return self.truncate(prec);
        }
        if self.is_zero() {
            return other.scale(sign, fq).truncate(prec);
        }
        let lo = self.val.min(other.val);
        let end1 = self.val + self.coeffs.len() as i64;
        let end2 = other.val + other.coeffs.len() as i64;
        let hi = end1.max(end2).min(prec);
        if hi <= lo {
            return Self::zero_to(prec);
        }
        let mut out = vec![Fe::ZERO; (hi - lo) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let k = self.val + i as i64;
            if k >= hi {
                break;
            }
            out[(k - lo) as usize] = c;
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            let k = other.val + i as i64;
            if k >= hi {
                break;
            }
            let slot = &mut out[(k - lo) as usize];
            *slot = fq.add(*slot, fq.mul(sign, c));
        }
        Self::from_parts(lo, out, prec)
    }

    pub fn add(&self, other: &Laurent, fq: &Fq) -> Self {
        self.add_scaled(other, Fe::ONE, fq)
    }

    pub fn sub(&self, other: &Laurent, fq: &Fq) -> Self {
        self.add_scaled(other, fq.neg(Fe::ONE), fq)
    }

    /// Product with precision `min(prec1 + val2, prec2 + val1)`.
    pub fn mul(&self, other: &Laurent, fq: &Fq) -> Self {
        let prec = shift_prec(self.prec, other.val).min(shift_prec(other.prec, self.val));
        if self.is_zero() || other.is_zero() {
            return Self::zero_to(prec);
        }
        let val = self.val + other.val;
        let full = self.coeffs.len() + other.coeffs.len() - 1;
        let len = if prec >= EXACT { full } else { full.min((prec - val).max(0) as usize) };
        let mut out = vec![Fe::ZERO; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().take(len - i).enumerate() {
                out[i + j] = fq.add(out[i + j], fq.mul(a, b));
            }
        }
        Self::from_parts(val, out, prec)
    }

    /// Multiplicative inverse, known to precision `prec - 2 val`. Exact
    /// non-monomials have infinite expansions; truncate them first.
    pub fn inv(&self, fq: &Fq) -> Result<Self> {
        if self.is_zero() {
            return if self.is_exact() {
                Err(Error::DivisionByZero)
            } else {
                Err(Error::precision(format!("inverting O(pi^{})", self.prec)))
            };
        }
        let v = self.val;
        if self.is_exact() {
            if self.coeffs.len() == 1 {
                return Ok(Self::monomial(fq.inv(self.coeffs[0]), -v));
            }
            return Err(Error::invalid("the inverse of an exact non-monomial needs a target precision"));
        }
        let n = (self.prec - v) as usize;
        let c0inv = fq.inv(self.coeffs[0]);
        let mut out = vec![Fe::ZERO; n];
        out[0] = c0inv;
        for k in 1..n {
            let mut s = Fe::ZERO;
            for i in 1..=k.min(self.coeffs.len() - 1) {
                s = fq.add(s, fq.mul(self.coeffs[i], out[k - i]));
            }
            out[k] = fq.neg(fq.mul(s, c0inv));
        }
        Ok(Self::from_parts(-v, out, self.prec - 2 * v))
    }

    pub fn div(&self, other: &Laurent, fq: &Fq) -> Result<Self> {
        Ok(self.mul(&other.inv(fq)?, fq))
    }

    /// True if both values agree modulo `pi^upto` (which must not exceed
    /// either precision).
    pub fn agrees_with(&self, other: &Laurent, upto: i64, fq: &Fq) -> bool {
        debug_assert!(upto <= self.prec && upto <= other.prec);
        self.truncate(upto).sub(&other.truncate(upto), fq).is_zero()
    }

    pub fn display<'a>(&'a self, fq: &'a Fq) -> LaurentDisplay<'a> {
        LaurentDisplay { x: self, fq }
    }
}

pub struct LaurentDisplay<'a> {
    x: &'a Laurent,
    fq: &'a Fq,
}

impl fmt::Display for LaurentDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = self
            .x
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| format!("{}*pi^{}", self.fq.fmt_elem(c), self.x.val + i as i64))
            .collect();
        if !self.x.is_exact() {
            terms.push(format!("O(pi^{})", self.x.prec));
        } else if terms.is_empty() {
            terms.push("0".into());
        }
        f.write_str(&terms.join(" + "))
    }
}

/// A 2x2 matrix over truncated Laurent series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2 {
    pub a: Laurent,
    pub b: Laurent,
    pub c: Laurent,
    pub d: Laurent,
}

impl Mat2 {
    pub fn new(a: Laurent, b: Laurent, c: Laurent, d: Laurent) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::diag(Laurent::one(), Laurent::one())
    }

    pub fn diag(a: Laurent, d: Laurent) -> Self {
        Mat2 { a, b: Laurent::zero(), c: Laurent::zero(), d }
    }

    pub fn entries(&self) -> [&Laurent; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn mul(&self, o: &Mat2, fq: &Fq) -> Mat2 {
        Mat2 {
            a: self.a.mul(&o.a, fq).add(&self.b.mul(&o.c, fq), fq),
            b: self.a.mul(&o.b, fq).add(&self.b.mul(&o.d, fq), fq),
            c: self.c.mul(&o.a, fq).add(&self.d.mul(&o.c, fq), fq),
            d: self.c.mul(&o.b, fq).add(&self.d.mul(&o.d, fq), fq),
        }
    }

    pub fn det(&self, fq: &Fq) -> Laurent {
        self.a.mul(&self.d, fq).sub(&self.b.mul(&self.c, fq), fq)
    }

    /// Inverse via the adjugate; fails if the determinant is zero at the
    /// working precision.
    pub fn inv(&self, fq: &Fq) -> Result<Mat2> {
        let det = self.det(fq);
        if det.is_zero() {
            return Err(Error::precision("determinant indistinguishable from zero"));
        }
        let di = if det.is_exact() && det.digits().len() > 1 {
            // cap an exact determinant at the entries' working precision
            let cap = self.entries().iter().map(|e| e.prec()).min().unwrap();
            let cap = if cap >= EXACT { det.val_bound() + 64 } else { cap };
            det.truncate(cap.max(det.val_bound() + 1)).inv(fq)?
        } else {
            det.inv(fq)?
        };
        Ok(Mat2 {
            a: self.d.mul(&di, fq),
            b: self.b.neg(fq).mul(&di, fq),
            c: self.c.neg(fq).mul(&di, fq),
            d: self.a.mul(&di, fq),
        })
    }

    pub fn scale(&self, s: &Laurent, fq: &Fq) -> Mat2 {
        Mat2 { a: self.a.mul(s, fq), b: self.b.mul(s, fq), c: self.c.mul(s, fq), d: self.d.mul(s, fq) }
    }

    pub fn shift(&self, k: i64) -> Mat2 {
        Mat2 { a: self.a.shift(k), b: self.b.shift(k), c: self.c.shift(k), d: self.d.shift(k) }
    }

    pub fn truncate(&self, prec: i64) -> Mat2 {
        Mat2 {
            a: self.a.truncate(prec),
            b: self.b.truncate(prec),
            c: self.c.truncate(prec),
            d: self.d.truncate(prec),
        }
    }

    /// Smallest entry valuation, `None` if every entry is zero at precision.
    pub fn val(&self) -> Option<i64> {
        self.entries().iter().filter_map(|e| e.val()).min()
    }

    pub fn min_prec(&self) -> i64 {
        self.entries().iter().map(|e| e.prec()).min().unwrap()
    }
}

static NEWTON_OPS: AtomicU64 = AtomicU64::new(0);

/// Field multiplications performed by [`newton_sqrt`] since process start.
/// Used for empirical cost measurements.
pub fn newton_op_count() -> u64 {
    NEWTON_OPS.load(Ordering::Relaxed)
}

/// Square root of a monic polynomial of even degree `2m` in `K_inf`, on the
/// branch `pi^-m (1 + O(pi))`. The result `s` satisfies
/// `s^2 = f + O(pi^prec)` and is returned at precision `prec + m`.
///
/// The 1-unit `w = pi^(2m) f` gets its root digit by digit: at step `k` the
/// full truncated square `u^2 - w` is recomputed and half its `pi^k` digit is
/// subtracted, for `O(prec^3)` field operations overall.
pub fn newton_sqrt(f: &Poly, prec: i64, fq: &Fq) -> Result<Laurent> {
    let deg = f.degree().ok_or_else(|| Error::invalid("square root of zero"))?;
    if !f.is_monic() || deg % 2 == 1 {
        return Err(Error::invalid("newton_sqrt needs a monic polynomial of even degree"));
    }
    let m = (deg / 2) as i64;
    let n = (prec + 2 * m).max(1) as usize;
    // w[k] = coefficient of pi^k in pi^(2m) f
    let w: Vec<Fe> = (0..n).map(|k| if k <= deg { f.coeff(deg - k) } else { Fe::ZERO }).collect();
    let half = fq.inv(fq.from_i64(2));
    let mut u = vec![Fe::ZERO; n];
    u[0] = Fe::ONE;
    let mut ops = 0u64;
    for k in 1..n {
        // e = u^2 - w mod pi^n
        let mut e = vec![Fe::ZERO; n];
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                e[i + j] = fq.add(e[i + j], fq.mul(u[i], u[j]));
            }
            ops += (n - i) as u64;
        }
        for (ek, wk) in e.iter_mut().zip(&w) {
            *ek = fq.sub(*ek, *wk);
        }
        debug_assert!(e[..k].iter().all(|c| c.is_zero()));
        u[k] = fq.sub(u[k], fq.mul(e[k], half));
    }
    NEWTON_OPS.fetch_add(ops, Ordering::Relaxed);
    Ok(Laurent::from_parts(-m, u, prec + m))
}
