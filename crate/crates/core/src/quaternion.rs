//! The quaternion algebra `D = (alpha, r)` ramified exactly at a given set of
//! finite places, its maximal order `Lambda = A + Ai + Aj + A(eps i + ij)/alpha`
//! and the embedding into `M_2(K_inf)`.

use std::fmt;
use std::sync::atomic::{AtomicI64, Ordering};
use std::sync::Mutex;

use crate::algebra::{
    hilbert_symbol, is_irreducible, legendre_unchecked, monic_polys, parse_poly, sqrt_mod_irreducible_unchecked, Fe,
    Fq, Poly,
};
use crate::error::{Error, Result};
use crate::laurent::{newton_sqrt, Laurent, Mat2};

/// The set `R` of ramified finite places, by monic generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamificationSet {
    primes: Vec<Poly>,
    r: Poly,
}

impl RamificationSet {
    /// Validates and sorts the primes into canonical order.
    pub fn new(fq: &Fq, primes: &[Poly]) -> Result<Self> {
        if primes.is_empty() || primes.len() % 2 == 1 {
            return Err(Error::invalid(format!(
                "ramification set must have even cardinality (got {})",
                primes.len()
            )));
        }
        let mut sorted = primes.to_vec();
        sorted.sort();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::invalid(format!("prime {} is repeated", w[0].display(fq))));
            }
        }
        for p in &sorted {
            if !p.is_monic() {
                return Err(Error::invalid(format!("prime {} is not monic", p.display(fq))));
            }
            if !is_irreducible(fq, p)? {
                return Err(Error::NotIrreducible(p.display(fq).to_string()));
            }
        }
        let r = sorted.iter().fold(Poly::one(), |acc, p| acc.mul(p, fq));
        Ok(RamificationSet { primes: sorted, r })
    }

    pub fn primes(&self) -> &[Poly] {
        &self.primes
    }

    pub fn r(&self) -> &Poly {
        &self.r
    }

    /// `deg r`
    pub fn d(&self) -> usize {
        self.r.degree().unwrap()
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// 1 if every place in `R` has odd degree, 0 otherwise.
    pub fn odd(&self) -> u32 {
        self.primes.iter().all(|p| p.degree().unwrap() % 2 == 1) as u32
    }
}

/// Upper bound on `deg alpha` from the effective Chebotarev estimate, for
/// `l = #R` primes of total degree `d`.
pub fn alpha_degree_bound(q: u32, l: usize, d: usize) -> usize {
    let extra = match q {
        3 if l <= 4 => 7,
        3 if l == 6 => 5,
        3 => 1,
        5 | 7 if l <= 6 => 3,
        5 | 7 => 1,
        9 if l <= 4 => 3,
        9 => 1,
        _ if l == 2 => 3,
        _ => 1,
    };
    d + extra
}

fn satisfies_alpha_condition(fq: &Fq, a: &Poly, ram: &RamificationSet) -> bool {
    ram.primes().iter().all(|w| legendre_unchecked(fq, a, w) == Ok(-1))
}

/// The first monic irreducible `alpha` of even degree (2, 4, ...) in canonical
/// order that is a non-square modulo every prime in `R`. With
/// `check_bound` the search stops with an internal error beyond the degree
/// bound table.
pub fn find_alpha(fq: &Fq, ram: &RamificationSet, check_bound: bool) -> Result<Poly> {
    let bound = alpha_degree_bound(fq.q(), ram.len(), ram.d());
    let hard_cap = bound.max(24);
    let mut deg = 2;
    loop {
        if check_bound && deg > bound {
            return Err(Error::internal(format!("no alpha of degree <= {bound} found")));
        }
        if deg > hard_cap {
            return Err(Error::internal(format!("no alpha of degree <= {hard_cap} found")));
        }
        for a in monic_polys(fq, deg) {
            if satisfies_alpha_condition(fq, &a, ram) && is_irreducible(fq, &a)? {
                return Ok(a);
            }
        }
        deg += 2;
    }
}

/// An element of `Lambda` by its coordinates in the basis
/// `f1 = 1, f2 = i, f3 = j, f4 = (eps i + ij)/alpha`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuatElem(pub [Poly; 4]);

impl QuatElem {
    pub fn zero() -> Self {
        QuatElem(Default::default())
    }

    pub fn scalar(c: Fe) -> Self {
        QuatElem([Poly::constant(c), Poly::zero(), Poly::zero(), Poly::zero()])
    }

    pub fn one() -> Self {
        Self::scalar(Fe::ONE)
    }

    /// The basis element `f_{k+1}`.
    pub fn basis(k: usize) -> Self {
        let mut x = Self::zero();
        x.0[k] = Poly::one();
        x
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|p| p.is_zero())
    }

    pub fn coords(&self) -> &[Poly; 4] {
        &self.0
    }

    pub fn add(&self, o: &QuatElem, fq: &Fq) -> QuatElem {
        QuatElem(std::array::from_fn(|k| self.0[k].add(&o.0[k], fq)))
    }

    pub fn sub(&self, o: &QuatElem, fq: &Fq) -> QuatElem {
        QuatElem(std::array::from_fn(|k| self.0[k].sub(&o.0[k], fq)))
    }

    pub fn scale(&self, c: Fe, fq: &Fq) -> QuatElem {
        QuatElem(std::array::from_fn(|k| self.0[k].scale(c, fq)))
    }

    pub fn mul_poly(&self, f: &Poly, fq: &Fq) -> QuatElem {
        QuatElem(std::array::from_fn(|k| self.0[k].mul(f, fq)))
    }

    /// `(l1, -l2, -l3, -l4)`: every non-identity basis vector is a pure quaternion.
    pub fn conj(&self, fq: &Fq) -> QuatElem {
        QuatElem([self.0[0].clone(), self.0[1].neg(fq), self.0[2].neg(fq), self.0[3].neg(fq)])
    }

    /// `max_k deg l_k`; an error for zero.
    pub fn height(&self) -> Result<usize> {
        self.0
            .iter()
            .filter_map(|p| p.degree())
            .max()
            .ok_or_else(|| Error::invalid("height of the zero quaternion"))
    }

    /// Text form `l1 + (l2)*i + (l3)*j + (l4)*k`, where `k` stands for the
    /// fourth basis vector `(eps i + ij)/alpha`.
    pub fn display<'a>(&'a self, fq: &'a Fq) -> QuatDisplay<'a> {
        QuatDisplay { x: self, fq }
    }

    pub fn parse(s: &str, fq: &Fq) -> Result<QuatElem> {
        let mut out = QuatElem::zero();
        let mut rest = String::new();
        let chars: Vec<char> = s.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            if chars[i] != '(' {
                rest.push(chars[i]);
                i += 1;
                continue;
            }
            let mut depth = 0;
            let start = i + 1;
            while i < chars.len() {
                match chars[i] {
                    '(' => depth += 1,
                    ')' => depth -= 1,
                    _ => {}
                }
                if depth == 0 {
                    break;
                }
                i += 1;
            }
            if i == chars.len() {
                return Err(Error::Parse(format!("unbalanced parentheses in `{s}`")));
            }
            let inner: String = chars[start..i].iter().collect();
            i += 1;
            while i < chars.len() && chars[i].is_whitespace() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '*' {
                i += 1;
            }
            while i < chars.len() && chars[i].is_whitespace() {
                i += 1;
            }
            let slot = match chars.get(i) {
                Some('i') => 1,
                Some('j') => 2,
                Some('k') => 3,
                _ => return Err(Error::Parse(format!("expected `i`, `j` or `k` after `({inner})` in `{s}`"))),
            };
            i += 1;
            let mut coeff = parse_poly(&inner, fq)?;
            let trimmed = rest.trim_end();
            if let Some(r) = trimmed.strip_suffix('-') {
                coeff = coeff.neg(fq);
                rest = r.to_string();
            } else if let Some(r) = trimmed.strip_suffix('+') {
                rest = r.to_string();
            } else if !trimmed.is_empty() {
                return Err(Error::Parse(format!("expected `+` before `({inner})` in `{s}`")));
            }
            out.0[slot] = out.0[slot].add(&coeff, fq);
        }
        let rest = rest.trim();
        if !rest.is_empty() {
            out.0[0] = parse_poly(rest, fq)?;
        }
        Ok(out)
    }
}

pub struct QuatDisplay<'a> {
    x: &'a QuatElem,
    fq: &'a Fq,
}

impl fmt::Display for QuatDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.x.0;
        write!(
            f,
            "{} + ({})*i + ({})*j + ({})*k",
            c[0].display(self.fq),
            c[1].display(self.fq),
            c[2].display(self.fq),
            c[3].display(self.fq)
        )
    }
}

#[derive(Clone, Debug)]
struct SqrtCache {
    /// absolute precision of `s`
    prec: i64,
    s: Laurent,
    s_inv: Laurent,
}

/// Everything needed to compute in `Lambda`. Immutable after construction
/// apart from the lazily extended `sqrt(alpha)` memo.
#[derive(Debug)]
pub struct AlgebraData {
    fq: Fq,
    ram: RamificationSet,
    alpha: Poly,
    eps: Poly,
    nu: Poly,
    /// `consts[a][b]` = coordinates of `f_a f_b`
    consts: Vec<Vec<QuatElem>>,
    sqrt: Mutex<SqrtCache>,
    precision_cap: AtomicI64,
}

impl Clone for AlgebraData {
    fn clone(&self) -> Self {
        AlgebraData {
            fq: self.fq.clone(),
            ram: self.ram.clone(),
            alpha: self.alpha.clone(),
            eps: self.eps.clone(),
            nu: self.nu.clone(),
            consts: self.consts.clone(),
            sqrt: Mutex::new(self.sqrt.lock().unwrap().clone()),
            precision_cap: AtomicI64::new(self.precision_cap()),
        }
    }
}

/// Product in the standard basis `1, i, j, ij` with `i^2 = a`, `j^2 = b`.
fn std_mul(x: &[Poly; 4], y: &[Poly; 4], a: &Poly, b: &Poly, fq: &Fq) -> [Poly; 4] {
    let m = |u: &Poly, v: &Poly| u.mul(v, fq);
    let ab = a.mul(b, fq);
    let real = m(&x[0], &y[0]).add(&m(a, &m(&x[1], &y[1])), fq).add(&m(b, &m(&x[2], &y[2])), fq).sub(
        &m(&ab, &m(&x[3], &y[3])),
        fq,
    );
    let i = m(&x[0], &y[1])
        .add(&m(&x[1], &y[0]), fq)
        .sub(&m(b, &m(&x[2], &y[3])), fq)
        .add(&m(b, &m(&x[3], &y[2])), fq);
    let j = m(&x[0], &y[2])
        .add(&m(&x[2], &y[0]), fq)
        .add(&m(a, &m(&x[1], &y[3])), fq)
        .sub(&m(a, &m(&x[3], &y[1])), fq);
    let k = m(&x[0], &y[3]).add(&m(&x[3], &y[0]), fq).add(&m(&x[1], &y[2]), fq).sub(&m(&x[2], &y[1]), fq);
    [real, i, j, k]
}

/// Exact determinant of a square polynomial matrix by cofactor expansion.
fn poly_det(m: &[Vec<Poly>], fq: &Fq) -> Poly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Poly::zero();
    for col in 0..n {
        if m[0][col].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != col).map(|(_, p)| p.clone()).collect()).collect();
        let term = m[0][col].mul(&poly_det(&minor, fq), fq);
        acc = if col % 2 == 0 { acc.add(&term, fq) } else { acc.sub(&term, fq) };
    }
    acc
}

impl AlgebraData {
    /// Builds `D = (alpha, r)` with `alpha` from [`find_alpha`], `eps` the
    /// canonical square root of `r` modulo `alpha` and `nu = (eps^2 - r)/alpha`,
    /// then self-checks ramification and the reduced discriminant.
    pub fn build(fq: &Fq, primes: &[Poly], check_degree_bound: bool) -> Result<AlgebraData> {
        let ram = RamificationSet::new(fq, primes)?;
        let alpha = find_alpha(fq, &ram, check_degree_bound)?;
        Self::with_alpha(fq, ram, alpha)
    }

    /// Builds the algebra from a caller-chosen `alpha`, which must be monic,
    /// irreducible, of even degree and a non-square modulo every prime in `R`.
    pub fn with_alpha(fq: &Fq, ram: RamificationSet, alpha: Poly) -> Result<AlgebraData> {
        let deg = alpha.degree().unwrap_or(0);
        if deg == 0 || deg % 2 == 1 || !alpha.is_monic() || !is_irreducible(fq, &alpha)? {
            return Err(Error::invalid("alpha must be monic irreducible of positive even degree"));
        }
        if !satisfies_alpha_condition(fq, &alpha, &ram) {
            return Err(Error::invalid("alpha must be a non-square modulo every ramified prime"));
        }
        let eps = sqrt_mod_irreducible_unchecked(fq, ram.r(), &alpha)?.rep;
        let nu = eps.mul(&eps, fq).sub(ram.r(), fq).exact_div(&alpha, fq)?;
        let alg = Self::from_parts(fq, ram, alpha, eps, nu)?;
        alg.check_ramification()?;
        alg.check_discriminant()?;
        Ok(alg)
    }

    fn from_parts(fq: &Fq, ram: RamificationSet, alpha: Poly, eps: Poly, nu: Poly) -> Result<AlgebraData> {
        let r = ram.r().clone();
        // alpha * f_k in standard coordinates
        let scaled: [[Poly; 4]; 4] = [
            [alpha.clone(), Poly::zero(), Poly::zero(), Poly::zero()],
            [Poly::zero(), alpha.clone(), Poly::zero(), Poly::zero()],
            [Poly::zero(), Poly::zero(), alpha.clone(), Poly::zero()],
            [Poly::zero(), eps.clone(), Poly::zero(), Poly::one()],
        ];
        let alpha2 = alpha.mul(&alpha, fq);
        let mut consts = vec![vec![QuatElem::zero(); 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                let p = std_mul(&scaled[a], &scaled[b], &alpha, &r, fq);
                let l4 = p[3].exact_div(&alpha, fq)?;
                let l1 = p[0].exact_div(&alpha2, fq)?;
                let l2 = p[1].sub(&eps.mul(&p[3], fq), fq).exact_div(&alpha2, fq)?;
                let l3 = p[2].exact_div(&alpha2, fq)?;
                consts[a][b] = QuatElem([l1, l2, l3, l4]);
            }
        }
        let s = Laurent::one();
        Ok(AlgebraData {
            fq: fq.clone(),
            ram,
            alpha,
            eps,
            nu,
            consts,
            sqrt: Mutex::new(SqrtCache { prec: i64::MIN, s: s.clone(), s_inv: s }),
            precision_cap: AtomicI64::new(crate::homspace::DEFAULT_PRECISION_CAP),
        })
    }

    /// Ceiling for adaptive precision retries.
    pub fn precision_cap(&self) -> i64 {
        self.precision_cap.load(Ordering::Relaxed)
    }

    pub fn set_precision_cap(&self, cap: i64) {
        self.precision_cap.store(cap, Ordering::Relaxed);
    }

    pub fn fq(&self) -> &Fq {
        &self.fq
    }

    pub fn ram(&self) -> &RamificationSet {
        &self.ram
    }

    pub fn r(&self) -> &Poly {
        self.ram.r()
    }

    pub fn alpha(&self) -> &Poly {
        &self.alpha
    }

    pub fn eps(&self) -> &Poly {
        &self.eps
    }

    pub fn nu(&self) -> &Poly {
        &self.nu
    }

    /// `deg alpha / 2`
    pub fn m(&self) -> usize {
        self.alpha.degree().unwrap() / 2
    }

    /// `max(deg r, m)`
    pub fn d(&self) -> usize {
        self.ram.d().max(self.m())
    }

    pub fn mul(&self, x: &QuatElem, y: &QuatElem) -> QuatElem {
        let fq = &self.fq;
        let mut out = QuatElem::zero();
        for a in 0..4 {
            if x.0[a].is_zero() {
                continue;
            }
            for b in 0..4 {
                if y.0[b].is_zero() {
                    continue;
                }
                let t = x.0[a].mul(&y.0[b], fq);
                for c in 0..4 {
                    let k = &self.consts[a][b].0[c];
                    if k.is_zero() {
                        continue;
                    }
                    out.0[c] = out.0[c].add(&t.mul(k, fq), fq);
                }
            }
        }
        out
    }

    pub fn pow(&self, x: &QuatElem, k: u64) -> QuatElem {
        let mut acc = QuatElem::one();
        let mut base = x.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// The reduced norm `x * conj(x)`.
    pub fn nrd(&self, x: &QuatElem) -> Poly {
        let p = self.mul(x, &x.conj(&self.fq));
        debug_assert!(p.0[1..].iter().all(|c| c.is_zero()), "x * conj(x) is not central");
        p.0[0].clone()
    }

    /// `l1^2 - alpha l2^2 - 2 eps l2 l4 - r l3^2 - nu l4^2`, the norm form in
    /// these coordinates (used to cross-check [`Self::nrd`]).
    pub fn nrd_closed_form(&self, x: &QuatElem) -> Poly {
        let fq = &self.fq;
        let [l1, l2, l3, l4] = &x.0;
        let two = Poly::constant(fq.from_i64(2));
        l1.mul(l1, fq)
            .sub(&self.alpha.mul(&l2.mul(l2, fq), fq), fq)
            .sub(&two.mul(&self.eps, fq).mul(&l2.mul(l4, fq), fq), fq)
            .sub(&self.r().mul(&l3.mul(l3, fq), fq), fq)
            .sub(&self.nu.mul(&l4.mul(l4, fq), fq), fq)
    }

    pub fn trd(&self, x: &QuatElem) -> Poly {
        x.0[0].scale(self.fq.from_i64(2), &self.fq)
    }

    /// The nonzero constant `nrd(x)` if `x` is a unit of `Lambda`.
    pub fn unit_norm(&self, x: &QuatElem) -> Option<Fe> {
        let n = self.nrd(x);
        n.as_constant().filter(|c| !c.is_zero())
    }

    /// `x^-1 = conj(x) / nrd(x)` for units.
    pub fn inverse(&self, x: &QuatElem) -> Result<QuatElem> {
        let n = self.unit_norm(x).ok_or_else(|| Error::invalid("nrd not in F_q^*"))?;
        Ok(x.conj(&self.fq).scale(self.fq.inv(n), &self.fq))
    }

    /// `sqrt(alpha)` (the `pi^-m (1 + O(pi))` branch) and its inverse, both
    /// known to absolute precision at least `prec`.
    pub fn sqrt_alpha(&self, prec: i64) -> (Laurent, Laurent) {
        let mut cache = self.sqrt.lock().unwrap();
        if cache.prec < prec {
            let target = prec.max(cache.prec.saturating_mul(2)).max(16);
            let m = self.m() as i64;
            let s = newton_sqrt(&self.alpha, target - m, &self.fq).expect("alpha is monic of even degree");
            let s_inv = s.inv(&self.fq).expect("sqrt(alpha) is nonzero");
            *cache = SqrtCache { prec: target, s, s_inv };
        }
        (cache.s.truncate(prec), cache.s_inv.truncate(prec + 2 * self.m() as i64))
    }

    /// `iota(x)` with every entry known to absolute precision `>= prec`:
    /// `i -> diag(s, -s)`, `j -> [[0, 1], [r, 0]]`, `s = sqrt(alpha)`.
    pub fn embed(&self, x: &QuatElem, prec: i64) -> Mat2 {
        let fq = &self.fq;
        let h = x.height().unwrap_or(0) as i64;
        let (s, s_inv) = self.sqrt_alpha(prec + h + self.ram.d() as i64 + 1);
        let lp = |p: &Poly| Laurent::from_poly_exact(p);
        let [l1, l2, l3, l4] = &x.0;
        let (l1, l2, l3, l4) = (lp(l1), lp(l2), lp(l3), lp(l4));
        let r = lp(self.r());
        let e = lp(&self.eps);
        let l2s = l2.mul(&s, fq);
        let l4es = l4.mul(&e, fq).mul(&s_inv, fq);
        let l4s = l4.mul(&s_inv, fq);
        let a = l1.add(&l2s, fq).add(&l4es, fq);
        let d = l1.sub(&l2s, fq).sub(&l4es, fq);
        let b = l3.add(&l4s, fq);
        let c = r.mul(&l3.sub(&l4s, fq), fq);
        let m = Mat2::new(a, b, c, d);
        debug_assert!(m.min_prec() >= prec, "embedding lost precision");
        m.truncate(prec)
    }

    /// Hilbert symbols `(alpha, r)` at every prime divisor of `alpha r`,
    /// paired with whether the prime lies in `R`.
    pub fn ramification_table(&self) -> Result<Vec<(Poly, i8, bool)>> {
        let fq = &self.fq;
        let mut out = Vec::new();
        for w in self.ram.primes().iter().chain(std::iter::once(&self.alpha)) {
            let h = hilbert_symbol(fq, &self.alpha, self.r(), w)?;
            out.push((w.clone(), h, self.ram.primes().contains(w)));
        }
        Ok(out)
    }

    fn check_ramification(&self) -> Result<()> {
        for (w, h, in_r) in self.ramification_table()? {
            if (h == -1) != in_r {
                return Err(Error::internal(format!(
                    "Hilbert symbol {h} at {} contradicts the ramification set",
                    w.display(&self.fq)
                )));
            }
        }
        Ok(())
    }

    /// `det(trd(f_a f_b))`; for a maximal order this is a unit times `r^2`.
    pub fn discriminant(&self) -> Poly {
        let m: Vec<Vec<Poly>> =
            (0..4).map(|a| (0..4).map(|b| self.trd(&self.consts[a][b])).collect()).collect();
        poly_det(&m, &self.fq)
    }

    fn check_discriminant(&self) -> Result<()> {
        let fq = &self.fq;
        let r2 = self.r().mul(self.r(), fq);
        let (q, rem) = self.discriminant().divmod(&r2, fq)?;
        if !rem.is_zero() || q.as_constant().is_none_or(|c| c.is_zero()) {
            return Err(Error::internal("reduced discriminant of the order is not r"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin(fq: &Fq, c: i64) -> Poly {
        Poly::from_ints(fq, &[c, 1])
    }

    fn example() -> AlgebraData {
        let fq = Fq::prime(5).unwrap();
        let primes: Vec<Poly> = (0..4).map(|c| lin(&fq, c)).collect();
        AlgebraData::build(&fq, &primes, true).unwrap()
    }

    #[test]
    fn basis_relations() {
        let alg = example();
        let fq = alg.fq().clone();
        let (i, j) = (QuatElem::basis(1), QuatElem::basis(2));
        let ij = alg.mul(&i, &j);
        assert_eq!(ij, alg.mul(&j, &i).scale(fq.neg(Fe::ONE), &fq));
        assert_eq!(alg.mul(&i, &i), QuatElem([alg.alpha().clone(), Poly::zero(), Poly::zero(), Poly::zero()]));
        assert_eq!(alg.mul(&j, &j), QuatElem([alg.r().clone(), Poly::zero(), Poly::zero(), Poly::zero()]));
        // alpha f4 = eps i + ij
        let f4a = QuatElem::basis(3).mul_poly(alg.alpha(), &fq);
        assert_eq!(f4a, i.mul_poly(alg.eps(), &fq).add(&ij, &fq));
        assert_eq!(alg.nrd(&QuatElem::one()), Poly::one());
        assert_eq!(alg.nrd(&i), alg.alpha().neg(&fq));
        assert_eq!(alg.nrd(&j), alg.r().neg(&fq));
    }

    #[test]
    fn construction_invariants() {
        let alg = example();
        let fq = alg.fq();
        assert_eq!(alg.alpha().degree(), Some(4));
        assert!(alg.eps().degree() < alg.alpha().degree());
        assert!(alg.eps().mul(alg.eps(), fq).sub(&alg.nu().mul(alg.alpha(), fq), fq).sub(alg.r(), fq).is_zero());
        // -16 r^2
        assert_eq!(alg.discriminant(), alg.r().mul(alg.r(), fq).scale(fq.from_i64(-16), fq));
        for (_, h, in_r) in alg.ramification_table().unwrap() {
            assert_eq!(h == -1, in_r);
        }
    }

    #[test]
    fn rejects_bad_ramification() {
        let fq = Fq::prime(3).unwrap();
        assert!(AlgebraData::build(&fq, &[Poly::t()], true).is_err());
        assert!(AlgebraData::build(&fq, &[Poly::t(), Poly::t()], true).is_err());
        assert!(AlgebraData::build(&fq, &[Poly::t(), Poly::from_ints(&fq, &[0, 0, 1])], true).is_err());
        assert!(AlgebraData::build(&fq, &[Poly::t(), Poly::from_ints(&fq, &[1, 2])], true).is_err());
    }

    #[test]
    fn embedding_is_multiplicative() {
        let alg = example();
        let fq = alg.fq().clone();
        let x = QuatElem([lin(&fq, 2), Poly::one(), lin(&fq, 1), Poly::t()]);
        let y = QuatElem([Poly::one(), lin(&fq, 3), Poly::zero(), Poly::from_ints(&fq, &[1, 1, 1])]);
        let prec = 12;
        let ex = alg.embed(&x, prec);
        let ey = alg.embed(&y, prec);
        let exy = alg.embed(&alg.mul(&x, &y), prec);
        let prod = ex.mul(&ey, &fq);
        for (u, v) in prod.entries().iter().zip(exy.entries()) {
            let p = u.prec().min(v.prec());
            assert!(p >= prec - 6);
            assert!(u.agrees_with(v, p, &fq));
        }
        let det = ex.det(&fq);
        let n = Laurent::from_poly_exact(&alg.nrd(&x));
        assert!(det.agrees_with(&n, det.prec(), &fq));
        let ei = alg.embed(&QuatElem::basis(1), 10);
        let sq = ei.mul(&ei, &fq);
        assert!(sq.a.agrees_with(&Laurent::from_poly_exact(alg.alpha()), sq.a.prec(), &fq));
        assert!(sq.b.is_zero() && sq.c.is_zero());
    }

    #[test]
    fn text_roundtrip() {
        let alg = example();
        let fq = alg.fq();
        let x = QuatElem([lin(fq, 2), Poly::zero(), lin(fq, 1), Poly::t()]);
        let s = x.display(fq).to_string();
        assert_eq!(s, "T+2 + (0)*i + (T+1)*j + (T)*k");
        assert_eq!(QuatElem::parse(&s, fq).unwrap(), x);
        assert_eq!(QuatElem::parse("1", fq).unwrap(), QuatElem::one());
        assert_eq!(QuatElem::parse("(T) * k - (1)*i", fq).unwrap(), QuatElem([Poly::zero(), Poly::from_ints(fq, &[-1]), Poly::zero(), Poly::t()]));
        assert!(QuatElem::parse("(T)*q", fq).is_err());
        assert!(QuatElem::parse("(T*i", fq).is_err());
    }

    #[test]
    fn height_examples() {
        let fq = Fq::prime(5).unwrap();
        assert_eq!(QuatElem::one().height().unwrap(), 0);
        assert_eq!(QuatElem([Poly::zero(), Poly::t(), Poly::zero(), Poly::zero()]).height().unwrap(), 1);
        assert!(QuatElem::zero().height().is_err());
        assert_eq!(QuatElem([Poly::one(), Poly::zero(), Poly::from_ints(&fq, &[1, 2, 3]), Poly::t()]).height().unwrap(), 2);
    }

    fn brute_monics(fq: &Fq, deg: usize) -> Vec<Poly> {
        let q = fq.q() as usize;
        (0..q.pow(deg as u32))
            .map(|mut idx| {
                let mut c: Vec<Fe> = (0..deg).map(|_| { let e = fq.element((idx % q) as u32).unwrap(); idx /= q; e }).collect();
                c.push(Fe::ONE);
                Poly::from_coeffs(c)
            })
            .collect()
    }

    #[test]
    fn find_alpha_matches_exhaustive_search() {
        let fq = Fq::prime(5).unwrap();
        let primes: Vec<Poly> = (0..4).map(|c| lin(&fq, c)).collect();
        let ram = RamificationSet::new(&fq, &primes).unwrap();
        let squares: Vec<Fe> = fq.elements().map(|x| fq.mul(x, x)).collect();
        let divisors: Vec<Poly> = (1..=2).flat_map(|d| brute_monics(&fq, d)).collect();
        let oracle = [2usize, 4]
            .iter()
            .filter_map(|&deg| {
                brute_monics(&fq, deg)
                    .into_iter()
                    .filter(|a| (0..4).all(|c| !squares.contains(&a.eval(fq.from_i64(-c), &fq))))
                    .filter(|a| divisors.iter().all(|d| d.degree() >= a.degree() || !a.rem(d, &fq).unwrap().is_zero()))
                    .min()
            })
            .next()
            .unwrap();
        let alpha = find_alpha(&fq, &ram, true).unwrap();
        assert_eq!(alpha, oracle);
        assert_eq!(alpha, Poly::from_ints(&fq, &[2, 0, 0, 0, 1]));
    }
}
