//! `Hom(v, w) = {gamma in Gamma : gamma v = w}` by linear algebra over F_q.
//!
//! For `v = L(l, g)` and `w = L(l', g')` with `l = l' mod 2`, an element
//! `gamma` of `Lambda` maps `v` to `w` exactly when
//! `X = pi^((l'-l)/2) M_w^-1 iota(gamma) M_v` has integral entries. `X` is
//! F_q-linear in the coordinates of `gamma`, whose height is bounded by
//! `n + m` (`n` the larger distance of `v`, `w` to `L(0,0)`), so the
//! conditions "every negative-exponent digit of `X` vanishes" form a finite
//! linear system. Together with 0 its solutions are exactly `Hom(v, w)`.

use crate::algebra::{Fe, Fq, Poly};
use crate::error::{Error, Result};
use crate::laurent::{Laurent, Mat2};
use crate::linalg::kernel;
use crate::quaternion::{AlgebraData, QuatElem};
use crate::tree::{vnf, Vertex};

/// Precision ceiling for adaptive retries.
pub const DEFAULT_PRECISION_CAP: i64 = 1 << 13;

/// The F_q-span of `basis` minus zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSet {
    pub source: Vertex,
    pub target: Vertex,
    /// Reduced row echelon basis with respect to the coordinate order
    /// (all digits of `l1`, then of `l2`, ...).
    pub basis: Vec<QuatElem>,
}

impl HomSet {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// `q^dim - 1`
    pub fn cardinality(&self, q: u32) -> u64 {
        (q as u64).pow(self.dim() as u32) - 1
    }

    /// Every element, enumerating coefficient vectors `(c_1, ..., c_dim)`
    /// with `c_1` most significant and field elements in canonical order.
    pub fn elements(&self, fq: &Fq) -> Vec<QuatElem> {
        let q = fq.q() as u64;
        let total = q.pow(self.dim() as u32);
        (1..total)
            .map(|mut idx| {
                let mut x = QuatElem::zero();
                for b in self.basis.iter().rev() {
                    let c = fq.element((idx % q) as u32).unwrap();
                    idx /= q;
                    x = x.add(&b.scale(c, fq), fq);
                }
                x
            })
            .collect()
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    /// trivial stabilizer in `Gamma / F_q^*`
    Stable,
    /// cyclic stabilizer of order `q + 1` in `Gamma / F_q^*`
    Unstable,
}

/// `n + m` where `n` is the larger distance of `v`, `w` to `L(0,0)`.
pub fn height_bound(alg: &AlgebraData, v: &Vertex, w: &Vertex) -> usize {
    v.dist_to_base().max(w.dist_to_base()) as usize + alg.m()
}

/// `pi^((l'-l)/2) M_w^-1 Y M_v` for `Y = iota(f_k)`.
fn conjugate(y: &Mat2, v: &Vertex, w: &Vertex, fq: &Fq) -> Mat2 {
    let (l, lp) = (v.n(), w.n());
    let (g, gp) = (v.g(), w.g());
    let t1 = y.a.sub(&gp.mul(&y.c, fq), fq);
    let x11 = t1.shift((l - lp) / 2);
    let x12 = g.mul(&t1, fq).add(&y.b, fq).sub(&gp.mul(&y.d, fq), fq).shift(-(l + lp) / 2);
    let x21 = y.c.shift((l + lp) / 2);
    let x22 = g.mul(&y.c, fq).add(&y.d, fq).shift((lp - l) / 2);
    Mat2::new(x11, x12, x21, x22)
}

fn system_matrices(alg: &AlgebraData, v: &Vertex, w: &Vertex, h: usize) -> Result<[Mat2; 4]> {
    let fq = alg.fq();
    let n = v.dist_to_base().max(w.dist_to_base());
    let mut prec = 2 * n + (alg.d() + alg.m()) as i64 + 1;
    loop {
        let xs: [Mat2; 4] = std::array::from_fn(|k| conjugate(&alg.embed(&QuatElem::basis(k), prec), v, w, fq));
        let got = xs.iter().map(|x| x.min_prec()).min().unwrap();
        if got >= h as i64 {
            return Ok(xs);
        }
        prec += (h as i64 - got).max(prec);
        if prec > alg.precision_cap() {
            return Err(Error::precision(format!("Hom system needs precision beyond the cap {}", alg.precision_cap())));
        }
    }
}

/// Solves for `Hom(v, w)`. Every basis element is checked to be a unit of
/// height at most [`height_bound`] that maps `v` to `w`.
pub fn hom(alg: &AlgebraData, v: &Vertex, w: &Vertex) -> Result<HomSet> {
    let fq = alg.fq();
    let mut out = HomSet { source: v.clone(), target: w.clone(), basis: Vec::new() };
    if (v.n() - w.n()).rem_euclid(2) != 0 {
        return Ok(out);
    }
    let h = height_bound(alg, v, w);
    let xs = system_matrices(alg, v, w, h)?;
    let width = h + 1;
    let ncols = 4 * width;
    let lo = xs.iter().flat_map(|x| x.entries().map(|e| e.val_bound())).min().unwrap() - h as i64;
    let mut rows = Vec::new();
    for entry in 0..4 {
        for ex in lo..0 {
            let mut row = vec![Fe::ZERO; ncols];
            let mut nonzero = false;
            for (k, x) in xs.iter().enumerate() {
                let e: &Laurent = x.entries()[entry];
                for t in 0..width {
                    let c = e.coeff(ex + t as i64);
                    if !c.is_zero() {
                        row[k * width + t] = c;
                        nonzero = true;
                    }
                }
            }
            if nonzero {
                rows.push(row);
            }
        }
    }
    for vec in kernel(&rows, ncols, fq) {
        let coords: [Poly; 4] = std::array::from_fn(|k| Poly::from_coeffs(vec[k * width..(k + 1) * width].to_vec()));
        out.basis.push(QuatElem(coords));
    }
    if out.dim() > 2 {
        return Err(Error::internal(format!("Hom space of dimension {}", out.dim())));
    }
    for gamma in &out.basis {
        if alg.unit_norm(gamma).is_none() {
            return Err(Error::internal("Hom solution is not a unit"));
        }
        if gamma.height()? > h {
            return Err(Error::internal("Hom solution exceeds the height bound"));
        }
        if &act_elem(alg, gamma, v)? != w {
            return Err(Error::internal("Hom solution does not map source to target"));
        }
    }
    Ok(out)
}

/// `End(v)` and the stability type of `v`.
pub fn end_and_classify(alg: &AlgebraData, v: &Vertex) -> Result<(HomSet, Stability)> {
    let end = hom(alg, v, v)?;
    let st = match end.dim() {
        1 => Stability::Stable,
        2 => Stability::Unstable,
        d => return Err(Error::internal(format!("End of dimension {d}"))),
    };
    Ok((end, st))
}

/// `gamma v`, with the working precision raised until the normal form is
/// determined.
pub fn act_elem(alg: &AlgebraData, gamma: &QuatElem, v: &Vertex) -> Result<Vertex> {
    let fq = alg.fq();
    let h = gamma.height()? as i64;
    let mut prec = 2 * (h + alg.m() as i64 + v.dist_to_base() + v.n().abs()) + 8;
    loop {
        let m = alg.embed(gamma, prec).mul(&v.matrix(), fq);
        match vnf(&m, fq) {
            Err(e) if e.is_precision() && prec < alg.precision_cap() => prec *= 2,
            other => return other,
        }
    }
}
