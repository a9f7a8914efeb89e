//! The Bruhat-Tits tree of PGL_2(K_inf): vertices in normal form, adjacency,
//! geodesics and the action of GL_2(K_inf).

use std::fmt;

use crate::algebra::{Fe, Fq};
use crate::error::{Error, Result};
use crate::laurent::{Laurent, Mat2, EXACT};

/// The lattice class `L(n, g)` spanned by the columns of `[[pi^n, g], [0, 1]]`,
/// with `g` reduced modulo `pi^n` and stored exactly.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    n: i64,
    /// exponent of `digits[0]`; meaningless when `digits` is empty
    v: i64,
    digits: Vec<Fe>,
}

impl Vertex {
    /// `L(0, 0)`
    pub fn base() -> Self {
        Vertex { n: 0, v: 0, digits: Vec::new() }
    }

    /// `L(n, 0)`
    pub fn on_baseline(n: i64) -> Self {
        Vertex { n, v: 0, digits: Vec::new() }
    }

    /// `L(n, g mod pi^n)`; `g` must be known modulo `pi^n`.
    pub fn new(n: i64, g: &Laurent) -> Result<Self> {
        if g.prec() < n {
            return Err(Error::precision(format!("g known to O(pi^{}) but n = {n}", g.prec())));
        }
        let g = g.truncate(n);
        if g.is_zero() {
            return Ok(Self::on_baseline(n));
        }
        Ok(Vertex { n, v: g.val_bound(), digits: g.digits().to_vec() })
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    /// The representative `g` as an exact Laurent polynomial.
    pub fn g(&self) -> Laurent {
        if self.digits.is_empty() {
            Laurent::zero()
        } else {
            Laurent::from_parts(self.v, self.digits.clone(), EXACT)
        }
    }

    /// Valuation of `g`, `None` for `g = 0`.
    pub fn g_val(&self) -> Option<i64> {
        (!self.digits.is_empty()).then_some(self.v)
    }

    /// `[[pi^n, g], [0, 1]]`
    pub fn matrix(&self) -> Mat2 {
        Mat2::new(Laurent::monomial(Fe::ONE, self.n), self.g(), Laurent::zero(), Laurent::one())
    }

    /// `max(0, n - v(g))`, the number of upward steps before `g` vanishes.
    pub fn deg_n(&self) -> i64 {
        deg_n(&self.g(), self.n)
    }

    /// Distance to `L(0, 0)`.
    pub fn dist_to_base(&self) -> i64 {
        let delta = self.deg_n();
        delta + (self.n - delta).abs()
    }

    /// The `q + 1` neighbours: the up-neighbour `L(n-1, g mod pi^(n-1))` first,
    /// then `L(n+1, g + a pi^n)` for `a` in canonical field order.
    pub fn neighbors(&self, fq: &Fq) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(fq.q() as usize + 1);
        out.push(self.up());
        out.extend(fq.elements().map(|a| self.down(a, fq)));
        out
    }

    pub fn up(&self) -> Vertex {
        Vertex::new(self.n - 1, &self.g()).expect("exact g")
    }

    /// `L(n+1, g + a pi^n)`
    pub fn down(&self, a: Fe, fq: &Fq) -> Vertex {
        Vertex::new(self.n + 1, &self.g().add(&Laurent::monomial(a, self.n), fq)).expect("exact g")
    }

    /// The path from this vertex to `L(0, 0)`, both ends included: first up
    /// until `g` vanishes, then along the baseline.
    pub fn geodesic_to_base(&self) -> Vec<Vertex> {
        let mut path = vec![self.clone()];
        let mut cur = self.clone();
        for _ in 0..self.deg_n() {
            cur = cur.up();
            path.push(cur.clone());
        }
        debug_assert!(cur.digits.is_empty());
        while cur.n != 0 {
            cur = Vertex::on_baseline(cur.n - cur.n.signum());
            path.push(cur.clone());
        }
        path
    }

    /// The position of `w` relative to this vertex, i.e. the normal form of
    /// `M_v^-1 M_w`.
    fn relative(&self, w: &Vertex, fq: &Fq) -> Vertex {
        let diff = w.g().sub(&self.g(), fq).shift(-self.n);
        Vertex::new(w.n - self.n, &diff).expect("exact g")
    }

    pub fn distance(&self, w: &Vertex, fq: &Fq) -> i64 {
        self.relative(w, fq).dist_to_base()
    }

    /// Text form `(n; c_v,...,c_{n-1}@v)`, or `(n; 0)` when `g = 0`.
    pub fn display<'a>(&'a self, fq: &'a Fq) -> VertexDisplay<'a> {
        VertexDisplay { v: self, fq }
    }

    pub fn parse(s: &str, fq: &Fq) -> Result<Vertex> {
        let bad = || Error::Parse(format!("malformed vertex `{s}`, expected `(n; c_v,...,c_(n-1)@v)` or `(n; 0)`"));
        let inner = s.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let (n, rest) = inner.split_once(';').ok_or_else(bad)?;
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let rest = rest.trim();
        if rest == "0" {
            return Ok(Vertex::on_baseline(n));
        }
        let (cs, v) = rest.rsplit_once('@').ok_or_else(bad)?;
        let v: i64 = v.trim().parse().map_err(|_| bad())?;
        let mut coeffs = Vec::new();
        let mut depth = 0;
        let mut start = 0;
        let cs = cs.trim();
        for (i, ch) in cs.char_indices() {
            match ch {
                '[' => depth += 1,
                ']' => depth -= 1,
                ',' if depth == 0 => {
                    coeffs.push(fq.parse_elem(&cs[start..i])?);
                    start = i + 1;
                }
                _ => {}
            }
        }
        coeffs.push(fq.parse_elem(&cs[start..])?);
        if v + coeffs.len() as i64 != n {
            return Err(Error::Parse(format!(
                "vertex `{s}`: digits from pi^{v} must end at pi^{} (n = {n})",
                n - 1
            )));
        }
        Vertex::new(n, &Laurent::from_parts(v, coeffs, EXACT))
    }
}

pub struct VertexDisplay<'a> {
    v: &'a Vertex,
    fq: &'a Fq,
}

impl fmt::Display for VertexDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.v;
        if v.digits.is_empty() {
            return write!(f, "({}; 0)", v.n);
        }
        // pad with zeros up to pi^(n-1) so that the digit count pins down n
        let mut cs: Vec<String> = v.digits.iter().map(|&c| self.fq.fmt_elem(c)).collect();
        while v.v + (cs.len() as i64) < v.n {
            cs.push(self.fq.fmt_elem(Fe::ZERO));
        }
        write!(f, "({}; {}@{})", v.n, cs.join(","), v.v)
    }
}

/// `max(0, n - v(g))` with `deg_n(0) = 0`.
pub fn deg_n(g: &Laurent, n: i64) -> i64 {
    match g.truncate(n.min(g.prec())).val() {
        None => 0,
        Some(v) => (n - v).max(0),
    }
}

/// The unique path from `v` to `w`.
pub fn geodesic(v: &Vertex, w: &Vertex) -> Vec<Vertex> {
    let mut a = v.geodesic_to_base();
    let mut b = w.geodesic_to_base();
    let mut meet = a.pop().unwrap();
    b.pop();
    while let (Some(x), Some(y)) = (a.last(), b.last()) {
        if x != y {
            break;
        }
        meet = a.pop().unwrap();
        b.pop();
    }
    a.push(meet);
    a.extend(b.into_iter().rev());
    a
}

/// Normal form of the lattice class spanned by the columns of `m`.
pub fn vnf(m: &Mat2, fq: &Fq) -> Result<Vertex> {
    let det = m.det(fq);
    let vdet = det.val().ok_or_else(|| Error::precision("determinant vanishes at working precision"))?;
    // pivot column: the one whose bottom entry has the smaller valuation
    let (b, d) = match (m.c.val(), m.d.val()) {
        (None, None) => {
            return Err(if m.c.is_exact() && m.d.is_exact() {
                Error::invalid("singular matrix")
            } else {
                Error::precision("bottom row vanishes at working precision")
            })
        }
        (Some(vc), Some(vd)) if vc < vd => (&m.a, &m.c),
        (Some(_), None) => {
            if !m.d.is_exact() && m.d.prec() <= m.c.val_bound() {
                return Err(Error::precision("cannot compare bottom-row valuations"));
            }
            (&m.a, &m.c)
        }
        (None, Some(vd)) => {
            if !m.c.is_exact() && m.c.prec() < vd {
                return Err(Error::precision("cannot compare bottom-row valuations"));
            }
            (&m.b, &m.d)
        }
        _ => (&m.b, &m.d),
    };
    let vd = d.val().unwrap();
    let n = vdet - 2 * vd;
    if b.is_zero() && b.prec() >= n + vd {
        return Ok(Vertex::on_baseline(n));
    }
    // g = b/d mod pi^n needs d^-1 to relative precision n + vd - v(b)
    let vb = b.val_bound().min(n + vd);
    let rel = (n + vd - vb).max(1);
    let d = if d.is_exact() && d.digits().len() > 1 { d.truncate(vd + rel) } else { d.clone() };
    let b = if b.is_exact() { b.truncate(n + vd) } else { b.clone() };
    let g = b.mul(&d.inv(fq)?, fq);
    if g.prec() < n {
        return Err(Error::precision(format!("g known to O(pi^{}) but n = {n}", g.prec())));
    }
    Vertex::new(n, &g)
}

/// `vnf(A * M_v)`
pub fn act(a: &Mat2, v: &Vertex, fq: &Fq) -> Result<Vertex> {
    vnf(&a.mul(&v.matrix(), fq), fq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{HashMap, HashSet, VecDeque};

    fn f3() -> Fq {
        Fq::prime(3).unwrap()
    }

    fn ball(fq: &Fq, center: &Vertex, radius: usize) -> HashMap<Vertex, i64> {
        let mut dist = HashMap::new();
        dist.insert(center.clone(), 0);
        let mut queue = VecDeque::from([center.clone()]);
        while let Some(v) = queue.pop_front() {
            let dv = dist[&v];
            if dv as usize == radius {
                continue;
            }
            for w in v.neighbors(fq) {
                if !dist.contains_key(&w) {
                    dist.insert(w.clone(), dv + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    #[test]
    fn neighbors_of_base() {
        let fq = f3();
        let nb = Vertex::base().neighbors(&fq);
        let expected: Vec<Vertex> = vec![
            Vertex::on_baseline(-1),
            Vertex::on_baseline(1),
            Vertex::new(1, &Laurent::constant(fq.from_i64(1))).unwrap(),
            Vertex::new(1, &Laurent::constant(fq.from_i64(2))).unwrap(),
        ];
        assert_eq!(nb, expected);
    }

    #[test]
    fn ball_is_a_regular_tree() {
        let fq = f3();
        let b = ball(&fq, &Vertex::base(), 4);
        // 1 + 4 + 12 + 36 + 108 vertices, which also rules out cycles
        assert_eq!(b.len(), 1 + 4 + 12 + 36 + 108);
        for v in b.keys() {
            let nb = v.neighbors(&fq);
            assert_eq!(nb.iter().collect::<HashSet<_>>().len(), 4);
            for w in &nb {
                assert!(w.neighbors(&fq).contains(v));
            }
        }
    }

    #[test]
    fn distances_match_bfs() {
        let fq = f3();
        let b = ball(&fq, &Vertex::base(), 4);
        for (v, &d) in &b {
            assert_eq!(v.dist_to_base(), d);
            assert_eq!(Vertex::base().distance(v, &fq), d);
            let path = v.geodesic_to_base();
            assert_eq!(path.len() as i64, d + 1);
            for w in path.windows(2) {
                assert!(w[0].neighbors(&fq).contains(&w[1]));
            }
        }
        let center = Vertex::new(2, &Laurent::constant(fq.from_i64(1))).unwrap();
        let b2 = ball(&fq, &center, 3);
        for (w, &d) in b2.iter().take(60) {
            assert_eq!(center.distance(w, &fq), d);
            assert_eq!(w.distance(&center, &fq), d);
            assert_eq!((center.n() - w.n() - d).rem_euclid(2), 0);
            let path = geodesic(&center, w);
            assert_eq!(path.len() as i64, d + 1);
            assert_eq!(path.first(), Some(&center));
            assert_eq!(path.last(), Some(w));
        }
    }

    #[test]
    fn examples() {
        let fq = Fq::prime(5).unwrap();
        assert_eq!(deg_n(&Laurent::zero(), 4), 0);
        assert_eq!(deg_n(&Laurent::monomial(Fe::ONE, 1), 2), 1);
        let g = Laurent::from_parts(-2, vec![Fe::ONE, Fe::ONE], EXACT);
        assert_eq!(deg_n(&g, 1), 3);
        let v = Vertex::new(2, &Laurent::monomial(Fe::ONE, 1)).unwrap();
        assert_eq!(v.dist_to_base(), 2);
        assert_eq!(v.geodesic_to_base(), vec![v.clone(), Vertex::on_baseline(1), Vertex::base()]);
        assert_eq!(
            Vertex::on_baseline(-3).geodesic_to_base(),
            (0..4).map(|k| Vertex::on_baseline(k - 3)).collect::<Vec<_>>()
        );
        assert_eq!(vnf(&Mat2::identity(), &fq).unwrap(), Vertex::base());
        let swap = Mat2::new(Laurent::zero(), Laurent::one(), Laurent::one(), Laurent::zero());
        assert_eq!(vnf(&swap, &fq).unwrap(), Vertex::base());
    }

    #[test]
    fn text_roundtrip() {
        let fq = f3();
        for v in ball(&fq, &Vertex::base(), 3).keys() {
            let s = v.display(&fq).to_string();
            assert_eq!(&Vertex::parse(&s, &fq).unwrap(), v, "{s}");
        }
        assert_eq!(Vertex::parse("(4; 0)", &fq).unwrap(), Vertex::on_baseline(4));
        assert_eq!(Vertex::parse("(2; 1,0@0)", &fq).unwrap().display(&fq).to_string(), "(2; 1,0@0)");
        for bad in ["4; 0", "(x; 0)", "(2; 1@0)", "(2; 1,2@)", ""] {
            assert!(Vertex::parse(bad, &fq).is_err(), "{bad}");
        }
    }
}
