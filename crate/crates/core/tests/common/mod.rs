#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use quatgraph::algebra::{monic_irreducibles, parse_poly, Fe, Fq, Poly};
use quatgraph::quaternion::{AlgebraData, QuatElem, RamificationSet};
use quatgraph::quotient::{compute_quotient, ComputeOptions, QuotientGraph};

pub fn poly(fq: &Fq, s: &str) -> Poly {
    parse_poly(s, fq).unwrap()
}

pub fn polys(fq: &Fq, list: &[&str]) -> Vec<Poly> {
    list.iter().map(|s| poly(fq, s)).collect()
}

/// Every polynomial of degree at most `h` (including 0).
pub fn all_polys(fq: &Fq, h: usize) -> Vec<Poly> {
    let q = fq.q() as usize;
    (0..q.pow(h as u32 + 1))
        .map(|mut i| {
            Poly::from_coeffs(
                (0..=h)
                    .map(|_| {
                        let e = fq.element((i % q) as u32).unwrap();
                        i /= q;
                        e
                    })
                    .collect(),
            )
        })
        .collect()
}

/// The residue field `A/(w)` as its list of representatives.
pub fn residues(fq: &Fq, w: &Poly) -> Vec<Poly> {
    all_polys(fq, w.degree().unwrap() - 1)
}

pub fn is_square_brute(fq: &Fq, a: &Poly, w: &Poly) -> bool {
    let a = a.rem(w, fq).unwrap();
    residues(fq, w).iter().any(|x| x.mul(x, fq).rem(w, fq).unwrap() == a)
}

/// q = 5, R = {T, T+1, T+2, T+3} with the canonical alpha.
pub fn worked_example_canonical() -> AlgebraData {
    let fq = Fq::prime(5).unwrap();
    AlgebraData::build(&fq, &polys(&fq, &["T", "T+1", "T+2", "T+3"]), true).unwrap()
}

/// q = 5, R = {T, T+1, T+2, T+3} with alpha = T^4+T^3+T^2+T+3, the model
/// whose quotient matches the published figure vertex by vertex.
pub fn worked_example() -> AlgebraData {
    let fq = Fq::prime(5).unwrap();
    let ram = RamificationSet::new(&fq, &polys(&fq, &["T", "T+1", "T+2", "T+3"])).unwrap();
    AlgebraData::with_alpha(&fq, ram, poly(&fq, "T^4+T^3+T^2+T+3")).unwrap()
}

pub fn quotient(alg: AlgebraData) -> QuotientGraph {
    compute_quotient(Arc::new(alg), ComputeOptions::default()).unwrap()
}

/// All even-cardinality sets of monic irreducibles of degree <= 2 with
/// `deg r <= max_deg`, in a fixed order.
pub fn case_matrix(fq: &Fq, max_deg: usize) -> Vec<Vec<Poly>> {
    let mut irr: Vec<Poly> = monic_irreducibles(fq, 1).collect();
    irr.extend(monic_irreducibles(fq, 2));
    let mut out = Vec::new();
    fn rec(irr: &[Poly], start: usize, cur: &mut Vec<Poly>, deg: usize, max_deg: usize, out: &mut Vec<Vec<Poly>>) {
        if !cur.is_empty() && cur.len().is_multiple_of(2) {
            out.push(cur.clone());
        }
        for i in start..irr.len() {
            let d = irr[i].degree().unwrap();
            if deg + d <= max_deg {
                cur.push(irr[i].clone());
                rec(irr, i + 1, cur, deg + d, max_deg, out);
                cur.pop();
            }
        }
    }
    rec(&irr, 0, &mut Vec::new(), 0, max_deg, &mut out);
    out
}

/// All units of `Lambda` of height at most `h`, found by meeting in the
/// middle on `l1^2 - r l3^2 = alpha l2^2 + 2 eps l2 l4 + nu l4^2 + c`.
pub fn units_up_to(alg: &AlgebraData, h: usize) -> Vec<QuatElem> {
    let fq = alg.fq();
    let ps = all_polys(fq, h);
    let mut left: HashMap<Poly, Vec<(usize, usize)>> = HashMap::new();
    for (i1, l1) in ps.iter().enumerate() {
        let s1 = l1.mul(l1, fq);
        for (i3, l3) in ps.iter().enumerate() {
            left.entry(s1.sub(&alg.r().mul(&l3.mul(l3, fq), fq), fq)).or_default().push((i1, i3));
        }
    }
    let two = fq.from_i64(2);
    let mut out = Vec::new();
    for l2 in &ps {
        let a2 = alg.alpha().mul(&l2.mul(l2, fq), fq);
        let e2 = alg.eps().mul(l2, fq).scale(two, fq);
        for l4 in &ps {
            let rhs = a2.add(&e2.mul(l4, fq), fq).add(&alg.nu().mul(&l4.mul(l4, fq), fq), fq);
            for c in fq.elements().filter(|c| !c.is_zero()) {
                if let Some(hits) = left.get(&rhs.add(&Poly::constant(c), fq)) {
                    for &(i1, i3) in hits {
                        out.push(QuatElem([ps[i1].clone(), l2.clone(), ps[i3].clone(), l4.clone()]));
                    }
                }
            }
        }
    }
    out
}

pub fn fe(fq: &Fq, x: i64) -> Fe {
    fq.from_i64(x)
}

/// Vertices at distance at most `radius` from `L(0,0)`.
pub fn ball(fq: &Fq, radius: usize) -> Vec<quatgraph::tree::Vertex> {
    use quatgraph::tree::Vertex;
    let mut out = vec![Vertex::base()];
    let mut frontier = vec![(Vertex::base(), None::<Vertex>)];
    for _ in 0..radius {
        let mut next = Vec::new();
        for (v, parent) in frontier {
            for w in v.neighbors(fq) {
                if Some(&w) != parent.as_ref() {
                    out.push(w.clone());
                    next.push((w, Some(v.clone())));
                }
            }
        }
        frontier = next;
    }
    out
}

/// Vertices within `radius` of both `L(0,0)` and `u`: those hanging off
/// the geodesic between them at a small enough depth.
fn lens(fq: &Fq, u: &quatgraph::tree::Vertex, radius: i64) -> Vec<quatgraph::tree::Vertex> {
    use quatgraph::tree::{geodesic, Vertex};
    let path = geodesic(&Vertex::base(), u);
    let d = path.len() as i64 - 1;
    let mut out = Vec::new();
    for (i, p) in path.iter().enumerate() {
        let depth = (radius - i as i64).min(radius - (d - i as i64));
        if depth < 0 {
            continue;
        }
        out.push(p.clone());
        let mut frontier: Vec<(Vertex, Vertex)> = p
            .neighbors(fq)
            .into_iter()
            .filter(|w| (i == 0 || w != &path[i - 1]) && path.get(i + 1) != Some(w))
            .map(|w| (w, p.clone()))
            .collect();
        for _ in 0..depth {
            let mut next = Vec::new();
            for (w, parent) in frontier {
                out.push(w.clone());
                next.extend(w.neighbors(fq).into_iter().filter(|x| x != &parent).map(|x| (x, w.clone())));
            }
            frontier = next;
        }
    }
    out
}

/// Compares `hom` with brute force on every ordered pair of vertices within
/// `radius` of `L(0,0)`: all units of height at most `radius + m`, kept
/// when they map `v` to `w` and respect the height bound of the pair.
/// Returns `(pairs compared, pairs with nonempty Hom, mismatching pairs)`.
pub fn hom_oracle(alg: &AlgebraData, radius: usize) -> (usize, usize, Vec<String>) {
    use quatgraph::homspace::{act_elem, height_bound, hom};
    use quatgraph::tree::Vertex;
    use std::collections::{BTreeSet, HashSet};
    let fq = alg.fq();
    let ball = ball(fq, radius);
    let in_ball: HashSet<&Vertex> = ball.iter().collect();
    let mut oracle: HashMap<(Vertex, Vertex), BTreeSet<QuatElem>> = HashMap::new();
    for gamma in units_up_to(alg, radius + alg.m()) {
        let u = act_elem(alg, &alg.inverse(&gamma).unwrap(), &Vertex::base()).unwrap();
        if u.dist_to_base() > 2 * radius as i64 {
            continue;
        }
        let h = gamma.height().unwrap();
        for v in lens(fq, &u, radius as i64) {
            let w = act_elem(alg, &gamma, &v).unwrap();
            assert!(in_ball.contains(&w));
            if h <= height_bound(alg, &v, &w) {
                oracle.entry((v, w)).or_default().insert(gamma.clone());
            }
        }
    }
    let mut bad = Vec::new();
    let mut pairs = 0;
    let mut nonempty = 0;
    for v in &ball {
        for w in &ball {
            pairs += 1;
            let got: BTreeSet<QuatElem> = hom(alg, v, w).unwrap().elements(fq).into_iter().collect();
            let want = oracle.remove(&(v.clone(), w.clone())).unwrap_or_default();
            nonempty += usize::from(!want.is_empty());
            if got != want {
                bad.push(format!("{} -> {}: solver {} vs brute force {}", v.display(fq), w.display(fq), got.len(), want.len()));
            }
        }
    }
    (pairs, nonempty, bad)
}
