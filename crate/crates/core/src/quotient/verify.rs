use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use super::{EdgeLabel, QuotientGraph};
use crate::error::Result;
use crate::homspace::Stability;
use crate::quaternion::RamificationSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Invariants of the computed graph next to the values predicted by the
/// structure theorem and the bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub vertices: usize,
    /// directed edges, each geometric edge counted twice
    pub edges: usize,
    pub v1: usize,
    pub v_q1: usize,
    pub h1: i64,
    pub paired_edges: usize,
    pub g_r: i64,
    pub odd_r: u32,
    pub diameter: usize,
    pub two_cycle_count: u64,
    pub max_label_height: usize,
    /// `diam <= 2 deg(r) - 4`; conjectural, reported only
    pub improved_bound_holds: bool,
    pub checks: Vec<Check>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// `g(R) = 1 + prod(q_p - 1)/(q^2 - 1) - q 2^(#R-1) odd(R)/(q + 1)`, or
/// `None` if it is not an integer (or overflows).
pub fn g_of_r(q: u32, ram: &RamificationSet) -> Option<i64> {
    let q = q as i128;
    let mut prod: i128 = 1;
    for p in ram.primes() {
        let qp = q.checked_pow(p.degree()? as u32)?;
        prod = prod.checked_mul(qp - 1)?;
    }
    let v1 = (1i128 << (ram.len() - 1)) * ram.odd() as i128;
    let num = (q * q - 1) + prod - q * (q - 1) * v1;
    let den = q * q - 1;
    (num % den == 0).then(|| i64::try_from(num / den).ok()).flatten()
}

/// `x <= 2 d + 2 (2 log_q 2 + 1 - log_q(q - 1))`, decided exactly as
/// `q^x (q-1)^2 <= 16 q^(2d+2)`.
pub fn diameter_bound_holds(q: u32, d: usize, x: i64) -> bool {
    if x < 0 {
        return true;
    }
    let q = q as u128;
    let lhs = q.checked_pow(x as u32).and_then(|v| v.checked_mul((q - 1) * (q - 1)));
    let rhs = q.checked_pow(2 * d as u32 + 2).and_then(|v| v.checked_mul(16));
    match (lhs, rhs) {
        (Some(l), Some(r)) => l <= r,
        (None, Some(_)) => false,
        _ => (x as f64) <= 2.0 * d as f64 + 2.0 * (2.0 * 2f64.ln() / (q as f64).ln() + 1.0) + 1.0,
    }
}

/// `diam <= 2 deg(r) - 4`.
pub fn improved_bound_holds(d: usize, diam: usize) -> bool {
    diam as i64 <= 2 * d as i64 - 4
}

fn bfs(adj: &[Vec<usize>], s: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[s] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if dist[w].is_none() {
                dist[w] = Some(dist[u].unwrap() + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

fn check(checks: &mut Vec<Check>, name: &'static str, passed: bool, detail: String) {
    checks.push(Check { name, passed, detail });
}

impl QuotientGraph {
    /// Checks the graph against the structure theorem and the diameter and
    /// generator-height bounds. Failed checks are reported, not raised.
    pub fn verify_structure(&self) -> Result<StructureReport> {
        let alg = self.alg().clone();
        let ram = alg.ram();
        let q = alg.fq().q();
        let n = self.vertices.len();
        let mut checks = Vec::new();

        let loops = self.edges.iter().filter(|e| e.src == e.dst).count();
        check(&mut checks, "no loops", loops == 0, format!("{loops} loops"));

        let bad_deg: Vec<usize> = (0..n)
            .filter(|&v| {
                let want = match self.vertices[v].stability {
                    Stability::Stable => q as usize + 1,
                    Stability::Unstable => 1,
                };
                self.degree(v) != want
            })
            .collect();
        check(&mut checks, "degrees", bad_deg.is_empty(), if bad_deg.is_empty() { String::new() } else { format!("wrong degree at vertices {bad_deg:?}") });

        let reverse_ok = self.edges.iter().all(|e| {
            let there = self.edges.iter().filter(|f| f.src == e.src && f.dst == e.dst).count();
            let back = self.edges.iter().filter(|f| f.src == e.dst && f.dst == e.src).count();
            there == back
        });
        check(&mut checks, "edges come in opposite pairs", reverse_ok, String::new());

        let v1 = self.count(Stability::Unstable);
        let v_q1 = (0..n).filter(|&v| self.degree(v) == q as usize + 1).count();
        let odd_r = ram.odd();
        let want_v1 = (1usize << (ram.len() - 1)) * odd_r as usize;
        check(&mut checks, "V1 = 2^(#R-1) odd(R)", v1 == want_v1, format!("V1 = {v1}, expected {want_v1}"));

        let g_r = g_of_r(q, ram);
        let want_vq1 = g_r.and_then(|g| {
            let num = 2 * g - 2 + want_v1 as i64;
            (num % (q as i64 - 1) == 0).then(|| num / (q as i64 - 1))
        });
        let show = |x: Option<i64>| x.map_or("not an integer".to_string(), |x| x.to_string());
        check(
            &mut checks,
            "V_(q+1) = (2g(R) - 2 + V1)/(q - 1)",
            want_vq1 == Some(v_q1 as i64),
            format!("V_(q+1) = {v_q1}, expected {}", show(want_vq1)),
        );

        let h1 = self.edges.len() as i64 / 2 - n as i64 + 1;
        let paired = self.paired_edges().count();
        check(&mut checks, "h1 = g(R)", g_r == Some(h1), format!("h1 = {h1}, g(R) = {}", show(g_r)));
        check(&mut checks, "h1 = #paired edges", h1 == paired as i64, format!("h1 = {h1}, {paired} paired edges"));

        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            adj[e.src].push(e.dst);
        }
        let dists: Vec<Vec<Option<usize>>> = (0..n).map(|s| bfs(&adj, s)).collect();
        let connected = dists.iter().all(|d| d.iter().all(|x| x.is_some()));
        check(&mut checks, "connected", connected, String::new());
        let diameter = dists.iter().flatten().flatten().copied().max().unwrap_or(0);
        let d = ram.d();
        if n >= 3 {
            check(
                &mut checks,
                "diameter bound",
                diameter_bound_holds(q, d, diameter as i64),
                format!("diameter {diameter}, deg r = {d}"),
            );
        }

        // labels: the local bound m + (distance to the initial vertex) and the global bound
        let m = alg.m();
        let mut max_label_height = 0;
        let mut local_ok = true;
        let mut global_ok = true;
        let mut worst = String::new();
        for e in self.paired_edges() {
            let EdgeLabel::Pairing { g, .. } = &e.label else { unreachable!() };
            let h = g.height()?;
            max_label_height = max_label_height.max(h);
            let level = self.vertices[e.dst].level.max(self.vertices[e.src].level + 1);
            if h > m + level {
                local_ok = false;
                worst = format!("label of height {h} at level {level}");
            }
            if !diameter_bound_holds(q, d, h as i64 - m as i64) {
                global_ok = false;
            }
        }
        check(&mut checks, "label heights <= deg(alpha)/2 + level", local_ok, worst);
        check(&mut checks, "label heights <= global bound", global_ok, format!("max height {max_label_height}"));

        let mut parallel: HashMap<(usize, usize), u64> = HashMap::new();
        for e in self.edges.iter().filter(|e| e.src < e.dst) {
            *parallel.entry((e.src, e.dst)).or_default() += 1;
        }
        let two_cycle_count = parallel.values().map(|&k| k * (k - 1) / 2).sum();

        Ok(StructureReport {
            vertices: n,
            edges: self.edges.len(),
            v1,
            v_q1,
            h1,
            paired_edges: paired,
            g_r: g_r.unwrap_or(i64::MIN),
            odd_r,
            diameter,
            two_cycle_count,
            max_label_height,
            improved_bound_holds: improved_bound_holds(d, diameter),
            checks,
        })
    }
}
