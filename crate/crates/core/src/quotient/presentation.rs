use std::fmt::Write as _;

use super::{EdgeLabel, QuotientGraph};
use crate::algebra::prime_factors;
use crate::error::{Error, Result};
use crate::homspace::{act_elem, HomSet, Stability};
use crate::quaternion::{AlgebraData, QuatElem};

/// A generator of `Gamma`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Gen {
    /// the scalar generator of `F_q^*`
    G0,
    /// `g_v` for the terminal vertex with this graph id
    Vertex(usize),
    /// `g_k` for the k-th paired edge (0-based)
    Edge(usize),
}

/// A product of generator powers, read left to right.
pub type Word = Vec<(Gen, i64)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub q: u32,
    pub g0: QuatElem,
    /// `(vertex id, g_v)` for every terminal vertex, by id
    pub vertex_gens: Vec<(usize, QuatElem)>,
    /// `(edge position in the graph, g_e)` for every paired edge
    pub edge_gens: Vec<(usize, QuatElem)>,
}

/// The first element of `End(v)` (canonical order) of multiplicative order
/// `q^2 - 1` whose `(q+1)`-th power is `g0`.
fn stabilizer_generator(alg: &AlgebraData, end: &HomSet, g0: &QuatElem) -> Result<QuatElem> {
    let q = alg.fq().q() as u64;
    let order = q * q - 1;
    let primes: Vec<u64> = prime_factors(order as u128).into_iter().map(|p| p as u64).collect();
    let one = QuatElem::one();
    end.elements(alg.fq())
        .into_iter()
        .find(|x| &alg.pow(x, q + 1) == g0 && primes.iter().all(|p| alg.pow(x, order / p) != one))
        .ok_or_else(|| Error::internal("End(v) has no generator of order q^2 - 1"))
}

impl Presentation {
    pub fn build(g: &QuotientGraph) -> Result<Presentation> {
        let alg = g.alg();
        let fq = alg.fq();
        let g0 = QuatElem::scalar(fq.primitive());
        let mut vertex_gens = Vec::new();
        for (id, v) in g.vertices.iter().enumerate() {
            if v.stability == Stability::Unstable {
                let end = HomSet { source: v.vertex.clone(), target: v.vertex.clone(), basis: v.end_basis.clone() };
                vertex_gens.push((id, stabilizer_generator(alg, &end, &g0)?));
            }
        }
        let edge_gens = g
            .edges
            .iter()
            .enumerate()
            .filter_map(|(i, e)| match &e.label {
                EdgeLabel::Pairing { g, .. } => Some((i, g.clone())),
                _ => None,
            })
            .collect();
        let p = Presentation { q: fq.q(), g0, vertex_gens, edge_gens };
        p.verify_relations(alg)?;
        for (id, gv) in &p.vertex_gens {
            let v = &g.vertices[*id].vertex;
            if &act_elem(alg, gv, v)? != v {
                return Err(Error::internal("g_v does not fix v"));
            }
        }
        Ok(p)
    }

    pub fn generators(&self) -> Vec<Gen> {
        let mut out = vec![Gen::G0];
        out.extend(self.vertex_gens.iter().map(|(id, _)| Gen::Vertex(*id)));
        out.extend((0..self.edge_gens.len()).map(Gen::Edge));
        out
    }

    pub fn len(&self) -> usize {
        1 + self.vertex_gens.len() + self.edge_gens.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn element(&self, gen: Gen) -> Result<&QuatElem> {
        match gen {
            Gen::G0 => Ok(&self.g0),
            Gen::Vertex(id) => self
                .vertex_gens
                .iter()
                .find(|(v, _)| *v == id)
                .map(|(_, x)| x)
                .ok_or_else(|| Error::invalid(format!("vertex {id} is not terminal"))),
            Gen::Edge(k) => self.edge_gens.get(k).map(|(_, x)| x).ok_or_else(|| Error::invalid(format!("no paired edge {k}"))),
        }
    }

    /// `g0`, `g_v1`, ... (terminal vertices numbered by id) and `g1`, ....
    pub fn name(&self, gen: Gen) -> String {
        match gen {
            Gen::G0 => "g0".to_string(),
            Gen::Vertex(id) => {
                let k = self.vertex_gens.iter().position(|(v, _)| *v == id).map_or(0, |k| k + 1);
                format!("g_v{k}")
            }
            Gen::Edge(k) => format!("g{}", k + 1),
        }
    }

    /// Resolves a generator name as printed by [`Self::name`].
    pub fn parse_name(&self, s: &str) -> Result<Gen> {
        let s = s.trim();
        let bad = || Error::Parse(format!("unknown generator {s:?}"));
        if s == "g0" {
            return Ok(Gen::G0);
        }
        if let Some(k) = s.strip_prefix("g_v") {
            let k: usize = k.parse().map_err(|_| bad())?;
            return self.vertex_gens.get(k.wrapping_sub(1)).map(|(id, _)| Gen::Vertex(*id)).ok_or_else(bad);
        }
        let k: usize = s.strip_prefix('g').and_then(|k| k.parse().ok()).ok_or_else(bad)?;
        if k == 0 || k > self.edge_gens.len() {
            return Err(bad());
        }
        Ok(Gen::Edge(k - 1))
    }

    pub fn relations(&self) -> Vec<String> {
        let mut out = vec![format!("g0^{} = 1", self.q - 1)];
        for (id, _) in &self.vertex_gens {
            out.push(format!("{}^{} = g0", self.name(Gen::Vertex(*id)), self.q + 1));
        }
        for k in 0..self.edge_gens.len() {
            out.push(format!("[g0, {}] = 1", self.name(Gen::Edge(k))));
        }
        out
    }

    /// Checks every relation by exact arithmetic in `Lambda`, and that all
    /// generators are units.
    pub fn verify_relations(&self, alg: &AlgebraData) -> Result<()> {
        let q = self.q as u64;
        let one = QuatElem::one();
        let fail = |what: String| Err(Error::internal(format!("relation fails: {what}")));
        if alg.pow(&self.g0, q - 1) != one || (1..q - 1).any(|k| alg.pow(&self.g0, k) == one) {
            return fail("g0 of order q-1".into());
        }
        for gen in self.generators() {
            let x = self.element(gen)?;
            if alg.unit_norm(x).is_none() {
                return fail(format!("{} is a unit", self.name(gen)));
            }
            if alg.mul(x, &self.g0) != alg.mul(&self.g0, x) {
                return fail(format!("[g0, {}] = 1", self.name(gen)));
            }
        }
        for (id, gv) in &self.vertex_gens {
            if alg.pow(gv, q + 1) != self.g0 {
                return fail(format!("{}^{} = g0", self.name(Gen::Vertex(*id)), q + 1));
            }
        }
        Ok(())
    }

    pub fn eval_word(&self, alg: &AlgebraData, word: &[(Gen, i64)]) -> Result<QuatElem> {
        let mut acc = QuatElem::one();
        for &(gen, e) in word {
            let x = self.element(gen)?;
            let base = if e < 0 { alg.inverse(x)? } else { x.clone() };
            acc = alg.mul(&acc, &alg.pow(&base, e.unsigned_abs()));
        }
        Ok(acc)
    }

    pub fn format_word(&self, word: &[(Gen, i64)]) -> String {
        if word.is_empty() {
            return "1".to_string();
        }
        let mut s = String::new();
        for (i, &(gen, e)) in word.iter().enumerate() {
            if i > 0 {
                s.push_str(" * ");
            }
            s.push_str(&self.name(gen));
            if e != 1 {
                write!(s, "^{e}").unwrap();
            }
        }
        s
    }

    /// Reads `"1"` or `"x^e * y * ..."` with generator names as printed.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        if s.trim() == "1" {
            return Ok(Vec::new());
        }
        s.split('*')
            .map(|part| {
                let (name, e) = match part.split_once('^') {
                    Some((n, e)) => (n, e.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad exponent in {part:?}")))?),
                    None => (part, 1),
                };
                Ok((self.parse_name(name)?, e))
            })
            .collect()
    }
}

/// Merges adjacent powers of the same generator and drops trivial ones.
pub(super) fn simplify(word: Word) -> Word {
    let mut out: Word = Vec::new();
    for (g, e) in word {
        match out.last_mut() {
            Some((h, f)) if *h == g => *f += e,
            _ => out.push((g, e)),
        }
        if out.last().is_some_and(|&(_, f)| f == 0) {
            out.pop();
        }
    }
    out
}
