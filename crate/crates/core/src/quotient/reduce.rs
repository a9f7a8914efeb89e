use std::collections::HashMap;

use super::presentation::simplify;
use super::{EdgeLabel, Gen, Presentation, QuotientGraph, Word};
use crate::error::{Error, Result};
use crate::homspace::{act_elem, Stability};
use crate::quaternion::QuatElem;
use crate::tree::{geodesic, Vertex};

/// For each vertex `v` of the fundamental domain: the tree neighbors of `v`
/// outside it, each with an element `gamma` (a generator power) moving that
/// neighbor into the fundamental domain.
pub(super) type Moves = Vec<HashMap<Vertex, (QuatElem, (Gen, i64))>>;

fn build_moves(g: &QuotientGraph, p: &Presentation) -> Result<Moves> {
    let alg = g.alg();
    let q = alg.fq().q() as i64;
    let mut moves: Moves = vec![HashMap::new(); g.vertices.len()];
    for (k, &(pos, ref ge)) in p.edge_gens.iter().enumerate() {
        let e = &g.edges[pos];
        let EdgeLabel::Pairing { tree_edge: (o, t), .. } = &e.label else { unreachable!() };
        moves[e.src].insert(t.clone(), (ge.clone(), (Gen::Edge(k), 1)));
        moves[e.dst].insert(act_elem(alg, ge, o)?, (alg.inverse(ge)?, (Gen::Edge(k), -1)));
    }
    for &(id, ref gv) in &p.vertex_gens {
        let parent = g
            .edges
            .iter()
            .find(|e| e.src == id)
            .map(|e| g.vertices[e.dst].vertex.clone())
            .ok_or_else(|| Error::internal("terminal vertex without an edge"))?;
        let inv = alg.inverse(gv)?;
        let (mut x, mut gk) = (parent, QuatElem::one());
        for k in 1..=q {
            x = act_elem(alg, &inv, &x)?;
            gk = alg.mul(&gk, gv);
            moves[id].insert(x.clone(), (gk.clone(), (Gen::Vertex(id), k)));
        }
    }
    let q1 = q as usize + 1;
    for (id, m) in moves.iter().enumerate() {
        let inside = g.edges.iter().filter(|e| e.src == id && e.label == EdgeLabel::Tree).count();
        if g.vertices[id].stability == Stability::Stable && m.len() + inside != q1 {
            return Err(Error::internal(format!("vertex {id} has {} moves", m.len())));
        }
    }
    Ok(moves)
}

impl QuotientGraph {
    /// The presentation of `Gamma`, computed once and verified.
    pub fn presentation(&self) -> Result<&Presentation> {
        self.presentation.get_or_init(|| Presentation::build(self)).as_ref().map_err(Clone::clone)
    }

    fn moves(&self) -> Result<&Moves> {
        let p = self.presentation()?;
        self.moves.get_or_init(|| build_moves(self, p)).as_ref().map_err(Clone::clone)
    }

    /// Returns `(id of w, delta, letters)` with `delta v = w` in the
    /// fundamental domain, `delta` the product of the letters, last letter
    /// leftmost.
    fn reduce_tracked(&self, v: &Vertex) -> Result<(usize, QuatElem, Word)> {
        let alg = self.alg();
        let moves = self.moves()?;
        let base = self.initial_vertex();
        let mut cur = v.clone();
        let mut delta = QuatElem::one();
        let mut letters = Vec::new();
        let mut last = i64::MAX;
        loop {
            if let Some(id) = self.id_of(&cur) {
                return Ok((id, delta, letters));
            }
            let path = geodesic(&cur, base);
            let i = path.iter().position(|x| self.index.contains_key(x)).unwrap();
            // i counts the steps from cur to the fundamental domain
            if i as i64 >= last {
                return Err(Error::internal("reduction step did not approach the fundamental domain"));
            }
            last = i as i64;
            let (gamma, letter) = moves[self.index[&path[i]]]
                .get(&path[i - 1])
                .ok_or_else(|| Error::internal("no label moves this vertex"))?;
            cur = act_elem(alg, gamma, &cur)?;
            delta = alg.mul(gamma, &delta);
            letters.push(*letter);
        }
    }

    /// Finds `w` in the fundamental domain and `gamma` with `v = gamma w`.
    pub fn reduce(&self, v: &Vertex) -> Result<(Vertex, QuatElem)> {
        let (id, delta, _) = self.reduce_tracked(v)?;
        Ok((self.vertices[id].vertex.clone(), self.alg().inverse(&delta)?))
    }

    /// Writes a unit `gamma` as a word in the generators of
    /// [`Self::presentation`]; the product is checked to equal `gamma`.
    pub fn express_in_generators(&self, gamma: &QuatElem) -> Result<Word> {
        let alg = self.alg();
        let fq = alg.fq();
        if alg.unit_norm(gamma).is_none() {
            return Err(Error::invalid("element is not in Gamma (nrd not in F_q^*)"));
        }
        let p = self.presentation()?;
        let word = match self.single_letter(gamma)? {
            Some(w) => w,
            None => {
                let base = self.initial_vertex().clone();
                let (id, delta, letters) = self.reduce_tracked(&act_elem(alg, gamma, &base)?)?;
                if id != 0 {
                    return Err(Error::internal("reduction of gamma * base left the base vertex"));
                }
                let rest = alg.mul(&delta, gamma);
                let tail = self.stabilizer_power(&rest)?;
                let mut word: Word = letters.into_iter().map(|(g, e)| (g, -e)).collect();
                word.extend(tail);
                word
            }
        };
        let word = simplify(word);
        if &p.eval_word(alg, &word)? != gamma {
            return Err(Error::internal(format!("word {} does not evaluate to {}", p.format_word(&word), gamma.display(fq))));
        }
        Ok(word)
    }

    /// `gamma = x^(+-1) g0^t` for a generator `x`, if so.
    fn single_letter(&self, gamma: &QuatElem) -> Result<Option<Word>> {
        let alg = self.alg();
        let p = self.presentation()?;
        if let Some(t) = self.power_of(&p.g0, gamma, p.q as u64 - 1) {
            return Ok(Some(vec![(Gen::G0, t)]));
        }
        for gen in p.generators().into_iter().skip(1) {
            let x = p.element(gen)?;
            for e in [1, -1] {
                let xe = if e == 1 { alg.inverse(x)? } else { x.clone() };
                if let Some(t) = self.power_of(&p.g0, &alg.mul(&xe, gamma), p.q as u64 - 1) {
                    return Ok(Some(vec![(gen, e), (Gen::G0, t)]));
                }
            }
        }
        Ok(None)
    }

    fn power_of(&self, x: &QuatElem, y: &QuatElem, order: u64) -> Option<i64> {
        let alg = self.alg();
        let mut acc = QuatElem::one();
        for t in 0..order {
            if &acc == y {
                return Some(t as i64);
            }
            acc = alg.mul(&acc, x);
        }
        None
    }

    /// Expresses an element of the stabilizer of the base vertex.
    fn stabilizer_power(&self, rho: &QuatElem) -> Result<Word> {
        let p = self.presentation()?;
        let q = p.q as u64;
        if let Some(t) = self.power_of(&p.g0, rho, q - 1) {
            return Ok(vec![(Gen::G0, t)]);
        }
        if self.vertices[0].stability == Stability::Unstable {
            if let Some(t) = self.power_of(p.element(Gen::Vertex(0))?, rho, q * q - 1) {
                return Ok(vec![(Gen::Vertex(0), t)]);
            }
        }
        Err(Error::internal("residual element is not in the base stabilizer"))
    }
}
