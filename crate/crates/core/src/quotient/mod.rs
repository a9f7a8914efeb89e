//! The quotient graph `Gamma \ T` as an enhanced fundamental domain, the
//! reduction algorithm, a presentation of `Gamma` and structural checks.

mod io;
mod presentation;
mod reduce;
mod verify;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::homspace::{act_elem, end_and_classify, hom, HomSet, Stability};
use crate::quaternion::{AlgebraData, QuatElem};
use crate::tree::Vertex;

pub use io::FORMAT_VERSION;
pub use presentation::{Gen, Presentation, Word};
pub use verify::{diameter_bound_holds, g_of_r, improved_bound_holds, Check, StructureReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QVertex {
    pub vertex: Vertex,
    pub stability: Stability,
    /// Basis of `End(v)` for unstable vertices, empty for stable ones.
    pub end_basis: Vec<QuatElem>,
    /// Distance from the initial vertex inside the tree of representatives.
    pub level: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeLabel {
    /// an edge of the tree of representatives
    Tree,
    /// the reverse of a paired edge
    Opposite,
    /// The tree edge `(o, t)` starts in the tree of representatives and
    /// `g t` is a vertex of it.
    Pairing { g: QuatElem, tree_edge: (Vertex, Vertex) },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QEdge {
    pub src: usize,
    pub dst: usize,
    /// position among the parallel edges from `src` to `dst`
    pub index: usize,
    pub label: EdgeLabel,
}

#[derive(Debug)]
pub struct QuotientGraph {
    alg: Arc<AlgebraData>,
    pub vertices: Vec<QVertex>,
    pub edges: Vec<QEdge>,
    /// Number of passes of the level loop.
    pub levels: usize,
    index: HashMap<Vertex, usize>,
    presentation: OnceLock<Result<Presentation>>,
    moves: OnceLock<Result<reduce::Moves>>,
}

impl Clone for QuotientGraph {
    fn clone(&self) -> Self {
        Self::assemble(self.alg.clone(), self.vertices.clone(), self.edges.clone(), self.levels)
    }
}

impl PartialEq for QuotientGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
            && self.edges == other.edges
            && self.levels == other.levels
            && self.alg.alpha() == other.alg.alpha()
            && self.alg.ram() == other.alg.ram()
    }
}

impl QuotientGraph {
    fn assemble(alg: Arc<AlgebraData>, vertices: Vec<QVertex>, edges: Vec<QEdge>, levels: usize) -> Self {
        let index = vertices.iter().enumerate().map(|(i, v)| (v.vertex.clone(), i)).collect();
        QuotientGraph { alg, vertices, edges, levels, index, presentation: OnceLock::new(), moves: OnceLock::new() }
    }

    pub fn alg(&self) -> &Arc<AlgebraData> {
        &self.alg
    }

    /// The initial vertex always has id 0.
    pub fn initial_vertex(&self) -> &Vertex {
        &self.vertices[0].vertex
    }

    pub fn id_of(&self, v: &Vertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn degree(&self, id: usize) -> usize {
        self.edges.iter().filter(|e| e.src == id).count()
    }

    pub fn count(&self, st: Stability) -> usize {
        self.vertices.iter().filter(|v| v.stability == st).count()
    }

    /// Paired edges in edge order, i.e. the edges labelled `g_1, g_2, ...`.
    pub fn paired_edges(&self) -> impl Iterator<Item = &QEdge> {
        self.edges.iter().filter(|e| matches!(e.label, EdgeLabel::Pairing { .. }))
    }

    /// True for the two-vertex graph returned when both `L(0,0)` and `L(1,0)`
    /// are unstable.
    pub fn is_special_case(&self) -> bool {
        self.vertices.len() == 2 && self.vertices.iter().all(|v| v.stability == Stability::Unstable)
    }
}

/// Options for [`compute_quotient`].
#[derive(Clone, Copy, Debug, Default)]
pub struct ComputeOptions {
    /// Classify the vertices of a level in parallel (results are merged in
    /// list order, so the output does not depend on scheduling).
    pub parallel: bool,
}

struct Builder {
    vertices: Vec<QVertex>,
    edges: Vec<QEdge>,
    deg: Vec<usize>,
    index: HashMap<Vertex, usize>,
}

impl Builder {
    fn add_vertex(&mut self, vertex: Vertex, stability: Stability, end: &HomSet, level: usize) -> usize {
        let id = self.vertices.len();
        let end_basis = if stability == Stability::Unstable { end.basis.clone() } else { Vec::new() };
        self.index.insert(vertex.clone(), id);
        self.vertices.push(QVertex { vertex, stability, end_basis, level });
        self.deg.push(0);
        id
    }

    fn add_edge(&mut self, src: usize, dst: usize, label: EdgeLabel) {
        let index = self.edges.iter().filter(|e| e.src == src && e.dst == dst).count();
        self.edges.push(QEdge { src, dst, index, label });
        self.deg[src] += 1;
    }
}

/// Computes the quotient graph level by level from `L(0,0)` (or `L(1,0)`
/// if `L(0,0)` is unstable), identifying each new vertex with an earlier
/// vertex of the same level whenever a `Hom` between them exists.
pub fn compute_quotient(alg: Arc<AlgebraData>, opts: ComputeOptions) -> Result<QuotientGraph> {
    let q = alg.fq().q() as usize;
    let mut b = Builder { vertices: Vec::new(), edges: Vec::new(), deg: Vec::new(), index: HashMap::new() };

    let base = Vertex::base();
    let (end_base, st_base) = end_and_classify(&alg, &base)?;
    let (v0, end0) = if st_base == Stability::Unstable {
        let v1 = Vertex::on_baseline(1);
        let (end1, st1) = end_and_classify(&alg, &v1)?;
        if st1 == Stability::Unstable {
            b.add_vertex(v1, Stability::Unstable, &end1, 0);
            b.add_vertex(base, Stability::Unstable, &end_base, 1);
            b.add_edge(0, 1, EdgeLabel::Tree);
            b.add_edge(1, 0, EdgeLabel::Tree);
            return Ok(QuotientGraph::assemble(alg, b.vertices, b.edges, 0));
        }
        (v1, end1)
    } else {
        (base, end_base)
    };
    b.add_vertex(v0.clone(), Stability::Stable, &end0, 0);

    let fq = alg.fq().clone();
    let mut list: Vec<Option<(usize, Vertex)>> = v0.neighbors(&fq).into_iter().map(|w| Some((0, w))).collect();
    let mut levels = 0;
    while list.iter().any(|e| e.is_some()) {
        levels += 1;
        let mut next: Vec<Option<(usize, Vertex)>> = Vec::new();
        let mut next_index: HashMap<(usize, Vertex), usize> = HashMap::new();
        let classify = |e: &Option<(usize, Vertex)>| -> Result<Option<(HomSet, Stability)>> {
            e.as_ref().map(|(_, v)| end_and_classify(&alg, v)).transpose()
        };
        let ends: Vec<Option<(HomSet, Stability)>> = if opts.parallel {
            list.par_iter().map(classify).collect::<Result<_>>()?
        } else {
            list.iter().map(classify).collect::<Result<_>>()?
        };
        for i in 0..list.len() {
            let Some((vid, vp)) = list[i].clone() else { continue };
            let (end, st) = ends[i].as_ref().unwrap();
            if *st == Stability::Unstable {
                let id = b.add_vertex(vp, Stability::Unstable, end, levels);
                b.add_edge(vid, id, EdgeLabel::Tree);
                b.add_edge(id, vid, EdgeLabel::Tree);
                list[i] = None;
                continue;
            }
            let mut matched = false;
            for j in 0..i {
                let Some((_, wp)) = list[j].clone() else { continue };
                let h = hom(&alg, &vp, &wp)?;
                let Some(g) = h.basis.first().cloned() else { continue };
                let wid = b.index[&wp];
                let v = b.vertices[vid].vertex.clone();
                let gv = act_elem(&alg, &g, &v)?;
                b.add_edge(vid, wid, EdgeLabel::Pairing { g, tree_edge: (v, vp.clone()) });
                b.add_edge(wid, vid, EdgeLabel::Opposite);
                list[i] = None;
                let slot = next_index
                    .remove(&(wid, gv))
                    .ok_or_else(|| Error::internal("paired edge has no pending counterpart"))?;
                next[slot] = None;
                if b.deg[wid] == q + 1 {
                    list[j] = None;
                }
                matched = true;
                break;
            }
            if !matched {
                let parent = b.vertices[vid].vertex.clone();
                let id = b.add_vertex(vp.clone(), Stability::Stable, end, levels);
                b.add_edge(vid, id, EdgeLabel::Tree);
                b.add_edge(id, vid, EdgeLabel::Tree);
                for w in vp.neighbors(&fq) {
                    if w != parent {
                        next_index.insert((id, w.clone()), next.len());
                        next.push(Some((id, w)));
                    }
                }
            }
        }
        list = next;
    }
    Ok(QuotientGraph::assemble(alg, b.vertices, b.edges, levels))
}
