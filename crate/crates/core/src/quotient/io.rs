use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{EdgeLabel, QEdge, QVertex, QuotientGraph};
use crate::algebra::{format_poly, parse_poly, FieldSpec, Fq, Poly};
use crate::error::{Error, Result};
use crate::homspace::Stability;
use crate::quaternion::{AlgebraData, QuatElem, RamificationSet};
use crate::tree::Vertex;

/// Bumped whenever the graph output or its serialization changes.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    version: u32,
    q: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    modulus: Option<Vec<u32>>,
    primes: Vec<String>,
    alpha: String,
    epsilon: String,
    nu: String,
    levels: usize,
    initial_vertex: String,
    vertices: Vec<VertexJson>,
    edges: Vec<EdgeJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexJson {
    id: usize,
    nf: String,
    stable: bool,
    level: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    end_basis: Option<Vec<QuatJson>>,
}

/// Four coefficient arrays (constant term first), field elements by index.
type QuatJson = [Vec<u32>; 4];

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeJson {
    src: usize,
    dst: usize,
    index: usize,
    label: LabelJson,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum LabelJson {
    Plain(String),
    Pairing { pairing: QuatJson, tree_edge: [String; 2] },
}

fn quat_to_json(x: &QuatElem) -> QuatJson {
    x.0.clone().map(|p| p.coeffs().iter().map(|c| c.index()).collect())
}

fn quat_from_json(x: &QuatJson, fq: &Fq) -> Result<QuatElem> {
    let mut out = QuatElem::zero();
    for (k, cs) in x.iter().enumerate() {
        let coeffs = cs
            .iter()
            .map(|&i| fq.element(i).ok_or_else(|| Error::Parse(format!("field element index {i} out of range"))))
            .collect::<Result<Vec<_>>>()?;
        out.0[k] = Poly::from_coeffs(coeffs);
    }
    Ok(out)
}

impl QuotientGraph {
    pub fn to_json(&self) -> String {
        let alg = self.alg();
        let fq = alg.fq();
        let spec = fq.spec();
        let nf = |v: &Vertex| v.display(fq).to_string();
        let doc = GraphJson {
            version: FORMAT_VERSION,
            q: fq.q(),
            modulus: (spec.e > 1).then(|| spec.modulus.clone()),
            primes: alg.ram().primes().iter().map(|p| format_poly(p, fq)).collect(),
            alpha: format_poly(alg.alpha(), fq),
            epsilon: format_poly(alg.eps(), fq),
            nu: format_poly(alg.nu(), fq),
            levels: self.levels,
            initial_vertex: nf(self.initial_vertex()),
            vertices: self
                .vertices
                .iter()
                .enumerate()
                .map(|(id, v)| VertexJson {
                    id,
                    nf: nf(&v.vertex),
                    stable: v.stability == Stability::Stable,
                    level: v.level,
                    end_basis: (v.stability == Stability::Unstable).then(|| v.end_basis.iter().map(quat_to_json).collect()),
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    src: e.src,
                    dst: e.dst,
                    index: e.index,
                    label: match &e.label {
                        EdgeLabel::Tree => LabelJson::Plain("tree".into()),
                        EdgeLabel::Opposite => LabelJson::Plain("opposite".into()),
                        EdgeLabel::Pairing { g, tree_edge: (o, t) } => {
                            LabelJson::Pairing { pairing: quat_to_json(g), tree_edge: [nf(o), nf(t)] }
                        }
                    },
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("graph serialization cannot fail");
        s.push('\n');
        s
    }

    /// Reads a graph written by [`Self::to_json`], rebuilding and checking
    /// the algebra it was computed for.
    pub fn from_json(s: &str) -> Result<QuotientGraph> {
        let doc: GraphJson = serde_json::from_str(s).map_err(|e| Error::Parse(format!("graph JSON: {e}")))?;
        if doc.version != FORMAT_VERSION {
            return Err(Error::invalid(format!("graph format version {} (expected {FORMAT_VERSION})", doc.version)));
        }
        let fq = Fq::new(FieldSpec::from_q(doc.q, doc.modulus.clone())?)?;
        let primes = doc.primes.iter().map(|p| parse_poly(p, &fq)).collect::<Result<Vec<_>>>()?;
        let ram = RamificationSet::new(&fq, &primes)?;
        let alg = AlgebraData::with_alpha(&fq, ram, parse_poly(&doc.alpha, &fq)?)?;
        if &parse_poly(&doc.epsilon, &fq)? != alg.eps() || &parse_poly(&doc.nu, &fq)? != alg.nu() {
            return Err(Error::invalid("epsilon or nu does not match the rebuilt algebra"));
        }
        let mut vertices = Vec::new();
        for (i, v) in doc.vertices.iter().enumerate() {
            if v.id != i {
                return Err(Error::invalid("vertex ids must be 0, 1, 2, ..."));
            }
            let end_basis = match (&v.end_basis, v.stable) {
                (None, true) => Vec::new(),
                (Some(b), false) => b.iter().map(|x| quat_from_json(x, &fq)).collect::<Result<_>>()?,
                _ => return Err(Error::invalid("end_basis must be present exactly for unstable vertices")),
            };
            let stability = if v.stable { Stability::Stable } else { Stability::Unstable };
            vertices.push(QVertex { vertex: Vertex::parse(&v.nf, &fq)?, stability, end_basis, level: v.level });
        }
        let n = vertices.len();
        if n == 0 || Vertex::parse(&doc.initial_vertex, &fq)? != vertices[0].vertex {
            return Err(Error::invalid("initial_vertex must be vertex 0"));
        }
        let mut edges = Vec::new();
        for e in &doc.edges {
            if e.src >= n || e.dst >= n {
                return Err(Error::invalid("edge endpoint out of range"));
            }
            let label = match &e.label {
                LabelJson::Plain(s) if s == "tree" => EdgeLabel::Tree,
                LabelJson::Plain(s) if s == "opposite" => EdgeLabel::Opposite,
                LabelJson::Plain(s) => return Err(Error::Parse(format!("unknown edge label {s:?}"))),
                LabelJson::Pairing { pairing, tree_edge: [o, t] } => EdgeLabel::Pairing {
                    g: quat_from_json(pairing, &fq)?,
                    tree_edge: (Vertex::parse(o, &fq)?, Vertex::parse(t, &fq)?),
                },
            };
            edges.push(QEdge { src: e.src, dst: e.dst, index: e.index, label });
        }
        Ok(QuotientGraph::assemble(Arc::new(alg), vertices, edges, doc.levels))
    }

    /// Graphviz rendering: stable vertices filled, terminal vertices open,
    /// paired edges annotated with their generator names.
    pub fn to_dot(&self) -> String {
        let fq = self.alg().fq();
        let mut s = String::from("graph quotient {\n  node [shape=circle, label=\"\", width=0.25];\n");
        for (id, v) in self.vertices.iter().enumerate() {
            let style = match v.stability {
                Stability::Stable => "style=filled, fillcolor=black",
                Stability::Unstable => "style=solid",
            };
            writeln!(s, "  v{id} [{style}, tooltip=\"{}\"];", v.vertex.display(fq)).unwrap();
        }
        let mut k = 0;
        for e in &self.edges {
            match e.label {
                EdgeLabel::Tree if e.src < e.dst => writeln!(s, "  v{} -- v{};", e.src, e.dst).unwrap(),
                EdgeLabel::Pairing { .. } => {
                    k += 1;
                    writeln!(s, "  v{} -- v{} [style=dashed, label=\"g{k}\"];", e.src, e.dst).unwrap()
                }
                _ => {}
            }
        }
        s.push_str("}\n");
        s
    }

    /// A plain-text summary: algebra, vertices and edges.
    pub fn to_text(&self) -> String {
        let alg = self.alg();
        let fq = alg.fq();
        let mut s = String::new();
        let primes: Vec<String> = alg.ram().primes().iter().map(|p| format_poly(p, fq)).collect();
        writeln!(s, "q = {}, R = {{{}}}", fq.q(), primes.join(", ")).unwrap();
        writeln!(s, "alpha = {}, epsilon = {}, nu = {}", format_poly(alg.alpha(), fq), format_poly(alg.eps(), fq), format_poly(alg.nu(), fq)).unwrap();
        writeln!(
            s,
            "{} vertices ({} terminal), {} paired edges, {} levels",
            self.vertices.len(),
            self.count(Stability::Unstable),
            self.paired_edges().count(),
            self.levels
        )
        .unwrap();
        for (id, v) in self.vertices.iter().enumerate() {
            let kind = match v.stability {
                Stability::Stable => "stable",
                Stability::Unstable => "terminal",
            };
            writeln!(s, "v{id} {} {kind} level {}", v.vertex.display(fq), v.level).unwrap();
        }
        let mut k = 0;
        for e in &self.edges {
            match &e.label {
                EdgeLabel::Tree if e.src < e.dst => writeln!(s, "v{} -- v{}", e.src, e.dst).unwrap(),
                EdgeLabel::Pairing { g, .. } => {
                    k += 1;
                    writeln!(s, "v{} -- v{} g{k} = {}", e.src, e.dst, g.display(fq)).unwrap()
                }
                _ => {}
            }
        }
        s
    }
}
