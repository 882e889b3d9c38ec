//! Builders for the known graph families. Each returns the graph together
//! with the intersection array its construction predicts; checking the one
//! against the other is left to the caller.

use std::collections::HashMap;

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::bigraph::{dbrg_check, BipartiteGraph, GraphError, IntersectionArray, NotDbrg, Side};
use crate::geometry::{self, GeomError, PointSet};
use crate::gf::{Field, GfError, Subspace, SubspaceIter};
use crate::perpsys::{perp_verify, PerpError, PerpSystem};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("hypothesis {condition} fails: {value}")]
    Hypothesis { condition: String, value: String },
    #[error("parent graph is not distance-biregular: {0}")]
    NotDbrg(#[from] NotDbrg),
    #[error(transparent)]
    Perp(#[from] PerpError),
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Where a graph came from: family name, parameters, and remarks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub family: String,
    #[serde(serialize_with = "as_map")]
    pub params: Vec<(String, String)>,
    pub notes: Vec<String>,
}

fn as_map<S: serde::Serializer>(p: &[(String, String)], s: S) -> Result<S::Ok, S::Error> {
    s.collect_map(p.iter().map(|(k, v)| (k, v)))
}

impl Provenance {
    fn new(family: &str) -> Provenance {
        Provenance {
            family: family.to_string(),
            params: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn param(mut self, name: &str, value: impl ToString) -> Provenance {
        self.params.push((name.to_string(), value.to_string()));
        self
    }

    fn note(mut self, s: impl Into<String>) -> Provenance {
        self.notes.push(s.into());
        self
    }
}

#[derive(Clone, Debug)]
pub struct ConstructionResult {
    pub graph: BipartiteGraph,
    pub predicted: IntersectionArray,
    pub provenance: Provenance,
}

fn qint(i: u64, q: u64) -> u64 {
    (0..i).map(|j| q.pow(j as u32)).sum()
}

/// `K_{l,k}`: `l` vertices of valency `k` in B, `k` of valency `l` in C.
pub fn complete_bipartite(k: u64, l: u64) -> Result<ConstructionResult, ConstructionError> {
    if k == 0 || l == 0 {
        return Err(ConstructionError::Precondition(format!("k = {k} and l = {l} must be positive")));
    }
    let mut edges = Vec::with_capacity((k * l) as usize);
    for b in 0..l as u32 {
        for c in 0..k as u32 {
            edges.push((b, c));
        }
    }
    let graph = BipartiteGraph::new(l as usize, k as usize, edges)?;
    // A class with a single vertex has covering radius 1 from the other side.
    let cb = if l == 1 { vec![1] } else { vec![1, k] };
    let cc = if k == 1 { vec![1] } else { vec![1, l] };
    let mut prov = Provenance::new("complete_bipartite").param("k", k).param("l", l);
    if k == 1 && l == 1 {
        prov = prov.note("single edge, diameter 1");
    } else if k == l {
        prov = prov.note("regular");
    }
    Ok(ConstructionResult {
        graph,
        predicted: IntersectionArray::new(k, cb, l, cc),
        provenance: prov,
    })
}

/// Doubled-Johnson style incidence of `k`-subsets and `(k+1)`-subsets of
/// an `n`-set.
pub fn bi_johnson(n: u64, k: u64) -> Result<ConstructionResult, ConstructionError> {
    if k == 0 || n < 2 * k + 2 {
        return Err(ConstructionError::Precondition(format!("need k >= 1 and n >= 2k+2, got n = {n}, k = {k}")));
    }
    if n > 20 {
        return Err(ConstructionError::Precondition(format!("n = {n} is too large (max 20)")));
    }
    let small = subsets(n as u32, k as u32);
    let large = subsets(n as u32, k as u32 + 1);
    let index: HashMap<u32, u32> = large.iter().enumerate().map(|(i, &m)| (m, i as u32)).collect();
    let mut edges = Vec::new();
    for (b, &m) in small.iter().enumerate() {
        for x in 0..n as u32 {
            if m & (1 << x) == 0 {
                edges.push((b as u32, index[&(m | 1 << x)]));
            }
        }
    }
    let graph = BipartiteGraph::new(small.len(), large.len(), edges)?;
    let predicted = paired_array(n - k, k + 1, |i| i);
    Ok(ConstructionResult {
        graph,
        predicted,
        provenance: Provenance::new("bi_johnson").param("n", n).param("k", k),
    })
}

/// Bitmasks of the `m`-subsets of `{0..n}` in increasing order.
fn subsets(n: u32, m: u32) -> Vec<u32> {
    (0u32..1 << n).filter(|x| x.count_ones() == m).collect()
}

/// `{vb; 1,1,f(2),f(2),...,f(k),f(k),f(k+1) | vc; 1,1,...,f(k+1),f(k+1)}`
/// where `vc = f(k+1)` in units of `f`.
fn paired_array(vb: u64, vc: u64, f: impl Fn(u64) -> u64) -> IntersectionArray {
    let k = vc - 1;
    let mut cb = Vec::new();
    let mut cc = Vec::new();
    for i in 1..=k + 1 {
        cc.push(f(i));
        cc.push(f(i));
        cb.push(f(i));
        if i <= k {
            cb.push(f(i));
        }
    }
    IntersectionArray::new(vb, cb, f(vc), cc)
}

/// Incidence of `k`-spaces and `(k+1)`-spaces of `F_q^n`.
pub fn bi_grassmann(n: u64, k: u64, q: u64) -> Result<ConstructionResult, ConstructionError> {
    if k == 0 || n < 2 * k + 2 {
        return Err(ConstructionError::Precondition(format!("need k >= 1 and n >= 2k+2, got n = {n}, k = {k}")));
    }
    let field = Field::of_order(q)?;
    let (n, k) = (n as usize, k as usize);
    let small: Vec<Subspace> = SubspaceIter::new(&field, n, k)?.collect();
    let large: Vec<Subspace> = SubspaceIter::new(&field, n, k + 1)?.collect();
    let index: HashMap<&Subspace, u32> = large.iter().enumerate().map(|(i, w)| (w, i as u32)).collect();
    let mut edges = Vec::new();
    for (b, u) in small.iter().enumerate() {
        // Projective points of V/U, as normalized nonzero coset representatives.
        for rep in u.cosets(&field) {
            if rep.iter().find(|x| !x.is_zero()) != Some(&crate::gf::Fq::ONE) {
                continue;
            }
            let w = u.join(&field, &Subspace::span(&field, n, [&rep])?)?;
            edges.push((b as u32, index[&w]));
        }
    }
    let graph = BipartiteGraph::new(small.len(), large.len(), edges)?;
    let (nn, kk) = (n as u64, k as u64);
    let predicted = paired_array(qint(nn - kk, q), kk + 1, |i| qint(i, q));
    Ok(ConstructionResult {
        graph,
        predicted,
        provenance: Provenance::new("bi_grassmann")
            .param("n", n)
            .param("k", k)
            .param("q", q),
    })
}

/// Vectors of `F_q^n` against all cosets of the given subspaces. Coset
/// `c` of member `j` is C-vertex `j * q^(n-dim) + c`.
fn coset_graph(field: &Field, n: usize, members: &[Subspace]) -> Result<BipartiteGraph, ConstructionError> {
    let q = field.q() as u64;
    let nv = q.pow(n as u32);
    let per = members.first().map_or(1, |m| m.coset_count(field));
    let mut edges = Vec::with_capacity(nv as usize * members.len());
    for b in 0..nv {
        let v = field.vector(n, b);
        for (j, m) in members.iter().enumerate() {
            let c = j as u64 * per + m.coset_index(field, &v)?;
            edges.push((b as u32, c as u32));
        }
    }
    Ok(BipartiteGraph::new(nv as usize, members.len() * per as usize, edges)?)
}

/// The perp system of lines dual to a maximal arc in `PG(2, q)`.
pub fn maximal_arc_system(arc: &PointSet) -> Result<PerpSystem, ConstructionError> {
    if arc.ambient() != 3 || arc.dim() != 1 {
        return Err(ConstructionError::Precondition("expected a point set of PG(2, q)".into()));
    }
    Ok(perp_verify(arc.field(), 3, 1, arc.dualize().into_members())?)
}

/// Vectors of `V` against the cosets of the members of a perp system.
pub fn gen_delorme_graph(p: &PerpSystem) -> Result<ConstructionResult, ConstructionError> {
    let field = p.field();
    let q = field.q() as u64;
    let (n, k, d, s) = (p.n() as u32, p.k() as u32, p.d() as u64, p.s() as u64);
    let top = q.pow(n - 2 * k) * (s - 1);
    if top % d != 0 {
        return Err(ConstructionError::Precondition(format!("q^(n-2k)(s-1) = {top} is not divisible by d = {d}")));
    }
    let graph = coset_graph(field, p.n(), p.members())?;
    let qk = q.pow(n - k);
    let predicted = IntersectionArray::diameter_four(s, d, top / d, qk, q.pow(n - 2 * k), s - 1);
    Ok(ConstructionResult {
        graph,
        predicted,
        provenance: Provenance::new("gen_delorme")
            .param("q", q)
            .param("n", n)
            .param("k", k)
            .param("d", d)
            .param("s", s),
    })
}

/// Points of `F_q^6` against cosets of the cone generators in one family.
pub fn cone_graph(q: u64) -> Result<ConstructionResult, ConstructionError> {
    if q > 4 {
        return Err(ConstructionError::Precondition(format!("q = {q} exceeds 4")));
    }
    let field = Field::of_order(q)?;
    let (_, same) = geometry::cone_spaces(&field)?;
    let graph = coset_graph(&field, 6, same.members())?;
    let f = qint(4, q);
    let predicted = IntersectionArray::diameter_four(f, q + 1, q * q, q.pow(3), q, q * q + q);
    Ok(ConstructionResult {
        graph,
        predicted,
        provenance: Provenance::new("cone_graph").param("q", q).param("generators", same.len()),
    })
}

/// Affine points whose direction from the origin is exterior to a dual
/// hyperoval, against the affine planes on its lines that avoid the origin.
pub fn hyperoval_affine_graph(q: u64) -> Result<ConstructionResult, ConstructionError> {
    if q < 4 || !q.is_power_of_two() {
        return Err(ConstructionError::Precondition(format!("q = {q} must be 2^m with m >= 2")));
    }
    let field = Field::of_order(q)?;
    let lines = geometry::hyperoval(&field)?.dualize().into_members();
    let per = q;
    let mut bs = Vec::new();
    let mut edges = Vec::new();
    for idx in 1..q.pow(3) {
        let v = field.vector(3, idx);
        if lines.iter().any(|l| l.contains(&field, &v)) {
            continue;
        }
        let b = bs.len() as u32;
        bs.push(idx);
        for (j, l) in lines.iter().enumerate() {
            // Coset 0 is the line itself, which v avoids.
            let c = l.coset_index(&field, &v)?;
            edges.push((b, (j as u64 * (per - 1) + c - 1) as u32));
        }
    }
    let graph = BipartiteGraph::new(bs.len(), lines.len() * (per - 1) as usize, edges)?;
    let predicted = IntersectionArray::diameter_four(q + 2, 2, q * (q + 1) / 4, q * (q - 1) / 2, q / 2, q + 1);
    Ok(ConstructionResult {
        graph,
        predicted,
        provenance: Provenance::new("hyperoval_affine").param("q", q),
    })
}

/// Quantities governing the local-graph construction, computed from an
/// array oriented so that the base vertex lies in class C.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalHypotheses {
    pub delta3: Ratio<i128>,
    pub gamma3: Ratio<i128>,
    pub predicted: IntersectionArray,
}

fn hyp(condition: &str, value: impl ToString) -> ConstructionError {
    ConstructionError::Hypothesis {
        condition: condition.to_string(),
        value: value.to_string(),
    }
}

/// Evaluates the hypotheses in order: `Delta_3(B) = 0`, `c2B > gamma_3`,
/// `b3C > c2B - gamma_3`, integrality of the predicted entries, and finally
/// diameter four.
pub fn local_hypotheses(a: &IntersectionArray) -> Result<LocalHypotheses, ConstructionError> {
    use Side::{B, C};
    if a.radius(B) < 4 || a.radius(C) < 4 {
        return Err(hyp("diameter 4", format!("covering radii {} and {}", a.radius(B), a.radius(C))));
    }
    let one = Ratio::from_integer(1);
    let (c2b, c3b) = (a.cq(B, 2), a.cq(B, 3));
    let (c2c, c3c, c4c) = (a.cq(C, 2), a.cq(C, 3), a.cq(C, 4));
    let (b2c, b3c) = (a.bq(C, 2), a.bq(C, 3));
    let den = b3c * (c4c - one) + c3c * (b2c - one);
    let delta3 = (b2c - one) * (c4c - one) - den / c2b * (c2c - one);
    if delta3 != Ratio::from_integer(0) {
        return Err(hyp("Delta_3(B) = 0", delta3));
    }
    if den == Ratio::from_integer(0) {
        return Err(hyp("gamma_3 defined", "zero denominator"));
    }
    let gamma3 = c2b * c3c * (b2c - one) / den;
    if c2b <= gamma3 {
        return Err(hyp("c2B > gamma_3", format!("c2B = {c2b}, gamma_3 = {gamma3}")));
    }
    let step = c2b - gamma3;
    if b3c <= step {
        return Err(hyp("b3C > c2B - gamma_3", format!("b3C = {b3c}, c2B - gamma_3 = {step}")));
    }
    let c3new = step * c3b / c2c;
    if !step.is_integer() || !c3new.is_integer() {
        return Err(hyp("integral entries", format!("c2 = {step}, c3 = {c3new}")));
    }
    if a.radius(B) != 4 || a.radius(C) != 4 {
        return Err(hyp("diameter 4", format!("covering radii {} and {}", a.radius(B), a.radius(C))));
    }
    let b3 = b3c.to_integer() as u64;
    let predicted = IntersectionArray::diameter_four(
        b3,
        step.to_integer() as u64,
        c3b.to_integer() as u64,
        a.l,
        c2c.to_integer() as u64,
        c3new.to_integer() as u64,
    );
    Ok(LocalHypotheses {
        delta3,
        gamma3,
        predicted,
    })
}

/// Subgraph induced on the vertices at distance 3 and 4 from `z`. Class B
/// of the output is the distance-3 layer. The parent is verified first.
pub fn derived_local_graph(g: &BipartiteGraph, z: usize) -> Result<(ConstructionResult, LocalHypotheses), ConstructionError> {
    if z >= g.order() {
        return Err(ConstructionError::Precondition(format!("vertex {z} out of range")));
    }
    let report = dbrg_check(g)?;
    let zs = g.side(z);
    // The base vertex's class plays C.
    let oriented = match zs {
        Side::C => report.array.clone(),
        Side::B => report.array.swapped(),
    };
    let h = local_hypotheses(&oriented)?;
    let dist = g.distances(z);
    let keep: Vec<usize> = (0..g.order()).filter(|&v| dist[v] == 3 || dist[v] == 4).collect();
    let sub = g.induced(&keep)?;
    let graph = match zs {
        Side::C => sub,
        Side::B => sub.swapped(),
    };
    let result = ConstructionResult {
        graph,
        predicted: h.predicted.clone(),
        provenance: Provenance::new("derived_local")
            .param("parent", &report.array)
            .param("z", z)
            .param("z_side", zs)
            .param("gamma3", h.gamma3),
    };
    Ok((result, h))
}
