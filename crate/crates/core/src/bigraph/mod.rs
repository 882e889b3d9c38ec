//! Bipartite graphs and definition-level checks of distance-biregularity:
//! distance partitions, local intersection numbers, halved graphs and
//! strongly regular parameters, triple intersection counts.

mod array;
mod halved;

pub use array::{ArrayParseError, IntersectionArray, Side};
pub use halved::{gram_check, halved_graphs, srg_check, subdivision, SimpleGraph, SrgError};

use std::collections::{HashSet, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({b}, {c}) out of range for classes of size {nb} and {nc}")]
    OutOfRange { b: usize, c: usize, nb: usize, nc: usize },
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("graph has an empty class")]
    Empty,
    #[error("vertex {0} cannot reach vertex {1}")]
    Disconnected(usize, usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A bipartite graph with classes `B = {0..nB}` and `C = {0..nC}`.
/// Vertices are also numbered globally: B first, then C.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    nb: usize,
    nc: usize,
    edges: Vec<(u32, u32)>,
    adj: Vec<Vec<u32>>,
    labels: Option<Vec<String>>,
}

impl BipartiteGraph {
    /// Builds a graph from `(b, c)` edges; edge order is kept for output.
    pub fn new(nb: usize, nc: usize, edges: Vec<(u32, u32)>) -> Result<BipartiteGraph, GraphError> {
        let mut seen = HashSet::with_capacity(edges.len());
        let mut adj = vec![Vec::new(); nb + nc];
        for &(b, c) in &edges {
            let (b, c) = (b as usize, c as usize);
            if b >= nb || c >= nc {
                return Err(GraphError::OutOfRange { b, c, nb, nc });
            }
            if !seen.insert((b, c)) {
                return Err(GraphError::DuplicateEdge(b, c));
            }
            adj[b].push((nb + c) as u32);
            adj[nb + c].push(b as u32);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(BipartiteGraph {
            nb,
            nc,
            edges,
            adj,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> BipartiteGraph {
        assert_eq!(labels.len(), self.nb + self.nc, "one label per vertex");
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn nb(&self) -> usize {
        self.nb
    }

    pub fn nc(&self) -> usize {
        self.nc
    }

    pub fn order(&self) -> usize {
        self.nb + self.nc
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Neighbours of a global vertex, sorted.
    pub fn neighbours(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn side(&self, v: usize) -> Side {
        if v < self.nb {
            Side::B
        } else {
            Side::C
        }
    }

    /// Global number of the `i`-th vertex of `side`.
    pub fn vertex(&self, side: Side, i: usize) -> usize {
        match side {
            Side::B => i,
            Side::C => self.nb + i,
        }
    }

    pub fn class(&self, side: Side) -> std::ops::Range<usize> {
        match side {
            Side::B => 0..self.nb,
            Side::C => self.nb..self.nb + self.nc,
        }
    }

    /// BFS distances from `v`; `u32::MAX` marks unreachable vertices.
    pub fn distances(&self, v: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.order()];
        let mut queue = VecDeque::new();
        dist[v] = 0;
        queue.push_back(v);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dist[u] + 1;
                    queue.push_back(w as usize);
                }
            }
        }
        dist
    }

    /// Cells `N_0(v), ..., N_e(v)` of the distance partition.
    pub fn distance_partition(&self, v: usize) -> Result<DistancePartition, GraphError> {
        let dist = self.distances(v);
        if let Some(u) = dist.iter().position(|&d| d == u32::MAX) {
            return Err(GraphError::Disconnected(v, u));
        }
        let e = *dist.iter().max().expect("nonempty") as usize;
        let mut cells = vec![Vec::new(); e + 1];
        for (u, &d) in dist.iter().enumerate() {
            cells[d as usize].push(u as u32);
        }
        Ok(DistancePartition { source: v, cells })
    }

    /// Intersection numbers at `v` if its distance partition is equitable.
    pub fn local_profile(&self, v: usize) -> Result<Result<LocalProfile, LocalWitness>, GraphError> {
        let dist = self.distances(v);
        if let Some(u) = dist.iter().position(|&d| d == u32::MAX) {
            return Err(GraphError::Disconnected(v, u));
        }
        let e = *dist.iter().max().expect("nonempty") as usize;
        let mut c: Vec<Option<(u64, usize)>> = vec![None; e + 1];
        let mut b: Vec<Option<(u64, usize)>> = vec![None; e + 1];
        for u in 0..self.order() {
            let du = dist[u];
            let (mut cu, mut bu) = (0u64, 0u64);
            for &w in &self.adj[u] {
                let dw = dist[w as usize];
                if dw + 1 == du {
                    cu += 1;
                } else if dw == du + 1 {
                    bu += 1;
                }
            }
            let i = du as usize;
            for (kind, slot, val) in [('c', &mut c[i], cu), ('b', &mut b[i], bu)] {
                match slot {
                    None => *slot = Some((val, u)),
                    Some((x, first)) if *x != val => {
                        return Ok(Err(LocalWitness {
                            source: v,
                            distance: i,
                            kind,
                            u: *first,
                            w: u,
                            value_u: *x,
                            value_w: val,
                        }))
                    }
                    _ => {}
                }
            }
        }
        Ok(Ok(LocalProfile {
            c: c[1..].iter().map(|x| x.expect("cell").0).collect(),
            b: b[..e].iter().map(|x| x.expect("cell").0).collect(),
        }))
    }

    /// Valency of each side if the graph is semiregular.
    pub fn semiregular(&self) -> Result<(u64, u64), SemiregularWitness> {
        let mut out = [0u64; 2];
        for (slot, side) in [Side::B, Side::C].into_iter().enumerate() {
            let range = self.class(side);
            let first = range.start;
            let k = self.adj.get(first).map_or(0, |a| a.len());
            if let Some(v) = range.clone().find(|&v| self.adj[v].len() != k) {
                return Err(SemiregularWitness {
                    side,
                    u: first,
                    degree_u: k,
                    w: v,
                    degree_w: self.adj[v].len(),
                });
            }
            out[slot] = k as u64;
        }
        Ok((out[0], out[1]))
    }

    /// Length of a shortest cycle, or `None` for a forest.
    pub fn girth(&self) -> Option<usize> {
        (0..self.order())
            .into_par_iter()
            .filter_map(|v| {
                let mut dist = vec![u32::MAX; self.order()];
                let mut parent = vec![u32::MAX; self.order()];
                let mut queue = VecDeque::new();
                dist[v] = 0;
                queue.push_back(v);
                let mut best = usize::MAX;
                while let Some(u) = queue.pop_front() {
                    if 2 * dist[u] as usize + 1 >= best {
                        break;
                    }
                    for &w in &self.adj[u] {
                        let w = w as usize;
                        if dist[w] == u32::MAX {
                            dist[w] = dist[u] + 1;
                            parent[w] = u as u32;
                            queue.push_back(w);
                        } else if parent[u] != w as u32 {
                            best = best.min((dist[u] + dist[w] + 1) as usize);
                        }
                    }
                }
                (best != usize::MAX).then_some(best)
            })
            .min()
    }

    /// Subgraph induced on the given global vertices. Classes are kept;
    /// vertices are renumbered in increasing order within each class.
    pub fn induced(&self, keep: &[usize]) -> Result<BipartiteGraph, GraphError> {
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut map = vec![u32::MAX; self.order()];
        let (mut nb, mut nc) = (0u32, 0u32);
        for &v in &keep {
            if v < self.nb {
                map[v] = nb;
                nb += 1;
            } else {
                map[v] = nc;
                nc += 1;
            }
        }
        let mut edges = Vec::new();
        for &(b, c) in &self.edges {
            let (gb, gc) = (b as usize, self.nb + c as usize);
            if map[gb] != u32::MAX && map[gc] != u32::MAX {
                edges.push((map[gb], map[gc]));
            }
        }
        let g = BipartiteGraph::new(nb as usize, nc as usize, edges)?;
        Ok(match &self.labels {
            Some(l) => {
                let (bs, cs): (Vec<usize>, Vec<usize>) = keep.iter().partition(|&&v| v < self.nb);
                let labels = bs.iter().chain(&cs).map(|&v| l[v].clone()).collect();
                g.with_labels(labels)
            }
            None => g,
        })
    }

    /// The same graph with the classes exchanged.
    pub fn swapped(&self) -> BipartiteGraph {
        let edges = self.edges.iter().map(|&(b, c)| (c, b)).collect();
        let g = BipartiteGraph::new(self.nc, self.nb, edges).expect("valid");
        match &self.labels {
            Some(l) => {
                let labels = l[self.nb..].iter().chain(&l[..self.nb]).cloned().collect();
                g.with_labels(labels)
            }
            None => g,
        }
    }

    /// Text form: a header `B=<nB> C=<nC>` and one `b c` edge per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("B={} C={}\n", self.nb, self.nc);
        for &(b, c) in &self.edges {
            s.push_str(&format!("{b} {c}\n"));
        }
        s
    }

    pub fn parse(text: &str) -> Result<BipartiteGraph, GraphError> {
        let perr = |line: usize, msg: &str| GraphError::Parse {
            line,
            msg: msg.to_string(),
        };
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| perr(1, "missing header"))?;
        let mut parts = header.split_whitespace();
        let mut field = |name: &str| -> Result<usize, GraphError> {
            parts
                .next()
                .and_then(|p| p.strip_prefix(name))
                .and_then(|p| p.parse().ok())
                .ok_or_else(|| perr(1, "header must be `B=<nB> C=<nC>`"))
        };
        let nb = field("B=")?;
        let nc = field("C=")?;
        let mut edges = Vec::new();
        for (i, line) in lines {
            let mut it = line.split_whitespace();
            let b = it.next().and_then(|x| x.parse::<u32>().ok());
            let c = it.next().and_then(|x| x.parse::<u32>().ok());
            match (b, c, it.next()) {
                (Some(b), Some(c), None) => {
                    if b as usize >= nb || c as usize >= nc {
                        return Err(perr(i + 1, "vertex index out of range"));
                    }
                    edges.push((b, c));
                }
                _ => return Err(perr(i + 1, "expected `<b-index> <c-index>`")),
            }
        }
        BipartiteGraph::new(nb, nc, edges).map_err(|e| match e {
            GraphError::DuplicateEdge(b, c) => {
                let line = 2 + text
                    .lines()
                    .skip(1)
                    .position(|l| l.split_whitespace().eq([b.to_string(), c.to_string()].iter().map(|s| s.as_str())))
                    .unwrap_or(0);
                perr(line, &format!("duplicate edge ({b}, {c})"))
            }
            other => other,
        })
    }
}

/// Cells of the distance partition from `source`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistancePartition {
    pub source: usize,
    pub cells: Vec<Vec<u32>>,
}

impl DistancePartition {
    pub fn eccentricity(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.cells.iter().map(|c| c.len()).collect()
    }
}

/// Local intersection numbers: `c_1..c_e` and `b_0..b_(e-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalProfile {
    pub c: Vec<u64>,
    pub b: Vec<u64>,
}

/// Two vertices at the same distance from `source` with different `c` or
/// `b` counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalWitness {
    pub source: usize,
    pub distance: usize,
    pub kind: char,
    pub u: usize,
    pub w: usize,
    pub value_u: u64,
    pub value_w: u64,
}

impl fmt::Display for LocalWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "from vertex {}: vertices {} and {} at distance {} have {}-values {} and {}",
            self.source, self.u, self.w, self.distance, self.kind, self.value_u, self.value_w
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemiregularWitness {
    pub side: Side,
    pub u: usize,
    pub degree_u: usize,
    pub w: usize,
    pub degree_w: usize,
}

/// Why a graph is not distance-biregular.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NotDbrg {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("distance partition not equitable: {0}")]
    NotLocal(LocalWitness),
    #[error("vertices {u} and {w} of class {side} have different profiles ({pu:?} vs {pw:?})")]
    ProfileMismatch {
        side: Side,
        u: usize,
        w: usize,
        pu: LocalProfile,
        pw: LocalProfile,
    },
}

/// Outcome of a successful distance-biregularity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DbrgReport {
    pub array: IntersectionArray,
    /// Both classes share one profile (the graph is distance-regular).
    pub regular: bool,
    pub profile_b: LocalProfile,
    pub profile_c: LocalProfile,
}

/// Checks distance-biregularity by computing every vertex's distance
/// partition. The first failing vertex in numbering order is reported.
pub fn dbrg_check(g: &BipartiteGraph) -> Result<DbrgReport, NotDbrg> {
    if g.nb == 0 || g.nc == 0 {
        return Err(GraphError::Empty.into());
    }
    let profiles: Vec<Result<Result<LocalProfile, LocalWitness>, GraphError>> = (0..g.order())
        .into_par_iter()
        .map(|v| g.local_profile(v))
        .collect();
    let mut firsts: [Option<(usize, LocalProfile)>; 2] = [None, None];
    for (v, p) in profiles.into_iter().enumerate() {
        let p = p?.map_err(NotDbrg::NotLocal)?;
        let side = g.side(v);
        let slot = &mut firsts[side as usize];
        match slot {
            None => *slot = Some((v, p)),
            Some((u, pu)) if *pu != p => {
                return Err(NotDbrg::ProfileMismatch {
                    side,
                    u: *u,
                    w: v,
                    pu: pu.clone(),
                    pw: p,
                })
            }
            _ => {}
        }
    }
    let [Some((_, pb)), Some((_, pc))] = firsts else {
        unreachable!("both classes are nonempty")
    };
    let array = IntersectionArray::new(pb.b[0], pb.c.clone(), pc.b[0], pc.c.clone());
    let (db, dc) = (pb.c.len(), pc.c.len());
    debug_assert!(dc + 1 >= db && db + 1 >= dc, "covering radii differ by more than one");
    debug_assert!(
        array.diameter() % 2 == 0 || array.k == array.l,
        "odd diameter forces equal valencies"
    );
    Ok(DbrgReport {
        regular: array.is_regular(),
        array,
        profile_b: pb,
        profile_c: pc,
    })
}

/// Verdict of the `c_3` shortcut for diameter-four graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShortcutVerdict {
    /// Hypotheses hold; the full array follows.
    Applies(IntersectionArray),
    /// The strict inequality fails, so nothing follows.
    Inconclusive(String),
    /// A structural hypothesis fails on the graph.
    HypothesisFailed(String),
}

/// If every B vertex has profile `{k; 1, c2B, c3B, k}`, every C vertex has
/// `c_2 = c2C`, and `k c2C > c2B c3B`, predicts the full array with
/// `c3C = c2B c3B / c2C`.
pub fn c3_shortcut_check(g: &BipartiteGraph, k: u64, c2b: u64, c3b: u64, c2c: u64) -> ShortcutVerdict {
    if k * c2c <= c2b * c3b || c2c == 0 || (c2b * c3b) % c2c != 0 {
        return ShortcutVerdict::Inconclusive(format!(
            "need k > c2B c3B / c2C, have {k} vs {c2b}*{c3b}/{c2c}"
        ));
    }
    let (kk, l) = match g.semiregular() {
        Ok(x) => x,
        Err(w) => return ShortcutVerdict::HypothesisFailed(format!("not semiregular: {w:?}")),
    };
    if kk != k {
        return ShortcutVerdict::HypothesisFailed(format!("B valency {kk} != {k}"));
    }
    let want = vec![1, c2b, c3b, k];
    for v in g.class(Side::B) {
        match g.local_profile(v) {
            Ok(Ok(p)) if p.c == want => {}
            Ok(Ok(p)) => {
                return ShortcutVerdict::HypothesisFailed(format!("B vertex {v} has c = {:?}", p.c))
            }
            Ok(Err(w)) => return ShortcutVerdict::HypothesisFailed(w.to_string()),
            Err(e) => return ShortcutVerdict::HypothesisFailed(e.to_string()),
        }
    }
    for v in g.class(Side::C) {
        let dist = g.distances(v);
        for u in 0..g.order() {
            if dist[u] == 2 {
                let cu = g.adj[u].iter().filter(|&&w| dist[w as usize] == 1).count() as u64;
                if cu != c2c {
                    return ShortcutVerdict::HypothesisFailed(format!(
                        "C vertex {v}: vertex {u} at distance 2 has {cu} common neighbours, not {c2c}"
                    ));
                }
            }
        }
    }
    ShortcutVerdict::Applies(IntersectionArray::diameter_four(k, c2b, c3b, l, c2c, c2b * c3b / c2c))
}

/// All values of `|N(x) ∩ N(y) ∩ N_(i-1)(z)|` over `x` in `side`, `y` at
/// distance 2 from `x`, and `z` at distance `i` from both. Exhaustive.
pub fn triple_counts(g: &BipartiteGraph, side: Side, i: usize) -> Vec<u64> {
    let all: Vec<Vec<u32>> = (0..g.order()).into_par_iter().map(|v| g.distances(v)).collect();
    let vals: HashSet<u64> = g
        .class(side)
        .into_par_iter()
        .flat_map_iter(|x| {
            let dx = &all[x];
            let mut out = HashSet::new();
            for y in 0..g.order() {
                if dx[y] != 2 {
                    continue;
                }
                let common: Vec<u32> = g.adj[x]
                    .iter()
                    .copied()
                    .filter(|w| g.adj[y].binary_search(w).is_ok())
                    .collect();
                for z in 0..g.order() {
                    if dx[z] as usize == i && all[y][z] as usize == i {
                        let dz = &all[z];
                        let cnt = common
                            .iter()
                            .filter(|&&w| dz[w as usize] as usize + 1 == i)
                            .count();
                        out.insert(cnt as u64);
                    }
                }
            }
            out
        })
        .collect();
    let mut v: Vec<u64> = vals.into_iter().collect();
    v.sort_unstable();
    v
}
