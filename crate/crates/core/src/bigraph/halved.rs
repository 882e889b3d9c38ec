use rayon::prelude::*;
use thiserror::Error;

use super::{BipartiteGraph, GraphError, Side};

/// An undirected simple graph with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<Vec<u32>>,
}

impl SimpleGraph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<SimpleGraph, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(GraphError::OutOfRange { b: u, c: v, nb: n, nc: n });
            }
            adj[u].push(v as u32);
            adj[v].push(u as u32);
        }
        for (u, a) in adj.iter_mut().enumerate() {
            a.sort_unstable();
            if a.windows(2).any(|w| w[0] == w[1]) {
                let v = a.windows(2).find(|w| w[0] == w[1]).expect("dup")[0] as usize;
                return Err(GraphError::DuplicateEdge(u, v));
            }
        }
        Ok(SimpleGraph { adj })
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbours(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e = Vec::new();
        for (u, a) in self.adj.iter().enumerate() {
            for &v in a {
                if u < v as usize {
                    e.push((u, v as usize));
                }
            }
        }
        e
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&(v as u32)).is_ok()
    }
}

/// Distance-two graphs on each class.
pub fn halved_graphs(g: &BipartiteGraph) -> (SimpleGraph, SimpleGraph) {
    let half = |side: Side| {
        let range = g.class(side);
        let off = range.start;
        let adj: Vec<Vec<u32>> = range
            .clone()
            .into_par_iter()
            .map(|u| {
                let mut out: Vec<u32> = g
                    .neighbours(u)
                    .iter()
                    .flat_map(|&w| g.neighbours(w as usize).iter().copied())
                    .filter(|&x| x as usize != u)
                    .map(|x| x - off as u32)
                    .collect();
                out.sort_unstable();
                out.dedup();
                out
            })
            .collect();
        SimpleGraph { adj }
    };
    (half(Side::B), half(Side::C))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SrgError {
    #[error("graph has no vertices")]
    Empty,
    #[error("vertices {u} and {w} have degrees {du} and {dw}")]
    NotRegular { u: usize, du: usize, w: usize, dw: usize },
    #[error("graph is complete or edgeless, so mu or lambda is undefined")]
    Trivial,
    #[error("adjacent pairs ({u0},{w0}) and ({u},{w}) share {l0} and {l} neighbours")]
    Lambda { u0: usize, w0: usize, l0: usize, u: usize, w: usize, l: usize },
    #[error("non-adjacent pairs ({u0},{w0}) and ({u},{w}) share {m0} and {m} neighbours")]
    Mu { u0: usize, w0: usize, m0: usize, u: usize, w: usize, m: usize },
}

struct Bits {
    words: usize,
    data: Vec<u64>,
}

impl Bits {
    fn rows(n: usize, cols: usize, adj: impl Fn(usize) -> Vec<usize>) -> Bits {
        let words = cols.div_ceil(64).max(1);
        let mut data = vec![0u64; n * words];
        for u in 0..n {
            for v in adj(u) {
                data[u * words + v / 64] |= 1 << (v % 64);
            }
        }
        Bits { words, data }
    }

    fn row(&self, u: usize) -> &[u64] {
        &self.data[u * self.words..(u + 1) * self.words]
    }

    fn common(&self, u: usize, v: usize) -> usize {
        self.row(u)
            .iter()
            .zip(self.row(v))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }
}

/// Checks strong regularity combinatorially and returns `(v, k, lambda, mu)`.
/// Counterexamples are the first offending pair in lexicographic order.
pub fn srg_check(h: &SimpleGraph) -> Result<(u64, u64, u64, u64), SrgError> {
    let n = h.order();
    if n == 0 {
        return Err(SrgError::Empty);
    }
    let k = h.adj[0].len();
    if let Some(w) = (0..n).find(|&w| h.adj[w].len() != k) {
        return Err(SrgError::NotRegular {
            u: 0,
            du: k,
            w,
            dw: h.adj[w].len(),
        });
    }
    if k == 0 || k == n - 1 {
        return Err(SrgError::Trivial);
    }
    let bits = Bits::rows(n, n, |u| h.adj[u].iter().map(|&x| x as usize).collect());
    // For each u: (lambda pair, mu pair) seen first, plus first mismatch.
    type Pair = (usize, usize, usize);
    let rows: Vec<(Option<Pair>, Option<Pair>, Option<(bool, Pair)>)> = (0..n)
        .into_par_iter()
        .map(|u| {
            let (mut lam, mut mu): (Option<Pair>, Option<Pair>) = (None, None);
            for w in u + 1..n {
                let c = bits.common(u, w);
                let adj = h.adjacent(u, w);
                let slot = if adj { &mut lam } else { &mut mu };
                match slot {
                    None => *slot = Some((u, w, c)),
                    Some((_, _, c0)) if *c0 != c => return (lam, mu, Some((adj, (u, w, c)))),
                    _ => {}
                }
            }
            (lam, mu, None)
        })
        .collect();
    let (mut lam, mut mu): (Option<Pair>, Option<Pair>) = (None, None);
    for (l, m, bad) in rows {
        for (adj, cand) in [(true, l), (false, m)] {
            let Some(p) = cand else { continue };
            let slot = if adj { &mut lam } else { &mut mu };
            match slot {
                None => *slot = Some(p),
                Some(p0) if p0.2 != p.2 => return Err(mismatch(adj, *p0, p)),
                _ => {}
            }
        }
        if let Some((adj, p)) = bad {
            let p0 = if adj { lam } else { mu }.expect("seen");
            return Err(mismatch(adj, p0, p));
        }
    }
    let (l, m) = (lam.expect("has edges").2, mu.expect("has non-edges").2);
    Ok((n as u64, k as u64, l as u64, m as u64))
}

fn mismatch(adj: bool, p0: (usize, usize, usize), p: (usize, usize, usize)) -> SrgError {
    if adj {
        SrgError::Lambda {
            u0: p0.0,
            w0: p0.1,
            l0: p0.2,
            u: p.0,
            w: p.1,
            l: p.2,
        }
    } else {
        SrgError::Mu {
            u0: p0.0,
            w0: p0.1,
            m0: p0.2,
            u: p.0,
            w: p.1,
            m: p.2,
        }
    }
}

/// Checks `N N^T = k I + c2 A(H)` entrywise on the class `side`, where `N`
/// is the biadjacency matrix from that class and `H` its halved graph.
/// Returns the first offending pair and its common-neighbour count.
pub fn gram_check(g: &BipartiteGraph, side: Side, k: u64, c2: u64) -> Result<(), (usize, usize, u64)> {
    let range = g.class(side);
    let other = g.class(side.other());
    let off = other.start;
    let n = range.len();
    let bits = Bits::rows(n, other.len(), |u| {
        g.neighbours(range.start + u)
            .iter()
            .map(|&x| x as usize - off)
            .collect()
    });
    let (h, _) = match side {
        Side::B => halved_graphs(g),
        Side::C => {
            let (b, c) = halved_graphs(g);
            (c, b)
        }
    };
    let bad = (0..n).into_par_iter().find_map_first(|u| {
        (u..n).find_map(|w| {
            let got = bits.common(u, w) as u64;
            let want = if u == w {
                k
            } else if h.adjacent(u, w) {
                c2
            } else {
                0
            };
            (got != want).then_some((u, w, got))
        })
    });
    match bad {
        Some(x) => Err(x),
        None => Ok(()),
    }
}

/// Vertex-edge incidence graph: B is the vertex set, C the edge set.
pub fn subdivision(g: &SimpleGraph) -> BipartiteGraph {
    let edges = g.edges();
    let mut inc = Vec::with_capacity(2 * edges.len());
    for (i, &(u, v)) in edges.iter().enumerate() {
        inc.push((u as u32, i as u32));
        inc.push((v as u32, i as u32));
    }
    BipartiteGraph::new(g.order(), edges.len(), inc).expect("valid incidence")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigraph::dbrg_check;

    pub(crate) fn petersen() -> SimpleGraph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((i + 5, (i + 2) % 5 + 5));
        }
        SimpleGraph::from_edges(10, &e).unwrap()
    }

    #[test]
    fn petersen_is_srg() {
        assert_eq!(srg_check(&petersen()).unwrap(), (10, 3, 0, 1));
    }

    #[test]
    fn subdivided_cycle_is_longer_cycle() {
        let c4 = SimpleGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let s = subdivision(&c4);
        let r = dbrg_check(&s).unwrap();
        assert_eq!(r.array.cb, vec![1, 1, 1, 2]);
        assert_eq!(s.girth(), Some(8));
    }

    #[test]
    fn subdivided_petersen() {
        let s = subdivision(&petersen());
        let r = dbrg_check(&s).unwrap();
        assert_eq!(r.array.to_string(), "{3;1,1,1,1,2 | 2;1,1,1,1,2,2}");
    }

    #[test]
    fn subdivided_path_fails() {
        let p = SimpleGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(dbrg_check(&subdivision(&p)).is_err());
    }

    #[test]
    fn irregular_rejected() {
        let p = SimpleGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(matches!(srg_check(&p), Err(SrgError::NotRegular { .. })));
        let k3 = SimpleGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(srg_check(&k3), Err(SrgError::Trivial));
        let hex = SimpleGraph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        assert!(matches!(srg_check(&hex), Err(SrgError::Mu { .. })));
    }
}
