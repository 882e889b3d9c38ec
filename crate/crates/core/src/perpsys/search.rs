//! Backtracking search for perp systems in the dual formulation: choose
//! pairwise disjoint `k`-spaces so that every hyperplane ends up containing 0
//! or `d` of them.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{perp_params, perp_verify, PerpError, PerpSystem, PointIndex};
use crate::gf::{Field, GfError, Subspace, SubspaceIter};

/// Which members are fixed before branching. Every choice is without loss
/// of generality because the linear group is transitive on `k`-spaces and
/// on pairs of disjoint `k`-spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Symmetry {
    None,
    /// Fix `<e1, ..., ek>`, the first candidate.
    FirstMember,
    /// Fix `<e1, ..., ek>` and `<e(k+1), ..., e(2k)>`.
    FirstPair,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_seconds: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub budget: Budget,
    pub seed: u64,
    pub symmetry: Symmetry,
    /// Keep going after the first solution and count them all.
    pub count_all: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: Budget::default(),
            seed: 0,
            symmetry: Symmetry::FirstMember,
            count_all: false,
        }
    }
}

/// Why the search stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchStop {
    /// Stopped at the first solution.
    Found,
    /// The whole (symmetry-reduced) space was explored.
    Complete,
    NodeBudget,
    TimeBudget,
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub solution: Option<PerpSystem>,
    pub solutions: u64,
    pub nodes: u64,
    pub elapsed: Duration,
    pub stop: SearchStop,
    pub target_s: usize,
}

impl SearchReport {
    /// True when a budget cap ended the search before it was complete.
    pub fn exhausted(&self) -> bool {
        matches!(self.stop, SearchStop::NodeBudget | SearchStop::TimeBudget)
    }
}

struct Tables {
    cands: Vec<Subspace>,
    cand_points: Vec<Vec<u32>>,
    cand_hyps: Vec<Vec<u32>>,
    point_cands: Vec<Vec<u32>>,
    hyp_cands: Vec<Vec<u32>>,
    cand_rank: Vec<u32>,
    hyp_rank: Vec<u32>,
}

impl Tables {
    fn build(field: &Field, n: usize, k: usize, seed: u64) -> Result<Tables, GfError> {
        let idx = PointIndex::new(field, n);
        let np = idx.points.len();
        let cands: Vec<Subspace> = SubspaceIter::new(field, n, k)?.collect();
        let mut cand_points = Vec::with_capacity(cands.len());
        let mut cand_hyps = Vec::with_capacity(cands.len());
        let mut point_cands = vec![Vec::new(); np];
        // Hyperplanes are indexed by their normal's point number.
        let mut hyp_cands = vec![Vec::new(); np];
        for (c, m) in cands.iter().enumerate() {
            let pts: Vec<u32> = m
                .points(field)
                .iter()
                .map(|p| idx.index(field, p).expect("point") as u32)
                .collect();
            let hyps: Vec<u32> = m
                .orthogonal(field)
                .points(field)
                .iter()
                .map(|p| idx.index(field, p).expect("point") as u32)
                .collect();
            for &p in &pts {
                point_cands[p as usize].push(c as u32);
            }
            for &h in &hyps {
                hyp_cands[h as usize].push(c as u32);
            }
            cand_points.push(pts);
            cand_hyps.push(hyps);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rank = |len: usize, rng: &mut ChaCha8Rng| {
            let mut perm: Vec<u32> = (0..len as u32).collect();
            perm.shuffle(rng);
            let mut r = vec![0u32; len];
            for (i, &x) in perm.iter().enumerate() {
                r[x as usize] = i as u32;
            }
            r
        };
        let cand_rank = rank(cands.len(), &mut rng);
        let hyp_rank = rank(np, &mut rng);
        Ok(Tables {
            cands,
            cand_points,
            cand_hyps,
            point_cands,
            hyp_cands,
            cand_rank,
            hyp_rank,
        })
    }
}

struct Search<'a> {
    t: &'a Tables,
    d: u32,
    s: usize,
    kill: Vec<u32>,
    alive: Vec<u32>,
    count: Vec<u32>,
    chosen: Vec<u32>,
    trail: Vec<u32>,
    nodes: u64,
    solutions: u64,
    first: Option<Vec<u32>>,
    count_all: bool,
    budget: Budget,
    start: Instant,
    stop: Option<SearchStop>,
}

impl<'a> Search<'a> {
    fn kill(&mut self, c: u32) {
        let k = &mut self.kill[c as usize];
        *k += 1;
        if *k == 1 {
            for &h in &self.t.cand_hyps[c as usize] {
                self.alive[h as usize] -= 1;
            }
        }
        self.trail.push(c);
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let c = self.trail.pop().expect("nonempty");
            let k = &mut self.kill[c as usize];
            *k -= 1;
            if *k == 0 {
                for &h in &self.t.cand_hyps[c as usize] {
                    self.alive[h as usize] += 1;
                }
            }
        }
    }

    fn choose(&mut self, c: u32) -> usize {
        let mark = self.trail.len();
        let t = self.t;
        self.chosen.push(c);
        for &p in &t.cand_points[c as usize] {
            for &c2 in &t.point_cands[p as usize] {
                self.kill(c2);
            }
        }
        for &h in &t.cand_hyps[c as usize] {
            self.count[h as usize] += 1;
            if self.count[h as usize] == self.d {
                for &c2 in &t.hyp_cands[h as usize] {
                    self.kill(c2);
                }
            }
        }
        mark
    }

    fn unchoose(&mut self, mark: usize) {
        let c = self.chosen.pop().expect("chosen");
        for &h in &self.t.cand_hyps[c as usize] {
            self.count[h as usize] -= 1;
        }
        self.undo(mark);
    }

    fn out_of_budget(&mut self) -> bool {
        if let Some(max) = self.budget.max_nodes {
            if self.nodes >= max {
                self.stop = Some(SearchStop::NodeBudget);
                return true;
            }
        }
        if let Some(secs) = self.budget.max_seconds {
            if self.nodes % 256 == 0 && self.start.elapsed().as_secs_f64() >= secs {
                self.stop = Some(SearchStop::TimeBudget);
                return true;
            }
        }
        false
    }

    /// Returns false when the search must stop.
    fn dfs(&mut self) -> bool {
        if self.out_of_budget() {
            return false;
        }
        self.nodes += 1;
        let t = self.t;
        // Most constrained partially filled hyperplane.
        let mut best: Option<(u32, u32, u32)> = None;
        for h in 0..self.count.len() {
            let c = self.count[h];
            if c == 0 || c == self.d {
                continue;
            }
            let need = self.d - c;
            let a = self.alive[h];
            if a < need {
                return true;
            }
            let key = (a - need, t.hyp_rank[h], h as u32);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
        let branch: Vec<u32> = match best {
            None if self.chosen.len() == self.s => {
                self.solutions += 1;
                if self.first.is_none() {
                    let mut sol = self.chosen.clone();
                    sol.sort_unstable();
                    self.first = Some(sol);
                }
                if !self.count_all {
                    self.stop = Some(SearchStop::Found);
                    return false;
                }
                return true;
            }
            None if self.chosen.is_empty() => (0..t.cands.len() as u32).collect(),
            None => return true,
            Some((_, _, h)) => t.hyp_cands[h as usize]
                .iter()
                .copied()
                .filter(|&c| self.kill[c as usize] == 0)
                .collect(),
        };
        if self.chosen.len() >= self.s {
            return true;
        }
        let mut branch = branch;
        branch.sort_unstable_by_key(|&c| t.cand_rank[c as usize]);
        let outer = self.trail.len();
        for c in branch {
            if self.kill[c as usize] != 0 {
                continue;
            }
            let mark = self.choose(c);
            let go_on = self.dfs();
            self.unchoose(mark);
            if !go_on {
                self.undo(outer);
                return false;
            }
            // Later siblings exclude this candidate so each family is seen once.
            self.kill(c);
        }
        self.undo(outer);
        true
    }
}

/// Searches for a perp system with parameters `(n, k, q, d)`.
pub fn perp_search(
    n: usize,
    k: usize,
    q: u64,
    d: usize,
    config: &SearchConfig,
) -> Result<SearchReport, PerpError> {
    let params = perp_params(n as u32, k as u32, q, d as u64)?;
    if !params.admissible() {
        return Err(PerpError::Inadmissible(params.failures().join("; ")));
    }
    let s = params.s.expect("admissible implies integral") as usize;
    let field = Field::of_order(q)?;
    let start = Instant::now();
    let t = Tables::build(&field, n, k, config.seed)?;
    let np = t.hyp_cands.len();
    let mut search = Search {
        t: &t,
        d: d as u32,
        s,
        kill: vec![0; t.cands.len()],
        alive: t.hyp_cands.iter().map(|v| v.len() as u32).collect(),
        count: vec![0; np],
        chosen: Vec::new(),
        trail: Vec::new(),
        nodes: 0,
        solutions: 0,
        first: None,
        count_all: config.count_all,
        budget: config.budget,
        start,
        stop: None,
    };
    let fixed: Vec<Subspace> = match config.symmetry {
        Symmetry::None => vec![],
        Symmetry::FirstMember => vec![Subspace::coordinate(n, 0..k)],
        Symmetry::FirstPair => vec![
            Subspace::coordinate(n, 0..k),
            Subspace::coordinate(n, k..2 * k),
        ],
    };
    for m in &fixed {
        let c = t.cands.iter().position(|x| x == m).expect("coordinate subspace") as u32;
        search.choose(c);
    }
    search.dfs();
    let stop = search.stop.unwrap_or(SearchStop::Complete);
    let solution = match &search.first {
        Some(sol) => {
            let members: Vec<Subspace> = sol
                .iter()
                .map(|&c| t.cands[c as usize].orthogonal(&field))
                .collect();
            let sys = perp_verify(&field, n, k, members)?;
            if sys.d() != d {
                return Err(PerpError::Inadmissible(format!(
                    "search produced d = {}, expected {d}",
                    sys.d()
                )));
            }
            Some(sys)
        }
        None => None,
    };
    Ok(SearchReport {
        solution,
        solutions: search.solutions,
        nodes: search.nodes,
        elapsed: start.elapsed(),
        stop,
        target_s: s,
    })
}
