//! Perp systems: families of codimension-`k` subspaces of `F_q^n` that pairwise
//! meet in dimension `n - 2k` and cover every nonzero vector 0 or `d` times.
//! Includes parameter admissibility, the associated two-intersection set and
//! strongly regular graph, the dual formulation, and a backtracking search.

mod io;
mod search;

pub use io::{PerpFile, PerpParseError};

pub use search::{perp_search, Budget, SearchConfig, SearchReport, SearchStop, Symmetry};

use std::collections::HashMap;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{self, qbinom, Field, Fq, GfError, Subspace};
use crate::srg::{self, Srg, SrgDefect};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PerpError {
    #[error("empty family")]
    Empty,
    #[error("need 1 <= k and 2k <= n, got n = {n}, k = {k}")]
    BadShape { n: usize, k: usize },
    #[error("n = 2k: the member count formula degenerates and d <= 1 is forced")]
    Degenerate,
    #[error("member {index} has dimension {dim}, expected {expected}")]
    WrongDimension { index: usize, dim: usize, expected: usize },
    #[error("members {0} and {1} coincide")]
    Duplicate(usize, usize),
    #[error("a perp system needs at least two members, got {0}")]
    TooFew(usize),
    #[error("vector {vector:?} lies in {count} members; expected 0 or {d}")]
    Multiplicity { vector: Vec<u32>, count: usize, d: usize },
    #[error("covered vectors such as {vector:?} lie in only one member; d must be at least 2")]
    ThinCover { vector: Vec<u32> },
    #[error("every nonzero vector is covered; an uncovered vector must exist")]
    NoUncovered,
    #[error("members {i} and {j} meet in dimension {dim}, expected {expected}")]
    PairMeet { i: usize, j: usize, dim: usize, expected: usize },
    #[error("hyperplane {normal:?} contains {count} members; expected 0 or {d}")]
    HyperplaneCount { normal: Vec<u32>, count: usize, d: usize },
    #[error("hyperplane {normal:?} meets the two-intersection set in {count} points; expected {h1} or {h2}")]
    TwoIntersection { normal: Vec<u32>, count: u64, h1: u64, h2: u64 },
    #[error("inadmissible parameters: {0}")]
    Inadmissible(String),
    #[error(transparent)]
    Field(#[from] GfError),
}

fn raw(v: &[Fq]) -> Vec<u32> {
    v.iter().map(|x| x.0).collect()
}

fn proj(q: u64, m: u32) -> u64 {
    qbinom(m, 1, q).expect("small") as u64
}

/// A verified perp system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerpSystem {
    field: Field,
    n: usize,
    k: usize,
    members: Vec<Subspace>,
    d: usize,
}

/// Index from normalized vectors to projective point numbers.
pub(crate) struct PointIndex {
    pub points: Vec<Vec<Fq>>,
    map: HashMap<u64, usize>,
}

impl PointIndex {
    pub fn new(field: &Field, n: usize) -> PointIndex {
        let points: Vec<Vec<Fq>> = gf::points(field, n).collect();
        let map = points
            .iter()
            .enumerate()
            .map(|(i, p)| (field.vector_index(p), i))
            .collect();
        PointIndex { points, map }
    }

    pub fn index(&self, field: &Field, v: &[Fq]) -> Option<usize> {
        let mut w = v.to_vec();
        if !field.normalize(&mut w) {
            return None;
        }
        self.map.get(&field.vector_index(&w)).copied()
    }
}

/// Number of members containing each projective point.
fn multiplicities(field: &Field, members: &[Subspace], idx: &PointIndex) -> Vec<usize> {
    let mut mult = vec![0usize; idx.points.len()];
    for m in members {
        for p in m.points(field) {
            mult[idx.index(field, &p).expect("point")] += 1;
        }
    }
    mult
}

/// Checks the perp-system axioms and measures `d` and `s`.
pub fn perp_verify(
    field: &Field,
    n: usize,
    k: usize,
    members: Vec<Subspace>,
) -> Result<PerpSystem, PerpError> {
    if k == 0 || 2 * k > n {
        return Err(PerpError::BadShape { n, k });
    }
    if members.is_empty() {
        return Err(PerpError::Empty);
    }
    for (i, m) in members.iter().enumerate() {
        if m.ambient() != n {
            return Err(GfError::DimensionMismatch {
                expected: n,
                found: m.ambient(),
            }
            .into());
        }
        if m.dim() != n - k {
            return Err(PerpError::WrongDimension {
                index: i,
                dim: m.dim(),
                expected: n - k,
            });
        }
    }
    let mut seen: HashMap<&Subspace, usize> = HashMap::new();
    for (i, m) in members.iter().enumerate() {
        if let Some(&j) = seen.get(m) {
            return Err(PerpError::Duplicate(j, i));
        }
        seen.insert(m, i);
    }
    if members.len() < 2 {
        return Err(PerpError::TooFew(members.len()));
    }
    let idx = PointIndex::new(field, n);
    let mult = multiplicities(field, &members, &idx);
    // d is read off the first covered point.
    let d = mult.iter().copied().find(|&c| c > 0).unwrap_or(0);
    if let Some(i) = mult.iter().position(|&c| c != 0 && c != d) {
        return Err(PerpError::Multiplicity {
            vector: raw(&idx.points[i]),
            count: mult[i],
            d,
        });
    }
    if d == 1 {
        let i = mult.iter().position(|&c| c == 1).expect("covered");
        return Err(PerpError::ThinCover {
            vector: raw(&idx.points[i]),
        });
    }
    if mult.iter().all(|&c| c > 0) {
        return Err(PerpError::NoUncovered);
    }
    let expected = n - 2 * k;
    let pairs: Vec<(usize, usize)> = (0..members.len())
        .flat_map(|i| (i + 1..members.len()).map(move |j| (i, j)))
        .collect();
    let bad = pairs.par_iter().find_first(|&&(i, j)| {
        members[i].meet(field, &members[j]).expect("same ambient").dim() != expected
    });
    if let Some(&(i, j)) = bad {
        let dim = members[i].meet(field, &members[j])?.dim();
        return Err(PerpError::PairMeet { i, j, dim, expected });
    }
    Ok(PerpSystem {
        field: field.clone(),
        n,
        k,
        members,
        d,
    })
}

impl PerpSystem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn s(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    /// Dual formulation: orthogonal complements of the members.
    pub fn dualize(&self) -> DualPerpSystem {
        DualPerpSystem {
            field: self.field.clone(),
            n: self.n,
            k: self.k,
            members: self.members.iter().map(|m| m.orthogonal(&self.field)).collect(),
            d: self.d,
        }
    }

    /// The points covered exactly `d` times, with both hyperplane
    /// intersection sizes checked over every hyperplane.
    pub fn two_intersection_set(&self) -> Result<TwoIntersectionSet, PerpError> {
        let field = &self.field;
        let q = field.q() as u64;
        let (n, k, d, s) = (self.n as u32, self.k as u32, self.d as u64, self.s() as u64);
        let idx = PointIndex::new(field, self.n);
        let mult = multiplicities(field, &self.members, &idx);
        let points: Vec<Vec<Fq>> = idx
            .points
            .iter()
            .zip(&mult)
            .filter(|&(_, &c)| c as u64 == d)
            .map(|(p, _)| p.clone())
            .collect();
        let h1 = (proj(q, n - k) + (s - 1) * proj(q, n - k - 1)) / d;
        let h2 = s * proj(q, n - k - 1) / d;
        let counts: Vec<u64> = idx
            .points
            .par_iter()
            .map(|u| points.iter().filter(|y| field.dot(y, u).is_zero()).count() as u64)
            .collect();
        let (mut c1, mut c2) = (0u64, 0u64);
        for (u, &c) in idx.points.iter().zip(&counts) {
            if c == h1 {
                c1 += 1;
            } else if c == h2 {
                c2 += 1;
            } else {
                return Err(PerpError::TwoIntersection {
                    normal: raw(u),
                    count: c,
                    h1,
                    h2,
                });
            }
        }
        Ok(TwoIntersectionSet {
            points,
            dim: self.n,
            n_points: s * proj(q, n - k) / d,
            h1,
            h2,
            hyperplanes_h1: c1,
            hyperplanes_h2: c2,
        })
    }
}

/// A projective point set met by every hyperplane in `h1` or `h2` points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoIntersectionSet {
    pub points: Vec<Vec<Fq>>,
    /// Vector-space dimension of the ambient space.
    pub dim: usize,
    /// Predicted size `(s/d) [n-k]_q`.
    pub n_points: u64,
    pub h1: u64,
    pub h2: u64,
    pub hyperplanes_h1: u64,
    pub hyperplanes_h2: u64,
}

/// Dual formulation: pairwise trivially intersecting `k`-spaces with every
/// hyperplane containing 0 or `d` of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualPerpSystem {
    field: Field,
    n: usize,
    k: usize,
    members: Vec<Subspace>,
    d: usize,
}

impl DualPerpSystem {
    /// Checks the dual axioms directly.
    pub fn verify(
        field: &Field,
        n: usize,
        k: usize,
        members: Vec<Subspace>,
    ) -> Result<DualPerpSystem, PerpError> {
        if k == 0 || 2 * k > n {
            return Err(PerpError::BadShape { n, k });
        }
        if members.len() < 2 {
            return Err(PerpError::TooFew(members.len()));
        }
        for (index, m) in members.iter().enumerate() {
            if m.ambient() != n || m.dim() != k {
                return Err(PerpError::WrongDimension {
                    index,
                    dim: m.dim(),
                    expected: k,
                });
            }
        }
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                let dim = members[i].meet(field, &members[j])?.dim();
                if dim != 0 {
                    return Err(PerpError::PairMeet { i, j, dim, expected: 0 });
                }
            }
        }
        let idx = PointIndex::new(field, n);
        let counts: Vec<usize> = idx
            .points
            .iter()
            .map(|u| {
                members
                    .iter()
                    .filter(|m| m.basis().iter().all(|b| field.dot(b, u).is_zero()))
                    .count()
            })
            .collect();
        let d = counts.iter().copied().find(|&c| c > 0).unwrap_or(0);
        if let Some(i) = counts.iter().position(|&c| c != 0 && c != d) {
            return Err(PerpError::HyperplaneCount {
                normal: raw(&idx.points[i]),
                count: counts[i],
                d,
            });
        }
        if d < 2 {
            return Err(PerpError::Inadmissible(format!("hyperplane multiplicity d = {d}")));
        }
        Ok(DualPerpSystem {
            field: field.clone(),
            n,
            k,
            members,
            d,
        })
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dualize(&self) -> PerpSystem {
        PerpSystem {
            field: self.field.clone(),
            n: self.n,
            k: self.k,
            members: self.members.iter().map(|m| m.orthogonal(&self.field)).collect(),
            d: self.d,
        }
    }
}

/// One admissibility rule and its outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Derived member count and admissibility verdicts for `(n, k, q, d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerpParams {
    pub n: u32,
    pub k: u32,
    pub q: u64,
    pub d: u64,
    /// Member count, if integral.
    pub s: Option<u64>,
    pub rules: Vec<Rule>,
}

impl PerpParams {
    pub fn admissible(&self) -> bool {
        self.rules.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> Vec<String> {
        self.rules
            .iter()
            .filter(|r| !r.pass)
            .map(|r| format!("{}: {}", r.name, r.detail))
            .collect()
    }
}

/// Member count and admissibility of a perp system with parameters
/// `(n, k, q, d)`.
pub fn perp_params(n: u32, k: u32, q: u64, d: u64) -> Result<PerpParams, PerpError> {
    let (p, _) = gf::prime_power(q).ok_or(GfError::NotPrimePower(q))?;
    if k == 0 || 2 * k > n {
        return Err(PerpError::BadShape {
            n: n as usize,
            k: k as usize,
        });
    }
    if 2 * k == n {
        return Err(PerpError::Degenerate);
    }
    let pw = |e: u32| -> Result<u128, PerpError> {
        (q as u128)
            .checked_pow(e)
            .ok_or_else(|| PerpError::Inadmissible("parameters overflow".into()))
    };
    let num = (d as u128).saturating_sub(1) * (pw(n - k)? - 1);
    let den = pw(n - 2 * k)? - 1;
    let mut rules = Vec::new();
    let s = (num % den == 0).then(|| (num / den + 1) as u64);
    rules.push(Rule {
        name: "member-count".into(),
        pass: s.is_some(),
        detail: format!("(d-1)(q^(n-k)-1)/(q^(n-2k)-1) = {num}/{den}"),
    });
    let top = pw(n - 2 * k)?;
    let mut x = d as u128;
    while x > 1 && x % p as u128 == 0 {
        x /= p as u128;
    }
    let p_power = d >= 2 && x == 1 && top % d as u128 == 0;
    rules.push(Rule {
        name: "d-divides".into(),
        pass: p_power,
        detail: if p_power {
            format!("d = {d} is a power of {p} dividing {top}")
        } else {
            format!("d = {d} is not a power of {p} (at least 2) dividing q^(n-2k) = {top}")
        },
    });
    let lower_ok = n <= 4 * k - 1 || n < 3 * k || d as u128 >= pw(n - 3 * k)?;
    rules.push(Rule {
        name: "d-lower".into(),
        pass: lower_ok,
        detail: if n >= 3 * k {
            format!("need d >= q^(n-3k) = {} or n <= 4k-1", pw(n - 3 * k)?)
        } else {
            "n < 3k".into()
        },
    });
    if let Some(s) = s {
        let lhs = (pw(k)? - 1) * s as u128;
        let rhs = pw(n)? - 1;
        rules.push(Rule {
            name: "packing".into(),
            pass: lhs <= rhs,
            detail: format!("s (q^k - 1) = {lhs} <= q^n - 1 = {rhs}"),
        });
    }
    Ok(PerpParams { n, k, q, d, s, rules })
}

/// Parameters of the strongly regular graph on `F_q^n` attached to a perp
/// system.
pub fn perp_srg_params(n: u32, k: u32, q: u64, d: u64, s: u64) -> Result<Srg, PerpError> {
    if k == 0 || 2 * k >= n {
        return Err(PerpError::BadShape {
            n: n as usize,
            k: k as usize,
        });
    }
    let r = |x: u128| Ratio::<i128>::from_integer(x as i128);
    let qn = r((q as u128).pow(n));
    let qnk = r((q as u128).pow(n - k));
    let qn2k = r((q as u128).pow(n - 2 * k));
    let (dq, sq) = (r(d as u128), r(s as u128));
    let one = r(1);
    let kh = sq / dq * (qnk - one);
    let mu = qn2k * sq * (sq - one) / (dq * dq);
    let rt = -sq / dq + qnk / dq;
    let st = -sq / dq;
    let out = srg::from_eigenvalues(qn, kh, rt, st)
        .map_err(|e: SrgDefect| PerpError::Inadmissible(e.to_string()))?;
    if Ratio::from_integer(out.mu as i128) != mu {
        return Err(PerpError::Inadmissible(format!(
            "mu = {mu} disagrees with k + r s = {}",
            out.mu
        )));
    }
    Ok(out)
}
