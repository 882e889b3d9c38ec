//! Feasibility of diameter-four intersection arrays of non-regular
//! distance-biregular graphs with girth four, and an exhaustive enumerator.

mod catalog;

pub use catalog::{catalog_annotate, default_catalog, Annotated, Catalog, CatalogEntry, CatalogError, Known};

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::bigraph::{IntersectionArray, Side};
use crate::srg::{self, Srg};

type Q = Ratio<i128>;

fn q(x: u64) -> Q {
    Q::from_integer(x as i128)
}

/// `{k; 1, c2B, c3B, k | l; 1, c2C, c3C, l}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CandidateArray {
    pub k: u64,
    pub c2b: u64,
    pub c3b: u64,
    pub l: u64,
    pub c2c: u64,
    pub c3c: u64,
}

impl CandidateArray {
    pub fn new(k: u64, c2b: u64, c3b: u64, l: u64, c2c: u64, c3c: u64) -> CandidateArray {
        CandidateArray { k, c2b, c3b, l, c2c, c3c }
    }

    /// Reads a diameter-four array; `None` for any other shape.
    pub fn from_array(a: &IntersectionArray) -> Option<CandidateArray> {
        let ok = |c: &[u64], v: u64| c.len() == 4 && c[0] == 1 && c[3] == v;
        (ok(&a.cb, a.k) && ok(&a.cc, a.l)).then(|| CandidateArray::new(a.k, a.cb[1], a.cb[2], a.l, a.cc[1], a.cc[2]))
    }

    pub fn to_array(&self) -> IntersectionArray {
        IntersectionArray::diameter_four(self.k, self.c2b, self.c3b, self.l, self.c2c, self.c3c)
    }

    pub fn swapped(&self) -> CandidateArray {
        CandidateArray::new(self.l, self.c2c, self.c3c, self.k, self.c2b, self.c3b)
    }

    /// The lesser of the two orientations, so `k <= l`.
    pub fn canonical(&self) -> CandidateArray {
        let s = self.swapped();
        if (self.k, self.c2b, self.c3b) <= (s.k, s.c2b, s.c3b) {
            *self
        } else {
            s
        }
    }

    /// Structural ranges: `2 <= c2 < valency` on both sides, `1 <= c3` below
    /// the valency at distance three.
    pub fn in_range(&self) -> bool {
        (2..self.k).contains(&self.c2b)
            && (2..self.l).contains(&self.c2c)
            && (1..self.l).contains(&self.c3b)
            && (1..self.k).contains(&self.c3c)
    }
}

impl fmt::Display for CandidateArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_array().fmt(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexCounts {
    pub nb: u64,
    pub nc: u64,
    /// Distance-partition cell sizes from a B vertex and from a C vertex.
    pub cells_b: Vec<u64>,
    pub cells_c: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CountFailure {
    /// `k_index` is not an integer from a vertex of `side`.
    NonIntegral { side: Side, index: usize },
    /// The two sides disagree on the class sizes.
    Inconsistent { from_b: (u64, u64), from_c: (u64, u64) },
}

impl fmt::Display for CountFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountFailure::NonIntegral { side, index } => write!(f, "k_{index} from side {side} not integral"),
            CountFailure::Inconsistent { from_b, from_c } => {
                write!(f, "class sizes {from_b:?} from B but {from_c:?} from C")
            }
        }
    }
}

/// Cell sizes from both sides and the resulting class sizes.
pub fn vertex_counts(a: &CandidateArray) -> Result<VertexCounts, CountFailure> {
    let arr = a.to_array();
    let cells = |side| arr.cell_sizes(side).map_err(|index| CountFailure::NonIntegral { side, index });
    let cells_b = cells(Side::B)?;
    let cells_c = cells(Side::C)?;
    let split = |ks: &[u64]| -> (u64, u64) {
        let even = ks.iter().step_by(2).sum();
        let odd = ks.iter().skip(1).step_by(2).sum();
        (even, odd)
    };
    let from_b = split(&cells_b);
    let (own_c, other_c) = split(&cells_c);
    let from_c = (other_c, own_c);
    if from_b != from_c {
        return Err(CountFailure::Inconsistent { from_b, from_c });
    }
    Ok(VertexCounts {
        nb: from_b.0,
        nc: from_b.1,
        cells_b,
        cells_c,
    })
}

/// `c2B c3B = c2C c3C` and `b1B b2B = b1C b2C`.
pub fn delorme_relations_check(a: &CandidateArray) -> Result<(), String> {
    a.to_array().line_identities()
}

/// A homogeneity scalar. `orientation` is the class playing the base role:
/// `B` evaluates the array as given, `C` with the lines exchanged.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaGamma {
    pub i: usize,
    pub orientation: Side,
    #[serde(serialize_with = "ser_ratio")]
    pub delta: Q,
    /// Defined when `delta = 0` and the denominator is nonzero.
    #[serde(serialize_with = "ser_opt_ratio")]
    pub gamma: Option<Q>,
}

fn ser_ratio<S: serde::Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_opt_ratio<S: serde::Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

impl DeltaGamma {
    /// `Delta = 0` forces `gamma` to be a non-negative integer.
    pub fn violates(&self) -> bool {
        match self.gamma {
            Some(g) => !g.is_integer() || g < Q::from_integer(0),
            None => false,
        }
    }
}

/// `Delta_i` and `gamma_i` for `i = 2, 3` in both orientations. For base
/// class `Y` with other class `Z`, index `i` reads `c, b` from `Y` when `i`
/// is even and from `Z` when odd; the correction term is
/// `(b_i (c_(i+1) - 1) + c_i (b_(i-1) - 1)) (c2^Z - 1) / c2^Y`.
pub fn delta_gamma(a: &CandidateArray) -> Vec<DeltaGamma> {
    let arr = a.to_array();
    let one = Q::from_integer(1);
    let mut out = Vec::new();
    for y in [Side::B, Side::C] {
        let z = y.other();
        for i in [2usize, 3] {
            let line = if i % 2 == 0 { y } else { z };
            let c = |j| arr.cq(line, j);
            let b = |j| arr.bq(line, j);
            let den = b(i) * (c(i + 1) - one) + c(i) * (b(i - 1) - one);
            let delta = (b(i - 1) - one) * (c(i + 1) - one) - den / arr.cq(y, 2) * (arr.cq(z, 2) - one);
            let gamma = (delta == Q::from_integer(0) && den != Q::from_integer(0))
                .then(|| arr.cq(y, 2) * c(i) * (b(i - 1) - one) / den);
            out.push(DeltaGamma {
                i,
                orientation: y,
                delta,
                gamma,
            });
        }
    }
    out
}

/// Halved-graph parameters on `side` through the spectrum. With zero
/// diagonal the five-cell quotient has characteristic polynomial
/// `x (x^4 - e1 x^2 + e2)`, `e1 = sum b_(i-1) c_i`, and one root pair is
/// `+-sqrt(k l)`; the other gives the nontrivial eigenvalue `theta^2` of
/// `N N^T`. Then `A(H) = (N N^T - k I) / c2` has eigenvalues
/// `(theta^2 - k) / c2` and `-k / c2`.
pub fn halved_srg_derive(a: &CandidateArray, side: Side) -> Result<Srg, String> {
    let arr = a.to_array();
    let counts = vertex_counts(a).map_err(|e| e.to_string())?;
    let v = match side {
        Side::B => counts.nb,
        Side::C => counts.nc,
    };
    let (k, l) = (arr.valency(side), arr.valency(side.other()));
    let c2 = arr.cq(side, 2);
    let e1: Q = (1..=4).map(|i| arr.bq(side, i - 1) * arr.cq(side, i)).sum();
    let theta2 = e1 - q(k * l);
    if theta2 <= Q::from_integer(0) {
        return Err(format!("nontrivial eigenvalue theta^2 = {theta2}"));
    }
    let kh = q(k) * (q(l) - Q::from_integer(1)) / c2;
    if !kh.is_integer() {
        return Err(format!("valency {kh} not integral"));
    }
    let r = (theta2 - q(k)) / c2;
    let s = -q(k) / c2;
    srg::from_eigenvalues(q(v), kh, r, s).map_err(|e| e.to_string())
}

/// Halved-graph `(valency, lambda, mu)` counted directly from the array:
/// `k_H = k (l-1) / c2`, `lambda = (c2 (l-2) + (k - c2)(c3 - 1)) / c2`,
/// `mu = k c3 / c2`, with `c2, c3` taken from `side`.
pub fn halved_srg_closed_form(a: &CandidateArray, side: Side) -> (Q, Q, Q) {
    let arr = a.to_array();
    let (k, l) = (q(arr.valency(side)), q(arr.valency(side.other())));
    let (c2, c3) = (arr.cq(side, 2), arr.cq(side, 3));
    let one = Q::from_integer(1);
    let kh = k * (l - one) / c2;
    let lambda = (c2 * (l - q(2)) + (k - c2) * (c3 - one)) / c2;
    let mu = k * c3 / c2;
    (kh, lambda, mu)
}

/// Order `n` when the array has the shape
/// `{n+2; 1, 2, n(n+1)/2, n+2 | n^2; 1, n, n+1, n^2}` in either orientation.
pub fn plane_order(a: &CandidateArray) -> Option<u64> {
    [*a, a.swapped()].into_iter().find_map(|x| {
        let n = x.k.checked_sub(2)?;
        (n >= 2 && x.c2b == 2 && x.c3b == n * (n + 1) / 2 && x.l == n * n && x.c2c == n && x.c3c == n + 1).then_some(n)
    })
}

fn sum_of_two_squares(n: u64) -> bool {
    (0..).take_while(|a| a * a <= n).any(|a| {
        let r = n - a * a;
        let s = num_integer::Roots::sqrt(&r);
        s * s == r
    })
}

/// Arrays of the plane shape need a projective plane of order `n`.
pub fn plane_implication_check(a: &CandidateArray) -> Result<(), String> {
    let Some(n) = plane_order(a) else { return Ok(()) };
    if n == 6 || n == 10 {
        return Err(format!("needs a projective plane of order {n}, which does not exist"));
    }
    if matches!(n % 4, 1 | 2) && !sum_of_two_squares(n) {
        return Err(format!("needs a projective plane of order {n}, excluded by Bruck-Ryser"));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Feasible,
    /// Feasible, with some `Delta_i = 0` forcing an integral triple count.
    Flagged,
    Infeasible,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Feasible => "feasible",
            Status::Flagged => "flagged",
            Status::Infeasible => "infeasible",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeasibilityReport {
    pub array: CandidateArray,
    pub counts: Option<VertexCounts>,
    pub srg_b: Option<Srg>,
    pub srg_c: Option<Srg>,
    pub delta_gamma: Vec<DeltaGamma>,
    pub plane_order: Option<u64>,
    pub checks: Vec<Check>,
    pub status: Status,
}

impl FeasibilityReport {
    pub fn reasons(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect()
    }

    /// The first rejecting `gamma`, if any.
    pub fn rejecting_gamma(&self) -> Option<&DeltaGamma> {
        self.delta_gamma.iter().find(|d| d.violates())
    }
}

/// Runs every condition on the array.
pub fn assess(a: &CandidateArray) -> FeasibilityReport {
    let mut checks = Vec::new();
    let mut push = |name, r: Result<String, String>| {
        let (pass, detail) = match r {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        checks.push(Check { name, pass, detail });
    };
    push(
        "ranges",
        if a.in_range() {
            Ok(String::new())
        } else {
            Err("entries outside 2 <= c2 < valency, 1 <= c3 < valency".into())
        },
    );
    let counts = vertex_counts(a);
    push(
        "counts",
        counts
            .as_ref()
            .map(|c| format!("|B| = {}, |C| = {}", c.nb, c.nc))
            .map_err(|e| e.to_string()),
    );
    push("relations", delorme_relations_check(a).map(|_| String::new()));
    push(
        "monotone",
        if a.c3b >= a.c2c && a.c3c >= a.c2b {
            Ok(String::new())
        } else {
            Err(format!("need c3B >= c2C and c3C >= c2B, got {} vs {} and {} vs {}", a.c3b, a.c2c, a.c3c, a.c2b))
        },
    );
    let (mut srg_b, mut srg_c) = (None, None);
    if counts.is_ok() {
        for (side, slot, name) in [(Side::B, &mut srg_b, "srg_b"), (Side::C, &mut srg_c, "srg_c")] {
            let r = halved_srg_derive(a, side);
            *slot = r.as_ref().ok().copied();
            push(name, r.map(|s| s.label()));
        }
    }
    let dg = delta_gamma(a);
    let bad = dg.iter().find(|d| d.violates());
    push(
        "homogeneity",
        match bad {
            Some(d) => Err(format!(
                "Delta_{} = 0 ({}) gives gamma_{} = {}",
                d.i,
                orientation_name(d.orientation),
                d.i,
                d.gamma.expect("defined")
            )),
            None => Ok(String::new()),
        },
    );
    push("plane", plane_implication_check(a).map(|_| String::new()));
    let status = if checks.iter().any(|c| !c.pass) {
        Status::Infeasible
    } else if dg.iter().any(|d| d.gamma.is_some()) {
        Status::Flagged
    } else {
        Status::Feasible
    };
    FeasibilityReport {
        array: *a,
        counts: counts.ok(),
        srg_b,
        srg_c,
        delta_gamma: dg,
        plane_order: plane_order(a),
        checks,
        status,
    }
}

fn orientation_name(s: Side) -> &'static str {
    match s {
        Side::B => "as given",
        Side::C => "swapped",
    }
}

/// Every canonical candidate (`k < l`, girth four) whose cell sizes are
/// integral, whose two lines satisfy the product identities, and whose
/// classes both have at most `max_side` vertices, with its report. Sorted
/// by `(k, c2B, c3B, l, c2C, c3C)`.
///
/// Parametrization: `b1B b2B = b1C b2C` reads
/// `(k - c2B)/(k - 1) = (l - c2C)/(l - 1)`, so with `g = gcd(k-1, l-1)`
/// every solution is `c2B = 1 + j (k-1)/g`, `c2C = 1 + j (l-1)/g` for
/// `1 <= j < g`; then `c3C = c2B c3B / c2C`.
pub fn enumerate_feasible(max_side: u64) -> Vec<FeasibilityReport> {
    let mut out: Vec<FeasibilityReport> = (3..=max_side)
        .into_par_iter()
        .flat_map_iter(|l| candidates_for(l, max_side).into_iter().map(|a| assess(&a)))
        .collect();
    out.sort_by_key(|r| r.array);
    out
}

fn candidates_for(l: u64, max_side: u64) -> Vec<CandidateArray> {
    let mut out = Vec::new();
    for k in 3..l {
        let g = (k - 1).gcd(&(l - 1));
        for j in 1..g {
            let c2b = 1 + j * (k - 1) / g;
            let c2c = 1 + j * (l - 1) / g;
            // k_2 from a B vertex; with k_4 >= 1 this bounds |B|.
            if (k * (l - 1)) % c2b != 0 || 2 + k * (l - 1) / c2b > max_side {
                continue;
            }
            for c3b in 1..l {
                if (c2b * c3b) % c2c != 0 {
                    continue;
                }
                let a = CandidateArray::new(k, c2b, c3b, l, c2c, c2b * c3b / c2c);
                if !a.in_range() {
                    continue;
                }
                if let Ok(c) = vertex_counts(&a) {
                    if c.nb.max(c.nc) <= max_side {
                        out.push(a);
                    }
                }
            }
        }
    }
    out
}

fn srg_cell(s: &Option<Srg>) -> String {
    s.map(|x| x.label()).unwrap_or_default()
}

/// CSV with columns `k,c2B,c3B,l,c2C,c3C,nB,nC,srgB,srgC,status,reasons`.
pub fn to_csv(rows: &[FeasibilityReport]) -> String {
    let mut s = String::from("k,c2B,c3B,l,c2C,c3C,nB,nC,srgB,srgC,status,reasons\n");
    for r in rows {
        let a = r.array;
        let (nb, nc) = r.counts.as_ref().map_or((String::new(), String::new()), |c| (c.nb.to_string(), c.nc.to_string()));
        let reasons = r.reasons().join("; ").replace('"', "'");
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},\"{}\",\"{}\",{},\"{}\"\n",
            a.k,
            a.c2b,
            a.c3b,
            a.l,
            a.c2c,
            a.c3c,
            nb,
            nc,
            srg_cell(&r.srg_b),
            srg_cell(&r.srg_c),
            r.status,
            reasons
        ));
    }
    s
}

/// JSON mirror of the table with all witnesses.
pub fn to_json(rows: &[FeasibilityReport]) -> serde_json::Value {
    serde_json::to_value(rows).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row1() -> CandidateArray {
        CandidateArray::new(6, 2, 10, 16, 4, 5)
    }

    #[test]
    fn counts_row1_and_sporadic() {
        let c = vertex_counts(&row1()).unwrap();
        assert_eq!((c.nb, c.nc), (64, 24));
        let m = vertex_counts(&CandidateArray::new(21, 3, 60, 81, 9, 20)).unwrap();
        assert_eq!((m.nb, m.nc), (729, 189));
        assert!(vertex_counts(&CandidateArray::new(6, 4, 5, 16, 4, 5)).is_err());
    }

    #[test]
    fn closed_forms_for_counts() {
        // |B| = 1 + k(l-1)/c2B + (l-1)(k-c2B)(l-c3B)/(c2B c3B), |C| = k + k(l-1)(k-c2B)/(c2B c3B).
        for a in [row1(), CandidateArray::new(21, 3, 60, 81, 9, 20), CandidateArray::new(10, 2, 18, 28, 4, 9)] {
            let c = vertex_counts(&a).unwrap();
            let (k, l, c2, c3) = (a.k, a.l, a.c2b, a.c3b);
            assert_eq!(c.nb, 1 + k * (l - 1) / c2 + (l - 1) * (k - c2) * (l - c3) / (c2 * c3));
            assert_eq!(c.nc, k + k * (l - 1) * (k - c2) / (c2 * c3));
        }
    }

    #[test]
    fn relations() {
        assert!(delorme_relations_check(&row1()).is_ok());
        assert!(delorme_relations_check(&CandidateArray::new(21, 3, 60, 81, 9, 20)).is_ok());
        assert!(delorme_relations_check(&CandidateArray::new(6, 2, 9, 16, 4, 5)).is_err());
    }

    #[test]
    fn flagged_gammas() {
        let cases = [
            ((12, 3, 33, 45, 9, 11), (9, 5)),
            ((20, 4, 76, 96, 16, 19), (8, 3)),
            ((18, 3, 85, 120, 15, 17), (15, 8)),
            ((30, 5, 145, 175, 25, 29), (25, 7)),
        ];
        for ((k, a, b, l, c, d), (n, m)) in cases {
            let r = assess(&CandidateArray::new(k, a, b, l, c, d));
            assert_eq!(r.status, Status::Infeasible);
            let g = r.rejecting_gamma().unwrap();
            assert_eq!((g.i, g.orientation), (2, Side::C));
            assert_eq!(g.gamma, Some(Q::new(n, m)));
        }
    }

    #[test]
    fn row1_delta_values() {
        let dg = delta_gamma(&row1());
        let d2b = dg.iter().find(|d| d.i == 2 && d.orientation == Side::B).unwrap();
        assert_eq!(d2b.delta, Q::from_integer(30));
        let d2c = dg.iter().find(|d| d.i == 2 && d.orientation == Side::C).unwrap();
        assert_eq!(d2c.gamma, Some(Q::from_integer(1)));
        assert_eq!(assess(&row1()).status, Status::Flagged);
    }

    #[test]
    fn orientation_swap_keeps_verdict() {
        for a in [row1(), CandidateArray::new(12, 3, 33, 45, 9, 11), CandidateArray::new(15, 3, 28, 36, 6, 14)] {
            assert_eq!(assess(&a).status, assess(&a.swapped()).status);
        }
    }

    #[test]
    fn srg_derivation() {
        let sb = halved_srg_derive(&row1(), Side::B).unwrap();
        let sc = halved_srg_derive(&row1(), Side::C).unwrap();
        assert_eq!(sb.tuple(), (64, 45, 32, 30));
        assert_eq!(sc.tuple(), (24, 20, 16, 20));
        let m = CandidateArray::new(21, 3, 60, 81, 9, 20);
        assert_eq!(halved_srg_derive(&m, Side::B).unwrap().tuple(), (729, 560, 433, 420));
        assert_eq!(halved_srg_derive(&m, Side::C).unwrap().tuple(), (189, 180, 171, 180));
        let cube = CandidateArray::new(4, 2, 3, 4, 2, 3);
        assert_eq!(halved_srg_derive(&cube, Side::B).unwrap().tuple(), (8, 6, 4, 6));
    }

    #[test]
    fn eigen_route_matches_closed_form() {
        for r in enumerate_feasible(400) {
            for (side, s) in [(Side::B, r.srg_b), (Side::C, r.srg_c)] {
                let Some(s) = s else { continue };
                let (kh, la, mu) = halved_srg_closed_form(&r.array, side);
                assert_eq!((kh, la, mu), (q(s.k as u64), q(s.lambda as u64), q(s.mu as u64)), "{}", r.array);
            }
        }
    }

    #[test]
    fn plane_rows() {
        let six = assess(&CandidateArray::new(8, 2, 21, 36, 6, 7));
        assert_eq!(six.status, Status::Infeasible);
        assert_eq!(six.plane_order, Some(6));
        assert!(plane_implication_check(&CandidateArray::new(12, 2, 55, 100, 10, 11)).is_err());
        assert!(plane_implication_check(&CandidateArray::new(10, 2, 36, 64, 8, 9)).is_ok());
        assert!(sum_of_two_squares(10) && !sum_of_two_squares(6) && !sum_of_two_squares(21));
    }

    #[test]
    fn small_bound_has_nothing_feasible() {
        let t = enumerate_feasible(30);
        assert!(t.iter().all(|r| r.status == Status::Infeasible));
        assert_eq!(to_csv(&[]).lines().count(), 1);
    }
}
