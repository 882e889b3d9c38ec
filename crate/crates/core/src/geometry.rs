//! Point sets and subspace families in projective spaces over finite fields:
//! hyperovals, Denniston maximal arcs, duality, and the totally singular
//! planes of the hyperbolic quadric in `F_q^6`.

use std::collections::HashSet;

use thiserror::Error;

use crate::gf::{Field, Fq, GfError, Subspace, SubspaceIter};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("q = {0} is odd; hyperovals and Denniston arcs need even q")]
    OddOrder(u32),
    #[error("{what} = {value} is not a power of two")]
    NotPowerOfTwo { what: &'static str, value: u64 },
    #[error("degree r = {r} must satisfy 1 < r <= q = {q}")]
    BadDegree { r: u64, q: u32 },
    #[error("members have different dimensions ({0} and {1})")]
    MixedDimensions(usize, usize),
    #[error("duplicate member {0}")]
    Duplicate(usize),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// A family of distinct subspaces of `F_q^n` with a common dimension.
/// Member order is preserved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceFamily {
    field: Field,
    n: usize,
    members: Vec<Subspace>,
}

/// A set of projective points, stored as one-dimensional subspaces.
pub type PointSet = SpaceFamily;

impl SpaceFamily {
    pub fn new(field: &Field, n: usize, members: Vec<Subspace>) -> Result<SpaceFamily, GeomError> {
        let mut seen = HashSet::new();
        for (i, m) in members.iter().enumerate() {
            if m.ambient() != n {
                return Err(GfError::DimensionMismatch {
                    expected: n,
                    found: m.ambient(),
                }
                .into());
            }
            if m.dim() != members[0].dim() {
                return Err(GeomError::MixedDimensions(members[0].dim(), m.dim()));
            }
            if !seen.insert(m) {
                return Err(GeomError::Duplicate(i));
            }
        }
        Ok(SpaceFamily {
            field: field.clone(),
            n,
            members,
        })
    }

    /// Point set from vectors; each vector spans one point.
    pub fn from_points(field: &Field, n: usize, pts: &[Vec<Fq>]) -> Result<PointSet, GeomError> {
        let members = pts
            .iter()
            .map(|p| Subspace::span(field, n, [p]))
            .collect::<Result<Vec<_>, _>>()?;
        SpaceFamily::new(field, n, members)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Common member dimension (0 for an empty family).
    pub fn dim(&self) -> usize {
        self.members.first().map_or(0, |m| m.dim())
    }

    pub fn into_members(self) -> Vec<Subspace> {
        self.members
    }

    /// Orthogonal complements of all members under the standard dot
    /// product, in the same order.
    pub fn dualize(&self) -> SpaceFamily {
        SpaceFamily {
            field: self.field.clone(),
            n: self.n,
            members: self.members.iter().map(|m| m.orthogonal(&self.field)).collect(),
        }
    }

    /// For a point set, the number of points on the hyperplane `normal^perp`.
    pub fn points_on_hyperplane(&self, normal: &[Fq]) -> usize {
        self.members
            .iter()
            .filter(|m| self.field.dot(&m.basis()[0], normal).is_zero())
            .count()
    }

    /// Number of members containing the vector `v`.
    pub fn members_through(&self, v: &[Fq]) -> usize {
        self.members.iter().filter(|m| m.contains(&self.field, v)).count()
    }
}

/// A line of `PG(2, q)` met in the wrong number of points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcViolation {
    /// Normal vector of the line.
    pub line: Vec<Fq>,
    pub meets: usize,
}

fn power_of_two(x: u64) -> bool {
    x.is_power_of_two()
}

fn require_even(field: &Field) -> Result<(), GeomError> {
    if field.p() != 2 {
        return Err(GeomError::OddOrder(field.q()));
    }
    Ok(())
}

/// The regular hyperoval of `PG(2, q)`, q even: the conic `y^2 = xz`
/// together with its nucleus.
pub fn hyperoval(field: &Field) -> Result<PointSet, GeomError> {
    require_even(field)?;
    let mut pts: Vec<Vec<Fq>> = field
        .elements()
        .map(|t| vec![Fq::ONE, t, field.mul(t, t)])
        .collect();
    pts.push(vec![Fq::ZERO, Fq::ONE, Fq::ZERO]);
    pts.push(vec![Fq::ZERO, Fq::ZERO, Fq::ONE]);
    SpaceFamily::from_points(field, 3, &pts)
}

/// Denniston maximal arc of degree `r` in `PG(2, q)`: the affine points
/// `(x, y, 1)` with `b x^2 + xy + y^2` in an additive subgroup of order `r`,
/// where `b` has absolute trace 1.
pub fn denniston_arc(field: &Field, r: u64) -> Result<PointSet, GeomError> {
    require_even(field)?;
    let q = field.q();
    if !power_of_two(r) {
        return Err(GeomError::NotPowerOfTwo { what: "r", value: r });
    }
    if r <= 1 || r > q as u64 {
        return Err(GeomError::BadDegree { r, q });
    }
    let beta = field
        .elements()
        .find(|&b| field.trace(b) == Fq::ONE)
        .expect("trace is onto");
    let mut pts = Vec::new();
    for x in field.elements() {
        for y in field.elements() {
            let v = field.add(
                field.add(field.mul(beta, field.mul(x, x)), field.mul(x, y)),
                field.mul(y, y),
            );
            // Indices below r form an additive subgroup in characteristic 2.
            if (v.0 as u64) < r {
                pts.push(vec![x, y, Fq::ONE]);
            }
        }
    }
    SpaceFamily::from_points(field, 3, &pts)
}

/// Checks that every line of `PG(2, q)` meets the point set in 0 or `r`
/// points. Reports the first violating line in enumeration order.
pub fn arc_check(arc: &PointSet, r: usize) -> Result<(), ArcViolation> {
    let field = arc.field();
    for normal in crate::gf::points(field, 3) {
        let meets = arc.points_on_hyperplane(&normal);
        if meets != 0 && meets != r {
            return Err(ArcViolation { line: normal, meets });
        }
    }
    Ok(())
}

/// Quadratic form `x1 x2 - x3 x4 + x5 x6` on `F_q^6`.
pub fn cone_form(field: &Field, x: &[Fq]) -> Fq {
    let a = field.mul(x[0], x[1]);
    let b = field.mul(x[2], x[3]);
    let c = field.mul(x[4], x[5]);
    field.add(field.sub(a, b), c)
}

fn cone_polar(field: &Field, x: &[Fq], y: &[Fq]) -> Fq {
    let f = |i: usize, j: usize| field.add(field.mul(x[i], y[j]), field.mul(x[j], y[i]));
    field.add(field.sub(f(0, 1), f(2, 3)), f(4, 5))
}

fn totally_singular(field: &Field, m: &Subspace) -> bool {
    let b = m.basis();
    b.iter().all(|v| cone_form(field, v).is_zero())
        && (0..b.len()).all(|i| (i + 1..b.len()).all(|j| cone_polar(field, &b[i], &b[j]).is_zero()))
}

/// The fixed generator `<e1, e3, e5>`.
pub fn cone_base_plane() -> Subspace {
    Subspace::coordinate(6, [0, 2, 4])
}

/// All totally singular 3-spaces of the cone form, and the subfamily of
/// those meeting `<e1, e3, e5>` in dimension 1 or 3.
pub fn cone_spaces(field: &Field) -> Result<(SpaceFamily, SpaceFamily), GeomError> {
    let m0 = cone_base_plane();
    let mut all = Vec::new();
    let mut same = Vec::new();
    for m in SubspaceIter::new(field, 6, 3)? {
        if !totally_singular(field, &m) {
            continue;
        }
        let dm = m.meet(field, &m0)?.dim();
        if dm == 1 || dm == 3 {
            same.push(m.clone());
        }
        all.push(m);
    }
    Ok((
        SpaceFamily::new(field, 6, all)?,
        SpaceFamily::new(field, 6, same)?,
    ))
}
