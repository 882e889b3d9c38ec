use std::fmt;

use super::{Field, Fq, GfError};

/// Reduces `rows` in place to reduced row echelon form, dropping zero rows.
/// Returns the pivot columns.
pub(crate) fn rref(field: &Field, rows: &mut Vec<Vec<Fq>>, n: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let lead = rows[r][col];
        if lead != Fq::ONE {
            let c = field.inv(lead).expect("nonzero pivot");
            field.scale(c, &mut rows[r]);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let c = field.neg(row[col]);
                field.axpy(c, &pivot_row, row);
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// A subspace of `F_q^n`, stored by its reduced echelon basis.
///
/// Equality, hashing and ordering all go through the echelon basis, so two
/// values are equal exactly when they describe the same subspace.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    n: usize,
    rows: Vec<Vec<Fq>>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let s: Vec<String> = r.iter().map(|x| x.0.to_string()).collect();
            write!(f, "{}", s.join(","))?;
        }
        write!(f, ">/{}", self.n)
    }
}

impl Subspace {
    pub fn span<V: AsRef<[Fq]>>(
        field: &Field,
        n: usize,
        vectors: impl IntoIterator<Item = V>,
    ) -> Result<Subspace, GfError> {
        let mut rows = Vec::new();
        for v in vectors {
            let v = v.as_ref();
            if v.len() != n {
                return Err(GfError::DimensionMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
            if let Some(x) = v.iter().find(|x| x.0 >= field.q()) {
                return Err(GfError::BadCoordinate(x.0.to_string()));
            }
            rows.push(v.to_vec());
        }
        rref(field, &mut rows, n);
        Ok(Subspace { n, rows })
    }

    pub fn zero(n: usize) -> Subspace {
        Subspace { n, rows: Vec::new() }
    }

    pub fn whole(n: usize) -> Subspace {
        let rows = (0..n)
            .map(|i| {
                let mut v = vec![Fq::ZERO; n];
                v[i] = Fq::ONE;
                v
            })
            .collect();
        Subspace { n, rows }
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(n: usize, indices: impl IntoIterator<Item = usize>) -> Subspace {
        let mut idx: Vec<usize> = indices.into_iter().filter(|&i| i < n).collect();
        idx.sort_unstable();
        idx.dedup();
        let rows = idx
            .into_iter()
            .map(|i| {
                let mut v = vec![Fq::ZERO; n];
                v[i] = Fq::ONE;
                v
            })
            .collect();
        Subspace { n, rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Vec<Fq>] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| r.iter().position(|x| !x.is_zero()).expect("nonzero row"))
            .collect()
    }

    fn free_columns(&self) -> Vec<usize> {
        let piv = self.pivots();
        (0..self.n).filter(|c| !piv.contains(c)).collect()
    }

    fn check_len(&self, v: &[Fq]) -> Result<(), GfError> {
        if v.len() != self.n {
            return Err(GfError::DimensionMismatch {
                expected: self.n,
                found: v.len(),
            });
        }
        Ok(())
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), GfError> {
        if self.n != other.n {
            return Err(GfError::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// Canonical representative of the coset `v + self`: the unique element
    /// that vanishes on every pivot column.
    pub fn reduce(&self, field: &Field, v: &[Fq]) -> Vec<Fq> {
        let mut out = v.to_vec();
        for row in &self.rows {
            let p = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
            let c = out[p];
            if !c.is_zero() {
                field.axpy(field.neg(c), row, &mut out);
            }
        }
        out
    }

    pub fn contains(&self, field: &Field, v: &[Fq]) -> bool {
        v.len() == self.n && self.reduce(field, v).iter().all(|x| x.is_zero())
    }

    pub fn contains_subspace(&self, field: &Field, other: &Subspace) -> bool {
        other.n == self.n && other.rows.iter().all(|r| self.contains(field, r))
    }

    pub fn join(&self, field: &Field, other: &Subspace) -> Result<Subspace, GfError> {
        self.check_ambient(other)?;
        Subspace::span(field, self.n, self.rows.iter().chain(&other.rows))
    }

    /// Orthogonal complement under the standard dot product.
    pub fn orthogonal(&self, field: &Field) -> Subspace {
        let piv = self.pivots();
        let free = self.free_columns();
        let rows = free
            .iter()
            .map(|&f| {
                let mut v = vec![Fq::ZERO; self.n];
                v[f] = Fq::ONE;
                for (row, &p) in self.rows.iter().zip(&piv) {
                    v[p] = field.neg(row[f]);
                }
                v
            })
            .collect();
        let mut rows = rows;
        rref(field, &mut rows, self.n);
        Subspace { n: self.n, rows }
    }

    pub fn meet(&self, field: &Field, other: &Subspace) -> Result<Subspace, GfError> {
        self.check_ambient(other)?;
        let j = self.orthogonal(field).join(field, &other.orthogonal(field))?;
        Ok(j.orthogonal(field))
    }

    /// Number of cosets of this subspace, `q^(n - dim)`.
    pub fn coset_count(&self, field: &Field) -> u64 {
        (field.q() as u64).pow((self.n - self.dim()) as u32)
    }

    /// Index of the coset `v + self` in the order of [`Subspace::cosets`].
    pub fn coset_index(&self, field: &Field, v: &[Fq]) -> Result<u64, GfError> {
        self.check_len(v)?;
        let r = self.reduce(field, v);
        let q = field.q() as u64;
        Ok(self
            .free_columns()
            .iter()
            .fold(0u64, |acc, &c| acc * q + r[c].0 as u64))
    }

    /// Canonical coset representatives in lexicographic order.
    pub fn cosets(&self, field: &Field) -> CosetReps {
        CosetReps {
            field: field.clone(),
            n: self.n,
            free: self.free_columns(),
            next: 0,
            count: self.coset_count(field),
        }
    }

    /// All vectors of the subspace, in lexicographic order of coefficients.
    pub fn vectors(&self, field: &Field) -> Vec<Vec<Fq>> {
        let q = field.q() as u64;
        let m = self.dim();
        let total = q.pow(m as u32);
        (0..total)
            .map(|i| {
                let coef = field.vector(m, i);
                let mut v = vec![Fq::ZERO; self.n];
                for (c, row) in coef.iter().zip(&self.rows) {
                    field.axpy(*c, row, &mut v);
                }
                v
            })
            .collect()
    }

    /// Normalized nonzero vectors (first nonzero coordinate 1), i.e. the
    /// projective points of this subspace.
    pub fn points(&self, field: &Field) -> Vec<Vec<Fq>> {
        let mut out: Vec<Vec<Fq>> = self
            .vectors(field)
            .into_iter()
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .filter(|v| v.iter().find(|x| !x.is_zero()) == Some(&Fq::ONE))
            .collect();
        out.sort();
        out
    }
}

/// Iterator over canonical coset representatives of a subspace.
pub struct CosetReps {
    field: Field,
    n: usize,
    free: Vec<usize>,
    next: u64,
    count: u64,
}

impl Iterator for CosetReps {
    type Item = Vec<Fq>;

    fn next(&mut self) -> Option<Vec<Fq>> {
        if self.next >= self.count {
            return None;
        }
        let digits = self.field.vector(self.free.len(), self.next);
        self.next += 1;
        let mut v = vec![Fq::ZERO; self.n];
        for (&c, d) in self.free.iter().zip(digits) {
            v[c] = d;
        }
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = (self.count - self.next) as usize;
        (r, Some(r))
    }
}

/// Gaussian binomial coefficient: the number of `m`-dimensional subspaces of
/// an `n`-dimensional space over a field of order `q`.
pub fn qbinom(n: u32, m: u32, q: u64) -> Result<u128, GfError> {
    if m > n {
        return Err(GfError::OutOfRange {
            what: "subspace dimension",
            value: m as u64,
            max: n as u64,
        });
    }
    let q = q as u128;
    let m = m.min(n - m);
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..m {
        let a = q
            .checked_pow(n - i)
            .ok_or(GfError::Overflow)?
            .checked_sub(1)
            .ok_or(GfError::Overflow)?;
        let b = q.checked_pow(i + 1).ok_or(GfError::Overflow)? - 1;
        num = num.checked_mul(a).ok_or(GfError::Overflow)?;
        den = den.checked_mul(b).ok_or(GfError::Overflow)?;
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    Ok(num / den)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Deterministic enumeration of the `m`-dimensional subspaces of `F_q^n`:
/// pivot sets in lexicographic order, then free entries as an odometer.
pub struct SubspaceIter {
    field: Field,
    n: usize,
    m: usize,
    pivots: Option<Vec<usize>>,
    // positions (row, col) of the free entries for the current pivots
    slots: Vec<(usize, usize)>,
    counter: Vec<u32>,
    fresh: bool,
}

impl SubspaceIter {
    pub fn new(field: &Field, n: usize, m: usize) -> Result<SubspaceIter, GfError> {
        if m > n {
            return Err(GfError::OutOfRange {
                what: "subspace dimension",
                value: m as u64,
                max: n as u64,
            });
        }
        let mut it = SubspaceIter {
            field: field.clone(),
            n,
            m,
            pivots: Some((0..m).collect()),
            slots: Vec::new(),
            counter: Vec::new(),
            fresh: true,
        };
        it.reset_slots();
        Ok(it)
    }

    fn reset_slots(&mut self) {
        self.slots.clear();
        if let Some(piv) = &self.pivots {
            for (r, &p) in piv.iter().enumerate() {
                for c in p + 1..self.n {
                    if !piv.contains(&c) {
                        self.slots.push((r, c));
                    }
                }
            }
        }
        // Lexicographic order of the echelon matrix: row-major slot order
        // with the last slot varying fastest.
        self.counter = vec![0; self.slots.len()];
        self.fresh = true;
    }

    fn advance_pivots(&mut self) {
        let Some(piv) = self.pivots.as_mut() else {
            return;
        };
        let (n, m) = (self.n, self.m);
        let mut i = m;
        loop {
            if i == 0 {
                self.pivots = None;
                return;
            }
            i -= 1;
            if piv[i] < n - m + i {
                piv[i] += 1;
                for j in i + 1..m {
                    piv[j] = piv[j - 1] + 1;
                }
                break;
            }
        }
        self.reset_slots();
    }

    fn current(&self) -> Subspace {
        let piv = self.pivots.as_ref().expect("active");
        let mut rows = vec![vec![Fq::ZERO; self.n]; self.m];
        for (r, &p) in piv.iter().enumerate() {
            rows[r][p] = Fq::ONE;
        }
        for (&(r, c), &x) in self.slots.iter().zip(&self.counter) {
            rows[r][c] = Fq(x);
        }
        Subspace { n: self.n, rows }
    }
}

impl Iterator for SubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        loop {
            self.pivots.as_ref()?;
            if self.fresh {
                self.fresh = false;
                return Some(self.current());
            }
            let q = self.field.q();
            let mut i = self.counter.len();
            let mut carried = true;
            while i > 0 {
                i -= 1;
                self.counter[i] += 1;
                if self.counter[i] < q {
                    carried = false;
                    break;
                }
                self.counter[i] = 0;
            }
            if !carried {
                return Some(self.current());
            }
            self.advance_pivots();
        }
    }
}

/// Projective points of `PG(n-1, q)` as normalized vectors, in
/// lexicographic order.
pub fn points(field: &Field, n: usize) -> impl Iterator<Item = Vec<Fq>> {
    SubspaceIter::new(field, n, 1)
        .expect("1 <= n")
        .map(|s| s.rows.into_iter().next().expect("one row"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[u32]) -> Vec<Fq> {
        xs.iter().map(|&x| Fq(x)).collect()
    }

    #[test]
    fn span_reduces() {
        let f = Field::new(2, 1).unwrap();
        let s = Subspace::span(&f, 3, [v(&[1, 1, 0]), v(&[0, 1, 1]), v(&[1, 0, 1])]).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.basis(), &[v(&[1, 0, 1]), v(&[0, 1, 1])]);
        let z = Subspace::span(&f, 3, Vec::<Vec<Fq>>::new()).unwrap();
        assert_eq!(z.dim(), 0);
        assert_eq!(Subspace::span(&f, 3, [v(&[1, 0])]).unwrap_err(),
            GfError::DimensionMismatch { expected: 3, found: 2 });
    }

    #[test]
    fn standard_basis_is_identity() {
        let f = Field::new(3, 1).unwrap();
        let s = Subspace::span(&f, 4, Subspace::whole(4).basis()).unwrap();
        assert_eq!(s, Subspace::whole(4));
    }

    #[test]
    fn enumeration_counts() {
        let f2 = Field::new(2, 1).unwrap();
        assert_eq!(SubspaceIter::new(&f2, 4, 2).unwrap().count(), 35);
        let f3 = Field::new(3, 1).unwrap();
        assert_eq!(SubspaceIter::new(&f3, 6, 5).unwrap().count(), 364);
        assert_eq!(SubspaceIter::new(&f3, 6, 0).unwrap().count(), 1);
        let mut all: Vec<_> = SubspaceIter::new(&f2, 4, 2).unwrap().collect();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 35);
    }

    #[test]
    fn qbinom_values() {
        assert_eq!(qbinom(4, 1, 2).unwrap(), 15);
        assert_eq!(qbinom(4, 2, 2).unwrap(), 35);
        assert_eq!(qbinom(6, 4, 3).unwrap(), 11011);
        assert!(qbinom(2, 3, 2).is_err());
    }

    #[test]
    fn cosets_of_four_space() {
        let f = Field::new(3, 1).unwrap();
        let m = Subspace::coordinate(6, 0..4);
        let reps: Vec<_> = m.cosets(&f).collect();
        assert_eq!(reps.len(), 9);
        for (i, r) in reps.iter().enumerate() {
            assert_eq!(m.coset_index(&f, r).unwrap(), i as u64);
        }
    }

    #[test]
    fn meet_of_planes() {
        let f = Field::new(2, 1).unwrap();
        let a = Subspace::coordinate(3, [0, 1]);
        let b = Subspace::coordinate(3, [1, 2]);
        assert_eq!(a.meet(&f, &b).unwrap(), Subspace::coordinate(3, [1]));
        assert_eq!(a.join(&f, &b).unwrap().dim(), 3);
    }
}
