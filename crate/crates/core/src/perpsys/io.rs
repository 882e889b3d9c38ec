//! Text format for families of subspaces:
//!
//! ```text
//! q=2^1 modulus=0,1 n=3 k=1
//! 1,0,0;0,1,1
//! ...
//! ```
//!
//! The header fixes the field by its characteristic, degree and modulus
//! (coefficients lowest degree first). Each further line is one member,
//! given by spanning vectors separated by `;` with coordinates separated by
//! `,`. A coordinate is the element index `sum c_i p^i`, which for prime
//! fields is the residue itself.

use std::fmt;

use crate::geometry::SpaceFamily;
use crate::gf::{Field, Fq, GfError, Subspace};

use super::{PerpError, PerpSystem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerpParseError {
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for PerpParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.msg)
    }
}

impl std::error::Error for PerpParseError {}

/// A parsed perp file. Generators are kept exactly as written so that
/// serialization reproduces the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerpFile {
    pub field: Field,
    pub n: usize,
    pub k: usize,
    pub members: Vec<Vec<Vec<Fq>>>,
}

fn join<T: fmt::Display>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl PerpFile {
    /// Members written by their echelon bases.
    pub fn from_subspaces(field: &Field, n: usize, k: usize, members: &[Subspace]) -> PerpFile {
        PerpFile {
            field: field.clone(),
            n,
            k,
            members: members.iter().map(|m| m.basis().to_vec()).collect(),
        }
    }

    pub fn from_system(p: &PerpSystem) -> PerpFile {
        PerpFile::from_subspaces(p.field(), p.n(), p.k(), p.members())
    }

    /// A family of codimension-`k` subspaces, `k = n - dim`.
    pub fn from_family(f: &SpaceFamily) -> PerpFile {
        PerpFile::from_subspaces(f.field(), f.ambient(), f.ambient() - f.dim(), f.members())
    }

    pub fn to_text(&self) -> String {
        let f = &self.field;
        let mut s = format!(
            "q={}^{} modulus={} n={} k={}\n",
            f.p(),
            f.t(),
            join(f.modulus()),
            self.n,
            self.k
        );
        for m in &self.members {
            let vs: Vec<String> = m.iter().map(|v| join(v.iter().map(|x| x.0))).collect();
            s.push_str(&vs.join(";"));
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<PerpFile, PerpParseError> {
        let err = |line: usize, msg: String| PerpParseError { line, msg };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (_, header) = lines.next().ok_or_else(|| err(1, "missing header".into()))?;
        let mut q = None;
        let mut modulus = None;
        let mut n = None;
        let mut k = None;
        for tok in header.split_whitespace() {
            let (key, val) = tok.split_once('=').ok_or_else(|| err(1, format!("bad token {tok:?}")))?;
            let num = |v: &str| v.parse::<usize>().map_err(|_| err(1, format!("bad number in {tok:?}")));
            match key {
                "q" => {
                    let (p, t) = val.split_once('^').ok_or_else(|| err(1, "q must be written p^t".into()))?;
                    q = Some((num(p)? as u32, num(t)? as u32));
                }
                "modulus" => {
                    modulus = Some(val.split(',').map(|c| num(c).map(|x| x as u32)).collect::<Result<Vec<_>, _>>()?);
                }
                "n" => n = Some(num(val)?),
                "k" => k = Some(num(val)?),
                _ => return Err(err(1, format!("unknown key {key:?}"))),
            }
        }
        let missing = |what: &str| err(1, format!("header lacks {what}"));
        let (p, t) = q.ok_or_else(|| missing("q"))?;
        let modulus = modulus.ok_or_else(|| missing("modulus"))?;
        let (n, k) = (n.ok_or_else(|| missing("n"))?, k.ok_or_else(|| missing("k"))?);
        if modulus.len() != t as usize + 1 {
            return Err(err(1, format!("modulus has degree {} but t = {t}", modulus.len().saturating_sub(1))));
        }
        let field = Field::with_modulus(p, &modulus).map_err(|e| err(1, e.to_string()))?;
        let mut members = Vec::new();
        for (no, line) in lines {
            if line.trim().is_empty() {
                return Err(err(no, "empty line".into()));
            }
            let mut gens = Vec::new();
            for part in line.split(';') {
                let v = part
                    .split(',')
                    .map(|c| {
                        let x: u32 = c.trim().parse().map_err(|_| err(no, format!("bad coordinate {c:?}")))?;
                        field.element(x).ok_or_else(|| err(no, format!("coordinate {x} outside GF({})", field.q())))
                    })
                    .collect::<Result<Vec<Fq>, _>>()?;
                if v.len() != n {
                    return Err(err(no, format!("vector has {} coordinates, expected {n}", v.len())));
                }
                gens.push(v);
            }
            members.push(gens);
        }
        Ok(PerpFile { field, n, k, members })
    }

    pub fn subspaces(&self) -> Result<Vec<Subspace>, GfError> {
        self.members
            .iter()
            .map(|g| Subspace::span(&self.field, self.n, g))
            .collect()
    }

    /// Spans the members and checks the perp-system axioms.
    pub fn verify(&self) -> Result<PerpSystem, PerpError> {
        super::perp_verify(&self.field, self.n, self.k, self.subspaces()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::hyperoval;

    #[test]
    fn hyperoval_round_trip() {
        let f = Field::of_order(2).unwrap();
        let fam = hyperoval(&f).unwrap().dualize();
        let file = PerpFile::from_family(&fam);
        let text = file.to_text();
        assert!(text.starts_with("q=2^1 modulus=0,1 n=3 k=1\n"));
        let back = PerpFile::parse(&text).unwrap();
        assert_eq!(back.to_text(), text);
        let p = back.verify().unwrap();
        assert_eq!((p.d(), p.s()), (2, 4));
    }

    #[test]
    fn extension_field_round_trip() {
        let f = Field::of_order(4).unwrap();
        let fam = hyperoval(&f).unwrap().dualize();
        let text = PerpFile::from_family(&fam).to_text();
        assert_eq!(PerpFile::parse(&text).unwrap().to_text(), text);
    }

    #[test]
    fn errors_name_lines() {
        let good = "q=2^1 modulus=0,1 n=3 k=1\n1,0,0;0,1,0\n";
        assert!(PerpFile::parse(good).is_ok());
        let e = PerpFile::parse("q=2^1 modulus=0,1 n=3 k=1\n1,0,0;0,1,0\n1,0\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = PerpFile::parse("q=2^1 modulus=0,1 n=3 k=1\n1,0,2\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = PerpFile::parse("q=4^1 modulus=0,1 n=3 k=1\n").unwrap_err();
        assert_eq!(e.line, 1);
        assert_eq!(PerpFile::parse("").unwrap_err().line, 1);
        assert!(PerpFile::parse("q=2^1 n=3 k=1\n").is_err());
    }
}
