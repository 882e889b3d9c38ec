//! Curated knowledge about specific arrays (which ones are realized, which
//! halved parameters have known strongly regular graphs), joined against
//! computed verdicts.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{CandidateArray, FeasibilityReport, Status};
use crate::bigraph::IntersectionArray;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Known {
    Exists,
    New,
    Unknown,
    Infeasible,
}

impl Known {
    pub fn realized(self) -> bool {
        matches!(self, Known::Exists | Known::New)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub array: String,
    pub status: Known,
    pub srg_b: [i64; 4],
    pub srg_b_known: bool,
    pub srg_c: [i64; 4],
    pub srg_c_known: bool,
    #[serde(default)]
    pub note: Option<String>,
}

#[derive(Debug, Deserialize)]
struct File {
    #[serde(default)]
    row: Vec<CatalogEntry>,
}

#[derive(Clone, Debug)]
pub struct Catalog {
    entries: Vec<(CandidateArray, CatalogEntry)>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("catalog is not valid TOML: {0}")]
    Toml(String),
    #[error("catalog row {row}: {msg}")]
    Row { row: usize, msg: String },
    #[error("catalog rows {0} and {1} name the same array")]
    Duplicate(usize, usize),
    #[error("{array} is computed infeasible ({reasons}) but the catalog says it is realized")]
    Conflict { array: String, reasons: String },
    #[error("{array}: catalog halved parameters {catalog:?} differ from computed {computed:?}")]
    SrgMismatch {
        array: String,
        catalog: [i64; 4],
        computed: Option<[i64; 4]>,
    },
}

pub const DEFAULT_CATALOG: &str = include_str!("../../data/catalog.toml");

pub fn default_catalog() -> Catalog {
    Catalog::parse(DEFAULT_CATALOG).expect("bundled catalog parses")
}

impl Catalog {
    /// Parses the TOML catalog. Arrays are stored in canonical orientation
    /// with the halved parameters swapped to match.
    pub fn parse(text: &str) -> Result<Catalog, CatalogError> {
        let f: File = toml::from_str(text).map_err(|e| CatalogError::Toml(e.to_string()))?;
        let mut entries = Vec::new();
        let mut seen = HashMap::new();
        for (i, mut e) in f.row.into_iter().enumerate() {
            let arr: IntersectionArray = e.array.parse().map_err(|x: crate::bigraph::ArrayParseError| CatalogError::Row {
                row: i,
                msg: x.to_string(),
            })?;
            let a = CandidateArray::from_array(&arr).ok_or_else(|| CatalogError::Row {
                row: i,
                msg: "not a diameter-four array".into(),
            })?;
            let c = a.canonical();
            if c != a {
                std::mem::swap(&mut e.srg_b, &mut e.srg_c);
                std::mem::swap(&mut e.srg_b_known, &mut e.srg_c_known);
            }
            if let Some(j) = seen.insert(c, i) {
                return Err(CatalogError::Duplicate(j, i));
            }
            entries.push((c, e));
        }
        Ok(Catalog { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries keyed by canonical array.
    pub fn entries(&self) -> &[(CandidateArray, CatalogEntry)] {
        &self.entries
    }

    pub fn get(&self, a: &CandidateArray) -> Option<&CatalogEntry> {
        let c = a.canonical();
        self.entries.iter().find(|(x, _)| *x == c).map(|(_, e)| e)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Annotated {
    /// Computed rows that the catalog lists, with the catalog entry.
    pub matched: Vec<(FeasibilityReport, CatalogEntry)>,
    /// Catalog rows absent from the computed table.
    pub missing: Vec<CatalogEntry>,
    /// Computed rows not rejected and not in the catalog.
    pub extras: Vec<FeasibilityReport>,
}

fn tuple4(s: &crate::srg::Srg) -> [i64; 4] {
    [s.v, s.k, s.lambda, s.mu]
}

/// Joins computed reports with the catalog. Rows the catalog calls realized
/// must be computed feasible, and every catalog halved-parameter tuple must
/// agree with the computed one.
pub fn catalog_annotate(table: &[FeasibilityReport], catalog: &Catalog) -> Result<Annotated, CatalogError> {
    let mut matched = Vec::new();
    let mut extras = Vec::new();
    let mut hit = vec![false; catalog.len()];
    for r in table {
        let c = r.array.canonical();
        let Some(pos) = catalog.entries.iter().position(|(x, _)| *x == c) else {
            if r.status != Status::Infeasible {
                extras.push(r.clone());
            }
            continue;
        };
        hit[pos] = true;
        let e = &catalog.entries[pos].1;
        if e.status.realized() && r.status == Status::Infeasible {
            return Err(CatalogError::Conflict {
                array: c.to_string(),
                reasons: r.reasons().join("; "),
            });
        }
        let (sb, sc) = if c == r.array { (r.srg_b, r.srg_c) } else { (r.srg_c, r.srg_b) };
        for (want, got) in [(e.srg_b, sb), (e.srg_c, sc)] {
            let got = got.as_ref().map(tuple4);
            // A rejected SRG is tolerated only for rows the catalog rejects.
            if got != Some(want) && !(got.is_none() && e.status == Known::Infeasible) {
                return Err(CatalogError::SrgMismatch {
                    array: c.to_string(),
                    catalog: want,
                    computed: got,
                });
            }
        }
        matched.push((r.clone(), e.clone()));
    }
    let missing = catalog
        .entries
        .iter()
        .zip(&hit)
        .filter(|(_, h)| !**h)
        .map(|((_, e), _)| e.clone())
        .collect();
    Ok(Annotated { matched, missing, extras })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasibility::assess;

    #[test]
    fn bundled_catalog() {
        let c = default_catalog();
        assert_eq!(c.len(), 38);
        let row1 = c.get(&CandidateArray::new(6, 2, 10, 16, 4, 5)).unwrap();
        assert_eq!(row1.note.as_deref(), Some("exists: gen_delorme q=4"));
        let odd = c.get(&CandidateArray::new(15, 3, 28, 36, 6, 14)).unwrap();
        assert_eq!(odd.note.as_deref(), Some("unknown; only known SRG does not work"));
    }

    #[test]
    fn swapped_lookup() {
        let c = default_catalog();
        let a = CandidateArray::new(16, 4, 5, 6, 2, 10);
        assert_eq!(c.get(&a).unwrap().status, Known::Exists);
    }

    #[test]
    fn conflict_is_error() {
        let text = r#"
[[row]]
array = "{12;1,3,33,12 | 45;1,9,11,45}"
status = "exists"
srg_b = [225,176,139,132]
srg_b_known = false
srg_c = [60,55,50,55]
srg_c_known = true
"#;
        let cat = Catalog::parse(text).unwrap();
        let r = assess(&CandidateArray::new(12, 3, 33, 45, 9, 11));
        assert!(matches!(catalog_annotate(&[r], &cat), Err(CatalogError::Conflict { .. })));
    }

    #[test]
    fn malformed() {
        assert!(matches!(Catalog::parse("[[row]]\narray = 3"), Err(CatalogError::Toml(_))));
        let bad = "[[row]]\narray = \"{3;1,3 | 3;1,3}\"\nstatus = \"exists\"\nsrg_b = [1,1,1,1]\nsrg_b_known = true\nsrg_c = [1,1,1,1]\nsrg_c_known = true\n";
        assert!(matches!(Catalog::parse(bad), Err(CatalogError::Row { .. })));
        let dup = format!("{0}\n{0}", DEFAULT_CATALOG.split("\n\n[[row]]").nth(1).map(|s| format!("[[row]]{s}")).unwrap());
        assert!(matches!(Catalog::parse(&dup), Err(CatalogError::Duplicate(0, 1))));
    }

    #[test]
    fn full_table_against_catalog() {
        let t = crate::feasibility::enumerate_feasible(1300);
        let a = catalog_annotate(&t, &default_catalog()).unwrap();
        assert!(a.missing.is_empty(), "{:?}", a.missing);
        assert_eq!(a.matched.len(), 38);
        eprintln!("rows {} extras {}", t.len(), a.extras.len());
        for x in &a.extras {
            eprintln!("extra {} {}", x.array, x.status);
        }
    }
}
