use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

/// Which class of the bipartition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    B,
    C,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::B => Side::C,
            Side::C => Side::B,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::B => "B",
            Side::C => "C",
        })
    }
}

/// Intersection array of a distance-biregular graph: valencies `k` (class B)
/// and `l` (class C) with the sequences `c_1, ..., c_dB` and `c_1, ..., c_dC`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntersectionArray {
    pub k: u64,
    pub l: u64,
    pub cb: Vec<u64>,
    pub cc: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrayParseError(pub String);

impl fmt::Display for ArrayParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bad intersection array: {}", self.0)
    }
}

impl std::error::Error for ArrayParseError {}

impl IntersectionArray {
    pub fn new(k: u64, cb: Vec<u64>, l: u64, cc: Vec<u64>) -> IntersectionArray {
        IntersectionArray { k, l, cb, cc }
    }

    /// Diameter-four array `{k; 1, c2B, c3B, k | l; 1, c2C, c3C, l}`.
    pub fn diameter_four(k: u64, c2b: u64, c3b: u64, l: u64, c2c: u64, c3c: u64) -> IntersectionArray {
        IntersectionArray::new(k, vec![1, c2b, c3b, k], l, vec![1, c2c, c3c, l])
    }

    pub fn valency(&self, side: Side) -> u64 {
        match side {
            Side::B => self.k,
            Side::C => self.l,
        }
    }

    /// `c_1, ..., c_e` for a vertex of the given side.
    pub fn c(&self, side: Side) -> &[u64] {
        match side {
            Side::B => &self.cb,
            Side::C => &self.cc,
        }
    }

    /// Covering radius (eccentricity) of the given side.
    pub fn radius(&self, side: Side) -> usize {
        self.c(side).len()
    }

    pub fn diameter(&self) -> usize {
        self.cb.len().max(self.cc.len())
    }

    /// `c_i` with `c_0 = 0`; `None` beyond the covering radius.
    pub fn c_at(&self, side: Side, i: usize) -> Option<u64> {
        if i == 0 {
            Some(0)
        } else {
            self.c(side).get(i - 1).copied()
        }
    }

    /// Valency of vertices at distance `i` from a vertex of `side`.
    pub fn valency_at(&self, side: Side, i: usize) -> u64 {
        if i % 2 == 0 {
            self.valency(side)
        } else {
            self.valency(side.other())
        }
    }

    /// `b_i = valency - c_i`; zero at the covering radius.
    pub fn b_at(&self, side: Side, i: usize) -> Option<u64> {
        let c = self.c_at(side, i)?;
        self.valency_at(side, i).checked_sub(c)
    }

    /// The same graph with the classes exchanged.
    pub fn swapped(&self) -> IntersectionArray {
        IntersectionArray::new(self.l, self.cc.clone(), self.k, self.cb.clone())
    }

    pub fn is_regular(&self) -> bool {
        self.k == self.l && self.cb == self.cc
    }

    /// Structural sanity: `c_1 = 1`, `c_i` at most the valency at distance
    /// `i`, nondecreasing, and the last entry equal to that valency.
    pub fn validate(&self) -> Result<(), String> {
        for side in [Side::B, Side::C] {
            let c = self.c(side);
            if c.is_empty() {
                return Err(format!("side {side} has an empty c-sequence"));
            }
            if c[0] != 1 {
                return Err(format!("c_1 = {} on side {side}", c[0]));
            }
            for (i, &ci) in c.iter().enumerate() {
                let v = self.valency_at(side, i + 1);
                if ci > v {
                    return Err(format!("c_{} = {ci} exceeds valency {v} on side {side}", i + 1));
                }
            }
            let e = c.len();
            if c[e - 1] != self.valency_at(side, e) {
                return Err(format!("last c on side {side} is not the valency"));
            }
        }
        Ok(())
    }

    /// Cell sizes `k_0, ..., k_e` of the distance partition from a vertex
    /// of `side`, via `k_(i+1) = k_i b_i / c_(i+1)`. Returns the index of the
    /// first non-integral cell on failure.
    pub fn cell_sizes(&self, side: Side) -> Result<Vec<u64>, usize> {
        let mut ks = vec![1u64];
        let e = self.radius(side);
        for i in 0..e {
            let b = self.b_at(side, i).ok_or(i + 1)? as u128;
            let c = self.c_at(side, i + 1).ok_or(i + 1)? as u128;
            let num = ks[i] as u128 * b;
            if c == 0 || num % c != 0 {
                return Err(i + 1);
            }
            ks.push((num / c) as u64);
        }
        Ok(ks)
    }

    /// Class sizes `(|B|, |C|)` counted from a B vertex.
    pub fn class_sizes(&self) -> Result<(u64, u64), usize> {
        let ks = self.cell_sizes(Side::B)?;
        let own = ks.iter().step_by(2).sum();
        let other = ks.iter().skip(1).step_by(2).sum();
        Ok((own, other))
    }

    /// Identities tying the two lines of a diameter-four array:
    /// `c2B c3B = c2C c3C` and `b1B b2B = b1C b2C`.
    pub fn line_identities(&self) -> Result<(), String> {
        if self.cb.len() != 4 || self.cc.len() != 4 {
            return Err("not a diameter-four array".into());
        }
        let (c2b, c3b, c2c, c3c) = (self.cb[1], self.cb[2], self.cc[1], self.cc[2]);
        if c2b * c3b != c2c * c3c {
            return Err(format!("c2B c3B = {} but c2C c3C = {}", c2b * c3b, c2c * c3c));
        }
        let bb = self.b_at(Side::B, 1).unwrap_or(0) * self.b_at(Side::B, 2).unwrap_or(0);
        let bc = self.b_at(Side::C, 1).unwrap_or(0) * self.b_at(Side::C, 2).unwrap_or(0);
        if bb != bc {
            return Err(format!("b1B b2B = {bb} but b1C b2C = {bc}"));
        }
        Ok(())
    }

    /// `c_i` as a rational, for formulas.
    pub fn cq(&self, side: Side, i: usize) -> Ratio<i128> {
        Ratio::from_integer(self.c_at(side, i).unwrap_or(0) as i128)
    }

    pub fn bq(&self, side: Side, i: usize) -> Ratio<i128> {
        Ratio::from_integer(self.b_at(side, i).unwrap_or(0) as i128)
    }
}

impl fmt::Display for IntersectionArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |c: &[u64]| c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{{{};{} | {};{}}}", self.k, j(&self.cb), self.l, j(&self.cc))
    }
}

impl FromStr for IntersectionArray {
    type Err = ArrayParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |m: &str| ArrayParseError(format!("{m} in {s:?}"));
        let t = s.trim();
        let inner = t
            .strip_prefix('{')
            .and_then(|x| x.strip_suffix('}'))
            .ok_or_else(|| err("missing braces"))?;
        let (lb, lc) = inner
            .split_once('|')
            .or_else(|| inner.split_once('/'))
            .ok_or_else(|| err("missing '|'"))?;
        let line = |part: &str| -> Result<(u64, Vec<u64>), ArrayParseError> {
            let (v, rest) = part.split_once(';').ok_or_else(|| err("missing ';'"))?;
            let v = v.trim().parse().map_err(|_| err("bad valency"))?;
            let cs = rest
                .split(',')
                .map(|x| x.trim().parse::<u64>().map_err(|_| err("bad entry")))
                .collect::<Result<Vec<_>, _>>()?;
            Ok((v, cs))
        };
        let (k, cb) = line(lb)?;
        let (l, cc) = line(lc)?;
        Ok(IntersectionArray { k, l, cb, cc })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_round_trip() {
        let a = IntersectionArray::diameter_four(6, 2, 10, 16, 4, 5);
        let s = a.to_string();
        assert_eq!(s, "{6;1,2,10,6 | 16;1,4,5,16}");
        assert_eq!(s.parse::<IntersectionArray>().unwrap(), a);
        assert!("{6;1,2 16;1}".parse::<IntersectionArray>().is_err());
    }

    #[test]
    fn row_one_counts() {
        let a = IntersectionArray::diameter_four(6, 2, 10, 16, 4, 5);
        assert_eq!(a.class_sizes().unwrap(), (64, 24));
        assert_eq!(a.cell_sizes(Side::B).unwrap(), vec![1, 6, 45, 18, 18]);
        assert!(a.line_identities().is_ok());
        assert!(a.validate().is_ok());
    }

    #[test]
    fn sporadic_counts() {
        let a = IntersectionArray::diameter_four(21, 3, 60, 81, 9, 20);
        assert_eq!(a.class_sizes().unwrap(), (729, 189));
    }

    #[test]
    fn non_integral_cells() {
        let a = IntersectionArray::diameter_four(6, 4, 5, 16, 4, 5);
        assert!(a.class_sizes().is_err());
        let b = IntersectionArray::diameter_four(6, 2, 9, 16, 4, 5);
        assert!(b.line_identities().is_err());
    }
}
