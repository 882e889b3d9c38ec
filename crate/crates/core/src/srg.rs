//! Strongly regular graph parameters and their spectral data.

use num_integer::Roots;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

type Q = Ratio<i128>;

/// Parameters `(v, k, lambda, mu)` of a strongly regular graph together with
/// its restricted eigenvalues `r > s` and their multiplicities `f`, `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Srg {
    pub v: i64,
    pub k: i64,
    pub lambda: i64,
    pub mu: i64,
    pub r: i64,
    pub s: i64,
    pub f: i64,
    pub g: i64,
}

impl Srg {
    /// Short form `(v,k,lambda,mu)`.
    pub fn tuple(&self) -> (i64, i64, i64, i64) {
        (self.v, self.k, self.lambda, self.mu)
    }

    pub fn label(&self) -> String {
        format!("({},{},{},{})", self.v, self.k, self.lambda, self.mu)
    }

    /// Standard Krein inequalities.
    pub fn krein_ok(&self) -> bool {
        let (k, r, s) = (self.k as i128, self.r as i128, self.s as i128);
        (r + 1) * (k + r + 2 * r * s) <= (k + r) * (s + 1) * (s + 1)
            && (s + 1) * (k + s + 2 * r * s) <= (k + s) * (r + 1) * (r + 1)
    }
}

/// Why a parameter set fails to be a feasible SRG.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SrgDefect {
    NonIntegralEigenvalue(String),
    NonIntegralMultiplicity(String),
    NegativeMultiplicity,
    NegativeLambda,
    MuOutOfRange,
    Krein,
}

impl std::fmt::Display for SrgDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SrgDefect::NonIntegralEigenvalue(x) => write!(f, "eigenvalue {x} not integral"),
            SrgDefect::NonIntegralMultiplicity(x) => write!(f, "multiplicity {x} not integral"),
            SrgDefect::NegativeMultiplicity => write!(f, "negative multiplicity"),
            SrgDefect::NegativeLambda => write!(f, "lambda < 0"),
            SrgDefect::MuOutOfRange => write!(f, "mu outside (0, k]"),
            SrgDefect::Krein => write!(f, "Krein condition fails"),
        }
    }
}

fn to_int(x: Q) -> Option<i64> {
    x.is_integer().then(|| *x.numer() as i64)
}

/// Completes `(v, k, r, s)` to a full parameter set: `mu = k + rs`,
/// `lambda = mu + r + s`, and multiplicities from `f + g = v - 1`,
/// `k + f r + g s = 0`. Checks integrality, ranges and Krein.
pub fn from_eigenvalues(v: Q, k: Q, r: Q, s: Q) -> Result<Srg, SrgDefect> {
    let ri = to_int(r).ok_or_else(|| SrgDefect::NonIntegralEigenvalue(r.to_string()))?;
    let si = to_int(s).ok_or_else(|| SrgDefect::NonIntegralEigenvalue(s.to_string()))?;
    let mu = k + r * s;
    let lambda = mu + r + s;
    if r == s {
        return Err(SrgDefect::NonIntegralMultiplicity("r = s".into()));
    }
    let f = (-k - (v - Q::from_integer(1)) * s) / (r - s);
    let g = v - Q::from_integer(1) - f;
    let fi = to_int(f).ok_or_else(|| SrgDefect::NonIntegralMultiplicity(f.to_string()))?;
    let gi = to_int(g).ok_or_else(|| SrgDefect::NonIntegralMultiplicity(g.to_string()))?;
    let vi = to_int(v).ok_or_else(|| SrgDefect::NonIntegralMultiplicity(v.to_string()))?;
    let ki = to_int(k).ok_or_else(|| SrgDefect::NonIntegralMultiplicity(k.to_string()))?;
    if fi < 0 || gi < 0 {
        return Err(SrgDefect::NegativeMultiplicity);
    }
    let srg = Srg {
        v: vi,
        k: ki,
        lambda: to_int(lambda).expect("integral"),
        mu: to_int(mu).expect("integral"),
        r: ri,
        s: si,
        f: fi,
        g: gi,
    };
    if srg.lambda < 0 {
        return Err(SrgDefect::NegativeLambda);
    }
    if srg.mu <= 0 || srg.mu > srg.k {
        return Err(SrgDefect::MuOutOfRange);
    }
    if !srg.krein_ok() {
        return Err(SrgDefect::Krein);
    }
    Ok(srg)
}

/// Restricted eigenvalues of a primitive SRG `(v, k, lambda, mu)`:
/// roots of `x^2 - (lambda - mu) x - (k - mu)`, if rational.
pub fn eigenvalues(k: i64, lambda: i64, mu: i64) -> Option<(i64, i64)> {
    let b = (lambda - mu) as i128;
    let disc = b * b + 4 * (k - mu) as i128;
    if disc < 0 {
        return None;
    }
    let root = disc.sqrt();
    if root * root != disc || (b + root) % 2 != 0 {
        return None;
    }
    Some((((b + root) / 2) as i64, ((b - root) / 2) as i64))
}

/// Full parameter set from `(v, k, lambda, mu)`.
pub fn from_parameters(v: i64, k: i64, lambda: i64, mu: i64) -> Result<Srg, SrgDefect> {
    let (r, s) = eigenvalues(k, lambda, mu)
        .ok_or_else(|| SrgDefect::NonIntegralEigenvalue(format!("disc of ({v},{k},{lambda},{mu})")))?;
    let q = |x: i64| Q::from_integer(x as i128);
    from_eigenvalues(q(v), q(k), q(r), q(s))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn petersen() {
        let p = from_parameters(10, 3, 0, 1).unwrap();
        assert_eq!((p.r, p.s, p.f, p.g), (1, -2, 5, 4));
    }

    #[test]
    fn sporadic_half() {
        let m = from_parameters(729, 560, 433, 420).unwrap();
        assert_eq!((m.r, m.s, m.f, m.g), (20, -7, 168, 560));
    }

    #[test]
    fn pentagon_is_conference_not_integral() {
        assert!(from_parameters(5, 2, 0, 1).is_err());
    }

    #[test]
    fn krein_rejects_known_case() {
        // (28,9,0,4) is excluded by the Krein conditions.
        assert_eq!(from_parameters(28, 9, 0, 4).unwrap_err(), SrgDefect::Krein);
    }
}
