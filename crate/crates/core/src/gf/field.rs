use std::fmt;
use std::sync::Arc;

use super::GfError;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

/// A field element, stored as the index `sum c_i p^i` of its coefficient
/// vector in the polynomial basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fq(pub u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Inner {
    p: u32,
    t: u32,
    q: u32,
    modulus: Vec<u32>,
    primitive: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
}

/// The finite field GF(p^t). Cloning is cheap.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.t)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^t` if it is a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 || q > u32::MAX as u64 {
        return None;
    }
    let q = q as u32;
    let mut p = 2u32;
    while p <= q {
        if q % p == 0 {
            break;
        }
        p += 1;
    }
    let mut m = q;
    let mut t = 0;
    while m % p == 0 {
        m /= p;
        t += 1;
    }
    if m == 1 {
        Some((p, t))
    } else {
        None
    }
}

// Polynomials over F_p as coefficient vectors, lowest degree first.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while r.len() > db {
        let dr = r.len() - 1;
        let c = (r[dr] as u64 * lead_inv as u64 % p as u64) as u32;
        for i in 0..=db {
            let sub = (c as u64 * b[i] as u64 % p as u64) as u32;
            let idx = dr - db + i;
            r[idx] = (r[idx] + p - sub) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

fn digits(mut x: u32, p: u32, t: u32) -> Vec<u32> {
    let mut d = Vec::with_capacity(t as usize);
    for _ in 0..t {
        d.push(x % p);
        x /= p;
    }
    d
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

fn monic_from_code(code: u32, p: u32, deg: u32) -> Vec<u32> {
    let mut m = digits(code, p, deg);
    m.push(1);
    m
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let t = (m.len() - 1) as u32;
    for d in 1..=t / 2 {
        let count = (p as u64).pow(d);
        for code in 0..count {
            let f = monic_from_code(code as u32, p, d);
            if poly_rem(m, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Least monic irreducible polynomial of degree `t` over F_p, where
/// polynomials are compared by the integer `sum c_i p^i` of their lower
/// coefficients. Returned lowest degree first, including the leading 1.
pub fn default_modulus(p: u32, t: u32) -> Vec<u32> {
    let count = (p as u64).pow(t);
    for code in 0..count {
        let m = monic_from_code(code as u32, p, t);
        if is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

fn mul_slow(a: u32, b: u32, p: u32, modulus: &[u32]) -> u32 {
    let t = modulus.len() - 1;
    let da = digits(a, p, t as u32);
    let db = digits(b, p, t as u32);
    let mut prod = vec![0u64; 2 * t];
    for i in 0..t {
        if da[i] == 0 {
            continue;
        }
        for j in 0..t {
            prod[i + j] += da[i] as u64 * db[j] as u64;
        }
    }
    let prod: Vec<u32> = prod.iter().map(|&c| (c % p as u64) as u32).collect();
    let mut r = poly_rem(&prod, modulus, p);
    r.resize(t, 0);
    undigits(&r, p)
}

impl Field {
    /// GF(p^t) with the default modulus.
    pub fn new(p: u32, t: u32) -> Result<Field, GfError> {
        Self::check_params(p, t)?;
        let m = default_modulus(p, t);
        Self::build(p, t, m)
    }

    /// GF(q) for a prime power `q`.
    pub fn of_order(q: u64) -> Result<Field, GfError> {
        let (p, t) = prime_power(q).ok_or(GfError::NotPrimePower(q))?;
        Self::new(p, t)
    }

    /// GF(p^t) with an explicit monic modulus, lowest degree first.
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Field, GfError> {
        if modulus.len() < 2 {
            return Err(GfError::ZeroDegree);
        }
        let t = (modulus.len() - 1) as u32;
        Self::check_params(p, t)?;
        if modulus[t as usize] != 1 || modulus.iter().any(|&c| c >= p) || !is_irreducible(modulus, p)
        {
            return Err(GfError::BadModulus(modulus.to_vec()));
        }
        Self::build(p, t, modulus.to_vec())
    }

    fn check_params(p: u32, t: u32) -> Result<(), GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if t == 0 {
            return Err(GfError::ZeroDegree);
        }
        let q = (p as u64).checked_pow(t);
        match q {
            Some(q) if q <= MAX_ORDER => Ok(()),
            _ => Err(GfError::TooLarge { p, t }),
        }
    }

    fn build(p: u32, t: u32, modulus: Vec<u32>) -> Result<Field, GfError> {
        let q = p.pow(t);
        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; q as usize];
        let mut primitive = 1;
        if q == 2 {
            exp = vec![1, 1];
        } else {
            'search: for g in 2..q {
                let mut x = 1u32;
                for i in 0..n {
                    if i > 0 && x == 1 {
                        continue 'search;
                    }
                    exp[i] = x;
                    x = mul_slow(x, g, p, &modulus);
                }
                if x != 1 {
                    continue;
                }
                primitive = g;
                break;
            }
            if q > 2 && primitive == 1 {
                // Only reachable for a reducible modulus, which is rejected earlier.
                return Err(GfError::BadModulus(modulus));
            }
            for i in 0..n {
                exp[n + i] = exp[i];
            }
        }
        for (i, &x) in exp.iter().take(n).enumerate() {
            log[x as usize] = i as u32;
        }
        let neg: Vec<u32> = (0..q)
            .map(|x| undigits(&digits(x, p, t).iter().map(|&c| (p - c) % p).collect::<Vec<_>>(), p))
            .collect();
        let add = if p != 2 && q <= 256 {
            let mut tab = vec![0u32; (q * q) as usize];
            for a in 0..q {
                let da = digits(a, p, t);
                for b in 0..q {
                    let db = digits(b, p, t);
                    let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    tab[(a * q + b) as usize] = undigits(&s, p);
                }
            }
            Some(tab)
        } else {
            None
        };
        Ok(Field(Arc::new(Inner {
            p,
            t,
            q,
            modulus,
            primitive,
            exp,
            log,
            neg,
            add,
        })))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn t(&self) -> u32 {
        self.0.t
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    /// Modulus coefficients, lowest degree first, including the leading 1.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// The primitive element used for the log tables.
    pub fn primitive(&self) -> Fq {
        Fq(self.0.primitive)
    }

    pub fn element(&self, index: u32) -> Option<Fq> {
        (index < self.0.q).then_some(Fq(index))
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.0.q).map(Fq)
    }

    /// The image of an integer under the prime-field embedding.
    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// Coefficients of `a` in the polynomial basis, lowest degree first.
    pub fn coefficients(&self, a: Fq) -> Vec<u32> {
        digits(a.0, self.0.p, self.0.t)
    }

    pub fn from_coefficients(&self, c: &[u32]) -> Result<Fq, GfError> {
        if c.len() > self.0.t as usize || c.iter().any(|&x| x >= self.0.p) {
            return Err(GfError::BadCoordinate(format!("{c:?}")));
        }
        Ok(Fq(undigits(c, self.0.p)))
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        let f = &*self.0;
        if f.p == 2 {
            return Fq(a.0 ^ b.0);
        }
        if let Some(tab) = &f.add {
            return Fq(tab[(a.0 * f.q + b.0) as usize]);
        }
        if f.t == 1 {
            return Fq((a.0 + b.0) % f.p);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut r = 0u32;
        let mut place = 1u32;
        for _ in 0..f.t {
            r += ((x % f.p + y % f.p) % f.p) * place;
            x /= f.p;
            y /= f.p;
            place *= f.p;
        }
        Fq(r)
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        Fq(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.0 == 0 || b.0 == 0 {
            return Fq::ZERO;
        }
        let f = &*self.0;
        Fq(f.exp[(f.log[a.0 as usize] + f.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: Fq) -> Result<Fq, GfError> {
        if a.0 == 0 {
            return Err(GfError::ZeroInverse);
        }
        let f = &*self.0;
        let n = f.q - 1;
        Ok(Fq(f.exp[((n - f.log[a.0 as usize]) % n) as usize]))
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fq, e: u64) -> Fq {
        if e == 0 {
            return Fq::ONE;
        }
        if a.0 == 0 {
            return Fq::ZERO;
        }
        let f = &*self.0;
        let n = (f.q - 1) as u64;
        let l = (f.log[a.0 as usize] as u64 * (e % n)) % n;
        Fq(f.exp[l as usize])
    }

    /// Discrete log to the base of the primitive element.
    pub fn log(&self, a: Fq) -> Option<u32> {
        (a.0 != 0).then(|| self.0.log[a.0 as usize])
    }

    /// `g^i` for the primitive element `g`.
    pub fn exp(&self, i: u64) -> Fq {
        let n = (self.0.q - 1) as u64;
        Fq(self.0.exp[(i % n) as usize])
    }

    /// Absolute trace to the prime field.
    pub fn trace(&self, a: Fq) -> Fq {
        let mut s = Fq::ZERO;
        let mut x = a;
        for _ in 0..self.0.t {
            s = self.add(s, x);
            x = self.pow(x, self.0.p as u64);
        }
        s
    }

    pub fn dot(&self, u: &[Fq], v: &[Fq]) -> Fq {
        u.iter()
            .zip(v)
            .fold(Fq::ZERO, |acc, (&a, &b)| self.add(acc, self.mul(a, b)))
    }

    /// `y += c * x`.
    pub fn axpy(&self, c: Fq, x: &[Fq], y: &mut [Fq]) {
        if c.is_zero() {
            return;
        }
        for (yi, &xi) in y.iter_mut().zip(x) {
            *yi = self.add(*yi, self.mul(c, xi));
        }
    }

    pub fn scale(&self, c: Fq, x: &mut [Fq]) {
        for xi in x.iter_mut() {
            *xi = self.mul(c, *xi);
        }
    }

    /// Vector of length `n` with index `idx`; the first coordinate is the
    /// most significant digit, so index order is lexicographic order.
    pub fn vector(&self, n: usize, mut idx: u64) -> Vec<Fq> {
        let q = self.0.q as u64;
        let mut v = vec![Fq::ZERO; n];
        for i in (0..n).rev() {
            v[i] = Fq((idx % q) as u32);
            idx /= q;
        }
        v
    }

    pub fn vector_index(&self, v: &[Fq]) -> u64 {
        let q = self.0.q as u64;
        v.iter().fold(0u64, |acc, x| acc * q + x.0 as u64)
    }

    /// Scales `v` so its first nonzero coordinate is 1.
    pub fn normalize(&self, v: &mut [Fq]) -> bool {
        match v.iter().find(|x| !x.is_zero()) {
            Some(&lead) => {
                if lead != Fq::ONE {
                    let c = self.inv(lead).expect("nonzero");
                    self.scale(c, v);
                }
                true
            }
            None => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_moduli() {
        assert_eq!(default_modulus(2, 1), vec![0, 1]);
        assert_eq!(default_modulus(2, 2), vec![1, 1, 1]);
        assert_eq!(default_modulus(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(default_modulus(3, 2), vec![1, 0, 1]);
        assert_eq!(default_modulus(2, 4), vec![1, 1, 0, 0, 1]);
    }

    #[test]
    fn gf4_tables() {
        let f = Field::new(2, 2).unwrap();
        // x^2 = x + 1
        assert_eq!(f.mul(Fq(2), Fq(2)), Fq(3));
        assert_eq!(f.mul(Fq(2), Fq(3)), Fq(1));
        assert_eq!(f.inv(Fq(3)).unwrap(), Fq(2));
    }

    #[test]
    fn rejects_bad_params() {
        assert_eq!(Field::new(4, 1).unwrap_err(), GfError::NotPrime(4));
        assert!(matches!(Field::new(2, 17), Err(GfError::TooLarge { .. })));
        assert!(Field::new(2, 16).is_ok());
        assert!(Field::with_modulus(2, &[1, 0, 1]).is_err());
        assert!(Field::of_order(6).is_err());
        assert_eq!(Field::new(2, 1).unwrap().inv(Fq::ZERO), Err(GfError::ZeroInverse));
    }

    #[test]
    fn trace_is_onto_prime_field() {
        let f = Field::new(2, 3).unwrap();
        let ones = f.elements().filter(|&a| f.trace(a) == Fq::ONE).count();
        assert_eq!(ones, 4);
    }

    #[test]
    fn generic_add_path_matches_digits() {
        let f = Field::new(3, 6).unwrap();
        for a in [0u32, 5, 100, 728] {
            for b in [0u32, 1, 364, 727] {
                let s = f.add(Fq(a), Fq(b));
                let da = f.coefficients(Fq(a));
                let db = f.coefficients(Fq(b));
                let ds: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % 3).collect();
                assert_eq!(f.coefficients(s), ds);
            }
        }
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(729), Some((3, 6)));
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(65521), Some((65521, 1)));
    }
}
