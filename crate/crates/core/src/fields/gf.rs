use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::arith::{self, factorize};
use crate::error::{Error, Result};

/// Fields up to this order get log/antilog tables.
const TABLE_LIMIT: u64 = 1 << 20;
const MAX_ORDER: u64 = 1 << 62;

/// An element of some [`Gf`], encoded as `sum c_i p^i` over its coefficient
/// vector in the polynomial basis. The encoding order is the canonical
/// element order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub u64);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct Inner {
    p: u64,
    degree: u32,
    order: u64,
    modulus: Vec<u64>,
    unit_factors: Vec<(u64, u32)>,
    tables: Option<Tables>,
}

/// The finite field `GF(p)[X]/(modulus)` with `p^degree` elements.
///
/// Cheap to clone. Two handles are equal when they describe the same
/// prime and modulus.
#[derive(Clone)]
pub struct Gf(Arc<Inner>);

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}
impl Eq for Gf {}

impl Hash for Gf {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.modulus.hash(state);
    }
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf({})", self.spec_string())
    }
}

impl fmt::Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec_string())
    }
}

impl Gf {
    /// `GF(p^degree)` with the lexicographically least monic irreducible modulus.
    pub fn new(p: u64, degree: u32) -> Result<Gf> {
        check_size(p, degree)?;
        let modulus = canonical_modulus(p, degree);
        Ok(Gf::build(p, modulus))
    }

    pub fn prime(p: u64) -> Result<Gf> {
        Gf::new(p, 1)
    }

    /// Field with a user-supplied monic modulus (coefficients low to high).
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Gf> {
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::BadFieldSpec(format!("{modulus:?}")));
        }
        let degree = (modulus.len() - 1) as u32;
        check_size(p, degree)?;
        if !fp::is_irreducible(&modulus, p) {
            return Err(Error::ReducibleModulus(format!("{modulus:?}")));
        }
        Ok(Gf::build(p, modulus))
    }

    fn build(p: u64, modulus: Vec<u64>) -> Gf {
        let degree = (modulus.len() - 1) as u32;
        let order = arith::checked_pow(p, degree).expect("size checked");
        let unit_factors = factorize(order - 1);
        let mut inner = Inner {
            p,
            degree,
            order,
            modulus,
            unit_factors,
            tables: None,
        };
        if order <= TABLE_LIMIT && order > 2 {
            let field = Gf(Arc::new(inner));
            let g = field.primitive_element();
            let mut exp = Vec::with_capacity(order as usize - 1);
            let mut log = vec![0u32; order as usize];
            let mut x = Elem::ONE;
            for i in 0..order - 1 {
                exp.push(x.0 as u32);
                log[x.0 as usize] = i as u32;
                x = field.mul_slow(x, g);
            }
            inner = Arc::try_unwrap(field.0).ok().expect("unique handle");
            inner.tables = Some(Tables { exp, log });
        }
        Gf(Arc::new(inner))
    }

    /// Parses `"p"`, `"p^h"` (canonical modulus) or `"p^h/c0,c1,...,1"`.
    pub fn parse(spec: &str) -> Result<Gf> {
        let bad = || Error::BadFieldSpec(spec.to_string());
        let spec = spec.trim();
        let (head, modulus) = match spec.split_once('/') {
            Some((h, m)) => (h, Some(m)),
            None => (spec, None),
        };
        let (p, h) = match head.split_once('^') {
            Some((p, h)) => (p.trim().parse::<u64>().map_err(|_| bad())?, h.trim().parse::<u32>().map_err(|_| bad())?),
            None => (head.trim().parse::<u64>().map_err(|_| bad())?, 1),
        };
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        match modulus {
            None => Gf::new(p, h),
            Some(m) => {
                let coeffs = m
                    .split(',')
                    .map(|c| c.trim().parse::<u64>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?;
                if coeffs.len() != h as usize + 1 {
                    return Err(bad());
                }
                Gf::with_modulus(p, coeffs)
            }
        }
    }

    /// The text form `"p^h/c0,c1,...,1"`.
    pub fn spec_string(&self) -> String {
        let m: Vec<String> = self.0.modulus.iter().map(|c| c.to_string()).collect();
        format!("{}^{}/{}", self.0.p, self.0.degree, m.join(","))
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.0.degree
    }

    pub fn order(&self) -> u64 {
        self.0.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn has_tables(&self) -> bool {
        self.0.tables.is_some()
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// The class of `X` in `GF(p)[X]/(modulus)`.
    pub fn generator(&self) -> Elem {
        if self.0.degree == 1 {
            // X is the root of X - c0 ... i.e. -c0
            Elem((self.0.p - self.0.modulus[0]) % self.0.p)
        } else {
            Elem(self.0.p)
        }
    }

    pub fn from_i64(&self, k: i64) -> Elem {
        Elem(k.rem_euclid(self.0.p as i64) as u64)
    }

    pub fn from_u64(&self, k: u64) -> Elem {
        Elem(k % self.0.p)
    }

    /// Element from its coefficient vector (low to high).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<Elem> {
        if coeffs.len() > self.0.degree as usize || coeffs.iter().any(|&c| c >= self.0.p) {
            return Err(Error::BadElement(format!("{coeffs:?} in {self}")));
        }
        let mut v = 0u64;
        for &c in coeffs.iter().rev() {
            v = v * self.0.p + c;
        }
        Ok(Elem(v))
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.0.degree as usize);
        let mut v = a.0;
        for _ in 0..self.0.degree {
            out.push(v % self.0.p);
            v /= self.0.p;
        }
        out
    }

    /// `"c0"` for prime fields, `"c0,c1,..."` otherwise.
    pub fn format_elem(&self, a: Elem) -> String {
        let c: Vec<String> = self.coeffs(a).iter().map(|c| c.to_string()).collect();
        c.join(",")
    }

    /// Inverse of [`Gf::format_elem`]; also accepts a bare (possibly
    /// negative) integer, read in the prime field.
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let s = s.trim().trim_start_matches('[').trim_end_matches(']');
        if !s.contains(',') {
            let k: i64 = s.trim().parse().map_err(|_| Error::BadElement(s.to_string()))?;
            return Ok(self.from_i64(k));
        }
        let coeffs = s
            .split(',')
            .map(|c| c.trim().parse::<u64>().map_err(|_| Error::BadElement(s.to_string())))
            .collect::<Result<Vec<_>>>()?;
        self.from_coeffs(&coeffs)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.order).map(Elem)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.p;
        if self.0.degree == 1 {
            let s = a.0 + b.0;
            return Elem(if s >= p { s - p } else { s });
        }
        if p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let (mut x, mut y, mut pw, mut out) = (a.0, b.0, 1u64, 0u64);
        while x > 0 || y > 0 {
            let d = (x % p + y % p) % p;
            out += d * pw;
            x /= p;
            y /= p;
            pw = pw.wrapping_mul(p);
        }
        Elem(out)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        if self.0.degree == 1 {
            return Elem(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let (mut x, mut pw, mut out) = (a.0, 1u64, 0u64);
        while x > 0 {
            let d = x % p;
            out += ((p - d) % p) * pw;
            x /= p;
            pw = pw.wrapping_mul(p);
        }
        Elem(out)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        if let Some(t) = &self.0.tables {
            let n = t.exp.len();
            let mut e = t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize;
            if e >= n {
                e -= n;
            }
            return Elem(t.exp[e] as u64);
        }
        self.mul_slow(a, b)
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.p;
        let n = self.0.degree as usize;
        if n == 1 {
            return Elem(arith::mul_mod(a.0, b.0, p));
        }
        let da = self.coeffs(a);
        let db = self.coeffs(b);
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        let m = &self.0.modulus;
        for i in (n..2 * n - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for j in 0..n {
                prod[i - n + j] = (prod[i - n + j] + (p - c) * m[j]) % p;
            }
        }
        let mut v = 0u64;
        for &c in prod[..n].iter().rev() {
            v = v * p + c;
        }
        Elem(v)
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        if let Some(t) = &self.0.tables {
            let n = t.exp.len() as u64;
            let l = t.log[a.0 as usize] as u64;
            return Elem(t.exp[arith::mul_mod(l, e % n, n) as usize] as u64);
        }
        let mut base = a;
        let mut exp = e % (self.0.order - 1);
        if exp == 0 {
            return Elem::ONE;
        }
        let mut acc = Elem::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Power with a signed exponent; `a` must be nonzero when `e < 0`.
    pub fn pow_i(&self, a: Elem, e: i64) -> Elem {
        if e >= 0 {
            self.pow(a, e as u64)
        } else {
            let n = self.0.order - 1;
            let r = (e.rem_euclid(n as i64)) as u64;
            self.pow(a, r)
        }
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::NotInvertible("0".into()));
        }
        if let Some(t) = &self.0.tables {
            let n = t.exp.len();
            let l = t.log[a.0 as usize] as usize;
            return Ok(Elem(t.exp[(n - l) % n] as u64));
        }
        Ok(self.pow(a, self.0.order - 2))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^(p^j)`.
    pub fn frobenius_p(&self, a: Elem, j: u32) -> Elem {
        let j = j % self.0.degree;
        let mut x = a;
        for _ in 0..j {
            x = self.pow(x, self.0.p);
        }
        x
    }

    /// Membership in the subfield with `p^d` elements (`d` must divide the degree).
    pub fn in_subfield(&self, a: Elem, d: u32) -> bool {
        self.frobenius_p(a, d) == a
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: Elem) -> u64 {
        assert!(!a.is_zero(), "zero has no multiplicative order");
        let mut ord = self.0.order - 1;
        for &(r, e) in &self.0.unit_factors {
            for _ in 0..e {
                if self.pow(a, ord / r) == Elem::ONE {
                    ord /= r;
                } else {
                    break;
                }
            }
        }
        ord
    }

    pub fn unit_group_factors(&self) -> &[(u64, u32)] {
        &self.0.unit_factors
    }

    /// First element in canonical order that generates the unit group.
    pub fn primitive_element(&self) -> Elem {
        let n = self.0.order - 1;
        (1..self.0.order)
            .map(Elem)
            .find(|&g| self.0.unit_factors.iter().all(|&(r, _)| self.pow(g, n / r) != Elem::ONE))
            .expect("finite field unit group is cyclic")
    }

    /// Discrete logarithm to the table base; only for tabled fields.
    pub fn log(&self, a: Elem) -> Option<u64> {
        let t = self.0.tables.as_ref()?;
        if a.is_zero() {
            None
        } else {
            Some(t.log[a.0 as usize] as u64)
        }
    }

    pub fn sum<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(Elem::ZERO, |acc, x| self.add(acc, x))
    }

    pub fn is_square(&self, a: Elem) -> bool {
        if a.is_zero() || self.0.p == 2 {
            return true;
        }
        self.pow(a, (self.0.order - 1) / 2) == Elem::ONE
    }
}

fn check_size(p: u64, degree: u32) -> Result<()> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if degree == 0 {
        return Err(Error::InvalidArgument("field degree must be positive".into()));
    }
    match arith::checked_pow(p, degree) {
        Some(o) if o <= MAX_ORDER => Ok(()),
        _ => Err(Error::FieldTooLarge { p, degree: degree as u64 }),
    }
}

/// Lexicographically least monic irreducible polynomial of the given degree,
/// comparing coefficients from `X^(n-1)` down to `X^0`.
fn canonical_modulus(p: u64, n: u32) -> Vec<u64> {
    let n = n as usize;
    let count = arith::checked_pow(p, n as u32).expect("size checked");
    for code in 0..count {
        let mut m = Vec::with_capacity(n + 1);
        let mut v = code;
        for _ in 0..n {
            m.push(v % p);
            v /= p;
        }
        m.push(1);
        if fp::is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}

/// Minimal dense arithmetic in `GF(p)[X]` used only for modulus selection.
pub(crate) mod fp {
    use crate::arith;

    fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
            }
        }
        trim(&mut out);
        out
    }

    fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let inv_lead = arith::pow_mod(m[dm], p - 2, p);
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let c = arith::mul_mod(*r.last().unwrap(), inv_lead, p);
            for (j, &mj) in m.iter().enumerate() {
                let sub = arith::mul_mod(c, mj, p);
                r[shift + j] = (r[shift + j] + p - sub) % p;
            }
            trim(&mut r);
        }
        r
    }

    fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    fn pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mul(&acc, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
            e >>= 1;
        }
        acc
    }

    /// `X^(p^k) mod m`.
    fn frob_x(k: usize, m: &[u64], p: u64) -> Vec<u64> {
        let mut x = vec![0u64, 1];
        for _ in 0..k {
            x = pow_mod(&x, p, m, p);
        }
        x
    }

    fn sub_x(a: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        if r.len() < 2 {
            r.resize(2, 0);
        }
        r[1] = (r[1] + p - 1) % p;
        trim(&mut r);
        r
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(m: &[u64], p: u64) -> bool {
        let n = m.len() - 1;
        if n == 1 {
            return true;
        }
        if m[0] == 0 {
            return false;
        }
        if !sub_x(&frob_x(n, m, p), p).is_empty() {
            return false;
        }
        for (r, _) in arith::factorize(n as u64) {
            let h = sub_x(&frob_x(n / r as usize, m, p), p);
            let g = gcd(m, &h, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf8_modulus_and_spec() {
        let f = Gf::new(2, 3).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 0, 1]);
        assert_eq!(f.spec_string(), "2^3/1,1,0,1");
        assert_eq!(Gf::parse("2^3/1,1,0,1").unwrap(), f);
        assert_eq!(Gf::parse("2^3").unwrap(), f);
        assert!(matches!(Gf::parse("2^3/1,0,0,1"), Err(Error::ReducibleModulus(_))));
        assert!(matches!(Gf::new(6, 1), Err(Error::NotPrime(6))));
    }

    #[test]
    fn tables_agree_with_polynomial_multiplication() {
        for (p, n) in [(2, 4), (3, 3), (5, 2), (7, 2)] {
            let f = Gf::new(p, n).unwrap();
            assert!(f.has_tables());
            for a in f.elements() {
                for b in f.elements().step_by(3) {
                    assert_eq!(f.mul(a, b), f.mul_slow(a, b));
                }
            }
        }
    }

    #[test]
    fn large_field_without_tables() {
        let f = Gf::new(13, 10).unwrap();
        assert!(!f.has_tables());
        let a = f.from_coeffs(&[3, 1, 4, 1, 5, 9, 2, 6]).unwrap();
        let inv = f.inv(a).unwrap();
        assert_eq!(f.mul(a, inv), Elem::ONE);
        assert_eq!(f.frobenius_p(a, 10), a);
        let g = f.primitive_element();
        assert_eq!(f.element_order(g), f.order() - 1);
    }

    #[test]
    fn element_strings_roundtrip() {
        let f = Gf::new(3, 3).unwrap();
        for a in f.elements() {
            assert_eq!(f.parse_elem(&f.format_elem(a)).unwrap(), a);
        }
        let p = Gf::prime(7).unwrap();
        assert_eq!(p.parse_elem("-2").unwrap(), Elem(5));
    }
}
