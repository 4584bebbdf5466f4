//! Dense univariate polynomials over a [`Gf`], with gcd, square-free
//! decomposition and Cantor-Zassenhaus factorization.

use rand::Rng;

use super::gf::{Elem, Gf};
use crate::arith;

/// Coefficients low to high, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct UniPoly {
    pub coeffs: Vec<Elem>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Elem>) -> UniPoly {
        while coeffs.last() == Some(&Elem::ZERO) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> UniPoly {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Elem) -> UniPoly {
        UniPoly::new(vec![c])
    }

    pub fn one() -> UniPoly {
        UniPoly::constant(Elem::ONE)
    }

    /// `c * X^k`.
    pub fn monomial(c: Elem, k: usize) -> UniPoly {
        let mut v = vec![Elem::ZERO; k + 1];
        v[k] = c;
        UniPoly::new(v)
    }

    pub fn x() -> UniPoly {
        UniPoly::monomial(Elem::ONE, 1)
    }

    /// `X - a`.
    pub fn linear(f: &Gf, a: Elem) -> UniPoly {
        UniPoly::new(vec![f.neg(a), Elem::ONE])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn lead(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(Elem::ZERO)
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, o: &UniPoly, f: &Gf) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &UniPoly, f: &Gf) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn neg(&self, f: &Gf) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, c: Elem, f: &Gf) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn shift(&self, k: usize) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let mut v = vec![Elem::ZERO; k];
        v.extend_from_slice(&self.coeffs);
        UniPoly { coeffs: v }
    }

    pub fn mul(&self, o: &UniPoly, f: &Gf) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Elem::ZERO; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        UniPoly::new(out)
    }

    pub fn pow(&self, mut e: u64, f: &Gf) -> UniPoly {
        let mut acc = UniPoly::one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b, f);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b, f);
            }
        }
        acc
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &UniPoly, f: &Gf) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = f.inv(d.lead()).expect("nonzero lead");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut q = vec![Elem::ZERO; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = r[i];
            if c.is_zero() {
                continue;
            }
            let k = f.mul(c, inv);
            q[i - dd] = k;
            for (j, &dj) in d.coeffs.iter().enumerate() {
                r[i - dd + j] = f.sub(r[i - dd + j], f.mul(k, dj));
            }
        }
        r.truncate(dd);
        (UniPoly::new(q), UniPoly::new(r))
    }

    pub fn rem(&self, d: &UniPoly, f: &Gf) -> UniPoly {
        self.divrem(d, f).1
    }

    /// Exact quotient, `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &UniPoly, f: &Gf) -> Option<UniPoly> {
        let (q, r) = self.divrem(d, f);
        r.is_zero().then_some(q)
    }

    pub fn monic(&self, f: &Gf) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let inv = f.inv(self.lead()).expect("nonzero lead");
        self.scale(inv, f)
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, o: &UniPoly, f: &Gf) -> UniPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// Extended gcd: `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn ext_gcd(&self, o: &UniPoly, f: &Gf) -> (UniPoly, UniPoly, UniPoly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (UniPoly::one(), UniPoly::zero());
        let (mut t0, mut t1) = (UniPoly::zero(), UniPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1, f);
            let s = s0.sub(&q.mul(&s1, f), f);
            let t = t0.sub(&q.mul(&t1, f), f);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = f.inv(r0.lead()).unwrap();
        (r0.scale(inv, f), s0.scale(inv, f), t0.scale(inv, f))
    }

    pub fn eval(&self, x: Elem, f: &Gf) -> Elem {
        self.coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self, f: &Gf) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(f.from_u64(i as u64), c))
                .collect(),
        )
    }

    /// `self(g(X))`.
    pub fn compose(&self, g: &UniPoly, f: &Gf) -> UniPoly {
        self.coeffs
            .iter()
            .rev()
            .fold(UniPoly::zero(), |acc, &c| acc.mul(g, f).add(&UniPoly::constant(c), f))
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &UniPoly, f: &Gf) -> UniPoly {
        let mut acc = UniPoly::one().rem(m, f);
        let mut b = self.rem(m, f);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b, f).rem(m, f);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b, f).rem(m, f);
            }
        }
        acc
    }

    /// `X^(|F|^k) mod m`.
    fn frob_x(k: u32, m: &UniPoly, f: &Gf) -> UniPoly {
        let mut x = UniPoly::x().rem(m, f);
        for _ in 0..k {
            x = x.pow_mod(f.order(), m, f);
        }
        x
    }

    /// Applies `c -> c^(p^j)` to every coefficient.
    pub fn map_frobenius(&self, j: u32, f: &Gf) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|&c| f.frobenius_p(c, j)).collect())
    }

    /// Square-free decomposition: monic `(factor, multiplicity)` pairs.
    pub fn squarefree_factorization(&self, f: &Gf) -> Vec<(UniPoly, usize)> {
        let mut out = Vec::new();
        if self.deg() < 1 {
            return out;
        }
        squarefree_rec(&self.monic(f), 1, f, &mut out);
        out.sort_by(|a, b| (a.1, &a.0.coeffs).cmp(&(b.1, &b.0.coeffs)));
        out
    }

    pub fn is_squarefree(&self, f: &Gf) -> bool {
        self.squarefree_factorization(f).iter().all(|(_, m)| *m == 1)
    }

    /// Distinct-degree factorization of a monic square-free polynomial.
    pub fn distinct_degree(&self, f: &Gf) -> Vec<(UniPoly, usize)> {
        let mut out = Vec::new();
        let mut rest = self.monic(f);
        let mut d = 1usize;
        let mut h = UniPoly::x().rem(&rest, f);
        while rest.deg() >= 2 * d as i64 {
            h = h.pow_mod(f.order(), &rest, f);
            let g = h.sub(&UniPoly::x(), f).gcd(&rest, f);
            if g.deg() > 0 {
                out.push((g.clone(), d));
                rest = rest.div_exact(&g, f).unwrap();
                h = h.rem(&rest, f);
            }
            d += 1;
        }
        if rest.deg() > 0 {
            let n = rest.deg() as usize;
            out.push((rest, n));
        }
        out
    }

    /// Splits a monic square-free product of degree-`d` irreducibles.
    pub fn equal_degree<R: Rng>(&self, d: usize, f: &Gf, rng: &mut R) -> Vec<UniPoly> {
        let n = self.deg() as usize;
        if n == d {
            return vec![self.monic(f)];
        }
        loop {
            let a = UniPoly::new((0..n).map(|_| Elem(rng.gen_range(0..f.order()))).collect());
            if a.deg() < 1 {
                continue;
            }
            let b = if f.characteristic() == 2 {
                // trace map a + a^2 + ... + a^(2^(k d - 1))
                let steps = f.degree() as usize * d;
                let mut t = a.clone();
                let mut acc = a.clone();
                for _ in 1..steps {
                    t = t.mul(&t, f).rem(self, f);
                    acc = acc.add(&t, f);
                }
                acc
            } else {
                let e = (arith::checked_pow(f.order(), d as u32).expect("extension too large") - 1) / 2;
                a.pow_mod(e, self, f).sub(&UniPoly::one(), f)
            };
            let g = b.gcd(self, f);
            if g.deg() > 0 && g.deg() < n as i64 {
                let h = self.div_exact(&g, f).unwrap();
                let mut out = g.equal_degree(d, f, rng);
                out.extend(h.equal_degree(d, f, rng));
                return out;
            }
        }
    }

    /// Complete factorization into monic irreducibles with multiplicity,
    /// sorted canonically. The leading coefficient is dropped.
    pub fn factor<R: Rng>(&self, f: &Gf, rng: &mut R) -> Vec<(UniPoly, usize)> {
        let mut out = Vec::new();
        for (sq, m) in self.squarefree_factorization(f) {
            for (part, d) in sq.distinct_degree(f) {
                for g in part.equal_degree(d, f, rng) {
                    out.push((g, m));
                }
            }
        }
        out.sort_by(|a, b| (a.0.deg(), &a.0.coeffs, a.1).cmp(&(b.0.deg(), &b.0.coeffs, b.1)));
        out
    }

    /// Distinct roots in `f`, sorted by canonical element order.
    pub fn roots<R: Rng>(&self, f: &Gf, rng: &mut R) -> Vec<Elem> {
        if self.deg() < 1 {
            return Vec::new();
        }
        let m = self.monic(f);
        let split = UniPoly::frob_x(1, &m, f).sub(&UniPoly::x(), f).gcd(&m, f);
        if split.deg() < 1 {
            return Vec::new();
        }
        let mut roots: Vec<Elem> = split
            .equal_degree(1, f, rng)
            .into_iter()
            .map(|l| f.neg(l.coeff(0)))
            .collect();
        roots.sort();
        roots
    }

    pub fn is_irreducible(&self, f: &Gf) -> bool {
        let n = match self.degree() {
            Some(n) if n >= 1 => n,
            _ => return false,
        };
        if n == 1 {
            return true;
        }
        let m = self.monic(f);
        if UniPoly::frob_x(n as u32, &m, f) != UniPoly::x().rem(&m, f) {
            return false;
        }
        arith::factorize(n as u64).iter().all(|&(r, _)| {
            let h = UniPoly::frob_x((n as u64 / r) as u32, &m, f).sub(&UniPoly::x(), f);
            h.gcd(&m, f).deg() == 0
        })
    }
}

fn squarefree_rec(a: &UniPoly, mult: usize, f: &Gf, out: &mut Vec<(UniPoly, usize)>) {
    if a.deg() < 1 {
        return;
    }
    let p = f.characteristic() as usize;
    let da = a.derivative(f);
    if da.is_zero() {
        // a is a p-th power
        squarefree_rec(&pth_root(a, f), mult * p, f, out);
        return;
    }
    let mut c = a.gcd(&da, f);
    let mut w = a.div_exact(&c, f).unwrap();
    let mut i = 1usize;
    while w.deg() > 0 {
        let y = w.gcd(&c, f);
        let z = w.div_exact(&y, f).unwrap();
        if z.deg() > 0 {
            push_factor(out, z, i * mult);
        }
        i += 1;
        w = y;
        c = c.div_exact(&w, f).unwrap();
    }
    if c.deg() > 0 {
        squarefree_rec(&pth_root(&c, f), mult * p, f, out);
    }
}

fn push_factor(out: &mut Vec<(UniPoly, usize)>, g: UniPoly, m: usize) {
    out.push((g, m));
}

fn pth_root(a: &UniPoly, f: &Gf) -> UniPoly {
    let p = f.characteristic() as usize;
    let inv_frob = f.degree() - 1;
    let n = a.coeffs.len();
    UniPoly::new(
        (0..n.div_ceil(p))
            .map(|i| f.frobenius_p(a.coeff(i * p), inv_frob))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn poly(f: &Gf, c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&x| f.from_i64(x)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let f = Gf::prime(7).unwrap();
        let a = poly(&f, &[-1, 0, 1]); // x^2 - 1
        let b = poly(&f, &[-1, 1]); // x - 1
        let (q, r) = a.divrem(&b, &f);
        assert_eq!(q, poly(&f, &[1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&poly(&f, &[1, 1]), &f), poly(&f, &[1, 1]));
        let (g, s, t) = a.ext_gcd(&poly(&f, &[2, 1]), &f);
        assert_eq!(g, UniPoly::one());
        assert_eq!(s.mul(&a, &f).add(&t.mul(&poly(&f, &[2, 1]), &f), &f), g);
    }

    #[test]
    fn roots_of_unity_in_gf7() {
        let f = Gf::prime(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let roots = poly(&f, &[-1, 0, 0, 1]).roots(&f, &mut rng);
        assert_eq!(roots, vec![Elem(1), Elem(2), Elem(4)]);
    }

    #[test]
    fn squarefree_in_characteristic_p() {
        let f = Gf::prime(3).unwrap();
        // (x+1)^3 (x+2)^2 x
        let a = poly(&f, &[1, 1]).pow(3, &f).mul(&poly(&f, &[2, 1]).pow(2, &f), &f).mul(&UniPoly::x(), &f);
        let sf = a.squarefree_factorization(&f);
        let mut got: Vec<(i64, usize)> = sf.iter().map(|(g, m)| (g.deg(), *m)).collect();
        got.sort();
        assert_eq!(got, vec![(1, 1), (1, 2), (1, 3)]);
        assert!(!a.is_squarefree(&f));
    }

    #[test]
    fn full_factorization_gf4() {
        let f = Gf::new(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        // x^5 - 1 over GF(4): 1 linear + 2 quadratics
        let a = poly(&f, &[1, 0, 0, 0, 0, 1]);
        let fs = a.factor(&f, &mut rng);
        let degs: Vec<i64> = fs.iter().map(|(g, _)| g.deg()).collect();
        assert_eq!(degs, vec![1, 2, 2]);
        let prod = fs.iter().fold(UniPoly::one(), |acc, (g, _)| acc.mul(g, &f));
        assert_eq!(prod, a);
        assert!(fs.iter().all(|(g, _)| g.is_irreducible(&f)));
    }
}
