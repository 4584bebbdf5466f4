use serde::{Deserialize, Serialize};

use super::embed::{DigitSolver, Embedding};
use super::gf::{Elem, Gf};
use super::upoly::UniPoly;
use crate::arith;
use crate::error::{Error, Result};

/// The chain `GF(p) < GF(q) < GF(q^3)` with a primitive element `omega` of
/// `GF(q^3)` and its minimal polynomial `x^3 - a x^2 - b x - c` over `GF(q)`.
#[derive(Clone, Debug)]
pub struct TowerContext {
    base: Gf,
    ext: Gf,
    embedding: Embedding,
    omega: Elem,
    /// `(a, b, c)` as elements of the base field.
    abc: [Elem; 3],
    singer: DigitSolver,
}

impl TowerContext {
    pub fn build(p: u64, h: u32) -> Result<TowerContext> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let base = Gf::new(p, h)?;
        let ext = Gf::new(p, 3 * h)?;
        TowerContext::from_fields(base, ext)
    }

    /// Tower over explicitly given fields (e.g. a user-supplied modulus).
    pub fn from_fields(base: Gf, ext: Gf) -> Result<TowerContext> {
        if ext.degree() != 3 * base.degree() {
            return Err(Error::FieldMismatch(base.spec_string(), ext.spec_string()));
        }
        let embedding = Embedding::new(&base, &ext)?;
        let omega = ext.primitive_element();
        let q = base.order();
        let mp = conjugate_product(&ext, omega, q);
        if mp.deg() != 3 {
            return Err(Error::Inconsistent("primitive element does not generate the cubic extension".into()));
        }
        let pre = |x: Elem| embedding.preimage(x).ok_or_else(|| Error::Inconsistent("minimal polynomial not over GF(q)".into()));
        // x^3 + m2 x^2 + m1 x + m0 = x^3 - a x^2 - b x - c
        let a = base.neg(pre(mp.coeff(2))?);
        let b = base.neg(pre(mp.coeff(1))?);
        let c = base.neg(pre(mp.coeff(0))?);
        let h = base.degree() as usize;
        let mut family = Vec::with_capacity(3 * h);
        let gen = embedding.embed(if h == 1 { Elem::ONE } else { base.generator() });
        for i in 0..3u64 {
            let wi = ext.pow(omega, i);
            let mut y = Elem::ONE;
            for _ in 0..h {
                family.push(ext.mul(y, wi));
                y = ext.mul(y, gen);
            }
        }
        let singer = DigitSolver::new(&family, &ext);
        Ok(TowerContext {
            base,
            ext,
            embedding,
            omega,
            abc: [a, b, c],
            singer,
        })
    }

    pub fn base(&self) -> &Gf {
        &self.base
    }

    pub fn ext(&self) -> &Gf {
        &self.ext
    }

    pub fn embedding(&self) -> &Embedding {
        &self.embedding
    }

    pub fn omega(&self) -> Elem {
        self.omega
    }

    /// `q = p^h`.
    pub fn q(&self) -> u64 {
        self.base.order()
    }

    /// `q^2 + q + 1`, the number of points of `PG(2,q)`.
    pub fn plane_size(&self) -> u64 {
        let q = self.q();
        q * q + q + 1
    }

    /// The symbols `(a, b, c)` of `p(x) = x^3 - a x^2 - b x - c`.
    pub fn abc(&self) -> [Elem; 3] {
        self.abc
    }

    pub fn embed(&self, x: Elem) -> Elem {
        self.embedding.embed(x)
    }

    /// `x -> x^(q^j)` on `GF(q^3)`.
    pub fn frobenius(&self, x: Elem, j: i64) -> Elem {
        let j = j.rem_euclid(3) as u32;
        self.ext.frobenius_p(x, j * self.base.degree())
    }

    /// Minimal polynomial over `GF(q)` of an element of `GF(q^3)`.
    pub fn minimal_polynomial(&self, x: Elem) -> UniPoly {
        let prod = conjugate_product(&self.ext, x, self.q());
        UniPoly::new(
            prod.coeffs
                .iter()
                .map(|&c| self.embedding.preimage(c).expect("conjugate product lies over GF(q)"))
                .collect(),
        )
    }

    /// Coordinates of `x` in the basis `1, omega, omega^2` over `GF(q)`.
    pub fn singer_coords(&self, x: Elem) -> [Elem; 3] {
        let digits = self.singer.solve(x, &self.ext);
        let h = self.base.degree() as usize;
        let mut out = [Elem::ZERO; 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.base.from_coeffs(&digits[i * h..(i + 1) * h]).expect("digits in range");
        }
        out
    }

    pub fn summary(&self) -> TowerSummary {
        let [a, b, c] = self.abc;
        TowerSummary {
            base: self.base.spec_string(),
            ext: self.ext.spec_string(),
            omega: self.ext.format_elem(self.omega),
            omega_order: self.ext.element_order(self.omega),
            min_poly_abc: [a, b, c].iter().map(|&x| self.base.format_elem(x)).collect(),
        }
    }
}

/// JSON-friendly description of a tower.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerSummary {
    pub base: String,
    pub ext: String,
    pub omega: String,
    pub omega_order: u64,
    pub min_poly_abc: Vec<String>,
}

/// `prod (X - x^(q^i))` over the distinct conjugates of `x`.
fn conjugate_product(ext: &Gf, x: Elem, q: u64) -> UniPoly {
    let mut conj = vec![x];
    let mut y = ext.pow(x, q);
    while y != x {
        conj.push(y);
        y = ext.pow(y, q);
    }
    conj.iter().fold(UniPoly::one(), |acc, &r| acc.mul(&UniPoly::linear(ext, r), ext))
}

/// The `n`-th roots of unity, found in the smallest extension of `field`
/// whose unit group has order divisible by `n`.
#[derive(Clone, Debug)]
pub struct RootsOfUnity {
    pub field: Gf,
    /// Degree of `field` over the field that was asked for.
    pub extension_degree: u32,
    pub roots: Vec<Elem>,
}

pub fn nth_roots_of_unity(field: &Gf, n: u64) -> Result<RootsOfUnity> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let p = field.characteristic();
    if n.is_multiple_of(p) {
        return Err(Error::CharacteristicDivides { p, n });
    }
    let mut d = 1u32;
    let mut size = field.order() % n;
    while !(size + n - 1).is_multiple_of(n) {
        d += 1;
        size = arith::mul_mod(size, field.order(), n);
    }
    let target = if d == 1 { field.clone() } else { Gf::new(p, field.degree() * d)? };
    let g = target.primitive_element();
    let zeta = target.pow(g, (target.order() - 1) / n);
    let mut roots: Vec<Elem> = (0..n).map(|i| target.pow(zeta, i)).collect();
    roots.sort();
    Ok(RootsOfUnity {
        field: target,
        extension_degree: d,
        roots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent order oracle: omega^((q^3-1)/r) != 1 for each prime r.
    fn is_primitive_by_oracle(t: &TowerContext) -> bool {
        let n = t.ext().order() - 1;
        t.ext().pow(t.omega(), n) == Elem::ONE
            && arith::factorize(n).iter().all(|&(r, _)| t.ext().pow(t.omega(), n / r) != Elem::ONE)
    }

    #[test]
    fn gf2_tower_matches_x3_x_1() {
        let t = TowerContext::build(2, 1).unwrap();
        assert_eq!(t.ext().order(), 8);
        assert_eq!(t.ext().element_order(t.omega()), 7);
        let [a, b, c] = t.abc();
        assert_eq!((a, b, c), (Elem(0), Elem(1), Elem(1)));
        let mp = t.minimal_polynomial(t.ext().generator());
        assert_eq!(mp.coeffs, vec![Elem(1), Elem(1), Elem(0), Elem(1)]);
    }

    #[test]
    fn orders_of_primitive_elements() {
        for (p, h, order) in [(5, 2, 15624u64), (3, 1, 26), (2, 2, 63)] {
            let t = TowerContext::build(p, h).unwrap();
            assert_eq!(t.ext().element_order(t.omega()), order);
            assert!(is_primitive_by_oracle(&t));
        }
    }

    #[test]
    fn minimal_polynomials() {
        let t = TowerContext::build(3, 1).unwrap();
        let w = t.omega();
        let mw = t.minimal_polynomial(w);
        assert_eq!(mw.deg(), 3);
        assert_eq!(t.minimal_polynomial(t.frobenius(w, 1)), mw);
        assert_eq!(t.minimal_polynomial(t.embed(Elem(2))).deg(), 1);
        // annihilates omega
        let lifted = t.embedding().embed_poly(&mw);
        assert_eq!(lifted.eval(w, t.ext()), Elem::ZERO);
        // no root in GF(q)
        assert!(t.base().elements().all(|x| mw.eval(x, t.base()) != Elem::ZERO));
    }

    #[test]
    fn frobenius_and_norm() {
        let t = TowerContext::build(5, 1).unwrap();
        let e = t.ext();
        for x in e.elements().step_by(7) {
            assert_eq!(t.frobenius(x, 3), x);
            assert_eq!(t.frobenius(t.frobenius(x, 1), 1), t.frobenius(x, 2));
            let norm = e.mul(e.mul(x, t.frobenius(x, 1)), t.frobenius(x, 2));
            assert!(t.embedding().preimage(norm).is_some());
        }
    }

    #[test]
    fn singer_coordinates() {
        let t = TowerContext::build(2, 2).unwrap();
        assert_eq!(t.singer_coords(Elem::ONE), [Elem(1), Elem(0), Elem(0)]);
        assert_eq!(t.singer_coords(t.omega()), [Elem(0), Elem(1), Elem(0)]);
        let x = t.ext().pow(t.omega(), 17);
        let [c0, c1, c2] = t.singer_coords(x);
        let e = t.ext();
        let w = t.omega();
        let back = e.add(e.add(t.embed(c0), e.mul(t.embed(c1), w)), e.mul(t.embed(c2), e.mul(w, w)));
        assert_eq!(back, x);
    }

    #[test]
    fn roots_of_unity() {
        let f7 = Gf::prime(7).unwrap();
        let r = nth_roots_of_unity(&f7, 3).unwrap();
        assert_eq!(r.roots, vec![Elem(1), Elem(2), Elem(4)]);
        assert_eq!(nth_roots_of_unity(&f7, 1).unwrap().roots, vec![Elem(1)]);
        let f5 = Gf::prime(5).unwrap();
        let r13 = nth_roots_of_unity(&f5, 13).unwrap();
        assert_eq!(r13.extension_degree, 4);
        assert_eq!(r13.roots.len(), 13);
        assert!(r13.roots.iter().all(|&u| r13.field.pow(u, 13) == Elem::ONE));
        assert!(matches!(nth_roots_of_unity(&f7, 14), Err(Error::CharacteristicDivides { .. })));
    }
}
