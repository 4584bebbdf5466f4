//! The canonical family of cyclic curves
//! `y^2 + e1 x^2 y^(2t-2) + e1^2 x^(2t-2) + c (x^t y^(t-1) + e2 x^(t-1) y + e2^2 x y^t)`
//! and executable forms of its structural lemmas.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bivar;
use crate::error::{Error, Result};
use crate::fields::{Elem, Gf};
use crate::linalg::Mat3;
use crate::poly::{SparsePoly, TermJson};

#[derive(Clone, Debug)]
pub struct CanonicalCurve {
    pub field: Gf,
    pub t: u32,
    pub eps1: Elem,
    pub eps2: Elem,
    pub c: Elem,
}

impl CanonicalCurve {
    pub fn new(field: &Gf, t: u32, eps1: Elem, eps2: Elem, c: Elem) -> Result<CanonicalCurve> {
        if t < 3 {
            return Err(Error::InvalidArgument(format!("t = {t} < 3")));
        }
        for (name, e) in [("eps1", eps1), ("eps2", eps2)] {
            if field.pow(e, 3) != Elem::ONE {
                return Err(Error::InvalidArgument(format!(
                    "{name} = {} is not a cube root of unity in {}",
                    field.format_elem(e),
                    field.spec_string()
                )));
            }
        }
        Ok(CanonicalCurve {
            field: field.clone(),
            t,
            eps1,
            eps2,
            c,
        })
    }

    /// The family member with `e1 = e2 = 1` over `GF(p)`.
    pub fn simple(p: u64, t: u32, c: i64) -> Result<CanonicalCurve> {
        let f = Gf::prime(p)?;
        let c = f.from_i64(c);
        CanonicalCurve::new(&f, t, Elem::ONE, Elem::ONE, c)
    }

    /// Degree `2t`.
    pub fn n(&self) -> u32 {
        2 * self.t
    }

    /// `t^2 - 3t + 3`.
    pub fn big_n(&self) -> u64 {
        let t = u64::from(self.t);
        t * t - 3 * t + 3
    }

    /// Preconditions of the genus computations: odd characteristic,
    /// `c != 0` and `p` not dividing `t^2-3t+3`.
    pub fn check_genus_hypotheses(&self) -> Result<()> {
        let p = self.field.characteristic();
        if p == 2 {
            return Err(Error::UnsupportedCharacteristic(2));
        }
        if self.c.is_zero() {
            return Err(Error::InvalidArgument("c = 0 degenerates the family".into()));
        }
        if self.big_n().is_multiple_of(p) {
            return Err(Error::CharacteristicDivides { p, n: self.big_n() });
        }
        Ok(())
    }

    /// The affine equation in `(x, y)`.
    pub fn equation(&self) -> SparsePoly {
        let f = &self.field;
        let t = self.t;
        let (e1, e2, c) = (self.eps1, self.eps2, self.c);
        let terms = [
            ([0, 2], Elem::ONE),
            ([2, 2 * t - 2], e1),
            ([2 * t - 2, 0], f.mul(e1, e1)),
            ([t, t - 1], c),
            ([t - 1, 1], f.mul(c, e2)),
            ([1, t], f.mul(c, f.mul(e2, e2))),
        ];
        SparsePoly::from_terms(2, terms.iter().map(|(e, a)| (e.to_vec(), *a)), f)
    }

    /// Homogenization in `(x1, x2, x3)`, `x = x1/x3`, `y = x2/x3`.
    pub fn homogeneous(&self) -> SparsePoly {
        self.equation().homogenize(self.n())
    }

    pub fn is_absolutely_irreducible(&self) -> Result<bool> {
        is_absolutely_irreducible(&self.equation(), &self.field)
    }

    pub fn to_json(&self) -> CurveJson {
        let f = &self.field;
        CurveJson {
            t: self.t,
            eps1: f.format_elem(self.eps1),
            eps2: f.format_elem(self.eps2),
            c: f.format_elem(self.c),
            field: f.spec_string(),
            terms: self.equation().to_json(f),
        }
    }

    pub fn from_json(j: &CurveJson) -> Result<CanonicalCurve> {
        let f = Gf::parse(&j.field)?;
        let cc = CanonicalCurve::new(&f, j.t, f.parse_elem(&j.eps1)?, f.parse_elem(&j.eps2)?, f.parse_elem(&j.c)?)?;
        let stored = SparsePoly::from_json(2, &j.terms, &f)?;
        if stored != cc.equation() {
            return Err(Error::Inconsistent("terms do not match (t, eps1, eps2, c)".into()));
        }
        Ok(cc)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveJson {
    pub t: u32,
    pub eps1: String,
    pub eps2: String,
    pub c: String,
    pub field: String,
    pub terms: Vec<TermJson>,
}

/// At most one term per total degree, per `x`-degree and per `y`-degree.
pub fn check_one_term_per_degree(g: &SparsePoly) -> bool {
    let nv = g.nvars();
    let mut keys: Vec<Vec<u32>> = vec![Vec::new(); nv + 1];
    for e in g.terms().keys() {
        keys[0].push(e.iter().sum());
        for (i, &k) in e.iter().enumerate() {
            keys[i + 1].push(k);
        }
    }
    keys.into_iter().all(|mut v| {
        let n = v.len();
        v.sort_unstable();
        v.dedup();
        v.len() == n
    })
}

/// A pair of exponents breaking the relation `a(l, m-l) = eps a(n-m, l)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryViolation {
    pub term: Vec<u32>,
    pub image: Vec<u32>,
    pub reason: String,
}

/// The cube root of unity `eps` with `a(l, m-l) = eps a(n-m, l)` for every
/// term `x^l y^(m-l)` of the degree-`n` affine polynomial `g`.
pub fn check_coefficient_symmetry(g: &SparsePoly, n: u32, f: &Gf) -> std::result::Result<Elem, SymmetryViolation> {
    let mut eps: Option<Elem> = None;
    let mut first: Vec<u32> = Vec::new();
    for (e, &a) in g.terms() {
        let (l, j) = (e[0], e[1]);
        let m = l + j;
        if m > n {
            return Err(SymmetryViolation {
                term: e.clone(),
                image: Vec::new(),
                reason: format!("degree {m} exceeds {n}"),
            });
        }
        let image = vec![n - m, l];
        let b = g.coeff(&image);
        if b.is_zero() {
            return Err(SymmetryViolation {
                term: e.clone(),
                image,
                reason: "image coefficient is zero".into(),
            });
        }
        let r = f.div(a, b).expect("nonzero");
        match eps {
            None => {
                if f.pow(r, 3) != Elem::ONE {
                    return Err(SymmetryViolation {
                        term: e.clone(),
                        image,
                        reason: format!("ratio {} is not a cube root of unity", f.format_elem(r)),
                    });
                }
                eps = Some(r);
                first = e.clone();
            }
            Some(x) if x != r => {
                return Err(SymmetryViolation {
                    term: e.clone(),
                    image,
                    reason: format!(
                        "ratio {} differs from {} at {:?}",
                        f.format_elem(r),
                        f.format_elem(x),
                        first
                    ),
                });
            }
            _ => {}
        }
    }
    Ok(eps.unwrap_or(Elem::ONE))
}

/// Every term `x^l y^(m-l)` of `g` has `m = (t-1) l + 2 (mod k)`.
pub fn check_congruence(g: &SparsePoly, k: u64, t: u64) -> bool {
    let k = k as i64;
    g.terms().keys().all(|e| {
        let l = i64::from(e[0]);
        let m = l + i64::from(e[1]);
        (m - (t as i64 - 1) * l - 2).rem_euclid(k) == 0
    })
}

fn mu_matrix() -> Mat3 {
    let (o, z) = (Elem::ONE, Elem::ZERO);
    [[z, o, z], [z, z, o], [o, z, z]]
}

/// `G(x3, x1, x2)`, the form transformed by `mu`.
pub fn apply_mu(g: &SparsePoly, f: &Gf) -> Result<SparsePoly> {
    if g.nvars() != 3 || !g.is_homogeneous() {
        return Err(Error::InvalidArgument("apply_mu needs a homogeneous form in 3 variables".into()));
    }
    Ok(g.substitute_linear(&mu_matrix(), f))
}

pub fn mu_invariant(g: &SparsePoly, f: &Gf) -> Result<bool> {
    Ok(apply_mu(g, f)?.proportional(g, f).is_some())
}

/// `g(u x, u^(t-1) y)`.
pub fn apply_eta(g: &SparsePoly, u: Elem, t: u32, f: &Gf) -> Result<SparsePoly> {
    if u.is_zero() {
        return Err(Error::InvalidArgument("eta needs u != 0".into()));
    }
    let terms = g.terms().iter().map(|(e, &a)| {
        let w = u64::from(e[0]) + u64::from(t - 1) * u64::from(e[1]);
        (e.clone(), f.mul(a, f.pow(u, w)))
    });
    Ok(SparsePoly::from_terms(2, terms, f))
}

pub fn eta_invariant(g: &SparsePoly, u: Elem, t: u32, f: &Gf) -> Result<bool> {
    Ok(apply_eta(g, u, t, f)?.proportional(g, f).is_some())
}

/// Absolute irreducibility of an affine plane curve (fixed internal seed;
/// the answer does not depend on it).
pub fn is_absolutely_irreducible(g: &SparsePoly, f: &Gf) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1bad_5eed);
    bivar::is_absolutely_irreducible(g, f, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::nth_roots_of_unity;

    #[test]
    fn t3_over_gf7() {
        let cc = CanonicalCurve::simple(7, 3, 1).unwrap();
        let f = &cc.field;
        let g = cc.equation();
        assert_eq!(g.num_terms(), 6);
        assert_eq!(g.display(f), cc.equation().display(f));
        for e in [[0, 2], [2, 4], [4, 0], [3, 2], [2, 1], [1, 3]] {
            assert_eq!(g.coeff(&e), Elem::ONE);
        }
        let h = cc.homogeneous();
        assert!(h.is_homogeneous() && h.degree() == Some(6));
        assert!(CanonicalCurve::simple(7, 2, 1).is_err());
        assert!(CanonicalCurve::new(f, 3, Elem(3), Elem::ONE, Elem::ONE).is_err());
    }

    #[test]
    fn lemma_checks() {
        let cc = CanonicalCurve::simple(7, 5, 3).unwrap();
        let f = &cc.field;
        let g = cc.equation();
        assert!(check_one_term_per_degree(&g));
        let yx = SparsePoly::from_terms(2, [(vec![0, 2], Elem::ONE), (vec![1, 1], Elem::ONE)], f);
        assert!(!check_one_term_per_degree(&yx));
        assert!(check_one_term_per_degree(&SparsePoly::zero(2)));
        // 2t-2 = t+1 at t = 3: x^4 and x y^3 collide
        assert!(!check_one_term_per_degree(&CanonicalCurve::simple(7, 3, 1).unwrap().equation()));
        for t in 4..13 {
            assert!(check_one_term_per_degree(&CanonicalCurve::simple(7, t, 1).unwrap().equation()));
        }
        assert_eq!(check_coefficient_symmetry(&g, 10, f), Ok(Elem::ONE));
        let bad = SparsePoly::from_terms(2, [(vec![0, 2], Elem::ONE), (vec![8, 0], Elem(5))], f);
        assert!(check_coefficient_symmetry(&bad, 10, f).is_err());
        // t = 5 arises from q = 16, k = 13
        assert!(check_congruence(&g, 13, 5));
        let xy = SparsePoly::from_terms(2, [(vec![1, 1], Elem::ONE)], f);
        assert!(!check_congruence(&xy, 13, 5));
    }

    #[test]
    fn symmetry_with_nontrivial_eps() {
        let f = Gf::prime(7).unwrap();
        let e = Elem(2); // 2^3 = 8 = 1
        let cc = CanonicalCurve::new(&f, 4, e, e, Elem(3)).unwrap();
        assert_eq!(check_coefficient_symmetry(&cc.equation(), 8, &f), Ok(e));
        // the c-terms carry ratio e2, the others e1
        let mixed = CanonicalCurve::new(&f, 4, e, f.mul(e, e), Elem(3)).unwrap();
        assert!(check_coefficient_symmetry(&mixed.equation(), 8, &f).is_err());
        let no_c = CanonicalCurve::new(&f, 4, e, f.mul(e, e), Elem::ZERO).unwrap();
        assert_eq!(check_coefficient_symmetry(&no_c.equation(), 8, &f), Ok(e));
    }

    #[test]
    fn mu_and_eta() {
        let cc = CanonicalCurve::simple(7, 3, 3).unwrap();
        let f = &cc.field;
        let h = cc.homogeneous();
        assert!(mu_invariant(&h, f).unwrap());
        let x1 = SparsePoly::var(3, 0);
        assert!(!mu_invariant(&x1, f).unwrap());
        let thrice = apply_mu(&apply_mu(&apply_mu(&h, f).unwrap(), f).unwrap(), f).unwrap();
        assert_eq!(thrice, h);
        assert!(apply_mu(&cc.equation().add(&SparsePoly::constant(2, Elem::ONE), f), f).is_err());

        let g = cc.equation();
        assert_eq!(apply_eta(&g, Elem::ONE, 3, f).unwrap(), g);
        let roots = nth_roots_of_unity(f, 3).unwrap();
        assert_eq!(roots.extension_degree, 1);
        assert_eq!(roots.roots.len(), 3);
        for &u in &roots.roots {
            assert!(eta_invariant(&g, u, 3, f).unwrap());
        }
        // 3 has order 6 in GF(7)
        assert!(!eta_invariant(&g, Elem(3), 3, f).unwrap());
    }

    #[test]
    fn second_type_parameter_two_is_reducible() {
        // c = 2 with e1 = e2 = 1 factors; c = p - 2 does not
        let red = CanonicalCurve::simple(7, 3, 2).unwrap();
        assert!(!red.is_absolutely_irreducible().unwrap());
        let irr = CanonicalCurve::simple(7, 3, 5).unwrap();
        assert!(irr.is_absolutely_irreducible().unwrap());
        assert!(CanonicalCurve::simple(7, 3, 3).unwrap().is_absolutely_irreducible().unwrap());
    }

    #[test]
    fn json_round_trip() {
        let cc = CanonicalCurve::simple(11, 4, 3).unwrap();
        let j = cc.to_json();
        let back = CanonicalCurve::from_json(&j).unwrap();
        assert_eq!(back.equation(), cc.equation());
    }
}
