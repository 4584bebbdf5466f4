//! Sparse multivariate polynomials (two affine or three homogeneous
//! variables) over a [`Gf`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{Elem, Gf, UniPoly};
use crate::linalg::{self, Mat3};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Elem>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> SparsePoly {
        SparsePoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Elem) -> SparsePoly {
        SparsePoly::monomial(nvars, vec![0; nvars], c)
    }

    pub fn monomial(nvars: usize, exp: Vec<u32>, c: Elem) -> SparsePoly {
        assert_eq!(exp.len(), nvars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        SparsePoly { nvars, terms }
    }

    pub fn var(nvars: usize, i: usize) -> SparsePoly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        SparsePoly::monomial(nvars, e, Elem::ONE)
    }

    /// Sums like terms and drops zeros.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Elem)>, f: &Gf) -> SparsePoly {
        let mut p = SparsePoly::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c, f);
        }
        p
    }

    pub fn add_term(&mut self, exp: Vec<u32>, c: Elem, f: &Gf) {
        assert_eq!(exp.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let new = f.add(self.coeff(&exp), c);
        if new.is_zero() {
            self.terms.remove(&exp);
        } else {
            self.terms.insert(exp, new);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Elem> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &[u32]) -> Elem {
        self.terms.get(exp).copied().unwrap_or(Elem::ZERO)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn add(&self, o: &SparsePoly, f: &Gf) -> SparsePoly {
        let mut r = self.clone();
        for (e, &c) in &o.terms {
            r.add_term(e.clone(), c, f);
        }
        r
    }

    pub fn neg(&self, f: &Gf) -> SparsePoly {
        self.map_coeffs(|c| f.neg(c))
    }

    pub fn sub(&self, o: &SparsePoly, f: &Gf) -> SparsePoly {
        self.add(&o.neg(f), f)
    }

    pub fn scale(&self, c: Elem, f: &Gf) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero(self.nvars);
        }
        self.map_coeffs(|x| f.mul(x, c))
    }

    pub fn mul(&self, o: &SparsePoly, f: &Gf) -> SparsePoly {
        let mut acc: BTreeMap<Vec<u32>, Elem> = BTreeMap::new();
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let slot = acc.entry(e).or_insert(Elem::ZERO);
                *slot = f.add(*slot, f.mul(c1, c2));
            }
        }
        acc.retain(|_, v| !v.is_zero());
        SparsePoly {
            nvars: self.nvars,
            terms: acc,
        }
    }

    pub fn pow(&self, e: u32, f: &Gf) -> SparsePoly {
        let mut r = SparsePoly::constant(self.nvars, Elem::ONE);
        for _ in 0..e {
            r = r.mul(self, f);
        }
        r
    }

    /// Applies `g` to every coefficient, dropping those that become zero.
    pub fn map_coeffs(&self, g: impl Fn(Elem) -> Elem) -> SparsePoly {
        SparsePoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, &c)| (e.clone(), g(c)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn eval(&self, point: &[Elem], f: &Gf) -> Elem {
        assert_eq!(point.len(), self.nvars);
        f.sum(self.terms.iter().map(|(e, &c)| {
            e.iter()
                .zip(point)
                .fold(c, |acc, (&k, &x)| f.mul(acc, f.pow(x, u64::from(k))))
        }))
    }

    pub fn derivative(&self, var: usize, f: &Gf) -> SparsePoly {
        let terms = self.terms.iter().filter(|(e, _)| e[var] > 0).map(|(e, &c)| {
            let mut e2 = e.clone();
            e2[var] -= 1;
            (e2, f.mul(c, f.from_u64(u64::from(e[var]))))
        });
        SparsePoly::from_terms(self.nvars, terms, f)
    }

    /// Homogenizes an affine `(x, y)` polynomial of degree `<= n` to
    /// `(x1, x2, x3)` with `x = x1/x3`, `y = x2/x3`.
    pub fn homogenize(&self, n: u32) -> SparsePoly {
        assert_eq!(self.nvars, 2);
        SparsePoly {
            nvars: 3,
            terms: self
                .terms
                .iter()
                .map(|(e, &c)| (vec![e[0], e[1], n - e[0] - e[1]], c))
                .collect(),
        }
    }

    /// Sets variable `var` of a 3-variable form to 1, keeping the other
    /// two in their original order.
    pub fn dehomogenize(&self, var: usize, f: &Gf) -> SparsePoly {
        assert_eq!(self.nvars, 3);
        let terms = self.terms.iter().map(|(e, &c)| {
            let rest: Vec<u32> = (0..3).filter(|&i| i != var).map(|i| e[i]).collect();
            (rest, c)
        });
        SparsePoly::from_terms(2, terms, f)
    }

    /// Reorders variables: variable `i` of the result is variable
    /// `perm[i]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> SparsePoly {
        assert_eq!(perm.len(), self.nvars);
        SparsePoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, &c)| (perm.iter().map(|&j| e[j]).collect(), c))
                .collect(),
        }
    }

    /// `H(v) = G(v M)` for a 3-variable `G` and a row vector `v`.
    pub fn substitute_linear(&self, m: &Mat3, f: &Gf) -> SparsePoly {
        assert_eq!(self.nvars, 3);
        let forms: Vec<SparsePoly> = (0..3)
            .map(|j| {
                SparsePoly::from_terms(
                    3,
                    (0..3).map(|i| {
                        let mut e = vec![0; 3];
                        e[i] = 1;
                        (e, m[i][j])
                    }),
                    f,
                )
            })
            .collect();
        self.substitute(&forms, f)
    }

    /// Substitutes polynomials (all in the same variable count) for each
    /// variable.
    pub fn substitute(&self, images: &[SparsePoly], f: &Gf) -> SparsePoly {
        assert_eq!(images.len(), self.nvars);
        let nv = images.first().map_or(self.nvars, |p| p.nvars);
        let mut powers: Vec<Vec<SparsePoly>> = images.iter().map(|p| vec![SparsePoly::constant(nv, Elem::ONE), p.clone()]).collect();
        let mut out = SparsePoly::zero(nv);
        for (e, &c) in &self.terms {
            let mut term = SparsePoly::constant(nv, c);
            for (v, &k) in e.iter().enumerate() {
                while powers[v].len() <= k as usize {
                    let next = powers[v].last().unwrap().mul(&images[v], f);
                    powers[v].push(next);
                }
                term = term.mul(&powers[v][k as usize], f);
            }
            out = out.add(&term, f);
        }
        out
    }

    /// True when every term contains variable `var`.
    pub fn divisible_by_var(&self, var: usize) -> bool {
        !self.is_zero() && self.terms.keys().all(|e| e[var] > 0)
    }

    /// `Some(lambda)` with `self = lambda * other`.
    pub fn proportional(&self, other: &SparsePoly, f: &Gf) -> Option<Elem> {
        if self.terms.len() != other.terms.len() || self.nvars != other.nvars {
            return None;
        }
        if self.terms.keys().ne(other.terms.keys()) {
            return None;
        }
        linalg::proportional(f, self.terms.values().copied(), other.terms.values().copied())
    }

    pub fn monic_by(&self, exp: &[u32], f: &Gf) -> Option<SparsePoly> {
        let c = self.terms.get(exp)?;
        Some(self.scale(f.inv(*c).ok()?, f))
    }

    /// A 2-variable polynomial as coefficients in variable `main`, each a
    /// univariate polynomial in the other variable.
    pub fn as_univariate_coeffs(&self, main: usize) -> Vec<UniPoly> {
        assert_eq!(self.nvars, 2);
        let other = 1 - main;
        let dm = self.degree_in(main).unwrap_or(0) as usize;
        let mut rows: Vec<Vec<Elem>> = vec![Vec::new(); dm + 1];
        for (e, &c) in &self.terms {
            let row = &mut rows[e[main] as usize];
            let k = e[other] as usize;
            if row.len() <= k {
                row.resize(k + 1, Elem::ZERO);
            }
            row[k] = c;
        }
        rows.into_iter().map(UniPoly::new).collect()
    }

    /// Inverse of [`as_univariate_coeffs`](Self::as_univariate_coeffs).
    pub fn from_univariate_coeffs(main: usize, coeffs: &[UniPoly]) -> SparsePoly {
        let other = 1 - main;
        let mut terms = BTreeMap::new();
        for (i, u) in coeffs.iter().enumerate() {
            for (j, &c) in u.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    let mut e = vec![0u32; 2];
                    e[main] = i as u32;
                    e[other] = j as u32;
                    terms.insert(e, c);
                }
            }
        }
        SparsePoly { nvars: 2, terms }
    }

    /// Univariate polynomial in `var` after fixing every other variable.
    pub fn specialize(&self, var: usize, values: &[Elem], f: &Gf) -> UniPoly {
        let mut coeffs: Vec<Elem> = Vec::new();
        for (e, &c) in &self.terms {
            let mut v = c;
            for (i, &k) in e.iter().enumerate() {
                if i != var {
                    v = f.mul(v, f.pow(values[i], u64::from(k)));
                }
            }
            let k = e[var] as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Elem::ZERO);
            }
            coeffs[k] = f.add(coeffs[k], v);
        }
        UniPoly::new(coeffs)
    }

    /// Human-readable form, e.g. `x^2*y + 3*y^2` with elements in the
    /// field's display format.
    pub fn display(&self, f: &Gf) -> String {
        let names: &[&str] = if self.nvars == 2 { &["x", "y"] } else { &["x1", "x2", "x3"] };
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, &c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].to_string() } else { format!("{}^{}", names[i], k) })
                .collect();
            let cs = f.format_elem(c);
            let s = match (mono.is_empty(), c == Elem::ONE) {
                (true, _) => cs,
                (false, true) => mono.join("*"),
                (false, false) => {
                    if cs.contains(',') {
                        format!("[{}]*{}", cs, mono.join("*"))
                    } else {
                        format!("{}*{}", cs, mono.join("*"))
                    }
                }
            };
            parts.push(s);
        }
        parts.join(" + ")
    }

    pub fn to_json(&self, f: &Gf) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(e, &c)| TermJson {
                exp: e.clone(),
                coef: f.format_elem(c),
            })
            .collect()
    }

    pub fn from_json(nvars: usize, terms: &[TermJson], f: &Gf) -> Result<SparsePoly> {
        let mut out = SparsePoly::zero(nvars);
        for t in terms {
            if t.exp.len() != nvars {
                return Err(Error::InvalidArgument(format!("term {:?} has wrong arity", t.exp)));
            }
            out.add_term(t.exp.clone(), f.parse_elem(&t.coef)?, f);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coef: String,
}
