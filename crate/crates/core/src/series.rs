//! Truncated power series in one variable with explicit precision.

use crate::fields::{Elem, Gf, UniPoly};

/// Precision of an exact polynomial.
pub const EXACT: usize = usize::MAX;

/// A power series known modulo `tau^prec`. Coefficients past `coeffs.len()`
/// (and below `prec`) are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    pub coeffs: Vec<Elem>,
    pub prec: usize,
}

impl Series {
    pub fn new(mut coeffs: Vec<Elem>, prec: usize) -> Series {
        coeffs.truncate(prec);
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Series { coeffs, prec }
    }

    pub fn exact(p: &UniPoly) -> Series {
        Series::new(p.coeffs.clone(), EXACT)
    }

    pub fn zero(prec: usize) -> Series {
        Series::new(Vec::new(), prec)
    }

    pub fn constant(c: Elem) -> Series {
        Series::new(vec![c], EXACT)
    }

    pub fn monomial(c: Elem, k: usize) -> Series {
        let mut v = vec![Elem::ZERO; k + 1];
        v[k] = c;
        Series::new(v, EXACT)
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    /// Order of the first known nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Valuation, or the precision when every known coefficient is zero.
    fn val_or_prec(&self) -> usize {
        self.valuation().unwrap_or(self.prec)
    }

    pub fn add(&self, o: &Series, f: &Gf) -> Series {
        let prec = self.prec.min(o.prec);
        let n = self.coeffs.len().max(o.coeffs.len());
        Series::new((0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect(), prec)
    }

    pub fn sub(&self, o: &Series, f: &Gf) -> Series {
        self.add(&o.neg(f), f)
    }

    pub fn neg(&self, f: &Gf) -> Series {
        Series::new(self.coeffs.iter().map(|&c| f.neg(c)).collect(), self.prec)
    }

    pub fn scale(&self, c: Elem, f: &Gf) -> Series {
        Series::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect(), self.prec)
    }

    pub fn mul(&self, o: &Series, f: &Gf) -> Series {
        let prec = self
            .prec
            .saturating_add(o.val_or_prec())
            .min(o.prec.saturating_add(self.val_or_prec()));
        self.mul_to(o, prec, f)
    }

    /// Product truncated to at most `prec`.
    pub fn mul_to(&self, o: &Series, prec: usize, f: &Gf) -> Series {
        let prec = prec.min(
            self.prec
                .saturating_add(o.val_or_prec())
                .min(o.prec.saturating_add(self.val_or_prec())),
        );
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return Series::zero(prec);
        }
        let len = (self.coeffs.len() + o.coeffs.len() - 1).min(prec);
        let mut out = vec![Elem::ZERO; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate().take(len - i) {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Series::new(out, prec)
    }

    pub fn pow(&self, mut e: u64, f: &Gf) -> Series {
        let mut base = self.clone();
        let mut acc = Series::constant(Elem::ONE);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, f);
            }
        }
        acc
    }

    /// Multiplication by `tau^k`.
    pub fn shift_up(&self, k: usize) -> Series {
        let mut v = vec![Elem::ZERO; k];
        v.extend_from_slice(&self.coeffs);
        Series::new(v, self.prec.saturating_add(k))
    }

    /// Division by `tau^k`; the first `k` coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Option<Series> {
        if self.coeffs.iter().take(k).any(|c| !c.is_zero()) || self.prec < k {
            return None;
        }
        let v = self.coeffs.iter().skip(k).copied().collect();
        Some(Series::new(v, if self.prec == EXACT { EXACT } else { self.prec - k }))
    }

    /// Inverse of a series with nonzero constant term, to its own precision
    /// (or `cap` for exact input).
    pub fn inverse(&self, cap: usize, f: &Gf) -> Option<Series> {
        let c0 = self.coeff(0);
        let c0inv = f.inv(c0).ok()?;
        let prec = self.prec.min(cap);
        let mut inv = vec![Elem::ZERO; prec];
        if prec == 0 {
            return Some(Series::zero(0));
        }
        inv[0] = c0inv;
        for k in 1..prec {
            let s = f.sum((1..=k.min(self.coeffs.len().saturating_sub(1))).map(|i| f.mul(self.coeff(i), inv[k - i])));
            inv[k] = f.neg(f.mul(s, c0inv));
        }
        Some(Series::new(inv, prec))
    }

    /// `p(lambda tau^q)` for an exact polynomial `p`.
    pub fn substitute_monomial(p: &UniPoly, lambda: Elem, q: usize, f: &Gf) -> Series {
        let mut v = vec![Elem::ZERO; p.coeffs.len().saturating_sub(1) * q + 1];
        let mut lp = Elem::ONE;
        for (i, &c) in p.coeffs.iter().enumerate() {
            v[i * q] = f.mul(c, lp);
            lp = f.mul(lp, lambda);
        }
        Series::new(v, EXACT)
    }

    pub fn derivative(&self, f: &Gf) -> Series {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, f.from_u64(i as u64)))
            .collect();
        Series::new(v, if self.prec == EXACT { EXACT } else { self.prec.saturating_sub(1) })
    }

    pub fn map(&self, g: impl Fn(Elem) -> Elem) -> Series {
        Series::new(self.coeffs.iter().map(|&c| g(c)).collect(), self.prec)
    }

    /// Nonzero terms as `(exponent, coefficient)`.
    pub fn terms(&self) -> Vec<(usize, Elem)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| (i, c))
            .collect()
    }
}

/// Evaluates `g(X, Y)` on series, grouping by powers of `Y` (Horner).
pub fn eval_bivariate(g: &crate::poly::SparsePoly, x: &Series, y: &Series, f: &Gf) -> Series {
    let rows = g.as_univariate_coeffs(1);
    let mut acc = Series::zero(EXACT);
    for row in rows.iter().rev() {
        let mut a = Series::zero(EXACT);
        let mut xp = Series::constant(Elem::ONE);
        for (i, &c) in row.coeffs.iter().enumerate() {
            if i > 0 {
                xp = xp.mul(x, f);
            }
            if !c.is_zero() {
                a = a.add(&xp.scale(c, f), f);
            }
        }
        acc = acc.mul(y, f).add(&a, f);
    }
    acc
}
