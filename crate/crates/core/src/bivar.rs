//! Bivariate polynomials as polynomials in `y` over `F[x]`: resultants,
//! exact division and an irreducibility test by Hensel lifting.

use rand::Rng;

use crate::arith;
use crate::error::Result;
use crate::fields::{self, Elem, Embedding, Gf, UniPoly};
use crate::poly::SparsePoly;

/// `sum_j c[j](x) y^j`, no trailing zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bivar {
    pub c: Vec<UniPoly>,
}

impl Bivar {
    pub fn new(mut c: Vec<UniPoly>) -> Bivar {
        while c.last().is_some_and(|p| p.is_zero()) {
            c.pop();
        }
        Bivar { c }
    }

    pub fn from_sparse(g: &SparsePoly) -> Bivar {
        Bivar::new(g.as_univariate_coeffs(1))
    }

    pub fn to_sparse(&self) -> SparsePoly {
        SparsePoly::from_univariate_coeffs(1, &self.c)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn deg_y(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn deg_x(&self) -> i64 {
        self.c.iter().map(|p| p.deg()).max().unwrap_or(-1)
    }

    pub fn lc(&self) -> UniPoly {
        self.c.last().cloned().unwrap_or_default()
    }

    /// `f(a, y)`.
    pub fn eval_x(&self, a: Elem, f: &Gf) -> UniPoly {
        UniPoly::new(self.c.iter().map(|p| p.eval(a, f)).collect())
    }

    /// `f(x + a, y)`.
    pub fn shift_x(&self, a: Elem, f: &Gf) -> Bivar {
        let lin = UniPoly::new(vec![a, Elem::ONE]);
        Bivar::new(self.c.iter().map(|p| p.compose(&lin, f)).collect())
    }

    /// Exchanges the roles of `x` and `y`.
    pub fn swap(&self) -> Bivar {
        let dx = self.deg_x().max(0) as usize;
        let mut out = vec![vec![Elem::ZERO; self.c.len()]; dx + 1];
        for (j, p) in self.c.iter().enumerate() {
            for (i, &a) in p.coeffs.iter().enumerate() {
                out[i][j] = a;
            }
        }
        Bivar::new(out.into_iter().map(UniPoly::new).collect())
    }

    pub fn derivative_y(&self, f: &Gf) -> Bivar {
        Bivar::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, p)| p.scale(f.from_u64(j as u64), f))
                .collect(),
        )
    }

    pub fn derivative_x(&self, f: &Gf) -> Bivar {
        Bivar::new(self.c.iter().map(|p| p.derivative(f)).collect())
    }

    pub fn mul(&self, o: &Bivar, f: &Gf) -> Bivar {
        if self.is_zero() || o.is_zero() {
            return Bivar::new(Vec::new());
        }
        let mut out = vec![UniPoly::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b, f), f);
            }
        }
        Bivar::new(out)
    }

    pub fn sub(&self, o: &Bivar, f: &Gf) -> Bivar {
        let n = self.c.len().max(o.c.len());
        let z = UniPoly::zero();
        Bivar::new(
            (0..n)
                .map(|j| self.c.get(j).unwrap_or(&z).sub(o.c.get(j).unwrap_or(&z), f))
                .collect(),
        )
    }

    /// Gcd of the `y`-coefficients (monic).
    pub fn content(&self, f: &Gf) -> UniPoly {
        self.c.iter().fold(UniPoly::zero(), |g, p| g.gcd(p, f))
    }

    pub fn div_poly_x(&self, d: &UniPoly, f: &Gf) -> Option<Bivar> {
        self.c
            .iter()
            .map(|p| p.div_exact(d, f))
            .collect::<Option<Vec<_>>>()
            .map(Bivar::new)
    }

    /// `self / d` when the division is exact in `F[x][y]`.
    pub fn div_exact(&self, d: &Bivar, f: &Gf) -> Option<Bivar> {
        if d.is_zero() {
            return None;
        }
        let dd = d.deg_y();
        let lc = d.lc();
        let mut r = self.clone();
        if r.deg_y() < dd {
            return r.is_zero().then(|| Bivar::new(Vec::new()));
        }
        let mut q = vec![UniPoly::zero(); (r.deg_y() - dd + 1) as usize];
        while !r.is_zero() && r.deg_y() >= dd {
            let k = (r.deg_y() - dd) as usize;
            let coef = r.lc().div_exact(&lc, f)?;
            let mut shifted = vec![UniPoly::zero(); k];
            shifted.extend(d.c.iter().map(|p| p.mul(&coef, f)));
            r = r.sub(&Bivar::new(shifted), f);
            q[k] = coef;
        }
        r.is_zero().then(|| Bivar::new(q))
    }

    pub fn map_coeffs(&self, emb: &Embedding) -> Bivar {
        Bivar::new(self.c.iter().map(|p| emb.embed_poly(p)).collect())
    }
}

/// Determinant of a square matrix over `F[x]` by Bareiss elimination.
pub fn det_poly(mut m: Vec<Vec<UniPoly>>, f: &Gf) -> UniPoly {
    let n = m.len();
    if n == 0 {
        return UniPoly::one();
    }
    let mut prev = UniPoly::one();
    let mut sign = false;
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(s) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return UniPoly::zero();
            };
            m.swap(k, s);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k], f).sub(&m[i][k].mul(&m[k][j], f), f);
                m[i][j] = num.div_exact(&prev, f).expect("Bareiss division is exact");
            }
            m[i][k] = UniPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        d.neg(f)
    } else {
        d
    }
}

/// `Res_y(a, b)` as a polynomial in `x` (Sylvester determinant).
pub fn resultant_y(a: &Bivar, b: &Bivar, f: &Gf) -> UniPoly {
    let (m, n) = (a.deg_y(), b.deg_y());
    if m < 0 || n < 0 {
        return UniPoly::zero();
    }
    let (m, n) = (m as usize, n as usize);
    if m == 0 && n == 0 {
        return UniPoly::one();
    }
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![UniPoly::zero(); size];
        for (j, p) in a.c.iter().rev().enumerate() {
            row[i + j] = p.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![UniPoly::zero(); size];
        for (j, p) in b.c.iter().rev().enumerate() {
            row[i + j] = p.clone();
        }
        rows.push(row);
    }
    det_poly(rows, f)
}

/// Whether `g` is irreducible over `f` itself (as a polynomial of positive
/// degree, ignoring constant factors).
pub fn is_irreducible_over<R: Rng>(g: &Bivar, f: &Gf, rng: &mut R) -> Result<bool> {
    if g.is_zero() {
        return Ok(false);
    }
    let mut g = g.clone();
    if g.deg_y() == 0 {
        let p = g.c[0].clone();
        return Ok(p.deg() >= 1 && p.is_irreducible(f));
    }
    if g.content(f).deg() > 0 {
        return Ok(false);
    }
    if g.derivative_y(f).is_zero() {
        g = g.swap();
        if g.derivative_y(f).is_zero() {
            // a p-th power
            return Ok(false);
        }
        if g.deg_y() == 0 || g.content(f).deg() > 0 {
            return Ok(g.deg_y() == 0 && g.c[0].deg() == 1);
        }
    }
    if g.deg_y() == 1 {
        return Ok(true);
    }
    let dx = g.deg_x().max(0) as u64;
    let dy = g.deg_y() as u64;
    let bound = dx * 2 * dy + dx + 1;
    let mut bad = 0u64;
    let mut good = None;
    for a in f.elements() {
        let u = g.eval_x(a, f);
        if u.deg() == dy as i64 && u.is_squarefree(f) {
            good = Some(a);
            break;
        }
        bad += 1;
        if bad > bound {
            // the discriminant vanishes identically: g shares a factor with g_y
            return Ok(false);
        }
    }
    match good {
        Some(a) => Ok(find_factor(&g.shift_x(a, f), f, rng).is_none()),
        None => irreducible_via_extension(&g, f, bound, rng),
    }
}

/// First `a` with `g(a, y)` square-free of full degree.
fn good_point(g: &Bivar, f: &Gf) -> Option<Elem> {
    let dy = g.deg_y();
    f.elements().find(|&a| {
        let u = g.eval_x(a, f);
        u.deg() == dy && u.is_squarefree(f)
    })
}

/// For fields too small to hold a good evaluation point: take an
/// irreducible factor over an extension `K` and multiply its distinct
/// Frobenius conjugates. That product is the irreducible factor over `f`
/// containing it, so `g` is irreducible iff the product has `g`'s degree.
fn irreducible_via_extension<R: Rng>(g: &Bivar, f: &Gf, bound: u64, rng: &mut R) -> Result<bool> {
    let mut d = 2u32;
    while (f.order() as f64).powi(d as i32) <= (bound + 1) as f64 {
        d += 1;
    }
    let (big, emb) = fields::extend(f, d)?;
    let gk = g.map_coeffs(&emb);
    // more than `bound` bad points: the discriminant vanishes identically
    let Some(a) = good_point(&gk, &big) else { return Ok(false) };
    let mut h = gk.shift_x(a, &big);
    while let Some(fac) = find_factor(&h, &big, rng) {
        let other = h.div_exact(&fac, &big).expect("factor divides");
        h = if fac.deg_y() <= other.deg_y() { fac } else { other };
    }
    let phi = normalize(&h.shift_x(big.neg(a), &big), &big);
    let mut orbit = vec![phi.clone()];
    let frob = |b: &Bivar| {
        let c = b.c.iter().map(|p| UniPoly::new(p.coeffs.iter().map(|&x| big.frobenius_p(x, f.degree())).collect()));
        normalize(&Bivar::new(c.collect()), &big)
    };
    let mut next = frob(&phi);
    while next != phi {
        orbit.push(next.clone());
        next = frob(&next);
    }
    let dy: i64 = orbit.iter().map(|b| b.deg_y()).sum();
    Ok(dy == g.deg_y())
}

/// Scales so the leading coefficient of the `y`-leading coefficient is 1.
fn normalize(b: &Bivar, f: &Gf) -> Bivar {
    let inv = f.inv(b.lc().lead()).expect("nonzero");
    Bivar::new(b.c.iter().map(|p| p.scale(inv, f)).collect())
}

/// Series in `x` with `y`-polynomial coefficients, truncated at `prec`.
type XSeries = Vec<UniPoly>;

fn to_xseries(g: &Bivar, prec: usize) -> XSeries {
    let mut s = vec![Vec::new(); prec];
    for (j, p) in g.c.iter().enumerate() {
        for (i, &a) in p.coeffs.iter().enumerate().take(prec) {
            if s[i].len() <= j {
                s[i].resize(j + 1, Elem::ZERO);
            }
            s[i][j] = a;
        }
    }
    s.into_iter().map(UniPoly::new).collect()
}

fn from_xseries(s: &XSeries) -> Bivar {
    let dy = s.iter().map(|p| p.deg()).max().unwrap_or(-1);
    if dy < 0 {
        return Bivar::new(Vec::new());
    }
    let mut c = vec![vec![Elem::ZERO; s.len()]; dy as usize + 1];
    for (i, p) in s.iter().enumerate() {
        for (j, &a) in p.coeffs.iter().enumerate() {
            c[j][i] = a;
        }
    }
    Bivar::new(c.into_iter().map(UniPoly::new).collect())
}

fn xs_mul(a: &XSeries, b: &XSeries, prec: usize, f: &Gf) -> XSeries {
    let mut out = vec![UniPoly::zero(); prec];
    for (i, p) in a.iter().enumerate().take(prec) {
        if p.is_zero() {
            continue;
        }
        for (j, q) in b.iter().enumerate().take(prec - i) {
            out[i + j] = out[i + j].add(&p.mul(q, f), f);
        }
    }
    out
}

/// Inverse of a power series in `x` with nonzero constant term.
fn series_inverse(p: &UniPoly, prec: usize, f: &Gf) -> Vec<Elem> {
    let c0inv = f.inv(p.coeff(0)).expect("unit series");
    let mut inv = vec![Elem::ZERO; prec];
    inv[0] = c0inv;
    for k in 1..prec {
        let s = f.sum((1..=k).map(|i| f.mul(p.coeff(i), inv[k - i])));
        inv[k] = f.neg(f.mul(s, c0inv));
    }
    inv
}

/// A proper factor of `g` (with `g(0, y)` square-free of full degree), or
/// `None` when `g` is irreducible.
fn find_factor<R: Rng>(g: &Bivar, f: &Gf, rng: &mut R) -> Option<Bivar> {
    let dy = g.deg_y() as usize;
    let prec = g.deg_x().max(0) as usize + 1;
    let u0 = g.eval_x(Elem::ZERO, f);
    let factors: Vec<UniPoly> = u0.factor(f, rng).into_iter().map(|(p, _)| p).collect();
    let r = factors.len();
    if r <= 1 {
        return None;
    }
    let lc = g.lc();
    let lc_inv = series_inverse(&lc, prec, f);
    let gs = to_xseries(g, prec);
    let inv_s: XSeries = lc_inv.iter().map(|&a| UniPoly::constant(a)).collect();
    let target = xs_mul(&gs, &inv_s, prec, f);

    // cofactor inverses: s_i = (prod_{j != i} g_j)^-1 mod g_i
    let s: Vec<UniPoly> = (0..r)
        .map(|i| {
            let other = factors
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(UniPoly::one(), |acc, (_, p)| acc.mul(p, f));
            let (d, a, _) = other.ext_gcd(&factors[i], f);
            a.scale(f.inv(d.lead()).unwrap(), f).rem(&factors[i], f)
        })
        .collect();
    let mut lifted: Vec<XSeries> = factors
        .iter()
        .map(|p| {
            let mut v = vec![UniPoly::zero(); prec];
            v[0] = p.clone();
            v
        })
        .collect();
    for k in 1..prec {
        let prod = lifted
            .iter()
            .skip(1)
            .fold(lifted[0].clone(), |acc, p| xs_mul(&acc, p, k + 1, f));
        let err = target[k].sub(&prod[k], f);
        if err.is_zero() {
            continue;
        }
        for i in 0..r {
            lifted[i][k] = err.mul(&s[i], f).rem(&factors[i], f);
        }
    }
    debug_assert!(dy == factors.iter().map(|p| p.deg() as usize).sum::<usize>());
    let lc_s: XSeries = lc.coeffs.iter().map(|&a| UniPoly::constant(a)).collect();
    let mut lc_s = lc_s;
    lc_s.resize(prec, UniPoly::zero());
    for size in 1..=r / 2 {
        for subset in subsets(r, size) {
            if size * 2 == r && !subset.contains(&0) {
                continue;
            }
            let mut h = lc_s.clone();
            for &i in &subset {
                h = xs_mul(&h, &lifted[i], prec, f);
            }
            let hb = from_xseries(&h);
            let cont = hb.content(f);
            let hp = hb.div_poly_x(&cont, f).unwrap();
            if hp.deg_y() >= 1 && g.div_exact(&hp, f).is_some() {
                return Some(hp);
            }
        }
    }
    None
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Absolute irreducibility of `g(x, y)` over the algebraic closure of `f`.
///
/// If `g` is irreducible over `f` but splits over the closure, it splits
/// into `r` conjugate factors with `r | gcd(deg g, deg_x g, deg_y g)`, and
/// already becomes reducible over `GF(|f|^l)` for any prime `l | r`. So it
/// suffices to test irreducibility over an extension whose degree is a
/// multiple of the radical of that gcd.
pub fn is_absolutely_irreducible<R: Rng>(g: &SparsePoly, f: &Gf, rng: &mut R) -> Result<bool> {
    assert_eq!(g.nvars(), 2);
    let Some(n) = g.degree() else { return Ok(false) };
    if n == 0 {
        return Ok(false);
    }
    if n == 1 {
        return Ok(true);
    }
    let b = Bivar::from_sparse(g);
    let dx = b.deg_x().max(0) as u64;
    let dy = b.deg_y().max(0) as u64;
    let gg = arith::gcd(arith::gcd(u64::from(n), dx), dy);
    let m = arith::radical(gg.max(1)) as u32;
    let bound = (dx.max(dy) * 2 * (dx + dy) + dx + dy + 2) as f64;
    let mut j = 1u32;
    while (f.order() as f64).powi((m * j) as i32) <= 2.0 * bound {
        j += 1;
    }
    let d = m * j;
    if d == 1 {
        return is_irreducible_over(&b, f, rng);
    }
    let (big, emb) = fields::extend(f, d)?;
    is_irreducible_over(&b.map_coeffs(&emb), &big, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sp(f: &Gf, terms: &[((u32, u32), i64)]) -> SparsePoly {
        SparsePoly::from_terms(2, terms.iter().map(|&((i, j), c)| (vec![i, j], f.from_i64(c))), f)
    }

    #[test]
    fn resultant_of_circle_and_line() {
        let f = Gf::prime(7).unwrap();
        // x^2 + y^2 - 1 and y - x: resultant 2x^2 - 1
        let a = Bivar::from_sparse(&sp(&f, &[((2, 0), 1), ((0, 2), 1), ((0, 0), -1)]));
        let b = Bivar::from_sparse(&sp(&f, &[((0, 1), 1), ((1, 0), -1)]));
        let r = resultant_y(&a, &b, &f);
        assert_eq!(r.coeffs, vec![f.from_i64(-1), Elem::ZERO, Elem(2)]);
    }

    #[test]
    fn exact_division() {
        let f = Gf::prime(5).unwrap();
        let a = Bivar::from_sparse(&sp(&f, &[((1, 1), 1), ((0, 0), 1)]));
        let b = Bivar::from_sparse(&sp(&f, &[((0, 1), 1), ((2, 0), 1)]));
        let ab = a.mul(&b, &f);
        assert_eq!(ab.div_exact(&a, &f), Some(b.clone()));
        assert_eq!(ab.div_exact(&b, &f), Some(a.clone()));
        let one = Bivar::from_sparse(&sp(&f, &[((0, 1), 1), ((0, 0), 1)]));
        assert!(ab.div_exact(&one, &f).is_none());
    }

    #[test]
    fn irreducibility_examples() {
        let f = Gf::prime(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(!is_absolutely_irreducible(&sp(&f, &[((1, 1), 1)]), &f, &mut rng).unwrap());
        assert!(is_absolutely_irreducible(&sp(&f, &[((0, 1), 1), ((2, 0), -1)]), &f, &mut rng).unwrap());
        // x^2 + y^2: irreducible over GF(7) but splits over GF(49)
        let circle = sp(&f, &[((2, 0), 1), ((0, 2), 1)]);
        assert!(is_irreducible_over(&Bivar::from_sparse(&circle), &f, &mut rng).unwrap());
        assert!(!is_absolutely_irreducible(&circle, &f, &mut rng).unwrap());
        // nodal cubic
        let nodal = sp(&f, &[((0, 2), 1), ((2, 0), -1), ((3, 0), -1)]);
        assert!(is_absolutely_irreducible(&nodal, &f, &mut rng).unwrap());
        // product of two conics
        let c1 = sp(&f, &[((0, 2), 1), ((1, 0), 3), ((1, 1), 1)]);
        let c2 = sp(&f, &[((2, 0), 1), ((0, 1), 1), ((0, 0), 2)]);
        assert!(!is_absolutely_irreducible(&c1.mul(&c2, &f), &f, &mut rng).unwrap());
        // square of an irreducible
        assert!(!is_absolutely_irreducible(&c1.mul(&c1, &f), &f, &mut rng).unwrap());
        // y^7 - x: f_y = 0 after reduction mod 7
        assert!(is_absolutely_irreducible(&sp(&f, &[((0, 7), 1), ((1, 0), -1)]), &f, &mut rng).unwrap());
    }

    #[test]
    fn no_good_point_in_gf2() {
        let f = Gf::prime(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // g(0, y) and g(1, y) are both squares
        let irr = sp(&f, &[((0, 2), 1), ((2, 1), 1), ((1, 1), 1), ((3, 0), 1), ((1, 0), 1), ((0, 0), 1)]);
        assert!(is_irreducible_over(&Bivar::from_sparse(&irr), &f, &mut rng).unwrap());
        let a = sp(&f, &[((0, 1), 1), ((3, 0), 1)]);
        let b = sp(&f, &[((0, 1), 1), ((3, 0), 1), ((2, 0), 1), ((1, 0), 1)]);
        let red = Bivar::from_sparse(&a.mul(&b, &f));
        assert!(!is_irreducible_over(&red, &f, &mut rng).unwrap());
    }
}
