//! Singular points of plane curves and their delta invariants.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bivar::{self, Bivar};
use crate::error::{Error, Result};
use crate::fields::{self, Elem, Embedding, Gf, UniPoly};
use crate::poly::SparsePoly;

/// Order of `g` at the origin (least total degree of a term).
pub fn multiplicity_at_origin(g: &SparsePoly) -> u32 {
    g.terms().keys().map(|e| e.iter().sum::<u32>()).min().unwrap_or(u32::MAX)
}

/// `g(x + a, y + b)`.
pub fn translate(g: &SparsePoly, a: Elem, b: Elem, f: &Gf) -> SparsePoly {
    let x = SparsePoly::var(2, 0).add(&SparsePoly::constant(2, a), f);
    let y = SparsePoly::var(2, 1).add(&SparsePoly::constant(2, b), f);
    g.substitute(&[x, y], f)
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xde17a)
}

/// A field extension of degree `d`, with the identity for `d = 1`.
fn lift(f: &Gf, d: u32) -> Result<(Gf, Option<Embedding>)> {
    if d == 1 {
        Ok((f.clone(), None))
    } else {
        let (big, emb) = fields::extend(f, d)?;
        Ok((big, Some(emb)))
    }
}

fn embed_poly2(g: &SparsePoly, emb: &Option<Embedding>) -> SparsePoly {
    match emb {
        Some(e) => g.map_coeffs(|a| e.embed(a)),
        None => g.clone(),
    }
}

/// `(root, field containing it, embedding into that field, orbit size)`.
type RootOrbit = (Elem, Gf, Option<Embedding>, u32);

/// A representative of each Galois orbit of roots of `p`.
fn root_orbits(p: &UniPoly, f: &Gf) -> Result<Vec<RootOrbit>> {
    let mut out = Vec::new();
    let mut r = rng();
    let mut facs = p.factor(f, &mut r);
    facs.sort_by(|a, b| (a.0.coeffs.len(), &a.0.coeffs).cmp(&(b.0.coeffs.len(), &b.0.coeffs)));
    for (psi, _) in facs {
        let d = psi.deg() as u32;
        let (fd, emb) = lift(f, d)?;
        let psid = match &emb {
            Some(e) => e.embed_poly(&psi),
            None => psi.clone(),
        };
        let root = psid.roots(&fd, &mut r)[0];
        out.push((root, fd, emb, d));
    }
    Ok(out)
}

/// `delta` of `g` at the origin by successive blowups. `cap` bounds the
/// running total; exceeding it means `g` is not reduced there.
pub fn delta_at_origin(g: &SparsePoly, f: &Gf, cap: u64) -> Result<u64> {
    delta_rec(g, f, cap, 0)
}

fn delta_rec(g: &SparsePoly, f: &Gf, cap: u64, depth: usize) -> Result<u64> {
    if g.is_zero() || depth > 256 {
        return Err(Error::NotSquareFree("non-isolated singularity".into()));
    }
    let m = multiplicity_at_origin(g);
    if m <= 1 {
        return Ok(0);
    }
    let m64 = u64::from(m);
    let mut total = m64 * (m64 - 1) / 2;
    if total > cap {
        return Err(Error::NotSquareFree("delta exceeds the genus bound".into()));
    }
    // tangent cone restricted to x = 1
    let mut cone = vec![Elem::ZERO; m as usize + 1];
    for (e, &a) in g.terms() {
        if e[0] + e[1] == m {
            cone[e[1] as usize] = a;
        }
    }
    let cone = UniPoly::new(cone);
    for (r, fd, emb, d) in root_orbits(&cone, f)? {
        // y = x (y1 + r), divided by x^m
        let gd = embed_poly2(g, &emb);
        let blown = blow_up_x(&gd, m, &fd);
        let moved = translate(&blown, Elem::ZERO, r, &fd);
        total += u64::from(d) * delta_rec(&moved, &fd, cap - total, depth + 1)?;
        if total > cap {
            return Err(Error::NotSquareFree("delta exceeds the genus bound".into()));
        }
    }
    if cone.deg() < i64::from(m) {
        // the direction x = 0: x = y x1, divided by y^m
        let swapped = g.permute(&[1, 0]);
        let blown = blow_up_x(&swapped, m, f);
        total += delta_rec(&blown, f, cap - total, depth + 1)?;
    }
    if total > cap {
        return Err(Error::NotSquareFree("delta exceeds the genus bound".into()));
    }
    Ok(total)
}

/// `g(x, x y) / x^m`.
fn blow_up_x(g: &SparsePoly, m: u32, f: &Gf) -> SparsePoly {
    SparsePoly::from_terms(2, g.terms().iter().map(|(e, &a)| (vec![e[0] + e[1] - m, e[1]], a)), f)
}

/// `delta` of the affine curve `g = 0` at `(a, b)`.
pub fn delta_invariant(g: &SparsePoly, a: Elem, b: Elem, f: &Gf) -> Result<u64> {
    let n = u64::from(g.degree().unwrap_or(0));
    let cap = n.saturating_sub(1) * n.saturating_sub(2) / 2 + n;
    delta_at_origin(&translate(g, a, b, f), f, cap)
}

/// A singular point, one representative per Galois orbit over the base.
#[derive(Clone, Debug)]
pub struct SingularPoint {
    pub field: Gf,
    /// Homogeneous coordinates in `(x1, x2, x3)`, `x = x1/x3`, `y = x2/x3`.
    pub point: [Elem; 3],
    pub conjugates: u32,
    pub multiplicity: u32,
    pub delta: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularPointJson {
    pub field: String,
    pub point: Vec<String>,
    pub conjugates: u32,
    pub multiplicity: u32,
    pub delta: u64,
}

impl SingularPoint {
    pub fn to_json(&self) -> SingularPointJson {
        SingularPointJson {
            field: self.field.spec_string(),
            point: self.point.iter().map(|&a| self.field.format_elem(a)).collect(),
            conjugates: self.conjugates,
            multiplicity: self.multiplicity,
            delta: self.delta,
        }
    }
}

/// Singular points of the projective closure of `g = 0` (affine part via
/// resultants, the line at infinity via its two charts).
pub fn find_singularities(g: &SparsePoly, f: &Gf) -> Result<Vec<SingularPoint>> {
    let n = g.degree().ok_or_else(|| Error::InvalidArgument("zero polynomial".into()))?;
    let cap = u64::from(n) * u64::from(n);
    let mut out = Vec::new();
    let gx = g.derivative(0, f);
    let gy = g.derivative(1, f);

    // affine part: x-coordinates are roots of a resultant
    let b = Bivar::from_sparse(g);
    let mut r = UniPoly::zero();
    for d in [&gy, &gx] {
        if !d.is_zero() && b.deg_y() > 0 {
            let res = bivar::resultant_y(&b, &Bivar::from_sparse(d), f);
            r = r.gcd(&res, f);
        }
    }
    if b.deg_y() <= 0 {
        // a union of vertical lines: no affine singularities when square-free
        let p = b.c.first().cloned().unwrap_or_default();
        if !p.is_squarefree(f) {
            return Err(Error::NotSquareFree("repeated vertical line".into()));
        }
    } else if r.is_zero() {
        return Err(Error::NotSquareFree("resultants vanish identically".into()));
    } else if r.deg() > 0 {
        for (x0, fd, emb, d) in root_orbits(&r, f)? {
            let (gd, gxd, gyd) = (embed_poly2(g, &emb), embed_poly2(&gx, &emb), embed_poly2(&gy, &emb));
            let vals = |p: &SparsePoly| p.specialize(1, &[x0, Elem::ZERO], &fd);
            let h = vals(&gd).gcd(&vals(&gxd), &fd).gcd(&vals(&gyd), &fd);
            if h.is_zero() {
                return Err(Error::NotSquareFree("singular along a vertical line".into()));
            }
            if h.deg() == 0 {
                continue;
            }
            for (y0, fe, emb2, e) in root_orbits(&h, &fd)? {
                let ge = embed_poly2(&gd, &emb2);
                let x0e = emb2.as_ref().map_or(x0, |m| m.embed(x0));
                let local = translate(&ge, x0e, y0, &fe);
                out.push(SingularPoint {
                    multiplicity: multiplicity_at_origin(&local),
                    delta: delta_at_origin(&local, &fe, cap)?,
                    point: [x0e, y0, Elem::ONE],
                    conjugates: d * e,
                    field: fe,
                });
            }
        }
    }

    // line at infinity
    let hom = g.homogenize(n);
    let chart1 = hom.dehomogenize(0, f); // (x2, x3) with x1 = 1
    let c1 = chart1.specialize(0, &[Elem::ZERO, Elem::ZERO], f);
    let c1s = chart1.derivative(0, f).specialize(0, &[Elem::ZERO, Elem::ZERO], f);
    let c1z = chart1.derivative(1, f).specialize(0, &[Elem::ZERO, Elem::ZERO], f);
    let h = c1.gcd(&c1s, f).gcd(&c1z, f);
    if h.is_zero() {
        return Err(Error::NotSquareFree("singular along the line at infinity".into()));
    }
    if h.deg() > 0 {
        for (s0, fd, emb, d) in root_orbits(&h, f)? {
            let local = translate(&embed_poly2(&chart1, &emb), s0, Elem::ZERO, &fd);
            out.push(SingularPoint {
                multiplicity: multiplicity_at_origin(&local),
                delta: delta_at_origin(&local, &fd, cap)?,
                point: [Elem::ONE, s0, Elem::ZERO],
                conjugates: d,
                field: fd,
            });
        }
    }
    let chart2 = hom.dehomogenize(1, f); // (x1, x3) with x2 = 1
    if multiplicity_at_origin(&chart2) >= 2 {
        out.push(SingularPoint {
            multiplicity: multiplicity_at_origin(&chart2),
            delta: delta_at_origin(&chart2, f, cap)?,
            point: [Elem::ZERO, Elem::ONE, Elem::ZERO],
            conjugates: 1,
            field: f.clone(),
        });
    }
    Ok(out)
}

/// `(n-1)(n-2)/2 - sum delta` over all singular points, with the points.
pub fn delta_genus(g: &SparsePoly, f: &Gf) -> Result<(i64, Vec<SingularPoint>)> {
    let n = i64::from(g.degree().unwrap_or(0));
    let pts = find_singularities(g, f)?;
    let total: i64 = pts.iter().map(|p| i64::from(p.conjugates) * p.delta as i64).sum();
    Ok(((n - 1) * (n - 2) / 2 - total, pts))
}
