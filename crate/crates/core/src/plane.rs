//! `PG(2,q)` and `PG(2,q^3)` under the Singer identification.
//!
//! Collineations act on row vectors: a point `v` goes to `v^(sigma) M`, where
//! `sigma` is the Frobenius twist. With this convention the companion
//! matrix `C` of the minimal polynomial of `omega` is multiplication by
//! `omega` in the basis `1, omega, omega^2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{Elem, Embedding, Gf, TowerContext};
use crate::linalg::{self, Mat3};

/// A point of `PG(2, F)`, normalized so the first nonzero coordinate is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint(pub [Elem; 3]);

/// A line `u0 x0 + u1 x1 + u2 x2 = 0`, normalized like points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjLine(pub [Elem; 3]);

fn normalize(f: &Gf, v: [Elem; 3]) -> Result<[Elem; 3]> {
    let lead = v
        .iter()
        .find(|x| !x.is_zero())
        .ok_or_else(|| Error::InvalidArgument("all homogeneous coordinates are zero".into()))?;
    let inv = f.inv(*lead)?;
    Ok(v.map(|x| f.mul(x, inv)))
}

impl ProjPoint {
    pub fn new(f: &Gf, v: [Elem; 3]) -> Result<ProjPoint> {
        normalize(f, v).map(ProjPoint)
    }

    pub fn coords(&self) -> [Elem; 3] {
        self.0
    }

    pub fn on(&self, line: &ProjLine, f: &Gf) -> bool {
        dot(f, &self.0, &line.0).is_zero()
    }

    pub fn to_json(&self, f: &Gf) -> Vec<String> {
        self.0.iter().map(|&x| f.format_elem(x)).collect()
    }

    pub fn from_json(coords: &[String], f: &Gf) -> Result<ProjPoint> {
        let v = parse_triple(coords, f)?;
        ProjPoint::new(f, v)
    }
}

impl ProjLine {
    pub fn new(f: &Gf, u: [Elem; 3]) -> Result<ProjLine> {
        normalize(f, u).map(ProjLine)
    }

    /// The line joining two distinct points.
    pub fn through(f: &Gf, p: &ProjPoint, q: &ProjPoint) -> Result<ProjLine> {
        ProjLine::new(f, cross(f, &p.0, &q.0))
            .map_err(|_| Error::InvalidArgument("points coincide".into()))
    }

    pub fn coords(&self) -> [Elem; 3] {
        self.0
    }

    pub fn to_json(&self, f: &Gf) -> Vec<String> {
        self.0.iter().map(|&x| f.format_elem(x)).collect()
    }

    /// The intersection point of two distinct lines.
    pub fn meet(&self, other: &ProjLine, f: &Gf) -> Result<ProjPoint> {
        ProjPoint::new(f, cross(f, &self.0, &other.0)).map_err(|_| Error::InvalidArgument("lines coincide".into()))
    }
}

fn parse_triple(coords: &[String], f: &Gf) -> Result<[Elem; 3]> {
    if coords.len() != 3 {
        return Err(Error::InvalidArgument(format!("expected 3 coordinates, got {}", coords.len())));
    }
    Ok([f.parse_elem(&coords[0])?, f.parse_elem(&coords[1])?, f.parse_elem(&coords[2])?])
}

pub fn dot(f: &Gf, a: &[Elem; 3], b: &[Elem; 3]) -> Elem {
    f.sum((0..3).map(|i| f.mul(a[i], b[i])))
}

pub fn cross(f: &Gf, a: &[Elem; 3], b: &[Elem; 3]) -> [Elem; 3] {
    let m = |x: Elem, y: Elem| f.mul(x, y);
    [
        f.sub(m(a[1], b[2]), m(a[2], b[1])),
        f.sub(m(a[2], b[0]), m(a[0], b[2])),
        f.sub(m(a[0], b[1]), m(a[1], b[0])),
    ]
}

/// True iff the three points lie on a common line (determinant zero).
pub fn collinear(f: &Gf, p1: &ProjPoint, p2: &ProjPoint, p3: &ProjPoint) -> bool {
    linalg::det3(f, &[p1.0, p2.0, p3.0]).is_zero()
}

/// All points of `PG(2, f)` in canonical order.
pub fn all_points(f: &Gf) -> Vec<ProjPoint> {
    let mut pts = Vec::new();
    for y in f.elements() {
        for z in f.elements() {
            pts.push(ProjPoint([Elem::ONE, y, z]));
        }
    }
    for z in f.elements() {
        pts.push(ProjPoint([Elem::ZERO, Elem::ONE, z]));
    }
    pts.push(ProjPoint([Elem::ZERO, Elem::ZERO, Elem::ONE]));
    pts
}

/// The `q+1` points of a line.
pub fn points_on_line(f: &Gf, l: &ProjLine) -> Vec<ProjPoint> {
    let units = [[Elem::ONE, Elem::ZERO, Elem::ZERO], [Elem::ZERO, Elem::ONE, Elem::ZERO], [Elem::ZERO, Elem::ZERO, Elem::ONE]];
    let mut span: Vec<[Elem; 3]> = Vec::new();
    for e in &units {
        let v = cross(f, &l.0, e);
        if v.iter().all(|x| x.is_zero()) {
            continue;
        }
        if span.first().is_none_or(|a| cross(f, a, &v).iter().any(|x| !x.is_zero())) {
            span.push(v);
        }
        if span.len() == 2 {
            break;
        }
    }
    let (a, b) = (span[0], span[1]);
    let mut pts: Vec<ProjPoint> = f
        .elements()
        .map(|s| ProjPoint::new(f, [0, 1, 2].map(|i| f.add(a[i], f.mul(s, b[i])))).unwrap())
        .collect();
    pts.push(ProjPoint::new(f, b).unwrap());
    pts
}

/// A (semi)linear collineation `v -> v^(p^twist) M`, identified up to a
/// nonzero scalar on `M`.
#[derive(Clone, Debug)]
pub struct Collineation {
    field: Gf,
    matrix: Mat3,
    twist: u32,
}

impl Collineation {
    pub fn new(field: &Gf, matrix: Mat3, twist: u32) -> Result<Collineation> {
        if linalg::det3(field, &matrix).is_zero() {
            return Err(Error::NotInvertible("collineation matrix".into()));
        }
        Ok(Collineation {
            field: field.clone(),
            matrix,
            twist: twist % field.degree(),
        })
    }

    pub fn linear(field: &Gf, matrix: Mat3) -> Result<Collineation> {
        Collineation::new(field, matrix, 0)
    }

    pub fn identity(field: &Gf) -> Collineation {
        Collineation {
            field: field.clone(),
            matrix: linalg::identity3(),
            twist: 0,
        }
    }

    pub fn field(&self) -> &Gf {
        &self.field
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.matrix
    }

    /// Frobenius exponent: coordinates are raised to `p^twist`.
    pub fn twist(&self) -> u32 {
        self.twist
    }

    fn frob(&self, x: Elem, j: u32) -> Elem {
        self.field.frobenius_p(x, j % self.field.degree())
    }

    pub fn apply_vec(&self, v: &[Elem; 3]) -> [Elem; 3] {
        let w = v.map(|x| self.frob(x, self.twist));
        linalg::vec_mul3(&self.field, &w, &self.matrix)
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        ProjPoint::new(&self.field, self.apply_vec(&p.0)).expect("invertible map")
    }

    /// Image of a line: `u -> M^-1 u^(sigma)` as a column vector.
    pub fn apply_line(&self, l: &ProjLine) -> ProjLine {
        let inv = linalg::inverse3(&self.field, &self.matrix).expect("invertible");
        let u = l.0.map(|x| self.frob(x, self.twist));
        ProjLine::new(&self.field, linalg::mul_vec3(&self.field, &inv, &u)).expect("invertible map")
    }

    /// `self` after `inner`: `(M1,f1) o (M2,f2) = (M2^(f1) M1, f1+f2)`.
    pub fn compose(&self, inner: &Collineation) -> Collineation {
        assert_eq!(self.field, inner.field, "collineations over different fields");
        let m2 = linalg::map3(&inner.matrix, |x| self.frob(x, self.twist));
        Collineation {
            field: self.field.clone(),
            matrix: linalg::mul3(&self.field, &m2, &self.matrix),
            twist: (self.twist + inner.twist) % self.field.degree(),
        }
    }

    pub fn inverse(&self) -> Collineation {
        let d = self.field.degree();
        let back = (d - self.twist) % d;
        let inv = linalg::inverse3(&self.field, &self.matrix).expect("invertible");
        Collineation {
            field: self.field.clone(),
            matrix: linalg::map3(&inv, |x| self.frob(x, back)),
            twist: back,
        }
    }

    pub fn pow(&self, n: u64) -> Collineation {
        let mut acc = Collineation::identity(&self.field);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            n >>= 1;
        }
        acc
    }

    /// `self o inner o self^-1`.
    pub fn conjugate(&self, inner: &Collineation) -> Collineation {
        self.compose(inner).compose(&self.inverse())
    }

    /// Projective equality: same twist and proportional matrices.
    pub fn projectively_equal(&self, other: &Collineation) -> bool {
        self.field == other.field
            && self.twist == other.twist
            && linalg::proportional3(&self.field, &self.matrix, &other.matrix).is_some()
    }

    pub fn is_identity(&self) -> bool {
        self.projectively_equal(&Collineation::identity(&self.field))
    }

    /// Least `m >= 1` with `self^m` the identity, up to `cap`.
    pub fn projective_order(&self, cap: u64) -> Result<u64> {
        let mut g = self.clone();
        for m in 1..=cap {
            if g.is_identity() {
                return Ok(m);
            }
            g = g.compose(self);
        }
        Err(Error::OrderCapExceeded(cap))
    }

    /// The same linear map over a larger field.
    pub fn lift(&self, emb: &Embedding) -> Result<Collineation> {
        if self.twist != 0 {
            return Err(Error::InvalidArgument("only linear collineations can be lifted".into()));
        }
        if emb.small() != &self.field {
            return Err(Error::FieldMismatch(self.field.spec_string(), emb.small().spec_string()));
        }
        Collineation::linear(emb.big(), linalg::map3(&self.matrix, |x| emb.embed(x)))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..3).all(|i| (0..3).all(|j| i == j || self.matrix[i][j].is_zero()))
    }

    pub fn to_json(&self) -> CollineationJson {
        CollineationJson {
            field: self.field.spec_string(),
            matrix: self
                .matrix
                .iter()
                .map(|row| row.iter().map(|&x| self.field.format_elem(x)).collect())
                .collect(),
            twist: self.twist,
        }
    }

    pub fn from_json(j: &CollineationJson) -> Result<Collineation> {
        let f = Gf::parse(&j.field)?;
        if j.matrix.len() != 3 {
            return Err(Error::InvalidArgument("matrix must have 3 rows".into()));
        }
        let mut m = [[Elem::ZERO; 3]; 3];
        for (i, row) in j.matrix.iter().enumerate() {
            m[i] = parse_triple(row, &f)?;
        }
        Collineation::new(&f, m, j.twist)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollineationJson {
    pub field: String,
    pub matrix: Vec<Vec<String>>,
    /// Coordinates are raised to `p^twist` before the matrix acts.
    pub twist: u32,
}

/// The Singer cycle `C = [[0,1,0],[0,0,1],[c,b,a]]` over `GF(q)`.
pub fn singer_matrix(ctx: &TowerContext) -> Collineation {
    let [a, b, c] = ctx.abc();
    let (z, o) = (Elem::ZERO, Elem::ONE);
    Collineation::linear(ctx.base(), [[z, o, z], [z, z, o], [c, b, a]]).expect("c != 0 for an irreducible cubic")
}

/// Rows of `x^(q^j)` powers: row `r` is `(y0^r, y1^r, y2^r)`.
fn vandermonde(ctx: &TowerContext, ys: [Elem; 3]) -> Mat3 {
    let e = ctx.ext();
    let mut m = [[Elem::ZERO; 3]; 3];
    for (r, row) in m.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = e.pow(ys[j], r as u64);
        }
    }
    m
}

/// `E` with rows `(1,1,1)`, `(w, w^q, w^q^2)`, `(w^2, w^2q, w^2q^2)`; the
/// composite `E o C o E^-1` is `diag(w, w^q, w^q^2)`.
pub fn eigen_frame(ctx: &TowerContext) -> Collineation {
    let w = ctx.omega();
    let m = vandermonde(ctx, [w, ctx.frobenius(w, 1), ctx.frobenius(w, 2)]);
    Collineation::linear(ctx.ext(), m).expect("conjugates of omega are distinct")
}

/// `phi = [L]` with `L o C o L^-1 = diag(w^q, w^q^2, w)` and
/// `phi(1,0,0) = (1,1,1)`. On the point `x` of `GF(q^3)` it reads
/// `x -> (x^q, x^q^2, x)`.
pub fn phi_map(ctx: &TowerContext) -> Collineation {
    let w = ctx.omega();
    let m = vandermonde(ctx, [ctx.frobenius(w, 1), ctx.frobenius(w, 2), w]);
    Collineation::linear(ctx.ext(), m).expect("conjugates of omega are distinct")
}

/// The point `omega^i` in the basis `1, omega, omega^2`.
pub fn singer_point(ctx: &TowerContext, i: i64) -> ProjPoint {
    let n = (ctx.ext().order() - 1) as i64;
    let x = ctx.ext().pow(ctx.omega(), i.rem_euclid(n) as u64);
    ProjPoint::new(ctx.base(), ctx.singer_coords(x)).expect("nonzero element")
}

/// `Pi = {(a^i, a^(i(q+1)), 1)}` with `a = omega^(q-1)`, in index order.
pub fn subplane_pi(ctx: &TowerContext) -> Vec<ProjPoint> {
    let e = ctx.ext();
    let q = ctx.q();
    let a = e.pow(ctx.omega(), q - 1);
    let aq1 = e.pow(a, q + 1);
    let mut pts = Vec::with_capacity(ctx.plane_size() as usize);
    let (mut x, mut y) = (Elem::ONE, Elem::ONE);
    for _ in 0..ctx.plane_size() {
        pts.push(ProjPoint::new(e, [x, y, Elem::ONE]).unwrap());
        x = e.mul(x, a);
        y = e.mul(y, aq1);
    }
    pts
}

/// Embeds a point of `PG(2,q)` into `PG(2,q^3)`.
pub fn embed_point(ctx: &TowerContext, p: &ProjPoint) -> ProjPoint {
    ProjPoint(p.0.map(|x| ctx.embed(x)))
}

/// The collineations used in the canonical frame, all over `GF(q^3)`
/// except `tau` which is linear over `GF(q)`.
#[derive(Clone, Debug)]
pub struct StandardCollineations {
    /// `D = diag(w, w^q, w^q^2)`, the Singer cycle in the eigen frame.
    pub sigma_diag: Collineation,
    /// `(X0,X1,X2) -> (X2,X0,X1)`.
    pub t_cycle: Collineation,
    /// `diag(a, a^(q+1), 1)`, `a = w^(q-1)`.
    pub alpha: Collineation,
    /// `diag(b, b^(q+1), 1)`, `b = a^((q^2+q+1)/k)`.
    pub beta: Collineation,
    /// Coordinatewise `x -> x^q`.
    pub delta: Collineation,
    /// `w^i -> w^(qi)` on `PG(2,q)`.
    pub tau: Collineation,
    /// `x1' = x3, x2' = x1, x3' = x2`.
    pub mu: Collineation,
    pub k: u64,
    pub t: u64,
}

pub fn standard_collineations(ctx: &TowerContext, k: u64, t: u64) -> Result<StandardCollineations> {
    let n = ctx.plane_size();
    if k == 0 || !n.is_multiple_of(k) {
        return Err(Error::NotDivisor(k, n));
    }
    let e = ctx.ext();
    let q = ctx.q();
    let w = ctx.omega();
    let (z, o) = (Elem::ZERO, Elem::ONE);
    let cyc = [[z, o, z], [z, z, o], [o, z, z]];
    let a = e.pow(w, q - 1);
    let b = e.pow(a, n / k);
    let diag_pow = |x: Elem| Collineation::linear(e, linalg::diag3([x, e.pow(x, q + 1), o])).unwrap();
    let mut tau = [[z; 3]; 3];
    for (j, row) in tau.iter_mut().enumerate() {
        *row = ctx.singer_coords(ctx.frobenius(e.pow(w, j as u64), 1));
    }
    Ok(StandardCollineations {
        sigma_diag: Collineation::linear(e, linalg::diag3([w, ctx.frobenius(w, 1), ctx.frobenius(w, 2)]))?,
        t_cycle: Collineation::linear(e, cyc)?,
        alpha: diag_pow(a),
        beta: diag_pow(b),
        delta: Collineation::new(e, linalg::identity3(), ctx.base().degree())?,
        tau: Collineation::linear(ctx.base(), tau)?,
        mu: Collineation::linear(e, cyc)?,
        k,
        t,
    })
}

/// `eta(u) = diag(u, u^(t-1), 1)` for `u^(t^2-3t+3) = 1`.
pub fn eta(field: &Gf, u: Elem, t: u64) -> Result<Collineation> {
    let n = t * t - 3 * t + 3;
    if u.is_zero() || field.pow(u, n) != Elem::ONE {
        return Err(Error::InvalidArgument(format!("u is not a {n}-th root of unity")));
    }
    Collineation::linear(field, linalg::diag3([u, field.pow(u, t - 1), Elem::ONE]))
}
