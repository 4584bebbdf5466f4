//! Local analysis at the fundamental triangle: Newton polygons, rational
//! Newton-Puiseux expansions, curve type and tangent intersection data.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::curvefam::CanonicalCurve;
use crate::error::{Error, Result};
use crate::fields::{self, Elem, Embedding, Gf, UniPoly};
use crate::poly::SparsePoly;
use crate::series::{eval_bivariate, Series, EXACT};

/// Vertices of the fundamental triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Vertex {
    A1,
    A2,
    A3,
}

impl Vertex {
    pub const ALL: [Vertex; 3] = [Vertex::A1, Vertex::A2, Vertex::A3];

    pub fn name(self) -> &'static str {
        match self {
            Vertex::A1 => "A1",
            Vertex::A2 => "A2",
            Vertex::A3 => "A3",
        }
    }

    pub fn parse(s: &str) -> Result<Vertex> {
        match s {
            "A1" => Ok(Vertex::A1),
            "A2" => Ok(Vertex::A2),
            "A3" => Ok(Vertex::A3),
            _ => Err(Error::InvalidArgument(format!("unknown vertex {s}"))),
        }
    }

    /// Homogeneous coordinates of `(x1, x2, x3)` in terms of the local chart
    /// coordinates `(x, y)`. The chart puts the vertex at the origin and the
    /// tangent line at `y = 0`: `A3: (x, y, 1)`, `A1: (1, x, y)`,
    /// `A2: (y, 1, x)`.
    fn slots(self) -> [Slot; 3] {
        match self {
            Vertex::A3 => [Slot::X, Slot::Y, Slot::One],
            Vertex::A1 => [Slot::One, Slot::X, Slot::Y],
            Vertex::A2 => [Slot::Y, Slot::One, Slot::X],
        }
    }

    /// The chart polynomial of a homogeneous form.
    pub fn chart(self, hom: &SparsePoly, f: &Gf) -> SparsePoly {
        let images: Vec<SparsePoly> = self
            .slots()
            .iter()
            .map(|s| match s {
                Slot::X => SparsePoly::var(2, 0),
                Slot::Y => SparsePoly::var(2, 1),
                Slot::One => SparsePoly::constant(2, Elem::ONE),
            })
            .collect();
        hom.substitute(&images, f)
    }

    /// Homogeneous coordinates of a chart point given as series.
    pub fn lift(self, x: &Series, y: &Series) -> [Series; 3] {
        self.slots().map(|s| match s {
            Slot::X => x.clone(),
            Slot::Y => y.clone(),
            Slot::One => Series::constant(Elem::ONE),
        })
    }
}

#[derive(Clone, Copy)]
enum Slot {
    X,
    Y,
    One,
}

/// One edge of the Newton polygon relevant to branches through the origin,
/// on the line `q i + m j = l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonEdge {
    pub start: (u32, u32),
    pub end: (u32, u32),
    pub m: u32,
    pub q: u32,
    pub l: u64,
    /// `sum a(i0 - m s, j0 + q s) T^s`, from the endpoint `(i0, j0)` of
    /// largest `i`.
    pub face: UniPoly,
}

impl NewtonEdge {
    /// `y ~ x^(m/q)` along the edge.
    pub fn slope(&self) -> (u32, u32) {
        (self.m, self.q)
    }
}

/// Lower-left hull edges from the point of least `i` to the point of least
/// `j`.
pub fn newton_polygon(g: &SparsePoly) -> Vec<NewtonEdge> {
    let pts: Vec<(u32, u32)> = g.terms().keys().map(|e| (e[0], e[1])).collect();
    if pts.is_empty() {
        return Vec::new();
    }
    let i_min = pts.iter().map(|p| p.0).min().unwrap();
    let start = pts.iter().filter(|p| p.0 == i_min).min_by_key(|p| p.1).copied().unwrap();
    let j_min = pts.iter().map(|p| p.1).min().unwrap();
    let mut edges = Vec::new();
    let mut cur = start;
    while cur.1 > j_min {
        // smallest slope (di / dj), ties to the farthest point
        let mut best: Option<(u32, u32)> = None;
        for &p in &pts {
            if p.1 >= cur.1 || p.0 < cur.0 {
                continue;
            }
            best = match best {
                None => Some(p),
                Some(b) => {
                    let lhs = u64::from(p.0 - cur.0) * u64::from(cur.1 - b.1);
                    let rhs = u64::from(b.0 - cur.0) * u64::from(cur.1 - p.1);
                    if lhs < rhs || (lhs == rhs && p.1 < b.1) {
                        Some(p)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        let Some(next) = best else { break };
        let di = next.0 - cur.0;
        let dj = cur.1 - next.1;
        let gd = arith::gcd(u64::from(di), u64::from(dj)) as u32;
        let (m, q) = (di / gd, dj / gd);
        let l = u64::from(q) * u64::from(next.0) + u64::from(m) * u64::from(next.1);
        let mut face = vec![Elem::ZERO; (dj / q) as usize + 1];
        for (e, &a) in g.terms() {
            if u64::from(q) * u64::from(e[0]) + u64::from(m) * u64::from(e[1]) == l {
                let s = ((e[1] - next.1) / q) as usize;
                face[s] = a;
            }
        }
        edges.push(NewtonEdge {
            start: cur,
            end: next,
            m,
            q,
            l,
            face: UniPoly::new(face),
        });
        cur = next;
    }
    edges
}

/// A branch `x = lambda tau^e`, `y = y(tau)` through the chart origin.
#[derive(Clone, Debug)]
pub struct PuiseuxBranch {
    pub field: Gf,
    pub vertex: Option<Vertex>,
    pub e: u32,
    pub lambda: Elem,
    pub x: Series,
    pub y: Series,
    /// `y` is known modulo `tau^n`.
    pub n: usize,
}

impl PuiseuxBranch {
    /// Intersection multiplicity with the line `y = 0`.
    pub fn tangent_multiplicity(&self) -> Option<usize> {
        self.y.valuation()
    }

    /// Order at which `g(x(tau), y(tau))` is known to vanish.
    pub fn residual_order(&self, g: &SparsePoly, base: Option<&Embedding>) -> Result<usize> {
        let g = match base {
            Some(emb) => g.map_coeffs(|a| emb.embed(a)),
            None => g.clone(),
        };
        let r = eval_bivariate(&g, &self.x, &self.y, &self.field);
        if let Some(v) = r.valuation() {
            return Err(Error::Inconsistent(format!("branch residual has a nonzero term at order {v}")));
        }
        Ok(r.prec)
    }

    pub fn to_json(&self) -> BranchJson {
        let f = &self.field;
        BranchJson {
            vertex: self.vertex.map(|v| v.name().to_string()),
            field: f.spec_string(),
            e: self.e,
            lambda: f.format_elem(self.lambda),
            series: self.y.terms().into_iter().filter(|&(i, _)| i < self.n).map(|(i, c)| (i, f.format_elem(c))).collect(),
            n: self.n,
        }
    }

    pub fn from_json(j: &BranchJson) -> Result<PuiseuxBranch> {
        let f = Gf::parse(&j.field)?;
        let lambda = f.parse_elem(&j.lambda)?;
        let mut y = vec![Elem::ZERO; j.series.iter().map(|s| s.0 + 1).max().unwrap_or(0)];
        for (i, c) in &j.series {
            y[*i] = f.parse_elem(c)?;
        }
        Ok(PuiseuxBranch {
            vertex: j.vertex.as_deref().map(Vertex::parse).transpose()?,
            e: j.e,
            lambda,
            x: Series::monomial(lambda, j.e as usize),
            y: Series::new(y, j.n),
            n: j.n,
            field: f,
        })
    }
}

/// Branch record: `x = lambda tau^e`, `y = sum coef tau^exp`, known modulo
/// `tau^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchJson {
    pub vertex: Option<String>,
    pub field: String,
    pub e: u32,
    pub lambda: String,
    pub series: Vec<(usize, String)>,
    #[serde(rename = "N")]
    pub n: usize,
}

/// Accumulated change of variables `X = lambda T^e`,
/// `Y = P(T) + mu T^kappa Ycur`.
#[derive(Clone)]
struct Frame {
    field: Gf,
    lambda: Elem,
    e: u32,
    p: UniPoly,
    mu: Elem,
    kappa: usize,
}

impl Frame {
    fn map(&self, emb: &Embedding) -> Frame {
        Frame {
            field: emb.big().clone(),
            lambda: emb.embed(self.lambda),
            e: self.e,
            p: emb.embed_poly(&self.p),
            mu: emb.embed(self.mu),
            kappa: self.kappa,
        }
    }
}

const MAX_DEPTH: usize = 64;

/// All branches of `g` through the origin that are not contained in the
/// line `x = 0`, with `y` known modulo `tau^n`.
pub fn puiseux_branches(g: &SparsePoly, f: &Gf, n: usize) -> Result<Vec<PuiseuxBranch>> {
    if f.characteristic() == 2 {
        return Err(Error::UnsupportedCharacteristic(2));
    }
    if n == 0 {
        return Err(Error::TruncationInsufficient(0));
    }
    let frame = Frame {
        field: f.clone(),
        lambda: Elem::ONE,
        e: 1,
        p: UniPoly::zero(),
        mu: Elem::ONE,
        kappa: 0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_b7a0);
    let mut out = Vec::new();
    expand(g.clone(), frame, n, 0, &mut rng, &mut out)?;
    Ok(out)
}

fn expand(mut g: SparsePoly, fr: Frame, n: usize, depth: usize, rng: &mut ChaCha8Rng, out: &mut Vec<PuiseuxBranch>) -> Result<()> {
    let f = fr.field.clone();
    if depth > MAX_DEPTH {
        return Err(Error::NotSquareFree("branch expansion does not terminate".into()));
    }
    if g.is_zero() {
        return Err(Error::NotSquareFree("zero polynomial".into()));
    }
    let j_min = g.terms().keys().map(|e| e[1]).min().unwrap();
    if j_min > 1 {
        return Err(Error::NotSquareFree("repeated component y = 0 in a chart".into()));
    }
    if j_min == 1 {
        // Ycur = 0 is a component: the branch is a polynomial
        out.push(finish(&fr, Series::zero(EXACT), n));
        g = SparsePoly::from_terms(2, g.terms().iter().map(|(e, &a)| (vec![e[0], e[1] - 1], a)), &f);
    }
    if !g.coeff(&[0, 0]).is_zero() {
        return Ok(());
    }
    if g.terms().keys().all(|e| e[0] > 0) {
        return Err(Error::Inconsistent("the line x = 0 is a component".into()));
    }
    let p = f.characteristic();
    for edge in newton_polygon(&g) {
        if u64::from(edge.q) % p == 0 {
            return Err(Error::UnsupportedCharacteristic(p));
        }
        let (u, v) = bezout(edge.m, edge.q);
        let mut factors = edge.face.factor(&f, rng);
        factors.sort_by(|a, b| (a.0.coeffs.len(), &a.0.coeffs).cmp(&(b.0.coeffs.len(), &b.0.coeffs)));
        for (psi, r) in factors {
            let d = psi.deg() as u32;
            let (fd, emb) = if d == 1 { (f.clone(), None) } else {
                let (big, e) = fields::extend(&f, d)?;
                (big, Some(e))
            };
            let (gd, frd, psid) = match &emb {
                Some(e) => (g.map_coeffs(|a| e.embed(a)), fr.map(e), e.embed_poly(&psi)),
                None => (g.clone(), fr.clone(), psi.clone()),
            };
            for xi in psid.roots(&fd, rng) {
                let (g1, fr1) = transform(&gd, &frd, &edge, xi, u, v);
                if r == 1 {
                    let y1 = implicit_root(&g1, &fd, n.saturating_sub(fr1.kappa).max(1) + 1)?;
                    out.push(finish(&fr1, y1, n));
                } else {
                    expand(g1, fr1, n, depth + 1, rng, out)?;
                }
            }
        }
    }
    Ok(())
}

/// `u q - v m = 1` with `u, v >= 0`.
fn bezout(m: u32, q: u32) -> (u64, u64) {
    let (m, q) = (u64::from(m), u64::from(q));
    let u = (1..=m).find(|&u| (u * q) % m == 1 % m).unwrap();
    (u, (u * q - 1) / m)
}

/// `g(xi^v x1^q, x1^m (xi^u + y1)) / x1^l` and the updated frame.
fn transform(g: &SparsePoly, fr: &Frame, edge: &NewtonEdge, xi: Elem, u: u64, v: u64) -> (SparsePoly, Frame) {
    let f = &fr.field;
    let (m, q) = (u64::from(edge.m), u64::from(edge.q));
    let xu = f.pow(xi, u);
    let xv = f.pow(xi, v);
    let base = UniPoly::new(vec![xu, Elem::ONE]);
    let dy = g.degree_in(1).unwrap_or(0) as usize;
    let mut pows = vec![UniPoly::one()];
    for _ in 0..dy {
        let next = pows.last().unwrap().mul(&base, f);
        pows.push(next);
    }
    let mut g1 = SparsePoly::zero(2);
    for (e, &a) in g.terms() {
        let (i, j) = (u64::from(e[0]), u64::from(e[1]));
        let xe = (q * i + m * j - edge.l) as u32;
        let coef = f.mul(a, f.pow(xv, i));
        for (k, &b) in pows[j as usize].coeffs.iter().enumerate() {
            if !b.is_zero() {
                g1.add_term(vec![xe, k as u32], f.mul(coef, b), f);
            }
        }
    }
    let kappa = fr.kappa as u64;
    let mu_xv = f.mul(fr.mu, f.pow(xv, kappa));
    let p_sub = Series::substitute_monomial(&fr.p, xv, q as usize, f);
    let head = UniPoly::monomial(f.mul(mu_xv, xu), (q * kappa + m) as usize);
    let p_new = UniPoly::new(p_sub.coeffs).add(&head, f);
    let fr1 = Frame {
        field: f.clone(),
        lambda: f.mul(fr.lambda, f.pow(xv, u64::from(fr.e))),
        e: fr.e * edge.q,
        p: p_new,
        mu: mu_xv,
        kappa: (q * kappa + m) as usize,
    };
    (g1, fr1)
}

/// The unique `y1 = sum_{k>=1} b_k x1^k` with `g(x1, y1) = 0`, modulo
/// `x1^prec`, given `g(0,0) = 0` and `g_y(0,0) != 0`.
fn implicit_root(g: &SparsePoly, f: &Gf, prec: usize) -> Result<Series> {
    let d = g.coeff(&[0, 1]);
    let dinv = f.inv(d).map_err(|_| Error::Inconsistent("implicit root at a singular point".into()))?;
    let x = Series::monomial(Elem::ONE, 1);
    let mut y = vec![Elem::ZERO; prec];
    for k in 1..prec {
        let ys = Series::new(y[..k].to_vec(), k + 1);
        let r = eval_bivariate(g, &x, &ys, f);
        let c = r.coeff(k);
        y[k] = f.neg(f.mul(c, dinv));
    }
    Ok(Series::new(y, prec))
}

fn finish(fr: &Frame, y1: Series, n: usize) -> PuiseuxBranch {
    let f = &fr.field;
    let x = Series::monomial(fr.lambda, fr.e as usize);
    let tail = y1.scale(fr.mu, f).shift_up(fr.kappa);
    let y = Series::exact(&fr.p).add(&tail, f);
    PuiseuxBranch {
        field: f.clone(),
        vertex: None,
        e: fr.e,
        lambda: fr.lambda,
        x,
        y,
        n,
    }
}

/// Branches of the canonical curve at a vertex.
pub fn vertex_branches(cc: &CanonicalCurve, v: Vertex, n: usize) -> Result<Vec<PuiseuxBranch>> {
    let g = v.chart(&cc.homogeneous(), &cc.field);
    let mut bs = puiseux_branches(&g, &cc.field, n)?;
    for b in &mut bs {
        b.vertex = Some(v);
    }
    Ok(bs)
}

/// Default truncation, `2(t^2-3t+3) + 4`.
pub fn default_truncation(cc: &CanonicalCurve) -> usize {
    2 * cc.big_n() as usize + 4
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveType {
    First,
    Second,
}

/// `c^2 e2^2 - 4 e1^2`, the discriminant of the vertex face polynomial
/// `a^2 + c e2 a + e1^2`.
pub fn face_discriminant(cc: &CanonicalCurve) -> Elem {
    let f = &cc.field;
    let ce = f.mul(cc.c, cc.eps2);
    f.sub(f.mul(ce, ce), f.mul(f.from_u64(4), f.mul(cc.eps1, cc.eps1)))
}

/// First type iff the face polynomial has distinct roots; confirmed
/// against the branch structure at all three vertices.
pub fn classify_type(cc: &CanonicalCurve) -> Result<CurveType> {
    if cc.field.characteristic() == 2 {
        return Err(Error::UnsupportedCharacteristic(2));
    }
    let by_face = if face_discriminant(cc).is_zero() { CurveType::Second } else { CurveType::First };
    for v in Vertex::ALL {
        let bs = vertex_branches(cc, v, 2 * cc.t as usize + 2)?;
        let es: Vec<u32> = bs.iter().map(|b| b.e).collect();
        let by_branch = match es.as_slice() {
            [1, 1] => CurveType::First,
            [2] => CurveType::Second,
            _ => {
                return Err(Error::Disagreement(format!(
                    "vertex {} has branch ramification indices {es:?}",
                    v.name()
                )))
            }
        };
        if by_branch != by_face {
            return Err(Error::Disagreement(format!(
                "face polynomial says {by_face:?}, branches at {} say {by_branch:?}",
                v.name()
            )));
        }
    }
    Ok(by_face)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexReport {
    pub vertex: Vertex,
    pub ramification: Vec<u32>,
    pub tangent_multiplicities: Vec<usize>,
    pub total: usize,
    pub expected_total: usize,
    pub ok: bool,
}

/// Intersection multiplicity of the vertex tangent with each branch.
pub fn vertex_intersection_data(cc: &CanonicalCurve) -> Result<Vec<VertexReport>> {
    let ty = classify_type(cc)?;
    let n = cc.n() as usize;
    let mut out = Vec::new();
    for v in Vertex::ALL {
        let bs = vertex_branches(cc, v, n + 2)?;
        let mults = bs
            .iter()
            .map(|b| b.tangent_multiplicity().ok_or(Error::TruncationInsufficient(n + 2)))
            .collect::<Result<Vec<_>>>()?;
        let total: usize = mults.iter().sum();
        let per_branch_ok = match ty {
            CurveType::First => mults.iter().all(|&m| m == n / 2 - 1),
            CurveType::Second => mults.len() == 1,
        };
        let ok = total == n - 2 && per_branch_ok;
        let rep = VertexReport {
            vertex: v,
            ramification: bs.iter().map(|b| b.e).collect(),
            tangent_multiplicities: mults,
            total,
            expected_total: n - 2,
            ok,
        };
        if !ok {
            return Err(Error::Inconsistent(format!("tangent data at {}: {rep:?}", v.name())));
        }
        out.push(rep);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(f: &Gf, terms: &[((u32, u32), i64)]) -> SparsePoly {
        SparsePoly::from_terms(2, terms.iter().map(|&((i, j), c)| (vec![i, j], f.from_i64(c))), f)
    }

    #[test]
    fn polygons() {
        let f = Gf::prime(7).unwrap();
        let cusp = sp(&f, &[((0, 2), 1), ((3, 0), -1)]);
        let e = newton_polygon(&cusp);
        assert_eq!(e.len(), 1);
        assert_eq!((e[0].start, e[0].end, e[0].m, e[0].q), ((0, 2), (3, 0), 3, 2));
        let smooth = sp(&f, &[((0, 1), 1), ((2, 0), -1), ((1, 1), 1)]);
        let e = newton_polygon(&smooth);
        assert_eq!((e[0].start, e[0].end), ((0, 1), (2, 0)));
        let cc = CanonicalCurve::simple(7, 4, 3).unwrap();
        let e = newton_polygon(&cc.equation());
        assert_eq!(e.len(), 1);
        assert_eq!((e[0].start, e[0].end, e[0].m, e[0].q), ((0, 2), (6, 0), 3, 1));
        // a^2 + c a + 1, constant term first
        assert_eq!(e[0].face.coeffs, vec![Elem(1), Elem(3), Elem(1)]);
    }

    #[test]
    fn node_and_cusp_branches() {
        let f = Gf::prime(7).unwrap();
        let cusp = sp(&f, &[((0, 2), 1), ((3, 0), -1)]);
        let bs = puiseux_branches(&cusp, &f, 10).unwrap();
        assert_eq!(bs.len(), 1);
        assert_eq!(bs[0].e, 2);
        assert_eq!(bs[0].y.valuation(), Some(3));
        assert!(bs[0].residual_order(&cusp, None).unwrap() >= 10);

        let node = sp(&f, &[((0, 2), 1), ((2, 0), -1), ((3, 0), -1)]);
        let bs = puiseux_branches(&node, &f, 12).unwrap();
        assert_eq!(bs.len(), 2);
        let leads: Vec<Elem> = bs.iter().map(|b| b.y.coeff(1)).collect();
        assert!(leads.contains(&Elem(1)) && leads.contains(&Elem(6)));
        for b in &bs {
            assert_eq!(b.e, 1);
            assert!(b.residual_order(&node, None).unwrap() >= 12);
        }
    }

    #[test]
    fn canonical_t3_first_type() {
        let cc = CanonicalCurve::simple(7, 3, 3).unwrap();
        assert_eq!(classify_type(&cc).unwrap(), CurveType::First);
        let n = default_truncation(&cc);
        let bs = vertex_branches(&cc, Vertex::A3, n).unwrap();
        assert_eq!(bs.len(), 2);
        let g = cc.equation();
        for b in &bs {
            assert_eq!(b.y.valuation(), Some(2));
            // the leading coefficient is a root of a^2 + 3a + 1
            let a = b.y.coeff(2);
            let fd = &b.field;
            let val = fd.add(fd.add(fd.mul(a, a), fd.mul(fd.from_u64(3), a)), Elem::ONE);
            assert!(val.is_zero());
            let emb = Embedding::new(&cc.field, fd).unwrap();
            assert!(b.residual_order(&g, Some(&emb)).unwrap() >= n);
        }
    }

    #[test]
    fn canonical_second_type_and_tangent_data() {
        let cc = CanonicalCurve::simple(7, 5, 5).unwrap();
        assert_eq!(classify_type(&cc).unwrap(), CurveType::Second);
        let data = vertex_intersection_data(&cc).unwrap();
        assert!(data.iter().all(|r| r.total == 8 && r.ramification == vec![2]));
        let first = CanonicalCurve::simple(7, 5, 3).unwrap();
        let data = vertex_intersection_data(&first).unwrap();
        assert!(data.iter().all(|r| r.tangent_multiplicities == vec![4, 4]));
    }

    #[test]
    fn branch_json_round_trip() {
        let f = Gf::prime(5).unwrap();
        let node = sp(&f, &[((0, 2), 1), ((2, 0), -1), ((3, 0), -1)]);
        let b = &puiseux_branches(&node, &f, 6).unwrap()[0];
        let j = b.to_json();
        let back = PuiseuxBranch::from_json(&j).unwrap();
        assert_eq!(back.to_json(), j);
    }

    #[test]
    fn even_characteristic_rejected() {
        let f = Gf::prime(2).unwrap();
        let cusp = sp(&f, &[((0, 2), 1), ((3, 0), 1)]);
        assert!(matches!(puiseux_branches(&cusp, &f, 5), Err(Error::UnsupportedCharacteristic(2))));
    }
}
