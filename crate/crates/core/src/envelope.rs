//! The Segre envelope of an arc (q odd): a degree-`2t` curve in the dual
//! plane through every tangent, each counted twice on the pencil of its
//! arc point.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arcs::{self, ArcRecord, LineClassification};
use crate::error::{Error, Result};
use crate::fields::{self, Elem, Gf, TowerContext};
use crate::linalg::{self, Matrix};
use crate::plane::{self, Collineation, ProjLine};
use crate::poly::{SparsePoly, TermJson};

/// Result of the interpolation: a nullspace basis of envelope forms.
#[derive(Clone, Debug)]
pub struct EnvelopeSolution {
    pub field: Gf,
    pub degree: u32,
    /// Basis of solutions; the first element is the envelope when unique.
    pub basis: Vec<SparsePoly>,
    pub conditions: usize,
    pub unknowns: usize,
    pub rank: usize,
    pub unique: bool,
}

impl EnvelopeSolution {
    pub fn envelope(&self) -> &SparsePoly {
        &self.basis[0]
    }
}

/// Monomials of degree `d` in three variables, in a fixed order.
pub fn monomials3(d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for i in (0..=d).rev() {
        for j in (0..=d - i).rev() {
            out.push(vec![i, j, d - i - j]);
        }
    }
    out
}

fn monomial_value(f: &Gf, exp: &[u32], v: &[Elem; 3]) -> Elem {
    exp.iter()
        .zip(v)
        .fold(Elem::ONE, |acc, (&k, &x)| f.mul(acc, f.pow(x, u64::from(k))))
}

/// Derivative of the monomial at `v` in direction `m`.
fn monomial_directional(f: &Gf, exp: &[u32], v: &[Elem; 3], m: &[Elem; 3]) -> Elem {
    let mut s = Elem::ZERO;
    for i in 0..3 {
        if exp[i] == 0 || m[i].is_zero() {
            continue;
        }
        let mut e = exp.to_vec();
        e[i] -= 1;
        let term = f.mul(f.mul(f.from_u64(u64::from(exp[i])), m[i]), monomial_value(f, &e, v));
        s = f.add(s, term);
    }
    s
}

/// Solves for the envelope of a verified arc with `q` odd.
///
/// Per arc point `P` and tangent `l` at `P` there are two conditions:
/// `F(l) = 0` and the derivative of `F` at `l` along the pencil of `P`
/// vanishes.
pub fn interpolate_envelope(arc: &ArcRecord) -> Result<EnvelopeSolution> {
    let f = &arc.field;
    if f.characteristic() == 2 {
        return Err(Error::UnsupportedCharacteristic(2));
    }
    let cls = arcs::classify_lines(arc)?;
    let t = arc.t();
    if t < 1 {
        return Err(Error::InvalidArgument(format!("t = {t} leaves no tangents")));
    }
    let d = 2 * t as u32;
    let monos = monomials3(d);
    let mut rows = Vec::new();
    for pl in &cls.per_point {
        let pencil = arcs::pencil(f, &pl.point);
        for l in &pl.tangents {
            let m = pencil.iter().find(|x| *x != l).expect("pencil has q+1 >= 3 lines");
            rows.push(monos.iter().map(|e| monomial_value(f, e, &l.0)).collect::<Vec<_>>());
            rows.push(monos.iter().map(|e| monomial_directional(f, e, &l.0, &m.0)).collect());
        }
    }
    let conditions = rows.len();
    let mat = Matrix::from_rows(rows);
    let rank = mat.rank(f);
    let null = mat.nullspace(f);
    if null.is_empty() {
        return Err(Error::EmptyNullspace);
    }
    let basis: Vec<SparsePoly> = null
        .iter()
        .map(|v| SparsePoly::from_terms(3, monos.iter().cloned().zip(v.iter().copied()), f))
        .map(|p| normalize_leading(&p, f))
        .collect();
    Ok(EnvelopeSolution {
        field: f.clone(),
        degree: d,
        unique: basis.len() == 1,
        basis,
        conditions,
        unknowns: monos.len(),
        rank,
    })
}

/// Scales so the largest monomial (in `BTreeMap` order) has coefficient 1.
fn normalize_leading(p: &SparsePoly, f: &Gf) -> SparsePoly {
    match p.terms().iter().next_back() {
        Some((_, &c)) => p.scale(f.inv(c).unwrap(), f),
        None => p.clone(),
    }
}

/// Per-item outcome of Segre's properties with failure witnesses.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegreReport {
    /// Homogeneous of degree `2t`.
    pub degree_ok: bool,
    /// Every tangent is a zero.
    pub tangents_on_curve: bool,
    /// Every tangent is at least a double point on its pencil.
    pub tangency_double: bool,
    /// No 2-secant is a zero.
    pub no_secant_on_curve: bool,
    /// Component multiplicities are at most 2 ...
    pub multiplicity_at_most_two: bool,
    /// ... and some component is simple.
    pub has_simple_component: bool,
    /// Largest multiplicity seen on generic lines.
    pub max_multiplicity: usize,
    pub tangent_count: usize,
    pub secant_count: usize,
    pub witnesses: Vec<String>,
}

impl SegreReport {
    pub fn all_ok(&self) -> bool {
        self.degree_ok
            && self.tangents_on_curve
            && self.tangency_double
            && self.no_secant_on_curve
            && self.multiplicity_at_most_two
            && self.has_simple_component
    }
}

/// Multiplicity of `s = 0` as a root of `F(l + s m)`.
fn pencil_multiplicity(f: &Gf, env: &SparsePoly, l: &ProjLine, m: &ProjLine) -> usize {
    let s = SparsePoly::var(1, 0);
    let images: Vec<SparsePoly> = (0..3)
        .map(|i| {
            SparsePoly::constant(1, l.0[i]).add(&s.scale(m.0[i], f), f)
        })
        .collect();
    let r = env.substitute(&images, f);
    r.terms().keys().map(|e| e[0] as usize).min().unwrap_or(usize::MAX)
}

pub fn verify_segre<R: Rng>(env: &SparsePoly, arc: &ArcRecord, rng: &mut R) -> Result<SegreReport> {
    let f = &arc.field;
    let cls: LineClassification = arcs::classify_lines(arc)?;
    let t = arc.t();
    let mut rep = SegreReport {
        degree_ok: env.is_homogeneous() && env.degree() == Some(2 * t as u32),
        tangent_count: cls.tangents.len(),
        secant_count: cls.secants.len(),
        ..SegreReport::default()
    };
    if !rep.degree_ok {
        rep.witnesses.push(format!("degree {:?}, expected {}", env.degree(), 2 * t));
    }
    rep.tangents_on_curve = true;
    rep.tangency_double = true;
    for pl in &cls.per_point {
        let pencil = arcs::pencil(f, &pl.point);
        for l in &pl.tangents {
            if !env.eval(&l.0, f).is_zero() {
                rep.tangents_on_curve = false;
                rep.witnesses.push(format!("tangent {:?} is not on the envelope", l.to_json(f)));
            }
            let m = pencil.iter().find(|x| *x != l).unwrap();
            let mult = pencil_multiplicity(f, env, l, m);
            if mult < 2 {
                rep.tangency_double = false;
                rep.witnesses.push(format!("tangent {:?} has multiplicity {mult} on its pencil", l.to_json(f)));
            }
        }
    }
    rep.no_secant_on_curve = true;
    for l in &cls.secants {
        if env.eval(&l.0, f).is_zero() {
            rep.no_secant_on_curve = false;
            rep.witnesses.push(format!("secant {:?} lies on the envelope", l.to_json(f)));
        }
    }
    let (max_mult, simple) = generic_multiplicities(env, f, rng)?;
    rep.max_multiplicity = max_mult;
    rep.multiplicity_at_most_two = max_mult <= 2;
    rep.has_simple_component = simple;
    if !rep.multiplicity_at_most_two {
        rep.witnesses.push(format!("a component has multiplicity {max_mult}"));
    }
    if !simple {
        rep.witnesses.push("no component of multiplicity 1".into());
    }
    Ok(rep)
}

/// Square-free decomposition of the restriction to random lines over an
/// extension: a generic line meets distinct components in distinct simple
/// points, so the restriction's multiplicities are the component
/// multiplicities. Returns the smallest maximum over a few lines and
/// whether that line shows a simple factor.
fn generic_multiplicities<R: Rng>(env: &SparsePoly, f: &Gf, rng: &mut R) -> Result<(usize, bool)> {
    let mut d = 1;
    while f.order().saturating_pow(d) < 1 << 16 {
        d += 1;
    }
    let (big, emb) = fields::extend(f, d)?;
    let g = env.map_coeffs(|c| emb.embed(c));
    let deg = env.degree().unwrap_or(0) as i64;
    let mut best: Option<(usize, bool)> = None;
    let mut tries = 0;
    while tries < 5 {
        let a: [Elem; 3] = [0; 3].map(|_| Elem(rng.gen_range(0..big.order())));
        let b: [Elem; 3] = [0; 3].map(|_| Elem(rng.gen_range(0..big.order())));
        let s = SparsePoly::var(1, 0);
        let images: Vec<SparsePoly> = (0..3)
            .map(|i| SparsePoly::constant(1, a[i]).add(&s.scale(b[i], &big), &big))
            .collect();
        let r = g.substitute(&images, &big).specialize(0, &[Elem::ZERO], &big);
        if r.deg() != deg {
            continue;
        }
        tries += 1;
        let sqf = r.squarefree_factorization(&big);
        let max = sqf.iter().map(|(_, e)| *e).max().unwrap_or(0);
        let simple = sqf.iter().any(|(p, e)| *e == 1 && p.deg() > 0);
        if best.is_none_or(|(m, _)| max < m) {
            best = Some((max, simple));
        }
    }
    Ok(best.unwrap())
}

/// The four checks of the canonical frame plus descent to `GF(q)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameReport {
    pub beta_invariant: bool,
    pub mu_invariant: bool,
    pub degree_ok: bool,
    pub no_fundamental_line: bool,
    /// Pulling back by `phi` recovers the input up to scalar.
    pub defined_over_fq: bool,
}

impl FrameReport {
    pub fn all_ok(&self) -> bool {
        self.beta_invariant && self.mu_invariant && self.degree_ok && self.no_fundamental_line && self.defined_over_fq
    }
}

/// Image of a dual-plane form under `phi`: lines transform by `L^-1`, so
/// the image is `H(u) = F(L u)`.
pub fn to_canonical_frame_unchecked(env: &SparsePoly, ctx: &TowerContext) -> SparsePoly {
    let e = ctx.ext();
    let phi = plane::phi_map(ctx);
    let lifted = env.map_coeffs(|c| ctx.embed(c));
    lifted.substitute_linear(&linalg::transpose3(phi.matrix()), e)
}

/// Invariance of `H` under the row substitution `v -> v M` up to scalar.
pub fn invariant_under(h: &SparsePoly, g: &Collineation) -> bool {
    let f = g.field();
    h.substitute_linear(g.matrix(), f).proportional(h, f).is_some()
}

pub fn frame_report(env: &SparsePoly, h: &SparsePoly, ctx: &TowerContext, k: u64) -> Result<FrameReport> {
    let e = ctx.ext();
    let s = plane::standard_collineations(ctx, k, 0)?;
    let phi = plane::phi_map(ctx);
    let back = h.substitute_linear(&linalg::transpose3(phi.inverse().matrix()), e);
    let lifted = env.map_coeffs(|c| ctx.embed(c));
    let expected_degree = env.degree();
    Ok(FrameReport {
        beta_invariant: invariant_under(h, &s.beta),
        mu_invariant: invariant_under(h, &s.mu),
        degree_ok: h.is_homogeneous() && h.degree() == expected_degree,
        no_fundamental_line: (0..3).all(|i| !h.divisible_by_var(i)),
        defined_over_fq: back.proportional(&lifted, e).is_some(),
    })
}

/// Maps the envelope to the canonical frame and re-verifies its
/// properties; any failure is an error naming the failed check.
pub fn to_canonical_frame(env: &SparsePoly, ctx: &TowerContext, k: u64) -> Result<(SparsePoly, FrameReport)> {
    let h = to_canonical_frame_unchecked(env, ctx);
    let rep = frame_report(env, &h, ctx, k)?;
    let failed: Vec<&str> = [
        (rep.beta_invariant, "beta invariance"),
        (rep.mu_invariant, "mu invariance"),
        (rep.degree_ok, "degree"),
        (rep.no_fundamental_line, "no fundamental line component"),
        (rep.defined_over_fq, "defined over GF(q)"),
    ]
    .iter()
    .filter(|(ok, _)| !ok)
    .map(|(_, name)| *name)
    .collect();
    if !failed.is_empty() {
        return Err(Error::PropertyFailed(failed.join(", ")));
    }
    Ok((h, rep))
}

/// `h` scaled to make its first term 1, with coefficients pulled back to
/// `GF(q)`; `None` when no scalar multiple is defined over `GF(q)`.
pub fn descend(h: &SparsePoly, ctx: &TowerContext) -> Option<SparsePoly> {
    let e = ctx.ext();
    let first = h.terms().keys().next()?.clone();
    let hn = h.monic_by(&first, e)?;
    let emb = ctx.embedding();
    let terms = hn
        .terms()
        .iter()
        .map(|(k, &c)| emb.preimage(c).map(|a| (k.clone(), a)))
        .collect::<Option<Vec<_>>>()?;
    Some(SparsePoly::from_terms(h.nvars(), terms, ctx.base()))
}

/// Outcome of matching against `y^2 + e1 x^2 y^(2t-2) + e1^2 x^(2t-2) +
/// c (x^t y^(t-1) + e2 x^(t-1) y + e2^2 x y^t)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyMatch {
    pub matched: bool,
    pub eps1: Option<String>,
    pub eps2: Option<String>,
    pub c: Option<String>,
    /// Terms present but not allowed, as `[i, j]` exponents of `x^i y^j`.
    pub extra_terms: Vec<Vec<u32>>,
    /// Family terms whose coefficient is inconsistent.
    pub mismatched_terms: Vec<Vec<u32>>,
}

/// The affine exponents of the canonical family for `t`.
pub fn family_exponents(t: u32) -> [[u32; 2]; 6] {
    [[0, 2], [2, 2 * t - 2], [2 * t - 2, 0], [t, t - 1], [t - 1, 1], [1, t]]
}

/// Matches an affine `g(x, y)` or a homogeneous form (dehomogenized at
/// `x3 = 1`) against the canonical family of parameter `t`.
pub fn match_canonical_family(curve: &SparsePoly, t: u32, f: &Gf) -> Result<FamilyMatch> {
    let g = if curve.nvars() == 3 { curve.dehomogenize(2, f) } else { curve.clone() };
    let g = g
        .monic_by(&[0, 2], f)
        .ok_or_else(|| Error::FamilyMismatch("no y^2 term to normalize".into()))?;
    let [_, e1x, e1sq, cx, e2x, e2sq] = family_exponents(t);
    let eps1 = g.coeff(&e1x);
    let c = g.coeff(&cx);
    let eps2 = if c.is_zero() { Elem::ONE } else { f.div(g.coeff(&e2x), c)? };
    let one = Elem::ONE;
    let mut mismatched = Vec::new();
    if g.coeff(&e1sq) != f.mul(eps1, eps1) {
        mismatched.push(e1sq.to_vec());
    }
    if g.coeff(&e2sq) != f.mul(c, f.mul(eps2, eps2)) {
        mismatched.push(e2sq.to_vec());
    }
    if f.pow(eps1, 3) != one {
        mismatched.push(e1x.to_vec());
    }
    if !c.is_zero() && f.pow(eps2, 3) != one {
        mismatched.push(e2x.to_vec());
    }
    let allowed = family_exponents(t);
    let extra: Vec<Vec<u32>> = g
        .terms()
        .keys()
        .filter(|e| !allowed.iter().any(|a| a[..] == e[..]))
        .cloned()
        .collect();
    let matched = extra.is_empty() && mismatched.is_empty();
    Ok(FamilyMatch {
        matched,
        eps1: Some(f.format_elem(eps1)),
        eps2: Some(f.format_elem(eps2)),
        c: Some(f.format_elem(c)),
        extra_terms: extra,
        mismatched_terms: mismatched,
    })
}

/// Serialized envelope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvelopeJson {
    pub field: String,
    pub degree: u32,
    pub terms: Vec<TermJson>,
    /// `"dual"` or `"canonical"`.
    pub frame: String,
    pub uniqueness: bool,
}

impl EnvelopeJson {
    pub fn new(poly: &SparsePoly, f: &Gf, frame: &str, uniqueness: bool) -> EnvelopeJson {
        EnvelopeJson {
            field: f.spec_string(),
            degree: poly.degree().unwrap_or(0),
            terms: poly.to_json(f),
            frame: frame.into(),
            uniqueness,
        }
    }

    pub fn decode(&self) -> Result<(Gf, SparsePoly)> {
        let f = Gf::parse(&self.field)?;
        let p = SparsePoly::from_json(3, &self.terms, &f)?;
        Ok((f, p))
    }
}
