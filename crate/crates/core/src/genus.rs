//! Genus of canonical curves three ways: Riemann-Hurwitz through the map
//! `(x, y) -> (y/x^(t-1), y^(t-1)/x^(t-2))` onto a conic, the delta
//! invariants of the singular points, and the closed form.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::branches::{self, CurveType, PuiseuxBranch, Vertex};
use crate::curvefam::CanonicalCurve;
use crate::error::{Error, Result};
use crate::fields::{self, Elem, Embedding, Gf, UniPoly};
use crate::linalg::{self, Mat3};
use crate::poly::SparsePoly;
use crate::series::Series;
use crate::singular::{self, SingularPointJson};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConicKind {
    Smooth,
    LinePair,
    DoubleLine,
}

/// The image conic `Q(x', y') = 0` of a canonical curve.
#[derive(Clone, Debug)]
pub struct ImageConic {
    /// Coefficients of `x'^2, y'^2, 1, y', x', x'y'`.
    pub coeffs: [Elem; 6],
    pub kind: ConicKind,
    /// `x^(2t-2) Q(y/x^(t-1), y^(t-1)/x^(t-2)) = g(x, y)` as polynomials.
    pub certificate: bool,
}

const CONIC_EXPONENTS: [(u32, u32); 6] = [(2, 0), (0, 2), (0, 0), (0, 1), (1, 0), (1, 1)];

impl ImageConic {
    /// Homogeneous `Q(X, Y, Z)` with `x' = X/Z`, `y' = Y/Z`.
    pub fn homogeneous(&self, f: &Gf) -> SparsePoly {
        SparsePoly::from_terms(
            3,
            CONIC_EXPONENTS
                .iter()
                .zip(self.coeffs.iter())
                .map(|(&(a, b), &c)| (vec![a, b, 2 - a - b], c)),
            f,
        )
    }

    pub fn affine(&self, f: &Gf) -> SparsePoly {
        SparsePoly::from_terms(2, CONIC_EXPONENTS.iter().zip(self.coeffs.iter()).map(|(&(a, b), &c)| (vec![a, b], c)), f)
    }

    /// Symmetric matrix of the quadratic form (odd characteristic).
    fn gram(&self, f: &Gf) -> Mat3 {
        let half = f.inv(f.from_u64(2)).expect("odd characteristic");
        let [xx, yy, zz, yz, xz, xy] = self.coeffs;
        let h = |a| f.mul(a, half);
        [[xx, h(xy), h(xz)], [h(xy), yy, h(yz)], [h(xz), h(yz), zz]]
    }
}

/// Image conic of the canonical curve with its exactness certificate.
pub fn phi_transform(cc: &CanonicalCurve) -> ImageConic {
    let f = &cc.field;
    let (e1, e2, c) = (cc.eps1, cc.eps2, cc.c);
    let coeffs = [Elem::ONE, e1, f.mul(e1, e1), c, f.mul(c, e2), f.mul(c, f.mul(e2, e2))];
    let t = i64::from(cc.t);
    // x'^a y'^b = y^(a + (t-1) b) x^(-(t-1) a - (t-2) b)
    let mut ok = true;
    let mut expanded = SparsePoly::zero(2);
    for (&(a, b), &co) in CONIC_EXPONENTS.iter().zip(coeffs.iter()) {
        let (a, b) = (i64::from(a), i64::from(b));
        let ex = 2 * t - 2 - (t - 1) * a - (t - 2) * b;
        let ey = a + (t - 1) * b;
        if ex < 0 {
            ok = false;
            continue;
        }
        expanded.add_term(vec![ex as u32, ey as u32], co, f);
    }
    let certificate = ok && expanded == cc.equation();
    let mut conic = ImageConic {
        coeffs,
        kind: ConicKind::Smooth,
        certificate,
    };
    if f.characteristic() != 2 {
        let m = conic.gram(f);
        let rank = linalg::Matrix::from_rows(m.iter().map(|r| r.to_vec()).collect()).rank(f);
        conic.kind = match rank {
            3 => ConicKind::Smooth,
            2 => ConicKind::LinePair,
            _ => ConicKind::DoubleLine,
        };
    }
    conic
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Formula,
    Oracle,
}

/// `t^2 - 3t + 3`, or the number of points in a generic fiber.
pub fn extension_degree<R: Rng>(cc: &CanonicalCurve, mode: Mode, rng: &mut R) -> Result<u64> {
    cc.check_genus_hypotheses()?;
    match mode {
        Mode::Formula => Ok(cc.big_n()),
        Mode::Oracle => fiber_count(cc, rng),
    }
}

const FIBER_SAMPLES: usize = 5;

fn fiber_count<R: Rng>(cc: &CanonicalCurve, rng: &mut R) -> Result<u64> {
    let (big, emb) = fields::extend(&cc.field, 4)?;
    let conic = phi_transform(cc);
    let q: Vec<Elem> = conic.coeffs.iter().map(|&a| emb.embed(a)).collect();
    let g = cc.equation().map_coeffs(|a| emb.embed(a));
    let t = u64::from(cc.t);
    let n = cc.big_n();
    let mut counts = Vec::new();
    let mut attempts = 0;
    while counts.len() < FIBER_SAMPLES {
        attempts += 1;
        if attempts > 1000 {
            return Err(Error::Inconsistent("no generic conic point found".into()));
        }
        let x0 = Elem(rng.gen_range(0..big.order()));
        // Q(x0, y') = q1 y'^2 + (q3 + q5 x0) y' + (q0 x0^2 + q4 x0 + q2)
        let quad = UniPoly::new(vec![
            big.add(big.add(big.mul(q[0], big.mul(x0, x0)), big.mul(q[4], x0)), q[2]),
            big.add(q[3], big.mul(q[5], x0)),
            q[1],
        ]);
        let roots = quad.roots(&big, rng);
        let Some(&y0) = roots.first() else { continue };
        if x0.is_zero() || y0.is_zero() {
            continue;
        }
        // g(x, x0 x^(t-1)) and x0^(t-1) x^N - y0
        let mut a = vec![Elem::ZERO; 1];
        for (e, &co) in g.terms() {
            let k = (u64::from(e[0]) + (t - 1) * u64::from(e[1])) as usize;
            if a.len() <= k {
                a.resize(k + 1, Elem::ZERO);
            }
            a[k] = big.add(a[k], big.mul(co, big.pow(x0, u64::from(e[1]))));
        }
        let a = UniPoly::new(a);
        let b = UniPoly::monomial(big.pow(x0, t - 1), n as usize).sub(&UniPoly::constant(y0), &big);
        if a.is_zero() {
            continue;
        }
        counts.push(a.gcd(&b, &big).deg() as u64);
    }
    let first = counts[0];
    if counts.iter().any(|&c| c != first) {
        return Err(Error::Disagreement(format!("fiber counts differ across samples: {counts:?}")));
    }
    Ok(first)
}

/// Contribution of one vertex branch to the different.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchDifferent {
    pub vertex: Vertex,
    pub e: u32,
    /// Order of the local parameter `z` of the image conic along the branch.
    pub z_order: usize,
    pub d_gamma: usize,
}

/// Orders of the different, by formula or per branch through the map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentReport {
    pub total: u64,
    pub branches: Vec<BranchDifferent>,
}

pub fn different_order(cc: &CanonicalCurve, mode: Mode) -> Result<DifferentReport> {
    cc.check_genus_hypotheses()?;
    let ty = branches::classify_type(cc)?;
    let t = u64::from(cc.t);
    match mode {
        Mode::Formula => Ok(DifferentReport {
            total: match ty {
                CurveType::First => 6 * (t * t - 3 * t + 2),
                CurveType::Second => 3 * (t * t - 3 * t + 2),
            },
            branches: Vec::new(),
        }),
        Mode::Oracle => {
            let mut n = branches::default_truncation(cc);
            for _ in 0..4 {
                match different_oracle(cc, n) {
                    Err(Error::TruncationInsufficient(_)) => n *= 2,
                    other => return other,
                }
            }
            Err(Error::TruncationInsufficient(n))
        }
    }
}

fn different_oracle(cc: &CanonicalCurve, n: usize) -> Result<DifferentReport> {
    let mut out = Vec::new();
    for v in Vertex::ALL {
        for b in branches::vertex_branches(cc, v, n)? {
            out.push(branch_different(cc, &b)?);
        }
    }
    Ok(DifferentReport {
        total: out.iter().map(|b| b.d_gamma as u64).sum(),
        branches: out,
    })
}

/// `D = ord d z / d tau` for the image of a vertex branch, where `z` is the
/// affine coordinate of least order at the (smooth) image point.
pub fn branch_different(cc: &CanonicalCurve, b: &PuiseuxBranch) -> Result<BranchDifferent> {
    let f = &b.field;
    let v = b.vertex.ok_or_else(|| Error::InvalidArgument("branch without a vertex".into()))?;
    let h = v.lift(&b.x, &b.y);
    let t = u64::from(cc.t);
    // (x1:x2:x3) -> (x2 x3^(t-1) : x1 x2^(t-1) : x1^(t-1) x3)
    let img = [
        h[1].mul(&h[2].pow(t - 1, f), f),
        h[0].mul(&h[1].pow(t - 1, f), f),
        h[0].pow(t - 1, f).mul(&h[2], f),
    ];
    let vals: Vec<usize> = img.iter().map(|s| s.valuation().unwrap_or(usize::MAX)).collect();
    let vmin = *vals.iter().min().unwrap();
    if vmin == usize::MAX {
        return Err(Error::TruncationInsufficient(b.n));
    }
    let w = vals.iter().position(|&x| x == vmin).unwrap();
    let den = img[w].shift_down(vmin).unwrap();
    let cap = den.prec.min(b.n + 4 * b.n);
    let den_inv = den.inverse(cap, f).unwrap();
    let mut point = [Elem::ZERO; 3];
    point[w] = Elem::ONE;
    let mut best: Option<Series> = None;
    for i in (0..3).filter(|&i| i != w) {
        let ratio = img[i].shift_down(vmin).ok_or(Error::TruncationInsufficient(b.n))?.mul(&den_inv, f);
        point[i] = ratio.coeff(0);
        let z = ratio.sub(&Series::constant(ratio.coeff(0)), f);
        let Some(zv) = z.valuation() else { continue };
        if best.as_ref().is_none_or(|s| zv < s.valuation().unwrap()) {
            best = Some(z);
        }
    }
    // an undetermined coordinate could still have smaller order
    for i in (0..3).filter(|&i| i != w) {
        let ratio = img[i].shift_down(vmin).unwrap().mul(&den_inv, f);
        let z = ratio.sub(&Series::constant(ratio.coeff(0)), f);
        if z.valuation().is_none() && best.as_ref().is_none_or(|s| z.prec <= s.valuation().unwrap()) {
            return Err(Error::TruncationInsufficient(b.n));
        }
    }
    let z = best.ok_or(Error::TruncationInsufficient(b.n))?;
    let emb = Embedding::new(&cc.field, f)?;
    let conic = phi_transform(cc).homogeneous(&cc.field).map_coeffs(|a| emb.embed(a));
    if !conic.eval(&point, f).is_zero() {
        return Err(Error::Inconsistent("image point is not on the conic".into()));
    }
    if (0..3).all(|i| conic.derivative(i, f).eval(&point, f).is_zero()) {
        return Err(Error::Inconsistent("image point is singular on the conic".into()));
    }
    let dz = z.derivative(f);
    let d = dz.valuation().ok_or(Error::TruncationInsufficient(b.n))?;
    Ok(BranchDifferent {
        vertex: v,
        e: b.e,
        z_order: z.valuation().unwrap(),
        d_gamma: d,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Hurwitz,
    Delta,
    Formula,
    All,
}

impl Method {
    pub fn parse(s: &str) -> Result<Method> {
        match s {
            "hurwitz" => Ok(Method::Hurwitz),
            "delta" => Ok(Method::Delta),
            "formula" => Ok(Method::Formula),
            "all" => Ok(Method::All),
            _ => Err(Error::InvalidArgument(format!("unknown method {s}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConicReport {
    pub coefficients: Vec<String>,
    pub kind: ConicKind,
    pub certificate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypotheses {
    pub p_odd: bool,
    pub c_nonzero: bool,
    pub p_coprime_to_n: bool,
    pub absolutely_irreducible: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusReport {
    pub t: u32,
    pub field: String,
    pub eps1: String,
    pub eps2: String,
    pub c: String,
    pub method: Method,
    pub seed: u64,
    pub hypotheses: Hypotheses,
    pub curve_type: CurveType,
    pub image_conic: ConicReport,
    pub extension_degree_formula: u64,
    pub extension_degree: Option<u64>,
    pub different_order_formula: u64,
    pub different_order: Option<u64>,
    pub branch_differents: Vec<BranchDifferent>,
    pub singular_points: Vec<SingularPointJson>,
    pub genus_hurwitz: Option<i64>,
    pub genus_delta: Option<i64>,
    pub genus_formula: i64,
    pub agreement: bool,
}

/// Closed form by type.
pub fn genus_formula(t: u32, ty: CurveType) -> i64 {
    let t = i64::from(t);
    match ty {
        CurveType::First => 2 * (t - 1) * (t - 2),
        CurveType::Second => (t - 1) * (t - 2) / 2,
    }
}

/// `(2 - 2 [S:S'] + ord D) / 2`, exact.
pub fn hurwitz_genus(ext: u64, diff: u64) -> Result<i64> {
    let num = 2 + diff as i64 - 2 * ext as i64;
    if num % 2 != 0 {
        return Err(Error::Inconsistent(format!("odd Hurwitz numerator {num}")));
    }
    Ok(num / 2)
}

pub fn genus(cc: &CanonicalCurve, method: Method, seed: u64) -> Result<GenusReport> {
    cc.check_genus_hypotheses()?;
    let f = &cc.field;
    let irreducible = cc.is_absolutely_irreducible()?;
    if !irreducible {
        return Err(Error::Reducible);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ty = branches::classify_type(cc)?;
    let conic = phi_transform(cc);
    if !conic.certificate {
        return Err(Error::Disagreement("the conic identity does not reproduce g".into()));
    }
    let ext_formula = cc.big_n();
    let diff_formula = different_order(cc, Mode::Formula)?.total;
    let g_formula = genus_formula(cc.t, ty);
    let want_h = matches!(method, Method::Hurwitz | Method::All);
    let want_d = matches!(method, Method::Delta | Method::All);

    let (ext, diff) = if want_h {
        (
            Some(extension_degree(cc, Mode::Oracle, &mut rng)?),
            Some(different_order(cc, Mode::Oracle)?),
        )
    } else {
        (None, None)
    };
    let g_h = match (ext, &diff) {
        (Some(e), Some(d)) => Some(hurwitz_genus(e, d.total)?),
        _ => None,
    };
    let (g_d, sing) = if want_d {
        let (g, pts) = singular::delta_genus(&cc.equation(), f)?;
        (Some(g), pts.iter().map(|p| p.to_json()).collect())
    } else {
        (None, Vec::new())
    };
    let mut agreement = true;
    if let Some(g) = g_h {
        agreement &= g == g_formula && ext == Some(ext_formula) && diff.as_ref().map(|d| d.total) == Some(diff_formula);
    }
    if let Some(g) = g_d {
        agreement &= g == g_formula;
    }
    Ok(GenusReport {
        t: cc.t,
        field: f.spec_string(),
        eps1: f.format_elem(cc.eps1),
        eps2: f.format_elem(cc.eps2),
        c: f.format_elem(cc.c),
        method,
        seed,
        hypotheses: Hypotheses {
            p_odd: true,
            c_nonzero: true,
            p_coprime_to_n: true,
            absolutely_irreducible: irreducible,
        },
        curve_type: ty,
        image_conic: ConicReport {
            coefficients: conic.coeffs.iter().map(|&a| f.format_elem(a)).collect(),
            kind: conic.kind,
            certificate: conic.certificate,
        },
        extension_degree_formula: ext_formula,
        extension_degree: ext,
        different_order_formula: diff_formula,
        different_order: diff.as_ref().map(|d| d.total),
        branch_differents: diff.map(|d| d.branches).unwrap_or_default(),
        singular_points: sing,
        genus_hurwitz: g_h,
        genus_delta: g_d,
        genus_formula: g_formula,
        agreement,
    })
}
