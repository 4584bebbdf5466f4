//! Cyclic arcs of Singer type: orbits of subgroups of the Singer group,
//! verified exhaustively.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::fields::{Elem, Gf, TowerContext};
use crate::plane::{self, ProjLine, ProjPoint};

/// A Singer orbit `{omega^(i e)}` with its arc metadata.
#[derive(Clone, Debug)]
pub struct ArcRecord {
    pub field: Gf,
    pub q: u64,
    pub k: u64,
    /// Orbit exponent `(q^2+q+1)/k`.
    pub e: u64,
    pub points: Vec<ProjPoint>,
    pub is_arc: bool,
    pub is_complete: Option<bool>,
}

impl ArcRecord {
    /// Tangents per point, `q - k + 2`.
    pub fn t(&self) -> i64 {
        self.q as i64 - self.k as i64 + 2
    }

    pub fn to_json(&self) -> ArcRecordJson {
        ArcRecordJson {
            field: self.field.spec_string(),
            q: self.q,
            k: self.k,
            e: self.e,
            points: self.points.iter().map(|p| p.to_json(&self.field)).collect(),
            is_arc: self.is_arc,
            is_complete: self.is_complete,
            t: self.t(),
        }
    }

    pub fn from_json(j: &ArcRecordJson) -> Result<ArcRecord> {
        let field = Gf::parse(&j.field)?;
        let points = j.points.iter().map(|p| ProjPoint::from_json(p, &field)).collect::<Result<Vec<_>>>()?;
        if points.len() as u64 != j.k {
            return Err(Error::Inconsistent(format!("{} points for k = {}", points.len(), j.k)));
        }
        Ok(ArcRecord {
            q: field.order(),
            k: j.k,
            e: j.e,
            points,
            is_arc: j.is_arc,
            is_complete: j.is_complete,
            field,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcRecordJson {
    pub field: String,
    pub q: u64,
    pub k: u64,
    pub e: u64,
    pub points: Vec<Vec<String>>,
    pub is_arc: bool,
    pub is_complete: Option<bool>,
    pub t: i64,
}

/// A feasible `(q, k)` with the hypotheses it satisfies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub q: u64,
    pub p: u64,
    pub h: u32,
    pub k: u64,
    pub e: u64,
    pub t: u64,
    /// `k > 2(q+2)/3`: the envelope is unique and the curve is cyclic.
    pub above_two_thirds: bool,
    /// `k >= q - sqrt(2q/3 + 1/4) + 9/4`, the genus-theorem hypothesis.
    pub strong_bound: bool,
    /// `k >= 2(t-1)t/3 + 2`, the consequence of the strong bound used in
    /// the congruence argument.
    pub weak_bound: bool,
    /// `p | k^2 - k + 1`, the excluded case.
    pub p_divides_k2_k_1: bool,
    pub q_odd: bool,
}

/// Exact form of `k >= q - sqrt(2q/3 + 1/4) + 9/4` with `t = q - k + 2 >= 0`:
/// `48 t^2 + 24 t <= 32 q + 9`.
pub fn strong_bound(q: u64, k: u64) -> bool {
    if k > q + 2 {
        return true;
    }
    let t = q + 2 - k;
    48 * t * t + 24 * t <= 32 * q + 9
}

/// Every `(q, k)` with `q` a prime power in range, `k | q^2+q+1` and
/// `3 <= k <= q+2`, sorted by `(q, k)`.
pub fn enumerate_candidates(q_lo: u64, q_hi: u64) -> Vec<Candidate> {
    let mut out = Vec::new();
    for q in q_lo.max(2)..=q_hi {
        let Some((p, h)) = arith::prime_power(q) else { continue };
        let n = q * q + q + 1;
        for k in arith::divisors(n) {
            if k < 3 || k > q + 2 {
                continue;
            }
            let t = q + 2 - k;
            out.push(Candidate {
                q,
                p,
                h,
                k,
                e: n / k,
                t,
                above_two_thirds: 3 * k > 2 * (q + 2),
                strong_bound: strong_bound(q, k),
                weak_bound: 3 * k >= 2 * t * t.saturating_sub(1) + 6,
                p_divides_k2_k_1: (k * k - k + 1) % p == 0,
                q_odd: q % 2 == 1,
            });
        }
    }
    out
}

/// The orbit of `(1,0,0)` under `C^((q^2+q+1)/k)`, with `is_arc` decided
/// exhaustively.
pub fn singer_orbit(ctx: &TowerContext, k: u64) -> Result<ArcRecord> {
    let n = ctx.plane_size();
    if k == 0 || !n.is_multiple_of(k) {
        return Err(Error::NotDivisor(k, n));
    }
    let e = n / k;
    let points: Vec<ProjPoint> = (0..k).map(|i| plane::singer_point(ctx, (i * e) as i64)).collect();
    let f = ctx.base().clone();
    let is_arc = is_arc(&f, &points);
    Ok(ArcRecord {
        q: ctx.q(),
        k,
        e,
        points,
        is_arc,
        is_complete: None,
        field: f,
    })
}

/// No three of the points are collinear (distinct points assumed).
pub fn is_arc(f: &Gf, points: &[ProjPoint]) -> bool {
    first_collinear_triple(f, points).is_none()
}

pub fn first_collinear_triple(f: &Gf, points: &[ProjPoint]) -> Option<(usize, usize, usize)> {
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            let l = plane::cross(f, &points[i].0, &points[j].0);
            for m in j + 1..n {
                if plane::dot(f, &l, &points[m].0).is_zero() {
                    return Some((i, j, m));
                }
            }
        }
    }
    None
}

/// Tangents and secants through one arc point.
#[derive(Clone, Debug)]
pub struct PointLines {
    pub point: ProjPoint,
    pub tangents: Vec<ProjLine>,
    pub secants: Vec<ProjLine>,
}

#[derive(Clone, Debug)]
pub struct LineClassification {
    pub per_point: Vec<PointLines>,
    /// All tangent lines (each lies on exactly one arc point).
    pub tangents: Vec<ProjLine>,
    /// All 2-secants.
    pub secants: Vec<ProjLine>,
}

/// The `q+1` lines through `p`.
pub fn pencil(f: &Gf, p: &ProjPoint) -> Vec<ProjLine> {
    let i = p.0.iter().position(|x| !x.is_zero()).unwrap();
    let mut u = [Elem::ZERO; 3];
    u[i] = Elem::ONE;
    let base = ProjLine(u);
    plane::points_on_line(f, &base)
        .iter()
        .map(|r| ProjLine::through(f, p, r).unwrap())
        .collect()
}

pub fn classify_lines(arc: &ArcRecord) -> Result<LineClassification> {
    let f = &arc.field;
    if let Some((i, j, m)) = first_collinear_triple(f, &arc.points) {
        return Err(Error::NotAnArc(format!("points {i}, {j}, {m} are collinear")));
    }
    let mut per_point = Vec::with_capacity(arc.points.len());
    let mut tangents = Vec::new();
    let mut secants = HashSet::new();
    for (i, p) in arc.points.iter().enumerate() {
        let sec: HashSet<ProjLine> = arc
            .points
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, r)| ProjLine::through(f, p, r).unwrap())
            .collect();
        let mut tan: Vec<ProjLine> = pencil(f, p).into_iter().filter(|l| !sec.contains(l)).collect();
        tan.sort();
        let mut sec_sorted: Vec<ProjLine> = sec.iter().copied().collect();
        sec_sorted.sort();
        tangents.extend(tan.iter().copied());
        secants.extend(sec);
        per_point.push(PointLines {
            point: *p,
            tangents: tan,
            secants: sec_sorted,
        });
    }
    let mut secants: Vec<ProjLine> = secants.into_iter().collect();
    secants.sort();
    Ok(LineClassification {
        per_point,
        tangents,
        secants,
    })
}

/// Every point off the arc lies on some 2-secant.
pub fn is_complete(arc: &ArcRecord) -> Result<bool> {
    let f = &arc.field;
    let cls = classify_lines(arc)?;
    let mut covered: HashSet<ProjPoint> = arc.points.iter().copied().collect();
    for l in &cls.secants {
        covered.extend(plane::points_on_line(f, l));
    }
    let total = plane::all_points(f).len();
    Ok(covered.len() == total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn candidates_for_small_q() {
        assert!(enumerate_candidates(2, 2).is_empty());
        let c25 = enumerate_candidates(25, 25);
        let row = c25.iter().find(|c| c.k == 21).unwrap();
        assert!(row.above_two_thirds && !row.strong_bound && row.q_odd);
        assert!(enumerate_candidates(4, 4).iter().all(|c| c.k != 7));
        assert!(enumerate_candidates(2, 10).iter().all(|c| !c.above_two_thirds));
        let c16 = enumerate_candidates(16, 16);
        assert!(c16.iter().any(|c| c.k == 13 && !c.q_odd));
    }

    #[test]
    fn strong_bound_matches_floating_point() {
        for q in 2..200u64 {
            for k in 3..=q + 2 {
                let rhs = q as f64 - (2.0 * q as f64 / 3.0 + 0.25).sqrt() + 2.25;
                if ((k as f64) - rhs).abs() > 1e-9 {
                    assert_eq!(strong_bound(q, k), k as f64 >= rhs, "q={q} k={k}");
                }
            }
        }
    }

    #[test]
    fn conic_in_pg25() {
        let f = Gf::prime(5).unwrap();
        let pts: Vec<ProjPoint> = f
            .elements()
            .map(|s| ProjPoint::new(&f, [Elem::ONE, s, f.mul(s, s)]).unwrap())
            .chain(std::iter::once(ProjPoint([Elem::ZERO, Elem::ZERO, Elem::ONE])))
            .collect();
        assert!(is_arc(&f, &pts));
        let arc = ArcRecord {
            field: f.clone(),
            q: 5,
            k: 6,
            e: 0,
            points: pts,
            is_arc: true,
            is_complete: None,
        };
        let cls = classify_lines(&arc).unwrap();
        assert!(cls.per_point.iter().all(|pl| pl.tangents.len() == 1 && pl.secants.len() == 5));
        assert_eq!(cls.tangents.len(), 6);
        assert_eq!(cls.secants.len(), 15);
        assert!(is_complete(&arc).unwrap());
    }

    #[test]
    fn three_arc_is_incomplete() {
        let f = Gf::prime(7).unwrap();
        let pts = vec![
            ProjPoint([Elem(1), Elem(0), Elem(0)]),
            ProjPoint([Elem(0), Elem(1), Elem(0)]),
            ProjPoint([Elem(0), Elem(0), Elem(1)]),
        ];
        let arc = ArcRecord {
            field: f,
            q: 7,
            k: 3,
            e: 19,
            points: pts,
            is_arc: true,
            is_complete: None,
        };
        assert!(!is_complete(&arc).unwrap());
    }

    #[test]
    fn full_orbit_is_the_plane() {
        let ctx = TowerContext::build(3, 1).unwrap();
        let rec = singer_orbit(&ctx, 13).unwrap();
        let set: HashSet<_> = rec.points.iter().collect();
        assert_eq!(set.len(), 13);
        assert!(!rec.is_arc);
        assert!(matches!(singer_orbit(&ctx, 5), Err(Error::NotDivisor(5, 13))));
    }
}
