use std::collections::HashSet;

use cyclic_curves::arcs;
use cyclic_curves::fields::{Elem, TowerContext};
use cyclic_curves::plane::{self, Collineation, ProjPoint};

fn tower(q: u64) -> TowerContext {
    let (p, h) = cyclic_curves::arith::prime_power(q).unwrap();
    TowerContext::build(p, h).unwrap()
}

#[test]
fn singer_orders() {
    for q in [2, 3, 4, 5, 7, 8, 9] {
        let ctx = tower(q);
        let c = plane::singer_matrix(&ctx);
        assert_eq!(c.projective_order(10_000).unwrap(), q * q + q + 1, "q={q}");
    }
}

#[test]
fn singer_points_cover_the_plane() {
    for q in [2, 3, 4, 5, 7] {
        let ctx = tower(q);
        let n = ctx.plane_size() as i64;
        let pts: HashSet<ProjPoint> = (0..n).map(|i| plane::singer_point(&ctx, i)).collect();
        assert_eq!(pts.len() as i64, n);
        assert_eq!(pts.len(), plane::all_points(ctx.base()).len());
    }
}

#[test]
fn eigen_frame_diagonalizes() {
    for q in [2, 3, 4, 5] {
        let ctx = tower(q);
        let c = plane::singer_matrix(&ctx).lift(ctx.embedding()).unwrap();
        let e = plane::eigen_frame(&ctx);
        let d = e.conjugate(&c);
        assert!(d.is_diagonal());
        let w = ctx.omega();
        let diag: Vec<Elem> = (0..3).map(|i| d.matrix()[i][i]).collect();
        assert_eq!(diag, vec![w, ctx.frobenius(w, 1), ctx.frobenius(w, 2)]);
    }
}

#[test]
fn phi_frame_and_subplane() {
    for q in [2, 3, 4] {
        let ctx = tower(q);
        let c = plane::singer_matrix(&ctx).lift(ctx.embedding()).unwrap();
        let phi = plane::phi_map(&ctx);
        let a = phi.conjugate(&c);
        let w = ctx.omega();
        assert!(a.is_diagonal());
        let diag: Vec<Elem> = (0..3).map(|i| a.matrix()[i][i]).collect();
        assert_eq!(diag, vec![ctx.frobenius(w, 1), ctx.frobenius(w, 2), w]);
        let e0 = ProjPoint([Elem::ONE, Elem::ZERO, Elem::ZERO]);
        assert_eq!(phi.apply(&e0), ProjPoint([Elem::ONE; 3]));

        let pi = plane::subplane_pi(&ctx);
        let pi_set: HashSet<ProjPoint> = pi.iter().copied().collect();
        assert_eq!(pi_set.len() as u64, q * q + q + 1);
        let image: HashSet<ProjPoint> = plane::all_points(ctx.base())
            .iter()
            .map(|p| phi.apply(&plane::embed_point(&ctx, p)))
            .collect();
        assert_eq!(image, pi_set);

        let s = plane::standard_collineations(&ctx, q * q + q + 1, 1).unwrap();
        assert!(a.projectively_equal(&s.alpha));
        assert!(pi.iter().all(|p| pi_set.contains(&s.alpha.apply(p))));
        let mu_inv = s.mu.inverse();
        for p in &pi {
            assert_eq!(s.delta.apply(p), mu_inv.apply(p));
        }
        // delta o phi = phi o tau on PG(2,q)
        let tau = s.tau.lift(ctx.embedding()).unwrap();
        for p in plane::all_points(ctx.base()) {
            let ep = plane::embed_point(&ctx, &p);
            assert_eq!(s.delta.apply(&phi.apply(&ep)), phi.apply(&tau.apply(&ep)));
        }
        assert!(s.mu.projective_order(10).unwrap() == 3);
    }
}

#[test]
fn beta_is_conjugated_singer_power() {
    let ctx = tower(25);
    for k in [3, 7, 21, 31] {
        let n = ctx.plane_size();
        let s = plane::standard_collineations(&ctx, k, 1).unwrap();
        let c = plane::singer_matrix(&ctx).lift(ctx.embedding()).unwrap();
        let phi = plane::phi_map(&ctx);
        assert!(phi.conjugate(&c.pow(n / k)).projectively_equal(&s.beta));
        assert!(s.beta.pow(k).is_identity());
    }
}

#[test]
fn orbit_invariance_and_arc_property() {
    let ctx = tower(25);
    let rec = arcs::singer_orbit(&ctx, 21).unwrap();
    let set: HashSet<ProjPoint> = rec.points.iter().copied().collect();
    assert_eq!(set.len(), 21);
    let c = plane::singer_matrix(&ctx);
    let g = c.pow(rec.e);
    assert!(rec.points.iter().all(|p| set.contains(&g.apply(p))));
    let tau = plane::standard_collineations(&ctx, 21, 6).unwrap().tau;
    assert!(rec.points.iter().all(|p| set.contains(&tau.apply(p))));
    // brute-force oracle over all triples
    let f = ctx.base();
    let mut collinear = false;
    for i in 0..21 {
        for j in i + 1..21 {
            for k in j + 1..21 {
                collinear |= plane::collinear(f, &rec.points[i], &rec.points[j], &rec.points[k]);
            }
        }
    }
    assert_eq!(rec.is_arc, !collinear);
}

#[test]
fn collinearity_preserved_by_collineations() {
    let ctx = tower(3);
    let f = ctx.ext();
    let s = plane::standard_collineations(&ctx, 13, 1).unwrap();
    let maps: Vec<Collineation> = vec![s.alpha.clone(), s.mu.clone(), s.delta.clone(), plane::phi_map(&ctx)];
    let pts = plane::subplane_pi(&ctx);
    for g in &maps {
        for w in pts.windows(3) {
            let before = plane::collinear(f, &w[0], &w[1], &w[2]);
            let after = plane::collinear(f, &g.apply(&w[0]), &g.apply(&w[1]), &g.apply(&w[2]));
            assert_eq!(before, after);
        }
    }
}
