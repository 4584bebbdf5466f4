use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cyclic_curves::arcs;
use cyclic_curves::bivar::{self, Bivar};
use cyclic_curves::curvefam::{self, CanonicalCurve};
use cyclic_curves::envelope::family_exponents;
use cyclic_curves::fields::{Elem, Gf, UniPoly};
use cyclic_curves::series::{Series, EXACT};

fn small_field() -> impl Strategy<Value = Gf> {
    prop::sample::select(vec![(2u64, 1u32), (3, 2), (5, 1), (7, 2), (2, 5), (13, 1)])
        .prop_map(|(p, h)| Gf::new(p, h).unwrap())
}

fn elem(f: &Gf, raw: u64) -> Elem {
    f.elements().nth((raw % f.order()) as usize).unwrap()
}

proptest! {
    #[test]
    fn field_axioms(f in small_field(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (a, b, c) = (elem(&f, a), elem(&f, b), elem(&f, c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
            prop_assert_eq!(f.pow(a, f.order() - 1), Elem::ONE);
        }
        prop_assert_eq!(f.frobenius_p(a, f.degree()), a);
    }

    #[test]
    fn series_inverse(c0 in 1u64..7, rest in prop::collection::vec(0u64..7, 0..8), prec in 1usize..20) {
        let f = Gf::prime(7).unwrap();
        let mut coeffs = vec![Elem(c0)];
        coeffs.extend(rest.iter().map(|&x| Elem(x)));
        let s = Series::new(coeffs, EXACT);
        let inv = s.inverse(prec, &f).unwrap();
        let prod = s.mul(&inv, &f);
        prop_assert_eq!(prod.prec, prec);
        prop_assert_eq!(prod.coeffs, vec![Elem::ONE]);
    }

    #[test]
    fn products_are_reducible(
        a in prop::collection::vec(prop::collection::vec(0u64..5, 1..3), 2..4),
        b in prop::collection::vec(prop::collection::vec(0u64..5, 1..3), 2..4),
    ) {
        let f = Gf::prime(5).unwrap();
        let mk = |v: &Vec<Vec<u64>>| {
            let mut c: Vec<UniPoly> = v.iter().map(|r| UniPoly::new(r.iter().map(|&x| Elem(x)).collect())).collect();
            // keep y-degree >= 1 with a unit leading coefficient
            *c.last_mut().unwrap() = UniPoly::one();
            Bivar::new(c)
        };
        let g = mk(&a).mul(&mk(&b), &f);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = bivar::is_irreducible_over(&g, &f, &mut rng);
        prop_assert!(matches!(r, Ok(false)), "{:?} {:?}", r, g);
    }

    #[test]
    fn eta_weight_is_constant(t in 3u32..60) {
        let n = i64::from(t * t - 3 * t + 3);
        let w: Vec<i64> = family_exponents(t)
            .iter()
            .map(|[l, j]| (i64::from(*l) + i64::from(t - 1) * i64::from(*j)).rem_euclid(n))
            .collect();
        prop_assert!(w.iter().all(|&x| x == w[0]));
    }

    #[test]
    fn genus_identities(t in 3i64..200) {
        let g1 = 2 * (t - 1) * (t - 2);
        prop_assert_eq!(2 * g1 - 2, 4 * t * t - 12 * t + 6);
        let g2 = (t - 1) * (t - 2) / 2;
        prop_assert_eq!((t - 1) * (t - 2) % 2, 0);
        prop_assert_eq!(2 * g2 - 2, t * t - 3 * t);
        // N = t^2-3t+3 is odd
        prop_assert_eq!((t * t - 3 * t + 3) % 2, 1);
    }

    #[test]
    fn eta_fixes_the_curve(t in 3u32..8, ci in 1u64..13) {
        let cc = CanonicalCurve::simple(13, t, ci as i64).unwrap();
        let f = &cc.field;
        let n = cc.big_n();
        let g = cc.equation();
        for u in f.elements().filter(|u| !u.is_zero() && f.pow(*u, n) == Elem::ONE) {
            prop_assert!(curvefam::eta_invariant(&g, u, t, f).unwrap());
        }
    }

    #[test]
    fn curve_json_round_trip(t in 3u32..9, ci in 0u64..11) {
        let cc = CanonicalCurve::simple(11, t, ci as i64).unwrap();
        let j = cc.to_json();
        let back = CanonicalCurve::from_json(&j).unwrap();
        prop_assert_eq!(back.to_json(), j);
    }
}

#[test]
fn characteristic_identity_on_candidates() {
    // (q-k+2)^2 - 3(q-k+2) + 3 = k^2 - k + 1 (mod p)
    for c in arcs::enumerate_candidates(2, 600) {
        let t = c.t as i128;
        let k = c.k as i128;
        let lhs = t * t - 3 * t + 3;
        let rhs = k * k - k + 1;
        assert_eq!((lhs - rhs).rem_euclid(c.p as i128), 0, "q={} k={}", c.q, c.k);
    }
}

#[test]
fn enumeration_examples() {
    let small = arcs::enumerate_candidates(2, 10);
    assert!(small.iter().all(|c| !c.above_two_thirds));
    let c25 = arcs::enumerate_candidates(25, 25).into_iter().find(|c| c.k == 21).unwrap();
    assert!(c25.above_two_thirds && !c25.strong_bound && c25.q_odd);
    let c16 = arcs::enumerate_candidates(16, 16).into_iter().find(|c| c.k == 13).unwrap();
    assert!(!c16.q_odd);
}
