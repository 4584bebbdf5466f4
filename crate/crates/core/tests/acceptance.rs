//! Acceptance criteria 1-8. Each criterion prints one line
//! `criterion N: PASS|FAIL ...` to stderr; all comparisons are exact
//! (tolerance 0). The test fails unless the failing set is exactly
//! `EXPECTED_FAILURES`.

use std::collections::HashSet;
use std::io::Write;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use cyclic_curves::arcs::{self, ArcRecord};
use cyclic_curves::envelope;
use cyclic_curves::fields::{Elem, Gf, TowerContext};
use cyclic_curves::plane::{self, ProjPoint};
use cyclic_curves::poly::SparsePoly;
use cyclic_curves::singular;
use cyclic_curves::workbench::{self, Command, CurveCheck, RunConfig};
use cyclic_curves::{arith, genus::Method};

const TS: [u32; 4] = [3, 4, 5, 6];
const PS: [u64; 4] = [5, 7, 11, 13];
const INSTANCE_BUDGET: Duration = Duration::from_secs(60);
const GRID_BUDGET: Duration = Duration::from_secs(30 * 60);

fn line(n: u32, ok: bool, detail: &str) {
    let tag = if ok { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "criterion {n}: {tag} {detail}");
}

fn big_n(t: u32) -> u64 {
    let t = u64::from(t);
    t * t - 3 * t + 3
}

/// Integer oracle for the genus by the value of `c^2 - 4` mod `p`.
fn expected_genus(t: u32, p: u64, c: u64) -> i64 {
    let t = i64::from(t);
    if (c * c) % p == 4 % p {
        (t - 1) * (t - 2) / 2
    } else {
        2 * (t - 1) * (t - 2)
    }
}

fn second_type(p: u64, c: u64) -> bool {
    (c * c) % p == 4 % p
}

fn grid_config() -> RunConfig {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    RunConfig::new(Command::Grid {
        t: TS.to_vec(),
        p: PS.to_vec(),
        workers,
        method: Method::All,
    })
}

fn curve_config(t: u32, p: u64, c: u64, check: CurveCheck) -> RunConfig {
    RunConfig::new(Command::Curve {
        field: p.to_string(),
        t,
        eps1: "1".into(),
        eps2: "1".into(),
        c: c.to_string(),
        check,
    })
}

fn u(v: &Value) -> u64 {
    v.as_u64().unwrap_or(u64::MAX)
}

/// Criteria 1 and 2 from one grid run.
fn genus_criteria(failures: &mut Vec<u32>) -> Vec<(u32, u64, u64)> {
    let start = Instant::now();
    let rep = workbench::run(&grid_config());
    let elapsed = start.elapsed();
    let empty = Vec::new();
    let inst = rep.result["instances"].as_array().unwrap_or(&empty);

    let mut ok1 = rep.exit_code == 0 && elapsed < GRID_BUDGET;
    let mut ok2 = rep.exit_code == 0;
    let mut ran = Vec::new();
    let mut per_type = HashSet::new();
    for i in inst {
        let (t, p, c) = (u(&i["t"]) as u32, u(&i["p"]), u(&i["c"]));
        let n = big_n(t);
        if n.is_multiple_of(p) {
            ok1 &= i["status"] == "skipped";
            continue;
        }
        if i["status"] == "skipped" {
            // only the irreducibility filter may drop an admissible instance
            ok1 &= i["reason"] == "not absolutely irreducible";
            continue;
        }
        let r = &i["report"];
        let want = expected_genus(t, p, c);
        let gh = r["genus_hurwitz"].as_i64();
        let gd = r["genus_delta"].as_i64();
        let gf = r["genus_formula"].as_i64();
        ok1 &= gh == Some(want) && gd == Some(want) && gf == Some(want);
        per_type.insert((t, second_type(p, c)));

        let m = n - 1;
        let diff = if second_type(p, c) { 3 * m } else { 6 * m };
        ok2 &= u(&r["extension_degree"]) == n && u(&r["different_order"]) == diff;
        let branches = r["branch_differents"].as_array().unwrap_or(&empty);
        ok2 &= !branches.is_empty() && branches.iter().all(|b| u(&b["d_gamma"]) == m);
        ran.push((t, p, c));
    }
    ok1 &= per_type.len() == 2 * TS.len();

    // per-instance budget, timed individually
    let mut slowest = Duration::ZERO;
    for &(t, p, c) in &ran {
        let cfg = RunConfig::new(Command::Genus {
            field: p.to_string(),
            t,
            eps1: "1".into(),
            eps2: "1".into(),
            c: c.to_string(),
            method: Method::All,
        });
        let s = Instant::now();
        let r = workbench::run(&cfg);
        slowest = slowest.max(s.elapsed());
        ok1 &= r.exit_code == 0;
    }
    ok1 &= slowest < INSTANCE_BUDGET;

    line(
        1,
        ok1,
        &format!(
            "genus_hurwitz = genus_delta = genus_formula on {} instances, {} skipped (p | t^2-3t+3 or reducible); exact; grid {:.1}s (< 1800s), slowest instance {:.2}s (< 60s)",
            ran.len(),
            inst.len() - ran.len(),
            elapsed.as_secs_f64(),
            slowest.as_secs_f64()
        ),
    );
    line(
        2,
        ok2,
        &format!(
            "extension degree = t^2-3t+3, different = 6(t^2-3t+2) or 3(t^2-3t+2), every branch D = t^2-3t+2 on {} instances; exact",
            ran.len()
        ),
    );
    if !ok1 {
        failures.push(1);
    }
    if !ok2 {
        failures.push(2);
    }
    ran
}

/// Independent check of `m = (t-1) l + 2 (mod k)` on the family exponents.
fn congruence_oracle(t: u32, k: u64) -> bool {
    let t = u64::from(t);
    let exps = [[0, 2], [2, 2 * t - 2], [2 * t - 2, 0], [t, t - 1], [t - 1, 1], [1, t]];
    exps.iter().all(|&[l, j]| {
        let m = (l + j) as i64;
        (m - (t as i64 - 1) * l as i64 - 2).rem_euclid(k as i64) == 0
    })
}

fn lemma_criterion(ran: &[(u32, u64, u64)], failures: &mut Vec<u32>) {
    let mut ok = !ran.is_empty();
    let mut pairs = 0;
    let mut one_term_fail = Vec::new();
    for &(t, p, c) in ran {
        let r = workbench::run(&curve_config(t, p, c, CurveCheck::Lemmas));
        let l = &r.result["lemmas"];
        if l["one_term_per_degree"] != true {
            one_term_fail.push(format!("(t={t},p={p},c={c})"));
        }
        ok &= r.exit_code == 0;
        ok &= l["one_term_per_degree"] == true && l["mu_invariant"] == true;
        ok &= l["coefficient_symmetry"]["holds"] == true && l["coefficient_symmetry"]["eps"] == "1";
        ok &= l["congruence"]["holds"] == true;
        for q in 2..=1000u64 {
            if arith::prime_power(q).is_none() || q + 2 < u64::from(t) + 3 {
                continue;
            }
            let k = q + 2 - u64::from(t);
            if (q * q + q + 1) % k == 0 {
                ok &= congruence_oracle(t, k);
                pairs += 1;
            }
        }
    }
    let witness = if one_term_fail.is_empty() {
        String::new()
    } else {
        format!("; one term per degree fails on {}", one_term_fail.join(" "))
    };
    line(
        3,
        ok,
        &format!(
            "one term per degree, coefficient symmetry with eps = eps1 = 1, congruence over {pairs} (q,k) pairs on {} instances; exact{witness}",
            ran.len()
        ),
    );
    if !ok {
        failures.push(3);
    }
}

fn eta_criterion(ran: &[(u32, u64, u64)], failures: &mut Vec<u32>) {
    let mut ok = !ran.is_empty();
    for &(t, p, c) in ran {
        let r = workbench::run(&curve_config(t, p, c, CurveCheck::Eta));
        let e = &r.result["eta"];
        ok &= r.exit_code == 0 && u(&e["distinct_roots"]) == big_n(t) && e["all_invariant"] == true;
    }
    line(
        4,
        ok,
        &format!("exactly t^2-3t+3 distinct roots of unity, each eta(u) fixes the curve up to scalar, on {} instances; exact", ran.len()),
    );
    if !ok {
        failures.push(4);
    }
}

fn singer_criterion(failures: &mut Vec<u32>) {
    let start = Instant::now();
    let mut ok = true;
    for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25] {
        let (p, h) = arith::prime_power(q).unwrap();
        let ctx = TowerContext::build(p, h).unwrap();
        let n = q * q + q + 1;
        let c = plane::singer_matrix(&ctx);
        ok &= c.projective_order(n).ok() == Some(n);
        let d = plane::eigen_frame(&ctx).conjugate(&c.lift(ctx.embedding()).unwrap());
        let w = ctx.omega();
        let want = [w, ctx.frobenius(w, 1), ctx.frobenius(w, 2)];
        ok &= d.is_diagonal() && (0..3).all(|i| d.matrix()[i][i] == want[i]);
        if q <= 4 {
            let pi = plane::subplane_pi(&ctx);
            let set: HashSet<ProjPoint> = pi.iter().copied().collect();
            ok &= set.len() as u64 == n;
            let s = plane::standard_collineations(&ctx, n, 1).unwrap();
            let mu_inv = s.mu.inverse();
            ok &= pi.iter().all(|x| s.delta.apply(x) == mu_inv.apply(x));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 300.0;
    line(
        5,
        ok,
        &format!("Singer order q^2+q+1, E C E^-1 = diag(w, w^q, w^q^2) for 11 values of q; |Pi| = q^2+q+1 and delta = mu^-1 on Pi for q <= 4; exact; {secs:.1}s (< 300s)"),
    );
    if !ok {
        failures.push(5);
    }
}

fn conic_arc() -> ArcRecord {
    let f = Gf::prime(5).unwrap();
    let points: Vec<ProjPoint> = f
        .elements()
        .map(|s| ProjPoint::new(&f, [Elem::ONE, s, f.mul(s, s)]).unwrap())
        .chain(std::iter::once(ProjPoint([Elem::ZERO, Elem::ZERO, Elem::ONE])))
        .collect();
    ArcRecord {
        field: f,
        q: 5,
        k: 6,
        e: 0,
        points,
        is_arc: true,
        is_complete: None,
    }
}

fn segre_2_to_5(s: &envelope::SegreReport) -> bool {
    s.degree_ok && s.tangents_on_curve && s.tangency_double && s.no_secant_on_curve
}

fn envelope_criterion(failures: &mut Vec<u32>) {
    let mut ok = true;
    let mut slowest = Duration::ZERO;
    let arc = conic_arc();
    ok &= arcs::is_arc(&arc.field, &arc.points);
    let sol = envelope::interpolate_envelope(&arc).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let seg = envelope::verify_segre(sol.envelope(), &arc, &mut rng).unwrap();
    ok &= sol.unique && !sol.envelope().is_zero() && segre_2_to_5(&seg);

    let mut found = Vec::new();
    for cand in arcs::enumerate_candidates(3, 49) {
        if !cand.q_odd || !cand.above_two_thirds {
            continue;
        }
        let ctx = TowerContext::build(cand.p, cand.h).unwrap();
        if !arcs::singer_orbit(&ctx, cand.k).unwrap().is_arc {
            continue;
        }
        let start = Instant::now();
        let r = workbench::run(&RunConfig::new(Command::Envelope {
            q: cand.q,
            k: cand.k,
            genus: false,
        }));
        slowest = slowest.max(start.elapsed());
        let seg: envelope::SegreReport = serde_json::from_value(r.result["segre"].clone()).unwrap_or_default();
        ok &= r.exit_code == 0 && segre_2_to_5(&seg) && u(&r.result["nullspace_dimension"]) == 1;
        found.push(format!("({},{})", cand.q, cand.k));
    }
    ok &= slowest < Duration::from_secs(600);
    line(
        6,
        ok,
        &format!(
            "conic 6-arc in PG(2,5) and Singer arcs {} with q <= 49: nonzero envelope, degree 2t, tangents on it with double contact, no secant on it, nullspace dimension 1; exact; slowest {:.1}s (< 600s)",
            found.join(" "),
            slowest.as_secs_f64()
        ),
    );
    if !ok {
        failures.push(6);
    }
}

fn affine(f: &Gf, terms: &[([u32; 2], i64)]) -> SparsePoly {
    SparsePoly::from_terms(2, terms.iter().map(|(e, c)| (e.to_vec(), f.from_i64(*c))), f)
}

fn delta_criterion(failures: &mut Vec<u32>) {
    let f = Gf::prime(7).unwrap();
    let node = affine(&f, &[([0, 2], 1), ([2, 0], -1), ([3, 0], -1)]);
    let cusp = affine(&f, &[([0, 2], 1), ([3, 0], -1)]);
    let tacnode = affine(&f, &[([0, 2], 1), ([4, 0], -1)]);
    let quartic = affine(&f, &[([4, 0], 1), ([0, 4], 1), ([0, 0], 1)]);
    let d = |g: &SparsePoly| singular::delta_invariant(g, Elem::ZERO, Elem::ZERO, &f).ok();
    let g = |g: &SparsePoly| singular::delta_genus(g, &f).ok().map(|x| x.0);
    let got = [d(&node), d(&cusp), d(&tacnode)];
    let genera = [g(&quartic), g(&node)];
    let ok = got == [Some(1), Some(1), Some(2)] && genera == [Some(3), Some(0)];
    line(
        7,
        ok,
        &format!("delta(node, cusp, tacnode) = {got:?} (want 1, 1, 2); genus(smooth quartic, nodal cubic) = {genera:?} (want 3, 0); exact"),
    );
    if !ok {
        failures.push(7);
    }
}

fn determinism_criterion(failures: &mut Vec<u32>) {
    let configs = [
        RunConfig::new(Command::Genus {
            field: "7".into(),
            t: 5,
            eps1: "1".into(),
            eps2: "1".into(),
            c: "3".into(),
            method: Method::All,
        }),
        curve_config(4, 5, 1, CurveCheck::All),
        RunConfig::new(Command::Envelope { q: 25, k: 21, genus: true }),
        RunConfig::new(Command::Grid {
            t: vec![3, 4],
            p: vec![5, 11],
            workers: 3,
            method: Method::All,
        }),
        RunConfig::new(Command::Enumerate { q_lo: 2, q_hi: 60 }),
    ];
    let mut ok = true;
    for cfg in &configs {
        let first = workbench::run(cfg).to_json_string();
        let persisted = RunConfig::from_json_str(&first).unwrap();
        let second = workbench::run(&persisted).to_json_string();
        ok &= first == second;
    }
    line(
        8,
        ok,
        &format!("{} persisted configs re-run to byte-identical reports", configs.len()),
    );
    if !ok {
        failures.push(8);
    }
}

/// Criteria that cannot hold as stated. At t = 3 the family has
/// 2t-2 = t+1, so x^4 and x y^3 share total degree 4 (and x- and y-degree
/// 2 repeat); the one-term lemma does not hold there. t = 3 only arises
/// from (q, k) = (4, 3), outside the genus theorem's bound.
const EXPECTED_FAILURES: [u32; 1] = [3];

#[test]
fn acceptance() {
    let mut failures = Vec::new();
    let ran = genus_criteria(&mut failures);
    lemma_criterion(&ran, &mut failures);
    eta_criterion(&ran, &mut failures);
    singer_criterion(&mut failures);
    envelope_criterion(&mut failures);
    delta_criterion(&mut failures);
    determinism_criterion(&mut failures);
    let _ = writeln!(
        std::io::stderr(),
        "acceptance: failed {failures:?}, expected failures {EXPECTED_FAILURES:?}"
    );
    assert_eq!(failures, EXPECTED_FAILURES, "failed criteria differ from the expected set");
}
