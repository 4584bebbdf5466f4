//! Run configurations, report documents and exit codes for the CLI.
//!
//! A [`RunConfig`] fully determines its [`Report`]: the same config (seed
//! included) serializes to the same bytes. Exit code 0 means every check
//! passed, 1 is a usage or input error, 2 means a mathematical check or a
//! cross-oracle comparison failed.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arcs::{self, Candidate};
use crate::arith;
use crate::curvefam::{self, CanonicalCurve};
use crate::envelope::{self, EnvelopeJson};
use crate::error::{Error, Result};
use crate::fields::{self, Elem, Embedding, Gf, TowerContext};
use crate::genus::{self, Method};
use crate::plane;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_DISAGREE: i32 = 2;

/// Largest projective plane whose Singer order `fields` verifies.
const SINGER_ORDER_CAP: u64 = 1 << 22;
/// Upper end of the prime-power scan in the congruence check.
const CONGRUENCE_Q_MAX: u64 = 1000;

fn default_seed() -> u64 {
    1
}

fn default_eps() -> String {
    "1".into()
}

fn default_workers() -> usize {
    1
}

fn default_method() -> Method {
    Method::All
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveCheck {
    #[default]
    All,
    Lemmas,
    Eta,
}

impl CurveCheck {
    pub fn parse(s: &str) -> Result<CurveCheck> {
        match s {
            "all" => Ok(CurveCheck::All),
            "lemmas" => Ok(CurveCheck::Lemmas),
            "eta" => Ok(CurveCheck::Eta),
            _ => Err(Error::InvalidArgument(format!("unknown check {s}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    Fields {
        field: String,
    },
    Arc {
        q: u64,
        k: u64,
        #[serde(default)]
        check_complete: bool,
    },
    Envelope {
        q: u64,
        k: u64,
        #[serde(default)]
        genus: bool,
    },
    Curve {
        field: String,
        t: u32,
        #[serde(default = "default_eps")]
        eps1: String,
        #[serde(default = "default_eps")]
        eps2: String,
        c: String,
        #[serde(default)]
        check: CurveCheck,
    },
    Genus {
        field: String,
        t: u32,
        #[serde(default = "default_eps")]
        eps1: String,
        #[serde(default = "default_eps")]
        eps2: String,
        c: String,
        #[serde(default = "default_method")]
        method: Method,
    },
    Enumerate {
        #[serde(default)]
        q_lo: u64,
        q_hi: u64,
    },
    Grid {
        t: Vec<u32>,
        p: Vec<u64>,
        #[serde(default = "default_workers")]
        workers: usize,
        #[serde(default = "default_method")]
        method: Method,
    },
}

/// Everything needed to reproduce a report. `out` and `verbose` only
/// affect where and how loudly the report is written, so they are not
/// persisted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: Command,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub timings: bool,
    #[serde(skip)]
    pub out: Option<String>,
    #[serde(skip)]
    pub verbose: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> RunConfig {
        RunConfig {
            command,
            seed: default_seed(),
            timings: false,
            out: None,
            verbose: false,
        }
    }

    /// Accepts a bare config or a previously written report.
    pub fn from_json_str(s: &str) -> Result<RunConfig> {
        let v: Value = serde_json::from_str(s)?;
        let v = match v.get("config") {
            Some(c) if v.get("exit_code").is_some() => c.clone(),
            _ => v,
        };
        Ok(serde_json::from_value(v)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: RunConfig,
    /// `"ok"`, `"disagreement"` or `"error"`.
    pub status: String,
    pub exit_code: i32,
    pub result: Value,
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Exit code for an error: 2 when a mathematical check failed, else 1.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Disagreement(_)
        | Error::PropertyFailed(_)
        | Error::Inconsistent(_)
        | Error::FamilyMismatch(_)
        | Error::NotSquareFree(_)
        | Error::TruncationInsufficient(_)
        | Error::EmptyNullspace => EXIT_DISAGREE,
        _ => EXIT_INPUT,
    }
}

fn status_for(code: i32) -> &'static str {
    match code {
        EXIT_OK => "ok",
        EXIT_DISAGREE => "disagreement",
        _ => "error",
    }
}

/// Collects named timings when asked to.
struct Timer {
    on: bool,
    origin: Instant,
    start: Instant,
    laps: BTreeMap<String, f64>,
}

impl Timer {
    fn new(on: bool) -> Timer {
        Timer {
            on,
            origin: Instant::now(),
            start: Instant::now(),
            laps: BTreeMap::new(),
        }
    }

    fn lap(&mut self, name: &str) {
        if self.on {
            let now = Instant::now();
            self.laps.insert(name.into(), (now - self.start).as_secs_f64() * 1e3);
            self.start = now;
        }
    }

    fn finish(mut self) -> BTreeMap<String, f64> {
        self.laps.insert("total".into(), self.origin.elapsed().as_secs_f64() * 1e3);
        self.laps
    }
}

/// Outcome of a command body: the result document and whether all its
/// checks passed.
struct Outcome {
    result: Value,
    ok: bool,
}

pub fn run(config: &RunConfig) -> Report {
    let mut timer = Timer::new(config.timings);
    let out = match &config.command {
        Command::Fields { field } => run_fields(field),
        Command::Arc { q, k, check_complete } => run_arc(*q, *k, *check_complete),
        Command::Envelope { q, k, genus } => run_envelope(*q, *k, *genus, config.seed, &mut timer),
        Command::Curve {
            field,
            t,
            eps1,
            eps2,
            c,
            check,
        } => parse_curve(field, *t, eps1, eps2, c).and_then(|cc| run_curve(&cc, *check)),
        Command::Genus {
            field,
            t,
            eps1,
            eps2,
            c,
            method,
        } => parse_curve(field, *t, eps1, eps2, c).and_then(|cc| run_genus(&cc, *method, config.seed)),
        Command::Enumerate { q_lo, q_hi } => run_enumerate(*q_lo, *q_hi),
        Command::Grid { t, p, workers, method } => run_grid(t, p, *workers, *method, config.seed, config.verbose),
    };
    let (result, error, code) = match out {
        Ok(o) => (o.result, None, if o.ok { EXIT_OK } else { EXIT_DISAGREE }),
        Err(e) => (Value::Null, Some(e.to_string()), exit_code_for(&e)),
    };
    Report {
        config: config.clone(),
        status: status_for(code).into(),
        exit_code: code,
        result,
        error,
        timings_ms: config.timings.then(|| timer.finish()),
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn tower_for(q: u64) -> Result<TowerContext> {
    let (p, h) = arith::prime_power(q).ok_or_else(|| Error::InvalidArgument(format!("q = {q} is not a prime power")))?;
    TowerContext::build(p, h)
}

fn run_fields(spec: &str) -> Result<Outcome> {
    let base = Gf::parse(spec)?;
    let (ext, _) = fields::extend(&base, 3)?;
    let ctx = TowerContext::from_fields(base, ext)?;
    let n = ctx.plane_size();
    let c = plane::singer_matrix(&ctx);
    let order = if n <= SINGER_ORDER_CAP { Some(c.projective_order(n)?) } else { None };
    let lifted = c.lift(ctx.embedding())?;
    let d = plane::eigen_frame(&ctx).conjugate(&lifted);
    let w = ctx.omega();
    let expected = [w, ctx.frobenius(w, 1), ctx.frobenius(w, 2)];
    let diag_ok = d.is_diagonal() && (0..3).all(|i| d.matrix()[i][i] == expected[i]);
    let order_ok = order.is_none_or(|o| o == n);
    Ok(Outcome {
        result: json!({
            "tower": ctx.summary(),
            "q": ctx.q(),
            "plane_size": n,
            "singer_matrix": c.to_json(),
            "singer_order": order,
            "eigen_frame_diagonal": diag_ok,
        }),
        ok: diag_ok && order_ok,
    })
}

fn candidate(q: u64, k: u64) -> Option<Candidate> {
    arcs::enumerate_candidates(q, q).into_iter().find(|c| c.k == k)
}

fn run_arc(q: u64, k: u64, check_complete: bool) -> Result<Outcome> {
    let ctx = tower_for(q)?;
    let mut arc = arcs::singer_orbit(&ctx, k)?;
    if check_complete && arc.is_arc {
        arc.is_complete = Some(arcs::is_complete(&arc)?);
    }
    Ok(Outcome {
        result: json!({
            "arc": arc.to_json(),
            "hypotheses": candidate(q, k),
        }),
        ok: true,
    })
}

fn run_envelope(q: u64, k: u64, with_genus: bool, seed: u64, timer: &mut Timer) -> Result<Outcome> {
    let ctx = tower_for(q)?;
    if q.is_multiple_of(2) {
        return Err(Error::UnsupportedCharacteristic(2));
    }
    let arc = arcs::singer_orbit(&ctx, k)?;
    if !arc.is_arc {
        let (i, j, l) = arcs::first_collinear_triple(&arc.field, &arc.points).expect("not an arc");
        return Err(Error::NotAnArc(format!("points {i}, {j}, {l} are collinear")));
    }
    let hyp = candidate(q, k);
    let above = hyp.as_ref().is_some_and(|c| c.above_two_thirds);
    let sol = envelope::interpolate_envelope(&arc)?;
    timer.lap("interpolate");
    let env = sol.envelope();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let segre = envelope::verify_segre(env, &arc, &mut rng)?;
    timer.lap("segre");
    let mut ok = segre.all_ok() && (sol.unique || !above);
    let mut result = json!({
        "hypotheses": hyp,
        "arc": { "q": q, "k": k, "e": arc.e, "t": arc.t() },
        "nullspace_dimension": sol.basis.len(),
        "conditions": sol.conditions,
        "unknowns": sol.unknowns,
        "rank": sol.rank,
        "envelope": EnvelopeJson::new(env, &arc.field, "dual", sol.unique),
        "segre": segre,
    });

    let t = arc.t();
    if sol.unique && t >= 3 {
        let (h, frame) = match envelope::to_canonical_frame(env, &ctx, k) {
            Ok(x) => x,
            Err(e) => {
                result["canonical_error"] = json!(e.to_string());
                return Ok(Outcome { result, ok: false });
            }
        };
        result["frame"] = to_value(&frame);
        let Some(hq) = envelope::descend(&h, &ctx) else {
            result["canonical_error"] = json!("canonical form is not defined over the base field");
            return Ok(Outcome { result, ok: false });
        };
        let f = ctx.base();
        let fm = envelope::match_canonical_family(&hq, t as u32, f)?;
        result["canonical"] = to_value(&EnvelopeJson::new(&hq, f, "canonical", sol.unique));
        result["family"] = to_value(&fm);
        ok &= fm.matched || !above;
        timer.lap("canonical");
        if with_genus && fm.matched {
            let parse = |s: &Option<String>| f.parse_elem(s.as_deref().unwrap_or("1"));
            let cc = CanonicalCurve::new(f, t as u32, parse(&fm.eps1)?, parse(&fm.eps2)?, parse(&fm.c)?)?;
            match genus::genus(&cc, Method::All, seed) {
                Ok(r) => {
                    ok &= r.agreement;
                    result["genus"] = to_value(&r);
                }
                Err(e) if exit_code_for(&e) == EXIT_DISAGREE => return Err(e),
                Err(e) => result["genus_skipped"] = json!(e.to_string()),
            }
            timer.lap("genus");
        }
    }
    Ok(Outcome { result, ok })
}

fn parse_curve(field: &str, t: u32, eps1: &str, eps2: &str, c: &str) -> Result<CanonicalCurve> {
    let f = Gf::parse(field)?;
    CanonicalCurve::new(&f, t, f.parse_elem(eps1)?, f.parse_elem(eps2)?, f.parse_elem(c)?)
}

fn curve_hypotheses(cc: &CanonicalCurve) -> Result<Value> {
    let p = cc.field.characteristic();
    Ok(json!({
        "p_odd": p != 2,
        "c_nonzero": !cc.c.is_zero(),
        "p_coprime_to_n": !cc.big_n().is_multiple_of(p),
        "absolutely_irreducible": cc.is_absolutely_irreducible()?,
    }))
}

/// `(q, k)` with `q <= CONGRUENCE_Q_MAX` a prime power, `k | q^2+q+1` and
/// `t = q - k + 2`.
fn congruence_pairs(t: u32) -> Vec<(u64, u64)> {
    let t = u64::from(t);
    (t.saturating_sub(1).max(2)..=CONGRUENCE_Q_MAX)
        .filter(|&q| arith::prime_power(q).is_some() && q + 2 > t)
        .map(|q| (q, q + 2 - t))
        .filter(|&(q, k)| k >= 3 && (q * q + q + 1) % k == 0)
        .collect()
}

fn lemma_checks(cc: &CanonicalCurve) -> Result<(Value, bool)> {
    let f = &cc.field;
    let g = cc.equation();
    let one_term = curvefam::check_one_term_per_degree(&g);
    let sym = curvefam::check_coefficient_symmetry(&g, cc.n(), f);
    let (sym_ok, sym_json) = match &sym {
        Ok(eps) => {
            let ok = f.pow(*eps, 3) == Elem::ONE && *eps == cc.eps1;
            (ok, json!({ "holds": ok, "eps": f.format_elem(*eps) }))
        }
        Err(v) => (
            false,
            json!({ "holds": false, "term": v.term, "image": v.image, "reason": v.reason }),
        ),
    };
    let pairs = congruence_pairs(cc.t);
    let big_n = cc.big_n();
    let divisors: Vec<u64> = arith::divisors(big_n).into_iter().filter(|&k| k >= 2).collect();
    let t = u64::from(cc.t);
    let cong_pairs = pairs.iter().all(|&(_, k)| curvefam::check_congruence(&g, k, t));
    let cong_divs = divisors.iter().all(|&k| curvefam::check_congruence(&g, k, t));
    let mu = curvefam::mu_invariant(&cc.homogeneous(), f)?;
    let ok = one_term && sym_ok && cong_pairs && cong_divs && mu;
    Ok((
        json!({
            "one_term_per_degree": one_term,
            "coefficient_symmetry": sym_json,
            "congruence": {
                "holds": cong_pairs && cong_divs,
                "pairs": pairs,
                "divisors_of_n": divisors,
            },
            "mu_invariant": mu,
        }),
        ok,
    ))
}

fn eta_checks(cc: &CanonicalCurve) -> Result<(Value, bool)> {
    let f = &cc.field;
    let n = cc.big_n();
    let roots = match fields::nth_roots_of_unity(f, n) {
        Ok(r) => r,
        Err(e @ Error::CharacteristicDivides { .. }) => {
            return Ok((json!({ "skipped": e.to_string() }), true));
        }
        Err(e) => return Err(e),
    };
    let big = &roots.field;
    let emb = Embedding::new(f, big)?;
    let g = cc.equation().map_coeffs(|a| emb.embed(a));
    let mut distinct = roots.roots.clone();
    distinct.dedup();
    let mut failures = Vec::new();
    for &u in &roots.roots {
        if !curvefam::eta_invariant(&g, u, cc.t, big)? {
            failures.push(big.format_elem(u));
        }
    }
    let count_ok = distinct.len() as u64 == n && roots.roots.iter().all(|&u| big.pow(u, n) == Elem::ONE);
    let ok = count_ok && failures.is_empty();
    Ok((
        json!({
            "n": n,
            "splitting_field": big.spec_string(),
            "extension_degree": roots.extension_degree,
            "distinct_roots": distinct.len(),
            "all_invariant": failures.is_empty(),
            "failures": failures,
        }),
        ok,
    ))
}

fn run_curve(cc: &CanonicalCurve, check: CurveCheck) -> Result<Outcome> {
    let mut result = json!({
        "curve": cc.to_json(),
        "hypotheses": curve_hypotheses(cc)?,
    });
    let mut ok = true;
    if matches!(check, CurveCheck::All | CurveCheck::Lemmas) {
        let (v, good) = lemma_checks(cc)?;
        result["lemmas"] = v;
        ok &= good;
    }
    if matches!(check, CurveCheck::All | CurveCheck::Eta) {
        let (v, good) = eta_checks(cc)?;
        result["eta"] = v;
        ok &= good;
    }
    Ok(Outcome { result, ok })
}

fn run_genus(cc: &CanonicalCurve, method: Method, seed: u64) -> Result<Outcome> {
    let r = genus::genus(cc, method, seed)?;
    Ok(Outcome {
        ok: r.agreement,
        result: to_value(&r),
    })
}

fn run_enumerate(q_lo: u64, q_hi: u64) -> Result<Outcome> {
    if q_lo > q_hi {
        return Err(Error::InvalidArgument(format!("empty range {q_lo}..={q_hi}")));
    }
    let all = arcs::enumerate_candidates(q_lo, q_hi);
    let cyclic: Vec<&Candidate> = all.iter().filter(|c| c.above_two_thirds).collect();
    Ok(Outcome {
        result: json!({
            "candidates": all,
            "cyclic": cyclic,
        }),
        ok: true,
    })
}

/// One grid point: `(t, p, c)` with `c` as an integer in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct GridKey {
    t: u32,
    p: u64,
    c: u64,
}

/// `c = 1` for the first type and `c = p - 2` (so `c^2 = 4`) for the second.
fn grid_points(ts: &[u32], ps: &[u64]) -> Vec<GridKey> {
    let mut keys = Vec::new();
    for &t in ts {
        for &p in ps {
            let mut cs = vec![1, p.saturating_sub(2)];
            cs.dedup();
            for c in cs {
                keys.push(GridKey { t, p, c });
            }
        }
    }
    keys.sort();
    keys.dedup();
    keys
}

fn grid_instance(key: &GridKey, method: Method, seed: u64) -> (Value, i32) {
    let entry = |status: &str, extra: Value| {
        let mut v = json!({ "t": key.t, "p": key.p, "c": key.c, "status": status });
        if let (Value::Object(m), Value::Object(x)) = (&mut v, extra) {
            m.extend(x);
        }
        v
    };
    let cc = match CanonicalCurve::simple(key.p, key.t, key.c as i64) {
        Ok(cc) => cc,
        Err(e) => return (entry("error", json!({ "error": e.to_string() })), exit_code_for(&e)),
    };
    if key.p == 2 {
        return (entry("skipped", json!({ "reason": "p = 2" })), EXIT_OK);
    }
    if cc.big_n() % key.p == 0 {
        return (entry("skipped", json!({ "reason": format!("p divides t^2-3t+3 = {}", cc.big_n()) })), EXIT_OK);
    }
    match genus::genus(&cc, method, seed) {
        Ok(r) => {
            let code = if r.agreement { EXIT_OK } else { EXIT_DISAGREE };
            (entry(status_for(code), json!({ "report": r })), code)
        }
        Err(Error::Reducible) => (entry("skipped", json!({ "reason": "not absolutely irreducible" })), EXIT_OK),
        Err(e) => {
            let code = exit_code_for(&e);
            (entry(status_for(code), json!({ "error": e.to_string() })), code)
        }
    }
}

fn run_grid(ts: &[u32], ps: &[u64], workers: usize, method: Method, seed: u64, verbose: bool) -> Result<Outcome> {
    if ts.is_empty() || ps.is_empty() {
        return Err(Error::InvalidArgument("grid needs at least one t and one p".into()));
    }
    if let Some(&p) = ps.iter().find(|&&p| !arith::is_prime(p)) {
        return Err(Error::NotPrime(p));
    }
    let keys = grid_points(ts, ps);
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<(Value, i32)>>> = Mutex::new(vec![None; keys.len()]);
    std::thread::scope(|s| {
        for _ in 0..workers.clamp(1, keys.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(key) = keys.get(i) else { break };
                let r = grid_instance(key, method, seed);
                if verbose {
                    eprintln!("grid t={} p={} c={}: {}", key.t, key.p, key.c, r.0["status"]);
                }
                slots.lock().expect("no poisoned workers")[i] = Some(r);
            });
        }
    });
    let done: Vec<(Value, i32)> = slots.into_inner().expect("no poisoned workers").into_iter().flatten().collect();
    let worst = done.iter().map(|(_, c)| *c).max().unwrap_or(EXIT_OK);
    if worst == EXIT_INPUT {
        let msg = done.iter().find(|(_, c)| *c == EXIT_INPUT).map(|(v, _)| v["error"].to_string());
        return Err(Error::InvalidArgument(msg.unwrap_or_default()));
    }
    let count = |s: &str| done.iter().filter(|(v, _)| v["status"] == s).count();
    Ok(Outcome {
        result: json!({
            "instances": done.iter().map(|(v, _)| v.clone()).collect::<Vec<_>>(),
            "passed": count("ok"),
            "skipped": count("skipped"),
            "failed": done.len() - count("ok") - count("skipped"),
        }),
        ok: worst == EXIT_OK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trip() {
        let cfg = RunConfig::new(Command::Genus {
            field: "7".into(),
            t: 3,
            eps1: "1".into(),
            eps2: "1".into(),
            c: "3".into(),
            method: Method::All,
        });
        let s = serde_json::to_string(&cfg).unwrap();
        assert!(s.contains("\"command\":\"genus\""));
        assert_eq!(RunConfig::from_json_str(&s).unwrap(), cfg);
        let rep = run(&cfg);
        assert_eq!(rep.exit_code, EXIT_OK);
        assert_eq!(RunConfig::from_json_str(&rep.to_json_string()).unwrap(), cfg);
    }

    #[test]
    fn exit_codes() {
        let bad = run(&RunConfig::new(Command::Arc {
            q: 2,
            k: 5,
            check_complete: false,
        }));
        assert_eq!((bad.exit_code, bad.status.as_str()), (EXIT_INPUT, "error"));
        assert_eq!(exit_code_for(&Error::Disagreement("x".into())), EXIT_DISAGREE);
        assert_eq!(exit_code_for(&Error::Reducible), EXIT_INPUT);
    }

    #[test]
    fn enumerate_small_range_has_no_cyclic_pairs() {
        let r = run(&RunConfig::new(Command::Enumerate { q_lo: 2, q_hi: 10 }));
        assert_eq!(r.exit_code, EXIT_OK);
        assert_eq!(r.result["cyclic"], json!([]));
    }

    #[test]
    fn congruence_pairs_are_consistent() {
        for t in 3..8u32 {
            let n = u64::from(t * t - 3 * t + 3);
            for (q, k) in congruence_pairs(t) {
                assert_eq!(q + 2 - k, u64::from(t));
                assert_eq!(n % k, 0);
            }
        }
    }
}
