//! The ten acceptance criteria, one line each. Runs without the libtest
//! harness so the lines always print; exits nonzero if any criterion fails.
//!
//! Counts, time limits and the approximate residual factor are pinned
//! below and never relaxed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use drazin_core::ToleranceFrame;
use drazin_harness::{run_suite, GeneratorProfile, Status, Suite, VerificationReport, AXIOM_RESIDUAL};
use opspec::{analyze, Format};
use serde_json::{json, Value};

const SEED: u64 = 1;

const FIXTURE_LIMIT: Duration = Duration::from_secs(1);
const AXIOMS_EXACT: u64 = 300;
const AXIOMS_APPROX: u64 = 100;
const AXIOMS_LIMIT: Duration = Duration::from_secs(60);
const RESIDUAL_FACTOR: f64 = 1e-8;
const ORACLE_TRIALS: u64 = 300;
const T1_TRIALS: u64 = 300;
const T2_TRIALS: u64 = 300;
const T2_MIN_SEGMENT_SHARE: f64 = 0.10;
const T3_PAIRS: u64 = 300;
const T5_EXACT: u64 = 200;
const T6_HERMITIAN: u64 = 100;
const DUALITY_LIMIT: Duration = Duration::from_secs(120);
const MERO_TRIALS: u64 = 200;
const MERO_PERTURBED: u64 = 100;
const MERO_FIXTURES: u64 = 3;
const SMT_TRIALS: u64 = 200;
const PROFILE_TRIALS: u64 = 1000;
const PROFILE_LIMIT: Duration = Duration::from_secs(60);

const ST_TS: &str = "
let ST = diag { 0: 1, 1: inf };
let TS = diag { 1: inf };
print poles(ST);
print poles(TS);
assert drazin_spectrum(ST) == {};
assert drazin_spectrum(TS) == {};
";

struct Outcome {
    ok: bool,
    detail: String,
}

fn describe(r: &VerificationReport) -> String {
    let mut s = format!("{} {:?}: {} trials, {} failures, {} errors", r.suite, r.status, r.trials, r.failures.len(), r.errors.len());
    if let Some(f) = r.failures.first() {
        s.push_str(&format!("; first failure: {} on {}", f.assertion, f.instance));
    }
    if let Some(e) = r.errors.first() {
        s.push_str(&format!("; first error: {} on {}", e.message, e.instance));
    }
    s
}

fn suite(s: Suite, trials: u64) -> Result<VerificationReport, String> {
    run_suite(s, trials, &GeneratorProfile::with_seed(SEED)).map_err(|e| e.to_string())
}

fn clean(r: &VerificationReport, expect_trials: u64) -> bool {
    r.status == Status::Pass && r.failures.is_empty() && r.errors.is_empty() && r.trials == expect_trials
}

fn timed(limit: Duration, elapsed: Duration, mut o: Outcome) -> Outcome {
    if elapsed > limit {
        o.ok = false;
        o.detail.push_str(&format!("; took {:.1} s, limit {} s", elapsed.as_secs_f64(), limit.as_secs()));
    }
    o
}

fn from_report(r: Result<VerificationReport, String>, expect_trials: u64) -> Outcome {
    match r {
        Ok(r) => Outcome {
            ok: clean(&r, expect_trials),
            detail: describe(&r),
        },
        Err(e) => Outcome { ok: false, detail: e },
    }
}

fn st_ts_fixture() -> Outcome {
    let r = match analyze(ST_TS, &ToleranceFrame::default(), Format::Json) {
        Ok(r) => r,
        Err(e) => return Outcome { ok: false, detail: e.to_string() },
    };
    let v: Value = serde_json::from_str(&r.output).expect("analyzer emits JSON");
    let poles_st = &v["queries"][0]["value"];
    let poles_ts = &v["queries"][1]["value"];
    let mut problems = Vec::new();
    if *poles_st != json!([{"point": "0", "order": 1}, {"point": "1", "order": 1}]) {
        problems.push(format!("Π(ST) = {poles_st}"));
    }
    if *poles_ts != json!([{"point": "1", "order": 1}]) {
        problems.push(format!("Π(TS) = {poles_ts}"));
    }
    for op in v["operators"].as_array().expect("operators") {
        if op["profile"]["drazin_spectrum"] != json!([]) {
            problems.push(format!("σ_DR({}) = {}", op["name"], op["profile"]["drazin_spectrum"]));
        }
    }
    let away_from_0: Vec<&Value> = poles_st.as_array().into_iter().flatten().filter(|p| p["point"] != "0").collect();
    let ts: Vec<&Value> = poles_ts.as_array().into_iter().flatten().collect();
    if away_from_0 != ts {
        problems.push("Π(ST)∖{0} ≠ Π(TS)∖{0}".into());
    }
    if r.failed > 0 {
        problems.push(format!("{} analyzer assertion(s) failed", r.failed));
    }
    let fixture = suite(Suite::Fixtures, 1);
    let fixture_ok = fixture.as_ref().is_ok_and(|f| clean(f, 1));
    if !fixture_ok {
        problems.push(match fixture {
            Ok(f) => describe(&f),
            Err(e) => e,
        });
    }
    Outcome {
        ok: problems.is_empty(),
        detail: if problems.is_empty() {
            "Π(ST) = {0, 1} (orders 1, 1), Π(TS) = {1}, σ_DR(ST) = σ_DR(TS) = ∅".into()
        } else {
            problems.join("; ")
        },
    }
}

fn axioms() -> Outcome {
    if AXIOM_RESIDUAL != RESIDUAL_FACTOR {
        return Outcome {
            ok: false,
            detail: format!("suite residual factor {AXIOM_RESIDUAL:e} differs from the pinned {RESIDUAL_FACTOR:e}"),
        };
    }
    let r = suite(Suite::Axioms, AXIOMS_EXACT);
    let mut o = from_report(r.clone(), AXIOMS_EXACT + AXIOMS_APPROX);
    if let Ok(r) = r {
        if r.counter("approx_trials") != AXIOMS_APPROX {
            o.ok = false;
            o.detail.push_str(&format!("; {} approx trials, want {AXIOMS_APPROX}", r.counter("approx_trials")));
        }
    }
    o
}

fn t2() -> Outcome {
    let r = suite(Suite::T2, T2_TRIALS);
    let mut o = from_report(r.clone(), T2_TRIALS);
    if let Ok(r) = r {
        let seg = r.counter("segment_trials");
        let share = seg as f64 / T2_TRIALS as f64;
        o.detail.push_str(&format!("; segments in {seg} trials ({:.0}%)", share * 100.0));
        if share < T2_MIN_SEGMENT_SHARE {
            o.ok = false;
        }
    }
    o
}

fn dualities() -> Outcome {
    let a = suite(Suite::T5, T5_EXACT);
    let b = suite(Suite::T6, T6_HERMITIAN);
    let (oa, ob) = (from_report(a, T5_EXACT), from_report(b, T6_HERMITIAN));
    Outcome {
        ok: oa.ok && ob.ok,
        detail: format!("{}; {}", oa.detail, ob.detail),
    }
}

fn main() -> ExitCode {
    type Check = (&'static str, Option<Duration>, fn() -> Outcome);
    let checks: [Check; 10] = [
        ("ST/TS shift fixture", Some(FIXTURE_LIMIT), st_ts_fixture),
        ("Drazin axioms", Some(AXIOMS_LIMIT), axioms),
        ("oracle equivalence", None, || from_report(suite(Suite::Oracle, ORACLE_TRIALS), ORACLE_TRIALS)),
        ("algebraic equivalence", None, || from_report(suite(Suite::T1, T1_TRIALS), T1_TRIALS)),
        ("countability", None, t2),
        ("Drazin spectra of ab and ba", None, || from_report(suite(Suite::T3, T3_PAIRS), T3_PAIRS)),
        ("multiplication-operator dualities", Some(DUALITY_LIMIT), dualities),
        ("meromorphic suite", None, || {
            from_report(suite(Suite::Mero, MERO_TRIALS), MERO_FIXTURES + MERO_TRIALS + MERO_PERTURBED)
        }),
        ("spectral mapping", None, || from_report(suite(Suite::Smt, SMT_TRIALS), SMT_TRIALS)),
        ("profile coherence fuzz", Some(PROFILE_LIMIT), || {
            from_report(suite(Suite::Profile, PROFILE_TRIALS), PROFILE_TRIALS)
        }),
    ];
    let mut failed = 0;
    for (k, (name, limit, run)) in checks.iter().enumerate() {
        let t = Instant::now();
        let mut o = run();
        let elapsed = t.elapsed();
        if let Some(limit) = limit {
            o = timed(*limit, elapsed, o);
        }
        let mark = if o.ok { "PASS" } else { "FAIL" };
        println!("[{mark}] {:>2}. {name} ({:.2} s): {}", k + 1, elapsed.as_secs_f64(), o.detail);
        failed += usize::from(!o.ok);
    }
    println!("acceptance: {} of {} criteria passed", checks.len() - failed, checks.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
