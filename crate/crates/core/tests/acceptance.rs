//! Acceptance suite: one line per criterion; exits nonzero if any criterion fails.
//!
//! Runs without the test harness so the lines are always printed.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use toroidal_core::config::{Family, SweepConfig};
use toroidal_core::report::{RelationReport, Status};
use toroidal_core::suite::{self, render_json_lines, Target};
use toroidal_core::Scalar;

struct Outcome {
    id: u8,
    title: &'static str,
    pass: bool,
    detail: String,
}

fn preset(name: &str) -> SweepConfig {
    SweepConfig::preset(name).unwrap()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn with_prefix<'a>(reports: &'a [RelationReport], prefixes: &[&str]) -> Vec<&'a RelationReport> {
    reports.iter().filter(|r| prefixes.iter().any(|p| r.relation.starts_with(p))).collect()
}

#[derive(Default)]
struct Counts {
    pass: usize,
    fail: usize,
    skipped: usize,
    first_fail: Option<String>,
}

impl Counts {
    fn of(reports: &[&RelationReport]) -> Counts {
        let mut c = Counts::default();
        for r in reports {
            match r.status() {
                Status::Pass => c.pass += 1,
                Status::Skipped => c.skipped += 1,
                Status::Fail => {
                    c.fail += 1;
                    if c.first_fail.is_none() {
                        c.first_fail = Some(format!("{} {:?} {} modes {:?}", r.relation, r.indices, r.probe, r.modes));
                    }
                }
            }
        }
        c
    }

    fn clean(&self) -> bool {
        self.fail == 0 && self.pass > 0
    }

    fn describe(&self) -> String {
        let mut s = format!("{} pass, {} fail, {} skipped", self.pass, self.fail, self.skipped);
        if let Some(f) = &self.first_fail {
            s.push_str(&format!("; first failure {}", f));
        }
        s
    }
}

/// Distinct passing probes per relation id.
fn passing_probes(reports: &[&RelationReport]) -> BTreeMap<String, usize> {
    let mut m: BTreeMap<String, BTreeSet<&str>> = BTreeMap::new();
    for r in reports {
        let e = m.entry(r.relation.clone()).or_default();
        if r.status() == Status::Pass {
            e.insert(&r.probe);
        }
    }
    m.into_iter().map(|(k, v)| (k, v.len())).collect()
}

fn criterion_1() -> Outcome {
    let cfg = preset("poly");
    let shape = cfg.n == 4 && cfg.l == 2 && cfg.q == Scalar::int(2) && cfg.d == Scalar::int(3) && cfg.window == 8;
    let (reports, t) = timed(|| suite::hecke_reports(&cfg).unwrap());
    let all = with_prefix(&reports, &["hecke.", "q.", "lemma."]);
    let counts = Counts::of(&all);
    let probes = passing_probes(&all);
    let thin: Vec<_> = probes.iter().filter(|(_, &n)| n < 50).map(|(k, n)| format!("{}={}", k, n)).collect();
    let lemmas = probes.keys().filter(|k| k.starts_with("lemma.")).count();

    let neg = SweepConfig { negative_control: true, ..cfg };
    let neg_reports = suite::hecke_reports(&neg).unwrap();
    let caught = neg_reports.iter().any(|r| r.status() == Status::Fail);

    let pass = shape && counts.clean() && thin.is_empty() && lemmas >= 2 && caught && t < Duration::from_secs(120);
    Outcome {
        id: 1,
        title: "Hecke relations on poly",
        pass,
        detail: format!(
            "{} relation ids, {}; under 50 probes: [{}]; negative control {}; {:.2}s",
            probes.len(),
            counts.describe(),
            thin.join(" "),
            if caught { "fails as required" } else { "NOT caught" },
            t.as_secs_f64()
        ),
    }
}

/// Every ordered vertex pair appears for the two-vertex relation families.
fn all_pairs_covered(reports: &[&RelationReport], n: usize) -> bool {
    ["current.e-e", "current.e-f", "current.f-f", "current.k-e", "current.k-f"].iter().all(|id| {
        let pairs: BTreeSet<_> = reports.iter().filter(|r| r.relation == *id).map(|r| r.indices[..2].to_vec()).collect();
        (0..=n as i64).all(|i| (0..=n as i64).all(|j| pairs.contains(&vec![i, j])))
    })
}

fn criterion_2() -> Outcome {
    let cfg = preset("l1");
    let shape = cfg.n == 3 && cfg.l == 1 && cfg.q == Scalar::int(2) && cfg.d == Scalar::int(2);
    let shape = shape && cfg.family == Family::L1 && cfg.a == Scalar::int(5) && cfg.b == Scalar::int(7) && cfg.modes >= 3;
    let (reports, t) = timed(|| suite::toroidal_reports(&cfg).unwrap());
    let cur = with_prefix(&reports, &["current."]);
    let counts = Counts::of(&cur);
    let pairs = all_pairs_covered(&cur, cfg.n);
    let pass = shape && counts.clean() && counts.skipped == 0 && pairs && t < Duration::from_secs(60);
    Outcome {
        id: 2,
        title: "current relations on l1, |k| <= 3",
        pass,
        detail: format!("{}; all vertex pairs {}; {:.2}s", counts.describe(), pairs, t.as_secs_f64()),
    }
}

fn criterion_3() -> Outcome {
    let cfg = preset("poly");
    let (reports, t) = timed(|| suite::toroidal_reports(&cfg).unwrap());
    let cur = with_prefix(&reports, &["current."]);
    let counts = Counts::of(&cur);
    let total = counts.pass + counts.fail + counts.skipped;
    let valid = (counts.pass + counts.fail) as f64 / total.max(1) as f64;
    let pairs = all_pairs_covered(&cur, cfg.n);
    let pass = cfg.modes >= 2 && counts.clean() && valid >= 0.9 && pairs && t < Duration::from_secs(900);
    Outcome {
        id: 3,
        title: "current relations on poly, |k| <= 2",
        pass,
        detail: format!("{}; {:.1}% budget-valid; all vertex pairs {}; {:.2}s", counts.describe(), 100.0 * valid, pairs, t.as_secs_f64()),
    }
}

struct Runs {
    l1_duality: Vec<RelationReport>,
    poly_duality: Vec<RelationReport>,
    l1_toroidal: Vec<RelationReport>,
    poly_toroidal: Vec<RelationReport>,
}

impl Runs {
    fn new() -> Runs {
        Runs {
            l1_duality: suite::duality_reports(&preset("l1")).unwrap(),
            poly_duality: suite::duality_reports(&preset("poly")).unwrap(),
            l1_toroidal: suite::toroidal_reports(&preset("l1")).unwrap(),
            poly_toroidal: suite::toroidal_reports(&preset("poly")).unwrap(),
        }
    }
}

fn both<'a>(a: &'a [RelationReport], b: &'a [RelationReport], prefixes: &[&str]) -> Vec<&'a RelationReport> {
    let mut v = with_prefix(a, prefixes);
    v.extend(with_prefix(b, prefixes));
    v
}

fn required_ids(reports: &[&RelationReport], ids: &[&str]) -> Vec<String> {
    let seen: BTreeSet<&str> = reports.iter().map(|r| r.relation.as_str()).collect();
    ids.iter().filter(|id| !seen.contains(**id)).map(|s| s.to_string()).collect()
}

fn criterion_4(runs: &Runs) -> Outcome {
    let all = both(&runs.l1_duality, &runs.poly_duality, &["closed."]);
    let counts = Counts::of(&all);
    let missing = required_ids(
        &all,
        &[
            "closed.braid-l1",
            "closed.omega-l1",
            "closed.omega-lemma",
            "closed.e1-mode",
            "closed.k-weight",
            "closed.k-mode-one",
            "closed.wrap-e0",
            "closed.wrap-f0",
            "closed.wrap-k0",
            "closed.k-product",
            "closed.e0-generator",
        ],
    );
    Outcome {
        id: 4,
        title: "closed-form regressions",
        pass: counts.clean() && counts.skipped == 0 && missing.is_empty(),
        detail: format!("{}; missing ids [{}]", counts.describe(), missing.join(" ")),
    }
}

fn criterion_5(runs: &Runs) -> Outcome {
    let all = both(&runs.l1_duality, &runs.poly_duality, &["psi.", "braid."]);
    let counts = Counts::of(&all);
    let missing = required_ids(
        &all,
        &["psi.conjugate", "psi.double", "psi.roundtrip", "braid.t-intertwine", "braid.tau-intertwine", "braid.omega-intertwine", "braid.omega-mode"],
    );
    let roundtrip = with_prefix(&runs.poly_duality, &["psi.roundtrip"]);
    let roundtrip_ok = roundtrip.iter().filter(|r| r.status() == Status::Pass).count() >= 50;
    Outcome {
        id: 5,
        title: "psi conjugation and braid intertwining",
        pass: counts.clean() && counts.skipped == 0 && missing.is_empty() && roundtrip_ok,
        detail: format!("{}; missing ids [{}]; roundtrip on {} vectors", counts.describe(), missing.join(" "), roundtrip.len()),
    }
}

fn criterion_6(runs: &Runs) -> Outcome {
    let prefixes = ["integrable.", "central.", "level."];
    let mut all = both(&runs.l1_toroidal, &runs.poly_toroidal, &prefixes);
    all.extend(both(&runs.l1_duality, &runs.poly_duality, &["central."]));
    let counts = Counts::of(&all);
    let missing = required_ids(
        &all,
        &["integrable.nilpotent-e", "integrable.nilpotent-f", "integrable.weight", "central.k-product", "central.c-one", "level.weights"],
    );
    Outcome {
        id: 6,
        title: "integrability, central charge and level",
        pass: counts.clean() && counts.skipped == 0 && missing.is_empty(),
        detail: format!("{}; missing ids [{}]", counts.describe(), missing.join(" ")),
    }
}

fn criterion_7(runs: &Runs) -> Outcome {
    let cfg = preset("poly");
    let hypotheses = cfg.l + 1 < cfg.n;
    let all = with_prefix(&runs.poly_duality, &["reconstruct."]);
    let counts = Counts::of(&all);
    let missing = required_ids(
        &all,
        &[
            "reconstruct.q-y1",
            "reconstruct.q-yl",
            "reconstruct.theta-shift",
            "reconstruct.y-wrap",
            "reconstruct.e0-k-commute",
            "reconstruct.e0-mode-identity",
            "reconstruct.e0-evaluated",
        ],
    );
    Outcome {
        id: 7,
        title: "reconstruction on poly",
        pass: hypotheses && counts.clean() && counts.skipped == 0 && missing.is_empty(),
        detail: format!("{}; missing ids [{}]", counts.describe(), missing.join(" ")),
    }
}

fn criterion_8() -> Outcome {
    let mut cfgs = vec![preset("l1"), preset("poly")];
    cfgs.push(SweepConfig { negative_control: true, ..preset("poly") });
    let mut differing = vec![];
    let mut bytes = 0;
    for cfg in &cfgs {
        let target = if cfg.negative_control { Target::Hecke } else { Target::All };
        let one = render_json_lines(&suite::run_with_threads(cfg, target, 1).unwrap());
        let four = render_json_lines(&suite::run_with_threads(cfg, target, 4).unwrap());
        bytes += one.len();
        if one != four {
            differing.push(format!("{}{}", cfg.preset, if cfg.negative_control { "+negative" } else { "" }));
        }
    }
    Outcome {
        id: 8,
        title: "determinism across worker counts",
        pass: differing.is_empty(),
        detail: format!("{} bytes compared at 1 and 4 workers; differing [{}]", bytes, differing.join(" ")),
    }
}

fn main() -> ExitCode {
    let mut outcomes = vec![criterion_1(), criterion_2(), criterion_3()];
    let runs = Runs::new();
    outcomes.extend([criterion_4(&runs), criterion_5(&runs), criterion_6(&runs), criterion_7(&runs)]);
    outcomes.push(criterion_8());
    for o in &outcomes {
        println!("criterion {} {}: {} ({})", o.id, if o.pass { "PASS" } else { "FAIL" }, o.title, o.detail);
    }
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    if failed.is_empty() {
        println!("acceptance: all 8 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {:?}", failed);
        ExitCode::FAILURE
    }
}
