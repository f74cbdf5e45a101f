//! One PASS/FAIL line per primary acceptance criterion.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use common::*;
use ctprof::run_captured;
use ctprof::server::{router, AppState};
use ctprof_core::analyzer::{analyze, diff_profiles, ReasonKind, Status};
use ctprof_core::catalog::{Atom, Competency, CompetencyRoot, Dimension};
use ctprof_core::corpus::{
    bundled_corpus, characteristics_taxonomy, competencies_taxonomy, load_corpus,
};
use ctprof_core::descriptor::{
    derive_characteristics, parse_descriptor, serialize_descriptor, validate_descriptor,
};
use ctprof_core::designer::{design, enumerate_solutions, DesignQuery};
use ctprof_core::profile::{CharacteristicProfile, PartialProfile, ProfileSpace};
use ctprof_core::ruleset::{default_ruleset, default_ruleset_text};
use ctprof_core::Domain;
use http_body_util::BodyExt;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use tower::ServiceExt;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture_paths() -> Vec<PathBuf> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(root().join("fixtures"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.to_string_lossy().ends_with(".ctp.json"))
        .collect();
    paths.sort();
    paths
}

fn fixture(name: &str) -> CharacteristicProfile {
    bundled_corpus().entry(name).unwrap().profile
}

fn leaves(root: CompetencyRoot) -> impl Iterator<Item = Competency> {
    Competency::ALL
        .iter()
        .copied()
        .filter(move |c| c.root() == root)
}

fn fixture_round_trip() -> Outcome {
    let start = Instant::now();
    let paths = fixture_paths();
    ensure(paths.len() == 15, || format!("{} fixtures", paths.len()))?;
    for path in &paths {
        let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
        let d = parse_descriptor(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        let issues = validate_descriptor(&d);
        ensure(issues.is_empty(), || {
            format!("{}: {issues:?}", path.display())
        })?;
        let again = parse_descriptor(&serialize_descriptor(&d)).map_err(|e| e.to_string())?;
        ensure(again == d, || {
            format!("{} is not a fixed point", path.display())
        })?;
    }
    ensure(start.elapsed().as_secs_f64() < 1.0, || {
        format!("took {:?}", start.elapsed())
    })
}

fn cat_reproduction() -> Outcome {
    let report = analyze(&fixture("cat"), default_ruleset());
    for c in leaves(CompetencyRoot::Assessment) {
        let r = report.result(c);
        let reset = r
            .reasons
            .iter()
            .any(|x| x.kind == ReasonKind::MissingRequired && x.atoms == vec![Atom::Resettable]);
        ensure(r.status == Status::Blocked && reset, || {
            format!("{c} not blocked by resettable")
        })?;
    }
    for c in [Competency::Conditionals, Competency::Events] {
        let r = report.result(c);
        let missing = r
            .reasons
            .iter()
            .any(|x| x.atoms == vec![Atom::Functionality(c.functionality().unwrap())]);
        ensure(r.status == Status::Blocked && missing, || {
            format!("{c} not blocked by its functionality")
        })?;
    }
    let active: BTreeSet<Competency> = report.activable().into_iter().collect();
    let mut expected: BTreeSet<Competency> = leaves(CompetencyRoot::ProblemSetting).collect();
    expected.extend([
        Competency::Variables,
        Competency::Operators,
        Competency::Sequences,
        Competency::Repetitions,
        Competency::Functions,
        Competency::Parallelism,
    ]);
    ensure(active == expected, || format!("activable set {active:?}"))?;
    let golden = std::fs::read_to_string(
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/cat.json"),
    )
    .map_err(|e| e.to_string())?;
    let out = run_captured(
        [
            "analyze",
            &root().join("fixtures/cat.ctp.json").display().to_string(),
            "--format",
            "json",
        ]
        .map(String::from),
    );
    ensure(out.stdout == golden, || {
        "JSON report differs from golden".into()
    })
}

fn tps_contrast() -> Outcome {
    let board = analyze(&fixture("tps_board"), default_ruleset());
    for c in leaves(CompetencyRoot::Assessment) {
        ensure(!board.is_activable(c), || format!("board activates {c}"))?;
    }
    let pencil = analyze(&fixture("tps_pencil"), default_ruleset());
    for c in [
        Competency::AlgorithmDebugging,
        Competency::ConstraintsValidation,
        Competency::Optimisation,
        Competency::Generalisation,
    ] {
        ensure(pencil.is_activable(c), || format!("pencil blocks {c}"))?;
    }
    ensure(
        !pencil.is_activable(Competency::SystemStateVerification),
        || "pencil activates state verification".into(),
    )
}

fn robotic_taxonomy() -> Outcome {
    let c = bundled_corpus();
    let chars = characteristics_taxonomy(c);
    for (row, want) in [
        ("resettable", 40),
        ("observable", 100),
        ("cardinality:one_to_one", 100),
        ("explicitness:explicit", 80),
        ("constraints:unconstrained", 100),
        ("representation:manifest_written", 100),
    ] {
        let got = chars.percent(row, Domain::Robotic);
        ensure(got == Some(want), || format!("{row}: {got:?} vs {want}"))?;
    }
    let comps = competencies_taxonomy(c, default_ruleset(), false);
    for (row, want) in [
        ("repetitions", 60),
        ("conditionals", 60),
        ("parallelism", 40),
        ("events", 80),
        ("algorithm_debugging", 40),
        ("optimisation", 40),
        ("generalisation", 40),
        ("constraints_validation", 0),
    ] {
        let got = comps.percent(row, Domain::Robotic);
        ensure(got == Some(want), || format!("{row}: {got:?} vs {want}"))?;
    }
    Ok(())
}

fn virtual_collapse() -> Outcome {
    let t = competencies_taxonomy(bundled_corpus(), default_ruleset(), true);
    for (row, want) in [
        ("repetitions", 67),
        ("conditionals", 33),
        ("parallelism", 0),
        ("events", 33),
        ("optimisation", 100),
        ("generalisation", 100),
        ("algorithm_debugging", 67),
    ] {
        let got = t.percent(row, Domain::Virtual);
        ensure(got == Some(want), || format!("{row}: {got:?} vs {want}"))?;
    }
    let recorded = bundled_corpus().manifest.taxonomy_deltas.iter().any(|d| {
        d.domain == Domain::Virtual && d.row == "system_state_verification" && d.collapse_groups
    });
    ensure(recorded, || {
        "state verification deviation not in manifest".into()
    })
}

fn virtual_cat_design() -> Outcome {
    let cat = fixture("cat");
    let text = std::fs::read_to_string(root().join("walkthroughs/virtual_cat.ctp.json"))
        .map_err(|e| e.to_string())?;
    let redesigned = derive_characteristics(&parse_descriptor(&text).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let d = diff_profiles(&cat, &redesigned, default_ruleset());
    let dims = d.changed_dimensions();
    ensure(
        dims == vec![
            Dimension::Resettability,
            Dimension::Constrained,
            Dimension::Representation,
        ],
        || format!("changed {dims:?}"),
    )?;
    let mut develop = analyze(&cat, default_ruleset()).activable();
    develop.extend([Competency::AlgorithmDebugging, Competency::Optimisation]);
    let mut locked = PartialProfile::from_profile(&cat);
    for dim in [
        Dimension::Resettability,
        Dimension::Constrained,
        Dimension::Representation,
    ] {
        locked.unlock(dim);
    }
    let query = DesignQuery {
        develop,
        avoid: BTreeSet::new(),
        locked,
        max_solutions: 1000,
    };
    let s = design(&query, default_ruleset()).map_err(|e| e.to_string())?;
    ensure(s.feasible && !s.profiles.is_empty(), || {
        "no solutions".into()
    })?;
    for r in &s.profiles {
        let ok = r.profile.resettability.is_resettable()
            && r.profile.representation.to_string() == "manifest_written";
        ensure(ok, || format!("unexpected solution {:?}", r.profile))?;
    }
    Ok(())
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let flats = all_flats();
    let rules = oracle_rules(default_ruleset_text());
    ensure(flats.len() == 165_888, || {
        format!("{} profiles", flats.len())
    })?;
    for flat in &flats {
        let report = analyze(&flat.to_profile(Domain::Unplugged), default_ruleset());
        for (c, r) in &report.results {
            let want = oracle_eval(flat, &rules[c.as_str()]);
            ensure(
                r.is_activable() == want.activable && r.support_score == want.supporters.len(),
                || format!("{c} on {flat:?}"),
            )?;
        }
    }
    let config = Config {
        cases: 50,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner =
        TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner
        .run(&query_strategy(), |q| {
            let mut locked = PartialProfile::default();
            for (d, v) in &q.locks {
                locked.set_text(d, v).unwrap();
            }
            let query = DesignQuery {
                develop: q.develop.iter().map(|c| c.parse().unwrap()).collect(),
                avoid: q.avoid.iter().map(|c| c.parse().unwrap()).collect(),
                locked,
                max_solutions: q.max_solutions,
            };
            let got: Vec<_> = enumerate_solutions(&query, default_ruleset())
                .into_iter()
                .map(|r| (r.profile, r.support_total))
                .collect();
            proptest::prop_assert_eq!(got, oracle_design(&q, &flats, &rules));
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    ensure(start.elapsed().as_secs_f64() < 30.0, || {
        format!("took {:?}", start.elapsed())
    })
}

fn support_non_gating() -> Outcome {
    let stripped = default_ruleset()
        .map_rules(|_, r| r.supporters.clear())
        .map_err(|e| e.to_string())?;
    for p in ProfileSpace::full(Domain::Virtual).iter() {
        ensure(
            analyze(&p, default_ruleset()).activable() == analyze(&p, &stripped).activable(),
            || format!("{p:?}"),
        )?;
    }
    Ok(())
}

async fn http(method: &str, uri: &str, body: String) -> (StatusCode, String) {
    let state = AppState {
        rules: Arc::new(default_ruleset().clone()),
        corpus: Arc::new(load_corpus(&root().join("fixtures")).unwrap()),
    };
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .body(Body::from(body))
        .unwrap();
    let resp = router(state, None).oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

fn cli(args: Vec<String>) -> String {
    run_captured(args).stdout
}

async fn transports_agree() -> Outcome {
    for path in fixture_paths() {
        let p = path.display().to_string();
        let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let (status, body) = http("POST", "/api/analyze", text.clone()).await;
        let via_cli = cli(vec![
            "analyze".into(),
            p.clone(),
            "--format".into(),
            "json".into(),
        ]);
        ensure(status == StatusCode::OK && body == via_cli, || {
            format!("analyze differs for {p}")
        })?;

        let profile = derive_characteristics(&parse_descriptor(&text).unwrap()).unwrap();
        let develop: Vec<&str> = analyze(&profile, default_ruleset())
            .activable()
            .iter()
            .map(|c| c.as_str())
            .collect();
        let funcs: Vec<String> = profile
            .functionalities
            .iter()
            .map(|f| f.to_string())
            .collect();
        let query = serde_json::json!({
            "develop": develop,
            "locked": {"domain": profile.domain.as_str(), "functionalities": funcs},
            "max_solutions": 5,
        });
        let (status, body) = http("POST", "/api/design", query.to_string()).await;
        let via_cli = cli([
            "design",
            "--develop",
            &develop.join(","),
            "--lock",
            &format!("domain={}", profile.domain),
            "--lock",
            &format!("functionalities={}", funcs.join(",")),
            "--max-solutions",
            "5",
            "--format",
            "json",
        ]
        .map(String::from)
        .to_vec());
        ensure(status == StatusCode::OK && body == via_cli, || {
            format!("design differs for {p}")
        })?;
    }
    let dir = root().join("fixtures").display().to_string();
    for kind in ["characteristics", "competencies"] {
        for collapse in [false, true] {
            let mut args: Vec<String> = ["corpus", &dir, "--kind", kind, "--format", "json"]
                .map(String::from)
                .to_vec();
            if collapse {
                args.push("--collapse-groups".into());
            }
            let (status, body) = http(
                "GET",
                &format!("/api/corpus/taxonomy?kind={kind}&collapse={collapse}"),
                String::new(),
            )
            .await;
            ensure(status == StatusCode::OK && body == cli(args), || {
                format!("corpus differs for {kind} {collapse}")
            })?;
        }
    }
    Ok(())
}

fn cli_http_equivalence() -> Outcome {
    tokio::runtime::Runtime::new()
        .map_err(|e| e.to_string())?
        .block_on(transports_agree())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("Fixture round-trip", fixture_round_trip),
        ("CAT profile reproduction", cat_reproduction),
        ("TPS contrast", tps_contrast),
        ("Robotic taxonomy, exact", robotic_taxonomy),
        ("Virtual competencies with collapse", virtual_collapse),
        ("CAT to virtual CAT design", virtual_cat_design),
        ("Oracle equivalence", oracle_equivalence),
        ("Support non-gating property", support_non_gating),
        ("CLI/HTTP equivalence", cli_http_equivalence),
    ];
    let mut failed = Vec::new();
    let mut stdout = std::io::stdout();
    for (name, check) in criteria {
        match check() {
            Ok(()) => writeln!(stdout, "PASS: {name}").unwrap(),
            Err(reason) => {
                writeln!(stdout, "FAIL: {name}: {reason}").unwrap();
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
