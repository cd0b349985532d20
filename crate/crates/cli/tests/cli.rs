mod common;

use std::sync::Arc;

use common::*;
use dgres_cli::codec::{self, CategoryDoc};
use dgres_cli::{parse, print, Document, FormatError, Kind};
use dgres_core::dgcat::Fixture;
use dgres_core::gen::random_complexes_category;
use dgres_core::{PrimeField, Rationals};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const FIXTURES: &[(&str, i32)] = &[("unit_k", 0), ("sphere", 0), ("sphere", 1), ("sphere", 2), ("disk", 1), ("disk", 2)];

fn payload(text: &str) -> Value {
    parse(text).unwrap().payload
}

#[test]
fn fixture_documents_match_golden_files() {
    for field in ["q", "fp:101"] {
        for (name, n) in FIXTURES {
            let r = dgres(&["fixtures", name, "--n", &n.to_string(), "--field", field]);
            assert_eq!(r.code, 0);
            let tag = field.replace(':', "");
            check_golden(&format!("fixture_{name}_{n}_{tag}.json"), &r.stdout);
        }
    }
}

fn scenario_inputs(dir: &std::path::Path) -> Vec<(&'static str, Vec<String>, i32)> {
    let (refused, accepted) = mc_objects();
    let q = Rationals;
    let f101 = PrimeField::new(101).unwrap();
    let sphere = dgres(&["fixtures", "sphere", "--n", "1"]).stdout;
    let unit3 = dgres(&["fixtures", "unit_k", "--field", "fp:3"]).stdout;
    let p = |name: &str, text: &str| write(dir, name, text);
    vec![
        ("validate_broken_triangle", vec!["validate".into(), p("broken.json", &broken_triangle())], 1),
        ("validate_sphere", vec!["validate".into(), p("sphere.json", &sphere)], 0),
        ("homology_sphere", vec!["homology".into(), p("sphere.json", &sphere)], 0),
        (
            "resolve_unit_k_2",
            vec!["resolve".into(), p("unit3.json", &unit3), "--n".into(), "2".into()],
            0,
        ),
        (
            "resolve_sphere_3",
            vec!["resolve".into(), p("sphere.json", &sphere), "--n".into(), "3".into(), "--window=-6:4".into()],
            0,
        ),
        ("resolve_mc", vec!["resolve".into(), p("accepted.json", &accepted)], 0),
        ("cotensor_circle_2", vec!["cotensor".into(), p("circle2.json", &circle(2))], 0),
        (
            "cotensor_circle_2_3",
            vec!["cotensor".into(), p("circle2.json", &circle(2)), p("circle3.json", &circle(3))],
            0,
        ),
        ("validate_circle", vec!["validate".into(), p("circle2.json", &circle(2))], 0),
        ("strictify_accepted", vec!["strictify".into(), p("accepted.json", &accepted)], 0),
        ("strictify_refused", vec!["strictify".into(), p("refused.json", &refused)], 2),
        ("qequiv_identity", vec!["qequiv".into(), p("identity.json", &sphere_identity())], 0),
        ("qequiv_collapse", vec!["qequiv".into(), p("collapse.json", &sphere_collapse())], 1),
        (
            "adjoin_sphere",
            vec!["adjoin".into(), p("adj_sphere.json", &adjunction(&q, Fixture::Sphere, 1, 1, vec![1], 2))],
            0,
        ),
        (
            "adjoin_powers",
            vec![
                "adjoin".into(),
                p("adj_powers.json", &adjunction(&f101, Fixture::UnitK, 0, 1, vec![0], 2)),
                "--truncate".into(),
                "3".into(),
            ],
            0,
        ),
        (
            "adjoin_unsound",
            vec!["adjoin".into(), p("adj_unsound.json", &adjunction(&q, Fixture::UnitK, 0, 1, vec![1], 2))],
            2,
        ),
    ]
}

#[test]
fn reports_match_golden_files_and_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for (name, args, code) in scenario_inputs(dir.path()) {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = dgres(&args);
        assert_eq!(first.code, code, "{name}: {}", first.stdout);
        let second = dgres(&args);
        assert_eq!(first.stdout, second.stdout, "{name} is not deterministic");
        let report = payload(&first.stdout);
        assert_eq!(report["status"], ["verified", "refuted", "inconclusive", "invalid-input"][code as usize]);
        check_golden(&format!("report_{name}.json"), &first.stdout);
    }
}

#[test]
fn documented_examples() {
    let dir = tempfile::tempdir().unwrap();
    let broken = write(dir.path(), "broken.json", &broken_triangle());
    let r = dgres(&["validate", &broken]);
    assert_eq!(r.code, 1);
    let residual = payload(&r.stdout)["residual"].clone();
    assert_eq!(residual.as_object().unwrap().keys().collect::<Vec<_>>(), ["(0,1,2)"]);

    let unit = write(dir.path(), "unit.json", &dgres(&["fixtures", "unit_k"]).stdout);
    let r = dgres(&["resolve", &unit, "--n", "2"]);
    assert_eq!(r.code, 0);
    assert_eq!(payload(&r.stdout)["pairs"][0]["ranks"], serde_json::json!({"0": 1}));

    let id = write(dir.path(), "id.json", &sphere_identity());
    let r = dgres(&["qequiv", &id]);
    assert_eq!((r.code, payload(&r.stdout)["verdict"].as_str()), (0, Some("yes")));

    let c2 = write(dir.path(), "c2.json", &circle(2));
    let c5 = write(dir.path(), "c5.json", &circle(-5));
    let r = dgres(&["cotensor", &c2]);
    assert_eq!(payload(&r.stdout)["ranks"], serde_json::json!({"-1": 1, "0": 1}));
    let r = dgres(&["cotensor", &c2, &c5]);
    assert_eq!(payload(&r.stdout)["ranks"], serde_json::json!({}));
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("sphere.json");
    let r = dgres(&["fixtures", "sphere", "--n", "2", "--out", target.to_str().unwrap()]);
    assert_eq!((r.code, r.stdout.as_str()), (0, ""));
    assert_eq!(std::fs::read_to_string(target).unwrap(), dgres(&["fixtures", "sphere", "--n", "2"]).stdout);
}

#[test]
fn malformed_inputs_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let sphere = dgres(&["fixtures", "sphere", "--n", "1"]).stdout;
    let error = |text: &str, args: &[&str]| {
        let p = write(dir.path(), "input.json", text);
        let mut all = args.to_vec();
        all.push(&p);
        let r = dgres(&all);
        assert_eq!(r.code, 3, "{}", r.stdout);
        payload(&r.stdout)["error"].clone()
    };

    let e = error(&sphere.replace("\"units\"", "\"unitz\""), &["validate"]);
    assert_eq!(e["kind"], "parse");
    assert!(e["message"].as_str().unwrap().contains("unitz"));
    let line = sphere.lines().position(|l| l.contains("\"units\"")).unwrap() + 1;
    assert_eq!(e["line"], line);

    let e = error(&sphere.replace("\"format_version\": \"1\"", "\"format_version\": \"0\""), &["validate"]);
    assert_eq!(e["kind"], "version-mismatch");
    let e = error(&sphere.replace("dgres-signs/1", "dgres-signs/0"), &["homology"]);
    assert_eq!(e["kind"], "version-mismatch");

    let e = error(&sphere.replacen("\"1\"\n", "\"1/0\"\n", 1), &["validate"]);
    assert_eq!(e["kind"], "invalid");
    assert!(e["path"].as_str().unwrap().starts_with("payload."));

    let e = error(&sphere.replace("\"target\": \"b\"", "\"target\": \"c\""), &["homology"]);
    assert!(e["message"].as_str().unwrap().contains("\"c\""));

    let e = error(&sphere[..sphere.len() / 2], &["homology"]);
    assert_eq!(e["kind"], "parse");
    let e = error(&sphere, &["qequiv"]);
    assert_eq!(e["kind"], "wrong-kind");
    let e = error(&sphere, &["homology", "--field", "fp:7"]);
    assert_eq!(e["kind"], "field-mismatch");

    let r = dgres(&["validate", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!((r.code, payload(&r.stdout)["error"]["kind"].as_str()), (3, Some("io")));
    assert_eq!(dgres(&["fixtures", "sphere", "--field", "fp:6"]).code, 3);
    assert_eq!(dgres(&["resolve"]).code, 3);
}

#[test]
fn law_violations_refute_validation() {
    let dir = tempfile::tempdir().unwrap();
    let sphere = dgres(&["fixtures", "disk", "--n", "1"]).stdout;
    let mut doc: Document = parse(&sphere).unwrap();
    let mut cat: CategoryDoc = serde_json::from_value(doc.payload.clone()).unwrap();
    cat.units.insert("a".into(), vec!["2".into()]);
    doc.payload = serde_json::to_value(&cat).unwrap();
    let p = write(dir.path(), "bad.json", &print(&doc));
    let r = dgres(&["validate", &p]);
    assert_eq!(r.code, 1);
    assert_eq!(payload(&r.stdout)["violation"]["reason"], "UnitViolation");
    // other commands need valid input
    assert_eq!(dgres(&["homology", &p]).code, 3);
}

#[test]
fn canonical_text_round_trips() {
    for entry in std::fs::read_dir(golden_dir()).unwrap() {
        let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
        assert_eq!(print(&parse(&text).unwrap()), text);
    }
    // non-canonical input prints canonically
    let sphere = dgres(&["fixtures", "sphere", "--n", "0"]).stdout;
    let compact: Value = serde_json::from_str(&sphere).unwrap();
    assert_eq!(print(&parse(&compact.to_string()).unwrap()), sphere);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn categories_survive_encoding(seed in any::<u64>()) {
        let k = PrimeField::new(101).unwrap();
        let cat = random_complexes_category(&k, &mut ChaCha8Rng::seed_from_u64(seed), 2);
        let text = print(&Document::from_payload("fp:101", Kind::DgCategory, &codec::encode_category(&cat)));
        let parsed: CategoryDoc = dgres_cli::format::parse_payload(&text, Kind::DgCategory).unwrap();
        let back = Arc::new(codec::decode_category(&k, &parsed, "payload").unwrap().build().unwrap());
        prop_assert_eq!(&back, &cat);
        prop_assert_eq!(codec::encode_category(&back), parsed);
    }

    #[test]
    fn rational_scalars_are_canonical(p in -40i64..40, q in 1i64..40) {
        let text = dgres(&["fixtures", "unit_k"]).stdout.replace("\"1\"\n", &format!("\"{}/{}\"\n", 2 * p, 2 * q));
        let doc = parse(&text).unwrap();
        let cat: CategoryDoc = serde_json::from_value(doc.payload).unwrap();
        let b = codec::decode_category(&Rationals, &cat, "payload").unwrap();
        let value = &codec::encode_category(&match b.build() {
            Ok(c) => c,
            Err(_) => return Ok(()),
        }).units["*"][0];
        prop_assert!(!value.contains('/') || !value.ends_with("/1"));
    }
}

#[test]
fn format_errors_name_positions() {
    let e = parse("{\n  \"format_version\": \"1\",\n  \"kind\": \"dg-category\",\n  \"extra\": 1\n}").unwrap_err();
    assert!(matches!(e, FormatError::Parse { line: 4, .. }), "{e:?}");
}
