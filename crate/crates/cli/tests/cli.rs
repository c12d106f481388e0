use proptest::prelude::*;
use serde_json::Value;
use skewring::properties::Property;
use skewring::search::Family;
use skewring::zoo::{registry, EndoSpec, RingSpec, REGISTRY_NAMES};
use skewring::ElemLit;
use skewring_cli::{parse_element, parse_endo_spec, parse_ring_spec, run_args, Command, Verb};

fn ring_spec() -> impl Strategy<Value = RingSpec> {
    let leaf = prop_oneof![
        (2u64..12).prop_map(RingSpec::Integers),
        prop::sample::select(REGISTRY_NAMES.to_vec()).prop_map(|n| RingSpec::Named(n.to_string())),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| RingSpec::Product(Box::new(a), Box::new(b))),
            (1u64..4, inner.clone()).prop_map(|(k, r)| RingSpec::Matrix(k, Box::new(r))),
            (inner.clone(), 1u64..5).prop_map(|(r, m)| RingSpec::TruncPoly(Box::new(r), m)),
            inner.clone().prop_map(|r| RingSpec::UpperTriangular(Box::new(r))),
            inner.clone().prop_map(|r| RingSpec::UpperToeplitz(Box::new(r))),
            (inner, prop::collection::vec(0i64..9, 1..3))
                .prop_map(|(r, g)| RingSpec::Sub(Box::new(r), g.into_iter().map(ElemLit::Int).collect())),
        ]
    })
}

fn endo_spec() -> impl Strategy<Value = EndoSpec> {
    prop_oneof![
        Just(EndoSpec::Identity),
        prop::collection::vec((0u64..20, 0u64..20), 1..5).prop_map(EndoSpec::Table),
        prop::sample::select(vec!["negb", "swap", "eval0", "blockswap"]).prop_map(|n| EndoSpec::Named(n.into())),
    ]
}

fn verb() -> impl Strategy<Value = Verb> {
    prop::sample::select(vec![
        Verb::Validate,
        Verb::Props,
        Verb::Idempotents,
        Verb::SkewIdempotents,
        Verb::Claim,
        Verb::VerifyPaper,
        Verb::Search,
    ])
}

fn command() -> impl Strategy<Value = Command> {
    let names: Vec<String> = Property::ALL.iter().map(|p| p.name().to_string()).collect();
    let families = vec![Family::Zn, Family::Prod, Family::Truncpoly, Family::Matrix, Family::Subring, Family::All];
    (
        (verb(), prop::option::of((1u32..13).prop_map(|k| format!("C{k}"))), prop::option::of(ring_spec()), prop::option::of(endo_spec())),
        (prop::option::of(0usize..4), prop::option::of(1usize..4), prop::option::of(prop::sample::select(names))),
        (prop::option::of(prop::sample::select(families)), prop::option::of(2usize..100), any::<bool>()),
        (prop::option::of(any::<u64>()), any::<bool>(), prop::option::of(1usize..9), any::<bool>()),
    )
        .prop_map(|((verb, claim, ring, endo), (degree, trunc, property), (family, max_order, json), (seed, sampled, threads, timings))| Command {
            verb,
            claim,
            ring,
            endo,
            degree,
            trunc,
            property,
            family,
            max_order,
            json,
            seed,
            sampled,
            threads,
            timings,
        })
}

proptest! {
    #[test]
    fn ring_specs_round_trip(spec in ring_spec()) {
        prop_assert_eq!(parse_ring_spec(&spec.to_string()).unwrap(), spec);
    }

    #[test]
    fn endo_specs_round_trip(spec in endo_spec()) {
        prop_assert_eq!(parse_endo_spec(&spec.to_string()).unwrap(), spec);
    }

    #[test]
    fn commands_round_trip(cmd in command()) {
        let parsed = Command::parse_args(cmd.render()).unwrap();
        prop_assert_eq!(parsed, cmd);
    }
}

#[test]
fn printed_elements_parse_back() {
    for entry in registry() {
        let ring = &entry.ring;
        for e in ring.elements() {
            let text = ring.format(e);
            let lit = parse_element(&text).unwrap_or_else(|err| panic!("{text}: {err}"));
            assert_eq!(ring.resolve(&lit).unwrap(), e, "{}: {text}", entry.name);
        }
    }
}

fn run(args: &str) -> (i32, String, String) {
    run_args(args.split_whitespace())
}

#[test]
fn props_reports_compatibility_of_the_negation_example() {
    let (code, out, err) = run("props --ring ex1 --endo negb");
    assert_eq!(code, 0, "{err}");
    assert!(out.lines().any(|l| l == "sigma-compatible: holds"), "{out}");
}

#[test]
fn text_and_json_agree() {
    let (_, text, _) = run("props --ring ex3");
    let (_, json, _) = run("props --ring ex3 --json");
    let value: Value = serde_json::from_str(&json).unwrap();
    let verdicts = value["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), text.lines().count());
    for (line, v) in text.lines().zip(verdicts) {
        let status = if v["holds"].as_bool().unwrap() { "holds" } else { "fails" };
        assert!(line.starts_with(&format!("{}: {status}", v["property"].as_str().unwrap())), "{line} vs {v}");
        for w in v["witness"].as_array().into_iter().flatten() {
            assert!(line.contains(w.as_str().unwrap()), "{line} vs {v}");
        }
    }
}

#[test]
fn single_property_sets_the_exit_status() {
    assert_eq!(run("props --ring ex2t --property sigma-compatible").0, 1);
    assert_eq!(run("props --ring ex1 --property abelian").0, 0);
}

#[test]
fn skew_idempotents_lists_the_swap_examples() {
    let (code, out, _) = run("skew-idempotents --ring ex3 --endo swap --degree 1");
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "(1,0) + (0,1)*x"), "{out}");
    assert!(out.lines().any(|l| l == "(0,1) + (0,1)*x"), "{out}");
}

#[test]
fn validate_reports_axioms() {
    let (code, out, _) = run("validate --ring prod(Z(2),Z(3))");
    assert_eq!(code, 0);
    assert!(out.contains("ring-axioms: holds"), "{out}");
}

#[test]
fn syntax_errors_are_usage_errors() {
    let (code, out, err) = run_args(["validate", "--ring", "mat(2, Z("]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("at offset 9: expected INT"), "{err}");
    assert_eq!(run("props --ring ex9").0, 2);
    assert_eq!(run("props").0, 2);
    assert_eq!(run("claim").0, 2);
    assert_eq!(run("claim C99").0, 2);
}

#[test]
fn caps_surface_as_exit_two() {
    let (code, _, err) = run("props --ring Z(5000) --property abelian");
    assert_eq!(code, 2, "{err}");
    assert!(!err.is_empty());
    let (code, out, _) = run("props --ring Z(5000) --property reflexive --sampled --seed 1");
    assert_eq!(code, 0);
    assert!(out.contains("[sampled]"), "{out}");
}

#[test]
fn claim_reports() {
    let (code, out, _) = run("claim C11 --ring ex3");
    assert_eq!(code, 0);
    assert!(out.starts_with("C11 ex3 d=1 m=2: pass"), "{out}");
    let (code, json, _) = run("claim c12 --json");
    assert_eq!(code, 0);
    let reports: Value = serde_json::from_str(&json).unwrap();
    let ex4 = reports.as_array().unwrap().iter().find(|r| r["entry"] == "ex4").unwrap();
    assert_eq!(ex4["status"], "pass");
    assert!(ex4["elapsed_ms"].is_null());
}

#[test]
fn search_exit_status_follows_hits() {
    assert_eq!(run("search --property idem-reflexive,!reflexive --family subring --max-order 16").0, 0);
    assert_eq!(run("search --property abelian,!idem-reflexive --family zn --max-order 12").0, 1);
    assert_eq!(run("search --family zn").0, 2);
}
