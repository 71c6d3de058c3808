mod common;

use ehresmann::actions::restrict_action;
use ehresmann::fixtures::{build_subset_expansion, sample};
use ehresmann::io::{reconstruct_doc, run_laws_suite, run_pipeline, Doc, DocRef, IoError, Registry, Stage};
use ehresmann::laws::Mode;

fn write(dir: &std::path::Path, rel: &str, text: &str) {
    let p = dir.join(rel);
    if let Some(parent) = p.parent() {
        std::fs::create_dir_all(parent).unwrap();
    }
    std::fs::write(p, text).unwrap();
}

#[test]
fn tables_survive_a_json_round_trip() {
    let reg = Registry::default();

    let s = sample::diamond();
    let doc = Doc::from_semilattice(&s, None);
    let text = serde_json::to_string(&doc).unwrap();
    let back: Doc = serde_json::from_str(&text).unwrap();
    let s2 = reg.semilattice(&DocRef::Inline(Box::new(back))).unwrap();
    assert_eq!(s.n(), s2.n());
    for i in 0..s.n() {
        for j in 0..s.n() {
            assert_eq!(s.meet(i, j), s2.meet(i, j));
        }
    }

    let m = sample::cyclic(3);
    let text = serde_json::to_string(&Doc::from_monoid(&m, None)).unwrap();
    let back: Doc = serde_json::from_str(&text).unwrap();
    let m2 = reg.monoid(&DocRef::Inline(Box::new(back))).unwrap();
    assert_eq!(m2.n(), 3);
    assert_eq!(m2.mul(1, 2), m.mul(1, 2));

    // Undefined entries travel as nulls and come back undefined.
    let pa = restrict_action(&sample::aperiodic_on_chain3(), &[0, 2]).unwrap();
    let text = serde_json::to_string(&Doc::from_partial_action(&pa, None)).unwrap();
    assert!(text.contains("null"));
    let back: Doc = serde_json::from_str(&text).unwrap();
    let pa2 = reg.partial_action(&DocRef::Inline(Box::new(back))).unwrap();
    for t in 0..pa.monoid().n() {
        for e in 0..pa.space().n() {
            assert_eq!(pa.act(t, e), pa2.act(t, e));
        }
    }
}

#[test]
fn biunary_documents_keep_star_labels_and_atoms() {
    let reg = Registry::default();
    let b = build_subset_expansion(&sample::cyclic(2)).unwrap();
    let atoms: Vec<usize> = (0..8).collect();
    let doc = Doc::from_biunary(&b, Some(atoms.clone()), Some("s-z2".into()));
    let text = serde_json::to_string_pretty(&doc).unwrap();
    let back: Doc = serde_json::from_str(&text).unwrap();
    assert_eq!(back.kind(), "biunary");
    assert_eq!(back.name(), Some("s-z2"));
    let (b2, got_atoms) = reg.biunary(&DocRef::Inline(Box::new(back))).unwrap();
    assert_eq!(got_atoms, Some(atoms));
    assert_eq!(b2.n(), b.n());
    assert!(b2.has_star());
    for x in 0..b.n() {
        assert_eq!(b.plus_of(x), b2.plus_of(x));
        assert_eq!(b.star_of(x), b2.star_of(x));
    }
}

#[test]
fn toml_documents_parse_by_extension() {
    let dir = tempfile::tempdir().unwrap();
    let m = sample::cyclic(4);
    let toml_text = toml::to_string(&Doc::from_monoid(&m, Some("z4".into()))).unwrap();
    write(dir.path(), "z4.toml", &toml_text);

    let mut reg = Registry::new(dir.path());
    reg.load_file("z4.toml").unwrap();
    let m2 = reg.monoid(&DocRef::Name("z4".into())).unwrap();
    assert_eq!(m2.n(), 4);
    assert_eq!(m2.mul(3, 2), 1);

    // The same text under a .json name must fail to parse.
    write(dir.path(), "z4.json", &toml_text);
    assert!(matches!(
        reg.read_doc("z4.json"),
        Err(IoError::Parse { .. })
    ));
}

#[test]
fn registry_resolves_names_paths_and_inlines() {
    let dir = tempfile::tempdir().unwrap();
    let mut reg = Registry::new(dir.path());

    let chain = Doc::from_semilattice(&sample::chain(2), Some("chain2".into()));
    reg.insert("chain2", chain.clone()).unwrap();
    assert!(matches!(
        reg.insert("chain2", chain.clone()),
        Err(IoError::Duplicate { .. })
    ));

    assert!(reg.semilattice(&DocRef::Name("chain2".into())).is_ok());
    assert!(matches!(
        reg.semilattice(&DocRef::Name("nowhere".into())),
        Err(IoError::Unresolved { .. })
    ));
    assert!(matches!(
        reg.monoid(&DocRef::Name("chain2".into())),
        Err(IoError::WrongKind { want: "monoid", .. })
    ));

    // A name with a separator is read from disk relative to the base.
    let m = Doc::from_monoid(&sample::cyclic(2), None);
    write(dir.path(), "sub/z2.json", &serde_json::to_string(&m).unwrap());
    assert!(reg.monoid(&DocRef::Name("sub/z2.json".into())).is_ok());
    assert!(matches!(
        reg.read_doc("sub/missing.json"),
        Err(IoError::Read { .. })
    ));
    write(dir.path(), "broken.json", "{ not json");
    assert!(matches!(
        reg.read_doc("broken.json"),
        Err(IoError::Parse { .. })
    ));

    let inline = DocRef::Inline(Box::new(m));
    assert!(reg.monoid(&inline).is_ok());
}

#[test]
fn subset_files_accept_documents_and_bare_arrays() {
    let dir = tempfile::tempdir().unwrap();
    let reg = Registry::new(dir.path());
    write(dir.path(), "bare.json", "[0, 2]");
    assert_eq!(reg.load_subset("bare.json").unwrap(), vec![0, 2]);
    write(
        dir.path(),
        "doc.json",
        r#"{"type": "subset", "elements": [1, 3]}"#,
    );
    assert_eq!(reg.load_subset("doc.json").unwrap(), vec![1, 3]);
    write(dir.path(), "other.json", r#"{"type": "poset", "n": 1, "leq": [[true]]}"#);
    assert!(matches!(
        reg.load_subset("other.json"),
        Err(IoError::WrongKind { want: "subset", .. })
    ));
}

#[test]
fn a_partial_table_is_not_a_total_action() {
    let reg = Registry::default();
    let pa = restrict_action(&sample::aperiodic_on_chain3(), &[0, 2]).unwrap();
    let doc = Doc::from_partial_action(&pa, None);
    match reg.total_action(&DocRef::Inline(Box::new(doc))) {
        Err(IoError::Invalid { detail }) => assert!(detail.contains("not total")),
        other => panic!("expected invalid, got {other:?}"),
    }
}

fn f1_registry() -> Registry {
    let mut reg = Registry::default();
    reg.insert("f1-action", Doc::from_action(&common::f1(), None))
        .unwrap();
    reg.insert(
        "f1-ctx",
        Doc::PlContext {
            name: Some("f1-ctx".into()),
            action: DocRef::Name("f1-action".into()),
        },
    )
    .unwrap();
    reg.insert(
        "aperiodic-action",
        Doc::from_action(&sample::aperiodic_on_chain3(), None),
    )
    .unwrap();
    reg.insert(
        "aperiodic-sub",
        Doc::QlContext {
            name: Some("aperiodic-sub".into()),
            action: DocRef::Name("aperiodic-action".into()),
            y: vec![0, 2],
        },
    )
    .unwrap();
    reg
}

#[test]
fn law_suites_dispatch_over_document_kinds() {
    let reg = f1_registry();
    let ctx = DocRef::Name("f1-ctx".into());

    let (value, pass) = run_laws_suite(&reg, "left-ehresmann", &ctx, 4, &Mode::Exhaustive).unwrap();
    assert!(pass);
    assert_eq!(value["suite"], "left-ehresmann");
    assert!(value["checks"].as_array().unwrap().len() > 1);

    let (_, pass) = run_laws_suite(&reg, "ample", &ctx, 4, &Mode::Exhaustive).unwrap();
    assert!(!pass, "this context refutes the stronger identity");

    let (value, pass) = run_laws_suite(&reg, "basis", &ctx, 4, &Mode::Exhaustive).unwrap();
    assert!(pass);
    assert!(value["duplicates"].as_array().unwrap().is_empty());
    assert!(value["report"]["pass"].as_bool().unwrap());

    let q = DocRef::Name("aperiodic-sub".into());
    let (_, pass) = run_laws_suite(&reg, "basis", &q, 4, &Mode::Exhaustive).unwrap();
    assert!(pass);

    // A bare action target builds the context implicitly.
    let a = DocRef::Name("f1-action".into());
    let (_, pass) = run_laws_suite(&reg, "star", &a, 4, &Mode::Exhaustive).unwrap();
    assert!(pass);

    assert!(matches!(
        run_laws_suite(&reg, "no-such-suite", &ctx, 4, &Mode::Exhaustive),
        Err(IoError::Invalid { .. })
    ));

    // Tables only get atom-dependent suites when atoms are designated.
    let b = build_subset_expansion(&sample::cyclic(2)).unwrap();
    let mut reg2 = Registry::default();
    reg2.insert("sz2", Doc::from_biunary(&b, None, Some("sz2".into())))
        .unwrap();
    let t = DocRef::Name("sz2".into());
    let (_, pass) = run_laws_suite(&reg2, "star", &t, 3, &Mode::Exhaustive).unwrap();
    assert!(pass);
    assert!(matches!(
        run_laws_suite(&reg2, "atomic", &t, 3, &Mode::Exhaustive),
        Err(IoError::Invalid { .. })
    ));
}

#[test]
fn reconstruction_runs_from_documents() {
    let reg = f1_registry();
    let report = reconstruct_doc(&reg, &DocRef::Name("aperiodic-sub".into()), 4, 0).unwrap();
    assert!(report.pass);
    assert_eq!(report.atom_count, 5);
    assert_eq!(report.element_count, 5);

    let b = build_subset_expansion(&sample::cyclic(2)).unwrap();
    let mut reg2 = Registry::default();
    reg2.insert(
        "with-atoms",
        Doc::from_biunary(&b, Some((0..8).collect()), Some("with-atoms".into())),
    )
    .unwrap();
    reg2.insert("no-atoms", Doc::from_biunary(&b, None, Some("no-atoms".into())))
        .unwrap();
    let report = reconstruct_doc(&reg2, &DocRef::Name("with-atoms".into()), 3, 0).unwrap();
    assert!(!report.pass, "no unique canonical forms here");
    assert!(matches!(
        reconstruct_doc(&reg2, &DocRef::Name("no-atoms".into()), 3, 0),
        Err(IoError::Invalid { .. })
    ));
    assert!(matches!(
        reconstruct_doc(&reg, &DocRef::Name("f1-action".into()), 3, 0),
        Err(IoError::WrongKind { .. })
    ));
}

#[test]
fn pipelines_run_stages_in_order() {
    let mut reg = f1_registry();
    let pa = restrict_action(&sample::aperiodic_on_chain3(), &[0, 2]).unwrap();
    reg.insert("restricted", Doc::from_partial_action(&pa, None))
        .unwrap();

    let doc = Doc::Pipeline {
        name: Some("full-run".into()),
        seed: Some(7),
        stages: vec![
            Stage::CheckAction {
                action: DocRef::Name("restricted".into()),
                y: None,
            },
            Stage::CheckAction {
                action: DocRef::Name("aperiodic-action".into()),
                y: Some(vec![0, 2]),
            },
            Stage::Globalize {
                action: DocRef::Name("restricted".into()),
            },
            Stage::LawsCheck {
                suite: "left-ehresmann".into(),
                target: DocRef::Name("f1-ctx".into()),
                bound: Some(4),
                samples: None,
            },
            Stage::Reconstruct {
                q: DocRef::Name("aperiodic-sub".into()),
                bound: Some(4),
            },
            Stage::RoundTrip {
                action: DocRef::Name("f1-action".into()),
                y: vec![0, 1],
                bound: Some(4),
            },
        ],
    };
    let report = run_pipeline(&reg, &doc, None).unwrap();
    assert!(report.pass);
    assert_eq!(report.seed, 7);
    let names: Vec<&str> = report.stages.iter().map(|s| s.stage.as_str()).collect();
    assert_eq!(
        names,
        [
            "check-action",
            "check-action",
            "globalize",
            "laws-check",
            "reconstruct",
            "round-trip"
        ]
    );
    for s in &report.stages {
        assert!(s.pass, "{}: {:?}", s.stage, s.error);
        assert!(s.error.is_none());
        assert!(s.report.is_some());
    }

    let report2 = run_pipeline(&reg, &doc, Some(99)).unwrap();
    assert_eq!(report2.seed, 99, "override wins over the document seed");
}

#[test]
fn pipelines_halt_on_failure_and_on_error() {
    let reg = f1_registry();
    let failing = Doc::Pipeline {
        name: None,
        seed: None,
        stages: vec![
            Stage::LawsCheck {
                suite: "ample".into(),
                target: DocRef::Name("f1-ctx".into()),
                bound: Some(4),
                samples: None,
            },
            Stage::Globalize {
                action: DocRef::Name("never-reached".into()),
            },
        ],
    };
    let report = run_pipeline(&reg, &failing, None).unwrap();
    assert!(!report.pass);
    assert_eq!(report.seed, 0);
    assert_eq!(report.stages.len(), 1, "the failing stage halts the run");
    assert!(!report.stages[0].pass);
    assert!(report.stages[0].error.is_none(), "a clean refutation is not an error");

    let erroring = Doc::Pipeline {
        name: None,
        seed: None,
        stages: vec![
            Stage::LawsCheck {
                suite: "no-such-suite".into(),
                target: DocRef::Name("f1-ctx".into()),
                bound: None,
                samples: None,
            },
            Stage::Globalize {
                action: DocRef::Name("never-reached".into()),
            },
        ],
    };
    let report = run_pipeline(&reg, &erroring, None).unwrap();
    assert!(!report.pass);
    assert_eq!(report.stages.len(), 1);
    assert!(report.stages[0].error.is_some());
    assert!(report.stages[0].report.is_none());

    let not_a_pipeline = Doc::from_monoid(&sample::cyclic(2), None);
    assert!(matches!(
        run_pipeline(&reg, &not_a_pipeline, None),
        Err(IoError::WrongKind { .. })
    ));
}

#[test]
fn sampled_pipelines_are_reproducible() {
    let doc = Doc::Pipeline {
        name: None,
        seed: Some(41),
        stages: vec![Stage::LawsCheck {
            suite: "left-ehresmann".into(),
            target: DocRef::Name("f1-ctx".into()),
            bound: Some(4),
            samples: Some(200),
        }],
    };
    let a = serde_json::to_string(&run_pipeline(&f1_registry(), &doc, None).unwrap()).unwrap();
    let b = serde_json::to_string(&run_pipeline(&f1_registry(), &doc, None).unwrap()).unwrap();
    assert_eq!(a, b);
    let c = serde_json::to_string(&run_pipeline(&f1_registry(), &doc, Some(5)).unwrap()).unwrap();
    assert_ne!(a, c, "the seed is part of the report");
}

#[test]
fn pipeline_documents_parse_from_json() {
    let text = r#"{
        "type": "pipeline",
        "seed": 3,
        "stages": [
            {"stage": "check-action",
             "action": {"type": "action",
                        "monoid": {"type": "monoid", "n": 1, "mul": [[0]], "one": 0},
                        "space": {"type": "semilattice", "n": 1, "meet": [[0]], "one": 0},
                        "act": [[0]]}},
            {"stage": "laws-check", "suite": "left-ehresmann",
             "target": {"type": "pl-context",
                        "action": {"type": "action",
                                   "monoid": {"type": "monoid", "n": 1, "mul": [[0]], "one": 0},
                                   "space": {"type": "semilattice", "n": 1, "meet": [[0]], "one": 0},
                                   "act": [[0]]}}}
        ]
    }"#;
    let doc: Doc = serde_json::from_str(text).unwrap();
    assert_eq!(doc.kind(), "pipeline");
    let report = run_pipeline(&Registry::default(), &doc, None).unwrap();
    assert!(report.pass);
    assert_eq!(report.seed, 3);
    assert_eq!(report.stages.len(), 2);
}
