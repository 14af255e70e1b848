use sdcodes::catalog::{
    full_pipeline, load_bundled_params, reproduce_table, resolve_spec, Bundle, CatalogRecord, CatalogStore,
    ClassRecord, MatrixRecord, ParamTable, ReproduceOptions, RowStatus, TableId,
};
use sdcodes::code::Family;
use sdcodes::hadamard::SearchTuple;
use sdcodes::weight::{Extremality, DEFAULT_BUDGET};
use sdcodes::Error;

fn sample_record(label: &str) -> CatalogRecord {
    CatalogRecord {
        label: label.into(),
        family: Family::FourNega,
        spec: format!("family=4nc n=36 rA=000000001 rB=011111111 label={label}"),
        n: 36,
        k: 18,
        self_dual: true,
        min_weight: Some(9),
        extremality: Some(Extremality::NearExtremal),
        enumerator: "0:1 9:72".into(),
        enumerator_sha256: "ab".repeat(32),
        tuple: Some("(36,36,1,1,1)".parse::<SearchTuple>().unwrap()),
        matrices: vec![MatrixRecord { parity: 0, class: 0 }, MatrixRecord { parity: 1, class: 0 }],
        classes: vec![ClassRecord {
            aut_order: "72".into(),
            cert: "cd".repeat(32),
            members: 2,
        }],
        code_cert: Some("ef".repeat(32)),
        created_at: 1_700_000_000,
    }
}

#[test]
fn store_round_trips_every_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("catalog.jsonl");
    let (a, mut b) = (sample_record("A"), sample_record("B"));
    b.code_cert = None;
    b.tuple = None;
    {
        let mut store = CatalogStore::open(&path).unwrap();
        assert!(store.is_empty());
        store.insert(a.clone()).unwrap();
        store.insert(b.clone()).unwrap();
        assert!(matches!(store.insert(a.clone()), Err(Error::Param(_))));
    }
    let store = CatalogStore::open(&path).unwrap();
    assert_eq!(store.len(), 2);
    assert_eq!(store.get("A"), Some(&a));
    assert_eq!(store.get("B"), Some(&b));
    assert!(store.get("A").unwrap().is_complete());
    assert!(!store.get("B").unwrap().is_complete());
    assert_eq!(store.records(), &[a, b]);
}

#[test]
fn store_rejects_duplicate_labels_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dup.jsonl");
    let line = serde_json::to_string(&sample_record("X")).unwrap();
    std::fs::write(&path, format!("{line}\n{line}\n")).unwrap();
    assert!(CatalogStore::open(&path).is_err());
}

#[test]
fn bundled_parameter_tables() {
    let bdc = load_bundled_params(ParamTable::Bdc).unwrap();
    assert_eq!(bdc.len(), 12);
    assert_eq!(bdc[0].r_a, "21022212010000011");
    let f = load_bundled_params(ParamTable::FourNega).unwrap();
    assert_eq!(f.len(), 260);
    assert_eq!((f[259].r_a.as_str(), f[259].r_b.as_deref()), ("112101021", Some("200000000")));
    let p = load_bundled_params(ParamTable::P36).unwrap();
    assert_eq!(p[0].r_a, "01121222112221211");
    for spec in bdc.iter().chain(&f).chain(&p) {
        assert!(spec.build().unwrap().is_self_dual(), "{}", spec.label);
    }
}

#[test]
fn bundle_counts_agree_with_tables() {
    let b = Bundle::load().unwrap();
    let neq: usize = b.tuples_f.values().map(|t| t.neq).sum();
    let merged: usize = b.chains.iter().map(|c| c.len() - 1).sum();
    assert_eq!(neq - merged, b.count("prop2").unwrap());
    let aut_entries: usize = b.aut.values().map(Vec::len).sum();
    assert_eq!(aut_entries, b.count("prop2").unwrap());
    let tuples: std::collections::HashSet<_> = b.tuples_f.values().collect();
    assert_eq!(tuples.len(), b.count("distinct-tuples").unwrap());
}

#[test]
fn spec_shorthands() {
    assert_eq!(resolve_spec("F260").unwrap().label, "F36-260");
    assert_eq!(resolve_spec("D36-8").unwrap().label, "D36-8");
    assert_eq!(resolve_spec("p36").unwrap().label, "P36");
    assert!(matches!(resolve_spec("F261"), Err(Error::Param(_))));
    assert!(matches!(resolve_spec("G1"), Err(Error::Parse(_))));
    let s = resolve_spec("family=qt n=12 rA=001001 label=q").unwrap();
    assert_eq!(s.family, Family::Qt);
}

#[test]
fn invalid_spec_is_not_persisted() {
    let dir = tempfile::tempdir().unwrap();
    let mut store = CatalogStore::open(dir.path().join("c.jsonl")).unwrap();
    let err = full_pipeline("family=4nc n=36 rA=0000 label=bad", DEFAULT_BUDGET, Some(&mut store)).unwrap_err();
    assert!(matches!(err, Error::Stage { ref stage, .. } if *stage == "parse" || *stage == "construct"), "{err}");
    let err = full_pipeline("family=4nc n=12 rA=000 rB=000 label=zero", DEFAULT_BUDGET, Some(&mut store)).unwrap_err();
    assert!(matches!(err, Error::Stage { ref stage, .. } if *stage == "verify"), "{err}");
    let err = full_pipeline("nonsense", DEFAULT_BUDGET, Some(&mut store)).unwrap_err();
    assert!(matches!(err.root(), Error::Parse(_)), "{err}");
    assert!(store.is_empty());
    assert!(CatalogStore::open(store.path()).unwrap().is_empty());
}

#[test]
fn pipeline_is_deterministic_and_persists() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.jsonl");
    let mut store = CatalogStore::open(&path).unwrap();
    let a = full_pipeline("F260", DEFAULT_BUDGET, Some(&mut store)).unwrap();
    let b = full_pipeline("F260", DEFAULT_BUDGET, None).unwrap();
    assert_eq!(
        serde_json::to_string(&a.without_timestamps()).unwrap(),
        serde_json::to_string(&b.without_timestamps()).unwrap()
    );
    assert_eq!(a.tuple.unwrap().to_string(), "(36, 36, 1, 1, 1)");
    assert_eq!(a.extremality, Some(Extremality::NearExtremal));
    assert!(a.is_complete());
    assert!(matches!(
        full_pipeline("F260", DEFAULT_BUDGET, Some(&mut store)).unwrap_err().root(),
        Error::Param(_)
    ));
    assert_eq!(CatalogStore::open(&path).unwrap().get("F36-260"), Some(&a));
}

#[test]
fn pipeline_examples() {
    let f = full_pipeline("F168", DEFAULT_BUDGET, None).unwrap();
    let t = f.tuple.unwrap();
    assert_eq!((t.n0, t.neq), (20, 4));
    assert_eq!(f.classes.len(), 4);
    let p = full_pipeline("P36", DEFAULT_BUDGET, None).unwrap();
    assert_eq!(p.extremality, Some(Extremality::Extremal));
    assert_eq!(p.min_weight, Some(12));
    assert_eq!(p.tuple.unwrap().neq, 2);
}

#[test]
fn empty_sample_gives_an_empty_passing_report() {
    for id in ["T1", "T3", "T5", "T6", "T7", "AUT", "CH", "CHT", "PROP2"] {
        let id: TableId = id.parse().unwrap();
        let r = reproduce_table(id, &ReproduceOptions { sample: Some(vec![]), ..Default::default() }).unwrap();
        assert!(r.pass && r.rows.is_empty(), "{id}");
    }
}

#[test]
fn rows_without_t_matrices_are_skipped() {
    let r = reproduce_table(TableId::T1, &ReproduceOptions::default()).unwrap();
    assert_eq!(r.rows.len(), 10);
    assert_eq!(r.skipped(), 10);
    assert!(r.pass);
    assert!(r.rows.iter().all(|row| matches!(row.status, RowStatus::Skipped(_))));
    assert!(r.to_csv().lines().count() > 10);
}

#[test]
fn unknown_table_is_a_parse_error() {
    assert!("T9".parse::<TableId>().is_err());
}
