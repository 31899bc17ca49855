use polar_ed::catalog::{catalog_build, FamilyId, FamilySpec};
use polar_ed::rep::{load, save, RepFile, RepIoError};

#[test]
fn catalog_entries_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    for (family, params) in [
        (FamilyId::Sl2Quartics, vec![]),
        (FamilyId::OnomMatrix, vec![2, 3]),
        (FamilyId::So2DoubleStandard, vec![]),
    ] {
        let entry = catalog_build(&FamilySpec::new(family, &params)).unwrap();
        let file = RepFile {
            rep: entry.rep,
            slice: entry.slice,
        };
        let path = dir.path().join(format!("{family}.json"));
        save(&file, &path).unwrap();
        assert_eq!(load(&path).unwrap(), file);
    }
}

#[test]
fn missing_file_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(load(dir.path().join("absent.json")), Err(RepIoError::Io { .. })));
}

#[test]
fn skewness_violations_are_rejected_on_load() {
    let text = r#"{"name": "bad", "dim": 2, "gram": [["1","0"],["0","1"]],
                   "generators": [[["1","0"],["0","1"]]], "metadata": {}}"#;
    assert!(matches!(RepFile::from_json_str(text), Err(RepIoError::Invalid(_))));
}
