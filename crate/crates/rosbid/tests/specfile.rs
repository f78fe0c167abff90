use rosbid::{load_spec, parse_spec, SpecFileError};
use rosbid_core::{Construction, ConstructionParams};

#[test]
fn canned_display_round_trips() {
    // The canned inputs print in the file format.
    let p = ConstructionParams::for_horizon(10_000);
    for c in Construction::ALL {
        let built = c.build(&p).unwrap();
        let text = built.to_string();
        let first = text.split("label: ").nth(1).map(|s| format!("label: {s}")).unwrap();
        let parsed = parse_spec(&first, "x").unwrap();
        assert_eq!(&parsed, built.primary(), "{c}");
    }
}

#[test]
fn load_uses_stem_as_label() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("demo.spec");
    std::fs::write(&path, "# two classes\n0.9, 0.7, 0.5\n0.3, 0.2, 0.5\n").unwrap();
    let s = load_spec(&path).unwrap();
    assert_eq!(s.label(), "demo");
    assert_eq!(s.value_classes(), vec![0.9, 0.3]);
}

#[test]
fn missing_file_is_io_error() {
    let e = load_spec(std::path::Path::new("/nonexistent/x.spec")).unwrap_err();
    assert!(matches!(e, SpecFileError::Io { .. }));
    assert!(e.to_string().contains("/nonexistent/x.spec"));
}

#[test]
fn probabilities_must_sum_to_one() {
    assert!(matches!(parse_spec("0.5 0.4 1/3\n0.5 0.6 1/3\n", "x"), Err(SpecFileError::Dist(_))));
    assert!(parse_spec("0.5 0.4 1/3\n0.5 0.6 1/3\n0.5 0.7 1/3\n", "x").is_ok());
}
