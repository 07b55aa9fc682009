use lkhom_core::spaces::{check_certificate_bundle, verify_main_theorem, write_certificate_bundle, Budget, SpacesError};

#[test]
fn bundle_round_trip() {
    let certs = verify_main_theorem(3, 3, &Budget::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    write_certificate_bundle(dir.path(), &certs).unwrap();
    assert_eq!(check_certificate_bundle(dir.path()).unwrap(), certs.len());
}

#[test]
fn tampered_bundle_is_rejected() {
    let certs = verify_main_theorem(3, 2, &Budget::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    write_certificate_bundle(dir.path(), &certs).unwrap();
    let path = dir.path().join(format!("{}.json", certs[0].key.to_hex()));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["certificate"]["combination"][0]["coeff"] = "2/3".into();
    std::fs::write(&path, v.to_string()).unwrap();
    assert!(matches!(
        check_certificate_bundle(dir.path()),
        Err(SpacesError::Certificate { .. } | SpacesError::BadBundle { .. })
    ));
}

#[test]
fn wrong_target_is_rejected() {
    let certs = verify_main_theorem(4, 2, &Budget::default()).unwrap();
    assert!(certs.len() >= 2);
    let dir = tempfile::tempdir().unwrap();
    write_certificate_bundle(dir.path(), &certs).unwrap();
    let path = dir.path().join(format!("{}.json", certs[0].key.to_hex()));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["key"] = certs[1].key.to_hex().into();
    std::fs::write(&path, v.to_string()).unwrap();
    assert!(matches!(check_certificate_bundle(dir.path()), Err(SpacesError::BadBundle { .. })));
}
