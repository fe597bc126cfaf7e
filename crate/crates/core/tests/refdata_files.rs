use std::fs;

use yukawa_core::{Dataset, RefDataError, Shell, Source};

#[test]
fn bundled_files_round_trip_from_disk() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    for shell in [Shell::E00, Shell::E01, Shell::E10] {
        let path = dir.join(shell.bundled_file().unwrap());
        let text = fs::read_to_string(&path).unwrap();
        let data = Dataset::load(&path).unwrap();
        assert_eq!(data.to_csv().trim_end(), text.trim_end(), "{}", path.display());
        assert_eq!(Dataset::bundled(shell).unwrap(), data);
    }
}

#[test]
fn every_bundled_energy_is_negative() {
    for shell in [Shell::E00, Shell::E01, Shell::E10] {
        let data = Dataset::bundled(shell).unwrap();
        assert!(data.rows().iter().all(|r| r.energy_kev < 0.0));
        assert!(data.rows().iter().all(|r| r.shell.state().n == r.n && r.shell.state().l == r.l));
    }
}

#[test]
fn written_file_reloads() {
    let dir = std::env::temp_dir().join(format!("yukawa-refdata-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("custom.csv");
    fs::write(&path, "z,shell,n,l,source,energy_kev\n3,E00,0,0,present_work,-0.05405687\n").unwrap();
    let data = Dataset::load(&path).unwrap();
    assert_eq!(data.count(Source::PresentWork), 1);
    assert_eq!(data.get(3, Shell::E00, Source::PresentWork).unwrap().energy_kev, -0.054_056_87);
    fs::remove_dir_all(&dir).unwrap();

    assert!(matches!(Dataset::load(dir.join("absent.csv")), Err(RefDataError::Io { .. })));
}
