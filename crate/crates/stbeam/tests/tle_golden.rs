use std::path::PathBuf;

use stbeam::tle_io::read_tle_file;
use stbeam_core::ephemeris::{parse_tle_lenient, tle_checksum, TleErrorKind};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

struct Label {
    name: String,
    line1: usize,
    accepted: bool,
}

fn labels() -> Vec<Label> {
    let mut r = csv::Reader::from_path(data("golden_labels.csv")).unwrap();
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            Label { name: rec[0].to_string(), line1: rec[1].parse().unwrap(), accepted: rec[2].parse().unwrap() }
        })
        .collect()
}

/// Second independent checksum: digits count their value, '-' counts one.
fn oracle_checksum(line: &str) -> u32 {
    line.chars().take(68).map(|c| if c == '-' { 1 } else { c.to_digit(10).unwrap_or(0) }).sum::<u32>() % 10
}

#[test]
fn golden_file_has_enough_records() {
    let labels = labels();
    assert!(labels.len() >= 50);
    assert!(labels.iter().any(|l| !l.accepted));
    assert!(labels.iter().filter(|l| l.accepted).count() > labels.len() / 2);
}

#[test]
fn checksum_acceptance_matches_labels() {
    let text = std::fs::read_to_string(data("golden.tle")).unwrap();
    let report = parse_tle_lenient(&text);
    let labels = labels();
    let accepted: Vec<_> = report.records.iter().map(|r| r.name.clone().unwrap()).collect();
    let expected: Vec<_> = labels.iter().filter(|l| l.accepted).map(|l| l.name.clone()).collect();
    assert_eq!(accepted, expected);

    let lines: Vec<&str> = text.lines().collect();
    for l in labels.iter().filter(|l| !l.accepted) {
        let e = report
            .rejected
            .iter()
            .find(|e| e.line == l.line1 || e.line == l.line1 + 1)
            .unwrap_or_else(|| panic!("{}", l.name));
        assert!(matches!(e.kind, TleErrorKind::Checksum { .. }), "{}: {:?}", l.name, e.kind);
    }
    assert_eq!(report.rejected.len(), labels.iter().filter(|l| !l.accepted).count());

    for line in lines.iter().filter(|s| s.starts_with("1 ") || s.starts_with("2 ")) {
        assert_eq!(u32::from(tle_checksum(line)), oracle_checksum(line));
    }
}

#[test]
fn strict_mode_stops_at_first_bad_group() {
    let err = read_tle_file(&data("golden.tle"), true).unwrap_err();
    assert_eq!(err.exit_code(), 4);
    let lenient = read_tle_file(&data("golden.tle"), false).unwrap();
    assert_eq!(lenient.records.len() + lenient.rejected.len(), 60);
}

#[test]
fn missing_file_is_io_error() {
    let err = read_tle_file(&data("nope.tle"), false).unwrap_err();
    assert_eq!(err.exit_code(), 3);
    assert!(err.to_string().contains("nope.tle"));
}
