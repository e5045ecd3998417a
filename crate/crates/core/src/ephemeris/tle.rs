//! Two-line element sets.
//!
//! Accepts 2-line groups and 3-line groups with a leading name line (an
//! optional `0 ` prefix is stripped). Lines must be exactly 69 characters
//! after trailing whitespace is removed.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

/// One parsed element set. Angles in degrees, mean motion in rev/day.
#[derive(Debug, Clone, PartialEq)]
pub struct TleRecord {
    pub name: Option<String>,
    pub catalog_number: u32,
    pub classification: char,
    pub international_designator: String,
    pub epoch_year: i32,
    /// Fractional day of year, 1.0 is January 1st 00:00 UTC.
    pub epoch_day: f64,
    /// Days since 2000-01-01 12:00 UTC.
    pub epoch_j2000_days: f64,
    pub mean_motion_dot: f64,
    pub mean_motion_ddot: f64,
    pub bstar: f64,
    pub element_set: u32,
    pub inclination_deg: f64,
    pub raan_deg: f64,
    pub eccentricity: f64,
    pub arg_perigee_deg: f64,
    pub mean_anomaly_deg: f64,
    pub mean_motion_rev_day: f64,
    pub revolution_number: u32,
    pub checksum_valid: bool,
    pub line1: String,
    pub line2: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TleErrorKind {
    Truncated { length: usize },
    TooLong { length: usize },
    LineNumber { expected: char },
    Checksum { expected: u8, found: char },
    Field(&'static str),
    CatalogMismatch,
    MissingLine,
}

/// Parse failure tagged with the 1-based input line it refers to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TleError {
    pub line: usize,
    pub kind: TleErrorKind,
}

impl fmt::Display for TleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: ", self.line)?;
        match &self.kind {
            TleErrorKind::Truncated { length } => write!(f, "truncated line ({length} of 69 characters)"),
            TleErrorKind::TooLong { length } => write!(f, "line has {length} characters, expected 69"),
            TleErrorKind::LineNumber { expected } => write!(f, "expected line number {expected}"),
            TleErrorKind::Checksum { expected, found } => {
                write!(f, "checksum mismatch (computed {expected}, found '{found}')")
            }
            TleErrorKind::Field(name) => write!(f, "invalid {name}"),
            TleErrorKind::CatalogMismatch => f.write_str("catalog numbers of line 1 and line 2 differ"),
            TleErrorKind::MissingLine => f.write_str("element set is missing a line"),
        }
    }
}

impl core::error::Error for TleError {}

/// Modulo-10 checksum over the first 68 characters: digits count their
/// value, `-` counts one, everything else zero.
pub fn tle_checksum(line: &str) -> u8 {
    let sum: u32 = line
        .bytes()
        .take(68)
        .map(|b| match b {
            b'0'..=b'9' => (b - b'0') as u32,
            b'-' => 1,
            _ => 0,
        })
        .sum();
    (sum % 10) as u8
}

/// Records accepted and groups rejected in skip-and-report mode.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TleParseReport {
    pub records: Vec<TleRecord>,
    pub rejected: Vec<TleError>,
}

/// Strict parse: the first malformed group aborts with its error.
pub fn parse_tle(text: &str) -> Result<Vec<TleRecord>, TleError> {
    let mut out = Vec::new();
    for group in groups(text) {
        out.push(group?);
    }
    Ok(out)
}

/// Parses every well-formed group and reports the rest.
pub fn parse_tle_lenient(text: &str) -> TleParseReport {
    let mut report = TleParseReport::default();
    for group in groups(text) {
        match group {
            Ok(r) => report.records.push(r),
            Err(e) => report.rejected.push(e),
        }
    }
    report
}

fn is_element_line(s: &str, number: u8) -> bool {
    let b = s.as_bytes();
    b.len() >= 2 && b[0] == number && b[1] == b' '
}

fn groups(text: &str) -> impl Iterator<Item = Result<TleRecord, TleError>> + '_ {
    let lines: Vec<(usize, &str)> =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end())).filter(|(_, l)| !l.is_empty()).collect();
    let mut i = 0;
    core::iter::from_fn(move || {
        if i >= lines.len() {
            return None;
        }
        let (n0, l0) = lines[i];
        let (name, first) = if is_element_line(l0, b'1') {
            (None, i)
        } else {
            let name = l0.strip_prefix("0 ").unwrap_or(l0).trim().to_string();
            (Some(name), i + 1)
        };
        let Some(&(n1, l1)) = lines.get(first) else {
            i = lines.len();
            return Some(Err(TleError { line: n0, kind: TleErrorKind::MissingLine }));
        };
        if !is_element_line(l1, b'1') {
            i = first + 1;
            return Some(Err(TleError { line: n1, kind: TleErrorKind::LineNumber { expected: '1' } }));
        }
        let Some(&(n2, l2)) = lines.get(first + 1) else {
            i = lines.len();
            return Some(Err(TleError { line: n1, kind: TleErrorKind::MissingLine }));
        };
        if !is_element_line(l2, b'2') {
            // line 2 may be the start of the next group
            i = first + 1;
            return Some(Err(TleError { line: n2, kind: TleErrorKind::LineNumber { expected: '2' } }));
        }
        i = first + 2;
        Some(parse_pair(name, (n1, l1), (n2, l2)))
    })
}

fn check_line(n: usize, line: &str) -> Result<(), TleError> {
    let len = line.chars().count();
    if len < 69 {
        return Err(TleError { line: n, kind: TleErrorKind::Truncated { length: len } });
    }
    if len > 69 || !line.is_ascii() {
        return Err(TleError { line: n, kind: TleErrorKind::TooLong { length: len } });
    }
    let found = line.as_bytes()[68] as char;
    let expected = tle_checksum(line);
    if found.to_digit(10) != Some(expected as u32) {
        return Err(TleError { line: n, kind: TleErrorKind::Checksum { expected, found } });
    }
    Ok(())
}

/// Columns are 1-based and inclusive, as in the format definition.
fn col(line: &str, from: usize, to: usize) -> &str {
    &line[from - 1..to]
}

fn field<T: core::str::FromStr>(
    line: &str,
    n: usize,
    from: usize,
    to: usize,
    name: &'static str,
) -> Result<T, TleError> {
    col(line, from, to).trim().parse().map_err(|_| TleError { line: n, kind: TleErrorKind::Field(name) })
}

/// Assumed-decimal exponent notation such as ` 12345-3` = `0.12345e-3`.
fn implied_exponent(line: &str, n: usize, from: usize, to: usize, name: &'static str) -> Result<f64, TleError> {
    let err = || TleError { line: n, kind: TleErrorKind::Field(name) };
    let raw = col(line, from, to).trim();
    if raw.is_empty() {
        return Ok(0.0);
    }
    let (sign, rest) = match raw.as_bytes()[0] {
        b'-' => (-1.0, &raw[1..]),
        b'+' => (1.0, &raw[1..]),
        _ => (1.0, raw),
    };
    let split = rest.rfind(['-', '+']).ok_or_else(err)?;
    let (mantissa, exponent) = rest.split_at(split);
    if mantissa.is_empty() || !mantissa.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let m: f64 = mantissa.parse().map_err(|_| err())?;
    let e: i32 = exponent.parse().map_err(|_| err())?;
    let scale = 10.0f64.powi(e - mantissa.len() as i32);
    Ok(sign * m * scale)
}

/// Days from 1970-01-01 to the given proleptic Gregorian date.
pub(crate) fn days_from_civil(y: i64, m: u32, d: u32) -> i64 {
    let y = if m <= 2 { y - 1 } else { y };
    let era = if y >= 0 { y } else { y - 399 } / 400;
    let yoe = y - era * 400;
    let mp = (m as i64 + 9) % 12;
    let doy = (153 * mp + 2) / 5 + d as i64 - 1;
    let doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    era * 146_097 + doe - 719_468
}

/// Days since 2000-01-01 12:00 for a (year, fractional day-of-year) epoch.
pub fn epoch_to_j2000_days(year: i32, day_of_year: f64) -> f64 {
    let jan1 = days_from_civil(year as i64, 1, 1) - days_from_civil(2000, 1, 1);
    jan1 as f64 + (day_of_year - 1.0) - 0.5
}

fn parse_pair(name: Option<String>, (n1, l1): (usize, &str), (n2, l2): (usize, &str)) -> Result<TleRecord, TleError> {
    check_line(n1, l1)?;
    check_line(n2, l2)?;
    let catalog_number: u32 = field(l1, n1, 3, 7, "catalog number")?;
    let catalog2: u32 = field(l2, n2, 3, 7, "catalog number")?;
    if catalog_number != catalog2 {
        return Err(TleError { line: n2, kind: TleErrorKind::CatalogMismatch });
    }
    let classification = col(l1, 8, 8).chars().next().unwrap_or(' ');
    let yy: i32 = field(l1, n1, 19, 20, "epoch year")?;
    let epoch_year = if yy < 57 { 2000 + yy } else { 1900 + yy };
    let epoch_day: f64 = field(l1, n1, 21, 32, "epoch day")?;
    if !(1.0..367.0).contains(&epoch_day) {
        return Err(TleError { line: n1, kind: TleErrorKind::Field("epoch day") });
    }
    let mean_motion_dot: f64 = field(l1, n1, 34, 43, "first derivative of mean motion")?;
    let mean_motion_ddot = implied_exponent(l1, n1, 45, 52, "second derivative of mean motion")?;
    let bstar = implied_exponent(l1, n1, 54, 61, "drag term")?;
    let element_set: u32 = field(l1, n1, 65, 68, "element set number").unwrap_or(0);

    let inclination_deg: f64 = field(l2, n2, 9, 16, "inclination")?;
    let raan_deg: f64 = field(l2, n2, 18, 25, "right ascension")?;
    let ecc_digits = col(l2, 27, 33).trim();
    if ecc_digits.is_empty() || !ecc_digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(TleError { line: n2, kind: TleErrorKind::Field("eccentricity") });
    }
    let eccentricity =
        ecc_digits.parse::<f64>().map_err(|_| TleError { line: n2, kind: TleErrorKind::Field("eccentricity") })?
            / 10.0f64.powi(ecc_digits.len() as i32);
    let arg_perigee_deg: f64 = field(l2, n2, 35, 42, "argument of perigee")?;
    let mean_anomaly_deg: f64 = field(l2, n2, 44, 51, "mean anomaly")?;
    let mean_motion_rev_day: f64 = field(l2, n2, 53, 63, "mean motion")?;
    let revolution_number: u32 = field(l2, n2, 64, 68, "revolution number").unwrap_or(0);
    if !(0.0..=180.0).contains(&inclination_deg) {
        return Err(TleError { line: n2, kind: TleErrorKind::Field("inclination") });
    }
    if !(mean_motion_rev_day > 0.0) {
        return Err(TleError { line: n2, kind: TleErrorKind::Field("mean motion") });
    }
    Ok(TleRecord {
        name,
        catalog_number,
        classification,
        international_designator: col(l1, 10, 17).trim().to_string(),
        epoch_year,
        epoch_day,
        epoch_j2000_days: epoch_to_j2000_days(epoch_year, epoch_day),
        mean_motion_dot,
        mean_motion_ddot,
        bstar,
        element_set,
        inclination_deg,
        raan_deg,
        eccentricity,
        arg_perigee_deg,
        mean_anomaly_deg,
        mean_motion_rev_day,
        revolution_number,
        checksum_valid: true,
        line1: l1.to_string(),
        line2: l2.to_string(),
    })
}
