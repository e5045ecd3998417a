//! TLE files, time parsing and the SGP4 backend.

use std::path::Path;

use chrono::DateTime;
use stbeam_core::ephemeris::orbit::inertial_to_fixed;
use stbeam_core::ephemeris::{
    parse_tle, parse_tle_lenient, Propagator, SatState, TleError, TleRecord, STALE_LIMIT_DAYS,
};
use stbeam_core::Error as CoreError;

use crate::error::{AppError, AppResult};

/// Unix time of 2000-01-01 12:00:00 UTC.
const J2000_UNIX_S: i64 = 946_728_000;

/// Records read from a file, with rejected groups when parsed leniently.
#[derive(Debug, Clone)]
pub struct TleFile {
    pub records: Vec<TleRecord>,
    pub rejected: Vec<TleError>,
}

pub fn read_tle_file(path: &Path, strict: bool) -> AppResult<TleFile> {
    let text = std::fs::read_to_string(path).map_err(|source| AppError::Io { path: path.to_path_buf(), source })?;
    let file = if strict {
        let records = parse_tle(&text).map_err(|e| AppError::Tle(format!("{}: {e}", path.display())))?;
        TleFile { records, rejected: Vec::new() }
    } else {
        let report = parse_tle_lenient(&text);
        TleFile { records: report.records, rejected: report.rejected }
    };
    if file.records.is_empty() {
        return Err(AppError::Tle(format!("{}: no valid element sets", path.display())));
    }
    Ok(file)
}

/// Picks a record by name (case-insensitive) or catalog number; `None` takes the first.
pub fn select<'a>(records: &'a [TleRecord], key: Option<&str>) -> AppResult<&'a TleRecord> {
    let Some(key) = key else {
        return records.first().ok_or_else(|| AppError::Tle("no element sets".into()));
    };
    let key = key.trim();
    let by_number = key.parse::<u32>().ok();
    records
        .iter()
        .find(|r| {
            by_number == Some(r.catalog_number) || r.name.as_deref().is_some_and(|n| n.trim().eq_ignore_ascii_case(key))
        })
        .ok_or_else(|| AppError::Tle(format!("satellite {key:?} not found")))
}

/// RFC 3339 timestamp to days since J2000 (UTC, leap seconds ignored).
pub fn parse_time_j2000(s: &str) -> AppResult<f64> {
    let t = DateTime::parse_from_rfc3339(s.trim())
        .map_err(|e| AppError::config(format!("tle.time: {s:?} is not an RFC 3339 timestamp ({e})")))?;
    let secs = (t.timestamp() - J2000_UNIX_S) as f64 + f64::from(t.timestamp_subsec_nanos()) * 1e-9;
    Ok(secs / 86_400.0)
}

/// SGP4 from the `sgp4` crate, rotated from TEME to Earth-fixed with GMST.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sgp4;

impl Propagator for Sgp4 {
    fn propagate(&self, record: &TleRecord, t_j2000_days: f64) -> stbeam_core::Result<SatState> {
        let days = t_j2000_days - record.epoch_j2000_days;
        if !days.is_finite() || days.abs() > STALE_LIMIT_DAYS {
            return Err(CoreError::StaleEphemeris { days_from_epoch: days });
        }
        let elements = sgp4::Elements::from_tle(record.name.clone(), record.line1.as_bytes(), record.line2.as_bytes())
            .map_err(|_| CoreError::InvalidArgument("element set rejected by SGP4"))?;
        let constants = sgp4::Constants::from_elements(&elements)
            .map_err(|_| CoreError::InvalidArgument("element set outside the SGP4 domain"))?;
        let p = constants
            .propagate(sgp4::MinutesSinceEpoch(days * 1440.0))
            .map_err(|_| CoreError::InvalidArgument("SGP4 propagation diverged"))?;
        let km = |v: [f64; 3]| [v[0] * 1e3, v[1] * 1e3, v[2] * 1e3];
        let (position, velocity) = inertial_to_fixed(km(p.position), km(p.velocity), t_j2000_days);
        Ok(SatState { position, velocity, epoch_offset_s: days * 86_400.0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use stbeam_core::ephemeris::{norm3, sub3, TwoBody};

    const ISS: &str = "ISS (ZARYA)
1 25544U 98067A   08264.51782528 -.00002182  00000-0 -11606-4 0  2927
2 25544  51.6416 247.4627 0006703 130.5360 325.0288 15.72125391563537
";

    #[test]
    fn j2000_epoch() {
        assert_eq!(parse_time_j2000("2000-01-01T12:00:00Z").unwrap(), 0.0);
        assert_eq!(parse_time_j2000("2000-01-02T00:00:00+00:00").unwrap(), 0.5);
        assert!(parse_time_j2000("yesterday").is_err());
    }

    #[test]
    fn sgp4_tracks_two_body_near_epoch() {
        let r = parse_tle(ISS).unwrap().remove(0);
        let t = r.epoch_j2000_days + 10.0 / 1440.0;
        let a = Sgp4.propagate(&r, t).unwrap();
        let b = TwoBody.propagate(&r, t).unwrap();
        // mean vs osculating elements differ by kilometres, not hundreds
        assert!(norm3(sub3(a.position, b.position)) < 50e3);
        assert!(norm3(sub3(a.velocity, b.velocity)) < 100.0);
        assert!(Sgp4.propagate(&r, r.epoch_j2000_days + 8.0).is_err());
    }

    #[test]
    fn select_by_name_and_number() {
        let recs = parse_tle(ISS).unwrap();
        assert_eq!(select(&recs, Some("iss (zarya)")).unwrap().catalog_number, 25544);
        assert_eq!(select(&recs, Some("25544")).unwrap().catalog_number, 25544);
        assert!(select(&recs, Some("HUBBLE")).is_err());
        assert!(select(&recs, None).is_ok());
    }
}
