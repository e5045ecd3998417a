//! CSV emission and parsing.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use stbeam_core::ephemeris::FeasibilityCell;

use crate::error::{AppError, AppResult};

pub const RESULT_HEADER: [&str; 8] =
    ["experiment", "scheme", "axis_name", "axis_value", "mean_sum_se_bps_hz", "std_error", "trials", "seed"];

pub const FEASIBILITY_HEADER: [&str; 7] =
    ["lat_deg", "lon_deg", "rel_velocity_mps", "doppler_hz", "delta_f_hz", "retx_interval_us", "feasible"];

/// One Monte Carlo point.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub experiment: String,
    pub scheme: String,
    pub axis_name: String,
    pub axis_value: f64,
    pub mean_sum_se: f64,
    pub std_error: f64,
    pub trials: usize,
    pub seed: u64,
}

/// Six significant digits, plain decimal notation where it stays short,
/// scientific otherwise. Locale independent.
pub fn format_sig6(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> AppError + '_ {
    move |source| AppError::Csv { path: path.to_path_buf(), source }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> AppError + '_ {
    move |source| AppError::Io { path: path.to_path_buf(), source }
}

pub fn write_results<W: Write>(rows: &[ResultRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RESULT_HEADER)?;
    for r in rows {
        w.write_record([
            r.experiment.clone(),
            r.scheme.clone(),
            r.axis_name.clone(),
            format_sig6(r.axis_value),
            format_sig6(r.mean_sum_se),
            format_sig6(r.std_error),
            r.trials.to_string(),
            r.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn results_to_string(rows: &[ResultRow]) -> String {
    let mut buf = Vec::new();
    write_results(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is utf-8")
}

pub fn emit_csv(rows: &[ResultRow], path: &Path) -> AppResult<()> {
    let file = File::create(path).map_err(io_err(path))?;
    write_results(rows, BufWriter::new(file)).map_err(csv_err(path))
}

fn parse_field<T: std::str::FromStr>(record: &csv::StringRecord, idx: usize) -> Result<T, String> {
    let s = record.get(idx).ok_or_else(|| format!("missing column {}", RESULT_HEADER[idx]))?;
    s.parse().map_err(|_| format!("bad value {s:?} in column {}", RESULT_HEADER[idx]))
}

/// Parses CSV text produced by [`write_results`].
pub fn parse_results(text: &str) -> Result<Vec<ResultRow>, String> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| e.to_string())?;
    if header.iter().ne(RESULT_HEADER) {
        return Err(format!("unexpected header {header:?}"));
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        rows.push(ResultRow {
            experiment: parse_field(&rec, 0)?,
            scheme: parse_field(&rec, 1)?,
            axis_name: parse_field(&rec, 2)?,
            axis_value: parse_field(&rec, 3)?,
            mean_sum_se: parse_field(&rec, 4)?,
            std_error: parse_field(&rec, 5)?,
            trials: parse_field(&rec, 6)?,
            seed: parse_field(&rec, 7)?,
        });
    }
    Ok(rows)
}

/// Feasibility cells with shortest round-trip floats; the interval is in
/// microseconds and empty when infinite.
pub fn write_feasibility<W: Write>(cells: &[FeasibilityCell], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(FEASIBILITY_HEADER)?;
    for c in cells {
        let retx = if c.retx_interval_s.is_finite() { format!("{:?}", c.retx_interval_s * 1e6) } else { String::new() };
        w.write_record([
            format!("{:?}", c.lat_deg),
            format!("{:?}", c.lon_deg),
            format!("{:?}", c.rel_velocity_mps),
            format!("{:?}", c.doppler_hz),
            format!("{:?}", c.delta_f_hz),
            retx,
            c.feasible.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_feasibility_csv(cells: &[FeasibilityCell], path: &Path) -> AppResult<()> {
    let file = File::create(path).map_err(io_err(path))?;
    write_feasibility(cells, BufWriter::new(file)).map_err(csv_err(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig6_format() {
        assert_eq!(format_sig6(5.534712), "5.53471");
        assert_eq!(format_sig6(40.0), "40");
        assert_eq!(format_sig6(0.00123456789), "0.00123457");
        assert_eq!(format_sig6(123456789.0), "1.23457e8");
        assert_eq!(format_sig6(-2.5), "-2.5");
        assert_eq!(format_sig6(1.0e-7), "1e-7");
        assert_eq!(format_sig6(999999.5), "1e6");
        assert_eq!(format_sig6(0.0), "0");
    }

    #[test]
    fn header_only_when_empty() {
        assert_eq!(
            results_to_string(&[]),
            "experiment,scheme,axis_name,axis_value,mean_sum_se_bps_hz,std_error,trials,seed\n"
        );
    }

    #[test]
    fn round_trip() {
        let rows = vec![
            ResultRow {
                experiment: "sweep-power".into(),
                scheme: "ST-ZF".into(),
                axis_name: "tx_power_dbm".into(),
                axis_value: 35.0,
                mean_sum_se: 3.88412,
                std_error: 0.0213,
                trials: 2000,
                seed: 9,
            },
            ResultRow {
                experiment: "sweep-m".into(),
                scheme: "ST-SLNR-imperfect".into(),
                axis_name: "m".into(),
                axis_value: 3.0,
                mean_sum_se: 1.5e-7,
                std_error: 0.0,
                trials: 1,
                seed: u64::MAX,
            },
        ];
        assert_eq!(parse_results(&results_to_string(&rows)).unwrap(), rows);
    }
}
