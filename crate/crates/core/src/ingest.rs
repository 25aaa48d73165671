//! Line-delimited sensor log parsing with validation, sorting, and
//! per-line error accounting.
//!
//! Formats (one JSON object per line):
//!   location: {"t": "<RFC3339 with offset>", "lat": f64, "lon": f64}
//!   motion:   {"t": "...", "ax","ay","az" (m/s^2), "gx","gy","gz" (rad/s)}
//!   comm:     {"date": "YYYY-MM-DD", "out_calls", "missed_calls",
//!              "out_sms", "in_calls", "in_sms"}

use std::path::Path;

use chrono::{DateTime, NaiveDate, SecondsFormat};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::time::Timestamp;
use crate::types::{CommDay, LocationSample, MotionSample};

#[derive(Debug, Clone, Default)]
pub struct ParseReport {
    /// Non-empty lines that yielded a record.
    pub accepted: usize,
    /// (1-based line number, reason) for every rejected line.
    pub skipped: Vec<(usize, String)>,
    /// Total non-empty lines seen; accepted + skipped.len() == total.
    pub total: usize,
    /// Records dropped as duplicate timestamps/dates (first kept).
    pub duplicates: usize,
}

fn parse_rfc3339(s: &str) -> Result<Timestamp, String> {
    let dt = DateTime::parse_from_rfc3339(s).map_err(|e| format!("bad timestamp {s:?}: {e}"))?;
    Ok(Timestamp::new(dt.timestamp(), dt.offset().local_minus_utc() / 60))
}

pub fn timestamp_to_rfc3339(t: &Timestamp) -> String {
    let dt = DateTime::from_timestamp(t.epoch_seconds, 0)
        .expect("epoch in range")
        .with_timezone(&chrono::FixedOffset::east_opt(t.utc_offset_minutes * 60).expect("offset"));
    dt.to_rfc3339_opts(SecondsFormat::Secs, true)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LocationLine {
    t: String,
    lat: f64,
    lon: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MotionLine {
    t: String,
    ax: f64,
    ay: f64,
    az: f64,
    gx: f64,
    gy: f64,
    gz: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CommLine {
    date: NaiveDate,
    out_calls: u32,
    missed_calls: u32,
    out_sms: u32,
    in_calls: u32,
    in_sms: u32,
}

fn read_lines(path: &Path) -> Result<Vec<String>, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    Ok(text.lines().map(str::to_owned).collect())
}

fn finish<T>(
    mut records: Vec<T>,
    report: &mut ParseReport,
    max_bad_fraction: f64,
    path: &Path,
    mut key: impl FnMut(&T) -> i64,
) -> Result<Vec<T>, Error> {
    if report.total > 0
        && report.skipped.len() as f64 > max_bad_fraction * report.total as f64
    {
        return Err(Error::Schema(format!(
            "{}: {} of {} lines malformed (limit {:.0}%)",
            path.display(),
            report.skipped.len(),
            report.total,
            max_bad_fraction * 100.0
        )));
    }
    // stable sort, then keep the first record per timestamp
    records.sort_by_key(|r| key(r));
    let before = records.len();
    let mut last: Option<i64> = None;
    records.retain(|r| {
        let k = key(r);
        if last == Some(k) {
            false
        } else {
            last = Some(k);
            true
        }
    });
    report.duplicates = before - records.len();
    Ok(records)
}

macro_rules! parse_lines {
    ($path:expr, $line_ty:ty, $convert:expr) => {{
        let lines = read_lines($path)?;
        let mut report = ParseReport::default();
        let mut records = Vec::new();
        for (i, line) in lines.iter().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            report.total += 1;
            let lineno = i + 1;
            match serde_json::from_str::<$line_ty>(line) {
                Ok(raw) => match $convert(raw) {
                    Ok(rec) => {
                        records.push(rec);
                        report.accepted += 1;
                    }
                    Err(msg) => report.skipped.push((lineno, msg)),
                },
                Err(e) => report.skipped.push((lineno, e.to_string())),
            }
        }
        (records, report)
    }};
}

pub fn parse_location_log(
    path: &Path,
    max_bad_fraction: f64,
) -> Result<(Vec<LocationSample>, ParseReport), Error> {
    let (records, mut report) = parse_lines!(path, LocationLine, |raw: LocationLine| {
        let t = parse_rfc3339(&raw.t)?;
        let s = LocationSample { t, lat: raw.lat, lon: raw.lon };
        s.validate().map_err(|e| e.to_string())?;
        Ok::<_, String>(s)
    });
    let records = finish(records, &mut report, max_bad_fraction, path, |s| s.t.epoch_seconds)?;
    Ok((records, report))
}

pub fn parse_motion_log(
    path: &Path,
    max_bad_fraction: f64,
) -> Result<(Vec<MotionSample>, ParseReport), Error> {
    let (records, mut report) = parse_lines!(path, MotionLine, |raw: MotionLine| {
        let t = parse_rfc3339(&raw.t)?;
        let s = MotionSample { t, accel: [raw.ax, raw.ay, raw.az], gyro: [raw.gx, raw.gy, raw.gz] };
        s.validate().map_err(|e| e.to_string())?;
        Ok::<_, String>(s)
    });
    let records = finish(records, &mut report, max_bad_fraction, path, |s| s.t.epoch_seconds)?;
    Ok((records, report))
}

pub fn parse_comm_log(
    path: &Path,
    max_bad_fraction: f64,
) -> Result<(Vec<CommDay>, ParseReport), Error> {
    let (records, mut report) = parse_lines!(path, CommLine, |raw: CommLine| {
        Ok::<_, String>(CommDay {
            date: raw.date,
            out_calls: raw.out_calls,
            missed_calls: raw.missed_calls,
            out_sms: raw.out_sms,
            in_calls: raw.in_calls,
            in_sms: raw.in_sms,
        })
    });
    let records = finish(records, &mut report, max_bad_fraction, path, |d| {
        d.date.signed_duration_since(NaiveDate::from_ymd_opt(1970, 1, 1).unwrap()).num_days()
    })?;
    Ok((records, report))
}

pub fn location_line(s: &LocationSample) -> String {
    serde_json::to_string(&LocationLine { t: timestamp_to_rfc3339(&s.t), lat: s.lat, lon: s.lon })
        .expect("serializes")
}

pub fn motion_line(s: &MotionSample) -> String {
    serde_json::to_string(&MotionLine {
        t: timestamp_to_rfc3339(&s.t),
        ax: s.accel[0],
        ay: s.accel[1],
        az: s.accel[2],
        gx: s.gyro[0],
        gy: s.gyro[1],
        gz: s.gyro[2],
    })
    .expect("serializes")
}

pub fn comm_line(d: &CommDay) -> String {
    serde_json::to_string(&CommLine {
        date: d.date,
        out_calls: d.out_calls,
        missed_calls: d.missed_calls,
        out_sms: d.out_sms,
        in_calls: d.in_calls,
        in_sms: d.in_sms,
    })
    .expect("serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_file(dir: &tempfile::TempDir, name: &str, content: &str) -> std::path::PathBuf {
        let path = dir.path().join(name);
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(content.as_bytes()).unwrap();
        path
    }

    #[test]
    fn out_of_order_lines_get_sorted() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(
            &dir,
            "loc.jsonl",
            "{\"t\":\"2021-06-07T02:00:00-06:00\",\"lat\":41.88,\"lon\":-87.63}\n\
             {\"t\":\"2021-06-07T01:00:00-06:00\",\"lat\":41.89,\"lon\":-87.64}\n",
        );
        let (recs, report) = parse_location_log(&path, 0.05).unwrap();
        assert_eq!(report.accepted, 2);
        assert!(report.skipped.is_empty());
        assert!(recs[0].t.epoch_seconds < recs[1].t.epoch_seconds);
        assert_eq!(recs[0].t.utc_offset_minutes, -360);
    }

    #[test]
    fn range_violation_reported_with_line_number() {
        let dir = tempfile::tempdir().unwrap();
        let mut content = String::new();
        for i in 0..40 {
            content.push_str(&format!(
                "{{\"t\":\"2021-06-07T01:{:02}:00Z\",\"lat\":41.88,\"lon\":-87.63}}\n",
                i
            ));
        }
        content.push_str("{\"t\":\"2021-06-07T02:00:00Z\",\"lat\":123.0,\"lon\":-87.63}\n");
        let path = write_file(&dir, "loc.jsonl", &content);
        let (recs, report) = parse_location_log(&path, 0.05).unwrap();
        assert_eq!(recs.len(), 40);
        assert_eq!(report.skipped.len(), 1);
        assert_eq!(report.skipped[0].0, 41);
        assert_eq!(report.accepted + report.skipped.len(), report.total);
    }

    #[test]
    fn too_many_bad_lines_is_a_hard_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(
            &dir,
            "loc.jsonl",
            "not json\n{\"t\":\"2021-06-07T01:00:00Z\",\"lat\":41.88,\"lon\":-87.63}\n",
        );
        assert!(matches!(parse_location_log(&path, 0.05), Err(Error::Schema(_))));
    }

    #[test]
    fn duplicate_timestamps_keep_first() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(
            &dir,
            "loc.jsonl",
            "{\"t\":\"2021-06-07T01:00:00Z\",\"lat\":41.88,\"lon\":-87.63}\n\
             {\"t\":\"2021-06-07T01:00:00Z\",\"lat\":0.0,\"lon\":0.0}\n",
        );
        let (recs, report) = parse_location_log(&path, 0.5).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].lat, 41.88);
        assert_eq!(report.duplicates, 1);
    }

    #[test]
    fn motion_and_comm_round_trip_idempotent() {
        let dir = tempfile::tempdir().unwrap();
        let motion_text = "{\"t\":\"2021-06-07T01:00:05Z\",\"ax\":0.0,\"ay\":0.1,\"az\":9.8,\"gx\":0.0,\"gy\":0.0,\"gz\":0.01}\n\
                           {\"t\":\"2021-06-07T01:00:00Z\",\"ax\":0.5,\"ay\":0.0,\"az\":9.7,\"gx\":0.02,\"gy\":0.0,\"gz\":0.0}\n";
        let path = write_file(&dir, "motion.jsonl", motion_text);
        let (recs, _) = parse_motion_log(&path, 0.05).unwrap();
        let reserialized: String = recs.iter().map(|r| motion_line(r) + "\n").collect();
        let path2 = write_file(&dir, "motion2.jsonl", &reserialized);
        let (recs2, _) = parse_motion_log(&path2, 0.05).unwrap();
        assert_eq!(recs, recs2);

        let comm_text = "{\"date\":\"2021-06-08\",\"out_calls\":5,\"missed_calls\":1,\"out_sms\":8,\"in_calls\":3,\"in_sms\":4}\n\
                         {\"date\":\"2021-06-07\",\"out_calls\":4,\"missed_calls\":0,\"out_sms\":7,\"in_calls\":2,\"in_sms\":2}\n";
        let path = write_file(&dir, "comm.jsonl", comm_text);
        let (days, _) = parse_comm_log(&path, 0.05).unwrap();
        assert_eq!(days[0].date.to_string(), "2021-06-07");
        let reserialized: String = days.iter().map(|d| comm_line(d) + "\n").collect();
        let path2 = write_file(&dir, "comm2.jsonl", &reserialized);
        let (days2, _) = parse_comm_log(&path2, 0.05).unwrap();
        assert_eq!(days, days2);
    }

    #[test]
    fn negative_counts_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_file(
            &dir,
            "comm.jsonl",
            "{\"date\":\"2021-06-07\",\"out_calls\":-2,\"missed_calls\":0,\"out_sms\":0,\"in_calls\":0,\"in_sms\":0}\n",
        );
        assert!(parse_comm_log(&path, 0.05).is_err());
    }

    #[test]
    fn unreadable_file_is_io_error() {
        let missing = std::path::Path::new("/nonexistent/loc.jsonl");
        assert!(matches!(parse_location_log(missing, 0.05), Err(Error::Io { .. })));
    }
}
