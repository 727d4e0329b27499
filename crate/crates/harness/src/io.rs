//! Instance files, episode logs and digests.

use std::fs;
use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use revealed_lp_core::env::Instance;
use revealed_lp_core::episode::EpisodeLog;
use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::{HarnessError, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

pub const CSV_COLUMNS: [&str; 6] = ["day", "mistake", "cumulative_mistakes", "rule_fired", "prediction", "truth"];

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| HarnessError::Io { path: path.display().to_string(), source })?;
    serde_json::from_str(&text).map_err(|source| HarnessError::Json { path: path.display().to_string(), source })
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|source| HarnessError::Json { path: path.display().to_string(), source })?;
    fs::write(path, text + "\n").map_err(|source| HarnessError::Io { path: path.display().to_string(), source })
}

pub fn read_instance(path: &Path) -> Result<Instance> {
    read_json(path)
}

/// Hex SHA-256 of the JSON encoding.
pub fn digest<T: Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("in-memory values serialize");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn log_csv<W: Write>(log: &EpisodeLog, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for d in &log.days {
        w.write_record([
            d.day.to_string(),
            d.mistake.to_string(),
            d.cumulative_mistakes.to_string(),
            d.rule_fired.clone().unwrap_or_default(),
            d.prediction.to_semicolon_string(),
            d.truth.to_semicolon_string(),
        ])?;
    }
    w.flush().map_err(|source| HarnessError::Io { path: "<csv>".into(), source })?;
    Ok(())
}

/// Writes `log` to `path`, or stdout when `path` is `None`.
pub fn emit(log: &EpisodeLog, format: Format, path: Option<&Path>) -> Result<()> {
    let name = path.map_or("<stdout>".to_string(), |p| p.display().to_string());
    let io_err = |source| HarnessError::Io { path: name.clone(), source };
    let mut buf = Vec::new();
    match format {
        Format::Csv => log_csv(log, &mut buf)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut buf, log).map_err(|source| HarnessError::Json { path: name.clone(), source })?;
            buf.push(b'\n');
        }
    }
    match path {
        Some(p) => fs::write(p, buf).map_err(io_err),
        None => std::io::stdout().write_all(&buf).map_err(io_err),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use revealed_lp_core::episode::EpisodeHeader;
    use revealed_lp_core::Vector;

    fn sample() -> EpisodeLog {
        let mut log = EpisodeLog::new(EpisodeHeader { learner: "t".into(), ..Default::default() });
        log.record("h".into(), Vector::from_ratios(&[(1, 2), (-3, 4)]), Vector::from_ints(&[0, 1]), Some("U2".into()));
        log.record("h".into(), Vector::from_ints(&[0, 1]), Vector::from_ints(&[0, 1]), None);
        log
    }

    #[test]
    fn empty_log_is_header_only() {
        let mut buf = Vec::new();
        log_csv(&EpisodeLog::default(), &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "day,mistake,cumulative_mistakes,rule_fired,prediction,truth\n");
    }

    #[test]
    fn csv_reads_back_without_quoting() {
        let mut buf = Vec::new();
        log_csv(&sample(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(!text.contains('"'));
        let mut r = csv::Reader::from_reader(text.as_bytes());
        let rows: Vec<csv::StringRecord> = r.records().map(|x| x.unwrap()).collect();
        assert_eq!(&rows[0][4], "1/2;-3/4");
        assert_eq!(&rows[1][2], "1");
    }

    #[test]
    fn json_round_trip() {
        let dir = std::env::temp_dir().join(format!("revealed-lp-io-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("log.json");
        emit(&sample(), Format::Json, Some(&path)).unwrap();
        let back: EpisodeLog = read_json(&path).unwrap();
        assert_eq!(back, sample());
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(digest(&1u8), digest(&1u8));
        assert_eq!(digest(&1u8).len(), 64);
    }
}
