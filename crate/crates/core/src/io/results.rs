use std::io::Write;
use std::path::Path;

use thiserror::Error;

use super::format_real;
use crate::experiments::{SweepRow, TrialRecord};
use crate::stats::TrialStats;

const TRIAL_COLUMNS: [&str; 4] = ["trial_index", "greedy_length", "optimal_length", "excess_ratio_pct"];
const SWEEP_COLUMNS: [&str; 8] = ["sweep_key", "mean", "q1", "median", "q3", "min", "max", "trials"];

#[derive(Debug, Error)]
pub enum ResultsError {
    #[error("refusing to write a results table with no rows")]
    Empty,
    #[error("malformed results file: {0}")]
    Malformed(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Header lines written as `# key: value` ahead of the CSV body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metadata {
    pub tool_version: String,
    pub master_seed: u64,
    pub rng_algorithm: String,
    pub config: String,
}

impl Metadata {
    pub fn new(master_seed: u64, config: impl Into<String>) -> Self {
        Self {
            tool_version: format!("opentsp {}", crate::VERSION),
            master_seed,
            rng_algorithm: crate::noise::RNG_ALGORITHM.to_string(),
            config: config.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TableBody {
    Trials(Vec<TrialRecord>),
    Sweep(Vec<SweepRow>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultsTable {
    pub metadata: Metadata,
    pub body: TableBody,
}

impl ResultsTable {
    pub fn trials(metadata: Metadata, records: Vec<TrialRecord>) -> Self {
        Self { metadata, body: TableBody::Trials(records) }
    }

    pub fn sweep(metadata: Metadata, rows: Vec<SweepRow>) -> Self {
        Self { metadata, body: TableBody::Sweep(rows) }
    }

    pub fn is_empty(&self) -> bool {
        match &self.body {
            TableBody::Trials(r) => r.is_empty(),
            TableBody::Sweep(r) => r.is_empty(),
        }
    }
}

/// Encodes a table; the output is a pure function of the table.
pub fn results_csv_bytes(table: &ResultsTable) -> Result<Vec<u8>, ResultsError> {
    if table.is_empty() {
        return Err(ResultsError::Empty);
    }
    let m = &table.metadata;
    let mut out = Vec::new();
    for (key, value) in [
        ("tool", m.tool_version.as_str()),
        ("master_seed", &m.master_seed.to_string()),
        ("rng", m.rng_algorithm.as_str()),
        ("config", m.config.as_str()),
    ] {
        writeln!(out, "# {key}: {}", value.replace('\n', " "))?;
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    match &table.body {
        TableBody::Trials(records) => {
            w.write_record(TRIAL_COLUMNS)?;
            for r in records {
                w.write_record([
                    r.trial_index.to_string(),
                    format_real(r.greedy_length),
                    format_real(r.optimal_length),
                    format_real(r.excess_ratio),
                ])?;
            }
        }
        TableBody::Sweep(rows) => {
            w.write_record(SWEEP_COLUMNS)?;
            for row in rows {
                let s = row.stats;
                let mut fields: Vec<String> =
                    [row.key, s.mean, s.q1, s.median, s.q3, s.min, s.max].into_iter().map(format_real).collect();
                fields.push(s.trials.to_string());
                w.write_record(&fields)?;
            }
        }
    }
    w.into_inner().map_err(|e| ResultsError::Io(e.into_error()))
}

/// Writes the table to `path`. Nothing is created if encoding fails.
pub fn write_results_csv(table: &ResultsTable, path: &Path) -> Result<usize, ResultsError> {
    let bytes = results_csv_bytes(table)?;
    std::fs::write(path, &bytes)?;
    Ok(bytes.len())
}

pub fn parse_results_csv(text: &[u8]) -> Result<ResultsTable, ResultsError> {
    let text = std::str::from_utf8(text).map_err(|e| ResultsError::Malformed(e.to_string()))?;
    let mut meta = std::collections::HashMap::new();
    for line in text.lines().take_while(|l| l.starts_with('#')) {
        let (key, value) = line[1..]
            .trim_start()
            .split_once(": ")
            .ok_or_else(|| ResultsError::Malformed(format!("metadata line `{line}`")))?;
        meta.insert(key.to_string(), value.to_string());
    }
    let mut take =
        |key: &str| meta.remove(key).ok_or_else(|| ResultsError::Malformed(format!("missing metadata `{key}`")));
    let metadata = Metadata {
        tool_version: take("tool")?,
        master_seed: take("master_seed")?.parse().map_err(|e| ResultsError::Malformed(format!("master_seed: {e}")))?,
        rng_algorithm: take("rng")?,
        config: take("config")?,
    };

    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let real = |s: &str| s.parse::<f64>().map_err(|e| ResultsError::Malformed(format!("`{s}`: {e}")));
    let count = |s: &str| s.parse::<usize>().map_err(|e| ResultsError::Malformed(format!("`{s}`: {e}")));

    let body = if header == TRIAL_COLUMNS {
        let mut records = Vec::new();
        for rec in reader.records() {
            let rec = rec?;
            records.push(TrialRecord {
                trial_index: count(&rec[0])?,
                greedy_length: real(&rec[1])?,
                optimal_length: real(&rec[2])?,
                excess_ratio: real(&rec[3])?,
            });
        }
        TableBody::Trials(records)
    } else if header == SWEEP_COLUMNS {
        let mut rows = Vec::new();
        for rec in reader.records() {
            let rec = rec?;
            rows.push(SweepRow {
                key: real(&rec[0])?,
                stats: TrialStats {
                    mean: real(&rec[1])?,
                    q1: real(&rec[2])?,
                    median: real(&rec[3])?,
                    q3: real(&rec[4])?,
                    min: real(&rec[5])?,
                    max: real(&rec[6])?,
                    trials: count(&rec[7])?,
                },
            });
        }
        TableBody::Sweep(rows)
    } else {
        return Err(ResultsError::Malformed(format!("unknown header {header:?}")));
    };
    Ok(ResultsTable { metadata, body })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn meta() -> Metadata {
        Metadata::new(42, "n=3 trials=1")
    }

    #[test]
    fn worked_record_row() {
        let rec = TrialRecord { trial_index: 0, greedy_length: 5.5, optimal_length: 5.0, excess_ratio: 10.0 };
        let bytes = results_csv_bytes(&ResultsTable::trials(meta(), vec![rec])).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], format!("# tool: opentsp {}", crate::VERSION));
        assert_eq!(lines[1], "# master_seed: 42");
        assert!(lines[2].starts_with("# rng: ChaCha8Rng"));
        assert_eq!(lines[3], "# config: n=3 trials=1");
        assert_eq!(lines[4], "trial_index,greedy_length,optimal_length,excess_ratio_pct");
        assert_eq!(lines[5], "0,5.5,5,10");
        assert!(!text.contains('\r'));
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn empty_table_is_rejected_without_creating_a_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        let err = write_results_csv(&ResultsTable::trials(meta(), vec![]), &path).unwrap_err();
        assert!(matches!(err, ResultsError::Empty));
        assert!(!path.exists());
    }

    #[test]
    fn sweep_table_round_trips() {
        let stats = TrialStats { mean: 7.3, q1: 2.6, median: 5.0, q3: 13.9, min: 0.0, max: 61.25, trials: 1000 };
        let table = ResultsTable::sweep(meta(), vec![SweepRow { key: 11.0, stats }, SweepRow { key: 0.05, stats }]);
        let bytes = results_csv_bytes(&table).unwrap();
        assert!(String::from_utf8_lossy(&bytes).contains("\n11,7.3,2.6,5,13.9,0,61.25,1000\n"));
        assert_eq!(parse_results_csv(&bytes).unwrap(), table);
    }

    #[test]
    fn rejects_missing_metadata() {
        assert!(matches!(
            parse_results_csv(b"trial_index,greedy_length,optimal_length,excess_ratio_pct\n0,1,1,0\n"),
            Err(ResultsError::Malformed(_))
        ));
    }

    proptest! {
        // Values are written with 9 significant digits; the round trip is
        // exact for tables that already carry that precision.
        #[test]
        fn trial_table_round_trips(rows in prop::collection::vec((0.0..1e4f64, 0.0..1e4f64), 1..30)) {
            let records: Vec<TrialRecord> = rows
                .iter()
                .enumerate()
                .map(|(i, &(g, o))| {
                    let q = |v: f64| format_real(v).parse::<f64>().unwrap();
                    TrialRecord { trial_index: i, greedy_length: q(g + o), optimal_length: q(o), excess_ratio: q(g) }
                })
                .collect();
            let table = ResultsTable::trials(meta(), records);
            let bytes = results_csv_bytes(&table).unwrap();
            prop_assert_eq!(parse_results_csv(&bytes).unwrap(), table);
        }
    }
}
