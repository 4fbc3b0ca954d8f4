//! JSON file cache for census results, keyed by (n, predicate, tool
//! version). Table-reproduction sweeps re-run the same censuses; a hit
//! skips the enumeration entirely. Unreadable or stale records are
//! treated as misses.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::{CensusReport, ClassCounts};
use crate::classify::IncidencePredicate;

pub const SCHEMA_VERSION: u32 = 1;

fn tool_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

#[derive(Debug, Serialize, Deserialize)]
struct CacheRecord {
    schema_version: u32,
    tool_version: String,
    n: u32,
    predicate: IncidencePredicate,
    counts: ClassCounts,
    descenders: u64,
    derived_t: u64,
    residual: i64,
    evens: u64,
    elapsed_ms: u64,
    partition_count: usize,
    timestamp: u64,
}

#[derive(Debug, Clone)]
pub struct CensusCache {
    dir: PathBuf,
}

impl CensusCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        CensusCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, n: u32, pred: IncidencePredicate) -> PathBuf {
        let token = pred.to_string().replace('/', "-");
        self.dir.join(format!(
            "census-v{SCHEMA_VERSION}-{}-n{n}-{token}.json",
            tool_version()
        ))
    }

    /// Returns the cached report if a record with the current schema and
    /// tool version exists and parses.
    pub fn load(&self, n: u32, pred: IncidencePredicate) -> Option<CensusReport> {
        let text = fs::read_to_string(self.path(n, pred)).ok()?;
        let record: CacheRecord = serde_json::from_str(&text).ok()?;
        if record.schema_version != SCHEMA_VERSION
            || record.tool_version != tool_version()
            || record.n != n
            || record.predicate != pred
        {
            return None;
        }
        Some(CensusReport {
            n: record.n,
            predicate: record.predicate,
            counts: record.counts,
            descenders: record.descenders,
            derived_t: record.derived_t,
            residual: record.residual,
            evens: record.evens,
            elapsed_ms: record.elapsed_ms,
            partition_count: record.partition_count,
        })
    }

    pub fn store(&self, report: &CensusReport) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let record = CacheRecord {
            schema_version: SCHEMA_VERSION,
            tool_version: tool_version().to_string(),
            n: report.n,
            predicate: report.predicate,
            counts: report.counts,
            descenders: report.descenders,
            derived_t: report.derived_t,
            residual: report.residual,
            evens: report.evens,
            elapsed_ms: report.elapsed_ms,
            partition_count: report.partition_count,
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        };
        let path = self.path(report.n, report.predicate);
        fs::write(path, serde_json::to_string_pretty(&record)?)
    }
}
