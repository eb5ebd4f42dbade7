#![allow(dead_code)]

pub mod sarif_check;

use std::path::{Path, PathBuf};

use swapcheck::checker::{check_program, CheckContext, CheckReport};
use swapcheck::corpus::collect_source_paths;
use swapcheck::filters::FilterConfig;
use swapcheck::frontend::{scan_sources, ScanOutput};
use swapcheck::naming::FrequencyTable;
use swapcheck::statsdb::StatsDb;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

/// Sources under `fixtures/<sub>` as `(path relative to fixtures, text)`.
pub fn sources(sub: &str) -> Vec<(String, String)> {
    let root = fixtures();
    collect_source_paths(&[root.join(sub)])
        .unwrap()
        .into_iter()
        .map(|p| {
            let rel = p.strip_prefix(&root).unwrap().to_string_lossy().replace('\\', "/");
            (rel, std::fs::read_to_string(&p).unwrap())
        })
        .collect()
}

pub fn scan(files: &[(String, String)]) -> ScanOutput {
    scan_sources(files, 1)
}

pub fn golden_freq() -> FrequencyTable {
    FrequencyTable::load(fixtures().join("dbs/golden.freq")).unwrap()
}

pub fn golden_db() -> StatsDb {
    StatsDb::load(fixtures().join("dbs/golden.statsdb")).unwrap()
}

pub fn kill_db() -> StatsDb {
    StatsDb::load(fixtures().join("dbs/kill.statsdb")).unwrap()
}

pub fn check(scanned: &ScanOutput, ctx: &CheckContext<'_>, filters: &FilterConfig) -> CheckReport {
    check_program(&scanned.calls, &scanned.declarations, ctx, filters, false)
}

/// `golden/listing5/bonesi.c` -> `listing5`.
pub fn listing_of(path: &str) -> &str {
    path.split('/').nth(1).unwrap_or(path)
}

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_swapcheck")
}
