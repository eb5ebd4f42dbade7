//! Reading source trees into project records.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use walkdir::WalkDir;

use crate::error::{Error, Result};
use crate::frontend::{scan_sources, ProjectRecord, ScanOutput};

const SOURCE_EXTENSIONS: &[&str] = &[
    "c", "h", "cc", "cpp", "cxx", "c++", "hh", "hpp", "hxx", "h++", "inl", "ipp", "C", "H",
];

pub fn is_source_file(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| SOURCE_EXTENSIONS.contains(&e))
}

/// Path text used in records and reports: forward slashes, no leading `./`.
pub fn display_path(path: &Path) -> String {
    let s = path.to_string_lossy().replace('\\', "/");
    s.strip_prefix("./").map(str::to_owned).unwrap_or(s)
}

/// Source files under each target (a file or a directory), in sorted order.
pub fn collect_source_paths(targets: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for target in targets {
        let meta = std::fs::metadata(target).map_err(|e| Error::io(target, e))?;
        if meta.is_file() {
            out.push(target.clone());
            continue;
        }
        for entry in WalkDir::new(target).sort_by_file_name() {
            let entry = entry.map_err(|e| {
                let path = e.path().unwrap_or(target).to_owned();
                Error::io(path, e.into())
            })?;
            if entry.file_type().is_file() && is_source_file(entry.path()) {
                out.push(entry.into_path());
            }
        }
    }
    Ok(out)
}

/// Reads files as `(display path, text)`; invalid UTF-8 is replaced.
pub fn read_sources(paths: &[PathBuf]) -> Result<Vec<(String, String)>> {
    paths
        .iter()
        .map(|p| {
            let bytes = std::fs::read(p).map_err(|e| Error::io(p, e))?;
            Ok((display_path(p), String::from_utf8_lossy(&bytes).into_owned()))
        })
        .collect()
}

/// Scans the given files and directories as one program.
pub fn scan_targets(targets: &[PathBuf], jobs: usize) -> Result<ScanOutput> {
    let files = read_sources(&collect_source_paths(targets)?)?;
    Ok(scan_sources(&files, jobs))
}

/// Loads a corpus whose first-level subdirectories are projects. A file whose
/// exact contents were already seen in an earlier project (in name order) is
/// skipped.
pub fn load_corpus(root: &Path, jobs: usize) -> Result<Vec<ProjectRecord>> {
    let mut dirs: Vec<PathBuf> = std::fs::read_dir(root)
        .map_err(|e| Error::io(root, e))?
        .filter_map(|e| e.ok())
        .filter(|e| e.file_type().is_ok_and(|t| t.is_dir()))
        .map(|e| e.path())
        .collect();
    dirs.sort();

    let mut seen: HashSet<[u8; 32]> = HashSet::new();
    let mut projects = Vec::new();
    for dir in dirs {
        let id = dir
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let mut files = Vec::new();
        for path in collect_source_paths(std::slice::from_ref(&dir))? {
            let bytes = std::fs::read(&path).map_err(|e| Error::io(&path, e))?;
            let digest: [u8; 32] = Sha256::digest(&bytes).into();
            if !seen.insert(digest) {
                log::debug!("skipping duplicate file {}", path.display());
                continue;
            }
            let rel = path.strip_prefix(root).unwrap_or(&path);
            files.push((display_path(rel), String::from_utf8_lossy(&bytes).into_owned()));
        }
        let scanned = scan_sources(&files, jobs);
        projects.push(ProjectRecord {
            project_id: id,
            call_sites: scanned.calls,
            declarations: scanned.declarations,
        });
    }
    Ok(projects)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_files_count_once() {
        let dir = tempfile::tempdir().unwrap();
        for p in ["a", "b"] {
            std::fs::create_dir(dir.path().join(p)).unwrap();
            std::fs::write(dir.path().join(p).join("k.c"), "void f(void) { kill(pid, sig); }").unwrap();
        }
        std::fs::write(dir.path().join("b").join("other.c"), "void g(void) { kill(pid, sig); }").unwrap();
        std::fs::write(dir.path().join("b").join("notes.txt"), "kill(x, y);").unwrap();
        let projects = load_corpus(dir.path(), 1).unwrap();
        assert_eq!(projects.len(), 2);
        assert_eq!(projects[0].project_id, "a");
        assert_eq!(projects[0].call_sites.len(), 1);
        assert_eq!(projects[1].call_sites.len(), 1);
        assert_eq!(projects[1].call_sites[0].location.file_path, "b/other.c");
    }

    #[test]
    fn missing_root_is_an_error() {
        assert!(load_corpus(Path::new("/definitely/not/here"), 1).is_err());
    }
}
