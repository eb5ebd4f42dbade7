//! C ABI for the swapcheck analyzer.
//!
//! Every function returns a [`SwapcheckStatus`]. On failure the message is
//! kept per thread and can be read with [`swapcheck_last_error_message`].
//! Handles are opaque; free them with the matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use swapcheck::checker::{check_program, CheckContext, Thresholds, Warning};
use swapcheck::filters::{Filter, FilterConfig};
use swapcheck::frontend::{scan_sources, ProjectRecord};
use swapcheck::naming::{build_frequency_table, FrequencyTable, Splitter, StopList};
use swapcheck::sarif::{emit_sarif, ToolMeta};
use swapcheck::similarity::{sim, SynonymTable};
use swapcheck::statsdb::StatsDb;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwapcheckStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Parse = 4,
    InvalidArgument = 5,
    Panic = 6,
}

/// Analyzer state: loaded tables, settings and the sources to check.
pub struct SwapcheckAnalyzer {
    freq: Option<FrequencyTable>,
    stop: StopList,
    synonyms: Option<SynonymTable>,
    db: Option<StatsDb>,
    thresholds: Thresholds,
    filters: FilterConfig,
    cover_enabled: bool,
    statistical_enabled: bool,
    sources: Vec<(String, String)>,
}

/// Result of one check: the SARIF log and the number of warnings in it.
pub struct SwapcheckReport {
    sarif: CString,
    warnings: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(SwapcheckStatus, String);

impl Failure {
    fn null(what: &str) -> Self {
        Failure(SwapcheckStatus::NullPointer, format!("`{what}` is null"))
    }

    fn invalid(msg: impl Into<String>) -> Self {
        Failure(SwapcheckStatus::InvalidArgument, msg.into())
    }
}

impl From<swapcheck::Error> for Failure {
    fn from(e: swapcheck::Error) -> Self {
        let status = match e {
            swapcheck::Error::Io { .. } => SwapcheckStatus::Io,
            swapcheck::Error::Config(_) => SwapcheckStatus::InvalidArgument,
            _ => SwapcheckStatus::Parse,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(msg: String) {
    // Interior NULs would truncate the message in C anyway.
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SwapcheckStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            SwapcheckStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            SwapcheckStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(SwapcheckStatus::InvalidUtf8, format!("`{what}`: {e}")))
}

unsafe fn analyzer_mut<'a>(p: *mut SwapcheckAnalyzer) -> Result<&'a mut SwapcheckAnalyzer, Failure> {
    p.as_mut().ok_or_else(|| Failure::null("analyzer"))
}

/// Creates an analyzer with default settings and writes it to `*out`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn swapcheck_analyzer_new(out: *mut *mut SwapcheckAnalyzer) -> SwapcheckStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::null("out"));
        }
        let a = SwapcheckAnalyzer {
            freq: None,
            stop: StopList::default(),
            synonyms: None,
            db: None,
            thresholds: Thresholds::default(),
            filters: FilterConfig::default(),
            cover_enabled: true,
            statistical_enabled: true,
            sources: Vec::new(),
        };
        *out = Box::into_raw(Box::new(a));
        Ok(())
    })
}

/// # Safety
/// `analyzer` must be null or a pointer returned by [`swapcheck_analyzer_new`]
/// that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn swapcheck_analyzer_free(analyzer: *mut SwapcheckAnalyzer) {
    if !analyzer.is_null() {
        drop(Box::from_raw(analyzer));
    }
}

/// Loads a statistics database. Without one, vetting and the statistical
/// checker are skipped.
///
/// # Safety
/// `analyzer` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn swapcheck_analyzer_load_db(
    analyzer: *mut SwapcheckAnalyzer,
    path: *const c_char,
) -> SwapcheckStatus {
    guard(|| {
        let a = analyzer_mut(analyzer)?;
        let path = str_arg(path, "path")?;
        a.db = Some(StatsDb::load(path)?);
        Ok(())
    })
}

/// Loads the token frequency table used for name splitting. Without one, a
/// table is built from the added sources.
///
/// # Safety
/// `analyzer` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn swapcheck_analyzer_load_freq_table(
    analyzer: *mut SwapcheckAnalyzer,
    path: *const c_char,
) -> SwapcheckStatus {
    guard(|| {
        let a = analyzer_mut(analyzer)?;
        let path = str_arg(path, "path")?;
        a.freq = Some(FrequencyTable::load(path)?);
        Ok(())
    })
}

/// # Safety
/// `analyzer` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn swapcheck_analyzer_load_synonyms(
    analyzer: *mut SwapcheckAnalyzer,
    path: *const c_char,
) -> SwapcheckStatus {
    guard(|| {
        let a = analyzer_mut(analyzer)?;
        let path = str_arg(path, "path")?;
        a.synonyms = Some(SynonymTable::load(path)?);
        Ok(())
    })
}

/// # Safety
/// `analyzer` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn swapcheck_analyzer_load_stoplist(
    analyzer: *mut SwapcheckAnalyzer,
    path: *const c_char,
) -> SwapcheckStatus {
    guard(|| {
        let a = analyzer_mut(analyzer)?;
        let path = str_arg(path, "path")?;
        a.stop = StopList::load(path)?;
        Ok(())
    })
}

/// Sets one of `alpha1`, `alpha2`, `beta`, `gamma` or `sim_threshold`. The
/// combination is validated when checking.
///
/// # Safety
/// `analyzer` must be a live handle and `name` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn swapcheck_analyzer_set_threshold(
    analyzer: *mut SwapcheckAnalyzer,
    name: *const c_char,
    value: f64,
) -> SwapcheckStatus {
    guard(|| {
        let a = analyzer_mut(analyzer)?;
        let th = &mut a.thresholds;
        let slot = match str_arg(name, "name")? {
            "alpha1" => &mut th.alpha1,
            "alpha2" => &mut th.alpha2,
            "beta" => &mut th.beta,
            "gamma" => &mut th.gamma,
            "sim_threshold" => &mut th.sim_threshold,
            other => return Err(Failure::invalid(format!("unknown threshold `{other}`"))),
        };
        if !value.is_finite() {
            return Err(Failure::invalid("threshold must be finite"));
        }
        *slot = value;
        Ok(())
    })
}

/// Turns off one filter by its command-line name, e.g. `swap-distance`.
///
/// # Safety
/// `analyzer` must be a live handle and `name` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn swapcheck_analyzer_disable_filter(
    analyzer: *mut SwapcheckAnalyzer,
    name: *const c_char,
) -> SwapcheckStatus {
    guard(|| {
        let a = analyzer_mut(analyzer)?;
        let f: Filter = str_arg(name, "name")?.parse()?;
        a.filters.disabled.insert(f);
        Ok(())
    })
}

/// Turns a checker on or off. `name` is `cover` or `statistical`.
///
/// # Safety
/// `analyzer` must be a live handle and `name` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn swapcheck_analyzer_set_checker(
    analyzer: *mut SwapcheckAnalyzer,
    name: *const c_char,
    enabled: bool,
) -> SwapcheckStatus {
    guard(|| {
        let a = analyzer_mut(analyzer)?;
        match str_arg(name, "name")? {
            "cover" => a.cover_enabled = enabled,
            "statistical" => a.statistical_enabled = enabled,
            other => return Err(Failure::invalid(format!("unknown checker `{other}`"))),
        }
        Ok(())
    })
}

/// Adds one source file. `path` is only used for locations in the report;
/// nothing is read from disk.
///
/// # Safety
/// `analyzer` must be a live handle; `path` and `text` NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn swapcheck_analyzer_add_source(
    analyzer: *mut SwapcheckAnalyzer,
    path: *const c_char,
    text: *const c_char,
) -> SwapcheckStatus {
    guard(|| {
        let a = analyzer_mut(analyzer)?;
        let path = str_arg(path, "path")?;
        let text = str_arg(text, "text")?;
        a.sources.push((path.to_owned(), text.to_owned()));
        Ok(())
    })
}

/// Checks all added sources as one program and writes a new report to `*out`.
///
/// # Safety
/// `analyzer` must be a live handle and `out` valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn swapcheck_analyzer_check(
    analyzer: *const SwapcheckAnalyzer,
    out: *mut *mut SwapcheckReport,
) -> SwapcheckStatus {
    guard(|| {
        let a = analyzer.as_ref().ok_or_else(|| Failure::null("analyzer"))?;
        if out.is_null() {
            return Err(Failure::null("out"));
        }
        a.thresholds.validate()?;
        a.filters.validate()?;

        let mut sources = a.sources.clone();
        sources.sort();
        let scanned = scan_sources(&sources, 1);
        let built;
        let freq = match &a.freq {
            Some(f) => f,
            None => {
                let project = ProjectRecord {
                    project_id: String::new(),
                    call_sites: scanned.calls.clone(),
                    declarations: scanned.declarations.clone(),
                };
                built = build_frequency_table(std::slice::from_ref(&project));
                &built
            }
        };

        let mut ctx = CheckContext::new(Splitter::new(freq, &a.stop));
        ctx.thresholds = a.thresholds;
        ctx.synonyms = a.synonyms.as_ref();
        ctx.db = a.db.as_ref();
        ctx.cover_enabled = a.cover_enabled;
        ctx.statistical_enabled = a.statistical_enabled;

        let report = check_program(&scanned.calls, &scanned.declarations, &ctx, &a.filters, false);
        let mut warnings: Vec<Warning> = report.warnings;
        warnings.sort_by(|x, y| x.sort_key().cmp(&y.sort_key()));
        let sarif = emit_sarif(&warnings, &ToolMeta::default());
        let sarif = CString::new(sarif).map_err(|_| Failure::invalid("source text produced an interior NUL"))?;
        *out = Box::into_raw(Box::new(SwapcheckReport {
            sarif,
            warnings: warnings.len(),
        }));
        Ok(())
    })
}

/// Number of warnings that survived the filters.
///
/// # Safety
/// `report` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn swapcheck_report_warning_count(report: *const SwapcheckReport) -> usize {
    report.as_ref().map_or(0, |r| r.warnings)
}

/// The SARIF log as a NUL-terminated UTF-8 string. Owned by the report and
/// valid until it is freed. Null when `report` is null.
///
/// # Safety
/// `report` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn swapcheck_report_sarif(report: *const SwapcheckReport) -> *const c_char {
    report.as_ref().map_or(ptr::null(), |r| r.sarif.as_ptr())
}

/// # Safety
/// `report` must be null or a pointer returned by [`swapcheck_analyzer_check`]
/// that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn swapcheck_report_free(report: *mut SwapcheckReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Similarity of two morphemes in `[0, 1]`. Synonyms loaded into `analyzer`
/// are honored; `analyzer` may be null.
///
/// # Safety
/// `a` and `b` must be NUL-terminated strings, `out` valid for one write and
/// `analyzer` null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn swapcheck_similarity(
    analyzer: *const SwapcheckAnalyzer,
    a: *const c_char,
    b: *const c_char,
    out: *mut f64,
) -> SwapcheckStatus {
    guard(|| {
        let a_str = str_arg(a, "a")?;
        let b_str = str_arg(b, "b")?;
        if out.is_null() {
            return Err(Failure::null("out"));
        }
        if a_str.is_empty() || b_str.is_empty() {
            return Err(Failure::invalid("morphemes must be non-empty"));
        }
        let synonyms = analyzer.as_ref().and_then(|x| x.synonyms.as_ref());
        *out = sim(a_str, b_str, synonyms);
        Ok(())
    })
}

/// Message for the last failed call on this thread, or null after a
/// successful one. Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn swapcheck_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn swapcheck_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
