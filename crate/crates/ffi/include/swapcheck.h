#ifndef SWAPCHECK_H
#define SWAPCHECK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SwapcheckStatus {
  SWAPCHECK_STATUS_OK = 0,
  SWAPCHECK_STATUS_NULL_POINTER = 1,
  SWAPCHECK_STATUS_INVALID_UTF8 = 2,
  SWAPCHECK_STATUS_IO = 3,
  SWAPCHECK_STATUS_PARSE = 4,
  SWAPCHECK_STATUS_INVALID_ARGUMENT = 5,
  SWAPCHECK_STATUS_PANIC = 6,
} SwapcheckStatus;

// Analyzer state: loaded tables, settings and the sources to check.
typedef struct SwapcheckAnalyzer SwapcheckAnalyzer;

// Result of one check: the SARIF log and the number of warnings in it.
typedef struct SwapcheckReport SwapcheckReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates an analyzer with default settings and writes it to `*out`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one pointer.
enum SwapcheckStatus swapcheck_analyzer_new(struct SwapcheckAnalyzer **out);

// # Safety
// `analyzer` must be null or a pointer returned by [`swapcheck_analyzer_new`]
// that has not been freed.
void swapcheck_analyzer_free(struct SwapcheckAnalyzer *analyzer);

// Loads a statistics database. Without one, vetting and the statistical
// checker are skipped.
//
// # Safety
// `analyzer` must be a live handle and `path` a NUL-terminated string.
enum SwapcheckStatus swapcheck_analyzer_load_db(struct SwapcheckAnalyzer *analyzer,
                                                const char *path);

// Loads the token frequency table used for name splitting. Without one, a
// table is built from the added sources.
//
// # Safety
// `analyzer` must be a live handle and `path` a NUL-terminated string.
enum SwapcheckStatus swapcheck_analyzer_load_freq_table(struct SwapcheckAnalyzer *analyzer,
                                                        const char *path);

// # Safety
// `analyzer` must be a live handle and `path` a NUL-terminated string.
enum SwapcheckStatus swapcheck_analyzer_load_synonyms(struct SwapcheckAnalyzer *analyzer,
                                                      const char *path);

// # Safety
// `analyzer` must be a live handle and `path` a NUL-terminated string.
enum SwapcheckStatus swapcheck_analyzer_load_stoplist(struct SwapcheckAnalyzer *analyzer,
                                                      const char *path);

// Sets one of `alpha1`, `alpha2`, `beta`, `gamma` or `sim_threshold`. The
// combination is validated when checking.
//
// # Safety
// `analyzer` must be a live handle and `name` a NUL-terminated string.
enum SwapcheckStatus swapcheck_analyzer_set_threshold(struct SwapcheckAnalyzer *analyzer,
                                                      const char *name,
                                                      double value);

// Turns off one filter by its command-line name, e.g. `swap-distance`.
//
// # Safety
// `analyzer` must be a live handle and `name` a NUL-terminated string.
enum SwapcheckStatus swapcheck_analyzer_disable_filter(struct SwapcheckAnalyzer *analyzer,
                                                       const char *name);

// Turns a checker on or off. `name` is `cover` or `statistical`.
//
// # Safety
// `analyzer` must be a live handle and `name` a NUL-terminated string.
enum SwapcheckStatus swapcheck_analyzer_set_checker(struct SwapcheckAnalyzer *analyzer,
                                                    const char *name,
                                                    bool enabled);

// Adds one source file. `path` is only used for locations in the report;
// nothing is read from disk.
//
// # Safety
// `analyzer` must be a live handle; `path` and `text` NUL-terminated strings.
enum SwapcheckStatus swapcheck_analyzer_add_source(struct SwapcheckAnalyzer *analyzer,
                                                   const char *path,
                                                   const char *text);

// Checks all added sources as one program and writes a new report to `*out`.
//
// # Safety
// `analyzer` must be a live handle and `out` valid for one pointer write.
enum SwapcheckStatus swapcheck_analyzer_check(const struct SwapcheckAnalyzer *analyzer,
                                              struct SwapcheckReport **out);

// Number of warnings that survived the filters.
//
// # Safety
// `report` must be null or a live report handle.
size_t swapcheck_report_warning_count(const struct SwapcheckReport *report);

// The SARIF log as a NUL-terminated UTF-8 string. Owned by the report and
// valid until it is freed. Null when `report` is null.
//
// # Safety
// `report` must be null or a live report handle.
const char *swapcheck_report_sarif(const struct SwapcheckReport *report);

// # Safety
// `report` must be null or a pointer returned by [`swapcheck_analyzer_check`]
// that has not been freed.
void swapcheck_report_free(struct SwapcheckReport *report);

// Similarity of two morphemes in `[0, 1]`. Synonyms loaded into `analyzer`
// are honored; `analyzer` may be null.
//
// # Safety
// `a` and `b` must be NUL-terminated strings, `out` valid for one write and
// `analyzer` null or a live handle.
enum SwapcheckStatus swapcheck_similarity(const struct SwapcheckAnalyzer *analyzer,
                                          const char *a,
                                          const char *b,
                                          double *out);

// Message for the last failed call on this thread, or null after a
// successful one. Valid until the next call on the same thread.
const char *swapcheck_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *swapcheck_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SWAPCHECK_H */
