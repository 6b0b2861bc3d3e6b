#ifndef RESPMOD_H
#define RESPMOD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define RESPMOD_TABLE_REQUIRED 0

#define RESPMOD_TABLE_RECORDED 1

#define RESPMOD_FORMAT_MARKDOWN 0

#define RESPMOD_FORMAT_CSV 1

/**
 * Result of every fallible call.
 */
typedef enum RespmodStatus {
  RESPMOD_STATUS_OK = 0,
  RESPMOD_STATUS_NULL_ARGUMENT = 1,
  RESPMOD_STATUS_INVALID_UTF8 = 2,
  RESPMOD_STATUS_PARSE_ERROR = 3,
  RESPMOD_STATUS_MODEL_ERROR = 4,
  RESPMOD_STATUS_NOT_FOUND = 5,
  RESPMOD_STATUS_INVALID_ARGUMENT = 6,
  RESPMOD_STATUS_PANIC = 7,
} RespmodStatus;

/**
 * An immutable, resolved model.
 */
typedef struct RespmodModel RespmodModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses and resolves `.resp` text. `file` labels error locations and may
 * be null.
 *
 * # Safety
 * `text` and `file` must be null or NUL-terminated; `out` must be valid for
 * writes.
 */
enum RespmodStatus respmod_model_parse(const char *text,
                                       const char *file,
                                       struct RespmodModel **out);

/**
 * Releases a model. Null is ignored.
 *
 * # Safety
 * `model` must be null or a handle that has not already been freed.
 */
void respmod_model_free(struct RespmodModel *model);

/**
 * The message for the last failed call on this thread, or null. The
 * pointer stays valid until the next call into the library on this thread.
 */
const char *respmod_last_error(void);

/**
 * Canonical `.resp` text of the model.
 *
 * # Safety
 * `model` must be a live handle; `out` must be valid for writes.
 */
enum RespmodStatus respmod_model_print(const struct RespmodModel *model, char **out);

/**
 * All findings as a JSON array. `load_threshold` must be at least 1.
 *
 * # Safety
 * `model` must be a live handle; `out` must be valid for writes.
 */
enum RespmodStatus respmod_analyze_json(const struct RespmodModel *model,
                                        uint32_t load_threshold,
                                        char **out);

/**
 * The information required (`RESPMOD_TABLE_REQUIRED`) or recorded
 * (`RESPMOD_TABLE_RECORDED`) table of a responsibility, as Markdown or CSV.
 *
 * # Safety
 * `model` must be a live handle; `responsibility` NUL-terminated; `out`
 * valid for writes.
 */
enum RespmodStatus respmod_table(const struct RespmodModel *model,
                                 const char *responsibility,
                                 uint32_t which,
                                 uint32_t format,
                                 char **out);

/**
 * The hazard worksheet of a responsibility, as Markdown or CSV.
 *
 * # Safety
 * As for [`respmod_table`].
 */
enum RespmodStatus respmod_worksheet(const struct RespmodModel *model,
                                     const char *responsibility,
                                     uint32_t format,
                                     char **out);

/**
 * Fraction of the responsibility's worksheet rows that are assessed.
 *
 * # Safety
 * `model` must be a live handle; `responsibility` NUL-terminated; `out`
 * valid for writes.
 */
enum RespmodStatus respmod_coverage(const struct RespmodModel *model,
                                    const char *responsibility,
                                    double *out);

/**
 * Merges `.answers` text into a copy of the model. The input handle is
 * left untouched; the result is a new handle.
 *
 * # Safety
 * `model` must be a live handle; `answers` NUL-terminated; `out` valid for
 * writes.
 */
enum RespmodStatus respmod_model_ingest(const struct RespmodModel *model,
                                        const char *answers,
                                        bool strict,
                                        struct RespmodModel **out);

/**
 * Graphviz DOT text of the model.
 *
 * # Safety
 * `model` must be a live handle; `out` must be valid for writes.
 */
enum RespmodStatus respmod_dot(const struct RespmodModel *model, char **out);

/**
 * Perception inconsistencies between two models as a JSON array.
 *
 * # Safety
 * `left` and `right` must be live handles; `out` must be valid for writes.
 */
enum RespmodStatus respmod_diff_json(const struct RespmodModel *left,
                                     const struct RespmodModel *right,
                                     char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library that has not been freed.
 */
void respmod_string_free(char *s);

/**
 * Library version, statically allocated.
 */
const char *respmod_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RESPMOD_H */
