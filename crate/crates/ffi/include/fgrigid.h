#ifndef FGRIGID_H
#define FGRIGID_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes.
 */
typedef enum FgStatus {
  FG_STATUS_OK = 0,
  FG_STATUS_NULL_POINTER = 1,
  FG_STATUS_INVALID_UTF8 = 2,
  FG_STATUS_PARSE = 3,
  FG_STATUS_UNSUPPORTED = 4,
  FG_STATUS_PRECISION = 5,
  FG_STATUS_NOT_AN_OPER = 6,
  FG_STATUS_INVALID = 7,
  FG_STATUS_PANIC = 8,
} FgStatus;

/*
 A formal connection.
 */
typedef struct FgConnection FgConnection;

/*
 A connection in canonical oper form.
 */
typedef struct FgOper FgOper;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or null. The pointer stays
 valid until the next call into the library from the same thread.
 */
const char *fg_last_error(void);

/*
 Library version as a static string.
 */
const char *fg_version(void);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void fg_string_free(char *s);

/*
 Parses a connection from its JSON form.

 # Safety
 `json` must be a NUL terminated string and `out` writable.
 */
enum FgStatus fg_connection_from_json(const char *json, struct FgConnection **out);

/*
 The Frenkel-Gross connection for a type label such as `"G2"`. A null
 `rep` selects the smallest faithful representation.

 # Safety
 String arguments must be NUL terminated (or null where allowed) and `out`
 writable.
 */
enum FgStatus fg_connection_frenkel_gross(const char *type_label,
                                          const char *rep,
                                          const char *lambda,
                                          struct FgConnection **out);

/*
 # Safety
 `conn` must come from this library and not have been freed.
 */
void fg_connection_free(struct FgConnection *conn);

/*
 # Safety
 `conn` must be a live handle and `out` writable.
 */
enum FgStatus fg_connection_to_json(const struct FgConnection *conn, char **out);

/*
 Change of coordinate `s = 1/t` on a global connection.

 # Safety
 `conn` must be a live handle and `out` writable.
 */
enum FgStatus fg_connection_at_infinity(const struct FgConnection *conn, struct FgConnection **out);

/*
 Slope of the connection as a rational string.

 # Safety
 `conn` must be a live handle and `out` writable.
 */
enum FgStatus fg_connection_slope(const struct FgConnection *conn, char **out);

/*
 Newton polygon and irregular exponents as JSON.

 # Safety
 `conn` must be a live handle and `out` writable.
 */
enum FgStatus fg_connection_exponents(const struct FgConnection *conn, char **out);

/*
 Gauge transforms the connection into canonical oper form.

 # Safety
 `conn` must be a live handle and `out` writable.
 */
enum FgStatus fg_canonicalize(const struct FgConnection *conn, struct FgOper **out);

/*
 # Safety
 `oper` must come from this library and not have been freed.
 */
void fg_oper_free(struct FgOper *oper);

/*
 # Safety
 `oper` must be a live handle and `out` writable.
 */
enum FgStatus fg_oper_to_json(const struct FgOper *oper, char **out);

/*
 Slope read off the canonical form, as a rational string.

 # Safety
 `oper` must be a live handle and `out` writable.
 */
enum FgStatus fg_oper_slope(const struct FgOper *oper, char **out);

/*
 Runs one verification job given as JSON, e.g.
 `{"claim":"oper_route","params":{"type":"A1","lambda":"-2/3"}}`, and
 writes the report JSON. A failing check still returns `Ok`; inspect the
 report's `pass` and `error` fields.

 # Safety
 `job` must be a NUL terminated string and `out` writable.
 */
enum FgStatus fg_verify_json(const char *job, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FGRIGID_H */
