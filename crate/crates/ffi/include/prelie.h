#ifndef PRELIE_H
#define PRELIE_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes shared by every fallible entry point.
typedef enum PrelieStatus {
  PRELIE_STATUS_OK = 0,
  PRELIE_STATUS_NULL_POINTER = 1,
  // Malformed text, JSON, tree code or UTF-8.
  PRELIE_STATUS_INVALID_INPUT = 2,
  PRELIE_STATUS_NOT_INVERTIBLE = 3,
  // A field has a term of degree below two.
  PRELIE_STATUS_VALUATION = 4,
  PRELIE_STATUS_INSUFFICIENT_ORDER = 5,
  PRELIE_STATUS_ORDER_TOO_LARGE = 6,
  // Orders or dimensions of two operands differ.
  PRELIE_STATUS_MISMATCH = 7,
  // A panic was caught at the boundary.
  PRELIE_STATUS_INTERNAL = 8,
} PrelieStatus;

// Polynomial vector field with a degree cap.
typedef struct PrelieField PrelieField;

// Truncated series over rooted trees.
typedef struct PrelieSeries PrelieSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null. Valid until the next
// failing call on the same thread.
const char *prelie_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void prelie_string_free(char *s);

// `exp*` truncated at `order` nodes.
//
// # Safety
// `out` must be valid for writes.
enum PrelieStatus prelie_series_exp(size_t order, struct PrelieSeries **out);

// `log*` truncated at `order` nodes.
//
// # Safety
// `out` must be valid for writes.
enum PrelieStatus prelie_series_log(size_t order, struct PrelieSeries **out);

// Reads a series document.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be valid for writes.
enum PrelieStatus prelie_series_from_json(const char *json, struct PrelieSeries **out);

// Writes a series document.
//
// # Safety
// `s` must be a live handle; `out` must be valid for writes.
enum PrelieStatus prelie_series_to_json(const struct PrelieSeries *s, char **out);

// Truncation order of a series, or 0 for null.
//
// # Safety
// `s` must be null or a live handle.
size_t prelie_series_order(const struct PrelieSeries *s);

// Group product `a × b`.
//
// # Safety
// `a` and `b` must be live handles; `out` must be valid for writes.
enum PrelieStatus prelie_series_compose(const struct PrelieSeries *a,
                                        const struct PrelieSeries *b,
                                        struct PrelieSeries **out);

// Group inverse.
//
// # Safety
// `s` must be a live handle; `out` must be valid for writes.
enum PrelieStatus prelie_series_invert(const struct PrelieSeries *s, struct PrelieSeries **out);

// Image on linear trees, as a power-series document.
//
// # Safety
// `s` must be a live handle; `out` must be valid for writes.
enum PrelieStatus prelie_series_phi_json(const struct PrelieSeries *s, char **out);

// Image on corollas, as a `(lambda, f)` document.
//
// # Safety
// `s` must be a live handle; `out` must be valid for writes.
enum PrelieStatus prelie_series_psi_json(const struct PrelieSeries *s, char **out);

// # Safety
// `s` must be null or a handle not yet freed.
void prelie_series_free(struct PrelieSeries *s);

// Parses `;`-separated components in `dim` variables, truncated at `degree`.
//
// # Safety
// `components` must be a NUL-terminated string; `out` must be valid for writes.
enum PrelieStatus prelie_field_parse(const char *components,
                                     size_t dim,
                                     size_t degree,
                                     struct PrelieField **out);

// Reads a field document.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be valid for writes.
enum PrelieStatus prelie_field_from_json(const char *json, struct PrelieField **out);

// Writes a field document.
//
// # Safety
// `f` must be a live handle; `out` must be valid for writes.
enum PrelieStatus prelie_field_to_json(const struct PrelieField *f, char **out);

// Acts on a field by a series: `Σ_t s_t F_t` over elementary differentials.
//
// # Safety
// `s` and `f` must be live handles; `out` must be valid for writes.
enum PrelieStatus prelie_field_apply_series(const struct PrelieSeries *s,
                                            const struct PrelieField *f,
                                            struct PrelieField **out);

// Field whose time-one displacement is `g`, up to `degree`.
//
// # Safety
// `g` must be a live handle; `out` must be valid for writes.
enum PrelieStatus prelie_field_recover(const struct PrelieField *g,
                                       size_t degree,
                                       struct PrelieField **out);

// Taylor jet of the flow through `point` (comma-separated rationals), as a
// jet document with `terms` coefficients.
//
// # Safety
// `f` must be a live handle, `point` a NUL-terminated string, and `out`
// valid for writes.
enum PrelieStatus prelie_field_flow_json(const struct PrelieField *f,
                                         const char *point,
                                         size_t terms,
                                         char **out);

// # Safety
// `f` must be null or a handle not yet freed.
void prelie_field_free(struct PrelieField *f);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PRELIE_H */
