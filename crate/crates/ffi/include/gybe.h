#ifndef GYBE_H
#define GYBE_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum GybeStatus {
  GYBE_STATUS_OK = 0,
  GYBE_STATUS_INVALID_ARGUMENT = 1,
  GYBE_STATUS_DATA_ERROR = 2,
  GYBE_STATUS_IO = 3,
  GYBE_STATUS_SINGULAR = 4,
  GYBE_STATUS_UNSUPPORTED = 5,
  GYBE_STATUS_INTERNAL = 6,
} GybeStatus;

// Category data loaded from JSON or a built-in.
typedef struct GybeCategory GybeCategory;

// Exact matrix over a cyclotomic field.
typedef struct GybeMatrix GybeMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until the
// next call into the library on the same thread.
const char *gybe_last_error_message(void);

// Static version string.
const char *gybe_version(void);

// Load a built-in category (`"jk6"` or `"ising"`).
//
// # Safety
// `name` must be a NUL-terminated string and `out` writable.
enum GybeStatus gybe_category_builtin(const char *name, struct GybeCategory **out);

// Load a category file from disk.
//
// # Safety
// `path` must be a NUL-terminated string and `out` writable.
enum GybeStatus gybe_category_load(const char *path, struct GybeCategory **out);

// Parse a category from JSON text.
//
// # Safety
// `json` must be a NUL-terminated string and `out` writable.
enum GybeStatus gybe_category_parse(const char *json, struct GybeCategory **out);

// # Safety
// `cat` must be null or a handle from this library not yet freed.
void gybe_category_free(struct GybeCategory *cat);

// Number of simple labels.
//
// # Safety
// `cat` must be a live handle and `out` writable.
enum GybeStatus gybe_category_rank(const struct GybeCategory *cat, size_t *out);

// Assemble the (d,3,1) R-matrix for a comma-separated object and label set.
//
// # Safety
// `cat` must be a live handle, the strings NUL-terminated and `out` writable.
enum GybeStatus gybe_assemble_r(const struct GybeCategory *cat,
                                const char *object,
                                const char *set,
                                struct GybeMatrix **out);

// Parse a matrix from matrix-file JSON text.
//
// # Safety
// `json` must be a NUL-terminated string and `out` writable.
enum GybeStatus gybe_matrix_from_json(const char *json, struct GybeMatrix **out);

// Load a matrix file from disk.
//
// # Safety
// `path` must be a NUL-terminated string and `out` writable.
enum GybeStatus gybe_matrix_load(const char *path, struct GybeMatrix **out);

// # Safety
// `m` must be null or a handle from this library not yet freed.
void gybe_matrix_free(struct GybeMatrix *m);

// # Safety
// `m` must be a live handle; `rows` and `cols` writable.
enum GybeStatus gybe_matrix_dim(const struct GybeMatrix *m, size_t *rows, size_t *cols);

// Floating-point rendering of one entry, for display only.
//
// # Safety
// `m` must be a live handle; `re` and `im` writable.
enum GybeStatus gybe_matrix_entry_f64(const struct GybeMatrix *m,
                                      size_t row,
                                      size_t col,
                                      double *re,
                                      double *im);

// Exact matrix-file JSON; release with [`gybe_string_free`].
//
// # Safety
// `m` must be a live handle and `out` writable.
enum GybeStatus gybe_matrix_to_json(const struct GybeMatrix *m, char **out);

// # Safety
// `s` must be null or a string returned by this library not yet freed.
void gybe_string_free(char *s);

// Exact check of the (d,m,1) generalized Yang-Baxter equation.
//
// # Safety
// `r` must be a live handle and `holds` writable.
enum GybeStatus gybe_check_gybe(const struct GybeMatrix *r, size_t d, size_t m, bool *holds);

// # Safety
// `r` must be a live handle and `holds` writable.
enum GybeStatus gybe_check_far_commutativity(const struct GybeMatrix *r,
                                             size_t d,
                                             size_t m,
                                             bool *holds);

// Braid relations of the B_n representation built from a d³×d³ R-matrix.
//
// # Safety
// `r` must be a live handle and `holds` writable.
enum GybeStatus gybe_check_braid_relations(const struct GybeMatrix *r,
                                           size_t d,
                                           size_t n,
                                           bool *holds);

// Order of the group generated by the B_n generators. `*order` is 0 and
// `*exceeded_cap` true when more than `cap` elements were found.
//
// # Safety
// `r` must be a live handle; `order` and `exceeded_cap` writable.
enum GybeStatus gybe_group_order(const struct GybeMatrix *r,
                                 size_t d,
                                 size_t n,
                                 bool projective,
                                 size_t cap,
                                 uint64_t *order,
                                 bool *exceeded_cap);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GYBE_H */
