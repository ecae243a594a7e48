#ifndef CUBEFLOW_H
#define CUBEFLOW_H

#include <stddef.h>
#include <stdint.h>

typedef enum CfStatus {
  CF_STATUS_OK = 0,
  CF_STATUS_NULL_POINTER = 1,
  CF_STATUS_INVALID_UTF8 = 2,
  CF_STATUS_PARSE = 3,
  CF_STATUS_INVALID_COMPLEX = 4,
  CF_STATUS_NOT_TRANSVERSE = 5,
  CF_STATUS_GEOMETRY = 6,
  CF_STATUS_NO_THRESHOLD = 7,
  CF_STATUS_OUT_OF_RANGE = 8,
  CF_STATUS_PANIC = 9,
} CfStatus;

typedef struct CfCochain CfCochain;

typedef struct CfComplex CfComplex;

typedef struct CfGeoCochain CfGeoCochain;

// Message for the last failed call on this thread, or NULL. Owned by the
// library; valid until the next call on this thread.
const char *cf_last_error(void);

// # Safety
// `s` must be NULL or a string returned by this library.
void cf_string_free(char *s);

// # Safety
// `dims` must point to `n` values; `out` must be writable.
enum CfStatus cf_complex_torus(const size_t *dims, size_t n, struct CfComplex **out);

// # Safety
// `json` must be a nul-terminated string; `out` must be writable.
enum CfStatus cf_complex_from_json(const char *json, struct CfComplex **out);

// # Safety
// `c` must be a live handle; `out` must be writable.
enum CfStatus cf_complex_to_json(const struct CfComplex *c, char **out);

// Number of cubes of dimension `dim`.
//
// # Safety
// `c` must be a live handle; `out` must be writable.
enum CfStatus cf_complex_count(const struct CfComplex *c, size_t dim, size_t *out);

// Betti number and number of torsion coefficients of H^degree.
//
// # Safety
// `c` must be a live handle; the out pointers must be writable.
enum CfStatus cf_cohomology(const struct CfComplex *c,
                            size_t degree,
                            size_t *betti,
                            size_t *torsion);

// # Safety
// `c` must be NULL or a handle from this library, freed once.
void cf_complex_free(struct CfComplex *c);

// Parses a geometric cochain and checks it is transverse to the complex.
//
// # Safety
// `c` must be a live handle, `json` a nul-terminated string, `out` writable.
enum CfStatus cf_geo_from_json(const struct CfComplex *c,
                               const char *json,
                               struct CfGeoCochain **out);

// # Safety
// `g` must be a live handle; `out` must be writable.
enum CfStatus cf_geo_to_json(const struct CfGeoCochain *g, char **out);

// A new handle viewing `g` through the additional time-`t` flow.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum CfStatus cf_geo_flow(const struct CfGeoCochain *g, double t, struct CfGeoCochain **out);

// # Safety
// `g` must be NULL or a handle from this library, freed once.
void cf_geo_free(struct CfGeoCochain *g);

// The intersection cochain cI(W).
//
// # Safety
// Handles must be live and `g` built on `c`; `out` must be writable.
enum CfStatus cf_intersect(const struct CfComplex *c,
                           const struct CfGeoCochain *g,
                           struct CfCochain **out);

// # Safety
// `c` must be a live handle, `json` a nul-terminated string, `out` writable.
enum CfStatus cf_cochain_from_json(const struct CfComplex *c,
                                   const char *json,
                                   struct CfCochain **out);

// # Safety
// `a` must be a live handle; `out` must be writable.
enum CfStatus cf_cochain_to_json(const struct CfCochain *a, char **out);

// # Safety
// `a` must be a live handle; the out pointers must be writable.
enum CfStatus cf_cochain_degree(const struct CfCochain *a, size_t *out);

// Value of the cochain on `cube` (0 off its support).
//
// # Safety
// `a` must be a live handle; `out` must be writable.
enum CfStatus cf_cochain_get(const struct CfCochain *a, size_t cube, int64_t *out);

// # Safety
// `a` must be NULL or a handle from this library, freed once.
void cf_cochain_free(struct CfCochain *a);

// # Safety
// Handles must be live and built on `c`; `out` must be writable.
enum CfStatus cf_cup(const struct CfComplex *c,
                     const struct CfCochain *a,
                     const struct CfCochain *b,
                     struct CfCochain **out);

// Threshold sweep over the `n` ascending flow times in `grid`. Writes the
// CSV report to `report` (may be NULL) and the threshold to `t_found`.
// Returns `NoThreshold` if the grid holds no threshold.
//
// # Safety
// Handles must be live and built on `c`; `grid` must hold `n` values;
// `t_found` must be writable.
enum CfStatus cf_verify_main(const struct CfComplex *c,
                             const struct CfGeoCochain *w,
                             const struct CfGeoCochain *v,
                             const double *grid,
                             size_t n,
                             double *t_found,
                             char **report);

// The anti-diagonal/horizontal example on the 3×3 torus.
//
// # Safety
// The out pointers must be writable.
enum CfStatus cf_example_figure1(struct CfComplex **complex,
                                 struct CfGeoCochain **w,
                                 struct CfGeoCochain **v);

#endif  /* CUBEFLOW_H */
