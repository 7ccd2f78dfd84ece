/* C ABI for the k0silting engine.
 *
 * Handles are opaque; create them with the *_load_json functions and release
 * them with the matching *_free.  A complex or silting handle must not
 * outlive the algebra handle it was created from.  Strings returned through
 * char ** outputs are NUL-terminated UTF-8 owned by the library; release
 * them with k0s_string_free.  On any non-OK status,
 * k0s_last_error_message() describes the failure (thread-local, valid until
 * the next failing call on the same thread).
 */

#ifndef K0SILTING_H
#define K0SILTING_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct K0sAlgebra K0sAlgebra;
typedef struct K0sComplex K0sComplex;
typedef struct K0sSilting K0sSilting;

typedef enum K0sStatus {
  K0S_OK = 0,
  K0S_INVALID_ARGUMENT = 1,
  K0S_PARSE_ERROR = 2,
  K0S_PRECONDITION = 3,
  /* The operation ran and a mathematical assertion failed; output JSON is
   * still produced. */
  K0S_VERIFICATION_FAILED = 4,
  K0S_INTERNAL = 5,
} K0sStatus;

/* Most recent error message on this thread; empty string when none. */
const char *k0s_last_error_message(void);

void k0s_string_free(char *s);

/* field: "Q" or "Fp:<prime>"; NULL selects Q. */
K0sStatus k0s_algebra_load_json(const char *json, const char *field,
                                K0sAlgebra **out);
void k0s_algebra_free(K0sAlgebra *algebra);

/* dim Hom(P_i, P_j) for vertex names i and j. */
K0sStatus k0s_algebra_hom_dimension(const K0sAlgebra *algebra,
                                    const char *vertex_i,
                                    const char *vertex_j, size_t *out);

K0sStatus k0s_complex_load_json(const K0sAlgebra *algebra, const char *json,
                                K0sComplex **out);
void k0s_complex_free(K0sComplex *complex);
K0sStatus k0s_complex_to_json(const K0sComplex *complex, char **out_json);

/* dim Hom_{K^b}(X, Σ^shift Y); both complexes must share the algebra
 * handle. */
K0sStatus k0s_hom_dimension(const K0sComplex *x, const K0sComplex *y,
                            int64_t shift, size_t *out);

K0sStatus k0s_silting_load_json(const K0sAlgebra *algebra, const char *json,
                                K0sSilting **out);
void k0s_silting_free(K0sSilting *silting);

/* Filtration stages and the gamma vector of x as a JSON object; with
 * with_class true, the normalized class instead (requires the collection to
 * certify as silting).  K0S_VERIFICATION_FAILED means the object admits no
 * filtration within the bound. */
K0sStatus k0s_gamma_json(const K0sSilting *silting, const K0sComplex *x,
                         bool with_class, uint64_t seed, char **out_json);

/* Runs a verification suite; which is one of "presilting", "silting-cert",
 * "theorem-a", "jordan-holder", "horseshoe", "fd-closure", "cluster-n",
 * "example-4-3".  complex may be NULL except for example-4-3; samples == 0
 * and d == 0 select the defaults.  K0S_OK: every assertion passed;
 * K0S_VERIFICATION_FAILED: ran, but an assertion failed (JSON written in
 * both cases). */
K0sStatus k0s_verify_json(const K0sAlgebra *algebra, const K0sSilting *silting,
                          const char *which, const K0sComplex *complex,
                          uint64_t seed, size_t samples, uint32_t d,
                          char **out_json);

#ifdef __cplusplus
}
#endif

#endif /* K0SILTING_H */
