#ifndef ATTENUATA_H
#define ATTENUATA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AttStatus {
  AttStatus_Ok = 0,
  AttStatus_NullPointer = 1,
  AttStatus_InvalidArgument = 2,
  AttStatus_NotPrimePower = 3,
  AttStatus_FieldMismatch = 4,
  AttStatus_InadmissibleClass = 5,
  AttStatus_Budget = 6,
  AttStatus_Timeout = 7,
  AttStatus_OutOfRange = 8,
  AttStatus_Internal = 98,
  AttStatus_Panic = 99,
} AttStatus;

typedef enum AttFieldOp {
  AttFieldOp_Add = 0,
  AttFieldOp_Sub = 1,
  AttFieldOp_Mul = 2,
  /**
   * `a^{-1}`; `b` is ignored.
   */
  AttFieldOp_Inv = 3,
  /**
   * `a^(p^b)`.
   */
  AttFieldOp_Frobenius = 4,
} AttFieldOp;

/**
 * A finite field `GF(q)`.
 */
typedef struct AttField AttField;

/**
 * The vertex set `X_m` for fixed `(q, n, l, m)`.
 */
typedef struct AttScheme AttScheme;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *att_version(void);

/**
 * Copies the calling thread's last error message into a new string, or
 * stores NULL if there is none.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum AttStatus att_last_error(char **out);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void att_string_free(char *s);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum AttStatus att_field_new(uint32_t q, struct AttField **out);

/**
 * # Safety
 * `f` must come from `att_field_new` and not be freed twice.
 */
void att_field_free(struct AttField *f);

/**
 * The field order, or 0 for NULL.
 *
 * # Safety
 * `f` must be NULL or a live handle.
 */
uint32_t att_field_order(const struct AttField *f);

/**
 * Applies `op` to elements encoded as integers `0..q`.
 *
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
enum AttStatus att_field_op(const struct AttField *f,
                            enum AttFieldOp op,
                            uint32_t a,
                            uint32_t b,
                            uint32_t *out);

/**
 * Enumerates `X_m` for `(q, n, l, m)` under the default work budget.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum AttStatus att_scheme_new(uint32_t q,
                              uint32_t n,
                              uint32_t l,
                              uint32_t m,
                              struct AttScheme **out);

/**
 * # Safety
 * `s` must come from `att_scheme_new` and not be freed twice.
 */
void att_scheme_free(struct AttScheme *s);

/**
 * `|X_m|`, or 0 for NULL.
 *
 * # Safety
 * `s` must be NULL or a live handle.
 */
uint64_t att_scheme_vertex_count(const struct AttScheme *s);

/**
 * Serialized basis of vertex `index` (rows separated by `;`).
 *
 * # Safety
 * `s` must be a live handle and `out` a valid pointer.
 */
enum AttStatus att_scheme_vertex(const struct AttScheme *s, uint64_t index, char **out);

/**
 * Relation class `(i, j - i)` of the vertex pair `(u, v)`.
 *
 * # Safety
 * `s` must be a live handle; `i` and `jmi` valid pointers.
 */
enum AttStatus att_scheme_classify(const struct AttScheme *s,
                                   uint64_t u,
                                   uint64_t v,
                                   uint32_t *i,
                                   uint32_t *jmi);

/**
 * Valency of class `(i, jmi)` as a decimal string.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum AttStatus att_valency(uint32_t q,
                           uint32_t n,
                           uint32_t l,
                           uint32_t m,
                           uint32_t i,
                           uint32_t jmi,
                           char **out);

/**
 * The Gaussian binomial `[a, b]_q` as a decimal string.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum AttStatus att_gaussian_binomial(uint32_t a, uint32_t b, uint32_t q, char **out);

/**
 * Runs a command-line subcommand (`"check-all"`, `"valencies"`, ...) and
 * returns its JSON report. `exit_code` receives the command-line exit
 * code: 0 pass, 1 mismatch, 2 usage, 3 budget. `budget_ops = 0` keeps the
 * default budget.
 *
 * # Safety
 * `command` must be a NUL-terminated string; `json` and `exit_code` valid
 * pointers.
 */
enum AttStatus att_run_check(const char *command,
                             uint32_t q,
                             uint32_t n,
                             uint32_t l,
                             uint32_t m,
                             uint64_t budget_ops,
                             char **json,
                             int32_t *exit_code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ATTENUATA_H */
