#ifndef BRANCHKIT_H
#define BRANCHKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes.
 */
typedef enum BkStatus {
  BK_STATUS_OK = 0,
  /*
   Malformed input: wrong dimension, unparsable weight.
   */
  BK_STATUS_STRUCTURAL = 1,
  /*
   Mathematically invalid input, e.g. a non-dominant parameter.
   */
  BK_STATUS_DOMAIN = 2,
  /*
   Unknown form label or out-of-range family parameter.
   */
  BK_STATUS_CONFIG = 3,
  /*
   A safety bound was exceeded.
   */
  BK_STATUS_RESOURCE = 4,
  BK_STATUS_INTERNAL = 5,
  BK_STATUS_NULL_ARGUMENT = 6,
  BK_STATUS_INVALID_UTF8 = 7,
  BK_STATUS_PANIC = 8,
} BkStatus;

/*
 Quaternionic form with its small positive system.
 */
typedef struct BkQuatContext BkQuatContext;

/*
 Sp(1, q) with its distinguished Sp(1, 1).
 */
typedef struct BkSp1qContext BkSp1qContext;

/*
 Finite branching table: parameters `mu` with multiplicities.
 */
typedef struct BkTable BkTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failing call on this thread, or null. Valid until the
 next failing call on the same thread.
 */
const char *bk_last_error(void);

/*
 Library version, static storage.
 */
const char *bk_version(void);

/*
 Releases a string returned by this library. Null is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void bk_string_free(char *s);

/*
 Builds a quaternionic context from a label such as `"g2_2"`.

 # Safety
 `label` must be a valid C string; `out` must be writable.
 */
enum BkStatus bk_quat_context_new(const char *label, struct BkQuatContext **out);

/*
 # Safety
 `ctx` must come from `bk_quat_context_new` or be null.
 */
void bk_quat_context_free(struct BkQuatContext *ctx);

/*
 Half the number of noncompact roots in the small system, `d`.

 # Safety
 `ctx` must be a live context.
 */
size_t bk_quat_context_d(const struct BkQuatContext *ctx);

/*
 Closed-form table for the ambient parameter `lambda`, complete up to `cutoff`.

 # Safety
 Pointers must be valid; `out` receives a table to free with `bk_table_free`.
 */
enum BkStatus bk_quat_branch(const struct BkQuatContext *ctx,
                             const char *lambda,
                             uint32_t cutoff,
                             struct BkTable **out);

/*
 Oracle comparison report as JSON; `agree` tells whether the closed form matched.

 # Safety
 Pointers must be valid; `json_out` receives a string for `bk_string_free`.
 */
enum BkStatus bk_quat_oracle_check(const struct BkQuatContext *ctx,
                                   const char *lambda,
                                   uint32_t cutoff,
                                   uint32_t step_bound,
                                   int *agree,
                                   char **json_out);

/*
 # Safety
 `out` must be writable.
 */
enum BkStatus bk_sp1q_context_new(uint32_t q, struct BkSp1qContext **out);

/*
 # Safety
 `ctx` must come from `bk_sp1q_context_new` or be null.
 */
void bk_sp1q_context_free(struct BkSp1qContext *ctx);

/*
 # Safety
 Pointers must be valid; `out` receives a table to free with `bk_table_free`.
 */
enum BkStatus bk_sp1q_branch(const struct BkSp1qContext *ctx,
                             const char *lambda,
                             uint32_t cutoff,
                             struct BkTable **out);

/*
 # Safety
 As for `bk_quat_oracle_check`.
 */
enum BkStatus bk_sp1q_oracle_check(const struct BkSp1qContext *ctx,
                                   const char *lambda,
                                   uint32_t cutoff,
                                   uint32_t step_bound,
                                   int *agree,
                                   char **json_out);

/*
 Number of rows in the table.

 # Safety
 `t` must be a live table or null.
 */
size_t bk_table_len(const struct BkTable *t);

/*
 Row `i` in lexicographic order of `mu`. The strings are borrowed from the
 table and live as long as it does.

 # Safety
 `t` must be live; `mu` and `mult` must be writable.
 */
enum BkStatus bk_table_entry(const struct BkTable *t, size_t i, const char **mu, const char **mult);

/*
 Multiplicity at `mu` as a decimal string; zero outside the table.

 # Safety
 Pointers must be valid; `out` receives a string for `bk_string_free`.
 */
enum BkStatus bk_table_multiplicity(const struct BkTable *t, const char *mu, char **out);

/*
 The table as JSON (`cutoff`, `completeFor`, `entries`).

 # Safety
 Pointers must be valid; `out` receives a string for `bk_string_free`.
 */
enum BkStatus bk_table_to_json(const struct BkTable *t, char **out);

/*
 # Safety
 `t` must come from a branch call or be null.
 */
void bk_table_free(struct BkTable *t);

/*
 Admissibility over the semisimple part of `K` for a Hermitian form.

 # Safety
 Strings must be valid; `admissible` must be writable.
 */
enum BkStatus bk_admissible_hermitian(const char *form, const char *lambda, int *admissible);

/*
 Admissibility of SO(3, 2n) restricted to its SO(3) factor.

 # Safety
 `admissible` must be writable.
 */
enum BkStatus bk_admissible_so3(uint32_t n, int *admissible);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BRANCHKIT_H */
