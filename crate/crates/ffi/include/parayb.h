#ifndef PARAYB_H
#define PARAYB_H

/* Generated by cbindgen from parayb-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum ParaybStatus {
  ParaybStatus_Ok = 0,
  ParaybStatus_InvalidArgument = 1,
  ParaybStatus_NotAShelf = 2,
  ParaybStatus_NotARack = 3,
  ParaybStatus_NotAdmissible = 4,
  ParaybStatus_SigmaNotBijective = 5,
  ParaybStatus_NotASolution = 6,
  ParaybStatus_NotLeftNonDegenerate = 7,
  ParaybStatus_BudgetExceeded = 8,
  ParaybStatus_DimensionMismatch = 9,
  ParaybStatus_Json = 10,
  ParaybStatus_NullPointer = 11,
  ParaybStatus_Other = 12,
} ParaybStatus;

/**
 * A skew brace handle.
 */
typedef struct ParaybBrace ParaybBrace;

/**
 * A parameter-indexed family handle (carrier + tables).
 */
typedef struct ParaybFamily ParaybFamily;

/**
 * A parametric set-theoretic map handle.
 */
typedef struct ParaybSolution ParaybSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message for this thread, or NULL when no error occurred.
 * The pointer stays valid until the next failing call on this thread.
 */
const char *parayb_last_error(void);

/**
 * Crate version as a static string.
 */
const char *parayb_version(void);

/**
 * Release a string returned by a `_to_json` call.
 *
 * # Safety
 * `s` must have been returned by this library and not freed before.
 */
void parayb_string_free(char *s);

/**
 * Build the brace of invertible residues mod `2^m`.
 *
 * # Safety
 * `out` must be a valid pointer to a `ParaybBrace*` slot.
 */
enum ParaybStatus parayb_brace_cyclic(uint32_t m, struct ParaybBrace **out);

/**
 * # Safety
 * `b` must be a pointer from [`parayb_brace_cyclic`], not yet freed.
 */
void parayb_brace_free(struct ParaybBrace *b);

/**
 * Carrier size of a brace.
 *
 * # Safety
 * `b` must be a live brace handle.
 */
size_t parayb_brace_order(const struct ParaybBrace *b);

/**
 * Shelf operation the brace induces for the given twist element label.
 *
 * # Safety
 * `b` must be a live brace handle and `out` a valid out-pointer.
 */
enum ParaybStatus parayb_brace_shelf(const struct ParaybBrace *b,
                                     int64_t xi_label,
                                     struct ParaybFamily **out);

/**
 * Twist family the brace induces for the given twist element label.
 *
 * # Safety
 * `b` must be a live brace handle and `out` a valid out-pointer.
 */
enum ParaybStatus parayb_brace_sigma(const struct ParaybBrace *b,
                                     int64_t xi_label,
                                     struct ParaybFamily **out);

/**
 * Decorated product the brace induces for the given twist element label.
 *
 * # Safety
 * `b` must be a live brace handle and `out` a valid out-pointer.
 */
enum ParaybStatus parayb_brace_bullet(const struct ParaybBrace *b,
                                      int64_t xi_label,
                                      struct ParaybFamily **out);

/**
 * # Safety
 * `f` must be a pointer from a family-producing call, not yet freed.
 */
void parayb_family_free(struct ParaybFamily *f);

/**
 * Parse a family from its JSON form.
 *
 * # Safety
 * `json` must be a NUL-terminated UTF-8 string; `out` a valid pointer.
 */
enum ParaybStatus parayb_family_from_json(const char *json, struct ParaybFamily **out);

/**
 * Serialize a family to its JSON form (release with
 * [`parayb_string_free`]).
 *
 * # Safety
 * `f` must be a live family handle and `out` a valid pointer.
 */
enum ParaybStatus parayb_family_to_json(const struct ParaybFamily *f, char **out);

/**
 * Exhaustive self-distributivity check; with `rack` set, bijectivity of
 * the left translations is required too. `holds` receives the verdict.
 *
 * # Safety
 * `f` must be a live family handle and `holds` a valid pointer.
 */
enum ParaybStatus parayb_check_shelf(const struct ParaybFamily *f, bool rack, bool *holds);

/**
 * Diagonal solution of a verified shelf.
 *
 * # Safety
 * `f` must be a live family handle and `out` a valid out-pointer.
 */
enum ParaybStatus parayb_shelf_solution(const struct ParaybFamily *f, struct ParaybSolution **out);

/**
 * Twisted solution of a shelf and an admissible twist family.
 *
 * # Safety
 * `shelf` and `sigma` must be live family handles, `out` a valid pointer.
 */
enum ParaybStatus parayb_build_solution(const struct ParaybFamily *shelf,
                                        const struct ParaybFamily *sigma,
                                        struct ParaybSolution **out);

/**
 * # Safety
 * `s` must be a pointer from a solution-producing call, not yet freed.
 */
void parayb_solution_free(struct ParaybSolution *s);

/**
 * Parse a solution from its JSON form.
 *
 * # Safety
 * `json` must be a NUL-terminated UTF-8 string; `out` a valid pointer.
 */
enum ParaybStatus parayb_solution_from_json(const char *json, struct ParaybSolution **out);

/**
 * Serialize a solution to its JSON form (release with
 * [`parayb_string_free`]).
 *
 * # Safety
 * `s` must be a live solution handle and `out` a valid pointer.
 */
enum ParaybStatus parayb_solution_to_json(const struct ParaybSolution *s, char **out);

/**
 * Exhaustive Yang-Baxter verification.
 * `method`: 0 = direct, 1 = componentwise, 2 = both.
 *
 * # Safety
 * `s` must be a live solution handle and `holds` a valid pointer.
 */
enum ParaybStatus parayb_solution_check_ybe(const struct ParaybSolution *s,
                                            uint32_t method,
                                            bool *holds);

/**
 * Degeneracy/reversibility flags as a bitmask of the `PARAYB_FLAG_*`
 * constants.
 *
 * # Safety
 * `s` must be a live solution handle and `flags` a valid pointer.
 */
enum ParaybStatus parayb_solution_classify(const struct ParaybSolution *s, uint32_t *flags);

/**
 * Factor a left non-degenerate solution: writes the shelf and twist
 * family handles.
 *
 * # Safety
 * `s` must be a live solution handle; both out-pointers valid.
 */
enum ParaybStatus parayb_solution_extract_shelf(const struct ParaybSolution *s,
                                                struct ParaybFamily **shelf_out,
                                                struct ParaybFamily **sigma_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PARAYB_H */
