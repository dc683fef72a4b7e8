#ifndef FJKIT_FJKIT_H
#define FJKIT_FJKIT_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define FJ_API __attribute__((visibility("default")))
#else
#define FJ_API
#endif

/* Return codes. FJ_OK is zero; every failure maps to one library error. */
typedef enum fj_code {
  FJ_OK = 0,
  FJ_E_UNDECLARED_SYMBOL,
  FJ_E_DIVISION_BY_ZERO_EXPRESSION,
  FJ_E_UNBOUND_SYMBOL,
  FJ_E_RELATION_VIOLATED,
  FJ_E_NUMERIC_DIVISION_BY_ZERO,
  FJ_E_INVALID_RELATION,
  FJ_E_SINGULAR_MATRIX,
  FJ_E_NONLINEAR_UNREDUCIBLE_CONSTRAINT,
  FJ_E_MISSING_SOLVE_HINT,
  FJ_E_INVALID_SOLVE_HINT,
  FJ_E_GAUGE_NOT_FIXING,
  FJ_E_ITERATION_LIMIT_EXCEEDED,
  FJ_E_NEGATIVE_DOF,
  FJ_E_CONSTRAINT_VIOLATED_AT_START,
  FJ_E_NUMERIC_BLOWUP,
  FJ_E_SYNTAX_ERROR,
  FJ_E_UNDECLARED_IDENTIFIER,
  FJ_E_NON_INTEGER_EXPONENT,
  FJ_E_SQRT_OF_NON_POLYNOMIAL,
  FJ_E_SECTION_MISSING,
  FJ_E_COUNT_MISMATCH,
  FJ_E_DUPLICATE_SYMBOL,
  FJ_E_INVALID_ARGUMENT,
  FJ_E_IO,
  FJ_E_INTERNAL
} fj_code;

typedef enum fj_status {
  FJ_STATUS_REGULAR = 0,
  FJ_STATUS_CONSTRAINED_INVERTIBLE = 1,
  FJ_STATUS_GAUGE = 2
} fj_status;

typedef struct fj_problem fj_problem;
typedef struct fj_analysis fj_analysis;
typedef struct fj_trajectory fj_trajectory;

/* Message of the last failure on the calling thread ("" if none). */
FJ_API const char* fj_last_error(void);
FJ_API fj_code fj_last_error_code(void);
/* "SyntaxError", "GaugeNotFixing", ... ; "Ok" for FJ_OK. */
FJ_API const char* fj_code_name(int code);
FJ_API const char* fj_status_name(int status);

/* Release strings returned by fj_analysis_bracket. */
FJ_API void fj_free(char* s);

FJ_API fj_code fj_problem_from_string(const char* text, fj_problem** out);
FJ_API fj_code fj_problem_from_file(const char* path, fj_problem** out);
FJ_API fj_code fj_problem_set_max_iterations(fj_problem* p, int n);
FJ_API fj_code fj_problem_set_verbose_multipliers(fj_problem* p, int on);
FJ_API void fj_problem_destroy(fj_problem* p);

/* Runs the full analysis. A gauge result without conditions is FJ_OK;
   inspect fj_analysis_status. */
FJ_API fj_code fj_analyze(const fj_problem* p, fj_analysis** out);
FJ_API fj_status fj_analysis_status(const fj_analysis* a);
FJ_API int fj_analysis_dof(const fj_analysis* a);
FJ_API size_t fj_analysis_constraint_count(const fj_analysis* a);

/* Renderings. Owned by the handle, valid until it is destroyed. */
FJ_API const char* fj_analysis_json(fj_analysis* a);
FJ_API const char* fj_analysis_markdown(fj_analysis* a);
FJ_API const char* fj_analysis_brackets_text(fj_analysis* a);
FJ_API const char* fj_analysis_eom_text(fj_analysis* a);

/* {left, right} as infix text; caller frees with fj_free. */
FJ_API fj_code fj_analysis_bracket(const fj_analysis* a, const char* left, const char* right, int on_surface,
                                   char** out);
FJ_API void fj_analysis_destroy(fj_analysis* a);

/* Integrates the reduced equations of motion with fixed-step RK4.
   `names`/`values` bind parameters and independent initial values;
   dependent variables are filled from the solve hints. */
FJ_API fj_code fj_integrate(const fj_analysis* a, const char* const* names, const double* values, size_t count,
                            double t_end, double dt, fj_trajectory** out);
FJ_API size_t fj_trajectory_rows(const fj_trajectory* t);
FJ_API size_t fj_trajectory_columns(const fj_trajectory* t);
FJ_API const char* fj_trajectory_column_name(const fj_trajectory* t, size_t column);
FJ_API double fj_trajectory_time(const fj_trajectory* t, size_t row);
FJ_API double fj_trajectory_value(const fj_trajectory* t, size_t row, size_t column);
FJ_API const char* fj_trajectory_csv(fj_trajectory* t);
/* max |constraint| over the run, one entry per constraint and gauge condition. */
FJ_API size_t fj_trajectory_drift_count(const fj_trajectory* t);
FJ_API fj_code fj_trajectory_drift(const fj_trajectory* t, size_t k, const char** label, double* value);
FJ_API void fj_trajectory_destroy(fj_trajectory* t);

#ifdef __cplusplus
}
#endif

#endif
