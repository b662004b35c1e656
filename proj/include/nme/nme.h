#ifndef NME_H
#define NME_H

/*
 * C interface to the solver for X^s + A* X^-t A + B* X^-p B = Q.
 *
 * Matrices cross the boundary as n*n*2 doubles, row-major, with real and
 * imaginary parts interleaved: m[(i*n + j)*2] is Re m_ij, m[(i*n + j)*2 + 1]
 * is Im m_ij. Every handle is owned by the caller and released with its
 * matching *_free function. On failure a function returns a nonzero status and
 * nme_last_error() describes it (thread-local, valid until the next call).
 */

#include <stddef.h>

#if defined(NME_BUILDING_LIBRARY)
#define NME_API __attribute__((visibility("default")))
#else
#define NME_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nme_status {
    NME_OK = 0,
    NME_INVALID_ARGUMENT = 1, /* null pointer, bad index, unknown enum */
    NME_VALIDATION = 2,       /* malformed input matrices or exponents */
    NME_PRECONDITION = 3,     /* hypotheses of the requested scheme fail */
    NME_NOT_CONVERGED = 4,
    NME_VERIFICATION = 5,     /* supplied matrix is not a solution */
    NME_NUMERICAL = 6,        /* loss of definiteness, eigensolver failure */
    NME_INTERNAL = 7
} nme_status;

typedef struct nme_problem nme_problem;
typedef struct nme_report nme_report;
typedef struct nme_solution nme_solution;
typedef struct nme_bounds nme_bounds;
typedef struct nme_factorization nme_factorization;

NME_API const char* nme_last_error(void);
NME_API const char* nme_status_name(nme_status status);

/* ---- problems ---- */

NME_API nme_status nme_problem_create(size_t n, const double* a, const double* b, const double* q, double s,
                                      double t, double p, nme_problem** out);
/* id 1: fixed-point instance (s=3, t=2, p=1); id 2: coupled instance (s=3, t=4, p=1). */
NME_API nme_status nme_problem_create_example(int id, nme_problem** out);
/* Start parameter the published run used: alpha for id 1, b for id 2. */
NME_API nme_status nme_example_start(int id, double* out);
/* Published transformed-variable and lifted solutions of an example. */
NME_API nme_status nme_example_solution(int id, double* y_out, double* x_out);
NME_API void nme_problem_free(nme_problem* problem);

NME_API size_t nme_problem_dim(const nme_problem* problem);
/* Exponents and matrices in the orientation the caller supplied. */
NME_API void nme_problem_exponents(const nme_problem* problem, double* s, double* t, double* p);
NME_API nme_status nme_problem_matrices(const nme_problem* problem, double* a, double* b, double* q);
NME_API int nme_problem_swapped(const nme_problem* problem);

/* ---- condition checks ---- */

typedef enum nme_check_kind {
    NME_CHECK_NECESSARY = 0,
    NME_CHECK_SUFFICIENT = 1,
    NME_CHECK_UNIQUENESS_INTERVAL = 2,
    NME_CHECK_UNIQUENESS_K = 3, /* k <= 0 scans for a k */
    NME_CHECK_FIXED_POINT = 4,  /* param is alpha; <= 0 searches */
    NME_CHECK_COUPLED = 5       /* param is b; <= 0 searches */
} nme_check_kind;

NME_API nme_status nme_check(const nme_problem* problem, nme_check_kind kind, double param, nme_report** out);
NME_API void nme_report_free(nme_report* report);
NME_API const char* nme_report_label(const nme_report* report);
NME_API int nme_report_holds(const nme_report* report);
NME_API size_t nme_report_applicable_count(const nme_report* report);
NME_API const char* nme_report_applicable(const nme_report* report, size_t i);
NME_API size_t nme_report_verdict_count(const nme_report* report);
/* Any output pointer may be null. Strings live as long as the report. */
NME_API nme_status nme_report_verdict(const nme_report* report, size_t i, const char** name, int* holds, double* lhs,
                                      double* rhs, const char** note);
NME_API size_t nme_report_scalar_count(const nme_report* report);
NME_API nme_status nme_report_scalar(const nme_report* report, size_t i, const char** name, double* value);
NME_API int nme_report_has_bracket(const nme_report* report);
NME_API nme_status nme_report_bracket(const nme_report* report, double* lower, double* upper);

/* ---- bounds ---- */

NME_API nme_status nme_bounds_compute(const nme_problem* problem, nme_bounds** out);
NME_API void nme_bounds_free(nme_bounds* bounds);
NME_API void nme_bounds_scalars(const nme_bounds* bounds, double* c, double* m);
/* upper is N, q_root is Q^(1/s). */
NME_API nme_status nme_bounds_matrices(const nme_bounds* bounds, double* upper, double* q_root);

/* ---- solving ---- */

typedef enum nme_scheme { NME_SCHEME_AUTO = 0, NME_SCHEME_FIXED_POINT = 1, NME_SCHEME_COUPLED = 2 } nme_scheme;
typedef enum nme_extremality { NME_MAXIMAL = 0, NME_MINIMAL = 1, NME_UNKNOWN = 2 } nme_extremality;

typedef struct nme_options {
    double tol; /* <= 0 selects 1e-14 * ||Q|| */
    int max_iter;
    double alpha; /* <= 0 searches */
    double b;     /* <= 0 searches */
    int force;
    nme_scheme scheme;
} nme_options;

NME_API void nme_options_default(nme_options* options);

/*
 * Runs the solver. A run that exhausts max_iter still produces a solution
 * handle and returns NME_NOT_CONVERGED; precondition failures without force
 * return NME_PRECONDITION and no handle.
 */
NME_API nme_status nme_solve(const nme_problem* problem, const nme_options* options, nme_solution** out);
NME_API void nme_solution_free(nme_solution* solution);
NME_API nme_scheme nme_solution_scheme(const nme_solution* solution);
NME_API nme_extremality nme_solution_extremality(const nme_solution* solution);
NME_API int nme_solution_iterations(const nme_solution* solution);
NME_API int nme_solution_converged(const nme_solution* solution);
NME_API int nme_solution_preconditions_held(const nme_solution* solution);
NME_API double nme_solution_residual(const nme_solution* solution);
NME_API double nme_solution_final_step(const nme_solution* solution);
NME_API double nme_solution_initial_step(const nme_solution* solution);
NME_API double nme_solution_delta(const nme_solution* solution);
NME_API double nme_solution_start_parameter(const nme_solution* solution);
NME_API nme_status nme_solution_x(const nme_solution* solution, double* out);
NME_API nme_status nme_solution_y(const nme_solution* solution, double* out);
NME_API size_t nme_solution_history_length(const nme_solution* solution);
NME_API nme_status nme_solution_history_row(const nme_solution* solution, size_t i, int* iteration, double* step_x,
                                            double* step_y);
NME_API const char* nme_scheme_name(nme_scheme scheme);
NME_API const char* nme_extremality_name(nme_extremality extremality);

/* ---- verification ---- */

NME_API nme_status nme_residual(const nme_problem* problem, const double* x, double* out);

typedef struct nme_verification {
    double residual;
    int in_interval;        /* cI <= X <= Q^(1/s) */
    int in_refined;         /* mI <= X <= N; -1 when that bracket is undefined */
} nme_verification;

/* NME_VERIFICATION when the residual exceeds 1e-10 * ||Q||; *out is filled either way. */
NME_API nme_status nme_verify_solution(const nme_problem* problem, const double* x, nme_verification* out);

/* ---- factorization witness ---- */

NME_API nme_status nme_factorize(const nme_problem* problem, const double* x, nme_factorization** out);
/* lambda has n entries. */
NME_API nme_status nme_factorization_create(size_t n, const double* u, const double* lambda, const double* n1,
                                            const double* n2, nme_factorization** out);
NME_API void nme_factorization_free(nme_factorization* f);
NME_API nme_status nme_factorization_get(const nme_factorization* f, double* u, double* lambda, double* n1,
                                         double* n2);
/* *ok is 1 when every identity holds to 1e-9 relative. */
NME_API nme_status nme_factorization_verify(const nme_problem* problem, const nme_factorization* f, int* ok);

#ifdef __cplusplus
}
#endif

#endif
