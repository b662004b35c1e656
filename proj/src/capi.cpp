#include "nme/nme.h"

#include <cmath>
#include <new>
#include <string>

#include "nme/examples.hpp"
#include "nme/solvers.hpp"
#include "text.hpp"

struct nme_problem {
    nme::ProblemInstance instance;
};

struct nme_report {
    nme::ConditionReport report;
};

struct nme_solution {
    nme::SolveReport report;
};

struct nme_bounds {
    nme::SolutionBounds bounds;
};

struct nme_factorization {
    nme::Factorization f;
};

namespace {

thread_local std::string last_error;

nme_status fail(nme_status status, std::string message) {
    last_error = std::move(message);
    return status;
}

// Runs body, translating exceptions into status codes.
template <class Body>
nme_status guarded(Body&& body) {
    try {
        last_error.clear();
        return body();
    } catch (const nme::ValidationError& e) {
        return fail(NME_VALIDATION, e.what());
    } catch (const nme::PreconditionError& e) {
        return fail(NME_PRECONDITION, e.what());
    } catch (const nme::VerificationError& e) {
        return fail(NME_VERIFICATION, e.what());
    } catch (const nme::NumericalError& e) {
        return fail(NME_NUMERICAL, e.what());
    } catch (const std::bad_alloc&) {
        return fail(NME_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(NME_INTERNAL, e.what());
    }
}

nme::Matrix read_matrix(size_t n, const double* data) {
    nme::Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            const size_t k = (i * n + j) * 2;
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = nme::Complex(data[k], data[k + 1]);
        }
    }
    return m;
}

void write_matrix(const nme::Matrix& m, double* out) {
    const auto n = static_cast<size_t>(m.rows());
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            const nme::Complex v = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            out[(i * n + j) * 2] = v.real();
            out[(i * n + j) * 2 + 1] = v.imag();
        }
    }
}

nme_status null_argument(const char* fn) { return fail(NME_INVALID_ARGUMENT, std::string(fn) + ": null argument"); }

}  // namespace

extern "C" {

const char* nme_last_error(void) { return last_error.c_str(); }

const char* nme_status_name(nme_status status) {
    switch (status) {
        case NME_OK: return "ok";
        case NME_INVALID_ARGUMENT: return "invalid argument";
        case NME_VALIDATION: return "validation error";
        case NME_PRECONDITION: return "precondition failure";
        case NME_NOT_CONVERGED: return "not converged";
        case NME_VERIFICATION: return "verification failure";
        case NME_NUMERICAL: return "numerical failure";
        case NME_INTERNAL: return "internal error";
    }
    return "unknown status";
}

nme_status nme_problem_create(size_t n, const double* a, const double* b, const double* q, double s, double t,
                              double p, nme_problem** out) {
    if (!a || !b || !q || !out) return null_argument("nme_problem_create");
    if (n == 0) return fail(NME_VALIDATION, "dimension must be at least 1");
    return guarded([&] {
        *out = new nme_problem{
            nme::ProblemInstance::create(read_matrix(n, a), read_matrix(n, b), read_matrix(n, q), s, t, p)};
        return NME_OK;
    });
}

nme_status nme_problem_create_example(int id, nme_problem** out) {
    if (!out) return null_argument("nme_problem_create_example");
    return guarded([&] {
        *out = new nme_problem{nme::examples::instance(nme::examples::by_id(id))};
        return NME_OK;
    });
}

nme_status nme_example_start(int id, double* out) {
    if (!out) return null_argument("nme_example_start");
    return guarded([&] {
        *out = nme::examples::by_id(id).start;
        return NME_OK;
    });
}

nme_status nme_example_solution(int id, double* y_out, double* x_out) {
    return guarded([&] {
        const auto& w = nme::examples::by_id(id);
        if (y_out) write_matrix(w.solution_y, y_out);
        if (x_out) write_matrix(w.solution_x, x_out);
        return NME_OK;
    });
}

void nme_problem_free(nme_problem* problem) { delete problem; }

size_t nme_problem_dim(const nme_problem* problem) {
    return problem ? static_cast<size_t>(problem->instance.dim()) : 0;
}

void nme_problem_exponents(const nme_problem* problem, double* s, double* t, double* p) {
    if (!problem) return;
    if (s) *s = problem->instance.s();
    if (t) *t = problem->instance.user_t();
    if (p) *p = problem->instance.user_p();
}

nme_status nme_problem_matrices(const nme_problem* problem, double* a, double* b, double* q) {
    if (!problem) return null_argument("nme_problem_matrices");
    if (a) write_matrix(problem->instance.user_a(), a);
    if (b) write_matrix(problem->instance.user_b(), b);
    if (q) write_matrix(problem->instance.q().mat(), q);
    return NME_OK;
}

int nme_problem_swapped(const nme_problem* problem) { return problem && problem->instance.swapped() ? 1 : 0; }

nme_status nme_check(const nme_problem* problem, nme_check_kind kind, double param, nme_report** out) {
    if (!problem || !out) return null_argument("nme_check");
    return guarded([&]() -> nme_status {
        const auto& p = problem->instance;
        switch (kind) {
            case NME_CHECK_NECESSARY:
                *out = new nme_report{nme::check_necessary(p)};
                return NME_OK;
            case NME_CHECK_SUFFICIENT:
                *out = new nme_report{nme::check_sufficient(p)};
                return NME_OK;
            case NME_CHECK_UNIQUENESS_INTERVAL:
                *out = new nme_report{nme::check_uniqueness_interval(p)};
                return NME_OK;
            case NME_CHECK_UNIQUENESS_K: {
                // Without a feasible k on the grid, report the verdicts at its first point.
                const double k = param > 0.0 ? param : nme::scan_k(p).value_or(1.01);
                *out = new nme_report{nme::check_uniqueness_k(p, k)};
                return NME_OK;
            }
            case NME_CHECK_FIXED_POINT: {
                const double alpha = param > 0.0 ? param : nme::alpha_search(p).value_or(nme::lambda_min(p.q()));
                *out = new nme_report{nme::fixed_point_conditions(p, alpha)};
                return NME_OK;
            }
            case NME_CHECK_COUPLED: {
                const double b =
                    param > 0.0 ? param : nme::b_search(p).value_or(std::pow(nme::lambda_max(p.q()), p.t() / p.s()));
                *out = new nme_report{nme::coupled_conditions(p, b)};
                return NME_OK;
            }
        }
        return fail(NME_INVALID_ARGUMENT, "nme_check: unknown check kind");
    });
}

void nme_report_free(nme_report* report) { delete report; }

const char* nme_report_label(const nme_report* report) { return report ? report->report.label.c_str() : ""; }

int nme_report_holds(const nme_report* report) { return report && report->report.holds() ? 1 : 0; }

size_t nme_report_applicable_count(const nme_report* report) {
    return report ? report->report.applicable.size() : 0;
}

const char* nme_report_applicable(const nme_report* report, size_t i) {
    if (!report || i >= report->report.applicable.size()) return nullptr;
    return report->report.applicable[i].c_str();
}

size_t nme_report_verdict_count(const nme_report* report) { return report ? report->report.verdicts.size() : 0; }

nme_status nme_report_verdict(const nme_report* report, size_t i, const char** name, int* holds, double* lhs,
                              double* rhs, const char** note) {
    if (!report) return null_argument("nme_report_verdict");
    if (i >= report->report.verdicts.size()) return fail(NME_INVALID_ARGUMENT, "verdict index out of range");
    const auto& v = report->report.verdicts[i];
    if (name) *name = v.name.c_str();
    if (holds) *holds = v.holds ? 1 : 0;
    if (lhs) *lhs = v.lhs;
    if (rhs) *rhs = v.rhs;
    if (note) *note = v.note.c_str();
    return NME_OK;
}

size_t nme_report_scalar_count(const nme_report* report) { return report ? report->report.scalars.size() : 0; }

nme_status nme_report_scalar(const nme_report* report, size_t i, const char** name, double* value) {
    if (!report) return null_argument("nme_report_scalar");
    if (i >= report->report.scalars.size()) return fail(NME_INVALID_ARGUMENT, "scalar index out of range");
    if (name) *name = report->report.scalars[i].first.c_str();
    if (value) *value = report->report.scalars[i].second;
    return NME_OK;
}

int nme_report_has_bracket(const nme_report* report) { return report && report->report.bracket ? 1 : 0; }

nme_status nme_report_bracket(const nme_report* report, double* lower, double* upper) {
    if (!report) return null_argument("nme_report_bracket");
    if (!report->report.bracket) return fail(NME_INVALID_ARGUMENT, "report carries no bracket");
    if (lower) write_matrix(report->report.bracket->lower.mat(), lower);
    if (upper) write_matrix(report->report.bracket->upper.mat(), upper);
    return NME_OK;
}

nme_status nme_bounds_compute(const nme_problem* problem, nme_bounds** out) {
    if (!problem || !out) return null_argument("nme_bounds_compute");
    return guarded([&] {
        *out = new nme_bounds{nme::solution_bounds(problem->instance)};
        return NME_OK;
    });
}

void nme_bounds_free(nme_bounds* bounds) { delete bounds; }

void nme_bounds_scalars(const nme_bounds* bounds, double* c, double* m) {
    if (!bounds) return;
    if (c) *c = bounds->bounds.c;
    if (m) *m = bounds->bounds.m;
}

nme_status nme_bounds_matrices(const nme_bounds* bounds, double* upper, double* q_root) {
    if (!bounds) return null_argument("nme_bounds_matrices");
    if (upper) write_matrix(bounds->bounds.upper.mat(), upper);
    if (q_root) write_matrix(bounds->bounds.q_root.mat(), q_root);
    return NME_OK;
}

void nme_options_default(nme_options* options) {
    if (!options) return;
    options->tol = 0.0;
    options->max_iter = 1000;
    options->alpha = 0.0;
    options->b = 0.0;
    options->force = 0;
    options->scheme = NME_SCHEME_AUTO;
}

nme_status nme_solve(const nme_problem* problem, const nme_options* options, nme_solution** out) {
    if (!problem || !out) return null_argument("nme_solve");
    nme_options defaults;
    nme_options_default(&defaults);
    const nme_options& o = options ? *options : defaults;
    nme::SolveOptions opts;
    if (o.tol > 0.0) opts.tol = o.tol;
    if (o.tol < 0.0 || std::isnan(o.tol)) return fail(NME_VALIDATION, "tol must be positive");
    opts.max_iter = o.max_iter;
    if (o.alpha > 0.0) opts.alpha = o.alpha;
    if (o.b > 0.0) opts.b_upper = o.b;
    opts.force = o.force != 0;
    switch (o.scheme) {
        case NME_SCHEME_AUTO: opts.scheme = nme::Scheme::Auto; break;
        case NME_SCHEME_FIXED_POINT: opts.scheme = nme::Scheme::FixedPointMax; break;
        case NME_SCHEME_COUPLED: opts.scheme = nme::Scheme::CoupledMin; break;
        default: return fail(NME_INVALID_ARGUMENT, "nme_solve: unknown scheme");
    }
    return guarded([&] {
        auto* sol = new nme_solution{nme::solve(problem->instance, opts)};
        *out = sol;
        if (!sol->report.converged) {
            return fail(NME_NOT_CONVERGED, "no convergence after " + std::to_string(sol->report.iterations) +
                                               " iterations (last step " +
                                               nme::detail::real_text(sol->report.final_step) + ")");
        }
        return NME_OK;
    });
}

void nme_solution_free(nme_solution* solution) { delete solution; }

nme_scheme nme_solution_scheme(const nme_solution* solution) {
    if (!solution) return NME_SCHEME_AUTO;
    return solution->report.scheme == nme::Scheme::CoupledMin ? NME_SCHEME_COUPLED : NME_SCHEME_FIXED_POINT;
}

nme_extremality nme_solution_extremality(const nme_solution* solution) {
    if (!solution) return NME_UNKNOWN;
    switch (solution->report.extremality) {
        case nme::Extremality::Maximal: return NME_MAXIMAL;
        case nme::Extremality::Minimal: return NME_MINIMAL;
        case nme::Extremality::Unknown: return NME_UNKNOWN;
    }
    return NME_UNKNOWN;
}

int nme_solution_iterations(const nme_solution* solution) { return solution ? solution->report.iterations : 0; }
int nme_solution_converged(const nme_solution* solution) { return solution && solution->report.converged ? 1 : 0; }
int nme_solution_preconditions_held(const nme_solution* solution) {
    return solution && solution->report.preconditions_held ? 1 : 0;
}
double nme_solution_residual(const nme_solution* solution) { return solution ? solution->report.residual : NAN; }
double nme_solution_final_step(const nme_solution* solution) { return solution ? solution->report.final_step : NAN; }
double nme_solution_initial_step(const nme_solution* solution) {
    return solution ? solution->report.initial_step : NAN;
}
double nme_solution_delta(const nme_solution* solution) { return solution ? solution->report.delta : NAN; }
double nme_solution_start_parameter(const nme_solution* solution) {
    return solution ? solution->report.start_parameter : NAN;
}

nme_status nme_solution_x(const nme_solution* solution, double* out) {
    if (!solution || !out) return null_argument("nme_solution_x");
    write_matrix(solution->report.solution_x.mat(), out);
    return NME_OK;
}

nme_status nme_solution_y(const nme_solution* solution, double* out) {
    if (!solution || !out) return null_argument("nme_solution_y");
    write_matrix(solution->report.solution_y.mat(), out);
    return NME_OK;
}

size_t nme_solution_history_length(const nme_solution* solution) {
    return solution ? solution->report.history.size() : 0;
}

nme_status nme_solution_history_row(const nme_solution* solution, size_t i, int* iteration, double* step_x,
                                    double* step_y) {
    if (!solution) return null_argument("nme_solution_history_row");
    if (i >= solution->report.history.size()) return fail(NME_INVALID_ARGUMENT, "history index out of range");
    const auto& row = solution->report.history[i];
    if (iteration) *iteration = row.iteration;
    if (step_x) *step_x = row.step_x;
    if (step_y) *step_y = row.step_y;
    return NME_OK;
}

const char* nme_scheme_name(nme_scheme scheme) {
    switch (scheme) {
        case NME_SCHEME_AUTO: return "auto";
        case NME_SCHEME_FIXED_POINT: return "fixed-point";
        case NME_SCHEME_COUPLED: return "coupled";
    }
    return "unknown";
}

const char* nme_extremality_name(nme_extremality extremality) {
    switch (extremality) {
        case NME_MAXIMAL: return "maximal";
        case NME_MINIMAL: return "minimal";
        case NME_UNKNOWN: return "unknown";
    }
    return "unknown";
}

nme_status nme_residual(const nme_problem* problem, const double* x, double* out) {
    if (!problem || !x || !out) return null_argument("nme_residual");
    return guarded([&] {
        const nme::HermitianMatrix xm(read_matrix(nme_problem_dim(problem), x), "X");
        *out = nme::residual(problem->instance, xm);
        return NME_OK;
    });
}

nme_status nme_verify_solution(const nme_problem* problem, const double* x, nme_verification* out) {
    if (!problem || !x || !out) return null_argument("nme_verify_solution");
    return guarded([&] {
        const auto& p = problem->instance;
        const nme::HermitianMatrix xm(read_matrix(nme_problem_dim(problem), x), "X");
        if (!nme::is_hpd(xm)) throw nme::VerificationError("X is not positive definite");
        out->residual = nme::residual(p, xm);
        const nme::BracketMembership m = nme::bracket_membership(p, xm);
        out->in_interval = m.in_interval ? 1 : 0;
        out->in_refined = m.in_refined ? (*m.in_refined ? 1 : 0) : -1;
        if (!(out->residual <= nme::kSolutionRtol * p.norm_q())) {
            return fail(NME_VERIFICATION, "residual " + nme::detail::real_text(out->residual) + " exceeds " +
                                              nme::detail::real_text(nme::kSolutionRtol * p.norm_q()));
        }
        return NME_OK;
    });
}

nme_status nme_factorize(const nme_problem* problem, const double* x, nme_factorization** out) {
    if (!problem || !x || !out) return null_argument("nme_factorize");
    return guarded([&] {
        const nme::HermitianMatrix xm(read_matrix(nme_problem_dim(problem), x), "X");
        *out = new nme_factorization{nme::factorization_from_solution(problem->instance, xm)};
        return NME_OK;
    });
}

nme_status nme_factorization_create(size_t n, const double* u, const double* lambda, const double* n1,
                                    const double* n2, nme_factorization** out) {
    if (!u || !lambda || !n1 || !n2 || !out) return null_argument("nme_factorization_create");
    if (n == 0) return fail(NME_VALIDATION, "dimension must be at least 1");
    return guarded([&] {
        nme::RealVector lam(static_cast<Eigen::Index>(n));
        for (size_t i = 0; i < n; ++i) lam(static_cast<Eigen::Index>(i)) = lambda[i];
        *out = new nme_factorization{{read_matrix(n, u), lam, read_matrix(n, n1), read_matrix(n, n2)}};
        return NME_OK;
    });
}

void nme_factorization_free(nme_factorization* f) { delete f; }

nme_status nme_factorization_get(const nme_factorization* f, double* u, double* lambda, double* n1, double* n2) {
    if (!f) return null_argument("nme_factorization_get");
    if (u) write_matrix(f->f.u, u);
    if (lambda) {
        for (Eigen::Index i = 0; i < f->f.lambda.size(); ++i) lambda[i] = f->f.lambda(i);
    }
    if (n1) write_matrix(f->f.n1, n1);
    if (n2) write_matrix(f->f.n2, n2);
    return NME_OK;
}

nme_status nme_factorization_verify(const nme_problem* problem, const nme_factorization* f, int* ok) {
    if (!problem || !f || !ok) return null_argument("nme_factorization_verify");
    return guarded([&] {
        *ok = nme::verify_factorization(problem->instance, f->f) ? 1 : 0;
        return NME_OK;
    });
}

}  // extern "C"
