// nme: command-line front end over the C API.

#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "nme/nme.h"
#include "problem_file.hpp"

namespace {

using nme::cli::Packed;

enum Exit { kOk = 0, kInternal = 1, kValidation = 2, kPrecondition = 3, kNotConverged = 4, kVerification = 5 };

int exit_for(nme_status st) {
    switch (st) {
        case NME_OK: return kOk;
        case NME_INVALID_ARGUMENT:
        case NME_VALIDATION: return kValidation;
        case NME_PRECONDITION: return kPrecondition;
        case NME_NOT_CONVERGED:
        case NME_NUMERICAL: return kNotConverged;
        case NME_VERIFICATION: return kVerification;
        case NME_INTERNAL: return kInternal;
    }
    return kInternal;
}

// Prints the library error and returns the matching exit code.
int report_error(nme_status st) {
    std::fprintf(stderr, "error (%s): %s\n", nme_status_name(st), nme_last_error());
    return exit_for(st);
}

struct ProblemDeleter {
    void operator()(nme_problem* p) const { nme_problem_free(p); }
};
struct ReportDeleter {
    void operator()(nme_report* r) const { nme_report_free(r); }
};
struct SolutionDeleter {
    void operator()(nme_solution* s) const { nme_solution_free(s); }
};
struct BoundsDeleter {
    void operator()(nme_bounds* b) const { nme_bounds_free(b); }
};
struct FactorizationDeleter {
    void operator()(nme_factorization* f) const { nme_factorization_free(f); }
};
using ProblemPtr = std::unique_ptr<nme_problem, ProblemDeleter>;

struct Input {
    std::string file;
    int example = 0;
};

// Loads the problem from --example or a file. Returns an exit code on failure.
int load_problem(const Input& in, ProblemPtr& out) {
    nme_problem* raw = nullptr;
    nme_status st;
    if (in.example != 0) {
        st = nme_problem_create_example(in.example, &raw);
    } else if (in.file.empty()) {
        std::fprintf(stderr, "error: give a problem file or --example 1|2\n");
        return kValidation;
    } else {
        nme::cli::ProblemFile f;
        try {
            f = nme::cli::parse_problem(nme::cli::read_file(in.file));
        } catch (const nme::cli::FileError& e) {
            std::fprintf(stderr, "error: %s: %s\n", in.file.c_str(), e.what());
            return kValidation;
        }
        st = nme_problem_create(f.n, f.a.data(), f.b.data(), f.q.data(), f.s, f.t, f.p, &raw);
    }
    if (st != NME_OK) return report_error(st);
    out.reset(raw);
    return kOk;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16g", v);
    return buf;
}

void print_matrix(const char* name, const Packed& m, std::size_t n) {
    bool real = true;
    for (std::size_t k = 1; k < m.size(); k += 2) real = real && m[k] == 0.0;
    std::printf("%s =\n", name);
    for (std::size_t i = 0; i < n; ++i) {
        std::printf("  ");
        for (std::size_t j = 0; j < n; ++j) {
            const double re = m[(i * n + j) * 2];
            const double im = m[(i * n + j) * 2 + 1];
            if (real) {
                std::printf("%24.16g", re);
            } else {
                std::printf("  (%.16g, %.16g)", re, im);
            }
        }
        std::printf("\n");
    }
}

void print_report(const nme_report* r) {
    std::printf("%s: %s\n", nme_report_label(r), nme_report_holds(r) ? "holds" : "fails");
    for (std::size_t i = 0; i < nme_report_verdict_count(r); ++i) {
        const char* name = nullptr;
        const char* note = nullptr;
        int holds = 0;
        double lhs = 0;
        double rhs = 0;
        nme_report_verdict(r, i, &name, &holds, &lhs, &rhs, &note);
        std::printf("  %-60s %s  lhs = %s  rhs = %s", name, holds ? "holds" : "fails", num(lhs).c_str(),
                    num(rhs).c_str());
        if (note && *note) std::printf("  [%s]", note);
        std::printf("\n");
    }
    for (std::size_t i = 0; i < nme_report_scalar_count(r); ++i) {
        const char* name = nullptr;
        double value = 0;
        nme_report_scalar(r, i, &name, &value);
        std::printf("  %s = %s\n", name, num(value).c_str());
    }
}

int cmd_check(const Input& in) {
    ProblemPtr problem;
    if (int rc = load_problem(in, problem); rc != kOk) return rc;
    if (nme_problem_swapped(problem.get())) {
        std::printf("note: correction terms exchanged so that t >= p; A and B below follow that order\n");
    }
    double s = 0;
    double t = 0;
    double p = 0;
    nme_problem_exponents(problem.get(), &s, &t, &p);
    const bool fixed_point = s >= std::max(t, p);
    const nme_check_kind kinds[] = {NME_CHECK_NECESSARY, NME_CHECK_SUFFICIENT, NME_CHECK_UNIQUENESS_INTERVAL,
                                    NME_CHECK_UNIQUENESS_K, fixed_point ? NME_CHECK_FIXED_POINT : NME_CHECK_COUPLED};
    for (nme_check_kind kind : kinds) {
        double param = 0.0;
        if (in.example != 0 && (kind == NME_CHECK_FIXED_POINT || kind == NME_CHECK_COUPLED)) {
            nme_example_start(in.example, &param);
        }
        nme_report* raw = nullptr;
        const nme_status st = nme_check(problem.get(), kind, param, &raw);
        if (st != NME_OK) return report_error(st);
        std::unique_ptr<nme_report, ReportDeleter> report(raw);
        print_report(report.get());
    }
    return kOk;
}

int cmd_bounds(const Input& in) {
    ProblemPtr problem;
    if (int rc = load_problem(in, problem); rc != kOk) return rc;
    nme_bounds* raw = nullptr;
    const nme_status st = nme_bounds_compute(problem.get(), &raw);
    if (st != NME_OK) return report_error(st);
    std::unique_ptr<nme_bounds, BoundsDeleter> bounds(raw);
    const std::size_t n = nme_problem_dim(problem.get());
    double c = 0;
    double m = 0;
    nme_bounds_scalars(bounds.get(), &c, &m);
    Packed upper(n * n * 2);
    Packed q_root(n * n * 2);
    nme_bounds_matrices(bounds.get(), upper.data(), q_root.data());
    std::printf("c = %s\n", num(c).c_str());
    std::printf("m = %s\n", num(m).c_str());
    print_matrix("N", upper, n);
    print_matrix("Q^(1/s)", q_root, n);
    return kOk;
}

struct SolveFlags {
    std::string scheme = "auto";
    std::optional<double> tol;
    int max_iter = 1000;
    std::optional<double> alpha;
    std::optional<double> b;
    bool force = false;
    std::string history;
    std::string solution;
};

int cmd_solve(const Input& in, const SolveFlags& flags) {
    ProblemPtr problem;
    if (int rc = load_problem(in, problem); rc != kOk) return rc;

    nme_options opts;
    nme_options_default(&opts);
    if (flags.scheme == "fixed-point") {
        opts.scheme = NME_SCHEME_FIXED_POINT;
    } else if (flags.scheme == "coupled") {
        opts.scheme = NME_SCHEME_COUPLED;
    }
    if (flags.tol) {
        if (!(*flags.tol > 0.0)) {
            std::fprintf(stderr, "error: --tol must be positive\n");
            return kValidation;
        }
        opts.tol = *flags.tol;
    }
    if (flags.max_iter < 1) {
        std::fprintf(stderr, "error: --max-iter must be at least 1\n");
        return kValidation;
    }
    opts.max_iter = flags.max_iter;
    if ((flags.alpha && !(*flags.alpha > 0.0)) || (flags.b && !(*flags.b > 0.0))) {
        std::fprintf(stderr, "error: --alpha and --b must be positive\n");
        return kValidation;
    }
    if (in.example != 0) {
        // The published runs fix the start parameter; an explicit flag wins.
        double start = 0;
        nme_example_start(in.example, &start);
        if (in.example == 1) opts.alpha = start;
        if (in.example == 2) opts.b = start;
    }
    if (flags.alpha) opts.alpha = *flags.alpha;
    if (flags.b) opts.b = *flags.b;
    opts.force = flags.force ? 1 : 0;

    nme_solution* raw = nullptr;
    const nme_status st = nme_solve(problem.get(), &opts, &raw);
    if (raw == nullptr) return report_error(st);
    std::unique_ptr<nme_solution, SolutionDeleter> sol(raw);

    const std::size_t n = nme_problem_dim(problem.get());
    std::printf("scheme: %s\n", nme_scheme_name(nme_solution_scheme(sol.get())));
    std::printf("start parameter: %s\n", num(nme_solution_start_parameter(sol.get())).c_str());
    std::printf("preconditions: %s\n", nme_solution_preconditions_held(sol.get()) ? "held" : "failed (forced)");
    if (nme_problem_swapped(problem.get())) std::printf("swap applied: yes\n");
    std::printf("iterations: %d\n", nme_solution_iterations(sol.get()));
    std::printf("converged: %s\n", nme_solution_converged(sol.get()) ? "yes" : "no");
    std::printf("final step: %s\n", num(nme_solution_final_step(sol.get())).c_str());
    std::printf("residual: %s\n", num(nme_solution_residual(sol.get())).c_str());
    std::printf("delta: %s\n", num(nme_solution_delta(sol.get())).c_str());
    std::printf("extremality: %s\n", nme_extremality_name(nme_solution_extremality(sol.get())));

    Packed x(n * n * 2);
    Packed y(n * n * 2);
    nme_solution_x(sol.get(), x.data());
    nme_solution_y(sol.get(), y.data());
    print_matrix("X", x, n);

    try {
        if (!flags.solution.empty()) {
            nme::cli::write_file(flags.solution, nme::cli::write_solution({n, x, y}));
        }
        if (!flags.history.empty()) {
            std::vector<nme::cli::HistoryCsvRow> rows;
            for (std::size_t i = 0; i < nme_solution_history_length(sol.get()); ++i) {
                nme::cli::HistoryCsvRow r{};
                nme_solution_history_row(sol.get(), i, &r.iteration, &r.step_x, &r.step_y);
                rows.push_back(r);
            }
            nme::cli::write_file(flags.history, nme::cli::write_history_csv(rows));
        }
    } catch (const nme::cli::FileError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kInternal;
    }
    if (st != NME_OK) return report_error(st);
    return kOk;
}

// Reads X from a solution file and checks its dimension against the problem.
int load_solution(const std::string& path, std::size_t n, Packed& x) {
    if (path.empty()) {
        std::fprintf(stderr, "error: --solution is required\n");
        return kValidation;
    }
    try {
        nme::cli::SolutionFile f = nme::cli::parse_solution(nme::cli::read_file(path));
        if (f.n != n) {
            std::fprintf(stderr, "error: %s: solution is %zux%zu, problem is %zux%zu\n", path.c_str(), f.n, f.n, n, n);
            return kValidation;
        }
        x = std::move(f.x);
    } catch (const nme::cli::FileError& e) {
        std::fprintf(stderr, "error: %s: %s\n", path.c_str(), e.what());
        return kValidation;
    }
    return kOk;
}

int cmd_verify(const Input& in, const std::string& solution_path) {
    ProblemPtr problem;
    if (int rc = load_problem(in, problem); rc != kOk) return rc;
    Packed x;
    if (int rc = load_solution(solution_path, nme_problem_dim(problem.get()), x); rc != kOk) return rc;
    nme_verification v{};
    const nme_status st = nme_verify_solution(problem.get(), x.data(), &v);
    if (st != NME_OK && st != NME_VERIFICATION) return report_error(st);
    std::printf("residual: %s\n", num(v.residual).c_str());
    std::printf("in [cI, Q^(1/s)]: %s\n", v.in_interval ? "true" : "false");
    std::printf("in [mI, N]: %s\n", v.in_refined < 0 ? "undefined" : (v.in_refined ? "true" : "false"));
    if (st == NME_VERIFICATION) return report_error(st);
    return kOk;
}

int cmd_factorize(const Input& in, const std::string& solution_path, const std::string& out_path) {
    ProblemPtr problem;
    if (int rc = load_problem(in, problem); rc != kOk) return rc;
    const std::size_t n = nme_problem_dim(problem.get());
    Packed x;
    if (int rc = load_solution(solution_path, n, x); rc != kOk) return rc;
    nme_factorization* raw = nullptr;
    nme_status st = nme_factorize(problem.get(), x.data(), &raw);
    if (st != NME_OK) return report_error(st);
    std::unique_ptr<nme_factorization, FactorizationDeleter> f(raw);

    nme::cli::FactorizationFile file{n, Packed(n * n * 2), std::vector<double>(n), Packed(n * n * 2),
                                     Packed(n * n * 2)};
    nme_factorization_get(f.get(), file.u.data(), file.lambda.data(), file.n1.data(), file.n2.data());
    int ok = 0;
    st = nme_factorization_verify(problem.get(), f.get(), &ok);
    if (st != NME_OK) return report_error(st);

    const std::string text = nme::cli::write_factorization(file);
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        try {
            nme::cli::write_file(out_path, text);
        } catch (const nme::cli::FileError& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return kInternal;
        }
    }
    std::printf("factorization verified: %s\n", ok ? "true" : "false");
    return ok ? kOk : kVerification;
}

void add_input(CLI::App* cmd, Input& in) {
    cmd->add_option("file", in.file, "Problem file (JSON)");
    cmd->add_option("--example", in.example, "Built-in worked instance instead of a file")
        ->check(CLI::IsMember({1, 2}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Positive definite solutions of X^s + A* X^-t A + B* X^-p B = Q"};
    app.require_subcommand(1);

    Input in;
    SolveFlags flags;
    std::string solution_in;
    std::string factor_out;

    auto* check = app.add_subcommand("check", "Evaluate existence and uniqueness conditions");
    add_input(check, in);

    auto* bounds = app.add_subcommand("bounds", "Print brackets containing every solution");
    add_input(bounds, in);

    auto* solve = app.add_subcommand("solve", "Iterate to the maximal or minimal solution");
    add_input(solve, in);
    solve->add_option("--scheme", flags.scheme, "auto | fixed-point | coupled")
        ->check(CLI::IsMember({"auto", "fixed-point", "coupled"}));
    solve->add_option("--tol", flags.tol, "Step-norm stopping threshold (default 1e-14 ||Q||)");
    solve->add_option("--max-iter", flags.max_iter, "Iteration cap");
    solve->add_option("--alpha", flags.alpha, "Fixed-point start Y0 = alpha I");
    solve->add_option("--b", flags.b, "Coupled upper start Y0 = b I");
    solve->add_flag("--force", flags.force, "Iterate even when the hypotheses fail");
    solve->add_option("--history", flags.history, "Write the step history as CSV");
    solve->add_option("--solution", flags.solution, "Write X and Y as JSON");

    auto* factorize = app.add_subcommand("factorize", "Build the factorization witness from a solution");
    add_input(factorize, in);
    factorize->add_option("--solution", solution_in, "Solution file")->required();
    factorize->add_option("--out", factor_out, "Write U, Lambda, N1, N2 here instead of stdout");

    auto* verify = app.add_subcommand("verify", "Check a solution file against the problem");
    add_input(verify, in);
    verify->add_option("--solution", solution_in, "Solution file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kValidation;
    }
    if (!in.file.empty() && in.example != 0) {
        std::fprintf(stderr, "error: give either a problem file or --example, not both\n");
        return kValidation;
    }

    if (check->parsed()) return cmd_check(in);
    if (bounds->parsed()) return cmd_bounds(in);
    if (solve->parsed()) return cmd_solve(in, flags);
    if (factorize->parsed()) return cmd_factorize(in, solution_in, factor_out);
    if (verify->parsed()) return cmd_verify(in, solution_in);
    return kValidation;
}
