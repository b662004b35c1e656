// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Optional argv[1]: directory for the convergence-history CSV files.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nme/examples.hpp"
#include "nme/solvers.hpp"
#include "oracles.hpp"
#include "problem_file.hpp"

using namespace nme;

namespace {

// Pinned tolerances.
constexpr double kStepTol = 1e-14;
constexpr double kMatrixTol = 1e-9;
constexpr double kScalarRtol = 1e-10;
constexpr double kRuntimeSeconds = 1.0;
constexpr double kResidualRtol = 1e-12;
constexpr double kOracleTol = 1e-10;
constexpr double kMonotoneRtol = 1e-10;
constexpr double kErrorBoundSlack = 1e-12;
constexpr double kRatioFloor = 1e-13;
constexpr int kFirstMaxIter = 12;
constexpr int kSecondMaxIter = 25;

int failures = 0;

void verdict(const std::string& id, bool pass, const std::string& detail) {
    std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", id.c_str(), detail.c_str());
    if (!pass) ++failures;
}

void note(const std::string& text) { std::printf("     %s\n", text.c_str()); }

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16g", v);
    return buf;
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

struct Timed {
    SolveReport report;
    double seconds;
};

Timed timed_solve(const ProblemInstance& p, const SolveOptions& o) {
    const auto t0 = std::chrono::steady_clock::now();
    SolveReport r = solve(p, o);
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    return {std::move(r), dt.count()};
}

SolveOptions first_options() {
    SolveOptions o;
    o.alpha = examples::first().start;
    o.tol = kStepTol;
    o.record_iterates = true;
    return o;
}

SolveOptions second_options() {
    SolveOptions o;
    o.b_upper = examples::second().start;
    o.tol = kStepTol;
    o.record_iterates = true;
    return o;
}

Matrix eye(Eigen::Index n, double v) { return Matrix::Identity(n, n) * v; }

ProblemInstance random_fixed_point_instance(std::mt19937& rng, Eigen::Index n) {
    std::uniform_int_distribution<int> expo(1, 4);
    const double t = expo(rng);
    const double s = t + expo(rng) - 1;
    const double p = std::min<double>(t, expo(rng));
    return ProblemInstance::create(oracle::random_complex(n, 0.15, rng), oracle::random_complex(n, 0.15, rng),
                                   oracle::random_hpd(n, 1.0, 3.0, rng), s, t, p);
}

ProblemInstance random_coupled_instance(std::mt19937& rng, Eigen::Index n) {
    std::uniform_real_distribution<double> scale(1.5, 2.5);
    const Matrix a = eye(n, scale(rng)) + oracle::random_complex(n, 0.05, rng);
    const Matrix b = oracle::random_complex(n, 0.05, rng) + eye(n, 0.05);
    return ProblemInstance::create(a, b, oracle::random_hpd(n, 7.0, 9.0, rng), 3, 4, 1);
}

// Unstructured instance: random sizes, exponents and scales; often unsolvable.
ProblemInstance random_wild_instance(std::mt19937& rng, Eigen::Index n) {
    std::uniform_int_distribution<int> expo(1, 5);
    std::uniform_real_distribution<double> mag(0.05, 3.0);
    std::uniform_real_distribution<double> qlo(0.2, 8.0);
    const double lo = qlo(rng);
    return ProblemInstance::create(oracle::random_complex(n, mag(rng) / std::sqrt(2.0 * n), rng),
                                   oracle::random_complex(n, mag(rng) / std::sqrt(2.0 * n), rng),
                                   oracle::random_hpd(n, lo, lo * 1.5, rng), expo(rng), expo(rng), expo(rng));
}

// Random solve that is trusted only after an independent residual check.
std::optional<SolveReport> verified_solve(const ProblemInstance& p, bool force) {
    SolveOptions o;
    o.force = force;
    try {
        SolveReport r = solve(p, o);
        if (!r.converged || r.residual > kSolutionRtol * p.norm_q()) return std::nullopt;
        return r;
    } catch (const PreconditionError&) {
    } catch (const NumericalError&) {
    }
    return std::nullopt;
}

// ---- criteria ----

void criterion_1() {
    const auto& w = examples::first();
    const Timed run = timed_solve(examples::instance(w), first_options());
    const SolveReport& r = run.report;
    const double ey = oracle::max_abs_diff(r.solution_y.mat(), w.solution_y);
    const double ex = oracle::max_abs_diff(r.solution_x.mat(), w.solution_x);
    const bool ok = r.converged && r.final_step <= kStepTol && r.iterations <= kFirstMaxIter && ey <= kMatrixTol &&
                    ex <= kMatrixTol && run.seconds < kRuntimeSeconds;
    verdict("1 first instance", ok,
            "iterations " + std::to_string(r.iterations) + ", step " + num(r.final_step) + ", |Y - Y_ref| " + num(ey) +
                ", |X - X_ref| " + num(ex) + ", " + num(run.seconds) + " s");
}

void criterion_2() {
    const ProblemInstance p = examples::instance(examples::first());
    const ConditionReport c = fixed_point_conditions(p, examples::first().start);
    const Verdict* start = c.find("alpha + alpha^(-t/s)||A||^2 + alpha^(-p/s)||B||^2 < lambda_min(Q)");
    const Verdict* uniq = c.find("t beta^(-t/s)||A||^2 + p beta^(-p/s)||B||^2 < s beta");
    if (!start || !uniq || !c.scalar("beta")) {
        verdict("2 first instance scalars", false, "missing verdicts");
        return;
    }
    struct Item {
        const char* name;
        double got;
        double want;
    };
    const Item items[] = {{"start sum", start->lhs, 1.06191157562005},
                          {"beta", *c.scalar("beta"), 1.946624597494775},
                          {"uniqueness lhs", uniq->lhs, 0.0716001214949702},
                          {"s beta", uniq->rhs, 5.839873792484324}};
    bool ok = true;
    std::string detail;
    for (const Item& it : items) {
        const double e = rel_err(it.got, it.want);
        ok = ok && e <= kScalarRtol;
        detail += std::string(it.name) + " rel " + num(e) + "; ";
    }
    verdict("2 first instance scalars", ok, detail);
    for (const Item& it : items) note(std::string(it.name) + ": computed " + num(it.got) + ", reference " + num(it.want));
}

void criterion_3() {
    const auto& w = examples::second();
    const ProblemInstance p = examples::instance(w);
    const ConditionReport c = coupled_conditions(p, w.start);
    const double ea = rel_err(c.scalar("a").value_or(NAN), 0.50754289893569);
    const double et = rel_err(c.scalar("theta").value_or(NAN), 3.940180790866569);
    const Timed run = timed_solve(p, second_options());
    const SolveReport& r = run.report;
    const double ey = oracle::max_abs_diff(r.solution_y.mat(), w.solution_y);
    const double ex = oracle::max_abs_diff(r.solution_x.mat(), w.solution_x);
    const bool ok = ea <= kScalarRtol && et <= kScalarRtol && r.converged && r.iterations <= kSecondMaxIter &&
                    ey <= kMatrixTol && ex <= kMatrixTol && run.seconds < kRuntimeSeconds;
    verdict("3 second instance", ok,
            "a rel " + num(ea) + ", theta rel " + num(et) + ", iterations " + std::to_string(r.iterations) +
                ", |Y - Y_ref| " + num(ey) + ", |X - X_ref| " + num(ex) + ", " + num(run.seconds) + " s");
}

void criterion_4() {
    const ProblemInstance p1 = examples::instance(examples::first());
    const ProblemInstance p2 = examples::instance(examples::second());
    const double r1 = residual(p1, solve(p1, first_options()).solution_x);
    const double r2 = residual(p2, solve(p2, second_options()).solution_x);
    const bool ok = r1 <= kResidualRtol * p1.norm_q() && r2 <= kResidualRtol * p2.norm_q();
    verdict("4 residual certificates", ok, "first " + num(r1) + ", second " + num(r2));
}

struct DiagonalCase {
    Matrix a, b, q;
    double s, t, p;
};

DiagonalCase random_diagonal_case(std::mt19937& rng, Eigen::Index n) {
    std::uniform_int_distribution<int> expo(1, 5);
    const double s = expo(rng);
    const double t = expo(rng);
    const double p = expo(rng);
    const bool fixed = s >= std::max(t, p);
    return {oracle::random_diagonal(n, fixed ? 0.05 : 1.5, fixed ? 0.4 : 2.5, rng),
            oracle::random_diagonal(n, 0.02, 0.2, rng),
            oracle::random_diagonal(n, fixed ? 1.0 : 6.0, fixed ? 3.0 : 9.0, rng, false),
            s,
            t,
            p};
}

// s == t >= p with a large A: both schemes' hypotheses can hold together.
DiagonalCase random_shared_case(std::mt19937& rng, Eigen::Index n) {
    std::uniform_int_distribution<int> expo(1, 5);
    const double s = expo(rng);
    std::uniform_int_distribution<int> lower(1, static_cast<int>(s));
    return {oracle::random_diagonal(n, 1.6, 2.2, rng), oracle::random_diagonal(n, 0.02, 0.1, rng),
            oracle::random_diagonal(n, 6.0, 9.0, rng, false), s, s, static_cast<double>(lower(rng))};
}

double oracle_mismatch(const DiagonalCase& d, const SolveReport& r, bool maximal) {
    double worst = 0;
    for (Eigen::Index i = 0; i < d.q.rows(); ++i) {
        const ScalarRoots roots =
            scalar_oracle({d.q(i, i).real(), std::norm(d.a(i, i)), std::norm(d.b(i, i)), d.s, d.t, d.p});
        const std::optional<double> want = maximal ? roots.max_root : roots.min_root;
        if (!want) return INFINITY;
        worst = std::max(worst, std::abs(r.solution_x.mat()(i, i) - *want));
        for (Eigen::Index j = 0; j < d.q.rows(); ++j) {
            if (j != i) worst = std::max(worst, std::abs(r.solution_x.mat()(i, j)));
        }
    }
    return worst;
}

void criterion_5() {
    std::mt19937 rng(5005);
    int accepted = 0, attempts = 0;
    double worst = 0;
    while (accepted < 50 && attempts < 5000) {
        ++attempts;
        const DiagonalCase d = random_diagonal_case(rng, 1 + attempts % 4);
        const ProblemInstance p = ProblemInstance::create(d.a, d.b, d.q, d.s, d.t, d.p);
        std::optional<SolveReport> r;
        try {
            r.emplace(solve(p));
        } catch (const PreconditionError&) {
            continue;
        }
        ++accepted;
        if (!r->converged) {
            worst = INFINITY;
            continue;
        }
        worst = std::max(worst, oracle_mismatch(d, *r, r->scheme == Scheme::FixedPointMax));
    }

    int shared = 0;
    bool ordered = true;
    double shared_worst = 0;
    for (int trial = 0; trial < 400 && shared < 20; ++trial) {
        const DiagonalCase d = random_shared_case(rng, 1 + trial % 4);
        const ProblemInstance p = ProblemInstance::create(d.a, d.b, d.q, d.s, d.t, d.p);
        std::optional<SolveReport> hi, lo;
        try {
            hi.emplace(solve_fixed_point(p));
            lo.emplace(solve_coupled(p));
        } catch (const PreconditionError&) {
            continue;
        }
        ++shared;
        if (!hi->converged || !lo->converged) {
            ordered = false;
            continue;
        }
        shared_worst = std::max({shared_worst, oracle_mismatch(d, *hi, true), oracle_mismatch(d, *lo, false)});
        ordered = ordered && loewner_leq(lo->solution_x, hi->solution_x, kMonotoneRtol * p.norm_q());
    }
    const bool ok = accepted == 50 && worst <= kOracleTol && shared > 0 && shared_worst <= kOracleTol && ordered;
    verdict("5 scalar oracle equivalence", ok,
            std::to_string(accepted) + " instances (" + std::to_string(attempts) + " drawn), max deviation " +
                num(worst) + "; " + std::to_string(shared) + " with both schemes, deviation " + num(shared_worst) +
                ", X_min <= X_max " + (ordered ? "holds" : "fails"));
}

bool monotone_run(const ProblemInstance& p, const SolveReport& r) {
    const double tol = kMonotoneRtol * p.norm_q();
    const auto& it = r.iterates;
    for (std::size_t n = 0; n < it.size(); ++n) {
        if (r.scheme == Scheme::CoupledMin && !loewner_leq(it[n].lower, it[n].upper, tol)) return false;
        if (n == 0) continue;
        if (!loewner_leq(it[n - 1].lower, it[n].lower, tol)) return false;
        if (r.scheme == Scheme::CoupledMin && !loewner_leq(it[n].upper, it[n - 1].upper, tol)) return false;
    }
    return true;
}

void criterion_6() {
    std::mt19937 rng(6006);
    int fixed_runs = 0, coupled_runs = 0, bad = 0;
    auto consider = [&](const ProblemInstance& p, SolveOptions o) {
        o.record_iterates = true;
        std::optional<SolveReport> found;
        try {
            found.emplace(solve(p, o));
        } catch (const PreconditionError&) {
            return;
        }
        const SolveReport& r = *found;
        if (r.scheme == Scheme::FixedPointMax) {
            if (!r.converged) return;
            ++fixed_runs;
        } else {
            ++coupled_runs;
        }
        if (!monotone_run(p, r)) ++bad;
    };
    consider(examples::instance(examples::first()), first_options());
    consider(examples::instance(examples::second()), second_options());
    for (int trial = 0; trial < 60; ++trial) {
        const Eigen::Index n = 1 + trial % 4;
        consider(trial % 2 ? random_fixed_point_instance(rng, n) : random_coupled_instance(rng, n), {});
    }
    verdict("6 monotonicity", bad == 0 && fixed_runs >= 10 && coupled_runs >= 10,
            std::to_string(fixed_runs) + " fixed-point runs, " + std::to_string(coupled_runs) + " coupled runs, " +
                std::to_string(bad) + " violations");
}

void criterion_7() {
    std::mt19937 rng(7007);
    int verified = 0, outside = 0, refined_checked = 0, roundtrips = 0, roundtrip_failures = 0;
    auto consider = [&](const ProblemInstance& p, const HermitianMatrix& x) {
        ++verified;
        const BracketMembership m = bracket_membership(p, x);
        if (!m.in_interval) ++outside;
        if (m.in_refined.has_value()) {
            ++refined_checked;
            if (!*m.in_refined) ++outside;
        }
        ++roundtrips;
        if (!verify_factorization(p, factorization_from_solution(p, x))) ++roundtrip_failures;
    };
    for (const auto* w : {&examples::first(), &examples::second()}) {
        const ProblemInstance p = examples::instance(*w);
        consider(p, HermitianMatrix(w->solution_x, "X"));
    }
    for (int trial = 0; trial < 60; ++trial) {
        const Eigen::Index n = 1 + trial % 4;
        const ProblemInstance p = trial % 2 ? random_fixed_point_instance(rng, n) : random_coupled_instance(rng, n);
        if (auto r = verified_solve(p, true)) consider(p, r->solution_x);
    }
    const bool ok = outside == 0 && roundtrip_failures == 0 && roundtrips - 2 >= 20;
    verdict("7 brackets and factorization", ok,
            std::to_string(verified) + " verified solutions, " + std::to_string(refined_checked) +
                " with [mI, N] defined, " + std::to_string(outside) + " outside; " +
                std::to_string(roundtrips - 2) + " random roundtrips, " + std::to_string(roundtrip_failures) +
                " failed");
}

// ||Y_n - Y_final|| <= delta^(n - anchor) / (1 - delta) ||Y_(anchor+1) - Y_anchor|| for n >= anchor.
struct BoundCheck {
    bool ok = true;
    std::vector<std::string> violations;
};

BoundCheck error_bound(const SolveReport& r, std::size_t anchor) {
    BoundCheck out;
    const auto& it = r.iterates;
    const double init = std::max(spectral_norm(it[anchor + 1].lower - it[anchor].lower),
                                 spectral_norm(it[anchor + 1].upper - it[anchor].upper));
    for (std::size_t n = anchor; n < it.size(); ++n) {
        const double err =
            std::max(spectral_norm(it[n].lower - r.solution_y), spectral_norm(it[n].upper - r.solution_y));
        const double bound =
            std::pow(r.delta, static_cast<double>(n - anchor)) / (1.0 - r.delta) * init + kErrorBoundSlack;
        if (err > bound) {
            out.ok = false;
            out.violations.push_back("n=" + std::to_string(n) + " error " + num(err) + " > bound " + num(bound));
        }
    }
    return out;
}

void criterion_8() {
    const SolveReport r1 = solve(examples::instance(examples::first()), first_options());
    const SolveReport r2 = solve(examples::instance(examples::second()), second_options());
    const BoundCheck b1 = error_bound(r1, 0);
    const BoundCheck b2 = error_bound(r2, 0);
    std::string detail = "first (delta " + num(r1.delta) + ") " + (b1.ok ? "holds" : "violated") + ", second (delta " +
                         num(r2.delta) + ") " + (b2.ok ? "holds" : "violated");
    verdict("8 a priori error bound", b1.ok && b2.ok, detail);
    for (const auto& v : b1.violations) note("first: " + v);
    for (const auto& v : b2.violations) note("second: " + v);
    const BoundCheck shifted = error_bound(r1, 1);
    note(std::string("first, bound anchored at Y_1: ") + (shifted.ok ? "holds" : "violated"));
}

void criterion_9() {
    std::mt19937 rng(9009);
    int verified = 0, contradictions = 0, necessary_fails = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const Eigen::Index n = 1 + trial % 4;
        const ProblemInstance p = trial % 3 == 0   ? random_fixed_point_instance(rng, n)
                            : trial % 3 == 1 ? random_coupled_instance(rng, n)
                                             : random_wild_instance(rng, n);
        const bool necessary = check_necessary(p).holds();
        if (!necessary) ++necessary_fails;
        if (!verified_solve(p, true)) continue;
        ++verified;
        if (!necessary) ++contradictions;
    }
    verdict("9 contrapositive soundness", contradictions == 0 && verified >= 30,
            std::to_string(verified) + " of 100 verified, " + std::to_string(contradictions) +
                " fail the necessary condition");
    note(std::to_string(necessary_fails) + " of 100 fail the necessary condition");
}

void history_ratios(const std::filesystem::path& dir) {
    bool ok = true;
    std::string detail;
    const std::pair<const char*, std::function<SolveReport()>> runs[] = {
        {"first", [] { return solve(examples::instance(examples::first()), first_options()); }},
        {"second", [] { return solve(examples::instance(examples::second()), second_options()); }}};
    std::vector<std::string> notes;
    for (const auto& [name, run] : runs) {
        const SolveReport r = run();
        std::vector<cli::HistoryCsvRow> rows;
        for (const HistoryRow& h : r.history) rows.push_back({h.iteration, h.step_x, h.step_y});
        const std::filesystem::path file = dir / (std::string("history_") + name + ".csv");
        cli::write_file(file.string(), cli::write_history_csv(rows));
        const auto back = cli::parse_history_csv(cli::read_file(file.string()));
        double worst = 0;
        for (std::size_t i = 1; i < back.size(); ++i) {
            std::vector<std::pair<double, double>> columns{{back[i - 1].step_x, back[i].step_x}};
            if (r.scheme == Scheme::CoupledMin) columns.emplace_back(back[i - 1].step_y, back[i].step_y);
            for (const auto& [prev, cur] : columns) {
                if (prev <= kRatioFloor || cur <= kRatioFloor) continue;
                const double ratio = cur / prev;
                worst = std::max(worst, ratio);
                if (ratio > r.delta) {
                    ok = false;
                    notes.push_back(std::string(name) + ": row " + std::to_string(back[i].iteration) + " ratio " +
                                    num(ratio) + " > delta " + num(r.delta));
                }
            }
        }
        detail += std::string(name) + " max ratio " + num(worst) + " (delta " + num(r.delta) + "); ";
    }
    verdict("history ratio", ok, detail);
    for (const auto& n : notes) note(n);
}

}  // namespace

int main(int argc, char** argv) {
    const std::filesystem::path dir = argc > 1 ? argv[1] : std::filesystem::current_path();
    const std::vector<std::function<void()>> all = {criterion_1, criterion_2, criterion_3, criterion_4,
                                                    criterion_5, criterion_6, criterion_7, criterion_8,
                                                    criterion_9, [&] { history_ratios(dir); }};
    for (const auto& c : all) {
        try {
            c();
        } catch (const std::exception& e) {
            verdict("criterion raised", false, e.what());
        }
    }
    std::printf("%d failing\n", failures);
    return failures == 0 ? 0 : 1;
}
