#include "nme/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "text.hpp"

namespace nme {

namespace {

constexpr double kDefaultTolRelative = 1e-14;
constexpr int kAlphaGridPoints = 500;
constexpr double kAlphaGridLow = 1e-8;
constexpr int kBGridPoints = 100;

double resolve_tol(const ProblemInstance& p, const SolveOptions& opts) {
    const double tol = opts.tol.value_or(kDefaultTolRelative * p.norm_q());
    if (!(tol > 0.0) || !std::isfinite(tol)) throw ValidationError("solve: tol must be positive");
    if (opts.max_iter < 1) throw ValidationError("solve: max_iter must be at least 1");
    return tol;
}

std::string failed_summary(const ConditionReport& r) {
    std::string out = r.label + " failed:";
    for (const auto& v : r.verdicts) {
        if (!v.holds) {
            out += "\n  " + v.name + " (lhs " + detail::real_text(v.lhs, 17) + ", rhs " +
                   detail::real_text(v.rhs, 17) + ")";
        }
    }
    return out;
}

double fixed_point_lhs(const ProblemInstance& p, double alpha) {
    return alpha + std::pow(alpha, -p.t() / p.s()) * p.norm2_a() + std::pow(alpha, -p.p() / p.s()) * p.norm2_b();
}

double alpha_grid_point(double lmin_q, int j) {
    return lmin_q * std::pow(kAlphaGridLow, 1.0 - static_cast<double>(j) / kAlphaGridPoints);
}

// Argmin of the start-condition sum over the alpha grid, feasible or not.
std::pair<double, double> alpha_grid_argmin(const ProblemInstance& p) {
    const double lmin_q = lambda_min(p.q());
    double best = lmin_q;
    double best_lhs = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= kAlphaGridPoints; ++j) {
        const double alpha = alpha_grid_point(lmin_q, j);
        const double lhs = fixed_point_lhs(p, alpha);
        if (lhs < best_lhs) {
            best_lhs = lhs;
            best = alpha;
        }
    }
    return {best, best_lhs};
}

void require_positive_iterate(const HermitianMatrix& m, int iteration, const char* what) {
    if (!is_hpd(m)) {
        throw NumericalError(std::string(what) + " lost positive definiteness at iteration " +
                             std::to_string(iteration));
    }
}

}  // namespace

const char* to_string(Scheme s) {
    switch (s) {
        case Scheme::Auto: return "auto";
        case Scheme::FixedPointMax: return "fixed-point";
        case Scheme::CoupledMin: return "coupled";
    }
    return "unknown";
}

const char* to_string(Extremality e) {
    switch (e) {
        case Extremality::Maximal: return "maximal";
        case Extremality::Minimal: return "minimal";
        case Extremality::Unknown: return "unknown";
    }
    return "unknown";
}

double residual(const ProblemInstance& p, const HermitianMatrix& x) {
    if (x.dim() != p.dim()) throw ValidationError("residual: dimension mismatch");
    if (!is_hpd(x)) throw ValidationError("residual: X is not positive definite");
    const EigenPair eig = herm_eig(x);
    const Matrix r = herm_power(eig, p.s()).mat() + congruence(p.a(), herm_power(eig, -p.t())).mat() +
                     congruence(p.b(), herm_power(eig, -p.p())).mat() - p.q().mat();
    return spectral_norm(r);
}

ReducedEquation reduce(const ProblemInstance& p, Scheme scheme) {
    if (scheme == Scheme::Auto) scheme = p.s() >= p.t() ? Scheme::FixedPointMax : Scheme::CoupledMin;
    if (scheme == Scheme::FixedPointMax) return {1.0, p.t() / p.s(), p.p() / p.s(), 1.0 / p.s()};
    return {p.s() / p.t(), 1.0, p.p() / p.t(), 1.0 / p.t()};
}

double reduced_residual(const ProblemInstance& p, const ReducedEquation& eq, const HermitianMatrix& y) {
    if (!is_hpd(y)) throw ValidationError("reduced_residual: Y is not positive definite");
    const EigenPair eig = herm_eig(y);
    const Matrix r = herm_power(eig, eq.lead).mat() + congruence(p.a(), herm_power(eig, -eq.exp_a)).mat() +
                     congruence(p.b(), herm_power(eig, -eq.exp_b)).mat() - p.q().mat();
    return spectral_norm(r);
}

HermitianMatrix lift(const HermitianMatrix& y, double exponent) { return herm_power(y, exponent); }

Normalized normalize(const ProblemInstance& p) {
    const double k = lambda_max(p.q());
    const double s = p.s();
    const Matrix a = p.user_a() * std::pow(k, -0.5 * (p.user_t() / s + 1.0));
    const Matrix b = p.user_b() * std::pow(k, -0.5 * (p.user_p() / s + 1.0));
    return {ProblemInstance::create(a, b, p.q().mat() / k, s, p.user_t(), p.user_p()), k};
}

HermitianMatrix denormalize(const HermitianMatrix& x_scaled, double k, double s) {
    return x_scaled * std::pow(k, 1.0 / s);
}

ConditionReport fixed_point_conditions(const ProblemInstance& p, double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ValidationError("alpha must be positive");
    const double s = p.s();
    const double t = p.t();
    const double pp = p.p();
    const double lmin_q = lambda_min(p.q());

    ConditionReport r;
    r.label = "fixed-point scheme hypotheses";
    r.applicable.push_back("maximal solution by fixed-point iteration");
    r.verdicts.push_back({"max(t, p) <= s", t <= s, t, s, ""});
    r.verdicts.push_back({"alpha <= lambda_min(Q)", alpha <= lmin_q, alpha, lmin_q, ""});
    const double start_lhs = fixed_point_lhs(p, alpha);
    r.verdicts.push_back({"alpha + alpha^(-t/s)||A||^2 + alpha^(-p/s)||B||^2 < lambda_min(Q)", start_lhs < lmin_q,
                          start_lhs, lmin_q, ""});

    const Matrix shifted = p.q().mat() - p.a().adjoint() * p.a() * std::pow(alpha, -t / s) -
                           p.b().adjoint() * p.b() * std::pow(alpha, -pp / s);
    const double beta = lambda_min(HermitianMatrix::from_symmetrized(shifted));
    r.verdicts.push_back({"beta > 0", beta > 0.0, 0.0, beta, "beta = lambda_min(Q - alpha^(-t/s)A*A - alpha^(-p/s)B*B)"});
    r.scalars = {{"alpha", alpha}, {"lambda_min(Q)", lmin_q}, {"beta", beta}};
    if (beta > 0.0) {
        const double uniq_lhs = t * std::pow(beta, -t / s) * p.norm2_a() + pp * std::pow(beta, -pp / s) * p.norm2_b();
        r.verdicts.push_back({"t beta^(-t/s)||A||^2 + p beta^(-p/s)||B||^2 < s beta", uniq_lhs < s * beta, uniq_lhs,
                              s * beta, ""});
        const double delta = t / s * p.norm2_a() * std::pow(beta, -t / s - 1.0) +
                             pp / s * p.norm2_b() * std::pow(beta, -pp / s - 1.0);
        r.scalars.emplace_back("delta", delta);
    }
    return r;
}

ConditionReport coupled_conditions(const ProblemInstance& p, double b) {
    if (!(b > 0.0) || !std::isfinite(b)) throw ValidationError("b must be positive");
    const double s = p.s();
    const double t = p.t();
    const double pp = p.p();
    const DerivedScalars d = derived_scalars(p);
    const double a = d.lmin_aqa;
    const HermitianMatrix ata = HermitianMatrix::from_symmetrized(p.a().adjoint() * p.a());
    const HermitianMatrix btb = HermitianMatrix::from_symmetrized(p.b().adjoint() * p.b());
    const double theta = lambda_min(ata) / b;

    ConditionReport r;
    r.label = "coupled scheme hypotheses";
    r.applicable.push_back("minimal solution by coupled iteration");
    r.verdicts.push_back({"max(s, p) <= t", s <= t, s, t, ""});
    r.verdicts.push_back({"a < b", a < b, a, b, "a = lambda_min(AQ^-1A*)"});

    const HermitianMatrix lower = ata * (1.0 / b) + HermitianMatrix::identity(p.dim(), std::pow(b, s / t)) +
                                  btb * std::pow(a, -pp / t);
    const double tol = kVerdictLoewnerRtol * std::max({spectral_norm(lower), p.norm_q(), 1.0});
    const double excess = lambda_max(lower - p.q());
    r.verdicts.push_back({"b^-1 A*A + b^(s/t) I + a^(-p/t) B*B <= Q", excess <= tol, excess, tol,
                          "Loewner: lambda_max(lhs - rhs) <= tol"});

    const double lhs3 = s * p.norm2_a();
    const double rhs3 = 0.5 * t * theta * theta * std::pow(a, 1.0 - s / t);
    r.verdicts.push_back({"s||A||^2 < t theta^2 a^(1-s/t) / 2", lhs3 < rhs3, lhs3, rhs3,
                          "theta = lambda_min(A*A) / b"});
    const double lhs4 = pp * p.norm2_b();
    const double rhs4 = s * std::pow(a, (pp + s) / t);
    r.verdicts.push_back({"p||B||^2 < s a^((p+s)/t)", lhs4 < rhs4, lhs4, rhs4, ""});

    const double delta = 2.0 * std::max(s / t * p.norm2_a() / (theta * theta) * std::pow(a, s / t - 1.0),
                                        pp / t * p.norm2_a() * p.norm2_b() / (theta * theta) *
                                            std::pow(a, -pp / t - 1.0));
    r.scalars = {{"a", a}, {"b", b}, {"theta", theta}, {"delta", delta}};
    return r;
}

std::optional<double> alpha_search(const ProblemInstance& p) {
    const double lmin_q = lambda_min(p.q());
    std::optional<double> best;
    double best_lhs = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= kAlphaGridPoints; ++j) {
        const double alpha = alpha_grid_point(lmin_q, j);
        const double lhs = fixed_point_lhs(p, alpha);
        if (lhs < lmin_q && lhs < best_lhs) {
            best_lhs = lhs;
            best = alpha;
        }
    }
    return best;
}

std::optional<double> b_search(const ProblemInstance& p) {
    const double a = derived_scalars(p).lmin_aqa;
    const double hi = 10.0 * std::pow(lambda_max(p.q()), p.t() / p.s());
    if (!(hi > a)) return std::nullopt;
    for (int j = 1; j <= kBGridPoints; ++j) {
        const double b = a * std::pow(hi / a, static_cast<double>(j) / kBGridPoints);
        if (coupled_conditions(p, b).holds()) return b;
    }
    return std::nullopt;
}

SolveReport solve_fixed_point(const ProblemInstance& p, const SolveOptions& opts) {
    const double tol = resolve_tol(p, opts);
    std::optional<double> alpha = opts.alpha;
    if (!alpha) alpha = alpha_search(p);
    if (!alpha) {
        if (!opts.force) {
            throw PreconditionError("fixed-point scheme: no alpha in (0, lambda_min(Q)] satisfies "
                                    "alpha + alpha^(-t/s)||A||^2 + alpha^(-p/s)||B||^2 < lambda_min(Q)");
        }
        alpha = alpha_grid_argmin(p).first;
    }
    ConditionReport cond = fixed_point_conditions(p, *alpha);
    const bool held = cond.holds();
    if (!held && !opts.force) throw PreconditionError(failed_summary(cond));

    const double ts = p.t() / p.s();
    const double ps = p.p() / p.s();
    HermitianMatrix y = HermitianMatrix::identity(p.dim(), *alpha);
    std::vector<HistoryRow> history;
    std::vector<IteratePair> iterates;
    if (opts.record_iterates) iterates.push_back({y, y});

    int iterations = 0;
    double step = std::numeric_limits<double>::infinity();
    double initial_step = 0.0;
    bool converged = false;
    while (iterations < opts.max_iter) {
        const EigenPair eig = herm_eig(y);
        HermitianMatrix next = p.q() - congruence(p.a(), herm_power(eig, -ts)) - congruence(p.b(), herm_power(eig, -ps));
        ++iterations;
        require_positive_iterate(next, iterations, "fixed-point iterate");
        step = spectral_norm(next - y);
        if (iterations == 1) initial_step = step;
        if (opts.record_history) history.push_back({iterations, step, step});
        if (opts.record_iterates) iterates.push_back({next, next});
        y = std::move(next);
        if (step <= tol) {
            converged = true;
            break;
        }
    }

    HermitianMatrix x = lift(y, 1.0 / p.s());
    const double res = residual(p, x);
    const double delta = cond.scalar("delta").value_or(std::numeric_limits<double>::infinity());
    return SolveReport{
        .solution_x = std::move(x),
        .solution_y = std::move(y),
        .scheme = Scheme::FixedPointMax,
        .iterations = iterations,
        .converged = converged,
        .residual = res,
        .final_step = step,
        .history = std::move(history),
        .delta = delta,
        .initial_step = initial_step,
        .start_parameter = *alpha,
        .extremality = held && converged ? Extremality::Maximal : Extremality::Unknown,
        .preconditions_held = held,
        .swap_applied = p.swapped(),
        .preconditions = std::move(cond),
        .refined_bracket = std::nullopt,
        .iterates = std::move(iterates),
    };
}

SolveReport solve_coupled(const ProblemInstance& p, const SolveOptions& opts) {
    const double tol = resolve_tol(p, opts);
    std::optional<double> b = opts.b_upper;
    if (!b) b = b_search(p);
    if (!b) {
        if (!opts.force) {
            throw PreconditionError("coupled scheme: no b on the search grid satisfies every hypothesis");
        }
        // Every solution has X^t <= lambda_max(Q)^(t/s) I.
        b = std::pow(lambda_max(p.q()), p.t() / p.s());
    }
    ConditionReport cond = coupled_conditions(p, *b);
    const bool held = cond.holds();
    if (!held && !opts.force) throw PreconditionError(failed_summary(cond));

    const double st = p.s() / p.t();
    const double pt = p.p() / p.t();
    const double a = *cond.scalar("a");
    int iterations = 0;

    // F(U, V) = A (Q - U^(s/t) - B* V^(-p/t) B)^-1 A*
    auto apply = [&](const HermitianMatrix& u, const HermitianMatrix& v) {
        const HermitianMatrix inner = p.q() - herm_power(u, st) - congruence(p.b(), herm_power(v, -pt));
        if (!is_hpd(inner)) {
            throw NumericalError("coupled scheme: Q - X^(s/t) - B*Y^(-p/t)B lost positive definiteness at iteration " +
                                 std::to_string(iterations + 1));
        }
        return congruence(p.a().adjoint(), hpd_inverse(inner));
    };

    HermitianMatrix lower = HermitianMatrix::identity(p.dim(), a);
    HermitianMatrix upper = HermitianMatrix::identity(p.dim(), *b);
    std::vector<HistoryRow> history;
    std::vector<IteratePair> iterates;
    if (opts.record_iterates) iterates.push_back({lower, upper});

    std::optional<Bracket> refined;
    double step = std::numeric_limits<double>::infinity();
    double initial_step = 0.0;
    bool converged = false;
    while (iterations < opts.max_iter) {
        HermitianMatrix next_lower = apply(lower, upper);
        HermitianMatrix next_upper = apply(upper, lower);
        ++iterations;
        require_positive_iterate(next_lower, iterations, "coupled lower iterate");
        require_positive_iterate(next_upper, iterations, "coupled upper iterate");
        const double step_x = spectral_norm(next_lower - lower);
        const double step_y = spectral_norm(next_upper - upper);
        step = std::max(step_x, step_y);
        if (iterations == 1) {
            initial_step = step;
            refined = Bracket{next_lower, next_upper};
        }
        if (opts.record_history) history.push_back({iterations, step_x, step_y});
        if (opts.record_iterates) iterates.push_back({next_lower, next_upper});
        lower = std::move(next_lower);
        upper = std::move(next_upper);
        if (step <= tol) {
            converged = true;
            break;
        }
    }

    HermitianMatrix y = (lower + upper) * 0.5;
    HermitianMatrix x = lift(y, 1.0 / p.t());
    const double res = residual(p, x);
    const double delta = *cond.scalar("delta");
    return SolveReport{
        .solution_x = std::move(x),
        .solution_y = std::move(y),
        .scheme = Scheme::CoupledMin,
        .iterations = iterations,
        .converged = converged,
        .residual = res,
        .final_step = step,
        .history = std::move(history),
        .delta = delta,
        .initial_step = initial_step,
        .start_parameter = *b,
        .extremality = held && converged ? Extremality::Minimal : Extremality::Unknown,
        .preconditions_held = held,
        .swap_applied = p.swapped(),
        .preconditions = std::move(cond),
        .refined_bracket = std::move(refined),
        .iterates = std::move(iterates),
    };
}

SolveReport solve(const ProblemInstance& p, const SolveOptions& opts) {
    Scheme scheme = opts.scheme;
    if (scheme == Scheme::Auto) scheme = p.s() >= p.t() ? Scheme::FixedPointMax : Scheme::CoupledMin;
    return scheme == Scheme::FixedPointMax ? solve_fixed_point(p, opts) : solve_coupled(p, opts);
}

ScalarRoots scalar_oracle(const ScalarInstance& si) {
    if (!(si.q > 0.0 && si.a2 > 0.0 && si.b2 > 0.0)) {
        throw ValidationError("scalar_oracle: q, a2 and b2 must be positive");
    }
    if (!(si.s >= 1.0 && si.t >= 1.0 && si.p >= 1.0)) {
        throw ValidationError("scalar_oracle: exponents must be >= 1");
    }
    auto f = [&](double x) {
        return std::pow(x, si.s) + si.a2 * std::pow(x, -si.t) + si.b2 * std::pow(x, -si.p) - si.q;
    };
    constexpr int kGrid = 4000;
    const double lo = 1e-12;
    const double hi = 10.0 * std::pow(si.q, 1.0 / si.s);
    const double ratio = std::log(hi / lo);

    ScalarRoots out;
    double x0 = lo;
    double f0 = f(x0);
    for (int i = 1; i <= kGrid; ++i) {
        const double x1 = lo * std::exp(ratio * i / kGrid);
        const double f1 = f(x1);
        if (f0 == 0.0) {
            out.roots.push_back(x0);
        } else if ((f0 < 0.0) != (f1 < 0.0) && f1 != 0.0) {
            double a = x0;
            double b = x1;
            double fa = f0;
            while (true) {
                const double mid = 0.5 * (a + b);
                if (mid <= a || mid >= b) break;
                const double fm = f(mid);
                if (fm == 0.0) {
                    a = b = mid;
                    break;
                }
                if ((fm < 0.0) == (fa < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            out.roots.push_back(0.5 * (a + b));
        }
        x0 = x1;
        f0 = f1;
    }
    if (f0 == 0.0) out.roots.push_back(x0);
    if (!out.roots.empty()) {
        out.min_root = out.roots.front();
        out.max_root = out.roots.back();
    }
    return out;
}

}  // namespace nme
