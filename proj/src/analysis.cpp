#include "nme/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "nme/solvers.hpp"
#include "text.hpp"

namespace nme {

namespace {

// L <= R as a verdict: lhs = lambda_max(L - R), rhs = tolerance.
Verdict loewner_verdict(std::string name, const HermitianMatrix& l, const HermitianMatrix& r) {
    const double tol =
        kVerdictLoewnerRtol * std::max({spectral_norm(l), spectral_norm(r), 1.0});
    const double excess = lambda_max(l - r);
    return {std::move(name), excess <= tol, excess, tol, "Loewner: lambda_max(lhs - rhs) <= tol"};
}

Verdict strict_verdict(std::string name, double lhs, double rhs) {
    return {std::move(name), lhs < rhs, lhs, rhs, ""};
}

Verdict weak_verdict(std::string name, double lhs, double rhs) {
    return {std::move(name), lhs <= rhs, lhs, rhs, ""};
}

// A M^-1 A* for Hermitian positive definite M.
HermitianMatrix sandwich_inverse(const Matrix& a, const HermitianMatrix& m_inv) {
    return congruence(a.adjoint(), m_inv);
}

}  // namespace

bool ConditionReport::holds() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.holds; });
}

const Verdict* ConditionReport::find(std::string_view name) const {
    auto it = std::find_if(verdicts.begin(), verdicts.end(), [&](const Verdict& v) { return v.name == name; });
    return it == verdicts.end() ? nullptr : &*it;
}

std::optional<double> ConditionReport::scalar(std::string_view name) const {
    for (const auto& [key, value] : scalars) {
        if (key == name) return value;
    }
    return std::nullopt;
}

DerivedScalars derived_scalars(const ProblemInstance& p) {
    DerivedScalars d;
    const EigenPair qe = herm_eig(p.q());
    d.k_tilde = qe.values(0);
    d.k = qe.values(qe.values.size() - 1);
    d.q = std::min(p.t(), p.p()) / p.s();
    d.q_tilde = std::max(p.t(), p.p()) / p.s();

    const HermitianMatrix q_inv = hpd_inverse(p.q());
    const EigenPair ae = herm_eig(sandwich_inverse(p.a(), q_inv));
    const EigenPair be = herm_eig(sandwich_inverse(p.b(), q_inv));
    d.lmin_aqa = ae.values(0);
    d.lmax_aqa = ae.values(ae.values.size() - 1);
    d.lmin_bqb = be.values(0);
    d.lmax_bqb = be.values(be.values.size() - 1);

    d.c = std::max(std::pow(d.lmin_aqa, 1.0 / p.t()), std::pow(d.lmin_bqb, 1.0 / p.p()));
    d.c1 = std::max(std::pow(d.lmax_aqa, 1.0 / p.t()), std::pow(d.lmax_bqb, 1.0 / p.p()));
    d.a_uniq = std::pow(d.lmin_aqa, p.s() / p.t()) + std::pow(d.lmin_bqb, p.s() / p.p());
    return d;
}

ConditionReport check_necessary(const ProblemInstance& p) {
    const DerivedScalars d = derived_scalars(p);
    const double q = d.q;
    double bound = std::pow(q, q) / std::pow(q + 1.0, q + 1.0);
    ConditionReport r;
    if (d.k <= 1.0) {
        r.label = "necessary (lambda_max(Q) <= 1)";
    } else {
        r.label = "necessary (lambda_max(Q) > 1)";
        bound *= std::pow(d.k, 1.0 + d.q_tilde);
    }
    r.applicable.push_back(r.label);
    const double rho_a = spectral_radius(p.a());
    const double rho_b = spectral_radius(p.b());
    r.verdicts.push_back(strict_verdict("rho(A)^2 < bound", rho_a * rho_a, bound));
    r.verdicts.push_back(strict_verdict("rho(B)^2 < bound", rho_b * rho_b, bound));
    r.scalars = {{"k", d.k}, {"q", q}, {"q_tilde", d.q_tilde}, {"bound", bound}};
    return r;
}

ConditionReport check_sufficient(const ProblemInstance& p) {
    const DerivedScalars d = derived_scalars(p);
    const double q = d.q;
    const double qt = d.q_tilde;
    double rhs = std::pow(q, qt) * std::pow(d.k_tilde, qt + 1.0) / std::pow(q + 1.0, qt + 1.0);
    double lower = q * d.k_tilde / (q + 1.0);
    ConditionReport r;
    if (d.k <= 1.0) {
        r.label = "sufficient (lambda_max(Q) <= 1)";
    } else {
        r.label = "sufficient (lambda_max(Q) > 1)";
        rhs /= std::pow(d.k, qt);
        lower /= d.k;
    }
    r.applicable.push_back(r.label);
    r.verdicts.push_back(strict_verdict("||A||^2 + ||B||^2 < bound", p.norm2_a() + p.norm2_b(), rhs));
    const double lower_root = std::pow(lower, 1.0 / p.s());
    r.scalars = {{"k", d.k}, {"k_tilde", d.k_tilde}, {"bracket_lower", lower_root}};
    if (r.holds()) {
        r.bracket = Bracket{HermitianMatrix::identity(p.dim(), lower_root), herm_power(p.q(), 1.0 / p.s())};
    }
    return r;
}

SolutionBounds solution_bounds(const ProblemInstance& p) {
    const DerivedScalars d = derived_scalars(p);
    const double s = p.s();
    const HermitianMatrix shifted = p.q() - HermitianMatrix::identity(p.dim(), std::pow(d.c, s));
    if (!is_hpd(shifted)) {
        throw PreconditionError("bracket undefined: Q - c^s I is not positive definite; "
                                "the instance cannot have a solution");
    }
    const HermitianMatrix shifted_inv = hpd_inverse(shifted);
    const double m = std::max(std::pow(lambda_min(sandwich_inverse(p.a(), shifted_inv)), 1.0 / p.t()),
                              std::pow(lambda_min(sandwich_inverse(p.b(), shifted_inv)), 1.0 / p.p()));

    // lambda_min(Q^-1) / lambda_max(Q^-1) = lambda_min(Q) / lambda_max(Q)
    const double ratio = d.k_tilde / d.k;
    const HermitianMatrix inner =
        p.q() - congruence(p.a(), herm_power(p.q(), -p.t() / s)) * std::pow(ratio, (p.t() - 1.0) / s) -
        congruence(p.b(), herm_power(p.q(), -p.p() / s)) * std::pow(ratio, (p.p() - 1.0) / s);
    if (!is_hpd(inner)) {
        throw PreconditionError("bracket undefined: the matrix under the upper bound root is not "
                                "positive definite; the instance cannot have a solution");
    }
    return {d.c, m, herm_power(inner, 1.0 / s), herm_power(p.q(), 1.0 / s)};
}

BracketMembership bracket_membership(const ProblemInstance& p, const HermitianMatrix& x) {
    if (x.dim() != p.dim()) throw ValidationError("bracket_membership: dimension mismatch");
    const double tol = kBracketRtol * p.norm_q();
    const double c = derived_scalars(p).c;
    const HermitianMatrix q_root = herm_power(p.q(), 1.0 / p.s());
    BracketMembership out;
    out.in_interval = loewner_leq(HermitianMatrix::identity(p.dim(), c), x, tol) && loewner_leq(x, q_root, tol);
    try {
        const SolutionBounds b = solution_bounds(p);
        out.in_refined =
            loewner_leq(HermitianMatrix::identity(p.dim(), b.m), x, tol) && loewner_leq(x, b.upper, tol);
    } catch (const PreconditionError&) {
    }
    return out;
}

ConditionReport check_uniqueness_interval(const ProblemInstance& p) {
    const DerivedScalars d = derived_scalars(p);
    const double s = p.s();
    const double t = p.t();
    const double pp = p.p();
    const HermitianMatrix q_inv = hpd_inverse(p.q());
    const HermitianMatrix g = herm_power(sandwich_inverse(p.a(), q_inv), s / t) +
                              herm_power(sandwich_inverse(p.b(), q_inv), s / pp);

    ConditionReport r;
    r.label = "uniqueness on [cI, Q^(1/s)]";
    r.applicable.push_back(r.label);
    r.verdicts.push_back(loewner_verdict("(AQ^-1A*)^(s/t) + (BQ^-1B*)^(s/p) <= Q", g, p.q()));

    const HermitianMatrix at_endpoint = HermitianMatrix::from_symmetrized(
        p.a().adjoint() * p.a() * std::pow(d.c, -t) + p.b().adjoint() * p.b() * std::pow(d.c, -pp));
    Verdict endpoint = loewner_verdict("A*X^-tA + B*X^-pB <= Q - (AQ^-1A*)^(s/t) - (BQ^-1B*)^(s/p)",
                                       at_endpoint, p.q() - g);
    endpoint.note = "checked at lower endpoint X = cI; " + endpoint.note;
    r.verdicts.push_back(std::move(endpoint));

    const double contraction = std::pow(d.a_uniq, 1.0 / s - 1.0) / s *
                               (t / std::pow(d.c, t + 1.0) * p.norm2_a() + pp / std::pow(d.c, pp + 1.0) * p.norm2_b());
    r.verdicts.push_back(strict_verdict("contraction constant < 1", contraction, 1.0));
    r.scalars = {{"c", d.c}, {"a", d.a_uniq}, {"contraction", contraction}};
    if (r.holds()) {
        r.bracket = Bracket{HermitianMatrix::identity(p.dim(), d.c), herm_power(p.q(), 1.0 / s)};
    }
    return r;
}

ConditionReport check_uniqueness_k(const ProblemInstance& p, double k) {
    if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("check_uniqueness_k: k must be positive");
    const DerivedScalars d = derived_scalars(p);
    const double s = p.s();
    const double t = p.t();
    const double pp = p.p();

    ConditionReport r;
    r.label = "existence and uniqueness on [k c1 I, Q^(1/s)]";
    r.applicable.push_back(r.label);
    const double tail = std::pow(k, -t) + std::pow(k, -pp);
    r.verdicts.push_back(strict_verdict("k^-t + k^-p < 1", tail, 1.0));
    // lambda_max(c1^s Q^-1) = c1^s / lambda_min(Q)
    r.verdicts.push_back(weak_verdict("lambda_max(c1^s Q^-1) <= (1 - k^-t - k^-p) k^-s",
                                      std::pow(d.c1, s) / d.k_tilde, (1.0 - tail) * std::pow(k, -s)));
    const double kc = k * d.c1;
    const double contraction = std::pow(kc, 1.0 - s) / s *
                               (t / std::pow(kc, t + 1.0) * p.norm2_a() + pp / std::pow(kc, pp + 1.0) * p.norm2_b());
    r.verdicts.push_back(strict_verdict("contraction constant < 1", contraction, 1.0));
    r.scalars = {{"k", k}, {"c1", d.c1}, {"contraction", contraction}};
    if (r.verdicts[0].holds && r.verdicts[1].holds) {
        r.bracket = Bracket{HermitianMatrix::identity(p.dim(), kc), herm_power(p.q(), 1.0 / s)};
    }
    return r;
}

std::optional<double> scan_k(const ProblemInstance& p) {
    constexpr int kPoints = 200;
    constexpr double kLo = 1.01;
    constexpr double kHi = 100.0;
    for (int j = 0; j < kPoints; ++j) {
        const double k = kLo * std::pow(kHi / kLo, static_cast<double>(j) / (kPoints - 1));
        if (check_uniqueness_k(p, k).holds()) return k;
    }
    return std::nullopt;
}

FactorizationCheck check_factorization(const ProblemInstance& p, const Factorization& f) {
    const Eigen::Index n = p.dim();
    if (f.u.rows() != n || f.u.cols() != n || f.lambda.size() != n || f.n1.rows() != n || f.n1.cols() != n ||
        f.n2.rows() != n || f.n2.cols() != n) {
        throw ValidationError("factorization: dimensions do not match the instance");
    }
    FactorizationCheck c;
    c.unitarity = spectral_norm(Matrix(f.u.adjoint() * f.u - Matrix::Identity(n, n)));
    c.min_lambda = f.lambda.minCoeff();
    if (!(c.min_lambda > 0.0) || !(c.unitarity <= kFactorizationRtol)) {
        c.ok = false;
        return c;
    }
    const HermitianMatrix core = HermitianMatrix::from_symmetrized(
        f.u * f.lambda.cast<Complex>().asDiagonal() * f.u.adjoint());
    const double s = p.s();
    const Matrix& a = p.user_a();
    const Matrix& b = p.user_b();
    c.defect_a = spectral_norm(Matrix(a - herm_power(core, p.user_t() / (2.0 * s)).mat() * f.n1)) /
                 std::max(1.0, spectral_norm(a));
    c.defect_b = spectral_norm(Matrix(b - herm_power(core, p.user_p() / (2.0 * s)).mat() * f.n2)) /
                 std::max(1.0, spectral_norm(b));
    const Matrix total = core.mat() + f.n1.adjoint() * f.n1 + f.n2.adjoint() * f.n2 - p.q().mat();
    c.defect_q = spectral_norm(total) / p.norm_q();
    c.ok = c.defect_a <= kFactorizationRtol && c.defect_b <= kFactorizationRtol &&
           c.defect_q <= kFactorizationRtol;
    return c;
}

bool verify_factorization(const ProblemInstance& p, const Factorization& f) {
    return check_factorization(p, f).ok;
}

Factorization factorization_from_solution(const ProblemInstance& p, const HermitianMatrix& x) {
    const double res = residual(p, x);
    if (!(res <= kSolutionRtol * p.norm_q())) {
        throw VerificationError("factorization: X is not a solution (residual " + detail::real_text(res) + ")");
    }
    const EigenPair eig = herm_eig(herm_power(x, p.s()));
    return {eig.vectors, eig.values, herm_power(x, -p.user_t() / 2.0).mat() * p.user_a(),
            herm_power(x, -p.user_p() / 2.0).mat() * p.user_b()};
}

}  // namespace nme
