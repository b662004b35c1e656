#pragma once

// Solvability and uniqueness conditions, solution brackets and the
// factorization characterization of positive definite solutions.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nme/problem.hpp"

namespace nme {

/// Loewner comparisons inside verdicts use 1e-10 * max(||lhs||, ||rhs||, 1).
inline constexpr double kVerdictLoewnerRtol = 1e-10;

/// Residual threshold (relative to ||Q||) for accepting a matrix as a solution.
inline constexpr double kSolutionRtol = 1e-10;

/// Loewner tolerance (relative to ||Q||) for bracket membership of a solution.
inline constexpr double kBracketRtol = 1e-8;

/// Tolerance for the identities checked by verify_factorization.
inline constexpr double kFactorizationRtol = 1e-9;

struct DerivedScalars {
    double k = 0;        // lambda_max(Q)
    double k_tilde = 0;  // lambda_min(Q)
    double q = 0;        // min(t/s, p/s)
    double q_tilde = 0;  // max(t/s, p/s)
    double lmin_aqa = 0; // lambda_min(A Q^-1 A*)
    double lmax_aqa = 0;
    double lmin_bqb = 0; // lambda_min(B Q^-1 B*)
    double lmax_bqb = 0;
    double c = 0;        // max(lmin_aqa^(1/t), lmin_bqb^(1/p))
    double c1 = 0;       // max(lmax_aqa^(1/t), lmax_bqb^(1/p))
    double a_uniq = 0;   // lmin_aqa^(s/t) + lmin_bqb^(s/p)
};

struct Verdict {
    std::string name;
    bool holds = false;
    double lhs = 0;
    double rhs = 0;
    std::string note;
};

/// Matrix interval [lower, upper] in the Loewner order.
struct Bracket {
    HermitianMatrix lower;
    HermitianMatrix upper;
};

struct ConditionReport {
    std::string label;
    std::vector<std::string> applicable;
    std::vector<Verdict> verdicts;
    std::vector<std::pair<std::string, double>> scalars;
    std::optional<Bracket> bracket;

    /// Conjunction of every verdict.
    [[nodiscard]] bool holds() const;
    [[nodiscard]] const Verdict* find(std::string_view name) const;
    [[nodiscard]] std::optional<double> scalar(std::string_view name) const;
};

DerivedScalars derived_scalars(const ProblemInstance& p);

/// Spectral-radius bounds every solvable instance satisfies. A failing verdict
/// certifies that no positive definite solution exists.
ConditionReport check_necessary(const ProblemInstance& p);

/// Norm bound guaranteeing a solution, with the bracket it lies in.
ConditionReport check_sufficient(const ProblemInstance& p);

struct SolutionBounds {
    double c;                 // every solution X >= cI
    double m;                 // every solution X >= mI, m >= c
    HermitianMatrix upper;    // every solution X <= upper (N)
    HermitianMatrix q_root;   // Q^(1/s), upper end of [cI, Q^(1/s)]
};

/// Two-sided brackets [cI, Q^(1/s)] and [mI, N] that contain every solution.
/// Throws PreconditionError when Q - c^s I (or the matrix under the root in N)
/// is not positive definite; such an instance has no solution.
SolutionBounds solution_bounds(const ProblemInstance& p);

struct BracketMembership {
    bool in_interval = false;         // cI <= X <= Q^(1/s)
    std::optional<bool> in_refined;   // mI <= X <= N, empty when undefined
};

BracketMembership bracket_membership(const ProblemInstance& p, const HermitianMatrix& x);

/// Uniqueness on [cI, Q^(1/s)]. The for-all-X hypothesis is evaluated at the
/// Loewner-minimal point X = cI, which dominates the whole interval since
/// A* X^-t A + B* X^-p B <= c^-t A*A + c^-p B*B for X >= cI.
ConditionReport check_uniqueness_interval(const ProblemInstance& p);

/// Existence in [k c1 I, Q^(1/s)] and uniqueness for a given scale k > 0.
ConditionReport check_uniqueness_k(const ProblemInstance& p, double k);

/// First k on 200 log-spaced points in [1.01, 100] for which every verdict of
/// check_uniqueness_k holds.
std::optional<double> scan_k(const ProblemInstance& p);

/// Witness that the instance is solvable: A = (U L U*)^(t/2s) N1,
/// B = (U L U*)^(p/2s) N2 and U L U* + N1* N1 + N2* N2 = Q.
///
/// N1 pairs with the A the caller passed to ProblemInstance::create, even if
/// the instance swapped its correction terms.
struct Factorization {
    Matrix u;
    RealVector lambda;
    Matrix n1;
    Matrix n2;
};

struct FactorizationCheck {
    double unitarity = 0;    // ||U*U - I||
    double min_lambda = 0;
    double defect_a = 0;     // ||A - (U L U*)^(t/2s) N1|| / max(1, ||A||)
    double defect_b = 0;
    double defect_q = 0;     // ||U L U* + N1*N1 + N2*N2 - Q|| / ||Q||
    bool ok = false;
};

FactorizationCheck check_factorization(const ProblemInstance& p, const Factorization& f);
bool verify_factorization(const ProblemInstance& p, const Factorization& f);

/// Builds the witness from a solution X: U L U* = X^s, N1 = X^(-t/2) A,
/// N2 = X^(-p/2) B. Throws VerificationError if X is not a solution.
Factorization factorization_from_solution(const ProblemInstance& p, const HermitianMatrix& x);

}  // namespace nme
