#pragma once

// Iterative solvers for X^s + A* X^-t A + B* X^-p B = Q.
//
// Fixed-point scheme (s is the largest exponent): with Y = X^s iterate
//   Y_{n+1} = Q - A* Y_n^(-t/s) A - B* Y_n^(-p/s) B,   Y_0 = alpha I,
// ascending to the maximal solution.
//
// Coupled scheme (t is the largest exponent): with Y = X^t and
//   F(X, Y) = A (Q - X^(s/t) - B* Y^(-p/t) B)^-1 A*
// iterate X_{n+1} = F(X_n, Y_n), Y_{n+1} = F(Y_n, X_n) from X_0 = aI, Y_0 = bI.
// X_n ascends and Y_n descends to the minimal solution.

#include <optional>
#include <vector>

#include "nme/analysis.hpp"

namespace nme {

enum class Scheme { Auto, FixedPointMax, CoupledMin };
enum class Extremality { Maximal, Minimal, Unknown };

const char* to_string(Scheme s);
const char* to_string(Extremality e);

struct SolveOptions {
    std::optional<double> tol;      // step-norm threshold; default 1e-14 * ||Q||
    int max_iter = 1000;
    std::optional<double> alpha;    // fixed-point start Y_0 = alpha I
    std::optional<double> b_upper;  // coupled upper start Y_0 = b I
    bool force = false;
    bool record_history = true;
    bool record_iterates = false;
    Scheme scheme = Scheme::Auto;
};

struct HistoryRow {
    int iteration;
    double step_x;  // ||X_n - X_{n-1}||
    double step_y;  // ||Y_n - Y_{n-1}||, equal to step_x for the fixed-point scheme
};

/// One iterate in the transformed variable. For the fixed-point scheme
/// lower == upper == Y_n.
struct IteratePair {
    HermitianMatrix lower;
    HermitianMatrix upper;
};

struct SolveReport {
    HermitianMatrix solution_x;
    HermitianMatrix solution_y;
    Scheme scheme = Scheme::FixedPointMax;
    int iterations = 0;
    bool converged = false;
    double residual = 0;
    double final_step = 0;
    std::vector<HistoryRow> history;
    double delta = 0;
    double initial_step = 0;  // max(||X_1 - X_0||, ||Y_1 - Y_0||)
    double start_parameter = 0;  // alpha or b
    Extremality extremality = Extremality::Unknown;
    bool preconditions_held = false;
    bool swap_applied = false;
    ConditionReport preconditions;
    std::optional<Bracket> refined_bracket;  // coupled scheme: [F(aI,bI), F(bI,aI)]
    std::vector<IteratePair> iterates;       // iterates[0] is the start
};

/// ||X^s + A* X^-t A + B* X^-p B - Q|| for positive definite X.
double residual(const ProblemInstance& p, const HermitianMatrix& x);

/// The equation after substituting Y = X^r:
///   Y^lead + A* Y^-exp_a A + B* Y^-exp_b B = Q,  X = Y^lift.
struct ReducedEquation {
    double lead;
    double exp_a;
    double exp_b;
    double lift_exponent;
};

/// Y = X^s for the fixed-point scheme, Y = X^t for the coupled scheme.
ReducedEquation reduce(const ProblemInstance& p, Scheme scheme);
double reduced_residual(const ProblemInstance& p, const ReducedEquation& eq, const HermitianMatrix& y);
HermitianMatrix lift(const HermitianMatrix& y, double exponent);

/// Rescales Q to lambda_max(Q) = 1. A solution X~ of the scaled instance maps
/// back by X = k^(1/s) X~.
struct Normalized {
    ProblemInstance instance;
    double k;
};
Normalized normalize(const ProblemInstance& p);
HermitianMatrix denormalize(const HermitianMatrix& x_scaled, double k, double s);

/// Hypotheses of the fixed-point scheme for a given start alpha.
ConditionReport fixed_point_conditions(const ProblemInstance& p, double alpha);

/// Hypotheses (i)-(iv) of the coupled scheme for a given upper start b.
ConditionReport coupled_conditions(const ProblemInstance& p, double b);

/// Among 500 log-spaced alpha in (1e-8 lambda_min(Q), lambda_min(Q)], the one
/// minimizing alpha + alpha^(-t/s)||A||^2 + alpha^(-p/s)||B||^2 subject to
/// that sum being below lambda_min(Q).
std::optional<double> alpha_search(const ProblemInstance& p);

/// First of 100 log-spaced b in (a, 10 lambda_max(Q)^(t/s)] satisfying every
/// coupled hypothesis.
std::optional<double> b_search(const ProblemInstance& p);

SolveReport solve_fixed_point(const ProblemInstance& p, const SolveOptions& opts = {});
SolveReport solve_coupled(const ProblemInstance& p, const SolveOptions& opts = {});

/// Dispatches on the largest exponent; ties s == t go to the fixed-point scheme.
SolveReport solve(const ProblemInstance& p, const SolveOptions& opts = {});

/// Scalar equation x^s + a2 x^-t + b2 x^-p = q.
struct ScalarInstance {
    double q;
    double a2;
    double b2;
    double s;
    double t;
    double p;
};

struct ScalarRoots {
    std::vector<double> roots;  // ascending
    std::optional<double> max_root;
    std::optional<double> min_root;
};

/// Every positive root found by sign changes on a log grid over
/// [1e-12, 10 q^(1/s)], each refined by bisection.
ScalarRoots scalar_oracle(const ScalarInstance& si);

}  // namespace nme
