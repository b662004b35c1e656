#include "nme/problem.hpp"

#include <cmath>
#include <utility>

namespace nme {

namespace {

void require_exponent(double v, const char* name) {
    if (!std::isfinite(v) || v < 1.0) {
        throw ValidationError(std::string("exponent ") + name + " must be a finite real >= 1");
    }
}

}  // namespace

ProblemInstance ProblemInstance::create(const Matrix& a, const Matrix& b, const Matrix& q, double s,
                                        double t, double p) {
    require_exponent(s, "s");
    require_exponent(t, "t");
    require_exponent(p, "p");

    ComplexMatrix am(a, "A");
    ComplexMatrix bm(b, "B");
    HermitianMatrix qm(q, "Q");
    if (am.dim() != qm.dim() || bm.dim() != qm.dim()) {
        throw ValidationError("A, B and Q must have the same dimension");
    }
    if (!is_hpd(qm)) throw ValidationError("Q: matrix is not positive definite");
    if (smallest_singular_value(am.mat()) <= tol::kPositive * spectral_norm(am)) {
        throw ValidationError("A: matrix is singular");
    }
    if (smallest_singular_value(bm.mat()) <= tol::kPositive * spectral_norm(bm)) {
        throw ValidationError("B: matrix is singular");
    }

    if (t < p) return ProblemInstance(std::move(bm), std::move(am), std::move(qm), s, p, t, true);
    return ProblemInstance(std::move(am), std::move(bm), std::move(qm), s, t, p, false);
}

ProblemInstance::ProblemInstance(ComplexMatrix a, ComplexMatrix b, HermitianMatrix q, double s, double t,
                                 double p, bool swapped)
    : a_(std::move(a)),
      b_(std::move(b)),
      q_(std::move(q)),
      s_(s),
      t_(t),
      p_(p),
      swapped_(swapped),
      norm2_a_(std::pow(spectral_norm(a_), 2)),
      norm2_b_(std::pow(spectral_norm(b_), 2)),
      norm_q_(spectral_norm(q_)) {}

}  // namespace nme
