#pragma once

#include "nme/matcore.hpp"

namespace nme {

/// One instance of X^s + A* X^-t A + B* X^-p B = Q.
///
/// Validated on construction: A and B nonsingular, Q positive definite,
/// s, t, p >= 1. The pair of correction terms is stored with t >= p; when the
/// caller passes t < p the roles of (A, t) and (B, p) are exchanged and
/// swapped() reports it. The equation is symmetric in the two terms, so the
/// solution set is unchanged.
class ProblemInstance {
public:
    static ProblemInstance create(const Matrix& a, const Matrix& b, const Matrix& q, double s, double t,
                                  double p);

    [[nodiscard]] const Matrix& a() const noexcept { return a_.mat(); }
    [[nodiscard]] const Matrix& b() const noexcept { return b_.mat(); }
    [[nodiscard]] const HermitianMatrix& q() const noexcept { return q_; }
    [[nodiscard]] double s() const noexcept { return s_; }
    [[nodiscard]] double t() const noexcept { return t_; }
    [[nodiscard]] double p() const noexcept { return p_; }
    [[nodiscard]] bool swapped() const noexcept { return swapped_; }
    [[nodiscard]] Eigen::Index dim() const noexcept { return q_.dim(); }

    // The correction terms in the order the caller supplied them.
    [[nodiscard]] const Matrix& user_a() const noexcept { return swapped_ ? b() : a(); }
    [[nodiscard]] const Matrix& user_b() const noexcept { return swapped_ ? a() : b(); }
    [[nodiscard]] double user_t() const noexcept { return swapped_ ? p_ : t_; }
    [[nodiscard]] double user_p() const noexcept { return swapped_ ? t_ : p_; }

    /// ||A||^2 and ||B||^2 (spectral), computed once.
    [[nodiscard]] double norm2_a() const noexcept { return norm2_a_; }
    [[nodiscard]] double norm2_b() const noexcept { return norm2_b_; }
    [[nodiscard]] double norm_q() const noexcept { return norm_q_; }

private:
    ProblemInstance(ComplexMatrix a, ComplexMatrix b, HermitianMatrix q, double s, double t, double p,
                    bool swapped);

    ComplexMatrix a_;
    ComplexMatrix b_;
    HermitianMatrix q_;
    double s_;
    double t_;
    double p_;
    bool swapped_;
    double norm2_a_;
    double norm2_b_;
    double norm_q_;
};

}  // namespace nme
