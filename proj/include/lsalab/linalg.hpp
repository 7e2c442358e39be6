#pragma once

#include <utility>
#include <vector>

#include "lsalab/matrix.hpp"

namespace lsalab {

/// Solution bundle of A^T Q + Q A = I for a matrix A with -A Hurwitz.
struct LyapunovSolution {
    Matrix q;        // symmetric positive definite
    double kappa_q;  // lambda_max(Q)/lambda_min(Q), >= 1
    double a;        // ||Q||^-1 / 2
    double alpha_cap; // (1/2) ||A||_Q^-2 ||Q||^-1, the admissible step range
    double norm_a_q; // ||A||_Q, kept around since every consumer needs it
    double residual; // Frobenius norm of A^T Q + Q A - I
};

struct ContractionCheck {
    double qnorm_sq;        // ||I - alpha A||_Q^2
    double bound;           // 1 - a alpha
    bool holds;             // qnorm_sq <= bound + 1e-12
    double unweighted_norm; // ||I - alpha A||
    double unweighted_bound; // sqrt(kappa_Q) (1 - a alpha / 2)
};

/// Solve A^T Q + Q A = I_d via the vectorized d^2 x d^2 dense system.
/// Requires -A Hurwitz (spectral abscissa of A above 1e-9) and d <= 64.
LyapunovSolution solve_lyapunov(const Matrix& a);

/// Weighted operator norm ||M||_Q = max_{||x||_Q = 1} ||Mx||_Q, i.e. the top
/// singular value of Q^{1/2} M Q^{-1/2}.
double q_norm(const Matrix& m, const Matrix& q);

/// Step-size contraction check of the Q-weighted norm against 1 - a alpha.
ContractionCheck check_contraction(const Matrix& a, const LyapunovSolution& sol, double alpha);

/// Product prod_{i} (I - alpha_i M_i), leftmost factor = last index, empty
/// sequence = identity of dimension `dim`.
Matrix gamma_product(const std::vector<std::pair<double, Matrix>>& factors, int dim);

/// True iff the symmetric part of A is positive definite (margin 1e-10).
/// When true, also asserts the spectral abscissa of -A is negative and
/// throws LemmaViolationError otherwise (that would be a numerics bug).
bool positivity_implies_hurwitz_check(const Matrix& a);

} // namespace lsalab
