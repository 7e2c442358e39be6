#include "lsalab/linalg.hpp"

#include <cmath>

namespace lsalab {

namespace {

// Q^{1/2} and Q^{-1/2} from the eigen-decomposition of a symmetric pd Q.
void sqrt_factors(const Matrix& q, Matrix& q_half, Matrix& q_half_inv) {
    Matrix u;
    Vector ev = symmetric_eigen(q, u);
    const int n = q.rows();
    if (ev.front() <= 0.0) throw QNotPdError("q_norm: Q not positive definite");
    Matrix dh(n, n), dhi(n, n);
    for (int i = 0; i < n; ++i) {
        dh(i, i) = std::sqrt(ev[i]);
        dhi(i, i) = 1.0 / dh(i, i);
    }
    q_half = u * dh * u.transpose();
    q_half_inv = u * dhi * u.transpose();
}

} // namespace

LyapunovSolution solve_lyapunov(const Matrix& a) {
    if (!a.square()) throw DimMismatchError("solve_lyapunov: not square");
    const int d = a.rows();
    if (d > 64) throw DimMismatchError("solve_lyapunov: d > 64 unsupported");
    if (spectral_abscissa(a * -1.0) >= -1e-9)
        throw NotHurwitzError("solve_lyapunov: -A is not Hurwitz");

    // vec(A^T Q + Q A) = (I (x) A^T + A^T (x) I) vec(Q) = vec(I), with
    // vec(.) in row-major order: vec index (i,j) -> i*d+j.
    const int n2 = d * d;
    Matrix sys(n2, n2);
    Vector rhs(n2, 0.0);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            int row = i * d + j;
            rhs[row] = (i == j) ? 1.0 : 0.0;
            for (int k = 0; k < d; ++k) {
                // (A^T Q)_{ij} = sum_k A_{ki} Q_{kj}
                sys(row, k * d + j) += a(k, i);
                // (Q A)_{ij} = sum_k Q_{ik} A_{kj}
                sys(row, i * d + k) += a(k, j);
            }
        }
    }
    Vector qv = lu_solve(sys, rhs);
    Matrix q(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) q(i, j) = qv[i * d + j];
    // symmetrize away round-off
    Matrix qs(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) qs(i, j) = 0.5 * (q(i, j) + q(j, i));

    Matrix res = a.transpose() * qs + qs * a - Matrix::identity(d);
    double residual = res.frobenius_norm();
    if (residual > 1e-10 * d)
        throw IllConditionedError("solve_lyapunov: residual above tolerance");

    Vector ev = symmetric_eigenvalues(qs);
    if (ev.front() <= 0.0) throw IllConditionedError("solve_lyapunov: Q not positive definite");

    LyapunovSolution sol;
    sol.q = qs;
    sol.kappa_q = ev.back() / ev.front();
    double norm_q = ev.back(); // spectral norm of symmetric pd Q
    sol.a = 0.5 / norm_q;
    sol.norm_a_q = q_norm(a, qs);
    sol.alpha_cap = 0.5 / (sol.norm_a_q * sol.norm_a_q * norm_q);
    sol.residual = residual;
    return sol;
}

double q_norm(const Matrix& m, const Matrix& q) {
    if (!m.square() || m.rows() != q.rows()) throw DimMismatchError("q_norm: shape mismatch");
    Matrix qh, qhi;
    sqrt_factors(q, qh, qhi);
    return spectral_norm(qh * m * qhi);
}

ContractionCheck check_contraction(const Matrix& a, const LyapunovSolution& sol, double alpha) {
    if (alpha < 0.0 || alpha > sol.alpha_cap * (1.0 + 1e-12))
        throw AlphaOutOfRangeError("check_contraction: alpha outside [0, alpha_cap]");
    Matrix m = Matrix::identity(a.rows()) - alpha * a;
    double qn = q_norm(m, sol.q);
    ContractionCheck out;
    out.qnorm_sq = qn * qn;
    out.bound = 1.0 - sol.a * alpha;
    out.holds = out.qnorm_sq <= out.bound + 1e-12;
    out.unweighted_norm = spectral_norm(m);
    out.unweighted_bound = std::sqrt(sol.kappa_q) * (1.0 - sol.a * alpha / 2.0);
    return out;
}

Matrix gamma_product(const std::vector<std::pair<double, Matrix>>& factors, int dim) {
    Matrix prod = Matrix::identity(dim);
    for (const auto& [alpha, m] : factors) {
        if (m.rows() != dim || m.cols() != dim)
            throw DimMismatchError("gamma_product: factor dimension mismatch");
        // left-multiply: the last factor ends up leftmost
        prod = (Matrix::identity(dim) - alpha * m) * prod;
    }
    return prod;
}

bool positivity_implies_hurwitz_check(const Matrix& a) {
    if (!a.square()) throw DimMismatchError("positivity check: not square");
    Matrix sym = 0.5 * (a + a.transpose());
    Vector ev = symmetric_eigenvalues(sym);
    if (ev.front() <= 1e-10) return false;
    if (spectral_abscissa(a * -1.0) >= 0.0)
        throw LemmaViolationError(
            "positivity held but an eigenvalue of A has non-positive real part");
    return true;
}

} // namespace lsalab
