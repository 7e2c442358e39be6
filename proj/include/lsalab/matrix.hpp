#pragma once

#include <cmath>
#include <complex>
#include <initializer_list>
#include <vector>

#include "lsalab/errors.hpp"

namespace lsalab {

using Vector = std::vector<double>;

/// Dense real matrix, row-major. Sized at run time; everything here is desk
/// scale (d <= 64) so plain O(n^3) kernels are used throughout.
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, fill) {}

    Matrix(std::initializer_list<std::initializer_list<double>> init) {
        rows_ = static_cast<int>(init.size());
        cols_ = rows_ > 0 ? static_cast<int>(init.begin()->size()) : 0;
        a_.reserve(static_cast<std::size_t>(rows_) * cols_);
        for (const auto& row : init) {
            for (double v : row) a_.push_back(v);
        }
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    const double* data() const { return a_.data(); }
    double* data() { return a_.data(); }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix& operator+=(const Matrix& o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }
    Matrix& operator*=(double s) {
        for (double& v : a_) v *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { a += b; return a; }
    friend Matrix operator-(Matrix a, const Matrix& b) { a -= b; return a; }
    friend Matrix operator*(Matrix a, double s) { a *= s; return a; }
    friend Matrix operator*(double s, Matrix a) { a *= s; return a; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw DimMismatchError("matrix product shape mismatch");
        Matrix c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i) {
            for (int k = 0; k < a.cols_; ++k) {
                double aik = a(i, k);
                if (aik == 0.0) continue;
                for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        }
        return c;
    }

    Vector apply(const Vector& x) const {
        if (static_cast<int>(x.size()) != cols_) throw DimMismatchError("matrix-vector shape mismatch");
        Vector y(rows_, 0.0);
        for (int i = 0; i < rows_; ++i) {
            double s = 0.0;
            for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (double v : a_) s += v * v;
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    bool all_finite() const {
        for (double v : a_)
            if (!std::isfinite(v)) return false;
        return true;
    }

private:
    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw DimMismatchError("matrix shape mismatch");
    }

    int rows_, cols_;
    std::vector<double> a_;
};

// --- vector helpers ---

inline double dot(const Vector& x, const Vector& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double norm2(const Vector& x) { return std::sqrt(dot(x, x)); }

inline Vector operator+(Vector x, const Vector& y) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
    return x;
}
inline Vector operator-(Vector x, const Vector& y) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= y[i];
    return x;
}
inline Vector operator*(double s, Vector x) {
    for (double& v : x) v *= s;
    return x;
}

/// x += s*y
inline void axpy(double s, const Vector& y, Vector& x) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += s * y[i];
}

inline Matrix outer(const Vector& u, const Vector& v) {
    Matrix m(static_cast<int>(u.size()), static_cast<int>(v.size()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m(i, j) = u[i] * v[j];
    return m;
}

// --- factorizations and solvers (matrix.cpp) ---

/// Solve A x = b by LU with partial pivoting.
Vector lu_solve(Matrix a, Vector b);

/// Cholesky factor L (lower) of a symmetric positive definite matrix.
Matrix cholesky(const Matrix& a);

/// Eigenvalues of a symmetric matrix via cyclic Jacobi, ascending order.
Vector symmetric_eigenvalues(const Matrix& a);

/// Eigen-decomposition of a symmetric matrix: returns eigenvalues ascending,
/// fills `vectors` with the corresponding orthonormal columns.
Vector symmetric_eigen(const Matrix& a, Matrix& vectors);

/// All eigenvalues of a general real square matrix (Hessenberg + shifted QR).
std::vector<std::complex<double>> general_eigenvalues(const Matrix& a);

/// max Re(lambda) over the spectrum of A.
double spectral_abscissa(const Matrix& a);

/// max |lambda| over the spectrum of A.
double spectral_radius(const Matrix& a);

/// Spectral norm (largest singular value) via Jacobi on A^T A. Tight.
double spectral_norm(const Matrix& a);

/// Operator-norm estimate by power iteration on A^T A; `iters` fixed so the
/// Monte Carlo hot path stays cheap and deterministic.
double spectral_norm_power(const Matrix& a, int iters = 20, double tol = 1e-10);

} // namespace lsalab
