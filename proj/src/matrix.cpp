#include "lsalab/matrix.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

namespace lsalab {

Vector lu_solve(Matrix a, Vector b) {
    if (!a.square() || a.rows() != static_cast<int>(b.size()))
        throw DimMismatchError("lu_solve: shape mismatch");
    const int n = a.rows();
    std::vector<int> piv(n);
    for (int i = 0; i < n; ++i) piv[i] = i;

    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = std::abs(a(k, k));
        for (int i = k + 1; i < n; ++i) {
            double v = std::abs(a(i, k));
            if (v > best) { best = v; p = i; }
        }
        if (best == 0.0) throw SingularMatrixError("lu_solve: singular matrix");
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            std::swap(b[k], b[p]);
        }
        for (int i = k + 1; i < n; ++i) {
            double f = a(i, k) / a(k, k);
            a(i, k) = f;
            for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
    }
    Vector x(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

Matrix cholesky(const Matrix& a) {
    if (!a.square()) throw DimMismatchError("cholesky: not square");
    const int n = a.rows();
    Matrix l(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (s <= 0.0) throw QNotPdError("cholesky: matrix not positive definite");
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    return l;
}

// Cyclic Jacobi. Plenty for d <= 64.
Vector symmetric_eigen(const Matrix& a, Matrix& vectors) {
    if (!a.square()) throw DimMismatchError("symmetric_eigen: not square");
    const int n = a.rows();
    Matrix s = a;
    vectors = Matrix::identity(n);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += s(i, j) * s(i, j);
        if (std::sqrt(2.0 * off) <= 1e-14 * (1.0 + s.frobenius_norm())) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(s(p, q)) <= 1e-300) continue;
                double theta = (s(q, q) - s(p, p)) / (2.0 * s(p, q));
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double sn = t * c;
                for (int k = 0; k < n; ++k) {
                    double skp = s(k, p), skq = s(k, q);
                    s(k, p) = c * skp - sn * skq;
                    s(k, q) = sn * skp + c * skq;
                }
                for (int k = 0; k < n; ++k) {
                    double spk = s(p, k), sqk = s(q, k);
                    s(p, k) = c * spk - sn * sqk;
                    s(q, k) = sn * spk + c * sqk;
                }
                for (int k = 0; k < n; ++k) {
                    double vkp = vectors(k, p), vkq = vectors(k, q);
                    vectors(k, p) = c * vkp - sn * vkq;
                    vectors(k, q) = sn * vkp + c * vkq;
                }
            }
        }
    }
    Vector ev(n);
    for (int i = 0; i < n; ++i) ev[i] = s(i, i);
    // sort ascending, permuting the vectors along
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return ev[i] < ev[j]; });
    Vector sorted(n);
    Matrix vs(n, n);
    for (int c = 0; c < n; ++c) {
        sorted[c] = ev[idx[c]];
        for (int r = 0; r < n; ++r) vs(r, c) = vectors(r, idx[c]);
    }
    vectors = vs;
    return sorted;
}

Vector symmetric_eigenvalues(const Matrix& a) {
    Matrix dummy;
    return symmetric_eigen(a, dummy);
}

namespace {

// Householder reduction to upper Hessenberg form, in place.
void hessenberg(Matrix& a) {
    const int n = a.rows();
    for (int k = 0; k + 2 < n; ++k) {
        double scale = 0.0;
        for (int i = k + 1; i < n; ++i) scale += std::abs(a(i, k));
        if (scale == 0.0) continue;
        Vector v(n, 0.0);
        double sigma = 0.0;
        for (int i = k + 1; i < n; ++i) {
            v[i] = a(i, k) / scale;
            sigma += v[i] * v[i];
        }
        double alpha = (v[k + 1] >= 0 ? -std::sqrt(sigma) : std::sqrt(sigma));
        double beta = sigma - v[k + 1] * alpha;
        if (beta == 0.0) continue;
        v[k + 1] -= alpha;
        // A <- H A, H = I - v v^T / beta
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int i = k + 1; i < n; ++i) s += v[i] * a(i, j);
            s /= beta;
            for (int i = k + 1; i < n; ++i) a(i, j) -= s * v[i];
        }
        // A <- A H
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = k + 1; j < n; ++j) s += a(i, j) * v[j];
            s /= beta;
            for (int j = k + 1; j < n; ++j) a(i, j) -= s * v[j];
        }
        a(k + 1, k) = alpha * scale;
        for (int i = k + 2; i < n; ++i) a(i, k) = 0.0;
    }
}

inline double sign_of(double a, double b) { return b >= 0 ? std::abs(a) : -std::abs(a); }

// Francis double-shift QR on an upper Hessenberg matrix (EISPACK hqr).
void hqr(Matrix& a, Vector& wr, Vector& wi) {
    const int n = a.rows();
    wr.assign(n, 0.0);
    wi.assign(n, 0.0);

    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));

    int nn = n - 1;
    double t = 0.0;
    while (nn >= 0) {
        int its = 0;
        int l;
        do {
            for (l = nn; l >= 1; --l) {
                double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
                if (s == 0.0) s = anorm;
                if (std::abs(a(l, l - 1)) <= DBL_EPSILON * s) {
                    a(l, l - 1) = 0.0;
                    break;
                }
            }
            double x = a(nn, nn);
            if (l == nn) {
                wr[nn] = x + t;
                wi[nn] = 0.0;
                --nn;
            } else {
                double y = a(nn - 1, nn - 1);
                double w = a(nn, nn - 1) * a(nn - 1, nn);
                if (l == nn - 1) {
                    double p = 0.5 * (y - x);
                    double q = p * p + w;
                    double z = std::sqrt(std::abs(q));
                    x += t;
                    if (q >= 0.0) {
                        z = p + sign_of(z, p);
                        wr[nn - 1] = wr[nn] = x + z;
                        if (z != 0.0) wr[nn] = x - w / z;
                        wi[nn - 1] = wi[nn] = 0.0;
                    } else {
                        wr[nn - 1] = wr[nn] = x + p;
                        wi[nn] = z;
                        wi[nn - 1] = -z;
                    }
                    nn -= 2;
                } else {
                    if (its == 60) throw IllConditionedError("hqr: too many QR iterations");
                    double p = 0.0, q = 0.0, r = 0.0, z = 0.0, s = 0.0;
                    if (its == 10 || its == 20 || its == 30 || its == 40 || its == 50) {
                        t += x;
                        for (int i = 0; i <= nn; ++i) a(i, i) -= x;
                        s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        w = -0.4375 * s * s;
                    }
                    ++its;
                    int m;
                    for (m = nn - 2; m >= l; --m) {
                        z = a(m, m);
                        r = x - z;
                        s = y - z;
                        p = (r * s - w) / a(m + 1, m) + a(m, m + 1);
                        q = a(m + 1, m + 1) - z - r - s;
                        r = a(m + 2, m + 1);
                        s = std::abs(p) + std::abs(q) + std::abs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) break;
                        double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
                        double v = std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) +
                                                  std::abs(a(m + 1, m + 1)));
                        if (u <= DBL_EPSILON * v) break;
                    }
                    for (int i = m + 2; i <= nn; ++i) {
                        a(i, i - 2) = 0.0;
                        if (i != m + 2) a(i, i - 3) = 0.0;
                    }
                    for (int k = m; k <= nn - 1; ++k) {
                        if (k != m) {
                            p = a(k, k - 1);
                            q = a(k + 1, k - 1);
                            r = 0.0;
                            if (k != nn - 1) r = a(k + 2, k - 1);
                            x = std::abs(p) + std::abs(q) + std::abs(r);
                            if (x != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        s = sign_of(std::sqrt(p * p + q * q + r * r), p);
                        if (s != 0.0) {
                            if (k == m) {
                                if (l != m) a(k, k - 1) = -a(k, k - 1);
                            } else {
                                a(k, k - 1) = -s * x;
                            }
                            p += s;
                            x = p / s;
                            double yy = q / s;
                            z = r / s;
                            q /= p;
                            r /= p;
                            for (int j = k; j <= nn; ++j) {
                                p = a(k, j) + q * a(k + 1, j);
                                if (k != nn - 1) {
                                    p += r * a(k + 2, j);
                                    a(k + 2, j) -= p * z;
                                }
                                a(k + 1, j) -= p * yy;
                                a(k, j) -= p * x;
                            }
                            int mmin = nn < k + 3 ? nn : k + 3;
                            for (int i = l; i <= mmin; ++i) {
                                p = x * a(i, k) + yy * a(i, k + 1);
                                if (k != nn - 1) {
                                    p += z * a(i, k + 2);
                                    a(i, k + 2) -= p * r;
                                }
                                a(i, k + 1) -= p * q;
                                a(i, k) -= p;
                            }
                        }
                    }
                }
            }
        } while (l < nn - 1);
    }
}

} // namespace

std::vector<std::complex<double>> general_eigenvalues(const Matrix& a) {
    if (!a.square()) throw DimMismatchError("general_eigenvalues: not square");
    const int n = a.rows();
    std::vector<std::complex<double>> ev(n);
    if (n == 0) return ev;
    if (n == 1) {
        ev[0] = a(0, 0);
        return ev;
    }
    Matrix h = a;
    hessenberg(h);
    Vector wr, wi;
    hqr(h, wr, wi);
    for (int i = 0; i < n; ++i) ev[i] = {wr[i], wi[i]};
    std::sort(ev.begin(), ev.end(), [](const auto& x, const auto& y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    return ev;
}

double spectral_abscissa(const Matrix& a) {
    double m = -HUGE_VAL;
    for (const auto& ev : general_eigenvalues(a)) m = std::max(m, ev.real());
    return m;
}

double spectral_radius(const Matrix& a) {
    double m = 0.0;
    for (const auto& ev : general_eigenvalues(a)) m = std::max(m, std::abs(ev));
    return m;
}

double spectral_norm(const Matrix& a) {
    Matrix ata = a.transpose() * a;
    Vector ev = symmetric_eigenvalues(ata);
    double top = ev.empty() ? 0.0 : ev.back();
    return std::sqrt(std::max(0.0, top));
}

double spectral_norm_power(const Matrix& a, int iters, double tol) {
    const int n = a.cols();
    if (n == 0) return 0.0;
    Matrix ata = a.transpose() * a;
    // deterministic start vector with all components populated
    Vector x(n);
    for (int i = 0; i < n; ++i) x[i] = 1.0 + 0.001 * (i + 1);
    double nx = norm2(x);
    for (double& v : x) v /= nx;
    double lambda = 0.0;
    for (int it = 0; it < iters; ++it) {
        Vector y = ata.apply(x);
        double ny = norm2(y);
        if (ny == 0.0) return 0.0;
        double next = ny;
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = y[i] / ny;
        if (std::abs(next - lambda) <= tol * std::max(1.0, next)) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return std::sqrt(lambda);
}

} // namespace lsalab
