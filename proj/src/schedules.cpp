#include "lsalab/schedules.hpp"

#include <cmath>

#include "lsalab/chains.hpp" // hurwitz_zeta

namespace lsalab {

StepSchedule StepSchedule::constant(double alpha) {
    // alpha = 0 is admitted as the degenerate frozen recursion
    if (alpha < 0) throw Error("constant schedule requires alpha >= 0");
    StepSchedule s;
    s.kind_ = Kind::Constant;
    s.c_ = alpha;
    return s;
}

StepSchedule StepSchedule::polynomial(double c, double n0, double t) {
    if (c <= 0 || n0 < 0 || t <= 0 || t > 1)
        throw Error("polynomial schedule requires c > 0, n0 >= 0, t in (0,1]");
    StepSchedule s;
    s.kind_ = Kind::Polynomial;
    s.c_ = c;
    s.n0_ = n0;
    s.t_ = t;
    return s;
}

StepSchedule StepSchedule::explicit_list(std::vector<double> values) {
    if (values.empty()) throw Error("explicit schedule requires at least one step");
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        if (values[i + 1] > values[i] + 1e-15)
            throw NotNonIncreasingError("explicit schedule is increasing");
    if (values.front() <= 0) throw Error("explicit schedule requires alpha_1 > 0");
    StepSchedule s;
    s.kind_ = Kind::Explicit;
    s.values_ = std::move(values);
    return s;
}

double StepSchedule::alpha(long long k) const {
    switch (kind_) {
        case Kind::Constant: return c_;
        case Kind::Polynomial: return c_ / std::pow(n0_ + static_cast<double>(k), t_);
        case Kind::Explicit: {
            if (k <= 0) return values_.front();
            std::size_t i = static_cast<std::size_t>(k - 1);
            return i < values_.size() ? values_[i] : 0.0;
        }
    }
    return 0.0;
}

bool StepSchedule::square_summable() const {
    switch (kind_) {
        case Kind::Constant: return false;
        case Kind::Polynomial: return t_ > 0.5;
        case Kind::Explicit: return true;
    }
    return false;
}

bool StepSchedule::non_increasing(long long horizon) const {
    for (long long k = 0; k < horizon; ++k)
        if (alpha(k + 1) > alpha(k) * (1.0 + 1e-15)) return false;
    return true;
}

namespace {

double minimal_c_alpha_scan(const StepSchedule& s, long long horizon) {
    double worst = 0.0;
    for (long long k = 0; k < horizon; ++k) {
        double ak = s.alpha(k), ak1 = s.alpha(k + 1);
        if (ak1 <= 0.0) break; // explicit list exhausted
        if (ak1 > ak * (1.0 + 1e-15))
            throw NotNonIncreasingError("schedule is not non-increasing");
        worst = std::max(worst, (ak / ak1 - 1.0) / ak1);
    }
    return worst;
}

} // namespace

A5Report validate_A5(const StepSchedule& s, double a, long long horizon) {
    if (horizon < 2) throw Error("validate_A5: horizon must be >= 2");
    A5Report r;
    r.minimal_c_alpha = minimal_c_alpha_scan(s, horizon);
    if (s.kind() == StepSchedule::Kind::Polynomial) {
        // the ratio is decreasing in k for polynomial schedules, so the scan
        // supremum is attained at k = 0; evaluate it in closed form as well
        double a0 = s.alpha(0), a1 = s.alpha(1);
        r.minimal_c_alpha = std::max(r.minimal_c_alpha, (a0 / a1 - 1.0) / a1);
    }
    r.passes = std::isfinite(r.minimal_c_alpha) && r.minimal_c_alpha <= a / 16.0;
    return r;
}

A6Report validate_A6(const StepSchedule& s, double a, long long horizon) {
    A6Report r;
    if (s.kind() == StepSchedule::Kind::Constant) {
        // the fixed-step branch of the expansion theorem does not use A_n
        r.not_applicable = true;
        r.passes = false;
        return r;
    }
    if (!s.square_summable())
        throw NotSquareSummableError("validate_A6: schedule is not square-summable");
    r.minimal_c_alpha = minimal_c_alpha_scan(s, horizon);
    double worst_ratio = 0.0;
    for (long long k = 0; k < horizon; ++k) {
        double ak = s.alpha(k);
        if (ak <= 0.0) break;
        double tail = tail_sum_sq(s, k + 1).value;
        if (tail <= 0.0) break;
        worst_ratio = std::max(worst_ratio, ak / tail);
    }
    r.ratio_bound = worst_ratio;
    double needed = std::max(r.minimal_c_alpha, 1.5 * worst_ratio);
    r.passes = std::isfinite(needed) && needed <= a / 32.0;
    return r;
}

TailSum tail_sum_sq(const StepSchedule& s, long long n) {
    if (!s.square_summable())
        throw NotSquareSummableError("tail_sum_sq: schedule is not square-summable");
    TailSum out;
    out.n = n;
    if (s.kind() == StepSchedule::Kind::Explicit) {
        double sum = 0.0;
        const auto& v = s.values();
        for (std::size_t i = (n >= 1 ? static_cast<std::size_t>(n - 1) : 0); i < v.size(); ++i)
            sum += v[i] * v[i];
        if (n <= 0 && !v.empty()) sum += v[0] * v[0]; // alpha_0 := alpha_1
        out.value = sum;
        out.truncation_bound = 0.0;
        return out;
    }
    // polynomial: sum_{l >= n} c^2 (n0 + l)^{-2t} = c^2 zeta(2t, n0 + n)
    double s2 = 2.0 * s.poly_t();
    double base = s.poly_n0() + static_cast<double>(n);
    if (base <= 0.0) throw Error("tail_sum_sq: alpha_0 undefined for n0 = 0");
    double z = hurwitz_zeta(s2, base);
    out.value = s.poly_c() * s.poly_c() * z;
    // first omitted Euler-Maclaurin term at the internal cutoff M = base + 40
    double m = base + 40.0;
    double omitted = s2 * (s2 + 1) * (s2 + 2) * (s2 + 3) * (s2 + 4) * (s2 + 5) * (s2 + 6) *
                     std::pow(m, -s2 - 7.0) / 1209600.0;
    out.truncation_bound = s.poly_c() * s.poly_c() * omitted;
    return out;
}

SumIdentityReport weighted_sum_identity(const StepSchedule& s, double a, long long n_max) {
    if (s.alpha(0) >= 1.0 / a)
        throw StepTooLargeError("weighted_sum_identity: alpha_0 must be below 1/a");
    SumIdentityReport r;
    // backward accumulation of the suffix products
    double lhs = 0.0;
    double suffix = 1.0; // prod_{l=j+1}^{N}(1 - a alpha_l), starts at j = N
    for (long long j = n_max; j >= 0; --j) {
        lhs += s.alpha(j) * suffix;
        suffix *= 1.0 - a * s.alpha(j);
    }
    r.lhs = lhs;
    r.rhs = (1.0 - suffix) / a; // suffix is now prod_{l=0}^{N}
    r.gap = std::abs(r.lhs - r.rhs);
    return r;
}

SumBoundReport weighted_sum_bounds(const StepSchedule& s, double b, double p, double q,
                                   long long n_max, bool strict) {
    if (p <= 1.0 || p > 2.0) throw HypothesisFailedError("weighted_sum_bounds: p outside (1,2]");
    if (q < 0.0 || q > 1.0) throw HypothesisFailedError("weighted_sum_bounds: q outside [0,1]");
    double c_alpha = minimal_c_alpha_scan(s, n_max + 1);
    const bool weighted = q > 0.0;
    if (weighted && !s.square_summable())
        throw NotSquareSummableError("weighted_sum_bounds: tail sums diverge");
    if (strict) {
        if (s.alpha(0) >= 1.0 / (2.0 * b))
            throw HypothesisFailedError("weighted_sum_bounds: alpha_0 must be below 1/(2b)");
        if (!weighted) {
            if (c_alpha > b / 2.0)
                throw HypothesisFailedError("weighted_sum_bounds: c_alpha exceeds b/2");
        } else {
            if (c_alpha > b / 4.0)
                throw HypothesisFailedError("weighted_sum_bounds: c_alpha exceeds b/4");
            if (c_alpha > 0.0 && s.alpha(0) > 1.0 / (2.0 * c_alpha))
                throw HypothesisFailedError("weighted_sum_bounds: alpha_0 exceeds 1/(2 c_alpha)");
            for (long long k = 0; k <= n_max; ++k) {
                double tail = tail_sum_sq(s, k + 1).value;
                if (tail <= 0.0) break;
                if (s.alpha(k) / tail > (2.0 / 3.0) * c_alpha + 1e-12)
                    throw HypothesisFailedError(
                        "weighted_sum_bounds: alpha_k / A_{k+1} too large");
            }
        }
    }

    SumBoundReport r;
    double sum = 0.0;
    double suffix = 1.0;
    for (long long k = n_max; k >= 1; --k) {
        double ak = s.alpha(k);
        double term = std::pow(ak, p) * suffix;
        if (weighted) term *= std::pow(tail_sum_sq(s, k).value, q);
        sum += term;
        suffix *= 1.0 - b * ak;
    }
    r.sum_value = sum;
    double an = s.alpha(n_max);
    r.bound = (2.0 / b) * std::pow(an, p - 1.0);
    if (weighted) r.bound *= std::pow(tail_sum_sq(s, n_max).value, q);
    r.holds = r.sum_value <= r.bound * (1.0 + 1e-12);
    return r;
}

} // namespace lsalab
