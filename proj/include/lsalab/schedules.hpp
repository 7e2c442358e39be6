#pragma once

#include <vector>

#include "lsalab/errors.hpp"

namespace lsalab {

/// Step-size sequence. The recursion consumes alpha_k from k = 1; index 0 is
/// defined too because the summation lemmas and the constant-step branch of
/// the expansion theorem reference alpha_0. For explicit lists the entries
/// are alpha_1, alpha_2, ... and alpha_0 := alpha_1.
class StepSchedule {
public:
    enum class Kind { Constant, Polynomial, Explicit };

    static StepSchedule constant(double alpha);
    /// alpha_k = c / (n0 + k)^t with t in (0, 1].
    static StepSchedule polynomial(double c, double n0, double t);
    static StepSchedule explicit_list(std::vector<double> values);

    double alpha(long long k) const;
    Kind kind() const { return kind_; }
    bool square_summable() const;
    bool non_increasing(long long horizon) const;

    double poly_c() const { return c_; }
    double poly_n0() const { return n0_; }
    double poly_t() const { return t_; }
    double constant_alpha() const { return c_; }
    const std::vector<double>& values() const { return values_; }

private:
    Kind kind_ = Kind::Constant;
    double c_ = 0, n0_ = 0, t_ = 0;
    std::vector<double> values_;
};

struct TailSum {
    long long n = 0;
    double value = 0;            // A_n = sum_{l >= n} alpha_l^2
    double truncation_bound = 0; // bound on the numerical remainder
};

struct A5Report {
    double minimal_c_alpha = 0; // smallest feasible c_alpha over the horizon
    bool passes = false;        // minimal_c_alpha <= a/16
};

struct A6Report {
    double minimal_c_alpha = 0;
    double ratio_bound = 0;     // max_k alpha_k / A_{k+1}
    bool passes = false;
    bool not_applicable = false; // constant schedules under the fixed-step branch
};

struct SumIdentityReport {
    double lhs = 0;
    double rhs = 0;
    double gap = 0;
};

struct SumBoundReport {
    double sum_value = 0;
    double bound = 0;
    bool holds = false;
};

A5Report validate_A5(const StepSchedule& s, double a, long long horizon);

A6Report validate_A6(const StepSchedule& s, double a, long long horizon);

TailSum tail_sum_sq(const StepSchedule& s, long long n);

/// Telescoping identity: sum_{j=0}^{N} alpha_j prod_{l=j+1}^{N} (1 - a alpha_l)
/// = (1/a) { 1 - prod_{l=0}^{N} (1 - a alpha_l) }. Requires alpha_0 < 1/a.
SumIdentityReport weighted_sum_identity(const StepSchedule& s, double a, long long n_max);

/// Weighted geometric-sum bound
///   sum_{k=1}^{N} alpha_k^p A_k^q prod_{j=k+1}^{N} (1 - b alpha_j)
///     <= (2/b) alpha_N^{p-1} A_N^q,
/// with q = 0 selecting the plain variant. With strict = true the lemma's
/// hypotheses are validated first and HypothesisFailedError is thrown when
/// they do not hold; strict = false evaluates the two sides regardless
/// (numeric-scan mode).
SumBoundReport weighted_sum_bounds(const StepSchedule& s, double b, double p, double q,
                                   long long n_max, bool strict = true);

} // namespace lsalab
