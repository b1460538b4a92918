#pragma once

#include <utility>

namespace gaussmax {

inline constexpr double kLogTwoPi = 1.8378770664093454836;

/// Standard normal density at x.
double std_normal_pdf(double x);

/// Phi(x) = Pr{Z <= x} for Z ~ N(0,1).  Monotone nondecreasing.
double std_normal_cdf(double x);

/// Upper tail 1 - Phi(x).  Relative error below 1e-13 for 0 <= x <= 8.
double std_normal_tail(double x);

/// log(1 - Phi(x)).  Finite and accurate (relative error <= 1e-10) up to
/// x = 40, far past the point where the tail itself underflows.
double std_normal_log_tail(double x);

/// Inverse of Phi on (0,1).  A rational initial estimate is refined by
/// Newton steps against the tail residual, which keeps full relative
/// precision on both sides; cdf(quantile(p)) = p to 1e-12 absolute, and
/// quantile(1/2) = 0 exactly.
double std_normal_quantile(double p);

/// The tail statistic V(x) = -2 log(1 - Phi(x)) - log(2 pi) together with
/// the squared abscissa y = x^2 it brackets.
struct TailPoint {
    double x;
    double y;  // x^2
    double v;  // tail statistic
};

TailPoint tail_point(double x);

/// V(x) = -2 log(1 - Phi(x)) - log(2 pi).  Strictly increasing in x.
double tail_v(double x);

/// Lower bound v - log(v) for x^2 given v = tail_v(x); valid for x >= 2.
/// Requires v > 1.
double invert_v_lower(double v);

/// Upper bound v - log(v) + log(v)/v for x^2 given v = tail_v(x); valid
/// for x >= 1.  Requires v > 1.
double invert_v_upper(double v);

/// Two-sided bound on 1 - Phi(x) for x >= 1:
///   phi(x)/x (1 - 1/x^2)  <=  1 - Phi(x)  <=  phi(x)/x (1 - 1/x^2 + 3/x^4).
/// The linear form underflows near x = 38; see mills_log_bracket.
std::pair<double, double> mills_bracket(double x);

/// Logarithms of the Mills bracket endpoints, usable across the whole
/// far tail.  The lower endpoint is -infinity at x = 1 exactly.
std::pair<double, double> mills_log_bracket(double x);

/// Grid sweep of the inversion inequalities and the Mills bracket over
/// x in [1, 40] step 0.01.  All counts must be zero for a healthy build.
struct GridCheckReport {
    long long points = 0;
    long long lower_violations = 0;     // invert_v_lower(V(x)) > x^2, x >= 2
    long long upper_violations = 0;     // invert_v_upper(V(x)) < x^2, x >= 1
    long long mills_violations = 0;     // log tail outside the Mills bracket
    long long monotone_violations = 0;  // V not strictly increasing

    bool pass() const {
        return lower_violations == 0 && upper_violations == 0 &&
               mills_violations == 0 && monotone_violations == 0;
    }
};

GridCheckReport run_inequality_grids();

}  // namespace gaussmax
