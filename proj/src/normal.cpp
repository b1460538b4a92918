#include "gaussmax/normal.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gaussmax/errors.hpp"

namespace gaussmax {

namespace {

constexpr double kInvSqrtTwoPi = 0.3989422804014326779;
constexpr double kSqrtTwo = 1.4142135623730950488;

// Below this abscissa log(0.5 erfc(x/sqrt 2)) is already fully accurate;
// above it the continued fraction for the Mills ratio converges fast.
constexpr double kLogTailSwitch = 6.0;

void require_finite(double x, const char* op) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument(std::string(op) + ": argument must be finite");
    }
}

double log_pdf(double x) { return -0.5 * x * x - 0.5 * kLogTwoPi; }

// Mills ratio (1 - Phi(x)) / phi(x) evaluated by the classical continued
// fraction 1/(x + 1/(x + 2/(x + 3/(...)))), run backward from depth 120.
double mills_ratio_cf(double x) {
    double t = 0.0;
    for (int k = 120; k >= 1; --k) {
        t = k / (x + t);
    }
    return 1.0 / (x + t);
}

// ALGORITHM AS241 (Wichura 1988) rational estimate of the normal quantile,
// accurate to roughly one part in 1e15.  Used only as the starting point;
// the shipped quantile is polished against the shipped cdf.
double quantile_estimate(double p) {
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                     6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                   1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
                 1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
               (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                     3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                   5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
                 4.2313330701600911252e+1) * r + 1.0);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double x;
    if (r <= 5.0) {
        r -= 1.6;
        x = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
              4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
              2.05319162663775882187e+0) * r + 1.0);
    } else {
        r -= 5.0;
        x = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
              5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
    }
    return q < 0.0 ? -x : x;
}

// Solves 1 - Phi(x) = q on x >= 0 for 0 < q <= 0.5.  Newton refinement of
// the rational estimate against the tail residual: the tail keeps full
// relative precision everywhere (erfc while it stays normal, the
// continued-fraction logarithm past the underflow cliff), so the iteration
// settles within an ulp or two for any representable q.
double tail_inverse(double q) {
    if (q == 0.5) {
        return 0.0;
    }
    double x = -quantile_estimate(q);
    const double log_q = std::log(q);
    for (int i = 0; i < 4; ++i) {
        const double t = std_normal_tail(x);
        const double density = std_normal_pdf(x);
        double step;
        if (t >= 2.3e-308 && density >= 2.3e-308) {
            step = (t - q) / density;
        } else {
            step = (std_normal_log_tail(x) - log_q) * mills_ratio_cf(x);
        }
        x += step;
        if (std::fabs(step) <= 1e-16 * (1.0 + std::fabs(x))) {
            break;
        }
    }
    return x;
}

}  // namespace

double std_normal_pdf(double x) {
    require_finite(x, "std_normal_pdf");
    return kInvSqrtTwoPi * std::exp(-0.5 * x * x);
}

double std_normal_cdf(double x) {
    require_finite(x, "std_normal_cdf");
    return 0.5 * std::erfc(-x / kSqrtTwo);
}

double std_normal_tail(double x) {
    require_finite(x, "std_normal_tail");
    return 0.5 * std::erfc(x / kSqrtTwo);
}

double std_normal_log_tail(double x) {
    require_finite(x, "std_normal_log_tail");
    if (x < kLogTailSwitch) {
        return std::log(std_normal_tail(x));
    }
    return log_pdf(x) + std::log(mills_ratio_cf(x));
}

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("std_normal_quantile: p must lie in (0,1)");
    }
    // 1 - p is exact for p in [1/2, 1), so both halves reduce to inverting
    // the tail at a small probability, where every evaluation keeps full
    // relative precision.
    return p < 0.5 ? -tail_inverse(p) : tail_inverse(1.0 - p);
}

TailPoint tail_point(double x) {
    require_finite(x, "tail_point");
    return TailPoint{x, x * x, tail_v(x)};
}

double tail_v(double x) {
    require_finite(x, "tail_v");
    return -2.0 * std_normal_log_tail(x) - kLogTwoPi;
}

double invert_v_lower(double v) {
    require_finite(v, "invert_v_lower");
    if (v <= 1.0) {
        throw std::invalid_argument("invert_v_lower: requires v > 1");
    }
    return v - std::log(v);
}

double invert_v_upper(double v) {
    require_finite(v, "invert_v_upper");
    if (v <= 1.0) {
        throw std::invalid_argument("invert_v_upper: requires v > 1");
    }
    const double lv = std::log(v);
    return v - lv + lv / v;
}

std::pair<double, double> mills_bracket(double x) {
    require_finite(x, "mills_bracket");
    if (x < 1.0) {
        throw std::invalid_argument("mills_bracket: requires x >= 1");
    }
    const double base = std_normal_pdf(x) / x;
    const double x2 = x * x;
    const double lower = base * (1.0 - 1.0 / x2);
    const double upper = base * (1.0 - 1.0 / x2 + 3.0 / (x2 * x2));
    return {lower, upper};
}

std::pair<double, double> mills_log_bracket(double x) {
    require_finite(x, "mills_log_bracket");
    if (x < 1.0) {
        throw std::invalid_argument("mills_log_bracket: requires x >= 1");
    }
    const double base = log_pdf(x) - std::log(x);
    const double x2 = x * x;
    const double lower = base + std::log(1.0 - 1.0 / x2);
    const double upper = base + std::log1p(-1.0 / x2 + 3.0 / (x2 * x2));
    return {lower, upper};
}

GridCheckReport run_inequality_grids() {
    GridCheckReport rep;
    double prev_v = 0.0;
    for (int i = 100; i <= 4000; ++i) {
        const double x = i / 100.0;
        const double x2 = x * x;
        const double v = tail_v(x);
        ++rep.points;
        if (i >= 200 && invert_v_lower(v) > x2 * (1.0 + 1e-9)) {
            ++rep.lower_violations;
        }
        if (x2 > invert_v_upper(v) * (1.0 + 1e-9)) {
            ++rep.upper_violations;
        }
        const auto [log_lo, log_hi] = mills_log_bracket(x);
        const double log_tail = std_normal_log_tail(x);
        if (!(log_lo <= log_tail && log_tail <= log_hi)) {
            ++rep.mills_violations;
        }
        if (i > 100 && !(v > prev_v)) {
            ++rep.monotone_violations;
        }
        prev_v = v;
    }
    return rep;
}

}  // namespace gaussmax
