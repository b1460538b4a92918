#include "gaussmax/bounds.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gaussmax/covariance.hpp"
#include "gaussmax/errors.hpp"
#include "gaussmax/normal.hpp"
#include "gaussmax/rng.hpp"

namespace gaussmax {

namespace {

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

void require_probability_open(double p, const char* op) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument(std::string(op) + ": requires a probability in (0,1)");
    }
}

}  // namespace

MaxQuery::MaxQuery(long long n_vars) : n(n_vars) {
    if (n < 1) {
        throw std::invalid_argument("MaxQuery: requires n >= 1");
    }
    big_n = 2.0 * std::log(static_cast<double>(n)) - kLogTwoPi;
}

double l_alpha(double alpha) {
    require_probability_open(alpha, "l_alpha");
    return -2.0 * std::log(-std::log(alpha));
}

long long smallest_valid_n(double alpha) {
    const double la = l_alpha(alpha);
    const double exponent = 0.5 * (6.0 - la + kLogTwoPi);
    if (exponent > 43.0) {
        return 0;  // gate unreachable for any representable n
    }
    long long n = static_cast<long long>(std::ceil(std::exp(exponent)));
    if (n < 1) {
        n = 1;
    }
    while (n > 1 && MaxQuery(n - 1).big_n + la >= 6.0) {
        --n;
    }
    while (MaxQuery(n).big_n + la < 6.0) {
        ++n;
    }
    return n;
}

double union_upper_tail(long long n, double single_tail) {
    if (n < 1) {
        throw std::invalid_argument("union_upper_tail: requires n >= 1");
    }
    if (!(single_tail >= 0.0 && single_tail <= 1.0)) {
        throw std::invalid_argument("union_upper_tail: requires a tail in [0,1]");
    }
    return std::min(1.0, static_cast<double>(n) * single_tail);
}

double gumbel_quantile(double p) {
    require_probability_open(p, "gumbel_quantile");
    return -std::log(-std::log(p));
}

double exponential_quantile(double p) {
    require_probability_open(p, "exponential_quantile");
    return -std::log1p(-p);
}

double gumbel_transform_of_max(double m, long long n,
                               const std::function<double(double)>& cdf_single) {
    if (n < 1) {
        throw std::invalid_argument("gumbel_transform_of_max: requires n >= 1");
    }
    const double f = cdf_single(m);
    if (!(f > 0.0 && f < 1.0)) {
        throw std::invalid_argument(
            "gumbel_transform_of_max: cdf_single(m) must lie strictly in (0,1)");
    }
    return -std::log(-static_cast<double>(n) * std::log(f));
}

QuantileBracket independent_msq_bracket(const MaxQuery& q, double g) {
    if (!std::isfinite(g)) {
        throw std::invalid_argument("independent_msq_bracket: g must be finite");
    }
    const double a = q.big_n + 2.0 * g;
    if (!(a > 1.0)) {
        throw std::invalid_argument("independent_msq_bracket: requires N + 2g > 1");
    }
    const double lower = a - std::log(a);
    const double v = a + 2.0 * std::exp(-g) / static_cast<double>(q.n);
    QuantileBracket bracket;
    bracket.coupling_value = g;
    bracket.msq_lower = lower;
    bracket.msq_upper = invert_v_upper(v);
    bracket.regime_ok = lower >= 4.0;
    return bracket;
}

double dependent_msq_upper(const MaxQuery& q, double e) {
    if (!(e >= 0.0) || !std::isfinite(e)) {
        throw std::invalid_argument("dependent_msq_upper: requires e >= 0");
    }
    const double a = q.big_n + 2.0 * e;
    if (a <= 1.0) {
        return 1.0;
    }
    return std::max(1.0, invert_v_upper(a));
}

LowerBoundCertificate lower_bound_certificate(long long n, double alpha,
                                              double sigma, double tau) {
    if (!(alpha > 0.0 && alpha < 0.5)) {
        throw std::invalid_argument(
            "lower_bound_certificate: requires alpha in (0, 1/2)");
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("lower_bound_certificate: requires sigma > 0");
    }
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw std::invalid_argument("lower_bound_certificate: requires tau >= 0");
    }
    const MaxQuery q(n);
    const double la = l_alpha(alpha);
    const double a = q.big_n + la;
    if (!(a >= 6.0)) {
        const long long n_min = smallest_valid_n(alpha);
        std::string msg = "lower_bound_certificate: requires N + L_alpha >= 6";
        if (n_min > 0) {
            msg += "; smallest valid n at alpha=" + format_number(alpha) + " is " +
                   std::to_string(n_min);
        } else {
            msg += "; no representable n satisfies the gate at alpha=" +
                   format_number(alpha);
        }
        throw gate_error(msg);
    }
    LowerBoundCertificate cert;
    cert.n = n;
    cert.alpha = alpha;
    cert.l_alpha = la;
    cert.sigma = sigma;
    cert.tau = tau;
    cert.threshold = sigma * std::sqrt(a - std::log(a)) + tau * std_normal_quantile(alpha);
    cert.guaranteed_tail = 1.0 - 2.0 * alpha;
    return cert;
}

LowerBoundCertificate headline_bound(long long n, double lambda_min,
                                     double lambda_max) {
    if (!(lambda_min > 0.0) || !std::isfinite(lambda_min)) {
        throw std::invalid_argument("headline_bound: requires lambda_min > 0");
    }
    if (!(lambda_max >= lambda_min) || !std::isfinite(lambda_max)) {
        throw std::invalid_argument("headline_bound: requires lambda_max >= lambda_min");
    }
    if (n < 70) {
        throw gate_error(
            "headline_bound: requires n >= 70 (the N + L_alpha >= 6 gate at alpha=0.25)");
    }
    return lower_bound_certificate(n, 0.25, std::sqrt(lambda_min), std::sqrt(lambda_max));
}

OrderingChoice best_ordering(const CovarianceMatrix& c, int k, double alpha,
                             std::uint64_t seed) {
    if (k < 0) {
        throw std::invalid_argument("best_ordering: requires k >= 0");
    }
    const int n = c.dim();
    std::vector<int> ordering(n);
    std::iota(ordering.begin(), ordering.end(), 0);

    OrderingChoice best;
    auto evaluate = [&](const std::vector<int>& ord) {
        const auto [sigma, tau] = sigma_tau(c, ord);
        const auto cert = lower_bound_certificate(n, alpha, sigma, tau);
        if (best.ordering.empty() || cert.threshold > best.threshold) {
            best.ordering = ord;
            best.sigma = sigma;
            best.tau = tau;
            best.threshold = cert.threshold;
        }
    };

    evaluate(ordering);
    SplitMix64 rng(seed);
    for (int trial = 0; trial < k; ++trial) {
        for (int i = n - 1; i > 0; --i) {
            const int j = static_cast<int>(rng.next() % static_cast<std::uint64_t>(i + 1));
            std::swap(ordering[i], ordering[j]);
        }
        evaluate(ordering);
    }
    return best;
}

}  // namespace gaussmax
