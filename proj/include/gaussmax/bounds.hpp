#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace gaussmax {

class CovarianceMatrix;

/// Variable count n together with the derived constant N = log(n^2 / 2 pi)
/// that every bound below is phrased in.
struct MaxQuery {
    long long n;
    double big_n;

    explicit MaxQuery(long long n_vars);
};

/// L_alpha = -2 log(-log alpha).
double l_alpha(double alpha);

/// Smallest n whose N satisfies the validity gate N + L_alpha >= 6,
/// or 0 if no n does (alpha must lie in (0,1)).
long long smallest_valid_n(double alpha);

/// Union bound min(1, n (1 - Phi(A))), valid for any dependence.
double union_upper_tail(long long n, double single_tail);

/// Quantile -log(-log p) of the standard Gumbel law.
double gumbel_quantile(double p);

/// Quantile -log(1 - p) of the unit exponential law.
double exponential_quantile(double p);

/// G = -log(-n log F(m)): the coupling transform of a max sample m.  When
/// m is the max of n iid draws with marginal cdf F, the output is exactly
/// Gumbel distributed, and G <= -log(n(1 - F(m))) <= G + exp(-G)/n.
double gumbel_transform_of_max(double m, long long n,
                               const std::function<double(double)>& cdf_single);

/// Two-sided bracket for a quantile of M_n^2 derived from a coupling
/// quantile.  regime_ok marks whether the implied M_n >= 2 condition of
/// the lower inversion holds; the bracket is still reported when it does
/// not, clearly marked non-certified.
struct QuantileBracket {
    double coupling_value;
    std::optional<double> msq_lower;
    double msq_upper;
    bool regime_ok;
};

/// Independent case: with g the Gumbel p-quantile, the p-quantile of
/// M_n^2 lies in [(N+2g) - log(N+2g), invert_v_upper(N + 2g + 2 e^{-g}/n)].
/// Requires N + 2g > 1.
QuantileBracket independent_msq_bracket(const MaxQuery& q, double g);

/// Dependent case: for any joint law with standard normal marginals,
/// the e-quantile of M_n^2 is at most max(1, invert_v_upper(N + 2e)),
/// with e >= 0 an exponential quantile.
double dependent_msq_upper(const MaxQuery& q, double e);

/// Pr{ M_n >= threshold } >= guaranteed_tail, with all inputs recorded.
struct LowerBoundCertificate {
    long long n;
    double alpha;
    double l_alpha;
    double sigma;
    double tau;
    double threshold;
    double guaranteed_tail;  // 1 - 2 alpha
};

/// Main lower bound: threshold = sigma sqrt(N + L_a - log(N + L_a))
/// + tau Phi^{-1}(alpha), guaranteed tail 1 - 2 alpha.  Requires
/// 0 < alpha < 1/2, sigma > 0, tau >= 0, and the gate N + L_alpha >= 6.
LowerBoundCertificate lower_bound_certificate(long long n, double alpha,
                                              double sigma, double tau);

/// Headline special case alpha = 1/4 with sigma, tau taken as the square
/// roots of extreme covariance eigenvalues.  Requires n >= 70.
LowerBoundCertificate headline_bound(long long n, double lambda_min,
                                     double lambda_max);

/// Result of searching orderings of a covariance matrix for the largest
/// certified threshold.
struct OrderingChoice {
    std::vector<int> ordering;
    double sigma;
    double tau;
    double threshold;
};

/// Evaluates the natural ordering plus k seeded random permutations and
/// returns the one whose certificate threshold is largest.  Never applied
/// implicitly; callers opt in.
OrderingChoice best_ordering(const CovarianceMatrix& c, int k, double alpha,
                             std::uint64_t seed);

}  // namespace gaussmax
