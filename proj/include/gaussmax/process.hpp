#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gaussmax/bounds.hpp"
#include "gaussmax/covariance.hpp"

namespace gaussmax {

/// Stationary Gaussian process in truncated moving-average form,
///   X_i = sigma (Z_i + sum_{j=1..K} psi_j Z_{i-j}),  Z iid standard normal,
/// normalized so that process variance + truncation_tail = 1.
struct WoldModel {
    double innovation_sd = 1.0;
    std::vector<double> psi;       // psi_1 .. psi_K (psi_0 = 1 implicit)
    double truncation_tail = 0.0;  // variance mass dropped by truncating

    double process_variance() const;  // innovation_sd^2 (1 + sum psi_j^2)
};

/// AR(1) with psi_j = rho^j, truncated at the smallest K whose discarded
/// variance rho^{2(K+1)} is at most tail_tol.  Requires |rho| < 1.
WoldModel ar1_model(double rho, double tail_tol);

/// Arbitrary coefficient list, rescaled to unit process variance
/// (truncation_tail = 0 by construction).
WoldModel wold_from_psi(const std::vector<double>& psi);

/// Residual variance of a k-step subsampled coordinate given everything
/// before the previous retained point:
///   sigma^2 (1 + sum_{j=1}^{k-1} psi_j^2) = 1 - sigma^2 sum_{j>=k} psi_j^2.
/// Nondecreasing in k, tends to the process variance.
double subsample_residual_variance(const WoldModel& m, long long k);

/// Covariance of the n retained points (X_k, X_2k, ..., X_nk), Toeplitz
/// with autocovariance gamma(h) = sigma^2 sum_j psi_j psi_{j+h}.
CovarianceMatrix window_covariance(const WoldModel& m, int n, long long k);

/// Largest stride k for which floor(n/k) still passes the validity gate,
/// or 0 if no stride works at this n and alpha.
long long largest_usable_k(long long n, double alpha);

/// Lower bound for the max over an n-point window via the k-subsampled
/// points: lower_bound_certificate(floor(n/k), alpha, sigma, tau) with
/// sigma^2 = subsample_residual_variance(m, k) and tau^2 = 1 - sigma^2.
LowerBoundCertificate stationary_lower_bound(const WoldModel& m, long long n,
                                             long long k, double alpha);

/// Parse a key=value spec: kind = ar1 | psi-list, rho = <real>,
/// psi = <comma separated reals>, tail_tol = <real> (default 1e-12).
/// '#' starts a comment.
WoldModel read_process_spec(std::istream& in);
WoldModel read_process_spec_file(const std::string& path);

}  // namespace gaussmax
