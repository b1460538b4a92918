#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace gaussmax {

/// Symmetric positive definite covariance matrix.  Construction validates
/// symmetry (1e-12 relative) and positive definiteness via a pivot-checked
/// triangular factorization; singular inputs are rejected, never repaired.
class CovarianceMatrix {
public:
    explicit CovarianceMatrix(Eigen::MatrixXd entries);

    int dim() const { return static_cast<int>(m_.rows()); }
    double operator()(int i, int j) const { return m_(i, j); }
    const Eigen::MatrixXd& entries() const { return m_; }

    static CovarianceMatrix identity(int n);
    static CovarianceMatrix equicorrelated(int n, double rho);
    static CovarianceMatrix ar1_toeplitz(int n, double rho);

private:
    Eigen::MatrixXd m_;
};

/// Parse a whitespace-separated matrix, one row per line; '#' starts a
/// comment.  Dimension is inferred; the result is validated on construction.
CovarianceMatrix read_covariance(std::istream& in);
CovarianceMatrix read_covariance_file(const std::string& path);

std::vector<int> natural_ordering(int n);

/// Sequential conditional decomposition under a fixed ordering: with
/// P the ordering's permutation, P C P^T = L L^T, and position i splits
/// its variance into the residual part sigma_i^2 = L(i,i)^2 (new
/// information) and the conditional-mean part tau_i^2 = C_ii - sigma_i^2
/// (explained by predecessors).  tau_1^2 = 0 exactly.
struct ConditionalDecomposition {
    std::vector<int> ordering;
    Eigen::MatrixXd lower_factor;
    std::vector<double> residual_vars;
    std::vector<double> condmean_vars;

    double min_residual_var() const;
    double max_condmean_var() const;
};

ConditionalDecomposition decompose(const CovarianceMatrix& c,
                                   const std::vector<int>& ordering);
ConditionalDecomposition decompose(const CovarianceMatrix& c);

/// (sigma, tau) = (sqrt min_i sigma_i^2, sqrt max_i tau_i^2) for the
/// ordering, in standard-deviation units, ready for the lower bound.
std::pair<double, double> sigma_tau(const CovarianceMatrix& c,
                                    const std::vector<int>& ordering);
std::pair<double, double> sigma_tau(const CovarianceMatrix& c);

/// Extreme eigenvalues (lambda_min, lambda_max).  For every ordering,
/// min_i sigma_i^2 >= lambda_min and max_i tau_i^2 <= lambda_max.
std::pair<double, double> eigen_bounds(const CovarianceMatrix& c);

/// 1 / (C^{-1})_ii per index: the residual variance of each variable
/// given all the others, equal to the sequential sigma_i^2 when i is
/// ordered last.
std::vector<double> precision_residuals(const CovarianceMatrix& c);

}  // namespace gaussmax
