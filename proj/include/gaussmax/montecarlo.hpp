#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gaussmax/bounds.hpp"
#include "gaussmax/covariance.hpp"
#include "gaussmax/process.hpp"

namespace gaussmax {

/// A fully reproducible simulation: identical plans produce bit-identical
/// results for any thread count, because replication i draws from its own
/// generator seeded by replication_seed(seed, i).
struct SimulationPlan {
    std::uint64_t seed = 2024;
    long long replications = 100000;
    int threads = 1;
};

/// Empirical tail probability with a 95% Wilson interval.
struct TailEstimate {
    double threshold = 0.0;
    long long hits = 0;
    long long replications = 0;
    double point = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

/// 95% Wilson score interval for hits out of n.
std::pair<double, double> wilson_interval(long long hits, long long n);

/// Estimate Pr{ sample >= threshold } from a sample vector.
TailEstimate estimate_tail(const std::vector<double>& samples, double threshold);

/// One max per replication of a zero-mean Gaussian vector with covariance c,
/// drawn through the triangular factor applied to inverse-CDF normals.
std::vector<double> sample_max(const CovarianceMatrix& c, const SimulationPlan& plan);

/// The full sampled vectors, one row per replication.  Row i of the result
/// is the same vector whose maximum sample_max reports for replication i.
Eigen::MatrixXd sample_vectors(const CovarianceMatrix& c, const SimulationPlan& plan);

/// One max per replication of n iid standard normals (no matrix needed).
std::vector<double> sample_iid_max(long long n, const SimulationPlan& plan);

/// One max per replication over an n-point window of the process, with a
/// stationary warm-up of length K so the window sees full history.
std::vector<double> sample_process_max(const WoldModel& m, long long n_points,
                                       const SimulationPlan& plan);

/// Empirical check of a lower-bound certificate.  FAIL only when the 95%
/// interval lies entirely below the guaranteed tail.
struct LowerBoundCheck {
    LowerBoundCertificate certificate;
    TailEstimate observed;
    double slack = 0.0;  // observed.point - guaranteed_tail
    bool pass = false;
};

LowerBoundCheck certify_lower_bound(const LowerBoundCertificate& cert,
                                    const CovarianceMatrix& c,
                                    const SimulationPlan& plan);
LowerBoundCheck certify_lower_bound_from_samples(const LowerBoundCertificate& cert,
                                                 const std::vector<double>& maxima);

/// Empirical check of the union upper bound at each threshold A.  FAIL on a
/// row only when the interval lies entirely above the bound.
struct UpperBoundRow {
    double threshold = 0.0;
    double bound = 0.0;  // min(1, n (1 - Phi(A)))
    TailEstimate observed;
    double slack = 0.0;  // bound - observed.point
    bool pass = false;
};

struct UpperBoundCheck {
    std::vector<UpperBoundRow> rows;
    bool pass = false;
};

UpperBoundCheck certify_upper_bounds(long long n_vars,
                                     const std::vector<double>& maxima,
                                     const std::vector<double>& thresholds);
UpperBoundCheck certify_upper_bounds(const CovarianceMatrix& c,
                                     const SimulationPlan& plan,
                                     const std::vector<double>& thresholds);

/// Asymptotic Kolmogorov-Smirnov critical value at the given level.
double ks_critical_value(double level, long long n_samples);

/// Goodness of fit of the transformed iid max to the exact Gumbel law,
/// plus a pointwise check of the sandwich
///   G <= -log(n(1 - Phi(M))) <= G + exp(-G)/n   on every sample.
struct CouplingCheck {
    long long n = 0;
    long long replications = 0;
    double ks_statistic = 0.0;
    double ks_critical = 0.0;  // 1% level
    long long sandwich_violations = 0;
    bool pass = false;
};

CouplingCheck gumbel_coupling_test(long long n, const SimulationPlan& plan);

/// Empirical check of the decomposition inequality
///   Pr{ M_n >= A + B } >= Pr{ max_i R_i >= A } min_i Pr{ E_i >= B },  B <= 0,
/// with R_i, E_i reconstructed from the triangular factor per replication.
struct HiInequalityCheck {
    double a = 0.0;
    double b = 0.0;
    TailEstimate lhs;    // Pr{ max X_i >= a + b }
    TailEstimate max_r;  // Pr{ max R_i >= a }
    TailEstimate min_e;  // smallest Pr{ E_i >= b } across i
    int min_e_index = 0;
    double rhs_point = 0.0;
    double slack = 0.0;  // lhs.point - rhs_point
    bool pass = false;
};

HiInequalityCheck certify_hi_inequality(const CovarianceMatrix& c, double a,
                                        double b, const SimulationPlan& plan);

}  // namespace gaussmax
