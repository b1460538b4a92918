#include "gaussmax/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "gaussmax/errors.hpp"
#include "gaussmax/normal.hpp"
#include "gaussmax/rng.hpp"

namespace gaussmax {

namespace {

constexpr double kWilsonZ = 1.959963984540054;  // Phi^{-1}(0.975)
constexpr int kMaxThreads = 64;

double draw_normal(SplitMix64& g) { return std_normal_quantile(g.uniform01()); }

int clamp_threads(const SimulationPlan& plan) {
    if (plan.threads < 1) {
        throw std::invalid_argument("SimulationPlan: requires threads >= 1");
    }
    const long long limit = std::min<long long>(plan.replications, kMaxThreads);
    return static_cast<int>(std::min<long long>(plan.threads, std::max<long long>(limit, 1)));
}

void require_plan(const SimulationPlan& plan, long long min_reps) {
    if (plan.replications < min_reps) {
        throw std::invalid_argument("SimulationPlan: requires replications >= " +
                                    std::to_string(min_reps));
    }
    clamp_threads(plan);
}

// Runs body(replication_index, thread_index) over all replications.  The
// split into thread ranges never changes results: every replication owns
// its own generator and writes only its own slots.
template <typename Body>
void for_each_replication(long long reps, int threads, const Body& body) {
    if (threads <= 1) {
        for (long long i = 0; i < reps; ++i) {
            body(i, 0);
        }
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&body, reps, t, threads] {
            const long long lo = reps * t / threads;
            const long long hi = reps * (t + 1) / threads;
            for (long long i = lo; i < hi; ++i) {
                body(i, t);
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
}

// Sums per-thread integer hit counters; integer addition keeps the result
// independent of the thread split.
long long total(const std::vector<long long>& per_thread) {
    long long s = 0;
    for (long long v : per_thread) {
        s += v;
    }
    return s;
}

TailEstimate make_estimate(double threshold, long long hits, long long reps) {
    TailEstimate est;
    est.threshold = threshold;
    est.hits = hits;
    est.replications = reps;
    est.point = static_cast<double>(hits) / static_cast<double>(reps);
    const auto [lo, hi] = wilson_interval(hits, reps);
    est.ci_low = lo;
    est.ci_high = hi;
    return est;
}

}  // namespace

std::pair<double, double> wilson_interval(long long hits, long long n) {
    if (n < 1 || hits < 0 || hits > n) {
        throw std::invalid_argument("wilson_interval: requires 0 <= hits <= n, n >= 1");
    }
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(hits) / nn;
    const double z2 = kWilsonZ * kWilsonZ;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double halfwidth =
        kWilsonZ * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    // At the degenerate counts the exact endpoints are 0 and 1; pinning them
    // avoids returning the rounding residue of center - halfwidth.
    const double low = hits == 0 ? 0.0 : std::max(0.0, center - halfwidth);
    const double high = hits == n ? 1.0 : std::min(1.0, center + halfwidth);
    return {low, high};
}

TailEstimate estimate_tail(const std::vector<double>& samples, double threshold) {
    if (samples.empty()) {
        throw std::invalid_argument("estimate_tail: requires nonempty samples");
    }
    if (!std::isfinite(threshold)) {
        throw std::invalid_argument("estimate_tail: requires a finite threshold");
    }
    long long hits = 0;
    for (double s : samples) {
        if (s >= threshold) {
            ++hits;
        }
    }
    return make_estimate(threshold, hits, static_cast<long long>(samples.size()));
}

std::vector<double> sample_max(const CovarianceMatrix& c, const SimulationPlan& plan) {
    require_plan(plan, 1);
    const int threads = clamp_threads(plan);
    const int n = c.dim();
    const auto d = decompose(c);

    bool diagonal = true;
    for (int i = 1; i < n && diagonal; ++i) {
        for (int j = 0; j < i; ++j) {
            if (d.lower_factor(i, j) != 0.0) {
                diagonal = false;
                break;
            }
        }
    }

    // Row-major copy of the factor for cache-friendly dot products.
    std::vector<double> lf(static_cast<size_t>(n) * n, 0.0);
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) {
        diag[i] = d.lower_factor(i, i);
        for (int j = 0; j <= i; ++j) {
            lf[static_cast<size_t>(i) * n + j] = d.lower_factor(i, j);
        }
    }

    std::vector<double> maxima(plan.replications);
    std::vector<std::vector<double>> scratch(threads, std::vector<double>(n));
    for_each_replication(plan.replications, threads, [&](long long i, int t) {
        SplitMix64 g(replication_seed(plan.seed, i));
        double m = -std::numeric_limits<double>::infinity();
        if (diagonal) {
            for (int row = 0; row < n; ++row) {
                m = std::max(m, diag[row] * draw_normal(g));
            }
        } else {
            std::vector<double>& z = scratch[t];
            for (int row = 0; row < n; ++row) {
                z[row] = draw_normal(g);
                const double* lrow = lf.data() + static_cast<size_t>(row) * n;
                double s = 0.0;
                for (int j = 0; j <= row; ++j) {
                    s += lrow[j] * z[j];
                }
                m = std::max(m, s);
            }
        }
        maxima[i] = m;
    });
    return maxima;
}

Eigen::MatrixXd sample_vectors(const CovarianceMatrix& c, const SimulationPlan& plan) {
    require_plan(plan, 1);
    const int threads = clamp_threads(plan);
    const int n = c.dim();
    const auto d = decompose(c);

    std::vector<double> lf(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            lf[static_cast<size_t>(i) * n + j] = d.lower_factor(i, j);
        }
    }

    Eigen::MatrixXd vectors(plan.replications, n);
    std::vector<std::vector<double>> scratch(threads, std::vector<double>(n));
    for_each_replication(plan.replications, threads, [&](long long i, int t) {
        SplitMix64 g(replication_seed(plan.seed, i));
        std::vector<double>& z = scratch[t];
        for (int row = 0; row < n; ++row) {
            z[row] = draw_normal(g);
            const double* lrow = lf.data() + static_cast<size_t>(row) * n;
            double s = 0.0;
            for (int j = 0; j <= row; ++j) {
                s += lrow[j] * z[j];
            }
            vectors(i, row) = s;
        }
    });
    return vectors;
}

std::vector<double> sample_iid_max(long long n, const SimulationPlan& plan) {
    if (n < 1) {
        throw std::invalid_argument("sample_iid_max: requires n >= 1");
    }
    require_plan(plan, 1);
    const int threads = clamp_threads(plan);
    std::vector<double> maxima(plan.replications);
    for_each_replication(plan.replications, threads, [&](long long i, int) {
        SplitMix64 g(replication_seed(plan.seed, i));
        double m = -std::numeric_limits<double>::infinity();
        for (long long j = 0; j < n; ++j) {
            m = std::max(m, draw_normal(g));
        }
        maxima[i] = m;
    });
    return maxima;
}

std::vector<double> sample_process_max(const WoldModel& m, long long n_points,
                                       const SimulationPlan& plan) {
    if (n_points < 1) {
        throw std::invalid_argument("sample_process_max: requires n >= 1");
    }
    require_plan(plan, 1);
    const int threads = clamp_threads(plan);
    const long long K = static_cast<long long>(m.psi.size());
    const double sd = m.innovation_sd;

    // psi reversed so each step is a forward contiguous dot product.
    std::vector<double> rev_psi(m.psi.rbegin(), m.psi.rend());

    std::vector<double> maxima(plan.replications);
    std::vector<std::vector<double>> scratch(
        threads, std::vector<double>(static_cast<size_t>(n_points + K)));
    for_each_replication(plan.replications, threads, [&](long long i, int t) {
        SplitMix64 g(replication_seed(plan.seed, i));
        std::vector<double>& z = scratch[t];
        for (long long j = 0; j < n_points + K; ++j) {
            z[j] = draw_normal(g);
        }
        double best = -std::numeric_limits<double>::infinity();
        for (long long step = 0; step < n_points; ++step) {
            double s = 0.0;
            const double* zw = z.data() + step;
            for (long long r = 0; r < K; ++r) {
                s += rev_psi[r] * zw[r];
            }
            best = std::max(best, sd * (z[step + K] + s));
        }
        maxima[i] = best;
    });
    return maxima;
}

LowerBoundCheck certify_lower_bound_from_samples(const LowerBoundCertificate& cert,
                                                 const std::vector<double>& maxima) {
    LowerBoundCheck check;
    check.certificate = cert;
    check.observed = estimate_tail(maxima, cert.threshold);
    check.slack = check.observed.point - cert.guaranteed_tail;
    check.pass = check.observed.ci_high >= cert.guaranteed_tail;
    return check;
}

LowerBoundCheck certify_lower_bound(const LowerBoundCertificate& cert,
                                    const CovarianceMatrix& c,
                                    const SimulationPlan& plan) {
    if (cert.n != c.dim()) {
        throw std::invalid_argument(
            "certify_lower_bound: certificate n does not match matrix dimension");
    }
    require_plan(plan, 100);
    return certify_lower_bound_from_samples(cert, sample_max(c, plan));
}

UpperBoundCheck certify_upper_bounds(long long n_vars,
                                     const std::vector<double>& maxima,
                                     const std::vector<double>& thresholds) {
    if (thresholds.empty()) {
        throw std::invalid_argument("certify_upper_bounds: requires thresholds");
    }
    UpperBoundCheck check;
    check.pass = true;
    for (double a : thresholds) {
        UpperBoundRow row;
        row.threshold = a;
        row.bound = union_upper_tail(n_vars, std_normal_tail(a));
        row.observed = estimate_tail(maxima, a);
        row.slack = row.bound - row.observed.point;
        row.pass = !(row.observed.ci_low > row.bound);
        check.pass = check.pass && row.pass;
        check.rows.push_back(row);
    }
    return check;
}

UpperBoundCheck certify_upper_bounds(const CovarianceMatrix& c,
                                     const SimulationPlan& plan,
                                     const std::vector<double>& thresholds) {
    require_plan(plan, 100);
    return certify_upper_bounds(c.dim(), sample_max(c, plan), thresholds);
}

double ks_critical_value(double level, long long n_samples) {
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("ks_critical_value: requires level in (0,1)");
    }
    if (n_samples < 1) {
        throw std::invalid_argument("ks_critical_value: requires n_samples >= 1");
    }
    return std::sqrt(-0.5 * std::log(level / 2.0) / static_cast<double>(n_samples));
}

CouplingCheck gumbel_coupling_test(long long n, const SimulationPlan& plan) {
    if (n < 1) {
        throw std::invalid_argument("gumbel_coupling_test: requires n >= 1");
    }
    require_plan(plan, 100);
    const auto maxima = sample_iid_max(n, plan);
    const double nn = static_cast<double>(n);

    CouplingCheck check;
    check.n = n;
    check.replications = plan.replications;

    std::vector<double> transformed(maxima.size());
    long long violations = 0;
    for (size_t i = 0; i < maxima.size(); ++i) {
        const double t = std_normal_tail(maxima[i]);
        const double q = -std::log1p(-t);  // -log Phi(m) > 0
        const double g = -std::log(nn * q);
        const double u = -(std::log(nn) + std_normal_log_tail(maxima[i]));
        if (!(g <= u + 1e-12) || !(u <= g + q + 1e-12)) {
            ++violations;
        }
        transformed[i] = g;
    }
    std::sort(transformed.begin(), transformed.end());
    const double count = static_cast<double>(transformed.size());
    double ks = 0.0;
    for (size_t i = 0; i < transformed.size(); ++i) {
        const double f = std::exp(-std::exp(-transformed[i]));
        ks = std::max(ks, f - static_cast<double>(i) / count);
        ks = std::max(ks, static_cast<double>(i + 1) / count - f);
    }
    check.ks_statistic = ks;
    check.ks_critical = ks_critical_value(0.01, plan.replications);
    check.sandwich_violations = violations;
    check.pass = ks <= check.ks_critical && violations == 0;
    return check;
}

HiInequalityCheck certify_hi_inequality(const CovarianceMatrix& c, double a,
                                        double b, const SimulationPlan& plan) {
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw std::invalid_argument("certify_hi_inequality: requires finite a, b");
    }
    if (b > 0.0) {
        throw std::invalid_argument("certify_hi_inequality: requires b <= 0");
    }
    require_plan(plan, 100);
    const int threads = clamp_threads(plan);
    const int n = c.dim();
    const auto d = decompose(c);

    std::vector<double> lf(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            lf[static_cast<size_t>(i) * n + j] = d.lower_factor(i, j);
        }
    }

    std::vector<long long> lhs_hits(threads, 0);
    std::vector<long long> max_r_hits(threads, 0);
    std::vector<std::vector<long long>> e_hits(threads, std::vector<long long>(n, 0));
    std::vector<std::vector<double>> scratch(threads, std::vector<double>(n));

    for_each_replication(plan.replications, threads, [&](long long i, int t) {
        SplitMix64 g(replication_seed(plan.seed, i));
        std::vector<double>& z = scratch[t];
        double max_x = -std::numeric_limits<double>::infinity();
        double max_r = -std::numeric_limits<double>::infinity();
        for (int row = 0; row < n; ++row) {
            z[row] = draw_normal(g);
            const double* lrow = lf.data() + static_cast<size_t>(row) * n;
            double x = 0.0;
            for (int j = 0; j <= row; ++j) {
                x += lrow[j] * z[j];
            }
            const double r = lrow[row] * z[row];
            const double e = x - r;
            max_x = std::max(max_x, x);
            max_r = std::max(max_r, r);
            if (e >= b) {
                ++e_hits[t][row];
            }
        }
        if (max_x >= a + b) {
            ++lhs_hits[t];
        }
        if (max_r >= a) {
            ++max_r_hits[t];
        }
    });

    const long long reps = plan.replications;
    HiInequalityCheck check;
    check.a = a;
    check.b = b;
    check.lhs = make_estimate(a + b, total(lhs_hits), reps);
    check.max_r = make_estimate(a, total(max_r_hits), reps);

    long long best_hits = reps + 1;
    int best_index = 0;
    for (int idx = 0; idx < n; ++idx) {
        long long h = 0;
        for (int t = 0; t < threads; ++t) {
            h += e_hits[t][idx];
        }
        if (h < best_hits) {
            best_hits = h;
            best_index = idx;
        }
    }
    check.min_e = make_estimate(b, best_hits, reps);
    check.min_e_index = best_index;
    check.rhs_point = check.max_r.point * check.min_e.point;
    check.slack = check.lhs.point - check.rhs_point;
    check.pass = !(check.lhs.ci_high < check.max_r.ci_low * check.min_e.ci_low);
    return check;
}

}  // namespace gaussmax
