#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gaussmax/bounds.hpp"
#include "gaussmax/covariance.hpp"
#include "gaussmax/errors.hpp"
#include "gaussmax/process.hpp"
#include "gaussmax/rng.hpp"

using namespace gaussmax;

TEST_CASE("ar1 model construction") {
    const WoldModel iid = ar1_model(0.0, 1e-6);
    CHECK(iid.psi.empty());
    CHECK(iid.innovation_sd == 1.0);
    CHECK(iid.truncation_tail == 0.0);

    const WoldModel m = ar1_model(0.9, 1e-6);
    CHECK(m.innovation_sd == doctest::Approx(0.43588989435406735).epsilon(1e-14));
    CHECK(m.truncation_tail <= 1e-6);
    CHECK(m.truncation_tail > 0.0);
    // K is minimal: one fewer coefficient would discard more than tail_tol.
    const double k = static_cast<double>(m.psi.size());
    CHECK(std::pow(0.9, 2.0 * (k + 1.0)) <= 1e-6);
    CHECK(std::pow(0.9, 2.0 * k) > 1e-6);
    CHECK(m.psi[0] == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(m.process_variance() + m.truncation_tail ==
          doctest::Approx(1.0).epsilon(1e-9));

    const WoldModel h = ar1_model(0.5, 1e-12);
    CHECK(h.innovation_sd * h.innovation_sd == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(h.psi[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(h.psi[1] == doctest::Approx(0.25).epsilon(1e-15));

    CHECK_THROWS_AS(ar1_model(1.0, 1e-6), std::invalid_argument);
    CHECK_THROWS_AS(ar1_model(0.5, 0.0), std::invalid_argument);
}

TEST_CASE("wold_from_psi normalizes to unit variance") {
    const WoldModel m = wold_from_psi({0.5, 0.25});
    CHECK(m.process_variance() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m.truncation_tail == 0.0);
}

TEST_CASE("subsample residual variance closed forms") {
    const WoldModel m = ar1_model(0.9, 1e-9);
    CHECK(subsample_residual_variance(m, 1) ==
          doctest::Approx(0.19).epsilon(1e-14));
    CHECK(subsample_residual_variance(m, 10) ==
          doctest::Approx(1.0 - std::pow(0.9, 20.0)).epsilon(1e-12));
    CHECK(subsample_residual_variance(m, 40) ==
          doctest::Approx(1.0 - std::pow(0.9, 80.0)).epsilon(1e-9));
    CHECK_THROWS_AS(subsample_residual_variance(m, 0), std::invalid_argument);
}

TEST_CASE("subsample residual variance nondecreasing and bounded by 1") {
    SplitMix64 g(55);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> psi(1 + g.next() % 12);
        for (double& p : psi) {
            p = 2.0 * g.uniform01() - 1.0;
        }
        const WoldModel m = wold_from_psi(psi);
        double prev = 0.0;
        for (long long k = 1; k <= 20; ++k) {
            const double v = subsample_residual_variance(m, k);
            CHECK(v >= prev);
            CHECK(v <= 1.0 + 1e-12);
            prev = v;
        }
    }
}

TEST_CASE("window covariance") {
    const WoldModel m = ar1_model(0.6, 1e-12);
    const CovarianceMatrix one = window_covariance(m, 1, 3);
    CHECK(one.dim() == 1);
    CHECK(one(0, 0) == doctest::Approx(1.0).epsilon(1e-12));

    const CovarianceMatrix three = window_covariance(m, 3, 1);
    CHECK(three(0, 1) == doctest::Approx(0.6).epsilon(1e-10));
    CHECK(three(0, 2) == doctest::Approx(0.36).epsilon(1e-10));
    CHECK(three(1, 1) == doctest::Approx(1.0).epsilon(1e-10));

    const WoldModel m9 = ar1_model(0.9, 1e-12);
    const CovarianceMatrix strided = window_covariance(m9, 2, 5);
    CHECK(strided(0, 1) == doctest::Approx(std::pow(0.9, 5.0)).epsilon(1e-10));

    CHECK_THROWS_AS(window_covariance(m, 2000, 1), resource_error);
    CHECK_THROWS_AS(window_covariance(m, 100, 100000), resource_error);
}

TEST_CASE("window covariance passes matrix invariants across sizes") {
    const WoldModel m = ar1_model(0.8, 1e-10);
    for (int n : {5, 50, 200}) {
        for (long long k : {1LL, 7LL, 20LL}) {
            CHECK_NOTHROW(window_covariance(m, n, k));
        }
    }
}

TEST_CASE("decomposition and process views agree for AR(1)") {
    const WoldModel m = ar1_model(0.7, 1e-14);
    const CovarianceMatrix c = window_covariance(m, 40, 1);
    const auto d = decompose(c);
    for (int i = 1; i < 40; ++i) {
        CHECK(d.residual_vars[i] == doctest::Approx(1.0 - 0.49).epsilon(1e-8));
    }
}

TEST_CASE("stationary lower bound reduces to the iid certificate at rho = 0") {
    const WoldModel iid = ar1_model(0.0, 1e-6);
    const auto stat = stationary_lower_bound(iid, 100, 1, 0.25);
    const auto direct = lower_bound_certificate(100, 0.25, 1.0, 0.0);
    CHECK(stat.threshold == direct.threshold);
    CHECK(stat.n == 100);
    CHECK(stat.sigma == 1.0);
    CHECK(stat.tau == 0.0);
}

TEST_CASE("stationary lower bound closed-form case") {
    const WoldModel m = ar1_model(0.9, 1e-6);
    const auto cert = stationary_lower_bound(m, 10000, 10, 0.25);
    CHECK(cert.n == 1000);
    CHECK(cert.sigma * cert.sigma ==
          doctest::Approx(1.0 - std::pow(0.9, 20.0)).epsilon(1e-12));
    CHECK(cert.tau == doctest::Approx(std::pow(0.9, 10.0)).epsilon(1e-10));
    CHECK(cert.threshold == doctest::Approx(2.5604757442406875).epsilon(1e-12));
}

TEST_CASE("stationary gate reports the largest usable k") {
    CHECK(largest_usable_k(10000, 0.25) == 142);
    CHECK(largest_usable_k(69, 0.25) == 0);

    const WoldModel m = ar1_model(0.9, 1e-6);
    try {
        stationary_lower_bound(m, 10000, 143, 0.25);
        FAIL("expected gate_error");
    } catch (const gate_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("floor(n/k)") != std::string::npos);
        CHECK(msg.find("142") != std::string::npos);
    }
    try {
        stationary_lower_bound(m, 50, 1, 0.25);
        FAIL("expected gate_error");
    } catch (const gate_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("no usable k") != std::string::npos);
        CHECK(msg.find("70") != std::string::npos);
    }
}

TEST_CASE("k sweep has an interior maximum for AR(1) rho = 0.9 at n = 10^4") {
    const WoldModel m = ar1_model(0.9, 1e-6);
    long long best_k = 0;
    double best = -1.0;
    double first = 0.0;
    double last = 0.0;
    for (long long k = 1; k <= 50; ++k) {
        const double t = stationary_lower_bound(m, 10000, k, 0.25).threshold;
        if (k == 1) {
            first = t;
        }
        if (k == 50) {
            last = t;
        }
        if (t > best) {
            best = t;
            best_k = k;
        }
    }
    CHECK(best_k > 1);
    CHECK(best_k < 50);
    CHECK(best > first);
    CHECK(best > last);
}

TEST_CASE("process spec parsing") {
    std::istringstream ar1("# demo\nkind = ar1\nrho = 0.9\ntail_tol = 1e-6\n");
    const WoldModel m = read_process_spec(ar1);
    CHECK(m.innovation_sd == doctest::Approx(std::sqrt(0.19)).epsilon(1e-14));

    std::istringstream psi("kind = psi-list\npsi = 0.5, 0.25\n");
    const WoldModel w = read_process_spec(psi);
    CHECK(w.psi.size() == 2);
    CHECK(w.process_variance() == doctest::Approx(1.0).epsilon(1e-14));

    std::istringstream missing("kind = ar1\n");
    CHECK_THROWS_AS(read_process_spec(missing), std::invalid_argument);

    std::istringstream unknown("kind = ar1\nrho = 0.5\nfoo = 1\n");
    CHECK_THROWS_AS(read_process_spec(unknown), std::invalid_argument);

    std::istringstream no_kind("rho = 0.5\n");
    CHECK_THROWS_AS(read_process_spec(no_kind), std::invalid_argument);

    std::istringstream bad_line("kind\n");
    CHECK_THROWS_AS(read_process_spec(bad_line), std::invalid_argument);

    CHECK_THROWS_AS(read_process_spec_file("/nonexistent/spec.txt"),
                    std::invalid_argument);
}
