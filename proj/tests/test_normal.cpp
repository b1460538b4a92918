#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gaussmax/normal.hpp"
#include "oracle.hpp"

using namespace gaussmax;

namespace {
constexpr double kTail2 = 0.022750131948179207;    // 1 - Phi(2)
constexpr double kLogTail2 = -3.7831843336820319;  // log(1 - Phi(2))
}  // namespace

TEST_CASE("cdf at reference points") {
    CHECK(std_normal_cdf(0.0) == 0.5);
    CHECK(std_normal_cdf(2.0) == doctest::Approx(1.0 - kTail2).epsilon(1e-15));
    for (double x : {0.5, 1.0, 3.0}) {
        CHECK(std_normal_cdf(-x) ==
              doctest::Approx(1.0 - std_normal_cdf(x)).epsilon(1e-14));
    }
}

TEST_CASE("cdf monotone and bounded") {
    double prev = 0.0;
    for (double x = -10.0; x <= 10.0; x += 0.125) {
        const double p = std_normal_cdf(x);
        CHECK(p >= prev);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        prev = p;
    }
}

TEST_CASE("tail matches the high-precision reference") {
    for (double x = 0.0; x <= 8.0; x += 0.25) {
        const double ref = oracle::tail(x);
        CHECK(std::abs(std_normal_tail(x) - ref) <= 1e-13 * ref);
    }
}

TEST_CASE("log tail matches the high-precision reference up to x = 40") {
    CHECK(std_normal_log_tail(0.0) == doctest::Approx(std::log(0.5)).epsilon(1e-15));
    CHECK(std_normal_log_tail(2.0) == doctest::Approx(kLogTail2).epsilon(1e-14));
    for (double x = 0.0; x <= 40.0; x += 0.5) {
        const double ref = oracle::log_tail(x);
        CHECK(std::abs(std_normal_log_tail(x) - ref) <= 1e-10 * std::abs(ref) + 1e-14);
    }
    const double lt10 = std_normal_log_tail(10.0);
    const double phi10 = std_normal_pdf(10.0);
    CHECK(lt10 >= std::log(phi10 / 10.0 * (1.0 - 1.0 / 100.0)));
    CHECK(lt10 <= std::log(phi10 / 10.0 * (1.0 - 1.0 / 100.0 + 3.0 / 1e4)));
}

TEST_CASE("tail and exp(log tail) agree where both are representable") {
    for (double x = 0.0; x <= 30.0; x += 0.5) {
        const double t = std_normal_tail(x);
        if (t > 1e-300) {
            CHECK(std::exp(std_normal_log_tail(x)) ==
                  doctest::Approx(t).epsilon(1e-12));
        }
    }
}

TEST_CASE("quantile reference values and self-consistency") {
    CHECK(std_normal_quantile(0.5) == 0.0);
    CHECK(std_normal_quantile(0.25) ==
          doctest::Approx(-0.67448975019608171).epsilon(1e-14));
    CHECK(std_normal_quantile(0.975) ==
          doctest::Approx(1.9599639845400545).epsilon(1e-14));
    for (double p = 0.01; p < 1.0; p += 0.01) {
        CHECK(std::abs(std_normal_cdf(std_normal_quantile(p)) - p) <= 1e-12);
        CHECK(std_normal_quantile(p) ==
              doctest::Approx(-std_normal_quantile(1.0 - p)).epsilon(1e-11));
    }
}

TEST_CASE("quantile matches the high-precision reference in the deep tails") {
    for (double p : {1e-300, 1e-100, 1e-20, 1e-10, 1e-4, 0.2, 0.8, 1.0 - 1e-10}) {
        const double ref = oracle::quantile(p);
        CHECK(std::abs(std_normal_quantile(p) - ref) <=
              1e-11 * std::max(1.0, std::abs(ref)));
    }
}

TEST_CASE("quantile rejects arguments outside the open interval") {
    CHECK_THROWS_AS(std_normal_quantile(0.0), std::invalid_argument);
    CHECK_THROWS_AS(std_normal_quantile(1.0), std::invalid_argument);
    CHECK_THROWS_AS(std_normal_quantile(-0.5), std::invalid_argument);
}

TEST_CASE("non-finite inputs are rejected") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(std_normal_cdf(inf), std::invalid_argument);
    CHECK_THROWS_AS(std_normal_tail(-inf), std::invalid_argument);
    CHECK_THROWS_AS(std_normal_log_tail(std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(tail_v(inf), std::invalid_argument);
}

TEST_CASE("tail statistic V at reference points") {
    CHECK(tail_v(0.0) == doctest::Approx(-0.45158270528945486).epsilon(1e-14));
    CHECK(tail_v(2.0) == doctest::Approx(5.7284916009547184).epsilon(1e-14));
    CHECK(tail_v(3.0) == doctest::Approx(11.377575376611354).epsilon(1e-14));
    // Fixed point: when 1 - Phi(x) = (2 pi)^{-1/2}, V = 0.
    const double x0 = oracle::quantile(1.0 - 1.0 / std::sqrt(2.0 * 3.14159265358979323846));
    CHECK(std::abs(tail_v(x0)) <= 1e-10);
}

TEST_CASE("tail point packs x, x^2 and V") {
    const TailPoint p = tail_point(1.5);
    CHECK(p.x == 1.5);
    CHECK(p.y == 1.5 * 1.5);
    CHECK(p.v == tail_v(1.5));
}

TEST_CASE("V strictly increasing") {
    double prev = tail_v(-5.0);
    for (double x = -5.0 + 1e-3; x <= 10.0; x += 1e-1) {
        const double v = tail_v(x);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("inversion bounds at reference points") {
    const double v2 = tail_v(2.0);
    const double v3 = tail_v(3.0);
    CHECK(invert_v_lower(v2) == doctest::Approx(3.9830393507900369).epsilon(1e-14));
    CHECK(invert_v_lower(v2) <= 4.0);
    CHECK(invert_v_lower(v3) == doctest::Approx(8.9459310306654124).epsilon(1e-14));
    CHECK(invert_v_lower(v3) <= 9.0);
    CHECK(invert_v_upper(v2) == doctest::Approx(4.2877360094835369).epsilon(1e-14));
    CHECK(invert_v_upper(v2) >= 4.0);
    const double v1 = tail_v(1.0);
    CHECK(invert_v_upper(v1) == doctest::Approx(1.5640110306525071).epsilon(1e-14));
    CHECK(invert_v_upper(v1) >= 1.0);

    const double e = std::exp(1.0);
    CHECK(invert_v_lower(e) == doctest::Approx(e - 1.0).epsilon(1e-15));
    CHECK(invert_v_upper(e) == doctest::Approx(e - 1.0 + 1.0 / e).epsilon(1e-15));

    CHECK_THROWS_AS(invert_v_lower(1.0), std::invalid_argument);
    CHECK_THROWS_AS(invert_v_upper(0.5), std::invalid_argument);
}

TEST_CASE("round trip: x recovered from V lies between the inversion bounds") {
    for (double x = 2.0; x <= 40.0; x += 0.5) {
        const double v = tail_v(x);
        CHECK(std::sqrt(invert_v_lower(v)) <= x * (1.0 + 1e-12));
        CHECK(x <= std::sqrt(invert_v_upper(v)) * (1.0 + 1e-12));
    }
}

TEST_CASE("Mills bracket at reference points") {
    const auto [lo, hi] = mills_bracket(2.0);
    CHECK(lo == doctest::Approx(0.020246612442445519).epsilon(1e-14));
    CHECK(hi == doctest::Approx(0.025308265553056899).epsilon(1e-14));
    CHECK(lo <= kTail2);
    CHECK(kTail2 <= hi);

    const auto [lo1, hi1] = mills_bracket(1.0);
    CHECK(lo1 == 0.0);
    CHECK(hi1 > 0.0);

    const auto [lo10, hi10] = mills_bracket(10.0);
    const double mid = 0.5 * (lo10 + hi10);
    CHECK((hi10 - lo10) / mid < 3.1e-3);

    CHECK_THROWS_AS(mills_bracket(0.5), std::invalid_argument);
}

TEST_CASE("Mills log bracket contains the reference log tail across [1, 40]") {
    for (double x = 1.0; x <= 40.0; x += 0.1) {
        const auto [lo, hi] = mills_log_bracket(x);
        const double ref = oracle::log_tail(x);
        CHECK(lo <= ref);
        CHECK(ref <= hi);
    }
}

TEST_CASE("inequality grid sweep is clean") {
    const GridCheckReport rep = run_inequality_grids();
    CHECK(rep.points == 3901);
    CHECK(rep.lower_violations == 0);
    CHECK(rep.upper_violations == 0);
    CHECK(rep.mills_violations == 0);
    CHECK(rep.monotone_violations == 0);
    CHECK(rep.pass());
}
