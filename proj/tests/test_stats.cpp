#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gwalk/error.hpp"
#include "gwalk/stats.hpp"

using namespace gwalk;

TEST_CASE("ks_statistic at quantile points is tiny") {
    const int n = 100;
    std::vector<double> samples(n);
    for (int i = 0; i < n; ++i) samples[std::size_t(i)] = (i + 0.5) / n;  // uniform quantiles
    CHECK(ks_statistic(samples, [](double x) { return std::clamp(x, 0.0, 1.0); }) <=
          0.5 / n + 1e-12);
}

TEST_CASE("ks_statistic hand example") {
    std::vector<double> samples{0.25, 0.75};
    CHECK(ks_statistic(samples, [](double x) { return std::clamp(x, 0.0, 1.0); }) ==
          doctest::Approx(0.25));
    CHECK_THROWS_WITH_AS(ks_statistic({}, [](double) { return 0.0; }),
                         doctest::Contains("EMPTY_SAMPLES"), error);
}

TEST_CASE("ks_statistic is permutation invariant") {
    random_stream rs(3);
    std::vector<double> samples(500);
    for (auto& x : samples) x = rs.uniform01();
    auto cdf = [](double x) { return std::clamp(x, 0.0, 1.0); };
    const double d1 = ks_statistic(samples, cdf);
    std::reverse(samples.begin(), samples.end());
    CHECK(ks_statistic(samples, cdf) == doctest::Approx(d1));
}

TEST_CASE("half-normal KS obeys the Kolmogorov quantile") {
    // |N(0,1)| samples vs erf(x/sqrt(2)); D <= 1.63/sqrt(n) at 99%
    random_stream rs(5);
    const int n = 10000;
    std::vector<double> samples(n);
    for (auto& x : samples) {
        // Box-Muller from our own uniforms
        const double u1 = std::max(rs.uniform01(), 1e-300), u2 = rs.uniform01();
        x = std::abs(std::sqrt(-2 * std::log(u1)) * std::cos(2 * M_PI * u2));
    }
    CHECK(ks_statistic(samples, [](double x) { return half_normal_cdf(x); }) <=
          1.63 / std::sqrt(double(n)));
}

TEST_CASE("chi_square exact-proportion input gives statistic 0") {
    auto rep = chi_square({750, 250}, {0.75, 0.25});
    CHECK(rep.statistic == doctest::Approx(0.0));
    CHECK(rep.p_value == doctest::Approx(1.0));
    CHECK(rep.pass);
}

TEST_CASE("chi_square 75/25 against the fair coin") {
    auto rep = chi_square({75, 25}, {0.5, 0.5});
    CHECK(rep.statistic == doctest::Approx(25.0));
    // 1 dof: p = erfc(5/sqrt(2)) = 5.73e-7
    CHECK(rep.p_value == doctest::Approx(std::erfc(5.0 / std::sqrt(2.0))).epsilon(1e-6));
    CHECK(rep.p_value == doctest::Approx(5.7e-7).epsilon(0.02));
    CHECK_FALSE(rep.pass);
}

TEST_CASE("chi_square rejects a single category") {
    CHECK_THROWS_WITH_AS(chi_square({100}, {1.0}), doctest::Contains("CATEGORY_MISMATCH"), error);
    CHECK_THROWS_AS(chi_square({50, 50}, {0.5, 0.25, 0.25}), error);
}

TEST_CASE("gamma_q sanity against closed forms") {
    // Q(1/2, x) = erfc(sqrt(x)); Q(1, x) = exp(-x)
    for (double x : {0.1, 0.5, 1.0, 3.0, 12.5}) {
        CHECK(gamma_q(0.5, x) == doctest::Approx(std::erfc(std::sqrt(x))).epsilon(1e-10));
        CHECK(gamma_q(1.0, x) == doctest::Approx(std::exp(-x)).epsilon(1e-10));
    }
}

namespace {

struct fixture {
    offspring_distribution det = make_distribution({{2, 1.0}});
    offspring_distribution mixed = make_distribution({{1, 0.5}, {3, 0.5}});
    w_pool det_pool, mixed_pool;

    fixture() {
        random_stream rs(1);
        det_pool = build_w_pool(det, 1000, 5, rs);
        mixed_pool = build_w_pool(mixed, 20000, 30, rs);
    }
};

fixture& fx() {
    static fixture f;
    return f;
}

}  // namespace

TEST_CASE("igwr invariance: degenerate law is trivially stationary") {
    random_stream rs(7);
    auto rep = igwr_invariance_test(fx().det, fx().det_pool, 3, 2000, rs);
    CHECK(rep.pass);
}

TEST_CASE("igwr invariance holds at k=1 and k=5") {
    for (int k : {1, 5}) {
        random_stream rs(100 + k);
        auto rep = igwr_invariance_test(fx().mixed, fx().mixed_pool, k, 20000, rs, 0.01, 2);
        CHECK(rep.p_value > 0.01);
    }
}

TEST_CASE("igwr invariance meta-run protocol") {
    auto rep = meta_run(10, 0.9, [&](int i) {
        random_stream rs(500 + i);
        return igwr_invariance_test(fx().mixed, fx().mixed_pool, 1, 20000, rs, 0.01, 2);
    });
    CHECK(rep.pass);
}

TEST_CASE("detailed balance within 3 SE, trivial on the degenerate law") {
    random_stream rs(11);
    auto det_rep = detailed_balance_test(fx().det, fx().det_pool, 5000, rs);
    CHECK(det_rep.pass);

    random_stream rs2(13);
    auto rep = detailed_balance_test(fx().mixed, fx().mixed_pool, 200000, rs2, 2);
    CHECK(rep.pass);
    CHECK(rep.statistic <= 3.0);
}

TEST_CASE("occupation near the ray grows sublinearly") {
    random_stream rs(17);
    auto small = occupation_near_ray(fx().det, fx().det_pool, 1.0 / 3, 1000, 40, rs, 2);
    random_stream rs2(19);
    auto large = occupation_near_ray(fx().det, fx().det_pool, 1.0 / 3, 10000, 40, rs2, 2);
    CHECK(small.mean <= 1000.0);
    CHECK(large.ratio < small.ratio);
    // t = 1: at most one step can sit near the ray
    random_stream rs3(23);
    auto tiny = occupation_near_ray(fx().det, fx().det_pool, 1.0 / 3, 1, 10, rs3);
    CHECK(tiny.mean <= 1.0);
}

TEST_CASE("meta_run counts passes") {
    auto rep = meta_run(10, 0.5, [](int i) {
        test_report r;
        r.pass = i % 2 == 0;
        return r;
    });
    CHECK(rep.statistic == doctest::Approx(0.5));
    CHECK(rep.pass);
}
