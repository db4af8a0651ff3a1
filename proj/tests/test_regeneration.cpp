#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gwalk/error.hpp"
#include "gwalk/regeneration.hpp"
#include "gwalk/stats.hpp"
#include "gwalk/tree.hpp"
#include "gwalk/walk.hpp"

using namespace gwalk;

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

TEST_CASE("detect_regenerations hand trace") {
    std::vector<std::int32_t> depths{0, 1, 0, 1, 2, 1, 2, 3, 4, 3, 4, 5};
    auto times = detect_regenerations(depths);
    CHECK(times == std::vector<std::int64_t>{7, 11});
}

TEST_CASE("strictly increasing depths regenerate at every step") {
    std::vector<std::int32_t> depths(50);
    for (std::size_t i = 0; i < depths.size(); ++i) depths[i] = std::int32_t(i);
    auto times = detect_regenerations(depths);
    CHECK(times.size() == depths.size() - 1);
    for (std::size_t i = 0; i < times.size(); ++i) CHECK(times[i] == std::int64_t(i + 1));
}

TEST_CASE("confirm horizon drops the unconfirmed tail") {
    std::vector<std::int32_t> depths(50);
    for (std::size_t i = 0; i < depths.size(); ++i) depths[i] = std::int32_t(i);
    auto times = detect_regenerations(depths, 10);
    CHECK(times.back() == 39);  // t + horizon must fit inside the record
}

TEST_CASE("regeneration density is positive on the transient walk") {
    tree t(tree_kind::gw, fx().det, fx().det_pool, random_stream(3));
    random_stream rs(5);
    auto rec = run_walk(t, 1.0, 1000000, rs);
    auto times = detect_regenerations(rec.depths);
    CHECK(times.size() >= 10000);
    // depths never dip below the value at each regeneration
    auto blocks = make_blocks(times, rec.depths);
    for (const auto& b : blocks) {
        CHECK(b.dt >= 1);
        CHECK(b.dx >= 1);
        CHECK(b.dx <= b.dt);
    }
}

TEST_CASE("block arithmetic on a two-block toy") {
    std::vector<regeneration_block> blocks(30, regeneration_block{2, 1});
    for (std::size_t i = 0; i < blocks.size(); i += 2) blocks[i] = {4, 2};
    auto est = block_estimates(blocks);
    CHECK(est.v == doctest::Approx(0.5));
    CHECK(est.sigma2 == doctest::Approx(0.0));
}

TEST_CASE("too few blocks is an error") {
    std::vector<regeneration_block> blocks(5, regeneration_block{2, 1});
    CHECK_THROWS_WITH_AS(block_estimates(blocks), doctest::Contains("INSUFFICIENT_BLOCKS"), error);
}

TEST_CASE("binary tree at lambda=1: v=1/3 and sigma2=8/9") {
    // level process is an i.i.d. +-1 walk with up-probability 2/3, so the
    // renewal estimators must reproduce v = 1/3 and 1 - v^2 = 8/9
    tree t(tree_kind::gw, fx().det, fx().det_pool, random_stream(7));
    random_stream rs(11);
    auto rec = run_walk(t, 1.0, 500000, rs);
    auto times = detect_regenerations(rec.depths);
    auto est = block_estimates(make_blocks(times, rec.depths));
    CHECK(est.v == doctest::Approx(1.0 / 3).epsilon(0.03));
    CHECK(est.sigma2 == doctest::Approx(8.0 / 9).epsilon(0.06));
}

TEST_CASE("clt_series normalizes synthetic constant-speed depths") {
    const double v = 0.4, sigma2 = 0.5;
    std::vector<std::int32_t> depths(1001);
    for (std::size_t i = 0; i < depths.size(); ++i)
        depths[i] = std::int32_t(std::lround(v * double(i)));
    auto samples = clt_series(depths, v, sigma2, {100, 400, 1000});
    REQUIRE(samples.size() == 3);
    for (std::size_t i = 0; i < samples.size(); ++i)
        CHECK(std::abs(samples[i]) <= 1.0 / std::sqrt(sigma2 * 100) + 1e-9);
    // out-of-range times are skipped
    CHECK(clt_series(depths, v, sigma2, {1200}).empty());
}

TEST_CASE("normalized series is asymptotically standard normal") {
    const std::int64_t n = 10000;
    const int walks = 400;
    std::vector<double> samples;
    for (int w = 0; w < walks; ++w) {
        tree t(tree_kind::gw, fx().det, fx().det_pool, random_stream(3000 + w));
        random_stream rs(9000 + w);
        auto rec = run_walk(t, 1.0, n, rs);
        auto s = clt_series(rec.depths, 1.0 / 3, 8.0 / 9, {n - 1});
        samples.insert(samples.end(), s.begin(), s.end());
    }
    CHECK(ks_statistic(samples, [](double x) { return normal_cdf(x); }) <= 0.08);
}

TEST_CASE("block law is invariant under shifting the index") {
    tree t(tree_kind::gw, fx().mixed, fx().mixed_pool, random_stream(13));
    random_stream rs(17);
    auto rec = run_walk(t, 1.0, 400000, rs);
    auto blocks = make_blocks(detect_regenerations(rec.depths), rec.depths);
    REQUIRE(blocks.size() >= 200);
    // block lengths are atomic, so compare the two empirical CDFs at the
    // pooled jump points instead of using the continuous-cdf KS helper
    const std::size_t half = blocks.size() / 2;
    std::vector<double> first, second;
    for (std::size_t i = 0; i < half; ++i) first.push_back(double(blocks[i].dt));
    for (std::size_t i = half; i < blocks.size(); ++i) second.push_back(double(blocks[i].dt));
    std::sort(first.begin(), first.end());
    std::sort(second.begin(), second.end());
    std::vector<double> grid = first;
    grid.insert(grid.end(), second.begin(), second.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    double d2 = 0;
    for (double x : grid) {
        const double f1 = double(std::upper_bound(first.begin(), first.end(), x) - first.begin()) /
                          double(first.size());
        const double f2 =
            double(std::upper_bound(second.begin(), second.end(), x) - second.begin()) /
            double(second.size());
        d2 = std::max(d2, std::abs(f1 - f2));
    }
    CHECK(d2 <= 0.05);
}

TEST_CASE("dt moments are stable under doubling the sample") {
    tree t(tree_kind::gw, fx().mixed, fx().mixed_pool, random_stream(19));
    random_stream rs(23);
    auto rec = run_walk(t, 1.0, 800000, rs);
    auto blocks = make_blocks(detect_regenerations(rec.depths), rec.depths);
    REQUIRE(blocks.size() >= 400);
    const std::size_t half = blocks.size() / 2;
    for (int k = 1; k <= 4; ++k) {
        double m_half = 0, m_full = 0;
        for (std::size_t i = 0; i < half; ++i) m_half += std::pow(double(blocks[i].dt), k);
        for (const auto& b : blocks) m_full += std::pow(double(b.dt), k);
        m_half /= double(half);
        m_full /= double(blocks.size());
        CHECK(m_full / m_half > 0.8);
        CHECK(m_full / m_half < 1.25);
    }
}
