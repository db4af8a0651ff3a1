#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "gwalk/error.hpp"
#include "gwalk/offspring.hpp"
#include "gwalk/stats.hpp"

using namespace gwalk;

namespace {

// Independent oracle for eta = E W^2: population counts Z_d of small GW
// trees, W approximated by Z_d / m^d at depth d. Uses its own sampling so
// it shares nothing with w_pool.
double eta_brute_force(const offspring_distribution& dist, int depth, int trees,
                       std::uint64_t seed) {
    random_stream rs(seed);
    const double md = std::pow(dist.mean_m(), depth);
    double sum = 0;
    for (int t = 0; t < trees; ++t) {
        std::int64_t z = 1;
        for (int lvl = 0; lvl < depth; ++lvl) {
            std::int64_t next = 0;
            for (std::int64_t i = 0; i < z; ++i) next += dist.sample(degree_mode::plain, rs);
            z = next;
        }
        const double w = double(z) / md;
        sum += w * w;
    }
    return sum / trees;
}

}  // namespace

TEST_CASE("make_distribution computes moments") {
    auto d2 = make_distribution({{2, 1.0}});
    CHECK(d2.mean_m() == doctest::Approx(2.0));
    CHECK(d2.variance() == doctest::Approx(0.0));

    auto d13 = make_distribution({{1, 0.5}, {3, 0.5}});
    CHECK(d13.mean_m() == doctest::Approx(2.0));
    CHECK(d13.variance() == doctest::Approx(1.0));
}

TEST_CASE("make_distribution rejects bad laws") {
    CHECK_THROWS_WITH_AS(make_distribution({{0, 0.1}, {2, 0.9}}), doctest::Contains("P0_POSITIVE"),
                         error);
    CHECK_THROWS_AS(make_distribution({{2, 0.5}}), error);           // sum != 1
    CHECK_THROWS_AS(make_distribution({{1, 1.0}}), error);           // m <= 1
    CHECK_THROWS_AS(make_distribution({{-1, 0.5}, {3, 0.5}}), error);
    CHECK(make_distribution({{0, 0.0}, {2, 1.0}}).mean_m() == doctest::Approx(2.0));
}

TEST_CASE("parse_distribution round trip") {
    auto d = parse_distribution("1:0.5,3:0.5");
    CHECK(d.support().size() == 2);
    CHECK(d.mean_m() == doctest::Approx(2.0));
    CHECK_THROWS_AS(parse_distribution("1;0.5"), error);
    CHECK_THROWS_AS(parse_distribution(""), error);
}

TEST_CASE("sample_degree degenerate law always returns the atom") {
    auto d = make_distribution({{2, 1.0}});
    random_stream rs(7);
    for (int i = 0; i < 100; ++i) {
        CHECK(sample_degree(d, degree_mode::plain, rs) == 2);
        CHECK(sample_degree(d, degree_mode::size_biased, rs) == 2);
        CHECK(sample_degree(d, degree_mode::igwr_root, rs) == 2);
    }
}

TEST_CASE("sample_degree tilted laws match their formulas") {
    auto d = make_distribution({{1, 0.5}, {3, 0.5}});
    // size-biased: P(3) = 3/4; igwr-root: P(1) = 3/8, P(3) = 5/8
    CHECK(d.prob(3, degree_mode::size_biased) == doctest::Approx(0.75));
    CHECK(d.prob(1, degree_mode::igwr_root) == doctest::Approx(3.0 / 8));
    CHECK(d.prob(3, degree_mode::igwr_root) == doctest::Approx(5.0 / 8));

    const std::int64_t n = 100000;
    for (auto mode : {degree_mode::plain, degree_mode::size_biased, degree_mode::igwr_root}) {
        random_stream rs(11 + static_cast<int>(mode));
        std::vector<std::int64_t> counts(2, 0);
        for (std::int64_t i = 0; i < n; ++i)
            ++counts[sample_degree(d, mode, rs) == 1 ? 0 : 1];
        std::vector<double> expected{d.prob(1, mode), d.prob(3, mode)};
        auto rep = chi_square(counts, expected);
        CHECK(rep.p_value > 0.01);
    }
}

TEST_CASE("w_pool deterministic law stays at one") {
    auto d = make_distribution({{2, 1.0}});
    random_stream rs(3);
    auto pool = build_w_pool(d, 2000, 25, rs);
    for (double x : pool.samples) CHECK(x == 1.0);
    CHECK(estimate_eta(d, pool).eta == doctest::Approx(1.0));
}

TEST_CASE("w_pool rounds=0 is the all-ones initialization") {
    auto d = make_distribution({{1, 0.5}, {3, 0.5}});
    random_stream rs(3);
    auto pool = build_w_pool(d, 1000, 0, rs);
    for (double x : pool.samples) CHECK(x == 1.0);
    CHECK(estimate_eta(d, pool).eta == doctest::Approx(1.0));
}

TEST_CASE("w_pool second moment reaches the closed form") {
    auto d = make_distribution({{1, 0.5}, {3, 0.5}});
    // closed form: eta = 1 + Var(d)/(m^2 - m) = 1.5
    const double eta_closed = 1.0 + d.variance() / (d.mean_m() * d.mean_m() - d.mean_m());
    CHECK(eta_closed == doctest::Approx(1.5));
    // cross-check with the brute-force Z_d/m^d oracle
    const double eta_mc = eta_brute_force(d, 10, 20000, 99);
    CHECK(eta_mc == doctest::Approx(eta_closed).epsilon(0.05));

    random_stream rs(17);
    auto pool = build_w_pool(d, 100000, 30, rs);
    auto est = estimate_eta(d, pool);
    CHECK(est.eta == doctest::Approx(1.5).epsilon(0.05 / 1.5));
    CHECK(std::abs(pool.mean() - 1.0) < 5.0 / std::sqrt(double(pool.pool_size())));
}

TEST_CASE("w_pool mean stays at one across laws and rounds") {
    random_stream rs(23);
    for (auto probs : {std::map<int, double>{{2, 1.0}}, std::map<int, double>{{1, .5}, {3, .5}},
                       std::map<int, double>{{1, .2}, {2, .3}, {5, .5}}}) {
        auto d = make_distribution(probs);
        for (int rounds : {0, 5, 30}) {
            auto pool = build_w_pool(d, 20000, rounds, rs);
            const double bound = 5.0 / std::sqrt(double(pool.pool_size()));
            CHECK(std::abs(pool.mean() - 1.0) < bound);
            for (double x : pool.samples) CHECK(x >= 0.0);
        }
    }
}
